use nilgc::exterior::{interior, mukai_pair, Blade, Form, GeneralizedSection, Polyvector};
use nilgc::scalars::GaussianRational;
use proptest::prelude::*;

type G = GaussianRational;

const DIM: usize = 6;

fn coeff() -> impl Strategy<Value = G> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| G::from_parts((a, 1), (b, 1)))
}

fn form() -> impl Strategy<Value = Form> {
    prop::collection::vec((0u32..(1 << DIM), coeff()), 0..6)
        .prop_map(|t| Form::from_terms(DIM, t.into_iter().map(|(b, c)| (Blade::from_bits(b), c))))
}

fn homogeneous(k: usize) -> impl Strategy<Value = Form> {
    let blades = nilgc::exterior::blades_of_grade(DIM, k);
    let n = blades.len();
    prop::collection::vec((0..n, coeff()), 0..5)
        .prop_map(move |t| Form::from_terms(DIM, t.into_iter().map(|(i, c)| (blades[i], c))))
}

fn vector() -> impl Strategy<Value = Polyvector> {
    prop::collection::vec(coeff(), DIM).prop_map(|c| Polyvector::from_coords(DIM, 1, &c))
}

fn covector() -> impl Strategy<Value = Form> {
    prop::collection::vec(coeff(), DIM).prop_map(|c| Form::from_coords(DIM, 1, &c))
}

// oracle: expand a ∧ b by concatenating index lists and counting inversions
fn naive_wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::zero(a.dim());
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            let seq: Vec<usize> = ba.indices().into_iter().chain(bb.indices()).collect();
            let mut sorted = seq.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() < seq.len() {
                continue;
            }
            let mut inv = 0;
            for x in 0..seq.len() {
                for y in x + 1..seq.len() {
                    if seq[x] > seq[y] {
                        inv += 1;
                    }
                }
            }
            let c = ca * cb;
            let c = if inv % 2 == 1 { -c } else { c };
            let blade = Blade::from_indices(&sorted).unwrap().unwrap().0;
            out = &out + &Form::from_terms(a.dim(), [(blade, c)]);
        }
    }
    out
}

// oracle: contract one ∂_j at a time, deleting index j with sign (-1)^{position}
fn naive_contract(j: usize, a: &Form) -> Form {
    let mut out = Form::zero(a.dim());
    for (b, c) in a.terms() {
        let idx = b.indices();
        if let Some(pos) = idx.iter().position(|&x| x == j) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != j).collect();
            let c = if pos % 2 == 1 { -c.clone() } else { c.clone() };
            out = &out + &Form::monomial(a.dim(), &rest, c).unwrap();
        }
    }
    out
}

fn naive_interior_vector(v: &Polyvector, a: &Form) -> Form {
    let mut out = Form::zero(a.dim());
    for (b, c) in v.terms() {
        out = &out + &naive_contract(b.indices()[0], a).scale(c);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wedge_matches_naive_expansion(a in form(), b in form()) {
        prop_assert_eq!(&a ^ &b, naive_wedge(&a, &b));
    }

    #[test]
    fn wedge_is_associative(a in form(), b in form(), c in form()) {
        prop_assert_eq!(&(&a ^ &b) ^ &c, &a ^ &(&b ^ &c));
    }

    #[test]
    fn graded_commutativity(
        (p, q, a, b) in (0usize..4, 0usize..4)
            .prop_flat_map(|(p, q)| (Just(p), Just(q), homogeneous(p), homogeneous(q)))
    ) {
        let ab = &a ^ &b;
        let ba = &b ^ &a;
        if (p * q) % 2 == 1 {
            prop_assert_eq!(ab, -ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn interior_matches_naive(v in vector(), a in form()) {
        prop_assert_eq!(interior(&v, &a).unwrap(), naive_interior_vector(&v, &a));
    }

    #[test]
    fn interior_is_antiderivation(v in vector(), a in homogeneous(1), b in form()) {
        let lhs = interior(&v, &(&a ^ &b)).unwrap();
        let rhs = &(&interior(&v, &a).unwrap() ^ &b) - &(&a ^ &interior(&v, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antiderivation_on_two_forms(v in vector(), a in homogeneous(2), b in form()) {
        let lhs = interior(&v, &(&a ^ &b)).unwrap();
        let rhs = &(&interior(&v, &a).unwrap() ^ &b) + &(&a ^ &interior(&v, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bivector_contraction_order(x in vector(), y in vector(), a in form()) {
        let xy = &x ^ &y;
        let two_step = interior(&y, &interior(&x, &a).unwrap()).unwrap();
        prop_assert_eq!(interior(&xy, &a).unwrap(), two_step);
    }

    #[test]
    fn clifford_relation(x in vector(), xi in covector(), a in form()) {
        let s = GeneralizedSection::new(x, xi).unwrap();
        let twice = s.clifford_act(&s.clifford_act(&a).unwrap()).unwrap();
        prop_assert_eq!(twice, a.scale(&s.inner_product(&s).unwrap()));
    }

    #[test]
    fn inner_product_is_symmetric(x in vector(), xi in covector(), y in vector(), eta in covector()) {
        let s = GeneralizedSection::new(x.clone(), xi.clone()).unwrap();
        let t = GeneralizedSection::new(y.clone(), eta.clone()).unwrap();
        prop_assert_eq!(s.inner_product(&t).unwrap(), t.inner_product(&s).unwrap());
        let sx = GeneralizedSection::from_vector(x).unwrap();
        let ty = GeneralizedSection::from_vector(y).unwrap();
        prop_assert!(sx.inner_product(&ty).unwrap().is_zero());
        let sxi = GeneralizedSection::from_covector(xi).unwrap();
        let teta = GeneralizedSection::from_covector(eta).unwrap();
        prop_assert!(sxi.inner_product(&teta).unwrap().is_zero());
    }

    #[test]
    fn mukai_matches_full_expansion(a in form(), b in form()) {
        let mut sa = Form::zero(DIM);
        for (bl, c) in a.terms() {
            let k = bl.grade() as i64;
            let sign = if (k * (k - 1) / 2) % 2 == 0 { c.clone() } else { -c.clone() };
            sa = &sa + &Form::from_terms(DIM, [(*bl, sign)]);
        }
        let expect = naive_wedge(&sa, &b).coeff(Blade::top(DIM));
        prop_assert_eq!(mukai_pair(&a, &b).unwrap(), expect);
    }

    #[test]
    fn conjugation_fixes_blades(a in form()) {
        let c = a.conj();
        prop_assert_eq!(c.num_terms(), a.num_terms());
        prop_assert_eq!(c.conj(), a);
    }
}
