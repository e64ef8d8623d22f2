use nilgc::exterior::{blades_of_grade, Form, Polyvector};
use nilgc::gcs::{check_gcs, projectively_equal};
use nilgc::nilalg::NilAlgebra;
use nilgc::scalars::GaussianRational;
use nilgc::transforms::{b_transform, beta_transform, schouten};
use proptest::prelude::*;

type G = GaussianRational;

const DIM: usize = 6;

fn algebra() -> NilAlgebra {
    "(0,0,12,13,23,14+25)".parse().unwrap()
}

fn coeff() -> impl Strategy<Value = G> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| G::from_parts((a, 1), (b, 1)))
}

fn vector() -> impl Strategy<Value = Polyvector> {
    prop::collection::vec(coeff(), DIM).prop_map(|c| Polyvector::from_coords(DIM, 1, &c))
}

fn polyvector(k: usize) -> impl Strategy<Value = Polyvector> {
    let n = blades_of_grade(DIM, k).len();
    prop::collection::vec(coeff(), n).prop_map(move |c| Polyvector::from_coords(DIM, k, &c))
}

fn graded() -> impl Strategy<Value = (usize, Polyvector)> {
    (1usize..=2).prop_flat_map(|k| (Just(k), polyvector(k)))
}

// oracle: the four-term formula evaluated on arbitrary (non-basis) vectors
fn four_term(x: &[Polyvector; 2], y: &[Polyvector; 2], g: &NilAlgebra) -> Polyvector {
    let b = |a: &Polyvector, c: &Polyvector| g.lie_bracket(a, c).unwrap();
    let t1 = &(&b(&x[0], &y[0]) ^ &x[1]) ^ &y[1];
    let t2 = &(&b(&x[0], &y[1]) ^ &x[1]) ^ &y[0];
    let t3 = &(&b(&x[1], &y[0]) ^ &x[0]) ^ &y[1];
    let t4 = &(&b(&x[1], &y[1]) ^ &x[0]) ^ &y[0];
    &(&(&t1 - &t2) - &t3) + &t4
}

fn closed_two_forms(g: &NilAlgebra) -> Vec<Form> {
    nilgc::cohomology::closed_basis(g, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schouten_matches_four_term_oracle(a in vector(), b in vector(), c in vector(), d in vector()) {
        let g = algebra();
        let got = schouten(&(&a ^ &b), &(&c ^ &d), &g).unwrap();
        prop_assert_eq!(got, four_term(&[a, b], &[c, d], &g));
    }

    #[test]
    fn schouten_self_bracket_identity(x in vector(), y in vector()) {
        let g = algebra();
        let xy = &x ^ &y;
        let expected = (&(&g.lie_bracket(&x, &y).unwrap() ^ &x) ^ &y).scale(&G::from_integer(2));
        prop_assert_eq!(schouten(&xy, &xy, &g).unwrap(), expected);
    }

    #[test]
    fn schouten_graded_antisymmetry((p, a) in graded(), (q, b) in graded()) {
        let g = algebra();
        let ab = schouten(&a, &b, &g).unwrap();
        let ba = schouten(&b, &a, &g).unwrap();
        prop_assert_eq!(ab, (-&ba).scale(&sign_pair(p, q)));
    }

    #[test]
    fn schouten_graded_jacobi((p, a) in graded(), (q, b) in graded(), (r, c) in graded()) {
        let g = algebra();
        let s = |x: &Polyvector, y: &Polyvector| schouten(x, y, &g).unwrap();
        let total = &(&s(&a, &s(&b, &c)).scale(&sign_pair(p, r))
            + &s(&b, &s(&c, &a)).scale(&sign_pair(q, p)))
            + &s(&c, &s(&a, &b)).scale(&sign_pair(r, q));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn b_fields_compose_additively(x in prop::collection::vec(-2i64..=2, 8), y in prop::collection::vec(-2i64..=2, 8)) {
        let g = algebra();
        let basis = closed_two_forms(&g);
        let combo = |c: &[i64]| basis.iter().zip(c).fold(Form::zero(DIM), |acc, (f, k)| &acc + &f.scale(&G::from_integer(*k)));
        let (b1, b2) = (combo(&x), combo(&y));
        let rho: Form = nilgc::nilalg::parse_form("(1+i2)(4+i5)exp i(36)", &g).unwrap();
        let once = b_transform(&rho, &(&b1 + &b2), &g).unwrap();
        let twice = b_transform(&b_transform(&rho, &b1, &g).unwrap(), &b2, &g).unwrap();
        prop_assert_eq!(&once, &twice);
        let scaled = b_transform(&rho.scale(&G::from_parts((2, 1), (-1, 1))), &b1, &g).unwrap();
        prop_assert!(projectively_equal(&b_transform(&rho, &b1, &g).unwrap(), &scaled));
    }

    #[test]
    fn beta_transform_is_a_finite_exponential(a in vector(), b in vector(), c in vector(), d in vector()) {
        // e^{β1} e^{β2} = e^{β1+β2} since interior products by bivectors commute
        let rho: Form = nilgc::nilalg::parse_form("(1+i2)(3+i4)(5+i6)", &algebra()).unwrap();
        let b1 = &a ^ &b;
        let b2 = &c ^ &d;
        let lhs = beta_transform(&beta_transform(&rho, &b2).unwrap(), &b1).unwrap();
        prop_assert_eq!(lhs, beta_transform(&rho, &(&b1 + &b2)).unwrap());
    }
}

// (−1)^{(p−1)(q−1)}
fn sign_pair(p: usize, q: usize) -> G {
    if (p - 1) * (q - 1) % 2 == 0 {
        G::one()
    } else {
        -G::one()
    }
}

#[test]
fn b_transform_preserves_verdict() {
    let g = algebra();
    let rho: Form = nilgc::nilalg::parse_form("(1+i2)exp(43-56+i(46-35))", &g).unwrap();
    let before = check_gcs(&rho, &g).unwrap();
    for b in closed_two_forms(&g) {
        let after = check_gcs(&b_transform(&rho, &b, &g).unwrap(), &g).unwrap();
        assert_eq!(after.verdict, before.verdict);
        assert_eq!(after.kind, before.kind);
    }
}
