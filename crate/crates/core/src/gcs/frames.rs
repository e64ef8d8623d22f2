use super::spinor::wedge_all;
use crate::error::{Error, Result};
use crate::exterior::{check_dims, Form};
use crate::nilalg::{nilpotent_degree, Filtration, NilAlgebra};
use crate::scalars::linalg::null_space;
use crate::scalars::{GaussianRational, Matrix};

type G = GaussianRational;

fn check_frame(thetas: &[Form]) -> Result<usize> {
    let dim = match thetas.first() {
        Some(t) => t.dim(),
        None => return Ok(0),
    };
    for t in thetas {
        check_dims(dim, t.dim())?;
        t.expect_degree(1, "frame element")?;
    }
    if wedge_all(dim, thetas).is_zero() {
        return Err(Error::DependentForms);
    }
    Ok(dim)
}

// a nontrivial relation Σ c_l θ_l ∈ V_i among the given elements
fn relation_mod(thetas: &[Form], members: &[usize], f: &Filtration, i: usize) -> Option<Vec<G>> {
    let dim = thetas[0].dim();
    let mut cols: Vec<Vec<G>> = members.iter().map(|&l| thetas[l].coords(1)).collect();
    cols.extend(f.space(i).iter().map(|v| v.coords(1).iter().map(|x| -x.clone()).collect()));
    let m = Matrix::from_columns(dim, &cols);
    let null = null_space(&m).expect("rational elimination never reports ambiguity");
    null.into_iter().next().map(|v| v[..members.len()].to_vec())
}

/// Rewrites a frame so that, for every `i`, its elements of nilpotent degree
/// `> i` stay independent modulo `V_i`. The wedge product is unchanged and
/// the output is sorted by nilpotent degree.
pub fn normalize_theta(thetas: &[Form], g: &NilAlgebra) -> Result<Vec<Form>> {
    let dim = check_frame(thetas)?;
    if thetas.is_empty() {
        return Ok(Vec::new());
    }
    check_dims(g.dim(), dim)?;
    let f = g.filtration();
    let mut out = thetas.to_vec();
    let mut degrees: Vec<usize> = out.iter().map(|t| nilpotent_degree(t, &f)).collect::<Result<_>>()?;
    'outer: loop {
        for i in 0..f.nil_index() {
            let members: Vec<usize> = (0..out.len()).filter(|&l| degrees[l] > i).collect();
            if members.is_empty() {
                continue;
            }
            if let Some(c) = relation_mod(&out, &members, &f, i) {
                let (pos, _) = members
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !c[*j].is_zero())
                    .max_by_key(|(_, &l)| degrees[l])
                    .expect("nontrivial relation");
                let p = members[pos];
                let inv = c[pos].inv().expect("nonzero");
                let mut replacement = Form::zero(dim);
                for (j, &l) in members.iter().enumerate() {
                    replacement = &replacement + &out[l].scale(&(&c[j] * &inv));
                }
                out[p] = replacement;
                degrees[p] = nilpotent_degree(&out[p], &f)?;
                continue 'outer;
            }
        }
        break;
    }
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by_key(|&l| degrees[l]);
    let mut sorted: Vec<Form> = order.iter().map(|&l| out[l].clone()).collect();
    let inversions = (0..order.len())
        .flat_map(|a| (a + 1..order.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| order[a] > order[b])
        .count();
    if inversions % 2 == 1 {
        sorted[0] = -&sorted[0];
    }
    debug_assert_eq!(wedge_all(dim, &sorted), wedge_all(dim, thetas));
    Ok(sorted)
}

/// Whether `α` lies in the ideal generated by independent 1-forms, tested as
/// `α ∧ θ_1 ∧ … ∧ θ_m = 0`.
pub fn ideal_membership(alpha: &Form, thetas: &[Form]) -> Result<bool> {
    check_frame(thetas)?;
    let wedge = wedge_all(alpha.dim(), thetas);
    Ok(alpha.wedge(&wedge)?.is_zero())
}

/// `λ` with `b = λ·a`, if both are nonzero and proportional.
pub fn projective_ratio(a: &Form, b: &Form) -> Option<G> {
    let (blade, ca) = a.terms().next()?;
    let lambda = &b.coeff(*blade) / ca;
    if lambda.is_zero() || a.scale(&lambda) != *b {
        return None;
    }
    Some(lambda)
}

/// Equality of spinor lines.
pub fn projectively_equal(a: &Form, b: &Form) -> bool {
    projective_ratio(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::monomial(n, idx, G::one()).unwrap()
    }

    fn lin(n: usize, c: &[(usize, G)]) -> Form {
        c.iter().fold(Form::zero(n), |acc, (k, x)| &acc + &e(n, &[*k]).scale(x))
    }

    fn independent_mod(thetas: &[Form], f: &Filtration) -> bool {
        (0..f.nil_index()).all(|i| {
            let members: Vec<usize> =
                (0..thetas.len()).filter(|&l| nilpotent_degree(&thetas[l], f).unwrap() > i).collect();
            members.is_empty() || relation_mod(thetas, &members, f, i).is_none()
        })
    }

    #[test]
    fn normalized_input_is_unchanged() {
        let g: NilAlgebra = "(0,0,0,12,13,14+23)".parse().unwrap();
        let i = G::i();
        let t = vec![lin(6, &[(1, G::one()), (2, i.clone())]), lin(6, &[(4, G::one()), (5, i)])];
        assert_eq!(normalize_theta(&t, &g).unwrap(), t);
    }

    #[test]
    fn dependency_mod_v2_is_reduced() {
        let g: NilAlgebra = "(0,0,0,12,13,14+23)".parse().unwrap();
        let f = g.filtration();
        let i = G::i();
        // θ2 − θ3 = e5 − e4 + i e1 lies in V_2 while both have degree 3
        let t = vec![
            lin(6, &[(1, G::one()), (2, i.clone())]),
            lin(6, &[(6, G::one()), (5, G::one())]),
            lin(6, &[(6, G::one()), (4, G::one()), (1, -i.clone())]),
        ];
        assert!(!independent_mod(&t, &f));
        let out = normalize_theta(&t, &g).unwrap();
        assert!(independent_mod(&out, &f));
        assert_eq!(wedge_all(6, &out), wedge_all(6, &t));
        let degrees: Vec<usize> = out.iter().map(|t| nilpotent_degree(t, &f).unwrap()).collect();
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(degrees, vec![1, 2, 3]);
    }

    #[test]
    fn reorders_by_degree() {
        let g: NilAlgebra = "(0,0,0,12,13,14+23)".parse().unwrap();
        let t = vec![e(6, &[4]), e(6, &[1])];
        let out = normalize_theta(&t, &g).unwrap();
        assert_eq!(out, vec![-&e(6, &[1]), e(6, &[4])]);
        assert!(normalize_theta(&[e(6, &[1]), e(6, &[1])], &g).is_err());
    }

    #[test]
    fn ideal_examples() {
        assert!(ideal_membership(&e(3, &[1, 2]), &[e(3, &[1])]).unwrap());
        assert!(!ideal_membership(&e(3, &[2, 3]), &[e(3, &[1])]).unwrap());
        let g: NilAlgebra = "(0,0,0,0,13-24,14+23)".parse().unwrap();
        let i = G::i();
        let th = |a: usize, b: usize| lin(6, &[(a, G::one()), (b, i.clone())]);
        let d3 = g.d(&th(5, 6)).unwrap();
        assert_eq!(d3, &th(1, 2) ^ &th(3, 4));
        assert!(ideal_membership(&d3, &[th(1, 2), th(3, 4)]).unwrap());
    }

    #[test]
    fn projective_comparison() {
        let a = &e(2, &[1]) + &e(2, &[2]).scale(&G::i());
        assert_eq!(projective_ratio(&a, &a.scale(&G::from_integer(-3))), Some(G::from_integer(-3)));
        assert!(!projectively_equal(&a, &a.conj()));
        assert!(!projectively_equal(&a, &Form::zero(2)));
    }
}
