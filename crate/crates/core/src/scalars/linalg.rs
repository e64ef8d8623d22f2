//! Exact linear algebra over a [`Scalar`] ring.
//!
//! Elimination only ever divides by pivots the ring certifies invertible
//! (every nonzero element of ℚ(i); only nonzero constants among
//! polynomials). A column whose only candidates are parameter-dependent
//! reports [`Error::PivotAmbiguous`] so the caller can case-split.

use super::{GaussianRational, Pivot, Scalar};
use crate::error::Error;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, S::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from its columns; `rows` is needed for the
    /// zero-column case.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: S) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + &(a.clone() * b))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows);
        let mut out: Matrix<S> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + &(a.clone() * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row-echelon form, computed in place. Returns the pivot columns.
/// Only the first `pivot_cols` columns are eligible as pivots (the rest are
/// carried along, e.g. an augmented right-hand side).
fn rref<S: Scalar>(m: &mut Matrix<S>, pivot_cols: usize) -> Result<Vec<usize>, Error> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m.rows {
            break;
        }
        let chosen = (r..m.rows).find_map(|i| match m.get(i, c).pivot() {
            Pivot::Invertible(inv) => Some((i, inv)),
            _ => None,
        });
        // a column with only parameter-dependent entries stays free; the
        // final sweep rejects the system if some row still depends on it
        let Some((pr, inv)) = chosen else {
            continue;
        };
        m.swap_rows(r, pr);
        for j in 0..m.cols {
            if !m.get(r, j).is_zero() {
                let v = m.get(r, j).clone() * &inv;
                m.set(r, j, v);
            }
        }
        for i in 0..m.rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in 0..m.cols {
                let pj = m.get(r, j);
                if pj.is_zero() {
                    continue;
                }
                let v = m.get(i, j).clone() - &(factor.clone() * pj);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    for i in r..m.rows {
        if let Some(c) = (0..pivot_cols).find(|&c| !m.get(i, c).is_zero()) {
            return Err(Error::PivotAmbiguous { column: c });
        }
    }
    Ok(pivots)
}

/// Solution set `particular + span(null_basis)` of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<S> {
    pub particular: Vec<S>,
    pub null_basis: Vec<Vec<S>>,
}

/// Solves `matrix · x = rhs` (homogeneous when `rhs` is `None`).
pub fn solve_linear<S: Scalar>(matrix: &Matrix<S>, rhs: Option<&[S]>) -> Result<AffineSolution<S>, Error> {
    if let Some(b) = rhs {
        if b.len() != matrix.rows {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows,
                found: b.len(),
            });
        }
    }
    if let Some(keep) = independent_rows_mod_p(matrix).filter(|k| k.len() < matrix.rows) {
        // the kept rows are independent over ℚ(i) too; if their null space
        // kills every row it is the full null space and the reduced forms agree
        let mut sub = Matrix::zeros(keep.len(), matrix.cols);
        for (r, &i) in keep.iter().enumerate() {
            for j in 0..matrix.cols {
                sub.set(r, j, matrix.get(i, j).clone());
            }
        }
        let sub_rhs: Option<Vec<S>> = rhs.map(|b| keep.iter().map(|&i| b[i].clone()).collect());
        let sol = solve_dense(&sub, sub_rhs.as_deref())?;
        if sol.null_basis.iter().all(|v| matrix.mul_vec(v).iter().all(S::is_zero)) {
            return match rhs {
                Some(b) if matrix.mul_vec(&sol.particular) != b => Err(Error::NoSolution),
                _ => Ok(sol),
            };
        }
    }
    solve_dense(matrix, rhs)
}

/// Rows forming a basis of the row space mod p, or `None` if some entry
/// has no residue.
fn independent_rows_mod_p<S: Scalar>(matrix: &Matrix<S>) -> Option<Vec<usize>> {
    use super::gaussian::{mul_mod, pow_mod, RESIDUE_PRIME as P};
    let cols = matrix.cols;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for i in 0..matrix.rows {
        let mut row = matrix.row(i).iter().map(S::residue).collect::<Option<Vec<u64>>>()?;
        for (c, b) in &basis {
            let f = row[*c];
            if f != 0 {
                for j in 0..cols {
                    row[j] = (row[j] + P - mul_mod(f, b[j])) % P;
                }
            }
        }
        if let Some(c) = row.iter().position(|&x| x != 0) {
            let inv = pow_mod(row[c], P - 2);
            let row: Vec<u64> = row.iter().map(|&x| mul_mod(x, inv)).collect();
            for (_, b) in basis.iter_mut() {
                let f = b[c];
                if f != 0 {
                    for j in 0..cols {
                        b[j] = (b[j] + P - mul_mod(f, row[j])) % P;
                    }
                }
            }
            basis.push((c, row));
            keep.push(i);
            if keep.len() == cols {
                break;
            }
        }
    }
    Some(keep)
}

fn solve_dense<S: Scalar>(matrix: &Matrix<S>, rhs: Option<&[S]>) -> Result<AffineSolution<S>, Error> {
    let (rows, cols) = (matrix.rows, matrix.cols);
    if let Some(b) = rhs {
        if b.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: b.len(),
            });
        }
    }
    let mut aug = Matrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug.set(i, j, matrix.get(i, j).clone());
        }
        if let Some(b) = rhs {
            aug.set(i, cols, b[i].clone());
        }
    }
    let pivots = rref(&mut aug, cols)?;
    for i in pivots.len()..rows {
        match aug.get(i, cols).pivot() {
            Pivot::Zero => {}
            Pivot::Invertible(_) => return Err(Error::NoSolution),
            Pivot::Ambiguous => return Err(Error::PivotAmbiguous { column: cols }),
        }
    }
    let mut particular = vec![S::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(r, cols).clone();
    }
    let mut null_basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[f] = S::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -aug.get(r, f).clone();
        }
        null_basis.push(v);
    }
    Ok(AffineSolution {
        particular,
        null_basis,
    })
}

pub fn null_space<S: Scalar>(matrix: &Matrix<S>) -> Result<Vec<Vec<S>>, Error> {
    Ok(solve_linear(matrix, None)?.null_basis)
}

pub fn rank<S: Scalar>(matrix: &Matrix<S>) -> Result<usize, Error> {
    Ok(matrix.cols - null_space(matrix)?.len())
}

/// Canonical (reduced row-echelon) basis of the span of `vectors`.
pub fn span_basis<S: Scalar>(vectors: &[Vec<S>], len: usize) -> Result<Vec<Vec<S>>, Error> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let mut m = Matrix::from_rows(vectors.to_vec());
    assert_eq!(m.cols, len);
    let pivots = rref(&mut m, len)?;
    Ok((0..pivots.len()).map(|r| m.row(r).to_vec()).collect())
}

/// Whether `target` lies in the span of `vectors`.
pub fn in_span<S: Scalar>(vectors: &[Vec<S>], target: &[S]) -> Result<bool, Error> {
    let m = Matrix::from_columns(target.len(), vectors);
    match solve_linear(&m, Some(target)) {
        Ok(_) => Ok(true),
        Err(Error::NoSolution) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn inverse<S: Scalar>(matrix: &Matrix<S>) -> Result<Matrix<S>, Error> {
    let n = matrix.rows;
    if matrix.cols != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: matrix.cols,
        });
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, matrix.get(i, j).clone());
        }
        aug.set(i, n + i, S::one());
    }
    let pivots = rref(&mut aug, n)?;
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Ok(out)
}

/// Determinant by fraction-free (Bareiss) elimination: every division is
/// exact and intermediate entries are minors of the input.
pub fn determinant(matrix: &Matrix<GaussianRational>) -> GaussianRational {
    let n = matrix.rows;
    assert_eq!(n, matrix.cols, "determinant of a non-square matrix");
    if n == 0 {
        return GaussianRational::one();
    }
    let mut m = matrix.clone();
    let mut sign = GaussianRational::one();
    let mut prev = GaussianRational::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return GaussianRational::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                m.set(i, j, &num / &prev);
            }
            m.set(i, k, GaussianRational::zero());
        }
        prev = m.get(k, k).clone();
    }
    &sign * m.get(n - 1, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ParamPolynomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
        GaussianRational::from_parts(
            (rng.gen_range(-6..=6), rng.gen_range(1..=4)),
            (rng.gen_range(-6..=6), rng.gen_range(1..=4)),
        )
    }

    // Independent oracle: Laplace expansion along the first row.
    fn cofactor_det(m: &Matrix<GaussianRational>) -> GaussianRational {
        let n = m.rows();
        if n == 0 {
            return g(1);
        }
        let mut acc = GaussianRational::zero();
        for j in 0..n {
            let minor = Matrix::from_rows(
                (1..n)
                    .map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect())
                    .collect(),
            );
            let term = m.get(0, j) * &cofactor_det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn replace_column(m: &Matrix<GaussianRational>, j: usize, col: &[GaussianRational]) -> Matrix<GaussianRational> {
        let mut out = m.clone();
        for (i, x) in col.iter().enumerate() {
            out.set(i, j, x.clone());
        }
        out
    }

    #[test]
    fn identity_system() {
        let sol = solve_linear(&Matrix::identity(3), Some(&[g(1), g(2), g(3)])).unwrap();
        assert_eq!(sol.particular, vec![g(1), g(2), g(3)]);
        assert!(sol.null_basis.is_empty());
    }

    #[test]
    fn single_row_kernel() {
        let m = Matrix::from_rows(vec![vec![g(1), g(1)]]);
        let sol = solve_linear(&m, Some(&[g(0)])).unwrap();
        assert_eq!(sol.particular, vec![g(0), g(0)]);
        assert_eq!(sol.null_basis, vec![vec![g(-1), g(1)]]);
        // (1,-1) spans the same line
        assert_eq!(m.mul_vec(&[g(1), g(-1)]), vec![g(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let m = Matrix::from_rows(vec![vec![g(1), g(1)], vec![g(2), g(2)]]);
        assert!(matches!(solve_linear(&m, Some(&[g(1), g(3)])), Err(Error::NoSolution)));
    }

    #[test]
    fn matches_cramer_on_random_invertible_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 10 {
            let m = Matrix::from_rows((0..5).map(|_| (0..5).map(|_| random_gaussian(&mut rng)).collect()).collect());
            let det = cofactor_det(&m);
            if det.is_zero() {
                continue;
            }
            let b: Vec<_> = (0..5).map(|_| random_gaussian(&mut rng)).collect();
            let sol = solve_linear(&m, Some(&b)).unwrap();
            assert!(sol.null_basis.is_empty());
            for j in 0..5 {
                let xj = &cofactor_det(&replace_column(&m, j, &b)) / &det;
                assert_eq!(sol.particular[j], xj);
            }
            checked += 1;
        }
    }

    #[test]
    fn bareiss_matches_cofactor_and_solvability() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=6 {
            for trial in 0..4 {
                let mut rows: Vec<Vec<GaussianRational>> =
                    (0..n).map(|_| (0..n).map(|_| random_gaussian(&mut rng)).collect()).collect();
                if trial == 3 && n >= 2 {
                    rows[n - 1] = rows[0].clone();
                }
                let m = Matrix::from_rows(rows);
                let det = determinant(&m);
                assert_eq!(det, cofactor_det(&m));
                let b: Vec<_> = (0..n).map(|_| random_gaussian(&mut rng)).collect();
                let unique = solve_linear(&m, Some(&b)).map(|s| s.null_basis.is_empty()).unwrap_or(false);
                assert_eq!(unique, !det.is_zero());
            }
        }
    }

    #[test]
    fn row_selection_agrees_with_full_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..40 {
            let (rows, cols, rank) = (rng.gen_range(4..=14), rng.gen_range(2..=7), rng.gen_range(0..=3));
            let basis: Vec<Vec<GaussianRational>> = (0..rank).map(|_| (0..cols).map(|_| random_gaussian(&mut rng)).collect()).collect();
            let mut m = Matrix::zeros(rows, cols);
            for i in 0..rows {
                for b in &basis {
                    let c = random_gaussian(&mut rng);
                    for j in 0..cols {
                        let v = m.get(i, j) + &(&c * &b[j]);
                        m.set(i, j, v);
                    }
                }
            }
            if trial % 10 == 0 {
                // no residue: forces the plain path
                m.set(0, 0, GaussianRational::from_ratio(1, crate::scalars::gaussian::RESIDUE_PRIME as i64));
            }
            let b: Vec<_> = if trial % 2 == 0 {
                m.mul_vec(&(0..cols).map(|_| random_gaussian(&mut rng)).collect::<Vec<_>>())
            } else {
                (0..rows).map(|_| random_gaussian(&mut rng)).collect()
            };
            assert_eq!(solve_linear(&m, None).unwrap(), solve_dense(&m, None).unwrap());
            match (solve_linear(&m, Some(&b)), solve_dense(&m, Some(&b))) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(Error::NoSolution), Err(Error::NoSolution)) => {}
                other => panic!("paths disagree: {other:?}"),
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![g(2), GaussianRational::i()],
            vec![g(1), g(3)],
        ]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert!(matches!(inverse(&singular), Err(Error::Singular)));
    }

    #[test]
    fn polynomial_systems_with_constant_pivots() {
        let p = |s: &str| s.parse::<ParamPolynomial>().unwrap();
        let m = Matrix::from_rows(vec![vec![p("1"), p("t")], vec![p("0"), p("2")]]);
        let sol = solve_linear(&m, Some(&[p("t"), p("4")])).unwrap();
        assert_eq!(m.mul_vec(&sol.particular), vec![p("t"), p("4")]);
        assert_eq!(sol.particular, vec![p("-t"), p("2")]);

        let amb = Matrix::from_rows(vec![vec![p("t"), p("1")]]);
        let sol = solve_linear(&amb, None).unwrap();
        assert_eq!(sol.null_basis.len(), 1);
        let amb = Matrix::from_rows(vec![vec![p("t")]]);
        assert!(matches!(solve_linear(&amb, Some(&[p("1")])), Err(Error::PivotAmbiguous { .. })));
    }

    #[test]
    fn span_basis_is_canonical() {
        let v = vec![vec![g(2), g(4), g(0)], vec![g(1), g(2), g(0)], vec![g(0), g(0), g(5)]];
        let b = span_basis(&v, 3).unwrap();
        assert_eq!(b, vec![vec![g(1), g(2), g(0)], vec![g(0), g(0), g(1)]]);
        assert_eq!(rank(&Matrix::from_rows(v)).unwrap(), 2);
    }
}
