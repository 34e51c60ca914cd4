//! Dense exact linear algebra over the rationals.
//!
//! Row reduction uses fraction-free (Bareiss-style) elimination on a
//! denominator-cleared integer copy of the matrix, then normalizes to the
//! reduced row echelon form. This keeps intermediate entries polynomial in
//! the input size instead of exponential, which matters on the larger Gram
//! systems (a few hundred columns).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of [`DenseMatrix::solve`]: inconsistency is a normal outcome,
/// not an error.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// One exact particular solution together with a basis of the null space.
    Solution {
        particular: Vec<Scalar>,
        kernel: Vec<Vec<Scalar>>,
    },
    Inconsistent,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        DenseMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        DenseMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Reduced row echelon form together with the (strictly increasing) list
    /// of pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        // Clear denominators row by row so Bareiss stays in integers.
        let mut int_rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            let row = (0..self.cols)
                .map(|j| {
                    let e = &self[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            int_rows.push(row);
        }

        // Fraction-free forward elimination.
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev_pivot = BigInt::one();
        let mut r = 0usize;
        for col in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !int_rows[i][col].is_zero()) else {
                continue;
            };
            int_rows.swap(r, pr);
            let pivot = int_rows[r][col].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                if i < r {
                    // Rows above already carry their own pivot scale; eliminate
                    // without the Bareiss division (entries stay integral and
                    // the final normalization rescales each row anyway).
                    if int_rows[i][col].is_zero() {
                        continue;
                    }
                    let factor = int_rows[i][col].clone();
                    let scale = pivot.clone();
                    for j in 0..self.cols {
                        int_rows[i][j] = &int_rows[i][j] * &scale - &factor * &int_rows[r][j];
                    }
                } else {
                    // The two-step fraction-free update applies to every row
                    // below the pivot, including rows with a zero pivot-column
                    // entry; skipping those would break the exact division at
                    // the next step.
                    let factor = int_rows[i][col].clone();
                    for j in 0..self.cols {
                        let v = &int_rows[i][j] * &pivot - &factor * &int_rows[r][j];
                        debug_assert!((&v % &prev_pivot).is_zero(), "bareiss division not exact");
                        int_rows[i][j] = &v / &prev_pivot;
                    }
                }
            }
            pivots.push(col);
            prev_pivot = pivot;
            r += 1;
            if r == self.rows {
                break;
            }
        }

        // Normalize each pivot row to a leading 1.
        let mut out = DenseMatrix::zero(self.rows, self.cols);
        for (i, &col) in pivots.iter().enumerate() {
            let lead = BigRational::from_integer(int_rows[i][col].clone());
            for j in 0..self.cols {
                let v = BigRational::from_integer(int_rows[i][j].clone()) / lead.clone();
                out[(i, j)] = scalar_from_ratio(v);
            }
        }
        (out, pivots)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self * x = b` exactly.
    pub fn solve(&self, b: &[Scalar]) -> SolveOutcome {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = DenseMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return SolveOutcome::Inconsistent;
        }
        let mut particular = vec![Scalar::zero(); self.cols];
        for (i, &col) in pivots.iter().enumerate() {
            particular[col] = rref[(i, self.cols)].clone();
        }
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (i, &col) in pivots.iter().enumerate() {
                v[col] = -rref[(i, free)].clone();
            }
            kernel.push(v);
        }
        SolveOutcome::Solution { particular, kernel }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !x[j].is_zero() {
                        acc += &self[(i, j)] * &x[j];
                    }
                }
                acc
            })
            .collect()
    }
}

fn scalar_from_ratio(r: BigRational) -> Scalar {
    Scalar::from_ratio(r)
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identity_is_its_own_rref() {
        let m = DenseMatrix::identity(2);
        let (r, p) = m.rref();
        assert_eq!(r, m);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rank_one_case() {
        let m = DenseMatrix::from_rows(vec![vec![s(2), s(4)], vec![s(1), s(2)]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r[(0, 0)], s(1));
        assert_eq!(r[(0, 1)], s(2));
        assert_eq!(r[(1, 0)], s(0));
        assert_eq!(r[(1, 1)], s(0));
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(DenseMatrix::zero(3, 5).rank(), 0);
        assert_eq!(DenseMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn solve_identity() {
        let m = DenseMatrix::identity(3);
        let b = vec![s(5), s(-2), Scalar::frac(1, 3)];
        match m.solve(&b) {
            SolveOutcome::Solution { particular, kernel } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
            }
            SolveOutcome::Inconsistent => panic!("identity system must be consistent"),
        }
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = DenseMatrix::from_rows(vec![vec![s(1), s(1)], vec![s(2), s(2)]]);
        match m.solve(&[s(1), s(3)]) {
            SolveOutcome::Inconsistent => {}
            _ => panic!("expected inconsistent"),
        }
    }

    #[test]
    fn solve_with_kernel_is_exact() {
        let m = DenseMatrix::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(7)]]);
        let b = vec![s(1), s(3)];
        match m.solve(&b) {
            SolveOutcome::Solution { particular, kernel } => {
                assert_eq!(m.mul_vec(&particular), b);
                assert_eq!(kernel.len(), 1);
                for k in &kernel {
                    assert!(m.mul_vec(k).iter().all(Scalar::is_zero));
                }
            }
            SolveOutcome::Inconsistent => panic!("system is consistent"),
        }
    }

    #[test]
    fn rref_is_idempotent_and_rank_transposes() {
        let m = DenseMatrix::from_rows(vec![
            vec![Scalar::frac(1, 2), s(3), s(0), s(1)],
            vec![s(2), s(12), s(0), s(4)],
            vec![s(0), s(0), s(5), Scalar::frac(-1, 3)],
        ]);
        let (r1, p1) = m.rref();
        let (r2, p2) = r1.rref();
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
        assert_eq!(m.rank(), m.transpose().rank());
    }
}
