//! Dense exact matrices over the Gaussian rationals, with the minor
//! machinery everything else is built on.
//!
//! Two independent determinant routes coexist on purpose: [`RationalMatrix::minor`]
//! runs fraction-free (Bareiss) elimination on the selected submatrix, while
//! [`MinorTable`] fills every minor at once by Laplace expansion from the
//! previous order. Tests hold the two routes equal.

use std::fmt;

use ndarray::Array2;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};
use crate::varset::{binomial, k_subsets, subset_rank, VarSet, MAX_VARS};

/// Row-major exact matrix, dimensions ≤ 16.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(RationalMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Result<Self> {
        check_dims(rows, cols)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        check_dims(nrows, ncols)?;
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(
                    "ragged rows in matrix constructor".into(),
                ));
            }
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Small integer literal matrices for tests and examples.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| GaussianRational::from_integer(v))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.is_real())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        RationalMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
            .expect("dims already validated")
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = GaussianRational::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix addition shapes".into()));
        }
        RationalMatrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c) + other.get(r, c)
        })
    }

    /// Vertical stack: self on top of other.
    pub fn stack_on_top_of(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("stack column counts".into()));
        }
        check_dims(self.rows + other.rows, self.cols)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GaussianRational::one());
        }
        let mut m: Vec<Vec<GaussianRational>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = GaussianRational::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(pivot_row) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(GaussianRational::zero());
                };
                m.swap(k, pivot_row);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.checked_div(&prev).expect("Bareiss pivot nonzero");
                }
                m[i][k] = GaussianRational::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if sign { -det } else { det })
    }

    /// Exact determinant of the submatrix selected by 1-based row and
    /// column sets of equal nonzero size.
    pub fn minor(&self, rowset: VarSet, colset: VarSet) -> Result<GaussianRational> {
        let k = rowset.len();
        if k != colset.len() || k == 0 {
            return Err(Error::DimensionMismatch(format!(
                "minor with row set {rowset:?} and column set {colset:?}"
            )));
        }
        if rowset.max_member().unwrap_or(0) > self.rows
            || colset.max_member().unwrap_or(0) > self.cols
        {
            return Err(Error::IndexOutOfRange(format!(
                "minor indices {rowset:?}, {colset:?} outside a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let rows: Vec<usize> = rowset.iter().collect();
        let cols: Vec<usize> = colset.iter().collect();
        let sub = RationalMatrix::from_fn(k, k, |r, c| self.get(rows[r] - 1, cols[c] - 1).clone())?;
        sub.det()
    }

    /// Exact rank by Gaussian elimination over the Gaussian rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<GaussianRational>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot_row);
            let pivot = m[rank][col].clone();
            for r in rank + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].checked_div(&pivot).expect("pivot nonzero");
                for c in col..self.cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(!self.det()?.is_zero())
    }

    /// k-th compound: entry at (J, I) is minor(J, I), with both k-subset
    /// indices enumerated in lexicographic order. k = 0 gives the 1×1
    /// identity.
    pub fn compound(&self, k: usize) -> Result<RationalMatrix> {
        if k > self.rows.min(self.cols) {
            return Err(Error::IndexOutOfRange(format!(
                "compound order {k} exceeds min({}, {})",
                self.rows, self.cols
            )));
        }
        if k == 0 {
            return RationalMatrix::identity(1);
        }
        let row_sets = k_subsets(self.rows, k);
        let col_sets = k_subsets(self.cols, k);
        let mut out = RationalMatrix::zeros(row_sets.len(), col_sets.len())?;
        for (ri, rj) in row_sets.iter().enumerate() {
            for (ci, cj) in col_sets.iter().enumerate() {
                out.set(ri, ci, self.minor(*rj, *cj)?);
            }
        }
        Ok(out)
    }

    /// The §-dual matrix: entry (i, j) ↦ (−1)^(n−j) · A[n+1−i, j]
    /// (1-based indices).
    pub fn dual(&self) -> Result<RationalMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "dual of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        RationalMatrix::from_fn(n, n, |r, c| {
            // r, c are 0-based; the formula is stated 1-based.
            let v = self.get(n - 1 - r, c).clone();
            if (n - (c + 1)) % 2 == 1 {
                -v
            } else {
                v
            }
        })
    }

    /// Real part as floats; errors if any entry has a nonzero imaginary
    /// part.
    pub fn to_f64(&self) -> Result<Array2<f64>> {
        if !self.is_real() {
            return Err(Error::Domain("matrix has complex entries".into()));
        }
        let mut out = Array2::zeros((self.rows, self.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[[r, c]] = self.get(r, c).re().to_f64().ok_or(Error::NonFinite)?;
            }
        }
        Ok(out)
    }

    /// Exact real entries; errors on complex input.
    pub fn real_entries(&self) -> Result<Vec<Vec<Rational>>> {
        if !self.is_real() {
            return Err(Error::Domain("matrix has complex entries".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).re().clone())
                    .collect()
            })
            .collect())
    }
}

// Carrier matrices (inputs indexed by variable subsets) are capped at
// 16 by the operations that consume them; compound matrices grow to
// C(n,k) and only need a sanity bound on total size.
fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 || rows.saturating_mul(cols) > (1 << 20) {
        return Err(Error::SizeCap(format!(
            "matrix dimensions {rows}×{cols} out of range"
        )));
    }
    Ok(())
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}×{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}  ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Every minor of a matrix, filled order by order via Laplace expansion
/// along the last selected row. Independent of the Bareiss route.
pub struct MinorTable {
    rows: usize,
    cols: usize,
    /// levels[k - 1][rank(J)][rank(I)] = minor(J, I), |J| = |I| = k.
    levels: Vec<Vec<Vec<GaussianRational>>>,
}

impl MinorTable {
    pub fn build(a: &RationalMatrix, max_order: usize) -> MinorTable {
        assert!(
            a.rows() <= MAX_VARS && a.cols() <= MAX_VARS,
            "minor tables index rows and columns by variable subsets"
        );
        let max_order = max_order.min(a.rows()).min(a.cols());
        let mut levels: Vec<Vec<Vec<GaussianRational>>> = Vec::with_capacity(max_order);
        for k in 1..=max_order {
            let row_sets = k_subsets(a.rows(), k);
            let col_sets = k_subsets(a.cols(), k);
            let mut level = vec![vec![GaussianRational::zero(); col_sets.len()]; row_sets.len()];
            for (jr, rowset) in row_sets.iter().enumerate() {
                for (ic, colset) in col_sets.iter().enumerate() {
                    level[jr][ic] = if k == 1 {
                        let r = rowset.min_member().unwrap();
                        let c = colset.min_member().unwrap();
                        a.get(r - 1, c - 1).clone()
                    } else {
                        // Expand along the last row of the submatrix.
                        let last = rowset.max_member().unwrap();
                        let rest = rowset.remove(last);
                        let rest_rank = subset_rank(a.rows(), rest);
                        let mut acc = GaussianRational::zero();
                        for (pos, c) in colset.iter().enumerate() {
                            let entry = a.get(last - 1, c - 1);
                            if entry.is_zero() {
                                continue;
                            }
                            let sub_cols = colset.remove(c);
                            let sub_rank = subset_rank(a.cols(), sub_cols);
                            let cofactor = &levels[k - 2][rest_rank][sub_rank];
                            let contribution = entry * cofactor;
                            // sign (−1)^((k−1) + pos) for the last row
                            if (k - 1 + pos) % 2 == 1 {
                                acc = &acc - &contribution;
                            } else {
                                acc = &acc + &contribution;
                            }
                        }
                        acc
                    };
                }
            }
            levels.push(level);
        }
        MinorTable {
            rows: a.rows(),
            cols: a.cols(),
            levels,
        }
    }

    pub fn max_order(&self) -> usize {
        self.levels.len()
    }

    pub fn minor(&self, rowset: VarSet, colset: VarSet) -> &GaussianRational {
        let k = rowset.len();
        debug_assert_eq!(k, colset.len());
        debug_assert!(k >= 1 && k <= self.levels.len());
        &self.levels[k - 1][subset_rank(self.rows, rowset)][subset_rank(self.cols, colset)]
    }

    /// Minors of order k in (row-set, column-set) lexicographic order.
    pub fn order(&self, k: usize) -> impl Iterator<Item = (VarSet, VarSet, &GaussianRational)> {
        debug_assert!(k >= 1 && k <= self.levels.len());
        let row_sets = k_subsets(self.rows, k);
        let col_sets = k_subsets(self.cols, k);
        let level = &self.levels[k - 1];
        row_sets.into_iter().enumerate().flat_map(move |(jr, rs)| {
            let col_sets = col_sets.clone();
            col_sets
                .into_iter()
                .enumerate()
                .map(move |(ic, cs)| (rs, cs, &level[jr][ic]))
        })
    }

    /// Total minor count up to and including `max_order`.
    pub fn len(&self) -> usize {
        (1..=self.levels.len())
            .map(|k| binomial(self.rows, k) * binomial(self.cols, k))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}
