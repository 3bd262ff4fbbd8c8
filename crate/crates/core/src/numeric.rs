//! Floating-point kernels: truncated-Taylor matrix exponentials with
//! scaling and squaring, plus float minor enumeration for non-certifying
//! TNN checks of numeric matrices.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::varset::{k_subsets, subset_rank, VarSet};

/// exp(tZ) by truncated Taylor series with scaling and squaring: scale so
/// ‖tZ/2^s‖∞ ≤ 0.5, sum `terms` Taylor terms, square s times. With
/// terms ≥ 16 the relative error stays below 1e−10 for ‖tZ‖∞ ≤ 10.
pub fn matrix_exp(z: &Array2<f64>, t: f64, terms: usize) -> Result<Array2<f64>> {
    if terms < 1 {
        return Err(Error::Precondition("matrix_exp requires terms ≥ 1".into()));
    }
    let n = z.nrows();
    if z.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix exponential of a {}×{} matrix",
            z.nrows(),
            z.ncols()
        )));
    }
    if !t.is_finite() || z.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scaled = z.mapv(|v| v * t);
    let norm = inf_norm(&scaled);
    let mut squarings = 0u32;
    let mut shrink = 1.0f64;
    while norm * shrink > 0.5 {
        squarings += 1;
        shrink *= 0.5;
    }
    let base = scaled.mapv(|v| v * shrink);

    // Horner-style Taylor sum: I + X(I + X/2 (I + X/3 (...)))
    let mut acc = Array2::<f64>::eye(n);
    for j in (1..=terms).rev() {
        acc = Array2::<f64>::eye(n) + &(base.dot(&acc) / j as f64);
    }
    for _ in 0..squarings {
        acc = acc.dot(&acc);
    }
    if acc.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(acc)
}

pub fn inf_norm(a: &Array2<f64>) -> f64 {
    (0..a.nrows())
        .map(|r| (0..a.ncols()).map(|c| a[[r, c]].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// All minors of a float matrix, by the same Laplace recurrence as the
/// exact [`crate::matrix::MinorTable`].
pub struct FloatMinorTable {
    rows: usize,
    cols: usize,
    levels: Vec<Vec<Vec<f64>>>,
}

impl FloatMinorTable {
    pub fn build(a: &Array2<f64>, max_order: usize) -> FloatMinorTable {
        let rows = a.nrows();
        let cols = a.ncols();
        let max_order = max_order.min(rows).min(cols);
        let mut levels: Vec<Vec<Vec<f64>>> = Vec::with_capacity(max_order);
        for k in 1..=max_order {
            let row_sets = k_subsets(rows, k);
            let col_sets = k_subsets(cols, k);
            let mut level = vec![vec![0.0f64; col_sets.len()]; row_sets.len()];
            for (jr, rowset) in row_sets.iter().enumerate() {
                for (ic, colset) in col_sets.iter().enumerate() {
                    level[jr][ic] = if k == 1 {
                        a[[
                            rowset.min_member().unwrap() - 1,
                            colset.min_member().unwrap() - 1,
                        ]]
                    } else {
                        let last = rowset.max_member().unwrap();
                        let rest = rowset.remove(last);
                        let rest_rank = subset_rank(rows, rest);
                        let mut acc = 0.0f64;
                        for (pos, c) in colset.iter().enumerate() {
                            let entry = a[[last - 1, c - 1]];
                            if entry == 0.0 {
                                continue;
                            }
                            let sub_rank = subset_rank(cols, colset.remove(c));
                            let term = entry * levels[k - 2][rest_rank][sub_rank];
                            if (k - 1 + pos) % 2 == 1 {
                                acc -= term;
                            } else {
                                acc += term;
                            }
                        }
                        acc
                    };
                }
            }
            levels.push(level);
        }
        FloatMinorTable { rows, cols, levels }
    }

    pub fn minor(&self, rowset: VarSet, colset: VarSet) -> f64 {
        let k = rowset.len();
        self.levels[k - 1][subset_rank(self.rows, rowset)][subset_rank(self.cols, colset)]
    }

    /// Smallest minor over all orders.
    pub fn min_minor(&self) -> f64 {
        self.levels
            .iter()
            .flat_map(|level| level.iter().flat_map(|row| row.iter().copied()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Non-certifying TNN check for float matrices: all minors ≥ −tol.
pub fn float_tnn_check(a: &Array2<f64>, tol: f64) -> bool {
    let n = a.nrows().min(a.ncols());
    FloatMinorTable::build(a, n).min_minor() >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn exp_of_zero_time_is_identity() {
        let z = array![[3.0, -1.0], [2.0, 0.5]];
        let e = matrix_exp(&z, 0.0, 20).unwrap();
        assert!(max_abs_diff(&e, &Array2::eye(2)) < 1e-15);
    }

    #[test]
    fn exp_of_nilpotent_is_exact() {
        let z = array![[0.0, 1.0], [0.0, 0.0]];
        let e = matrix_exp(&z, 1.0, 20).unwrap();
        let expected = array![[1.0, 1.0], [0.0, 1.0]];
        assert!(max_abs_diff(&e, &expected) < 1e-14);
    }

    #[test]
    fn exp_of_diagonal_matches_scalars() {
        let z = array![[1.0, 0.0], [0.0, 2.0]];
        let e = matrix_exp(&z, 1.0, 24).unwrap();
        assert!((e[[0, 0]] - 1.0f64.exp()).abs() < 1e-10 * 1.0f64.exp());
        assert!((e[[1, 1]] - 2.0f64.exp()).abs() < 1e-10 * 2.0f64.exp());
        assert!(e[[0, 1]].abs() < 1e-12);
        assert!(e[[1, 0]].abs() < 1e-12);
    }

    #[test]
    fn exp_rejects_bad_input() {
        let z = array![[f64::NAN, 0.0], [0.0, 0.0]];
        assert!(matches!(matrix_exp(&z, 1.0, 10), Err(Error::NonFinite)));
        let ok = array![[1.0, 0.0], [0.0, 1.0]];
        assert!(matrix_exp(&ok, 1.0, 0).is_err());
    }

    #[test]
    fn float_minors_match_hand_values() {
        let a = array![[1.0, 2.0], [3.0, 4.0]];
        let t = FloatMinorTable::build(&a, 2);
        let rc = |ix: &[usize]| VarSet::from_indices(ix).unwrap();
        assert_eq!(t.minor(rc(&[1, 2]), rc(&[1, 2])), -2.0);
        assert_eq!(t.minor(rc(&[1]), rc(&[2])), 2.0);
        assert!(!float_tnn_check(&a, 1e-9));
        let tnn = array![[1.0, 1.0], [1.0, 2.0]];
        assert!(float_tnn_check(&tnn, 1e-9));
    }
}
