//! Analytical Chebyshev distance of the right-hand side.
//!
//! For a system with `n` equations and `m` unknowns the distance
//! `Δ = min { ‖b - c‖ : A □ x = c is consistent }` has the canonical form
//!
//! ```text
//! Δ = max_i δ_i,   δ_i = min_j δ(i, j),   δ(i, j) = max_k δ_ijk
//! ```
//!
//! where `δ_ijk` depends only on `a_ij`, `b_i`, `a_kj`, `b_k` and the t-norm
//! (see [`TNorm::defect`](crate::tnorm::TNorm::defect)). That is `n²·m`
//! kernel evaluations. `N_c` collects the rows whose defect `δ_i` is zero.

use crate::algebra::{
    check_consistency, chebyshev_norm, max_t_product, residuated_solution, upper_bound, System,
};
use crate::error::{Error, Result};
use crate::subsystems::IndexSet;
use crate::tnorm::TNormKind;

#[inline]
fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// `min((x - z)^+ / 2, (y - z)^+)`, the max-min kernel.
pub fn sigma_g(x: f64, y: f64, z: f64) -> f64 {
    (pos(x - z) / 2.0).min(pos(y - z))
}

/// `(x·y - u·z)^+ / (u + y)` when `u > 0`, else `x`.
pub fn phi(u: f64, x: f64, y: f64, z: f64) -> f64 {
    if u > 0.0 {
        pos(x * y - u * z) / (u + y)
    } else {
        x
    }
}

/// `max((x - u)^+, min(φ(u, x, y, z), (y - z)^+))`, the max-product kernel.
pub fn sigma_gg(u: f64, x: f64, y: f64, z: f64) -> f64 {
    pos(x - u).max(phi(u, x, y, z).min(pos(y - z)))
}

/// `min(x, max(v^+, (v + y - z)^+ / 2))` with `v = x + u - 1`, the
/// max-Łukasiewicz kernel.
pub fn sigma_l(u: f64, x: f64, y: f64, z: f64) -> f64 {
    let v = x + u - 1.0;
    x.min(pos(v).max(pos(v + y - z) / 2.0))
}

/// `δ_ijk` for 0-based row `i`, column `j`, row `k`.
pub fn delta_ijk(system: &System, i: usize, j: usize, k: usize) -> Result<f64> {
    let (n, m) = (system.n(), system.m());
    for row in [i, k] {
        if row >= n {
            return Err(Error::IndexOutOfRange { index: row + 1, len: n });
        }
    }
    if j >= m {
        return Err(Error::IndexOutOfRange { index: j + 1, len: m });
    }
    Ok(defect(system, i, j, k))
}

#[inline]
pub(crate) fn defect(system: &System, i: usize, j: usize, k: usize) -> f64 {
    let a = system.matrix();
    let b = system.rhs();
    system.tnorm().strategy().defect(a.get(i, j), b[i], a.get(k, j), b[k])
}

/// `min_j max_{k ∈ rows} δ_ijk`: the defect of row `i` inside the subsystem
/// spanned by `rows`.
pub(crate) fn row_defect_within(system: &System, i: usize, rows: &[usize]) -> f64 {
    (0..system.m())
        .map(|j| rows.iter().map(|&k| defect(system, i, j, k)).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Per-row explanation of the defects.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// `δ(i, j)`, `n` rows of `m` values.
    pub table: Vec<Vec<f64>>,
    /// Smallest 0-based column `j` attaining `δ_i`.
    pub best_column: Vec<usize>,
    /// Smallest 0-based row `k` attaining `δ(i, j)` for that column.
    pub worst_row: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevReport {
    pub tnorm: TNormKind,
    /// `Δ = max_i δ_i`.
    pub delta: f64,
    /// `δ_i`, one per equation.
    pub row_defects: Vec<f64>,
    /// Rows with `δ_i <= eps`.
    pub nc: IndexSet,
    pub witness: Option<Witness>,
}

pub fn chebyshev_report(system: &System, eps: f64) -> ChebyshevReport {
    report(system, eps, false)
}

pub fn chebyshev_report_with_witness(system: &System, eps: f64) -> ChebyshevReport {
    report(system, eps, true)
}

fn report(system: &System, eps: f64, explain: bool) -> ChebyshevReport {
    let (n, m) = (system.n(), system.m());
    let mut row_defects = Vec::with_capacity(n);
    let mut witness = explain.then(|| Witness {
        table: Vec::with_capacity(n),
        best_column: Vec::with_capacity(n),
        worst_row: Vec::with_capacity(n),
    });

    let mut cells = vec![0.0; m];
    let mut argmax = vec![0usize; m];
    for i in 0..n {
        for j in 0..m {
            let (mut best, mut at) = (f64::NEG_INFINITY, 0);
            for k in 0..n {
                let d = defect(system, i, j, k);
                if d > best {
                    best = d;
                    at = k;
                }
            }
            cells[j] = best;
            argmax[j] = at;
        }
        let (mut delta_i, mut col) = (f64::INFINITY, 0);
        for (j, &c) in cells.iter().enumerate() {
            if c < delta_i {
                delta_i = c;
                col = j;
            }
        }
        row_defects.push(delta_i);
        if let Some(w) = witness.as_mut() {
            w.table.push(cells.clone());
            w.best_column.push(col);
            w.worst_row.push(argmax[col]);
        }
    }

    let delta = row_defects.iter().copied().fold(0.0, f64::max);
    let nc = IndexSet::from_sorted_unchecked(
        row_defects.iter().enumerate().filter(|(_, &d)| d <= eps).map(|(i, _)| i).collect(),
    );
    ChebyshevReport { tnorm: system.tnorm(), delta, row_defects, nc, witness }
}

/// `F(c) = A □_T^max (A^t □_{I_T}^min c)`.
pub fn apply_f(system: &System, c: &[f64]) -> Result<Vec<f64>> {
    if c.len() != system.n() {
        return Err(Error::DimensionMismatch { expected: system.n(), found: c.len() });
    }
    let e = residuated_solution(system, c);
    max_t_product(system.tnorm(), system.matrix(), &e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    /// `F(b̄(Δ))`, the greatest consistent right-hand side at distance `Δ`.
    pub approx: Vec<f64>,
    pub distance: f64,
}

/// Computes `F(b̄(Δ))` and checks that it is consistent and exactly `Δ` away from `b`.
/// Raises `c_i` to the largest `a_ij` lying in `(c_i, c_i + eps]`.
///
/// `b_i + Δ` often lands on a matrix entry in exact arithmetic but a few ulps
/// below it in floating point, which flips the Gödel residuum from 1 to `c_i`.
fn snap_to_entries(system: &System, mut c: Vec<f64>, eps: f64) -> Vec<f64> {
    for (i, ci) in c.iter_mut().enumerate() {
        let near = system.matrix().row(i).iter().copied().filter(|&a| a > *ci && a - *ci <= eps);
        *ci = near.fold(*ci, f64::max);
    }
    c
}

pub fn greatest_approximation(system: &System, eps: f64) -> Result<ApproxResult> {
    let delta = chebyshev_report(system, eps).delta;
    let bound = snap_to_entries(system, upper_bound(system.rhs(), delta), eps);
    let approx = apply_f(system, &bound)?;

    let approximated = system.with_rhs(approx.clone())?;
    if !check_consistency(&approximated, eps).consistent {
        return Err(Error::Internal(format!(
            "F(b̄(Δ)) is not a consistent right-hand side (Δ = {delta})"
        )));
    }
    let achieved = chebyshev_norm(&approx, system.rhs());
    if (achieved - delta).abs() > eps {
        return Err(Error::Internal(format!(
            "‖F(b̄(Δ)) - b‖ = {achieved} differs from Δ = {delta}"
        )));
    }
    Ok(ApproxResult { approx, distance: delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_EPSILON;

    const EPS: f64 = DEFAULT_EPSILON;
    // Product Δ for the first worked example, by hand: row 2, column 1, k = 1
    // gives φ(0.7, 0.7, 1.0, 0.8) = (0.7 - 0.56) / 1.7.
    const PRODUCT_DELTA: f64 = 0.14 / 1.7;

    #[test]
    fn approximation_survives_rounding_at_a_tie() {
        // 0.1 + 0.35 rounds to just below 0.45.
        let s = System::from_rows(TNormKind::Min, &[[0.45, 0.45], [0.0, 0.55]], &[0.1, 0.85]).unwrap();
        let r = greatest_approximation(&s, EPS).unwrap();
        assert!((r.distance - 0.35).abs() <= EPS);
        assert!(crate::algebra::approx_eq(&r.approx, &[0.45, 0.55], EPS), "{:?}", r.approx);
    }

    fn example1(kind: TNormKind) -> System {
        System::from_rows(
            kind,
            &[[1.0, 0.4, 0.5, 0.7], [0.7, 0.5, 0.3, 0.5], [0.2, 1.0, 1.0, 0.6], [0.4, 0.5, 0.5, 0.8]],
            &[0.8, 0.7, 0.4, 0.4],
        )
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(sigma_g(0.8, 0.5, 0.8), 0.0);
        assert!(close(sigma_g(0.9, 0.8, 0.5), 0.2));
        assert_eq!(sigma_g(0.7, 1.0, 0.8), 0.0);

        assert!(close(phi(0.7, 0.7, 1.0, 0.8), PRODUCT_DELTA));
        assert_eq!(phi(0.0, 0.6, 0.3, 0.2), 0.6);
        assert_eq!(phi(0.5, 0.4, 0.5, 0.4), 0.0);

        assert!(close(sigma_gg(0.7, 0.7, 1.0, 0.8), PRODUCT_DELTA));
        assert!(close(sigma_gg(0.3, 0.7, 0.2, 0.5), 0.4));
        assert!(close(sigma_gg(0.3, 0.7, 0.5, 0.5), 0.4));
        for (a, b) in [(0.9, 0.3), (0.5, 0.5), (0.0, 0.0), (1.0, 0.0)] {
            assert_eq!(sigma_gg(a, b, a, b), 0.0);
            assert_eq!(sigma_l(1.0 - a, b, a, b), 0.0);
        }

        assert!(close(sigma_l(0.3, 0.7, 1.0, 0.8), 0.1));
        for (u, y, z) in [(0.1, 0.9, 0.2), (1.0, 0.0, 1.0)] {
            assert_eq!(sigma_l(u, 0.0, y, z), 0.0);
        }
    }

    #[test]
    fn delta_ijk_examples() {
        // 0-based (1, 2, 1) is row 2, column 3, k = 2.
        assert!(close(delta_ijk(&example1(TNormKind::Min), 1, 2, 1).unwrap(), 0.4));
        assert!(close(delta_ijk(&example1(TNormKind::Product), 1, 0, 0).unwrap(), PRODUCT_DELTA));
        assert!(close(delta_ijk(&example1(TNormKind::Lukasiewicz), 1, 0, 0).unwrap(), 0.1));
        let s = example1(TNormKind::Min);
        assert_eq!(delta_ijk(&s, 4, 0, 0), Err(Error::IndexOutOfRange { index: 5, len: 4 }));
        assert_eq!(delta_ijk(&s, 0, 4, 0), Err(Error::IndexOutOfRange { index: 5, len: 4 }));
        assert_eq!(delta_ijk(&s, 0, 0, 9), Err(Error::IndexOutOfRange { index: 10, len: 4 }));
    }

    #[test]
    fn example1_reports() {
        let r = chebyshev_report(&example1(TNormKind::Min), EPS);
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.nc.to_one_based(), vec![1, 2, 3, 4]);
        assert!(r.witness.is_none());

        let r = chebyshev_report(&example1(TNormKind::Product), EPS);
        assert!(close(r.delta, PRODUCT_DELTA));
        assert_eq!(r.row_defects[0], 0.0);
        assert!(close(r.row_defects[1], PRODUCT_DELTA));
        assert_eq!(&r.row_defects[2..], &[0.0, 0.0]);
        assert_eq!(r.nc.to_one_based(), vec![1, 3, 4]);

        let r = chebyshev_report(&example1(TNormKind::Lukasiewicz), EPS);
        assert!(close(r.delta, 0.1));
        assert_eq!(r.nc.to_one_based(), vec![1, 3, 4]);
    }

    #[test]
    fn witness_is_consistent_with_defects() {
        for kind in TNormKind::ALL {
            let s = example1(kind);
            let r = chebyshev_report_with_witness(&s, EPS);
            let w = r.witness.as_ref().unwrap();
            for i in 0..s.n() {
                let row_min = w.table[i].iter().copied().fold(f64::INFINITY, f64::min);
                assert_eq!(row_min, r.row_defects[i]);
                let j = w.best_column[i];
                assert_eq!(w.table[i][j], r.row_defects[i]);
                assert!(w.table[i][..j].iter().all(|&v| v > r.row_defects[i]));
                let k = w.worst_row[i];
                assert_eq!(defect(&s, i, j, k), w.table[i][j]);
                assert!((0..k).all(|kk| defect(&s, i, j, kk) < w.table[i][j]));
            }
            assert_eq!(chebyshev_report(&s, EPS).row_defects, r.row_defects);
        }
        // Row 2 of the product system: column 1, driven by row 1.
        let r = chebyshev_report_with_witness(&example1(TNormKind::Product), EPS);
        let w = r.witness.unwrap();
        assert_eq!((w.best_column[1], w.worst_row[1]), (0, 0));
    }

    #[test]
    fn apply_f_examples() {
        let s = example1(TNormKind::Min);
        assert_eq!(apply_f(&s, s.rhs()).unwrap(), s.rhs());

        let s = example1(TNormKind::Lukasiewicz);
        let f = apply_f(&s, &upper_bound(s.rhs(), 0.1)).unwrap();
        for (x, y) in f.iter().zip([0.9, 0.6, 0.5, 0.5]) {
            assert!(close(*x, y), "{f:?}");
        }
        assert!(apply_f(&s, &[0.1]).is_err());
    }

    #[test]
    fn greatest_approximation_examples() {
        let s = example1(TNormKind::Min);
        let r = greatest_approximation(&s, EPS).unwrap();
        assert_eq!(r.approx, s.rhs());
        assert_eq!(r.distance, 0.0);

        let r = greatest_approximation(&example1(TNormKind::Lukasiewicz), EPS).unwrap();
        assert!(close(r.distance, 0.1));

        // Exact Δ gives 0.8 + 0.14/1.7 and 0.7 * (0.8 + 0.14/1.7) in the first two rows.
        let r = greatest_approximation(&example1(TNormKind::Product), EPS).unwrap();
        assert!(close(r.approx[0], 0.8 + PRODUCT_DELTA));
        assert!(close(r.approx[1], 0.7 * (0.8 + PRODUCT_DELTA)));
        assert!(close(r.approx[2], 0.4 + PRODUCT_DELTA));
        assert!(close(r.approx[3], 0.4 + PRODUCT_DELTA));
        assert!((r.approx[1] - 0.6181).abs() < 5e-4);
    }
}
