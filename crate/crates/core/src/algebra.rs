//! Unit-interval values, matrices and systems, the two max-T / min-I_T
//! compositions, and the greatest-solution consistency test.

use std::fmt;

use crate::error::{Error, Result};
use crate::tnorm::TNormKind;

/// Absolute tolerance used for every "is zero" and vector-equality test.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct UnitScalar(f64);

impl UnitScalar {
    pub const ZERO: UnitScalar = UnitScalar(0.0);
    pub const ONE: UnitScalar = UnitScalar(1.0);

    /// Rejects NaN and anything outside `[0, 1]`; no clamping.
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::OutOfUnitInterval { value })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UnitScalar {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<UnitScalar> for f64 {
    fn from(v: UnitScalar) -> f64 {
        v.0
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dense row-major matrix with every entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl UnitMatrix {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        if n == 0 || m == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::RaggedMatrix { row: i + 1, expected: m, found: row.len() });
            }
            for (j, &value) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::MatrixEntryOutOfRange { row: i + 1, col: j + 1, value });
                }
                data.push(value);
            }
        }
        Ok(Self { rows: n, cols: m, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    /// Rows selected by 0-based `indices`, in the given order.
    pub(crate) fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: indices.len(), cols: self.cols, data }
    }
}

/// A max-T system `A □ x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    tnorm: TNormKind,
    a: UnitMatrix,
    b: Vec<f64>,
}

impl System {
    pub fn new(tnorm: TNormKind, a: UnitMatrix, b: Vec<f64>) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() });
        }
        if let Some((i, &value)) = b.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::RhsEntryOutOfRange { row: i + 1, value });
        }
        Ok(Self { tnorm, a, b })
    }

    pub fn from_rows<R: AsRef<[f64]>>(tnorm: TNormKind, rows: &[R], b: &[f64]) -> Result<Self> {
        Self::new(tnorm, UnitMatrix::from_rows(rows)?, b.to_vec())
    }

    pub fn tnorm(&self) -> TNormKind {
        self.tnorm
    }

    pub fn matrix(&self) -> &UnitMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Number of equations.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Number of unknowns.
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    /// The same matrix with another t-norm.
    pub fn with_tnorm(&self, tnorm: TNormKind) -> Self {
        Self { tnorm, ..self.clone() }
    }

    /// The same matrix and t-norm with another right-hand side.
    pub fn with_rhs(&self, b: Vec<f64>) -> Result<Self> {
        Self::new(self.tnorm, self.a.clone(), b)
    }

    pub(crate) fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            tnorm: self.tnorm,
            a: self.a.select_rows(indices),
            b: indices.iter().map(|&i| self.b[i]).collect(),
        }
    }
}

pub fn t_apply(kind: TNormKind, x: UnitScalar, y: UnitScalar) -> UnitScalar {
    UnitScalar(kind.strategy().apply(x.0, y.0))
}

pub fn residuum(kind: TNormKind, x: UnitScalar, y: UnitScalar) -> UnitScalar {
    UnitScalar(kind.strategy().residuum(x.0, y.0))
}

/// `(A □_T^max x)_i = max_j T(a_ij, x_j)`.
pub fn max_t_product(kind: TNormKind, a: &UnitMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: x.len() });
    }
    let t = kind.strategy();
    Ok(a.iter_rows()
        .map(|row| row.iter().zip(x).map(|(&a_ij, &x_j)| t.apply(a_ij, x_j)).fold(0.0, f64::max))
        .collect())
}

/// `(B □_{I_T}^min c)_j = min_i I_T(b_ji, c_i)`.
pub fn min_residuum_product(kind: TNormKind, b: &UnitMatrix, c: &[f64]) -> Result<Vec<f64>> {
    if c.len() != b.cols() {
        return Err(Error::DimensionMismatch { expected: b.cols(), found: c.len() });
    }
    let t = kind.strategy();
    Ok(b.iter_rows()
        .map(|row| row.iter().zip(c).map(|(&b_ji, &c_i)| t.residuum(b_ji, c_i)).fold(1.0, f64::min))
        .collect())
}

/// `A^t □_{I_T}^min c` without materializing the transpose.
pub(crate) fn residuated_solution(system: &System, c: &[f64]) -> Vec<f64> {
    let t = system.tnorm.strategy();
    let a = &system.a;
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| t.residuum(a.get(i, j), c[i])).fold(1.0, f64::min))
        .collect()
}

/// The potential greatest solution `e = A^t □_{I_T}^min b`.
pub fn greatest_potential_solution(system: &System) -> Vec<f64> {
    residuated_solution(system, &system.b)
}

/// Outcome of the greatest-solution consistency test.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyCheck {
    pub consistent: bool,
    /// Potential greatest solution; the greatest solution when `consistent`.
    pub e: Vec<f64>,
    /// `A □ e`.
    pub image: Vec<f64>,
}

/// The system is consistent iff `A □ e = b` (within `eps`, componentwise).
pub fn check_consistency(system: &System, eps: f64) -> ConsistencyCheck {
    let e = greatest_potential_solution(system);
    let image = max_t_product(system.tnorm, &system.a, &e).expect("e has one entry per column");
    let consistent = approx_eq(&image, &system.b, eps);
    ConsistencyCheck { consistent, e, image }
}

/// `(b - δ)^+` and `min(b + δ, 1)`, componentwise.
pub fn shifted_bounds(b: &[f64], delta: UnitScalar) -> (Vec<f64>, Vec<f64>) {
    (lower_bound(b, delta.0), upper_bound(b, delta.0))
}

pub(crate) fn lower_bound(b: &[f64], delta: f64) -> Vec<f64> {
    b.iter().map(|&z| (z - delta).max(0.0)).collect()
}

pub(crate) fn upper_bound(b: &[f64], delta: f64) -> Vec<f64> {
    b.iter().map(|&z| (z + delta).min(1.0)).collect()
}

/// `max_i |x_i - y_i|`.
pub fn chebyshev_norm(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub(crate) fn approx_eq(x: &[f64], y: &[f64], eps: f64) -> bool {
    x.len() == y.len() && chebyshev_norm(x, y) <= eps
}
