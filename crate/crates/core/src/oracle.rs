//! Independent checks that share no code path with the analytical formulas:
//! the Chebyshev distance by bisection on `b̲(δ) <= F(b̄(δ))`, the consistent
//! family by testing every subset, and a reproducible instance generator.

use indexmap::IndexSet as OrderedSet;

use crate::algebra::{check_consistency, lower_bound, upper_bound, System, UnitMatrix};
use crate::chebyshev::apply_f;
use crate::error::{Error, Result};
use crate::subsystems::{ConsistentFamily, IndexSet};
use crate::tnorm::TNormKind;

/// Hard ceiling on exhaustive enumeration (`2^n` subsets).
pub const MAX_EXHAUSTIVE_N: usize = 20;

const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance: f64,
    pub max_exhaustive_n: usize,
    pub seed: u64,
    /// Equality tolerance for the per-subset consistency test.
    pub epsilon: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_exhaustive_n: MAX_EXHAUSTIVE_N,
            seed: 0,
            epsilon: crate::algebra::DEFAULT_EPSILON,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_exhaustive_n > MAX_EXHAUSTIVE_N {
            return Err(Error::InvalidConfig(format!(
                "max_exhaustive_n must be at most {MAX_EXHAUSTIVE_N}, got {}",
                self.max_exhaustive_n
            )));
        }
        Ok(())
    }
}

/// `b̲(δ) <= F(b̄(δ))` componentwise. Monotone in `δ`.
pub fn distance_predicate(system: &System, delta: f64) -> bool {
    let lower = lower_bound(system.rhs(), delta);
    let image = apply_f(system, &upper_bound(system.rhs(), delta)).expect("b̄ has n entries");
    lower.iter().zip(&image).all(|(lo, f)| lo <= f)
}

/// Smallest `δ` satisfying [`distance_predicate`], by bisection over `[0, 1]`.
///
/// Returns the midpoint of the final bracket.
pub fn oracle_distance_bisection(system: &System, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_STEPS {
        if hi - lo < cfg.tolerance {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if distance_predicate(system, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Every non-empty subset whose subsystem passes the greatest-solution test.
/// Works for all three t-norms.
pub fn oracle_enumerate(system: &System, cfg: &OracleConfig) -> Result<ConsistentFamily> {
    cfg.validate()?;
    let n = system.n();
    if n > cfg.max_exhaustive_n {
        return Err(Error::TooLargeForExhaustive { n, cap: cfg.max_exhaustive_n });
    }
    let mut sets = OrderedSet::new();
    for mask in 1u32..(1u32 << n) {
        let rows: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = system.select_rows(&rows);
        if check_consistency(&sub, cfg.epsilon).consistent {
            sets.insert(IndexSet::new(rows));
        }
    }
    let excluded = (0..n).filter(|&i| !sets.contains(&IndexSet::new([i])));
    Ok(ConsistentFamily::new(sets.clone(), (0..n).collect(), excluded.collect(), n, n))
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random draw number `counter` (0-based) of stream `seed`.
fn draw(seed: u64, counter: u64) -> u64 {
    splitmix64(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A deterministic system with entries on the grid `{0, step, 2·step, ..., 1}`.
///
/// With `L = round(1 / step)` grid levels, draw `t` of the stream picks level
/// `draw(seed, t) mod (L + 1)` and the entry is `level / L`. Draws are taken
/// row-major through `A`, then through `b`. `1 / step` must be an integer.
pub fn random_system(seed: u64, n: usize, m: usize, kind: TNormKind, grid_step: f64) -> Result<System> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::InvalidGrid(grid_step));
    }
    let levels = (1.0 / grid_step).round();
    if (levels * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidGrid(grid_step));
    }
    if n == 0 || m == 0 {
        return Err(Error::EmptyMatrix);
    }
    let levels = levels as u64;
    let value = |t: u64| (draw(seed, t) % (levels + 1)) as f64 / levels as f64;

    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..m).map(|j| value((i * m + j) as u64)).collect())
        .collect();
    let b: Vec<f64> = (0..n).map(|i| value((n * m + i) as u64)).collect();
    System::new(kind, UnitMatrix::from_rows(&rows)?, b)
}
