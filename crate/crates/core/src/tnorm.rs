//! The three t-norms and their residual implicators, each behind the [`TNorm`]
//! trait and registered by name in a [`TNormRegistry`].
//!
//! | kind          | `T(x, y)`          | `I_T(x, y)` for `x > y` |
//! |---------------|--------------------|-------------------------|
//! | `min`         | `min(x, y)`        | `y` (Gödel)             |
//! | `product`     | `x * y`            | `y / x` (Goguen)        |
//! | `lukasiewicz` | `(x + y - 1)^+`    | `1 - x + y`             |
//!
//! Every residuum returns 1 when `x <= y`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::chebyshev::{sigma_g, sigma_gg};
use crate::error::{Error, Result};

/// Tag selecting which t-norm governs every composition of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TNormKind {
    Min,
    Product,
    Lukasiewicz,
}

impl TNormKind {
    pub const ALL: [TNormKind; 3] = [TNormKind::Min, TNormKind::Product, TNormKind::Lukasiewicz];

    /// The built-in strategy object for this kind.
    pub fn strategy(self) -> &'static dyn TNorm {
        match self {
            TNormKind::Min => &Minimum,
            TNormKind::Product => &Product,
            TNormKind::Lukasiewicz => &Lukasiewicz,
        }
    }

    /// Canonical name, as used in system documents.
    pub fn name(self) -> &'static str {
        self.strategy().name()
    }
}

impl fmt::Display for TNormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TNormRegistry::builtin().get(s).map(|t| t.kind())
    }
}

/// A t-norm together with its residual implicator and the defect kernel
/// used by the analytical Chebyshev distance.
pub trait TNorm: fmt::Debug + Send + Sync {
    fn kind(&self) -> TNormKind;

    fn name(&self) -> &'static str;

    /// `T(x, y)`.
    fn apply(&self, x: f64, y: f64) -> f64;

    /// `I_T(x, y) = max { z | T(x, z) <= y }`.
    fn residuum(&self, x: f64, y: f64) -> f64;

    /// The number `δ_ijk` computed from `a_ij`, `b_i`, `a_kj`, `b_k`.
    fn defect(&self, a_ij: f64, b_i: f64, a_kj: f64, b_k: f64) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Minimum;

#[derive(Debug, Clone, Copy, Default)]
pub struct Product;

#[derive(Debug, Clone, Copy, Default)]
pub struct Lukasiewicz;

impl TNorm for Minimum {
    fn kind(&self) -> TNormKind {
        TNormKind::Min
    }

    fn name(&self) -> &'static str {
        "min"
    }

    fn apply(&self, x: f64, y: f64) -> f64 {
        x.min(y)
    }

    fn residuum(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            1.0
        } else {
            y
        }
    }

    fn defect(&self, a_ij: f64, b_i: f64, a_kj: f64, b_k: f64) -> f64 {
        (b_i - a_ij).max(0.0).max(sigma_g(b_i, a_kj, b_k))
    }
}

impl TNorm for Product {
    fn kind(&self) -> TNormKind {
        TNormKind::Product
    }

    fn name(&self) -> &'static str {
        "product"
    }

    fn apply(&self, x: f64, y: f64) -> f64 {
        x * y
    }

    fn residuum(&self, x: f64, y: f64) -> f64 {
        // x > y >= 0 on the second branch, so x > 0.
        if x <= y {
            1.0
        } else {
            y / x
        }
    }

    fn defect(&self, a_ij: f64, b_i: f64, a_kj: f64, b_k: f64) -> f64 {
        sigma_gg(a_ij, b_i, a_kj, b_k)
    }
}

impl TNorm for Lukasiewicz {
    fn kind(&self) -> TNormKind {
        TNormKind::Lukasiewicz
    }

    fn name(&self) -> &'static str {
        "lukasiewicz"
    }

    fn apply(&self, x: f64, y: f64) -> f64 {
        // lo - (1 - hi) keeps T(x, 1) == x exact and stays symmetric.
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        (lo - (1.0 - hi)).max(0.0)
    }

    fn residuum(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            1.0
        } else {
            (1.0 - x + y).min(1.0)
        }
    }

    fn defect(&self, a_ij: f64, b_i: f64, a_kj: f64, b_k: f64) -> f64 {
        // sigma_l(1 - a_ij, b_i, a_kj, b_k) with v = b_i - a_ij and
        // v + a_kj - b_k regrouped so that both vanish exactly when k = i.
        let v = b_i - a_ij;
        let w = (b_i - b_k) + (a_kj - a_ij);
        b_i.min(v.max(0.0).max(w.max(0.0) / 2.0))
    }
}

/// Name-keyed table of t-norm strategies.
///
/// Lookup is case-insensitive. [`TNormRegistry::builtin`] holds the three
/// built-in kinds under their canonical names plus a few common aliases.
#[derive(Debug, Clone, Default)]
pub struct TNormRegistry {
    entries: IndexMap<String, Arc<dyn TNorm>>,
}

impl TNormRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn builtin() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(Minimum));
        registry.register(Arc::new(Product));
        registry.register(Arc::new(Lukasiewicz));
        registry.alias("godel", "min");
        registry.alias("goguen", "product");
        registry.alias("prod", "product");
        registry.alias("luk", "lukasiewicz");
        registry.alias("łukasiewicz", "lukasiewicz");
        registry
    }

    /// Registers `tnorm` under its own name, replacing any previous entry.
    pub fn register(&mut self, tnorm: Arc<dyn TNorm>) {
        self.entries.insert(tnorm.name().to_lowercase(), tnorm);
    }

    /// Makes `alias` resolve to whatever is registered as `target`.
    /// Does nothing if `target` is unknown.
    pub fn alias(&mut self, alias: &str, target: &str) {
        if let Some(t) = self.entries.get(&target.to_lowercase()).cloned() {
            self.entries.insert(alias.to_lowercase(), t);
        }
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn TNorm>> {
        self.entries
            .get(&name.trim().to_lowercase())
            .cloned()
            .ok_or_else(|| Error::UnknownTNorm(name.to_string()))
    }

    /// Canonical names, in registration order, without aliases.
    pub fn names(&self) -> Vec<&'static str> {
        let mut names: Vec<&'static str> = Vec::new();
        for t in self.entries.values() {
            if !names.contains(&t.name()) {
                names.push(t.name());
            }
        }
        names
    }
}
