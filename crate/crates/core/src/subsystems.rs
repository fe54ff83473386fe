//! Subsystems selected by a set of equation indices, the canonical maximal
//! consistent subsystem `N_c`, and for max-min systems the stage-by-stage
//! enumeration of every consistent subsystem.
//!
//! Indices are 0-based in the API. [`IndexSet`] prints and parses 1-based.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet as OrderedSet;

use crate::algebra::System;
use crate::chebyshev::{chebyshev_report, row_defect_within};
use crate::error::{Error, Result};
use crate::tnorm::TNormKind;

/// A sorted set of distinct 0-based equation indices.
///
/// Ordered shortlex: by cardinality, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    /// Parses 1-based indices; 0 is rejected.
    pub fn from_one_based(members: &[usize]) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&i| i == 0) {
            return Err(Error::IndexOutOfRange { index: bad, len: 0 });
        }
        Ok(Self::new(members.iter().map(|i| i - 1)))
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// `self ∪ {i}`.
    pub fn with(&self, i: usize) -> Self {
        match self.0.binary_search(&i) {
            Ok(_) => self.clone(),
            Err(at) => {
                let mut v = self.0.clone();
                v.insert(at, i);
                Self(v)
            }
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        match self.0.last() {
            Some(&last) if last >= n => Err(Error::IndexOutOfRange { index: last + 1, len: n }),
            _ => Ok(()),
        }
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// The subsystem made of the equations in `rows`, in ascending index order.
pub fn restrict(system: &System, rows: &IndexSet) -> Result<System> {
    rows.check(system.n())?;
    Ok(system.select_rows(rows.as_slice()))
}

/// `Δ_R = max_{i ∈ R} min_j max_{k ∈ R} δ_ijk`, evaluated on the full system.
pub fn subsystem_distance(system: &System, rows: &IndexSet) -> Result<f64> {
    rows.check(system.n())?;
    Ok(rows
        .iter()
        .map(|i| row_defect_within(system, i, rows.as_slice()))
        .fold(0.0, f64::max))
}

/// `min_j (b_i - a_ij)^+`, the distance of equation `i` taken alone.
fn singleton_defect(system: &System, i: usize) -> f64 {
    let b_i = system.rhs()[i];
    system
        .matrix()
        .row(i)
        .iter()
        .map(|&a| (b_i - a).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// Evidence that `N_c` is a maximal consistent subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct McsCertificate {
    pub nc: IndexSet,
    /// `Δ_{N_c}`, zero up to tolerance.
    pub delta_nc: f64,
    /// `(k, Δ_{N_c ∪ {k}})` for every row `k` outside `N_c`, ascending `k`.
    pub augmented: Vec<(usize, f64)>,
}

impl McsCertificate {
    /// Re-checks the certificate's own claims against `eps`.
    pub fn holds(&self, eps: f64) -> bool {
        !self.nc.is_empty()
            && self.delta_nc <= eps
            && self.augmented.iter().all(|&(_, d)| d > eps)
    }
}

/// The canonical maximal consistent subsystem `N_c = { i | δ_i = 0 }`.
///
/// Needs at least one equation that is solvable on its own; without one,
/// no subsystem at all is consistent.
pub fn canonical_mcs(system: &System, eps: f64) -> Result<McsCertificate> {
    if !(0..system.n()).any(|i| singleton_defect(system, i) <= eps) {
        return Err(Error::NoSolvableEquation);
    }
    let nc = chebyshev_report(system, eps).nc;
    let delta_nc = subsystem_distance(system, &nc)?;
    let augmented = (0..system.n())
        .filter(|&k| !nc.contains(k))
        .map(|k| subsystem_distance(system, &nc.with(k)).map(|d| (k, d)))
        .collect::<Result<_>>()?;
    Ok(McsCertificate { nc, delta_nc, augmented })
}

fn require_min(system: &System) -> Result<()> {
    match system.tnorm() {
        TNormKind::Min => Ok(()),
        found => Err(Error::UnsupportedTNorm { expected: TNormKind::Min, found }),
    }
}

/// `δ_k` inside the subsystem `R ∪ {k}` of a max-min system whose right-hand
/// side is sorted ascending.
///
/// When every member of `R` precedes `k` and `R` is consistent, the other rows
/// of `R ∪ {k}` keep a zero defect, so `R ∪ {k}` is consistent exactly when
/// the returned value is zero.
pub fn incremental_row_delta(system: &System, rows: &IndexSet, k: usize, eps: f64) -> Result<f64> {
    require_min(system)?;
    rows.check(system.n())?;
    if k >= system.n() {
        return Err(Error::IndexOutOfRange { index: k + 1, len: system.n() });
    }
    let b = system.rhs();
    if let Some(i) = (1..b.len()).find(|&i| b[i - 1] > b[i]) {
        return Err(Error::Precondition(format!(
            "right-hand side must be sorted ascending (b[{}] > b[{}])",
            i,
            i + 1
        )));
    }
    if rows.iter().any(|r| r >= k) {
        return Err(Error::Precondition(format!("every member of {rows} must precede row {}", k + 1)));
    }
    let d = subsystem_distance(system, rows)?;
    if d > eps {
        return Err(Error::Precondition(format!("subsystem {rows} is inconsistent (Δ = {d})")));
    }
    Ok(row_defect_within(system, k, rows.with(k).as_slice()))
}

/// A downward-closed family of consistent subsystems, in original indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistentFamily {
    sets: OrderedSet<IndexSet>,
    /// All rows, stably sorted by ascending `b`: `permutation[p]` is the
    /// original index of the row at sorted position `p`.
    pub permutation: Vec<usize>,
    /// Rows not solvable on their own; no member contains one.
    pub excluded: IndexSet,
    /// Number of stages run, i.e. rows taking part in the enumeration.
    pub stage: usize,
    rows: usize,
}

impl ConsistentFamily {
    pub(crate) fn new(
        sets: OrderedSet<IndexSet>,
        permutation: Vec<usize>,
        excluded: IndexSet,
        stage: usize,
        rows: usize,
    ) -> Self {
        Self { sets, permutation, excluded, stage, rows }
    }

    /// Members in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &IndexSet> {
        self.sets.iter()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &IndexSet) -> bool {
        self.sets.contains(set)
    }

    /// Members in shortlex order.
    pub fn sorted(&self) -> Vec<IndexSet> {
        let mut v: Vec<IndexSet> = self.sets.iter().cloned().collect();
        v.sort();
        v
    }

    /// Same members, ignoring order and bookkeeping.
    pub fn same_sets(&self, other: &ConsistentFamily) -> bool {
        self.len() == other.len() && self.iter().all(|s| other.contains(s))
    }

    /// Inclusion-maximal members, shortlex order.
    pub fn maximal(&self) -> Vec<IndexSet> {
        // Downward closure means a member is maximal iff no one-row extension is a member.
        let mut out: Vec<IndexSet> = self
            .sets
            .iter()
            .filter(|s| (0..self.rows).all(|t| s.contains(t) || !self.sets.contains(&s.with(t))))
            .cloned()
            .collect();
        out.sort();
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        self.sets.iter().all(|s| {
            s.len() == 1 || s.iter().all(|drop| self.sets.contains(&s.iter().filter(|&i| i != drop).collect::<IndexSet>()))
        })
    }
}

/// Stage-wise construction on the sorted, filtered system. Sets hold positions
/// in `working`.
struct Stages {
    working_system: System,
    working: Vec<usize>,
    permutation: Vec<usize>,
    excluded: IndexSet,
    sets: OrderedSet<IndexSet>,
    /// `stage_end[s]` = number of sets in E^{s+1}.
    stage_end: Vec<usize>,
}

impl Stages {
    fn run(system: &System, eps: f64) -> Result<Self> {
        require_min(system)?;
        let b = system.rhs();
        let mut permutation: Vec<usize> = (0..system.n()).collect();
        permutation.sort_by(|&x, &y| b[x].total_cmp(&b[y]));

        let (working, dropped): (Vec<usize>, Vec<usize>) = permutation
            .iter()
            .partition(|&&i| singleton_defect(system, i) <= eps);
        let working_system = system.select_rows(&working);

        let mut sets: OrderedSet<IndexSet> = OrderedSet::new();
        let mut stage_end = Vec::with_capacity(working.len());
        for s in 0..working.len() {
            let previous = sets.len();
            sets.insert(IndexSet(vec![s]));
            for idx in 0..previous {
                let extended = sets[idx].with(s);
                if row_defect_within(&working_system, s, extended.as_slice()) <= eps {
                    sets.insert(extended);
                }
            }
            stage_end.push(sets.len());
        }

        Ok(Self {
            working_system,
            working,
            permutation,
            excluded: IndexSet::new(dropped),
            sets,
            stage_end,
        })
    }

    fn to_original(&self, set: &IndexSet) -> IndexSet {
        set.iter().map(|p| self.working[p]).collect()
    }

    fn family(&self, total_rows: usize) -> ConsistentFamily {
        ConsistentFamily::new(
            self.sets.iter().map(|s| self.to_original(s)).collect(),
            self.permutation.clone(),
            self.excluded.clone(),
            self.working.len(),
            total_rows,
        )
    }

    /// Sets maximal within E^{s+1} that no later row can extend.
    fn maximal_by_stage(&self, eps: f64) -> Vec<IndexSet> {
        let total = self.working.len();
        let mut found = BTreeSet::new();
        for s in 0..total {
            for r in self.sets.iter().take(self.stage_end[s]) {
                let stage_maximal =
                    (0..=s).all(|t| r.contains(t) || !self.sets.contains(&r.with(t)));
                if !stage_maximal {
                    continue;
                }
                let blocked = (s + 1..total).all(|k| {
                    row_defect_within(&self.working_system, k, r.with(k).as_slice()) > eps
                });
                if blocked {
                    found.insert(self.to_original(r));
                }
            }
        }
        found.into_iter().collect()
    }
}

/// Every consistent subsystem of a max-min system.
///
/// Rows are stably sorted by ascending `b`, rows unsolvable alone are set
/// aside in [`ConsistentFamily::excluded`], and `E^{s+1}` is grown from `E^s`
/// with one defect evaluation per member of `E^s`.
pub fn enumerate_consistent_maxmin(system: &System, eps: f64) -> Result<ConsistentFamily> {
    Ok(Stages::run(system, eps)?.family(system.n()))
}

/// Inclusion-maximal consistent subsystems of a max-min system, shortlex order.
pub fn maximal_consistent_maxmin(system: &System, eps: f64) -> Result<Vec<IndexSet>> {
    Ok(enumerate_consistent_maxmin(system, eps)?.maximal())
}

/// Same result as [`maximal_consistent_maxmin`], found stage by stage: a set
/// maximal among the first `s` sorted rows is maximal overall iff adding any
/// single later row leaves that row with a positive defect.
pub fn maximal_consistent_maxmin_incremental(system: &System, eps: f64) -> Result<Vec<IndexSet>> {
    Ok(Stages::run(system, eps)?.maximal_by_stage(eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_EPSILON;

    const EPS: f64 = DEFAULT_EPSILON;

    fn example1(kind: TNormKind) -> System {
        System::from_rows(
            kind,
            &[[1.0, 0.4, 0.5, 0.7], [0.7, 0.5, 0.3, 0.5], [0.2, 1.0, 1.0, 0.6], [0.4, 0.5, 0.5, 0.8]],
            &[0.8, 0.7, 0.4, 0.4],
        )
        .unwrap()
    }

    fn example5() -> System {
        System::from_rows(
            TNormKind::Min,
            &[[0.98, 0.02, 0.10], [0.80, 0.31, 0.18], [0.78, 0.38, 0.26], [0.77, 0.20, 0.85]],
            &[0.13, 0.28, 0.54, 0.70],
        )
        .unwrap()
    }

    fn sets(one_based: &[&[usize]]) -> Vec<IndexSet> {
        let mut v: Vec<IndexSet> = one_based.iter().map(|s| IndexSet::from_one_based(s).unwrap()).collect();
        v.sort();
        v
    }

    fn one(s: &[usize]) -> IndexSet {
        IndexSet::from_one_based(s).unwrap()
    }

    #[test]
    fn index_set_basics() {
        let s = IndexSet::new([3, 0, 3, 2]);
        assert_eq!(s.as_slice(), &[0, 2, 3]);
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(s.with(1).to_one_based(), vec![1, 2, 3, 4]);
        assert_eq!(s.with(2), s);
        assert!(IndexSet::from_one_based(&[0, 1]).is_err());
        assert!(one(&[3, 4]) < one(&[1, 2, 4]));
        assert!(one(&[1, 4]) < one(&[2, 3]));
        assert!(one(&[1]).is_subset(&one(&[1, 2])));
    }

    #[test]
    fn restrict_examples() {
        let s = example1(TNormKind::Min);
        assert_eq!(restrict(&s, &IndexSet::full(4)).unwrap(), s);
        let r = restrict(&s, &one(&[2])).unwrap();
        assert_eq!(r.matrix().to_rows(), vec![vec![0.7, 0.5, 0.3, 0.5]]);
        assert_eq!(r.rhs(), &[0.7]);
        let r = restrict(&example5(), &one(&[3, 4])).unwrap();
        assert_eq!((r.n(), r.m()), (2, 3));
        assert_eq!(r.rhs(), &[0.54, 0.70]);
        assert_eq!(restrict(&s, &IndexSet::default()), Err(Error::EmptyIndexSet));
        assert_eq!(restrict(&s, &one(&[5])), Err(Error::IndexOutOfRange { index: 5, len: 4 }));
    }

    #[test]
    fn subsystem_distance_examples() {
        assert_eq!(subsystem_distance(&example1(TNormKind::Product), &one(&[1, 3, 4])).unwrap(), 0.0);
        for kind in TNormKind::ALL {
            let s = example1(kind);
            for i in 0..4 {
                assert_eq!(subsystem_distance(&s, &IndexSet::new([i])).unwrap(), singleton_defect(&s, i));
            }
        }
        assert!(subsystem_distance(&example5(), &one(&[1, 2, 3])).unwrap() > EPS);
        assert_eq!(subsystem_distance(&example5(), &IndexSet::default()), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn canonical_mcs_examples() {
        for (kind, expect) in [
            (TNormKind::Product, vec![1, 3, 4]),
            (TNormKind::Lukasiewicz, vec![1, 3, 4]),
            (TNormKind::Min, vec![1, 2, 3, 4]),
        ] {
            let cert = canonical_mcs(&example1(kind), EPS).unwrap();
            assert_eq!(cert.nc.to_one_based(), expect, "{kind}");
            assert!(cert.holds(EPS));
            assert_eq!(cert.augmented.len(), 4 - expect.len());
        }
        let hopeless = System::from_rows(TNormKind::Min, &[[0.4]], &[0.9]).unwrap();
        assert_eq!(canonical_mcs(&hopeless, EPS), Err(Error::NoSolvableEquation));
    }

    #[test]
    fn incremental_row_delta_examples() {
        let s = example5();
        assert_eq!(incremental_row_delta(&s, &one(&[1, 2]), 3, EPS).unwrap(), 0.0);
        assert!(incremental_row_delta(&s, &one(&[1, 2]), 2, EPS).unwrap() > EPS);
        for i in 0..4 {
            for k in i + 1..4 {
                let d = incremental_row_delta(&s, &IndexSet::new([i]), k, EPS).unwrap();
                let full = subsystem_distance(&s, &IndexSet::new([i, k])).unwrap();
                assert_eq!(d <= EPS, full <= EPS, "({i},{k})");
            }
        }
    }

    #[test]
    fn incremental_row_delta_preconditions() {
        let s = example5();
        assert!(matches!(incremental_row_delta(&s, &one(&[2, 4]), 2, EPS), Err(Error::Precondition(_))));
        assert!(matches!(incremental_row_delta(&s, &one(&[1, 2, 3]), 3, EPS), Err(Error::Precondition(_))));
        let unsorted = System::from_rows(TNormKind::Min, &[[0.9], [0.9]], &[0.5, 0.3]).unwrap();
        assert!(matches!(incremental_row_delta(&unsorted, &one(&[1]), 1, EPS), Err(Error::Precondition(_))));
        assert!(matches!(
            incremental_row_delta(&s.with_tnorm(TNormKind::Product), &one(&[1]), 1, EPS),
            Err(Error::UnsupportedTNorm { .. })
        ));
    }

    #[test]
    fn example5_family() {
        let fam = enumerate_consistent_maxmin(&example5(), EPS).unwrap();
        let expected = sets(&[&[1], &[2], &[3], &[4], &[1, 2], &[1, 4], &[2, 4], &[3, 4], &[1, 2, 4]]);
        assert_eq!(fam.sorted(), expected);
        assert!(fam.is_downward_closed());
        assert!(fam.excluded.is_empty());
        assert_eq!(fam.stage, 4);
        // Insertion order follows the stages: E^1, then row 2, then {1,2}, ...
        let order: Vec<String> = fam.iter().map(ToString::to_string).collect();
        assert_eq!(order[..3], ["{1}", "{2}", "{1,2}"]);

        let maximal = sets(&[&[3, 4], &[1, 2, 4]]);
        assert_eq!(maximal_consistent_maxmin(&example5(), EPS).unwrap(), maximal);
        assert_eq!(maximal_consistent_maxmin_incremental(&example5(), EPS).unwrap(), maximal);
    }

    #[test]
    fn consistent_system_family() {
        let fam = enumerate_consistent_maxmin(&example1(TNormKind::Min), EPS).unwrap();
        assert_eq!(fam.len(), 15);
        assert!(fam.contains(&IndexSet::full(4)));
        assert_eq!(fam.maximal(), vec![IndexSet::full(4)]);
        assert_eq!(maximal_consistent_maxmin_incremental(&example1(TNormKind::Min), EPS).unwrap(), vec![IndexSet::full(4)]);
    }

    #[test]
    fn small_families() {
        let single = System::from_rows(TNormKind::Min, &[[0.2, 0.6, 0.1]], &[0.5]).unwrap();
        assert_eq!(enumerate_consistent_maxmin(&single, EPS).unwrap().sorted(), sets(&[&[1]]));

        // x must equal 0.3 and 0.6 at once.
        let clash = System::from_rows(TNormKind::Min, &[[1.0], [1.0]], &[0.3, 0.6]).unwrap();
        assert_eq!(maximal_consistent_maxmin(&clash, EPS).unwrap(), sets(&[&[1], &[2]]));
        assert_eq!(maximal_consistent_maxmin_incremental(&clash, EPS).unwrap(), sets(&[&[1], &[2]]));

        let hopeless = System::from_rows(TNormKind::Min, &[[0.4]], &[0.9]).unwrap();
        let fam = enumerate_consistent_maxmin(&hopeless, EPS).unwrap();
        assert!(fam.is_empty());
        assert_eq!(fam.excluded.to_one_based(), vec![1]);
        assert!(fam.maximal().is_empty());
    }

    #[test]
    fn unsorted_input_maps_back() {
        // Example 5 with rows reversed.
        let s = example5();
        let rows: Vec<Vec<f64>> = s.matrix().to_rows().into_iter().rev().collect();
        let b: Vec<f64> = s.rhs().iter().rev().copied().collect();
        let rev = System::from_rows(TNormKind::Min, &rows, &b).unwrap();
        let fam = enumerate_consistent_maxmin(&rev, EPS).unwrap();
        assert_eq!(fam.permutation, vec![3, 2, 1, 0]);
        assert_eq!(maximal_consistent_maxmin(&rev, EPS).unwrap(), sets(&[&[1, 2], &[1, 3, 4]]));
    }

    #[test]
    fn enumeration_rejects_other_tnorms() {
        for kind in [TNormKind::Product, TNormKind::Lukasiewicz] {
            let s = example5().with_tnorm(kind);
            assert!(matches!(enumerate_consistent_maxmin(&s, EPS), Err(Error::UnsupportedTNorm { .. })));
            assert!(maximal_consistent_maxmin(&s, EPS).is_err());
        }
    }
}
