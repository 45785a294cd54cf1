//! Tasks as weighted ground sets with a feasibility predicate.
//!
//! Every task is an [`Instance`]: elements `0..n` with non-negative integer
//! weights, a problem kind deciding which subsets are feasible, and the set
//! of elements already committed by an agent. Committing an element produces
//! a residual instance that shares the parent's description; a subset `T` of
//! the remaining ground is feasible in the residual iff `T ∪ committed` is
//! feasible in the parent (raw explicit families instead use
//! `{ S ∖ committed : S ∈ F }` literally).

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{int, Rational};
use crate::{Error, Result};

pub type ElementId = usize;

/// Largest ground set an instance may have (elements are packed in a `u64`).
pub const MAX_GROUND: usize = 64;

/// Largest ground set [`Instance::verify_closure`] will check exhaustively.
pub const CLOSURE_LIMIT: usize = 20;

/// A subset of ground elements, packed as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(id: ElementId) -> Self {
        ElementSet(1u64 << id)
    }

    pub fn contains(self, id: ElementId) -> bool {
        id < MAX_GROUND && self.0 >> id & 1 == 1
    }

    pub fn with(self, id: ElementId) -> Self {
        ElementSet(self.0 | 1u64 << id)
    }

    pub fn without(self, id: ElementId) -> Self {
        ElementSet(self.0 & !(1u64 << id))
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in ascending id order.
    pub fn iter(self) -> impl Iterator<Item = ElementId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let id = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(id)
            }
        })
    }

    pub fn to_vec(self) -> Vec<ElementId> {
        self.iter().collect()
    }

    /// Compares the ascending member sequences lexicographically.
    pub fn lex_cmp(self, other: Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        iter.into_iter().fold(ElementSet::EMPTY, |s, id| s.with(id))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Max,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Min => "min",
            Objective::Max => "max",
        })
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Objective::Min),
            "max" => Ok(Objective::Max),
            other => Err(Error::Parse(format!("unknown objective {other:?}"))),
        }
    }
}

/// How an explicit family is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    /// A subset is feasible iff it contains a listed set.
    Up,
    /// Exactly the listed sets are feasible.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemKind {
    /// Ground element `i` is the set `sets[i]` of universe items; feasible
    /// selections cover `0..universe`.
    SetCover {
        universe: usize,
        sets: Vec<ElementSet>,
    },
    /// Ground elements are the points `0..n`; feasible selections meet every
    /// set in `sets`.
    HittingSet { sets: Vec<ElementSet> },
    /// Ground elements are vertices; feasible selections are independent.
    IndependentSet {
        edges: Vec<(ElementId, ElementId)>,
        adjacency: Vec<ElementSet>,
    },
    /// Ground elements are items; the weights are item values.
    Knapsack { loads: Vec<u64>, capacity: u64 },
    Explicit {
        family: Vec<ElementSet>,
        closure: Closure,
    },
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::SetCover { .. } => "set_cover",
            ProblemKind::HittingSet { .. } => "hitting_set",
            ProblemKind::IndependentSet { .. } => "independent_set",
            ProblemKind::Knapsack { .. } => "knapsack",
            ProblemKind::Explicit { .. } => "explicit",
        }
    }
}

/// A finite weighted ground set with a feasibility predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    kind: ProblemKind,
    weights: Vec<u64>,
    labels: Option<Vec<String>>,
    committed: ElementSet,
    notes: Vec<String>,
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInstance("ground set is empty".into()));
    }
    if n > MAX_GROUND {
        return Err(Error::SizeLimit {
            what: "ground set",
            size: n,
            limit: MAX_GROUND,
        });
    }
    Ok(())
}

fn pack(ids: &[usize], bound: usize, what: &str) -> Result<ElementSet> {
    let mut set = ElementSet::EMPTY;
    for &id in ids {
        if id >= bound {
            return Err(Error::InvalidInstance(format!(
                "{what} member {id} out of range 0..{bound}"
            )));
        }
        if set.contains(id) {
            return Err(Error::InvalidInstance(format!(
                "{what} lists member {id} twice"
            )));
        }
        set = set.with(id);
    }
    Ok(set)
}

impl Instance {
    fn build(kind: ProblemKind, weights: Vec<u64>) -> Result<Self> {
        check_ground(weights.len())?;
        Ok(Instance {
            kind,
            weights,
            labels: None,
            committed: ElementSet::EMPTY,
            notes: Vec::new(),
        })
    }

    /// Weighted set cover over the universe `0..universe`; one ground element
    /// per set.
    pub fn set_cover(universe: usize, sets: Vec<Vec<usize>>, weights: Vec<u64>) -> Result<Self> {
        if universe > MAX_GROUND {
            return Err(Error::SizeLimit {
                what: "universe",
                size: universe,
                limit: MAX_GROUND,
            });
        }
        if sets.len() != weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} sets but {} weights",
                sets.len(),
                weights.len()
            )));
        }
        let sets = sets
            .iter()
            .map(|s| pack(s, universe, "set"))
            .collect::<Result<Vec<_>>>()?;
        Self::build(ProblemKind::SetCover { universe, sets }, weights)
    }

    /// Weighted hitting set over points `0..weights.len()`.
    pub fn hitting_set(sets: Vec<Vec<usize>>, weights: Vec<u64>) -> Result<Self> {
        let n = weights.len();
        check_ground(n)?;
        let sets = sets
            .iter()
            .map(|s| pack(s, n, "set"))
            .collect::<Result<Vec<_>>>()?;
        Self::build(ProblemKind::HittingSet { sets }, weights)
    }

    /// Maximum-weight independent set on vertices `0..weights.len()`.
    pub fn independent_set(edges: Vec<(usize, usize)>, weights: Vec<u64>) -> Result<Self> {
        let n = weights.len();
        check_ground(n)?;
        let mut adjacency = vec![ElementSet::EMPTY; n];
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInstance(format!("bad edge ({u}, {v})")));
            }
            adjacency[u] = adjacency[u].with(v);
            adjacency[v] = adjacency[v].with(u);
        }
        Self::build(ProblemKind::IndependentSet { edges, adjacency }, weights)
    }

    /// 0/1 knapsack: `values` play the role of the weights.
    pub fn knapsack(values: Vec<u64>, loads: Vec<u64>, capacity: u64) -> Result<Self> {
        if values.len() != loads.len() {
            return Err(Error::InvalidInstance(format!(
                "{} values but {} loads",
                values.len(),
                loads.len()
            )));
        }
        Self::build(ProblemKind::Knapsack { loads, capacity }, values)
    }

    /// Explicit family over ground `0..weights.len()`.
    pub fn explicit(family: Vec<Vec<usize>>, weights: Vec<u64>, closure: Closure) -> Result<Self> {
        let n = weights.len();
        check_ground(n)?;
        let mut packed = Vec::with_capacity(family.len());
        for s in &family {
            let set = pack(s, n, "family set")?;
            if !packed.contains(&set) {
                packed.push(set);
            }
        }
        Self::build(
            ProblemKind::Explicit {
                family: packed,
                closure,
            },
            weights,
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} labels for {} elements",
                labels.len(),
                self.weights.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Marks `committed` as already taken, as if by successive residuals.
    pub fn with_committed(mut self, committed: &[ElementId]) -> Result<Self> {
        for &id in committed {
            self = self.residual(id)?;
        }
        Ok(self)
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, id: ElementId) -> u64 {
        self.weights[id]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.ground_size()).map(|id| Element {
            id,
            label: self.labels.as_ref().map(|l| l[id].clone()),
        })
    }

    pub fn label(&self, id: ElementId) -> String {
        match &self.labels {
            Some(l) => l[id].clone(),
            None => id.to_string(),
        }
    }

    pub fn committed(&self) -> ElementSet {
        self.committed
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }

    /// Ground elements not yet committed.
    pub fn remaining(&self) -> ElementSet {
        self.ground().difference(self.committed)
    }

    /// The direction the problem kind optimizes in.
    pub fn objective(&self) -> Objective {
        match self.kind {
            ProblemKind::IndependentSet { .. } | ProblemKind::Knapsack { .. } => Objective::Max,
            _ => Objective::Min,
        }
    }

    pub fn is_raw(&self) -> bool {
        matches!(
            self.kind,
            ProblemKind::Explicit {
                closure: Closure::Raw,
                ..
            }
        )
    }

    /// Largest set size of a set-cover or hitting-set instance.
    pub fn max_set_size(&self) -> Option<usize> {
        match &self.kind {
            ProblemKind::SetCover { sets, .. } | ProblemKind::HittingSet { sets } => {
                sets.iter().map(|s| s.len()).max()
            }
            _ => None,
        }
    }

    /// The common set size of a hitting-set instance whose sets all have the
    /// same size.
    pub fn uniform_set_size(&self) -> Option<usize> {
        match &self.kind {
            ProblemKind::HittingSet { sets } => {
                let d = sets.first()?.len();
                sets.iter().all(|s| s.len() == d).then_some(d)
            }
            _ => None,
        }
    }

    /// Validates a solution against the ground set and packs it.
    pub fn pack(&self, s: &Solution) -> Result<ElementSet> {
        let n = self.ground_size();
        let mut set = ElementSet::EMPTY;
        for &id in s.members() {
            if id >= n {
                return Err(Error::InvalidSolution(format!(
                    "element {id} not in ground 0..{n}"
                )));
            }
            set = set.with(id);
        }
        Ok(set)
    }

    /// Feasibility of `set` in the parent instance, ignoring commitments.
    pub(crate) fn feasible_in_parent(&self, set: ElementSet) -> bool {
        match &self.kind {
            ProblemKind::SetCover { universe, sets } => {
                let target = ElementSet::full(*universe);
                let covered = set
                    .iter()
                    .fold(ElementSet::EMPTY, |acc, i| acc.union(sets[i]));
                target.is_subset(covered)
            }
            ProblemKind::HittingSet { sets } => sets.iter().all(|s| !s.is_disjoint(set)),
            ProblemKind::IndependentSet { adjacency, .. } => {
                set.iter().all(|v| adjacency[v].is_disjoint(set))
            }
            ProblemKind::Knapsack { loads, capacity } => {
                let total: u128 = set.iter().map(|i| loads[i] as u128).sum();
                total <= *capacity as u128
            }
            ProblemKind::Explicit { family, closure } => match closure {
                Closure::Up => family.iter().any(|f| f.is_subset(set)),
                Closure::Raw => family.contains(&set),
            },
        }
    }

    /// Feasibility of `set` in this (possibly residual) instance.
    pub(crate) fn feasible_set(&self, set: ElementSet) -> bool {
        if !set.is_disjoint(self.committed) || !set.is_subset(self.ground()) {
            return false;
        }
        match &self.kind {
            ProblemKind::Explicit {
                family,
                closure: Closure::Raw,
            } => family
                .iter()
                .any(|f| f.difference(self.committed) == set),
            _ => self.feasible_in_parent(set.union(self.committed)),
        }
    }

    pub(crate) fn minimal_set(&self, set: ElementSet) -> bool {
        self.feasible_set(set) && set.iter().all(|x| !self.feasible_set(set.without(x)))
    }

    pub(crate) fn maximal_set(&self, set: ElementSet) -> bool {
        self.feasible_set(set)
            && self
                .remaining()
                .difference(set)
                .iter()
                .all(|x| !self.feasible_set(set.with(x)))
    }

    pub fn is_feasible(&self, s: &Solution) -> Result<bool> {
        Ok(self.feasible_set(self.pack(s)?))
    }

    /// Feasible, and no single removal stays feasible.
    pub fn is_minimal_feasible(&self, s: &Solution) -> Result<bool> {
        Ok(self.minimal_set(self.pack(s)?))
    }

    /// Feasible, and no single addition stays feasible.
    pub fn is_maximal_feasible(&self, s: &Solution) -> Result<bool> {
        Ok(self.maximal_set(self.pack(s)?))
    }

    pub fn plain_cost(&self, s: &Solution) -> Result<u64> {
        Ok(self.cost_of(self.pack(s)?))
    }

    pub(crate) fn cost_of(&self, set: ElementSet) -> u64 {
        set.iter().map(|i| self.weights[i]).sum()
    }

    /// The biased cost of `s`: the pivot's weight plus `beta` times the rest.
    ///
    /// The empty solution has biased cost zero.
    pub fn biased_cost(&self, s: &Solution, bias: &Bias) -> Result<Rational> {
        let set = self.pack(s)?;
        Ok(biased_value(&self.weights, set, bias))
    }

    /// Commits `x`, producing the residual instance.
    pub fn residual(&self, x: ElementId) -> Result<Instance> {
        if x >= self.ground_size() {
            return Err(Error::InvalidSolution(format!(
                "element {x} not in ground 0..{}",
                self.ground_size()
            )));
        }
        if self.committed.contains(x) {
            return Err(Error::AlreadyCommitted(x));
        }
        let mut next = self.clone();
        next.committed = self.committed.with(x);
        Ok(next)
    }

    /// Exhaustively checks the structural assumptions of minimization tasks:
    /// upward closure of feasibility and solvability of every residual.
    pub fn verify_closure(&self) -> Result<ClosureReport> {
        let n = self.ground_size();
        if n > CLOSURE_LIMIT {
            return Err(Error::SizeLimit {
                what: "ground set",
                size: n,
                limit: CLOSURE_LIMIT,
            });
        }
        if self.objective() == Objective::Max {
            return Ok(ClosureReport {
                objective: Objective::Max,
                upward_closed: None,
                residuals_solvable: None,
                counterexamples: Vec::new(),
                notice: Some(format!(
                    "{} is a maximization kind; closure checks apply to minimization only",
                    self.kind.name()
                )),
            });
        }
        let remaining = self.remaining();
        let mut counterexamples = Vec::new();
        let mut upward = true;
        for set in subsets_of(remaining) {
            if !self.feasible_set(set) {
                continue;
            }
            for x in remaining.difference(set).iter() {
                let bigger = set.with(x);
                if !self.feasible_set(bigger) {
                    upward = false;
                    if counterexamples.len() < 16 && !counterexamples.contains(&bigger) {
                        counterexamples.push(bigger);
                    }
                }
            }
        }
        if !self.feasible_set(remaining) {
            upward = false;
            if !counterexamples.contains(&remaining) {
                counterexamples.push(remaining);
            }
        }
        // Every residual reached by committing further elements must still
        // admit some feasible completion.
        let mut solvable = true;
        for extra in subsets_of(remaining) {
            let mut res = self.clone();
            res.committed = res.committed.union(extra);
            let rest = res.remaining();
            let ok = match &res.kind {
                ProblemKind::Explicit {
                    family,
                    closure: Closure::Raw,
                } => !family.is_empty(),
                _ => res.feasible_set(rest) || subsets_of(rest).any(|t| res.feasible_set(t)),
            };
            if !ok {
                solvable = false;
                break;
            }
        }
        Ok(ClosureReport {
            objective: Objective::Min,
            upward_closed: Some(upward),
            residuals_solvable: Some(solvable),
            counterexamples: counterexamples.into_iter().map(Solution::from_set).collect(),
            notice: None,
        })
    }
}

/// All subsets of `pool`, in increasing bit-pattern order.
pub(crate) fn subsets_of(pool: ElementSet) -> impl Iterator<Item = ElementSet> {
    let pool = pool.bits();
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == pool {
            None
        } else {
            Some((cur.wrapping_sub(pool)) & pool)
        };
        Some(ElementSet::from_bits(cur))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub objective: Objective,
    /// `None` when the check does not apply (maximization kinds).
    pub upward_closed: Option<bool>,
    pub residuals_solvable: Option<bool>,
    pub counterexamples: Vec<Solution>,
    pub notice: Option<String>,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        self.upward_closed.unwrap_or(true) && self.residuals_solvable.unwrap_or(true)
    }
}

/// A subset of ground-element ids, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Solution {
    members: Vec<ElementId>,
}

impl Solution {
    pub fn new(mut members: Vec<ElementId>) -> Result<Self> {
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSolution(format!(
                "element {} listed twice",
                w[0]
            )));
        }
        Ok(Solution { members })
    }

    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn from_set(set: ElementSet) -> Self {
        Solution {
            members: set.to_vec(),
        }
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn to_set(&self) -> ElementSet {
        self.members.iter().copied().collect()
    }

    pub fn is_subset(&self, other: &Solution) -> bool {
        self.members.iter().all(|m| other.contains(*m))
    }
}

/// Degree of present bias together with the objective direction and the
/// approximation factor of the agent's evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bias {
    #[serde(with = "crate::exact::serde_rational")]
    beta: Rational,
    objective: Objective,
    #[serde(with = "crate::exact::serde_rational")]
    alpha: Rational,
}

impl Bias {
    pub fn new(beta: Rational, objective: Objective, alpha: Rational) -> Result<Self> {
        if beta <= Rational::zero() {
            return Err(Error::InvalidConfig(format!("beta must be positive, got {beta}")));
        }
        if alpha < Rational::one() {
            return Err(Error::InvalidConfig(format!("alpha must be at least 1, got {alpha}")));
        }
        Ok(Bias {
            beta,
            objective,
            alpha,
        })
    }

    pub fn min(beta: Rational) -> Result<Self> {
        Self::new(beta, Objective::Min, Rational::one())
    }

    pub fn max(beta: Rational) -> Result<Self> {
        Self::new(beta, Objective::Max, Rational::one())
    }

    pub fn with_alpha(self, alpha: Rational) -> Result<Self> {
        Self::new(self.beta, self.objective, alpha)
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Whether the pivot is the lightest member (otherwise the heaviest).
    ///
    /// The pivot is the member whose immediate execution optimizes the
    /// biased value: the lightest one for an underestimating minimizer or an
    /// overestimating maximizer, the heaviest one otherwise. At `beta = 1`
    /// every choice gives the same value and the rule for `beta < 1` applies.
    pub fn pivot_is_lightest(&self) -> bool {
        let over = self.beta > Rational::one();
        match self.objective {
            Objective::Min => !over,
            Objective::Max => over,
        }
    }
}

/// The pivot of `set` under `bias`: lightest or heaviest member, ties to the
/// smallest id.
pub fn pivot_of(weights: &[u64], set: ElementSet, lightest: bool) -> Option<ElementId> {
    let mut best: Option<ElementId> = None;
    for id in set.iter() {
        best = match best {
            None => Some(id),
            Some(b) => {
                let better = if lightest {
                    weights[id] < weights[b]
                } else {
                    weights[id] > weights[b]
                };
                Some(if better { id } else { b })
            }
        };
    }
    best
}

pub(crate) fn biased_value(weights: &[u64], set: ElementSet, bias: &Bias) -> Rational {
    let Some(p) = pivot_of(weights, set, bias.pivot_is_lightest()) else {
        return Rational::zero();
    };
    let total: u64 = set.iter().map(|i| weights[i]).sum();
    let pw = weights[p];
    int(pw) + bias.beta() * int(total - pw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn sol(ids: &[usize]) -> Solution {
        Solution::new(ids.to_vec()).unwrap()
    }

    /// Universe 0..n, sets x_i = {i} (ids 0..n) then y_i = {i..n} (ids n..2n).
    fn isc(n: usize, c: u64) -> Instance {
        let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        sets.extend((0..n).map(|i| (i..n).collect()));
        let mut w = vec![1; n];
        w.extend(vec![c; n]);
        Instance::set_cover(n, sets, w).unwrap()
    }

    #[test]
    fn plain_cost_sums_weights() {
        let inst = Instance::explicit(vec![vec![0, 1, 2]], vec![3, 5, 2], Closure::Up).unwrap();
        assert_eq!(inst.plain_cost(&Solution::empty()).unwrap(), 0);
        assert_eq!(inst.plain_cost(&sol(&[0])).unwrap(), 3);
        assert_eq!(inst.plain_cost(&sol(&[0, 1, 2])).unwrap(), 10);
        assert!(matches!(
            inst.plain_cost(&sol(&[7])),
            Err(Error::InvalidSolution(_))
        ));
    }

    #[test]
    fn biased_cost_examples() {
        let inst = Instance::explicit(vec![vec![0, 1]], vec![1, 4], Closure::Up).unwrap();
        let s = sol(&[0, 1]);
        let min = Bias::min(ratio(1, 2)).unwrap();
        assert_eq!(inst.biased_cost(&s, &min).unwrap(), int(3));
        let max = Bias::max(ratio(1, 2)).unwrap();
        assert_eq!(inst.biased_cost(&s, &max).unwrap(), ratio(9, 2));
        let unbiased = Bias::min(int(1)).unwrap();
        assert_eq!(inst.biased_cost(&s, &unbiased).unwrap(), int(5));
        assert_eq!(inst.biased_cost(&Solution::empty(), &min).unwrap(), int(0));
    }

    #[test]
    fn pivot_flips_when_overestimating() {
        let w = [1, 4];
        let set = ElementSet::from_bits(0b11);
        let over_min = Bias::min(int(2)).unwrap();
        assert_eq!(pivot_of(&w, set, over_min.pivot_is_lightest()), Some(1));
        // 4 + 2*1 = 6 beats 1 + 2*4 = 9 for a minimizer.
        assert_eq!(biased_value(&w, set, &over_min), int(6));
        let over_max = Bias::max(int(2)).unwrap();
        assert_eq!(biased_value(&w, set, &over_max), int(9));
    }

    #[test]
    fn pivot_ties_go_to_smallest_id() {
        let w = [3, 2, 2, 5];
        assert_eq!(pivot_of(&w, ElementSet::from_bits(0b1111), true), Some(1));
        assert_eq!(pivot_of(&w, ElementSet::from_bits(0b0111), false), Some(0));
    }

    #[test]
    fn bias_validation() {
        assert!(Bias::min(int(0)).is_err());
        assert!(Bias::min(ratio(-1, 2)).is_err());
        assert!(Bias::min(int(1)).unwrap().with_alpha(ratio(1, 2)).is_err());
    }

    #[test]
    fn isc_feasibility_and_minimality() {
        let inst = isc(2, 3);
        // ids: x1=0, x2=1, y1=2, y2=3
        assert!(inst.is_feasible(&sol(&[2])).unwrap());
        assert!(inst.is_minimal_feasible(&sol(&[2])).unwrap());
        assert!(inst.is_feasible(&sol(&[0, 2])).unwrap());
        assert!(!inst.is_minimal_feasible(&sol(&[0, 2])).unwrap());
        assert!(inst.is_feasible(&sol(&[0, 1, 2, 3])).unwrap());
        assert!(!inst.is_feasible(&sol(&[1, 3])).unwrap());
    }

    #[test]
    fn residual_of_isc_drops_covered_items() {
        let inst = isc(3, 3);
        // commit x1 = id 0; universe left is {1, 2}
        let res = inst.residual(0).unwrap();
        assert_eq!(res.remaining().to_vec(), vec![1, 2, 3, 4, 5]);
        assert!(res.is_feasible(&sol(&[4])).unwrap()); // y2 covers {1,2}
        assert!(res.is_feasible(&sol(&[3])).unwrap()); // y1 still covers
        assert!(res.is_feasible(&sol(&[1, 5])).unwrap()); // x2 + y3
        assert!(!res.is_feasible(&sol(&[5])).unwrap());
        assert!(res.is_minimal_feasible(&sol(&[1, 2])).unwrap());
        assert_eq!(res.weights(), inst.weights());
        assert!(matches!(res.residual(0), Err(Error::AlreadyCommitted(0))));
    }

    #[test]
    fn residual_of_raw_family_subtracts() {
        let inst = Instance::explicit(vec![vec![0], vec![0, 1]], vec![1, 1], Closure::Raw).unwrap();
        let res = inst.residual(0).unwrap();
        assert!(res.is_feasible(&Solution::empty()).unwrap());
        assert!(res.is_feasible(&sol(&[1])).unwrap());
        assert!(!res.is_feasible(&sol(&[0])).unwrap());
    }

    #[test]
    fn residual_everything_makes_empty_feasible() {
        let inst = isc(3, 2);
        let mut res = inst.clone();
        for x in 0..inst.ground_size() {
            res = res.residual(x).unwrap();
        }
        assert!(res.is_feasible(&Solution::empty()).unwrap());
    }

    #[test]
    fn ground_is_feasible_for_min_kinds() {
        let inst = isc(4, 3);
        let all = Solution::from_set(inst.ground());
        assert!(inst.is_feasible(&all).unwrap());
    }

    #[test]
    fn closure_report_for_isc() {
        let report = isc(3, 3).verify_closure().unwrap();
        assert_eq!(report.upward_closed, Some(true));
        assert_eq!(report.residuals_solvable, Some(true));
        assert!(report.holds());
    }

    #[test]
    fn closure_fails_for_raw_singleton_family() {
        let raw = Instance::explicit(vec![vec![0]], vec![1, 1], Closure::Raw).unwrap();
        let report = raw.verify_closure().unwrap();
        assert_eq!(report.upward_closed, Some(false));
        assert!(report.counterexamples.contains(&sol(&[0, 1])));
        let up = Instance::explicit(vec![vec![0]], vec![1, 1], Closure::Up).unwrap();
        assert!(up.verify_closure().unwrap().holds());
    }

    #[test]
    fn closure_skipped_for_max_kinds() {
        let g = Instance::independent_set(vec![(0, 1)], vec![1, 2]).unwrap();
        let report = g.verify_closure().unwrap();
        assert_eq!(report.objective, Objective::Max);
        assert_eq!(report.upward_closed, None);
        assert!(report.notice.is_some());
    }

    #[test]
    fn closure_refuses_large_ground() {
        let inst = Instance::explicit(vec![vec![0]], vec![1; 21], Closure::Up).unwrap();
        assert!(matches!(
            inst.verify_closure(),
            Err(Error::SizeLimit { limit: 20, .. })
        ));
    }

    #[test]
    fn knapsack_and_independent_set_feasibility() {
        let ks = Instance::knapsack(vec![4, 2, 1], vec![3, 2, 1], 3).unwrap();
        assert!(ks.is_feasible(&sol(&[1, 2])).unwrap());
        assert!(!ks.is_feasible(&sol(&[0, 2])).unwrap());
        assert!(ks.is_maximal_feasible(&sol(&[0])).unwrap());
        assert!(!ks.is_maximal_feasible(&sol(&[1])).unwrap());
        let g = Instance::independent_set(vec![(0, 1), (1, 2)], vec![1, 1, 1]).unwrap();
        assert!(g.is_maximal_feasible(&sol(&[0, 2])).unwrap());
        let res = g.residual(0).unwrap();
        assert!(!res.is_feasible(&sol(&[1])).unwrap());
        assert!(res.is_maximal_feasible(&sol(&[2])).unwrap());
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let pool = ElementSet::from_bits(0b1011);
        let all: Vec<_> = subsets_of(pool).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|s| s.is_subset(pool)));
    }

    #[test]
    fn lex_order_on_member_sequences() {
        let a: ElementSet = [0, 1, 2, 3].into_iter().collect();
        let b: ElementSet = [0, 5].into_iter().collect();
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        let c: ElementSet = [0].into_iter().collect();
        assert_eq!(c.lex_cmp(a), Ordering::Less);
    }

    #[test]
    fn duplicate_solution_members_rejected() {
        assert!(Solution::new(vec![1, 1]).is_err());
    }
}
