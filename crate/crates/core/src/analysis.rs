//! Bound checks on traces, minor extraction and sunflowers.

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::agent::{run_agent, AgentTrace, Consistency};
use crate::evaluators::Restriction;
use crate::exact::{factorial, int, pow, ExtRational, Rational};
use crate::instances;
use crate::problem::{ElementSet, Instance, Objective, ProblemKind, Solution};
use crate::{io, Error, Result};

pub const LINEAR_K: &str = "LINEAR_K";
pub const CONSISTENT: &str = "CONSISTENT";
pub const MIN_OVER: &str = "MIN_OVER";
pub const MAX_UNDER: &str = "MAX_UNDER";
pub const MAX_OVER_EXP: &str = "MAX_OVER_EXP";
pub const MAX_OVER_LOG: &str = "MAX_OVER_LOG";
pub const DCOVER: &str = "DCOVER";
pub const DHIT: &str = "DHIT";
pub const DHIT_STEPS: &str = "DHIT_STEPS";

/// One bound evaluated on one trace.
///
/// `holds` is `lhs <= rhs` for applicable entries and vacuously true
/// otherwise. Sides that cannot be formed for this trace are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub lhs: Option<ExtRational>,
    pub rhs: Option<ExtRational>,
    pub applicable: bool,
    pub holds: bool,
    /// Floating-point rendering for reading only; never part of a verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub instance_digest: String,
    pub objective: Objective,
    #[serde(with = "crate::exact::serde_rational")]
    pub beta: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub alpha: Rational,
    pub steps: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn applicable(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.applicable)
    }

    pub fn passed(&self) -> usize {
        self.applicable().filter(|e| e.holds).count()
    }

    pub fn failed(&self) -> usize {
        self.applicable().filter(|e| !e.holds).count()
    }

    pub fn all_hold(&self) -> bool {
        self.failed() == 0
    }
}

fn entry(name: &str, applicable: bool, sides: Option<(ExtRational, ExtRational)>) -> BoundEntry {
    let applicable = applicable && sides.is_some();
    let (lhs, rhs) = match sides {
        Some((l, r)) => (Some(l), Some(r)),
        None => (None, None),
    };
    let holds = !applicable || lhs <= rhs;
    BoundEntry {
        name: name.into(),
        lhs,
        rhs,
        applicable,
        holds,
        display: None,
    }
}

fn fin(r: Rational) -> ExtRational {
    ExtRational::Finite(r)
}

/// Evaluates every bound against `trace`, which must come from `inst`.
pub fn bound_report(trace: &AgentTrace, inst: &Instance) -> Result<BoundReport> {
    if io::instance_digest(inst) != trace.instance_digest {
        return Err(Error::InvalidConfig(
            "trace was not produced on this instance".into(),
        ));
    }
    let bias = &trace.config.bias;
    let (beta, alpha) = (bias.beta().clone(), bias.alpha().clone());
    let objective = bias.objective();
    let one = Rational::one();
    let min = objective == Objective::Min;
    let under = beta <= one;
    let over = beta >= one;
    let exact = alpha.is_one();
    let free = trace.config.consistency == Consistency::Free;
    let restriction = trace.config.evaluator.resolve(objective);
    let p = trace.steps.len() as u64;
    let c = trace.final_cost;
    let opt = trace.opt;
    let rho = trace.ratio.clone();

    let mut entries = vec![
        entry(
            LINEAR_K,
            min && under && free && p >= 1,
            Some((rho.clone(), fin(&alpha * int(p)))),
        ),
        entry(
            CONSISTENT,
            min && under && !free,
            Some((rho.clone(), fin(&alpha / &beta))),
        ),
        entry(MIN_OVER, min && over && exact && free, Some((rho.clone(), fin(beta.clone())))),
        entry(
            MAX_UNDER,
            !min && under && exact,
            Some((rho.clone(), fin(one.clone() / &beta))),
        ),
    ];

    let positive = inst.weights().iter().all(|&w| w >= 1);
    let max_over = !min && over && exact && positive;
    entries.push(entry(
        MAX_OVER_EXP,
        max_over,
        Some((fin(int(opt)), fin(int(c) * pow(&beta, c)))),
    ));
    let mut log = entry(
        MAX_OVER_LOG,
        max_over,
        Some((fin(int(opt)), fin(pow(&(int(2) * &beta), c)))),
    );
    log.display = Some(log_display(&beta, opt));
    entries.push(log);

    let d_regime = min && under && free && restriction == Restriction::MinimalOnly && opt >= 1;
    let cover_d = match inst.kind() {
        ProblemKind::SetCover { .. } => inst.max_set_size(),
        _ => None,
    };
    entries.push(entry(
        DCOVER,
        d_regime,
        cover_d.map(|d| (rho.clone(), fin(&alpha * int(d as u64) * int(opt)))),
    ));
    let hit_d = inst.uniform_set_size();
    let steps_bound = hit_d.map(|d| dhit_bound(d, &alpha, &beta, opt));
    entries.push(entry(
        DHIT,
        d_regime,
        steps_bound
            .as_ref()
            .map(|b| (rho.clone(), fin(&alpha * b))),
    ));
    entries.push(entry(
        DHIT_STEPS,
        d_regime,
        steps_bound.map(|b| (fin(int(p)), fin(b))),
    ));

    Ok(BoundReport {
        instance_digest: trace.instance_digest.clone(),
        objective,
        beta,
        alpha,
        steps: trace.steps.len(),
        entries,
    })
}

/// `d! (alpha/beta · OPT)^d`.
fn dhit_bound(d: usize, alpha: &Rational, beta: &Rational, opt: u64) -> Rational {
    factorial(d as u64) * pow(&(alpha / beta * int(opt)), d as u64)
}

fn log_display(beta: &Rational, opt: u64) -> String {
    let b = beta.to_f64().unwrap_or(f64::NAN);
    if opt <= 1 {
        return "(1 + log beta) OPT / log OPT: undefined for OPT <= 1".into();
    }
    let o = opt as f64;
    format!(
        "(1 + log beta) OPT / log OPT = {:.4}",
        (1.0 + b.log2()) * o / o.log2()
    )
}

/// The `J^(n)` instance found inside a run, with the bundles of original
/// elements behind each of its elements and the agent's replay on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub instance: Instance,
    /// `bundles[i]` for `i < n` is `{x_{i+1}}`; `bundles[n + i]` is the
    /// optimum witness of the residual before step `i`.
    pub bundles: Vec<Solution>,
    pub replay: AgentTrace,
}

/// Builds `J^(n)` from a minimization trace of the exact agent with
/// `beta < 1`: `x̄_i` is the `i`-th pivot, `ȳ_i` the optimum of the residual
/// the agent faced at step `i`, weighted by that optimum.
pub fn extract_minor(trace: &AgentTrace, inst: &Instance) -> Result<Minor> {
    let bias = &trace.config.bias;
    if bias.objective() != Objective::Min || bias.beta() >= &Rational::one() {
        return Err(Error::Unsupported(
            "minor extraction needs a minimization trace with beta < 1".into(),
        ));
    }
    if !bias.alpha().is_one() {
        return Err(Error::Unsupported(
            "minor extraction is defined for the exact agent only".into(),
        ));
    }
    if io::instance_digest(inst) != trace.instance_digest {
        return Err(Error::InvalidConfig(
            "trace was not produced on this instance".into(),
        ));
    }
    let n = trace.steps.len();
    if n == 0 {
        return Err(Error::Unsupported("trace has no steps".into()));
    }
    let xs: Vec<Solution> = trace
        .pivots()
        .into_iter()
        .map(|x| Solution::from_set(ElementSet::singleton(x)))
        .collect();
    let ys: Vec<Solution> = trace
        .steps
        .iter()
        .map(|s| s.residual_opt_witness.clone())
        .collect();
    for (i, x) in xs.iter().enumerate().take(n - 1) {
        if let Some(j) = ys.iter().position(|y| y == x) {
            return Err(Error::ModelViolation(format!(
                "bundle x{} equals bundle y{}",
                i + 1,
                j + 1
            )));
        }
    }
    let wx: Vec<u64> = trace
        .pivots()
        .into_iter()
        .map(|x| inst.weight(x))
        .collect();
    let wy: Vec<u64> = trace.steps.iter().map(|s| s.residual_opt).collect();
    let j = instances::jn(n, &wx, &wy)?;
    let replay = run_agent(&j, &trace.config)?;
    let mut bundles = xs;
    bundles.extend(ys);
    Ok(Minor {
        instance: j,
        bundles,
        replay,
    })
}

/// Sets `family[petals[..]]` whose pairwise intersections all equal `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sunflower {
    petals: Vec<usize>,
    core: ElementSet,
}

impl Sunflower {
    /// Checks the sunflower condition from scratch.
    pub fn new(family: &[ElementSet], petals: Vec<usize>) -> Result<Self> {
        if petals.is_empty() {
            return Err(Error::InvalidConfig("a sunflower needs a petal".into()));
        }
        for (a, &i) in petals.iter().enumerate() {
            if i >= family.len() {
                return Err(Error::InvalidConfig(format!("petal index {i} out of range")));
            }
            if petals[..a].iter().any(|&j| family[j] == family[i]) {
                return Err(Error::InvalidConfig(format!("petal {i} repeats a set")));
            }
        }
        let core = if petals.len() == 1 {
            family[petals[0]]
        } else {
            family[petals[0]].intersection(family[petals[1]])
        };
        for (a, &i) in petals.iter().enumerate() {
            for &j in &petals[a + 1..] {
                if family[i].intersection(family[j]) != core {
                    return Err(Error::InvalidConfig(format!(
                        "petals {i} and {j} meet outside the core"
                    )));
                }
            }
        }
        Ok(Sunflower { petals, core })
    }

    pub fn petals(&self) -> &[usize] {
        &self.petals
    }

    pub fn core(&self) -> ElementSet {
        self.core
    }
}

/// Families at most this large fall back to exhaustive search when the
/// greedy construction fails.
pub const SUNFLOWER_SEARCH_LIMIT: usize = 64;

/// A sunflower with `k` petals in a family of distinct `d`-sets.
///
/// Greedy first: a maximal disjoint subfamily with `k` sets is a sunflower
/// with empty core; otherwise recurse on the sets through the most frequent
/// element. Above `d!(k-1)^d` sets the greedy always succeeds. Small
/// families are then searched exhaustively.
pub fn find_sunflower(family: &[ElementSet], k: usize) -> Result<Option<Sunflower>> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if let Some(first) = family.first() {
        if let Some(bad) = family.iter().find(|s| s.len() != first.len()) {
            return Err(Error::InvalidConfig(format!(
                "mixed set sizes {} and {}",
                first.len(),
                bad.len()
            )));
        }
    }
    for (i, s) in family.iter().enumerate() {
        if family[..i].contains(s) {
            return Err(Error::InvalidConfig(format!("set {i} is listed twice")));
        }
    }
    let all: Vec<usize> = (0..family.len()).collect();
    let found = greedy(family, &all, ElementSet::EMPTY, k).or_else(|| {
        (family.len() <= SUNFLOWER_SEARCH_LIMIT)
            .then(|| exhaustive(family, k))
            .flatten()
    });
    found.map(|petals| Sunflower::new(family, petals)).transpose()
}

fn greedy(family: &[ElementSet], idx: &[usize], removed: ElementSet, k: usize) -> Option<Vec<usize>> {
    if idx.len() < k {
        return None;
    }
    if k == 1 {
        return Some(vec![idx[0]]);
    }
    let link = |i: usize| family[i].difference(removed);
    let mut disjoint: Vec<usize> = Vec::new();
    let mut used = ElementSet::EMPTY;
    for &i in idx {
        if link(i).is_disjoint(used) {
            used = used.union(link(i));
            disjoint.push(i);
            if disjoint.len() == k {
                return Some(disjoint);
            }
        }
    }
    let mut counts = [0usize; 64];
    for &i in idx {
        for e in link(i).iter() {
            counts[e] += 1;
        }
    }
    let (best, &count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    if count == 0 {
        return None;
    }
    let through: Vec<usize> = idx.iter().copied().filter(|&i| link(i).contains(best)).collect();
    greedy(family, &through, removed.with(best), k)
}

fn exhaustive(family: &[ElementSet], k: usize) -> Option<Vec<usize>> {
    fn extend(family: &[ElementSet], chosen: &mut Vec<usize>, core: ElementSet, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..family.len() {
            if chosen.iter().all(|&j| family[i].intersection(family[j]) == core) {
                chosen.push(i);
                if extend(family, chosen, core, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if k == 1 {
        return (!family.is_empty()).then(|| vec![0]);
    }
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            let core = family[a].intersection(family[b]);
            let mut chosen = vec![a, b];
            if extend(family, &mut chosen, core, k) {
                return Some(chosen);
            }
        }
    }
    None
}

/// `d! (k-1)^d`, the family size above which a sunflower is guaranteed.
pub fn sunflower_threshold(d: usize, k: usize) -> Rational {
    factorial(d as u64) * pow(&int(k.saturating_sub(1) as u64), d as u64)
}

/// Step count of a hitting-set trace against `d!(alpha/beta · OPT)^d`, and
/// per step whether the pivot owns a private set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepBound {
    pub steps: usize,
    pub bound: Rational,
    pub holds: bool,
    /// For minimal-only runs: whether every pivot `v_i` has a set not hit
    /// before step `i` that the plan `S_i` meets only in `v_i`.
    pub private_sets: Option<bool>,
}

pub fn dhit_step_bound(trace: &AgentTrace, inst: &Instance) -> Result<StepBound> {
    let ProblemKind::HittingSet { sets } = inst.kind() else {
        return Err(Error::InvalidConfig(format!(
            "step bound needs a hitting-set instance, got {}",
            inst.kind().name()
        )));
    };
    let d = inst.uniform_set_size().ok_or_else(|| {
        Error::InvalidConfig("step bound needs sets of one common size".into())
    })?;
    let bias = &trace.config.bias;
    let bound = dhit_bound(d, bias.alpha(), bias.beta(), trace.opt);
    let steps = trace.steps.len();
    let holds = int(steps as u64) <= bound;
    let private_sets = (trace.config.evaluator.resolve(Objective::Min) == Restriction::MinimalOnly)
        .then(|| {
            trace.steps.iter().all(|step| {
                let before: ElementSet = step.committed_so_far.iter().copied().collect();
                let plan = step.evaluation.solution.to_set();
                let v = step.evaluation.pivot;
                sets.iter().any(|x| {
                    x.is_disjoint(before)
                        && x.intersection(plan) == ElementSet::singleton(v)
                })
            })
        });
    Ok(StepBound {
        steps,
        bound,
        holds,
        private_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::AgentConfig;
    use crate::exact::ratio;
    use crate::problem::Bias;

    fn set(ids: &[usize]) -> ElementSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn isc10_report() {
        let inst = instances::isc(10, 3).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::min(ratio(1, 4)).unwrap())).unwrap();
        let report = bound_report(&trace, &inst).unwrap();
        let lin = report.entry(LINEAR_K).unwrap();
        assert!(lin.applicable && lin.holds);
        assert_eq!(lin.lhs, Some(fin(ratio(10, 3))));
        assert_eq!(lin.rhs, Some(fin(int(10))));
        let dc = report.entry(DCOVER).unwrap();
        assert!(dc.applicable && dc.holds);
        assert_eq!(dc.rhs, Some(fin(int(30))));
        assert!(!report.entry(MIN_OVER).unwrap().applicable);
        assert!(!report.entry(DHIT).unwrap().applicable);
        assert!(report.all_hold());
    }

    #[test]
    fn gk4_report() {
        let inst = instances::gk(4, 2).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::max(int(2)).unwrap())).unwrap();
        let report = bound_report(&trace, &inst).unwrap();
        let exp = report.entry(MAX_OVER_EXP).unwrap();
        assert!(exp.applicable && exp.holds);
        assert_eq!(exp.lhs, Some(fin(int(16))));
        assert_eq!(exp.rhs, Some(fin(int(160))));
        let log = report.entry(MAX_OVER_LOG).unwrap();
        assert_eq!(log.rhs, Some(fin(int(1024))));
        assert!(log.display.as_deref().unwrap().starts_with("(1 + log beta)"));
        assert_eq!(report.passed(), 2);
    }

    #[test]
    fn report_rejects_foreign_instance() {
        let inst = instances::isc(3, 2).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::min(ratio(1, 4)).unwrap())).unwrap();
        assert!(bound_report(&trace, &instances::isc(4, 2).unwrap()).is_err());
    }

    #[test]
    fn minor_of_isc4() {
        let inst = instances::isc(4, 3).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::min(ratio(1, 4)).unwrap())).unwrap();
        let minor = extract_minor(&trace, &inst).unwrap();
        assert_eq!(&minor.instance.weights()[4..], &[3, 3, 2, 1]);
        assert_eq!(minor.replay.ratio, trace.ratio);
        assert_eq!(minor.replay.pivots(), [0, 1, 2, 3]);
    }

    #[test]
    fn minor_needs_exact_underestimating_min() {
        let inst = instances::isc(3, 3).unwrap();
        let over = run_agent(&inst, &AgentConfig::new(Bias::min(int(2)).unwrap())).unwrap();
        assert!(matches!(extract_minor(&over, &inst), Err(Error::Unsupported(_))));
    }

    #[test]
    fn single_step_minor() {
        let inst = instances::isc(3, 2).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::min(ratio(9, 10)).unwrap())).unwrap();
        assert_eq!(trace.steps.len(), 1);
        let minor = extract_minor(&trace, &inst).unwrap();
        assert_eq!(minor.replay.steps.len(), 1);
        assert_eq!(minor.replay.ratio, trace.ratio);
    }

    #[test]
    fn sunflower_examples() {
        let disjoint = [set(&[1, 2]), set(&[3, 4]), set(&[5, 6])];
        let s = find_sunflower(&disjoint, 3).unwrap().unwrap();
        assert_eq!(s.petals(), &[0, 1, 2]);
        assert!(s.core().is_empty());

        let star = [set(&[1, 2]), set(&[1, 3]), set(&[1, 4])];
        let s = find_sunflower(&star, 3).unwrap().unwrap();
        assert_eq!(s.core(), set(&[1]));

        let triangle = [set(&[1, 2]), set(&[2, 3]), set(&[1, 3])];
        assert!(find_sunflower(&triangle, 3).unwrap().is_none());
        assert!(find_sunflower(&[set(&[1]), set(&[1, 2])], 2).is_err());
        assert!(find_sunflower(&[set(&[1]), set(&[1])], 2).is_err());
    }

    #[test]
    fn sunflower_validation() {
        let fam = [set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
        assert!(Sunflower::new(&fam, vec![0, 1, 2]).is_err());
        assert!(Sunflower::new(&fam, vec![0, 1]).is_ok());
        assert_eq!(sunflower_threshold(2, 3), int(8));
    }

    #[test]
    fn hitting_step_bound() {
        let inst = Instance::hitting_set(vec![vec![0, 1]], vec![2, 3]).unwrap();
        let trace = run_agent(&inst, &AgentConfig::new(Bias::min(ratio(1, 2)).unwrap())).unwrap();
        let b = dhit_step_bound(&trace, &inst).unwrap();
        assert_eq!(b.steps, 1);
        assert!(b.holds);
        assert_eq!(b.private_sets, Some(true));
        let cover = instances::isc(2, 2).unwrap();
        let t = run_agent(&cover, &AgentConfig::new(Bias::min(ratio(1, 2)).unwrap())).unwrap();
        assert!(dhit_step_bound(&t, &cover).is_err());
    }
}
