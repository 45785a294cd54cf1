//! Optimizers the agent queries at every step.
//!
//! Candidates are enumerated exhaustively. Minimal feasible sets of
//! upward-closed kinds and maximal feasible sets of downward-closed kinds are
//! produced by a pruned include/exclude search; everything else walks the
//! full powerset of the remaining ground. All comparisons are exact: a
//! candidate's biased value `w(p) + (n/d)(c - w(p))` is compared through the
//! integer key `d·w(p) + n·(c - w(p))`.

use std::cmp::Ordering;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{Rational, SmallRatio};
use crate::problem::{pivot_of, subsets_of, Bias, Closure, ElementId, ElementSet, Instance, Objective, ProblemKind, Solution};
use crate::{Error, Result};

/// Largest candidate pool searched exhaustively.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    #[serde(rename = "none")]
    Unrestricted,
    MinimalOnly,
    MaximalOnly,
}

impl Restriction {
    /// Minimal sets for minimization, maximal sets for maximization.
    pub fn default_for(objective: Objective) -> Self {
        match objective {
            Objective::Min => Restriction::MinimalOnly,
            Objective::Max => Restriction::MaximalOnly,
        }
    }
}

impl std::str::FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Restriction::Unrestricted),
            "minimal" | "minimal_only" => Ok(Restriction::MinimalOnly),
            "maximal" | "maximal_only" => Ok(Restriction::MaximalOnly),
            other => Err(Error::Parse(format!("unknown restriction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorMode {
    Exact,
    AdversarialAlpha,
}

/// Which optimizer the agent uses. The approximation factor lives in the
/// agent's [`Bias`]; `Exact` requires it to be one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluatorSpec {
    pub mode: EvaluatorMode,
    /// `None` selects [`Restriction::default_for`] the objective.
    pub restriction: Option<Restriction>,
}

impl EvaluatorSpec {
    pub fn exact() -> Self {
        EvaluatorSpec {
            mode: EvaluatorMode::Exact,
            restriction: None,
        }
    }

    pub fn adversarial() -> Self {
        EvaluatorSpec {
            mode: EvaluatorMode::AdversarialAlpha,
            restriction: None,
        }
    }

    pub fn restricted(mut self, restriction: Restriction) -> Self {
        self.restriction = Some(restriction);
        self
    }

    pub fn resolve(&self, objective: Objective) -> Restriction {
        self.restriction
            .unwrap_or_else(|| Restriction::default_for(objective))
    }
}

impl Default for EvaluatorSpec {
    fn default() -> Self {
        Self::exact()
    }
}

/// One planning step's answer: the chosen solution, its biased value, and
/// the element the agent executes now.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub solution: Solution,
    #[serde(with = "crate::exact::serde_rational")]
    pub biased_value: Rational,
    pub pivot: ElementId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimum {
    pub value: u64,
    pub witness: Solution,
}

/// Feasible candidate sets of `inst` under `restriction`, in size-then-
/// lexicographic order. `within` further confines candidates to its subsets.
/// The empty set is never a candidate.
pub fn candidates(
    inst: &Instance,
    restriction: Restriction,
    within: Option<ElementSet>,
) -> Result<Vec<ElementSet>> {
    check_restriction(inst, restriction)?;
    let pool = match within {
        Some(w) => inst.remaining().intersection(w),
        None => inst.remaining(),
    };
    let mut out = Vec::new();
    if let ProblemKind::Explicit {
        family,
        closure: Closure::Raw,
    } = inst.kind()
    {
        for f in family {
            let set = f.difference(inst.committed());
            if set.is_empty() || !set.is_subset(pool) || out.contains(&set) {
                continue;
            }
            let keep = match restriction {
                Restriction::Unrestricted => true,
                Restriction::MinimalOnly => inst.minimal_set(set),
                Restriction::MaximalOnly => inst.maximal_set(set),
            };
            if keep {
                out.push(set);
            }
        }
    } else {
        if pool.len() > ENUMERATION_LIMIT {
            return Err(Error::SizeLimit {
                what: "candidate pool",
                size: pool.len(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let ids = pool.to_vec();
        match restriction {
            Restriction::Unrestricted => out.extend(
                subsets_of(pool).filter(|s| !s.is_empty() && inst.feasible_set(*s)),
            ),
            Restriction::MinimalOnly => {
                let mut suffix = vec![ElementSet::EMPTY; ids.len() + 1];
                for i in (0..ids.len()).rev() {
                    suffix[i] = suffix[i + 1].with(ids[i]);
                }
                minimal_search(inst, &ids, &suffix, 0, ElementSet::EMPTY, &mut out);
            }
            Restriction::MaximalOnly => {
                maximal_search(inst, &ids, 0, ElementSet::EMPTY, &mut out);
            }
        }
    }
    out.sort_by(|a, b| size_lex(*a, *b));
    Ok(out)
}

fn check_restriction(inst: &Instance, restriction: Restriction) -> Result<()> {
    match (restriction, inst.objective()) {
        (Restriction::MinimalOnly, Objective::Max) => Err(Error::InvalidConfig(format!(
            "minimal-only restriction on maximization kind {}",
            inst.kind().name()
        ))),
        (Restriction::MaximalOnly, Objective::Min) => Err(Error::InvalidConfig(format!(
            "maximal-only restriction on minimization kind {}",
            inst.kind().name()
        ))),
        _ => Ok(()),
    }
}

// Every proper subset of a minimal set of an upward-closed family is
// infeasible, so the search never needs to extend a feasible prefix.
fn minimal_search(
    inst: &Instance,
    ids: &[ElementId],
    suffix: &[ElementSet],
    idx: usize,
    chosen: ElementSet,
    out: &mut Vec<ElementSet>,
) {
    if inst.feasible_set(chosen) {
        if !chosen.is_empty() && inst.minimal_set(chosen) {
            out.push(chosen);
        }
        return;
    }
    if idx == ids.len() || !inst.feasible_set(chosen.union(suffix[idx])) {
        return;
    }
    minimal_search(inst, ids, suffix, idx + 1, chosen.with(ids[idx]), out);
    minimal_search(inst, ids, suffix, idx + 1, chosen, out);
}

fn maximal_search(
    inst: &Instance,
    ids: &[ElementId],
    idx: usize,
    chosen: ElementSet,
    out: &mut Vec<ElementSet>,
) {
    if idx == ids.len() {
        if !chosen.is_empty() && inst.maximal_set(chosen) {
            out.push(chosen);
        }
        return;
    }
    let grown = chosen.with(ids[idx]);
    if inst.feasible_set(grown) {
        maximal_search(inst, ids, idx + 1, grown, out);
    }
    maximal_search(inst, ids, idx + 1, chosen, out);
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    set: ElementSet,
    cost: u64,
    pivot: ElementId,
    key: u128,
}

struct Scorer<'a> {
    weights: &'a [u64],
    beta: SmallRatio,
    lightest: bool,
}

impl<'a> Scorer<'a> {
    fn new(inst: &'a Instance, bias: &Bias) -> Result<Self> {
        Ok(Scorer {
            weights: inst.weights(),
            beta: SmallRatio::from_rational(bias.beta())?,
            lightest: bias.pivot_is_lightest(),
        })
    }

    fn score(&self, set: ElementSet) -> Result<Scored> {
        let pivot = pivot_of(self.weights, set, self.lightest).expect("candidates are nonempty");
        let cost: u64 = set.iter().map(|i| self.weights[i]).sum();
        let pw = self.weights[pivot] as u128;
        let key = self
            .beta
            .den
            .checked_mul(pw)
            .and_then(|a| {
                self.beta
                    .num
                    .checked_mul(cost as u128 - pw)
                    .and_then(|b| a.checked_add(b))
            })
            .ok_or_else(|| Error::InvalidConfig("biased value overflows 128 bits".into()))?;
        Ok(Scored {
            set,
            cost,
            pivot,
            key,
        })
    }

    fn evaluation(&self, s: &Scored) -> Evaluation {
        let value = Rational::new(s.key.into(), self.beta.den.into());
        Evaluation {
            solution: Solution::from_set(s.set),
            biased_value: value,
            pivot: s.pivot,
        }
    }
}

/// Better biased value first, then smaller plain cost, then the earlier set
/// in size-then-lexicographic order.
fn exact_order(objective: Objective, a: &Scored, b: &Scored) -> Ordering {
    let by_key = match objective {
        Objective::Min => a.key.cmp(&b.key),
        Objective::Max => b.key.cmp(&a.key),
    };
    by_key
        .then_with(|| a.cost.cmp(&b.cost))
        .then_with(|| size_lex(a.set, b.set))
}

fn size_lex(a: ElementSet, b: ElementSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.lex_cmp(b))
}

fn scored_candidates(
    inst: &Instance,
    scorer: &Scorer<'_>,
    restriction: Restriction,
    within: Option<ElementSet>,
) -> Result<Vec<Scored>> {
    let sets = candidates(inst, restriction, within)?;
    if sets.is_empty() {
        return Err(Error::Infeasible(format!(
            "{} instance with {} committed elements has no nonempty candidate",
            inst.kind().name(),
            inst.committed().len()
        )));
    }
    sets.into_iter().map(|s| scorer.score(s)).collect()
}

fn check_objective(inst: &Instance, bias: &Bias) -> Result<()> {
    if inst.objective() != bias.objective() {
        return Err(Error::InvalidConfig(format!(
            "{} is a {} kind but the bias objective is {}",
            inst.kind().name(),
            inst.objective(),
            bias.objective()
        )));
    }
    Ok(())
}

/// The exact optimizer of the biased value over the candidate family.
pub fn exact_biased_optimum(
    inst: &Instance,
    bias: &Bias,
    restriction: Restriction,
) -> Result<Evaluation> {
    exact_within(inst, bias, restriction, None)
}

pub(crate) fn exact_within(
    inst: &Instance,
    bias: &Bias,
    restriction: Restriction,
    within: Option<ElementSet>,
) -> Result<Evaluation> {
    check_objective(inst, bias)?;
    let scorer = Scorer::new(inst, bias)?;
    let scored = scored_candidates(inst, &scorer, restriction, within)?;
    let best = scored
        .iter()
        .min_by(|a, b| exact_order(bias.objective(), a, b))
        .expect("nonempty");
    Ok(scorer.evaluation(best))
}

/// An adversarial `alpha`-approximate optimizer: among the candidates whose
/// biased value is within factor `alpha` of the optimum, it returns one with
/// the worst plain cost, breaking remaining ties with `seed`. With
/// `alpha = 1` it coincides with [`exact_biased_optimum`].
pub fn adversarial_alpha(
    inst: &Instance,
    bias: &Bias,
    restriction: Restriction,
    seed: u64,
) -> Result<Evaluation> {
    adversarial_within(inst, bias, restriction, None, seed)
}

pub(crate) fn adversarial_within(
    inst: &Instance,
    bias: &Bias,
    restriction: Restriction,
    within: Option<ElementSet>,
    seed: u64,
) -> Result<Evaluation> {
    if bias.alpha().is_one() {
        return exact_within(inst, bias, restriction, within);
    }
    check_objective(inst, bias)?;
    let alpha = SmallRatio::from_rational(bias.alpha())?;
    let scorer = Scorer::new(inst, bias)?;
    let scored = scored_candidates(inst, &scorer, restriction, within)?;
    let objective = bias.objective();
    let best = match objective {
        Objective::Min => scored.iter().map(|s| s.key).min(),
        Objective::Max => scored.iter().map(|s| s.key).max(),
    }
    .expect("nonempty");
    let overflow = || Error::InvalidConfig("approximation window overflows 128 bits".into());
    let scaled_best = alpha.num.checked_mul(best).ok_or_else(overflow)?;
    let mut window = Vec::new();
    for s in &scored {
        let scaled = alpha.den.checked_mul(s.key).ok_or_else(overflow)?;
        let inside = match objective {
            Objective::Min => scaled <= scaled_best,
            // For maximization the window is value >= best / alpha.
            Objective::Max => alpha.num.checked_mul(s.key).ok_or_else(overflow)?
                >= alpha.den.checked_mul(best).ok_or_else(overflow)?,
        };
        if inside {
            window.push(*s);
        }
    }
    let worst = match objective {
        Objective::Min => window.iter().map(|s| s.cost).max(),
        Objective::Max => window.iter().map(|s| s.cost).min(),
    }
    .expect("window contains the optimum");
    let mut tied: Vec<Scored> = window.into_iter().filter(|s| s.cost == worst).collect();
    tied.sort_by(|a, b| size_lex(a.set, b.set));
    let pick = if tied.len() == 1 {
        0
    } else {
        ChaCha8Rng::seed_from_u64(seed).gen_range(0..tied.len())
    };
    Ok(scorer.evaluation(&tied[pick]))
}

/// The exact plain-cost optimum over all feasible solutions, with a witness.
///
/// Minimal (resp. maximal) feasible sets suffice because weights are
/// non-negative. Ties go to the earliest witness in size-then-lexicographic order.
pub fn exact_opt(inst: &Instance) -> Result<Optimum> {
    let objective = inst.objective();
    if objective == Objective::Min && inst.feasible_set(ElementSet::EMPTY) {
        return Ok(Optimum {
            value: 0,
            witness: Solution::empty(),
        });
    }
    let restriction = if inst.is_raw() {
        Restriction::Unrestricted
    } else {
        Restriction::default_for(objective)
    };
    let sets = candidates(inst, restriction, None)?;
    let scored = sets.into_iter().map(|s| (inst.cost_of(s), s));
    let best = match objective {
        Objective::Min => scored.min_by(|a, b| a.0.cmp(&b.0).then_with(|| size_lex(a.1, b.1))),
        Objective::Max => scored.min_by(|a, b| b.0.cmp(&a.0).then_with(|| size_lex(a.1, b.1))),
    };
    match best {
        Some((value, set)) => Ok(Optimum {
            value,
            witness: Solution::from_set(set),
        }),
        None if objective == Objective::Max => Ok(Optimum {
            value: 0,
            witness: Solution::empty(),
        }),
        None => Err(Error::Infeasible(format!(
            "{} instance admits no feasible solution",
            inst.kind().name()
        ))),
    }
}

/// Dispatches on the evaluator mode.
pub fn evaluate(
    inst: &Instance,
    bias: &Bias,
    spec: &EvaluatorSpec,
    within: Option<ElementSet>,
    seed: u64,
) -> Result<Evaluation> {
    let restriction = spec.resolve(bias.objective());
    match spec.mode {
        EvaluatorMode::Exact => {
            if !bias.alpha().is_one() {
                return Err(Error::InvalidConfig(format!(
                    "exact evaluator requires alpha = 1, got {}",
                    bias.alpha()
                )));
            }
            exact_within(inst, bias, restriction, within)
        }
        EvaluatorMode::AdversarialAlpha => adversarial_within(inst, bias, restriction, within, seed),
    }
}

/// Checks that an evaluation's value lies inside the `alpha` window of the
/// exact optimum over the same family.
pub fn within_window(best: &Rational, value: &Rational, alpha: &Rational, objective: Objective) -> bool {
    match objective {
        Objective::Min => value <= &(alpha * best),
        Objective::Max => value * alpha >= *best,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use crate::instances;

    #[test]
    fn isc2_minimal_optimum_is_all_singletons() {
        let inst = instances::isc(2, 3).unwrap();
        let bias = Bias::min(ratio(1, 4)).unwrap();
        let cands = candidates(&inst, Restriction::MinimalOnly, None).unwrap();
        // {y1}, {x1, y2}, {x1, x2}
        assert_eq!(cands.len(), 3);
        let values: Vec<Rational> = cands
            .iter()
            .map(|s| inst.biased_cost(&Solution::from_set(*s), &bias).unwrap())
            .collect();
        assert!(values.contains(&int(3)));
        assert!(values.contains(&ratio(7, 4)));
        assert!(values.contains(&ratio(5, 4)));
        let ev = exact_biased_optimum(&inst, &bias, Restriction::MinimalOnly).unwrap();
        assert_eq!(ev.solution.members(), &[0, 1]);
        assert_eq!(ev.pivot, 0);
        assert_eq!(ev.biased_value, ratio(5, 4));
    }

    #[test]
    fn unbiased_agent_finds_plain_optimum() {
        let inst = instances::isc(4, 3).unwrap();
        let bias = Bias::min(int(1)).unwrap();
        let ev = exact_biased_optimum(&inst, &bias, Restriction::MinimalOnly).unwrap();
        let opt = exact_opt(&inst).unwrap();
        assert_eq!(inst.plain_cost(&ev.solution).unwrap(), opt.value);
    }

    #[test]
    fn gk_prefers_the_light_pivot() {
        let inst = instances::gk(4, 2).unwrap();
        let bias = Bias::max(int(2)).unwrap();
        let ev = exact_biased_optimum(&inst, &bias, Restriction::MaximalOnly).unwrap();
        assert_eq!(ev.biased_value, int(17));
        assert_eq!(inst.label(ev.pivot), "y4");
        let labels: Vec<String> = ev.solution.members().iter().map(|&i| inst.label(i)).collect();
        assert_eq!(labels, vec!["y4", "x3"]);
    }

    #[test]
    fn adversarial_alpha_one_is_exact() {
        let inst = instances::isc(3, 2).unwrap();
        let bias = Bias::min(ratio(1, 3)).unwrap();
        let a = adversarial_alpha(&inst, &bias, Restriction::MinimalOnly, 99).unwrap();
        let e = exact_biased_optimum(&inst, &bias, Restriction::MinimalOnly).unwrap();
        assert_eq!(a, e);
    }

    #[test]
    fn adversarial_window_admits_expensive_plan() {
        let inst = instances::isc(2, 3).unwrap();
        let bias = Bias::min(ratio(1, 4)).unwrap().with_alpha(int(3)).unwrap();
        let ev = adversarial_alpha(&inst, &bias, Restriction::MinimalOnly, 7).unwrap();
        // window c_b <= 15/4 contains {y1} (3), {x1,y2} (7/4), {x1,x2} (5/4);
        // worst plain cost is {x1, y2} with 4.
        assert_eq!(inst.plain_cost(&ev.solution).unwrap(), 4);
        assert!(ev.biased_value <= ratio(15, 4));
        assert!(ev.solution.contains(2) || ev.solution.contains(3));
    }

    #[test]
    fn adversarial_is_deterministic_per_seed() {
        let inst = instances::superfluous_cover(5, 3).unwrap();
        let bias = Bias::min(ratio(1, 2)).unwrap().with_alpha(int(2)).unwrap();
        for seed in 0..5 {
            let a = adversarial_alpha(&inst, &bias, Restriction::Unrestricted, seed).unwrap();
            let b = adversarial_alpha(&inst, &bias, Restriction::Unrestricted, seed).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn opt_of_named_families() {
        let isc = instances::isc(5, 3).unwrap();
        let opt = exact_opt(&isc).unwrap();
        assert_eq!(opt.value, 3);
        assert_eq!(isc.label(opt.witness.members()[0]), "y1");
        let gk = instances::gk(4, 2).unwrap();
        let opt = exact_opt(&gk).unwrap();
        assert_eq!(opt.value, 16);
        assert_eq!(gk.label(opt.witness.members()[0]), "x4");
        let single = Instance::set_cover(3, vec![vec![0, 1, 2]], vec![7]).unwrap();
        assert_eq!(exact_opt(&single).unwrap().value, 7);
    }

    #[test]
    fn restriction_kind_mismatch_is_rejected() {
        let gk = instances::gk(2, 2).unwrap();
        assert!(matches!(
            candidates(&gk, Restriction::MinimalOnly, None),
            Err(Error::InvalidConfig(_))
        ));
        let bias = Bias::min(ratio(1, 2)).unwrap();
        assert!(exact_biased_optimum(&gk, &bias, Restriction::Unrestricted).is_err());
    }

    #[test]
    fn size_limit_is_explicit() {
        let inst = Instance::explicit(vec![vec![0]], vec![1; 30], Closure::Up).unwrap();
        let bias = Bias::min(ratio(1, 2)).unwrap();
        assert!(matches!(
            exact_biased_optimum(&inst, &bias, Restriction::Unrestricted),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn exact_mode_rejects_alpha() {
        let inst = instances::isc(2, 3).unwrap();
        let bias = Bias::min(ratio(1, 2)).unwrap().with_alpha(int(2)).unwrap();
        assert!(evaluate(&inst, &bias, &EvaluatorSpec::exact(), None, 0).is_err());
    }
}
