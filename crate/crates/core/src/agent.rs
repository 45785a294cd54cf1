//! The replanning loop of a present-biased agent.
//!
//! At step `k` the agent evaluates the residual instance `I_k`, commits the
//! pivot of the returned solution, and stops once the committed elements
//! solve the original task: a feasible set for minimization, a maximal
//! feasible set for maximization. Otherwise it moves to the residual
//! `I_{k+1} = I_k ∖ {x_k}` and plans again from scratch.

use serde::{Deserialize, Serialize};

use crate::evaluators::{evaluate, exact_opt, Evaluation, EvaluatorSpec};
use crate::exact::ExtRational;
use crate::problem::{Bias, ElementId, ElementSet, Instance, Objective, Solution};
use crate::{io, Error, Result};

/// Whether the agent may commit elements outside its earlier plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    #[default]
    Free,
    /// Each plan must be contained in the previous one, minus the element
    /// just committed. Minimization only.
    ForbidInconsistent,
}

impl std::str::FromStr for Consistency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Consistency::Free),
            "forbid_inconsistent" | "forbid" | "consistent" => Ok(Consistency::ForbidInconsistent),
            other => Err(Error::Parse(format!("unknown consistency mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub bias: Bias,
    pub evaluator: EvaluatorSpec,
    pub consistency: Consistency,
    pub seed: u64,
}

impl AgentConfig {
    /// Exact evaluator, default restriction, no consistency constraint.
    pub fn new(bias: Bias) -> Self {
        AgentConfig {
            bias,
            evaluator: EvaluatorSpec::exact(),
            consistency: Consistency::Free,
            seed: 0,
        }
    }

    pub fn with_evaluator(mut self, evaluator: EvaluatorSpec) -> Self {
        self.evaluator = evaluator;
        self
    }

    pub fn with_consistency(mut self, consistency: Consistency) -> Self {
        self.consistency = consistency;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step_index: usize,
    pub evaluation: Evaluation,
    /// Elements committed before this step, in commit order.
    pub committed_so_far: Vec<ElementId>,
    /// Plain optimum of the residual instance this step planned on.
    pub residual_opt: u64,
    pub residual_opt_witness: Solution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentTrace {
    pub instance_digest: String,
    pub config: AgentConfig,
    pub steps: Vec<StepRecord>,
    pub final_solution: Solution,
    pub final_cost: u64,
    pub opt: u64,
    pub ratio: ExtRational,
}

impl AgentTrace {
    pub fn pivots(&self) -> Vec<ElementId> {
        self.steps.iter().map(|s| s.evaluation.pivot).collect()
    }

    pub fn objective(&self) -> Objective {
        self.config.bias.objective()
    }
}

// Distinct, well-spread seeds per step so the adversary's tie-breaks do not
// repeat the same index pattern.
fn step_seed(seed: u64, step: usize) -> u64 {
    seed ^ (step as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Whether `inst`, after the commitments it carries, needs no further step.
fn finished(inst: &Instance, objective: Objective) -> bool {
    match objective {
        Objective::Min => inst.feasible_set(ElementSet::EMPTY),
        Objective::Max => inst
            .remaining()
            .iter()
            .all(|x| !inst.feasible_set(ElementSet::singleton(x))),
    }
}

/// Runs the agent to completion on `inst`.
///
/// For raw explicit families the stop test is that the committed elements
/// contain a listed set, which is what the residual semantics
/// `{S ∖ C : S ∈ F}` reach when the residual admits the empty set.
pub fn run_agent(inst: &Instance, cfg: &AgentConfig) -> Result<AgentTrace> {
    let objective = inst.objective();
    if cfg.bias.objective() != objective {
        return Err(Error::InvalidConfig(format!(
            "{} is a {objective} kind but the agent's objective is {}",
            inst.kind().name(),
            cfg.bias.objective()
        )));
    }
    if !inst.committed().is_empty() {
        return Err(Error::InvalidConfig(
            "the agent starts from an instance with no committed elements".into(),
        ));
    }
    if cfg.consistency == Consistency::ForbidInconsistent && objective == Objective::Max {
        return Err(Error::InvalidConfig(
            "consistency constraints are defined for minimization only".into(),
        ));
    }
    // Set cover, hitting set and up-closed families are upward closed, so
    // every residual is solvable iff the whole ground is feasible.
    if objective == Objective::Min && !inst.is_raw() && !inst.feasible_set(inst.ground()) {
        return Err(Error::ModelViolation(format!(
            "the full ground of this {} instance is infeasible",
            inst.kind().name()
        )));
    }

    let opt = exact_opt(inst)?;
    let mut current = inst.clone();
    let mut committed: Vec<ElementId> = Vec::new();
    let mut within: Option<ElementSet> = None;
    let mut steps = Vec::new();
    let limit = inst.ground_size();

    while !finished(&current, objective) {
        if steps.len() == limit {
            return Err(Error::ModelViolation(format!(
                "agent did not stop within {limit} steps"
            )));
        }
        let k = steps.len();
        let residual_opt = if k == 0 { opt.clone() } else { exact_opt(&current)? };
        let evaluation = evaluate(
            &current,
            &cfg.bias,
            &cfg.evaluator,
            within,
            step_seed(cfg.seed, k),
        )?;
        let pivot = evaluation.pivot;
        if cfg.consistency == Consistency::ForbidInconsistent {
            within = Some(evaluation.solution.to_set().without(pivot));
        }
        steps.push(StepRecord {
            step_index: k,
            evaluation,
            committed_so_far: committed.clone(),
            residual_opt: residual_opt.value,
            residual_opt_witness: residual_opt.witness,
        });
        committed.push(pivot);
        current = current.residual(pivot)?;
    }

    let final_solution = Solution::new(committed)?;
    let final_cost = inst.plain_cost(&final_solution)?;
    let ratio = match objective {
        Objective::Min => ExtRational::quotient(final_cost, opt.value),
        Objective::Max => ExtRational::quotient(opt.value, final_cost),
    };
    Ok(AgentTrace {
        instance_digest: io::instance_digest(inst),
        config: cfg.clone(),
        steps,
        final_solution,
        final_cost,
        opt: opt.value,
        ratio,
    })
}

/// `cost / OPT` for minimization, `OPT / cost` for maximization.
pub fn cost_ratio(trace: &AgentTrace) -> ExtRational {
    trace.ratio.clone()
}

/// The same quotient, read as the ratio of an `alpha`-approximate agent.
pub fn alpha_cost_ratio(trace: &AgentTrace) -> ExtRational {
    trace.ratio.clone()
}
