//! The verification suite: every claim checked on seeded, exhaustively
//! solvable instances.
//!
//! Each criterion returns how many cases it checked and the first few
//! failures. `Quick` runs reduced sample counts; `Full` runs the complete
//! grids.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::agent::{run_agent, AgentConfig, Consistency};
use crate::analysis::{self, bound_report, dhit_step_bound, extract_minor, find_sunflower};
use crate::evaluators::{EvaluatorSpec, Restriction};
use crate::exact::{int, pow, ratio, ExtRational, Rational};
use crate::instances;
use crate::problem::{Bias, ElementSet, Instance, Objective};
use crate::taskgraph::{
    akerlof_graph, all_path_lengths, biased_walk, instance_to_taskgraph, random_dag,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            other => Err(crate::Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

impl Suite {
    fn count(self, full: usize) -> usize {
        match self {
            Suite::Quick => (full / 5).max(1),
            Suite::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures.is_empty()
    }

    /// `PASS <id> <name> (<checked> cases)` or `FAIL ... first failure`.
    pub fn line(&self) -> String {
        if self.passed() {
            format!("PASS {:>2} {} ({} cases)", self.id, self.name, self.checked)
        } else if self.failures.is_empty() {
            format!("FAIL {:>2} {}: no cases ran", self.id, self.name)
        } else {
            format!(
                "FAIL {:>2} {} ({} of {} cases): {}",
                self.id,
                self.name,
                self.failures.len(),
                self.checked,
                self.failures[0]
            )
        }
    }
}

pub const CRITERIA: [(u8, &str); 14] = [
    (1, "procrastination family"),
    (2, "superfluous family"),
    (3, "linear bound"),
    (4, "minor extraction"),
    (5, "consistent agent"),
    (6, "overestimating minimizer"),
    (7, "underestimating maximizer"),
    (8, "overestimating maximizer"),
    (9, "tight maximization families"),
    (10, "d-set cover bound"),
    (11, "d-hitting set bound"),
    (12, "sunflowers"),
    (13, "procrastination walk"),
    (14, "walk equals agent"),
];

/// Runs one criterion.
pub fn run_criterion(id: u8, suite: Suite, seed: u64) -> Outcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| n);
    let cases: Vec<Check> = match id {
        1 => procrastination(),
        2 => superfluous(),
        3 => linear_bound(suite, seed),
        4 => minor_extraction(),
        5 => consistent(suite, seed),
        6 => min_over(suite, seed),
        7 => max_under(suite, seed),
        8 => max_over(suite, seed),
        9 => tight_families(),
        10 => d_cover(suite, seed),
        11 => d_hitting(suite, seed),
        12 => sunflowers(suite, seed),
        13 => akerlof(),
        14 => cross_oracle(suite, seed),
        _ => Vec::new(),
    };
    Outcome {
        id,
        name,
        checked: cases.len(),
        failures: cases.into_iter().filter_map(|c| c.err()).collect(),
    }
}

/// Runs all criteria in order.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, suite, seed))
        .collect()
}

/// A criterion that must fail: one bound entry with `2 <= 1`. Exercises the
/// failure path of callers.
pub fn injected_violation() -> Outcome {
    Outcome {
        id: 0,
        name: "injected violation",
        checked: 1,
        failures: vec!["synthetic bound 2 <= 1 does not hold".into()],
    }
}

/// `Ok(())` for a passing case, `Err(description)` otherwise.
type Check = std::result::Result<(), String>;

fn check(ok: bool, describe: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(describe())
    }
}

fn flatten(r: Result<Check>, context: impl FnOnce() -> String) -> Check {
    match r {
        Ok(c) => c,
        Err(e) => Err(format!("{}: {e}", context())),
    }
}

fn mix(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x2545_F491_4F6C_DD1D) ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

const UNDER_GRID: [(i64, i64); 8] = [
    (1, 10),
    (1, 4),
    (1, 3),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (9, 10),
];

/// `(n, c, beta)` with `1 + beta c < c`.
fn procrastination_grid() -> Vec<(usize, u64, Rational)> {
    let mut out = Vec::new();
    for n in 2..=10 {
        for c in [2u64, 3, 5] {
            for &(p, q) in &UNDER_GRID {
                let beta = ratio(p, q);
                if int(1) + &beta * int(c) < int(c) {
                    out.push((n, c, beta));
                }
            }
        }
    }
    out
}

fn min_agent(beta: &Rational) -> AgentConfig {
    AgentConfig::new(Bias::min(beta.clone()).expect("positive beta"))
}

fn procrastination_run(n: usize, c: u64, beta: &Rational) -> Result<(Instance, crate::agent::AgentTrace)> {
    let inst = instances::isc(n, c)?;
    let trace = run_agent(&inst, &min_agent(beta))?;
    Ok((inst, trace))
}

fn procrastination() -> Vec<Check> {
    procrastination_grid()
        .par_iter()
        .map(|(n, c, beta)| {
            let ctx = || format!("isc({n}, {c}) beta={beta}");
            flatten(
                procrastination_run(*n, *c, beta).map(|(_, trace)| {
                    let expected = ExtRational::quotient(*n as u64, (*n as u64).min(*c));
                    let pivots: Vec<usize> = (0..*n).collect();
                    check(trace.pivots() == pivots && trace.ratio == expected, || {
                        format!("{}: pivots {:?}, ratio {}", ctx(), trace.pivots(), trace.ratio)
                    })
                }),
                ctx,
            )
        })
        .collect()
}

fn superfluous() -> Vec<Check> {
    let grid = procrastination_grid();
    let free = grid.par_iter().map(|(n, c, beta)| {
        let ctx = || format!("superfluous_cover({n}, {c}) beta={beta} unrestricted");
        let run = || -> Result<Check> {
            let inst = instances::superfluous_cover(*n, *c)?;
            let cfg = min_agent(beta)
                .with_evaluator(EvaluatorSpec::exact().restricted(Restriction::Unrestricted));
            let trace = run_agent(&inst, &cfg)?;
            let expected = ExtRational::quotient(*n as u64, (*n as u64).min(*c));
            Ok(check(trace.ratio == expected, || {
                format!("{}: ratio {}", ctx(), trace.ratio)
            }))
        };
        flatten(run(), ctx)
    });
    let minimal = grid
        .par_iter()
        .filter(|(n, c, beta)| int(*c) < int(1) + beta * int(*n as u64 - 1))
        .map(|(n, c, beta)| {
            let ctx = || format!("superfluous_cover({n}, {c}) beta={beta} minimal");
            let run = || -> Result<Check> {
                let inst = instances::superfluous_cover(*n, *c)?;
                let trace = run_agent(&inst, &min_agent(beta))?;
                Ok(check(trace.ratio == ExtRational::Finite(int(1)), || {
                    format!("{}: ratio {}", ctx(), trace.ratio)
                }))
            };
            flatten(run(), ctx)
        });
    free.chain(minimal).collect()
}

/// Random set cover or hitting set with at most ten elements.
fn random_min_instance(seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(3..=5);
        let m = rng.gen_range(3..=5);
        let d = rng.gen_range(2..=3);
        instances::random_d_cover(rng.gen(), n, m, d, 9)
    } else {
        let n = rng.gen_range(5..=10);
        let m = rng.gen_range(3..=8);
        let d = rng.gen_range(2..=3);
        instances::random_d_hitting(rng.gen(), n, m, d, 9)
    }
}

fn random_max_instance(seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=10);
    if rng.gen_bool(0.5) {
        instances::random_independent_set(rng.gen(), n, rng.gen_range(20..=60), 9)
    } else {
        instances::random_knapsack(rng.gen(), n, 9, 9)
    }
}

const UNDER_BETAS: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];
const ALPHAS: [(i64, i64); 3] = [(1, 1), (3, 2), (2, 1)];

fn adversarial(beta: &Rational, alpha: &Rational, seed: u64) -> AgentConfig {
    let bias = Bias::min(beta.clone())
        .and_then(|b| b.with_alpha(alpha.clone()))
        .expect("valid grid");
    AgentConfig::new(bias)
        .with_evaluator(EvaluatorSpec::adversarial())
        .with_seed(seed)
}

/// Runs `body` for every (instance, beta, alpha) of the random minimization
/// suite.
fn min_suite<F>(suite: Suite, seed: u64, full: usize, alphas: &[(i64, i64)], body: F) -> Vec<Check>
where
    F: Fn(&Instance, &Rational, &Rational, u64) -> Result<Check> + Sync,
{
    (0..suite.count(full) as u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let s = mix(seed, i);
            let inst = random_min_instance(s);
            let mut out = Vec::new();
            for &(bp, bq) in &UNDER_BETAS {
                for &(ap, aq) in alphas {
                    let (beta, alpha) = (ratio(bp, bq), ratio(ap, aq));
                    let ctx = || format!("instance seed {s} beta={beta} alpha={alpha}");
                    out.push(match &inst {
                        Ok(inst) => flatten(body(inst, &beta, &alpha, s), ctx),
                        Err(e) => Err(format!("{}: {e}", ctx())),
                    });
                }
            }
            out
        })
        .collect()
}

fn bound_holds(report: &analysis::BoundReport, name: &str) -> Check {
    match report.entry(name) {
        Some(e) if e.applicable && e.holds => Ok(()),
        Some(e) if e.applicable => Err(format!(
            "{name}: {} > {}",
            e.lhs.as_ref().map_or("-".into(), |v| v.to_string()),
            e.rhs.as_ref().map_or("-".into(), |v| v.to_string())
        )),
        _ => Err(format!("{name} not applicable")),
    }
}

fn linear_bound(suite: Suite, seed: u64) -> Vec<Check> {
    min_suite(suite, seed, 500, &ALPHAS, |inst, beta, alpha, s| {
        let trace = run_agent(inst, &adversarial(beta, alpha, s))?;
        let report = bound_report(&trace, inst)?;
        if trace.steps.is_empty() {
            return Ok(Ok(()));
        }
        Ok(bound_holds(&report, analysis::LINEAR_K))
    })
}

fn minor_extraction() -> Vec<Check> {
    procrastination_grid()
        .par_iter()
        .map(|(n, c, beta)| {
            let ctx = || format!("minor of isc({n}, {c}) beta={beta}");
            let run = || -> Result<Check> {
                let (inst, trace) = procrastination_run(*n, *c, beta)?;
                let minor = extract_minor(&trace, &inst)?;
                Ok(check(minor.replay.ratio == trace.ratio, || {
                    format!("{}: replay {} vs {}", ctx(), minor.replay.ratio, trace.ratio)
                }))
            };
            flatten(run(), ctx)
        })
        .collect()
}

fn consistent(suite: Suite, seed: u64) -> Vec<Check> {
    min_suite(suite, seed, 500, &ALPHAS, |inst, beta, alpha, s| {
        let cfg = adversarial(beta, alpha, s).with_consistency(Consistency::ForbidInconsistent);
        let trace = run_agent(inst, &cfg)?;
        let report = bound_report(&trace, inst)?;
        let nested = trace
            .steps
            .first()
            .is_none_or(|s0| trace.final_solution.is_subset(&s0.evaluation.solution));
        Ok(bound_holds(&report, analysis::CONSISTENT).and_then(|_| {
            check(nested, || "final solution leaves the first plan".into())
        }))
    })
}

/// Random DAG with at most twelve vertices.
fn random_small_dag(seed: u64) -> Result<crate::taskgraph::WeightedDag> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=12);
    random_dag(rng.gen(), n, rng.gen_range(25..=70), 9)
}

/// Walks every random DAG and runs the agent on every random instance of
/// the given direction for each beta; `verdict` judges each outcome.
fn overall_suite(
    suite: Suite,
    seed: u64,
    objective: Objective,
    betas: &[Rational],
    verdict_dag: impl Fn(&Rational, u64, u64) -> bool + Sync,
    bound: &'static str,
) -> Vec<Check> {
    let count = suite.count(500) as u64;
    let dags = (0..count).into_par_iter().flat_map_iter(|i| {
        let s = mix(seed ^ 0xD1A6, i);
        let dag = random_small_dag(s);
        betas
            .iter()
            .map(|beta| {
                let ctx = || format!("dag seed {s} beta={beta}");
                let run = || -> Result<Check> {
                    let dag = dag.as_ref().map_err(|e| crate::Error::InvalidConfig(e.to_string()))?;
                    let bias = Bias::new(beta.clone(), objective, int(1))?;
                    let walk = biased_walk(dag, &bias)?;
                    let lengths = all_path_lengths(dag, dag.source());
                    let oracle = match objective {
                        Objective::Min => lengths.iter().min(),
                        Objective::Max => lengths.iter().max(),
                    }
                    .copied();
                    Ok(check(
                        oracle == Some(walk.optimum) && verdict_dag(beta, walk.length, walk.optimum),
                        || {
                            format!(
                                "{}: walk {} optimum {} oracle {:?}",
                                ctx(),
                                walk.length,
                                walk.optimum,
                                oracle
                            )
                        },
                    ))
                };
                flatten(run(), ctx)
            })
            .collect::<Vec<_>>()
    });
    let insts = (0..count).into_par_iter().flat_map_iter(|i| {
        let s = mix(seed ^ 0x1257, i);
        let inst = match objective {
            Objective::Min => random_min_instance(s),
            Objective::Max => random_max_instance(s),
        };
        betas
            .iter()
            .map(|beta| {
                let ctx = || format!("instance seed {s} beta={beta}");
                let run = || -> Result<Check> {
                    let inst = inst.as_ref().map_err(|e| crate::Error::InvalidConfig(e.to_string()))?;
                    let bias = Bias::new(beta.clone(), objective, int(1))?;
                    let trace = run_agent(inst, &AgentConfig::new(bias))?;
                    let report = bound_report(&trace, inst)?;
                    Ok(bound_holds(&report, bound))
                };
                flatten(run(), ctx)
            })
            .collect::<Vec<_>>()
    });
    dags.chain(insts).collect()
}

fn ratios(list: &[(i64, i64)]) -> Vec<Rational> {
    list.iter().map(|&(p, q)| ratio(p, q)).collect()
}

fn min_over(suite: Suite, seed: u64) -> Vec<Check> {
    overall_suite(
        suite,
        seed,
        Objective::Min,
        &ratios(&[(3, 2), (2, 1), (3, 1)]),
        |beta, length, opt| int(length) <= beta * int(opt),
        analysis::MIN_OVER,
    )
}

fn max_under(suite: Suite, seed: u64) -> Vec<Check> {
    overall_suite(
        suite,
        seed,
        Objective::Max,
        &ratios(&[(1, 3), (1, 2), (3, 4)]),
        |beta, length, opt| beta * int(opt) <= int(length),
        analysis::MAX_UNDER,
    )
}

fn max_over(suite: Suite, seed: u64) -> Vec<Check> {
    overall_suite(
        suite,
        seed,
        Objective::Max,
        &ratios(&[(3, 2), (2, 1)]),
        |beta, length, opt| int(opt) <= int(length) * pow(beta, length),
        analysis::MAX_OVER_EXP,
    )
}

fn tight_families() -> Vec<Check> {
    let mut cases: Vec<(&'static str, usize, u64)> = Vec::new();
    for beta in [2u64, 3] {
        cases.extend((1..=6).map(|k| ("gk", k, beta)));
        cases.extend((1..=4).map(|k| ("knapsack", k, beta)));
    }
    cases
        .par_iter()
        .map(|&(family, k, beta)| {
            let ctx = || format!("{family}({k}, {beta})");
            let run = || -> Result<Check> {
                let inst = match family {
                    "gk" => instances::gk(k, beta)?,
                    _ => instances::knapsack_family(k, beta)?,
                };
                let trace = run_agent(&inst, &AgentConfig::new(Bias::max(int(beta))?))?;
                let c = k as u64 + 1;
                let opt = beta.pow(k as u32);
                let expected = ExtRational::Finite(pow(&int(beta), c - 1) / int(c));
                Ok(check(
                    trace.final_cost == c && trace.opt == opt && trace.ratio == expected,
                    || {
                        format!(
                            "{}: cost {} opt {} ratio {}",
                            ctx(),
                            trace.final_cost,
                            trace.opt,
                            trace.ratio
                        )
                    },
                ))
            };
            flatten(run(), ctx)
        })
        .collect()
}

fn d_cover(suite: Suite, seed: u64) -> Vec<Check> {
    let count = suite.count(250) as u64;
    [2usize, 3]
        .par_iter()
        .flat_map_iter(|&d| (0..count).map(move |i| (d, mix(seed ^ 0xC0FE ^ d as u64, i))))
        .flat_map_iter(|(d, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.gen_range(3..=5);
            let m = rng.gen_range(3..=5);
            let inst = instances::random_d_cover(rng.gen(), n, m, d, 9);
            let mut out = Vec::new();
            for &(bp, bq) in &UNDER_BETAS {
                for &(ap, aq) in &[(1, 1), (2, 1)] {
                    let (beta, alpha) = (ratio(bp, bq), ratio(ap, aq));
                    let ctx = || format!("{d}-cover seed {s} beta={beta} alpha={alpha}");
                    let run = || -> Result<Check> {
                        let inst = inst.as_ref().map_err(|e| crate::Error::InvalidConfig(e.to_string()))?;
                        let trace = run_agent(inst, &adversarial(&beta, &alpha, s))?;
                        let report = bound_report(&trace, inst)?;
                        Ok(bound_holds(&report, analysis::DCOVER))
                    };
                    out.push(flatten(run(), ctx));
                }
            }
            out
        })
        .collect()
}

fn d_hitting(suite: Suite, seed: u64) -> Vec<Check> {
    let count = suite.count(500) as u64;
    (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let s = mix(seed ^ 0x4177, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.gen_range(3..=10);
            let m = rng.gen_range(1..=8);
            let inst = instances::random_d_hitting(rng.gen(), n, m, 2, 3);
            let mut out = Vec::new();
            for &(bp, bq) in &UNDER_BETAS {
                for &(ap, aq) in &[(1, 1), (2, 1)] {
                    let (beta, alpha) = (ratio(bp, bq), ratio(ap, aq));
                    let ctx = || format!("2-hitting seed {s} beta={beta} alpha={alpha}");
                    let run = || -> Result<Check> {
                        let inst = inst.as_ref().map_err(|e| crate::Error::InvalidConfig(e.to_string()))?;
                        let trace = run_agent(inst, &adversarial(&beta, &alpha, s))?;
                        let report = bound_report(&trace, inst)?;
                        let steps = dhit_step_bound(&trace, inst)?;
                        Ok(bound_holds(&report, analysis::DHIT)
                            .and_then(|_| bound_holds(&report, analysis::DHIT_STEPS))
                            .and_then(|_| {
                                check(steps.holds && steps.private_sets == Some(true), || {
                                    format!("step bound {steps:?}")
                                })
                            }))
                    };
                    out.push(flatten(run(), ctx));
                }
            }
            out
        })
        .collect()
}

/// A random family of distinct `d`-subsets of `0..16` just above the
/// sunflower threshold for `k` petals.
pub fn random_sunflower_family(seed: u64) -> (Vec<ElementSet>, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=4);
    let threshold = analysis::sunflower_threshold(d, k);
    let threshold: usize = threshold.to_integer().try_into().expect("small threshold");
    let size = threshold + 1 + rng.gen_range(0..=4);
    let universe = 16;
    let mut family: Vec<ElementSet> = Vec::with_capacity(size);
    while family.len() < size {
        let s: ElementSet = sample(&mut rng, universe, d).into_iter().collect();
        if !family.contains(&s) {
            family.push(s);
        }
    }
    (family, d, k)
}

fn sunflowers(suite: Suite, seed: u64) -> Vec<Check> {
    (0..suite.count(200) as u64)
        .into_par_iter()
        .map(|i| {
            let s = mix(seed ^ 0x5F10, i);
            let (family, d, k) = random_sunflower_family(s);
            let ctx = || format!("family seed {s} d={d} k={k} size={}", family.len());
            flatten(
                find_sunflower(&family, k).map(|found| {
                    check(
                        found.is_some_and(|f| {
                            f.petals().len() == k
                                && analysis::Sunflower::new(&family, f.petals().to_vec()).is_ok()
                        }),
                        || format!("{}: no sunflower", ctx()),
                    )
                }),
                ctx,
            )
        })
        .collect()
}

fn akerlof() -> Vec<Check> {
    let mut out = Vec::new();
    let procrastinating = [(1u64, 4u64, ratio(1, 2)), (1, 10, ratio(1, 4)), (2, 5, ratio(1, 2))];
    for (x, c, beta) in &procrastinating {
        let mut last: Option<Rational> = None;
        for n in 1..=10usize {
            let ctx = || format!("akerlof({n}, {x}, {c}) beta={beta}");
            let mut run = || -> Result<Check> {
                let walk = biased_walk(&akerlof_graph(n, *x, *c)?, &Bias::min(beta.clone())?)?;
                let mut path = vec![0];
                path.extend(2..n + 2);
                path.push(1);
                let expected = ratio((n as u64 * x + c) as i64, *c as i64);
                let grows = last.as_ref().is_none_or(|l| l < &expected);
                last = Some(expected.clone());
                Ok(check(
                    walk.path == path && walk.ratio == ExtRational::Finite(expected) && grows,
                    || format!("{}: path {:?} ratio {}", ctx(), walk.path, walk.ratio),
                ))
            };
            out.push(flatten(run(), ctx));
        }
    }
    for (x, c, beta) in [(1u64, 4u64, ratio(3, 4)), (1, 4, ratio(9, 10)), (2, 5, ratio(2, 3))] {
        let ctx = || format!("akerlof(5, {x}, {c}) beta={beta}");
        let run = || -> Result<Check> {
            let walk = biased_walk(&akerlof_graph(5, x, c)?, &Bias::min(beta.clone())?)?;
            Ok(check(walk.path == [0, 1], || {
                format!("{}: path {:?}", ctx(), walk.path)
            }))
        };
        out.push(flatten(run(), ctx));
    }
    out
}

/// Named and random instances with at most eight elements.
pub fn small_instances(suite: Suite, seed: u64) -> Vec<(String, Instance)> {
    let mut out: Vec<(String, Instance)> = Vec::new();
    let mut push = |name: String, inst: Result<Instance>| {
        if let Ok(inst) = inst {
            if inst.ground_size() <= 8 {
                out.push((name, inst));
            }
        }
    };
    for n in 1..=4 {
        for c in [2, 3, 5] {
            push(format!("isc({n}, {c})"), instances::isc(n, c));
        }
    }
    for n in 1..=7 {
        push(format!("superfluous_cover({n}, 3)"), instances::superfluous_cover(n, 3));
    }
    for k in 1..=3 {
        for b in [2, 3] {
            push(format!("gk({k}, {b})"), instances::gk(k, b));
            push(format!("knapsack_family({k}, {b})"), instances::knapsack_family(k, b));
        }
    }
    for i in 0..suite.count(300) as u64 {
        let s = mix(seed ^ 0xE3BE, i);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let inst = match rng.gen_range(0..4) {
            0 => instances::random_d_cover(rng.gen(), rng.gen_range(2..=4), rng.gen_range(2..=4), 3, 9),
            1 => instances::random_d_hitting(rng.gen(), rng.gen_range(3..=8), rng.gen_range(1..=6), rng.gen_range(1..=3).min(3), 9),
            2 => instances::random_independent_set(rng.gen(), rng.gen_range(2..=8), 40, 9),
            _ => instances::random_knapsack(rng.gen(), rng.gen_range(2..=8), 9, 9),
        };
        push(format!("random seed {s}"), inst);
    }
    out
}

const CROSS_BETAS: [(i64, i64); 6] = [(1, 4), (1, 2), (3, 4), (1, 1), (3, 2), (2, 1)];

fn cross_oracle(suite: Suite, seed: u64) -> Vec<Check> {
    small_instances(suite, seed)
        .par_iter()
        .flat_map_iter(|(name, inst)| {
            CROSS_BETAS.iter().map(move |&(p, q)| {
                let beta = ratio(p, q);
                let ctx = || format!("{name} beta={beta}");
                let run = || -> Result<Check> {
                    let objective = inst.objective();
                    let bias = Bias::new(beta.clone(), objective, int(1))?;
                    let cfg = AgentConfig::new(bias.clone())
                        .with_evaluator(EvaluatorSpec::exact().restricted(Restriction::Unrestricted));
                    let trace = run_agent(inst, &cfg)?;
                    let dag = match instance_to_taskgraph(inst) {
                        Ok(dag) => dag,
                        // Nothing to walk: the agent must take no step either.
                        Err(crate::Error::Unsupported(_)) => {
                            return Ok(check(trace.steps.is_empty(), || {
                                format!("{}: no embedding but {} steps", ctx(), trace.steps.len())
                            }))
                        }
                        Err(e) => return Err(e),
                    };
                    let walk = biased_walk(&dag, &bias)?;
                    Ok(check(walk.length == trace.final_cost, || {
                        format!("{}: walk {} agent {}", ctx(), walk.length, trace.final_cost)
                    }))
                };
                flatten(run(), ctx)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parses() {
        assert_eq!("quick".parse::<Suite>().unwrap(), Suite::Quick);
        assert!("medium".parse::<Suite>().is_err());
    }

    #[test]
    fn outcome_lines() {
        let ok = Outcome {
            id: 3,
            name: "linear bound",
            checked: 9,
            failures: vec![],
        };
        assert_eq!(ok.line(), "PASS  3 linear bound (9 cases)");
        assert!(!injected_violation().passed());
        assert!(injected_violation().line().starts_with("FAIL"));
    }

    #[test]
    fn procrastination_grid_respects_condition() {
        let grid = procrastination_grid();
        assert!(grid.iter().all(|(_, c, b)| int(1) + b * int(*c) < int(*c)));
        // c = 2 admits beta < 1/2 only: 1/10, 1/4, 1/3.
        assert_eq!(grid.iter().filter(|(n, c, _)| *n == 2 && *c == 2).count(), 3);
    }

    #[test]
    fn sunflower_families_exceed_threshold() {
        for s in 0..20 {
            let (family, d, k) = random_sunflower_family(s);
            assert!(int(family.len() as u64) > analysis::sunflower_threshold(d, k));
            assert!(family.iter().all(|f| f.len() == d));
        }
    }
}
