//! Task graphs: weighted DAGs walked by a present-biased agent.
//!
//! At vertex `v` the agent moves along the arc `(v, u)` optimizing
//! `w(v, u) + beta * c(u)`, where `c(u)` is the exact shortest (minimization)
//! or longest (maximization) `u`-`t` path length.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{int, ExtRational, Rational};
use crate::problem::{Bias, ElementSet, Instance, Objective};
use crate::{Error, Result};

/// Largest ground set [`instance_to_taskgraph`] expands into its state graph.
pub const EMBED_LIMIT: usize = 16;

/// A DAG with a source and a sink. Vertices are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDag {
    n: usize,
    arcs: Vec<(usize, usize, u64)>,
    s: usize,
    t: usize,
    out: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl WeightedDag {
    /// Validates ids and acyclicity.
    pub fn new(n: usize, arcs: Vec<(usize, usize, u64)>, s: usize, t: usize) -> Result<Self> {
        if s >= n || t >= n {
            return Err(Error::Structural(format!(
                "source {s} or sink {t} outside 0..{n}"
            )));
        }
        if s == t {
            return Err(Error::Structural("source and sink coincide".into()));
        }
        let mut out = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for (i, &(u, v, _)) in arcs.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Structural(format!("arc ({u}, {v}) outside 0..{n}")));
            }
            out[u].push(i);
            indegree[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            topo.push(u);
            for &a in &out[u] {
                let v = arcs[a].1;
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::Structural("graph has a cycle".into()));
        }
        Ok(WeightedDag {
            n,
            arcs,
            s,
            t,
            out,
            topo,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize, u64)] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.s
    }

    pub fn sink(&self) -> usize {
        self.t
    }

    /// Indices into [`arcs`](Self::arcs) of the arcs leaving `v`.
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Vertices in a topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Extremal `v`-`t` path length for every vertex; `None` where `t` is
    /// unreachable. Paths end at the first visit of `t`.
    pub fn extremal_costs(&self, objective: Objective) -> Vec<Option<u64>> {
        let mut ext = vec![None; self.n];
        for &v in self.topo.iter().rev() {
            if v == self.t {
                ext[v] = Some(0);
                continue;
            }
            let options = self.out[v].iter().filter_map(|&a| {
                let (_, u, w) = self.arcs[a];
                ext[u].map(|c: u64| c + w)
            });
            ext[v] = match objective {
                Objective::Min => options.min(),
                Objective::Max => options.max(),
            };
        }
        ext
    }
}

/// `c^min(v)` or `c^max(v)`.
pub fn extremal_cost(dag: &WeightedDag, v: usize, objective: Objective) -> Result<u64> {
    if v >= dag.n {
        return Err(Error::Structural(format!("vertex {v} outside 0..{}", dag.n)));
    }
    dag.extremal_costs(objective)[v].ok_or(Error::Unreachable(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkResult {
    pub path: Vec<usize>,
    pub length: u64,
    pub optimum: u64,
    pub ratio: ExtRational,
}

/// The biased walk from the source.
pub fn biased_walk(dag: &WeightedDag, bias: &Bias) -> Result<WalkResult> {
    biased_walk_from(dag, bias, dag.s)
}

/// The biased walk from `start` to the sink.
///
/// Ties go to the smaller true value `w + c(u)`, then the smaller target id,
/// then the earlier arc. Errors if a vertex reachable from `start` cannot
/// reach the sink.
pub fn biased_walk_from(dag: &WeightedDag, bias: &Bias, start: usize) -> Result<WalkResult> {
    if !bias.alpha().is_one() {
        return Err(Error::InvalidConfig(format!(
            "walks use the exact estimator; alpha must be 1, got {}",
            bias.alpha()
        )));
    }
    let ext = dag.extremal_costs(bias.objective());
    check_reachability(dag, start, &ext)?;
    let objective = bias.objective();
    let mut path = vec![start];
    let mut length = 0u64;
    let mut cur = start;
    while cur != dag.t {
        let mut best: Option<(Rational, u64, usize, usize)> = None;
        for &a in &dag.out[cur] {
            let (_, u, w) = dag.arcs[a];
            let Some(c) = ext[u] else { continue };
            let cand = (int(w) + bias.beta() * int(c), w + c, u, a);
            let better = match &best {
                None => true,
                Some(b) => {
                    let by_value = match objective {
                        Objective::Min => cand.0.cmp(&b.0),
                        Objective::Max => b.0.cmp(&cand.0),
                    };
                    by_value
                        .then(cand.1.cmp(&b.1))
                        .then(cand.2.cmp(&b.2))
                        .then(cand.3.cmp(&b.3))
                        == Ordering::Less
                }
            };
            if better {
                best = Some(cand);
            }
        }
        let (_, _, u, a) = best.ok_or(Error::Unreachable(cur))?;
        length += dag.arcs[a].2;
        path.push(u);
        cur = u;
    }
    let optimum = ext[start].expect("checked reachable");
    let ratio = match objective {
        Objective::Min => ExtRational::quotient(length, optimum),
        Objective::Max => ExtRational::quotient(optimum, length),
    };
    Ok(WalkResult {
        path,
        length,
        optimum,
        ratio,
    })
}

fn check_reachability(dag: &WeightedDag, start: usize, ext: &[Option<u64>]) -> Result<()> {
    if start >= dag.n {
        return Err(Error::Structural(format!("vertex {start} outside 0..{}", dag.n)));
    }
    let mut seen = vec![false; dag.n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        if ext[v].is_none() {
            return Err(Error::Unreachable(v));
        }
        if v == dag.t {
            continue;
        }
        for &a in &dag.out[v] {
            let u = dag.arcs[a].1;
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    Ok(())
}

/// The procrastination structure: `s = 0`, `t = 1`, `v_i = i + 1`.
///
/// Arcs are `s -> t` of weight `c`, `s -> v_1` and `v_i -> v_{i+1}` of weight
/// `x`, and `v_i -> t` of weight `c`.
pub fn akerlof_graph(n: usize, x: u64, c: u64) -> Result<WeightedDag> {
    if n < 1 || x >= c {
        return Err(Error::InvalidConfig(format!(
            "akerlof_graph needs n >= 1 and x < c, got n={n}, x={x}, c={c}"
        )));
    }
    let v = |i: usize| i + 1;
    let mut arcs = vec![(0, 1, c), (0, v(1), x)];
    for i in 1..=n {
        if i < n {
            arcs.push((v(i), v(i + 1), x));
        }
        arcs.push((v(i), 1, c));
    }
    WeightedDag::new(n + 2, arcs, 0, 1)
}

/// Random DAG on `0..n` with `s = 0`, `t = n - 1`. Each forward arc is present
/// with probability `percent / 100`; a vertex left without out-arcs gets one
/// to `t`. Weights lie in `1..=wmax`.
pub fn random_dag(seed: u64, n: usize, percent: u32, wmax: u64) -> Result<WeightedDag> {
    if n < 2 || wmax < 1 || percent > 100 {
        return Err(Error::InvalidConfig(format!(
            "random_dag needs n >= 2, wmax >= 1, percent <= 100, got n={n}, wmax={wmax}, percent={percent}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n - 1 {
        let before = arcs.len();
        for v in u + 1..n {
            if rng.gen_range(0..100) < percent {
                arcs.push((u, v, rng.gen_range(1..=wmax)));
            }
        }
        if arcs.len() == before {
            arcs.push((u, n - 1, rng.gen_range(1..=wmax)));
        }
    }
    WeightedDag::new(n, arcs, 0, n - 1)
}

/// The state graph of `inst`: one vertex per reachable set of committed
/// elements, one arc per commitment weighted by the element.
///
/// For minimization, committing an element that makes the set feasible
/// leads to the sink. For maximization, states are feasible non-maximal
/// sets and an arc leads to the sink when the extended set is maximal. The
/// source is the starting state, the sink is vertex 1, and the other states
/// follow in size-then-lexicographic order.
pub fn instance_to_taskgraph(inst: &Instance) -> Result<WeightedDag> {
    let n = inst.ground_size();
    if n > EMBED_LIMIT {
        return Err(Error::SizeLimit {
            what: "ground set",
            size: n,
            limit: EMBED_LIMIT,
        });
    }
    if inst.is_raw() {
        return Err(Error::Unsupported(
            "raw explicit families have no state-graph embedding".into(),
        ));
    }
    let objective = inst.objective();
    let start = inst.committed();
    let done = |set: ElementSet| match objective {
        Objective::Min => inst.feasible_in_parent(set),
        Objective::Max => {
            inst.feasible_in_parent(set)
                && inst
                    .ground()
                    .difference(set)
                    .iter()
                    .all(|y| !inst.feasible_in_parent(set.with(y)))
        }
    };
    if done(start) {
        return Err(Error::Unsupported(
            "the starting state already solves the task".into(),
        ));
    }
    if objective == Objective::Max && !inst.feasible_in_parent(start) {
        return Err(Error::Infeasible("the starting state is infeasible".into()));
    }

    // Breadth-first over states; arcs recorded by state set.
    let mut seen: HashMap<ElementSet, ()> = HashMap::new();
    let mut order = vec![start];
    seen.insert(start, ());
    let mut raw_arcs: Vec<(ElementSet, Option<ElementSet>, u64)> = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let state = order[head];
        head += 1;
        for x in inst.ground().difference(state).iter() {
            let next = state.with(x);
            if objective == Objective::Max && !inst.feasible_in_parent(next) {
                continue;
            }
            if done(next) {
                raw_arcs.push((state, None, inst.weight(x)));
            } else {
                raw_arcs.push((state, Some(next), inst.weight(x)));
                if seen.insert(next, ()).is_none() {
                    order.push(next);
                }
            }
        }
    }
    let mut states = order;
    states.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(*b)));
    let index: HashMap<ElementSet, usize> = states
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, if i == 0 { 0 } else { i + 1 }))
        .collect();
    let mut arcs: Vec<(usize, usize, u64)> = raw_arcs
        .into_iter()
        .map(|(from, to, w)| (index[&from], to.map_or(1, |t| index[&t]), w))
        .collect();
    arcs.sort_by_key(|&(u, _, _)| u);
    WeightedDag::new(states.len() + 1, arcs, 0, 1)
}

/// Every `s`-`t` path length, by exhaustive enumeration. For testing small
/// graphs against [`extremal_cost`].
pub fn all_path_lengths(dag: &WeightedDag, from: usize) -> Vec<u64> {
    fn go(dag: &WeightedDag, v: usize, acc: u64, out: &mut Vec<u64>) {
        if v == dag.t {
            out.push(acc);
            return;
        }
        for &a in &dag.out[v] {
            let (_, u, w) = dag.arcs[a];
            go(dag, u, acc + w, out);
        }
    }
    let mut out = Vec::new();
    go(dag, from, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::instances;

    #[test]
    fn validation() {
        assert!(WeightedDag::new(2, vec![(0, 1, 1)], 0, 0).is_err());
        assert!(WeightedDag::new(2, vec![(0, 2, 1)], 0, 1).is_err());
        let cyclic = WeightedDag::new(3, vec![(0, 1, 1), (1, 2, 1), (2, 1, 1)], 0, 2);
        assert!(matches!(cyclic, Err(Error::Structural(_))));
    }

    #[test]
    fn extremal_cost_examples() {
        let dag = WeightedDag::new(2, vec![(0, 1, 2), (0, 1, 5)], 0, 1).unwrap();
        assert_eq!(extremal_cost(&dag, 1, Objective::Min).unwrap(), 0);
        assert_eq!(extremal_cost(&dag, 0, Objective::Min).unwrap(), 2);
        assert_eq!(extremal_cost(&dag, 0, Objective::Max).unwrap(), 5);
        let ak = akerlof_graph(5, 1, 16).unwrap();
        let v1 = extremal_cost(&ak, 2, Objective::Min).unwrap();
        assert_eq!(extremal_cost(&ak, 0, Objective::Min).unwrap(), 16u64.min(1 + v1));
    }

    #[test]
    fn dead_ends_are_reported() {
        let dag = WeightedDag::new(3, vec![(0, 1, 1), (0, 2, 1)], 0, 1).unwrap();
        assert!(matches!(extremal_cost(&dag, 2, Objective::Min), Err(Error::Unreachable(2))));
        let bias = Bias::min(ratio(1, 2)).unwrap();
        assert!(matches!(biased_walk(&dag, &bias), Err(Error::Unreachable(2))));
    }

    #[test]
    fn akerlof_shape() {
        let one = akerlof_graph(1, 1, 3).unwrap();
        assert_eq!(one.n(), 3);
        assert_eq!(one.arcs(), &[(0, 1, 3), (0, 2, 1), (2, 1, 3)]);
        let five = akerlof_graph(5, 1, 3).unwrap();
        assert_eq!((five.n(), five.arcs().len()), (7, 11));
        assert!(akerlof_graph(3, 3, 3).is_err());
    }

    #[test]
    fn akerlof_walk_procrastinates() {
        let dag = akerlof_graph(5, 1, 16).unwrap();
        let walk = biased_walk(&dag, &Bias::min(ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(walk.path, [0, 2, 3, 4, 5, 6, 1]);
        assert_eq!(walk.length, 21);
        assert_eq!(walk.ratio, ExtRational::Finite(ratio(21, 16)));
        let direct = biased_walk(&dag, &Bias::min(ratio(15, 16)).unwrap()).unwrap();
        assert_eq!(direct.path, [0, 1]);
    }

    #[test]
    fn unbiased_walk_is_optimal() {
        for seed in 0..30 {
            let dag = random_dag(seed, 8, 40, 9).unwrap();
            for objective in [Objective::Min, Objective::Max] {
                let bias = Bias::new(int(1), objective, int(1)).unwrap();
                let walk = biased_walk(&dag, &bias).unwrap();
                assert_eq!(walk.length, walk.optimum);
                assert_eq!(walk.ratio, ExtRational::Finite(int(1)));
            }
        }
    }

    #[test]
    fn single_element_embedding() {
        let inst = Instance::set_cover(1, vec![vec![0]], vec![4]).unwrap();
        let dag = instance_to_taskgraph(&inst).unwrap();
        assert_eq!(dag.n(), 2);
        assert_eq!(dag.arcs(), &[(0, 1, 4)]);
    }

    #[test]
    fn isc2_embedding() {
        let inst = instances::isc(2, 3).unwrap();
        let dag = instance_to_taskgraph(&inst).unwrap();
        // Non-covering states: {}, {x1}, {x2}, {y2}, {x2, y2}.
        assert_eq!(dag.n(), 6);
        assert_eq!(extremal_cost(&dag, 0, Objective::Min).unwrap(), 2);
        let walk = biased_walk(&dag, &Bias::min(ratio(1, 4)).unwrap()).unwrap();
        assert_eq!(walk.length, 2);
    }

    #[test]
    fn gk_embedding_reproduces_the_agent() {
        let inst = instances::gk(3, 2).unwrap();
        let dag = instance_to_taskgraph(&inst).unwrap();
        let walk = biased_walk(&dag, &Bias::max(int(2)).unwrap()).unwrap();
        assert_eq!(walk.length, 4);
        assert_eq!(walk.optimum, 8);
    }
}
