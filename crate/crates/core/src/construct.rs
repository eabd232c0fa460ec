//! Positions with prescribed periods.
//!
//! On `K_{a,b}` the two closed-form families `σ_k` and `σ_{2k}` are used
//! directly. On complete c-partite graphs the constructor is schedule-first:
//! build one period of firing sets in which every vertex fires once, then
//! recover chips with the rule that a vertex fires exactly when it holds
//! `deg(v)` chips.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{EngineError, Position, Stepper};
use crate::graph::{build_graph, Graph, GraphError, GraphSpec};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("period {period} is not achievable on K_{{{a},{b}}}; admissible periods are {admissible}")]
    InadmissiblePeriod {
        a: usize,
        b: usize,
        period: usize,
        admissible: PeriodSet,
    },
    #[error("{0}")]
    OutOfRange(String),
    #[error("part sizes must be sorted non-increasing, got {0:?}")]
    PartsUnsorted(Vec<usize>),
    #[error("graph has no complete multipartite structure")]
    NotMultipartite,
    #[error("schedule is infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A sorted set of periods, printed as `{1,2,3}`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PeriodSet(pub BTreeSet<u64>);

impl fmt::Display for PeriodSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `{i : 1 ≤ i ≤ min(a,b)} ∪ {2i : 1 ≤ i ≤ min(a,b)}`.
pub fn bipartite_period_set(a: usize, b: usize) -> PeriodSet {
    let m = a.min(b) as u64;
    PeriodSet((1..=m).chain((1..=m).map(|i| 2 * i)).collect())
}

/// Which rule produced a schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    /// Supplied by the caller.
    Explicit,
    /// Parts rotate with descending vertex indices; `S_{1,1}` fires last.
    Rotating,
    /// One part per step, cycling through the parts.
    Interleaved,
}

/// One intended period of firing sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    graph: Arc<Graph>,
    steps: Vec<Vec<usize>>,
    first_fire: Vec<usize>,
    pattern: Pattern,
}

impl Schedule {
    /// Every vertex must appear in exactly one step.
    pub fn new(graph: Arc<Graph>, steps: Vec<Vec<usize>>) -> Result<Self, ConstructError> {
        Self::with_pattern(graph, steps, Pattern::Explicit)
    }

    fn with_pattern(
        graph: Arc<Graph>,
        mut steps: Vec<Vec<usize>>,
        pattern: Pattern,
    ) -> Result<Self, ConstructError> {
        let n = graph.vertex_count();
        let mut first_fire = vec![usize::MAX; n];
        for (t, set) in steps.iter_mut().enumerate() {
            set.sort_unstable();
            for &v in set.iter() {
                if v >= n {
                    return Err(ConstructError::OutOfRange(format!(
                        "vertex {v} in step {t} but graph has {n} vertices"
                    )));
                }
                if first_fire[v] != usize::MAX {
                    return Err(ConstructError::Infeasible(Infeasibility::RepeatedFire {
                        vertex: v,
                        steps: (first_fire[v], t),
                    }));
                }
                first_fire[v] = t;
            }
        }
        let missing: Vec<usize> = (0..n).filter(|&v| first_fire[v] == usize::MAX).collect();
        if !missing.is_empty() {
            return Err(ConstructError::Infeasible(Infeasibility::NeverFires { vertices: missing }));
        }
        Ok(Schedule {
            graph,
            steps,
            first_fire,
            pattern,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn steps(&self) -> &[Vec<usize>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first_fire(&self, v: usize) -> usize {
        self.first_fire[v]
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }
}

/// Why a schedule cannot be realised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Infeasibility {
    RepeatedFire { vertex: usize, steps: (usize, usize) },
    NeverFires { vertices: Vec<usize> },
    /// No neighbour fires one step (cyclically) before these vertices, so
    /// they would reach `deg(v)` chips early or keep them too long.
    NoPredecessor { step: usize, vertices: Vec<usize> },
    /// The recovered position does not replay the schedule.
    Diverged {
        step: usize,
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::RepeatedFire { vertex, steps } => {
                write!(f, "vertex {vertex} fires at steps {} and {}", steps.0, steps.1)
            }
            Infeasibility::NeverFires { vertices } => {
                write!(f, "vertices {vertices:?} never fire")
            }
            Infeasibility::NoPredecessor { step, vertices } => write!(
                f,
                "vertices {vertices:?} fire at step {step} without a neighbour firing the step before"
            ),
            Infeasibility::Diverged {
                step,
                expected,
                actual,
            } => write!(f, "step {step} fires {actual:?}, schedule says {expected:?}"),
        }
    }
}

/// `σ_k` on `K_{a,b}`: `L = (1,…,k−1, b×(a−k+1))`, `R = (1,…,k−1, a×(b−k+1))`.
pub fn sigma_k(a: usize, b: usize, k: usize) -> Result<Position, ConstructError> {
    bipartite_family(a, b, k, |a, b, k| {
        let left = (1..k as u64).chain(std::iter::repeat_n(b as u64, a - k + 1));
        let right = (1..k as u64).chain(std::iter::repeat_n(a as u64, b - k + 1));
        (left.collect(), right.collect())
    })
}

/// `σ_{2k}` on `K_{a,b}`: `L = (0,…,k−2, (k−1)×(a−k+1))`,
/// `R = (1,…,k−1, a×(b−k+1))`.
pub fn sigma_2k(a: usize, b: usize, k: usize) -> Result<Position, ConstructError> {
    bipartite_family(a, b, k, |a, b, k| {
        let left = (0..k as u64 - 1).chain(std::iter::repeat_n(k as u64 - 1, a - k + 1));
        let right = (1..k as u64).chain(std::iter::repeat_n(a as u64, b - k + 1));
        (left.collect(), right.collect())
    })
}

/// Builds with the smaller side as `L` and lays the result out in the
/// declared side order.
fn bipartite_family(
    a: usize,
    b: usize,
    k: usize,
    build: impl Fn(usize, usize, usize) -> (Vec<u64>, Vec<u64>),
) -> Result<Position, ConstructError> {
    if a == 0 || b == 0 {
        return Err(ConstructError::OutOfRange(format!("side sizes must be positive, got ({a},{b})")));
    }
    let m = a.min(b);
    if k == 0 || k > m {
        return Err(ConstructError::OutOfRange(format!("k = {k} outside 1..={m}")));
    }
    let (small, large) = build(m, a.max(b), k);
    let chips = if a <= b { [small, large] } else { [large, small] }.concat();
    let graph = Arc::new(build_graph(&GraphSpec::CompleteBipartite(a, b))?);
    Ok(Position::new(graph, chips)?)
}

/// A position on `K_{a,b}` (declared side order) whose period is exactly `p`.
pub fn construct_bipartite_period(a: usize, b: usize, p: usize) -> Result<Position, ConstructError> {
    let admissible = bipartite_period_set(a, b);
    if a == 0 || b == 0 || !admissible.0.contains(&(p as u64)) {
        return Err(ConstructError::InadmissiblePeriod {
            a,
            b,
            period: p,
            admissible,
        });
    }
    let graph = Arc::new(build_graph(&GraphSpec::CompleteBipartite(a, b))?);
    match p {
        1 => Ok(Position::zero(graph)),
        2 => {
            let chips = (0..a + b).map(|v| if v < a { b as u64 } else { 0 }).collect();
            Ok(Position::new(graph, chips)?)
        }
        _ if p <= a.min(b) => sigma_k(a, b, p),
        _ => sigma_2k(a, b, p / 2),
    }
}

fn intended_period(parts: &[usize], j: usize, k: usize) -> usize {
    (parts.len() - j) * parts[parts.len() - 1] + 1 - k
}

fn check_parameters(parts: &[usize], j: usize, k: usize) -> Result<(), ConstructError> {
    let c = parts.len();
    if c < 2 {
        return Err(ConstructError::OutOfRange(format!("need at least 2 parts, got {c}")));
    }
    if parts.contains(&0) {
        return Err(ConstructError::OutOfRange("part sizes must be positive".into()));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(ConstructError::PartsUnsorted(parts.to_vec()));
    }
    if j >= c {
        return Err(ConstructError::OutOfRange(format!("j = {j} outside 0..={}", c - 1)));
    }
    let ac = parts[c - 1];
    if k == 0 || k > ac {
        return Err(ConstructError::OutOfRange(format!("k = {k} outside 1..={ac}")));
    }
    Ok(())
}

/// The rotating schedule of length `(c−j)·a_c − k + 1` on
/// `K_{a_1,…,a_c}`, `a_1 ≥ … ≥ a_c`.
///
/// With `r = c−j−1` rotating parts `S_1..S_r` and top parts `S_{c−j}..S_c`
/// (1-based, `S_{i,m}` the m-th vertex of part i):
/// step 0 fires `S_{i,m}` for every top part and `m ≥ a_c−k+1`;
/// steps `1..=r` fire `S_{h,m}`, `m ≥ a_c`, for `h = r` down to 1;
/// for `k_1 = 2..=k` a round fires `S_{h, a_c−k_1+1}` for `h = r` down to 1;
/// then for each index `m = a_c−k` down to 1 the top parts fire `S_{i,m}`
/// together, followed by `S_{h,m}` for `h = r` down to 1.
/// The printed listing has off-by-one slips at the boundaries; these
/// ranges are the ones forced by one fire per vertex and length `P`.
pub fn cpartite_schedule(parts: &[usize], j: usize, k: usize) -> Result<Schedule, ConstructError> {
    check_parameters(parts, j, k)?;
    let c = parts.len();
    let ac = parts[c - 1];
    let r = c - j - 1;
    let graph = Arc::new(build_graph(&GraphSpec::CompleteMultipartite(parts.to_vec()))?);
    let layout = graph.parts().ok_or(ConstructError::NotMultipartite)?;
    // 1-based (part, index) to vertex id.
    let s = |h: usize, m: usize| layout.vertex(h - 1, m - 1);
    let top = c - j..=c;
    let rotating = (1..=r).rev();

    let mut steps = Vec::with_capacity(intended_period(parts, j, k));
    steps.push(
        top.clone()
            .flat_map(|i| (ac - k + 1..=parts[i - 1]).map(move |m| s(i, m)))
            .collect(),
    );
    for h in rotating.clone() {
        steps.push((ac..=parts[h - 1]).map(|m| s(h, m)).collect());
    }
    for k1 in 2..=k {
        for h in rotating.clone() {
            steps.push(vec![s(h, ac - k1 + 1)]);
        }
    }
    for m in (1..=ac - k).rev() {
        steps.push(top.clone().map(|i| s(i, m)).collect());
        for h in rotating.clone() {
            steps.push(vec![s(h, m)]);
        }
    }
    debug_assert_eq!(steps.len(), intended_period(parts, j, k));
    Schedule::with_pattern(graph, steps, Pattern::Rotating)
}

/// A schedule of length `period` firing one part per step, cycling through
/// the parts so that consecutive steps (cyclically) use different parts.
/// With fewer steps than parts the last step fires all remaining parts.
/// Vertices within a part fire in descending index order.
pub fn interleaved_schedule(parts: &[usize], period: usize) -> Result<Schedule, ConstructError> {
    let graph = Arc::new(build_graph(&GraphSpec::CompleteMultipartite(parts.to_vec()))?);
    let layout = graph.parts().ok_or(ConstructError::NotMultipartite)?;
    let c = layout.count();
    if period < 2 {
        return Err(ConstructError::OutOfRange(format!("interleaving needs period ≥ 2, got {period}")));
    }
    if c == 2 && period % 2 == 1 {
        return Err(ConstructError::OutOfRange(format!(
            "two parts cannot alternate over an odd period {period}"
        )));
    }
    let mut part_sets: Vec<Vec<usize>> = if period >= c {
        let mut sets: Vec<Vec<usize>> = (0..period).map(|t| vec![t % c]).collect();
        if (period - 1).is_multiple_of(c) {
            // The last step would repeat the first step's part.
            sets[period - 1] = vec![1];
        }
        sets
    } else {
        let mut sets: Vec<Vec<usize>> = (0..period - 1).map(|t| vec![t]).collect();
        sets.push((period - 1..c).collect());
        sets
    };

    let mut occurrences = vec![0usize; c];
    for set in &part_sets {
        for &p in set {
            occurrences[p] += 1;
        }
    }
    if let Some(p) = (0..c).find(|&p| occurrences[p] > layout.sizes()[p]) {
        return Err(ConstructError::OutOfRange(format!(
            "part {} has {} vertices but {} firing steps",
            p + 1,
            layout.sizes()[p],
            occurrences[p]
        )));
    }

    // Hand out vertices from the top index down; the last occurrence of a
    // part takes whatever is left.
    let mut next = layout.sizes().to_vec();
    let mut seen = vec![0usize; c];
    let steps = part_sets
        .iter_mut()
        .map(|set| {
            let mut fired = Vec::new();
            for &p in set.iter() {
                seen[p] += 1;
                let take = if seen[p] == occurrences[p] { next[p] } else { 1 };
                for _ in 0..take {
                    next[p] -= 1;
                    fired.push(layout.vertex(p, next[p]));
                }
            }
            fired
        })
        .collect();
    Schedule::with_pattern(graph, steps, Pattern::Interleaved)
}

/// Recover the position that fires exactly as `s` says: each vertex starts
/// with `deg(v)` minus the chips it receives before its first fire.
/// The result is replayed for one full period against the schedule.
pub fn position_from_schedule(s: &Schedule) -> Result<Position, ConstructError> {
    let graph = s.graph();
    let period = s.len();
    let n = graph.vertex_count();

    let stranded: Vec<(usize, usize)> = (0..n)
        .filter_map(|v| {
            let f = s.first_fire(v);
            let before = (f + period - 1) % period;
            let ok = period == 1
                || graph.neighbors(v).iter().any(|&w| s.first_fire(w) == before);
            (!ok).then_some((f, v))
        })
        .collect();
    if let Some(&(step, _)) = stranded.iter().min() {
        let vertices = stranded.iter().filter(|(f, _)| *f == step).map(|&(_, v)| v).collect();
        return Err(ConstructError::Infeasible(Infeasibility::NoPredecessor { step, vertices }));
    }

    let chips: Vec<u64> = (0..n)
        .map(|v| {
            let f = s.first_fire(v);
            let early = graph.neighbors(v).iter().filter(|&&w| s.first_fire(w) < f).count();
            (graph.degrees()[v] - early) as u64
        })
        .collect();

    let mut stepper = Stepper::new(graph);
    let mut cur = chips.clone();
    let mut next = vec![0; n];
    for (t, expected) in s.steps().iter().enumerate() {
        stepper.step(&cur, &mut next)?;
        let actual: Vec<usize> = (0..n).filter(|&v| stepper.fired()[v]).collect();
        if &actual != expected {
            return Err(ConstructError::Infeasible(Infeasibility::Diverged {
                step: t,
                expected: expected.clone(),
                actual,
            }));
        }
        std::mem::swap(&mut cur, &mut next);
    }
    if cur != chips {
        return Err(ConstructError::Infeasible(Infeasibility::Diverged {
            step: period,
            expected: s.steps()[0].clone(),
            actual: Vec::new(),
        }));
    }
    Ok(Position::new(graph.clone(), chips)?)
}

/// A c-partite position and the schedule it replays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpartiteConstruction {
    pub position: Position,
    pub schedule: Schedule,
    pub target: usize,
}

/// A position on `K_{a_1,…,a_c}` with period `(c−j)·a_c − k + 1`.
///
/// The rotating schedule is tried first. When `c−j−1 = 1` and `k ≥ 2` it
/// is not realisable (the lone rotating part fires in two consecutive
/// steps), and the interleaved schedule of the same length is used
/// instead. On two parts an odd target above `a_2` is impossible.
pub fn construct_cpartite_period(
    parts: &[usize],
    j: usize,
    k: usize,
) -> Result<CpartiteConstruction, ConstructError> {
    let schedule = cpartite_schedule(parts, j, k)?;
    let target = schedule.len();
    let rotating_err = match position_from_schedule(&schedule) {
        Ok(position) => {
            return Ok(CpartiteConstruction {
                position,
                schedule,
                target,
            })
        }
        Err(e) => e,
    };
    let fallback = match interleaved_schedule(parts, target) {
        Ok(s) => s,
        Err(_) => return Err(rotating_err),
    };
    let position = position_from_schedule(&fallback)?;
    Ok(CpartiteConstruction {
        position,
        schedule: fallback,
        target,
    })
}
