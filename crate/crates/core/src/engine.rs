//! The parallel chip-firing step operator and per-position quantities.
//!
//! A vertex holding at least `deg(v)` chips fires: it sends one chip to each
//! neighbour. All vertices fire simultaneously, so one step maps
//! `σ(v) ↦ σ(v) + Φσ(v) − deg(v)·[σ(v) ≥ deg(v)]`, where `Φσ(v)` counts the
//! firing neighbours of `v`.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_graph, Graph, GraphError, GraphSpec};

/// Default bound on the number of steps any single run may take.
pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_STEP_CAP`].
pub const STEP_CAP_ENV: &str = "CHIPFIRE_STEP_CAP";

/// The active step cap: `CHIPFIRE_STEP_CAP` if set to a positive integer,
/// otherwise [`DEFAULT_STEP_CAP`].
pub fn step_cap() -> u64 {
    std::env::var(STEP_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_STEP_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("chip count overflow at vertex {vertex}")]
    Overflow { vertex: usize },
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("position has {got} chip counts but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("complement undefined: vertex {vertex} holds {chips} chips, more than 2·deg−1 = {max}")]
    ComplementPrecondition { vertex: usize, chips: u64, max: i64 },
    #[error("{requested} steps requested, step cap is {cap}")]
    StepCapExceeded { requested: u64, cap: u64 },
}

/// Reusable scratch space for applying the step operator to raw chip slices.
///
/// Complete multipartite graphs take a fast path: a vertex's firing-neighbour
/// count is the total number of firing vertices minus those in its own part.
#[derive(Clone, Debug)]
pub struct Stepper<'g> {
    graph: &'g Graph,
    fired: Vec<bool>,
    part_fires: Vec<u64>,
}

impl<'g> Stepper<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let parts = graph.parts().map_or(0, |p| p.count());
        Stepper {
            graph,
            fired: vec![false; graph.vertex_count()],
            part_fires: vec![0; parts],
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Firing flags of the most recent `step` source.
    pub fn fired(&self) -> &[bool] {
        &self.fired
    }

    /// Write `U src` into `dst`, returning the number of firing vertices.
    pub fn step(&mut self, src: &[u64], dst: &mut [u64]) -> Result<usize, EngineError> {
        let degrees = self.graph.degrees();
        let mut firing = 0;
        for (v, (&chips, &deg)) in src.iter().zip(degrees).enumerate() {
            let f = chips >= deg as u64;
            self.fired[v] = f;
            firing += usize::from(f);
        }
        match self.graph.parts() {
            Some(parts) => {
                self.part_fires.iter_mut().for_each(|c| *c = 0);
                for (v, &f) in self.fired.iter().enumerate() {
                    if f {
                        self.part_fires[parts.part_of(v)] += 1;
                    }
                }
                for v in 0..src.len() {
                    let phi = firing as u64 - self.part_fires[parts.part_of(v)];
                    dst[v] = apply(src[v], phi, degrees[v], self.fired[v], v)?;
                }
            }
            None => {
                for v in 0..src.len() {
                    let phi = self
                        .graph
                        .neighbors(v)
                        .iter()
                        .filter(|&&w| self.fired[w])
                        .count() as u64;
                    dst[v] = apply(src[v], phi, degrees[v], self.fired[v], v)?;
                }
            }
        }
        Ok(firing)
    }
}

#[inline]
fn apply(chips: u64, phi: u64, deg: usize, fires: bool, v: usize) -> Result<u64, EngineError> {
    let gained = chips
        .checked_add(phi)
        .ok_or(EngineError::Overflow { vertex: v })?;
    Ok(if fires { gained - deg as u64 } else { gained })
}

/// A chip assignment over a graph: the full state of the automaton.
#[derive(Clone, Debug)]
pub struct Position {
    graph: Arc<Graph>,
    chips: Vec<u64>,
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
            && self.chips == other.chips
    }
}

impl Eq for Position {}

impl Hash for Position {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.chips.hash(state);
    }
}

impl Position {
    pub fn new(graph: Arc<Graph>, chips: Vec<u64>) -> Result<Self, EngineError> {
        if chips.len() != graph.vertex_count() {
            return Err(EngineError::LengthMismatch {
                expected: graph.vertex_count(),
                got: chips.len(),
            });
        }
        Ok(Position { graph, chips })
    }

    pub fn zero(graph: Arc<Graph>) -> Self {
        let n = graph.vertex_count();
        Position {
            graph,
            chips: vec![0; n],
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Chip counts in canonical vertex order; also the canonical encoding.
    pub fn chips(&self) -> &[u64] {
        &self.chips
    }

    pub fn into_chips(self) -> Vec<u64> {
        self.chips
    }

    fn with_chips(&self, chips: Vec<u64>) -> Self {
        Position {
            graph: Arc::clone(&self.graph),
            chips,
        }
    }

    fn check_vertex(&self, v: usize) -> Result<(), EngineError> {
        if v < self.chips.len() {
            Ok(())
        } else {
            Err(EngineError::VertexOutOfRange {
                vertex: v,
                count: self.chips.len(),
            })
        }
    }

    pub fn fires(&self, v: usize) -> bool {
        self.chips[v] >= self.graph.degrees()[v] as u64
    }

    /// Number of firing neighbours of `v`.
    pub fn phi(&self, v: usize) -> Result<usize, EngineError> {
        self.check_vertex(v)?;
        Ok(self
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&w| self.fires(w))
            .count())
    }

    /// All vertices with at least `deg(v)` chips, ascending.
    pub fn firing_set(&self) -> Vec<usize> {
        (0..self.chips.len()).filter(|&v| self.fires(v)).collect()
    }

    pub fn step(&self) -> Result<Position, EngineError> {
        let mut next = vec![0; self.chips.len()];
        Stepper::new(&self.graph).step(&self.chips, &mut next)?;
        Ok(self.with_chips(next))
    }

    /// Apply `steps` steps, optionally recording a [`StepTrace`]. Requests
    /// beyond the active [`step_cap`] are refused.
    pub fn advance(
        &self,
        steps: u64,
        record: bool,
    ) -> Result<(Position, Option<StepTrace>), EngineError> {
        let cap = step_cap();
        if steps > cap {
            return Err(EngineError::StepCapExceeded {
                requested: steps,
                cap,
            });
        }
        if record {
            let trace = StepTrace::record(self, steps as usize)?;
            let last = self.with_chips(trace.state(trace.horizon()).to_vec());
            return Ok((last, Some(trace)));
        }
        let mut stepper = Stepper::new(&self.graph);
        let mut cur = self.chips.clone();
        let mut next = vec![0; cur.len()];
        for _ in 0..steps {
            stepper.step(&cur, &mut next)?;
            std::mem::swap(&mut cur, &mut next);
        }
        Ok((self.with_chips(cur), None))
    }

    /// Every vertex satisfies `Φσ(v) ≤ σ(v) ≤ Φσ(v) + deg(v) − 1`.
    pub fn is_confined(&self) -> bool {
        self.unconfined_vertices().is_empty()
    }

    pub fn unconfined_vertices(&self) -> Vec<usize> {
        (0..self.chips.len())
            .filter(|&v| {
                let phi = self.phi(v).unwrap() as i128;
                let deg = self.graph.degrees()[v] as i128;
                let chips = self.chips[v] as i128;
                !(phi <= chips && chips < phi + deg)
            })
            .collect()
    }

    /// Every vertex holds at most `2·deg(v) − 1` chips.
    pub fn within_double_degree(&self) -> bool {
        self.chips
            .iter()
            .zip(self.graph.degrees())
            .all(|(&c, &d)| (c as i128) < 2 * d as i128)
    }

    /// Replace `σ(v)` by `2·deg(v) − 1 − σ(v)` at every vertex.
    pub fn complement(&self) -> Result<Position, EngineError> {
        let chips = self
            .chips
            .iter()
            .zip(self.graph.degrees())
            .enumerate()
            .map(|(v, (&c, &d))| {
                let max = 2 * d as i64 - 1;
                if (c as i128) > max as i128 {
                    Err(EngineError::ComplementPrecondition {
                        vertex: v,
                        chips: c,
                        max,
                    })
                } else {
                    Ok(max as u64 - c)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.with_chips(chips))
    }

    pub fn total_chips(&self) -> u128 {
        self.chips.iter().map(|&c| u128::from(c)).sum()
    }
}

/// Vertices of `next = U prev` that break `Φprev(v) ≤ next(v) ≤ Φprev(v) + deg(v) − 1`.
///
/// When `prev(v) ≤ 2·deg(v) − 1` this bound always holds for `v`.
pub fn step_window_violations(prev: &Position, next: &Position) -> Vec<usize> {
    (0..prev.chips.len())
        .filter(|&v| {
            let phi = prev.phi(v).unwrap() as i128;
            let deg = prev.graph.degrees()[v] as i128;
            let chips = next.chips[v] as i128;
            !(phi <= chips && chips < phi + deg)
        })
        .collect()
}

/// A recorded run: states `U^tσ`, firing sets, and cumulative fire counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTrace {
    initial: Position,
    states: Vec<Vec<u64>>,
    firing: Vec<Vec<usize>>,
    cumulative: Vec<Vec<u64>>,
}

impl StepTrace {
    /// Run `horizon` steps from `start`, recording everything.
    pub fn record(start: &Position, horizon: usize) -> Result<Self, EngineError> {
        let n = start.chips.len();
        let mut stepper = Stepper::new(&start.graph);
        let mut states = Vec::with_capacity(horizon + 1);
        let mut firing = Vec::with_capacity(horizon);
        let mut cumulative = Vec::with_capacity(horizon + 1);
        states.push(start.chips.clone());
        cumulative.push(vec![0; n]);
        for t in 0..horizon {
            let mut next = vec![0; n];
            stepper.step(&states[t], &mut next)?;
            let fired = stepper.fired();
            firing.push((0..n).filter(|&v| fired[v]).collect());
            let u: Vec<u64> = cumulative[t]
                .iter()
                .zip(fired)
                .map(|(&c, &f)| c + u64::from(f))
                .collect();
            cumulative.push(u);
            states.push(next);
        }
        Ok(StepTrace {
            initial: start.clone(),
            states,
            firing,
            cumulative,
        })
    }

    pub fn initial(&self) -> &Position {
        &self.initial
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.initial.graph()
    }

    /// Number of recorded steps.
    pub fn horizon(&self) -> usize {
        self.firing.len()
    }

    /// Chips of `U^tσ`, `0 ≤ t ≤ horizon`.
    pub fn state(&self, t: usize) -> &[u64] {
        &self.states[t]
    }

    pub fn position(&self, t: usize) -> Position {
        self.initial.with_chips(self.states[t].clone())
    }

    /// Vertices firing in `U^tσ`, `0 ≤ t < horizon`.
    pub fn firing_set(&self, t: usize) -> &[usize] {
        &self.firing[t]
    }

    /// `F_v(t)`: whether `v` fires in `U^tσ`.
    pub fn fired(&self, v: usize, t: usize) -> bool {
        self.cumulative[t + 1][v] > self.cumulative[t][v]
    }

    /// `u_t(σ, v)`: fires of `v` during steps `0..t`.
    pub fn fire_count(&self, t: usize, v: usize) -> u64 {
        self.cumulative[t][v]
    }

    pub fn fire_counts(&self, t: usize) -> &[u64] {
        &self.cumulative[t]
    }
}

/// The interchange form of a position: `{"graph": "<spec>", "chips": [...]}`
/// with chips in canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionDocument {
    pub graph: GraphSpec,
    pub chips: Vec<u64>,
}

impl PositionDocument {
    /// `None` when the position's graph was not built from a spec.
    pub fn from_position(p: &Position) -> Option<Self> {
        Some(PositionDocument {
            graph: p.graph().spec()?.clone(),
            chips: p.chips().to_vec(),
        })
    }

    pub fn into_position(self) -> Result<Position, PositionDocumentError> {
        let graph = build_graph(&self.graph)?;
        Ok(Position::new(Arc::new(graph), self.chips)?)
    }
}

#[derive(Debug, Error)]
pub enum PositionDocumentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
