//! Desk-scale verification: period-set sweeps over start positions and
//! property suites over random instances.
//!
//! Exhaustive sweeps split the start space (a mixed-radix box) into
//! contiguous index ranges processed in parallel; partial results merge by
//! multiset union so the report does not depend on worker count. Random
//! sweeps draw every start up front from a seeded ChaCha8 stream.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bipartite::{self, BipartiteError};
use crate::construct::{bipartite_period_set, PeriodSet};
use crate::engine::{step_window_violations, EngineError, Position};
use crate::graph::{Graph, GraphError};
use crate::period::{detect_period, DetectError};
use crate::report::{CheckReport, SuiteReport, Violation};

/// Default cap on the number of starts in an exhaustive sweep.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Starts per parallel work unit.
const CHUNK: u128 = 4096;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("exhaustive sweep needs {states} starts, over the budget of {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("bound vector has {got} entries, graph has {expected} vertices")]
    BoundLength { got: usize, expected: usize },
    #[error("could not sample a confined position in {tries} tries")]
    SamplerExhausted { tries: u64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Bipartite(#[from] BipartiteError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnumerationMode {
    Exhaustive,
    Random {
        samples: u64,
        seed: u64,
        /// Sample each vertex on `[0, 4deg(v)]` instead of `[0, 2deg(v)−1]`.
        unconfined: bool,
    },
}

impl fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerationMode::Exhaustive => f.write_str("exhaustive"),
            EnumerationMode::Random { unconfined: false, .. } => f.write_str("random"),
            EnumerationMode::Random { unconfined: true, .. } => f.write_str("random-unconfined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch { missing: Vec<u64>, extra: Vec<u64> },
    /// No expected set was given.
    Unchecked,
}

impl Verdict {
    pub fn compare(found: &BTreeMap<u64, u64>, expected: Option<&PeriodSet>) -> Self {
        let Some(expected) = expected else {
            return Verdict::Unchecked;
        };
        let missing: Vec<u64> = expected.0.iter().filter(|p| !found.contains_key(p)).copied().collect();
        let extra: Vec<u64> = found.keys().filter(|p| !expected.0.contains(p)).copied().collect();
        if missing.is_empty() && extra.is_empty() {
            Verdict::Match
        } else {
            Verdict::Mismatch { missing, extra }
        }
    }

    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Mismatch { .. })
    }
}

/// A start whose detection hit the step cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapFailure {
    pub start: Vec<u64>,
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSetReport {
    pub graph: String,
    pub mode: EnumerationMode,
    /// Per-vertex chip bound.
    pub bound: Vec<u64>,
    pub starts: u64,
    /// Total steps simulated across all starts (`Σ t0 + p`).
    pub states_visited: u64,
    pub periods: BTreeMap<u64, u64>,
    pub expected: Option<PeriodSet>,
    pub verdict: Verdict,
    pub cap_failures: Vec<CapFailure>,
    /// Odd-`p ≤ min`, even-`p ≤ 2·min` cross-check on complete bipartite graphs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_check: Option<CheckReport>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PeriodSetReport {
    pub fn found(&self) -> PeriodSet {
        PeriodSet(self.periods.keys().copied().collect())
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
            && self.cap_failures.is_empty()
            && self.bound_check.as_ref().is_none_or(CheckReport::passed)
    }

    /// One row per period: `graph,mode,bound,period,count`. The bound column
    /// is the per-vertex bounds joined by `;`; the graph field is quoted
    /// since specifiers contain commas.
    pub fn csv_rows(&self) -> String {
        let bound: Vec<String> = self.bound.iter().map(u64::to_string).collect();
        let bound = bound.join(";");
        let graph = csv_field(&self.graph);
        self.periods
            .iter()
            .map(|(p, c)| format!("{graph},{},{bound},{p},{c}\n", self.mode))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }
}

pub const CSV_HEADER: &str = "graph,mode,bound,period,count";

/// RFC 4180 quoting for a single field.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl fmt::Display for PeriodSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {} ({}), {} starts, {} states", self.graph, self.mode, self.starts, self.states_visited)?;
        if let EnumerationMode::Random { seed, samples, .. } = self.mode {
            writeln!(f, "seed {seed}, samples {samples}")?;
        }
        for (p, c) in &self.periods {
            writeln!(f, "  period {p}: {c}")?;
        }
        match &self.verdict {
            Verdict::Match => writeln!(f, "verdict: match {}", self.found())?,
            Verdict::Mismatch { missing, extra } => {
                writeln!(f, "verdict: mismatch, missing {missing:?}, extra {extra:?}")?
            }
            Verdict::Unchecked => writeln!(f, "periods found: {}", self.found())?,
        }
        if let Some(b) = &self.bound_check {
            writeln!(f, "{b}")?;
        }
        if !self.cap_failures.is_empty() {
            writeln!(f, "{} starts exceeded the step cap", self.cap_failures.len())?;
        }
        write!(f, "wall time {:.3}s", self.wall_time.as_secs_f64())
    }
}

/// Options for [`enumerate_periods`].
#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub mode: EnumerationMode,
    /// Per-vertex bound; `None` means `2deg(v) − 1`.
    pub bound: Option<Vec<u64>>,
    pub budget: u128,
    pub cap: u64,
    pub expected: Option<PeriodSet>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            mode: EnumerationMode::Exhaustive,
            bound: None,
            budget: DEFAULT_BUDGET,
            cap: crate::engine::step_cap(),
            expected: None,
        }
    }
}

/// `2deg(v) − 1` per vertex, `0` for isolated vertices.
pub fn default_bound(graph: &Graph) -> Vec<u64> {
    graph.degrees().iter().map(|&d| (2 * d as u64).saturating_sub(1)).collect()
}

/// Number of starts in the box `Π (bound(v) + 1)`, saturating.
pub fn box_size(bound: &[u64]) -> u128 {
    bound.iter().fold(1u128, |acc, &b| acc.saturating_mul(b as u128 + 1))
}

#[derive(Default)]
struct Tally {
    periods: BTreeMap<u64, u64>,
    states: u64,
    starts: u64,
    cap_failures: Vec<CapFailure>,
}

impl Tally {
    fn add(&mut self, chips: &[u64], cap: u64, graph: &Arc<Graph>) -> Result<(), VerifyError> {
        self.starts += 1;
        let p = Position::new(graph.clone(), chips.to_vec())?;
        match detect_period(&p, cap) {
            Ok(r) => {
                *self.periods.entry(r.period).or_default() += 1;
                self.states += r.transient + r.period;
            }
            Err(DetectError::CapExceeded { steps, .. }) => {
                self.states += steps;
                self.cap_failures.push(CapFailure { start: chips.to_vec(), steps });
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (p, c) in other.periods {
            *self.periods.entry(p).or_default() += c;
        }
        self.states += other.states;
        self.starts += other.starts;
        self.cap_failures.extend(other.cap_failures);
        self
    }
}

/// Decode start index `i` (vertex 0 is the most significant digit).
fn decode(mut i: u128, bound: &[u64], out: &mut [u64]) {
    for (slot, &b) in out.iter_mut().zip(bound).rev() {
        let radix = b as u128 + 1;
        *slot = (i % radix) as u64;
        i /= radix;
    }
}

/// Advance `chips` to the next start in index order.
fn increment(chips: &mut [u64], bound: &[u64]) {
    for (slot, &b) in chips.iter_mut().zip(bound).rev() {
        if *slot < b {
            *slot += 1;
            return;
        }
        *slot = 0;
    }
}

/// Uniform start on `[0, hi(v)]` per vertex.
fn sample_box(rng: &mut ChaCha8Rng, hi: &[u64]) -> Vec<u64> {
    hi.iter().map(|&h| rng.random_range(0..=h)).collect()
}

fn random_hi(graph: &Graph, unconfined: bool) -> Vec<u64> {
    if unconfined {
        graph.degrees().iter().map(|&d| 4 * d as u64).collect()
    } else {
        default_bound(graph)
    }
}

/// Period multiset over all starts in the bound box, or over seeded random
/// starts.
pub fn enumerate_periods(
    graph: &Arc<Graph>,
    opts: &EnumerateOptions,
) -> Result<PeriodSetReport, VerifyError> {
    let clock = Instant::now();
    let n = graph.vertex_count();
    let bound = match (&opts.mode, &opts.bound) {
        (_, Some(b)) if b.len() != n => {
            return Err(VerifyError::BoundLength { got: b.len(), expected: n })
        }
        (_, Some(b)) => b.clone(),
        (EnumerationMode::Random { unconfined, .. }, None) => random_hi(graph, *unconfined),
        (EnumerationMode::Exhaustive, None) => default_bound(graph),
    };
    let tally = match opts.mode {
        EnumerationMode::Exhaustive => {
            let states = box_size(&bound);
            if states > opts.budget {
                return Err(VerifyError::BudgetExceeded { states, budget: opts.budget });
            }
            let chunks = states.div_ceil(CHUNK);
            (0..chunks as u64)
                .into_par_iter()
                .map(|c| {
                    let lo = c as u128 * CHUNK;
                    let hi = (lo + CHUNK).min(states);
                    let mut chips = vec![0; n];
                    decode(lo, &bound, &mut chips);
                    let mut t = Tally::default();
                    for _ in lo..hi {
                        t.add(&chips, opts.cap, graph)?;
                        increment(&mut chips, &bound);
                    }
                    Ok::<_, VerifyError>(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        }
        EnumerationMode::Random { samples, seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let starts: Vec<Vec<u64>> = (0..samples).map(|_| sample_box(&mut rng, &bound)).collect();
            starts
                .par_chunks(256)
                .map(|chunk| {
                    let mut t = Tally::default();
                    for s in chunk {
                        t.add(s, opts.cap, graph)?;
                    }
                    Ok::<_, VerifyError>(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        }
    };
    let mut cap_failures = tally.cap_failures;
    cap_failures.sort_by(|x, y| x.start.cmp(&y.start));

    let bound_check = bipartite::Sides::of(graph).ok().map(|sides| {
        let min = sides.min_side() as u64;
        let mut check = CheckReport::new("cor_3_6", false);
        for &p in tally.periods.keys() {
            let ok = if p % 2 == 1 { p <= min } else { p <= 2 * min };
            check.record((!ok).then(|| {
                Violation::new(0, format!("period {p} exceeds bound for min side {min}")).values([p as i64])
            }));
        }
        check
    });

    let verdict = Verdict::compare(&tally.periods, opts.expected.as_ref());
    Ok(PeriodSetReport {
        graph: graph_label(graph),
        mode: opts.mode.clone(),
        bound,
        starts: tally.starts,
        states_visited: tally.states,
        periods: tally.periods,
        expected: opts.expected.clone(),
        verdict,
        cap_failures,
        bound_check,
        wall_time: clock.elapsed(),
    })
}

fn graph_label(graph: &Graph) -> String {
    graph
        .spec()
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("graph:{}v{}e", graph.vertex_count(), graph.edge_count()))
}

/// Exhaustive sweep of `K_{a,b}` compared against the admissible set.
pub fn verify_bipartite_theorem(a: usize, b: usize, budget: u128) -> Result<PeriodSetReport, VerifyError> {
    let graph = Arc::new(crate::graph::build_graph(&crate::graph::GraphSpec::CompleteBipartite(a, b))?);
    enumerate_periods(
        &graph,
        &EnumerateOptions {
            budget,
            expected: Some(bipartite_period_set(a, b)),
            ..EnumerateOptions::default()
        },
    )
}

/// A uniformly random confined position, by rejection from the
/// `[0, 2deg(v) − 1]` box.
pub fn random_confined(graph: &Arc<Graph>, rng: &mut ChaCha8Rng, max_tries: u64) -> Result<Position, VerifyError> {
    let hi = default_bound(graph);
    for _ in 0..max_tries {
        let p = Position::new(graph.clone(), sample_box(rng, &hi))?;
        if p.is_confined() {
            return Ok(p);
        }
    }
    Err(VerifyError::SamplerExhausted { tries: max_tries })
}

const SAMPLER_TRIES: u64 = 1_000_000;

/// A random tree on `n` vertices: vertex `i ≥ 1` attaches to a uniform
/// earlier vertex.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    Graph::from_edges(n, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyClass {
    Trees,
    Complete,
    Abundant,
    Complement,
    Confinement,
}

impl std::str::FromStr for PropertyClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "trees" => PropertyClass::Trees,
            "complete" => PropertyClass::Complete,
            "abundant" => PropertyClass::Abundant,
            "complement" => PropertyClass::Complement,
            "confinement" => PropertyClass::Confinement,
            _ => return Err(format!("unknown class {s:?}; expected trees|complete|abundant|complement|confinement")),
        })
    }
}

impl fmt::Display for PropertyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyClass::Trees => "trees",
            PropertyClass::Complete => "complete",
            PropertyClass::Abundant => "abundant",
            PropertyClass::Complement => "complement",
            PropertyClass::Confinement => "confinement",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClassOptions {
    pub samples: u64,
    pub seed: u64,
    pub cap: u64,
    /// Graphs for the complement, abundant, and confinement suites.
    pub graphs: Vec<Arc<Graph>>,
    /// Largest tree size.
    pub max_tree: usize,
    /// Largest complete graph.
    pub max_complete: usize,
    /// Steps over which complement commutation is checked.
    pub commute_steps: usize,
}

impl Default for ClassOptions {
    fn default() -> Self {
        let graphs = ["complete_bipartite:3,3", "complete:5", "cycle:6", "path:5"]
            .iter()
            .map(|s| Arc::new(crate::graph::build_graph(&s.parse().unwrap()).unwrap()))
            .collect();
        ClassOptions {
            samples: 1000,
            seed: 0,
            cap: crate::engine::step_cap(),
            graphs,
            max_tree: 8,
            max_complete: 6,
            commute_steps: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: PropertyClass,
    pub seed: u64,
    pub samples: u64,
    pub suite: SuiteReport,
}

impl ClassReport {
    pub fn passed(&self) -> bool {
        self.suite.passed()
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class {} (seed {}, samples {})", self.class, self.seed, self.samples)?;
        write!(f, "{}", self.suite)
    }
}

/// Per-sample RNG: one ChaCha8 stream per sample index, so results do not
/// depend on how samples are split across workers.
fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn collect_suite(
    samples: u64,
    f: impl Fn(u64) -> Result<SuiteReport, VerifyError> + Sync + Send,
) -> Result<SuiteReport, VerifyError> {
    let parts: Vec<SuiteReport> = (0..samples).into_par_iter().map(f).collect::<Result<_, _>>()?;
    let mut suite = SuiteReport::default();
    for s in parts {
        suite.absorb(s);
    }
    Ok(suite)
}

fn single(report: CheckReport) -> SuiteReport {
    let mut s = SuiteReport::default();
    s.push(report);
    s
}

/// Run one known-class property over random instances.
pub fn verify_class_properties(class: PropertyClass, opts: &ClassOptions) -> Result<ClassReport, VerifyError> {
    if opts.graphs.is_empty() && matches!(class, PropertyClass::Abundant | PropertyClass::Complement | PropertyClass::Confinement) {
        return Err(VerifyError::InvalidParameter("no graphs given".into()));
    }
    let pick = |rng: &mut ChaCha8Rng| opts.graphs[rng.random_range(0..opts.graphs.len())].clone();
    let suite = match class {
        PropertyClass::Trees => {
            if opts.max_tree < 1 {
                return Err(VerifyError::InvalidParameter("tree size must be at least 1".into()));
            }
            collect_suite(opts.samples, |i| {
                let mut rng = sample_rng(opts.seed, i);
                let n = rng.random_range(1..=opts.max_tree);
                let tree = Arc::new(random_tree(n, &mut rng)?);
                let start = Position::new(tree.clone(), sample_box(&mut rng, &random_hi(&tree, true)))?;
                let p = detect_period(&start, opts.cap)?.period;
                let mut c = CheckReport::new("tree_period_1_or_2", false);
                c.record((p > 2).then(|| {
                    Violation::new(0, format!("period {p} on a tree with {n} vertices")).values([p as i64])
                }));
                Ok(single(c.with_start(start.chips())))
            })?
        }
        PropertyClass::Complete => {
            if opts.max_complete < 1 {
                return Err(VerifyError::InvalidParameter("complete graph size must be at least 1".into()));
            }
            collect_suite(opts.samples, |i| {
                let mut rng = sample_rng(opts.seed, i);
                let n = rng.random_range(1..=opts.max_complete);
                let g = Arc::new(crate::graph::build_graph(&crate::graph::GraphSpec::Complete(n))?);
                let start = Position::new(g.clone(), sample_box(&mut rng, &random_hi(&g, true)))?;
                let p = detect_period(&start, opts.cap)?.period;
                let mut c = CheckReport::new("complete_period_at_most_n", false);
                c.record((p > n as u64).then(|| {
                    Violation::new(0, format!("period {p} on K_{n}")).values([p as i64, n as i64])
                }));
                Ok(single(c.with_start(start.chips())))
            })?
        }
        PropertyClass::Abundant => collect_suite(opts.samples, |i| {
            let mut rng = sample_rng(opts.seed, i);
            let g = pick(&mut rng);
            let start = abundant_position(&g, &mut rng)?;
            let p = detect_period(&start, opts.cap)?.period;
            let mut c = CheckReport::new("abundant_period_1", false);
            c.record((p != 1).then(|| Violation::new(0, format!("abundant start has period {p}")).values([p as i64])));
            Ok(single(c.with_start(start.chips())))
        })?,
        PropertyClass::Complement => collect_suite(opts.samples, |i| {
            let mut rng = sample_rng(opts.seed, i);
            let g = pick(&mut rng);
            let start = random_confined(&g, &mut rng, SAMPLER_TRIES)?;
            complement_checks(&start, opts.commute_steps, opts.cap).map(|s| {
                let mut out = SuiteReport::default();
                for c in s.checks {
                    out.push(c.with_start(start.chips()));
                }
                out
            })
        })?,
        PropertyClass::Confinement => collect_suite(opts.samples, |i| {
            let mut rng = sample_rng(opts.seed, i);
            let g = pick(&mut rng);
            let start = Position::new(g.clone(), sample_box(&mut rng, &random_hi(&g, true)))?;
            let orbit = detect_period(&start, opts.cap)?.orbit_positions(&start);
            let mut out = SuiteReport::default();
            for c in orbit_confinement_checks(&orbit).checks {
                out.push(c.with_start(start.chips()));
            }
            Ok(out)
        })?,
    };
    Ok(ClassReport {
        class,
        seed: opts.seed,
        samples: opts.samples,
        suite,
    })
}

/// A position with `Σσ ≥ 4|E| − |V|`: a random start on `[0, 4deg(v)]`
/// topped up one chip at a time on random vertices.
pub fn abundant_position(graph: &Arc<Graph>, rng: &mut ChaCha8Rng) -> Result<Position, VerifyError> {
    let threshold = abundance_threshold(graph);
    let mut chips = sample_box(rng, &random_hi(graph, true));
    let n = chips.len();
    while (chips.iter().sum::<u64>() as i128) < threshold {
        chips[rng.random_range(0..n)] += 1;
    }
    Ok(Position::new(graph.clone(), chips)?)
}

/// `4|E| − |V|`.
pub fn abundance_threshold(graph: &Graph) -> i128 {
    4 * graph.edge_count() as i128 - graph.vertex_count() as i128
}

/// Stepwise commutation of complement with the step operator, the firing
/// flip, and equal periods. Requires `σ(v) ≤ 2deg(v) − 1`.
pub fn complement_checks(start: &Position, steps: usize, cap: u64) -> Result<SuiteReport, VerifyError> {
    let mut commute = CheckReport::new("complement_commutes", false);
    let mut flip = CheckReport::new("firing_flip", false);
    let mut periods = CheckReport::new("complement_period", false);
    let mut cur = start.clone();
    for t in 0..steps {
        let c = cur.complement()?;
        let n = cur.chips().len();
        let flipped: Vec<usize> = (0..n).filter(|&v| c.fires(v) == cur.fires(v)).collect();
        flip.record((!flipped.is_empty()).then(|| {
            Violation::new(t as u64, "vertex fires in both or neither of σ and σ_c").vertices(flipped.iter().copied())
        }));
        let next = cur.step()?;
        let lhs = c.step()?;
        let rhs = next.complement()?;
        commute.record((lhs != rhs).then(|| {
            let diff: Vec<usize> = (0..n).filter(|&v| lhs.chips()[v] != rhs.chips()[v]).collect();
            Violation::new(t as u64, "U(σ_c) != (Uσ)_c").vertices(diff)
        }));
        cur = next;
    }
    let p = detect_period(start, cap)?.period;
    let pc = detect_period(&start.complement()?, cap)?.period;
    periods.record((p != pc).then(|| Violation::new(0, "p(σ) != p(σ_c)").values([p as i64, pc as i64])));
    let mut suite = SuiteReport::default();
    suite.push(commute);
    suite.push(flip);
    suite.push(periods);
    Ok(suite)
}

/// For an orbit with `p > 1`: every orbit position confined (literal
/// definition, Φ taken in the same position), and the step-window bound
/// `Φ_σ(v) ≤ Uσ(v) ≤ Φ_σ(v) + deg(v) − 1` along every orbit transition.
pub fn orbit_confinement_checks(orbit: &[Position]) -> SuiteReport {
    let mut literal = CheckReport::new("orbit_confinement", false);
    let mut window = CheckReport::new("step_window", false);
    if orbit.len() > 1 {
        for (i, tau) in orbit.iter().enumerate() {
            let bad = tau.unconfined_vertices();
            literal.record((!bad.is_empty()).then(|| {
                Violation::new(i as u64, format!("orbit position {:?} not confined", tau.chips())).vertices(bad)
            }));
            let next = &orbit[(i + 1) % orbit.len()];
            let bad = step_window_violations(tau, next);
            window.record((!bad.is_empty()).then(|| {
                Violation::new(i as u64, "Uσ(v) outside [Φσ(v), Φσ(v)+deg(v)−1]").vertices(bad)
            }));
        }
    }
    let mut suite = SuiteReport::default();
    suite.push(literal);
    suite.push(window);
    suite
}

/// Lemma suites on `K_{a,b}`: every start in the box (exhaustive) or
/// `samples` random confined starts. Confinement-gated suites run on
/// confined starts only; the dichotomy check runs on every start.
pub fn verify_bipartite_lemmas(
    a: usize,
    b: usize,
    mode: &EnumerationMode,
    horizon: usize,
    cap: u64,
) -> Result<SuiteReport, VerifyError> {
    let graph = Arc::new(crate::graph::build_graph(&crate::graph::GraphSpec::CompleteBipartite(a, b))?);
    let run = |chips: Vec<u64>| -> Result<SuiteReport, VerifyError> {
        let p = Position::new(graph.clone(), chips)?;
        let suite = bipartite::check_all(&p, horizon, cap)?;
        let mut out = SuiteReport::default();
        for c in suite.checks {
            out.push(c.with_start(p.chips()));
        }
        Ok(out)
    };
    let parts: Vec<SuiteReport> = match *mode {
        EnumerationMode::Exhaustive => {
            let bound = default_bound(&graph);
            let states = box_size(&bound);
            if states > DEFAULT_BUDGET {
                return Err(VerifyError::BudgetExceeded { states, budget: DEFAULT_BUDGET });
            }
            (0..states as u64)
                .into_par_iter()
                .map(|i| {
                    let mut chips = vec![0; graph.vertex_count()];
                    decode(i as u128, &bound, &mut chips);
                    run(chips)
                })
                .collect::<Result<_, _>>()?
        }
        EnumerationMode::Random { samples, seed, .. } => (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                run(random_confined(&graph, &mut rng, SAMPLER_TRIES)?.into_chips())
            })
            .collect::<Result<_, _>>()?,
    };
    let mut suite = SuiteReport::default();
    for s in parts {
        suite.absorb(s);
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn graph(spec: &str) -> Arc<Graph> {
        Arc::new(build_graph(&spec.parse().unwrap()).unwrap())
    }

    fn periods(r: &PeriodSetReport) -> Vec<u64> {
        r.periods.keys().copied().collect()
    }

    #[test]
    fn decode_and_increment_agree() {
        let bound = [2, 0, 3];
        let mut a = vec![0; 3];
        let mut b = vec![0; 3];
        for i in 0..box_size(&bound) {
            decode(i, &bound, &mut a);
            assert_eq!(a, b);
            increment(&mut b, &bound);
        }
        assert_eq!(b, vec![0, 0, 0]);
    }

    #[test]
    fn small_bipartite_sets() {
        let r = verify_bipartite_theorem(2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.starts, 256);
        assert_eq!(periods(&r), vec![1, 2, 4]);
        assert_eq!(r.verdict, Verdict::Match);
        assert!(r.passed());
        let r = verify_bipartite_theorem(1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(periods(&r), vec![1, 2]);
    }

    #[test]
    fn path3_periods_within_tree_bound() {
        let r = enumerate_periods(&graph("path:3"), &EnumerateOptions::default()).unwrap();
        assert!(periods(&r).iter().all(|&p| p <= 2));
        assert_eq!(r.starts, 2 * 4 * 2);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumerateOptions { budget: 100, ..EnumerateOptions::default() };
        assert!(matches!(
            enumerate_periods(&graph("complete_bipartite:2,2"), &opts),
            Err(VerifyError::BudgetExceeded { states: 256, budget: 100 })
        ));
    }

    #[test]
    fn mismatch_lists_missing_and_extra() {
        let found: BTreeMap<u64, u64> = [(1, 3), (5, 1)].into_iter().collect();
        let expected = PeriodSet([1, 2].into_iter().collect());
        assert_eq!(
            Verdict::compare(&found, Some(&expected)),
            Verdict::Mismatch { missing: vec![2], extra: vec![5] }
        );
    }

    #[test]
    fn random_mode_is_seed_reproducible() {
        let g = graph("complete_bipartite:3,3");
        let mode = EnumerationMode::Random { samples: 200, seed: 11, unconfined: true };
        let opts = EnumerateOptions { mode, ..EnumerateOptions::default() };
        let a = enumerate_periods(&g, &opts).unwrap();
        let b = enumerate_periods(&g, &opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.starts, 200);
    }

    #[test]
    fn csv_shape() {
        let r = verify_bipartite_theorem(1, 1, DEFAULT_BUDGET).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("\"complete_bipartite:1,1\",exhaustive,1;1,1,"));
    }

    #[test]
    fn confined_sampler_yields_confined() {
        let g = graph("cycle:6");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert!(random_confined(&g, &mut rng, SAMPLER_TRIES).unwrap().is_confined());
        }
    }

    #[test]
    fn abundant_positions_reach_threshold() {
        let g = graph("complete_bipartite:2,2");
        assert_eq!(abundance_threshold(&g), 12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = abundant_position(&g, &mut rng).unwrap();
        assert!(p.total_chips() >= 12);
        let all3 = Position::new(g, vec![3; 4]).unwrap();
        assert_eq!(detect_period(&all3, 100).unwrap().period, 1);
    }

    #[test]
    fn class_suites_pass_small() {
        let opts = ClassOptions { samples: 50, seed: 7, cap: 100_000, ..ClassOptions::default() };
        for class in [PropertyClass::Trees, PropertyClass::Complete, PropertyClass::Abundant, PropertyClass::Complement] {
            let r = verify_class_properties(class, &opts).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.suite.checks.iter().all(|c| c.hypothesis_count > 0));
        }
    }

    #[test]
    fn lemma_suite_on_k22() {
        let s = verify_bipartite_lemmas(2, 2, &EnumerationMode::Exhaustive, 12, 10_000).unwrap();
        assert!(s.passed(), "{s}");
        for c in &s.checks {
            assert!(c.hypothesis_count > 0, "{c}");
        }
    }
}
