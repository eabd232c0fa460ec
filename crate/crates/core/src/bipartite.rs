//! Side-indexed fire accounting on `K_{a,b}` and executable checks of the
//! bipartite fire-count lemmas.
//!
//! `L` is always the smaller side; when the graph was declared with the
//! larger side first the labels are swapped internally. For a side `S`,
//! `α_t(S, m)` is the number of fires of `S`-vertices during steps
//! `m..m+t`, and `d_t(v, m)` the number of fires of `v` in that window.
//!
//! Every check in this module reports a [`CheckReport`] rather than a bare
//! boolean. Hypothesis-gated checks count how often their premise occurred.

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{EngineError, Position, StepTrace};
use crate::graph::Graph;
use crate::period::{detect_period, DetectError};
use crate::report::{CheckReport, SuiteReport, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BipartiteError {
    #[error("graph is not a complete bipartite graph")]
    NotCompleteBipartite,
    #[error("position is not confined at vertices {vertices:?}")]
    NotConfined { vertices: Vec<usize> },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// The two sides of a complete bipartite graph, smaller side first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sides {
    pub left: Range<usize>,
    pub right: Range<usize>,
    /// True when `L` is the second declared part.
    pub swapped: bool,
}

impl Sides {
    pub fn of(graph: &Graph) -> Result<Self, BipartiteError> {
        let parts = graph.parts().filter(|p| p.count() == 2);
        let parts = parts.ok_or(BipartiteError::NotCompleteBipartite)?;
        let (first, second) = (parts.members(0), parts.members(1));
        Ok(if first.len() <= second.len() {
            Sides {
                left: first,
                right: second,
                swapped: false,
            }
        } else {
            Sides {
                left: second,
                right: first,
                swapped: true,
            }
        })
    }

    pub fn a(&self) -> usize {
        self.left.len()
    }

    pub fn b(&self) -> usize {
        self.right.len()
    }

    pub fn min_side(&self) -> usize {
        self.a()
    }

    pub fn side(&self, side: Side) -> Range<usize> {
        match side {
            Side::L => self.left.clone(),
            Side::R => self.right.clone(),
        }
    }

    /// `(S, T)` pairs: each side with its opposite.
    fn orientations(&self) -> [(Side, Range<usize>, Range<usize>); 2] {
        [
            (Side::L, self.left.clone(), self.right.clone()),
            (Side::R, self.right.clone(), self.left.clone()),
        ]
    }
}

/// Per-side fire accounting over a recorded trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideAccount {
    pub side: Side,
    pub vertices: Range<usize>,
    /// `F_S(U^tσ)` for `0 ≤ t < horizon`.
    pub firing_counts: Vec<u64>,
    prefix: Vec<u64>,
    /// `u_t(σ, v)` for the side's vertices, `[t][i]`, `0 ≤ t ≤ horizon`.
    cumulative: Vec<Vec<u64>>,
}

impl SideAccount {
    fn build(side: Side, vertices: Range<usize>, trace: &StepTrace) -> Self {
        let horizon = trace.horizon();
        let firing_counts: Vec<u64> = (0..horizon)
            .map(|t| vertices.clone().filter(|&v| trace.fired(v, t)).count() as u64)
            .collect();
        let mut prefix = Vec::with_capacity(horizon + 1);
        prefix.push(0);
        for &f in &firing_counts {
            prefix.push(prefix.last().unwrap() + f);
        }
        let cumulative = (0..=horizon)
            .map(|t| trace.fire_counts(t)[vertices.clone()].to_vec())
            .collect();
        SideAccount {
            side,
            vertices,
            firing_counts,
            prefix,
            cumulative,
        }
    }

    pub fn horizon(&self) -> usize {
        self.firing_counts.len()
    }

    /// `α_t(S, m)`; requires `m + t ≤ horizon`.
    pub fn alpha(&self, t: usize, m: usize) -> u64 {
        self.prefix[m + t] - self.prefix[m]
    }

    /// `d_t(v, m)` for vertex id `v` on this side; requires `m + t ≤ horizon`.
    pub fn d(&self, v: usize, t: usize, m: usize) -> u64 {
        let i = v - self.vertices.start;
        self.cumulative[m + t][i] - self.cumulative[m][i]
    }
}

/// `(L, R)` accounts for a trace on a complete bipartite graph.
pub fn side_accounts(
    trace: &StepTrace,
    graph: &Graph,
) -> Result<(SideAccount, SideAccount), BipartiteError> {
    let sides = Sides::of(graph)?;
    Ok((
        SideAccount::build(Side::L, sides.left, trace),
        SideAccount::build(Side::R, sides.right, trace),
    ))
}

fn require_confined(p: &Position) -> Result<Sides, BipartiteError> {
    let sides = Sides::of(p.graph())?;
    let bad = p.unconfined_vertices();
    if !bad.is_empty() {
        return Err(BipartiteError::NotConfined { vertices: bad });
    }
    Ok(sides)
}

/// Same-side fire counts stay ordered and within one of each other: for
/// `σ(v) ≤ σ(w)`, `u_t(v) ≤ u_t(w) ≤ u_t(v) + 1` for every `t ≤ horizon`.
pub fn check_lemma_diff1(p: &Position, horizon: usize) -> Result<CheckReport, BipartiteError> {
    let sides = require_confined(p)?;
    let trace = StepTrace::record(p, horizon)?;
    let chips = p.chips();
    let mut report = CheckReport::new("lemma_3_1", false);
    for side in [sides.left.clone(), sides.right.clone()] {
        for v in side.clone() {
            for w in side.clone() {
                if v == w || chips[v] > chips[w] {
                    continue;
                }
                for t in 0..=horizon {
                    let (uv, uw) = (trace.fire_count(t, v), trace.fire_count(t, w));
                    report.record((!(uv <= uw && uw <= uv + 1)).then(|| {
                        Violation::new(t as u64, "u_t(v) <= u_t(w) <= u_t(v)+1 broken")
                            .vertices([v, w])
                            .values([uv as i64, uw as i64])
                    }));
                }
            }
        }
    }
    Ok(report)
}

/// For every window `(m, t)` with `m + t ≤ horizon` where `|S|` divides
/// `α_t(S, m)`: every `S`-vertex fired `α/|S|` times in the window; when
/// `α = k|S|` with `k ≥ 1`, every opposite vertex fired `k` times in the
/// window shifted by one step. Checked for both orientations of the sides.
pub fn check_divisibility_lemmas(
    p: &Position,
    horizon: usize,
) -> Result<SuiteReport, BipartiteError> {
    let sides = require_confined(p)?;
    let trace = StepTrace::record(p, horizon + 1)?;
    let mut even = CheckReport::new("lemma_3_2", true);
    let mut shifted = CheckReport::new("lemma_3_3", true);
    let mut both = CheckReport::new("eq_6", true);
    for (side, own, other) in sides.orientations() {
        let size = own.len() as u64;
        let acc = SideAccount::build(side, own.clone(), &trace);
        let opp = SideAccount::build(side, other.clone(), &trace);
        for m in 0..horizon {
            for t in 1..=horizon - m {
                let alpha = acc.alpha(t, m);
                if !alpha.is_multiple_of(size) {
                    continue;
                }
                let k = alpha / size;
                let own_bad: Vec<usize> = own.clone().filter(|&v| acc.d(v, t, m) != k).collect();
                even.record((!own_bad.is_empty()).then(|| {
                    Violation::new(m as u64, format!("d_t(v,m) != alpha/|S| = {k} on {side:?}"))
                        .window(t as u64)
                        .vertices(own_bad.iter().copied())
                }));
                if k == 0 {
                    continue;
                }
                let opp_bad: Vec<usize> =
                    other.clone().filter(|&w| opp.d(w, t, m + 1) != k).collect();
                shifted.record((!opp_bad.is_empty()).then(|| {
                    Violation::new(m as u64, format!("d_t(w,m+1) != k = {k} opposite {side:?}"))
                        .window(t as u64)
                        .vertices(opp_bad.iter().copied())
                }));
                both.record((!own_bad.is_empty() || !opp_bad.is_empty()).then(|| {
                    Violation::new(m as u64, format!("d_t(v,m) = d_t(w,m+1) = {k} broken"))
                        .window(t as u64)
                        .vertices(own_bad.iter().chain(&opp_bad).copied())
                }));
            }
        }
    }
    let mut suite = SuiteReport::default();
    suite.push(even);
    suite.push(shifted);
    suite.push(both);
    Ok(suite)
}

/// Trace identities on a confined start: the fire-count balance
/// `U^tσ(v) − σ(v) = α_t(T) − |T|·u_t(v)`, the two-step parity relation,
/// and period sufficiency (`α_t(S,m) = k|S|`, `F_v(m) = F_v(m+t)` on `S`,
/// `t` minimal ⇒ `p(σ) = t`).
pub fn check_trace_identities(
    p: &Position,
    horizon: usize,
    cap: u64,
) -> Result<SuiteReport, BipartiteError> {
    let sides = require_confined(p)?;
    let period = detect_period(p, cap)?.period;
    let trace = StepTrace::record(p, horizon)?;
    let mut balance = CheckReport::new("eq_4", false);
    let mut parity = CheckReport::new("eq_7", true);
    let mut sufficiency = CheckReport::new("lemma_3_4", true);
    for (side, own, other) in sides.orientations() {
        let size = own.len() as u64;
        let acc = SideAccount::build(side, own.clone(), &trace);
        let opp = SideAccount::build(side, other.clone(), &trace);

        for t in 0..=horizon {
            for v in own.clone() {
                let lhs = trace.state(t)[v] as i64 - p.chips()[v] as i64;
                let rhs = opp.alpha(t, 0) as i64 - (other.len() as u64 * trace.fire_count(t, v)) as i64;
                balance.record((lhs != rhs).then(|| {
                    Violation::new(t as u64, "U^t(v) - σ(v) != α_t(T) - |T| u_t(v)")
                        .vertices([v])
                        .values([lhs, rhs])
                }));
            }
        }

        for m in (0..horizon).step_by(2) {
            for t in 1..horizon {
                if m + 2 + t > horizon {
                    break;
                }
                let alpha = acc.alpha(t, m);
                if alpha == 0 || !alpha.is_multiple_of(size) || acc.alpha(t, m + 2) != alpha {
                    continue;
                }
                let fired = |v: usize, s: usize| u64::from(trace.fired(v, s));
                let bad: Vec<usize> = own
                    .clone()
                    .filter(|&v| fired(v, m) + fired(v, m + 1) != fired(v, m + t) + fired(v, m + t + 1))
                    .collect();
                parity.record((!bad.is_empty()).then(|| {
                    Violation::new(m as u64, "F(m)+F(m+1) != F(m+t)+F(m+t+1)")
                        .window(t as u64)
                        .vertices(bad)
                }));
            }
        }

        for m in 0..horizon {
            let minimal = (1..horizon - m).find(|&t| {
                let alpha = acc.alpha(t, m);
                alpha > 0
                    && alpha.is_multiple_of(size)
                    && own.clone().all(|v| trace.fired(v, m) == trace.fired(v, m + t))
            });
            if let Some(t) = minimal {
                sufficiency.record((period != t as u64).then(|| {
                    Violation::new(m as u64, format!("minimal window {t} but period {period}"))
                        .window(t as u64)
                        .values([period as i64])
                }));
            }
        }
    }
    let mut suite = SuiteReport::default();
    suite.push(balance);
    suite.push(parity);
    suite.push(sufficiency);
    Ok(suite)
}

/// Period dichotomy and bounds for any start on `K_{a,b}`.
///
/// `prop_3_7`: for every confined position `τ` on the periodic orbit and
/// each side `S`, the smallest `t ≥ 1` with `α_t(S) = k|S|`, `k ≥ 1`, measured
/// from `τ`, satisfies `p ∈ {t, 2t}`. `cor_3_6`: odd periods are at most
/// `min(a,b)`, even ones at most `2·min(a,b)`.
pub fn check_period_dichotomy(p: &Position, cap: u64) -> Result<SuiteReport, BipartiteError> {
    let sides = Sides::of(p.graph())?;
    let result = detect_period(p, cap)?;
    let period = result.period;
    let graph: &Arc<Graph> = p.graph();
    let orbit = result.orbit_positions(p);
    let firing: Vec<Vec<bool>> = orbit
        .iter()
        .map(|q| (0..q.chips().len()).map(|v| q.fires(v)).collect())
        .collect();
    let len = period as usize;

    let mut dichotomy = CheckReport::new("prop_3_7", true);
    for (i, tau) in orbit.iter().enumerate() {
        if !tau.is_confined() {
            continue;
        }
        for (side, own, _) in sides.orientations() {
            let size = own.len() as u64;
            let mut alpha = 0u64;
            let window = (1..=len).find(|&t| {
                alpha += own.clone().filter(|&v| firing[(i + t - 1) % len][v]).count() as u64;
                alpha > 0 && alpha.is_multiple_of(size)
            });
            if let Some(t) = window {
                let t = t as u64;
                dichotomy.record((period != t && period != 2 * t).then(|| {
                    Violation::new(i as u64, format!("period {period} not in {{{t}, {}}} on {side:?}", 2 * t))
                        .window(t)
                        .values([period as i64])
                }));
            }
        }
    }

    let mut bounds = CheckReport::new("cor_3_6", false);
    let min = sides.min_side() as u64;
    let ok = if period % 2 == 1 { period <= min } else { period <= 2 * min };
    bounds.record((!ok).then(|| {
        Violation::new(result.transient, format!("period {period} exceeds bound for min side {min}"))
            .values([period as i64])
    }));
    debug_assert!(graph.vertex_count() == sides.a() + sides.b());

    let mut suite = SuiteReport::default();
    suite.push(dichotomy);
    suite.push(bounds);
    Ok(suite)
}

/// Every lemma check that applies to `p`. Confinement-gated suites are
/// skipped when `p` is not confined.
pub fn check_all(p: &Position, horizon: usize, cap: u64) -> Result<SuiteReport, BipartiteError> {
    let mut suite = SuiteReport::default();
    if p.is_confined() {
        suite.push(check_lemma_diff1(p, horizon)?);
        suite.absorb(check_divisibility_lemmas(p, horizon)?);
        suite.absorb(check_trace_identities(p, horizon, cap)?);
    }
    suite.absorb(check_period_dichotomy(p, cap)?);
    Ok(suite)
}
