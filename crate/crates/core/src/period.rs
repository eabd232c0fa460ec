//! Transient length and period detection for the step operator.
//!
//! Two independent detectors share one contract: [`detect_period`] records
//! every visited state until the first revisit, and [`detect_period_lowmem`]
//! runs Brent's cycle finder with O(1) stored states. Both succeed exactly
//! when `t0 + p ≤ cap`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{EngineError, Position, Stepper};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionMethod {
    StoredState,
    ConstantMemory,
}

impl fmt::Display for DetectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionMethod::StoredState => "stored-state",
            DetectionMethod::ConstantMemory => "constant-memory",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("no period found within the step cap {cap} ({steps} steps taken)")]
    CapExceeded { cap: u64, steps: u64 },
    #[error("step cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("fire counts over one period differ between vertices: {counts:?}")]
    NonUniformFires { counts: Vec<u64> },
}

/// Transient, period, and one full periodic orbit of a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodResult {
    pub transient: u64,
    pub period: u64,
    /// Chip vectors of `U^{t0}σ, …, U^{t0+p−1}σ`.
    pub orbit: Vec<Vec<u64>>,
    /// Fires of each vertex over one period, replayed from `U^{t0}σ`.
    pub fires_per_period: Vec<u64>,
    pub method: DetectionMethod,
}

/// The machine-readable summary emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSummary {
    pub transient: u64,
    pub period: u64,
    pub fires_per_period: u64,
    pub activity: String,
    pub method: DetectionMethod,
}

impl PeriodResult {
    /// The common per-vertex fire count over one period.
    pub fn uniform_fires(&self) -> u64 {
        self.fires_per_period.first().copied().unwrap_or(0)
    }

    pub fn orbit_positions(&self, start: &Position) -> Vec<Position> {
        self.orbit
            .iter()
            .map(|chips| Position::new(start.graph().clone(), chips.clone()).unwrap())
            .collect()
    }

    pub fn summary(&self) -> PeriodSummary {
        let a = activity(self);
        PeriodSummary {
            transient: self.transient,
            period: self.period,
            fires_per_period: self.uniform_fires(),
            activity: format!("{}/{}", a.numer(), a.denom()),
            method: self.method,
        }
    }
}

/// Per-vertex fire counts over one period.
pub fn fires_per_period(result: &PeriodResult) -> &[u64] {
    &result.fires_per_period
}

/// Long-run fires per vertex per step, `Σ_v k_v / (|V|·p)`, reduced.
pub fn activity(result: &PeriodResult) -> Ratio<u64> {
    let fires: u64 = result.fires_per_period.iter().sum();
    let n = result.fires_per_period.len().max(1) as u64;
    Ratio::new(fires, n * result.period)
}

/// Stored-state detection: remember every visited encoding with its step
/// index until one repeats.
pub fn detect_period(start: &Position, cap: u64) -> Result<PeriodResult, DetectError> {
    if cap == 0 {
        return Err(DetectError::ZeroCap);
    }
    let graph = start.graph();
    let mut stepper = Stepper::new(graph);
    let mut index: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut states: Vec<Vec<u64>> = Vec::new();
    let mut cur = start.chips().to_vec();
    let mut t = 0u64;
    let transient = loop {
        if let Some(&first) = index.get(&cur) {
            break first;
        }
        if t == cap {
            return Err(DetectError::CapExceeded { cap, steps: t });
        }
        let mut next = vec![0; cur.len()];
        stepper.step(&cur, &mut next)?;
        index.insert(cur.clone(), t);
        states.push(std::mem::replace(&mut cur, next));
        t += 1;
    };
    drop(index);
    let orbit = states.split_off(transient as usize);
    let fires = replay_fires(&mut stepper, &orbit)?;
    Ok(PeriodResult {
        transient,
        period: t - transient,
        orbit,
        fires_per_period: fires,
        method: DetectionMethod::StoredState,
    })
}

/// Constant-memory detection (Brent). Same contract as [`detect_period`].
pub fn detect_period_lowmem(start: &Position, cap: u64) -> Result<PeriodResult, DetectError> {
    if cap == 0 {
        return Err(DetectError::ZeroCap);
    }
    let graph = start.graph();
    let mut stepper = Stepper::new(graph);
    let n = start.chips().len();
    let mut scratch = vec![0; n];
    let mut advance = |s: &mut Vec<u64>| -> Result<(), EngineError> {
        stepper.step(s, &mut scratch)?;
        std::mem::swap(s, &mut scratch);
        Ok(())
    };

    // The hare needs at most about 3·(t0 + p) steps to close the cycle.
    let budget = cap.saturating_mul(3).saturating_add(3);
    let mut steps = 1u64;
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start.chips().to_vec();
    let mut hare = tortoise.clone();
    advance(&mut hare)?;
    while tortoise != hare {
        if power == lam {
            tortoise.clone_from(&hare);
            power *= 2;
            lam = 0;
        }
        advance(&mut hare)?;
        lam += 1;
        steps += 1;
        if steps > budget {
            return Err(DetectError::CapExceeded { cap, steps });
        }
    }

    let mut tortoise = start.chips().to_vec();
    let mut hare = tortoise.clone();
    for _ in 0..lam {
        advance(&mut hare)?;
    }
    let mut mu = 0u64;
    while tortoise != hare {
        advance(&mut tortoise)?;
        advance(&mut hare)?;
        mu += 1;
        steps += 2;
        if mu + lam > cap {
            return Err(DetectError::CapExceeded { cap, steps });
        }
    }
    if mu + lam > cap {
        return Err(DetectError::CapExceeded { cap, steps });
    }

    let mut orbit = Vec::with_capacity(lam as usize);
    let mut cur = tortoise;
    for _ in 0..lam {
        orbit.push(cur.clone());
        advance(&mut cur)?;
    }
    let fires = replay_fires(&mut Stepper::new(graph), &orbit)?;
    Ok(PeriodResult {
        transient: mu,
        period: lam,
        orbit,
        fires_per_period: fires,
        method: DetectionMethod::ConstantMemory,
    })
}

/// Count fires per vertex over one pass of `orbit`; they must all agree.
fn replay_fires(stepper: &mut Stepper<'_>, orbit: &[Vec<u64>]) -> Result<Vec<u64>, DetectError> {
    let n = orbit[0].len();
    let mut counts = vec![0u64; n];
    let mut next = vec![0; n];
    for state in orbit {
        stepper.step(state, &mut next)?;
        for (c, &f) in counts.iter_mut().zip(stepper.fired()) {
            *c += u64::from(f);
        }
    }
    debug_assert_eq!(next, orbit[0]);
    if counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(DetectError::NonUniformFires { counts });
    }
    Ok(counts)
}
