//! Parallel chip-firing on simple connected graphs.
//!
//! The crate simulates the synchronous chip-firing automaton, detects the
//! transient length and period of any position, builds positions with
//! prescribed periods on complete bipartite and complete multipartite graphs,
//! and checks the structural lemmas and the bipartite period theorem by
//! exhaustive or seeded random sweeps.

pub mod bipartite;
pub mod construct;
pub mod engine;
pub mod graph;
pub mod period;
pub mod report;
pub mod verify;

pub use engine::{
    step_cap, EngineError, Position, PositionDocument, PositionDocumentError, StepTrace, Stepper,
    DEFAULT_STEP_CAP,
};
pub use graph::{build_graph, EdgeList, Graph, GraphError, GraphSpec, Issue, ValidationReport};
pub use period::{
    activity, detect_period, detect_period_lowmem, fires_per_period, DetectError,
    DetectionMethod, PeriodResult, PeriodSummary,
};
pub use report::{CheckReport, SuiteReport, Violation};
pub use construct::{
    bipartite_period_set, construct_bipartite_period, construct_cpartite_period, cpartite_schedule,
    position_from_schedule, ConstructError, PeriodSet, Schedule,
};
pub use verify::{enumerate_periods, verify_bipartite_theorem, verify_class_properties, PeriodSetReport};
