use std::fmt::Write as _;
use std::sync::Arc;

use chipfire::construct::{construct_cpartite_period, ConstructError, Pattern};
use chipfire::verify::{
    enumerate_periods, verify_bipartite_lemmas, verify_bipartite_theorem, verify_class_properties, ClassOptions,
    csv_field, EnumerateOptions, EnumerationMode, VerifyError, CSV_HEADER,
};
use chipfire::{
    bipartite_period_set, build_graph, construct_bipartite_period, detect_period, detect_period_lowmem, step_cap,
    DetectError, EngineError, GraphSpec, PeriodSummary, Position, PositionDocument,
};
use serde::Serialize;

use crate::output::{csv, join, json, CliError, CliResult, ErrorKind, Format};
use crate::{Cli, Command, Construct, EnumerateArgs, Method, Mode, PositionInput, Verify};

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Simulate { input, steps } => simulate(input, *steps, cli.format.unwrap_or(Format::Text)),
        Command::Period { input, method, cap } => period(input, *method, *cap, cli.format.unwrap_or(Format::Json)),
        Command::Construct(c) => construct(c, cli.format.unwrap_or(Format::Json)),
        Command::Enumerate(args) => enumerate(args, cli.seed, cli.format.unwrap_or(Format::Csv)),
        Command::Verify(v) => verify(v, cli.seed, cli.format.unwrap_or(Format::Text)),
    }
}

fn parse_spec(text: &str) -> CliResult<GraphSpec> {
    text.parse().map_err(CliError::input)
}

fn parse_chips(text: &str) -> CliResult<Vec<u64>> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::input(format!("`{}` is not a chip count", t.trim()))))
        .collect()
}

fn load_position(input: &PositionInput) -> CliResult<Position> {
    let doc = match (&input.chips, &input.chips_file) {
        (Some(chips), None) => {
            let graph = input.graph.as_deref().ok_or_else(|| CliError::input("--chips needs --graph"))?;
            PositionDocument { graph: parse_spec(graph)?, chips: parse_chips(chips)? }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let doc: PositionDocument = serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            if let Some(graph) = &input.graph {
                let spec = parse_spec(graph)?;
                if spec != doc.graph {
                    return Err(CliError::input(format!(
                        "--graph {spec} disagrees with the chips file graph {}",
                        doc.graph
                    )));
                }
            }
            doc
        }
        _ => return Err(CliError::input("give exactly one of --chips or --chips-file")),
    };
    doc.into_position().map_err(CliError::input)
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::StepCapExceeded { .. } => CliError::new(ErrorKind::Cap, e),
        _ => CliError::input(e),
    }
}

fn detect_error(e: DetectError) -> CliError {
    match e {
        DetectError::CapExceeded { .. } => CliError::new(ErrorKind::Cap, e),
        DetectError::Engine(e) => engine_error(e),
        _ => CliError::new(ErrorKind::Verification, e),
    }
}

fn spec_of(p: &Position) -> String {
    p.graph().spec().map(ToString::to_string).unwrap_or_default()
}

#[derive(Serialize)]
struct SimStep {
    step: usize,
    chips: Vec<u64>,
    firing: Vec<usize>,
}

#[derive(Serialize)]
struct Simulation {
    graph: String,
    steps: Vec<SimStep>,
}

fn simulate(input: &PositionInput, steps: u64, format: Format) -> CliResult<String> {
    let start = load_position(input)?;
    let (_, trace) = start.advance(steps, true).map_err(engine_error)?;
    let trace = trace.expect("recorded");
    let rows: Vec<SimStep> = (0..=trace.horizon())
        .map(|t| {
            let p = trace.position(t);
            SimStep { step: t, chips: p.chips().to_vec(), firing: p.firing_set() }
        })
        .collect();
    Ok(match format {
        Format::Json => json(&Simulation { graph: spec_of(&start), steps: rows }),
        Format::Csv => csv(
            &["step", "chips", "firing"],
            &rows.iter().map(|r| vec![r.step.to_string(), join(&r.chips, ";"), join(&r.firing, ";")]).collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut out = format!("graph {}\n", spec_of(&start));
            for r in &rows {
                let _ = writeln!(out, "{:>4}  [{}]  fires {{{}}}", r.step, join(&r.chips, ","), join(&r.firing, ","));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct BothMethods {
    agree: bool,
    stored_state: PeriodSummary,
    constant_memory: PeriodSummary,
}

fn summary_text(s: &PeriodSummary) -> String {
    format!(
        "transient {}, period {}, fires per period {}, activity {} ({})\n",
        s.transient, s.period, s.fires_per_period, s.activity, s.method
    )
}

fn summary_rows(items: &[&PeriodSummary]) -> String {
    csv(
        &["transient", "period", "fires_per_period", "activity", "method"],
        &items
            .iter()
            .map(|s| {
                vec![
                    s.transient.to_string(),
                    s.period.to_string(),
                    s.fires_per_period.to_string(),
                    s.activity.clone(),
                    s.method.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    )
}

fn period(input: &PositionInput, method: Method, cap: Option<u64>, format: Format) -> CliResult<String> {
    let start = load_position(input)?;
    let cap = cap.unwrap_or_else(step_cap);
    let stored = || detect_period(&start, cap).map(|r| r.summary()).map_err(detect_error);
    let lowmem = || detect_period_lowmem(&start, cap).map(|r| r.summary()).map_err(detect_error);
    let single = |s: PeriodSummary| match format {
        Format::Json => json(&s),
        Format::Csv => summary_rows(&[&s]),
        Format::Text => summary_text(&s),
    };
    match method {
        Method::Stored => Ok(single(stored()?)),
        Method::Lowmem => Ok(single(lowmem()?)),
        Method::Both => {
            let (a, b) = (stored()?, lowmem()?);
            let agree = (a.transient, a.period, a.fires_per_period) == (b.transient, b.period, b.fires_per_period);
            let text = match format {
                Format::Json => json(&BothMethods { agree, stored_state: a, constant_memory: b }),
                Format::Csv => summary_rows(&[&a, &b]),
                Format::Text => format!("{}{}", summary_text(&a), summary_text(&b)),
            };
            if agree {
                Ok(text)
            } else {
                Err(CliError::new(ErrorKind::Verification, "detection methods disagree").with_output(text))
            }
        }
    }
}

#[derive(Serialize)]
struct Constructed {
    graph: String,
    chips: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<Pattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transient: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<u64>,
}

fn construct_error(e: ConstructError) -> CliError {
    match e {
        ConstructError::PartsUnsorted(_) | ConstructError::Graph(_) | ConstructError::Engine(_) => CliError::input(e),
        _ => CliError::new(ErrorKind::Construction, e),
    }
}

fn construct(c: &Construct, format: Format) -> CliResult<String> {
    let (position, target, pattern, check) = match c {
        Construct::Bipartite { a, b, period, check } => {
            let p = construct_bipartite_period(*a, *b, *period).map_err(construct_error)?;
            (p, *period, None, *check)
        }
        Construct::Cpartite { parts, j, k, check } => {
            let built = construct_cpartite_period(parts, *j, *k).map_err(construct_error)?;
            (built.position, built.target, Some(built.schedule.pattern()), *check)
        }
    };
    let mut out = Constructed {
        graph: spec_of(&position),
        chips: position.chips().to_vec(),
        target: check.then_some(target),
        pattern,
        transient: None,
        period: None,
    };
    if check {
        let r = detect_period(&position, step_cap()).map_err(detect_error)?;
        out.transient = Some(r.transient);
        out.period = Some(r.period);
    }
    let text = match format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut header = vec!["graph", "chips"];
            let mut row = vec![csv_field(&out.graph), join(&out.chips, ";")];
            if let Some(p) = out.period {
                header.push("period");
                row.push(p.to_string());
            }
            csv(&header, &[row])
        }
        Format::Text => {
            let mut s = format!("graph {}\nchips {}\n", out.graph, join(&out.chips, ","));
            if let Some(p) = out.period {
                let _ = writeln!(s, "measured period {p} (target {target})");
            }
            s
        }
    };
    if out.period.is_some_and(|p| p != target as u64) {
        return Err(CliError::new(ErrorKind::Verification, format!("measured period differs from target {target}"))
            .with_output(text));
    }
    Ok(text)
}

fn verify_error(e: VerifyError) -> CliError {
    match e {
        VerifyError::Detect(e) => detect_error(e),
        VerifyError::Engine(e) => engine_error(e),
        VerifyError::Bipartite(chipfire::bipartite::BipartiteError::Detect(e)) => detect_error(e),
        VerifyError::BudgetExceeded { .. }
        | VerifyError::BoundLength { .. }
        | VerifyError::InvalidParameter(_)
        | VerifyError::Graph(_) => CliError::input(e),
        _ => CliError::new(ErrorKind::Verification, e),
    }
}

fn enumeration_mode(mode: Mode, samples: u64, seed: u64, unconfined: bool) -> EnumerationMode {
    match mode {
        Mode::Exhaustive => EnumerationMode::Exhaustive,
        Mode::Random => EnumerationMode::Random { samples, seed, unconfined },
    }
}

fn enumerate(args: &EnumerateArgs, seed: u64, format: Format) -> CliResult<String> {
    let spec = parse_spec(&args.graph)?;
    let graph = Arc::new(build_graph(&spec).map_err(CliError::input)?);
    let expected = graph.bipartite_sides().map(|(a, b)| bipartite_period_set(a, b));
    let opts = EnumerateOptions {
        mode: enumeration_mode(args.mode, args.samples, seed, args.unconfined),
        bound: args.bound.clone(),
        budget: args.budget,
        cap: args.cap.unwrap_or_else(step_cap),
        expected,
    };
    let report = enumerate_periods(&graph, &opts).map_err(verify_error)?;
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => format!("{report}\n"),
    };
    if !report.cap_failures.is_empty() {
        return Err(CliError::new(ErrorKind::Cap, format!("{} starts exceeded the step cap", report.cap_failures.len()))
            .with_output(text));
    }
    if !report.passed() {
        return Err(CliError::new(ErrorKind::Verification, "period set does not match").with_output(text));
    }
    Ok(text)
}

#[derive(Serialize)]
struct LemmaOutput {
    graph: String,
    mode: EnumerationMode,
    horizon: usize,
    suite: chipfire::SuiteReport,
}

fn verify(v: &Verify, seed: u64, format: Format) -> CliResult<String> {
    match v {
        Verify::BipartiteTheorem { max_a, max_b, budget } => {
            let mut reports = Vec::new();
            for a in 1..=*max_a {
                for b in a..=*max_b {
                    reports.push(verify_bipartite_theorem(a, b, *budget).map_err(verify_error)?);
                }
            }
            let text = match format {
                Format::Json => json(&reports),
                Format::Csv => {
                    let mut s = format!("{CSV_HEADER}\n");
                    for r in &reports {
                        s.push_str(&r.csv_rows());
                    }
                    s
                }
                Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
            };
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::new(ErrorKind::Verification, format!("{failed} graphs did not match")).with_output(text));
            }
            Ok(text)
        }
        Verify::Class { class, samples, cap } => {
            let opts = ClassOptions {
                samples: *samples,
                seed,
                cap: cap.unwrap_or_else(step_cap),
                ..ClassOptions::default()
            };
            let report = verify_class_properties(*class, &opts).map_err(verify_error)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv => report.suite.to_csv(),
                Format::Text => format!("{report}"),
            };
            if !report.passed() {
                let n = report.suite.total_violations();
                return Err(CliError::new(ErrorKind::Verification, format!("{n} violations")).with_output(text));
            }
            Ok(text)
        }
        Verify::Lemmas { a, b, mode, samples, horizon, cap } => {
            let mode = enumeration_mode(*mode, *samples, seed, false);
            let suite = verify_bipartite_lemmas(*a, *b, &mode, *horizon, cap.unwrap_or_else(step_cap))
                .map_err(verify_error)?;
            let out = LemmaOutput { graph: format!("complete_bipartite:{a},{b}"), mode, horizon: *horizon, suite };
            let text = match format {
                Format::Json => json(&out),
                Format::Csv => out.suite.to_csv(),
                Format::Text => {
                    let mut s = format!("graph {} ({}), horizon {}\n", out.graph, out.mode, out.horizon);
                    if let EnumerationMode::Random { seed, samples, .. } = out.mode {
                        let _ = writeln!(s, "seed {seed}, samples {samples}");
                    }
                    s.push_str(&out.suite.to_string());
                    s
                }
            };
            if !out.suite.passed() {
                let n = out.suite.total_violations();
                return Err(CliError::new(ErrorKind::Verification, format!("{n} violations")).with_output(text));
            }
            Ok(text)
        }
    }
}
