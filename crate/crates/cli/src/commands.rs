use std::fmt::Write as _;
use std::path::PathBuf;

use altbase::digitset::{compare_transforms, delta_set};
use altbase::measure::{compose_map, default_truncation, entropy, gora_density, InvariantMeasure};
use altbase::oracle::birkhoff_frequency;
use altbase::{AlternateBase, StatePoint};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::expr::{parse_expr, parse_list};
use crate::output::{csv, real, sample_points, write_file, RunOutput};

const SNAP: f64 = 1e-12;
const SAMPLES_PER_UNIT: usize = 2048;

/// Text for the terminal and the JSON envelope of one run.
pub struct Report {
    pub text: String,
    pub json: RunOutput,
}

#[derive(Args, Debug)]
pub struct BaseArg {
    /// Comma-separated base expressions, e.g. "(1+sqrt(13))/2,(5+sqrt(13))/6".
    #[arg(long, allow_hyphen_values = true)]
    base: String,
}

impl BaseArg {
    fn parse(&self) -> Result<AlternateBase, CliError> {
        let values: Vec<f64> = parse_list(&self.base)?.into_iter().map(|e| e.value).collect();
        Ok(AlternateBase::new(values)?)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Greedy,
    Lazy,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphMode {
    Greedy,
    Lazy,
    Composed,
    DeltaGreedy,
    DeltaLazy,
}

fn point(src: &str) -> Result<f64, CliError> {
    Ok(parse_expr(src)?)
}

fn check_slot(base: &AlternateBase, slot: usize) -> Result<(), CliError> {
    if slot >= base.len() {
        return Err(altbase::Error::Domain(format!("slot {slot} out of range for p = {}", base.len())).into());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[command(flatten)]
    base: BaseArg,
    /// Point to expand.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, value_enum, default_value = "greedy")]
    mode: Mode,
    /// Number of digits.
    #[arg(long, default_value_t = 20)]
    digits: usize,
}

#[derive(Serialize)]
struct ExpandPayload {
    mode: Mode,
    x: f64,
    digits: Vec<u32>,
    word: String,
    partial_value: f64,
    residual_bound: f64,
}

pub fn expand(a: &ExpandArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let x = point(&a.x)?;
    let word = match a.mode {
        Mode::Greedy => base.greedy_expand(x, a.digits)?,
        Mode::Lazy => base.lazy_expand(x, a.digits)?,
    };
    let partial_value = base.evaluate(&word, false)?;
    let residual_bound = base.xmax(a.digits) / base.partial_product(0, a.digits);
    let text = format!(
        "{word}\npartial value = {partial_value}\nresidual bound = {residual_bound}\n"
    );
    let payload = ExpandPayload {
        mode: a.mode,
        x,
        word: word.to_string(),
        digits: word.digits,
        partial_value,
        residual_bound,
    };
    Ok(Report {
        text,
        json: RunOutput::new("expand", base.betas(), payload)?,
    })
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long, default_value_t = 0)]
    slot: usize,
    /// Series truncation depth; defaults to a depth with tail below 1e-15.
    #[arg(long)]
    truncation: Option<usize>,
    /// Samples per unit length for the CSV output.
    #[arg(long, default_value_t = SAMPLES_PER_UNIT)]
    samples: usize,
    /// Write sampled "x,density" rows to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct DensityPayload {
    slot: usize,
    k: usize,
    c: Vec<f64>,
    d: Vec<f64>,
    normalization: f64,
    truncation: usize,
    residual: f64,
    csv: Option<String>,
}

pub fn density(a: &DensityArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    check_slot(&base, a.slot)?;
    let map = compose_map(&base, a.slot);
    let depth = a.truncation.unwrap_or_else(|| default_truncation(map.slope()));
    let spec = gora_density(&map, depth)?;
    let k = spec.not_onto_count();
    let mut text = if k == 0 {
        format!("K=0, density=1, C={}\n", spec.normalization)
    } else {
        format!("K={k}, C={}\n", spec.normalization)
    };
    let _ = writeln!(text, "c = {:?}", spec.c);
    let _ = writeln!(text, "d = {:?}", spec.d);
    if let Some(path) = &a.csv {
        let jumps: Vec<f64> = spec.orbit.iter().flatten().copied().collect();
        let xs = sample_points(0.0, 1.0, a.samples.max(1), &jumps, SNAP);
        let body = csv("x,density", xs.iter().map(|&x| vec![real(x), real(spec.eval(x))]));
        write_file(path, &body)?;
        let _ = writeln!(text, "wrote {} rows to {}", xs.len(), path.display());
    }
    let payload = DensityPayload {
        slot: a.slot,
        k,
        c: spec.c.clone(),
        d: spec.d.clone(),
        normalization: spec.normalization,
        truncation: spec.truncation,
        residual: spec.residual,
        csv: a.csv.as_ref().map(|p| p.display().to_string()),
    };
    Ok(Report {
        text,
        json: RunOutput::new("density", base.betas(), payload)?,
    })
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long, default_value_t = 0)]
    slot: usize,
    /// Interval "a,b" of [0, 1]; endpoints are expressions.
    #[arg(long, allow_hyphen_values = true)]
    interval: String,
}

#[derive(Serialize)]
struct MeasurePayload {
    slot: usize,
    a: f64,
    b: f64,
    measure: f64,
}

pub fn measure(a: &MeasureArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    check_slot(&base, a.slot)?;
    let ends = parse_list(&a.interval)?;
    if ends.len() != 2 {
        return Err(CliError::Usage(format!(
            "--interval needs two endpoints, got {}",
            ends.len()
        )));
    }
    let (lo, hi) = (ends[0].value, ends[1].value);
    let m = InvariantMeasure::new(&base)?;
    let value = m.measure(a.slot, lo, hi)?;
    Ok(Report {
        text: format!("mu_{}([{lo}, {hi})) = {value}\n", a.slot),
        json: RunOutput::new(
            "measure",
            base.betas(),
            MeasurePayload {
                slot: a.slot,
                a: lo,
                b: hi,
                measure: value,
            },
        )?,
    })
}

#[derive(Args, Debug)]
pub struct FreqArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long)]
    digit: u32,
    /// Also estimate the frequency along an orbit of this many digits.
    #[arg(long)]
    empirical: Option<u64>,
    /// Orbit start in [0, 1); drawn from the seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
}

#[derive(Serialize)]
struct FreqPayload {
    digit: u32,
    frequency: f64,
    empirical: Option<f64>,
    iterations: Option<u64>,
    seed: Option<u64>,
}

pub fn freq(a: &FreqArgs, seed: u64) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let m = InvariantMeasure::new(&base)?;
    let frequency = m.frequency(a.digit);
    let mut text = format!("frequency of digit {} = {frequency}\n", a.digit);
    let x0 = a.x0.as_deref().map(point).transpose()?;
    let empirical = match a.empirical {
        Some(n) => {
            let f = birkhoff_frequency(&base, x0, a.digit, n, seed)?;
            let _ = writeln!(text, "empirical over {n} digits (seed {seed}) = {f}");
            Some(f)
        }
        None => None,
    };
    let payload = FreqPayload {
        digit: a.digit,
        frequency,
        empirical,
        iterations: a.empirical,
        seed: a.empirical.map(|_| seed),
    };
    Ok(Report {
        text,
        json: RunOutput::new("freq", base.betas(), payload)?,
    })
}

#[derive(Args, Debug)]
pub struct BaseOnlyArgs {
    #[command(flatten)]
    base: BaseArg,
}

pub fn entropy_cmd(a: &BaseOnlyArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let h = entropy(&base);
    Ok(Report {
        text: format!("entropy = {h}\n"),
        json: RunOutput::new("entropy", base.betas(), serde_json::json!({ "entropy": h }))?,
    })
}

#[derive(Serialize)]
struct IntervalRow {
    start: f64,
    end: f64,
    witness: f64,
    delta_image: f64,
    composed_image: f64,
}

#[derive(Serialize)]
struct ComparePayload {
    xmax: f64,
    coincide: bool,
    intervals: Vec<IntervalRow>,
    lazy_intervals: Vec<[f64; 2]>,
}

pub fn compare(a: &BaseOnlyArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let report = compare_transforms(&base)?;
    let mut text = String::new();
    if report.is_empty() {
        let _ = writeln!(text, "the maps coincide on [0, {})", report.xmax);
    } else {
        let _ = writeln!(text, "the maps differ on {} interval(s) of [0, {}):", report.intervals.len(), report.xmax);
        for i in &report.intervals {
            let _ = writeln!(
                text,
                "[{}, {})  witness {}: delta image {}, composed image {}",
                i.start, i.end, i.witness, i.delta_image, i.composed_image
            );
        }
        let _ = writeln!(text, "lazy maps differ on:");
        for (s, e) in &report.lazy_intervals {
            let _ = writeln!(text, "({s}, {e}]");
        }
    }
    let payload = ComparePayload {
        xmax: report.xmax,
        coincide: report.is_empty(),
        intervals: report
            .intervals
            .iter()
            .map(|i| IntervalRow {
                start: i.start,
                end: i.end,
                witness: i.witness,
                delta_image: i.delta_image,
                composed_image: i.composed_image,
            })
            .collect(),
        lazy_intervals: report.lazy_intervals.iter().map(|&(s, e)| [s, e]).collect(),
    };
    Ok(Report {
        text,
        json: RunOutput::new("compare", base.betas(), payload)?,
    })
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long, value_enum, default_value = "greedy")]
    mode: Mode,
    /// Write "step,slot,x,digit" rows to this file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct OrbitRow {
    step: usize,
    slot: usize,
    x: f64,
    digit: u32,
}

pub fn orbit(a: &OrbitArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let mut state = StatePoint::new(0, point(&a.x)?);
    let mut rows = Vec::with_capacity(a.steps);
    for step in 0..a.steps {
        let (next, digit) = match a.mode {
            Mode::Greedy => base.greedy_step(state)?,
            Mode::Lazy => base.lazy_step(state)?,
        };
        rows.push(OrbitRow {
            step,
            slot: state.slot,
            x: state.value,
            digit,
        });
        state = next;
    }
    let body = csv(
        "step,slot,x,digit",
        rows.iter()
            .map(|r| vec![r.step.to_string(), r.slot.to_string(), real(r.x), r.digit.to_string()]),
    );
    let text = match &a.csv {
        Some(path) => {
            write_file(path, &body)?;
            format!("wrote {} rows to {}\n", rows.len(), path.display())
        }
        None => body,
    };
    Ok(Report {
        text,
        json: RunOutput::new("orbit", base.betas(), serde_json::json!({ "mode": a.mode, "rows": rows }))?,
    })
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long, value_enum, default_value = "greedy")]
    mode: GraphMode,
    /// Restrict to one slot; every slot by default.
    #[arg(long)]
    slot: Option<usize>,
    #[arg(long, default_value_t = SAMPLES_PER_UNIT)]
    samples: usize,
    /// Write "x,y,branch_index,slot" rows to this file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct GraphRow {
    x: f64,
    y: f64,
    branch_index: usize,
    slot: usize,
}

fn graph_rows(base: &AlternateBase, mode: GraphMode, slot: usize, per_unit: usize) -> Result<Vec<GraphRow>, CliError> {
    let mut rows = Vec::new();
    match mode {
        GraphMode::Greedy | GraphMode::Lazy => {
            let beta = base.beta(slot);
            let top = base.xmax(slot);
            let mut cuts: Vec<f64> = (1..=base.alphabet(slot)).map(|k| k as f64 / beta).collect();
            cuts.push(1.0);
            if let GraphMode::Lazy = mode {
                let next = base.xmax(slot + 1);
                cuts = (0..base.alphabet(slot)).map(|k| (k as f64 + next) / beta).collect();
                cuts.push(top - 1.0);
            }
            for x in sample_points(0.0, top, per_unit, &cuts, SNAP) {
                let s = StatePoint::new(slot, x);
                let step = match mode {
                    GraphMode::Greedy => base.greedy_step(s),
                    _ if x > 0.0 => base.lazy_step(s),
                    _ => continue,
                };
                let (next, digit) = step?;
                rows.push(GraphRow {
                    x,
                    y: next.value,
                    branch_index: digit as usize,
                    slot,
                });
            }
            if let GraphMode::Lazy = mode {
                let (next, digit) = base.lazy_step(StatePoint::new(slot, top))?;
                rows.push(GraphRow {
                    x: top,
                    y: next.value,
                    branch_index: digit as usize,
                    slot,
                });
            }
        }
        GraphMode::Composed => {
            let map = compose_map(base, slot);
            for x in sample_points(0.0, 1.0, per_unit, map.breakpoints(), SNAP) {
                rows.push(GraphRow {
                    x,
                    y: map.eval(x),
                    branch_index: map.branch_index(x),
                    slot,
                });
            }
        }
        GraphMode::DeltaGreedy | GraphMode::DeltaLazy => {
            let ds = delta_set(base)?;
            let top = ds.xmax();
            let beta = ds.beta();
            let greedy = matches!(mode, GraphMode::DeltaGreedy);
            let cuts: Vec<f64> = if greedy {
                ds.digits().iter().map(|d| d / beta).collect()
            } else {
                ds.digits().iter().map(|d| (d + top) / beta).collect()
            };
            let index = |d: f64| ds.digits().iter().position(|&v| v == d).unwrap_or(0);
            let mut xs = sample_points(0.0, top, per_unit, &cuts, SNAP);
            if !greedy {
                xs.retain(|&x| x > 0.0);
                xs.push(top);
            }
            for x in xs {
                let (y, d) = if greedy { ds.greedy_step(x)? } else { ds.lazy_step(x)? };
                rows.push(GraphRow {
                    x,
                    y,
                    branch_index: index(d),
                    slot: 0,
                });
            }
        }
    }
    Ok(rows)
}

pub fn graph(a: &GraphArgs) -> Result<Report, CliError> {
    let base = a.base.parse()?;
    let slots: Vec<usize> = match a.slot {
        Some(s) => {
            check_slot(&base, s)?;
            vec![s]
        }
        None if matches!(a.mode, GraphMode::DeltaGreedy | GraphMode::DeltaLazy) => vec![0],
        None => (0..base.len()).collect(),
    };
    let mut rows = Vec::new();
    for slot in slots {
        rows.extend(graph_rows(&base, a.mode, slot, a.samples.max(1))?);
    }
    let body = csv(
        "x,y,branch_index,slot",
        rows.iter().map(|r| vec![real(r.x), real(r.y), r.branch_index.to_string(), r.slot.to_string()]),
    );
    let text = match &a.csv {
        Some(path) => {
            write_file(path, &body)?;
            format!("wrote {} rows to {}\n", rows.len(), path.display())
        }
        None => body,
    };
    Ok(Report {
        text,
        json: RunOutput::new("graph", base.betas(), serde_json::json!({ "mode": a.mode, "rows": rows }))?,
    })
}
