//! Command-line front end: `eval`, `region`, `bounds` and `compare`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 evaluator error, 4 output not
//! writable.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{
    mimo_bc_sum_bound, mimo_mac_sum_bound, rc_outer_region, strong_ic_region, tc_outer_region, OuterBound,
};
use crate::error::Error;
use crate::frontier::{
    dominates, equal_rate_gap, hull, max_gap, trace, Frontier, FrontierPoint, Scheme, TraceOptions,
};
use crate::model::{ChannelGains, PowerBudget, RatePair, RcAllocation, TcAllocation};
use crate::rc::{rc_breakdown, rc_limit_rate_pair};
use crate::tc::{rdpc_phase_rates, tc_limit_rate_pair, tc_phase_rates, DpcOrder, TcLimitAllocation};

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;

pub const CSV_HEADER: &str = "r1_bits,r2_bits,scheme,weight,seed";

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Eval(Error),
    Output(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Eval(_) => EXIT_EVAL,
            CliError::Output(_) => EXIT_OUTPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Eval(e) => write!(f, "evaluation failed: {e}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// A gain that may be written as a number or as `"+inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gain {
    Value(f64),
    Text(InfText),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InfText {
    #[serde(rename = "+inf", alias = "inf", alias = "Infinity", alias = "+Infinity")]
    Inf,
}

impl Gain {
    fn value(self) -> f64 {
        match self {
            Gain::Value(v) => v,
            Gain::Text(InfText::Inf) => f64::INFINITY,
        }
    }

    fn from_f64(v: f64) -> Self {
        if v.is_infinite() {
            Gain::Text(InfText::Inf)
        } else {
            Gain::Value(v)
        }
    }
}

/// Everything a run needs. Every key is optional; the defaults are the
/// symmetric reference channel with cooperation gains 10 and unit powers 5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub c12: Gain,
    pub c13: f64,
    pub c14: f64,
    pub c23: f64,
    pub c24: f64,
    pub c34: Gain,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    /// Any of `TC`, `RC`, `RDPC`, `IC`; TC and RC switch to their limit
    /// modes when the matching cooperation gain is `+inf`.
    pub schemes: Vec<String>,
    pub weights: usize,
    pub log2_weight_min: f64,
    pub log2_weight_max: f64,
    pub restarts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Region CSV path; the JSON sidecar goes next to it.
    pub out: Option<PathBuf>,
    /// Allocation for `eval` (shape depends on the scheme).
    pub allocation: Option<Value>,
    /// Objective weight on `R2` used by `eval` to pick the RC phase-1 corner.
    pub weight: f64,
    /// Tolerance for `compare`, in bits.
    pub compare_tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let o = TraceOptions::default();
        let s2 = std::f64::consts::SQRT_2;
        Self {
            c12: Gain::Value(10.0),
            c13: 1.0,
            c14: s2,
            c23: s2,
            c24: 1.0,
            c34: Gain::Value(10.0),
            p1: 5.0,
            p2: 5.0,
            p3: 5.0,
            p4: 5.0,
            schemes: vec!["TC".into(), "RDPC".into(), "IC".into()],
            weights: o.weights,
            log2_weight_min: o.log2_weight_min,
            log2_weight_max: o.log2_weight_max,
            restarts: o.restarts,
            iterations: o.iterations,
            tolerance: o.tolerance,
            seed: o.seed,
            out: None,
            allocation: None,
            weight: 1.0,
            compare_tolerance: 1e-6,
        }
    }
}

impl RunConfig {
    pub fn gains(&self) -> CliResult<ChannelGains> {
        ChannelGains::new(
            self.c12.value(),
            self.c13,
            self.c14,
            self.c23,
            self.c24,
            self.c34.value(),
        )
        .map_err(invalid)
    }

    pub fn powers(&self) -> CliResult<PowerBudget> {
        PowerBudget::new(self.p1, self.p2, self.p3, self.p4).map_err(invalid)
    }

    pub fn schemes(&self) -> CliResult<Vec<Scheme>> {
        if self.schemes.is_empty() {
            return Err(CliError::Invalid("scheme list is empty".into()));
        }
        self.schemes
            .iter()
            .map(|s| s.parse::<Scheme>().map_err(invalid))
            .collect()
    }

    pub fn trace_options(&self) -> CliResult<TraceOptions> {
        if !(self.tolerance >= 0.0) || !(self.log2_weight_min <= self.log2_weight_max) {
            return Err(CliError::Invalid(
                "optimizer tolerance or weight range is malformed".into(),
            ));
        }
        Ok(TraceOptions {
            weights: self.weights,
            log2_weight_min: self.log2_weight_min,
            log2_weight_max: self.log2_weight_max,
            restarts: self.restarts,
            iterations: self.iterations,
            tolerance: self.tolerance,
            seed: self.seed,
            warm_starts: Vec::new(),
        })
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "coopic",
    version,
    about = "Rate regions of the cooperative half-duplex Gaussian interference channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
struct Common {
    /// JSON run configuration (defaults to the symmetric reference setup).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme(s): TC, RC, RDPC, IC. Repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of log-spaced weights between the two axes.
    #[arg(long)]
    weights: Option<usize>,
    /// Random starts per weight.
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one allocation and print every stream rate.
    Eval {
        #[command(flatten)]
        common: Common,
    },
    /// Trace frontiers and write CSV plus a JSON sidecar.
    Region {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the outer bounds and the strong-IC baseline.
    Bounds {
        #[command(flatten)]
        common: Common,
    },
    /// Trace two configurations and report which region contains the other.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Configuration B (defaults to configuration A).
        #[arg(long)]
        other: Option<PathBuf>,
        /// Scheme for configuration B (defaults to its first scheme).
        #[arg(long)]
        other_scheme: Option<String>,
    },
}

fn apply(common: &Common, mut cfg: RunConfig) -> RunConfig {
    if !common.scheme.is_empty() {
        cfg.schemes = common.scheme.clone();
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = common.weights {
        cfg.weights = w;
    }
    if let Some(r) = common.restarts {
        cfg.restarts = r;
    }
    cfg
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Eval { common } => {
            let cfg = apply(&common, RunConfig::load(common.config.as_deref())?);
            let rec = cmd_eval(&cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&rec).expect("json")).map_err(output_err)
        }
        Command::Region { common, out: path } => {
            let mut cfg = apply(&common, RunConfig::load(common.config.as_deref())?);
            if path.is_some() {
                cfg.out = path;
            }
            let written = cmd_region(&cfg)?;
            writeln!(out, "wrote {} and {}", written.0.display(), written.1.display()).map_err(output_err)
        }
        Command::Bounds { common } => {
            let cfg = apply(&common, RunConfig::load(common.config.as_deref())?);
            let rec = cmd_bounds(&cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&rec).expect("json")).map_err(output_err)
        }
        Command::Compare {
            common,
            other,
            other_scheme,
        } => {
            let a = apply(&common, RunConfig::load(common.config.as_deref())?);
            let mut b = match other {
                Some(p) => RunConfig::load(Some(&p))?,
                None => a.clone(),
            };
            // optimizer overrides apply to both sides, the scheme only to A
            b = apply(
                &Common {
                    scheme: Vec::new(),
                    ..common.clone()
                },
                b,
            );
            if let Some(s) = other_scheme {
                b.schemes = vec![s];
            }
            let report = cmd_compare(&a, &b)?;
            write!(out, "{}", report.render()).map_err(output_err)
        }
    }
}

fn output_err(e: std::io::Error) -> CliError {
    CliError::Output(e.to_string())
}

fn parse_allocation<T: for<'de> Deserialize<'de>>(v: &Option<Value>, default: T) -> CliResult<T> {
    match v {
        None => Ok(default),
        Some(v) => serde_json::from_value(v.clone()).map_err(invalid),
    }
}

fn rate_json(r: RatePair) -> Value {
    json!({ "r1": r.r1, "r2": r.r2 })
}

/// Evaluates the configured allocation under the first scheme and returns
/// the machine-readable record that `eval` prints.
pub fn cmd_eval(cfg: &RunConfig) -> CliResult<Value> {
    let g = cfg.gains()?;
    let p = cfg.powers()?;
    let scheme = cfg.schemes()?[0].resolve(&g);
    let eval = CliError::Eval;
    let body = match scheme {
        Scheme::Tc | Scheme::Rdpc => {
            let a: TcAllocation = parse_allocation(&cfg.allocation, TcAllocation::uniform())?;
            let s = if scheme == Scheme::Tc {
                tc_phase_rates(&g, &p, &a)
            } else {
                rdpc_phase_rates(&g, &p, &a)
            }
            .map_err(eval)?;
            json!({ "rate": rate_json(s.rate_pair()), "streams": s, "allocation": a })
        }
        Scheme::Rc => {
            let a: RcAllocation = parse_allocation(&cfg.allocation, RcAllocation::uniform())?;
            let b = rc_breakdown(&g, &p, &a, cfg.weight).map_err(eval)?;
            json!({
                "rate": rate_json(b.rates.rate_pair()),
                "streams": b.rates,
                "case": b.case,
                "weight": cfg.weight,
                "allocation": a,
            })
        }
        Scheme::TcLimit => {
            let default = TcLimitAllocation {
                mu: crate::model::Simplex3::uniform(),
                eta: crate::model::Simplex3::uniform(),
                order: DpcOrder::for_channel(&g),
            };
            let a: TcLimitAllocation = parse_allocation(&cfg.allocation, default)?;
            let r = tc_limit_rate_pair(&g, &p, &a).map_err(eval)?;
            json!({ "rate": rate_json(r), "allocation": a })
        }
        Scheme::RcLimit => {
            let r = rc_limit_rate_pair(&g, &p, cfg.weight).map_err(eval)?;
            json!({ "rate": rate_json(r), "weight": cfg.weight })
        }
        Scheme::Ic => {
            let b = strong_ic_region(&g, &p).map_err(eval)?;
            json!({ "region": b })
        }
        Scheme::Bound => return Err(CliError::Invalid("`bound` is not an evaluable scheme".into())),
    };
    let mut rec = json!({ "scheme": scheme.tag() });
    if let (Value::Object(m), Value::Object(b)) = (&mut rec, body) {
        m.extend(b);
    }
    Ok(rec)
}

/// Outer bound that covers every traced scheme: the TC bound, the RC bound,
/// or the hull of both when both families are present.
fn bound_block(g: &ChannelGains, p: &PowerBudget, schemes: &[Scheme]) -> (Vec<OuterBound>, Vec<RatePair>) {
    let tc = schemes
        .iter()
        .any(|s| matches!(s, Scheme::Tc | Scheme::Rdpc | Scheme::TcLimit));
    let rc = schemes.iter().any(|s| matches!(s, Scheme::Rc | Scheme::RcLimit));
    let mut used = Vec::new();
    if tc || !rc {
        used.push(tc_outer_region(g, p));
    }
    if rc {
        used.push(rc_outer_region(g, p));
    }
    let pts: Vec<RatePair> = used.iter().flat_map(OuterBound::polygon).collect();
    (used, hull(&pts))
}

/// Significant-digit formatting without exponent notation for ordinary rates.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            String::new()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let mag = x.abs().log10().floor() as i64;
    if !(-5..15).contains(&mag) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn weight_json(w: f64) -> Value {
    if w.is_nan() {
        Value::Null
    } else if w.is_infinite() {
        json!("inf")
    } else {
        json!(w)
    }
}

fn point_json(p: &FrontierPoint) -> Value {
    json!({
        "r1": p.rate.r1,
        "r2": p.rate.r2,
        "weight": weight_json(p.weight),
        "allocation": p.allocation,
    })
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Traces every configured scheme, writes the CSV and its JSON sidecar and
/// returns both paths.
pub fn cmd_region(cfg: &RunConfig) -> CliResult<(PathBuf, PathBuf)> {
    let g = cfg.gains()?;
    let p = cfg.powers()?;
    let schemes: Vec<Scheme> = cfg.schemes()?.into_iter().map(|s| s.resolve(&g)).collect();
    let opts = cfg.trace_options()?;
    let frontiers: Vec<(Scheme, Frontier)> = schemes
        .iter()
        .map(|&s| trace(s, &g, &p, &opts).map(|f| (s, f)))
        .collect::<std::result::Result<_, _>>()
        .map_err(CliError::Eval)?;
    let (bounds, polygon) = bound_block(&g, &p, &schemes);

    let csv_path = cfg.out.clone().unwrap_or_else(|| PathBuf::from("region.csv"));
    let json_path = sidecar_path(&csv_path);
    let seed = cfg.seed.to_string();
    let mut w = csv::Writer::from_path(&csv_path)
        .map_err(|e| CliError::Output(format!("{}: {e}", csv_path.display())))?;
    let out_err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(CSV_HEADER.split(',')).map_err(out_err)?;
    for (s, f) in &frontiers {
        for pt in &f.points {
            w.write_record([
                fmt_sig(pt.rate.r1, 12),
                fmt_sig(pt.rate.r2, 12),
                s.tag().to_string(),
                fmt_sig(pt.weight, 12),
                seed.clone(),
            ])
            .map_err(out_err)?;
        }
    }
    for r in &polygon {
        w.write_record([
            fmt_sig(r.r1, 12),
            fmt_sig(r.r2, 12),
            Scheme::Bound.tag().to_string(),
            String::new(),
            seed.clone(),
        ])
        .map_err(out_err)?;
    }
    w.flush().map_err(output_err)?;

    let sidecar = json!({
        "config": cfg,
        "frontiers": frontiers.iter().map(|(s, f)| json!({
            "scheme": s.tag(),
            "meta": f.meta.as_ref().map(|m| json!({
                "weights": m.weights.iter().map(|&w| weight_json(w)).collect::<Vec<_>>(),
                "restarts": m.restarts,
                "iterations": m.iterations,
                "tolerance": m.tolerance,
                "seed": m.seed,
            })),
            "points": f.points.iter().map(point_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "bound": { "constraints": bounds, "vertices": polygon },
    });
    let text = serde_json::to_string_pretty(&sidecar).expect("json");
    fs::write(&json_path, text).map_err(|e| CliError::Output(format!("{}: {e}", json_path.display())))?;
    Ok((csv_path, json_path))
}

/// Rows of a region CSV grouped by scheme tag, in file order.
pub fn read_region_csv(path: &Path) -> CliResult<Vec<(String, Vec<RatePair>)>> {
    let mut r = csv::Reader::from_path(path).map_err(invalid)?;
    let mut blocks: Vec<(String, Vec<RatePair>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(invalid)?;
        let num = |i: usize| rec.get(i).unwrap_or("").parse::<f64>().map_err(invalid);
        let rate = RatePair::new(num(0)?, num(1)?);
        let tag = rec.get(2).unwrap_or("").to_string();
        match blocks.last_mut() {
            Some((t, v)) if *t == tag => v.push(rate),
            _ => blocks.push((tag, vec![rate])),
        }
    }
    Ok(blocks)
}

/// Outer bounds and baselines for the configured channel.
pub fn cmd_bounds(cfg: &RunConfig) -> CliResult<Value> {
    let g = cfg.gains()?;
    let p = cfg.powers()?;
    let ic = match strong_ic_region(&g, &p) {
        Ok(b) => json!(b),
        Err(Error::NotStrongInterference) => json!(null),
        Err(e) => return Err(CliError::Eval(e)),
    };
    Ok(json!({
        "c12": Gain::from_f64(g.c12()),
        "c34": Gain::from_f64(g.c34()),
        "tc": tc_outer_region(&g, &p),
        "rc": rc_outer_region(&g, &p),
        "mimo_bc_sum": mimo_bc_sum_bound(&g, p.p1() + p.p2()),
        "mimo_mac_sum": mimo_mac_sum_bound(&g, &p),
        "strong_ic": ic,
    }))
}

/// Result of `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub scheme_a: Scheme,
    pub scheme_b: Scheme,
    pub a_contains_b: bool,
    pub b_contains_a: bool,
    /// Largest reach of A beyond B over all directions, in bits.
    pub gap_a_over_b: f64,
    pub gap_b_over_a: f64,
    /// Symmetric-rate point of A minus that of B.
    pub equal_rate_gap: f64,
    pub tolerance: f64,
}

impl Comparison {
    pub fn verdict(&self) -> &'static str {
        match (self.a_contains_b, self.b_contains_a) {
            (true, true) => "equal within tol",
            (true, false) => "A dominates B",
            (false, true) => "B dominates A",
            (false, false) => "neither region contains the other",
        }
    }

    pub fn render(&self) -> String {
        format!(
            "A: {}\nB: {}\nverdict: {}\ntolerance: {:e} bits\nmax gap A over B: {} bits\nmax gap B over A: {} bits\nequal-rate gap (A - B): {} bits\n",
            self.scheme_a,
            self.scheme_b,
            self.verdict(),
            self.tolerance,
            fmt_sig(self.gap_a_over_b, 12),
            fmt_sig(self.gap_b_over_a, 12),
            fmt_sig(self.equal_rate_gap, 12),
        )
    }
}

/// Traces the first scheme of each configuration and compares the regions.
pub fn cmd_compare(a: &RunConfig, b: &RunConfig) -> CliResult<Comparison> {
    let run = |cfg: &RunConfig| -> CliResult<(Scheme, Frontier)> {
        let g = cfg.gains()?;
        let p = cfg.powers()?;
        let s = cfg.schemes()?[0].resolve(&g);
        let f = trace(s, &g, &p, &cfg.trace_options()?).map_err(CliError::Eval)?;
        Ok((s, f))
    };
    let (sa, fa) = run(a)?;
    let (sb, fb) = run(b)?;
    let tol = a.compare_tolerance;
    Ok(Comparison {
        scheme_a: sa,
        scheme_b: sb,
        a_contains_b: dominates(&fa, &fb, tol),
        b_contains_a: dominates(&fb, &fa, tol),
        gap_a_over_b: max_gap(&fa, &fb),
        gap_b_over_a: max_gap(&fb, &fa),
        equal_rate_gap: equal_rate_gap(&fa, &fb),
        tolerance: tol,
    })
}
