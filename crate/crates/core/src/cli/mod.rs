//! Command-line front end. Every command produces a table (CSV), a JSON
//! document and a plot; `--format` picks which one is written.

mod output;
mod svg;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;
use crate::pnd::{
    moments, pnd_closed, pnd_elliptic, pnd_from_expansion, pnd_gcs_closed, pnd_gcs_intermediate,
    PhotonNumberDistribution, SpecRef,
};
use crate::scissors::{
    delta_alpha_curve, equal_superposition_alpha, level_probability, overlap_fidelity, reachability_table_with,
    ReachabilityQuery, TargetKind, WindowSearch, DEFAULT_ELLIPSE_ASPECT, DEFAULT_GRID_STEP, DEFAULT_THRESHOLD,
};
use crate::states::{
    circular_normalization, default_n_max, fock_expansion, unnormalized_expansion, CircularStateSpec, EllipticStateSpec,
};

pub use output::{format_sig12, write_atomic, Cell, Table};
pub use svg::{Plot, PlotKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Tolerance of every `verify` comparison.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// `lo:hi:step`, inclusive of `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl AlphaGrid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for AlphaGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let grid = AlphaGrid {
            lo: parse(lo)?,
            hi: parse(hi)?,
            step: parse(step)?,
        };
        if !(grid.lo >= 0.0 && grid.hi >= grid.lo && grid.step > 0.0 && grid.hi.is_finite()) {
            return Err(format!("grid needs 0 <= lo <= hi and step > 0, got {s:?}"));
        }
        Ok(grid)
    }
}

/// `lo:hi` of positive integers, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderRange {
    pub lo: u32,
    pub hi: u32,
}

impl OrderRange {
    pub fn orders(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for OrderRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let lo: u32 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
        let hi: u32 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("range needs 1 <= lo <= hi, got {s:?}"));
        }
        Ok(OrderRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PndSource {
    Closed,
    Intermediate,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepQuantity {
    /// Window width Δα against N.
    DeltaAlpha,
    /// Mean, variance and Fano factor against |α|.
    Fano,
    /// Largest P_n of circle and equal-area ellipse against N.
    EllipseMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "n")]
    N,
    #[value(name = "2n")]
    TwoN,
    #[value(name = "3n")]
    ThreeN,
}

impl From<Kind> for TargetKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::N => TargetKind::NPlusR,
            Kind::TwoN => TargetKind::TwoNPlusR,
            Kind::ThreeN => TargetKind::ThreeNPlusR,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "gcs-scissors",
    version,
    about = "Photon-number statistics and quantum-scissor windows of generalized coherent states"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Probability accepted as a Fock state.
    #[arg(long, global = true, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Photon-number distribution of a circular superposition.
    Pnd {
        #[arg(long = "N")]
        order: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value = "closed")]
        source: PndSource,
    },
    /// Amplitude windows producing Fock states.
    Window {
        #[arg(long = "N")]
        order: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Target level; all of r, N+r, .., S_max·N+r when absent.
        #[arg(long)]
        target: Option<usize>,
        #[arg(long = "S-max", default_value_t = 3)]
        s_max: u32,
        #[arg(long = "alpha-max")]
        alpha_max: Option<f64>,
        #[arg(long = "grid-step", default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
    /// Which superpositions produce |0> .. |n>.
    Table {
        #[arg(long = "n-fock-max", default_value_t = 16)]
        n_fock_max: usize,
        #[arg(long = "N-max", default_value_t = 15)]
        order_max: u32,
        #[arg(long = "r-max", default_value_t = 10)]
        r_max: u32,
        /// Aspect ratio a/b of the swept ellipse.
        #[arg(long, default_value_t = DEFAULT_ELLIPSE_ASPECT)]
        aspect: f64,
        #[arg(long = "no-ellipse")]
        no_ellipse: bool,
        #[arg(long = "grid-step", default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
    /// Amplitudes giving equal weight to |SN> and |(S+1)N>.
    EqualSuperposition {
        #[arg(long = "N")]
        order: u32,
        #[arg(long = "S-max", default_value_t = 3)]
        s_max: u32,
    },
    /// Overlap with (|SN> + |(S+1)N>)/√2 across |α|.
    FidelityScan {
        #[arg(long = "N")]
        order: u32,
        #[arg(long = "S", value_delimiter = ',', default_value = "0,1,2,3")]
        s: Vec<u32>,
        #[arg(long = "alpha-grid", default_value = "0:8:0.01")]
        alpha_grid: AlphaGrid,
    },
    /// Distribution of the elliptic superposition.
    Ellipse {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long = "N")]
        order: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Closed forms against the Fock-expansion oracle.
    Verify {
        #[arg(long = "N-max", default_value_t = 10)]
        order_max: u32,
        #[arg(long = "r-max", default_value_t = 3)]
        r_max: u32,
        #[arg(long = "alpha-grid", default_value = "0.5:6:0.5")]
        alpha_grid: AlphaGrid,
    },
    /// Parameter sweeps behind the window-width, Fano and ellipse plots.
    Sweep {
        #[arg(long, value_enum)]
        quantity: SweepQuantity,
        #[arg(long = "N-range", default_value = "1:40")]
        orders: OrderRange,
        /// Order for the Fano sweep.
        #[arg(long = "N", default_value_t = 6)]
        order: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, value_enum, default_value = "n")]
        kind: Kind,
        #[arg(long = "alpha-grid", default_value = "0.05:6:0.05")]
        alpha_grid: AlphaGrid,
        #[arg(long, default_value_t = 5.0)]
        a: f64,
        #[arg(long, default_value_t = 3.2)]
        b: f64,
    },
}

/// Everything a command produced, before choosing a format.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub table: Table,
    pub json: Value,
    pub plot: Plot,
    /// `false` when a `verify` check failed.
    pub passed: bool,
}

impl Artifact {
    fn new(table: Table, json: Value, plot: Plot) -> Self {
        Artifact {
            table,
            json,
            plot,
            passed: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut json = self.json.clone();
                output::round_json(&mut json);
                let mut s = serde_json::to_string_pretty(&json).expect("JSON value serializes");
                s.push('\n');
                s
            }
            Format::Svg => svg::render(&self.plot),
        }
    }
}

fn is_usage(err: &Error) -> bool {
    matches!(err, Error::InvalidSpec(_) | Error::InvalidParameter(_))
}

fn exit_code(err: &Error) -> i32 {
    if is_usage(err) {
        EXIT_USAGE
    } else {
        EXIT_NUMERIC
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit status.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(err) => {
            let _ = err.print();
            match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn run(config: &RunConfig) -> i32 {
    let artifact = match execute(config) {
        Ok(a) => a,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_code(&err);
        }
    };
    let text = artifact.render(config.format);
    let written = match &config.output {
        Some(path) => write_atomic(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: cannot write output: {err}");
        return EXIT_USAGE;
    }
    if artifact.passed {
        EXIT_OK
    } else {
        eprintln!("error: verification failed");
        EXIT_NUMERIC
    }
}

/// Runs the command without writing anything.
pub fn execute(config: &RunConfig) -> crate::Result<Artifact> {
    let search = WindowSearch::with_threshold(config.threshold);
    search.validate()?;
    match &config.command {
        Command::Pnd {
            order,
            alpha,
            r,
            n_max,
            source,
        } => cmd_pnd(CircularStateSpec::new(*alpha, *order, *r)?, *n_max, *source),
        Command::Window {
            order,
            r,
            target,
            s_max,
            alpha_max,
            grid_step,
        } => {
            let search = WindowSearch {
                alpha_max: *alpha_max,
                grid_step: *grid_step,
                ..search
            };
            let spec = CircularStateSpec::new(0.0, *order, *r)?;
            let targets: Vec<usize> = match target {
                Some(t) => vec![*t],
                None => (0..=*s_max as usize)
                    .map(|s| s * *order as usize + *r as usize)
                    .collect(),
            };
            cmd_window(&spec, &targets, &search)
        }
        Command::Table {
            n_fock_max,
            order_max,
            r_max,
            aspect,
            no_ellipse,
            grid_step,
        } => {
            if !(*aspect >= 1.0 && aspect.is_finite()) {
                return Err(Error::InvalidParameter(format!("aspect must be >= 1, got {aspect}")));
            }
            let query = ReachabilityQuery {
                n_fock_max: *n_fock_max,
                order_max: *order_max,
                r_max: *r_max,
                search: WindowSearch {
                    grid_step: *grid_step,
                    ..search
                },
                ellipse_aspect: (!*no_ellipse).then_some(*aspect),
            };
            cmd_table(&query)
        }
        Command::EqualSuperposition { order, s_max } => {
            CircularStateSpec::gcs(0.0, *order)?;
            cmd_equal_superposition(*order, *s_max)
        }
        Command::FidelityScan { order, s, alpha_grid } => {
            let spec = CircularStateSpec::gcs(0.0, *order)?;
            if s.is_empty() {
                return Err(Error::InvalidParameter("at least one S is needed".into()));
            }
            cmd_fidelity_scan(&spec, s, alpha_grid)
        }
        Command::Ellipse { a, b, order, r, n_max } => cmd_ellipse(EllipticStateSpec::new(*a, *b, *order, *r)?, *n_max),
        Command::Verify {
            order_max,
            r_max,
            alpha_grid,
        } => {
            if *order_max == 0 {
                return Err(Error::InvalidParameter("N-max must be at least 1".into()));
            }
            cmd_verify(*order_max, *r_max, alpha_grid)
        }
        Command::Sweep {
            quantity,
            orders,
            order,
            r,
            kind,
            alpha_grid,
            a,
            b,
        } => match quantity {
            SweepQuantity::DeltaAlpha => cmd_sweep_delta_alpha(orders, *r, (*kind).into(), config.threshold),
            SweepQuantity::Fano => cmd_sweep_fano(CircularStateSpec::new(0.0, *order, *r)?, alpha_grid),
            SweepQuantity::EllipseMax => cmd_sweep_ellipse_max(orders, EllipticStateSpec::new(*a, *b, 1, *r)?),
        },
    }
}

fn distribution_rows(dist: &PhotonNumberDistribution) -> (Table, Vec<(f64, f64)>) {
    let mut table = Table::new(&["n", "P_n"]);
    let mut points = Vec::with_capacity(dist.probs().len());
    for (n, &p) in dist.probs().iter().enumerate() {
        table.push(vec![n.into(), p.into()]);
        points.push((n as f64, p));
    }
    (table, points)
}

fn moments_json(dist: &PhotonNumberDistribution) -> Value {
    moments(dist).map_or(Value::Null, |m| serde_json::to_value(m).expect("moments serialize"))
}

fn cmd_pnd(spec: CircularStateSpec, n_max: Option<usize>, source: PndSource) -> crate::Result<Artifact> {
    let n_max = n_max.unwrap_or_else(|| default_n_max(&spec));
    let dist = match source {
        PndSource::Closed => pnd_closed(&spec, n_max)?,
        PndSource::Intermediate => pnd_gcs_intermediate(&spec, n_max)?,
        PndSource::Oracle => pnd_from_expansion(&fock_expansion(&spec, n_max)?).with_spec(SpecRef::Circular(spec)),
    };
    let (table, points) = distribution_rows(&dist);
    let json = json!({
        "state": spec,
        "source": dist.source(),
        "n_max": n_max,
        "moments": moments_json(&dist),
        "probabilities": dist.probs(),
    });
    let plot = Plot {
        title: format!(
            "N = {}, r = {}, |alpha| = {}",
            spec.order,
            spec.photons_added,
            format_sig12(spec.alpha_mag)
        ),
        x_label: "n".into(),
        y_label: "P_n".into(),
        kind: PlotKind::Bars,
        series: vec![("P_n".into(), points)],
    };
    Ok(Artifact::new(table, json, plot))
}

const WINDOW_COLUMNS: [&str; 6] = ["N", "r", "target_n", "alpha_lo", "alpha_hi", "delta_alpha"];

fn cmd_window(spec: &CircularStateSpec, targets: &[usize], search: &WindowSearch) -> crate::Result<Artifact> {
    search.validate()?;
    let windows = targets
        .par_iter()
        .map(|&t| search.find(spec, t))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(&WINDOW_COLUMNS);
    let mut entries = Vec::new();
    let mut series = Vec::new();
    for (&target, window) in targets.iter().zip(&windows) {
        let (lo, hi, width) = match window {
            Some(w) => (Some(w.alpha_lo), Some(w.alpha_hi), Some(w.width())),
            None => (None, None, None),
        };
        table.push(vec![
            spec.order.into(),
            spec.photons_added.into(),
            target.into(),
            lo.into(),
            hi.into(),
            width.into(),
        ]);
        entries.push(json!({
            "target_n": target,
            "alpha_lo": lo,
            "alpha_hi": hi,
            "delta_alpha": width,
        }));
        if let Some(w) = window {
            series.push((
                format!("|{target}>"),
                vec![(w.alpha_lo, target as f64), (w.alpha_hi, target as f64)],
            ));
        }
    }
    let json = json!({
        "N": spec.order,
        "r": spec.photons_added,
        "threshold": search.threshold,
        "windows": entries,
    });
    let plot = Plot {
        title: format!("Fock windows, N = {}, r = {}", spec.order, spec.photons_added),
        x_label: "|alpha|".into(),
        y_label: "n".into(),
        kind: PlotKind::Lines,
        series,
    };
    Ok(Artifact::new(table, json, plot))
}

fn cmd_table(query: &ReachabilityQuery) -> crate::Result<Artifact> {
    let records = reachability_table_with(query)?;
    let mut table = Table::new(&[
        "fock_n",
        "gcs_orders",
        "gpacs_combos",
        "elliptic_reachable",
        "elliptic_max_probability",
    ]);
    for rec in &records {
        let orders: Vec<String> = rec.gcs_orders.iter().map(u32::to_string).collect();
        let combos: Vec<String> = rec.gpacs_combos.iter().map(|(n, r)| format!("{n}:{r}")).collect();
        table.push(vec![
            rec.fock_n.into(),
            orders.join(" ").into(),
            combos.join(" ").into(),
            rec.elliptic_reachable.into(),
            if query.ellipse_aspect.is_some() {
                rec.elliptic_max_probability.into()
            } else {
                Cell::Empty
            },
        ]);
    }
    let json = json!({
        "threshold": query.search.threshold,
        "n_fock_max": query.n_fock_max,
        "N_max": query.order_max,
        "r_max": query.r_max,
        "ellipse_aspect": query.ellipse_aspect,
        "records": records,
    });
    let plot = Plot {
        title: "Reachable Fock states".into(),
        x_label: "n".into(),
        y_label: "count".into(),
        kind: PlotKind::Bars,
        series: vec![
            (
                "GCS orders".into(),
                records
                    .iter()
                    .map(|r| (r.fock_n as f64, r.gcs_orders.len() as f64))
                    .collect(),
            ),
            (
                "GPACS (N, r)".into(),
                records
                    .iter()
                    .map(|r| (r.fock_n as f64 + 0.3, r.gpacs_combos.len() as f64))
                    .collect(),
            ),
        ],
    };
    Ok(Artifact::new(table, json, plot))
}

fn cmd_equal_superposition(order: u32, s_max: u32) -> crate::Result<Artifact> {
    let mut table = Table::new(&["N", "S", "n_lo", "n_hi", "alpha", "P_lo", "P_hi"]);
    let mut entries = Vec::new();
    let mut points = Vec::new();
    for s in 0..=s_max {
        let alpha = equal_superposition_alpha(order, s);
        let (lo, hi) = (s as usize * order as usize, (s as usize + 1) * order as usize);
        let p_lo = level_probability(order, 0, alpha, lo);
        let p_hi = level_probability(order, 0, alpha, hi);
        table.push(vec![
            order.into(),
            s.into(),
            lo.into(),
            hi.into(),
            alpha.into(),
            p_lo.into(),
            p_hi.into(),
        ]);
        entries.push(json!({"S": s, "n_lo": lo, "n_hi": hi, "alpha": alpha, "P_lo": p_lo, "P_hi": p_hi}));
        points.push((f64::from(s), alpha));
    }
    let plot = Plot {
        title: format!("Equal two-level superpositions, N = {order}"),
        x_label: "S".into(),
        y_label: "|alpha|".into(),
        kind: PlotKind::Lines,
        series: vec![("|alpha|".into(), points)],
    };
    Ok(Artifact::new(table, json!({"N": order, "solutions": entries}), plot))
}

fn cmd_fidelity_scan(spec: &CircularStateSpec, s_values: &[u32], grid: &AlphaGrid) -> crate::Result<Artifact> {
    let alphas = grid.points();
    let curves = s_values
        .par_iter()
        .map(|&s| {
            alphas
                .iter()
                .map(|&a| overlap_fidelity(spec, a, s).map(|f| (a, f)))
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(&["alpha", "S", "fidelity"]);
    let mut maxima = Vec::new();
    let mut series = Vec::new();
    for (&s, curve) in s_values.iter().zip(&curves) {
        for &(a, f) in curve {
            table.push(vec![a.into(), s.into(), f.into()]);
        }
        let (arg, best) = curve
            .iter()
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |b, x| if x.1 > b.1 { x } else { b });
        maxima.push(json!({
            "S": s,
            "alpha_at_max": arg,
            "max_fidelity": best,
            "equal_superposition_alpha": equal_superposition_alpha(spec.order, s),
        }));
        series.push((format!("S = {s}"), curve.clone()));
    }
    let plot = Plot {
        title: format!("Overlap with equal superposition, N = {}", spec.order),
        x_label: "|alpha|".into(),
        y_label: "|F|^2".into(),
        kind: PlotKind::Lines,
        series,
    };
    Ok(Artifact::new(table, json!({"N": spec.order, "maxima": maxima}), plot))
}

fn cmd_ellipse(spec: EllipticStateSpec, n_max: Option<usize>) -> crate::Result<Artifact> {
    let circle = CircularStateSpec::new(spec.equal_area_amplitude(), spec.order, spec.photons_added)?;
    let n_max = n_max.unwrap_or_else(|| default_n_max(&spec).max(default_n_max(&circle)));
    let dist = pnd_elliptic(&spec, n_max)?;
    let circ = pnd_closed(&circle, n_max)?;
    let (table, points) = distribution_rows(&dist);
    let (mode_n, mode_p) = dist.mode();
    let (circ_n, circ_p) = circ.mode();
    let json = json!({
        "state": spec,
        "equal_area_alpha": spec.equal_area_amplitude(),
        "max": {"n": mode_n, "P_n": mode_p},
        "circle_max": {"n": circ_n, "P_n": circ_p},
        "moments": moments_json(&dist),
        "probabilities": dist.probs(),
        "circle_probabilities": circ.probs(),
    });
    let circ_points = circ
        .probs()
        .iter()
        .enumerate()
        .map(|(n, &p)| (n as f64 + 0.3, p))
        .collect();
    let plot = Plot {
        title: format!(
            "Ellipse a = {}, b = {}, N = {}",
            format_sig12(spec.semi_major),
            format_sig12(spec.semi_minor),
            spec.order
        ),
        x_label: "n".into(),
        y_label: "P_n".into(),
        kind: PlotKind::Bars,
        series: vec![("ellipse".into(), points), ("equal-area circle".into(), circ_points)],
    };
    Ok(Artifact::new(table, json, plot))
}

#[derive(Debug, Clone, Copy, Default)]
struct CheckMax {
    closed_vs_oracle: f64,
    intermediate_vs_closed: f64,
    norm_vs_oracle: f64,
    ellipse_vs_closed: f64,
    closure: f64,
}

impl CheckMax {
    fn merge(self, o: CheckMax) -> CheckMax {
        CheckMax {
            closed_vs_oracle: self.closed_vs_oracle.max(o.closed_vs_oracle),
            intermediate_vs_closed: self.intermediate_vs_closed.max(o.intermediate_vs_closed),
            norm_vs_oracle: self.norm_vs_oracle.max(o.norm_vs_oracle),
            ellipse_vs_closed: self.ellipse_vs_closed.max(o.ellipse_vs_closed),
            closure: self.closure.max(o.closure),
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn verify_case(spec: &CircularStateSpec) -> crate::Result<CheckMax> {
    let n_max = default_n_max(spec);
    let closed = pnd_closed(spec, n_max)?;
    let oracle = pnd_from_expansion(&fock_expansion(spec, n_max)?);
    let raw_norm = unnormalized_expansion(spec, n_max)?.norm_sqr().sqrt().recip();
    let analytic = circular_normalization(spec)?;
    let ellipse = EllipticStateSpec::new(spec.alpha_mag, spec.alpha_mag, spec.order, spec.photons_added)?;
    let mut out = CheckMax {
        closed_vs_oracle: max_abs_diff(closed.probs(), oracle.probs()),
        norm_vs_oracle: (analytic - raw_norm).abs() / analytic,
        ellipse_vs_closed: max_abs_diff(pnd_elliptic(&ellipse, n_max)?.probs(), closed.probs()),
        closure: (closed.total() - 1.0).abs(),
        ..CheckMax::default()
    };
    if spec.photons_added == 0 {
        let inter = pnd_gcs_intermediate(spec, n_max)?;
        out.intermediate_vs_closed = max_abs_diff(inter.probs(), pnd_gcs_closed(spec, n_max)?.probs());
    }
    Ok(out)
}

fn cmd_verify(order_max: u32, r_max: u32, grid: &AlphaGrid) -> crate::Result<Artifact> {
    let alphas: Vec<f64> = grid.points().into_iter().filter(|&a| a > 0.0).collect();
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("alpha grid has no positive amplitude".into()));
    }
    let mut cases = Vec::new();
    for order in 1..=order_max {
        for r in 0..=r_max {
            for &a in &alphas {
                cases.push(CircularStateSpec::new(a, order, r)?);
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(verify_case)
        .collect::<crate::Result<Vec<_>>>()?
        .into_iter()
        .fold(CheckMax::default(), CheckMax::merge);

    let checks = [
        ("closed_vs_oracle", worst.closed_vs_oracle),
        ("intermediate_vs_closed", worst.intermediate_vs_closed),
        ("normalization_vs_oracle", worst.norm_vs_oracle),
        ("degenerate_ellipse_vs_closed", worst.ellipse_vs_closed),
        ("closure", worst.closure),
    ];
    let mut table = Table::new(&["check", "max_abs_error", "tolerance", "passed"]);
    let mut entries = Vec::new();
    let mut passed = true;
    for (name, err) in checks {
        let ok = err < VERIFY_TOLERANCE;
        passed &= ok;
        table.push(vec![name.into(), err.into(), VERIFY_TOLERANCE.into(), ok.into()]);
        entries.push(json!({"check": name, "max_abs_error": err, "tolerance": VERIFY_TOLERANCE, "passed": ok}));
    }
    let json = json!({
        "cases": cases.len(),
        "N_max": order_max,
        "r_max": r_max,
        "alphas": alphas,
        "passed": passed,
        "checks": entries,
    });
    let plot = Plot {
        title: "Verification (log10 max error)".into(),
        x_label: "check".into(),
        y_label: "log10 error".into(),
        kind: PlotKind::Bars,
        series: vec![(
            "error".into(),
            checks
                .iter()
                .enumerate()
                .map(|(i, c)| (i as f64, c.1.max(1e-300).log10()))
                .collect(),
        )],
    };
    let mut artifact = Artifact::new(table, json, plot);
    artifact.passed = passed;
    Ok(artifact)
}

fn cmd_sweep_delta_alpha(orders: &OrderRange, r: u32, kind: TargetKind, threshold: f64) -> crate::Result<Artifact> {
    let search = WindowSearch::with_threshold(threshold);
    let orders = orders.orders();
    let curve = delta_alpha_curve(&orders, r, kind, threshold)?;
    let windows = orders
        .par_iter()
        .map(|&n| search.find(&CircularStateSpec::new(0.0, n, r)?, kind.target(n, r)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(&WINDOW_COLUMNS);
    let mut points = Vec::new();
    for (pt, w) in curve.iter().zip(&windows) {
        let w = w.filter(|_| pt.delta_alpha.is_some());
        table.push(vec![
            pt.order.into(),
            r.into(),
            pt.target_n.into(),
            w.map(|w| w.alpha_lo).into(),
            w.map(|w| w.alpha_hi).into(),
            pt.delta_alpha.into(),
        ]);
        points.push((f64::from(pt.order), pt.delta_alpha.unwrap_or(0.0)));
    }
    let json = json!({"r": r, "kind": kind, "threshold": threshold, "curve": curve});
    let plot = Plot {
        title: format!("Window width, r = {r}"),
        x_label: "N".into(),
        y_label: "delta alpha".into(),
        kind: PlotKind::Lines,
        series: vec![(format!("r = {r}"), points)],
    };
    Ok(Artifact::new(table, json, plot))
}

fn cmd_sweep_fano(spec: CircularStateSpec, grid: &AlphaGrid) -> crate::Result<Artifact> {
    let rows = grid
        .points()
        .par_iter()
        .map(|&a| {
            let s = spec.with_alpha(a);
            let dist = pnd_closed(&s, default_n_max(&s))?;
            Ok((a, moments(&dist).ok()))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(&["alpha", "mean", "variance", "fano"]);
    let mut points = Vec::new();
    for (a, m) in &rows {
        table.push(vec![
            (*a).into(),
            m.map(|m| m.mean).into(),
            m.map(|m| m.variance).into(),
            m.map(|m| m.fano).into(),
        ]);
        if let Some(m) = m {
            points.push((*a, m.fano));
        }
    }
    let json = json!({
        "N": spec.order,
        "r": spec.photons_added,
        "rows": rows.iter().map(|(a, m)| json!({"alpha": a, "moments": m})).collect::<Vec<_>>(),
    });
    let plot = Plot {
        title: format!("Fano factor, N = {}, r = {}", spec.order, spec.photons_added),
        x_label: "|alpha|".into(),
        y_label: "Fano factor".into(),
        kind: PlotKind::Lines,
        series: vec![("fano".into(), points)],
    };
    Ok(Artifact::new(table, json, plot))
}

fn cmd_sweep_ellipse_max(orders: &OrderRange, shape: EllipticStateSpec) -> crate::Result<Artifact> {
    let rows = orders
        .orders()
        .par_iter()
        .map(|&order| {
            let ellipse = EllipticStateSpec { order, ..shape };
            let circle = CircularStateSpec::new(shape.equal_area_amplitude(), order, shape.photons_added)?;
            let n_max = default_n_max(&ellipse).max(default_n_max(&circle));
            Ok((
                order,
                pnd_closed(&circle, n_max)?.mode(),
                pnd_elliptic(&ellipse, n_max)?.mode(),
            ))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(&["N", "n_circle", "P_circle", "n_ellipse", "P_ellipse"]);
    for (order, c, e) in &rows {
        table.push(vec![(*order).into(), c.0.into(), c.1.into(), e.0.into(), e.1.into()]);
    }
    let json = json!({
        "a": shape.semi_major,
        "b": shape.semi_minor,
        "r": shape.photons_added,
        "rows": rows.iter().map(|(o, c, e)| json!({
            "N": o, "circle": {"n": c.0, "P_n": c.1}, "ellipse": {"n": e.0, "P_n": e.1},
        })).collect::<Vec<_>>(),
    });
    let plot = Plot {
        title: "Largest P_n, circle against ellipse".into(),
        x_label: "N".into(),
        y_label: "max P_n".into(),
        kind: PlotKind::Lines,
        series: vec![
            (
                "circle".into(),
                rows.iter().map(|(o, c, _)| (f64::from(*o), c.1)).collect(),
            ),
            (
                "ellipse".into(),
                rows.iter().map(|(o, _, e)| (f64::from(*o), e.1)).collect(),
            ),
        ],
    };
    Ok(Artifact::new(table, json, plot))
}
