//! The `quasilr` command line: argument parsing, config files and report
//! emitters. Every flag can also be given in a TOML config (`--config`);
//! flags win over the file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diophantine::littlewood_scan;
use crate::error::{Error, Result};
use crate::exact::{lambda_subgroups, SymbolTable};
use crate::io::{io_err, load_scheme, parse_int_list, parse_symbolic, write_points_csv};
use crate::partition::window_partition;
use crate::repetitivity::{critical_constant, family_scan, thin_rect_family, CriticalOptions, Mode, RepetitivityReport};
use crate::scheme::{canonical_direct, CanonicalConverter, SchemeSpec, WindowKind};
use crate::shapes::{box_points, hull_witness_shape, rect_family, shear_family, Shape};

#[derive(Parser, Debug)]
#[command(name = "quasilr", version, about = "Cubical cut-and-project sets and repetitivity scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the points with labels in a shape (or box) as CSV.
    Generate(Common),
    /// Cut sets, arcs and component histogram of a window partition.
    Partition(Common),
    /// Running minima of n * prod ||n alpha_i||.
    ScanLittlewood(Common),
    /// Critical constants for LR (balls of volume C |Omega|).
    TestLr(Common),
    /// Critical constants for LR_Omega (translates of C Omega).
    TestLromega(Common),
    /// Cubical-to-canonical conversion checked against direct acceptance.
    CompareWindows(Common),
}

/// Options shared by all subcommands; each one reads what it needs.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Common {
    /// TOML file with any of these options (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<String>,
    /// Scheme TOML file, or `preset:NAME`.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Shape literal such as `rect 0,0 3,2` or `scale 2 rect 0 3`.
    #[arg(long)]
    pub shape: Option<String>,
    /// Shape family for scans: rect, thin, shear or hull.
    #[arg(long)]
    pub family: Option<String>,
    /// Family budget (volume bound, largest side, or N).
    #[arg(long)]
    pub budget: Option<u64>,
    /// lr or lromega (only needed when it cannot be inferred).
    #[arg(long)]
    pub mode: Option<String>,
    /// Dilation cap for critical constants.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Relative bisection resolution for critical constants.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated expressions, e.g. `sqrt(2),sqrt(3)`.
    #[arg(long)]
    pub alphas: Option<String>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Label box `lo` (comma-separated) when no shape is given.
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<String>,
    /// Label radius for histograms and window comparisons.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Add physical coordinates to point CSV.
    #[arg(long)]
    pub embed: bool,
    /// Entry bound for shear families.
    #[arg(long)]
    pub entry_bound: Option<i64>,
    /// Random samples for shear families in dimension >= 3.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl Common {
    /// Merges a config file under the flags.
    fn resolve(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let file: Common = toml::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f.clone(); } )* };
        }
        fill!(scheme, shape, family, budget, mode, cap, tol, seed, out, format, alphas, n_max, lo, hi, radius, entry_bound, samples);
        self.embed |= file.embed;
        Ok(self)
    }

    /// SHA-256 of the effective options.
    fn digest(&self) -> String {
        let text = toml::to_string(self).unwrap_or_default();
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn scheme(&self) -> Result<SchemeSpec> {
        load_scheme(self.scheme.as_deref().ok_or_else(|| Error::Input("--scheme is required".into()))?)
    }

    fn shape(&self) -> Result<Option<Shape>> {
        self.shape.as_deref().map(str::parse).transpose()
    }

    fn label_box(&self, d: usize) -> Result<(Vec<i64>, Vec<i64>)> {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => {
                let (lo, hi) = (parse_int_list(lo)?, parse_int_list(hi)?);
                if lo.len() != d || hi.len() != d {
                    return Err(Error::Input(format!("--lo/--hi need {d} entries")));
                }
                Ok((lo, hi))
            }
            (None, None) => {
                let r = self.radius.unwrap_or(10);
                Ok((vec![-r; d], vec![r; d]))
            }
            _ => Err(Error::Input("give both --lo and --hi".into())),
        }
    }

    fn format(&self, default: &str) -> Result<String> {
        let f = self.format.clone().unwrap_or_else(|| default.into());
        match f.as_str() {
            "json" | "csv" => Ok(f),
            other => Err(Error::Input(format!("unknown format `{other}` (json or csv)"))),
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{p}: {e}"))),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(io_err),
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(c) => cmd_generate(&c.resolve()?),
        Command::Partition(c) => cmd_partition(&c.resolve()?),
        Command::ScanLittlewood(c) => cmd_scan_littlewood(&c.resolve()?),
        Command::TestLr(c) => cmd_test(&c.resolve()?, Mode::Lr),
        Command::TestLromega(c) => cmd_test(&c.resolve()?, Mode::LrOmega),
        Command::CompareWindows(c) => cmd_compare_windows(&c.resolve()?),
    }
}

pub fn cmd_generate(c: &Common) -> Result<()> {
    let spec = c.scheme()?;
    let pts = match c.shape()? {
        Some(shape) => spec.generate(&shape)?,
        None => {
            let (lo, hi) = c.label_box(spec.d())?;
            spec.generate_box(&lo, &hi)?
        }
    };
    let mut buf = Vec::new();
    write_points_csv(&mut buf, &pts, c.embed.then_some(&spec))?;
    c.emit(&String::from_utf8_lossy(&buf))
}

#[derive(Serialize)]
struct Histogram {
    shape: String,
    spec_digest: String,
    config_digest: String,
    components: String,
    cuts_per_coordinate: Vec<usize>,
    merged_near_ties: Vec<usize>,
    min_arcs: Vec<f64>,
    /// Labels in the sample box per component (keyed by arc indices).
    sample_lo: Vec<i64>,
    sample_hi: Vec<i64>,
    histogram: BTreeMap<String, usize>,
}

/// CSV of arcs to `--out` (or stdout), histogram JSON next to it as
/// `<out>.json` (or after the CSV on stdout).
pub fn cmd_partition(c: &Common) -> Result<()> {
    let spec = c.scheme()?;
    let shape = c.shape()?.ok_or_else(|| Error::Input("--shape is required".into()))?;
    let part = window_partition(&spec, &shape)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["coordinate", "cut", "next", "arc"]).map_err(crate::io::csv_err)?;
    for (i, cuts) in part.cuts.iter().enumerate() {
        for (t, cut) in cuts.iter().enumerate() {
            let next = cuts.get(t + 1).map_or(1.0, |n| n.value);
            w.write_record([
                (i + 1).to_string(),
                format!("{:.12}", cut.value),
                format!("{next:.12}"),
                format!("{:.12}", part.arcs[i][t]),
            ])
            .map_err(crate::io::csv_err)?;
        }
    }
    let csv_text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))?;
    let r = c.radius.unwrap_or(20);
    let (lo, hi) = (vec![-r; spec.d()], vec![r; spec.d()]);
    let labels = box_points(&lo, &hi);
    let mut histogram = BTreeMap::new();
    for l in &labels {
        let cls = part.classify(&spec, l)?;
        let key = cls.arcs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        *histogram.entry(key).or_insert(0) += 1;
    }
    let hist = Histogram {
        shape: shape.to_string(),
        spec_digest: crate::io::spec_digest(&spec),
        config_digest: c.digest(),
        components: part.component_count().to_string(),
        cuts_per_coordinate: part.cuts.iter().map(|v| v.len()).collect(),
        merged_near_ties: part.merges.clone(),
        min_arcs: part.min_arcs(),
        sample_lo: lo,
        sample_hi: hi,
        histogram,
    };
    let json = serde_json::to_string_pretty(&hist).expect("histogram serializes");
    match &c.out {
        Some(p) => {
            fs::write(p, csv_text).map_err(|e| Error::Io(format!("{p}: {e}")))?;
            let jp = format!("{p}.json");
            fs::write(&jp, json + "\n").map_err(|e| Error::Io(format!("{jp}: {e}")))
        }
        None => {
            let mut out = std::io::stdout();
            out.write_all(csv_text.as_bytes()).map_err(io_err)?;
            writeln!(out, "{json}").map_err(io_err)
        }
    }
}

pub fn cmd_scan_littlewood(c: &Common) -> Result<()> {
    let text = c.alphas.as_deref().ok_or_else(|| Error::Input("--alphas is required".into()))?;
    let mut table = SymbolTable::new();
    let alphas: Vec<f64> = text
        .split(',')
        .map(|s| parse_symbolic(s, &mut table).map(|v| v.eval(&table)))
        .collect::<Result<_>>()?;
    let n_max = c.n_max.unwrap_or(1_000_000);
    if n_max == 0 {
        return Err(Error::Degenerate("--n-max must be positive".into()));
    }
    let traj = littlewood_scan(&alphas, n_max);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "value"]).map_err(crate::io::csv_err)?;
    for (n, v) in &traj.records {
        w.write_record([n.to_string(), format!("{v:.12e}")]).map_err(crate::io::csv_err)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))?;
    c.emit(&text)
}

/// The shapes a scan runs over.
pub fn family(spec: &SchemeSpec, name: &str, budget: u64, entry_bound: i64, seed: u64, samples: usize) -> Result<Vec<Shape>> {
    let d = spec.d();
    match name {
        "rect" => Ok(rect_family(d, budget)),
        "thin" => Ok(thin_rect_family(d, budget as i64)),
        "shear" => Ok(shear_family(d, budget as i64, entry_bound, seed, samples)),
        "hull" => {
            let (lambdas, _) = lambda_subgroups(spec.forms(), d)?;
            let vs: Vec<Vec<i64>> = lambdas
                .iter()
                .map(|l| {
                    l.basis().first().cloned().ok_or_else(|| {
                        Error::Degenerate("some Lambda_i is trivial, so the hull witness is undefined".into())
                    })
                })
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            let mut n = 1;
            while n <= budget as i64 {
                out.push(hull_witness_shape(&vs, n)?);
                n *= 2;
            }
            Ok(out)
        }
        other => Err(Error::Input(format!("unknown family `{other}` (rect, thin, shear, hull)"))),
    }
}

fn with_config_digest(report: &RepetitivityReport, digest: &str) -> serde_json::Value {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v["config_digest"] = serde_json::Value::String(digest.into());
    v
}

pub fn cmd_test(c: &Common, default_mode: Mode) -> Result<()> {
    let spec = c.scheme()?;
    let mode = match &c.mode {
        Some(m) => m.parse()?,
        None => default_mode,
    };
    let mut opts = CriticalOptions::default();
    if let Some(cap) = c.cap {
        opts.cap = cap.max(1);
    }
    if let Some(t) = c.tol {
        opts.resolution = t;
    }
    opts.cover.seed = c.seed.unwrap_or(0);
    let (shapes, name) = match c.shape()? {
        Some(s) => {
            // single shapes surface their errors directly
            critical_constant(&spec, &s, mode, &opts)?;
            (vec![s.clone()], s.to_string())
        }
        None => {
            let name = c.family.clone().unwrap_or_else(|| "rect".into());
            let budget = c.budget.unwrap_or(64);
            let shapes = family(&spec, &name, budget, c.entry_bound.unwrap_or(3), c.seed.unwrap_or(0), c.samples.unwrap_or(200))?;
            (shapes, format!("{name}(budget={budget})"))
        }
    };
    if shapes.is_empty() {
        return Err(Error::Degenerate("the family is empty".into()));
    }
    let report = family_scan(&spec, &shapes, &name, mode, &opts);
    let text = match c.format("json")?.as_str() {
        "csv" => report.to_csv()?,
        _ => serde_json::to_string_pretty(&with_config_digest(&report, &c.digest())).expect("json") + "\n",
    };
    c.emit(&text)
}

#[derive(Serialize)]
struct WindowComparison {
    spec_digest: String,
    config_digest: String,
    lo: Vec<i64>,
    hi: Vec<i64>,
    cubical_points: usize,
    converted_points: usize,
    direct_points: usize,
    forward_mismatches: usize,
    backward_mismatches: usize,
    consistent: bool,
}

pub fn cmd_compare_windows(c: &Common) -> Result<()> {
    let spec = c.scheme()?;
    let cubical = spec.with_window(WindowKind::Cubical)?;
    let conv = CanonicalConverter::new(&cubical)?;
    let (lo, hi) = c.label_box(spec.d())?;
    let m = conv.margin();
    let wide_lo: Vec<i64> = lo.iter().map(|x| x - m).collect();
    let wide_hi: Vec<i64> = hi.iter().map(|x| x + m).collect();
    let cub = cubical.generate_box(&wide_lo, &wide_hi)?;
    let fwd = conv.forward(&cub, &wide_lo, &hi)?;
    let direct = canonical_direct(&cubical, &wide_lo, &wide_hi)?;
    let inside = |p: &&crate::scheme::SitePoint| p.label.iter().zip(&lo).zip(&hi).all(|((x, a), b)| a <= x && x <= b);
    let key = |p: &crate::scheme::SitePoint| (p.label.clone(), p.lift.clone());
    let direct_in: std::collections::BTreeSet<_> = direct.iter().filter(inside).map(key).collect();
    let fwd_set: std::collections::BTreeSet<_> = fwd.iter().filter(inside).map(key).collect();
    let forward_mismatches = direct_in.symmetric_difference(&fwd_set).count();
    let back = conv.backward(&direct, &lo, &wide_hi);
    let cub_in: std::collections::BTreeSet<_> = cub.iter().filter(inside).map(key).collect();
    let back_set: std::collections::BTreeSet<_> = back.iter().filter(inside).map(key).collect();
    let backward_mismatches = cub_in.symmetric_difference(&back_set).count();
    let report = WindowComparison {
        spec_digest: crate::io::spec_digest(&spec),
        config_digest: c.digest(),
        lo,
        hi,
        cubical_points: cub_in.len(),
        converted_points: fwd_set.len(),
        direct_points: direct_in.len(),
        forward_mismatches,
        backward_mismatches,
        consistent: forward_mismatches == 0 && backward_mismatches == 0,
    };
    c.emit(&(serde_json::to_string_pretty(&report).expect("json") + "\n"))
}
