//! Critical constants for LR and LR_Omega, family scans and shear witnesses.
//!
//! A pattern of shape `Omega` occurs in a region exactly when some label in
//! the region has its internal point in the matching component of the window
//! partition. So a region works for every translate precisely when the orbit
//! of every start point under the region's labels meets every component,
//! which is what [`covers_all_components`] decides.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::diophantine::{dist_to_int, sl_matrices, IntMatrix};
use crate::error::{Error, Result};
use crate::partition::{covers_all_components, window_partition, CoverOptions, CoverVerdict, SearchRegion, WindowPartition};
use crate::scheme::SchemeSpec;
use crate::shapes::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "LR_Omega")]
    LrOmega,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lr => "lr",
            Mode::LrOmega => "lromega",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lr" => Ok(Mode::Lr),
            "lromega" | "lr_omega" | "lr-omega" => Ok(Mode::LrOmega),
            other => Err(Error::Parse(format!("unknown mode `{other}` (expected lr or lromega)"))),
        }
    }
}

/// Smallest working dilation constant.
#[derive(Clone, Debug, PartialEq)]
pub enum CriticalConstant {
    /// `exact` is set when the value was snapped to a threshold of the
    /// integer-point count and is therefore exact.
    Point { value: f64, exact: Option<String> },
    /// Unknown verdicts or non-box shapes leave the constant in `(lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// Not covered at the cap.
    Infinite { cap: f64 },
}

impl CriticalConstant {
    pub fn is_finite(&self) -> bool {
        match self {
            CriticalConstant::Point { .. } => true,
            CriticalConstant::Interval { hi, .. } => hi.is_finite(),
            CriticalConstant::Infinite { .. } => false,
        }
    }

    /// Upper estimate (point value or interval end).
    pub fn upper(&self) -> f64 {
        match self {
            CriticalConstant::Point { value, .. } => *value,
            CriticalConstant::Interval { hi, .. } => *hi,
            CriticalConstant::Infinite { .. } => f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            CriticalConstant::Point { value, .. } => *value,
            CriticalConstant::Interval { lo, .. } => *lo,
            CriticalConstant::Infinite { cap } => *cap,
        }
    }
}

impl fmt::Display for CriticalConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalConstant::Point { value, exact: Some(e) } => write!(f, "{e} (~{value:.6})"),
            CriticalConstant::Point { value, exact: None } => write!(f, "{value:.6}"),
            CriticalConstant::Interval { lo, hi } => write!(f, "[{lo:.6}, {hi:.6}]"),
            CriticalConstant::Infinite { cap } => write!(f, "inf (cap {cap})"),
        }
    }
}

fn ser_f64<S: Serializer>(s: S, v: f64) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(v)
    } else {
        s.serialize_str("inf")
    }
}

struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_f64(s, self.0)
    }
}

/// A number, a `[lo, hi]` pair, or the string `"inf"`.
impl Serialize for CriticalConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CriticalConstant::Point { value, .. } => ser_f64(s, *value),
            CriticalConstant::Interval { lo, hi } => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&Num(*lo))?;
                seq.serialize_element(&Num(*hi))?;
                seq.end()
            }
            CriticalConstant::Infinite { .. } => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalOptions {
    /// Largest dilation tried before reporting infinity.
    pub cap: u64,
    /// Relative bisection resolution when the result cannot be snapped.
    pub resolution: f64,
    /// Search regions with more integer points are not evaluated.
    pub max_points: u128,
    pub cover: CoverOptions,
}

pub const DEFAULT_CAP: u64 = 1 << 14;

impl Default for CriticalOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, resolution: 0.01, max_points: 1 << 26, cover: CoverOptions::default() }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn floor_i64(q: &BigRational) -> i64 {
    q.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Largest `q` with `q^d <= v`.
fn int_root_floor(v: &BigRational, d: u32) -> i64 {
    if !v.is_positive() {
        return 0;
    }
    let mut q = rat_f64(v).powf(1.0 / d as f64).floor() as i64;
    let pow = |q: i64| BigRational::from_integer(BigInt::from(q).pow(d));
    while q > 0 && pow(q) > *v {
        q -= 1;
    }
    while pow(q + 1) <= *v {
        q += 1;
    }
    q
}

/// A dilation-indexed family of search regions.
trait Regions: Sync {
    fn region(&self, c: &BigRational) -> SearchRegion;
    /// Dilations in `(lo, hi]` where the region changes, if known.
    fn thresholds(&self, _lo: &BigRational, _hi: &BigRational) -> Option<Vec<BigRational>> {
        None
    }
}

/// Sup-norm ball of volume `C |Omega|`: its worst translate has
/// `floor((C |Omega|)^(1/d))` integer points per axis.
struct Balls {
    d: usize,
    volume: BigRational,
}

impl Regions for Balls {
    fn region(&self, c: &BigRational) -> SearchRegion {
        let q = int_root_floor(&(c * &self.volume), self.d as u32);
        SearchRegion::counts(&vec![q; self.d])
    }

    fn thresholds(&self, lo: &BigRational, hi: &BigRational) -> Option<Vec<BigRational>> {
        let q_lo = int_root_floor(&(lo * &self.volume), self.d as u32);
        let q_hi = int_root_floor(&(hi * &self.volume), self.d as u32);
        Some(
            ((q_lo + 1)..=q_hi)
                .map(|q| BigRational::from_integer(BigInt::from(q).pow(self.d as u32)) / &self.volume)
                .collect(),
        )
    }
}

/// Translates of `C [lo, hi]`: the worst one has `floor(C side_j)` integer
/// points along axis `j`.
struct RectDilates {
    sides: Vec<i64>,
}

impl Regions for RectDilates {
    fn region(&self, c: &BigRational) -> SearchRegion {
        let counts: Vec<i64> = self.sides.iter().map(|s| floor_i64(&(c * rat(*s)))).collect();
        SearchRegion::counts(&counts)
    }

    fn thresholds(&self, lo: &BigRational, hi: &BigRational) -> Option<Vec<BigRational>> {
        let mut out = Vec::new();
        for s in &self.sides {
            let a = floor_i64(&(lo * rat(*s)));
            let b = floor_i64(&(hi * rat(*s)));
            out.extend(((a + 1)..=b).map(|q| BigRational::new(BigInt::from(q), BigInt::from(*s))));
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// Integer points of `C Omega` itself: one translate, so failure there is a
/// valid refutation.
struct DilateAtOrigin {
    shape: Shape,
}

impl Regions for DilateAtOrigin {
    fn region(&self, c: &BigRational) -> SearchRegion {
        match self.shape.clone().scaled(c.clone()) {
            Ok(s) => SearchRegion::Points(s.integer_points()),
            Err(_) => SearchRegion::Points(Vec::new()),
        }
    }
}

/// Integer `z` with `z - [0,1]^d` inside `C Omega`; every translate of
/// `C Omega` contains a translate of this set by an integer vector.
struct InnerDilate {
    shape: Shape,
}

impl Regions for InnerDilate {
    fn region(&self, c: &BigRational) -> SearchRegion {
        let Ok(s) = self.shape.clone().scaled(c.clone()) else {
            return SearchRegion::Points(Vec::new());
        };
        let pts = s.integer_points();
        let set: std::collections::HashSet<&Vec<i64>> = pts.iter().collect();
        let d = s.dim();
        let inner = pts
            .iter()
            .filter(|z| {
                (1u32..(1 << d)).all(|mask| {
                    let corner: Vec<i64> = z.iter().enumerate().map(|(j, x)| x - i64::from(mask >> j & 1 == 1)).collect();
                    set.contains(&corner)
                })
            })
            .cloned()
            .collect();
        SearchRegion::Points(inner)
    }
}

/// Outcome of the doubling/bisection protocol on one region family.
struct Search {
    /// Smallest dilation known to cover (`None` if none up to the cap).
    hi: Option<BigRational>,
    /// Largest dilation known not to cover.
    lo_no: BigRational,
    /// Whether any verdict in between was `Unknown` (or unevaluated).
    unknown: bool,
    exact: bool,
}

fn verdict(
    spec: &SchemeSpec,
    part: &WindowPartition,
    regions: &dyn Regions,
    c: &BigRational,
    opts: &CriticalOptions,
) -> Result<CoverVerdict> {
    let region = regions.region(c);
    if region.len() > opts.max_points && region.len() >= part.component_count() {
        return Ok(CoverVerdict::Unknown { reason: format!("search region of {} points exceeds the budget", region.len()) });
    }
    covers_all_components(spec, part, &region, &opts.cover)
}

fn search(spec: &SchemeSpec, part: &WindowPartition, regions: &dyn Regions, opts: &CriticalOptions) -> Result<Search> {
    let cap = rat(opts.cap as i64);
    let two = rat(2);
    let mut unknown = false;
    let mut lo_no = BigRational::zero();
    let note = |v: &CoverVerdict, c: &BigRational, lo_no: &mut BigRational, unknown: &mut bool| {
        match v {
            CoverVerdict::No { .. } => {
                if c > lo_no {
                    *lo_no = c.clone();
                }
            }
            CoverVerdict::Unknown { .. } => *unknown = true,
            CoverVerdict::Yes => {}
        }
    };
    // bracket: lo does not cover, hi covers
    let mut c = BigRational::one();
    let v = verdict(spec, part, regions, &c, opts)?;
    note(&v, &c, &mut lo_no, &mut unknown);
    let (mut lo, mut hi) = if v.is_yes() {
        let mut hi = c.clone();
        loop {
            let next = &hi / &two;
            let v = verdict(spec, part, regions, &next, opts)?;
            note(&v, &next, &mut lo_no, &mut unknown);
            if !v.is_yes() {
                break (next, hi);
            }
            hi = next;
            if hi < BigRational::new(1.into(), BigInt::from(1u64 << 40)) {
                return Err(Error::Degenerate("covered at every dilation; the partition has no proper cut".into()));
            }
        }
    } else {
        loop {
            if c >= cap {
                return Ok(Search { hi: None, lo_no, unknown, exact: false });
            }
            let next = if &c * &two > cap { cap.clone() } else { &c * &two };
            let v = verdict(spec, part, regions, &next, opts)?;
            note(&v, &next, &mut lo_no, &mut unknown);
            if v.is_yes() {
                break (c, next);
            }
            c = next;
        }
    };
    // exact snap when the region only changes at known dilations
    if let Some(cands) = regions.thresholds(&lo, &hi) {
        let (mut a, mut b) = (0usize, cands.len());
        // the last candidate gives the same region as `hi`
        while a + 1 < b {
            let m = (a + b) / 2;
            let v = verdict(spec, part, regions, &cands[m - 1], opts)?;
            note(&v, &cands[m - 1], &mut lo_no, &mut unknown);
            if v.is_yes() {
                b = m;
            } else {
                a = m;
            }
        }
        if let Some(t) = cands.get(b.saturating_sub(1)) {
            let v = verdict(spec, part, regions, t, opts)?;
            if v.is_yes() {
                return Ok(Search { hi: Some(t.clone()), lo_no, unknown, exact: !unknown });
            }
        }
    }
    let res = BigRational::new(BigInt::from((opts.resolution * 1e9).round() as i64), BigInt::from(1_000_000_000));
    while &hi - &lo > &hi * &res {
        let mid = (&lo + &hi) / &two;
        let v = verdict(spec, part, regions, &mid, opts)?;
        note(&v, &mid, &mut lo_no, &mut unknown);
        if v.is_yes() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Search { hi: Some(hi), lo_no, unknown, exact: false })
}

fn to_constant(s: Search, cap: u64) -> CriticalConstant {
    match s.hi {
        None if s.unknown => CriticalConstant::Interval { lo: rat_f64(&s.lo_no), hi: f64::INFINITY },
        None => CriticalConstant::Infinite { cap: cap as f64 },
        Some(hi) if s.unknown => CriticalConstant::Interval { lo: rat_f64(&s.lo_no), hi: rat_f64(&hi) },
        Some(hi) => CriticalConstant::Point { value: rat_f64(&hi), exact: s.exact.then(|| hi.to_string()) },
    }
}

fn positive_volume(shape: &Shape) -> Result<BigRational> {
    let v = shape.volume()?;
    if !v.is_positive() {
        return Err(Error::Degenerate(format!("shape `{shape}` has zero volume")));
    }
    Ok(v)
}

/// Smallest `C` such that every sup-norm ball of volume `C |Omega|` contains
/// every pattern of shape `Omega`.
pub fn critical_constant_lr(spec: &SchemeSpec, shape: &Shape, opts: &CriticalOptions) -> Result<CriticalConstant> {
    let part = window_partition(spec, shape)?;
    critical_constant_lr_with(spec, shape, &part, opts)
}

pub fn critical_constant_lr_with(
    spec: &SchemeSpec,
    shape: &Shape,
    part: &WindowPartition,
    opts: &CriticalOptions,
) -> Result<CriticalConstant> {
    let regions = Balls { d: spec.d(), volume: positive_volume(shape)? };
    Ok(to_constant(search(spec, part, &regions, opts)?, opts.cap))
}

/// Smallest `C` such that every translate of `C Omega` contains every
/// pattern of shape `Omega`. Exact for aligned rectangles; other shapes get
/// the interval between a one-translate refutation and a sufficient inner
/// set.
pub fn critical_constant_lromega(spec: &SchemeSpec, shape: &Shape, opts: &CriticalOptions) -> Result<CriticalConstant> {
    let part = window_partition(spec, shape)?;
    critical_constant_lromega_with(spec, shape, &part, opts)
}

pub fn critical_constant_lromega_with(
    spec: &SchemeSpec,
    shape: &Shape,
    part: &WindowPartition,
    opts: &CriticalOptions,
) -> Result<CriticalConstant> {
    positive_volume(shape)?;
    if let Shape::Rect { lo, hi } = shape {
        let sides = lo.iter().zip(hi).map(|(a, b)| b - a).collect();
        return Ok(to_constant(search(spec, part, &RectDilates { sides }, opts)?, opts.cap));
    }
    let necessary = search(spec, part, &DilateAtOrigin { shape: shape.clone() }, opts)?;
    let Some(lower) = necessary.hi.clone() else {
        // even the untranslated dilate misses a component at the cap
        return Ok(to_constant(necessary, opts.cap));
    };
    let sufficient = search(spec, part, &InnerDilate { shape: shape.clone() }, opts)?;
    Ok(match sufficient.hi {
        Some(upper) if upper == lower && !sufficient.unknown && !necessary.unknown => {
            CriticalConstant::Point { value: rat_f64(&upper), exact: None }
        }
        Some(upper) => CriticalConstant::Interval {
            lo: rat_f64(&necessary.lo_no).max(rat_f64(&lower) * (1.0 - opts.resolution)),
            hi: rat_f64(&upper),
        },
        None => CriticalConstant::Interval { lo: rat_f64(&necessary.lo_no), hi: f64::INFINITY },
    })
}

pub fn critical_constant(spec: &SchemeSpec, shape: &Shape, mode: Mode, opts: &CriticalOptions) -> Result<CriticalConstant> {
    match mode {
        Mode::Lr => critical_constant_lr(spec, shape, opts),
        Mode::LrOmega => critical_constant_lromega(spec, shape, opts),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Bounded,
    Growing,
    Inconclusive,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::Bounded => "bounded",
            Trend::Growing => "growing",
            Trend::Inconclusive => "inconclusive",
        })
    }
}

pub const BOUNDED_SLOPE: f64 = 0.05;
pub const GROWING_SLOPE: f64 = 0.2;

#[derive(Clone, Debug, Serialize)]
pub struct ShapeRecord {
    pub shape: String,
    pub volume: f64,
    /// Shortest arc over all internal coordinates.
    pub min_arc: f64,
    /// Measure of the smallest component.
    pub min_component: f64,
    pub components: String,
    #[serde(rename = "C_star")]
    pub c_star: Option<CriticalConstant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    #[serde(serialize_with = "ser_opt_f64")]
    pub sup: Option<f64>,
    pub trend: Trend,
    pub slope: Option<f64>,
}

fn ser_opt_f64<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_f64(s, *x),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepetitivityReport {
    pub mode: Mode,
    pub family: String,
    pub spec_digest: String,
    pub records: Vec<ShapeRecord>,
    pub summary: Summary,
}

impl RepetitivityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per shape: `shape,volume,min_arc,min_component,components,c_lo,c_hi,error`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["shape", "volume", "min_arc", "min_component", "components", "c_lo", "c_hi", "error"])
            .map_err(crate::io::csv_err)?;
        let show = |x: f64| if x.is_finite() { format!("{x}") } else { "inf".into() };
        for r in &self.records {
            let (lo, hi) = r.c_star.as_ref().map_or((String::new(), String::new()), |c| {
                (show(if matches!(c, CriticalConstant::Infinite { .. }) { f64::INFINITY } else { c.lower() }), show(c.upper()))
            });
            w.write_record([
                r.shape.clone(),
                show(r.volume),
                show(r.min_arc),
                show(r.min_component),
                r.components.clone(),
                lo,
                hi,
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(crate::io::csv_err)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Least-squares slope of `ln C*` against `ln volume`; infinite constants
/// count as growth.
pub fn classify_trend(records: &[ShapeRecord]) -> (Trend, Option<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut infinite = false;
    for r in records {
        let Some(c) = &r.c_star else { continue };
        let u = c.upper();
        if !u.is_finite() {
            infinite = true;
            continue;
        }
        if u > 0.0 && r.volume > 0.0 {
            xs.push(r.volume.ln());
            ys.push(u.ln());
        }
    }
    let slope = least_squares_slope(&xs, &ys);
    let trend = if infinite {
        Trend::Growing
    } else {
        match slope {
            Some(s) if s < BOUNDED_SLOPE => Trend::Bounded,
            Some(s) if s > GROWING_SLOPE => Trend::Growing,
            _ => Trend::Inconclusive,
        }
    };
    (trend, slope)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 3 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn scan_one(spec: &SchemeSpec, shape: &Shape, mode: Mode, opts: &CriticalOptions) -> ShapeRecord {
    let mut rec = ShapeRecord {
        shape: shape.to_string(),
        volume: shape.volume_f64(),
        min_arc: f64::NAN,
        min_component: f64::NAN,
        components: String::new(),
        c_star: None,
        error: None,
    };
    let part = match window_partition(spec, shape) {
        Ok(p) => p,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.min_arc = part.min_arcs().into_iter().fold(f64::INFINITY, f64::min);
    rec.min_component = part.min_component_measure();
    rec.components = part.component_count().to_string();
    let c = match mode {
        Mode::Lr => critical_constant_lr_with(spec, shape, &part, opts),
        Mode::LrOmega => critical_constant_lromega_with(spec, shape, &part, opts),
    };
    match c {
        Ok(c) => rec.c_star = Some(c),
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Critical constants over a shape family, in parallel; records keep the
/// family order.
pub fn family_scan(spec: &SchemeSpec, family: &[Shape], family_name: &str, mode: Mode, opts: &CriticalOptions) -> RepetitivityReport {
    let records: Vec<ShapeRecord> = family.par_iter().map(|s| scan_one(spec, s, mode, opts)).collect();
    let sup = records
        .iter()
        .filter_map(|r| r.c_star.as_ref().map(|c| c.upper()))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let (trend, slope) = classify_trend(&records);
    RepetitivityReport {
        mode,
        family: family_name.to_string(),
        spec_digest: crate::io::spec_digest(spec),
        records,
        summary: Summary { sup, trend, slope },
    }
}

/// Rectangles `[0, N] x [0, 1]` and `[0, 1] x [0, N]` (and their analogues
/// along every axis) for `N = 1, 2, 4, ..., max_side`.
pub fn thin_rect_family(d: usize, max_side: i64) -> Vec<Shape> {
    let mut out = Vec::new();
    let mut n = 1;
    while n <= max_side {
        for axis in 0..d {
            let mut hi = vec![1; d];
            hi[axis] = n;
            let s = Shape::Rect { lo: vec![0; d], hi };
            if !out.contains(&s) {
                out.push(s);
            }
        }
        n *= 2;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearWitness {
    pub matrix: IntMatrix,
    /// `||L_i(A e_1)||` for every internal coordinate.
    pub beta1: Vec<f64>,
    pub min_arc: f64,
    pub shape: String,
}

/// Searches entry-bounded `A` in `SL_d(Z)` (exhaustively for `d <= 2`,
/// `samples` random words otherwise) for a sheared cube `A [-N, N]^d` whose
/// partition has an arc shorter than `target_arc`. Returns the first hit in
/// enumeration order.
pub fn shear_witness_search(
    spec: &SchemeSpec,
    n: i64,
    entry_bound: i64,
    target_arc: f64,
    seed: u64,
    samples: usize,
) -> Result<Option<ShearWitness>> {
    let d = spec.d();
    let forms = spec.forms_f64();
    let mats = sl_matrices(d, entry_bound, seed, samples);
    let cube = crate::shapes::box_points(&vec![-n; d], &vec![n; d]);
    // float screen, then an exact partition for the hit
    let min_arc_f64 = |a: &IntMatrix| -> f64 {
        let mut best = f64::INFINITY;
        for row in &forms {
            let mut v: Vec<f64> = cube
                .iter()
                .map(|c| {
                    let x: f64 = (0..d).map(|j| row[j] * (0..d).map(|t| (a[j][t] * c[t]) as f64).sum::<f64>()).sum();
                    crate::diophantine::frac(x)
                })
                .collect();
            v.push(0.0);
            let v = crate::diophantine::distinct_within(v, 1e-12);
            let gaps = crate::diophantine::circle_gaps(&mut v.clone());
            best = best.min(gaps.into_iter().fold(f64::INFINITY, f64::min));
        }
        best
    };
    let hit = mats.par_iter().position_first(|a| min_arc_f64(a) < target_arc);
    let Some(idx) = hit else { return Ok(None) };
    let a = mats[idx].clone();
    let shape = Shape::sheared(a.clone(), n)?;
    let part = window_partition(spec, &shape)?;
    let min_arc = part.min_arcs().into_iter().fold(f64::INFINITY, f64::min);
    let beta1 = forms.iter().map(|row| dist_to_int((0..d).map(|j| row[j] * a[j][0] as f64).sum())).collect();
    Ok(Some(ShearWitness { matrix: a, beta1, min_arc, shape: shape.to_string() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::preset;

    #[test]
    fn unit_square_on_witness() {
        let spec = preset("witness-phi-sqrt2").unwrap();
        let sq = Shape::rect(vec![0, 0], vec![1, 1]).unwrap();
        let c = critical_constant_lromega(&spec, &sq, &CriticalOptions::default()).unwrap();
        assert_eq!(c, CriticalConstant::Point { value: 3.0, exact: Some("3".into()) });
    }

    #[test]
    fn fibonacci_lr() {
        let spec = preset("fibonacci").unwrap();
        let c = critical_constant_lr(&spec, &Shape::rect(vec![0], vec![3]).unwrap(), &CriticalOptions::default()).unwrap();
        // 8 consecutive labels bring the largest gap down to the shortest arc 0.145898
        assert_eq!(c, CriticalConstant::Point { value: 8.0 / 3.0, exact: Some("8/3".into()) });
    }

    #[test]
    fn int_roots() {
        assert_eq!(int_root_floor(&rat(27), 3), 3);
        assert_eq!(int_root_floor(&BigRational::new(26.into(), 1.into()), 3), 2);
        assert_eq!(int_root_floor(&BigRational::new(1.into(), 2.into()), 2), 0);
    }
}
