//! Window-partition calculus for cubical windows: the cut sets that split the
//! window into patch classes, classification of labels, a brute-force patch
//! oracle, and orbit covering tests.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::circle_gaps;
use crate::error::{Error, Result};
use crate::exact::{AffineForm, SymbolTable, SymbolicReal};
use crate::scheme::{SchemeSpec, WindowKind};
use crate::shapes::{box_points, Shape};

/// Float separation below which circle values are compared exactly.
pub const TIE_TOL: f64 = 1e-9;

/// A point of `R/Z` given by `sign * L_i(label) - shift`, kept with its
/// origin so that near-ties can be settled exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleValue {
    pub value: f64,
    pub label: Vec<i64>,
    #[serde(skip)]
    negated: bool,
    #[serde(skip)]
    shift: i64,
}

impl CircleValue {
    fn new(map: &AffineForm, label: &[i64], negated: bool, table: &SymbolTable) -> Result<Self> {
        let (fl, fr) = if negated {
            let v = -map.value_f64(label);
            let fl = v.floor();
            let margin = 1e-9 * v.abs().max(1.0);
            if v - fl > margin && fl + 1.0 - v > margin {
                (fl as i64, v - fl)
            } else {
                let s = -map.symbolic_at(label);
                let k = s.floor(table)?;
                let k = num_traits::ToPrimitive::to_i64(&k).ok_or_else(|| Error::Input("floor out of range".into()))?;
                let r = (&s - &SymbolicReal::from_integer(k)).eval(table);
                (k, crate::exact::clamp_unit(r))
            }
        } else {
            map.split_at(label, table)?
        };
        Ok(Self { value: fr, label: label.to_vec(), negated, shift: fl })
    }

    fn zero(d: usize) -> Self {
        Self { value: 0.0, label: vec![0; d], negated: false, shift: 0 }
    }

    pub fn exact(&self, map: &AffineForm) -> SymbolicReal {
        let v = map.symbolic_at(&self.label);
        let v = if self.negated { -v } else { v };
        &v - &SymbolicReal::from_integer(self.shift)
    }
}

/// Exact comparison of circle representatives, falling back to floats when
/// they are clearly apart. `Err` means the order is undecidable.
fn cmp_values(a: &CircleValue, b: &CircleValue, map: &AffineForm, table: &SymbolTable) -> Result<Ordering> {
    if (a.value - b.value).abs() > TIE_TOL {
        return Ok(a.value.total_cmp(&b.value));
    }
    if a.negated == b.negated {
        let diff: Vec<i64> = a.label.iter().zip(&b.label).map(|(x, y)| x - y).collect();
        if map.is_integer_at(&diff) {
            return Ok(Ordering::Equal);
        }
    }
    a.exact(map).cmp_exact(&b.exact(map), table)
}

/// Sorts by value and removes exact duplicates; undecidable near-ties are
/// merged and counted.
fn sort_dedup(mut vals: Vec<CircleValue>, map: &AffineForm, table: &SymbolTable) -> Result<(Vec<CircleValue>, usize)> {
    vals.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<CircleValue> = Vec::with_capacity(vals.len());
    let mut merges = 0;
    let mut i = 0;
    while i < vals.len() {
        let mut j = i + 1;
        while j < vals.len() && vals[j].value - vals[j - 1].value <= TIE_TOL {
            j += 1;
        }
        if j == i + 1 {
            out.push(vals[i].clone());
        } else {
            // cluster of near-ties: insertion sort with exact comparisons
            let mut cluster: Vec<CircleValue> = Vec::new();
            for v in vals[i..j].iter() {
                let mut pos = cluster.len();
                let mut dup = false;
                for (t, c) in cluster.iter().enumerate() {
                    match cmp_values(v, c, map, table) {
                        Ok(Ordering::Less) => {
                            pos = t;
                            break;
                        }
                        Ok(Ordering::Equal) => {
                            dup = true;
                            break;
                        }
                        Ok(Ordering::Greater) => {}
                        Err(Error::Tolerance(_)) => {
                            merges += 1;
                            dup = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if !dup {
                    cluster.insert(pos, v.clone());
                }
            }
            out.extend(cluster);
        }
        i = j;
    }
    Ok((out, merges))
}

/// Cut sets `{L_i(n) mod 1 : n in Omega} ∪ {0}` per internal coordinate.
///
/// The point `0` is the boundary face of the cubical window itself, so it is
/// always a cut; components are products of the half-open intervals between
/// consecutive cuts.
#[derive(Clone, Debug, Serialize)]
pub struct WindowPartition {
    pub shape: String,
    pub cuts: Vec<Vec<CircleValue>>,
    pub arcs: Vec<Vec<f64>>,
    /// Near-ties that could not be separated exactly and were merged.
    pub merges: Vec<usize>,
}

impl WindowPartition {
    pub fn codim(&self) -> usize {
        self.cuts.len()
    }

    /// Number of components (saturating).
    pub fn component_count(&self) -> u128 {
        self.cuts.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    pub fn min_arc(&self, i: usize) -> f64 {
        self.arcs[i].iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn min_arcs(&self) -> Vec<f64> {
        (0..self.codim()).map(|i| self.min_arc(i)).collect()
    }

    /// Measure of the smallest component.
    pub fn min_component_measure(&self) -> f64 {
        self.min_arcs().iter().product()
    }

    /// Exact length of arc `t` of coordinate `i`.
    pub fn arc_exact(&self, spec: &SchemeSpec, i: usize, t: usize) -> SymbolicReal {
        let map = spec.linear_map(i);
        let start = self.cuts[i][t].exact(map);
        let end = match self.cuts[i].get(t + 1) {
            Some(c) => c.exact(map),
            None => SymbolicReal::one(),
        };
        &end - &start
    }

    /// Arc index of every internal coordinate of `label`.
    pub fn classify(&self, spec: &SchemeSpec, label: &[i64]) -> Result<PatchClass> {
        let (lift, w) = spec.lift(label)?;
        let mut arcs = Vec::with_capacity(self.codim());
        for (i, cuts) in self.cuts.iter().enumerate() {
            let mut t = cuts.partition_point(|c| c.value <= w[i]);
            // settle near-ties around the float position exactly
            let near = |c: &CircleValue| (c.value - w[i]).abs() <= TIE_TOL;
            if (t > 0 && near(&cuts[t - 1])) || (t < cuts.len() && near(&cuts[t])) {
                let exact_w = &spec.linear_map(i).symbolic_at(label).scale_int(-1)
                    + &(&spec.shift().1[i] - &linear_at_shift(spec, i)?);
                let exact_w = &exact_w + &SymbolicReal::from_integer(lift[i]);
                let map = spec.linear_map(i);
                t = 0;
                for c in cuts {
                    match c.exact(map).cmp_exact(&exact_w, spec.table())? {
                        Ordering::Less => t += 1,
                        Ordering::Equal => return Err(Error::Irregular { label: label.to_vec(), coordinate: i }),
                        Ordering::Greater => break,
                    }
                }
            }
            arcs.push(t - 1);
        }
        Ok(PatchClass { arcs, label: label.to_vec() })
    }
}

fn linear_at_shift(spec: &SchemeSpec, i: usize) -> Result<SymbolicReal> {
    let mut v = SymbolicReal::zero();
    for (a, s) in spec.forms()[i].iter().zip(spec.shift().0) {
        v = &v + &crate::scheme::mul(a, s)?;
    }
    Ok(v)
}

/// Patch class of a label: the arc index per internal coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatchClass {
    pub arcs: Vec<usize>,
    pub label: Vec<i64>,
}

fn require_cubical(spec: &SchemeSpec) -> Result<()> {
    if spec.window() != WindowKind::Cubical {
        return Err(Error::Unsupported(
            "unsupported: partition calculus is defined for cubical windows; convert canonical sets first".into(),
        ));
    }
    Ok(())
}

/// Cut sets of `shape`, computed in parallel over its integer points.
pub fn window_partition(spec: &SchemeSpec, shape: &Shape) -> Result<WindowPartition> {
    window_partition_points(spec, &shape.integer_points(), shape.to_string())
}

pub fn window_partition_points(spec: &SchemeSpec, points: &[Vec<i64>], name: String) -> Result<WindowPartition> {
    require_cubical(spec)?;
    if points.is_empty() {
        return Err(Error::Degenerate(format!("shape `{name}` contains no integer points")));
    }
    if points[0].len() != spec.d() {
        return Err(Error::Input("shape dimension does not match the scheme".into()));
    }
    let table = spec.table();
    let mut cuts = Vec::new();
    let mut arcs = Vec::new();
    let mut merges = Vec::new();
    for i in 0..spec.codim() {
        let map = spec.linear_map(i);
        // only the columns this row sees matter
        let support: Vec<bool> = spec.forms()[i].iter().map(|a| !a.is_zero()).collect();
        let mut projected: Vec<Vec<i64>> = points
            .iter()
            .map(|n| n.iter().zip(&support).map(|(x, s)| if *s { *x } else { 0 }).collect())
            .collect();
        projected.sort_unstable();
        projected.dedup();
        let mut vals: Vec<CircleValue> = projected
            .par_iter()
            .map(|n| CircleValue::new(map, n, false, table))
            .collect::<Result<Vec<_>>>()?;
        vals.push(CircleValue::zero(spec.d()));
        let (sorted, merged) = sort_dedup(vals, map, table)?;
        if merged > 0 {
            log::warn!("coordinate {i}: {merged} undecidable near-coincident cuts merged");
        }
        let mut a: Vec<f64> = sorted.windows(2).map(|w| w[1].value - w[0].value).collect();
        a.push(1.0 - sorted.last().map_or(0.0, |c| c.value));
        cuts.push(sorted);
        arcs.push(a);
        merges.push(merged);
    }
    Ok(WindowPartition { shape: name, cuts, arcs, merges })
}

/// Arc indices of a label for the partition of `shape`.
pub fn classify_patch(spec: &SchemeSpec, shape: &Shape, label: &[i64]) -> Result<PatchClass> {
    window_partition(spec, shape)?.classify(spec, label)
}

/// Renumbers class ids by first appearance so partitions compare with `==`.
pub fn canonical_labels<T: std::hash::Hash + Eq + Clone>(keys: &[T]) -> Vec<usize> {
    let mut seen: HashMap<T, usize> = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = seen.len();
            *seen.entry(k.clone()).or_insert(next)
        })
        .collect()
}

/// Partition of `labels` into patch classes by direct comparison of patches.
///
/// The patch at `y` is the set of points whose labels differ from `y`'s by an
/// element of `shape`. Because `pi` is linear and injective on `Z^k`, two
/// patches are translates of each other exactly when their sets of lift
/// differences `(m, lift(y + m) - lift(y))` coincide, so the comparison is
/// exact integer equality.
pub fn patch_oracle(spec: &SchemeSpec, shape: &Shape, labels: &[Vec<i64>]) -> Result<Vec<usize>> {
    require_cubical(spec)?;
    let offsets = shape.integer_points();
    if labels.is_empty() {
        return Ok(Vec::new());
    }
    let d = spec.d();
    let mut lo: Vec<i64> = (0..d).map(|j| labels.iter().map(|l| l[j]).min().unwrap()).collect();
    let mut hi: Vec<i64> = (0..d).map(|j| labels.iter().map(|l| l[j]).max().unwrap()).collect();
    if !offsets.is_empty() {
        for j in 0..d {
            lo[j] += offsets.iter().map(|o| o[j]).min().unwrap().min(0);
            hi[j] += offsets.iter().map(|o| o[j]).max().unwrap().max(0);
        }
    }
    let all = box_points(&lo, &hi);
    let lifts: Vec<Vec<i64>> = all.par_iter().map(|l| spec.lift(l).map(|x| x.0)).collect::<Result<Vec<_>>>()?;
    let width: Vec<i64> = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).collect();
    let index = |l: &[i64]| -> usize {
        l.iter().zip(&lo).zip(&width).fold(0usize, |acc, ((x, a), w)| acc * *w as usize + (x - a) as usize)
    };
    let patches: Vec<Vec<i64>> = labels
        .par_iter()
        .map(|y| {
            let base = &lifts[index(y)];
            let mut key = Vec::with_capacity(offsets.len() * base.len());
            for m in &offsets {
                let z: Vec<i64> = y.iter().zip(m).map(|(a, b)| a + b).collect();
                key.extend(lifts[index(&z)].iter().zip(base).map(|(a, b)| a - b));
            }
            key
        })
        .collect();
    Ok(canonical_labels(&patches))
}

/// Classes of `labels` under `classify_patch`, renumbered by first appearance.
pub fn classify_labels(spec: &SchemeSpec, partition: &WindowPartition, labels: &[Vec<i64>]) -> Result<Vec<usize>> {
    let keys: Vec<Vec<usize>> = labels
        .par_iter()
        .map(|l| partition.classify(spec, l).map(|c| c.arcs))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical_labels(&keys))
}

/// Largest circle gap of `{L_i(m) mod 1 : m in region}` per coordinate.
pub fn orbit_gaps(spec: &SchemeSpec, region: &Shape) -> Result<Vec<f64>> {
    let pts = region.integer_points();
    Ok((0..spec.codim())
        .map(|i| {
            let map = spec.linear_map(i);
            let mut v: Vec<f64> = pts.par_iter().map(|m| crate::diophantine::frac(map.value_f64(m))).collect();
            circle_gaps(&mut v).into_iter().fold(0.0, f64::max)
        })
        .collect())
}

/// Label set searched for patches.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchRegion {
    /// The integer box `lo..=hi`.
    Box { lo: Vec<i64>, hi: Vec<i64> },
    Points(Vec<Vec<i64>>),
}

impl SearchRegion {
    pub fn from_shape(shape: &Shape) -> Self {
        let (base, scaled_rect) = match shape {
            Shape::Rect { .. } => (shape, true),
            Shape::Scaled { base, .. } => (shape, matches!(**base, Shape::Rect { .. })),
            _ => (shape, false),
        };
        if scaled_rect {
            let (lo, hi) = base.bounding_box();
            SearchRegion::Box { lo, hi }
        } else {
            SearchRegion::Points(shape.integer_points())
        }
    }

    /// Box with `counts[j]` consecutive integers along axis `j`, starting at 0.
    pub fn counts(counts: &[i64]) -> Self {
        SearchRegion::Box { lo: vec![0; counts.len()], hi: counts.iter().map(|c| c - 1).collect() }
    }

    pub fn len(&self) -> u128 {
        match self {
            SearchRegion::Box { lo, hi } => lo.iter().zip(hi).fold(1u128, |acc, (a, b)| {
                acc.saturating_mul(if b >= a { (b - a + 1) as u128 } else { 0 })
            }),
            SearchRegion::Points(p) => p.len() as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<Vec<i64>> {
        match self {
            SearchRegion::Box { lo, hi } => box_points(lo, hi),
            SearchRegion::Points(p) => p.clone(),
        }
    }
}

/// Outcome of a covering test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CoverVerdict {
    Yes,
    No {
        /// Start point in the window whose orbit misses a component.
        start: Vec<f64>,
        /// Arc index per coordinate of the missed component.
        missed: Vec<usize>,
        reason: String,
    },
    Unknown {
        reason: String,
    },
}

impl CoverVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CoverVerdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, CoverVerdict::No { .. })
    }
}

/// Options for the covering test.
#[derive(Clone, Debug)]
pub struct CoverOptions {
    pub seed: u64,
    /// Random box probes for `k - d >= 3`.
    pub probes: usize,
    /// Largest grid used by the `k - d >= 3` sufficient test.
    pub max_grid_cells: u128,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self { seed: 0, probes: 2000, max_grid_cells: 1 << 22 }
    }
}

/// One-dimensional orbit data for coordinate `i`: points `-L_i(m) mod 1`.
fn orbit_values(spec: &SchemeSpec, i: usize, pts: &[Vec<i64>]) -> Result<Vec<CircleValue>> {
    let map = spec.linear_map(i);
    pts.par_iter().map(|m| CircleValue::new(map, m, true, spec.table())).collect()
}

/// Is every half-open arc of length `>= min arc` hit by the orbit? Returns
/// the missed arc and a start point when not.
fn cover_1d(spec: &SchemeSpec, part: &WindowPartition, i: usize, pts: &[Vec<i64>]) -> Result<Option<(Vec<f64>, usize, String)>> {
    let map = spec.linear_map(i);
    let table = spec.table();
    let mut vals = orbit_values(spec, i, pts)?;
    vals.par_sort_by(|a, b| a.value.total_cmp(&b.value));
    let (t_min, a_min) = part.arcs[i].iter().enumerate().fold((0, f64::INFINITY), |acc, (t, a)| if *a < acc.1 { (t, *a) } else { acc });
    let n = vals.len();
    let gap_at = |j: usize| -> f64 {
        if j + 1 < n {
            vals[j + 1].value - vals[j].value
        } else {
            vals[0].value + 1.0 - vals[n - 1].value
        }
    };
    // exact lengths of the arcs that are within tolerance of the shortest
    let mut tied: Vec<(usize, SymbolicReal)> = Vec::new();
    for (t, a) in part.arcs[i].iter().enumerate() {
        if *a <= a_min + 2.0 * TIE_TOL {
            let e = part.arc_exact(spec, i, t);
            if !tied.iter().any(|(_, x)| *x == e) {
                tied.push((t, e));
            }
        }
    }
    let mut worst: Option<(usize, f64, usize)> = None;
    for j in 0..n {
        let g = gap_at(j);
        if g > a_min + TIE_TOL {
            worst = Some((j, g, t_min));
            break;
        }
        if g >= a_min - TIE_TOL {
            let ge = &vals[(j + 1) % n].exact(map) - &vals[j].exact(map);
            let ge = if j + 1 < n { ge } else { &ge + &SymbolicReal::one() };
            for (t, e) in &tied {
                if ge.cmp_exact(e, table)? == Ordering::Greater {
                    worst = Some((j, g, *t));
                    break;
                }
            }
            if worst.is_some() {
                break;
            }
        }
    }
    Ok(worst.map(|(j, g, t)| {
        // shift so that the empty open gap sits just inside the missed arc
        let a = part.arcs[i][t];
        let cut = part.cuts[i][t].value;
        let start = crate::diophantine::frac(cut - vals[j].value - (g - a).max(0.0) / 2.0);
        (vec![start], t, format!("orbit gap {g:.9} exceeds arc {a:.9} in coordinate {i}"))
    }))
}

fn arg_min(v: &[f64]) -> usize {
    v.iter().enumerate().fold((0, f64::INFINITY), |acc, (t, a)| if *a < acc.1 { (t, *a) } else { acc }).0
}

/// Does the orbit of every start point under `search` meet every component?
///
/// Exact for block-diagonal schemes with a box search region and for one
/// internal dimension; a rectangle sweep for two; three-valued beyond.
pub fn covers_all_components(
    spec: &SchemeSpec,
    part: &WindowPartition,
    search: &SearchRegion,
    opts: &CoverOptions,
) -> Result<CoverVerdict> {
    let comps = part.component_count();
    let npts = search.len();
    let missed0: Vec<usize> = part.arcs.iter().map(|a| arg_min(a)).collect();
    if comps > npts {
        return Ok(CoverVerdict::No {
            start: vec![0.5; part.codim()],
            missed: missed0,
            reason: format!("{comps} components but only {npts} search points"),
        });
    }
    // block-diagonal with a box: the orbit is a product of per-row orbits
    if let (Some(rows), SearchRegion::Box { lo, hi }) = (spec.column_rows(), search) {
        let mut start = Vec::new();
        let mut missed = Vec::new();
        let mut reason = None;
        for (i, &m0) in missed0.iter().enumerate() {
            let cols: Vec<usize> = (0..spec.d()).filter(|&j| rows[j] == i).collect();
            let sub_lo: Vec<i64> = (0..spec.d()).map(|j| if cols.contains(&j) { lo[j] } else { 0 }).collect();
            let sub_hi: Vec<i64> = (0..spec.d()).map(|j| if cols.contains(&j) { hi[j] } else { 0 }).collect();
            let pts = box_points(&sub_lo, &sub_hi);
            match cover_1d(spec, part, i, &pts)? {
                None => {
                    start.push(0.5);
                    missed.push(m0);
                }
                Some((s, t, r)) => {
                    start.push(s[0]);
                    missed.push(t);
                    reason.get_or_insert(r);
                }
            }
        }
        return Ok(match reason {
            None => CoverVerdict::Yes,
            Some(reason) => CoverVerdict::No { start, missed, reason },
        });
    }
    let pts = search.points();
    match spec.codim() {
        1 => Ok(match cover_1d(spec, part, 0, &pts)? {
            None => CoverVerdict::Yes,
            Some((start, t, reason)) => CoverVerdict::No { start, missed: vec![t], reason },
        }),
        2 => cover_2d(spec, part, &pts),
        _ => cover_high(spec, part, &pts, opts),
    }
}

fn orbit_f64(spec: &SchemeSpec, pts: &[Vec<i64>]) -> Vec<Vec<f64>> {
    pts.par_iter()
        .map(|m| (0..spec.codim()).map(|i| crate::diophantine::frac(-spec.linear_map(i).value_f64(m))).collect())
        .collect()
}

/// Largest cyclic gap of sorted values, with its left end.
fn max_cyclic_gap(sorted: &[f64]) -> (f64, f64) {
    if sorted.is_empty() {
        return (1.0, 0.0);
    }
    let mut best = (sorted[0] + 1.0 - sorted[sorted.len() - 1], sorted[sorted.len() - 1]);
    for w in sorted.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    best
}

/// Sweep for an empty half-open `a x b` rectangle on the torus. Any empty
/// rectangle can be slid left until its left edge touches an orbit point, so
/// only windows `(p_x, p_x + a]` need checking.
fn cover_2d(spec: &SchemeSpec, part: &WindowPartition, pts: &[Vec<i64>]) -> Result<CoverVerdict> {
    let a = part.min_arc(0);
    let b = part.min_arc(1);
    let missed = vec![arg_min(&part.arcs[0]), arg_min(&part.arcs[1])];
    let mut orbit = orbit_f64(spec, pts);
    orbit.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let n = orbit.len();
    let eps = 1e-12;
    let found = (0..n).into_par_iter().find_map_first(|s| {
        let px = orbit[s][0];
        let mut ys: Vec<f64> = Vec::new();
        for t in 1..n {
            let q = &orbit[(s + t) % n];
            let dx = if s + t < n { q[0] - px } else { q[0] + 1.0 - px };
            if dx > a + eps {
                break;
            }
            if dx > eps {
                ys.push(q[1]);
            }
        }
        ys.sort_by(f64::total_cmp);
        let (g, y0) = max_cyclic_gap(&ys);
        (g > b + eps).then_some((px, y0, g))
    });
    Ok(match found {
        None => CoverVerdict::Yes,
        Some((px, y0, g)) => {
            let c0 = part.cuts[0][missed[0]].value;
            let c1 = part.cuts[1][missed[1]].value;
            CoverVerdict::No {
                start: vec![crate::diophantine::frac(c0 - px - eps), crate::diophantine::frac(c1 - y0 - (g - b) / 2.0)],
                missed,
                reason: format!("empty {a:.6} x {b:.6} rectangle next to orbit point x = {px:.9}"),
            }
        }
    })
}

fn cover_high(spec: &SchemeSpec, part: &WindowPartition, pts: &[Vec<i64>], opts: &CoverOptions) -> Result<CoverVerdict> {
    let r = spec.codim();
    let mins = part.min_arcs();
    let missed: Vec<usize> = part.arcs.iter().map(|a| arg_min(a)).collect();
    // necessary: each coordinate projection covers
    for i in 0..r {
        if let Some((s, t, reason)) = cover_1d(spec, part, i, pts)? {
            let mut start = vec![0.5; r];
            start[i] = s[0];
            let mut m = missed.clone();
            m[i] = t;
            return Ok(CoverVerdict::No { start, missed: m, reason });
        }
    }
    let orbit = orbit_f64(spec, pts);
    // sufficient: every cell of a grid fine enough that each component contains a cell
    let per_axis: Vec<u128> = mins.iter().map(|a| (2.0 / a).ceil() as u128).collect();
    let cells = per_axis.iter().fold(1u128, |acc, c| acc.saturating_mul(*c));
    if cells <= opts.max_grid_cells && cells <= pts.len() as u128 {
        let mut hit = vec![false; cells as usize];
        for p in &orbit {
            let idx = p.iter().zip(&per_axis).fold(0u128, |acc, (x, c)| acc * c + ((x * *c as f64) as u128).min(c - 1));
            hit[idx as usize] = true;
        }
        if hit.iter().all(|h| *h) {
            return Ok(CoverVerdict::Yes);
        }
    }
    // falsification: random boxes of the smallest component size
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.probes {
        let corner: Vec<f64> = (0..r).map(|_| rng.gen::<f64>()).collect();
        let empty = !orbit.iter().any(|p| {
            p.iter().zip(&corner).zip(&mins).all(|((x, c), a)| crate::diophantine::frac(x - c) < *a)
        });
        if empty {
            let start: Vec<f64> = (0..r)
                .map(|i| crate::diophantine::frac(part.cuts[i][missed[i]].value - corner[i]))
                .collect();
            return Ok(CoverVerdict::No {
                start,
                missed,
                reason: "random probe found an empty component-sized box".into(),
            });
        }
    }
    Ok(CoverVerdict::Unknown {
        reason: format!("no empty box in {} probes and the grid test was inconclusive", opts.probes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SymbolTable;
    use crate::scheme::{build_theorem15_witness, Shift};

    fn fibonacci() -> SchemeSpec {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        let inv = &phi - &SymbolicReal::one();
        SchemeSpec::new(2, 1, vec![vec![inv]], Shift::Default, WindowKind::Cubical, t).unwrap()
    }

    #[test]
    fn fibonacci_cuts() {
        let s = fibonacci();
        let p = window_partition(&s, &Shape::rect(vec![0], vec![3]).unwrap()).unwrap();
        let v: Vec<f64> = p.cuts[0].iter().map(|c| c.value).collect();
        let want = [0.0, 0.236_068, 0.618_034, 0.854_102];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!((p.min_arc(0) - 0.145_898).abs() < 1e-6);
        let c = p.classify(&s, &[0]).unwrap();
        assert_eq!(c.arcs, vec![1]);
    }

    #[test]
    fn fibonacci_cover_examples() {
        let s = fibonacci();
        let p = window_partition(&s, &Shape::rect(vec![0], vec![3]).unwrap()).unwrap();
        let opts = CoverOptions::default();
        let yes = covers_all_components(&s, &p, &SearchRegion::Box { lo: vec![-8], hi: vec![8] }, &opts).unwrap();
        assert!(yes.is_yes());
        let no = covers_all_components(&s, &p, &SearchRegion::Points(vec![vec![-1], vec![0], vec![1]]), &opts).unwrap();
        assert!(no.is_no(), "{no:?}");
        let g = orbit_gaps(&s, &Shape::rect(vec![-5], vec![5]).unwrap()).unwrap();
        assert!((g[0] - 0.145_898).abs() < 1e-6);
        let g = orbit_gaps(&s, &Shape::rect(vec![-8], vec![8]).unwrap()).unwrap();
        assert!((g[0] - 0.090_170).abs() < 1e-6);
    }

    #[test]
    fn block_partition_counts() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        let r2 = t.sqrt(2);
        let s = build_theorem15_witness(vec![phi, r2], t).unwrap();
        let p = window_partition(&s, &Shape::rect(vec![0, 0], vec![2, 3]).unwrap()).unwrap();
        assert_eq!(p.cuts[0].len(), 3);
        assert_eq!(p.cuts[1].len(), 4);
        assert_eq!(p.component_count(), 12);
    }

    #[test]
    fn oracle_matches_classification_off_origin() {
        let s = fibonacci();
        let shape = Shape::rect(vec![2], vec![4]).unwrap();
        let labels: Vec<Vec<i64>> = (0..40).map(|n| vec![n]).collect();
        let p = window_partition(&s, &shape).unwrap();
        assert_eq!(patch_oracle(&s, &shape, &labels).unwrap(), classify_labels(&s, &p, &labels).unwrap());
    }
}
