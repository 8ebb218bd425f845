//! Cut-and-project schemes `E = {(x, L(x))}` with cubical or canonical windows.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::for_each_in_box;
use crate::error::{Error, Result};
use crate::exact::{kernel_mod_one, AffineForm, SymbolKind, SymbolTable, SymbolicReal};
use crate::fm;
use crate::shapes::{box_points, Shape};

/// Radius of the label box used for regularity probes at construction time.
pub const DEFAULT_PROBE_RADIUS: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Cubical,
    Canonical,
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Cubical => "cubical",
            WindowKind::Canonical => "canonical",
        })
    }
}

impl std::str::FromStr for WindowKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cubical" => Ok(WindowKind::Cubical),
            "canonical" => Ok(WindowKind::Canonical),
            other => Err(Error::Parse(format!("unknown window kind `{other}`"))),
        }
    }
}

/// A point of the cut-and-project set, identified by its integer lift
/// `(label, lift)` in `Z^d x Z^(k-d)`; `internal` is `rho*(lift + s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SitePoint {
    pub label: Vec<i64>,
    pub lift: Vec<i64>,
    pub internal: Vec<f64>,
}

/// Validated scheme data.
#[derive(Clone, Debug)]
pub struct SchemeSpec {
    k: usize,
    d: usize,
    table: SymbolTable,
    forms: Vec<Vec<SymbolicReal>>,
    s1: Vec<SymbolicReal>,
    s2: Vec<SymbolicReal>,
    window: WindowKind,
    /// `w_i(n) = s2_i - L_i(n + s1)` as affine maps of the label.
    internal_maps: Vec<AffineForm>,
    linear_maps: Vec<AffineForm>,
}

/// Shift argument of [`SchemeSpec::new`].
#[derive(Clone, Debug)]
pub enum Shift {
    /// `(0, 1/2, ..., 1/2)`, perturbed by a fresh symbol if irregular.
    Default,
    Given { s1: Vec<SymbolicReal>, s2: Vec<SymbolicReal> },
}

impl SchemeSpec {
    pub fn new(
        k: usize,
        d: usize,
        forms: Vec<Vec<SymbolicReal>>,
        shift: Shift,
        window: WindowKind,
        table: SymbolTable,
    ) -> Result<Self> {
        Self::with_probe(k, d, forms, shift, window, table, DEFAULT_PROBE_RADIUS)
    }

    pub fn with_probe(
        k: usize,
        d: usize,
        forms: Vec<Vec<SymbolicReal>>,
        shift: Shift,
        window: WindowKind,
        mut table: SymbolTable,
        probe_radius: i64,
    ) -> Result<Self> {
        if d < 1 || k <= d {
            return Err(Error::Input(format!("need k > d >= 1, got k={k}, d={d}")));
        }
        if forms.len() != k - d || forms.iter().any(|f| f.len() != d) {
            return Err(Error::Input(format!("forms must be a {}x{d} matrix", k - d)));
        }
        check_rational_dependence(&forms, d)?;
        let uses_free = forms.iter().flatten().flat_map(|f| f.symbols()).any(|s| table.get(s).kind == SymbolKind::Free);
        if uses_free {
            log::warn!("free float symbols in the forms are treated as independent irrationals; kernels are only as exact as that assumption");
        }
        let (s1, s2, default) = match shift {
            Shift::Default => (vec![SymbolicReal::zero(); d], vec![SymbolicReal::ratio(1, 2); k - d], true),
            Shift::Given { s1, s2 } => {
                if s1.len() != d || s2.len() != k - d {
                    return Err(Error::Input("shift has the wrong length".into()));
                }
                (s1, s2, false)
            }
        };
        let mut spec = Self::assemble(k, d, table.clone(), forms.clone(), s1.clone(), s2.clone(), window)?;
        if let Err(e) = spec.check_regular(probe_radius) {
            if !default {
                return Err(e);
            }
            let sigma = table.declare_fresh("sigma", 1e-3 * std::f64::consts::E);
            log::info!("default shift is irregular ({e}); perturbing by `{}`", table.get(sigma).name);
            let s2: Vec<SymbolicReal> = s2.iter().map(|v| v + &SymbolicReal::symbol(sigma)).collect();
            spec = Self::assemble(k, d, table, forms, s1, s2, window)?;
            spec.check_regular(probe_radius)?;
        }
        if window == WindowKind::Canonical {
            CanonicalConverter::new(&spec)?;
        }
        Ok(spec)
    }

    fn assemble(
        k: usize,
        d: usize,
        table: SymbolTable,
        forms: Vec<Vec<SymbolicReal>>,
        s1: Vec<SymbolicReal>,
        s2: Vec<SymbolicReal>,
        window: WindowKind,
    ) -> Result<Self> {
        let mut internal_maps = Vec::new();
        let mut linear_maps = Vec::new();
        for (i, row) in forms.iter().enumerate() {
            let mut c = s2[i].clone();
            for (a, s) in row.iter().zip(&s1) {
                c = &c - &mul(a, s)?;
            }
            let neg: Vec<SymbolicReal> = row.iter().map(|a| -a).collect();
            internal_maps.push(AffineForm::new(c, neg, &table)?);
            linear_maps.push(AffineForm::linear(row.clone(), &table)?);
        }
        Ok(Self { k, d, table, forms, s1, s2, window, internal_maps, linear_maps })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn codim(&self) -> usize {
        self.k - self.d
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn forms(&self) -> &[Vec<SymbolicReal>] {
        &self.forms
    }

    pub fn shift(&self) -> (&[SymbolicReal], &[SymbolicReal]) {
        (&self.s1, &self.s2)
    }

    pub fn window(&self) -> WindowKind {
        self.window
    }

    /// Same data with another window.
    pub fn with_window(&self, window: WindowKind) -> Result<Self> {
        if window == WindowKind::Canonical {
            CanonicalConverter::new(self)?;
        }
        Ok(Self { window, ..self.clone() })
    }

    /// `L_i` as an affine map of integer vectors.
    pub fn linear_map(&self, i: usize) -> &AffineForm {
        &self.linear_maps[i]
    }

    pub fn forms_f64(&self) -> Vec<Vec<f64>> {
        self.forms.iter().map(|r| r.iter().map(|a| a.eval(&self.table)).collect()).collect()
    }

    /// Is the form matrix block diagonal with one nonzero per column, and
    /// which row owns each column?
    pub fn column_rows(&self) -> Option<Vec<usize>> {
        (0..self.d)
            .map(|j| {
                let rows: Vec<usize> = (0..self.codim()).filter(|&i| !self.forms[i][j].is_zero()).collect();
                match rows.as_slice() {
                    [r] => Some(*r),
                    _ => None,
                }
            })
            .collect()
    }

    fn check_label(&self, label: &[i64]) -> Result<()> {
        if label.len() != self.d {
            return Err(Error::Input(format!("label of length {} for d={}", label.len(), self.d)));
        }
        Ok(())
    }

    /// `(lift, w)` with `w = lift + s2 - L(label + s1)` in `[0, 1)^(k-d)`.
    pub fn lift(&self, label: &[i64]) -> Result<(Vec<i64>, Vec<f64>)> {
        self.check_label(label)?;
        let mut lift = Vec::with_capacity(self.codim());
        let mut w = Vec::with_capacity(self.codim());
        for (i, m) in self.internal_maps.iter().enumerate() {
            if m.is_integer_at(label) {
                return Err(Error::Irregular { label: label.to_vec(), coordinate: i });
            }
            let (fl, fr) = m.split_at(label, &self.table)?;
            lift.push(-fl);
            w.push(fr);
        }
        Ok((lift, w))
    }

    /// Internal coordinate of a label for the cubical window.
    pub fn internal_coord(&self, label: &[i64]) -> Result<Vec<f64>> {
        Ok(self.lift(label)?.1)
    }

    /// Exact internal coordinate `frac(s2_i - L_i(label + s1))` as symbolic values.
    pub fn internal_coord_exact(&self, label: &[i64]) -> Result<Vec<SymbolicReal>> {
        let (lift, _) = self.lift(label)?;
        Ok(self
            .internal_maps
            .iter()
            .zip(&lift)
            .map(|(m, l)| &m.symbolic_at(label) + &SymbolicReal::from_integer(*l))
            .collect())
    }

    /// Regularity of the shift over the label box `[-r, r]^d`.
    pub fn check_regular(&self, radius: i64) -> Result<()> {
        let mut bad = None;
        for_each_in_box(&vec![radius; self.d], |n| {
            for (i, m) in self.internal_maps.iter().enumerate() {
                if m.is_integer_at(n) {
                    bad = Some(Error::Irregular { label: n.to_vec(), coordinate: i });
                    return false;
                }
            }
            true
        });
        bad.map_or(Ok(()), Err)
    }

    /// Point of `E` carrying the label, `(n + s1, L(n + s1))`.
    pub fn embed(&self, label: &[i64]) -> Vec<f64> {
        let x: Vec<f64> = label.iter().zip(&self.s1).map(|(n, s)| *n as f64 + s.eval(&self.table)).collect();
        let forms = self.forms_f64();
        let mut out = x.clone();
        out.extend(forms.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()));
        out
    }

    fn cubical_points(&self, labels: &[Vec<i64>]) -> Result<Vec<SitePoint>> {
        labels
            .par_iter()
            .map(|l| {
                let (lift, internal) = self.lift(l)?;
                Ok(SitePoint { label: l.clone(), lift, internal })
            })
            .collect()
    }

    /// Points whose labels lie in `region`, ordered by label (then lift).
    pub fn generate(&self, region: &Shape) -> Result<Vec<SitePoint>> {
        if region.dim() != self.d {
            return Err(Error::Input(format!("region of dimension {} for d={}", region.dim(), self.d)));
        }
        let labels = region.integer_points();
        match self.window {
            WindowKind::Cubical => self.cubical_points(&labels),
            WindowKind::Canonical => {
                let conv = CanonicalConverter::new(self)?;
                if labels.is_empty() {
                    return Ok(Vec::new());
                }
                let lo: Vec<i64> = (0..self.d).map(|j| labels.iter().map(|l| l[j]).min().unwrap() - 1).collect();
                let hi: Vec<i64> = (0..self.d).map(|j| labels.iter().map(|l| l[j]).max().unwrap()).collect();
                let cubical = self.cubical_points(&box_points(&lo, &hi))?;
                let wanted: BTreeSet<&Vec<i64>> = labels.iter().collect();
                Ok(conv
                    .forward(&cubical, &lo, &hi)?
                    .into_iter()
                    .filter(|p| wanted.contains(&p.label))
                    .collect())
            }
        }
    }

    /// Points over the label box `lo..=hi`.
    pub fn generate_box(&self, lo: &[i64], hi: &[i64]) -> Result<Vec<SitePoint>> {
        let shape = Shape::rect(lo.to_vec(), hi.iter().map(|h| h + 1).collect())?;
        // closed rect [lo, hi+1] holds one extra layer; drop it
        Ok(self
            .generate(&shape)?
            .into_iter()
            .filter(|p| p.label.iter().zip(hi).all(|(a, b)| a <= b))
            .collect())
    }
}

pub(crate) fn mul(a: &SymbolicReal, s: &SymbolicReal) -> Result<SymbolicReal> {
    if s.is_rational() {
        return Ok(a.scale(s.rational_part()));
    }
    if a.is_rational() {
        return Ok(s.scale(a.rational_part()));
    }
    Err(Error::Unsupported(
        "unsupported: products of two irrational quantities (form entry times shift) are outside the linear symbolic model".into(),
    ))
}

/// Rejects `(n, m)` with `m != 0` and `sum_i m_i L_i(x) + n.x` integer valued
/// on `Z^d`, then rejects nonzero periods `lambda` with `L(lambda)` integral.
fn check_rational_dependence(forms: &[Vec<SymbolicReal>], d: usize) -> Result<()> {
    let r = forms.len();
    let mut m_lattice: Option<crate::exact::IntegerLattice> = None;
    for j in 0..d {
        let column: Vec<SymbolicReal> = forms.iter().map(|row| row[j].clone()).collect();
        let s = kernel_mod_one(&column, r)?;
        m_lattice = Some(match m_lattice {
            None => s,
            Some(acc) => acc.intersect(&s)?,
        });
    }
    if let Some(m) = m_lattice.as_ref().and_then(|l| l.basis().first()) {
        let n: Vec<i64> = (0..d)
            .map(|j| {
                let mut v = SymbolicReal::zero();
                for (i, mi) in m.iter().enumerate() {
                    v = &v + &forms[i][j].scale_int(*mi);
                }
                -v.rational_part().to_integer().to_i64().unwrap_or(0)
            })
            .collect();
        return Err(Error::RationalDependence(format!(
            "(n, m) = ({n:?}, {m:?}) makes sum m_i L_i(x) + n.x integer valued"
        )));
    }
    let mut periods: Option<crate::exact::IntegerLattice> = None;
    for row in forms {
        let s = kernel_mod_one(row, d)?;
        periods = Some(match periods {
            None => s,
            Some(acc) => acc.intersect(&s)?,
        });
    }
    if let Some(p) = periods.as_ref().and_then(|l| l.basis().first()) {
        return Err(Error::RationalDependence(format!(
            "label period {p:?}: every form is integral there, so the set is periodic"
        )));
    }
    Ok(())
}

/// `2d`-to-`d` scheme with `L_i(x) = alpha_i x_i`.
pub fn build_theorem15_witness(alphas: Vec<SymbolicReal>, table: SymbolTable) -> Result<SchemeSpec> {
    let blocks = alphas.into_iter().map(|a| vec![a]).collect();
    block_diagonal(blocks, table)
}

/// Block-diagonal forms `L_i(x) = sum_j x_{M_i + j} alpha_ij`, one block per row.
pub fn block_diagonal(blocks: Vec<Vec<SymbolicReal>>, table: SymbolTable) -> Result<SchemeSpec> {
    if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::Input("every block needs at least one coefficient".into()));
    }
    for (i, b) in blocks.iter().enumerate() {
        if let Some(a) = b.iter().find(|a| a.is_rational()) {
            return Err(Error::RationalDependence(format!(
                "block {i} has the rational coefficient {}",
                a.fmt_with(&table)
            )));
        }
    }
    let d: usize = blocks.iter().map(|b| b.len()).sum();
    let mut forms = Vec::new();
    let mut offset = 0;
    for b in &blocks {
        let mut row = vec![SymbolicReal::zero(); d];
        for (j, a) in b.iter().enumerate() {
            row[offset + j] = a.clone();
        }
        offset += b.len();
        forms.push(row);
    }
    SchemeSpec::new(d + blocks.len(), d, forms, Shift::Default, WindowKind::Cubical, table)
}

/// Transfers point sets between the cubical and canonical windows of one
/// scheme, when every column of the form matrix has a single nonzero entry.
#[derive(Clone, Debug)]
pub struct CanonicalConverter {
    spec: SchemeSpec,
    column_rows: Vec<Option<usize>>,
}

impl CanonicalConverter {
    pub fn new(spec: &SchemeSpec) -> Result<Self> {
        let mut column_rows = Vec::with_capacity(spec.d);
        for j in 0..spec.d {
            let rows: Vec<usize> = (0..spec.codim()).filter(|&i| !spec.forms[i][j].is_zero()).collect();
            if rows.len() > 1 {
                return Err(Error::Unsupported(format!(
                    "unsupported window conversion: column {} of the form matrix has {} nonzero entries, so rho*(e_{}) is not on a coordinate line",
                    j + 1,
                    rows.len(),
                    j + 1
                )));
            }
            column_rows.push(rows.first().copied());
        }
        // one label step must cross W2 \ W1, so each row's |coefficients| sum to at most 1
        for (i, row) in spec.forms.iter().enumerate() {
            let mut total = SymbolicReal::zero();
            for a in row {
                total = match a.sign(&spec.table)? {
                    std::cmp::Ordering::Less => &total - a,
                    _ => &total + a,
                };
            }
            if total.cmp_exact(&SymbolicReal::one(), &spec.table)? == std::cmp::Ordering::Greater {
                return Err(Error::Unsupported(format!(
                    "unsupported window conversion: row {} has coefficient sum |L_{}| = {:.6} > 1, so single label steps cannot reach the whole canonical window",
                    i + 1,
                    i + 1,
                    total.eval(&spec.table)
                )));
            }
        }
        Ok(Self { spec: Self::cubical(spec), column_rows })
    }

    fn cubical(spec: &SchemeSpec) -> SchemeSpec {
        SchemeSpec { window: WindowKind::Cubical, ..spec.clone() }
    }

    /// Label shrink between input and output regions, in sup norm.
    pub fn margin(&self) -> i64 {
        1
    }

    /// `I_y`: columns `i` with `y + v_i` outside the cubical set.
    fn escaping_columns(&self, p: &SitePoint) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, row) in self.column_rows.iter().enumerate() {
            let Some(row) = row else { continue };
            let mut next = p.label.clone();
            next[i] += 1;
            let (lift, _) = self.spec.lift(&next)?;
            if lift[*row] != p.lift[*row] {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Canonical points `y + v_I`, `y` cubical with labels in `lo..=hi`, `I` a
    /// subset of `I_y`. Complete for output labels in `lo+1..=hi`.
    pub fn forward(&self, cubical: &[SitePoint], lo: &[i64], hi: &[i64]) -> Result<Vec<SitePoint>> {
        let forms = self.spec.forms_f64();
        let mut out: BTreeSet<(Vec<i64>, Vec<i64>)> = BTreeSet::new();
        let mut internal: std::collections::BTreeMap<(Vec<i64>, Vec<i64>), Vec<f64>> = Default::default();
        for p in cubical {
            if p.label.iter().zip(lo.iter().zip(hi)).any(|(x, (l, h))| x < l || x > h) {
                continue;
            }
            let esc = self.escaping_columns(p)?;
            for mask in 0u64..(1u64 << esc.len()) {
                let mut label = p.label.clone();
                let mut w = p.internal.clone();
                for (b, &i) in esc.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        label[i] += 1;
                        for (r, wr) in w.iter_mut().enumerate() {
                            *wr -= forms[r][i];
                        }
                    }
                }
                if label.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| *x > *l && x <= h) {
                    let key = (label, p.lift.clone());
                    internal.entry(key.clone()).or_insert(w);
                    out.insert(key);
                }
            }
        }
        Ok(out
            .into_iter()
            .map(|key| {
                let w = internal.remove(&key).unwrap_or_default();
                SitePoint { label: key.0, lift: key.1, internal: w }
            })
            .collect())
    }

    /// Cubical points recovered from canonical ones: `y` is kept when
    /// `y + v_P` and `y + v_N` are canonical for every row, where `P` (`N`)
    /// are the columns of that row with positive (negative) coefficient.
    /// With one column per row this is `{y : y + v_i in Y2 for all i}`.
    /// Complete for labels in `lo..=hi-1`.
    pub fn backward(&self, canonical: &[SitePoint], lo: &[i64], hi: &[i64]) -> Vec<SitePoint> {
        let present: BTreeSet<(&[i64], &[i64])> = canonical.iter().map(|p| (&p.label[..], &p.lift[..])).collect();
        let mut steps: Vec<Vec<usize>> = Vec::new();
        for r in 0..self.spec.codim() {
            for positive in [true, false] {
                let cols: Vec<usize> = (0..self.spec.d)
                    .filter(|&j| self.column_rows[j] == Some(r))
                    .filter(|&j| (self.spec.forms[r][j].eval(&self.spec.table) > 0.0) == positive)
                    .collect();
                if !cols.is_empty() {
                    steps.push(cols);
                }
            }
        }
        canonical
            .iter()
            .filter(|p| p.label.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| x >= l && x < h))
            .filter(|p| {
                steps.iter().all(|cols| {
                    let mut next = p.label.clone();
                    for &j in cols {
                        next[j] += 1;
                    }
                    present.contains(&(&next[..], &p.lift[..]))
                })
            })
            .cloned()
            .collect()
    }
}

/// Direct canonical acceptance: `lift + s2 - L(label + s1)` lies in
/// `rho*([0,1]^k) = [0,1]^(k-d) - L([0,1]^d)`, decided by linear programming.
pub fn canonical_accepts(forms: &[Vec<f64>], z: &[f64], tol: f64) -> bool {
    let d = forms.first().map_or(0, |r| r.len());
    let mut cons: Vec<fm::Constraint> = Vec::new();
    for j in 0..d {
        let mut a = vec![0.0; d];
        a[j] = 1.0;
        cons.push((a.clone(), 1.0));
        a[j] = -1.0;
        cons.push((a, 0.0));
    }
    // 0 <= z_i + L_i(u) <= 1
    for (row, zi) in forms.iter().zip(z) {
        cons.push((row.clone(), 1.0 - zi));
        cons.push((row.iter().map(|x| -x).collect(), *zi));
    }
    if d == 0 {
        return z.iter().all(|v| (0.0..=1.0).contains(v));
    }
    fm::feasible(cons, d, tol)
}

/// Every canonical point with label in `lo..=hi`, found without any window
/// conversion: for each label, scan the lifts allowed by the window's
/// bounding box and test membership directly.
pub fn canonical_direct(spec: &SchemeSpec, lo: &[i64], hi: &[i64]) -> Result<Vec<SitePoint>> {
    let forms = spec.forms_f64();
    let (s1, s2) = spec.shift();
    let s1: Vec<f64> = s1.iter().map(|v| v.eval(spec.table())).collect();
    let s2: Vec<f64> = s2.iter().map(|v| v.eval(spec.table())).collect();
    let labels = box_points(lo, hi);
    let out: Vec<Vec<SitePoint>> = labels
        .par_iter()
        .map(|label| {
            let x: Vec<f64> = label.iter().zip(&s1).map(|(n, s)| *n as f64 + s).collect();
            let base: Vec<f64> = forms
                .iter()
                .zip(&s2)
                .map(|(row, s)| s - row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
                .collect();
            // z_i = lift_i + base_i must lie in [-pos_i, 1 + neg_i]
            let ranges: Vec<(i64, i64)> = forms
                .iter()
                .zip(&base)
                .map(|(row, b)| {
                    let pos: f64 = row.iter().filter(|a| **a > 0.0).sum();
                    let neg: f64 = -row.iter().filter(|a| **a < 0.0).sum::<f64>();
                    ((-pos - b).ceil() as i64 - 1, (1.0 + neg - b).floor() as i64 + 1)
                })
                .collect();
            let lo2: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            let hi2: Vec<i64> = ranges.iter().map(|r| r.1).collect();
            box_points(&lo2, &hi2)
                .into_iter()
                .filter_map(|lift| {
                    let z: Vec<f64> = lift.iter().zip(&base).map(|(l, b)| *l as f64 + b).collect();
                    canonical_accepts(&forms, &z, 1e-12).then(|| SitePoint { label: label.clone(), lift, internal: z })
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fibonacci() -> SchemeSpec {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        // 1/phi = phi - 1
        let inv = &phi - &SymbolicReal::one();
        SchemeSpec::new(2, 1, vec![vec![inv]], Shift::Default, WindowKind::Cubical, t).unwrap()
    }

    #[test]
    fn fibonacci_internal_coordinates() {
        let s = fibonacci();
        let want = [0.5, 0.881_966_0, 0.263_932_0, 0.645_898_0, 0.027_864_0];
        let pts = s.generate(&Shape::rect(vec![0], vec![4]).unwrap()).unwrap();
        assert_eq!(pts.len(), 5);
        for (p, w) in pts.iter().zip(want) {
            assert!((p.internal[0] - w).abs() < 1e-6, "{p:?}");
        }
    }

    #[test]
    fn rational_forms_are_rejected() {
        let t = SymbolTable::new();
        let forms = vec![vec![SymbolicReal::ratio(1, 2), SymbolicReal::ratio(1, 3)]];
        let err = SchemeSpec::new(3, 2, forms, Shift::Default, WindowKind::Cubical, t).unwrap_err();
        assert!(matches!(err, Error::RationalDependence(_)), "{err}");
    }

    #[test]
    fn irregular_default_shift_gets_perturbed() {
        // L_1(1, 1) = 1/2 puts the default shift on the boundary
        let mut t = SymbolTable::new();
        let r2 = t.sqrt(2);
        let r3 = t.sqrt(3);
        let r5 = t.sqrt(5);
        let forms = vec![vec![r2.clone(), &SymbolicReal::ratio(1, 2) - &r2], vec![r3, r5]];
        let s = SchemeSpec::new(4, 2, forms.clone(), Shift::Default, WindowKind::Cubical, t.clone()).unwrap();
        assert_eq!(s.table().len(), t.len() + 1);
        assert!(s.internal_coord(&[1, 1]).is_ok());
        let given = Shift::Given { s1: vec![SymbolicReal::zero(); 2], s2: vec![SymbolicReal::ratio(1, 2); 2] };
        let err = SchemeSpec::new(4, 2, forms, given, WindowKind::Cubical, t).unwrap_err();
        assert!(matches!(err, Error::Irregular { .. }), "{err}");
    }

    #[test]
    fn canonical_matches_direct_on_fibonacci() {
        let s = fibonacci().with_window(WindowKind::Canonical).unwrap();
        let conv = CanonicalConverter::new(&s).unwrap();
        let cub = s.with_window(WindowKind::Cubical).unwrap().generate_box(&[-30], &[30]).unwrap();
        let fwd = conv.forward(&cub, &[-30], &[30]).unwrap();
        let direct = canonical_direct(&s, &[-29], &[30]).unwrap();
        let key = |v: &[SitePoint]| v.iter().map(|p| (p.label.clone(), p.lift.clone())).collect::<Vec<_>>();
        assert_eq!(key(&fwd), key(&direct));
        let back = conv.backward(&direct, &[-29], &[30]);
        let want: Vec<_> = key(&cub).into_iter().filter(|(l, _)| l[0] >= -29 && l[0] < 30).collect();
        assert_eq!(key(&back), want);
    }

    #[test]
    fn coupled_column_is_unsupported() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        let r3 = t.sqrt(3);
        let r2 = t.sqrt(2);
        let forms = vec![vec![phi, SymbolicReal::zero()], vec![r3, r2]];
        let err = SchemeSpec::new(4, 2, forms, Shift::Default, WindowKind::Canonical, t).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
