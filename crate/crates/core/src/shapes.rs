//! Shapes used as patch supports: aligned integer rectangles, integer polytopes,
//! sheared cubes `A [-N, N]^d`, and their dilations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::diophantine::{determinant, sl_matrices, IntMatrix};
use crate::error::{Error, Result};
use crate::fm;

/// Integer-vertex convex polytope with its facet inequalities `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<(Vec<i64>, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Rect { lo: Vec<i64>, hi: Vec<i64> },
    Polytope(Polytope),
    Sheared { a: IntMatrix, n: i64 },
    Scaled { base: Box<Shape>, factor: BigRational },
}

fn affine_rank(points: &[&Vec<i64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    crate::exact::hermite_normal_form(rows, points[0].len()).len()
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl Polytope {
    /// Convex hull of integer points; the hull must have non-empty interior.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or_else(|| Error::Degenerate("polytope without points".into()))?;
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Input("polytope points must share a positive dimension".into()));
        }
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let refs: Vec<&Vec<i64>> = pts.iter().collect();
        if affine_rank(&refs) < dim {
            return Err(Error::Degenerate("polytope has empty interior".into()));
        }
        let mut facets: Vec<(Vec<i64>, i64)> = Vec::new();
        let mut subset: Vec<usize> = (0..dim).collect();
        loop {
            if let Some(f) = Self::facet_through(&pts, &subset) {
                if !facets.contains(&f) {
                    facets.push(f);
                }
            }
            // next combination
            let mut i = dim;
            loop {
                if i == 0 {
                    facets.sort();
                    let vertices: Vec<Vec<i64>> = pts
                        .iter()
                        .filter(|p| Self::is_vertex(p, &facets, dim))
                        .cloned()
                        .collect();
                    return Ok(Self { dim, vertices, facets });
                }
                i -= 1;
                if subset[i] < pts.len() - dim + i {
                    subset[i] += 1;
                    for j in i + 1..dim {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn facet_through(pts: &[Vec<i64>], subset: &[usize]) -> Option<(Vec<i64>, i64)> {
        let dim = pts[0].len();
        let p0 = &pts[subset[0]];
        let diffs: Vec<Vec<i64>> = subset[1..].iter().map(|&i| pts[i].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        let mut normal: Vec<i64> = (0..dim)
            .map(|j| {
                let minor: IntMatrix = diffs.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                (sign * determinant(&minor)) as i64
            })
            .collect();
        let g = normal.iter().fold(0i64, |g, x| g.gcd(x));
        if g == 0 {
            return None;
        }
        normal.iter_mut().for_each(|x| *x /= g);
        let b = dot(&normal, p0);
        let (le, ge) = pts.iter().fold((true, true), |(le, ge), p| {
            let v = dot(&normal, p);
            (le && v <= b, ge && v >= b)
        });
        match (le, ge) {
            (true, _) => Some((normal, b as i64)),
            (false, true) => Some((normal.iter().map(|x| -x).collect(), -b as i64)),
            _ => None,
        }
    }

    fn is_vertex(p: &[i64], facets: &[(Vec<i64>, i64)], dim: usize) -> bool {
        let rows: Vec<Vec<BigInt>> = facets
            .iter()
            .filter(|(n, b)| dot(n, p) == *b as i128)
            .map(|(n, _)| n.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        crate::exact::hermite_normal_form(rows, dim).len() == dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[(Vec<i64>, i64)] {
        &self.facets
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|(n, b)| dot(n, x) <= *b as i128)
    }

    /// Membership in `factor * self`, `factor = num / den` with `den > 0`.
    fn contains_scaled(&self, x: &[i64], num: i128, den: i128) -> bool {
        self.facets.iter().all(|(n, b)| dot(n, x) * den <= *b as i128 * num)
    }

    fn vertices_on(&self, facet: &(Vec<i64>, i64), among: &[usize]) -> Vec<usize> {
        among.iter().copied().filter(|&i| dot(&facet.0, &self.vertices[i]) == facet.1 as i128).collect()
    }

    /// Pulling triangulation of the face spanned by `face` (vertex indices).
    fn triangulate(&self, face: &[usize], face_dim: usize) -> Vec<Vec<usize>> {
        if face_dim == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut subfaces: Vec<Vec<usize>> = Vec::new();
        for f in &self.facets {
            let sub = self.vertices_on(f, face);
            if sub.contains(&apex) || sub.is_empty() || sub.len() == face.len() {
                continue;
            }
            let refs: Vec<&Vec<i64>> = sub.iter().map(|&i| &self.vertices[i]).collect();
            if affine_rank(&refs) == face_dim - 1 && !subfaces.contains(&sub) {
                subfaces.push(sub);
            }
        }
        let mut out = Vec::new();
        for sub in subfaces {
            for mut s in self.triangulate(&sub, face_dim - 1) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }

    /// Exact volume by pulling triangulation.
    pub fn volume(&self) -> BigRational {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut total = BigInt::zero();
        for simplex in self.triangulate(&all, self.dim) {
            let base = &self.vertices[simplex[0]];
            let m: IntMatrix = simplex[1..]
                .iter()
                .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            total += BigInt::from(determinant(&m)).abs();
        }
        BigRational::new(total, factorial(self.dim))
    }

    /// Euclidean inradius via the Chebyshev-centre linear program.
    pub fn inradius(&self) -> Result<f64> {
        let d = self.dim;
        let cons: Vec<fm::Constraint> = self
            .facets
            .iter()
            .map(|(n, b)| {
                let mut a: Vec<f64> = n.iter().map(|&x| x as f64).collect();
                a.push(a.iter().map(|x| x * x).sum::<f64>().sqrt());
                (a, *b as f64)
            })
            .collect();
        fm::maximize_last(cons, d + 1).ok_or_else(|| Error::Degenerate("inradius program has no solution".into()))
    }

    fn bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.dim).map(|j| self.vertices.iter().map(|v| v[j]).min().unwrap_or(0)).collect();
        let hi = (0..self.dim).map(|j| self.vertices.iter().map(|v| v[j]).max().unwrap_or(0)).collect();
        (lo, hi)
    }
}

fn ratio_parts(q: &BigRational) -> Result<(i128, i128)> {
    match (q.numer().to_i128(), q.denom().to_i128()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::Input("dilation factor too large".into())),
    }
}

fn floor_div(a: i128, b: i128) -> i64 {
    a.div_euclid(b) as i64
}

fn ceil_div(a: i128, b: i128) -> i64 {
    -((-a).div_euclid(b)) as i64
}

/// Lexicographic enumeration of the integer box `lo..=hi`.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x = lo.to_vec();
    loop {
        out.push(x.clone());
        let mut i = x.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

impl Shape {
    pub fn rect(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Input("rectangle corners must share a positive dimension".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::Degenerate("rectangle needs lo < hi in every coordinate".into()));
        }
        Ok(Shape::Rect { lo, hi })
    }

    pub fn polytope(points: Vec<Vec<i64>>) -> Result<Self> {
        Ok(Shape::Polytope(Polytope::new(points)?))
    }

    pub fn sheared(a: IntMatrix, n: i64) -> Result<Self> {
        let d = a.len();
        if d == 0 || a.iter().any(|r| r.len() != d) {
            return Err(Error::Input("shear matrix must be square".into()));
        }
        if determinant(&a) != 1 {
            return Err(Error::Input("shear matrix must have determinant 1".into()));
        }
        if n < 1 {
            return Err(Error::Degenerate("sheared cube needs N >= 1".into()));
        }
        Ok(Shape::Sheared { a, n })
    }

    pub fn scaled(self, factor: BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Degenerate("dilation factor must be positive".into()));
        }
        Ok(match self {
            Shape::Scaled { base, factor: f } => Shape::Scaled { base, factor: f * factor },
            other => Shape::Scaled { base: Box::new(other), factor },
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Rect { lo, .. } => lo.len(),
            Shape::Polytope(p) => p.dim,
            Shape::Sheared { a, .. } => a.len(),
            Shape::Scaled { base, .. } => base.dim(),
        }
    }

    fn base_and_factor(&self) -> (&Shape, BigRational) {
        match self {
            Shape::Scaled { base, factor } => {
                let (b, f) = base.base_and_factor();
                (b, f * factor)
            }
            other => (other, BigRational::one()),
        }
    }

    /// Vertices of the unscaled shape.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        match self {
            Shape::Rect { lo, hi } => box_points(&vec![0; lo.len()], &vec![1; lo.len()])
                .into_iter()
                .map(|c| c.iter().enumerate().map(|(j, &b)| if b == 0 { lo[j] } else { hi[j] }).collect())
                .collect(),
            Shape::Polytope(p) => p.vertices.clone(),
            Shape::Sheared { a, n } => {
                let d = a.len();
                box_points(&vec![0; d], &vec![1; d])
                    .into_iter()
                    .map(|c| {
                        let s: Vec<i64> = c.iter().map(|&b| if b == 0 { -n } else { *n }).collect();
                        a.iter().map(|row| row.iter().zip(&s).map(|(x, y)| x * y).sum()).collect()
                    })
                    .collect()
            }
            Shape::Scaled { base, .. } => base.vertices(),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        match self {
            Shape::Polytope(p) => Ok(p.clone()),
            Shape::Scaled { .. } => Err(Error::Input("scaled shapes have no integer polytope form".into())),
            other => Polytope::new(other.vertices()),
        }
    }

    pub fn volume(&self) -> Result<BigRational> {
        Ok(match self {
            Shape::Rect { lo, hi } => {
                BigRational::from_integer(lo.iter().zip(hi).map(|(a, b)| BigInt::from(b - a)).product())
            }
            Shape::Polytope(p) => p.volume(),
            Shape::Sheared { a, n } => BigRational::from_integer(BigInt::from(2 * n).pow(a.len() as u32)),
            Shape::Scaled { base, factor } => base.volume()? * factor.pow(base.dim() as i32),
        })
    }

    pub fn volume_f64(&self) -> f64 {
        self.volume().ok().and_then(|v| v.to_f64()).unwrap_or(f64::NAN)
    }

    pub fn inradius(&self) -> Result<f64> {
        match self {
            Shape::Rect { lo, hi } => {
                Ok(lo.iter().zip(hi).map(|(a, b)| (b - a) as f64).fold(f64::INFINITY, f64::min) / 2.0)
            }
            Shape::Scaled { base, factor } => Ok(base.inradius()? * factor.to_f64().unwrap_or(f64::NAN)),
            other => other.to_polytope()?.inradius(),
        }
    }

    /// Closed-shape membership test.
    pub fn contains(&self, x: &[i64]) -> bool {
        let (base, factor) = self.base_and_factor();
        let Ok((num, den)) = ratio_parts(&factor) else { return false };
        match base {
            Shape::Rect { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(&xi, (&l, &h))| {
                let v = xi as i128 * den;
                v >= l as i128 * num && v <= h as i128 * num
            }),
            Shape::Polytope(p) => p.contains_scaled(x, num, den),
            Shape::Sheared { a, n } => {
                let inv = inverse_unimodular(a);
                inv.iter().all(|row| {
                    let v = dot(row, x) * den;
                    v.abs() <= *n as i128 * num
                })
            }
            Shape::Scaled { .. } => unreachable!(),
        }
    }

    /// Integer points of the closed shape, lexicographically ordered.
    pub fn integer_points(&self) -> Vec<Vec<i64>> {
        let (base, factor) = self.base_and_factor();
        let Ok((num, den)) = ratio_parts(&factor) else { return Vec::new() };
        match base {
            Shape::Rect { lo, hi } => {
                let l: Vec<i64> = lo.iter().map(|&v| ceil_div(v as i128 * num, den)).collect();
                let h: Vec<i64> = hi.iter().map(|&v| floor_div(v as i128 * num, den)).collect();
                box_points(&l, &h)
            }
            Shape::Polytope(p) => {
                let (lo, hi) = p.bounds();
                let l: Vec<i64> = lo.iter().map(|&v| ceil_div(v as i128 * num, den)).collect();
                let h: Vec<i64> = hi.iter().map(|&v| floor_div(v as i128 * num, den)).collect();
                box_points(&l, &h).into_iter().filter(|x| p.contains_scaled(x, num, den)).collect()
            }
            Shape::Sheared { a, n } => {
                let m = floor_div(*n as i128 * num, den);
                let d = a.len();
                let mut pts: Vec<Vec<i64>> = box_points(&vec![-m; d], &vec![m; d])
                    .into_iter()
                    .map(|c| a.iter().map(|row| row.iter().zip(&c).map(|(x, y)| x * y).sum()).collect())
                    .collect();
                pts.sort();
                pts
            }
            Shape::Scaled { .. } => unreachable!(),
        }
    }

    /// Integer bounding box `(lo, hi)` of the closed shape.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let pts = self.integer_points();
        let d = self.dim();
        if pts.is_empty() {
            return (vec![0; d], vec![-1; d]);
        }
        let lo = (0..d).map(|j| pts.iter().map(|p| p[j]).min().unwrap()).collect();
        let hi = (0..d).map(|j| pts.iter().map(|p| p[j]).max().unwrap()).collect();
        (lo, hi)
    }
}

/// Inverse of a determinant-one integer matrix (adjugate).
pub fn inverse_unimodular(a: &IntMatrix) -> IntMatrix {
    let d = a.len();
    if d == 1 {
        return vec![vec![a[0][0]]];
    }
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    // cofactor C_ji
                    let minor: IntMatrix = (0..d)
                        .filter(|&r| r != j)
                        .map(|r| (0..d).filter(|&c| c != i).map(|c| a[r][c]).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    (s * determinant(&minor)) as i64
                })
                .collect()
        })
        .collect()
}

/// Convex hull of `e_i` and `e_i + N v` with `v = sum of lambdas`.
pub fn hull_witness_shape(lambdas: &[Vec<i64>], n: i64) -> Result<Shape> {
    let d = lambdas.first().map(|l| l.len()).ok_or_else(|| Error::Input("no lattice vectors given".into()))?;
    if lambdas.iter().any(|l| l.len() != d) {
        return Err(Error::Input("lattice vectors of different lengths".into()));
    }
    if lambdas.iter().any(|l| l.iter().all(|&x| x == 0)) {
        return Err(Error::Degenerate("hull witness needs nonzero lattice vectors".into()));
    }
    let v: Vec<i64> = (0..d).map(|j| lambdas.iter().map(|l| l[j]).sum()).collect();
    if v.iter().all(|&x| x == 0) {
        return Err(Error::Degenerate("the lattice vectors sum to zero".into()));
    }
    if n < 1 {
        return Err(Error::Degenerate("hull witness needs N >= 1".into()));
    }
    let mut pts = Vec::new();
    for i in 0..d {
        let e: Vec<i64> = (0..d).map(|j| i64::from(i == j)).collect();
        pts.push(e.iter().zip(&v).map(|(a, b)| a + n * b).collect());
        pts.push(e);
    }
    Shape::polytope(pts)
}

/// Aligned rectangles `[0, s]` with integer sides and volume at most `budget`,
/// ordered by volume then by side vector.
pub fn rect_family(d: usize, budget: u64) -> Vec<Shape> {
    fn rec(d: usize, left: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for s in 1..=left {
            prefix.push(s as i64);
            rec(d, left / s, prefix, out);
            prefix.pop();
        }
    }
    let mut sides = Vec::new();
    if d > 0 {
        rec(d, budget, &mut Vec::new(), &mut sides);
    }
    sides.sort_by_key(|s| (s.iter().product::<i64>(), s.clone()));
    sides.into_iter().map(|s| Shape::Rect { lo: vec![0; d], hi: s }).collect()
}

/// Sheared cubes `A [-N, N]^d` over entry-bounded `A` in `SL_d(Z)`.
pub fn shear_family(d: usize, n: i64, entry_bound: i64, seed: u64, samples: usize) -> Vec<Shape> {
    sl_matrices(d, entry_bound, seed, samples).into_iter().map(|a| Shape::Sheared { a, n }).collect()
}

fn join(v: &[i64], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Rect { lo, hi } => write!(f, "rect {} {}", join(lo, ","), join(hi, ",")),
            Shape::Polytope(p) => {
                write!(f, "poly ")?;
                for v in &p.vertices {
                    write!(f, "({})", join(v, ","))?;
                }
                Ok(())
            }
            Shape::Sheared { a, n } => {
                let rows: Vec<String> = a.iter().map(|r| join(r, ",")).collect();
                write!(f, "shear {} {}", rows.join(";"), n)
            }
            Shape::Scaled { base, factor } => write!(f, "scale {} {}", factor, base),
        }
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
        .collect()
}

/// Parses `3`, `-2/5` or `2.75` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, fracpart) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{fracpart}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - fracpart.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    Ok(BigRational::from_integer(n) * ten.pow(scale))
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        match head {
            "rect" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Parse("expected `rect lo.. hi..`".into()));
                }
                Shape::rect(parse_ints(parts[0])?, parse_ints(parts[1])?)
            }
            "poly" => {
                let pts = rest
                    .split(')')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| parse_ints(t.trim_start_matches('(')))
                    .collect::<Result<Vec<_>>>()?;
                Shape::polytope(pts)
            }
            "shear" => {
                let (m, n) = rest.rsplit_once(char::is_whitespace).ok_or_else(|| Error::Parse("expected `shear A N`".into()))?;
                let a = m.split(';').map(parse_ints).collect::<Result<Vec<_>>>()?;
                let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad N `{n}`")))?;
                Shape::sheared(a, n)
            }
            "scale" => {
                let (c, inner) = rest.split_once(char::is_whitespace).ok_or_else(|| Error::Parse("expected `scale C <shape>`".into()))?;
                inner.parse::<Shape>()?.scaled(parse_rational(c)?)
            }
            _ => Err(Error::Parse(format!("unknown shape kind `{head}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn volumes() {
        assert_eq!(Shape::rect(vec![0, 0], vec![3, 2]).unwrap().volume().unwrap(), q(6, 1));
        let sh = Shape::sheared(vec![vec![1, 1], vec![0, 1]], 2).unwrap();
        assert_eq!(sh.volume().unwrap(), q(16, 1));
        assert_eq!(sh.to_polytope().unwrap().volume(), q(16, 1));
        let tri = Shape::polytope(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(tri.volume().unwrap(), q(1, 2));
        let cube = Shape::polytope(box_points(&[0, 0, 0], &[2, 2, 2])).unwrap();
        assert_eq!(cube.volume().unwrap(), q(8, 1));
        assert_eq!(cube.to_polytope().unwrap().vertices().len(), 8);
    }

    #[test]
    fn integer_point_counts() {
        assert_eq!(Shape::rect(vec![0], vec![3]).unwrap().integer_points(), vec![vec![0], vec![1], vec![2], vec![3]]);
        let sh = Shape::sheared(vec![vec![1, 1], vec![0, 1]], 1).unwrap();
        assert_eq!(sh.integer_points().len(), 9);
        let poly = sh.to_polytope().unwrap();
        let (lo, hi) = poly.bounds();
        let brute: Vec<Vec<i64>> = box_points(&lo, &hi).into_iter().filter(|x| poly.contains(x)).collect();
        assert_eq!(sh.integer_points(), brute);
        let sq = Shape::rect(vec![0, 0], vec![1, 1]).unwrap().scaled(q(5, 2)).unwrap();
        assert_eq!(sq.integer_points().len(), 9);
    }

    #[test]
    fn inradii() {
        assert!((Shape::rect(vec![0, 0], vec![3, 2]).unwrap().inradius().unwrap() - 1.0).abs() < 1e-12);
        assert!((Shape::rect(vec![0], vec![1]).unwrap().inradius().unwrap() - 0.5).abs() < 1e-12);
        let r = Shape::sheared(vec![vec![1, 1], vec![0, 1]], 1).unwrap().inradius().unwrap();
        assert!((r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9, "{r}");
        let seg = Shape::polytope(vec![vec![0], vec![1]]).unwrap();
        assert!((seg.inradius().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hull_witness() {
        let h = hull_witness_shape(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        let Shape::Polytope(p) = &h else { panic!() };
        assert_eq!(p.vertices(), &[vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]]);
        assert!(hull_witness_shape(&[vec![1, 1]], 0).is_err());
        assert!(hull_witness_shape(&[vec![2]], 3).is_ok());
    }

    #[test]
    fn families() {
        let sides: Vec<String> = rect_family(2, 4).iter().map(|s| s.to_string()).collect();
        assert_eq!(sides.len(), 8);
        assert_eq!(rect_family(1, 3).len(), 3);
    }

    #[test]
    fn literals_round_trip() {
        for lit in ["rect 0,0 3,2", "poly (0,0)(0,1)(1,0)", "shear 1,1;0,1 2", "scale 5/2 rect 0,0 1,1"] {
            let s: Shape = lit.parse().unwrap();
            assert_eq!(s.to_string(), lit);
        }
        let s: Shape = "scale 2.5 rect 0 1".parse().unwrap();
        assert_eq!(s.to_string(), "scale 5/2 rect 0 1");
    }
}
