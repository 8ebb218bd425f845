//! Scalar Diophantine approximation: distances to the integers, continued
//! fractions, Littlewood products, circle gaps, and `SL_d(Z)` scans.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::exact::{continued_fraction_f64, continued_fraction_quadratic, continued_fraction_rational};

/// Default tolerance for comparisons modulo one.
pub const MOD_ONE_TOL: f64 = 1e-9;

/// Square integer matrix stored by rows.
pub type IntMatrix = Vec<Vec<i64>>;

/// Distance from `x` to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Circle gaps of a set of points in `[0, 1)`, including the wrap-around gap.
/// Sorts `points` in place.
pub fn circle_gaps(points: &mut [f64]) -> Vec<f64> {
    points.sort_by(f64::total_cmp);
    match points.len() {
        0 => Vec::new(),
        1 => vec![1.0],
        n => {
            let mut gaps: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
            gaps.push(points[0] + 1.0 - points[n - 1]);
            gaps
        }
    }
}

/// Collapses sorted values into clusters closer than `tol`, keeping the first
/// of each cluster.
pub fn distinct_within(mut values: Vec<f64>, tol: f64) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        match out.last() {
            Some(&last) if v - last <= tol => {}
            _ => out.push(v),
        }
    }
    out
}

/// Running minima of `n * prod_i ||n alpha_i||`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LittlewoodTrajectory {
    pub alphas: Vec<f64>,
    pub records: Vec<(u64, f64)>,
    pub floor: f64,
}

fn littlewood_value(n: u64, fracs: &[f64]) -> f64 {
    let nf = n as f64;
    fracs.iter().fold(nf, |acc, a| acc * dist_to_int(nf * a))
}

fn local_records(range: std::ops::RangeInclusive<u64>, fracs: &[f64]) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut best = f64::INFINITY;
    for n in range {
        let v = littlewood_value(n, fracs);
        if v < best {
            best = v;
            out.push((n, v));
        }
    }
    out
}

/// Scans `1 <= n <= n_max` and records every new running minimum.
pub fn littlewood_scan(alphas: &[f64], n_max: u64) -> LittlewoodTrajectory {
    let fracs: Vec<f64> = alphas.iter().map(|a| frac(*a)).collect();
    const CHUNK: u64 = 1 << 16;
    let chunks: Vec<(u64, u64)> = (0..n_max.div_ceil(CHUNK))
        .map(|c| (c * CHUNK + 1, ((c + 1) * CHUNK).min(n_max)))
        .collect();
    let local: Vec<Vec<(u64, f64)>> = chunks.par_iter().map(|&(a, b)| local_records(a..=b, &fracs)).collect();
    // a global record is always a record of its own chunk
    let mut records = Vec::new();
    let mut floor = f64::INFINITY;
    for rec in local.into_iter().flatten() {
        if rec.1 < floor {
            floor = rec.1;
            records.push(rec);
        }
    }
    LittlewoodTrajectory { alphas: alphas.to_vec(), records, floor }
}

/// Truncated `l_N(x) = min_{1 <= n <= N} n prod ||n x_i||`.
pub fn ell_truncated(x: &[f64], n_max: u64) -> f64 {
    let fracs: Vec<f64> = x.iter().map(|a| frac(*a)).collect();
    (1..=n_max)
        .map(|n| littlewood_value(n, &fracs))
        .fold(f64::INFINITY, f64::min)
}

/// Visits integer vectors in the box `|n_i| <= bounds_i` in lexicographic order.
pub(crate) fn for_each_in_box(bounds: &[i64], mut f: impl FnMut(&[i64]) -> bool) {
    if bounds.iter().any(|&b| b < 0) {
        return;
    }
    let mut n: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        if !f(&n) {
            return;
        }
        let mut i = n.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if n[i] < bounds[i] {
                n[i] += 1;
                break;
            }
            n[i] = -bounds[i];
        }
    }
}

/// First nonzero `n` in the box with `||n . alpha|| <= c / prod (1 + |n_i|)`.
pub fn dual_form_check(alphas: &[f64], c: f64, bounds: &[i64]) -> Result<Option<Vec<i64>>> {
    if alphas.len() != bounds.len() {
        return Err(Error::Input("alphas and box have different lengths".into()));
    }
    if c <= 0.0 || bounds.iter().any(|&b| b < 1) {
        return Err(Error::Input("dual form check needs c > 0 and box sides >= 1".into()));
    }
    let fracs: Vec<f64> = alphas.iter().map(|a| frac(*a)).collect();
    let mut found = None;
    for_each_in_box(bounds, |n| {
        if n.iter().all(|&x| x == 0) {
            return true;
        }
        let s: f64 = n.iter().zip(&fracs).map(|(&ni, a)| ni as f64 * a).sum();
        let weight: f64 = n.iter().map(|&ni| 1.0 + ni.unsigned_abs() as f64).product();
        if dist_to_int(s) * weight <= c {
            found = Some(n.to_vec());
            return false;
        }
        true
    });
    Ok(found)
}

/// Outcome of an inhomogeneous approximation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxDensity {
    /// `max_gamma min_n ||n . alpha - gamma||` over the sampled targets.
    pub worst_error: f64,
    pub worst_target: f64,
    /// `worst_error * prod N_i`.
    pub constant: f64,
    /// Covering radius over the whole circle (half the largest orbit gap).
    pub covering_radius: f64,
}

pub fn box_density(alphas: &[f64], bounds: &[i64], targets: &[f64]) -> Result<BoxDensity> {
    if alphas.len() != bounds.len() || targets.is_empty() || bounds.iter().any(|&b| b < 1) {
        return Err(Error::Input("box density needs matching lengths, sides >= 1 and targets".into()));
    }
    let fracs: Vec<f64> = alphas.iter().map(|a| frac(*a)).collect();
    let mut pts = Vec::new();
    for_each_in_box(bounds, |n| {
        pts.push(frac(n.iter().zip(&fracs).map(|(&ni, a)| ni as f64 * a).sum()));
        true
    });
    let gaps = circle_gaps(&mut pts);
    let covering_radius = gaps.iter().cloned().fold(0.0, f64::max) / 2.0;
    let nearest = |g: f64| -> f64 {
        let g = frac(g);
        let i = pts.partition_point(|&p| p < g);
        let a = pts[i % pts.len()];
        let b = pts[(i + pts.len() - 1) % pts.len()];
        dist_to_int(a - g).min(dist_to_int(b - g))
    };
    let (worst_target, worst_error) = targets
        .par_iter()
        .map(|&g| (g, nearest(g)))
        .reduce(|| (f64::NAN, -1.0), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    let volume: f64 = bounds.iter().map(|&b| b as f64).product();
    Ok(BoxDensity { worst_error, worst_target, constant: worst_error * volume, covering_radius })
}

/// Distinct circle gap lengths of `{i alpha mod 1 : 0 <= i < n}`.
pub fn three_distance_gaps(alpha: f64, n: usize) -> Vec<f64> {
    three_distance_gaps_tol(alpha, n, MOD_ONE_TOL)
}

pub fn three_distance_gaps_tol(alpha: f64, n: usize, tol: f64) -> Vec<f64> {
    let a = frac(alpha);
    let mut pts: Vec<f64> = (0..n).map(|i| frac(i as f64 * a)).collect();
    let gaps = circle_gaps(&mut pts);
    distinct_within(gaps.into_iter().filter(|g| *g > tol).collect(), tol)
}

/// Determinant of a small integer matrix.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.len();
    // Bareiss elimination stays integral
    if n == 0 {
        return 1;
    }
    let mut b: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if b[k][k] == 0 {
            match (k + 1..n).find(|&i| b[i][k] != 0) {
                Some(i) => {
                    b.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                b[i][j] = (b[i][j] * b[k][k] - b[i][k] * b[k][j]) / prev;
            }
        }
        prev = b[k][k];
    }
    sign * b[n - 1][n - 1]
}

/// Entry-bounded elements of `SL_d(Z)`.
///
/// `d = 1` gives `{1, -1}` and `d = 2` is exhaustive; for `d >= 3` the set is
/// sampled from random words in elementary matrices (seeded, deduplicated).
pub fn sl_matrices(d: usize, entry_bound: i64, seed: u64, samples: usize) -> Vec<IntMatrix> {
    match d {
        0 => Vec::new(),
        1 => vec![vec![vec![1]], vec![vec![-1]]],
        2 => sl2_exhaustive(entry_bound),
        _ => sl_random(d, entry_bound, seed, samples),
    }
}

fn sl2_exhaustive(h: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                if a == 0 {
                    if b * c == -1 {
                        for d in -h..=h {
                            out.push(vec![vec![a, b], vec![c, d]]);
                        }
                    }
                } else if (1 + b * c) % a == 0 {
                    let d = (1 + b * c) / a;
                    if d.abs() <= h {
                        out.push(vec![vec![a, b], vec![c, d]]);
                    }
                }
            }
        }
    }
    out
}

fn sl_random(d: usize, h: i64, seed: u64, samples: usize) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identity: IntMatrix = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
    seen.insert(identity.clone());
    let max_word = 4 * d * d;
    let mut attempts = 0;
    while seen.len() < samples && attempts < samples * 20 {
        attempts += 1;
        let mut m = identity.clone();
        let len = rng.gen_range(1..=max_word);
        for _ in 0..len {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut next = m.clone();
            for col in 0..d {
                next[i][col] += s * m[j][col];
            }
            if next[i].iter().any(|x| x.abs() > h) {
                break;
            }
            m = next;
        }
        seen.insert(m);
    }
    seen.into_iter().collect()
}

pub fn mat_vec_f64(m: &IntMatrix, x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| *a as f64 * b).sum()).collect()
}

/// Result of minimising `l_N(Ax)` over a matrix sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllScan {
    pub matrix: IntMatrix,
    pub value: f64,
    pub candidates: usize,
}

/// Minimises the truncated Littlewood quantity of `Ax` over entry-bounded
/// `A` in `SL_d(Z)`. Ties go to the earliest matrix in enumeration order.
pub fn ell_orbit_scan(x: &[f64], n_max: u64, entry_bound: i64, seed: u64) -> Result<EllScan> {
    if entry_bound < 1 || n_max < 1 || x.is_empty() {
        return Err(Error::Input("ell scan needs a nonempty vector, N >= 1 and H >= 1".into()));
    }
    let mats = sl_matrices(x.len(), entry_bound, seed, 4096);
    let best = mats
        .par_iter()
        .enumerate()
        .map(|(i, a)| (ell_truncated(&mat_vec_f64(a, x), n_max), i))
        .reduce(|| (f64::INFINITY, usize::MAX), |p, q| if q.0 < p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p });
    Ok(EllScan { matrix: mats[best.1].clone(), value: best.0, candidates: mats.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn dist_examples() {
        assert_eq!(dist_to_int(0.25), 0.25);
        assert_eq!(dist_to_int(3.0), 0.0);
        assert!((dist_to_int(PHI) - 0.381_966_0).abs() < 1e-7);
    }

    #[test]
    fn three_distance_examples() {
        let g = three_distance_gaps(1.0 / PHI, 5);
        assert_eq!(g.len(), 2);
        assert!((g[0] - 0.145_898_0).abs() < 1e-7);
        assert!((g[1] - 0.236_068_0).abs() < 1e-7);
        assert_eq!(three_distance_gaps(0.25, 4), vec![0.25]);
    }

    #[test]
    fn sl2_count_small() {
        // entries in {-1,0,1}: brute force over all 81 matrices
        let mut brute = 0;
        for code in 0..81 {
            let e: Vec<i64> = (0..4).map(|k| (code / 3i64.pow(k)) % 3 - 1).collect();
            if e[0] * e[3] - e[1] * e[2] == 1 {
                brute += 1;
            }
        }
        assert_eq!(sl2_exhaustive(1).len(), brute);
        for m in sl_matrices(3, 3, 7, 50) {
            assert_eq!(determinant(&m), 1);
        }
    }

    #[test]
    fn littlewood_records_merge_across_chunks() {
        let t = littlewood_scan(&[2f64.sqrt(), 3f64.sqrt()], 200_000);
        let direct = local_records(1..=200_000, &[frac(2f64.sqrt()), frac(3f64.sqrt())]);
        assert_eq!(t.records, direct);
    }
}
