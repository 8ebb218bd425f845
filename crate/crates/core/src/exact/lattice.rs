use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::symbolic::{SymbolId, SymbolicReal};
use crate::error::{Error, Result};

type Row = Vec<BigInt>;

/// Row-echelon reduction by unimodular row operations, pivoting only in the
/// first `prefix` columns. Returns the number of pivot rows; rows after that
/// are zero on the prefix.
fn echelon_on_prefix(rows: &mut [Row], prefix: usize, reduce_above: bool) -> usize {
    let m = rows.len();
    let mut r = 0;
    for c in 0..prefix {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(piv) = piv else { break };
            rows.swap(r, piv);
            let mut clean = true;
            for i in r + 1..m {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                if !tail[0][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    let (head, tail) = rows.split_at_mut(r);
                    sub_multiple(&mut head[i], &tail[0], &q);
                }
            }
        }
        r += 1;
    }
    r
}

fn sub_multiple(target: &mut Row, source: &Row, q: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Hermite normal form (row style) of the lattice generated by `rows`.
pub fn hermite_normal_form(mut rows: Vec<Row>, dim: usize) -> Vec<Row> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let rank = echelon_on_prefix(&mut rows, dim, true);
    rows.truncate(rank);
    rows
}

/// Basis of `{n in Z^cols : matrix * n = 0}`.
pub fn integer_kernel(matrix: &[Row], cols: usize) -> Vec<Row> {
    let r = matrix.len();
    let mut aug: Vec<Row> = (0..cols)
        .map(|j| {
            let mut row: Row = matrix.iter().map(|m| m[j].clone()).collect();
            row.extend((0..cols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelon_on_prefix(&mut aug, r, false);
    let kernel: Vec<Row> = aug[rank..].iter().map(|row| row[r..].to_vec()).collect();
    hermite_normal_form(kernel, cols)
}

/// A subgroup of `Z^d` held in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntegerLattice {
    ambient_dim: usize,
    basis: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn from_generators(ambient_dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        for g in generators {
            if g.len() != ambient_dim {
                return Err(Error::Input(format!(
                    "generator of length {} in a lattice of dimension {ambient_dim}",
                    g.len()
                )));
            }
        }
        let rows = generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_big(ambient_dim, rows)
    }

    fn from_big(ambient_dim: usize, rows: Vec<Row>) -> Result<Self> {
        let h = hermite_normal_form(rows, ambient_dim);
        let basis = h
            .into_iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Input("lattice entries exceed 64 bits".into()))?;
        Ok(Self { ambient_dim, basis })
    }

    fn big_rows(&self) -> Vec<Row> {
        self.basis.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rows = self.big_rows();
        rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
        hermite_normal_form(rows, self.ambient_dim) == self.big_rows()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut rows = self.big_rows();
        rows.extend(other.big_rows());
        Self::from_big(self.ambient_dim, rows)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Self::zero(self.ambient_dim));
        }
        let (a, b) = (self.big_rows(), other.big_rows());
        let r1 = a.len();
        // x.A = y.B  <=>  [A; -B]^T (x, y) = 0
        let matrix: Vec<Row> = (0..self.ambient_dim)
            .map(|j| {
                a.iter()
                    .map(|row| row[j].clone())
                    .chain(b.iter().map(|row| -&row[j]))
                    .collect()
            })
            .collect();
        let ker = integer_kernel(&matrix, r1 + b.len());
        let gens = ker
            .iter()
            .map(|k| {
                (0..self.ambient_dim)
                    .map(|j| (0..r1).fold(BigInt::zero(), |acc, i| acc + &k[i] * &a[i][j]))
                    .collect()
            })
            .collect();
        Self::from_big(self.ambient_dim, gens)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Input(format!(
                "lattices in dimensions {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Union of the coordinate supports of the basis vectors.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ambient_dim)
            .filter(|&j| self.basis.iter().any(|b| b[j] != 0))
            .collect()
    }
}

/// `{n in Z^d : sum_j n_j form_j in Z}`, computed exactly.
///
/// Each irrational symbol contributes one homogeneous integer equation; the
/// rational parts contribute a congruence, encoded with one auxiliary
/// variable and projected away afterwards.
pub fn kernel_mod_one(form: &[SymbolicReal], d: usize) -> Result<IntegerLattice> {
    if form.len() != d {
        return Err(Error::Input(format!("form of length {} for dimension {d}", form.len())));
    }
    if d == 0 {
        return Ok(IntegerLattice::zero(0));
    }
    let mut symbols: Vec<SymbolId> = form.iter().flat_map(|f| f.symbols()).collect();
    symbols.sort();
    symbols.dedup();

    let integer_row = |entries: Vec<BigRational>| -> (Row, BigInt) {
        let den = entries.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let row = entries.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        (row, den)
    };

    let mut matrix: Vec<Row> = Vec::new();
    for s in &symbols {
        let (mut row, _) = integer_row(form.iter().map(|f| f.coeff(*s)).collect());
        row.push(BigInt::zero());
        matrix.push(row);
    }
    let (mut rat_row, den) = integer_row(form.iter().map(|f| f.rational_part().clone()).collect());
    rat_row.push(-den);
    matrix.push(rat_row);

    let ker = integer_kernel(&matrix, d + 1);
    let projected: Vec<Row> = ker.into_iter().map(|mut v| {
        v.truncate(d);
        v
    }).collect();
    IntegerLattice::from_big(d, projected)
}

/// `Lambda_i = intersection of S_j over j != i`, and `Lambda = sum of Lambda_i`.
pub fn lambda_subgroups(forms: &[Vec<SymbolicReal>], d: usize) -> Result<(Vec<IntegerLattice>, IntegerLattice)> {
    if forms.is_empty() {
        return Err(Error::Input("at least one form is required".into()));
    }
    if forms.len() == 1 {
        if forms[0].len() != d {
            return Err(Error::Input(format!("form of length {} for dimension {d}", forms[0].len())));
        }
        let full = IntegerLattice::full(d);
        return Ok((vec![full.clone()], full));
    }
    let kernels = forms.iter().map(|f| kernel_mod_one(f, d)).collect::<Result<Vec<_>>>()?;
    let mut lambdas = Vec::with_capacity(forms.len());
    for i in 0..forms.len() {
        let mut acc = IntegerLattice::full(d);
        for (j, s) in kernels.iter().enumerate() {
            if j != i {
                acc = acc.intersect(s)?;
            }
        }
        lambdas.push(acc);
    }
    let mut total = IntegerLattice::zero(d);
    for l in &lambdas {
        total = total.sum(l)?;
    }
    Ok((lambdas, total))
}

/// The algebraic half of the linear-repetitivity criterion for a family of forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    /// `rk(Lambda_i + S_i)` for each form.
    pub rank_lambda_plus_kernel: Vec<usize>,
    pub rank_lambda: usize,
    /// `m_i = rk(Lambda_i)`.
    pub m: Vec<usize>,
    pub supports: Vec<Vec<usize>>,
    /// Whether the real span of `Lambda_i` is a coordinate plane.
    pub coordinate_plane: Vec<bool>,
    /// Whether the supports partition `{0..d}` (only meaningful when `sum m_i = d`).
    pub supports_partition: bool,
    pub verdict: bool,
}

pub fn rank_conditions(forms: &[Vec<SymbolicReal>], d: usize) -> Result<RankReport> {
    let (lambdas, total) = lambda_subgroups(forms, d)?;
    let kernels = forms.iter().map(|f| kernel_mod_one(f, d)).collect::<Result<Vec<_>>>()?;
    let rank_lambda_plus_kernel = lambdas
        .iter()
        .zip(&kernels)
        .map(|(l, s)| l.sum(s).map(|x| x.rank()))
        .collect::<Result<Vec<_>>>()?;
    let m: Vec<usize> = lambdas.iter().map(|l| l.rank()).collect();
    let supports: Vec<Vec<usize>> = lambdas.iter().map(|l| l.support()).collect();
    let coordinate_plane: Vec<bool> = supports.iter().zip(&m).map(|(s, &mi)| s.len() == mi).collect();
    let supports_partition = m.iter().sum::<usize>() == d && {
        let mut seen = vec![false; d];
        supports.iter().flatten().all(|&j| !std::mem::replace(&mut seen[j], true)) && seen.iter().all(|&b| b)
    };
    let verdict = rank_lambda_plus_kernel.iter().all(|&r| r == d)
        && total.rank() == d
        && coordinate_plane.iter().all(|&b| b)
        && supports_partition;
    Ok(RankReport {
        rank_lambda_plus_kernel,
        rank_lambda: total.rank(),
        m,
        supports,
        coordinate_plane,
        supports_partition,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical() {
        let a = IntegerLattice::from_generators(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        let b = IntegerLattice::from_generators(2, &[vec![2, 3], vec![4, 3], vec![0, 6]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn kernel_and_intersection() {
        let m = vec![vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]];
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip(&m[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        let a = IntegerLattice::from_generators(1, &[vec![4]]).unwrap();
        let b = IntegerLattice::from_generators(1, &[vec![6]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap().basis(), &[vec![12]]);
        assert_eq!(a.sum(&b).unwrap().basis(), &[vec![2]]);
        assert!(a.contains(&[8]));
        assert!(!a.contains(&[6]));
    }

    #[test]
    fn rational_kernel() {
        let form = [SymbolicReal::ratio(1, 2), SymbolicReal::ratio(1, 3)];
        let s = kernel_mod_one(&form, 2).unwrap();
        assert_eq!(s, IntegerLattice::from_generators(2, &[vec![2, 0], vec![0, 3]]).unwrap());
    }
}
