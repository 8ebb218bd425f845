use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a declared irrational symbol inside a [`SymbolTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolId(pub usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SymbolKind {
    /// Known only through its double-precision value.
    Free,
    /// Square root of a square-free integer; can be enclosed to any precision.
    Sqrt(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub value: f64,
    pub kind: SymbolKind,
}

impl Symbol {
    /// Half-width of the interval guaranteed to contain a free symbol's true value.
    pub fn accuracy(&self) -> f64 {
        4.0 * f64::EPSILON * self.value.abs().max(1.0)
    }
}

/// The declared irrational basis for one computation.
///
/// Every symbol is trusted to be Q-linearly independent of 1 and of every
/// other symbol in the table. Nothing checks that: independence cannot be
/// decided from a float. Square-root symbols are normalised to square-free
/// radicands so that distinct `sqrt` symbols really are independent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> {
        self.symbols.iter().enumerate().map(|(i, s)| (SymbolId(i), s))
    }

    pub fn id_of(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s.name == name).map(SymbolId)
    }

    /// Declares a free symbol known only by its float value.
    pub fn declare(&mut self, name: &str, value: f64) -> Result<SymbolId> {
        self.insert(Symbol { name: name.to_string(), value, kind: SymbolKind::Free })
    }

    /// Declares a fresh free symbol whose name does not collide with existing ones.
    pub fn declare_fresh(&mut self, stem: &str, value: f64) -> SymbolId {
        let mut name = stem.to_string();
        let mut i = 1;
        while self.id_of(&name).is_some() {
            name = format!("{stem}{i}");
            i += 1;
        }
        self.declare(&name, value).expect("fresh name")
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<SymbolId> {
        if !symbol.value.is_finite() {
            return Err(Error::Input(format!("symbol {} has non-finite value", symbol.name)));
        }
        if symbol.name.is_empty()
            || !symbol.name.chars().all(|c| c.is_alphanumeric() || c == '_')
            || symbol.name.starts_with(|c: char| c.is_ascii_digit())
        {
            return Err(Error::Input(format!("invalid symbol name {:?}", symbol.name)));
        }
        if let Some(existing) = self.id_of(&symbol.name) {
            if self.symbols[existing.0] == symbol {
                return Ok(existing);
            }
            return Err(Error::Input(format!("symbol {} declared twice", symbol.name)));
        }
        if let SymbolKind::Sqrt(n) = symbol.kind {
            if let Some((id, _)) = self.iter().find(|(_, s)| s.kind == SymbolKind::Sqrt(n)) {
                return Ok(id);
            }
        }
        self.symbols.push(symbol);
        Ok(SymbolId(self.symbols.len() - 1))
    }

    /// `sqrt(n)` as an exact value: `k * sqrt(m)` with `m` square-free.
    pub fn sqrt(&mut self, n: u64) -> SymbolicReal {
        let (outer, inner) = squarefree_split(n);
        if inner == 1 {
            return SymbolicReal::from_integer(outer as i64);
        }
        let id = self
            .insert(Symbol {
                name: format!("sqrt{inner}"),
                value: (inner as f64).sqrt(),
                kind: SymbolKind::Sqrt(inner),
            })
            .expect("sqrt symbol");
        SymbolicReal::symbol(id).scale_int(outer as i64)
    }

    /// The golden ratio `(1 + sqrt5) / 2`.
    pub fn golden_ratio(&mut self) -> SymbolicReal {
        let r5 = self.sqrt(5);
        (&SymbolicReal::one() + &r5).scale(&BigRational::new(1.into(), 2.into()))
    }
}

fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p * p) {
            n /= p * p;
            outer *= p;
        }
        p += 1;
    }
    (outer, n)
}

/// A rational linear combination `q0 + sum q_s * symbol_s`.
///
/// Equality is structural and therefore exact, because the symbols are
/// declared independent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicReal {
    rational: BigRational,
    coeffs: BTreeMap<SymbolId, BigRational>,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { rational: q, coeffs: BTreeMap::new() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn symbol(id: SymbolId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(id, BigRational::one());
        Self { rational: BigRational::zero(), coeffs }
    }

    pub fn from_parts(rational: BigRational, coeffs: impl IntoIterator<Item = (SymbolId, BigRational)>) -> Self {
        let mut out = Self::from_rational(rational);
        for (id, c) in coeffs {
            out.add_coeff(id, c);
        }
        out
    }

    fn add_coeff(&mut self, id: SymbolId, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(id).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&id);
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coeff(&self, id: SymbolId) -> BigRational {
        self.coeffs.get(&id).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (SymbolId, &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.rational.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.is_empty() && self.rational.is_integer()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            rational: &self.rational * q,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Double-precision image.
    pub fn eval(&self, table: &SymbolTable) -> f64 {
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (id, c) in &self.coeffs {
            v += c.to_f64().unwrap_or(f64::NAN) * table.get(*id).value;
        }
        v
    }

    /// Rational interval containing the true value.
    pub fn enclose(&self, table: &SymbolTable, bits: u32) -> (BigRational, BigRational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        for (id, c) in &self.coeffs {
            let (slo, shi) = symbol_bounds(table.get(*id), bits);
            if c.is_positive() {
                lo += c * &slo;
                hi += c * &shi;
            } else {
                lo += c * &shi;
                hi += c * &slo;
            }
        }
        (lo, hi)
    }

    /// Exact sign. Fails only when free symbols leave the sign undecided.
    pub fn sign(&self, table: &SymbolTable) -> Result<Ordering> {
        if self.is_rational() {
            return Ok(self.rational.cmp(&BigRational::zero()));
        }
        let has_free = self.coeffs.keys().any(|id| table.get(*id).kind == SymbolKind::Free);
        let zero = BigRational::zero();
        let mut bits = 64;
        while bits <= 8192 {
            let (lo, hi) = self.enclose(table, bits);
            if lo > zero {
                return Ok(Ordering::Greater);
            }
            if hi < zero {
                return Ok(Ordering::Less);
            }
            if has_free {
                break;
            }
            bits *= 2;
        }
        Err(Error::Tolerance(format!(
            "cannot decide the sign of a value within {:e} of zero",
            self.eval(table).abs()
        )))
    }

    pub fn cmp_exact(&self, other: &SymbolicReal, table: &SymbolTable) -> Result<Ordering> {
        (self - other).sign(table)
    }

    /// Exact floor.
    pub fn floor(&self, table: &SymbolTable) -> Result<BigInt> {
        if self.is_rational() {
            return Ok(self.rational.floor().to_integer());
        }
        let f = self.eval(table);
        let margin = 1e-9 * f.abs().max(1.0);
        let fl = f.floor();
        if f.is_finite() && f - fl > margin && fl + 1.0 - f > margin && f.abs() < 1e15 {
            return Ok(BigInt::from(fl as i64));
        }
        let k = BigInt::from(f.round() as i64);
        let diff = self - &SymbolicReal::from_bigint(k.clone());
        match diff.sign(table)? {
            Ordering::Less => Ok(k - 1),
            _ => Ok(k),
        }
    }

    /// Fractional part in `[0, 1)` as a float, computed from the exact floor.
    pub fn frac_f64(&self, table: &SymbolTable) -> Result<f64> {
        let k = self.floor(table)?;
        let r = (self - &SymbolicReal::from_bigint(k)).eval(table);
        Ok(clamp_unit(r))
    }

    /// Renders as `q0 + q1*name1 + ...`, parseable by [`crate::io::parse_symbolic`].
    pub fn fmt_with(&self, table: &SymbolTable) -> String {
        let mut out = String::new();
        if !self.rational.is_zero() || self.coeffs.is_empty() {
            out.push_str(&self.rational.to_string());
        }
        for (id, c) in &self.coeffs {
            let name = &table.get(*id).name;
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let a = c.abs();
            if a.is_one() {
                out.push_str(name);
            } else {
                let _ = write!(out, "{a}*{name}");
            }
        }
        out
    }

    /// The single square-root symbol if this is `a + b*sqrt(m)` with `b != 0`.
    pub fn quadratic_form(&self, table: &SymbolTable) -> Option<(BigRational, BigRational, u64)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (id, b) = self.coeffs.iter().next()?;
        match table.get(*id).kind {
            SymbolKind::Sqrt(m) => Some((self.rational.clone(), b.clone(), m)),
            SymbolKind::Free => None,
        }
    }
}

pub(crate) fn clamp_unit(r: f64) -> f64 {
    if r < 0.0 {
        0.0
    } else if r >= 1.0 {
        1.0 - f64::EPSILON / 2.0
    } else {
        r
    }
}

fn symbol_bounds(sym: &Symbol, bits: u32) -> (BigRational, BigRational) {
    match sym.kind {
        SymbolKind::Sqrt(n) => {
            let scale = BigInt::one() << (2 * bits as usize);
            let s = (BigInt::from(n) * scale).sqrt();
            let den = BigInt::one() << bits as usize;
            (BigRational::new(s.clone(), den.clone()), BigRational::new(s + 1, den))
        }
        SymbolKind::Free => {
            let v = BigRational::from_float(sym.value).expect("finite symbol value");
            let acc = BigRational::from_float(sym.accuracy()).expect("finite accuracy");
            (&v - &acc, &v + &acc)
        }
    }
}

impl Add<&SymbolicReal> for &SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (id, c) in &rhs.coeffs {
            out.add_coeff(*id, c.clone());
        }
        out
    }
}

impl Sub<&SymbolicReal> for &SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out.rational -= &rhs.rational;
        for (id, c) in &rhs.coeffs {
            out.add_coeff(*id, -c.clone());
        }
        out
    }
}

impl Neg for &SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        self.scale_int(-1)
    }
}

impl Add for SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: SymbolicReal) -> SymbolicReal {
        &self + &rhs
    }
}

impl Sub for SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: SymbolicReal) -> SymbolicReal {
        &self - &rhs
    }
}

impl Neg for SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        -&self
    }
}

/// Partial quotients of a rational number by the Euclidean algorithm.
pub fn continued_fraction_rational(q: &BigRational, terms: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    while out.len() < terms && !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        out.push(a);
        num = den;
        den = r;
    }
    out
}

/// Partial quotients of `a + b*sqrt(m)` by exact floor/invert steps on
/// the reduced form `(P + sqrt(M)) / Q`.
pub fn continued_fraction_quadratic(a: &BigRational, b: &BigRational, m: u64, terms: usize) -> Vec<BigInt> {
    // x = (A + B sqrt m) / C over integers.
    let c = a.denom().lcm(b.denom());
    let big_a = a.numer() * (&c / a.denom());
    let big_b = b.numer() * (&c / b.denom());
    let mut radicand = &big_b * &big_b * BigInt::from(m);
    let (mut p, mut q) = if big_b.is_negative() { (-big_a, -c) } else { (big_a, c) };
    // Make Q divide M - P^2 so the recurrence stays integral.
    if !(&radicand - &p * &p).is_multiple_of(&q) {
        let qa = q.abs();
        p *= &qa;
        radicand *= &qa * &qa;
        q *= &qa;
    }
    let root = radicand.sqrt();
    let mut out = Vec::with_capacity(terms);
    while out.len() < terms {
        let digit = if q.is_positive() {
            (&p + &root).div_floor(&q)
        } else {
            let qa = -&q;
            -((&p + &root).div_floor(&qa)) - 1
        };
        out.push(digit.clone());
        p = &digit * &q - &p;
        q = (&radicand - &p * &p) / &q;
    }
    out
}

/// Partial quotients of a double, stopping early when the remainder vanishes.
pub fn continued_fraction_f64(mut x: f64, terms: usize) -> Vec<i64> {
    let mut out = Vec::new();
    while out.len() < terms && x.is_finite() {
        let a = x.floor();
        out.push(a as i64);
        let r = x - a;
        if r < 1e-12 {
            break;
        }
        x = 1.0 / r;
    }
    out
}

impl SymbolicReal {
    /// Regular continued fraction. Rational and quadratic values are expanded
    /// exactly; anything else falls back to the float image.
    pub fn continued_fraction(&self, table: &SymbolTable, terms: usize) -> Vec<BigInt> {
        if self.is_rational() {
            return continued_fraction_rational(&self.rational, terms);
        }
        if let Some((a, b, m)) = self.quadratic_form(table) {
            return continued_fraction_quadratic(&a, &b, m, terms);
        }
        log::warn!("continued fraction of a non-quadratic symbolic value uses its float image");
        continued_fraction_f64(self.eval(table), terms).into_iter().map(BigInt::from).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_normalises_radicand() {
        let mut t = SymbolTable::new();
        let r8 = t.sqrt(8);
        let r2 = t.sqrt(2);
        assert_eq!(r8, r2.scale_int(2));
        assert_eq!(t.len(), 1);
        assert_eq!(t.sqrt(9), SymbolicReal::from_integer(3));
    }

    #[test]
    fn golden_ratio_value() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        assert!((phi.eval(&t) - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(phi.floor(&t).unwrap(), BigInt::from(1));
    }

    #[test]
    fn exact_floor_near_integer() {
        let mut t = SymbolTable::new();
        let r2 = t.sqrt(2);
        // 665857*sqrt2 - 941664 is about 1.06e-6
        let x = &r2.scale_int(665_857) - &SymbolicReal::from_integer(941_664);
        assert_eq!(x.floor(&t).unwrap(), BigInt::from(0));
        assert_eq!((-&x).floor(&t).unwrap(), BigInt::from(-1));
        assert_eq!(x.sign(&t).unwrap(), Ordering::Greater);
    }

    #[test]
    fn free_symbol_sign_can_be_undecided() {
        let mut t = SymbolTable::new();
        let a = t.declare("a", 0.5).unwrap();
        let x = &SymbolicReal::symbol(a) - &SymbolicReal::ratio(1, 2);
        assert!(matches!(x.sign(&t), Err(Error::Tolerance(_))));
    }

    #[test]
    fn continued_fractions() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        let r2 = t.sqrt(2);
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(phi.continued_fraction(&t, 6)), vec![1, 1, 1, 1, 1, 1]);
        assert_eq!(to_i(r2.continued_fraction(&t, 5)), vec![1, 2, 2, 2, 2]);
        assert_eq!(to_i(SymbolicReal::ratio(7, 3).continued_fraction(&t, 5)), vec![2, 3]);
        let neg = -&r2;
        assert_eq!(to_i(neg.continued_fraction(&t, 4)), vec![-2, 1, 1, 2]);
        assert_eq!(continued_fraction_f64(std::f64::consts::SQRT_2, 5), vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn fmt_roundtrip_shape() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        assert_eq!(phi.fmt_with(&t), "1/2 + 1/2*sqrt5");
        assert_eq!((-&phi).fmt_with(&t), "-1/2 - 1/2*sqrt5");
    }
}
