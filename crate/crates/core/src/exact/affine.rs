use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::symbolic::{clamp_unit, SymbolId, SymbolTable, SymbolicReal};
use crate::error::{Error, Result};

/// An affine map `x -> c + sum_j x_j a_j` from integer vectors to symbolic reals.
///
/// Keeps a common-denominator integer image of all coefficients so that the
/// hot questions (is the value an integer? what is its floor?) are answered
/// with machine integers and floats, falling back to exact arithmetic only
/// when the float is within a hair of an integer.
#[derive(Clone, Debug)]
pub struct AffineForm {
    constant: SymbolicReal,
    coeffs: Vec<SymbolicReal>,
    symbols: Vec<SymbolId>,
    denom: i128,
    // index 0 is the rational component, index s+1 the symbol symbols[s]
    const_num: Vec<i128>,
    coeff_num: Vec<Vec<i128>>,
    const_f64: f64,
    coeff_f64: Vec<f64>,
}

impl AffineForm {
    pub fn new(constant: SymbolicReal, coeffs: Vec<SymbolicReal>, table: &SymbolTable) -> Result<Self> {
        let mut symbols: Vec<SymbolId> = constant.symbols().collect();
        for c in &coeffs {
            symbols.extend(c.symbols());
        }
        symbols.sort();
        symbols.dedup();

        let mut denom = BigInt::from(1);
        let mut note = |q: &BigRational| denom = denom.lcm(q.denom());
        note(constant.rational_part());
        constant.coeffs().for_each(|(_, q)| note(q));
        for c in &coeffs {
            note(c.rational_part());
            c.coeffs().for_each(|(_, q)| note(q));
        }
        let to_vec = |v: &SymbolicReal| -> Result<Vec<i128>> {
            let mut out = Vec::with_capacity(symbols.len() + 1);
            out.push(scaled(v.rational_part(), &denom)?);
            for s in &symbols {
                out.push(scaled(&v.coeff(*s), &denom)?);
            }
            Ok(out)
        };
        let const_num = to_vec(&constant)?;
        let coeff_num = coeffs.iter().map(to_vec).collect::<Result<Vec<_>>>()?;
        let denom = denom
            .to_i128()
            .ok_or_else(|| Error::Input("common denominator too large".into()))?;
        Ok(Self {
            const_f64: constant.eval(table),
            coeff_f64: coeffs.iter().map(|c| c.eval(table)).collect(),
            constant,
            coeffs,
            symbols,
            denom,
            const_num,
            coeff_num,
        })
    }

    /// The linear form `x -> sum_j x_j a_j`.
    pub fn linear(coeffs: Vec<SymbolicReal>, table: &SymbolTable) -> Result<Self> {
        Self::new(SymbolicReal::zero(), coeffs, table)
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(&self) -> &SymbolicReal {
        &self.constant
    }

    pub fn coeffs(&self) -> &[SymbolicReal] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> &[f64] {
        &self.coeff_f64
    }

    pub fn value_f64(&self, x: &[i64]) -> f64 {
        debug_assert_eq!(x.len(), self.coeff_f64.len());
        let mut v = self.const_f64;
        for (xi, a) in x.iter().zip(&self.coeff_f64) {
            v += *xi as f64 * a;
        }
        v
    }

    pub fn symbolic_at(&self, x: &[i64]) -> SymbolicReal {
        let mut v = self.constant.clone();
        for (xi, a) in x.iter().zip(&self.coeffs) {
            if *xi != 0 {
                v = &v + &a.scale_int(*xi);
            }
        }
        v
    }

    fn scaled_at(&self, x: &[i64]) -> Option<Vec<i128>> {
        let mut acc = self.const_num.clone();
        for (xi, row) in x.iter().zip(&self.coeff_num) {
            if *xi == 0 {
                continue;
            }
            let xi = *xi as i128;
            for (a, r) in acc.iter_mut().zip(row) {
                *a = a.checked_add(r.checked_mul(xi)?)?;
            }
        }
        Some(acc)
    }

    /// Exact test: is the value at `x` an integer?
    pub fn is_integer_at(&self, x: &[i64]) -> bool {
        match self.scaled_at(x) {
            Some(acc) => acc[1..].iter().all(|c| *c == 0) && acc[0] % self.denom == 0,
            None => self.symbolic_at(x).is_integer(),
        }
    }

    /// Exact floor at `x`.
    pub fn floor_at(&self, x: &[i64], table: &SymbolTable) -> Result<i64> {
        let f = self.value_f64(x);
        let fl = f.floor();
        let margin = 1e-9 * f.abs().max(1.0);
        if f - fl > margin && fl + 1.0 - f > margin {
            return Ok(fl as i64);
        }
        if let Some(acc) = self.scaled_at(x) {
            if acc[1..].iter().all(|c| *c == 0) {
                return Ok(Integer::div_floor(&acc[0], &self.denom) as i64);
            }
        }
        self.symbolic_at(x)
            .floor(table)?
            .to_i64()
            .ok_or_else(|| Error::Input("floor out of range".into()))
    }

    /// `(floor, fractional part)` at `x`, the fraction in `[0, 1)`.
    pub fn split_at(&self, x: &[i64], table: &SymbolTable) -> Result<(i64, f64)> {
        let f = self.value_f64(x);
        let fl = f.floor();
        let margin = 1e-9 * f.abs().max(1.0);
        if f - fl > margin && fl + 1.0 - f > margin {
            return Ok((fl as i64, clamp_unit(f - fl)));
        }
        let v = self.symbolic_at(x);
        let k = v.floor(table)?;
        let r = (&v - &SymbolicReal::from_bigint(k.clone())).eval(table);
        let k = k.to_i64().ok_or_else(|| Error::Input("floor out of range".into()))?;
        Ok((k, clamp_unit(r)))
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }
}

fn scaled(q: &BigRational, denom: &BigInt) -> Result<i128> {
    if q.is_zero() {
        return Ok(0);
    }
    (q.numer() * (denom / q.denom()))
        .to_i128()
        .ok_or_else(|| Error::Input("coefficient too large for the integer image".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_test_matches_symbolic() {
        let mut t = SymbolTable::new();
        let phi = t.golden_ratio();
        let f = AffineForm::new(
            SymbolicReal::ratio(1, 2),
            vec![phi.clone(), (&phi + &SymbolicReal::ratio(1, 2)).scale_int(-1)],
            &t,
        )
        .unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                let x = [a, b];
                assert_eq!(f.is_integer_at(&x), f.symbolic_at(&x).is_integer(), "{x:?}");
                let fl = f.floor_at(&x, &t).unwrap();
                assert_eq!(BigInt::from(fl), f.symbolic_at(&x).floor(&t).unwrap());
            }
        }
        // x = (1, 1): 1/2 + phi - phi - 1/2 = 0
        assert!(f.is_integer_at(&[1, 1]));
    }
}
