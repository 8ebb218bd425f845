//! Text formats: symbolic expressions, scheme files (TOML), point CSV.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{SymbolKind, SymbolTable, SymbolicReal};
use crate::scheme::{block_diagonal, build_theorem15_witness, SchemeSpec, Shift, SitePoint, WindowKind};
use crate::shapes::parse_rational;

/// Parses a rational-linear expression over square roots and named symbols.
///
/// Accepted atoms: integers, fractions `p/q`, decimals (read exactly),
/// `sqrt(n)` or `sqrtN`, `phi`, `pi`, `e`, and any symbol already in `table`.
/// Products and quotients are allowed only when one side is rational.
pub fn parse_symbolic(text: &str, table: &mut SymbolTable) -> Result<SymbolicReal> {
    let mut p = ExprParser { src: text, pos: 0, table };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!("unexpected `{}` in `{text}`", &p.src[p.pos..])));
    }
    Ok(v)
}

struct ExprParser<'a, 't> {
    src: &'a str,
    pos: usize,
    table: &'t mut SymbolTable,
}

impl ExprParser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in `{}`", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<SymbolicReal> {
        let mut v = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    v = &v + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    v = &v - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<SymbolicReal> {
        let mut v = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    let r = self.unary()?;
                    v = if v.is_rational() {
                        r.scale(v.rational_part())
                    } else if r.is_rational() {
                        v.scale(r.rational_part())
                    } else {
                        return Err(self.err("product of two irrational quantities"));
                    };
                }
                '/' => {
                    self.pos += 1;
                    let r = self.unary()?;
                    if !r.is_rational() || r.is_zero() {
                        return Err(self.err("division by an irrational or zero quantity"));
                    }
                    v = v.scale(&r.rational_part().recip());
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<SymbolicReal> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<SymbolicReal> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        if c == '(' {
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(')') {
                return Err(self.err("missing `)`"));
            }
            self.pos += 1;
            return Ok(v);
        }
        let rest = &self.src[self.pos..];
        if c.is_ascii_digit() || c == '.' {
            let len = number_len(rest);
            let q = parse_rational(&rest[..len])?;
            self.pos += len;
            return Ok(SymbolicReal::from_rational(q));
        }
        if c.is_alphabetic() || c == '_' {
            let len = rest.find(|ch: char| !(ch.is_alphanumeric() || ch == '_')).unwrap_or(rest.len());
            let name = &rest[..len];
            self.pos += len;
            return self.named(name);
        }
        Err(self.err(&format!("unexpected `{c}`")))
    }

    fn named(&mut self, name: &str) -> Result<SymbolicReal> {
        if let Some(id) = self.table.id_of(name) {
            return Ok(SymbolicReal::symbol(id));
        }
        match name {
            "sqrt" => {
                if self.peek() != Some('(') {
                    return Err(self.err("expected `(` after sqrt"));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                self.sqrt_of(&arg)
            }
            "phi" => Ok(self.table.golden_ratio()),
            "pi" => self.free(name, std::f64::consts::PI),
            "e" => self.free(name, std::f64::consts::E),
            _ => {
                if let Some(n) = name.strip_prefix("sqrt").and_then(|s| s.parse::<u64>().ok()) {
                    return Ok(self.table.sqrt(n));
                }
                Err(self.err(&format!("unknown symbol `{name}`")))
            }
        }
    }

    fn free(&mut self, name: &str, value: f64) -> Result<SymbolicReal> {
        log::warn!("`{name}` is represented by its float value and treated as independent of the other symbols");
        Ok(SymbolicReal::symbol(self.table.declare(name, value)?))
    }

    fn sqrt_of(&mut self, arg: &SymbolicReal) -> Result<SymbolicReal> {
        let q = arg.is_rational().then(|| arg.rational_part().clone()).ok_or_else(|| self.err("sqrt of an irrational"))?;
        if q < BigRational::from_integer(0.into()) {
            return Err(self.err("sqrt of a negative number"));
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let (p, d) = (q.numer().clone(), q.denom().clone());
        let n: u64 = num_traits::ToPrimitive::to_u64(&(&p * &d)).ok_or_else(|| self.err("sqrt argument too large"))?;
        Ok(self.table.sqrt(n).scale(&BigRational::new(BigInt::from(1), d)))
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

/// On-disk scheme description.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub k: usize,
    pub d: usize,
    #[serde(default = "default_window")]
    pub window: String,
    /// `k - d` rows of `d` expressions each.
    pub forms: Vec<Vec<String>>,
    /// Free symbols and their float values.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub symbols: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_radius: Option<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ShiftFile {
    pub s1: Vec<String>,
    pub s2: Vec<String>,
}

fn default_window() -> String {
    "cubical".into()
}

impl SchemeFile {
    pub fn build(&self) -> Result<SchemeSpec> {
        let mut table = SymbolTable::new();
        for (name, v) in &self.symbols {
            table.declare(name, *v)?;
        }
        let parse_all = |v: &[String], table: &mut SymbolTable| -> Result<Vec<SymbolicReal>> {
            v.iter().map(|s| parse_symbolic(s, table)).collect()
        };
        let forms = self.forms.iter().map(|r| parse_all(r, &mut table)).collect::<Result<Vec<_>>>()?;
        let shift = match &self.shift {
            None => Shift::Default,
            Some(s) => Shift::Given { s1: parse_all(&s.s1, &mut table)?, s2: parse_all(&s.s2, &mut table)? },
        };
        let window: WindowKind = self.window.parse()?;
        let radius = self.probe_radius.unwrap_or(crate::scheme::DEFAULT_PROBE_RADIUS);
        SchemeSpec::with_probe(self.k, self.d, forms, shift, window, table, radius)
    }

    /// Fully explicit description of a validated scheme (shift included).
    pub fn from_spec(spec: &SchemeSpec) -> Self {
        let t = spec.table();
        let show = |v: &[SymbolicReal]| v.iter().map(|x| x.fmt_with(t)).collect::<Vec<_>>();
        let symbols = t
            .iter()
            .filter(|(_, s)| s.kind == SymbolKind::Free)
            .filter(|(_, s)| !matches!(s.name.as_str(), "pi" | "e"))
            .map(|(_, s)| (s.name.clone(), s.value))
            .collect();
        let (s1, s2) = spec.shift();
        SchemeFile {
            k: spec.k(),
            d: spec.d(),
            window: spec.window().to_string(),
            forms: spec.forms().iter().map(|r| show(r)).collect(),
            symbols,
            shift: Some(ShiftFile { s1: show(s1), s2: show(s2) }),
            probe_radius: None,
        }
    }
}

pub fn parse_scheme_toml(text: &str) -> Result<SchemeSpec> {
    let file: SchemeFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.build()
}

/// Loads a scheme file, or a built-in scheme named `preset:NAME`.
pub fn load_scheme(path: &str) -> Result<SchemeSpec> {
    if let Some(name) = path.strip_prefix("preset:") {
        return preset(name);
    }
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    parse_scheme_toml(&text)
}

pub fn scheme_to_toml(spec: &SchemeSpec) -> String {
    toml::to_string(&SchemeFile::from_spec(spec)).expect("scheme files serialize")
}

/// SHA-256 of the canonical scheme description, in hex.
pub fn spec_digest(spec: &SchemeSpec) -> String {
    hex::encode(Sha256::digest(scheme_to_toml(spec).as_bytes()))
}

pub const PRESETS: &[&str] = &["fibonacci", "witness-phi-sqrt2", "witness-reduced", "sqrt2-sqrt3", "coupled"];

/// Named schemes used throughout the examples and tests.
///
/// * `fibonacci`: 2 to 1, `L(x) = x/phi`.
/// * `witness-phi-sqrt2`: 4 to 2 block-diagonal, `(phi x1, sqrt2 x2)`.
/// * `witness-reduced`: the same cubical set with coefficients
///   `(phi - 1, sqrt2 - 1)`, which admits canonical conversion.
/// * `sqrt2-sqrt3`: 3 to 2, `L(x) = sqrt2 x1 + sqrt3 x2`.
/// * `coupled`: 4 to 2 with rows `(phi, sqrt2)` and `(sqrt3, sqrt5)`.
pub fn preset(name: &str) -> Result<SchemeSpec> {
    let mut t = SymbolTable::new();
    match name {
        "fibonacci" => {
            let inv = &t.golden_ratio() - &SymbolicReal::one();
            SchemeSpec::new(2, 1, vec![vec![inv]], Shift::Default, WindowKind::Cubical, t)
        }
        "witness-phi-sqrt2" => {
            let phi = t.golden_ratio();
            let r2 = t.sqrt(2);
            build_theorem15_witness(vec![phi, r2], t)
        }
        "witness-reduced" => {
            let one = SymbolicReal::one();
            let phi = &t.golden_ratio() - &one;
            let r2 = &t.sqrt(2) - &one;
            build_theorem15_witness(vec![phi, r2], t)
        }
        "sqrt2-sqrt3" => {
            let (a, b) = (t.sqrt(2), t.sqrt(3));
            block_diagonal(vec![vec![a, b]], t)
        }
        "coupled" => {
            let (phi, r2, r3, r5) = (t.golden_ratio(), t.sqrt(2), t.sqrt(3), t.sqrt(5));
            SchemeSpec::new(4, 2, vec![vec![phi, r2], vec![r3, r5]], Shift::Default, WindowKind::Cubical, t)
        }
        other => Err(Error::Input(format!("unknown preset `{other}`; known: {}", PRESETS.join(", ")))),
    }
}

/// Writes points as CSV: labels `n*`, lifts `m*`, internal coordinates `w*`,
/// and with `embed` the physical coordinates `x*` of each point.
pub fn write_points_csv<W: Write>(out: W, points: &[SitePoint], embed: Option<&SchemeSpec>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = points.first() else {
        w.flush().map_err(io_err)?;
        return Ok(());
    };
    let (d, r) = (first.label.len(), first.lift.len());
    let mut header: Vec<String> = (1..=d).map(|j| format!("n{j}")).collect();
    header.extend((1..=r).map(|i| format!("m{i}")));
    header.extend((1..=r).map(|i| format!("w{i}")));
    if embed.is_some() {
        header.extend((1..=d).map(|j| format!("x{j}")));
    }
    w.write_record(&header).map_err(csv_err)?;
    for p in points {
        let mut row: Vec<String> = p.label.iter().chain(&p.lift).map(|v| v.to_string()).collect();
        row.extend(p.internal.iter().map(|v| format!("{v:.12}")));
        if let Some(spec) = embed {
            row.extend(spec.embed(&p.label).iter().take(d).map(|v| format!("{v:.12}")));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

pub(crate) fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Parses `a,b,c` into integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let mut t = SymbolTable::new();
        let v = parse_symbolic("(1 + sqrt(5))/2 - 1", &mut t).unwrap();
        assert!((v.eval(&t) - 0.618_033_988_749_895).abs() < 1e-15);
        let w = parse_symbolic("phi - 1", &mut t).unwrap();
        assert_eq!(v, w);
        let s = parse_symbolic("sqrt(8) + 0.25", &mut t).unwrap();
        assert_eq!(s.fmt_with(&t), "1/4 + 2*sqrt2");
        assert_eq!(parse_symbolic(&s.fmt_with(&t), &mut t).unwrap(), s);
        assert!(parse_symbolic("sqrt2*sqrt3", &mut t).is_err());
        assert!(parse_symbolic("1/0", &mut t).is_err());
        let h = parse_symbolic("sqrt(1/2)", &mut t).unwrap();
        assert!((h.eval(&t) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scheme_round_trip() {
        let spec = parse_scheme_toml("k = 3\nd = 2\nforms = [[\"sqrt(2)\", \"sqrt(3)\"]]\n").unwrap();
        let text = scheme_to_toml(&spec);
        let again = parse_scheme_toml(&text).unwrap();
        assert_eq!(spec_digest(&spec), spec_digest(&again));
        let bad = parse_scheme_toml("k = 3\nd = 2\nforms = [[\"1/2\", \"1/3\"]]\n").unwrap_err();
        assert_eq!(bad.exit_code(), 2);
    }
}
