//! Text wire format for keys and ciphertexts.
//!
//! ```text
//! pell/1 pk params
//! p=<hex>
//! d=<hex>
//! g=<hex>
//! h=<hex>
//! ```
//!
//! One header line `pell/<version> <kind> <scheme>`, then one
//! `label=hex` line per field in a fixed order. Hex is lowercase,
//! big-endian, without leading zeros (`0` for zero). Every line ends in
//! `\n`. A parameter equal to `α` is written as the modulus `p` itself.
//!
//! Several records may be concatenated; [`parse_many`] splits them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::conic::{ConicParams, PellPoint};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::param::Parameter;
use crate::pke::{Ciphertext, PublicKey, SchemeId, SecretKey};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    PublicKey,
    SecretKey,
    Ciphertext,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::PublicKey => "pk",
            Kind::SecretKey => "sk",
            Kind::Ciphertext => "ct",
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pk" => Ok(Kind::PublicKey),
            "sk" => Ok(Kind::SecretKey),
            "ct" => Ok(Kind::Ciphertext),
            other => Err(Error::InvalidValue(format!("unknown record kind {other:?}"))),
        }
    }
}

/// How a labelled value is bounded and counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// The modulus itself.
    Modulus,
    /// A field element, `< p`.
    Element,
    /// A parameter, `<= p` (`p` encodes `α`).
    Param,
    /// An exponent in `{2, ..., q}`.
    Exponent,
    /// A small constant stored at its natural length.
    Variable,
}

/// Canonical labels for a record type.
pub fn layout(kind: Kind, scheme: SchemeId) -> &'static [(&'static str, Slot)] {
    use Slot::*;
    match (kind, scheme) {
        (Kind::PublicKey, SchemeId::Points) => &[
            ("p", Modulus),
            ("d", Element),
            ("gx", Element),
            ("gy", Element),
            ("hx", Element),
            ("hy", Element),
        ],
        (Kind::PublicKey, SchemeId::Parameters) => {
            &[("p", Modulus), ("d", Element), ("g", Param), ("h", Param)]
        }
        (Kind::PublicKey, SchemeId::Alternative) => {
            &[("p", Modulus), ("dprime", Variable), ("g", Param), ("h", Param)]
        }
        (Kind::SecretKey, _) => &[("sk", Exponent)],
        (Kind::Ciphertext, SchemeId::Points) => &[
            ("c1x", Element),
            ("c1y", Element),
            ("c2x", Element),
            ("c2y", Element),
        ],
        (Kind::Ciphertext, SchemeId::Parameters) => &[("c1", Param), ("c2", Param)],
        (Kind::Ciphertext, SchemeId::Alternative) => {
            &[("c1", Param), ("c2", Param), ("d", Element)]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireRecord {
    pub version: u32,
    pub kind: Kind,
    pub scheme: SchemeId,
    /// In canonical order.
    pub fields: Vec<(String, BigUint)>,
}

impl WireRecord {
    fn build(kind: Kind, scheme: SchemeId, values: Vec<BigUint>) -> Self {
        let fields = layout(kind, scheme)
            .iter()
            .zip(values)
            .map(|((label, _), v)| (label.to_string(), v))
            .collect();
        WireRecord {
            version: VERSION,
            kind,
            scheme,
            fields,
        }
    }

    pub fn get(&self, label: &str) -> Option<&BigUint> {
        self.fields.iter().find(|(l, _)| l == label).map(|(_, v)| v)
    }

    fn value(&self, label: &str) -> Result<&BigUint> {
        self.get(label)
            .ok_or_else(|| Error::InvalidValue(format!("record lacks {label}")))
    }

    /// Payload size in bits for an `n`-bit modulus: every slot except
    /// [`Slot::Variable`] counts `n` bits, variable slots their own length.
    /// Header and labels are excluded.
    pub fn payload_bits(&self, n: u64) -> u64 {
        let layout = layout(self.kind, self.scheme);
        self.fields
            .iter()
            .map(|(label, v)| {
                let slot = layout.iter().find(|(l, _)| l == label).map(|(_, s)| *s);
                match slot {
                    Some(Slot::Variable) => v.bits().max(1),
                    _ => n,
                }
            })
            .sum()
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("pell/{} {} {}\n", self.version, self.kind.name(), self.scheme.name());
        for (label, v) in &self.fields {
            out.push_str(label);
            out.push('=');
            out.push_str(&v.to_str_radix(16));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for WireRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn parse_hex(s: &str, line: usize) -> Result<BigUint> {
    if s.is_empty() {
        return Err(Error::parse(line, "empty value"));
    }
    if !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
        return Err(Error::parse(line, format!("{s:?} is not lowercase hex")));
    }
    if s.len() > 1 && s.starts_with('0') {
        return Err(Error::parse(line, "leading zero in hex value"));
    }
    Ok(BigUint::parse_bytes(s.as_bytes(), 16).expect("validated hex"))
}

fn parse_header(s: &str, line: usize) -> Result<(u32, Kind, SchemeId)> {
    let mut parts = s.split(' ');
    let (Some(tag), Some(kind), Some(scheme), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(Error::parse(line, "header must be `pell/<version> <kind> <scheme>`"));
    };
    let version = tag
        .strip_prefix("pell/")
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| Error::parse(line, format!("bad header tag {tag:?}")))?;
    if version != VERSION {
        return Err(Error::parse(line, format!("unsupported version {version}")));
    }
    let kind = kind.parse().map_err(|_| Error::parse(line, format!("unknown kind {kind:?}")))?;
    let scheme = scheme
        .parse()
        .map_err(|_| Error::parse(line, format!("unknown scheme {scheme:?}")))?;
    Ok((version, kind, scheme))
}

/// Parses lines `(number, text)` of one record.
fn parse_lines(lines: &[(usize, &str)]) -> Result<WireRecord> {
    let (&(hline, header), body) = lines
        .split_first()
        .ok_or_else(|| Error::parse(1, "empty input"))?;
    let (version, kind, scheme) = parse_header(header, hline)?;
    let layout = layout(kind, scheme);
    let mut values: Vec<Option<(BigUint, usize)>> = vec![None; layout.len()];
    for &(ln, text) in body {
        let (label, hex) = text
            .split_once('=')
            .ok_or_else(|| Error::parse(ln, "expected `label=hex`"))?;
        let idx = layout
            .iter()
            .position(|(l, _)| *l == label)
            .ok_or_else(|| Error::parse(ln, format!("unknown label {label:?}")))?;
        if values[idx].is_some() {
            return Err(Error::parse(ln, format!("duplicate label {label:?}")));
        }
        values[idx] = Some((parse_hex(hex, ln)?, ln));
    }
    let end_line = lines.last().map(|(l, _)| *l).unwrap_or(hline);
    let mut fields = Vec::with_capacity(layout.len());
    for ((label, _), v) in layout.iter().zip(&values) {
        match v {
            Some((v, _)) => fields.push((label.to_string(), v.clone())),
            None => return Err(Error::parse(end_line, format!("missing label {label:?}"))),
        }
    }

    // range checks that need no outside context
    let modulus = layout
        .iter()
        .position(|(_, s)| *s == Slot::Modulus)
        .map(|i| &fields[i].1);
    if let Some(p) = modulus {
        if p.bits() < 2 || !p.bit(0) {
            return Err(Error::parse(values[0].as_ref().unwrap().1, "modulus must be odd and at least 3"));
        }
    }
    for (((_, slot), (label, v)), raw) in layout.iter().zip(&fields).zip(&values) {
        let ln = raw.as_ref().unwrap().1;
        let bad = match (slot, modulus) {
            (Slot::Element, Some(p)) => v >= p,
            (Slot::Param, Some(p)) => v > p,
            (Slot::Variable, Some(p)) => v >= p || v.is_zero(),
            (Slot::Exponent, _) => v < &BigUint::from(2u8),
            _ => false,
        };
        if bad {
            return Err(Error::parse(ln, format!("{label} out of range")));
        }
    }
    Ok(WireRecord {
        version,
        kind,
        scheme,
        fields,
    })
}

fn numbered_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let lines: Vec<(usize, &str)> = body.split('\n').enumerate().map(|(i, l)| (i + 1, l)).collect();
    if let Some(&(ln, _)) = lines.iter().find(|(_, l)| l.is_empty() || l.ends_with('\r')) {
        return Err(Error::parse(ln, "blank line or carriage return"));
    }
    Ok(lines)
}

/// Parses exactly one record.
pub fn parse(text: &str) -> Result<WireRecord> {
    let lines = numbered_lines(text)?;
    if let Some(pos) = lines.iter().skip(1).position(|(_, l)| l.starts_with("pell/")) {
        return Err(Error::parse(lines[pos + 1].0, "unexpected second record"));
    }
    parse_lines(&lines)
}

pub fn parse_bytes(bytes: &[u8]) -> Result<WireRecord> {
    parse(std::str::from_utf8(bytes).map_err(|_| Error::parse(1, "input is not UTF-8"))?)
}

/// Parses a concatenation of zero or more records.
pub fn parse_many(text: &str) -> Result<Vec<WireRecord>> {
    let lines = numbered_lines(text)?;
    let starts: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| l.starts_with("pell/"))
        .map(|(i, _)| i)
        .collect();
    if let Some(&(ln, _)) = lines.first() {
        if starts.first() != Some(&0) {
            return Err(Error::parse(ln, "expected a record header"));
        }
    }
    let mut out = Vec::with_capacity(starts.len());
    for (k, &s) in starts.iter().enumerate() {
        let e = starts.get(k + 1).copied().unwrap_or(lines.len());
        out.push(parse_lines(&lines[s..e])?);
    }
    Ok(out)
}

fn expect(rec: &WireRecord, kind: Kind) -> Result<()> {
    if rec.kind != kind {
        return Err(Error::InvalidValue(format!(
            "expected a {} record, got {}",
            kind.name(),
            rec.kind.name()
        )));
    }
    Ok(())
}

fn param_value(field: &Field, u: &Parameter) -> BigUint {
    match u {
        Parameter::Finite(m) => m.value().clone(),
        Parameter::Alpha => field.modulus().clone(),
    }
}

fn param_from(field: &Field, v: &BigUint) -> Result<Parameter> {
    if v == field.modulus() {
        Ok(Parameter::Alpha)
    } else {
        Ok(Parameter::Finite(field.try_elem(v.clone())?))
    }
}

fn elem(field: &Field, rec: &WireRecord, label: &str) -> Result<FieldElement> {
    field.try_elem(rec.value(label)?.clone())
}

impl PublicKey {
    pub fn to_record(&self) -> WireRecord {
        let values = match self {
            PublicKey::Points { field, d, g, h } => vec![
                field.modulus().clone(),
                d.value().clone(),
                g.x.value().clone(),
                g.y.value().clone(),
                h.x.value().clone(),
                h.y.value().clone(),
            ],
            PublicKey::Parameters { field, d, g, h } => vec![
                field.modulus().clone(),
                d.value().clone(),
                param_value(field, g),
                param_value(field, h),
            ],
            PublicKey::Alternative { field, d_prime, g, h } => vec![
                field.modulus().clone(),
                d_prime.value().clone(),
                param_value(field, g),
                param_value(field, h),
            ],
        };
        WireRecord::build(Kind::PublicKey, self.scheme(), values)
    }

    /// Rebuilds a key, checking that `d` is a non-square, the points lie
    /// on `C_d` and the generator is not the identity.
    pub fn from_record(rec: &WireRecord) -> Result<Self> {
        expect(rec, Kind::PublicKey)?;
        let field = Field::new(rec.value("p")?.clone())?;
        let pk = match rec.scheme {
            SchemeId::Points => {
                let d = elem(&field, rec, "d")?;
                let conic = ConicParams::classic(&field, d.clone())?;
                let g = conic.point(elem(&field, rec, "gx")?, elem(&field, rec, "gy")?)?;
                let h = conic.point(elem(&field, rec, "hx")?, elem(&field, rec, "hy")?)?;
                if g == PellPoint::one(&field) {
                    return Err(Error::InvalidValue("generator is the identity".into()));
                }
                PublicKey::Points { field, d, g, h }
            }
            SchemeId::Parameters => {
                let d = elem(&field, rec, "d")?;
                let g = param_from(&field, rec.value("g")?)?;
                let h = param_from(&field, rec.value("h")?)?;
                PublicKey::Parameters { field, d, g, h }
            }
            SchemeId::Alternative => {
                let d_prime = elem(&field, rec, "dprime")?;
                let g = param_from(&field, rec.value("g")?)?;
                let h = param_from(&field, rec.value("h")?)?;
                PublicKey::Alternative { field, d_prime, g, h }
            }
        };
        if !pk.field().is_nonsquare(pk.d()) {
            return Err(Error::InvalidValue("d is not a non-square".into()));
        }
        if let PublicKey::Parameters { g, .. } | PublicKey::Alternative { g, .. } = &pk {
            if g.is_alpha() {
                return Err(Error::InvalidValue("generator is the identity".into()));
            }
        }
        Ok(pk)
    }
}

impl SecretKey {
    pub fn to_record(&self, scheme: SchemeId) -> WireRecord {
        WireRecord::build(Kind::SecretKey, scheme, vec![self.value().clone()])
    }

    pub fn from_record(rec: &WireRecord) -> Result<(SchemeId, Self)> {
        expect(rec, Kind::SecretKey)?;
        Ok((rec.scheme, SecretKey::new(rec.value("sk")?.clone())))
    }
}

impl Ciphertext {
    /// Needs the field to write `α` as `p`.
    pub fn to_record(&self, field: &Field) -> WireRecord {
        let values = match self {
            Ciphertext::Points { c1, c2 } => vec![
                c1.x.value().clone(),
                c1.y.value().clone(),
                c2.x.value().clone(),
                c2.y.value().clone(),
            ],
            Ciphertext::Parameters { c1, c2 } => vec![param_value(field, c1), param_value(field, c2)],
            Ciphertext::Alternative { c1, c2, d } => {
                vec![param_value(field, c1), param_value(field, c2), d.value().clone()]
            }
        };
        WireRecord::build(Kind::Ciphertext, self.scheme(), values)
    }

    /// Range-checks every value against the key's modulus.
    pub fn from_record(rec: &WireRecord, pk: &PublicKey) -> Result<Self> {
        expect(rec, Kind::Ciphertext)?;
        if rec.scheme != pk.scheme() {
            return Err(Error::SchemeMismatch);
        }
        let field = pk.field();
        Ok(match rec.scheme {
            SchemeId::Points => Ciphertext::Points {
                c1: PellPoint::new(elem(field, rec, "c1x")?, elem(field, rec, "c1y")?),
                c2: PellPoint::new(elem(field, rec, "c2x")?, elem(field, rec, "c2y")?),
            },
            SchemeId::Parameters => Ciphertext::Parameters {
                c1: param_from(field, rec.value("c1")?)?,
                c2: param_from(field, rec.value("c2")?)?,
            },
            SchemeId::Alternative => Ciphertext::Alternative {
                c1: param_from(field, rec.value("c1")?)?,
                c2: param_from(field, rec.value("c2")?)?,
                d: elem(field, rec, "d")?,
            },
        })
    }
}
