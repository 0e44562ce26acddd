//! The parameter group `F_p ∪ {α}` of a Pell conic.
//!
//! A parameter `m` stands for the class `[m + t]` in `F_p[t]/(t^2 - d)`
//! modulo scalars, and `α` for the class `[1]`. The induced product is
//! `m1 ⊙ m2 = (m1 m2 + d) / (m1 + m2)`, or `α` when `m1 + m2 = 0`.
//! Powers are Rédei rational functions and are evaluated with a projective
//! square-and-multiply that inverts once at the end.

use std::fmt;

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use crate::conic::{ConicParams, PellPoint};
use crate::error::{Error, Result};
use crate::field::{Field, FieldContext, FieldElement, Metered, OpCounter};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Parameter {
    Finite(FieldElement),
    /// The identity, `[1]`.
    Alpha,
}

impl fmt::Debug for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Finite(m) => write!(f, "{m:?}"),
            Parameter::Alpha => write!(f, "α"),
        }
    }
}

impl Parameter {
    pub fn finite(field: &Field, v: impl Into<BigUint>) -> Self {
        Parameter::Finite(field.elem(v))
    }

    pub fn is_alpha(&self) -> bool {
        matches!(self, Parameter::Alpha)
    }

    pub fn as_finite(&self) -> Option<&FieldElement> {
        match self {
            Parameter::Finite(m) => Some(m),
            Parameter::Alpha => None,
        }
    }
}

/// `x + t y` in `F_p[t]/(t^2 - d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl QuadExt {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        QuadExt { x, y }
    }

    pub fn one(field: &Field) -> Self {
        QuadExt::new(field.one(), field.zero())
    }

    pub fn mul(&self, other: &QuadExt, field: &Field, d: &FieldElement) -> QuadExt {
        let f = field;
        let x = f.add(&f.mul(&self.x, &other.x), &f.mul(d, &f.mul(&self.y, &other.y)));
        let y = f.add(&f.mul(&self.x, &other.y), &f.mul(&self.y, &other.x));
        QuadExt::new(x, y)
    }

    pub fn norm(&self, field: &Field, d: &FieldElement) -> FieldElement {
        field.sub(&field.square(&self.x), &field.mul(d, &field.square(&self.y)))
    }

    /// Plain square-and-multiply; used as an independent reference.
    pub fn pow(&self, e: &BigUint, field: &Field, d: &FieldElement) -> QuadExt {
        let mut acc = QuadExt::one(field);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc, field, d);
            if e.bit(i) {
                acc = acc.mul(self, field, d);
            }
        }
        acc
    }
}

/// `u ⊙_d v`.
pub fn param_mul(field: &Field, u: &Parameter, v: &Parameter, d: &FieldElement) -> Parameter {
    match (u, v) {
        (Parameter::Alpha, w) | (w, Parameter::Alpha) => w.clone(),
        (Parameter::Finite(m1), Parameter::Finite(m2)) => {
            let den = field.add(m1, m2);
            if den.is_zero() {
                return Parameter::Alpha;
            }
            let num = field.add(&field.mul(m1, m2), d);
            Parameter::Finite(field.div(&num, &den).expect("nonzero denominator"))
        }
    }
}

/// `m ↦ -m`, `α ↦ α`.
pub fn param_inverse(field: &Field, u: &Parameter) -> Parameter {
    match u {
        Parameter::Finite(m) => Parameter::Finite(field.neg(m)),
        Parameter::Alpha => Parameter::Alpha,
    }
}

/// Parameterization of a conic with identity `(a, b)`:
///
/// * `(a, b) ↦ α`
/// * `(-a, b) ↦ -b d / a`
/// * otherwise `(x + a) / (y - b)`
///
/// The identity branch is tested first. When `a = 0` the points `(a, b)`
/// and `(-a, b)` coincide, so `-b d / a` is only evaluated with `a ≠ 0`.
pub fn param_of_point(p: &PellPoint, conic: &ConicParams) -> Result<Parameter> {
    let f = conic.field();
    let id = conic.identity();
    if p == id {
        return Ok(Parameter::Alpha);
    }
    if p.y == id.y {
        if p.x != f.neg(&id.x) {
            return Err(Error::NotOnConic);
        }
        let num = f.neg(&f.mul(&id.y, conic.d()));
        return Ok(Parameter::Finite(f.div(&num, &id.x)?));
    }
    let num = f.add(&p.x, &id.x);
    let den = f.sub(&p.y, &id.y);
    Ok(Parameter::Finite(f.div(&num, &den)?))
}

/// Inverse parameterization:
/// `m ↦ (2m (a m + b d)/(m^2 - d) - a, 2 (a m + b d)/(m^2 - d) + b)`,
/// `α ↦ (a, b)`. With `(a, b, c) = (1, 0, 1)` this is
/// `((m^2 + d)/(m^2 - d), 2m/(m^2 - d))`.
pub fn point_of_param(u: &Parameter, conic: &ConicParams) -> Result<PellPoint> {
    let f = conic.field();
    let id = conic.identity();
    let m = match u {
        Parameter::Alpha => return Ok(id.clone()),
        Parameter::Finite(m) => m,
    };
    let d = conic.d();
    let den = f.sub(&f.square(m), d);
    let den_inv = f.inv(&den).map_err(|_| Error::SingularParameter)?;
    // k = 2 (a m + b d) / (m^2 - d)
    let am_bd = f.add(&f.mul(&id.x, m), &f.mul(&id.y, d));
    let k = f.mul(&f.double(&am_bd), &den_inv);
    let x = f.sub(&f.mul(m, &k), &id.x);
    let y = f.add(&k, &id.y);
    Ok(PellPoint::new(x, y))
}

/// `(m + t)^e = A + B t` in `F_p[t]/(t^2 - d)`, computed directly in the
/// quadratic extension. `Q_e(m, d) = A / B` when `B ≠ 0`.
pub fn redei_oracle(
    field: &Field,
    m: &FieldElement,
    e: &BigUint,
    d: &FieldElement,
) -> (FieldElement, FieldElement) {
    let base = QuadExt::new(m.clone(), field.one());
    let r = base.pow(e, field, d);
    (r.x, r.y)
}

/// `u^{⊙e}` via the modified More algorithm.
pub fn param_pow_more(field: &Field, u: &Parameter, e: &BigUint, d: &FieldElement) -> Parameter {
    let counter = OpCounter::new();
    param_pow_more_metered(field, u, e, d, &counter)
}

/// [`param_pow_more`] recording its field operations in `counter`.
///
/// Keeps `N + D t` with `(N, D) = (1, 0)` initially. A squaring is
/// `(N^2 + d D^2, 2 N D)` (4 multiplications), a multiply step is
/// `(N m + d D, N + D m)` (3 multiplications), and the result `N / D`
/// costs a single inversion. `D = 0` at the end means the identity class.
pub fn param_pow_more_metered(
    field: &Field,
    u: &Parameter,
    e: &BigUint,
    d: &FieldElement,
    counter: &OpCounter,
) -> Parameter {
    let m = match u {
        Parameter::Alpha => return Parameter::Alpha,
        Parameter::Finite(m) => m,
    };
    let k = Metered::new(field, counter);
    let mut n = field.one();
    let mut den = field.zero();
    for i in (0..e.bits()).rev() {
        let n2 = k.mul(&n, &n);
        let d2 = k.mul(&den, &den);
        let dd2 = k.mul(d, &d2);
        let nd = k.mul(&n, &den);
        n = k.add(&n2, &dd2);
        den = k.double(&nd);
        if e.bit(i) {
            let nm = k.mul(&n, m);
            let d_den = k.mul(d, &den);
            let den_m = k.mul(&den, m);
            let next_n = k.add(&nm, &d_den);
            den = k.add(&n, &den_m);
            n = next_n;
        }
    }
    if den.is_zero() {
        return Parameter::Alpha;
    }
    let inv = k.inv(&den).expect("nonzero denominator");
    Parameter::Finite(k.mul(&n, &inv))
}

/// Isomorphism `(P, ⊙_{d'}) -> (P, ⊙_d)` with `d = d' s^2`: `m ↦ s m`.
pub fn param_iso_scale(field: &Field, u: &Parameter, s: &FieldElement) -> Parameter {
    match u {
        Parameter::Finite(m) => Parameter::Finite(field.mul(s, m)),
        Parameter::Alpha => Parameter::Alpha,
    }
}

/// Whether `g` has order exactly `p + 1` under `⊙_d`.
pub fn has_full_order(ctx: &FieldContext, g: &Parameter, d: &FieldElement) -> bool {
    let order = ctx.group_order();
    ctx.order_factors()
        .iter()
        .all(|q| !param_pow_more(ctx.field(), g, &(&order / q), d).is_alpha())
}

/// A random parameter of order `p + 1`, for non-square `d`.
pub fn random_generator<R: RngCore + CryptoRng + ?Sized>(
    ctx: &FieldContext,
    d: &FieldElement,
    rng: &mut R,
) -> Result<Parameter> {
    let f = ctx.field();
    if !f.is_nonsquare(d) {
        return Err(Error::InvalidValue("generator search needs non-square d".into()));
    }
    loop {
        let g = Parameter::Finite(f.random_element(rng));
        if has_full_order(ctx, &g, d) {
            return Ok(g);
        }
    }
}
