//! Embedding plaintext integers into conic points and parameters.
//!
//! Both encodings reserve `pad` low bits of one coordinate as a search
//! counter, and keep every coordinate strictly below `2^(n-1) < p`.

use num_bigint::BigUint;
use num_traits::One;

use crate::conic::PellPoint;
use crate::error::{Error, Result};
use crate::field::{Chi, Field, FieldElement};
use crate::param::Parameter;

/// Default width of the padding counter.
pub const R_PAD: u32 = 8;

/// Encodes `msg` as a point of `C_d`: `y = msg * 2^pad + k` for the
/// smallest counter `k` with `1 + d y^2` a square, `x = sqrt(1 + d y^2)`.
pub fn encode_point(field: &Field, msg: &BigUint, d: &FieldElement, pad: u32) -> Result<PellPoint> {
    let base = msg << pad;
    if &base >= field.modulus() {
        return Err(Error::MessageTooLarge);
    }
    for k in 0..(1u64 << pad) {
        let yv = &base + k;
        if &yv >= field.modulus() {
            break;
        }
        let y = field.elem(yv);
        let rhs = field.add(&field.one(), &field.mul(d, &field.square(&y)));
        if field.chi(&rhs) != Chi::NonResidue {
            let x = field.sqrt(&rhs)?;
            return Ok(PellPoint::new(x, y));
        }
    }
    Err(Error::EncodingFailure)
}

/// Recovers the message from the `y` coordinate.
pub fn decode_point(point: &PellPoint, pad: u32) -> BigUint {
    point.y.value() >> pad
}

/// `d = (x^2 - 1) / y^2` and `m = (x + 1) / y` for a point `(x, y)`, the
/// unique classic conic through it and its parameter there.
pub fn alt_point_to_param(
    field: &Field,
    x: &FieldElement,
    y: &FieldElement,
) -> Result<(Parameter, FieldElement)> {
    let y_inv = field.inv(y)?;
    let x2m1 = field.sub(&field.square(x), &field.one());
    let d = field.mul(&x2m1, &field.square(&y_inv));
    let m = field.mul(&field.add(x, &field.one()), &y_inv);
    Ok((Parameter::Finite(m), d))
}

/// Splits a `2n`-bit message into a point `(x, y)` and maps it to a
/// parameter over a per-message non-square `d`.
///
/// The low `n - 1` bits give `y = y_raw + 1` (never zero); the high bits
/// give `x = x_raw * 2^pad + k` for the smallest `k` making `d` a
/// non-square.
pub fn encode_alt(field: &Field, msg: &BigUint, pad: u32) -> Result<(Parameter, FieldElement)> {
    let half = field.bits() - 1;
    let y_raw = msg & ((BigUint::one() << half) - 1u8);
    let x_raw = msg >> half;
    let y = field.elem(y_raw + 1u8);
    let x_base = x_raw << pad;
    if &x_base >= field.modulus() {
        return Err(Error::MessageTooLarge);
    }
    for k in 0..(1u64 << pad) {
        let xv = &x_base + k;
        if &xv >= field.modulus() {
            break;
        }
        let x = field.elem(xv);
        let (m, d) = alt_point_to_param(field, &x, &y)?;
        if field.is_nonsquare(&d) {
            return Ok((m, d));
        }
    }
    Err(Error::EncodingFailure)
}

/// Inverse of [`encode_alt`] given the recovered point.
pub fn decode_alt(field: &Field, point: &PellPoint, pad: u32) -> Result<BigUint> {
    let half = field.bits() - 1;
    if point.y.is_zero() {
        return Err(Error::InvalidValue("decrypted y is zero".into()));
    }
    let y_raw = point.y.value() - 1u8;
    if y_raw.bits() > half {
        return Err(Error::InvalidValue("decrypted y out of range".into()));
    }
    let x_raw = point.x.value() >> pad;
    Ok((x_raw << half) | y_raw)
}
