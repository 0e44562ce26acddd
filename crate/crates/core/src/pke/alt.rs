//! ElGamal over `(P_d, ⊙_d)` with a per-message `d` carried in the
//! ciphertext. Keys live over the smallest non-square `d'`; encryption
//! moves them to `⊙_d` with `m ↦ s m`, `s = sqrt(d / d')`.

use num_bigint::BigUint;
use rand::RngCore;

use super::encode::{decode_alt, encode_alt};
use super::{random_exponent, Ciphertext, PublicKey, SecretKey};
use super::params::pow;
use crate::conic::ConicParams;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, OpCounter};
use crate::param::{self, Parameter};

/// `s` with `d = d' s^2`. Exists whenever both are non-squares.
pub fn scale_factor(field: &Field, d: &FieldElement, d_prime: &FieldElement) -> Result<FieldElement> {
    field.sqrt(&field.div(d, d_prime)?)
}

/// `c1 = (g s)^{⊙_d r}`, `c2 = (h s)^{⊙_d r} ⊙_d m`.
pub fn encrypt_with_nonce(
    pk: &PublicKey,
    m: &Parameter,
    d: &FieldElement,
    r: &BigUint,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let PublicKey::Alternative { field, d_prime, g, h } = pk else {
        return Err(Error::SchemeMismatch);
    };
    if !field.is_nonsquare(d) {
        return Err(Error::InvalidValue("per-message d must be a non-square".into()));
    }
    let s = scale_factor(field, d, d_prime)?;
    let gs = param::param_iso_scale(field, g, &s);
    let hs = param::param_iso_scale(field, h, &s);
    let c1 = pow(field, &gs, r, d, counter);
    let hr = pow(field, &hs, r, d, counter);
    let c2 = param::param_mul(field, &hr, m, d);
    Ok(Ciphertext::Alternative { c1, c2, d: d.clone() })
}

/// `(-(c1^{⊙_d sk})) ⊙_d c2`, together with the ciphertext's `d`.
pub fn decrypt_to_param(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    counter: &OpCounter,
) -> Result<(Parameter, FieldElement)> {
    let (PublicKey::Alternative { field, .. }, Ciphertext::Alternative { c1, c2, d }) = (pk, ct) else {
        return Err(Error::SchemeMismatch);
    };
    if !field.is_nonsquare(d) {
        return Err(Error::InvalidValue("ciphertext d is not a non-square".into()));
    }
    let shared = pow(field, c1, sk.value(), d, counter);
    let m = param::param_mul(field, &param::param_inverse(field, &shared), c2, d);
    Ok((m, d.clone()))
}

pub(crate) fn encrypt<R: RngCore + ?Sized>(
    pk: &PublicKey,
    msg: &BigUint,
    pad: u32,
    rng: &mut R,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let field = pk.field();
    let (m, d) = encode_alt(field, msg, pad)?;
    let r = random_exponent(field, rng);
    encrypt_with_nonce(pk, &m, &d, &r, counter)
}

pub(crate) fn decrypt(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    pad: u32,
    counter: &OpCounter,
) -> Result<BigUint> {
    let (m, d) = decrypt_to_param(pk, sk, ct, counter)?;
    let field = pk.field();
    let point = param::point_of_param(&m, &ConicParams::classic(field, d)?)?;
    decode_alt(field, &point, pad)
}
