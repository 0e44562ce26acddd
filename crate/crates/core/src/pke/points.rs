//! ElGamal over `(C_d, ⊗)` with Brahmagupta square-and-multiply.

use num_bigint::BigUint;
use rand::RngCore;

use super::encode::{decode_point, encode_point};
use super::{random_exponent, Ciphertext, PublicKey, SecretKey};
use crate::conic::{self, ConicParams, PellPoint};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Metered, OpCounter};

pub(crate) fn pow(field: &Field, g: &PellPoint, e: &BigUint, d: &FieldElement, counter: &OpCounter) -> PellPoint {
    counter.bump_exp();
    conic::point_pow_metered(field, g, e, d, counter)
}

/// `C1 = G^r`, `C2 = H^r ⊗ P` for an already encoded point `P`.
pub fn encrypt_with_nonce(
    pk: &PublicKey,
    point: &PellPoint,
    r: &BigUint,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let PublicKey::Points { field, d, g, h } = pk else {
        return Err(Error::SchemeMismatch);
    };
    let c1 = pow(field, g, r, d, counter);
    let hr = pow(field, h, r, d, counter);
    let c2 = conic::brahmagupta_metered(&Metered::new(field, counter), &hr, point, d);
    Ok(Ciphertext::Points { c1, c2 })
}

/// `(C1^sk)^{-1} ⊗ C2`.
pub fn decrypt_to_point(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    counter: &OpCounter,
) -> Result<PellPoint> {
    let (PublicKey::Points { field, d, .. }, Ciphertext::Points { c1, c2 }) = (pk, ct) else {
        return Err(Error::SchemeMismatch);
    };
    let conic = ConicParams::classic(field, d.clone())?;
    if !conic.contains(c1) || !conic.contains(c2) {
        return Err(Error::NotOnConic);
    }
    let shared = pow(field, c1, sk.value(), d, counter);
    let m = Metered::new(field, counter);
    Ok(conic::brahmagupta_metered(&m, &conic::conjugate(field, &shared), c2, d))
}

pub(crate) fn encrypt<R: RngCore + ?Sized>(
    pk: &PublicKey,
    msg: &BigUint,
    pad: u32,
    rng: &mut R,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let point = encode_point(pk.field(), msg, pk.d(), pad)?;
    let r = random_exponent(pk.field(), rng);
    encrypt_with_nonce(pk, &point, &r, counter)
}

/// The sign of `x` is irrelevant: only `y` carries the message.
pub(crate) fn decrypt(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    pad: u32,
    counter: &OpCounter,
) -> Result<BigUint> {
    Ok(decode_point(&decrypt_to_point(pk, sk, ct, counter)?, pad))
}
