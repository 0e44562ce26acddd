//! ElGamal over the parameter group `(P_d, ⊙)` with More exponentiation.

use num_bigint::BigUint;
use rand::RngCore;

use super::{random_exponent, Ciphertext, PublicKey, SecretKey};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, OpCounter};
use crate::param::{self, Parameter};

pub(crate) fn pow(field: &Field, g: &Parameter, e: &BigUint, d: &FieldElement, counter: &OpCounter) -> Parameter {
    counter.bump_exp();
    param::param_pow_more_metered(field, g, e, d, counter)
}

/// `c1 = g^r`, `c2 = h^r ⊙ m`.
pub fn encrypt_with_nonce(
    pk: &PublicKey,
    m: &Parameter,
    r: &BigUint,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let PublicKey::Parameters { field, d, g, h } = pk else {
        return Err(Error::SchemeMismatch);
    };
    let c1 = pow(field, g, r, d, counter);
    let hr = pow(field, h, r, d, counter);
    let c2 = param::param_mul(field, &hr, m, d);
    Ok(Ciphertext::Parameters { c1, c2 })
}

/// `-(c1^sk) ⊙ c2`.
pub fn decrypt_to_param(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    counter: &OpCounter,
) -> Result<Parameter> {
    let (PublicKey::Parameters { field, d, .. }, Ciphertext::Parameters { c1, c2 }) = (pk, ct) else {
        return Err(Error::SchemeMismatch);
    };
    let shared = pow(field, c1, sk.value(), d, counter);
    Ok(param::param_mul(field, &param::param_inverse(field, &shared), c2, d))
}

/// The message is used as the parameter itself; any `m < q` is accepted.
pub(crate) fn encrypt<R: RngCore + ?Sized>(
    pk: &PublicKey,
    msg: &BigUint,
    rng: &mut R,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    let field = pk.field();
    let m = field.try_elem(msg.clone()).map_err(|_| Error::MessageTooLarge)?;
    let r = random_exponent(field, rng);
    encrypt_with_nonce(pk, &Parameter::Finite(m), &r, counter)
}

pub(crate) fn decrypt(pk: &PublicKey, sk: &SecretKey, ct: &Ciphertext, counter: &OpCounter) -> Result<BigUint> {
    match decrypt_to_param(pk, sk, ct, counter)? {
        Parameter::Finite(m) => Ok(m.into_value()),
        Parameter::Alpha => Err(Error::InvalidValue("decrypted to the identity".into())),
    }
}
