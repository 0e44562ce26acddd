//! ElGamal-style public-key encryption over the Pell conic group.
//!
//! Three variants share the cyclic group of order `p + 1`:
//!
//! * [`SchemeId::Points`] works with points of `C_d` and the Brahmagupta
//!   square-and-multiply.
//! * [`SchemeId::Parameters`] works with parameters and Rédei-function
//!   exponentiation; ciphertexts are half the size.
//! * [`SchemeId::Alternative`] encodes a `2n`-bit message as a whole point,
//!   picks `d` per message and carries it in the ciphertext; keys live over
//!   the smallest non-square `d'` and are moved across by `m ↦ s m`.
//!
//! **Warning:** these are textbook ElGamal constructions. Ciphertexts are
//! malleable and the schemes are not IND-CCA secure. No constant-time
//! guarantees are made.

pub mod alt;
pub mod encode;
mod message;
pub mod params;
pub mod points;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::{CryptoRng, RngCore};

use crate::conic::PellPoint;
use crate::error::{Error, Result};
use crate::field::{Field, FieldContext, FieldElement, OpCounter};
use crate::param::Parameter;

pub use encode::R_PAD;
pub use message::Message;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Points,
    Parameters,
    Alternative,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Points, SchemeId::Parameters, SchemeId::Alternative];

    /// Short name used on the command line and in wire headers.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Points => "points",
            SchemeId::Parameters => "params",
            SchemeId::Alternative => "alt",
        }
    }

    /// Guaranteed plaintext capacity in bits for an `n`-bit modulus with
    /// the default padding.
    pub fn capacity_bits(self, n: u64) -> u64 {
        self.capacity_bits_with_pad(n, R_PAD)
    }

    pub fn capacity_bits_with_pad(self, n: u64, pad: u32) -> u64 {
        (self.ideal_plaintext_bits(n)).saturating_sub(self.reserve_bits_with_pad(pad))
    }

    /// Nominal plaintext size: `n`, `n` and `2n` bits.
    pub fn ideal_plaintext_bits(self, n: u64) -> u64 {
        match self {
            SchemeId::Points | SchemeId::Parameters => n,
            SchemeId::Alternative => 2 * n,
        }
    }

    /// Bits given up to encoding: one guard bit per coordinate (so values
    /// stay below `2^(n-1) < p`) plus the padding counter where a search
    /// is needed.
    pub fn reserve_bits(self) -> u64 {
        self.reserve_bits_with_pad(R_PAD)
    }

    pub fn reserve_bits_with_pad(self, pad: u32) -> u64 {
        match self {
            SchemeId::Points => 1 + pad as u64,
            SchemeId::Parameters => 1,
            SchemeId::Alternative => 2 + pad as u64,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "points" => Ok(SchemeId::Points),
            "params" | "parameters" => Ok(SchemeId::Parameters),
            "alt" | "alternative" => Ok(SchemeId::Alternative),
            other => Err(Error::InvalidValue(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublicKey {
    /// `(q, d, G, H)` with `H = G^{⊗ sk}`.
    Points {
        field: Field,
        d: FieldElement,
        g: PellPoint,
        h: PellPoint,
    },
    /// `(q, d, g, h)` with `h = g^{⊙ sk}`.
    Parameters {
        field: Field,
        d: FieldElement,
        g: Parameter,
        h: Parameter,
    },
    /// `(p, d', g, h)` with `d'` the smallest non-square.
    Alternative {
        field: Field,
        d_prime: FieldElement,
        g: Parameter,
        h: Parameter,
    },
}

impl PublicKey {
    pub fn scheme(&self) -> SchemeId {
        match self {
            PublicKey::Points { .. } => SchemeId::Points,
            PublicKey::Parameters { .. } => SchemeId::Parameters,
            PublicKey::Alternative { .. } => SchemeId::Alternative,
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            PublicKey::Points { field, .. }
            | PublicKey::Parameters { field, .. }
            | PublicKey::Alternative { field, .. } => field,
        }
    }

    /// `d` for the first two schemes, `d'` for the alternative one.
    pub fn d(&self) -> &FieldElement {
        match self {
            PublicKey::Points { d, .. } | PublicKey::Parameters { d, .. } => d,
            PublicKey::Alternative { d_prime, .. } => d_prime,
        }
    }

    pub fn bits(&self) -> u64 {
        self.field().bits()
    }

    pub fn capacity_bits(&self) -> u64 {
        self.scheme().capacity_bits(self.bits())
    }
}

/// The exponent `sk ∈ {2, ..., q}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey(BigUint);

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretKey(..)")
    }
}

impl SecretKey {
    pub fn new(sk: BigUint) -> Self {
        SecretKey(sk)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    fn check(&self, field: &Field) -> Result<()> {
        if self.0 < BigUint::from(2u8) || &self.0 > field.modulus() {
            return Err(Error::InvalidValue("secret key outside {2, ..., q}".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ciphertext {
    Points { c1: PellPoint, c2: PellPoint },
    Parameters { c1: Parameter, c2: Parameter },
    Alternative { c1: Parameter, c2: Parameter, d: FieldElement },
}

impl Ciphertext {
    pub fn scheme(&self) -> SchemeId {
        match self {
            Ciphertext::Points { .. } => SchemeId::Points,
            Ciphertext::Parameters { .. } => SchemeId::Parameters,
            Ciphertext::Alternative { .. } => SchemeId::Alternative,
        }
    }
}

/// Uniform exponent in `{2, ..., q}`.
pub fn random_exponent<R: RngCore + ?Sized>(field: &Field, rng: &mut R) -> BigUint {
    rng.gen_biguint_range(&BigUint::from(2u8), &(field.modulus() + BigUint::one()))
}

/// Public group data chosen before the key pair (key generation steps
/// that pick the modulus, `d` and the generator).
#[derive(Clone, Debug)]
pub enum GroupSetup {
    Points { field: Field, d: FieldElement, g: PellPoint },
    Parameters { field: Field, d: FieldElement, g: Parameter },
    Alternative { field: Field, d_prime: FieldElement, g: Parameter },
}

impl GroupSetup {
    /// Picks `d` (or `d'`) and a generator of order `p + 1` over `ctx`.
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(
        scheme: SchemeId,
        ctx: &FieldContext,
        rng: &mut R,
    ) -> Result<Self> {
        let field = ctx.field().clone();
        Ok(match scheme {
            SchemeId::Points => {
                let d = field.random_nonsquare(rng);
                let g = crate::conic::random_generator(ctx, &d, rng)?;
                GroupSetup::Points { field, d, g }
            }
            SchemeId::Parameters => {
                let d = field.random_nonsquare(rng);
                let g = crate::param::random_generator(ctx, &d, rng)?;
                GroupSetup::Parameters { field, d, g }
            }
            SchemeId::Alternative => {
                let d_prime = field.min_nonsquare();
                let g = crate::param::random_generator(ctx, &d_prime, rng)?;
                GroupSetup::Alternative { field, d_prime, g }
            }
        })
    }

    pub fn scheme(&self) -> SchemeId {
        match self {
            GroupSetup::Points { .. } => SchemeId::Points,
            GroupSetup::Parameters { .. } => SchemeId::Parameters,
            GroupSetup::Alternative { .. } => SchemeId::Alternative,
        }
    }

    /// Draws `sk` and computes the public element.
    pub fn keys<R: RngCore + ?Sized>(&self, rng: &mut R) -> (PublicKey, SecretKey) {
        self.keys_metered(rng, &OpCounter::new())
    }

    pub fn keys_metered<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        counter: &OpCounter,
    ) -> (PublicKey, SecretKey) {
        let field = match self {
            GroupSetup::Points { field, .. }
            | GroupSetup::Parameters { field, .. }
            | GroupSetup::Alternative { field, .. } => field,
        };
        let sk = random_exponent(field, rng);
        (self.keys_from_secret(&sk, counter), SecretKey(sk))
    }

    /// Public key for a given secret exponent.
    pub fn keys_from_secret(&self, sk: &BigUint, counter: &OpCounter) -> PublicKey {
        match self.clone() {
            GroupSetup::Points { field, d, g } => {
                let h = points::pow(&field, &g, sk, &d, counter);
                PublicKey::Points { field, d, g, h }
            }
            GroupSetup::Parameters { field, d, g } => {
                let h = params::pow(&field, &g, sk, &d, counter);
                PublicKey::Parameters { field, d, g, h }
            }
            GroupSetup::Alternative { field, d_prime, g } => {
                let h = params::pow(&field, &g, sk, &d_prime, counter);
                PublicKey::Alternative { field, d_prime, g, h }
            }
        }
    }
}

/// Full key generation at `bits` bits: a fresh prime `p = 2p' - 1`, the
/// group setup and the key pair.
pub fn keygen<R: RngCore + CryptoRng + ?Sized>(
    scheme: SchemeId,
    bits: u64,
    rng: &mut R,
) -> Result<(PublicKey, SecretKey)> {
    let ctx = FieldContext::generate(bits, rng)?;
    keygen_in(scheme, &ctx, rng)
}

/// Key generation over an existing field context.
pub fn keygen_in<R: RngCore + CryptoRng + ?Sized>(
    scheme: SchemeId,
    ctx: &FieldContext,
    rng: &mut R,
) -> Result<(PublicKey, SecretKey)> {
    Ok(GroupSetup::generate(scheme, ctx, rng)?.keys(rng))
}

/// Encrypts a plaintext integer below `2^capacity_bits`.
pub fn encrypt<R: RngCore + ?Sized>(pk: &PublicKey, msg: &BigUint, rng: &mut R) -> Result<Ciphertext> {
    encrypt_metered(pk, msg, R_PAD, rng, &OpCounter::new())
}

pub fn decrypt(pk: &PublicKey, sk: &SecretKey, ct: &Ciphertext) -> Result<BigUint> {
    decrypt_metered(pk, sk, ct, R_PAD, &OpCounter::new())
}

/// [`encrypt`] with an explicit padding width, recording group
/// exponentiations and field operations.
pub fn encrypt_metered<R: RngCore + ?Sized>(
    pk: &PublicKey,
    msg: &BigUint,
    pad: u32,
    rng: &mut R,
    counter: &OpCounter,
) -> Result<Ciphertext> {
    match pk {
        PublicKey::Points { .. } => points::encrypt(pk, msg, pad, rng, counter),
        PublicKey::Parameters { .. } => params::encrypt(pk, msg, rng, counter),
        PublicKey::Alternative { .. } => alt::encrypt(pk, msg, pad, rng, counter),
    }
}

pub fn decrypt_metered(
    pk: &PublicKey,
    sk: &SecretKey,
    ct: &Ciphertext,
    pad: u32,
    counter: &OpCounter,
) -> Result<BigUint> {
    if pk.scheme() != ct.scheme() {
        return Err(Error::SchemeMismatch);
    }
    sk.check(pk.field())?;
    match pk {
        PublicKey::Points { .. } => points::decrypt(pk, sk, ct, pad, counter),
        PublicKey::Parameters { .. } => params::decrypt(pk, sk, ct, counter),
        PublicKey::Alternative { .. } => alt::decrypt(pk, sk, ct, pad, counter),
    }
}

/// Encrypts a byte message; see [`Message`] for the framing.
pub fn encrypt_message<R: RngCore + ?Sized>(
    pk: &PublicKey,
    msg: &Message,
    rng: &mut R,
) -> Result<Ciphertext> {
    let v = msg.to_int(pk.scheme(), pk.bits())?;
    encrypt(pk, &v, rng)
}

pub fn decrypt_message(pk: &PublicKey, sk: &SecretKey, ct: &Ciphertext) -> Result<Message> {
    Message::from_int(&decrypt(pk, sk, ct)?)
}
