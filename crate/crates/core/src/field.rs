//! Prime-field arithmetic over `F_p` with arbitrary-precision residues.
//!
//! Elements are plain canonical residues; the modulus lives in a [`Field`]
//! handle that is passed explicitly to every operation. Cloning a `Field` is
//! cheap (shared modulus).

use std::cell::Cell;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::prime;

/// A residue in `F_p`, always kept in `0 <= value < p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(BigUint);

impl FieldElement {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Quadratic character of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chi {
    Zero,
    Residue,
    NonResidue,
}

impl Chi {
    pub fn as_i8(self) -> i8 {
        match self {
            Chi::Zero => 0,
            Chi::Residue => 1,
            Chi::NonResidue => -1,
        }
    }
}

struct FieldInner {
    p: BigUint,
    /// (p - 1) / 2, the Euler-criterion exponent.
    half: BigUint,
    bits: u64,
    min_nonsquare: OnceLock<BigUint>,
}

/// Handle to the prime field `F_p`.
///
/// The modulus is only checked to be odd and at least 3; primality is the
/// caller's responsibility (see [`FieldContext`] for checked construction).
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.p)
    }
}

impl Field {
    pub fn new(p: BigUint) -> Result<Self> {
        if p < BigUint::from(3u8) || p.is_even() {
            return Err(Error::BadModulus);
        }
        let half = (&p - 1u8) >> 1;
        let bits = p.bits();
        Ok(Field {
            inner: Arc::new(FieldInner {
                p,
                half,
                bits,
                min_nonsquare: OnceLock::new(),
            }),
        })
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.inner.p
    }

    /// Bit length `n` of the modulus.
    pub fn bits(&self) -> u64 {
        self.inner.bits
    }

    /// Reduces an arbitrary integer into the field.
    pub fn elem(&self, v: impl Into<BigUint>) -> FieldElement {
        FieldElement(v.into() % &self.inner.p)
    }

    /// Accepts `v` only if it is already a canonical residue.
    pub fn try_elem(&self, v: BigUint) -> Result<FieldElement> {
        if v >= self.inner.p {
            return Err(Error::InvalidValue(format!("{v:x} is not below the modulus")));
        }
        Ok(FieldElement(v))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(BigUint::zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(BigUint::one())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let s = &a.0 + &b.0;
        if s >= self.inner.p {
            FieldElement(s - &self.inner.p)
        } else {
            FieldElement(s)
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(&a.0 - &b.0)
        } else {
            FieldElement(&self.inner.p - &b.0 + &a.0)
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        if a.0.is_zero() {
            a.clone()
        } else {
            FieldElement(&self.inner.p - &a.0)
        }
    }

    pub fn double(&self, a: &FieldElement) -> FieldElement {
        self.add(a, a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement((&a.0 * &b.0) % &self.inner.p)
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        a.0.modinv(&self.inner.p)
            .map(FieldElement)
            .ok_or(Error::ZeroInverse)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` by left-to-right square-and-multiply. `pow(0, 0) = 1`.
    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Quadratic character via Euler's criterion.
    pub fn chi(&self, a: &FieldElement) -> Chi {
        if a.is_zero() {
            return Chi::Zero;
        }
        let r = a.0.modpow(&self.inner.half, &self.inner.p);
        if r.is_one() {
            Chi::Residue
        } else {
            debug_assert_eq!(r, &self.inner.p - 1u8);
            Chi::NonResidue
        }
    }

    pub fn is_nonsquare(&self, a: &FieldElement) -> bool {
        self.chi(a) == Chi::NonResidue
    }

    /// Square root by Tonelli-Shanks. Of the two roots `{r, p - r}` the
    /// smaller representative is returned.
    pub fn sqrt(&self, a: &FieldElement) -> Result<FieldElement> {
        match self.chi(a) {
            Chi::Zero => return Ok(self.zero()),
            Chi::NonResidue => return Err(Error::NotASquare),
            Chi::Residue => {}
        }
        let p = &self.inner.p;
        let pm1 = p - 1u8;
        let s = pm1.trailing_zeros().expect("p - 1 is nonzero");
        let q = &pm1 >> s;

        let z = self.min_nonsquare();
        let mut m = s;
        let mut c = z.0.modpow(&q, p);
        let mut t = a.0.modpow(&q, p);
        let mut r = a.0.modpow(&((&q + 1u8) >> 1), p);

        while !t.is_one() {
            // least i with t^(2^i) = 1
            let mut i = 0u64;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = (&t2 * &t2) % p;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = (&b * &b) % p;
            }
            m = i;
            c = (&b * &b) % p;
            t = (t * &c) % p;
            r = (r * &b) % p;
        }
        let other = p - &r;
        Ok(FieldElement(if other < r { other } else { r }))
    }

    /// Smallest `d >= 2` with `chi(d) = -1`.
    pub fn min_nonsquare(&self) -> FieldElement {
        let v = self.inner.min_nonsquare.get_or_init(|| {
            let mut d = BigUint::from(2u8);
            loop {
                if self.chi(&FieldElement(d.clone())) == Chi::NonResidue {
                    return d;
                }
                d += 1u8;
            }
        });
        FieldElement(v.clone())
    }

    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_biguint_below(&self.inner.p))
    }

    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_biguint_range(&BigUint::one(), &self.inner.p))
    }

    /// Uniform quadratic non-residue, by rejection sampling.
    pub fn random_nonsquare<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let d = self.random_element(rng);
            if self.chi(&d) == Chi::NonResidue {
                return d;
            }
        }
    }
}

/// A field whose multiplicative structure has been checked for group use:
/// `p` is a probable prime and the factorisation of the conic group order
/// `p + 1` is known.
///
/// Generated contexts always have the shape `p = 2p' - 1` with `p'` prime,
/// so `p + 1 = 2p'`.
#[derive(Clone, Debug)]
pub struct FieldContext {
    field: Field,
    p_prime: Option<BigUint>,
    order_factors: Vec<BigUint>,
}

impl FieldContext {
    /// Generates an `n`-bit prime `p = 2p' - 1` with `p'` prime.
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(bits: u64, rng: &mut R) -> Result<Self> {
        if bits < 8 {
            return Err(Error::BitLengthTooSmall(bits));
        }
        let (p, p_prime) = prime::gen_conic_prime(bits, rng);
        Self::assemble(p, p_prime)
    }

    /// Wraps a known prime `p` of the form `2p' - 1`, checking both.
    pub fn from_conic_prime<R: RngCore + ?Sized>(p: BigUint, rng: &mut R) -> Result<Self> {
        if p.is_even() || !prime::is_probable_prime(&p, prime::MR_ROUNDS, rng) {
            return Err(Error::BadModulus);
        }
        let p_prime = (&p + 1u8) >> 1;
        if !prime::is_probable_prime(&p_prime, prime::MR_ROUNDS, rng) {
            return Err(Error::BadModulus);
        }
        Self::assemble(p, p_prime)
    }

    /// Any odd prime below 2^40; `p + 1` is factored by trial division.
    /// Meant for exhaustive small-field work.
    pub fn from_small_prime(p: u64) -> Result<Self> {
        if p >= 1 << 40 {
            return Err(Error::TooLarge);
        }
        if p < 3 || !prime::is_prime_u64(p) {
            return Err(Error::BadModulus);
        }
        let field = Field::from_u64(p)?;
        let order_factors = prime::distinct_prime_factors(p + 1)
            .into_iter()
            .map(BigUint::from)
            .collect();
        let half = p.div_ceil(2);
        let p_prime = prime::is_prime_u64(half).then(|| BigUint::from(half));
        Ok(FieldContext {
            field,
            p_prime,
            order_factors,
        })
    }

    fn assemble(p: BigUint, p_prime: BigUint) -> Result<Self> {
        let field = Field::new(p)?;
        let mut order_factors = vec![BigUint::from(2u8)];
        if p_prime != order_factors[0] {
            order_factors.push(p_prime.clone());
        }
        Ok(FieldContext {
            field,
            p_prime: Some(p_prime),
            order_factors,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> &BigUint {
        self.field.modulus()
    }

    /// `p'` with `p = 2p' - 1`, when `p` has that shape.
    pub fn p_prime(&self) -> Option<&BigUint> {
        self.p_prime.as_ref()
    }

    /// Order `p + 1` of the conic group for non-square `d`.
    pub fn group_order(&self) -> BigUint {
        self.field.modulus() + 1u8
    }

    /// Distinct prime factors of `p + 1`.
    pub fn order_factors(&self) -> &[BigUint] {
        &self.order_factors
    }

    pub fn bits(&self) -> u64 {
        self.field.bits()
    }

    /// `p` as a machine integer, when it fits.
    pub fn p_u64(&self) -> Option<u64> {
        self.p().to_u64()
    }
}

/// Snapshot of operation counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Field multiplications, squarings included.
    pub mul: u64,
    pub inv: u64,
    /// Group exponentiations.
    pub exp: u64,
}

/// Per-call operation accumulator. Not `Sync`: each call owns its own.
#[derive(Debug, Default)]
pub struct OpCounter {
    mul: Cell<u64>,
    inv: Cell<u64>,
    exp: Cell<u64>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            mul: self.mul.get(),
            inv: self.inv.get(),
            exp: self.exp.get(),
        }
    }

    pub(crate) fn bump_exp(&self) {
        self.exp.set(self.exp.get() + 1);
    }
}

/// Field view that records every multiplication and inversion it performs.
pub(crate) struct Metered<'a> {
    pub field: &'a Field,
    pub counter: &'a OpCounter,
}

impl<'a> Metered<'a> {
    pub fn new(field: &'a Field, counter: &'a OpCounter) -> Self {
        Metered { field, counter }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.counter.mul.set(self.counter.mul.get() + 1);
        self.field.mul(a, b)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.counter.inv.set(self.counter.inv.get() + 1);
        self.field.inv(a)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.add(a, b)
    }

    pub fn double(&self, a: &FieldElement) -> FieldElement {
        self.field.double(a)
    }
}
