//! Points of Pell conics `x^2 - d y^2 = c` and their group laws.
//!
//! The classic hyperbola (`c = 1`, identity `(1, 0)`) uses the Brahmagupta
//! product `(x1 x2 + d y1 y2, x1 y2 + y1 x2)`. A generalized conic with an
//! arbitrary identity `(a, b)` multiplies through `(1/c) (a, -b) ⊗ P ⊗ Q`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::field::{Field, FieldContext, FieldElement, Metered, OpCounter};
use crate::param::{self, Parameter};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellPoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl PellPoint {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        PellPoint { x, y }
    }

    /// `(1, 0)`, the identity of the classic hyperbola.
    pub fn one(field: &Field) -> Self {
        PellPoint::new(field.one(), field.zero())
    }

    pub fn from_u64(field: &Field, x: u64, y: u64) -> Self {
        PellPoint::new(field.elem(x), field.elem(y))
    }

    /// `x^2 - d y^2`.
    pub fn norm(&self, field: &Field, d: &FieldElement) -> FieldElement {
        let dy2 = field.mul(d, &field.square(&self.y));
        field.sub(&field.square(&self.x), &dy2)
    }
}

/// A conic `x^2 - d y^2 = c` with a chosen identity point `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicParams {
    field: Field,
    d: FieldElement,
    c: FieldElement,
    c_inv: FieldElement,
    identity: PellPoint,
}

impl ConicParams {
    /// The classic Pell hyperbola `x^2 - d y^2 = 1` with identity `(1, 0)`.
    pub fn classic(field: &Field, d: FieldElement) -> Result<Self> {
        Self::new(field, d, field.one(), PellPoint::one(field))
    }

    pub fn new(field: &Field, d: FieldElement, c: FieldElement, identity: PellPoint) -> Result<Self> {
        if d.is_zero() || c.is_zero() {
            return Err(Error::InvalidValue("conic needs nonzero d and c".into()));
        }
        if identity.norm(field, &d) != c {
            return Err(Error::NotOnConic);
        }
        let c_inv = field.inv(&c)?;
        Ok(ConicParams {
            field: field.clone(),
            d,
            c,
            c_inv,
            identity,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn identity(&self) -> &PellPoint {
        &self.identity
    }

    pub fn is_classic(&self) -> bool {
        self.c.is_one() && self.identity.x.is_one() && self.identity.y.is_zero()
    }

    pub fn contains(&self, p: &PellPoint) -> bool {
        p.norm(&self.field, &self.d) == self.c
    }

    /// Builds a point, rejecting coordinates off the conic.
    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<PellPoint> {
        let p = PellPoint::new(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnConic)
        }
    }

    fn scale(&self, k: &FieldElement, p: &PellPoint) -> PellPoint {
        let f = &self.field;
        PellPoint::new(f.mul(k, &p.x), f.mul(k, &p.y))
    }

    /// `P ⊗_{a,b,c,d} Q = (1/c) (a, -b) ⊗_d P ⊗_d Q`.
    pub fn gen_brahmagupta(&self, p: &PellPoint, q: &PellPoint) -> PellPoint {
        let f = &self.field;
        let a_bar = PellPoint::new(self.identity.x.clone(), f.neg(&self.identity.y));
        let t = brahmagupta(f, &a_bar, p, &self.d);
        let t = brahmagupta(f, &t, q, &self.d);
        self.scale(&self.c_inv, &t)
    }

    /// Inverse under `⊗_{a,b,c,d}`: `(1/c) (a, b) ⊗ (a, b) ⊗ (x, -y)`.
    ///
    /// The conjugate in the last factor is what makes
    /// `gen_brahmagupta(P, gen_inverse(P))` equal the identity.
    pub fn gen_inverse(&self, p: &PellPoint) -> PellPoint {
        let f = &self.field;
        let a2 = brahmagupta(f, &self.identity, &self.identity, &self.d);
        let t = brahmagupta(f, &a2, &conjugate(f, p), &self.d);
        self.scale(&self.c_inv, &t)
    }

    /// `φ: C_d -> C_{c,d}`, `(x, y) ↦ (a, b) ⊗_d (x, y)`.
    pub fn phi(&self, p: &PellPoint) -> PellPoint {
        brahmagupta(&self.field, &self.identity, p, &self.d)
    }

    /// `φ⁻¹: C_{c,d} -> C_d`, `(x, y) ↦ (1, 0) ⊗_{a,b,c,d} (x, y)`.
    pub fn phi_inv(&self, p: &PellPoint) -> PellPoint {
        self.gen_brahmagupta(&PellPoint::one(&self.field), p)
    }

    /// Isomorphism onto another conic with the same `d`:
    /// `(x, y) ↦ (a', b') ⊗_{a,b,c,d} (x, y)`.
    pub fn gen_iso(&self, p: &PellPoint, dst: &ConicParams) -> Result<PellPoint> {
        if self.d != dst.d || self.field != dst.field {
            return Err(Error::InvalidValue("isomorphism needs the same d".into()));
        }
        Ok(self.gen_brahmagupta(dst.identity(), p))
    }

    /// Every point of the conic, by scanning `x` and solving for `y`.
    /// Refuses moduli above 2^16.
    pub fn enumerate(&self) -> Result<Vec<PellPoint>> {
        let f = &self.field;
        let p = f.modulus().to_u64().filter(|&p| p <= 1 << 16).ok_or(Error::TooLarge)?;
        let d_inv = f.inv(&self.d)?;
        let mut out = Vec::new();
        for xv in 0..p {
            let x = f.elem(xv);
            // y^2 = (x^2 - c) / d
            let y2 = f.mul(&f.sub(&f.square(&x), &self.c), &d_inv);
            if let Ok(y) = f.sqrt(&y2) {
                let ny = f.neg(&y);
                let both = ny != y;
                out.push(PellPoint::new(x.clone(), y));
                if both {
                    out.push(PellPoint::new(x, ny));
                }
            }
        }
        Ok(out)
    }
}

/// Classic Brahmagupta product on `C_d`.
pub fn brahmagupta(field: &Field, p: &PellPoint, q: &PellPoint, d: &FieldElement) -> PellPoint {
    let counter = OpCounter::new();
    brahmagupta_metered(&Metered::new(field, &counter), p, q, d)
}

/// Five multiplications: `x1 x2`, `y1 y2`, `d (y1 y2)`, `x1 y2`, `y1 x2`.
pub(crate) fn brahmagupta_metered(
    m: &Metered<'_>,
    p: &PellPoint,
    q: &PellPoint,
    d: &FieldElement,
) -> PellPoint {
    let xx = m.mul(&p.x, &q.x);
    let yy = m.mul(&p.y, &q.y);
    let dyy = m.mul(d, &yy);
    let xy = m.mul(&p.x, &q.y);
    let yx = m.mul(&p.y, &q.x);
    PellPoint::new(m.add(&xx, &dyy), m.add(&xy, &yx))
}

/// Inverse on the classic hyperbola, `(x, -y)`.
pub fn conjugate(field: &Field, p: &PellPoint) -> PellPoint {
    PellPoint::new(p.x.clone(), field.neg(&p.y))
}

/// Isomorphism `C_d -> C_{d'}`, `(x, y) ↦ (x, s y)`, valid when `d = d' s^2`.
pub fn iso_scale(
    field: &Field,
    p: &PellPoint,
    s: &FieldElement,
    d: &FieldElement,
    d_prime: &FieldElement,
) -> Result<PellPoint> {
    if field.mul(d_prime, &field.square(s)) != *d {
        return Err(Error::BadScale);
    }
    Ok(PellPoint::new(p.x.clone(), field.mul(s, &p.y)))
}

/// `P^{⊗e}` on `C_d` by left-to-right square-and-multiply.
pub fn point_pow(field: &Field, p: &PellPoint, e: &BigUint, d: &FieldElement) -> PellPoint {
    let counter = OpCounter::new();
    point_pow_metered(field, p, e, d, &counter)
}

/// [`point_pow`] recording its field operations in `counter`.
///
/// Squaring costs 4 multiplications (`x^2`, `y^2`, `d y^2`, `x y`), a
/// multiply step costs 5.
pub fn point_pow_metered(
    field: &Field,
    p: &PellPoint,
    e: &BigUint,
    d: &FieldElement,
    counter: &OpCounter,
) -> PellPoint {
    let m = Metered::new(field, counter);
    let mut x = field.one();
    let mut y = field.zero();
    for i in (0..e.bits()).rev() {
        let x2 = m.mul(&x, &x);
        let y2 = m.mul(&y, &y);
        let dy2 = m.mul(d, &y2);
        let xy = m.mul(&x, &y);
        x = m.add(&x2, &dy2);
        y = m.double(&xy);
        if e.bit(i) {
            let r = brahmagupta_metered(&m, &PellPoint::new(x, y), p, d);
            x = r.x;
            y = r.y;
        }
    }
    PellPoint::new(x, y)
}

/// Whether `g` has order exactly `p + 1` on `C_d`: `g^((p+1)/f) ≠ (1, 0)`
/// for every prime `f | p + 1`.
pub fn has_full_order(ctx: &FieldContext, g: &PellPoint, d: &FieldElement) -> bool {
    let f = ctx.field();
    let one = PellPoint::one(f);
    let order = ctx.group_order();
    ctx.order_factors()
        .iter()
        .all(|q| point_pow(f, g, &(&order / q), d) != one)
}

/// A random point of order `p + 1` on `C_d`, for non-square `d`.
///
/// Candidates come from random parameters pushed through the inverse
/// parameterization, then the order test rejects the rest.
pub fn random_generator<R: RngCore + CryptoRng + ?Sized>(
    ctx: &FieldContext,
    d: &FieldElement,
    rng: &mut R,
) -> Result<PellPoint> {
    let f = ctx.field();
    if !f.is_nonsquare(d) {
        return Err(Error::InvalidValue("generator search needs non-square d".into()));
    }
    let conic = ConicParams::classic(f, d.clone())?;
    loop {
        let m = Parameter::Finite(f.random_element(rng));
        let g = param::point_of_param(&m, &conic)?;
        if has_full_order(ctx, &g, d) {
            return Ok(g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Chi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f11() -> Field {
        Field::from_u64(11).unwrap()
    }

    fn pt(f: &Field, x: u64, y: u64) -> PellPoint {
        PellPoint::from_u64(f, x, y)
    }

    #[test]
    fn classic_product() {
        let f = f11();
        let d = f.elem(2u8);
        // (9 + 2*4, 2*3*2) mod 11
        let r = brahmagupta(&f, &pt(&f, 3, 2), &pt(&f, 3, 2), &d);
        assert_eq!(r, pt(&f, (9 + 8) % 11, 12 % 11));
        assert_eq!(r, pt(&f, 6, 1));
        assert_eq!(r.norm(&f, &d), f.one());
        assert_eq!(brahmagupta(&f, &pt(&f, 3, 2), &PellPoint::one(&f), &d), pt(&f, 3, 2));
        assert_eq!(brahmagupta(&f, &pt(&f, 3, 2), &conjugate(&f, &pt(&f, 3, 2)), &d), PellPoint::one(&f));
    }

    #[test]
    fn generalized_identity() {
        let f = f11();
        let conic = ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 3, 3)).unwrap();
        assert!(conic.contains(&pt(&f, 3, 8)));
        assert_eq!(conic.gen_brahmagupta(&pt(&f, 3, 3), &pt(&f, 3, 3)), pt(&f, 3, 3));
        assert_eq!(conic.gen_brahmagupta(&pt(&f, 3, 8), &pt(&f, 3, 3)), pt(&f, 3, 8));
        assert_eq!(conic.gen_inverse(&pt(&f, 3, 3)), pt(&f, 3, 3));
    }

    #[test]
    fn generalized_inverse_all_points() {
        let f = f11();
        let conic = ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 3, 3)).unwrap();
        for p in conic.enumerate().unwrap() {
            let inv = conic.gen_inverse(&p);
            assert!(conic.contains(&inv));
            assert_eq!(conic.gen_brahmagupta(&p, &inv), pt(&f, 3, 3), "P={p:?}");
        }
        let classic = ConicParams::classic(&f, f.elem(2u8)).unwrap();
        for p in classic.enumerate().unwrap() {
            assert_eq!(classic.gen_inverse(&p), conjugate(&f, &p));
        }
    }

    #[test]
    fn scale_isomorphism() {
        let f = f11();
        let (d, dp, s) = (f.elem(2u8), f.elem(8u8), f.elem(6u8));
        let img = iso_scale(&f, &pt(&f, 3, 2), &s, &d, &dp).unwrap();
        assert_eq!(img, pt(&f, 3, 1));
        assert_eq!(img.norm(&f, &dp), f.one());
        assert_eq!(iso_scale(&f, &PellPoint::one(&f), &s, &d, &dp).unwrap(), PellPoint::one(&f));
        assert_eq!(iso_scale(&f, &pt(&f, 3, 2), &f.one(), &d, &d).unwrap(), pt(&f, 3, 2));
        assert_eq!(iso_scale(&f, &pt(&f, 3, 2), &f.elem(2u8), &d, &dp), Err(Error::BadScale));
    }

    #[test]
    fn phi_maps() {
        let f = f11();
        let conic = ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 3, 3)).unwrap();
        assert_eq!(conic.phi(&PellPoint::one(&f)), pt(&f, 3, 3));
        assert_eq!(conic.phi_inv(&pt(&f, 3, 3)), PellPoint::one(&f));
        // (9 + 2*6, 6 + 9) mod 11
        let img = conic.phi(&pt(&f, 3, 2));
        assert_eq!(img, pt(&f, 21 % 11, 15 % 11));
        assert_eq!(img, pt(&f, 10, 4));
        assert!(conic.contains(&img));
        assert_eq!(conic.phi_inv(&img), pt(&f, 3, 2));
    }

    #[test]
    fn gen_iso_basics() {
        let f = f11();
        let src = ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 3, 3)).unwrap();
        let dst = ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 3, 8)).unwrap();
        assert_eq!(src.gen_iso(src.identity(), &dst).unwrap(), *dst.identity());
        for p in src.enumerate().unwrap() {
            assert_eq!(src.gen_iso(&p, &src).unwrap(), p);
        }
        let other_d = ConicParams::classic(&f, f.elem(6u8)).unwrap();
        assert!(src.gen_iso(src.identity(), &other_d).is_err());
    }

    #[test]
    fn pow_small() {
        let f = f11();
        let d = f.elem(2u8);
        let g = pt(&f, 3, 2);
        assert_eq!(point_pow(&f, &g, &BigUint::from(1u8), &d), g);
        assert_eq!(point_pow(&f, &g, &BigUint::from(0u8), &d), PellPoint::one(&f));
        assert_eq!(point_pow(&f, &g, &BigUint::from(2u8), &d), pt(&f, 6, 1));
        let mut acc = PellPoint::one(&f);
        for _ in 0..12 {
            acc = brahmagupta(&f, &acc, &g, &d);
        }
        assert_eq!(acc, PellPoint::one(&f));
        assert_eq!(point_pow(&f, &g, &BigUint::from(12u8), &d), PellPoint::one(&f));
    }

    #[test]
    fn enumeration_counts() {
        let f = f11();
        let count = |d: u64, c: u64, id: PellPoint| {
            ConicParams::new(&f, f.elem(d), f.elem(c), id).unwrap().enumerate().unwrap().len()
        };
        assert_eq!(count(2, 1, PellPoint::one(&f)), 12);
        assert_eq!(count(4, 1, PellPoint::one(&f)), 10);
        assert_eq!(count(2, 2, pt(&f, 3, 3)), 12);
        let big = Field::from_u64(65521).unwrap();
        let conic = ConicParams::classic(&big, big.elem(3u8)).unwrap();
        let expected = 65521 - big.chi(&big.elem(3u8)).as_i8() as i64;
        assert_eq!(conic.enumerate().unwrap().len() as i64, expected);
        let too_big = Field::from_u64(65539).unwrap();
        let conic = ConicParams::classic(&too_big, too_big.elem(2u8)).unwrap();
        assert_eq!(conic.enumerate(), Err(Error::TooLarge));
    }

    #[test]
    fn order_census_p11() {
        let f = f11();
        let d = f.elem(2u8);
        let conic = ConicParams::classic(&f, d.clone()).unwrap();
        let order = |g: &PellPoint| {
            let mut acc = g.clone();
            let mut k = 1;
            while acc != PellPoint::one(&f) {
                acc = brahmagupta(&f, &acc, g, &d);
                k += 1;
            }
            k
        };
        let full: Vec<PellPoint> = conic.enumerate().unwrap().into_iter().filter(|g| order(g) == 12).collect();
        // cyclic of order 12 has phi(12) = 4 generators
        assert_eq!(full.len(), 4);
        let ctx = FieldContext::from_small_prime(11).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_generator(&ctx, &d, &mut rng).unwrap();
            assert!(full.contains(&g));
        }
    }

    #[test]
    fn generator_rejects_square_d() {
        let ctx = FieldContext::from_small_prime(11).unwrap();
        let d = ctx.field().elem(4u8);
        assert_eq!(ctx.field().chi(&d), Chi::Residue);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        assert!(random_generator(&ctx, &d, &mut rng).is_err());
    }

    #[test]
    fn pow_step_costs() {
        let f = f11();
        let d = f.elem(2u8);
        let g = pt(&f, 3, 2);
        let run = |e: u64| {
            let c = OpCounter::new();
            point_pow_metered(&f, &g, &BigUint::from(e), &d, &c);
            c.counts().mul
        };
        // 4 per squaring, 5 per multiply
        assert_eq!(run(0b1000), 4 * 4 + 5);
        assert_eq!(run(0b1111), 4 * 4 + 5 * 4);
    }

    #[test]
    fn construction_checks() {
        let f = f11();
        assert_eq!(
            ConicParams::new(&f, f.elem(2u8), f.elem(2u8), pt(&f, 1, 0)),
            Err(Error::NotOnConic)
        );
        let conic = ConicParams::classic(&f, f.elem(2u8)).unwrap();
        assert!(conic.point(f.elem(3u8), f.elem(2u8)).is_ok());
        assert_eq!(conic.point(f.elem(3u8), f.elem(3u8)), Err(Error::NotOnConic));
    }
}
