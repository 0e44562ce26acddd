//! Primality testing and generation of primes `p = 2p' - 1`.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

/// Random Miller-Rabin rounds per primality verdict (error < 4^-64).
pub const MR_ROUNDS: usize = 64;

const SIEVE_LIMIT: u32 = 1 << 15;
const SIEVE_WINDOW: usize = 1 << 13;

fn small_primes() -> Vec<u32> {
    let n = SIEVE_LIMIT as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for machine integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One Miller-Rabin round for odd `n > 3` with witness `a`.
fn mr_round(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

fn mr_setup(n: &BigUint) -> (BigUint, BigUint, u64) {
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    (n_minus_1, d, s)
}

/// Miller-Rabin with `rounds` uniformly random witnesses.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    for &q in &[3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % q).is_zero() {
            return false;
        }
    }
    let (n_minus_1, d, s) = mr_setup(n);
    let lo = BigUint::from(2u8);
    let hi = n - 1u8; // exclusive: witnesses in [2, n - 2]
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&lo, &hi);
        if !mr_round(n, &n_minus_1, &d, s, &a) {
            return false;
        }
    }
    true
}

fn base2_probable(n: &BigUint) -> bool {
    let (n_minus_1, d, s) = mr_setup(n);
    mr_round(n, &n_minus_1, &d, s, &BigUint::from(2u8))
}

/// Draws `(p, p')` with `p` exactly `bits` bits long, `p = 2p' - 1`, both
/// probable primes.
pub(crate) fn gen_conic_prime<R: RngCore + ?Sized>(bits: u64, rng: &mut R) -> (BigUint, BigUint) {
    assert!(bits >= 3);
    // p in [2^(bits-1), 2^bits)  <=>  p' in [2^(bits-2) + 1, 2^(bits-1)]
    let lo = (BigUint::one() << (bits - 2)) + 1u8;
    let hi = BigUint::one() << (bits - 1); // inclusive

    if bits <= 40 {
        let lo = lo.to_u64().unwrap();
        let hi = hi.to_u64().unwrap();
        loop {
            let pp = rng.gen_biguint_range(&BigUint::from(lo), &BigUint::from(hi + 1));
            let pp = pp.to_u64().unwrap();
            if is_prime_u64(pp) && is_prime_u64(2 * pp - 1) {
                return (BigUint::from(2 * pp - 1), BigUint::from(pp));
            }
        }
    }

    let primes = small_primes();
    let mut marks = vec![false; SIEVE_WINDOW];
    loop {
        let mut start = rng.gen_biguint_range(&lo, &(&hi + 1u8));
        if start.is_even() {
            start += 1u8;
        }
        // candidates p' = start + 2j
        marks.iter_mut().for_each(|m| *m = false);
        for &q in primes.iter().skip(1) {
            let q64 = q as u64;
            let r = (&start % q).to_u64().unwrap();
            let inv2 = q64.div_ceil(2); // 2 * inv2 = q + 1 = 1 mod q
            let inv4 = mulmod(inv2, inv2, q64);
            // q | p'  <=>  r + 2j = 0
            let j0 = mulmod((q64 - r) % q64, inv2, q64);
            // q | 2p' - 1  <=>  2r + 4j - 1 = 0
            let j1 = mulmod((1 + 2 * q64 - 2 * r % q64) % q64, inv4, q64);
            for j in [j0, j1] {
                let mut j = j as usize;
                while j < SIEVE_WINDOW {
                    marks[j] = true;
                    j += q as usize;
                }
            }
        }
        for (j, &marked) in marks.iter().enumerate() {
            if marked {
                continue;
            }
            let pp = &start + 2u64 * j as u64;
            if pp > hi {
                break;
            }
            if !base2_probable(&pp) {
                continue;
            }
            let p = (&pp << 1) - 1u8;
            if !base2_probable(&p) {
                continue;
            }
            if is_probable_prime(&pp, MR_ROUNDS, rng) && is_probable_prime(&p, MR_ROUNDS, rng) {
                return (p, pp);
            }
        }
    }
}
