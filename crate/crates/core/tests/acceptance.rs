//! Acceptance gate. Runs every criterion at its stated tolerance, prints
//! one line per criterion and exits non-zero if any gating criterion fails.
//!
//! Expected values come from oracles written here, independent of the
//! library: brute-force point counts and quadratic characters over small
//! fields, and `(m + t)^e` computed with plain `BigUint` arithmetic.
//!
//! The timing check (criterion 8) runs only with `PELL_BENCH_2048=1`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use pell::bench::{self, Operation};
use pell::conic::{self, ConicParams, PellPoint};
use pell::field::{Field, FieldContext, FieldElement, OpCounter};
use pell::param::{self, Parameter};
use pell::pke::{self, params as pparams, GroupSetup, SchemeId, SecretKey, R_PAD};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?}, limit {limit:?}");
    Ok(t)
}

// ---- oracles -------------------------------------------------------------

/// Quadratic character by listing the squares of `F_p`.
fn chi_brute(a: u64, p: u64) -> i64 {
    if a.is_multiple_of(p) {
        0
    } else if (1..p).any(|r| r * r % p == a % p) {
        1
    } else {
        -1
    }
}

/// `#{(x, y) : x^2 - d y^2 = c}` by exhaustion.
fn count_brute(p: u64, d: u64, c: u64) -> usize {
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            if (x * x % p + p - d * (y * y % p) % p) % p == c % p {
                n += 1;
            }
        }
    }
    n
}

/// `(m + t)^e = A + B t` modulo `t^2 - d` and `p`, by square-and-multiply
/// on pairs of integers.
fn ext_pow(m: &BigUint, e: &BigUint, d: &BigUint, p: &BigUint) -> (BigUint, BigUint) {
    let mul = |(a, b): (BigUint, BigUint), (c, e): (BigUint, BigUint)| {
        ((&a * &c + d * &b * &e) % p, (&a * &e + &b * &c) % p)
    };
    let base = (m % p, BigUint::one());
    let mut acc = (BigUint::one(), BigUint::zero());
    for i in (0..e.bits()).rev() {
        acc = mul(acc.clone(), acc);
        if e.bit(i) {
            acc = mul(acc, base.clone());
        }
    }
    acc
}

/// `Q_e(m, d) = A / B`, or `None` for the identity class.
fn redei_value(m: &BigUint, e: &BigUint, d: &BigUint, p: &BigUint) -> Option<BigUint> {
    let (a, b) = ext_pow(m, e, d, p);
    if b.is_zero() {
        return None;
    }
    let b_inv = b.modpow(&(p - 2u8), p);
    Some(a * b_inv % p)
}

fn as_value(u: &Parameter) -> Option<BigUint> {
    u.as_finite().map(|m| m.value().clone())
}

// ---- helpers -------------------------------------------------------------

fn random_point(f: &Field, d: &FieldElement, rng: &mut ChaCha20Rng) -> PellPoint {
    let conic = ConicParams::classic(f, d.clone()).unwrap();
    loop {
        let m = Parameter::Finite(f.random_element(rng));
        if let Ok(pt) = param::point_of_param(&m, &conic) {
            return pt;
        }
    }
}

/// A generalized conic over `d` with a random identity `(a, b)`, `c ≠ 0`.
fn random_gen_conic(f: &Field, d: &FieldElement, rng: &mut ChaCha20Rng) -> ConicParams {
    loop {
        let a = f.random_element(rng);
        let b = f.random_element(rng);
        let c = f.sub(&f.square(&a), &f.mul(d, &f.square(&b)));
        if let Ok(conic) = ConicParams::new(f, d.clone(), c, PellPoint::new(a, b)) {
            return conic;
        }
    }
}

/// Every generalized conic `C_{c,d}` over `F_p` with each admissible identity.
fn all_gen_conics(f: &Field, d: &FieldElement) -> Vec<ConicParams> {
    let p = f.modulus().to_u64_digits()[0];
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let (a, b) = (f.elem(a), f.elem(b));
            let c = f.sub(&f.square(&a), &f.mul(d, &f.square(&b)));
            if let Ok(conic) = ConicParams::new(f, d.clone(), c, PellPoint::new(a, b)) {
                out.push(conic);
            }
        }
    }
    out
}

// ---- criteria ------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for p in [11u64, 13, 23] {
        let f = Field::from_u64(p).unwrap();
        for d in 1..p {
            let de = f.elem(d);
            let chi = chi_brute(d, p);
            let got = ConicParams::classic(&f, de.clone()).unwrap().enumerate().unwrap().len();
            ensure!(got as i64 == p as i64 - chi, "p={p} d={d}: {got} points, expected {}", p as i64 - chi);
            ensure!(got == count_brute(p, d, 1), "p={p} d={d}: enumeration disagrees with brute force");
            checked += 1;
            if chi != -1 {
                continue;
            }
            for c in (1..p).filter(|&c| chi_brute(c, p) == -1) {
                let (a, b) = (0..p)
                    .flat_map(|a| (0..p).map(move |b| (a, b)))
                    .find(|&(a, b)| (a * a % p + p - d * b % p * b % p) % p == c)
                    .unwrap();
                let conic = ConicParams::new(&f, de.clone(), f.elem(c), PellPoint::from_u64(&f, a, b)).unwrap();
                let got = conic.enumerate().unwrap().len();
                ensure!(got as u64 == p + 1, "p={p} d={d} c={c}: {got} points, expected {}", p + 1);
                ensure!(got == count_brute(p, d, c), "p={p} d={d} c={c}: disagrees with brute force");
                checked += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(1), "group-order census")?;
    Ok(format!("{checked} conics, {t:.2?}"))
}

fn iso_checks(
    f: &Field,
    d: &FieldElement,
    gen: &ConicParams,
    dst: &ConicParams,
    p: &PellPoint,
    q: &PellPoint,
) -> Result<(), String> {
    let classic = ConicParams::classic(f, d.clone()).unwrap();
    let pq = conic::brahmagupta(f, p, q, d);

    // π on the classic conic
    let lhs = param::param_of_point(&pq, &classic).map_err(|e| e.to_string())?;
    let rhs = param::param_mul(
        f,
        &param::param_of_point(p, &classic).unwrap(),
        &param::param_of_point(q, &classic).unwrap(),
        d,
    );
    ensure!(lhs == rhs, "π not a homomorphism on C_d at {p:?}, {q:?}");

    // φ and φ⁻¹
    let (pp, qq) = (gen.phi(p), gen.phi(q));
    ensure!(gen.contains(&pp), "φ leaves the conic");
    ensure!(gen.phi_inv(&pp) == *p, "φ⁻¹ ∘ φ ≠ id");
    ensure!(gen.phi(&gen.phi_inv(&pp)) == pp, "φ ∘ φ⁻¹ ≠ id");
    ensure!(gen.phi(&pq) == gen.gen_brahmagupta(&pp, &qq), "φ not a homomorphism");

    // π on the generalized conic
    let lhs = param::param_of_point(&gen.gen_brahmagupta(&pp, &qq), gen).map_err(|e| e.to_string())?;
    let rhs = param::param_mul(
        f,
        &param::param_of_point(&pp, gen).unwrap(),
        &param::param_of_point(&qq, gen).unwrap(),
        d,
    );
    ensure!(lhs == rhs, "π not a homomorphism on C_(c,d)");

    // composition between generalized conics
    let moved = gen.gen_iso(&pp, dst).unwrap();
    ensure!(moved == dst.phi(&gen.phi_inv(&pp)), "gen_iso ≠ φ' ∘ φ⁻¹");
    ensure!(dst.contains(&moved), "gen_iso leaves the target conic");
    ensure!(
        gen.gen_iso(&gen.gen_brahmagupta(&pp, &qq), dst).unwrap()
            == dst.gen_brahmagupta(&moved, &gen.gen_iso(&qq, dst).unwrap()),
        "gen_iso not a homomorphism"
    );
    Ok(())
}

fn scale_check(
    f: &Field,
    d_prime: &FieldElement,
    s: &FieldElement,
    p: &PellPoint,
    q: &PellPoint,
) -> Result<(), String> {
    let d = f.mul(d_prime, &f.square(s));
    let img = |pt: &PellPoint| conic::iso_scale(f, pt, s, &d, d_prime).unwrap();
    let lhs = img(&conic::brahmagupta(f, p, q, &d));
    let rhs = conic::brahmagupta(f, &img(p), &img(q), d_prime);
    ensure!(lhs == rhs, "iso_scale does not preserve products");
    ensure!(img(p).norm(f, d_prime) == f.one(), "iso_scale leaves C_d'");
    Ok(())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let ctx = FieldContext::generate(256, &mut r).unwrap();
    let f = ctx.field();
    for _ in 0..1000 {
        let d = f.random_nonsquare(&mut r);
        let gen = random_gen_conic(f, &d, &mut r);
        let dst = random_gen_conic(f, &d, &mut r);
        let p = random_point(f, &d, &mut r);
        let q = random_point(f, &d, &mut r);
        iso_checks(f, &d, &gen, &dst, &p, &q)?;

        let d_prime = f.random_nonzero(&mut r);
        let s = f.random_nonzero(&mut r);
        let d_scaled = f.mul(&d_prime, &f.square(&s));
        let p = random_point(f, &d_scaled, &mut r);
        let q = random_point(f, &d_scaled, &mut r);
        scale_check(f, &d_prime, &s, &p, &q)?;
    }
    let random_t = start.elapsed();

    let f = Field::from_u64(11).unwrap();
    let mut pairs = 0usize;
    for dv in 1..11u64 {
        let d = f.elem(dv);
        let classic = ConicParams::classic(&f, d.clone()).unwrap();
        let pts = classic.enumerate().unwrap();
        let conics = all_gen_conics(&f, &d);
        for (i, gen) in conics.iter().enumerate() {
            let dst = &conics[(i * 7 + 3) % conics.len()];
            for p in &pts {
                for q in &pts {
                    iso_checks(&f, &d, gen, dst, p, q)?;
                    pairs += 1;
                }
            }
        }
        for s in 1..11u64 {
            let s = f.elem(s);
            let d_scaled = f.mul(&d, &f.square(&s));
            let pts = ConicParams::classic(&f, d_scaled).unwrap().enumerate().unwrap();
            for p in &pts {
                for q in &pts {
                    scale_check(&f, &d, &s, p, q)?;
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(30), "isomorphism suite")?;
    Ok(format!("1000 random trials at 256 bits ({random_t:.2?}), {pairs} exhaustive pairs at p=11, {t:.2?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let ctx = FieldContext::generate(256, &mut r).unwrap();
    let f = ctx.field();
    let p = f.modulus();
    for _ in 0..200 {
        let d = f.random_nonsquare(&mut r);
        let m = f.random_element(&mut r);
        let e = r.gen_biguint(256);
        let u = Parameter::Finite(m.clone());
        let more = param::param_pow_more(f, &u, &e, &d);
        // square-and-multiply with ⊙ itself
        let mut acc = Parameter::Alpha;
        for i in (0..e.bits()).rev() {
            acc = param::param_mul(f, &acc, &acc, &d);
            if e.bit(i) {
                acc = param::param_mul(f, &acc, &u, &d);
            }
        }
        let oracle = redei_value(m.value(), &e, d.value(), p);
        ensure!(as_value(&more) == oracle, "More ≠ oracle for m={m}, e={e}");
        ensure!(acc == more, "iterated ⊙ ≠ More for m={m}, e={e}");
    }
    let f = Field::from_u64(11).unwrap();
    let p11 = BigUint::from(11u8);
    for dv in (1..11u64).filter(|&d| chi_brute(d, 11) == -1) {
        let d = f.elem(dv);
        for mv in 0..11u64 {
            let u = Parameter::finite(&f, mv);
            let mut fold = Parameter::Alpha;
            for e in 0..=50u64 {
                let eb = BigUint::from(e);
                let more = param::param_pow_more(&f, &u, &eb, &d);
                let oracle = redei_value(&BigUint::from(mv), &eb, &BigUint::from(dv), &p11);
                ensure!(more == fold, "p=11 d={dv} m={mv} e={e}: More ≠ fold");
                ensure!(as_value(&more) == oracle, "p=11 d={dv} m={mv} e={e}: More ≠ oracle");
                fold = param::param_mul(&f, &fold, &u, &d);
            }
        }
    }
    let t = within(start, Duration::from_secs(30), "exponentiation equivalence")?;
    Ok(format!("200 random at 256 bits, exhaustive e <= 50 at p=11, {t:.2?}"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let ctx = FieldContext::generate(256, &mut r).unwrap();
    let f = ctx.field();
    let d = f.random_nonsquare(&mut r);
    let classic = ConicParams::classic(f, d.clone()).unwrap();
    let g = conic::random_generator(&ctx, &d, &mut r).unwrap();
    let pi_g = param::param_of_point(&g, &classic).unwrap();
    for _ in 0..200 {
        let e = r.gen_biguint_below(&ctx.group_order());
        let lhs = param::param_of_point(&conic::point_pow(f, &g, &e, &d), &classic).unwrap();
        let rhs = param::param_pow_more(f, &pi_g, &e, &d);
        ensure!(lhs == rhs, "π(G^e) ≠ π(G)^e for e={e}");
    }
    Ok("200 random exponents at 256 bits".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    let mut trips = 0;
    for n in [128u64, 256] {
        let ctx = FieldContext::generate(n, &mut r).unwrap();
        for scheme in SchemeId::ALL {
            let mut keys = None;
            for i in 0..100 {
                if i % 10 == 0 {
                    keys = Some(pke::keygen_in(scheme, &ctx, &mut r).unwrap());
                }
                let (pk, sk) = keys.as_ref().unwrap();
                let msg = r.gen_biguint(scheme.capacity_bits(n));
                let ct = pke::encrypt(pk, &msg, &mut r).map_err(|e| format!("{scheme} n={n}: {e}"))?;
                let back = pke::decrypt(pk, sk, &ct).map_err(|e| format!("{scheme} n={n}: {e}"))?;
                ensure!(back == msg, "{scheme} n={n}: round trip changed the message");
                trips += 1;
            }
        }
    }

    // every d, generator, key, message and nonce at p = 11
    let ctx = FieldContext::from_small_prime(11).unwrap();
    let f = ctx.field();
    let counter = OpCounter::new();
    let mut small = 0;
    for dv in (1..11u64).filter(|&d| chi_brute(d, 11) == -1) {
        let d = f.elem(dv);
        for gv in 0..11u64 {
            let g = Parameter::finite(f, gv);
            if !param::has_full_order(&ctx, &g, &d) {
                continue;
            }
            let setup = GroupSetup::Parameters { field: f.clone(), d: d.clone(), g };
            for skv in 2..=11u64 {
                let pk = setup.keys_from_secret(&BigUint::from(skv), &counter);
                let sk = SecretKey::new(BigUint::from(skv));
                for mv in 0..11u64 {
                    for rv in 2..=11u64 {
                        let m = Parameter::finite(f, mv);
                        let ct = pparams::encrypt_with_nonce(&pk, &m, &BigUint::from(rv), &counter).unwrap();
                        let back = pparams::decrypt_to_param(&pk, &sk, &ct, &counter).unwrap();
                        ensure!(back == m, "p=11 d={dv} sk={skv} m={mv} r={rv}: got {back:?}");
                        ensure!(
                            pke::decrypt(&pk, &sk, &ct).unwrap() == BigUint::from(mv),
                            "p=11 public decrypt mismatch"
                        );
                        small += 1;
                    }
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(120), "PKE round trips")?;
    Ok(format!("{trips} random round trips, {small} exhaustive at p=11, {t:.2?}"))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for n in [128u64, 256, 512] {
        let rows = bench::measure_sizes(n).map_err(|e| e.to_string())?;
        for row in rows {
            let (ct, plain, pk_fixed) = match row.scheme {
                SchemeId::Points => (4 * n, n, 6 * n),
                SchemeId::Parameters => (2 * n, n, 4 * n),
                SchemeId::Alternative => (3 * n, 2 * n, 3 * n),
            };
            let reserve = match row.scheme {
                SchemeId::Points => 1 + R_PAD as u64,
                SchemeId::Parameters => 1,
                SchemeId::Alternative => 2 + R_PAD as u64,
            };
            let s = row.scheme;
            ensure!(row.ct_bits == ct, "{s} n={n}: ct {} bits, expected {ct}", row.ct_bits);
            ensure!(row.sk_bits == n, "{s} n={n}: sk {} bits, expected {n}", row.sk_bits);
            ensure!(row.reserve_bits == reserve, "{s} n={n}: reserve {} bits", row.reserve_bits);
            ensure!(
                row.capacity_bits == plain - reserve,
                "{s} n={n}: capacity {} bits, expected {plain} - {reserve}",
                row.capacity_bits
            );
            // the Alternative key adds the small d' on top of 3n
            let extra = row.pk_bits.checked_sub(pk_fixed);
            let extra_ok = match s {
                SchemeId::Alternative => matches!(extra, Some(1..=7)),
                _ => extra == Some(0),
            };
            ensure!(extra_ok, "{s} n={n}: pk {} bits, dominant term {pk_fixed}", row.pk_bits);
        }
        lines.push(format!("n={n} ok"));
    }
    Ok(format!("ct 4n/2n/3n, plaintext n/n/2n minus reserve; {}", lines.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let ctx = FieldContext::generate(256, &mut r).unwrap();
    let f = ctx.field();
    let d = f.random_nonsquare(&mut r);
    let g = conic::random_generator(&ctx, &d, &mut r).unwrap();
    let u = param::random_generator(&ctx, &d, &mut r).unwrap();

    // Flipping one clear bit of e to 1 adds exactly one multiply step.
    let mut brah_step = Vec::new();
    let mut more_step = Vec::new();
    let mut more_inv = Vec::new();
    let mut brah_inv = Vec::new();
    for _ in 0..50 {
        let mut e = r.gen_biguint(256) | (BigUint::one() << 255u32);
        let i = r.gen_range(0..255u64);
        e.set_bit(i, false);
        let mut e1 = e.clone();
        e1.set_bit(i, true);
        let count_b = |e: &BigUint| {
            let c = OpCounter::new();
            conic::point_pow_metered(f, &g, e, &d, &c);
            c.counts()
        };
        let count_m = |e: &BigUint| {
            let c = OpCounter::new();
            param::param_pow_more_metered(f, &u, e, &d, &c);
            c.counts()
        };
        let (b0, b1, m0, m1) = (count_b(&e), count_b(&e1), count_m(&e), count_m(&e1));
        brah_step.push(b1.mul - b0.mul);
        more_step.push(m1.mul - m0.mul);
        more_inv.extend([m0.inv, m1.inv]);
        brah_inv.extend([b0.inv, b1.inv]);
    }
    let uniform = |v: &[u64]| v.iter().all(|&x| x == v[0]);
    ensure!(uniform(&brah_step) && uniform(&more_step), "multiply-step cost varies with e");
    let (bs, ms) = (brah_step[0], more_step[0]);
    let inv_ok = more_inv.iter().all(|&x| x == 1) && brah_inv.iter().all(|&x| x == 0);

    // Alternative on one 2n-bit message vs Parameters on its two halves.
    let n = ctx.bits();
    let setup_p = GroupSetup::generate(SchemeId::Parameters, &ctx, &mut r).unwrap();
    let setup_a = GroupSetup::generate(SchemeId::Alternative, &ctx, &mut r).unwrap();
    let (pk_p, _) = setup_p.keys(&mut r);
    let (pk_a, _) = setup_a.keys(&mut r);
    let msg = r.gen_biguint(SchemeId::Alternative.capacity_bits(n));
    let c_alt = OpCounter::new();
    pke::encrypt_metered(&pk_a, &msg, R_PAD, &mut r, &c_alt).map_err(|e| e.to_string())?;
    let half = SchemeId::Parameters.capacity_bits(n);
    let blocks = [&msg & ((BigUint::one() << half) - 1u8), &msg >> half];
    ensure!(blocks[1].bits() <= half, "message does not split into two Parameters blocks");
    let c_par = OpCounter::new();
    for b in &blocks {
        pke::encrypt_metered(&pk_p, b, R_PAD, &mut r, &c_par).map_err(|e| e.to_string())?;
    }
    let (ea, ep) = (c_alt.counts().exp, c_par.counts().exp);
    let halving = ep == 2 * ea && ea == 2;

    let detail = format!(
        "multiply step: Brahmagupta {bs} muls (expected 5), More {ms} muls (expected 4); \
         More inversions per exponentiation {} (expected 1); exponentiations Alternative {ea} vs Parameters {ep}",
        more_inv[0]
    );
    ensure!(bs == 5 && ms == 4 && inv_ok && halving, "{detail}");
    Ok(detail)
}

fn criterion_8() -> Option<Outcome> {
    if std::env::var("PELL_BENCH_2048").ok().as_deref() != Some("1") {
        return None;
    }
    let cells = match bench::bench_samples(&SchemeId::ALL, &[2048], 10, 2048) {
        Ok(c) => c,
        Err(e) => return Some(Err(e.to_string())),
    };
    let median = |s: SchemeId| {
        cells
            .iter()
            .find(|c| c.scheme == s && c.operation == Operation::Keygen)
            .unwrap()
            .median_seconds()
    };
    let (pt, pa, al) = (median(SchemeId::Points), median(SchemeId::Parameters), median(SchemeId::Alternative));
    let detail = format!("median keygen over 10 reps at n=2048: points {pt:.4}s, params {pa:.4}s, alt {al:.4}s");
    Some(if pa <= pt && al <= pt { Ok(detail) } else { Err(detail) })
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS  {name}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL  {name}: {detail}");
            false
        }
    }
}

fn main() {
    // `cargo test -- --list` and friends pass flags; only run on a plain invocation.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut ok = true;
    ok &= run("criterion 1 (group order)", criterion_1);
    ok &= run("criterion 2 (isomorphisms)", criterion_2);
    ok &= run("criterion 3 (exponentiation equivalence)", criterion_3);
    ok &= run("criterion 4 (cross-representation)", criterion_4);
    ok &= run("criterion 5 (PKE correctness)", criterion_5);
    ok &= run("criterion 6 (payload sizes)", criterion_6);
    ok &= run("criterion 7 (operation counts)", criterion_7);
    match criterion_8() {
        None => println!("SKIP  criterion 8 (timing, informational): set PELL_BENCH_2048=1"),
        Some(Ok(d)) => println!("INFO  criterion 8 (timing, informational): trend holds; {d}"),
        Some(Err(d)) => println!("INFO  criterion 8 (timing, informational): trend not observed; {d}"),
    }
    if !ok {
        std::process::exit(1);
    }
}
