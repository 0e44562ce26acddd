// Powers in the parameter group by the modified More algorithm, checked
// against `(m + sqrt(d))^e` and compared with Brahmagupta square-and-multiply.

use num_bigint::BigUint;
use pell::conic::{self, ConicParams};
use pell::param::{self, Parameter};
use pell::{FieldContext, OpCounter};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let ctx = FieldContext::generate(256, &mut rng).unwrap();
    let f = ctx.field();
    let d = f.random_nonsquare(&mut rng);
    let m = f.random_element(&mut rng);
    let e = BigUint::parse_bytes(b"deadbeefcafebabe0123456789abcdef", 16).unwrap();

    let u = Parameter::Finite(m.clone());
    let more_ops = OpCounter::new();
    let r = param::param_pow_more_metered(f, &u, &e, &d, &more_ops);
    let (a, b) = param::redei_oracle(f, &m, &e, &d);
    assert_eq!(r, Parameter::Finite(f.div(&a, &b).unwrap()));
    println!("m^e = A/B: {r:?}");

    let classic = ConicParams::classic(f, d.clone()).unwrap();
    let pt = param::point_of_param(&u, &classic).unwrap();
    let brah_ops = OpCounter::new();
    let pe = conic::point_pow_metered(f, &pt, &e, &d, &brah_ops);
    assert_eq!(param::param_of_point(&pe, &classic).unwrap(), r);

    let (mo, bo) = (more_ops.counts(), brah_ops.counts());
    println!("{}-bit exponent with {} set bits", e.bits(), e.count_ones());
    println!("  More:        {} mul, {} inv", mo.mul, mo.inv);
    println!("  Brahmagupta: {} mul, {} inv", bo.mul, bo.inv);
}
