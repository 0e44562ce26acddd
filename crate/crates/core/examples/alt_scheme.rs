// The alternative scheme: a 2n-bit message becomes a whole point on a
// per-message conic, so one ciphertext carries twice the plaintext.

use num_bigint::RandBigInt;
use pell::pke::{self, Ciphertext, SchemeId};
use pell::OpCounter;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let (pk, sk) = pke::keygen(SchemeId::Alternative, 128, &mut rng).unwrap();
    println!("d' = {}, capacity {} bits", pk.d(), pk.capacity_bits());

    let msg = rng.gen_biguint(pk.capacity_bits());
    let ops = OpCounter::new();
    let ct = pke::encrypt_metered(&pk, &msg, pke::R_PAD, &mut rng, &ops).unwrap();
    if let Ciphertext::Alternative { d, .. } = &ct {
        println!("per-message d = {d}");
    }
    println!("exponentiations for one {}-bit message: {}", msg.bits(), ops.counts().exp);
    assert_eq!(pke::decrypt(&pk, &sk, &ct).unwrap(), msg);
    println!("round trip ok");
}
