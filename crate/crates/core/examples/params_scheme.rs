// ElGamal in the parameter group: half-size ciphertexts, and the same
// key reused for several messages.

use num_bigint::BigUint;
use pell::pke::{self, SchemeId};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (pk, sk) = pke::keygen(SchemeId::Parameters, 128, &mut rng).unwrap();
    println!("capacity: {} bits per ciphertext", pk.capacity_bits());
    for v in [0u64, 1, 42, u64::MAX] {
        let msg = BigUint::from(v);
        let ct = pke::encrypt(&pk, &msg, &mut rng).unwrap();
        let rec = ct.to_record(pk.field());
        assert_eq!(pke::decrypt(&pk, &sk, &ct).unwrap(), msg);
        println!("{v:>20} -> {} payload bits", rec.payload_bits(pk.bits()));
    }
}
