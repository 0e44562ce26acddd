// ElGamal with conic points: a byte message through keygen, encryption,
// the wire format and decryption.

use pell::pke::{self, Ciphertext, Message, PublicKey, SchemeId};
use pell::wire;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let (pk, sk) = pke::keygen(SchemeId::Points, 128, &mut rng).unwrap();
    let pk_text = pk.to_record().serialize();
    print!("{pk_text}");

    let msg = Message::new(*b"conic points!");
    let ct = pke::encrypt_message(&pk, &msg, &mut rng).unwrap();
    let ct_text = ct.to_record(pk.field()).serialize();
    print!("{ct_text}");

    let pk = PublicKey::from_record(&wire::parse(&pk_text).unwrap()).unwrap();
    let ct = Ciphertext::from_record(&wire::parse(&ct_text).unwrap(), &pk).unwrap();
    let back = pke::decrypt_message(&pk, &sk, &ct).unwrap();
    assert_eq!(back, msg);
    println!("decrypted: {}", String::from_utf8_lossy(back.as_bytes()));
}
