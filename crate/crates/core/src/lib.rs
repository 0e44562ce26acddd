//! Pell conics over prime fields and ElGamal-style encryption on them.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`]: arithmetic in `F_p`, quadratic character, square roots and
//!   generation of primes `p = 2p' - 1`.
//! * [`conic`]: points of `x^2 - d y^2 = c`, the Brahmagupta product and
//!   its generalization, and the isomorphisms between conics.
//! * [`param`]: the parameter group `F_p ∪ {α}` and Rédei-function
//!   exponentiation.
//! * [`pke`]: the three encryption schemes.
//! * [`wire`], [`bench`], [`cli`]: text serialization, size/timing
//!   measurements and the `pell` command line.
//!
//! ```
//! use pell::pke::{self, SchemeId};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
//! let (pk, sk) = pke::keygen(SchemeId::Parameters, 64, &mut rng).unwrap();
//! let msg = num_bigint::BigUint::from(42u32);
//! let ct = pke::encrypt(&pk, &msg, &mut rng).unwrap();
//! assert_eq!(pke::decrypt(&pk, &sk, &ct).unwrap(), msg);
//! ```

pub mod bench;
pub mod cli;
pub mod conic;
pub mod error;
pub mod field;
pub mod param;
pub mod pke;
pub mod prime;
pub mod wire;

pub use conic::{ConicParams, PellPoint};
pub use error::{Error, Result};
pub use field::{Chi, Field, FieldContext, FieldElement, OpCounter, OpCounts};
pub use param::{Parameter, QuadExt};
pub use pke::{Ciphertext, Message, PublicKey, SchemeId, SecretKey};
