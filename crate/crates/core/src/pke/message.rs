use num_bigint::BigUint;

use super::SchemeId;
use crate::error::{Error, Result};

/// A byte-string plaintext.
///
/// Bytes are framed as the integer `0x01 || bytes` (big-endian) so that
/// leading zero bytes survive the trip through a field element. The
/// sentinel costs one bit of capacity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Message(Vec<u8>);

impl Message {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        Message(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Longest byte message a scheme carries in one ciphertext at `n` bits.
    pub fn max_len(scheme: SchemeId, n: u64) -> usize {
        (scheme.capacity_bits(n).saturating_sub(1) / 8) as usize
    }

    pub fn to_int(&self, scheme: SchemeId, n: u64) -> Result<BigUint> {
        if self.0.len() > Self::max_len(scheme, n) {
            return Err(Error::MessageTooLarge);
        }
        let mut framed = Vec::with_capacity(self.0.len() + 1);
        framed.push(1u8);
        framed.extend_from_slice(&self.0);
        Ok(BigUint::from_bytes_be(&framed))
    }

    pub fn from_int(v: &BigUint) -> Result<Self> {
        let bytes = v.to_bytes_be();
        match bytes.split_first() {
            Some((1, rest)) => Ok(Message(rest.to_vec())),
            _ => Err(Error::InvalidValue("plaintext lacks the message frame".into())),
        }
    }
}
