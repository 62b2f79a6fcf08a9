use sha2::{Digest, Sha256};

/// Hex SHA-256 of a canonical request body; the key for caches and
/// cassettes.
pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}
