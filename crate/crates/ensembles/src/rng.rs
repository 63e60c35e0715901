use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Words reserved per block within a replica stream.
const BLOCK_SHIFT: u32 = 36;

/// Independent counter-based stream for `(seed, replica, block)`.
///
/// Replica `r` draws the same numbers whether replicas run serially or in
/// parallel, and rows of a matrix (blocks) never share state.
pub fn stream(seed: u64, replica: u64, block: u32) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng.set_word_pos((block as u128) << BLOCK_SHIFT);
    rng
}

/// Stream reserved for auxiliary draws of a replica (e.g. random bases).
pub fn aux_stream(seed: u64, replica: u64) -> ChaCha20Rng {
    // The top block index is never used by a matrix row.
    stream(seed, replica, u32::MAX)
}
