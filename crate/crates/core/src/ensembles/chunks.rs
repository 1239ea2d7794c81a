use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EnsembleSpec;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of chunk `chunk_index`; a pure function of its two arguments.
pub fn chunk_seed(master_seed: u64, chunk_index: u64) -> u64 {
    mix64(master_seed ^ chunk_index)
}

/// Random stream for the member at `offset` within a chunk. Each member owns
/// a separate ChaCha stream, so it never depends on how much randomness its
/// neighbours consumed.
pub fn member_stream(chunk_seed: u64, offset: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed);
    rng.set_stream(offset);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub index: usize,
    pub members: Range<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkPlan {
    pub chunks: Vec<Chunk>,
}

impl ChunkPlan {
    /// Chunk holding `member`, if it is in range.
    pub fn chunk_of(&self, member: usize) -> Option<&Chunk> {
        self.chunks.iter().find(|c| c.members.contains(&member))
    }
}

/// Splits `[0, M)` into consecutive chunks of at most `chunk_size` members.
pub fn plan_chunks(spec: &EnsembleSpec) -> ChunkPlan {
    let size = spec.chunk_size.max(1);
    let chunks = (0..spec.count_m)
        .step_by(size)
        .enumerate()
        .map(|(index, start)| Chunk {
            index,
            members: start..(start + size).min(spec.count_m),
            seed: chunk_seed(spec.master_seed, index as u64),
        })
        .collect();
    ChunkPlan { chunks }
}
