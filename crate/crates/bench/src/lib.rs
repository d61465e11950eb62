//! Shared instance generation for the benchmarks.

use stallings::{Alphabet, Letter, Subgroup, Word};

/// Deterministic reduced word from a splitmix-style stream.
pub fn word(state: &mut u64, rank: u32, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let bits = *state >> 33;
        let idx = (bits % rank as u64) as u32 + 1;
        let l = if bits & (1 << 20) == 0 {
            Letter::positive(idx)
        } else {
            Letter::negative(idx)
        };
        if letters.last().map(|p| p.inverse()) != Some(l) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

pub fn subgroup(state: &mut u64, rank: u32, gens: usize, len: usize) -> Subgroup {
    let words = (0..gens).map(|_| word(state, rank, len)).collect();
    Subgroup::new(Alphabet::new(rank), words)
}
