//! Seeded random plat inputs for self-tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{PlatInput, PureBraidWord, Syllable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_n: usize,
    pub max_len: usize,
    pub max_exp: i32,
    pub max_p: u32,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { max_n: 4, max_len: 12, max_exp: 2, max_p: 12 }
    }
}

/// A random word on `2n` strands with at most `max_len` syllables.
pub fn random_word(rng: &mut impl Rng, n: usize, max_len: usize, max_exp: i32) -> PureBraidWord {
    let strands = 2 * n;
    let len = rng.gen_range(0..=max_len);
    let syllables = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands);
            let j = rng.gen_range(i + 1..=strands);
            let mag = rng.gen_range(1..=max_exp);
            Syllable::new(i, j, if rng.gen_bool(0.5) { mag } else { -mag })
        })
        .collect();
    PureBraidWord::new(n, syllables).expect("generated in range")
}

/// One input the pipeline accepts: `p = 0` about a third of the time,
/// otherwise `2n-2 < p <= max_p`.
pub fn random_input(rng: &mut impl Rng, spec: &CorpusSpec) -> PlatInput {
    let n = rng.gen_range(1..=spec.max_n);
    let word = random_word(rng, n, spec.max_len, spec.max_exp);
    let lowest = 2 * n as u32 - 1;
    let p = if rng.gen_bool(1.0 / 3.0) || lowest > spec.max_p {
        0
    } else {
        rng.gen_range(lowest..=spec.max_p)
    };
    PlatInput::new(word, p)
}

pub fn corpus(seed: u64, count: usize, spec: &CorpusSpec) -> Vec<PlatInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_input(&mut rng, spec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_in_range() {
        let spec = CorpusSpec::default();
        let a = corpus(7, 200, &spec);
        assert_eq!(a, corpus(7, 200, &spec));
        for input in &a {
            assert!(input.n() <= 4 && input.word.len() <= 12);
            assert!(input.p == 0 || (input.p as usize > 2 * input.n() - 2 && input.p <= 12));
        }
        assert!(a.iter().any(|i| i.p == 0) && a.iter().any(|i| i.p > 0));
    }
}
