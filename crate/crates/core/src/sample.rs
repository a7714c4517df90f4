//! Seeded random elements for identity checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{FieldSpec, Scalar};
use crate::freealg::{NCPoly, Word};

/// Coefficients are drawn from this pool (nonzero in every supported field).
const POOL: [i64; 6] = [1, -1, 2, -2, 3, 1];

/// Deterministic sampler of polynomials over a fixed list of words.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    words: Vec<Word>,
    field: FieldSpec,
    max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64, words: Vec<Word>, field: FieldSpec) -> Self {
        assert!(!words.is_empty(), "sampler needs at least one word");
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            words,
            field,
            max_terms: 3,
        }
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n.max(1);
        self
    }

    pub fn scalar(&mut self) -> Scalar {
        loop {
            let s = self.field.from_i64(*POOL.choose(&mut self.rng).expect("pool"));
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn word(&mut self) -> Word {
        self.words.choose(&mut self.rng).expect("words").clone()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn poly(&mut self) -> NCPoly {
        let n = self.rng.gen_range(1..=self.max_terms);
        let mut p = NCPoly::zero(self.field);
        for _ in 0..n {
            let w = self.word();
            let c = self.scalar();
            p.add_term(w, &c);
        }
        if p.is_zero() {
            p = NCPoly::word(self.word(), self.field);
        }
        p
    }

    pub fn fork(&mut self) -> u64 {
        self.rng.gen()
    }
}
