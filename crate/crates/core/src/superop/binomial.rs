//! Superbinomial coefficients `⟨k, p⟩` of the Leibniz rule
//! `Dᵏ∘f = Σ_p ⟨k, p⟩ (−1)^{(k−p)f̃} (Dᵖf) Dᵏ⁻ᵖ`.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Ordinary binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Closed form: `⟨2s+1, 2t+1⟩ = ⟨2s+1, 2t⟩ = ⟨2s, 2t⟩ = C(s, t)`,
/// `⟨2s, 2t+1⟩ = 0`.
pub fn superbinomial(k: u64, p: u64) -> BigInt {
    if p > k {
        return BigInt::zero();
    }
    if k.is_multiple_of(2) && p % 2 == 1 {
        return BigInt::zero();
    }
    binomial(k / 2, p / 2)
}

/// Memoized rows of superbinomials.
#[derive(Debug, Default)]
pub struct SuperBinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl SuperBinomialTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, k: usize, p: usize) -> BigInt {
        if p > k {
            return BigInt::zero();
        }
        while self.rows.len() <= k {
            let n = self.rows.len() as u64;
            self.rows
                .push((0..=n).map(|p| superbinomial(n, p)).collect());
        }
        self.rows[k][p].clone()
    }

    /// Row `k` from a process-wide cache.
    pub fn shared_row(k: usize) -> Vec<BigInt> {
        static TABLE: OnceLock<Mutex<SuperBinomialTable>> = OnceLock::new();
        let table = TABLE.get_or_init(|| Mutex::new(SuperBinomialTable::new()));
        let mut t = table.lock().unwrap_or_else(|e| e.into_inner());
        (0..=k).map(|p| t.get(k, p)).collect()
    }
}
