use serde::{Deserialize, Serialize};

/// Coefficients below this magnitude are dropped from linear combinations.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Operator-norm tolerance for projection and magic-unitary checks.
pub const MAGIC_TOL: f64 = 1e-9;
/// Relative singular-value cutoff for every rank decision.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Relative residual allowed when solving for a coboundary vector.
pub const POISSON_REL_TOL: f64 = 1e-7;
pub const MAX_WORD_LEN: usize = 4;
pub const SERIES_ORDER: usize = 25;
/// Series terms below this magnitude count as negligible.
pub const SERIES_EARLY_EXIT: f64 = 1e-14;
/// Upper bound on scalar terms produced by a coproduct expansion.
pub const TERM_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub rank_threshold: f64,
    pub max_word_len: usize,
    pub series_order: usize,
    pub seed: u64,
    pub term_budget: u128,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: MAGIC_TOL,
            rank_threshold: RANK_THRESHOLD,
            max_word_len: MAX_WORD_LEN,
            series_order: SERIES_ORDER,
            seed: 0,
            term_budget: TERM_BUDGET,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0 && self.rank_threshold > 0.0) {
            return Err(crate::Error::Precondition(
                "tolerances must be positive".into(),
            ));
        }
        if self.max_word_len == 0 || self.series_order == 0 || self.term_budget == 0 {
            return Err(crate::Error::Precondition(
                "word length, series order and term budget must be positive".into(),
            ));
        }
        Ok(())
    }
}
