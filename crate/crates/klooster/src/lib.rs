//! Exact experiments on the congruence `q1 * q2 * ... * qt ≡ c (mod q)`
//! restricted to short wrapped intervals.
//!
//! The library counts solutions of the congruence inside "boxes" of torus
//! intervals, computes the second moment of those counts over all box
//! positions by three independent algorithms (a prefix-sum grid, a
//! point-pair convolution, and the exact spectral identity through
//! Kloosterman sums), and checks the classical Weil and hyper-Kloosterman
//! (Deligne/Weinstein) bounds with explicit constants. A companion module
//! measures how well the solution points of `x*y ≡ 1 (mod q)` cover the
//! square `[0,q]²` (the Fujii–Kitaoka covering radius).
//!
//! Modules:
//!
//! - [`modarith`] — factorization, Euler phi, divisor counts, modular
//!   inverses, unit enumeration.
//! - [`expsums`] — Kloosterman / Ramanujan / hyper-Kloosterman sums, Fejér
//!   kernels, completion of incomplete sums, and their bounds.
//! - [`moments`] — box solution counts, second and higher moments,
//!   bad-box scans, and bound ratios.
//! - [`covering`] — solution-point geometry: covering radius and coverage
//!   fraction curves on a sample grid.
//! - [`cli`] — the command-line front end (`klooster` binary) with
//!   deterministic CSV/JSON/table output.
//!
//! Every public operation is a pure function of its arguments. Expensive
//! scans take an explicit [`Budget`]; exceeding a budget is an error,
//! never a silent truncation. All residue arithmetic uses 128-bit
//! intermediates, so any modulus up to `2^63 - 1` is handled exactly.

pub mod cli;
pub mod covering;
pub mod expsums;
pub mod modarith;
pub mod moments;

pub use modarith::Modulus;

/// Cost limits for enumeration-style operations.
///
/// `max_ops` caps loop iterations (unit-tuple enumerations, Kloosterman
/// evaluations); `max_cells` caps allocated grid cells (prefix-sum tables,
/// covering-distance grids). The defaults are sized for interactive desk
/// use: `q ≤ 4000` for the quadratic grids, `phi(q)^(t-1) ≤ 1e8` for
/// hyper-Kloosterman enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_ops: u64,
    pub max_cells: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_ops: 100_000_000,
            // (q+1)^2 cells at q = 4000, with a little headroom
            max_cells: 17_000_000,
        }
    }
}

impl Budget {
    /// Fails with [`Error::BudgetExceeded`] when `needed` iterations exceed `max_ops`.
    pub fn check_ops(&self, what: &'static str, needed: u128) -> Result<(), Error> {
        if needed > self.max_ops as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                limit: self.max_ops,
            });
        }
        Ok(())
    }

    /// Fails with [`Error::BudgetExceeded`] when `needed` cells exceed `max_cells`.
    pub fn check_cells(&self, what: &'static str, needed: u128) -> Result<(), Error> {
        if needed > self.max_cells as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                limit: self.max_cells,
            });
        }
        Ok(())
    }
}

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("{n} is not invertible mod {q} (gcd {g} > 1)")]
    NotCoprime { n: i64, q: u64, g: u64 },

    #[error("{what} needs {needed} steps, budget allows {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
