//! Asymptotic expansions of P-recursive sequences.
//!
//! A recurrence `sum_j p_j(n) t_(n-j) = 0` is matched against the ansatz
//! `t_n ~ C exp(beta (n ln n - n) + c sqrt(n) + alpha ln n + kappa) (1 + sum_k a_k n^(-k/2))`.
//! The `a_k` come out as exact rationals; numeric evaluation and ratio checks
//! against exact terms live in [`numeric`].

pub mod bigfloat;
pub mod engine;
pub mod frame;
pub mod numeric;
pub mod preset;
pub mod rational;
pub mod recurrence;
pub mod render;
pub mod seq;
pub mod series;

pub use bigfloat::BigFloat;
pub use engine::{frame_ratio, poly_to_laurent, residual_check, solve_expansion, EngineError};
pub use frame::frame_solve;
pub use numeric::{
    connection_constant, eval_expansion, ratio_check, ConnectionConstant, NumericError, RatioReport,
};
pub use preset::Preset;
pub use rational::Rational;
pub use recurrence::{Expansion, Frame, IntPoly, Recurrence, RecurrenceError};
pub use seq::{seq_egf, seq_recurrence, seq_sum, SeqError};
pub use series::{PuiseuxSeries, Ramification, SeriesError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
