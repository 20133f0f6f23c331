//! Built-in problem data. `a85` is the involution recurrence
//! `t_n = t_(n-1) + (n-1) t_(n-2)`, `t_0 = t_1 = 1`.

use num_bigint::BigInt;

use crate::engine::{solve_expansion, EngineError};
use crate::numeric::ConnectionConstant;
use crate::rational::{int, ratio};
use crate::recurrence::{Expansion, Frame, Recurrence};

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub recurrence: Recurrence,
    /// Frame including the constant `kappa`, used for numeric work.
    pub frame: Frame,
    pub initial: Vec<BigInt>,
    pub constant: ConnectionConstant,
}

impl Preset {
    pub fn by_name(name: &str) -> Option<Preset> {
        match name {
            "a85" => Some(a85()),
            _ => None,
        }
    }

    /// The frame as produced from the recurrence alone (`kappa = 0`).
    pub fn solved_frame(&self) -> Frame {
        self.frame.with_kappa(int(0))
    }

    pub fn expansion(&self, k_max: usize) -> Result<Expansion, EngineError> {
        solve_expansion(&self.recurrence, &self.frame, k_max)
    }

    pub fn terms(&self, n_max: usize) -> Vec<BigInt> {
        self.recurrence
            .unroll(&self.initial, n_max)
            .expect("preset recurrence unrolls")
    }
}

pub const NAMES: &[&str] = &["a85"];

pub fn a85() -> Preset {
    Preset {
        name: "a85",
        recurrence: Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).expect("valid recurrence"),
        frame: Frame::new(ratio(1, 2), int(1), int(0), ratio(-1, 4)),
        initial: vec![BigInt::from(1), BigInt::from(1)],
        constant: ConnectionConstant::InvSqrt2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::seq_recurrence;

    #[test]
    fn a85_terms_match_sequence() {
        assert_eq!(a85().terms(40), seq_recurrence(40));
    }

    #[test]
    fn lookup() {
        assert!(Preset::by_name("a85").is_some());
        assert!(Preset::by_name("a86").is_none());
        assert_eq!(a85().solved_frame().kappa, int(0));
    }
}
