//! Constant gas states and their Riemann-invariant coordinates.

use crate::error::Result;
use crate::pressure::PressureLaw;

/// A constant state (u, v) with the derived quantities h = h(v) and the
/// Riemann invariants s = u + h, r = u - h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub u: f64,
    pub v: f64,
    pub h: f64,
}

impl State {
    pub fn new(law: &PressureLaw, u: f64, v: f64) -> Result<State> {
        let h = law.h_of_v(v)?;
        Ok(State { u, v, h })
    }

    /// State from velocity and the h-coordinate instead of v.
    pub fn from_uh(law: &PressureLaw, u: f64, h: f64) -> Result<State> {
        let v = law.v_of_h(h)?;
        Ok(State { u, v, h })
    }

    /// Riemann invariant s = u + h.
    pub fn s(&self) -> f64 {
        self.u + self.h
    }

    /// Riemann invariant r = u - h.
    pub fn r(&self) -> f64 {
        self.u - self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::gamma_law;
    use approx::assert_relative_eq;

    #[test]
    fn invariants_are_consistent() {
        let law = gamma_law(2.0).unwrap();
        let st = State::new(&law, 0.3, 1.4).unwrap();
        assert!((st.s() - st.r() - 2.0 * st.h).abs() < 1e-12);
        assert!((st.s() + st.r() - 2.0 * st.u).abs() < 1e-12);
    }

    #[test]
    fn from_uh_round_trips() {
        let law = gamma_law(3.0).unwrap();
        let st = State::new(&law, -0.2, 0.85).unwrap();
        let st2 = State::from_uh(&law, st.u, st.h).unwrap();
        assert_relative_eq!(st2.v, st.v, epsilon = 1e-11);
    }
}
