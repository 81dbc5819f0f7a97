//! Exact Riemann solver: intersects the 1-family curve from the left state
//! with the 2-family curve into the right state.  Every interaction in the
//! front tracking scheme is resolved through this solver, so outgoing
//! strengths are exact and the only approximation anywhere is in front
//! speeds.

use serde::Serialize;

use crate::curves::{WaveFamily, WaveKind};
use crate::error::{PtrackError, Result};
use crate::numerics;
use crate::pressure::PressureLaw;
use crate::state::State;

/// Strengths below this are treated as no wave at all.
pub const CANCELLATION_THRESHOLD: f64 = 1e-13;

/// Speed of an elementary wave: a sharp value for shocks, a characteristic
/// fan for rarefactions.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum WaveSpeed {
    Shock(f64),
    Fan { slow: f64, fast: f64 },
}

impl WaveSpeed {
    /// Representative speed with the fan collapsed by weight `w` toward its
    /// fast edge.
    pub fn pick(&self, w: f64) -> f64 {
        match *self {
            WaveSpeed::Shock(s) => s,
            WaveSpeed::Fan { slow, fast } => slow + w * (fast - slow),
        }
    }
}

/// One outgoing elementary wave of a Riemann solution.
#[derive(Debug, Clone, Copy)]
pub struct RWave {
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub left: State,
    pub right: State,
    pub speed: WaveSpeed,
}

impl RWave {
    /// Strength |h_left - h_right|.
    pub fn strength(&self) -> f64 {
        (self.left.h - self.right.h).abs()
    }

    /// Signed strength a = h_left - h_right.
    pub fn signed_strength(&self) -> f64 {
        self.left.h - self.right.h
    }
}

/// Middle state plus the two outgoing waves of a Riemann problem.
#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub middle: State,
    pub wave1: RWave,
    pub wave2: RWave,
}

impl RiemannSolution {
    /// The outgoing waves with strength above the cancellation threshold.
    pub fn surviving_waves(&self) -> Vec<RWave> {
        [self.wave1, self.wave2]
            .into_iter()
            .filter(|w| w.strength() >= CANCELLATION_THRESHOLD)
            .collect()
    }
}

/// u on the 1-family outgoing curve from `left`, and its v-derivative.
fn u1_curve(law: &PressureLaw, left: &State, v: f64) -> Result<(f64, f64)> {
    let d = law.derivs(v)?;
    if v < left.v {
        // compressive: shock branch
        let w2 = (v - left.v) * (law.p(left.v)? - d.p);
        let w = w2.max(0.0).sqrt();
        if w == 0.0 {
            return Ok((left.u, (-d.p1).sqrt()));
        }
        let dw = ((law.p(left.v)? - d.p) - (v - left.v) * d.p1) / (2.0 * w);
        Ok((left.u - w, -dw))
    } else {
        // expansive: rarefaction branch, u = u_l + h_l - h(v)
        Ok((left.u + left.h - law.h_of_v(v)?, (-d.p1).sqrt()))
    }
}

/// u on the 2-family curve whose right state is `right`, and its v-derivative.
fn u2_curve(law: &PressureLaw, right: &State, v: f64) -> Result<(f64, f64)> {
    let d = law.derivs(v)?;
    if v < right.v {
        // middle more compressed than the right: 2-shock
        let w2 = (right.v - v) * (d.p - law.p(right.v)?);
        let w = w2.max(0.0).sqrt();
        if w == 0.0 {
            return Ok((right.u, -(-d.p1).sqrt()));
        }
        let dw = (-(d.p - law.p(right.v)?) + (right.v - v) * d.p1) / (2.0 * w);
        Ok((right.u + w, dw))
    } else {
        // expansive: 2-rarefaction, u_m = u_r + h(v) - h_r
        Ok((right.u + law.h_of_v(v)? - right.h, -(-d.p1).sqrt()))
    }
}

/// Solves the Riemann problem for a pair of states.
///
/// The middle v is the unique root of the strictly increasing difference of
/// the two wave curves; Newton iteration inside a sign bracket with bisection
/// fallback.  Wave kinds follow from the ordering of v across each family.
pub fn solve(law: &PressureLaw, left: &State, right: &State) -> Result<RiemannSolution> {
    let f = |v: f64| -> Result<(f64, f64)> {
        let (a, da) = u1_curve(law, left, v)?;
        let (b, db) = u2_curve(law, right, v)?;
        Ok((a - b, da - db))
    };
    // bracket the root; f is increasing in v
    let (dom_lo, dom_hi) = law.domain();
    let mut lo = left.v.min(right.v);
    let mut hi = left.v.max(right.v);
    let mut flo = f(lo)?.0;
    let mut fhi = f(hi)?.0;
    let mut guard = 0;
    while flo > 0.0 {
        let next = (lo * 0.5).max(dom_lo * (1.0 + 1e-12));
        if next == lo || guard > 600 {
            return Err(PtrackError::DomainExhausted(format!(
                "no middle state below v={lo}: f={flo}"
            )));
        }
        lo = next;
        flo = f(lo)?.0;
        guard += 1;
    }
    while fhi < 0.0 {
        let next = (hi * 2.0).min(dom_hi * (1.0 - 1e-12));
        if next == hi || guard > 1200 {
            return Err(PtrackError::DomainExhausted(format!(
                "no middle state above v={hi}: f={fhi} (vacuum-side data)"
            )));
        }
        hi = next;
        fhi = f(hi)?.0;
        guard += 1;
    }
    let g = |v: f64| f(v).expect("bracket stays inside the domain");
    let v_m = numerics::newton_bracketed(&g, lo, hi, 0.5 * (lo + hi), numerics::root_xtol(), 120)?;
    // anchor the middle velocity on the side with the smaller magnitude:
    // against a very large boundary shock, u_l - W cancels catastrophically
    // and would inject noise into the interior states
    let (u_m, _) = if left.u.abs() <= right.u.abs() {
        u1_curve(law, left, v_m)?
    } else {
        u2_curve(law, right, v_m)?
    };
    let middle = State::new(law, u_m, v_m)?;

    let wave1 = make_wave(law, WaveFamily::First, left, &middle)?;
    let wave2 = make_wave(law, WaveFamily::Second, &middle, right)?;
    Ok(RiemannSolution {
        middle,
        wave1,
        wave2,
    })
}

fn make_wave(
    law: &PressureLaw,
    family: WaveFamily,
    left: &State,
    right: &State,
) -> Result<RWave> {
    let compressive = match family {
        WaveFamily::First => right.v < left.v,
        WaveFamily::Second => right.v > left.v,
    };
    let degenerate = (right.h - left.h).abs() < CANCELLATION_THRESHOLD;
    let (kind, speed) = if degenerate {
        let c = law.wave_speed(0.5 * (left.v + right.v))?;
        let s = match family {
            WaveFamily::First => -c,
            WaveFamily::Second => c,
        };
        (WaveKind::Rarefaction, WaveSpeed::Fan { slow: s, fast: s })
    } else if compressive {
        let dv = right.v - left.v;
        let dp = law.p(right.v)? - law.p(left.v)?;
        let sigma = (-dp / dv).sqrt();
        let sigma = match family {
            WaveFamily::First => -sigma,
            WaveFamily::Second => sigma,
        };
        (WaveKind::Shock, WaveSpeed::Shock(sigma))
    } else {
        let (c_l, c_r) = (law.wave_speed(left.v)?, law.wave_speed(right.v)?);
        let (a, b) = match family {
            WaveFamily::First => (-c_l, -c_r),
            WaveFamily::Second => (c_l, c_r),
        };
        (
            WaveKind::Rarefaction,
            WaveSpeed::Fan {
                slow: a.min(b),
                fast: a.max(b),
            },
        )
    };
    Ok(RWave {
        family,
        kind,
        left: *left,
        right: *right,
        speed,
    })
}

/// A piecewise-constant jump participating in an interaction.
#[derive(Debug, Clone, Copy)]
pub struct FrontJump {
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub left: State,
    pub right: State,
}

/// Resolves a collision of two or more adjacent fronts by the single Riemann
/// problem of the outermost states.
///
/// The fronts must chain: the right state of each front is the left state of
/// the next, within `curve_tol` (scaled).  Opposite-family collisions come
/// out as the crossed pair; same-family collisions merge and may emit a
/// reflected wave of the other family.
pub fn resolve_interaction(law: &PressureLaw, incoming: &[FrontJump]) -> Result<RiemannSolution> {
    if incoming.len() < 2 {
        return Err(PtrackError::Topology(
            "an interaction needs at least two fronts".into(),
        ));
    }
    for pair in incoming.windows(2) {
        let a = &pair[0].right;
        let b = &pair[1].left;
        let scale = 1.0_f64.max(a.u.abs()).max(b.u.abs());
        if (a.u - b.u).abs() > 1e-9 * scale || (a.v - b.v).abs() > 1e-9 * scale {
            return Err(PtrackError::Topology(format!(
                "inner states disagree: ({}, {}) vs ({}, {})",
                a.u, a.v, b.u, b.v
            )));
        }
    }
    solve(law, &incoming[0].left, &incoming.last().unwrap().right)
}
