//! Wave-curve machinery: the strength coordinate a, the shock-jump function
//! F, the six elementary wave branches and shock speeds.
//!
//! Conventions follow the (u, h)-plane picture used throughout the crate:
//! waves connect a left state (ubar, vbar) to a right state (u, v), the
//! signed strength of a front is a = h_left - h_right, and |a| is its
//! strength.

use serde::{Deserialize, Serialize};

use crate::error::{PtrackError, Result};
use crate::pressure::PressureLaw;
use crate::state::State;

/// Characteristic family: First is backward (speed -c), Second is forward
/// (speed +c).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveFamily {
    First,
    Second,
}

impl WaveFamily {
    pub fn opposite(self) -> WaveFamily {
        match self {
            WaveFamily::First => WaveFamily::Second,
            WaveFamily::Second => WaveFamily::First,
        }
    }
}

impl std::fmt::Display for WaveFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WaveFamily::First => write!(f, "1"),
            WaveFamily::Second => write!(f, "2"),
        }
    }
}

/// Front kind.  Rarefactions and compressions are centered simple-wave
/// fronts lying on straight lines of the (u, h)-plane; shocks satisfy the
/// jump conditions and the entropy inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Compression,
}

impl std::fmt::Display for WaveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WaveKind::Shock => write!(f, "S"),
            WaveKind::Rarefaction => write!(f, "R"),
            WaveKind::Compression => write!(f, "C"),
        }
    }
}

/// Signed strength coordinate a(v, vbar) = h(vbar) - h(v), strictly
/// increasing in v.
pub fn a_of(law: &PressureLaw, v: f64, v_bar: f64) -> Result<f64> {
    Ok(law.h_of_v(v_bar)? - law.h_of_v(v)?)
}

/// Inverse of [`a_of`] in its first argument: the v with a(v, vbar) = a.
pub fn v_of_a(law: &PressureLaw, a: f64, v_bar: f64) -> Result<f64> {
    law.v_of_h(law.h_of_v(v_bar)? - a)
}

/// Magnitude of the velocity jump across a shock between vbar and v(a, vbar):
/// F(a, vbar) = sqrt((v - vbar)(p(vbar) - p(v))).
///
/// The product under the root is nonnegative because p is decreasing; tiny
/// negative round-off is clamped, anything worse is reported.
pub fn f_jump(law: &PressureLaw, a: f64, v_bar: f64) -> Result<f64> {
    let v = v_of_a(law, a, v_bar)?;
    let radicand = (v - v_bar) * (law.p(v_bar)? - law.p(v)?);
    if radicand < -1e-14 {
        return Err(PtrackError::NumericalFailure {
            context: format!("F radicand negative: a={a}, v_bar={v_bar}"),
            achieved: radicand,
            requested: 0.0,
        });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Which J2 normalization a Taylor formula uses; see the module-level
/// discussion in `interact`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum J2Convention {
    /// The quartic coefficient as defined: (1/32) p'' ((1/2)p''^2 - (1/3)p'''p').
    Defined,
    /// The variant restated with the raw discriminant, 6x larger:
    /// (1/32) p'' (3p''^2 - 2p'p''').
    BlowupScaled,
    /// The normalization that actually matches the exact jump function,
    /// Defined * (-p')^{-9/2} = J1'/(2c).  Convergence-order tests pin this
    /// one down.
    #[default]
    Interaction,
}

/// J2 under the chosen normalization.  All three share the sign of the
/// discriminant, so every sign-based statement is convention-independent.
pub fn j2_value(law: &PressureLaw, v: f64, conv: J2Convention) -> Result<f64> {
    let base = law.j2(v)?;
    Ok(match conv {
        J2Convention::Defined => base,
        J2Convention::BlowupScaled => 6.0 * base,
        J2Convention::Interaction => base * (-law.dp(v)?).powf(-4.5),
    })
}

/// Truncated Taylor expansion of F: sign(a) * a * (1 + J1 a^2 [+ J2 a^3]).
///
/// `order` selects truncation after the cubic (3) or quartic (4) term.
pub fn f_taylor(
    law: &PressureLaw,
    a: f64,
    v_bar: f64,
    order: u8,
    conv: J2Convention,
) -> Result<f64> {
    assert!(order == 3 || order == 4, "order must be 3 or 4");
    let j1 = law.j1(v_bar)?;
    let mut braces = 1.0 + j1 * a * a;
    if order == 4 {
        braces += j2_value(law, v_bar, conv)? * a * a * a;
    }
    Ok(a.signum() * a * braces)
}

/// Velocity of the right state on the selected wave branch through the left
/// state.  The caller names kind and family explicitly; a request that
/// violates the branch inequality is an error, not a reinterpretation.
pub fn curve_u(
    law: &PressureLaw,
    kind: WaveKind,
    family: WaveFamily,
    left: &State,
    v_right: f64,
) -> Result<f64> {
    use WaveFamily::*;
    use WaveKind::*;
    let (h_l, h_r) = (left.h, law.h_of_v(v_right)?);
    let dv = v_right - left.v;
    let branch_ok = match (kind, family) {
        (Rarefaction, First) | (Compression, Second) | (Shock, Second) => dv > 0.0,
        (Rarefaction, Second) | (Compression, First) | (Shock, First) => dv < 0.0,
    };
    if dv == 0.0 {
        return Ok(left.u); // every branch passes through the base point
    }
    if !branch_ok {
        let need = match (kind, family) {
            (Rarefaction, First) | (Compression, Second) | (Shock, Second) => "v > v_left",
            _ => "v < v_left",
        };
        return Err(PtrackError::BranchMismatch(format!(
            "{kind}{family} requires {need}, got v_right={v_right}, v_left={}",
            left.v
        )));
    }
    Ok(match (kind, family) {
        (Rarefaction, First) | (Compression, First) => left.u + h_l - h_r,
        (Rarefaction, Second) | (Compression, Second) => left.u + h_r - h_l,
        (Shock, _) => {
            let radicand = dv * (law.p(left.v)? - law.p(v_right)?);
            left.u - radicand.max(0.0).sqrt()
        }
    })
}

/// Exact jump-condition shock speed for a front joining `left` to `right` in
/// the given family: sigma is -/+ the square root of the jump quotient
/// -dp/dv across the front.
///
/// The pair must actually lie on that family's shock branch (checked against
/// `curve_tol`), and the entropy ordering of the characteristic speeds is
/// verified.
pub fn shock_speed(
    law: &PressureLaw,
    left: &State,
    right: &State,
    family: WaveFamily,
) -> Result<f64> {
    let dv = right.v - left.v;
    if dv == 0.0 {
        return Err(PtrackError::BranchMismatch(
            "shock speed undefined for [v] = 0".into(),
        ));
    }
    let u_curve = curve_u(law, WaveKind::Shock, family, left, right.v)?;
    let scale = 1.0_f64.max(left.u.abs()).max(right.u.abs());
    if (u_curve - right.u).abs() > 1e-9 * scale {
        return Err(PtrackError::OffCurve(format!(
            "pair not on the {family}-shock curve: expected u={u_curve}, got {}",
            right.u
        )));
    }
    let dp = law.p(right.v)? - law.p(left.v)?;
    let sigma_abs = (-dp / dv).sqrt();
    let (c_l, c_r) = (law.wave_speed(left.v)?, law.wave_speed(right.v)?);
    let lax_ok = match family {
        // 1-shock: compressed on the right, c(v_l) < |sigma| < c(v_r)
        WaveFamily::First => c_l < sigma_abs && sigma_abs < c_r,
        // 2-shock: compressed on the left, c(v_r) < |sigma| < c(v_l)
        WaveFamily::Second => c_r < sigma_abs && sigma_abs < c_l,
    };
    if !lax_ok {
        return Err(PtrackError::Entropy(format!(
            "speed ordering fails for {family}-shock: c_l={c_l}, |sigma|={sigma_abs}, c_r={c_r}"
        )));
    }
    Ok(match family {
        WaveFamily::First => -sigma_abs,
        WaveFamily::Second => sigma_abs,
    })
}
