//! Shared numerical routines: adaptive quadrature, bracketed root finding and
//! convergence-order fitting.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{PtrackError, Result};

static ROOT_XTOL_BITS: AtomicU64 = AtomicU64::new(0);

/// Relative x-tolerance used by the root-finding call sites that accept an
/// override (the Riemann middle-state solve and the h-inverse).
pub fn root_xtol() -> f64 {
    match ROOT_XTOL_BITS.load(Ordering::Relaxed) {
        0 => 1e-15,
        bits => f64::from_bits(bits),
    }
}

/// Overrides [`root_xtol`]; values must be positive.
pub fn set_root_xtol(x: f64) {
    assert!(x > 0.0 && x.is_finite());
    ROOT_XTOL_BITS.store(x.to_bits(), Ordering::Relaxed);
}

/// Adaptive quadrature of `f` over `[a, b]` with absolute tolerance `tol`.
///
/// Classic adaptive Simpson refinement with an embedded error estimate; the
/// recursion tolerance is split between halves so the total error stays below
/// `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };
    let flo = f(lo);
    let fhi = f(hi);
    let mid = 0.5 * (lo + hi);
    let fmid = f(mid);
    let whole = simpson(lo, hi, flo, fmid, fhi);
    let mut worst: f64 = 0.0;
    let v = adaptive_step(
        f, lo, hi, flo, fmid, fhi, whole, tol, 60, &mut worst,
    );
    if worst > tol {
        return Err(PtrackError::NumericalFailure {
            context: "adaptive quadrature".into(),
            achieved: worst,
            requested: tol,
        });
    }
    Ok(sign * v)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Richardson: Simpson error of the refined sum is ~delta/15.
    if depth == 0 || delta.abs() <= 15.0 * tol {
        if depth == 0 {
            *worst = worst.max(delta.abs() / 15.0);
        }
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst)
}

/// Root of a monotone function on a bracket, by Newton steps guarded with
/// bisection.  `f_df` returns the function value and its derivative.
///
/// The bracket `[lo, hi]` must satisfy `f(lo) <= 0 <= f(hi)` or the reverse.
/// Converges when the step or the bracket width falls below `xtol`
/// (interpreted relative to the magnitude of the iterate, with an absolute
/// floor of the same size).
pub fn newton_bracketed<F: Fn(f64) -> (f64, f64)>(
    f_df: &F,
    lo: f64,
    hi: f64,
    x0: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let (flo, _) = f_df(lo);
    let (fhi, _) = f_df(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(PtrackError::NumericalFailure {
            context: format!("newton_bracketed: no sign change on [{lo}, {hi}]"),
            achieved: flo.abs().min(fhi.abs()),
            requested: 0.0,
        });
    }
    let rising = fhi > 0.0;
    let mut x = x0.clamp(lo, hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f_df(x);
        if fx == 0.0 {
            return Ok(x);
        }
        // shrink the bracket
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        let scale = x.abs().max(1.0);
        if (next - x).abs() <= xtol * scale || (hi - lo) <= xtol * scale {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Derivative-free bracketed root finding (Illinois variant of false
/// position).  Same bracket contract as [`newton_bracketed`].
pub fn illinois<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(PtrackError::NumericalFailure {
            context: format!("illinois: no sign change on [{lo}, {hi}]"),
            achieved: flo.abs().min(fhi.abs()),
            requested: 0.0,
        });
    }
    let mut side = 0i32;
    let mut x = lo;
    for _ in 0..max_iter {
        x = (lo * fhi - hi * flo) / (fhi - flo);
        if !x.is_finite() || x <= lo.min(hi) || x >= lo.max(hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 || (hi - lo).abs() <= xtol * x.abs().max(1.0) {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(x)
}

/// Outcome of a convergence-order fit over a geometric amplitude ladder.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OrderFit {
    /// log2 error ratios between consecutive usable rungs.
    pub ratios: Vec<f64>,
    /// Least-squares slope of log error against log amplitude.
    pub fitted_order: f64,
    /// RMS residual of that fit.
    pub residual: f64,
    /// Number of rungs kept after the round-off floor guard.
    pub used: usize,
}

/// Fits the convergence order of `errors` measured at `amplitudes`
/// (strictly decreasing).  Rungs whose error falls below `floor` are
/// discarded: down there the measurement is round-off, not truncation.
pub fn fit_order(amplitudes: &[f64], errors: &[f64], floor: f64) -> OrderFit {
    assert_eq!(amplitudes.len(), errors.len());
    let pts: Vec<(f64, f64)> = amplitudes
        .iter()
        .zip(errors.iter())
        .filter(|&(_, &e)| e > floor)
        .map(|(&a, &e)| (a.ln(), e.ln()))
        .collect();
    let mut ratios = Vec::new();
    for w in pts.windows(2) {
        ratios.push((w[0].1 - w[1].1) / (w[0].0 - w[1].0));
    }
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return OrderFit {
            ratios,
            fitted_order: f64::NAN,
            residual: f64::NAN,
            used: pts.len(),
        };
    }
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let icept = (sy - slope * sx) / n;
    let residual = (pts
        .iter()
        .map(|p| {
            let d = p.1 - (icept + slope * p.0);
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    OrderFit {
        ratios,
        fitted_order: slope,
        residual,
        used: pts.len(),
    }
}
