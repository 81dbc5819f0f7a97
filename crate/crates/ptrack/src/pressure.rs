//! Pressure laws p(v) with p' < 0 and p'' > 0, together with every derived
//! scalar the rest of the crate needs: the wave speed c = sqrt(-p'), the
//! Riemann-invariant integral h(v) and its inverse, the Taylor coefficients
//! J1 and J2 of the shock-jump function, and the sign analysis of the
//! discriminant D = 3 p''^2 - 2 p' p''' that decides whether opposite-family
//! shock crossings amplify or damp wave strengths.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{PtrackError, Result};
use crate::numerics;

/// Pressure and its first four derivatives at a point.
#[derive(Debug, Clone, Copy)]
pub struct PDerivs {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

/// Backend of a [`PressureLaw`]: evaluates p and derivatives, and may supply
/// a closed form for h(v) when one exists.
pub trait PressureModel: Send + Sync {
    fn eval(&self, v: f64) -> PDerivs;
    /// Closed-form h(v), when available (used instead of quadrature).
    fn closed_h(&self, _v: f64) -> Option<f64> {
        None
    }
    /// Closed-form inverse of h, when available.
    fn closed_v_of_h(&self, _h: f64) -> Option<f64> {
        None
    }
}

struct GammaModel {
    gamma: f64,
}

impl PressureModel for GammaModel {
    fn eval(&self, v: f64) -> PDerivs {
        let g = self.gamma;
        let p = v.powf(-g);
        PDerivs {
            p,
            p1: -g * p / v,
            p2: g * (g + 1.0) * p / (v * v),
            p3: -g * (g + 1.0) * (g + 2.0) * p / (v * v * v),
            p4: g * (g + 1.0) * (g + 2.0) * (g + 3.0) * p / (v * v * v * v),
        }
    }

    fn closed_h(&self, v: f64) -> Option<f64> {
        let g = self.gamma;
        if (g - 1.0).abs() < 1e-14 {
            Some(-v.ln())
        } else {
            // int_v^1 sqrt(g) x^{-(g+1)/2} dx
            Some(2.0 * g.sqrt() / (g - 1.0) * (v.powf(-(g - 1.0) / 2.0) - 1.0))
        }
    }

    fn closed_v_of_h(&self, h: f64) -> Option<f64> {
        let g = self.gamma;
        if (g - 1.0).abs() < 1e-14 {
            Some((-h).exp())
        } else {
            let t = 1.0 + h * (g - 1.0) / (2.0 * g.sqrt());
            if t <= 0.0 {
                None
            } else {
                Some(t.powf(-2.0 / (g - 1.0)))
            }
        }
    }
}

/// Natural cubic spline through pressure knots; derivatives are those of the
/// spline itself (p''' piecewise constant, p'''' = 0).
struct SplineModel {
    vs: Vec<f64>,
    ps: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl SplineModel {
    fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 4 {
            return Err(PtrackError::InvalidParameter(
                "table law needs at least 4 knots".into(),
            ));
        }
        let mut sorted = knots.to_vec();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let vs: Vec<f64> = sorted.iter().map(|k| k.0).collect();
        let ps: Vec<f64> = sorted.iter().map(|k| k.1).collect();
        if vs.windows(2).any(|w| w[1] - w[0] <= 0.0) {
            return Err(PtrackError::InvalidParameter(
                "table law knots must have strictly increasing v".into(),
            ));
        }
        let n = vs.len();
        // tridiagonal solve for knot second derivatives with parabolic
        // runout ends (M0 = M1), which keeps p'' positive at the boundary
        // for convex data where the natural condition M0 = 0 would not
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        b[0] = 1.0;
        c[0] = -1.0;
        a[n - 1] = -1.0;
        b[n - 1] = 1.0;
        for i in 1..n - 1 {
            let h0 = vs[i] - vs[i - 1];
            let h1 = vs[i + 1] - vs[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (ps[i + 1] - ps[i]) / h1 - (ps[i] - ps[i - 1]) / h0;
        }
        // Thomas algorithm
        let mut cp = vec![0.0; n];
        let mut dp = vec![0.0; n];
        cp[0] = c[0] / b[0];
        dp[0] = d[0] / b[0];
        for i in 1..n {
            let m = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / m;
            dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
        }
        let mut m = vec![0.0; n];
        m[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = dp[i] - cp[i] * m[i + 1];
        }
        Ok(SplineModel { vs, ps, m })
    }

    fn segment(&self, v: f64) -> usize {
        match self
            .vs
            .binary_search_by(|x| x.partial_cmp(&v).unwrap())
        {
            Ok(i) => i.min(self.vs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.vs.len() - 2),
        }
    }
}

impl PressureModel for SplineModel {
    fn eval(&self, v: f64) -> PDerivs {
        let i = self.segment(v);
        let h = self.vs[i + 1] - self.vs[i];
        let t0 = self.vs[i + 1] - v;
        let t1 = v - self.vs[i];
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (p0, p1v) = (self.ps[i], self.ps[i + 1]);
        let p = m0 * t0.powi(3) / (6.0 * h)
            + m1 * t1.powi(3) / (6.0 * h)
            + (p0 / h - m0 * h / 6.0) * t0
            + (p1v / h - m1 * h / 6.0) * t1;
        let dp = -m0 * t0.powi(2) / (2.0 * h)
            + m1 * t1.powi(2) / (2.0 * h)
            - (p0 / h - m0 * h / 6.0)
            + (p1v / h - m1 * h / 6.0);
        let d2p = (m0 * t0 + m1 * t1) / h;
        let d3p = (m1 - m0) / h;
        PDerivs {
            p,
            p1: dp,
            p2: d2p,
            p3: d3p,
            p4: 0.0,
        }
    }
}

struct CustomModel<F: Fn(f64) -> PDerivs + Send + Sync> {
    f: F,
}

impl<F: Fn(f64) -> PDerivs + Send + Sync> PressureModel for CustomModel<F> {
    fn eval(&self, v: f64) -> PDerivs {
        (self.f)(v)
    }
}

/// A convex decreasing pressure law with derivatives to fourth order on an
/// open domain, plus memoized evaluation of h(v) = int_v^1 sqrt(-p') dv.
#[derive(Clone)]
pub struct PressureLaw {
    model: Arc<dyn PressureModel>,
    domain: (f64, f64),
    label: String,
    quad_tol: f64,
    h_cache: Arc<Mutex<HashMap<u64, f64>>>,
}

impl std::fmt::Debug for PressureLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PressureLaw")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Gamma-law pressure p(v) = v^{-gamma} with exact closed-form derivatives
/// and closed-form h.  The infinite domain is truncated to a wide finite
/// window for numerics.
pub fn gamma_law(gamma: f64) -> Result<PressureLaw> {
    gamma_law_with_domain(gamma, (1e-12, 1e18))
}

/// Gamma law on an explicit domain window.
pub fn gamma_law_with_domain(gamma: f64, domain: (f64, f64)) -> Result<PressureLaw> {
    if !(gamma > 0.0) {
        return Err(PtrackError::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if !(domain.0 > 0.0 && domain.1 > domain.0) {
        return Err(PtrackError::InvalidParameter(format!(
            "bad domain ({}, {})",
            domain.0, domain.1
        )));
    }
    Ok(PressureLaw {
        model: Arc::new(GammaModel { gamma }),
        domain,
        label: format!("gamma-law, gamma={gamma}"),
        quad_tol: 1e-12,
        h_cache: Arc::new(Mutex::new(HashMap::new())),
    })
}

/// Pressure law defined by a cubic spline through `(v, p)` knots.
pub fn table_law(knots: &[(f64, f64)]) -> Result<PressureLaw> {
    let model = SplineModel::new(knots)?;
    let domain = (model.vs[0], *model.vs.last().unwrap());
    let law = PressureLaw {
        model: Arc::new(model),
        domain,
        label: format!("table law, {} knots", knots.len()),
        quad_tol: 1e-12,
        h_cache: Arc::new(Mutex::new(HashMap::new())),
    };
    law.validate_convexity(256)?;
    Ok(law)
}

/// Pressure law from an arbitrary closed-form evaluator.
pub fn custom_law<F>(label: &str, domain: (f64, f64), f: F) -> Result<PressureLaw>
where
    F: Fn(f64) -> PDerivs + Send + Sync + 'static,
{
    if !(domain.0 > 0.0 && domain.1 > domain.0) {
        return Err(PtrackError::InvalidParameter(format!(
            "bad domain ({}, {})",
            domain.0, domain.1
        )));
    }
    Ok(PressureLaw {
        model: Arc::new(CustomModel { f }),
        domain,
        label: label.to_string(),
        quad_tol: 1e-12,
        h_cache: Arc::new(Mutex::new(HashMap::new())),
    })
}

impl PressureLaw {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn set_quad_tol(&mut self, tol: f64) {
        self.quad_tol = tol;
    }

    fn check_domain(&self, v: f64) -> Result<()> {
        if v > self.domain.0 && v < self.domain.1 && v.is_finite() {
            Ok(())
        } else {
            Err(PtrackError::Domain {
                label: self.label.clone(),
                value: v,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }

    /// Pressure and derivatives at `v`.  In debug builds the convexity signs
    /// are asserted on every evaluation.
    pub fn derivs(&self, v: f64) -> Result<PDerivs> {
        self.check_domain(v)?;
        let d = self.model.eval(v);
        debug_assert!(
            d.p1 < 0.0 && d.p2 > 0.0,
            "pressure law `{}` violates p'<0, p''>0 at v={v}: p'={}, p''={}",
            self.label,
            d.p1,
            d.p2
        );
        Ok(d)
    }

    pub fn p(&self, v: f64) -> Result<f64> {
        Ok(self.derivs(v)?.p)
    }

    pub fn dp(&self, v: f64) -> Result<f64> {
        Ok(self.derivs(v)?.p1)
    }

    pub fn d2p(&self, v: f64) -> Result<f64> {
        Ok(self.derivs(v)?.p2)
    }

    pub fn d3p(&self, v: f64) -> Result<f64> {
        Ok(self.derivs(v)?.p3)
    }

    pub fn d4p(&self, v: f64) -> Result<f64> {
        Ok(self.derivs(v)?.p4)
    }

    /// Wave speed c(v) = sqrt(-p'(v)).
    pub fn wave_speed(&self, v: f64) -> Result<f64> {
        Ok((-self.derivs(v)?.p1).sqrt())
    }

    /// h(v) = int_v^1 sqrt(-p'(x)) dx, decreasing in v with h(1) = 0.
    ///
    /// Uses the model's closed form when available, otherwise adaptive
    /// quadrature to `quad_tol` memoized per v.
    pub fn h_of_v(&self, v: f64) -> Result<f64> {
        self.check_domain(v)?;
        if let Some(h) = self.model.closed_h(v) {
            return Ok(h);
        }
        let key = v.to_bits();
        if let Some(&h) = self.h_cache.lock().unwrap().get(&key) {
            return Ok(h);
        }
        let model = &self.model;
        let h = numerics::integrate_adaptive(
            &|x: f64| (-model.eval(x).p1).sqrt(),
            v,
            1.0,
            self.quad_tol,
        )?;
        self.h_cache.lock().unwrap().insert(key, h);
        Ok(h)
    }

    /// Inverse of [`PressureLaw::h_of_v`]: the unique v with h(v) = h.
    pub fn v_of_h(&self, h: f64) -> Result<f64> {
        if let Some(v) = self.model.closed_v_of_h(h) {
            // closed form can step outside the truncated window
            self.check_domain(v)?;
            return Ok(v);
        }
        if self.model.closed_h(0.0_f64.max(self.domain.0)).is_some() {
            // closed inverse exists but reported out-of-range
            return Err(PtrackError::Range {
                quantity: "h".into(),
                value: h,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            });
        }
        let eps = 1e-12;
        let lo = self.domain.0 * (1.0 + eps);
        let hi = self.domain.1 * (1.0 - eps);
        let h_lo = self.h_of_v(lo)?; // largest achievable h
        let h_hi = self.h_of_v(hi)?; // smallest
        if h > h_lo || h < h_hi {
            return Err(PtrackError::Range {
                quantity: "h".into(),
                value: h,
                lo: h_hi,
                hi: h_lo,
            });
        }
        // h is strictly decreasing with h'(v) = -c(v)
        let f = |v: f64| {
            let hv = self.h_of_v(v).expect("inside domain");
            let c = (-self.model.eval(v).p1).sqrt();
            (hv - h, -c)
        };
        numerics::newton_bracketed(&f, lo, hi, 0.5 * (lo + hi), numerics::root_xtol().max(1e-15), 200)
    }

    /// J1(v) = (1/96) (-p')^{-3} (p'')^2, the cubic Taylor coefficient of the
    /// shock-jump function.
    pub fn j1(&self, v: f64) -> Result<f64> {
        let d = self.derivs(v)?;
        Ok(d.p2 * d.p2 / (96.0 * (-d.p1).powi(3)))
    }

    /// J2(v) = (1/32) p'' ( (1/2)(p'')^2 - (1/3) p''' p' ), as defined for
    /// the quartic Taylor coefficient.  Equal to p'' D / 192 where D is the
    /// discriminant below; only its sign is scale-independent.
    pub fn j2(&self, v: f64) -> Result<f64> {
        let d = self.derivs(v)?;
        Ok(d.p2 / 32.0 * (0.5 * d.p2 * d.p2 - d.p3 * d.p1 / 3.0))
    }

    /// Discriminant D(v) = 3 p''^2 - 2 p' p'''.  The uniform-BV-stability
    /// condition is D <= 0; on any interval where D > 0 crossing shocks
    /// amplify each other and the blowup construction applies.
    pub fn bakhvalov_discriminant(&self, v: f64) -> Result<f64> {
        Ok(self.discriminant_with_floor(v)?.0)
    }

    /// D together with the round-off granularity of its two cancelling
    /// terms.  Laws where D vanishes identically (the isothermal case)
    /// evaluate to +/- a few ulps of the term magnitude, so sign decisions
    /// use this floor.
    fn discriminant_with_floor(&self, v: f64) -> Result<(f64, f64)> {
        let d = self.derivs(v)?;
        let t1 = 3.0 * d.p2 * d.p2;
        let t2 = 2.0 * d.p1 * d.p3;
        Ok((t1 - t2, 1e-13 * (t1.abs() + t2.abs())))
    }

    /// Whether the stability condition 3 p''^2 <= 2 p' p''' holds at `v`
    /// (up to the evaluation round-off floor).
    pub fn bakhvalov_holds(&self, v: f64) -> Result<bool> {
        let (d, floor) = self.discriminant_with_floor(v)?;
        Ok(d <= floor)
    }

    /// Locates a maximal sub-interval of `window` on which D(v) > 0, by
    /// sign-scanning on a grid and bisecting the endpoints, or `None` if the
    /// condition holds throughout.  When several violation runs exist the
    /// widest is returned.
    pub fn find_violation_interval(
        &self,
        window: (f64, f64),
    ) -> Result<Option<(f64, f64)>> {
        self.check_domain(window.0)?;
        self.check_domain(window.1)?;
        let n = 4096usize;
        let (a, b) = window;
        let grid: Vec<f64> = (0..=n)
            .map(|i| a + (b - a) * i as f64 / n as f64)
            .collect();
        let pos: Vec<bool> = grid
            .iter()
            .map(|&v| self.bakhvalov_holds(v).map(|h| !h))
            .collect::<Result<_>>()?;
        // widest run of positives
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i <= n {
            if pos[i] {
                let start = i;
                while i <= n && pos[i] {
                    i += 1;
                }
                let end = i - 1;
                if best.is_none_or(|(s, e)| grid[end] - grid[start] > grid[e] - grid[s]) {
                    best = Some((start, end));
                }
            } else {
                i += 1;
            }
        }
        let Some((s, e)) = best else {
            return Ok(None);
        };
        // refine against the floored discriminant so runs bounded by
        // identically-zero stretches still present a sign change
        let d_of = |v: f64| {
            let (d, floor) = self.discriminant_with_floor(v).unwrap();
            d - floor
        };
        let lo = if s == 0 {
            grid[0]
        } else {
            numerics::illinois(&d_of, grid[s - 1], grid[s], 1e-12, 200)?
        };
        let hi = if e == n {
            grid[n]
        } else {
            numerics::illinois(&d_of, grid[e], grid[e + 1], 1e-12, 200)?
        };
        Ok(Some((lo, hi)))
    }

    /// Checks p' < 0 and p'' > 0 on a sample grid strictly inside the
    /// domain (clamped to a sane window for unbounded gamma domains).
    pub fn validate_convexity(&self, samples: usize) -> Result<()> {
        let lo = (self.domain.0 * (1.0 + 1e-9)).max(1e-6);
        let hi = (self.domain.1 * (1.0 - 1e-9)).min(1e6);
        for i in 0..=samples {
            let v = lo * (hi / lo).powf(i as f64 / samples as f64);
            let d = self.model.eval(v);
            if !(d.p1 < 0.0 && d.p2 > 0.0) {
                return Err(PtrackError::InvalidParameter(format!(
                    "law `{}` violates p'<0, p''>0 at v={v}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_law_closed_form_derivatives() {
        let law = gamma_law(3.0).unwrap();
        assert_relative_eq!(law.p(1.0).unwrap(), 1.0);
        assert_relative_eq!(law.dp(1.0).unwrap(), -3.0);
        assert_relative_eq!(law.d2p(1.0).unwrap(), 12.0);
        assert_relative_eq!(law.d3p(1.0).unwrap(), -60.0);
        assert_relative_eq!(law.d4p(1.0).unwrap(), 360.0);
        assert_relative_eq!(gamma_law(1.0).unwrap().p(2.0).unwrap(), 0.5);
        assert_relative_eq!(gamma_law(2.0).unwrap().dp(1.0).unwrap(), -2.0);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma_law(0.0).is_err());
        assert!(gamma_law(-1.5).is_err());
    }

    #[test]
    fn wave_speed_values() {
        let law = gamma_law(3.0).unwrap();
        assert_relative_eq!(law.wave_speed(1.0).unwrap(), 3f64.sqrt(), epsilon = 1e-14);
        let law = gamma_law(1.0).unwrap();
        assert_relative_eq!(law.wave_speed(1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert!(law.wave_speed(1e30).is_err()); // outside the window
    }

    #[test]
    fn h_closed_forms() {
        let law1 = gamma_law(1.0).unwrap();
        assert_relative_eq!(law1.h_of_v(1.0).unwrap(), 0.0);
        assert_relative_eq!(
            law1.h_of_v((-1f64).exp()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let law2 = gamma_law(2.0).unwrap();
        assert_relative_eq!(
            law2.h_of_v(4.0).unwrap(),
            -2f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn h_quadrature_matches_closed_form() {
        // custom model without closed h: same gamma=2 law through quadrature
        let law = custom_law("gamma2 via quadrature", (1e-3, 1e3), |v| {
            let g = 2.0;
            let p = v.powf(-g);
            PDerivs {
                p,
                p1: -g * p / v,
                p2: g * (g + 1.0) * p / (v * v),
                p3: -g * (g + 1.0) * (g + 2.0) * p / (v * v * v),
                p4: g * (g + 1.0) * (g + 2.0) * (g + 3.0) * p / (v * v * v * v),
            }
        })
        .unwrap();
        for v in [0.3f64, 0.9, 1.0, 1.7, 4.0] {
            let exact = 2.0 * 2f64.sqrt() * (v.powf(-0.5) - 1.0);
            assert_relative_eq!(law.h_of_v(v).unwrap(), exact, epsilon = 1e-11);
        }
        // inverse round-trip through the numeric path
        for v in [0.4f64, 1.0, 2.5] {
            let h = law.h_of_v(v).unwrap();
            assert_relative_eq!(law.v_of_h(h).unwrap(), v, epsilon = 1e-10);
        }
    }

    #[test]
    fn v_of_h_closed_inverse() {
        let law = gamma_law(1.0).unwrap();
        assert_relative_eq!(law.v_of_h(0.0).unwrap(), 1.0);
        assert_relative_eq!(law.v_of_h(1.0).unwrap(), (-1f64).exp(), epsilon = 1e-14);
        for v in [0.2, 0.77, 1.0, 3.4] {
            let h = law.h_of_v(v).unwrap();
            assert_relative_eq!(law.v_of_h(h).unwrap(), v, epsilon = 1e-10);
        }
        // below the vacuum asymptote for gamma=3: -sqrt(3)
        let law3 = gamma_law(3.0).unwrap();
        assert!(law3.v_of_h(-2.0).is_err());
    }

    #[test]
    fn h_strictly_decreasing() {
        let law = gamma_law(3.0).unwrap();
        let mut prev = law.h_of_v(0.5).unwrap();
        for i in 1..50 {
            let v = 0.5 + 1.5 * i as f64 / 50.0;
            let h = law.h_of_v(v).unwrap();
            assert!(h < prev);
            prev = h;
        }
    }

    #[test]
    fn j_coefficients_gamma3() {
        let law = gamma_law(3.0).unwrap();
        assert_relative_eq!(law.j1(1.0).unwrap(), 1.0 / 18.0, epsilon = 1e-14);
        assert_relative_eq!(law.j2(1.0).unwrap(), 4.5, epsilon = 1e-12);
    }

    #[test]
    fn j2_vanishes_for_isothermal() {
        let law = gamma_law(1.0).unwrap();
        for v in [0.3, 1.0, 2.0, 5.0] {
            assert!(law.j2(v).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn discriminant_signs_by_gamma() {
        let law3 = gamma_law(3.0).unwrap();
        assert_relative_eq!(law3.bakhvalov_discriminant(1.0).unwrap(), 72.0);
        assert!(!law3.bakhvalov_holds(1.0).unwrap());
        let law1 = gamma_law(1.0).unwrap();
        for v in [0.5, 1.0, 2.0] {
            assert!(law1.bakhvalov_discriminant(v).unwrap().abs() < 1e-12);
            assert!(law1.bakhvalov_holds(v).unwrap());
        }
        let law_half = gamma_law(0.5).unwrap();
        assert!(law_half.bakhvalov_discriminant(1.0).unwrap() < 0.0);
        assert!(law_half.bakhvalov_holds(1.0).unwrap());
    }

    #[test]
    fn j2_and_discriminant_share_sign() {
        // j2 = p'' D / 192 exactly, so the signs must agree everywhere
        for gamma in [0.5, 0.8, 1.0, 1.5, 3.0] {
            let law = gamma_law(gamma).unwrap();
            for i in 0..40 {
                let v = 0.5 + 1.5 * i as f64 / 40.0;
                let d = law.bakhvalov_discriminant(v).unwrap();
                let j2 = law.j2(v).unwrap();
                let p2 = law.d2p(v).unwrap();
                assert_relative_eq!(j2, p2 * d / 192.0, epsilon = 1e-10, max_relative = 1e-10);
                if d.abs() > 1e-12 {
                    assert_eq!(d.signum(), j2.signum());
                }
            }
        }
    }

    #[test]
    fn violation_interval_gamma_cases() {
        let law3 = gamma_law(3.0).unwrap();
        let iv = law3.find_violation_interval((0.5, 2.0)).unwrap().unwrap();
        assert_relative_eq!(iv.0, 0.5);
        assert_relative_eq!(iv.1, 2.0);
        let law1 = gamma_law(1.0).unwrap();
        assert!(law1.find_violation_interval((0.5, 2.0)).unwrap().is_none());
        let law_half = gamma_law(0.5).unwrap();
        assert!(law_half
            .find_violation_interval((0.5, 2.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn violation_interval_localized_bump() {
        // isothermal base (D identically 0) plus a smooth localized bump that
        // pushes D positive only near v = 1.2
        let delta = 1e-3;
        let (c0, w) = (1.2, 0.08);
        let law = custom_law("perturbed isothermal", (0.4, 2.5), move |v| {
            let t = (v - c0) / w;
            let e = (-t * t).exp();
            // phi = exp(-t^2), derivatives in v
            let phi1 = e * (-2.0 * t) / w;
            let phi2 = e * (4.0 * t * t - 2.0) / (w * w);
            let phi3 = e * (12.0 * t - 8.0 * t * t * t) / (w * w * w);
            let phi4 = e * (16.0 * t * t * t * t - 48.0 * t * t + 12.0) / (w * w * w * w);
            PDerivs {
                p: 1.0 / v + delta * e,
                p1: -1.0 / (v * v) + delta * phi1,
                p2: 2.0 / (v * v * v) + delta * phi2,
                p3: -6.0 / (v * v * v * v) + delta * phi3,
                p4: 24.0 / (v * v * v * v * v) + delta * phi4,
            }
        })
        .unwrap();
        law.validate_convexity(512).unwrap();
        let iv = law.find_violation_interval((0.5, 2.0)).unwrap().unwrap();
        // oracle: dense scan for the widest positive run of D
        let n = 200_000;
        let (mut lo, mut hi) = (f64::NAN, f64::NAN);
        let mut best_w = 0.0;
        let mut run_start: Option<f64> = None;
        for i in 0..=n {
            let v = 0.5 + 1.5 * i as f64 / n as f64;
            let violated = !law.bakhvalov_holds(v).unwrap();
            match (violated, run_start) {
                (true, None) => run_start = Some(v),
                (false, Some(s)) => {
                    if v - s > best_w {
                        best_w = v - s;
                        lo = s;
                        hi = v;
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
        assert!((iv.0 - lo).abs() < 1e-4, "lo {} vs scan {}", iv.0, lo);
        assert!((iv.1 - hi).abs() < 1e-4, "hi {} vs scan {}", iv.1, hi);
        // a genuine localized interval: strictly inside the window, violated
        // in its interior and satisfied well away from the bump
        let _ = (c0, w);
        assert!(iv.0 > 0.5 && iv.1 < 2.0);
        assert!(!law.bakhvalov_holds(0.5 * (iv.0 + iv.1)).unwrap());
        assert!(law.bakhvalov_holds(0.55).unwrap());
        assert!(law.bakhvalov_holds(1.9).unwrap());
    }

    #[test]
    fn derivatives_consistent_with_finite_differences() {
        let step = 1e-4;
        for gamma in [1.0, 2.0, 3.0] {
            let law = gamma_law(gamma).unwrap();
            for v in [0.7, 1.0, 1.6] {
                let f = |x: f64| law.p(x).unwrap();
                let fd1 = (f(v + step) - f(v - step)) / (2.0 * step);
                let fd2 = (f(v + step) - 2.0 * f(v) + f(v - step)) / (step * step);
                assert_relative_eq!(fd1, law.dp(v).unwrap(), max_relative = 1e-6);
                assert_relative_eq!(fd2, law.d2p(v).unwrap(), max_relative = 1e-6);
                let g = |x: f64| law.dp(x).unwrap();
                let fd3 = (g(v + step) - 2.0 * g(v) + g(v - step)) / (step * step);
                assert_relative_eq!(fd3, law.d3p(v).unwrap(), max_relative = 1e-6);
                let h = |x: f64| law.d2p(x).unwrap();
                let fd4 = (h(v + step) - 2.0 * h(v) + h(v - step)) / (step * step);
                assert_relative_eq!(fd4, law.d4p(v).unwrap(), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn spline_law_tracks_its_samples() {
        let knots: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let v = 0.5 + 1.5 * i as f64 / 59.0;
                (v, v.powf(-3.0))
            })
            .collect();
        let law = table_law(&knots).unwrap();
        for &(v, p) in &knots[5..50] {
            assert_relative_eq!(law.p(v).unwrap(), p, max_relative = 1e-9);
        }
        // spline of a gamma>1 law still violates the stability condition
        let iv = law.find_violation_interval((0.7, 1.8)).unwrap();
        assert!(iv.is_some());
    }
}
