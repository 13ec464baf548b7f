//! Weakly singular integrals `∫ (t-s)^{α-1} f(s) ds`.
//!
//! The production path is product integration: in `u = t - s` the interval
//! `[0, t]` is cut into panels (the first one graded toward the singular
//! endpoint `u = 0`), `f(t-u)` is interpolated by a cubic through the four
//! Gauss-Legendre points of each panel, and the cubic is integrated against
//! `u^{α-1}` with exact moments. Accuracy is controlled by comparing two
//! mesh levels.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{self, GL4_NODES};
use crate::operators::OperatorKind;
use crate::signal::FourierSignal;
use crate::special::rgamma;

/// Mesh and accuracy policy for the singular integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Base number of panels per signal period (at least 8).
    pub panels_per_period: usize,
    /// Grading exponent near the singular endpoint; `None` uses `1/α`
    /// clamped to `[1, 10]`.
    pub grading_exponent: Option<f64>,
    /// Number of mesh doublings allowed before giving up.
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            panels_per_period: 64,
            grading_exponent: None,
            max_refinements: 2,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.panels_per_period < 8 {
            return Err(Error::InvalidParameter(format!(
                "panels_per_period must be at least 8, got {}",
                self.panels_per_period
            )));
        }
        if let Some(r) = self.grading_exponent {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!("grading exponent must be ≥ 1, got {r}")));
            }
        }
        Ok(())
    }

    fn grading(&self, alpha: f64) -> f64 {
        self.grading_exponent.unwrap_or_else(|| (1.0 / alpha).clamp(1.0, 10.0))
    }
}

/// A fractional order validated against an operator's admissible range.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64, kind: OperatorKind) -> Result<Self> {
        let (lo, hi) = kind.admissible_range();
        if alpha > lo && alpha < hi {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder { alpha, lo, hi })
        }
    }

    /// Order of a Riemann-Liouville integral, `α ∈ (0, 2)`.
    pub fn integral(alpha: f64) -> Result<Self> {
        Self::new(alpha, OperatorKind::RLIntegral)
    }

    /// Order of a Caputo or Riemann-Liouville derivative, `α ∈ (0, 1)`.
    pub fn derivative(alpha: f64) -> Result<Self> {
        Self::new(alpha, OperatorKind::CaputoDerivative)
    }

    /// Order of a Weyl integral, `α ∈ (0, 1)`.
    pub fn weyl(alpha: f64) -> Result<Self> {
        Self::new(alpha, OperatorKind::WeylIntegral)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub(crate) fn require_below_one(self) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(Error::InvalidOrder { alpha: self.0, lo: 0.0, hi: 1.0 })
        }
    }
}

/// Cubic interpolation nodes on `[0, 1]`.
fn interp_nodes() -> [f64; 4] {
    [
        0.5 * (1.0 - GL4_NODES[1]),
        0.5 * (1.0 - GL4_NODES[0]),
        0.5 * (1.0 + GL4_NODES[0]),
        0.5 * (1.0 + GL4_NODES[1]),
    ]
}

/// Monomial coefficients of the Lagrange basis through [`interp_nodes`]:
/// `ℓ_i(x) = Σ_m L[i][m] x^m`.
fn lagrange_coefficients() -> &'static [[f64; 4]; 4] {
    static L: OnceLock<[[f64; 4]; 4]> = OnceLock::new();
    L.get_or_init(|| {
        let x = interp_nodes();
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            let mut poly = [1.0, 0.0, 0.0, 0.0];
            let mut denom = 1.0;
            for (deg, j) in (0..4).filter(|&j| j != i).enumerate() {
                // poly *= (x - x_j)
                let mut next = [0.0; 4];
                for m in 0..=deg {
                    next[m + 1] += poly[m];
                    next[m] -= x[j] * poly[m];
                }
                poly = next;
                denom *= x[i] - x[j];
            }
            for m in 0..4 {
                out[i][m] = poly[m] / denom;
            }
        }
        out
    })
}

/// Moments `J_m = ∫₀¹ (ρ+x)^{α-1} x^m dx`, `m = 0..3`.
///
/// For `ρ ≤ 2`, `x^m` is expanded in powers of `(ρ+x)`, each integrated in
/// closed form. For `ρ > 2`, `(ρ+x)^{α-1} = ρ^{α-1} Σ_n C(α-1, n)(x/ρ)^n`
/// is integrated term by term.
fn kernel_moments(rho: f64, alpha: f64) -> [f64; 4] {
    let beta = alpha - 1.0;
    if rho == 0.0 {
        return [1.0 / alpha, 1.0 / (alpha + 1.0), 1.0 / (alpha + 2.0), 1.0 / (alpha + 3.0)];
    }
    if rho <= 2.0 {
        let mut e = [0.0; 4];
        for (j, ej) in e.iter_mut().enumerate() {
            let p = alpha + j as f64;
            *ej = ((1.0 + rho).powf(p) - rho.powf(p)) / p;
        }
        const BINOM: [[f64; 4]; 4] =
            [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
        let mut out = [0.0; 4];
        for m in 0..4 {
            let mut acc = 0.0;
            for j in 0..=m {
                acc += BINOM[m][j] * (-rho).powi((m - j) as i32) * e[j];
            }
            out[m] = acc;
        }
        return out;
    }
    let inv = 1.0 / rho;
    let mut out = [0.0; 4];
    let mut c = 1.0;
    let mut p = 1.0;
    for n in 0..200 {
        let nf = n as f64;
        let term = c * p;
        for (m, o) in out.iter_mut().enumerate() {
            *o += term / (nf + m as f64 + 1.0);
        }
        if term.abs() < 1e-17 {
            break;
        }
        c *= (beta - nf) / (nf + 1.0);
        p *= inv;
    }
    let scale = rho.powf(beta);
    out.map(|v| v * scale)
}

/// Product-integration weights for the four interpolation nodes of a panel
/// whose left end sits `ρ` panel widths from the singularity.
fn panel_weights(rho: f64, alpha: f64) -> [f64; 4] {
    let j = kernel_moments(rho, alpha);
    let l = lagrange_coefficients();
    let mut w = [0.0; 4];
    for i in 0..4 {
        w[i] = l[i][0] * j[0] + l[i][1] * j[1] + l[i][2] * j[2] + l[i][3] * j[3];
    }
    w
}

/// Number of graded sub-panels replacing the panel next to the singularity.
const GRADED_SUBPANELS: usize = 8;

/// One mesh level of `∫₀ᵗ u^{α-1} g(t-u) du` with `panels` base panels.
fn product_rule<G: Fn(f64) -> f64>(g: &G, alpha: f64, t: f64, panels: usize, grading: f64) -> f64 {
    let nodes = interp_nodes();
    let h = t / panels as f64;
    let mut sum = 0.0;
    // graded sub-panels of [0, h]
    let mut prev = 0.0;
    for j in 1..=GRADED_SUBPANELS {
        let next = h * (j as f64 / GRADED_SUBPANELS as f64).powf(grading);
        let width = next - prev;
        let w = panel_weights(prev / width, alpha);
        let mut acc = 0.0;
        for i in 0..4 {
            acc += w[i] * g(t - (prev + width * nodes[i]));
        }
        sum += width.powf(alpha) * acc;
        prev = next;
    }
    let h_alpha = h.powf(alpha);
    let mut far = 0.0;
    for j in 1..panels {
        let a = h * j as f64;
        let w = panel_weights(j as f64, alpha);
        let mut acc = 0.0;
        for i in 0..4 {
            acc += w[i] * g(t - (a + h * nodes[i]));
        }
        far += acc;
    }
    sum + h_alpha * far
}

/// Value with its a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `(1/Γ(α))∫₀ᵗ (t-s)^{α-1} g(s) ds` for a smooth `g`, by product integration
/// with two-level error control. `scale` is the oscillation length used to
/// size the base mesh (the signal period).
pub fn product_integral<G: Fn(f64) -> f64>(
    g: G,
    alpha: f64,
    t: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidOrder { alpha, lo: 0.0, hi: 2.0 });
    }
    let grading = cfg.grading(alpha);
    let base = ((cfg.panels_per_period as f64 * t / scale).ceil() as usize).max(8);
    let norm = rgamma(alpha);
    let mut coarse = norm * product_rule(&g, alpha, t, base, grading);
    let mut estimate = f64::INFINITY;
    for level in 1..=cfg.max_refinements.max(1) {
        let fine = norm * product_rule(&g, alpha, t, base << level, grading);
        estimate = (fine - coarse).abs() / 15.0;
        if estimate <= cfg.abs_tol.max(cfg.rel_tol * fine.abs()) {
            return Ok(Estimate { value: fine, error: estimate });
        }
        coarse = fine;
    }
    Err(Error::ToleranceNotMet {
        estimate,
        tolerance: cfg.abs_tol.max(cfg.rel_tol * coarse.abs()),
    })
}

/// `I^α f(t) = (1/Γ(α))∫₀ᵗ (t-s)^{α-1} f(s) ds`, `t > 0`, `α ∈ (0, 2)`.
pub fn singular_integral(
    f: &FourierSignal,
    alpha: FracOrder,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let scale = f.period() / f.max_harmonic().max(1) as f64;
    product_integral(|s| f.eval(s), alpha.value(), t, scale, cfg).map(|e| e.value)
}

/// Independent route to [`singular_integral`]: with `u = (t-s)^α` the
/// integral becomes `(1/Γ(α+1))∫₀^{t^α} f(t - u^{1/α}) du`, integrated by
/// adaptive Gauss-Kronrod.
pub fn oracle_singular_integral(
    f: &FourierSignal,
    alpha: FracOrder,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let a = alpha.value();
    let g = |s: f64| f.eval(s);
    oracle_integral_of(&g, a, t, f.period() / f.max_harmonic().max(1) as f64, cfg)
}

/// Substitution-route `I^α g(t)` for an arbitrary continuous `g`.
pub(crate) fn oracle_integral_of<G: Fn(f64) -> f64>(
    g: &G,
    alpha: f64,
    t: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    // breakpoints where s crosses quarter periods
    let chunks = ((4.0 * t / scale).ceil() as usize).max(4);
    let mut breaks: Vec<f64> =
        (0..=chunks).map(|i| (t * i as f64 / chunks as f64).powf(alpha)).collect();
    breaks.dedup();
    let inv = 1.0 / alpha;
    let norm = rgamma(alpha + 1.0);
    let r = gauss::integrate_breaks(
        |u| g(t - u.powf(inv)),
        &breaks,
        0.1 * cfg.abs_tol / norm,
        0.1 * cfg.rel_tol,
        200_000,
    );
    if !r.converged {
        return Err(Error::ToleranceNotMet {
            estimate: r.error * norm,
            tolerance: cfg.abs_tol.max(cfg.rel_tol * (r.value * norm).abs()),
        });
    }
    Ok(r.value * norm)
}

/// `∫₀ᵀ (x - r)^p f(r) dr` for `x > T`: a smooth one-period moment.
pub(crate) fn period_moment(f: &FourierSignal, x: f64, p: f64, cfg: &QuadratureConfig) -> f64 {
    let period = f.period();
    let dist = x - period;
    let panels = 2 * f.max_harmonic() + 4;
    if dist >= period {
        gauss::gauss_legendre(|r| (x - r).powf(p) * f.eval(r), 0.0, period, panels)
    } else {
        // kernel peaks at r = T; let the adaptive rule resolve it
        let near = gauss::integrate(
            |r| (x - r).powf(p) * f.eval(r),
            0.0,
            period,
            panels,
            0.01 * cfg.abs_tol,
            0.01 * cfg.rel_tol,
            20_000,
        );
        near.value
    }
}

/// `∫_{-nT}^0 (t-s)^{α-1} f(s) ds` (no `1/Γ(α)` factor), summed period by
/// period as `Σ_{j=1}^n ∫₀ᵀ (t - r + jT)^{α-1} f(r) dr`, smallest blocks first.
pub fn tail_integral(
    f: &FourierSignal,
    alpha: FracOrder,
    t: f64,
    n: u64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let a = alpha.require_below_one()?;
    if f.is_zero() || n == 0 {
        return Ok(0.0);
    }
    let period = f.period();
    let mut sum = 0.0;
    for j in (1..=n).rev() {
        sum += period_moment(f, t + j as f64 * period, a - 1.0, cfg);
    }
    Ok(sum)
}

/// Block counts above this are flagged impractical for direct summation.
pub const MAX_PRACTICAL_BLOCKS: u64 = 1_000_000_000;

/// Result of [`truncation_depth`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationDepth {
    /// Number of whole periods; saturates at `u64::MAX`.
    pub blocks: u64,
    /// Set when `blocks` exceeds [`MAX_PRACTICAL_BLOCKS`].
    pub impractical: bool,
}

/// Smallest `n ≥ 1` with `t·(nT)^{α-1}·f_sup ≤ eps`, the bound on the
/// segment `[-nT, t-nT]` discarded when the lower limit `t - nT` is replaced
/// by `-nT`.
pub fn truncation_depth(alpha: FracOrder, period: f64, t: f64, eps: f64, f_sup: f64) -> TruncationDepth {
    let bound = |n: f64| t * (n * period).powf(alpha.value() - 1.0) * f_sup;
    if f_sup <= 0.0 || t <= 0.0 {
        return TruncationDepth { blocks: 1, impractical: false };
    }
    let saturated = TruncationDepth { blocks: u64::MAX, impractical: true };
    let Ok(a) = alpha.require_below_one() else {
        return saturated;
    };
    if !(eps > 0.0) {
        return saturated;
    }
    if bound(1.0) <= eps {
        return TruncationDepth { blocks: 1, impractical: false };
    }
    let x = (eps / (t * f_sup)).powf(1.0 / (a - 1.0)) / period;
    if !x.is_finite() || x >= u64::MAX as f64 {
        return saturated;
    }
    let mut n = x.ceil().max(1.0) as u64;
    // absorb rounding in the closed form
    while n < u64::MAX && bound(n as f64) > eps {
        n += 1;
    }
    while n > 1 && bound((n - 1) as f64) <= eps {
        n -= 1;
    }
    TruncationDepth { blocks: n, impractical: n > MAX_PRACTICAL_BLOCKS }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gamma, i_alpha_sin_closed};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn moments_agree_across_branches() {
        // closed form at ρ = 2 vs binomial series at ρ = 2 + 1e-12, both vs GL
        for &a in &[0.1, 0.5, 0.9, 1.5] {
            for &rho in &[0.0, 1e-6, 0.3, 1.0, 2.0, 2.5, 7.0, 40.0] {
                let m = kernel_moments(rho, a);
                for (k, mk) in m.iter().enumerate() {
                    let exact = gauss::integrate(
                        |x: f64| (rho + x).powf(a - 1.0) * x.powi(k as i32),
                        0.0,
                        1.0,
                        1,
                        1e-16,
                        1e-15,
                        4000,
                    );
                    assert!(
                        (mk - exact.value).abs() <= 1e-13 * exact.value.abs().max(1e-3),
                        "a={a} rho={rho} m={k}: {mk} vs {}",
                        exact.value
                    );
                }
            }
        }
    }

    #[test]
    fn weights_reproduce_cubics() {
        let w = panel_weights(0.0, 0.5);
        let x = interp_nodes();
        let cubic = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3);
        let approx: f64 = (0..4).map(|i| w[i] * cubic(x[i])).sum();
        let exact = 1.0 / 0.5 - 2.0 / 1.5 + 0.5 / 3.5;
        assert_abs_diff_eq!(approx, exact, epsilon = 1e-14);
    }

    #[test]
    fn constant_closed_form() {
        let one = FourierSignal::constant(TAU, 1.0);
        let v = singular_integral(&one, FracOrder::integral(0.5).unwrap(), 4.0, &cfg()).unwrap();
        assert_abs_diff_eq!(v, 2.256_758_334_191_025, epsilon = 1e-12);
        let a = FracOrder::integral(0.25).unwrap();
        let exact = 1.0 / gamma(1.25).unwrap();
        assert_abs_diff_eq!(singular_integral(&one, a, 1.0, &cfg()).unwrap(), exact, epsilon = 1e-12);
        assert_abs_diff_eq!(oracle_singular_integral(&one, a, 1.0, &cfg()).unwrap(), exact, epsilon = 1e-12);
        // 50-digit reference 1/Γ(1.25)
        assert_abs_diff_eq!(exact, 1.103_262_651_320_837_3, epsilon = 1e-14);
    }

    #[test]
    fn unit_order_is_ordinary_integral() {
        let v = singular_integral(&FourierSignal::sin(TAU), FracOrder::integral(1.0).unwrap(), PI, &cfg()).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn sin_matches_closed_form_and_oracle() {
        let f = FourierSignal::sin(TAU);
        let a = FracOrder::integral(0.5).unwrap();
        let closed = i_alpha_sin_closed(0.5, 10.0).unwrap();
        let prod = singular_integral(&f, a, 10.0, &cfg()).unwrap();
        let orac = oracle_singular_integral(&f, a, 10.0, &cfg()).unwrap();
        assert_abs_diff_eq!(prod, closed, epsilon = 1e-9);
        assert_abs_diff_eq!(orac, closed, epsilon = 1e-9);
        assert_abs_diff_eq!(prod, orac, epsilon = 1e-9);
    }

    #[test]
    fn zero_signal_and_bad_time() {
        let z = FourierSignal::zero(TAU);
        let a = FracOrder::integral(0.3).unwrap();
        assert_eq!(singular_integral(&z, a, 3.0, &cfg()).unwrap(), 0.0);
        assert_eq!(oracle_singular_integral(&z, a, 3.0, &cfg()).unwrap(), 0.0);
        assert!(matches!(singular_integral(&z, a, 0.0, &cfg()), Err(Error::NonPositiveTime(_))));
        assert!(matches!(
            singular_integral(&FourierSignal::sin(TAU), a, -1.0, &cfg()),
            Err(Error::NonPositiveTime(_))
        ));
    }

    #[test]
    fn tail_examples() {
        let f = FourierSignal::sin(TAU);
        let a = FracOrder::weyl(0.5).unwrap();
        let v = tail_integral(&f, a, 1.0, 1, &cfg()).unwrap();
        // mpmath: ∫_{-2π}^0 (1-s)^{-1/2} sin s ds
        assert_abs_diff_eq!(v, -0.443_591_051_725_646_4, epsilon = 1e-12);
        assert!(v.abs() <= 2.0);
        assert_eq!(tail_integral(&FourierSignal::zero(TAU), a, 1.0, 5, &cfg()).unwrap(), 0.0);
        let d = tail_integral(&f, a, 1.0, 50, &cfg()).unwrap() - tail_integral(&f, a, 1.0, 49, &cfg()).unwrap();
        assert!(d.abs() <= TAU * (49.0 * TAU).powf(-0.5));
    }

    #[test]
    fn truncation_depth_examples() {
        let d = truncation_depth(FracOrder::weyl(0.5).unwrap(), TAU, 1.0, 1e-4, 1.0);
        assert_eq!(d, TruncationDepth { blocks: 15_915_495, impractical: false });
        let d = truncation_depth(FracOrder::weyl(0.5).unwrap(), TAU, 1.0, 2.0, 1.0);
        assert_eq!(d.blocks, 1);
        let d = truncation_depth(FracOrder::weyl(0.9).unwrap(), 1.0, 1.0, 1e-3, 1.0);
        assert!(d.impractical);
        assert_eq!(d.blocks, u64::MAX);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.panels_per_period = 4;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.rel_tol = 0.0;
        assert!(c.validate().is_err());
        assert!(FracOrder::integral(2.0).is_err());
        assert!(FracOrder::derivative(1.0).is_err());
        assert!(FracOrder::weyl(0.0).is_err());
    }
}
