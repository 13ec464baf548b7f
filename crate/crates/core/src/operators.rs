//! Riemann-Liouville integral, Caputo and Riemann-Liouville derivatives, and
//! the periodic Weyl integral.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss;
use crate::quadrature::{oracle_integral_of, period_moment, singular_integral, FracOrder, QuadratureConfig};
use crate::signal::FourierSignal;
use crate::special::{hurwitz_zeta, rgamma, BERNOULLI_OVER_FACTORIAL};

/// The operators provided, each with its admissible order range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    RLIntegral,
    CaputoDerivative,
    RLDerivative,
    WeylIntegral,
}

impl OperatorKind {
    /// Open interval of admissible orders.
    pub fn admissible_range(self) -> (f64, f64) {
        match self {
            OperatorKind::RLIntegral => (0.0, 2.0),
            _ => (0.0, 1.0),
        }
    }
}

/// Times below this are treated as the singular point of the RL derivative.
pub const RL_DERIVATIVE_MIN_T: f64 = 1e-12;

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

/// `I^α f(t)` for `α ∈ (0, 2)`.
///
/// For `α ≥ 1` the integral is split as `I^{α-1}(I¹f)`, where
/// `I¹f(t) = c₀t + A(t) - A(0)` with `A` the periodic antiderivative, so
/// `I^α f(t) = c₀t^α/Γ(α+1) + I^{α-1}A(t) - A(0)t^{α-1}/Γ(α)`.
pub fn rl_integral(f: &FourierSignal, alpha: FracOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    let a = alpha.value();
    if a < 1.0 {
        return singular_integral(f, alpha, t, cfg);
    }
    let c0 = f.mean();
    let anti = f.periodic_antiderivative();
    let a0 = anti.eval(0.0);
    if a == 1.0 {
        return Ok(c0 * t + anti.eval(t) - a0);
    }
    let beta = FracOrder::integral(a - 1.0)?;
    let periodic = singular_integral(&anti, beta, t, cfg)?;
    Ok(c0 * t.powf(a) * rgamma(a + 1.0) + periodic - a0 * t.powf(a - 1.0) * rgamma(a))
}

/// Caputo derivative `I^{1-α}(f')(t)`, `α ∈ (0, 1)`.
pub fn caputo_derivative(f: &FourierSignal, alpha: FracOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    let a = alpha.require_below_one()?;
    let df = f.differentiate();
    if df.is_zero() {
        return Ok(0.0);
    }
    singular_integral(&df, FracOrder::integral(1.0 - a)?, t, cfg)
}

/// Riemann-Liouville derivative `D¹(I^{1-α}f)(t)`, evaluated as the Caputo
/// derivative plus `f(0)·t^{-α}/Γ(1-α)`.
pub fn rl_derivative(f: &FourierSignal, alpha: FracOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    if t < RL_DERIVATIVE_MIN_T {
        return Err(Error::SingularAtZero(t));
    }
    let a = alpha.require_below_one()?;
    Ok(caputo_derivative(f, alpha, t, cfg)? + rl_correction(f, a, t))
}

/// `f(0)·t^{-α}/Γ(1-α)`, the gap between the RL and Caputo derivatives.
pub fn rl_correction(f: &FourierSignal, alpha: f64, t: f64) -> f64 {
    f.eval(0.0) * t.powf(-alpha) * rgamma(1.0 - alpha)
}

fn require_zero_mean(f: &FourierSignal) -> Result<FourierSignal> {
    if f.has_zero_mean() {
        Ok(f.centered())
    } else {
        Err(Error::NonZeroMean { mean: f.mean(), tol: f.mean_tolerance() })
    }
}

/// The Weyl integral as a signal: coefficients `c_k (ikω)^{-α}`.
///
/// Any order `α > 0` is accepted here; the mean must vanish.
pub fn weyl_multiplier(f: &FourierSignal, alpha: f64) -> Result<FourierSignal> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidOrder { alpha, lo: 0.0, hi: f64::INFINITY });
    }
    let g = require_zero_mean(f)?;
    let w = g.omega();
    let phase = Complex64::from_polar(1.0, -alpha * FRAC_PI_2);
    Ok(g.map_coefficients(|k, c| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            c * phase * (k as f64 * w).powf(-alpha)
        }
    }))
}

/// Weyl integral by the Fourier multiplier. Exact up to rounding.
pub fn weyl_integral_fourier(f: &FourierSignal, alpha: FracOrder, t: f64) -> Result<f64> {
    let a = alpha.require_below_one()?;
    Ok(weyl_multiplier(f, a)?.eval(t))
}

/// Blocks summed directly before switching to the Euler-Maclaurin tail.
const EM_START_BLOCKS: [u64; 3] = [16, 64, 256];
/// Direct summation is used when the tail bound is met within this many blocks.
const DIRECT_BLOCK_LIMIT: u64 = 64;
const EM_TERMS: usize = 6;

/// Weyl integral from its limit definition
/// `lim_n (1/Γ(α))∫_{t-nT}^t (t-s)^{α-1} f(s) ds`, to absolute accuracy `eps`.
///
/// `t` is first reduced into `(0, T]` (the limit is `T`-periodic in `t`).
/// The integral over `[0, t]` is a singular integral; the past is a sum of
/// whole-period blocks `B_j = ∫₀ᵀ (t - r + jT)^{α-1} f(r) dr`. When the
/// zero-mean tail bound `c·(t + nT)^{α-1}/Γ(α)` (with `c = ∫f⁺`) is met within
/// a few dozen blocks they are summed directly. Otherwise the first `n`
/// blocks are summed and `Σ_{j>n} B_j` is obtained by Euler-Maclaurin
/// summation, whose integral and derivative terms are again one-period
/// moments.
pub fn weyl_integral_limit(
    f: &FourierSignal,
    alpha: FracOrder,
    t: f64,
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let a = alpha.require_below_one()?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let g = require_zero_mean(f)?;
    if g.is_zero() {
        return Ok(0.0);
    }
    let period = g.period();
    let mut tp = t.rem_euclid(period);
    if tp <= 0.0 {
        tp = period;
    }
    let head = singular_integral(&g, alpha, tp, cfg)?;
    let norm = rgamma(a);
    let block = |j: u64| period_moment(&g, tp + j as f64 * period, a - 1.0, cfg);

    let c = g.positive_part_mass()?;
    let target = 0.5 * eps;
    let depth = ((target / (c * norm)).powf(1.0 / (a - 1.0)) - tp) / period;
    if depth.is_finite() && depth.ceil().max(1.0) as u64 <= DIRECT_BLOCK_LIMIT {
        let n = depth.ceil().max(1.0) as u64;
        let sum: f64 = (1..=n).rev().map(block).sum();
        return Ok(head + norm * sum);
    }

    let mut last = f64::INFINITY;
    for &n in &EM_START_BLOCKS {
        let direct: f64 = (1..=n).rev().map(block).sum();
        let x = tp + n as f64 * period;
        let bn = block(n);
        let mut tail = -period_moment(&g, x, a, cfg) / (a * period) - 0.5 * bn;
        // B^{(m)}(n) = T^m (α-1)(α-2)…(α-m) ∫₀ᵀ (x-r)^{α-1-m} f(r) dr
        let mut falling = a - 1.0;
        let mut tpow = period;
        for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().take(EM_TERMS).enumerate() {
            let m = 2 * k + 1;
            let deriv = tpow * falling * period_moment(&g, x, a - 1.0 - m as f64, cfg);
            let term = b * deriv;
            tail -= term;
            last = norm * term.abs();
            falling *= (a - (m + 1) as f64) * (a - (m + 2) as f64);
            tpow *= period * period;
        }
        if last <= target {
            return Ok(head + norm * (direct + tail));
        }
    }
    Err(Error::DepthImpractical(format!(
        "Euler-Maclaurin tail did not reach {eps:e} (last correction {last:e})"
    )))
}

/// Weyl integral as the periodic convolution `(1/2π)∫₀^{2π} f̃(x-s) g(s) ds`
/// with the Hurwitz-zeta kernel `g`, after dilating `f` to period `2π`
/// (`x = 2πt/T`; the result scales by `(T/2π)^α`).
///
/// The kernel is split with `ζ(1-α, q) = q^{α-1} + ζ(1-α, q+1)`. The
/// singular term `(s/2π)^{α-1}` is integrated in `v = s^α`, where it
/// becomes a constant weight; the remaining term is smooth on `[0, 2π]`.
pub fn weyl_integral_kernel(f: &FourierSignal, alpha: FracOrder, t: f64) -> Result<f64> {
    let a = alpha.require_below_one()?;
    let g = require_zero_mean(f)?;
    if g.is_zero() {
        return Ok(0.0);
    }
    let period = g.period();
    let shifted = |s: f64| g.eval(t - period * s / TAU);
    let chunks = 4 * g.max_harmonic().max(1);
    let tol = 1e-12 * g.sup_norm().value;

    let inv = 1.0 / a;
    let v_breaks: Vec<f64> = (0..=chunks).map(|i| (TAU * i as f64 / chunks as f64).powf(a)).collect();
    let singular = gauss::integrate_breaks(|v| shifted(v.powf(inv)), &v_breaks, tol, 1e-12, 100_000);
    let singular_value = TAU.powf(1.0 - a) * inv * singular.value;

    let s_breaks: Vec<f64> = (0..=chunks).map(|i| TAU * i as f64 / chunks as f64).collect();
    let smooth = gauss::integrate_breaks(
        |s| shifted(s) * hurwitz_zeta(1.0 - a, 1.0 + s / TAU).unwrap_or(f64::NAN),
        &s_breaks,
        tol,
        1e-12,
        100_000,
    );
    let total = singular_value + smooth.value;
    if !total.is_finite() || !(singular.converged && smooth.converged) {
        return Err(Error::ToleranceNotMet { estimate: singular.error + smooth.error, tolerance: tol });
    }
    Ok(period.powf(a) * rgamma(a) / TAU * total)
}

/// `I^a(I^β f)(t)` with the outer integral taken by the substitution route
/// over values of the inner one. Used to check the semigroup property.
pub fn iterated_rl_integral(
    f: &FourierSignal,
    outer: FracOrder,
    inner: FracOrder,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_time(t)?;
    let failure = std::cell::RefCell::new(None);
    let inner_value = |s: f64| {
        // after the first failure the outer value is discarded anyway
        if s <= 0.0 || failure.borrow().is_some() {
            return 0.0;
        }
        match rl_integral(f, inner, s, cfg) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let scale = f.period() / f.max_harmonic().max(1) as f64;
    let v = oracle_integral_of(&inner_value, outer.value(), t, scale, cfg)?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
