//! Quasi-periodicity diagnostics for `I^α f` with `f` periodic.
//!
//! * boundedness: `I^α f` is bounded exactly when `f` has zero mean, and
//!   otherwise drifts to `±∞` with the sign of the mean;
//! * the period defect `Δ(t) = I^α f(t+T) - I^α f(t)` and its decay bound
//!   `T‖f‖∞ t^{α-1}/Γ(α)`;
//! * for zero-mean `f`, the split `I^α f = Φ + r` into the periodic Weyl
//!   integral `Φ` and a remainder decaying like `t^{α-1}`;
//! * a finite witness `|Δ(t*)| = δ > 0` that `I^α f` is not `T`-periodic;
//! * the growth law `c₀ t^α/Γ(1+α)` for nonzero mean.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{self, rl_correction, rl_integral};
use crate::quadrature::{period_moment, FracOrder, QuadratureConfig};
use crate::signal::{FourierSignal, SignalSpec};
use crate::special::rgamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Bounded,
    DivergesPlus,
    DivergesMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundednessVerdict {
    pub kind: VerdictKind,
    pub mean: f64,
    /// `max |I^α f|` over the probe grid, reported for bounded cases.
    pub witness_bound: Option<f64>,
}

/// Samples of `Δ(t)` with the matching decay bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectCurve {
    pub alpha: f64,
    pub period: f64,
    pub samples: Vec<(f64, f64)>,
    pub bound_samples: Vec<(f64, f64)>,
}

impl DefectCurve {
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
    }
}

/// `|v| ≈ constant · t^exponent`, or signed `v ≈ constant · t^exponent` for
/// growth fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub constant: f64,
    pub exponent: f64,
}

/// `I^α f = Φ + r` with `Φ` the Weyl integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `Φ` as a signal with the same period as `f`.
    pub periodic_part: FourierSignal,
    pub remainder_samples: Vec<(f64, f64)>,
    /// Fit of the remainder envelope; `None` when `r` vanishes on the grid.
    pub fitted_decay: Option<PowerLaw>,
}

/// `δ = |I^α f(t*+T) - I^α f(t*)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub t_star: f64,
    pub delta: f64,
    pub threshold: f64,
}

/// Which quantity a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportOperator {
    /// `I^α f`.
    Integral,
    /// Caputo derivative, analysed as `I^{1-α} f'`.
    Caputo,
    /// Riemann-Liouville derivative: Caputo plus `f(0)t^{-α}/Γ(1-α)`.
    RlDerivative,
}

/// One CSV row of a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub t: f64,
    pub i_alpha_f: f64,
    pub phi: Option<f64>,
    pub remainder: Option<f64>,
    pub defect: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub signal: SignalSpec,
    pub alpha: f64,
    pub verdict: BoundednessVerdict,
    pub defect: DefectCurve,
    pub decomposition: Option<Decomposition>,
    pub nonperiodicity: Option<Certificate>,
    pub growth: Option<PowerLaw>,
    pub config: QuadratureConfig,
    pub operator: ReportOperator,
    /// Order of the integral actually analysed (`1-α` for derivatives).
    pub analysed_order: f64,
    /// RL derivatives: samples of the correction `f(0)t^{-α}/Γ(1-α)`, which
    /// is included in the remainder.
    pub rl_correction: Option<Vec<(f64, f64)>>,
    pub samples: Vec<SampleRow>,
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per sample: `t,I_alpha_f,phi,remainder,defect,bound`.
    /// Missing values are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,I_alpha_f,phi,remainder,defect,bound\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for r in &self.samples {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{},{},{:.16e},{:.16e}",
                r.t,
                r.i_alpha_f,
                opt(r.phi),
                opt(r.remainder),
                r.defect,
                r.bound
            );
        }
        out
    }

    /// Human-readable one-line summary.
    pub fn summary(&self) -> String {
        match self.verdict.kind {
            VerdictKind::Bounded => {
                let mut s = format!(
                    "Bounded; asymptotically {}-periodic; max defect {:.3e}",
                    format_period(self.defect.period),
                    self.defect.max_abs()
                );
                match self.decomposition.as_ref().and_then(|d| d.fitted_decay) {
                    Some(fit) => {
                        let _ = write!(s, "; remainder decay exponent ≈ {:.1}", fit.exponent);
                    }
                    None => s.push_str("; remainder identically zero"),
                }
                s
            }
            kind => {
                let sign = if kind == VerdictKind::DivergesPlus { '+' } else { '-' };
                match self.growth {
                    Some(g) => format!("Diverges ({sign}); growth exponent ≈ {:.1}", g.exponent),
                    None => format!("Diverges ({sign})"),
                }
            }
        }
    }
}

/// Writes a period as a multiple of π when it is one (to 12 digits).
pub fn format_period(period: f64) -> String {
    let r = period / PI;
    let rounded = (r * 1000.0).round() / 1000.0;
    if rounded > 0.0 && (r - rounded).abs() <= 1e-12 * r {
        if rounded == 1.0 {
            "π".to_string()
        } else {
            format!("{rounded}π")
        }
    } else {
        format!("{period}")
    }
}

/// Default probe grid on `[0, 40T]`: 33 equispaced points on `[0, T]`,
/// then 96 log-spaced points up to `40T`.
pub fn probe_grid(period: f64) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=32).map(|i| period * i as f64 / 32.0).collect();
    grid.extend((1..=96).map(|i| period * 40f64.powf(i as f64 / 96.0)));
    grid
}

fn check_grid(t_grid: &[f64], allow_zero: bool) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    for w in t_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidGrid(format!("grid not increasing at {} → {}", w[0], w[1])));
        }
    }
    let first = t_grid[0];
    if !first.is_finite() || first < 0.0 || (!allow_zero && first == 0.0) {
        return Err(Error::InvalidGrid(format!("grid must start at a positive time, got {first}")));
    }
    Ok(())
}

/// `I^α f(t)` extended by `0` at `t = 0`.
fn integral_at(f: &FourierSignal, alpha: FracOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if t == 0.0 {
        Ok(0.0)
    } else {
        rl_integral(f, alpha, t, cfg)
    }
}

/// Bounded iff `|mean| ≤ 1e-12(1+‖f‖∞)`; otherwise diverges with the sign of
/// the mean. Bounded verdicts carry `max |I^α f|` over [`probe_grid`].
pub fn classify_boundedness(
    f: &FourierSignal,
    alpha: FracOrder,
    cfg: &QuadratureConfig,
) -> Result<BoundednessVerdict> {
    alpha.require_below_one()?;
    let mean = f.mean();
    if !f.has_zero_mean() {
        let kind = if mean > 0.0 { VerdictKind::DivergesPlus } else { VerdictKind::DivergesMinus };
        return Ok(BoundednessVerdict { kind, mean, witness_bound: None });
    }
    let mut sup: f64 = 0.0;
    for t in probe_grid(f.period()) {
        sup = sup.max(integral_at(f, alpha, t, cfg)?.abs());
    }
    Ok(BoundednessVerdict { kind: VerdictKind::Bounded, mean, witness_bound: Some(sup) })
}

/// `Δ(t)` from the single-period identity
/// `Δ(t) = (1/Γ(α))∫₀ᵀ (t+T-s)^{α-1} f(s) ds`.
pub fn defect_at(f: &FourierSignal, alpha: FracOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let a = alpha.require_below_one()?;
    if !(t >= 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(rgamma(a) * period_moment(f, t + f.period(), a - 1.0, cfg))
}

/// The decay bound `T‖f‖∞ t^{α-1}/Γ(α)`.
pub fn defect_bound(f: &FourierSignal, alpha: f64, t: f64) -> f64 {
    f.period() * f.sup_norm().value * t.powf(alpha - 1.0) * rgamma(alpha)
}

/// Defect samples on an increasing grid of positive times.
pub fn sap_defect(
    f: &FourierSignal,
    alpha: FracOrder,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<DefectCurve> {
    check_grid(t_grid, false)?;
    let a = alpha.require_below_one()?;
    let sup = f.sup_norm().value;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut bound_samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        samples.push((t, defect_at(f, alpha, t, cfg)?));
        bound_samples.push((t, f.period() * sup * t.powf(a - 1.0) * rgamma(a)));
    }
    Ok(DefectCurve { alpha: a, period: f.period(), samples, bound_samples })
}

/// Least-squares line through `(ln t, ln v)`; returns `(C, p)` with `v ≈ C t^p`.
fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerLaw> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|&(t, v)| (t.ln(), v.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    Some(PowerLaw { constant: (my - exponent * mx).exp(), exponent })
}

/// Envelope fit of `|r|` over the upper half of the samples: local maxima
/// of `|r|` when there are at least three, otherwise all points.
fn fit_decay(samples: &[(f64, f64)]) -> Option<PowerLaw> {
    let upper = &samples[samples.len() / 2..];
    let abs: Vec<(f64, f64)> = upper.iter().map(|&(t, r)| (t, r.abs())).collect();
    let maxima: Vec<(f64, f64)> = abs
        .windows(3)
        .filter(|w| w[1].1 >= w[0].1 && w[1].1 >= w[2].1 && w[1].1 > 0.0)
        .map(|w| w[1])
        .collect();
    if maxima.len() >= 3 {
        fit_power_law(&maxima)
    } else {
        fit_power_law(&abs)
    }
}

fn decomposition_from(
    f: &FourierSignal,
    alpha: FracOrder,
    t_grid: &[f64],
    values: &[f64],
) -> Result<Decomposition> {
    let phi = operators::weyl_multiplier(f, alpha.value())?;
    let remainder_samples: Vec<(f64, f64)> =
        t_grid.iter().zip(values).map(|(&t, &v)| (t, v - phi.eval(t))).collect();
    let fitted_decay = fit_decay(&remainder_samples);
    Ok(Decomposition { periodic_part: phi, remainder_samples, fitted_decay })
}

/// `I^α f = Φ + r` on `t_grid`, with the decay of `r` fitted over the upper
/// half of the grid.
pub fn decompose_asymptotic(
    f: &FourierSignal,
    alpha: FracOrder,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Decomposition> {
    check_grid(t_grid, true)?;
    alpha.require_below_one()?;
    let values = t_grid.iter().map(|&t| integral_at(f, alpha, t, cfg)).collect::<Result<Vec<_>>>()?;
    decomposition_from(f, alpha, t_grid, &values)
}

/// Witness that `I^α f` is not `T`-periodic: the largest `|Δ(t)|` over a
/// 65-point grid on `(0, 3T]`, refined by golden-section search.
pub fn nonperiodicity_certificate(
    f: &FourierSignal,
    alpha: FracOrder,
    cfg: &QuadratureConfig,
) -> Result<Certificate> {
    alpha.require_below_one()?;
    if f.is_zero() {
        return Err(Error::ZeroSignal);
    }
    let period = f.period();
    let threshold = 10.0 * cfg.abs_tol.max(cfg.rel_tol * f.sup_norm().value * period);
    let grid: Vec<f64> = (1..=65).map(|i| 3.0 * period * i as f64 / 65.0).collect();
    let mut vals = Vec::with_capacity(grid.len());
    for &t in &grid {
        vals.push(defect_at(f, alpha, t, cfg)?.abs());
    }
    let (imax, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let mut best = (grid[imax], vals[imax]);
    let mut a = if imax == 0 { 0.0 } else { grid[imax - 1] };
    let mut b = grid[(imax + 1).min(grid.len() - 1)];
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut g1 = defect_at(f, alpha, x1, cfg)?.abs();
    let mut g2 = defect_at(f, alpha, x2, cfg)?.abs();
    for _ in 0..40 {
        if g1 > g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - ratio * (b - a);
            g1 = defect_at(f, alpha, x1, cfg)?.abs();
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + ratio * (b - a);
            g2 = defect_at(f, alpha, x2, cfg)?.abs();
        }
    }
    for cand in [(x1, g1), (x2, g2)] {
        if cand.1 > best.1 && cand.0 > 0.0 {
            best = cand;
        }
    }
    if best.1 <= threshold {
        return Err(Error::CertificateNotFound { delta: best.1, threshold });
    }
    Ok(Certificate { t_star: best.0, delta: best.1, threshold })
}

/// Signed fit `I^α f(t) ≈ C t^p` over the upper half of `t_grid`, for
/// nonzero mean. The bounded periodic part `Φ` of the centred signal is
/// subtracted first so that the fit sees `c₀t^α/Γ(1+α)` plus a decaying term.
pub fn growth_fit(
    f: &FourierSignal,
    alpha: FracOrder,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<PowerLaw> {
    check_grid(t_grid, true)?;
    alpha.require_below_one()?;
    let values = t_grid.iter().map(|&t| integral_at(f, alpha, t, cfg)).collect::<Result<Vec<_>>>()?;
    growth_from(f, alpha, t_grid, &values)
}

fn growth_from(f: &FourierSignal, alpha: FracOrder, t_grid: &[f64], values: &[f64]) -> Result<PowerLaw> {
    if f.has_zero_mean() {
        return Err(Error::ZeroMean { tol: f.mean_tolerance() });
    }
    let sign = f.mean().signum();
    let phi = operators::weyl_multiplier(&f.centered(), alpha.value())?;
    let half = t_grid.len() / 2;
    let pts: Vec<(f64, f64)> = t_grid[half..]
        .iter()
        .zip(&values[half..])
        .map(|(&t, &v)| (t, sign * (v - phi.eval(t))))
        .collect();
    let fit = fit_power_law(&pts).ok_or_else(|| {
        Error::InvalidGrid("growth fit needs at least two positive samples in the upper half".into())
    })?;
    Ok(PowerLaw { constant: sign * fit.constant, exponent: fit.exponent })
}

/// Full pipeline for `I^α f` on `t_grid` (default: [`probe_grid`] without
/// `t = 0`).
pub fn diagnose(
    f: &FourierSignal,
    alpha: FracOrder,
    t_grid: Option<&[f64]>,
    cfg: &QuadratureConfig,
) -> Result<DiagnosticsReport> {
    let default;
    let grid = match t_grid {
        Some(g) => g,
        None => {
            default = probe_grid(f.period())[1..].to_vec();
            &default
        }
    };
    analyse(f, alpha, grid, cfg, ReportOperator::Integral, None, SignalSpec::from(f), alpha.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeKind {
    Caputo,
    Rl,
}

/// Diagnostics of a derivative of order `α ∈ (0, 1)`: the pipeline runs on
/// `f'` with integral order `1-α` (`f'` always has zero mean). For the RL
/// derivative the correction `f(0)t^{-α}/Γ(1-α)` is added to the values and
/// to the remainder, and reported separately.
pub fn derivative_diagnostics(
    f: &FourierSignal,
    alpha: FracOrder,
    kind: DerivativeKind,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<DiagnosticsReport> {
    let a = alpha.require_below_one()?;
    let order = FracOrder::weyl(1.0 - a)?;
    let (operator, correction) = match kind {
        DerivativeKind::Caputo => (ReportOperator::Caputo, None),
        DerivativeKind::Rl => (ReportOperator::RlDerivative, Some(a)),
    };
    let mut report =
        analyse(&f.differentiate(), order, t_grid, cfg, operator, correction.map(|a| (f, a)), SignalSpec::from(f), a)?;
    report.alpha = a;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn analyse(
    g: &FourierSignal,
    order: FracOrder,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
    operator: ReportOperator,
    rl: Option<(&FourierSignal, f64)>,
    signal: SignalSpec,
    alpha: f64,
) -> Result<DiagnosticsReport> {
    check_grid(t_grid, false)?;
    cfg.validate()?;
    let verdict = classify_boundedness(g, order, cfg)?;
    let defect = sap_defect(g, order, t_grid, cfg)?;
    let mut values = t_grid.iter().map(|&t| rl_integral(g, order, t, cfg)).collect::<Result<Vec<_>>>()?;
    let correction: Option<Vec<(f64, f64)>> =
        rl.map(|(f, a)| t_grid.iter().map(|&t| (t, rl_correction(f, a, t))).collect());
    let bounded = verdict.kind == VerdictKind::Bounded;
    let mut decomposition = if bounded { Some(decomposition_from(g, order, t_grid, &values)?) } else { None };
    if let Some(c) = &correction {
        for (v, &(_, x)) in values.iter_mut().zip(c) {
            *v += x;
        }
        if let Some(d) = decomposition.as_mut() {
            for (r, &(_, x)) in d.remainder_samples.iter_mut().zip(c) {
                r.1 += x;
            }
            d.fitted_decay = fit_decay(&d.remainder_samples);
        }
    }
    let growth = if bounded { None } else { Some(growth_from(g, order, t_grid, &values)?) };
    let nonperiodicity = if g.is_zero() { None } else { Some(nonperiodicity_certificate(g, order, cfg)?) };
    let samples = t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| SampleRow {
            t,
            i_alpha_f: values[i],
            phi: decomposition.as_ref().map(|d| d.periodic_part.eval(t)),
            remainder: decomposition.as_ref().map(|d| d.remainder_samples[i].1),
            defect: defect.samples[i].1,
            bound: defect.bound_samples[i].1,
        })
        .collect();
    Ok(DiagnosticsReport {
        signal,
        alpha,
        verdict,
        defect,
        decomposition,
        nonperiodicity,
        growth,
        config: *cfg,
        operator,
        analysed_order: order.value(),
        rl_correction: correction,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, TAU};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn half() -> FracOrder {
        FracOrder::weyl(0.5).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let sin = FourierSignal::sin(TAU);
        let v = classify_boundedness(&sin, half(), &cfg()).unwrap();
        assert_eq!(v.kind, VerdictKind::Bounded);
        assert!(v.witness_bound.unwrap() < 1.5);
        let up = classify_boundedness(&sin.with_offset(1.0), half(), &cfg()).unwrap();
        assert_eq!(up.kind, VerdictKind::DivergesPlus);
        assert_eq!(up.witness_bound, None);
        let down = classify_boundedness(&sin.with_offset(-2.0), half(), &cfg()).unwrap();
        assert_eq!(down.kind, VerdictKind::DivergesMinus);
    }

    #[test]
    fn probe_grid_shape() {
        let g = probe_grid(2.0);
        assert_eq!(g.len(), 129);
        assert_eq!(g[0], 0.0);
        assert!((g[32] - 2.0).abs() < 1e-15);
        assert!((g[128] - 80.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn defect_examples() {
        let sin = FourierSignal::sin(TAU);
        let d = sap_defect(&sin, half(), &[100.0], &cfg()).unwrap();
        assert!(d.samples[0].1.abs() <= 0.354_490_770_181_103_2);
        assert!((d.bound_samples[0].1 - 0.354_490_770_181_103_2).abs() < 1e-9);
        let z = sap_defect(&FourierSignal::zero(TAU), half(), &[1.0, 2.0], &cfg()).unwrap();
        assert!(z.samples.iter().all(|s| s.1 == 0.0));
        // identity vs difference of two integrals
        for &t in &[0.5, 7.0, 30.0] {
            let direct = rl_integral(&sin, half(), t + TAU, &cfg()).unwrap() - rl_integral(&sin, half(), t, &cfg()).unwrap();
            assert!((defect_at(&sin, half(), t, &cfg()).unwrap() - direct).abs() < 1e-9);
        }
        assert!(sap_defect(&sin, half(), &[2.0, 1.0], &cfg()).is_err());
    }

    #[test]
    fn defect_envelope_decays() {
        let f = FourierSignal::cos(TAU);
        let a = FracOrder::weyl(0.3).unwrap();
        let early: Vec<f64> = (0..40).map(|i| 20.0 + 0.2 * i as f64).collect();
        let late: Vec<f64> = (0..40).map(|i| 200.0 + 0.2 * i as f64).collect();
        let m1 = sap_defect(&f, a, &early, &cfg()).unwrap().max_abs();
        let m2 = sap_defect(&f, a, &late, &cfg()).unwrap().max_abs();
        let predicted = (20.0f64 / 200.0).powf(0.7);
        assert!(m2 / m1 < 1.3 * predicted, "{m1} {m2}");
    }

    #[test]
    fn decomposition_of_sin() {
        let sin = FourierSignal::sin(TAU);
        let grid: Vec<f64> = (0..64).map(|i| 20.0 * 10f64.powf(i as f64 / 63.0)).collect();
        let d = decompose_asymptotic(&sin, half(), &grid, &cfg()).unwrap();
        let fit = d.fitted_decay.unwrap();
        assert!((fit.exponent + 0.5).abs() < 0.1, "{fit:?}");
        for &(t, r) in &d.remainder_samples[32..] {
            let lead = 1.0 / (PI * t).sqrt();
            assert!((r - lead).abs() < 0.05 * lead, "t={t}: {r} vs {lead}");
        }
        for i in 0..16 {
            let t = TAU * i as f64 / 16.0;
            assert!((d.periodic_part.eval(t) - (t - FRAC_PI_4).sin()).abs() < 1e-12);
        }
        let z = decompose_asymptotic(&FourierSignal::zero(TAU), half(), &grid, &cfg()).unwrap();
        assert!(z.remainder_samples.iter().all(|r| r.1 == 0.0));
        assert!(z.fitted_decay.is_none());
    }

    #[test]
    fn certificates() {
        let sin = FourierSignal::sin(TAU);
        let c = nonperiodicity_certificate(&sin, half(), &cfg()).unwrap();
        assert!(c.delta > 0.1);
        let at_zero = defect_at(&sin, half(), 0.0, &cfg()).unwrap();
        assert!((at_zero + 0.485_663_109_873_498_7).abs() < 1e-10);
        let c = nonperiodicity_certificate(&FourierSignal::cos(TAU), FracOrder::weyl(0.25).unwrap(), &cfg()).unwrap();
        assert!(c.delta > 0.0);
        assert_eq!(
            nonperiodicity_certificate(&FourierSignal::zero(TAU), half(), &cfg()),
            Err(Error::ZeroSignal)
        );
    }

    #[test]
    fn growth_examples() {
        let grid: Vec<f64> = (0..41).map(|i| 50.0 + 350.0 * i as f64 / 40.0).collect();
        let g = growth_fit(&FourierSignal::sin(TAU).with_offset(1.0), half(), &grid, &cfg()).unwrap();
        assert!((g.exponent - 0.5).abs() < 0.02);
        assert!((g.constant * crate::special::gamma(1.5).unwrap() - 1.0).abs() < 0.05);
        let g = growth_fit(&FourierSignal::constant(TAU, 2.0), half(), &grid, &cfg()).unwrap();
        assert!((g.exponent - 0.5).abs() < 1e-9);
        assert!((g.constant - 2.0 * rgamma(1.5)).abs() < 1e-8);
        let g = growth_fit(&FourierSignal::sin(TAU).with_offset(-1.0), half(), &grid, &cfg()).unwrap();
        assert!((g.exponent - 0.5).abs() < 0.02);
        assert!((g.constant + rgamma(1.5)).abs() < 0.05 * rgamma(1.5));
        assert!(matches!(growth_fit(&FourierSignal::sin(TAU), half(), &grid, &cfg()), Err(Error::ZeroMean { .. })));
    }

    #[test]
    fn derivative_reports() {
        let grid: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let sin = FourierSignal::sin(TAU);
        let r = derivative_diagnostics(&sin, half(), DerivativeKind::Caputo, &grid, &cfg()).unwrap();
        assert_eq!(r.verdict.kind, VerdictKind::Bounded);
        let phi = &r.decomposition.as_ref().unwrap().periodic_part;
        for &t in &[0.0, 1.0, 2.5] {
            assert!((phi.eval(t) - (t - FRAC_PI_4).cos()).abs() < 1e-12);
        }
        let c = derivative_diagnostics(&FourierSignal::constant(TAU, 4.0), half(), DerivativeKind::Caputo, &grid, &cfg())
            .unwrap();
        assert!(c.samples.iter().all(|s| s.i_alpha_f == 0.0 && s.defect == 0.0));
        let f = sin.with_offset(1.0);
        let rl = derivative_diagnostics(&f, half(), DerivativeKind::Rl, &grid, &cfg()).unwrap();
        let cap = derivative_diagnostics(&f, half(), DerivativeKind::Caputo, &grid, &cfg()).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let corr = 1.0 / (PI * t).sqrt();
            let dr = rl.decomposition.as_ref().unwrap().remainder_samples[i].1
                - cap.decomposition.as_ref().unwrap().remainder_samples[i].1;
            assert!((dr - corr).abs() < 1e-14);
        }
    }

    #[test]
    fn report_plumbing() {
        let r = diagnose(&FourierSignal::sin(TAU), half(), None, &cfg()).unwrap();
        assert_eq!(r.samples.len(), 128);
        assert!(r.decomposition.is_some() && r.growth.is_none());
        assert!(r.summary().starts_with("Bounded; asymptotically 2π-periodic"), "{}", r.summary());
        let csv = r.to_csv();
        assert!(csv.starts_with("t,I_alpha_f,phi,remainder,defect,bound\n"));
        assert_eq!(csv.lines().count(), 129);
        let json = r.to_json();
        let back: DiagnosticsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.samples.len(), 128);
        let keys: Vec<&str> = ["\"signal\"", "\"alpha\"", "\"verdict\"", "\"defect\"", "\"config\""].to_vec();
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));

        let up = diagnose(&FourierSignal::sin(TAU).with_offset(1.0), half(), None, &cfg()).unwrap();
        assert!(up.decomposition.is_none() && up.growth.is_some());
        assert!((up.growth.unwrap().exponent - 0.5).abs() <= 0.02);
        assert_eq!(up.summary(), "Diverges (+); growth exponent ≈ 0.5");
        let z = diagnose(&FourierSignal::zero(TAU), half(), None, &cfg()).unwrap();
        assert!(z.nonperiodicity.is_none());
    }

    #[test]
    fn period_formatting() {
        assert_eq!(format_period(TAU), "2π");
        assert_eq!(format_period(PI), "π");
        assert_eq!(format_period(1.5), "1.5");
    }
}
