//! Real periodic signals represented as finite Fourier series.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss;

/// Relative tolerance used when checking `c_{-k} = conj(c_k)`.
const CONJUGATE_TOL: f64 = 1e-12;

/// A real `T`-periodic signal `f(t) = Σ_{|k|≤K} c_k e^{ikωt}`, `ω = 2π/T`.
///
/// Only the harmonics `k ≥ 0` are stored; the negative ones follow from the
/// reality constraint. `coeffs[0]` is real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSignal {
    period: f64,
    coeffs: Vec<Complex64>,
}

/// Bracketed estimate of `max_t |f(t)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    /// Maximum of `|f|` over the sampling grid.
    pub lower: f64,
    /// Grid maximum refined by a local search; `lower ≤ value ≤ upper`.
    pub value: f64,
    /// `Σ_k |c_k|`.
    pub upper: f64,
}

impl FourierSignal {
    /// Builds a signal from the non-negative harmonics `c_0, c_1, …, c_K`.
    pub fn from_nonnegative(period: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidSignal(format!("period must be positive, got {period}")));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSignal("non-finite coefficient".into()));
        }
        let mut coeffs = if coeffs.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { coeffs };
        if coeffs[0].im.abs() > CONJUGATE_TOL * (1.0 + coeffs[0].re.abs()) {
            return Err(Error::InvalidSignal(format!(
                "c_0 must be real, got imaginary part {}",
                coeffs[0].im
            )));
        }
        coeffs[0].im = 0.0;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Ok(Self { period, coeffs })
    }

    /// Builds a signal from a full list of `(k, c_k)` pairs.
    ///
    /// Every `k ≠ 0` must appear together with `-k`, carrying the complex
    /// conjugate amplitude. Duplicated harmonics are rejected.
    pub fn from_harmonics(period: f64, harmonics: &[(i64, Complex64)]) -> Result<Self> {
        use std::collections::BTreeMap;
        let mut map = BTreeMap::new();
        for &(k, c) in harmonics {
            if map.insert(k, c).is_some() {
                return Err(Error::InvalidSignal(format!("harmonic k = {k} listed twice")));
            }
        }
        let kmax = map.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for (&k, &c) in &map {
            if k < 0 {
                if !map.contains_key(&-k) {
                    return Err(Error::InvalidSignal(format!(
                        "harmonic k = {k} has no matching k = {} partner",
                        -k
                    )));
                }
                continue;
            }
            if k > 0 {
                let partner = map.get(&-k).ok_or_else(|| {
                    Error::InvalidSignal(format!(
                        "harmonic k = {k} has no matching k = {} partner",
                        -k
                    ))
                })?;
                let mismatch = (partner - c.conj()).norm();
                if mismatch > CONJUGATE_TOL * (1.0 + c.norm()) {
                    return Err(Error::InvalidSignal(format!(
                        "c_{{-{k}}} is not the conjugate of c_{k}"
                    )));
                }
            }
            coeffs[k as usize] = c;
        }
        Self::from_nonnegative(period, coeffs)
    }

    pub fn zero(period: f64) -> Self {
        Self { period, coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn constant(period: f64, value: f64) -> Self {
        Self { period, coeffs: vec![Complex64::new(value, 0.0)] }
    }

    /// `sin(2πt/T)`.
    pub fn sin(period: f64) -> Self {
        Self::sin_harmonic(period, 1, 1.0)
    }

    /// `cos(2πt/T)`.
    pub fn cos(period: f64) -> Self {
        Self::cos_harmonic(period, 1, 1.0)
    }

    /// `amplitude · sin(2πkt/T)`.
    pub fn sin_harmonic(period: f64, k: usize, amplitude: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(0.0, -0.5 * amplitude);
        Self { period, coeffs }
    }

    /// `amplitude · cos(2πkt/T)`.
    pub fn cos_harmonic(period: f64, k: usize, amplitude: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(0.5 * amplitude, 0.0);
        Self { period, coeffs }
    }

    /// Odd harmonics `k = 1, 3, …, 2·terms-1` of the unit square wave.
    pub fn square_wave_truncated(period: f64, terms: usize) -> Self {
        let terms = terms.max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * terms];
        for j in 0..terms {
            let k = 2 * j + 1;
            coeffs[k] = Complex64::new(0.0, -2.0 / (PI * k as f64));
        }
        Self { period, coeffs }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Angular frequency `2π/T`.
    pub fn omega(&self) -> f64 {
        TAU / self.period
    }

    /// Highest harmonic index `K`.
    pub fn max_harmonic(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_k` for any integer `k`, zero outside `|k| ≤ K`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if k >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Non-negative harmonics `c_0, …, c_K`.
    pub fn nonnegative_coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// All harmonics as `(k, c_k)` for `-K ≤ k ≤ K`, skipping zeros.
    pub fn harmonics(&self) -> Vec<(i64, Complex64)> {
        let kmax = self.max_harmonic() as i64;
        (-kmax..=kmax)
            .map(|k| (k, self.coefficient(k)))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// `f(t)`, summed as `c_0 + 2 Re Σ_{k>0} c_k e^{ikωt}`.
    pub fn eval(&self, t: f64) -> f64 {
        let phase = TAU * (t.rem_euclid(self.period) / self.period);
        let step = Complex64::from_polar(1.0, phase);
        let mut rot = step;
        let mut acc = 0.0;
        for c in &self.coeffs[1..] {
            acc += c.re * rot.re - c.im * rot.im;
            rot *= step;
        }
        self.coeffs[0].re + 2.0 * acc
    }

    /// `(1/T)∫₀ᵀ f`, exactly `c_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Tolerance under which the mean is treated as zero: `1e-12·(1+‖f‖∞)`.
    pub fn mean_tolerance(&self) -> f64 {
        1e-12 * (1.0 + self.sup_norm().value)
    }

    pub fn has_zero_mean(&self) -> bool {
        self.mean().abs() <= self.mean_tolerance()
    }

    /// Grid resolution used for `sup_norm` and root bracketing: `8K + 64`.
    pub fn grid_points(&self) -> usize {
        8 * self.max_harmonic() + 64
    }

    pub fn sup_norm(&self) -> SupNorm {
        let upper = self.coeffs[0].re.abs() + 2.0 * self.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>();
        let n = self.grid_points();
        let h = self.period / n as f64;
        let (mut imax, mut lower) = (0, 0.0_f64);
        for i in 0..n {
            let v = self.eval(h * i as f64).abs();
            if v > lower {
                lower = v;
                imax = i;
            }
        }
        // golden-section refinement of |f| in the bracket around the grid maximum
        let mut a = h * (imax as f64 - 1.0);
        let mut b = h * (imax as f64 + 1.0);
        let g = |x: f64| -self.eval(x).abs();
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let (mut g1, mut g2) = (g(x1), g(x2));
        for _ in 0..80 {
            if g1 < g2 {
                b = x2;
                x2 = x1;
                g2 = g1;
                x1 = b - ratio * (b - a);
                g1 = g(x1);
            } else {
                a = x1;
                x1 = x2;
                g1 = g2;
                x2 = a + ratio * (b - a);
                g2 = g(x2);
            }
        }
        let value = (-g1.min(g2)).max(lower).min(upper);
        SupNorm { lower, value, upper }
    }

    /// `c = ∫₀ᵀ f⁺` for a zero-mean signal; equals `∫₀ᵀ f⁻`.
    pub fn positive_part_mass(&self) -> Result<f64> {
        let tol = 1e-12 * self.sup_norm().value;
        if self.mean().abs() > tol {
            return Err(Error::NonZeroMean { mean: self.mean(), tol });
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let n = self.grid_points();
        let h = self.period / n as f64;
        let mut nodes = vec![0.0];
        let mut prev = self.eval(0.0);
        for i in 1..=n {
            let x = h * i as f64;
            let v = if i == n { self.eval(0.0) } else { self.eval(x) };
            if v == 0.0 {
                nodes.push(x);
            } else if prev != 0.0 && prev.signum() != v.signum() {
                nodes.push(self.bisect_root(x - h, x, prev));
            }
            prev = v;
        }
        nodes.push(self.period);
        let scale = self.sup_norm().value * self.period;
        let mut mass = 0.0;
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            if self.eval(0.5 * (a + b)) > 0.0 {
                let pieces = ((self.max_harmonic().max(1) * 2) as f64 * (b - a) / self.period).ceil() as usize;
                let abs_tol = 1e-13 * scale;
                let r = gauss::integrate(|s| self.eval(s), a, b, pieces.max(1), abs_tol, 1e-13, 4000);
                mass += r.value.max(0.0);
            }
        }
        Ok(mass)
    }

    fn bisect_root(&self, mut a: f64, mut b: f64, fa: f64) -> f64 {
        let sa = fa.signum();
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = self.eval(m);
            if fm == 0.0 {
                return m;
            }
            if fm.signum() == sa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    /// `f'`, coefficients `ikω·c_k`.
    pub fn differentiate(&self) -> Self {
        let w = self.omega();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, k as f64 * w))
            .collect();
        Self { period: self.period, coeffs }
    }

    /// The zero-mean periodic antiderivative `Σ_{k≠0} c_k/(ikω) e^{ikωt}`.
    /// The mean `c_0` is dropped.
    pub fn periodic_antiderivative(&self) -> Self {
        let w = self.omega();
        let mut coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { Complex64::new(0.0, 0.0) } else { c / Complex64::new(0.0, k as f64 * w) })
            .collect();
        coeffs[0] = Complex64::new(0.0, 0.0);
        Self { period: self.period, coeffs }
    }

    /// Applies `c_k ↦ m(k)·c_k` for `k ≥ 0`; `m(0)` must keep `c_0` real.
    pub fn map_coefficients<M: Fn(usize, Complex64) -> Complex64>(&self, m: M) -> Self {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().enumerate().map(|(k, c)| m(k, *c)).collect();
        coeffs[0].im = 0.0;
        Self { period: self.period, coeffs }
    }

    /// Removes the mean.
    pub fn centered(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_coefficients(|_, c| c * factor)
    }

    pub fn with_offset(&self, offset: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0].re += offset;
        out
    }

    /// `self + other`; both signals must share the period.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.period - other.period).abs() > 1e-14 * self.period {
            return Err(Error::InvalidSignal(format!(
                "period mismatch: {} vs {}",
                self.period, other.period
            )));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_default()
                    + other.coeffs.get(k).copied().unwrap_or_default()
            })
            .collect();
        Self::from_nonnegative(self.period, coeffs)
    }
}

/// One `(k, Re c_k, Im c_k)` entry of an explicit coefficient list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Sin,
    Cos,
    Const,
    SquareWaveTruncated,
}

impl std::str::FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin" => Ok(Self::Sin),
            "cos" => Ok(Self::Cos),
            "const" => Ok(Self::Const),
            "square-wave-truncated" => Ok(Self::SquareWaveTruncated),
            other => Err(Error::InvalidSignal(format!("unknown builtin signal `{other}`"))),
        }
    }
}

fn default_period() -> f64 {
    TAU
}
fn default_amplitude() -> f64 {
    1.0
}
fn default_terms() -> usize {
    5
}

/// User-facing description of a signal, as read from JSON or TOML.
///
/// ```json
/// {"period": 6.283185307179586, "harmonics": [{"k": 1, "re": 0, "im": -0.5}, {"k": -1, "re": 0, "im": 0.5}]}
/// {"builtin": "sin", "period": 6.283185307179586, "amplitude": 1, "offset": 0}
/// ```
///
/// `const` evaluates to `amplitude + offset`; `square-wave-truncated` keeps
/// the first `terms` odd harmonics of a unit square wave scaled by `amplitude`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSpec {
    Builtin {
        builtin: Builtin,
        #[serde(default = "default_period")]
        period: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        offset: f64,
        #[serde(default = "default_terms")]
        terms: usize,
    },
    Explicit {
        period: f64,
        harmonics: Vec<Harmonic>,
    },
}

impl SignalSpec {
    pub fn builtin(builtin: Builtin, period: f64, amplitude: f64, offset: f64) -> Self {
        Self::Builtin { builtin, period, amplitude, offset, terms: default_terms() }
    }

    pub fn to_signal(&self) -> Result<FourierSignal> {
        match *self {
            Self::Builtin { builtin, period, amplitude, offset, terms } => {
                if !(period.is_finite() && period > 0.0) {
                    return Err(Error::InvalidSignal(format!("period must be positive, got {period}")));
                }
                if !(amplitude.is_finite() && offset.is_finite()) {
                    return Err(Error::InvalidSignal("non-finite amplitude or offset".into()));
                }
                let base = match builtin {
                    Builtin::Sin => FourierSignal::sin(period).scaled(amplitude),
                    Builtin::Cos => FourierSignal::cos(period).scaled(amplitude),
                    Builtin::Const => FourierSignal::constant(period, amplitude),
                    Builtin::SquareWaveTruncated => {
                        FourierSignal::square_wave_truncated(period, terms).scaled(amplitude)
                    }
                };
                Ok(base.with_offset(offset))
            }
            Self::Explicit { period, ref harmonics } => {
                let list: Vec<(i64, Complex64)> =
                    harmonics.iter().map(|h| (h.k, Complex64::new(h.re, h.im))).collect();
                FourierSignal::from_harmonics(period, &list)
            }
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidSignal(e.to_string()))
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidSignal(e.to_string()))
    }

    /// Reads a spec file; `.toml` files are parsed as TOML, everything else as JSON.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSignal(format!("{}: {e}", path.display())))?;
        let spec = if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml_str(&text)?
        } else {
            Self::from_json_str(&text)?
        };
        spec.to_signal()?;
        Ok(spec)
    }
}

impl From<&FourierSignal> for SignalSpec {
    /// Explicit coefficient listing of a signal, both signs of `k`.
    fn from(f: &FourierSignal) -> Self {
        let harmonics = f.harmonics().into_iter().map(|(k, c)| Harmonic { k, re: c.re, im: c.im }).collect();
        Self::Explicit { period: f.period(), harmonics }
    }
}
