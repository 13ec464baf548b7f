//! Special functions behind the closed forms and the Weyl kernel.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`gamma`] | Γ(x), Lanczos (g = 7) with reflection |
//! | [`pochhammer`] | rising factorial (A)_j |
//! | [`hyp1f2`] | ₁F₂(a; b₁, b₂; z) by its power series |
//! | [`hurwitz_zeta`] | ζ(s, q) by Euler-Maclaurin |
//! | [`weyl_kernel_g`] | periodic Weyl kernel for 2π-periodic signals |
//! | [`i_alpha_sin_closed`] | reference values of I^α sin |

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, with a pole error at non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::PoleAtNonPositiveInteger(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let w = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * w.powf(x + 0.5) * (-w).exp() * acc
}

/// `1/Γ(x)` for orders in the operators' admissible ranges.
pub(crate) fn rgamma(x: f64) -> f64 {
    1.0 / gamma_unchecked(x)
}

/// Rising factorial `(A)_j = A(A+1)⋯(A+j-1)`, `(A)_0 = 1`.
pub fn pochhammer(a: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Double-double number `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let u = Self::quick(s.hi, s.lo + t.hi);
        Self::quick(u.hi, u.lo + t.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::quick(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::from(-q2)));
        let q3 = r.hi / o.hi;
        let q = Self::quick(q1, q2);
        q.add(Self::from(q3))
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Parameters of `₁F₂(a; b₁, b₂; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp1F2Params {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub z: f64,
}

impl Hyp1F2Params {
    pub fn new(a: f64, b1: f64, b2: f64, z: f64) -> Result<Self> {
        for (name, b) in [("b1", b1), ("b2", b2)] {
            if b <= 0.0 && b == b.floor() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {b} is a non-positive integer"
                )));
            }
        }
        Ok(Self { a, b1, b2, z })
    }
}

/// Largest `|z|` for which the power series is summed.
pub const HYP1F2_MAX_ABS_Z: f64 = 400.0;

/// `₁F₂(a; b₁, b₂; z) = Σ_j (a)_j z^j / ((b₁)_j (b₂)_j j!)`.
///
/// Terms follow the ratio `z(a+j)/((b₁+j)(b₂+j)(j+1))` and are accumulated
/// in double-double arithmetic: for negative `z` the terms grow to roughly
/// `e^{2√|z|}` before decaying while the sum stays `O(|z|^{-1})`. Summation
/// stops once `|term| < 1e-16·|sum|` for three consecutive terms.
pub fn hyp1f2(p: Hyp1F2Params) -> Result<f64> {
    let p = Hyp1F2Params::new(p.a, p.b1, p.b2, p.z)?;
    if !p.z.is_finite() || p.z.abs() > HYP1F2_MAX_ABS_Z {
        return Err(Error::SeriesIllConditioned(p.z));
    }
    let z = Dd::from(p.z);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let mut small = 0;
    for j in 0..100_000u32 {
        let jf = j as f64;
        let num = z.mul(Dd::two_sum(p.a, jf));
        let den = Dd::two_sum(p.b1, jf).mul(Dd::two_sum(p.b2, jf)).mul(Dd::from(jf + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        if term.hi.abs() < 1e-16 * sum.hi.abs() || term.hi == 0.0 {
            small += 1;
            if small >= 3 {
                return Ok(sum.to_f64());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesIllConditioned(p.z))
}

/// Large-`t` expansion of `I^α` applied to `sin` (`cosine = false`) or `cos`:
/// the periodic part `sin(t - απ/2)` / `cos(t - απ/2)` plus
/// `(1/Γ(α)) Σ_k (-1)^k [α-1]_m t^{α-1-m}` with falling factorials,
/// `m = 2k` for sine and `m = 2k+1` for cosine.
///
/// The asymptotic series is cut at its smallest term, which is returned as
/// the error estimate.
pub fn i_alpha_trig_large_t(alpha: f64, t: f64, cosine: bool) -> (f64, f64) {
    let beta = alpha - 1.0;
    let periodic = if cosine { (t - 0.5 * alpha * PI).cos() } else { (t - 0.5 * alpha * PI).sin() };
    let start = if cosine { 1 } else { 0 };
    // falling factorial [β]_m and sign
    let mut fall = 1.0;
    let mut m = 0;
    while m < start {
        fall *= beta - m as f64;
        m += 1;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for _ in 0..2_000 {
        let term = sign * fall * t.powf(beta - m as f64);
        if term.abs() > last {
            break;
        }
        sum += term;
        err = term.abs();
        last = term.abs();
        if term == 0.0 || term.abs() < 1e-18 * sum.abs() {
            break;
        }
        fall *= (beta - m as f64) * (beta - m as f64 - 1.0);
        m += 2;
        sign = -sign;
    }
    let r = rgamma(alpha);
    (periodic + r * sum, r * err)
}

fn check_integral_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidOrder { alpha, lo: 0.0, hi: 2.0 });
    }
    Ok(())
}

/// Reference value of `I^α sin(t)` for `α ∈ (0, 2)`, `t > 0`:
/// `t^{α+1}/Γ(α+2) · ₁F₂(1; α/2+1, (α+3)/2; -t²/4)` while `t²/4 ≤ 400`,
/// the large-`t` expansion beyond.
pub fn i_alpha_sin_closed(alpha: f64, t: f64) -> Result<f64> {
    check_integral_order(alpha)?;
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let z = -0.25 * t * t;
    if z.abs() <= HYP1F2_MAX_ABS_Z {
        let p = Hyp1F2Params::new(1.0, 0.5 * alpha + 1.0, 0.5 * (alpha + 3.0), z)?;
        Ok(t.powf(alpha + 1.0) * rgamma(alpha + 2.0) * hyp1f2(p)?)
    } else {
        Ok(i_alpha_trig_large_t(alpha, t, false).0)
    }
}

/// Reference value of `I^α cos(t)`:
/// `t^α/Γ(α+1) · ₁F₂(1; (α+1)/2, (α+2)/2; -t²/4)`, large-`t` expansion beyond.
pub fn i_alpha_cos_closed(alpha: f64, t: f64) -> Result<f64> {
    check_integral_order(alpha)?;
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let z = -0.25 * t * t;
    if z.abs() <= HYP1F2_MAX_ABS_Z {
        let p = Hyp1F2Params::new(1.0, 0.5 * (alpha + 1.0), 0.5 * (alpha + 2.0), z)?;
        Ok(t.powf(alpha) * rgamma(alpha + 1.0) * hyp1f2(p)?)
    } else {
        Ok(i_alpha_trig_large_t(alpha, t, true).0)
    }
}

/// Two-term large-`t` forms of `I^α sin` at `α = 1/2` and `α = 3/2`:
///
/// * `α = 1/2`: `1/√(πt) + (sin t - cos t)/√2`
/// * `α = 3/2`: `2√t/√π - (sin t + cos t)/√2`
pub fn i_alpha_sin_asymptotic(alpha: f64, t: f64) -> Result<f64> {
    if t < 20.0 {
        return Err(Error::InvalidParameter(format!("asymptotic form needs t ≥ 20, got {t}")));
    }
    let r2 = std::f64::consts::SQRT_2;
    if (alpha - 0.5).abs() < 1e-12 {
        Ok((1.0 / t).sqrt() / PI.sqrt() + (t.sin() - t.cos()) / r2)
    } else if (alpha - 1.5).abs() < 1e-12 {
        Ok(2.0 * t.sqrt() / PI.sqrt() - (t.sin() + t.cos()) / r2)
    } else {
        Err(Error::UnsupportedOrder(alpha))
    }
}

/// B_{2k}/(2k)! for k = 1..=12.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77_683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
];

/// Shift applied before the Euler-Maclaurin tail: `q + N ≥ 20`.
const ZETA_SHIFT_TARGET: f64 = 20.0;

/// Hurwitz zeta `ζ(s, q) = Σ_{m≥0} (m+q)^{-s}`, analytically continued to
/// all real `s ≠ 1`, for `q > 0`.
///
/// Direct summation up to `N` with `q + N ≥ 20`, then the Euler-Maclaurin
/// tail with twelve Bernoulli corrections.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::InvalidParameter("ζ(s, q) has a pole at s = 1".into()));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidParameter(format!("ζ(s, q) needs q > 0, got {q}")));
    }
    let n = (ZETA_SHIFT_TARGET - q).ceil().max(0.0) as usize;
    let mut head = 0.0;
    // smallest terms first
    for m in (0..n).rev() {
        head += (q + m as f64).powf(-s);
    }
    let x = q + n as f64;
    let xs = x.powf(-s);
    let mut tail = x * xs / (s - 1.0) + 0.5 * xs;
    // (s)_{2k-1} x^{-s-2k+1}
    let mut rising = s;
    let mut power = xs / x;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * rising * power;
        tail += term;
        let kk = (2 * k + 1) as f64;
        rising *= (s + kk) * (s + kk + 1.0);
        power /= x * x;
    }
    Ok(head + tail)
}

/// Periodic Weyl kernel for 2π-periodic signals,
/// `g(s) = (2π)^α ζ(1-α, s/2π)/Γ(α)`, for `s > 0`, `α ∈ (0, 1)`.
///
/// Equal to `2π s^{α-1}/Γ(α) + (1/Γ(α)) lim_n [2π Σ_{m=1}^n (s+2πm)^{α-1} - (2πn)^α/α]`;
/// see [`weyl_kernel_g_truncated`].
pub fn weyl_kernel_g(s: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidOrder { alpha, lo: 0.0, hi: 1.0 });
    }
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel needs s > 0, got {s}")));
    }
    Ok(TAU.powf(alpha) * hurwitz_zeta(1.0 - alpha, s / TAU)? * rgamma(alpha))
}

/// The kernel's limit definition truncated at `n` terms. Converges like
/// `n^{α-1}`; kept for verification only.
pub fn weyl_kernel_g_truncated(s: f64, alpha: f64, n: u64) -> f64 {
    let mut sum = 0.0;
    for m in (1..=n).rev() {
        sum += (s + TAU * m as f64).powf(alpha - 1.0);
    }
    let bracket = TAU * sum - (TAU * n as f64).powf(alpha) / alpha;
    rgamma(alpha) * (TAU * s.powf(alpha - 1.0) + bracket)
}
