//! Gauss-Legendre tables and an adaptive Gauss-Kronrod (10, 21) integrator.
//!
//! Nodes are given on `[-1, 1]`; only the non-negative half is stored.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Four-point Gauss-Legendre nodes (positive half).
pub(crate) const GL4_NODES: [f64; 2] = [0.339_981_043_584_856_3, 0.861_136_311_594_052_6];

/// Kronrod 21-point abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_436,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Ten-point Gauss-Legendre nodes on `[0, 1]` with matching weights (sum 1).
pub(crate) fn gl10_unit() -> [(f64, f64); 10] {
    let mut out = [(0.0, 0.0); 10];
    for j in 0..5 {
        let x = XGK[2 * j + 1];
        out[2 * j] = (0.5 * (1.0 - x), 0.5 * WG[j]);
        out[2 * j + 1] = (0.5 * (1.0 + x), 0.5 * WG[j]);
    }
    out
}

/// Ten-point Gauss-Legendre rule on each of `panels` equal subintervals.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let rule = gl10_unit();
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mut s = 0.0;
        for &(x, w) in &rule {
            s += w * f(lo + h * x);
        }
        sum += s * h;
    }
    sum
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Returns `(value, error, roundoff floor)`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut vals = [0.0; 21];
    vals[20] = f(center);
    let mut kronrod = WGK[10] * vals[20];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        vals[2 * j] = f(center - dx);
        vals[2 * j + 1] = f(center + dx);
        let pair = vals[2 * j] + vals[2 * j + 1];
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (vals[20] - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((vals[2 * j] - mean).abs() + (vals[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    // QUADPACK rescaling of the raw |K - G| estimate
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * (value.abs() + asc);
    (value, err.max(floor), floor)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Global adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// The interval is first cut into `pieces` equal parts; see [`integrate_breaks`].
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Integral {
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let mut breaks: Vec<f64> = (0..pieces).map(|p| a + h * p as f64).collect();
    breaks.push(b);
    integrate_breaks(f, &breaks, abs_tol, rel_tol, max_segments)
}

/// Adaptive integration over consecutive intervals `[breaks[i], breaks[i+1]]`.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)` or `max_segments` is hit.
pub fn integrate_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Integral {
    let mut heap = BinaryHeap::with_capacity(2 * breaks.len());
    let mut value = 0.0;
    let mut error = 0.0;
    let mut noise = 0.0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (v, e, r) = gk21(&f, w[0], w[1]);
        value += v;
        error += e;
        noise += r;
        heap.push(Segment { a: w[0], b: w[1], value: v, error: e, floor: r });
    }
    if heap.is_empty() {
        return Integral { value: 0.0, error: 0.0, converged: true };
    }
    let mut frozen = Vec::new();
    let mut steps = 0usize;
    loop {
        // periodic exact re-summation keeps the running totals from drifting
        if steps.is_multiple_of(64) {
            value = heap.iter().chain(frozen.iter()).map(|s: &Segment| s.value).sum();
            error = heap.iter().chain(frozen.iter()).map(|s: &Segment| s.error).sum();
            noise = heap.iter().chain(frozen.iter()).map(|s: &Segment| s.floor).sum();
        }
        steps += 1;
        // error at the rounding level of the sum counts as converged
        let target = abs_tol.max(rel_tol * value.abs()).max(noise);
        if error <= target {
            return Integral { value, error, converged: true };
        }
        if heap.len() + frozen.len() >= max_segments {
            return Integral { value, error, converged: false };
        }
        let Some(worst) = heap.pop() else {
            return Integral { value, error, converged: false };
        };
        // segments at the resolution limit of f64 are not split further
        if (worst.b - worst.a).abs() <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
            frozen.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1, r1) = gk21(&f, worst.a, mid);
        let (v2, e2, r2) = gk21(&f, mid, worst.b);
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        noise += r1 + r2 - worst.floor;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, floor: r1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, floor: r2 });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gl10_integrates_degree_19_exactly() {
        let v = gauss_legendre(|x| x.powi(19) + x.powi(4), 0.0, 1.0, 1);
        assert!((v - (1.0 / 20.0 + 1.0 / 5.0)).abs() < 1e-15);
        let w: f64 = gl10_unit().iter().map(|p| p.1).sum();
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, 1, 1e-12, 1e-12, 2000);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn adaptive_oscillatory() {
        let r = integrate(|x: f64| x.sin(), 0.0, 20.0 * PI, 8, 1e-13, 1e-13, 2000);
        assert!(r.value.abs() < 1e-12);
        let r = integrate(|x: f64| x.sin(), 0.0, PI, 1, 1e-14, 1e-14, 2000);
        assert!((r.value - 2.0).abs() < 1e-14);
    }
}
