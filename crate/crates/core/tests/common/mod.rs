#![allow(dead_code)]

use fracperiod::FourierSignal;
use num_complex::Complex64;
use rand::Rng;

/// Random signal with `K ≤ max_k` harmonics and coefficients in `[-1, 1]`.
pub fn random_signal<R: Rng>(rng: &mut R, max_k: usize, period: f64, mean: f64) -> FourierSignal {
    let k = rng.gen_range(1..=max_k);
    let mut c = vec![Complex64::new(mean, 0.0)];
    for _ in 0..k {
        c.push(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    FourierSignal::from_nonnegative(period, c).unwrap()
}

/// Mean that is either exactly zero or at least `0.2` away from it.
pub fn random_mean<R: Rng>(rng: &mut R, zero: bool) -> f64 {
    if zero {
        0.0
    } else {
        let m = rng.gen_range(0.2..1.5);
        if rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    }
}
