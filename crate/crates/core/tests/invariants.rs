mod common;

use std::f64::consts::TAU;

use common::{random_mean, random_signal};
use fracperiod::diagnostics::{classify_boundedness, decompose_asymptotic, defect_bound, sap_defect};
use fracperiod::operators::{
    iterated_rl_integral, rl_integral, weyl_integral_fourier, weyl_integral_kernel, weyl_integral_limit,
};
use fracperiod::quadrature::{oracle_singular_integral, singular_integral};
use fracperiod::special::gamma;
use fracperiod::{FourierSignal, FracOrder, QuadratureConfig, VerdictKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn product_rule_agrees_with_substitution_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = cfg();
    for case in 0..200 {
        let period = rng.gen_range(0.5..10.0);
        let mean = rng.gen_range(-1.0..1.0);
        let f = random_signal(&mut rng, 6, period, mean);
        let a = FracOrder::integral(rng.gen_range(0.05..0.95)).unwrap();
        let t = rng.gen_range(0.1..50.0);
        let v = singular_integral(&f, a, t, &c).unwrap();
        let o = oracle_singular_integral(&f, a, t, &c).unwrap();
        let tol = 10.0 * (c.rel_tol * v.abs()).max(c.abs_tol);
        assert!((v - o).abs() <= tol, "case {case}: {v} vs {o}");
    }
}

#[test]
fn defect_respects_decay_bound_and_exact_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = cfg();
    for case in 0..50 {
        let period = rng.gen_range(0.5..10.0);
        let mean = rng.gen_range(-1.0..1.0);
        let f = random_signal(&mut rng, 6, period, mean);
        let alpha = rng.gen_range(0.05..0.95);
        let a = FracOrder::weyl(alpha).unwrap();
        let t = period * rng.gen_range(1.0..100.0);
        let d = sap_defect(&f, a, &[t], &c).unwrap().samples[0].1;
        assert!(d.abs() <= defect_bound(&f, alpha, t) + 1e-8, "case {case}");
        let direct = rl_integral(&f, a, t + period, &c).unwrap() - rl_integral(&f, a, t, &c).unwrap();
        let scale = rl_integral(&f, a, t + period, &c).unwrap().abs().max(1.0);
        assert!((d - direct).abs() <= 10.0 * c.rel_tol * scale, "case {case}: {d} vs {direct}");
    }
}

#[test]
fn bounded_iff_zero_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = cfg();
    for case in 0..100 {
        let zero = case % 2 == 0;
        let period = rng.gen_range(0.5..10.0);
        let mean = random_mean(&mut rng, zero);
        let f = random_signal(&mut rng, 6, period, mean);
        let a = FracOrder::weyl(rng.gen_range(0.05..0.95)).unwrap();
        let v = classify_boundedness(&f, a, &c).unwrap();
        assert_eq!(v.kind == VerdictKind::Bounded, f.mean().abs() <= f.mean_tolerance(), "case {case}");
        if !zero {
            let sign = f.mean().signum();
            let early = rl_integral(&f, a, 10.0 * period, &c).unwrap();
            let late = rl_integral(&f, a, 40.0 * period, &c).unwrap();
            assert!(sign * late > sign * early, "case {case}: {early} → {late}");
            let expected = if sign > 0.0 { VerdictKind::DivergesPlus } else { VerdictKind::DivergesMinus };
            assert_eq!(v.kind, expected);
        }
    }
}

#[test]
fn remainder_stays_under_envelope_and_is_not_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = cfg();
    for case in 0..12 {
        let period = rng.gen_range(0.5..10.0);
        let f = random_signal(&mut rng, 4, period, 0.0);
        let alpha = rng.gen_range(0.1..0.9);
        let a = FracOrder::weyl(alpha).unwrap();
        let mass = f.positive_part_mass().unwrap();
        let tail: Vec<f64> = (1..=24).map(|i| period * (3.0 + 1.5 * i as f64)).collect();
        let d = decompose_asymptotic(&f, a, &tail, &c).unwrap();
        for &(t, r) in &d.remainder_samples {
            let env = mass * t.powf(alpha - 1.0) / gamma(alpha).unwrap();
            assert!(r.abs() <= env + 1e-9, "case {case} t={t}: {r} > {env}");
        }
        // the remainder is a genuine non-zero transient on (0, 3T]
        let early: Vec<f64> = (1..=24).map(|i| 3.0 * period * i as f64 / 24.0).collect();
        let e = decompose_asymptotic(&f, a, &early, &c).unwrap();
        let max_early = e.remainder_samples.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        assert!(max_early > 10.0 * c.abs_tol.max(c.rel_tol));
        let phi = &d.periodic_part;
        for i in 0..8 {
            let t = period * i as f64 / 8.0;
            assert!((phi.eval(t + period) - phi.eval(t)).abs() <= 1e-12);
        }
    }
}

#[test]
fn weyl_routes_agree() {
    let c = cfg();
    let signals = [
        FourierSignal::sin(TAU),
        FourierSignal::cos(TAU),
        FourierSignal::cos(TAU).add(&FourierSignal::cos_harmonic(TAU, 2, -1.0)).unwrap(),
        FourierSignal::square_wave_truncated(3.0, 3),
    ];
    for f in &signals {
        for &alpha in &[0.3, 0.5, 0.7] {
            let a = FracOrder::weyl(alpha).unwrap();
            for i in 0..33 {
                let t = -f.period() + 3.0 * f.period() * i as f64 / 32.0;
                let x = weyl_integral_fourier(f, a, t).unwrap();
                let y = weyl_integral_limit(f, a, t, 1e-8, &c).unwrap();
                let z = weyl_integral_kernel(f, a, t).unwrap();
                assert!((x - y).abs() <= 1e-7 && (x - z).abs() <= 1e-7 && (y - z).abs() <= 1e-7, "α={alpha} t={t}: {x} {y} {z}");
            }
        }
    }
}

#[test]
fn semigroup_on_interval() {
    let c = cfg();
    let f = FourierSignal::sin(TAU);
    let (a, b, ab) = (FracOrder::integral(0.3).unwrap(), FracOrder::integral(0.4).unwrap(), FracOrder::integral(0.7).unwrap());
    for i in 0..=8 {
        let t = 0.5 + 9.5 * i as f64 / 8.0;
        let lhs = iterated_rl_integral(&f, a, b, t, &c).unwrap();
        let rhs = rl_integral(&f, ab, t, &c).unwrap();
        assert!((lhs - rhs).abs() <= 1e-7, "t={t}: {lhs} vs {rhs}");
    }
}
