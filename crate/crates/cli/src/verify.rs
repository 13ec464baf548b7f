//! Invariant suites behind `fracperiod verify`.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::str::FromStr;

use fracperiod::diagnostics::{defect_at, defect_bound};
use fracperiod::operators::{
    caputo_derivative, iterated_rl_integral, rl_correction, rl_derivative, rl_integral, weyl_integral_fourier,
    weyl_integral_kernel, weyl_integral_limit,
};
use fracperiod::quadrature::{oracle_singular_integral, singular_integral};
use fracperiod::special::gamma;
use fracperiod::{FourierSignal, FracOrder, QuadratureConfig};

use crate::{CliError, VerifyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    DefectBound,
    RouteAgreement,
    Semigroup,
    RlCaputo,
    SchemeAgreement,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::DefectBound, Suite::RouteAgreement, Suite::Semigroup, Suite::RlCaputo, Suite::SchemeAgreement];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DefectBound => "defect-bound",
            Suite::RouteAgreement => "route-agreement",
            Suite::Semigroup => "semigroup",
            Suite::RlCaputo => "rl-caputo",
            Suite::SchemeAgreement => "scheme-agreement",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub suite: &'static str,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyTable {
    pub rows: Vec<VerifyRow>,
}

impl VerifyTable {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,check,result,detail\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.suite, r.check, if r.passed { "pass" } else { "fail" }, r.detail);
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "suite": r.suite,
                    "check": r.check,
                    "result": if r.passed { "pass" } else { "fail" },
                    "detail": r.detail,
                })
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "rows": rows })).expect("json")
    }

    fn push(&mut self, suite: Suite, check: String, outcome: fracperiod::Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.rows.push(VerifyRow { suite: suite.name(), check, passed, detail: detail.replace(',', ";") });
    }
}

/// Parses `--suite`: absent means all suites, an empty string means none.
pub fn parse_suites(list: Option<&str>) -> Result<Vec<Suite>, CliError> {
    match list {
        None => Ok(Suite::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(CliError::Invalid))
            .collect(),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifyTable, CliError> {
    let suites = parse_suites(args.suite.as_deref())?;
    let cfg = args.quad.config()?;
    let mut table = VerifyTable::default();
    for suite in suites {
        match suite {
            Suite::DefectBound => defect_suite(&cfg, &mut table),
            Suite::RouteAgreement => route_suite(&cfg, &mut table),
            Suite::Semigroup => semigroup_suite(&cfg, &mut table),
            Suite::RlCaputo => rl_caputo_suite(&cfg, &mut table),
            Suite::SchemeAgreement => scheme_suite(&cfg, &mut table),
        }
    }
    Ok(table)
}

fn test_signals() -> Vec<(&'static str, FourierSignal)> {
    vec![
        ("sin", FourierSignal::sin(TAU)),
        ("cos", FourierSignal::cos(TAU)),
        ("cos-cos2", FourierSignal::cos(TAU).add(&FourierSignal::cos_harmonic(TAU, 2, -1.0)).expect("same period")),
        ("square5", FourierSignal::square_wave_truncated(3.0, 5)),
        ("sin6+0.5", FourierSignal::sin_harmonic(2.0, 6, 1.0).with_offset(0.5)),
    ]
}

/// `|Δ(t)| ≤ T‖f‖∞t^{α-1}/Γ(α)`, and `Δ` from the single-period identity
/// against the difference of two integrals.
fn defect_suite(cfg: &QuadratureConfig, table: &mut VerifyTable) {
    for (name, f) in test_signals() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let outcome = (|| {
                let a = FracOrder::weyl(alpha)?;
                let period = f.period();
                let mut worst_bound: f64 = f64::NEG_INFINITY;
                let mut worst_identity: f64 = 0.0;
                for i in 0..8 {
                    let t = period * 100f64.powf(i as f64 / 7.0);
                    let d = defect_at(&f, a, t, cfg)?;
                    worst_bound = worst_bound.max(d.abs() - defect_bound(&f, alpha, t));
                    let hi = rl_integral(&f, a, t + period, cfg)?;
                    let direct = hi - rl_integral(&f, a, t, cfg)?;
                    let tol = 10.0 * cfg.rel_tol * hi.abs().max(1.0);
                    worst_identity = worst_identity.max((d - direct).abs() / tol);
                }
                Ok((
                    worst_bound <= 1e-8 && worst_identity <= 1.0,
                    format!("max excess {worst_bound:.3e}; identity error {worst_identity:.2e} x tol"),
                ))
            })();
            table.push(Suite::DefectBound, format!("{name} alpha={alpha}"), outcome);
        }
    }
}

/// Fourier, limit and kernel Weyl values pairwise within `1e-6`.
fn route_suite(cfg: &QuadratureConfig, table: &mut VerifyTable) {
    let signals = test_signals().into_iter().filter(|(_, f)| f.has_zero_mean());
    for (name, f) in signals {
        for &alpha in &[0.3, 0.5, 0.7] {
            let outcome = (|| {
                let a = FracOrder::weyl(alpha)?;
                let mut worst: f64 = 0.0;
                for i in 0..33 {
                    let t = f.period() * i as f64 / 32.0;
                    let x = weyl_integral_fourier(&f, a, t)?;
                    let y = weyl_integral_limit(&f, a, t, 1e-8, cfg)?;
                    let z = weyl_integral_kernel(&f, a, t)?;
                    worst = worst.max((x - y).abs()).max((x - z).abs()).max((y - z).abs());
                }
                Ok((worst <= 1e-6, format!("max difference {worst:.3e}")))
            })();
            table.push(Suite::RouteAgreement, format!("{name} alpha={alpha}"), outcome);
        }
    }
}

/// `I^{0.3}(I^{0.4} sin) = I^{0.7} sin` within `1e-7` on `[0.5, 10]`.
fn semigroup_suite(cfg: &QuadratureConfig, table: &mut VerifyTable) {
    let f = FourierSignal::sin(TAU);
    for i in 0..5 {
        let t = 0.5 + 9.5 * i as f64 / 4.0;
        let outcome = (|| {
            let lhs = iterated_rl_integral(&f, FracOrder::integral(0.3)?, FracOrder::integral(0.4)?, t, cfg)?;
            let rhs = rl_integral(&f, FracOrder::integral(0.7)?, t, cfg)?;
            let err = (lhs - rhs).abs();
            Ok((err <= 1e-7, format!("difference {err:.3e}")))
        })();
        table.push(Suite::Semigroup, format!("sin t={t}"), outcome);
    }
}

/// RL derivative of a constant against `t^{-α}/Γ(1-α)` and against a
/// centred difference of `I^{1-α}1`; RL minus Caputo equals the correction.
fn rl_caputo_suite(cfg: &QuadratureConfig, table: &mut VerifyTable) {
    let one = FourierSignal::constant(TAU, 1.0);
    for &alpha in &[0.3, 0.5, 0.7] {
        for &t in &[1.0, 4.0, 9.0] {
            let outcome = (|| {
                let a = FracOrder::derivative(alpha)?;
                let v = rl_derivative(&one, a, t, cfg)?;
                let exact = t.powf(-alpha) / gamma(1.0 - alpha)?;
                let inner = FracOrder::integral(1.0 - alpha)?;
                let h = 1e-4;
                let fd = (rl_integral(&one, inner, t + h, cfg)? - rl_integral(&one, inner, t - h, cfg)?) / (2.0 * h);
                let (e1, e2) = ((v - exact).abs(), (v - fd).abs());
                Ok((e1 <= 1e-8 && e2 <= 1e-6, format!("closed form {e1:.3e}; finite difference {e2:.3e}")))
            })();
            table.push(Suite::RlCaputo, format!("const alpha={alpha} t={t}"), outcome);
        }
    }
    let f = FourierSignal::sin(TAU).with_offset(1.0);
    for &alpha in &[0.3, 0.7] {
        let outcome = (|| {
            let a = FracOrder::derivative(alpha)?;
            let mut worst: f64 = 0.0;
            for &t in &[0.5, 3.0, 20.0] {
                let gap = rl_derivative(&f, a, t, cfg)? - caputo_derivative(&f, a, t, cfg)?;
                worst = worst.max((gap - rl_correction(&f, alpha, t)).abs());
            }
            Ok((worst <= 1e-12, format!("max gap error {worst:.3e}")))
        })();
        table.push(Suite::RlCaputo, format!("sin+1 alpha={alpha}"), outcome);
    }
}

/// Product integration against the substitution oracle:
/// `|Q - Q_oracle| ≤ 10·max(rel_tol|Q|, abs_tol)`.
fn scheme_suite(cfg: &QuadratureConfig, table: &mut VerifyTable) {
    for (name, f) in test_signals() {
        for &alpha in &[0.1, 0.5, 0.9] {
            let outcome = (|| {
                let a = FracOrder::integral(alpha)?;
                let mut worst: f64 = 0.0;
                for &t in &[0.5, 7.0, 40.0] {
                    let q = singular_integral(&f, a, t, cfg)?;
                    let o = oracle_singular_integral(&f, a, t, cfg)?;
                    worst = worst.max((q - o).abs() / (10.0 * (cfg.rel_tol * q.abs()).max(cfg.abs_tol)));
                }
                Ok((worst <= 1.0, format!("max error {worst:.2e} x tol")))
            })();
            table.push(Suite::SchemeAgreement, format!("{name} alpha={alpha}"), outcome);
        }
    }
}
