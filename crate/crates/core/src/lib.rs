//! Fractional integrals and derivatives of real periodic signals.
//!
//! Signals are finite Fourier series ([`FourierSignal`]). On top of them the
//! crate provides
//!
//! * [`quadrature`]: product integration for the weakly singular kernel
//!   `(t-s)^(α-1)`, an independent substitution-based oracle, and tail
//!   integrals over past periods;
//! * [`operators`]: Riemann-Liouville integral, Caputo and Riemann-Liouville
//!   derivatives, and the Weyl integral by three independent routes;
//! * [`special`]: Γ, Pochhammer, ₁F₂, Hurwitz ζ and reference closed forms;
//! * [`diagnostics`]: boundedness classification, periodicity defect, the
//!   periodic-plus-decaying decomposition, non-periodicity witnesses and
//!   growth fits, assembled into a serializable [`DiagnosticsReport`].
//!
//! ```
//! use fracperiod::{operators, FourierSignal, FracOrder, QuadratureConfig};
//!
//! let f = FourierSignal::sin(std::f64::consts::TAU);
//! let alpha = FracOrder::integral(0.5).unwrap();
//! let v = operators::rl_integral(&f, alpha, 10.0, &QuadratureConfig::default()).unwrap();
//! assert!((v - 0.385803013795).abs() < 1e-9);
//! ```

// coefficient tables keep every published digit; `!(x > 0.0)` rejects NaN on purpose
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
mod error;
pub mod gauss;
pub mod operators;
pub mod quadrature;
pub mod signal;
pub mod special;

pub use diagnostics::{
    BoundednessVerdict, Decomposition, DefectCurve, DiagnosticsReport, VerdictKind,
};
pub use error::{Error, Result};
pub use operators::OperatorKind;
pub use quadrature::{FracOrder, QuadratureConfig, TruncationDepth};
pub use signal::{FourierSignal, SignalSpec, SupNorm};
