//! Simulation of the quantum switch with indefinite causal order applied
//! to noisy qubit phase estimation.
//!
//! The numeric core is generic over the real scalar type (see [`Scalar`]);
//! the aliases at the crate root fix it to `f64`, which is what the sweep
//! engine and the command-line tool use.
//!
//! Layout:
//! - [`qmat`]: dense complex matrices, partial trace, Jacobi eigensolver, Choi matrices
//! - [`channels`]: Bloch states, `U_ξ`, Pauli and depolarizing noise
//! - [`switch`]: `S00`, `S01`, joint output, reduced control state, `Q_c`
//! - [`metrology`]: closed-form and numeric Fisher information
//! - [`runner`]: sweep configuration, parameter sweeps, CSV and SVG output

#![forbid(unsafe_code)]

pub mod channels;
pub mod error;
pub mod metrology;
pub mod qmat;
pub mod runner;
mod scalar;
pub mod switch;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Complex = num_complex::Complex<f64>;
pub type CMatrix = qmat::Matrix<f64>;
pub type EigDecomp = qmat::EigDecomp<f64>;
pub type BlochVector = channels::BlochVector<f64>;
pub type DensityOperator = channels::DensityOperator<f64>;
pub type UnitaryParams = channels::UnitaryParams<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type ControlSpec = switch::ControlSpec<f64>;
pub type SwitchResult = switch::SwitchResult<f64>;
pub type FisherResult = metrology::FisherResult<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type CMatrix = crate::qmat::Matrix<f32>;
    pub type DensityOperator = crate::channels::DensityOperator<f32>;
    pub type KrausChannel = crate::channels::KrausChannel<f32>;
    pub type ControlSpec = crate::switch::ControlSpec<f32>;
}

pub use channels::PauliAxis;
pub use metrology::FisherMethod;
pub use qmat::Subsystem;
