//! The Möbius map `x ↦ (ax + b)/(cx + d)` on `F_p` and its trajectories.

mod matrix;
mod orbit;
mod recurrence;
mod spectral;

pub use matrix::{normalize_to_sl2, power_matrix, Matrix2, MobiusMatrix, ProjectivePoint};
pub use orbit::{
    orbit, period, projective_orbit, theta_sq_order, trajectory, Orbit, ProjectiveOrbit, Trajectory,
    MAX_TABULATED_PERIOD,
};
pub use recurrence::{recurrence_stream, RecurrencePair, RecurrenceStep, RecurrenceStream};
pub use spectral::{eval_spectral, spectral_form, SpectralForm};

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Field(FieldError),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("determinant {det} has no square-root scaling into SL_2")]
    NonSquareDeterminant { det: u64 },
    #[error("determinant is {det}, not 1")]
    NotSl2 { det: u64 },
    #[error("lower-left entry c is zero")]
    ZeroLowerLeft,
    #[error("characteristic polynomial has a repeated root (trace ±2)")]
    RepeatedRoot,
    #[error("seed is a fixed point; the trajectory has no spectral normal form")]
    DegenerateSpectral,
    #[error("closed form has a pole at n = {n}")]
    SpectralPole { n: u64 },
    #[error("A^{k} has zero lower-left entry and acts affinely")]
    LinearPower { k: u64, power: Matrix2 },
    #[error("ord(ϑ^2) = {bound} is too long to tabulate")]
    PeriodTooLong { bound: u64 },
}

impl From<FieldError> for DynamicsError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::RepeatedRoot => DynamicsError::RepeatedRoot,
            other => DynamicsError::Field(other),
        }
    }
}
