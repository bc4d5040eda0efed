//! Exact arithmetic in `F_p` and in `F_p[Z]/(Z^2 - eZ + 1)`.

mod fp;
mod fp2;
mod group;
mod prime;

pub use fp::FpElem;
pub use fp2::{char_poly_roots, Fp2Elem, QuadExtension};
pub use group::{discrete_index, mult_order, norm_group_generator, primitive_root, GroupElem};
pub use prime::{factorize, is_prime, PrimeModulus};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside [3, 2^63)")]
    ModulusOutOfRange(u64),
    #[error("operands live modulo {left} and {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("operands live in different quadratic extensions")]
    ExtensionMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("Z^2 - eZ + 1 has a repeated root (e = ±2)")]
    RepeatedRoot,
    #[error("Z^2 - eZ + 1 splits over F_p")]
    ReducibleExtension,
    #[error("element is not in the subgroup generated by g")]
    NotInGroup,
}
