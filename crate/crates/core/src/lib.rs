pub mod arith;
pub mod bsz;
pub mod dynamics;
pub mod field;
pub mod reduce;
pub mod sample;
pub mod sums;
