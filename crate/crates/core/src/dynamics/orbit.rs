use super::{DynamicsError, MobiusMatrix, ProjectivePoint};
use crate::field::{char_poly_roots, mult_order, FpElem};

/// Longest period we are willing to tabulate (one `u64` per step).
pub const MAX_TABULATED_PERIOD: u64 = 1 << 28;

/// Streaming iterator over `ξ_1, ξ_2, ...` under the extended map.
#[derive(Clone, Debug)]
pub struct Orbit {
    matrix: MobiusMatrix,
    current: u64,
}

impl Iterator for Orbit {
    type Item = FpElem;

    fn next(&mut self) -> Option<FpElem> {
        self.current = self.matrix.apply_raw(self.current);
        Some(FpElem::new(self.current, self.matrix.modulus()))
    }
}

/// Infinite stream of the trajectory started at `seed` (the seed itself is
/// not yielded).
pub fn orbit(matrix: &MobiusMatrix, seed: FpElem) -> Orbit {
    Orbit {
        matrix: *matrix,
        current: seed.value(),
    }
}

/// `[ξ_1, ..., ξ_n]`.
pub fn trajectory(matrix: &MobiusMatrix, seed: FpElem, n: usize) -> Vec<FpElem> {
    orbit(matrix, seed).take(n).collect()
}

/// Streaming iterator over the honest projective orbit `A^n(ξ_0)`, starting
/// with `n = 1`.
#[derive(Clone, Debug)]
pub struct ProjectiveOrbit {
    matrix: MobiusMatrix,
    current: ProjectivePoint,
}

impl Iterator for ProjectiveOrbit {
    type Item = ProjectivePoint;

    fn next(&mut self) -> Option<ProjectivePoint> {
        self.current = self.matrix.matrix().apply_projective(self.current);
        Some(self.current)
    }
}

pub fn projective_orbit(matrix: &MobiusMatrix, start: ProjectivePoint) -> ProjectiveOrbit {
    ProjectiveOrbit {
        matrix: *matrix,
        current: start,
    }
}

/// One full period of a trajectory, tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub matrix: MobiusMatrix,
    pub seed: FpElem,
    /// Least `t >= 1` with `ξ_t = ξ_0` under the extended map.
    pub period: u64,
    /// Index `n < t` at which `ξ_n` is the pole `-d/c`, if the orbit visits it.
    pub pole_hit: Option<u64>,
    /// Multiplicative order of `ϑ^2`.
    pub theta_sq_order: u64,
    values: Vec<u64>,
}

impl Trajectory {
    /// `ξ_n` for any `n >= 0`, by periodicity.
    #[inline]
    pub fn value_at(&self, n: u64) -> u64 {
        self.values[(n % self.period) as usize]
    }

    pub fn elem_at(&self, n: u64) -> FpElem {
        FpElem::new(self.value_at(n), self.matrix.modulus())
    }

    /// `ξ_0, ..., ξ_{t-1}`.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Length of the orbit on the projective line: the extended map skips
    /// exactly one point (`∞`) per period when the pole is visited.
    pub fn projective_period(&self) -> u64 {
        self.period + u64::from(self.pole_hit.is_some())
    }
}

/// Multiplicative order of `ϑ^2` for the matrix's characteristic polynomial.
pub fn theta_sq_order(matrix: &MobiusMatrix) -> Result<u64, DynamicsError> {
    let ext = matrix.extension()?;
    let (theta, _) = char_poly_roots(ext);
    let order = mult_order(theta * theta)?;
    Ok(order as u64)
}

/// Detects the period by direct scan, bounded by `ord(ϑ^2)`.
pub fn period(matrix: &MobiusMatrix, seed: FpElem) -> Result<Trajectory, DynamicsError> {
    let bound = theta_sq_order(matrix)?;
    if bound > MAX_TABULATED_PERIOD {
        return Err(DynamicsError::PeriodTooLong { bound });
    }
    let start = seed.value();
    let pole = matrix.pole();
    let mut values = Vec::new();
    let mut pole_hit = None;
    let mut x = start;
    loop {
        if x == pole {
            pole_hit = Some(values.len() as u64);
        }
        values.push(x);
        x = matrix.apply_raw(x);
        if x == start {
            break;
        }
        // t <= ord(ϑ^2) always; the +1 is slack for the skipped ∞
        assert!(
            values.len() as u64 <= bound + 1,
            "orbit of {start} under {matrix} exceeded ord(ϑ^2) = {bound}"
        );
    }
    values.shrink_to_fit();
    Ok(Trajectory {
        matrix: *matrix,
        seed,
        period: values.len() as u64,
        pole_hit,
        theta_sq_order: bound,
        values,
    })
}
