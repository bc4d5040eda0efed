use super::MobiusMatrix;
use crate::field::FpElem;

/// The pair of binary recurrences `(u_n, v_n)` with `ξ_n = u_n / v_n`.
///
/// Generated by the matrix rule `(u_{n+1}, v_{n+1}) = A·(u_n, v_n)` from
/// `(u_0, v_0) = (ξ_0, 1)`, which gives `(u_1, v_1) = (aξ_0 + b, cξ_0 + d)`.
/// Since `det A = 1`, both sequences obey `w_{n+2} = e·w_{n+1} - w_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecurrencePair {
    pub e: u64,
    pub u0: u64,
    pub u1: u64,
    pub v0: u64,
    pub v1: u64,
    matrix: MobiusMatrix,
}

impl RecurrencePair {
    pub fn new(matrix: &MobiusMatrix, seed: FpElem) -> Self {
        let (u1, v1) = matrix.matrix().act(seed.value(), 1);
        RecurrencePair {
            e: matrix.trace(),
            u0: seed.value(),
            u1,
            v0: 1,
            v1,
            matrix: *matrix,
        }
    }

    pub fn stream(&self) -> RecurrenceStream {
        RecurrenceStream {
            matrix: self.matrix,
            n: 0,
            u: self.u0,
            v: self.v0,
        }
    }
}

/// One step of the recurrence; `pole` is set when `v_n = 0`, i.e. the
/// projective orbit sits at `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecurrenceStep {
    pub n: u64,
    pub u: u64,
    pub v: u64,
    pub pole: bool,
}

impl RecurrenceStep {
    /// `u_n / v_n`, or `None` at a pole.
    pub fn ratio(&self, matrix: &MobiusMatrix) -> Option<u64> {
        let p = matrix.modulus();
        p.inv(self.v).map(|vi| p.mul(self.u, vi))
    }
}

#[derive(Clone, Debug)]
pub struct RecurrenceStream {
    matrix: MobiusMatrix,
    n: u64,
    u: u64,
    v: u64,
}

impl Iterator for RecurrenceStream {
    type Item = RecurrenceStep;

    fn next(&mut self) -> Option<RecurrenceStep> {
        let step = RecurrenceStep {
            n: self.n,
            u: self.u,
            v: self.v,
            pole: self.v == 0,
        };
        let (u, v) = self.matrix.matrix().act(self.u, self.v);
        self.u = u;
        self.v = v;
        self.n += 1;
        Some(step)
    }
}

/// The `(u_n, v_n)` stream for a trajectory.
pub fn recurrence_stream(matrix: &MobiusMatrix, seed: FpElem) -> RecurrenceStream {
    RecurrencePair::new(matrix, seed).stream()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbit;
    use crate::field::PrimeModulus;

    #[test]
    fn initial_values() {
        let p = PrimeModulus::new(101).unwrap();
        let m = MobiusMatrix::from_u64(2, 3, 5, 8, p).unwrap();
        let seed = FpElem::new(7, p);
        let pair = RecurrencePair::new(&m, seed);
        assert_eq!((pair.u0, pair.u1, pair.v0, pair.v1), (7, 17, 1, 43));
        let first: Vec<_> = pair.stream().take(2).collect();
        assert_eq!((first[0].u, first[0].v), (7, 1));
        assert_eq!(first[1].ratio(&m), Some(m.apply(seed).value()));
    }

    #[test]
    fn scalar_recurrence_has_minus_sign() {
        let p = PrimeModulus::new(10007).unwrap();
        let m = MobiusMatrix::from_u64(3, 11, 7, 26, p).unwrap();
        let e = m.trace();
        let steps: Vec<_> = recurrence_stream(&m, FpElem::new(5, p)).take(1002).collect();
        for w in steps.windows(3) {
            assert_eq!(w[2].u, p.sub(p.mul(e, w[1].u), w[0].u));
            assert_eq!(w[2].v, p.sub(p.mul(e, w[1].v), w[0].v));
        }
        // the plus-sign variant fails somewhere in the same window
        assert!(steps.windows(3).any(|w| w[2].u != p.add(p.mul(e, w[1].u), w[0].u)));
    }

    #[test]
    fn ratio_tracks_extended_map_until_first_pole() {
        let p = PrimeModulus::new(101).unwrap();
        let m = MobiusMatrix::from_u64(2, 3, 5, 8, p).unwrap();
        for seed in 0..101 {
            let seed = FpElem::new(seed, p);
            let xs = orbit(&m, seed);
            for (step, x) in recurrence_stream(&m, seed).skip(1).zip(xs).take(200) {
                match step.ratio(&m) {
                    Some(r) => assert_eq!(r, x.value()),
                    None => break,
                }
            }
        }
    }
}
