//! Compensated summation with a fixed chunking so that results are
//! bit-identical whatever the number of worker threads.
//!
//! Terms are grouped into chunks of [`CHUNK`] consecutive indices. Each chunk
//! is summed in index order with a Neumaier accumulator; chunk partials are
//! then folded in ascending chunk order. The parallel path only changes who
//! computes each chunk.

use num_complex::Complex64;

pub const CHUNK: u64 = 1 << 16;

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Running complex total with per-component Neumaier compensation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SumAccumulator {
    re: f64,
    re_comp: f64,
    im: f64,
    im_comp: f64,
    count: u64,
}

impl SumAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_comp, z.re);
        neumaier(&mut self.im, &mut self.im_comp, z.im);
        self.count += 1;
    }

    /// Folds another accumulator in, carrying its compensation terms.
    pub fn merge(&mut self, other: &SumAccumulator) {
        neumaier(&mut self.re, &mut self.re_comp, other.re);
        neumaier(&mut self.re, &mut self.re_comp, other.re_comp);
        neumaier(&mut self.im, &mut self.im_comp, other.im);
        neumaier(&mut self.im, &mut self.im_comp, other.im_comp);
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_comp, self.im + self.im_comp)
    }
}

impl Extend<Complex64> for SumAccumulator {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

fn chunk_partial<F: Fn(u64) -> Complex64>(start: u64, end: u64, k: u64, term: &F) -> SumAccumulator {
    let lo = start + k * CHUNK;
    let hi = (lo + CHUNK).min(end);
    let mut acc = SumAccumulator::new();
    for i in lo..hi {
        acc.add(term(i));
    }
    acc
}

fn fold(partials: &[SumAccumulator]) -> SumAccumulator {
    let mut total = SumAccumulator::new();
    for p in partials {
        total.merge(p);
    }
    total
}

fn chunk_count(start: u64, end: u64) -> u64 {
    if end <= start {
        0
    } else {
        (end - start).div_ceil(CHUNK)
    }
}

/// `Σ_{i in [start, end)} term(i)` on the calling thread.
pub fn sum_range_sequential<F>(start: u64, end: u64, term: F) -> SumAccumulator
where
    F: Fn(u64) -> Complex64,
{
    let partials: Vec<_> = (0..chunk_count(start, end))
        .map(|k| chunk_partial(start, end, k, &term))
        .collect();
    fold(&partials)
}

/// `Σ_{i in [start, end)} term(i)`, chunks spread over the rayon pool.
#[cfg(feature = "parallel")]
pub fn sum_range_parallel<F>(start: u64, end: u64, term: F) -> SumAccumulator
where
    F: Fn(u64) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    let partials: Vec<_> = (0..chunk_count(start, end))
        .into_par_iter()
        .map(|k| chunk_partial(start, end, k, &term))
        .collect();
    fold(&partials)
}

/// The default reduction: parallel when the `parallel` feature is on.
pub fn sum_range<F>(start: u64, end: u64, term: F) -> SumAccumulator
where
    F: Fn(u64) -> Complex64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        sum_range_parallel(start, end, term)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sum_range_sequential(start, end, term)
    }
}

/// Real-valued convenience wrapper around [`sum_range`].
pub fn sum_range_real<F>(start: u64, end: u64, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    sum_range(start, end, |i| Complex64::new(term(i), 0.0)).value().re
}
