use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sampling::rng::RngStream;

/// Draws per reduction block. Blocks are reduced in index order, so the
/// result is bit-identical for any thread count.
pub const BLOCK: usize = 1024;

/// Smallest sample count accepted by [`monte_carlo`].
pub const MIN_SAMPLES: usize = 100;

/// Sample mean with its standard error `sample_std / sqrt(samples)`.
///
/// For complex samples the standard error uses the total variance
/// `E|X - mean|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// `|mean - target| / std_error`; zero-variance estimates give 0 on an
    /// exact match and infinity otherwise.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let d = (self.mean - target).norm();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Streaming mean and second moment (Welford), mergeable (Chan et al.).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    count: usize,
    mean: Complex64,
    m2: f64,
    flagged: usize,
}

impl Accumulator {
    pub fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    pub fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        Self {
            count: n,
            mean: self.mean + delta * (other.count as f64 / n as f64),
            m2: self.m2 + other.m2 + delta.norm_sqr() * (self.count as f64 * other.count as f64 / n as f64),
            flagged: self.flagged + other.flagged,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn flagged(&self) -> usize {
        self.flagged
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.count > 1 { self.m2 / (self.count - 1) as f64 } else { 0.0 };
        McEstimate {
            mean: self.mean,
            std_error: (var.max(0.0) / self.count.max(1) as f64).sqrt(),
            samples: self.count,
        }
    }
}

/// Runs `draw` on streams `0..samples` of `seed`; each call returns a value
/// and a flag, and the number of flagged draws is reported alongside.
pub fn monte_carlo_flagged<F>(samples: usize, seed: u64, exec: Execution, draw: F) -> Result<(McEstimate, usize)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(Complex64, bool)> + Sync + Send,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let blocks = samples.div_ceil(BLOCK);
    let partial = exec.map(blocks, |b| -> Result<Accumulator> {
        let mut acc = Accumulator::default();
        for i in b * BLOCK..((b + 1) * BLOCK).min(samples) {
            let mut rng = RngStream::new(seed, i as u64).rng();
            let (x, flag) = draw(&mut rng)?;
            if !(x.re.is_finite() && x.im.is_finite()) {
                return Err(Error::NonFinite(format!("Monte Carlo draw {i}")));
            }
            acc.push(x);
            acc.flagged += flag as usize;
        }
        Ok(acc)
    });
    let mut total = Accumulator::default();
    for acc in partial {
        total = total.merge(acc?);
    }
    Ok((total.estimate(), total.flagged))
}

/// Plain Monte Carlo mean of `draw` over streams `0..samples` of `seed`.
pub fn monte_carlo<F>(samples: usize, seed: u64, exec: Execution, draw: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Complex64> + Sync + Send,
{
    monte_carlo_flagged(samples, seed, exec, |rng| Ok((draw(rng)?, false))).map(|r| r.0)
}

/// Component-wise Monte Carlo means of a vector-valued `draw` of length
/// `dim`, over streams `0..samples` of `seed`.
pub fn monte_carlo_vec<F>(samples: usize, seed: u64, exec: Execution, dim: usize, draw: F) -> Result<Vec<McEstimate>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<f64>> + Sync + Send,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let blocks = samples.div_ceil(BLOCK);
    let partial = exec.map(blocks, |b| -> Result<Vec<Accumulator>> {
        let mut acc = vec![Accumulator::default(); dim];
        for i in b * BLOCK..((b + 1) * BLOCK).min(samples) {
            let mut rng = RngStream::new(seed, i as u64).rng();
            let x = draw(&mut rng)?;
            if x.len() != dim {
                return Err(Error::Dimension(format!("draw {i} has length {}, expected {dim}", x.len())));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("Monte Carlo draw {i}")));
            }
            acc.iter_mut().zip(x).for_each(|(a, v)| a.push(v.into()));
        }
        Ok(acc)
    });
    let mut total = vec![Accumulator::default(); dim];
    for acc in partial {
        total = total.into_iter().zip(acc?).map(|(a, b)| a.merge(b)).collect();
    }
    Ok(total.iter().map(Accumulator::estimate).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn vector_means_match_scalar_runs() {
        let v = monte_carlo_vec(3000, 4, Execution::Parallel, 2, |rng| {
            let u: f64 = rng.gen();
            Ok(vec![u, u * u])
        })
        .unwrap();
        let s = monte_carlo(3000, 4, Execution::Sequential, |rng| Ok(rng.gen::<f64>().powi(2).into())).unwrap();
        assert_eq!(v[1].mean, s.mean);
        assert!(v[0].z_score(0.5.into()) < 4.0);
        assert!(monte_carlo_vec(3000, 4, Execution::Parallel, 3, |_| Ok(vec![0.0])).is_err());
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        let mut whole = Accumulator::default();
        xs.iter().for_each(|&x| whole.push(x.into()));
        let (mut a, mut b) = (Accumulator::default(), Accumulator::default());
        xs[..313].iter().for_each(|&x| a.push(x.into()));
        xs[313..].iter().for_each(|&x| b.push(x.into()));
        let merged = a.merge(b).estimate();
        let w = whole.estimate();
        assert!((merged.mean - w.mean).norm() < 1e-14);
        assert!((merged.std_error - w.std_error).abs() < 1e-14);
        let mean = xs.iter().sum::<f64>() / 1000.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 999.0;
        assert!((w.std_error - (var / 1000.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let f = |r: &mut ChaCha8Rng| Ok(Complex64::new(r.gen::<f64>(), 0.0));
        let a = monte_carlo(5000, 11, Execution::Parallel, f).unwrap();
        let b = monte_carlo(5000, 11, Execution::Sequential, f).unwrap();
        assert_eq!(a, b);
        let z = a.z_score(Complex64::new(0.5, 0.0));
        assert!(z < 4.0, "uniform mean z={z}");
    }

    #[test]
    fn too_few_samples() {
        let r = monte_carlo(10, 0, Execution::Sequential, |_| Ok(Complex64::new(1.0, 0.0)));
        assert!(r.is_err());
    }
}
