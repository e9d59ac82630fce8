//! Classical Lévy processes X_t = σ^{N_t} on a permutation with independent
//! Poisson clocks per cycle: exact marginals and seeded Monte Carlo.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::perm::Permutation;

/// Above this mean the Poisson sampler switches from inversion to `rand_distr`.
pub const INVERSION_LIMIT: f64 = 30.0;
/// Samples per parallel block.
pub const BLOCK_SIZE: usize = 8192;

/// σ together with one rate per cycle of length ≥ 2, cycles ordered by
/// their smallest point.
#[derive(Debug, Clone, PartialEq)]
pub struct PermProcessSpec {
    sigma: Permutation,
    cycles: Vec<Vec<usize>>,
    rates: Vec<f64>,
}

impl PermProcessSpec {
    pub fn new(sigma: Permutation, rates: Vec<f64>) -> Result<Self> {
        let cycles = sigma.nontrivial_cycles();
        if rates.len() != cycles.len() {
            return Err(Error::Precondition(format!(
                "{} rates given for {} non-trivial cycles",
                rates.len(),
                cycles.len()
            )));
        }
        if let Some(bad) = rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::Precondition(format!("rate {bad} must be finite and positive")));
        }
        Ok(Self { sigma, cycles, rates })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// Non-trivial cycles (0-based points) with their rates.
    pub fn cycles(&self) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.cycles.iter().zip(self.rates.iter().copied())
    }

    /// The permutation reached after `counts[c]` steps along each cycle c.
    pub fn state(&self, counts: &[u64]) -> Permutation {
        let mut images: Vec<usize> = (0..self.n()).collect();
        for (cycle, &k) in self.cycles.iter().zip(counts) {
            let len = cycle.len();
            let shift = (k % len as u64) as usize;
            for (pos, &point) in cycle.iter().enumerate() {
                images[point] = cycle[(pos + shift) % len];
            }
        }
        Permutation::from_images(images).expect("cycle shifts are bijective")
    }
}

/// P(N ≡ r mod ℓ) for N ~ Poisson(μ), by the roots-of-unity filter.
pub fn poisson_mod(mu: f64, r: usize, len: usize) -> f64 {
    let total: C64 = (0..len)
        .map(|m| {
            let omega = C64::from_polar(1.0, 2.0 * PI * m as f64 / len as f64);
            let phase = C64::from_polar(1.0, -2.0 * PI * (m * r % len) as f64 / len as f64);
            phase * (C64::from(mu) * (omega - 1.0)).exp()
        })
        .sum();
    // cancellation can leave rounding-level negatives
    (total.re / len as f64).clamp(0.0, 1.0)
}

/// Entry (i, j) is P(X_t(i) = j).
pub fn exact_marginals(spec: &PermProcessSpec, t: f64) -> Result<DMatrix<f64>> {
    if t < 0.0 {
        return Err(Error::Precondition("time must be non-negative".into()));
    }
    let n = spec.n();
    let mut m = DMatrix::identity(n, n);
    for (cycle, rate) in spec.cycles() {
        let len = cycle.len();
        let probs: Vec<f64> = (0..len).map(|r| poisson_mod(rate * t, r, len)).collect();
        for (a, &i) in cycle.iter().enumerate() {
            m[(i, i)] = 0.0;
            for (b, &j) in cycle.iter().enumerate() {
                m[(i, j)] = probs[(b + len - a) % len];
            }
        }
    }
    Ok(m)
}

/// Exact Poisson draw: inversion for small means, `rand_distr` otherwise.
pub fn sample_poisson<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> u64 {
    if mu <= 0.0 {
        return 0;
    }
    if mu > INVERSION_LIMIT {
        let dist = Poisson::new(mu).expect("positive finite mean");
        return dist.sample(rng) as u64;
    }
    let u: f64 = rng.random();
    let mut p = (-mu).exp();
    let mut cdf = p;
    let mut k = 0u64;
    while u > cdf && p > 0.0 {
        k += 1;
        p *= mu / k as f64;
        cdf += p;
    }
    k
}

/// Sub-stream for one (block, cycle) pair: stream id = block · 2²⁰ + cycle.
pub fn substream(seed: u64, block: u64, cycle: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((block << 20) + cycle);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalEstimate {
    pub t: f64,
    pub probs: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub samples: u64,
    pub seed: u64,
}

impl MarginalEstimate {
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i][j]
    }
}

/// Tally X_t(i) = j over `samples` draws. Blocks of samples run in parallel
/// on their own sub-streams, so the result depends only on the seed.
pub fn simulate_marginals(spec: &PermProcessSpec, t: f64, samples: u64, seed: u64) -> Result<MarginalEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if t < 0.0 {
        return Err(Error::Precondition("time must be non-negative".into()));
    }
    let n = spec.n();
    let blocks = samples.div_ceil(BLOCK_SIZE as u64);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let size = (samples - b * BLOCK_SIZE as u64).min(BLOCK_SIZE as u64);
            let mut counts = vec![0u64; n * n];
            for i in 0..n {
                counts[i * n + i] = size;
            }
            for (c, (cycle, rate)) in spec.cycles().enumerate() {
                let mut rng = substream(seed, b, c as u64);
                let len = cycle.len();
                let mut residues = vec![0u64; len];
                for _ in 0..size {
                    residues[(sample_poisson(rate * t, &mut rng) % len as u64) as usize] += 1;
                }
                for (a, &i) in cycle.iter().enumerate() {
                    counts[i * n + i] = 0;
                    for (r, &hits) in residues.iter().enumerate() {
                        counts[i * n + cycle[(a + r) % len]] += hits;
                    }
                }
            }
            counts
        })
        .reduce(|| vec![0u64; n * n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let total = samples as f64;
    let probs: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| counts[i * n + j] as f64 / total).collect()).collect();
    let stderr = probs
        .iter()
        .map(|row| row.iter().map(|p| (p * (1.0 - p) / total).sqrt()).collect())
        .collect();
    Ok(MarginalEstimate { t, probs, stderr, samples, seed })
}

/// A sampled path on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    /// X_t at each grid time, as 0-based images.
    pub states: Vec<Vec<usize>>,
    /// Jumps of each cycle's clock up to each grid time.
    pub jumps: Vec<Vec<u64>>,
}

/// One path with exponential inter-arrival times per cycle clock.
pub fn path_sample(spec: &PermProcessSpec, times: &[f64], seed: u64) -> Result<PathSample> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("time grid must be non-negative and strictly increasing".into()));
    }
    let horizon = times.last().copied().unwrap_or(0.0);
    let arrivals: Vec<Vec<f64>> = spec
        .cycles()
        .enumerate()
        .map(|(c, (_, rate))| {
            let mut rng = substream(seed, 0, c as u64);
            let exp = Exp::new(rate).expect("positive rate");
            let mut clock = 0.0;
            let mut out = Vec::new();
            loop {
                clock += exp.sample(&mut rng);
                if clock > horizon {
                    break out;
                }
                out.push(clock);
            }
        })
        .collect();
    let mut states = Vec::with_capacity(times.len());
    let mut jumps = Vec::with_capacity(times.len());
    for &t in times {
        let counts: Vec<u64> = arrivals.iter().map(|a| a.partition_point(|&s| s <= t) as u64).collect();
        states.push(spec.state(&counts).images().to_vec());
        jumps.push(counts);
    }
    Ok(PathSample { times: times.to_vec(), states, jumps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(cycles: &str, n: usize, rates: &[f64]) -> PermProcessSpec {
        PermProcessSpec::new(Permutation::parse_cycles(cycles, n).unwrap(), rates.to_vec()).unwrap()
    }

    #[test]
    fn rates_must_match_cycles() {
        let sigma = Permutation::parse_cycles("(1 2)(3 4 5)", 5).unwrap();
        assert!(PermProcessSpec::new(sigma.clone(), vec![1.0]).is_err());
        assert!(PermProcessSpec::new(sigma.clone(), vec![1.0, 0.0]).is_err());
        assert!(PermProcessSpec::new(sigma, vec![1.0, 0.5]).is_ok());
    }

    #[test]
    fn exact_examples() {
        let s = spec("(1 2 3 4)(5 6)", 7, &[1.0, 0.5]);
        assert!((exact_marginals(&s, 0.0).unwrap() - DMatrix::identity(7, 7)).norm() < 1e-15);
        let pair = spec("(1 2)", 2, &[1.0]);
        let m = exact_marginals(&pair, 1.0).unwrap();
        assert!((m[(0, 0)] - (-1.0f64).exp() * 1.0f64.cosh()).abs() < 1e-12);
        assert!((m[(0, 0)] - 0.56766764).abs() < 1e-8);
        let m = exact_marginals(&s, 0.7).unwrap();
        for i in 0..7 {
            assert!((m.row(i).sum() - 1.0).abs() < 1e-12);
        }
        assert_eq!(m[(0, 4)], 0.0);
        assert_eq!(m[(6, 6)], 1.0);
    }

    #[test]
    fn exact_is_a_semigroup() {
        let s = spec("(1 3 5)(2 4)", 6, &[0.8, 1.7]);
        let a = exact_marginals(&s, 0.4).unwrap();
        let b = exact_marginals(&s, 1.1).unwrap();
        let ab = exact_marginals(&s, 1.5).unwrap();
        assert!((a * b - ab).norm() < 1e-12);
    }

    #[test]
    fn tiny_rates_stay_at_identity() {
        let s = spec("(1 2 3)", 3, &[1e-9]);
        let est = simulate_marginals(&s, 1.0, 10_000, 1).unwrap();
        for i in 0..3 {
            assert!(est.prob(i, i) > 0.999);
        }
    }

    #[test]
    fn off_block_entries_are_exactly_zero() {
        let s = spec("(1 2)(3 4 5)", 5, &[1.0, 0.3]);
        let est = simulate_marginals(&s, 2.0, 20_000, 3).unwrap();
        for i in 0..2 {
            for j in 2..5 {
                assert_eq!(est.prob(i, j), 0.0);
                assert_eq!(est.prob(j, i), 0.0);
            }
        }
    }

    #[test]
    fn simulation_is_deterministic_per_seed() {
        let s = spec("(1 2 3 4)", 4, &[1.0]);
        let a = simulate_marginals(&s, 1.0, 30_000, 7).unwrap();
        let b = simulate_marginals(&s, 1.0, 30_000, 7).unwrap();
        let c = simulate_marginals(&s, 1.0, 30_000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| simulate_marginals(&s, 1.0, 30_000, 7).unwrap());
        assert_eq!(a, serial);
    }

    #[test]
    fn poisson_sampler_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for mu in [0.3, 4.0, 45.0] {
            let draws: Vec<f64> = (0..40_000).map(|_| sample_poisson(mu, &mut rng) as f64).collect();
            let mean = draws.iter().sum::<f64>() / draws.len() as f64;
            let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64;
            let se = (mu / draws.len() as f64).sqrt();
            assert!((mean - mu).abs() < 5.0 * se, "mean {mean} for {mu}");
            assert!((var / mu - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn identity_path_is_constant() {
        let s = PermProcessSpec::new(Permutation::identity(3), vec![]).unwrap();
        let path = path_sample(&s, &[0.0, 1.0, 5.0], 0).unwrap();
        assert!(path.states.iter().all(|st| st == &vec![0, 1, 2]));
        assert!(path_sample(&s, &[1.0, 0.5], 0).is_err());
    }

    #[test]
    fn path_jump_counts_follow_poisson_mean() {
        let s = spec("(1 2 3)", 3, &[1.3]);
        let paths = 10_000;
        let total: u64 = (0..paths).map(|k| path_sample(&s, &[2.0], k).unwrap().jumps[0][0]).sum();
        let mean = total as f64 / paths as f64;
        let expected = 1.3 * 2.0;
        assert!((mean - expected).abs() < 3.0 * (expected / paths as f64).sqrt());
    }

    #[test]
    fn path_states_match_jump_counts() {
        let s = spec("(1 2 3)(4 5)", 5, &[1.0, 2.0]);
        let path = path_sample(&s, &[0.5, 1.0, 3.0], 11).unwrap();
        for (state, counts) in path.states.iter().zip(&path.jumps) {
            assert_eq!(state, s.state(counts).images());
        }
        for w in path.jumps.windows(2) {
            assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a <= b));
        }
    }

    #[test]
    fn increments_are_stationary() {
        // X_s⁻¹ X_t against X_{t−s}, compared on the residue of the clock mod 4
        let s = spec("(1 2 3 4)", 4, &[1.0]);
        let paths = 8_000;
        let mut inc = [0f64; 4];
        let mut fresh = [0f64; 4];
        for k in 0..paths {
            let p = path_sample(&s, &[0.7, 1.9], k).unwrap();
            inc[((p.jumps[1][0] - p.jumps[0][0]) % 4) as usize] += 1.0;
            let q = path_sample(&s, &[1.2], paths + k).unwrap();
            fresh[(q.jumps[0][0] % 4) as usize] += 1.0;
        }
        // two-sample chi-square with 3 degrees of freedom
        let chi: f64 = (0..4)
            .filter(|&r| inc[r] + fresh[r] > 0.0)
            .map(|r| (inc[r] - fresh[r]).powi(2) / (inc[r] + fresh[r]))
            .sum();
        // 99.9% quantile of chi-square(3)
        assert!(chi < 16.27, "chi-square {chi}");
    }
}
