//! Stego-security experiments.
//!
//! A scheme is stego-secure when watermarked contents are distributed like
//! host contents for every key. With a fixed key and message, the CIIS map
//! `X -> Y` is a composition of single-bit flips and hence a permutation of
//! `B^N`; [`exhaustive_pushforward`] checks that exactly for small `N`.
//! [`run_uniformity`] samples hosts uniformly and runs a Pearson chi-square
//! test on the binned outputs.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ci::BitState;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::stego::{embed_lscs, EmbedKey, Message, Mode};
use crate::strategies::{CiisTerms, Fraction64, PlcmParams};

/// Verdict threshold on the p-value.
pub const SIGNIFICANCE: f64 = 0.001;
/// Largest state size for sampled experiments (`2^16` bins).
pub const MAX_SAMPLED_CELLS: usize = 16;
/// Largest state size for exhaustive enumeration.
pub const MAX_EXHAUSTIVE_CELLS: usize = 10;
/// Bin counts are left out of JSON reports above this size.
pub const MAX_REPORTED_BINS_CELLS: usize = 12;

const CHUNK: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyPolicy {
    Fixed(Fraction64),
    RandomPerSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityExperiment {
    pub n_cells: usize,
    pub samples: usize,
    pub mode: Mode,
    pub key_policy: KeyPolicy,
    pub iterations: usize,
    pub plcm: PlcmParams,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent-with-uniform")]
    ConsistentWithUniform,
    #[serde(rename = "non-uniform")]
    NonUniform,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub experiment: UniformityExperiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<Vec<u64>>,
    pub chi_square: f64,
    pub degrees: u64,
    pub p_value: f64,
    pub support_size: usize,
    pub verdict: Verdict,
    pub seed: u64,
    #[serde(skip)]
    pub counts: Vec<u64>,
}

/// Upper-tail probability of the chi-square distribution, `Q(df/2, x/2)`.
pub fn chi_square_pvalue(statistic: f64, degrees: u64) -> f64 {
    assert!(degrees >= 1, "chi-square needs at least one degree of freedom");
    if statistic <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(degrees as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

/// Pearson statistic of `counts` against a uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum()
}

fn ciis_output(x: u64, m: Fraction64, k: Fraction64, plcm: PlcmParams, n_cells: usize, iterations: usize) -> u64 {
    CiisTerms::new(m, k, plcm, n_cells)
        .take(iterations)
        .fold(x, |y, term| y ^ (1 << (term - 1)))
}

fn cids_output(x: u64, n_cells: usize, iterations: usize) -> u64 {
    (1..=iterations).fold(x, |y, k| {
        let cell = if k <= n_cells && (x >> (k - 1)) & 1 == 1 { k } else { 1 };
        y ^ (1 << (cell - 1))
    })
}

fn check_regime(exp: &UniformityExperiment) -> Result<()> {
    if exp.n_cells == 0 || exp.n_cells > MAX_SAMPLED_CELLS {
        return Err(Error::Config(format!("n_cells must lie in 1..={MAX_SAMPLED_CELLS}, got {}", exp.n_cells)));
    }
    let min_samples = 10usize << exp.n_cells;
    if exp.samples < min_samples {
        return Err(Error::Config(format!(
            "{} samples is below the chi-square regime of {min_samples} for {} bins",
            exp.samples,
            1usize << exp.n_cells
        )));
    }
    Ok(())
}

/// Samples hosts, messages and keys, embeds, and tests the outputs for uniformity.
pub fn run_uniformity(exp: &UniformityExperiment) -> Result<AnalysisReport> {
    check_regime(exp)?;
    let bins = 1usize << exp.n_cells;
    let mask = (bins - 1) as u64;
    let chunks = exp.samples.div_ceil(CHUNK);

    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(exp.seed, c as u64);
            let mut counts = vec![0u64; bins];
            let len = CHUNK.min(exp.samples - c * CHUNK);
            for _ in 0..len {
                let x = rng.gen::<u64>() & mask;
                let m = Fraction64(rng.gen());
                let k = match exp.key_policy {
                    KeyPolicy::Fixed(k) => k,
                    KeyPolicy::RandomPerSample => Fraction64(rng.gen()),
                };
                let y = match exp.mode {
                    Mode::Ciis => ciis_output(x, m, k, exp.plcm, exp.n_cells, exp.iterations),
                    Mode::Cids => cids_output(x, exp.n_cells, exp.iterations),
                };
                counts[y as usize] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let chi_square = chi_square_uniform(&counts);
    let degrees = bins as u64 - 1;
    let p_value = chi_square_pvalue(chi_square, degrees);
    Ok(AnalysisReport {
        experiment: *exp,
        bins: (exp.n_cells <= MAX_REPORTED_BINS_CELLS).then(|| counts.clone()),
        chi_square,
        degrees,
        p_value,
        support_size: counts.iter().filter(|&&c| c > 0).count(),
        verdict: if p_value < SIGNIFICANCE { Verdict::NonUniform } else { Verdict::ConsistentWithUniform },
        seed: exp.seed,
        counts,
    })
}

/// Exact image multiset of `X -> Y` over all of `B^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    pub n_cells: usize,
    /// `counts[i]` is the number of hosts mapped to the state of index `i`
    /// (see [`BitState::from_index`]).
    pub counts: Vec<u64>,
}

impl Pushforward {
    pub fn support(&self) -> Vec<BitState> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| BitState::from_index(i as u64, self.n_cells).expect("n_cells checked"))
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Every output hit exactly once.
    pub fn is_bijection(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }
}

/// Runs the embedding on every host in `B^N` with `N = n_cells`. The key's
/// own `lsc_count` is ignored.
pub fn exhaustive_pushforward(n_cells: usize, key: &EmbedKey, msg: Message, mode: Mode) -> Result<Pushforward> {
    if n_cells == 0 || n_cells > MAX_EXHAUSTIVE_CELLS {
        return Err(Error::Config(format!("exhaustive enumeration needs 1..={MAX_EXHAUSTIVE_CELLS} cells, got {n_cells}")));
    }
    let key = EmbedKey { lsc_count: n_cells, ..*key };
    let mut counts = vec![0u64; 1 << n_cells];
    for idx in 0..1u64 << n_cells {
        let x = BitState::from_index(idx, n_cells)?;
        let y = embed_lscs(&x, msg, &key, mode)?;
        counts[y.to_index() as usize] += 1;
    }
    Ok(Pushforward { n_cells, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn experiment(mode: Mode, n_cells: usize, samples: usize, iterations: usize, seed: u64) -> UniformityExperiment {
        UniformityExperiment {
            n_cells,
            samples,
            mode,
            key_policy: KeyPolicy::RandomPerSample,
            iterations,
            plcm: PlcmParams::default(),
            seed,
        }
    }

    #[test]
    fn pvalue_edges() {
        assert_eq!(chi_square_pvalue(0.0, 1), 1.0);
        assert_eq!(chi_square_pvalue(0.0, 255), 1.0);
        assert!(chi_square_pvalue(1e4, 3) < 1e-300);
    }

    #[test]
    fn sampler_fast_paths_match_library_embedding() {
        let mut rng = stream_rng(99, 0);
        let plcm = PlcmParams::default();
        for _ in 0..200 {
            let n = rng.gen_range(1..=16);
            let iterations = rng.gen_range(0..40);
            let x = rng.gen::<u64>() & ((1 << n) - 1);
            let m = Fraction64(rng.gen());
            let k = Fraction64(rng.gen());
            let key = EmbedKey::new(k, iterations, plcm, n).unwrap();
            let state = BitState::from_index(x, n).unwrap();
            let ciis = embed_lscs(&state, Message(m), &key, Mode::Ciis).unwrap();
            assert_eq!(ciis.to_index(), ciis_output(x, m, k, plcm, n, iterations));
            let cids = embed_lscs(&state, Message(m), &key, Mode::Cids).unwrap();
            assert_eq!(cids.to_index(), cids_output(x, n, iterations));
        }
    }

    #[test]
    fn regime_is_enforced() {
        assert!(matches!(run_uniformity(&experiment(Mode::Ciis, 4, 159, 8, 0)), Err(Error::Config(_))));
        assert!(matches!(run_uniformity(&experiment(Mode::Ciis, 17, 1 << 30, 8, 0)), Err(Error::Config(_))));
        assert!(matches!(run_uniformity(&experiment(Mode::Ciis, 0, 100, 8, 0)), Err(Error::Config(_))));
    }

    #[test]
    fn counts_sum_to_samples() {
        let r = run_uniformity(&experiment(Mode::Ciis, 4, 20_001, 8, 3)).unwrap();
        assert_eq!(r.counts.iter().sum::<u64>(), 20_001);
        assert_eq!(r.degrees, 15);
        assert!((0.0..=1.0).contains(&r.p_value));
    }

    #[test]
    fn cids_is_non_uniform() {
        let r = run_uniformity(&experiment(Mode::Cids, 4, 1_000, 8, 1)).unwrap();
        assert!(r.support_size <= 2);
        assert_eq!(r.verdict, Verdict::NonUniform);
    }

    #[test]
    fn zero_iterations_is_identity() {
        let key = EmbedKey::new(Fraction64(5), 0, PlcmParams::default(), 4).unwrap();
        for mode in [Mode::Ciis, Mode::Cids] {
            let pf = exhaustive_pushforward(4, &key, Message(Fraction64(7)), mode).unwrap();
            assert!(pf.is_bijection());
        }
        let r = run_uniformity(&experiment(Mode::Ciis, 6, 6_400, 0, 4)).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithUniform);
    }

    #[test]
    fn exhaustive_limits() {
        let key = EmbedKey::new(Fraction64(5), 3, PlcmParams::default(), 4).unwrap();
        assert!(matches!(exhaustive_pushforward(11, &key, Message(Fraction64(0)), Mode::Ciis), Err(Error::Config(_))));
    }

    #[test]
    fn report_json_shape() {
        let r = run_uniformity(&experiment(Mode::Ciis, 4, 160, 2, 0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for field in ["experiment", "bins", "chi_square", "degrees", "p_value", "support_size", "verdict", "seed"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert!(v.get("counts").is_none());
        let r = run_uniformity(&experiment(Mode::Ciis, 13, 10 << 13, 1, 0)).unwrap();
        assert!(serde_json::to_value(&r).unwrap().get("bins").is_none());
    }
}
