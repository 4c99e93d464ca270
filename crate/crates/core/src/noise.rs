//! IID bit-flip sampling, Monte Carlo failure-rate estimation, and exhaustive
//! low-weight sweeps.
//!
//! Every Monte Carlo trial draws from its own counter-based stream keyed by
//! `(seed, trial index)`, so results are bitwise identical no matter how the
//! trials are scheduled across workers. Exhaustive sweeps walk weight-w
//! supports in lexicographic order and are chunked by combinatorial rank for
//! restart and fan-out.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decoder::{decode_success, DecoderKind};
use crate::lattice::{build_lattice, CodeLattice, PauliXError, QubitId};
use crate::unified::{build_unified, UnifiedLattice};
use crate::{par, Error, Result};

/// IID bit-flip noise with per-qubit probability `p`.
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        Ok(NoiseModel { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }
}

/// One Monte Carlo data point.
#[derive(Clone, Debug, Serialize)]
pub struct MCResult {
    pub d: u32,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub p_fail: f64,
    pub stderr: f64,
    pub seed: u64,
    pub variant: String,
}

impl MCResult {
    pub const CSV_HEADER: &'static str = "d,p,trials,failures,p_fail,stderr,seed,variant";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.d, self.p, self.trials, self.failures, self.p_fail, self.stderr, self.seed,
            self.variant
        )
    }
}

/// Outcome of an exhaustive low-weight sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustResult {
    pub d: u32,
    pub w_max: u32,
    pub configs_tested: u64,
    pub failures: Vec<Vec<QubitId>>,
}

/// Flips each of `n` qubits independently with probability `p`.
pub fn sample_error(n: usize, model: NoiseModel, rng: &mut impl RngCore) -> PauliXError {
    let mut support = Vec::new();
    for q in 0..n {
        if rng.gen::<f64>() < model.p() {
            support.push(q as QubitId);
        }
    }
    PauliXError::new(support)
}

/// Log-probability of a specific error under the iid model:
/// `n ln(1-p) + |e| ln(p / (1-p))`.
pub fn error_log_likelihood(e: &PauliXError, p: f64, n: usize) -> Result<f64> {
    log_likelihood_of_weight(e.weight(), p, n)
}

pub fn log_likelihood_of_weight(w: usize, p: f64, n: usize) -> Result<f64> {
    if p <= 0.0 || p >= 1.0 || p.is_nan() {
        return Err(Error::DegenerateProbability(p));
    }
    Ok(n as f64 * (1.0 - p).ln() + w as f64 * (p / (1.0 - p)).ln())
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Monte Carlo estimate of the logical failure rate.
pub fn run_mc(d: u32, p: f64, trials: u64, seed: u64, kind: &DecoderKind) -> Result<MCResult> {
    let lat = build_lattice(d)?;
    let uni = build_unified(&lat);
    run_mc_with(&lat, &uni, p, trials, seed, kind, false)
}

/// Same as [`run_mc`] over prebuilt lattices; `force_sequential` bypasses the
/// parallel path so both can be benchmarked against each other.
pub fn run_mc_with(
    lat: &CodeLattice,
    uni: &UnifiedLattice,
    p: f64,
    trials: u64,
    seed: u64,
    kind: &DecoderKind,
    force_sequential: bool,
) -> Result<MCResult> {
    let model = NoiseModel::new(p)?;
    let n = lat.num_qubits();
    let run_block = |range: std::ops::Range<u64>| -> u64 {
        let mut failures = 0;
        for trial in range {
            let mut rng = trial_rng(seed, trial);
            let e = sample_error(n, model, &mut rng);
            if !decode_success(lat, uni, &e, kind) {
                failures += 1;
            }
        }
        failures
    };
    let failures: u64 = if force_sequential {
        run_block(0..trials)
    } else {
        const BLOCK: u64 = 512;
        let blocks: Vec<std::ops::Range<u64>> = (0..trials.div_ceil(BLOCK))
            .map(|b| (b * BLOCK)..((b + 1) * BLOCK).min(trials))
            .collect();
        par::map_collect(blocks, run_block).into_iter().sum()
    };
    let p_fail = failures as f64 / trials as f64;
    Ok(MCResult {
        d: lat.distance(),
        p,
        trials,
        failures,
        p_fail,
        stderr: (p_fail * (1.0 - p_fail) / trials as f64).sqrt(),
        seed,
        variant: kind.label().into(),
    })
}

/// Combinatorial helpers for the exhaustive sweep: lexicographic ranking and
/// unranking of fixed-weight supports.
pub mod comb {
    /// Binomial coefficient in u64; the sweep sizes here stay far below
    /// overflow (C(127, 6) ~ 5e9).
    pub fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 1..=k {
            acc = acc * (n - k + i) as u128 / i as u128;
        }
        acc.try_into().expect("binomial overflow")
    }

    /// Number of configurations of weight 1..=w_max over n qubits.
    pub fn total_configs(n: u64, w_max: u64) -> u64 {
        (1..=w_max).map(|w| binomial(n, w)).sum()
    }

    /// Lexicographic rank of an increasing index combination.
    pub fn rank(n: u64, combo: &[u32]) -> u64 {
        let k = combo.len() as u64;
        let mut r = 0;
        let mut prev = 0i64;
        for (i, &c) in combo.iter().enumerate() {
            for j in prev..c as i64 {
                r += binomial(n - j as u64 - 1, k - i as u64 - 1);
            }
            prev = c as i64 + 1;
        }
        r
    }

    /// Inverse of [`rank`].
    pub fn unrank(n: u64, k: u64, mut rank: u64) -> Vec<u32> {
        let mut combo = Vec::with_capacity(k as usize);
        let mut x = 0u64;
        for i in 0..k {
            let mut c = x;
            loop {
                let count = binomial(n - c - 1, k - i - 1);
                if count <= rank {
                    rank -= count;
                    c += 1;
                } else {
                    combo.push(c as u32);
                    x = c + 1;
                    break;
                }
            }
        }
        combo
    }

    /// Advances to the next combination in lexicographic order; returns false
    /// at the last one.
    pub fn next_combination(n: u64, combo: &mut [u32]) -> bool {
        let k = combo.len();
        for i in (0..k).rev() {
            if (combo[i] as u64) < n - (k - i) as u64 {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

/// Decodes every error of weight 1..=w_max, in lexicographic order.
///
/// `chunk = Some((index, of))` restricts the sweep to the `index`-th of `of`
/// contiguous rank intervals, enabling restart and distribution across
/// processes; the full sweep is `chunk = None`.
pub fn run_exhaustive(
    d: u32,
    w_max: u32,
    kind: &DecoderKind,
    chunk: Option<(u64, u64)>,
) -> Result<ExhaustResult> {
    if w_max > (d - 1) / 2 {
        return Err(Error::SweepTooDeep { d, w_max });
    }
    let lat = build_lattice(d)?;
    let uni = build_unified(&lat);
    let n = lat.num_qubits() as u64;
    let total = comb::total_configs(n, w_max as u64);
    let (lo, hi) = match chunk {
        None => (0, total),
        Some((index, of)) => {
            if of == 0 || index >= of {
                return Err(Error::BadChunk { index, of: of.max(1) });
            }
            (index * total / of, (index + 1) * total / of)
        }
    };

    // fan out over sub-blocks; each block unranks its start then steps
    let blocks_wanted = ((hi - lo) / 4096).clamp(1, 1024);
    let bounds: Vec<(u64, u64)> = (0..blocks_wanted)
        .map(|b| {
            let span = hi - lo;
            (lo + b * span / blocks_wanted, lo + (b + 1) * span / blocks_wanted)
        })
        .filter(|(a, b)| a < b)
        .collect();

    let weight_offsets: Vec<(u64, u64)> = {
        // (cumulative start rank, weight) per weight class
        let mut acc = 0;
        (1..=w_max as u64)
            .map(|w| {
                let start = acc;
                acc += comb::binomial(n, w);
                (start, w)
            })
            .collect()
    };
    let locate = |global: u64| -> (u64, u64) {
        // weight class and local rank for a global rank
        let mut found = (1, global);
        for &(start, w) in &weight_offsets {
            if global >= start {
                found = (w, global - start);
            }
        }
        found
    };

    let block_results = par::map_collect(bounds, |(a, b)| {
        let mut failures: Vec<Vec<QubitId>> = Vec::new();
        let mut tested = 0u64;
        let mut global = a;
        let (mut w, local) = locate(global);
        let mut combo = comb::unrank(n, w, local);
        while global < b {
            let e = PauliXError::new(combo.iter().copied());
            if !decode_success(&lat, &uni, &e, kind) {
                failures.push(combo.clone());
            }
            tested += 1;
            global += 1;
            if global >= b {
                break;
            }
            if !comb::next_combination(n, &mut combo) {
                w += 1;
                combo = (0..w as u32).collect();
            }
        }
        (tested, failures)
    });

    let mut configs_tested = 0;
    let mut failures = Vec::new();
    for (tested, mut block_failures) in block_results {
        configs_tested += tested;
        failures.append(&mut block_failures);
    }
    Ok(ExhaustResult { d, w_max, configs_tested, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_never_flips() {
        let model = NoiseModel::new(0.0).unwrap();
        let mut rng = trial_rng(7, 0);
        for _ in 0..100 {
            assert_eq!(sample_error(19, model, &mut rng).weight(), 0);
        }
    }

    #[test]
    fn rejects_out_of_range_rates() {
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(0.6).is_err());
        assert!(NoiseModel::new(f64::NAN).is_err());
    }

    #[test]
    fn half_rate_mean_weight_is_binomial() {
        let model = NoiseModel::new(0.5).unwrap();
        let samples = 100_000u64;
        let n = 19;
        let mut total = 0u64;
        for t in 0..samples {
            let mut rng = trial_rng(11, t);
            total += sample_error(n, model, &mut rng).weight() as u64;
        }
        let mean = total as f64 / samples as f64;
        let sigma = (n as f64 * 0.25 / samples as f64).sqrt();
        assert!((mean - 9.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn fixed_seed_reproduces_samples() {
        let model = NoiseModel::new(0.3).unwrap();
        for t in 0..50 {
            let a = sample_error(37, model, &mut trial_rng(42, t));
            let b = sample_error(37, model, &mut trial_rng(42, t));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn log_likelihood_behaviour() {
        let n = 19;
        let e0 = PauliXError::empty();
        let ll0 = error_log_likelihood(&e0, 0.1, n).unwrap();
        assert!((ll0 - (n as f64) * (0.9f64).ln()).abs() < 1e-12);
        // equal weights give equal values
        let e1 = PauliXError::new([0, 3]);
        let e2 = PauliXError::new([5, 17]);
        assert_eq!(
            error_log_likelihood(&e1, 0.1, n).unwrap(),
            error_log_likelihood(&e2, 0.1, n).unwrap()
        );
        // strictly decreasing in weight for p < 1/2
        let mut prev = ll0;
        for w in 1..5 {
            let ll = log_likelihood_of_weight(w, 0.1, n).unwrap();
            assert!(ll < prev);
            prev = ll;
        }
        assert!(error_log_likelihood(&e0, 0.0, n).is_err());
        assert!(error_log_likelihood(&e0, 1.0, n).is_err());
    }

    #[test]
    fn combinatorics_roundtrip() {
        let n = 20;
        for k in 1..=4u64 {
            let total = comb::binomial(n, k);
            for r in (0..total).step_by(7) {
                let combo = comb::unrank(n, k, r);
                assert_eq!(combo.len(), k as usize);
                assert!(combo.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(comb::rank(n, &combo), r);
            }
        }
        assert_eq!(comb::binomial(61, 4), 521_855);
        assert_eq!(comb::total_configs(61, 4), 559_736);
        assert_eq!(comb::total_configs(19, 2), 190);
    }

    #[test]
    fn successor_agrees_with_unrank() {
        let n = 12;
        let k = 3;
        let mut combo = comb::unrank(n, k, 0);
        for r in 1..comb::binomial(n, k) {
            assert!(comb::next_combination(n, &mut combo));
            assert_eq!(combo, comb::unrank(n, k, r), "rank {r}");
        }
        assert!(!comb::next_combination(n, &mut combo));
    }

    #[test]
    fn mc_at_zero_rate_never_fails() {
        let r = run_mc(3, 0.0, 500, 1, &DecoderKind::Moebius).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.p_fail, 0.0);
    }

    #[test]
    fn tiny_sweep_has_no_failures() {
        for kind in [DecoderKind::Moebius, DecoderKind::Comparative(Default::default())] {
            let r = run_exhaustive(3, 1, &kind, None).unwrap();
            assert_eq!(r.configs_tested, 7);
            assert!(r.failures.is_empty());
        }
    }

    #[test]
    fn sweep_rejects_overdeep_weight() {
        assert!(matches!(
            run_exhaustive(5, 3, &DecoderKind::Moebius, None),
            Err(Error::SweepTooDeep { d: 5, w_max: 3 })
        ));
    }

    #[test]
    fn chunked_sweep_partitions_the_space() {
        let kind = DecoderKind::Moebius;
        let full = run_exhaustive(5, 2, &kind, None).unwrap();
        assert_eq!(full.configs_tested, 190);
        let mut sum = 0;
        for i in 0..3 {
            let part = run_exhaustive(5, 2, &kind, Some((i, 3))).unwrap();
            sum += part.configs_tested;
        }
        assert_eq!(sum, 190);
        assert!(matches!(
            run_exhaustive(5, 2, &kind, Some((3, 3))),
            Err(Error::BadChunk { .. })
        ));
    }
}
