//! Simulation of estimator bias on sampled 3x3 joint distributions.
//!
//! Joint pmfs over `X, Y` with three values each are drawn uniformly from
//! the probability simplex and sorted into four dependence regimes by their
//! true fraction of information. For each pmf, datasets of size `n` are
//! sampled and the estimators `F`, `F_adj` and `F0` are compared with the
//! true value. Every random stream is derived from a single seed, so reports
//! are reproducible bit for bit in both execution modes.

use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::correction::Scorer;
use crate::data::{build_table, AttributeSet, Column, ContingencyTable, Dataset};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::infotheory::fraction_of_information;

/// Side length of the benchmark pmfs.
pub const DOMAIN: usize = 3;

/// Draws allowed when rejection-sampling a pmf into a regime.
pub const MAX_REGIME_DRAWS: usize = 1_000_000;

/// Resampling attempts for a dataset with a constant target column.
const MAX_RESAMPLES: usize = 100_000;

/// Dependence regimes `(lo, hi]`; the first also admits `F = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Weak,
    Low,
    High,
    Strong,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Weak, Regime::Low, Regime::High, Regime::Strong];

    pub fn bounds(self) -> (f64, f64) {
        match self {
            Regime::Weak => (0.0, 0.25),
            Regime::Low => (0.25, 0.5),
            Regime::High => (0.5, 0.75),
            Regime::Strong => (0.75, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Weak => "weak",
            Regime::Low => "low",
            Regime::High => "high",
            Regime::Strong => "strong",
        }
    }
}

fn in_interval(f: f64, lo: f64, hi: f64) -> bool {
    (f > lo || (lo == 0.0 && f == 0.0)) && f <= hi
}

/// A 3x3 joint pmf, rows indexed by `X` and columns by `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    probs: [[f64; DOMAIN]; DOMAIN],
    true_f: f64,
}

impl JointPmf {
    pub fn new(probs: [[f64; DOMAIN]; DOMAIN]) -> Result<Self> {
        if probs.iter().flatten().any(|&p| p.is_nan() || p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidArgument("pmf cells must be finite and non-negative".into()));
        }
        let total: f64 = probs.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("pmf sums to {total}, not 1")));
        }
        let true_f = true_fraction_of(&probs)?;
        Ok(JointPmf { probs, true_f })
    }

    pub fn probs(&self) -> &[[f64; DOMAIN]; DOMAIN] {
        &self.probs
    }

    pub fn true_f(&self) -> f64 {
        self.true_f
    }
}

fn plogp_sum(ps: impl IntoIterator<Item = f64>) -> f64 {
    ps.into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn true_fraction_of(probs: &[[f64; DOMAIN]; DOMAIN]) -> Result<f64> {
    let py: Vec<f64> = (0..DOMAIN).map(|j| probs.iter().map(|r| r[j]).sum()).collect();
    let hy = plogp_sum(py);
    if hy <= 1e-15 {
        return Err(Error::DegenerateTarget);
    }
    let hy_x: f64 = probs
        .iter()
        .map(|row| {
            let px: f64 = row.iter().sum();
            if px > 0.0 {
                px * plogp_sum(row.iter().map(|&p| p / px))
            } else {
                0.0
            }
        })
        .sum();
    Ok(((hy - hy_x) / hy).clamp(0.0, 1.0))
}

/// True fraction of information `(H(Y) - H(Y|X)) / H(Y)` of a pmf.
pub fn true_fraction(pmf: &JointPmf) -> Result<f64> {
    true_fraction_of(&pmf.probs)
}

/// Rejection-samples a pmf from the flat simplex until its true fraction of
/// information falls in `(lo, hi]`.
pub fn sample_pmf_in_regime<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> Result<JointPmf> {
    if !(0.0..=1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
        return Err(Error::InvalidArgument(format!("invalid regime ({lo}, {hi}]")));
    }
    for _ in 0..MAX_REGIME_DRAWS {
        let mut probs = [[0.0; DOMAIN]; DOMAIN];
        let mut total = 0.0;
        for p in probs.iter_mut().flatten() {
            let e: f64 = Exp1.sample(rng);
            *p = e;
            total += e;
        }
        for p in probs.iter_mut().flatten() {
            *p /= total;
        }
        let Ok(f) = true_fraction_of(&probs) else {
            continue;
        };
        if in_interval(f, lo, hi) {
            // renormalising can leave the sum a few ulps off; rescale once more
            let total: f64 = probs.iter().flatten().sum();
            for p in probs.iter_mut().flatten() {
                *p /= total;
            }
            return JointPmf::new(probs);
        }
    }
    Err(Error::RegimeSamplingFailed {
        lo,
        hi,
        draws: MAX_REGIME_DRAWS,
    })
}

/// Draws `n` i.i.d. `(X, Y)` pairs by inverse CDF over the nine cells.
pub fn sample_dataset<R: Rng + ?Sized>(pmf: &JointPmf, n: usize, rng: &mut R) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut cdf = [0.0; DOMAIN * DOMAIN];
    let mut acc = 0.0;
    for (slot, &p) in cdf.iter_mut().zip(pmf.probs.iter().flatten()) {
        acc += p;
        *slot = acc;
    }
    // last cell with mass absorbs rounding at the top of the cdf
    let flat: Vec<f64> = pmf.probs.iter().flatten().copied().collect();
    let last = flat.iter().rposition(|&p| p > 0.0).expect("pmf has mass");
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>() * acc;
        let cell = cdf.iter().position(|&c| u < c).unwrap_or(last).min(last);
        xs.push((cell / DOMAIN) as u32);
        ys.push((cell % DOMAIN) as u32);
    }
    Dataset::new(
        "pmf-sample",
        vec![dense_codes("X".into(), &xs)?, dense_codes("Y".into(), &ys)?],
        1,
    )
}

/// A fraction-of-information estimator evaluated on a contingency table.
pub trait Estimator: Sync {
    fn name(&self) -> &str;
    fn estimate(&self, scorer: &Scorer, table: &ContingencyTable) -> Result<f64>;
}

/// The three estimators compared by the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Score {
    /// Plug-in `F`.
    Plain,
    /// `F_adj = (I - m0) / (H(Y) - m0)`.
    Adjusted,
    /// `F0 = F - b0`.
    Reliable,
}

impl Score {
    pub const ALL: [Score; 3] = [Score::Plain, Score::Adjusted, Score::Reliable];
}

impl Estimator for Score {
    fn name(&self) -> &str {
        match self {
            Score::Plain => "F",
            Score::Adjusted => "F_adj",
            Score::Reliable => "F0",
        }
    }

    fn estimate(&self, scorer: &Scorer, table: &ContingencyTable) -> Result<f64> {
        match self {
            Score::Plain => fraction_of_information(table),
            Score::Adjusted => scorer.adjusted(table),
            Score::Reliable => scorer.reliable(table).map(|s| s.f0),
        }
    }
}

/// splitmix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream addressed by `path` under `seed`.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(seed), |acc, &p| mix(acc ^ mix(p)))
}

fn is_resample(e: &Error) -> bool {
    matches!(e, Error::DegenerateTarget | Error::AdjustmentUndefined)
}

/// Samples a dataset of size `n` and evaluates `f` on its `X`-table,
/// resampling while the target is constant or `f` is undefined.
fn sample_defined<T, F>(pmf: &JointPmf, n: usize, rng: &mut ChaCha8Rng, scorer: &Scorer, f: F) -> Result<T>
where
    F: Fn(&Scorer, &ContingencyTable) -> Result<T>,
{
    let attrs = AttributeSet::new(vec![0])?;
    for _ in 0..MAX_RESAMPLES {
        let ds = sample_dataset(pmf, n, rng)?;
        if ds.target().domain_size() < 2 {
            continue;
        }
        let table = build_table(&ds, &attrs);
        match f(scorer, &table) {
            Ok(v) => return Ok(v),
            Err(e) if is_resample(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not sample a dataset of size {n} with a defined estimate"
    )))
}

/// Bias `E[estimator] - F` of one estimator for one pmf, averaged over
/// `trials` sampled datasets.
pub fn estimate_bias<E: Estimator, R: RngCore + ?Sized>(
    pmf: &JointPmf,
    estimator: &E,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    estimate_bias_with(pmf, estimator, n, trials, rng, Execution::default())
}

pub fn estimate_bias_with<E: Estimator, R: RngCore + ?Sized>(
    pmf: &JointPmf,
    estimator: &E,
    n: usize,
    trials: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
    let scorer = Scorer::with_execution(n, Execution::Sequential);
    let values = exec
        .map(&seeds, |&s| {
            let mut trng = ChaCha8Rng::seed_from_u64(s);
            sample_defined(pmf, n, &mut trng, &scorer, |sc, t| estimator.estimate(sc, t))
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / trials as f64 - pmf.true_f)
}

/// Parameters of [`bias_summary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasConfig {
    pub pmfs_per_regime: usize,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
    #[serde(skip)]
    pub execution: Execution,
}

impl BiasConfig {
    /// 5 pmfs per regime, 200 datasets per pmf, `n` in {5, 10, 20}.
    pub fn desk_scale(seed: u64) -> Self {
        BiasConfig {
            pmfs_per_regime: 5,
            trials: 200,
            sizes: vec![5, 10, 20],
            seed,
            execution: Execution::default(),
        }
    }

    /// 25 pmfs per regime, 1000 datasets per pmf, `n` in {5, 10, ..., 60}.
    pub fn full_scale(seed: u64) -> Self {
        BiasConfig {
            pmfs_per_regime: 25,
            trials: 1000,
            sizes: vec![5, 10, 20, 30, 40, 50, 60],
            seed,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeBias {
    pub regime: Regime,
    pub mean_abs_bias: f64,
}

/// Absolute-bias statistics of one estimator at one data size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub estimator: String,
    pub n: usize,
    /// Mean of `|bias|` over all sampled pmfs.
    pub mean_abs_bias: f64,
    /// Population standard deviation of `|bias|` over all sampled pmfs.
    pub std_abs_bias: f64,
    pub regimes: Vec<RegimeBias>,
    pub pmf_count: usize,
    pub trials_per_pmf: usize,
    pub seed: u64,
}

/// Samples `pmfs_per_regime` pmfs from every regime, in regime order.
pub fn sample_benchmark_pmfs(pmfs_per_regime: usize, seed: u64) -> Result<Vec<(Regime, JointPmf)>> {
    let mut out = Vec::with_capacity(4 * pmfs_per_regime);
    for (r, regime) in Regime::ALL.iter().enumerate() {
        let (lo, hi) = regime.bounds();
        for i in 0..pmfs_per_regime {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0, r as u64, i as u64]));
            out.push((*regime, sample_pmf_in_regime(lo, hi, &mut rng)?));
        }
    }
    Ok(out)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Mean and standard deviation of the absolute bias of `F`, `F_adj` and `F0`
/// for every data size.
///
/// All three estimators are evaluated on the same sampled datasets. A
/// dataset is redrawn when its target column is constant or when any
/// estimator is undefined on it.
pub fn bias_summary(config: &BiasConfig) -> Result<Vec<BiasReport>> {
    if config.pmfs_per_regime == 0 || config.trials == 0 || config.sizes.is_empty() {
        return Err(Error::InvalidArgument(
            "pmfs per regime, trials and sizes must be non-empty".into(),
        ));
    }
    if config.sizes.contains(&0) {
        return Err(Error::InvalidArgument("data sizes must be positive".into()));
    }
    let pmfs = sample_benchmark_pmfs(config.pmfs_per_regime, config.seed)?;
    let trials = config.trials;
    let mut reports = Vec::new();

    for &n in &config.sizes {
        let scorer = Scorer::with_execution(n, Execution::Sequential);
        let jobs = pmfs.len() * trials;
        let values = config
            .execution
            .map_range(jobs, |job| {
                let (p, t) = (job / trials, job % trials);
                let seed = derive_seed(config.seed, &[1, n as u64, p as u64, t as u64]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sample_defined(&pmfs[p].1, n, &mut rng, &scorer, |sc, table| {
                    let mut out = [0.0; 3];
                    for (slot, est) in out.iter_mut().zip(Score::ALL) {
                        *slot = est.estimate(sc, table)?;
                    }
                    Ok(out)
                })
            })
            .into_iter()
            .collect::<Result<Vec<[f64; 3]>>>()?;

        for (e, est) in Score::ALL.iter().enumerate() {
            let abs_bias: Vec<f64> = pmfs
                .iter()
                .enumerate()
                .map(|(p, (_, pmf))| {
                    let chunk = &values[p * trials..(p + 1) * trials];
                    let m = chunk.iter().map(|v| v[e]).sum::<f64>() / trials as f64;
                    (m - pmf.true_f).abs()
                })
                .collect();
            let regimes = Regime::ALL
                .iter()
                .map(|&regime| {
                    let subset: Vec<f64> = pmfs
                        .iter()
                        .zip(&abs_bias)
                        .filter(|((r, _), _)| *r == regime)
                        .map(|(_, &b)| b)
                        .collect();
                    RegimeBias {
                        regime,
                        mean_abs_bias: mean(&subset),
                    }
                })
                .collect();
            reports.push(BiasReport {
                estimator: est.name().to_string(),
                n,
                mean_abs_bias: mean(&abs_bias),
                std_abs_bias: population_std(&abs_bias),
                regimes,
                pmf_count: pmfs.len(),
                trials_per_pmf: trials,
                seed: config.seed,
            });
        }
    }
    Ok(reports)
}

/// Summary statistics for an explicit list of pmfs and one estimator.
pub fn bias_report_for<E: Estimator>(
    pmfs: &[(Regime, JointPmf)],
    estimator: &E,
    n: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<BiasReport> {
    if pmfs.is_empty() {
        return Err(Error::InvalidArgument("no pmfs given".into()));
    }
    let mut abs_bias = Vec::with_capacity(pmfs.len());
    for (p, (_, pmf)) in pmfs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[3, p as u64]));
        abs_bias.push(estimate_bias_with(pmf, estimator, n, trials, &mut rng, exec)?.abs());
    }
    let regimes = Regime::ALL
        .iter()
        .filter_map(|&regime| {
            let subset: Vec<f64> = pmfs
                .iter()
                .zip(&abs_bias)
                .filter(|((r, _), _)| *r == regime)
                .map(|(_, &b)| b)
                .collect();
            (!subset.is_empty()).then(|| RegimeBias {
                regime,
                mean_abs_bias: mean(&subset),
            })
        })
        .collect();
    Ok(BiasReport {
        estimator: estimator.name().to_string(),
        n,
        mean_abs_bias: mean(&abs_bias),
        std_abs_bias: population_std(&abs_bias),
        regimes,
        pmf_count: pmfs.len(),
        trials_per_pmf: trials,
        seed,
    })
}

/// Mean `F` and `F0` of the first `dimension` attributes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionPoint {
    pub dimension: usize,
    pub mean_f_hat: f64,
    pub mean_f0: f64,
}

/// Scores `{X1..Xm}` for `m = 1..=attrs` on datasets whose inputs and target
/// are mutually independent and uniform over `domain_size` values.
pub fn dimensionality_curve(
    n: usize,
    attrs: usize,
    domain_size: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<DimensionPoint>> {
    if attrs == 0 || trials == 0 || n == 0 {
        return Err(Error::InvalidArgument("n, attrs and trials must be at least 1".into()));
    }
    if domain_size < 2 {
        return Err(Error::DegenerateTarget);
    }
    let scorer = Scorer::with_execution(n, Execution::Sequential);
    let per_trial = exec
        .map_range(trials, |t| -> Result<Vec<(f64, f64)>> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[2, t as u64]));
            let ds = loop {
                let cols: Vec<Vec<u32>> = (0..=attrs)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..domain_size) as u32).collect())
                    .collect();
                let columns = cols
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let name = if i == attrs { "Y".to_string() } else { format!("X{}", i + 1) };
                        dense_codes(name, c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ds = Dataset::new("independent", columns, attrs)?;
                if ds.target().domain_size() >= 2 {
                    break ds;
                }
            };
            (1..=attrs)
                .map(|m| {
                    let t = build_table(&ds, &AttributeSet::new((0..m).collect())?);
                    let s = scorer.reliable(&t)?;
                    Ok((s.f_hat, s.f0))
                })
                .collect()
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok((0..attrs)
        .map(|m| DimensionPoint {
            dimension: m + 1,
            mean_f_hat: per_trial.iter().map(|v| v[m].0).sum::<f64>() / trials as f64,
            mean_f0: per_trial.iter().map(|v| v[m].1).sum::<f64>() / trials as f64,
        })
        .collect())
}

fn dense_codes(name: String, values: &[u32]) -> Result<Column> {
    let max = values.iter().copied().max().unwrap_or(0) as usize;
    let raw: Vec<usize> = values.iter().map(|&v| v as usize).collect();
    let codes = crate::data::densify_codes(&raw);
    let mut labels = Vec::new();
    let mut present = vec![false; max + 1];
    for &v in values {
        present[v as usize] = true;
    }
    for (v, p) in present.iter().enumerate() {
        if *p {
            labels.push(v.to_string());
        }
    }
    Column::new(name, codes, labels)
}

/// Tab-separated rendering of bias reports, one row per estimator and size.
pub fn reports_to_tsv(reports: &[BiasReport]) -> String {
    let mut out = String::from(
        "estimator\tn\tmu\tsigma\tmu_weak\tmu_low\tmu_high\tmu_strong\tpmf_count\ttrials\tseed\n",
    );
    for r in reports {
        let regime = |g: Regime| {
            r.regimes
                .iter()
                .find(|x| x.regime == g)
                .map_or(f64::NAN, |x| x.mean_abs_bias)
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.estimator,
            r.n,
            r.mean_abs_bias,
            r.std_abs_bias,
            regime(Regime::Weak),
            regime(Regime::Low),
            regime(Regime::High),
            regime(Regime::Strong),
            r.pmf_count,
            r.trials_per_pmf,
            r.seed
        );
    }
    out
}

/// Tab-separated rendering of a dimensionality curve.
pub fn curve_to_tsv(points: &[DimensionPoint]) -> String {
    let mut out = String::from("dimension\tmean_f_hat\tmean_f0\n");
    for p in points {
        let _ = writeln!(out, "{}\t{}\t{}", p.dimension, p.mean_f_hat, p.mean_f0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Oracle(f64);

    impl Estimator for Oracle {
        fn name(&self) -> &str {
            "oracle"
        }
        fn estimate(&self, _: &Scorer, _: &ContingencyTable) -> Result<f64> {
            Ok(self.0)
        }
    }

    fn independent() -> JointPmf {
        let px = [0.2, 0.3, 0.5];
        let py = [0.5, 0.25, 0.25];
        let mut probs = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                probs[i][j] = px[i] * py[j];
            }
        }
        JointPmf::new(probs).unwrap()
    }

    #[test]
    fn true_fraction_examples() {
        assert!(independent().true_f().abs() < 1e-12);
        let third = 1.0 / 3.0;
        let bij = JointPmf::new([[0.0, third, 0.0], [0.0, 0.0, third], [third, 0.0, 0.0]]).unwrap();
        assert!((bij.true_f() - 1.0).abs() < 1e-12);
        let sixth = 1.0 / 6.0;
        let p = JointPmf::new([[third, 0.0, 0.0], [0.0, sixth, sixth], [0.0, sixth, sixth]]).unwrap();
        // H(Y) = log2 3, H(Y|X) = 2/3 bit
        let expected = (3f64.log2() - 2.0 / 3.0) / 3f64.log2();
        assert!((true_fraction(&p).unwrap() - expected).abs() < 1e-12);
        assert_eq!(
            JointPmf::new([[0.5, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0; 3]]),
            Err(Error::DegenerateTarget)
        );
        assert!(JointPmf::new([[0.5; 3]; 3]).is_err());
    }

    #[test]
    fn regime_sampling_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for regime in Regime::ALL {
            let (lo, hi) = regime.bounds();
            for _ in 0..3 {
                let p = sample_pmf_in_regime(lo, hi, &mut rng).unwrap();
                assert!(in_interval(p.true_f(), lo, hi), "{regime:?}: {}", p.true_f());
            }
        }
        assert!(sample_pmf_in_regime(0.5, 0.2, &mut rng).is_err());
    }

    #[test]
    fn regime_sampling_is_deterministic() {
        let a = sample_pmf_in_regime(0.25, 0.5, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample_pmf_in_regime(0.25, 0.5, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn point_mass_gives_identical_rows() {
        let mut probs = [[0.0; 3]; 3];
        probs[1][2] = 0.5;
        probs[0][0] = 0.5;
        let pmf = JointPmf::new(probs).unwrap();
        let mut one = [[0.0; 3]; 3];
        one[2][1] = 1.0;
        // single-cell pmf has constant Y, so build it without the F check
        let single = JointPmf { probs: one, true_f: 0.0 };
        let ds = sample_dataset(&single, 50, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(ds.column(0).codes().iter().all(|&c| c == 0));
        assert!(ds.target().codes().iter().all(|&c| c == 0));
        let ds = sample_dataset(&pmf, 200, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(ds.n(), 200);
        assert!(sample_dataset(&pmf, 0, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn empirical_frequencies_converge() {
        let pmf = sample_pmf_in_regime(0.25, 0.5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ds = sample_dataset(&pmf, n, &mut rng).unwrap();
        let mut counts = [[0usize; 3]; 3];
        let xs = ds.column(0);
        let ys = ds.target();
        for s in 0..n {
            let x: usize = xs.label(xs.codes()[s]).parse().unwrap();
            let y: usize = ys.label(ys.codes()[s]).parse().unwrap();
            counts[x][y] += 1;
        }
        for (i, (prow, crow)) in pmf.probs().iter().zip(&counts).enumerate() {
            for (j, (&p, &c)) in prow.iter().zip(crow).enumerate() {
                let se = (p * (1.0 - p) / n as f64).sqrt();
                let freq = c as f64 / n as f64;
                assert!((freq - p).abs() <= 3.0 * se + 1e-12, "cell ({i},{j}): {freq} vs {p}");
            }
        }
    }

    #[test]
    fn oracle_estimator_has_zero_bias() {
        let pmf = sample_pmf_in_regime(0.5, 0.75, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let bias = estimate_bias(&pmf, &Oracle(pmf.true_f()), 10, 50, &mut rng).unwrap();
        assert!(bias.abs() < 1e-15);
        assert!(estimate_bias(&pmf, &Score::Plain, 10, 0, &mut rng).is_err());
    }

    #[test]
    fn plain_estimator_overestimates_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let bias = estimate_bias(&independent(), &Score::Plain, 5, 500, &mut rng).unwrap();
        assert!(bias > 0.0);
        let bias0 = estimate_bias(&independent(), &Score::Reliable, 1000, 200, &mut rng).unwrap();
        assert!(bias0.abs() < 0.02, "{bias0}");
    }

    #[test]
    fn single_pmf_single_trial() {
        let pmfs = vec![(Regime::Low, sample_pmf_in_regime(0.25, 0.5, &mut ChaCha8Rng::seed_from_u64(1)).unwrap())];
        let r = bias_report_for(&pmfs, &Score::Reliable, 10, 1, 3, Execution::Sequential).unwrap();
        assert_eq!(r.std_abs_bias, 0.0);
        assert_eq!(r.pmf_count, 1);
        assert_eq!(r.regimes.len(), 1);
        assert!(r.mean_abs_bias >= 0.0);
    }

    #[test]
    fn dimensionality_rejects_constant_domain() {
        assert_eq!(
            dimensionality_curve(100, 2, 1, 2, 0, Execution::Sequential),
            Err(Error::DegenerateTarget)
        );
    }

    #[test]
    fn summary_is_reproducible_across_modes() {
        let mut config = BiasConfig {
            pmfs_per_regime: 1,
            trials: 20,
            sizes: vec![5, 10],
            seed: 42,
            execution: Execution::Sequential,
        };
        let a = bias_summary(&config).unwrap();
        config.execution = Execution::Parallel;
        let b = bias_summary(&config).unwrap();
        assert_eq!(reports_to_tsv(&a), reports_to_tsv(&b));
        assert_eq!(a.len(), 6);
        assert_eq!(reports_to_tsv(&a).lines().count(), 7);
    }
}
