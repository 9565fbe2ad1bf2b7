//! Chance correction under the permutation model.
//!
//! The expected mutual information of a table when the target column is
//! uniformly permuted depends only on the marginals: each cell count is
//! hypergeometric with `a_i` draws, `b_j` successes and population `n`, so
//!
//! ```text
//! m0 = sum_i sum_j sum_k h(k; a_i, b_j, n) (k / n) log2(k n / (a_i b_j))
//! ```
//!
//! with `k` over the hypergeometric support. Each inner sum walks the pmf
//! outward from its mode with the ratio recurrence, so a cell costs
//! `O(min(a_i, b_j))` and the whole table `O(min(nR, nC))`.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::data::{AttributeSet, ContingencyTable};
use crate::exec::Execution;
use crate::infotheory::{fraction_of_information, mutual_information, target_entropy, Bits};
use crate::error::{Error, Result};

/// Expected MI below this is reported as exactly zero.
pub const M0_CLAMP: f64 = 1e-12;

/// Largest sample count the factorial oracle accepts (8! permutations).
pub const BRUTEFORCE_MAX_N: usize = 8;

/// Below this many distinct (a, b) marginal pairs the sum is never split
/// across threads.
const PARALLEL_MIN_PAIRS: usize = 256;

/// Cumulative `ln k!` for `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..=n {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LogFactorials { table }
    }

    /// Largest `k` covered.
    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn ln_factorial(&self, k: u64) -> f64 {
        self.table[k as usize]
    }

    pub fn ln_choose(&self, n: u64, k: u64) -> f64 {
        self.ln_factorial(n) - self.ln_factorial(k) - self.ln_factorial(n - k)
    }
}

/// Expected mutual information under independence and the derived bias term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionValue {
    /// Expected empirical MI over all target permutations.
    pub m0: Bits,
    /// `m0 / H(Y)`.
    pub b0: f64,
}

/// `F`, the bias estimate `b0` and the corrected `F0 = F - b0` of one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliableScore {
    pub f_hat: f64,
    pub b0: f64,
    pub f0: f64,
}

/// An attribute set with its scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPattern {
    pub attrs: AttributeSet,
    pub f_hat: f64,
    pub b0: f64,
    pub f0: f64,
    pub f_adj: Option<f64>,
}

impl ScoredPattern {
    pub fn new(attrs: AttributeSet, score: ReliableScore) -> Self {
        ScoredPattern {
            attrs,
            f_hat: score.f_hat,
            b0: score.b0,
            f0: score.f0,
            f_adj: None,
        }
    }
}

/// Expected contribution of one table cell with marginals `a`, `b`.
pub fn hypergeometric_cell_sum(a: u64, b: u64, n: u64) -> Result<Bits> {
    if a == 0 || b == 0 || a > n || b > n {
        return Err(Error::InvalidArgument(format!(
            "cell marginals must satisfy 1 <= a, b <= n (a={a}, b={b}, n={n})"
        )));
    }
    let lf = LogFactorials::new(n as usize);
    Ok(Bits(cell_sum(&lf, a, b, n)))
}

pub(crate) fn cell_sum(lf: &LogFactorials, a: u64, b: u64, n: u64) -> f64 {
    // a single row or column pins k to the other marginal: log term vanishes
    if a == n || b == n {
        return 0.0;
    }
    let k_min = (a + b).saturating_sub(n).max(1);
    let k_max = a.min(b);
    if k_min > k_max {
        return 0.0;
    }
    let nf = n as f64;
    let ab = (a as f64) * (b as f64);
    let term = |k: u64, h: f64| h * (k as f64 / nf) * ((k as f64 * nf) / ab).log2();

    let mode = ((a + 1) * (b + 1) / (n + 2)).clamp(k_min, k_max);
    let h_mode = (lf.ln_choose(b, mode) + lf.ln_choose(n - b, a - mode) - lf.ln_choose(n, a)).exp();
    // n - a - b + k, kept signed since it is negative below the support
    let base = n as i64 - a as i64 - b as i64;

    let mut sum = term(mode, h_mode);

    let mut h = h_mode;
    let mut k = mode;
    while k < k_max {
        h *= ((a - k) * (b - k)) as f64 / ((k + 1) as f64 * (base + k as i64 + 1) as f64);
        k += 1;
        if h == 0.0 {
            break;
        }
        sum += term(k, h);
    }

    let mut h = h_mode;
    let mut k = mode;
    while k > k_min {
        h *= (k as f64 * (base + k as i64) as f64) / ((a - k + 1) * (b - k + 1)) as f64;
        k -= 1;
        if h == 0.0 {
            break;
        }
        sum += term(k, h);
    }
    sum
}

fn histogram(marginals: &[u64]) -> Vec<(u64, u64)> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &m in marginals {
        *counts.entry(m).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// `m0` of a table with a precomputed log-factorial table (covering `t.n()`).
///
/// Cells sharing the same marginal pair have the same expected contribution,
/// so the sum runs over distinct row and column marginals with multiplicity.
/// The reduction order is fixed, which keeps results bit-identical across
/// execution modes.
pub fn expected_mi_with(t: &ContingencyTable, lf: &LogFactorials, exec: Execution) -> Bits {
    let n = t.n();
    assert!(lf.max() as u64 >= n, "log-factorial table too small for n = {n}");
    let rows = histogram(t.row_marginals());
    let cols = histogram(t.col_marginals());
    let row_sum = |&(a, ra): &(u64, u64)| -> f64 {
        cols.iter()
            .map(|&(b, cb)| (cb as f64) * cell_sum(lf, a, b, n))
            .sum::<f64>()
            * ra as f64
    };
    let exec = if rows.len() * cols.len() >= PARALLEL_MIN_PAIRS {
        exec
    } else {
        Execution::Sequential
    };
    let m0: f64 = exec.map(&rows, row_sum).into_iter().sum();
    Bits(if m0 < M0_CLAMP { 0.0 } else { m0 })
}

/// Expected MI under the permutation model together with `b0 = m0 / H(Y)`.
pub fn expected_mi_permutation(t: &ContingencyTable) -> Result<CorrectionValue> {
    let lf = LogFactorials::new(t.n() as usize);
    correction_with(t, &lf, Execution::default())
}

fn correction_with(
    t: &ContingencyTable,
    lf: &LogFactorials,
    exec: Execution,
) -> Result<CorrectionValue> {
    let hy = target_entropy(t).get();
    if hy <= 0.0 {
        return Err(Error::DegenerateTarget);
    }
    let m0 = expected_mi_with(t, lf, exec);
    Ok(CorrectionValue {
        m0,
        b0: (m0.get() / hy).clamp(0.0, 1.0),
    })
}

/// Exact average of the empirical MI over all `n!` permutations of the target.
pub fn expected_mi_bruteforce(t: &ContingencyTable) -> Result<Bits> {
    let n = t.n() as usize;
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::OracleTooLarge {
            n,
            max: BRUTEFORCE_MAX_N,
        });
    }
    // expand the table into one (row, col) pair per sample
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..t.row_count() {
        for j in 0..t.col_count() {
            for _ in 0..t.cell(i, j) {
                xs.push(i);
                ys.push(j);
            }
        }
    }
    let (r, c) = (t.row_count(), t.col_count());
    let mut total = 0.0f64;
    let mut count = 0u64;
    for perm in (0..n).permutations(n) {
        let mut cells = vec![vec![0u64; c]; r];
        for (s, &p) in perm.iter().enumerate() {
            cells[xs[s]][ys[p]] += 1;
        }
        let permuted = ContingencyTable::from_cells(&cells)?;
        total += mutual_information(&permuted).get();
        count += 1;
    }
    Ok(Bits(total / count as f64))
}

/// Caches the log-factorial table for one sample size and scores tables of
/// that size.
#[derive(Debug, Clone)]
pub struct Scorer {
    lf: LogFactorials,
    exec: Execution,
}

impl Scorer {
    pub fn new(n: usize) -> Self {
        Self::with_execution(n, Execution::default())
    }

    pub fn with_execution(n: usize, exec: Execution) -> Self {
        Scorer {
            lf: LogFactorials::new(n),
            exec,
        }
    }

    pub fn log_factorials(&self) -> &LogFactorials {
        &self.lf
    }

    pub fn correction(&self, t: &ContingencyTable) -> Result<CorrectionValue> {
        correction_with(t, &self.lf, self.exec)
    }

    pub fn reliable(&self, t: &ContingencyTable) -> Result<ReliableScore> {
        let f_hat = fraction_of_information(t)?;
        let b0 = self.correction(t)?.b0;
        Ok(ReliableScore {
            f_hat,
            b0,
            f0: f_hat - b0,
        })
    }

    pub fn adjusted(&self, t: &ContingencyTable) -> Result<f64> {
        let hy = target_entropy(t).get();
        if hy <= 0.0 {
            return Err(Error::DegenerateTarget);
        }
        let m0 = expected_mi_with(t, &self.lf, self.exec).get();
        let denom = hy - m0;
        if denom <= 1e-12 {
            return Err(Error::AdjustmentUndefined);
        }
        Ok((mutual_information(t).get() - m0) / denom)
    }
}

/// `F`, `b0` and `F0 = F - b0` of a table. `F0` may be negative.
pub fn reliable_fraction(t: &ContingencyTable) -> Result<ReliableScore> {
    Scorer::new(t.n() as usize).reliable(t)
}

/// `(I - m0) / (H(Y) - m0)`.
pub fn adjusted_fraction(t: &ContingencyTable) -> Result<f64> {
    Scorer::new(t.n() as usize).adjusted(t)
}
