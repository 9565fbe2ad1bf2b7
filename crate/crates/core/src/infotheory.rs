//! Empirical Shannon quantities over contingency tables, in bits.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::data::ContingencyTable;
use crate::error::{Error, Result};

/// Mutual information below this is reported as exactly zero.
pub const MI_CLAMP: f64 = 1e-12;

/// An information quantity in bits (base-2 logarithms).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// `-sum (c/n) log2(c/n)`; zero counts contribute nothing.
pub fn entropy(counts: &[u64], n: u64) -> Result<Bits> {
    let sum: u64 = counts.iter().sum();
    if sum != n || n == 0 {
        return Err(Error::CountsMismatch { sum, n });
    }
    Ok(Bits(entropy_unchecked(counts, n)))
}

pub(crate) fn entropy_unchecked(counts: &[u64], n: u64) -> f64 {
    let n = n as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// `H(Y)` of a table's target marginal.
pub fn target_entropy(t: &ContingencyTable) -> Bits {
    Bits(entropy_unchecked(t.col_marginals(), t.n()))
}

/// `H(Y | X) = sum_i (a_i / n) H(row_i)`.
pub fn conditional_entropy(t: &ContingencyTable) -> Bits {
    let n = t.n() as f64;
    let h: f64 = t
        .rows()
        .zip(t.row_marginals())
        .map(|(row, &a)| (a as f64 / n) * entropy_unchecked(row, a))
        .sum();
    Bits(h.max(0.0))
}

/// `I(X; Y) = H(Y) - H(Y | X)`, clamped at zero.
pub fn mutual_information(t: &ContingencyTable) -> Bits {
    let mi = target_entropy(t).0 - conditional_entropy(t).0;
    Bits(if mi < MI_CLAMP { 0.0 } else { mi })
}

/// `F(X; Y) = I(X; Y) / H(Y)`, the proportional reduction of target uncertainty.
pub fn fraction_of_information(t: &ContingencyTable) -> Result<f64> {
    let hy = target_entropy(t).0;
    if hy <= 0.0 {
        return Err(Error::DegenerateTarget);
    }
    Ok((mutual_information(t).0 / hy).clamp(0.0, 1.0))
}
