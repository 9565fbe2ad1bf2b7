use serde::{Deserialize, Serialize};

use super::{AttributeSet, Dataset};
use crate::error::{Error, Result};

/// Joint counts of the observed values of an attribute set (rows) against
/// the observed target values (columns).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    n: u64,
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols`.
    cells: Vec<u64>,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
}

impl ContingencyTable {
    /// Builds a table from explicit counts. Every row and column must have a
    /// positive marginal.
    pub fn from_cells(cells: &[Vec<u64>]) -> Result<Self> {
        let rows = cells.len();
        if rows == 0 {
            return Err(Error::InvalidArgument("table needs at least one row".into()));
        }
        let cols = cells[0].len();
        if cols == 0 || cells.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("table rows must share a positive width".into()));
        }
        let flat: Vec<u64> = cells.iter().flatten().copied().collect();
        Self::from_flat(rows, cols, flat)
    }

    pub(crate) fn from_flat(rows: usize, cols: usize, cells: Vec<u64>) -> Result<Self> {
        let mut row_marginals = vec![0u64; rows];
        let mut col_marginals = vec![0u64; cols];
        for i in 0..rows {
            for j in 0..cols {
                let c = cells[i * cols + j];
                row_marginals[i] += c;
                col_marginals[j] += c;
            }
        }
        if row_marginals.iter().chain(&col_marginals).any(|&m| m == 0) {
            return Err(Error::InvalidArgument(
                "every row and column of a contingency table needs a positive count".into(),
            ));
        }
        let n = row_marginals.iter().sum();
        Ok(ContingencyTable {
            n,
            rows,
            cols,
            cells,
            row_marginals,
            col_marginals,
        })
    }

    /// Sample count.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of distinct observed attribute-set values, `R`.
    pub fn row_count(&self) -> usize {
        self.rows
    }

    /// Number of distinct observed target values, `C`.
    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.cols)
    }

    /// `a_i`.
    pub fn row_marginals(&self) -> &[u64] {
        &self.row_marginals
    }

    /// `b_j`.
    pub fn col_marginals(&self) -> &[u64] {
        &self.col_marginals
    }

    pub fn to_nested(&self) -> Vec<Vec<u64>> {
        self.rows().map(<[u64]>::to_vec).collect()
    }

    /// Swaps the roles of rows and columns.
    pub fn transpose(&self) -> Self {
        let mut cells = vec![0u64; self.cells.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                cells[j * self.rows + i] = self.cell(i, j);
            }
        }
        ContingencyTable {
            n: self.n,
            rows: self.cols,
            cols: self.rows,
            cells,
            row_marginals: self.col_marginals.clone(),
            col_marginals: self.row_marginals.clone(),
        }
    }
}

/// Builds the contingency table of `attrs` against the target.
///
/// Rows are the distinct observed code tuples in lexicographic order; for the
/// empty set the table has a single row.
pub fn build_table(dataset: &Dataset, attrs: &AttributeSet) -> ContingencyTable {
    group(dataset, attrs, false).0
}

/// Like [`build_table`], also returning the code tuple of every table row.
pub fn build_table_with_keys(
    dataset: &Dataset,
    attrs: &AttributeSet,
) -> (ContingencyTable, Vec<Vec<u32>>) {
    let (table, keys) = group(dataset, attrs, true);
    (table, keys.unwrap_or_default())
}

fn group(
    dataset: &Dataset,
    attrs: &AttributeSet,
    want_keys: bool,
) -> (ContingencyTable, Option<Vec<Vec<u32>>>) {
    debug_assert!(attrs.check(dataset).is_ok());
    let n = dataset.n();
    let target = dataset.target();
    let cols = target.domain_size();
    let columns: Vec<&[u32]> = attrs
        .indices()
        .iter()
        .map(|&i| dataset.column(i).codes())
        .collect();
    let radices: Vec<u64> = attrs
        .indices()
        .iter()
        .map(|&i| dataset.column(i).domain_size() as u64)
        .collect();

    let packed = radices
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r))
        .is_some();

    // Row of each sample plus the sorted distinct keys.
    let (row_of, keys): (Vec<usize>, Option<Vec<Vec<u32>>>) = if packed {
        let sample_keys: Vec<u64> = (0..n)
            .map(|s| {
                columns
                    .iter()
                    .zip(&radices)
                    .fold(0u64, |acc, (col, &r)| acc * r + col[s] as u64)
            })
            .collect();
        let mut distinct = sample_keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let row_of = sample_keys
            .iter()
            .map(|k| distinct.binary_search(k).unwrap())
            .collect();
        let keys = want_keys.then(|| {
            distinct
                .iter()
                .map(|&k| unpack(k, &radices))
                .collect()
        });
        (row_of, keys)
    } else {
        let sample_keys: Vec<Vec<u32>> = (0..n)
            .map(|s| columns.iter().map(|col| col[s]).collect())
            .collect();
        let mut distinct = sample_keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let row_of = sample_keys
            .iter()
            .map(|k| distinct.binary_search(k).unwrap())
            .collect();
        (row_of, want_keys.then_some(distinct))
    };

    let rows = row_of.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![0u64; rows * cols];
    for (s, &r) in row_of.iter().enumerate() {
        cells[r * cols + target.codes()[s] as usize] += 1;
    }
    let table = ContingencyTable::from_flat(rows, cols, cells)
        .expect("dense target encoding guarantees positive marginals");
    (table, keys)
}

fn unpack(mut key: u64, radices: &[u64]) -> Vec<u32> {
    let mut out = vec![0u32; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = (key % r) as u32;
        key /= r;
    }
    out
}
