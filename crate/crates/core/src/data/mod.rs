//! Categorical datasets, ingestion from CSV and contingency tables.

mod discretize;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use discretize::equal_frequency_bins;
pub(crate) use discretize::densify as densify_codes;
pub use table::{build_table, build_table_with_keys, ContingencyTable};

/// Default number of equal-frequency bins for numeric columns.
pub const DEFAULT_BINS: usize = 5;

/// One integer-encoded categorical column.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    codes: Vec<u32>,
    domain_size: usize,
    labels: Vec<String>,
}

impl Column {
    /// Builds a column from dense codes and one label per code.
    pub fn new(name: impl Into<String>, codes: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if codes.is_empty() {
            return Err(Error::InvalidDataset(format!("column {name:?} is empty")));
        }
        let domain_size = labels.len();
        let mut seen = vec![false; domain_size];
        for &c in &codes {
            let c = c as usize;
            if c >= domain_size {
                return Err(Error::InvalidDataset(format!(
                    "column {name:?}: code {c} outside domain of size {domain_size}"
                )));
            }
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidDataset(format!(
                "column {name:?}: code {missing} never occurs (encoding must be dense)"
            )));
        }
        let mut distinct: Vec<&String> = labels.iter().collect();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidDataset(format!("column {name:?}: duplicate labels")));
        }
        Ok(Column {
            name,
            codes,
            domain_size,
            labels,
        })
    }

    /// Builds a column from dense codes, labelling each code by its number.
    pub fn from_codes(name: impl Into<String>, codes: Vec<u32>) -> Result<Self> {
        let domain = codes.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let labels = (0..domain).map(|c| c.to_string()).collect();
        Self::new(name, codes, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// Source label of every code, indexed by code.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, code: u32) -> &str {
        &self.labels[code as usize]
    }
}

/// An integer-encoded categorical table with a designated target column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    n: usize,
    columns: Vec<Column>,
    target: usize,
    inputs: Vec<usize>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<Column>, target: usize) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::TooFewColumns(columns.len()));
        }
        if target >= columns.len() {
            return Err(Error::InvalidDataset(format!(
                "target index {target} out of range for {} columns",
                columns.len()
            )));
        }
        let n = columns[0].codes.len();
        if let Some(bad) = columns.iter().find(|c| c.codes.len() != n) {
            return Err(Error::InvalidDataset(format!(
                "column {:?} has {} values, expected {n}",
                bad.name,
                bad.codes.len()
            )));
        }
        let inputs = (0..columns.len()).filter(|&i| i != target).collect();
        Ok(Dataset {
            name: name.into(),
            n,
            columns,
            target,
            inputs,
        })
    }

    /// Convenience constructor from raw code vectors; the target is the last column.
    pub fn from_code_columns(inputs: Vec<Vec<u32>>, target: Vec<u32>) -> Result<Self> {
        let mut columns = Vec::with_capacity(inputs.len() + 1);
        for (i, codes) in inputs.into_iter().enumerate() {
            columns.push(Column::from_codes(format!("X{}", i + 1), codes)?);
        }
        columns.push(Column::from_codes("Y", target)?);
        let target = columns.len() - 1;
        Dataset::new("synthetic", columns, target)
    }

    /// Reads and encodes a CSV file; the dataset is named after the file stem.
    pub fn read_csv(path: impl AsRef<Path>, target_name: &str, numeric_bins: usize) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
        let mut raw = RawTable::from_reader(file)?;
        raw.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        encode_dataset(&raw, target_name, numeric_bins)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of input attributes (all columns but the target).
    pub fn d(&self) -> usize {
        self.inputs.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub fn target_index(&self) -> usize {
        self.target
    }

    pub fn target(&self) -> &Column {
        &self.columns[self.target]
    }

    /// Column indices of the input attributes, ascending.
    pub fn input_indices(&self) -> &[usize] {
        &self.inputs
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Attribute set from input positions `0..d` (the search's coordinate system).
    pub fn attrs_from_positions(&self, positions: &[usize]) -> AttributeSet {
        AttributeSet(positions.iter().map(|&p| self.inputs[p]).collect())
    }

    pub fn attribute_names(&self, attrs: &AttributeSet) -> Vec<String> {
        attrs
            .indices()
            .iter()
            .map(|&i| self.columns[i].name.clone())
            .collect()
    }
}

/// Strictly increasing column indices, never containing the target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct AttributeSet(Vec<usize>);

impl AttributeSet {
    pub fn empty() -> Self {
        AttributeSet(Vec::new())
    }

    /// Sorts and checks for duplicates; dataset membership is checked by [`AttributeSet::check`].
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAttributes(format!(
                "duplicate index in {indices:?}"
            )));
        }
        Ok(AttributeSet(indices))
    }

    pub fn check(&self, dataset: &Dataset) -> Result<()> {
        for &i in &self.0 {
            if i >= dataset.columns.len() {
                return Err(Error::InvalidAttributes(format!("index {i} out of range")));
            }
            if i == dataset.target {
                return Err(Error::InvalidAttributes(format!(
                    "index {i} is the target column"
                )));
            }
        }
        Ok(())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// Copy with `index` added.
    pub fn with(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&index) {
            v.insert(pos, index);
        }
        AttributeSet(v)
    }

    pub fn is_subset_of(&self, other: &AttributeSet) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Text cells with a header row, as read from CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    /// Parses comma-separated text with a header row and optional double-quote quoting.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok(RawTable {
            name: String::new(),
            header,
            rows,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_reader(text.as_bytes())
    }
}

fn parse_numeric(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Integer-encodes a raw table.
///
/// Columns whose cells all parse as finite decimal numbers are discretized
/// with [`equal_frequency_bins`]; all others are categorical, coded in order
/// of first appearance. Rows are 1-based in error messages, counting the
/// header as row 0.
pub fn encode_dataset(raw: &RawTable, target_name: &str, numeric_bins: usize) -> Result<Dataset> {
    if numeric_bins == 0 {
        return Err(Error::InvalidArgument("numeric_bins must be at least 1".into()));
    }
    let width = raw.header.len();
    if width < 2 {
        return Err(Error::TooFewColumns(width));
    }
    for (i, h) in raw.header.iter().enumerate() {
        if raw.header[..i].contains(h) {
            return Err(Error::DuplicateColumn(h.clone()));
        }
    }
    let target = raw
        .header
        .iter()
        .position(|h| h == target_name)
        .ok_or_else(|| Error::UnknownTarget(target_name.to_string()))?;
    if raw.rows.is_empty() {
        return Err(Error::NoRows);
    }
    for (r, row) in raw.rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::RaggedRow {
                row: r + 1,
                found: row.len(),
                expected: width,
            });
        }
        if let Some(c) = row.iter().position(|cell| cell.trim().is_empty()) {
            return Err(Error::MissingCell {
                row: r + 1,
                column: raw.header[c].clone(),
            });
        }
    }

    let mut columns = Vec::with_capacity(width);
    for (c, name) in raw.header.iter().enumerate() {
        let cells: Vec<&str> = raw.rows.iter().map(|row| row[c].as_str()).collect();
        let numeric: Option<Vec<f64>> = cells.iter().map(|s| parse_numeric(s)).collect();
        let column = match numeric {
            Some(values) => encode_numeric(name, &values, numeric_bins)?,
            None => encode_categorical(name, &cells)?,
        };
        columns.push(column);
    }
    Dataset::new(raw.name.clone(), columns, target)
}

fn encode_categorical(name: &str, cells: &[&str]) -> Result<Column> {
    let mut index: HashMap<&str, u32> = HashMap::new();
    let mut labels = Vec::new();
    let codes = cells
        .iter()
        .map(|&cell| {
            *index.entry(cell).or_insert_with(|| {
                labels.push(cell.to_string());
                (labels.len() - 1) as u32
            })
        })
        .collect();
    Column::new(name, codes, labels)
}

fn encode_numeric(name: &str, values: &[f64], bins: usize) -> Result<Column> {
    let codes = equal_frequency_bins(values, bins);
    let domain = codes.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); domain];
    for (&c, &v) in codes.iter().zip(values) {
        let r = &mut ranges[c as usize];
        r.0 = r.0.min(v);
        r.1 = r.1.max(v);
    }
    let labels = ranges
        .iter()
        .map(|&(lo, hi)| {
            if lo == hi {
                format!("{lo}")
            } else {
                format!("[{lo}, {hi}]")
            }
        })
        .collect();
    Column::new(name, codes, labels)
}
