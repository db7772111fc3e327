//! Constant-weight codes over an `n`-element pool of constituents.
//!
//! A codeword is a sorted `k`-subset of `0..n`; distances are sizes of
//! symmetric differences. Decoding is exhaustive minimum-distance search and
//! reports ties instead of breaking them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("codeword is empty")]
    EmptyCodeword,
    #[error("index {index} out of range for pool of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("codeword {codeword} has weight {found}, expected {expected}")]
    WrongWeight {
        codeword: Codeword,
        found: usize,
        expected: usize,
    },
    #[error("codeword {0} appears twice")]
    DuplicateCodeword(Codeword),
    #[error("weight {k} is invalid for pool size {n}")]
    BadParameters { n: usize, k: usize },
    #[error("minimum distance needs at least two codewords")]
    TooFewCodewords,
    #[error("declared minimum distance {declared} but codewords give {actual:?}")]
    DistanceMismatch {
        declared: usize,
        actual: Option<usize>,
    },
    #[error("code is empty")]
    EmptyCode,
    #[error("received {found} symbols, code weight is {k}")]
    ReceivedTooLong { found: usize, k: usize },
    #[error("puncturing needs minimum distance > 2, code has {0}")]
    DistanceTooSmall(usize),
    #[error("puncturing needs weight >= 2")]
    WeightTooSmall,
    #[error("field size q = {q} must exceed pool size n = {n}")]
    FieldTooSmall { q: u64, n: usize },
}

/// A strictly increasing list of constituent indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Codeword(Vec<usize>);

impl Codeword {
    /// Sorts the input; rejects empty sets, duplicates and indices `>= n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, CodeError> {
        if indices.is_empty() {
            return Err(CodeError::EmptyCodeword);
        }
        indices.sort_unstable();
        check_sorted_set(&indices, n)?;
        Ok(Codeword(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// Indices shifted to 1-based labels for display.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Codeword::new(v, usize::MAX).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn check_sorted_set(indices: &[usize], n: usize) -> Result<(), CodeError> {
    for w in indices.windows(2) {
        if w[0] == w[1] {
            return Err(CodeError::DuplicateIndex(w[0]));
        }
    }
    match indices.last() {
        Some(&index) if index >= n => Err(CodeError::IndexOutOfRange { index, n }),
        _ => Ok(()),
    }
}

/// What the sink hands to the decoder: at most `k` distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReceivedSet(Vec<usize>);

impl ReceivedSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, CodeError> {
        indices.sort_unstable();
        check_sorted_set(&indices, n)?;
        Ok(ReceivedSet(indices))
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
}

impl From<&Codeword> for ReceivedSet {
    fn from(c: &Codeword) -> Self {
        ReceivedSet(c.0.clone())
    }
}

/// `|A \ B| + |B \ A|` for two sorted, duplicate-free slices.
pub fn symmetric_distance(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// The guarantee `2(2t + e) < d_min`: each substituted constituent moves the
/// received set 2 away from the transmitted codeword, each missing one 1.
pub fn correction_guaranteed(d_min: usize, errors: usize, erasures: usize) -> bool {
    2 * (2 * errors + erasures) < d_min
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "codewords")]
pub enum DecodeOutcome {
    Decoded(Codeword),
    /// Several codewords share the minimum distance; a detected error.
    Ambiguous(Vec<Codeword>),
}

/// An `(n, k, N, d)` constant-weight code with its codewords kept in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantWeightCode {
    n: usize,
    k: usize,
    codewords: Vec<Codeword>,
    d_min: Option<usize>,
}

impl ConstantWeightCode {
    pub fn new(n: usize, k: usize, mut codewords: Vec<Codeword>) -> Result<Self, CodeError> {
        if k == 0 || k > n {
            return Err(CodeError::BadParameters { n, k });
        }
        for c in &codewords {
            if c.weight() != k {
                return Err(CodeError::WrongWeight {
                    codeword: c.clone(),
                    found: c.weight(),
                    expected: k,
                });
            }
            check_sorted_set(&c.0, n)?;
        }
        codewords.sort();
        if let Some(w) = codewords.windows(2).find(|w| w[0] == w[1]) {
            return Err(CodeError::DuplicateCodeword(w[0].clone()));
        }
        let d_min = pairwise_min_distance(&codewords);
        Ok(ConstantWeightCode {
            n,
            k,
            codewords,
            d_min,
        })
    }

    /// Convenience constructor from raw index lists.
    pub fn from_indices<I, C>(n: usize, k: usize, codewords: I) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<usize>>,
    {
        let cws = codewords
            .into_iter()
            .map(|c| Codeword::new(c.into(), n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, k, cws)
    }

    /// The optimal `(7,4,4)` code on seven constituents, 0-based.
    pub fn example_7_4_4() -> Self {
        Self::from_indices(
            7,
            4,
            [
                vec![0, 1, 2, 5],
                vec![0, 1, 3, 4],
                vec![0, 2, 3, 6],
                vec![0, 4, 5, 6],
                vec![1, 2, 4, 6],
                vec![1, 3, 5, 6],
                vec![2, 3, 4, 5],
            ],
        )
        .expect("valid example code")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn min_distance(&self) -> Result<usize, CodeError> {
        self.d_min.ok_or(CodeError::TooFewCodewords)
    }

    pub fn correctable(&self, errors: usize, erasures: usize) -> Result<bool, CodeError> {
        Ok(correction_guaranteed(self.min_distance()?, errors, erasures))
    }

    /// Exhaustive minimum-distance decoding.
    pub fn decode(&self, received: &ReceivedSet) -> Result<DecodeOutcome, CodeError> {
        if self.codewords.is_empty() {
            return Err(CodeError::EmptyCode);
        }
        if received.len() > self.k {
            return Err(CodeError::ReceivedTooLong {
                found: received.len(),
                k: self.k,
            });
        }
        check_sorted_set(&received.0, self.n)?;
        let mut best = usize::MAX;
        let mut ties: Vec<&Codeword> = Vec::new();
        for c in &self.codewords {
            let d = symmetric_distance(&received.0, &c.0);
            match d.cmp(&best) {
                Ordering::Less => {
                    best = d;
                    ties.clear();
                    ties.push(c);
                }
                Ordering::Equal => ties.push(c),
                Ordering::Greater => {}
            }
        }
        Ok(if ties.len() == 1 {
            DecodeOutcome::Decoded(ties[0].clone())
        } else {
            DecodeOutcome::Ambiguous(ties.into_iter().cloned().collect())
        })
    }

    /// Deletes constituent `removed` (default `n - 1`). Codewords containing
    /// it lose it; the others drop their largest index. Indices above
    /// `removed` shift down by one so the result lives on `0..n-1`.
    pub fn puncture(&self, removed: Option<usize>) -> Result<ConstantWeightCode, CodeError> {
        if self.k < 2 {
            return Err(CodeError::WeightTooSmall);
        }
        let removed = removed.unwrap_or(self.n - 1);
        if removed >= self.n {
            return Err(CodeError::IndexOutOfRange {
                index: removed,
                n: self.n,
            });
        }
        if let Some(d) = self.d_min {
            if d <= 2 {
                return Err(CodeError::DistanceTooSmall(d));
            }
        }
        let punctured = self
            .codewords
            .iter()
            .map(|c| {
                let mut v = c.0.clone();
                match v.binary_search(&removed) {
                    Ok(pos) => {
                        v.remove(pos);
                    }
                    Err(_) => {
                        v.pop();
                    }
                }
                for x in &mut v {
                    if *x > removed {
                        *x -= 1;
                    }
                }
                Codeword(v)
            })
            .collect();
        ConstantWeightCode::new(self.n - 1, self.k - 1, punctured)
    }

    /// `log_q(N) / k`.
    pub fn rate(&self, q: u64) -> Result<f64, CodeError> {
        if q as u128 <= self.n as u128 {
            return Err(CodeError::FieldTooSmall { q, n: self.n });
        }
        if self.codewords.is_empty() {
            return Err(CodeError::EmptyCode);
        }
        Ok((self.len() as f64).ln() / (q as f64).ln() / self.k as f64)
    }
}

fn pairwise_min_distance(codewords: &[Codeword]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in codewords.iter().enumerate() {
        for b in &codewords[i + 1..] {
            let d = symmetric_distance(&a.0, &b.0);
            best = Some(best.map_or(d, |x| x.min(d)));
        }
    }
    best
}

/// On-disk code catalog. `d` is `null` for codes with fewer than two
/// codewords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCatalog {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub d: Option<usize>,
    pub codewords: Vec<Vec<usize>>,
}

impl From<&ConstantWeightCode> for CodeCatalog {
    fn from(code: &ConstantWeightCode) -> Self {
        CodeCatalog {
            n: code.n,
            k: code.k,
            d: code.d_min,
            codewords: code.codewords.iter().map(|c| c.0.clone()).collect(),
        }
    }
}

impl TryFrom<CodeCatalog> for ConstantWeightCode {
    type Error = CodeError;

    fn try_from(cat: CodeCatalog) -> Result<Self, CodeError> {
        let code = ConstantWeightCode::from_indices(cat.n, cat.k, cat.codewords)?;
        if let Some(declared) = cat.d {
            if code.d_min != Some(declared) {
                return Err(CodeError::DistanceMismatch {
                    declared,
                    actual: code.d_min,
                });
            }
        }
        Ok(code)
    }
}

impl Serialize for ConstantWeightCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CodeCatalog::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConstantWeightCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let cat = CodeCatalog::deserialize(d)?;
        ConstantWeightCode::try_from(cat).map_err(serde::de::Error::custom)
    }
}
