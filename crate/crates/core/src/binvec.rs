//! Bit-packed binary vectors and binary weight matrices.
//!
//! A [`BinaryVector`] stores `len` bits in 64-bit words with the unused high
//! bits of the last word kept at zero, so derived equality and hashing are
//! exact. The popcount is cached at construction.
//!
//! A [`WeightMatrix`] keeps both its rows and its columns packed. Rows serve
//! the encoder overlap `z = w·x` and columns serve the decoder sum
//! `v = wᵀ·y`; both reduce to one AND + popcount per output entry.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::error::{check_dim, invalid, Error, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length {0,1} vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
    ones: usize,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
            ones: 0,
        }
    }

    /// All-ones vector of length `len`.
    pub fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; words_for(len)];
        mask_tail(&mut words, len);
        Self {
            len,
            words,
            ones: len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            v.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        v.recount();
        v
    }

    /// Vector of length `len` with ones at `indices` (duplicates allowed).
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Result<Self> {
        let mut v = Self::zeros(len);
        for i in indices {
            if i >= len {
                return Err(invalid(format!("index {i} out of range for length {len}")));
            }
            v.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        v.recount();
        Ok(v)
    }

    /// Builds a vector from packed words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Result<Self> {
        check_dim("BinaryVector::from_words", words_for(len), words.len())?;
        mask_tail(&mut words, len);
        let ones = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Self { len, words, ones })
    }

    /// The low `len` bits of `bits`, bit `i` at position `i`. `len ≤ 64`.
    pub fn from_u64(len: usize, bits: u64) -> Result<Self> {
        if len > WORD_BITS {
            return Err(invalid(format!("from_u64 supports at most 64 bits, got {len}")));
        }
        Self::from_words(len, if len == 0 { vec![] } else { vec![bits] })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + b)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// `popcount(self AND other)`; lengths must agree.
    pub fn and_count(&self, other: &Self) -> Result<usize> {
        check_dim("and_count", self.len, other.len)?;
        Ok(and_popcount(&self.words, &other.words))
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, "and", |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, "or", |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, "xor", |a, b| a ^ b)
    }

    /// Bitwise complement within `len`.
    pub fn not(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        mask_tail(&mut words, self.len);
        Self {
            len: self.len,
            words,
            ones: self.len - self.ones,
        }
    }

    fn zip_words(&self, other: &Self, context: &'static str, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        check_dim(context, self.len, other.len)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Self::from_words(self.len, words)
    }

    fn recount(&mut self) {
        self.ones = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }
}

fn mask_tail(words: &mut [u64], len: usize) {
    let rem = len % WORD_BITS;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

/// Parses a string of `0`/`1` characters, position 0 first.
impl FromStr for BinaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(invalid(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// Uniformly random vector with exactly `ones` set bits.
pub fn random_binary_vector<R: Rng + ?Sized>(length: usize, ones: usize, rng: &mut R) -> Result<BinaryVector> {
    if ones > length {
        return Err(invalid(format!("cannot place {ones} ones in a vector of length {length}")));
    }
    BinaryVector::from_indices(length, index::sample(rng, length, ones).into_iter())
}

/// Vector whose bits are independent Bernoulli(`p`) draws.
pub fn random_bernoulli_vector<R: Rng + ?Sized>(length: usize, p: f64, rng: &mut R) -> Result<BinaryVector> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("bernoulli probability {p} outside [0, 1]")));
    }
    let bits: Vec<bool> = (0..length).map(|_| rng.random_bool(p)).collect();
    Ok(BinaryVector::from_bools(&bits))
}

/// Number of positions where `x` and `y` differ.
pub fn hamming(x: &BinaryVector, y: &BinaryVector) -> Result<usize> {
    check_dim("hamming", x.len, y.len)?;
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}

/// Non-negative integer pre-activations, one per output unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OverlapVector(pub Vec<u32>);

impl OverlapVector {
    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl Index<usize> for OverlapVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for OverlapVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// `n_rows × n_cols` binary matrix with packed rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<BinaryVector>,
    cols: Vec<BinaryVector>,
}

impl WeightMatrix {
    pub fn from_rows(rows: Vec<BinaryVector>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(invalid("weight matrix needs at least one row"));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(invalid("weight matrix needs at least one column"));
        }
        for r in &rows {
            check_dim("WeightMatrix::from_rows", n_cols, r.len())?;
        }
        let cols = transpose_vectors(&rows, n_cols);
        Ok(Self {
            n_rows,
            n_cols,
            rows,
            cols,
        })
    }

    /// `n × n` identity: row `i` has its single one at column `i`.
    pub fn identity(n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|i| BinaryVector::from_indices(n, [i]))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &BinaryVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BinaryVector] {
        &self.rows
    }

    /// Column `j` as a vector of length `n_rows`.
    pub fn col(&self, j: usize) -> &BinaryVector {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Writes `popcount(row_i AND x)` for every row into `out`.
    pub fn overlaps_into(&self, x: &BinaryVector, out: &mut Vec<u32>) -> Result<()> {
        check_dim("overlaps", self.n_cols, x.len())?;
        out.clear();
        out.extend(self.rows.iter().map(|r| and_popcount(&r.words, &x.words) as u32));
        Ok(())
    }

    /// Writes `Σ_{i: y_i=1} w_ij` for every column `j` into `out`.
    pub fn transpose_overlaps_into(&self, y: &BinaryVector, out: &mut Vec<u32>) -> Result<()> {
        check_dim("transpose_overlaps", self.n_rows, y.len())?;
        out.clear();
        out.extend(self.cols.iter().map(|c| and_popcount(&c.words, &y.words) as u32));
        Ok(())
    }
}

fn transpose_vectors(rows: &[BinaryVector], n_cols: usize) -> Vec<BinaryVector> {
    let n_rows = rows.len();
    let mut cols: Vec<Vec<u64>> = vec![vec![0; words_for(n_rows)]; n_cols];
    for (i, r) in rows.iter().enumerate() {
        for j in r.iter_ones() {
            cols[j][i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
    }
    cols.into_iter()
        .map(|w| BinaryVector::from_words(n_rows, w).expect("column word count"))
        .collect()
}

/// Random matrix whose rows each hold exactly `a_w` ones, sampled independently.
pub fn random_weight_matrix<R: Rng + ?Sized>(n_rows: usize, n_cols: usize, a_w: usize, rng: &mut R) -> Result<WeightMatrix> {
    if n_rows == 0 || n_cols == 0 {
        return Err(invalid("weight matrix dimensions must be at least 1"));
    }
    if a_w > n_cols {
        return Err(invalid(format!("a_w = {a_w} exceeds row length {n_cols}")));
    }
    let rows = (0..n_rows)
        .map(|_| random_binary_vector(n_cols, a_w, rng))
        .collect::<Result<Vec<_>>>()?;
    WeightMatrix::from_rows(rows)
}

/// Random matrix with i.i.d. Bernoulli(`p`) entries; the comparison baseline
/// for fixed-count rows.
pub fn random_bernoulli_matrix<R: Rng + ?Sized>(n_rows: usize, n_cols: usize, p: f64, rng: &mut R) -> Result<WeightMatrix> {
    if n_rows == 0 || n_cols == 0 {
        return Err(invalid("weight matrix dimensions must be at least 1"));
    }
    let rows = (0..n_rows)
        .map(|_| random_bernoulli_vector(n_cols, p, rng))
        .collect::<Result<Vec<_>>>()?;
    WeightMatrix::from_rows(rows)
}

/// `z = w·x`.
pub fn overlaps(w: &WeightMatrix, x: &BinaryVector) -> Result<OverlapVector> {
    let mut out = Vec::with_capacity(w.n_rows);
    w.overlaps_into(x, &mut out)?;
    Ok(OverlapVector(out))
}

/// `v = wᵀ·y`, the column sums of the rows selected by `y`.
pub fn transpose_overlaps(w: &WeightMatrix, y: &BinaryVector) -> Result<OverlapVector> {
    let mut out = Vec::with_capacity(w.n_cols);
    w.transpose_overlaps_into(y, &mut out)?;
    Ok(OverlapVector(out))
}
