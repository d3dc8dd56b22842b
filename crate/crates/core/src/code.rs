//! Linear codes and their exhaustive weight and minimality sweeps.
//!
//! A [`LinearCode`] is a full row rank `K x N` generator matrix over a
//! small field; messages are row vectors and codewords are `m G`. Two
//! independent strategies compute the weight distribution: enumerating all
//! `q^K` messages, or enumerating the `(q^K - 1) / (q - 1)` proportionality
//! classes of functionals and counting zero columns per class. They must
//! agree exactly, which makes the pair a useful cross-check.
//!
//! Functional classes run in a fixed order: the normalized representatives
//! with first nonzero entry one, grouped by the position of that entry,
//! each group in counting order with the last coordinate varying fastest.
//! A nonzero codeword `m G` is minimal exactly when the columns of `G`
//! annihilated by `m` span the full hyperplane `ker m`, that is have rank
//! `K - 1`; the witness reported for a non-minimal code is the first class
//! in this order that fails, so witnesses are stable across runs and
//! thread counts.
//!
//! Sweeps run in parallel on the global thread pool. All merges are
//! commutative counts or index minima, so results are identical for any
//! number of threads.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::embed::ProjectiveSystem;
use crate::gf::{Fe, Field};
use crate::linalg::{LinalgError, Matrix};
use crate::Caps;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("generator matrix has rank {rank}, expected full row rank {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("generator matrix must have at least one row and one column")]
    Empty,
    #[error("the zero message indexes no codeword class")]
    ZeroMessage,
    #[error("message has length {got}, expected {want}")]
    MessageLength { got: usize, want: usize },
    #[error("{what} needs {needed} steps, over the cap of {cap}")]
    CapExceeded { what: &'static str, needed: BigUint, cap: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How to compute a weight distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerate all `q^K` messages.
    MessageEnum,
    /// Enumerate functional classes and count zero columns.
    HyperplaneCount,
}

/// Weight distribution of a code, including the zero word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn from_counts(counts: BTreeMap<u64, BigUint>) -> WeightDistribution {
        WeightDistribution { counts }
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigUint> {
        &self.counts
    }

    /// Smallest nonzero weight.
    pub fn min_distance(&self) -> Option<u64> {
        self.counts.keys().find(|&&w| w > 0).copied()
    }

    /// Second smallest nonzero weight.
    pub fn second_weight(&self) -> Option<u64> {
        self.counts.keys().filter(|&&w| w > 0).nth(1).copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.counts.keys().filter(|&&w| w > 0).max().copied()
    }

    pub fn count_at(&self, w: u64) -> BigUint {
        self.counts.get(&w).cloned().unwrap_or_default()
    }

    /// Total number of words counted; always `q^K` for a full sweep.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }
}

/// Outcome of a minimality sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityReport {
    /// Every nonzero codeword is minimal.
    pub minimal: bool,
    /// Normalized representative of the first failing functional class.
    pub witness: Option<Vec<Fe>>,
    /// Index of the witness in the class enumeration.
    pub witness_class: Option<u64>,
    /// Total number of functional classes of the code.
    pub num_classes: u64,
}

/// A linear `[N, K]` code presented by a full row rank generator matrix.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Arc<Field>,
    generator: Matrix,
}

impl LinearCode {
    pub fn new(generator: Matrix) -> Result<LinearCode, CodeError> {
        if generator.rows() == 0 || generator.cols() == 0 {
            return Err(CodeError::Empty);
        }
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(CodeError::RankDeficient { rank, k: generator.rows() });
        }
        Ok(LinearCode { field: generator.field().clone(), generator })
    }

    /// The code generated by the coordinates of a projective system; its
    /// generator is full rank by construction.
    pub fn from_system(sys: &ProjectiveSystem) -> LinearCode {
        let generator = sys.generator_matrix();
        LinearCode { field: sys.field().clone(), generator }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn encode(&self, m: &[Fe]) -> Result<Vec<Fe>, CodeError> {
        if m.len() != self.k() {
            return Err(CodeError::MessageLength { got: m.len(), want: self.k() });
        }
        Ok(self.generator.apply_left(m)?)
    }

    /// Number of proportionality classes of nonzero messages.
    pub fn num_classes(&self) -> BigUint {
        classes_count(self.field.q() as u64, self.k() as u32)
    }

    /// Number of messages, `q^K`.
    pub fn num_messages(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.k() as u32)
    }

    fn checked_classes(&self, caps: &Caps, what: &'static str) -> Result<u64, CodeError> {
        let needed = self.num_classes();
        if needed > BigUint::from(caps.max_classes) {
            return Err(CodeError::CapExceeded { what, needed, cap: caps.max_classes });
        }
        Ok(u64::try_from(&needed).expect("bounded by the cap"))
    }

    /// Exhaustive weight distribution with the chosen strategy.
    pub fn weight_distribution(
        &self,
        strategy: Strategy,
        caps: &Caps,
    ) -> Result<WeightDistribution, CodeError> {
        match strategy {
            Strategy::MessageEnum => self.distribution_by_messages(caps),
            Strategy::HyperplaneCount => self.distribution_by_classes(caps),
        }
    }

    /// Minimum distance, read from a hyperplane-count sweep.
    pub fn minimum_distance(&self, caps: &Caps) -> Result<u64, CodeError> {
        let dist = self.distribution_by_classes(caps)?;
        Ok(dist.min_distance().expect("a full rank code has nonzero words"))
    }

    fn distribution_by_messages(&self, caps: &Caps) -> Result<WeightDistribution, CodeError> {
        let needed = self.num_messages();
        if needed > BigUint::from(caps.max_messages) {
            return Err(CodeError::CapExceeded {
                what: "message enumeration",
                needed,
                cap: caps.max_messages,
            });
        }
        let total = u64::try_from(&needed).expect("bounded by the cap");
        let counts = if self.field.q() == 2 {
            self.message_sweep_gray(total)
        } else {
            self.message_sweep_odometer(total)
        };
        Ok(finish_counts(counts))
    }

    /// Gray code walk over all binary messages; each step flips one row.
    fn message_sweep_gray(&self, total: u64) -> BTreeMap<u64, u64> {
        let n = self.n();
        let words = n.div_ceil(64);
        let rows: Vec<Vec<u64>> = (0..self.k())
            .map(|r| {
                let mut bits = vec![0u64; words];
                for (j, e) in self.generator.row(r).iter().enumerate() {
                    if !e.is_zero() {
                        bits[j >> 6] |= 1u64 << (j & 63);
                    }
                }
                bits
            })
            .collect();

        let chunk: u64 = 1 << 16;
        let n_chunks = total.div_ceil(chunk);
        (0..n_chunks)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, ci| {
                let start = ci * chunk;
                let end = (start + chunk).min(total);
                let mut word = vec![0u64; words];
                let gray = start ^ (start >> 1);
                for r in 0..self.k() {
                    if gray >> r & 1 == 1 {
                        for (w, rw) in word.iter_mut().zip(&rows[r]) {
                            *w ^= rw;
                        }
                    }
                }
                let weight =
                    |w: &[u64]| w.iter().map(|x| x.count_ones() as u64).sum::<u64>();
                *acc.entry(weight(&word)).or_default() += 1;
                for i in (start + 1)..end {
                    let r = i.trailing_zeros() as usize;
                    for (w, rw) in word.iter_mut().zip(&rows[r]) {
                        *w ^= rw;
                    }
                    *acc.entry(weight(&word)).or_default() += 1;
                }
                acc
            })
            .reduce(BTreeMap::new, merge_counts)
    }

    /// Mixed radix odometer over all messages. Advancing digit `j` from
    /// element index `a` to `a + 1` changes the word by a fixed multiple
    /// of row `j`; those delta rows are precomputed per digit value, with
    /// the wrap delta closing the cycle back to zero on a carry.
    fn message_sweep_odometer(&self, total: u64) -> BTreeMap<u64, u64> {
        let f = &self.field;
        let q = f.q() as u64;
        let k = self.k();
        let n = self.n();
        let rows: Vec<&[Fe]> = (0..k).map(|r| self.generator.row(r)).collect();
        // delta_rows[j][a] = (element(a + 1 mod q) - element(a)) * row_j.
        let delta_rows: Vec<Vec<Vec<Fe>>> = (0..k)
            .map(|j| {
                (0..q as u32)
                    .map(|a| {
                        let next = Fe(if a + 1 == q as u32 { 0 } else { a + 1 });
                        let delta = f.sub(next, Fe(a));
                        rows[j].iter().map(|&g| f.mul(delta, g)).collect()
                    })
                    .collect()
            })
            .collect();

        let chunk: u64 = 1 << 14;
        let n_chunks = total.div_ceil(chunk);
        (0..n_chunks)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, ci| {
                let start = ci * chunk;
                let end = (start + chunk).min(total);
                //

                let mut digits = vec![0u32; k];
                let mut rem = start;
                for d in digits.iter_mut() {
                    *d = (rem % q) as u32;
                    rem /= q;
                }
                let mut word = vec![Fe::ZERO; n];
                for (r, &d) in digits.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let c = Fe(d);
                    for (w, &g) in word.iter_mut().zip(rows[r]) {
                        *w = f.add(*w, f.mul(c, g));
                    }
                }
                let weight = |w: &[Fe]| w.iter().filter(|e| !e.is_zero()).count() as u64;
                *acc.entry(weight(&word)).or_default() += 1;
                for _ in (start + 1)..end {
                    let mut j = 0usize;
                    loop {
                        let a = digits[j] as usize;
                        for (w, &g) in word.iter_mut().zip(&delta_rows[j][a]) {
                            *w = f.add(*w, g);
                        }
                        digits[j] += 1;
                        if (digits[j] as u64) < q {
                            break;
                        }
                        digits[j] = 0;
                        j += 1;
                    }
                    *acc.entry(weight(&word)).or_default() += 1;
                }
                acc
            })
            .reduce(BTreeMap::new, merge_counts)
    }

    fn distribution_by_classes(&self, caps: &Caps) -> Result<WeightDistribution, CodeError> {
        let total = self.checked_classes(caps, "hyperplane class enumeration")?;
        let q = self.field.q() as u64;
        let n = self.n() as u64;
        let class_weights: BTreeMap<u64, u64> = match self.packed_binary_columns() {
            Some(cols) => {
                let k = self.k() as u32;
                par_class_counts(total, |c| {
                    let m = class_bits(k, c);
                    let zeros =
                        cols.iter().filter(|&&col| (col & m).count_ones() & 1 == 0).count();
                    n - zeros as u64
                })
            }
            None => {
                let cols = self.columns();
                let f = self.field.clone();
                let k = self.k() as u32;
                par_class_counts(total, move |c| {
                    let m = class_digits(q, k, c);
                    let zeros = cols
                        .iter()
                        .filter(|col| dot_digits(&f, &m, col).is_zero())
                        .count();
                    n - zeros as u64
                })
            }
        };
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for (w, classes) in class_weights {
            assert!(w > 0, "a full rank code has no vanishing class");
            counts.insert(w, classes * (q - 1));
        }
        *counts.entry(0).or_default() += 1;
        Ok(finish_counts(counts))
    }

    /// Exhaustive minimality sweep over functional classes.
    ///
    /// A class `m` passes when the columns annihilated by `m` have rank
    /// `K - 1`. The report carries the first failing class, if any.
    pub fn minimality(&self, caps: &Caps) -> Result<MinimalityReport, CodeError> {
        let total = self.checked_classes(caps, "minimality sweep")?;
        let k = self.k();
        let q = self.field.q() as u64;

        let first_fail: Option<u64> = match self.packed_binary_columns() {
            Some(cols) => {
                let kb = k as u32;
                par_first_failure(total, move |c| {
                    let m = class_bits(kb, c);
                    let mut basis = [0u64; 64];
                    let mut rank = 0usize;
                    for &col in &cols {
                        if (col & m).count_ones() & 1 != 0 {
                            continue;
                        }
                        let mut v = col;
                        while v != 0 {
                            let lead = 63 - v.leading_zeros() as usize;
                            if basis[lead] == 0 {
                                basis[lead] = v;
                                rank += 1;
                                break;
                            }
                            v ^= basis[lead];
                        }
                        if rank == k - 1 {
                            break;
                        }
                    }
                    rank < k - 1
                })
            }
            None => {
                let cols = self.columns();
                let f = self.field.clone();
                let kb = k as u32;
                par_first_failure(total, move |c| {
                    let m = class_digits(q, kb, c);
                    let mut basis: Vec<Vec<Fe>> = Vec::with_capacity(k - 1);
                    let mut pivots: Vec<usize> = Vec::with_capacity(k - 1);
                    for col in &cols {
                        if !dot_digits(&f, &m, col).is_zero() {
                            continue;
                        }
                        let mut v = col.clone();
                        for (row, &pc) in pivots.iter().enumerate() {
                            if v[pc].is_zero() {
                                continue;
                            }
                            let c = v[pc];
                            for (x, &b) in v.iter_mut().zip(&basis[row]) {
                                *x = f.sub(*x, f.mul(c, b));
                            }
                        }
                        let Some(lead) = v.iter().position(|e| !e.is_zero()) else {
                            continue;
                        };
                        let inv = f.inv(v[lead]).expect("lead entry is nonzero");
                        for x in v.iter_mut() {
                            *x = f.mul(inv, *x);
                        }
                        basis.push(v);
                        pivots.push(lead);
                        if basis.len() == k - 1 {
                            break;
                        }
                    }
                    basis.len() < k - 1
                })
            }
        };

        Ok(match first_fail {
            None => MinimalityReport {
                minimal: true,
                witness: None,
                witness_class: None,
                num_classes: total,
            },
            Some(c) => MinimalityReport {
                minimal: false,
                witness: Some(
                    class_digits(q, k as u32, c).into_iter().map(Fe).collect(),
                ),
                witness_class: Some(c),
                num_classes: total,
            },
        })
    }

    /// Minimality of a single codeword, checked directly against the
    /// definition: the only nonzero codewords whose support lies inside
    /// `supp(m G)` must be its scalar multiples.
    pub fn is_minimal_codeword(&self, m: &[Fe], caps: &Caps) -> Result<bool, CodeError> {
        if m.len() != self.k() {
            return Err(CodeError::MessageLength { got: m.len(), want: self.k() });
        }
        if m.iter().all(|e| e.is_zero()) {
            return Err(CodeError::ZeroMessage);
        }
        let total = self.checked_classes(caps, "codeword minimality check")?;
        let word = self.encode(m)?;
        let support: Vec<bool> = word.iter().map(|e| !e.is_zero()).collect();
        // Normalize m to its class representative.
        let mut rep = m.to_vec();
        crate::linalg::normalize_projective(&self.field, &mut rep)
            .expect("message is nonzero");
        let q = self.field.q() as u64;
        let k = self.k() as u32;
        for c in 0..total {
            let other: Vec<Fe> =
                class_digits(q, k, c).into_iter().map(Fe).collect();
            if other == rep {
                continue;
            }
            let w = self.encode(&other)?;
            let contained = w
                .iter()
                .enumerate()
                .all(|(j, e)| e.is_zero() || support[j]);
            if contained {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Column `j` as a vector of length `K`, for all columns.
    fn columns(&self) -> Vec<Vec<Fe>> {
        (0..self.n())
            .map(|j| (0..self.k()).map(|r| self.generator.get(r, j)).collect())
            .collect()
    }

    /// Columns packed into single words, available for binary codes.
    fn packed_binary_columns(&self) -> Option<Vec<u64>> {
        if self.field.q() != 2 || self.k() > 64 {
            return None;
        }
        Some(
            (0..self.n())
                .map(|j| {
                    let mut bits = 0u64;
                    for r in 0..self.k() {
                        if !self.generator.get(r, j).is_zero() {
                            bits |= 1 << r;
                        }
                    }
                    bits
                })
                .collect(),
        )
    }
}

/// `(q^k - 1) / (q - 1)`: the number of functional classes.
pub fn classes_count(q: u64, k: u32) -> BigUint {
    let q = BigUint::from(q);
    (q.pow(k) - BigUint::one()) / (q - BigUint::one())
}

/// The normalized representative of class `index` as digit values: zeros,
/// then a one, then the remaining digits in counting order with the last
/// coordinate fastest.
fn class_digits(q: u64, k: u32, index: u64) -> Vec<u32> {
    let mut idx = index;
    for t in 0..k {
        let block = q.pow(k - 1 - t);
        if idx >= block {
            idx -= block;
            continue;
        }
        let mut v = vec![0u32; k as usize];
        v[t as usize] = 1;
        let mut rem = idx;
        for pos in ((t + 1)..k).rev() {
            v[pos as usize] = (rem % q) as u32;
            rem /= q;
        }
        return v;
    }
    panic!("class index {index} out of range");
}

/// Binary class representative packed into one word, bit `r` for entry `r`.
fn class_bits(k: u32, index: u64) -> u64 {
    let digits = class_digits(2, k, index);
    let mut bits = 0u64;
    for (r, &d) in digits.iter().enumerate() {
        if d == 1 {
            bits |= 1 << r;
        }
    }
    bits
}

fn dot_digits(f: &Field, m: &[u32], col: &[Fe]) -> Fe {
    let mut acc = Fe::ZERO;
    for (&a, &b) in m.iter().zip(col) {
        if a == 0 || b.is_zero() {
            continue;
        }
        acc = f.add(acc, f.mul(Fe(a), b));
    }
    acc
}

/// Parallel map-count over all classes: `weight_of` gives the weight of
/// each class, the result histograms classes by weight.
fn par_class_counts(
    total: u64,
    weight_of: impl Fn(u64) -> u64 + Sync,
) -> BTreeMap<u64, u64> {
    let chunk: u64 = 4096;
    let n_chunks = total.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, ci| {
            let start = ci * chunk;
            let end = (start + chunk).min(total);
            for c in start..end {
                *acc.entry(weight_of(c)).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, merge_counts)
}

/// Parallel search for the smallest class index where `fails` holds.
/// Later chunks are skipped once an earlier failure is known, which never
/// changes the minimum returned.
fn par_first_failure(total: u64, fails: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    let chunk: u64 = 4096;
    let n_chunks = total.div_ceil(chunk);
    let best = AtomicU64::new(u64::MAX);
    (0..n_chunks)
        .into_par_iter()
        .filter_map(|ci| {
            let start = ci * chunk;
            if start > best.load(Ordering::Relaxed) {
                return None;
            }
            let end = (start + chunk).min(total);
            for c in start..end {
                if fails(c) {
                    best.fetch_min(c, Ordering::Relaxed);
                    return Some(c);
                }
            }
            None
        })
        .min()
}

fn merge_counts(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (w, c) in b {
        *a.entry(w).or_default() += c;
    }
    a
}

fn finish_counts(counts: BTreeMap<u64, u64>) -> WeightDistribution {
    WeightDistribution {
        counts: counts.into_iter().map(|(w, c)| (w, BigUint::from(c))).collect(),
    }
}

/// The sufficient minimality bound: every nonzero word is minimal when
/// `w_min / w_max > (q - 1) / q`. Returns `None` for a distribution with
/// no nonzero weights.
pub fn ab_bound_satisfied(dist: &WeightDistribution, q: u32) -> Option<bool> {
    let w_min = dist.min_distance()?;
    let w_max = dist.max_weight()?;
    Some((q as u128) * (w_min as u128) > (q as u128 - 1) * (w_max as u128))
}
