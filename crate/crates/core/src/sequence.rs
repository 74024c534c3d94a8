//! Quotients of finitely supported sequences by the two infinite groups that
//! act on their index set: all permutations (multiset semantics) and integer
//! translation.
//!
//! Orbit closures under all permutations are classes of supports in bijection
//! with equal values, so distances reduce to an assignment problem where every
//! entry may alternatively be matched to an absent (zero) position.

use serde::{Deserialize, Serialize};

use crate::assignment;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist_sq, dot, norm_sq};

/// Blocks with norm at or below this are treated as absent.
pub const ZERO_BLOCK_TOL: f64 = 1e-14;

/// A finitely supported sequence of vectors in `R^d`, indexed by integers.
///
/// Entries are kept sorted by index with no repeated indices and no zero blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseSeqFile", into = "SparseSeqFile")]
pub struct SparseSeq {
    d: usize,
    entries: Vec<(i64, Vec<f64>)>,
}

/// On-disk layout: `{"d": int, "entries": [[index, [values]]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseSeqFile {
    pub d: usize,
    pub entries: Vec<(i64, Vec<f64>)>,
}

impl TryFrom<SparseSeqFile> for SparseSeq {
    type Error = Error;
    fn try_from(f: SparseSeqFile) -> Result<Self> {
        SparseSeq::new(f.d, f.entries)
    }
}

impl From<SparseSeq> for SparseSeqFile {
    fn from(s: SparseSeq) -> Self {
        SparseSeqFile { d: s.d, entries: s.entries }
    }
}

impl SparseSeq {
    pub fn new(d: usize, mut entries: Vec<(i64, Vec<f64>)>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("block dimension must be positive".into()));
        }
        for (_, v) in &entries {
            check_dim(d, v.len())?;
        }
        entries.sort_by_key(|(i, _)| *i);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("repeated index in sparse sequence".into()));
        }
        entries.retain(|(_, v)| norm_sq(v).sqrt() > ZERO_BLOCK_TOL);
        Ok(SparseSeq { d, entries })
    }

    pub fn empty(d: usize) -> Self {
        SparseSeq { d: d.max(1), entries: Vec::new() }
    }

    /// Scalar sequence with `values[k]` at index `start + k`.
    pub fn from_scalars(start: i64, values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(k, &v)| (start + k as i64, vec![v]))
            .collect();
        SparseSeq::new(1, entries).expect("scalar entries are well formed")
    }

    /// Sequence of `R^d` blocks read from a flat slice, starting at index 0.
    pub fn from_blocks(d: usize, flat: &[f64]) -> Result<Self> {
        if d == 0 || !flat.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch { expected: d, got: flat.len() });
        }
        let entries = flat
            .chunks_exact(d)
            .enumerate()
            .map(|(k, c)| (k as i64, c.to_vec()))
            .collect();
        SparseSeq::new(d, entries)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[(i64, Vec<f64>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<i64> {
        self.entries.iter().map(|(i, _)| *i).collect()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: i64) -> Option<&[f64]> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| self.entries[k].1.as_slice())
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, v)| norm_sq(v)).sum()
    }

    /// Translates every index by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        SparseSeq {
            d: self.d,
            entries: self.entries.iter().map(|(i, v)| (i + k, v.clone())).collect(),
        }
    }

    /// Same values placed on a new list of indices (one per entry).
    pub fn reindexed(&self, indices: &[i64]) -> Result<Self> {
        check_dim(self.entries.len(), indices.len())?;
        let entries = self
            .entries
            .iter()
            .zip(indices)
            .map(|(e, &i)| (i, e.1.clone()))
            .collect();
        SparseSeq::new(self.d, entries)
    }

    /// Dense values on `[lo, hi]` as a flat block array.
    fn dense_window(&self, lo: i64, hi: i64) -> Vec<f64> {
        let len = (hi - lo + 1).max(0) as usize;
        let mut out = vec![0.0; len * self.d];
        for (i, v) in &self.entries {
            if *i >= lo && *i <= hi {
                let at = (*i - lo) as usize * self.d;
                out[at..at + self.d].copy_from_slice(v);
            }
        }
        out
    }
}

/// Plain ℓ² distance between two sequences, index by index.
pub fn aligned_distance(x: &SparseSeq, y: &SparseSeq) -> Result<f64> {
    check_dim(x.d, y.d)?;
    let mut total = 0.0;
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&x.entries, &y.entries);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            total += norm_sq(&a[i].1);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            total += norm_sq(&b[j].1);
            j += 1;
        } else {
            total += dist_sq(&a[i].1, &b[j].1);
            i += 1;
            j += 1;
        }
    }
    Ok(total.sqrt())
}

/// Cost matrix of the padded assignment between the values of `x` and `y`.
///
/// Rows are the `m` values of `x` followed by `k` zero slots; columns are the
/// `k` values of `y` followed by `m` zero slots.
pub fn multiset_cost_matrix(x: &SparseSeq, y: &SparseSeq) -> Vec<Vec<f64>> {
    let m = x.len();
    let k = y.len();
    let size = m + k;
    let mut cost = vec![vec![0.0; size]; size];
    for (r, row) in cost.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = match (r < m, c < k) {
                (true, true) => dist_sq(&x.entries[r].1, &y.entries[c].1),
                (true, false) => norm_sq(&x.entries[r].1),
                (false, true) => norm_sq(&y.entries[c].1),
                (false, false) => 0.0,
            };
        }
    }
    cost
}

/// Distance between `[x]` and `[y]` modulo all permutations of the index set.
pub fn multiset_distance(x: &SparseSeq, y: &SparseSeq) -> Result<f64> {
    check_dim(x.d, y.d)?;
    if x.is_empty() && y.is_empty() {
        return Ok(0.0);
    }
    let cost = multiset_cost_matrix(x, y);
    Ok(assignment::min_cost(&cost).max(0.0).sqrt())
}

/// Max filter modulo all permutations: the best achievable inner product.
pub fn multiset_max_filter(x: &SparseSeq, y: &SparseSeq) -> Result<f64> {
    let d = multiset_distance(x, y)?;
    Ok(0.5 * (x.norm_sq() + y.norm_sq() - d * d))
}

/// Sorting embedding for scalar sequences.
///
/// With 1-based output positions, position `2k` carries the `k`-th largest
/// positive entry and position `2k-1` carries minus the `k`-th largest
/// magnitude among negative entries. Ties keep the original index order.
pub fn sort_embed(x: &SparseSeq) -> Result<SparseSeq> {
    if x.d != 1 {
        return Err(Error::UnsupportedDimension(x.d));
    }
    let mut pos: Vec<f64> = x.entries.iter().map(|(_, v)| v[0]).filter(|v| *v > 0.0).collect();
    let mut neg: Vec<f64> = x.entries.iter().map(|(_, v)| -v[0]).filter(|v| *v > 0.0).collect();
    // Stable sorts, so equal magnitudes stay in index order.
    pos.sort_by(|a, b| b.total_cmp(a));
    neg.sort_by(|a, b| b.total_cmp(a));
    let mut entries = Vec::with_capacity(pos.len() + neg.len());
    for (k, v) in pos.iter().enumerate() {
        entries.push((2 * (k as i64 + 1), vec![*v]));
    }
    for (k, v) in neg.iter().enumerate() {
        entries.push((2 * (k as i64 + 1) - 1, vec![-*v]));
    }
    SparseSeq::new(1, entries)
}

/// Correlation `Σ_j ⟨a_{j-k}, b_j⟩` for every shift `k` in the window where
/// the supports can overlap. Returns `(k_min, values)`.
fn shift_correlations(a: &SparseSeq, b: &SparseSeq) -> (i64, Vec<f64>) {
    let (Some(a_lo), Some(a_hi), Some(b_lo), Some(b_hi)) =
        (a.min_index(), a.max_index(), b.min_index(), b.max_index())
    else {
        return (0, Vec::new());
    };
    let d = a.d;
    let bd = b.dense_window(b_lo, b_hi);
    let k_min = b_lo - a_hi;
    let k_max = b_hi - a_lo;
    let values = (k_min..=k_max)
        .map(|k| {
            a.entries
                .iter()
                .filter_map(|(i, v)| {
                    let j = i + k;
                    (j >= b_lo && j <= b_hi).then(|| {
                        let at = (j - b_lo) as usize * d;
                        dot(v, &bd[at..at + d])
                    })
                })
                .sum()
        })
        .collect();
    (k_min, values)
}

/// Max filter modulo integer translation. Finitely supported sequences can
/// always be shifted apart, so the result is never negative.
pub fn shift_max_filter(a: &SparseSeq, b: &SparseSeq) -> Result<f64> {
    check_dim(a.d, b.d)?;
    let (_, corr) = shift_correlations(a, b);
    Ok(corr.into_iter().fold(0.0, f64::max))
}

/// Shift achieving the max filter, if the supports can overlap at all.
pub fn best_shift(a: &SparseSeq, b: &SparseSeq) -> Result<Option<i64>> {
    check_dim(a.d, b.d)?;
    let (k_min, corr) = shift_correlations(a, b);
    Ok(corr
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(k, _)| k_min + k as i64))
}

/// Distance between `[a]` and `[b]` modulo integer translation, minimized
/// directly over the finite window of overlapping shifts.
pub fn shift_quotient_distance(a: &SparseSeq, b: &SparseSeq) -> Result<f64> {
    check_dim(a.d, b.d)?;
    let disjoint = a.norm_sq() + b.norm_sq();
    let (Some(a_lo), Some(a_hi), Some(b_lo), Some(b_hi)) =
        (a.min_index(), a.max_index(), b.min_index(), b.max_index())
    else {
        return Ok(disjoint.sqrt());
    };
    let mut best = disjoint;
    for k in (b_lo - a_hi)..=(b_hi - a_lo) {
        let shifted = a.shifted(k);
        let d = aligned_distance(&shifted, b)?;
        best = best.min(d * d);
    }
    Ok(best.sqrt())
}

/// Places a sequence supported in `{0, ..., N}` into a cyclic window of length
/// `n > 2N`, which preserves max filters against any other such sequence.
/// The output is `n` blocks of length `d`, flattened.
pub fn circular_embed(a: &SparseSeq, n: usize) -> Result<Vec<f64>> {
    if let Some(lo) = a.min_index() {
        if lo < 0 {
            return Err(Error::InvalidParameter(format!(
                "support must lie in {{0..N}}, found index {lo}"
            )));
        }
    }
    let big_n = a.max_index().unwrap_or(0).max(0) as usize;
    if n <= 2 * big_n || n == 0 {
        return Err(Error::WindowTooSmall { n, twice_support: 2 * big_n });
    }
    let mut out = vec![0.0; n * a.d];
    for (i, v) in &a.entries {
        let at = *i as usize * a.d;
        out[at..at + a.d].copy_from_slice(v);
    }
    Ok(out)
}

/// Largest inner product of `u` with a cyclic rotation of `v`, both made of
/// `n` equal blocks.
pub fn circular_max_filter(u: &[f64], v: &[f64], n: usize) -> Result<f64> {
    check_dim(u.len(), v.len())?;
    if n == 0 || !u.len().is_multiple_of(n) {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    let block = u.len() / n;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            let src = ((j + n - k) % n) * block;
            let dst = j * block;
            s += dot(&u[dst..dst + block], &v[src..src + block]);
        }
        best = best.max(s);
    }
    Ok(best)
}
