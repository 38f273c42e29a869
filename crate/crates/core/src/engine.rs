//! Detection, counting and extraction of zero-sum subsequences of a
//! prescribed length by bounded-knapsack dynamic programming over the group.

use std::collections::BTreeSet;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dp::{IndexedGroup, Layers};
use crate::error::{Error, Result};
use crate::sequence::{Sequence, Witness};
use crate::{ExactCount, ResidueCount};

/// Above this many stored bits, witness reconstruction recomputes prefix
/// layers instead of keeping every one.
const STORED_LAYER_BITS: usize = 1 << 28;

/// A nonempty set of admissible subsequence lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetLengths(BTreeSet<usize>);

impl TargetLengths {
    pub fn new<I: IntoIterator<Item = usize>>(lengths: I) -> Result<Self> {
        let set: BTreeSet<usize> = lengths.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Precondition("empty set of target lengths".into()));
        }
        if set.contains(&0) {
            return Err(Error::Precondition("target lengths must be >= 1".into()));
        }
        Ok(Self(set))
    }

    pub fn single(t: usize) -> Result<Self> {
        Self::new([t])
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> usize {
        *self.0.iter().next_back().expect("nonempty")
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountValue {
    Exact(BigUint),
    Residue { value: u64, modulus: u64 },
}

/// `(k | J)`: the number of index subsets of size `k` with zero sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSumCount {
    pub k: usize,
    pub value: CountValue,
}

impl ZeroSumCount {
    pub fn is_zero(&self) -> bool {
        match &self.value {
            CountValue::Exact(v) => v.is_zero(),
            CountValue::Residue { value, .. } => *value == 0,
        }
    }
}

impl std::fmt::Display for ZeroSumCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.value {
            CountValue::Exact(v) => write!(f, "{v}"),
            CountValue::Residue { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

fn check_size(seq: &Sequence, k: usize) -> Result<()> {
    if k > seq.len() {
        return Err(Error::Precondition(format!(
            "subsequence length {k} exceeds sequence length {}",
            seq.len()
        )));
    }
    Ok(())
}

/// Distinct elements as (index, multiplicity) in ascending element order.
fn indexed_items(seq: &Sequence) -> Vec<(usize, usize)> {
    let g = seq.group();
    seq.counts()
        .iter()
        .map(|(e, &m)| (g.index_of(e), m))
        .collect()
}

/// A zero-sum sub-multiset of exactly `k` terms, if one exists.
///
/// Deterministic: items are scanned from the largest element down during
/// reconstruction, and each takes the smallest multiplicity that keeps the
/// remaining target reachable.
pub fn find_zero_sum_subseq(seq: &Sequence, k: usize) -> Result<Option<Witness>> {
    check_size(seq, k)?;
    let group = seq.group();
    if k == 0 {
        return Ok(Some(Witness::empty(group.clone())));
    }
    let ig = IndexedGroup::new(group);
    let items = indexed_items(seq);

    let stored_bits = items.len() * (k + 1) * ig.order();
    let prefixes = if stored_bits <= STORED_LAYER_BITS {
        let mut all = Vec::with_capacity(items.len() + 1);
        all.push(Layers::initial(ig.order(), k));
        for &(e, m) in &items {
            let next = all.last().unwrap().with_item(e, m, &ig);
            all.push(next);
        }
        Some(all)
    } else {
        None
    };
    let prefix = |i: usize| -> Layers {
        match &prefixes {
            Some(all) => all[i].clone(),
            None => items[..i]
                .iter()
                .fold(Layers::initial(ig.order(), k), |l, &(e, m)| {
                    l.with_item(e, m, &ig)
                }),
        }
    };

    if !prefix(items.len()).contains(k, 0) {
        return Ok(None);
    }

    let mut picks = vec![0usize; items.len()];
    let mut size = k;
    let mut target = 0usize;
    for i in (0..items.len()).rev() {
        let (e, m) = items[i];
        let before = prefix(i);
        let mut chosen = None;
        let mut shift = 0usize;
        for j in 0..=m.min(size) {
            if j > 0 {
                shift = ig.add(shift, e);
            }
            let rest = ig.add(target, ig.neg(shift));
            if before.contains(size - j, rest) {
                chosen = Some((j, rest));
                break;
            }
        }
        let (j, rest) = chosen.ok_or_else(|| {
            Error::InvariantViolated("witness reconstruction lost the reachable state".into())
        })?;
        picks[i] = j;
        size -= j;
        target = rest;
    }
    debug_assert_eq!((size, target), (0, 0));

    let sub = Sequence::from_counts(
        group.clone(),
        items
            .iter()
            .zip(&picks)
            .map(|(&(e, _), &j)| (group.element_at(e), j)),
    )?;
    Witness::new(seq, sub).map(Some)
}

/// Whether some length in `lengths` admits a zero-sum subsequence. One
/// forward pass at the largest admissible length answers every member.
pub fn has_zero_sum_in_lengths(seq: &Sequence, lengths: &TargetLengths) -> bool {
    let max = lengths.max().min(seq.len());
    let feasible: Vec<usize> = lengths.iter().filter(|&k| k <= max).collect();
    if feasible.is_empty() {
        return false;
    }
    let ig = IndexedGroup::new(seq.group());
    let layers = indexed_items(seq)
        .into_iter()
        .fold(Layers::initial(ig.order(), max), |l, (e, m)| {
            l.with_item(e, m, &ig)
        });
    feasible.into_iter().any(|k| layers.contains(k, 0))
}

/// Convenience for `has_zero_sum_in_lengths(seq, {k})`.
pub fn has_zero_sum_of_length(seq: &Sequence, k: usize) -> bool {
    k <= seq.len()
        && TargetLengths::single(k)
            .map(|l| has_zero_sum_in_lengths(seq, &l))
            .unwrap_or(true)
}

/// Generating-function count of zero-sum index subsets of size `k`, over any
/// coefficient type. `reduce` is applied after every ring operation (identity
/// for exact arithmetic, a remainder for modular counting).
pub fn count_zero_sum_with<C, R>(seq: &Sequence, k: usize, reduce: R) -> Result<C>
where
    C: Zero + One + Clone + Add<Output = C> + Mul<Output = C>,
    R: Fn(C) -> C,
{
    check_size(seq, k)?;
    let ig = IndexedGroup::new(seq.group());
    let order = ig.order();
    let mut coeffs = vec![C::zero(); (k + 1) * order];
    coeffs[0] = reduce(C::one());

    for (e, m) in indexed_items(seq) {
        let top = m.min(k);
        let binom = binomial_row::<C, _>(m, top, &reduce);
        let mut next = coeffs.clone();
        let mut shift = 0usize;
        for (j, b) in binom.iter().enumerate().skip(1) {
            shift = ig.add(shift, e);
            for c in j..=k {
                for x in 0..order {
                    let src = &coeffs[(c - j) * order + x];
                    if src.is_zero() {
                        continue;
                    }
                    let y = ig.add(x, shift);
                    let slot = &mut next[c * order + y];
                    *slot = reduce(slot.clone() + reduce(src.clone() * b.clone()));
                }
            }
        }
        coeffs = next;
    }
    Ok(coeffs[k * order].clone())
}

/// `C(m, 0..=top)` by Pascal's rule, so only ring addition is needed.
fn binomial_row<C, R>(m: usize, top: usize, reduce: &R) -> Vec<C>
where
    C: Zero + One + Clone + Add<Output = C>,
    R: Fn(C) -> C,
{
    let mut row = vec![C::zero(); top + 1];
    row[0] = reduce(C::one());
    for _ in 0..m {
        for j in (1..=top).rev() {
            row[j] = reduce(row[j].clone() + row[j - 1].clone());
        }
    }
    row
}

/// `(k | seq)`, exactly or reduced modulo `modulus`.
pub fn count_zero_sum_subseqs(
    seq: &Sequence,
    k: usize,
    modulus: Option<u64>,
) -> Result<ZeroSumCount> {
    let value = match modulus {
        None => CountValue::Exact(count_zero_sum_with::<ExactCount, _>(seq, k, |x| x)?),
        Some(m) if m < 2 => {
            return Err(Error::Precondition(format!("modulus must be >= 2, got {m}")))
        }
        Some(m) => {
            let m128 = m as ResidueCount;
            let v = count_zero_sum_with::<ResidueCount, _>(seq, k, |x| x % m128)?;
            CountValue::Residue {
                value: v as u64,
                modulus: m,
            }
        }
    };
    Ok(ZeroSumCount { k, value })
}
