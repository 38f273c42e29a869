//! Index-level machinery shared by the engine and the exhaustive search:
//! elements as mixed-radix indices, and reachability layers indexed by
//! subsequence size.

use crate::group::Group;

/// Addition tables are precomputed up to this order (table size is order²).
const TABLE_MAX_ORDER: usize = 1024;

#[derive(Clone, Debug)]
pub(crate) struct IndexedGroup {
    moduli: Vec<usize>,
    order: usize,
    table: Option<Vec<u32>>,
}

impl IndexedGroup {
    pub(crate) fn new(group: &Group) -> Self {
        let moduli: Vec<usize> = group.moduli().iter().map(|&m| m as usize).collect();
        let order = group.order() as usize;
        let mut g = Self {
            moduli,
            order,
            table: None,
        };
        if order <= TABLE_MAX_ORDER {
            let mut table = Vec::with_capacity(order * order);
            for x in 0..order {
                for y in 0..order {
                    table.push(g.add_slow(x, y) as u32);
                }
            }
            g.table = Some(table);
        }
        g
    }

    pub(crate) fn order(&self) -> usize {
        self.order
    }

    fn add_slow(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &m in self.moduli.iter().rev() {
            let s = (x % m + y % m) % m;
            out += s * stride;
            stride *= m;
            x /= m;
            y /= m;
        }
        out
    }

    #[inline]
    pub(crate) fn add(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.order + y] as usize,
            None => self.add_slow(x, y),
        }
    }

    pub(crate) fn neg(&self, mut x: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &m in self.moduli.iter().rev() {
            let c = x % m;
            out += ((m - c) % m) * stride;
            stride *= m;
            x /= m;
        }
        out
    }

    pub(crate) fn scale(&self, mut x: usize, k: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &m in self.moduli.iter().rev() {
            let c = x % m;
            out += ((c as u128 * k as u128) % m as u128) as usize * stride;
            stride *= m;
            x /= m;
        }
        out
    }
}

/// `reach[c]` is a bitset over group indices: the sums attainable by a
/// sub-multiset of exactly `c` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layers {
    words: usize,
    max_size: usize,
    data: Vec<u64>,
}

impl Layers {
    /// Only the empty sub-multiset: `reach[0] = {0}`.
    pub(crate) fn initial(order: usize, max_size: usize) -> Self {
        let words = order.div_ceil(64);
        let mut data = vec![0u64; words * (max_size + 1)];
        data[0] = 1;
        Self {
            words,
            max_size,
            data,
        }
    }

    #[inline]
    pub(crate) fn contains(&self, size: usize, x: usize) -> bool {
        self.data[size * self.words + x / 64] >> (x % 64) & 1 == 1
    }

    pub(crate) fn copy_from(&mut self, other: &Layers) {
        self.data.copy_from_slice(&other.data);
    }

    /// OR into `self` every sum from `parent` at size `c - copies`
    /// translated by `shift` (= copies * e).
    pub(crate) fn absorb_copies(
        &mut self,
        parent: &Layers,
        copies: usize,
        shift: usize,
        g: &IndexedGroup,
    ) {
        let words = self.words;
        for c in copies..=self.max_size {
            let src = (c - copies) * words;
            let dst = c * words;
            for w in 0..words {
                let mut bits = parent.data[src + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let y = g.add(w * 64 + b, shift);
                    self.data[dst + y / 64] |= 1 << (y % 64);
                }
            }
        }
    }

    /// Bounded-knapsack step: `multiplicity` copies of the element with
    /// index `e`, saturated at the largest tracked size.
    pub(crate) fn with_item(&self, e: usize, multiplicity: usize, g: &IndexedGroup) -> Layers {
        let mut out = self.clone();
        let mut shift = 0;
        for j in 1..=multiplicity.min(self.max_size) {
            shift = g.add(shift, e);
            out.absorb_copies(self, j, shift, g);
        }
        out
    }
}
