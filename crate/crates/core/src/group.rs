//! Finite abelian groups presented as products of cyclic factors.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on `|G|`. Dynamic-programming tables scale with the
/// group order, so larger groups are rejected up front.
pub const DEFAULT_MAX_ORDER: u64 = 1_000_000;

/// `Z/m_1 x ... x Z/m_r`. Moduli need not form a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Group {
    moduli: Vec<u64>,
}

/// A residue vector, one coordinate per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// Wraps raw coordinates without reduction. Use [`Group::element`] for
    /// validated construction.
    pub(crate) fn from_raw(coords: Vec<u64>) -> Self {
        Self { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            f.write_str("(")?;
            for (i, c) in self.coords.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        }
    }
}

impl Group {
    /// Validates the moduli and enforces [`DEFAULT_MAX_ORDER`].
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        Self::with_order_cap(moduli, DEFAULT_MAX_ORDER)
    }

    pub fn with_order_cap(moduli: Vec<u64>, max_order: u64) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("empty list of moduli".into()));
        }
        if moduli.iter().any(|&m| m == 0) {
            return Err(Error::InvalidGroup("moduli must be >= 1".into()));
        }
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::GroupTooLarge {
                order: None,
                cap: max_order,
            })?;
        if order > max_order {
            return Err(Error::GroupTooLarge {
                order: Some(order),
                cap: max_order,
            });
        }
        Ok(Self { moduli })
    }

    /// `Z/n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `(Z/n)^rank`.
    pub fn power(n: u64, rank: usize) -> Result<Self> {
        Self::new(vec![n; rank])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// lcm of the moduli.
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1u64, |acc, &m| acc.lcm(&m))
    }

    /// `Some(n)` when the group is `(Z/n)^r` for some `r`.
    pub fn homogeneous_modulus(&self) -> Option<u64> {
        let n = self.moduli[0];
        self.moduli.iter().all(|&m| m == n).then_some(n)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_raw(vec![0; self.rank()])
    }

    /// Strict construction: every coordinate must already be reduced.
    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        self.check_rank(coords.len())?;
        for (&c, &m) in coords.iter().zip(&self.moduli) {
            if c >= m {
                return Err(Error::OutOfRange {
                    value: c as i128,
                    modulus: m,
                });
            }
        }
        Ok(GroupElement::from_raw(coords))
    }

    /// Lenient construction: reduces arbitrary integers into range.
    pub fn reduce(&self, coords: &[i128]) -> Result<GroupElement> {
        self.check_rank(coords.len())?;
        Ok(GroupElement::from_raw(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i128) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.rank() == self.rank() && a.coords.iter().zip(&self.moduli).all(|(&c, &m)| c < m)
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if rank != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: rank,
            });
        }
        Ok(())
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        self.check_rank(a.rank())?;
        if let Some((&c, &m)) = a.coords.iter().zip(&self.moduli).find(|(&c, &m)| c >= m) {
            return Err(Error::OutOfRange {
                value: c as i128,
                modulus: m,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::from_raw(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| ((x as u128 + y as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement::from_raw(
            a.coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| (m - x) % m)
                .collect(),
        ))
    }

    /// `k * a` for any integer `k`, including negative ones.
    pub fn scale(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.scale_unchecked(a, k))
    }

    pub(crate) fn scale_unchecked(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement::from_raw(
            a.coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| (x as i128 * k as i128).rem_euclid(m as i128) as u64)
                .collect(),
        )
    }

    /// Mixed-radix index in `[0, |G|)`, last coordinate fastest. The
    /// identity has index 0.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.coords
            .iter()
            .zip(&self.moduli)
            .fold(0u64, |acc, (&c, &m)| acc * m + c) as usize
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0u64; self.rank()];
        for (slot, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = index as u64 % m;
            index /= m as usize;
        }
        GroupElement::from_raw(coords)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// Componentwise reduction `Z/m_i -> Z/d` for a common `d` dividing every
    /// modulus.
    pub fn quotient(&self, d: u64) -> Result<Group> {
        if d == 0 || self.moduli.iter().any(|m| m % d != 0) {
            return Err(Error::Precondition(format!(
                "{d} does not divide every modulus of {self}"
            )));
        }
        Group::new(vec![d; self.rank()])
    }
}

impl fmt::Display for Group {
    /// `Z/6`, `Z/3^2`, `Z/2xZ/6`. Runs of equal moduli collapse into a power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.moduli.len() {
            let m = self.moduli[i];
            let mut j = i;
            while j < self.moduli.len() && self.moduli[j] == m {
                j += 1;
            }
            if !first {
                f.write_str("x")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "Z/{m}")?;
            } else {
                write!(f, "Z/{m}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        if compact.is_empty() {
            return Err(Error::Parse(format!("empty group spec {s:?}")));
        }
        let mut moduli = Vec::new();
        for factor in compact.split('x') {
            let body = factor
                .strip_prefix("z/")
                .ok_or_else(|| Error::Parse(format!("bad group factor {factor:?} in {s:?}")))?;
            let (modulus, power) = match body.split_once('^') {
                Some((m, r)) => (m, r),
                None => (body, "1"),
            };
            let modulus: u64 = modulus
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus {modulus:?} in {s:?}")))?;
            let power: usize = power
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {power:?} in {s:?}")))?;
            if power == 0 {
                return Err(Error::Parse(format!("zero exponent in {s:?}")));
            }
            moduli.extend(std::iter::repeat(modulus).take(power));
        }
        Group::new(moduli)
    }
}

/// Smallest `l >= lower_bound` with `l` not dividing `n`.
pub fn min_nondivisor(n: u64, lower_bound: u64) -> u64 {
    let mut l = lower_bound.max(1);
    while n % l == 0 {
        l += 1;
    }
    l
}

/// Smallest prime factor of `n >= 2`.
pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return Some(p);
        }
        p += 1;
    }
    Some(n)
}

pub fn is_prime(n: u64) -> bool {
    smallest_prime_factor(n) == Some(n)
}

/// Units of `Z/m`, ascending.
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|u| u.gcd(&m) == 1).collect()
}

/// Smallest non-negative `x` with `a*x = b (mod m)`, if any.
pub fn solve_linear_congruence(a: u64, b: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let a = a % m;
    let b = b % m;
    let g = a.gcd(&m);
    if b % g != 0 {
        return None;
    }
    let m_red = m / g;
    if m_red == 1 {
        return Some(0);
    }
    let a_red = ((a / g) % m_red) as i128;
    let b_red = ((b / g) % m_red) as i128;
    let ext = a_red.extended_gcd(&(m_red as i128));
    let inv = ext.x.rem_euclid(m_red as i128);
    Some(((inv * b_red) % m_red as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &Group, c: &[u64]) -> GroupElement {
        g.element(c.to_vec()).unwrap()
    }

    #[test]
    fn make_group_examples() {
        let g = Group::new(vec![6]).unwrap();
        assert_eq!(g.exponent(), 6);
        assert_eq!(Group::new(vec![3, 3]).unwrap().exponent(), 3);
        let g = Group::new(vec![2, 6]).unwrap();
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.order(), 12);
    }

    #[test]
    fn make_group_rejects_bad_moduli() {
        assert!(matches!(Group::new(vec![]), Err(Error::InvalidGroup(_))));
        assert!(matches!(Group::new(vec![3, 0]), Err(Error::InvalidGroup(_))));
        assert!(matches!(
            Group::new(vec![1001, 1001]),
            Err(Error::GroupTooLarge { .. })
        ));
        assert!(Group::with_order_cap(vec![1001, 1001], 2_000_000).is_ok());
        assert!(matches!(
            Group::new(vec![u64::MAX, u64::MAX]),
            Err(Error::GroupTooLarge { order: None, .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let z6 = Group::cyclic(6).unwrap();
        assert_eq!(z6.add(&el(&z6, &[4]), &el(&z6, &[5])).unwrap(), el(&z6, &[3]));
        assert_eq!(z6.scale(&el(&z6, &[4]), 3).unwrap(), el(&z6, &[0]));
        assert_eq!(z6.scale(&el(&z6, &[4]), -1).unwrap(), el(&z6, &[2]));
        let z3sq = Group::power(3, 2).unwrap();
        assert_eq!(z3sq.neg(&el(&z3sq, &[1, 2])).unwrap(), el(&z3sq, &[2, 1]));
    }

    #[test]
    fn dimension_mismatch() {
        let z6 = Group::cyclic(6).unwrap();
        let z3sq = Group::power(3, 2).unwrap();
        let a = el(&z3sq, &[1, 1]);
        assert!(matches!(
            z6.add(&a, &el(&z6, &[1])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(z6.element(vec![6]).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for moduli in [vec![6], vec![3, 3], vec![2, 6], vec![2, 2, 2], vec![4, 2]] {
            let g = Group::new(moduli).unwrap();
            let all: Vec<_> = g.elements().collect();
            let e = g.exponent() as i64;
            for a in &all {
                assert_eq!(g.add(a, &g.neg(a).unwrap()).unwrap(), g.identity());
                assert_eq!(g.scale(a, e).unwrap(), g.identity());
                assert_eq!(g.element_at(g.index_of(a)), *a);
                for b in &all {
                    let ab = g.add(a, b).unwrap();
                    assert_eq!(ab, g.add(b, a).unwrap());
                    for c in &all {
                        assert_eq!(
                            g.add(&ab, c).unwrap(),
                            g.add(a, &g.add(b, c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn min_nondivisor_examples() {
        assert_eq!(min_nondivisor(6, 1), 4);
        assert_eq!(min_nondivisor(8, 1), 3);
        assert_eq!(min_nondivisor(4, 4), 5);
        assert_eq!(min_nondivisor(1, 1), 2);
        assert_eq!(min_nondivisor(12, 4), 5);
        assert_eq!(min_nondivisor(2, 8), 8);
    }

    #[test]
    fn min_nondivisor_properties() {
        for n in 1..=300u64 {
            for lb in 1..=20u64 {
                let l = min_nondivisor(n, lb);
                assert!(l >= lb);
                assert_ne!(n % l, 0);
                assert!((lb..l).all(|d| n % d == 0));
            }
        }
    }

    #[test]
    fn group_syntax() {
        let cases = [
            ("Z/6", vec![6]),
            ("z/3^2", vec![3, 3]),
            (" Z/2 x Z/6 ", vec![2, 6]),
            ("Z/2^2xZ/4", vec![2, 2, 4]),
        ];
        for (text, moduli) in cases {
            let g: Group = text.parse().unwrap();
            assert_eq!(g.moduli(), &moduli[..]);
            assert_eq!(g.to_string().parse::<Group>().unwrap(), g);
        }
        assert_eq!(Group::power(3, 2).unwrap().to_string(), "Z/3^2");
        assert_eq!(Group::new(vec![2, 6]).unwrap().to_string(), "Z/2xZ/6");
        for bad in ["", "Q/3", "Z/", "Z/3^0", "Z/0", "Z/3^x"] {
            assert!(bad.parse::<Group>().is_err(), "{bad}");
        }
    }

    #[test]
    fn congruences() {
        assert_eq!(solve_linear_congruence(2, 2, 3), Some(1));
        assert_eq!(solve_linear_congruence(4, 4, 6), Some(1));
        assert_eq!(solve_linear_congruence(4, 3, 6), None);
        assert_eq!(solve_linear_congruence(3, 0, 2), Some(0));
        for m in 1..40u64 {
            for a in 0..m {
                for b in 0..m {
                    let brute = (0..m).find(|x| (a * x) % m == b % m);
                    assert_eq!(solve_linear_congruence(a, b, m), brute, "{a}x={b} mod {m}");
                }
            }
        }
    }

    #[test]
    fn primes_and_units() {
        assert_eq!(smallest_prime_factor(6), Some(2));
        assert_eq!(smallest_prime_factor(9), Some(3));
        assert_eq!(smallest_prime_factor(7), Some(7));
        assert_eq!(smallest_prime_factor(1), None);
        assert_eq!(units(6), vec![1, 5]);
        assert_eq!(units(1), vec![0]);
        assert!(is_prime(13) && !is_prime(15));
    }
}
