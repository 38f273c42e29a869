//! Longest zero-sum sequences avoiding zero-sum subsequences of the target
//! length: the lower-bound halves of the modified EGZ constants.

use num_integer::Integer;
use serde::Serialize;

use crate::engine::{has_zero_sum_in_lengths, TargetLengths};
use crate::error::{Error, Result};
use crate::group::{min_nondivisor, solve_linear_congruence, Group, GroupElement};
use crate::sequence::Sequence;

/// Multiplicities of 0 and 1 in `Z/n` before the constant shift `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicExtremalParams {
    pub n: u64,
    pub t: u64,
    pub l: u64,
    pub g: u64,
    pub zeros_count: u64,
    pub ones_count: u64,
    pub shift: u64,
}

impl CyclicExtremalParams {
    pub fn new(n: u64, t: u64) -> Result<Self> {
        if n < 2 || t < 1 {
            return Err(Error::Precondition(format!(
                "cyclic construction needs n >= 2, t >= 1 (got n = {n}, t = {t})"
            )));
        }
        let l = min_nondivisor(n, 1);
        let g = n.gcd(&l);
        // 0 carries t*n - g copies, 1 carries n - l + g; g divides the latter
        let zeros_count = t * n - g;
        let ones_count = n + g - l;
        let shift = solve_linear_congruence(l, ones_count, n).ok_or_else(|| {
            Error::InvariantViolated(format!("no shift solves {l}c = {ones_count} mod {n}"))
        })?;
        let params = Self {
            n,
            t,
            l,
            g,
            zeros_count,
            ones_count,
            shift,
        };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<()> {
        let ok = self.zeros_count + self.ones_count + self.l == (self.t + 1) * self.n
            && self.zeros_count < self.t * self.n
            && self.ones_count < self.n
            && self.ones_count % self.g == 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolated(format!("bad cyclic parameters {self:?}")))
        }
    }

    pub fn unshifted(&self) -> Result<Sequence> {
        let g = Group::cyclic(self.n)?;
        Sequence::from_coords(
            g,
            &[
                (&[0], self.zeros_count as usize),
                (&[1], self.ones_count as usize),
            ],
        )
    }
}

/// Multiplicities of `(0,0), (0,1), (1,0), (1,1)` in `(Z/n)^2` before the
/// shift `(r, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareExtremalParams {
    pub n: u64,
    pub l: u64,
    pub g: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub shift: (u64, u64),
}

impl SquareExtremalParams {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "square construction needs n >= 2 (got {n})"
            )));
        }
        let l = min_nondivisor(n, 4);
        let g = n.gcd(&l);
        let (a, d) = if g == 1 {
            (n + 3 - l, n - 1)
        } else {
            (n + g + 1 - l, n + 1 - g)
        };
        let (b, c) = (n - 1, n - 1);
        let r = solve_linear_congruence(l, c + d, n);
        let s = solve_linear_congruence(l, b + d, n);
        let (Some(r), Some(s)) = (r, s) else {
            return Err(Error::InvariantViolated(format!(
                "no shift for square construction at n = {n}"
            )));
        };
        let params = Self {
            n,
            l,
            g,
            a,
            b,
            c,
            d,
            shift: (r, s),
        };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<()> {
        let in_range = [self.a, self.b, self.c, self.d].iter().all(|&m| m < self.n);
        let ok = in_range
            && self.a + self.b + self.c + self.d + self.l == 4 * self.n
            && (self.c + self.d) % self.g == 0
            && (self.b + self.d) % self.g == 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolated(format!("bad square parameters {self:?}")))
        }
    }

    pub fn unshifted(&self) -> Result<Sequence> {
        let g = Group::power(self.n, 2)?;
        Sequence::from_coords(
            g,
            &[
                (&[0, 0], self.a as usize),
                (&[0, 1], self.b as usize),
                (&[1, 0], self.c as usize),
                (&[1, 1], self.d as usize),
            ],
        )
    }
}

/// Zero-sum sequence of length `(t+1)n - l` over `Z/n` with no zero-sum
/// subsequence of length `n*t`.
pub fn build_cyclic_extremal(n: u64, t: u64) -> Result<Sequence> {
    let p = CyclicExtremalParams::new(n, t)?;
    let shift = Group::cyclic(n)?.element(vec![p.shift])?;
    p.unshifted()?.shift_all(&shift)
}

/// Zero-sum sequence of length `4n - l` over `(Z/n)^2` with no zero-sum
/// subsequence of length `n`.
pub fn build_square_extremal(n: u64) -> Result<Sequence> {
    let p = SquareExtremalParams::new(n)?;
    let shift = Group::power(n, 2)?.element(vec![p.shift.0, p.shift.1])?;
    p.unshifted()?.shift_all(&shift)
}

/// Every vector of `(Z/2)^r` once. Only `n = 2^k` with `k = 1` is covered.
pub fn build_power2_extremal(k: u32, r: usize) -> Result<Sequence> {
    if k != 1 {
        return Err(Error::Precondition(format!(
            "power-of-two construction is only defined for n = 2 (got n = 2^{k})"
        )));
    }
    if r < 2 {
        return Err(Error::Precondition(
            "r = 1 is degenerate: {0, 1} is itself a zero-sum pair".into(),
        ));
    }
    let g = Group::power(2, r)?;
    Sequence::from_elements(g.clone(), g.elements().collect::<Vec<GroupElement>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub length: usize,
    pub zero_sum: bool,
    pub forbidden: Vec<usize>,
    pub has_forbidden_witness: bool,
    pub valid: bool,
}

/// Zero-sum and free of zero-sum subsequences at every forbidden length.
pub fn validate_extremal(seq: &Sequence, forbidden: &TargetLengths) -> ExtremalReport {
    let zero_sum = seq.is_zero_sum();
    let has_forbidden_witness = has_zero_sum_in_lengths(seq, forbidden);
    ExtremalReport {
        length: seq.len(),
        zero_sum,
        forbidden: forbidden.iter().collect(),
        has_forbidden_witness,
        valid: zero_sum && !has_forbidden_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::oracle::brute_count;

    fn seq(moduli: &[u64], counts: &[(&[u64], usize)]) -> Sequence {
        Sequence::from_coords(Group::new(moduli.to_vec()).unwrap(), counts).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let p = CyclicExtremalParams::new(3, 1).unwrap();
        assert_eq!((p.l, p.g, p.zeros_count, p.ones_count, p.shift), (2, 1, 2, 2, 1));
        let s = build_cyclic_extremal(3, 1).unwrap();
        assert_eq!(s, seq(&[3], &[(&[1], 2), (&[2], 2)]));
        assert_eq!(brute_count(&s, 3), 0);

        let p = CyclicExtremalParams::new(6, 1).unwrap();
        assert_eq!((p.l, p.g, p.zeros_count, p.ones_count, p.shift), (4, 2, 4, 4, 1));
        let s = build_cyclic_extremal(6, 1).unwrap();
        assert_eq!(s, seq(&[6], &[(&[1], 4), (&[2], 4)]));
        assert_eq!(brute_count(&s, 6), 0);

        let s = build_cyclic_extremal(2, 1).unwrap();
        assert_eq!(s, seq(&[2], &[(&[0], 1)]));
        assert!(build_cyclic_extremal(1, 1).is_err());
        assert!(build_cyclic_extremal(3, 0).is_err());
    }

    #[test]
    fn square_examples() {
        let p = SquareExtremalParams::new(2).unwrap();
        assert_eq!((p.l, p.g, p.a, p.b, p.c, p.d, p.shift), (4, 2, 1, 1, 1, 1, (0, 0)));
        let s = build_square_extremal(2).unwrap();
        assert_eq!(
            s,
            seq(&[2, 2], &[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 1)])
        );

        let p = SquareExtremalParams::new(3).unwrap();
        assert_eq!((p.l, p.g, p.a, p.b, p.c, p.d, p.shift), (4, 1, 2, 2, 2, 2, (1, 1)));
        let s = build_square_extremal(3).unwrap();
        assert_eq!(
            s,
            seq(&[3, 3], &[(&[1, 1], 2), (&[1, 2], 2), (&[2, 1], 2), (&[2, 2], 2)])
        );
        assert_eq!(brute_count(&s, 3), 0);

        let p = SquareExtremalParams::new(4).unwrap();
        assert_eq!((p.l, p.g, p.a, p.b, p.c, p.d), (5, 1, 2, 3, 3, 3));
        let s = build_square_extremal(4).unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(brute_count(&s, 4), 0);
    }

    #[test]
    fn power2_examples() {
        let s = build_power2_extremal(1, 3).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.is_zero_sum());
        assert!(validate_extremal(&s, &TargetLengths::single(2).unwrap()).valid);
        assert_eq!(build_power2_extremal(1, 2).unwrap(), build_square_extremal(2).unwrap());
        assert!(build_power2_extremal(1, 1).is_err());
        assert!(build_power2_extremal(2, 3).is_err());
    }

    #[test]
    fn validate_examples() {
        let six = TargetLengths::single(6).unwrap();
        assert!(validate_extremal(&build_cyclic_extremal(6, 1).unwrap(), &six).valid);
        let r = validate_extremal(&seq(&[6], &[(&[0], 6)]), &six);
        assert!(r.zero_sum && r.has_forbidden_witness && !r.valid);
        let empty = Sequence::empty(Group::cyclic(6).unwrap());
        assert!(validate_extremal(&empty, &TargetLengths::new([1, 3]).unwrap()).valid);
        let not_zero = seq(&[6], &[(&[1], 1)]);
        assert!(!validate_extremal(&not_zero, &six).valid);
    }

    #[test]
    fn families_validate_at_small_scale() {
        for n in 2..=12u64 {
            for t in 1..=3u64 {
                let s = build_cyclic_extremal(n, t).unwrap();
                assert_eq!(s.len() as u64, (t + 1) * n - min_nondivisor(n, 1));
                let f = TargetLengths::single((n * t) as usize).unwrap();
                assert!(validate_extremal(&s, &f).valid, "n={n} t={t}");
            }
            let s = build_square_extremal(n).unwrap();
            assert_eq!(s.len() as u64, 4 * n - min_nondivisor(n, 4));
            assert!(validate_extremal(&s, &TargetLengths::single(n as usize).unwrap()).valid);
        }
    }
}
