//! Extractors that follow the block-decomposition arguments for the upper
//! bounds, step by step. Imported existence theorems (EGZ for `Z/d`, the
//! `4d - 3` bound for `(Z/d)^2`) are realised by the DP engine; everything
//! else is the reduction itself.

use serde::Serialize;

use crate::engine::find_zero_sum_subseq;
use crate::error::{Error, Result};
use crate::group::{min_nondivisor, smallest_prime_factor, Group, GroupElement};
use crate::sequence::{Sequence, Witness};

/// `n = p * m` with `p` the smallest prime factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSplit {
    pub n: u64,
    pub p: u64,
    pub m: u64,
}

pub fn factor_smallest_prime(n: u64) -> Result<PrimeSplit> {
    let p = smallest_prime_factor(n)
        .ok_or_else(|| Error::Precondition(format!("cannot split {n}: need n >= 2")))?;
    Ok(PrimeSplit { n, p, m: n / p })
}

/// Blocks of `d` terms, each summing to `0 (mod d)` componentwise, whose
/// sums are `d * x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub d: u64,
    pub blocks: Vec<Sequence>,
    pub block_sums: Vec<GroupElement>,
    /// The `x_i` as elements of `(Z/(n/d))^r`.
    pub quotient_elems: Vec<GroupElement>,
    pub leftover: Sequence,
}

/// A term pool: the expanded parent sequence, addressed by position.
struct Pool<'a> {
    group: &'a Group,
    terms: Vec<GroupElement>,
}

impl<'a> Pool<'a> {
    fn new(seq: &'a Sequence) -> Self {
        Self {
            group: seq.group(),
            terms: seq.expand(),
        }
    }

    fn sub_sequence(&self, positions: &[usize]) -> Sequence {
        Sequence::from_elements(
            self.group.clone(),
            positions.iter().map(|&i| self.terms[i].clone()),
        )
        .expect("pool terms belong to the group")
    }

    fn sum(&self, positions: &[usize]) -> GroupElement {
        positions.iter().fold(self.group.identity(), |acc, &i| {
            self.group.add_unchecked(&acc, &self.terms[i])
        })
    }
}

/// Componentwise reduction modulo `d`.
fn reduce_mod(e: &GroupElement, d: u64) -> GroupElement {
    GroupElement::from_raw(e.coords().iter().map(|&c| c % d).collect())
}

/// Picks `k` of `images` (elements of `target`) summing to zero, returning
/// their indices. Each distinct value takes its earliest occurrences.
fn choose_zero_sum(images: &[GroupElement], target: &Group, k: usize) -> Result<Option<Vec<usize>>> {
    let seq = Sequence::from_elements(target.clone(), images.iter().cloned())?;
    let Some(w) = find_zero_sum_subseq(&seq, k)? else {
        return Ok(None);
    };
    let mut wanted = w.as_sequence().counts().clone();
    let mut chosen = Vec::with_capacity(k);
    for (i, img) in images.iter().enumerate() {
        if let Some(left) = wanted.get_mut(img) {
            if *left > 0 {
                *left -= 1;
                chosen.push(i);
            }
        }
    }
    debug_assert_eq!(chosen.len(), k);
    Ok(Some(chosen))
}

fn take(remaining: &mut Vec<usize>, local: &[usize]) -> Vec<usize> {
    let block: Vec<usize> = local.iter().map(|&j| remaining[j]).collect();
    let mut drop = vec![false; remaining.len()];
    for &j in local {
        drop[j] = true;
    }
    let mut keep = drop.iter();
    remaining.retain(|_| !*keep.next().unwrap());
    block
}

/// Repeatedly splits off `d`-blocks that vanish modulo `d` until `stop`
/// positions remain.
fn peel_blocks(
    pool: &Pool<'_>,
    remaining: &mut Vec<usize>,
    d: u64,
    stop: usize,
    why: &str,
) -> Result<Vec<Vec<usize>>> {
    let quotient = Group::power(d, pool.group.rank())?;
    let mut blocks = Vec::new();
    while remaining.len() > stop {
        let images: Vec<GroupElement> = remaining
            .iter()
            .map(|&i| reduce_mod(&pool.terms[i], d))
            .collect();
        let local = choose_zero_sum(&images, &quotient, d as usize)?.ok_or_else(|| {
            Error::InvariantViolated(format!(
                "{why}: no {d}-block vanishing mod {d} among {} terms",
                remaining.len()
            ))
        })?;
        blocks.push(take(remaining, &local));
    }
    Ok(blocks)
}

fn block_quotients(pool: &Pool<'_>, blocks: &[Vec<usize>], d: u64, n: u64) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
    let q = n / d;
    let mut sums = Vec::with_capacity(blocks.len());
    let mut xs = Vec::with_capacity(blocks.len());
    for b in blocks {
        let s = pool.sum(b);
        if s.coords().iter().any(|&c| c % d != 0) {
            return Err(Error::InvariantViolated(format!(
                "block sum {s} is not divisible by {d}"
            )));
        }
        xs.push(GroupElement::from_raw(
            s.coords().iter().map(|&c| (c / d) % q).collect(),
        ));
        sums.push(s);
    }
    Ok((sums, xs))
}

fn finish(pool: &Pool<'_>, parent: &Sequence, positions: &[usize], size: usize) -> Result<Witness> {
    let w = Witness::new(parent, pool.sub_sequence(positions))?;
    if w.size() != size {
        return Err(Error::InvariantViolated(format!(
            "extracted {} terms, expected {size}",
            w.size()
        )));
    }
    Ok(w)
}

fn cyclic_modulus(seq: &Sequence) -> Result<u64> {
    match seq.group().moduli() {
        [n] => Ok(*n),
        _ => Err(Error::Precondition(format!(
            "expected a cyclic group, got {}",
            seq.group()
        ))),
    }
}

fn square_modulus(seq: &Sequence) -> Result<u64> {
    match seq.group().moduli() {
        [a, b] if a == b => Ok(*a),
        _ => Err(Error::Precondition(format!(
            "expected (Z/n)^2, got {}",
            seq.group()
        ))),
    }
}

fn require_zero_sum(seq: &Sequence) -> Result<()> {
    if !seq.is_zero_sum() {
        return Err(Error::Precondition("sequence is not zero-sum".into()));
    }
    Ok(())
}

fn require_divisor(d: u64, n: u64) -> Result<()> {
    if d == 0 || n % d != 0 {
        return Err(Error::Precondition(format!("{d} does not divide {n}")));
    }
    Ok(())
}

/// Decomposes a zero-sum sequence of length `2n - d` over `Z/n` into
/// `2(n/d) - 1` blocks of size `d`.
pub fn decompose_cyclic(seq: &Sequence, d: u64) -> Result<BlockDecomposition> {
    let n = cyclic_modulus(seq)?;
    require_divisor(d, n)?;
    require_zero_sum(seq)?;
    let expected = (2 * n - d) as usize;
    if seq.len() != expected {
        return Err(Error::Precondition(format!(
            "length {} != 2n - d = {expected}",
            seq.len()
        )));
    }
    let pool = Pool::new(seq);
    let mut remaining: Vec<usize> = (0..pool.terms.len()).collect();
    let mut blocks = peel_blocks(&pool, &mut remaining, d, d as usize, "EGZ at modulus d")?;
    // the last d terms vanish mod d because the whole sequence does
    blocks.push(std::mem::take(&mut remaining));
    decomposition(&pool, blocks, d, n)
}

fn decomposition(pool: &Pool<'_>, blocks: Vec<Vec<usize>>, d: u64, n: u64) -> Result<BlockDecomposition> {
    let (block_sums, quotient_elems) = block_quotients(pool, &blocks, d, n)?;
    Ok(BlockDecomposition {
        d,
        blocks: blocks.iter().map(|b| pool.sub_sequence(b)).collect(),
        block_sums,
        quotient_elems,
        leftover: Sequence::empty(pool.group.clone()),
    })
}

/// Combines `n/d` blocks whose quotient values sum to zero.
fn combine_blocks(
    pool: &Pool<'_>,
    blocks: &[Vec<usize>],
    xs: &[GroupElement],
    d: u64,
    n: u64,
    why: &str,
) -> Result<Vec<usize>> {
    let q = n / d;
    let quotient = Group::power(q, pool.group.rank())?;
    let chosen = choose_zero_sum(xs, &quotient, q as usize)?.ok_or_else(|| {
        Error::InvariantViolated(format!(
            "{why}: no {q} of {} quotient values sum to zero",
            xs.len()
        ))
    })?;
    Ok(chosen.iter().flat_map(|&i| blocks[i].iter().copied()).collect())
}

/// A zero-sum subsequence of length `n` from a zero-sum sequence of length
/// `2n - d` over `Z/n`, `d | n`, via block decomposition.
pub fn extract_cyclic_block(seq: &Sequence, d: u64) -> Result<Witness> {
    let n = cyclic_modulus(seq)?;
    require_divisor(d, n)?;
    require_zero_sum(seq)?;
    if seq.len() != (2 * n - d) as usize {
        return Err(Error::Precondition(format!(
            "length {} != 2n - d = {}",
            seq.len(),
            2 * n - d
        )));
    }
    let pool = Pool::new(seq);
    let mut remaining: Vec<usize> = (0..pool.terms.len()).collect();
    let mut blocks = peel_blocks(&pool, &mut remaining, d, d as usize, "EGZ at modulus d")?;
    blocks.push(std::mem::take(&mut remaining));
    let (_, xs) = block_quotients(&pool, &blocks, d, n)?;
    let union = combine_blocks(&pool, &blocks, &xs, d, n, "EGZ at modulus n/d")?;
    finish(&pool, seq, &union, n as usize)
}

/// One length-`n` zero-sum subsequence from a zero-sum sequence over `Z/n`
/// of length at least `2n - l + 1`.
fn extract_cyclic_once(seq: &Sequence, n: u64) -> Result<Witness> {
    let len = seq.len() as u64;
    if len >= 2 * n - 1 {
        return find_zero_sum_subseq(seq, n as usize)?.ok_or_else(|| {
            Error::InvariantViolated(format!("EGZ failed on {seq}"))
        });
    }
    let d = 2 * n - len;
    if n % d != 0 {
        return Err(Error::Precondition(format!(
            "length {len} below the cyclic bound for n = {n}"
        )));
    }
    extract_cyclic_block(seq, d)
}

/// The per-round witnesses of [`extract_cyclic_nt`], each of size `n`.
pub fn extract_cyclic_rounds(seq: &Sequence, t: u64) -> Result<Vec<Witness>> {
    let n = cyclic_modulus(seq)?;
    require_zero_sum(seq)?;
    if t == 0 {
        return Err(Error::Precondition("t must be >= 1".into()));
    }
    let l = min_nondivisor(n, 1);
    let bound = (t + 1) * n + 1 - l;
    if (seq.len() as u64) < bound {
        return Err(Error::Precondition(format!(
            "length {} below (t+1)n - l + 1 = {bound}",
            seq.len()
        )));
    }
    let mut rest = seq.clone();
    let mut rounds = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let w = extract_cyclic_once(&rest, n)?;
        rest = rest.remove_witness(&w)?;
        rounds.push(w);
    }
    Ok(rounds)
}

/// A zero-sum subsequence of length `n*t` from a zero-sum sequence over
/// `Z/n` of length at least `(t+1)n - l + 1`.
pub fn extract_cyclic_nt(seq: &Sequence, t: u64) -> Result<Witness> {
    let rounds = extract_cyclic_rounds(seq, t)?;
    let n = cyclic_modulus(seq)?;
    let union = rounds
        .iter()
        .try_fold(Sequence::empty(seq.group().clone()), |acc, w| {
            acc.union(w.as_sequence())
        })?;
    let w = Witness::new(seq, union)?;
    debug_assert_eq!(w.size() as u64, n * t);
    Ok(w)
}

/// Positions (into `elems`) of `n` terms summing to zero in `(Z/n)^2`,
/// given `3n` terms whose total vanishes mod `n`. Coordinates of `elems`
/// need only be correct modulo `n`.
fn three_n_positions(elems: &[GroupElement], n: u64) -> Result<Vec<usize>> {
    debug_assert_eq!(elems.len() as u64, 3 * n);
    if n == 1 {
        return Ok(vec![0]);
    }
    let split = factor_smallest_prime(n)?;
    let (p, m) = (split.p, split.m);
    let group = Group::power(n, 2)?;
    let reduced: Vec<GroupElement> = elems.iter().map(|e| reduce_mod(e, n)).collect();
    let pool = Pool {
        group: &group,
        terms: reduced,
    };

    let mut remaining: Vec<usize> = (0..elems.len()).collect();
    // 3n > 4m - 3 keeps the imported bound applicable at every step
    let mut blocks = peel_blocks(&pool, &mut remaining, m, 3 * m as usize, "4m-3 bound")?;
    let tail: Vec<GroupElement> = remaining
        .iter()
        .map(|&i| reduce_mod(&pool.terms[i], m))
        .collect();
    let local = three_n_positions(&tail, m)?;
    blocks.push(take(&mut remaining, &local));
    if blocks.len() as u64 != 3 * p - 2 {
        return Err(Error::InvariantViolated(format!(
            "expected {} blocks, built {}",
            3 * p - 2,
            blocks.len()
        )));
    }

    let (_, xs) = block_quotients(&pool, &blocks, m, n)?;
    let prime_group = Group::power(p, 2)?;
    if let Some(chosen) = choose_zero_sum(&xs, &prime_group, p as usize)? {
        return Ok(chosen.iter().flat_map(|&i| blocks[i].iter().copied()).collect());
    }
    // (p | X) = 0 forces (2p | X) = -1 mod p, so 2p of them vanish
    let chosen = choose_zero_sum(&xs, &prime_group, 2 * p as usize)?.ok_or_else(|| {
        Error::InvariantViolated(format!(
            "neither p = {p} nor 2p of {} quotient values sum to zero",
            xs.len()
        ))
    })?;
    let mut in_union = vec![false; elems.len()];
    for &i in &chosen {
        for &pos in &blocks[i] {
            in_union[pos] = true;
        }
    }
    Ok((0..elems.len()).filter(|&i| !in_union[i]).collect())
}

/// A zero-sum subsequence of length `n` from a zero-sum sequence of length
/// `3n` over `(Z/n)^2`, by recursion on a prime split of `n`.
pub fn extract_square_3n(seq: &Sequence) -> Result<Witness> {
    let n = square_modulus(seq)?;
    require_zero_sum(seq)?;
    if seq.len() as u64 != 3 * n {
        return Err(Error::Precondition(format!(
            "length {} != 3n = {}",
            seq.len(),
            3 * n
        )));
    }
    let pool = Pool::new(seq);
    let positions = three_n_positions(&pool.terms, n)?;
    finish(&pool, seq, &positions, n as usize)
}

/// Decomposes a zero-sum sequence of length `4n - d` over `(Z/n)^2` into
/// `4(n/d) - 3` blocks of size `d`.
pub fn decompose_square(seq: &Sequence, d: u64) -> Result<BlockDecomposition> {
    let n = square_modulus(seq)?;
    let pool = Pool::new(seq);
    let blocks = square_blocks(&pool, seq, n, d)?;
    decomposition(&pool, blocks, d, n)
}

fn square_blocks(pool: &Pool<'_>, seq: &Sequence, n: u64, d: u64) -> Result<Vec<Vec<usize>>> {
    require_divisor(d, n)?;
    require_zero_sum(seq)?;
    let expected = 4 * n - d;
    if seq.len() as u64 != expected {
        return Err(Error::Precondition(format!(
            "length {} != 4n - d = {expected}",
            seq.len()
        )));
    }
    if expected < 3 * d {
        return Err(Error::InvariantViolated(format!(
            "4n - d = {expected} < 3d"
        )));
    }
    let mut remaining: Vec<usize> = (0..pool.terms.len()).collect();
    let mut blocks = peel_blocks(pool, &mut remaining, d, 3 * d as usize, "4d-3 bound")?;
    let tail: Vec<GroupElement> = remaining
        .iter()
        .map(|&i| reduce_mod(&pool.terms[i], d))
        .collect();
    let local = three_n_positions(&tail, d)?;
    blocks.push(take(&mut remaining, &local));
    Ok(blocks)
}

/// A zero-sum subsequence of length `n` from a zero-sum sequence of length
/// `4n - d` over `(Z/n)^2`, `d | n`.
pub fn extract_square_block(seq: &Sequence, d: u64) -> Result<Witness> {
    let n = square_modulus(seq)?;
    let pool = Pool::new(seq);
    let blocks = square_blocks(&pool, seq, n, d)?;
    let (_, xs) = block_quotients(&pool, &blocks, d, n)?;
    let union = combine_blocks(&pool, &blocks, &xs, d, n, "4q-3 bound for q = n/d")?;
    finish(&pool, seq, &union, n as usize)
}

/// A zero-sum subsequence of length `n` from a zero-sum sequence over
/// `(Z/n)^2` of length at least `4n - l + 1`, `l` the least non-divisor
/// of `n` that is at least 4.
pub fn extract_square_n(seq: &Sequence) -> Result<Witness> {
    let n = square_modulus(seq)?;
    require_zero_sum(seq)?;
    let l = min_nondivisor(n, 4);
    let len = seq.len() as u64;
    if len + l < 4 * n + 1 {
        return Err(Error::Precondition(format!(
            "length {len} below 4n - l + 1 = {}",
            4 * n + 1 - l
        )));
    }
    if len + 3 >= 4 * n {
        return find_zero_sum_subseq(seq, n as usize)?
            .ok_or_else(|| Error::InvariantViolated(format!("4n-3 bound failed on {seq}")));
    }
    let d = 4 * n - len;
    debug_assert!(d >= 4 && d < l && n % d == 0);
    extract_square_block(seq, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::engine::has_zero_sum_of_length;

    fn seq(moduli: &[u64], counts: &[(&[u64], usize)]) -> Sequence {
        Sequence::from_coords(Group::new(moduli.to_vec()).unwrap(), counts).unwrap()
    }

    /// `len - 1` uniform terms plus the negated total.
    fn random_zero_sum(g: &Group, len: usize, rng: &mut ChaCha8Rng) -> Sequence {
        let order = g.order() as usize;
        let mut elems: Vec<GroupElement> = (0..len.saturating_sub(1))
            .map(|_| g.element_at(rng.gen_range(0..order)))
            .collect();
        let total = elems
            .iter()
            .fold(g.identity(), |acc, e| g.add(&acc, e).unwrap());
        if len > 0 {
            elems.push(g.neg(&total).unwrap());
        }
        Sequence::from_elements(g.clone(), elems).unwrap()
    }

    #[test]
    fn prime_split_examples() {
        assert_eq!(factor_smallest_prime(6).unwrap(), PrimeSplit { n: 6, p: 2, m: 3 });
        assert_eq!(factor_smallest_prime(9).unwrap(), PrimeSplit { n: 9, p: 3, m: 3 });
        assert_eq!(factor_smallest_prime(7).unwrap(), PrimeSplit { n: 7, p: 7, m: 1 });
        assert!(factor_smallest_prime(1).is_err());
    }

    #[test]
    fn cyclic_block_examples() {
        let s = seq(&[4], &[(&[1], 4), (&[2], 2)]);
        let w = extract_cyclic_block(&s, 2).unwrap();
        assert!(w.validates(&s, 4));
        assert!(has_zero_sum_of_length(&s, 4));

        let s = seq(&[2], &[(&[1], 2)]);
        let w = extract_cyclic_block(&s, 2).unwrap();
        assert_eq!(*w.as_sequence(), s);
    }

    #[test]
    fn cyclic_block_preconditions() {
        let s = seq(&[4], &[(&[1], 4), (&[2], 2)]);
        assert!(matches!(extract_cyclic_block(&s, 3), Err(Error::Precondition(_))));
        assert!(matches!(extract_cyclic_block(&s, 1), Err(Error::Precondition(_))));
        let not_zero = seq(&[4], &[(&[1], 5), (&[2], 1)]);
        assert!(matches!(extract_cyclic_block(&not_zero, 2), Err(Error::Precondition(_))));
        let sq = seq(&[2, 2], &[(&[0, 0], 2)]);
        assert!(extract_cyclic_block(&sq, 2).is_err());
    }

    #[test]
    fn decomposition_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Group::cyclic(12).unwrap();
        for _ in 0..200 {
            for d in [1, 2, 3, 4, 6, 12] {
                let s = random_zero_sum(&g, (24 - d) as usize, &mut rng);
                let dec = decompose_cyclic(&s, d).unwrap();
                assert_eq!(dec.blocks.len() as u64, 2 * (12 / d) - 1);
                let union = dec
                    .blocks
                    .iter()
                    .try_fold(Sequence::empty(g.clone()), |a, b| a.union(b))
                    .unwrap();
                assert_eq!(union, s);
                for ((b, sum), x) in dec.blocks.iter().zip(&dec.block_sums).zip(&dec.quotient_elems) {
                    assert_eq!(b.len() as u64, d);
                    assert_eq!(b.total_sum(), sum);
                    assert_eq!(sum.coords()[0] % d, 0);
                    assert_eq!((sum.coords()[0] / d) % (12 / d), x.coords()[0]);
                }
            }
        }
    }

    #[test]
    fn cyclic_nt_examples() {
        let s = seq(&[3], &[(&[0], 4), (&[1], 2), (&[2], 2)]);
        let w = extract_cyclic_nt(&s, 2).unwrap();
        assert!(w.validates(&s, 6));

        let s = seq(&[2], &[(&[0], 5), (&[1], 2)]);
        let w = extract_cyclic_nt(&s, 3).unwrap();
        assert!(w.validates(&s, 6));

        // t = 1 at the minimal length is the single dispatch
        let s = seq(&[6], &[(&[0], 1), (&[1], 5), (&[2], 2), (&[3], 1)]);
        assert!(s.is_zero_sum());
        assert_eq!(s.len(), 9);
        let rounds = extract_cyclic_rounds(&s, 1).unwrap();
        assert_eq!(rounds.len(), 1);
        assert!(rounds[0].validates(&s, 6));
        assert_eq!(extract_cyclic_block(&s, 3).unwrap().size(), 6);

        let short = seq(&[3], &[(&[0], 3), (&[1], 2), (&[2], 2)]);
        assert!(matches!(extract_cyclic_nt(&short, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn cyclic_rounds_are_disjoint_zero_sum_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8u64 {
            let g = Group::cyclic(n).unwrap();
            for t in 1..=3u64 {
                let min = (t + 1) * n + 1 - min_nondivisor(n, 1);
                for extra in 0..3 {
                    let s = random_zero_sum(&g, (min + extra) as usize, &mut rng);
                    let rounds = extract_cyclic_rounds(&s, t).unwrap();
                    let mut acc = Sequence::empty(g.clone());
                    for r in &rounds {
                        assert_eq!(r.size() as u64, n);
                        acc = acc.union(r.as_sequence()).unwrap();
                        assert!(acc.is_zero_sum());
                        assert!(s.contains_multiset(&acc));
                    }
                    assert!(extract_cyclic_nt(&s, t).unwrap().validates(&s, (n * t) as usize));
                }
            }
        }
    }

    #[test]
    fn square_3n_examples() {
        let s = seq(&[2, 2], &[(&[0, 0], 2), (&[0, 1], 2), (&[1, 0], 2)]);
        let w = extract_square_3n(&s).unwrap();
        assert!(w.validates(&s, 2));

        let s = seq(&[1, 1], &[(&[0, 0], 3)]);
        assert_eq!(extract_square_3n(&s).unwrap().size(), 1);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Group::power(3, 2).unwrap();
        for _ in 0..1000 {
            let s = random_zero_sum(&g, 9, &mut rng);
            let w = extract_square_3n(&s).unwrap();
            assert!(w.validates(&s, 3));
            assert!(has_zero_sum_of_length(&s, 3));
        }
    }

    #[test]
    fn square_3n_composite_moduli() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [4u64, 6, 8, 9] {
            let g = Group::power(n, 2).unwrap();
            for _ in 0..100 {
                let s = random_zero_sum(&g, 3 * n as usize, &mut rng);
                assert!(extract_square_3n(&s).unwrap().validates(&s, n as usize));
            }
        }
    }

    #[test]
    fn square_block_and_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = Group::power(2, 2).unwrap();
        let s = random_zero_sum(&g, 6, &mut rng);
        assert!(extract_square_block(&s, 2).unwrap().validates(&s, 2));

        let g4 = Group::power(4, 2).unwrap();
        for _ in 0..200 {
            let s = random_zero_sum(&g4, 12, &mut rng);
            assert!(extract_square_block(&s, 4).unwrap().validates(&s, 4));
            let dec = decompose_square(&s, 4).unwrap();
            assert_eq!(dec.blocks.len(), 1);
            let s = random_zero_sum(&g4, 14, &mut rng);
            let dec = decompose_square(&s, 2).unwrap();
            assert_eq!(dec.blocks.len(), 5);
            assert!(extract_square_block(&s, 2).unwrap().validates(&s, 4));
        }

        // length 5 = 4*2 - 3: direct path
        let s = seq(&[2, 2], &[(&[0, 0], 1), (&[0, 1], 2), (&[1, 0], 2)]);
        assert!(s.is_zero_sum());
        assert!(extract_square_n(&s).unwrap().validates(&s, 2));

        let g6 = Group::power(6, 2).unwrap();
        let s = random_zero_sum(&g6, 21, &mut rng);
        assert!(extract_square_n(&s).unwrap().validates(&s, 6));

        let g12 = Group::power(12, 2).unwrap();
        for _ in 0..10 {
            let s = random_zero_sum(&g12, 44, &mut rng);
            assert!(extract_square_n(&s).unwrap().validates(&s, 12));
        }
        let s = random_zero_sum(&g12, 43, &mut rng);
        assert!(matches!(extract_square_n(&s), Err(Error::Precondition(_))));
    }
}
