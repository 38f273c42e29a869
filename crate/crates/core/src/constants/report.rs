use std::ops::ControlFlow;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::search::{check_length_in, enumerate_multisets, pool, Control, EnumerationStats, SearchConfig, SearchStrategy};
use crate::engine::{count_zero_sum_subseqs, CountValue, TargetLengths};
use crate::error::{Error, Result};
use crate::extremal::{validate_extremal, ExtremalReport};
use crate::group::{is_prime, Group};
use crate::sequence::Sequence;

pub const DEFAULT_WINDOW: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReportStatus {
    Match,
    Discrepancy,
    Unclaimed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthRecord {
    pub length: usize,
    pub pass: bool,
    pub multisets_covered: u64,
    pub sequences_checked: u64,
}

/// Brute-force determination of `s'_t(G)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    pub group: String,
    pub moduli: Vec<u64>,
    pub t: usize,
    pub claimed_value: Option<u64>,
    pub computed_value: u64,
    pub status: ReportStatus,
    /// Longest zero-sum sequence found without a length-`t` zero-sum
    /// subsequence; its length is `computed_value - 1`.
    pub extremal_witness: Sequence,
    pub extremal_check: ExtremalReport,
    pub window: usize,
    /// Inclusive range of lengths at which every zero-sum sequence was
    /// confirmed to contain a length-`t` zero-sum subsequence.
    pub verified_window: [u64; 2],
    /// The "every length at least v" clause is checked only on the window.
    pub tail_note: String,
    pub strategy: SearchStrategy,
    pub lengths: Vec<LengthRecord>,
    pub stats: EnumerationStats,
    pub wall_ms: u64,
}

impl ConstantReport {
    pub fn is_match(&self) -> bool {
        self.status != ReportStatus::Discrepancy
    }
}

/// Scans lengths upward from 0. `s'_t` is one past the last failing length,
/// once `window + 1` consecutive lengths beyond it pass.
pub fn brute_force_modified_constant(
    group: &Group,
    t: usize,
    window: usize,
    claimed: Option<u64>,
    config: &SearchConfig,
) -> Result<ConstantReport> {
    if t == 0 {
        return Err(Error::Precondition("t must be >= 1".into()));
    }
    let exp = group.exponent() as usize;
    if t % exp != 0 {
        // a cyclic subgroup of order exp(G), repeated, never sums to zero in t terms
        return Err(Error::Unbounded(format!(
            "exp({group}) = {exp} does not divide t = {t}"
        )));
    }
    let start = Instant::now();
    let control = Control::new(&config.budget);
    let workers = pool(config.workers)?;

    let mut lengths = Vec::new();
    let mut stats = EnumerationStats::default();
    let mut last_failure: Option<(usize, Sequence)> = None;
    let mut streak = 0usize;
    let mut length = 0usize;
    loop {
        if length > config.budget.max_length {
            return Err(Error::BudgetExhausted(format!(
                "{group}, t = {t}: no stable window up to length {}",
                config.budget.max_length
            )));
        }
        let v = check_length_in(group, t, length, true, config, &control, &workers)?;
        stats.merge(&v.stats);
        lengths.push(LengthRecord {
            length,
            pass: v.pass,
            multisets_covered: v.stats.multisets_covered,
            sequences_checked: v.stats.sequences_checked,
        });
        if v.pass {
            streak += 1;
            if streak > window {
                break;
            }
        } else {
            streak = 0;
            last_failure = v.first_failure.map(|s| (length, s));
        }
        length += 1;
    }

    let (fail_len, witness) = last_failure.expect("the empty sequence always fails");
    let computed_value = fail_len as u64 + 1;
    let forbidden = TargetLengths::single(t)?;
    let extremal_check = validate_extremal(&witness, &forbidden);
    let status = match claimed {
        None => ReportStatus::Unclaimed,
        Some(c) if c == computed_value => ReportStatus::Match,
        Some(_) => ReportStatus::Discrepancy,
    };
    Ok(ConstantReport {
        group: group.to_string(),
        moduli: group.moduli().to_vec(),
        t,
        claimed_value: claimed,
        computed_value,
        status,
        extremal_witness: witness,
        extremal_check,
        window,
        verified_window: [computed_value, computed_value + window as u64],
        tail_note: format!(
            "lengths beyond {} are not enumerated",
            computed_value + window as u64
        ),
        strategy: config.strategy.clone(),
        lengths,
        stats,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// Outcome of testing the `(p | J) = 0  =>  (2p | J) = -1 (mod p)`
/// congruence over `(Z/p)^2` at `|J| in {3p-2, 3p-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Por2pReport {
    pub p: u64,
    pub mode: CheckMode,
    pub sizes: [usize; 2],
    pub tested: u64,
    /// Sequences with `(p | J) > 0`, where the implication holds vacuously.
    pub vacuous: u64,
    pub violations: u64,
    pub first_violation: Option<Sequence>,
}

pub fn check_lemma_por2p(p: u64, mode: CheckMode, config: &SearchConfig) -> Result<Por2pReport> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let group = Group::power(p, 2)?;
    let sizes = [(3 * p - 2) as usize, (3 * p - 1) as usize];
    let mut report = Por2pReport {
        p,
        mode,
        sizes,
        tested: 0,
        vacuous: 0,
        violations: 0,
        first_violation: None,
    };
    let judge = |j: &Sequence, report: &mut Por2pReport| -> Result<()> {
        report.tested += 1;
        if !count_zero_sum_subseqs(j, p as usize, None)?.is_zero() {
            report.vacuous += 1;
            return Ok(());
        }
        let residue = count_zero_sum_subseqs(j, 2 * p as usize, Some(p))?;
        if residue.value != (CountValue::Residue { value: p - 1, modulus: p }) {
            report.violations += 1;
            report.first_violation.get_or_insert_with(|| j.clone());
        }
        Ok(())
    };
    match mode {
        CheckMode::Exhaustive => {
            for &size in &sizes {
                let mut err = None;
                enumerate_multisets(&group, size, false, false, &config.budget, |j| {
                    match judge(j, &mut report) {
                        Ok(()) => ControlFlow::Continue(()),
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(())
                        }
                    }
                })?;
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        CheckMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let order = group.order() as usize;
            for i in 0..count {
                let size = sizes[(i % 2) as usize];
                let j = Sequence::from_elements(
                    group.clone(),
                    (0..size).map(|_| group.element_at(rng.gen_range(0..order))),
                )?;
                judge(&j, &mut report)?;
            }
        }
    }
    Ok(report)
}

/// `len - 1` uniform terms closed off by the negated total.
pub fn random_zero_sum(group: &Group, len: usize, rng: &mut impl Rng) -> Sequence {
    let order = group.order() as usize;
    let mut elems: Vec<_> = (0..len.saturating_sub(1))
        .map(|_| group.element_at(rng.gen_range(0..order)))
        .collect();
    if len > 0 {
        let total = elems
            .iter()
            .fold(group.identity(), |acc, e| group.add_unchecked(&acc, e));
        elems.push(group.neg(&total).expect("total lies in the group"));
    }
    Sequence::from_elements(group.clone(), elems).expect("elements lie in the group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::formulas::{formula_modified_cyclic, formula_modified_square};

    fn config() -> SearchConfig {
        SearchConfig {
            workers: 2,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn brute_force_examples() {
        let z2 = Group::cyclic(2).unwrap();
        let r = brute_force_modified_constant(&z2, 2, 2, None, &config()).unwrap();
        assert_eq!(r.computed_value, 2);
        assert_eq!(r.extremal_witness, Sequence::from_coords(z2, &[(&[0], 1)]).unwrap());
        assert_eq!(r.verified_window, [2, 4]);
        assert_eq!(r.status, ReportStatus::Unclaimed);

        let z3 = Group::cyclic(3).unwrap();
        let r = brute_force_modified_constant(&z3, 3, 2, Some(formula_modified_cyclic(3, 1)), &config()).unwrap();
        assert_eq!(r.computed_value, 5);
        assert_eq!(r.status, ReportStatus::Match);
        assert_eq!(
            r.extremal_witness,
            Sequence::from_coords(z3, &[(&[1], 2), (&[2], 2)]).unwrap()
        );
        assert!(r.extremal_check.valid);

        let v4 = Group::power(2, 2).unwrap();
        let r = brute_force_modified_constant(&v4, 2, 2, Some(formula_modified_square(2)), &config()).unwrap();
        assert_eq!(r.computed_value, 5);
        assert_eq!(r.extremal_witness.distinct(), 4);
        assert_eq!(r.extremal_witness.len(), 4);
    }

    #[test]
    fn discrepancy_is_flagged() {
        let z3 = Group::cyclic(3).unwrap();
        let r = brute_force_modified_constant(&z3, 3, 2, Some(6), &config()).unwrap();
        assert_eq!(r.status, ReportStatus::Discrepancy);
    }

    #[test]
    fn unbounded_and_bad_targets() {
        let z4 = Group::cyclic(4).unwrap();
        assert!(matches!(
            brute_force_modified_constant(&z4, 2, 2, None, &config()),
            Err(Error::Unbounded(_))
        ));
        assert!(brute_force_modified_constant(&z4, 0, 2, None, &config()).is_err());
    }

    #[test]
    fn strategies_agree_on_constants() {
        for moduli in [vec![4u64], vec![5], vec![6], vec![3, 3]] {
            let g = Group::new(moduli).unwrap();
            let t = g.exponent() as usize;
            let values: Vec<u64> = [
                SearchStrategy::Pruned,
                SearchStrategy::Enumerate { symmetry: false },
                SearchStrategy::Enumerate { symmetry: true },
            ]
            .into_iter()
            .map(|strategy| {
                let c = SearchConfig { strategy, ..config() };
                brute_force_modified_constant(&g, t, 1, None, &c).unwrap().computed_value
            })
            .collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "{g}: {values:?}");
        }
    }

    #[test]
    fn por2p_examples() {
        let v4 = Group::power(2, 2).unwrap();
        let j = Sequence::from_elements(v4.clone(), v4.elements()).unwrap();
        assert!(count_zero_sum_subseqs(&j, 2, None).unwrap().is_zero());
        assert_eq!(
            count_zero_sum_subseqs(&j, 4, Some(2)).unwrap().value,
            CountValue::Residue { value: 1, modulus: 2 }
        );

        let r = check_lemma_por2p(2, CheckMode::Exhaustive, &config()).unwrap();
        assert_eq!(r.tested, 35 + 56);
        assert_eq!(r.violations, 0);
        assert!(r.tested > r.vacuous);

        let r = check_lemma_por2p(3, CheckMode::Sample { count: 500, seed: 1 }, &config()).unwrap();
        assert_eq!(r.tested, 500);
        assert_eq!(r.violations, 0);
        assert!(check_lemma_por2p(4, CheckMode::Exhaustive, &config()).is_err());
    }
}
