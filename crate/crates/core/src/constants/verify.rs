//! Theorem-level verification suites built on the search and the extractors.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::formulas::{conjecture_value, formula_modified_cyclic, formula_modified_square};
use super::report::{
    brute_force_modified_constant, check_lemma_por2p, random_zero_sum, CheckMode, ConstantReport,
    Por2pReport, ReportStatus,
};
use super::search::{check_length, enumerate_zero_sum_multisets, SearchConfig};
use crate::engine::find_zero_sum_subseq;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::proofs::extract_square_3n;
use crate::sequence::Sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Cyclic,
    Square,
    Egz,
    Reiher,
    Lemma3n,
    Por2p,
    Conjecture,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "cyclic" => Suite::Cyclic,
            "square" => Suite::Square,
            "egz" => Suite::Egz,
            "reiher" => Suite::Reiher,
            "lemma3n" => Suite::Lemma3n,
            "por2p" => Suite::Por2p,
            "conjecture" => Suite::Conjecture,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Cyclic => "cyclic",
            Suite::Square => "square",
            Suite::Egz => "egz",
            Suite::Reiher => "reiher",
            Suite::Lemma3n => "lemma3n",
            Suite::Por2p => "por2p",
            Suite::Conjecture => "conjecture",
        };
        f.write_str(s)
    }
}

/// Parameter lists for a suite. `None` selects the suite's default.
#[derive(Clone, Debug, Default)]
pub struct VerifyParams {
    pub n: Option<Vec<u64>>,
    pub t: Option<Vec<u64>>,
    pub r: Option<Vec<u32>>,
    pub p: Option<Vec<u64>>,
    pub window: Option<usize>,
    pub samples: Option<u64>,
    pub seed: u64,
    /// Lemma (3n) sizes up to this `n` are enumerated in full.
    pub exhaustive_max_n: Option<u64>,
    /// Adds the larger square case (`n = 4`).
    pub extended: bool,
}

/// Parses `2..8`, `2..=8`, `5`, or `2,3,4,6`.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: FromStr + Copy + PartialOrd + TryFrom<u64> + Into<u64>,
{
    let bad = || Error::Parse(format!("bad range or list {text:?}"));
    let num = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (lo, hi): (u64, u64) = (num(a)?.into(), num(b)?.into());
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi)
            .map(|v| T::try_from(v).map_err(|_| bad()))
            .collect()
    } else {
        text.split(',').map(num).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub group: String,
    pub length: usize,
    pub k: usize,
    pub mode: String,
    pub holds: bool,
    pub multisets_covered: u64,
    pub sequences_checked: u64,
    pub engine_failures: u64,
    pub extractor_failures: u64,
    pub counterexample: Option<Sequence>,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SuiteRow {
    Constant(ConstantReport),
    Property(PropertyReport),
    Por2p(Por2pReport),
}

impl SuiteRow {
    pub fn passed(&self) -> bool {
        match self {
            SuiteRow::Constant(c) => c.status != ReportStatus::Discrepancy && c.extremal_check.valid,
            SuiteRow::Property(p) => p.holds,
            SuiteRow::Por2p(p) => p.violations == 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub suite: Suite,
    pub all_passed: bool,
    pub rows: Vec<SuiteRow>,
}

pub fn verify_theorem(suite: Suite, params: &VerifyParams, config: &SearchConfig) -> Result<VerifyOutcome> {
    let window = params.window.unwrap_or(super::report::DEFAULT_WINDOW);
    let rows = match suite {
        Suite::Cyclic => {
            let ns = params.n.clone().unwrap_or_else(|| (2..=8).collect());
            let ts = params.t.clone().unwrap_or_else(|| vec![1]);
            let mut rows = Vec::new();
            for &n in &ns {
                let g = Group::cyclic(n)?;
                for &t in &ts {
                    let claimed = formula_modified_cyclic(n, t);
                    let r = brute_force_modified_constant(&g, (n * t) as usize, window, Some(claimed), config)?;
                    rows.push(SuiteRow::Constant(r));
                }
            }
            rows
        }
        Suite::Square => {
            let default_ns = if params.extended { vec![2, 3, 4] } else { vec![2, 3] };
            let ns = params.n.clone().unwrap_or(default_ns);
            ns.iter()
                .map(|&n| {
                    let g = Group::power(n, 2)?;
                    let claimed = formula_modified_square(n);
                    brute_force_modified_constant(&g, n as usize, window, Some(claimed), config)
                        .map(SuiteRow::Constant)
                })
                .collect::<Result<_>>()?
        }
        Suite::Egz => {
            let ns = params.n.clone().unwrap_or_else(|| (2..=10).collect());
            ns.iter()
                .map(|&n| {
                    every_multiset_has(
                        "every sequence of length 2n-1 has a zero-sum n-subsequence",
                        &Group::cyclic(n)?,
                        (2 * n - 1) as usize,
                        n as usize,
                        config,
                    )
                })
                .collect::<Result<_>>()?
        }
        Suite::Reiher => {
            let ns = params.n.clone().unwrap_or_else(|| vec![2, 3]);
            ns.iter()
                .map(|&n| {
                    every_multiset_has(
                        "every sequence of length 4n-3 has a zero-sum n-subsequence",
                        &Group::power(n, 2)?,
                        (4 * n - 3) as usize,
                        n as usize,
                        config,
                    )
                })
                .collect::<Result<_>>()?
        }
        Suite::Lemma3n => {
            let ns = params.n.clone().unwrap_or_else(|| vec![2, 3, 4, 6]);
            let exhaustive_max = params.exhaustive_max_n.unwrap_or(3);
            let samples = params.samples.unwrap_or(1000);
            ns.iter()
                .map(|&n| lemma_3n(n, n <= exhaustive_max, samples, params.seed, config).map(SuiteRow::Property))
                .collect::<Result<_>>()?
        }
        Suite::Por2p => {
            let ps = params.p.clone().unwrap_or_else(|| vec![2, 3]);
            let samples = params.samples.unwrap_or(10_000);
            ps.iter()
                .map(|&p| {
                    let mode = if p == 2 {
                        CheckMode::Exhaustive
                    } else {
                        CheckMode::Sample {
                            count: samples,
                            seed: params.seed,
                        }
                    };
                    check_lemma_por2p(p, mode, config).map(SuiteRow::Por2p)
                })
                .collect::<Result<_>>()?
        }
        Suite::Conjecture => {
            let rs = params.r.clone().unwrap_or_else(|| vec![1, 2, 3]);
            rs.iter()
                .map(|&r| {
                    let g = Group::power(2, r as usize)?;
                    let claimed = conjecture_value(2, r)?;
                    brute_force_modified_constant(&g, 2, window, Some(claimed), config)
                        .map(SuiteRow::Constant)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(VerifyOutcome {
        suite,
        all_passed: rows.iter().all(SuiteRow::passed),
        rows,
    })
}

fn every_multiset_has(
    property: &str,
    group: &Group,
    length: usize,
    k: usize,
    config: &SearchConfig,
) -> Result<SuiteRow> {
    let start = Instant::now();
    let v = check_length(group, k, length, false, config)?;
    Ok(SuiteRow::Property(PropertyReport {
        property: property.to_string(),
        group: group.to_string(),
        length,
        k,
        mode: "exhaustive".into(),
        holds: v.pass,
        multisets_covered: v.stats.multisets_covered,
        sequences_checked: v.stats.sequences_checked,
        engine_failures: u64::from(!v.pass),
        extractor_failures: 0,
        counterexample: v.first_failure,
        wall_ms: start.elapsed().as_millis() as u64,
    }))
}

/// Both the engine and the recursive extractor must produce a length-`n`
/// zero-sum subsequence of each zero-sum sequence of length `3n` over
/// `(Z/n)^2`.
pub fn lemma_3n(n: u64, exhaustive: bool, samples: u64, seed: u64, config: &SearchConfig) -> Result<PropertyReport> {
    let start = Instant::now();
    let group = Group::power(n, 2)?;
    let length = 3 * n as usize;
    let mut tested = 0u64;
    let mut engine_failures = 0u64;
    let mut extractor_failures = 0u64;
    let mut counterexample = None;
    let mut judge = |s: &Sequence| {
        tested += 1;
        let engine_ok = matches!(find_zero_sum_subseq(s, n as usize), Ok(Some(w)) if w.validates(s, n as usize));
        let extractor_ok = matches!(extract_square_3n(s), Ok(w) if w.validates(s, n as usize));
        engine_failures += u64::from(!engine_ok);
        extractor_failures += u64::from(!extractor_ok);
        if !(engine_ok && extractor_ok) && counterexample.is_none() {
            counterexample = Some(s.clone());
        }
    };
    let mode = if exhaustive {
        enumerate_zero_sum_multisets(&group, length, false, &config.budget, |s| {
            judge(s);
            ControlFlow::Continue(())
        })?;
        "exhaustive".to_string()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n);
        for _ in 0..samples {
            judge(&random_zero_sum(&group, length, &mut rng));
        }
        format!("sample:{samples}")
    };
    Ok(PropertyReport {
        property: "every zero-sum sequence of length 3n has a zero-sum n-subsequence".into(),
        group: group.to_string(),
        length,
        k: n as usize,
        mode,
        holds: engine_failures == 0 && extractor_failures == 0,
        multisets_covered: tested,
        sequences_checked: tested,
        engine_failures,
        extractor_failures,
        counterexample,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_syntax() {
        assert_eq!(parse_list::<u64>("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_list::<u64>("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_list::<u64>("2,3,4,6").unwrap(), vec![2, 3, 4, 6]);
        assert_eq!(parse_list::<u32>("7").unwrap(), vec![7]);
        assert!(parse_list::<u64>("5..2").is_err());
        assert!(parse_list::<u64>("a..b").is_err());
    }

    #[test]
    fn suites_small() {
        let config = SearchConfig::default();
        let p = VerifyParams {
            n: Some(vec![3]),
            ..VerifyParams::default()
        };
        let egz = verify_theorem(Suite::Egz, &p, &config).unwrap();
        assert!(egz.all_passed);
        let SuiteRow::Property(row) = &egz.rows[0] else { panic!() };
        assert_eq!(row.multisets_covered, 21);

        let sq = verify_theorem(Suite::Square, &VerifyParams { n: Some(vec![2]), ..VerifyParams::default() }, &config).unwrap();
        assert!(sq.all_passed);
        let SuiteRow::Constant(c) = &sq.rows[0] else { panic!() };
        assert_eq!(c.computed_value, 5);

        let l = verify_theorem(
            Suite::Lemma3n,
            &VerifyParams { n: Some(vec![2, 4]), samples: Some(50), ..VerifyParams::default() },
            &config,
        )
        .unwrap();
        assert!(l.all_passed);
        assert_eq!(l.rows.len(), 2);
    }

    #[test]
    fn suite_names() {
        for s in ["cyclic", "square", "egz", "reiher", "lemma3n", "por2p", "conjecture"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
