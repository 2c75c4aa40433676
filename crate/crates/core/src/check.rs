//! Cross-checks between the exact analyses and the brute-force oracle.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::csa::{accepting_stack_set, store_language, write_prefix_language, StoreWord};
use crate::error::Result;
use crate::measures::{sigma_u, Measure, MeasureValue};
use crate::model::{InputSym, StackMachine};
use crate::oracle::{self, Budget, Membership};

/// All words over an alphabet of `sigma` letters with length at most
/// `max_len`, shortest first, then lexicographic.
pub fn words_up_to(sigma: usize, max_len: usize) -> Vec<Vec<InputSym>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * sigma);
        for w in &layer {
            for a in 0..sigma {
                let mut v: Vec<InputSym> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub word: String,
    /// `membership` or a measure name.
    pub what: String,
    pub analytic: String,
    pub oracle: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Agreement {
    pub words: usize,
    pub compared: usize,
    pub uncertified: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Compares the exact per-word measures of a checking machine with the
/// oracle on every word up to `max_len`. Oracle values that are only lower
/// bounds are skipped (counted in `uncertified`) unless they already exceed
/// the exact value.
pub fn backend_agreement(m: &StackMachine, max_len: usize, budget: Budget) -> Result<Agreement> {
    m.require_checking()?;
    let words = words_up_to(m.input_alphabet().len(), max_len);
    let per_word: Vec<(usize, usize, Vec<Discrepancy>)> = words
        .par_iter()
        .map(|u| {
            let report = oracle::explore(m, u, budget);
            let shown = if u.is_empty() {
                "λ".to_string()
            } else {
                m.format_word(u)
            };
            let mut compared = 0;
            let mut uncertified = 0;
            let mut bad = Vec::new();
            let member = !accepting_stack_set(m, u).expect("checking").is_empty();
            match report.membership {
                Membership::Unknown => uncertified += 1,
                got => {
                    compared += 1;
                    if (got == Membership::Accepted) != member {
                        bad.push(Discrepancy {
                            word: shown.clone(),
                            what: "membership".into(),
                            analytic: member.to_string(),
                            oracle: format!("{got:?}").to_lowercase(),
                        });
                    }
                }
            }
            for z in Measure::ALL {
                let exact = sigma_u(m, u, z, budget);
                let seen = report.value(z);
                let agrees = match seen {
                    MeasureValue::AtLeast(k) => {
                        uncertified += 1;
                        match exact {
                            MeasureValue::Finite(e) => k <= e,
                            _ => true,
                        }
                    }
                    _ => {
                        compared += 1;
                        seen == exact
                    }
                };
                if !agrees {
                    bad.push(Discrepancy {
                        word: shown.clone(),
                        what: z.to_string(),
                        analytic: exact.to_string(),
                        oracle: seen.to_string(),
                    });
                }
            }
            (compared, uncertified, bad)
        })
        .collect();
    let mut out = Agreement {
        words: words.len(),
        ..Agreement::default()
    };
    for (c, u, bad) in per_word {
        out.compared += c;
        out.uncertified += u;
        out.discrepancies.extend(bad);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StoreCheck {
    /// Store words looked at.
    pub checked: usize,
    /// Whether the oracle search behind the check was exhaustive.
    pub oracle_complete: bool,
    /// Rendered store words on the wrong side.
    pub missing: Vec<String>,
}

/// Every store word the oracle collects (inputs up to `budget.input_cap`,
/// stacks up to `budget.stack_cap`) belongs to the store language.
pub fn store_soundness(m: &StackMachine, budget: Budget) -> Result<StoreCheck> {
    let store = store_language(m)?;
    let sample = oracle::store_sample(m, budget);
    let missing = sample
        .items
        .iter()
        .filter(|w| !store.accepts(&w.to_symbols(m)))
        .map(|w| w.display(m).to_string())
        .collect();
    Ok(StoreCheck {
        checked: sample.items.len(),
        oracle_complete: sample.complete,
        missing,
    })
}

/// Every member of the store language of length at most `max_len` shows
/// up in the oracle's store sample under `budget`.
pub fn store_completeness(m: &StackMachine, max_len: usize, budget: Budget) -> Result<StoreCheck> {
    let store = store_language(m)?;
    let sample = oracle::store_sample(m, budget);
    let mut checked = 0;
    let mut missing = Vec::new();
    for w in store.words_up_to(max_len) {
        checked += 1;
        match StoreWord::from_symbols(m, &w) {
            Some(sw) if sample.items.contains(&sw) => {}
            Some(sw) => missing.push(sw.display(m).to_string()),
            None => missing.push(format!("malformed: {}", store.format_word(&w))),
        }
    }
    Ok(StoreCheck {
        checked,
        oracle_complete: sample.complete,
        missing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrefixCheck {
    pub words: usize,
    pub members: usize,
    pub oracle_complete: bool,
    /// Accepted by the automaton but not found by the oracle.
    pub only_analytic: Vec<String>,
    /// Found by the oracle but rejected by the automaton.
    pub only_oracle: Vec<String>,
}

/// Write-phase prefix automaton against the oracle's collected prefixes on
/// every word up to `max_len`.
pub fn prefix_agreement(m: &StackMachine, max_len: usize, budget: Budget) -> Result<PrefixCheck> {
    let lwm = write_prefix_language(m)?;
    let sample = oracle::write_phase_prefixes(
        m,
        Budget {
            input_cap: max_len,
            ..budget
        },
    );
    let show = |u: &[InputSym]| {
        if u.is_empty() {
            "λ".to_string()
        } else {
            m.format_word(u)
        }
    };
    let words = words_up_to(m.input_alphabet().len(), max_len);
    let analytic: BTreeSet<Vec<InputSym>> = words.iter().filter(|u| lwm.accepts(u)).cloned().collect();
    Ok(PrefixCheck {
        words: words.len(),
        members: analytic.len(),
        oracle_complete: sample.complete,
        only_analytic: analytic.difference(&sample.items).map(|u| show(u)).collect(),
        only_oracle: sample.items.difference(&analytic).map(|u| show(u)).collect(),
    })
}
