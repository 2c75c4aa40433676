//! The bundled example machines with their expected properties.
//!
//! Each machine lives in `corpus/<name>.sam` next to `corpus/<name>.expect.json`.
//! Both files are compiled into the library.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::deciders::{classify, is_constant_space, is_z_limited, Verdict};
use crate::error::{Error, Result};
use crate::measures::{sigma_n, sigma_u, Measure, MeasureOptions, MeasureValue};
use crate::model::{parse_machine, MachineClass, StackMachine};
use crate::oracle::{self, language_sample, Budget, Membership};

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name,
            include_str!(concat!("../../../corpus/", $name, ".sam")),
            include_str!(concat!("../../../corpus/", $name, ".expect.json")))),*]
    };
}

const FILES: &[(&str, &str, &str)] = corpus_files![
    "comp",
    "ww",
    "copy",
    "kdistinct",
    "pref",
    "xpad",
    "copyinput",
    "nopush",
    "empty"
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct WordValue {
    pub word: String,
    pub measure: Measure,
    pub value: MeasureValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LengthValue {
    pub n: usize,
    pub measure: Measure,
    pub value: MeasureValue,
}

/// All three measures at every length up to `n_max` lie in
/// `[⌈√(n/2)⌉ - 2, ⌊2√n⌋ + 1]` and are finite. Lengths are evaluated over
/// the accepted words the oracle finds, with stack cap `stack_cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SqrtWindow {
    pub n_max: usize,
    pub stack_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Expectations {
    pub name: String,
    pub class: MachineClass,
    pub note: String,
    #[serde(default)]
    pub members: Vec<String>,
    #[serde(default)]
    pub non_members: Vec<String>,
    #[serde(default)]
    pub sigma: Vec<WordValue>,
    #[serde(default)]
    pub sigma_n: Vec<LengthValue>,
    #[serde(default)]
    pub limited: BTreeMap<Measure, bool>,
    #[serde(default)]
    pub constant: BTreeMap<Measure, bool>,
    #[serde(default)]
    pub classify: BTreeMap<Measure, Verdict>,
    #[serde(default)]
    pub sqrt_window: Option<SqrtWindow>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub path: String,
    pub source: String,
    pub machine: StackMachine,
    pub expected: Expectations,
}

/// Parses and cross-checks every bundled machine and expectation file.
pub fn load_corpus() -> Result<Vec<CorpusEntry>> {
    FILES
        .iter()
        .map(|&(name, src, json)| load_entry(name, src, json))
        .collect()
}

/// One bundled entry by name.
pub fn corpus_entry(name: &str) -> Result<CorpusEntry> {
    let &(n, src, json) = FILES
        .iter()
        .find(|f| f.0 == name)
        .ok_or_else(|| Error::Corpus(format!("no corpus machine `{name}`")))?;
    load_entry(n, src, json)
}

pub fn load_entry(name: &str, src: &str, json: &str) -> Result<CorpusEntry> {
    let machine = parse_machine(src)?;
    let expected: Expectations =
        serde_json::from_str(json).map_err(|e| Error::Corpus(format!("{name}.expect.json: {e}")))?;
    let bad = |msg: String| Err(Error::Corpus(format!("{name}: {msg}")));
    if expected.name != name || machine.name() != name {
        return bad(format!(
            "names disagree: file {name}, machine {}, expectations {}",
            machine.name(),
            expected.name
        ));
    }
    if expected.class != machine.class() {
        return bad(format!(
            "declared {} but expectations say {}",
            machine.class(),
            expected.class
        ));
    }
    let decides = !(expected.limited.is_empty() && expected.constant.is_empty() && expected.classify.is_empty());
    if decides && machine.class() != MachineClass::Csa {
        return bad("decider expectations need a CSA".into());
    }
    let keys = expected
        .limited
        .keys()
        .chain(expected.constant.keys())
        .chain(expected.classify.keys());
    if keys.clone().any(|&z| z == Measure::Weak) {
        return bad("deciders take accept or strong only".into());
    }
    for w in expected
        .members
        .iter()
        .chain(&expected.non_members)
        .chain(expected.sigma.iter().map(|s| &s.word))
    {
        machine
            .parse_word(w)
            .map_err(|e| Error::Corpus(format!("{name}: word `{w}`: {e}")))?;
    }
    Ok(CorpusEntry {
        name: name.to_string(),
        path: format!("corpus/{name}.sam"),
        source: src.to_string(),
        machine,
        expected,
    })
}

/// Outcome of one expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

fn check(label: String, expected: impl std::fmt::Display, got: impl std::fmt::Display) -> Check {
    let (e, g) = (expected.to_string(), got.to_string());
    Check {
        label,
        passed: e == g,
        detail: format!("expected {e}, got {g}"),
    }
}

fn err_check(label: String, e: Error) -> Check {
    Check {
        label,
        passed: false,
        detail: e.to_string(),
    }
}

/// Runs every expectation of `entry`.
pub fn check_entry(entry: &CorpusEntry, budget: Budget) -> Vec<Check> {
    let m = &entry.machine;
    let x = &entry.expected;
    let mut out = Vec::new();
    let word = |w: &str| m.parse_word(w).expect("validated on load");
    let show = |w: &str| if w.is_empty() { "λ".to_string() } else { w.to_string() };
    let csa = m.is_checking();

    for (list, want) in [(&x.members, true), (&x.non_members, false)] {
        for w in list {
            let label = format!("{} {} L", show(w), if want { "in" } else { "not in" });
            let got = if csa {
                !crate::csa::accepting_stack_set(m, &word(w))
                    .expect("checking")
                    .is_empty()
            } else {
                match oracle::explore(m, &word(w), budget).membership {
                    Membership::Accepted => true,
                    Membership::Rejected => false,
                    Membership::Unknown => {
                        out.push(Check {
                            label,
                            passed: false,
                            detail: "oracle budget exhausted".into(),
                        });
                        continue;
                    }
                }
            };
            out.push(check(label, want, got));
        }
    }
    for s in &x.sigma {
        let got = sigma_u(m, &word(&s.word), s.measure, budget);
        out.push(check(format!("{} on {}", s.measure, show(&s.word)), s.value, got));
    }
    let opts = MeasureOptions {
        budget,
        ..MeasureOptions::default()
    };
    for s in &x.sigma_n {
        let label = format!("{}(n={})", s.measure, s.n);
        match sigma_n(m, s.n, s.measure, &opts) {
            Ok(row) => out.push(check(label, s.value, row.sigma)),
            Err(e) => out.push(err_check(label, e)),
        }
    }
    for (&z, &want) in &x.limited {
        let label = format!("{z}-limited");
        match is_z_limited(m, z) {
            Ok(l) => out.push(check(label, want, l.limited)),
            Err(e) => out.push(err_check(label, e)),
        }
    }
    for (&z, &want) in &x.constant {
        let label = format!("{z} constant space");
        match is_constant_space(m, z) {
            Ok(c) => out.push(check(label, want, c)),
            Err(e) => out.push(err_check(label, e)),
        }
    }
    for (&z, &want) in &x.classify {
        let label = format!("classify {z}");
        match classify(m, z) {
            Ok(v) => out.push(check(label, want, v.verdict)),
            Err(e) => out.push(err_check(label, e)),
        }
    }
    if let Some(w) = &x.sqrt_window {
        out.extend(sqrt_window(m, w, budget));
    }
    out
}

/// Lower and upper ends of the square-root window at length `n`.
pub fn window_bounds(n: usize) -> (i64, i64) {
    let lo = ((n as f64 / 2.0).sqrt().ceil() as i64) - 2;
    let hi = (2.0 * (n as f64).sqrt()).floor() as i64 + 1;
    (lo, hi)
}

fn sqrt_window(m: &StackMachine, w: &SqrtWindow, budget: Budget) -> Vec<Check> {
    let budget = Budget {
        stack_cap: w.stack_cap,
        input_cap: w.n_max,
        ..budget
    };
    let sample = language_sample(m, budget);
    let words: Vec<_> = sample.items.into_iter().collect();
    let opts = MeasureOptions {
        budget,
        enum_budget: 0,
        words: Some(words),
    };
    let mut out = Vec::new();
    for z in Measure::ALL {
        let mut bad = Vec::new();
        for n in 0..=w.n_max {
            let v = match z {
                Measure::Weak => sigma_n(m, n, z, &opts).map(|r| r.sigma),
                _ => sigma_n(
                    m,
                    n,
                    z,
                    &MeasureOptions {
                        words: None,
                        ..opts.clone()
                    },
                )
                .map(|r| r.sigma),
            };
            let (lo, hi) = window_bounds(n);
            match v {
                Ok(MeasureValue::Finite(k)) if (lo..=hi).contains(&(k as i64)) => {}
                Ok(v) => bad.push(format!("n={n}: {v} outside [{lo}, {hi}]")),
                Err(e) => bad.push(format!("n={n}: {e}")),
            }
        }
        out.push(Check {
            label: format!("{z} within sqrt window up to n={}", w.n_max),
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "all finite and inside".into()
            } else {
                bad.join("; ")
            },
        });
    }
    out
}
