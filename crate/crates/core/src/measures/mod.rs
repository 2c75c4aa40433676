//! Weak, accept and strong stack-space measures per word, per length, and
//! the running-maximum envelope.

mod value;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use value::MeasureValue;

use crate::csa::{accepting_stacks, reachable_stacks, InputSpec};
use crate::error::{Error, Result};
use crate::model::{InputSym, StackMachine};
use crate::nfa::{LengthBound, Nfa};
use crate::oracle::{self, Budget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Weak,
    Accept,
    Strong,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Weak, Measure::Accept, Measure::Strong];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Weak => "weak",
            Measure::Accept => "accept",
            Measure::Strong => "strong",
        })
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "weak" | "w" => Ok(Measure::Weak),
            "accept" | "a" => Ok(Measure::Accept),
            "strong" | "s" => Ok(Measure::Strong),
            _ => Err(format!("unknown measure `{s}` (expected weak, accept or strong)")),
        }
    }
}

/// Knobs for per-length evaluation.
#[derive(Debug, Clone)]
pub struct MeasureOptions {
    /// Oracle budget for machines that are not checking stack automata.
    pub budget: Budget,
    /// Largest number of words of one length that will be enumerated.
    pub enum_budget: usize,
    /// Evaluate only these words instead of enumerating.
    pub words: Option<Vec<Vec<InputSym>>>,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            budget: Budget::default(),
            enum_budget: 100_000,
            words: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileRow {
    pub n: usize,
    pub sigma: MeasureValue,
    pub sigma_hat: MeasureValue,
    pub witness: Option<String>,
    /// Computed from a supplied word list rather than all words of length n.
    pub sampled: bool,
}

fn size_value(b: Option<LengthBound>) -> MeasureValue {
    match b {
        None => MeasureValue::Finite(0),
        Some(LengthBound::Finite(k)) => MeasureValue::Finite(k),
        Some(LengthBound::Infinite) => MeasureValue::Infinite,
    }
}

fn analytic(m: &StackMachine, input: InputSpec<'_>, z: Measure) -> Result<MeasureValue> {
    Ok(match z {
        Measure::Weak => MeasureValue::Finite(accepting_stacks(m, input)?.min_word_length().unwrap_or(0)),
        Measure::Accept => size_value(accepting_stacks(m, input)?.max_word_length()),
        Measure::Strong => size_value(reachable_stacks(m, input)?.max_word_length()),
    })
}

/// The measure `z` of `m` on `u`. Exact for checking stack automata; other
/// machines go through the bounded oracle and may come back as `AtLeast`.
pub fn sigma_u(m: &StackMachine, u: &[InputSym], z: Measure, budget: Budget) -> MeasureValue {
    if m.is_checking() {
        analytic(m, InputSpec::Word(u), z).expect("checking machine")
    } else {
        oracle::explore(m, u, budget).value(z)
    }
}

/// Accepting stacks as a regular set, exposed for callers that want the
/// automaton rather than a number.
pub fn accepting_stack_nfa(m: &StackMachine, u: &[InputSym]) -> Result<Nfa> {
    accepting_stacks(m, InputSpec::Word(u))
}

fn word_count(sigma: usize, n: usize) -> Option<usize> {
    if sigma == 0 {
        Some(usize::from(n == 0))
    } else {
        sigma.checked_pow(n as u32)
    }
}

/// The `k`-th word of length `n` in lexicographic order.
fn word_at(sigma: usize, n: usize, mut k: usize) -> Vec<InputSym> {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = k % sigma;
        k /= sigma;
    }
    w
}

fn all_words(sigma: usize, n: usize) -> impl Iterator<Item = Vec<InputSym>> {
    (0..word_count(sigma, n).unwrap_or(usize::MAX)).map(move |k| word_at(sigma, n, k))
}

/// `σᶻ(n)`: the maximum of `z` over words of length `n`. `sigma_hat` of the
/// returned row equals `sigma`; [`profile`] folds the envelope.
///
/// Accept and strong on checking machines come from the length analysis;
/// enumeration then only looks for the first word attaining the value.
pub fn sigma_n(m: &StackMachine, n: usize, z: Measure, opts: &MeasureOptions) -> Result<ProfileRow> {
    if let Some(words) = &opts.words {
        let list: Vec<Vec<InputSym>> = words.iter().filter(|w| w.len() == n).cloned().collect();
        return Ok(fold_words(m, n, z, opts, list, true));
    }
    let sigma = m.input_alphabet().len();
    let count = word_count(sigma, n).filter(|&c| c <= opts.enum_budget);
    if m.is_checking() && z != Measure::Weak {
        let v = analytic(m, InputSpec::Length(n), z)?;
        let witness = match count {
            Some(c) if v != MeasureValue::Finite(0) => (0..c)
                .into_par_iter()
                .map(|k| word_at(sigma, n, k))
                .find_first(|u| sigma_u(m, u, z, opts.budget) == v)
                .map(|u| m.format_word(&u)),
            _ => None,
        };
        return Ok(ProfileRow {
            n,
            sigma: v,
            sigma_hat: v,
            witness,
            sampled: false,
        });
    }
    if count.is_some() {
        return Ok(fold_words(m, n, z, opts, all_words(sigma, n).collect(), false));
    }
    let value = match z {
        Measure::Weak => None,
        Measure::Accept => Some(oracle::length_measures(m, n, opts.budget).0),
        Measure::Strong => Some(oracle::length_measures(m, n, opts.budget).1),
    };
    match value {
        Some(v) => Ok(ProfileRow {
            n,
            sigma: v,
            sigma_hat: v,
            witness: None,
            sampled: false,
        }),
        None => Err(Error::BudgetExceeded {
            n,
            words: (sigma as u128).saturating_pow(n as u32),
            budget: opts.enum_budget as u128,
        }),
    }
}

fn fold_words(
    m: &StackMachine,
    n: usize,
    z: Measure,
    opts: &MeasureOptions,
    words: Vec<Vec<InputSym>>,
    sampled: bool,
) -> ProfileRow {
    let values: Vec<MeasureValue> = words.par_iter().map(|u| sigma_u(m, u, z, opts.budget)).collect();
    let sigma = values.iter().fold(MeasureValue::Finite(0), |a, &b| a.join(b));
    // first word in enumeration order attaining the maximum
    let witness = words
        .iter()
        .zip(&values)
        .find(|&(_, &v)| v == sigma && v != MeasureValue::Finite(0))
        .map(|(u, _)| m.format_word(u));
    ProfileRow {
        n,
        sigma,
        sigma_hat: sigma,
        witness,
        sampled,
    }
}

/// Rows for `n = 0..=n_max` with the envelope `σ̂ᶻ(n) = max(σ̂ᶻ(n-1), σᶻ(n))`.
pub fn profile(m: &StackMachine, n_max: usize, z: Measure, opts: &MeasureOptions) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut hat = MeasureValue::Finite(0);
    for n in 0..=n_max {
        let mut row = sigma_n(m, n, z, opts)?;
        hat = hat.join(row.sigma);
        row.sigma_hat = hat;
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "1")]
    Constant,
    #[serde(rename = "sqrt(n)")]
    Sqrt,
    #[serde(rename = "n")]
    Linear,
}

impl Shape {
    fn eval(self, n: f64) -> f64 {
        match self {
            Shape::Constant => 1.0,
            Shape::Sqrt => n.sqrt(),
            Shape::Linear => n,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Constant => "1",
            Shape::Sqrt => "sqrt(n)",
            Shape::Linear => "n",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ShapeFit {
    pub shape: Shape,
    /// Least-squares `c` in `σ̂(n) ≈ c·f(n)`.
    pub coefficient: f64,
    /// Residual sum of squares divided by the sum of squared values.
    pub relative_residual: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsymptoticReport {
    pub best: Shape,
    pub rows_used: usize,
    pub fits: Vec<ShapeFit>,
}

/// Descriptive least-squares fit of the envelope against `1`, `√n` and `n`.
/// Uses rows with `n ≥ 1` and a finite envelope; ties go to the slower shape.
pub fn asymptotic_report(rows: &[ProfileRow]) -> Result<AsymptoticReport> {
    const NEEDED: usize = 8;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 1)
        .filter_map(|r| r.sigma_hat.finite().map(|y| (r.n as f64, y as f64)))
        .collect();
    if pts.len() < NEEDED {
        return Err(Error::TooFewRows {
            got: pts.len(),
            needed: NEEDED,
        });
    }
    let yy: f64 = pts.iter().map(|&(_, y)| y * y).sum();
    let fits: Vec<ShapeFit> = [Shape::Constant, Shape::Sqrt, Shape::Linear]
        .into_iter()
        .map(|shape| {
            let ff: f64 = pts.iter().map(|&(n, _)| shape.eval(n).powi(2)).sum();
            let yf: f64 = pts.iter().map(|&(n, y)| y * shape.eval(n)).sum();
            let c = yf / ff;
            let rss: f64 = pts.iter().map(|&(n, y)| (y - c * shape.eval(n)).powi(2)).sum();
            let ratios = pts.iter().map(|&(n, y)| y / shape.eval(n));
            let ratio_min = ratios.clone().fold(f64::INFINITY, f64::min);
            let ratio_max = ratios.fold(f64::NEG_INFINITY, f64::max);
            let relative_residual = if yy > 0.0 { rss / yy } else { 0.0 };
            ShapeFit {
                shape,
                coefficient: c,
                relative_residual,
                ratio_min,
                ratio_max,
            }
        })
        .collect();
    let best = fits
        .iter()
        .fold(None::<&ShapeFit>, |b, f| match b {
            Some(b) if b.relative_residual <= f.relative_residual + 1e-12 => Some(b),
            _ => Some(f),
        })
        .expect("three fits")
        .shape;
    Ok(AsymptoticReport {
        best,
        rows_used: pts.len(),
        fits,
    })
}

/// CSV with header `n,sigma,sigmaHat,witness`.
pub fn rows_to_csv(rows: &[ProfileRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "sigma", "sigmaHat", "witness"])
        .expect("in-memory write");
    for r in rows {
        let rec = [
            r.n.to_string(),
            r.sigma.to_string(),
            r.sigma_hat.to_string(),
            r.witness.clone().unwrap_or_default(),
        ];
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, v: usize) -> ProfileRow {
        let v = MeasureValue::Finite(v);
        ProfileRow {
            n,
            sigma: v,
            sigma_hat: v,
            witness: None,
            sampled: false,
        }
    }

    #[test]
    fn word_enumeration_order() {
        let w: Vec<_> = all_words(2, 2).collect();
        assert_eq!(w, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_words(0, 0).count(), 1);
        assert_eq!(all_words(0, 3).count(), 0);
    }

    #[test]
    fn fits_pick_the_obvious_shape() {
        let lin: Vec<_> = (0..=20).map(|n| row(n, n / 2)).collect();
        assert_eq!(asymptotic_report(&lin).unwrap().best, Shape::Linear);
        let flat: Vec<_> = (0..=20).map(|n| row(n, 0)).collect();
        assert_eq!(asymptotic_report(&flat).unwrap().best, Shape::Constant);
        let root: Vec<_> = (0..=400).map(|n| row(n, (n as f64).sqrt() as usize)).collect();
        assert_eq!(asymptotic_report(&root).unwrap().best, Shape::Sqrt);
        assert!(matches!(
            asymptotic_report(&lin[..5]),
            Err(Error::TooFewRows { got: 4, .. })
        ));
    }

    #[test]
    fn csv_rendering() {
        let mut r = row(3, 1);
        r.witness = Some("a#a".into());
        r.sigma_hat = MeasureValue::Infinite;
        assert_eq!(rows_to_csv(&[r.clone()]), "n,sigma,sigmaHat,witness\n3,1,inf,a#a\n");
        r.witness = Some("a,b".into());
        assert_eq!(rows_to_csv(&[r]), "n,sigma,sigmaHat,witness\n3,1,inf,\"a,b\"\n");
    }
}
