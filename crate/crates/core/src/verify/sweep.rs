//! The family sweep on `S_7`: for every connected class union `T` and every
//! depth `k < m`, compare `λ₂(Cay(S_7, T_k))` with the counting value
//! `|T_k ∩ Γ_{k+1}| − |T_k ∩ Γ_{k+2,k+1}|`.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{all_outcomes, Outcome, REPORT_SCHEMA_VERSION};
use crate::characters::{lambda2_exact, normal_spectrum};
use crate::error::{Error, Result};
use crate::graph::{build_graph_cached, lanczos_lambda2, TranslationCache};
use crate::lanczos::LanczosConfig;
use crate::quotient::{lambda2_counting, quotient_matrix};
use crate::sets::{build_connection_set, derive_tk, FamilyIndex, StabilizerScope};

/// An eigenvalue equals an integer when it is this close to it.
pub const ROUNDING_TOL: f64 = 1e-6;

/// A converged value this far from the counting value is a genuine failure.
pub const HARD_FAIL_GAP: f64 = 0.5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOptions {
    pub n: usize,
    pub lanczos: LanczosConfig,
    /// Families to run; `None` means all connected families.
    pub families: Option<Vec<FamilyIndex>>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            n: 7,
            lanczos: LanczosConfig::default(),
            families: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eq24Verdict {
    pub family: FamilyIndex,
    pub k: usize,
    /// `|T_k|`, the valency of `G_k`.
    pub degree: usize,
    /// Lanczos `λ₂(G_k)`; absent when the solver failed.
    pub lhs: Option<f64>,
    /// The counting value.
    pub rhs: i64,
    /// Lanczos residual estimate.
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    /// Dense `λ₂` of the quotient `B^(k)`.
    pub quotient_lambda2: f64,
    /// `λ₂` from the character table (`k = 0` only).
    pub exact: Option<i64>,
    pub connected: bool,
    pub outcome: Outcome,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub family: FamilyIndex,
    /// Largest support over the family.
    pub m: usize,
    pub verdicts: Vec<Eq24Verdict>,
    /// Pass when every `k` passes, Fail when some `k` fails hard.
    pub outcome: Outcome,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub n: usize,
    pub seed: u64,
    pub families: Vec<FamilyResult>,
    /// Families passing at every `k`.
    pub allowed_families: Vec<FamilyIndex>,
    /// Families failing at some `k`.
    pub excluded_families: Vec<FamilyIndex>,
    pub inconclusive_families: Vec<FamilyIndex>,
    /// The partition into allowed/excluded agrees with the expected one.
    pub matches_expected: bool,
    pub outcome: Outcome,
    pub elapsed_seconds: f64,
}

fn judge(k: usize, lhs: f64, rhs: i64) -> (Outcome, Option<String>) {
    let diff = (lhs - rhs as f64).abs();
    if k == 0 {
        let rounded = lhs.round();
        if (lhs - rounded).abs() < ROUNDING_TOL && rounded as i64 == rhs {
            return (Outcome::Pass, None);
        }
    } else if diff < ROUNDING_TOL {
        return (Outcome::Pass, None);
    }
    if diff > HARD_FAIL_GAP {
        (Outcome::Fail, None)
    } else {
        (
            Outcome::Inconclusive,
            Some(format!(
                "|λ₂ − counting value| = {diff:e} is neither small nor large"
            )),
        )
    }
}

fn verify_eq24_with(
    family: FamilyIndex,
    n: usize,
    config: &LanczosConfig,
    cache: &Arc<TranslationCache>,
) -> Result<Vec<Eq24Verdict>> {
    if !family.is_connected() {
        return Err(Error::Hypothesis(format!(
            "family {family} is disconnected"
        )));
    }
    let t = build_connection_set(n, family)?;
    let scope = StabilizerScope::full(n);
    let m = family.max_support();
    let exact = if n <= crate::characters::MAX_TABLE_DEGREE {
        Some(lambda2_exact(&normal_spectrum(n, family)?)?.value)
    } else {
        None
    };
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let tk = derive_tk(&t, k);
        let rhs = lambda2_counting(&tk, k)?;
        let quotient_lambda2 = quotient_matrix(n, &tk)?.lambda2()?;
        let g = build_graph_cached(&scope, &tk, cache)?;
        let connected = g.is_connected();
        let mut notes = Vec::new();
        let (lhs, residual, iterations, mut outcome) = match lanczos_lambda2(&g, config) {
            Ok(r) => {
                let (o, note) = judge(k, r.value, rhs);
                notes.extend(note);
                (Some(r.value), Some(r.residual), Some(r.iterations), o)
            }
            Err(e) => {
                notes.push(format!("eigensolver: {e}"));
                (None, None, None, Outcome::Inconclusive)
            }
        };
        if let Some(l) = lhs {
            // quotient eigenvalues lift, so λ₂(B^(k)) ≤ λ₂(G_k)
            if quotient_lambda2 > l + ROUNDING_TOL {
                notes.push(format!(
                    "quotient λ₂ {quotient_lambda2} exceeds graph λ₂ {l}"
                ));
                outcome = Outcome::Fail;
            }
        }
        let exact_k = if k == 0 { exact } else { None };
        if let (Some(x), Some(l)) = (exact_k, lhs) {
            if (l - x as f64).abs() >= ROUNDING_TOL {
                notes.push(format!("character-table λ₂ is {x}"));
                outcome = outcome.and(Outcome::Inconclusive);
            }
        }
        out.push(Eq24Verdict {
            family,
            k,
            degree: tk.len(),
            lhs,
            rhs,
            residual,
            iterations,
            quotient_lambda2,
            exact: exact_k,
            connected,
            pass: outcome.is_pass(),
            outcome,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        });
    }
    Ok(out)
}

/// One verdict per `k = 0..m−1` for `Cay(S_7, T_k)`.
pub fn verify_eq24(family: FamilyIndex, config: &LanczosConfig) -> Result<Vec<Eq24Verdict>> {
    verify_eq24_with(family, 7, config, &Arc::new(TranslationCache::new()))
}

fn family_result(
    family: FamilyIndex,
    opts: &SweepOptions,
    cache: &Arc<TranslationCache>,
) -> Result<FamilyResult> {
    let start = Instant::now();
    let verdicts = verify_eq24_with(family, opts.n, &opts.lanczos, cache)?;
    let any_fail = verdicts.iter().any(|v| v.outcome == Outcome::Fail);
    let mut outcome = if any_fail {
        Outcome::Fail
    } else {
        all_outcomes(verdicts.iter().map(|v| v.outcome))
    };
    // every G_k of a passing family is connected
    if outcome == Outcome::Pass && verdicts.iter().any(|v| !v.connected) {
        outcome = Outcome::Inconclusive;
    }
    Ok(FamilyResult {
        family,
        m: family.max_support(),
        verdicts,
        outcome,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every connected family and sorts them into allowed and excluded.
pub fn run_family_sweep(opts: &SweepOptions) -> Result<SweepReport> {
    let start = Instant::now();
    let families = opts.families.clone().unwrap_or_else(FamilyIndex::connected);
    let cache = Arc::new(TranslationCache::new());
    let results: Vec<FamilyResult> = families
        .par_iter()
        .map(|&f| family_result(f, opts, &cache))
        .collect::<Result<_>>()?;
    let pick = |o: Outcome| -> Vec<FamilyIndex> {
        results
            .iter()
            .filter(|r| r.outcome == o)
            .map(|r| r.family)
            .collect()
    };
    let allowed_families = pick(Outcome::Pass);
    let excluded_families = pick(Outcome::Fail);
    let inconclusive_families = pick(Outcome::Inconclusive);
    let expected_allowed: Vec<FamilyIndex> = families
        .iter()
        .copied()
        .filter(|f| !f.is_excluded())
        .collect();
    let expected_excluded: Vec<FamilyIndex> = families
        .iter()
        .copied()
        .filter(|f| f.is_excluded())
        .collect();
    let matches_expected =
        allowed_families == expected_allowed && excluded_families == expected_excluded;
    let outcome = if !inconclusive_families.is_empty() {
        Outcome::Inconclusive
    } else {
        Outcome::from_bool(matches_expected)
    };
    Ok(SweepReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n: opts.n,
        seed: opts.lanczos.seed,
        families: results,
        allowed_families,
        excluded_families,
        inconclusive_families,
        matches_expected,
        outcome,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

impl SweepReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &Eq24Verdict> {
        self.families.iter().flat_map(|f| f.verdicts.iter())
    }

    /// `(family, k, outcome, rounded λ₂)` for run-to-run comparison.
    pub fn verdict_set(&self) -> Vec<(FamilyIndex, usize, Outcome, Option<i64>)> {
        self.verdicts()
            .map(|v| (v.family, v.k, v.outcome, v.lhs.map(|x| x.round() as i64)))
            .collect()
    }

    /// One row per `(family, k)` of the passing families: family, k,
    /// degree, counting λ₂, measured λ₂, residual.
    pub fn write_table_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "family",
            "k",
            "degree",
            "lambda2_formula",
            "lambda2_measured",
            "residual",
        ])?;
        for f in self.families.iter().filter(|f| f.outcome == Outcome::Pass) {
            for v in &f.verdicts {
                w.write_record([
                    f.family.to_string(),
                    v.k.to_string(),
                    v.degree.to_string(),
                    v.rhs.to_string(),
                    v.lhs.map_or_else(String::new, |x| format!("{x:.9}")),
                    v.residual.map_or_else(String::new, |x| format!("{x:.3e}")),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Every verdict, including failing families, in the same column layout
    /// plus the outcome.
    pub fn write_verdicts_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "family",
            "k",
            "degree",
            "lambda2_formula",
            "lambda2_measured",
            "residual",
            "outcome",
        ])?;
        for v in self.verdicts() {
            w.write_record([
                v.family.to_string(),
                v.k.to_string(),
                v.degree.to_string(),
                v.rhs.to_string(),
                v.lhs.map_or_else(String::new, |x| format!("{x:.9}")),
                v.residual.map_or_else(String::new, |x| format!("{x:.3e}")),
                v.outcome.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "family sweep on S_{}: {} allowed, {} excluded, {} inconclusive ({:.1}s)\n",
            self.n,
            self.allowed_families.len(),
            self.excluded_families.len(),
            self.inconclusive_families.len(),
            self.elapsed_seconds
        );
        s.push_str(&format!(
            "{:<16} {:>2} {:>6} {:>8} {:>16} {:>10}  {}\n",
            "family", "k", "|T_k|", "formula", "measured", "residual", "outcome"
        ));
        for v in self.verdicts() {
            s.push_str(&format!(
                "{:<16} {:>2} {:>6} {:>8} {:>16} {:>10}  {}\n",
                v.family.to_string(),
                v.k,
                v.degree,
                v.rhs,
                v.lhs.map_or_else(|| "-".into(), |x| format!("{x:.9}")),
                v.residual
                    .map_or_else(|| "-".into(), |x| format!("{x:.1e}")),
                v.outcome
            ));
        }
        s.push_str(&format!(
            "matches expected classification: {}\noutcome: {}\n",
            self.matches_expected, self.outcome
        ));
        s
    }
}
