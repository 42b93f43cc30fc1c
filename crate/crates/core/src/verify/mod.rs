//! Verification campaigns: each runs a family of computations, compares
//! them against the expected values, and reports a pass/fail/inconclusive
//! outcome with the underlying numbers.

mod fj;
mod oracles;
mod recursion;
mod sweep;

use serde::{Deserialize, Serialize};

pub use fj::{fj_inequalities, verify_fj, FjInequalityRow, FjReport, GraphQuotientCheck};
pub use oracles::{
    random_connected_transposition_sets, transposition_edges, transposition_set,
    verify_aldous_oracle, verify_corollaries, verify_example24, AldousCheck, CorollaryReport,
    CorollaryRow, Example24Report, HypercubeRow, PrismRow, TranspositionGraphKind, ALDOUS_TOL,
    EXAMPLE_TOL,
};
pub use recursion::{
    verify_recursion_identities, DifferenceCheck, IsomorphismCheck, RecursionReport,
};
pub use sweep::{
    run_family_sweep, verify_eq24, Eq24Verdict, FamilyResult, SweepOptions, SweepReport,
    HARD_FAIL_GAP, ROUNDING_TOL,
};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    /// A failure outranks an inconclusive result, which outranks a pass.
    pub fn and(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// Process exit code: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Outcome::Pass
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

pub fn all_outcomes(items: impl IntoIterator<Item = Outcome>) -> Outcome {
    items.into_iter().fold(Outcome::Pass, Outcome::and)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_precedence() {
        use Outcome::*;
        assert_eq!(all_outcomes([Pass, Pass]), Pass);
        assert_eq!(all_outcomes([Pass, Inconclusive]), Inconclusive);
        assert_eq!(all_outcomes([Inconclusive, Fail, Pass]), Fail);
        assert_eq!(all_outcomes([]), Pass);
        assert_eq!(Fail.exit_code(), 1);
        assert_eq!(
            serde_json::to_string(&Inconclusive).unwrap(),
            "\"inconclusive\""
        );
    }
}
