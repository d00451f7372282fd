//! Sweeps over the spin `N` and the verdicts built on them: bottom
//! asymptotics, selection among wells, gaps, window matching, concentration
//! and the flat perturbation series.

mod crosscheck;
mod sweep;
mod verdicts;

pub use crosscheck::{perturbation_crosscheck, CrosscheckReport, CrosscheckRow, EXACT_RESIDUAL, MIN_DECAY};
pub use sweep::{
    check_n_list, compare_fits, fit_bottom, fit_bottom_in, fit_points, sweep, sweep_point, FitComparison, FitParameter,
    FitResult, SweepRecord,
};
pub use verdicts::{
    concentration_profile, gap_verdict, greedy_match, selection_verdict, theorem_b_verdict, GapReport, ProfilePoint,
    SelectionReport, SelectionRow, SelectionThresholds, TheoremBReport, WindowMatch, DEGENERATE_GAP,
};

/// Outcome of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// The input sits on a degenerate case the test cannot decide.
    Undecided,
    /// A plain computation with nothing to judge.
    Computed,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Undecided => "UNDECIDED",
            Verdict::Computed => "COMPUTED",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Computed)
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}
