//! Verification of degenerations and non-degenerations.

mod certificate;
mod run;
mod witness;

use serde::Serialize;

pub use certificate::{
    ambient_variety, chart, check_membership, check_stability, combine, flag_polys, relation_set, transvection, verify_certificate, CertificateError,
    CertificateReport, CheckReport, RelationSet, TargetReport,
};
pub use run::{
    admits, soundness_conflicts, verify_invariant_certificate, verify_nondegenerations, verify_witnesses, witness_ids, NondegOutcome,
    Resolver, WitnessOutcome, RANDOM_SAMPLES,
};
pub use witness::{verify_witness, WitnessError, WitnessFailure, WitnessReport};

/// Outcome of a single check.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Failure,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Failure => "FAILED",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[cfg(test)]
mod tests;
