//! Product-one subsequences of length-7 sequences over `H_27`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::h27::check_h27;
use super::{ExtractError, FailureDump};
use crate::constants::ZClassProfile;
use crate::group::{ElementId, GroupTable};
use crate::sequence::{Sequence, Witness, DEFAULT_STATE_BUDGET};

/// Region of the case analysis for seven terms that an input falls in,
/// by its z-class counts.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProofCase {
    /// At least one central term.
    Central,
    /// Some non-central class holds four or more terms.
    FatClass,
    /// `(3,3,1,0)`
    ThreeThreeOne,
    /// `(3,2,2,0)`
    ThreeTwoTwo,
    /// `(3,2,1,1)`
    ThreeTwoOneOne,
    /// `(2,2,2,1)`
    TwoTwoTwoOne,
}

impl ProofCase {
    pub fn of(profile: &ZClassProfile) -> ProofCase {
        if profile.counts[0] > 0 {
            return ProofCase::Central;
        }
        let mut nc = profile.counts[1..].to_vec();
        nc.sort_unstable_by(|a, b| b.cmp(a));
        match nc.as_slice() {
            [m, ..] if *m >= 4 => ProofCase::FatClass,
            [3, 3, 1, 0] => ProofCase::ThreeThreeOne,
            [3, 2, 2, 0] => ProofCase::ThreeTwoTwo,
            [3, 2, 1, 1] => ProofCase::ThreeTwoOneOne,
            [2, 2, 2, 1] => ProofCase::TwoTwoTwoOne,
            other => unreachable!("seven non-central terms in four classes: {other:?}"),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProofCase::Central => "central term",
            ProofCase::FatClass => "class of size >= 4",
            ProofCase::ThreeThreeOne => "(3,3,1,0)",
            ProofCase::ThreeTwoTwo => "(3,2,2,0)",
            ProofCase::ThreeTwoOneOne => "(3,2,1,1)",
            ProofCase::TwoTwoTwoOne => "(2,2,2,1)",
        }
    }
}

impl fmt::Display for ProofCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction7 {
    pub witness: Witness,
    pub profile: ZClassProfile,
    pub case: ProofCase,
}

/// A shortest product-one subsequence of a length-7 sequence over `H_27`,
/// verified, with the case-analysis region of the input.
pub fn extract_product_one_7(g: &GroupTable, terms: &[ElementId]) -> Result<Extraction7, ExtractError> {
    check_h27(g)?;
    if terms.len() != 7 {
        return Err(ExtractError::WrongLength { expected: 7, got: terms.len() });
    }
    let profile = ZClassProfile::of(g, terms).map_err(|e| ExtractError::Internal(e.to_string()))?;
    let case = ProofCase::of(&profile);
    let seq = Sequence::from_terms(g, terms.iter().copied());
    let witness = seq
        .product_one_witness(DEFAULT_STATE_BUDGET)
        .map_err(|e| ExtractError::Internal(e.to_string()))?
        .ok_or_else(|| {
            ExtractError::ExtractionFailed(Box::new(FailureDump {
                terms: terms.iter().map(|&t| g.name(t).to_string()).collect(),
                seed: 0,
            }))
        })?;
    witness.verify(&seq).map_err(|e| ExtractError::Internal(format!("witness rejected: {e}")))?;
    Ok(Extraction7 { witness, profile, case })
}
