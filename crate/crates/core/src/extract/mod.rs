//! Constructive product-one extraction over `H_27`.

mod blocks;
mod bulk;
mod c3;
mod checks;
mod fuzz;
mod h27;
mod order;
mod seven;
mod tables;
#[cfg(test)]
mod tests;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use blocks::{extract_short3_blocks, extract_short3_blocks_in, Block, BlockPartition, BLOCK_WINDOW};
pub use bulk::{
    central_product_subsequence, in_maximal_subgroup, maximal_subgroup_directions, product_one_from_center,
    product_one_from_maximal, sum_selection, zero_sum_selection,
};
pub use c3::{solve_c3_selection, C3Selection, ResidualForm};
pub use checks::{verify_c3_selection, verify_twin_short3};
pub use fuzz::{
    fuzz_egz, fuzz_extract27, random_central_sequence, random_egz_sequence, ExtractFuzzSummary, Family,
    EXTRACT_FUZZ_SCHEMA,
};
pub use h27::{extract_product_one_27, ExtractPolicy, Extraction, Layer, INPUT_LEN, OUTPUT_LEN};
pub use order::order_to_one;
pub use seven::{extract_product_one_7, Extraction7, ProofCase};
pub use tables::validate_seven_term_tables;

/// Input and seed of an extraction that found nothing. Any such record
/// is a counterexample candidate or a bug.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureDump {
    pub terms: Vec<String>,
    pub seed: u64,
}

impl fmt::Display for FailureDump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed={} seq={}", self.seed, self.terms.join(" "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("operation requires the Heisenberg group of order 27")]
    NotH27,
    #[error("expected {expected} terms, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(Box<FailureDump>),
    #[error("internal error: {0}")]
    Internal(String),
}
