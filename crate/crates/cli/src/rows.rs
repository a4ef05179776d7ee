//! Rows exchanged between pipeline stages beyond what the core defines.

use serde::{Deserialize, Serialize};
use sorites_core::prompting::{QuestionType, ResponseMode};
use sorites_core::records::TransportStatus;
use sorites_core::scoring::ScoreVector;

/// One scored response, carrying enough prompt metadata to aggregate
/// without re-reading the gold file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub prompt_id: String,
    pub sample_index: u32,
    pub model_name: String,
    pub level: u32,
    pub noise_count: u32,
    pub question_type: QuestionType,
    pub mode: ResponseMode,
    pub transport_status: TransportStatus,
    pub scores: ScoreVector,
}
