//! placeholder
use serde::Serialize;
#[derive(Debug, Clone, Serialize)]
pub struct RoundStats {
    pub round: usize,
}
