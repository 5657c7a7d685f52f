//! Published leaderboard tables shipped inside the binary.
//!
//! * `decodingtrust`: DecodingTrust's eight characteristics for eight models.
//! * `trustllm`: TrustLLM characteristic scores (sub-characteristics
//!   averaged) for 21 models.
//! * `trustllm-ps`: TrustLLM characteristic scores obtained by symmetric
//!   preference sampling over the sub-characteristics: each column is the
//!   percentage of samples in which the model won that characteristic.
//!
//! All values are percentages, higher is better.

use crate::error::{Error, Result};
use crate::matrix::{load_matrix, ScoreMatrix};

pub const DECODINGTRUST: &str = "decodingtrust";
pub const TRUSTLLM: &str = "trustllm";
pub const TRUSTLLM_PS: &str = "trustllm-ps";

pub const EMBEDDED_IDS: [&str; 3] = [DECODINGTRUST, TRUSTLLM, TRUSTLLM_PS];

const DECODINGTRUST_CSV: &str = include_str!("../data/decodingtrust.csv");
const TRUSTLLM_CSV: &str = include_str!("../data/trustllm.csv");
const TRUSTLLM_PS_CSV: &str = include_str!("../data/trustllm-ps.csv");

/// Raw CSV text of an embedded dataset.
pub fn embedded_csv(id: &str) -> Result<&'static str> {
    match id {
        DECODINGTRUST => Ok(DECODINGTRUST_CSV),
        TRUSTLLM => Ok(TRUSTLLM_CSV),
        TRUSTLLM_PS => Ok(TRUSTLLM_PS_CSV),
        other => Err(Error::UnknownDataset(other.to_string())),
    }
}

pub fn embedded(id: &str) -> Result<ScoreMatrix> {
    load_matrix(embedded_csv(id)?, None)
}

pub fn decodingtrust() -> ScoreMatrix {
    embedded(DECODINGTRUST).expect("embedded table is valid")
}

pub fn trustllm() -> ScoreMatrix {
    embedded(TRUSTLLM).expect("embedded table is valid")
}

pub fn trustllm_ps() -> ScoreMatrix {
    embedded(TRUSTLLM_PS).expect("embedded table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let dt = decodingtrust();
        assert_eq!((dt.n_models(), dt.n_criteria()), (8, 8));
        let tl = trustllm();
        assert_eq!((tl.n_models(), tl.n_criteria()), (21, 6));
        let ps = trustllm_ps();
        assert_eq!((ps.n_models(), ps.n_criteria()), (21, 6));
        assert_eq!(tl.criterion_ids(), ps.criterion_ids());
    }

    #[test]
    fn spot_values() {
        let dt = decodingtrust();
        let gpt4 = dt.model_index("gpt-4-0314").unwrap();
        let tox = dt.criterion_index("Toxicity").unwrap();
        assert_eq!(dt.value(gpt4, tox), 41.0);
        let tl = trustllm();
        assert_eq!(tl.value(tl.model_index("gpt-4").unwrap(), 3), 98.9);
    }

    #[test]
    fn unknown_id() {
        assert_eq!(embedded("nope"), Err(Error::UnknownDataset("nope".into())));
    }
}
