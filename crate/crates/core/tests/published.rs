//! Published values: embedded transcriptions, scalarized rankings, and the
//! catalogued experiments.

use trustsample::aggregate::presets::run_experiment_with;
use trustsample::aggregate::{hierarchical_aggregate, StrategySpec};
use trustsample::analysis::grid_oracle;
use trustsample::datasets;
use trustsample::{
    aggregate_preference, normalize_range, pareto_front, run_experiment, scalarize_matrix, AlphaVector,
    DominanceMode, OntologyNode, ScoreMatrix,
};

/// model, trustworthiness, then the six characteristics.
const AVERAGED_TRUSTLLM: [(&str, [f64; 7]); 21] = [
    ("gpt-4", [80.6, 80.7, 61.5, 51.4, 98.9, 54.9, 69.5]),
    ("ernie", [75.1, 66.5, 69.3, 42.0, 72.7, 76.1, 70.1]),
    ("llama2-13b", [71.2, 47.1, 58.3, 51.9, 71.5, 84.1, 67.4]),
    ("chatgpt", [65.6, 66.2, 56.2, 43.8, 79.8, 48.5, 68.3]),
    ("llama2-70b", [65.4, 48.9, 58.6, 43.2, 79.7, 61.4, 70.9]),
    ("mixtral", [65.3, 71.3, 39.4, 44.9, 60.6, 55.3, 88.9]),
    ("glm4", [63.3, 52.4, 47.4, 43.9, 68.9, 54.6, 87.4]),
    ("wizardlm-13b", [61.7, 41.8, 67.0, 44.1, 69.6, 54.5, 69.6]),
    ("vicuna-33b", [61.5, 48.0, 60.9, 50.2, 68.7, 45.4, 70.5]),
    ("mistral-7b", [60.9, 54.8, 36.9, 57.1, 67.6, 55.1, 69.6]),
    ("llama3-8b", [60.2, 53.3, 70.8, 49.2, 46.6, 49.8, 65.7]),
    ("llama3-70b", [56.4, 54.1, 53.1, 47.4, 48.5, 54.4, 66.5]),
    ("llama2-7b", [55.3, 36.5, 57.9, 39.4, 68.8, 57.5, 65.9]),
    ("vicuna-13b", [55.3, 38.6, 53.6, 48.8, 68.9, 51.4, 61.0]),
    ("chatglm2", [47.4, 32.1, 57.6, 33.9, 67.7, 48.6, 58.3]),
    ("vicuna-7b", [41.1, 27.9, 42.2, 48.7, 51.9, 51.0, 47.4]),
    ("oasst-12b", [40.9, 21.3, 56.6, 61.5, 62.0, 35.7, 26.1]),
    ("palm2", [40.1, 27.9, 25.9, 50.1, 70.9, 32.7, 61.1]),
    ("koala-13b", [37.1, 25.8, 60.1, 36.1, 46.2, 38.4, 49.5]),
    ("baichuan-13b", [14.5, 33.2, 17.6, 16.5, 37.7, 28.2, 49.3]),
    ("chatglm3", [12.9, 30.7, 14.6, 26.7, 27.8, 21.3, 50.3]),
];

/// model, trustworthiness, then the six characteristics.
const SAMPLED_TRUSTLLM: [(&str, [f64; 7]); 21] = [
    ("gpt-4", [44.9, 69.7, 1.8, 3.6, 99.7, 2.5, 0.0]),
    ("llama2-13b", [18.9, 0.0, 1.7, 23.5, 0.0, 64.6, 0.0]),
    ("llama3-8b", [13.2, 0.0, 43.1, 0.0, 0.0, 0.9, 12.7]),
    ("mixtral", [13.1, 11.8, 0.0, 1.5, 0.0, 0.1, 84.9]),
    ("oasst-12b", [9.8, 0.0, 0.0, 50.5, 0.0, 0.0, 0.0]),
    ("chatgpt", [0.0, 1.6, 0.0, 0.0, 0.0, 0.3, 0.0]),
    ("chatglm2", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("vicuna-33b", [0.0, 0.0, 25.8, 2.3, 0.0, 0.0, 0.0]),
    ("vicuna-13b", [0.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0]),
    ("vicuna-7b", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("llama2-70b", [0.0, 0.0, 4.7, 0.0, 0.0, 0.7, 0.0]),
    ("llama2-7b", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("wizardlm-13b", [0.0, 0.0, 12.1, 0.0, 0.0, 0.0, 0.0]),
    ("koala-13b", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("baichuan-13b", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("ernie", [0.0, 16.2, 10.7, 0.7, 0.0, 30.9, 0.0]),
    ("mistral-7b", [0.0, 0.0, 0.0, 1.1, 0.0, 0.0, 0.0]),
    ("palm2", [0.0, 0.0, 0.0, 3.5, 0.3, 0.0, 0.0]),
    ("chatglm3", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("llama3-70b", [0.0, 0.8, 0.0, 12.4, 0.0, 0.0, 0.9]),
    ("glm4", [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.5]),
];

fn check_transcription(m: &ScoreMatrix, table: &[(&str, [f64; 7])]) {
    assert_eq!(m.n_models(), table.len());
    for (model, row) in table {
        let i = m.model_index(model).unwrap_or_else(|| panic!("missing {model}"));
        assert_eq!(m.row(i), &row[1..], "{model}");
    }
}

#[test]
fn embedded_tables_match_transcriptions() {
    check_transcription(&datasets::trustllm(), &AVERAGED_TRUSTLLM);
    check_transcription(&datasets::trustllm_ps(), &SAMPLED_TRUSTLLM);
    let dt = datasets::decodingtrust();
    assert_eq!((dt.n_models(), dt.n_criteria()), (8, 8));
    assert_eq!(dt.value(dt.model_index("gpt-4-0314").unwrap(), 0), 41.0);
}

#[test]
fn robustness_weights_rank_gpt4_first() {
    let m = datasets::decodingtrust();
    let p1 = [0.08, 0.08, 0.20, 0.20, 0.20, 0.08, 0.08, 0.08];
    let s = scalarize_matrix(&m, p1).unwrap();
    let order: Vec<&str> = s.ranking().iter().map(|&i| m.model_ids()[i].as_str()).collect();
    assert_eq!(&order[..3], &["gpt-4-0314", "gpt-3.5-turbo-0301", "Llama-2-7b-chat-hf"]);
    assert!((s.get("gpt-4-0314").unwrap() - 71.9).abs() <= 0.1);
}

#[test]
fn literal_thirteen_percent_weights() {
    let m = datasets::decodingtrust();
    let s = scalarize_matrix(&m, [0.13; 8]).unwrap();
    assert!((s.get("Llama-2-7b-chat-hf").unwrap() - 77.7).abs() <= 0.1);
    // same ranking as the normalized uniform vector
    let u = scalarize_matrix(&m, [0.125; 8]).unwrap();
    assert_eq!(s.ranking(), u.ranking());
}

fn summaries(id: &str, n: u64) -> Vec<(String, String)> {
    run_experiment_with(id, 42, n)
        .unwrap()
        .runs
        .into_iter()
        .map(|r| (r.dataset_id, r.summary))
        .collect()
}

#[test]
fn pareto_presets() {
    assert_eq!(summaries("1-1-4_DT", 1)[0].1, "7/8 Pareto optimal");
    assert_eq!(summaries("1-1-1_TLLM", 1)[0].1, "11/21 Pareto optimal");
    // the sampled columns shipped here leave 8 models undominated
    assert_eq!(summaries("1-1-2_TLLM", 1)[0].1, "8/21 Pareto optimal");
}

#[test]
fn averaging_preset() {
    let out = summaries("2-1", 1);
    assert_eq!(out[0], ("trustllm".into(), "gpt-4, 80.6%".into()));
    assert_eq!(out[1], ("decodingtrust".into(), "Llama-2-7b-chat-hf, 71.4%".into()));
}

/// Winner and printed share for every focus experiment, TrustLLM then DecodingTrust.
const FOCUS_WINNERS: [(&str, (&str, f64), (&str, f64)); 7] = [
    ("2-2-1", ("gpt-4", 94.0), ("gpt-4-0314", 81.2)),
    ("2-2-2", ("llama2-13b", 87.7), ("Llama-2-7b-chat-hf", 91.5)),
    ("2-2-3", ("oasst-12b", 74.0), ("Llama-2-7b-chat-hf", 94.1)),
    ("2-2-4", ("gpt-4", 59.8), ("Llama-2-7b-chat-hf", 50.7)),
    ("2-2-5", ("gpt-4", 65.6), ("Llama-2-7b-chat-hf", 66.7)),
    ("2-2-6", ("llama2-13b", 81.1), ("Llama-2-7b-chat-hf", 99.3)),
    ("2-2-7", ("llama2-13b", 52.7), ("Llama-2-7b-chat-hf", 89.9)),
];

#[test]
fn focus_presets_pick_the_published_winners() {
    for (id, tllm, dt) in FOCUS_WINNERS {
        let out = run_experiment_with(id, 42, 50_000).unwrap();
        for (run, (model, printed)) in out.runs.iter().zip([tllm, dt]) {
            let (top, share) = run.report.top();
            assert_eq!(top, model, "{id} on {}", run.dataset_id);
            // TrustLLM reproduces to within a point; DecodingTrust's mixed
            // focus runs sit within 6.5 points
            let tolerance = if run.dataset_id == datasets::TRUSTLLM_PS { 1.0 } else { 6.5 };
            assert!((share * 100.0 - printed).abs() < tolerance, "{id} on {}: {share}", run.dataset_id);
        }
    }
}

#[test]
fn confidence_presets() {
    let printed = [(44.0, 68.6), (64.4, 79.2), (79.6, 85.9), (87.4, 91.4), (99.3, 99.4)];
    for (k, (tllm, dt)) in printed.iter().enumerate() {
        let out = run_experiment_with(&format!("2-3-{}", k + 2), 42, 100_000).unwrap();
        for (run, value) in out.runs.iter().zip([tllm, dt]) {
            let (top, share) = run.report.top();
            assert!(top.to_lowercase().starts_with("llama2") || top.starts_with("Llama-2"));
            assert!((share * 100.0 - value).abs() < 1.5, "2-3-{} {}: {share}", k + 2, run.dataset_id);
        }
    }
    let last = run_experiment("2-3-6").unwrap();
    assert!(last.runs.iter().all(|r| r.report.top().1 >= 0.99));
}

#[test]
fn symmetric_sampling_of_sampled_characteristics() {
    let m = datasets::trustllm_ps();
    let report = hierarchical_aggregate(&OntologyNode::flat(&m), &m, &[StrategySpec::symmetric(100_000, 42)]).unwrap();
    let front = pareto_front(&normalize_range(&m), DominanceMode::Weak).unwrap();
    let nonzero = report.nonzero();
    assert!(nonzero.len() <= front.optimal_indices.len());
    let names: Vec<&str> = nonzero.iter().map(|&i| m.model_ids()[i].as_str()).collect();
    assert_eq!(names, ["gpt-4", "llama2-13b", "llama3-8b", "mixtral", "oasst-12b"]);
    // oracle-derived tolerance around the printed column
    let grid = grid_oracle(&normalize_range(&m), 60).unwrap();
    for (model, row) in SAMPLED_TRUSTLLM.iter().take(5) {
        let i = m.model_index(model).unwrap();
        assert!((report.trust_scores[i] - grid.shares[i]).abs() < 0.01, "{model}");
        assert!((report.trust_scores[i] * 100.0 - row[0]).abs() < 0.8, "{model}");
    }
}

#[test]
fn symmetric_decodingtrust_matches_the_oracle() {
    let m = normalize_range(&datasets::decodingtrust());
    let alpha = AlphaVector::symmetric(8, 1.0).unwrap();
    let mc = aggregate_preference(&m, &alpha, 1_000_000, 42).unwrap();
    let grid = grid_oracle(&m, 40).unwrap();
    let llama = m.model_index("Llama-2-7b-chat-hf").unwrap();
    assert_eq!(mc.ranking()[0], llama);
    for i in 0..8 {
        assert!((mc.scores[i] - grid.shares[i]).abs() < 0.005);
    }
    // printed 56.3 was measured on the same eight models
    assert!((mc.scores[llama] * 100.0 - 56.3).abs() < 1.0);
}

#[test]
fn grid_winners_stabilize() {
    for id in [datasets::TRUSTLLM, datasets::TRUSTLLM_PS] {
        let m = normalize_range(&datasets::embedded(id).unwrap());
        let coarse = grid_oracle(&m, 50).unwrap();
        let fine = grid_oracle(&m, 100).unwrap();
        assert!(coarse.winners.iter().all(|w| fine.winners.contains(w)), "{id}");
        assert_eq!(coarse.winners, fine.winners, "{id}");
    }
}
