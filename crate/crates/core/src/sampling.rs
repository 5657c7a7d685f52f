//! Dirichlet sampling of preference vectors.
//!
//! A draw is made from `C` independent unit-scale gamma variates with shapes
//! `alpha_c`, normalized by their sum. Randomness comes from counter-based
//! streams: the pair `(seed, sample_index)` selects a ChaCha8 key (from the
//! seed) and stream id (from the index), so sample `i` is the same no matter
//! which thread draws it or in what order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ w = 1` for a valid preference vector.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Redraws allowed when every gamma variate underflows to zero.
const MAX_ATTEMPTS: u32 = 8;

/// Dirichlet concentration parameter: relative sizes encode preference skew,
/// overall magnitude encodes confidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AlphaVector(Vec<f64>);

impl AlphaVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidAlpha(format!(
                "need at least 2 components, got {}",
                components.len()
            )));
        }
        if let Some(bad) = components.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidAlpha(format!(
                "components must be positive and finite, got {bad}"
            )));
        }
        Ok(AlphaVector(components))
    }

    pub fn symmetric(len: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Analytic mean of component `i`, `alpha_i / Σ alpha`.
    pub fn mean(&self, i: usize) -> f64 {
        self.0[i] / self.total()
    }

    /// Parses a comma-separated list such as `1,1,2.5`.
    pub fn parse(s: &str) -> Result<Self> {
        let components = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidAlpha(format!("\"{}\" is not a number", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }
}

impl TryFrom<Vec<f64>> for AlphaVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlphaVector> for Vec<f64> {
    fn from(a: AlphaVector) -> Self {
        a.0
    }
}

/// A stochastic weight vector over criteria.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PreferenceVector(Vec<f64>);

impl PreferenceVector {
    /// Accepts weights that already lie on the simplex.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(bad) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidWeights(format!("weight {bad} outside [0, 1]")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(PreferenceVector(weights))
    }

    /// Divides non-negative weights by their sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {bad} is negative or not finite")));
        }
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Ok(PreferenceVector(weights.into_iter().map(|w| w / sum).collect()))
    }

    pub fn one_hot(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let mut w = vec![0.0; len];
        w[index] = 1.0;
        Ok(PreferenceVector(w))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[f64]> for PreferenceVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for PreferenceVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PreferenceVector> for Vec<f64> {
    fn from(p: PreferenceVector) -> Self {
        p.0
    }
}

/// Address of one sample in the reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleStream {
    pub seed: u64,
    pub sample_index: u64,
}

impl SampleStream {
    pub fn new(seed: u64, sample_index: u64) -> Self {
        SampleStream { seed, sample_index }
    }

    /// Generator for this sample. `attempt > 0` selects a disjoint sub-stream
    /// used only to redraw a degenerate sample.
    pub fn rng(&self, attempt: u32) -> ChaCha8Rng {
        stream_rng(&seed_key(self.seed), self.sample_index, attempt)
    }
}

fn seed_key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

fn stream_rng(key: &[u8; 32], index: u64, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(index);
    if attempt > 0 {
        rng.set_word_pos(u128::from(attempt) << 64);
    }
    rng
}

/// Dirichlet sampler with pre-built gamma distributions, for hot loops.
#[derive(Clone, Debug)]
pub struct DirichletSampler {
    gammas: Vec<Gamma<f64>>,
    key: [u8; 32],
    seed: u64,
}

impl DirichletSampler {
    pub fn new(alpha: &AlphaVector, seed: u64) -> Self {
        let gammas = alpha
            .components()
            .iter()
            .map(|&a| Gamma::new(a, 1.0).expect("alpha components are positive"))
            .collect();
        DirichletSampler {
            gammas,
            key: seed_key(seed),
            seed,
        }
    }

    pub fn dims(&self) -> usize {
        self.gammas.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Writes draw number `index` into `out` (length `dims()`).
    pub fn sample_into(&self, index: u64, out: &mut [f64]) -> Result<()> {
        debug_assert_eq!(out.len(), self.gammas.len());
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = stream_rng(&self.key, index, attempt);
            let mut sum = 0.0;
            for (o, g) in out.iter_mut().zip(&self.gammas) {
                *o = g.sample(&mut rng);
                sum += *o;
            }
            if sum > 0.0 && sum.is_finite() {
                out.iter_mut().for_each(|o| *o /= sum);
                return Ok(());
            }
        }
        Err(Error::DegenerateDraw(MAX_ATTEMPTS))
    }

    pub fn sample(&self, index: u64) -> Result<PreferenceVector> {
        let mut w = vec![0.0; self.dims()];
        self.sample_into(index, &mut w)?;
        Ok(PreferenceVector(w))
    }
}

/// One `Dirichlet(alpha)` draw for the given stream position.
pub fn sample_preference(alpha: &AlphaVector, stream: SampleStream) -> Result<PreferenceVector> {
    DirichletSampler::new(alpha, stream.seed).sample(stream.sample_index)
}

/// Copy of `base` with every focused component multiplied by `multiplier`.
pub fn focus_alpha(base: &AlphaVector, focus_indices: &[usize], multiplier: f64) -> Result<AlphaVector> {
    if focus_indices.is_empty() {
        return Err(Error::InvalidArgument("focus index set is empty".into()));
    }
    if !(multiplier.is_finite() && multiplier >= 1.0) {
        return Err(Error::InvalidMultiplier(multiplier));
    }
    let mut out = base.components().to_vec();
    let mut seen = vec![false; out.len()];
    for &i in focus_indices {
        if i >= out.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: out.len(),
            });
        }
        if !std::mem::replace(&mut seen[i], true) {
            out[i] *= multiplier;
        }
    }
    AlphaVector::new(out)
}

/// Raw 64-bit words from a stream, for callers that need uniforms rather
/// than preference vectors.
pub(crate) fn stream_words(seed: u64, stream: u64) -> impl FnMut() -> u64 {
    let mut rng = stream_rng(&seed_key(seed), stream, 0);
    move || rng.next_u64()
}
