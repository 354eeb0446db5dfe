//! Probability tables from explicit quantum models, with optional
//! depolarizing noise and finite-shot sampling.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{pair_count, DensityMatrix, Effect, Ensemble, PairMeasurementSet};
use crate::sampling::{cell_stream, stream_rng};
use crate::witnesses::{ProbabilityTable, WitnessKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// `ρ → (1 − η)ρ + η·I/d`.
    pub depolarizing_eta: f64,
    /// Shots per `(x, y)` cell; `None` keeps exact probabilities.
    pub shots: Option<u64>,
}

impl NoiseModel {
    pub const NOISELESS: NoiseModel = NoiseModel {
        depolarizing_eta: 0.0,
        shots: None,
    };

    pub fn new(depolarizing_eta: f64, shots: Option<u64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&depolarizing_eta) {
            return Err(Error::BadArgument(format!(
                "depolarizing strength {depolarizing_eta} outside [0, 1]"
            )));
        }
        if shots == Some(0) {
            return Err(Error::BadArgument("shots must be at least 1".into()));
        }
        Ok(Self {
            depolarizing_eta,
            shots,
        })
    }

    /// True when the table will hold sampled frequencies rather than exact
    /// probabilities.
    pub fn is_empirical(&self) -> bool {
        self.shots.is_some()
    }
}

fn check_model(e: &Ensemble, ms: &PairMeasurementSet) -> Result<()> {
    if ms.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: ms.dim(),
        });
    }
    if ms.num_preparations() != e.len() {
        return Err(Error::DimensionMismatch {
            expected: pair_count(e.len()),
            found: ms.effects().len(),
        });
    }
    Ok(())
}

/// `P(1|x,y) = tr(ρ_x M_y)`, `P(2|x,y) = 1 − P(1|x,y)` per pair measurement.
pub fn born_table(e: &Ensemble, ms: &PairMeasurementSet) -> Result<ProbabilityTable> {
    check_model(e, ms)?;
    let rows = binary_probabilities(e.states(), ms);
    ProbabilityTable::from_binary(e.len(), &rows)
}

fn binary_probabilities(states: &[DensityMatrix], ms: &PairMeasurementSet) -> Vec<Vec<f64>> {
    states
        .iter()
        .map(|rho| {
            ms.effects()
                .iter()
                // clamp rounding excursions so rows stay inside the table tolerance
                .map(|m| rho.probability(m).clamp(0.0, 1.0))
                .collect()
        })
        .collect()
}

/// [`born_table`] after depolarizing every state, optionally replacing each
/// cell by the empirical frequency of `shots` draws. Cell `(x, y)` samples
/// from its own stream keyed by `(seed, x, y)`.
pub fn noisy_table(e: &Ensemble, ms: &PairMeasurementSet, nm: &NoiseModel, seed: u64) -> Result<ProbabilityTable> {
    check_model(e, ms)?;
    let nm = NoiseModel::new(nm.depolarizing_eta, nm.shots)?;
    let noisy = e
        .states()
        .iter()
        .map(|s| s.depolarized(nm.depolarizing_eta))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = binary_probabilities(&noisy, ms);
    if let Some(shots) = nm.shots {
        rows.par_iter_mut().enumerate().try_for_each(|(xi, row)| {
            for (yi, p) in row.iter_mut().enumerate() {
                *p = sample_frequency(*p, shots, seed, xi + 1, yi + 1)?;
            }
            Ok::<_, Error>(())
        })?;
    }
    ProbabilityTable::from_binary(e.len(), &rows)
}

/// Empirical frequency of outcome 1 over `shots` independent Bernoulli(p)
/// trials, drawn as a single binomial variate.
fn sample_frequency(p: f64, shots: u64, seed: u64, x: usize, y: usize) -> Result<f64> {
    let mut rng = stream_rng(seed, cell_stream(x, y));
    let dist = Binomial::new(shots, p).map_err(|e| Error::BadArgument(format!("binomial({shots}, {p}): {e}")))?;
    Ok(dist.sample(&mut rng) as f64 / shots as f64)
}

/// `P(b|x) = tr(ρ_x E_b)` for a single `N`-outcome measurement.
pub fn guessing_table(e: &Ensemble, effects: &[Effect]) -> Result<ProbabilityTable> {
    let n = e.len();
    if effects.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "guessing measurement needs {n} outcomes, got {}",
            effects.len()
        )));
    }
    if let Some(bad) = effects.iter().find(|m| m.dim() != e.dim()) {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: bad.dim(),
        });
    }
    let mut sum = ComplexMatrix::zeros(e.dim());
    for m in effects {
        sum = &sum + m.matrix();
    }
    let deviation = sum.max_abs_diff(&ComplexMatrix::identity(e.dim()));
    if deviation > Tolerances::DEFAULT.povm {
        return Err(Error::NotAPovm { deviation });
    }
    let mut p = Vec::with_capacity(n * n);
    for rho in e.states() {
        let row: Vec<f64> = effects.iter().map(|m| rho.probability(m).max(0.0)).collect();
        // renormalize away the ≤1e-8 POVM defect
        let total: f64 = row.iter().sum();
        p.extend(row.into_iter().map(|v| v / total));
    }
    ProbabilityTable::new(n, WitnessKind::Guessing.measurements(n), n, p)
}

/// Table of pair differences for a model, in pair order. Convenience for
/// callers that only need the differences.
pub fn model_pair_differences(e: &Ensemble, ms: &PairMeasurementSet) -> Result<Vec<f64>> {
    check_model(e, ms)?;
    Ok(ms
        .iter()
        .map(|((x, xp), m)| e.state(x).probability(m) - e.state(xp).probability(m))
        .collect())
}
