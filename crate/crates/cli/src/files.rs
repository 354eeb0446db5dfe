//! JSON file formats: ensembles, probability tables, and see-saw dumps.
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows.
//! Floats are written in shortest round-trip form, so a write followed by a
//! read reproduces every value exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use dimwit::quantum::pairs;
use dimwit::{
    Complex64, ComplexMatrix, Effect, Ensemble, PairMeasurementSet, ProbabilityTable, StateVector, WitnessKind,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Complex = [f64; 2];
pub type MatrixRows = Vec<Vec<Complex>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_matrices: Option<Vec<MatrixRows>>,
    /// Pair effects keyed `"x,x'"`; present in see-saw dumps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effects: Option<BTreeMap<String, MatrixRows>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub witness: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `p[x−1][y−1][b−1]`.
    pub p: Vec<Vec<Vec<f64>>>,
}

fn to_complex(z: &Complex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn from_complex(z: &Complex64) -> Complex {
    [z.re, z.im]
}

fn matrix_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(from_complex).collect())
        .collect()
}

fn parse_matrix(rows: &MatrixRows, dim: usize, what: &str) -> Result<ComplexMatrix, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::usage(format!("{what}: expected a {dim}×{dim} matrix")));
    }
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(to_complex).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::usage(format!("{what}: {e}")))
}

impl EnsembleFile {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        if let Ok(vectors) = e.pure_vectors() {
            Self {
                dim: e.dim(),
                states: Some(
                    vectors
                        .iter()
                        .map(|v| v.amplitudes().iter().map(from_complex).collect())
                        .collect(),
                ),
                density_matrices: None,
                effects: None,
            }
        } else {
            Self {
                dim: e.dim(),
                states: None,
                density_matrices: Some(e.states().iter().map(|s| matrix_rows(s.matrix())).collect()),
                effects: None,
            }
        }
    }

    pub fn with_effects(mut self, ms: &PairMeasurementSet) -> Self {
        self.effects = Some(
            ms.iter()
                .map(|((x, xp), m)| (format!("{x},{xp}"), matrix_rows(m.matrix())))
                .collect(),
        );
        self
    }

    pub fn to_ensemble(&self) -> Result<Ensemble, CliError> {
        if self.dim == 0 {
            return Err(CliError::usage("ensemble file: dim must be positive"));
        }
        match (&self.states, &self.density_matrices) {
            (Some(states), None) => {
                let vectors = states
                    .iter()
                    .enumerate()
                    .map(|(i, amps)| {
                        if amps.len() != self.dim {
                            return Err(CliError::usage(format!(
                                "state {}: expected {} amplitudes, found {}",
                                i + 1,
                                self.dim,
                                amps.len()
                            )));
                        }
                        StateVector::new(amps.iter().map(to_complex).collect())
                            .map_err(|e| CliError::usage(format!("state {}: {e}", i + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ensemble::from_pure(vectors).map_err(CliError::from)
            }
            (None, Some(mats)) => {
                let mats = mats
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| parse_matrix(rows, self.dim, &format!("density matrix {}", i + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ensemble::from_density_matrices(mats).map_err(CliError::from)
            }
            _ => Err(CliError::usage(
                "ensemble file must contain exactly one of \"states\" or \"density_matrices\"",
            )),
        }
    }

    /// The dumped pair effects, if any, checked against the ensemble size.
    pub fn to_measurements(&self, n: usize) -> Result<Option<PairMeasurementSet>, CliError> {
        let Some(map) = &self.effects else {
            return Ok(None);
        };
        let expected = n * n.saturating_sub(1) / 2;
        if map.len() != expected {
            return Err(CliError::usage(format!(
                "effects: expected {expected} pairs, found {}",
                map.len()
            )));
        }
        let effects = pairs(n)
            .map(|(x, xp)| {
                let key = format!("{x},{xp}");
                let rows = map
                    .get(&key)
                    .ok_or_else(|| CliError::usage(format!("effects: missing pair \"{key}\"")))?;
                let m = parse_matrix(rows, self.dim, &format!("effect \"{key}\""))?;
                Effect::new(m).map_err(|e| CliError::usage(format!("effect \"{key}\": {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PairMeasurementSet::new(self.dim, n, effects)
            .map(Some)
            .map_err(CliError::from)
    }
}

impl TableFile {
    pub fn from_table(kind: WitnessKind, t: &ProbabilityTable) -> Self {
        Self {
            witness: kind.name().to_string(),
            n: t.num_preparations(),
            m: t.num_measurements(),
            k: t.num_outcomes(),
            p: t.to_nested(),
        }
    }

    pub fn kind(&self) -> Result<WitnessKind, CliError> {
        self.witness.parse().map_err(CliError::from)
    }

    /// Validated table whose declared shape matches both the data and the
    /// witness kind.
    pub fn to_table(&self) -> Result<ProbabilityTable, CliError> {
        let kind = self.kind()?;
        if self.p.len() != self.n {
            return Err(CliError::usage(format!(
                "table: N={} but p has {} preparations",
                self.n,
                self.p.len()
            )));
        }
        for (xi, rows) in self.p.iter().enumerate() {
            if rows.len() != self.m {
                return Err(CliError::usage(format!(
                    "table: x={} has {} measurements, declared m={}",
                    xi + 1,
                    rows.len(),
                    self.m
                )));
            }
            if let Some((yi, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != self.k) {
                return Err(CliError::usage(format!(
                    "table: x={}, y={} has {} outcomes, declared k={}",
                    xi + 1,
                    yi + 1,
                    row.len(),
                    self.k
                )));
            }
        }
        let t = ProbabilityTable::from_nested(&self.p)?;
        t.check_shape(kind)?;
        Ok(t)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize infallibly")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = to_json(value);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}
