//! States, effects, ensembles and the distinguishability quantities built on
//! them: trace distance, pure-state fidelity, the Helstrom effect, and the
//! purity of an ensemble's average state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian_with, inner, vec_norm, ComplexMatrix};

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes whose norm is one within tolerance.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state vector must be nonempty".into()));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.norm {
            return Err(Error::InvalidState(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if amplitudes.is_empty() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::BadArgument(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }
}

/// Positive semidefinite unit-trace operator, optionally carrying the pure
/// vector it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    pure: Option<StateVector>,
}

impl DensityMatrix {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        let eig = eig_hermitian_with(&matrix, &tol)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol.eigenvalue_slack {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {tr}, expected 1")));
        }
        Ok(Self { matrix, pure: None })
    }

    pub fn from_pure(psi: StateVector) -> Self {
        Self {
            matrix: psi.projector(),
            pure: Some(psi),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
            pure: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn pure_vector(&self) -> Option<&StateVector> {
        self.pure.as_ref()
    }

    /// `(1 - η)ρ + η·I/d`.
    pub fn depolarized(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::BadArgument(format!(
                "depolarizing strength {eta} outside [0, 1]"
            )));
        }
        if eta == 0.0 {
            return Ok(self.clone());
        }
        let d = self.dim();
        let mixed = ComplexMatrix::identity(d).scale(eta / d as f64);
        Ok(Self {
            matrix: &self.matrix.scale(1.0 - eta) + &mixed,
            pure: None,
        })
    }

    /// Born probability `tr(ρ E)`.
    pub fn probability(&self, effect: &Effect) -> f64 {
        match &self.pure {
            Some(psi) => effect.matrix().expectation(psi.amplitudes()),
            None => self.matrix.trace_product(effect.matrix()).re,
        }
    }
}

/// Measurement operator with spectrum in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        let eig = eig_hermitian_with(&matrix, &tol)?;
        let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol.eigenvalue_slack || max > 1.0 + tol.eigenvalue_slack {
            return Err(Error::InvalidEffect(format!("spectrum [{min}, {max}] outside [0, 1]")));
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `I - E`, the effect of the other outcome of a binary measurement.
    pub fn complement(&self) -> Effect {
        Effect {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
        }
    }
}

/// `N` preparations on a common `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    dim: usize,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self> {
        let dim = states
            .first()
            .map(DensityMatrix::dim)
            .ok_or_else(|| Error::BadArgument("ensemble must contain at least one state".into()))?;
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, states })
    }

    pub fn from_pure(vectors: Vec<StateVector>) -> Result<Self> {
        Self::new(vectors.into_iter().map(DensityMatrix::from_pure).collect())
    }

    /// Builds a pure ensemble from raw amplitude arrays.
    pub fn from_amplitudes(raw: Vec<Vec<Complex64>>) -> Result<Self> {
        let vectors = raw
            .into_iter()
            .enumerate()
            .map(|(i, a)| StateVector::new(a).map_err(|e| Error::InvalidState(format!("state {}: {e}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pure(vectors)
    }

    /// Builds a mixed ensemble from raw row-major density matrices.
    pub fn from_density_matrices(raw: Vec<ComplexMatrix>) -> Result<Self> {
        let states = raw
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                DensityMatrix::from_matrix(m).map_err(|e| Error::InvalidState(format!("state {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// 1-based access, matching preparation labels `x ∈ 1..=N`.
    pub fn state(&self, x: usize) -> &DensityMatrix {
        &self.states[x - 1]
    }

    pub fn is_pure(&self) -> bool {
        self.states.iter().all(|s| s.pure.is_some())
    }

    /// Pure vectors for every member, or the first index (1-based) lacking one.
    pub fn pure_vectors(&self) -> Result<Vec<&StateVector>> {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| s.pure_vector().ok_or(Error::NotPure { index: i + 1 }))
            .collect()
    }
}

/// Number of unordered pairs among `n` preparations.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `(x, x')`, `x > x'`, in the order
/// `(2,1), (3,1), (3,2), (4,1), …`.
pub fn pair_index(x: usize, x_prime: usize) -> usize {
    debug_assert!(x > x_prime && x_prime >= 1);
    (x - 1) * (x - 2) / 2 + (x_prime - 1)
}

/// All pairs `(x, x')` with `x > x'` in storage order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=n).flat_map(|x| (1..x).map(move |xp| (x, xp)))
}

/// One binary measurement per pair `y = (x, x')`, storing the `b = 1` effect.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMeasurementSet {
    dim: usize,
    n: usize,
    effects: Vec<Effect>,
}

impl PairMeasurementSet {
    /// `effects` must be listed in [`pairs`] order.
    pub fn new(dim: usize, n: usize, effects: Vec<Effect>) -> Result<Self> {
        if effects.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n),
                found: effects.len(),
            });
        }
        if let Some(bad) = effects.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, n, effects })
    }

    /// The optimal discriminating effect for every pair of the ensemble.
    pub fn helstrom(ensemble: &Ensemble) -> Result<Self> {
        let effects = pairs(ensemble.len())
            .map(|(x, xp)| helstrom_effect(ensemble.state(x), ensemble.state(xp)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ensemble.dim(), ensemble.len(), effects)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_preparations(&self) -> usize {
        self.n
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn effect(&self, x: usize, x_prime: usize) -> &Effect {
        &self.effects[pair_index(x, x_prime)]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Effect)> {
        pairs(self.n).zip(&self.effects)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `½‖ρ − σ‖₁`.
///
/// The arguments are put in a canonical order first, so the result is
/// bitwise symmetric.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let (a, b) = if entry_order(rho.matrix(), sigma.matrix()).is_le() {
        (rho, sigma)
    } else {
        (sigma, rho)
    };
    Ok(0.5 * linalg::trace_norm(&(a.matrix() - b.matrix()))?)
}

fn entry_order(a: &ComplexMatrix, b: &ComplexMatrix) -> std::cmp::Ordering {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// `|⟨ψ|φ⟩|`.
pub fn fidelity_pure(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    check_dims(psi.dim(), phi.dim())?;
    Ok(inner(psi.amplitudes(), phi.amplitudes()).norm())
}

/// Projector onto the positive eigenspace of `ρ − σ`; attains
/// `tr((ρ − σ)M) = D(ρ, σ)`. Equal states give the zero effect.
pub fn helstrom_effect(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Effect> {
    check_dims(rho.dim(), sigma.dim())?;
    let p = linalg::positive_part_projector(&(rho.matrix() - sigma.matrix()))?;
    Ok(Effect { matrix: p })
}

/// Pure states `⟨k|Ψ_x⟩ = e^{i2πkx/N}/√d`, `k = 0..d−1`, `x = 1..N`.
pub fn fourier_ensemble(n: usize, d: usize) -> Result<Ensemble> {
    if d < 1 || d > n {
        return Err(Error::BadArgument(format!(
            "Fourier ensemble needs 1 ≤ d ≤ N, got N={n}, d={d}"
        )));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (1..=n)
        .map(|x| {
            let amps = (0..d)
                .map(|k| {
                    // reduce kx mod N before the angle to keep phases exact for large products
                    let angle = 2.0 * PI * ((k * x) % n) as f64 / n as f64;
                    Complex64::from_polar(norm, angle)
                })
                .collect();
            StateVector { amplitudes: amps }
        })
        .collect();
    Ensemble::from_pure(vectors)
}

/// `Ω = (1/N) Σ ρ_x`.
pub fn average_state(e: &Ensemble) -> DensityMatrix {
    let mut sum = ComplexMatrix::zeros(e.dim());
    for s in e.states() {
        sum = &sum + s.matrix();
    }
    let matrix = sum.scale(1.0 / e.len() as f64);
    let pure = if e.len() == 1 { e.states[0].pure.clone() } else { None };
    DensityMatrix { matrix, pure }
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(rho.matrix()).re
}

/// Both sides of `Σ_{x>x'} |⟨Ψ_x|Ψ_x'⟩|² = (N²/2)·tr(Ω²) − N/2`.
pub fn overlap_sum_identity_check(e: &Ensemble) -> Result<(f64, f64)> {
    let vectors = e.pure_vectors()?;
    let n = e.len();
    let lhs: f64 = pairs(n)
        .map(|(x, xp)| inner(vectors[x - 1].amplitudes(), vectors[xp - 1].amplitudes()).norm_sqr())
        .sum();
    let nf = n as f64;
    let rhs = nf * nf / 2.0 * purity(&average_state(e)) - nf / 2.0;
    Ok((lhs, rhs))
}

/// Square-root ("pretty good") measurement of an ensemble with uniform
/// priors: `E_x = S^{-1/2} ρ_x S^{-1/2}` with `S = Σ ρ_x`, inverse taken on
/// the support of `S`. Off the support the first effect absorbs the
/// remainder so the effects sum to the identity.
pub fn square_root_measurement(e: &Ensemble) -> Result<Vec<Effect>> {
    let tol = Tolerances::DEFAULT;
    let d = e.dim();
    let mut s = ComplexMatrix::zeros(d);
    for st in e.states() {
        s = &s + st.matrix();
    }
    let eig = eig_hermitian_with(&s, &tol)?;
    let mut inv_sqrt = ComplexMatrix::zeros(d);
    let mut kernel = ComplexMatrix::zeros(d);
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let outer = ComplexMatrix::outer(v);
        if *lambda > tol.zero_eigenvalue {
            inv_sqrt = &inv_sqrt + &outer.scale(1.0 / lambda.sqrt());
        } else {
            kernel = &kernel + &outer;
        }
    }
    let mut effects: Vec<Effect> = e
        .states()
        .iter()
        .map(|st| Effect {
            matrix: &(&inv_sqrt * st.matrix()) * &inv_sqrt,
        })
        .collect();
    effects[0].matrix = &effects[0].matrix + &kernel;
    Ok(effects)
}
