/// Numerical tolerances shared by every module.
///
/// The defaults are the values the library is validated against; tests that
/// need a different regime construct their own record and pass it to the
/// `*_with` variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum `|A[i][j] - conj(A[j][i])|` accepted as Hermitian.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm falls below this
    /// (scaled by `max(1, ‖A‖_F)`).
    pub jacobi_offdiag: f64,
    /// Sweep cap for the Jacobi eigensolver.
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues with magnitude at or below this count as zero.
    pub zero_eigenvalue: f64,
    /// Allowed negativity of density-matrix and effect eigenvalues.
    pub eigenvalue_slack: f64,
    /// Allowed deviation of a density-matrix trace from one.
    pub trace: f64,
    /// Allowed deviation of a state vector's norm from one.
    pub norm: f64,
    /// Allowed deviation of a probability row sum from one.
    pub probability_sum: f64,
    /// Allowed excursion of a single probability outside `[0, 1]`.
    pub probability_range: f64,
    /// Slack for comparisons against closed-form bounds.
    pub analytic_slack: f64,
    /// Slack for comparisons against enumerated or numerical bounds.
    pub numeric_slack: f64,
    /// Allowed deviation of a sum of effects from the identity.
    pub povm: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        jacobi_offdiag: 1e-12,
        jacobi_max_sweeps: 100,
        zero_eigenvalue: 1e-10,
        eigenvalue_slack: 1e-9,
        trace: 1e-9,
        norm: 1e-10,
        probability_sum: 1e-8,
        probability_range: 1e-9,
        analytic_slack: 1e-9,
        numeric_slack: 1e-6,
        povm: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
