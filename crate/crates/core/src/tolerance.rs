//! Numerical tolerances shared across modules.

/// Orthogonality and normalization checks on states and bases.
pub const ORTHONORMAL: f64 = 1e-9;

/// Identities that should hold to near machine precision, such as global-phase invariance.
pub const PHASE: f64 = 1e-12;

/// Tie band for preference comparisons and the slack inside the literal Nash inequalities.
pub const TIE: f64 = 1e-9;

/// Per-entry agreement of measurement distributions in the rigidity check.
pub const RIGIDITY: f64 = 1e-7;

/// Residual norm below which a Gram-Schmidt vector counts as linearly dependent.
pub const GRAM_SCHMIDT_DROP: f64 = 1e-9;

/// Tolerances used by a computation. `Default` gives the library-wide values above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub orthonormal: f64,
    pub phase: f64,
    pub tie: f64,
    pub rigidity: f64,
    pub gram_schmidt_drop: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            orthonormal: ORTHONORMAL,
            phase: PHASE,
            tie: TIE,
            rigidity: RIGIDITY,
            gram_schmidt_drop: GRAM_SCHMIDT_DROP,
        }
    }
}
