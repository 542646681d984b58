//! Finite-dimensional complex Hilbert space primitives.
//!
//! States are normalized amplitude vectors over the computational coordinates.
//! The inner product is conjugate-linear in its first argument. Angles between
//! states are projective: they ignore global phase and lie in `[0, π/2]`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{ToleranceConfig, ORTHONORMAL};

/// A complex amplitude.
pub type Amplitude = Complex64;

/// A normalized state vector in a space of dimension at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = norm(&amps);
        if (norm - 1.0).abs() > ORTHONORMAL {
            return Err(Error::Normalization { norm });
        }
        Ok(Self { amps })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes to unit norm.
    pub fn normalize(mut amps: Vec<Amplitude>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = norm(&amps);
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps })
    }

    /// Builds a state from real amplitudes, normalizing them.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalize(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis vector with a one at `index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if index >= dim {
            return Err(Error::InvalidBasisIndex { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// The equal superposition of all computational basis vectors.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        Self::normalize(vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let u = Complex64::from_polar(1.0, phi);
        Self {
            amps: self.amps.iter().map(|a| a * u).collect(),
        }
    }

    /// Amplitudes as `[re, im]` pairs, the serialized form used in documents and reports.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amps.iter().map(|a| [a.re, a.im]).collect()
    }

    /// Parses `[re, im]` pairs; the result must already be normalized.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}

fn check_amplitudes(amps: &[Amplitude]) -> Result<()> {
    if amps.len() < 2 {
        return Err(Error::DimensionTooSmall(amps.len()));
    }
    if let Some(index) = amps
        .iter()
        .position(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

fn norm(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_dims(p: &StateVector, q: &StateVector) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// An angle between two states, always within `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleRadians(f64);

impl AngleRadians {
    pub const ZERO: Self = Self(0.0);
    pub const RIGHT: Self = Self(FRAC_PI_2);

    /// Clamps `value` into `[0, π/2]`. NaN maps to `π/2`.
    pub fn clamped(value: f64) -> Self {
        if value.is_nan() {
            return Self::RIGHT;
        }
        Self(value.clamp(0.0, FRAC_PI_2))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `cos²θ`, the measurement probability associated with the angle.
    pub fn cos_squared(self) -> f64 {
        let c = self.0.cos();
        c * c
    }
}

/// `⟨p, q⟩ = Σ conj(pᵢ) qᵢ`.
pub fn inner_product(p: &StateVector, q: &StateVector) -> Result<Amplitude> {
    check_dims(p, q)?;
    Ok(inner(&p.amps, &q.amps))
}

fn inner(p: &[Amplitude], q: &[Amplitude]) -> Amplitude {
    p.iter()
        .zip(q)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

/// `|⟨p, q⟩|`, the cosine of the angle between `p` and `q`.
pub fn fidelity(p: &StateVector, q: &StateVector) -> Result<f64> {
    Ok(inner_product(p, q)?.norm())
}

/// The angle `θ` with `cos θ = |⟨p, q⟩|`.
///
/// Evaluated as `atan2(‖q − ⟨p,q⟩p‖, |⟨p,q⟩|)`, which keeps full relative
/// precision for nearly parallel states where `acos` of the fidelity does not.
pub fn angle(p: &StateVector, q: &StateVector) -> Result<AngleRadians> {
    check_dims(p, q)?;
    Ok(angle_unchecked(&p.amps, &q.amps))
}

fn angle_unchecked(p: &[Amplitude], q: &[Amplitude]) -> AngleRadians {
    let overlap = inner(p, q);
    let sin = p
        .iter()
        .zip(q)
        .map(|(a, b)| (b - overlap * a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    AngleRadians::clamped(sin.atan2(overlap.norm()))
}

/// `min_φ ‖p − e^{iφ} q‖ = 2 sin(θ/2)`.
///
/// The raw Euclidean distance depends on relative phase; minimizing over the
/// phase leaves a function of the angle alone.
pub fn chord_distance(p: &StateVector, q: &StateVector) -> Result<f64> {
    Ok(2.0 * (angle(p, q)?.value() / 2.0).sin())
}

/// True when `p` and `q` are the same ray: their phase-minimized distance is at most `tol`.
pub fn same_ray(p: &StateVector, q: &StateVector, tol: f64) -> Result<bool> {
    Ok(chord_distance(p, q)? <= tol)
}

/// Born-rule probabilities `|⟨bᵢ, q⟩|²` over the basis.
pub fn measurement_distribution(q: &StateVector, basis: &ObservableBasis) -> Result<Vec<f64>> {
    basis.check_dim(q.dim())?;
    Ok(basis
        .vectors
        .iter()
        .map(|b| inner(&b.amps, &q.amps).norm_sqr())
        .collect())
}

/// Tensor product; the amplitude at `i·q.dim + j` is `pᵢ qⱼ`.
pub fn tensor(p: &StateVector, q: &StateVector) -> StateVector {
    let amps = p
        .amps
        .iter()
        .flat_map(|a| q.amps.iter().map(move |b| a * b))
        .collect();
    StateVector::normalize(amps).expect("product of normalized states is nonzero")
}

/// A labeled orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    vectors: Vec<StateVector>,
    labels: Vec<String>,
}

impl ObservableBasis {
    /// Validates orthonormality and label uniqueness at the default tolerance.
    pub fn new(vectors: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        Self::with_tolerance(vectors, labels, &ToleranceConfig::default())
    }

    pub fn with_tolerance(
        vectors: Vec<StateVector>,
        labels: Vec<String>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let dim = vectors.first().map_or(0, StateVector::dim);
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: v.dim(),
            });
        }
        if vectors.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: vectors.len(),
            });
        }
        if labels.len() != dim {
            return Err(Error::Label(format!(
                "expected {dim} labels, found {}",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::Label(format!("label {i} is empty")));
            }
            if labels[..i].contains(label) {
                return Err(Error::Label(format!("duplicate label {label:?}")));
            }
        }
        for (i, v) in vectors.iter().enumerate() {
            let norm = v.norm();
            if (norm - 1.0).abs() > tol.orthonormal {
                return Err(Error::Normalization { norm });
            }
            for (j, w) in vectors.iter().enumerate().skip(i + 1) {
                let overlap = inner(&v.amps, &w.amps).norm();
                if overlap > tol.orthonormal {
                    return Err(Error::Orthogonality { i, j, overlap });
                }
            }
        }
        Ok(Self { vectors, labels })
    }

    /// The computational basis labeled `b1, …, bd`.
    pub fn computational(dim: usize) -> Result<Self> {
        Self::computational_with_labels((1..=dim).map(|i| format!("b{i}")).collect())
    }

    /// The computational basis with caller-supplied labels.
    pub fn computational_with_labels(labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        let vectors = (0..dim)
            .map(|i| StateVector::basis(dim, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors, labels)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> Result<&StateVector> {
        self.vectors.get(index).ok_or(Error::InvalidBasisIndex {
            index,
            dim: self.dim(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Angles `θ(q, bᵢ)` for every basis element.
    pub fn angles(&self, q: &StateVector) -> Result<Vec<AngleRadians>> {
        self.check_dim(q.dim())?;
        Ok(self
            .vectors
            .iter()
            .map(|b| angle_unchecked(&q.amps, &b.amps))
            .collect())
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn b(d: usize, i: usize) -> StateVector {
        StateVector::basis(d, i).unwrap()
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_filter("nonzero", |v| {
                v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3)
            })
            .prop_map(|v| {
                StateVector::normalize(v.into_iter().map(|(r, i)| c(r, i)).collect()).unwrap()
            })
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&b(4, 0), &b(4, 0)).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&b(4, 0), &b(4, 1)).unwrap(), c(0.0, 0.0));
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let ip = inner_product(&plus, &b(2, 0)).unwrap();
        assert!(close(ip.re, FRAC_1_SQRT_2, 1e-15) && ip.im == 0.0);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let p = StateVector::normalize(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let q = b(2, 0);
        // <p, q> = conj(i)/sqrt2
        let ip = inner_product(&p, &q).unwrap();
        assert!(close(ip.im, -FRAC_1_SQRT_2, 1e-15));
        assert_eq!(inner_product(&q, &p).unwrap(), ip.conj());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert_eq!(
            inner_product(&b(2, 0), &b(3, 0)),
            Err(Error::Dimension {
                expected: 2,
                found: 3
            })
        );
        assert!(fidelity(&b(2, 0), &b(4, 0)).is_err());
        assert!(angle(&b(2, 0), &b(4, 0)).is_err());
        assert!(chord_distance(&b(2, 0), &b(4, 0)).is_err());
    }

    #[test]
    fn fidelity_angle_and_chord_examples() {
        let u4 = StateVector::uniform(4).unwrap();
        assert!(close(fidelity(&u4, &u4).unwrap(), 1.0, 1e-15));
        assert_eq!(fidelity(&b(4, 0), &b(4, 1)).unwrap(), 0.0);
        for i in 0..4 {
            assert!(close(fidelity(&u4, &b(4, i)).unwrap(), 0.5, 1e-15));
        }

        assert_eq!(angle(&u4, &u4).unwrap().value(), 0.0);
        assert_eq!(angle(&b(4, 0), &b(4, 1)).unwrap().value(), PI / 2.0);
        assert!(close(
            angle(&u4, &b(4, 0)).unwrap().value(),
            FRAC_PI_3,
            1e-15
        ));

        assert_eq!(chord_distance(&u4, &u4).unwrap(), 0.0);
        assert!(close(
            chord_distance(&b(4, 0), &b(4, 1)).unwrap(),
            SQRT_2,
            1e-15
        ));
        assert!(close(chord_distance(&u4, &b(4, 0)).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn nearly_parallel_angle_keeps_precision() {
        let eps = 1e-12;
        let q = StateVector::from_real(&[1.0, eps]).unwrap();
        let theta = angle(&q, &b(2, 0)).unwrap().value();
        assert!(close(theta, eps, 1e-20));
    }

    #[test]
    fn measurement_distribution_examples() {
        let basis = ObservableBasis::computational(4).unwrap();
        assert_eq!(
            measurement_distribution(&b(4, 0), &basis).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        let u = measurement_distribution(&StateVector::uniform(4).unwrap(), &basis).unwrap();
        assert!(u.iter().all(|&p| close(p, 0.25, 1e-15)));
        let q = StateVector::from_real(&[0.6, 0.8, 0.0, 0.0]).unwrap();
        let d = measurement_distribution(&q, &basis).unwrap();
        assert!(close(d[0], 0.36, 1e-15) && close(d[1], 0.64, 1e-15));
        assert_eq!(&d[2..], &[0.0, 0.0]);
        assert!(measurement_distribution(&b(2, 0), &basis).is_err());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&b(2, 0), &b(2, 0)), b(4, 0));
        assert_eq!(tensor(&b(2, 1), &b(2, 0)), b(4, 2));
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let t = tensor(&plus, &StateVector::uniform(3).unwrap());
        assert_eq!(t.dim(), 6);
        assert!(close(t.norm(), 1.0, 1e-15));
    }

    #[test]
    fn validate_basis_examples() {
        assert!(ObservableBasis::computational(4).is_ok());
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let minus = StateVector::from_real(&[1.0, -1.0]).unwrap();
        let labels = vec!["+".to_string(), "-".to_string()];
        assert!(ObservableBasis::new(vec![plus, minus], labels.clone()).is_ok());
        assert!(matches!(
            ObservableBasis::new(vec![b(2, 0), b(2, 0)], labels.clone()),
            Err(Error::Orthogonality { i: 0, j: 1, .. })
        ));
        assert!(matches!(
            ObservableBasis::new(vec![b(2, 0), b(2, 1)], vec!["x".into(), "x".into()]),
            Err(Error::Label(_))
        ));
        assert!(matches!(
            ObservableBasis::new(vec![b(3, 0), b(3, 1)], labels),
            Err(Error::Dimension {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn rejects_unnormalized_and_non_finite_input() {
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::Normalization { .. })
        ));
        assert_eq!(
            StateVector::new(vec![c(f64::NAN, 0.0), c(1.0, 0.0)]),
            Err(Error::NonFinite { index: 0 })
        );
        assert_eq!(
            StateVector::new(vec![c(1.0, 0.0)]),
            Err(Error::DimensionTooSmall(1))
        );
        assert_eq!(
            StateVector::normalize(vec![c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn angle_is_clamped_and_hadamard_angles() {
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(close(
            angle(&plus, &b(2, 1)).unwrap().value(),
            FRAC_PI_4,
            1e-15
        ));
        assert_eq!(AngleRadians::clamped(-1e-17).value(), 0.0);
        assert_eq!(AngleRadians::clamped(2.0).value(), FRAC_PI_2);
        assert_eq!(AngleRadians::clamped(f64::NAN).value(), FRAC_PI_2);
    }

    proptest! {
        #[test]
        fn fidelity_symmetric_and_phase_invariant(p in arb_state(4), q in arb_state(4), phi in 0.0..(2.0 * PI)) {
            prop_assert_eq!(fidelity(&p, &q).unwrap(), fidelity(&q, &p).unwrap());
            let rotated = p.with_global_phase(phi);
            prop_assert!(close(fidelity(&rotated, &q).unwrap(), fidelity(&p, &q).unwrap(), 1e-12));
        }

        #[test]
        fn pythagoras_over_complete_basis(q in arb_state(5)) {
            let basis = ObservableBasis::computational(5).unwrap();
            let total: f64 = basis.angles(&q).unwrap().iter().map(|a| a.cos_squared()).sum();
            prop_assert!(close(total, 1.0, 1e-9));
            let dist: f64 = measurement_distribution(&q, &basis).unwrap().iter().sum();
            prop_assert!(close(dist, 1.0, 1e-9));
        }

        #[test]
        fn tensor_amplitudes_are_products(p in arb_state(2), q in arb_state(3)) {
            let t = tensor(&p, &q);
            for i in 0..2 {
                for j in 0..3 {
                    let expected = p.amps()[i] * q.amps()[j];
                    prop_assert!((t.amps()[i * 3 + j] - expected).norm() < 1e-12);
                }
            }
        }
    }
}
