//! Exact linear algebra for one and two qubits.
//!
//! Two-qubit amplitudes are ordered `|00⟩, |01⟩, |10⟩, |11⟩` with the left ket
//! belonging to subsystem 1.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result, TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The angle ξ ∈ [0, π/4] parametrizing the state pair.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct StateAngle(f64);

impl StateAngle {
    pub const ZERO: StateAngle = StateAngle(0.0);
    pub const MAX: StateAngle = StateAngle(FRAC_PI_4);

    /// Values within `TOL` outside the range are snapped to the boundary.
    pub fn new(xi: f64) -> Result<Self> {
        if !xi.is_finite() || !(-TOL..=FRAC_PI_4 + TOL).contains(&xi) {
            return Err(Error::InvalidAngle(xi));
        }
        Ok(StateAngle(xi.clamp(0.0, FRAC_PI_4)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `sin 2ξ`, the overlap of the pair.
    pub fn sin2(self) -> f64 {
        (2.0 * self.0).sin()
    }

    pub fn cos2(self) -> f64 {
        (2.0 * self.0).cos()
    }
}

impl fmt::Display for StateAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A normalized single-qubit state `amp0|0⟩ + amp1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    amp0: Complex64,
    amp1: Complex64,
}

impl PureQubit {
    /// Normalizes the given amplitudes. Fails on a (near) zero vector.
    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self> {
        let norm_sqr = amp0.norm_sqr() + amp1.norm_sqr();
        if !(norm_sqr > 1e-30) || !norm_sqr.is_finite() {
            return Err(Error::DegenerateOutcome { p_yes: norm_sqr });
        }
        let n = norm_sqr.sqrt();
        Ok(PureQubit {
            amp0: amp0 / n,
            amp1: amp1 / n,
        })
    }

    pub fn from_real(amp0: f64, amp1: f64) -> Result<Self> {
        Self::new(Complex64::new(amp0, 0.0), Complex64::new(amp1, 0.0))
    }

    pub fn zero() -> Self {
        PureQubit {
            amp0: Complex64::new(1.0, 0.0),
            amp1: ZERO,
        }
    }

    pub fn one() -> Self {
        PureQubit {
            amp0: ZERO,
            amp1: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        PureQubit {
            amp0: Complex64::new(FRAC_1_SQRT_2, 0.0),
            amp1: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn minus() -> Self {
        PureQubit {
            amp0: Complex64::new(FRAC_1_SQRT_2, 0.0),
            amp1: Complex64::new(-FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn amps(&self) -> [Complex64; 2] {
        [self.amp0, self.amp1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureQubit) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// Largest per-amplitude distance, no phase alignment.
    pub fn max_abs_diff(&self, other: &PureQubit) -> f64 {
        (self.amp0 - other.amp0)
            .norm()
            .max((self.amp1 - other.amp1).norm())
    }
}

/// A two-qubit state vector in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

impl TwoQubitState {
    /// Wraps raw amplitudes without normalizing.
    pub fn from_amps(amps: [Complex64; 4]) -> Self {
        TwoQubitState { amps }
    }

    pub fn amps(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &TwoQubitState) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Which half of a two-qubit system a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: [[Complex64; 2]; 2],
}

impl DensityMatrix {
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Self {
        DensityMatrix { entries }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureQubit) -> Self {
        let a = psi.amps();
        let mut entries = [[ZERO; 2]; 2];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i] * a[j].conj();
            }
        }
        DensityMatrix { entries }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// `max |ρ - ρ†|` entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        let e = &self.entries;
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((e[i][j] - e[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let e = &self.entries;
        let a = e[0][0].re;
        let d = e[1][1].re;
        let off = 0.5 * (e[0][1] + e[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
        [mean - radius, mean + radius]
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let e = &self.entries;
        let mut p = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                p += e[i][j] * e[j][i];
            }
        }
        p.re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    /// Hermitian, unit trace and positive semidefinite, all to `TOL`.
    pub fn is_valid(&self) -> bool {
        self.hermiticity_error() < TOL
            && (self.trace() - 1.0).norm() < TOL
            && self.eigenvalues()[0] >= -TOL
    }
}

/// `(cos ξ|0⟩ + sin ξ|1⟩, sin ξ|0⟩ + cos ξ|1⟩)`.
pub fn state_pair(xi: StateAngle) -> (PureQubit, PureQubit) {
    let (s, c) = xi.value().sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    (
        PureQubit {
            amp0: re(c),
            amp1: re(s),
        },
        PureQubit {
            amp0: re(s),
            amp1: re(c),
        },
    )
}

/// `⟨ψ₁|ψ₂⟩ = sin 2ξ`.
pub fn overlap(xi: StateAngle) -> f64 {
    xi.sin2()
}

/// Kronecker product `q1 ⊗ q2`.
pub fn tensor(q1: &PureQubit, q2: &PureQubit) -> TwoQubitState {
    let a = q1.amps();
    let b = q2.amps();
    TwoQubitState {
        amps: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]],
    }
}

/// Reduced density matrix of the kept subsystem.
pub fn partial_trace(state: &TwoQubitState, keep: Subsystem) -> DensityMatrix {
    let a = &state.amps;
    // amplitude of |ij⟩ lives at 2i + j
    let amp = |kept: usize, traced: usize| match keep {
        Subsystem::First => a[2 * kept + traced],
        Subsystem::Second => a[2 * traced + kept],
    };
    let mut entries = [[ZERO; 2]; 2];
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            *e = (0..2).map(|t| amp(r, t) * amp(c, t).conj()).sum();
        }
    }
    DensityMatrix { entries }
}

/// `⟨target|ρ|target⟩`, clamped to [0, 1].
pub fn fidelity_pure(rho: &DensityMatrix, target: &PureQubit) -> f64 {
    let t = target.amps();
    let e = &rho.entries;
    let mut f = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            f += t[i].conj() * e[i][j] * t[j];
        }
    }
    f.re.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_8, SQRT_2};

    fn angle(x: f64) -> StateAngle {
        StateAngle::new(x).unwrap()
    }

    #[test]
    fn angle_range_is_enforced() {
        assert!(StateAngle::new(-0.1).is_err());
        assert!(StateAngle::new(0.8).is_err());
        assert!(StateAngle::new(f64::NAN).is_err());
        assert_eq!(StateAngle::new(FRAC_PI_4 + 1e-14).unwrap(), StateAngle::MAX);
        assert_eq!(StateAngle::new(-1e-14).unwrap(), StateAngle::ZERO);
    }

    #[test]
    fn state_pair_examples() {
        let (p1, p2) = state_pair(StateAngle::ZERO);
        assert_eq!(p1, PureQubit::zero());
        assert_eq!(p2, PureQubit::one());

        let (p1, p2) = state_pair(angle(FRAC_PI_8));
        let hi = 0.5 * (2.0 + SQRT_2).sqrt();
        let lo = 0.5 * (2.0 - SQRT_2).sqrt();
        assert_abs_diff_eq!(p1.amp0().re, hi, epsilon = TOL);
        assert_abs_diff_eq!(p1.amp1().re, lo, epsilon = TOL);
        assert_abs_diff_eq!(p2.amp0().re, lo, epsilon = TOL);
        assert_abs_diff_eq!(p2.amp1().re, hi, epsilon = TOL);
        assert_abs_diff_eq!(hi, 0.923880, epsilon = 1e-6);

        let (p1, p2) = state_pair(StateAngle::MAX);
        assert!(p1.max_abs_diff(&p2) < TOL);
        assert_abs_diff_eq!(p1.amp0().re, FRAC_1_SQRT_2, epsilon = TOL);
    }

    #[test]
    fn overlap_examples() {
        assert_abs_diff_eq!(overlap(StateAngle::ZERO), 0.0);
        assert_abs_diff_eq!(overlap(StateAngle::MAX), 1.0, epsilon = TOL);
        assert_abs_diff_eq!(overlap(angle(FRAC_PI_8)), FRAC_1_SQRT_2, epsilon = TOL);
        for k in 0..100 {
            let xi = angle(FRAC_PI_4 * k as f64 / 99.0);
            let (p1, p2) = state_pair(xi);
            assert!((p1.inner(&p2) - overlap(xi)).norm() < TOL);
        }
    }

    #[test]
    fn tensor_examples() {
        let z = PureQubit::zero();
        let o = PureQubit::one();
        let re = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(tensor(&z, &z).amps(), &[re(1.0), ZERO, ZERO, ZERO]);
        assert_eq!(tensor(&o, &z).amps(), &[ZERO, ZERO, re(1.0), ZERO]);

        let (p1, _) = state_pair(angle(FRAC_PI_8));
        let t = tensor(&p1, &p1);
        // outer-product oracle
        let v = [FRAC_PI_8.cos(), FRAC_PI_8.sin()];
        let mut expected = [ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                expected[2 * i + j] = re(v[i] * v[j]);
            }
        }
        assert!(t.max_abs_diff(&TwoQubitState::from_amps(expected)) < TOL);
        let frozen = [0.853553, 0.353553, 0.353553, 0.146447];
        for (a, f) in t.amps().iter().zip(frozen) {
            assert_abs_diff_eq!(a.re, f, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(t.norm_sqr(), 1.0, epsilon = TOL);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let bell = TwoQubitState::from_amps([h, ZERO, ZERO, h]);
        for keep in [Subsystem::First, Subsystem::Second] {
            let rho = partial_trace(&bell, keep);
            assert!(rho.is_valid());
            assert_abs_diff_eq!(rho.entries()[0][0].re, 0.5, epsilon = TOL);
            assert_abs_diff_eq!(rho.entries()[1][1].re, 0.5, epsilon = TOL);
            assert!(rho.entries()[0][1].norm() < TOL);
            assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = TOL);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let psi = PureQubit::new(Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.7)).unwrap();
        let phi = PureQubit::from_real(0.6, -0.8).unwrap();
        let joint = tensor(&psi, &phi);
        let r1 = partial_trace(&joint, Subsystem::First);
        let r2 = partial_trace(&joint, Subsystem::Second);
        assert!(r1.max_abs_diff(&DensityMatrix::from_pure(&psi)) < TOL);
        assert!(r2.max_abs_diff(&DensityMatrix::from_pure(&phi)) < TOL);
        assert_abs_diff_eq!(r1.purity(), 1.0, epsilon = TOL);
    }

    #[test]
    fn fidelity_examples() {
        let psi = PureQubit::from_real(0.28, 0.96).unwrap();
        assert_abs_diff_eq!(
            fidelity_pure(&DensityMatrix::from_pure(&psi), &psi),
            1.0,
            epsilon = TOL
        );

        let half = Complex64::new(0.5, 0.0);
        let mixed = DensityMatrix::from_entries([[half, ZERO], [ZERO, half]]);
        assert_abs_diff_eq!(fidelity_pure(&mixed, &psi), 0.5, epsilon = TOL);

        let (p1, _) = state_pair(angle(FRAC_PI_8));
        let ket0 = DensityMatrix::from_pure(&PureQubit::zero());
        let f = fidelity_pure(&ket0, &p1);
        // matrix-vector oracle: |⟨0|ψ⟩|²
        let oracle = p1.amp0().norm_sqr();
        assert_abs_diff_eq!(f, oracle, epsilon = TOL);
        assert_abs_diff_eq!(f, 0.853553, epsilon = 1e-6);
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(PureQubit::from_real(0.0, 0.0).is_err());
    }
}
