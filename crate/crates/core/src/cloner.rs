//! Symmetric 1→2 state-dependent cloner.
//!
//! With a blank ancilla the machine acts on span{|00⟩, |10⟩} as
//!
//! ```text
//! |00⟩ → a|00⟩ + b(|01⟩ + |10⟩) + c|11⟩
//! |10⟩ → a|11⟩ + b(|10⟩ + |01⟩) + c|00⟩
//! ```
//!
//! and is kept as a 4×2 isometry; its action off that subspace is never used.

use num_complex::Complex64;
use serde::Serialize;

use crate::qmath::{fidelity_pure, partial_trace, PureQubit, StateAngle, Subsystem, TwoQubitState};
use crate::{Error, Result, TOL};

/// Real cloning coefficients with `a² + 2b² + c² = 1` and `ac + b² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloneCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CloneCoeffs {
    /// Coefficients on the `+√` branch for any `|b| ≤ ½`. Negative `b` is only
    /// meaningful for oracle scans; [`coeffs_from_b`] is the checked entry point.
    pub fn from_b_signed(b: f64) -> Result<Self> {
        if !b.is_finite() || b.abs() > 0.5 + TOL {
            return Err(Error::CoefficientOutOfRange(b));
        }
        let b = b.clamp(-0.5, 0.5);
        let root = (1.0 - 4.0 * b * b).max(0.0).sqrt();
        Ok(CloneCoeffs {
            a: 0.5 * (root + 1.0),
            b,
            c: 0.5 * (root - 1.0),
        })
    }

    /// Residuals of the two unitarity constraints.
    pub fn unitarity_residuals(&self) -> (f64, f64) {
        let CloneCoeffs { a, b, c } = *self;
        (a * a + 2.0 * b * b + c * c - 1.0, a * c + b * b)
    }
}

/// `a = (√(1−4b²) + 1)/2`, `c = (√(1−4b²) − 1)/2` for `b ∈ [0, ½]`.
pub fn coeffs_from_b(b: f64) -> Result<CloneCoeffs> {
    if !(-TOL..=0.5 + TOL).contains(&b) {
        return Err(Error::CoefficientOutOfRange(b));
    }
    CloneCoeffs::from_b_signed(b.max(0.0))
}

/// Images of `|00⟩` and `|10⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneIsometry {
    pub columns: [[f64; 4]; 2],
}

impl CloneIsometry {
    /// Largest deviation of the column Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let dot = |u: &[f64; 4], v: &[f64; 4]| -> f64 { u.iter().zip(v).map(|(x, y)| x * y).sum() };
        let [u, v] = &self.columns;
        (dot(u, u) - 1.0)
            .abs()
            .max((dot(v, v) - 1.0).abs())
            .max(dot(u, v).abs())
    }
}

pub fn isometry(coeffs: &CloneCoeffs) -> CloneIsometry {
    let CloneCoeffs { a, b, c } = *coeffs;
    CloneIsometry {
        columns: [[a, b, b, c], [c, b, b, a]],
    }
}

/// Clone `input` with a blank ancilla: `α(a,b,b,c) + β(c,b,b,a)`.
pub fn clone(input: &PureQubit, coeffs: &CloneCoeffs) -> TwoQubitState {
    let [u, v] = isometry(coeffs).columns;
    let [alpha, beta] = input.amps();
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (k, amp) in amps.iter_mut().enumerate() {
        *amp = alpha * u[k] + beta * v[k];
    }
    TwoQubitState::from_amps(amps)
}

/// Fidelity of one clone's reduced state against `target`, by explicit
/// state-vector simulation. Both clones give the same value.
pub fn clone_fidelity_sim(input: &PureQubit, target: &PureQubit, coeffs: &CloneCoeffs) -> f64 {
    let out = clone(input, coeffs);
    fidelity_pure(&partial_trace(&out, Subsystem::First), target)
}

/// Copy fidelity for cloning the pair directly, without pretreatment.
pub fn fidelity_direct(xi: StateAngle, coeffs: &CloneCoeffs) -> f64 {
    let CloneCoeffs { a, b, c } = *coeffs;
    let s2 = xi.sin2();
    let c4 = (4.0 * xi.value()).cos();
    0.25 * (3.0 * a * a
        + 4.0 * (a + b) * (b + c) * s2
        + (a + c) * c4 * (a - 2.0 * b - c)
        + 2.0 * a * b
        + 4.0 * b * b
        + 2.0 * b * c
        + c * c)
}

/// Copy fidelity against the original pair at angle `xi` when the cloner is
/// fed the intermediate pair at angle `xi_prime`:
/// `½(1 + (a+c) cos 2ξ cos 2ξ′ + 2b(a+c) sin 2ξ (sin 2ξ′ + 1))`.
pub fn fidelity_general(xi: StateAngle, xi_prime: StateAngle, coeffs: &CloneCoeffs) -> f64 {
    let CloneCoeffs { a, b, c } = *coeffs;
    0.5 * (1.0
        + (a + c) * xi.cos2() * xi_prime.cos2()
        + 2.0 * b * (a + c) * xi.sin2() * (xi_prime.sin2() + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{state_pair, tensor};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

    fn angle(x: f64) -> StateAngle {
        StateAngle::new(x).unwrap()
    }

    // Optimal direct-cloning coefficient and fidelity at ξ = π/8, frozen from an
    // independent dense scan of the simulated fidelity over b.
    const B_OPT_PI8: f64 = 0.305_547_843_709_349_7;
    const F_OPT_PI8: f64 = 0.989_838_161_594_281_5;

    #[test]
    fn coeffs_examples() {
        let k = coeffs_from_b(0.0).unwrap();
        assert_eq!((k.a, k.c), (1.0, 0.0));

        let b = 1.0 / (2.0 * 3f64.sqrt());
        let k = coeffs_from_b(b).unwrap();
        assert_abs_diff_eq!(k.a, 0.5 * ((2.0f64 / 3.0).sqrt() + 1.0), epsilon = TOL);
        assert_abs_diff_eq!(k.c, 0.5 * ((2.0f64 / 3.0).sqrt() - 1.0), epsilon = TOL);
        assert_abs_diff_eq!(k.a, 0.9082483, epsilon = 1e-7);
        assert_abs_diff_eq!(k.c, -0.0917517, epsilon = 1e-7);

        let k = coeffs_from_b(0.5).unwrap();
        assert_eq!((k.a, k.c), (0.5, -0.5));
    }

    #[test]
    fn coeffs_out_of_range() {
        assert_eq!(coeffs_from_b(-0.1), Err(Error::CoefficientOutOfRange(-0.1)));
        assert_eq!(coeffs_from_b(0.6), Err(Error::CoefficientOutOfRange(0.6)));
        assert!(coeffs_from_b(f64::NAN).is_err());
        assert!(CloneCoeffs::from_b_signed(-0.3).is_ok());
    }

    #[test]
    fn unitarity_and_a_minus_c() {
        for i in 0..=100 {
            let k = coeffs_from_b(0.5 * i as f64 / 100.0).unwrap();
            let (r1, r2) = k.unitarity_residuals();
            assert!(r1.abs() < TOL && r2.abs() < TOL);
            assert!((k.a - k.c - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn isometry_examples() {
        let iso = isometry(&coeffs_from_b(0.0).unwrap());
        assert_eq!(iso.columns, [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]);

        let iso = isometry(&coeffs_from_b(1.0 / (2.0 * 3f64.sqrt())).unwrap());
        let frozen = [0.9082483, 0.2886751, 0.2886751, -0.0917517];
        for k in 0..4 {
            assert_abs_diff_eq!(iso.columns[0][k], frozen[k], epsilon = 1e-7);
            assert_abs_diff_eq!(iso.columns[1][k], frozen[3 - k], epsilon = 1e-7);
        }
        for i in 0..100 {
            let b = -0.5 + i as f64 / 99.0;
            let iso = isometry(&CloneCoeffs::from_b_signed(b).unwrap());
            assert!(iso.orthonormality_error() < TOL);
        }
    }

    #[test]
    fn clone_examples() {
        let out = clone(&PureQubit::zero(), &coeffs_from_b(0.0).unwrap());
        assert!(out.max_abs_diff(&tensor(&PureQubit::zero(), &PureQubit::zero())) < TOL);

        let xi = angle(FRAC_PI_8);
        let xp = angle(PI / 12.0);
        let k = coeffs_from_b(1.0 / (2.0 * 3f64.sqrt())).unwrap();
        let (t1, t2) = state_pair(xi);
        let (i1, i2) = state_pair(xp);
        assert!(clone(&i1, &k).max_abs_diff(&tensor(&t1, &t1)) < TOL);
        assert!(clone(&i2, &k).max_abs_diff(&tensor(&t2, &t2)) < TOL);
    }

    #[test]
    fn clone_preserves_norm() {
        let psi = PureQubit::new(Complex64::new(0.1, 0.7), Complex64::new(-0.5, 0.2)).unwrap();
        for i in 0..=20 {
            let out = clone(&psi, &coeffs_from_b(i as f64 / 40.0).unwrap());
            assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = TOL);
        }
    }

    #[test]
    fn sim_fidelity_examples() {
        let k0 = coeffs_from_b(0.0).unwrap();
        assert_abs_diff_eq!(
            clone_fidelity_sim(&PureQubit::zero(), &PureQubit::zero(), &k0),
            1.0,
            epsilon = TOL
        );

        let (t1, _) = state_pair(angle(FRAC_PI_8));
        let (i1, _) = state_pair(angle(PI / 12.0));
        let k = coeffs_from_b(1.0 / (2.0 * 3f64.sqrt())).unwrap();
        assert_abs_diff_eq!(clone_fidelity_sim(&i1, &t1, &k), 1.0, epsilon = TOL);

        let k = coeffs_from_b(0.3055491).unwrap();
        assert_abs_diff_eq!(clone_fidelity_sim(&t1, &t1, &k), 0.9898, epsilon = 1e-4);
    }

    #[test]
    fn direct_fidelity_examples() {
        assert_abs_diff_eq!(
            fidelity_direct(StateAngle::ZERO, &coeffs_from_b(0.0).unwrap()),
            1.0,
            epsilon = TOL
        );
        let k = coeffs_from_b(1.0 / (2.0 * SQRT_2)).unwrap();
        assert_abs_diff_eq!(fidelity_direct(angle(FRAC_PI_4), &k), 1.0, epsilon = TOL);

        let xi = angle(FRAC_PI_8);
        let k = coeffs_from_b(B_OPT_PI8).unwrap();
        let (t1, _) = state_pair(xi);
        assert_abs_diff_eq!(fidelity_direct(xi, &k), F_OPT_PI8, epsilon = TOL);
        assert_abs_diff_eq!(
            fidelity_direct(xi, &k),
            clone_fidelity_sim(&t1, &t1, &k),
            epsilon = TOL
        );
        // four-digit value quoted for b = 0.3055491
        let k = coeffs_from_b(0.3055491).unwrap();
        assert_abs_diff_eq!(fidelity_direct(xi, &k), 0.989839, epsilon = 1e-6);
    }

    #[test]
    fn general_fidelity_examples() {
        let k0 = coeffs_from_b(0.0).unwrap();
        assert_abs_diff_eq!(
            fidelity_general(StateAngle::ZERO, StateAngle::ZERO, &k0),
            1.0,
            epsilon = TOL
        );
        let k = coeffs_from_b(1.0 / (2.0 * 3f64.sqrt())).unwrap();
        assert_abs_diff_eq!(
            fidelity_general(angle(FRAC_PI_8), angle(PI / 12.0), &k),
            1.0,
            epsilon = TOL
        );
        let xi = angle(FRAC_PI_8);
        let k = coeffs_from_b(B_OPT_PI8).unwrap();
        assert_abs_diff_eq!(fidelity_general(xi, xi, &k), F_OPT_PI8, epsilon = TOL);
    }

    #[test]
    fn closed_forms_match_simulation_on_grid() {
        for i in 0..50 {
            let xi = angle(FRAC_PI_4 * i as f64 / 49.0);
            let (t1, t2) = state_pair(xi);
            for j in 0..50 {
                let xp = angle(FRAC_PI_4 * j as f64 / 49.0);
                let (i1, i2) = state_pair(xp);
                for m in 0..20 {
                    let k = coeffs_from_b(0.5 * m as f64 / 19.0).unwrap();
                    let sim1 = clone_fidelity_sim(&i1, &t1, &k);
                    let sim2 = clone_fidelity_sim(&i2, &t2, &k);
                    assert!((fidelity_general(xi, xp, &k) - sim1).abs() < TOL);
                    assert!((sim1 - sim2).abs() < TOL);
                }
            }
            for m in 0..20 {
                let k = coeffs_from_b(0.5 * m as f64 / 19.0).unwrap();
                let sim = clone_fidelity_sim(&t1, &t1, &k);
                assert!((fidelity_direct(xi, &k) - sim).abs() < TOL);
                assert!((fidelity_general(xi, xi, &k) - fidelity_direct(xi, &k)).abs() < TOL);
            }
        }
    }

    #[test]
    fn clones_are_symmetric() {
        let psi = PureQubit::new(Complex64::new(0.3, -0.2), Complex64::new(0.9, 0.1)).unwrap();
        for m in 0..=10 {
            let out = clone(&psi, &coeffs_from_b(m as f64 / 20.0).unwrap());
            let r1 = partial_trace(&out, Subsystem::First);
            let r2 = partial_trace(&out, Subsystem::Second);
            assert!(r1.max_abs_diff(&r2) < TOL);
        }
    }
}
