//! Optimal cloning coefficients and fidelities.
//!
//! The closed forms maximize the copy fidelity over `b` subject to the
//! unitarity constraints. [`brute_force_b`] solves the same problem by a dense
//! scan plus golden-section refinement and serves as the reference they are
//! checked against.

use crate::cloner::{coeffs_from_b, fidelity_general, CloneCoeffs};
use crate::qmath::StateAngle;
use crate::weakmeas::WeakStrength;

/// Below this angle the `csc 2ξ` forms are replaced by their limit.
pub const SMALL_ANGLE: f64 = 1e-8;

/// Scan density of the brute-force oracle.
pub const SCAN_POINTS: usize = 10_001;

/// Final bracket width of the golden-section refinement.
pub const REFINE_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub b_star: f64,
    pub coeffs: CloneCoeffs,
    pub fidelity: f64,
}

/// Optimal `b` for cloning the pair directly:
/// `⅛(1 − csc 2ξ + csc 2ξ √(9 sin²2ξ − 2 sin 2ξ + 1))`.
pub fn optimal_b_direct(xi: StateAngle) -> f64 {
    if xi.value() < SMALL_ANGLE {
        return 0.0;
    }
    let s = xi.sin2();
    let csc = 1.0 / s;
    0.125 * (1.0 - csc + csc * (9.0 * s * s - 2.0 * s + 1.0).sqrt())
}

/// Optimal `b` when the cloner sees the intermediate pair at `xi_prime` and is
/// scored against the original pair at `xi`.
pub fn optimal_b_general(xi: StateAngle, xi_prime: StateAngle) -> f64 {
    if xi.value() < SMALL_ANGLE {
        return 0.0;
    }
    let (s, c) = (xi.sin2(), xi.cos2());
    let (sp, cp) = (xi_prime.sin2(), xi_prime.cos2());
    let csc = 1.0 / s;
    let cot = c / s;
    let lift = 8.0 * (sp + 1.0);
    csc * (8.0 * (sp + 1.0).powi(2) * s * s + cp * cp * c * c).sqrt() / lift - cp * cot / lift
}

/// Copy fidelity at [`optimal_b_general`], in closed form.
pub fn optimal_fidelity(xi: StateAngle, xi_prime: StateAngle) -> f64 {
    let (s, c) = (xi.sin2(), xi.cos2());
    let (sp, cp) = (xi_prime.sin2(), xi_prime.cos2());
    if xi.value() < SMALL_ANGLE {
        // b = 0, a = 1, c = 0
        return 0.5 * (1.0 + c * cp);
    }
    let cot = c / s;
    let root = (cp * cp * cot * cot + 8.0 * (1.0 + sp).powi(2)).sqrt();
    let bracket = (4.0 * sp * sp + 8.0 * sp - cp * cp * cot * cot + cp * cot * root + 4.0)
        .max(0.0)
        .sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    (16.0 + 3.0 * sqrt2 * cp * c / (sp + 1.0) * bracket + sqrt2 * s / (sp + 1.0) * root * bracket)
        / 32.0
}

/// Maximize `f` on `[lo, hi]`: uniform scan of `points` samples, then
/// golden-section search on the bracket around the best sample until it is
/// narrower than `width`. Ties go to the smaller argument.
pub fn maximize_on_interval<F>(f: F, lo: f64, hi: f64, points: usize, width: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    assert!(points >= 3 && hi > lo);
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| {
        if i == points - 1 {
            hi
        } else {
            lo + step * i as f64
        }
    };

    let mut best_i = 0;
    let mut best_f = f(lo);
    for i in 1..points {
        let v = f(at(i));
        if v > best_f {
            best_i = i;
            best_f = v;
        }
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(points - 1));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > width {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    let f_mid = f(mid);
    if f_mid > best_f {
        (mid, f_mid)
    } else {
        (at(best_i), best_f)
    }
}

/// Numerical maximizer of the copy fidelity over `b ∈ [0, ½]`.
pub fn brute_force_b(xi: StateAngle, xi_prime: StateAngle) -> Optimum {
    let objective =
        |b: f64| fidelity_general(xi, xi_prime, &coeffs_from_b(b).expect("b in [0, 1/2]"));
    let (b_star, fidelity) = maximize_on_interval(objective, 0.0, 0.5, SCAN_POINTS, REFINE_WIDTH);
    Optimum {
        b_star,
        coeffs: coeffs_from_b(b_star).expect("b in [0, 1/2]"),
        fidelity,
    }
}

/// Closed-form optimum at `(xi, xi_prime)`.
pub fn optimum(xi: StateAngle, xi_prime: StateAngle) -> Optimum {
    let b_star = optimal_b_general(xi, xi_prime).clamp(0.0, 0.5);
    let coeffs = coeffs_from_b(b_star).expect("clamped");
    Optimum {
        b_star,
        coeffs,
        fidelity: fidelity_general(xi, xi_prime, &coeffs),
    }
}

/// Measurement strength that drives the pair onto `sin 2ξ′ = sin²2ξ`, where the
/// optimal copies are perfect: `(1 + sin²2ξ)/(1 + sin 2ξ)²`.
pub fn perfect_p(xi: StateAngle) -> WeakStrength {
    let s = xi.sin2();
    WeakStrength::new((1.0 + s * s) / ((1.0 + s) * (1.0 + s))).expect("always in [1/2, 1]")
}

/// The intermediate angle with `sin 2ξ′ = sin²2ξ`.
pub fn unit_fidelity_angle(xi: StateAngle) -> StateAngle {
    let s = xi.sin2();
    // cos 2ξ′ = √(1 − s⁴) = cos 2ξ √(1 + s²)
    let cos = xi.cos2().max(0.0) * (1.0 + s * s).sqrt();
    StateAngle::new(0.5 * (s * s).atan2(cos)).expect("angle in [0, pi/4]")
}
