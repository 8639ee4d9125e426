//! Two-outcome weak measurement in the |±⟩ basis.
//!
//! `M_yes = √p |+⟩⟨+| + |−⟩⟨−|`, `M_no = √(1−p) |+⟩⟨+|`. The `yes` branch
//! shrinks the |+⟩ component and so lowers the overlap of the state pair;
//! `p = 1` is no measurement at all and `p = 0` is a sharp projection.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::qmath::{PureQubit, StateAngle};
use crate::{Error, Result};

/// Outcome probabilities below this cannot be normalized.
pub const DEGENERATE_PROB: f64 = 1e-15;

/// Overlaps in `[-OVERLAP_SLACK, 0)` are rounding noise at the orthogonal threshold.
const OVERLAP_SLACK: f64 = 1e-14;

/// Measurement strength `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct WeakStrength(f64);

impl WeakStrength {
    pub const ONE: WeakStrength = WeakStrength(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || !(-crate::TOL..=1.0 + crate::TOL).contains(&p) {
            return Err(Error::InvalidStrength(p));
        }
        Ok(WeakStrength(p.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

type Mat2 = [[f64; 2]; 2];

fn apply(m: &Mat2, psi: &PureQubit) -> [Complex64; 2] {
    let a = psi.amps();
    [
        a[0] * m[0][0] + a[1] * m[0][1],
        a[0] * m[1][0] + a[1] * m[1][1],
    ]
}

fn norm_sqr(v: &[Complex64; 2]) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

/// The measurement operators in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair {
    pub m_yes: Mat2,
    pub m_no: Mat2,
}

impl KrausPair {
    /// `max |M_yes†M_yes + M_no†M_no − I|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let sum: f64 = (0..2)
                    .map(|k| {
                        self.m_yes[k][i] * self.m_yes[k][j] + self.m_no[k][i] * self.m_no[k][j]
                    })
                    .sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((sum - id).abs());
            }
        }
        worst
    }

    pub fn apply_yes(&self, psi: &PureQubit) -> [Complex64; 2] {
        apply(&self.m_yes, psi)
    }

    pub fn apply_no(&self, psi: &PureQubit) -> [Complex64; 2] {
        apply(&self.m_no, psi)
    }
}

pub fn kraus_pair(p: WeakStrength) -> KrausPair {
    let sp = p.value().sqrt();
    let sq = (1.0 - p.value()).sqrt();
    // |+⟩⟨+| = ½[[1, 1], [1, 1]], |−⟩⟨−| = ½[[1, −1], [−1, 1]]
    let diag = 0.5 * (sp + 1.0);
    let off = 0.5 * (sp - 1.0);
    KrausPair {
        m_yes: [[diag, off], [off, diag]],
        m_no: [[0.5 * sq, 0.5 * sq], [0.5 * sq, 0.5 * sq]],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub tag: Outcome,
    /// Normalized post-measurement state.
    pub state: PureQubit,
    pub probability: f64,
}

/// `p_yes = ½((p − 1) sin 2ξ + p + 1)`, the same for both states of the pair.
pub fn success_prob(xi: StateAngle, p: WeakStrength) -> f64 {
    let p = p.value();
    0.5 * ((p - 1.0) * xi.sin2() + p + 1.0)
}

/// Apply `M_yes` and renormalize. Returns the state and `⟨ψ|M_yes†M_yes|ψ⟩`.
pub fn post_select_yes(psi: &PureQubit, p: WeakStrength) -> Result<(PureQubit, f64)> {
    let v = kraus_pair(p).apply_yes(psi);
    let p_yes = norm_sqr(&v);
    if p_yes < DEGENERATE_PROB {
        return Err(Error::DegenerateOutcome { p_yes });
    }
    Ok((PureQubit::new(v[0], v[1])?, p_yes))
}

/// Overlap of the two post-selected states,
/// `((p + 1) sin 2ξ + p − 1) / ((p − 1) sin 2ξ + p + 1)`.
pub fn overlap_after(xi: StateAngle, p: WeakStrength) -> Result<f64> {
    let s = xi.sin2();
    let p = p.value();
    let den = (p - 1.0) * s + p + 1.0;
    if 0.5 * den < DEGENERATE_PROB {
        return Err(Error::DegenerateOutcome { p_yes: 0.5 * den });
    }
    Ok(((p + 1.0) * s + p - 1.0) / den)
}

/// Smallest `p` keeping the intermediate overlap nonnegative, `(1 − sin 2ξ)/(1 + sin 2ξ)`.
pub fn orthogonal_threshold(xi: StateAngle) -> f64 {
    let s = xi.sin2();
    (1.0 - s) / (1.0 + s)
}

/// The angle ξ′ with `sin 2ξ′ = overlap_after(ξ, p)`.
pub fn effective_angle(xi: StateAngle, p: WeakStrength) -> Result<StateAngle> {
    let ov = overlap_after(xi, p)?;
    if ov < -OVERLAP_SLACK {
        return Err(Error::OrthogonalRegime {
            xi: xi.value(),
            p: p.value(),
            overlap: ov,
            threshold: orthogonal_threshold(xi),
        });
    }
    if p.value() == 1.0 {
        return Ok(xi);
    }
    // Equivalent to ½ asin(ov) on this branch, but stays accurate as ov → 1:
    // the |+⟩ and |−⟩ amplitudes of the post-selected ψ₁ are ∝ √p(cos ξ + sin ξ)
    // and (cos ξ − sin ξ), and ξ′ = π/4 − atan2(minus, plus).
    let (sin, cos) = xi.value().sin_cos();
    let plus = p.value().sqrt() * (cos + sin);
    let minus = cos - sin;
    StateAngle::new((FRAC_PI_4 - minus.atan2(plus)).clamp(0.0, FRAC_PI_4))
}

/// Draw one measurement outcome from `rng`.
pub fn sample_outcome<R: Rng + ?Sized>(
    psi: &PureQubit,
    p: WeakStrength,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let kraus = kraus_pair(p);
    let yes = kraus.apply_yes(psi);
    let no = kraus.apply_no(psi);
    let p_yes = norm_sqr(&yes);
    let p_no = norm_sqr(&no);
    if p_yes < DEGENERATE_PROB && p_no < DEGENERATE_PROB {
        return Err(Error::DegenerateOutcome { p_yes });
    }
    let u: f64 = rng.random();
    let take_yes = if p_no < DEGENERATE_PROB {
        true
    } else if p_yes < DEGENERATE_PROB {
        false
    } else {
        u * (p_yes + p_no) < p_yes
    };
    let (tag, v, probability) = if take_yes {
        (Outcome::Yes, yes, p_yes)
    } else {
        (Outcome::No, no, p_no)
    };
    Ok(MeasurementOutcome {
        tag,
        state: PureQubit::new(v[0], v[1])?,
        probability: probability.clamp(0.0, 1.0),
    })
}
