//! Self-verification: every invariant of the library, run at its tolerance.
//!
//! The closed forms under test are taken from a [`Subject`], a table of
//! function pointers. [`Subject::default`] is the real implementation; tests
//! swap single entries for deliberately broken versions to confirm the suites
//! notice. Reference paths (explicit state vectors, the brute-force optimizer,
//! root finding) are never taken from the subject.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cloner::{clone, clone_fidelity_sim, coeffs_from_b, isometry, CloneCoeffs};
use crate::optimal::{brute_force_b, unit_fidelity_angle};
use crate::par::{map_indexed, Execution};
use crate::protocol::{monte_carlo_with, run_pipeline};
use crate::qmath::{
    fidelity_pure, partial_trace, state_pair, tensor, DensityMatrix, PureQubit, StateAngle,
    Subsystem, TwoQubitState,
};
use crate::weakmeas::{effective_angle, orthogonal_threshold, KrausPair, WeakStrength};
use crate::{cloner, optimal, weakmeas, Result, TOL};

/// The closed forms being verified.
#[derive(Clone, Copy)]
pub struct Subject {
    pub kraus_pair: fn(WeakStrength) -> KrausPair,
    pub success_prob: fn(StateAngle, WeakStrength) -> f64,
    pub overlap_after: fn(StateAngle, WeakStrength) -> Result<f64>,
    pub fidelity_direct: fn(StateAngle, &CloneCoeffs) -> f64,
    pub fidelity_general: fn(StateAngle, StateAngle, &CloneCoeffs) -> f64,
    pub optimal_b_direct: fn(StateAngle) -> f64,
    pub optimal_b_general: fn(StateAngle, StateAngle) -> f64,
    pub optimal_fidelity: fn(StateAngle, StateAngle) -> f64,
    pub perfect_p: fn(StateAngle) -> WeakStrength,
}

impl Default for Subject {
    fn default() -> Self {
        Subject {
            kraus_pair: weakmeas::kraus_pair,
            success_prob: weakmeas::success_prob,
            overlap_after: weakmeas::overlap_after,
            fidelity_direct: cloner::fidelity_direct,
            fidelity_general: cloner::fidelity_general,
            optimal_b_direct: optimal::optimal_b_direct,
            optimal_b_general: optimal::optimal_b_general,
            optimal_fidelity: optimal::optimal_fidelity,
            perfect_p: optimal::perfect_p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<36} {}", self.name, self.detail)
    }
}

/// Tracks the worst error seen against a tolerance.
struct Worst {
    err: f64,
    tol: f64,
    failures: usize,
}

impl Worst {
    fn new(tol: f64) -> Self {
        Worst {
            err: 0.0,
            tol,
            failures: 0,
        }
    }

    fn check(&mut self, err: f64) {
        // NaN counts as a failure
        if !(err < self.tol) {
            self.failures += 1;
        }
        if err.is_nan() {
            self.err = f64::NAN;
        } else if !self.err.is_nan() {
            self.err = self.err.max(err);
        }
    }

    fn ok(&self) -> bool {
        self.failures == 0
    }

    fn summary(&self) -> String {
        format!("max err {:.2e} (tol {:.0e})", self.err, self.tol)
    }
}

fn suite(name: &'static str, passed: bool, detail: String) -> SuiteResult {
    SuiteResult {
        name,
        passed,
        detail,
    }
}

fn angle(x: f64) -> StateAngle {
    StateAngle::new(x).expect("grid angle")
}

fn strength(p: f64) -> WeakStrength {
    WeakStrength::new(p).expect("grid strength")
}

/// `n` points covering [0, π/4] inclusive.
fn angle_grid(n: usize) -> Vec<StateAngle> {
    (0..n)
        .map(|i| angle(FRAC_PI_4 * i as f64 / (n - 1) as f64))
        .collect()
}

/// `n` points strictly inside (0, π/4).
fn interior_grid(n: usize) -> Vec<StateAngle> {
    (0..n)
        .map(|i| angle(FRAC_PI_4 * (i + 1) as f64 / (n + 1) as f64))
        .collect()
}

fn random_qubit(rng: &mut ChaCha8Rng) -> PureQubit {
    loop {
        let z = |rng: &mut ChaCha8Rng| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        if let Ok(q) = PureQubit::new(z(rng), z(rng)) {
            return q;
        }
    }
}

fn random_two_qubit(rng: &mut ChaCha8Rng) -> TwoQubitState {
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for a in amps.iter_mut() {
        *a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    TwoQubitState::from_amps(amps.map(|a| a / n))
}

/// `M_yes ψ` renormalized, with its probability, straight from the matrices.
fn explicit_yes(kraus: &KrausPair, psi: &PureQubit) -> Option<(PureQubit, f64)> {
    let v = kraus.apply_yes(psi);
    let prob = v[0].norm_sqr() + v[1].norm_sqr();
    PureQubit::new(v[0], v[1]).ok().map(|q| (q, prob))
}

// ---------------------------------------------------------------- qmath

fn qmath_overlap() -> SuiteResult {
    let mut w = Worst::new(TOL);
    for xi in angle_grid(100) {
        let (p1, p2) = state_pair(xi);
        w.check((p1.inner(&p2) - crate::qmath::overlap(xi)).norm());
    }
    suite("qmath.overlap", w.ok(), w.summary())
}

fn qmath_partial_trace() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut bad = 0;
    let mut roundtrip = Worst::new(TOL);
    let mut purity = Worst::new(TOL);
    for _ in 0..500 {
        let state = random_two_qubit(&mut rng);
        for keep in [Subsystem::First, Subsystem::Second] {
            if !partial_trace(&state, keep).is_valid() {
                bad += 1;
            }
        }
        let q1 = random_qubit(&mut rng);
        let q2 = random_qubit(&mut rng);
        let rho = partial_trace(&tensor(&q1, &q2), Subsystem::First);
        roundtrip.check(rho.max_abs_diff(&DensityMatrix::from_pure(&q1)));
        let same = partial_trace(&tensor(&q1, &q1), Subsystem::First);
        purity.check((fidelity_pure(&same, &q1) - 1.0).abs());
    }
    suite(
        "qmath.partial-trace",
        bad == 0 && roundtrip.ok() && purity.ok(),
        format!(
            "{bad} invalid reduced states; roundtrip {}; self-fidelity {}",
            roundtrip.summary(),
            purity.summary()
        ),
    )
}

// ------------------------------------------------------------- weakmeas

fn weakmeas_completeness(s: &Subject) -> SuiteResult {
    let mut w = Worst::new(TOL);
    for i in 0..100 {
        w.check((s.kraus_pair)(strength(i as f64 / 99.0)).completeness_error());
    }
    suite("weakmeas.completeness", w.ok(), w.summary())
}

fn weakmeas_consistency(s: &Subject) -> SuiteResult {
    let mut prob = Worst::new(TOL);
    let mut ov = Worst::new(TOL);
    let mut eff = Worst::new(TOL);
    let mut symmetry = Worst::new(TOL);
    for xi in angle_grid(50) {
        let (p1, p2) = state_pair(xi);
        for j in 0..50 {
            let p = strength(j as f64 / 49.0);
            let kraus = (s.kraus_pair)(p);
            let (Some((a, qa)), Some((b, qb))) =
                (explicit_yes(&kraus, &p1), explicit_yes(&kraus, &p2))
            else {
                continue;
            };
            prob.check((qa - (s.success_prob)(xi, p)).abs());
            symmetry.check((qa - qb).abs());
            let Ok(closed) = (s.overlap_after)(xi, p) else {
                ov.check(f64::NAN);
                continue;
            };
            ov.check((a.inner(&b).re - closed).abs());
            if closed >= 0.0 {
                match effective_angle(xi, p) {
                    Ok(xp) => {
                        let (e1, e2) = state_pair(xp);
                        eff.check(a.max_abs_diff(&e1).max(b.max_abs_diff(&e2)));
                    }
                    Err(_) => eff.check(f64::NAN),
                }
            }
        }
    }
    suite(
        "weakmeas.closed-forms",
        prob.ok() && ov.ok() && eff.ok() && symmetry.ok(),
        format!(
            "p_yes {}; overlap {}; xi' {}; pair {}",
            prob.summary(),
            ov.summary(),
            eff.summary(),
            symmetry.summary()
        ),
    )
}

fn weakmeas_monotone(s: &Subject) -> SuiteResult {
    let mut violations = 0;
    for xi in angle_grid(21).into_iter().take(20) {
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=100 {
            let q = (s.success_prob)(xi, strength(j as f64 / 100.0));
            if !(q > prev) || !(-TOL..=1.0 + TOL).contains(&q) {
                violations += 1;
            }
            prev = q;
        }
    }
    suite(
        "weakmeas.success-monotone",
        violations == 0,
        format!("{violations} violations over 20x101 points"),
    )
}

fn weakmeas_overlap_reduction(s: &Subject) -> SuiteResult {
    let mut violations = 0;
    let grid = angle_grid(41);
    for (i, &xi) in grid.iter().enumerate() {
        for j in 0..=40 {
            let p = strength(j as f64 / 40.0);
            let Ok(ov) = (s.overlap_after)(xi, p) else {
                continue;
            };
            let sin2 = xi.sin2();
            let equal = j == 40 || i == 40;
            if ov > sin2 + TOL || ((sin2 - ov).abs() < TOL) != equal {
                violations += 1;
            }
        }
    }
    suite(
        "weakmeas.overlap-reduction",
        violations == 0,
        format!("{violations} violations over 41x41 points"),
    )
}

// --------------------------------------------------------------- cloner

fn cloner_isometry() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut w = Worst::new(TOL);
    let mut unitarity = Worst::new(TOL);
    for _ in 0..100 {
        let k = coeffs_from_b(rng.random_range(0.0..=0.5)).expect("b in range");
        w.check(isometry(&k).orthonormality_error());
        let (r1, r2) = k.unitarity_residuals();
        unitarity.check(r1.abs().max(r2.abs()).max((k.a - k.c - 1.0).abs()));
    }
    suite(
        "cloner.isometry",
        w.ok() && unitarity.ok(),
        format!(
            "columns {}; constraints {}",
            w.summary(),
            unitarity.summary()
        ),
    )
}

fn cloner_symmetry() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut w = Worst::new(TOL);
    for _ in 0..500 {
        let q = random_qubit(&mut rng);
        let k = coeffs_from_b(rng.random_range(0.0..=0.5)).expect("b in range");
        let out = clone(&q, &k);
        w.check(
            partial_trace(&out, Subsystem::First)
                .max_abs_diff(&partial_trace(&out, Subsystem::Second)),
        );
    }
    suite("cloner.clone-symmetry", w.ok(), w.summary())
}

fn cloner_closed_vs_sim(s: &Subject) -> SuiteResult {
    let grid = angle_grid(50);
    let bs: Vec<CloneCoeffs> = (0..20)
        .map(|m| coeffs_from_b(0.5 * m as f64 / 19.0).expect("b in range"))
        .collect();
    let rows = map_indexed(grid.len(), Execution::default(), |i| {
        let xi = grid[i];
        let (t1, t2) = state_pair(xi);
        let mut general = Worst::new(TOL);
        let mut pair = Worst::new(TOL);
        let mut direct = Worst::new(TOL);
        let mut reduce = Worst::new(TOL);
        for &xp in &grid {
            let (i1, i2) = state_pair(xp);
            for k in &bs {
                let sim1 = clone_fidelity_sim(&i1, &t1, k);
                general.check(((s.fidelity_general)(xi, xp, k) - sim1).abs());
                pair.check((sim1 - clone_fidelity_sim(&i2, &t2, k)).abs());
            }
        }
        for k in &bs {
            let fd = (s.fidelity_direct)(xi, k);
            direct.check((fd - clone_fidelity_sim(&t1, &t1, k)).abs());
            reduce.check(((s.fidelity_general)(xi, xi, k) - fd).abs());
        }
        [general, pair, direct, reduce]
    });
    let mut total = [
        Worst::new(TOL),
        Worst::new(TOL),
        Worst::new(TOL),
        Worst::new(TOL),
    ];
    for row in rows {
        for (t, r) in total.iter_mut().zip(row) {
            t.check(r.err);
            t.failures += r.failures;
        }
    }
    let [general, pair, direct, reduce] = total;
    suite(
        "cloner.closed-forms-vs-simulation",
        general.ok() && pair.ok() && direct.ok() && reduce.ok(),
        format!(
            "general {}; direct {}; pair {}; general(xi,xi)-direct {}",
            general.summary(),
            direct.summary(),
            pair.summary(),
            reduce.summary()
        ),
    )
}

// -------------------------------------------------------------- optimal

fn optimal_oracle(s: &Subject) -> SuiteResult {
    let grid = interior_grid(40);
    let rows = map_indexed(grid.len() * grid.len(), Execution::default(), |idx| {
        let (xi, xp) = (grid[idx / grid.len()], grid[idx % grid.len()]);
        let oracle = brute_force_b(xi, xp);
        (
            ((s.optimal_b_general)(xi, xp) - oracle.b_star).abs(),
            ((s.optimal_fidelity)(xi, xp) - oracle.fidelity).abs(),
        )
    });
    let mut b = Worst::new(1e-6);
    let mut f = Worst::new(1e-9);
    for (eb, ef) in rows {
        b.check(eb);
        f.check(ef);
    }
    let direct_grid = interior_grid(100);
    let direct_rows = map_indexed(direct_grid.len(), Execution::default(), |i| {
        let xi = direct_grid[i];
        ((s.optimal_b_direct)(xi) - brute_force_b(xi, xi).b_star).abs()
    });
    let mut d = Worst::new(1e-6);
    for e in direct_rows {
        d.check(e);
    }
    suite(
        "optimal.oracle-agreement",
        b.ok() && f.ok() && d.ok(),
        format!(
            "b(xi,xi') {}; F* {}; b(xi) {}",
            b.summary(),
            f.summary(),
            d.summary()
        ),
    )
}

fn optimal_reduction(s: &Subject) -> SuiteResult {
    let mut w = Worst::new(TOL);
    for k in 1..=100 {
        let xi = angle(FRAC_PI_4 * k as f64 / 100.0);
        w.check(((s.optimal_b_general)(xi, xi) - (s.optimal_b_direct)(xi)).abs());
    }
    suite("optimal.general-reduces-to-direct", w.ok(), w.summary())
}

fn optimal_unit_curve(s: &Subject) -> SuiteResult {
    let mut w = Worst::new(1e-9);
    for k in 1..=50 {
        let xi = angle(FRAC_PI_4 * k as f64 / 50.0);
        w.check(((s.optimal_fidelity)(xi, unit_fidelity_angle(xi)) - 1.0).abs());
    }
    suite("optimal.unit-fidelity-curve", w.ok(), w.summary())
}

fn optimal_duan_guo(s: &Subject) -> SuiteResult {
    let mut w = Worst::new(TOL);
    let mut root = Worst::new(1e-12);
    for k in 1..=100 {
        let xi = angle(FRAC_PI_4 * k as f64 / 100.0);
        let p = (s.perfect_p)(xi);
        w.check(((s.success_prob)(xi, p) - 1.0 / (1.0 + xi.sin2())).abs());
        if k < 100 {
            // independent root of overlap_after(ξ, p) = sin²2ξ by bisection
            let target = xi.sin2().powi(2);
            let (mut lo, mut hi) = (orthogonal_threshold(xi), 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let ov = weakmeas::overlap_after(xi, strength(mid)).unwrap_or(f64::NAN);
                if ov < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            root.check((p.value() - 0.5 * (lo + hi)).abs());
        }
    }
    suite(
        "optimal.duan-guo",
        w.ok() && root.ok(),
        format!("p_yes {}; p* vs bisection {}", w.summary(), root.summary()),
    )
}

fn optimal_improvement(s: &Subject) -> SuiteResult {
    let mut violations = 0;
    let mut endpoint = Worst::new(TOL);
    for k in 1..=20 {
        let xi = angle(FRAC_PI_4 * k as f64 / 20.0);
        let base = (s.optimal_fidelity)(xi, xi);
        let p0 = (s.perfect_p)(xi).value();
        for j in 0..=50 {
            let p = strength(p0 + (1.0 - p0) * j as f64 / 50.0);
            match effective_angle(xi, p) {
                Ok(xp) if (s.optimal_fidelity)(xi, xp) >= base - TOL => {}
                _ => violations += 1,
            }
        }
        match effective_angle(xi, WeakStrength::ONE) {
            Ok(xp) => endpoint.check(((s.optimal_fidelity)(xi, xp) - base).abs()),
            Err(_) => endpoint.check(f64::NAN),
        }
    }
    suite(
        "optimal.pretreatment-improves",
        violations == 0 && endpoint.ok(),
        format!("{violations} violations over 20x51 points"),
    )
}

fn optimal_range(s: &Subject) -> SuiteResult {
    let mut violations = 0;
    let grid = angle_grid(41);
    for &xi in &grid {
        for &xp in &grid {
            let b = (s.optimal_b_general)(xi, xp);
            let f = (s.optimal_fidelity)(xi, xp);
            if !(0.0..=0.5).contains(&b) || !(0.5 - TOL..=1.0 + TOL).contains(&f) {
                violations += 1;
            }
        }
        if !(0.0..=0.5).contains(&(s.optimal_b_direct)(xi)) {
            violations += 1;
        }
    }
    suite(
        "optimal.range",
        violations == 0,
        format!("{violations} violations over 41x41 points"),
    )
}

/// Fidelity-vs-p curve properties at the four reference angles π/16, π/12, π/8, π/6.
fn figure_shape(s: &Subject) -> SuiteResult {
    const POINTS: usize = 200;
    let mut problems = Vec::new();
    for (label, xi) in [
        ("pi/16", 16.0),
        ("pi/12", 12.0),
        ("pi/8", 8.0),
        ("pi/6", 6.0),
    ] {
        let xi = angle(std::f64::consts::PI / xi);
        let t = orthogonal_threshold(xi);
        let ps = (s.perfect_p)(xi).value();
        let curve = |p: f64| -> Option<(f64, f64)> {
            let p = WeakStrength::new(p).ok()?;
            let xp = effective_angle(xi, p).ok()?;
            Some(((s.success_prob)(xi, p), (s.optimal_fidelity)(xi, xp)))
        };
        let rising: Option<Vec<_>> = (0..POINTS)
            .map(|i| curve(t + (ps - t) * i as f64 / (POINTS - 1) as f64))
            .collect();
        let falling: Option<Vec<_>> = (0..POINTS)
            .map(|i| curve(ps + (1.0 - ps) * i as f64 / (POINTS - 1) as f64))
            .collect();
        let (Some(rising), Some(falling)) = (rising, falling) else {
            problems.push(format!("{label}: curve undefined"));
            continue;
        };
        let strictly = |v: &[(f64, f64)], pick: fn(&(f64, f64)) -> f64, up: bool| {
            v.windows(2).all(|w| {
                let (a, b) = (pick(&w[0]), pick(&w[1]));
                if up {
                    b > a
                } else {
                    b < a
                }
            })
        };
        let mut all: Vec<(f64, f64)> = rising.clone();
        all.extend_from_slice(&falling[1..]);
        if !strictly(&all, |x| x.0, true) {
            problems.push(format!("{label}: p_yes not increasing"));
        }
        if !strictly(&rising, |x| x.1, true) {
            problems.push(format!("{label}: fidelity not increasing below p*"));
        }
        if !strictly(&falling, |x| x.1, false) {
            problems.push(format!("{label}: fidelity not decreasing above p*"));
        }
        let peak = falling[0].1;
        if !((peak - 1.0).abs() < 1e-9) {
            problems.push(format!("{label}: F(p*) = {peak}"));
        }
        let direct_b = (s.optimal_b_direct)(xi);
        let direct = coeffs_from_b(direct_b.clamp(0.0, 0.5))
            .map(|k| (s.fidelity_direct)(xi, &k))
            .unwrap_or(f64::NAN);
        let end = falling[POINTS - 1].1;
        if !((end - direct).abs() < 1e-9) {
            problems.push(format!("{label}: F(1) = {end} vs direct optimum {direct}"));
        }
    }
    let passed = problems.is_empty();
    let detail = if passed {
        "4 panels: p_yes increasing, F rises to 1 at p* then falls to direct optimum".to_string()
    } else {
        problems.join("; ")
    };
    suite("figure.p-sweep-shape", passed, detail)
}

// ------------------------------------------------------------- protocol

fn protocol_closure() -> SuiteResult {
    let mut closed_sim = Worst::new(1e-9);
    let mut closed_opt = Worst::new(1e-9);
    let mut errors = 0;
    for k in 1..=20 {
        let xi = angle(FRAC_PI_4 * k as f64 / 20.0);
        let t = orthogonal_threshold(xi);
        for j in usize::from(k == 20)..=20 {
            let p = strength(t + (1.0 - t) * j as f64 / 20.0);
            match run_pipeline(xi, p) {
                Ok(r) => {
                    closed_sim.check((r.fidelity_closed - r.fidelity_sim).abs());
                    closed_opt.check(
                        (r.fidelity_closed - optimal::optimal_fidelity(xi, r.xi_prime)).abs(),
                    );
                }
                Err(_) => errors += 1,
            }
        }
    }
    suite(
        "protocol.pipeline-closure",
        errors == 0 && closed_sim.ok() && closed_opt.ok(),
        format!(
            "closed vs sim {}; closed vs optimum {}; {errors} errors",
            closed_sim.summary(),
            closed_opt.summary()
        ),
    )
}

/// Trials per cell of the Monte Carlo statistics suite.
pub const MC_TRIALS: u64 = 100_000;

fn protocol_statistics() -> SuiteResult {
    let xis: Vec<StateAngle> = (1..=5).map(|k| angle(FRAC_PI_4 * k as f64 / 5.0)).collect();
    let mut within = 0;
    let mut clones_agree = true;
    let mut cells = 0;
    for (i, &xi) in xis.iter().enumerate() {
        let t = orthogonal_threshold(xi);
        for j in 0..5 {
            let p = strength(t + (1.0 - t) * (j + 1) as f64 / 5.0);
            let seed = 1000 + (i * 5 + j) as u64;
            cells += 1;
            let Ok(stats) = monte_carlo_with(xi, p, MC_TRIALS, seed, Execution::default()) else {
                continue;
            };
            let q = weakmeas::success_prob(xi, p);
            let se = (q * (1.0 - q) / MC_TRIALS as f64).sqrt();
            if (stats.success_rate - q).abs() <= 4.0 * se {
                within += 1;
            }
            let gap = (stats.mean_fidelity_clone1 - stats.mean_fidelity_clone2).abs();
            if !(gap <= 3.0 * stats.standard_error) {
                clones_agree = false;
            }
        }
    }
    suite(
        "protocol.monte-carlo-statistics",
        within + 1 >= cells && clones_agree,
        format!("{within}/{cells} cells within 4 binomial SE; clone means agree: {clones_agree}"),
    )
}

fn protocol_determinism() -> SuiteResult {
    let xi = angle(0.3);
    let p = strength(0.6);
    let a = monte_carlo_with(xi, p, 10_000, 42, Execution::Sequential);
    let b = monte_carlo_with(xi, p, 10_000, 42, Execution::Parallel);
    let c = monte_carlo_with(xi, p, 10_000, 42, Execution::Parallel);
    let passed = a.is_ok() && a == b && b == c;
    suite(
        "protocol.determinism",
        passed,
        "same seed, sequential vs parallel, repeated".to_string(),
    )
}

/// Suites that only exercise closed forms against references. Fast.
pub fn run_closed_form_suites(s: &Subject) -> Vec<SuiteResult> {
    vec![
        qmath_overlap(),
        qmath_partial_trace(),
        weakmeas_completeness(s),
        weakmeas_consistency(s),
        weakmeas_monotone(s),
        weakmeas_overlap_reduction(s),
        cloner_isometry(),
        cloner_symmetry(),
        cloner_closed_vs_sim(s),
        optimal_oracle(s),
        optimal_reduction(s),
        optimal_unit_curve(s),
        optimal_duan_guo(s),
        optimal_improvement(s),
        optimal_range(s),
        figure_shape(s),
    ]
}

/// Every suite, including the pipeline and Monte Carlo checks.
pub fn run_all(s: &Subject) -> Vec<SuiteResult> {
    let mut out = run_closed_form_suites(s);
    out.push(protocol_closure());
    out.push(protocol_statistics());
    out.push(protocol_determinism());
    out
}

pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_implementation_passes_closed_form_suites() {
        let results = run_closed_form_suites(&Subject::default());
        for r in &results {
            assert!(r.passed, "{r}");
        }
    }

    fn broken_optimal_fidelity(xi: StateAngle, xp: StateAngle) -> f64 {
        optimal::optimal_fidelity(xi, xp) - 1e-6
    }

    #[test]
    fn small_fidelity_offset_is_caught() {
        let s = Subject {
            optimal_fidelity: broken_optimal_fidelity,
            ..Subject::default()
        };
        let failed: Vec<_> = run_closed_form_suites(&s)
            .into_iter()
            .filter(|r| !r.passed)
            .map(|r| r.name)
            .collect();
        assert!(failed.contains(&"optimal.oracle-agreement"));
        assert!(failed.contains(&"optimal.unit-fidelity-curve"));
    }
}
