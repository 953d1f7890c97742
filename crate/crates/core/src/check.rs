//! Seeded self-check over the algebraic identities of every module.
//!
//! Each check draws its random cases from a generator seeded by the run
//! seed and the check's position, so results are reproducible and do not
//! depend on which other checks ran.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dyadics::Tensor3;
use crate::fields::{BlackBoxField, Monomial, PolyField, Polynomial, VectorField};
use crate::format;
use crate::ga::{Blade, Multivector, Vec3};
use crate::kinematics::{self, vector_calculus_split, KinematicsReport};
use crate::notation::{audit_convention, parse_str, EvalContext, Value, Verdict};
use crate::sampling::{self, SampleRng};

/// Random cases per identity.
pub const CASES: usize = 1000;
/// Fields per convergence sweep.
pub const SWEEP_FIELDS: usize = 10;
/// Relative tolerance for identities that only accumulate rounding error.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance for the dyadic transpose laws.
pub const DYADIC_TOL: f64 = 1e-14;
/// Step sizes for order-of-accuracy fits.
pub const STEP_SWEEP: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Minimum fitted convergence order.
pub const MIN_ORDER: f64 = 1.9;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
}

/// Worst relative error, or lowest fitted order for convergence checks.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Metric {
    pub name: &'static str,
    pub value: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let mut line = format!("[{status}] {:<width$}  cases={:<5}", c.name, c.cases);
            if let Some(m) = c.metric {
                let _ = write!(line, "  {}={}", m.name, format::sig(m.value, 3));
            }
            if c.failures > 0 {
                let _ = write!(line, "  failures={}", c.failures);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "seed {}: {} passed, {} failed",
            self.seed, self.passed, self.failed
        );
        out
    }
}

/// Accumulates per-case results for one check.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    metric: Option<f64>,
    metric_name: &'static str,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            metric: None,
            metric_name: "max_rel_err",
        }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    /// `‖lhs − rhs‖∞ ≤ tol · max(‖lhs‖∞, ‖rhs‖∞, input_scale)`.
    fn close(&mut self, lhs: &[f64], rhs: &[f64], input_scale: f64, tol: f64) {
        let err = max_abs_diff(lhs, rhs);
        let scale = max_abs(lhs).max(max_abs(rhs)).max(input_scale);
        let rel = if scale > 0.0 { err / scale } else { err };
        self.metric = Some(self.metric.map_or(rel, |m| m.max(rel)));
        self.record(rel <= tol);
    }

    fn vec(&mut self, lhs: Vec3, rhs: Vec3, input_scale: f64, tol: f64) {
        self.close(&lhs.to_array(), &rhs.to_array(), input_scale, tol);
    }

    fn mv(&mut self, lhs: Multivector, rhs: Multivector, input_scale: f64, tol: f64) {
        self.close(&lhs.coefficients(), &rhs.coefficients(), input_scale, tol);
    }

    fn tensor(&mut self, lhs: Tensor3, rhs: Tensor3, input_scale: f64, tol: f64) {
        self.close(&flatten(&lhs), &flatten(&rhs), input_scale, tol);
    }

    fn exact<T: PartialEq>(&mut self, lhs: T, rhs: T) {
        self.record(lhs == rhs);
    }

    fn order(&mut self, slope: f64) {
        self.metric_name = "min_order";
        self.metric = Some(self.metric.map_or(slope, |m| m.min(slope)));
        self.record(slope >= MIN_ORDER);
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            metric: self.metric.map(|value| Metric {
                name: self.metric_name,
                value,
            }),
        }
    }
}

fn flatten(t: &Tensor3) -> Vec<f64> {
    t.rows().iter().flatten().copied().collect()
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn fitted_order(steps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

type CheckFn = fn(&mut SampleRng) -> CheckOutcome;

const CHECKS: &[CheckFn] = &[
    ga_anticommutation,
    ga_worked_examples,
    ga_fundamental_identity,
    ga_symmetric_split,
    ga_blade_rule,
    ga_distribution_identity,
    ga_grade_completeness,
    ga_associativity,
    dyadic_transpose_law,
    dyadic_factor_laws,
    dyadic_structure,
    fields_convention_duality,
    fields_taylor_order,
    fields_fd_order,
    fields_derivative_closure,
    kin_decomposition,
    kin_bivector_equivalence,
    kin_factor_consistency,
    kin_strain_split,
    kin_symmetric_split,
    kin_antisymmetric_split,
    kin_vector_calculus,
    kin_rotation_witness,
    kin_incompressible_bidi,
    kin_vorticity,
    notation_coherence,
    notation_transpose_law,
    notation_parse_totality,
    notation_audit,
    report_json_round_trip,
];

/// Runs every check with random cases derived from `seed`.
pub fn run_checks(seed: u64) -> CheckReport {
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, check)| {
            let mut rng = sampling::rng(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
            check(&mut rng)
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed()).count();
    CheckReport {
        seed,
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn e(i: usize) -> Multivector {
    Multivector::e(i)
}

fn ga_anticommutation(_: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/anticommutation");
    for i in 0..3 {
        t.exact(e(i) * e(i), Multivector::scalar(1.0));
        for j in 0..3 {
            if i != j {
                t.exact(e(i) * e(j), -(e(j) * e(i)));
            }
        }
    }
    t.finish()
}

fn ga_worked_examples(_: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/worked-examples");
    let m = Multivector::scalar(1.0) + e(2) + (e(0) + e(2)) * e(1) + e(0) * e(1) * e(2);
    let grades = [
        Multivector::scalar(1.0),
        e(2),
        Multivector::bivector(1.0, 0.0, -1.0),
        Multivector::pseudoscalar(1.0),
    ];
    for (k, expected) in grades.into_iter().enumerate() {
        t.exact(m.grade(k).ok(), Some(expected));
    }
    t.exact(
        e(0) * (e(1) + e(2)) * e(0) * e(1),
        Multivector::scalar(-1.0) + Multivector::basis(Blade::E23),
    );
    t.finish()
}

fn ga_fundamental_identity(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/fundamental-identity");
    for _ in 0..CASES {
        let (a, b) = (sampling::vector(rng), sampling::vector(rng));
        let (ma, mb) = (Multivector::vector(a), Multivector::vector(b));
        t.mv(ma * mb, ma.dot(&mb) + ma.wedge(&mb), a.norm() * b.norm(), IDENTITY_TOL);
    }
    t.finish()
}

fn ga_symmetric_split(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/symmetric-split");
    for _ in 0..CASES {
        let (a, b) = (sampling::vector(rng), sampling::vector(rng));
        let (ma, mb) = (Multivector::vector(a), Multivector::vector(b));
        let scale = a.norm() * b.norm();
        t.mv(ma.dot(&mb), (ma * mb + mb * ma) * 0.5, scale, IDENTITY_TOL);
        t.mv(ma.wedge(&mb), (ma * mb - mb * ma) * 0.5, scale, IDENTITY_TOL);
        t.mv(ma.wedge(&mb), -mb.wedge(&ma), scale, IDENTITY_TOL);
        let bv = sampling::blade(rng, 2);
        let scale = bv.max_abs() * a.norm();
        t.mv(bv.dot(&ma), (bv * ma - ma * bv) * 0.5, scale, IDENTITY_TOL);
        t.mv(bv.dot(&ma), -ma.dot(&bv), scale, IDENTITY_TOL);
    }
    t.finish()
}

fn ga_blade_rule(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/blade-rule");
    for k in 1..=3usize {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 }; // (-1)^(k+1)
        for _ in 0..CASES {
            let b = sampling::blade(rng, k);
            let a = Multivector::vector(sampling::vector(rng));
            let scale = b.max_abs() * a.max_abs();
            t.mv(b.dot(&a), (b * a + a * b * sign) * 0.5, scale, IDENTITY_TOL);
            t.mv(b.wedge(&a), (b * a - a * b * sign) * 0.5, scale, IDENTITY_TOL);
        }
    }
    t.finish()
}

fn ga_distribution_identity(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/distribution-identity");
    for _ in 0..CASES {
        let (a, b, c) = (sampling::vector(rng), sampling::vector(rng), sampling::vector(rng));
        let lhs = Multivector::vector(a).dot(&Multivector::vector(b).wedge(&Multivector::vector(c)));
        let rhs = Multivector::vector(c * a.dot(b) - b * a.dot(c));
        t.mv(lhs, rhs, a.norm() * b.norm() * c.norm(), IDENTITY_TOL);
    }
    t.finish()
}

fn ga_grade_completeness(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/grade-completeness");
    for _ in 0..CASES {
        let m = sampling::multivector(rng);
        let sum = (0..=3).fold(Multivector::ZERO, |acc, k| acc + m.grade(k).expect("k <= 3"));
        t.exact(sum, m);
    }
    t.finish()
}

fn ga_associativity(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("ga/associativity");
    for _ in 0..CASES {
        let (m, n, p) = (
            sampling::multivector(rng),
            sampling::multivector(rng),
            sampling::multivector(rng),
        );
        let scale = m.max_abs() * n.max_abs() * p.max_abs();
        t.mv((m * n) * p, m * (n * p), scale, IDENTITY_TOL);
    }
    t.finish()
}

fn dyadic_transpose_law(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("dyadics/transpose-law");
    for _ in 0..CASES {
        let c = sampling::vector(rng);
        let tt = sampling::tensor(rng);
        t.vec(
            Tensor3::postfactor(c, &tt),
            Tensor3::prefactor(&tt.transpose(), c),
            c.norm() * tt.max_abs(),
            DYADIC_TOL,
        );
    }
    t.finish()
}

fn dyadic_factor_laws(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("dyadics/factor-laws");
    for _ in 0..CASES {
        let (a, b, c) = (sampling::vector(rng), sampling::vector(rng), sampling::vector(rng));
        let ab = Tensor3::dyad(a, b);
        let scale = a.norm() * b.norm() * c.norm();
        t.vec(Tensor3::postfactor(c, &ab), b * c.dot(a), scale, DYADIC_TOL);
        t.vec(Tensor3::prefactor(&ab, c), a * b.dot(c), scale, DYADIC_TOL);
        t.exact(ab.transpose(), Tensor3::dyad(b, a));
    }
    // A generic asymmetric dyadic acts differently from each side.
    let witness = Tensor3::dyad(Vec3::unit(0), Vec3::unit(1));
    t.record(Tensor3::postfactor(Vec3::unit(0), &witness) != Tensor3::prefactor(&witness, Vec3::unit(0)));
    t.finish()
}

fn dyadic_structure(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("dyadics/nonion-and-parts");
    for _ in 0..CASES {
        let tt = sampling::tensor(rng);
        t.exact(Tensor3::from_nonion(tt.nonion_terms()).ok(), Some(tt));
        t.exact(tt.transpose().transpose(), tt);
        t.record(tt.sym().is_symmetric() && tt.antisym().is_antisymmetric());
        t.tensor(tt.sym() + tt.antisym(), tt, tt.max_abs(), DYADIC_TOL);
    }
    t.finish()
}

fn fields_convention_duality(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("fields/convention-duality");
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let g = f.grad_gibbs(x).expect("polynomial field");
        t.exact(f.grad_alt(x).ok(), Some(g.transpose()));
        t.exact(f.divergence(x).ok(), Some(g.trace()));
    }
    t.finish()
}

fn fields_taylor_order(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("fields/taylor-order");
    for _ in 0..SWEEP_FIELDS {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let u = sampling::unit_vector(rng);
        let g = f.gradient(x);
        let v0 = f.value(x);
        let errors: Vec<f64> = STEP_SWEEP
            .iter()
            .map(|&h| (f.value(x + u * h) - v0 - Tensor3::postfactor(u, &g) * h).max_abs())
            .collect();
        t.order(fitted_order(&STEP_SWEEP, &errors));
    }
    t.finish()
}

fn fields_fd_order(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("fields/fd-order");
    for _ in 0..SWEEP_FIELDS {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let exact = f.gradient(x);
        let errors: Vec<f64> = STEP_SWEEP
            .iter()
            .map(|&h| {
                let bb = BlackBoxField::wrap(f.clone(), h).expect("positive step");
                (bb.fd_grad(x).expect("polynomial evaluator") - exact).max_abs()
            })
            .collect();
        t.order(fitted_order(&STEP_SWEEP, &errors));
    }
    t.finish()
}

fn fields_derivative_closure(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("fields/derivative-closure");
    let h = 1e-3;
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let bb = BlackBoxField::wrap(f.clone(), h).expect("positive step");
        let fd = bb.fd_grad(x).expect("polynomial evaluator");
        // Central differences on a cubic are off by h²/6 times third derivatives.
        t.tensor(fd, f.gradient(x), 1.0, 100.0 * h * h);
    }
    // ∂/∂x_i of c·x^p is c·p_i·x^(p − e_i).
    for powers in sampling::exponents_up_to(4) {
        let c = sampling::scalar(rng);
        let m = Monomial::new(c, powers);
        for axis in 0..3 {
            let expected = (powers[axis] > 0).then(|| {
                let mut p = powers;
                p[axis] -= 1;
                Monomial::new(c * f64::from(powers[axis]), p)
            });
            t.exact(m.derivative(axis), expected);
            let poly = Polynomial::new([m]).derivative(axis);
            t.exact(poly, Polynomial::new(expected));
        }
    }
    t.finish()
}

fn kin_decomposition(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/decomposition");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let g = f.gradient(x);
        let dec = kinematics::decompose(&f, x).expect("polynomial field");
        t.tensor(dec.d + dec.omega, g, g.max_abs(), IDENTITY_TOL);
        t.record(dec.d.is_symmetric() && dec.omega.is_antisymmetric());
        // Entry formulas with ∂_i v_j = g(i, j).
        let d = |i: usize, j: usize| g.get(i, j);
        let expected = Tensor3::from_rows([
            [0.0, 0.5 * (d(0, 1) - d(1, 0)), -0.5 * (d(2, 0) - d(0, 2))],
            [-0.5 * (d(0, 1) - d(1, 0)), 0.0, 0.5 * (d(1, 2) - d(2, 1))],
            [0.5 * (d(2, 0) - d(0, 2)), -0.5 * (d(1, 2) - d(2, 1)), 0.0],
        ]);
        t.tensor(dec.omega, expected, g.max_abs(), IDENTITY_TOL);
    }
    t.finish()
}

fn kin_bivector_equivalence(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/bivector-equivalence");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let omega = kinematics::decompose(&f, x).expect("polynomial field").omega;
        let bv = kinematics::omega_bivector(&f, x).expect("polynomial field");
        let ga = Multivector::vector(dx).dot(&bv);
        t.record(ga.is_homogeneous(1));
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(Tensor3::postfactor(dx, &omega), ga.vector_part(), scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_factor_consistency(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/factor-consistency");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dr = sampling::vector(rng);
        let post = kinematics::dv_postfactor(&f, x, dr).expect("polynomial field");
        let pre = kinematics::dv_prefactor(&f, x, dr).expect("polynomial field");
        let scale = dr.norm() * f.gradient(x).max_abs();
        t.vec(post, pre, scale, 1e-13);
        let omega = kinematics::decompose(&f, x).expect("polynomial field").omega;
        t.exact(
            Tensor3::postfactor(dr, &omega),
            Tensor3::prefactor(&omega.transpose(), dr),
        );
    }
    t.finish()
}

fn kin_strain_split(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/strain-split");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let split = kinematics::strain_split(&f, x, dx).expect("polynomial field");
        let dv = kinematics::dv_postfactor(&f, x, dx).expect("polynomial field");
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(split.total(), dv, scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_symmetric_split(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/symmetric-split");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let d = kinematics::decompose(&f, x).expect("polynomial field").d;
        let div = f.divergence(x).expect("polynomial field");
        let fwd = kinematics::bidi_forward(&f, x, dx).expect("polynomial field");
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(Tensor3::postfactor(dx, &d), (dx * div + fwd) * 0.5, scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_antisymmetric_split(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/antisymmetric-split");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let omega = kinematics::decompose(&f, x).expect("polynomial field").omega;
        let div = f.divergence(x).expect("polynomial field");
        let rev = kinematics::bidi_reverse(&f, x, dx).expect("polynomial field");
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(Tensor3::postfactor(dx, &omega), (dx * div - rev) * 0.5, scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_vector_calculus(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/vector-calculus");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let dec = kinematics::decompose(&f, x).expect("polynomial field");
        let (strain, rotation) = vector_calculus_split(&f, x, dx);
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(Tensor3::postfactor(dx, &dec.d), strain, scale, IDENTITY_TOL);
        t.vec(Tensor3::postfactor(dx, &dec.omega), rotation, scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_rotation_witness(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/rotation-witness");
    for _ in 0..CASES {
        let w = sampling::vector(rng);
        let f = PolyField::rigid_rotation(w);
        let x = sampling::vector(rng);
        let dr = sampling::vector(rng);
        let omega = kinematics::decompose(&f, x).expect("polynomial field").omega;
        let scale = w.norm() * dr.norm();
        t.vec(Tensor3::postfactor(dr, &omega), w.cross(dr), scale, IDENTITY_TOL);
        t.vec(Tensor3::postfactor(dr, &omega.transpose()), -w.cross(dr), scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_incompressible_bidi(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/incompressible-bidi");
    for _ in 0..CASES {
        let f = sampling::solenoidal_field(rng);
        let x = sampling::vector(rng);
        let dx = sampling::vector(rng);
        let dec = kinematics::decompose(&f, x).expect("polynomial field");
        let fwd = kinematics::bidi_forward(&f, x, dx).expect("polynomial field");
        let rev = kinematics::bidi_reverse(&f, x, dx).expect("polynomial field");
        let split = kinematics::strain_split(&f, x, dx).expect("polynomial field");
        let scale = dx.norm() * f.gradient(x).max_abs();
        t.vec(fwd, Tensor3::postfactor(dx, &dec.d) * 2.0, scale, IDENTITY_TOL);
        t.vec(rev, Tensor3::postfactor(dx, &dec.omega) * -2.0, scale, IDENTITY_TOL);
        t.vec(split.compressive, Vec3::ZERO, scale, IDENTITY_TOL);
    }
    t.finish()
}

fn kin_vorticity(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("kinematics/vorticity");
    for _ in 0..CASES {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let curl = Vec3::from(std::array::from_fn(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            f.component(j).derivative(i).eval(x) - f.component(i).derivative(j).eval(x)
        }));
        let w = kinematics::vorticity(&f, x).expect("polynomial field");
        let bv = kinematics::omega_bivector(&f, x).expect("polynomial field");
        t.vec(w, curl, f.gradient(x).max_abs(), IDENTITY_TOL);
        t.vec(w, (bv * 2.0).vector_dual().expect("bivector"), 1.0, IDENTITY_TOL);
    }
    t.finish()
}

fn eval_src(f: &PolyField, x: Vec3, dr: Vec3, src: &str) -> Option<Value> {
    let expr = parse_str(src).ok()?;
    EvalContext::new(f, x).bind("dr", dr).ok()?.evaluate(&expr).ok()
}

fn notation_coherence(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("notation/library-coherence");
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dr = sampling::vector(rng);
        let g = f.gradient(x);
        let dec = kinematics::decompose(&f, x).expect("polynomial field");
        let golden = [
            ("dr·(∇⊗v)", kinematics::dv_postfactor(&f, x, dr).ok()),
            ("(∇⊗v)†·dr", kinematics::dv_prefactor(&f, x, dr).ok()),
            ("dr·(d)", Some(Tensor3::postfactor(dr, &dec.d))),
            ("dr·(Ω)", Some(Tensor3::postfactor(dr, &dec.omega))),
        ];
        for (src, expected) in golden {
            t.exact(eval_src(&f, x, dr, src), expected.map(Value::Vector));
        }
        t.exact(eval_src(&f, x, dr, "∇⊗v"), Some(Value::Tensor(g)));
        t.exact(eval_src(&f, x, dr, "∇·v"), Some(Value::Scalar(g.trace())));
    }
    t.finish()
}

fn notation_transpose_law(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("notation/transpose-law");
    let tensors = ["(∇⊗v)", "d", "Ω", "(dr⊗v)", "((∇⊗v) - (v⊗dr))"];
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let dr = sampling::vector(rng);
        for tensor in tensors {
            let post = eval_src(&f, x, dr, &format!("dr · {tensor}"));
            let pre = eval_src(&f, x, dr, &format!("{tensor}† · dr"));
            match (post, pre) {
                (Some(Value::Vector(a)), Some(Value::Vector(b))) => {
                    t.vec(a, b, dr.norm() * f.gradient(x).max_abs(), DYADIC_TOL)
                }
                _ => t.record(false),
            }
        }
    }
    t.finish()
}

fn notation_parse_totality(_: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("notation/parse-totality");
    let good = [
        "dr . (grad (x) v)'",
        "∇⊗v",
        "dr · (∇⊗v)",
        "(∇⊗v)† · dr",
        "dr·(d)",
        "dr·(Ω)",
        "∇ · v",
        "∇ ∧ v",
        "∇ × v",
        "0.5 * (∇ ∧ v)",
        "∇(dr · v)",
    ];
    for src in good {
        let parsed = parse_str(src);
        t.record(parsed.as_ref().is_ok_and(|e| parse_str(&e.to_string()).as_ref() == Ok(e)));
    }
    let bad = ["@", "dr · ∇⊗v", "(dr · v", "dr · v)", "", "v +", "a ^ b . c"];
    for src in bad {
        t.record(parse_str(src).is_err_and(|e| e.offset() <= src.len()));
    }
    t.finish()
}

fn notation_audit(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("notation/convention-audit");
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let g = f.gradient(x);
        let verdict = |m: &Tensor3| audit_convention(m, &f, x).map(|r| r.verdict).ok();
        t.exact(verdict(&g), Some(Verdict::Gibbs));
        t.exact(verdict(&g.transpose()), Some(Verdict::Alternative));
        t.exact(verdict(&(g + Tensor3::IDENTITY)), Some(Verdict::Neither));
        let sym = PolyField::position();
        t.exact(
            audit_convention(&g, &sym, x).map(|r| r.verdict).ok(),
            Some(Verdict::SymmetricAmbiguous),
        );
    }
    t.finish()
}

fn report_json_round_trip(rng: &mut SampleRng) -> CheckOutcome {
    let mut t = Tally::new("report/json-round-trip");
    for _ in 0..100 {
        let f = sampling::cubic_field(rng);
        let x = sampling::vector(rng);
        let report = kinematics::report(&f, x).expect("polynomial field");
        let text = serde_json::to_string(&report).expect("plain data serializes");
        t.exact(serde_json::from_str::<KinematicsReport>(&text).ok(), Some(report));
        let spec = crate::fields::spec::field_to_value(&f);
        t.exact(crate::fields::spec::field_from_value(&spec).ok(), Some(f));
    }
    t.finish()
}
