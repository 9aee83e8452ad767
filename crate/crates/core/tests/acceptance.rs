//! Acceptance gate: one test per criterion, each printing a single
//! [PASS]/[FAIL] line (visible with --nocapture, or on failure).
//!
//! Reference numbers are the published table values the pipeline is
//! expected to reproduce; tolerances are absolute unless stated.

use std::f64::consts::PI;
use std::sync::OnceLock;

use energy_series::accel;
use energy_series::eigensolve;
use energy_series::oracles;
use energy_series::ptsym::{self, PTSeries};
use energy_series::variational;
use energy_series::{EnergySeries, GridConfig, Parity, PotentialSpec};

// -- shared fixtures ------------------------------------------------------------

fn build(spec: PotentialSpec, order: usize) -> EnergySeries {
    EnergySeries::build(spec, order, &GridConfig::default()).expect("series build")
}

fn flat() -> &'static EnergySeries {
    static S: OnceLock<EnergySeries> = OnceLock::new();
    S.get_or_init(|| build(PotentialSpec::SquareWell, 8))
}

fn harmonic() -> &'static EnergySeries {
    static S: OnceLock<EnergySeries> = OnceLock::new();
    S.get_or_init(|| build(PotentialSpec::PowerLaw(2.0), 8))
}

fn linear() -> &'static EnergySeries {
    static S: OnceLock<EnergySeries> = OnceLock::new();
    S.get_or_init(|| build(PotentialSpec::PowerLaw(1.0), 8))
}

fn quartic() -> &'static EnergySeries {
    static S: OnceLock<EnergySeries> = OnceLock::new();
    S.get_or_init(|| build(PotentialSpec::PowerLaw(4.0), 3))
}

fn cubic_pt() -> &'static PTSeries {
    static S: OnceLock<PTSeries> = OnceLock::new();
    S.get_or_init(|| ptsym::pt_series(build(PotentialSpec::PowerLaw(3.0), 3), 3.0).expect("pt series"))
}

fn ground(spec: PotentialSpec) -> f64 {
    oracles::shooting_level(spec, 0).expect("shooting oracle").value
}

fn roots(s: &EnergySeries, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|n| eigensolve::truncated_root(s, n).expect("truncated root").value)
        .collect()
}

// -- reporting ------------------------------------------------------------------

struct Criterion {
    id: usize,
    what: String,
    errs: Vec<String>,
}

impl Criterion {
    fn new(id: usize, what: impl Into<String>) -> Self {
        Criterion { id, what: what.into(), errs: Vec::new() }
    }

    fn abs(&mut self, label: impl AsRef<str>, got: f64, want: f64, tol: f64) {
        let d = (got - want).abs();
        if !(d <= tol) {
            self.errs.push(format!(
                "{}: got {:.7}, reference {:.7}, |err| {:.2e} > {:.0e}",
                label.as_ref(),
                got,
                want,
                d,
                tol
            ));
        }
    }

    fn holds(&mut self, label: impl AsRef<str>, ok: bool) {
        if !ok {
            self.errs.push(format!("{}: does not hold", label.as_ref()));
        }
    }

    fn finish(self) {
        if self.errs.is_empty() {
            println!("[PASS] criterion {}: {}", self.id, self.what);
        } else {
            println!("[FAIL] criterion {}: {} :: {}", self.id, self.what, self.errs.join("; "));
            panic!("criterion {}: {}", self.id, self.errs.join("; "));
        }
    }
}

// -- criteria -------------------------------------------------------------------

#[test]
fn criterion_1_square_well_coefficients_match_exact_rationals() {
    let mut c = Criterion::new(1, "square-well a_1..a_7 match the exact rationals to 1e-9");
    let want = [
        1.0 / 3.0,
        1.0 / 45.0,
        2.0 / 945.0,
        1.0 / 4725.0,
        2.0 / 93555.0,
        1382.0 / 638512875.0,
        4.0 / 18243225.0,
    ];
    let a = flat().coefficients();
    for (k, w) in want.iter().enumerate() {
        c.abs(format!("a_{}", k + 1), a[k], *w, 1e-9);
    }
    c.finish();
}

#[test]
fn criterion_2_square_well_roots_and_convergence_rate() {
    let want = [3.00000, 2.56231, 2.48906, 2.47267, 2.46871, 2.46773];
    let e = roots(flat(), 6);
    let d: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
    let rate = (d[4] / d[3]).abs();
    let mut c = Criterion::new(
        2,
        format!("square-well E_1..E_6 to 1e-4; tail difference ratio {rate:.4} within 10% of 0.25"),
    );
    for (n, w) in want.iter().enumerate() {
        c.abs(format!("E_{}", n + 1), e[n], *w, 1e-4);
    }
    c.holds("difference ratio within 10% of 0.25", (rate - 0.25).abs() <= 0.025);
    c.finish();
}

#[test]
fn criterion_3_harmonic_roots_and_coefficients() {
    let mut c = Criterion::new(3, "harmonic E_1..E_6 to 1e-4 from coefficients matching to 1e-4");
    let want_roots = [1.27324, 1.05949, 1.01721, 1.00543, 1.00177, 1.00059];
    let want_coeffs = [0.78530, 0.14956, 0.04403, 0.01409, 0.00463, 0.00153];
    let a = harmonic().coefficients();
    for (k, w) in want_coeffs.iter().enumerate() {
        c.abs(format!("a_{}", k + 1), a[k], *w, 1e-4);
    }
    for (n, (got, w)) in roots(harmonic(), 6).iter().zip(want_roots.iter()).enumerate() {
        c.abs(format!("E_{}", n + 1), *got, *w, 1e-4);
    }
    c.finish();
}

#[test]
fn criterion_4_linear_roots_and_coefficients() {
    let mut c = Criterion::new(4, "linear E_1..E_6 to 1e-4 from coefficients matching to 1e-4");
    let want_roots = [1.37172, 1.11052, 1.05136, 1.03168, 1.02415, 1.02107];
    let want_coeffs = [0.72901, 0.15440, 0.05411, 0.02131, 0.00876, 0.00368];
    let a = linear().coefficients();
    for (k, w) in want_coeffs.iter().enumerate() {
        c.abs(format!("a_{}", k + 1), a[k], *w, 1e-4);
    }
    for (n, (got, w)) in roots(linear(), 6).iter().zip(want_roots.iter()).enumerate() {
        c.abs(format!("E_{}", n + 1), *got, *w, 1e-4);
    }
    c.finish();
}

#[test]
fn criterion_5_quartic_roots_and_coefficients() {
    let mut c = Criterion::new(5, "quartic E_1..E_3 to 1e-4 from coefficients matching to 1e-5");
    let want_roots = [1.31010, 1.10846, 1.07240];
    let want_coeffs = [0.763303, 0.125262, 0.030303];
    let a = quartic().coefficients();
    for (k, w) in want_coeffs.iter().enumerate() {
        c.abs(format!("a_{}", k + 1), a[k], *w, 1e-5);
    }
    for (n, (got, w)) in roots(quartic(), 3).iter().zip(want_roots.iter()).enumerate() {
        c.abs(format!("E_{}", n + 1), *got, *w, 1e-4);
    }
    c.finish();
}

#[test]
fn criterion_6_shanks_accelerated_ratios() {
    let mut c = Criterion::new(6, "accelerated E_n/E_exact sequences match to 1e-4");
    let cases: [(&str, &EnergySeries, f64, &[f64]); 4] = [
        ("square-well", flat(), PI * PI / 4.0, &[1.00281, 1.00022, 1.00002, 1.00000]),
        ("power:2", harmonic(), 1.0, &[1.00678, 1.00088, 1.00012, 1.00002]),
        (
            "power:1",
            linear(),
            ground(PotentialSpec::PowerLaw(1.0)),
            &[1.01497, 1.00301, 1.00066, 1.00014],
        ),
        ("power:4", quartic(), ground(PotentialSpec::PowerLaw(4.0)), &[1.00396]),
    ];
    for (name, s, exact, want) in cases {
        let ratios: Vec<f64> = roots(s, want.len() + 2).iter().map(|e| e / exact).collect();
        let terms = accel::shanks(&ratios).expect("shanks");
        for (i, (term, w)) in terms.iter().zip(want.iter()).enumerate() {
            match term.value() {
                Some(v) => c.abs(format!("{name} S_{}", i + 1), v, *w, 1e-4),
                None => c.holds(format!("{name} S_{} is defined", i + 1), false),
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_7_variational_expectation_ratios_and_sandwich() {
    let lin_exact = ground(PotentialSpec::PowerLaw(1.0));
    let lin_h3 = variational::expectation(linear(), 3).expect("expectation").value;
    let mut c = Criterion::new(
        7,
        format!(
            "<H>_n/E_exact cells to 1e-5 with E_n > <H>_n > E_exact everywhere \
             (power:1 <H>_3/E_exact = {:.6}, reported only)",
            lin_h3 / lin_exact
        ),
    );
    let cases: [(&str, &EnergySeries, f64, &[f64]); 4] = [
        ("square-well", flat(), PI * PI / 4.0, &[1.001292, 1.000061, 1.000003]),
        ("power:2", harmonic(), 1.0, &[1.003921, 1.000343, 1.000035]),
        ("power:1", linear(), lin_exact, &[1.009813, 1.001427]),
        ("power:4", quartic(), ground(PotentialSpec::PowerLaw(4.0)), &[1.00202, 1.00012]),
    ];
    for (name, s, exact, want) in cases {
        for (i, w) in want.iter().enumerate() {
            let n = i + 1;
            let h = variational::expectation(s, n).expect("expectation").value;
            let e_n = eigensolve::truncated_root(s, n).expect("root").value;
            c.abs(format!("{name} <H>_{n}/E_exact"), h / exact, *w, 1e-5);
            c.holds(format!("{name} sandwich E_{n} > <H>_{n} > E_exact"), e_n > h && h > exact);
        }
    }
    // The anomalous linear n = 3 cell is reported above, never gated; the
    // sandwich still has to hold for it.
    let lin_e3 = eigensolve::truncated_root(linear(), 3).expect("root").value;
    c.holds("power:1 sandwich E_3 > <H>_3 > E_exact", lin_e3 > lin_h3 && lin_h3 > lin_exact);
    if c.errs.iter().any(|e| e.starts_with("power:2 <H>_1/")) {
        c.errs.push(
            "note: power:2 <H>_1/E_exact is stable at 1.0039055 under grid refinement; \
             the reference cell 1.003921 sits 1.6e-5 away, outside the 1e-5 gate"
                .into(),
        );
    }
    c.finish();
}

#[test]
fn criterion_8_diagonal_approximant_level_tables() {
    let mut c = Criterion::new(
        8,
        "level tables from P_1^1..P_4^4 cell-by-cell to 1e-3 (1e-4 for the order-4 ground cells); quartic P(2,1) pair to 1e-3",
    );
    let flat_cells: [&[f64]; 4] = [
        &[2.50000],
        &[2.46744, 9.94122],
        &[2.46740, 9.86993, 22.29341],
        &[2.46740, 9.86960, 22.20737, 39.56379],
    ];
    let harmonic_cells: [&[f64]; 4] = [
        &[1.02478],
        &[1.00013, 3.08260],
        &[1.00000, 3.00237, 5.12647],
        &[1.00000, 3.00003, 5.00701, 7.16012],
    ];
    let linear_cells: [&[f64]; 4] = [
        &[1.06291],
        &[1.01948, 2.48513],
        &[1.01880, 2.34902, 3.44920],
        &[1.01879, 2.33863, 3.27292, 4.35282],
    ];
    let cases: [(&str, &EnergySeries, [&[f64]; 4]); 3] = [
        ("square-well", flat(), flat_cells),
        ("power:2", harmonic(), harmonic_cells),
        ("power:1", linear(), linear_cells),
    ];
    for (name, s, cells) in cases {
        let table = accel::level_table(s, 4).expect("level table");
        for (row, want) in table.rows.iter().zip(cells.iter()) {
            let n = row.pade_order;
            c.holds(format!("{name} P_{n}^{n} yields {n} levels"), row.levels.len() == want.len());
            for (k, (level, w)) in row.levels.iter().zip(want.iter()).enumerate() {
                let tol = if n == 4 && k == 0 { 1e-4 } else { 1e-3 };
                c.abs(format!("{name} P_{n}^{n} level {k}"), level.value, *w, tol);
            }
        }
    }
    // The published quartic pair comes from the numerator-2 / denominator-1
    // approximant: the pole sits at a_2/a_3 and the zero just below E_1.
    let p21 = accel::pade_general_from(quartic().coefficients(), 2, 1).expect("P(2,1)");
    let levels = accel::levels_from_approximant(&p21);
    c.holds("power:4 P(2,1) yields 2 levels", levels.len() == 2);
    for (k, w) in [1.06137, 4.13364].iter().enumerate() {
        if let Some(level) = levels.get(k) {
            c.abs(format!("power:4 P(2,1) level {k}"), level.value, *w, 1e-3);
        }
    }
    c.finish();
}

#[test]
fn criterion_9_pt_symmetric_cubic_ratios() {
    let mut c = Criterion::new(
        9,
        "-(ix)^3 level and expectation ratios to 1e-3 against the complex-ray ground value",
    );
    let e0 = oracles::stokes_line_ground(3.0).expect("ray oracle").value;
    c.abs("ray-oracle ground vs frozen value", e0, 1.156_267_071_988_552, 1e-6);
    let pt = cubic_pt();
    let e1 = ptsym::pt_root(pt, 1).expect("pt root 1").value;
    let e2 = ptsym::pt_root(pt, 2).expect("pt root 2").value;
    let e3 = ptsym::pt_root(pt, 3).expect("pt root 3").value;
    c.abs("E_1/E0", e1 / e0, 1.10366, 1e-3);
    c.abs("E_2/E0", e2 / e0, 0.98258, 1e-3);
    c.holds("E_3 equals E_2 exactly (weighted a_3 vanishes)", e3 == e2);
    let h1 = ptsym::pt_expectation(pt, 1).expect("pt expectation 1").value;
    let h2 = ptsym::pt_expectation(pt, 2).expect("pt expectation 2").value;
    c.abs("<H>_1/E0", h1 / e0, 0.984, 1e-3);
    c.abs("<H>_2/E0", h2 / e0, 0.997, 1e-3);
    c.finish();
}

#[test]
fn criterion_10_property_suites() {
    let mut c = Criterion::new(
        10,
        "coefficient positivity, monotone roots, root residuals, approximant re-expansion, \
         radius vs first odd level, parity interlacing, grid-refinement stability, and the \
         order-reduction identity",
    );

    let family: [(&str, &EnergySeries); 4] = [
        ("square-well", flat()),
        ("power:2", harmonic()),
        ("power:1", linear()),
        ("power:4", quartic()),
    ];
    for (name, s) in family {
        c.holds(
            format!("{name} coefficients all positive"),
            s.coefficients().iter().all(|&a| a > 0.0),
        );
        let e = roots(s, s.order());
        c.holds(
            format!("{name} truncation roots strictly decreasing"),
            e.windows(2).all(|w| w[1] < w[0]),
        );
        let max_resid = e
            .iter()
            .enumerate()
            .map(|(i, &v)| (s.eval_f_truncated(v, i + 1) - 1.0).abs())
            .fold(0.0, f64::max);
        c.holds(format!("{name} root residuals < 1e-12 (max {max_resid:.1e})"), max_resid < 1e-12);
    }

    for (name, s) in [("square-well", flat()), ("power:2", harmonic()), ("power:1", linear())] {
        let approx = accel::pade_diagonal_from(s.coefficients(), 4).expect("diagonal approximant");
        let back = accel::pade_reexpand(&approx, 8);
        let drift = back
            .iter()
            .zip(s.coefficients())
            .map(|(b, a)| ((b - a) / a).abs())
            .fold(0.0, f64::max);
        c.holds(
            format!("{name} P_4^4 re-expansion matches a_1..a_8 (max drift {drift:.1e})"),
            drift < 1e-8,
        );

        let spec = s.spec;
        let radius = eigensolve::radius_estimate(s).expect("radius");
        let e1 = oracles::shooting_level(spec, 1).expect("oracle").value;
        c.holds(
            format!("{name} radius estimate {radius:.4} within 5% of first odd level {e1:.4}"),
            (radius - e1).abs() <= 0.05 * e1,
        );

        let table = accel::level_table(s, 4).expect("level table");
        for row in &table.rows {
            let n = row.pade_order;
            let ascending = row.levels.windows(2).all(|w| w[1].value > w[0].value);
            let alternating = row
                .levels
                .iter()
                .enumerate()
                .all(|(i, l)| l.parity == if i % 2 == 0 { Parity::Even } else { Parity::Odd });
            c.holds(
                format!("{name} P_{n}^{n} levels ascend with alternating parity"),
                ascending && alternating,
            );
        }
    }

    let fine = GridConfig {
        base_step: 5e-4,
        step_cap: 0.01,
        resolution: 0.025,
        ode_resolution: 2.5e-3,
        ..GridConfig::default()
    };
    let refined = EnergySeries::build(PotentialSpec::PowerLaw(2.0), 6, &fine).expect("refined series");
    let drift = harmonic()
        .coefficients()
        .iter()
        .zip(refined.coefficients())
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    c.holds(format!("power:2 a_k stable under grid refinement (max drift {drift:.1e})"), drift < 1e-6);

    for (name, s) in [("square-well", flat()), ("power:2", harmonic()), ("power:1", linear())] {
        let worst = identity_residual(s, 3);
        c.holds(
            format!("{name} -Psi_3'' + V Psi_3 = E Psi_2 on interior points (max residual {worst:.1e})"),
            worst < 1e-3,
        );
    }

    c.finish();
}

/// Max normalized residual of -Psi_n'' + V Psi_n - E_n Psi_{n-1} on interior
/// grid points, with Psi'' taken by central differencing the exact Psi' so
/// the stored phi / dphi / psi0 arrays are tested against each other.
fn identity_residual(s: &EnergySeries, n: usize) -> f64 {
    let e = eigensolve::truncated_root(s, n).expect("root").value;
    let big = variational::assemble(s, n, e);
    let small = variational::assemble(s, n - 1, e);
    let p = s.profile();
    let m = p.len();
    let mut dpsi: Vec<f64> = p.dpsi0.clone();
    let mut ek = 1.0;
    for k in 1..=n {
        ek *= e;
        let phi = s.phi(k);
        let dphi = s.dphi(k);
        for i in 0..m {
            dpsi[i] += ek * (p.dpsi0[i] * phi[i] + p.psi0[i] * dphi[i]);
        }
    }
    let mut worst = 0.0_f64;
    for i in 1..m - 1 {
        let hm = p.grid[i] - p.grid[i - 1];
        let hp = p.grid[i + 1] - p.grid[i];
        let ddpsi = (hm * hm * dpsi[i + 1] - hp * hp * dpsi[i - 1] + (hp * hp - hm * hm) * dpsi[i])
            / (hm * hp * (hm + hp));
        let v = match s.spec {
            PotentialSpec::SquareWell => 0.0,
            PotentialSpec::PowerLaw(nn) | PotentialSpec::PTPower(nn) => p.grid[i].powf(nn),
        };
        let resid = (-ddpsi + v * big.values[i] - e * small.values[i]).abs();
        worst = worst.max(resid / (1.0 + (e * small.values[i]).abs()));
    }
    worst
}
