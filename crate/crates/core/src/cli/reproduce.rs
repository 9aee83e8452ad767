//! Frozen reference tables and the cell-by-cell reproduction gate.
//!
//! Each target recomputes one reference artifact from scratch at the
//! requested grid and compares every cell against the stored value. A
//! cell outside its tolerance marks the whole run as breached; the
//! report is still emitted in full so the deviation is visible.

use std::f64::consts::PI;

use super::{CliError, Meta, Report, Row, TableId};
use crate::accel;
use crate::eigensolve::{self, EigenEstimate};
use crate::grid::GridConfig;
use crate::oracles;
use crate::potential::PotentialSpec;
use crate::ptsym;
use crate::series::EnergySeries;
use crate::variational;

// -- frozen reference values ------------------------------------------------

const FLAT_COEFFS: [f64; 7] = [
    1.0 / 3.0,
    1.0 / 45.0,
    2.0 / 945.0,
    1.0 / 4725.0,
    2.0 / 93555.0,
    1382.0 / 638512875.0,
    4.0 / 18243225.0,
];
const HARMONIC_COEFFS: [f64; 6] = [0.78530, 0.14956, 0.04403, 0.01409, 0.00463, 0.00153];
const LINEAR_COEFFS: [f64; 6] = [0.72901, 0.15440, 0.05411, 0.02131, 0.00876, 0.00368];
const QUARTIC_COEFFS: [f64; 3] = [0.763303, 0.125262, 0.030303];

const FLAT_ROOTS: [f64; 6] = [3.00000, 2.56231, 2.48906, 2.47267, 2.46871, 2.46773];
const FLAT_ROOT_RATIOS: [f64; 6] = [1.21585, 1.03846, 1.00878, 1.00214, 1.00053, 1.00013];
const HARMONIC_ROOTS: [f64; 6] = [1.27324, 1.05949, 1.01721, 1.00543, 1.00177, 1.00059];
const LINEAR_ROOTS: [f64; 6] = [1.37172, 1.11052, 1.05136, 1.03168, 1.02415, 1.02107];
const LINEAR_ROOT_RATIOS: [f64; 6] = [1.34642, 1.09003, 1.03197, 1.01265, 1.00525, 1.00223];
const QUARTIC_ROOTS: [f64; 3] = [1.31010, 1.10846, 1.07240];
const QUARTIC_ROOT_RATIOS: [f64; 3] = [1.23552, 1.04536, 1.01136];
const LINEAR_GROUND: f64 = 1.01879;
const QUARTIC_GROUND: f64 = 1.060362;

const FLAT_PADE: [&[f64]; 4] = [
    &[2.50000],
    &[2.46744, 9.94122],
    &[2.46740, 9.86993, 22.29341],
    &[2.46740, 9.86960, 22.20737, 39.56379],
];
const HARMONIC_PADE: [&[f64]; 4] = [
    &[1.02478],
    &[1.00013, 3.08260],
    &[1.00000, 3.00237, 5.12647],
    &[1.00000, 3.00003, 5.00701, 7.16012],
];
const LINEAR_PADE: [&[f64]; 4] = [
    &[1.06291],
    &[1.01948, 2.48513],
    &[1.01880, 2.34902, 3.44920],
    &[1.01879, 2.33863, 3.27292, 4.35282],
];
const QUARTIC_P11_GROUND: f64 = 1.07827;
const QUARTIC_P21_LEVELS: [f64; 2] = [1.06137, 4.13364];

const FLAT_SHANKS: [f64; 4] = [1.00281, 1.00022, 1.00002, 1.00000];
const HARMONIC_SHANKS: [f64; 4] = [1.00678, 1.00088, 1.00012, 1.00002];
const LINEAR_SHANKS: [f64; 4] = [1.01497, 1.00301, 1.00066, 1.00014];
const QUARTIC_SHANKS: f64 = 1.00396;

const FLAT_EXPECT_RATIOS: [f64; 3] = [1.001292, 1.000061, 1.000003];
const HARMONIC_EXPECT_RATIOS: [f64; 3] = [1.003921, 1.000343, 1.000035];
const LINEAR_EXPECT_RATIOS: [f64; 2] = [1.009813, 1.001427];
const QUARTIC_EXPECT_RATIOS: [f64; 2] = [1.00202, 1.00012];

const CUBIC_RAY_GROUND: f64 = 1.156_267_071_988_552;
const CUBIC_ROOT_RATIOS: [f64; 2] = [1.10366, 0.98258];
const CUBIC_EXPECT_RATIOS: [f64; 2] = [0.984, 0.997];

// -- gate machinery ----------------------------------------------------------

struct Gate {
    rows: Vec<Row>,
    breach: bool,
}

impl Gate {
    fn new() -> Gate {
        Gate { rows: Vec::new(), breach: false }
    }

    fn check(&mut self, label: impl Into<String>, value: f64, reference: f64, tol: f64) {
        self.check_noted(label, value, reference, tol, None);
    }

    fn check_noted(
        &mut self,
        label: impl Into<String>,
        value: f64,
        reference: f64,
        tol: f64,
        context: Option<&str>,
    ) {
        let err = (value - reference).abs();
        let mut note = context.map(str::to_string);
        if err > tol {
            self.breach = true;
            let breach_msg = format!("deviation {err:.2e} exceeds tolerance {tol:.0e}");
            note = Some(match note {
                Some(n) => format!("{breach_msg}; {n}"),
                None => breach_msg,
            });
        }
        self.rows.push(Row {
            label: label.into(),
            value: Some(value),
            reference: Some(reference),
            abs_error: Some(err),
            note,
        });
    }

    fn info(&mut self, label: impl Into<String>, value: f64, note: &str) {
        self.rows.push(Row {
            label: label.into(),
            value: Some(value),
            reference: None,
            abs_error: None,
            note: Some(note.to_string()),
        });
    }
}

fn roots(series: &EnergySeries, count: usize) -> Result<Vec<EigenEstimate>, CliError> {
    (1..=count)
        .map(|n| eigensolve::truncated_root(series, n).map_err(CliError::from))
        .collect()
}

fn check_coefficients(
    gate: &mut Gate,
    series: &EnergySeries,
    reference: &[f64],
    tol: f64,
) {
    for (k, (a, r)) in series.coefficients().iter().zip(reference.iter()).enumerate() {
        gate.check(format!("a_{}", k + 1), *a, *r, tol);
    }
}

fn check_roots(
    gate: &mut Gate,
    series: &EnergySeries,
    reference: &[f64],
    ratios: Option<(&[f64], f64)>,
    tol: f64,
) -> Result<(), CliError> {
    let estimates = roots(series, reference.len())?;
    for (n, (est, r)) in estimates.iter().zip(reference.iter()).enumerate() {
        gate.check(format!("E_{}", n + 1), est.value, *r, tol);
    }
    if let Some((ratio_refs, exact)) = ratios {
        for (n, (est, r)) in estimates.iter().zip(ratio_refs.iter()).enumerate() {
            gate.check(format!("E_{}/E_exact", n + 1), est.value / exact, *r, tol);
        }
    }
    Ok(())
}

fn check_pade_table(
    gate: &mut Gate,
    series: &EnergySeries,
    cells: &[&[f64]],
) -> Result<(), CliError> {
    for (i, row) in cells.iter().enumerate() {
        let n = i + 1;
        let approx = accel::pade_diagonal(series, n)?;
        let levels = accel::levels_from_approximant(&approx);
        for (k, reference) in row.iter().enumerate() {
            let tol = if n == 4 && k == 0 { 1e-4 } else { 1e-3 };
            match levels.get(k) {
                Some(level) => {
                    gate.check(format!("P({n},{n}) E_{k}"), level.value, *reference, tol)
                }
                None => {
                    gate.breach = true;
                    gate.rows.push(Row {
                        label: format!("P({n},{n}) E_{k}"),
                        value: None,
                        reference: Some(*reference),
                        abs_error: None,
                        note: Some("level missing from the approximant".into()),
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_shanks(
    gate: &mut Gate,
    label: &str,
    series: &EnergySeries,
    exact: f64,
    reference: &[f64],
) -> Result<(), CliError> {
    let estimates = roots(series, reference.len() + 2)?;
    let ratios: Vec<f64> = estimates.iter().map(|e| e.value / exact).collect();
    let terms = accel::shanks(&ratios)?;
    for (i, (term, r)) in terms.iter().zip(reference.iter()).enumerate() {
        match term.value() {
            Some(v) => gate.check(format!("{label} S_{}", i + 1), v, *r, 1e-4),
            None => {
                gate.breach = true;
                gate.rows.push(Row {
                    label: format!("{label} S_{}", i + 1),
                    value: None,
                    reference: Some(*r),
                    abs_error: None,
                    note: Some("transform degenerate on this triple".into()),
                });
            }
        }
    }
    Ok(())
}

// -- targets ------------------------------------------------------------------

fn target_coeffs(
    gate: &mut Gate,
    spec: PotentialSpec,
    reference: &[f64],
    tol: f64,
    grid: &GridConfig,
) -> Result<(), CliError> {
    let series = EnergySeries::build(spec, reference.len(), grid)?;
    check_coefficients(gate, &series, reference, tol);
    Ok(())
}

fn target_t1(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let series = EnergySeries::build(PotentialSpec::SquareWell, 6, grid)?;
    let exact = PI * PI / 4.0;
    check_roots(gate, &series, &FLAT_ROOTS, Some((&FLAT_ROOT_RATIOS, exact)), 1e-4)?;
    let estimates = roots(&series, 6)?;
    let (r, _) = eigensolve::error_model(&series, &estimates)?;
    gate.check_noted(
        "fitted error ratio r",
        r,
        0.25,
        0.025,
        Some("geometric model: successive truncation errors shrink by E/R"),
    );
    Ok(())
}

fn target_t2(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let series = EnergySeries::build(PotentialSpec::PowerLaw(2.0), 6, grid)?;
    check_roots(gate, &series, &HARMONIC_ROOTS, None, 1e-4)
}

fn target_t3(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let series = EnergySeries::build(PotentialSpec::PowerLaw(1.0), 6, grid)?;
    let exact = oracles::shooting_level(PotentialSpec::PowerLaw(1.0), 0)?.value;
    gate.check("E_exact (matched)", exact, LINEAR_GROUND, 1e-4);
    check_roots(gate, &series, &LINEAR_ROOTS, Some((&LINEAR_ROOT_RATIOS, exact)), 1e-4)
}

fn target_t4(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let series = EnergySeries::build(PotentialSpec::PowerLaw(4.0), 3, grid)?;
    let exact = oracles::shooting_level(PotentialSpec::PowerLaw(4.0), 0)?.value;
    gate.check("E_exact (matched)", exact, QUARTIC_GROUND, 1e-5);
    check_roots(gate, &series, &QUARTIC_ROOTS, Some((&QUARTIC_ROOT_RATIOS, exact)), 1e-4)?;

    // companion rational-approximant cells for the same potential
    let p11 = accel::pade_diagonal(&series, 1)?;
    let l11 = accel::levels_from_approximant(&p11);
    gate.check("P(1,1) E_0", l11[0].value, QUARTIC_P11_GROUND, 1e-3);
    let p21 = accel::pade_general_from(series.coefficients(), 2, 1)?;
    let l21 = accel::levels_from_approximant(&p21);
    for (k, reference) in QUARTIC_P21_LEVELS.iter().enumerate() {
        match l21.get(k) {
            Some(level) => gate.check(format!("P(2,1) E_{k}"), level.value, *reference, 1e-3),
            None => {
                gate.breach = true;
                gate.rows.push(Row {
                    label: format!("P(2,1) E_{k}"),
                    value: None,
                    reference: Some(*reference),
                    abs_error: None,
                    note: Some("level missing from the approximant".into()),
                });
            }
        }
    }
    Ok(())
}

fn target_s3(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let flat = EnergySeries::build(PotentialSpec::SquareWell, 6, grid)?;
    check_shanks(gate, "square-well", &flat, PI * PI / 4.0, &FLAT_SHANKS)?;
    let harmonic = EnergySeries::build(PotentialSpec::PowerLaw(2.0), 6, grid)?;
    check_shanks(gate, "power:2", &harmonic, 1.0, &HARMONIC_SHANKS)?;
    let linear = EnergySeries::build(PotentialSpec::PowerLaw(1.0), 6, grid)?;
    let e_lin = oracles::shooting_level(PotentialSpec::PowerLaw(1.0), 0)?.value;
    check_shanks(gate, "power:1", &linear, e_lin, &LINEAR_SHANKS)?;
    let quartic = EnergySeries::build(PotentialSpec::PowerLaw(4.0), 3, grid)?;
    let e_qu = oracles::shooting_level(PotentialSpec::PowerLaw(4.0), 0)?.value;
    check_shanks(gate, "power:4", &quartic, e_qu, &[QUARTIC_SHANKS])?;
    Ok(())
}

fn target_s4(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let tol = 1e-5;

    let flat = EnergySeries::build(PotentialSpec::SquareWell, 3, grid)?;
    for (n, reference) in FLAT_EXPECT_RATIOS.iter().enumerate() {
        let h = variational::expectation(&flat, n + 1)?;
        gate.check(
            format!("square-well <H>_{}/E_exact", n + 1),
            h.value / (PI * PI / 4.0),
            *reference,
            tol,
        );
    }

    let harmonic = EnergySeries::build(PotentialSpec::PowerLaw(2.0), 3, grid)?;
    for (n, reference) in HARMONIC_EXPECT_RATIOS.iter().enumerate() {
        let h = variational::expectation(&harmonic, n + 1)?;
        let context = (n == 0).then_some(
            "this cell converges to 1.0039055 under grid refinement, 1.6e-5 from the reference; see README",
        );
        gate.check_noted(
            format!("power:2 <H>_{}/E_exact", n + 1),
            h.value,
            *reference,
            tol,
            context,
        );
    }

    let linear = EnergySeries::build(PotentialSpec::PowerLaw(1.0), 3, grid)?;
    let e_lin = oracles::shooting_level(PotentialSpec::PowerLaw(1.0), 0)?.value;
    for (n, reference) in LINEAR_EXPECT_RATIOS.iter().enumerate() {
        let h = variational::expectation(&linear, n + 1)?;
        gate.check(
            format!("power:1 <H>_{}/E_exact", n + 1),
            h.value / e_lin,
            *reference,
            tol,
        );
    }
    let h3 = variational::expectation(&linear, 3)?;
    gate.info(
        "power:1 <H>_3 (informational)",
        h3.value,
        "unnormalized expectation; the reference table prints 1.019041 in the ratio column, which matches this raw value",
    );
    gate.info(
        "power:1 <H>_3/E_exact (informational)",
        h3.value / e_lin,
        "ratio corresponding to the row above",
    );

    let quartic = EnergySeries::build(PotentialSpec::PowerLaw(4.0), 3, grid)?;
    let e_qu = oracles::shooting_level(PotentialSpec::PowerLaw(4.0), 0)?.value;
    for (n, reference) in QUARTIC_EXPECT_RATIOS.iter().enumerate() {
        let h = variational::expectation(&quartic, n + 1)?;
        gate.check(
            format!("power:4 <H>_{}/E_exact", n + 1),
            h.value / e_qu,
            *reference,
            tol,
        );
    }
    Ok(())
}

fn target_s5(gate: &mut Gate, grid: &GridConfig) -> Result<(), CliError> {
    let base = EnergySeries::build(PotentialSpec::PowerLaw(3.0), 3, grid)?;
    let pt = ptsym::pt_series(base, 3.0)?;
    let e0 = oracles::stokes_line_ground(3.0)?.value;
    gate.check("E_0 (matched)", e0, CUBIC_RAY_GROUND, 1e-5);
    let e: Vec<f64> = (1..=3)
        .map(|n| ptsym::pt_root(&pt, n).map(|r| r.value))
        .collect::<Result<_, _>>()?;
    gate.check("E_1/E_0", e[0] / e0, CUBIC_ROOT_RATIOS[0], 1e-3);
    gate.check("E_2/E_0", e[1] / e0, CUBIC_ROOT_RATIOS[1], 1e-3);
    gate.check_noted(
        "E_3 - E_2",
        e[2] - e[1],
        0.0,
        1e-12,
        Some("third weight vanishes identically, so the root repeats"),
    );
    for n in 1..=2usize {
        let h = ptsym::pt_expectation(&pt, n)?;
        gate.check(format!("<H>_{n}/E_0"), h.value / e0, CUBIC_EXPECT_RATIOS[n - 1], 1e-3);
    }
    Ok(())
}

fn headline_tolerance(table: TableId) -> f64 {
    match table {
        TableId::E18 => 1e-9,
        TableId::E20 | TableId::E22 => 1e-4,
        TableId::E23 => 1e-5,
        TableId::T1 | TableId::T2 | TableId::T3 | TableId::T4 => 1e-4,
        TableId::T5 | TableId::T6 | TableId::T7 => 1e-3,
        TableId::S3Shanks => 1e-4,
        TableId::S4Expect => 1e-5,
        TableId::S5Pt => 1e-3,
    }
}

fn potential_label(table: TableId) -> Option<&'static str> {
    match table {
        TableId::E18 | TableId::T1 | TableId::T5 => Some("square-well"),
        TableId::E20 | TableId::T2 | TableId::T6 => Some("power:2"),
        TableId::E22 | TableId::T3 | TableId::T7 => Some("power:1"),
        TableId::E23 | TableId::T4 => Some("power:4"),
        TableId::S5Pt => Some("ptpower:3"),
        TableId::S3Shanks | TableId::S4Expect => None,
    }
}

/// Recompute one reference table. Returns the full report and whether
/// any cell breached its tolerance.
pub fn run(table: TableId, grid: &GridConfig) -> Result<(Report, bool), CliError> {
    let mut gate = Gate::new();
    match table {
        TableId::E18 => {
            target_coeffs(&mut gate, PotentialSpec::SquareWell, &FLAT_COEFFS, 1e-9, grid)?
        }
        TableId::E20 => {
            target_coeffs(&mut gate, PotentialSpec::PowerLaw(2.0), &HARMONIC_COEFFS, 1e-4, grid)?
        }
        TableId::E22 => {
            target_coeffs(&mut gate, PotentialSpec::PowerLaw(1.0), &LINEAR_COEFFS, 1e-4, grid)?
        }
        TableId::E23 => {
            target_coeffs(&mut gate, PotentialSpec::PowerLaw(4.0), &QUARTIC_COEFFS, 1e-5, grid)?
        }
        TableId::T1 => target_t1(&mut gate, grid)?,
        TableId::T2 => target_t2(&mut gate, grid)?,
        TableId::T3 => target_t3(&mut gate, grid)?,
        TableId::T4 => target_t4(&mut gate, grid)?,
        TableId::T5 => {
            let series = EnergySeries::build(PotentialSpec::SquareWell, 8, grid)?;
            check_pade_table(&mut gate, &series, &FLAT_PADE)?
        }
        TableId::T6 => {
            let series = EnergySeries::build(PotentialSpec::PowerLaw(2.0), 8, grid)?;
            check_pade_table(&mut gate, &series, &HARMONIC_PADE)?
        }
        TableId::T7 => {
            let series = EnergySeries::build(PotentialSpec::PowerLaw(1.0), 8, grid)?;
            check_pade_table(&mut gate, &series, &LINEAR_PADE)?
        }
        TableId::S3Shanks => target_s3(&mut gate, grid)?,
        TableId::S4Expect => target_s4(&mut gate, grid)?,
        TableId::S5Pt => target_s5(&mut gate, grid)?,
    }
    let report = Report {
        meta: Meta {
            command: format!("reproduce {}", table.id()),
            potential: potential_label(table).map(str::to_string),
            grid: *grid,
            tolerance: Some(headline_tolerance(table)),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        rows: gate.rows,
    };
    Ok((report, gate.breach))
}
