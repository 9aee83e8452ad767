//! Sequence acceleration and analytic continuation: the Shanks transform
//! for geometrically converging approximant sequences, and diagonal Pade
//! approximants of f whose zeros (of P - Q) and poles approximate the
//! even- and odd-parity levels.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::eigensolve::{Method, Parity};
use crate::series::EnergySeries;

#[derive(Debug, Error)]
pub enum AccelError {
    #[error("sequence of length {0} is too short for the transform")]
    TooShort(usize),
    #[error("series has {have} coefficients, need {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("Pade linear system is singular at order {0}")]
    SingularPadeSystem(usize),
}

/// One entry of a Shanks-transformed sequence. Denominators below 1e-14
/// in magnitude mark the three-term model as degenerate at that index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShanksTerm {
    Value(f64),
    Degenerate,
}

impl ShanksTerm {
    pub fn value(&self) -> Option<f64> {
        match *self {
            ShanksTerm::Value(v) => Some(v),
            ShanksTerm::Degenerate => None,
        }
    }
}

/// Shanks transform S(A_n) = (A_{n+1} A_{n-1} - A_n^2) / (A_{n+1} + A_{n-1} - 2 A_n),
/// exact on sequences of the form L + c r^n.
pub fn shanks(seq: &[f64]) -> Result<Vec<ShanksTerm>, AccelError> {
    if seq.len() < 3 {
        return Err(AccelError::TooShort(seq.len()));
    }
    let mut out = Vec::with_capacity(seq.len() - 2);
    for i in 1..seq.len() - 1 {
        let den = seq[i + 1] + seq[i - 1] - 2.0 * seq[i];
        if den.abs() < 1e-14 {
            out.push(ShanksTerm::Degenerate);
        } else {
            out.push(ShanksTerm::Value(
                (seq[i + 1] * seq[i - 1] - seq[i] * seq[i]) / den,
            ));
        }
    }
    Ok(out)
}

/// Diagonal Pade approximant of the series sum a_k E^k, with extracted
/// level candidates and filtering diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct PadeApproximant {
    /// Order actually used; smaller than requested only after a singular
    /// system forced a fallback.
    pub order: usize,
    pub requested_order: usize,
    /// Numerator coefficients p_1..p_n; no constant term since f(0) = 0.
    pub num: Vec<f64>,
    /// Denominator coefficients q_0 = 1, q_1..q_n.
    pub den: Vec<f64>,
    /// Real positive roots of the denominator, after Froissart filtering.
    pub poles: Vec<f64>,
    /// Real positive roots of num(E) - den(E).
    pub zeros_of_f_minus_1: Vec<f64>,
    /// Near-coincident pole/zero pairs (pole, zero) dropped as spurious.
    pub froissart_pairs: Vec<(f64, f64)>,
    /// Root candidates (re, im) excluded for having a material imaginary part.
    pub rejected_complex: Vec<(f64, f64)>,
}

// Roots of a real polynomial given coefficients from the constant term
// upward, via the companion matrix. Trailing coefficients at relative
// noise level are trimmed first.
fn poly_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -coeffs[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

// Split complex candidates into accepted real positive values and
// rejected pairs. Imaginary parts below 1e-8 relative count as real.
fn real_positive(roots: &[Complex<f64>]) -> (Vec<f64>, Vec<(f64, f64)>) {
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for z in roots {
        if z.im.abs() <= 1e-8 * z.norm().max(1.0) {
            if z.re > 0.0 {
                accepted.push(z.re);
            }
        } else if z.re > 0.0 {
            rejected.push((z.re, z.im));
        }
    }
    accepted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (accepted, rejected)
}

/// Pade approximant with numerator degree `l` and denominator degree `m`
/// of the series with coefficients `a` (a[0] multiplies E; the constant
/// term of f vanishes). Returns (p_1..p_l, q_0..q_m) or None when the
/// denominator system is singular.
pub fn pade_from_coefficients(a: &[f64], l: usize, m: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    assert!(a.len() >= l + m, "need {} coefficients, have {}", l + m, a.len());
    // c_k are the Taylor coefficients of f including c_0 = 0
    let c = |k: isize| -> f64 {
        if k <= 0 {
            0.0
        } else {
            a[(k - 1) as usize]
        }
    };
    let q = if m == 0 {
        Vec::new()
    } else {
        let mat = DMatrix::<f64>::from_fn(m, m, |r, j| {
            let row_m = (l + 1 + r) as isize;
            c(row_m - (j as isize + 1))
        });
        let rhs = DVector::<f64>::from_fn(m, |r, _| -c((l + 1 + r) as isize));
        let sol = mat.lu().solve(&rhs)?;
        if sol.iter().any(|v| !v.is_finite()) {
            return None;
        }
        sol.iter().copied().collect()
    };
    let mut p = Vec::with_capacity(l);
    for k in 1..=l {
        let mut v = c(k as isize);
        for (j, qj) in q.iter().enumerate().take(k.min(m)) {
            v += qj * c(k as isize - (j as isize + 1));
        }
        p.push(v);
    }
    let mut den = Vec::with_capacity(m + 1);
    den.push(1.0);
    den.extend(q);
    Some((p, den))
}

fn extract(requested: usize, order: usize, num: Vec<f64>, den: Vec<f64>) -> PadeApproximant {
    // zeros of f - 1 solve P(E) - Q(E) = 0
    let mut diff = vec![-den[0]];
    for k in 1..=order {
        let pk = num.get(k - 1).copied().unwrap_or(0.0);
        let qk = den.get(k).copied().unwrap_or(0.0);
        diff.push(pk - qk);
    }
    let (mut zeros, mut rejected) = real_positive(&poly_roots(&diff));
    let (mut poles, rej_poles) = real_positive(&poly_roots(&den));
    rejected.extend(rej_poles);

    // Froissart doublets: a pole nearly cancelled by a zero of the
    // numerator is noise, not a level, and it contaminates the nearby
    // root of P - Q as well
    let num_zeros: Vec<f64> = {
        let (z, _) = real_positive(&poly_roots(&num));
        z
    };
    let mut pairs = Vec::new();
    poles.retain(|&pole| {
        match num_zeros
            .iter()
            .find(|&&z| (z - pole).abs() < 1e-6 * pole.abs())
        {
            Some(&z) => {
                pairs.push((pole, z));
                zeros.retain(|&y| (y - pole).abs() >= 1e-6 * pole.abs());
                false
            }
            None => true,
        }
    });

    PadeApproximant {
        order,
        requested_order: requested,
        num,
        den,
        poles,
        zeros_of_f_minus_1: zeros,
        froissart_pairs: pairs,
        rejected_complex: rejected,
    }
}

/// Diagonal approximant P_n^n from the first 2n series coefficients.
/// A singular linear system falls back to order n - 1 and records the
/// originally requested order.
pub fn pade_diagonal(series: &EnergySeries, n: usize) -> Result<PadeApproximant, AccelError> {
    pade_diagonal_from(series.coefficients(), n)
}

/// Same as [`pade_diagonal`] for a raw coefficient slice.
pub fn pade_diagonal_from(a: &[f64], n: usize) -> Result<PadeApproximant, AccelError> {
    if n == 0 || a.len() < 2 * n {
        return Err(AccelError::InsufficientOrder {
            have: a.len(),
            need: 2 * n.max(1),
        });
    }
    match pade_from_coefficients(a, n, n) {
        Some((num, den)) => Ok(extract(n, n, num, den)),
        None if n > 1 => {
            let mut fb = pade_diagonal_from(a, n - 1)?;
            fb.requested_order = n;
            Ok(fb)
        }
        None => Err(AccelError::SingularPadeSystem(n)),
    }
}

/// Off-diagonal approximant with numerator degree `l`, denominator
/// degree `m`; no fallback.
pub fn pade_general_from(a: &[f64], l: usize, m: usize) -> Result<PadeApproximant, AccelError> {
    if a.len() < l + m {
        return Err(AccelError::InsufficientOrder {
            have: a.len(),
            need: l + m,
        });
    }
    match pade_from_coefficients(a, l, m) {
        Some((num, den)) => Ok(extract(l.max(m), l.max(m), num, den)),
        None => Err(AccelError::SingularPadeSystem(l.max(m))),
    }
}

/// Re-expansion of num/den as a power series, for validating the match
/// against the input coefficients. Returns the first `count` Taylor
/// coefficients of E^1..E^count.
pub fn pade_reexpand(approx: &PadeApproximant, count: usize) -> Vec<f64> {
    // c_k = p_k - sum_{j>=1} q_j c_{k-j}, with p_k = 0 past the numerator
    let mut c = vec![0.0; count + 1];
    for k in 1..=count {
        let mut v = approx.num.get(k - 1).copied().unwrap_or(0.0);
        for j in 1..approx.den.len() {
            if j <= k {
                v -= approx.den[j] * c[k - j];
            }
        }
        c[k] = v;
    }
    c[1..].to_vec()
}

/// One labeled level estimate extracted from an approximant.
#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub index: usize,
    pub parity: Parity,
    pub method: Method,
    pub value: f64,
    pub error_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub pade_order: usize,
    pub levels: Vec<Level>,
}

/// Levels from the diagonal approximants P_1^1 .. P_{n_max}^{n_max},
/// one row per order, mirroring the tabulated layout.
#[derive(Debug, Clone, Serialize)]
pub struct LevelTable {
    pub rows: Vec<LevelRow>,
}

/// The n lowest levels of P_n^n: even-parity levels are zeros of f - 1,
/// odd-parity levels are poles, merged in ascending order.
pub fn levels_from_approximant(approx: &PadeApproximant) -> Vec<Level> {
    let mut merged: Vec<(f64, Parity)> = approx
        .zeros_of_f_minus_1
        .iter()
        .map(|&v| (v, Parity::Even))
        .chain(approx.poles.iter().map(|&v| (v, Parity::Odd)))
        .collect();
    merged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    merged
        .into_iter()
        .take(approx.order)
        .enumerate()
        .map(|(index, (value, parity))| Level {
            index,
            parity,
            method: Method::Pade,
            value,
            error_estimate: None,
        })
        .collect()
}

pub fn level_table(series: &EnergySeries, n_max: usize) -> Result<LevelTable, AccelError> {
    if series.order() < 2 * n_max {
        return Err(AccelError::InsufficientOrder {
            have: series.order(),
            need: 2 * n_max,
        });
    }
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let approx = pade_diagonal(series, n)?;
        rows.push(LevelRow {
            pade_order: n,
            levels: levels_from_approximant(&approx),
        });
    }
    Ok(LevelTable { rows })
}
