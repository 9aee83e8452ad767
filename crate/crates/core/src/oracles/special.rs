//! Special functions for the independent oracles: Gamma, the Airy
//! function of the first kind, and the decaying parabolic-cylinder
//! profile for V = x^2. Implemented in-module so the reference values
//! never depend on the code under test.

use std::f64::consts::PI;

// Lanczos approximation, g = 7, nine coefficients. Relative accuracy is
// about 1e-14 over the arguments used here.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real arguments away from the poles.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection; sin(pi x) vanishes at the poles and the division
        // yields +-inf there, which reciprocal_gamma maps back to zero
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + 7.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Entire reciprocal 1/Gamma(x); exactly zero at the poles of Gamma.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    1.0 / gamma(x)
}

// One Taylor step for y'' = (a + h) y centered at a. Returns (y, y') at
// offset h. The recurrence is (k+2)(k+1) c_{k+2} = a c_k + c_{k-1}.
fn airy_taylor_step(a: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; 82];
    c[0] = y;
    c[1] = dy;
    let mut val = c[0] + c[1] * h;
    let mut der = c[1];
    let mut hk = h; // h^{k+1} entering iteration k
    let mut prev_small = false;
    for k in 0..78 {
        let prev = if k == 0 { 0.0 } else { c[k - 1] };
        c[k + 2] = (a * c[k] + prev) / (((k + 1) * (k + 2)) as f64);
        der += ((k + 2) as f64) * c[k + 2] * hk;
        hk *= h;
        let term = c[k + 2] * hk;
        val += term;
        // Two consecutive negligible terms: a single one can be a zero
        // coefficient of the series rather than convergence.
        let small = term.abs() < 1e-17 * val.abs().max(1e-30);
        if small && prev_small && k > 4 {
            break;
        }
        prev_small = small;
    }
    (val, der)
}

// Asymptotic expansion of Ai and Ai' for large positive z. u_0 = v_0 = 1,
// u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k), v_k = u_k (6k+1)/(1-6k).
fn airy_asymptotic(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let mut u = 1.0;
    let mut sum_u = 1.0;
    let mut sum_v = 1.0;
    let mut sign = 1.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        sign = -sign;
        pow /= zeta;
        let tu = sign * u * pow;
        if tu.abs() > last {
            break; // divergent tail reached
        }
        last = tu.abs();
        sum_u += tu;
        sum_v += sign * v * pow;
        if tu.abs() < 1e-18 {
            break;
        }
    }
    let pre = (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25));
    let dpre = -z.powf(0.25) * (-zeta).exp() / (2.0 * PI.sqrt());
    (pre * sum_u, dpre * sum_v)
}

/// Airy function Ai and its derivative for z in roughly [-8, 40].
///
/// Taylor stepping of y'' = z y outward from the origin covers the
/// oscillatory and moderate range; for z > 2.2 the decaying branch is
/// seeded from the asymptotic series at max(z, 9) and stepped backward,
/// which keeps the growing solution out of the error budget.
pub fn airy_ai(z: f64) -> (f64, f64) {
    let ai0 = 1.0 / (3.0f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0));
    let dai0 = -1.0 / (3.0f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0));
    if z <= 2.2 {
        let (mut y, mut dy) = (ai0, dai0);
        let mut a = 0.0;
        let n = (z.abs() / 0.9).ceil().max(1.0) as usize;
        let h = z / n as f64;
        for _ in 0..n {
            let (ny, ndy) = airy_taylor_step(a, y, dy, h);
            y = ny;
            dy = ndy;
            a += h;
        }
        (y, dy)
    } else {
        let z0 = z.max(9.0);
        let (mut y, mut dy) = airy_asymptotic(z0);
        if z >= 9.0 {
            return (y, dy);
        }
        let mut a = z0;
        let n = ((z0 - z) / 0.9).ceil().max(1.0) as usize;
        let h = (z - z0) / n as f64;
        for _ in 0..n {
            let (ny, ndy) = airy_taylor_step(a, y, dy, h);
            y = ny;
            dy = ndy;
            a += h;
        }
        (y, dy)
    }
}

// One Taylor step for y'' = (a + h)^2 y centered at a. The recurrence is
// (k+2)(k+1) c_{k+2} = a^2 c_k + 2a c_{k-1} + c_{k-2}.
fn cylinder_taylor_step(a: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; 122];
    c[0] = y;
    c[1] = dy;
    let mut val = c[0] + c[1] * h;
    let mut der = c[1];
    let mut hk = h; // h^{k+1} entering iteration k
    let mut prev_small = false;
    for k in 0..118 {
        let cm1 = if k >= 1 { c[k - 1] } else { 0.0 };
        let cm2 = if k >= 2 { c[k - 2] } else { 0.0 };
        c[k + 2] = (a * a * c[k] + 2.0 * a * cm1 + cm2) / (((k + 1) * (k + 2)) as f64);
        der += ((k + 2) as f64) * c[k + 2] * hk;
        hk *= h;
        let term = c[k + 2] * hk;
        val += term;
        let small = term.abs() < 1e-17 * val.abs().max(1e-30);
        if small && prev_small && k > 4 {
            break;
        }
        prev_small = small;
    }
    (val, der)
}

// Decaying solution of y'' = x^2 y seeded from the large-x form
// x^{-1/2} e^{-x^2/2} (1 + sum c_k x^{-2k}), c_k = -c_{k-1}(2k-3/2)(2k-1/2)/(4k).
fn cylinder_seed(x: f64) -> (f64, f64) {
    let mut c = 1.0;
    let mut u = 1.0;
    let mut du = 0.0; // derivative of the correction series
    for k in 1..40 {
        let kf = k as f64;
        c *= -(2.0 * kf - 1.5) * (2.0 * kf - 0.5) / (4.0 * kf);
        let term = c * x.powf(-2.0 * kf);
        if term.abs() < 1e-18 {
            break;
        }
        u += term;
        du += -2.0 * kf * term / x;
    }
    let psi = x.powf(-0.5) * (-0.5 * x * x).exp() * u;
    let dpsi = psi * (-x - 0.5 / x + du / u);
    (psi, dpsi)
}

/// Normalized decaying solution of y'' = x^2 y with y(0) = 1, evaluated
/// at x >= 0. Returns (y, y'). This is D_{-1/2}(x sqrt 2) / D_{-1/2}(0).
pub fn harmonic_profile(x: f64) -> (f64, f64) {
    assert!(x >= 0.0);
    let x0 = 6.0f64.max(x + 1.0);
    let (mut y, mut dy) = cylinder_seed(x0);
    let mut a = x0;
    let mut at_x = None;
    // march to the requested point, then on to the origin
    for target in [x, 0.0] {
        if a > target {
            let n = ((a - target) / 0.4).ceil().max(1.0) as usize;
            let h = (target - a) / n as f64;
            for _ in 0..n {
                let (ny, ndy) = cylinder_taylor_step(a, y, dy, h);
                y = ny;
                dy = ndy;
                a += h;
            }
            a = target;
        }
        if at_x.is_none() {
            at_x = Some((y, dy));
        }
    }
    let (yx, dyx) = at_x.unwrap();
    (yx / y, dyx / y)
}
