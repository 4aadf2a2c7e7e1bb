//! Branch-safe square root, Gauss hypergeometric function, and the real
//! arctan/arctanh continuation that appears in the lossless-plasma closed forms.

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Square root with `Im(w) ≥ 0`; non-negative real roots for `z ≥ 0`.
///
/// Uses the cancellation-free form of the principal root and then flips
/// the sign when the principal root lies in the lower half-plane.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    if x == 0.0 && y == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let t = ((x.abs() + x.hypot(y)) * 0.5).sqrt();
    let w = if x >= 0.0 {
        Complex64::new(t, y / (2.0 * t))
    } else {
        Complex64::new(y.abs() / (2.0 * t), t.copysign(y))
    };
    if w.im < 0.0 || (w.im == 0.0 && w.im.is_sign_negative()) {
        -w
    } else {
        w
    }
}

fn is_nonpositive_integer(c: f64) -> bool {
    c <= 0.0 && c.fract() == 0.0
}

fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        n += 1.0;
        if term == 0.0 || (term.abs() <= 1e-17 * sum.abs() && n > 2.0) {
            return sum;
        }
        if n > 1.0e6 {
            return sum;
        }
    }
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real arguments with `z < 1`.
///
/// Direct series for `z ≥ −1/2`, Pfaff transformation `z → z/(z−1)` below.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(domain("hyp2f1", "non-finite argument"));
    }
    if is_nonpositive_integer(c) {
        return Err(domain("hyp2f1", format!("c = {c} is a non-positive integer")));
    }
    if z >= 1.0 {
        return Err(domain("hyp2f1", format!("z = {z} must be < 1")));
    }
    if z >= -0.5 {
        return Ok(series_2f1(a, b, c, z));
    }
    let w = z / (z - 1.0);
    let terminates = |p: f64| is_nonpositive_integer(p);
    if terminates(c - a) && !terminates(a) && !terminates(c - b) {
        Ok((1.0 - z).powf(-b) * series_2f1(c - a, b, c, w))
    } else {
        Ok((1.0 - z).powf(-a) * series_2f1(a, c - b, c, w))
    }
}

/// `atan(√u)/√u`, continued to `artanh(√−u)/√−u` for `−1 < u < 0`.
///
/// `one_plus_u` must equal `1 + u`; callers pass it separately so that it
/// keeps full relative precision when `u` is close to `−1`.
pub(crate) fn atan_ratio(u: f64, one_plus_u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut sum = 0.0;
        let mut p = 1.0;
        for k in 0..24 {
            sum += p / (2 * k + 1) as f64;
            p *= -u;
        }
        sum
    } else if u > 0.0 {
        let s = u.sqrt();
        s.atan() / s
    } else {
        let s = (-u).sqrt();
        // artanh(s) = ½ ln((1+s)/(1−s)) with 1 − s = (1 + u)/(1 + s)
        let one_minus_s = one_plus_u / (1.0 + s);
        0.5 * ((1.0 + s) / one_minus_s).ln() / s
    }
}

/// `√(1−ω̃²)·[arctan(s/√(1−ω̃²)) − arctan(ω̃/√(1−ω̃²))]`, real-continued to `ω̃ ≥ 1`.
///
/// Written as `a²[φ(a²/ω̃²)/ω̃ − φ(a²/s²)/s]` with `a² = 1 − ω̃²` and
/// `φ(u) = atan(√u)/√u`, which is smooth across `ω̃ = 1` (where it vanishes).
pub fn arctan_cont(omega_tilde: f64, s: f64) -> f64 {
    let w2 = omega_tilde * omega_tilde;
    let a2 = 1.0 - w2;
    let high = if s.is_infinite() {
        0.0
    } else {
        let s2 = s * s;
        atan_ratio(a2 / s2, (s2 - w2 + 1.0) / s2) / s
    };
    a2 * (atan_ratio(a2 / w2, 1.0 / w2) / omega_tilde - high)
}

/// `√(1−ω̃²)·arccot(ω̃/√(1−ω̃²))` on the principal branch, real-continued to `ω̃ ≥ 1`.
pub fn arccot_cont(omega_tilde: f64) -> f64 {
    arctan_cont(omega_tilde, f64::INFINITY)
}
