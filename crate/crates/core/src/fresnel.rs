//! Reflection and transmission coefficients of a uniaxial half-space or slab.
//!
//! Four parametrisations are provided: real frequency and in-plane wave number,
//! imaginary frequency `(ξ, k)`, the polar variables `(x, y)` of the shift
//! integrals, and the `κ` variable of the residue contour.
//!
//! Imaginary-axis coefficients are built from `χ(iξ)ξ²` and `1/ε(iξ)`, so
//! conductors at `ξ = 0` give their finite limits without special cases.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::material::Material;
use crate::specfun::sqrt_upper;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    TE,
    TM,
}

/// Single-interface coefficients at real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceCoeffs {
    pub r_te: Complex64,
    pub r_tm: Complex64,
    pub t_te: Complex64,
    pub t_tm: Complex64,
    /// Normal wave number in vacuum.
    pub kz: Complex64,
    pub kzd_te: Complex64,
    pub kzd_tm: Complex64,
}

impl InterfaceCoeffs {
    pub fn r(&self, p: Polarization) -> Complex64 {
        match p {
            Polarization::TE => self.r_te,
            Polarization::TM => self.r_tm,
        }
    }
}

/// Slab coefficients at real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabCoeffs {
    pub r_te: Complex64,
    pub r_tm: Complex64,
    pub t_te: Complex64,
    pub t_tm: Complex64,
}

/// Imaginary-axis coefficients together with the medium normal wave numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ImagAxis {
    pub r_te: f64,
    pub r_tm: f64,
    pub kzd_te: f64,
    pub kzd_tm: f64,
}

/// Coefficients at imaginary frequency `ξ` for total wave number `ρ = √(ξ² + k²) > 0`.
pub(crate) fn imag_axis(m: &Material, xi: f64, rho: f64) -> ImagAxis {
    let d_par = m.parallel.susceptibility_xi2(xi);
    let d_perp = m.perpendicular.susceptibility_xi2(xi);
    let root_te = (rho * rho + d_par).sqrt();
    let root_perp = (rho * rho + d_perp).sqrt();
    let r_te = -d_par / ((rho + root_te) * (rho + root_te));
    let inv_root = (m.parallel.inverse_imag_axis(xi) * m.perpendicular.inverse_imag_axis(xi)).sqrt();
    let u = root_perp / rho * inv_root;
    let r_tm = (1.0 - u) / (1.0 + u);
    let ratio = m.eps_ratio_imag_axis(xi);
    ImagAxis {
        r_te,
        r_tm,
        kzd_te: root_te,
        kzd_tm: ratio.sqrt() * root_perp,
    }
}

/// Slab reflection `r(1 − e)/(1 − r²e)` with `e = exp(−2·kzd·L)`.
pub(crate) fn slab_factor(r: f64, kzd_l: f64) -> f64 {
    let two = 2.0 * kzd_l;
    if two.is_infinite() {
        return r;
    }
    let e = (-two).exp();
    let one_minus_e = -(-two).exp_m1();
    if one_minus_e == 0.0 {
        return 0.0;
    }
    r * one_minus_e / (one_minus_e + e * (1.0 - r) * (1.0 + r))
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn check_pos(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// `(r̄_TE, r̄_TM)` at imaginary frequency `ω` and in-plane wave number `k`.
pub fn halfspace_imag_axis(m: &Material, omega: f64, k: f64) -> Result<(f64, f64)> {
    check_nonneg("omega", omega)?;
    check_nonneg("k", k)?;
    if omega == 0.0 && k == 0.0 {
        return Err(invalid("(omega, k)", "must not both vanish"));
    }
    let c = imag_axis(m, omega, omega.hypot(k));
    Ok((c.r_te, c.r_tm))
}

/// `(r̃_TE, r̃_TM)` in the polar variables: `ξ = x·y·ω_mg`, total wave number `x·ω_mg`.
pub fn halfspace_xy(m: &Material, omega_mg: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    check_pos("omega_mg", omega_mg)?;
    check_pos("x", x)?;
    if !(0.0..=1.0).contains(&y) {
        return Err(invalid("y", format!("must lie in [0, 1], got {y}")));
    }
    let c = imag_axis(m, x * y * omega_mg, x * omega_mg);
    Ok((c.r_te, c.r_tm))
}

/// `(R̄_TE, R̄_TM)` of a slab of thickness `L` at imaginary frequency.
pub fn slab_imag_axis(m: &Material, thickness: f64, omega: f64, k: f64) -> Result<(f64, f64)> {
    check_pos("L", thickness)?;
    check_nonneg("omega", omega)?;
    check_nonneg("k", k)?;
    if omega == 0.0 && k == 0.0 {
        return Err(invalid("(omega, k)", "must not both vanish"));
    }
    let c = imag_axis(m, omega, omega.hypot(k));
    Ok((
        slab_factor(c.r_te, c.kzd_te * thickness),
        slab_factor(c.r_tm, c.kzd_tm * thickness),
    ))
}

/// TM medium normal wave number `√(ε∥/ε⊥)·√(ε⊥·s − q²)`, sign chosen so that `Im ≥ 0`.
fn kzd_tm(eps_par: Complex64, eps_perp: Complex64, perp_arg: Complex64) -> Complex64 {
    let k = sqrt_upper(eps_par / eps_perp) * sqrt_upper(perp_arg);
    if k.im < 0.0 {
        -k
    } else {
        k
    }
}

/// Single-interface coefficients at real frequency `ω` and in-plane wave number `q`.
pub fn halfspace_real_freq(m: &Material, omega: f64, q_par: f64) -> Result<InterfaceCoeffs> {
    check_pos("omega", omega)?;
    check_nonneg("q_par", q_par)?;
    let ep = m.parallel.eval_real_axis(omega)?;
    let eq = m.perpendicular.eval_real_axis(omega)?;
    let w2 = omega * omega;
    let q2 = q_par * q_par;
    let kz = sqrt_upper(Complex64::new(w2 - q2, 0.0));
    if m.is_vacuum() {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        return Ok(InterfaceCoeffs {
            r_te: zero,
            r_tm: zero,
            t_te: one,
            t_tm: one,
            kz,
            kzd_te: kz,
            kzd_tm: kz,
        });
    }
    let kzd_te = sqrt_upper(ep * w2 - q2);
    let kzd_tm = kzd_tm(ep, eq, eq * w2 - q2);
    let r_te = (kz - kzd_te) / (kz + kzd_te);
    let r_tm = (ep * kz - kzd_tm) / (ep * kz + kzd_tm);
    let t_te = kz * 2.0 / (kz + kzd_te);
    let t_tm = sqrt_upper(ep) * kz * 2.0 / (ep * kz + kzd_tm);
    Ok(InterfaceCoeffs {
        r_te,
        r_tm,
        t_te,
        t_tm,
        kz,
        kzd_te,
        kzd_tm,
    })
}

/// Slab reflection and transmission at real frequency.
pub fn slab_real_freq(m: &Material, thickness: f64, omega: f64, q_par: f64) -> Result<SlabCoeffs> {
    check_pos("L", thickness)?;
    let c = halfspace_real_freq(m, omega, q_par)?;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let phase_out = (-i * c.kz * thickness).exp();
    let slab = |r: Complex64, kzd: Complex64| {
        let e2 = (i * kzd * (2.0 * thickness)).exp();
        let den = one - r * r * e2;
        let big_r = r * (one - e2) * phase_out / den;
        let big_t = (one - r * r) * (i * (kzd - c.kz) * thickness).exp() / den;
        (big_r, big_t)
    };
    let (r_te, t_te) = slab(c.r_te, c.kzd_te);
    let (r_tm, t_tm) = slab(c.r_tm, c.kzd_tm);
    Ok(SlabCoeffs { r_te, r_tm, t_te, t_tm })
}

/// `(r_TE, r_TM)` as functions of the contour variable `κ`, with `ε` taken at real frequency `|ω|`.
pub fn halfspace_kappa(m: &Material, omega_abs: f64, kappa: Complex64) -> Result<(Complex64, Complex64)> {
    check_pos("omega_abs", omega_abs)?;
    let ep = m.parallel.eval_real_axis(omega_abs)?;
    let eq = m.perpendicular.eval_real_axis(omega_abs)?;
    Ok(kappa_coeffs(ep, eq, kappa))
}

pub(crate) fn kappa_coeffs(ep: Complex64, eq: Complex64, kappa: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let k2 = kappa * kappa;
    let a = sqrt_upper(ep - one + k2);
    let r_te = (kappa - a) / (kappa + a);
    let b = kzd_tm(ep, eq, eq - one + k2);
    let r_tm = (ep * kappa - b) / (ep * kappa + b);
    (r_te, r_tm)
}
