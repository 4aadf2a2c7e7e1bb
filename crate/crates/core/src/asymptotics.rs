//! Closed-form nonretarded and retarded expansions.
//!
//! Conductivities, plasma frequencies and distances are in units of `ω_ref`
//! (so `σZ` and `Zω_P` are dimensionless). Nothing here picks a regime
//! automatically; every result carries the regime it was derived for.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::material::{AxisResponse, Material, MaybeInfinite};
use crate::quadrature::{integrate_interval, QuadResult, QuadSpec};
use crate::shifts::{Geometry, Transition};
use crate::specfun::{arccot_cont, hyp2f1, sqrt_upper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Nonretarded,
    Retarded,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Nonretarded => "nonretarded",
            RegimeTag::Retarded => "retarded",
        }
    }
}

impl std::fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResult {
    pub f_par: f64,
    pub f_perp: f64,
    pub terms_used: u32,
    pub regime_tag: RegimeTag,
}

/// Residue shift and decay-rate change from a closed-form expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitedExpansion {
    pub delta_e_star: f64,
    pub delta_gamma: f64,
    pub terms_used: u32,
    pub regime_tag: RegimeTag,
}

/// Retarded-regime coefficients of the `1/√(σZ)` and `1/(σZ)` corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedCoefficients {
    pub c92_par: f64,
    pub c92_perp: f64,
    pub c5_par: f64,
    pub c5_perp: f64,
}

fn pos(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

fn at_least_one(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 1.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and >= 1, got {v}")));
    }
    Ok(())
}

/// Image factor `(√(ε∥ε⊥) − 1)/(√(ε∥ε⊥) + 1)` at imaginary frequency `iξ`.
pub fn image_factor(m: &Material, xi: f64) -> f64 {
    let s = (m.parallel.inverse_imag_axis(xi) * m.perpendicular.inverse_imag_axis(xi)).sqrt();
    (1.0 - s) / (1.0 + s)
}

/// `∫₀^∞ dω ω_mg/(ω² + ω_mg²)·η(iω)` with `η` the image factor, by quadrature over `ω = ω_mg·tanθ`.
pub fn nr_image_shift_coefficient(m: &Material, omega_mg: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    m.validate()?;
    pos("omega_mg", omega_mg)?;
    spec.validate()?;
    if m.is_vacuum() {
        return Ok(QuadResult::exact(0.0));
    }
    Ok(integrate_interval(|th| image_factor(m, omega_mg * th.tan()), 0.0, FRAC_PI_2, spec))
}

fn three_term(c: &RetardedCoefficients, sigma_z: f64) -> ExpansionResult {
    let r = sigma_z.sqrt();
    ExpansionResult {
        f_par: 0.5 * (1.0 - c.c92_par / r + c.c5_par / sigma_z),
        f_perp: 0.5 * (1.0 - c.c92_perp / r + c.c5_perp / sigma_z),
        terms_used: 3,
        regime_tag: RegimeTag::Retarded,
    }
}

fn two_term(c5_par: f64, c5_perp: f64, zw: f64) -> ExpansionResult {
    ExpansionResult {
        f_par: 0.5 * (1.0 - c5_par / zw),
        f_perp: 0.5 * (1.0 - c5_perp / zw),
        terms_used: 2,
        regime_tag: RegimeTag::Retarded,
    }
}

/// Coefficients for a lossy conductor along both axes, in the convention
/// `F ≈ ½[1 − C_{9/2}/√(σZ) + C_5/(σZ)]`.
pub fn conductor_hs_coefficients() -> RetardedCoefficients {
    let s = FRAC_PI_2.sqrt();
    RetardedCoefficients {
        c92_par: 21.0 / 16.0 * s,
        c92_perp: 7.0 / 12.0 * s,
        c5_par: 9.0 / 4.0,
        c5_perp: 0.5,
    }
}

/// Lossy conductor along both axes.
pub fn ret_f_conductor_hs(sigma0_par: f64, z: f64) -> Result<ExpansionResult> {
    pos("sigma0_par", sigma0_par)?;
    pos("Z", z)?;
    Ok(three_term(&conductor_hs_coefficients(), sigma0_par * z))
}

/// Undamped conductor along both axes.
pub fn ret_f_conductor_lossless_hs(omega_p_par: f64, z: f64) -> Result<ExpansionResult> {
    pos("omega_p_par", omega_p_par)?;
    pos("Z", z)?;
    Ok(two_term(2.0, 0.8, z * omega_p_par))
}

/// Coefficients for a lossy conductor along ∥ and a dielectric along ⊥, in the convention
/// `F ≈ ½ − C_{9/2}/√(σZ) + C_5/(σZ)`.
pub fn conductor_dielectric_coefficients(n_perp: f64) -> Result<RetardedCoefficients> {
    at_least_one("n_perp", n_perp)?;
    let s = FRAC_PI_2.sqrt();
    let n = n_perp;
    let x = 1.0 - n * n;
    let n2 = n * n;
    Ok(RetardedCoefficients {
        c92_par: s * (21.0 / 64.0 + 35.0 / 64.0 / n * hyp2f1(-0.5, 0.75, 1.75, x)?),
        c92_perp: s * 5.0 / 8.0 / n * hyp2f1(-0.5, 0.75, 2.75, x)?,
        c5_par: 3.0 / 8.0 * (3.0 * n2 + 1.0) / n2,
        c5_perp: (n2 + 2.0) / (4.0 * n2),
    })
}

/// Lossy conductor along ∥, nondispersive dielectric along ⊥.
pub fn ret_f_conductor_dielectric_hs(sigma0_par: f64, n_perp: f64, z: f64) -> Result<ExpansionResult> {
    pos("sigma0_par", sigma0_par)?;
    pos("Z", z)?;
    let c = conductor_dielectric_coefficients(n_perp)?;
    let sz = sigma0_par * z;
    Ok(ExpansionResult {
        f_par: 0.5 - c.c92_par / sz.sqrt() + c.c5_par / sz,
        f_perp: 0.5 - c.c92_perp / sz.sqrt() + c.c5_perp / sz,
        terms_used: 3,
        regime_tag: RegimeTag::Retarded,
    })
}

/// `(C∥_5, C⊥_5)` for an undamped conductor along ∥ and a dielectric along ⊥, in the
/// convention `F ≈ ½ − C_5/(Zω_P)`.
pub fn plasma_dielectric_coefficients(n_perp: f64) -> Result<(f64, f64)> {
    at_least_one("n_perp", n_perp)?;
    let n = n_perp;
    let par = 1.0 + 1.0 / (2.0 * n * (n + 1.0));
    let perp = (2.0 * n * n * n + 4.0 * n * n + 6.0 * n + 3.0) / (5.0 * n * (n + 1.0) * (n + 1.0));
    Ok((par, perp))
}

pub fn ret_f_plasma_dielectric_hs(omega_p_par: f64, n_perp: f64, z: f64) -> Result<ExpansionResult> {
    pos("omega_p_par", omega_p_par)?;
    pos("Z", z)?;
    let (a, b) = plasma_dielectric_coefficients(n_perp)?;
    let zw = z * omega_p_par;
    Ok(ExpansionResult {
        f_par: 0.5 - a / zw,
        f_perp: 0.5 - b / zw,
        terms_used: 2,
        regime_tag: RegimeTag::Retarded,
    })
}

/// Small-distance limit for a lossless plasma along ∥ over vacuum along ⊥.
pub fn nr_f_plasma(omega_p_tilde: f64, z_omega: f64) -> Result<ExpansionResult> {
    pos("omega_p_tilde", omega_p_tilde)?;
    pos("z_omega", z_omega)?;
    let w = omega_p_tilde;
    let k = arccot_cont(w);
    let bracket = PI / 8.0 + 1.0 / (2.0 * w) - PI / (4.0 * w * w) + k / (2.0 * w * w);
    Ok(ExpansionResult {
        f_par: z_omega * bracket,
        f_perp: z_omega * 2.0 * bracket,
        terms_used: 1,
        regime_tag: RegimeTag::Nonretarded,
    })
}

/// Large-distance series for a lossless plasma along ∥ over vacuum along ⊥.
pub fn ret_f_plasma(omega_p_tilde: f64, z_omega: f64) -> Result<ExpansionResult> {
    pos("omega_p_tilde", omega_p_tilde)?;
    pos("z_omega", z_omega)?;
    let w = omega_p_tilde;
    let (w2, w3) = (w * w, w * w * w);
    let u = 1.0 / z_omega;
    let par = 0.5 - 5.0 / (4.0 * w) * u + (5.0 - 2.0 * w2) / (2.0 * w2) * u * u
        + (162.0 * w2 - 105.0) / (32.0 * w3) * u * u * u;
    let perp = 0.5 - 3.0 / (4.0 * w) * u + (2.0 - w2) / (2.0 * w2) * u * u + (30.0 * w2 - 15.0) / (16.0 * w3) * u * u * u;
    Ok(ExpansionResult {
        f_par: par,
        f_perp: perp,
        terms_used: 4,
        regime_tag: RegimeTag::Retarded,
    })
}

/// Thin lossy-conductor slab at retarded distances; argument is `L·σ∥(0)`.
pub fn ret_f_slab_conductor(l_sigma0: f64) -> Result<ExpansionResult> {
    pos("L_sigma0", l_sigma0)?;
    let u = l_sigma0;
    let par_brace = if u < 0.1 {
        // 1/(2u²) − 1/(8u) − ln(1+u/2)/u³ expanded to avoid cancellation
        let mut s = 0.0;
        let mut p = 1.0 / 8.0;
        for k in 3..40 {
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            s += sign * p / k as f64;
            p *= u / 2.0;
        }
        s + u / 16.0 * (2.0 / u).ln_1p()
    } else {
        1.0 / (2.0 * u * u) - 1.0 / (8.0 * u) + u / 16.0 * (2.0 / u).ln_1p() - (u / 2.0).ln_1p() / (u * u * u)
    };
    let v = 2.0 / u;
    let perp_brace = if v < 0.1 {
        let mut s = v.ln_1p();
        let mut p = v;
        for k in 3..40 {
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            s += sign * p / k as f64;
            p *= v;
        }
        s
    } else {
        (u - 1.0) / 2.0 + (1.0 - u * u / 4.0) * v.ln_1p()
    };
    Ok(ExpansionResult {
        f_par: 0.125 + 3.0 * par_brace,
        f_perp: 3.0 / 8.0 * u * perp_brace,
        terms_used: 1,
        regime_tag: RegimeTag::Retarded,
    })
}

/// Thin dielectric slab at retarded distances.
pub fn ret_f_slab_dielectric(eps_par0: f64, eps_perp0: f64, l_over_z: f64) -> Result<ExpansionResult> {
    at_least_one("eps_par0", eps_par0)?;
    at_least_one("eps_perp0", eps_perp0)?;
    pos("L_over_Z", l_over_z)?;
    Ok(ExpansionResult {
        f_par: l_over_z * (0.45 * eps_par0 - 0.25 / eps_perp0 - 0.2),
        f_perp: l_over_z * (0.5 * eps_par0 - 0.4 / eps_perp0 - 0.1),
        terms_used: 1,
        regime_tag: RegimeTag::Retarded,
    })
}

fn downward(t: &Transition) -> Result<f64> {
    t.validate()?;
    if t.omega_mi >= 0.0 {
        return Err(invalid("omega_mi", "residue terms exist only for downward transitions (omega_mi < 0)"));
    }
    Ok(t.omega_mi.abs())
}

/// Residue shift and rate change of a downward transition at small `Z|ω|`.
pub fn excited_nr_hs(t: &Transition, m: &Material, z: f64) -> Result<ExcitedExpansion> {
    let w = downward(t)?;
    m.validate()?;
    pos("Z", z)?;
    let prod = m.parallel.eval_real_axis(w)? * m.perpendicular.eval_real_axis(w)?;
    let root = sqrt_upper(prod);
    let den = (root + 1.0).norm_sqr();
    let weight = t.mu_par_sq + 2.0 * t.mu_perp_sq;
    let z3 = z * z * z;
    Ok(ExcitedExpansion {
        delta_e_star: -(prod.norm() - 1.0) / den * weight / (32.0 * PI * z3),
        delta_gamma: root.im / den * weight / (8.0 * PI * z3),
        terms_used: 1,
        regime_tag: RegimeTag::Nonretarded,
    })
}

/// Residue shift and rate change of a downward transition at large `Z|ω|`; depends on `ε∥` only.
pub fn excited_ret_hs(t: &Transition, m: &Material, z: f64) -> Result<ExcitedExpansion> {
    let w = downward(t)?;
    m.validate()?;
    pos("Z", z)?;
    let n: Complex64 = sqrt_upper(m.parallel.eval_real_axis(w)?);
    let a = n.norm_sqr() - 1.0;
    let b = 2.0 * n.im;
    let phi = 2.0 * w * z;
    let (s, c) = phi.sin_cos();
    let pref = w * w * w / (n + 1.0).norm_sqr();
    let shift = pref / (4.0 * PI)
        * ((a * c - b * s) * t.mu_par_sq / phi - 2.0 * (a * s + b * c) * t.mu_perp_sq / (phi * phi));
    let gamma = -pref / (2.0 * PI)
        * ((a * s + b * c) * t.mu_par_sq / phi + 2.0 * (a * c - b * s) * t.mu_perp_sq / (phi * phi));
    Ok(ExcitedExpansion {
        delta_e_star: shift,
        delta_gamma: gamma,
        terms_used: 2,
        regime_tag: RegimeTag::Retarded,
    })
}

fn is_lossy_conductor(a: &AxisResponse) -> bool {
    a.is_conductor() && matches!(a.static_conductivity(), Ok(MaybeInfinite::Finite(_)))
}

fn is_lossless_conductor(a: &AxisResponse) -> bool {
    a.is_conductor() && matches!(a.static_conductivity(), Ok(MaybeInfinite::Infinite))
}

/// Retarded `F∥`, `F⊥` of one transition from the expansion that covers `m` and `g`.
///
/// `m`, the slab thickness and `z` are in units of `ω_ref`; `omega_abs` is `|ω_mi|`.
///
/// | geometry  | ∥ axis          | ⊥ axis                  | expansion                        |
/// |-----------|-----------------|-------------------------|----------------------------------|
/// | half-space| lossy conductor | lossy conductor         | [`ret_f_conductor_hs`]           |
/// | half-space| lossy conductor | finite `ε(0)`           | [`ret_f_conductor_dielectric_hs`]|
/// | half-space| lossless plasma | lossless plasma         | [`ret_f_conductor_lossless_hs`]  |
/// | half-space| lossless plasma | vacuum                  | [`ret_f_plasma`]                 |
/// | half-space| lossless plasma | finite `ε(0)`           | [`ret_f_plasma_dielectric_hs`]   |
/// | slab      | lossy conductor | any                     | [`ret_f_slab_conductor`]         |
/// | slab      | finite `ε(0)`   | finite `ε(0)`           | [`ret_f_slab_dielectric`]        |
pub fn retarded_f(m: &Material, g: &Geometry, omega_abs: f64, z: f64) -> Result<ExpansionResult> {
    m.validate()?;
    g.validate()?;
    pos("omega_abs", omega_abs)?;
    pos("Z", z)?;
    let (par, perp) = (&m.parallel, &m.perpendicular);
    let sigma = |a: &AxisResponse| a.static_conductivity().map(MaybeInfinite::to_f64);
    let eps0 = |a: &AxisResponse| a.static_epsilon().finite();
    let plasma = |a: &AxisResponse| a.oscillator().map_or(0.0, |(wp, _, _)| wp);
    match *g {
        Geometry::HalfSpace if is_lossy_conductor(par) => {
            if is_lossy_conductor(perp) {
                ret_f_conductor_hs(sigma(par)?, z)
            } else if let Some(e) = eps0(perp) {
                ret_f_conductor_dielectric_hs(sigma(par)?, e.sqrt(), z)
            } else {
                Err(Error::NotImplemented("retarded expansion for a lossy conductor over a lossless one"))
            }
        }
        Geometry::HalfSpace if is_lossless_conductor(par) => {
            let wp = plasma(par);
            if is_lossless_conductor(perp) {
                ret_f_conductor_lossless_hs(wp, z)
            } else if perp.is_vacuum() {
                ret_f_plasma(wp / omega_abs, z * omega_abs)
            } else if let Some(e) = eps0(perp) {
                ret_f_plasma_dielectric_hs(wp, e.sqrt(), z)
            } else {
                Err(Error::NotImplemented("retarded expansion for a lossless plasma over a lossy conductor"))
            }
        }
        Geometry::HalfSpace => Err(Error::NotImplemented(
            "retarded half-space expansion for a non-conducting parallel axis",
        )),
        Geometry::Slab { thickness } if is_lossy_conductor(par) => ret_f_slab_conductor(thickness * sigma(par)?),
        Geometry::Slab { thickness } => match (eps0(par), eps0(perp)) {
            (Some(a), Some(b)) => ret_f_slab_dielectric(a, b, thickness / z),
            _ => Err(Error::NotImplemented("retarded slab expansion for a lossless conductor")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn image_coefficient_limits() {
        let spec = QuadSpec::default();
        let v = nr_image_shift_coefficient(&Material::vacuum(), 1.0, &spec).unwrap();
        assert_eq!(v.value, 0.0);
        let m = Material::new(AxisResponse::dielectric(2.0).unwrap(), AxisResponse::Vacuum).unwrap();
        let v = nr_image_shift_coefficient(&m, 1.0, &spec).unwrap();
        assert!(close(v.value, PI / 6.0, 1e-13));
        let m = Material::isotropic(AxisResponse::lossless_plasma(1e9).unwrap()).unwrap();
        let v = nr_image_shift_coefficient(&m, 1.0, &spec).unwrap();
        assert!(close(v.value, FRAC_PI_2, 1e-7));
    }

    #[test]
    fn conductor_examples() {
        let r = ret_f_conductor_hs(100.0, 1.0).unwrap();
        assert!(close(r.f_par, 0.4290, 5e-5));
        assert!(close(r.f_perp, 0.46595, 5e-5));
        let r = ret_f_conductor_hs(1e12, 1.0).unwrap();
        assert!(close(r.f_par, 0.5, 1e-5) && close(r.f_perp, 0.5, 1e-5));
        let r = ret_f_conductor_lossless_hs(20.0, 1.0).unwrap();
        assert!(close(r.f_par, 0.45, 1e-15) && close(r.f_perp, 0.48, 1e-15));
    }

    #[test]
    fn conductor_dielectric_at_unit_index() {
        let c = conductor_dielectric_coefficients(1.0).unwrap();
        let s = FRAC_PI_2.sqrt();
        assert!(close(c.c92_par, 7.0 / 8.0 * s, 1e-15));
        assert!(close(c.c92_perp, 5.0 / 8.0 * s, 1e-15));
        assert_eq!(c.c5_par, 1.5);
        assert_eq!(c.c5_perp, 0.75);
    }

    #[test]
    fn conductor_dielectric_large_index() {
        let a = conductor_dielectric_coefficients(30.0).unwrap();
        let b = conductor_dielectric_coefficients(60.0).unwrap();
        assert!((a.c92_par - b.c92_par).abs() < 1e-2 && (a.c92_perp - b.c92_perp).abs() < 1e-2);
        assert!(a.c92_perp > 0.0);
    }

    #[test]
    fn plasma_dielectric_examples() {
        assert_eq!(plasma_dielectric_coefficients(1.0).unwrap(), (1.25, 0.75));
        assert!(close(plasma_dielectric_coefficients(2.0).unwrap().0, 13.0 / 12.0, 1e-15));
        let (a, b) = plasma_dielectric_coefficients(1e8).unwrap();
        assert!(close(a, 1.0, 1e-7) && close(b, 0.4, 1e-7));
        assert!(plasma_dielectric_coefficients(0.5).is_err());
    }

    #[test]
    fn plasma_series_match_unit_index_coefficients() {
        let (a, b) = plasma_dielectric_coefficients(1.0).unwrap();
        let z = 1e7;
        let r = ret_f_plasma(1.0, z).unwrap();
        let d = ret_f_plasma_dielectric_hs(1.0, 1.0, z).unwrap();
        assert!(close((0.5 - r.f_par) * z, a, 1e-6) && close((0.5 - d.f_par) * z, a, 1e-6));
        assert!(close((0.5 - r.f_perp) * z, b, 1e-6) && close((0.5 - d.f_perp) * z, b, 1e-6));
    }

    #[test]
    fn nr_plasma_limits() {
        let r = nr_f_plasma(1e10, 1.0).unwrap();
        assert!(close(r.f_par, PI / 8.0, 1e-7) && close(r.f_perp, PI / 4.0, 1e-7));
        let r = nr_f_plasma(1e-3, 1.0).unwrap();
        assert!(r.f_par.abs() < 1e-2 && r.f_perp.abs() < 2e-2);
        assert_eq!(r.f_perp, 2.0 * r.f_par);
        let lo = nr_f_plasma(1.0 - 1e-9, 1.0).unwrap().f_par;
        let hi = nr_f_plasma(1.0 + 1e-9, 1.0).unwrap().f_par;
        assert!((lo - hi).abs() < 1e-8);
    }

    #[test]
    fn ret_plasma_limit() {
        let r = ret_f_plasma(2.0, 1e12).unwrap();
        assert!(close(r.f_par, 0.5, 1e-11) && close(r.f_perp, 0.5, 1e-11));
    }

    #[test]
    fn slab_conductor_examples() {
        let r = ret_f_slab_conductor(1.0).unwrap();
        let direct = 0.125 + 3.0 * (0.5 - 0.125 + 3f64.ln() / 16.0 - 1.5f64.ln());
        assert!(close(r.f_par, direct, 1e-15));
        assert!(close(r.f_par, 0.2396, 1e-4));
        let r = ret_f_slab_conductor(1e6).unwrap();
        assert!(close(r.f_par, 0.5, 1e-4) && close(r.f_perp, 0.5, 1e-4));
        let r = ret_f_slab_conductor(1e-6).unwrap();
        assert!(r.f_par.abs() < 1e-4 && r.f_perp.abs() < 1e-4);
    }

    #[test]
    fn slab_conductor_branches_agree() {
        for &u in &[0.1f64, 20.0] {
            let a = ret_f_slab_conductor(u * (1.0 - 1e-12)).unwrap();
            let b = ret_f_slab_conductor(u * (1.0 + 1e-12)).unwrap();
            assert!(close(a.f_par, b.f_par, 1e-10) && close(a.f_perp, b.f_perp, 1e-10));
        }
    }

    #[test]
    fn slab_dielectric_examples() {
        let r = ret_f_slab_dielectric(1.0, 1.0, 0.3).unwrap();
        assert!(close(r.f_par, 0.0, 1e-16) && close(r.f_perp, 0.0, 1e-16));
        let r = ret_f_slab_dielectric(2.0, 2.0, 0.1).unwrap();
        assert!(close(r.f_par, 0.0575, 1e-15));
    }

    #[test]
    fn excited_examples() {
        let t = Transition::new(-1.0, 1.0, 1.0).unwrap();
        let r = excited_nr_hs(&t, &Material::vacuum(), 1.0).unwrap();
        assert_eq!((r.delta_e_star, r.delta_gamma), (0.0, 0.0));
        let m = Material::isotropic(AxisResponse::dielectric(2f64.sqrt()).unwrap()).unwrap();
        let r = excited_nr_hs(&t, &m, 1.0).unwrap();
        assert!(close(r.delta_e_star, -1.0 / (32.0 * PI), 1e-16));
        assert_eq!(r.delta_gamma, 0.0);
        let r = excited_ret_hs(&t, &Material::vacuum(), 1.0).unwrap();
        assert_eq!((r.delta_e_star, r.delta_gamma), (0.0, 0.0));
        let t = Transition::new(-1.0, 1.0, 0.0).unwrap();
        let r = excited_ret_hs(&t, &m, PI / 4.0).unwrap();
        assert!(r.delta_e_star.abs() < 1e-16);
        assert!(excited_ret_hs(&Transition::new(1.0, 1.0, 0.0).unwrap(), &m, 1.0).is_err());
    }

    #[test]
    fn excited_ret_ignores_perpendicular_axis() {
        let t = Transition::new(-0.8, 0.4, 1.1).unwrap();
        let par = AxisResponse::drude_conductor(1.3, 0.2).unwrap();
        let a = Material::new(par, AxisResponse::dielectric(1.7).unwrap()).unwrap();
        let b = Material::new(par, AxisResponse::drude_lorentz(2.0, 0.5, 0.1).unwrap()).unwrap();
        assert_eq!(excited_ret_hs(&t, &a, 3.0).unwrap(), excited_ret_hs(&t, &b, 3.0).unwrap());
    }

    #[test]
    fn retarded_selection() {
        let drude = AxisResponse::drude_conductor(10.0, 0.1).unwrap();
        let plasma = AxisResponse::lossless_plasma(10.0).unwrap();
        let hs = Geometry::HalfSpace;
        let m = Material::isotropic(drude).unwrap();
        assert_eq!(retarded_f(&m, &hs, 1.0, 50.0).unwrap(), ret_f_conductor_hs(500.0, 50.0).unwrap());
        let m = Material::new(drude, AxisResponse::dielectric(2.0).unwrap()).unwrap();
        assert_eq!(
            retarded_f(&m, &hs, 1.0, 50.0).unwrap(),
            ret_f_conductor_dielectric_hs(500.0, 2.0, 50.0).unwrap()
        );
        let m = Material::new(plasma, AxisResponse::Vacuum).unwrap();
        assert_eq!(retarded_f(&m, &hs, 2.0, 50.0).unwrap(), ret_f_plasma(5.0, 100.0).unwrap());
        let m = Material::isotropic(AxisResponse::dielectric(2.0).unwrap()).unwrap();
        assert!(retarded_f(&m, &hs, 1.0, 50.0).is_err());
        let slab = Geometry::Slab { thickness: 0.1 };
        assert_eq!(retarded_f(&m, &slab, 1.0, 10.0).unwrap(), ret_f_slab_dielectric(4.0, 4.0, 0.01).unwrap());
        let m = Material::new(drude, AxisResponse::Vacuum).unwrap();
        assert_eq!(retarded_f(&m, &slab, 1.0, 10.0).unwrap(), ret_f_slab_conductor(50.0).unwrap());
    }
}
