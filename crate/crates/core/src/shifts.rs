//! Exact energy shifts and decay-rate changes by numerical quadrature.
//!
//! The `F_*` functions take the material (and slab thickness) in units of the
//! transition frequency, so `ω_mg = 1` inside them. The shift assemblers take
//! everything in units of `ω_ref` and rescale per transition.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::asymptotics::{self, RegimeTag};
use crate::error::{invalid, Error, Result};
use crate::fresnel::{imag_axis, kappa_coeffs, slab_factor};
use crate::material::{AxisResponse, Material};
use crate::quadrature::{
    integrate_decaying, integrate_decaying_nested, integrate_kappa_contour, integrate_unit_nested, Pair, QuadResult,
    QuadSpec,
};
use crate::specfun::arctan_cont;

/// Below this `Z·|ω|` results are flagged: the formulas hold, the physical picture may not.
pub const LOW_DISTANCE_WARNING: f64 = 1e-4;

/// One dipole transition `|i⟩ → |m⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// `ω_m − ω_i` in units of `ω_ref`; negative for downward transitions.
    pub omega_mi: f64,
    /// `|μ^x|² + |μ^y|²`.
    pub mu_par_sq: f64,
    /// `|μ^z|²`.
    pub mu_perp_sq: f64,
}

impl Transition {
    pub fn new(omega_mi: f64, mu_par_sq: f64, mu_perp_sq: f64) -> Result<Self> {
        let t = Transition {
            omega_mi,
            mu_par_sq,
            mu_perp_sq,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega_mi.is_finite() || self.omega_mi == 0.0 {
            return Err(invalid("omega_mi", format!("must be finite and nonzero, got {}", self.omega_mi)));
        }
        for (name, v) in [("mu_par_sq", self.mu_par_sq), ("mu_perp_sq", self.mu_perp_sq)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpec {
    pub transitions: Vec<Transition>,
    pub state_label: String,
}

impl AtomSpec {
    pub fn new(transitions: Vec<Transition>, state_label: impl Into<String>) -> Result<Self> {
        let a = AtomSpec {
            transitions,
            state_label: state_label.into(),
        };
        a.validate()?;
        Ok(a)
    }

    pub fn two_level(omega_mi: f64, mu_par_sq: f64, mu_perp_sq: f64) -> Result<Self> {
        AtomSpec::new(vec![Transition::new(omega_mi, mu_par_sq, mu_perp_sq)?], "i")
    }

    pub fn validate(&self) -> Result<()> {
        if self.transitions.is_empty() {
            return Err(invalid("transitions", "at least one transition is required"));
        }
        self.transitions.iter().try_for_each(Transition::validate)
    }

    /// Indices sorted by ascending `|ω_mi|` (stable), the fixed summation order.
    fn summation_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.transitions.len()).collect();
        idx.sort_by(|&a, &b| {
            self.transitions[a]
                .omega_mi
                .abs()
                .total_cmp(&self.transitions[b].omega_mi.abs())
        });
        idx
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    HalfSpace,
    /// Slab of thickness `L` in units of `1/ω_ref`.
    Slab { thickness: f64 },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        if let Geometry::Slab { thickness } = *self {
            if !(thickness > 0.0) || !thickness.is_finite() {
                return Err(invalid("thickness", format!("must be finite and > 0, got {thickness}")));
            }
        }
        Ok(())
    }
}

/// Dimensionless shift coefficients `F∥`, `F⊥` with the larger of their error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FCoefficients {
    pub f_par: f64,
    pub f_perp: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl FCoefficients {
    fn from_quad(r: QuadResult<Pair>, factor: f64) -> Self {
        FCoefficients {
            f_par: r.value.0 * factor,
            f_perp: r.value.1 * factor,
            error_estimate: r.error_estimate * factor.abs(),
            evaluations: r.evaluations,
            converged: r.converged,
        }
    }

    fn zero() -> Self {
        FCoefficients {
            f_par: 0.0,
            f_perp: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
}

/// Contribution of one transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionShift {
    pub transition: Transition,
    pub z_omega: f64,
    pub f: FCoefficients,
    /// Imaginary-axis part of the shift.
    pub delta_e: f64,
    /// Residue part (zero for upward transitions).
    pub residue: Complex64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult {
    /// `F∥` of the first listed transition.
    pub f_par: f64,
    /// `F⊥` of the first listed transition.
    pub f_perp: f64,
    /// Total real shift: imaginary-axis parts plus the real part of the residues.
    pub delta_e: f64,
    pub delta_e_residue: Complex64,
    /// `−2·Im(delta_e_residue)`.
    pub delta_gamma: f64,
    pub per_transition: Vec<TransitionShift>,
    /// Largest error estimate over all transitions and parts.
    pub error_estimate: f64,
    pub converged: bool,
    /// Set when some `Z·|ω_mi|` is below [`LOW_DISTANCE_WARNING`].
    pub low_distance_warning: bool,
}

fn check_pos(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// Inner `y` integrand pair at fixed `x` for a given reflection pair.
#[inline]
fn y_weights(x: f64, y: f64, r_te: f64, r_tm: f64) -> Pair {
    let w = 1.0 / (1.0 + x * x * y * y);
    Pair((r_tm - y * y * r_te) * w, 2.0 * (1.0 - y * y) * r_tm * w)
}

/// `F = (1/16)∫₀^∞ t³e^{−t} h(t/(2Zω)) dt`, `h(x) = ∫₀¹ g(x, y) dy`.
fn f_integral(z_omega: f64, spec: &QuadSpec, g: impl Fn(f64, f64) -> Pair) -> FCoefficients {
    let inner = spec.inner();
    let s = 1.0 / (2.0 * z_omega);
    let outer = integrate_decaying_nested(
        |t| {
            if t == 0.0 {
                return QuadResult::exact(Pair(0.0, 0.0));
            }
            let x = t * s;
            let w = t * t * t * (-t).exp();
            integrate_unit_nested(|y| QuadResult::exact(g(x, y)), &[1.0 / x], &inner).scaled(w)
        },
        1.0,
        spec,
    );
    FCoefficients::from_quad(outer, 1.0 / 16.0)
}

/// `F∥`, `F⊥` for a half-space; material in units of the transition frequency.
pub fn f_halfspace(m: &Material, z_omega: f64, spec: &QuadSpec) -> Result<FCoefficients> {
    m.validate()?;
    check_pos("z_omega", z_omega)?;
    spec.validate()?;
    if m.is_vacuum() {
        return Ok(FCoefficients::zero());
    }
    Ok(f_integral(z_omega, spec, |x, y| {
        let c = imag_axis(m, x * y, x);
        y_weights(x, y, c.r_te, c.r_tm)
    }))
}

/// `F∥`, `F⊥` for a slab; material and thickness in units of the transition frequency.
pub fn f_slab(m: &Material, thickness: f64, z_omega: f64, spec: &QuadSpec) -> Result<FCoefficients> {
    m.validate()?;
    check_pos("thickness", thickness)?;
    check_pos("z_omega", z_omega)?;
    spec.validate()?;
    if m.is_vacuum() {
        return Ok(FCoefficients::zero());
    }
    Ok(f_integral(z_omega, spec, |x, y| {
        let c = imag_axis(m, x * y, x);
        let r_te = slab_factor(c.r_te, c.kzd_te * thickness);
        let r_tm = slab_factor(c.r_tm, c.kzd_tm * thickness);
        y_weights(x, y, r_te, r_tm)
    }))
}

/// Closed-form `y` integrals for a lossless plasma parallel to the surface and vacuum normal to it.
fn plasma_brackets(w: f64, x: f64) -> (f64, f64) {
    let w2 = w * w;
    let x2 = x * x;
    let s = (w2 + x2).sqrt();
    let at = x.atan();
    let g = arctan_cont(w, s);
    let par = (x2 - 1.0) * at + x + (2.0 * x / w2) * (2.0 * x - s) * (x - at) - (2.0 * x2 / w2) * (s - w - g);
    let perp = 2.0 * x2 * x / 3.0 + ((x2 + w2) * s - w2 * w) / 3.0 + (x2 + 1.0) * g - (x2 + 1.0) * (s - w)
        + (w2 / 2.0 - 1.0) * ((x2 + 1.0) * at - x);
    (par, perp * 4.0 / w2)
}

/// `F∥`, `F⊥` for a lossless plasma (∥) over vacuum (⊥) from the one-dimensional closed-form integrals.
pub fn f_plasma_closed(omega_p_tilde: f64, z_omega: f64, spec: &QuadSpec) -> Result<FCoefficients> {
    check_pos("omega_p_tilde", omega_p_tilde)?;
    check_pos("z_omega", z_omega)?;
    spec.validate()?;
    let s = 1.0 / (2.0 * z_omega);
    let r = integrate_decaying(
        |t| {
            let (a, b) = plasma_brackets(omega_p_tilde, t * s);
            Pair(a, b) * (-t).exp()
        },
        1.0,
        spec,
    );
    Ok(FCoefficients::from_quad(r, z_omega.powi(4) * s))
}

/// `F` for one transition, material given in units of `ω_ref`.
pub fn f_for_transition(
    m: &Material,
    g: &Geometry,
    omega_abs: f64,
    z: f64,
    spec: &QuadSpec,
) -> Result<FCoefficients> {
    let mw = m.in_units_of(omega_abs);
    match *g {
        Geometry::HalfSpace => f_halfspace(&mw, z * omega_abs, spec),
        Geometry::Slab { thickness } => f_slab(&mw, thickness * omega_abs, z * omega_abs, spec),
    }
}

fn check_inputs(atom: &AtomSpec, m: &Material, g: &Geometry, z: f64, spec: &QuadSpec) -> Result<()> {
    atom.validate()?;
    m.validate()?;
    g.validate()?;
    check_pos("Z", z)?;
    spec.validate()
}

fn assemble(atom: &AtomSpec, z: f64, parts: Vec<(usize, TransitionShift, bool)>) -> ShiftResult {
    let mut delta_e = 0.0;
    let mut residue = Complex64::new(0.0, 0.0);
    let mut error: f64 = 0.0;
    let mut converged = true;
    let mut per = vec![None; atom.transitions.len()];
    for (i, ts, ok) in parts {
        delta_e += ts.delta_e;
        residue += ts.residue;
        error = error.max(ts.error_estimate);
        converged &= ok;
        per[i] = Some(ts);
    }
    let per_transition: Vec<TransitionShift> = per.into_iter().map(Option::unwrap).collect();
    let first = per_transition[0].f;
    let low = atom
        .transitions
        .iter()
        .any(|t| z * t.omega_mi.abs() < LOW_DISTANCE_WARNING);
    ShiftResult {
        f_par: first.f_par,
        f_perp: first.f_perp,
        delta_e: delta_e + residue.re,
        delta_e_residue: residue,
        delta_gamma: -2.0 * residue.im + 0.0, // folds −0 to +0
        per_transition,
        error_estimate: error,
        converged,
        low_distance_warning: low,
    }
}

fn imag_axis_part(t: &Transition, f: &FCoefficients, z: f64) -> (f64, f64) {
    let w = t.omega_mi.abs();
    let pref = 1.0 / (8.0 * PI * PI * z.powi(4) * w);
    let sign = t.omega_mi.signum();
    let de = -sign * (f.f_par * t.mu_par_sq + f.f_perp * t.mu_perp_sq) * pref;
    let err = f.error_estimate * (t.mu_par_sq + t.mu_perp_sq) * pref;
    (de, err)
}

/// Shift from the imaginary-frequency integral, each transition weighted by `−sgn(ω_mi)`.
pub fn ground_shift(atom: &AtomSpec, m: &Material, g: &Geometry, z: f64, spec: &QuadSpec) -> Result<ShiftResult> {
    check_inputs(atom, m, g, z, spec)?;
    let mut parts = Vec::with_capacity(atom.transitions.len());
    for i in atom.summation_order() {
        let t = atom.transitions[i];
        let w = t.omega_mi.abs();
        let f = f_for_transition(m, g, w, z, spec)?;
        let (de, err) = imag_axis_part(&t, &f, z);
        parts.push((
            i,
            TransitionShift {
                transition: t,
                z_omega: z * w,
                f,
                delta_e: de,
                residue: Complex64::new(0.0, 0.0),
                error_estimate: err,
            },
            f.converged,
        ));
    }
    Ok(assemble(atom, z, parts))
}

/// `∫₀^∞ dω ω_mg/(ω² + ω_mg²)·R(k, ω)` over `ω = ω_mg·tanθ` for the nonretarded slab kernel.
fn slab_nonret_kernel(m: &Material, thickness: f64, omega_mg: f64, k: f64, spec: &QuadSpec) -> QuadResult<f64> {
    integrate_unit_nested(
        |u| {
            let th = u * PI / 2.0;
            let xi = omega_mg * th.tan();
            let eta = asymptotics::image_factor(m, xi);
            let ratio = m.eps_ratio_imag_axis(xi);
            QuadResult::exact(slab_factor(eta, ratio.sqrt() * k * thickness) * PI / 2.0)
        },
        &[],
        spec,
    )
}

/// Nonretarded ground-state shift (electrostatic image form).
///
/// The reported `F` values are the nonretarded equivalents `F∥ = Zω·I/4`, `F⊥ = Zω·I/2`
/// (half-space) so that the usual assembly formula reproduces the shift.
pub fn ground_shift_nonret(
    atom: &AtomSpec,
    m: &Material,
    g: &Geometry,
    z: f64,
    spec: &QuadSpec,
) -> Result<ShiftResult> {
    check_inputs(atom, m, g, z, spec)?;
    let mut parts = Vec::with_capacity(atom.transitions.len());
    for i in atom.summation_order() {
        let t = atom.transitions[i];
        let w = t.omega_mi.abs();
        let zw = z * w;
        // Per unit of (μ∥² + 2μ⊥²): F∥ = Zω·c, F⊥ = 2Zω·c.
        let r = match *g {
            Geometry::HalfSpace => asymptotics::nr_image_shift_coefficient(m, w, spec)?.scaled(0.25),
            Geometry::Slab { thickness } => {
                let inner = spec.inner();
                let s = 1.0 / (2.0 * z);
                integrate_decaying_nested(
                    |tt| {
                        let k = tt * s;
                        slab_nonret_kernel(m, thickness, w, k, &inner).scaled(tt * tt * (-tt).exp())
                    },
                    1.0,
                    spec,
                )
                .scaled(0.125)
            }
        };
        let f = FCoefficients {
            f_par: zw * r.value,
            f_perp: 2.0 * zw * r.value,
            error_estimate: 2.0 * zw * r.error_estimate,
            evaluations: r.evaluations,
            converged: r.converged,
        };
        let (de, err) = imag_axis_part(&t, &f, z);
        parts.push((
            i,
            TransitionShift {
                transition: t,
                z_omega: zw,
                f,
                delta_e: de,
                residue: Complex64::new(0.0, 0.0),
                error_estimate: err,
            },
            f.converged,
        ));
    }
    Ok(assemble(atom, z, parts))
}

/// Residue contribution `ΔE⋆` of one downward transition near a half-space.
pub fn excited_residue(t: &Transition, m: &Material, z: f64, spec: &QuadSpec) -> Result<QuadResult<Complex64>> {
    t.validate()?;
    m.validate()?;
    check_pos("Z", z)?;
    spec.validate()?;
    if t.omega_mi >= 0.0 {
        return Err(invalid("omega_mi", "residue terms exist only for downward transitions (omega_mi < 0)"));
    }
    let w = t.omega_mi.abs();
    if m.is_vacuum() {
        return Ok(QuadResult::exact(Complex64::new(0.0, 0.0)));
    }
    let ep = m.parallel.eval_real_axis(w)?;
    let eq = m.perpendicular.eval_real_axis(w)?;
    let phase = Complex64::new(0.0, 2.0 * w * z);
    let integrand = |kappa: Complex64| {
        let (r_te, r_tm) = kappa_coeffs(ep, eq, kappa);
        let k2 = kappa * kappa;
        let one = Complex64::new(1.0, 0.0);
        (phase * kappa).exp() * ((r_te - k2 * r_tm) * t.mu_par_sq + (one - k2) * r_tm * (2.0 * t.mu_perp_sq))
    };
    let r = integrate_kappa_contour(integrand, 1.0 / (2.0 * w * z), spec);
    let pref = w.powi(3) / (8.0 * PI);
    Ok(QuadResult {
        value: Complex64::i() * pref * r.value,
        error_estimate: pref * r.error_estimate,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

/// Full excited-state shift: signed imaginary-axis parts plus residues of downward transitions.
pub fn excited_total(atom: &AtomSpec, m: &Material, g: &Geometry, z: f64, spec: &QuadSpec) -> Result<ShiftResult> {
    check_inputs(atom, m, g, z, spec)?;
    let has_downward = atom.transitions.iter().any(|t| t.omega_mi < 0.0);
    if has_downward && matches!(g, Geometry::Slab { .. }) {
        return Err(Error::NotImplemented(
            "residue terms near a slab; only the half-space case is available",
        ));
    }
    let mut parts = Vec::with_capacity(atom.transitions.len());
    for i in atom.summation_order() {
        let t = atom.transitions[i];
        let w = t.omega_mi.abs();
        let f = f_for_transition(m, g, w, z, spec)?;
        let (de, mut err) = imag_axis_part(&t, &f, z);
        let mut ok = f.converged;
        let mut residue = Complex64::new(0.0, 0.0);
        if t.omega_mi < 0.0 {
            let r = excited_residue(&t, m, z, spec)?;
            residue = r.value;
            err = err.max(r.error_estimate);
            ok &= r.converged;
        }
        parts.push((
            i,
            TransitionShift {
                transition: t,
                z_omega: z * w,
                f,
                delta_e: de,
                residue,
                error_estimate: err,
            },
            ok,
        ));
    }
    Ok(assemble(atom, z, parts))
}

/// Shift from closed-form expansions: `Nonretarded` uses the image-factor integral and the
/// short-distance residue terms, `Retarded` uses [`asymptotics::retarded_f`] and the
/// long-distance residue terms. Expansion results carry no error estimate (reported as 0).
pub fn asymptotic_shift(
    atom: &AtomSpec,
    m: &Material,
    g: &Geometry,
    z: f64,
    regime: RegimeTag,
    spec: &QuadSpec,
) -> Result<ShiftResult> {
    check_inputs(atom, m, g, z, spec)?;
    if atom.transitions.iter().any(|t| t.omega_mi < 0.0) && matches!(g, Geometry::Slab { .. }) {
        return Err(Error::NotImplemented(
            "residue terms near a slab; only the half-space case is available",
        ));
    }
    let mut base = match regime {
        RegimeTag::Nonretarded => ground_shift_nonret(atom, m, g, z, spec)?,
        RegimeTag::Retarded => {
            let mut parts = Vec::with_capacity(atom.transitions.len());
            for i in atom.summation_order() {
                let t = atom.transitions[i];
                let w = t.omega_mi.abs();
                let e = asymptotics::retarded_f(m, g, w, z)?;
                let f = FCoefficients {
                    f_par: e.f_par,
                    f_perp: e.f_perp,
                    error_estimate: 0.0,
                    evaluations: 0,
                    converged: true,
                };
                let (de, _) = imag_axis_part(&t, &f, z);
                let ts = TransitionShift {
                    transition: t,
                    z_omega: z * w,
                    f,
                    delta_e: de,
                    residue: Complex64::new(0.0, 0.0),
                    error_estimate: 0.0,
                };
                parts.push((i, ts, true));
            }
            assemble(atom, z, parts)
        }
    };
    let mut residue = Complex64::new(0.0, 0.0);
    for i in atom.summation_order() {
        let t = atom.transitions[i];
        if t.omega_mi < 0.0 {
            let e = match regime {
                RegimeTag::Nonretarded => asymptotics::excited_nr_hs(&t, m, z)?,
                RegimeTag::Retarded => asymptotics::excited_ret_hs(&t, m, z)?,
            };
            let r = Complex64::new(e.delta_e_star, -0.5 * e.delta_gamma);
            base.per_transition[i].residue = r;
            residue += r;
        }
    }
    base.delta_e += residue.re;
    base.delta_e_residue = residue;
    base.delta_gamma = -2.0 * residue.im + 0.0;
    Ok(base)
}

/// Convenience: is this material a lossless plasma along ∥ and vacuum along ⊥?
pub fn is_plasma_over_vacuum(m: &Material) -> Option<f64> {
    match (m.parallel, m.perpendicular.is_vacuum()) {
        (AxisResponse::LosslessPlasma { omega_p }, true) if omega_p > 0.0 => Some(omega_p),
        (AxisResponse::DrudeLorentz { omega_p, omega_t, gamma }, true)
            if omega_p > 0.0 && omega_t == 0.0 && gamma == 0.0 =>
        {
            Some(omega_p)
        }
        _ => None,
    }
}
