//! Per-axis optical response models and their permittivities.
//!
//! On the imaginary axis, `ε(iξ)` diverges at `ξ = 0` for the conductor
//! variants. For that case the module has finite stand-ins:
//! [`AxisResponse::inverse_imag_axis`] (`1/ε`), [`AxisResponse::susceptibility_xi2`]
//! (`χ(iξ)·ξ²`) and [`AxisResponse::low_frequency_order`] (how `ε(iξ)·ξ²`
//! vanishes as `ξ → 0`). The reflection coefficients are built from these
//! instead of `ε` itself.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// A real number or a divergence marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaybeInfinite {
    Finite(f64),
    Infinite,
}

impl MaybeInfinite {
    pub fn finite(self) -> Option<f64> {
        match self {
            MaybeInfinite::Finite(v) => Some(v),
            MaybeInfinite::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, MaybeInfinite::Infinite)
    }

    /// Collapse to an `f64`, mapping the marker to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Optical response along one principal axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisResponse {
    /// `ε(ω) = 1 + ω_P²/(ω_T² − ω² − 2iγω)`.
    DrudeLorentz { omega_p: f64, omega_t: f64, gamma: f64 },
    /// Drude-Lorentz with `ω_T = 0` and `γ > 0`.
    DrudeConductor { omega_p: f64, gamma: f64 },
    /// Drude-Lorentz with `ω_T = γ = 0`.
    LosslessPlasma { omega_p: f64 },
    /// Constant `ε = n²`.
    NondispersiveDielectric { n: f64 },
    Vacuum,
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
    }
    Ok(())
}

impl AxisResponse {
    pub fn drude_lorentz(omega_p: f64, omega_t: f64, gamma: f64) -> Result<Self> {
        let r = AxisResponse::DrudeLorentz { omega_p, omega_t, gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn drude_conductor(omega_p: f64, gamma: f64) -> Result<Self> {
        let r = AxisResponse::DrudeConductor { omega_p, gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn lossless_plasma(omega_p: f64) -> Result<Self> {
        let r = AxisResponse::LosslessPlasma { omega_p };
        r.validate()?;
        Ok(r)
    }

    pub fn dielectric(n: f64) -> Result<Self> {
        let r = AxisResponse::NondispersiveDielectric { n };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AxisResponse::DrudeLorentz { omega_p, omega_t, gamma } => {
                check_nonneg("omega_p", omega_p)?;
                check_nonneg("omega_t", omega_t)?;
                check_nonneg("gamma", gamma)
            }
            AxisResponse::DrudeConductor { omega_p, gamma } => {
                check_nonneg("omega_p", omega_p)?;
                check_nonneg("gamma", gamma)?;
                if gamma <= 0.0 {
                    return Err(invalid("gamma", "a Drude conductor needs gamma > 0"));
                }
                Ok(())
            }
            AxisResponse::LosslessPlasma { omega_p } => check_nonneg("omega_p", omega_p),
            AxisResponse::NondispersiveDielectric { n } => {
                if !n.is_finite() || n < 1.0 {
                    return Err(invalid("n", format!("must be finite and >= 1, got {n}")));
                }
                Ok(())
            }
            AxisResponse::Vacuum => Ok(()),
        }
    }

    /// `(ω_P, ω_T, γ)` for the oscillator variants.
    pub fn oscillator(&self) -> Option<(f64, f64, f64)> {
        match *self {
            AxisResponse::DrudeLorentz { omega_p, omega_t, gamma } => Some((omega_p, omega_t, gamma)),
            AxisResponse::DrudeConductor { omega_p, gamma } => Some((omega_p, 0.0, gamma)),
            AxisResponse::LosslessPlasma { omega_p } => Some((omega_p, 0.0, 0.0)),
            _ => None,
        }
    }

    /// True when the response is identically that of vacuum.
    pub fn is_vacuum(&self) -> bool {
        match *self {
            AxisResponse::Vacuum => true,
            AxisResponse::NondispersiveDielectric { n } => n == 1.0,
            _ => self.oscillator().map_or(false, |(wp, _, _)| wp == 0.0),
        }
    }

    /// True for oscillator variants with `ω_T = 0` and `ω_P > 0`, where `ε(iξ)` diverges at `ξ = 0`.
    pub fn is_conductor(&self) -> bool {
        self.oscillator().map_or(false, |(wp, wt, _)| wp > 0.0 && wt == 0.0)
    }

    /// Rescale all frequencies to a new unit `unit` (given in the current units).
    pub fn in_units_of(&self, unit: f64) -> AxisResponse {
        match *self {
            AxisResponse::DrudeLorentz { omega_p, omega_t, gamma } => AxisResponse::DrudeLorentz {
                omega_p: omega_p / unit,
                omega_t: omega_t / unit,
                gamma: gamma / unit,
            },
            AxisResponse::DrudeConductor { omega_p, gamma } => AxisResponse::DrudeConductor {
                omega_p: omega_p / unit,
                gamma: gamma / unit,
            },
            AxisResponse::LosslessPlasma { omega_p } => AxisResponse::LosslessPlasma { omega_p: omega_p / unit },
            other => other,
        }
    }

    /// `ε(iξ)`, with the divergence of conductors at `ξ = 0` reported as [`MaybeInfinite::Infinite`].
    pub fn eval_imag_axis(&self, xi: f64) -> Result<MaybeInfinite> {
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(invalid("xi", format!("must be finite and >= 0, got {xi}")));
        }
        Ok(match *self {
            AxisResponse::NondispersiveDielectric { n } => MaybeInfinite::Finite(n * n),
            AxisResponse::Vacuum => MaybeInfinite::Finite(1.0),
            _ => {
                let (wp, wt, g) = self.oscillator().unwrap();
                let d = xi * xi + wt * wt + 2.0 * g * xi;
                if wp == 0.0 {
                    MaybeInfinite::Finite(1.0)
                } else if d == 0.0 {
                    MaybeInfinite::Infinite
                } else {
                    MaybeInfinite::Finite(1.0 + wp * wp / d)
                }
            }
        })
    }

    /// `1/ε(iξ)`, which lies in `[0, 1]` and is finite everywhere including conductors at `ξ = 0`.
    pub fn inverse_imag_axis(&self, xi: f64) -> f64 {
        match *self {
            AxisResponse::NondispersiveDielectric { n } => 1.0 / (n * n),
            AxisResponse::Vacuum => 1.0,
            _ => {
                let (wp, wt, g) = self.oscillator().unwrap();
                if wp == 0.0 {
                    return 1.0;
                }
                let d = xi * xi + wt * wt + 2.0 * g * xi;
                d / (d + wp * wp)
            }
        }
    }

    /// `χ(iξ)·ξ² = (ε(iξ) − 1)·ξ²`, finite for all `ξ ≥ 0`.
    pub fn susceptibility_xi2(&self, xi: f64) -> f64 {
        match *self {
            AxisResponse::NondispersiveDielectric { n } => (n * n - 1.0) * xi * xi,
            AxisResponse::Vacuum => 0.0,
            _ => {
                let (wp, wt, g) = self.oscillator().unwrap();
                if wp == 0.0 {
                    return 0.0;
                }
                if wt == 0.0 {
                    if xi == 0.0 && g == 0.0 {
                        wp * wp
                    } else {
                        wp * wp * xi / (xi + 2.0 * g)
                    }
                } else {
                    wp * wp * xi * xi / (xi * xi + wt * wt + 2.0 * g * xi)
                }
            }
        }
    }

    /// Leading behaviour `ε(iξ)·ξ² ≈ coef·ξ^power` as `ξ → 0`.
    pub fn low_frequency_order(&self) -> (f64, i32) {
        match *self {
            AxisResponse::NondispersiveDielectric { n } => (n * n, 2),
            AxisResponse::Vacuum => (1.0, 2),
            _ => {
                let (wp, wt, g) = self.oscillator().unwrap();
                if wp == 0.0 {
                    (1.0, 2)
                } else if wt > 0.0 {
                    (1.0 + wp * wp / (wt * wt), 2)
                } else if g > 0.0 {
                    (wp * wp / (2.0 * g), 1)
                } else {
                    (wp * wp, 0)
                }
            }
        }
    }

    /// `ε(ω)` on the positive real axis.
    pub fn eval_real_axis(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        Ok(match *self {
            AxisResponse::NondispersiveDielectric { n } => Complex64::new(n * n, 0.0),
            AxisResponse::Vacuum => Complex64::new(1.0, 0.0),
            _ => {
                let (wp, wt, g) = self.oscillator().unwrap();
                let d = Complex64::new(wt * wt - omega * omega, -2.0 * g * omega);
                Complex64::new(1.0, 0.0) + wp * wp / d
            }
        })
    }

    /// DC conductivity `σ(0) = ω_P²/(2γ)`; infinite for the lossless plasma.
    pub fn static_conductivity(&self) -> Result<MaybeInfinite> {
        match *self {
            AxisResponse::DrudeConductor { omega_p, gamma } => {
                Ok(MaybeInfinite::Finite(omega_p * omega_p / (2.0 * gamma)))
            }
            AxisResponse::LosslessPlasma { .. } => Ok(MaybeInfinite::Infinite),
            AxisResponse::DrudeLorentz { omega_p, omega_t: 0.0, gamma } => {
                if gamma > 0.0 {
                    Ok(MaybeInfinite::Finite(omega_p * omega_p / (2.0 * gamma)))
                } else {
                    Ok(MaybeInfinite::Infinite)
                }
            }
            _ => Err(invalid(
                "response",
                "static conductivity is defined only for conductor variants",
            )),
        }
    }

    /// Static permittivity `ε(0)`.
    pub fn static_epsilon(&self) -> MaybeInfinite {
        match *self {
            AxisResponse::NondispersiveDielectric { n } => MaybeInfinite::Finite(n * n),
            AxisResponse::Vacuum => MaybeInfinite::Finite(1.0),
            _ => {
                let (wp, wt, _) = self.oscillator().unwrap();
                if wp == 0.0 {
                    MaybeInfinite::Finite(1.0)
                } else if wt == 0.0 {
                    MaybeInfinite::Infinite
                } else {
                    MaybeInfinite::Finite(1.0 + wp * wp / (wt * wt))
                }
            }
        }
    }
}

/// Uniaxial medium: `parallel` acts in the surface plane, `perpendicular` along the normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub parallel: AxisResponse,
    pub perpendicular: AxisResponse,
}

impl Material {
    pub fn new(parallel: AxisResponse, perpendicular: AxisResponse) -> Result<Self> {
        parallel.validate()?;
        perpendicular.validate()?;
        Ok(Material { parallel, perpendicular })
    }

    pub fn isotropic(response: AxisResponse) -> Result<Self> {
        Material::new(response, response)
    }

    pub fn vacuum() -> Self {
        Material {
            parallel: AxisResponse::Vacuum,
            perpendicular: AxisResponse::Vacuum,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.parallel.validate()?;
        self.perpendicular.validate()
    }

    pub fn is_vacuum(&self) -> bool {
        self.parallel.is_vacuum() && self.perpendicular.is_vacuum()
    }

    pub fn in_units_of(&self, unit: f64) -> Material {
        Material {
            parallel: self.parallel.in_units_of(unit),
            perpendicular: self.perpendicular.in_units_of(unit),
        }
    }

    /// `ε∥(iξ)/ε⊥(iξ)`, using the low-frequency orders at `ξ = 0`. May be `+∞` or `0` there.
    pub fn eps_ratio_imag_axis(&self, xi: f64) -> f64 {
        if xi > 0.0 {
            return self.perpendicular.inverse_imag_axis(xi) / self.parallel.inverse_imag_axis(xi);
        }
        let (cp, pp) = self.parallel.low_frequency_order();
        let (cq, pq) = self.perpendicular.low_frequency_order();
        match pp.cmp(&pq) {
            std::cmp::Ordering::Less => f64::INFINITY,
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Equal => cp / cq,
        }
    }

    /// `√(ε∥(iξ)ε⊥(iξ))`, possibly `+∞` at `ξ = 0`.
    pub fn image_root_imag_axis(&self, xi: f64) -> f64 {
        1.0 / (self.parallel.inverse_imag_axis(xi) * self.perpendicular.inverse_imag_axis(xi)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn imag_axis_examples() {
        assert_eq!(AxisResponse::Vacuum.eval_imag_axis(3.7).unwrap(), MaybeInfinite::Finite(1.0));
        let d = AxisResponse::drude_conductor(1.0, 0.5).unwrap();
        assert_eq!(d.eval_imag_axis(1.0).unwrap(), MaybeInfinite::Finite(1.5));
        let l = AxisResponse::drude_lorentz(1.0, 1.0, 0.0).unwrap();
        assert_eq!(l.eval_imag_axis(1.0).unwrap(), MaybeInfinite::Finite(1.5));
        assert!(d.eval_imag_axis(0.0).unwrap().is_infinite());
        assert!(AxisResponse::lossless_plasma(2.0).unwrap().eval_imag_axis(0.0).unwrap().is_infinite());
        assert!(d.eval_imag_axis(-1.0).is_err());
    }

    #[test]
    fn real_axis_examples() {
        assert_eq!(AxisResponse::Vacuum.eval_real_axis(1.0).unwrap(), Complex64::new(1.0, 0.0));
        let p = AxisResponse::lossless_plasma(2.0).unwrap();
        assert_eq!(p.eval_real_axis(1.0).unwrap(), Complex64::new(-3.0, 0.0));
        let d = AxisResponse::drude_conductor(1.0, 0.5).unwrap();
        let e = d.eval_real_axis(1.0).unwrap();
        assert!(close(e.re, 0.5, 1e-15) && close(e.im, 0.5, 1e-15));
        assert!(d.eval_real_axis(0.0).is_err());
    }

    #[test]
    fn static_values() {
        let d = AxisResponse::drude_conductor(1.0, 0.5).unwrap();
        assert_eq!(d.static_conductivity().unwrap(), MaybeInfinite::Finite(1.0));
        let d2 = AxisResponse::drude_conductor(2.0, 1.0).unwrap();
        assert_eq!(d2.static_conductivity().unwrap(), MaybeInfinite::Finite(2.0));
        let p = AxisResponse::lossless_plasma(1.0).unwrap();
        assert_eq!(p.static_conductivity().unwrap(), MaybeInfinite::Infinite);
        assert!(AxisResponse::dielectric(1.5).unwrap().static_conductivity().is_err());
        assert!(AxisResponse::Vacuum.static_conductivity().is_err());

        assert_eq!(AxisResponse::dielectric(1.5).unwrap().static_epsilon(), MaybeInfinite::Finite(2.25));
        let l = AxisResponse::drude_lorentz(1.0, 1.0, 0.3).unwrap();
        assert_eq!(l.static_epsilon(), MaybeInfinite::Finite(2.0));
        assert_eq!(d.static_epsilon(), MaybeInfinite::Infinite);
        assert_eq!(AxisResponse::Vacuum.static_epsilon(), MaybeInfinite::Finite(1.0));
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(AxisResponse::drude_conductor(1.0, 0.0).is_err());
        assert!(AxisResponse::drude_lorentz(-1.0, 0.0, 0.0).is_err());
        assert!(AxisResponse::lossless_plasma(f64::NAN).is_err());
        assert!(AxisResponse::dielectric(0.9).is_err());
        assert!(AxisResponse::dielectric(f64::INFINITY).is_err());
    }

    #[test]
    fn finite_stand_ins_at_zero() {
        let d = AxisResponse::drude_conductor(2.0, 0.5).unwrap();
        assert_eq!(d.inverse_imag_axis(0.0), 0.0);
        assert_eq!(d.susceptibility_xi2(0.0), 0.0);
        assert_eq!(d.low_frequency_order(), (4.0, 1));
        let p = AxisResponse::lossless_plasma(2.0).unwrap();
        assert_eq!(p.susceptibility_xi2(0.0), 4.0);
        assert_eq!(p.low_frequency_order(), (4.0, 0));
        let zero = AxisResponse::drude_lorentz(0.0, 0.0, 0.0).unwrap();
        assert!(zero.is_vacuum());
        assert_eq!(zero.inverse_imag_axis(0.0), 1.0);
        assert_eq!(zero.eval_imag_axis(0.0).unwrap(), MaybeInfinite::Finite(1.0));
    }

    #[test]
    fn ratio_at_zero_frequency() {
        let d = AxisResponse::drude_conductor(1.0, 0.5).unwrap();
        let p = AxisResponse::lossless_plasma(1.0).unwrap();
        let n = AxisResponse::dielectric(2.0).unwrap();
        assert_eq!(Material::new(d, n).unwrap().eps_ratio_imag_axis(0.0), f64::INFINITY);
        assert_eq!(Material::new(n, d).unwrap().eps_ratio_imag_axis(0.0), 0.0);
        assert_eq!(Material::new(p, d).unwrap().eps_ratio_imag_axis(0.0), f64::INFINITY);
        assert_eq!(Material::isotropic(d).unwrap().eps_ratio_imag_axis(0.0), 1.0);
        let d2 = AxisResponse::drude_conductor(2.0, 0.5).unwrap();
        assert_eq!(Material::new(d2, d).unwrap().eps_ratio_imag_axis(0.0), 4.0);
        let r = Material::new(d2, d).unwrap().eps_ratio_imag_axis(1e-12);
        assert!(close(r, 4.0, 1e-9));
    }

    fn oscillator() -> impl Strategy<Value = AxisResponse> {
        (0.0..20.0f64, 0.0..5.0f64, 0.0..3.0f64).prop_map(|(wp, wt, g)| AxisResponse::DrudeLorentz {
            omega_p: wp,
            omega_t: wt,
            gamma: g,
        })
    }

    fn any_response() -> impl Strategy<Value = AxisResponse> {
        prop_oneof![
            oscillator(),
            (0.0..20.0f64, 1e-3..3.0f64).prop_map(|(wp, g)| AxisResponse::DrudeConductor { omega_p: wp, gamma: g }),
            (0.0..20.0f64).prop_map(|wp| AxisResponse::LosslessPlasma { omega_p: wp }),
            (1.0..5.0f64).prop_map(|n| AxisResponse::NondispersiveDielectric { n }),
            Just(AxisResponse::Vacuum),
        ]
    }

    proptest! {
        #[test]
        fn imag_axis_real_and_at_least_one(r in any_response(), xi in 1e-8..1e4f64) {
            let e = r.eval_imag_axis(xi).unwrap().finite().unwrap();
            prop_assert!(e.is_finite() && e >= 1.0);
            prop_assert!(close(1.0 / e, r.inverse_imag_axis(xi), 1e-14));
            prop_assert!(close(e, 1.0 + r.susceptibility_xi2(xi) / (xi * xi), 1e-14));
        }

        #[test]
        fn imag_axis_monotone(r in oscillator(), a in 0.0..100.0f64, b in 0.0..100.0f64) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(r.inverse_imag_axis(lo) <= r.inverse_imag_axis(hi));
        }

        #[test]
        fn real_axis_passive(r in any_response(), w in 1e-4..1e3f64) {
            let e = r.eval_real_axis(w).unwrap();
            prop_assert!(e.im >= 0.0);
            let lossless = r.oscillator().map_or(true, |(_, _, g)| g == 0.0);
            if lossless {
                prop_assert_eq!(e.im, 0.0);
            }
        }

        #[test]
        fn drude_lorentz_matches_conductor(wp in 0.0..20.0f64, g in 1e-3..3.0f64, xi in 1e-8..1e3f64) {
            let a = AxisResponse::DrudeLorentz { omega_p: wp, omega_t: 0.0, gamma: g };
            let b = AxisResponse::DrudeConductor { omega_p: wp, gamma: g };
            prop_assert_eq!(a.eval_imag_axis(xi).unwrap(), b.eval_imag_axis(xi).unwrap());
        }
    }

    #[test]
    fn tends_to_one_at_high_frequency() {
        let r = AxisResponse::drude_lorentz(3.0, 1.0, 0.2).unwrap();
        let e = r.eval_imag_axis(1e8).unwrap().finite().unwrap();
        assert!((e - 1.0).abs() < 1e-14);
    }
}
