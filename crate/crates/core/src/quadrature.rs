//! Adaptive Gauss-Kronrod (7/15) quadrature over finite intervals, damped
//! half-lines, and the bent `κ` contour used for the residue terms.
//!
//! Integrands may themselves be integrals: the `*_nested` entry points take
//! closures returning a [`QuadResult`], whose error estimate and evaluation
//! count are folded into the outer result. Outer refinement is driven by the
//! outer rule's own error only.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let s = QuadSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(invalid("rel_tol", format!("must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(invalid("abs_tol", format!("must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    /// Spec for the inner integral of an iterated pair: both tolerances ten times tighter.
    pub fn inner(&self) -> QuadSpec {
        QuadSpec {
            rel_tol: self.rel_tol * 0.1,
            abs_tol: self.abs_tol * 0.1,
            max_subdivisions: self.max_subdivisions,
        }
    }

    /// Same spec with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> QuadSpec {
        QuadSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Values the engine can integrate: a small vector space with a norm.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

/// Two real integrands sharing one set of nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Pair(pub f64, pub f64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl QuadValue for Pair {
    fn magnitude(&self) -> f64 {
        self.0.abs().max(self.1.abs())
    }
}

/// Integral estimate with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when the subdivision budget ran out before the tolerance was met.
    pub converged: bool,
}

impl<V: QuadValue> QuadResult<V> {
    pub fn exact(value: V) -> Self {
        QuadResult {
            value,
            error_estimate: 0.0,
            evaluations: 1,
            converged: true,
        }
    }

    /// Multiply the value by `c` and the error estimate by `|c|`.
    pub fn scaled(self, c: f64) -> QuadResult<V> {
        QuadResult {
            value: self.value * c,
            error_estimate: self.error_estimate * c.abs(),
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    /// Part of `error` from this panel's own rule, excluding inner integrals.
    own: f64,
}

struct Ranked {
    error: f64,
    index: usize,
}

impl PartialEq for Ranked {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Ranked {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.index.cmp(&self.index))
    }
}

struct Tally {
    evaluations: usize,
}

fn gk15<V: QuadValue>(f: &mut impl FnMut(f64) -> QuadResult<V>, a: f64, b: f64, tally: &mut Tally) -> Panel<V> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [V::default(); 15];
    let mut inner_err = 0.0;
    let mut eval = |x: f64, w: f64, tally: &mut Tally| {
        let r = f(x);
        tally.evaluations += r.evaluations;
        inner_err += w * r.error_estimate;
        r.value
    };
    fv[7] = eval(c, WGK[7], tally);
    for j in 0..7 {
        let dx = h * XGK[j];
        fv[j] = eval(c - dx, WGK[j], tally);
        fv[14 - j] = eval(c + dx, WGK[j], tally);
    }
    let mut resk = fv[7] * WGK[7];
    let mut resg = fv[7] * WG[3];
    let mut resabs = fv[7].magnitude() * WGK[7];
    for j in 0..7 {
        let pair = fv[j] + fv[14 - j];
        resk = resk + pair * WGK[j];
        resabs += (fv[j].magnitude() + fv[14 - j].magnitude()) * WGK[j];
        if j % 2 == 1 {
            resg = resg + pair * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = (fv[7] - mean).magnitude() * WGK[7];
    for j in 0..7 {
        resasc += ((fv[j] - mean).magnitude() + (fv[14 - j] - mean).magnitude()) * WGK[j];
    }
    let hl = h.abs();
    let resasc = resasc * hl;
    let resabs = resabs * hl;
    let mut err = ((resk - resg) * h).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value: resk * h,
        error: err + inner_err * hl,
        own: err,
    }
}

/// Global adaptive integration over the union of `[points[i], points[i+1]]`.
fn adaptive<V: QuadValue>(
    mut f: impl FnMut(f64) -> QuadResult<V>,
    points: &[f64],
    spec: &QuadSpec,
) -> QuadResult<V> {
    let mut tally = Tally { evaluations: 0 };
    let mut panels: Vec<Panel<V>> = Vec::with_capacity(points.len() + 2 * spec.max_subdivisions);
    let mut heap = BinaryHeap::new();
    let mut total = V::default();
    let mut total_err = 0.0;
    let mut total_own = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let p = gk15(&mut f, w[0], w[1], &mut tally);
            total = total + p.value;
            total_err += p.error;
            total_own += p.own;
            heap.push(Ranked {
                error: p.own,
                index: panels.len(),
            });
            panels.push(p);
        }
    }
    let mut subdivisions = 0;
    let mut frozen_err = 0.0;
    let mut met = false;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.magnitude());
        if total_err <= tol {
            met = true;
            break;
        }
        // Refining the outer rule cannot reduce inner-integral error.
        if subdivisions >= spec.max_subdivisions || total_err - total_own >= tol {
            break;
        }
        let Some(top) = heap.pop() else { break };
        let p = panels[top.index];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e3 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            // Panel at machine resolution: its error can no longer shrink.
            frozen_err += p.own;
            if total_own - frozen_err > tol {
                continue;
            }
            break;
        }
        let left = gk15(&mut f, p.a, mid, &mut tally);
        let right = gk15(&mut f, mid, p.b, &mut tally);
        subdivisions += 1;
        total = total - p.value + left.value + right.value;
        total_err += left.error + right.error - p.error;
        total_own += left.own + right.own - p.own;
        panels[top.index] = left;
        heap.push(Ranked {
            error: left.own,
            index: top.index,
        });
        heap.push(Ranked {
            error: right.own,
            index: panels.len(),
        });
        panels.push(right);
    }
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = V::default();
    let mut error = 0.0;
    for p in &panels {
        value = value + p.value;
        error += p.error;
    }
    if !met {
        met = error <= spec.abs_tol.max(spec.rel_tol * value.magnitude());
    }
    QuadResult {
        value,
        error_estimate: error,
        evaluations: tally.evaluations,
        converged: met,
    }
}

fn plain<V: QuadValue>(mut f: impl FnMut(f64) -> V) -> impl FnMut(f64) -> QuadResult<V> {
    move |x| QuadResult::exact(f(x))
}

/// Truncation point used by [`integrate_decaying`].
pub fn truncation_point(scale: f64, spec: &QuadSpec) -> f64 {
    scale * 60f64.max(-spec.abs_tol.ln())
}

/// `∫_a^b f` for finite `a < b`.
pub fn integrate_interval<V: QuadValue>(f: impl FnMut(f64) -> V, a: f64, b: f64, spec: &QuadSpec) -> QuadResult<V> {
    adaptive(plain(f), &[a, 0.5 * (a + b), b], spec)
}

/// `∫_0^1 f`.
pub fn integrate_unit<V: QuadValue>(f: impl FnMut(f64) -> V, spec: &QuadSpec) -> QuadResult<V> {
    integrate_interval(f, 0.0, 1.0, spec)
}

/// `∫_0^1 f` with extra interior breakpoints (values outside `(0, 1)` are ignored).
pub fn integrate_unit_nested<V: QuadValue>(
    f: impl FnMut(f64) -> QuadResult<V>,
    breaks: &[f64],
    spec: &QuadSpec,
) -> QuadResult<V> {
    let mut pts = vec![0.0];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(1.0);
    if pts.len() == 2 {
        pts.insert(1, 0.5);
    }
    adaptive(f, &pts, spec)
}

/// `∫_0^∞ f` for an integrand damped like `e^{−x/scale}`.
///
/// The range is cut at [`truncation_point`]; the dropped tail is bounded by
/// `2·scale·max(|f(X)|, |f(X − scale)|/e)` and added to the error estimate.
pub fn integrate_decaying<V: QuadValue>(f: impl FnMut(f64) -> V, scale: f64, spec: &QuadSpec) -> QuadResult<V> {
    integrate_decaying_nested(plain(f), scale, spec)
}

/// Nested form of [`integrate_decaying`].
pub fn integrate_decaying_nested<V: QuadValue>(
    mut f: impl FnMut(f64) -> QuadResult<V>,
    scale: f64,
    spec: &QuadSpec,
) -> QuadResult<V> {
    let x_max = truncation_point(scale, spec);
    let mut pts = vec![0.0];
    for m in [0.125, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        if m * scale < x_max {
            pts.push(m * scale);
        }
    }
    pts.push(x_max);
    let mut r = adaptive(&mut f, &pts, spec);
    let at_end = f(x_max).value.magnitude();
    let before = f(x_max - scale).value.magnitude() * (-1.0f64).exp();
    r.error_estimate += 2.0 * scale * at_end.max(before);
    r.evaluations += 2;
    r
}

/// Integral along the contour `1 → 0 → i∞` in the complex `κ` plane:
/// `−∫_0^1 f(s) ds + i∫_0^∞ f(it) dt`.
///
/// `decay_scale` is the e-folding length of `|f(it)|` along the imaginary leg.
pub fn integrate_kappa_contour(
    mut f: impl FnMut(Complex64) -> Complex64,
    decay_scale: f64,
    spec: &QuadSpec,
) -> QuadResult<Complex64> {
    let real_leg = integrate_unit(|s| f(Complex64::new(s, 0.0)), spec);
    let imag_leg = integrate_decaying(|t| f(Complex64::new(0.0, t)), decay_scale, spec);
    QuadResult {
        value: -real_leg.value + Complex64::i() * imag_leg.value,
        error_estimate: real_leg.error_estimate + imag_leg.error_estimate,
        evaluations: real_leg.evaluations + imag_leg.evaluations,
        converged: real_leg.converged && imag_leg.converged,
    }
}
