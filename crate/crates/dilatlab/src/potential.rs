//! Potential families, dilated evaluation, and L^p norms of dilated samples.

use crate::angle::ComplexAngle;
use crate::error::{Error, Result};
use crate::quad::{self, DEFAULT_TOL};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Pointwise map applied before taking an L^p norm.
///
/// `ReMinus` is the negative part (Re f)_- = max(-Re f, 0); the others follow
/// the same convention. All four produce nonnegative values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartMap {
    ReMinus,
    RePlus,
    ImPlus,
    AbsWhole,
}

/// Apply a part map to one complex sample.
pub fn negative_part(value: Complex64, mode: PartMap) -> f64 {
    match mode {
        PartMap::ReMinus => (-value.re).max(0.0),
        PartMap::RePlus => value.re.max(0.0),
        PartMap::ImPlus => value.im.max(0.0),
        PartMap::AbsWhole => value.norm(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// e^(-c x^2) with Re c > 0.
    Gaussian { c: Complex64 },
    /// c (1+x^2)^(-s) with s > 0, principal branch.
    Rational { c: Complex64, s: f64 },
    /// -depth on [-halfwidth, halfwidth], zero outside. Negative depth is a barrier.
    FiniteWell { depth: f64, halfwidth: f64 },
    /// Uniformly sampled values with linear interpolation; real angle only.
    Tabulated { x0: f64, dx: f64, values: Vec<Complex64> },
}

/// A potential: a family together with a real amplitude prefactor.
///
/// The prefactor keeps the catalog expressive (attractive wells like
/// -1.2 e^(-x^2)) while family parameters stay in the form the closed-form
/// norm expressions expect.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    family: Family,
    amplitude: f64,
}

impl Potential {
    pub fn gaussian(c: Complex64, amplitude: f64) -> Result<Self> {
        if !(c.re > 0.0) || !c.is_finite() {
            return Err(Error::WrongRegime(format!(
                "gaussian coefficient must have Re c > 0, got {c}"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::validation("potential.amplitude", "must be finite"));
        }
        Ok(Potential { family: Family::Gaussian { c }, amplitude })
    }

    pub fn rational(c: Complex64, s: f64, amplitude: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::validation("potential.s", "exponent must be positive"));
        }
        if !c.is_finite() || !amplitude.is_finite() {
            return Err(Error::validation("potential", "parameters must be finite"));
        }
        Ok(Potential { family: Family::Rational { c, s }, amplitude })
    }

    pub fn finite_well(depth: f64, halfwidth: f64, amplitude: f64) -> Result<Self> {
        if !(halfwidth > 0.0) || !halfwidth.is_finite() {
            return Err(Error::validation("potential.halfwidth", "must be positive"));
        }
        if !depth.is_finite() || !amplitude.is_finite() {
            return Err(Error::validation("potential", "parameters must be finite"));
        }
        Ok(Potential { family: Family::FiniteWell { depth, halfwidth }, amplitude })
    }

    pub fn tabulated(x0: f64, dx: f64, values: Vec<Complex64>, amplitude: f64) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::validation("potential.samples", "grid must be finite with dx > 0"));
        }
        if values.len() < 3 {
            return Err(Error::validation("potential.samples", "need at least 3 samples"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("potential.samples", "samples must be finite"));
        }
        Ok(Potential { family: Family::Tabulated { x0, dx, values }, amplitude })
    }

    /// Build a tabulated potential from explicit sample points, which must be
    /// uniformly spaced.
    pub fn tabulated_from_points(xs: &[f64], values: Vec<Complex64>, amplitude: f64) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::validation("potential.samples", "x and value counts differ"));
        }
        if xs.len() < 3 {
            return Err(Error::validation("potential.samples", "need at least 3 samples"));
        }
        let dx = xs[1] - xs[0];
        if !(dx > 0.0) {
            return Err(Error::validation("potential.samples", "x grid must be increasing"));
        }
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx {
                return Err(Error::validation("potential.samples", "x grid must be uniform"));
            }
        }
        Potential::tabulated(xs[0], dx, values, amplitude)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// True when every sample of V is real.
    pub fn is_real(&self) -> bool {
        match &self.family {
            Family::Gaussian { c } | Family::Rational { c, .. } => c.im == 0.0,
            Family::FiniteWell { .. } => true,
            Family::Tabulated { values, .. } => values.iter().all(|v| v.im == 0.0),
        }
    }

    /// True when the potential is identically zero.
    pub fn is_zero(&self) -> bool {
        if self.amplitude == 0.0 {
            return true;
        }
        match &self.family {
            Family::Gaussian { .. } => false,
            Family::Rational { c, .. } => *c == Complex64::new(0.0, 0.0),
            Family::FiniteWell { depth, .. } => *depth == 0.0,
            Family::Tabulated { values, .. } => values.iter().all(|v| v.norm() == 0.0),
        }
    }

    /// Analyticity strip half-width: the largest alpha such that every
    /// |phi| < alpha is an admissible dilation angle.
    pub fn alpha(&self) -> f64 {
        if self.is_zero() {
            return f64::INFINITY;
        }
        match &self.family {
            Family::Gaussian { c } => FRAC_PI_4 - 0.5 * c.arg().abs(),
            Family::Rational { .. } => FRAC_PI_2,
            Family::FiniteWell { .. } | Family::Tabulated { .. } => 0.0,
        }
    }

    /// The full admissible interval of dilation angles (open, possibly
    /// asymmetric). For the Gaussian family this is where the dilated sample
    /// keeps Gaussian decay; the symmetric strip `alpha()` is its largest
    /// symmetric sub-interval.
    pub fn admissible_interval(&self) -> (f64, f64) {
        if self.is_zero() {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        match &self.family {
            Family::Gaussian { c } => {
                let shift = 0.5 * c.arg();
                (-FRAC_PI_4 - shift, FRAC_PI_4 - shift)
            }
            Family::Rational { .. } => (-FRAC_PI_2, FRAC_PI_2),
            Family::FiniteWell { .. } | Family::Tabulated { .. } => (0.0, 0.0),
        }
    }

    /// Distance from `phi` to the nearest admissibility boundary.
    pub fn admissibility_margin(&self, phi: f64) -> f64 {
        let (lo, hi) = self.admissible_interval();
        (phi - lo).min(hi - phi)
    }

    fn check_angle(&self, phi: f64) -> Result<()> {
        let (lo, hi) = self.admissible_interval();
        let ok = if lo == hi { phi == lo } else { phi > lo && phi < hi };
        if ok {
            Ok(())
        } else {
            Err(Error::AngleOutOfStrip { phi, lo, hi })
        }
    }

    /// Evaluate the dilated sample V_theta(x) = V(e^theta x).
    pub fn evaluate_dilated(&self, theta: ComplexAngle, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(Error::validation("x", "must be finite"));
        }
        let phi = theta.phi();
        self.check_angle(phi)?;
        if let Family::Rational { .. } = self.family {
            let w = Complex64::new(1.0, 0.0) + theta.squared_factor() * (x * x);
            if w.im == 0.0 && w.re <= 0.0 {
                return Err(Error::BranchCut { phi, x });
            }
        }
        Ok(self.eval_unchecked(phi, x))
    }

    // Hot-loop evaluation; the angle has been validated by the caller.
    fn eval_unchecked(&self, phi: f64, x: f64) -> Complex64 {
        let e2 = Complex64::from_polar(1.0, 2.0 * phi);
        match &self.family {
            Family::Gaussian { c } => (-(c * e2) * (x * x)).exp() * self.amplitude,
            Family::Rational { c, s } => {
                let w = Complex64::new(1.0, 0.0) + e2 * (x * x);
                c * w.powf(-s) * self.amplitude
            }
            Family::FiniteWell { depth, halfwidth } => {
                if x.abs() <= *halfwidth {
                    Complex64::new(-depth * self.amplitude, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Family::Tabulated { x0, dx, values } => {
                let t = (x - x0) / dx;
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let j = (t.floor() as usize).min(values.len() - 2);
                let frac = t - j as f64;
                (values[j] * (1.0 - frac) + values[j + 1] * frac) * self.amplitude
            }
        }
    }

    /// ||part(e^(i*phase) V_theta)||_p^p, the norm integral itself.
    pub fn part_norm_pow(
        &self,
        theta: ComplexAngle,
        phase: f64,
        mode: PartMap,
        p: f64,
        tol: f64,
    ) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::validation("p", "norm exponent must be >= 1"));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let phi = theta.phi();
        self.check_angle(phi)?;
        let rot = Complex64::from_polar(1.0, phase);

        match &self.family {
            Family::FiniteWell { depth, halfwidth } => {
                let v = Complex64::new(-depth * self.amplitude, 0.0);
                Ok(negative_part(rot * v, mode).powf(p) * 2.0 * halfwidth)
            }
            Family::Tabulated { dx, values, .. } => {
                let g: Vec<f64> = values
                    .iter()
                    .map(|v| negative_part(rot * v * self.amplitude, mode).powf(p))
                    .collect();
                Ok(simpson_uniform(&g, *dx))
            }
            Family::Gaussian { c } => {
                let ce2 = c * Complex64::from_polar(1.0, 2.0 * phi);
                let decay = ce2.re;
                if decay <= 0.0 {
                    return Err(Error::NonIntegrable {
                        reason: format!(
                            "dilated gaussian decay coefficient {decay:.6e} <= 0 at phi = {phi}"
                        ),
                    });
                }
                let a = p * decay;
                let amp_p = self.amplitude.abs().powf(p);
                let scale = amp_p * (PI / a).sqrt();
                let tail_target = 0.05 * tol * scale;
                let x_cut = gaussian_tail_cut(a, amp_p, tail_target);
                let periods = ce2.im.abs() * x_cut * x_cut / PI;
                let initial = if mode == PartMap::AbsWhole {
                    16
                } else {
                    (8.0 + periods).min(80_000.0) as usize
                };
                let out = quad::integrate(
                    |x| negative_part(rot * self.eval_unchecked(phi, x), mode).powf(p),
                    -x_cut,
                    x_cut,
                    tol,
                    tail_target,
                    initial,
                )?;
                Ok(out.value.max(0.0))
            }
            Family::Rational { c, s } => {
                let sp = s * p;
                if 2.0 * sp <= 1.0 {
                    return Err(Error::NonIntegrable {
                        reason: format!("rational tail exponent 2 s p = {:.3} <= 1", 2.0 * sp),
                    });
                }
                let a_p = (self.amplitude.abs() * c.norm()).powf(p);
                if a_p == 0.0 {
                    return Ok(0.0);
                }
                let tail_target = 0.05 * tol * a_p;
                let x_cut = rational_tail_cut(sp, a_p, tail_target);
                // dyadic shells out to the cut: slowly decaying tails make the
                // cut enormous, and uniform panels would hide the core
                let mut bounds = vec![0.0, 0.25, 0.5, 1.0];
                let mut edge = 1.0f64;
                while edge < x_cut {
                    edge = (edge * 2.0).min(x_cut);
                    bounds.push(edge);
                }
                let neg: Vec<f64> = bounds.iter().rev().map(|x| -x).collect();
                let all: Vec<f64> = neg.into_iter().chain(bounds.into_iter().skip(1)).collect();
                let out = quad::integrate_segments(
                    |x| negative_part(rot * self.eval_unchecked(phi, x), mode).powf(p),
                    &all,
                    tol,
                    tail_target,
                )?;
                Ok(out.value.max(0.0))
            }
        }
    }

    /// ||part(e^(i*phase) V_theta)||_p.
    pub fn part_norm(
        &self,
        theta: ComplexAngle,
        phase: f64,
        mode: PartMap,
        p: f64,
        tol: f64,
    ) -> Result<f64> {
        Ok(self.part_norm_pow(theta, phase, mode, p, tol)?.powf(1.0 / p))
    }

    /// Config-facing description, stable across runs.
    pub fn describe(&self) -> String {
        let amp = self.amplitude;
        match &self.family {
            Family::Gaussian { c } => format!("gaussian(c={}+{}i, amplitude={})", c.re, c.im, amp),
            Family::Rational { c, s } => {
                format!("rational(c={}+{}i, s={}, amplitude={})", c.re, c.im, s, amp)
            }
            Family::FiniteWell { depth, halfwidth } => {
                format!("finite_well(depth={depth}, halfwidth={halfwidth}, amplitude={amp})")
            }
            Family::Tabulated { x0, dx, values } => format!(
                "tabulated(x0={x0}, dx={dx}, n={}, amplitude={amp})",
                values.len()
            ),
        }
    }
}

/// ||V_theta||_p by adaptive quadrature at the default tolerance.
pub fn lp_norm_quadrature(v: &Potential, theta: ComplexAngle, p: f64) -> Result<f64> {
    v.part_norm(theta, 0.0, PartMap::AbsWhole, p, DEFAULT_TOL)
}

/// ||V_theta||_p by adaptive quadrature at a caller-chosen relative tolerance.
pub fn lp_norm_quadrature_tol(v: &Potential, theta: ComplexAngle, p: f64, tol: f64) -> Result<f64> {
    v.part_norm(theta, 0.0, PartMap::AbsWhole, p, tol)
}

/// Decay coefficient of the dilated Gaussian sample:
/// Re(c e^(2 i phi)) = (Re c) cos 2phi - (Im c) sin 2phi.
pub fn gaussian_decay_coefficient(c: Complex64, phi: f64) -> f64 {
    c.re * (2.0 * phi).cos() - c.im * (2.0 * phi).sin()
}

/// Strict decay condition for the dilated Gaussian.
pub fn cphi_condition(c: Complex64, phi: f64) -> bool {
    gaussian_decay_coefficient(c, phi) > 0.0
}

/// Closed form for the L^p norm of the unit-amplitude dilated Gaussian:
/// [pi / (((Re c) cos 2phi - (Im c) sin 2phi) * p)]^(1/(2p)).
pub fn gaussian_norm_closed_form(c: Complex64, phi: f64, p: f64) -> Result<f64> {
    if !(c.re > 0.0) {
        return Err(Error::WrongRegime(format!("need Re c > 0, got {c}")));
    }
    if !(p >= 1.0) {
        return Err(Error::validation("p", "norm exponent must be >= 1"));
    }
    let f = gaussian_decay_coefficient(c, phi);
    if f <= 0.0 {
        return Err(Error::ConditionViolated { margin: f });
    }
    Ok((PI / (f * p)).powf(0.5 / p))
}

/// Angle at which the dilated-Gaussian norm switches from decreasing to
/// increasing: (1/2) Arctan(-Im c / Re c). Defined for Re c > 0, Im c < 0.
pub fn critical_angle(c: Complex64) -> Result<f64> {
    if !(c.re > 0.0) || !(c.im < 0.0) {
        return Err(Error::WrongRegime(format!(
            "critical angle needs Re c > 0 and Im c < 0, got {c}"
        )));
    }
    Ok(0.5 * (-c.im / c.re).atan())
}

/// One row of a norm scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanPoint {
    pub phi: f64,
    pub norm: f64,
    /// Sign of the change from the previous grid point: -1, 0, or +1.
    pub direction: i8,
}

/// Evaluate ||V_(i phi)||_p over a grid of angles and record the
/// finite-difference direction of successive norms.
pub fn norm_monotonicity_scan(v: &Potential, p: f64, phi_grid: &[f64]) -> Result<Vec<ScanPoint>> {
    let mut out = Vec::with_capacity(phi_grid.len());
    let mut prev: Option<f64> = None;
    for &phi in phi_grid {
        let norm = lp_norm_quadrature(v, ComplexAngle::new(phi), p)?;
        let direction = match prev {
            None => 0,
            Some(q) => {
                let d = norm - q;
                if d.abs() <= 1e-12 * norm.abs().max(1.0) {
                    0
                } else if d > 0.0 {
                    1
                } else {
                    -1
                }
            }
        };
        out.push(ScanPoint { phi, norm, direction });
        prev = Some(norm);
    }
    Ok(out)
}

// Solve e^(-a X^2)/(a X) = target/amp_p for X by two fixed-point passes.
fn gaussian_tail_cut(a: f64, amp_p: f64, target: f64) -> f64 {
    let floor = 2.0 / a.sqrt();
    let mut x = (1.0f64.max((amp_p / (target * a)).ln()) / a).sqrt().max(floor);
    for _ in 0..2 {
        let arg = amp_p / (target * a * x);
        if arg > 1.0 {
            x = (arg.ln() / a).sqrt().max(floor);
        }
    }
    1.05 * x
}

// Solve 2 A^p 2^(sp) X^(1-2sp) / (2sp-1) = target for X.
fn rational_tail_cut(sp: f64, a_p: f64, target: f64) -> f64 {
    let base = 2.0 * a_p * 2f64.powf(sp) / (target * (2.0 * sp - 1.0));
    (base.powf(1.0 / (2.0 * sp - 1.0))).max(2.0) * 1.05
}

// Composite Simpson for uniformly sampled nonnegative data; a trapezoid
// patches the final interval when the sample count is even.
fn simpson_uniform(g: &[f64], dx: f64) -> f64 {
    let n = g.len();
    debug_assert!(n >= 3);
    let odd_span = if n % 2 == 1 { n } else { n - 1 };
    let mut sum = g[0] + g[odd_span - 1];
    for (j, &v) in g.iter().enumerate().take(odd_span - 1).skip(1) {
        sum += if j % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = sum * dx / 3.0;
    if n % 2 == 0 {
        total += 0.5 * (g[n - 2] + g[n - 1]) * dx;
    }
    total
}
