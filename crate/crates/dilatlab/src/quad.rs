//! Adaptive panel quadrature built on the 15-point Gauss-Kronrod rule.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Default relative tolerance for norm integrals.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_PANELS: usize = 400_000;

// 15-point Kronrod abscissae on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
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

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss-Kronrod pass over [a, b]; returns the Kronrod value and an error estimate.
fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_gauss = fc * WG[3];
    let mut result_kronrod = fc * WGK[7];
    let mut result_abs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (fv[7] - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = result_kronrod * half;
    let abs = result_abs * half.abs();
    let asc = result_asc * half.abs();

    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let underflow_guard = 50.0 * f64::EPSILON * abs;
    if underflow_guard > f64::MIN_POSITIVE {
        err = err.max(underflow_guard);
    }

    Panel { a, b, value, error: err }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

/// Adaptively integrate `f` over [a, b].
///
/// Refinement stops when the accumulated error estimate drops below
/// `rel_tol * |integral|` or below `abs_floor`, whichever is larger.
/// `initial` pre-splits the interval uniformly, which pays off for
/// oscillatory integrands whose structure the first panels would miss.
pub fn integrate(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    initial: usize,
) -> Result<QuadOutcome> {
    assert!(a.is_finite() && b.is_finite() && a < b);
    let n0 = initial.clamp(1, MAX_PANELS / 2);
    let width = (b - a) / n0 as f64;
    let mut bounds = Vec::with_capacity(n0 + 1);
    for k in 0..n0 {
        bounds.push(a + k as f64 * width);
    }
    bounds.push(b);
    integrate_segments(f, &bounds, rel_tol, abs_floor)
}

/// Adaptive integration over explicitly chosen initial panels.
///
/// Wildly nonuniform spans (a sharp core inside an enormous tail interval)
/// defeat uniform pre-splitting: every node of a giant panel can miss the
/// core, leaving a tiny error estimate on a panel hiding most of the mass.
/// Callers that know their scales pass graded boundaries instead.
pub fn integrate_segments(
    mut f: impl FnMut(f64) -> f64,
    bounds: &[f64],
    rel_tol: f64,
    abs_floor: f64,
) -> Result<QuadOutcome> {
    assert!(bounds.len() >= 2, "need at least one panel");
    assert!(
        bounds.windows(2).all(|w| w[0].is_finite() && w[1].is_finite() && w[0] < w[1]),
        "boundaries must be finite and strictly increasing"
    );

    let mut heap: BinaryHeap<Panel> = BinaryHeap::with_capacity(bounds.len() + 64);
    let mut sum = 0.0;
    let mut errsum = 0.0;
    for w in bounds.windows(2) {
        let p = gk15(&mut f, w[0], w[1]);
        sum += p.value;
        errsum += p.error;
        heap.push(p);
    }

    while errsum > (rel_tol * sum.abs()).max(abs_floor) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::ToleranceNotMet {
                achieved: errsum / sum.abs().max(f64::MIN_POSITIVE),
                requested: rel_tol,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel narrower than the floating-point grid; accept its estimate.
            errsum -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        sum += left.value + right.value - worst.value;
        errsum += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    Ok(QuadOutcome {
        value: sum,
        abs_error: errsum,
        panels: heap.len(),
    })
}
