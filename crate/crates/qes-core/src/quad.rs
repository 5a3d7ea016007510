//! Adaptive contour quadrature for analytic integrands.
//!
//! Gauss-Kronrod 7-15 panels on straight segments, globally adaptive: the
//! segment with the worst embedded-error estimate is split until the total
//! meets tolerance. Endpoints are never evaluated, so integrable endpoint
//! blowups and truncated rays to infinity pose no problem.

use crate::error::{QesError, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]; nonnegative
// abscissae, symmetric continuation implied. Odd indices are Gauss nodes.
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

const MAX_PANELS: usize = 4096;

struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
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

/// Integral of f along the straight segment from z0 to z1, with an error
/// estimate. Tolerance is met when the summed panel errors fall below
/// max(atol, rtol * |integral|).
pub fn integrate_segment<F>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    rtol: f64,
    atol: f64,
) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Complex64,
{
    let dz = z1 - z0;
    let eval = |t: f64| f(z0 + t * dz) * dz;

    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&eval, 0.0, 1.0)?;
    heap.push(Panel { lo: 0.0, hi: 1.0, value: v, error: e });
    let mut total = v;
    let mut total_err = e;

    while total_err > atol.max(rtol * total.norm()) {
        if heap.len() >= MAX_PANELS {
            return Err(QesError::QuadratureNoConvergence {
                estimate: total_err,
                requested: atol.max(rtol * total.norm()),
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(QesError::QuadratureNoConvergence {
                estimate: total_err,
                requested: atol.max(rtol * total.norm()),
            });
        }
        let (vl, el) = gk15(&eval, worst.lo, mid)?;
        let (vr, er) = gk15(&eval, mid, worst.hi)?;
        total += vl + vr - worst.value;
        total_err += el + er - worst.error;
        heap.push(Panel { lo: worst.lo, hi: mid, value: vl, error: el });
        heap.push(Panel { lo: mid, hi: worst.hi, value: vr, error: er });
    }
    Ok((total, total_err))
}

/// Integral along the polyline through the given points.
pub fn integrate_path<F>(
    f: &F,
    points: &[Complex64],
    rtol: f64,
    atol: f64,
) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Complex64,
{
    if points.len() < 2 {
        return Err(QesError::Usage("path needs at least two points".into()));
    }
    let mut total = Complex64::ZERO;
    let mut err = 0.0;
    let seg_atol = atol / (points.len() - 1) as f64;
    for w in points.windows(2) {
        let (v, e) = integrate_segment(f, w[0], w[1], rtol, seg_atol)?;
        total += v;
        err += e;
    }
    Ok((total, err))
}

fn gk15<F>(eval: &F, lo: f64, hi: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut kron = WGK[7] * eval(c);
    let mut gauss = WG[3] * eval(c);
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let fp = eval(c + h * x);
        let fm = eval(c - h * x);
        kron += WGK[i] * (fp + fm);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fp + fm);
        }
    }
    kron *= h;
    gauss *= h;
    if !kron.re.is_finite() || !kron.im.is_finite() {
        return Err(QesError::Usage(
            "integrand returned a non-finite value on the contour".into(),
        ));
    }
    Ok((kron, (kron - gauss).norm()))
}
