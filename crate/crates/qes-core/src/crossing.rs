//! Level-crossing locator.
//!
//! Along the node-free branch a(b) of the spectral locus, the contour
//! integral of p_n^2 e^{2h} collapses to a finite combination of Ai and
//! Ai' through the moment identity
//!
//!   int z^k e^{2h} dz = 2^{-(k+1)/3} 2 pi i (-1)^k Ai^(k)(2^{2/3} b),
//!
//! so the self-orthogonality condition that marks a real level crossing
//! becomes a scalar equation phi(n, b) = 0. Crossings are bracketed by a
//! quarter-wavelength scan in b and pinned by bisection.

use crate::airy::airy;
use crate::error::{QesError, Result};
use crate::family::Family;
use crate::roots::complex_roots;
use num_complex::Complex64;
use serde::Serialize;

const ROOT_TOL: f64 = 1e-12;
/// A zero of p counts as real when its imaginary part is below this,
/// relative to its magnitude.
const REAL_ZERO_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrossingPoint {
    pub n: usize,
    /// 1-based index, counting down from b = 0.
    pub k: usize,
    pub b: f64,
    /// Eigenvalue of the crossing level, b^2 - 2 a(b).
    pub lambda: f64,
    pub phi_residual: f64,
    pub bracket_width: f64,
}

/// The coefficient a on the node-free branch: the unique real root of
/// Q*(a, b) whose eigenfunction polynomial has no real zero.
pub fn branch_a(fam: &Family, b: f64) -> Result<f64> {
    let coeffs = fam.qstar().eval_y_complex(Complex64::new(b, 0.0));
    let roots = complex_roots(&coeffs, ROOT_TOL)?;
    let mut node_free = Vec::new();
    for r in roots {
        if r.im.abs() > 1e-9 * (1.0 + r.re.abs()) {
            continue;
        }
        let a = Complex64::new(r.re, 0.0);
        let p = fam.p_complex_coeffs(a, Complex64::new(b, 0.0));
        let zeros = complex_roots(&p, ROOT_TOL)?;
        let real_zeros = zeros
            .iter()
            .filter(|z| z.im.abs() < REAL_ZERO_RTOL * (1.0 + z.norm()))
            .count();
        if real_zeros == 0 {
            node_free.push(r.re);
        }
    }
    match node_free.len() {
        1 => Ok(node_free[0]),
        0 => Err(QesError::BranchNotFound { m: 0, b }),
        _ => Err(QesError::AmbiguousBranch { b, candidates: node_free }),
    }
}

/// Crossing function: the contour integral of p^2 e^{2h} on the node-free
/// branch, up to the constant prefactor 2 pi i 2^{-1/3}.
pub fn phi(fam: &Family, b: f64) -> Result<f64> {
    let a = branch_a(fam, b)?;
    Ok(phi_at(fam, a, b))
}

/// Same reduction with the branch coefficient supplied by the caller.
pub fn phi_at(fam: &Family, a: f64, b: f64) -> f64 {
    let p = fam.p_complex_coeffs(Complex64::new(a, 0.0), Complex64::new(b, 0.0));
    let pr: Vec<f64> = p.iter().map(|c| c.re).collect();
    let deg = pr.len() - 1;
    let mut sq = vec![0.0f64; 2 * deg + 1];
    for (i, pi) in pr.iter().enumerate() {
        for (j, pj) in pr.iter().enumerate() {
            sq[i + j] += pi * pj;
        }
    }

    let s = 2f64.powf(2.0 / 3.0) * b;
    let v = airy(s);
    // Ai^(k+2) = s Ai^(k) + k Ai^(k-1), from differentiating Ai'' = s Ai
    let kmax = 2 * deg;
    let mut der = vec![0.0f64; kmax.max(1) + 1];
    der[0] = v.ai;
    if kmax >= 1 {
        der[1] = v.aip;
    }
    for k in 0..kmax.saturating_sub(1) {
        let prev = if k == 0 { 0.0 } else { der[k - 1] };
        der[k + 2] = s * der[k] + k as f64 * prev;
    }

    let w = 2f64.powf(-1.0 / 3.0);
    let mut total = 0.0;
    let mut sign = 1.0;
    let mut wk = 1.0;
    for (k, c) in sq.iter().enumerate() {
        total += c * sign * wk * der[k];
        sign = -sign;
        wk *= w;
    }
    total
}

/// First `count` crossings below b = 0, shallowest first.
///
/// Only even n carries a node-free branch (an odd-degree real polynomial
/// always has a real zero), so odd n is rejected up front.
pub fn find_crossings(fam: &Family, count: usize) -> Result<Vec<CrossingPoint>> {
    if fam.n() % 2 == 1 {
        return Err(QesError::Usage(format!(
            "crossing search needs an even polynomial degree (got n = {}); \
             odd degrees have no node-free branch",
            fam.n()
        )));
    }
    let mut out: Vec<CrossingPoint> = Vec::new();
    if count == 0 {
        return Ok(out);
    }

    let pi = std::f64::consts::PI;
    // generous overshoot past the asymptotic position of the last target
    let depth = -((0.75 * pi * (count as f64 + 3.0)).powf(2.0 / 3.0) + 6.0);
    let mut b_prev = -0.01;
    let mut f_prev = phi(fam, b_prev)?;
    while out.len() < count {
        let step = (pi / (8.0 * b_prev.abs().sqrt())).min(0.25);
        let b_next = b_prev - step;
        if b_next < depth {
            return Err(QesError::ScanInconclusive {
                lo: depth,
                hi: -0.01,
                detail: format!("found only {} of {} crossings", out.len(), count),
            });
        }
        let f_next = phi(fam, b_next)?;
        if f_prev * f_next < 0.0 || f_next == 0.0 {
            let k = out.len() + 1;
            let (b_root, width) = bisect_phi(fam, b_next, b_prev, f_next, f_prev)?;
            let a = branch_a(fam, b_root)?;
            out.push(CrossingPoint {
                n: fam.n(),
                k,
                b: b_root,
                lambda: b_root * b_root - 2.0 * a,
                phi_residual: phi_at(fam, a, b_root).abs(),
                bracket_width: width,
            });
        }
        b_prev = b_next;
        f_prev = f_next;
    }

    // Consecutive crossings must sit about one Airy half-period apart in
    // the stretched variable; a hole here means the scan jumped a root.
    for w in out.windows(2) {
        let z0 = (4.0 / 3.0) * w[0].b.abs().powf(1.5);
        let z1 = (4.0 / 3.0) * w[1].b.abs().powf(1.5);
        let gap = z1 - z0;
        if !(0.55 * pi..1.45 * pi).contains(&gap) {
            return Err(QesError::ScanInconclusive {
                lo: w[1].b,
                hi: w[0].b,
                detail: format!(
                    "stretched gap {:.3} between crossings departs from the half-period law",
                    gap
                ),
            });
        }
    }
    Ok(out)
}

fn bisect_phi(fam: &Family, mut lo: f64, mut hi: f64, mut f_lo: f64, f_hi: f64) -> Result<(f64, f64)> {
    debug_assert!(lo < hi && f_lo * f_hi <= 0.0);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..80 {
        mid = 0.5 * (lo + hi);
        if hi - lo < 1e-13 * (1.0 + mid.abs()) {
            break;
        }
        let f_mid = phi(fam, mid)?;
        if f_mid == 0.0 {
            return Ok((mid, hi - lo));
        }
        if f_mid * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok((mid, hi - lo))
}
