//! Simultaneous complex root finding.
//!
//! Aberth-Ehrlich iteration: every root estimate takes a Newton step damped
//! by the repulsion of the other estimates, giving cubic convergence to
//! simple roots without deflation. Degrees here stay small (the family cap
//! is 16), so no clustering safeguards beyond jitter are needed.

use crate::error::{QesError, Result};
use num_complex::Complex64;

const MAX_ITERATIONS: usize = 120;

/// Roots of a polynomial given by ascending complex coefficients.
///
/// Convergence is declared when every correction falls below
/// `tol * (1 + |z|)`. Roots are sorted by (real, imaginary) part.
pub fn complex_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(QesError::Usage("non-finite polynomial coefficient".into()));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(QesError::Usage("zero polynomial has no root set".into()));
    }
    let mut c: Vec<Complex64> = coeffs.iter().map(|x| x / scale).collect();
    while c.last().is_some_and(|x| x.norm() < 1e-250) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lc = c[n];
    if lc.norm() < 1e-14 {
        return Err(QesError::DegenerateLeading(lc.norm() * scale));
    }
    for x in c.iter_mut() {
        *x /= lc;
    }
    if n == 1 {
        return Ok(vec![-c[0]]);
    }

    // Cauchy bound on root magnitude, shrunk onto a starting circle.
    let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let r0 = 0.5 + 0.5 * bound.min(1e6);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64) + 0.4;
            r0 * Complex64::from_polar(1.0, theta)
        })
        .collect();

    let noise = 4.0 * (n as f64) * f64::EPSILON;
    let mut frozen = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let (p, dp, mag) = horner_with_derivative(&c, z[i]);
            // Below the Horner rounding bound the value is numerically zero;
            // asking for smaller steps would only chase evaluation noise.
            if p.norm() <= noise * mag {
                frozen[i] = true;
                continue;
            }
            let w = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut repulsion = Complex64::ZERO;
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() < 1e-300 {
                        repulsion += 1e12;
                    } else {
                        repulsion += d.inv();
                    }
                }
            }
            let denom = Complex64::ONE - w * repulsion;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step <= tol {
            let mut out = z;
            out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            return Ok(out);
        }
    }

    let residual = z
        .iter()
        .map(|&zi| horner_with_derivative(&c, zi).0.norm())
        .fold(0.0, f64::max);
    Err(QesError::RootsNotConverged { iters: MAX_ITERATIONS, residual })
}

/// Value, derivative, and the magnitude sum of the Horner recurrence (the
/// scale of the evaluation's rounding error).
fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::ZERO;
    let mut dp = Complex64::ZERO;
    let mut mag = 0.0;
    let zn = z.norm();
    for ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
        mag = mag * zn + ck.norm();
    }
    (p, dp, mag)
}

/// Convenience wrapper for real coefficient slices.
pub fn complex_roots_real(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    complex_roots(&c, tol)
}

/// |p(z)| over the Horner magnitude sum: the backward-error sense of "how
/// close z is to a root", independent of coefficient scale.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _, mag) = horner_with_derivative(coeffs, z);
    if mag == 0.0 {
        return 0.0;
    }
    p.norm() / mag
}

/// Fuses roots of a real-coefficient polynomial into exact conjugate pairs.
///
/// Aberth leaves conjugates agreeing only to rounding noise, which makes
/// (re, im) orderings flip from run to run. Each root above the axis is
/// averaged with its mirror partner when one matches tightly.
pub fn pair_conjugates(roots: &mut [Complex64]) {
    let k = roots.len();
    let mut used = vec![false; k];
    for i in 0..k {
        if used[i] || roots[i].im <= 0.0 {
            continue;
        }
        let target = roots[i].conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, r) in roots.iter().enumerate() {
            if used[j] || j == i || r.im >= 0.0 {
                continue;
            }
            let d = (r - target).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= 1e-8 * (1.0 + target.norm()) {
                let w = 0.5 * (roots[i] + roots[j].conj());
                roots[i] = w;
                roots[j] = w.conj();
                used[i] = true;
                used[j] = true;
            }
        }
    }
}
