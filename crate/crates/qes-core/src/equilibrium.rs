//! Electrostatic equilibrium of the eigenfunction zeros.
//!
//! With h(z) = z^3/3 - bz, an eigenfunction p(z) e^{h(z)} solves the
//! oscillator exactly when the zeros z_k of p sit in equilibrium under
//! mutual Coulomb repulsion plus the background field h'(z) = z^2 - b:
//! sum over j != k of 1/(z_k - z_j), plus h'(z_k), vanishes for every k.
//!
//! Equivalently, p'' + 2h'p' is divisible by p. Both diagnostics are
//! computed here; on the spectral locus they vanish to rounding, off it
//! they are order one, which makes them a sharp membership test.

use crate::error::{QesError, Result};
use crate::family::Family;
use crate::roots::complex_roots;
use num_complex::Complex64;

/// Zeros too close together make the pairwise sums meaningless; below this
/// relative separation the report refuses to pretend otherwise.
const CLUSTER_RTOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub zeros: Vec<Complex64>,
    /// Force residual at each zero: pair repulsion plus background field.
    pub residuals: Vec<Complex64>,
    pub max_residual: f64,
    /// Residue kernel -(p'' + 2h'p')/p'^3 at each zero; these are the
    /// residues governing the certificate's partial fractions.
    pub kernel: Vec<Complex64>,
    /// Relative remainder of (p'' + 2h'p') / p; zero exactly on the locus.
    pub divisibility_defect: f64,
}

/// Diagnoses the zero configuration of p at a parameter point (a, b).
pub fn equilibrium_report(
    fam: &Family,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<EquilibriumReport> {
    let p = fam.p_complex_coeffs(a, b);
    let zeros = complex_roots(&p, tol)?;
    let scale = zeros.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..zeros.len() {
        for j in 0..i {
            let d = (zeros[i] - zeros[j]).norm();
            if d < CLUSTER_RTOL * scale {
                return Err(QesError::ClusteredRoots {
                    z1: zeros[j],
                    z2: zeros[i],
                    dist: d,
                });
            }
        }
    }

    let dp = derive(&p);
    let ddp = derive(&dp);
    let mut residuals = Vec::with_capacity(zeros.len());
    let mut kernel = Vec::with_capacity(zeros.len());
    for (k, &zk) in zeros.iter().enumerate() {
        let mut force = Complex64::ZERO;
        for (j, &zj) in zeros.iter().enumerate() {
            if j != k {
                force += (zk - zj).inv();
            }
        }
        let hp = zk * zk - b;
        residuals.push(force + hp);
        let d1 = eval(&dp, zk);
        let d2 = eval(&ddp, zk);
        kernel.push(-(d2 + 2.0 * hp * d1) / (d1 * d1 * d1));
    }
    let max_residual = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);

    // s = p'' + 2h'p', reduced mod p; the locus makes s a multiple of p
    let hp_poly = [-b, Complex64::ZERO, Complex64::ONE];
    let mut s = mul(&hp_poly, &dp);
    for c in s.iter_mut() {
        *c *= 2.0;
    }
    for (k, c) in ddp.iter().enumerate() {
        s[k] += c;
    }
    let rem = rem_monic(&s, &p);
    let smag = s.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let rmag = rem.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let divisibility_defect = rmag / (1.0 + smag);

    Ok(EquilibriumReport {
        zeros,
        residuals,
        max_residual,
        kernel,
        divisibility_defect,
    })
}

fn derive(c: &[Complex64]) -> Vec<Complex64> {
    if c.len() <= 1 {
        return vec![];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, ck)| ck * (k as f64))
        .collect()
}

fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for ck in c.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex64::ZERO; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Remainder of num / den for monic den, ascending coefficients.
fn rem_monic(num: &[Complex64], den: &[Complex64]) -> Vec<Complex64> {
    let dd = den.len() - 1;
    let mut rem: Vec<Complex64> = num.to_vec();
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem[rem.len() - 1];
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
        rem.pop();
    }
    rem
}
