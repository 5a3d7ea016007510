//! The quasi-exactly-solvable family itself.
//!
//! At J = n + 1 the oscillator y'' - (z^4 - 2bz^2 + 2Jz)y = lambda y admits
//! n + 1 eigenfunctions of the form p(z) exp(z^3/3 - bz) with p monic of
//! degree n. Writing p(z) = sum_j a_j z^{n-j} and a = a_1, the ODE forces
//! the three-term recurrence built here, and closes with one scalar
//! condition Qstar(b, a) = 0 that carves out the spectral locus. The
//! eigenvalue is lambda = b^2 - 2a, which turns Qstar into the spectral
//! polynomial Q(b, lambda).

use crate::bipoly::BiPoly;
use crate::error::{QesError, Result};
use crate::rational::{rat, rat_int, Rational};
use crate::roots::{complex_roots, pair_conjugates, relative_residual};
use crate::unipoly::{UniPoly, Var};
use num_complex::Complex64;
use num_traits::One;
use serde_json::{json, Value};

/// Degrees beyond this make the exact bivariate arithmetic balloon without
/// telling us anything new; every workflow in the crate stays well under it.
pub const MAX_FAMILY_N: usize = 16;

/// One point of the discrete spectrum at a fixed b.
#[derive(Debug, Clone, Copy)]
pub struct SpectralPoint {
    pub lambda: Complex64,
    /// Root of Qstar(b, .), the linear coefficient of p.
    pub a: Complex64,
    /// Relative backward error of a as a root of Qstar(b, .).
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct Family {
    n: usize,
    /// a_j(a, b) for j = 0..=n; coefficient of z^{n-j} in p.
    coeffs: Vec<BiPoly>,
    /// Monic in a, degree n + 1: the spectral-locus polynomial.
    qstar: BiPoly,
    /// Monic in lambda: qstar with a = (b^2 - lambda)/2.
    qlambda: BiPoly,
}

impl Family {
    pub fn build(n: usize) -> Result<Family> {
        if n > MAX_FAMILY_N {
            return Err(QesError::Usage(format!(
                "family degree {} exceeds the supported cap {}",
                n, MAX_FAMILY_N
            )));
        }
        let (xv, yv) = (Var::A, Var::B);
        let a_mono = BiPoly::term(xv, yv, 1, 0, Rational::one());
        let b_mono = BiPoly::term(xv, yv, 0, 1, Rational::one());

        let mut coeffs = vec![BiPoly::one(xv, yv)];
        for j in 1..=n {
            let mut t = a_mono.checked_mul(&coeffs[j - 1])?;
            if j >= 2 {
                let w = rat_int(-((n - j + 2) as i64));
                t = t.checked_add(&b_mono.checked_mul(&coeffs[j - 2])?.scale(&w))?;
            }
            if j >= 3 {
                let w = rat_int(((n - j + 2) * (n - j + 3) / 2) as i64);
                t = t.checked_add(&coeffs[j - 3].scale(&w))?;
            }
            coeffs.push(t.scale(&rat(1, j as i64)));
        }

        // The z^0 coefficient of the ODE residual: a a_n - b a_{n-1} + a_{n-2}.
        let mut qstar = a_mono.checked_mul(&coeffs[n])?;
        if n >= 1 {
            qstar = qstar.checked_sub(&b_mono.checked_mul(&coeffs[n - 1])?)?;
        }
        if n >= 2 {
            qstar = qstar.checked_add(&coeffs[n - 2])?;
        }
        let qstar = qstar.make_monic_in_x()?;

        let half_bb_minus_lambda = {
            let bb = BiPoly::term(Var::Lambda, Var::B, 0, 2, rat(1, 2));
            let l = BiPoly::term(Var::Lambda, Var::B, 1, 0, rat(-1, 2));
            bb.checked_add(&l)?
        };
        let b_in_lambda_vars = BiPoly::term(Var::Lambda, Var::B, 0, 1, Rational::one());
        let qlambda = qstar
            .substitute(&half_bb_minus_lambda, &b_in_lambda_vars)?
            .make_monic_in_x()?;

        Ok(Family { n, coeffs, qstar, qlambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// a_j(a, b), the coefficient of z^{n-j} in p.
    pub fn coeff(&self, j: usize) -> &BiPoly {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BiPoly] {
        &self.coeffs
    }

    pub fn qstar(&self) -> &BiPoly {
        &self.qstar
    }

    pub fn qlambda(&self) -> &BiPoly {
        &self.qlambda
    }

    /// p as an exact polynomial in z at a rational parameter point.
    pub fn p_unipoly_z(&self, a: &Rational, b: &Rational) -> UniPoly {
        let mut asc = vec![Rational::one(); self.n + 1];
        for (j, cj) in self.coeffs.iter().enumerate() {
            asc[self.n - j] = cj.eval_rational(a, b);
        }
        UniPoly::new(Var::Z, asc)
    }

    /// Ascending complex coefficients of p at a parameter point.
    pub fn p_complex_coeffs(&self, a: Complex64, b: Complex64) -> Vec<Complex64> {
        let mut asc = vec![Complex64::ONE; self.n + 1];
        for (j, cj) in self.coeffs.iter().enumerate() {
            asc[self.n - j] = cj.eval_complex(a, b);
        }
        asc
    }

    /// The full discrete spectrum at real b, sorted by (Re, Im) of lambda.
    ///
    /// Roots are found on Qstar in the a variable, where the polynomial is
    /// best conditioned, then mapped through lambda = b^2 - 2a.
    pub fn eigenvalues_at(&self, b: f64, tol: f64) -> Result<Vec<SpectralPoint>> {
        let qa = self.qstar.eval_y_complex(Complex64::new(b, 0.0));
        let mut roots = complex_roots(&qa, tol)?;
        pair_conjugates(&mut roots);
        let mut out: Vec<SpectralPoint> = roots
            .into_iter()
            .map(|a| SpectralPoint {
                lambda: Complex64::new(b * b, 0.0) - 2.0 * a,
                a,
                residual: relative_residual(&qa, a),
            })
            .collect();
        out.sort_by(|p, q| {
            p.lambda
                .re
                .total_cmp(&q.lambda.re)
                .then(p.lambda.im.total_cmp(&q.lambda.im))
        });
        Ok(out)
    }

    /// Serializes the exact data: every polynomial as a list of
    /// [x_power, y_power, numerator, denominator] entries.
    pub fn to_json(&self) -> Value {
        let terms = |p: &BiPoly| -> Value {
            Value::Array(
                p.to_term_strings()
                    .into_iter()
                    .map(|(m, k, num, den)| json!([m, k, num, den]))
                    .collect(),
            )
        };
        json!({
            "schema": "qes.family/1",
            "n": self.n,
            "j_parameter": self.n + 1,
            "p_coeffs": self.coeffs.iter().map(terms).collect::<Vec<_>>(),
            "qstar": terms(&self.qstar),
            "qlambda": terms(&self.qlambda),
        })
    }
}
