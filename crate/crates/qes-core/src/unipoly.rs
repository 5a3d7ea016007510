//! Dense univariate polynomials over the rationals, tagged by variable.
//!
//! Coefficients are stored in ascending order of degree with no trailing
//! zeros. Arithmetic between polynomials in different variables is a usage
//! error; constants unify with any variable.

use crate::error::{QesError, Result};
use crate::rational::{rat_to_f64, Rational};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Variable tag carried by every polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Spatial variable of the eigenfunction polynomial p_n.
    Z,
    /// Linear coefficient of p_n, the second spectral parameter.
    A,
    /// Quadratic-well parameter.
    B,
    /// Eigenvalue.
    Lambda,
    /// Rescaled Airy argument.
    S,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::A => "a",
            Var::B => "b",
            Var::Lambda => "lambda",
            Var::S => "s",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    var: Var,
    coeffs: Vec<Rational>,
}

/// Picks the common variable of two operands; a constant adopts the other
/// operand's variable.
pub(crate) fn unify_vars(
    a: Var,
    a_is_const: bool,
    b: Var,
    b_is_const: bool,
) -> Result<Var> {
    if a == b || b_is_const {
        Ok(a)
    } else if a_is_const {
        Ok(b)
    } else {
        Err(QesError::VarMismatch(a.name(), b.name()))
    }
}

impl UniPoly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        UniPoly { var, coeffs: vec![] }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    /// c * x^k
    pub fn monomial(var: Var, c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(var, coeffs)
    }

    pub fn from_i64(var: Var, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| crate::rational::rat_int(c)).collect())
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Ascending coefficient slice without trailing zeros.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let var = unify_vars(self.var, self.is_constant(), other.var, other.is_constant())?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Ok(Self::new(var, out))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let var = unify_vars(self.var, self.is_constant(), other.var, other.is_constant())?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(var));
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in other.coeffs.iter().enumerate() {
                out[i + j] += ci * cj;
            }
        }
        Ok(Self::new(var, out))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        Self::new(self.var, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.var);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * crate::rational::rat_int(k as i64))
            .collect();
        Self::new(self.var, out)
    }

    /// Substitutes `inner` for the variable.
    pub fn compose(&self, inner: &UniPoly) -> Self {
        let mut acc = UniPoly::zero(inner.var);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(inner)
                .and_then(|p| p.checked_add(&UniPoly::constant(inner.var, c.clone())))
                .expect("compose preserves the inner variable");
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    ///
    /// Panics on division by zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (Self::zero(self.var), self.clone());
        }
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let dq = rem.len() - 1 - dd;
        let mut quot = vec![Rational::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let delta = &c * dj;
                rem[k + j] -= delta;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(self.var, quot), Self::new(self.var, rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut f = self.clone();
        let mut g = other.clone();
        while !g.is_zero() {
            let (_, r) = f.divrem(&g);
            f = g;
            g = r;
        }
        f.make_monic()
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    /// self / gcd(self, self'), normalized monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().map_or(true, |d| d < 1) {
            return self.make_monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.make_monic();
        }
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero());
        q.make_monic()
    }

    /// Resultant of two polynomials in the same variable.
    ///
    /// Computed through the Euclidean remainder sequence:
    /// Res(f, g) = (-1)^{df*dg} lc(g)^{df-dr} Res(g, r) with r = f mod g.
    pub fn resultant(&self, other: &Self) -> Result<Rational> {
        unify_vars(self.var, self.is_constant(), other.var, other.is_constant())?;
        fn go(f: &UniPoly, g: &UniPoly) -> Rational {
            let df = match f.degree() {
                Some(d) => d,
                None => return Rational::zero(),
            };
            let dg = match g.degree() {
                Some(d) => d,
                None => {
                    return if df == 0 { Rational::one() } else { Rational::zero() }
                }
            };
            if dg == 0 {
                return pow_rat(&g.coeff(0), df as u32);
            }
            let (_, r) = f.divrem(g);
            let dr = r.degree();
            let sign = if (df * dg) % 2 == 1 {
                -Rational::one()
            } else {
                Rational::one()
            };
            match dr {
                None => Rational::zero(),
                Some(dr) => {
                    sign * pow_rat(&g.leading_coeff(), (df - dr) as u32) * go(g, &r)
                }
            }
        }
        Ok(go(self, other))
    }

    /// Discriminant: (-1)^{d(d-1)/2} Res(P, P') / lc(P). Degree-1 input gives 1.
    pub fn discriminant(&self) -> Result<Rational> {
        let d = self
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| QesError::Usage("discriminant requires degree >= 1".into()))?;
        if d == 1 {
            return Ok(Rational::one());
        }
        let res = self.resultant(&self.derivative())?;
        let sign = if (d * (d - 1) / 2) % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        Ok(sign * res / self.leading_coeff())
    }
}

pub(crate) fn pow_rat(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl std::ops::Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        self.checked_add(rhs).expect("variable mismatch in +")
    }
}

impl std::ops::Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self.checked_sub(rhs).expect("variable mismatch in -")
    }
}

impl std::ops::Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        self.checked_mul(rhs).expect("variable mismatch in *")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let unit = mag.is_one();
            if !unit || k == 0 {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.var)?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn poly(var: Var, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64(var, coeffs)
    }

    #[test]
    fn arithmetic_and_trim() {
        let p = poly(Var::A, &[1, 2]); // 2a + 1
        let q = poly(Var::A, &[1, -2]); // -2a + 1
        assert_eq!(&p + &q, poly(Var::A, &[2]));
        assert_eq!(&p * &q, poly(Var::A, &[1, 0, -4]));
        assert_eq!((&p - &p).degree(), None);
    }

    #[test]
    fn constants_unify_with_any_variable() {
        let c = UniPoly::constant(Var::B, rat_int(3));
        let p = poly(Var::A, &[0, 1]);
        assert_eq!(p.checked_add(&c).unwrap().var(), Var::A);
    }

    #[test]
    fn mismatch_is_an_error() {
        let p = poly(Var::A, &[0, 1]);
        let q = poly(Var::B, &[0, 1]);
        assert!(matches!(
            p.checked_add(&q),
            Err(QesError::VarMismatch("a", "b"))
        ));
    }

    #[test]
    fn divrem_euclidean() {
        let f = poly(Var::Z, &[-1, 0, 0, 1]); // z^3 - 1
        let g = poly(Var::Z, &[-1, 1]); // z - 1
        let (q, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(q, poly(Var::Z, &[1, 1, 1]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = poly(Var::Z, &[-1, 0, 1]); // (z-1)(z+1)
        let g = poly(Var::Z, &[1, 2, 1]); // (z+1)^2
        assert_eq!(f.gcd(&g), poly(Var::Z, &[1, 1]));
    }

    #[test]
    fn resultant_of_quadratics() {
        // Res(z^2 - 1, z^2 - 4) = (1-4)(1-4)... evaluate: lc 1, roots +-1:
        // (1-4)*(1-4) = 9.
        let f = poly(Var::Z, &[-1, 0, 1]);
        let g = poly(Var::Z, &[-4, 0, 1]);
        assert_eq!(f.resultant(&g).unwrap(), rat_int(9));
    }

    #[test]
    fn discriminant_examples() {
        // disc(z^2 + pz + q) = p^2 - 4q
        let f = poly(Var::Z, &[3, -5, 1]);
        assert_eq!(f.discriminant().unwrap(), rat_int(25 - 12));
        // disc(z^3 + pz + q) = -4p^3 - 27q^2
        let g = poly(Var::Z, &[2, -4, 0, 1]);
        assert_eq!(g.discriminant().unwrap(), rat_int(4 * 64 - 27 * 4));
        // degree 1 is a unit
        assert_eq!(poly(Var::Z, &[7, 2]).discriminant().unwrap(), rat_int(1));
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        let f = poly(Var::Z, &[1, 2, 1]); // (z+1)^2
        assert_eq!(f.squarefree_part(), poly(Var::Z, &[1, 1]));
    }

    #[test]
    fn compose_substitutes() {
        let f = poly(Var::A, &[0, 0, 1]); // a^2
        let inner = poly(Var::B, &[1, 1]); // b + 1
        assert_eq!(f.compose(&inner), poly(Var::B, &[1, 2, 1]));
    }

    #[test]
    fn eval_matches_horner() {
        let f = poly(Var::Z, &[1, -3, 0, 2]);
        assert_eq!(f.eval_rational(&rat(1, 2)), rat(-1, 4));
        assert!((f.eval_f64(0.5) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn display_is_readable() {
        let f = UniPoly::new(
            Var::B,
            vec![rat_int(-108), rat_int(0), rat_int(0), rat_int(256)],
        );
        assert_eq!(format!("{}", f), "256 b^3 - 108");
    }
}
