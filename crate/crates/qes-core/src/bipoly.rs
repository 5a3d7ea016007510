//! Sparse bivariate polynomials over the rationals.
//!
//! A term maps exponents (m, k) to the coefficient of x^m y^k, where x and y
//! are the two variable tags (the spectral pair (a, b) unless stated
//! otherwise). The grading used by `top_weight_part` assigns weight m + 2k,
//! matching weight(a) = 1, weight(b) = 2.

use crate::error::{QesError, Result};
use crate::rational::{rat_int, rat_to_f64, Rational};
use crate::unipoly::{unify_vars, UniPoly, Var};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    xvar: Var,
    yvar: Var,
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero(xvar: Var, yvar: Var) -> Self {
        assert!(xvar != yvar, "bivariate polynomial needs distinct variables");
        BiPoly { xvar, yvar, terms: BTreeMap::new() }
    }

    pub fn constant(xvar: Var, yvar: Var, c: Rational) -> Self {
        let mut p = Self::zero(xvar, yvar);
        p.add_term(0, 0, c);
        p
    }

    pub fn one(xvar: Var, yvar: Var) -> Self {
        Self::constant(xvar, yvar, Rational::one())
    }

    /// c * x^m y^k
    pub fn term(xvar: Var, yvar: Var, m: u32, k: u32, c: Rational) -> Self {
        let mut p = Self::zero(xvar, yvar);
        p.add_term(m, k, c);
        p
    }

    pub fn xvar(&self) -> Var {
        self.xvar
    }

    pub fn yvar(&self) -> Var {
        self.yvar
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(m, k)| m == 0 && k == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(m, k), c)| (m, k, c))
    }

    pub fn coeff(&self, m: u32, k: u32) -> Rational {
        self.terms.get(&(m, k)).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: u32, k: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((m, k)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn unify(&self, other: &Self) -> Result<(Var, Var)> {
        let x = unify_vars(self.xvar, self.is_constant(), other.xvar, other.is_constant())?;
        let y = unify_vars(self.yvar, self.is_constant(), other.yvar, other.is_constant())?;
        Ok((x, y))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (xvar, yvar) = self.unify(other)?;
        let mut out = BiPoly { xvar, yvar, terms: self.terms.clone() };
        for (&(m, k), c) in &other.terms {
            out.add_term(m, k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (xvar, yvar) = self.unify(other)?;
        let mut out = BiPoly::zero(xvar, yvar);
        for (&(m1, k1), c1) in &self.terms {
            for (&(m2, k2), c2) in &other.terms {
                out.add_term(m1 + m2, k1 + k2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            xvar: self.xvar,
            yvar: self.yvar,
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.xvar, self.yvar);
        }
        BiPoly {
            xvar: self.xvar,
            yvar: self.yvar,
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.xvar, self.yvar);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same variables");
        }
        acc
    }

    /// Partial derivative with respect to one of the two variables.
    pub fn derivative(&self, var: Var) -> Result<Self> {
        let in_x = if var == self.xvar {
            true
        } else if var == self.yvar {
            false
        } else {
            return Err(QesError::VarMismatch(var.name(), self.xvar.name()));
        };
        let mut out = Self::zero(self.xvar, self.yvar);
        for (&(m, k), c) in &self.terms {
            if in_x && m > 0 {
                out.add_term(m - 1, k, c * rat_int(m as i64));
            } else if !in_x && k > 0 {
                out.add_term(m, k - 1, c * rat_int(k as i64));
            }
        }
        Ok(out)
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(m, _)| m).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, k)| k).max()
    }

    /// Coefficient of x^m as a polynomial in y.
    pub fn coeff_of_x(&self, m: u32) -> UniPoly {
        let deg = self
            .terms
            .keys()
            .filter(|&&(mm, _)| mm == m)
            .map(|&(_, k)| k)
            .max();
        let Some(deg) = deg else {
            return UniPoly::zero(self.yvar);
        };
        let mut coeffs = vec![Rational::zero(); deg as usize + 1];
        for (&(mm, k), c) in &self.terms {
            if mm == m {
                coeffs[k as usize] = c.clone();
            }
        }
        UniPoly::new(self.yvar, coeffs)
    }

    /// View as a polynomial in x with UniPoly-in-y coefficients, ascending.
    pub fn x_coeffs(&self) -> Vec<UniPoly> {
        let Some(d) = self.deg_x() else {
            return vec![];
        };
        (0..=d).map(|m| self.coeff_of_x(m)).collect()
    }

    pub fn from_x_coeffs(xvar: Var, yvar: Var, coeffs: &[UniPoly]) -> Self {
        let mut out = Self::zero(xvar, yvar);
        for (m, c) in coeffs.iter().enumerate() {
            for (k, v) in c.coeffs().iter().enumerate() {
                out.add_term(m as u32, k as u32, v.clone());
            }
        }
        out
    }

    pub fn leading_coeff_in_x(&self) -> UniPoly {
        match self.deg_x() {
            Some(d) => self.coeff_of_x(d),
            None => UniPoly::zero(self.yvar),
        }
    }

    /// Treats a univariate polynomial as bivariate in (its var, other).
    pub fn from_unipoly_x(p: &UniPoly, yvar: Var) -> Self {
        let mut out = Self::zero(p.var(), yvar);
        for (m, c) in p.coeffs().iter().enumerate() {
            out.add_term(m as u32, 0, c.clone());
        }
        out
    }

    /// Substitutes polynomials for both variables; the replacements must share
    /// a variable pair, which becomes the result's pair.
    pub fn substitute(&self, xsub: &BiPoly, ysub: &BiPoly) -> Result<Self> {
        let (xvar, yvar) = xsub.unify(ysub)?;
        let max_m = self.deg_x().unwrap_or(0);
        let max_k = self.deg_y().unwrap_or(0);
        let mut xpows = Vec::with_capacity(max_m as usize + 1);
        let mut ypows = Vec::with_capacity(max_k as usize + 1);
        xpows.push(BiPoly::one(xvar, yvar));
        ypows.push(BiPoly::one(xvar, yvar));
        for i in 1..=max_m as usize {
            xpows.push(xpows[i - 1].checked_mul(xsub)?);
        }
        for i in 1..=max_k as usize {
            ypows.push(ypows[i - 1].checked_mul(ysub)?);
        }
        let mut out = BiPoly::zero(xvar, yvar);
        for (&(m, k), c) in &self.terms {
            let t = xpows[m as usize].checked_mul(&ypows[k as usize])?;
            out = out.checked_add(&t.scale(c))?;
        }
        Ok(out)
    }

    pub fn eval_rational(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(m, k), c) in &self.terms {
            acc += c * crate::unipoly::pow_rat(x, m) * crate::unipoly::pow_rat(y, k);
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mx = self.deg_x().unwrap_or(0) as usize;
        let mk = self.deg_y().unwrap_or(0) as usize;
        let mut xp = vec![Complex64::ONE; mx + 1];
        for i in 1..=mx {
            xp[i] = xp[i - 1] * x;
        }
        let mut yp = vec![Complex64::ONE; mk + 1];
        for i in 1..=mk {
            yp[i] = yp[i - 1] * y;
        }
        let mut acc = Complex64::ZERO;
        for (&(m, k), c) in &self.terms {
            acc += rat_to_f64(c) * xp[m as usize] * yp[k as usize];
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0), Complex64::new(y, 0.0)).re
    }

    /// Specializes y, returning ascending coefficients in x.
    pub fn eval_y_complex(&self, y: Complex64) -> Vec<Complex64> {
        let Some(d) = self.deg_x() else {
            return vec![];
        };
        let mk = self.deg_y().unwrap_or(0) as usize;
        let mut yp = vec![Complex64::ONE; mk + 1];
        for i in 1..=mk {
            yp[i] = yp[i - 1] * y;
        }
        let mut out = vec![Complex64::ZERO; d as usize + 1];
        for (&(m, k), c) in &self.terms {
            out[m as usize] += rat_to_f64(c) * yp[k as usize];
        }
        out
    }

    /// Specializes y at an exact rational point, returning a UniPoly in x.
    pub fn eval_y_rational(&self, y: &Rational) -> UniPoly {
        let d = self.deg_x().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); d + 1];
        for (&(m, k), c) in &self.terms {
            coeffs[m as usize] += c * crate::unipoly::pow_rat(y, k);
        }
        UniPoly::new(self.xvar, coeffs)
    }

    /// Weight of the heaviest monomial under weight(x^m y^k) = m + 2k.
    pub fn top_weight(&self) -> Option<u32> {
        self.terms.keys().map(|&(m, k)| m + 2 * k).max()
    }

    /// Sum of the monomials of maximal weight m + 2k.
    pub fn top_weight_part(&self) -> Self {
        let Some(w) = self.top_weight() else {
            return self.clone();
        };
        BiPoly {
            xvar: self.xvar,
            yvar: self.yvar,
            terms: self
                .terms
                .iter()
                .filter(|(&(m, k), _)| m + 2 * k == w)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading x-coefficient so the polynomial is monic in x.
    pub fn make_monic_in_x(&self) -> Result<Self> {
        let lc = self.leading_coeff_in_x();
        if !lc.is_constant() || lc.is_zero() {
            return Err(QesError::Usage(format!(
                "cannot normalize: leading coefficient in {} is {}",
                self.xvar, lc
            )));
        }
        Ok(self.scale(&lc.coeff(0).recip()))
    }

    /// Remainder of self modulo a modulus that is monic in x.
    pub fn reduce_mod_monic_x(&self, modulus: &Self) -> Self {
        let dm = modulus.deg_x().expect("nonzero modulus") as usize;
        debug_assert!(modulus.leading_coeff_in_x().is_constant());
        debug_assert!(modulus.leading_coeff_in_x().coeff(0).is_one());
        let mut coeffs = self.x_coeffs();
        if coeffs.len() <= dm {
            return self.clone();
        }
        let mcoeffs = modulus.x_coeffs();
        for i in (dm..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[i], UniPoly::zero(self.yvar));
            if c.is_zero() {
                continue;
            }
            for (j, mj) in mcoeffs.iter().enumerate().take(dm) {
                let delta = c.checked_mul(mj).expect("same y variable");
                coeffs[i - dm + j] = coeffs[i - dm + j]
                    .checked_sub(&delta)
                    .expect("same y variable");
            }
        }
        coeffs.truncate(dm);
        Self::from_x_coeffs(self.xvar, self.yvar, &coeffs)
    }

    /// Discriminant with respect to x, an exact polynomial in y.
    ///
    /// Res(P, dP/dx) is recovered by evaluating y at integer nodes and
    /// interpolating, then divided by the leading coefficient with the usual
    /// sign (-1)^{d(d-1)/2}. Nodes where the leading coefficient vanishes are
    /// skipped so specialization commutes with the resultant.
    pub fn discriminant_in_x(&self) -> Result<UniPoly> {
        let d = self
            .deg_x()
            .filter(|&d| d >= 1)
            .ok_or_else(|| QesError::Usage("discriminant requires degree >= 1 in x".into()))?;
        if d == 1 {
            return Ok(UniPoly::one(self.yvar));
        }
        let dp = self.derivative(self.xvar)?;
        let lc = self.leading_coeff_in_x();
        let deg_y = self.deg_y().unwrap_or(0) as usize;
        let bound = deg_y * (2 * d as usize - 1);

        let mut nodes: Vec<Rational> = Vec::with_capacity(bound + 1);
        let mut values: Vec<Rational> = Vec::with_capacity(bound + 1);
        let mut t: i64 = 0;
        while nodes.len() <= bound {
            let y = rat_int(t);
            t = if t > 0 { -t } else { -t + 1 };
            if lc.eval_rational(&y).is_zero() {
                continue;
            }
            let pf = self.eval_y_rational(&y);
            let pg = dp.eval_y_rational(&y);
            values.push(pf.resultant(&pg)?);
            nodes.push(y);
        }
        let res = lagrange_interpolate(self.yvar, &nodes, &values);

        let sign = if (d as usize * (d as usize - 1) / 2) % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        let (q, r) = res.scale(&sign).divrem(&lc);
        debug_assert!(r.is_zero(), "resultant not divisible by leading coefficient");
        Ok(q)
    }

    /// Term list [[m, k, num, den], ...] in deterministic order.
    pub fn to_term_strings(&self) -> Vec<(u32, u32, String, String)> {
        self.terms
            .iter()
            .map(|(&(m, k), c)| (m, k, c.numer().to_string(), c.denom().to_string()))
            .collect()
    }
}

/// Exact Lagrange interpolation through distinct rational nodes.
pub fn lagrange_interpolate(var: Var, nodes: &[Rational], values: &[Rational]) -> UniPoly {
    assert_eq!(nodes.len(), values.len());
    let mut acc = UniPoly::zero(var);
    for (i, (xi, yi)) in nodes.iter().zip(values).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::one(var);
        let mut denom = Rational::one();
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &UniPoly::new(var, vec![-xj, Rational::one()]);
            denom *= xi - xj;
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}

impl std::ops::Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.checked_add(rhs).expect("variable mismatch in +")
    }
}

impl std::ops::Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.checked_sub(rhs).expect("variable mismatch in -")
    }
}

impl std::ops::Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.checked_mul(rhs).expect("variable mismatch in *")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // x-power descending, then y-power ascending, matching how the
        // spectral polynomials are conventionally written.
        let mut keys: Vec<(u32, u32)> = self.terms.keys().cloned().collect();
        keys.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut first = true;
        for (m, k) in keys {
            let c = &self.terms[&(m, k)];
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
            if !unit || (m == 0 && k == 0) {
                write!(f, "{}", mag)?;
            }
            let mut need_space = !unit;
            for (var, e) in [(self.xvar, m), (self.yvar, k)] {
                if e == 0 {
                    continue;
                }
                if need_space {
                    f.write_str(" ")?;
                }
                write!(f, "{}", var)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                need_space = true;
            }
        }
        Ok(())
    }
}
