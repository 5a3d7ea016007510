//! Double-double scalars for the one place that needs them: triangular
//! eliminations whose error growth outruns f64 over many levels. Each
//! value is an unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving
//! roughly 31 significant digits.

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, o.hi);
        let (s2, e2) = two_sum(self.lo, o.lo);
        let (hi, lo) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(hi, lo + e2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn scale(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        Dd { hi, lo }
    }
}

/// Complex double-double, componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: num_complex::Complex64) -> DdC {
        DdC { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }

    #[inline]
    pub fn add(self, o: DdC) -> DdC {
        DdC { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    #[inline]
    pub fn sub(self, o: DdC) -> DdC {
        DdC { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    #[inline]
    pub fn neg(self) -> DdC {
        DdC { re: self.re.neg(), im: self.im.neg() }
    }

    #[inline]
    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn scale(self, x: f64) -> DdC {
        DdC { re: self.re.scale(x), im: self.im.scale(x) }
    }

    #[inline]
    pub fn mul_real(self, s: Dd) -> DdC {
        DdC { re: self.re.mul(s), im: self.im.mul(s) }
    }

    /// Magnitude of the leading parts; plenty for tolerance tests.
    #[inline]
    pub fn norm(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

/// Two-part conversion: the nearest double plus the exactly representable
/// remainder, giving the full 106-bit image of the rational.
pub(crate) fn rat_to_dd(r: &crate::rational::Rational) -> Dd {
    let hi = crate::rational::rat_to_f64(r);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let lo = crate::rational::rat_to_f64(&(r - crate::rational::rat_from_f64(hi)));
    Dd { hi, lo }
}
