//! The product certificate behind the spectral locus.
//!
//! On the locus Qstar(b, a) = 0 the polynomial P(z) = p(z)^2 p(-z)^2
//! differs from a constant C by an exact total-derivative combination:
//!
//! P(z) - C = q'(z)p(z) - q(z)p'(z) - 2q(z)p(z)h'(z),
//!
//! with q of degree 3n - 2 and leading coefficient -1/2. The right side is
//! d/dz [ q p e^{2h} ] / e^{2h} with e^{2h} stripped, which is what makes
//! the two contour integrals in `integral_identity_check` equal. C obeys a
//! closed-form law: C = 2^{-n} dQstar/da on the locus, equivalently
//! (-1)^n 2^{-2n} dQ/dlambda.
//!
//! Two independent constructions are provided. The exact one solves the
//! triangular linear system for q in the quotient ring Q(b)[a]/(Qstar),
//! where the identity either closes with zero remainder or does not close
//! at all. The numeric one runs the same elimination in floating point at
//! a concrete parameter point; the rows the elimination never touches
//! become its residual, a falsifiable locus test (tiny on the locus,
//! order one off it).

use crate::bipoly::BiPoly;
use crate::dd::{rat_to_dd, DdC};
use crate::error::{QesError, Result};
use crate::family::Family;
use crate::quad::integrate_path;
use crate::rational::{rat, rat_int, Rational};
use crate::roots::complex_roots;
use crate::unipoly::Var;
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct ExactCertificate {
    pub n: usize,
    /// Ascending z-coefficients of q, reduced mod Qstar.
    pub q: Vec<BiPoly>,
    /// The certificate constant, reduced mod Qstar.
    pub c: BiPoly,
}

#[derive(Debug, Clone)]
pub struct NumericCertificate {
    /// Ascending z-coefficients of q.
    pub q: Vec<Complex64>,
    pub c: Complex64,
    /// Relative least-squares residual of the full coefficient system.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralCheck {
    pub lhs: Complex64,
    /// C times the mirrored-inverse-square integral.
    pub rhs: Complex64,
    pub c: Complex64,
    pub rel_err: f64,
    /// Accumulated quadrature error estimate across both contours.
    pub quad_err: f64,
}

/// 2^{-n} dQstar/da: the closed form the certificate constant must match.
pub fn constant_from_qstar(fam: &Family) -> BiPoly {
    let d = fam
        .qstar()
        .derivative(Var::A)
        .expect("qstar contains the a variable");
    d.scale(&rat(1, 1i64 << fam.n()))
}

/// (-1)^n 2^{-2n} dQ/dlambda: the same constant through the lambda form.
pub fn constant_from_qlambda(fam: &Family) -> BiPoly {
    let d = fam
        .qlambda()
        .derivative(Var::Lambda)
        .expect("qlambda contains the lambda variable");
    let sign = if fam.n() % 2 == 0 { 1 } else { -1 };
    d.scale(&rat(sign, 1i64 << (2 * fam.n())))
}

/// Entry (k, j) of the coefficient map: the z^k coefficient of
/// j z^{j-1} p - z^j p' - 2 z^j p h', for p with ascending coefficients c.
fn map_entry_exact(c: &[BiPoly], b: &BiPoly, k: usize, j: usize) -> BiPoly {
    let zero = BiPoly::zero(Var::A, Var::B);
    let pick = |i: isize| -> &BiPoly {
        if i >= 0 && (i as usize) < c.len() {
            &c[i as usize]
        } else {
            &zero
        }
    };
    let k = k as isize;
    let j = j as isize;
    let mut acc = pick(k - j + 1).scale(&rat_int((2 * j - k - 1) as i64));
    let low = pick(k - j - 2).scale(&rat_int(-2));
    acc = acc.checked_add(&low).expect("shared variables");
    let mid = b
        .checked_mul(pick(k - j))
        .expect("shared variables")
        .scale(&rat_int(2));
    acc.checked_add(&mid).expect("shared variables")
}

/// Builds the certificate exactly in the quotient ring Q(b)[a]/(Qstar).
///
/// The top 3n - 1 coefficient equations are triangular with pivot -2 and
/// determine q outright; the z^0 equation yields C; the remaining n + 1
/// equations are genuine identities on the locus and are verified to be
/// exactly zero, else `CertificateInconsistent` is returned.
pub fn exact_certificate(fam: &Family) -> Result<ExactCertificate> {
    let n = fam.n();
    let qstar = fam.qstar();
    let red = |x: BiPoly| x.reduce_mod_monic_x(qstar);

    // ascending z-coefficients of p: coefficient of z^i is a_{n-i}
    let pc: Vec<BiPoly> = (0..=n).map(|i| fam.coeff(n - i).clone()).collect();
    let mut ptc = pc.clone();
    for (i, c) in ptc.iter_mut().enumerate() {
        if i % 2 == 1 {
            *c = c.neg();
        }
    }

    let mul_vec = |xs: &[BiPoly], ys: &[BiPoly]| -> Result<Vec<BiPoly>> {
        let mut out = vec![BiPoly::zero(Var::A, Var::B); xs.len() + ys.len() - 1];
        for (i, x) in xs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in ys.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
            }
        }
        for c in out.iter_mut() {
            *c = red(std::mem::replace(c, BiPoly::zero(Var::A, Var::B)));
        }
        Ok(out)
    };

    let p2 = mul_vec(&pc, &pc)?;
    let pt2 = mul_vec(&ptc, &ptc)?;
    let mut lhs = mul_vec(&p2, &pt2)?;
    lhs.resize(4 * n + 2, BiPoly::zero(Var::A, Var::B));

    let b_mono = BiPoly::term(Var::A, Var::B, 0, 1, Rational::one());
    let qdeg = 3 * n as isize - 2;
    let mut q = vec![BiPoly::zero(Var::A, Var::B); (qdeg + 1).max(0) as usize];

    for j in (0..=qdeg).rev() {
        let j = j as usize;
        let k = j + n + 2;
        // -2 q_j + sum_{j' > j} M[k][j'] q_{j'} = lhs_k
        let mut acc = lhs[k].neg();
        for jp in (j + 1)..q.len() {
            let m = map_entry_exact(&pc, &b_mono, k, jp);
            acc = acc.checked_add(&red(m.checked_mul(&q[jp])?))?;
        }
        q[j] = red(acc.scale(&rat(1, 2)));
    }

    // z^0 equation: T(q)_0 + C = lhs_0
    let mut t0 = BiPoly::zero(Var::A, Var::B);
    for (jp, qj) in q.iter().enumerate() {
        let m = map_entry_exact(&pc, &b_mono, 0, jp);
        t0 = t0.checked_add(&red(m.checked_mul(qj)?))?;
    }
    let c = red(lhs[0].checked_sub(&t0)?);

    // the surviving n + 1 equations must close exactly on the locus
    for k in 1..=(n + 1) {
        let mut tk = BiPoly::zero(Var::A, Var::B);
        for (jp, qj) in q.iter().enumerate() {
            let m = map_entry_exact(&pc, &b_mono, k, jp);
            tk = tk.checked_add(&red(m.checked_mul(qj)?))?;
        }
        let gap = red(lhs[k].checked_sub(&tk)?);
        if !gap.is_zero() {
            return Err(QesError::CertificateInconsistent {
                n,
                detail: format!("z^{} equation leaves remainder {}", k, gap),
            });
        }
    }

    Ok(ExactCertificate { n, q, c })
}

/// Least-squares certificate at a concrete parameter point, with q of the
/// canonical degree 3n - 2.
pub fn numeric_certificate(fam: &Family, a: Complex64, b: Complex64) -> Result<NumericCertificate> {
    numeric_certificate_with_degree(fam, a, b, 3 * fam.n() as isize - 2)
}

/// Same system with an arbitrary trial degree for q. The elimination
/// mirrors the exact construction: the coefficient map is triangular from
/// the top with pivot -2, each row k = j + n + 2 determines q_j outright,
/// and the z^0 row yields the constant. Back-substitution over that many
/// levels amplifies rounding beyond f64 near the top of the degree range,
/// so the elimination runs on double-double scalars. Degrees below the
/// canonical one cannot represent the product polynomial, so the leftover
/// rows keep the residual at order one even on the locus; degrees above
/// it are harmless.
pub fn numeric_certificate_with_degree(
    fam: &Family,
    a: Complex64,
    b: Complex64,
    qdeg: isize,
) -> Result<NumericCertificate> {
    let n = fam.n();
    let pc = p_coeffs_dd(fam, a, b);
    let bb = DdC::from_c64(b);
    let mut ptc = pc.clone();
    for (i, c) in ptc.iter_mut().enumerate() {
        if i % 2 == 1 {
            *c = c.neg();
        }
    }
    let p2 = mul_dd(&pc, &pc);
    let pt2 = mul_dd(&ptc, &ptc);
    let mut lhs = mul_dd(&p2, &pt2);
    let nq = (qdeg + 1).max(0) as usize;
    lhs.resize((4 * n + 2).max(nq + n + 2), DdC::ZERO);

    let mut q = vec![DdC::ZERO; nq];
    for j in (0..nq).rev() {
        let k = (j + n + 2) as isize;
        let mut acc = lhs[k as usize].neg();
        for jp in (j + 1)..nq {
            acc = acc.add(map_entry_dd(&pc, bb, k, jp as isize).mul(q[jp]));
        }
        q[j] = acc.scale(0.5);
    }
    let mut c = lhs[0];
    for j in 0..nq {
        c = c.sub(map_entry_dd(&pc, bb, 0, j as isize).mul(q[j]));
    }

    // the rows the elimination never touched are the actual test: on the
    // locus they close to rounding, off it they are left standing
    let scale = lhs
        .iter()
        .map(|v| v.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut worst = 0.0f64;
    for k in 1..lhs.len() {
        if k >= n + 2 && k < nq + n + 2 {
            continue;
        }
        let mut row = lhs[k].neg();
        for (j, &qj) in q.iter().enumerate() {
            row = row.add(map_entry_dd(&pc, bb, k as isize, j as isize).mul(qj));
        }
        worst = worst.max(row.norm());
    }
    Ok(NumericCertificate {
        q: q.iter().map(|v| v.to_c64()).collect(),
        c: c.to_c64(),
        residual: worst / scale,
    })
}

/// Ascending wave-polynomial coefficients at the point, evaluated in
/// double-double so the elimination starts from inputs that carry the
/// full rational coefficients, not their nearest doubles.
fn p_coeffs_dd(fam: &Family, a: Complex64, b: Complex64) -> Vec<DdC> {
    let n = fam.n();
    let mut ma = 0usize;
    let mut mb = 0usize;
    for cj in fam.coeffs() {
        for (m, k, _) in cj.terms() {
            ma = ma.max(m as usize);
            mb = mb.max(k as usize);
        }
    }
    let one = DdC::from_c64(Complex64::ONE);
    let ad = DdC::from_c64(a);
    let bd = DdC::from_c64(b);
    let mut ap = vec![one; ma + 1];
    let mut bp = vec![one; mb + 1];
    for i in 1..=ma {
        ap[i] = ap[i - 1].mul(ad);
    }
    for i in 1..=mb {
        bp[i] = bp[i - 1].mul(bd);
    }
    let mut asc = vec![one; n + 1];
    for (j, cj) in fam.coeffs().iter().enumerate() {
        let mut acc = DdC::ZERO;
        for (m, k, r) in cj.terms() {
            acc = acc.add(ap[m as usize].mul(bp[k as usize]).mul_real(rat_to_dd(r)));
        }
        asc[n - j] = acc;
    }
    asc
}

fn mul_dd(a: &[DdC], b: &[DdC]) -> Vec<DdC> {
    let mut out = vec![DdC::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

fn map_entry_dd(c: &[DdC], b: DdC, k: isize, j: isize) -> DdC {
    let pick = |i: isize| -> DdC {
        if i >= 0 && (i as usize) < c.len() {
            c[i as usize]
        } else {
            DdC::ZERO
        }
    };
    pick(k - j + 1)
        .scale((2 * j - k - 1) as f64)
        .sub(pick(k - j - 2).scale(2.0))
        .add(b.mul(pick(k - j)).scale(2.0))
}

/// Newton steps on Qstar(., b) drive a sampled root to machine precision;
/// identity checks downstream need the full depth, not just the root
/// finder's backward error.
fn polish_on_locus(fam: &Family, mut a: Complex64, b: Complex64) -> Complex64 {
    let q = fam.qstar();
    let qa = q.derivative(Var::A).expect("qstar depends on a");
    for _ in 0..3 {
        let d = qa.eval_complex(a, b);
        if d.norm() == 0.0 {
            break;
        }
        a -= q.eval_complex(a, b) / d;
    }
    a
}

/// Draws deterministic locus points (b real, a a root of Qstar(b, .)).
pub fn sample_locus_points(fam: &Family, count: usize, seed: u64) -> Vec<(f64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut draw = 0usize;
    while out.len() < count {
        let b = rng.gen_range(-2.5..3.5);
        let Ok(pts) = fam.eigenvalues_at(b, 1e-13) else {
            continue;
        };
        if pts.is_empty() {
            continue;
        }
        let pt = pts[draw % pts.len()];
        draw += 1;
        if pt.residual < 1e-10 {
            out.push((b, polish_on_locus(fam, pt.a, Complex64::from(b))));
        }
    }
    out
}

/// Verifies the two-contour form of the certificate at a parameter point:
/// the integral of p^2 e^{2h} along the steepest-descent rays equals C
/// times the integral of e^{2h} / p(-z)^2 along the same contour.
///
/// The contour runs from vertex + R e^{-i pi/3} through the vertex to
/// vertex + R e^{+i pi/3}. Poles of the mirrored integrand near the
/// contour abort with a suggested vertex that restores clearance.
pub fn integral_identity_check(
    fam: &Family,
    a: Complex64,
    b: Complex64,
    vertex: f64,
    radius: f64,
    rtol: f64,
) -> Result<IntegralCheck> {
    let n = fam.n() as f64;
    // truncation at the ray ends must beat the target accuracy
    let margin = (2.0 / 3.0) * radius.powi(3)
        - 2.0 * b.norm() * radius
        - (2.0 * n + 2.0) * (1.0 + radius).ln();
    if margin < 40.0 {
        return Err(QesError::RadiusTooSmall { radius, ratio: margin / 40.0 });
    }

    let v = Complex64::new(vertex, 0.0);
    let ray = Complex64::from_polar(radius, std::f64::consts::FRAC_PI_3);
    let path = [v + ray.conj(), v, v + ray];

    let pc = fam.p_complex_coeffs(a, b);
    let zeros = complex_roots(&pc, 1e-12)?;
    for z in &zeros {
        let pole = -z;
        let d = dist_to_polyline(pole, &path);
        if d < 0.1 {
            let suggest = zeros
                .iter()
                .map(|z| -z.re - 2.0 * z.im.abs() - 1.0)
                .fold(f64::INFINITY, f64::min);
            return Err(QesError::PoleNearPath { pole, dist: d, suggest });
        }
    }

    let h2 = |z: Complex64| (2.0 * (z * z * z / 3.0 - b * z)).exp();
    let peval = |z: Complex64| {
        let mut acc = Complex64::ZERO;
        for c in pc.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let (lhs, e1) = integrate_path(
        &|z| {
            let p = peval(z);
            p * p * h2(z)
        },
        &path,
        rtol,
        1e-300,
    )?;
    let (rhs_raw, e2) = integrate_path(
        &|z| {
            let pm = peval(-z);
            h2(z) / (pm * pm)
        },
        &path,
        rtol,
        1e-300,
    )?;

    let c = constant_from_qstar(fam).eval_complex(a, b);
    let rhs = c * rhs_raw;
    let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
    Ok(IntegralCheck {
        lhs,
        rhs,
        c,
        rel_err: (lhs - rhs).norm() / scale,
        quad_err: e1 + e2,
    })
}

fn dist_to_polyline(p: Complex64, pts: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ab = b - a;
        let t = ((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr();
        let t = t.clamp(0.0, 1.0);
        best = best.min((p - (a + t * ab)).norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(terms: &[(u32, u32, i64, i64)]) -> BiPoly {
        let mut acc = BiPoly::zero(Var::A, Var::B);
        for &(m, k, num, den) in terms {
            acc = acc
                .checked_add(&BiPoly::term(Var::A, Var::B, m, k, rat(num, den)))
                .unwrap();
        }
        acc
    }

    #[test]
    fn hand_checked_certificate_for_n1() {
        // q = (a - z)/2 and C = a
        let fam = Family::build(1).unwrap();
        let cert = exact_certificate(&fam).unwrap();
        assert_eq!(cert.q.len(), 2);
        assert_eq!(cert.q[0], bp(&[(1, 0, 1, 2)]));
        assert_eq!(cert.q[1], bp(&[(0, 0, -1, 2)]));
        assert_eq!(cert.c, bp(&[(1, 0, 1, 1)]));
    }

    #[test]
    fn degenerate_certificate_for_n0() {
        // p = 1: the product is 1, q is empty, C = 1
        let fam = Family::build(0).unwrap();
        let cert = exact_certificate(&fam).unwrap();
        assert!(cert.q.is_empty());
        assert_eq!(cert.c, bp(&[(0, 0, 1, 1)]));
    }

    #[test]
    fn certificate_closes_exactly_up_to_n4() {
        for n in 0..=4 {
            let fam = Family::build(n).unwrap();
            let cert = exact_certificate(&fam).unwrap();
            assert_eq!(cert.q.len(), if n == 0 { 0 } else { 3 * n - 1 });
            // leading coefficient of q is -1/2
            if n >= 1 {
                assert_eq!(cert.q[3 * n - 2], bp(&[(0, 0, -1, 2)]));
            }
        }
    }

    #[test]
    fn constant_obeys_the_derivative_law() {
        for n in 0..=4 {
            let fam = Family::build(n).unwrap();
            let cert = exact_certificate(&fam).unwrap();
            let law = constant_from_qstar(&fam).reduce_mod_monic_x(fam.qstar());
            assert_eq!(cert.c, law, "constant law failed at n = {}", n);
        }
    }

    #[test]
    fn lambda_form_of_the_constant_agrees() {
        // (-1)^n 2^{-2n} dQ/dlambda at lambda = b^2 - 2a equals
        // 2^{-n} dQstar/da identically in (a, b)
        for n in 0..=6 {
            let fam = Family::build(n).unwrap();
            let from_lambda = constant_from_qlambda(&fam);
            let bb_minus_2a = BiPoly::term(Var::A, Var::B, 0, 2, Rational::one())
                .checked_add(&BiPoly::term(Var::A, Var::B, 1, 0, rat_int(-2)))
                .unwrap();
            let b_sub = BiPoly::term(Var::A, Var::B, 0, 1, Rational::one());
            let pulled_back = from_lambda.substitute(&bb_minus_2a, &b_sub).unwrap();
            assert_eq!(pulled_back, constant_from_qstar(&fam), "n = {}", n);
        }
    }

    #[test]
    fn numeric_certificate_is_sharp_on_the_locus() {
        let fam = Family::build(2).unwrap();
        // a^3 = -2 at b = 0
        let a = Complex64::new(-(2f64.powf(1.0 / 3.0)), 0.0);
        let b = Complex64::ZERO;
        let on = numeric_certificate(&fam, a, b).unwrap();
        assert!(on.residual < 1e-12, "residual {}", on.residual);
        let law = constant_from_qstar(&fam).eval_complex(a, b);
        assert!((on.c - law).norm() < 1e-10 * (1.0 + law.norm()));

        let off = numeric_certificate(&fam, a + Complex64::new(0.05, 0.0), b).unwrap();
        assert!(off.residual > 1e-3, "off-locus residual {}", off.residual);
    }

    #[test]
    fn short_trial_degree_cannot_close_the_identity() {
        let fam = Family::build(3).unwrap();
        let pts = sample_locus_points(&fam, 1, 7);
        let (b, a) = pts[0];
        let bb = Complex64::new(b, 0.0);
        let full = numeric_certificate(&fam, a, bb).unwrap();
        assert!(full.residual < 1e-10);
        let short =
            numeric_certificate_with_degree(&fam, a, bb, 3 * 3 - 3).unwrap();
        assert!(short.residual > 1e-3, "short residual {}", short.residual);
    }

    #[test]
    fn exact_and_numeric_certificates_agree_at_a_point() {
        let fam = Family::build(3).unwrap();
        let cert = exact_certificate(&fam).unwrap();
        let pts = sample_locus_points(&fam, 3, 11);
        for (b, a) in pts {
            let bb = Complex64::new(b, 0.0);
            let num = numeric_certificate(&fam, a, bb).unwrap();
            for (j, qj) in cert.q.iter().enumerate() {
                let exact = qj.eval_complex(a, bb);
                assert!(
                    (exact - num.q[j]).norm() < 1e-7 * (1.0 + exact.norm()),
                    "q[{}] exact {} vs numeric {}",
                    j,
                    exact,
                    num.q[j]
                );
            }
            let cexact = cert.c.eval_complex(a, bb);
            assert!((cexact - num.c).norm() < 1e-7 * (1.0 + cexact.norm()));
        }
    }

    #[test]
    fn locus_sampling_is_deterministic() {
        let fam = Family::build(4).unwrap();
        let p1 = sample_locus_points(&fam, 5, 123);
        let p2 = sample_locus_points(&fam, 5, 123);
        for (x, y) in p1.iter().zip(&p2) {
            assert_eq!(x.0.to_bits(), y.0.to_bits());
            assert_eq!(x.1.re.to_bits(), y.1.re.to_bits());
        }
    }

    #[test]
    fn integral_identity_holds_on_the_locus() {
        // n = 1 at (a, b) = (1, 1)
        let fam = Family::build(1).unwrap();
        let chk = integral_identity_check(
            &fam,
            Complex64::ONE,
            Complex64::ONE,
            0.0,
            6.0,
            1e-12,
        )
        .unwrap();
        assert!(chk.rel_err < 1e-9, "rel_err {}", chk.rel_err);

        // n = 2 at b = 0, real spectral point
        let fam2 = Family::build(2).unwrap();
        let a2 = Complex64::new(-(2f64.powf(1.0 / 3.0)), 0.0);
        let chk2 =
            integral_identity_check(&fam2, a2, Complex64::ZERO, 0.0, 6.0, 1e-12).unwrap();
        assert!(chk2.rel_err < 1e-8, "rel_err {}", chk2.rel_err);
    }

    #[test]
    fn integral_identity_fails_off_the_locus() {
        let fam = Family::build(1).unwrap();
        let chk = integral_identity_check(
            &fam,
            Complex64::new(1.3, 0.0),
            Complex64::ONE,
            0.0,
            6.0,
            1e-12,
        )
        .unwrap();
        assert!(chk.rel_err > 1e-2, "rel_err {}", chk.rel_err);
    }

    #[test]
    fn pole_hugging_the_contour_is_refused() {
        // p = z + a with small a puts the mirrored pole at distance
        // a sin(60 deg) from the rays
        let fam = Family::build(1).unwrap();
        let r = integral_identity_check(
            &fam,
            Complex64::new(0.05, 0.0),
            Complex64::ONE,
            0.0,
            6.0,
            1e-10,
        );
        match r {
            Err(QesError::PoleNearPath { suggest, .. }) => {
                // the suggested vertex restores clearance
                let retry = integral_identity_check(
                    &fam,
                    Complex64::new(0.05, 0.0),
                    Complex64::ONE,
                    suggest,
                    6.0,
                    1e-10,
                );
                assert!(retry.is_ok());
            }
            other => panic!("expected PoleNearPath, got {:?}", other.map(|c| c.rel_err)),
        }
    }

    #[test]
    fn radius_check_scales_with_b() {
        let fam = Family::build(1).unwrap();
        let r = integral_identity_check(
            &fam,
            Complex64::ONE,
            Complex64::new(40.0, 0.0),
            0.0,
            4.0,
            1e-10,
        );
        assert!(matches!(r, Err(QesError::RadiusTooSmall { .. })));
    }
}
