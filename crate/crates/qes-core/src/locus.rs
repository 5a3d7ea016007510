//! Real spectral locus of the quantization polynomial: the set of real
//! (b, a) with Q*(b, a) = 0, viewed through lambda = b^2 - 2a.
//!
//! Branches are traced by pseudo-arclength continuation, so folds where
//! two a-roots collide and leave the real axis are crossed smoothly. Each
//! accepted point is classified by the number of real zeros of the wave
//! polynomial p; along a connected component that count stays constant,
//! and components are labeled m = (n - count) / 2.

use crate::bipoly::BiPoly;
use crate::error::{QesError, Result};
use crate::family::Family;
use crate::isolate::isolate_real_roots;
use crate::rational::rat;
use crate::roots::complex_roots;
use crate::unipoly::Var;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocusPoint {
    pub b: f64,
    pub a: f64,
    pub lambda: f64,
    pub real_zeros: usize,
}

#[derive(Debug, Clone)]
pub struct BranchTrace {
    pub points: Vec<LocusPoint>,
    /// b at which the trace reversed direction, if it did.
    pub fold_b: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    /// Branch label; the wave polynomial has n - 2m real zeros.
    pub m: usize,
    pub real_zeros: usize,
    /// Range of lambda values the component takes at the anchor b.
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub fold_b: Option<f64>,
    /// Indices into the anchor root list covered by this component.
    pub root_indices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchSystem {
    pub n: usize,
    pub b_hi: f64,
    pub components: Vec<Component>,
}

/// Real a-roots of Q*(b, .), sorted descending so lambda runs ascending.
pub fn branch_roots_at(fam: &Family, b: f64) -> Result<Vec<f64>> {
    let coeffs = fam.qstar().eval_y_complex(Complex64::from(b));
    let roots = complex_roots(&coeffs, 1e-12)?;
    let mut out: Vec<f64> = roots
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Number of real zeros of the wave polynomial at the given locus point.
pub fn real_zero_count(fam: &Family, a: f64, b: f64) -> Result<usize> {
    let coeffs = fam.p_complex_coeffs(Complex64::from(a), Complex64::from(b));
    let zeros = complex_roots(&coeffs, 1e-12)?;
    Ok(zeros
        .iter()
        .filter(|z| z.im.abs() < 1e-6 * (1.0 + z.norm()))
        .count())
}

/// Newton iteration on (Q*, dQ*/da) = 0, pinning a fold to full precision.
fn polish_fold(fam: &Family, b0: f64, a0: f64) -> Result<Option<(f64, f64)>> {
    let q = fam.qstar();
    let qa = q.derivative(Var::A)?;
    let qb = q.derivative(Var::B)?;
    let qaa = qa.derivative(Var::A)?;
    let qab = qa.derivative(Var::B)?;
    let mut b = b0;
    let mut a = a0;
    for _ in 0..40 {
        let f1 = q.eval_f64(a, b);
        let f2 = qa.eval_f64(a, b);
        let j11 = qb.eval_f64(a, b);
        let j12 = qa.eval_f64(a, b);
        let j21 = qab.eval_f64(a, b);
        let j22 = qaa.eval_f64(a, b);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return Ok(None);
        }
        let db = (-f1 * j22 + f2 * j12) / det;
        let da = (f1 * j21 - f2 * j11) / det;
        b += db;
        a += da;
        if db.abs() + da.abs() < 1e-13 * (1.0 + a.abs() + b.abs()) {
            return Ok(Some((b, a)));
        }
    }
    Ok(None)
}

fn term_magnitude(q: &BiPoly, a: f64, b: f64) -> f64 {
    q.terms()
        .map(|(m, k, c)| {
            c.to_f64().unwrap_or(0.0).abs() * a.abs().powi(m as i32) * b.abs().powi(k as i32)
        })
        .sum::<f64>()
        .max(1e-300)
}

/// Follow the locus component through (b_hi, a_start) by pseudo-arclength
/// steps until it returns to b >= b_hi on another arm, descends past
/// b_floor, or the step collapses.
pub fn trace_branch(
    fam: &Family,
    b_hi: f64,
    a_start: f64,
    b_floor: f64,
    h0: f64,
) -> Result<BranchTrace> {
    let q = fam.qstar();
    let qa = q.derivative(Var::A)?;
    let qb = q.derivative(Var::B)?;

    let newton = |b0: f64, a0: f64, tangent: (f64, f64), target: (f64, f64)| -> Option<(f64, f64)> {
        let mut b = b0;
        let mut a = a0;
        for _ in 0..12 {
            let f = q.eval_f64(a, b);
            let g = tangent.0 * (b - target.0) + tangent.1 * (a - target.1);
            let fb = qb.eval_f64(a, b);
            let fa = qa.eval_f64(a, b);
            let det = fb * tangent.1 - fa * tangent.0;
            if det.abs() < 1e-300 {
                return None;
            }
            let db = (-f * tangent.1 + fa * g) / det;
            let da = (-fb * g + f * tangent.0) / det;
            b += db;
            a += da;
            let scale = 1.0 + b.abs() + a.abs();
            if db.abs() + da.abs() < 1e-12 * scale {
                let mag = term_magnitude(q, a, b);
                if q.eval_f64(a, b).abs() <= 1e-9 * mag {
                    return Some((b, a));
                }
                return None;
            }
        }
        None
    };

    let tangent_at = |b: f64, a: f64, prev: (f64, f64)| -> Result<(f64, f64)> {
        let fb = qb.eval_f64(a, b);
        let fa = qa.eval_f64(a, b);
        let norm = fa.hypot(fb);
        if norm < 1e-300 {
            return Err(QesError::StepCollapse {
                at: format!("(b, a) = ({:.6}, {:.6})", b, a),
                context: "vanishing gradient on the locus (singular point)".into(),
            });
        }
        let mut t = (fa / norm, -fb / norm);
        if t.0 * prev.0 + t.1 * prev.1 < 0.0 {
            t = (-t.0, -t.1);
        }
        Ok(t)
    };

    let mut b = b_hi;
    let mut a = a_start;
    let zeros0 = real_zero_count(fam, a, b)?;
    let mut points = vec![LocusPoint { b, a, lambda: b * b - 2.0 * a, real_zeros: zeros0 }];
    let mut fold_b = None;

    // start downhill in b
    let mut tan = tangent_at(b, a, (-1.0, 0.0))?;
    if tan.0 > 0.0 {
        tan = (-tan.0, -tan.1);
    }

    let mut h = h0;
    let h_max = 1.0 + 0.02 * b_hi.abs();
    let max_points = 200_000usize;

    loop {
        if points.len() >= max_points {
            return Err(QesError::StepCollapse {
                at: format!("b = {:.6}", b),
                context: "point budget exhausted while tracing the locus".into(),
            });
        }
        let pred = (b + h * tan.0, a + h * tan.1);
        match newton(pred.0, pred.1, tan, pred) {
            Some((bn, an)) => {
                let tn = tangent_at(bn, an, tan)?;
                let zeros = real_zero_count(fam, an, bn)?;
                let prev_zeros = points.last().map(|p| p.real_zeros).unwrap_or(zeros);
                if zeros != prev_zeros {
                    if h > 1e-6 * (1.0 + b.abs()) {
                        h *= 0.5;
                        continue;
                    }
                    return Err(QesError::ClassificationFlip { b_prev: b, b: bn });
                }
                if tan.0 < 0.0 && tn.0 > 0.0 {
                    let seed_b = 0.5 * (b + bn);
                    let seed_a = 0.5 * (a + an);
                    fold_b = Some(match polish_fold(fam, seed_b, seed_a)? {
                        Some((bf, _)) => bf,
                        None => bn,
                    });
                }
                b = bn;
                a = an;
                tan = tn;
                points.push(LocusPoint { b, a, lambda: b * b - 2.0 * a, real_zeros: zeros });
                h = (h * 1.4).min(h_max);
                if (tan.0 > 0.0 && b >= b_hi) || b <= b_floor {
                    return Ok(BranchTrace { points, fold_b });
                }
            }
            None => {
                h *= 0.5;
                if h < 1e-10 * (1.0 + b.abs()) {
                    return Err(QesError::StepCollapse {
                        at: format!("b = {:.6}", b),
                        context: "corrector failed to converge on the locus".into(),
                    });
                }
            }
        }
    }
}

/// Trace every component reaching b = b_hi and assemble the labeled
/// branch system.
pub fn analyze_branches(fam: &Family, b_hi: f64, b_floor: f64) -> Result<BranchSystem> {
    let n = fam.n();
    let roots = branch_roots_at(fam, b_hi)?;
    if roots.len() != n + 1 {
        return Err(QesError::ScanInconclusive {
            lo: b_hi,
            hi: b_hi,
            detail: format!(
                "expected {} real quantization roots at the anchor, found {}",
                n + 1,
                roots.len()
            ),
        });
    }
    let gap = roots
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(f64::INFINITY, f64::min)
        .max(1e-6);

    let mut visited = vec![false; roots.len()];
    let mut components = Vec::new();
    for i in 0..roots.len() {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let trace = trace_branch(fam, b_hi, roots[i], b_floor, 0.5)?;
        let count = trace.points[0].real_zeros;
        let mut indices = vec![i];

        let last = trace.points.last().expect("trace holds its start point");
        if last.b >= b_hi {
            let (j, dist) = roots
                .iter()
                .enumerate()
                .filter(|(j, _)| !visited[*j])
                .map(|(j, r)| (j, (r - last.a).abs()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .ok_or_else(|| QesError::ScanInconclusive {
                    lo: b_floor,
                    hi: b_hi,
                    detail: "a trace returned to the anchor but every root is already claimed"
                        .into(),
                })?;
            if dist > 0.5 * gap {
                return Err(QesError::ScanInconclusive {
                    lo: b_floor,
                    hi: b_hi,
                    detail: format!(
                        "trace landed at a = {:.6}, not near any unclaimed root",
                        last.a
                    ),
                });
            }
            visited[j] = true;
            indices.push(j);
        }

        if (n - count) % 2 != 0 || count > n {
            return Err(QesError::ScanInconclusive {
                lo: b_floor,
                hi: b_hi,
                detail: format!(
                    "component zero count {} is incompatible with degree {}",
                    count, n
                ),
            });
        }
        let lams: Vec<f64> = indices.iter().map(|&j| b_hi * b_hi - 2.0 * roots[j]).collect();
        components.push(Component {
            m: (n - count) / 2,
            real_zeros: count,
            lambda_lo: lams.iter().cloned().fold(f64::INFINITY, f64::min),
            lambda_hi: lams.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            fold_b: trace.fold_b,
            root_indices: indices,
        });
    }
    components.sort_by_key(|c| c.m);
    Ok(BranchSystem { n, b_hi, components })
}

/// Real fold points of the locus: (b*, a*) where Q* and its a-derivative
/// vanish together. Exact isolation on the discriminant, then the double
/// root is pulled out of the clustered a-spectrum.
pub fn critical_points(fam: &Family) -> Result<Vec<(f64, f64)>> {
    let disc = fam.qstar().discriminant_in_x()?;
    if disc.is_zero() {
        return Err(QesError::Usage("identically singular family".into()));
    }
    if disc.is_constant() {
        return Ok(vec![]);
    }
    let sf = disc.squarefree_part();

    // Cauchy bound on the b-roots
    let lead = sf.leading_coeff();
    let bound = sf
        .coeffs()
        .iter()
        .map(|c| (c / &lead).to_f64().unwrap_or(0.0).abs())
        .fold(0.0f64, f64::max)
        + 1.0;
    let hi = rat((bound.ceil() as i64).max(1), 1);
    let lo = -hi.clone();
    let prec = rat(1, 1_000_000_000_000);

    let mut out = Vec::new();
    for (l, r) in isolate_real_roots(&sf, &lo, &hi, &prec)? {
        let bstar = 0.5 * (l.to_f64().unwrap_or(0.0) + r.to_f64().unwrap_or(0.0));
        let coeffs = fam.qstar().eval_y_complex(Complex64::from(bstar));
        let aroots = complex_roots(&coeffs, 1e-12)?;
        let mut best: Option<(f64, Complex64)> = None;
        for i in 0..aroots.len() {
            for j in (i + 1)..aroots.len() {
                let d = (aroots[i] - aroots[j]).norm();
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, 0.5 * (aroots[i] + aroots[j])));
                }
            }
        }
        if let Some((_, astar)) = best {
            if astar.im.abs() < 1e-6 * (1.0 + astar.re.abs()) {
                match polish_fold(fam, bstar, astar.re)? {
                    Some((bf, af)) => out.push((bf, af)),
                    None => out.push((bstar, astar.re)),
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// The closed-form product prod_k (a - (n - 2k) c) with c^2 = b, expanded
/// over the integers: conjugate pairs give (a^2 - d^2 b) and even n leaves
/// a bare factor a.
pub fn top_weight_reference(n: usize) -> Result<BiPoly> {
    let mut prod = if n % 2 == 0 {
        BiPoly::term(Var::A, Var::B, 1, 0, rat(1, 1))
    } else {
        BiPoly::one(Var::A, Var::B)
    };
    let mut d = n as i64;
    while d > 0 {
        let factor = BiPoly::term(Var::A, Var::B, 2, 0, rat(1, 1))
            .checked_sub(&BiPoly::term(Var::A, Var::B, 0, 1, rat(d * d, 1)))?;
        prod = prod.checked_mul(&factor)?;
        d -= 2;
    }
    Ok(prod)
}

/// (observed, expected) degree in b of the a-discriminant of Q*.
pub fn discriminant_degree(fam: &Family) -> Result<(usize, usize)> {
    let disc = fam.qstar().discriminant_in_x()?;
    let n = fam.n();
    let deg = disc.degree().unwrap_or(0);
    Ok((deg, n * (n + 1) / 2))
}

/// Residuals of the large-b level law: scaled gaps (lambda_k - b^2) /
/// sqrt(b) measured against 2(2k + 1) - 2(n + 1) for k = 0..n.
pub fn asymptotic_residuals(fam: &Family, b: f64) -> Result<Vec<f64>> {
    if b <= 0.0 {
        return Err(QesError::Usage("the level law needs b > 0".into()));
    }
    let pts = fam.eigenvalues_at(b, 1e-11)?;
    let mut lams: Vec<f64> = pts
        .iter()
        .filter(|p| p.lambda.im.abs() < 1e-6 * (1.0 + p.lambda.norm()))
        .map(|p| p.lambda.re)
        .collect();
    if lams.len() != fam.n() + 1 {
        return Err(QesError::ScanInconclusive {
            lo: b,
            hi: b,
            detail: format!(
                "expected {} real levels at b = {}, found {}",
                fam.n() + 1,
                b,
                lams.len()
            ),
        });
    }
    lams.sort_by(|x, y| x.total_cmp(y));
    let n = fam.n() as f64;
    Ok(lams
        .iter()
        .enumerate()
        .map(|(k, lam)| (lam - b * b) / b.sqrt() - (2.0 * (2.0 * k as f64 + 1.0) - 2.0 * (n + 1.0)))
        .collect())
}
