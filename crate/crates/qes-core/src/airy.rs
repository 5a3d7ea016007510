//! Airy function of the first kind, its derivative, zeros, and the
//! polynomial reduction of higher derivatives.
//!
//! Three evaluation regimes, each kept in its sharpest domain:
//!
//! * Maclaurin series for |x| <= 5 or so, compensated summation.
//! * Poincare asymptotics, used directly only far out (x >= 10.5 or
//!   x <= -48) where the optimal truncation error is below f64 noise.
//! * A cached node table bridging the gap: anchor values from the far
//!   asymptotics are transported along the defining equation y'' = xy by
//!   exact Taylor steps of 0.5, and any point in between is one short
//!   Taylor step from its nearest node.
//!
//! The bridge exists because plain asymptotics bottom out near 1e-5
//! relative error at x = -4; no truncation choice fixes that, so the
//! series and the far expansion cannot meet accurately without transport.

use crate::error::{QesError, Result};
use crate::rational::{rat, rat_int};
use crate::unipoly::{UniPoly, Var};
use std::sync::OnceLock;

const SQRT_PI: f64 = 1.7724538509055160273;
/// Ai(0) = 3^{-2/3} / Gamma(2/3)
const AI_ZERO: f64 = 0.35502805388781723926;
/// -Ai'(0) = 3^{-1/3} / Gamma(1/3)
const AIP_ZERO: f64 = 0.25881940379280679840;

const STEP: f64 = 0.5;
const POS_MIN: f64 = 3.5;
const POS_ANCHOR: f64 = 10.5;
const NEG_MAX: f64 = -3.5;
const NEG_ANCHOR: f64 = -48.0;
/// Series turf; beyond it the table or the raw asymptotics take over.
const SERIES_SWITCH: f64 = 4.0;

#[derive(Debug, Clone, Copy)]
pub struct AiryValue {
    pub x: f64,
    pub ai: f64,
    pub aip: f64,
    /// Rough absolute error bound for ai.
    pub err: f64,
    /// Set when e^{-zeta} leaves the normal f64 range (x around 104 and
    /// beyond); ai and aip are then reported as zero.
    pub underflow: bool,
}

/// Ai and Ai' anywhere on the real line.
pub fn airy(x: f64) -> AiryValue {
    debug_assert!(x.is_finite());
    if x.abs() <= SERIES_SWITCH {
        let (ai, aip, spread) = series_with_spread(x);
        return AiryValue { x, ai, aip, err: 4.0 * f64::EPSILON * spread, underflow: false };
    }
    if x > 0.0 {
        let zeta = (2.0 / 3.0) * x.powf(1.5);
        if zeta > 708.0 {
            return AiryValue { x, ai: 0.0, aip: 0.0, err: 0.0, underflow: true };
        }
    }
    let (ai, aip, err) = far_with_err(x);
    AiryValue { x, ai, aip, err, underflow: false }
}

/// Series evaluation, exposed for cross-validation against the far
/// regime. Loses accuracy beyond |x| of about 5.5.
pub fn airy_by_series(x: f64) -> (f64, f64) {
    let (ai, aip, _) = series_with_spread(x);
    (ai, aip)
}

/// Far-regime evaluation (anchored asymptotics plus Taylor transport),
/// exposed for cross-validation. Valid for x >= 3.5 and x <= -3.5.
pub fn airy_by_asymptotics(x: f64) -> (f64, f64) {
    let (ai, aip, _) = far_with_err(x);
    (ai, aip)
}

/// Power series about 0 for f, g and their derivatives, Kahan-compensated;
/// also returns the magnitude spread that controls cancellation error.
fn series_with_spread(x: f64) -> (f64, f64, f64) {
    let x3 = x * x * x;
    let mut spread = 1.0f64;

    // f = 1 + x^3/6 + ...,          ratio x^3 / ((3k+2)(3k+3))
    // g = x + x^4/12 + ...,         ratio x^3 / ((3k+3)(3k+4))
    // f' = x^2/2 + x^5/30 + ...,    ratio x^3 / ((3k)(3k+2)) from k = 1
    // g' = 1 + x^3/3 + ...,         ratio x^3 / ((3k+1)(3k+3))
    let mut sum_f = KahanSum::new(1.0);
    let mut term = 1.0f64;
    let mut k = 0.0f64;
    while term.abs() > 1e-20 * sum_f.abs() + 1e-300 {
        term *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        sum_f.add(term);
        spread = spread.max(term.abs());
        k += 1.0;
    }

    let mut sum_g = KahanSum::new(x);
    term = x;
    k = 0.0;
    while term.abs() > 1e-20 * sum_g.abs() + 1e-300 {
        term *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        sum_g.add(term);
        spread = spread.max(term.abs());
        k += 1.0;
    }

    let mut sum_fp = KahanSum::new(0.5 * x * x);
    term = 0.5 * x * x;
    k = 1.0;
    while term.abs() > 1e-20 * sum_fp.abs() + 1e-300 {
        term *= x3 / ((3.0 * k) * (3.0 * k + 2.0));
        sum_fp.add(term);
        k += 1.0;
    }

    let mut sum_gp = KahanSum::new(1.0);
    term = 1.0;
    k = 0.0;
    while term.abs() > 1e-20 * sum_gp.abs() + 1e-300 {
        term *= x3 / ((3.0 * k + 1.0) * (3.0 * k + 3.0));
        sum_gp.add(term);
        k += 1.0;
    }

    let ai = AI_ZERO * sum_f.value() - AIP_ZERO * sum_g.value();
    let aip = AI_ZERO * sum_fp.value() - AIP_ZERO * sum_gp.value();
    (ai, aip, spread)
}

struct KahanSum {
    s: f64,
    c: f64,
}

impl KahanSum {
    fn new(v: f64) -> Self {
        KahanSum { s: v, c: 0.0 }
    }
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
    fn value(&self) -> f64 {
        self.s
    }
    fn abs(&self) -> f64 {
        self.s.abs()
    }
}

fn far_with_err(x: f64) -> (f64, f64, f64) {
    if x >= POS_ANCHOR {
        let (ai, aip) = asymptotic_pos(x);
        return (ai, aip, 4.0 * f64::EPSILON * ai.abs());
    }
    if x <= NEG_ANCHOR {
        let (ai, aip) = asymptotic_neg(x);
        return (ai, aip, 4.0 * f64::EPSILON * (ai.abs() + aip.abs()));
    }
    let (table, anchor, steps_scale) = if x > 0.0 {
        debug_assert!(x >= POS_MIN - 0.26, "far eval at x = {} outside the bridge", x);
        (pos_table(), POS_ANCHOR, (POS_ANCHOR - x).max(0.0))
    } else {
        debug_assert!(x <= NEG_MAX + 0.26, "far eval at x = {} outside the bridge", x);
        (neg_table(), NEG_ANCHOR, (x - NEG_ANCHOR).max(0.0))
    };
    let _ = anchor;
    let idx = ((x - table[0].0) / STEP)
        .round()
        .clamp(0.0, (table.len() - 1) as f64) as usize;
    let (xn, ai_n, aip_n) = table[idx];
    let (ai, aip) = taylor_step(xn, ai_n, aip_n, x - xn);
    let err = (2.0 * steps_scale / STEP + 2.0) * f64::EPSILON * (ai.abs() + aip.abs());
    (ai, aip, err)
}

fn pos_table() -> &'static [(f64, f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((POS_ANCHOR - POS_MIN) / STEP).round() as usize;
        let (mut ai, mut aip) = asymptotic_pos(POS_ANCHOR);
        let mut out = vec![(POS_ANCHOR, ai, aip)];
        let mut x = POS_ANCHOR;
        for _ in 0..n {
            let (a2, p2) = taylor_step(x, ai, aip, -STEP);
            x -= STEP;
            ai = a2;
            aip = p2;
            out.push((x, ai, aip));
        }
        out.reverse();
        out
    })
}

fn neg_table() -> &'static [(f64, f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((NEG_MAX - NEG_ANCHOR) / STEP).round() as usize;
        let (mut ai, mut aip) = asymptotic_neg(NEG_ANCHOR);
        let mut out = vec![(NEG_ANCHOR, ai, aip)];
        let mut x = NEG_ANCHOR;
        for _ in 0..n {
            let (a2, p2) = taylor_step(x, ai, aip, STEP);
            x += STEP;
            ai = a2;
            aip = p2;
            out.push((x, ai, aip));
        }
        out
    })
}

/// One exact Taylor step along y'' = xy from (y, y') at x0.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // a_{k+2} = (x0 a_k + a_{k-1}) / ((k+1)(k+2))
    let mut a_prev = y; // a_k
    let mut a_prev2 = 0.0; // a_{k-1}
    let mut a_cur = yp; // a_{k+1}
    let mut sum = y + yp * h;
    let mut dsum = yp;
    let mut hk = h; // h^{k+1}
    let scale = y.abs() + yp.abs().max(1e-300);
    for k in 0..80u32 {
        let kf = k as f64;
        let a_next = (x0 * a_prev + a_prev2) / ((kf + 1.0) * (kf + 2.0));
        // a_next multiplies h^{k+2}
        dsum += (kf + 2.0) * a_next * hk;
        hk *= h;
        sum += a_next * hk;
        a_prev2 = a_prev;
        a_prev = a_cur;
        a_cur = a_next;
        if (a_next * hk).abs() < 1e-22 * scale && k > 8 {
            break;
        }
    }
    (sum, dsum)
}

/// Poincare expansion for large positive x; relative error below f64
/// noise for x >= 10.5.
fn asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = (2.0 / 3.0) * x.powf(1.5);
    let pre = (-zeta).exp() / (2.0 * SQRT_PI * x.powf(0.25));
    let prep = -x.powf(0.25) * (-zeta).exp() / (2.0 * SQRT_PI);
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut u = 1.0; // c_k
    let mut sign = 1.0;
    let mut zk = 1.0; // zeta^{-k}
    for k in 1..=40u32 {
        su += sign * u * zk;
        let v = -(6.0 * (k as f64 - 1.0) + 1.0) / (6.0 * (k as f64 - 1.0) - 1.0) * u;
        sv += sign * v * zk;
        let kf = k as f64;
        let u_next = u * (6.0 * kf - 5.0) * (6.0 * kf - 1.0) / (72.0 * kf);
        if (u_next / zeta * zk).abs() > (u * zk).abs() {
            break; // past optimal truncation
        }
        u = u_next;
        sign = -sign;
        zk /= zeta;
    }
    (pre * su, prep * sv)
}

/// Oscillatory expansion for large negative x; used directly only at and
/// beyond the anchor where truncation error is negligible.
fn asymptotic_neg(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = (2.0 / 3.0) * t.powf(1.5);
    let w = zeta - std::f64::consts::FRAC_PI_4;
    let (s, c) = w.sin_cos();

    let mut even_u = 0.0;
    let mut odd_u = 0.0;
    let mut even_v = 0.0;
    let mut odd_v = 0.0;
    let mut u = 1.0f64; // c_k
    let mut zk = 1.0; // zeta^{-k}
    for k in 0..=40u32 {
        let kf = k as f64;
        let v = if k == 0 {
            1.0
        } else {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
        };
        // (-1)^{k/2 rounded} patterns: series in zeta^{-2} alternate
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even_u += sign * u * zk;
            even_v += sign * v * zk;
        } else {
            odd_u += sign * u * zk;
            odd_v += sign * v * zk;
        }
        let u_next = u * (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0));
        if (u_next / zeta * zk).abs() > (u * zk).abs() {
            break;
        }
        u = u_next;
        zk /= zeta;
    }

    let ai = (c * even_u + s * odd_u) / (SQRT_PI * t.powf(0.25));
    let aip = t.powf(0.25) / SQRT_PI * (s * even_v - c * odd_v);
    (ai, aip)
}

/// k-th negative zero of Ai, to near machine accuracy.
pub fn airy_zero(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(QesError::Usage("Airy zeros are indexed from 1".into()));
    }
    let t = 3.0 * std::f64::consts::PI * (4.0 * k as f64 - 1.0) / 8.0;
    let t2 = t * t;
    let guess = -t.powf(2.0 / 3.0)
        * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2)
            + 77125.0 / 82944.0 / (t2 * t2 * t2));
    let mut z = guess;
    for _ in 0..40 {
        let v = airy(z);
        let step = v.ai / v.aip;
        z -= step;
        if step.abs() <= 1e-14 * (1.0 + z.abs()) {
            return Ok(z);
        }
    }
    Err(QesError::RootsNotConverged { iters: 40, residual: airy(z).ai.abs() })
}

/// Polynomials (u_k, v_k) in s with d^k/ds^k Ai(s) = u_k Ai(s) + v_k Ai'(s).
///
/// u_0 = 1, v_0 = 0, then u' picks up s v and v' picks up u, because
/// Ai'' = s Ai folds every second derivative back onto the pair.
pub fn derivative_reduction(k: usize) -> (UniPoly, UniPoly) {
    let s = UniPoly::monomial(Var::S, rat(1, 1), 1);
    let mut u = UniPoly::constant(Var::S, rat_int(1));
    let mut v = UniPoly::zero(Var::S);
    for _ in 0..k {
        let u_next = &u.derivative() + &(&s * &v);
        let v_next = &u + &v.derivative();
        u = u_next;
        v = v_next;
    }
    (u, v)
}
