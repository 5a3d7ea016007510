//! Adaptive Dormand-Prince 5(4) integration for two-component complex
//! linear systems, with on-the-fly renormalization.
//!
//! Shooting along a ray multiplies the solution by factors like
//! e^{R^3/3}, far past f64 range, so whenever the state norm passes a
//! threshold it is divided out and the logarithm is accumulated
//! separately. For a linear system the rescaling is exact.

use crate::error::{QesError, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step guess; the controller adapts from there.
    pub h0: f64,
    pub max_steps: usize,
    /// State norm that triggers renormalization.
    pub renorm_threshold: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h0: 1e-3,
            max_steps: 20_000_000,
            renorm_threshold: 1e8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeSolution {
    pub w: [Complex64; 2],
    /// ln of the factor divided out of w along the way.
    pub logscale: f64,
    pub steps: usize,
    pub rejected: usize,
}

const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// b5 - b4, applied to the stages to get the embedded error estimate.
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate w' = f(t, w) from t0 to t1 (t0 < t1 or t0 > t1 both work).
pub fn integrate_linear2<F>(
    f: F,
    t0: f64,
    t1: f64,
    w0: [Complex64; 2],
    opts: &OdeOptions,
) -> Result<OdeSolution>
where
    F: Fn(f64, &[Complex64; 2]) -> [Complex64; 2],
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(OdeSolution { w: w0, logscale: 0.0, steps: 0, rejected: 0 });
    }
    let dir = span.signum();
    let mut t = t0;
    let mut w = w0;
    let mut logscale = 0.0f64;
    let mut h = opts.h0.abs().min(span.abs()) * dir;
    let mut k1 = f(t, &w);
    let mut steps = 0usize;
    let mut rejected = 0usize;

    while (t1 - t) * dir > 0.0 {
        if steps + rejected >= opts.max_steps {
            return Err(QesError::StepCollapse {
                at: format!("t = {:.6}", t),
                context: format!("step budget of {} exhausted", opts.max_steps),
            });
        }
        if h.abs() < 1e-14 * span.abs() {
            return Err(QesError::StepCollapse {
                at: format!("t = {:.6}", t),
                context: "step size fell below 1e-14 of the interval".into(),
            });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }

        let add = |w: &[Complex64; 2], ks: &[[Complex64; 2]], coef: &[f64], h: f64| {
            let mut out = *w;
            for (k, c) in ks.iter().zip(coef) {
                out[0] += h * c * k[0];
                out[1] += h * c * k[1];
            }
            out
        };

        let k2 = f(t + C[0] * h, &add(&w, &[k1], &A2, h));
        let k3 = f(t + C[1] * h, &add(&w, &[k1, k2], &A3, h));
        let k4 = f(t + C[2] * h, &add(&w, &[k1, k2, k3], &A4, h));
        let k5 = f(t + C[3] * h, &add(&w, &[k1, k2, k3, k4], &A5, h));
        let k6 = f(t + C[4] * h, &add(&w, &[k1, k2, k3, k4, k5], &A6, h));
        let w_new = add(&w, &[k1, k2, k3, k4, k5, k6], &B5[..6], h);
        let k7 = f(t + h, &w_new);

        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let mut err = 0.0f64;
        for i in 0..2 {
            let mut e = Complex64::ZERO;
            for (k, c) in ks.iter().zip(&ERR) {
                e += *c * k[i];
            }
            e *= h;
            let sc = opts.atol + opts.rtol * w[i].norm().max(w_new[i].norm());
            let r = e.norm() / sc;
            err += r * r;
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            t += h;
            w = w_new;
            k1 = k7;
            steps += 1;
            let norm = w[0].norm().max(w[1].norm());
            if norm > opts.renorm_threshold {
                w[0] /= norm;
                w[1] /= norm;
                k1[0] /= norm;
                k1[1] /= norm;
                logscale += norm.ln();
            }
        } else {
            rejected += 1;
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= factor;
    }

    Ok(OdeSolution { w, logscale, steps, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::airy;

    #[test]
    fn harmonic_oscillator_round_trip() {
        let f = |_t: f64, w: &[Complex64; 2]| [w[1], -w[0]];
        let w0 = [Complex64::ONE, Complex64::ZERO];
        let sol = integrate_linear2(f, 0.0, 10.0, w0, &OdeOptions::default()).unwrap();
        assert!((sol.w[0].re - (10.0f64).cos()).abs() < 1e-9);
        assert!((sol.w[1].re + (10.0f64).sin()).abs() < 1e-9);
        assert_eq!(sol.logscale, 0.0);
    }

    #[test]
    fn exponential_growth_triggers_renormalization() {
        let f = |_t: f64, w: &[Complex64; 2]| [w[1], w[0]];
        let w0 = [Complex64::ONE, Complex64::ONE];
        let sol = integrate_linear2(f, 0.0, 50.0, w0, &OdeOptions::default()).unwrap();
        assert!(sol.logscale > 0.0, "renorm must have engaged");
        let log_total = sol.logscale + sol.w[0].norm().ln();
        assert!((log_total - 50.0).abs() < 1e-7, "ln y(50) = {}", log_total);
    }

    #[test]
    fn reproduces_airy_along_the_growing_direction() {
        // start on the recessive tail and integrate inward, the same
        // orientation the shooting solver uses; the followed solution then
        // dominates any numerical contamination
        let f = |t: f64, w: &[Complex64; 2]| [w[1], t * w[0]];
        let v6 = airy(6.0);
        let w0 = [Complex64::new(v6.ai, 0.0), Complex64::new(v6.aip, 0.0)];
        // pure relative control: the state spans orders of magnitude, so
        // any absolute floor would slacken the tail where |w| is tiny
        let opts = OdeOptions { rtol: 1e-12, atol: 0.0, ..OdeOptions::default() };
        let sol = integrate_linear2(f, 6.0, 0.0, w0, &opts).unwrap();
        let expect = airy(0.0);
        let got = sol.w[0].re * sol.logscale.exp();
        assert!(
            (got - expect.ai).abs() < 1e-10 * expect.ai.abs(),
            "{} vs {}",
            got,
            expect.ai
        );
    }

    #[test]
    fn integrates_backwards() {
        let f = |_t: f64, w: &[Complex64; 2]| [w[1], -w[0]];
        let w0 = [Complex64::new((3.0f64).cos(), 0.0), Complex64::new(-(3.0f64).sin(), 0.0)];
        let sol = integrate_linear2(f, 3.0, 0.0, w0, &OdeOptions::default()).unwrap();
        assert!((sol.w[0].re - 1.0).abs() < 1e-9);
        assert!(sol.w[1].re.abs() < 1e-9);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let f = |_t: f64, w: &[Complex64; 2]| [w[1], -1e6 * w[0]];
        let w0 = [Complex64::ONE, Complex64::ZERO];
        let opts = OdeOptions { max_steps: 50, ..OdeOptions::default() };
        match integrate_linear2(f, 0.0, 100.0, w0, &opts) {
            Err(QesError::StepCollapse { context, .. }) => {
                assert!(context.contains("budget"));
            }
            other => panic!("expected step collapse, got {:?}", other.map(|s| s.steps)),
        }
    }
}
