//! Exact real-root isolation for squarefree rational polynomials.
//!
//! A Sturm chain counts roots in half-open intervals (lo, hi]; subdivision
//! continues until each interval holds exactly one root, then plain sign
//! bisection shrinks it below the requested width. All arithmetic is exact.

use crate::error::{QesError, Result};
use crate::rational::{rat, Rational};
use crate::unipoly::UniPoly;
use num_traits::{Signed, Zero};

/// Isolating intervals, ascending, each of width at most `precision` (width
/// zero when an endpoint hits a root exactly).
pub fn isolate_real_roots(
    p: &UniPoly,
    lo: &Rational,
    hi: &Rational,
    precision: &Rational,
) -> Result<Vec<(Rational, Rational)>> {
    if p.is_zero() {
        return Err(QesError::Usage("cannot isolate roots of the zero polynomial".into()));
    }
    if lo >= hi {
        return Err(QesError::Usage("empty isolation interval".into()));
    }
    if precision <= &Rational::zero() {
        return Err(QesError::Usage("precision must be positive".into()));
    }
    if p.degree() == Some(0) {
        return Ok(vec![]);
    }
    let g = p.gcd(&p.derivative());
    if g.degree().is_some_and(|d| d >= 1) {
        return Err(QesError::NotSquarefree(g.to_string()));
    }

    let chain = sturm_chain(p);
    let mut out = Vec::new();
    if p.eval_rational(lo).is_zero() {
        out.push((lo.clone(), lo.clone()));
    }

    let mut stack = vec![(lo.clone(), hi.clone(), count_roots(&chain, lo, hi))];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(refine(p, &chain, a, b, precision)),
            _ => {
                // Half-open intervals partition cleanly: a root exactly at
                // mid stays counted in (a, mid] and surfaces via refine.
                let mid = split_point(&a, &b);
                let left = count_roots(&chain, &a, &mid);
                let right = count_roots(&chain, &mid, &b);
                debug_assert_eq!(left + right, count);
                stack.push((a, mid.clone(), left));
                stack.push((mid, b, right));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Number of distinct real roots in (lo, hi].
pub fn count_real_roots(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(QesError::Usage("cannot count roots of the zero polynomial".into()));
    }
    let sf = p.squarefree_part();
    if sf.degree().map_or(true, |d| d == 0) {
        return Ok(0);
    }
    Ok(count_roots(&sturm_chain(&sf), lo, hi))
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let (_, r) = chain[k - 2].divrem(&chain[k - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn sign_changes(chain: &[UniPoly], x: &Rational) -> usize {
    let mut changes = 0;
    let mut prev = 0i8;
    for q in chain {
        let v = q.eval_rational(x);
        let s = if v.is_zero() {
            continue;
        } else if v.is_positive() {
            1i8
        } else {
            -1i8
        };
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

fn count_roots(chain: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    sign_changes(chain, lo) - sign_changes(chain, hi)
}

/// Interior split point; the caller handles an exact root landing on it.
fn split_point(a: &Rational, b: &Rational) -> Rational {
    (a + b) * rat(1, 2)
}

/// Shrinks an interval known to hold exactly one root of squarefree p.
/// Bisection steers by the Sturm count so roots sitting exactly on an
/// endpoint never confuse a sign test.
fn refine(
    p: &UniPoly,
    chain: &[UniPoly],
    mut a: Rational,
    mut b: Rational,
    precision: &Rational,
) -> (Rational, Rational) {
    if p.eval_rational(&b).is_zero() {
        return (b.clone(), b);
    }
    while &(&b - &a) > precision {
        let m = split_point(&a, &b);
        if p.eval_rational(&m).is_zero() {
            return (m.clone(), m);
        }
        if count_roots(chain, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}
