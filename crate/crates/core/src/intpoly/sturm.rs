//! Sturm chains over exact rationals, used for the positivity condition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
pub type RationalScalar = BigRational;

type QPoly = Vec<RationalScalar>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(num: &QPoly, den: &QPoly) -> QPoly {
    let mut r = num.clone();
    let d = den.len() - 1;
    let lead = &den[d];
    while r.len() > d {
        let top = r.len() - 1;
        let c = &r[top] / lead;
        for (j, dc) in den.iter().enumerate() {
            let idx = top - d + j;
            r[idx] = &r[idx] - &c * dc;
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut r);
    r
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn signum(q: &RationalScalar) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of `f` in the open interval `(0, inf)`.
pub fn count_positive_real_roots(f: &IntPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // Roots at 0 sit on the excluded endpoint; strip the x^j factor.
    let skip = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let core: QPoly = f.coeffs()[skip..]
        .iter()
        .map(|c| RationalScalar::from_integer(c.clone()))
        .collect();
    if core.len() <= 1 {
        return Ok(0);
    }
    let deriv: QPoly = core
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * RationalScalar::from_integer(BigInt::from(i)))
        .collect();
    let mut chain = vec![core, deriv];
    loop {
        let n = chain.len();
        let mut r = rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        chain.push(r);
    }
    let at_zero = sign_changes(chain.iter().map(|p| signum(&p[0])));
    let at_inf = sign_changes(chain.iter().map(|p| signum(p.last().unwrap())));
    Ok(at_zero - at_inf)
}

/// `(-1)^n f(t) > 0` for every `t < 0`, for a doubly monic `f` of degree `n`.
///
/// With `g(s) = (-1)^n f(-s)`, `g` is monic and `g(0) = 1`, so the condition
/// holds exactly when `g` has no root in `(0, inf)`.
pub fn is_positive(f: &IntPoly) -> Result<bool> {
    let n = f.require_doubly_monic()?;
    let mut g = f.negate_variable();
    if n % 2 == 1 {
        g = -&g;
    }
    Ok(count_positive_real_roots(&g)? == 0)
}
