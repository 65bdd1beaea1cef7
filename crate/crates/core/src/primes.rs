//! Small-number theory helpers: primality, trial division, divisors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Bound used when searching for witness primes.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Default trial-division bound when factoring `p^n - 1` for primitivity.
pub const PRIMITIVITY_BOUND: u64 = 10_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Trial division of `n` by primes up to `bound`. Returns the prime factors
/// found (with multiplicity exponents) and the unfactored cofactor.
pub fn trial_factor(n: &BigUint, bound: u64) -> (Vec<(u64, u32)>, BigUint) {
    let mut rest = n.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut d = 2u64;
    while d <= bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        if let Some(r) = rest.to_u64() {
            if r <= bound || is_prime(r) {
                out.push((r, 1));
                return (out, BigUint::one());
            }
        }
    }
    (out, rest)
}

/// Distinct prime factors of `n`, or `None` if trial division up to `bound`
/// leaves a composite or unproven cofactor.
pub fn prime_factors(n: &BigUint, bound: u64) -> Option<Vec<BigUint>> {
    let (found, rest) = trial_factor(n, bound);
    let mut primes: Vec<BigUint> = found.into_iter().map(|(p, _)| BigUint::from(p)).collect();
    if rest > BigUint::one() {
        let b = BigUint::from(bound);
        if rest < &b * &b {
            primes.push(rest);
        } else {
            return None;
        }
    }
    Some(primes)
}

/// Smallest prime factor of `|n|` below `bound`, if any.
pub fn smallest_prime_factor(n: &BigInt, bound: u64) -> Option<u64> {
    let m = n.abs().to_biguint()?;
    if m <= BigUint::one() {
        return None;
    }
    let (found, rest) = trial_factor(&m, bound);
    if let Some(&(p, _)) = found.first() {
        return Some(p);
    }
    rest.to_u64().filter(|&r| r <= bound)
}

/// All divisors of a nonzero integer, positive and negative, sorted ascending.
/// Returns `None` when `n` cannot be fully factored within `bound`.
pub fn signed_divisors(n: &BigInt, bound: u64) -> Option<Vec<BigInt>> {
    let m = n.abs().to_biguint()?;
    if m.is_zero() {
        return None;
    }
    let (found, rest) = trial_factor(&m, bound);
    if rest > BigUint::one() {
        let b = BigUint::from(bound);
        if rest >= &b * &b {
            return None;
        }
    }
    let mut positive = vec![BigInt::one()];
    let mut factors: Vec<(BigInt, u32)> = found.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
    if rest > BigUint::one() {
        factors.push((BigInt::from(rest), 1));
    }
    for (p, e) in factors {
        let mut next = Vec::with_capacity(positive.len() * (e as usize + 1));
        for d in &positive {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        positive = next;
    }
    let mut all: Vec<BigInt> = positive.iter().map(|d| -d).chain(positive.iter().cloned()).collect();
    all.sort();
    Some(all)
}

/// `gcd` of two `u64`s, re-exported for the search kernels.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "n = {n}");
        }
        assert!(is_prime(5_525_329));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn first_primes_list() {
        assert_eq!(first_primes(10), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(*first_primes(25).last().unwrap(), 97);
    }

    #[test]
    fn divisors_of_26() {
        let d = signed_divisors(&BigInt::from(-26), 1000).unwrap();
        let want: Vec<BigInt> = [-26, -13, -2, -1, 1, 2, 13, 26].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(d, want);
    }

    #[test]
    fn smallest_factor() {
        assert_eq!(smallest_prime_factor(&BigInt::from(-4), 100), Some(2));
        assert_eq!(smallest_prime_factor(&BigInt::from(1), 100), None);
        assert_eq!(smallest_prime_factor(&BigInt::from(10403), 50), None);
        assert_eq!(smallest_prime_factor(&BigInt::from(10403), 200), Some(101));
    }

    #[test]
    fn trial_factor_cofactor() {
        let (f, rest) = trial_factor(&BigUint::from(255u32), 10);
        assert_eq!(f, vec![(3, 1), (5, 1), (17, 1)]);
        assert_eq!(rest, BigUint::one());
        assert_eq!(prime_factors(&BigUint::from(1_000_003u64 * 1_000_033), 100), None);
        assert_eq!(prime_factors(&BigUint::from(2u64 * 1_000_003), 100).unwrap().len(), 2);
    }
}
