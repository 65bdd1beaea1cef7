use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{self, FieldOps, PrimeField};
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::primes;

/// Polynomial over the prime field `F_p`, ascending residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Irreducible factor with multiplicity.
pub type Factor = (FpPoly, usize);

impl FpPoly {
    /// Reduces arbitrary residues; rejects composite `p`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if !primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::from_raw(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    /// Trusted constructor: residues already reduced.
    pub(crate) fn from_raw(p: u64, coeffs: Vec<u64>) -> Self {
        let f = PrimeField { p };
        Self { p, coeffs: field::trim(&f, coeffs) }
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Result<Self> {
        if !primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let f = PrimeField { p };
        Ok(Self::from_raw(p, coeffs.iter().map(|&c| f.reduce_i64(c)).collect()))
    }

    pub fn from_descending(p: u64, coeffs: &[i64]) -> Result<Self> {
        let asc: Vec<i64> = coeffs.iter().rev().copied().collect();
        Self::from_i64s(p, &asc)
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        field::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Monic with constant term `(-1)^n` in `F_p`.
    pub fn is_doubly_monic(&self) -> bool {
        match self.degree() {
            Some(n) if self.is_monic() => {
                let want = if n % 2 == 0 { 1 % self.p } else { self.p - 1 };
                self.coeffs[0] == want
            }
            _ => false,
        }
    }

    pub fn require_doubly_monic(&self) -> Result<usize> {
        if !self.is_doubly_monic() {
            return Err(Error::Precondition(format!("{self} is not doubly monic over F_{}", self.p)));
        }
        Ok(self.degree().unwrap())
    }

    /// Integer lift with residues in `[0, p)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field();
        field::eval(&f, &self.coeffs, &(x % self.p))
    }

    fn wrap(&self, coeffs: Vec<u64>) -> FpPoly {
        FpPoly { p: self.p, coeffs }
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        self.wrap(field::mul(&self.field(), &self.coeffs, &rhs.coeffs))
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        self.wrap(field::add(&self.field(), &self.coeffs, &rhs.coeffs))
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        self.wrap(field::sub(&self.field(), &self.coeffs, &rhs.coeffs))
    }

    pub fn div_rem(&self, rhs: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        if rhs.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = field::div_rem(&self.field(), &self.coeffs, &rhs.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    pub fn rem(&self, rhs: &FpPoly) -> Result<FpPoly> {
        Ok(self.div_rem(rhs)?.1)
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        self.wrap(field::gcd(&self.field(), &self.coeffs, &rhs.coeffs))
    }

    pub fn monic(&self) -> FpPoly {
        self.wrap(field::make_monic(&self.field(), &self.coeffs))
    }

    pub fn derivative(&self) -> FpPoly {
        self.wrap(field::derivative(&self.field(), &self.coeffs))
    }

    /// `(-1)^n x^n f(1/x)` over `F_p`.
    pub fn signed_reciprocal(&self) -> Result<FpPoly> {
        let n = self.require_doubly_monic()?;
        let f = self.field();
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .map(|c| if n % 2 == 1 { f.neg(c) } else { *c })
            .collect();
        Ok(self.wrap(field::trim(&f, coeffs)))
    }

    /// `gcd(f, f') = 1`.
    pub fn is_separable(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `x^(p^i) mod self` for `i = 0..=count`.
    fn frobenius_powers(&self, count: usize) -> Vec<Vec<u64>> {
        let f = self.field();
        let p = BigUint::from(self.p);
        let mut cur = field::rem(&f, &field::var(&f), &self.coeffs);
        let mut out = vec![cur.clone()];
        for _ in 0..count {
            cur = field::pow_mod(&f, &cur, &p, &self.coeffs);
            out.push(cur.clone());
        }
        out
    }

    /// Rabin's test: `x^(p^n) = x mod f` and `gcd(x^(p^(n/l)) - x, f) = 1`
    /// for each prime `l | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::Precondition("irreducibility of a constant".into())),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let g = self.monic();
        let f = g.field();
        let powers = g.frobenius_powers(n);
        let x = field::rem(&f, &field::var(&f), &g.coeffs);
        if powers[n] != x {
            return Ok(false);
        }
        let (prime_divisors, _) = primes::trial_factor(&BigUint::from(n), n as u64);
        for (l, _) in prime_divisors {
            let h = field::sub(&f, &powers[n / l as usize], &x);
            if field::degree(&field::gcd(&f, &h, &g.coeffs)) != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a root of this irreducible polynomial generates `F_{p^n}^*`.
    pub fn is_primitive(&self) -> Result<bool> {
        self.is_primitive_with_bound(primes::PRIMITIVITY_BOUND)
    }

    pub fn is_primitive_with_bound(&self, bound: u64) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::Precondition("primitivity of a constant".into())),
            Some(n) => n,
        };
        if self.coeffs[0] == 0 {
            return Err(Error::Precondition(format!("{self} has zero constant term")));
        }
        if !self.is_irreducible()? {
            return Err(Error::Precondition(format!("{self} is not irreducible over F_{}", self.p)));
        }
        let order = BigUint::from(self.p).pow(n as u32) - BigUint::one();
        let ell = primes::prime_factors(&order, bound).ok_or_else(|| Error::Undecided(order.to_string()))?;
        let g = self.monic();
        let f = g.field();
        let x = field::var(&f);
        let one = field::rem(&f, &[1], &g.coeffs);
        for l in ell {
            if field::pow_mod(&f, &x, &(&order / &l), &g.coeffs) == one {
                return Ok(false);
            }
        }
        // order 1 group: x must itself be 1
        Ok(order != BigUint::one() || field::rem(&f, &x, &g.coeffs) == one)
    }

    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then by coefficients from the leading term down.
    pub fn factor(&self) -> Result<Vec<Factor>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.field();
        let monic = self.monic();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.p);
        let mut out = Vec::new();
        for (sqf, mult) in square_free(&f, &monic.coeffs) {
            for (part, d) in distinct_degree(&f, &sqf) {
                let mut pieces = Vec::new();
                field::equal_degree_split(&f, &part, d, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|g| (self.wrap(g), mult)));
            }
        }
        out.sort_by(|(a, ma), (b, mb)| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
                .then(ma.cmp(mb))
        });
        Ok(out)
    }

    /// Least `m` such that this polynomial splits into linear factors over `F_{p^m}`.
    pub fn splitting_degree(&self) -> Result<usize> {
        Ok(self
            .factor()?
            .iter()
            .fold(1usize, |acc, (g, _)| acc.lcm(&g.degree().unwrap_or(1))))
    }
}

/// Coefficient-wise reduction of an integer polynomial.
pub fn reduce_mod_p(f: &IntPoly, p: u64) -> Result<FpPoly> {
    if !primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = BigInt::from(p);
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&m).to_u64().expect("residue fits u64"))
        .collect();
    Ok(FpPoly::from_raw(p, coeffs))
}

fn square_free(f: &PrimeField, poly: &[u64]) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    if field::degree(poly).unwrap_or(0) == 0 {
        return out;
    }
    let d = field::derivative(f, poly);
    if d.is_empty() {
        // poly = g(x^p)
        let root: Vec<u64> = poly.iter().step_by(f.p as usize).copied().collect();
        return square_free(f, &root)
            .into_iter()
            .map(|(g, m)| (g, m * f.p as usize))
            .collect();
    }
    let mut c = field::gcd(f, poly, &d);
    let mut w = field::div_rem(f, poly, &c).0;
    let mut i = 1;
    while field::degree(&w).unwrap_or(0) > 0 {
        let y = field::gcd(f, &w, &c);
        let z = field::div_rem(f, &w, &y).0;
        if field::degree(&z).unwrap_or(0) > 0 {
            out.push((field::make_monic(f, &z), i));
        }
        i += 1;
        w = y;
        c = field::div_rem(f, &c, &w).0;
    }
    if field::degree(&c).unwrap_or(0) > 0 {
        let root: Vec<u64> = c.iter().step_by(f.p as usize).copied().collect();
        out.extend(
            square_free(f, &root)
                .into_iter()
                .map(|(g, m)| (g, m * f.p as usize)),
        );
    }
    out
}

fn distinct_degree(f: &PrimeField, poly: &[u64]) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut rest = poly.to_vec();
    let p = BigUint::from(f.p);
    let x = field::var(f);
    let mut h = field::rem(f, &x, &rest);
    let mut i = 1;
    while field::degree(&rest).unwrap_or(0) >= 2 * i {
        h = field::pow_mod(f, &h, &p, &rest);
        let g = field::gcd(f, &rest, &field::sub(f, &h, &x));
        if field::degree(&g).unwrap_or(0) > 0 {
            rest = field::div_rem(f, &rest, &g).0;
            h = field::rem(f, &h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = field::degree(&rest).filter(|&d| d > 0) {
        out.push((field::make_monic(f, &rest), d));
    }
    out
}

impl fmt::Display for FpPoly {
    /// Compact form, e.g. `x^3+x^2+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if c != 1 || i == 0 {
                write!(f, "{c}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[F_{}]({self})", self.p)
    }
}

/// `(g1)(g2)^2...` rendering of a factor list.
pub fn format_factorization(factors: &[Factor]) -> String {
    factors
        .iter()
        .map(|(g, m)| if *m == 1 { format!("({g})") } else { format!("({g})^{m}") })
        .collect()
}
