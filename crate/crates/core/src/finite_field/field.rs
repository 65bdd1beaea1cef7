//! Field contexts and dense polynomial arithmetic over them.
//!
//! Polynomials are `Vec<F::Elem>` in ascending order with no trailing zeros.
//! The helpers are written once against [`FieldOps`] and used both for the
//! prime field and for its extensions.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

/// Arithmetic context of a finite field. Elements carry no reference to the
/// context; every operation goes through it.
pub trait FieldOps {
    type Elem: Clone + PartialEq + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> BigUint;
    /// Degree over the prime subfield.
    fn prime_degree(&self) -> usize;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// The prime field `F_p`, elements are residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i128) as u64
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn prime_degree(&self) -> usize {
        1
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

pub(crate) fn trim<F: FieldOps>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub(crate) fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn add<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let len = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..len)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub(crate) fn sub<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let len = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..len)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub(crate) fn mul<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub(crate) fn scale<F: FieldOps>(f: &F, a: &[F::Elem], k: &F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|c| f.mul(c, k)).collect())
}

/// Quotient and remainder; panics if `b` is zero.
pub(crate) fn div_rem<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lead = f.inv(&b[db]);
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(&r[i], &inv_lead);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = f.sub(&r[idx], &f.mul(&c, bc));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub(crate) fn rem<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    div_rem(f, a, b).1
}

pub(crate) fn make_monic<F: FieldOps>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => scale(f, a, &f.inv(lead)),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub(crate) fn gcd<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

pub(crate) fn mul_mod<F: FieldOps>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

/// `base^exp mod m`.
pub(crate) fn pow_mod<F: FieldOps>(f: &F, base: &[F::Elem], exp: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = rem(f, &[f.one()], m);
    let b = rem(f, base, m);
    for i in (0..exp.bits()).rev() {
        acc = mul_mod(f, &acc, &acc, m);
        if exp.bit(i) {
            acc = mul_mod(f, &acc, &b, m);
        }
    }
    acc
}

pub(crate) fn derivative<F: FieldOps>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            // i * c computed by repeated doubling in the field
            let mut acc = f.zero();
            let mut addend = c.clone();
            let mut k = i as u64 % f.characteristic();
            while k > 0 {
                if k & 1 == 1 {
                    acc = f.add(&acc, &addend);
                }
                addend = f.add(&addend, &addend);
                k >>= 1;
            }
            acc
        })
        .collect();
    trim(f, out)
}

pub(crate) fn eval<F: FieldOps>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `x`
pub(crate) fn var<F: FieldOps>(f: &F) -> Vec<F::Elem> {
    vec![f.zero(), f.one()]
}

/// Splits a squarefree monic product of distinct irreducibles of degree
/// `d` into its factors (equal-degree factorization).
pub(crate) fn equal_degree_split<F: FieldOps, R: Rng>(
    f: &F,
    poly: &[F::Elem],
    d: usize,
    rng: &mut R,
    out: &mut Vec<Vec<F::Elem>>,
) {
    let n = degree(poly).unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(make_monic(f, poly));
        return;
    }
    let q_d = f.order().pow(d as u32);
    loop {
        let a: Vec<F::Elem> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(f, &a, poly);
        if degree(&g).unwrap_or(0) > 0 {
            let (co, _) = div_rem(f, poly, &g);
            equal_degree_split(f, &g, d, rng, out);
            equal_degree_split(f, &co, d, rng, out);
            return;
        }
        let b = if f.characteristic() == 2 {
            // trace map: a + a^2 + a^4 + ... over e*d terms
            let terms = f.prime_degree() * d;
            let mut t = rem(f, &a, poly);
            let mut acc = t.clone();
            for _ in 1..terms {
                t = mul_mod(f, &t, &t, poly);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let e = (q_d.clone() - BigUint::one()) >> 1;
            let t = pow_mod(f, &a, &e, poly);
            sub(f, &t, &[f.one()])
        };
        let g = gcd(f, &b, poly);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let (co, _) = div_rem(f, poly, &g);
            equal_degree_split(f, &g, d, rng, out);
            equal_degree_split(f, &co, d, rng, out);
            return;
        }
    }
}
