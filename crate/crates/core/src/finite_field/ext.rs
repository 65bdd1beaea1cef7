use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{self, FieldOps, PrimeField};
use super::fp::FpPoly;
use crate::error::{Error, Result};

/// `F_{p^m} = F_p[x] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    modulus: FpPoly,
    base: PrimeField,
    m: usize,
}

impl ExtField {
    /// Checks that `modulus` is monic and irreducible.
    pub fn new(modulus: FpPoly) -> Result<Self> {
        let m = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Precondition("extension modulus must have degree at least 1".into()))?;
        if !modulus.is_monic() {
            return Err(Error::NotMonic(modulus.to_string()));
        }
        if !modulus.is_irreducible()? {
            return Err(Error::ReducibleModulus(m));
        }
        Ok(Self { base: modulus.field(), modulus, m })
    }

    /// Uses the smallest monic irreducible of degree `m`, comparing
    /// coefficients from the leading term down.
    pub fn with_degree(p: u64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("extension degree must be positive".into()));
        }
        FpPoly::new(p, vec![0, 1])?;
        // x^m + c_{m-1}x^{m-1} + ... + c_0 with (c_{m-1}, ..., c_0) counted upward
        let mut digits = vec![0u64; m];
        loop {
            let mut coeffs: Vec<u64> = digits.iter().rev().copied().collect();
            coeffs.push(1);
            let cand = FpPoly::from_raw(p, coeffs);
            if cand.is_irreducible()? {
                return Self::new(cand);
            }
            let mut i = m;
            loop {
                if i == 0 {
                    unreachable!("irreducible polynomials exist in every degree");
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// Wraps a residue polynomial, reducing it modulo the field modulus.
    pub fn element(&self, rep: &[u64]) -> ExtFieldElem<'_> {
        let raw: Vec<u64> = rep.iter().map(|c| c % self.base.p).collect();
        let rep = field::rem(&self.base, &field::trim(&self.base, raw), self.modulus.coeffs());
        ExtFieldElem { field: self, rep }
    }

    pub fn embed(&self, c: u64) -> Vec<u64> {
        field::trim(&self.base, vec![c % self.base.p])
    }
}

impl FieldOps for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        Vec::new()
    }
    fn one(&self) -> Vec<u64> {
        vec![1]
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        field::add(&self.base, a, b)
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        field::sub(&self.base, a, b)
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        field::mul_mod(&self.base, a, b, self.modulus.coeffs())
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|c| self.base.neg(c)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!a.is_empty(), "inverse of zero");
        // extended Euclid: track s with s * a = r mod modulus
        let f = &self.base;
        let (mut r0, mut r1) = (self.modulus.coeffs().to_vec(), a.clone());
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = field::div_rem(f, &r0, &r1);
            let s = field::sub(f, &s0, &field::mul(f, &q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        // r0 is a nonzero constant
        let c = f.inv(&r0[0]);
        field::rem(f, &field::scale(f, &s0, &c), self.modulus.coeffs())
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.base.p).pow(self.m as u32)
    }
    fn prime_degree(&self) -> usize {
        self.m
    }
    fn random<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        field::trim(&self.base, (0..self.m).map(|_| rng.gen_range(0..self.base.p)).collect())
    }
}

/// Element of an [`ExtField`], stored as its reduced residue polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtFieldElem<'f> {
    field: &'f ExtField,
    rep: Vec<u64>,
}

impl<'f> ExtFieldElem<'f> {
    pub fn field(&self) -> &'f ExtField {
        self.field
    }

    /// Ascending residue coefficients, degree below the extension degree.
    pub fn rep(&self) -> &[u64] {
        &self.rep
    }

    pub fn is_one(&self) -> bool {
        self.rep == [1]
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self { field: self.field, rep: self.field.mul(&self.rep, &rhs.rep) }
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self { field: self.field, rep: self.field.pow(&self.rep, &BigUint::from(exp)) }
    }

    /// Value of `f` at this element.
    pub fn eval(&self, f: &FpPoly) -> Self {
        let coeffs: Vec<Vec<u64>> = f.coeffs().iter().map(|&c| self.field.embed(c)).collect();
        Self { field: self.field, rep: field::eval(self.field, &coeffs, &self.rep) }
    }
}

impl fmt::Display for ExtFieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = FpPoly::from_raw(self.field.p(), self.rep.clone()).to_string();
        write!(f, "{}", s.replace('x', "t"))
    }
}

impl fmt::Debug for ExtFieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All roots of `f` in `field`, listed with multiplicity.
pub fn roots_in_extension<'f>(f: &FpPoly, field: &'f ExtField) -> Result<Vec<ExtFieldElem<'f>>> {
    if f.p() != field.p() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial over F_{} but field of characteristic {}",
            f.p(),
            field.p()
        )));
    }
    let factors = f.factor()?;
    let required = f.splitting_degree()?;
    if field.degree() % required != 0 {
        return Err(Error::FieldTooSmall { given: field.degree(), required });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xe47 ^ f.p());
    let mut out = Vec::with_capacity(f.degree().unwrap_or(0));
    for (g, mult) in factors {
        let lifted: Vec<Vec<u64>> = g.coeffs().iter().map(|&c| field.embed(c)).collect();
        let mut linear = Vec::new();
        field::equal_degree_split(field, &lifted, 1, &mut rng, &mut linear);
        let mut roots: Vec<Vec<u64>> = linear.iter().map(|l| field.neg(&l[0])).collect();
        roots.sort();
        for r in roots {
            let elem = ExtFieldElem { field, rep: r };
            assert!(elem.eval(f).is_zero(), "extracted value is not a root");
            out.extend(std::iter::repeat(elem).take(mult));
        }
    }
    Ok(out)
}
