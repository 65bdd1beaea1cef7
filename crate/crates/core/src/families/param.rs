use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Formal parameters, in exponent-vector order.
pub const PARAM_NAMES: [char; 3] = ['a', 'b', 'q'];

/// Integer values for the parameters, keyed by name.
pub type Assignment = BTreeMap<char, BigInt>;

type Exponents = [u32; 3];

/// Multivariate integer polynomial in the parameters `a`, `b`, `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

fn param_index(name: char) -> Option<usize> {
    PARAM_NAMES.iter().position(|&c| c == name)
}

impl ParamPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::default();
        p.insert([0; 3], c.into());
        p
    }

    pub fn var(name: char) -> Result<Self> {
        let i = param_index(name).ok_or_else(|| Error::Parse(format!("unknown parameter '{name}'")))?;
        let mut e = [0; 3];
        e[i] = 1;
        let mut p = Self::default();
        p.insert(e, BigInt::one());
        Ok(p)
    }

    fn insert(&mut self, e: Exponents, c: BigInt) {
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Monomials as (exponents of `a`, `b`, `q`; coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Names of the parameters that occur.
    pub fn variables(&self) -> Vec<char> {
        PARAM_NAMES
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, &c)| c)
            .collect()
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&[0; 3]).cloned(),
            _ => None,
        }
    }

    /// Coefficient-wise division, if every coefficient is a multiple of `d`.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            terms.insert(*e, c / d);
        }
        Some(Self { terms })
    }

    /// Display without spaces, e.g. `a^2-a-1`.
    pub fn compact(&self) -> String {
        self.to_string().replace(' ', "")
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Missing parameters evaluate as an error.
    pub fn eval(&self, values: &Assignment) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let v = values
                        .get(&PARAM_NAMES[i])
                        .ok_or_else(|| Error::Parameters(format!("missing value for '{}'", PARAM_NAMES[i])))?;
                    term *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, text };
        let p = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }
}

struct Parser<'t> {
    chars: Vec<char>,
    pos: usize,
    text: &'t str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in '{}'", self.pos, self.text))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ParamPoly> {
        let mut acc = ParamPoly::default();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
        }
    }

    /// Juxtaposed or `*`-separated factors.
    fn term(&mut self) -> Result<ParamPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<ParamPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<ParamPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(ParamPoly::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                ParamPoly::var(c).map_err(|_| self.error(&format!("unknown parameter '{c}'")))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(*e, c.clone());
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    /// Graded order, highest degree first, e.g. `a^2 - a - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|x, y| {
            let dx: u32 = x.iter().sum();
            let dy: u32 = y.iter().sum();
            dy.cmp(&dx).then_with(|| y.cmp(x))
        });
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "{}", PARAM_NAMES[j])?,
                    _ => write!(f, "{}^{k}", PARAM_NAMES[j])?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(pairs: &[(char, i64)]) -> Assignment {
        pairs.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()
    }

    #[test]
    fn parses_table_entries() {
        let p = ParamPoly::parse("(3b-2)a-b-9").unwrap();
        assert_eq!(p.eval(&at(&[('a', 2), ('b', 5)])).unwrap(), BigInt::from(13 * 2 - 5 - 9));
        assert_eq!(p.variables(), vec!['a', 'b']);
        let p = ParamPoly::parse("-3q^2-22q-42").unwrap();
        assert_eq!(p.eval(&at(&[('q', -2)])).unwrap(), BigInt::from(-12 + 44 - 42));
        let p = ParamPoly::parse("1-a").unwrap();
        assert_eq!(p.to_string(), "-a + 1");
        assert_eq!(ParamPoly::parse("2a^2").unwrap().to_string(), "2a^2");
        assert_eq!(ParamPoly::parse("a*a-a").unwrap(), ParamPoly::parse("a^2-a").unwrap());
        assert_eq!(ParamPoly::parse("-5").unwrap().total_degree(), 0);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "a+", "(a", "x", "a^", "2)", "a^b"] {
            assert!(ParamPoly::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn missing_parameter() {
        let p = ParamPoly::parse("ab").unwrap();
        assert!(matches!(p.eval(&at(&[('a', 1)])), Err(Error::Parameters(_))));
    }

    #[test]
    fn display_round_trips() {
        for text in ["a^2-a-1", "(-b+1)a+5", "2q^2+15q+30", "0", "-a", "ab-5"] {
            let p = ParamPoly::parse(text).unwrap();
            assert_eq!(ParamPoly::parse(&p.to_string()).unwrap(), p, "{text}");
        }
    }
}
