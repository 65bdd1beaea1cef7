//! Parametric tables of Cappell-Shaneson polynomials for degrees 2 to 7.
//!
//! The tables live in `data/families.txt` and are parsed once on first use.
//! Every entry is an integer polynomial in the parameters `a`, `b`, `q`.

mod param;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use param::{Assignment, ParamPoly, PARAM_NAMES};

use crate::cs_core;
use crate::error::{Error, Result};
use crate::intpoly::{is_positive, IntPoly};

const TABLE: &str = include_str!("../../data/families.txt");

/// Default cap on the number of boxes points [`brute_force_enumerate`] visits.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 50_000_000;

/// Positivity column of a table row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    Always,
    Never,
    /// No closed form; decided by the Sturm test on each instance.
    Computed,
    AtMost(char, i64),
    AtLeast(char, i64),
}

impl FromStr for Positivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "always" => return Ok(Self::Always),
            "never" => return Ok(Self::Never),
            "computed" => return Ok(Self::Computed),
            _ => {}
        }
        let bound = |rest: &str| rest.trim().parse::<i64>().map_err(|e| Error::Parse(format!("positivity '{s}': {e}")));
        let name = s.chars().next().ok_or_else(|| Error::Parse("empty positivity".into()))?;
        if let Some(rest) = s[1..].strip_prefix("<=") {
            Ok(Self::AtMost(name, bound(rest)?))
        } else if let Some(rest) = s[1..].strip_prefix(">=") {
            Ok(Self::AtLeast(name, bound(rest)?))
        } else {
            Err(Error::Parse(format!("unrecognised positivity '{s}'")))
        }
    }
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Always => write!(f, "always"),
            Self::Never => write!(f, "never"),
            Self::Computed => write!(f, "computed"),
            Self::AtMost(c, v) => write!(f, "{c}<={v}"),
            Self::AtLeast(c, v) => write!(f, "{c}>={v}"),
        }
    }
}

/// One table row: coefficients `c_0, ..., c_{n-1}` of a monic degree-`n` polynomial.
#[derive(Clone, Debug)]
pub struct Family {
    pub id: String,
    pub degree: usize,
    pub params: Vec<char>,
    pub coeffs: Vec<ParamPoly>,
    /// Entries as transcribed.
    pub coeff_text: Vec<String>,
    pub positivity: Positivity,
}

fn check_assignment(params: &[char], values: &Assignment) -> Result<()> {
    let given: Vec<char> = values.keys().copied().collect();
    if given != params {
        return Err(Error::Parameters(format!("expected parameters {params:?}, got {given:?}")));
    }
    Ok(())
}

impl Family {
    fn parse_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [id, coeffs, positivity] = fields[..] else {
            return Err(Error::Parse(format!("expected 3 fields in '{line}'")));
        };
        let coeff_text: Vec<String> = coeffs.split(',').map(|s| s.trim().to_string()).collect();
        let coeffs = coeff_text.iter().map(|t| ParamPoly::parse(t)).collect::<Result<Vec<_>>>()?;
        let mut params: Vec<char> = coeffs.iter().flat_map(ParamPoly::variables).collect();
        params.sort();
        params.dedup();
        Ok(Self {
            id: id.to_string(),
            degree: coeffs.len(),
            params,
            coeffs,
            coeff_text,
            positivity: positivity.parse()?,
        })
    }

    pub fn instantiate(&self, values: &Assignment) -> Result<IntPoly> {
        check_assignment(&self.params, values)?;
        let mut c = self.coeffs.iter().map(|p| p.eval(values)).collect::<Result<Vec<_>>>()?;
        c.push(BigInt::one());
        Ok(IntPoly::new(c))
    }

    /// Whether the instance at `values` is positive.
    pub fn positivity_holds(&self, values: &Assignment) -> Result<bool> {
        check_assignment(&self.params, values)?;
        let get = |c: &char| {
            values
                .get(c)
                .cloned()
                .ok_or_else(|| Error::Parameters(format!("positivity refers to absent parameter '{c}'")))
        };
        Ok(match &self.positivity {
            Positivity::Always => true,
            Positivity::Never => false,
            Positivity::AtMost(c, v) => get(c)? <= BigInt::from(*v),
            Positivity::AtLeast(c, v) => get(c)? >= BigInt::from(*v),
            Positivity::Computed => is_positive(&self.instantiate(values)?)?,
        })
    }

    /// Parameter values for which this row produces `f`, if any.
    ///
    /// Each non-constant monomial is treated as an unknown; the resulting
    /// linear system over `Q` is solved and the candidate re-instantiated.
    pub fn match_poly(&self, f: &IntPoly) -> Result<Option<Assignment>> {
        if f.degree() != Some(self.degree) || !f.is_monic() {
            return Ok(None);
        }
        let mut monomials: Vec<[u32; 3]> = self
            .coeffs
            .iter()
            .flat_map(|p| p.terms().map(|(e, _)| *e))
            .filter(|e| e.iter().any(|&k| k > 0))
            .collect();
        monomials.sort();
        monomials.dedup();
        let cols = monomials.len();
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(self.degree);
        for (i, p) in self.coeffs.iter().enumerate() {
            let mut row = vec![BigRational::zero(); cols + 1];
            let mut constant = BigInt::zero();
            for (e, c) in p.terms() {
                match monomials.iter().position(|m| m == e) {
                    Some(j) => row[j] = BigRational::from_integer(c.clone()),
                    None => constant = c.clone(),
                }
            }
            row[cols] = BigRational::from_integer(f.coeff(i) - constant);
            rows.push(row);
        }
        let Some(solution) = solve_linear(rows, cols) else {
            return Ok(None);
        };
        let solution = solution.ok_or_else(|| {
            Error::Precondition(format!("row {} is not determined by its coefficients", self.id))
        })?;
        let mut values = Assignment::new();
        for &name in &self.params {
            let idx = PARAM_NAMES.iter().position(|&c| c == name).unwrap();
            let mut unit = [0u32; 3];
            unit[idx] = 1;
            let j = monomials.iter().position(|m| *m == unit).ok_or_else(|| {
                Error::Precondition(format!("parameter {name} of {} never occurs linearly", self.id))
            })?;
            let v = &solution[j];
            if !v.is_integer() {
                return Ok(None);
            }
            values.insert(name, v.to_integer());
        }
        Ok((self.instantiate(&values)? == *f).then_some(values))
    }
}

/// Gaussian elimination on an augmented matrix with `cols` unknowns.
/// `None`: inconsistent. `Some(None)`: consistent but not unique.
fn solve_linear(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Option<Option<Vec<BigRational>>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..=cols {
                    let sub = &factor * &rows[pivot_row][c];
                    rows[r][c] = &rows[r][c] - sub;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    if pivots.len() < cols {
        return Some(None);
    }
    Some(Some((0..cols).map(|i| rows[i][cols].clone()).collect()))
}

fn load() -> Vec<Family> {
    TABLE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Family::parse_line(l).unwrap_or_else(|e| panic!("bad family table line '{l}': {e}")))
        .collect()
}

/// Every row of every table, in table order.
pub fn all_families() -> &'static [Family] {
    static CELL: OnceLock<Vec<Family>> = OnceLock::new();
    CELL.get_or_init(load)
}

pub fn family(id: &str) -> Option<&'static Family> {
    all_families().iter().find(|f| f.id == id)
}

/// Rows for one degree, in table order.
pub fn catalog(degree: usize) -> Result<Vec<&'static Family>> {
    if !(2..=7).contains(&degree) {
        return Err(Error::DegreeOutOfRange { degree, min: 2, max: 7 });
    }
    Ok(all_families().iter().filter(|f| f.degree == degree).collect())
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'r> {
            id: &'r str,
            degree: usize,
            params: Vec<String>,
            coeffs: &'r [String],
            positivity: String,
        }
        Row {
            id: &self.id,
            degree: self.degree,
            params: self.params.iter().map(char::to_string).collect(),
            coeffs: &self.coeff_text,
            positivity: self.positivity.to_string(),
        }
        .serialize(s)
    }
}

/// The catalog for one degree as CSV, in table order: `id,params,c0,...,c{n-1},positivity`.
pub fn catalog_csv(degree: usize) -> Result<String> {
    let rows = catalog(degree)?;
    let mut out = String::from("id,params");
    for i in 0..degree {
        out.push_str(&format!(",c{i}"));
    }
    out.push_str(",positivity\n");
    for fam in rows {
        let params: String = fam.params.iter().collect();
        out.push_str(&format!("{},{},{},{}\n", fam.id, params, fam.coeff_text.join(","), fam.positivity));
    }
    Ok(out)
}

pub fn instantiate(family: &Family, values: &Assignment) -> Result<IntPoly> {
    family.instantiate(values)
}

pub fn positivity_holds(family: &Family, values: &Assignment) -> Result<bool> {
    family.positivity_holds(values)
}

fn serialize_assignment<S: Serializer>(values: &Assignment, s: S) -> std::result::Result<S::Ok, S::Error> {
    let as_text: BTreeMap<String, String> = values.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    as_text.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub family_id: String,
    #[serde(serialize_with = "serialize_assignment")]
    pub params: Assignment,
}

/// Table row and parameters reproducing a CS polynomial of degree 2 to 5.
/// Overlapping rows resolve to the smallest `(id, parameters)` pair.
pub fn classify(f: &IntPoly) -> Result<Option<Classification>> {
    let n = f.require_monic()?;
    if !(2..=5).contains(&n) {
        return Err(Error::DegreeOutOfRange { degree: n, min: 2, max: 5 });
    }
    if !cs_core::is_cs(f)? {
        return Ok(None);
    }
    let mut best: Option<Classification> = None;
    for fam in catalog(n)? {
        if let Some(params) = fam.match_poly(f)? {
            let cand = Classification { family_id: fam.id.clone(), params };
            let better = match &best {
                None => true,
                Some(b) => {
                    let key = |c: &Classification| (c.family_id.clone(), c.params.values().cloned().collect::<Vec<_>>());
                    key(&cand) < key(b)
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

/// Number of integer points in a box; zero if any side is empty.
pub fn box_volume(bounds: &[(i64, i64)]) -> u128 {
    bounds
        .iter()
        .map(|&(lo, hi)| if hi < lo { 0 } else { (hi as i128 - lo as i128 + 1) as u128 })
        .product()
}

/// Every CS polynomial of the given degree whose coefficients `c_1..c_{n-1}`
/// lie in `bounds`, ordered lexicographically by `(c_1, ..., c_{n-1})`.
pub fn brute_force_enumerate(degree: usize, bounds: &[(i64, i64)], budget: u128) -> Result<Vec<IntPoly>> {
    if degree < 2 {
        return Err(Error::DegreeOutOfRange { degree, min: 2, max: usize::MAX });
    }
    if bounds.len() != degree - 1 {
        return Err(Error::DimensionMismatch(format!(
            "degree {degree} needs {} coefficient ranges, got {}",
            degree - 1,
            bounds.len()
        )));
    }
    let volume = box_volume(bounds);
    if volume > budget {
        return Err(Error::BudgetExceeded { volume: volume.to_string(), budget: budget.to_string() });
    }
    if volume == 0 {
        return Ok(Vec::new());
    }
    let c0: i64 = if degree % 2 == 0 { 1 } else { -1 };
    let free = &bounds[..degree - 2];
    let (last_lo, last_hi) = bounds[degree - 2];
    let scan = |prefix: &mut Vec<i64>, out: &mut Vec<IntPoly>| -> Result<()> {
        // f(1) = 1 + c0 + sum c_i must be ±1
        let partial: i64 = 1 + c0 + prefix.iter().sum::<i64>();
        for eps in [-1i64, 1] {
            let last = eps - partial;
            if last < last_lo || last > last_hi {
                continue;
            }
            let mut asc = Vec::with_capacity(degree + 1);
            asc.push(c0);
            asc.extend_from_slice(prefix);
            asc.push(last);
            asc.push(1);
            let f = IntPoly::from_i64s(&asc);
            if cs_core::is_cs(&f)? {
                out.push(f);
            }
        }
        Ok(())
    };
    if free.is_empty() {
        let mut out = Vec::new();
        scan(&mut Vec::new(), &mut out)?;
        return Ok(out);
    }
    let (lo0, hi0) = free[0];
    let chunks: Vec<Result<Vec<IntPoly>>> = (lo0..=hi0)
        .into_par_iter()
        .map(|c1| {
            let mut out = Vec::new();
            let rest = &free[1..];
            let mut prefix: Vec<i64> = std::iter::once(c1).chain(rest.iter().map(|&(lo, _)| lo)).collect();
            loop {
                scan(&mut prefix, &mut out)?;
                // odometer over prefix[1..], last position fastest
                let mut i = rest.len();
                loop {
                    if i == 0 {
                        return Ok(out);
                    }
                    prefix[i] += 1;
                    if prefix[i] <= rest[i - 1].1 {
                        break;
                    }
                    prefix[i] = rest[i - 1].0;
                    i -= 1;
                }
            }
        })
        .collect();
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    Ok(all)
}

/// Integer value of a small parameter, for display.
pub fn assignment_text(values: &Assignment) -> String {
    values
        .iter()
        .map(|(k, v)| format!("{k}={}", v.to_i64().map_or_else(|| v.to_string(), |x| x.to_string())))
        .collect::<Vec<_>>()
        .join(",")
}

/// Convenience for building assignments from small integers.
pub fn assignment(pairs: &[(char, i64)]) -> Assignment {
    pairs.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()
}

/// Whether `f` lies in `bounds` coordinate-wise for `c_1..c_{n-1}`.
pub fn in_box(f: &IntPoly, bounds: &[(i64, i64)]) -> bool {
    bounds.iter().enumerate().all(|(i, &(lo, hi))| {
        let c = f.coeff(i + 1);
        c >= BigInt::from(lo) && c <= BigInt::from(hi)
    })
}

/// All parameter assignments with each parameter in `[lo, hi]`.
pub fn parameter_grid(params: &[char], lo: i64, hi: i64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for &p in params {
        out = out
            .into_iter()
            .flat_map(|base| {
                (lo..=hi).map(move |v| {
                    let mut next = base.clone();
                    next.insert(p, BigInt::from(v));
                    next
                })
            })
            .collect();
    }
    out
}

impl Classification {
    pub fn family(&self) -> &'static Family {
        family(&self.family_id).expect("classification refers to a catalog row")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(desc: &[i64]) -> IntPoly {
        IntPoly::from_descending(desc)
    }

    #[test]
    fn catalog_counts() {
        let counts: Vec<usize> = (2..=7).map(|d| catalog(d).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 2, 4, 12, 4, 8]);
        assert!(catalog(8).is_err());
        assert!(catalog(1).is_err());
    }

    #[test]
    fn catalog_examples() {
        let row = &catalog(4).unwrap()[0];
        assert_eq!(row.coeff_text, vec!["1", "a-1", "-2a", "a"]);
        let f = family("deg5/I-ii-2").unwrap();
        assert_eq!(f.coeff_text, vec!["-1", "(-b+1)a+5", "(3b-2)a-b-9", "(-3b+1)a+b+10", "ab-5"]);
        assert_eq!(f.params, vec!['a', 'b']);
        let f = &catalog(7).unwrap()[4];
        assert_eq!(f.coeff_text, vec!["-1", "a", "-a+2", "a^2+3", "-a^2-2", "a-2", "-a"]);
    }

    #[test]
    fn instantiate_examples() {
        let row1 = family("deg4/row1").unwrap();
        assert_eq!(row1.instantiate(&assignment(&[('a', 0)])).unwrap(), p(&[1, 0, 0, -1, 1]));
        let hol2 = family("deg6/row2").unwrap();
        assert_eq!(hol2.instantiate(&assignment(&[('q', 0)])).unwrap(), p(&[1, -3, 4, -6, 5, -3, 1]));
        let i11 = family("deg5/I-i-1").unwrap();
        assert_eq!(i11.instantiate(&assignment(&[('a', 0)])).unwrap(), p(&[1, 0, -1, 1, 1, -1]));
        assert!(matches!(row1.instantiate(&assignment(&[('b', 0)])), Err(Error::Parameters(_))));
        assert!(row1.instantiate(&assignment(&[('a', 0), ('b', 1)])).is_err());
        assert!(family("deg2/row1").unwrap().instantiate(&Assignment::new()).is_ok());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(&[1, 0, 0, -1, 1])).unwrap().unwrap();
        assert_eq!(c.family_id, "deg4/row1");
        assert_eq!(c.params, assignment(&[('a', 0)]));
        assert_eq!(classify(&p(&[1, 1, 1, 1, 1])).unwrap(), None);
        // x^5 - x^4 + 2x^3 - 2x^2 + 2x - 1: f(1) = 1, but CS_2 fails
        let f = p(&[1, -1, 2, -2, 2, -1]);
        assert!(!cs_core::is_cs(&f).unwrap());
        assert_eq!(classify(&f).unwrap(), None);
        assert!(matches!(classify(&p(&[1, 0, 0, 0, 0, 0, 1])), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn classify_resolves_overlap_lexicographically() {
        // I-ii-2 at a = 0 coincides with I-ii-1 at a = -5
        let f = family("deg5/I-ii-2").unwrap().instantiate(&assignment(&[('a', 0), ('b', 2)])).unwrap();
        let c = classify(&f).unwrap().unwrap();
        assert_eq!(c.family_id, "deg5/I-ii-1");
        assert_eq!(c.params, assignment(&[('a', -5), ('b', 12)]));
    }

    #[test]
    fn positivity_examples() {
        let row1 = family("deg4/row1").unwrap();
        assert!(!row1.positivity_holds(&assignment(&[('a', 1)])).unwrap());
        assert!(row1.positivity_holds(&assignment(&[('a', 0)])).unwrap());
        let i13 = family("deg5/I-i-3").unwrap();
        assert!(i13.positivity_holds(&assignment(&[('a', -3)])).unwrap());
        let r2 = family("deg7/row2").unwrap();
        for a in -10..=10 {
            assert!(!r2.positivity_holds(&assignment(&[('a', a)])).unwrap());
        }
    }

    #[test]
    fn every_row_is_identifiable() {
        for fam in all_families() {
            let values = parameter_grid(&fam.params, 2, 2).pop().unwrap();
            let f = fam.instantiate(&values).unwrap();
            assert_eq!(fam.match_poly(&f).unwrap(), Some(values), "{}", fam.id);
        }
    }

    #[test]
    fn degree_two_enumeration() {
        let hits = brute_force_enumerate(2, &[(-10, 10)], DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(hits, vec![p(&[1, -3, 1]), p(&[1, -1, 1])]);
    }

    #[test]
    fn enumeration_budget() {
        let err = brute_force_enumerate(4, &[(-10, 10); 3], 100).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { volume: "9261".into(), budget: "100".into() });
        assert!(brute_force_enumerate(4, &[(-1, 1); 2], 100).is_err());
        assert!(brute_force_enumerate(3, &[(1, 0), (0, 0)], 100).unwrap().is_empty());
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let hits = brute_force_enumerate(3, &[(-4, 4), (-4, 4)], DEFAULT_ENUMERATION_BUDGET).unwrap();
        let keys: Vec<Vec<BigInt>> = hits.iter().map(|f| f.coeffs()[1..3].to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // c1 + c2 = ±1 gives 2 * 9 points, minus those pushing c2 out of range
        assert_eq!(hits.len(), 16);
    }
}
