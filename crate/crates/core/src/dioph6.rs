//! Degree-6 Cappell-Shaneson polynomials via the Diophantine reduction.
//!
//! With `p = c4 - c2`, `q = c5 - c1` and
//! `w = q(p-2q)c1 - q^2 c2 - p^2 + 2pq - q^3 - q^2`, a doubly monic sextic is CS
//! exactly when, for signs `e1, e2, e3`,
//!
//! ```text
//! (A')  c3 = -c1 - c2 - c4 - c5 - 2 + e1
//! (B')  (p + 2q) w = e2 - e1 q^3
//! (C')  e1 (c1^2 + (q-4) c1 - 4 c2 - 2p - 2q) - w + 1 = e3
//! ```
//!
//! For fixed `q` the solver walks the divisors `d = p + 2q` of `e2 - e1 q^3`.
//! When that number vanishes (`q = ±1`) or `q = 0`, whole one-parameter
//! families appear; they are returned as rows of polynomials in `a`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cs_core;
use crate::error::{Error, Result};
use crate::families::{assignment, ParamPoly, Positivity};
use crate::intpoly::{is_positive, IntPoly};
use crate::primes::{signed_divisors, TRIAL_DIVISION_BOUND};

const TRANSCRIPTION: &str = include_str!("../data/degree6_table.csv");

/// Default bound on `|q|`.
pub const DEFAULT_Q_BOUND: u64 = 64;

/// Parametric positivity is read off from `a` in `[-POSITIVITY_SAMPLE, POSITIVITY_SAMPLE]`.
pub const POSITIVITY_SAMPLE: i64 = 40;

/// Right-hand sides of (A), (B), (C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignTriple {
    pub e1: i32,
    pub e2: i32,
    pub e3: i32,
}

impl SignTriple {
    pub fn new(e1: i32, e2: i32, e3: i32) -> Result<Self> {
        if [e1, e2, e3].iter().all(|e| *e == 1 || *e == -1) {
            Ok(Self { e1, e2, e3 })
        } else {
            Err(Error::Precondition(format!("signs must be ±1, got ({e1}, {e2}, {e3})")))
        }
    }
}

/// One row of the solution set: `c0..c5`, constant or polynomial in `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree6Solution {
    pub q: i64,
    pub entries: Vec<ParamPoly>,
    pub signs: SignTriple,
    /// `p + 2q`; polynomial in `a` on the `w = 0` branch.
    pub divisor: ParamPoly,
}

impl Degree6Solution {
    pub fn is_parametric(&self) -> bool {
        self.entries.iter().any(|e| e.constant_value().is_none())
    }

    /// The polynomial of a finite row.
    pub fn polynomial(&self) -> Option<IntPoly> {
        let mut c: Vec<BigInt> = self.entries.iter().map(ParamPoly::constant_value).collect::<Option<_>>()?;
        c.push(BigInt::one());
        Some(IntPoly::new(c))
    }

    /// The member at parameter value `a`; finite rows ignore `a`.
    pub fn instantiate(&self, a: i64) -> IntPoly {
        let at = assignment(&[('a', a)]);
        let mut c: Vec<BigInt> = self.entries.iter().map(|e| e.eval(&at).expect("rows use only a")).collect();
        c.push(BigInt::one());
        IntPoly::new(c)
    }

    fn sort_key(&self) -> (bool, Vec<BigInt>) {
        let key = [-1, 0, 1].iter().flat_map(|&a| self.instantiate(a).coeffs()[..6].to_vec()).collect();
        (!self.is_parametric(), key)
    }

    /// Entry texts in the compact form used by the table.
    pub fn entry_texts(&self) -> Vec<String> {
        self.entries.iter().map(ParamPoly::compact).collect()
    }
}

impl Serialize for Degree6Solution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut descending = self.entry_texts();
        descending.push("1".into());
        descending.reverse();
        let mut st = s.serialize_struct("Degree6Solution", 5)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("polynomial", &descending)?;
        st.serialize_field("parametric", &self.is_parametric())?;
        st.serialize_field("signs", &self.signs)?;
        st.serialize_field("divisor", &self.divisor.compact())?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub q_bound: u64,
    /// Keep only divisors with `d^3 ≡ -e2 (mod q)`, a consequence of (B') mod `q`.
    pub prune_mod_q: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { q_bound: DEFAULT_Q_BOUND, prune_mod_q: true }
    }
}

fn pc(v: impl Into<BigInt>) -> ParamPoly {
    ParamPoly::constant(v)
}

fn var_a() -> ParamPoly {
    ParamPoly::var('a').expect("a is a parameter")
}

/// `w` from its definition.
fn w_of(q: i64, p: &ParamPoly, c1: &ParamPoly, c2: &ParamPoly) -> ParamPoly {
    let qp = pc(q);
    let two_q = pc(2 * q);
    let t1 = &(&qp * &(p - &two_q)) * c1;
    let t2 = &pc(q * q) * c2;
    let t3 = p * p;
    let t4 = &pc(2 * q) * p;
    &(&(&(&t1 - &t2) - &t3) + &t4) - &pc(q * q * q + q * q)
}

/// Checks (A'), (B'), (C') as polynomial identities.
fn identities_hold(q: i64, c: &[ParamPoly], s: SignTriple) -> bool {
    let (c1, c2, c3, c4, c5) = (&c[1], &c[2], &c[3], &c[4], &c[5]);
    if c[0] != pc(1) || (c5 - c1) != pc(q) {
        return false;
    }
    let p = c4 - c2;
    let w = w_of(q, &p, c1, c2);
    let a_prime = &(&(&(&(-c1) - c2) - c4) - c5) + &pc(s.e1 - 2);
    let b_lhs = &(&p + &pc(2 * q)) * &w;
    let b_rhs = pc(BigInt::from(s.e2) - BigInt::from(s.e1) * BigInt::from(q).pow(3));
    let inner = &(&(&(c1 * c1) + &(&pc(q - 4) * c1)) - &(&pc(4) * c2)) - &(&(&pc(2) * &p) + &pc(2 * q));
    let c_lhs = &(&(&pc(s.e1) * &inner) - &w) + &pc(1);
    *c3 == a_prime && b_lhs == b_rhs && c_lhs == pc(s.e3)
}

fn assemble(q: i64, p: &ParamPoly, c1: ParamPoly, c2: ParamPoly, signs: SignTriple) -> Degree6Solution {
    let c4 = &c2 + p;
    let c5 = &c1 + &pc(q);
    let c3 = &(&(&pc(-2) * &c1) - &(&pc(2) * &c2)) - &(p + &pc(q + 2 - signs.e1 as i64));
    let entries = vec![pc(1), c1, c2, c3, c4, c5];
    assert!(identities_hold(q, &entries, signs), "solver produced a row violating (A')(B')(C')");
    Degree6Solution { q, divisor: p + &pc(2 * q), entries, signs }
}

/// Integer roots of `A x^2 + B x + C`, ascending.
fn integer_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let disc: BigInt = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Vec::new();
    }
    let two_a = BigInt::from(2) * a;
    let mut out: Vec<BigInt> = [-b + &s, -b - &s]
        .into_iter()
        .filter(|num| (num % &two_a).is_zero())
        .map(|num| num / &two_a)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `q ≠ 0` and `e2 - e1 q^3 ≠ 0`: finitely many tuples per divisor.
fn finite_regime(q: i64, e1: i32, e2: i32, r: &BigInt, opts: &SolverOptions, out: &mut Vec<Degree6Solution>) -> Result<()> {
    let divisors = signed_divisors(r, TRIAL_DIVISION_BOUND)
        .ok_or_else(|| Error::Undecided(format!("cannot factor {r} within the trial-division bound")))?;
    let (qb, e1b) = (BigInt::from(q), BigInt::from(e1));
    let q2 = &qb * &qb;
    for d in divisors {
        if opts.prune_mod_q && !(d.pow(3) + BigInt::from(e2)).mod_floor(&qb.abs()).is_zero() {
            continue;
        }
        let p = &d - BigInt::from(2 * q);
        let w = r / &d;
        let k = &p * &p - BigInt::from(2) * &p * &qb + &q2 * &qb + &q2 + &w;
        let lin = &qb * (&p - BigInt::from(2 * q));
        let a = &e1b * &q2;
        let b = &e1b * &q2 * (&qb - 4) - BigInt::from(4) * &e1b * &lin;
        for e3 in [1, -1] {
            let c = BigInt::from(4) * &e1b * &k - BigInt::from(2) * &e1b * &q2 * (&p + &qb)
                + &q2 * (BigInt::one() - &w - BigInt::from(e3));
            for c1 in integer_roots(&a, &b, &c) {
                let num = &lin * &c1 - &k;
                if !(&num % &q2).is_zero() {
                    continue;
                }
                let c2 = num / &q2;
                let signs = SignTriple { e1, e2, e3 };
                out.push(assemble(q, &pc(p.clone()), pc(c1), pc(c2), signs));
            }
        }
    }
    Ok(())
}

/// `c2 = -N(c1) / D`, the regime where (B') leaves `c1` free: `q = 0`, or
/// `q = ±1` with `p = -2q`.
fn c2_linear_regime(q: i64, p: i64, e1: i32, e2: i32, out: &mut Vec<Degree6Solution>) {
    let e1i = e1 as i64;
    let den = q * q - 4 * e1i;
    let m = den.unsigned_abs() as i64;
    for e3 in [1, -1] {
        let numerator = |c1: &ParamPoly| -> ParamPoly {
            let lin = e1i * (q - 4) - q * (p - 2 * q);
            let cst = -2 * e1i * (p + q) + p * p - 2 * p * q + q * q * q + q * q + 1 - e3 as i64;
            &(&(&pc(e1i) * &(c1 * c1)) + &(&pc(lin) * c1)) + &pc(cst)
        };
        let residues: Vec<bool> = (0..m)
            .map(|r| numerator(&pc(r)).constant_value().unwrap().mod_floor(&BigInt::from(m)).is_zero())
            .collect();
        if !residues.iter().any(|&x| x) {
            continue;
        }
        let signs = SignTriple { e1, e2, e3 };
        for period in (1..=m).filter(|k| m % k == 0) {
            if (0..m).any(|r| residues[r as usize] != residues[((r + period) % m) as usize]) {
                continue;
            }
            // centred representatives in (-period/2, period/2]
            let reps: Vec<i64> = (-(period - 1) / 2..=period / 2).filter(|r| residues[r.rem_euclid(m) as usize]).collect();
            let rows: Option<Vec<Degree6Solution>> = reps
                .iter()
                .map(|&r| {
                    let c1 = &(&pc(period) * &var_a()) + &pc(r);
                    let c2 = (-&numerator(&c1)).div_exact(&BigInt::from(den))?;
                    Some(assemble(q, &pc(p), c1, c2, signs))
                })
                .collect();
            if let Some(rows) = rows {
                out.extend(rows);
                break;
            }
        }
    }
}

/// `q = ±1`, `w = 0`: `c1 = 2qp + s` with `s` a root of
/// `s^2 + (q+4)s + 2q + 4 = e1(e3 - 1)`, reparametrized by `p = q(a + t)`.
fn w_zero_regime(q: i64, e1: i32, e2: i32, out: &mut Vec<Degree6Solution>) {
    for e3 in [1, -1] {
        let rhs = e1 as i64 * (e3 as i64 - 1);
        let roots = integer_roots(&BigInt::one(), &BigInt::from(q + 4), &BigInt::from(2 * q + 4 - rhs));
        for s in roots {
            let s = s.to_i64().expect("small root");
            let t = if s % 2 == 0 { -s / 2 } else { (-1 - s) / 2 };
            let p = &pc(q) * &(&var_a() + &pc(t));
            let c1 = &(&pc(2) * &var_a()) + &pc(2 * t + s);
            // w = 0 solved for c2, with q^2 = 1
            let c2 = &(&(&(&pc(q) * &(&p - &pc(2 * q))) * &c1) - &(&p * &p)) + &(&(&pc(2 * q) * &p) - &pc(q * q * q + 1));
            out.push(assemble(q, &p, c1, c2, SignTriple { e1, e2, e3 }));
        }
    }
}

fn budget_error(q: i64, bound: u64) -> Error {
    let need: BigInt = BigInt::from(q).abs().pow(3) + 1;
    let cap: BigInt = BigInt::from(bound).pow(3) + 1;
    Error::BudgetExceeded { volume: need.to_string(), budget: cap.to_string() }
}

pub fn solve_q(q: i64) -> Result<Vec<Degree6Solution>> {
    solve_q_with(q, &SolverOptions::default())
}

/// All rows with `c5 - c1 = q`, deduplicated and in canonical order:
/// parametric rows first, then by the values at `a = -1, 0, 1`.
pub fn solve_q_with(q: i64, opts: &SolverOptions) -> Result<Vec<Degree6Solution>> {
    if q.unsigned_abs() > opts.q_bound {
        return Err(budget_error(q, opts.q_bound));
    }
    let mut out = Vec::new();
    for e1 in [1, -1] {
        for e2 in [1, -1] {
            let r = BigInt::from(e2) - BigInt::from(e1) * BigInt::from(q).pow(3);
            if q == 0 {
                // (B') reads -p^3 = e2
                c2_linear_regime(0, -e2 as i64, e1, e2, &mut out);
            } else if !r.is_zero() {
                finite_regime(q, e1, e2, &r, opts, &mut out)?;
            } else {
                c2_linear_regime(q, -2 * q, e1, e2, &mut out);
                w_zero_regime(q, e1, e2, &mut out);
            }
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|s| seen.insert(s.entry_texts()));
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(out)
}

/// Divisors of `e2 - e1 q^3` called basic for `q ≥ 2`, ascending.
pub fn basic_divisors(q: i64, e1: i32, e2: i32) -> Result<Vec<BigInt>> {
    if q < 2 {
        return Err(Error::Precondition(format!("basic divisors need q >= 2, got {q}")));
    }
    SignTriple::new(e1, e2, 1)?;
    let q = BigInt::from(q);
    let base: Vec<BigInt> = if e1 == e2 {
        vec![BigInt::one(), &q - 1, &q * &q + &q + 1, q.pow(3) - 1]
    } else {
        vec![BigInt::one(), &q + 1, &q * &q - &q + 1, q.pow(3) + 1]
    };
    let mut out: Vec<BigInt> = base.iter().flat_map(|d| [d.clone(), -d]).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether `p + 2q` is a basic divisor, for a CS sextic with `q ≥ 2`.
pub fn is_basic(f: &IntPoly) -> Result<bool> {
    let n = f.require_doubly_monic()?;
    if n != 6 {
        return Err(Error::DegreeOutOfRange { degree: n, min: 6, max: 6 });
    }
    if !cs_core::is_cs(f)? {
        return Err(Error::Precondition(format!("{f} is not a Cappell-Shaneson polynomial")));
    }
    let c = |i: usize| f.coeff(i);
    let q = (c(5) - c(1)).to_i64().ok_or_else(|| Error::Precondition("q out of range".into()))?;
    if q < 2 {
        return Err(Error::Precondition(format!("basicness needs q >= 2, got {q}")));
    }
    let to_sign = |v: BigInt| v.to_i32().expect("CS determinants are ±1");
    let e1 = to_sign(cs_core::det_i_minus_wedge(f, 1)?);
    let e2 = to_sign(cs_core::det_i_minus_wedge(f, 2)?);
    let d = c(4) - c(2) + BigInt::from(2 * q);
    Ok(basic_divisors(q, e1, e2)?.contains(&d))
}

/// Positivity column of a table row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowPositivity {
    Finite(bool),
    Parametric(Positivity),
}

impl fmt::Display for RowPositivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(true) => write!(f, "Yes"),
            Self::Finite(false) => write!(f, "No"),
            Self::Parametric(Positivity::Always) => write!(f, "all"),
            Self::Parametric(Positivity::Never) => write!(f, "none"),
            Self::Parametric(p) => write!(f, "{p}"),
        }
    }
}

/// Reads a threshold condition off the sampled positivity pattern.
pub fn infer_positivity(row: &Degree6Solution) -> Result<Positivity> {
    let range: Vec<i64> = (-POSITIVITY_SAMPLE..=POSITIVITY_SAMPLE).collect();
    let flags = range.iter().map(|&a| is_positive(&row.instantiate(a))).collect::<Result<Vec<bool>>>()?;
    let switches = flags.windows(2).filter(|w| w[0] != w[1]).count();
    let first = flags[0];
    Ok(match (switches, first) {
        (0, true) => Positivity::Always,
        (0, false) => Positivity::Never,
        (1, true) => Positivity::AtMost('a', range[flags.iter().position(|f| !f).unwrap() - 1]),
        (1, false) => Positivity::AtLeast('a', range[flags.iter().position(|f| *f).unwrap()]),
        _ => {
            return Err(Error::Undecided(format!(
                "positivity of row {:?} is not a threshold in a",
                row.entry_texts()
            )))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub solution: Degree6Solution,
    pub positivity: RowPositivity,
}

impl Serialize for TableRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'r> {
            #[serde(flatten)]
            solution: &'r Degree6Solution,
            positivity: String,
        }
        Row { solution: &self.solution, positivity: self.positivity.to_string() }.serialize(s)
    }
}

pub fn table_row(solution: Degree6Solution) -> Result<TableRow> {
    let positivity = match solution.polynomial() {
        Some(f) => RowPositivity::Finite(is_positive(&f)?),
        None => RowPositivity::Parametric(infer_positivity(&solution)?),
    };
    Ok(TableRow { solution, positivity })
}

pub fn emit_table(q_lo: i64, q_hi: i64) -> Result<Vec<TableRow>> {
    emit_table_with(q_lo, q_hi, &SolverOptions::default())
}

/// Rows for `q_lo ≤ q ≤ q_hi`, grouped by `q`.
pub fn emit_table_with(q_lo: i64, q_hi: i64, opts: &SolverOptions) -> Result<Vec<TableRow>> {
    if q_lo < 0 || q_hi < q_lo {
        return Err(Error::Precondition(format!("need 0 <= q_lo <= q_hi, got {q_lo}..{q_hi}")));
    }
    if q_hi.unsigned_abs() > opts.q_bound {
        return Err(budget_error(q_hi, opts.q_bound));
    }
    let blocks = (q_lo..=q_hi)
        .into_par_iter()
        .map(|q| solve_q_with(q, opts)?.into_iter().map(table_row).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str = "q,c0,c1,c2,c3,c4,c5,positivity";

/// Rows as CSV in the column layout of the published table.
pub fn to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let mut cells = vec![row.solution.q.to_string()];
        cells.extend(row.solution.entry_texts());
        cells.push(row.positivity.to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// A row of the shipped transcription.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscribedRow {
    pub q: i64,
    pub entries: Vec<ParamPoly>,
    pub positivity: String,
}

impl TranscribedRow {
    pub fn instantiate(&self, a: i64) -> IntPoly {
        let at = assignment(&[('a', a)]);
        let mut c: Vec<BigInt> = self.entries.iter().map(|e| e.eval(&at).expect("rows use only a")).collect();
        c.push(BigInt::one());
        IntPoly::new(c)
    }

    pub fn is_parametric(&self) -> bool {
        self.entries.iter().any(|e| e.constant_value().is_none())
    }
}

/// The shipped CSV transcription of the published degree-6 table, verbatim.
pub fn transcription_csv() -> &'static str {
    TRANSCRIPTION
}

pub fn transcription() -> Result<Vec<TranscribedRow>> {
    let mut lines = TRANSCRIPTION.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse("transcription header mismatch".into()));
    }
    lines
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 8 {
                return Err(Error::Parse(format!("expected 8 cells in '{line}'")));
            }
            let q = cells[0].parse().map_err(|e| Error::Parse(format!("q in '{line}': {e}")))?;
            let entries = cells[1..7].iter().map(|t| ParamPoly::parse(t)).collect::<Result<Vec<_>>>()?;
            Ok(TranscribedRow { q, entries, positivity: cells[7].to_string() })
        })
        .collect()
}

impl PartialOrd for Degree6Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree6Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.sort_key()).cmp(&(other.q, other.sort_key()))
    }
}
