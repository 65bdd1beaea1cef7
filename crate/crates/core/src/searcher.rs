//! Exhaustive coefficient-box search. Candidates are generated with
//! `f(1) = ±1` built in, run through the mod-p root-product filter, and the
//! survivors are settled by the exact determinant check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cs_core::{self, VerifyOptions, WitnessEntry};
use crate::error::{Error, Result};
use crate::finite_field::{det_i_minus_wedge_mod_p, k_regularity_violation, reduce_mod_p, regularity_violation};
use crate::intpoly::IntPoly;
use crate::primes::{first_primes, is_prime};

pub const DEFAULT_PRIME_COUNT: usize = 25;
pub const DEFAULT_SEARCH_BUDGET: u128 = 100_000_000;
/// Filtered candidates re-checked exactly, one in this many, unless auditing everything.
pub const AUDIT_STRIDE: u64 = 10_000;

const CHECKPOINT_HEADER: &str = "cspoly-search-checkpoint v1";

/// A mod-p proof that `f` is not CS: `k` roots of `f mod p` (indices into the
/// root list in `F_{p^m}`) multiply to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disproof {
    pub p: u64,
    pub k: usize,
    pub indices: Vec<usize>,
    pub field_degree: usize,
}

/// Tries each prime in order. `None` means the primes did not disprove `f`,
/// not that `f` is CS.
///
/// A root product of length `k` equals 1 in `F_{p^m}` exactly when
/// `det(I - ∧^k A) = 0` in `F_p`, so the determinant picks the prime and `k`
/// and the roots are only extracted for that pair.
pub fn modp_disproof(f: &IntPoly, primes: &[u64]) -> Result<Option<Disproof>> {
    let Some((p, k)) = modp_obstruction(f, primes)? else { return Ok(None) };
    let v = k_regularity_violation(&reduce_mod_p(f, p)?, k)?
        .expect("a vanishing determinant has a root product equal to 1");
    Ok(Some(Disproof { p, k, indices: v.indices, field_degree: v.field_degree }))
}

/// The prime and `k` that [`modp_disproof`] would report, without extracting roots.
pub fn modp_obstruction(f: &IntPoly, primes: &[u64]) -> Result<Option<(u64, usize)>> {
    let n = f.require_doubly_monic()?;
    if n < 4 {
        return Err(Error::DegreeOutOfRange { degree: n, min: 4, max: usize::MAX });
    }
    for &p in primes {
        let fp = reduce_mod_p(f, p)?;
        for k in 1..=n / 2 {
            if det_i_minus_wedge_mod_p(&fp, k)? == 0 {
                return Ok(Some((p, k)));
            }
        }
    }
    Ok(None)
}

/// Steps 1-3 literally: factor, split in `F_{p^m}`, and test every root
/// product, prime by prime.
pub fn modp_disproof_by_roots(f: &IntPoly, primes: &[u64]) -> Result<Option<Disproof>> {
    let n = f.require_doubly_monic()?;
    if n < 4 {
        return Err(Error::DegreeOutOfRange { degree: n, min: 4, max: usize::MAX });
    }
    for &p in primes {
        if let Some(v) = regularity_violation(&reduce_mod_p(f, p)?)? {
            return Ok(Some(Disproof { p, k: v.k, indices: v.indices, field_degree: v.field_degree }));
        }
    }
    Ok(None)
}

/// `Σ a_i c_i = rhs` over the searched coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: BTreeMap<usize, i64>,
    pub rhs: i64,
}

impl FromStr for LinearConstraint {
    type Err = Error;

    /// Parses forms like `c1+c6=0` or `2c1 - c3 = -4`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("constraint {text:?}: {why}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rhs) = compact.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let rhs: i64 = rhs.parse().map_err(|_| bad("right-hand side must be an integer"))?;
        let mut coeffs = BTreeMap::new();
        let mut rest = lhs;
        if rest.is_empty() {
            return Err(bad("empty left-hand side"));
        }
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == lhs.len() => (1, rest),
                _ => return Err(bad("expected '+' or '-'")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            let c_at = term.find('c').ok_or_else(|| bad("terms look like 3c2"))?;
            let factor: i64 = match &term[..c_at] {
                "" => 1,
                t => t.trim_end_matches('*').parse().map_err(|_| bad("bad coefficient"))?,
            };
            let index: usize = term[c_at + 1..].parse().map_err(|_| bad("bad coefficient index"))?;
            *coeffs.entry(index).or_insert(0) += sign * factor;
            rest = &body[end..];
        }
        coeffs.retain(|_, v| *v != 0);
        if coeffs.is_empty() {
            return Err(bad("no variables"));
        }
        Ok(Self { coeffs, rhs })
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, a)) in self.coeffs.iter().enumerate() {
            match (*a, n) {
                (1, 0) => write!(f, "c{i}")?,
                (1, _) => write!(f, "+c{i}")?,
                (-1, _) => write!(f, "-c{i}")?,
                (a, 0) => write!(f, "{a}c{i}")?,
                (a, _) if a > 0 => write!(f, "+{a}c{i}")?,
                (a, _) => write!(f, "{a}c{i}")?,
            }
        }
        write!(f, "={}", self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub degree: usize,
    /// Bounds for `c_1 .. c_{n-1}`; `c_0 = (-1)^n`.
    pub bounds: Vec<(i64, i64)>,
    pub constraints: Vec<LinearConstraint>,
    pub primes: Vec<u64>,
    pub workers: usize,
    /// Completed slices between checkpoint fsyncs.
    pub checkpoint_interval: usize,
    pub budget: u128,
    /// Re-check every filtered candidate exactly instead of a sample.
    pub audit: bool,
}

impl SearchSpec {
    pub fn new(degree: usize, bounds: Vec<(i64, i64)>) -> Result<Self> {
        let spec = Self {
            degree,
            bounds,
            constraints: Vec::new(),
            primes: first_primes(DEFAULT_PRIME_COUNT),
            workers: 1,
            checkpoint_interval: 1,
            budget: DEFAULT_SEARCH_BUDGET,
            audit: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same bounds on every searched coefficient.
    pub fn cube(degree: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(degree, vec![(lo, hi); degree.saturating_sub(1)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::DegreeOutOfRange { degree: self.degree, min: 2, max: usize::MAX });
        }
        if self.bounds.len() != self.degree - 1 {
            return Err(Error::DimensionMismatch(format!(
                "degree {} needs bounds for c1..c{}, got {}",
                self.degree,
                self.degree - 1,
                self.bounds.len()
            )));
        }
        if let Some((lo, hi)) = self.bounds.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::Precondition(format!("empty interval {lo}:{hi}")));
        }
        if self.primes.is_empty() {
            return Err(Error::Precondition("the prime list is empty".into()));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotPrime(p));
        }
        for c in &self.constraints {
            if let Some(&i) = c.coeffs.keys().find(|&&i| i == 0 || i >= self.degree) {
                return Err(Error::Precondition(format!("constraint {c} uses c{i}, outside c1..c{}", self.degree - 1)));
            }
        }
        if self.workers == 0 {
            return Err(Error::Precondition("at least one worker is needed".into()));
        }
        Ok(())
    }

    pub fn constant_term(&self) -> i64 {
        if self.degree % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn box_volume(&self) -> BigInt {
        self.bounds.iter().map(|(lo, hi)| BigInt::from(hi - lo + 1)).product()
    }

    /// Number of candidates left after the linear constraints and `f(1) = ±1`,
    /// counted as the product of free-coordinate ranges.
    pub fn pruned_volume(&self) -> Result<u128> {
        let mut total = 0u128;
        for plan in self.plans()?.iter().flatten() {
            total += plan.free.iter().map(|&v| (self.bounds[v].1 - self.bounds[v].0 + 1) as u128).product::<u128>();
        }
        Ok(total)
    }

    /// Stable digest of everything that determines the result.
    pub fn fingerprint(&self) -> String {
        let text = format!(
            "degree={};bounds={};constraints={};primes={}",
            self.degree,
            self.bounds.iter().map(|(l, h)| format!("{l}:{h}")).collect::<Vec<_>>().join(","),
            self.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            self.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
        );
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// One elimination plan per sign of `f(1)`; `None` when that sign is inconsistent.
    fn plans(&self) -> Result<[Option<Plan>; 2]> {
        let width = self.degree - 1;
        let mut rows: Vec<(Vec<i64>, i64)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![0; width];
                for (&i, &a) in &c.coeffs {
                    row[i - 1] = a;
                }
                (row, c.rhs)
            })
            .collect();
        // 1 + c_1 + ... + c_{n-1} + c_0 = e
        rows.push((vec![1; width], 0));
        let last = rows.len() - 1;
        let mut out = [None, None];
        for (slot, e) in [1i64, -1].into_iter().enumerate() {
            rows[last].1 = e - 1 - self.constant_term();
            out[slot] = Plan::solve(&rows, width);
        }
        Ok(out)
    }
}

/// Reduced row echelon form: each dependent `x_v` satisfies
/// `denom * x_v = rhs - Σ coeffs[j] * x_{free[j]}`.
#[derive(Clone, Debug)]
struct Plan {
    free: Vec<usize>,
    dependent: Vec<(usize, i64, i64, Vec<i64>)>,
}

impl Plan {
    fn solve(rows: &[(Vec<i64>, i64)], width: usize) -> Option<Plan> {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mut m: Vec<Vec<BigRational>> =
            rows.iter().map(|(r, b)| r.iter().map(|&v| q(v)).chain([q(*b)]).collect()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..width {
            let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for v in m[row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..m.len() {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..=width {
                        let sub = &factor * &m[row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if m[row..].iter().any(|r| !r[width].is_zero()) {
            return None;
        }
        let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        let dependent = pivots
            .iter()
            .enumerate()
            .map(|(r, &v)| {
                let denom = free
                    .iter()
                    .map(|&f| m[r][f].denom().clone())
                    .chain([m[r][width].denom().clone()])
                    .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
                let scale = BigRational::from_integer(denom.clone());
                let int = |x: &BigRational| (x * &scale).to_integer().to_i64().expect("small constraint coefficients");
                (v, denom.to_i64().expect("small denominator"), int(&m[r][width]), free.iter().map(|&f| int(&m[r][f])).collect())
            })
            .collect();
        Some(Plan { free, dependent })
    }
}

/// A slice of the searched box, with bounds for `c_1 .. c_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBox {
    pub bounds: Vec<(i64, i64)>,
}

impl SubBox {
    pub fn is_empty(&self) -> bool {
        self.bounds.iter().any(|(lo, hi)| lo > hi)
    }

    pub fn volume(&self) -> u128 {
        if self.is_empty() {
            return 0;
        }
        self.bounds.iter().map(|(lo, hi)| (hi - lo + 1) as u128).product()
    }

    pub fn contains(&self, c: &[i64]) -> bool {
        c.iter().zip(&self.bounds).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Disjoint cover of the box by contiguous slices of the highest coefficient.
/// Earlier slices take the remainder; surplus slices are empty.
pub fn partition(spec: &SearchSpec, worker_count: usize) -> Result<Vec<SubBox>> {
    spec.validate()?;
    if worker_count == 0 {
        return Err(Error::Precondition("at least one worker is needed".into()));
    }
    let top = spec.bounds.len() - 1;
    let (lo, hi) = spec.bounds[top];
    let side = (hi - lo + 1) as usize;
    let (base, extra) = (side / worker_count, side % worker_count);
    let mut start = lo;
    Ok((0..worker_count)
        .map(|w| {
            let len = (base + usize::from(w < extra)) as i64;
            let mut bounds = spec.bounds.clone();
            bounds[top] = (start, start + len - 1);
            start += len;
            SubBox { bounds }
        })
        .collect())
}

/// Filter survivor that failed the exact check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactFailure {
    #[serde(with = "crate::decimal::poly")]
    pub poly: IntPoly,
    pub witnesses: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCount {
    pub p: u64,
    pub disproved: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u128,
    pub candidates_per_second: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub degree: usize,
    pub bounds: Vec<(i64, i64)>,
    pub constraints: Vec<String>,
    pub primes: Vec<u64>,
    pub box_volume: String,
    /// Candidates generated after the constraints and `f(1) = ±1`.
    pub scanned: u64,
    pub disproved: Vec<PrimeCount>,
    pub filter_passed: u64,
    #[serde(with = "crate::decimal::poly_list")]
    pub survivors: Vec<IntPoly>,
    pub exact_failures: Vec<ExactFailure>,
    /// Share of non-CS candidates removed by the mod-p filter.
    pub filter_effectiveness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Survivors, one per line, leading coefficient first.
    pub fn survivors_csv(&self) -> String {
        let mut out = (0..=self.degree).rev().map(|i| format!("c{i}")).collect::<Vec<_>>().join(",");
        out.push('\n');
        for f in &self.survivors {
            out.push_str(&f.descending().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Partial result for one slice; also the checkpoint record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SliceResult {
    index: usize,
    scanned: u64,
    disproved: Vec<u64>,
    filter_passed: u64,
    #[serde(with = "crate::decimal::poly_list")]
    survivors: Vec<IntPoly>,
    exact_failures: Vec<ExactFailure>,
}

fn scan_slice(spec: &SearchSpec, plans: &[Option<Plan>; 2], index: usize, slice: &SubBox) -> Result<SliceResult> {
    let mut out = SliceResult {
        index,
        scanned: 0,
        disproved: vec![0; spec.primes.len()],
        filter_passed: 0,
        survivors: Vec::new(),
        exact_failures: Vec::new(),
    };
    if slice.is_empty() {
        return Ok(out);
    }
    let width = spec.degree - 1;
    let mut candidates = Vec::new();
    for plan in plans.iter().flatten() {
        let ranges: Vec<(i64, i64)> = plan.free.iter().map(|&v| slice.bounds[v]).collect();
        let mut free_vals: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut c = vec![0i64; width];
        'odometer: loop {
            for (&v, &x) in plan.free.iter().zip(&free_vals) {
                c[v] = x;
            }
            let mut ok = true;
            for (v, denom, rhs, coeffs) in &plan.dependent {
                let num = *rhs as i128 - coeffs.iter().zip(&free_vals).map(|(&a, &x)| a as i128 * x as i128).sum::<i128>();
                if num % *denom as i128 != 0 {
                    ok = false;
                    break;
                }
                let val = num / *denom as i128;
                let (lo, hi) = slice.bounds[*v];
                if val < lo as i128 || val > hi as i128 {
                    ok = false;
                    break;
                }
                c[*v] = val as i64;
            }
            if ok {
                candidates.push(c.clone());
            }
            let mut pos = free_vals.len();
            loop {
                if pos == 0 {
                    break 'odometer;
                }
                pos -= 1;
                if free_vals[pos] < ranges[pos].1 {
                    free_vals[pos] += 1;
                    break;
                }
                free_vals[pos] = ranges[pos].0;
            }
        }
    }
    candidates.sort();
    let opts = VerifyOptions::default();
    let mut filtered = 0u64;
    for c in candidates {
        out.scanned += 1;
        let coeffs: Vec<i64> = [spec.constant_term()].into_iter().chain(c).chain([1]).collect();
        let f = IntPoly::from_i64s(&coeffs);
        let obstruction = if spec.degree >= 4 { modp_obstruction(&f, &spec.primes)? } else { None };
        if let Some((p, _)) = obstruction {
            let slot = spec.primes.iter().position(|&q| q == p).expect("prime from the list");
            out.disproved[slot] += 1;
            if spec.audit || filtered % AUDIT_STRIDE == 0 {
                assert!(!cs_core::is_cs(&f)?, "mod-{p} disproof of a CS polynomial {f}");
            }
            filtered += 1;
            continue;
        }
        out.filter_passed += 1;
        let report = cs_core::verify_with(&f, &opts)?;
        if report.is_cs {
            out.survivors.push(f);
        } else {
            out.exact_failures.push(ExactFailure { poly: f, witnesses: report.witnesses.unwrap_or_default() });
        }
    }
    Ok(out)
}

fn slices_for(spec: &SearchSpec) -> Result<Vec<SubBox>> {
    let (lo, hi) = spec.bounds[spec.bounds.len() - 1];
    partition(spec, (hi - lo + 1) as usize)
}

fn check_budget(spec: &SearchSpec) -> Result<()> {
    let volume = spec.pruned_volume()?;
    if volume > spec.budget {
        return Err(Error::BudgetExceeded { volume: volume.to_string(), budget: spec.budget.to_string() });
    }
    Ok(())
}

fn merge(spec: &SearchSpec, mut parts: Vec<SliceResult>, started: Instant) -> SearchReport {
    parts.sort_by_key(|p| p.index);
    let mut disproved = vec![0u64; spec.primes.len()];
    let (mut scanned, mut passed) = (0, 0);
    let mut survivors = BTreeSet::new();
    let mut failures = Vec::new();
    for p in parts {
        scanned += p.scanned;
        passed += p.filter_passed;
        for (d, x) in disproved.iter_mut().zip(&p.disproved) {
            *d += x;
        }
        survivors.extend(p.survivors.into_iter().map(|f| f.coeffs().to_vec()));
        failures.extend(p.exact_failures);
    }
    failures.sort_by(|a, b| a.poly.coeffs().cmp(b.poly.coeffs()));
    let killed: u64 = disproved.iter().sum();
    let non_cs = killed + failures.len() as u64;
    let elapsed = started.elapsed();
    SearchReport {
        degree: spec.degree,
        bounds: spec.bounds.clone(),
        constraints: spec.constraints.iter().map(|c| c.to_string()).collect(),
        primes: spec.primes.clone(),
        box_volume: spec.box_volume().to_string(),
        scanned,
        disproved: spec.primes.iter().zip(disproved).map(|(&p, disproved)| PrimeCount { p, disproved }).collect(),
        filter_passed: passed,
        survivors: survivors.into_iter().map(IntPoly::new).collect(),
        exact_failures: failures,
        filter_effectiveness: (non_cs > 0).then(|| killed as f64 / non_cs as f64),
        timing: Some(Timing {
            elapsed_ms: elapsed.as_millis(),
            candidates_per_second: scanned as f64 / elapsed.as_secs_f64().max(1e-9),
        }),
    }
}

fn run(spec: &SearchSpec, done: Vec<SliceResult>, sink: Option<&Mutex<CheckpointWriter>>) -> Result<SearchReport> {
    spec.validate()?;
    check_budget(spec)?;
    let started = Instant::now();
    let plans = spec.plans()?;
    let slices = slices_for(spec)?;
    let finished: BTreeSet<usize> = done.iter().map(|d| d.index).collect();
    if let Some(&bad) = finished.iter().find(|&&i| i >= slices.len()) {
        return Err(Error::Checkpoint(format!("slice index {bad} is outside 0..{}", slices.len())));
    }
    let todo: Vec<(usize, &SubBox)> = slices.iter().enumerate().filter(|(i, _)| !finished.contains(i)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let fresh: Vec<SliceResult> = pool.install(|| {
        todo.par_iter()
            .map(|&(i, slice)| {
                let part = scan_slice(spec, &plans, i, slice)?;
                if let Some(w) = sink {
                    w.lock().expect("checkpoint writer").record(&part)?;
                }
                Ok(part)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    if let Some(w) = sink {
        w.lock().expect("checkpoint writer").sync()?;
    }
    Ok(merge(spec, done.into_iter().chain(fresh).collect(), started))
}

pub fn box_search(spec: &SearchSpec) -> Result<SearchReport> {
    run(spec, Vec::new(), None)
}

/// Like [`box_search`], recording each finished slice in `path`. With `resume`,
/// slices already listed in `path` are taken from it instead of rescanned.
pub fn box_search_resumable(spec: &SearchSpec, path: &Path, resume: bool) -> Result<SearchReport> {
    spec.validate()?;
    let done = if resume && path.exists() { read_checkpoint(spec, path)? } else { Vec::new() };
    let writer = CheckpointWriter::open(spec, path, resume && path.exists())?;
    run(spec, done, Some(&Mutex::new(writer)))
}

struct CheckpointWriter {
    file: File,
    interval: usize,
    pending: usize,
}

impl CheckpointWriter {
    fn open(spec: &SearchSpec, path: &Path, append: bool) -> Result<Self> {
        let mut file = if append {
            OpenOptions::new().append(true).open(path)?
        } else {
            let mut f = File::create(path)?;
            writeln!(f, "{CHECKPOINT_HEADER}")?;
            writeln!(f, "spec {}", spec.fingerprint())?;
            f.sync_all()?;
            f
        };
        file.flush()?;
        Ok(Self { file, interval: spec.checkpoint_interval.max(1), pending: 0 })
    }

    fn record(&mut self, part: &SliceResult) -> Result<()> {
        let line = serde_json::to_string(part).expect("slice record serializes");
        writeln!(self.file, "slice {line}")?;
        self.file.flush()?;
        self.pending += 1;
        if self.pending >= self.interval {
            self.sync()?;
        }
        Ok(())
    }

    fn sync(&mut self) -> Result<()> {
        self.file.sync_all()?;
        self.pending = 0;
        Ok(())
    }
}

fn read_checkpoint(spec: &SearchSpec, path: &Path) -> Result<Vec<SliceResult>> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let mut next = |what: &str| -> Result<String> {
        lines.next().transpose()?.ok_or_else(|| Error::Checkpoint(format!("missing {what}")))
    };
    if next("header")? != CHECKPOINT_HEADER {
        return Err(Error::Checkpoint("unrecognized header".into()));
    }
    let fingerprint = next("spec line")?;
    if fingerprint.strip_prefix("spec ") != Some(spec.fingerprint().as_str()) {
        return Err(Error::Checkpoint("written for a different search".into()));
    }
    let mut out: BTreeMap<usize, SliceResult> = BTreeMap::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let body = line
            .strip_prefix("slice ")
            .ok_or_else(|| Error::Checkpoint(format!("line {}: expected a slice record", n + 3)))?;
        let part: SliceResult =
            serde_json::from_str(body).map_err(|e| Error::Checkpoint(format!("line {}: {e}", n + 3)))?;
        if part.disproved.len() != spec.primes.len() {
            return Err(Error::Checkpoint(format!("line {}: wrong number of prime counts", n + 3)));
        }
        if out.insert(part.index, part).is_some() {
            return Err(Error::Checkpoint(format!("line {}: slice recorded twice", n + 3)));
        }
    }
    Ok(out.into_values().collect())
}

/// Parses `lo:hi` pairs separated by commas.
pub fn parse_bounds(text: &str) -> Result<Vec<(i64, i64)>> {
    text.split(',')
        .map(|part| {
            let (lo, hi) = part.trim().split_once(':').ok_or_else(|| Error::Parse(format!("bound {part:?} is not lo:hi")))?;
            let lo: i64 = lo.trim().parse().map_err(|_| Error::Parse(format!("bad lower bound in {part:?}")))?;
            let hi: i64 = hi.trim().parse().map_err(|_| Error::Parse(format!("bad upper bound in {part:?}")))?;
            Ok((lo, hi))
        })
        .collect()
}

/// Parses a comma-separated constraint list such as `c1+c6=0,c2+c5=0`.
pub fn parse_constraints(text: &str) -> Result<Vec<LinearConstraint>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}
