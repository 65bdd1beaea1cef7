//! Cappell-Shaneson verdicts: the conditions `CS_k` on the companion matrix,
//! witness primes for failed conditions, and the regularity criteria via
//! signed reciprocals and exterior squares over `F_p`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{reduce_mod_p, FpPoly};
use crate::intpoly::{is_positive, IntMatrix, IntPoly};
use crate::primes;

/// Version tag carried by every serialized report.
pub const REPORT_VERSION: u32 = 1;

/// `det(I - ∧^k A)` for the companion matrix `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsConditionResult {
    pub k: usize,
    #[serde(with = "crate::decimal")]
    pub det_value: BigInt,
    pub holds: bool,
}

/// Why a failed condition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A prime dividing the determinant; `f mod p` is not `k`-regular.
    Prime {
        #[serde(with = "crate::decimal")]
        value: BigInt,
    },
    /// The determinant is 0, so `f` is not `k`-regular over `Q`.
    RationalObstruction,
    /// No prime factor below the trial-division bound.
    CompositeWitness {
        #[serde(with = "crate::decimal")]
        value: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub k: usize,
    #[serde(flatten)]
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsReport {
    pub version: u32,
    #[serde(with = "crate::decimal::poly")]
    pub input: IntPoly,
    pub degree: usize,
    pub doubly_monic: bool,
    pub conditions: Vec<CsConditionResult>,
    pub is_cs: bool,
    pub is_positive: bool,
    pub witnesses: Option<Vec<WitnessEntry>>,
}

impl CsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub witnesses: bool,
    pub witness_bound: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { witnesses: true, witness_bound: primes::TRIAL_DIVISION_BOUND }
    }
}

fn check_k(f: &IntPoly, k: usize) -> Result<usize> {
    let n = f.require_monic()?;
    if k == 0 || k > n / 2 {
        return Err(Error::IndexOutOfRange { k, max: n / 2 });
    }
    Ok(n)
}

fn i_minus_wedge_det(companion: &IntMatrix, k: usize) -> Result<BigInt> {
    let wedge = companion.exterior_power(k)?;
    let n = wedge.order();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) - wedge.get(i, j);
            m.set(i, j, v);
        }
    }
    Ok(m.det())
}

/// `det(I - ∧^k A)` for the companion matrix of a monic `f`, `1 <= k <= n/2`.
pub fn det_i_minus_wedge(f: &IntPoly, k: usize) -> Result<BigInt> {
    check_k(f, k)?;
    i_minus_wedge_det(&f.companion()?, k)
}

pub fn cs_condition(f: &IntPoly, k: usize) -> Result<CsConditionResult> {
    let det_value = det_i_minus_wedge(f, k)?;
    let holds = det_value.abs().is_one();
    Ok(CsConditionResult { k, det_value, holds })
}

fn witness_for(det: &BigInt, bound: u64) -> Witness {
    if det.is_zero() {
        Witness::RationalObstruction
    } else {
        match primes::smallest_prime_factor(det, bound) {
            Some(p) => Witness::Prime { value: BigInt::from(p) },
            None => Witness::CompositeWitness { value: det.abs() },
        }
    }
}

fn require_cs_input(f: &IntPoly) -> Result<usize> {
    let n = f.require_monic()?;
    if n < 2 {
        return Err(Error::DegreeOutOfRange { degree: n, min: 2, max: usize::MAX });
    }
    f.require_doubly_monic()
}

pub fn verify(f: &IntPoly) -> Result<CsReport> {
    verify_with(f, &VerifyOptions::default())
}

/// Full report. Rejects inputs that are not doubly monic of degree at least 2.
pub fn verify_with(f: &IntPoly, opts: &VerifyOptions) -> Result<CsReport> {
    let n = require_cs_input(f)?;
    let companion = f.companion()?;
    let conditions = (1..=n / 2)
        .map(|k| {
            let det_value = i_minus_wedge_det(&companion, k)?;
            let holds = det_value.abs().is_one();
            Ok(CsConditionResult { k, det_value, holds })
        })
        .collect::<Result<Vec<_>>>()?;
    let is_cs = conditions.iter().all(|c| c.holds);
    let witnesses = (opts.witnesses && !is_cs).then(|| {
        conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| WitnessEntry { k: c.k, witness: witness_for(&c.det_value, opts.witness_bound) })
            .collect()
    });
    Ok(CsReport {
        version: REPORT_VERSION,
        input: f.clone(),
        degree: n,
        doubly_monic: true,
        conditions,
        is_cs,
        is_positive: is_positive(f)?,
        witnesses,
    })
}

/// Verdict only, stopping at the first failed condition.
pub fn is_cs(f: &IntPoly) -> Result<bool> {
    let n = require_cs_input(f)?;
    if !f.eval(&BigInt::one()).abs().is_one() {
        return Ok(false);
    }
    let companion = f.companion()?;
    for k in 2..=n / 2 {
        if !i_minus_wedge_det(&companion, k)?.abs().is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a 1-regular doubly monic `f` of degree above 3: 2-regular over `F_p`
/// iff `f` and `f*` share no quadratic factor over the algebraic closure,
/// i.e. `deg gcd(f, f*) < 2`.
pub fn is_2_regular_via_reciprocal(f: &FpPoly) -> Result<bool> {
    let n = f.require_doubly_monic()?;
    if n <= 3 {
        return Err(Error::Precondition(format!("degree {n} is not above 3")));
    }
    if f.eval(1) == 0 {
        return Err(Error::Precondition(format!("{f} vanishes at 1 over F_{}", f.p())));
    }
    let g = f.gcd(&f.signed_reciprocal()?);
    Ok(g.degree().unwrap_or(0) < 2)
}

/// Exterior square of `f` over `F_p`, through an integer lift.
pub fn exterior_square_mod_p(f: &FpPoly) -> Result<FpPoly> {
    reduce_mod_p(&f.lift().exterior_power(2)?, f.p())
}

/// For separable doubly monic `f` of degree at least 6: degree above 6 is
/// 3-regular iff `gcd(f^∧2, f*) = 1`; degree 6 iff `f*` does not divide `f^∧2`.
///
/// Only `true` is conclusive. A common root `α_i α_j = α_k^{-1}` may have
/// `k ∈ {i, j}`, so `false` can also come from a relation `α_i² α_j = 1`
/// while every product of three distinct roots differs from 1.
pub fn is_3_regular_via_exterior(f: &FpPoly) -> Result<bool> {
    let n = f.require_doubly_monic()?;
    if n < 6 {
        return Err(Error::Precondition(format!("degree {n} is below 6")));
    }
    let g = f.gcd(&f.derivative());
    if g.degree() != Some(0) {
        return Err(Error::Inseparable(g.to_string()));
    }
    let wedge = exterior_square_mod_p(f)?;
    let star = f.signed_reciprocal()?;
    if n == 6 {
        Ok(!wedge.rem(&star)?.is_zero())
    } else {
        Ok(wedge.gcd(&star).degree() == Some(0))
    }
}
