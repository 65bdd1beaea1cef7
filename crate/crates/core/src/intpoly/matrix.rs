use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    order: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(order: usize) -> Self {
        Self { order, entries: vec![BigInt::zero(); order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zero(order);
        for i in 0..order {
            m.entries[i * order + i] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for row in rows {
            assert_eq!(row.len(), order, "matrix must be square");
            entries.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Self { order, entries }
    }

    pub fn from_entries(order: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for order {order}",
                entries.len()
            )));
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.order + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.order != rhs.order {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.order, rhs.order)));
        }
        let n = self.order;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `t I - self`.
    pub fn shifted(&self, t: &BigInt) -> IntMatrix {
        let mut out = IntMatrix { order: self.order, entries: self.entries.iter().map(|v| -v).collect() };
        for i in 0..self.order {
            out.entries[i * self.order + i] += t;
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.entries.clone(), self.order)
    }

    /// Adjugate via cofactors; `self * adj = det * I`.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.order;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut adj = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.minor(&rows, &cols);
                adj.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
            }
        }
        adj
    }

    /// Determinant of the submatrix with the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        match k {
            0 => BigInt::one(),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => {
                self.get(rows[0], cols[0]) * self.get(rows[1], cols[1])
                    - self.get(rows[0], cols[1]) * self.get(rows[1], cols[0])
            }
            _ => {
                let mut sub = Vec::with_capacity(k * k);
                for &r in rows {
                    for &c in cols {
                        sub.push(self.get(r, c).clone());
                    }
                }
                bareiss_det(sub, k)
            }
        }
    }

    /// `k`-th exterior power: rows and columns indexed by the `k`-subsets of
    /// `{0..n}` in lexicographic order, entries the matching `k x k` minors.
    pub fn exterior_power(&self, k: usize) -> Result<IntMatrix> {
        let n = self.order;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { k, max: n });
        }
        let subsets = k_subsets(n, k);
        let m = subsets.len();
        let mut entries = Vec::with_capacity(m * m);
        for s in &subsets {
            for t in &subsets {
                entries.push(self.minor(s, t));
            }
        }
        Ok(IntMatrix { order: m, entries })
    }

    /// `det(xI - self)`, by evaluating at `x = 0..=N` and interpolating.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.order;
        let values: Vec<BigInt> = (0..=n).map(|t| self.shifted(&BigInt::from(t)).det()).collect();
        interpolate_consecutive(&values)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.order {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.order {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All `k`-subsets of `{0..n}` as increasing index vectors, lexicographically ordered.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn bareiss_det(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = !sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &lead * &a[k * n + j];
                a[i * n + j] = v.div_floor(&prev);
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// The unique polynomial of degree at most `N` through `(t, values[t])` for
/// `t = 0..=N`. Works with the integer-scaled Lagrange form
/// `N! P(x) = sum_i (-1)^(N-i) C(N,i) y_i prod_{j != i} (x - j)` and divides
/// by `N!` at the end; a nonzero remainder means the data is not integral.
pub(crate) fn interpolate_consecutive(values: &[BigInt]) -> IntPoly {
    let n = values.len() - 1;
    // W(x) = prod_{j=0..=n} (x - j)
    let mut w = IntPoly::one();
    for j in 0..=n {
        w = &w * &IntPoly::linear(BigInt::from(j));
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    let mut binom = BigInt::one();
    for (i, y) in values.iter().enumerate() {
        if i > 0 {
            binom = binom * BigInt::from(n + 1 - i) / BigInt::from(i);
        }
        if y.is_zero() {
            continue;
        }
        let (basis, rem) = w.div_rem_monic(&IntPoly::linear(BigInt::from(i))).expect("monic");
        debug_assert!(rem.is_zero());
        let mut scale = &binom * y;
        if (n - i) % 2 == 1 {
            scale = -scale;
        }
        for (k, c) in basis.coeffs().iter().enumerate() {
            acc[k] += &scale * c;
        }
    }
    let fact: BigInt = (1..=n).fold(BigInt::one(), |f, k| f * BigInt::from(k));
    let coeffs = acc
        .into_iter()
        .map(|c| {
            let (q, r) = c.div_rem(&fact);
            assert!(r.is_zero(), "interpolated characteristic polynomial is not integral");
            q
        })
        .collect();
    IntPoly::new(coeffs)
}
