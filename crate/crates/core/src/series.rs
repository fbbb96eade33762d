//! Truncated multivariate power series and the closed-form Hilbert series.
//!
//! The multigraded Hilbert series of `A_n` is
//!
//! ```text
//! (1 + q_1/(1-q_1) + ... + q_n/(1-q_n))^(n-3) / ((1-q_1)...(1-q_n))
//! ```
//!
//! It is expanded here in two independent ways: by truncated series
//! arithmetic ([`lee_series`]) and by the coefficient formula
//! `h(a) = sum_k multinomial(N; k, N-|k|) prod_i C(a_i, k_i)`
//! ([`lee_coefficient`]).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::graded::DegreeVector;

/// Truncation region of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// All `a` with `|a| <= D`.
    Total(u32),
    /// All `a` with `a_i <= caps[i]`.
    PerCoordinate(Vec<u32>),
}

impl Bound {
    pub fn contains(&self, a: &DegreeVector) -> bool {
        match self {
            Bound::Total(d) => a.total() <= *d,
            Bound::PerCoordinate(caps) => a.0.iter().zip(caps).all(|(x, c)| x <= c),
        }
    }

    fn max_along(&self, i: usize) -> u32 {
        match self {
            Bound::Total(d) => *d,
            Bound::PerCoordinate(caps) => caps[i],
        }
    }
}

/// Power series in `n` variables truncated to a bound; coefficients outside
/// the bound are discarded eagerly, zeros are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    bound: Bound,
    coeffs: BTreeMap<DegreeVector, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(n: usize, bound: Bound) -> Self {
        if let Bound::PerCoordinate(caps) = &bound {
            assert_eq!(caps.len(), n);
        }
        TruncatedSeries { n, bound, coeffs: BTreeMap::new() }
    }

    pub fn one(n: usize, bound: Bound) -> Self {
        let mut s = Self::zero(n, bound);
        s.add_term(DegreeVector::zero(n), BigInt::one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> &Bound {
        &self.bound
    }

    /// Adds `c * q^a`; ignored outside the bound.
    pub fn add_term(&mut self, a: DegreeVector, c: BigInt) {
        assert_eq!(a.len(), self.n);
        if c.is_zero() || !self.bound.contains(&a) {
            return;
        }
        match self.coeffs.entry(a) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, a: &DegreeVector) -> BigInt {
        self.coeffs.get(a).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero coefficients sorted by (total degree, lexicographic `a`).
    pub fn iter(&self) -> impl Iterator<Item = (&DegreeVector, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut acc: BTreeMap<DegreeVector, BigInt> = BTreeMap::new();
        for (a, x) in &small.coeffs {
            for (b, y) in &large.coeffs {
                let s = DegreeVector(a.0.iter().zip(&b.0).map(|(u, v)| u + v).collect());
                if self.bound.contains(&s) {
                    *acc.entry(s).or_insert_with(BigInt::zero) += x * y;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        TruncatedSeries { n: self.n, bound: self.bound.clone(), coeffs: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n, self.bound.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `sum_{k >= start} q_i^k` truncated to the bound.
    pub fn geometric(n: usize, bound: Bound, i: usize, start: u32) -> Self {
        let mut s = Self::zero(n, bound.clone());
        for k in start..=bound.max_along(i) {
            let mut a = DegreeVector::zero(n);
            a.0[i] = k;
            s.add_term(a, BigInt::one());
        }
        s
    }

    /// Multiplication by `1 / (1 - q_i)`.
    pub fn divide_by_one_minus(&self, i: usize) -> Self {
        self.mul(&Self::geometric(self.n, self.bound.clone(), i, 0))
    }

    /// Sums of coefficients per total degree, degrees `0..=max_total`.
    pub fn diagonal(&self, max_total: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); max_total as usize + 1];
        for (a, c) in &self.coeffs {
            let t = a.total();
            if t <= max_total {
                out[t as usize] += c;
            }
        }
        out
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n, other.n, "series in different variable counts");
        assert_eq!(self.bound, other.bound, "series with different truncation bounds");
    }
}

/// `(1 + sum_{i<n} q_i/(1-q_i))^power / prod_{i<n} (1-q_i)` in `n` variables.
fn lee_type_series(n: usize, power: u32, bound: Bound) -> TruncatedSeries {
    let mut base = TruncatedSeries::one(n, bound.clone());
    for i in 0..n {
        base = base.add(&TruncatedSeries::geometric(n, bound.clone(), i, 1));
    }
    let mut s = base.pow(power);
    for i in 0..n {
        s = s.divide_by_one_minus(i);
    }
    s
}

/// Hilbert series of `A_n`, truncated.
pub fn lee_series(n: usize, bound: Bound) -> Result<TruncatedSeries> {
    if n < 3 {
        return Err(usage(format!("Hilbert series of A_n needs n >= 3, got {n}")));
    }
    Ok(lee_type_series(n, n as u32 - 3, bound))
}

/// Hilbert series of `A_{n+m}` restricted to the first `n` variables (the
/// last `m` set to zero): the series of `B_{n,m}`.
pub fn lee_series_restricted(n: usize, m: usize, bound: Bound) -> Result<TruncatedSeries> {
    if n < 2 || n + m < 3 {
        return Err(usage(format!("restricted series needs n >= 2 and n + m >= 3, got ({n},{m})")));
    }
    Ok(lee_type_series(n, (n + m - 3) as u32, bound))
}

/// `(1 + sum_{i<=n-1} q_i/(1-q_i)) * h_{A_{n-1}}` in `n - 1` variables.
pub fn curve_module_series(n: usize, bound: Bound) -> Result<TruncatedSeries> {
    if n < 4 {
        return Err(usage(format!("curve module series needs n >= 4, got {n}")));
    }
    let k = n - 1;
    let mut factor = TruncatedSeries::one(k, bound.clone());
    for i in 0..k {
        factor = factor.add(&TruncatedSeries::geometric(k, bound.clone(), i, 1));
    }
    Ok(factor.mul(&lee_series(k, bound)?))
}

fn binomial_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Coefficient of `q^a` in `(1 + sum_i q_i/(1-q_i))^power / prod_i (1-q_i)`
/// by the closed formula, independent of series multiplication.
pub fn lee_coefficient(power: u32, a: &DegreeVector) -> BigInt {
    fn rec(a: &[u32], left: u32, power: u32, weight: BigInt, denom: BigInt, out: &mut BigInt) {
        match a.split_first() {
            None => {
                let rest = factorial(left);
                *out += factorial(power) * weight / (denom * rest);
            }
            Some((&ai, tail)) => {
                for k in 0..=ai.min(left) {
                    rec(tail, left - k, power, &weight * binomial_big(ai, k), &denom * factorial(k), out);
                }
            }
        }
    }
    let mut out = BigInt::zero();
    rec(&a.0, power, power, BigInt::one(), BigInt::one(), &mut out);
    out
}

/// Total-degree Hilbert series `(1 + (n-1) t)^(n-3) / (1-t)^(2n-3)` of `A_n`
/// up to degree `max_total`.
pub fn total_hilbert(n: usize, max_total: u32) -> Result<Vec<BigInt>> {
    if n < 3 {
        return Err(usage(format!("total Hilbert series needs n >= 3, got {n}")));
    }
    let len = max_total as usize + 1;
    let numer = uni_pow(&[BigInt::one(), BigInt::from(n - 1)], n as u32 - 3, len);
    let mut denom_inv = vec![BigInt::zero(); len];
    // 1/(1-t)^r has coefficients C(k + r - 1, r - 1)
    let r = 2 * n as u32 - 3;
    for (k, c) in denom_inv.iter_mut().enumerate() {
        *c = binomial_big(k as u32 + r - 1, r - 1);
    }
    Ok(uni_mul(&numer, &denom_inv, len))
}

/// Product of univariate coefficient lists, truncated to `len` terms.
pub fn uni_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn uni_pow(a: &[BigInt], e: u32, len: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); len];
    if len > 0 {
        acc[0] = BigInt::one();
    }
    for _ in 0..e {
        acc = uni_mul(&acc, a, len);
    }
    acc
}

/// Inverse of a univariate series with constant term `+-1`.
pub fn uni_inverse(a: &[BigInt], len: usize) -> Result<Vec<BigInt>> {
    let c0 = a.first().cloned().unwrap_or_else(BigInt::zero);
    if c0.abs() != BigInt::one() {
        return Err(usage("series inverse needs constant term +-1"));
    }
    let mut inv = vec![BigInt::zero(); len];
    for k in 0..len {
        let mut s = if k == 0 { BigInt::one() } else { BigInt::zero() };
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            s -= &a[j] * &inv[k - j];
        }
        inv[k] = s * &c0;
    }
    Ok(inv)
}

/// Serializes as a plain integer when it fits in 128 bits, else as a string.
pub fn serialize_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i128::try_from(x) {
        Ok(v) => s.serialize_i128(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(a: &[u32]) -> DegreeVector {
        DegreeVector(a.to_vec())
    }

    #[test]
    fn a3_series_is_all_ones() {
        let s = lee_series(3, Bound::Total(4)).unwrap();
        for a in DegreeVector::up_to_total(3, 4) {
            assert_eq!(s.coefficient(&a), BigInt::one());
        }
    }

    #[test]
    fn pointwise_values() {
        let s5 = lee_series(5, Bound::Total(2)).unwrap();
        assert_eq!(s5.coefficient(&dv(&[1, 1, 0, 0, 0])), BigInt::from(7));
        let s4 = lee_series(4, Bound::Total(3)).unwrap();
        assert_eq!(s4.coefficient(&dv(&[2, 0, 0, 0])), BigInt::from(3));
        assert_eq!(s4.coefficient(&dv(&[2, 1, 0, 0])), BigInt::from(4));
    }

    #[test]
    fn closed_form_matches_expansion() {
        for n in 3..=6 {
            let s = lee_series(n, Bound::Total(4)).unwrap();
            for a in DegreeVector::up_to_total(n, 4) {
                assert_eq!(s.coefficient(&a), lee_coefficient(n as u32 - 3, &a), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn conifold_coefficients() {
        let s = lee_series_restricted(2, 2, Bound::Total(8)).unwrap();
        for a in DegreeVector::up_to_total(2, 8) {
            assert_eq!(s.coefficient(&a), BigInt::from(a.0[0] + a.0[1] + 1));
        }
    }

    #[test]
    fn restriction_with_m_zero_is_lee() {
        for n in 3..=5 {
            assert_eq!(lee_series_restricted(n, 0, Bound::Total(4)).unwrap(), lee_series(n, Bound::Total(4)).unwrap());
        }
    }

    #[test]
    fn curve_module_small_cases() {
        let b = Bound::Total(5);
        assert_eq!(curve_module_series(4, b.clone()).unwrap(), lee_series_restricted(3, 1, b.clone()).unwrap());
        let c5 = curve_module_series(5, b.clone()).unwrap();
        assert_eq!(c5.coefficient(&dv(&[0, 0, 0, 0])), BigInt::one());
        // block dimension of B_{4,1} is n + m - 2 = 3
        assert_eq!(c5.coefficient(&dv(&[1, 0, 0, 0])), BigInt::from(3));
    }

    #[test]
    fn total_hilbert_values() {
        let t4 = total_hilbert(4, 3).unwrap();
        assert_eq!(t4[1], BigInt::from(8));
        assert_eq!(t4[2], BigInt::from(30));
        let t3 = total_hilbert(3, 6).unwrap();
        for (k, c) in t3.iter().enumerate() {
            assert_eq!(*c, binomial_big(k as u32 + 2, 2));
        }
    }

    #[test]
    fn total_hilbert_is_diagonal_of_lee() {
        for n in 3..=6 {
            let d = 8;
            let diag = lee_series(n, Bound::Total(d)).unwrap().diagonal(d);
            assert_eq!(diag, total_hilbert(n, d).unwrap(), "n={n}");
        }
    }

    #[test]
    fn per_coordinate_bound() {
        let s = lee_series(4, Bound::PerCoordinate(vec![2, 1, 1, 0])).unwrap();
        assert_eq!(s.coefficient(&dv(&[2, 1, 0, 0])), BigInt::from(4));
        assert!(s.iter().all(|(a, _)| a.0[3] == 0));
    }

    #[test]
    fn inverse_round_trip() {
        let h = total_hilbert(5, 8).unwrap();
        let inv = uni_inverse(&h, 9).unwrap();
        let prod = uni_mul(&h, &inv, 9);
        assert_eq!(prod[0], BigInt::one());
        assert!(prod[1..].iter().all(|c| c.is_zero()));
        assert!(uni_inverse(&[BigInt::from(2)], 3).is_err());
    }
}
