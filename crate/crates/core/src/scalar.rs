//! Exact coefficient fields.
//!
//! Two backends implement [`Field`]: arbitrary-precision rationals
//! ([`Rational`], backed by `num-rational`) and prime-field residues ([`Fp`]).
//! Prime-field elements carry their modulus, so the field context is a
//! runtime value; mixing two moduli is an error on the checked API and a
//! panic on the plain operators.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ScalarError;

/// Arbitrary-precision rational number, always stored reduced.
pub type Rational = BigRational;

/// Largest prime below 2^32. Residues fit in a half machine word, so a
/// product of two residues never overflows `u64` before reduction.
pub const DEFAULT_PRIME: u64 = 4_294_967_291;

/// Fallback primes used when a modular result needs confirmation.
pub const ALTERNATE_PRIMES: [u64; 2] = [4_294_967_279, 4_294_967_231];

/// An exact field with a (possibly trivial) runtime context.
pub trait Field: Clone + Debug + Display + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Context: Clone + Debug + PartialEq + Eq + Send + Sync + 'static;

    fn zero(ctx: &Self::Context) -> Self;
    fn one(ctx: &Self::Context) -> Self;
    fn from_i64(ctx: &Self::Context, v: i64) -> Self;
    fn from_bigint(ctx: &Self::Context, v: &BigInt) -> Self;
    fn context(&self) -> Self::Context;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    /// Characteristic of the field (0 for the rationals).
    fn characteristic(ctx: &Self::Context) -> u64;

    fn div_ref(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }
}

impl Field for BigRational {
    type Context = ();

    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(_: &(), v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn context(&self) {}
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if Zero::is_zero(self) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn characteristic(_: &()) -> u64 {
        0
    }
}

/// Modulus of a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    /// Accepts odd primes below 2^32.
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if !(3..1 << 32).contains(&p) || !is_prime(p) {
            return Err(ScalarError::BadModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for PrimeModulus {
    fn default() -> Self {
        PrimeModulus(DEFAULT_PRIME)
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue modulo a prime, in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(modulus: PrimeModulus, v: i64) -> Self {
        let p = modulus.0 as i64;
        Fp { residue: v.rem_euclid(p) as u64, modulus: modulus.0 }
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> PrimeModulus {
        PrimeModulus(self.modulus)
    }

    #[inline]
    fn same(self, other: Fp) {
        assert_eq!(self.modulus, other.modulus, "mixed prime-field contexts");
    }

    fn pow(self, mut e: u64) -> Fp {
        let p = self.modulus;
        let mut base = self.residue;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp { residue: acc, modulus: p }
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // symmetric representative reads better for small integers
        if self.residue > self.modulus / 2 {
            write!(f, "-{}", self.modulus - self.residue)
        } else {
            write!(f, "{}", self.residue)
        }
    }
}

impl Field for Fp {
    type Context = PrimeModulus;

    fn zero(ctx: &PrimeModulus) -> Self {
        Fp { residue: 0, modulus: ctx.0 }
    }
    fn one(ctx: &PrimeModulus) -> Self {
        Fp { residue: 1, modulus: ctx.0 }
    }
    fn from_i64(ctx: &PrimeModulus, v: i64) -> Self {
        Fp::new(*ctx, v)
    }
    fn from_bigint(ctx: &PrimeModulus, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(ctx.0));
        Fp { residue: r.to_u64().expect("reduced residue fits"), modulus: ctx.0 }
    }
    fn context(&self) -> PrimeModulus {
        PrimeModulus(self.modulus)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.residue == 0
    }
    fn is_one(&self) -> bool {
        self.residue == 1
    }
    #[inline]
    fn add_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let s = self.residue + other.residue;
        let r = if s >= self.modulus { s - self.modulus } else { s };
        Fp { residue: r, modulus: self.modulus }
    }
    #[inline]
    fn sub_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let r = if self.residue >= other.residue {
            self.residue - other.residue
        } else {
            self.residue + self.modulus - other.residue
        };
        Fp { residue: r, modulus: self.modulus }
    }
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Fp { residue: self.residue * other.residue % self.modulus, modulus: self.modulus }
    }
    fn neg_ref(&self) -> Self {
        let r = if self.residue == 0 { 0 } else { self.modulus - self.residue };
        Fp { residue: r, modulus: self.modulus }
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.residue == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.pow(self.modulus - 2))
    }
    fn characteristic(ctx: &PrimeModulus) -> u64 {
        ctx.0
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.same(rhs);
        self.add_ref(&rhs)
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.same(rhs);
        self.sub_ref(&rhs)
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.same(rhs);
        self.mul_ref(&rhs)
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        self.neg_ref()
    }
}

/// Reduce a rational into a prime field. Fails when the denominator
/// vanishes modulo the prime.
pub fn rational_to_fp(q: &Rational, ctx: &PrimeModulus) -> Result<Fp, ScalarError> {
    let num = Fp::from_bigint(ctx, q.numer());
    let den = Fp::from_bigint(ctx, q.denom());
    num.div_ref(&den).map_err(|_| ScalarError::BadReduction(q.to_string(), ctx.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Inv,
    Neg,
}

/// Checked scalar arithmetic. Unary operations ignore `b`.
pub fn scalar_arith<F: Field>(a: &F, b: &F, op: ScalarOp) -> Result<F, ScalarError> {
    if a.context() != b.context() {
        return Err(ScalarError::MixedContexts);
    }
    Ok(match op {
        ScalarOp::Add => a.add_ref(b),
        ScalarOp::Mul => a.mul_ref(b),
        ScalarOp::Neg => a.neg_ref(),
        ScalarOp::Inv => a.inv()?,
    })
}
