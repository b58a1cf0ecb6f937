//! Exact scalars for Frobenius eigenvalues.
//!
//! Every eigenvalue that occurs is a monomial
//! `c · ζ · q^(n/2) · λ_1^e_1 ⋯ λ_2g^e_2g` with `c` rational, `ζ` a root of
//! unity and the `λ_j` the (abstract) Frobenius eigenvalues on `H^1` of the
//! curve. Sums of such monomials are kept in a canonical normal form so that
//! equality is structural and printing is byte-deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational number: {s:?}") };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `q^k` for a possibly negative integer `k`.
pub fn q_pow(q: u64, k: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(q));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base, (-k) as usize).recip()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A power of `q^(1/2)`, stored as the number of half-units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfIntExp(i64);

impl HalfIntExp {
    pub const ZERO: HalfIntExp = HalfIntExp(0);

    pub fn from_halves(halves: i64) -> Self {
        HalfIntExp(halves)
    }

    /// The exponent of `q^k`.
    pub fn from_int(k: i64) -> Self {
        HalfIntExp(2 * k)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self, q: u64) -> f64 {
        (q as f64).powf(self.0 as f64 / 2.0)
    }

    /// Exact value when `q^(n/2)` is rational (even `n`, or `q` a square).
    pub fn exact_value(self, q: u64) -> Option<Rational> {
        if self.is_integral() {
            return Some(q_pow(q, self.0 / 2));
        }
        let r = q.isqrt();
        (r * r == q).then(|| q_pow(r, self.0))
    }
}

impl Add for HalfIntExp {
    type Output = HalfIntExp;
    fn add(self, rhs: Self) -> Self {
        HalfIntExp(self.0 + rhs.0)
    }
}

impl Sub for HalfIntExp {
    type Output = HalfIntExp;
    fn sub(self, rhs: Self) -> Self {
        HalfIntExp(self.0 - rhs.0)
    }
}

impl Neg for HalfIntExp {
    type Output = HalfIntExp;
    fn neg(self) -> Self {
        HalfIntExp(-self.0)
    }
}

impl Mul<i64> for HalfIntExp {
    type Output = HalfIntExp;
    fn mul(self, rhs: i64) -> Self {
        HalfIntExp(self.0 * rhs)
    }
}

/// `q^-1`, `q^-3/2`, `q^0`.
impl fmt::Display for HalfIntExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "q^{}", self.0 / 2)
        } else {
            write!(f, "q^{}/2", self.0)
        }
    }
}

/// `exp(2πi · exponent / order)`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { order: 2, exponent: 1 };

    pub fn new(order: u64, exponent: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidScalar("root of unity of order 0".into()));
        }
        let e = (exponent as i128).rem_euclid(order as i128) as u64;
        if e == 0 {
            return Ok(Self::ONE);
        }
        let g = e.gcd(&order);
        Ok(RootOfUnity { order: order / g, exponent: e / g })
    }

    pub fn order(self) -> u64 {
        self.order
    }

    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn is_one(self) -> bool {
        self.order == 1
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Self) -> Self {
        let l = self.order.lcm(&rhs.order);
        let e = self.exponent as u128 * (l / self.order) as u128 + rhs.exponent as u128 * (l / rhs.order) as u128;
        RootOfUnity::new(l, (e % l as u128) as i64).expect("nonzero order")
    }

    pub fn inv(self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64)).expect("nonzero order")
    }

    pub fn pow(self, n: i64) -> Self {
        let e = (self.exponent as i128 * n as i128).rem_euclid(self.order as i128);
        RootOfUnity::new(self.order, e as i64).expect("nonzero order")
    }

    pub fn to_complex(self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent as f64 / self.order as f64;
        Complex64::from_polar(1.0, theta)
    }
}

impl Default for RootOfUnity {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta({},{})", self.order, self.exponent)
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.order, self.exponent].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (order, exponent) = <(u64, i64)>::deserialize(d)?;
        RootOfUnity::new(order, exponent).map_err(serde::de::Error::custom)
    }
}

/// Normal-form ordering key: λ-exponents, then q-exponent, then root of unity.
pub type MonomialKey = (Vec<i64>, HalfIntExp, RootOfUnity);

/// `coef · zeta · q^(qexp/2) · ∏ λ_j^lam_j` with `coef ≠ 0`.
///
/// Of `ζ` and `-ζ` the one of smaller order is kept, and the coefficient is
/// positive when both orders agree, so every scalar has one representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarMonomial {
    coef: Rational,
    zeta: RootOfUnity,
    qexp: HalfIntExp,
    lam: Vec<i64>,
}

impl ScalarMonomial {
    pub fn new(coef: Rational, zeta: RootOfUnity, qexp: HalfIntExp, lam: Vec<i64>) -> Result<Self> {
        if coef.is_zero() {
            return Err(Error::InvalidScalar("monomial with zero coefficient".into()));
        }
        let (coef, zeta) = match zeta.order() % 4 {
            2 => (-coef, zeta.mul(RootOfUnity::MINUS_ONE)),
            0 if coef.is_negative() => (-coef, zeta.mul(RootOfUnity::MINUS_ONE)),
            _ => (coef, zeta),
        };
        Ok(ScalarMonomial { coef, zeta, qexp, lam })
    }

    pub fn unit(width: usize) -> Self {
        ScalarMonomial { coef: Rational::one(), zeta: RootOfUnity::ONE, qexp: HalfIntExp::ZERO, lam: vec![0; width] }
    }

    pub fn constant(width: usize, coef: Rational) -> Result<Self> {
        Self::new(coef, RootOfUnity::ONE, HalfIntExp::ZERO, vec![0; width])
    }

    pub fn q_power(width: usize, qexp: HalfIntExp) -> Self {
        ScalarMonomial { qexp, ..Self::unit(width) }
    }

    pub fn root(width: usize, zeta: RootOfUnity) -> Self {
        Self::new(Rational::one(), zeta, HalfIntExp::ZERO, vec![0; width]).expect("unit coefficient")
    }

    /// `λ_{index+1}^exponent` (indices are zero-based here).
    pub fn lambda(width: usize, index: usize, exponent: i64) -> Result<Self> {
        if index >= width {
            return Err(Error::Context(format!("λ index {} out of range for 2g = {width}", index + 1)));
        }
        let mut m = Self::unit(width);
        m.lam[index] = exponent;
        Ok(m)
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn zeta(&self) -> RootOfUnity {
        self.zeta
    }

    pub fn qexp(&self) -> HalfIntExp {
        self.qexp
    }

    pub fn lam(&self) -> &[i64] {
        &self.lam
    }

    pub fn width(&self) -> usize {
        self.lam.len()
    }

    pub fn key(&self) -> MonomialKey {
        (self.lam.clone(), self.qexp, self.zeta)
    }

    pub fn is_one(&self) -> bool {
        self.coef.is_one() && self.zeta.is_one() && self.qexp == HalfIntExp::ZERO && self.is_lambda_free()
    }

    pub fn is_lambda_free(&self) -> bool {
        self.lam.iter().all(|&e| e == 0)
    }

    /// The λ-free part `coef · zeta · q^(qexp/2)`, in the same width.
    pub fn lambda_free_part(&self) -> Self {
        ScalarMonomial { lam: vec![0; self.lam.len()], ..self.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.width() != rhs.width() {
            return Err(Error::Context(format!("λ-vector length {} vs {}", self.width(), rhs.width())));
        }
        let lam = self.lam.iter().zip(&rhs.lam).map(|(a, b)| a + b).collect();
        Self::new(&self.coef * &rhs.coef, self.zeta.mul(rhs.zeta), self.qexp + rhs.qexp, lam)
    }

    pub fn pow(&self, n: i64) -> Self {
        let coef = if n >= 0 {
            num_traits::pow(self.coef.clone(), n as usize)
        } else {
            num_traits::pow(self.coef.recip(), (-n) as usize)
        };
        let lam = self.lam.iter().map(|e| e * n).collect();
        Self::new(coef, self.zeta.pow(n), self.qexp * n, lam).expect("power of a nonzero monomial")
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// `(|coef|, k)` with `|m| = |coef| · q^(k/2)`, using `|λ_j| = q^(1/2)`
    /// and `|ζ| = 1`.
    pub fn magnitude(&self) -> (Rational, HalfIntExp) {
        let lam_sum: i64 = self.lam.iter().sum();
        (self.coef.abs(), self.qexp + HalfIntExp::from_halves(lam_sum))
    }

    pub fn evaluate_numeric(&self, lambda: &[Complex64], q: u64) -> Result<Complex64> {
        if lambda.len() != self.width() {
            return Err(Error::Context(format!("{} numeric λ values for 2g = {}", lambda.len(), self.width())));
        }
        let mut v = Complex64::new(rational_to_f64(&self.coef), 0.0) * self.zeta.to_complex() * self.qexp.to_f64(q);
        for (l, &e) in lambda.iter().zip(&self.lam) {
            if e != 0 {
                v *= l.powi(e as i32);
            }
        }
        Ok(v)
    }

    fn write_factors(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.zeta.is_one() {
            write!(f, " * {}", self.zeta)?;
        }
        if self.qexp != HalfIntExp::ZERO {
            write!(f, " * q^({}/2)", self.qexp.halves())?;
        }
        let lams: Vec<String> =
            self.lam.iter().enumerate().filter(|(_, &e)| e != 0).map(|(j, e)| format!("L{}^{}", j + 1, e)).collect();
        if !lams.is_empty() {
            write!(f, " * {}", lams.join("*"))?;
        }
        Ok(())
    }
}

/// Canonical text: `c * zeta(m,e) * q^(n/2) * L1^a1*L2^a2`, trivial
/// factors omitted.
impl fmt::Display for ScalarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.coef))?;
        self.write_factors(f)
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    coef: String,
    zeta: RootOfUnity,
    qexp: HalfIntExp,
    lam: Vec<i64>,
}

impl Serialize for ScalarMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialRepr { coef: format_rational(&self.coef), zeta: self.zeta, qexp: self.qexp, lam: self.lam.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MonomialRepr::deserialize(d)?;
        let coef = parse_rational(&r.coef).map_err(serde::de::Error::custom)?;
        ScalarMonomial::new(coef, r.zeta, r.qexp, r.lam).map_err(serde::de::Error::custom)
    }
}

/// A finite sum of monomials in normal form: sorted by [`MonomialKey`],
/// distinct keys, no zero coefficients. The empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarSum {
    width: usize,
    terms: Vec<ScalarMonomial>,
}

impl ScalarSum {
    pub fn zero(width: usize) -> Self {
        ScalarSum { width, terms: Vec::new() }
    }

    pub fn one(width: usize) -> Self {
        Self::from_monomial(ScalarMonomial::unit(width))
    }

    pub fn from_rational(width: usize, r: Rational) -> Self {
        match ScalarMonomial::constant(width, r) {
            Ok(m) => Self::from_monomial(m),
            Err(_) => Self::zero(width),
        }
    }

    pub fn from_monomial(m: ScalarMonomial) -> Self {
        ScalarSum { width: m.width(), terms: vec![m] }
    }

    pub fn from_terms<I: IntoIterator<Item = ScalarMonomial>>(width: usize, terms: I) -> Result<Self> {
        let mut acc: BTreeMap<MonomialKey, Rational> = BTreeMap::new();
        for t in terms {
            if t.width() != width {
                return Err(Error::Context(format!("term of width {} in a sum of width {width}", t.width())));
            }
            let key = t.key();
            *acc.entry(key).or_insert_with(Rational::zero) += t.coef;
        }
        Ok(Self::from_map(width, acc))
    }

    fn from_map(width: usize, acc: BTreeMap<MonomialKey, Rational>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((lam, qexp, zeta), coef)| ScalarMonomial { coef, zeta, qexp, lam })
            .collect();
        ScalarSum { width, terms }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[ScalarMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_lambda_free(&self) -> bool {
        self.terms.iter().all(ScalarMonomial::is_lambda_free)
    }

    fn check_width(&self, rhs: &Self) -> Result<()> {
        if self.width != rhs.width {
            return Err(Error::Context(format!("sum widths {} vs {}", self.width, rhs.width)));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_width(rhs)?;
        Self::from_terms(self.width, self.terms.iter().chain(&rhs.terms).cloned())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|t| ScalarMonomial { coef: -t.coef.clone(), ..t.clone() }).collect();
        ScalarSum { width: self.width, terms }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_width(rhs)?;
        let mut acc: BTreeMap<MonomialKey, Rational> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let m = a.mul(b)?;
                let key = m.key();
                *acc.entry(key).or_insert_with(Rational::zero) += m.coef;
            }
        }
        Ok(Self::from_map(self.width, acc))
    }

    pub fn mul_monomial(&self, m: &ScalarMonomial) -> Result<Self> {
        let terms = self.terms.iter().map(|t| t.mul(m)).collect::<Result<Vec<_>>>()?;
        // multiplication by a monomial is injective on keys, so no merging is needed
        Self::from_terms(self.width, terms)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.width);
        }
        let terms = self.terms.iter().map(|t| ScalarMonomial { coef: &t.coef * r, ..t.clone() }).collect();
        ScalarSum { width: self.width, terms }
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.width);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Drops the (all-zero) λ-vectors, giving a sum of width 0.
    pub fn strip_lambda(&self) -> Result<Self> {
        if !self.is_lambda_free() {
            return Err(Error::SymbolicResidue(format!("{self} still depends on λ")));
        }
        let terms = self.terms.iter().map(|t| ScalarMonomial { lam: Vec::new(), ..t.clone() }).collect();
        Ok(ScalarSum { width: 0, terms })
    }

    /// Pads a width-0 sum out to `width` zero λ-exponents.
    pub fn widen(&self, width: usize) -> Result<Self> {
        if self.width != 0 && self.width != width {
            return Err(Error::Context(format!("cannot widen a sum of width {} to {width}", self.width)));
        }
        let terms = self.terms.iter().map(|t| ScalarMonomial { lam: vec![0; width], ..t.clone() }).collect();
        Ok(ScalarSum { width, terms })
    }

    /// `(C, k)` with `|s| ≤ C · q^(k/2)` for every realization of the λ's.
    ///
    /// Exact for a single monomial. For longer sums `k` is the largest
    /// per-term exponent and `C` the sum of `|coef|`, which is valid because
    /// `q ≥ 2` makes every smaller power at most 1.
    pub fn magnitude_bound(&self) -> (Rational, HalfIntExp) {
        let mags: Vec<_> = self.terms.iter().map(ScalarMonomial::magnitude).collect();
        let Some(k) = mags.iter().map(|(_, k)| *k).max() else {
            return (Rational::zero(), HalfIntExp::ZERO);
        };
        let c = mags.into_iter().fold(Rational::zero(), |acc, (c, _)| acc + c);
        (c, k)
    }

    pub fn evaluate_numeric(&self, lambda: &[Complex64], q: u64) -> Result<Complex64> {
        if lambda.len() != self.width {
            return Err(Error::Context(format!("{} numeric λ values for 2g = {}", lambda.len(), self.width)));
        }
        self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, t| Ok(acc + t.evaluate_numeric(lambda, q)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl fmt::Display for ScalarSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SumRepr {
    width: usize,
    terms: Vec<ScalarMonomial>,
}

impl Serialize for ScalarSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SumRepr { width: self.width, terms: self.terms.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SumRepr::deserialize(d)?;
        ScalarSum::from_terms(r.width, r.terms).map_err(serde::de::Error::custom)
    }
}

pub fn monomial_mul(a: &ScalarMonomial, b: &ScalarMonomial) -> Result<ScalarMonomial> {
    a.mul(b)
}

pub fn sum_add(a: &ScalarSum, b: &ScalarSum) -> Result<ScalarSum> {
    a.add(b)
}

pub fn magnitude_bound(s: &ScalarSum) -> (Rational, HalfIntExp) {
    s.magnitude_bound()
}

pub fn evaluate_numeric(s: &ScalarSum, lambda: &[Complex64], q: u64) -> Result<Complex64> {
    s.evaluate_numeric(lambda, q)
}
