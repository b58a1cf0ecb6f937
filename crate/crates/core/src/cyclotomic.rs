//! Exact λ-free values in a cyclotomic field `Q(ζ_N)`.
//!
//! Elements are polynomials in `ζ_N` reduced modulo the cyclotomic
//! polynomial `Φ_N`, so an element is rational exactly when every
//! non-constant coefficient vanishes.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{format_rational, rational_to_f64, Rational, RootOfUnity, ScalarSum};

const MAX_ORDER: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

/// `Φ_n` as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i128> {
    // Φ_d = (x^d - 1) / ∏_{e | d, e < d} Φ_e, built up over the divisors of n
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut known: Vec<(u64, Vec<i128>)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        let mut num = vec![0i128; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (e, phi) in &known {
            if d % e == 0 {
                num = exact_div_monic(&num, phi);
            }
        }
        known.push((d, num));
    }
    known.pop().expect("n has itself as a divisor").1
}

fn exact_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![0i128; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        for (i, &dc) in den.iter().enumerate() {
            rem[k + i] -= c * dc;
        }
    }
    quo
}

fn reduce(order: u64, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    for k in (deg..coeffs.len()).rev() {
        let c = std::mem::replace(&mut coeffs[k], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for (i, &pc) in phi.iter().enumerate().take(deg) {
            coeffs[k - deg + i] -= &c * Rational::from_integer(pc.into());
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, Rational::zero());
    coeffs
}

impl Cyclotomic {
    fn make(order: u64, coeffs: Vec<Rational>) -> Self {
        let coeffs = reduce(order, coeffs);
        if coeffs[1..].iter().all(Zero::is_zero) {
            return Cyclotomic { order: 1, coeffs: vec![coeffs[0].clone()] };
        }
        Cyclotomic { order, coeffs }
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    /// Exact value of a λ-free sum at a concrete `q`.
    ///
    /// Odd powers of `q^(1/2)` are only accepted when `q` is a square.
    pub fn from_sum(sum: &ScalarSum, q: u64) -> Result<Self> {
        let mut order = 1u64;
        for t in sum.terms() {
            if !t.is_lambda_free() {
                return Err(Error::SymbolicResidue(format!("{sum} still depends on λ")));
            }
            order = order.lcm(&t.zeta().order());
        }
        if order > MAX_ORDER {
            return Err(Error::InvalidScalar(format!("root-of-unity order {order} exceeds {MAX_ORDER}")));
        }
        let mut coeffs = vec![Rational::zero(); order as usize];
        for t in sum.terms() {
            let qv = t
                .qexp()
                .exact_value(q)
                .ok_or_else(|| Error::SymbolicResidue(format!("{} is irrational for q = {q}", t.qexp())))?;
            let z = t.zeta();
            let idx = (z.exponent() * (order / z.order())) as usize;
            coeffs[idx] += t.coef() * qv;
        }
        Ok(Self::make(order, coeffs))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn lift(&self, order: u64) -> Vec<Rational> {
        let step = (order / self.order) as usize;
        let mut out = vec![Rational::zero(); order as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * step] += c;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.lcm(&rhs.order);
        let mut a = self.lift(order);
        for (x, y) in a.iter_mut().zip(rhs.lift(order)) {
            *x += y;
        }
        Self::make(order, a)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.lcm(&rhs.order);
        let a = self.lift(order);
        let b = rhs.lift(order);
        let n = order as usize;
        let mut c = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                c[(i + j) % n] += x * y;
            }
        }
        Self::make(order, c)
    }

    /// The automorphism `ζ_N ↦ ζ_N^k`, for `k` coprime to `N`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.order as usize;
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i * k as usize) % n] += c;
        }
        Self::make(self.order, out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::make(self.order, self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = RootOfUnity::new(self.order, 1).expect("order ≥ 1").to_complex();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += p * rational_to_f64(c);
            p *= z;
        }
        acc
    }
}

/// A rational prints as `num/den`; otherwise `c0 + c1*zeta(N,1) + ...`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", format_rational(c))?;
            } else {
                write!(f, "({})*zeta({},{})", format_rational(c), self.order, k)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rational_int, HalfIntExp, ScalarMonomial};

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn orbit_sum_is_rational() {
        // 1 + ω + ω² = 0
        let w = RootOfUnity::new(3, 1).unwrap();
        let s = ScalarSum::from_terms(
            0,
            [ScalarMonomial::unit(0), ScalarMonomial::root(0, w), ScalarMonomial::root(0, w.pow(2))],
        )
        .unwrap();
        let c = Cyclotomic::from_sum(&s, 5).unwrap();
        assert!(c.is_zero());

        // (1 - ω x)(1 - ω² x) = 1 + x + x² at x = q^-1, q = 2
        let x = ScalarMonomial::q_power(0, HalfIntExp::from_int(-1));
        let f1 = ScalarSum::one(0).sub(&ScalarSum::from_monomial(x.mul(&ScalarMonomial::root(0, w)).unwrap())).unwrap();
        let f2 = ScalarSum::one(0)
            .sub(&ScalarSum::from_monomial(x.mul(&ScalarMonomial::root(0, w.pow(2))).unwrap()))
            .unwrap();
        let prod = Cyclotomic::from_sum(&f1.mul(&f2).unwrap(), 2).unwrap();
        assert_eq!(prod.as_rational(), Some(Rational::new(7.into(), 4.into())));
        let split = Cyclotomic::from_sum(&f1, 2).unwrap().mul(&Cyclotomic::from_sum(&f2, 2).unwrap());
        assert_eq!(split, prod);
        assert!(Cyclotomic::from_sum(&f1, 2).unwrap().as_rational().is_none());
    }

    #[test]
    fn half_powers_need_square_q() {
        let s = ScalarSum::from_monomial(ScalarMonomial::q_power(0, HalfIntExp::from_halves(1)));
        assert_eq!(Cyclotomic::from_sum(&s, 9).unwrap().as_rational(), Some(rational_int(3)));
        assert!(matches!(Cyclotomic::from_sum(&s, 3), Err(Error::SymbolicResidue(_))));
    }

    #[test]
    fn complex_value_matches() {
        let i = RootOfUnity::new(4, 1).unwrap();
        let s = ScalarSum::from_terms(0, [ScalarMonomial::unit(0), ScalarMonomial::root(0, i)]).unwrap();
        let c = Cyclotomic::from_sum(&s, 3).unwrap();
        assert!((c.to_complex() - Complex64::new(1.0, 1.0)).norm() < 1e-12);
        assert_eq!(c.to_string(), "1 + (1)*zeta(4,1)");
    }
}
