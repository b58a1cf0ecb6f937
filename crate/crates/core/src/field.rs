//! Small finite fields `F_{p^k}` with table-driven multiplication.
//!
//! Elements are `u32` indices whose base-`p` digits are the coefficients of
//! the residue polynomial (lowest degree first). The modulus is the first
//! monic irreducible polynomial of degree `k` in the enumeration order of
//! its lower coefficients read as a base-`p` integer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field the tables are built for.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `q = p^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub s: u32,
}

impl PrimePower {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) || s == 0 {
            return Err(Error::InvalidField(format!("{p}^{s} is not a prime power")));
        }
        p.checked_pow(s).ok_or_else(|| Error::InvalidField(format!("{p}^{s} overflows")))?;
        Ok(PrimePower { p, s })
    }

    /// Factors `q` as a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        let fs = prime_factors(q);
        if fs.len() != 1 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        let p = fs[0];
        let mut s = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            s += 1;
        }
        Ok(PrimePower { p, s })
    }

    pub fn q(self) -> u64 {
        self.p.pow(self.s)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q())
    }
}

// Dense polynomials over F_p, lowest degree first, used only for the
// irreducibility test.
fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let inv_lead = mod_inv(*m.last().unwrap(), p);
    while !poly_is_zero(&r) && r.len() > dm {
        let c = r.last().unwrap() * inv_lead % p;
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
        }
        r.pop();
        if r.is_empty() {
            r.push(0);
        }
        r = poly_trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    poly_rem(&c, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `x^(p^j) mod m`, by repeated p-th powering.
fn frobenius_power_of_x(m: &[u64], p: u64, j: u32) -> Vec<u64> {
    let mut x = poly_rem(&[0, 1], m, p);
    for _ in 0..j {
        // raise to the p-th power by square-and-multiply
        let mut result = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = poly_mulmod(&result, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        x = result;
    }
    x
}

/// Rabin's test for a monic polynomial of degree `k` over `F_p`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = (m.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let xk = frobenius_power_of_x(m, p, k);
    if poly_trim(xk) != vec![0, 1] {
        return false;
    }
    for r in prime_factors(k as u64) {
        let mut h = frobenius_power_of_x(m, p, k / r as u32);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(m, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

pub fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for code in 0..count {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if k > 1 && m[0] == 0 {
            continue;
        }
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

pub type Elem = u32;

/// `F_{p^k}` with log/antilog tables.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
    size: u32,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::InvalidField(format!("F_{{{p}^{k}}}")));
        }
        let size = p
            .checked_pow(k)
            .filter(|&n| n <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::InvalidField(format!("F_{{{p}^{k}}} exceeds {MAX_FIELD_SIZE} elements")))?;
        let modulus = smallest_irreducible(p, k);
        let mut field = FiniteField { p, k, modulus, size: size as u32, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    /// `F_{q^k}` for `q = p^s`.
    pub fn extension(q: PrimePower, k: u32) -> Result<Self> {
        Self::new(q.p, q.s * k)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    fn digits(&self, a: Elem) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.k as usize);
        let mut a = a as u64;
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn elem_of_digits(&self, d: &[u64]) -> Elem {
        d.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as Elem
    }

    /// Multiplication of residue polynomials, used only to build the tables.
    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let r = poly_mulmod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        let mut d = r;
        d.resize(self.k as usize, 0);
        self.elem_of_digits(&d)
    }

    fn build_tables(&mut self) {
        let n = self.size as u64 - 1;
        let factors = prime_factors(n);
        let generator = (2..self.size.max(2))
            .chain(std::iter::once(1))
            .find(|&g| {
                if self.size == 2 {
                    return g == 1;
                }
                factors.iter().all(|&r| self.slow_pow(g, n / r) != 1)
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0 as Elem; n as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut x: Elem = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r: Elem = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.size - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = (self.size - 1) as u64;
        let l = self.log[a as usize] as u64;
        Some(n / num_integer::gcd(n, l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(PrimePower::from_q(9).unwrap(), PrimePower { p: 3, s: 2 });
        assert_eq!(PrimePower::from_q(7).unwrap().q(), 7);
        assert!(PrimePower::from_q(6).is_err());
        assert!(PrimePower::from_q(1).is_err());
        assert!(PrimePower::new(4, 1).is_err());
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn field_axioms_by_exhaustion() {
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1), (2, 4), (7, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            assert_eq!(f.size() as u64, p.pow(k));
            let mut units = 0;
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    units += 1;
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, f.size() as u64 - 1), 1);
                }
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                }
            }
            assert_eq!(units, p.pow(k) - 1);
            assert!(f.elements().any(|a| f.order(a) == Some(p.pow(k) - 1)));
        }
    }

    #[test]
    fn distributivity_small() {
        let f = FiniteField::new(3, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
