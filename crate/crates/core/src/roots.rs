//! Numeric roots of integer polynomials.
//!
//! Used only for diagnostics and as an independent oracle: the polynomial is
//! first split into square-free parts over `Q` (Yun), each part is solved
//! with Aberth–Ehrlich iteration and polished with Newton steps, so repeated
//! roots keep full double precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::scalars::{rational_to_f64, Rational};

type QPoly = Vec<Rational>;

fn trim(mut a: QPoly) -> QPoly {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn is_zero(a: &QPoly) -> bool {
    a.iter().all(Zero::is_zero)
}

fn degree(a: &QPoly) -> usize {
    trim(a.clone()).len() - 1
}

fn derivative(a: &QPoly) -> QPoly {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect()
}

fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    if r.len() - 1 < db {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = b[db].clone();
    while !is_zero(&r) && r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        if r.is_empty() {
            r.push(Rational::zero());
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|k| a.get(k).cloned().unwrap_or_default() - b.get(k).cloned().unwrap_or_default()).collect())
}

fn monic(a: QPoly) -> QPoly {
    let a = trim(a);
    let lead = a.last().unwrap().clone();
    a.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut a = trim(a.clone());
    let mut b = trim(b.clone());
    while !is_zero(&b) {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// Yun's square-free decomposition: returns `(factor, multiplicity)` pairs
/// with every factor square-free and of positive degree.
pub fn squarefree_decomposition(f: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let f = trim(f.to_vec());
    if degree(&f) == 0 {
        return Vec::new();
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_rem(&f, &a0).0;
    let mut c = div_rem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&b) > 0 {
        let a = gcd(&b, &d);
        if degree(&a) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn eval(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a square-free polynomial (lowest degree first), starting the
/// Aberth iteration on the circle of the given radius.
fn aberth(coeffs: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.1))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = eval(coeffs, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::one() / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::one() - ratio * sum);
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Newton polish
    for r in z.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = eval(coeffs, *r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= v / dv;
        }
    }
    z
}

/// All complex roots of an integer polynomial, with multiplicity.
///
/// `radius` is a hint for the root moduli.
pub fn complex_roots(coeffs: &[BigInt], radius: f64) -> Vec<Complex64> {
    let q: QPoly = coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(&q) {
        let lead = factor.last().cloned().unwrap_or_else(Rational::one);
        let c: Vec<Complex64> = factor.iter().map(|x| Complex64::new(rational_to_f64(&(x / &lead)), 0.0)).collect();
        for r in aberth(&c, radius) {
            for _ in 0..mult {
                out.push(r);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quadratic() {
        let r = complex_roots(&ints(&[3, 0, 1]), 3f64.sqrt());
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 3f64.sqrt()).abs() < 1e-14);
            assert!(z.re.abs() < 1e-14);
        }
    }

    #[test]
    fn repeated_roots_stay_accurate() {
        // (T^2 + 3)^2
        let r = complex_roots(&ints(&[9, 0, 6, 0, 1]), 3f64.sqrt());
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.norm() - 3f64.sqrt()).abs() < 1e-13, "{z}");
        }
        let sf = squarefree_decomposition(
            &ints(&[9, 0, 6, 0, 1]).into_iter().map(Rational::from_integer).collect::<Vec<_>>(),
        );
        assert_eq!(sf.len(), 1);
        assert_eq!(sf[0].1, 2);
    }

    #[test]
    fn mixed_multiplicities() {
        // (x-1)^3 (x+2)
        let r = complex_roots(&ints(&[-2, 5, -3, -1, 1]), 1.0);
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.0).abs() < 1e-12);
        for x in &re[1..] {
            assert!((x - 1.0).abs() < 1e-12);
        }
    }
}
