//! Curves over finite fields, point counts and the Weil numerator `P(T)`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField, PrimePower};
use crate::roots::complex_roots;
use crate::scalars::{q_pow, HalfIntExp, Rational, ScalarMonomial};

/// Cap on `q^(2k)` for brute-force counting.
pub const COUNT_CAP: u128 = 100_000_000;

/// Tolerance for `||λ| - √q|` in the numeric eigenvalue check.
pub const WEIL_BOUND_TOL: f64 = 1e-9;

/// One term `coef · x^a y^b z^c` of an integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coef: i64,
    pub exps: [u32; 3],
}

/// Parses `2*x^2*y - z3 + x y z` style polynomials in `x`, `y`, `z`.
///
/// Exponents may be written `x^3` or `x3`; implicit multiplication by
/// juxtaposition or `*` is accepted.
pub fn parse_polynomial(s: &str) -> Result<Vec<PolyTerm>> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let mut terms: Vec<PolyTerm> = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<i64> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| chars[start..*pos].iter().collect::<String>().parse().ok()).flatten()
    };
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(Error::Parse { pos, msg: "empty polynomial".into() });
    }
    let mut first = true;
    while pos < chars.len() {
        skip_ws(&mut pos);
        let mut sign = 1i64;
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(Error::Parse { pos, msg: "expected '+' or '-'".into() });
        }
        first = false;
        skip_ws(&mut pos);
        let mut coef = sign;
        let mut exps = [0u32; 3];
        let mut saw_factor = false;
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                break;
            }
            let c = chars[pos];
            if c.is_ascii_digit() {
                let n = read_int(&mut pos).ok_or(Error::Parse { pos, msg: "integer overflow".into() })?;
                coef = coef.checked_mul(n).ok_or(Error::Parse { pos, msg: "coefficient overflow".into() })?;
                saw_factor = true;
            } else if let Some(v) = ['x', 'y', 'z'].iter().position(|&name| name == c) {
                pos += 1;
                let mut e = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    e = read_int(&mut pos).ok_or(Error::Parse { pos, msg: "expected exponent".into() })? as u32;
                } else if pos < chars.len() && chars[pos].is_ascii_digit() {
                    e = read_int(&mut pos).ok_or(Error::Parse { pos, msg: "expected exponent".into() })? as u32;
                }
                exps[v] += e;
                saw_factor = true;
            } else if c == '*' {
                pos += 1;
            } else if c == '+' || c == '-' {
                break;
            } else {
                return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
            }
        }
        if !saw_factor {
            return Err(Error::Parse { pos, msg: "empty term".into() });
        }
        match terms.iter_mut().find(|t| t.exps == exps) {
            Some(t) => t.coef += coef,
            None => terms.push(PolyTerm { coef, exps }),
        }
    }
    Ok(terms)
}

/// How the Weil numerator of a zeta-direct model is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ZetaData {
    /// `N_1..N_g`.
    Counts(Vec<u64>),
    /// `a_0..a_2g`.
    Numerator(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "mode")]
pub enum CurveModel {
    /// A smooth plane curve `F(x, y, z) = 0`, `F` homogeneous.
    PlaneProjective {
        q: PrimePower,
        terms: Vec<PolyTerm>,
        degree: u32,
    },
    /// `y^2 = f(x)` with `deg f` odd; `f` lowest degree first, reduced mod p.
    Hyperelliptic {
        q: PrimePower,
        f: Vec<i64>,
    },
    ZetaDirect {
        q: PrimePower,
        g: usize,
        data: ZetaData,
    },
}

impl CurveModel {
    /// Parses `y2=x3+x` (hyperelliptic) or a homogeneous `F(x,y,z)`
    /// (plane projective). Coefficients are reduced into the prime field.
    pub fn parse(q: PrimePower, model: &str) -> Result<Self> {
        if let Some((lhs, rhs)) = model.split_once('=') {
            let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
            if lhs != "y2" && lhs != "y^2" {
                return Err(Error::InvalidModel(format!("expected y^2 = f(x), got left side {lhs:?}")));
            }
            let terms = parse_polynomial(rhs)?;
            let p = q.p as i64;
            let mut f = Vec::new();
            for t in &terms {
                if t.exps[1] != 0 || t.exps[2] != 0 {
                    return Err(Error::InvalidModel("f must be a polynomial in x alone".into()));
                }
                let d = t.exps[0] as usize;
                if f.len() <= d {
                    f.resize(d + 1, 0);
                }
                f[d] = (f[d] + t.coef).rem_euclid(p);
            }
            while f.len() > 1 && *f.last().unwrap() == 0 {
                f.pop();
            }
            Self::hyperelliptic(q, f)
        } else {
            Self::plane(q, parse_polynomial(model)?)
        }
    }

    pub fn hyperelliptic(q: PrimePower, f: Vec<i64>) -> Result<Self> {
        if q.p == 2 {
            return Err(Error::InvalidModel("hyperelliptic models need odd characteristic".into()));
        }
        let p = q.p as i64;
        let mut f: Vec<i64> = f.into_iter().map(|c| c.rem_euclid(p)).collect();
        while f.len() > 1 && *f.last().unwrap() == 0 {
            f.pop();
        }
        let deg = f.len().saturating_sub(1);
        if ![3, 5, 7].contains(&deg) {
            return Err(Error::InvalidModel(format!("deg f = {deg}; expected 3, 5 or 7")));
        }
        Ok(CurveModel::Hyperelliptic { q, f })
    }

    pub fn plane(q: PrimePower, terms: Vec<PolyTerm>) -> Result<Self> {
        let p = q.p as i64;
        let terms: Vec<PolyTerm> =
            terms.into_iter().map(|t| PolyTerm { coef: t.coef.rem_euclid(p), ..t }).filter(|t| t.coef != 0).collect();
        let Some(first) = terms.first() else {
            return Err(Error::InvalidModel("zero polynomial".into()));
        };
        let degree: u32 = first.exps.iter().sum();
        if terms.iter().any(|t| t.exps.iter().sum::<u32>() != degree) {
            return Err(Error::InvalidModel("plane model must be homogeneous in x, y, z".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidModel("constant polynomial".into()));
        }
        Ok(CurveModel::PlaneProjective { q, terms, degree })
    }

    pub fn zeta_direct(q: PrimePower, g: usize, data: ZetaData) -> Result<Self> {
        match &data {
            ZetaData::Counts(c) if c.len() != g => {
                return Err(Error::InconsistentCounts(format!("{} counts given for genus {g}", c.len())))
            }
            ZetaData::Numerator(a) if a.len() != 2 * g + 1 => {
                return Err(Error::NotWeil(format!("{} coefficients given for genus {g}", a.len())))
            }
            _ => {}
        }
        Ok(CurveModel::ZetaDirect { q, g, data })
    }

    pub fn q(&self) -> PrimePower {
        match self {
            CurveModel::PlaneProjective { q, .. }
            | CurveModel::Hyperelliptic { q, .. }
            | CurveModel::ZetaDirect { q, .. } => *q,
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            CurveModel::PlaneProjective { degree, .. } => {
                let d = *degree as usize;
                (d - 1) * d.saturating_sub(2) / 2
            }
            CurveModel::Hyperelliptic { f, .. } => (f.len() - 2) / 2,
            CurveModel::ZetaDirect { g, .. } => *g,
        }
    }

    /// Number of points over `F_{q^k}`.
    ///
    /// Zeta-direct models are answered from their Weil polynomial.
    pub fn count_points(&self, k: u32) -> Result<u64> {
        if k == 0 {
            return Err(Error::InvalidField("extension degree 0".into()));
        }
        let q = self.q();
        if let CurveModel::ZetaDirect { .. } = self {
            let n = self.weil_polynomial()?.count(k as usize);
            return n.to_u64().ok_or_else(|| Error::InconsistentCounts(format!("N_{k} = {n}")));
        }
        let qk = (q.q() as u128).checked_pow(k).unwrap_or(u128::MAX);
        let needed = qk.saturating_mul(qk);
        if needed > COUNT_CAP {
            return Err(Error::EnumerationCap { needed, cap: COUNT_CAP });
        }
        let field = FiniteField::extension(q, k)?;
        match self {
            CurveModel::Hyperelliptic { f, .. } => count_hyperelliptic(&field, f),
            CurveModel::PlaneProjective { terms, .. } => count_plane(&field, terms),
            CurveModel::ZetaDirect { .. } => unreachable!(),
        }
    }

    pub fn weil_polynomial(&self) -> Result<WeilPolynomial> {
        let q = self.q().q();
        let g = self.genus();
        match self {
            CurveModel::ZetaDirect { data: ZetaData::Counts(c), .. } => weil_numerator_from_counts(q, g, c),
            CurveModel::ZetaDirect { data: ZetaData::Numerator(a), .. } => {
                let p = WeilPolynomial::new(q, a.iter().map(|&x| BigInt::from(x)).collect())?;
                if !p.functional_equation_check() {
                    return Err(Error::NotWeil(format!("{p} violates the functional equation")));
                }
                Ok(p)
            }
            _ => {
                let counts = (1..=g as u32).map(|k| self.count_points(k)).collect::<Result<Vec<_>>>()?;
                weil_numerator_from_counts(q, g, &counts)
            }
        }
    }
}

fn eval_univariate(field: &FiniteField, coeffs: &[Elem], x: Elem) -> Elem {
    coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

fn count_hyperelliptic(field: &FiniteField, f: &[i64]) -> Result<u64> {
    let fc: Vec<Elem> = f.iter().map(|&c| field.from_int(c)).collect();
    let df: Vec<Elem> = f.iter().enumerate().skip(1).map(|(i, &c)| field.from_int(c * i as i64)).collect();
    let mut squares = vec![0u64; field.size() as usize];
    for y in field.elements() {
        squares[field.mul(y, y) as usize] += 1;
    }
    let affine = field
        .elements()
        .into_par_iter()
        .map(|x| {
            let v = eval_univariate(field, &fc, x);
            if v == 0 && eval_univariate(field, &df, x) == 0 {
                return Err(Error::SingularCurve(format!("f has a repeated root (x = element {x})")));
            }
            Ok(squares[v as usize])
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    // one point at infinity for odd degree
    Ok(affine + 1)
}

struct FieldPoly {
    terms: Vec<(Elem, [u32; 3])>,
}

impl FieldPoly {
    fn new(field: &FiniteField, terms: &[PolyTerm]) -> Self {
        FieldPoly { terms: terms.iter().map(|t| (field.from_int(t.coef), t.exps)).filter(|(c, _)| *c != 0).collect() }
    }

    fn derivative(field: &FiniteField, terms: &[PolyTerm], var: usize) -> Self {
        let d: Vec<PolyTerm> = terms
            .iter()
            .filter(|t| t.exps[var] > 0)
            .map(|t| {
                let mut exps = t.exps;
                exps[var] -= 1;
                PolyTerm { coef: t.coef * t.exps[var] as i64, exps }
            })
            .collect();
        Self::new(field, &d)
    }

    fn eval(&self, field: &FiniteField, pt: [Elem; 3]) -> Elem {
        self.terms.iter().fold(0, |acc, (c, e)| {
            let mut v = *c;
            for i in 0..3 {
                if e[i] > 0 {
                    v = field.mul(v, field.pow(pt[i], e[i] as u64));
                }
            }
            field.add(acc, v)
        })
    }
}

fn count_plane(field: &FiniteField, terms: &[PolyTerm]) -> Result<u64> {
    let poly = FieldPoly::new(field, terms);
    let partials: Vec<FieldPoly> = (0..3).map(|v| FieldPoly::derivative(field, terms, v)).collect();
    let check = |pt: [Elem; 3]| -> Result<u64> {
        if poly.eval(field, pt) != 0 {
            return Ok(0);
        }
        if partials.iter().all(|d| d.eval(field, pt) == 0) {
            return Err(Error::SingularCurve(format!("all partials vanish at [{}:{}:{}]", pt[0], pt[1], pt[2])));
        }
        Ok(1)
    };
    let affine = field
        .elements()
        .into_par_iter()
        .map(|x| field.elements().try_fold(0u64, |acc, y| Ok::<_, Error>(acc + check([x, y, 1])?)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let mut infinity = 0;
    for x in field.elements() {
        infinity += check([x, 1, 0])?;
    }
    infinity += check([1, 0, 0])?;
    Ok(affine + infinity)
}

/// `P(T) = 1 + a_1 T + ... + a_2g T^2g`, the numerator of the zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    q: u64,
    g: usize,
    coeffs: Vec<BigInt>,
}

impl WeilPolynomial {
    /// Checks only the shape (`a_0 = 1`, even degree bound `2g`); use
    /// [`WeilPolynomial::functional_equation_check`] and
    /// [`WeilPolynomial::eigenvalues_numeric`] for the Weil conditions.
    pub fn new(q: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidField(format!("q = {q}")));
        }
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(Error::NotWeil(format!("{} coefficients; expected 2g + 1", coeffs.len())));
        }
        if !coeffs[0].is_one() {
            return Err(Error::NotWeil("constant term must be 1".into()));
        }
        let g = (coeffs.len() - 1) / 2;
        Ok(WeilPolynomial { q, g, coeffs })
    }

    pub fn from_i64(q: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(q, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `a_{2g-i} = q^{g-i} a_i` for all `i`.
    pub fn functional_equation_check(&self) -> bool {
        let g = self.g as i64;
        (0..=2 * self.g).all(|i| {
            let lhs = Rational::from_integer(self.coeff(2 * self.g - i));
            let rhs = q_pow(self.q, g - i as i64) * Rational::from_integer(self.coeff(i));
            lhs == rhs
        })
    }

    /// `p_1..p_n` with `p_k = Σ_j λ_j^k`, by Newton's identities.
    pub fn power_sums(&self, n: usize) -> Vec<BigInt> {
        let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
        p.push(BigInt::from(2 * self.g));
        for k in 1..=n {
            let mut s = -BigInt::from(k) * self.coeff(k);
            for i in 1..k {
                s -= self.coeff(i) * &p[k - i];
            }
            p.push(s);
        }
        p.remove(0);
        p
    }

    /// `Σ_j λ_j^k` for any integer `k`; negative powers use `λ_j^{-1} = λ_{j'}/q`.
    pub fn power_sum(&self, k: i64) -> Rational {
        if k == 0 {
            return Rational::from_integer(BigInt::from(2 * self.g));
        }
        let pk = Rational::from_integer(self.power_sums(k.unsigned_abs() as usize).pop().expect("k ≥ 1"));
        if k > 0 {
            pk
        } else {
            pk * q_pow(self.q, k)
        }
    }

    /// `N_k = q^k + 1 - p_k`.
    pub fn count(&self, k: usize) -> BigInt {
        let pk = self.power_sums(k).pop().unwrap_or_default();
        BigInt::from(self.q).pow(k as u32) + 1 - pk
    }

    pub fn counts(&self, n: usize) -> Vec<BigInt> {
        self.power_sums(n)
            .into_iter()
            .enumerate()
            .map(|(i, pk)| BigInt::from(self.q).pow(i as u32 + 1) + 1 - pk)
            .collect()
    }

    pub fn evaluate(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + Rational::from_integer(c.clone()))
    }

    /// `P(q^-s) / ((1 - q^-s)(1 - q^{1-s}))`.
    pub fn zeta_value(&self, s: i64) -> Result<Rational> {
        if s == 0 || s == 1 {
            return Err(Error::Pole(s));
        }
        let t = q_pow(self.q, -s);
        let one = Rational::one();
        let den = (&one - &t) * (&one - q_pow(self.q, 1 - s));
        Ok(self.evaluate(&t) / den)
    }

    /// Numeric `λ_j`, roots of `T^2g P(1/T)`, ordered so that each `λ` is
    /// followed by the root closest to `q/λ`.
    pub fn eigenvalues_numeric(&self) -> Result<Vec<Complex64>> {
        if self.g == 0 {
            return Ok(Vec::new());
        }
        let reciprocal: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let sq = (self.q as f64).sqrt();
        let mut roots = complex_roots(&reciprocal, sq);
        for r in &roots {
            if (r.norm() - sq).abs() >= WEIL_BOUND_TOL {
                return Err(Error::NotWeil(format!("root {r} has modulus {} ≠ √{}", r.norm(), self.q)));
            }
        }
        roots.sort_by(|a, b| b.im.total_cmp(&a.im).then(b.re.total_cmp(&a.re)));
        let q = self.q as f64;
        let mut used = vec![false; roots.len()];
        let mut out = Vec::with_capacity(roots.len());
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let target = q / roots[i];
            let partner = (0..roots.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm()));
            out.push(roots[i]);
            if let Some(j) = partner {
                used[j] = true;
                out.push(roots[j]);
            }
        }
        Ok(out)
    }

    /// Weil bound check on the numeric roots.
    pub fn lambda_abs_check(&self) -> bool {
        self.eigenvalues_numeric().is_ok()
    }
}

/// `1 + 2T + 2T^2`
impl fmt::Display for WeilPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && i > 0 {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                write!(f, "{}{}", if c.is_negative() { "-" } else { "" }, mag)?;
            } else {
                write!(f, " {sign} ")?;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                match i {
                    1 => write!(f, "T")?,
                    _ => write!(f, "T^{i}")?,
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Recovers `P(T)` from `N_1..N_g` via Newton's identities and the
/// functional equation.
pub fn weil_numerator_from_counts(q: u64, g: usize, counts: &[u64]) -> Result<WeilPolynomial> {
    if counts.len() != g {
        return Err(Error::InconsistentCounts(format!("{} counts given for genus {g}", counts.len())));
    }
    let qb = BigInt::from(q);
    let p: Vec<BigInt> = counts.iter().enumerate().map(|(i, &n)| qb.pow(i as u32 + 1) + 1 - BigInt::from(n)).collect();
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=g {
        let mut s = -p[k - 1].clone();
        for i in 1..k {
            s -= &a[i] * &p[k - i - 1];
        }
        let kb = BigInt::from(k);
        if (&s % &kb) != BigInt::zero() {
            return Err(Error::InconsistentCounts(format!("a_{k} = {s}/{k} is not an integer")));
        }
        a.push(s / kb);
    }
    let mut coeffs = a.clone();
    coeffs.resize(2 * g + 1, BigInt::zero());
    for i in 0..g {
        coeffs[2 * g - i] = qb.pow((g - i) as u32) * &a[i];
    }
    WeilPolynomial::new(q, coeffs)
}

pub fn zeta_value(p: &WeilPolynomial, s: i64) -> Result<Rational> {
    p.zeta_value(s)
}

pub fn functional_equation_check(p: &WeilPolynomial) -> bool {
    p.functional_equation_check()
}

pub fn eigenvalues_numeric(p: &WeilPolynomial) -> Result<Vec<Complex64>> {
    p.eigenvalues_numeric()
}

/// Basis `1, γ_1..γ_2g, [X]` of the curve's cohomology with the geometric
/// Frobenius eigenvalues `1, λ_j, q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCohomologyBasis {
    g: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub label: String,
    pub degree: u32,
    pub eigenvalue: ScalarMonomial,
}

impl CurveCohomologyBasis {
    pub fn new(g: usize) -> Self {
        CurveCohomologyBasis { g }
    }

    pub fn classes(&self) -> Vec<CurveClass> {
        let w = 2 * self.g;
        let mut out = vec![CurveClass { label: "1".into(), degree: 0, eigenvalue: ScalarMonomial::unit(w) }];
        for j in 0..w {
            out.push(CurveClass {
                label: format!("gamma_{}", j + 1),
                degree: 1,
                eigenvalue: ScalarMonomial::lambda(w, j, 1).expect("index in range"),
            });
        }
        out.push(CurveClass {
            label: "[X]".into(),
            degree: 2,
            eigenvalue: ScalarMonomial::q_power(w, HalfIntExp::from_int(1)),
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational;

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_q(q).unwrap()
    }

    #[test]
    fn polynomial_parser() {
        let t = parse_polynomial("x3 + x").unwrap();
        assert_eq!(t, vec![PolyTerm { coef: 1, exps: [3, 0, 0] }, PolyTerm { coef: 1, exps: [1, 0, 0] }]);
        let t = parse_polynomial("2*x^2*y - z^3 + x y z").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], PolyTerm { coef: 2, exps: [2, 1, 0] });
        assert_eq!(t[1], PolyTerm { coef: -1, exps: [0, 0, 3] });
        assert!(parse_polynomial("x + w").is_err());
        assert!(parse_polynomial("").is_err());
    }

    #[test]
    fn elliptic_counts_over_f3_and_f9() {
        let e = CurveModel::parse(pp(3), "y2=x3+x").unwrap();
        assert_eq!(e.genus(), 1);
        assert_eq!(e.count_points(1).unwrap(), 4);
        assert_eq!(e.count_points(2).unwrap(), 16);
    }

    #[test]
    fn conics_have_q_plus_one_points() {
        for q in [3u64, 5, 7, 9] {
            let c = CurveModel::parse(pp(q), "x2 + y2 - z2").unwrap();
            assert_eq!(c.genus(), 0);
            assert_eq!(c.count_points(1).unwrap(), q + 1, "q = {q}");
        }
        // x^2 + y^2 - z^2 is a double line in characteristic 2
        assert!(CurveModel::parse(pp(4), "x2 + y2 - z2").unwrap().count_points(1).is_err());
        for q in [2u64, 4, 8] {
            let c = CurveModel::parse(pp(q), "x y + z2").unwrap();
            assert_eq!(c.count_points(1).unwrap(), q + 1, "q = {q}");
        }
    }

    #[test]
    fn singular_models_are_rejected() {
        // node at the origin
        let e = CurveModel::parse(pp(5), "y2 = x3 + x2").unwrap();
        assert!(matches!(e.count_points(1), Err(Error::SingularCurve(_))));
        let c = CurveModel::parse(pp(5), "x2 - y2").unwrap();
        assert!(matches!(c.count_points(1), Err(Error::SingularCurve(_))));
    }

    #[test]
    fn model_validation() {
        assert!(CurveModel::parse(pp(3), "y2 = x4 + 1").is_err());
        assert!(CurveModel::parse(pp(2), "y2 = x3 + 1").is_err());
        assert!(CurveModel::parse(pp(3), "x2 + y").is_err());
        assert!(CurveModel::parse(pp(3), "y3 = x").is_err());
    }

    #[test]
    fn enumeration_cap() {
        let e = CurveModel::parse(pp(7), "y2=x3+x+1").unwrap();
        assert!(matches!(e.count_points(5), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn numerators_from_counts() {
        let p = weil_numerator_from_counts(3, 1, &[4]).unwrap();
        assert_eq!(p, WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap());
        let p = weil_numerator_from_counts(2, 0, &[]).unwrap();
        assert_eq!(p.coeffs(), &[BigInt::one()]);
        let p = weil_numerator_from_counts(2, 1, &[5]).unwrap();
        assert_eq!(p, WeilPolynomial::from_i64(2, &[1, 2, 2]).unwrap());
        assert!(p.functional_equation_check());
    }

    #[test]
    fn non_integral_counts_are_inconsistent() {
        // p_1 = 0, p_2 = 9 + 1 - 11 = -1 gives a_2 = (-(-1) - 0)/2 = 1/2
        assert!(matches!(weil_numerator_from_counts(3, 2, &[4, 11]), Err(Error::InconsistentCounts(_))));
    }

    #[test]
    fn zeta_values() {
        let e = WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap();
        assert_eq!(e.zeta_value(2).unwrap(), rational(7, 4));
        let line = WeilPolynomial::from_i64(2, &[1]).unwrap();
        assert_eq!(line.zeta_value(2).unwrap(), rational(8, 3));
        let f = WeilPolynomial::from_i64(2, &[1, 2, 2]).unwrap();
        assert_eq!(f.zeta_value(2).unwrap(), rational(13, 3));
        assert_eq!(e.zeta_value(1), Err(Error::Pole(1)));
        assert_eq!(e.zeta_value(0), Err(Error::Pole(0)));
    }

    #[test]
    fn numeric_eigenvalues() {
        let e = WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap();
        let r = e.eigenvalues_numeric().unwrap();
        assert!((r[0] - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
        assert!((r[1] - Complex64::new(0.0, -(3f64.sqrt()))).norm() < 1e-12);
        assert!(WeilPolynomial::from_i64(2, &[1]).unwrap().eigenvalues_numeric().unwrap().is_empty());
        let f = WeilPolynomial::from_i64(2, &[1, 2, 2]).unwrap().eigenvalues_numeric().unwrap();
        assert!((f[0] - Complex64::new(-1.0, 1.0)).norm() < 1e-12);
        assert!((f[1] - Complex64::new(-1.0, -1.0)).norm() < 1e-12);
        // violates the Weil bound
        let bad = WeilPolynomial::from_i64(3, &[1, 5, 3]).unwrap();
        assert!(matches!(bad.eigenvalues_numeric(), Err(Error::NotWeil(_))));
    }

    #[test]
    fn functional_equation() {
        assert!(WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap().functional_equation_check());
        assert!(WeilPolynomial::from_i64(2, &[1, 2, 2]).unwrap().functional_equation_check());
        assert!(!WeilPolynomial::from_i64(3, &[1, 1, 5]).unwrap().functional_equation_check());
    }

    #[test]
    fn power_sums_and_counts() {
        let e = WeilPolynomial::from_i64(3, &[1, 0, 3]).unwrap();
        assert_eq!(e.power_sum(1), Rational::zero());
        assert_eq!(e.power_sum(2), Rational::from_integer((-6).into()));
        assert_eq!(e.power_sum(0), Rational::from_integer(2.into()));
        assert_eq!(e.power_sum(-2), rational(-6, 9));
        let c: Vec<i64> = e.counts(3).iter().map(|n| n.to_i64().unwrap()).collect();
        assert_eq!(c, vec![4, 16, 28]);
    }

    #[test]
    fn cohomology_basis() {
        let b = CurveCohomologyBasis::new(2).classes();
        assert_eq!(b.len(), 6);
        assert_eq!(b.iter().filter(|c| c.degree == 1).count(), 4);
        assert_eq!(b[5].eigenvalue, ScalarMonomial::q_power(4, HalfIntExp::from_int(1)));
    }
}
