//! The oracle suite run by `bunfrob verify`.

use num_complex::Complex64;
use num_traits::Signed;

use crate::cohomology::{generators, poincare_series};
use crate::curves::{weil_numerator_from_counts, CurveModel, WeilPolynomial};
use crate::error::{Error, Result};
use crate::expr::parse_action_expr;
use crate::field::PrimePower;
use crate::frobenius::{base_action, ActionContext, DiagonalAction, FrobeniusKind};
use crate::groups::{brute_force_count_sl, parse_group, steinberg_count};
use crate::oracles::{enumerate_monomials, numeric_power_product, subset_exterior_sum};
use crate::scalars::{rational, rational_to_f64, Rational};
use crate::traces::{
    closed_form_trace, convergence_report, error_bound, evaluate_symmetric, generator_truncated_trace,
    lambda_power_product, SignMode, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn pp(q: u64) -> PrimePower {
    PrimePower::from_q(q).expect("prime power")
}

fn action(expr: &str, group: &str, genus: usize, q: u64) -> Result<DiagonalAction> {
    let ctx = ActionContext::bundles(parse_group(group)?, genus, pp(q));
    parse_action_expr(expr)?.to_action(&ctx)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(msg()))
    }
}

fn rational_value(c: &crate::cyclotomic::Cyclotomic) -> Result<Rational> {
    c.as_rational().ok_or_else(|| Error::Internal(format!("{c} is not rational")))
}

/// The elliptic curve `y^2 = x^3 + x` over `F_3` and the genus-2 curve
/// `y^2 = x^5 - x` over `F_3`, from brute-force counts.
pub fn test_curves() -> Result<Vec<WeilPolynomial>> {
    let e = CurveModel::parse(pp(3), "y2=x3+x")?.weil_polynomial()?;
    let h = CurveModel::parse(pp(3), "y2=x5-x")?.weil_polynomial()?;
    let f = weil_numerator_from_counts(2, 1, &[5])?;
    Ok(vec![e, f, h])
}

fn steinberg() -> Result<String> {
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
        let s = rational_value(&steinberg_count(&parse_group(&format!("A{}", n - 1))?, pp(q))?)?;
        let b = brute_force_count_sl(n, pp(q))?;
        ensure(s == Rational::from_integer(b.into()), || format!("SL_{n}(F_{q}): {s} vs {b}"))?;
    }
    Ok("SL_2/F_2, SL_2/F_3, SL_3/F_2".into())
}

fn weil() -> Result<String> {
    let model = CurveModel::parse(pp(3), "y2=x3+x")?;
    let p = model.weil_polynomial()?;
    ensure(p == WeilPolynomial::from_i64(3, &[1, 0, 3])?, || format!("P = {p}"))?;
    p.eigenvalues_numeric()?;
    let n2 = model.count_points(2)?;
    ensure(p.count(2) == n2.into(), || format!("N_2 = {} vs {n2}", p.count(2)))?;
    Ok(format!("P = {p}, N_2 = {n2}"))
}

fn inverses() -> Result<String> {
    for group in ["A1", "A2", "G2", "Gm"] {
        for genus in 0..=2 {
            let ctx = ActionContext::bundles(parse_group(group)?, genus, pp(3));
            let b = |k| base_action(k, &ctx);
            for (x, y) in [
                (FrobeniusKind::InducedArithmetic, FrobeniusKind::InducedGeometric),
                (FrobeniusKind::AbsoluteArithmetic, FrobeniusKind::AbsoluteGeometric),
            ] {
                ensure(b(x)?.compose(&b(y)?)?.is_identity(), || format!("{x} o {y} on {group}, g = {genus}"))?;
            }
        }
    }
    Ok("A1, A2, G2, Gm at g = 0, 1, 2".into())
}

fn betti() -> Result<String> {
    for group in ["A1", "A2", "G2"] {
        let g = parse_group(group)?;
        for genus in 0..=2 {
            let fast = poincare_series(&g, genus, 12)?;
            let slow = enumerate_monomials(&generators(&g, genus)?, 12);
            ensure(fast.coeffs() == slow.as_slice(), || format!("{group}, g = {genus}"))?;
        }
    }
    Ok("A1, A2, G2 at g = 0, 1, 2 through degree 12".into())
}

fn convergence() -> Result<String> {
    let p = WeilPolynomial::from_i64(3, &[1, 0, 3])?;
    let a = action("frob", "A1", 1, 3)?;
    let r = closed_form_trace(&a, &p, 40)?;
    let value = rational_value(r.closed_form.value.as_ref().ok_or_else(|| Error::Internal("no closed form".into()))?)?;
    ensure(value == rational(7, 4), || format!("closed form {value}"))?;
    for m in [10, 20, 40] {
        let gap = (rational_value(&r.partial_sums[m])? - &value).abs();
        let bound = error_bound(&a, m).ok_or_else(|| Error::Internal("no error bound".into()))?;
        ensure(gap <= bound, || format!("|S_{m} - 7/4| exceeds the bound"))?;
    }
    let gap = rational_to_f64(&(rational_value(&r.partial_sums[40])? - &value).abs());
    ensure(gap < 1e-6, || format!("|S_40 - 7/4| = {gap:e}"))?;
    Ok(format!("closed form 7/4, |S_40 - 7/4| = {gap:.2e}"))
}

fn zeta_product() -> Result<String> {
    for p in &test_curves()?[..2] {
        for group in ["A1", "A2", "G2"] {
            let g = parse_group(group)?;
            let a = action("frob", group, p.genus(), p.q())?;
            let r = closed_form_trace(&a, p, 0)?;
            let value =
                rational_value(r.closed_form.value.as_ref().ok_or_else(|| Error::Internal("diverged".into()))?)?;
            let expected = g
                .degrees()
                .iter()
                .try_fold(Rational::from_integer(1.into()), |acc, &d| p.zeta_value(d as i64).map(|z| acc * z))?;
            ensure(value == expected, || format!("{group} over {p}: {value} vs {expected}"))?;
        }
    }
    Ok("A1, A2, G2 over two curves".into())
}

fn truncated() -> Result<String> {
    let curves = test_curves()?;
    for p in [&curves[0], &curves[2]] {
        for group in ["A1", "A2", "G2"] {
            let g = parse_group(group)?;
            if g.rank() * p.genus() > 4 {
                continue;
            }
            for n in 1..=3i64 {
                let a = action(&format!("psi^{n}"), group, p.genus(), p.q())?;
                for sign in [SignMode::Signed, SignMode::Unsigned] {
                    let t = generator_truncated_trace(&a, p, sign)?;
                    let r = Rational::from_integer((g.rank() as i64).into());
                    ensure(rational_value(&t.a_part)? == r, || "a-part".into())?;
                    ensure(rational_value(&t.f_part)? == r * crate::scalars::q_pow(p.q(), -n), || "f-part".into())?;
                    let brute = evaluate_symmetric(&subset_exterior_sum(&a, sign)?, p)?;
                    ensure(brute == t.exterior_part, || format!("{group}, g = {}, n = {n}, {sign:?}", p.genus()))?;
                }
            }
        }
    }
    Ok("psi^1..3 on A1, A2, G2 with rg <= 4, both sign modes".into())
}

fn verdicts() -> Result<String> {
    for group in ["A1", "A2", "G2", "B2", "D4"] {
        for n in 1..=3 {
            let r = convergence_report(&action(&format!("psi^{n}"), group, 1, 3)?);
            let rank = parse_group(group)?.rank();
            ensure(matches!(&r.verdict, Verdict::Pole { generators } if generators.len() == rank), || {
                format!("psi^{n} on {group}: {}", r.verdict.name())
            })?;
        }
        for s in 1..=3 {
            for n in 0..=4 {
                let r = convergence_report(&action(&format!("frob^{s} o psi^{n}"), group, 1, 3)?);
                ensure(r.verdict.converges(), || format!("frob^{s} o psi^{n} on {group}"))?;
            }
        }
    }
    Ok("psi^n poles, frob^s o psi^n convergence".into())
}

fn newton() -> Result<String> {
    let mut worst: f64 = 0.0;
    for p in test_curves()? {
        for e in (-4..=4).filter(|&e| e != 0) {
            for c in [rational(1, 1), rational(-2, 3), rational(5, 7)] {
                let exact = rational_to_f64(&lambda_power_product(&p, e, &c));
                let numeric = numeric_power_product(&p, e, Complex64::new(rational_to_f64(&c), 0.0))?;
                let err = (numeric - exact).norm() / exact.abs().max(1.0);
                worst = worst.max(err);
                ensure(err < 1e-9, || format!("e = {e}, c = {c}, P = {p}: relative error {err:e}"))?;
            }
        }
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

type CheckFn = fn() -> Result<String>;

/// Runs every check; failures carry the first mismatch found.
pub fn run_all() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 9] = [
        ("steinberg counts", steinberg),
        ("weil eigenvalues", weil),
        ("frobenius inverses", inverses),
        ("betti numbers", betti),
        ("trace convergence", convergence),
        ("zeta products", zeta_product),
        ("truncated traces", truncated),
        ("convergence verdicts", verdicts),
        ("newton identities", newton),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => Check { name, passed: true, detail },
            Err(e) => Check { name, passed: false, detail: e.to_string() },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_check_passes() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
