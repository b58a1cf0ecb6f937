//! Brute-force oracles that share no code path with the fast routines.

use num_complex::Complex64;

use crate::cohomology::{GeneratorKind, GeneratorSpec};
use crate::curves::WeilPolynomial;
use crate::error::Result;
use crate::frobenius::DiagonalAction;
use crate::scalars::{ScalarMonomial, ScalarSum};
use crate::traces::SignMode;

fn enumerate<T: Clone>(
    gens: &[(GeneratorSpec, T)],
    max_degree: usize,
    degree: usize,
    acc: T,
    mul: &impl Fn(&T, &T) -> T,
    visit: &mut impl FnMut(usize, &T),
) {
    let Some(((g, x), rest)) = gens.split_first() else {
        visit(degree, &acc);
        return;
    };
    let d = g.degree as usize;
    let max_power = if g.is_even() { usize::MAX } else { 1 };
    let mut cur = acc;
    let mut deg = degree;
    let mut k = 0;
    loop {
        enumerate(rest, max_degree, deg, cur.clone(), mul, visit);
        k += 1;
        deg += d;
        if k > max_power || deg > max_degree || d == 0 {
            break;
        }
        cur = mul(&cur, x);
    }
}

/// Dimension of each degree by listing every monomial `a^α f^κ b^S`.
pub fn enumerate_monomials(gens: &[GeneratorSpec], max_degree: usize) -> Vec<u64> {
    let tagged: Vec<(GeneratorSpec, ())> = gens.iter().map(|g| (*g, ())).collect();
    let mut dims = vec![0u64; max_degree + 1];
    enumerate(&tagged, max_degree, 0, (), &|_, _| (), &mut |d, _| dims[d] += 1);
    dims
}

/// Degreewise traces by summing the eigenvalue of every monomial.
pub fn enumerate_trace(action: &DiagonalAction, max_degree: usize) -> Result<Vec<ScalarSum>> {
    let w = action.context().width();
    let mut terms: Vec<Vec<ScalarMonomial>> = vec![Vec::new(); max_degree + 1];
    enumerate(
        action.entries(),
        max_degree,
        0,
        ScalarMonomial::unit(w),
        &|a, b| a.mul(b).expect("same width"),
        &mut |d, m| terms[d].push(m.clone()),
    );
    terms.into_iter().map(|t| ScalarSum::from_terms(w, t)).collect()
}

/// `Σ_{S ≠ ∅} ∏_{b ∈ S} (∓β_b)` over all subsets of the odd generators.
pub fn subset_exterior_sum(action: &DiagonalAction, sign: SignMode) -> Result<ScalarSum> {
    let w = action.context().width();
    let betas: Vec<ScalarMonomial> = action
        .entries()
        .iter()
        .filter(|(g, _)| g.kind == GeneratorKind::B)
        .map(|(_, m)| match sign {
            SignMode::Signed => {
                ScalarMonomial::new(-m.coef().clone(), m.zeta(), m.qexp(), m.lam().to_vec()).expect("nonzero")
            }
            SignMode::Unsigned => m.clone(),
        })
        .collect();
    let mut terms = Vec::with_capacity(1 << betas.len());
    for mask in 1u64..(1u64 << betas.len()) {
        let mut prod = ScalarMonomial::unit(w);
        for (k, b) in betas.iter().enumerate() {
            if mask >> k & 1 == 1 {
                prod = prod.mul(b)?;
            }
        }
        terms.push(prod);
    }
    ScalarSum::from_terms(w, terms)
}

/// `∏_j (1 - c λ_j^e)` from numeric roots.
pub fn numeric_power_product(p: &WeilPolynomial, e: i64, c: Complex64) -> Result<Complex64> {
    let roots = p.eigenvalues_numeric()?;
    Ok(roots.iter().map(|l| Complex64::new(1.0, 0.0) - c * l.powi(e as i32)).product())
}
