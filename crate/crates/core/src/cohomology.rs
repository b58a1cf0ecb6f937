//! Generators and Betti numbers of the cohomology of a component of the
//! moduli stack, which is free on even classes `a_i`, `f_i` and odd classes
//! `b_i^(j)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    A,
    F,
    B,
    C,
}

/// One generator; `i` and `j` are 1-based, `j` only for `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub i: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(rename = "deg")]
    pub degree: u32,
}

impl GeneratorSpec {
    pub fn is_even(&self) -> bool {
        self.kind != GeneratorKind::B
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GeneratorKind::A => "a",
            GeneratorKind::F => "f",
            GeneratorKind::B => "b",
            GeneratorKind::C => "c",
        };
        match self.j {
            Some(j) => write!(f, "{k}_{}^({j})", self.i),
            None => write!(f, "{k}_{}", self.i),
        }
    }
}

/// Names the connected component; the generator degrees do not depend on it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLabel(pub String);

/// `a_1..a_r`, then `f_1..f_r`, then `b_i^(j)` ordered by `i` then `j`.
pub fn generators(group: &GroupData, genus: usize) -> Result<Vec<GeneratorSpec>> {
    let d = group.degrees();
    let mut out: Vec<GeneratorSpec> = d
        .iter()
        .enumerate()
        .map(|(i, &d)| GeneratorSpec { kind: GeneratorKind::A, i: i + 1, j: None, degree: 2 * d })
        .collect();
    for (i, &di) in d.iter().enumerate() {
        if !group.has_f(i) {
            continue;
        }
        if di < 2 {
            return Err(Error::Degenerate(format!("f_{} would sit in degree {}", i + 1, 2 * di - 2)));
        }
        out.push(GeneratorSpec { kind: GeneratorKind::F, i: i + 1, j: None, degree: 2 * di - 2 });
    }
    for (i, &di) in d.iter().enumerate() {
        for j in 1..=2 * genus {
            out.push(GeneratorSpec { kind: GeneratorKind::B, i: i + 1, j: Some(j), degree: 2 * di - 1 });
        }
    }
    Ok(out)
}

/// Generators `c_i` in degree `2 d_i` of the classifying stack.
pub fn classifying_generators(group: &GroupData) -> Vec<GeneratorSpec> {
    group
        .degrees()
        .iter()
        .enumerate()
        .map(|(i, &d)| GeneratorSpec { kind: GeneratorKind::C, i: i + 1, j: None, degree: 2 * d })
        .collect()
}

/// Integer power series truncated at `t^M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSeries {
    coeffs: Vec<u64>,
}

impl IntSeries {
    pub fn one(max_degree: usize) -> Self {
        let mut coeffs = vec![0; max_degree + 1];
        coeffs[0] = 1;
        IntSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<u64>) -> Self {
        IntSeries { coeffs }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Multiplies by `1/(1 - t^deg)`.
    pub fn mul_geometric(&mut self, deg: u32) -> Result<()> {
        let d = deg as usize;
        if d == 0 {
            return Err(Error::Degenerate("polynomial generator in degree 0".into()));
        }
        for m in d..self.coeffs.len() {
            self.coeffs[m] = self.coeffs[m]
                .checked_add(self.coeffs[m - d])
                .ok_or_else(|| Error::Overflow(format!("Betti number in degree {m}")))?;
        }
        Ok(())
    }

    /// Multiplies by `1 + t^deg`.
    pub fn mul_exterior(&mut self, deg: u32) -> Result<()> {
        let d = deg as usize;
        if d == 0 {
            return Err(Error::Degenerate("exterior generator in degree 0".into()));
        }
        for m in (d..self.coeffs.len()).rev() {
            self.coeffs[m] = self.coeffs[m]
                .checked_add(self.coeffs[m - d])
                .ok_or_else(|| Error::Overflow(format!("Betti number in degree {m}")))?;
        }
        Ok(())
    }

    pub fn convolve(&self, other: &IntSeries) -> Result<IntSeries> {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                let prod = a.checked_mul(b).ok_or_else(|| Error::Overflow("series product".into()))?;
                out[i + j] = out[i + j].checked_add(prod).ok_or_else(|| Error::Overflow("series product".into()))?;
            }
        }
        Ok(IntSeries { coeffs: out })
    }
}

/// Dimension generating function of the free graded algebra on `gens`.
pub fn series_of_generators(gens: &[GeneratorSpec], max_degree: usize) -> Result<IntSeries> {
    let mut s = IntSeries::one(max_degree);
    for g in gens {
        if g.is_even() {
            s.mul_geometric(g.degree)?;
        } else {
            s.mul_exterior(g.degree)?;
        }
    }
    Ok(s)
}

pub fn poincare_series(group: &GroupData, genus: usize, max_degree: usize) -> Result<IntSeries> {
    series_of_generators(&generators(group, genus)?, max_degree)
}

pub fn classifying_poincare_series(group: &GroupData, max_degree: usize) -> Result<IntSeries> {
    series_of_generators(&classifying_generators(group), max_degree)
}

pub fn betti(group: &GroupData, genus: usize, m: usize) -> Result<u64> {
    Ok(poincare_series(group, genus, m)?.coeffs[m])
}
