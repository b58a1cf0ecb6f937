//! Group descriptors: rank, Weyl degrees, dimension and twist data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField, PrimePower};
use crate::scalars::{HalfIntExp, Rational, RootOfUnity, ScalarMonomial, ScalarSum};

/// Cap on the number of matrices enumerated by [`brute_force_count_sl`].
pub const MATRIX_CAP: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
    Gm,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E6 => "E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
            Series::F4 => "F4",
            Series::G2 => "G2",
            Series::Gm => "Gm",
        }
    }

    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Series::E6 => Some(6),
            Series::E7 => Some(7),
            Series::E8 => Some(8),
            Series::F4 => Some(4),
            Series::G2 => Some(2),
            Series::Gm => Some(1),
            _ => None,
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Series::D => 2,
            s => s.fixed_rank().unwrap_or(1),
        }
    }

    /// Degrees of the fundamental Weyl invariants.
    pub fn degrees(self, rank: usize) -> Vec<u32> {
        let n = rank as u32;
        match self {
            Series::A => (2..=n + 1).collect(),
            Series::B | Series::C => (1..=n).map(|k| 2 * k).collect(),
            Series::D => (1..n).map(|k| 2 * k).chain(std::iter::once(n)).collect(),
            Series::E6 => vec![2, 5, 6, 8, 9, 12],
            Series::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            Series::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            Series::F4 => vec![2, 6, 8, 12],
            Series::G2 => vec![2, 6],
            Series::Gm => vec![1],
        }
    }

    /// Dimension of the group, from the standard classification table.
    pub fn dimension(self, rank: usize) -> u64 {
        let n = rank as u64;
        match self {
            Series::A => n * (n + 2),
            Series::B | Series::C => n * (2 * n + 1),
            Series::D => n * (2 * n - 1),
            Series::E6 => 78,
            Series::E7 => 133,
            Series::E8 => 248,
            Series::F4 => 52,
            Series::G2 => 14,
            Series::Gm => 1,
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Series::A,
            "B" => Series::B,
            "C" => Series::C,
            "D" => Series::D,
            "E6" => Series::E6,
            "E7" => Series::E7,
            "E8" => Series::E8,
            "F4" => Series::F4,
            "G2" => Series::G2,
            "Gm" => Series::Gm,
            _ => return Err(Error::InvalidGroup(format!("unknown series {s:?}"))),
        })
    }
}

/// A simple factor of a (possibly product) group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub series: Series,
    pub rank: usize,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.series.fixed_rank() {
            Some(_) => write!(f, "{}", self.series.name()),
            None => write!(f, "{}{}", self.series.name(), self.rank),
        }
    }
}

/// Rank, degrees, dimension and twists of a group; products concatenate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    factors: Vec<Factor>,
    degrees: Vec<u32>,
    dimension: u64,
    eps: Vec<RootOfUnity>,
    include_f: Vec<bool>,
}

impl GroupData {
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn eps(&self) -> &[RootOfUnity] {
        &self.eps
    }

    /// Whether the `i`-th index (0-based) carries an `f` generator.
    pub fn has_f(&self, i: usize) -> bool {
        self.include_f[i]
    }

    pub fn include_f(&self) -> bool {
        self.include_f.iter().all(|&b| b)
    }

    pub fn is_semisimple(&self) -> bool {
        self.factors.iter().all(|f| f.series != Series::Gm)
    }

    pub fn is_split(&self) -> bool {
        self.eps.iter().all(|e| e.is_one())
    }

    pub fn label(&self) -> String {
        self.factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
    }

    pub fn product(&self, other: &GroupData) -> GroupData {
        fn cat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
            [a, b].concat()
        }
        GroupData {
            factors: cat(&self.factors, &other.factors),
            degrees: cat(&self.degrees, &other.degrees),
            dimension: self.dimension + other.dimension,
            eps: cat(&self.eps, &other.eps),
            include_f: cat(&self.include_f, &other.include_f),
        }
    }

    pub fn with_eps(mut self, eps: Vec<RootOfUnity>) -> Result<Self> {
        if eps.len() != self.rank() {
            return Err(Error::InvalidGroup(format!("{} twist values for rank {}", eps.len(), self.rank())));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        let (series, rank) = match self.factors.as_slice() {
            [f] => (f.series.name().to_string(), f.rank),
            _ => (self.label(), self.rank()),
        };
        GroupDescriptor {
            series,
            rank,
            degrees: self.degrees.clone(),
            dimension: self.dimension,
            eps: self.eps.clone(),
            include_f: self.include_f(),
        }
    }
}

/// JSON shape of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupDescriptor {
    pub series: String,
    pub rank: usize,
    pub degrees: Vec<u32>,
    pub dimension: u64,
    pub eps: Vec<RootOfUnity>,
    pub include_f: bool,
}

pub fn group_from_type(series: Series, rank: usize, eps_override: Option<Vec<RootOfUnity>>) -> Result<GroupData> {
    let valid = match series.fixed_rank() {
        Some(r) => rank == r,
        None => rank >= series.min_rank(),
    };
    if !valid {
        return Err(Error::InvalidGroup(format!("rank {rank} is not valid for series {}", series.name())));
    }
    let degrees = series.degrees(rank);
    let g = GroupData {
        factors: vec![Factor { series, rank }],
        eps: vec![RootOfUnity::ONE; degrees.len()],
        include_f: vec![series != Series::Gm; degrees.len()],
        dimension: series.dimension(rank),
        degrees,
    };
    match eps_override {
        Some(eps) => g.with_eps(eps),
        None => Ok(g),
    }
}

/// Parses `A1`, `G2`, `Gm`, `D4` or products such as `A1xG2`.
pub fn parse_group(s: &str) -> Result<GroupData> {
    let mut out: Option<GroupData> = None;
    for part in s.split('x') {
        let part = part.trim();
        let split = part.find(|c: char| c.is_ascii_digit()).unwrap_or(part.len());
        let (name, digits) = part.split_at(split);
        let factor = match (name, digits) {
            ("Gm", "") => group_from_type(Series::Gm, 1, None)?,
            ("E" | "F" | "G", _) => group_from_type(Series::from_str(part)?, digits.parse().unwrap_or(0), None)?,
            ("A" | "B" | "C" | "D", d) if !d.is_empty() => {
                let rank = d.parse().map_err(|_| Error::InvalidGroup(format!("bad rank in {part:?}")))?;
                group_from_type(Series::from_str(name)?, rank, None)?
            }
            _ => return Err(Error::InvalidGroup(format!("cannot parse group {part:?}"))),
        };
        out = Some(match out {
            None => factor,
            Some(g) => g.product(&factor),
        });
    }
    out.ok_or_else(|| Error::InvalidGroup("empty group".into()))
}

/// The factors `1 - ε_i q^{-d_i}` of the Steinberg formula.
pub fn steinberg_factors(group: &GroupData) -> Vec<ScalarSum> {
    group
        .degrees
        .iter()
        .zip(&group.eps)
        .map(|(&d, &e)| {
            let t = ScalarMonomial::root(0, e).mul(&ScalarMonomial::q_power(0, HalfIntExp::from_int(-(d as i64))));
            ScalarSum::one(0).sub(&ScalarSum::from_monomial(t.expect("width 0"))).expect("width 0")
        })
        .collect()
}

/// `#G(F_q) = q^dim ∏ (1 - ε_i q^{-d_i})`, in `Q(ζ)` when twists are present.
pub fn steinberg_count(group: &GroupData, q: PrimePower) -> Result<Cyclotomic> {
    let mut acc =
        Cyclotomic::from_rational(Rational::from_integer(num_bigint::BigInt::from(q.q()).pow(group.dimension as u32)));
    for f in steinberg_factors(group) {
        acc = acc.mul(&Cyclotomic::from_sum(&f, q.q())?);
    }
    Ok(acc)
}

fn determinant(field: &FiniteField, m: &mut [Elem], n: usize) -> Elem {
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return field.zero();
        };
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = field.neg(det);
        }
        let pv = m[col * n + col];
        det = field.mul(det, pv);
        let inv = field.inv(pv).expect("nonzero pivot");
        for r in col + 1..n {
            let factor = field.mul(m[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            for k in col..n {
                let v = field.mul(factor, m[col * n + k]);
                m[r * n + k] = field.sub(m[r * n + k], v);
            }
        }
    }
    det
}

/// Counts `n × n` matrices over `F_q` with determinant 1 by exhaustion.
pub fn brute_force_count_sl(n: usize, q: PrimePower) -> Result<u64> {
    let size = q.q() as u128;
    let needed = size.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if n == 0 || needed > MATRIX_CAP {
        return Err(Error::EnumerationCap { needed, cap: MATRIX_CAP });
    }
    let field = FiniteField::extension(q, 1)?;
    let qs = q.q();
    let count = (0..needed as u64)
        .into_par_iter()
        .map_init(
            || vec![0 as Elem; n * n],
            |m, mut code| {
                for slot in m.iter_mut() {
                    *slot = (code % qs) as Elem;
                    code /= qs;
                }
                u64::from(determinant(&field, m, n) == 1)
            },
        )
        .sum();
    Ok(count)
}
