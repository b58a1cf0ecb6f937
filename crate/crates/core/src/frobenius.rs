//! The four Frobenius endomorphisms as diagonal eigenvalue tables on the
//! generators, closed under composition, iteration and inversion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cohomology::{classifying_generators, generators, GeneratorKind, GeneratorSpec};
use crate::error::{Error, Result};
use crate::field::PrimePower;
use crate::groups::GroupData;
use crate::scalars::{HalfIntExp, Rational, RootOfUnity, ScalarMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrobeniusKind {
    /// `ψ`
    InducedArithmetic,
    /// `Frob`
    AbsoluteArithmetic,
    /// `φ`
    InducedGeometric,
    /// `F̄`
    AbsoluteGeometric,
}

impl FrobeniusKind {
    pub const ALL: [FrobeniusKind; 4] = [
        FrobeniusKind::InducedArithmetic,
        FrobeniusKind::AbsoluteArithmetic,
        FrobeniusKind::InducedGeometric,
        FrobeniusKind::AbsoluteGeometric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrobeniusKind::InducedArithmetic => "psi",
            FrobeniusKind::AbsoluteArithmetic => "frob",
            FrobeniusKind::InducedGeometric => "phi",
            FrobeniusKind::AbsoluteGeometric => "fbar",
        }
    }

    pub fn is_induced(self) -> bool {
        matches!(self, FrobeniusKind::InducedArithmetic | FrobeniusKind::InducedGeometric)
    }
}

impl FromStr for FrobeniusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FrobeniusKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown Frobenius {s:?}") })
    }
}

impl fmt::Display for FrobeniusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// The moduli stack of bundles over a curve of the given genus.
    Bundles {
        genus: usize,
    },
    Classifying,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionContext {
    pub group: GroupData,
    pub space: Space,
    pub q: PrimePower,
}

impl ActionContext {
    pub fn bundles(group: GroupData, genus: usize, q: PrimePower) -> Self {
        ActionContext { group, space: Space::Bundles { genus }, q }
    }

    pub fn classifying(group: GroupData, q: PrimePower) -> Self {
        ActionContext { group, space: Space::Classifying, q }
    }

    pub fn genus(&self) -> usize {
        match self.space {
            Space::Bundles { genus } => genus,
            Space::Classifying => 0,
        }
    }

    /// Length of the λ-exponent vectors, `2g`.
    pub fn width(&self) -> usize {
        2 * self.genus()
    }

    pub fn generators(&self) -> Result<Vec<GeneratorSpec>> {
        match self.space {
            Space::Bundles { genus } => generators(&self.group, genus),
            Space::Classifying => Ok(classifying_generators(&self.group)),
        }
    }
}

/// A generator → eigenvalue table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalAction {
    context: ActionContext,
    entries: Vec<(GeneratorSpec, ScalarMonomial)>,
}

fn eps_q(width: usize, eps: RootOfUnity, qexp: i64) -> ScalarMonomial {
    ScalarMonomial::new(Rational::from_integer(1.into()), eps, HalfIntExp::from_int(qexp), vec![0; width])
        .expect("nonzero coefficient")
}

impl DiagonalAction {
    pub fn identity(context: &ActionContext) -> Result<Self> {
        let w = context.width();
        let entries = context.generators()?.into_iter().map(|g| (g, ScalarMonomial::unit(w))).collect();
        Ok(DiagonalAction { context: context.clone(), entries })
    }

    pub fn context(&self) -> &ActionContext {
        &self.context
    }

    pub fn entries(&self) -> &[(GeneratorSpec, ScalarMonomial)] {
        &self.entries
    }

    pub fn eigenvalue(&self, gen: &GeneratorSpec) -> Option<&ScalarMonomial> {
        self.entries.iter().find(|(g, _)| g == gen).map(|(_, m)| m)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|(_, m)| m.is_one())
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.context != other.context {
            return Err(Error::Context("actions live on different stacks".into()));
        }
        Ok(())
    }

    /// Generatorwise product; diagonal actions commute, so the order of
    /// the arguments does not matter.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|((g, a), (_, b))| Ok((*g, a.mul(b)?)))
            .collect::<Result<_>>()?;
        Ok(DiagonalAction { context: self.context.clone(), entries })
    }

    pub fn iterate(&self, n: i64) -> Self {
        DiagonalAction {
            context: self.context.clone(),
            entries: self.entries.iter().map(|(g, m)| (*g, m.pow(n))).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.iterate(-1)
    }
}

/// The eigenvalue tables of the four Frobenius kinds on the bundle stack.
pub fn base_action(kind: FrobeniusKind, context: &ActionContext) -> Result<DiagonalAction> {
    if context.space == Space::Classifying {
        return classifying_action(kind, context);
    }
    let w = context.width();
    let degrees = context.group.degrees();
    let eps = context.group.eps();
    let entries = context
        .generators()?
        .into_iter()
        .map(|g| {
            let i = g.i - 1;
            let d = degrees[i] as i64;
            let e = eps[i];
            let lam = |sign: i64| ScalarMonomial::lambda(w, g.j.expect("b generators carry j") - 1, sign);
            let m = match (kind, g.kind) {
                (FrobeniusKind::InducedArithmetic, GeneratorKind::A) => ScalarMonomial::unit(w),
                (FrobeniusKind::InducedArithmetic, GeneratorKind::B) => lam(-1)?,
                (FrobeniusKind::InducedArithmetic, GeneratorKind::F) => eps_q(w, RootOfUnity::ONE, -1),
                (FrobeniusKind::InducedGeometric, GeneratorKind::A) => ScalarMonomial::unit(w),
                (FrobeniusKind::InducedGeometric, GeneratorKind::B) => lam(1)?,
                (FrobeniusKind::InducedGeometric, GeneratorKind::F) => eps_q(w, RootOfUnity::ONE, 1),
                (FrobeniusKind::AbsoluteArithmetic, GeneratorKind::A) => eps_q(w, e, -d),
                (FrobeniusKind::AbsoluteArithmetic, GeneratorKind::B) => lam(1)?.mul(&eps_q(w, e, -d))?,
                (FrobeniusKind::AbsoluteArithmetic, GeneratorKind::F) => eps_q(w, e, 1 - d),
                (FrobeniusKind::AbsoluteGeometric, GeneratorKind::A) => eps_q(w, e.inv(), d),
                (FrobeniusKind::AbsoluteGeometric, GeneratorKind::B) => lam(-1)?.mul(&eps_q(w, e.inv(), d))?,
                (FrobeniusKind::AbsoluteGeometric, GeneratorKind::F) => eps_q(w, e.inv(), d - 1),
                (_, GeneratorKind::C) => return Err(Error::Internal("c generator on the bundle stack".into())),
            };
            Ok((g, m))
        })
        .collect::<Result<_>>()?;
    Ok(DiagonalAction { context: context.clone(), entries })
}

/// `c_i ↦ ε_i q^{-d_i}` (arithmetic) or `ε_i^{-1} q^{d_i}` (geometric).
pub fn classifying_action(kind: FrobeniusKind, context: &ActionContext) -> Result<DiagonalAction> {
    if kind.is_induced() {
        return Err(Error::Context(format!("{kind} needs a curve; the classifying stack has none")));
    }
    let context = ActionContext::classifying(context.group.clone(), context.q);
    let degrees = context.group.degrees();
    let eps = context.group.eps();
    let entries = classifying_generators(&context.group)
        .into_iter()
        .map(|g| {
            let d = degrees[g.i - 1] as i64;
            let e = eps[g.i - 1];
            let m = match kind {
                FrobeniusKind::AbsoluteArithmetic => eps_q(0, e, -d),
                _ => eps_q(0, e.inv(), d),
            };
            (g, m)
        })
        .collect();
    Ok(DiagonalAction { context, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group;

    fn ctx(group: &str, genus: usize) -> ActionContext {
        ActionContext::bundles(parse_group(group).unwrap(), genus, PrimePower::from_q(3).unwrap())
    }

    fn spec(kind: GeneratorKind, i: usize, j: Option<usize>, degree: u32) -> GeneratorSpec {
        GeneratorSpec { kind, i, j, degree }
    }

    #[test]
    fn psi_on_f_and_frob_on_a() {
        let c = ctx("A1", 1);
        let psi = base_action(FrobeniusKind::InducedArithmetic, &c).unwrap();
        assert_eq!(psi.eigenvalue(&spec(GeneratorKind::F, 1, None, 2)).unwrap(), &eps_q(2, RootOfUnity::ONE, -1));
        let frob = base_action(FrobeniusKind::AbsoluteArithmetic, &c).unwrap();
        assert_eq!(frob.eigenvalue(&spec(GeneratorKind::A, 1, None, 4)).unwrap().to_string(), "1 * q^(-4/2)");
    }

    #[test]
    fn fbar_on_b_with_twist() {
        let w = RootOfUnity::new(3, 1).unwrap();
        let g = parse_group("A1").unwrap().with_eps(vec![w]).unwrap();
        let c = ActionContext::bundles(g, 1, PrimePower::from_q(4).unwrap());
        let fbar = base_action(FrobeniusKind::AbsoluteGeometric, &c).unwrap();
        let m = fbar.eigenvalue(&spec(GeneratorKind::B, 1, Some(2), 3)).unwrap();
        assert_eq!(m.zeta(), w.inv());
        assert_eq!(m.qexp(), HalfIntExp::from_int(2));
        assert_eq!(m.lam(), &[0, -1]);
    }

    #[test]
    fn mutual_inverses() {
        for group in ["A1", "A2", "G2", "Gm"] {
            for genus in 0..=2 {
                let c = ctx(group, genus);
                let b = |k| base_action(k, &c).unwrap();
                assert!(b(FrobeniusKind::InducedArithmetic)
                    .compose(&b(FrobeniusKind::InducedGeometric))
                    .unwrap()
                    .is_identity());
                assert!(b(FrobeniusKind::AbsoluteArithmetic)
                    .compose(&b(FrobeniusKind::AbsoluteGeometric))
                    .unwrap()
                    .is_identity());
                assert_eq!(b(FrobeniusKind::AbsoluteArithmetic).iterate(-1), b(FrobeniusKind::AbsoluteGeometric));
            }
        }
    }

    #[test]
    fn iteration() {
        let c = ctx("A1", 1);
        let psi = base_action(FrobeniusKind::InducedArithmetic, &c).unwrap();
        let p2 = psi.compose(&psi).unwrap();
        assert_eq!(p2.eigenvalue(&spec(GeneratorKind::B, 1, Some(1), 3)).unwrap().lam(), &[-2, 0]);
        let p3 = psi.iterate(3);
        assert_eq!(p3.eigenvalue(&spec(GeneratorKind::F, 1, None, 2)).unwrap().qexp(), HalfIntExp::from_int(-3));
        assert!(psi.iterate(0).is_identity());
        assert_eq!(psi.iterate(0), DiagonalAction::identity(&c).unwrap());
    }

    #[test]
    fn classifying_stack() {
        let c = ActionContext::classifying(parse_group("A1").unwrap(), PrimePower::from_q(3).unwrap());
        let ar = classifying_action(FrobeniusKind::AbsoluteArithmetic, &c).unwrap();
        let ge = classifying_action(FrobeniusKind::AbsoluteGeometric, &c).unwrap();
        assert_eq!(ar.entries()[0].1.qexp(), HalfIntExp::from_int(-2));
        assert_eq!(ge.entries()[0].1.qexp(), HalfIntExp::from_int(2));
        assert!(ar.compose(&ge).unwrap().is_identity());
        assert!(classifying_action(FrobeniusKind::InducedArithmetic, &c).is_err());
    }

    #[test]
    fn context_mismatch() {
        let a = DiagonalAction::identity(&ctx("A1", 1)).unwrap();
        let b = DiagonalAction::identity(&ctx("A1", 2)).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::Context(_))));
    }
}
