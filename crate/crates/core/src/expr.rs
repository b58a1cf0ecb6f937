//! Composition expressions such as `frob^2 o psi^3`.
//!
//! ```text
//! expr   := factor ( "o" factor )*
//! factor := atom ( "^" int )?
//! atom   := "psi" | "phi" | "frob" | "fbar"
//! ```
//!
//! Factors apply right to left, as in function composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::frobenius::{base_action, ActionContext, DiagonalAction, FrobeniusKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionExpr {
    /// Factors as written, leftmost first.
    pub factors: Vec<(FrobeniusKind, i64)>,
}

impl ActionExpr {
    pub fn to_action(&self, context: &ActionContext) -> Result<DiagonalAction> {
        let mut acc = DiagonalAction::identity(context)?;
        for &(kind, n) in self.factors.iter().rev() {
            acc = base_action(kind, context)?.iterate(n).compose(&acc)?;
        }
        Ok(acc)
    }

    /// `(s, n)` when the expression is `frob^s o psi^n` up to merging
    /// repeated atoms; `None` if any other atom occurs.
    pub fn as_frob_psi(&self) -> Option<(i64, i64)> {
        let mut s = 0;
        let mut n = 0;
        for &(kind, e) in &self.factors {
            match kind {
                FrobeniusKind::AbsoluteArithmetic => s += e,
                FrobeniusKind::InducedArithmetic => n += e,
                _ => return None,
            }
        }
        Some((s, n))
    }

    pub fn is_single(&self, kind: FrobeniusKind) -> bool {
        self.factors == [(kind, 1)]
    }
}

impl fmt::Display for ActionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (kind, n)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str(" o ")?;
            }
            match n {
                1 => write!(f, "{kind}")?,
                _ => write!(f, "{kind}^{n}")?,
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII")
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("expected an integer exponent")
        })
    }
}

pub fn parse_action_expr(s: &str) -> Result<ActionExpr> {
    let mut lx = Lexer { src: s.as_bytes(), pos: 0 };
    let mut factors = Vec::new();
    loop {
        lx.skip_ws();
        let start = lx.pos;
        let word = lx.word().to_string();
        if word.is_empty() {
            return lx.err("expected psi, phi, frob or fbar");
        }
        let kind = word
            .parse::<FrobeniusKind>()
            .map_err(|_| Error::Parse { pos: start, msg: format!("unknown atom {word:?}") })?;
        lx.skip_ws();
        let mut n = 1;
        if lx.pos < lx.src.len() && lx.src[lx.pos] == b'^' {
            lx.pos += 1;
            lx.skip_ws();
            n = lx.int()?;
        }
        factors.push((kind, n));
        lx.skip_ws();
        if lx.pos == lx.src.len() {
            break;
        }
        let sep_pos = lx.pos;
        if lx.word() != "o" {
            lx.pos = sep_pos;
            return lx.err("expected 'o' between factors");
        }
    }
    Ok(ActionExpr { factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimePower;
    use crate::frobenius::base_action;
    use crate::groups::parse_group;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_action_expr("frob").unwrap().factors, vec![(FrobeniusKind::AbsoluteArithmetic, 1)]);
        assert_eq!(parse_action_expr("psi^3").unwrap().factors, vec![(FrobeniusKind::InducedArithmetic, 3)]);
        let e = parse_action_expr("frob^2 o psi^3").unwrap();
        assert_eq!(e.factors, vec![(FrobeniusKind::AbsoluteArithmetic, 2), (FrobeniusKind::InducedArithmetic, 3)]);
        assert_eq!(e.as_frob_psi(), Some((2, 3)));
        assert_eq!(e.to_string(), "frob^2 o psi^3");
        assert_eq!(parse_action_expr(" fbar ^ -1 ").unwrap().factors, vec![(FrobeniusKind::AbsoluteGeometric, -1)]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_action_expr("frob o eta").unwrap_err(),
            Error::Parse { pos: 7, msg: "unknown atom \"eta\"".into() }
        );
        assert!(matches!(parse_action_expr("psi^"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_action_expr("psi psi"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_action_expr(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_action_expr("psi o"), Err(Error::Parse { pos: 5, .. })));
    }

    #[test]
    fn evaluates_to_composition() {
        let c = ActionContext::bundles(parse_group("A1").unwrap(), 1, PrimePower::from_q(3).unwrap());
        let a = parse_action_expr("frob^2 o psi^3").unwrap().to_action(&c).unwrap();
        let b = base_action(FrobeniusKind::AbsoluteArithmetic, &c)
            .unwrap()
            .iterate(2)
            .compose(&base_action(FrobeniusKind::InducedArithmetic, &c).unwrap().iterate(3))
            .unwrap();
        assert_eq!(a, b);
    }
}
