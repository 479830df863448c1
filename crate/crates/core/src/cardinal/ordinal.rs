//! Ordinals below ε₀ in Cantor normal form.

use std::fmt;

use super::CardinalError;

/// Default bound on exponent nesting.
pub const DEFAULT_ORDINAL_DEPTH: usize = 8;

/// An ordinal `ω^e₁·c₁ + … + ω^eₖ·cₖ` with `e₁ > … > eₖ` and every `cᵢ ≥ 1`.
///
/// The empty term list is zero. Comparison is the derived lexicographic order on
/// `(exponent, coefficient)` pairs, which is exactly ordinal order for Cantor
/// normal forms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::finite(1))
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal {
            terms: vec![(exponent, 1)],
        }
    }

    /// Builds an ordinal from explicit terms, checking the normal-form and depth invariants.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>, depth_limit: usize) -> Result<Self, CardinalError> {
        for (i, (_, c)) in terms.iter().enumerate() {
            if *c == 0 {
                return Err(CardinalError::MalformedOrdinal(
                    "zero coefficient in normal form".into(),
                ));
            }
            if i > 0 && terms[i - 1].0 <= terms[i].0 {
                return Err(CardinalError::MalformedOrdinal(
                    "exponents must strictly decrease".into(),
                ));
            }
        }
        let o = Ordinal { terms };
        o.check_depth(depth_limit)?;
        Ok(o)
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nesting depth: 0 for zero, otherwise one more than the deepest exponent.
    pub fn depth(&self) -> usize {
        self.terms.iter().map(|(e, _)| 1 + e.depth()).max().unwrap_or(0)
    }

    pub fn check_depth(&self, limit: usize) -> Result<(), CardinalError> {
        if self.depth() > limit {
            Err(CardinalError::OrdinalDepth { limit })
        } else {
            Ok(())
        }
    }

    /// `Some(n)` when the ordinal is a natural number.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    /// The coefficient of `ω^0`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    /// The ordinal with its finite tail removed (zero or a limit).
    pub fn limit_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if matches!(terms.last(), Some((e, _)) if e.is_zero()) {
            terms.pop();
        }
        Ordinal { terms }
    }

    pub fn succ(&self) -> Result<Ordinal, CardinalError> {
        self.add_finite(1)
    }

    pub fn add_finite(&self, n: u64) -> Result<Ordinal, CardinalError> {
        if n == 0 {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => {
                *c = c.checked_add(n).ok_or(CardinalError::FiniteOverflow)?;
            }
            _ => terms.push((Ordinal::zero(), n)),
        }
        Ok(Ordinal { terms })
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a term");
        if last.1 == 1 {
            terms.pop();
        } else {
            last.1 -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum `self + rhs` (not commutative).
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal, CardinalError> {
        let Some((lead, lead_c)) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(Ordinal, u64)> = self.terms.iter().filter(|(e, _)| e >= lead).cloned().collect();
        match terms.last_mut() {
            Some((e, c)) if e == lead => {
                *c = c.checked_add(*lead_c).ok_or(CardinalError::FiniteOverflow)?;
                terms.extend(rhs.terms[1..].iter().cloned());
            }
            _ => terms.extend(rhs.terms.iter().cloned()),
        }
        Ok(Ordinal { terms })
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            match e.as_finite() {
                Some(1) => {}
                Some(n) => write!(f, "^{n}")?,
                None if e.terms.len() == 1 && e.terms[0].1 == 1 && e.terms[0].0.as_finite() == Some(1) => {
                    write!(f, "^w")?
                }
                None => write!(f, "^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    #[test]
    fn cnf_order() {
        let w2 = Ordinal::omega_pow(Ordinal::finite(2));
        let w5_3 = Ordinal::from_terms(vec![(Ordinal::finite(1), 5), (Ordinal::zero(), 3)], 8).unwrap();
        assert!(w2 > w5_3);
        assert!(w() > Ordinal::finite(1_000_000));
        assert!(Ordinal::finite(3) < Ordinal::finite(4));
        assert!(w().succ().unwrap() > w());
    }

    #[test]
    fn addition_absorbs_smaller_terms() {
        let three = Ordinal::finite(3);
        assert_eq!(three.add(&w()).unwrap(), w());
        assert_eq!(w().add(&three).unwrap().to_string(), "w+3");
        assert_eq!(w().add(&w()).unwrap().to_string(), "w*2");
    }

    #[test]
    fn successor_and_limit() {
        assert!(w().is_limit());
        assert!(Ordinal::finite(2).is_successor());
        assert!(!Ordinal::zero().is_limit() && !Ordinal::zero().is_successor());
        let w1 = w().succ().unwrap();
        assert_eq!(w1.pred().unwrap(), w());
        assert_eq!(w1.limit_part(), w());
        assert_eq!(w1.finite_part(), 1);
    }

    #[test]
    fn depth_limit_enforced() {
        let mut o = Ordinal::finite(1);
        for _ in 0..8 {
            o = Ordinal::omega_pow(o);
        }
        assert_eq!(o.depth(), 9);
        assert!(o.check_depth(8).is_err());
        assert!(Ordinal::from_terms(vec![(o, 1)], 8).is_err());
    }

    #[test]
    fn malformed_terms_rejected() {
        assert!(Ordinal::from_terms(vec![(Ordinal::zero(), 0)], 8).is_err());
        assert!(Ordinal::from_terms(vec![(Ordinal::zero(), 1), (Ordinal::finite(1), 1)], 8).is_err());
    }

    #[test]
    fn display_forms() {
        let ww = Ordinal::omega_pow(w());
        assert_eq!(ww.to_string(), "w^w");
        let e = Ordinal::omega_pow(w().succ().unwrap());
        assert_eq!(e.to_string(), "w^(w+1)");
        let x = Ordinal::from_terms(vec![(Ordinal::finite(2), 3), (Ordinal::zero(), 1)], 8).unwrap();
        assert_eq!(x.to_string(), "w^2*3+1");
    }
}
