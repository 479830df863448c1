//! Two set-theoretic models for symbolic cardinals and an expression
//! enumerator.
//!
//! In the model with step `s`, `2^ℵ_α = ℵ_{α+s}` for every `α`. Step 1 is GCH.
//! Step 2 gives `ℶ_γ = ℵ_{2·γ}`, so `ℶ_{n} = ℵ_{2n}` and `ℶ_ω = ℵ_ω`.

use bighom_core::cardinal::{CardinalExpr, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Finite(u64),
    Aleph(Ordinal),
}

#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub step: u64,
}

pub const GCH: Model = Model { step: 1 };
pub const DOUBLE_JUMP: Model = Model { step: 2 };

impl Model {
    fn beth_index(&self, g: &Ordinal) -> Option<Ordinal> {
        g.limit_part().add_finite(self.step * g.finite_part()).ok()
    }

    /// Value in the model; `None` when undefined (hat of a finite cardinal)
    /// or too large to hold.
    pub fn eval(&self, e: &CardinalExpr) -> Option<Value> {
        Some(match e {
            CardinalExpr::Finite(n) => Value::Finite(*n),
            CardinalExpr::Aleph(a) => Value::Aleph(a.clone()),
            CardinalExpr::Beth(g) => Value::Aleph(self.beth_index(g)?),
            CardinalExpr::PowSet(k) => match self.eval(k)? {
                Value::Finite(n) => Value::Finite(1u64.checked_shl(u32::try_from(n).ok()?).filter(|_| n < 63)?),
                Value::Aleph(a) => Value::Aleph(a.add_finite(self.step).ok()?),
            },
            CardinalExpr::Succ(k) => match self.eval(k)? {
                Value::Finite(n) => Value::Finite(n.checked_add(1)?),
                Value::Aleph(a) => Value::Aleph(a.succ().ok()?),
            },
            // sup{2^β | β < ℵ_α}: ℵ_0 for α = 0, ℵ_α at limits, and
            // 2^ℵ_δ = ℵ_{δ+s} for α = δ + 1.
            CardinalExpr::Hat(k) => match self.eval(k)? {
                Value::Finite(_) => return None,
                Value::Aleph(a) => match a.pred() {
                    Some(d) => Value::Aleph(d.add_finite(self.step).ok()?),
                    None => Value::Aleph(a),
                },
            },
        })
    }
}

fn atoms() -> Vec<CardinalExpr> {
    let w = Ordinal::omega();
    let w1 = w.succ().unwrap();
    vec![
        CardinalExpr::Finite(0),
        CardinalExpr::Finite(3),
        CardinalExpr::aleph(0),
        CardinalExpr::aleph(1),
        CardinalExpr::aleph(2),
        CardinalExpr::Aleph(w.clone()),
        CardinalExpr::Aleph(w1.clone()),
        CardinalExpr::beth(0),
        CardinalExpr::beth(1),
        CardinalExpr::beth(2),
        CardinalExpr::Beth(w),
        CardinalExpr::Beth(w1),
    ]
}

/// Every expression of depth at most `depth` over a fixed set of atoms.
pub fn expressions(depth: usize) -> Vec<CardinalExpr> {
    let mut all = atoms();
    let mut layer = all.clone();
    for _ in 1..depth {
        let next: Vec<CardinalExpr> = layer
            .iter()
            .flat_map(|e| {
                [
                    CardinalExpr::pow(e.clone()),
                    CardinalExpr::succ(e.clone()),
                    CardinalExpr::hat_of(e.clone()),
                ]
            })
            .collect();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_values() {
        let p = CardinalExpr::pow(CardinalExpr::aleph(0));
        assert_eq!(GCH.eval(&p), Some(Value::Aleph(Ordinal::finite(1))));
        assert_eq!(DOUBLE_JUMP.eval(&p), Some(Value::Aleph(Ordinal::finite(2))));
        assert_eq!(
            DOUBLE_JUMP.eval(&CardinalExpr::beth(3)),
            Some(Value::Aleph(Ordinal::finite(6)))
        );
        let hat_beth1 = CardinalExpr::hat_of(CardinalExpr::beth(1));
        assert_eq!(DOUBLE_JUMP.eval(&hat_beth1), Some(Value::Aleph(Ordinal::finite(3))));
        assert_eq!(expressions(3).len(), 12 + 36 + 108);
    }
}
