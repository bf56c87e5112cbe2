//! Interval form of a Boolean equation.
//!
//! By the Boole-Shannon expansion `P = (x_k ∧ P|₁) ∨ (¬x_k ∧ P|₀)`, so
//! `P = 0` holds iff `P|₀ ≤ x_k ≤ ¬P|₁`. The two bounds are polynomials in
//! the remaining variables.

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::poly::BoolPoly;

/// Bounds `lower ≤ x_k ≤ upper` equivalent to `P = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: BoolPoly,
    pub upper: BoolPoly,
}

/// Eliminates the one-based variable `k` from `P = 0`. The bounds are
/// polynomials in the other variables, renumbered in their original order.
pub fn eliminate(p: &BoolPoly, k: usize) -> Result<Interval> {
    if k == 0 || k > p.arity() {
        return Err(Error::VariableOutOfRange { index: k, arity: p.arity() });
    }
    Ok(Interval { lower: p.cofactor(k - 1, false)?, upper: p.cofactor(k - 1, true)?.not() })
}

/// Whether `P` vanishes on all `2^n` substitutions choosing `lows[i]` or
/// `highs[i]` in each coordinate.
pub fn all_signs_vanish(
    p: &BoolPoly,
    lows: &[Element],
    highs: &[Element],
    alg: &FiniteAlgebra,
) -> Result<bool> {
    let n = p.arity();
    for len in [lows.len(), highs.len()] {
        if len != n {
            return Err(Error::ArityMismatch { expected: n, found: len });
        }
    }
    for (i, (&lo, &hi)) in lows.iter().zip(highs).enumerate() {
        alg.check(lo)?;
        alg.check(hi)?;
        if !lo.is_below(hi) {
            return Err(Error::SandwichViolation(i));
        }
    }
    Ok(all_signs_vanish_unchecked(p, lows, highs, alg.atom_count()))
}

pub(crate) fn all_signs_vanish_unchecked(
    p: &BoolPoly,
    lows: &[Element],
    highs: &[Element],
    atom_count: usize,
) -> bool {
    let n = p.arity();
    let mut args = lows.to_vec();
    (0..1usize << n).all(|signs| {
        for i in 0..n {
            args[i] = if signs >> i & 1 == 1 { highs[i] } else { lows[i] };
        }
        p.eval_unchecked(&args, atom_count).is_zero()
    })
}
