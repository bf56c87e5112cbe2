//! Ideal-filter brackets `(I⁻, I⁺)` over a finite subalgebra `R`.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::algebra::Element;
use crate::elim::all_signs_vanish_unchecked;
use crate::error::{Error, Result};
use crate::poly::BoolPoly;
use crate::subalgebra::SubalgebraPartition;

/// Subalgebras with more blocks than this are not enumerated.
pub const MAX_BRACKET_BLOCKS: usize = 20;

/// An element of `G(R)`: an ideal `I⁻` and a filter `I⁺` of `R` with every
/// member of `I⁻` below every member of `I⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    r: SubalgebraPartition,
    lower: BTreeSet<Element>,
    upper: BTreeSet<Element>,
}

impl Bracket {
    pub fn new(r: SubalgebraPartition, lower: BTreeSet<Element>, upper: BTreeSet<Element>) -> Result<Self> {
        let b = Bracket { r, lower, upper };
        b.validate()?;
        Ok(b)
    }

    pub fn r(&self) -> &SubalgebraPartition {
        &self.r
    }

    pub fn lower(&self) -> &BTreeSet<Element> {
        &self.lower
    }

    pub fn upper(&self) -> &BTreeSet<Element> {
        &self.upper
    }

    /// Checks the ideal, filter and order conditions.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Precondition(m.to_string()));
        if self.r.block_count() > MAX_BRACKET_BLOCKS {
            return Err(Error::TooLarge(format!("subalgebra with {} blocks", self.r.block_count())));
        }
        if self.lower.is_empty() || self.upper.is_empty() {
            return fail("ideal and filter must be nonempty");
        }
        if !self.lower.iter().chain(&self.upper).all(|&x| self.r.contains(x)) {
            return fail("bracket members must lie in R");
        }
        for &x in &self.lower {
            if !self.below_in_r(x).all(|y| self.lower.contains(&y)) {
                return fail("I⁻ is not downward closed");
            }
            if !self.lower.iter().all(|&y| self.lower.contains(&(x | y))) {
                return fail("I⁻ is not closed under joins");
            }
        }
        let one = self.r.algebra().one();
        for &x in &self.upper {
            let comp = self.r.algebra().complement(x);
            // elements of R above x are x joined with elements of R below ¬x
            if !self.below_in_r(comp).all(|y| self.upper.contains(&(x | y))) {
                return fail("I⁺ is not upward closed");
            }
            if !self.upper.iter().all(|&y| self.upper.contains(&(x & y))) {
                return fail("I⁺ is not closed under meets");
            }
        }
        let top = self.lower.iter().fold(Element::ZERO, |a, &b| a | b);
        let bottom = self.upper.iter().fold(one, |a, &b| a & b);
        if !top.is_below(bottom) {
            return fail("I⁻ is not below I⁺");
        }
        Ok(())
    }

    /// Elements of `R` below `x ∈ R`.
    fn below_in_r(&self, x: Element) -> impl Iterator<Item = Element> + '_ {
        let inside: Vec<Element> = self.r.blocks().iter().copied().filter(|b| b.is_below(x)).collect();
        (0u64..1u64 << inside.len()).map(move |m| {
            inside.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(Element::ZERO, |a, (_, &b)| a | b)
        })
    }

    /// Largest member of the ideal.
    pub fn lower_max(&self) -> Element {
        self.lower.iter().fold(Element::ZERO, |a, &b| a | b)
    }

    /// Smallest member of the filter.
    pub fn upper_min(&self) -> Element {
        self.upper.iter().fold(self.r.algebra().one(), |a, &b| a & b)
    }
}

/// The principal bracket `I⁻(a) = {r ∈ R : r ≤ a}`, `I⁺(a) = {r ∈ R : r ≥ a}`.
pub fn bracket_of(a: Element, r: &SubalgebraPartition) -> Result<Bracket> {
    r.algebra().check(a)?;
    let elements = r.elements(MAX_BRACKET_BLOCKS)?;
    let lower = elements.iter().copied().filter(|x| x.is_below(a)).collect();
    let upper = elements.iter().copied().filter(|x| a.is_below(*x)).collect();
    Ok(Bracket { r: r.clone(), lower, upper })
}

/// Upper bound on the number of witness candidates examined.
pub const GP_SEARCH_LIMIT: u128 = 1 << 24;

/// A witness that the bracket tuple lies in `G_P(R)`: `r_i^± ∈ I_i^±` with
/// `P` vanishing on every sign choice, or `None` when no witness exists.
///
/// Candidates are tried with the largest members of each ideal and the
/// smallest members of each filter first.
pub fn gp_member(brackets: &[Bracket], p: &BoolPoly) -> Result<Option<Vec<(Element, Element)>>> {
    let n = p.arity();
    if brackets.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: brackets.len() });
    }
    let Some(first) = brackets.first() else {
        return Ok(p.is_zero().then(Vec::new));
    };
    let alg = first.r.algebra();
    if let Some(b) = brackets.iter().find(|b| b.r != first.r) {
        return Err(Error::AmbientMismatch {
            left: first.r.block_count(),
            right: b.r.block_count(),
        });
    }
    // slot 2i is r_i^-, slot 2i+1 is r_i^+
    let mut slots: Vec<Vec<Element>> = Vec::with_capacity(2 * n);
    for b in brackets {
        let mut lo: Vec<Element> = b.lower.iter().copied().collect();
        lo.sort_by_key(|e| (Reverse(e.count()), e.bits()));
        let mut hi: Vec<Element> = b.upper.iter().copied().collect();
        hi.sort_by_key(|e| (e.count(), e.bits()));
        slots.push(lo);
        slots.push(hi);
    }
    let total = slots.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    if total > GP_SEARCH_LIMIT {
        return Err(Error::TooLarge(format!("{total} candidate witnesses")));
    }
    let mut idx = vec![0usize; 2 * n];
    let mut lows = vec![Element::ZERO; n];
    let mut highs = vec![Element::ZERO; n];
    loop {
        for i in 0..n {
            lows[i] = slots[2 * i][idx[2 * i]];
            highs[i] = slots[2 * i + 1][idx[2 * i + 1]];
        }
        if lows.iter().zip(&highs).all(|(l, h)| l.is_below(*h))
            && all_signs_vanish_unchecked(p, &lows, &highs, alg.atom_count())
        {
            return Ok(Some(lows.iter().copied().zip(highs.iter().copied()).collect()));
        }
        let mut k = 2 * n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < slots[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;

    fn part(n: usize, blocks: &[&[usize]]) -> SubalgebraPartition {
        let lists: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        SubalgebraPartition::from_atom_lists(FiniteAlgebra::new(n).unwrap(), &lists).unwrap()
    }

    fn el(atoms: &[usize]) -> Element {
        Element::from_atoms(atoms.iter().copied())
    }

    #[test]
    fn bracket_of_examples() {
        let r = part(3, &[&[0], &[1, 2]]);
        for x in r.elements(20).unwrap() {
            let b = bracket_of(x, &r).unwrap();
            assert!(b.lower().contains(&x) && b.upper().contains(&x));
            let both: Vec<_> = b.lower().intersection(b.upper()).collect();
            assert_eq!(both, vec![&x]);
        }
        let b = bracket_of(el(&[0, 1]), &r).unwrap();
        assert_eq!(b.lower().iter().copied().collect::<Vec<_>>(), vec![el(&[]), el(&[0])]);
        assert_eq!(b.upper().iter().copied().collect::<Vec<_>>(), vec![el(&[0, 1, 2])]);
        let top = bracket_of(el(&[0, 1, 2]), &r).unwrap();
        assert_eq!(top.lower().len(), 4);
        assert_eq!(top.upper().iter().copied().collect::<Vec<_>>(), vec![el(&[0, 1, 2])]);
    }

    #[test]
    fn principal_brackets_are_valid() {
        for n in 1..=4 {
            let alg = FiniteAlgebra::new(n).unwrap();
            for g in alg.elements() {
                let r = SubalgebraPartition::generate(alg, &[g]).unwrap();
                for a in alg.elements() {
                    let b = bracket_of(a, &r).unwrap();
                    b.validate().unwrap();
                    assert_eq!(b.lower_max(), r.lower_approx(a).unwrap());
                    assert_eq!(b.upper_min(), r.upper_approx(a).unwrap());
                }
            }
        }
    }

    #[test]
    fn invalid_brackets_are_rejected() {
        let r = part(2, &[&[0], &[1]]);
        let set = |v: &[&[usize]]| v.iter().map(|a| el(a)).collect::<BTreeSet<_>>();
        // not downward closed
        assert!(Bracket::new(r.clone(), set(&[&[0]]), set(&[&[0, 1]])).is_err());
        // not upward closed
        assert!(Bracket::new(r.clone(), set(&[&[]]), set(&[&[0]])).is_err());
        // ideal not below filter
        assert!(Bracket::new(r.clone(), set(&[&[], &[0]]), set(&[&[1], &[0, 1]])).is_err());
        assert!(Bracket::new(r, set(&[&[], &[0]]), set(&[&[0], &[0, 1]])).is_ok());
    }

    #[test]
    fn gp_member_examples() {
        let r = part(2, &[&[0], &[1]]);
        let x1 = BoolPoly::parse("x1", None).unwrap();
        let b = bracket_of(Element::ZERO, &r).unwrap();
        assert_eq!(gp_member(&[b], &x1).unwrap(), Some(vec![(Element::ZERO, Element::ZERO)]));

        let diff = BoolPoly::parse("x1 & !x2", None).unwrap();
        let (a1, a2) = (el(&[0]), el(&[0, 1]));
        let bs = [bracket_of(a1, &r).unwrap(), bracket_of(a2, &r).unwrap()];
        assert_eq!(gp_member(&bs, &diff).unwrap(), Some(vec![(a1, a1), (a2, a2)]));

        let r = part(4, &[&[0, 1], &[2, 3]]);
        let bs = [bracket_of(el(&[0]), &r).unwrap(), bracket_of(el(&[0, 1, 2]), &r).unwrap()];
        let w = gp_member(&bs, &diff).unwrap().unwrap();
        assert_eq!(w, vec![(el(&[]), el(&[0, 1])), (el(&[0, 1]), el(&[0, 1, 2, 3]))]);
    }

    #[test]
    fn gp_member_none_and_errors() {
        let r = part(4, &[&[0, 1], &[2, 3]]);
        let diff = BoolPoly::parse("x1 & !x2", None).unwrap();
        // a1 = {0,1,2} is not below a2 = {0}: no witness can exist
        let bs = [bracket_of(el(&[0, 1, 2]), &r).unwrap(), bracket_of(el(&[0]), &r).unwrap()];
        assert_eq!(gp_member(&bs, &diff).unwrap(), None);
        assert!(gp_member(&bs[..1], &diff).is_err());
        let other = bracket_of(el(&[0]), &part(4, &[&[0], &[1, 2, 3]])).unwrap();
        assert!(gp_member(&[bs[0].clone(), other], &diff).is_err());
    }
}
