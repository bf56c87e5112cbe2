//! Subalgebras of a finite algebra, encoded as partitions of its atoms.
//!
//! The subalgebra attached to a partition consists of the unions of blocks.
//! Every finite subalgebra arises this way, which makes membership a
//! per-block test and turns generation and intersection into partition
//! refinement and coarsening.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubalgebraPartition {
    algebra: FiniteAlgebra,
    /// Nonempty, pairwise disjoint, covering; sorted by lowest atom.
    blocks: Vec<Element>,
}

impl SubalgebraPartition {
    /// Validates and canonicalizes a list of blocks.
    pub fn from_blocks(algebra: FiniteAlgebra, blocks: Vec<Element>) -> Result<Self> {
        let mut seen = Element::ZERO;
        for &b in &blocks {
            algebra.check(b)?;
            if b.is_zero() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.disjoint(seen) {
                return Err(Error::InvalidPartition(format!("block {b} overlaps another block")));
            }
            seen = seen | b;
        }
        if seen != algebra.one() {
            let missing = algebra.complement(seen);
            return Err(Error::InvalidPartition(format!("atoms {missing} are not covered")));
        }
        Ok(Self::canonical(algebra, blocks))
    }

    pub fn from_atom_lists(algebra: FiniteAlgebra, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut elems = Vec::with_capacity(blocks.len());
        for b in blocks {
            let e = algebra.element(b)?;
            if e.count() != b.len() {
                return Err(Error::InvalidPartition(format!("block {b:?} repeats an atom")));
            }
            elems.push(e);
        }
        Self::from_blocks(algebra, elems)
    }

    fn canonical(algebra: FiniteAlgebra, mut blocks: Vec<Element>) -> Self {
        blocks.sort_by_key(|b| b.first());
        SubalgebraPartition { algebra, blocks }
    }

    /// The two-element subalgebra `{0, 1}`.
    pub fn trivial(algebra: FiniteAlgebra) -> Self {
        SubalgebraPartition { algebra, blocks: vec![algebra.one()] }
    }

    /// The whole algebra (all blocks are single atoms).
    pub fn full(algebra: FiniteAlgebra) -> Self {
        SubalgebraPartition {
            algebra,
            blocks: (0..algebra.atom_count()).map(Element::singleton).collect(),
        }
    }

    pub fn algebra(&self) -> FiniteAlgebra {
        self.algebra
    }

    pub fn blocks(&self) -> &[Element] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == self.algebra.atom_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Index of the block holding `atom`.
    pub fn block_of(&self, atom: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(atom))
    }

    /// Blocks as atom lists, the file representation.
    pub fn atom_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.atoms().collect()).collect()
    }

    /// Membership: `e` is a union of blocks.
    pub fn contains(&self, e: Element) -> bool {
        self.algebra.contains(e) && self.blocks.iter().all(|&b| b.disjoint(e) || b.is_below(e))
    }

    /// The element that is the union of the blocks selected by `mask`.
    pub fn element_from_mask(&self, mask: u64) -> Element {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Element::ZERO, |acc, (_, &b)| acc | b)
    }

    /// All `2^blocks` elements. Fails above `2^max_log2` elements.
    pub fn elements(&self, max_log2: usize) -> Result<Vec<Element>> {
        let k = self.blocks.len();
        if k > max_log2 || k >= 63 {
            return Err(Error::TooLarge(format!("subalgebra with {k} blocks has 2^{k} elements")));
        }
        Ok((0u64..1u64 << k).map(|m| self.element_from_mask(m)).collect())
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subalgebra_of(&self, other: &SubalgebraPartition) -> bool {
        self.algebra == other.algebra && self.blocks.iter().all(|&b| other.contains(b))
    }

    fn same_ambient(&self, other: &SubalgebraPartition) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AmbientMismatch {
                left: self.algebra.atom_count(),
                right: other.algebra.atom_count(),
            });
        }
        Ok(())
    }

    /// `⟨gens⟩`: atoms are grouped by their membership pattern across the
    /// generators, so blocks are the nonempty signed intersections.
    pub fn generate(algebra: FiniteAlgebra, gens: &[Element]) -> Result<Self> {
        for &g in gens {
            algebra.check(g)?;
        }
        let mut groups: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
        for atom in 0..algebra.atom_count() {
            let sig: Vec<bool> = gens.iter().map(|g| g.contains(atom)).collect();
            *groups.entry(sig).or_default() |= 1u64 << atom;
        }
        Ok(Self::canonical(algebra, groups.into_values().map(Element::from_bits).collect()))
    }

    /// `⟨self ∪ other⟩`, the common refinement of both partitions.
    pub fn join(&self, other: &SubalgebraPartition) -> Result<Self> {
        self.same_ambient(other)?;
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            for &b in &other.blocks {
                let m = a & b;
                if !m.is_zero() {
                    blocks.push(m);
                }
            }
        }
        Ok(Self::canonical(self.algebra, blocks))
    }

    /// Set intersection of the two subalgebras: the finest common coarsening,
    /// i.e. connected components of "shares a block in either partition".
    pub fn intersect(&self, other: &SubalgebraPartition) -> Result<Self> {
        self.same_ambient(other)?;
        let mut pending: Vec<Element> = self.blocks.clone();
        let mut blocks = Vec::new();
        while let Some(mut comp) = pending.pop() {
            loop {
                let grown = other
                    .blocks
                    .iter()
                    .chain(self.blocks.iter())
                    .filter(|b| !b.disjoint(comp))
                    .fold(comp, |acc, &b| acc | b);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            pending.retain(|b| b.disjoint(comp));
            blocks.push(comp);
        }
        Ok(Self::canonical(self.algebra, blocks))
    }

    /// Least element of the subalgebra above `a`.
    pub fn upper_approx(&self, a: Element) -> Result<Element> {
        self.algebra.check(a)?;
        Ok(self.upper_unchecked(a))
    }

    pub(crate) fn upper_unchecked(&self, a: Element) -> Element {
        self.blocks.iter().filter(|b| !b.disjoint(a)).fold(Element::ZERO, |acc, &b| acc | b)
    }

    /// Greatest element of the subalgebra below `a`.
    pub fn lower_approx(&self, a: Element) -> Result<Element> {
        self.algebra.check(a)?;
        Ok(self.lower_unchecked(a))
    }

    pub(crate) fn lower_unchecked(&self, a: Element) -> Element {
        self.blocks.iter().filter(|b| b.is_below(a)).fold(Element::ZERO, |acc, &b| acc | b)
    }

    /// Least `r` in the subalgebra with `c1 ≤ r ≤ c2`, if any exists.
    pub fn interpolate(&self, c1: Element, c2: Element) -> Result<Option<Element>> {
        self.algebra.check(c1)?;
        self.algebra.check(c2)?;
        if !c1.is_below(c2) {
            return Err(Error::Precondition(format!("{c1} is not below {c2}")));
        }
        let r = self.upper_unchecked(c1);
        Ok(r.is_below(c2).then_some(r))
    }

    /// Whether `self` and `other` commute.
    ///
    /// Checked in interpolation form against `R = self ∩ other`: every
    /// `c1 ≤ c2` across the two interpolates through `R`. It suffices to
    /// take `c1` a block of `self` and `c2` the least element of `other`
    /// above it, since interpolants of unions are unions of interpolants.
    pub fn commute(&self, other: &SubalgebraPartition) -> Result<bool> {
        let common = self.intersect(other)?;
        Ok(self
            .blocks
            .iter()
            .all(|&b| common.upper_unchecked(b).is_below(other.upper_unchecked(b))))
    }

    /// Re-expresses `self` over the atoms of `top` (its blocks), for a
    /// subalgebra `self ⊆ top`.
    pub fn relative_to(&self, top: &SubalgebraPartition) -> Result<SubalgebraPartition> {
        self.same_ambient(top)?;
        if !self.is_subalgebra_of(top) {
            return Err(Error::Precondition("subalgebra is not contained in the top algebra".into()));
        }
        let alg = FiniteAlgebra::new(top.block_count())?;
        let blocks = self
            .blocks
            .iter()
            .map(|&b| {
                Element::from_atoms(top.blocks.iter().enumerate().filter(|(_, t)| t.is_below(b)).map(|(i, _)| i))
            })
            .collect();
        Ok(Self::canonical(alg, blocks))
    }

    /// An element of `top`'s algebra, re-expressed over `top`'s blocks.
    pub fn relative_element(top: &SubalgebraPartition, e: Element) -> Result<Element> {
        if !top.contains(e) {
            return Err(Error::Precondition(format!("{e} is not in the top algebra")));
        }
        Ok(Element::from_atoms(top.blocks.iter().enumerate().filter(|(_, t)| t.is_below(e)).map(|(i, _)| i)))
    }
}
