//! Finite Boolean algebras presented as powersets of their atoms.
//!
//! An algebra with `n` atoms is the powerset of `{0, .., n-1}`; its elements
//! are atom-sets stored as 64-bit masks, so meet, join and complement are
//! plain bit operations. Under this presentation the Stone space of the
//! algebra is the atom set itself and every element is a clopen set.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ATOM_CAPACITY;

/// An atom-set. Membership in a particular algebra is checked by
/// [`FiniteAlgebra::check`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u64);

impl Element {
    pub const ZERO: Element = Element(0);

    pub const fn from_bits(bits: u64) -> Self {
        Element(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds the atom-set from atom indices. Indices must be below 64.
    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        Element(atoms.into_iter().fold(0u64, |acc, a| {
            debug_assert!(a < ATOM_CAPACITY);
            acc | (1u64 << a)
        }))
    }

    pub fn singleton(atom: usize) -> Self {
        Element(1u64 << atom)
    }

    pub fn atoms(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(a)
            }
        })
    }

    pub fn contains(self, atom: usize) -> bool {
        atom < ATOM_CAPACITY && self.0 >> atom & 1 == 1
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Atom-set inclusion, i.e. the Boolean order.
    pub fn is_below(self, other: Element) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meet(self, other: Element) -> Element {
        Element(self.0 & other.0)
    }

    pub fn join(self, other: Element) -> Element {
        Element(self.0 | other.0)
    }

    /// `self ∧ ¬other`.
    pub fn minus(self, other: Element) -> Element {
        Element(self.0 & !other.0)
    }

    pub fn disjoint(self, other: Element) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest atom, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl BitAnd for Element {
    type Output = Element;
    fn bitand(self, rhs: Element) -> Element {
        self.meet(rhs)
    }
}

impl BitOr for Element {
    type Output = Element;
    fn bitor(self, rhs: Element) -> Element {
        self.join(rhs)
    }
}

impl BitXor for Element {
    type Output = Element;
    fn bitxor(self, rhs: Element) -> Element {
        Element(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms()).finish()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.atoms().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// The powerset algebra of `{0, .., atom_count-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    atom_count: usize,
}

impl FiniteAlgebra {
    pub fn new(atom_count: usize) -> Result<Self> {
        if atom_count == 0 || atom_count > ATOM_CAPACITY {
            return Err(Error::AtomCount(atom_count));
        }
        Ok(FiniteAlgebra { atom_count })
    }

    /// The two-element algebra `{0, 1}`.
    pub fn two() -> Self {
        FiniteAlgebra { atom_count: 1 }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Number of elements, `2^atom_count`, when it fits in a `u128`.
    pub fn element_count(&self) -> u128 {
        1u128 << self.atom_count
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn one(&self) -> Element {
        Element(self.universe_mask())
    }

    fn universe_mask(&self) -> u64 {
        if self.atom_count == 64 {
            u64::MAX
        } else {
            (1u64 << self.atom_count) - 1
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        e.0 & !self.universe_mask() == 0
    }

    pub fn check(&self, e: Element) -> Result<Element> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::ForeignElement { bits: e.0, atom_count: self.atom_count })
        }
    }

    pub fn complement(&self, e: Element) -> Element {
        Element(!e.0 & self.universe_mask())
    }

    pub fn atom(&self, index: usize) -> Result<Element> {
        if index < self.atom_count {
            Ok(Element::singleton(index))
        } else {
            Err(Error::ForeignElement { bits: 0, atom_count: self.atom_count })
        }
    }

    /// Element from a list of atom indices, rejecting out-of-range indices.
    pub fn element(&self, atoms: &[usize]) -> Result<Element> {
        if let Some(&bad) = atoms.iter().find(|&&a| a >= self.atom_count) {
            return Err(Error::ForeignElement {
                bits: if bad < ATOM_CAPACITY { 1u64 << bad } else { u64::MAX },
                atom_count: self.atom_count,
            });
        }
        Ok(Element::from_atoms(atoms.iter().copied()))
    }

    pub fn leq(&self, a: Element, b: Element) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.is_below(b))
    }

    /// Every element of the algebra, in mask order. Only sensible for small
    /// atom counts.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        let n = self.atom_count;
        assert!(n < 32, "refusing to enumerate 2^{n} elements");
        (0u64..(1u64 << n)).map(Element)
    }
}
