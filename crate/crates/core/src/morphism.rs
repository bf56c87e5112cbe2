//! Boolean morphisms between finite algebras, stored as their dual Stone map.
//!
//! A morphism `h: B → C` is determined by the map sending each atom of `C`
//! to the unique atom of `B` whose image contains it. Every such map
//! `atoms(C) → atoms(B)` induces a Boolean morphism, and `h` is injective
//! exactly when the dual map is onto.

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::subalgebra::SubalgebraPartition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    domain: FiniteAlgebra,
    codomain: FiniteAlgebra,
    /// `dual[c]` is the domain atom whose image contains codomain atom `c`.
    dual: Vec<usize>,
}

impl Morphism {
    pub fn from_dual(domain: FiniteAlgebra, codomain: FiniteAlgebra, dual: Vec<usize>) -> Result<Self> {
        if dual.len() != codomain.atom_count() {
            return Err(Error::InvalidMorphism(format!(
                "dual map has {} entries for a codomain with {} atoms",
                dual.len(),
                codomain.atom_count()
            )));
        }
        if let Some(&bad) = dual.iter().find(|&&d| d >= domain.atom_count()) {
            return Err(Error::InvalidMorphism(format!(
                "dual map targets atom {bad} of a domain with {} atoms",
                domain.atom_count()
            )));
        }
        Ok(Morphism { domain, codomain, dual })
    }

    pub fn identity(alg: FiniteAlgebra) -> Self {
        Morphism { domain: alg, codomain: alg, dual: (0..alg.atom_count()).collect() }
    }

    pub fn domain(&self) -> FiniteAlgebra {
        self.domain
    }

    pub fn codomain(&self) -> FiniteAlgebra {
        self.codomain
    }

    pub fn dual(&self) -> &[usize] {
        &self.dual
    }

    pub fn apply(&self, e: Element) -> Element {
        Element::from_atoms(self.dual.iter().enumerate().filter(|(_, &d)| e.contains(d)).map(|(c, _)| c))
    }

    pub fn apply_checked(&self, e: Element) -> Result<Element> {
        self.domain.check(e)?;
        Ok(self.apply(e))
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.domain.atom_count()];
        for &d in &self.dual {
            hit[d] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if self.codomain != next.domain {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        Ok(Morphism {
            domain: self.domain,
            codomain: next.codomain,
            dual: next.dual.iter().map(|&c| self.dual[c]).collect(),
        })
    }

    /// The image subalgebra, as a partition of the codomain whose blocks are
    /// the images of the domain atoms. Requires injectivity.
    pub fn image(&self) -> Result<SubalgebraPartition> {
        if !self.is_injective() {
            return Err(Error::InvalidMorphism("image partition requires an injective morphism".into()));
        }
        let blocks = (0..self.domain.atom_count()).map(|a| self.apply(Element::singleton(a))).collect();
        SubalgebraPartition::from_blocks(self.codomain, blocks)
    }

    /// Every morphism `domain → codomain`, in lexicographic order of the
    /// dual map.
    pub fn enumerate(domain: FiniteAlgebra, codomain: FiniteAlgebra) -> impl Iterator<Item = Morphism> {
        let k = codomain.atom_count() as u32;
        let d = domain.atom_count();
        let total = d.checked_pow(k).expect("morphism count overflows");
        (0..total).map(move |mut code| {
            let mut dual = vec![0; k as usize];
            for slot in dual.iter_mut().rev() {
                *slot = code % d;
                code /= d;
            }
            Morphism { domain, codomain, dual }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_maps_are_boolean_morphisms() {
        let b = FiniteAlgebra::new(3).unwrap();
        let c = FiniteAlgebra::new(2).unwrap();
        for h in Morphism::enumerate(b, c) {
            assert_eq!(h.apply(b.zero()), c.zero());
            assert_eq!(h.apply(b.one()), c.one());
            for x in b.elements() {
                assert_eq!(h.apply(b.complement(x)), c.complement(h.apply(x)));
                for y in b.elements() {
                    assert_eq!(h.apply(x & y), h.apply(x) & h.apply(y));
                    assert_eq!(h.apply(x | y), h.apply(x) | h.apply(y));
                }
            }
        }
        assert_eq!(Morphism::enumerate(b, c).count(), 9);
    }

    #[test]
    fn injectivity_and_image() {
        let b = FiniteAlgebra::new(2).unwrap();
        let c = FiniteAlgebra::new(3).unwrap();
        let h = Morphism::from_dual(b, c, vec![0, 1, 1]).unwrap();
        assert!(h.is_injective());
        assert_eq!(h.image().unwrap().atom_lists(), vec![vec![0], vec![1, 2]]);
        let g = Morphism::from_dual(b, c, vec![0, 0, 0]).unwrap();
        assert!(!g.is_injective());
        assert!(g.image().is_err());
        assert!(Morphism::from_dual(b, c, vec![0, 2, 1]).is_err());
    }

    #[test]
    fn composition() {
        let a = FiniteAlgebra::new(2).unwrap();
        let b = FiniteAlgebra::new(3).unwrap();
        let c = FiniteAlgebra::new(4).unwrap();
        let f = Morphism::from_dual(a, b, vec![0, 1, 1]).unwrap();
        let g = Morphism::from_dual(b, c, vec![2, 0, 1, 2]).unwrap();
        let gf = f.then(&g).unwrap();
        for x in a.elements() {
            assert_eq!(gf.apply(x), g.apply(f.apply(x)));
        }
        assert!(g.then(&f).is_err());
    }
}
