//! Push-out squares of finite Boolean algebras.
//!
//! Given `R ⊆ A` and `R ⊆ S`, the push-out `B` is the free sum of `A` and
//! `S` with the two copies of `R` identified. For finite algebras its atoms
//! are the pairs `(α, σ)` of an atom of `A` and an atom of `S` lying over the
//! same atom of `R`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::subalgebra::SubalgebraPartition;
use crate::ATOM_CAPACITY;

/// A span `A ⊇ R ⊆ S` given by the two copies of `R` and a bijection
/// between their blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamInput {
    r_in_a: SubalgebraPartition,
    r_in_s: SubalgebraPartition,
    /// `matching[i]` is the block of `r_in_s` identified with block `i` of
    /// `r_in_a`.
    matching: Vec<usize>,
}

impl AmalgamInput {
    pub fn new(
        r_in_a: SubalgebraPartition,
        r_in_s: SubalgebraPartition,
        matching: Vec<usize>,
    ) -> Result<Self> {
        let k = r_in_a.block_count();
        if r_in_s.block_count() != k {
            return Err(Error::InvalidMatching(format!(
                "the two copies of R have {k} and {} atoms",
                r_in_s.block_count()
            )));
        }
        if matching.len() != k {
            return Err(Error::InvalidMatching(format!("matching has {} entries for {k} blocks", matching.len())));
        }
        let mut seen = vec![false; k];
        for &m in &matching {
            if m >= k || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidMatching(format!("{matching:?} is not a permutation of 0..{k}")));
            }
        }
        Ok(AmalgamInput { r_in_a, r_in_s, matching })
    }

    /// Matching blocks in order.
    pub fn identity_matching(r_in_a: SubalgebraPartition, r_in_s: SubalgebraPartition) -> Result<Self> {
        let k = r_in_a.block_count();
        Self::new(r_in_a, r_in_s, (0..k).collect())
    }

    pub fn a(&self) -> FiniteAlgebra {
        self.r_in_a.algebra()
    }

    pub fn s(&self) -> FiniteAlgebra {
        self.r_in_s.algebra()
    }

    pub fn r_in_a(&self) -> &SubalgebraPartition {
        &self.r_in_a
    }

    pub fn r_in_s(&self) -> &SubalgebraPartition {
        &self.r_in_s
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    /// Atom count of the push-out: over each atom of `R`, the product of the
    /// numbers of `A`-atoms and `S`-atoms beneath it.
    pub fn pushout_atom_count(&self) -> usize {
        self.r_in_a
            .blocks()
            .iter()
            .zip(&self.matching)
            .map(|(ba, &j)| ba.count() * self.r_in_s.blocks()[j].count())
            .sum()
    }
}

/// The completed square: `B` with the two embeddings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amalgam {
    pub algebra: FiniteAlgebra,
    pub embed_a: Morphism,
    pub embed_s: Morphism,
    /// Atom `i` of `B` is the pair `pairs[i] = (α, σ)`.
    pub pairs: Vec<(usize, usize)>,
}

/// Builds the push-out, refusing results above `max_atoms` atoms.
pub fn amalgamate(inp: &AmalgamInput, max_atoms: usize) -> Result<Amalgam> {
    let atoms = inp.pushout_atom_count();
    let max = max_atoms.min(ATOM_CAPACITY);
    if atoms > max {
        return Err(Error::SizeBound { atoms, max });
    }
    let mut pairs = Vec::with_capacity(atoms);
    for alpha in 0..inp.a().atom_count() {
        let i = inp.r_in_a.block_of(alpha).expect("partition covers every atom");
        let over = inp.r_in_s.blocks()[inp.matching[i]];
        pairs.extend(over.atoms().map(|sigma| (alpha, sigma)));
    }
    let algebra = FiniteAlgebra::new(atoms)?;
    let embed_a = Morphism::from_dual(inp.a(), algebra, pairs.iter().map(|p| p.0).collect())?;
    let embed_s = Morphism::from_dual(inp.s(), algebra, pairs.iter().map(|p| p.1).collect())?;
    Ok(Amalgam { algebra, embed_a, embed_s, pairs })
}

impl Amalgam {
    /// The square with everything identified inside `B`.
    pub fn diagram(&self, inp: &AmalgamInput) -> Result<Diagram> {
        let a = self.embed_a.image()?;
        let s = self.embed_s.image()?;
        let r_blocks = inp.r_in_a.blocks().iter().map(|&b| self.embed_a.apply(b)).collect();
        let r = SubalgebraPartition::from_blocks(self.algebra, r_blocks)?;
        Diagram::new(a, s, r)
    }
}

/// A square of subalgebras `R ⊆ A, S ⊆ B`, all inside one algebra `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    a: SubalgebraPartition,
    s: SubalgebraPartition,
    r: SubalgebraPartition,
}

impl Diagram {
    pub fn new(a: SubalgebraPartition, s: SubalgebraPartition, r: SubalgebraPartition) -> Result<Self> {
        let b = a.algebra();
        for x in [&s, &r] {
            if x.algebra() != b {
                return Err(Error::AmbientMismatch { left: b.atom_count(), right: x.algebra().atom_count() });
            }
        }
        if !r.is_subalgebra_of(&a) || !r.is_subalgebra_of(&s) {
            return Err(Error::Precondition("R must be contained in both A and S".into()));
        }
        Ok(Diagram { a, s, r })
    }

    pub fn algebra(&self) -> FiniteAlgebra {
        self.a.algebra()
    }

    pub fn a(&self) -> &SubalgebraPartition {
        &self.a
    }

    pub fn s(&self) -> &SubalgebraPartition {
        &self.s
    }

    pub fn r(&self) -> &SubalgebraPartition {
        &self.r
    }
}

/// Outcome of the three push-out conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushoutCheck {
    /// `⟨A ∪ S⟩ = B`.
    pub generates: bool,
    /// `A ∩ S = R`.
    pub intersection_is_r: bool,
    /// `A` and `S` commute.
    pub commute: bool,
}

impl PushoutCheck {
    pub fn holds(&self) -> bool {
        self.generates && self.intersection_is_r && self.commute
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.generates {
            v.push("A and S do not generate B");
        }
        if !self.intersection_is_r {
            v.push("A ∩ S differs from R");
        }
        if !self.commute {
            v.push("A and S do not commute");
        }
        v
    }
}

pub fn verify_pushout(d: &Diagram) -> PushoutCheck {
    let join = d.a.join(&d.s).expect("diagram shares one ambient algebra");
    let meet = d.a.intersect(&d.s).expect("diagram shares one ambient algebra");
    PushoutCheck {
        generates: join.is_full(),
        intersection_is_r: meet == d.r,
        commute: d.a.commute(&d.s).expect("diagram shares one ambient algebra"),
    }
}

/// Hard cap on the number of mediating morphisms enumerated.
pub const MEDIATOR_LIMIT: usize = 1 << 16;

/// All `h: B → C` with `h ∘ ι_A = f` and `h ∘ ι_S = g`.
///
/// `f` and `g` are morphisms out of `A` and `S` viewed as algebras in their
/// own right (atoms are the blocks of the partitions, in their sorted
/// order, which need not follow the atom order of the algebra an
/// [`Amalgam`] embedding starts from). Fails with
/// [`Error::IncompatibleLegs`] when `f` and `g` disagree on `R`.
pub fn mediating_morphisms(d: &Diagram, f: &Morphism, g: &Morphism) -> Result<Vec<Morphism>> {
    if f.domain().atom_count() != d.a.block_count() || g.domain().atom_count() != d.s.block_count() {
        return Err(Error::InvalidMorphism("legs must start at A and S".into()));
    }
    let c = f.codomain();
    if g.codomain() != c {
        return Err(Error::InvalidMorphism("legs must share a codomain".into()));
    }
    let r_block = |e: Element| d.r.block_of(e.first().expect("blocks are nonempty"));
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(c.atom_count());
    for x in 0..c.atom_count() {
        let ab = d.a.blocks()[f.dual()[x]];
        let sb = d.s.blocks()[g.dual()[x]];
        if r_block(ab) != r_block(sb) {
            return Err(Error::IncompatibleLegs(x));
        }
        candidates.push((ab & sb).atoms().collect());
    }
    let total = candidates.iter().try_fold(1usize, |acc, v| acc.checked_mul(v.len()));
    match total {
        Some(0) => return Ok(Vec::new()),
        Some(t) if t <= MEDIATOR_LIMIT => {}
        _ => return Err(Error::TooLarge("more than 2^16 mediating morphisms".into())),
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; candidates.len()];
    loop {
        let dual = idx.iter().zip(&candidates).map(|(&i, v)| v[i]).collect();
        out.push(Morphism::from_dual(d.algebra(), c, dual)?);
        let mut k = candidates.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
