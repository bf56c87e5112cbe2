//! Finite tight filtrations `B_0 ⊂ B_1 ⊂ … ⊂ B_m`.
//!
//! `B_0` is the two-element algebra and each `B_{α+1}` is the push-out of
//! `B_α ⊇ R_α ⊆ S_α`. All step algebras are tracked inside the final algebra
//! so that skeleton subalgebras `E(Γ) = ⟨S_i : i ∈ Γ⟩` can be formed
//! directly. At finite length there are no limit stages.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FiniteAlgebra};
use crate::elim::{all_signs_vanish_unchecked, eliminate};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::poly::BoolPoly;
use crate::pushout::{amalgamate, verify_pushout, AmalgamInput, Diagram, PushoutCheck};
use crate::subalgebra::SubalgebraPartition;

/// A set of step indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(BTreeSet<usize>);

impl IndexSet {
    pub fn new() -> Self {
        IndexSet(BTreeSet::new())
    }

    pub fn range(end: usize) -> Self {
        IndexSet((0..end).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        self.0.insert(i)
    }

    pub fn remove(&mut self, i: usize) -> bool {
        self.0.remove(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `Γ ∩ γ`: the members below `bound`.
    pub fn below(&self, bound: usize) -> IndexSet {
        IndexSet(self.0.range(..bound).copied().collect())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet(iter.into_iter().collect())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// File-level description of one step. The push-out is computed unless the
/// resulting algebra and embeddings are given explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    /// `R_α` as blocks of the atoms of `B_α`.
    pub r_blocks: Vec<Vec<usize>>,
    /// Atom count of `S_α`.
    pub s_atoms: usize,
    /// The copy of `R_α` inside `S_α`, as blocks of the atoms of `S_α`.
    pub s_r_blocks: Vec<Vec<usize>>,
    /// Block of `s_r_blocks` matched with each block of `r_blocks`;
    /// identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<usize>>,
    /// Explicit `B_{α+1}` atom count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_atoms: Option<usize>,
    /// Explicit dual map `atoms(B_{α+1}) → atoms(B_α)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed_base: Option<Vec<usize>>,
    /// Explicit dual map `atoms(B_{α+1}) → atoms(S_α)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed_s: Option<Vec<usize>>,
    /// Earlier steps whose skeleton contains `R_α`; computed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
}

impl StepSpec {
    /// A step with `R_α = {0,1}` and `S_α` the algebra with `s_atoms` atoms.
    pub fn trivial_base(s_atoms: usize) -> Self {
        StepSpec {
            r_blocks: Vec::new(),
            s_atoms,
            s_r_blocks: vec![(0..s_atoms).collect()],
            matching: None,
            next_atoms: None,
            embed_base: None,
            embed_s: None,
            support: None,
        }
    }
}

#[derive(Clone, Debug)]
struct Step {
    spec: StepSpec,
    r: SubalgebraPartition,
    r_in_s: SubalgebraPartition,
    matching: Vec<usize>,
    embed_base: Morphism,
    embed_s: Morphism,
    support: IndexSet,
}

/// A finite filtration together with the images of every `S_α` and `R_α`
/// in the final algebra.
#[derive(Clone, Debug)]
pub struct Filtration {
    initial: FiniteAlgebra,
    steps: Vec<Step>,
    max_atoms: usize,
    current: FiniteAlgebra,
    /// Images in the current final algebra of the atoms of each `S_α`.
    s_gens: Vec<Vec<Element>>,
    /// Images in the current final algebra of the blocks of each `R_α`.
    r_gens: Vec<Vec<Element>>,
}

/// Bounds for [`Filtration::random`].
#[derive(Clone, Copy, Debug)]
pub struct RandomBounds {
    pub steps: usize,
    pub max_s_atoms: usize,
    pub max_atoms: usize,
}

impl Filtration {
    /// The empty filtration over the two-element algebra.
    pub fn new(max_atoms: usize) -> Self {
        Self::with_initial(FiniteAlgebra::two(), max_atoms)
    }

    /// Starts from an arbitrary `B_0`; only a two-element `B_0` verifies.
    pub fn with_initial(initial: FiniteAlgebra, max_atoms: usize) -> Self {
        Filtration {
            initial,
            steps: Vec::new(),
            max_atoms,
            current: initial,
            s_gens: Vec::new(),
            r_gens: Vec::new(),
        }
    }

    pub fn from_specs(initial_atoms: usize, specs: &[StepSpec], max_atoms: usize) -> Result<Self> {
        let mut f = Self::with_initial(FiniteAlgebra::new(initial_atoms)?, max_atoms);
        for spec in specs {
            f.push_step(spec.clone())?;
        }
        Ok(f)
    }

    /// `m` steps with `R = {0,1}` and `S` the four-element algebra: the free
    /// algebra on `m` generators.
    pub fn free(m: usize, max_atoms: usize) -> Result<Self> {
        let specs = vec![StepSpec::trivial_base(2); m];
        Self::from_specs(1, &specs, max_atoms)
    }

    /// A seeded random filtration. Each step picks `R_α` as trivial, as
    /// generated by an element coming from an earlier `S_i`, or as generated
    /// by a random element, and then an `S_α` of at most `max_s_atoms` atoms
    /// refining it. Steps that would exceed `max_atoms` fall back to
    /// `S_α = R_α`.
    pub fn random(seed: u64, bounds: RandomBounds) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Self::new(bounds.max_atoms);
        for _ in 0..bounds.steps {
            let r = f.random_r(&mut rng, bounds.max_s_atoms.max(1));
            let k = r.block_count();
            let total = rng.gen_range(k..=bounds.max_s_atoms.max(k));
            let mut per_block = vec![1usize; k];
            for _ in k..total {
                per_block[rng.gen_range(0..k)] += 1;
            }
            let mut matching: Vec<usize> = (0..k).collect();
            matching.shuffle(&mut rng);
            let growth: usize =
                r.blocks().iter().zip(&matching).map(|(b, &j)| b.count() * per_block[j]).sum();
            if growth > bounds.max_atoms {
                per_block = vec![1; k];
            }
            let mut s_r_blocks = Vec::with_capacity(k);
            let mut next = 0;
            for &c in &per_block {
                s_r_blocks.push((next..next + c).collect());
                next += c;
            }
            let spec = StepSpec {
                r_blocks: r.atom_lists(),
                s_atoms: next,
                s_r_blocks,
                matching: Some(matching),
                next_atoms: None,
                embed_base: None,
                embed_s: None,
                support: None,
            };
            f.push_step(spec)?;
        }
        Ok(f)
    }

    fn random_r(&self, rng: &mut ChaCha8Rng, max_blocks: usize) -> SubalgebraPartition {
        let base = self.current;
        let choice = rng.gen_range(0..3);
        let gens: Vec<Element> = match choice {
            1 if !self.s_gens.is_empty() => {
                let i = rng.gen_range(0..self.s_gens.len());
                let atoms = &self.s_gens[i];
                let picked = atoms.iter().filter(|_| rng.gen_bool(0.5)).fold(Element::ZERO, |a, &b| a | b);
                vec![picked]
            }
            2 => vec![Element::from_bits(rng.gen::<u64>() & base.one().bits())],
            _ => Vec::new(),
        };
        let r = SubalgebraPartition::generate(base, &gens).expect("generators lie in the base");
        if r.block_count() > max_blocks {
            SubalgebraPartition::trivial(base)
        } else {
            r
        }
    }

    /// Appends a step. On error (including the size bound) the filtration
    /// is left unchanged.
    pub fn push_step(&mut self, spec: StepSpec) -> Result<()> {
        let alpha = self.steps.len();
        let base = self.current;
        let r = if spec.r_blocks.is_empty() {
            SubalgebraPartition::trivial(base)
        } else {
            SubalgebraPartition::from_atom_lists(base, &spec.r_blocks)?
        };
        let s_alg = FiniteAlgebra::new(spec.s_atoms)?;
        let r_in_s = SubalgebraPartition::from_atom_lists(s_alg, &spec.s_r_blocks)?;
        let matching = spec.matching.clone().unwrap_or_else(|| (0..r.block_count()).collect());
        let input = AmalgamInput::new(r.clone(), r_in_s.clone(), matching.clone())?;

        let (next, embed_base, embed_s) = match (&spec.next_atoms, &spec.embed_base, &spec.embed_s) {
            (None, None, None) => {
                let out = amalgamate(&input, self.max_atoms)?;
                (out.algebra, out.embed_a, out.embed_s)
            }
            (Some(n), Some(eb), Some(es)) => {
                if *n > self.max_atoms {
                    return Err(Error::SizeBound { atoms: *n, max: self.max_atoms });
                }
                let next = FiniteAlgebra::new(*n)?;
                (
                    next,
                    Morphism::from_dual(base, next, eb.clone())?,
                    Morphism::from_dual(s_alg, next, es.clone())?,
                )
            }
            _ => {
                return Err(Error::Precondition(
                    "explicit steps need next_atoms, embed_base and embed_s together".into(),
                ))
            }
        };

        let support = match &spec.support {
            Some(v) => {
                if let Some(&bad) = v.iter().find(|&&i| i >= alpha) {
                    return Err(Error::IndexOutOfRange { index: bad, len: alpha });
                }
                v.iter().copied().collect()
            }
            None => self.minimal_support(&r, IndexSet::range(alpha)),
        };

        for gens in self.s_gens.iter_mut().chain(self.r_gens.iter_mut()) {
            for g in gens.iter_mut() {
                *g = embed_base.apply(*g);
            }
        }
        self.s_gens.push((0..s_alg.atom_count()).map(|a| embed_s.apply(Element::singleton(a))).collect());
        self.r_gens.push(r.blocks().iter().map(|&b| embed_base.apply(b)).collect());
        self.current = next;
        self.steps.push(Step { spec, r, r_in_s, matching, embed_base, embed_s, support });
        Ok(())
    }

    /// Greedily drops indices from `start` (highest first) while the
    /// skeleton of the remainder still contains `r`. Computed inside the
    /// current algebra, before the step is pushed.
    fn minimal_support(&self, r: &SubalgebraPartition, start: IndexSet) -> IndexSet {
        let covers = |set: &IndexSet| {
            let gens: Vec<Element> = set.iter().flat_map(|i| self.s_gens[i].iter().copied()).collect();
            let e = SubalgebraPartition::generate(self.current, &gens).expect("images lie in the algebra");
            r.is_subalgebra_of(&e)
        };
        if !covers(&start) {
            return start;
        }
        let mut set = start.clone();
        for i in start.iter().rev() {
            set.remove(i);
            if !covers(&set) {
                set.insert(i);
            }
        }
        set
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn initial(&self) -> FiniteAlgebra {
        self.initial
    }

    /// The final algebra `𝔅 = B_m`.
    pub fn algebra(&self) -> FiniteAlgebra {
        self.current
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    pub fn specs(&self) -> Vec<StepSpec> {
        self.steps.iter().map(|s| s.spec.clone()).collect()
    }

    /// Recorded support `Δ_γ` of step `gamma`.
    pub fn support(&self, gamma: usize) -> Result<&IndexSet> {
        self.steps
            .get(gamma)
            .map(|s| &s.support)
            .ok_or(Error::IndexOutOfRange { index: gamma, len: self.len() })
    }

    /// Images in `𝔅` of the atoms of `S_i`.
    pub fn s_image(&self, i: usize) -> Result<&[Element]> {
        self.s_gens.get(i).map(Vec::as_slice).ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
    }

    /// Images in `𝔅` of the atoms of `R_i`.
    pub fn r_image(&self, i: usize) -> Result<&[Element]> {
        self.r_gens.get(i).map(Vec::as_slice).ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
    }

    fn check_indices(&self, gamma: &IndexSet) -> Result<()> {
        match gamma.iter().find(|&i| i >= self.len()) {
            Some(index) => Err(Error::IndexOutOfRange { index, len: self.len() }),
            None => Ok(()),
        }
    }

    /// `E(Γ) = ⟨S_i : i ∈ Γ⟩` as a subalgebra of `𝔅`.
    pub fn skeleton(&self, gamma: &IndexSet) -> Result<SubalgebraPartition> {
        self.check_indices(gamma)?;
        let gens: Vec<Element> = gamma.iter().flat_map(|i| self.s_gens[i].iter().copied()).collect();
        SubalgebraPartition::generate(self.current, &gens)
    }

    /// `R_γ ⊆ E(Γ ∩ γ)` for every `γ ∈ Γ`.
    pub fn is_saturated(&self, gamma: &IndexSet) -> Result<bool> {
        self.check_indices(gamma)?;
        for g in gamma.iter() {
            let e = self.skeleton(&gamma.below(g))?;
            if !self.r_gens[g].iter().all(|&b| e.contains(b)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Closes `Γ` under the recorded supports: `Γ ∪ Γ' ∪ Γ'' ∪ ⋯`.
    pub fn support_closure(&self, gamma: &IndexSet) -> Result<IndexSet> {
        self.check_indices(gamma)?;
        let mut out = gamma.clone();
        let mut frontier: Vec<usize> = gamma.to_vec();
        while let Some(g) = frontier.pop() {
            for d in self.steps[g].support.iter() {
                if out.insert(d) {
                    frontier.push(d);
                }
            }
        }
        Ok(out)
    }

    /// A saturated `Γ_H` with `H ⊆ E(Γ_H)`.
    ///
    /// Starts from the shortest prefix `{0..p}` whose skeleton covers `H`,
    /// drops indices greedily (highest first) while coverage is kept, then
    /// closes under supports.
    pub fn saturate(&self, h: &[Element]) -> Result<IndexSet> {
        for &x in h {
            self.current.check(x)?;
        }
        let covers = |set: &IndexSet| -> Result<bool> {
            let e = self.skeleton(set)?;
            Ok(h.iter().all(|&x| e.contains(x)))
        };
        let mut prefix = None;
        for p in 0..=self.len() {
            if covers(&IndexSet::range(p))? {
                prefix = Some(p);
                break;
            }
        }
        let p = prefix.ok_or_else(|| {
            Error::Precondition("the step algebras do not generate the final algebra".into())
        })?;
        let mut set = IndexSet::range(p);
        for i in (0..p).rev() {
            set.remove(i);
            if !covers(&set)? {
                set.insert(i);
            }
        }
        self.support_closure(&set)
    }

    /// The square `E(Γ₁∩Γ₂) ⊆ E(Γ₁), E(Γ₂) ⊆ E(Γ₁∪Γ₂)` checked as a push-out.
    pub fn check_skeleton_pushout(&self, g1: &IndexSet, g2: &IndexSet) -> Result<PushoutCheck> {
        let meet = g1.intersection(g2);
        for g in [g1, g2, &meet] {
            if !self.is_saturated(g)? {
                return Err(Error::NotSaturated(g.to_vec()));
            }
        }
        let top = self.skeleton(&g1.union(g2))?;
        let a = self.skeleton(g1)?.relative_to(&top)?;
        let s = self.skeleton(g2)?.relative_to(&top)?;
        let r = self.skeleton(&meet)?.relative_to(&top)?;
        Ok(verify_pushout(&Diagram::new(a, s, r)?))
    }

    /// Elements `r_i^- ≤ a_i ≤ r_i^+` of `E(Δ)` on which `P` vanishes for
    /// every choice of signs.
    ///
    /// Coordinates are handled in order. For coordinate `k`, the interval
    /// bounds of `P = 0` in `x_k` are evaluated with the already chosen
    /// `r_j^±` (all sign patterns) before `k` and the given `a_j` after it;
    /// the join of the lower bounds and the meet of the upper bounds are then
    /// moved into `E(Δ)` by taking the least element above and the greatest
    /// element below.
    pub fn bracket_solve(
        &self,
        delta: &IndexSet,
        gammas: &[IndexSet],
        elems: &[Element],
        p: &BoolPoly,
    ) -> Result<Vec<(Element, Element)>> {
        let n = p.arity();
        for len in [gammas.len(), elems.len()] {
            if len != n {
                return Err(Error::ArityMismatch { expected: n, found: len });
            }
        }
        for g in std::iter::once(delta).chain(gammas) {
            if !self.is_saturated(g)? {
                return Err(Error::NotSaturated(g.to_vec()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if gammas[i].intersection(&gammas[j]) != *delta {
                    return Err(Error::Precondition(format!(
                        "index sets {i} and {j} do not intersect exactly in Δ"
                    )));
                }
            }
        }
        for (i, (g, &a)) in gammas.iter().zip(elems).enumerate() {
            self.current.check(a)?;
            if !self.skeleton(g)?.contains(a) {
                return Err(Error::Precondition(format!("element {i} does not lie in its skeleton")));
            }
        }
        let alg = self.current;
        if !p.eval(elems, &alg)?.is_zero() {
            return Err(Error::Precondition("P does not vanish on the given elements".into()));
        }

        let e_delta = self.skeleton(delta)?;
        let mut lows: Vec<Element> = Vec::with_capacity(n);
        let mut highs: Vec<Element> = Vec::with_capacity(n);
        for k in 0..n {
            let interval = eliminate(p, k + 1)?;
            let mut lower = alg.zero();
            let mut upper = alg.one();
            let mut others: Vec<Element> = elems[k + 1..].to_vec();
            others.splice(0..0, lows.iter().copied());
            for signs in 0..1usize << k {
                for j in 0..k {
                    others[j] = if signs >> j & 1 == 1 { highs[j] } else { lows[j] };
                }
                lower = lower | interval.lower.eval_unchecked(&others, alg.atom_count());
                upper = upper & interval.upper.eval_unchecked(&others, alg.atom_count());
            }
            let r_minus = e_delta.upper_unchecked(lower);
            let r_plus = e_delta.lower_unchecked(upper);
            let a = elems[k];
            if !(lower.is_below(r_minus) && r_minus.is_below(a) && a.is_below(r_plus) && r_plus.is_below(upper)) {
                return Err(Error::SolverFailure(format!(
                    "canonical approximants do not sandwich coordinate {}",
                    k + 1
                )));
            }
            lows.push(r_minus);
            highs.push(r_plus);
        }
        if !all_signs_vanish_unchecked(p, &lows, &highs, alg.atom_count()) {
            return Err(Error::SolverFailure("P does not vanish on every sign choice".into()));
        }
        Ok(lows.into_iter().zip(highs).collect())
    }
}

/// Per-step verification outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCheck {
    pub index: usize,
    pub base_embedding_injective: bool,
    pub s_embedding_injective: bool,
    /// Both routes `R_α → B_α → B_{α+1}` and `R_α → S_α → B_{α+1}` agree.
    pub r_inside_s: bool,
    /// `R_α` lies in the skeleton of its recorded support.
    pub support_covers_r: bool,
    /// Push-out conditions, when the images could be formed.
    pub pushout: Option<PushoutCheck>,
}

impl StepCheck {
    pub fn holds(&self) -> bool {
        self.base_embedding_injective
            && self.s_embedding_injective
            && self.r_inside_s
            && self.support_covers_r
            && self.pushout.is_some_and(|p| p.holds())
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.base_embedding_injective {
            v.push("B_α → B_{α+1} is not injective".to_string());
        }
        if !self.s_embedding_injective {
            v.push("S_α → B_{α+1} is not injective".to_string());
        }
        if !self.r_inside_s {
            v.push("R_α is not contained in S_α".to_string());
        }
        if !self.support_covers_r {
            v.push("recorded support does not contain R_α".to_string());
        }
        match self.pushout {
            Some(p) => v.extend(p.violations().into_iter().map(String::from)),
            None => v.push("push-out square could not be formed".to_string()),
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationCheck {
    pub initial_two_element: bool,
    pub steps: Vec<StepCheck>,
}

impl FiltrationCheck {
    pub fn holds(&self) -> bool {
        self.initial_two_element && self.steps.iter().all(StepCheck::holds)
    }

    pub fn first_failing_step(&self) -> Option<usize> {
        self.steps.iter().find(|s| !s.holds()).map(|s| s.index)
    }
}

pub fn verify_filtration(f: &Filtration) -> FiltrationCheck {
    let mut checks = Vec::with_capacity(f.len());
    // Rebuild the per-step images inside B_{α+1}, independently of the
    // bookkeeping kept for the final algebra.
    let mut s_local: Vec<Vec<Element>> = Vec::new();
    let mut base = f.initial;
    for (index, step) in f.steps.iter().enumerate() {
        let support_covers_r = {
            let gens: Vec<Element> =
                step.support.iter().flat_map(|i| s_local[i].iter().copied()).collect();
            let e = SubalgebraPartition::generate(base, &gens).expect("images lie in the base");
            step.r.is_subalgebra_of(&e)
        };
        let eb = &step.embed_base;
        let es = &step.embed_s;
        let r_inside_s = step
            .r
            .blocks()
            .iter()
            .zip(&step.matching)
            .all(|(&b, &j)| eb.apply(b) == es.apply(step.r_in_s.blocks()[j]));
        let pushout = match (eb.image(), es.image()) {
            (Ok(a), Ok(s)) if r_inside_s => {
                let r_blocks = step.r.blocks().iter().map(|&b| eb.apply(b)).collect();
                SubalgebraPartition::from_blocks(eb.codomain(), r_blocks)
                    .and_then(|r| Diagram::new(a, s, r))
                    .ok()
                    .map(|d| verify_pushout(&d))
            }
            _ => None,
        };
        checks.push(StepCheck {
            index,
            base_embedding_injective: eb.is_injective(),
            s_embedding_injective: es.is_injective(),
            r_inside_s,
            support_covers_r,
            pushout,
        });
        for gens in s_local.iter_mut() {
            for g in gens.iter_mut() {
                *g = eb.apply(*g);
            }
        }
        s_local.push((0..es.domain().atom_count()).map(|a| es.apply(Element::singleton(a))).collect());
        base = eb.codomain();
    }
    FiltrationCheck { initial_two_element: f.initial.atom_count() == 1, steps: checks }
}
