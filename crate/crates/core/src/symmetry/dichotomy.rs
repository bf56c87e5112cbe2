//! An exploratory scanner for the two alternatives on a family of element
//! sets `H_1, …, H_N` and a polynomial `P` of arity `n`:
//!
//! 1. a subfamily `H₀` with at least `m` members such that `P(a) ≠ 0`
//!    whenever `a_i ∈ H_i` for distinct members `H_1, …, H_n` of `H₀`;
//! 2. subfamilies `𝓗_1, …, 𝓗_n`, each with at least `m` members, such that
//!    every transversal `(H_1, …, H_n) ∈ 𝓗_1 × ⋯ × 𝓗_n` admits `a_i ∈ H_i`
//!    with `P(a) = 0`.
//!
//! For finite families neither alternative need hold; the scan reports what
//! it found. Small families are searched exhaustively, larger ones by seeded
//! sampling. Every witness is re-checked by brute force before it is
//! returned.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::filtration::{Filtration, IndexSet};
use crate::poly::BoolPoly;
use crate::subalgebra::SubalgebraPartition;
use crate::symmetry::bracket::{bracket_of, gp_member};
use crate::symmetry::sunflower::sunflower;

/// Shared subalgebras with more blocks than this are not used for pruning.
const MAX_PRUNING_BLOCKS: usize = 8;
/// Exhaustive search over `𝓗_1, …, 𝓗_{n−1}` is skipped above this count.
const EXHAUSTIVE_CHOICES: u128 = 200_000;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub seed: u64,
    /// Families up to this size are searched exhaustively.
    pub exhaustive_limit: usize,
    /// Restarts per alternative in sampling mode.
    pub samples: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { seed: 0, exhaustive_limit: 12, samples: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub family_size: usize,
    pub arity: usize,
    pub threshold: usize,
    pub mode: ScanMode,
    /// Largest subfamily found with the property of alternative (1).
    pub largest_free_subfamily: Vec<usize>,
    /// True when `largest_free_subfamily` is known to be maximum.
    pub free_search_exhaustive: bool,
    /// Members of `H₀`, when at least `threshold` were found.
    pub alternative_one: Option<Vec<usize>>,
    /// `𝓗_1, …, 𝓗_n`, when found.
    pub alternative_two: Option<Vec<Vec<usize>>>,
    /// True when the search for alternative (2) covered every choice.
    pub cover_search_exhaustive: bool,
    /// True when some of the reported `𝓗_i` share members.
    pub alternative_two_overlaps: bool,
    /// Block count of the shared subalgebra used for pruning.
    pub shared_blocks: usize,
}

impl DichotomyReport {
    pub fn alternatives_found(&self) -> usize {
        usize::from(self.alternative_one.is_some()) + usize::from(self.alternative_two.is_some())
    }
}

/// Runs the scan over members whose elements lie in the final algebra of `f`.
pub fn dichotomy_scan(
    f: &Filtration,
    family: &[Vec<Element>],
    p: &BoolPoly,
    m: usize,
    opts: &ScanOptions,
) -> Result<DichotomyReport> {
    let alg = f.algebra();
    let n = p.arity();
    if n == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    if m == 0 {
        return Err(Error::Precondition("threshold must be positive".into()));
    }
    for h in family {
        for &a in h {
            alg.check(a)?;
        }
    }
    let big = family.len();
    let mode = if big <= opts.exhaustive_limit { ScanMode::Exhaustive } else { ScanMode::Sampled };
    let shared = match mode {
        ScanMode::Exhaustive => SubalgebraPartition::trivial(alg),
        ScanMode::Sampled => shared_subalgebra(f, family)?,
    };
    let mut oracle = Oracle::new(alg, family, p, &shared);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let (free, free_exhaustive) = match mode {
        ScanMode::Exhaustive => (largest_free_exhaustive(&mut oracle, big, n), true),
        ScanMode::Sampled => (largest_free_sampled(&mut oracle, big, n, opts.samples, &mut rng), false),
    };
    let choices = binomial(big, m).saturating_pow(n as u32 - 1);
    let (cover, cover_exhaustive) = if mode == ScanMode::Exhaustive && choices <= EXHAUSTIVE_CHOICES {
        (cover_exhaustive(&mut oracle, big, n, m), true)
    } else {
        (cover_sampled(&mut oracle, big, n, m, opts.samples, &mut rng), false)
    };

    let alternative_one = (free.len() >= m).then(|| free.clone());
    if !brute_free(alg, family, p, &free)? {
        return Err(Error::SolverFailure("free subfamily failed re-validation".into()));
    }
    if let Some(c) = &cover {
        if !brute_cover(alg, family, p, c)? {
            return Err(Error::SolverFailure("covering families failed re-validation".into()));
        }
    }
    let alternative_two_overlaps = cover.as_ref().is_some_and(|c| {
        c.iter().tuple_combinations().any(|(x, y)| x.iter().any(|i| y.contains(i)))
    });
    Ok(DichotomyReport {
        family_size: big,
        arity: n,
        threshold: m,
        mode,
        largest_free_subfamily: free,
        free_search_exhaustive: free_exhaustive,
        alternative_one,
        alternative_two: cover,
        cover_search_exhaustive: cover_exhaustive,
        alternative_two_overlaps,
        shared_blocks: shared.block_count(),
    })
}

/// `E(Δ)` for `Δ` the support closure of a sunflower kernel of the
/// saturated index sets of the members, or of their common part when no
/// sunflower is found.
fn shared_subalgebra(f: &Filtration, family: &[Vec<Element>]) -> Result<SubalgebraPartition> {
    let alg = f.algebra();
    if f.is_empty() || family.is_empty() {
        return Ok(SubalgebraPartition::trivial(alg));
    }
    let gammas: Vec<BTreeSet<usize>> = family
        .iter()
        .map(|h| f.saturate(h).map(|g| g.iter().collect()))
        .collect::<Result<_>>()?;
    let k = gammas.len().clamp(2, 3);
    let kernel = match sunflower(&gammas, k)?.found() {
        Some(s) => s.kernel.clone(),
        None => gammas.iter().skip(1).fold(gammas[0].clone(), |acc, g| &acc & g),
    };
    let delta = f.support_closure(&kernel.into_iter().collect::<IndexSet>())?;
    let r = f.skeleton(&delta)?;
    Ok(if r.block_count() <= MAX_PRUNING_BLOCKS { r } else { SubalgebraPartition::trivial(alg) })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// Memoised answers to "some `a ∈ H_{t_1} × ⋯ × H_{t_n}` has `P(a) = 0`".
struct Oracle<'a> {
    alg: FiniteAlgebra,
    family: &'a [Vec<Element>],
    p: &'a BoolPoly,
    shared: &'a SubalgebraPartition,
    zero: HashMap<Vec<usize>, bool>,
    /// Tuples of `(lower, upper)` approximations known to force `P = 0`.
    forced: BTreeMap<Vec<(Element, Element)>, bool>,
}

impl<'a> Oracle<'a> {
    fn new(alg: FiniteAlgebra, family: &'a [Vec<Element>], p: &'a BoolPoly, shared: &'a SubalgebraPartition) -> Self {
        Oracle { alg, family, p, shared, zero: HashMap::new(), forced: BTreeMap::new() }
    }

    fn has_zero(&mut self, tuple: &[usize]) -> bool {
        if let Some(&z) = self.zero.get(tuple) {
            return z;
        }
        let z = tuple
            .iter()
            .map(|&t| self.family[t].iter().copied())
            .multi_cartesian_product()
            .any(|a| self.vanishes(&a));
        self.zero.insert(tuple.to_vec(), z);
        z
    }

    // Principal brackets with a `G_P` witness force `P(a) = 0` for every
    // `a` with the same approximations; the cache is keyed by those.
    fn vanishes(&mut self, a: &[Element]) -> bool {
        if self.shared.is_trivial() {
            return self.p.eval_unchecked(a, self.alg.atom_count()).is_zero();
        }
        let key: Vec<(Element, Element)> = a
            .iter()
            .map(|&x| (self.shared.lower_unchecked(x), self.shared.upper_unchecked(x)))
            .collect();
        if self.forced.get(&key) == Some(&true) {
            return true;
        }
        if !self.forced.contains_key(&key) {
            let brackets: Option<Vec<_>> = a.iter().map(|&x| bracket_of(x, self.shared).ok()).collect();
            let forced = brackets
                .and_then(|b| gp_member(&b, self.p).ok().flatten())
                .is_some();
            self.forced.insert(key, forced);
            if forced {
                return true;
            }
        }
        self.p.eval_unchecked(a, self.alg.atom_count()).is_zero()
    }

    /// True if adding `new` to the free set `cur` keeps it free.
    fn extends_free(&mut self, cur: &[usize], new: usize, n: usize) -> bool {
        if cur.len() + 1 < n {
            return true;
        }
        for rest in cur.iter().copied().permutations(n - 1) {
            for pos in 0..n {
                let mut t = rest.clone();
                t.insert(pos, new);
                if self.has_zero(&t) {
                    return false;
                }
            }
        }
        true
    }

    /// Members `j` such that every `(h_1, …, h_{n−1}, j)` with `h_i ∈ 𝓗_i`
    /// has a zero.
    fn neighbourhood(&mut self, chosen: &[Vec<usize>], candidates: impl Iterator<Item = usize>) -> Vec<usize> {
        let prefixes: Vec<Vec<usize>> = if chosen.is_empty() {
            vec![Vec::new()]
        } else {
            chosen.iter().map(|c| c.iter().copied()).multi_cartesian_product().collect()
        };
        candidates
            .filter(|&j| {
                prefixes.iter().all(|pre| {
                    let mut t = pre.clone();
                    t.push(j);
                    self.has_zero(&t)
                })
            })
            .collect()
    }
}

fn largest_free_exhaustive(o: &mut Oracle, big: usize, n: usize) -> Vec<usize> {
    let bad: Vec<u64> = if n > big {
        Vec::new()
    } else {
        (0..big)
            .combinations(n)
            .filter(|c| c.iter().copied().permutations(n).any(|t| o.has_zero(&t)))
            .map(|c| c.iter().fold(0u64, |acc, &i| acc | 1 << i))
            .collect()
    };
    for size in (0..=big).rev() {
        for c in (0..big).combinations(size) {
            let mask = c.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if bad.iter().all(|&b| b & mask != b) {
                return c;
            }
        }
    }
    Vec::new()
}

fn largest_free_sampled(o: &mut Oracle, big: usize, n: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..big).collect();
    for _ in 0..samples.max(1) {
        order.shuffle(rng);
        let mut cur: Vec<usize> = Vec::new();
        for &i in &order {
            if o.extends_free(&cur, i, n) {
                cur.push(i);
            }
        }
        if cur.len() > best.len() {
            best = cur;
        }
    }
    best.sort_unstable();
    best
}

fn cover_exhaustive(o: &mut Oracle, big: usize, n: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    for disjoint in [true, false] {
        let mut chosen = Vec::new();
        if let Some(found) = cover_rec(o, big, n, m, disjoint, &mut chosen) {
            return Some(found);
        }
    }
    None
}

fn cover_rec(
    o: &mut Oracle,
    big: usize,
    n: usize,
    m: usize,
    disjoint: bool,
    chosen: &mut Vec<Vec<usize>>,
) -> Option<Vec<Vec<usize>>> {
    let used: BTreeSet<usize> = if disjoint { chosen.iter().flatten().copied().collect() } else { BTreeSet::new() };
    let free: Vec<usize> = (0..big).filter(|i| !used.contains(i)).collect();
    if chosen.len() + 1 == n {
        let last = o.neighbourhood(chosen, free.into_iter());
        return (last.len() >= m).then(|| {
            let mut out = chosen.clone();
            out.push(last);
            out
        });
    }
    for c in free.into_iter().combinations(m) {
        chosen.push(c);
        if let Some(found) = cover_rec(o, big, n, m, disjoint, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

fn cover_sampled(
    o: &mut Oracle,
    big: usize,
    n: usize,
    m: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    if m > big {
        return None;
    }
    // members grouped by the approximations of their elements
    let class = |h: &Vec<Element>| -> BTreeSet<(Element, Element)> {
        h.iter().map(|&x| (o.shared.lower_unchecked(x), o.shared.upper_unchecked(x))).collect()
    };
    let classes: Vec<BTreeSet<(Element, Element)>> = o.family.iter().map(class).collect();
    for disjoint in [true, false] {
        for _ in 0..samples.max(1) {
            let mut chosen: Vec<Vec<usize>> = Vec::new();
            let mut used: BTreeSet<usize> = BTreeSet::new();
            for _ in 0..n - 1 {
                let mut pool: Vec<usize> = (0..big).filter(|i| !(disjoint && used.contains(i))).collect();
                if pool.len() < m {
                    break;
                }
                pool.shuffle(rng);
                let seed = pool[0];
                pool.sort_by_key(|&i| classes[i] != classes[seed]);
                let pick: Vec<usize> = pool[..m].iter().copied().sorted().collect();
                used.extend(&pick);
                chosen.push(pick);
            }
            if chosen.len() + 1 != n {
                continue;
            }
            let candidates = (0..big).filter(|i| !(disjoint && used.contains(i)));
            let last = o.neighbourhood(&chosen, candidates);
            if last.len() >= m {
                chosen.push(last);
                return Some(chosen);
            }
        }
    }
    None
}

/// Direct check of alternative (1) on `members`.
fn brute_free(alg: FiniteAlgebra, family: &[Vec<Element>], p: &BoolPoly, members: &[usize]) -> Result<bool> {
    let n = p.arity();
    if members.len() < n {
        return Ok(true);
    }
    for t in members.iter().permutations(n) {
        for a in t.iter().map(|&&i| family[i].iter().copied()).multi_cartesian_product() {
            if p.eval(&a, &alg)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Direct check of alternative (2) on `cover`.
fn brute_cover(alg: FiniteAlgebra, family: &[Vec<Element>], p: &BoolPoly, cover: &[Vec<usize>]) -> Result<bool> {
    if cover.len() != p.arity() {
        return Ok(false);
    }
    for t in cover.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
        let mut any = false;
        for a in t.iter().map(|&i| family[i].iter().copied()).multi_cartesian_product() {
            if p.eval(&a, &alg)?.is_zero() {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(false);
        }
    }
    Ok(true)
}
