//! Sunflower (Δ-system) search in finite set families.
//!
//! The search follows the Erdős–Rado argument: a maximal pairwise disjoint
//! subfamily either already has `k` members, or its union is small and some
//! element of it is popular, in which case we recurse on the sets through
//! that element with the element moved into the kernel. When that fails on
//! a small family an exhaustive scan over `k`-subfamilies decides the
//! question.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};

/// `k`-subfamilies are scanned exhaustively only below this count.
pub const EXHAUSTIVE_LIMIT: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower<T> {
    pub kernel: BTreeSet<T>,
    /// Indices into the family, increasing.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SunflowerSearch<T> {
    Found(Sunflower<T>),
    /// No sunflower was found; `exhaustive` tells whether every
    /// `k`-subfamily was examined.
    NotFound { exhaustive: bool },
}

impl<T> SunflowerSearch<T> {
    pub fn found(&self) -> Option<&Sunflower<T>> {
        match self {
            SunflowerSearch::Found(s) => Some(s),
            SunflowerSearch::NotFound { .. } => None,
        }
    }
}

/// `s! · (k−1)^s`: families of more than this many distinct `s`-sets always
/// contain a sunflower with `k` petals.
pub fn erdos_rado_bound(s: u32, k: u32) -> u128 {
    (1..=s as u128).product::<u128>() * (k.saturating_sub(1) as u128).pow(s)
}

/// The common kernel of `members`, if their pairwise intersections all
/// coincide.
pub fn sunflower_kernel<T: Ord + Clone>(family: &[BTreeSet<T>], members: &[usize]) -> Option<BTreeSet<T>> {
    let mut pairs = members.iter().tuple_combinations::<(_, _)>();
    let Some((&a, &b)) = pairs.next() else {
        return members.first().map(|&i| family[i].clone());
    };
    let kernel: BTreeSet<T> = family[a].intersection(&family[b]).cloned().collect();
    pairs
        .all(|(&i, &j)| family[i].intersection(&family[j]).eq(kernel.iter()))
        .then_some(kernel)
}

pub fn sunflower<T: Ord + Clone>(family: &[BTreeSet<T>], k: usize) -> Result<SunflowerSearch<T>> {
    if k < 2 {
        return Err(Error::Precondition(format!("sunflower size must be at least 2, got {k}")));
    }
    let all: Vec<usize> = (0..family.len()).collect();
    if let Some(mut members) = grow(family, &all, &BTreeSet::new(), k) {
        members.sort_unstable();
        let kernel = sunflower_kernel(family, &members).expect("search returns sunflowers");
        return Ok(SunflowerSearch::Found(Sunflower { kernel, members }));
    }
    let count = binomial(family.len() as u128, k as u128);
    if count > EXHAUSTIVE_LIMIT {
        return Ok(SunflowerSearch::NotFound { exhaustive: false });
    }
    for combo in (0..family.len()).combinations(k) {
        if let Some(kernel) = sunflower_kernel(family, &combo) {
            return Ok(SunflowerSearch::Found(Sunflower { kernel, members: combo }));
        }
    }
    Ok(SunflowerSearch::NotFound { exhaustive: true })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Recursive step on the sets `idx`, all of which contain `kernel`.
fn grow<T: Ord + Clone>(
    family: &[BTreeSet<T>],
    idx: &[usize],
    kernel: &BTreeSet<T>,
    k: usize,
) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    let mut union: BTreeSet<&T> = BTreeSet::new();
    for &i in idx {
        let petal: Vec<&T> = family[i].iter().filter(|x| !kernel.contains(x)).collect();
        if petal.iter().all(|x| !union.contains(x)) {
            union.extend(petal);
            chosen.push(i);
            if chosen.len() == k {
                return Some(chosen);
            }
        }
    }
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for &i in idx {
        for x in family[i].iter().filter(|x| union.contains(x)) {
            *counts.entry(x).or_default() += 1;
        }
    }
    let mut popular: Vec<(&T, usize)> = counts.into_iter().filter(|&(_, c)| c >= k).collect();
    popular.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    for (x, _) in popular {
        let sub: Vec<usize> = idx.iter().copied().filter(|&i| family[i].contains(x)).collect();
        let mut inner = kernel.clone();
        inner.insert(x.clone());
        if let Some(found) = grow(family, &sub, &inner, k) {
            return Some(found);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u32]]) -> Vec<BTreeSet<u32>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn common_element() {
        let f = fam(&[&[1, 2], &[1, 3], &[1, 4]]);
        let s = sunflower(&f, 3).unwrap();
        let s = s.found().unwrap();
        assert_eq!(s.kernel, [1].into_iter().collect());
        assert_eq!(s.members, vec![0, 1, 2]);
    }

    #[test]
    fn disjoint_family() {
        let f = fam(&[&[1, 2], &[3], &[4, 5, 6], &[7]]);
        let s = sunflower(&f, 4).unwrap();
        let s = s.found().unwrap();
        assert!(s.kernel.is_empty());
        assert_eq!(s.members, vec![0, 1, 2, 3]);
    }

    #[test]
    fn triangle_has_no_sunflower() {
        let f = fam(&[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(sunflower(&f, 3).unwrap(), SunflowerSearch::NotFound { exhaustive: true });
    }

    #[test]
    fn small_k_rejected() {
        assert!(sunflower(&fam(&[&[1]]), 1).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(erdos_rado_bound(2, 3), 8);
        assert_eq!(erdos_rado_bound(3, 3), 48);
        assert_eq!(erdos_rado_bound(1, 4), 3);
    }

    #[test]
    fn kernel_check() {
        let f = fam(&[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(sunflower_kernel(&f, &[0, 1]), Some([1].into_iter().collect()));
        assert_eq!(sunflower_kernel(&f, &[0, 1, 2]), None);
    }

    // The recursive search agrees with exhaustive search on small families.
    #[test]
    fn agrees_with_exhaustive() {
        let universe: Vec<BTreeSet<u32>> = (0..4u32)
            .combinations(2)
            .chain((0..4u32).combinations(1))
            .map(|v| v.into_iter().collect())
            .collect();
        for mask in 0u32..1 << universe.len() {
            let f: Vec<BTreeSet<u32>> =
                universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
            let exists = (0..f.len()).combinations(3).any(|c| sunflower_kernel(&f, &c).is_some());
            let got = sunflower(&f, 3).unwrap();
            assert_eq!(got.found().is_some(), exists);
            if let Some(s) = got.found() {
                assert_eq!(sunflower_kernel(&f, &s.members).as_ref(), Some(&s.kernel));
            }
        }
    }
}
