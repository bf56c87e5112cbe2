//! Step functions on the Stone space of a finite algebra.
//!
//! The Stone space of a finite algebra is its atom set, so a continuous
//! function is one value per atom and the sup norm is a maximum over atoms.
//! Everything here is generic over the scalar type; use exact rationals
//! ([`crate::Rational`]) when the value of a norm matters exactly.

use std::fmt;

use num_traits::Signed;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};

/// Ordered field-like scalars: exact rationals, integers-as-rationals, or
/// floats.
pub trait Scalar: Signed + PartialOrd + Clone + fmt::Debug + fmt::Display {}

impl<T: Signed + PartialOrd + Clone + fmt::Debug + fmt::Display> Scalar for T {}

fn max_of<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |m, v| if v > m { v } else { m })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<T> {
    algebra: FiniteAlgebra,
    values: Vec<T>,
}

impl<T: Scalar> StepFunction<T> {
    pub fn new(algebra: FiniteAlgebra, values: Vec<T>) -> Result<Self> {
        if values.len() != algebra.atom_count() {
            return Err(Error::LengthMismatch(format!(
                "{} values for {} atoms",
                values.len(),
                algebra.atom_count()
            )));
        }
        Ok(StepFunction { algebra, values })
    }

    /// `1_e`.
    pub fn indicator(algebra: FiniteAlgebra, e: Element) -> Result<Self> {
        algebra.check(e)?;
        let values = (0..algebra.atom_count())
            .map(|a| if e.contains(a) { T::one() } else { T::zero() })
            .collect();
        Ok(StepFunction { algebra, values })
    }

    pub fn constant(algebra: FiniteAlgebra, value: T) -> Self {
        StepFunction { algebra, values: vec![value; algebra.atom_count()] }
    }

    pub fn algebra(&self) -> FiniteAlgebra {
        self.algebra
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn norm(&self) -> T {
        max_of(self.values.iter().map(Signed::abs))
    }

    /// `c[f, p, q] = {f ≤ p}`, the smallest clopen set between the level
    /// sets `{f ≤ p}` and `{f < q}`.
    pub fn clopen_bracket(&self, p: &T, q: &T) -> Result<Element> {
        if p >= q {
            return Err(Error::EmptyLevelRange);
        }
        Ok(Element::from_atoms(self.values.iter().enumerate().filter(|(_, v)| *v <= p).map(|(a, _)| a)))
    }

    /// `{c[f, p, q] : p < q in grid}`; since the bracket does not depend on
    /// `q`, one set per grid point below the top one.
    pub fn bracket_profile(&self, grid: &[T]) -> Vec<Element> {
        let Some(top) = grid.iter().cloned().reduce(|a, b| if b > a { b } else { a }) else {
            return Vec::new();
        };
        grid.iter()
            .filter(|p| **p < top)
            .map(|p| self.clopen_bracket(p, &top).expect("p is below the top of the grid"))
            .collect()
    }
}

/// `‖Σ λ_i f_i‖` computed atom by atom.
pub fn sup_norm<T: Scalar>(coeffs: &[T], fs: &[StepFunction<T>]) -> Result<T> {
    if coeffs.len() != fs.len() {
        return Err(Error::LengthMismatch(format!("{} coefficients for {} functions", coeffs.len(), fs.len())));
    }
    let Some(first) = fs.first() else {
        return Ok(T::zero());
    };
    let alg = first.algebra;
    if let Some(other) = fs.iter().find(|f| f.algebra != alg) {
        return Err(Error::AmbientMismatch { left: alg.atom_count(), right: other.algebra.atom_count() });
    }
    Ok(max_of((0..alg.atom_count()).map(|atom| {
        coeffs
            .iter()
            .zip(fs)
            .fold(T::zero(), |acc, (l, f)| acc + l.clone() * f.values[atom].clone())
            .abs()
    })))
}

/// Assignment of chain positions to the labels `c_1, .., c_{2n}` of the
/// sum `Σ_i 1_{c_{2i}} − 1_{c_{2i−1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// `c_1 ⊂ c_2 ⊂ ⋯ ⊂ c_{2n}`.
    Nested,
    /// `c_1 ⊂ c_3 ⊂ ⋯ ⊂ c_{2n−1} ⊂ c_{2n} ⊂ c_{2n−2} ⊂ ⋯ ⊂ c_2`.
    Interleaved,
    /// `positions[j]` is the chain position of `c_{j+1}`.
    Explicit(Vec<usize>),
}

impl Pairing {
    /// Chain position of each label, for a chain of length `2n`.
    pub fn positions(&self, n: usize) -> Result<Vec<usize>> {
        match self {
            Pairing::Nested => Ok((0..2 * n).collect()),
            Pairing::Interleaved => {
                let mut pos = vec![0; 2 * n];
                for i in 1..=n {
                    pos[2 * i - 2] = i - 1;
                    pos[2 * i - 1] = 2 * n - i;
                }
                Ok(pos)
            }
            Pairing::Explicit(p) => {
                let mut seen = vec![false; 2 * n];
                if p.len() != 2 * n || p.iter().any(|&x| x >= 2 * n || std::mem::replace(&mut seen[x], true)) {
                    return Err(Error::LengthMismatch(format!("{p:?} is not a permutation of 0..{}", 2 * n)));
                }
                Ok(p.clone())
            }
        }
    }
}

/// `‖Σ_{i=1}^n 1_{c_{2i}} − 1_{c_{2i−1}}‖` for a chain listed in increasing
/// order, with labels placed on the chain by `pairing`.
pub fn chain_norm<T: Scalar>(alg: &FiniteAlgebra, chain: &[Element], pairing: &Pairing) -> Result<T> {
    if chain.is_empty() || !chain.len().is_multiple_of(2) {
        return Err(Error::LengthMismatch(format!("chain of length {} is not 2n with n ≥ 1", chain.len())));
    }
    for &c in chain {
        alg.check(c)?;
    }
    if let Some(i) = chain.windows(2).position(|w| !w[0].is_below(w[1])) {
        return Err(Error::NotAChain(i));
    }
    let n = chain.len() / 2;
    let pos = pairing.positions(n)?;
    let mut coeffs = Vec::with_capacity(2 * n);
    let mut fs = Vec::with_capacity(2 * n);
    for i in 0..n {
        fs.push(StepFunction::indicator(*alg, chain[pos[2 * i + 1]])?);
        coeffs.push(T::one());
        fs.push(StepFunction::indicator(*alg, chain[pos[2 * i]])?);
        coeffs.push(-T::one());
    }
    sup_norm(&coeffs, &fs)
}

/// The strict chain `{0} ⊂ {0,1} ⊂ ⋯ ⊂ {0,..,2n−1}` inside `2n+1` atoms.
pub fn standard_chain(n: usize) -> Result<(FiniteAlgebra, Vec<Element>)> {
    let alg = FiniteAlgebra::new(2 * n + 1)?;
    Ok((alg, (0..2 * n).map(|p| Element::from_atoms(0..=p)).collect()))
}

/// `δℤ ∩ [−bound, bound]`, in increasing order.
pub fn delta_grid<T: Scalar>(delta: &T, bound: &T) -> Vec<T> {
    assert!(*delta > T::zero(), "grid step must be positive");
    let mut up = Vec::new();
    let mut x = T::zero();
    while x <= *bound {
        up.push(x.clone());
        x = x + delta.clone();
    }
    let mut grid: Vec<T> = up.iter().skip(1).rev().map(|v| -v.clone()).collect();
    grid.extend(up);
    grid
}

/// Tolerance `n · max|λ_i| · 3δ` within which two tuples with identical
/// bracket profiles on a `δ`-grid have equal combination norms.
pub fn transfer_tolerance<T: Scalar>(lambdas: &[T], delta: &T) -> T {
    let max_l = max_of(lambdas.iter().map(Signed::abs));
    let n = lambdas.iter().fold(T::zero(), |acc, _| acc + T::one());
    let three = T::one() + T::one() + T::one();
    n * max_l * three * delta.clone()
}
