//! Boolean polynomials as canonical truth tables.
//!
//! Row `m` of a table holds the value of the polynomial on the assignment
//! where variable `x{i+1}` takes bit `i` of `m`. Evaluating a polynomial on
//! elements of a finite algebra is done atom by atom: an atom belongs to
//! `P(a_1, .., a_n)` exactly when the row selected by its membership pattern
//! in the `a_i` is set, which is the minterm expansion read through Stone
//! duality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::Term;

/// Largest supported arity (tables of `2^16` rows).
pub const MAX_ARITY: usize = 16;

/// Above this arity, [`BoolPoly::to_term_string`] prints minterms instead of
/// prime implicants.
const PRIME_IMPLICANT_ARITY: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolPoly {
    arity: usize,
    table: Vec<bool>,
}

impl BoolPoly {
    pub fn from_table(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if table.len() != 1 << arity {
            return Err(Error::LengthMismatch(format!(
                "truth table of arity {arity} needs {} rows, got {}",
                1usize << arity,
                table.len()
            )));
        }
        Ok(BoolPoly { arity, table })
    }

    /// Builds a polynomial from a row predicate.
    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(BoolPoly { arity, table: (0..1usize << arity).map(f).collect() })
    }

    /// The polynomial whose table is the low `2^arity` bits of `bits`.
    pub fn from_bits(arity: usize, bits: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::ArityTooLarge(arity));
        }
        Self::from_fn(arity, |m| bits >> m & 1 == 1)
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    /// The projection `x{index+1}` (zero-based `index`).
    pub fn var(arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(Error::VariableOutOfRange { index: index + 1, arity });
        }
        Self::from_fn(arity, |m| m >> index & 1 == 1)
    }

    /// Parses a term and tabulates it. The arity is the largest variable
    /// index mentioned, or `min_arity` when that is larger.
    pub fn parse(src: &str, min_arity: Option<usize>) -> Result<Self> {
        let term = Term::parse(src)?;
        let arity = term.max_var().max(min_arity.unwrap_or(0));
        term.tabulate(arity)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn row(&self, m: usize) -> bool {
        self.table[m]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| !v)
    }

    pub fn not(&self) -> BoolPoly {
        BoolPoly { arity: self.arity, table: self.table.iter().map(|v| !v).collect() }
    }

    /// Fixes variable `index` (zero-based) to `value`; the remaining
    /// variables keep their order and are renumbered consecutively.
    pub fn cofactor(&self, index: usize, value: bool) -> Result<BoolPoly> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange { index: index + 1, arity: self.arity });
        }
        let low_mask = (1usize << index) - 1;
        let table = (0..1usize << (self.arity - 1))
            .map(|r| {
                let m = (r & low_mask) | ((r & !low_mask) << 1) | (usize::from(value) << index);
                self.table[m]
            })
            .collect();
        Ok(BoolPoly { arity: self.arity - 1, table })
    }

    /// Value on a 0/1 assignment given as a row index.
    pub fn eval_bits(&self, m: usize) -> bool {
        self.table[m]
    }

    /// `P(args)` in `alg`.
    pub fn eval(&self, args: &[Element], alg: &FiniteAlgebra) -> Result<Element> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for &a in args {
            alg.check(a)?;
        }
        Ok(self.eval_unchecked(args, alg.atom_count()))
    }

    pub(crate) fn eval_unchecked(&self, args: &[Element], atom_count: usize) -> Element {
        let mut out = 0u64;
        for atom in 0..atom_count {
            let row = args
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, a)| acc | (usize::from(a.contains(atom)) << i));
            if self.table[row] {
                out |= 1u64 << atom;
            }
        }
        Element::from_bits(out)
    }

    /// True iff the two polynomials have identical truth tables, hence agree
    /// on every Boolean algebra.
    pub fn equals(&self, other: &BoolPoly) -> Result<bool> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(self.table == other.table)
    }

    /// Canonical term string: the disjunction of all prime implicants
    /// (Blake canonical form), or of all minterms for large arities.
    pub fn to_term_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.table.iter().all(|&v| v) {
            return "1".into();
        }
        let cubes = if self.arity <= PRIME_IMPLICANT_ARITY {
            self.prime_implicants()
        } else {
            let full = (1usize << self.arity) - 1;
            (0..self.table.len()).filter(|&m| self.table[m]).map(|m| (full, m)).collect()
        };
        let several = cubes.len() > 1;
        cubes
            .iter()
            .map(|&(mask, value)| {
                let lits: Vec<String> = (0..self.arity)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| {
                        if value >> i & 1 == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("!x{}", i + 1)
                        }
                    })
                    .collect();
                if several && lits.len() > 1 {
                    format!("({})", lits.join(" & "))
                } else {
                    lits.join(" & ")
                }
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Prime implicants as `(mask, value)` cubes, sorted by literal count
    /// and then by the literal pattern.
    fn prime_implicants(&self) -> Vec<(usize, usize)> {
        let n = self.arity;
        let full = (1usize << n) - 1;
        let is_implicant = |mask: usize, value: usize| {
            let free = full & !mask;
            // iterate over all subsets of the free variables
            let mut sub = free;
            loop {
                if !self.table[value | sub] {
                    return false;
                }
                if sub == 0 {
                    return true;
                }
                sub = (sub - 1) & free;
            }
        };
        let mut primes = Vec::new();
        for mask in 0..=full {
            let mut value = mask;
            loop {
                if is_implicant(mask, value) {
                    let prime = (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .all(|i| !is_implicant(mask & !(1 << i), value & !(1 << i)));
                    if prime {
                        primes.push((mask, value));
                    }
                }
                if value == 0 {
                    break;
                }
                value = (value - 1) & mask;
            }
        }
        primes.sort_by_key(|&(mask, value)| {
            let key: Vec<u8> = (0..n)
                .map(|i| match (mask >> i & 1, value >> i & 1) {
                    (1, 1) => 0,
                    (1, _) => 1,
                    _ => 2,
                })
                .collect();
            (mask.count_ones(), key)
        });
        primes
    }
}

impl fmt::Debug for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolPoly[{}]({})", self.arity, self.to_term_string())
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_term_string())
    }
}
