//! Membership, enumeration and counting for finitely generated subsemigroups
//! of the positive rationals.
//!
//! Interval conventions are fixed throughout: [`SemigroupSpec::phi`] counts the
//! open interval `(0, n)` and [`SemigroupSpec::interval_count`] the half-open
//! `[x - 1, x)`. Elements equal to an upper bound are never counted.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::lattice::{ScaledLattice, MAX_CELLS};
use crate::par::{self, Execution};
use crate::rational::Rational;

/// A semigroup `<g_1, ..., g_r>` of positive rationals, with its lazily grown
/// membership grid.
#[derive(Clone, Debug)]
pub struct SemigroupSpec {
    generators: Vec<Rational>,
    s0: Rational,
    lattice: ScaledLattice,
    exec: Execution,
}

/// One row of a growth table: `phi = |S ∩ (0,n)|`, `interval = |S ∩ [n-1,n)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: u64,
    pub phi: u64,
    pub interval: u64,
}

/// Rows for `n = 1..=n_max`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn n_max(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.n)
    }

    /// `phi(n)` if the table reaches `n`. Rows are indexed from `n = 1`.
    pub fn phi(&self, n: u64) -> Option<u64> {
        let idx = n.checked_sub(1)? as usize;
        self.rows.get(idx).map(|r| r.phi)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,phi,interval\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.n, r.phi, r.interval);
        }
        out
    }

    /// Builds a table from interval counts `|S ∩ [m-1,m)|`, `m = 1, 2, ...`.
    pub fn from_intervals(intervals: &[u64]) -> Self {
        let mut phi = 0;
        let rows = intervals
            .iter()
            .zip(1..)
            .map(|(&interval, n)| {
                phi += interval;
                CountRow { n, phi, interval }
            })
            .collect();
        CountTable { rows }
    }
}

fn to_cells(k: &BigInt) -> Result<u64> {
    match k.to_u64() {
        Some(k) if k < MAX_CELLS => Ok(k),
        _ => Err(Error::TooLarge(format!("grid index {k} exceeds {MAX_CELLS}"))),
    }
}

impl SemigroupSpec {
    pub fn new(generators: Vec<Rational>) -> Result<Self> {
        if generators.is_empty() {
            return input("a semigroup needs at least one generator");
        }
        let lattice = ScaledLattice::new(&generators)?;
        let s0 = generators.iter().min().cloned().expect("nonempty");
        Ok(SemigroupSpec { generators, s0, lattice, exec: Execution::default() })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn generators(&self) -> &[Rational] {
        &self.generators
    }

    /// Smallest element of the semigroup (the least generator).
    pub fn s0(&self) -> &Rational {
        &self.s0
    }

    pub fn lattice(&self) -> &ScaledLattice {
        &self.lattice
    }

    fn denominator(&self) -> &BigInt {
        self.lattice.denominator()
    }

    /// Scaled index of the first grid point `>= x`, clamped below at 0.
    fn ceil_cells(&self, x: &Rational) -> Result<u64> {
        let k = (x * &Rational::from(self.denominator().clone())).ceil();
        if k.is_negative() {
            return Ok(0);
        }
        to_cells(&k)
    }

    fn ensure(&mut self, k: u64) -> Result<()> {
        self.lattice.extend_to(k)
    }

    /// Membership of `x > 0`, with a coefficient vector over the generators
    /// when `x` is a member. Points off the `1/D` grid are never members.
    pub fn contains(&mut self, x: &Rational) -> Result<Option<Vec<u64>>> {
        if !x.is_positive() {
            return input(format!("membership query {x} is not positive"));
        }
        let Some(k) = self.lattice.scale(x) else {
            return Ok(None);
        };
        if x < &self.s0 {
            return Ok(None);
        }
        let k = to_cells(&k)?;
        self.ensure(k)?;
        Ok(self.lattice.witness(k))
    }

    pub fn is_member(&mut self, x: &Rational) -> Result<bool> {
        Ok(self.contains(x)?.is_some())
    }

    /// Elements of the semigroup in `(0, bound)`, increasing.
    pub fn enumerate(&mut self, bound: &Rational) -> Result<Vec<Rational>> {
        if !bound.is_positive() {
            return input(format!("enumeration bound {bound} is not positive"));
        }
        let hi = self.ceil_cells(bound)?;
        self.ensure(hi)?;
        let d = self.denominator().clone();
        Ok((1..hi)
            .filter(|&k| self.lattice.is_member(k))
            .map(|k| Rational::new(k, d.clone()))
            .collect())
    }

    /// `|S ∩ (0, n)|`.
    pub fn phi(&mut self, n: u64) -> Result<u64> {
        if n == 0 {
            return input("phi is defined for n >= 1");
        }
        let hi = self.ceil_cells(&Rational::from(n))?;
        self.ensure(hi)?;
        Ok(self.lattice.count_range(1, hi))
    }

    /// `|S ∩ [x - 1, x)|`.
    pub fn interval_count(&mut self, x: &Rational) -> Result<u64> {
        if !x.is_positive() {
            return input(format!("interval endpoint {x} is not positive"));
        }
        let lo = self.ceil_cells(&(x - &Rational::one()))?;
        let hi = self.ceil_cells(x)?;
        self.ensure(hi)?;
        Ok(self.lattice.count_range(lo, hi))
    }

    /// Growth table for `n = 1..=n_max`. Interval counts are computed in
    /// parallel over disjoint unit intervals.
    pub fn count_table(&mut self, n_max: u64) -> Result<CountTable> {
        if n_max == 0 {
            return Ok(CountTable::default());
        }
        let hi = self.ceil_cells(&Rational::from(n_max))?;
        self.ensure(hi)?;
        let d = self.denominator().to_u64().expect("grid denominator fits once tabulated");
        let lattice = &self.lattice;
        let intervals = par::map_range(self.exec, 1..n_max + 1, |m| {
            lattice.count_range((m - 1) * d, m * d)
        });
        Ok(CountTable::from_intervals(&intervals))
    }

    /// Elements of `S ∩ (0, bound]` that are not a sum of two elements of `S`.
    pub fn minimal_generators(&mut self, bound: &Rational) -> Result<Vec<Rational>> {
        if self.generators.iter().any(|g| g > bound) {
            return input(format!(
                "bound {bound} is below a generator; minimal generators need every generator covered"
            ));
        }
        let top = to_cells(&(bound * &Rational::from(self.denominator().clone())).floor())?;
        self.ensure(top)?;
        let lattice = &self.lattice;
        let gens: Vec<u64> = lattice.scaled_generators().iter().flatten().copied().collect();
        let d = self.denominator().clone();
        let flags = par::map_range(self.exec, 1..top + 1, |k| {
            lattice.is_member(k) && !gens.iter().any(|&g| g < k && lattice.is_member(k - g))
        });
        Ok(flags
            .into_iter()
            .zip(1u64..)
            .filter(|(minimal, _)| *minimal)
            .map(|(_, k)| Rational::new(k, d.clone()))
            .collect())
    }

    /// The `count` smallest elements of the semigroup.
    pub fn smallest_elements(&mut self, count: usize) -> Result<Vec<Rational>> {
        let d = self.denominator().clone();
        let mut found = Vec::with_capacity(count);
        let mut k = 0u64;
        while found.len() < count {
            k += 1;
            self.ensure(k)?;
            if self.lattice.is_member(k) {
                found.push(Rational::new(k, d.clone()));
            }
        }
        Ok(found)
    }
}
