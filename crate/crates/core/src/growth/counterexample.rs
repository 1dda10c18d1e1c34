//! A truncation of a well-ordered semigroup whose growth beats every
//! polynomial bound: `T` has at least `n^n` elements in `(0, n)`.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::bounds::{check_bounds, BoundCheck};
use crate::error::{input, Result};
use crate::rational::Rational;
use crate::semigroup::{CountTable, SemigroupSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedCount {
    pub n: u64,
    /// `|T ∩ (0, n)|`
    pub t_count: u64,
    /// `phi_U(n)`
    pub phi: u64,
    /// `n^n`
    pub n_pow_n: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub levels: u32,
    /// `m_k` with `2^(m_k) > k^k`, for `k = 2..=levels`.
    pub grid_exponents: Vec<u32>,
    pub generator_count: usize,
    #[serde(skip)]
    pub generators: Vec<Rational>,
    #[serde(skip)]
    pub table: CountTable,
    pub checkpoints: Vec<TruncatedCount>,
    /// `phi_U(n) < binom(n + d - 1, d)` for `d = 1, 2, 3` on `1..=2L`; each is
    /// expected to fail.
    pub binomial_checks: Vec<BoundCheck>,
}

/// Builds `T = {1} ∪ {k - j/2^(m_k) : 2 <= k <= L, 1 <= j <= k^k}` and the
/// count table of `U = <T>` up to `2L`.
pub fn counterexample_semigroup(levels: u32) -> Result<Counterexample> {
    if !(2..=5).contains(&levels) {
        return input(format!("counterexample levels must be in 2..=5, got {levels}"));
    }
    let mut generators = vec![Rational::one()];
    let mut grid_exponents = Vec::new();
    for k in 2..=levels as u64 {
        let kk = k.pow(k as u32);
        let m = (1u32..).find(|&m| 1u64 << m > kk).expect("finite");
        grid_exponents.push(m);
        let grid = BigInt::from(1u64 << m);
        generators.extend((1..=kk).map(|j| Rational::from(k) - Rational::new(j, grid.clone())));
    }
    generators.sort();
    let n_max = 2 * levels as u64;
    let mut u = SemigroupSpec::new(generators.clone())?;
    let table = u.count_table(n_max)?;
    let checkpoints = (2..=levels as u64)
        .map(|n| TruncatedCount {
            n,
            t_count: generators.iter().filter(|g| *g < &Rational::from(n)).count() as u64,
            phi: table.phi(n).expect("within table"),
            n_pow_n: Pow::pow(n, n as u32),
        })
        .collect();
    let binomial_checks = (1..=3)
        .map(|d| check_bounds(&mut u, d, n_max).map(|r| r.bounds.into_iter().next().expect("one bound")))
        .collect::<Result<_>>()?;
    Ok(Counterexample {
        levels,
        grid_exponents,
        generator_count: generators.len(),
        generators,
        table,
        checkpoints,
        binomial_checks,
    })
}
