//! Integer-point counts for weighted wedges and coordinate simplices.
//!
//! Counting iterates the trailing coordinates and solves the admissible range
//! of the first coordinate exactly, on integers scaled by the common
//! denominator of the data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::par::{self, Execution};
use crate::rational::Rational;

/// Largest dimension handled by the counting routines.
pub const MAX_DIM: usize = 4;

fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |d, v| d.lcm(v.denom()))
}

fn to_i128(v: &BigInt, what: &str) -> Result<i128> {
    v.to_i128().ok_or_else(|| Error::TooLarge(format!("{what} {v} does not fit in 128 bits")))
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i128::from(a.rem_euclid(b) != 0)
}

fn factorial(d: usize) -> u64 {
    (1..=d as u64).product()
}

/// Sum over all `(n_2, ..., n_d)` in `N^(d-1)` with `sum n_i < limit` of `row(plain, weighted)`,
/// where `plain = sum n_i` and `weighted = sum w_i n_i`.
fn sum_tail<F>(weights: &[i128], limit: i128, plain: i128, weighted: i128, row: &F) -> u64
where
    F: Fn(i128, i128) -> u64,
{
    match weights.split_first() {
        None => row(plain, weighted),
        Some((w, rest)) => {
            let mut total = 0;
            let mut k = 0;
            while plain + k < limit {
                total += sum_tail(rest, limit, plain + k, weighted + k * w, row);
                k += 1;
            }
            total
        }
    }
}

/// The system `w_1 n_1 + ... + w_d n_d >= n - alpha`, `n_1 + ... + n_d < n - alpha`
/// over `N^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeSystem {
    pub weights: Vec<Rational>,
    pub offset: Rational,
    pub n: u64,
}

impl WedgeSystem {
    pub fn new(weights: Vec<Rational>, offset: Rational, n: u64) -> Result<Self> {
        if weights.is_empty() || weights.len() > MAX_DIM {
            return input(format!("wedge dimension must be 1..={MAX_DIM}, got {}", weights.len()));
        }
        if let Some(w) = weights.iter().find(|w| *w < &Rational::one()) {
            return input(format!("wedge weight {w} is below 1"));
        }
        if offset < Rational::zero() {
            return input(format!("offset {offset} is negative"));
        }
        Ok(WedgeSystem { weights, offset, n })
    }

    /// Whether two weights coincide (the floor value then carries no information).
    pub fn is_degenerate(&self) -> bool {
        self.weights.iter().enumerate().any(|(i, w)| self.weights[..i].contains(w))
    }

    pub fn count(&self) -> Result<u64> {
        self.count_with(Execution::default())
    }

    pub fn count_with(&self, exec: Execution) -> Result<u64> {
        let d = lcm_denominators(self.weights.iter().chain([&self.offset]));
        let scale = Rational::from(d.clone());
        let threshold = (Rational::from(self.n) - self.offset.clone()) * &scale;
        let t = to_i128(threshold.numer(), "scaled threshold")?;
        let dd = to_i128(&d, "denominator")?;
        let w: Vec<i128> = self
            .weights
            .iter()
            .map(|w| to_i128((w * &scale).numer(), "scaled weight"))
            .collect::<Result<_>>()?;
        if t <= 0 {
            return Ok(0);
        }
        // Coordinates range over n_i < t / D.
        let limit = ceil_div(t, dd);
        let (w1, tail) = (w[0], &w[1..]);
        let row = |plain: i128, weighted: i128| -> u64 {
            let hi = ceil_div(t - dd * plain, dd) - 1;
            let lo = ceil_div(t - weighted, w1).max(0);
            (hi - lo + 1).max(0) as u64
        };
        Ok(match tail.split_first() {
            None => row(0, 0),
            Some((w2, rest)) => par::sum_range(exec, 0..limit as u64, |k| {
                let k = k as i128;
                sum_tail(rest, limit, k, k * w2, &row)
            }),
        })
    }

    /// `count / n^d`.
    pub fn ratio(&self, count: u64) -> Rational {
        Rational::new(count, BigInt::from(self.n).pow(self.weights.len() as u32))
    }
}

/// `|{ m ∈ N^d : w_1 m_1 + ... + w_d m_d < bound }|`.
pub fn count_weighted_below(weights: &[Rational], bound: &Rational) -> Result<u64> {
    if weights.is_empty() || weights.len() > MAX_DIM {
        return input(format!("dimension must be 1..={MAX_DIM}"));
    }
    let d = lcm_denominators(weights.iter().chain([bound]));
    let scale = Rational::from(d);
    let t = to_i128((bound * &scale).numer(), "scaled bound")?;
    let w: Vec<i128> =
        weights.iter().map(|w| to_i128((w * &scale).numer(), "scaled weight")).collect::<Result<_>>()?;
    if t <= 0 {
        return Ok(0);
    }
    let w1 = w[0];
    // Trailing coordinates with weighted sum below t; the first takes (t - weighted) / w1 values.
    fn walk(w: &[i128], t: i128, weighted: i128, w1: i128) -> u64 {
        match w.split_first() {
            None => ceil_div(t - weighted, w1).max(0) as u64,
            Some((wi, rest)) => {
                let mut total = 0;
                let mut acc = weighted;
                while acc < t {
                    total += walk(rest, t, acc, w1);
                    acc += wi;
                }
                total
            }
        }
    }
    Ok(walk(&w[1..], t, 0, w1))
}

/// Simplex with vertices at the origin and at `c_i` along the coordinate axes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Simplex {
    pub intercepts: Vec<Rational>,
}

impl Simplex {
    pub fn new(intercepts: Vec<Rational>) -> Result<Self> {
        if intercepts.is_empty() || intercepts.len() > MAX_DIM {
            return input(format!("simplex dimension must be 1..={MAX_DIM}"));
        }
        if let Some(c) = intercepts.iter().find(|c| !c.is_positive()) {
            return input(format!("intercept {c} is not positive"));
        }
        Ok(Simplex { intercepts })
    }

    pub fn dim(&self) -> usize {
        self.intercepts.len()
    }

    /// `c_1 ... c_d / d!`.
    pub fn volume(&self) -> Rational {
        let prod = self.intercepts.iter().fold(Rational::one(), |acc, c| acc * c);
        prod / Rational::from(factorial(self.dim()))
    }

    /// Ehrhart count `|{ z ∈ Z^d : z/n ∈ Δ }|` of the closed simplex.
    pub fn ehrhart(&self, n: u64, exec: Execution) -> Result<u64> {
        // z >= 0 and sum z_i / c_i <= n, scaled by the lcm of the 1/c_i denominators.
        let recips: Vec<Rational> = self.intercepts.iter().map(Rational::recip).collect();
        let d = lcm_denominators(&recips);
        let scale = Rational::from(d.clone());
        let t = to_i128(&(BigInt::from(n) * &d), "scaled dilation")?;
        let u: Vec<i128> =
            recips.iter().map(|r| to_i128((r * &scale).numer(), "scaled slope")).collect::<Result<_>>()?;
        let u1 = u[0];
        fn walk(u: &[i128], t: i128, used: i128, u1: i128) -> u64 {
            match u.split_first() {
                None => ((t - used).div_euclid(u1) + 1) as u64,
                Some((ui, rest)) => {
                    let mut total = 0;
                    let mut acc = used;
                    while acc <= t {
                        total += walk(rest, t, acc, u1);
                        acc += ui;
                    }
                    total
                }
            }
        }
        Ok(match u[1..].split_first() {
            None => walk(&[], t, 0, u1),
            Some((u2, rest)) => {
                let rows = (t / u2) as u64 + 1;
                par::sum_range(exec, 0..rows, |k| walk(rest, t, k as i128 * u2, u1))
            }
        })
    }

    /// `E(Δ, n) / n^d`.
    pub fn ehrhart_ratio(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return input("Ehrhart dilation must be at least 1");
        }
        let count = self.ehrhart(n, Execution::default())?;
        Ok(Rational::new(count, BigInt::from(n).pow(self.dim() as u32)))
    }
}

/// `(e / d!) (1 - 1 / (w_1 ... w_d))`, with a flag for coinciding weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiFloor {
    pub value: Rational,
    pub distinct: bool,
}

pub fn propn1_floor(weights: &[Rational], e: u64, d: usize) -> Result<PsiFloor> {
    if weights.len() != d || d == 0 {
        return input(format!("expected {d} weights, got {}", weights.len()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return input(format!("weight {w} is not positive"));
    }
    let prod = weights.iter().fold(Rational::one(), |acc, w| acc * w);
    let value = Rational::from(e) / Rational::from(factorial(d)) * (Rational::one() - prod.recip());
    let distinct = !weights.iter().enumerate().any(|(i, w)| weights[..i].contains(w));
    Ok(PsiFloor { value, distinct })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub count: u64,
    pub ratio: Rational,
}

/// Wedge counts for `n` in `start..=end` by `step`, computed in parallel.
pub fn wedge_sweep(
    weights: &[Rational],
    offset: &Rational,
    start: u64,
    end: u64,
    step: u64,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if step == 0 || start == 0 || start > end {
        return input(format!("bad sweep {start}:{end}:{step}"));
    }
    let ns: Vec<u64> = (start..=end).step_by(step as usize).collect();
    let rows = par::map_slice(exec, &ns, |&n| {
        let sys = WedgeSystem::new(weights.to_vec(), offset.clone(), n)?;
        let count = sys.count_with(Execution::Sequential)?;
        Ok(SweepRow { n, count, ratio: sys.ratio(count) })
    });
    rows.into_iter().collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,count,ratio\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.count, r.ratio));
    }
    out
}
