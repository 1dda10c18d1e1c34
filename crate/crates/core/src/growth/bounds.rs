use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{GrowthReport, SURROGATE_NOTE};
use crate::error::{input, Result};
use crate::geometry::{propn1_floor, PsiFloor};
use crate::par::{self, Execution};
use crate::rational::Rational;
use crate::semigroup::{CountTable, SemigroupSpec};

/// `binom(n, k)` in exact integers.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// How one `n` fared against a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slack {
    /// Exact slack; the bound holds iff it is positive.
    Exact(Rational),
    /// Sign decided without an exact slack value.
    Decided(bool),
}

impl Slack {
    pub fn holds(&self) -> bool {
        match self {
            Slack::Exact(m) => m.is_positive(),
            Slack::Decided(b) => *b,
        }
    }

    pub(crate) fn int(v: BigInt) -> Self {
        Slack::Exact(Rational::from(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub predicate: String,
    pub n_start: u64,
    pub n_end: u64,
    pub pass: bool,
    pub violations: u64,
    pub first_violation: Option<u64>,
    /// Smallest exact slack over the range and where it occurs.
    pub min_margin: Option<Rational>,
    pub min_margin_at: Option<u64>,
}

impl BoundCheck {
    /// Evaluates `slack(n, phi(n))` for `n` in `start..=end` (clipped to the
    /// table), in parallel over `n`.
    pub fn evaluate<F>(
        name: &str,
        predicate: &str,
        table: &CountTable,
        start: u64,
        end: u64,
        exec: Execution,
        slack: F,
    ) -> Self
    where
        F: Fn(u64, u64) -> Slack + Sync + Send,
    {
        let start = start.max(1);
        let end = end.min(table.n_max());
        let slacks = if start <= end {
            par::map_range(exec, start..end + 1, |n| slack(n, table.phi(n).expect("within table")))
        } else {
            Vec::new()
        };
        let mut check = BoundCheck {
            name: name.to_string(),
            predicate: predicate.to_string(),
            n_start: start,
            n_end: end,
            pass: true,
            violations: 0,
            first_violation: None,
            min_margin: None,
            min_margin_at: None,
        };
        for (s, n) in slacks.iter().zip(start..) {
            if !s.holds() {
                check.pass = false;
                check.violations += 1;
                check.first_violation.get_or_insert(n);
            }
            if let Slack::Exact(m) = s {
                if check.min_margin.as_ref().is_none_or(|cur| m < cur) {
                    check.min_margin = Some(m.clone());
                    check.min_margin_at = Some(n);
                }
            }
        }
        check
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS".to_string() } else {
            format!("FAIL ({} violations, first at n={})", self.violations, self.first_violation.unwrap_or(0))
        };
        let margin = match (&self.min_margin, self.min_margin_at) {
            (Some(m), Some(n)) => format!(", min margin {m} at n={n}"),
            _ => String::new(),
        };
        format!("{}: {} for {} <= n <= {}: {verdict}{margin}", self.name, self.predicate, self.n_start, self.n_end)
    }
}

/// Evaluator for `l(R/m^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HilbertBound {
    /// Regular local ring of dimension `d`: `binom(n + d - 1, d)`.
    Regular { d: u64 },
    /// One-dimensional domain of multiplicity 2 with `P_R(n) = 2n - 1`.
    Cusp,
}

impl HilbertBound {
    pub fn length(&self, n: u64) -> BigUint {
        match *self {
            HilbertBound::Regular { d } => binomial(n + d - 1, d),
            HilbertBound::Cusp => BigUint::from(2 * n - 1),
        }
    }

    fn describe(&self) -> (String, String) {
        match self {
            HilbertBound::Regular { d } => {
                (format!("hilbert_regular_d{d}"), format!("phi(n) < binom(n+{}, {d})", d - 1))
            }
            HilbertBound::Cusp => ("hilbert_cusp".into(), "phi(n) < 2n - 1".into()),
        }
    }
}

fn require_unit_s0(s: &SemigroupSpec) -> Result<()> {
    if *s.s0() != 1 {
        return input(format!("smallest element is {}, expected 1; rescale the generators first", s.s0()));
    }
    Ok(())
}

/// `phi(n) < l(R/m^n)` on `1..=n_max` for a regular local ring of dimension `d`.
pub fn check_bounds(s: &mut SemigroupSpec, d: u64, n_max: u64) -> Result<GrowthReport> {
    if d == 0 {
        return input("dimension must be at least 1");
    }
    check_bounds_with(s, HilbertBound::Regular { d }, n_max)
}

pub fn check_bounds_with(s: &mut SemigroupSpec, bound: HilbertBound, n_max: u64) -> Result<GrowthReport> {
    require_unit_s0(s)?;
    let table = s.count_table(n_max)?;
    let (name, predicate) = bound.describe();
    let check = BoundCheck::evaluate(&name, &predicate, &table, 1, n_max, s.execution(), |n, phi| {
        Slack::int(BigInt::from(bound.length(n)) - BigInt::from(phi))
    });
    Ok(GrowthReport::new(format!("<{}>", join(s.generators())), n_max, vec![check]))
}

pub(crate) fn join(values: &[Rational]) -> String {
    const SHOWN: usize = 8;
    let mut parts: Vec<String> = values.iter().take(SHOWN).map(ToString::to_string).collect();
    if values.len() > SHOWN {
        parts.push(format!("... ({} generators)", values.len()));
    }
    parts.join(",")
}

#[derive(Clone, Debug, Serialize)]
pub struct CorN1Report {
    /// The `d` smallest elements of the semigroup.
    pub smallest: Vec<Rational>,
    /// `e / (d! s_1 ... s_d)`.
    pub bound: Rational,
    pub check: BoundCheck,
    pub note: String,
}

/// Checks `phi(n) / n^d < e / (d! s_1 ... s_d)` for `n` in `start..=end`.
pub fn check_corn1(s: &mut SemigroupSpec, d: u64, e: u64, start: u64, end: u64) -> Result<CorN1Report> {
    if d == 0 || e == 0 {
        return input("dimension and multiplicity must be positive");
    }
    if start == 0 || start > end {
        return input(format!("bad range {start}..={end}"));
    }
    let smallest = s.smallest_elements(d as usize)?;
    let prod = smallest.iter().fold(Rational::one(), |acc, v| acc * v);
    let fact = Rational::from((1..=d).product::<u64>());
    let bound = Rational::from(e) / (&fact * &prod);
    let table = s.count_table(end)?;
    let check = BoundCheck::evaluate(
        "corn1",
        &format!("phi(n)/n^{d} < {bound}"),
        &table,
        start,
        end,
        s.execution(),
        |n, phi| {
            let nd = Rational::from(BigInt::from(n).pow(d as u32));
            Slack::Exact(&bound * &nd - Rational::from(phi))
        },
    );
    Ok(CorN1Report { smallest, bound, check, note: SURROGATE_NOTE.to_string() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiRow {
    pub n: u64,
    pub phi: u64,
    /// `binom(n+1, 2) - 1 - phi(n)`.
    pub psi: i64,
    /// `psi(n) / n^2`.
    pub ratio: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    /// Value of the second variable, `a_1`.
    pub a1: Rational,
    pub floor: PsiFloor,
    pub rows: Vec<PsiRow>,
    pub min_ratio: Rational,
    pub min_ratio_at: u64,
    pub convention: String,
    pub note: String,
}

impl PsiReport {
    pub fn row(&self, n: u64) -> Option<&PsiRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// `psi(n)` on `start..=end` for a two-dimensional plane semigroup `<1, a_1, ...>`.
pub fn deviation_psi(s: &mut SemigroupSpec, start: u64, end: u64) -> Result<PsiReport> {
    require_unit_s0(s)?;
    if start == 0 || start > end {
        return input(format!("bad range {start}..={end}"));
    }
    // The least non-integral generator is the value of y; integral ones lie in <1>.
    let Some(a1) = s.generators().iter().filter(|g| !g.is_integer()).min().cloned() else {
        return input("semigroup is <1>: not the semigroup of a two-dimensional plane valuation");
    };
    let floor = propn1_floor(&[Rational::one(), a1.clone()], 1, 2)?;
    let table = s.count_table(end)?;
    let rows: Vec<PsiRow> = par::map_range(s.execution(), start..end + 1, |n| {
        let phi = table.phi(n).expect("within table");
        let psi = (n * (n + 1) / 2) as i64 - 1 - phi as i64;
        PsiRow { n, phi, psi, ratio: Rational::new(psi, n * n) }
    });
    let (min_ratio, min_ratio_at) = rows
        .iter()
        .map(|r| (r.ratio.clone(), r.n))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("nonempty range");
    Ok(PsiReport {
        a1,
        floor,
        rows,
        min_ratio,
        min_ratio_at,
        convention: "psi(n) = binom(n+1,2) - 1 - phi(n), i.e. l(m/m^n) - phi(n)".into(),
        note: SURROGATE_NOTE.to_string(),
    })
}
