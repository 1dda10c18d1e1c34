//! Two-sided growth inequalities of the example families.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::bounds::{binomial, BoundCheck, Slack};
use super::GrowthReport;
use crate::error::{input, Result};
use crate::families::ExampleFamily;
use crate::par::Execution;
use crate::semigroup::{CountTable, SemigroupSpec};

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// Relative margin below which a floating-point log comparison is re-decided exactly.
const LOG_MARGIN: f64 = 1e-6;

/// Compares `10^ten_exp` with `n^n_exp`: floating point when the gap in
/// log10 is clear, exact integer powers otherwise.
fn pow10_cmp(ten_exp: u64, n: u64, n_exp: u64) -> Ordering {
    let approx = n_exp as f64 * (n as f64).log10();
    let gap = ten_exp as f64 - approx;
    if gap.abs() > LOG_MARGIN * approx.abs().max(1.0) {
        return if gap > 0.0 { Ordering::Greater } else { Ordering::Less };
    }
    big(10).pow(ten_exp as u32).cmp(&big(n).pow(n_exp as u32))
}

/// `phi` inequalities for `family`, evaluated on an already computed table.
pub fn check_example_table(family: ExampleFamily, table: &CountTable, exec: Execution) -> Vec<BoundCheck> {
    let n_max = table.n_max();
    let mut checks = Vec::new();
    match family {
        ExampleFamily::Exf1 => {
            // (1/6) n^(3/2) < phi < (4/3) n^(3/2), squared
            checks.push(BoundCheck::evaluate("exf1_lower", "36 phi(n)^2 > n^3", table, 2, n_max, exec, |n, phi| {
                Slack::int(36 * big(phi).pow(2) - big(n).pow(3))
            }));
            checks.push(BoundCheck::evaluate("exf1_upper", "9 phi(n)^2 < 16 n^3", table, 2, n_max, exec, |n, phi| {
                Slack::int(16 * big(n).pow(3) - 9 * big(phi).pow(2))
            }));
            for k in (1u32..).take_while(|&k| 4u64.pow(k) <= n_max) {
                let n = 4u64.pow(k);
                let eight = big(8).pow(k);
                checks.push(BoundCheck::evaluate(
                    &format!("exf1_checkpoint_{k}"),
                    &format!("8^{k}/3 < phi(4^{k}) < 8^{k}/2"),
                    table,
                    n,
                    n,
                    exec,
                    |_, phi| {
                        let lower: BigInt = 3 * big(phi) - &eight;
                        let upper: BigInt = &eight - 2 * big(phi);
                        Slack::int(lower.min(upper))
                    },
                ));
            }
        }
        ExampleFamily::Power { p, q } => {
            // (1/(2 s^2)) n^(1+p/q) < phi < 3 n^(1+p/q), raised to the q-th power
            let s = big(1) << p as usize;
            let r = 1u64 << q;
            let two_s2: BigInt = 2 * &s * &s;
            checks.push(BoundCheck::evaluate(
                "power_lower",
                &format!("(2 s^2 phi(n))^{q} > n^{}", p + q),
                table,
                r,
                n_max,
                exec,
                |n, phi| Slack::int((&two_s2 * big(phi)).pow(q) - big(n).pow(p + q)),
            ));
            checks.push(BoundCheck::evaluate(
                "power_upper",
                &format!("phi(n)^{q} < 3^{q} n^{}", p + q),
                table,
                1,
                n_max,
                exec,
                |n, phi| Slack::int(big(3).pow(q) * big(n).pow(p + q) - big(phi).pow(q)),
            ));
        }
        ExampleFamily::Quadratic => {
            checks.push(BoundCheck::evaluate("quadratic_lower", "8 phi(n) > n^2", table, 4, n_max, exec, |n, phi| {
                Slack::int(8 * big(phi) - big(n).pow(2))
            }));
            checks.push(BoundCheck::evaluate(
                "quadratic_upper",
                "phi(n) < binom(n+1, 2)",
                table,
                1,
                n_max,
                exec,
                |n, phi| Slack::int(BigInt::from(binomial(n + 1, 2)) - big(phi)),
            ));
        }
        ExampleFamily::NLog => {
            // (1/4) n log10 n < phi  <=>  10^(4 phi) > n^n
            checks.push(BoundCheck::evaluate("nlog_lower", "10^(4 phi(n)) > n^n", table, 10, n_max, exec, |n, phi| {
                Slack::Decided(pow10_cmp(4 * phi, n, n) == Ordering::Greater)
            }));
            // phi < 2 n log10 n  <=>  10^phi < n^(2n)
            checks.push(BoundCheck::evaluate("nlog_upper", "10^phi(n) < n^(2n)", table, 10, n_max, exec, |n, phi| {
                Slack::Decided(pow10_cmp(phi, n, 2 * n) == Ordering::Less)
            }));
        }
    }
    checks
}

/// Builds the family truncated to `levels`, tabulates `phi` up to `n_max` and
/// checks the family's two-sided inequality.
pub fn check_example_inequalities(family: ExampleFamily, levels: u32, n_max: u64) -> Result<GrowthReport> {
    if n_max == 0 {
        return input("n_max must be positive");
    }
    let required = family.required_levels(n_max);
    if levels < required {
        return input(format!(
            "{family} truncated to {levels} levels misses generators below {n_max}; need at least {required} levels"
        ));
    }
    let mut s = SemigroupSpec::new(family.values(levels)?)?;
    let table = s.count_table(n_max)?;
    let checks = check_example_table(family, &table, s.execution());
    Ok(GrowthReport::new(format!("{family} (levels {levels})"), n_max, checks))
}
