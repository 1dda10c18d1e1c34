//! The four example generating-sequence families.
//!
//! Each family yields values `a_0 = 1 < a_1 < a_2 < ...` in closed form. A
//! second, recursive route (a linear or squaring recurrence seeded from the
//! first table entries) is provided so the two can be cross-checked exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::rational::Rational;

/// Example family tag, written `exf1`, `power:p,q`, `quadratic` or `nlog`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleFamily {
    /// `a_i = 4^i + 2^-i`, growth `n^(3/2)`.
    Exf1,
    /// `a_i = r^i + s^-i` with `r = 2^q`, `s = 2^p`, growth `n^(1 + p/q)`.
    Power { p: u32, q: u32 },
    /// `a_i = 2^(i-1) + (2^i - 2^-i)/3`, growth `n^2`.
    Quadratic,
    /// `a_i = 10^(2^(i-1)) + 2^-i`, growth `n log n`.
    NLog,
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// `10^(2^e)`.
fn ten_pow_pow2(e: u32) -> BigInt {
    assert!(e < 32, "10^(2^{e}) is beyond desk scale");
    Pow::pow(BigInt::from(10), 1u32 << e)
}

fn two_pow(e: i32) -> Rational {
    Rational::from(2i64).pow(e)
}

impl ExampleFamily {
    pub fn power(p: u32, q: u32) -> Result<Self> {
        if p == 0 || p >= q {
            return input(format!("power family needs 0 < p < q, got p={p}, q={q}"));
        }
        if p.gcd(&q) != 1 {
            return input(format!("power family needs coprime p, q, got p={p}, q={q}"));
        }
        if q > 62 {
            return input(format!("power family exponent q={q} is beyond desk scale"));
        }
        Ok(ExampleFamily::Power { p, q })
    }

    /// `(r, s)` for the power family; the other families are `r`-adic with
    /// `s = 2` in the same sense (`r` = 4, 2 and 10 respectively).
    fn base(self) -> (BigInt, BigInt) {
        match self {
            ExampleFamily::Exf1 => (4.into(), 2.into()),
            ExampleFamily::Power { p, q } => (pow2(q), pow2(p)),
            ExampleFamily::Quadratic => (2.into(), 2.into()),
            ExampleFamily::NLog => (10.into(), 2.into()),
        }
    }

    /// Group index `q_i`, the same at every level `i >= 1`.
    pub fn group_index(self) -> u64 {
        match self {
            ExampleFamily::Power { p, .. } => 1u64 << p,
            _ => 2,
        }
    }

    /// Closed-form value `a_i` (with `a_0 = 1`).
    pub fn closed_form(self, i: u32) -> Rational {
        if i == 0 {
            return Rational::one();
        }
        let i_s = i as i32;
        match self {
            ExampleFamily::Exf1 | ExampleFamily::Power { .. } => {
                let (r, s) = self.base();
                Rational::from(Pow::pow(r, i)) + Rational::from(Pow::pow(s, i)).recip()
            }
            ExampleFamily::Quadratic => {
                two_pow(i_s - 1) + (two_pow(i_s) - two_pow(-i_s)) / Rational::from(3i64)
            }
            ExampleFamily::NLog => {
                Rational::from(ten_pow_pow2(i - 1)) + two_pow(-i_s)
            }
        }
    }

    /// `a_0, ..., a_k` in closed form.
    pub fn values(self, k: u32) -> Result<Vec<Rational>> {
        if k == 0 {
            return input("a family truncation needs at least one level");
        }
        Ok((0..=k).map(|i| self.closed_form(i)).collect())
    }

    /// `a_0, ..., a_k` by recurrence from the first table entries.
    pub fn recursive_values(self, k: u32) -> Result<Vec<Rational>> {
        if k == 0 {
            return input("a family truncation needs at least one level");
        }
        let (r, s) = self.base();
        let (r, s) = (Rational::from(r), Rational::from(s));
        let mut out = vec![Rational::one()];
        match self {
            ExampleFamily::NLog => {
                // a_{i+1} = (a_i - 2^-i)^2 + 2^-(i+1)
                out.push(Rational::new(21, 2));
                for i in 1..k as i32 {
                    let head = &out[i as usize] - &two_pow(-i);
                    out.push(&head * &head + two_pow(-i - 1));
                }
            }
            _ => {
                // Characteristic roots r and 1/s: a_{i+1} = (r + 1/s) a_i - (r/s) a_{i-1}.
                let (trace, det) = (&r + &s.recip(), &r / &s);
                let (first, second) = match self {
                    ExampleFamily::Quadratic => (Rational::new(3, 2), Rational::new(13, 4)),
                    _ => (&r + &s.recip(), &r * &r + (&s * &s).recip()),
                };
                out.push(first);
                out.push(second);
                while out.len() <= k as usize {
                    let i = out.len();
                    let next = &trace * &out[i - 1] - &det * &out[i - 2];
                    out.push(next);
                }
            }
        }
        out.truncate(k as usize + 1);
        Ok(out)
    }

    /// Exponent `c_i` of `x` in the generating-sequence step
    /// `P_{i+1} = P_i^q - x^(c_i) P_{i-1}` (no `P_{i-1}` factor when `i = 1`).
    ///
    /// The two leading terms must have equal value, i.e.
    /// `q * a_i = c_i + a_{i-1}` for `i >= 2` and `q * a_1 = c_1`.
    pub fn x_exponent(self, i: u32) -> BigInt {
        assert!(i >= 1);
        let (r, s) = self.base();
        match self {
            ExampleFamily::Exf1 if i == 1 => 9.into(),
            ExampleFamily::Exf1 => BigInt::from(7) * Pow::pow(BigInt::from(4), i - 1),
            ExampleFamily::Power { .. } if i == 1 => &s * &r + 1,
            ExampleFamily::Power { .. } => (&s * &r - 1) * Pow::pow(r, i - 1),
            ExampleFamily::Quadratic if i == 1 => 3.into(),
            ExampleFamily::Quadratic => pow2(i) + pow2(i - 1) - pow2(i - 2),
            ExampleFamily::NLog if i == 1 => 21.into(),
            ExampleFamily::NLog => {
                BigInt::from(2) * ten_pow_pow2(i - 1) - ten_pow_pow2(i - 2)
            }
        }
    }

    /// The quadratic family's values as displayed term by term,
    /// `a_{k+1} = 2^k + 2^(k-1) + 2^(k-3) + ... + 2^(-k-1)`.
    pub fn displayed_pattern(self, i: u32) -> Option<Rational> {
        if self != ExampleFamily::Quadratic || i == 0 {
            return None;
        }
        let k = i as i32 - 1;
        let tail: Rational = (0..=k).map(|j| two_pow(k - 1 - 2 * j)).sum();
        Some(two_pow(k) + tail)
    }

    /// Levels in `1..=k` where the displayed term pattern disagrees with the
    /// closed form.
    pub fn pattern_mismatches(self, k: u32) -> Vec<u32> {
        (1..=k)
            .filter(|&i| self.displayed_pattern(i).is_some_and(|v| v != self.closed_form(i)))
            .collect()
    }

    /// Smallest truncation level `k` such that `a_{k+1} >= n_max`, so every
    /// generator below `n_max` is present.
    pub fn required_levels(self, n_max: u64) -> u32 {
        let bound = Rational::from(n_max);
        (1..).find(|&k| self.closed_form(k + 1) >= bound).expect("values are unbounded")
    }
}

impl fmt::Display for ExampleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleFamily::Exf1 => f.write_str("exf1"),
            ExampleFamily::Power { p, q } => write!(f, "power:{p},{q}"),
            ExampleFamily::Quadratic => f.write_str("quadratic"),
            ExampleFamily::NLog => f.write_str("nlog"),
        }
    }
}

impl FromStr for ExampleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exf1" => Ok(ExampleFamily::Exf1),
            "quadratic" => Ok(ExampleFamily::Quadratic),
            "nlog" => Ok(ExampleFamily::NLog),
            _ => {
                let Some((p, q)) = s.strip_prefix("power:").and_then(|pq| pq.split_once(',')) else {
                    return input(format!("unknown family {s:?}; expected exf1, power:p,q, quadratic or nlog"));
                };
                let parse = |t: &str| {
                    t.parse::<u32>().map_err(|_| Error::Input(format!("bad power parameter {t:?}")))
                };
                ExampleFamily::power(parse(p)?, parse(q)?)
            }
        }
    }
}

impl Serialize for ExampleFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn table_values() {
        assert_eq!(
            ExampleFamily::Exf1.values(3).unwrap(),
            vec![rat(1, 1), rat(9, 2), rat(65, 4), rat(513, 8)]
        );
        assert_eq!(
            ExampleFamily::Quadratic.values(3).unwrap(),
            vec![rat(1, 1), rat(3, 2), rat(13, 4), rat(53, 8)]
        );
        assert_eq!(ExampleFamily::NLog.values(2).unwrap(), vec![rat(1, 1), rat(21, 2), rat(401, 4)]);
        assert_eq!(ExampleFamily::NLog.closed_form(3), rat(80001, 8));
        let p23 = ExampleFamily::power(2, 3).unwrap();
        assert_eq!(p23.values(2).unwrap(), vec![rat(1, 1), rat(33, 4), rat(1025, 16)]);
    }

    #[test]
    fn recursion_matches_closed_form() {
        let families = [
            ExampleFamily::Exf1,
            ExampleFamily::Quadratic,
            ExampleFamily::NLog,
            ExampleFamily::power(1, 2).unwrap(),
            ExampleFamily::power(2, 3).unwrap(),
            ExampleFamily::power(3, 5).unwrap(),
        ];
        for fam in families {
            assert_eq!(fam.recursive_values(12).unwrap(), fam.values(12).unwrap(), "{fam}");
            assert_eq!(fam.recursive_values(1).unwrap(), fam.values(1).unwrap(), "{fam}");
        }
    }

    #[test]
    fn leading_terms_balance() {
        for fam in [ExampleFamily::Exf1, ExampleFamily::Quadratic, ExampleFamily::NLog, ExampleFamily::power(2, 3).unwrap()] {
            let q = Rational::from(fam.group_index());
            assert_eq!(&q * &fam.closed_form(1), Rational::from(fam.x_exponent(1)), "{fam}");
            for i in 2..=8 {
                assert_eq!(
                    &q * &fam.closed_form(i),
                    Rational::from(fam.x_exponent(i)) + fam.closed_form(i - 1),
                    "{fam} level {i}"
                );
            }
        }
        assert_eq!(ExampleFamily::Exf1.x_exponent(2), 28.into());
        assert_eq!(ExampleFamily::NLog.x_exponent(2), 190.into());
    }

    #[test]
    fn displayed_pattern_agrees() {
        assert_eq!(ExampleFamily::Quadratic.displayed_pattern(3), Some(rat(53, 8)));
        assert!(ExampleFamily::Quadratic.pattern_mismatches(12).is_empty());
        assert_eq!(ExampleFamily::Exf1.displayed_pattern(3), None);
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!("power:2,3".parse::<ExampleFamily>().unwrap(), ExampleFamily::Power { p: 2, q: 3 });
        assert_eq!("exf1".parse::<ExampleFamily>().unwrap().to_string(), "exf1");
        for bad in ["power:3,2", "power:2,2", "power:2,4", "power:0,3", "power:x,3", "cubic"] {
            assert!(bad.parse::<ExampleFamily>().is_err(), "{bad}");
        }
        assert!(ExampleFamily::Exf1.values(0).is_err());
    }

    #[test]
    fn required_levels() {
        // a_5 = 1024 + 1/32 is the first exf1 value past 1024
        assert_eq!(ExampleFamily::Exf1.required_levels(1024), 4);
        assert_eq!(ExampleFamily::NLog.required_levels(10_000), 2);
        assert_eq!(ExampleFamily::Quadratic.required_levels(512), 9);
    }
}
