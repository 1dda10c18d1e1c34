//! Generating sequences of plane valuations.
//!
//! For values `1 = a_0, a_1, ..., a_k` let `S_i = <1, a_1, ..., a_i>` and
//! `G_i` the group it generates. Then `q_i = [G_i : G_{i-1}]`, `s_i` is the
//! least positive `s` with `s a_i ∈ S_{i-1}`, and
//! `x_i = (q_1 - 1) a_1 + ... + (q_i - 1) a_i`. Every element of `G_i` larger
//! than `x_i - 1` lies in `S_i`; this conductor bound turns the `s_i` search
//! into a finite one and answers membership for values too large to tabulate.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::lattice::cyclic_group_generator;
use crate::rational::Rational;
use crate::semigroup::SemigroupSpec;

/// Grids up to this many cells are tabulated to confirm membership directly;
/// past it membership above the conductor is taken from the group alone.
const VERIFY_CELLS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub index: usize,
    pub value: Rational,
    /// Positive generator of `G_i`.
    pub group_generator: Rational,
    pub q: u64,
    pub s: u64,
    /// `x_i`.
    pub conductor: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingSequence {
    pub values: Vec<Rational>,
    pub levels: Vec<Level>,
}

impl GeneratingSequence {
    /// `q_1 ... q_i`.
    pub fn index_product(&self, i: usize) -> u64 {
        self.levels[..i].iter().map(|l| l.q).product()
    }
}

/// The prefix semigroup `S_i` with its group generator and conductor.
struct Prefix {
    generators: Vec<Rational>,
    group: Rational,
    conductor: Rational,
    table: Option<SemigroupSpec>,
}

impl Prefix {
    fn naturals() -> Self {
        Prefix {
            generators: vec![Rational::one()],
            group: Rational::one(),
            conductor: Rational::zero(),
            table: None,
        }
    }

    /// Adds `a`, returning the group index it contributes.
    fn push(&mut self, a: &Rational) -> Result<u64> {
        let group = cyclic_group_generator(&[self.group.clone(), a.clone()])?;
        let q = (&self.group / &group)
            .to_integer_u64()
            .ok_or_else(|| Error::Internal(format!("group index for {a} is not an integer")))?;
        self.conductor = &self.conductor + &(Rational::from(q - 1) * a);
        self.group = group;
        self.generators.push(a.clone());
        self.table = None;
        Ok(q)
    }

    fn in_group(&self, y: &Rational) -> bool {
        (y / &self.group).is_integer()
    }

    fn above_conductor(&self, y: &Rational) -> bool {
        y > &(&self.conductor - &Rational::one())
    }

    /// Membership through the grid, when the grid is small enough.
    fn tabulated(&mut self, y: &Rational) -> Result<Option<bool>> {
        if self.table.is_none() {
            self.table = Some(SemigroupSpec::new(self.generators.clone())?);
        }
        let table = self.table.as_mut().expect("just built");
        let cells = table.lattice().scale(y).and_then(|k| k.to_u64());
        match cells {
            Some(k) if k < VERIFY_CELLS => Ok(Some(table.is_member(y)?)),
            _ => Ok(None),
        }
    }

    /// Membership of `y > 0` in the prefix semigroup.
    fn contains(&mut self, y: &Rational) -> Result<bool> {
        if !self.in_group(y) {
            return Ok(false);
        }
        let certified = self.above_conductor(y);
        match self.tabulated(y)? {
            Some(member) if certified && !member => Err(Error::Internal(format!(
                "{y} lies above the conductor {} of <{}> but is not a member",
                self.conductor,
                join(&self.generators)
            ))),
            Some(member) => Ok(member),
            None if certified => Ok(true),
            None => Err(Error::TooLarge(format!(
                "membership of {y} in <{}> needs a grid below the conductor {}",
                join(&self.generators),
                self.conductor
            ))),
        }
    }
}

trait ToIntegerU64 {
    fn to_integer_u64(&self) -> Option<u64>;
}

impl ToIntegerU64 for Rational {
    fn to_integer_u64(&self) -> Option<u64> {
        self.is_integer().then(|| self.numer().to_u64()).flatten()
    }
}

fn join(values: &[Rational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn check_head(values: &[Rational]) -> Result<()> {
    match values.first() {
        None => input("empty value sequence"),
        Some(v) if *v != 1 => input(format!("sequence must start at 1, found {v}")),
        _ => match values.iter().find(|v| !v.is_positive()) {
            Some(v) => input(format!("value {v} is not positive")),
            None => Ok(()),
        },
    }
}

/// Computes `q_i`, `s_i` and `x_i` for every level of `values`.
pub fn derive_levels(values: &[Rational]) -> Result<GeneratingSequence> {
    check_head(values)?;
    let mut prefix = Prefix::naturals();
    let mut levels = Vec::with_capacity(values.len() - 1);
    for (index, a) in values.iter().enumerate().skip(1) {
        let group = cyclic_group_generator(&[prefix.group.clone(), a.clone()])?;
        let q = (&prefix.group / &group)
            .to_integer_u64()
            .ok_or_else(|| Error::Internal(format!("group index for {a} is not an integer")))?;
        // First admissible multiple past x_{i-1} + 1 is guaranteed to land in S_{i-1}.
        let stop = &(&prefix.conductor + &Rational::one()) / a;
        let mut s = q;
        loop {
            let candidate = Rational::from(s) * a;
            if prefix.contains(&candidate)? {
                break;
            }
            if Rational::from(s) > stop {
                return Err(Error::Internal(format!(
                    "no multiple of {a} up to {s} lies in <{}>",
                    join(&prefix.generators)
                )));
            }
            s += q;
        }
        let pushed = prefix.push(a)?;
        debug_assert_eq!(pushed, q);
        levels.push(Level {
            index,
            value: a.clone(),
            group_generator: prefix.group.clone(),
            q,
            s,
            conductor: prefix.conductor.clone(),
        });
    }
    Ok(GeneratingSequence { values: values.to_vec(), levels })
}

/// Outcome of the gap condition `a_{i+1} > q_i a_i` at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCheck {
    Pass,
    Fail,
    /// Top level of a truncation: there is no `a_{k+1}`.
    NotCheckable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelVerdict {
    pub level: usize,
    pub value: Rational,
    pub q: u64,
    pub s: u64,
    pub pass_equality: bool,
    pub gap: GapCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `s_i = q_i`
    Equality,
    /// `a_{i+1} > q_i a_i`
    Gap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionFailure {
    pub level: usize,
    pub condition: Condition,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub input: Vec<Rational>,
    /// Input values that are sums of smaller input values; they are dropped
    /// before the levels are derived.
    pub redundant: Vec<Rational>,
    /// Positions (0-based) where the input fails to increase.
    pub order_violations: Vec<usize>,
    /// The minimal system the levels are computed on.
    pub minimal_system: Vec<Rational>,
    pub levels: Vec<LevelVerdict>,
    pub failures: Vec<CriterionFailure>,
    /// True when every checkable condition holds on this truncation.
    pub pass: bool,
    pub checked_up_to_level: usize,
}

/// Decides `s_i = q_i` and `a_{i+1} > q_i a_i` on a truncated sequence.
pub fn check_plane_criterion(values: &[Rational]) -> Result<CriterionReport> {
    check_head(values)?;
    let order_violations: Vec<usize> =
        (1..values.len()).filter(|&i| values[i] <= values[i - 1]).collect();

    let mut redundant = Vec::new();
    let mut minimal_system = vec![Rational::one()];
    for (i, a) in values.iter().enumerate().skip(1) {
        let mut smaller: Vec<&Rational> = values
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(j, v)| j != i && (v < a || (v == a && j < i)))
            .map(|(_, v)| v)
            .collect();
        smaller.sort();
        let mut prefix = Prefix::naturals();
        for v in smaller {
            prefix.push(v)?;
        }
        if prefix.contains(a)? {
            redundant.push(a.clone());
        } else {
            minimal_system.push(a.clone());
        }
    }

    let sequence = derive_levels(&minimal_system)?;
    let top = sequence.levels.len();
    let mut failures = Vec::new();
    let levels: Vec<LevelVerdict> = sequence
        .levels
        .iter()
        .map(|l| {
            let pass_equality = l.s == l.q;
            if !pass_equality {
                failures.push(CriterionFailure {
                    level: l.index,
                    condition: Condition::Equality,
                    detail: format!("s_{i} = {} but q_{i} = {}", l.s, l.q, i = l.index),
                });
            }
            let gap = match minimal_system.get(l.index + 1) {
                None => GapCheck::NotCheckable,
                Some(next) => {
                    let floor = Rational::from(l.q) * &l.value;
                    if next > &floor {
                        GapCheck::Pass
                    } else {
                        failures.push(CriterionFailure {
                            level: l.index,
                            condition: Condition::Gap,
                            detail: format!(
                                "a_{} = {next} is not greater than q_{i} a_{i} = {floor}",
                                l.index + 1,
                                i = l.index
                            ),
                        });
                        GapCheck::Fail
                    }
                }
            };
            LevelVerdict { level: l.index, value: l.value.clone(), q: l.q, s: l.s, pass_equality, gap }
        })
        .collect();
    Ok(CriterionReport {
        input: values.to_vec(),
        redundant,
        order_violations,
        minimal_system,
        levels,
        pass: failures.is_empty(),
        failures,
        checked_up_to_level: top,
    })
}

/// `alpha` and coprime exponents with `generator_i = alpha * exponent_i`; the
/// input semigroup is `alpha` times the numerical semigroup of the exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialCurve {
    pub alpha: Rational,
    pub exponents: Vec<u64>,
}

pub fn realize_monomial_curve(generators: &[Rational]) -> Result<MonomialCurve> {
    let alpha = cyclic_group_generator(generators)?;
    let exponents = generators
        .iter()
        .map(|g| {
            (g / &alpha)
                .to_integer_u64()
                .ok_or_else(|| Error::TooLarge(format!("exponent of {g} does not fit in 64 bits")))
        })
        .collect::<Result<_>>()?;
    Ok(MonomialCurve { alpha, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ExampleFamily;
    use crate::rational::rat;

    fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn derive_levels_examples() {
        let seq = derive_levels(&rats(&[(1, 1), (9, 2), (65, 4)])).unwrap();
        let qs: Vec<u64> = seq.levels.iter().map(|l| l.q).collect();
        let ss: Vec<u64> = seq.levels.iter().map(|l| l.s).collect();
        assert_eq!((qs, ss), (vec![2, 2], vec![2, 2]));
        assert_eq!(seq.levels[0].conductor, rat(9, 2));
        // x_2 = 9/2 + 65/4
        assert_eq!(seq.levels[1].conductor, rat(83, 4));

        let seq = derive_levels(&rats(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!((seq.levels[0].q, seq.levels[0].s), (1, 1));

        let seq = derive_levels(&rats(&[(1, 1), (5, 2), (21, 4)])).unwrap();
        assert_eq!(seq.levels.iter().map(|l| (l.q, l.s)).collect::<Vec<_>>(), vec![(2, 2), (2, 2)]);

        assert!(derive_levels(&rats(&[(2, 1), (5, 2)])).is_err());
        assert!(derive_levels(&[]).is_err());
    }

    #[test]
    fn s_can_exceed_q() {
        // <1, 5/3>: 3 * (5/3) = 5 so s_1 = q_1 = 3; then 7/6 has q = 2 but
        // 2 * 7/6 = 7/3 is not in <1, 5/3> (7/3 - 5/3 = 2/3), while 4 * 7/6 = 14/3 = 5/3 + 3.
        let seq = derive_levels(&rats(&[(1, 1), (5, 3), (7, 6)])).unwrap();
        assert_eq!((seq.levels[1].q, seq.levels[1].s), (2, 4));
        let report = check_plane_criterion(&rats(&[(1, 1), (5, 3), (7, 6)])).unwrap();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.level == 2 && f.condition == Condition::Equality));
    }

    #[test]
    fn group_index_chain() {
        let seq = derive_levels(&ExampleFamily::Exf1.values(8).unwrap()).unwrap();
        let mut prev = Rational::one();
        for l in &seq.levels {
            assert_eq!(&prev / &l.group_generator, Rational::from(l.q));
            assert_eq!(l.s % l.q, 0);
            prev = l.group_generator.clone();
        }
        for w in seq.levels.windows(2) {
            assert!(w[0].conductor <= w[1].conductor);
        }
    }

    #[test]
    fn criterion_passes_on_families() {
        for fam in [ExampleFamily::Exf1, ExampleFamily::Quadratic, ExampleFamily::NLog, ExampleFamily::power(2, 3).unwrap()] {
            let report = check_plane_criterion(&fam.values(6).unwrap()).unwrap();
            assert!(report.pass, "{fam}: {:?}", report.failures);
            assert_eq!(report.checked_up_to_level, 6);
            assert!(report.redundant.is_empty());
            assert_eq!(report.levels.last().unwrap().gap, GapCheck::NotCheckable);
            assert!(report.levels.iter().all(|l| l.s == fam.group_index()));
        }
    }

    #[test]
    fn criterion_failures_are_located() {
        let r = check_plane_criterion(&rats(&[(1, 1), (3, 2), (7, 4)])).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 1);
        assert_eq!((r.failures[0].level, r.failures[0].condition), (1, Condition::Gap));
        assert!(r.order_violations.is_empty());

        let r = check_plane_criterion(&rats(&[(1, 1), (5, 2), (9, 4)])).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 1);
        assert_eq!((r.failures[0].level, r.failures[0].condition), (1, Condition::Gap));
        assert_eq!(r.order_violations, vec![2]);

        assert!(check_plane_criterion(&rats(&[(3, 2), (5, 2)])).is_err());
    }

    #[test]
    fn redundant_values_are_reported() {
        let r = check_plane_criterion(&rats(&[(1, 1), (5, 2), (7, 2), (27, 4)])).unwrap();
        assert_eq!(r.redundant, vec![rat(7, 2)]);
        assert_eq!(r.minimal_system, rats(&[(1, 1), (5, 2), (27, 4)]));
        assert!(r.pass, "{:?}", r.failures);
        // agrees with the grid-based minimal generators
        let mut s = SemigroupSpec::new(rats(&[(1, 1), (5, 2), (7, 2), (27, 4)])).unwrap();
        assert_eq!(s.minimal_generators(&rat(27, 4)).unwrap(), r.minimal_system);

        let r = check_plane_criterion(&rats(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(r.redundant, vec![rat(2, 1)]);
        assert!(r.levels.is_empty());
    }

    #[test]
    fn realization_examples() {
        let m = realize_monomial_curve(&rats(&[(1, 1), (3, 2)])).unwrap();
        assert_eq!((m.alpha, m.exponents), (rat(1, 2), vec![2, 3]));
        let m = realize_monomial_curve(&rats(&[(1, 1)])).unwrap();
        assert_eq!((m.alpha, m.exponents), (rat(1, 1), vec![1]));
        let m = realize_monomial_curve(&rats(&[(2, 5), (3, 5)])).unwrap();
        assert_eq!((m.alpha, m.exponents), (rat(1, 5), vec![2, 3]));
        assert!(realize_monomial_curve(&[]).is_err());
    }

    #[test]
    fn realization_round_trip() {
        for gens in [rats(&[(1, 1), (3, 2)]), rats(&[(2, 5), (3, 5)]), rats(&[(1, 1), (9, 2), (65, 4)]), rats(&[(4, 3), (2, 1)])] {
            let m = realize_monomial_curve(&gens).unwrap();
            let ints: Vec<Rational> = m.exponents.iter().map(|&e| Rational::from(e)).collect();
            let bound = rat(30, 1);
            let rescaled: Vec<Rational> = SemigroupSpec::new(ints)
                .unwrap()
                .enumerate(&(&bound / &m.alpha))
                .unwrap()
                .into_iter()
                .map(|v| v * &m.alpha)
                .collect();
            assert_eq!(rescaled, SemigroupSpec::new(gens).unwrap().enumerate(&bound).unwrap());
        }
    }
}
