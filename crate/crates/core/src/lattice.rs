//! Common denominators, cyclic value groups and the scaled membership grid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{input, Error, Result};
use crate::rational::Rational;

/// Largest grid the membership table may grow to, in cells.
pub const MAX_CELLS: u64 = 1 << 28;

const UNREACHED: u16 = u16::MAX;
const ORIGIN: u16 = u16::MAX - 1;

/// Least `D` such that `D * v` is an integer for every value.
pub fn common_denominator(values: &[Rational]) -> Result<BigInt> {
    if values.is_empty() {
        return input("common denominator of an empty list");
    }
    let mut d = BigInt::one();
    for v in values {
        if !v.is_positive() {
            return input(format!("value {v} is not positive"));
        }
        d = d.lcm(v.denom());
    }
    Ok(d)
}

/// Positive generator `g` of the subgroup of Q generated by `values`, so that
/// the group equals `g * Z`.
pub fn cyclic_group_generator(values: &[Rational]) -> Result<Rational> {
    let d = common_denominator(values)?;
    let g = values
        .iter()
        .map(|v| v.scaled_by(&d).expect("lcm of denominators clears every value"))
        .fold(BigInt::zero(), |acc, k| acc.gcd(&k));
    Ok(Rational::new(g, d))
}

/// Membership table for the semigroup generated by a finite set of positive
/// rationals, laid out on the grid `{k / D}`.
///
/// Slot `k` holds the index of the first generator (in input order) whose
/// removal leaves a reachable slot, which is enough to rebuild a witness.
#[derive(Clone, Debug)]
pub struct ScaledLattice {
    denominator: BigInt,
    // Scaled generators; `None` when a generator is beyond u64 range.
    scaled: Vec<Option<u64>>,
    slots: Vec<u16>,
}

impl ScaledLattice {
    pub fn new(generators: &[Rational]) -> Result<Self> {
        if generators.len() >= ORIGIN as usize {
            return input(format!("too many generators ({})", generators.len()));
        }
        let denominator = common_denominator(generators)?;
        let scaled = generators
            .iter()
            .map(|g| g.scaled_by(&denominator).and_then(|k| k.to_u64()))
            .collect();
        Ok(ScaledLattice { denominator, scaled, slots: vec![ORIGIN] })
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Largest scaled index currently tabulated.
    pub fn scaled_bound(&self) -> u64 {
        self.slots.len() as u64 - 1
    }

    /// Rational bound `B` of the current table (grid covers `k/D <= B`).
    pub fn bound(&self) -> Rational {
        Rational::new(self.scaled_bound(), self.denominator.clone())
    }

    pub fn scaled_generators(&self) -> &[Option<u64>] {
        &self.scaled
    }

    /// Grows the table so that index `k` is covered, at least doubling it.
    pub fn extend_to(&mut self, k: u64) -> Result<()> {
        let current = self.scaled_bound();
        if k <= current {
            return Ok(());
        }
        let target = k.max(current.saturating_mul(2));
        let target = if target >= MAX_CELLS && k < MAX_CELLS { MAX_CELLS - 1 } else { target };
        if target >= MAX_CELLS {
            return Err(Error::TooLarge(format!(
                "membership grid would need {} cells (limit {MAX_CELLS})",
                k.saturating_add(1)
            )));
        }
        self.slots.reserve((target - current) as usize);
        for slot in current + 1..=target {
            let hit = self.scaled.iter().enumerate().find_map(|(idx, g)| match g {
                Some(g) if *g <= slot && self.slots[(slot - g) as usize] != UNREACHED => {
                    Some(idx as u16)
                }
                _ => None,
            });
            self.slots.push(hit.unwrap_or(UNREACHED));
        }
        Ok(())
    }

    /// True iff `k / D` is a nonempty sum of generators. `k` must be tabulated.
    #[inline]
    pub fn is_member(&self, k: u64) -> bool {
        k > 0 && self.slots[k as usize] != UNREACHED
    }

    /// Coefficient vector reproducing `k / D`, if it is a member.
    pub fn witness(&self, mut k: u64) -> Option<Vec<u64>> {
        if !self.is_member(k) {
            return None;
        }
        let mut coeffs = vec![0u64; self.scaled.len()];
        while k > 0 {
            let idx = self.slots[k as usize] as usize;
            coeffs[idx] += 1;
            k -= self.scaled[idx].expect("witness generators are tabulated");
        }
        Some(coeffs)
    }

    /// Number of members with scaled index in `[lo, hi)`. Both ends must be tabulated.
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        let lo = lo.max(1);
        if hi <= lo {
            return 0;
        }
        self.slots[lo as usize..hi as usize].iter().filter(|&&s| s != UNREACHED).count() as u64
    }

    /// Scaled grid index of `x` if `x` lies on the grid and is nonnegative.
    pub fn scale(&self, x: &Rational) -> Option<BigInt> {
        x.scaled_by(&self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn common_denominator_examples() {
        assert_eq!(common_denominator(&[rat(1, 1), rat(9, 2), rat(65, 4)]).unwrap(), 4.into());
        assert_eq!(common_denominator(&[rat(1, 1)]).unwrap(), 1.into());
        assert_eq!(common_denominator(&[rat(3, 10), rat(7, 15)]).unwrap(), 30.into());
        assert!(common_denominator(&[rat(1, 1), rat(0, 1)]).is_err());
        assert!(common_denominator(&[rat(-1, 2)]).is_err());
    }

    #[test]
    fn cyclic_generator_examples() {
        assert_eq!(cyclic_group_generator(&[rat(1, 1), rat(9, 2)]).unwrap(), rat(1, 2));
        assert_eq!(cyclic_group_generator(&[rat(1, 1)]).unwrap(), rat(1, 1));
        assert_eq!(cyclic_group_generator(&[rat(1, 1), rat(3, 2), rat(9, 4)]).unwrap(), rat(1, 4));
        assert!(cyclic_group_generator(&[]).is_err());
    }

    #[test]
    fn cyclic_generator_is_largest_common_measure() {
        // Exhaustive divisor search: any rational h = a/b with every value an
        // integer multiple of h must divide the computed generator.
        let sets = [
            vec![rat(1, 1), rat(9, 2), rat(65, 4)],
            vec![rat(3, 10), rat(7, 15)],
            vec![rat(4, 3), rat(2, 1), rat(10, 9)],
            vec![rat(6, 1), rat(15, 1)],
        ];
        for values in sets {
            let g = cyclic_group_generator(&values).unwrap();
            for v in &values {
                assert!((v / &g).is_integer());
            }
            let mut best = Rational::zero();
            for b in 1..=90i64 {
                for a in 1..=30i64 {
                    let h = rat(a, b);
                    if values.iter().all(|v| (v / &h).is_integer()) && h > best {
                        best = h;
                    }
                }
            }
            assert_eq!(best, g);
        }
    }

    #[test]
    fn lattice_grows_by_doubling() {
        let mut lat = ScaledLattice::new(&[rat(1, 1), rat(9, 2)]).unwrap();
        assert_eq!(lat.denominator(), &BigInt::from(2));
        lat.extend_to(10).unwrap();
        assert_eq!(lat.scaled_bound(), 10);
        lat.extend_to(11).unwrap();
        assert_eq!(lat.scaled_bound(), 20);
        assert_eq!(lat.bound(), rat(10, 1));
        let members: Vec<u64> = (0..=20).filter(|&k| lat.is_member(k)).collect();
        assert_eq!(members, vec![2, 4, 6, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20]);
    }

    #[test]
    fn oversize_grid_is_rejected() {
        let mut lat = ScaledLattice::new(&[rat(1, 1)]).unwrap();
        assert!(matches!(lat.extend_to(MAX_CELLS), Err(Error::TooLarge(_))));
    }
}
