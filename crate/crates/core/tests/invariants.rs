use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;

use semigrowth::growth::{check_bounds, binomial};
use semigrowth::{rat, Execution, Rational, SemigroupSpec};

fn generator() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=6).prop_flat_map(|q| (q..=6 * q, Just(q)))
}

fn generators(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec(generator(), 1..=max)
}

fn to_spec(gens: &[(i64, i64)]) -> SemigroupSpec {
    SemigroupSpec::new(gens.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
}

/// Additive closure below `bound`.
fn closure(gens: &[(i64, i64)], bound: i64) -> BTreeSet<Ratio<i64>> {
    let bound = Ratio::from_integer(bound);
    let gens: Vec<Ratio<i64>> = gens.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
    let mut seen = BTreeSet::new();
    let mut todo: Vec<Ratio<i64>> = gens.iter().copied().filter(|g| *g < bound).collect();
    while let Some(x) = todo.pop() {
        if seen.insert(x) {
            todo.extend(gens.iter().map(|g| x + g).filter(|y| *y < bound));
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerate_matches_closure(gens in generators(4)) {
        let mut s = to_spec(&gens);
        let got = s.enumerate(&Rational::from(20i64)).unwrap();
        let want: Vec<Rational> = closure(&gens, 20).iter().map(|x| rat(*x.numer(), *x.denom())).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn closed_under_addition(gens in generators(3), i in 0usize..40, j in 0usize..40) {
        let mut s = to_spec(&gens);
        let elems = s.enumerate(&Rational::from(15i64)).unwrap();
        let (x, y) = (&elems[i % elems.len()], &elems[j % elems.len()]);
        prop_assert!(s.is_member(&(x + y)).unwrap());
    }

    #[test]
    fn witness_reproduces_element(gens in generators(4), pick in 0usize..100) {
        let mut s = to_spec(&gens);
        let elems = s.enumerate(&Rational::from(12i64)).unwrap();
        let x = &elems[pick % elems.len()];
        let coeffs = s.contains(x).unwrap().expect("member");
        let sum: Rational = coeffs.iter().zip(s.generators()).map(|(&c, g)| Rational::from(c) * g).sum();
        prop_assert_eq!(&sum, x);
    }

    #[test]
    fn phi_is_sum_of_intervals(gens in generators(4), n_max in 1u64..30) {
        let mut s = to_spec(&gens);
        let table = s.count_table(n_max).unwrap();
        let mut acc = 0;
        for row in &table.rows {
            acc += row.interval;
            prop_assert_eq!(row.phi, acc);
            prop_assert_eq!(row.phi, s.phi(row.n).unwrap());
        }
    }

    #[test]
    fn execution_modes_agree(gens in generators(4), n_max in 1u64..40) {
        let a = to_spec(&gens).with_execution(Execution::Sequential).count_table(n_max).unwrap();
        let b = to_spec(&gens).with_execution(Execution::Parallel).count_table(n_max).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Two generators 1 < a: phi(n) < binom(n+1, 2), the regular plane bound.
    #[test]
    fn two_generator_plane_bound(g in generator().prop_filter("a > 1", |&(p, q)| p > q), n_max in 2u64..60) {
        let mut s = to_spec(&[(1, 1), g]);
        let report = check_bounds(&mut s, 2, n_max).unwrap();
        prop_assert!(report.pass, "{}", report.summary());
        for n in 1..=n_max {
            prop_assert!(BigInt::from(s.phi(n).unwrap()) < BigInt::from(binomial(n + 1, 2)));
        }
    }

    /// Adding a generator can only grow phi.
    #[test]
    fn phi_monotone_in_generators(gens in generators(3), extra in generator(), n in 1u64..25) {
        let mut small = to_spec(&gens);
        let mut more = gens.clone();
        more.push(extra);
        let mut big = to_spec(&more);
        prop_assert!(small.phi(n).unwrap() <= big.phi(n).unwrap());
    }
}
