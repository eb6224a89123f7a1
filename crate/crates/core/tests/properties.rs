use proptest::prelude::*;

use num_integer::Integer;

use dedekind::arith::{int, legendre_valuation, rat_frac};
use dedekind::field::{cyclotomic_field, quadratic_field, FieldElement};
use dedekind::ge2::{reduce, verify_reduction, RingHandle};
use dedekind::intpoly::{int_membership, int_membership_exhaustive};
use dedekind::splitting::factor_prime;

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_division_round_trips(a in prop::collection::vec(-20i64..20, 4), b in prop::collection::vec(-20i64..20, 4)) {
        let k = cyclotomic_field(5).unwrap();
        let x = FieldElement::from_ints(&k, &a);
        let y = FieldElement::from_ints(&k, &b);
        prop_assume!(!y.is_zero());
        let q = &x * &y.inverse().unwrap();
        prop_assert_eq!(&q * &y, x.clone());
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn splitting_degrees_sum_to_field_degree(i in 0usize..SMALL_PRIMES.len(), d in prop::sample::select(vec![-1i64, 2, -5, 6, -7])) {
        let k = quadratic_field(d).unwrap();
        let s = factor_prime(&k, SMALL_PRIMES[i]).unwrap();
        prop_assert_eq!(s.degree_sum(), 2);
        prop_assert!(s.verify_product().unwrap());
    }

    #[test]
    fn legendre_matches_trial_division(n in 0u64..400, i in 0usize..SMALL_PRIMES.len()) {
        let p = SMALL_PRIMES[i];
        let mut count = 0;
        for mut m in 1..=n {
            while m % p == 0 {
                m /= p;
                count += 1;
            }
        }
        prop_assert_eq!(legendre_valuation(n, p).unwrap(), count);
    }

    #[test]
    fn coprime_integer_pairs_reduce(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        prop_assume!(a.gcd(&b) == 1);
        let z = quadratic_field(-1).unwrap();
        let ring = RingHandle::parse("Z[i]").unwrap();
        let pair = (FieldElement::from_ints(&z, &[a]), FieldElement::from_ints(&z, &[b]));
        let trace = reduce(&pair, &ring).unwrap();
        prop_assert!(verify_reduction(&trace).unwrap());
    }

    #[test]
    fn gaussian_pairs_reduce(a in prop::collection::vec(-50i64..50, 2), b in prop::collection::vec(-50i64..50, 2)) {
        let ring = RingHandle::parse("Z[i]").unwrap();
        let k = ring.field().clone();
        let x = FieldElement::from_ints(&k, &a);
        let y = FieldElement::from_ints(&k, &b);
        // gcd of norms 1 forces the ideal (x, y) to be the unit ideal
        let (nx, ny) = (x.norm().to_integer(), y.norm().to_integer());
        prop_assume!(nx.gcd(&ny) == int(1));
        let trace = reduce(&(x, y), &ring).unwrap();
        prop_assert!(verify_reduction(&trace).unwrap());
    }

    #[test]
    fn p_ordering_test_agrees_with_exhaustive_check(
        coeffs in prop::collection::vec(prop::collection::vec(-6i64..6, 2), 2..5),
        den in prop::sample::select(vec![2i64, 3, 4, 6]),
    ) {
        let k = quadratic_field(-1).unwrap();
        let f: Vec<FieldElement> = coeffs
            .iter()
            .map(|c| FieldElement::new(&k, c.iter().map(|&v| rat_frac(v, den)).collect()))
            .collect();
        prop_assume!(f.iter().any(|c| !c.is_zero()));
        prop_assert_eq!(int_membership(&f, &k).unwrap(), int_membership_exhaustive(&f, &k).unwrap());
    }
}

#[test]
fn gaussian_integer_valued_examples() {
    let k = quadratic_field(-1).unwrap();
    // x(x-1)/2 is not integer-valued on Z[i]: i(i-1)/2 = (-1-i)/2
    let f = vec![
        FieldElement::zero(&k),
        FieldElement::new(&k, vec![rat_frac(-1, 2)]),
        FieldElement::new(&k, vec![rat_frac(1, 2)]),
    ];
    assert!(!int_membership(&f, &k).unwrap());
    // (x^4 - x^2)/2 is: x^2(x^2 - 1) is even for every Gaussian integer
    let g = vec![
        FieldElement::zero(&k),
        FieldElement::zero(&k),
        FieldElement::new(&k, vec![rat_frac(-1, 2)]),
        FieldElement::zero(&k),
        FieldElement::new(&k, vec![rat_frac(1, 2)]),
    ];
    assert!(int_membership(&g, &k).unwrap());
}
