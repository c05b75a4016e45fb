use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use ugentropy::coeff::rat;
use ugentropy::formal_group::{check_axioms, lie_bracket, BivariateTruncated, GroupLaw};
use ugentropy::series::{ExactSeries, TruncatedSeries};

const ORDER: usize = 6;

fn exponential() -> impl Strategy<Value = ExactSeries> {
    prop::collection::vec((-4i64..=4, 1i64..=4), ORDER - 1).prop_map(|tail| {
        let mut c = vec![BigRational::zero(), BigRational::one()];
        c.extend(tail.into_iter().map(|(n, d)| rat(n, d)));
        TruncatedSeries::new(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_exponential_gives_a_commutative_group_law(g in exponential()) {
        let law = GroupLaw::from_exponential(&g).unwrap();
        let report = check_axioms(law.phi(), ORDER);
        prop_assert!(report.all_pass(), "{:?}", report);
        prop_assert!(lie_bracket(law.phi()).terms().iter().all(|(_, _, c)| c.is_zero()));
    }

    #[test]
    fn first_interaction_coefficient(g in exponential()) {
        // Φ = x + y + 2g₂ xy + ...
        let law = GroupLaw::from_exponential(&g).unwrap();
        prop_assert_eq!(law.phi().get(1, 1), rat(2, 1) * g.coeff(2));
        prop_assert_eq!(law.phi().get(1, 0), rat(1, 1));
        prop_assert_eq!(law.phi().get(2, 0), rat(0, 1));
    }

    #[test]
    fn formal_inverse_cancels(g in exponential()) {
        // F(ι(x)) = −F(x), i.e. Φ(x, ι(x)) = 0
        let law = GroupLaw::from_exponential(&g).unwrap();
        let iota = law.inverse();
        let lhs = law.log().compose(&iota).unwrap();
        prop_assert_eq!(lhs, law.log().neg());
    }
}

#[test]
fn non_associative_table_is_rejected() {
    // x + y + x²y: null-composable, neither symmetric nor associative
    let phi = BivariateTruncated::from_terms(4, &[(1, 0, rat(1, 1)), (0, 1, rat(1, 1)), (2, 1, rat(1, 1))]);
    let report = check_axioms(&phi, 4);
    assert!(report.null_composability.is_none());
    assert!(report.symmetry.is_some());
    let assoc = report.associativity.expect("associativity fails");
    assert_eq!(assoc.degree(), 3);
}

#[test]
fn multiplicative_law_from_exponential() {
    // G(t) = e^t − 1 gives Φ = x + y + xy exactly
    let mut c = vec![BigRational::zero()];
    let mut fact = BigRational::one();
    for k in 1..=ORDER {
        fact *= rat(k as i64, 1);
        c.push(BigRational::one() / &fact);
    }
    let law = GroupLaw::from_exponential(&TruncatedSeries::new(c)).unwrap();
    let mixed = law.interaction_terms();
    assert!(mixed.iter().all(|(k, m, v)| if (*k, *m) == (1, 1) { v.is_one() } else { v.is_zero() }));
}
