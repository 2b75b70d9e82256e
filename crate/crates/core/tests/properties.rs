//! Randomized invariants of the algebraic substrate.

use proptest::prelude::*;

use dualbraid::hopf;
use dualbraid::poisson::{Hamiltonian, PoissonBivector};
use dualbraid::quea::{HPoly, PbwElement, PbwKey};
use dualbraid::series::{rat, Rat, RingSignature, Series};

const ORDER: usize = 6;

fn sig1() -> RingSignature {
    RingSignature::new(1)
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_series(sig: RingSignature, order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(
        (prop::collection::vec(0u8..=2u8, sig.vars()), arb_rat()),
        0..5,
    )
    .prop_map(move |terms| {
        terms.into_iter().fold(Series::zero(sig, order), |acc, (e, c)| {
            acc.add(&Series::monomial(sig, order, &e, c))
        })
    })
}

/// A series with constant term one.
fn arb_unit(sig: RingSignature, order: usize) -> impl Strategy<Value = Series> {
    arb_series(sig, order).prop_map(move |s| {
        let fix = Series::constant(sig, order, Rat::from_integer(1.into()) - s.constant_term());
        s.add(&fix)
    })
}

/// A series with zero constant term.
fn arb_pointed(sig: RingSignature, order: usize) -> impl Strategy<Value = Series> {
    arb_series(sig, order).prop_map(move |s| {
        s.sub(&Series::constant(sig, order, s.constant_term()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_series(sig1(), ORDER), b in arb_series(sig1(), ORDER), c in arb_series(sig1(), ORDER)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn inverse_identity(a in arb_unit(sig1(), ORDER)) {
        let inv = a.invert_unit().unwrap();
        prop_assert_eq!(a.mul(&inv), Series::one(sig1(), ORDER));
    }

    #[test]
    fn sqrt_log_exp_identities(u in arb_pointed(sig1(), ORDER)) {
        let a = Series::one(sig1(), ORDER).add(&u);
        let r = a.sqrt_unit().unwrap();
        prop_assert_eq!(r.mul(&r), a.clone());
        prop_assert_eq!(a.log_unit().unwrap().exp_small().unwrap(), a);
        prop_assert_eq!(u.exp_small().unwrap().log_unit().unwrap(), u);
    }

    #[test]
    fn partial_derivative_product_rule(a in arb_series(sig1(), ORDER), b in arb_series(sig1(), ORDER), v in 0usize..3) {
        let lhs = a.mul(&b).partial(v).unwrap();
        let cut = ORDER - 1;
        let rhs = a.partial(v).unwrap().mul(&b.truncate(cut))
            .add(&a.truncate(cut).mul(&b.partial(v).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_coherence(a in arb_unit(sig1(), ORDER), b in arb_series(sig1(), ORDER), m in 0usize..ORDER) {
        let full = a.invert_unit().unwrap().mul(&b);
        let low = a.truncate(m).invert_unit().unwrap().mul(&b.truncate(m));
        prop_assert_eq!(full.truncate(m), low);
    }

    #[test]
    fn bracket_antisymmetry_and_derivation(
        f in arb_series(RingSignature::new(2), ORDER),
        g in arb_series(RingSignature::new(2), ORDER),
        h in arb_series(RingSignature::new(2), ORDER),
    ) {
        let sig = RingSignature::new(2);
        let table = PoissonBivector::standard(sig, ORDER);
        prop_assert!(table.bracket(&f, &g).add(&table.bracket(&g, &f)).is_zero());
        let lhs = table.bracket(&f, &g.mul(&h));
        let cut = ORDER - 1;
        let rhs = table.bracket(&f, &g).mul(&h.truncate(cut))
            .add(&g.truncate(cut).mul(&table.bracket(&f, &h)));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_identity_random(
        f in arb_series(RingSignature::new(2), ORDER + 2),
        g in arb_series(RingSignature::new(2), ORDER + 2),
        h in arb_series(RingSignature::new(2), ORDER + 2),
    ) {
        let table = PoissonBivector::standard(RingSignature::new(2), ORDER + 2);
        prop_assert!(table.jacobi_residual(&f, &g, &h).is_zero());
    }

    #[test]
    fn flow_is_an_algebra_and_poisson_map(
        f in arb_series(RingSignature::new(2), ORDER + 1),
        g in arb_series(RingSignature::new(2), ORDER + 1),
    ) {
        let sig = RingSignature::new(2);
        let n = ORDER;
        let table = PoissonBivector::standard(sig, n + 1);
        let u = Series::z_power(sig, n + 1, 0, -1)
            .mul(&Series::var(sig, n + 1, sig.x(0)))
            .mul(&Series::var(sig, n + 1, sig.y(1)));
        let lam = Hamiltonian::new(u).unwrap();
        let flow = table.flow(&lam, n);
        let fl = f.truncate(n);
        let gl = g.truncate(n);
        prop_assert_eq!(flow.apply(&fl.mul(&gl)), flow.apply(&fl).mul(&flow.apply(&gl)));
        let lhs = flow.apply(&table.bracket(&f, &g));
        let rhs = table.bracket(&flow.apply(&fl), &flow.apply(&gl));
        prop_assert_eq!(lhs.truncate(n - 1), rhs.truncate(n - 1));
    }

    #[test]
    fn inverse_flow_is_flow_of_negated_hamiltonian(scale_num in -2i64..=2) {
        let sig = RingSignature::new(2);
        let n = 4usize;
        let table = PoissonBivector::standard(sig, n + 1);
        let u = Series::var(sig, n + 1, sig.x(0))
            .mul(&Series::var(sig, n + 1, sig.y(1)))
            .scale(&rat(scale_num, 3));
        let lam = Hamiltonian::new(u).unwrap();
        let forward = table.flow(&lam, n);
        let backward = table.flow(&lam.neg(), n);
        prop_assert!(forward.invert().unwrap().agrees_with(&backward, n).is_ok());
        prop_assert!(backward.compose(&forward).is_identity());
    }
}

fn arb_pbw_monomial(k: usize) -> impl Strategy<Value = PbwElement> {
    ((0u8..=2, 0u8..=2, 0u8..=2), -3i64..=3, 0usize..=1).prop_map(move |(t, num, pow)| {
        PbwElement::monomial(
            1,
            k,
            PbwKey::from_triples(&[t]),
            HPoly::monomial(k, pow, rat(num, 1)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pbw_multiplication_is_associative(
        a in arb_pbw_monomial(4),
        b in arb_pbw_monomial(4),
        c in arb_pbw_monomial(4),
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn pbw_coproduct_is_multiplicative(a in arb_pbw_monomial(3), b in arb_pbw_monomial(3)) {
        let lhs = dualbraid::quea::coproduct(&a.mul(&b));
        let rhs = dualbraid::quea::coproduct(&a).mul(&dualbraid::quea::coproduct(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pbw_antipode_reverses_products(a in arb_pbw_monomial(3), b in arb_pbw_monomial(3)) {
        let lhs = dualbraid::quea::antipode(&a.mul(&b));
        let rhs = dualbraid::quea::antipode(&b).mul(&dualbraid::quea::antipode(&a));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coproduct_intertwines_brackets(
        f in arb_series(sig1(), ORDER + 1),
        g in arb_series(sig1(), ORDER + 1),
    ) {
        let s1 = sig1();
        let s2 = RingSignature::new(2);
        let d = hopf::coproduct(ORDER + 1);
        let t1 = PoissonBivector::standard(s1, ORDER + 1);
        let t2 = PoissonBivector::standard(s2, ORDER + 1);
        let lhs = d.apply(&t1.bracket(&f, &g));
        let rhs = t2.bracket(&d.apply(&f), &d.apply(&g));
        prop_assert_eq!(lhs.truncate(ORDER), rhs.truncate(ORDER));
    }
}
