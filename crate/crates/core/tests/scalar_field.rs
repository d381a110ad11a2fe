use cgl_core::parse::parse_scalar;
use cgl_core::{ParameterSpace, Scalar, SignedMonomial};
use proptest::prelude::*;

const M: usize = 2;

fn build(terms: &[(i64, i32, i32)]) -> Scalar {
    terms.iter().fold(Scalar::zero(M), |acc, &(c, a, b)| {
        let t = Scalar::from_int(c, M)
            .mul(&Scalar::param(0, M).pow(a as i64).unwrap())
            .mul(&Scalar::param(1, M).pow(b as i64).unwrap());
        acc.add(&t)
    })
}

fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-3i64..=3, -2i32..=2, -2i32..=2), 0..4).prop_map(|t| build(&t))
}

fn fraction() -> impl Strategy<Value = Scalar> {
    (laurent(), laurent()).prop_map(|(a, b)| if b.is_zero() { a } else { a.div(&b).unwrap() })
}

fn monomial() -> impl Strategy<Value = SignedMonomial> {
    (prop::bool::ANY, -4i32..=4, -4i32..=4).prop_map(|(neg, a, b)| {
        let s = if neg { SignedMonomial::minus_one(M) } else { SignedMonomial::one(M) };
        s.mul(&SignedMonomial::param_pow(0, a, M)).mul(&SignedMonomial::param_pow(1, b, M))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in fraction(), b in fraction(), c in fraction()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.add(&a.neg()), Scalar::zero(M));
    }

    #[test]
    fn inverses(a in fraction()) {
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            prop_assert_eq!(a.pow(-2).unwrap(), a.mul(&a).inv().unwrap());
        }
    }

    #[test]
    fn printing_round_trips(a in fraction()) {
        let params = ParameterSpace::new(["q", "p"]).unwrap();
        let text = a.to_string_with(&params);
        prop_assert_eq!(parse_scalar(&text, &params).unwrap(), a);
    }

    #[test]
    fn log_is_a_homomorphism(a in monomial(), b in monomial()) {
        let la = a.monomial_log().unwrap();
        let lb = b.monomial_log().unwrap();
        let lab = a.mul(&b).monomial_log().unwrap();
        prop_assert_eq!(lab.sign, (la.sign + lb.sign) % 2);
        let sum: Vec<i64> = la.exps.iter().zip(&lb.exps).map(|(x, y)| x + y).collect();
        prop_assert_eq!(lab.exps, sum);
        prop_assert_eq!(a.to_scalar().mul(&b.to_scalar()), a.mul(&b).to_scalar());
        prop_assert!(a.mul(&a.inv()).is_one());
    }
}

#[test]
fn division_by_zero_is_reported() {
    assert!(Scalar::zero(1).inv().is_err());
    assert!(Scalar::one(1).div(&Scalar::zero(1)).is_err());
    assert!(SignedMonomial::from_int(0, 1).is_err());
}

#[test]
fn gcd_cancellation() {
    let params = ParameterSpace::single("q");
    let s = parse_scalar("(q^2 - 1)/(q - 1)", &params).unwrap();
    assert_eq!(s.to_string_with(&params), "q + 1");
    let t = parse_scalar("(q - q^-1)/(q^2 - 1)", &params).unwrap();
    assert_eq!(t, parse_scalar("q^-1", &params).unwrap());
}
