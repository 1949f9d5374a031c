use cartan_core::certificates::{certify_exact, certify_nonsurjective, check_certificate, NonSurjectivityCertificate};
use cartan_core::herringbone::{classify, TripleSpec};
use cartan_core::linalg::GaussianRational;
use cartan_core::{Error, Tolerances};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = TripleSpec> {
    (prop::collection::vec(1usize..=3, 2..=5), prop::collection::vec(1usize..=3, 2..=5))
        .prop_filter_map("sizes differ", |(l, h)| TripleSpec::new(l, h).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_are_exclusive(s in spec_strategy()) {
        match certify_nonsurjective(&s) {
            Ok(c) => {
                prop_assert!(!classify(&s).is_surjective());
                prop_assert!(c.charpoly_exact.coefficients.iter().any(|x| !x.is_real()));
                prop_assert!(check_certificate(&c, &Tolerances::default()).unwrap().passed);
            }
            Err(Error::SpecActuallySurjective) => prop_assert!(classify(&s).is_surjective()),
            Err(e) => prop_assert!(false, "{s}: {e}"),
        }
    }

    #[test]
    fn non_real_z_always_works(re in -5i64..5, im in 1i64..5, sign in prop::bool::ANY) {
        let z = GaussianRational::from_ints(re, if sign { im } else { -im });
        let s = TripleSpec::new(vec![1, 1, 1, 2], vec![3, 2]).unwrap();
        let c = certify_exact(&s, &z).unwrap();
        prop_assert!(!c.charpoly_exact.coefficients[c.flagged_index].is_real());
    }
}

#[test]
fn certificate_survives_json() {
    let s = TripleSpec::new(vec![2, 2, 2], vec![3, 3]).unwrap();
    let c = certify_nonsurjective(&s).unwrap();
    let text = serde_json::to_string(&c).unwrap();
    let back: NonSurjectivityCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    assert!(check_certificate(&back, &Tolerances::default()).unwrap().passed);
}
