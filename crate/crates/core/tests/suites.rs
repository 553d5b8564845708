use tugames::axioms::SamplePlan;
use tugames::theorems::{verify, SuiteResult, SUITES};
use tugames::{Rational, Scalar};

fn failing<T: Scalar>(result: &SuiteResult<T>) -> Vec<String> {
    result.failing().map(|c| c.claim.clone()).collect()
}

#[test]
fn suites_in_float_mode() {
    let plan = SamplePlan::new(120, 3, 5, 42);
    for suite in SUITES {
        let result = verify::<f64>(suite, &plan).unwrap();
        let expected: Vec<String> = match suite {
            // The power rule's equal split reacts to outsiders' stand-alone worths.
            "t3" => vec!["power:2 satisfies AC".into()],
            // The HM reduction charges outsiders on v|_{T∪(N∖S)}, not on v*|_{j}.
            "t4" => vec!["marginal satisfies HM-NGC".into()],
            _ => vec![],
        };
        assert_eq!(failing(&result), expected, "{}", result.summary());
        assert_eq!(result.confirmed(), expected.is_empty());
    }
}

#[test]
fn composition_suite_in_exact_mode() {
    let result = verify::<Rational>("t2", &SamplePlan::new(60, 4, 4, 7)).unwrap();
    assert!(result.confirmed(), "{}", result.summary());
}

#[test]
fn sigma_suite_in_exact_mode() {
    let result = verify::<Rational>("t1", &SamplePlan::new(30, 3, 5, 7)).unwrap();
    assert!(result.confirmed(), "{}", result.summary());
}

#[test]
fn suites_are_deterministic() {
    let plan = SamplePlan::new(40, 3, 4, 9);
    for suite in ["t2", "t4", "c2"] {
        let a = verify::<f64>(suite, &plan).unwrap().to_json();
        let b = verify::<f64>(suite, &plan.clone().serial()).unwrap().to_json();
        assert_eq!(a, b, "{suite}");
    }
}
