use crformal::hypersurface::Convention;
use crformal::verify::{self, Registry, SuiteStatus};

#[test]
fn no_statement_is_falsified_under_either_convention() {
    for conv in Convention::ALL {
        let reg = Registry::standard(10, conv, 3).unwrap();
        let rs = verify::run_all(&reg);
        let bad: Vec<_> = rs
            .iter()
            .filter(|r| r.status == SuiteStatus::Falsified)
            .map(|r| format!("{} on {}", r.theorem, r.instance))
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(verify::count(&rs, SuiteStatus::Confirmed) > 50);
    }
}

#[test]
fn results_do_not_depend_on_the_seed() {
    let a = verify::run_all(&Registry::standard(8, Convention::TwoI, 1).unwrap());
    let b = verify::run_all(&Registry::standard(8, Convention::TwoI, 99).unwrap());
    let statuses = |rs: &[verify::TheoremSuiteResult]| {
        rs.iter()
            .map(|r| (r.theorem.clone(), r.instance.clone(), r.status))
            .collect::<Vec<_>>()
    };
    assert_eq!(statuses(&a), statuses(&b));
}

#[test]
fn controls_are_excluded_not_falsified() {
    let reg = Registry::standard(10, Convention::TwoI, 1).unwrap();
    let rs = verify::run_all(&reg);
    let controls: Vec<_> = reg
        .map_instances()
        .filter(|i| i.control.is_some())
        .map(|i| i.id.clone())
        .collect();
    assert!(!controls.is_empty());
    for r in rs.iter().filter(|r| controls.contains(&r.instance)) {
        assert_ne!(
            r.status,
            SuiteStatus::Falsified,
            "{} on {}",
            r.theorem,
            r.instance
        );
    }
}

#[test]
fn type_window_is_inhabited() {
    let reg = Registry::standard(10, Convention::TwoI, 1).unwrap();
    let rs = verify::suite_infinite_type(&reg);
    let hits: Vec<_> = rs
        .iter()
        .filter(|r| {
            r.theorem == verify::TYPE_WINDOW_DICHOTOMY && r.status == SuiteStatus::Confirmed
        })
        .collect();
    assert!(hits
        .iter()
        .any(|r| r.instance.contains("blowup(3, 1) -> blowup(2, 1)")));
}

#[test]
fn results_serialize() {
    let reg = Registry::standard(6, Convention::TwoI, 1).unwrap();
    let rs = verify::suite_linear_part(&reg);
    let json = serde_json::to_string(&rs).unwrap();
    assert!(json.contains("linear_part_invertible"));
}
