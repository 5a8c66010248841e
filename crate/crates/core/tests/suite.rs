use qflag_core::cartan::DatumConfig;
use qflag_core::suite::{run_suite, RunConfig, Status, Suite};
use qflag_core::Error;

fn cfg(ty: &str, suites: &[Suite]) -> RunConfig {
    RunConfig {
        datum: DatumConfig { ty: Some(ty.into()), ..Default::default() },
        suites: suites.to_vec(),
        seed: 1,
        ..Default::default()
    }
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!(matches!("bogus".parse::<Suite>(), Err(Error::Config(_))));
}

#[test]
fn a1_everything_passes() {
    let r = run_suite(&cfg("A1", &Suite::ALL)).unwrap();
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.summary.fail + r.summary.capacity, 0);
    for s in Suite::ALL {
        if s != Suite::Serre && s != Suite::Braid {
            assert!(r.of_suite(s).count() > 0, "{s} is empty for A1");
        }
    }
    assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn the_empty_selection() {
    let r = run_suite(&cfg("A2", &[])).unwrap();
    assert!(r.checks.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn small_caps_surface_as_capacity() {
    let mut c = cfg("A2", &[Suite::Pbw]);
    c.half_cap = 2;
    let r = run_suite(&c).unwrap();
    assert!(r.checks.iter().any(|c| c.status == Status::Capacity));
    assert_eq!(r.summary.fail, 0);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn invalid_configs() {
    let mut c = cfg("A2", &[Suite::Pbw]);
    c.height_cap = Some(0);
    assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    let c = cfg("E8", &[Suite::Pbw]);
    assert!(matches!(run_suite(&c), Err(Error::Config(_))));
}

#[test]
fn a2_window_too_small_is_a_failed_check() {
    let mut c = cfg("A2", &[Suite::Cosets]);
    c.window = Some(qflag_core::Weight([1, 0]));
    let r = run_suite(&c).unwrap();
    assert!(r.checks.iter().any(|c| c.status == Status::Fail));
    assert_eq!(r.exit_code(), 1);
}
