use wildram::oracle::PrecPolicy;
use wildram::suite::{self, Outcome};

fn check(o: &Outcome) {
    assert!(
        o.passed(),
        "{}: {}/{} failed: {:#?}",
        o.name,
        o.failed,
        o.cases,
        o.failures
    );
}

#[test]
fn witt_matches_ghost() {
    for p in [2, 3, 5, 7] {
        check(&suite::witt_vs_ghost(p, 1000, 7).unwrap());
    }
}

#[test]
fn p_cyclic_oracle_matches_pole_order() {
    for p in [2, 3, 5] {
        check(&suite::p_cyclic_oracle(p, 70, 11, PrecPolicy::Default).unwrap());
    }
}

#[test]
fn p2_oracle_matches_formula() {
    for p in [2, 3, 5] {
        check(&suite::p2_oracle_grid(p, 12, 13, PrecPolicy::Default).unwrap());
    }
}

#[test]
fn genus_routes_agree() {
    for p in [2, 3, 5] {
        for o in suite::genus_routes(p, 15).unwrap() {
            check(&o);
        }
    }
}

#[test]
fn herbrand_round_trip() {
    check(&suite::herbrand_round_trip(500, 17));
}

#[test]
fn p_cyclic_composita() {
    for p in [2, 3, 5] {
        for o in suite::p_cyclic_composita(p, 20, 19).unwrap() {
            check(&o);
        }
    }
}

#[test]
fn p2_composita_outside_hypotheses() {
    for p in [2, 3, 5] {
        check(&suite::p2_undetermined(p).unwrap());
    }
}
