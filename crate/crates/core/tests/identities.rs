use contactgeo::constructions::{catalog, hopf_like_r5_to_r4, warped_s4, CatalogObject, CATALOG_NAMES};
use contactgeo::identities::{identity_ids, select};
use contactgeo::{registry, verify, verify_identity, Sampling, Verdict, VerifyError};

fn sampling() -> Sampling {
    Sampling {
        points: 12,
        vectors: 4,
        ..Sampling::default()
    }
}

const PROPERTIES: [&str; 2] = ["umbilic", "superminimal"];

#[test]
fn applicable_identities_hold_on_every_catalog_submersion() {
    for name in CATALOG_NAMES {
        let CatalogObject::Submersion(s) = catalog(name).unwrap().object else {
            continue;
        };
        let reports = verify(&s, &["all"], &sampling()).unwrap();
        assert_eq!(reports.len(), registry().len());
        // `umbilic` and `superminimal` are fibre properties, not identities.
        for r in reports.iter().filter(|r| !PROPERTIES.contains(&r.identity.as_str())) {
            match r.verdict {
                Verdict::Holds => assert!(r.max_residual.unwrap() < 1e-7, "{name} {}", r.identity),
                Verdict::NotApplicable => {
                    assert!(r.max_residual.is_none());
                    let why = r.reason.as_deref().unwrap_or("");
                    assert!(
                        why.starts_with("needs") || why.starts_with("requires"),
                        "{name} {}: {why}",
                        r.identity
                    );
                }
                v => panic!(
                    "{name} {}: {v:?} residual {:?} witness {:?}",
                    r.identity, r.max_residual, r.witness
                ),
            }
        }
    }
}

#[test]
fn hopf_is_alpha_sasakian_with_alpha_one() {
    let s = hopf_like_r5_to_r4().unwrap();
    let reports = verify(&s, &["T3.6.*"], &sampling()).unwrap();
    let ids: Vec<&str> = reports.iter().map(|r| r.identity.as_str()).collect();
    assert_eq!(ids, ["T3.6.base", "T3.6.minimal", "T3.6.fibre", "T3.6.A", "T3.6.T"]);
    for r in &reports {
        match r.identity.as_str() {
            "T3.6.minimal" | "T3.6.fibre" => {
                assert_eq!(r.verdict, Verdict::NotApplicable);
                assert!(r.reason.as_deref().unwrap().starts_with("needs r ≥ 1"));
            }
            _ => assert_eq!(r.verdict, Verdict::Holds, "{}", r.identity),
        }
    }
    let a = reports.iter().find(|r| r.identity == "T3.6.A").unwrap();
    assert_eq!(a.precondition.as_deref(), Some("alpha_sasakian"));
    assert!((a.extras["alpha"] - 1.0).abs() < 1e-7);
}

#[test]
fn preconditions_gate_identities() {
    // The warped product is lc-cosymplectic, not almost cosymplectic.
    let s = warped_s4().unwrap();
    let r = verify_identity(&s, "T3.1.A", &sampling()).unwrap();
    assert_eq!(r.verdict, Verdict::NotApplicable);
    assert!(r.reason.unwrap().starts_with("requires almost_cosymplectic"));
    let r = verify_identity(&s, "S4B.T", &sampling()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert_eq!(r.precondition.as_deref(), Some("lc_cosymplectic"));
    assert!(r.samples > 0);
}

#[test]
fn equivalences_and_implications_report_both_sides() {
    let s = warped_s4().unwrap();
    let r = verify_identity(&s, "S4B.superminimal", &sampling()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert!(r.extras.contains_key("lhs_max_residual"));
    assert!(r.extras.contains_key("rhs_max_residual"));
    let r = verify_identity(&s, "S4C.umbilic", &sampling()).unwrap();
    assert!(r.extras.contains_key("premise_max_residual") || r.verdict == Verdict::NotApplicable);
}

#[test]
fn warped_fibres_are_umbilical() {
    // T_UV = −g(U, V)∂u and N = −3∂u, so T_UV = g(U, V)N/3.
    let s = warped_s4().unwrap();
    let r = verify_identity(&s, "umbilic", &sampling()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    let CatalogObject::Submersion(qs) = catalog("example32_qs").unwrap().object else {
        unreachable!()
    };
    let r = verify_identity(&qs, "superminimal", &sampling()).unwrap();
    assert_eq!(r.verdict, Verdict::Fails);
}

#[test]
fn unknown_identity_lists_valid_ids() {
    let s = warped_s4().unwrap();
    let err = verify(&s, &["P9.nope"], &sampling()).unwrap_err();
    let VerifyError::UnknownIdentity { id, valid } = &err else {
        panic!("{err:?}")
    };
    assert_eq!(id, "P9.nope");
    assert_eq!(valid, &identity_ids());
    let msg = err.to_string();
    assert!(msg.contains("P2.1.deta") && msg.contains("S4B.T"));
    assert!(verify(&s, &["Q.*"], &sampling()).is_err());
}

#[test]
fn selection_keeps_registry_order_without_duplicates() {
    let picked = select(&["S4B.T", "P2.1.*", "P2.1.deta"]).unwrap();
    let ids: Vec<&str> = picked.iter().map(|r| r.id).collect();
    assert_eq!(ids[0], "P2.1.deta");
    assert_eq!(ids.last(), Some(&"S4B.T"));
    assert_eq!(ids.iter().filter(|&&i| i == "P2.1.deta").count(), 1);
    assert_eq!(select(&["*"]).unwrap().len(), registry().len());
}

#[test]
fn mandated_ids_are_registered() {
    let ids = identity_ids();
    for id in [
        "P2.1.deta",
        "P2.1.AXU",
        "P2.1.AXY",
        "P2.1.Aphi",
        "P2.2.lee",
        "P2.3.beta",
        "P2.4.h1",
        "P2.4.h2",
        "P2.5.v1",
        "P2.5.v2",
        "P2.5.T",
        "C2.1.N",
        "T3.1.A",
        "T3.2.A",
        "T3.6.A",
        "T3.3.TUphiV",
        "S4A.A",
        "S4B.T",
        "S4C.A",
        "umbilic",
        "superminimal",
    ] {
        assert!(ids.iter().any(|i| i == id), "{id} missing");
    }
}

#[test]
fn verification_is_deterministic() {
    let s = hopf_like_r5_to_r4().unwrap();
    let a = verify(&s, &["T3.6.*", "P2.1.*"], &sampling()).unwrap();
    let b = verify(&s, &["T3.6.*", "P2.1.*"], &sampling()).unwrap();
    assert_eq!(a, b);
    let other = Sampling { seed: 7, ..sampling() };
    let c = verify(&s, &["P2.1.AXY"], &other).unwrap();
    let d = a.iter().find(|r| r.identity == "P2.1.AXY").unwrap();
    assert_ne!(c[0].witness.as_ref().unwrap().point, d.witness.as_ref().unwrap().point);
}

#[test]
fn empty_sampling_is_rejected() {
    let s = warped_s4().unwrap();
    let none = Sampling {
        points: 0,
        ..sampling()
    };
    assert!(matches!(verify(&s, &["all"], &none), Err(VerifyError::NoSamples)));
}
