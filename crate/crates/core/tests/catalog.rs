use contactgeo::constructions::{catalog, CatalogKind, CatalogObject, CATALOG_NAMES};
use contactgeo::structure::ClassId;
use contactgeo::{ConstructionError, Sampling, Verdict};

#[test]
fn truth_table_matches_expected_classes() {
    let s = Sampling::default();
    for name in CATALOG_NAMES {
        let e = catalog(name).unwrap();
        let reports = match &e.object {
            CatalogObject::Acm(a) => a.classify_all(&s).unwrap(),
            CatalogObject::Ah(h) => h.classify_all(&s).unwrap(),
            CatalogObject::Submersion(sp) => sp.total().classify_all(&s).unwrap(),
        };
        let want = if e.kind() == CatalogKind::Ah {
            ClassId::AH.len()
        } else {
            ClassId::ACM.len()
        };
        assert_eq!(e.expected_classes.len(), want, "{name}");
        for (class, verdict) in &e.expected_classes {
            let r = reports.iter().find(|r| r.class_id == class.as_str()).unwrap();
            assert_eq!(r.verdict, *verdict, "{name} {class}: residual {:e}", r.max_residual);
            if r.verdict == Verdict::Fails {
                assert!(r.witness.is_some(), "{name} {class} has no witness");
            }
        }
    }
}

#[test]
fn invariants_hold_on_every_entry() {
    for name in CATALOG_NAMES {
        let res = match catalog(name).unwrap().object {
            CatalogObject::Acm(a) => a.check_invariants(32, 42).unwrap(),
            CatalogObject::Ah(h) => h.check_invariants(32, 42).unwrap(),
            CatalogObject::Submersion(sp) => {
                sp.total().check_invariants(32, 42).unwrap();
                sp.base().check_invariants(32, 42).unwrap();
                sp.validate(32, 42).unwrap()
            }
        };
        assert!(res < 1e-9, "{name}: {res:e}");
    }
}

#[test]
fn alpha_sasakian_entries_report_alpha() {
    let s = Sampling::default();
    for name in ["sasakian_r3", "sasakian_r5"] {
        let CatalogObject::Acm(a) = catalog(name).unwrap().object else {
            unreachable!()
        };
        let r = a.classify(ClassId::AlphaSasakian, &s).unwrap();
        assert!((r.extras["alpha"] - 1.0).abs() < 1e-7, "{name}: {:?}", r.extras);
    }
}

#[test]
fn unknown_entry_lists_names() {
    let err = catalog("nope").unwrap_err();
    assert!(matches!(err, ConstructionError::Unknown { .. }));
    assert!(err.to_string().contains("warped_s4"));
}

#[test]
fn class_ids_parse_back() {
    for c in ClassId::ACM.iter().chain(ClassId::AH.iter()) {
        assert_eq!(c.as_str().parse::<ClassId>().unwrap(), *c);
        assert!(!c.statement().is_empty());
    }
    assert!("C13".parse::<ClassId>().is_err());
}
