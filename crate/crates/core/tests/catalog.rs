use semmap_core::catalog::{self, Provenance};
use semmap_core::codec::serialize_map;

#[test]
fn derived_entries_regenerate_exactly() {
    for entry in catalog::manifest() {
        let Provenance::Derived { .. } = &entry.provenance else {
            continue;
        };
        let stored = catalog::get(&entry.name).unwrap();
        let fresh = catalog::regenerate(&entry.name).unwrap();
        assert_eq!(fresh, stored.map, "{}", entry.name);
        assert_eq!(
            fresh.labeled_faces(),
            stored.map.labeled_faces(),
            "{}",
            entry.name
        );
        assert_eq!(
            serialize_map(&fresh, Some(&entry.name)),
            stored.source,
            "{}",
            entry.name
        );
    }
}

#[test]
fn transcribed_entries_do_not_regenerate() {
    for (name, tag) in catalog::list() {
        if tag == "transcribed" {
            assert!(matches!(
                catalog::regenerate(&name),
                Err(catalog::CatalogError::NotDerived(_))
            ));
        }
    }
}
