use std::path::PathBuf;

use dioph_core::selftest::{golden_outputs, GOLDEN};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Set UPDATE_GOLDEN=1 to rewrite the files after an intended format change.
#[test]
fn emitters_match_golden_files() {
    let outputs = golden_outputs().unwrap();
    assert_eq!(outputs.len(), GOLDEN.len());
    if std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1") {
        for (name, body) in &outputs {
            std::fs::write(dir().join(name), body).unwrap();
        }
        return;
    }
    for (name, body) in &outputs {
        let on_disk = std::fs::read_to_string(dir().join(name)).unwrap();
        assert_eq!(&on_disk, body, "{name} drifted");
    }
}

#[test]
fn emission_is_repeatable() {
    assert_eq!(golden_outputs().unwrap(), golden_outputs().unwrap());
}
