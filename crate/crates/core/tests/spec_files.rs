use std::path::PathBuf;

use freequot_core::autos::{builtin_group, BUILTIN_NAMES};
use freequot_core::spec::{parse_group_spec, GroupSpec};

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(format!("{name}.json"))
}

/// Set `FREEQUOT_BLESS=1` to regenerate the files.
#[test]
fn shipped_specs_match_builtins() {
    let bless = std::env::var_os("FREEQUOT_BLESS").is_some();
    for name in BUILTIN_NAMES {
        let expected = GroupSpec::builtin(name).unwrap().to_json();
        let path = spec_path(name);
        if bless {
            std::fs::write(&path, &expected).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, expected, "{name}");
        assert_eq!(GroupSpec::from_json(&text).unwrap().to_json(), text);
        assert_eq!(parse_group_spec(&text).unwrap(), builtin_group(name).unwrap());
    }
}
