//! Golden-file cases shared by the CLI tests and the acceptance suite.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    pub text: bool,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit, text: false }
}

pub const CASES: &[Case] = &[
    case("bound_trivial", &["bound", "--input", "tests/fixtures/descriptor_trivial.json"], 0),
    case("bound_qm", &["bound", "--input", "tests/fixtures/descriptor_qm.json"], 0),
    case("bound_rm", &["bound", "--input", "tests/fixtures/descriptor_rm.json"], 0),
    case("bound_gl2type", &["bound", "--input", "tests/fixtures/descriptor_gl2type.json"], 0),
    Case {
        name: "bound_trivial_text",
        args: &["bound", "--input", "tests/fixtures/descriptor_trivial.json", "--format", "text"],
        exit: 0,
        text: true,
    },
    case(
        "check_prime_trivial_11",
        &["check-prime", "--input", "tests/fixtures/descriptor_trivial.json", "--l", "11"],
        1,
    ),
    case(
        "check_prime_ramified_5",
        &["check-prime", "--input", "tests/fixtures/descriptor_trivial_ramified.json", "--l", "5"],
        1,
    ),
    case("check_prime_qm_3", &["check-prime", "--input", "tests/fixtures/descriptor_qm.json", "--l", "3"], 1),
    case("classify_type4_f11", &["classify", "--input", "tests/fixtures/gsp4_type4_f11.json"], 0),
    case("classify_full_f11", &["classify", "--input", "tests/fixtures/gsp4_full_f11.json"], 0),
    case("classify_c1_f13", &["classify", "--input", "tests/fixtures/gsp4_c1_f13.json", "--seed", "7"], 0),
    case("dickson_borel_f7", &["dickson", "--input", "tests/fixtures/gl2_borel_f7.json"], 0),
    case("dickson_sl2f5_in_f25", &["dickson", "--input", "tests/fixtures/gl2_sl2f5_in_f25.json"], 0),
    case("verify_inertia_11_47", &["verify-inertia", "--input", "tests/fixtures/inertia_11_47.json"], 0),
    case("verify_products_full_f5", &["verify-products", "--input", "tests/fixtures/products_full_f5.json"], 0),
    case("verify_products_graph_f11", &["verify-products", "--input", "tests/fixtures/products_graph_f11.json"], 0),
    case("verify_products_h_ell", &["verify-products", "--input", "tests/fixtures/products_h_ell.json"], 0),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn galimage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galimage")).args(args).current_dir(manifest_dir()).output().expect("binary runs")
}

pub fn golden_path(c: &Case) -> PathBuf {
    let ext = if c.text { "txt" } else { "json" };
    manifest_dir().join("tests/golden").join(format!("{}.{ext}", c.name))
}

/// Runs a case twice. Returns a description of the first mismatch, if any.
/// With `GALIMAGE_BLESS=1` the golden file is rewritten from the first run.
pub fn check_case(c: &Case) -> Result<(), String> {
    let a = galimage(c.args);
    let b = galimage(c.args);
    if a.status.code() != Some(c.exit) {
        return Err(format!(
            "{}: exit {:?}, expected {} ({})",
            c.name,
            a.status.code(),
            c.exit,
            String::from_utf8_lossy(&a.stderr)
        ));
    }
    if a.stdout != b.stdout {
        return Err(format!("{}: two runs differ", c.name));
    }
    let path = golden_path(c);
    if std::env::var_os("GALIMAGE_BLESS").is_some() {
        std::fs::write(&path, &a.stdout).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if golden != a.stdout {
        return Err(format!("{}: output differs from {}", c.name, rel(&path)));
    }
    Ok(())
}

fn rel(p: &Path) -> String {
    p.strip_prefix(manifest_dir()).unwrap_or(p).display().to_string()
}
