mod common;

use common::{check_case, galimage, manifest_dir, CASES};
use serde_json::Value;

fn stderr(o: &std::process::Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn golden_outputs() {
    for c in CASES {
        check_case(c).unwrap();
    }
}

#[test]
fn bound_names_threshold_and_conditions() {
    let o = galimage(&["bound", "--input", "tests/fixtures/descriptor_trivial.json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["threshold"]["symbol"], "b(2,4,2)^{1/4}");
    let codes: Vec<&str> =
        v["side_conditions"].as_array().unwrap().iter().map(|c| c["code"].as_str().unwrap()).collect();
    assert_eq!(codes, ["unramified_in_K", "semistable_place"]);
    let lo: u64 = v["threshold"]["bit_length"]["lower"].as_str().unwrap().parse().unwrap();
    let hi: u64 = v["threshold"]["bit_length"]["upper"].as_str().unwrap().parse().unwrap();
    assert!(lo <= hi && lo > 64);

    let o = galimage(&["bound", "--input", "tests/fixtures/descriptor_qm.json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let texts: Vec<&str> =
        v["side_conditions"].as_array().unwrap().iter().map(|c| c["text"].as_str().unwrap()).collect();
    assert!(texts.contains(&"ℓ ∤ 6"), "{texts:?}");
}

#[test]
fn malformed_descriptors_exit_2_with_field() {
    let o = galimage(&["bound", "--input", "tests/fixtures/descriptor_missing_height.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("faltings_height"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(manifest_dir().join("tests/fixtures/descriptor_trivial.json")).unwrap();
    let extra = dir.path().join("extra.json");
    std::fs::write(&extra, src.replace("\"dim\": 2,", "\"dim\": 2, \"cm_field\": \"-3\",")).unwrap();
    let o = galimage(&["bound", "--input", extra.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cm_field"), "{}", stderr(&o));

    let bad_prime = dir.path().join("bad_prime.json");
    std::fs::write(&bad_prime, src.replace("[\"2\", \"3\"]", "[\"2\", \"15\"]")).unwrap();
    let o = galimage(&["check-prime", "--input", bad_prime.to_str().unwrap(), "--l", "13"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("non_semistable_primes[1]: 15 is not prime"), "{}", stderr(&o));

    let o = galimage(&["bound", "--input", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_prime_exit_codes() {
    let d = "tests/fixtures/descriptor_trivial.json";
    for (l, code) in [("4", 2), ("1", 2), ("x", 2), ("11", 1), ("2305843009213693951", 1)] {
        let o = galimage(&["check-prime", "--input", d, "--l", l]);
        assert_eq!(o.status.code(), Some(code), "l = {l}: {}", stderr(&o));
    }
    let o = galimage(&["check-prime", "--input", "tests/fixtures/descriptor_trivial_ramified.json", "--l", "5"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> =
        v["verdict"]["failed_conditions"].as_array().unwrap().iter().map(|c| c["code"].as_str().unwrap()).collect();
    assert_eq!(failed, ["RamifiedInK", "BelowThreshold"]);
    assert_eq!(v["verdict"]["comparison"], "PrimeBelow");
}

#[test]
fn group_commands_reject_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.json");
    std::fs::write(
        &small,
        r#"{"l": 7, "form": "standard", "generators": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}"#,
    )
    .unwrap();
    let o = galimage(&["classify", "--input", small.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let borel = dir.path().join("borel_pair.json");
    std::fs::write(
        &borel,
        r#"{"factors": [{"l": 7}, {"l": 7}], "generators": [[[[1,1],[0,1]], [[1,1],[0,1]]], [[[3,0],[0,1]], [[3,0],[0,1]]]]}"#,
    )
    .unwrap();
    let o = galimage(&["verify-products", "--input", borel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let both = dir.path().join("both.json");
    std::fs::write(&both, r#"{"h_ell": {"l": 5, "residue_degrees": [1, 1]}, "factors": [{"l": 5}, {"l": 5}]}"#)
        .unwrap();
    let o = galimage(&["verify-products", "--input", both.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = galimage(&["dickson", "--input", "tests/fixtures/gsp4_full_f11.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inertia_flags() {
    let o = galimage(&["verify-inertia"]);
    assert_eq!(o.status.code(), Some(2));
    let o = galimage(&["verify-inertia", "--lmax", "300"]);
    assert_eq!(o.status.code(), Some(2));
    let o = galimage(&["verify-inertia", "--l", "11..47"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["all_verified"], true);
    let from_file = galimage(&["verify-inertia", "--input", "tests/fixtures/inertia_11_47.json"]);
    assert_eq!(o.stdout, from_file.stdout);
    for entry in v["twisted_cubic"].as_array().unwrap() {
        for w in entry["witnesses"].as_array().unwrap() {
            assert_eq!(w["failing_orderings"], "24/24");
        }
    }
    let o = galimage(&["verify-inertia", "--l", "13"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["twisted_cubic"].as_array().unwrap().len(), 1);
}

#[test]
fn global_flags() {
    let o = galimage(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let o = galimage(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = galimage(&["bound", "--input", "tests/fixtures/descriptor_trivial.json", "--precision-cap", "63"]);
    assert_eq!(o.status.code(), Some(2));
    let o = galimage(&["bound", "--input", "tests/fixtures/descriptor_trivial.json", "--format", "yaml"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = galimage(&["dickson", "--input", "tests/fixtures/gl2_borel_f7.json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = galimage(&["dickson", "--input", "tests/fixtures/gl2_borel_f7.json"]);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn seed_reaches_the_report() {
    let a = galimage(&["classify", "--input", "tests/fixtures/gsp4_type4_f11.json", "--seed", "1"]);
    let b = galimage(&["classify", "--input", "tests/fixtures/gsp4_type4_f11.json", "--seed", "2"]);
    let va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(va["seed"], 1);
    assert_eq!(va["report"]["conclusion"], vb["report"]["conclusion"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn shipped_schemas_match_files() {
    use galimage::formats::Schema;
    let root = manifest_dir().join("../../schemas");
    for s in Schema::ALL {
        let on_disk = std::fs::read_to_string(root.join(s.file_name())).unwrap();
        assert_eq!(on_disk, s.source(), "{}", s.file_name());
    }
}

#[test]
fn fixtures_satisfy_their_schemas() {
    use galimage::formats::Schema;
    let dir = manifest_dir().join("tests/fixtures");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_owned();
        let schema = match name.split('_').next().unwrap() {
            "descriptor" => Schema::Descriptor,
            "gsp4" => Schema::Gsp4Generators,
            "gl2" => Schema::Gl2Generators,
            "products" => Schema::Products,
            "inertia" => Schema::InertiaCampaign,
            other => panic!("unexpected fixture prefix {other}"),
        };
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let errs = schema.violations(&doc);
        assert_eq!(errs.is_empty(), !name.contains("missing"), "{name}: {errs:?}");
    }
}
