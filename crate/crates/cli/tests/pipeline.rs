use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use twistcode_cli::{
    check_flat_report, distance_report, export_matrices, export_matrix, iso_report,
    parse_code_spec, parse_twist_pool, run_report, search_twists, CodeSpec, ExportTarget, Pool,
    SearchOptions,
};
use twistcode_core::{BinMatrix, FiberAction};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn fixture(name: &str) -> CodeSpec {
    parse_code_spec(&std::fs::read_to_string(fixture_path(&format!("{name}.toml"))).unwrap())
        .unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistcode"))
}

#[test]
fn reports_for_dihedral_cases() {
    for (name, k, ranks) in [
        ("untwisted", 6, 21),
        ("case1", 6, 21),
        ("case2", 10, 19),
        ("case3", 12, 18),
    ] {
        let r = run_report(&fixture(name)).unwrap();
        assert!(r.css_ok);
        let css = &r.value["css"];
        assert_eq!(css["n"], 48, "{name}");
        assert_eq!(css["k"], k, "{name}");
        assert_eq!(css["rank_hx"], ranks, "{name}");
        assert_eq!(css["rank_hz"], ranks, "{name}");
        assert_eq!(css["distance"]["d"], 2, "{name}");
        assert_eq!(r.value["untwisted"]["k"], 6);
        assert_eq!(r.value["dims"]["ell"], 6);
    }
}

#[test]
fn iso_section() {
    let case1 = iso_report(&fixture("case1")).unwrap();
    assert_eq!(case1["iso"]["applicable"], true);
    assert_eq!(case1["iso"]["squares_commute"], true);
    assert_eq!(case1["iso"]["distance_equality"], "uncertified");
    let case2 = iso_report(&fixture("case2")).unwrap();
    assert_eq!(case2["iso"]["applicable"], false);
    assert_eq!(
        case2["iso"]["invertible_per_twist"],
        serde_json::json!([true, false])
    );
}

#[test]
fn literal_lifted_product_check() {
    let mut spec = fixture("untwisted");
    let plain = run_report(&spec).unwrap().value;
    assert_eq!(plain["lifted_product"]["css_ok"], false);
    spec.options.lp_transpose = twistcode_core::TransposeMode::Antipode;
    let antipode = run_report(&spec).unwrap().value;
    assert_eq!(antipode["lifted_product"]["css_ok"], true);
    assert_eq!(antipode["lifted_product"]["matches_complex"], true);
    assert_eq!(plain["css"], antipode["css"]);
}

#[test]
fn hgp_fixture() {
    let r = run_report(&fixture("hgp_trivial")).unwrap().value;
    assert_eq!(r["css"]["n"], 5);
    assert_eq!(r["css"]["k"], 1);
    assert_eq!(r["css"]["distance"]["d"], 2);
    assert_eq!(r["css"]["distance"]["method"], "full_enumeration");
    let hx = export_matrices(&fixture("hgp_trivial"), ExportTarget::Hx).unwrap();
    assert!(hx.starts_with("2 5\n"));
}

#[test]
fn export_round_trip() {
    for name in ["untwisted", "case1", "case2", "case3"] {
        let spec = fixture(name);
        let hx = BinMatrix::from_text(&export_matrices(&spec, ExportTarget::Hx).unwrap()).unwrap();
        let hz = BinMatrix::from_text(&export_matrices(&spec, ExportTarget::Hz).unwrap()).unwrap();
        assert_eq!(hx, export_matrix(&spec, ExportTarget::Hx).unwrap());
        assert!(hx.mul(&hz.transpose()).unwrap().is_zero());
        let d2 = BinMatrix::from_text(&export_matrices(&spec, ExportTarget::D2).unwrap()).unwrap();
        assert_eq!(d2.transpose(), hz);
        let d1 = BinMatrix::from_text(&export_matrices(&spec, ExportTarget::D1).unwrap()).unwrap();
        assert!(d1.mul(&d2).unwrap().is_zero());
    }
    let hx = BinMatrix::from_text(&export_matrices(&fixture("case3"), ExportTarget::Hx).unwrap())
        .unwrap();
    assert_eq!(hx.shape(), (24, 48));
    assert_eq!(hx.rank(), 18);
}

#[test]
fn search_identity_and_fiber_pool() {
    let spec = fixture("untwisted");
    let pool_text = std::fs::read_to_string(fixture_path("pool_identity_fiber.toml")).unwrap();
    let pool = parse_twist_pool(&pool_text, &spec).unwrap();
    let out = search_twists(
        &spec,
        &SearchOptions {
            pool: Pool::Explicit(pool.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(out.candidates.len(), 4);
    assert!(!out.truncated);
    let top = &out.candidates[0];
    assert_eq!(top.k, 12);
    assert_eq!(top.twists, vec![pool[1].clone(), pool[1].clone()]);
    assert_eq!(top.distance.as_ref().unwrap().d(), Some(2));

    let identity_only = search_twists(
        &spec,
        &SearchOptions {
            pool: Pool::Explicit(vec![pool[0].clone()]),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(identity_only.candidates.len(), 1);
    assert_eq!(identity_only.candidates[0].k, 6);
}

#[test]
fn search_group_scalars_keeps_k() {
    let spec = fixture("untwisted");
    for action in [FiberAction::Left, FiberAction::Right] {
        let out = search_twists(
            &spec,
            &SearchOptions {
                action,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.pool_size, 6);
        assert!(out.candidates.iter().all(|c| c.k == 6));
        let expected = if action == FiberAction::Right { 36 } else { 1 };
        assert_eq!(out.candidates.len(), expected);
    }
}

#[test]
fn search_with_own_twists_reaches_spec_k() {
    for name in ["case1", "case2", "case3"] {
        let spec = fixture(name);
        let own = match &spec.twists {
            twistcode_cli::TwistSpec::PerColumn(t) => t.clone(),
            _ => unreachable!(),
        };
        let k = run_report(&spec).unwrap().value["css"]["k"]
            .as_u64()
            .unwrap() as usize;
        let out = search_twists(
            &spec,
            &SearchOptions {
                pool: Pool::Explicit(own),
                top: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.candidates[0].k >= k, "{name}");
    }
}

#[test]
fn sampled_search_is_reproducible() {
    let spec = fixture("untwisted");
    let options = SearchOptions {
        pool: Pool::LowWeight { max_support: 1 },
        max_candidates: 50,
        top: 1,
        ..Default::default()
    };
    let a = search_twists(&spec, &options).unwrap();
    let b = search_twists(&spec, &options).unwrap();
    assert!(a.truncated);
    assert_eq!(a.seed, spec.derived_seed());
    assert_eq!(a.to_value(50), b.to_value(50));
    let other = search_twists(
        &spec,
        &SearchOptions {
            seed: Some(1),
            ..options.clone()
        },
    )
    .unwrap();
    assert_eq!(other.seed, 1);
    assert!(a.candidates.windows(2).all(|w| w[0].k >= w[1].k));
}

#[test]
fn empty_flat_pool_is_an_error() {
    let spec = fixture("untwisted");
    let pool = parse_twist_pool("[[twist]]\nright = \"r\"\n", &spec).unwrap();
    // right scalars are always flat; a left scalar by r is not
    assert!(search_twists(
        &spec,
        &SearchOptions {
            pool: Pool::Explicit(pool),
            ..Default::default()
        }
    )
    .is_ok());
    let left_r = parse_twist_pool(
        "[[twist]]\nphi1 = [[\"r\", \"0\"], [\"0\", \"r\"]]\nphi0 = [[\"r\", \"0\"], [\"0\", \"r\"]]\n",
        &spec,
    )
    .unwrap();
    let e = search_twists(
        &spec,
        &SearchOptions {
            pool: Pool::Explicit(left_r),
            ..Default::default()
        },
    )
    .unwrap_err();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn nonflat_specs() {
    let text = std::fs::read_to_string(fixture_path("untwisted.toml"))
        .unwrap()
        .replace("identity = true", "[[twists.per_column]]\nright = \"e\"\n[[twists.per_column]]\nphi1 = [[\"r\", \"0\"], [\"0\", \"r\"]]\nphi0 = [[\"r\", \"0\"], [\"0\", \"r\"]]")
        .replace("[twists]\n", "");
    let mut spec = parse_code_spec(&text).unwrap();
    let e = run_report(&spec).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    let flat = check_flat_report(&spec).unwrap();
    assert_eq!(flat["flatness"]["flat"], false);
    assert_eq!(flat["flatness"]["checks"][0]["flat"], true);
    assert_eq!(flat["flatness"]["checks"][1]["flat"], false);
    spec.options.allow_nonflat = true;
    let r = distance_report(&spec).unwrap();
    assert!(!r.css_ok);
    assert_eq!(r.value["css"]["css_ok"], false);
}

#[test]
fn binary_exit_codes_and_output() {
    let case3 = fixture_path("case3.toml");
    let out = bin().args(["params"]).arg(&case3).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["css"]["k"], 12);

    let out = bin()
        .args(["distance", "--cap", "1"])
        .arg(&case3)
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["css"]["distance"]["d_x"], "> 1");
    assert_eq!(v["css"]["distance"]["exact_x"], false);

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("hz.txt");
    let out = bin()
        .args(["expand", "--target", "hz", "--out"])
        .arg(&target)
        .arg(&case3)
        .output()
        .unwrap();
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&target)
        .unwrap()
        .starts_with("24 48\n"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[group]\nkind = \"cyclic\"\n").unwrap();
    assert_eq!(
        bin()
            .arg("params")
            .arg(&bad)
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bin()
            .arg("params")
            .arg(dir.path().join("missing.toml"))
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bin()
            .args(["params", "--lp-transpose", "sideways"])
            .arg(&case3)
            .output()
            .unwrap()
            .status
            .code(),
        Some(1)
    );

    let nonflat = dir.path().join("nonflat.toml");
    std::fs::write(
        &nonflat,
        "[group]\nkind = \"dihedral\"\nn = 3\n[complex]\nbase = [[\"1\", \"r\"]]\nfiber = [[\"1\", \"r\"]]\n[twists.connection]\nassignment = [[\"s\", \"e\"]]\n",
    )
    .unwrap();
    let out = bin().arg("params").arg(&nonflat).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not flat"));
    let out = bin()
        .args(["params", "--allow-nonflat"])
        .arg(&nonflat)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["css"]["css_ok"], false);
    assert_eq!(v["flatness"]["flat"], false);
    assert_eq!(
        bin()
            .arg("check-flat")
            .arg(&nonflat)
            .output()
            .unwrap()
            .status
            .code(),
        Some(0)
    );

    let out = bin()
        .args(["search-twists", "--pool", "file", "--pool-file"])
        .arg(fixture_path("pool_identity_fiber.toml"))
        .arg(fixture_path("untwisted.toml"))
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["candidates"][0]["k"], 12);
}
