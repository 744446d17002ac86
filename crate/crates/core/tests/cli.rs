mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use eotype::cli::report::{check_report_schema, EoReport};

fn eotype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eotype"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eotype-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn example_json_report() {
    let o = eotype(&["eotype", "--p", "5", "--f", common::EXAMPLE, "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    check_report_schema(&v).unwrap();
    assert_eq!(v["weyl_one_line"], serde_json::json!([1, 4, 2, 5, 3, 6]));
    assert_eq!(v["weyl_word"], "s3*s2");
    assert_eq!(v["a_number"], 2);
    assert_eq!(v["p_rank"], 0);
    assert_eq!(
        v["hasse_witt"],
        serde_json::json!([[0, 4, 1], [0, 2, 3], [0, 2, 3]])
    );
    let rep: EoReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&rep).unwrap(), v);
}

#[test]
fn text_report_mirrors_the_example() {
    let o = eotype(&["eotype", "--p", "5", "--f", common::EXAMPLE]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("[0 4 1]"));
    assert!(s.contains("[1,4,2,5,3,6] = s3*s2"));
    assert!(s.contains("(0,0,1,1,2,2,3)"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&eotype(&["eotype", "--p", "4", "--f", "x^4+y^4+z^4"])),
        3
    );
    assert_eq!(
        code(&eotype(&["eotype", "--p", "2", "--f", "x^4+y^4+z^4"])),
        3
    );
    assert_eq!(code(&eotype(&["eotype", "--p", "5", "--f", "X0+X1^2"])), 2);
    assert_eq!(
        code(&eotype(&["eotype", "--p", "5", "--f", "X0^3+X4^3"])),
        2
    );
    assert_eq!(
        code(&eotype(&["eotype", "--p", "5", "--f", "x^2*y+y^2*z"])),
        4
    );
    assert_eq!(
        code(&eotype(&["eotype", "--p", "5", "--f", "x^2+y^2+z^2"])),
        3
    );
    assert_eq!(
        code(&eotype(&[
            "eotype",
            "--p",
            "5",
            "--n",
            "3",
            "--f",
            "X0^2+X1^2+X2^2+X3^2"
        ])),
        3
    );
    assert_eq!(code(&eotype(&["selftest", "--bogus"])), 2);
}

#[test]
fn fermat_cubics() {
    let o = eotype(&["eotype", "--p", "7", "--f", "x^3+y^3+z^3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hasse_witt"], serde_json::json!([[6]]));
    assert_eq!(v["fast_tag"], "ordinary");
    let o = eotype(&["eotype", "--p", "5", "--f", "x^3+y^3+z^3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hasse_witt"], serde_json::json!([[0]]));
    assert_eq!(v["a_number"], 1);
}

#[test]
fn extension_field_and_complete_intersection() {
    let o = eotype(&[
        "eotype",
        "--p",
        "2",
        "--ext",
        "2",
        "--f",
        "(0,1)*x^3+y^3+z^3+x*y*z",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    check_report_schema(&v).unwrap();
    assert_eq!(v["ext_degree"], 2);
    let o = eotype(&[
        "eotype",
        "--p",
        "5",
        "--n",
        "3",
        "--f",
        "X0^2+X1^2+X2^2+X3^2",
        "--f2",
        "X0^3+X1^3+X2^3+X3^3",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    check_report_schema(&v).unwrap();
    assert_eq!(v["genus"], 4);
}

#[test]
fn hw_command_prints_the_module() {
    let o = eotype(&["hw", "--p", "5", "--f", common::EXAMPLE, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kernel_basis"], serde_json::json!([[1, 0, 0], [0, 1, 1]]));
    assert_eq!(v["psi"], serde_json::json!([[3, 3], [1, 3], [3, 1]]));
    assert_eq!(
        v["a_f"],
        serde_json::json!([
            [0, 4, 1],
            [0, 2, 3],
            [0, 2, 3],
            [3, 1, 0],
            [1, 3, 0],
            [3, 3, 0]
        ])
    );
}

#[test]
fn classify_dm_file() {
    let path = tmp("example.dm");
    std::fs::write(
        &path,
        "3 5 1\n0 -1 1\n0 -3 3\n0 -3 3\n3 1 0\n1 3 0\n3 3 0\n",
    )
    .unwrap();
    let o = eotype(&["classify-dm", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["weyl_one_line"], serde_json::json!([1, 4, 2, 5, 3, 6]));
    // Im F = span{e_1, ě_1} is not isotropic, so Ker V ≠ Im F
    std::fs::write(&path, "2 5 1\n1 0\n0 0\n0 0\n0 1\n").unwrap();
    let o = eotype(&["classify-dm", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    std::fs::write(&path, "2 5 1\n1 0\n").unwrap();
    assert_eq!(code(&eotype(&["classify-dm", path.to_str().unwrap()])), 2);
}

#[test]
fn scan_is_byte_identical_and_writes_files() {
    let args = [
        "scan", "--p", "5", "--d", "4", "--count", "40", "--seed", "7",
    ];
    let a = eotype(&args);
    let out = tmp("scan.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap(), "--sequential"]);
    assert_eq!(code(&eotype(&with_out)), 0);
    assert_eq!(a.stdout, std::fs::read(&out).unwrap());
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.ends_with("total,,,,,40\n"));
    assert_eq!(
        code(&eotype(&["scan", "--p", "5", "--d", "5", "--count", "3"])),
        3
    );
}

#[test]
fn selftest_passes() {
    let o = eotype(&["selftest"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    for name in [
        "hasse_witt",
        "psi",
        "a_f",
        "v",
        "weyl_one_line",
        "enumeration_g3",
    ] {
        assert!(s.contains(&format!("PASS {name}\n")), "{name}");
    }
}
