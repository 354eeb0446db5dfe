use std::path::Path;
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;
use dimwit::quantum::fourier_ensemble;
use dimwit::simulate::born_table;
use dimwit::{PairMeasurementSet, ProbabilityTable, WitnessKind};
use dimwit_cli::files::{to_json, EnsembleFile, TableFile};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimwit")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bounds_text() {
    let out = stdout(&["bounds", "--witness", "quadratic", "--N", "7", "--d", "5"]);
    assert!(out.contains("Q=19.600000  (exact 98/5)"), "{out}");
    assert!(out.contains("C=19"), "{out}");
    let out = stdout(&["bounds", "--witness", "linear", "--N", "5", "--d", "2"]);
    assert!(out.contains("requires enumeration"), "{out}");
    let out = stdout(&["bounds", "--witness", "linear", "--N", "5", "--d", "4"]);
    assert!(out.contains("C=9"), "{out}");
}

#[test]
fn bounds_json() {
    let v = json(&["bounds", "--witness", "w", "--N", "7", "--d", "4"]);
    assert_eq!(v["quantum_bound"].as_f64().unwrap(), 18.375);
    assert_eq!(v["classical_bound"].as_f64().unwrap(), 18.0);
    let v = json(&["bounds", "--witness", "guessing", "--N", "6", "--d", "4"]);
    assert_eq!(v["quantum_bound_exact"], "2/3");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["bounds", "--witness", "nope", "--N", "7", "--d", "2"]), 2);
    assert_eq!(code(&["bounds", "--witness", "quadratic", "--N", "7"]), 2);
    assert_eq!(code(&["bounds", "--witness", "quadratic", "--N", "7", "--d", "0"]), 2);
    assert_eq!(code(&["states", "--N", "3", "--d", "4"]), 2);
    assert_eq!(code(&["reproduce", "--table", "3"]), 2);
    assert_eq!(
        code(&["classical", "--witness", "quadratic", "--N", "20", "--d", "4"]),
        2
    );
}

#[test]
fn states_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("states.json");
    stdout(&["states", "--N", "7", "--d", "3", "--out", p(&path)]);
    let file: EnsembleFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.to_ensemble().unwrap(), fourier_ensemble(7, 3).unwrap());

    let printed: EnsembleFile = serde_json::from_str(&stdout(&["states", "--N", "7", "--d", "3"])).unwrap();
    assert_eq!(printed, file);

    let v = json(&[
        "evaluate",
        "--witness",
        "quadratic",
        "--ensemble",
        p(&path),
        "--helstrom",
    ]);
    assert_abs_diff_eq!(v["value"].as_f64().unwrap(), 49.0 / 3.0, epsilon = 1e-9);
    assert_eq!(v["min_quantum_d"], 3);
    assert_eq!(v["min_classical_d"], 4);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("states.json");
    assert_eq!(code(&["states", "--N", "4", "--d", "2", "--out", p(&path)]), 3);
    assert_eq!(code(&["evaluate", "--witness", "quadratic", "--table", p(&path)]), 3);
}

#[test]
fn evaluate_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let e = fourier_ensemble(7, 2).unwrap();
    let t = born_table(&e, &PairMeasurementSet::helstrom(&e).unwrap()).unwrap();
    std::fs::write(&path, to_json(&TableFile::from_table(WitnessKind::Quadratic, &t))).unwrap();

    let out = stdout(&["evaluate", "--witness", "quadratic", "--table", p(&path)]);
    assert!(out.contains("value: 12.250000"), "{out}");
    assert!(out.contains("min quantum d: 2"), "{out}");
    assert!(out.contains("min classical d: 3"), "{out}");

    // declared witness must agree with --witness
    assert_eq!(code(&["evaluate", "--witness", "linear", "--table", p(&path)]), 2);
}

#[test]
fn evaluate_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("bad.json");
    std::fs::write(
        &states,
        r#"{"dim": 2, "states": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [1.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = run(&[
        "evaluate",
        "--witness",
        "quadratic",
        "--ensemble",
        p(&states),
        "--helstrom",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("state 2"));

    let good = dir.path().join("good.json");
    stdout(&["states", "--N", "4", "--d", "2", "--out", p(&good)]);
    // no effects stored and no --helstrom
    assert_eq!(code(&["evaluate", "--witness", "quadratic", "--ensemble", p(&good)]), 2);
    assert_eq!(
        code(&[
            "evaluate",
            "--witness",
            "guessing",
            "--ensemble",
            p(&good),
            "--helstrom"
        ]),
        2
    );

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(code(&["evaluate", "--witness", "quadratic", "--table", p(&garbage)]), 2);

    let table = dir.path().join("table.json");
    std::fs::write(
        &table,
        r#"{"witness": "quadratic", "N": 2, "m": 1, "k": 2, "p": [[[0.7, 0.7]], [[0.5, 0.5]]]}"#,
    )
    .unwrap();
    assert_eq!(code(&["evaluate", "--witness", "quadratic", "--table", p(&table)]), 2);
}

#[test]
fn seesaw_dump_evaluates_to_reported_value() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump.json");
    let v = json(&[
        "seesaw",
        "--witness",
        "linear",
        "--N",
        "4",
        "--d",
        "2",
        "--restarts",
        "4",
        "--out",
        p(&dump),
    ]);
    let best = v["best_value"].as_f64().unwrap();
    assert_abs_diff_eq!(best, v["quantum_bound"].as_f64().unwrap(), epsilon = 1e-6);
    assert!(v["sic_probe"].is_object());
    assert_eq!(v["restart_values"].as_array().unwrap().len(), 4);

    let e = json(&["evaluate", "--witness", "linear", "--ensemble", p(&dump)]);
    assert_abs_diff_eq!(e["value"].as_f64().unwrap(), best, epsilon = 1e-9);
}

#[test]
fn seesaw_text_report() {
    let out = stdout(&[
        "seesaw",
        "--witness",
        "quadratic",
        "--N",
        "5",
        "--d",
        "3",
        "--restarts",
        "3",
    ]);
    assert!(out.contains("Q_d: 8.333333"), "{out}");
    assert!(out.contains("restart values: ["), "{out}");
    assert!(!out.contains("SIC"), "{out}");
}

#[test]
fn reproduce_table1_layout() {
    let out = stdout(&["reproduce", "--table", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    let cells = |row: &str| {
        row.split('|')
            .nth(1)
            .unwrap()
            .split_whitespace()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(cells(lines[2]), ["12", "16", "18", "19", "20", "21"]);
    assert_eq!(cells(lines[3]), ["12.25", "16.33", "18.38", "19.60", "20.42", "21"]);

    let v = json(&["reproduce", "--table", "1"]);
    assert_abs_diff_eq!(v["quantum"][1].as_f64().unwrap(), 49.0 / 3.0, epsilon = 1e-12);
}

#[test]
fn reproduce_table2_small() {
    let out = stdout(&["reproduce", "--table", "2", "--nmax", "4", "--restarts", "5"]);
    assert!(out.contains("3/3 listed entries attained"), "{out}");
    let v = json(&["reproduce", "--table", "2", "--nmax", "3", "--restarts", "2"]);
    assert_eq!(v["entries"][0]["attained"], true);
    assert_eq!(code(&["reproduce", "--table", "2", "--nmax", "11"]), 2);
}

#[test]
fn classical_reports_encoding() {
    let out = stdout(&["classical", "--witness", "quadratic", "--N", "7", "--d", "3"]);
    assert!(out.contains("enumerated maximum: 16"), "{out}");
    assert!(out.contains("verdict: match"), "{out}");
    assert!(out.contains("(1,1,1,2,2,3,3)"), "{out}");
    let v = json(&["classical", "--witness", "linear", "--N", "5", "--d", "2"]);
    assert_eq!(v["verdict"], "no closed form");
    assert!(v["closed_form"].is_null());
}

fn binary_table() -> impl Strategy<Value = (WitnessKind, ProbabilityTable)> {
    (2usize..=6, prop::bool::ANY).prop_flat_map(|(n, guessing)| {
        if guessing {
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), n)
                .prop_map(move |rows| {
                    let p: Vec<f64> = rows
                        .iter()
                        .flat_map(|r| {
                            let s: f64 = r.iter().sum::<f64>() + 1e-3;
                            r.iter().map(move |v| (v + 1e-3 / n as f64) / s).collect::<Vec<_>>()
                        })
                        .collect();
                    (WitnessKind::Guessing, ProbabilityTable::new(n, 1, n, p).unwrap())
                })
                .boxed()
        } else {
            let m = n * (n - 1) / 2;
            prop::collection::vec(prop::collection::vec(0.0f64..=1.0, m), n)
                .prop_map(move |rows| (WitnessKind::Quadratic, ProbabilityTable::from_binary(n, &rows).unwrap()))
                .boxed()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_file_round_trip((kind, t) in binary_table()) {
        let text = to_json(&TableFile::from_table(kind, &t));
        let back: TableFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.kind().unwrap(), kind);
        prop_assert_eq!(back.to_table().unwrap(), t);
    }

    #[test]
    fn ensemble_file_round_trip(n in 2usize..=8, d in 1usize..=8) {
        prop_assume!(d <= n);
        let e = fourier_ensemble(n, d).unwrap();
        let ms = PairMeasurementSet::helstrom(&e).unwrap();
        let file = EnsembleFile::from_ensemble(&e).with_effects(&ms);
        let back: EnsembleFile = serde_json::from_str(&to_json(&file)).unwrap();
        prop_assert_eq!(back.to_ensemble().unwrap(), e);
        prop_assert_eq!(back.to_measurements(n).unwrap().unwrap(), ms);
    }
}
