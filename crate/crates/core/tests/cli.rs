mod common;

use std::collections::BTreeSet;

use common::*;

fn ok(out: &std::process::Output) {
    assert_eq!(code(out), 0, "stdout: {}\nstderr: {}", stdout(out), String::from_utf8_lossy(&out.stderr));
}

fn read(fx: &Fixture, rel: &str) -> String {
    std::fs::read_to_string(fx.file(rel)).unwrap()
}

#[test]
fn mutate_is_deterministic() {
    let fx = Fixture::new("");
    ok(&fx.mutcov(&["mutate"]));
    let db = read(&fx, "mutcov/mutants.jsonl");
    let index = read(&fx, "mutcov/classes.csv");
    ok(&fx.mutcov(&["mutate"]));
    assert_eq!(db, read(&fx, "mutcov/mutants.jsonl"));
    assert_eq!(index, read(&fx, "mutcov/classes.csv"));
    assert_eq!(db.lines().count(), EXPECTED_TOTAL);
    assert_eq!(
        index,
        "class,file,mutants\ncom.example.Calc,src/com/example/Calc.java,5\n\
         com.example.Empty,src/com/example/Empty.java,0\ncom.example.Logic,src/com/example/Logic.java,12\n"
    );

    // a second checkout of the same project yields the same database
    let other = Fixture::new("");
    ok(&other.mutcov(&["mutate"]));
    assert_eq!(db, read(&other, "mutcov/mutants.jsonl"));
}

#[test]
fn input_errors_exit_2() {
    let fx = Fixture::new(r#""exclude_globs":["**"]"#);
    let out = fx.mutcov(&["mutate"]);
    assert_eq!(code(&out), 2);

    let fx = Fixture::new(r#""operators":["NOPE"]"#);
    assert_eq!(code(&fx.mutcov(&["mutate"])), 2);

    let fx = Fixture::new("");
    assert_eq!(code(&fx.mutcov(&["run"])), 2, "no database yet");
    assert_eq!(code(&fx.mutcov(&["sample", "--rate", "0.5"])), 2);
    ok(&fx.mutcov(&["mutate"]));
    assert_eq!(code(&fx.mutcov(&["sample", "--rate", "1.5"])), 2);
    assert_eq!(code(&fx.mutcov(&["analyze", "--branch-report", "branches.csv"])), 2, "no journal yet");
    std::fs::write(fx.file("ids.txt"), "0000000000000000\n").unwrap();
    assert_eq!(code(&fx.mutcov(&["run", "--subset", "ids.txt"])), 2);
}

#[test]
fn red_baseline_exits_3() {
    let fx = Fixture::with_scripts("exit 0\n", "exit 1\n", "");
    ok(&fx.mutcov(&["mutate"]));
    assert_eq!(code(&fx.mutcov(&["run"])), 3);
    assert!(!fx.file("mutcov/journal.jsonl").exists());
}

#[test]
fn campaign_analysis_and_report() {
    let fx = Fixture::new("");
    ok(&fx.mutcov(&["mutate"]));
    let out = fx.mutcov(&["run", "--limit", "4"]);
    ok(&out);
    assert!(stdout(&out).contains("4 executed, 0 skipped"), "{}", stdout(&out));
    let out = fx.mutcov(&["run", "--workers", "2"]);
    ok(&out);
    assert!(stdout(&out).contains("13 executed, 4 skipped"), "{}", stdout(&out));
    let out = fx.mutcov(&["run"]);
    assert!(stdout(&out).contains("0 executed, 17 skipped"), "{}", stdout(&out));
    assert!(fx.sources_pristine());

    let summary: serde_json::Value = serde_json::from_str(&read(&fx, "mutcov/reports/campaign_summary.json")).unwrap();
    assert_eq!(summary["total"], 17);
    assert_eq!(summary["killed"], EXPECTED_KILLED);
    assert_eq!(summary["timeout"], EXPECTED_TIMEOUT);

    ok(&fx.mutcov(&["analyze", "--branch-report", "branches.csv", "--threshold", "7"]));
    let csv = read(&fx, "mutcov/reports/analysis.csv");
    assert_eq!(
        csv,
        "class,branch_pct,mutation_pct,mutants_valid,mutants_killed,category\n\
         com.example.Calc,0.0,100.0,4,4,NoB\n\
         com.example.Empty,,0.0,0,0,SimCov\n\
         com.example.Logic,75.0,16.7,12,2,HiB-LoM\n"
    );
    assert_eq!(
        read(&fx, "mutcov/reports/diagnostics.txt"),
        "unmatched report row: com.example.Stray\nno report row: com.example.Empty\n"
    );
    let summary: serde_json::Value = serde_json::from_str(&read(&fx, "mutcov/reports/summary.json")).unwrap();
    assert_eq!(summary["threshold_t"], 7);
    assert_eq!(summary["overall"]["mutation_pct"], 37.5);
    assert!(summary["pearson"].is_null());

    // rerunning the analysis is byte-identical
    ok(&fx.mutcov(&["analyze", "--branch-report", "branches.csv", "--threshold", "7"]));
    assert_eq!(csv, read(&fx, "mutcov/reports/analysis.csv"));

    ok(&fx.mutcov(&["report"]));
    let sorted = read(&fx, "mutcov/reports/sorted.csv");
    let ms: Vec<f64> = sorted.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(ms.windows(2).all(|w| w[0] <= w[1]));
    let sweep = read(&fx, "mutcov/reports/threshold_sweep.csv");
    let rows: Vec<&str> = sweep.lines().skip(1).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.split(',').count() == 6));
    let at_7: Vec<u64> = rows[6].split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    let c = &summary["counts"];
    assert_eq!(
        at_7,
        ["sim_cov", "lob_him", "hib_lom", "nob", "nom"].map(|k| c[k].as_u64().unwrap())
    );
}

#[test]
fn report_and_coverage_gates() {
    let fx = Fixture::new("");
    ok(&fx.mutcov(&["mutate"]));
    ok(&fx.mutcov(&["run"]));
    std::fs::write(fx.file("bad.csv"), "class,branches_covered,branches_total\nA,3,2\n").unwrap();
    assert_eq!(code(&fx.mutcov(&["analyze", "--branch-report", "bad.csv"])), 4);
    std::fs::write(fx.file("bad.xml"), "<report><class name=\"A\"></report>").unwrap();
    assert_eq!(code(&fx.mutcov(&["analyze", "--branch-report", "bad.xml"])), 4);

    assert_eq!(
        code(&fx.mutcov(&["analyze", "--branch-report", "branches.csv", "--min-coverage", "40"])),
        5
    );
    ok(&fx.mutcov(&["analyze", "--branch-report", "branches.csv", "--min-coverage", "37"]));
}

#[test]
fn sampling_subsets() {
    let fx = Fixture::new("");
    ok(&fx.mutcov(&["mutate"]));
    let db_ids: Vec<String> = read(&fx, "mutcov/mutants.jsonl")
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string())
        .collect();

    ok(&fx.mutcov(&["sample", "--rate", "1.0"]));
    let all: Vec<String> = read(&fx, "mutcov/sample.txt").lines().map(String::from).collect();
    assert_eq!(all, db_ids);

    ok(&fx.mutcov(&["sample", "--rate", "0.3", "--strategy", "weighted", "--min-per-class", "1"]));
    let ids = read(&fx, "mutcov/sample.txt");
    let plan = read(&fx, "mutcov/sample_plan.json");
    ok(&fx.mutcov(&["sample", "--rate", "0.3", "--strategy", "weighted", "--min-per-class", "1"]));
    assert_eq!(ids, read(&fx, "mutcov/sample.txt"));
    assert_eq!(plan, read(&fx, "mutcov/sample_plan.json"));
    let plan: serde_json::Value = serde_json::from_str(&plan).unwrap();
    assert_eq!(plan["strategy"], "weighted");
    assert_eq!(plan["quotas"].as_object().unwrap().len(), 2);

    let k = ids.lines().count();
    let out = fx.mutcov(&["run", "--subset", "mutcov/sample.txt"]);
    ok(&out);
    assert!(stdout(&out).contains(&format!("{k} executed, 0 skipped")));
    let journal = read(&fx, "mutcov/journal.jsonl");
    assert_eq!(journal.lines().count(), k);
    let journaled: BTreeSet<String> = journal
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["mutant_id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(journaled, ids.lines().map(String::from).collect());
}

#[test]
fn budget_sample_size() {
    let fx = Fixture::new(r#""time_model":{"offset":169.5,"slope":0.9506}"#);
    let out = fx.mutcov(&["budget", "--budget-hours", "62", "--iter-seconds", "46"]);
    ok(&out);
    assert_eq!(stdout(&out).trim(), "4781");

    let out = fx.mutcov(&[
        "budget", "--budget-hours", "62", "--iter-seconds", "46", "--model-offset", "0", "--model-slope", "1",
    ]);
    assert_eq!(stdout(&out).trim(), "4852");

    std::fs::write(fx.file("points.csv"), "iterations,mutants\n100,269.56\n1000,1120.1\n5000,4922.5\n").unwrap();
    let out = fx.mutcov(&["budget", "--fit", "points.csv"]);
    ok(&out);
    let model: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((model["slope"].as_f64().unwrap() - 0.9506).abs() < 1e-3);
}

#[test]
fn sample_from_budget_on_large_database() {
    let fx = Fixture::new(r#""time_model":{"offset":169.5,"slope":0.9506}"#);
    ok(&fx.mutcov(&["mutate"]));
    // replace the database with 12,825 synthetic mutants over 212 classes
    let template: serde_json::Value =
        serde_json::from_str(read(&fx, "mutcov/mutants.jsonl").lines().next().unwrap()).unwrap();
    let mut db = String::new();
    for i in 0..12_825u32 {
        let mut m = template.clone();
        m["id"] = format!("{i:016x}").into();
        m["class_name"] = format!("c.C{:03}", i % 212).into();
        db.push_str(&m.to_string());
        db.push('\n');
    }
    std::fs::write(fx.file("mutcov/mutants.jsonl"), db).unwrap();

    ok(&fx.mutcov(&["sample", "--rate", "0.347"]));
    let n = read(&fx, "mutcov/sample.txt").lines().count();
    assert!((4448 - 45..=4448 + 45).contains(&n), "{n}");

    let out = fx.mutcov(&["sample", "--budget-hours", "62", "--iter-seconds", "46"]);
    ok(&out);
    assert!(stdout(&out).contains("budget allows 4781 mutants"));
    assert_eq!(read(&fx, "mutcov/sample.txt").lines().count(), 4781);
}
