mod common;

use std::collections::BTreeSet;
use std::path::Path;

use common::*;
use mutcov::campaign::{read_journal, Campaign, CampaignConfig, CampaignError, RunOptions, Verdict};
use mutcov::mutgen::{generate_mutants, Mutant, OperatorSet};

fn mutants(root: &Path) -> Vec<Mutant> {
    SOURCES
        .iter()
        .flat_map(|(rel, _)| {
            generate_mutants(root, Path::new(rel), Path::new("src"), &OperatorSet::default())
                .unwrap()
                .mutants
        })
        .collect()
}

fn config(root: &Path, workers: usize) -> CampaignConfig {
    CampaignConfig {
        compile_cmd: Some("sh compile.sh".into()),
        workers,
        ..CampaignConfig::new(root, "sh test.sh")
    }
}

fn verdicts(results: &[mutcov::campaign::CampaignResult]) -> BTreeSet<(String, Verdict)> {
    results.iter().map(|r| (r.mutant_id.clone(), r.verdict)).collect()
}

#[test]
fn verdict_partition_and_hygiene() {
    let fx = Fixture::new("");
    let all = mutants(fx.path());
    assert_eq!(all.len(), EXPECTED_TOTAL);
    let campaign = Campaign::prepare(config(fx.path(), 1)).unwrap();
    let journal = fx.file("journal.jsonl");
    let outcome = campaign.run(&all, &journal, &RunOptions::default()).unwrap();
    let s = outcome.summary();
    assert_eq!(
        (s.total, s.killed, s.survived, s.invalid, s.timeout),
        (EXPECTED_TOTAL, EXPECTED_KILLED, EXPECTED_SURVIVED, EXPECTED_INVALID, EXPECTED_TIMEOUT)
    );
    assert_eq!(s.killed + s.survived + s.invalid + s.timeout, s.total);
    assert!(fx.sources_pristine());

    let by_id = |op: &str, rep: &str| {
        let m = all.iter().find(|m| m.original == op && m.replacement == rep).unwrap();
        outcome.results.iter().find(|r| r.mutant_id == m.id).unwrap().clone()
    };
    let invalid = by_id("++", "--");
    assert_eq!((invalid.verdict, invalid.compile_exit, invalid.test_exit), (Verdict::Invalid, Some(1), None));
    let timeout = by_id("<", ">");
    assert_eq!((timeout.verdict, timeout.test_exit), (Verdict::Timeout, None));
    assert_eq!(by_id("&&", "||").verdict, Verdict::Killed);
    assert_eq!(by_id("!", "").verdict, Verdict::Survived);
    assert_eq!(read_journal(&journal).unwrap().len(), EXPECTED_TOTAL);
}

#[test]
fn resume_skips_journaled_mutants() {
    let fx = Fixture::new("");
    let all = mutants(fx.path());
    let campaign = Campaign::prepare(config(fx.path(), 1)).unwrap();
    let journal = fx.file("journal.jsonl");

    let first = campaign.run(&all, &journal, &RunOptions { limit: Some(6) }).unwrap();
    assert_eq!((first.executed, first.skipped), (6, 0));
    let second = campaign.run(&all, &journal, &RunOptions::default()).unwrap();
    assert_eq!((second.executed, second.skipped), (EXPECTED_TOTAL - 6, 6));
    let third = campaign.run(&all, &journal, &RunOptions::default()).unwrap();
    assert_eq!((third.executed, third.skipped), (0, EXPECTED_TOTAL));
    assert_eq!(third.results, second.results);

    let ids: Vec<String> = read_journal(&journal).unwrap().into_iter().map(|r| r.mutant_id).collect();
    let unique: BTreeSet<_> = ids.iter().collect();
    assert_eq!(ids.len(), unique.len());
}

#[test]
fn worker_count_does_not_change_verdicts() {
    let serial = Fixture::new("");
    let parallel = Fixture::new("");
    let a = Campaign::prepare(config(serial.path(), 1))
        .unwrap()
        .run(&mutants(serial.path()), &serial.file("j.jsonl"), &RunOptions::default())
        .unwrap();
    let b = Campaign::prepare(config(parallel.path(), 4))
        .unwrap()
        .run(&mutants(parallel.path()), &parallel.file("j.jsonl"), &RunOptions::default())
        .unwrap();
    assert_eq!(verdicts(&a.results), verdicts(&b.results));
    let ids: Vec<_> = b.results.iter().map(|r| r.mutant_id.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(parallel.sources_pristine());
}

#[test]
fn red_baseline_is_refused() {
    let fx = Fixture::with_scripts("exit 0\n", "exit 1\n", "");
    let err = Campaign::prepare(config(fx.path(), 1)).unwrap_err();
    assert!(matches!(err, CampaignError::BaselineNotGreen { .. }), "{err}");
}

#[test]
fn left_over_mutation_is_rolled_back() {
    let fx = Fixture::new("");
    let all = mutants(fx.path());
    // simulate a crash after patching
    mutcov::mutgen::apply_mutant(fx.path(), &all[0]).unwrap();
    assert!(!fx.sources_pristine());
    let campaign = Campaign::with_baseline(config(fx.path(), 1), 0.01).unwrap();
    campaign.run(&all[..2], &fx.file("j.jsonl"), &RunOptions::default()).unwrap();
    assert!(fx.sources_pristine());
}

#[test]
fn mutant_id_is_exported() {
    let fx = Fixture::with_scripts("exit 0\n", "echo \"$MUTANT_ID\" >> seen.txt\n", "");
    let all = mutants(fx.path());
    let campaign = Campaign::with_baseline(config(fx.path(), 1), 0.01).unwrap();
    campaign.run(&all[..3], &fx.file("j.jsonl"), &RunOptions::default()).unwrap();
    let seen = std::fs::read_to_string(fx.file("seen.txt")).unwrap();
    let seen: Vec<&str> = seen.lines().collect();
    assert_eq!(seen, all[..3].iter().map(|m| m.id.as_str()).collect::<Vec<_>>());
}
