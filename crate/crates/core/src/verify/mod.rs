//! Desk-scale verification suites for the library's combinatorial claims.
//!
//! Each suite takes a corpus of small Coxeter systems ([`Corpus::standard`]
//! by default), runs one family of checks over every case, and returns a
//! [`SuiteReport`] whose JSON rendering is byte-for-byte reproducible. The
//! suites are exhaustive within their balls rather than statistical: every
//! maximal matching of every corpus group is enumerated, every pair below
//! the relevant bound is tested.

pub mod corpus;
mod descent;
mod extension;
mod factorization;
mod invariance;
mod obstructions;
mod reducibility;
mod regularity;
mod whole_group;
pub mod report;
mod support;

pub use corpus::{Corpus, CorpusCase};
pub use report::{CaseReport, Failure, SuiteReport};

use crate::{Error, Result};

/// Every suite, in the order reports list them.
pub const SUITE_NAMES: [&str; 8] = [
    "descent",
    "extension",
    "regularity",
    "reducibility",
    "factorization",
    "obstructions",
    "whole_group",
    "invariance",
];

fn case_runner(suite: &str) -> Option<fn(&CorpusCase) -> CaseReport> {
    match suite {
        "descent" => Some(descent::run),
        "extension" => Some(extension::run),
        "regularity" => Some(regularity::run),
        "reducibility" => Some(reducibility::run),
        "factorization" => Some(factorization::run),
        "obstructions" => Some(obstructions::run),
        "whole_group" => Some(whole_group::run),
        "invariance" => Some(invariance::run),
        _ => None,
    }
}

/// Runs one suite over the corpus, cases in corpus order.
pub fn run_suite(name: &str, corpus: &Corpus) -> Result<SuiteReport> {
    let run = case_runner(name)
        .ok_or_else(|| Error::Input(format!("unknown suite {name:?}")))?;
    Ok(SuiteReport {
        suite: name.to_string(),
        cases: corpus.cases.iter().map(run).collect(),
    })
}

/// Runs several suites over the corpus on up to `jobs` threads. The unit of
/// work is one (suite, case) pair; the merged reports are identical to a
/// sequential run regardless of scheduling.
pub fn run_suites(names: &[&str], corpus: &Corpus, jobs: usize) -> Result<Vec<SuiteReport>> {
    let mut work = Vec::new();
    for (si, &name) in names.iter().enumerate() {
        let run = case_runner(name)
            .ok_or_else(|| Error::Input(format!("unknown suite {name:?}")))?;
        for (ci, case) in corpus.cases.iter().enumerate() {
            work.push((si, ci, run, case));
        }
    }

    let jobs = jobs.max(1).min(work.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<CaseReport>>> =
        work.iter().map(|_| std::sync::Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&(_, _, run, case)) = work.get(i) else { break };
                let report = run(case);
                *slots[i].lock().expect("no panics while holding the slot") = Some(report);
            });
        }
    });

    let mut reports: Vec<SuiteReport> = names
        .iter()
        .map(|&name| SuiteReport { suite: name.to_string(), cases: Vec::new() })
        .collect();
    for ((si, _, _, _), slot) in work.iter().zip(slots) {
        let report = slot
            .into_inner()
            .expect("worker panicked")
            .expect("every work item was claimed");
        reports[*si].cases.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod runner_tests {
    use super::*;

    fn tiny_corpus() -> Corpus {
        let standard = Corpus::standard();
        let keep = ["A1", "dihedral-3", "rank3-3.2.2"];
        Corpus {
            cases: standard
                .cases
                .into_iter()
                .filter(|c| keep.contains(&c.name.as_str()))
                .collect(),
        }
    }

    #[test]
    fn unknown_suites_are_rejected() {
        let corpus = tiny_corpus();
        assert!(run_suite("no_such_suite", &corpus).is_err());
        assert!(run_suites(&["descent", "no_such_suite"], &corpus, 2).is_err());
    }

    #[test]
    fn parallel_runs_merge_deterministically() {
        let corpus = tiny_corpus();
        let names = ["descent", "whole_group"];
        let sequential: Vec<SuiteReport> = names
            .iter()
            .map(|n| run_suite(n, &corpus).expect("known suite"))
            .collect();
        let parallel = run_suites(&names, &corpus, 4).expect("known suites");
        let render = |reports: &[SuiteReport]| {
            serde_json::to_string(&reports.iter().map(|r| r.to_json()).collect::<Vec<_>>())
                .expect("reports serialize")
        };
        assert_eq!(render(&sequential), render(&parallel));
        for report in &parallel {
            assert!(report.passed(), "{}: {:#?}", report.suite, report.cases);
        }
    }

    #[test]
    fn every_registered_suite_runs() {
        let corpus = tiny_corpus();
        for name in SUITE_NAMES {
            let report = run_suite(name, &corpus).expect(name);
            assert_eq!(report.suite, name);
            assert_eq!(report.cases.len(), corpus.cases.len());
            assert!(report.passed(), "{name}: {:#?}", report.cases);
        }
    }
}
