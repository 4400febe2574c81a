use parity_core::corpus::{generate, run, write_jsonl};
use parity_core::{CorpusSpec, Error, Place, Range, RunOptions, Sign};
use serde_json::Value;

fn small_three() -> CorpusSpec {
    CorpusSpec { a_range: Range::new(-2, 2).unwrap(), b_range: Range::new(-2, 2).unwrap(), ..CorpusSpec::three_default() }
}

fn small_two() -> CorpusSpec {
    CorpusSpec { a_range: Range::new(-3, 3).unwrap(), b_range: Range::new(-3, 3).unwrap(), b_mult: 16, ..CorpusSpec::two_default() }
}

fn jsonl(spec: &CorpusSpec, opts: &RunOptions) -> Vec<Value> {
    let outcome = run(spec, opts).unwrap();
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &outcome, 0).unwrap();
    String::from_utf8(buf).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn thread_count_does_not_change_output() {
    for spec in [small_three(), small_two()] {
        let serial = jsonl(&spec, &RunOptions { jobs: 1, ..RunOptions::default() });
        let parallel = jsonl(&spec, &RunOptions { jobs: 3, ..RunOptions::default() });
        assert_eq!(serial, parallel);
    }
}

#[test]
fn jsonl_layout() {
    let lines = jsonl(&small_three(), &RunOptions { seed: 9, ..RunOptions::default() });
    assert_eq!(lines[0]["type"], "header");
    assert_eq!(lines[0]["seed"], 9);
    assert_eq!(lines.last().unwrap()["type"], "summary");
    let verdicts: Vec<&Value> = lines.iter().filter(|l| l["type"] == "verdict").collect();
    assert_eq!(verdicts.len(), lines.len() - 2);
    assert_eq!(lines.last().unwrap()["curves"], verdicts.len());
    for v in verdicts {
        assert_eq!(v["pass"], true, "{v}");
        assert_eq!(v["W"], v["S"]);
        assert!(v["places"].as_array().unwrap().iter().any(|p| p["place"] == "inf"));
    }
}

#[test]
fn descent_oracle_in_the_two_family() {
    let outcome = run(&small_two(), &RunOptions::default()).unwrap();
    assert!(outcome.all_passed(), "{:?}", outcome.summary);
    for v in &outcome.verdicts {
        assert_eq!(v.oracle, v.s, "{}", v.id);
        assert!(v.selmer_phi.is_some() && v.selmer_phihat.is_some());
    }
    let off = run(&small_two(), &RunOptions { descent: false, ..RunOptions::default() }).unwrap();
    assert!(off.verdicts.iter().all(|v| v.oracle.is_none()));
}

#[test]
fn place_filter_keeps_one_place() {
    let opts = RunOptions { place: Some(Place::Finite(3)), ..RunOptions::default() };
    let outcome = run(&small_three(), &opts).unwrap();
    for v in &outcome.verdicts {
        assert!(v.places.iter().all(|p| p.place == Place::Finite(3)));
        assert!(v.w.is_some());
    }
    let opts = RunOptions { place: Some(Place::Real), ..RunOptions::default() };
    let outcome = run(&small_three(), &opts).unwrap();
    assert!(outcome.verdicts.iter().all(|v| v.places.len() == 1 && v.places[0].w == Sign::Minus));
}

#[test]
fn fail_fast_on_a_passing_corpus_runs_everything() {
    let full = run(&small_three(), &RunOptions::default()).unwrap();
    let ff = run(&small_three(), &RunOptions { fail_fast: true, jobs: 2, ..RunOptions::default() }).unwrap();
    assert_eq!(full.verdicts, ff.verdicts);
    assert!(!ff.summary.stopped_early);
}

#[test]
fn limits_and_skip_accounting() {
    let spec = CorpusSpec { max_curves: Some(7), ..CorpusSpec::three_default() };
    let corpus = generate(&spec).unwrap();
    assert_eq!(corpus.curves.len(), 7);
    let skipped: usize = corpus.skipped.values().sum();
    assert_eq!(corpus.curves.len() + skipped, corpus.candidates);
    // twists times the box
    assert_eq!(corpus.candidates, 8 * 11 * 11);
    let ids: Vec<&str> = corpus.curves.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, generate(&spec).unwrap().curves.iter().map(|c| c.id.as_str()).collect::<Vec<_>>());
}

#[test]
fn empty_and_invalid_specs() {
    assert_eq!(run(&CorpusSpec::two_default(), &RunOptions::default()).err(), Some(Error::EmptyCorpus));
    let bad = CorpusSpec { twists: vec![4], ..CorpusSpec::three_default() };
    assert!(generate(&bad).is_err());
    let bad = CorpusSpec { b_mult: 0, ..CorpusSpec::two_default() };
    assert!(generate(&bad).is_err());
}
