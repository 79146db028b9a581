#![allow(dead_code)]

use std::fs;
use std::path::Path;

use elsperm_core::engine::{enumerate_skips, gcd, SkipRule};
use elsperm_core::layout::{enumerate_topologies, Direction, GridShape, ReadDirections};
use elsperm_core::scoring::{CoverStrategy, Lexicon, LexiconScorer, Scorer};
use elsperm_core::search::{RunControl, Search, SearchSpec};
use elsperm_core::SymbolText;
use num_bigint::BigUint;

pub const TOY: &str = "GOSSIERMISNOMEREXODUS";

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn toy_scorers() -> Vec<Box<dyn Scorer>> {
    vec![Box::new(LexiconScorer::new(
        Lexicon::new(["GENESIS", "EXODUS", "MISNOMER", "ROSE", "SIRE"]).unwrap(),
        CoverStrategy::Greedy,
    ))]
}

pub fn toy_spec(threshold: f64) -> SearchSpec {
    let mut spec = SearchSpec::new(SymbolText::from(TOY), GridShape::rect(3, 7).unwrap());
    spec.threshold = threshold;
    spec.batch_size = 500;
    spec
}

pub fn toy_search(spec: SearchSpec) -> Search {
    Search::new(spec, toy_scorers()).unwrap()
}

/// Size of the 3x7 level-1 space by nested enumeration of every factor.
pub fn brute_force_toy_count() -> u64 {
    let len = 21usize;
    let mut n = 0u64;
    for _t in enumerate_topologies(3).unwrap() {
        for bits in 0..8u64 {
            let _dirs = ReadDirections::from_index(3, bits).unwrap();
            for d in 2..len {
                if gcd(d, len) != 1 {
                    continue;
                }
                for _offset in 0..len {
                    n += 1;
                }
            }
        }
    }
    n
}

fn run_to(spec: SearchSpec, workers: usize) -> Result<String, String> {
    let sink = spec.sink.clone().unwrap();
    let search = toy_search(spec);
    search
        .run(&RunControl {
            workers,
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
    fs::read_to_string(sink).map_err(|e| e.to_string())
}

/// Full toy space with the filter off: every rank once, ascending.
pub fn check_no_gaps(dir: &Path) -> Check {
    let brute = brute_force_toy_count();
    ensure(brute == 11_088, || format!("brute-force count {brute}"))?;
    let search = toy_search(toy_spec(f64::NEG_INFINITY));
    ensure(search.space().total() == BigUint::from(brute), || {
        format!("space total {} vs brute force {brute}", search.space().total())
    })?;
    ensure(enumerate_skips(21, SkipRule::Full).len() == 11, || "skip count".into())?;

    let mut spec = toy_spec(f64::NEG_INFINITY);
    spec.sink = Some(dir.join("all.jsonl"));
    let out = run_to(spec, 4)?;
    let ranks: Vec<String> = out
        .lines()
        .map(|l| {
            elsperm_core::search::CandidateRecord::from_json_line(l)
                .map(|r| r.rank.to_string())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    ensure(ranks.len() as u64 == brute, || format!("{} records for {brute} ranks", ranks.len()))?;
    ensure(ranks.iter().enumerate().all(|(i, r)| *r == i.to_string()), || {
        "ranks are not exactly 0..total in order".into()
    })
}

/// Disjoint ranges concatenate to the single-range output, for any worker count.
pub fn check_partition(dir: &Path, threshold: f64) -> Check {
    let total = 11_088u32;
    let mut whole = toy_spec(threshold);
    whole.sink = Some(dir.join("whole.jsonl"));
    let reference = run_to(whole.clone(), 1)?;

    let mut parallel = whole.clone();
    parallel.sink = Some(dir.join("parallel.jsonl"));
    parallel.batch_size = 777;
    ensure(run_to(parallel, 8)? == reference, || "worker count changed the output".into())?;

    for cuts in [vec![1u32], vec![5000], vec![3, 4096, 11_087], vec![2500, 5000, 7500]] {
        let mut bounds = vec![0u32];
        bounds.extend(&cuts);
        bounds.push(total);
        let mut joined = String::new();
        for (k, w) in bounds.windows(2).enumerate() {
            let mut part = whole.clone();
            part.begin = BigUint::from(w[0]);
            part.end = Some(BigUint::from(w[1]));
            part.sink = Some(dir.join(format!("part{k}.jsonl")));
            joined += &run_to(part, 3)?;
        }
        ensure(joined == reference, || format!("partition at {cuts:?} differs from the single run"))?;
    }
    Ok(())
}

/// Interrupt at about half, leave a torn line behind, resume: same bytes.
pub fn check_kill_resume(dir: &Path, threshold: f64) -> Check {
    let mut spec = toy_spec(threshold);
    spec.sink = Some(dir.join("ref.jsonl"));
    let reference = run_to(spec.clone(), 2)?;

    let sink = dir.join("resumed.jsonl");
    let cp = dir.join("resumed.ckpt");
    spec.sink = Some(sink.clone());
    spec.checkpoint = Some(cp.clone());
    let search = toy_search(spec.clone());
    let first = search
        .run(&RunControl {
            workers: 2,
            stop_after: Some(5544),
            progress: None,
        })
        .map_err(|e| e.to_string())?;
    ensure(!first.complete, || "interrupted run claims completion".into())?;
    ensure(first.processed == 5544, || format!("processed {}", first.processed))?;

    // a crash after writing part of the next batch
    let mut torn = fs::read_to_string(&sink).map_err(|e| e.to_string())?;
    torn += "{\"rank\":\"5544\",\"tup";
    fs::write(&sink, torn).map_err(|e| e.to_string())?;

    let search = toy_search(spec.clone());
    let second = search
        .resume(&RunControl {
            workers: 5,
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
    ensure(second.complete, || "resumed run incomplete".into())?;
    ensure(first.processed + second.processed == 11_088, || {
        format!("processed {} + {}", first.processed, second.processed)
    })?;
    ensure(second.total_processed == BigUint::from(11_088u32), || "combined total".into())?;
    let resumed = fs::read_to_string(&sink).map_err(|e| e.to_string())?;
    ensure(resumed == reference, || "resumed output is not byte-identical".into())?;

    let again = toy_search(spec.clone())
        .resume(&RunControl::default())
        .map_err(|e| e.to_string())?;
    ensure(again.processed == 0 && again.emitted == 0, || "resume after completion emitted".into())?;
    ensure(fs::read_to_string(&sink).map_err(|e| e.to_string())? == reference, || {
        "completed resume touched the sink".into()
    })?;

    let mut altered = spec;
    altered.direction = Direction::South;
    match toy_search(altered).resume(&RunControl::default()) {
        Err(elsperm_core::Error::StaleCheckpoint { .. }) => Ok(()),
        other => Err(format!("altered spec resumed: {other:?}")),
    }
}
