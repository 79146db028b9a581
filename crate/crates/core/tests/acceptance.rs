//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use elsperm_core::corpus::factorize;
use elsperm_core::engine::{
    algorithm_one, count_space, cubic_permute, els_visit_order, enumerate_skips, mod_inverse, rectangular_permute,
    scientific, PermutationPass, SkipKey, SkipRule, SpaceFactors,
};
use elsperm_core::interlock::topological_interlock;
use elsperm_core::layout::{
    cell_label, AxisOrder, Corner, Direction, GridShape, Linearization, ReadDirections, Topology, Traversal,
};
use elsperm_core::scoring::{CoverStrategy, Lexicon, LexiconScorer, NGramModel, NGramScorer, Scorer};
use elsperm_core::search::{RunControl, Search, SearchSpace, SearchSpec};
use elsperm_core::SymbolText;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn within(limit: Duration, start: Instant) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn word_pairs() -> Check {
    let start = Instant::now();
    let pairs = [
        ("FEAST", "FATES"),
        ("FOUNT", "FUTON"),
        ("GREEN", "GENRE"),
        ("POINT", "PITON"),
        ("TREAT", "TETRA"),
        ("MOANS", "MASON"),
        ("PEARL", "PALER"),
        ("PERRY", "PRYER"),
        ("PRISE", "PIERS"),
        ("TAINT", "TITAN"),
        ("WEIRD", "WIDER"),
    ];
    for (from, to) in pairs {
        let got = algorithm_one(&SymbolText::from(from), SkipKey::new(2, 0)).map_err(|e| e.to_string())?;
        ensure(got.to_string() == to, || format!("{from} -> {got}, expected {to}"))?;
        // oracle: direct index arithmetic
        let direct: String = (0..5).map(|i| from.as_bytes()[2 * i % 5] as char).collect();
        ensure(direct == to, || format!("oracle disagrees on {from}"))?;
    }
    within(Duration::from_secs(1), start)
}

fn genesis_interlock() -> Check {
    let start = Instant::now();
    let (ic, report) = topological_interlock(
        &SymbolText::from(TOY),
        &GridShape::rect(3, 7).unwrap(),
        &Topology::identity(3),
        &ReadDirections::forward(3),
        SkipKey::new(5, 0),
    )
    .map_err(|e| e.to_string())?;
    let rows = |g: &elsperm_core::layout::Grid| (0..g.rows()).map(|r| g.row_string(r)).collect::<Vec<_>>();
    ensure(rows(&ic.vertical) == ["GENESIS", "DEOXORR", "SIUMSOM"], || {
        format!("vertical {:?}", rows(&ic.vertical))
    })?;
    ensure(rows(&ic.horizontal) == ["GENESIS", "RUSIEDS", "MMOOROX"], || {
        format!("horizontal {:?}", rows(&ic.horizontal))
    })?;
    ensure(report.exact_row_matches == 1, || format!("exact_row_matches = {}", report.exact_row_matches))?;
    within(Duration::from_secs(1), start)
}

fn visit_orders() -> Check {
    let printed = [
        (
            Direction::East,
            "A1 F1 D2 B3 G3 E1 C2 A3 F3 D1 B2 G2 E3 C1 A2 F2 D3 B1 G1 E2 C3",
        ),
        (
            Direction::South,
            "A1 B3 D2 F1 G3 B2 D1 E3 G2 B1 C3 E2 G1 A3 C2 E1 F3 A2 C1 D3 F2",
        ),
    ];
    let shape = GridShape::rect(3, 7).unwrap();
    for (direction, listing) in printed {
        let lin = Linearization::planar(&shape, direction).map_err(|e| e.to_string())?;
        let order = els_visit_order(&lin, SkipKey::new(5, 0)).map_err(|e| e.to_string())?;
        let labels: Vec<String> = order.iter().map(|&c| cell_label(7, c)).collect();
        let expected: Vec<&str> = listing.split(' ').collect();
        ensure(expected.len() == 21 && labels == expected, || {
            format!("{direction}: got {}", labels.join(" "))
        })?;
        // oracle: walk position 5i mod 21 through row-major or column-major cells
        for (i, label) in expected.iter().enumerate() {
            let p = 5 * i % 21;
            let (row, col) = match direction {
                Direction::East => (p / 7, p % 7),
                _ => (p % 3, p / 3),
            };
            let own = format!("{}{}", (b'A' + col as u8) as char, row + 1);
            ensure(own == *label, || format!("{direction} position {i}: oracle {own}, listing {label}"))?;
        }
    }
    Ok(())
}

fn count_table() -> Check {
    let cases = [
        (
            SpaceFactors::new(120, 32, 243_839, 304_805),
            ["2.85E+14", "8.15E+28", "2.32E+43", "6.63E+57", "1.89E+72"],
        ),
        (
            SpaceFactors::new(120, 32, 32, 85),
            ["1.04E+07", "1.09E+14", "1.14E+21", "1.19E+28", "1.24E+35"],
        ),
    ];
    for (factors, published) in cases {
        let level1 = count_space(factors, 1).map_err(|e| e.to_string())?;
        let product = BigUint::from(factors.topologies)
            * factors.read_directions
            * factors.skips
            * factors.offsets;
        ensure(level1 == product, || format!("level 1 {level1} vs {product}"))?;
        for (k, want) in published.iter().enumerate() {
            let level = k as u32 + 1;
            let n = count_space(factors, level).map_err(|e| e.to_string())?;
            ensure(n == level1.pow(level), || format!("level {level} is not (level 1)^{level}"))?;
            let got = scientific(&n, 3);
            ensure(got == *want, || format!("level {level}: {got}, published {want}"))?;
        }
    }
    ensure(count_space(SpaceFactors::new(120, 32, 32, 85), 1).unwrap() == BigUint::from(10_444_800u32), || {
        "T2 level 1 exact value".into()
    })
}

fn trial_division(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn factorizations() -> Check {
    let start = Instant::now();
    let table: [(u64, &[u64]); 5] = [
        (304_807, &[304_807]),
        (304_805, &[5, 60_961]),
        (206_588, &[2, 2, 51_647]),
        (98_132, &[2, 2, 24_533]),
        (85, &[5, 17]),
    ];
    for (n, expected) in table {
        let report = factorize(n).map_err(|e| e.to_string())?;
        ensure(report.prime_factors == expected, || format!("{n}: {:?}", report.prime_factors))?;
        ensure(trial_division(n) == expected, || format!("oracle disagrees on {n}"))?;
        ensure(report.is_prime == (expected.len() == 1), || format!("{n}: primality flag"))?;
    }
    within(Duration::from_secs(5), start)
}

fn skip_counts() -> Check {
    let full = enumerate_skips(304_805, SkipRule::Full);
    ensure(full.len() == 243_839, || format!("full rule on 304805 gives {}", full.len()))?;
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let brute = (2..304_805).filter(|&d| gcd(d, 304_805) == 1).count();
    ensure(brute == full.len(), || format!("gcd scan gives {brute}"))?;
    let half = enumerate_skips(85, SkipRule::HalfRange).len();
    ensure(half == 32, || format!("half rule on 85 gives {half}"))?;
    let full85 = enumerate_skips(85, SkipRule::Full).len();
    ensure(full85 == 63, || format!("full rule on 85 gives {full85}"))?;
    ensure((2..85).filter(|&d| gcd(d, 85) == 1).count() == 63, || "gcd scan on 85".into())?;
    ensure((1..=42).filter(|&d| gcd(d, 85) == 1).count() == 32, || "half gcd scan on 85".into())
}

fn random_pass(rng: &mut ChaCha8Rng) -> (SymbolText, PermutationPass) {
    let shape = match rng.gen_range(0..3) {
        0 => GridShape::linear(rng.gen_range(2..120)).unwrap(),
        1 => {
            let r = rng.gen_range(1..7);
            GridShape::rect(r, r + rng.gen_range(0..10)).unwrap()
        }
        _ => GridShape::cuboid(rng.gen_range(1..4), rng.gen_range(1..4), rng.gen_range(1..5)).unwrap(),
    };
    let len = shape.cell_count();
    let rows = shape.rows();
    let skips = enumerate_skips(len, SkipRule::Full);
    let skip = if skips.is_empty() { 1 } else { skips[rng.gen_range(0..skips.len())] };
    let topo_count: u64 = (1..=rows as u64).product();
    let traversal = if shape.rank() == 3 {
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        Traversal::Cuboid {
            corner: Corner([rng.gen(), rng.gen(), rng.gen()]),
            axis_order: AxisOrder::new(orders[rng.gen_range(0..6)]).unwrap(),
        }
    } else {
        Traversal::Planar(Direction::ALL[rng.gen_range(0..4)])
    };
    let pass = PermutationPass {
        topology: Topology::unrank(rows, rng.gen_range(0..topo_count)).unwrap(),
        dirs: ReadDirections::from_index(rows, rng.gen_range(0..1u64 << rows)).unwrap(),
        traversal,
        key: SkipKey::new(skip, rng.gen_range(0..len)),
        shape,
    };
    let text: Vec<char> = (0..len).map(|_| rng.gen_range(b'A'..=b'F') as char).collect();
    (text.into(), pass)
}

fn property_suites() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // (a) bijectivity and multiset preservation
    for case in 0..1500 {
        let (text, pass) = random_pass(&mut rng);
        let src = pass.source_indices().map_err(|e| e.to_string())?;
        let mut seen = vec![false; text.len()];
        for &s in &src {
            ensure(!seen[s], || format!("case {case}: index {s} visited twice by {pass}"))?;
            seen[s] = true;
        }
        let out = rectangular_permute(&text, &pass).map_err(|e| e.to_string())?;
        ensure(out.sorted_symbols() == text.sorted_symbols(), || format!("case {case}: multiset changed"))?;
        if pass.shape.rank() == 1 && pass.topology.is_identity() {
            let a1 = algorithm_one(&text, pass.key).map_err(|e| e.to_string())?;
            ensure(a1.sorted_symbols() == text.sorted_symbols(), || format!("case {case}: algorithm one"))?;
        }
        if let Traversal::Cuboid { corner, axis_order } = pass.traversal {
            let c = cubic_permute(&text, &pass.shape, corner, axis_order, pass.key).map_err(|e| e.to_string())?;
            ensure(c.sorted_symbols() == text.sorted_symbols(), || format!("case {case}: cubic"))?;
        }
    }

    // (b) inverse-key and composition laws, every valid D
    for len in [5usize, 23, 85] {
        let text: SymbolText = (0..len).map(|i| char::from_u32(0x400 + i as u32).unwrap()).collect::<Vec<_>>().into();
        let skips = enumerate_skips(len, SkipRule::Full);
        for &d in &skips {
            let inv = mod_inverse(d, len).ok_or("no inverse")?;
            let back = algorithm_one(&algorithm_one(&text, SkipKey::new(d, 0)).unwrap(), SkipKey::new(inv, 0)).unwrap();
            ensure(back == text, || format!("L={len} D={d}: inverse key failed"))?;
            for &e in &skips {
                let twice = algorithm_one(&algorithm_one(&text, SkipKey::new(d, 0)).unwrap(), SkipKey::new(e, 0)).unwrap();
                let once = algorithm_one(&text, SkipKey::new(d * e % len, 0)).unwrap();
                ensure(twice == once, || format!("L={len}: D={d} then {e} is not D={}", d * e % len))?;
            }
        }
    }

    // (c) an offset rotates the zero-offset output
    for _ in 0..300 {
        let len = rng.gen_range(3..400);
        let text: SymbolText = (0..len).map(|i| char::from_u32(0x4e00 + i as u32).unwrap()).collect::<Vec<_>>().into();
        let skips = enumerate_skips(len, SkipRule::Full);
        if skips.is_empty() {
            continue;
        }
        let d = skips[rng.gen_range(0..skips.len())];
        let offset = rng.gen_range(0..len);
        let k = offset * mod_inverse(d, len).unwrap() % len;
        let mut rotated = algorithm_one(&text, SkipKey::new(d, 0)).unwrap().as_slice().to_vec();
        rotated.rotate_left(k);
        let got = algorithm_one(&text, SkipKey::new(d, offset)).unwrap();
        ensure(got.as_slice() == rotated, || format!("L={len} D={d} offset={offset}: not a rotation"))?;
    }

    // (d) rank and tuple round-trip
    let space = SearchSpace::new(GridShape::rect(5, 17).unwrap(), Direction::East, SkipRule::HalfRange, 3)
        .map_err(|e| e.to_string())?;
    for _ in 0..12_000 {
        let bytes: Vec<u8> = (0..rng.gen_range(1..16)).map(|_| rng.gen()).collect();
        let rank = BigUint::from_bytes_le(&bytes) % space.total();
        let tuple = space.rank_to_tuple(&rank).map_err(|e| e.to_string())?;
        ensure(space.tuple_to_rank(&tuple).map_err(|e| e.to_string())? == rank, || {
            format!("rank {rank} does not round-trip")
        })?;
    }

    // (e) toy search: count, partitions, kill and resume
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    check_no_gaps(dir.path())?;
    check_partition(dir.path(), 0.3)?;
    check_kill_resume(dir.path(), 0.3)?;

    within(Duration::from_secs(60), start)
}

fn throughput() -> Result<String, String> {
    let text: SymbolText = "INTHEBEGINNINGWASTHEWORDANDTHEWORDWASWITHGODANDTHEWORDWASGODTHESAMEWASINTHEBEGINNINGW"
        .chars()
        .collect::<Vec<_>>()
        .into();
    ensure(text.len() == 85, || format!("workload length {}", text.len()))?;
    let lexicon = Lexicon::new(["IN", "THE", "BEGINNING", "WAS", "WORD", "AND", "WITH", "GOD", "SAME"])
        .map_err(|e| e.to_string())?;
    let model = NGramModel::train(text.as_slice(), 3, NGramModel::DEFAULT_SMOOTHING).map_err(|e| e.to_string())?;
    let scorers: Vec<Box<dyn Scorer>> = vec![
        Box::new(LexiconScorer::new(lexicon, CoverStrategy::Greedy)),
        Box::new(NGramScorer::new(model)),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut spec = SearchSpec::new(text, GridShape::rect(5, 17).unwrap());
    spec.skip_rule = SkipRule::HalfRange;
    spec.threshold = 0.5;
    spec.end = Some(BigUint::from(100_000u32));
    spec.sink = Some(dir.path().join("bench.jsonl"));
    let search = Search::new(spec, scorers).map_err(|e| e.to_string())?;
    let summary = search.run(&RunControl::default()).map_err(|e| e.to_string())?;
    ensure(summary.complete && summary.processed == 100_000, || "benchmark did not finish".into())?;
    let rate = summary.ranks_per_sec();
    ensure(rate.is_finite() && rate > 0.0, || format!("rate {rate}"))?;
    Ok(format!(
        "{rate:.0} ranks/sec over {} ranks of the 5x17 level-1 space ({} total), {} emitted",
        summary.processed,
        search.space().total(),
        summary.emitted
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        ("word pairs under D=2", Box::new(|| word_pairs().map(|_| String::new()))),
        ("GENESIS interlock golden vectors", Box::new(|| genesis_interlock().map(|_| String::new()))),
        ("East and South visit orders", Box::new(|| visit_orders().map(|_| String::new()))),
        ("count table", Box::new(|| count_table().map(|_| String::new()))),
        ("section length factorizations", Box::new(|| factorizations().map(|_| String::new()))),
        ("skip counts", Box::new(|| skip_counts().map(|_| String::new()))),
        ("property suites", Box::new(|| property_suites().map(|_| String::new()))),
        ("search throughput", Box::new(throughput)),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(panic::AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let took = start.elapsed();
        match outcome {
            Ok(note) if note.is_empty() => println!("[{}] PASS {name} ({took:.2?})", n + 1),
            Ok(note) => println!("[{}] PASS {name}: {note} ({took:.2?})", n + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] FAIL {name}: {why} ({took:.2?})", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
