use std::collections::BTreeSet;

use elsperm_core::corpus::{factorize, split_sections, Selector};
use elsperm_core::engine::{
    algorithm_one, cubic_permute, enumerate_skips, mod_inverse, rectangular_permute, rectangular_permute_staged,
    PermutationPass, SkipKey, SkipRule,
};
use elsperm_core::interlock::{directional_interlock, topological_interlock};
use elsperm_core::layout::{AxisOrder, Corner, Direction, GridShape, ReadDirections, Topology, Traversal};
use elsperm_core::scoring::{shannon_entropy, CoverStrategy, Lexicon, LexiconScorer, Scorer};
use elsperm_core::search::SearchSpace;
use elsperm_core::SymbolText;
use num_bigint::BigUint;
use proptest::prelude::*;

const AXIS_ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn euclid(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        euclid(b, a % b)
    }
}

fn shape() -> impl Strategy<Value = GridShape> {
    prop_oneof![
        (2usize..80).prop_map(|l| GridShape::linear(l).unwrap()),
        (1usize..7, 0usize..8).prop_map(|(r, extra)| GridShape::rect(r, r + extra).unwrap()),
        (1usize..4, 1usize..4, 1usize..5).prop_map(|(a, b, c)| GridShape::cuboid(a, b, c).unwrap()),
    ]
}

fn text_of(len: usize, alphabet: &[char], seed: &[u8]) -> SymbolText {
    (0..len)
        .map(|i| alphabet[seed[i % seed.len()] as usize * (i + 1) % alphabet.len()])
        .collect::<Vec<_>>()
        .into()
}

fn pick_skip(len: usize, raw: u64) -> usize {
    let skips = enumerate_skips(len, SkipRule::Full);
    if skips.is_empty() {
        1
    } else {
        skips[raw as usize % skips.len()]
    }
}

/// A random valid pass on a random shape, with a matching text.
fn case() -> impl Strategy<Value = (SymbolText, PermutationPass)> {
    (shape(), any::<[u64; 6]>(), proptest::collection::vec(any::<u8>(), 1..16)).prop_map(|(shape, raw, seed)| {
        let len = shape.cell_count();
        let rows = shape.rows();
        let topo_count: u64 = (1..=rows as u64).product();
        let topology = Topology::unrank(rows, raw[0] % topo_count).unwrap();
        let dirs = ReadDirections::from_index(rows, raw[1] % (1 << rows)).unwrap();
        let traversal = if shape.rank() == 3 {
            let bits = raw[2];
            Traversal::Cuboid {
                corner: Corner([bits & 1 == 1, bits & 2 == 2, bits & 4 == 4]),
                axis_order: AxisOrder::new(AXIS_ORDERS[(bits >> 3) as usize % 6]).unwrap(),
            }
        } else {
            Traversal::Planar(Direction::ALL[raw[2] as usize % 4])
        };
        let key = SkipKey::new(pick_skip(len, raw[3]), raw[4] as usize % len);
        let text = text_of(len, &['A', 'B', 'C', 'D', 'E', 'F', 'G'], &seed);
        (
            text,
            PermutationPass {
                shape,
                topology,
                dirs,
                traversal,
                key,
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn passes_are_bijections((text, pass) in case()) {
        let src = pass.source_indices().unwrap();
        let mut sorted = src.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..text.len()).collect::<Vec<_>>());
        let out = rectangular_permute(&text, &pass).unwrap();
        prop_assert_eq!(out.sorted_symbols(), text.sorted_symbols());
        prop_assert_eq!(shannon_entropy(out.as_slice()), shannon_entropy(text.as_slice()));
        if let Traversal::Cuboid { corner, axis_order } = pass.traversal {
            if pass.topology.is_identity() && pass.dirs.index() == 0 {
                prop_assert_eq!(&cubic_permute(&text, &pass.shape, corner, axis_order, pass.key).unwrap(), &out);
            }
        } else {
            prop_assert_eq!(&rectangular_permute_staged(&text, &pass).unwrap(), &out);
        }
    }

    #[test]
    fn algorithm_one_is_a_bijection(len in 2usize..400, raw in any::<(u64, u64)>(), seed in proptest::collection::vec(any::<u8>(), 1..32)) {
        let text = text_of(len, &['x', 'y', 'z', 'w'], &seed);
        let key = SkipKey::new(pick_skip(len, raw.0), raw.1 as usize % len);
        let out = algorithm_one(&text, key).unwrap();
        prop_assert_eq!(out.sorted_symbols(), text.sorted_symbols());
        for i in 0..len {
            prop_assert_eq!(out[i], text[(key.offset + key.skip * i) % len]);
        }
        prop_assert_eq!(out, PermutationPass::linear(len, key).unwrap().apply(&text).unwrap());
    }

    #[test]
    fn offset_is_a_rotation(len in 3usize..500, raw in any::<(u64, u64)>()) {
        let text: SymbolText = (0..len).map(|i| char::from_u32(0x4e00 + i as u32).unwrap()).collect::<Vec<_>>().into();
        let d = pick_skip(len, raw.0);
        let offset = raw.1 as usize % len;
        let k = offset * mod_inverse(d, len).unwrap() % len;
        let mut expected = algorithm_one(&text, SkipKey::new(d, 0)).unwrap().as_slice().to_vec();
        expected.rotate_left(k);
        let got = algorithm_one(&text, SkipKey::new(d, offset)).unwrap();
        prop_assert_eq!(got.as_slice(), &expected[..]);
    }

    #[test]
    fn interlock_components_preserve_the_multiset(
        (text, pass) in case().prop_filter("planar layouts", |(_, p)| p.shape.rank() < 3),
        dir_pick in 0usize..2,
    ) {
        let (ic, report) = topological_interlock(&text, &pass.shape, &pass.topology, &pass.dirs, pass.key).unwrap();
        prop_assert_eq!(ic.horizontal.to_text().sorted_symbols(), text.sorted_symbols());
        prop_assert_eq!(ic.vertical.to_text().sorted_symbols(), text.sorted_symbols());
        prop_assert!(report.exact_row_matches <= report.rows);
        prop_assert!((0.0..=1.0).contains(&report.best_row_similarity));
        if dir_pick == 1 {
            let (dc, report) = directional_interlock(&text, &pass.shape, &pass.topology, &pass.dirs, pass.key).unwrap();
            for d in Direction::ALL {
                prop_assert_eq!(dc.get(d).to_text().sorted_symbols(), text.sorted_symbols());
            }
            prop_assert!(report.exact_row_matches <= report.rows);
        }
    }

    #[test]
    fn square_interlock_is_transpose_symmetric(n in 1usize..9, seed in proptest::collection::vec(any::<u8>(), 1..20), raw in any::<(u64, u64)>()) {
        let len = n * n;
        let text = text_of(len, &['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i'], &seed);
        let transposed: SymbolText = (0..len).map(|i| text[(i % n) * n + i / n]).collect::<Vec<_>>().into();
        let shape = GridShape::rect(n, n).unwrap();
        let key = SkipKey::new(pick_skip(len, raw.0), raw.1 as usize % len);
        let t = Topology::identity(n);
        let f = ReadDirections::forward(n);
        let (a, ra) = topological_interlock(&text, &shape, &t, &f, key).unwrap();
        let (b, rb) = topological_interlock(&transposed, &shape, &t, &f, key).unwrap();
        prop_assert_eq!(&a.vertical, &b.horizontal);
        prop_assert_eq!(&a.horizontal, &b.vertical);
        prop_assert_eq!(ra.exact_row_matches, rb.exact_row_matches);
    }

    #[test]
    fn entropy_ignores_order(seed in proptest::collection::vec(any::<u8>(), 1..64), len in 1usize..300) {
        let text = text_of(len, &['p', 'q', 'r', 's', 't'], &seed);
        let mut reversed = text.as_slice().to_vec();
        reversed.reverse();
        prop_assert_eq!(shannon_entropy(&reversed), shannon_entropy(text.as_slice()));
    }

    #[test]
    fn sections_recombine(seed in proptest::collection::vec(any::<u8>(), 1..40), len in 4usize..200, a in any::<usize>(), b in any::<usize>()) {
        let text = text_of(len, &['a', 'b', '|', 'c'], &seed);
        let pos1 = 1 + a % (len - 3);
        let pos2 = pos1 + 1 + b % (len - 2 - pos1);
        let sc = split_sections(&text, pos1, pos2).unwrap();
        prop_assert_eq!(&sc.recombine(Selector::ALL).unwrap(), &text);
        prop_assert_eq!(sc.recombine(Selector::TEXT_ONLY).unwrap().len(), len - 2);
        prop_assert_eq!(sc.t1.len() + sc.t2.len() + sc.t3.len() + 2, len);
    }

    #[test]
    fn optimal_cover_is_monotone(words in proptest::collection::vec("[ABC]{1,4}", 1..6), extra in "[ABC]{1,5}", text in "[ABCD]{1,40}") {
        let text: Vec<char> = text.chars().collect();
        let base = LexiconScorer::new(Lexicon::new(words.iter().map(String::as_str)).unwrap(), CoverStrategy::Optimal);
        let grown = LexiconScorer::new(
            Lexicon::new(words.iter().map(String::as_str).chain([extra.as_str()])).unwrap(),
            CoverStrategy::Optimal,
        );
        prop_assert!(grown.score(&text).unwrap() >= base.score(&text).unwrap());
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..1_000_000_000_000) {
        let report = factorize(n).unwrap();
        prop_assert_eq!(report.prime_factors.iter().product::<u64>(), n);
        for &p in &report.prime_factors {
            prop_assert!(p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0));
        }
        prop_assert!(report.prime_factors.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(report.is_prime, report.prime_factors.len() == 1);
    }

    #[test]
    fn topology_and_direction_indices_round_trip(rows in 1usize..9, raw in any::<(u64, u64)>()) {
        let count: u64 = (1..=rows as u64).product();
        let t = Topology::unrank(rows, raw.0 % count).unwrap();
        prop_assert_eq!(t.rank(), raw.0 % count);
        prop_assert_eq!(t.to_string().parse::<Topology>().unwrap(), t.clone());
        let d = ReadDirections::from_index(rows, raw.1 % (1 << rows)).unwrap();
        prop_assert_eq!(d.index(), raw.1 % (1 << rows));
        prop_assert_eq!(d.to_string().parse::<ReadDirections>().unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12_000))]

    #[test]
    fn rank_round_trips(bytes in proptest::collection::vec(any::<u8>(), 1..40), level in 1u32..4) {
        let space = SearchSpace::new(GridShape::rect(5, 17).unwrap(), Direction::East, SkipRule::HalfRange, level).unwrap();
        let rank = BigUint::from_bytes_le(&bytes) % space.total();
        let tuple = space.rank_to_tuple(&rank).unwrap();
        prop_assert_eq!(space.tuple_to_rank(&tuple).unwrap(), rank.clone());
        let mut levels = tuple.levels.clone();
        let next = &rank + 1u32;
        if next < space.total() {
            prop_assert!(space.increment(&mut levels));
            prop_assert_eq!(space.rank_to_tuple(&next).unwrap().levels, levels);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn skip_count_matches_gcd_scan(len in 2usize..=100_000) {
        let full: Vec<usize> = (2..len).filter(|&d| euclid(d, len) == 1).collect();
        prop_assert_eq!(enumerate_skips(len, SkipRule::Full), full);
        let half: Vec<usize> = (1..=len / 2).filter(|&d| euclid(d, len) == 1).collect();
        prop_assert_eq!(enumerate_skips(len, SkipRule::HalfRange), half);
    }
}

#[test]
fn inverse_and_composition_laws() {
    for len in [5usize, 23, 85] {
        let text: SymbolText = (0..len).map(|i| char::from_u32(0x3b1 + i as u32).unwrap()).collect::<Vec<_>>().into();
        let skips = enumerate_skips(len, SkipRule::Full);
        for &d in &skips {
            let inv = mod_inverse(d, len).unwrap();
            let there = algorithm_one(&text, SkipKey::new(d, 0)).unwrap();
            assert_eq!(algorithm_one(&there, SkipKey::new(inv, 0)).unwrap(), text, "L={len} D={d}");
            for &e in &skips {
                for (o1, o2) in [(0, 0), (1, len - 1), (len / 2, 3 % len)] {
                    let twice = algorithm_one(&algorithm_one(&text, SkipKey::new(d, o1)).unwrap(), SkipKey::new(e, o2)).unwrap();
                    let once = algorithm_one(&text, SkipKey::new(d * e % len, (o1 + d * o2) % len)).unwrap();
                    assert_eq!(twice, once, "L={len} D1={d} D2={e}");
                }
            }
        }
    }
}

#[test]
fn engine_outputs_are_distinct_per_skip() {
    let text: SymbolText = (0..85).map(|i| char::from_u32(0x100 + i).unwrap()).collect::<Vec<_>>().into();
    let outs: BTreeSet<String> = enumerate_skips(85, SkipRule::Full)
        .into_iter()
        .map(|d| algorithm_one(&text, SkipKey::new(d, 0)).unwrap().to_string())
        .collect();
    assert_eq!(outs.len(), 63);
}
