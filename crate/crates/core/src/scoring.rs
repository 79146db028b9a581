//! Lucidity and randomness scorers for derivative texts.
//!
//! Scorers are immutable after construction and score a slice of symbols.
//! A scorer's [`Scorer::fingerprint`] identifies its configuration and data,
//! and goes into search-spec digests.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::corpus::{Symbol, SymbolText};
use crate::error::{Error, Result};

pub trait Scorer: Send + Sync {
    /// Short identifier used as the score's key in result records.
    fn name(&self) -> &str;

    /// Identity of configuration plus data, stable across runs.
    fn fingerprint(&self) -> String;

    /// Human-readable range and orientation.
    fn range(&self) -> &'static str;

    fn score(&self, text: &[Symbol]) -> Result<f64>;
}

fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A set of words over an alphabet.
#[derive(Clone, Debug)]
pub struct Lexicon {
    words: HashSet<Vec<Symbol>>,
    alphabet: BTreeSet<Symbol>,
    trie: Vec<TrieNode>,
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    // sorted by symbol
    children: Vec<(Symbol, u32)>,
    terminal: bool,
}

fn build_trie(words: &HashSet<Vec<Symbol>>) -> Vec<TrieNode> {
    let mut trie = vec![TrieNode::default()];
    for word in words {
        let mut node = 0usize;
        for &c in word {
            node = match trie[node].children.binary_search_by_key(&c, |&(s, _)| s) {
                Ok(k) => trie[node].children[k].1 as usize,
                Err(k) => {
                    let next = trie.len();
                    trie.push(TrieNode::default());
                    trie[node].children.insert(k, (c, next as u32));
                    next
                }
            };
        }
        trie[node].terminal = true;
    }
    trie
}

impl Lexicon {
    pub fn new<I, W>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<str>,
    {
        let words: HashSet<Vec<Symbol>> = words
            .into_iter()
            .map(|w| w.as_ref().chars().collect::<Vec<_>>())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::Config("lexicon is empty".into()));
        }
        let alphabet = words.iter().flatten().copied().collect();
        let trie = build_trie(&words);
        Ok(Lexicon { words, alphabet, trie })
    }

    /// One word per line; blank lines ignored, surrounding whitespace trimmed.
    pub fn parse(contents: &str) -> Result<Self> {
        Lexicon::new(contents.lines().map(str::trim).filter(|l| !l.is_empty()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::parse(&contents)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.words.contains(word)
    }

    fn sorted_words(&self) -> Vec<String> {
        let mut v: Vec<String> = self.words.iter().map(|w| w.iter().collect()).collect();
        v.sort();
        v
    }

    /// Lengths of the words starting at `text[start..]`, shortest first.
    fn word_ends<'a>(&'a self, text: &'a [Symbol], start: usize) -> impl Iterator<Item = usize> + 'a {
        let mut node = 0usize;
        text[start..].iter().map_while(move |&c| {
            let children = &self.trie[node].children;
            let k = children.binary_search_by_key(&c, |&(s, _)| s).ok()?;
            node = children[k].1 as usize;
            Some(self.trie[node].terminal)
        })
        .enumerate()
        .filter_map(|(i, terminal)| terminal.then_some(i + 1))
    }

    /// Length of the longest word starting at `text[start..]`.
    fn longest_at(&self, text: &[Symbol], start: usize) -> Option<usize> {
        self.word_ends(text, start).last()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Leftmost longest match, skipping one symbol when nothing matches.
    #[default]
    Greedy,
    /// Maximum covered symbols over all segmentations.
    Optimal,
}

/// Fraction of a text covered by lexicon words, in `[0, 1]`.
#[derive(Clone, Debug)]
pub struct LexiconScorer {
    lexicon: Lexicon,
    strategy: CoverStrategy,
    fingerprint: String,
}

impl LexiconScorer {
    pub fn new(lexicon: Lexicon, strategy: CoverStrategy) -> Self {
        let digest = sha_hex(lexicon.sorted_words().join("\n").as_bytes());
        let fingerprint = format!("lexicon:{strategy:?}:{digest}");
        LexiconScorer {
            lexicon,
            strategy,
            fingerprint,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    fn greedy_cover(&self, text: &[Symbol]) -> usize {
        let mut covered = 0;
        let mut i = 0;
        while i < text.len() {
            match self.lexicon.longest_at(text, i) {
                Some(n) => {
                    covered += n;
                    i += n;
                }
                None => i += 1,
            }
        }
        covered
    }

    fn optimal_cover(&self, text: &[Symbol]) -> usize {
        // best[i] = most symbols coverable in text[i..]
        let n = text.len();
        let mut best = vec![0usize; n + 1];
        for i in (0..n).rev() {
            let mut b = best[i + 1];
            for len in self.lexicon.word_ends(text, i) {
                b = b.max(len + best[i + len]);
            }
            best[i] = b;
        }
        best[0]
    }
}

impl Scorer for LexiconScorer {
    fn name(&self) -> &str {
        "lexicon"
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }

    fn range(&self) -> &'static str {
        "[0, 1], higher is more lucid"
    }

    fn score(&self, text: &[Symbol]) -> Result<f64> {
        if text.is_empty() {
            return Err(Error::Score("cannot score an empty text".into()));
        }
        let covered = match self.strategy {
            CoverStrategy::Greedy => self.greedy_cover(text),
            CoverStrategy::Optimal => self.optimal_cover(text),
        };
        Ok(covered as f64 / text.len() as f64)
    }
}

const MODEL_MAGIC: &str = "elsperm-ngram v1";

/// Character n-gram model with add-constant smoothing.
///
/// `P(w | ctx) = (count(ctx w) + k) / (count(ctx) + k * V)` where `V` is the
/// alphabet size. An n-gram never seen in training scores the floor
/// `ln(k / (count(ctx) + k * V))` for its context.
#[derive(Clone, Debug)]
pub struct NGramModel {
    order: usize,
    smoothing: f64,
    alphabet: Vec<Symbol>,
    counts: HashMap<Vec<Symbol>, u64>,
    context_counts: HashMap<Vec<Symbol>, u64>,
}

impl NGramModel {
    pub const DEFAULT_ORDER: usize = 3;
    pub const DEFAULT_SMOOTHING: f64 = 0.01;

    fn empty(order: usize, smoothing: f64, alphabet: BTreeSet<Symbol>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("n-gram order must be at least 1".into()));
        }
        if !(smoothing > 0.0 && smoothing.is_finite()) {
            return Err(Error::Config(format!("smoothing must be positive, got {smoothing}")));
        }
        if alphabet.is_empty() {
            return Err(Error::Config("n-gram alphabet is empty".into()));
        }
        Ok(NGramModel {
            order,
            smoothing,
            alphabet: alphabet.into_iter().collect(),
            counts: HashMap::new(),
            context_counts: HashMap::new(),
        })
    }

    /// A model with no observations: every n-gram scores `ln(1 / V)`.
    pub fn uniform(order: usize, alphabet: impl IntoIterator<Item = Symbol>, smoothing: f64) -> Result<Self> {
        Self::empty(order, smoothing, alphabet.into_iter().collect())
    }

    pub fn train(corpus: &[Symbol], order: usize, smoothing: f64) -> Result<Self> {
        let mut model = Self::empty(order, smoothing, corpus.iter().copied().collect())?;
        if corpus.len() < order {
            return Err(Error::Config(format!(
                "training corpus has {} symbols, fewer than the order {order}",
                corpus.len()
            )));
        }
        for window in corpus.windows(order) {
            *model.counts.entry(window.to_vec()).or_default() += 1;
        }
        model.rebuild_contexts();
        Ok(model)
    }

    fn rebuild_contexts(&mut self) {
        self.context_counts.clear();
        for (gram, &c) in &self.counts {
            *self.context_counts.entry(gram[..self.order - 1].to_vec()).or_default() += c;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn count(&self, gram: &[Symbol]) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Natural-log probability of the last symbol of `gram` given the rest.
    pub fn log_prob(&self, gram: &[Symbol]) -> f64 {
        debug_assert_eq!(gram.len(), self.order);
        let ctx = self.context_counts.get(&gram[..self.order - 1]).copied().unwrap_or(0);
        let v = self.alphabet.len() as f64;
        ((self.count(gram) as f64 + self.smoothing) / (ctx as f64 + self.smoothing * v)).ln()
    }

    /// Score of an unseen n-gram in a context never seen in training.
    pub fn floor(&self) -> f64 {
        (1.0 / self.alphabet.len() as f64).ln()
    }

    /// Serialized table: a header (magic, order, smoothing, alphabet, record
    /// count) followed by one `hex code points<TAB>count` line per n-gram,
    /// sorted by n-gram.
    pub fn to_table(&self) -> String {
        let hexes = |s: &[Symbol]| s.iter().map(|c| format!("{:x}", *c as u32)).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "{MODEL_MAGIC}").unwrap();
        writeln!(out, "order {}", self.order).unwrap();
        writeln!(out, "smoothing {}", self.smoothing).unwrap();
        writeln!(out, "alphabet {}", hexes(&self.alphabet)).unwrap();
        writeln!(out, "records {}", self.counts.len()).unwrap();
        let sorted: BTreeMap<&Vec<Symbol>, u64> = self.counts.iter().map(|(k, v)| (k, *v)).collect();
        for (gram, count) in sorted {
            writeln!(out, "{}\t{count}", hexes(gram)).unwrap();
        }
        out
    }

    pub fn from_table(table: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("n-gram table: {what}"));
        let parse_hexes = |s: &str| -> Result<Vec<Symbol>> {
            s.split_whitespace()
                .map(|h| {
                    u32::from_str_radix(h, 16)
                        .ok()
                        .and_then(char::from_u32)
                        .ok_or_else(|| bad(&format!("bad code point `{h}`")))
                })
                .collect()
        };
        let mut lines = table.lines();
        if lines.next() != Some(MODEL_MAGIC) {
            return Err(bad("missing or unsupported version header"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing `{name}` line")))?;
            let rest = line
                .strip_prefix(name)
                .ok_or_else(|| bad(&format!("expected `{name}`, got `{line}`")))?;
            Ok(rest.trim().to_string())
        };
        let order: usize = field("order")?.parse().map_err(|_| bad("bad order"))?;
        let smoothing: f64 = field("smoothing")?.parse().map_err(|_| bad("bad smoothing"))?;
        let alphabet = parse_hexes(&field("alphabet")?)?;
        let records: usize = field("records")?.parse().map_err(|_| bad("bad record count"))?;
        let mut model = Self::empty(order, smoothing, alphabet.into_iter().collect())?;
        for line in lines.by_ref().take(records) {
            let (gram, count) = line.split_once('\t').ok_or_else(|| bad("record without tab"))?;
            let gram = parse_hexes(gram)?;
            if gram.len() != order {
                return Err(bad("record length differs from order"));
            }
            let count: u64 = count.trim().parse().map_err(|_| bad("bad count"))?;
            model.counts.insert(gram, count);
        }
        if model.counts.len() != records {
            return Err(bad("truncated record list"));
        }
        model.rebuild_contexts();
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_table()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        NGramModel::from_table(&contents)
    }
}

/// Mean natural-log probability per n-gram window.
#[derive(Clone, Debug)]
pub struct NGramScorer {
    model: NGramModel,
    fingerprint: String,
}

impl NGramScorer {
    pub fn new(model: NGramModel) -> Self {
        let fingerprint = format!("ngram:{}", sha_hex(model.to_table().as_bytes()));
        NGramScorer { model, fingerprint }
    }

    pub fn model(&self) -> &NGramModel {
        &self.model
    }
}

impl Scorer for NGramScorer {
    fn name(&self) -> &str {
        "ngram"
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }

    fn range(&self) -> &'static str {
        "(-inf, 0], higher is more lucid"
    }

    fn score(&self, text: &[Symbol]) -> Result<f64> {
        let n = self.model.order;
        if text.len() < n {
            return Err(Error::Score(format!(
                "text of {} symbols is shorter than the n-gram order {n}",
                text.len()
            )));
        }
        let windows = text.len() - n + 1;
        Ok(text.windows(n).map(|w| self.model.log_prob(w)).sum::<f64>() / windows as f64)
    }
}

/// Shannon entropy of the symbol histogram, in bits per symbol.
#[derive(Clone, Copy, Debug, Default)]
pub struct EntropyScorer;

impl Scorer for EntropyScorer {
    fn name(&self) -> &str {
        "entropy"
    }

    fn fingerprint(&self) -> String {
        "entropy".into()
    }

    fn range(&self) -> &'static str {
        "[0, log2 V] bits, higher is more random"
    }

    fn score(&self, text: &[Symbol]) -> Result<f64> {
        if text.is_empty() {
            return Err(Error::Score("cannot score an empty text".into()));
        }
        Ok(shannon_entropy(text))
    }
}

pub fn shannon_entropy(text: &[Symbol]) -> f64 {
    let mut hist: BTreeMap<Symbol, usize> = BTreeMap::new();
    for &c in text {
        *hist.entry(c).or_default() += 1;
    }
    let n = text.len() as f64;
    let h: f64 = hist
        .values()
        .map(|&k| {
            let p = k as f64 / n;
            -p * p.log2()
        })
        .sum();
    // -0.0 for single-symbol texts
    h.max(0.0)
}

/// Mean and standard deviation of a scorer over seeded shuffles of a text.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub stddev: f64,
    pub shuffles: usize,
    pub seed: u64,
}

impl Calibration {
    /// Standard score of `score`; zero when the shuffles show no spread and
    /// the score equals their mean.
    pub fn z_score(&self, score: f64) -> f64 {
        if self.stddev > 0.0 {
            (score - self.mean) / self.stddev
        } else if (score - self.mean).abs() <= 1e-12 * self.mean.abs().max(1.0) {
            0.0
        } else {
            (score - self.mean).signum() * f64::INFINITY
        }
    }
}

pub const MIN_SHUFFLES: usize = 30;

/// Scores `shuffles` uniform shuffles of `text` drawn from a ChaCha8 stream
/// seeded with `seed`.
pub fn calibrate(scorer: &dyn Scorer, text: &SymbolText, shuffles: usize, seed: u64) -> Result<Calibration> {
    if shuffles < MIN_SHUFFLES {
        return Err(Error::Config(format!(
            "calibration needs at least {MIN_SHUFFLES} shuffles, got {shuffles}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = text.as_slice().to_vec();
    let mut scores = Vec::with_capacity(shuffles);
    for _ in 0..shuffles {
        work.shuffle(&mut rng);
        scores.push(scorer.score(&work)?);
    }
    let n = scores.len() as f64;
    // shifted by the first score so constant scores give an exact mean
    let pivot = scores[0];
    let mean = pivot + scores.iter().map(|s| s - pivot).sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Calibration {
        mean,
        stddev: var.sqrt(),
        shuffles,
        seed,
    })
}
