use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use elsperm_core::corpus::{load_text, parse_markers, split_sections, Encoding, Normalization, Policy, SectionedCorpus, Selector};
use elsperm_core::scoring::{CoverStrategy, EntropyScorer, Lexicon, LexiconScorer, NGramModel, NGramScorer, Scorer};
use elsperm_core::search::text_digest;
use elsperm_core::SymbolText;

/// Where informational output goes. Data always goes to stdout.
pub struct Output {
    quiet: bool,
}

impl Output {
    pub fn new(quiet: bool) -> Self {
        Output { quiet }
    }

    pub fn info(&self, line: &str) -> Result<()> {
        if self.quiet {
            writeln!(io::stderr(), "{line}")?;
        } else {
            writeln!(io::stdout(), "{line}")?;
        }
        Ok(())
    }

    pub fn data(&self, line: &str) -> Result<()> {
        writeln!(io::stdout(), "{line}")?;
        Ok(())
    }

    /// Effective configuration, one `# key: value` line each.
    pub fn banner(&self, command: &str, entries: &[(String, String)]) -> Result<()> {
        self.info(&format!("# elsperm {command}"))?;
        let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in entries {
            self.info(&format!("#   {k:width$}  {v}"))?;
        }
        Ok(())
    }
}

pub type Banner = Vec<(String, String)>;

pub fn entry(banner: &mut Banner, key: &str, value: impl ToString) {
    banner.push((key.to_string(), value.to_string()));
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EncodingArg {
    #[value(name = "utf-8", alias = "utf8")]
    Utf8,
    #[value(name = "latin-1", alias = "latin1")]
    Latin1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyArg {
    /// Every code point.
    Verbatim,
    /// Everything except line breaks.
    NoLineBreaks,
    /// Letters only; spaces, punctuation and vowel points are dropped.
    LettersOnly,
}

#[derive(Args, Clone, Debug)]
pub struct InputArgs {
    /// Text given directly on the command line.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub text: Option<String>,

    /// Read the text from a file.
    #[arg(long, short = 'i')]
    pub input: Option<PathBuf>,

    /// Byte encoding of input files.
    #[arg(long, value_enum, default_value_t = EncodingArg::Utf8)]
    pub encoding: EncodingArg,

    /// Which code points become symbols.
    #[arg(long, value_enum, default_value_t = PolicyArg::NoLineBreaks)]
    pub normalize: PolicyArg,

    /// Fold Hebrew final letter forms onto their base letters.
    #[arg(long)]
    pub fold_finals: bool,

    /// Section marker file: the 0-based positions of the two markers, one per line.
    #[arg(long)]
    pub markers: Option<PathBuf>,

    /// Sections to keep, e.g. `T1,T2,T3` or `T2` (needs --markers).
    #[arg(long, requires = "markers")]
    pub sections: Option<Selector>,
}

pub struct Loaded {
    /// Whole normalized input.
    pub full: SymbolText,
    pub sections: Option<SectionedCorpus>,
    /// The selected text.
    pub text: SymbolText,
}

impl InputArgs {
    pub fn encoding(&self) -> Encoding {
        match self.encoding {
            EncodingArg::Utf8 => Encoding::Utf8,
            EncodingArg::Latin1 => Encoding::Latin1,
        }
    }

    pub fn normalization(&self) -> Normalization {
        Normalization {
            policy: match self.normalize {
                PolicyArg::Verbatim => Policy::Verbatim,
                PolicyArg::NoLineBreaks => Policy::NoLineBreaks,
                PolicyArg::LettersOnly => Policy::LettersOnly,
            },
            fold_final_forms: self.fold_finals,
        }
    }

    pub fn load(&self, banner: &mut Banner) -> Result<Loaded> {
        let full = match (&self.text, &self.input) {
            (Some(literal), _) => {
                entry(banner, "source", format!("--text {literal:?}"));
                load_text(literal.as_bytes(), Encoding::Utf8, self.normalization())?
            }
            (None, Some(path)) => {
                entry(banner, "source", path.display());
                entry(banner, "encoding", self.encoding().name());
                let bytes = fs::read(path).with_context(|| format!("cannot read input {}", path.display()))?;
                load_text(&bytes, self.encoding(), self.normalization())
                    .with_context(|| format!("cannot load {}", path.display()))?
            }
            (None, None) => bail!("give the text with --text or --input"),
        };
        entry(banner, "normalize", self.normalize.to_possible_value().unwrap().get_name());
        entry(banner, "fold-finals", self.fold_finals);

        let (sections, text) = match &self.markers {
            Some(path) => {
                let sidecar =
                    fs::read_to_string(path).with_context(|| format!("cannot read markers {}", path.display()))?;
                let (p1, p2) = parse_markers(&sidecar).with_context(|| format!("in {}", path.display()))?;
                let sc = split_sections(&full, p1, p2)?;
                let selector = self.sections.unwrap_or(Selector::ALL);
                entry(banner, "markers", format!("{} ({p1}, {p2})", path.display()));
                entry(banner, "sections", selector);
                let text = sc.recombine(selector)?;
                (Some(sc), text)
            }
            None => (None, full.clone()),
        };
        entry(banner, "length", text.len());
        entry(banner, "text sha256", text_digest(text.as_slice()));
        Ok(Loaded { full, sections, text })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CoverArg {
    Greedy,
    Optimal,
}

#[derive(Args, Clone, Debug)]
pub struct ScorerArgs {
    /// Word list, one word per line, for the lexicon-coverage scorer.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,

    /// Lexicon segmentation strategy.
    #[arg(long, value_enum, default_value_t = CoverArg::Greedy)]
    pub cover: CoverArg,

    /// Saved n-gram table for the n-gram scorer.
    #[arg(long, conflicts_with = "ngram_corpus")]
    pub ngram_model: Option<PathBuf>,

    /// Train the n-gram scorer on this file (read like the input).
    #[arg(long)]
    pub ngram_corpus: Option<PathBuf>,

    #[arg(long, default_value_t = NGramModel::DEFAULT_ORDER)]
    pub ngram_order: usize,

    #[arg(long, default_value_t = NGramModel::DEFAULT_SMOOTHING)]
    pub ngram_smoothing: f64,

    /// Add the Shannon-entropy scorer.
    #[arg(long)]
    pub entropy: bool,
}

impl ScorerArgs {
    pub fn build(&self, input: &InputArgs, banner: &mut Banner) -> Result<Vec<Box<dyn Scorer>>> {
        let mut scorers: Vec<Box<dyn Scorer>> = Vec::new();
        if let Some(path) = &self.lexicon {
            let lexicon = Lexicon::load(path).with_context(|| format!("cannot load lexicon {}", path.display()))?;
            let strategy = match self.cover {
                CoverArg::Greedy => CoverStrategy::Greedy,
                CoverArg::Optimal => CoverStrategy::Optimal,
            };
            let scorer = LexiconScorer::new(lexicon, strategy);
            entry(banner, "lexicon", format!("{} ({} words)", path.display(), scorer.lexicon().len()));
            entry(banner, "cover", format!("{:?}", self.cover).to_lowercase());
            scorers.push(Box::new(scorer));
        }
        let model = match (&self.ngram_model, &self.ngram_corpus) {
            (Some(path), _) => {
                entry(banner, "ngram model", path.display());
                Some(NGramModel::load(path).with_context(|| format!("cannot load n-gram model {}", path.display()))?)
            }
            (None, Some(path)) => {
                let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
                let corpus = load_text(&bytes, input.encoding(), input.normalization())?;
                entry(banner, "ngram corpus", path.display());
                entry(banner, "ngram order", self.ngram_order);
                entry(banner, "ngram smoothing", self.ngram_smoothing);
                Some(NGramModel::train(corpus.as_slice(), self.ngram_order, self.ngram_smoothing)?)
            }
            (None, None) => None,
        };
        if let Some(model) = model {
            scorers.push(Box::new(NGramScorer::new(model)));
        }
        if self.entropy {
            scorers.push(Box::new(EntropyScorer));
        }
        let names: Vec<String> = scorers.iter().map(|s| format!("{} {}", s.name(), s.range())).collect();
        entry(banner, "scorers", if names.is_empty() { "none".into() } else { names.join("; ") });
        Ok(scorers)
    }
}

/// Accepts `-inf`/`inf` as well as ordinary numbers; rejects NaN.
pub fn parse_threshold(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number (use -inf to disable the filter)"))?;
    if v.is_nan() {
        return Err("threshold must not be NaN".into());
    }
    Ok(v)
}
