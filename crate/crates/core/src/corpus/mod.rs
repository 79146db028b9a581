//! Symbol texts, the five-part section model and length factorization.

mod factor;

pub use factor::{factorize, is_prime, FactorizationReport};

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A single text symbol. Every decoded code point is one symbol.
pub type Symbol = char;

/// An immutable, cheaply clonable sequence of symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolText {
    symbols: Arc<[Symbol]>,
}

impl SymbolText {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SymbolText {
            symbols: symbols.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, index: usize) -> Option<Symbol> {
        self.symbols.get(index).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().copied()
    }

    /// Symbols sorted, used for multiset comparisons.
    pub fn sorted_symbols(&self) -> Vec<Symbol> {
        let mut v = self.symbols.to_vec();
        v.sort_unstable();
        v
    }

    /// Gathers `self[indices[i]]` into a new text.
    pub fn gather(&self, indices: &[usize]) -> SymbolText {
        SymbolText::new(indices.iter().map(|&i| self.symbols[i]).collect())
    }
}

impl Index<usize> for SymbolText {
    type Output = Symbol;

    fn index(&self, index: usize) -> &Symbol {
        &self.symbols[index]
    }
}

impl From<&str> for SymbolText {
    fn from(s: &str) -> Self {
        SymbolText::new(s.chars().collect())
    }
}

impl From<Vec<Symbol>> for SymbolText {
    fn from(v: Vec<Symbol>) -> Self {
        SymbolText::new(v)
    }
}

impl fmt::Display for SymbolText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|c| fmt::Write::write_char(f, *c))
    }
}

impl fmt::Debug for SymbolText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolText({:?})", self.to_string())
    }
}

/// How raw bytes are decoded into code points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Encoding {
    #[default]
    Utf8,
    /// Each byte is one code point (U+0000..=U+00FF).
    Latin1,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Utf8 => "utf-8",
            Encoding::Latin1 => "latin-1",
        }
    }
}

/// Which decoded code points become symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    /// Every code point, including spaces, punctuation and line breaks.
    #[default]
    Verbatim,
    /// Every code point except `\n` and `\r`.
    NoLineBreaks,
    /// Alphabetic code points only.
    LettersOnly,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Normalization {
    pub policy: Policy,
    /// Fold Hebrew final forms (ך ם ן ף ץ) onto their base letters.
    pub fold_final_forms: bool,
}

impl Normalization {
    pub const VERBATIM: Normalization = Normalization {
        policy: Policy::Verbatim,
        fold_final_forms: false,
    };

    fn apply(&self, c: char) -> Option<char> {
        let keep = match self.policy {
            Policy::Verbatim => true,
            Policy::NoLineBreaks => c != '\n' && c != '\r',
            Policy::LettersOnly => is_letter(c),
        };
        if !keep {
            return None;
        }
        Some(if self.fold_final_forms {
            fold_final_form(c)
        } else {
            c
        })
    }
}

// `is_alphabetic` also admits combining vowel points, which are not letters here.
fn is_letter(c: char) -> bool {
    c.is_alphabetic() && !matches!(c, '\u{0300}'..='\u{036F}' | '\u{0591}'..='\u{05C7}')
}

fn fold_final_form(c: char) -> char {
    match c {
        'ך' => 'כ',
        'ם' => 'מ',
        'ן' => 'נ',
        'ף' => 'פ',
        'ץ' => 'צ',
        other => other,
    }
}

/// Decodes `bytes` and applies `normalization`, one symbol per surviving code point.
pub fn load_text(bytes: &[u8], encoding: Encoding, normalization: Normalization) -> Result<SymbolText> {
    let symbols: Vec<Symbol> = match encoding {
        Encoding::Utf8 => std::str::from_utf8(bytes)
            .map_err(|e| Error::Encoding {
                encoding: encoding.name(),
                offset: e.valid_up_to(),
            })?
            .chars()
            .filter_map(|c| normalization.apply(c))
            .collect(),
        Encoding::Latin1 => bytes
            .iter()
            .filter_map(|&b| normalization.apply(char::from(b)))
            .collect(),
    };
    if symbols.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(SymbolText::new(symbols))
}

/// One of the five parts of a sectioned corpus, in document order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    T1,
    N1,
    T2,
    N2,
    T3,
}

impl Section {
    pub const ALL: [Section; 5] = [Section::T1, Section::N1, Section::T2, Section::N2, Section::T3];

    pub fn name(self) -> &'static str {
        match self {
            Section::T1 => "T1",
            Section::N1 => "N1",
            Section::T2 => "T2",
            Section::N2 => "N2",
            Section::T3 => "T3",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// A subset of the five sections, always traversed in document order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Selector(u8);

impl Selector {
    pub const ALL: Selector = Selector(0b11111);
    pub const TEXT_ONLY: Selector = Selector(0b10101);

    pub fn new(sections: &[Section]) -> Result<Self> {
        let mut mask = 0u8;
        let mut last: Option<Section> = None;
        for &s in sections {
            if last.is_some_and(|l| l >= s) {
                return Err(Error::Section(format!(
                    "selector must list sections once each in document order, got {} after {}",
                    s.name(),
                    last.unwrap().name()
                )));
            }
            mask |= s.bit();
            last = Some(s);
        }
        Ok(Selector(mask))
    }

    pub fn contains(self, s: Section) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn sections(self) -> impl Iterator<Item = Section> {
        Section::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}

impl std::str::FromStr for Selector {
    type Err = Error;

    /// Parses a comma-separated list such as `T1,T2,T3`. `ALL` selects all five parts.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Selector::ALL);
        }
        let parts = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                Section::ALL
                    .into_iter()
                    .find(|sec| sec.name().eq_ignore_ascii_case(p))
                    .ok_or_else(|| Error::Section(format!("unknown section `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Selector::new(&parts)
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.sections().map(Section::name).collect();
        f.write_str(&names.join(","))
    }
}

/// A text split around two single-symbol markers into T1, N1, T2, N2, T3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionedCorpus {
    pub t1: SymbolText,
    pub n1: Symbol,
    pub t2: SymbolText,
    pub n2: Symbol,
    pub t3: SymbolText,
}

/// Splits `text` at the marker positions `pos1` and `pos2`.
///
/// Requires `0 < pos1 < pos2 < len - 1` so that T1 and T3 are non-empty.
pub fn split_sections(text: &SymbolText, pos1: usize, pos2: usize) -> Result<SectionedCorpus> {
    let len = text.len();
    if !(pos1 > 0 && pos1 < pos2 && pos2 + 1 < len) {
        return Err(Error::Section(format!(
            "marker positions must satisfy 0 < pos1 < pos2 < len-1; got pos1={pos1}, pos2={pos2}, len={len}"
        )));
    }
    let s = text.as_slice();
    Ok(SectionedCorpus {
        t1: SymbolText::new(s[..pos1].to_vec()),
        n1: s[pos1],
        t2: SymbolText::new(s[pos1 + 1..pos2].to_vec()),
        n2: s[pos2],
        t3: SymbolText::new(s[pos2 + 1..].to_vec()),
    })
}

impl SectionedCorpus {
    pub fn part_len(&self, section: Section) -> usize {
        match section {
            Section::T1 => self.t1.len(),
            Section::T2 => self.t2.len(),
            Section::T3 => self.t3.len(),
            Section::N1 | Section::N2 => 1,
        }
    }

    /// Concatenates the selected parts in document order.
    pub fn recombine(&self, selector: Selector) -> Result<SymbolText> {
        let mut out = Vec::with_capacity(selector.sections().map(|s| self.part_len(s)).sum());
        for section in selector.sections() {
            match section {
                Section::T1 => out.extend_from_slice(self.t1.as_slice()),
                Section::N1 => out.push(self.n1),
                Section::T2 => out.extend_from_slice(self.t2.as_slice()),
                Section::N2 => out.push(self.n2),
                Section::T3 => out.extend_from_slice(self.t3.as_slice()),
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyText);
        }
        Ok(SymbolText::new(out))
    }
}

/// Parses a marker sidecar: two 0-based decimal indices on separate lines.
pub fn parse_markers(sidecar: &str) -> Result<(usize, usize)> {
    let values = sidecar
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<usize>()
                .map_err(|_| Error::Parse(format!("marker line `{l}` is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    match values[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Parse(format!(
            "marker file must contain exactly two indices, found {}",
            values.len()
        ))),
    }
}
