//! Categorial grammar on top of the sequent engine: a lexicon assigns
//! categories to words, a [`Bracketing`] fixes how the sequence is
//! grouped, and [`parse`] searches every bracketing and category
//! assignment for derivations of the goal category.

use crate::extension::Extension;
use crate::form::{Form, Term};
use crate::proof::{Dertree, Sequent};
use crate::search::{prove, SearchOptions};
use crate::syntax::parse_category;
use serde_json::Value;
use std::collections::BTreeMap;
use thiserror::Error;

/// Words mapped to their categories, in lexicon order.
pub type Lexicon = BTreeMap<String, Vec<Form>>;

/// A malformed lexicon file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Json(String),
}

fn line_err(line: usize, msg: impl Into<String>) -> LexiconError {
    LexiconError::Line { line, msg: msg.into() }
}

fn merge_entry(lex: &mut Lexicon, word: &str, cats: Vec<Form>) {
    let entry = lex.entry(word.to_string()).or_default();
    for c in cats {
        if !entry.contains(&c) {
            entry.push(c);
        }
    }
}

/// Load a lexicon from text.  Two formats are accepted: JSON
/// (`{"word": ["cat", …], …}`, detected by a leading `{`) and
/// tab-separated lines `word<TAB>cat[,cat…]` where blank lines and lines
/// starting with `#` are skipped.  Repeated words merge their category
/// lists, keeping first-seen order.
pub fn load_lexicon(source: &str) -> Result<Lexicon, LexiconError> {
    if source.trim_start().starts_with('{') {
        return load_lexicon_json(source);
    }
    let mut lex = Lexicon::new();
    for (i, raw) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((word, cats)) = raw.split_once('\t') else {
            return Err(line_err(line_no, "expected `word<TAB>categories`"));
        };
        let word = word.trim();
        if word.is_empty() {
            return Err(line_err(line_no, "empty word"));
        }
        let mut parsed = Vec::new();
        for cat in cats.split(',') {
            let cat = cat.trim();
            if cat.is_empty() {
                return Err(line_err(line_no, "empty category"));
            }
            let f = parse_category(cat)
                .map_err(|e| line_err(line_no, format!("category `{cat}`: {e}")))?;
            parsed.push(f);
        }
        merge_entry(&mut lex, word, parsed);
    }
    Ok(lex)
}

fn load_lexicon_json(source: &str) -> Result<Lexicon, LexiconError> {
    let v: Value =
        serde_json::from_str(source).map_err(|e| LexiconError::Json(e.to_string()))?;
    let Value::Object(map) = v else {
        return Err(LexiconError::Json("expected a JSON object".into()));
    };
    let mut lex = Lexicon::new();
    for (word, cats) in map {
        let Value::Array(cats) = cats else {
            return Err(LexiconError::Json(format!("`{word}`: expected an array of categories")));
        };
        let mut parsed = Vec::new();
        for c in cats {
            let Value::String(c) = c else {
                return Err(LexiconError::Json(format!("`{word}`: categories must be strings")));
            };
            let f = parse_category(&c)
                .map_err(|e| LexiconError::Json(format!("`{word}`: category `{c}`: {e}")))?;
            parsed.push(f);
        }
        merge_entry(&mut lex, &word, parsed);
    }
    Ok(lex)
}

/// A binary grouping of the words `0..n`, preserving order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Leaf(usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    /// The antecedent this grouping induces under a category assignment
    /// (one category per word position).
    pub fn to_term(&self, assignment: &[Form]) -> Term {
        match self {
            Bracketing::Leaf(i) => Term::one(assignment[*i].clone()),
            Bracketing::Node(l, r) => {
                Term::comma(l.to_term(assignment), r.to_term(assignment))
            }
        }
    }

    /// Render with the words shown in place, e.g. `(cosa (guarda passare))`.
    pub fn words_string(&self, words: &[&str]) -> String {
        match self {
            Bracketing::Leaf(i) => words[*i].to_string(),
            Bracketing::Node(l, r) => {
                format!("({} {})", l.words_string(words), r.words_string(words))
            }
        }
    }
}

/// All bracketings of `n` words in split-point order: the first split is
/// taken after word 1, 2, … so the fully right-branching tree comes first
/// and the fully left-branching tree last.
pub fn bracketings(n: usize) -> Vec<Bracketing> {
    fn over(lo: usize, hi: usize) -> Vec<Bracketing> {
        if hi - lo == 1 {
            return vec![Bracketing::Leaf(lo)];
        }
        let mut out = Vec::new();
        for split in lo + 1..hi {
            for l in over(lo, split) {
                for r in over(split, hi) {
                    out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }
    if n == 0 {
        Vec::new()
    } else {
        over(0, n)
    }
}

/// One successful reading of the word sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub bracketing: Bracketing,
    /// The category chosen for each word position.
    pub assignment: Vec<Form>,
    pub proof: Dertree,
}

/// Everything [`parse`] found, plus the size of the space it swept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parses {
    pub results: Vec<ParseResult>,
    /// Candidate sequents considered: bracketings × category assignments.
    pub candidates: usize,
}

/// The word sequence cannot even be looked up.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("nothing to parse")]
    EmptyInput,
    #[error("unknown words: {}", words.join(", "))]
    UnknownWords { words: Vec<String> },
}

/// Parse `words` against `goal`: for every bracketing (in
/// [`bracketings`] order) and every category assignment (leftmost word
/// most significant), search for a derivation.  Each candidate
/// contributes at most one proof; at most `opts.max_solutions` results
/// are returned overall.
pub fn parse(
    words: &[&str],
    goal: &Form,
    lex: &Lexicon,
    ext: &Extension,
    opts: &SearchOptions,
) -> Result<Parses, ParseError> {
    if words.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let mut unknown: Vec<String> = Vec::new();
    let mut choices: Vec<&[Form]> = Vec::new();
    for w in words {
        match lex.get(*w) {
            Some(cats) if !cats.is_empty() => choices.push(cats),
            _ => {
                if !unknown.contains(&w.to_string()) {
                    unknown.push(w.to_string());
                }
            }
        }
    }
    if !unknown.is_empty() {
        return Err(ParseError::UnknownWords { words: unknown });
    }

    let brackets = bracketings(words.len());
    let assignments_total: usize = choices.iter().map(|c| c.len()).product();
    let candidates = brackets.len() * assignments_total;
    let limit = opts.max_solutions.max(1);

    let mut results = Vec::new();
    'sweep: for b in &brackets {
        // mixed-radix counter over category choices, leftmost word most
        // significant
        let mut idx = vec![0usize; choices.len()];
        loop {
            let assignment: Vec<Form> =
                idx.iter().zip(&choices).map(|(i, c)| c[*i].clone()).collect();
            let sequent = Sequent::new(ext.clone(), b.to_term(&assignment), goal.clone());
            if let Some(proof) = prove(&sequent, opts) {
                results.push(ParseResult { bracketing: b.clone(), assignment, proof });
                if results.len() >= limit {
                    break 'sweep;
                }
            }
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(Parses { results, candidates })
}
