//! Structural extensions: pattern rule sets that plug the base calculus
//! into NL, L, NLP, or LP, plus user-defined variants.
//!
//! A rule is a pair of term patterns, written in ordinary term syntax with
//! single uppercase letters as metavariables: associativity is
//! `(A, (B, C)) -> ((A, B), C)`.  An [`Extension`] is a named finite set of
//! such rules; the built-ins are [`Extension::nl`] (no rules),
//! [`Extension::l`] (associativity both ways), [`Extension::nlp`]
//! (commutativity), and [`Extension::lp`] (their union).
//!
//! The same machinery at the category level gives [`ArrowExtension`], and
//! [`to_arrow_ext`] translates a term extension into its arrow counterpart
//! — with the rule sides swapped, mirroring how a structural step in a
//! sequent antecedent reads as an arrow between the collapsed categories.

use crate::form::{Form, Path, Term};
use crate::replace::{positions, replace_at, subterm_at};
use crate::syntax::{parse_term, render_term, SyntaxError};
use std::collections::HashMap;
use thiserror::Error;

/// A malformed serialised object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("decode error: {msg}")]
pub struct DecodeError {
    pub msg: String,
}

impl DecodeError {
    pub fn new(msg: impl Into<String>) -> DecodeError {
        DecodeError { msg: msg.into() }
    }
}

impl From<SyntaxError> for DecodeError {
    fn from(e: SyntaxError) -> DecodeError {
        DecodeError::new(e.to_string())
    }
}

/// A category pattern.  `FVar` stands for an arbitrary category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormPattern {
    FVar(char),
    FAt(String),
    FSlash(Box<FormPattern>, Box<FormPattern>),
    FBackslash(Box<FormPattern>, Box<FormPattern>),
    FDot(Box<FormPattern>, Box<FormPattern>),
}

/// A term pattern.  `TVar` stands for an arbitrary term, `POne` for a
/// single category leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermPattern {
    TVar(char),
    POne(FormPattern),
    PComma(Box<TermPattern>, Box<TermPattern>),
}

/// One named structural rewrite rule, `lhs -> rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructRule {
    pub name: String,
    pub lhs: TermPattern,
    pub rhs: TermPattern,
}

impl StructRule {
    /// Parse both sides from term syntax; single uppercase letters become
    /// metavariables.
    pub fn parse(name: impl Into<String>, lhs: &str, rhs: &str) -> Result<StructRule, SyntaxError> {
        Ok(StructRule {
            name: name.into(),
            lhs: term_to_pattern(&parse_term(lhs)?),
            rhs: term_to_pattern(&parse_term(rhs)?),
        })
    }
}

/// A named structural extension.
///
/// `cond_cut` records that the extension is trusted to preserve
/// cut-admissibility (true for the built-ins, asserted by the user
/// otherwise); `ext_sub` is computed at construction and records that every
/// rule preserves category leaves left to right across the rewrite, the
/// side condition for the sub-formula property.
#[derive(Debug, Clone)]
pub struct Extension {
    pub name: String,
    pub rules: Vec<StructRule>,
    pub cond_cut: bool,
    pub ext_sub: bool,
}

// Equality and hashing deliberately ignore the two flags: two extensions
// are the same relation when they have the same name and rules.
impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.rules == other.rules
    }
}

impl Eq for Extension {}

impl std::hash::Hash for Extension {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.rules.hash(state);
    }
}

fn is_var_name(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_uppercase() => Some(c),
        _ => None,
    }
}

fn form_to_pattern(f: &Form) -> FormPattern {
    match f {
        Form::At(s) => match is_var_name(s) {
            Some(c) => FormPattern::FVar(c),
            None => FormPattern::FAt(s.clone()),
        },
        Form::Slash(a, b) => {
            FormPattern::FSlash(Box::new(form_to_pattern(a)), Box::new(form_to_pattern(b)))
        }
        Form::Backslash(a, b) => {
            FormPattern::FBackslash(Box::new(form_to_pattern(a)), Box::new(form_to_pattern(b)))
        }
        Form::Dot(a, b) => {
            FormPattern::FDot(Box::new(form_to_pattern(a)), Box::new(form_to_pattern(b)))
        }
    }
}

fn term_to_pattern(t: &Term) -> TermPattern {
    match t {
        // a metavariable standing alone at a term position ranges over terms
        Term::OneForm(Form::At(s)) if is_var_name(s).is_some() => {
            TermPattern::TVar(is_var_name(s).unwrap())
        }
        Term::OneForm(f) => TermPattern::POne(form_to_pattern(f)),
        Term::Comma(l, r) => {
            TermPattern::PComma(Box::new(term_to_pattern(l)), Box::new(term_to_pattern(r)))
        }
    }
}

fn pattern_to_form(p: &FormPattern) -> Form {
    match p {
        FormPattern::FVar(c) => Form::At(c.to_string()),
        FormPattern::FAt(s) => Form::At(s.clone()),
        FormPattern::FSlash(a, b) => Form::slash(pattern_to_form(a), pattern_to_form(b)),
        FormPattern::FBackslash(a, b) => Form::backslash(pattern_to_form(a), pattern_to_form(b)),
        FormPattern::FDot(a, b) => Form::dot(pattern_to_form(a), pattern_to_form(b)),
    }
}

fn pattern_to_term(p: &TermPattern) -> Term {
    match p {
        TermPattern::TVar(c) => Term::one(Form::At(c.to_string())),
        TermPattern::POne(f) => Term::one(pattern_to_form(f)),
        TermPattern::PComma(l, r) => Term::comma(pattern_to_term(l), pattern_to_term(r)),
    }
}

/// Render a term pattern back to rule syntax.
pub fn render_term_pattern(p: &TermPattern) -> String {
    render_term(&pattern_to_term(p))
}

/// What a metavariable is bound to during matching.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Binding {
    T(Term),
    F(Form),
}

type Bindings = HashMap<char, Binding>;

fn bind(b: &mut Bindings, v: char, val: Binding) -> bool {
    match b.get(&v) {
        Some(prev) => *prev == val,
        None => {
            b.insert(v, val);
            true
        }
    }
}

fn match_form(pat: &FormPattern, f: &Form, b: &mut Bindings) -> bool {
    match (pat, f) {
        (FormPattern::FVar(v), _) => bind(b, *v, Binding::F(f.clone())),
        (FormPattern::FAt(s), Form::At(t)) => s == t,
        (FormPattern::FSlash(pa, pb), Form::Slash(fa, fb))
        | (FormPattern::FBackslash(pa, pb), Form::Backslash(fa, fb))
        | (FormPattern::FDot(pa, pb), Form::Dot(fa, fb)) => {
            match_form(pa, fa, b) && match_form(pb, fb, b)
        }
        _ => false,
    }
}

fn match_term(pat: &TermPattern, t: &Term, b: &mut Bindings) -> bool {
    match (pat, t) {
        (TermPattern::TVar(v), _) => bind(b, *v, Binding::T(t.clone())),
        (TermPattern::POne(fp), Term::OneForm(f)) => match_form(fp, f, b),
        (TermPattern::PComma(pl, pr), Term::Comma(tl, tr)) => {
            match_term(pl, tl, b) && match_term(pr, tr, b)
        }
        _ => false,
    }
}

fn instantiate_form(pat: &FormPattern, b: &Bindings) -> Option<Form> {
    match pat {
        FormPattern::FVar(v) => match b.get(v) {
            Some(Binding::F(f)) => Some(f.clone()),
            _ => None,
        },
        FormPattern::FAt(s) => Some(Form::At(s.clone())),
        FormPattern::FSlash(a, c) => Some(Form::slash(instantiate_form(a, b)?, instantiate_form(c, b)?)),
        FormPattern::FBackslash(a, c) => {
            Some(Form::backslash(instantiate_form(a, b)?, instantiate_form(c, b)?))
        }
        FormPattern::FDot(a, c) => Some(Form::dot(instantiate_form(a, b)?, instantiate_form(c, b)?)),
    }
}

fn instantiate_term(pat: &TermPattern, b: &Bindings) -> Option<Term> {
    match pat {
        TermPattern::TVar(v) => match b.get(v) {
            Some(Binding::T(t)) => Some(t.clone()),
            _ => None,
        },
        TermPattern::POne(fp) => Some(Term::one(instantiate_form(fp, b)?)),
        TermPattern::PComma(l, r) => {
            Some(Term::comma(instantiate_term(l, b)?, instantiate_term(r, b)?))
        }
    }
}

impl Extension {
    /// Build an extension; the `ext_sub` flag is computed from the rules.
    pub fn new(name: impl Into<String>, rules: Vec<StructRule>, cond_cut: bool) -> Extension {
        let ext_sub = rules.iter().all(rule_preserves_leaves);
        Extension { name: name.into(), rules, cond_cut, ext_sub }
    }

    /// The non-associative base: no structural rules.
    pub fn nl() -> Extension {
        Extension::new("NL", Vec::new(), true)
    }

    /// Associativity in both directions.
    pub fn l() -> Extension {
        Extension::new("L", l_rules(), true)
    }

    /// Commutativity.
    pub fn nlp() -> Extension {
        Extension::new("NLP", nlp_rules(), true)
    }

    /// Commutativity plus associativity.
    pub fn lp() -> Extension {
        Extension::new("LP", lp_rules(), true)
    }

    /// Look up a built-in by name.
    pub fn builtin(name: &str) -> Option<Extension> {
        match name {
            "NL" => Some(Extension::nl()),
            "L" => Some(Extension::l()),
            "NLP" => Some(Extension::nlp()),
            "LP" => Some(Extension::lp()),
            _ => None,
        }
    }
}

fn l_rules() -> Vec<StructRule> {
    vec![
        StructRule::parse("assocL", "(A, (B, C))", "((A, B), C)").unwrap(),
        StructRule::parse("assocR", "((A, B), C)", "(A, (B, C))").unwrap(),
    ]
}

fn nlp_rules() -> Vec<StructRule> {
    vec![StructRule::parse("comm", "(A, B)", "(B, A)").unwrap()]
}

fn lp_rules() -> Vec<StructRule> {
    let mut rules = nlp_rules();
    rules.extend(l_rules());
    rules
}

fn same_rule_set(a: &[StructRule], b: &[StructRule]) -> bool {
    a.iter().all(|r| b.contains(r)) && b.iter().all(|r| a.contains(r))
}

/// True iff some rule of `e` relates `d1` to `d2` as a ground instance.
pub fn ext_relates(e: &Extension, d1: &Term, d2: &Term) -> bool {
    e.rules.iter().any(|r| ext_relates_rule(r, d1, d2))
}

/// True iff the single rule `r` relates `d1` to `d2` as a ground instance
/// (shared bindings across both sides).
pub(crate) fn ext_relates_rule(r: &StructRule, d1: &Term, d2: &Term) -> bool {
    let mut b = Bindings::new();
    match_term(&r.lhs, d1, &mut b) && match_term(&r.rhs, d2, &mut b)
}

fn rewrites_with(rules: &[(usize, &TermPattern, &TermPattern)], e: &Extension, t: &Term) -> Vec<(Term, Path, String)> {
    let mut out: Vec<(Term, Path, String)> = Vec::new();
    for p in positions(t) {
        let sub = subterm_at(t, &p).expect("position enumerated from t");
        for (i, from, to) in rules {
            let mut b = Bindings::new();
            if !match_term(from, sub, &mut b) {
                continue;
            }
            // a rule whose output side introduces unbound metavariables has
            // no determined rewrite; skip it in this direction
            let Some(inst) = instantiate_term(to, &b) else { continue };
            let rewritten = replace_at(t, &p, inst).expect("occurrence path");
            let entry = (rewritten, p.clone(), e.rules[*i].name.clone());
            if !out.contains(&entry) {
                out.push(entry);
            }
        }
    }
    out
}

/// All single-position rewrites of `t` under `e`, preorder by position and
/// then rule order, duplicates removed.  Each result is the whole rewritten
/// term together with the position rewritten and the rule that fired.
pub fn ext_rewrites(e: &Extension, t: &Term) -> Vec<(Term, Path, String)> {
    let rules: Vec<_> = e
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| (i, &r.lhs, &r.rhs))
        .collect();
    rewrites_with(&rules, e, t)
}

/// Like [`ext_rewrites`] but applying each rule right to left: every `t'`
/// such that one rewrite step under `e` sends `t'` to `t` at the reported
/// position.
pub fn ext_rewrites_inv(e: &Extension, t: &Term) -> Vec<(Term, Path, String)> {
    let rules: Vec<_> = e
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| (i, &r.rhs, &r.lhs))
        .collect();
    rewrites_with(&rules, e, t)
}

// Pattern-against-pattern matching for rule subsumption.  The target's own
// metavariables are opaque: a target variable is matched only by a pattern
// variable, never by a constructor, so success builds a substitution that
// maps the pattern rule onto the target rule syntactically.
#[derive(Debug, Clone, PartialEq, Eq)]
enum PatBinding {
    T(TermPattern),
    F(FormPattern),
}

fn pat_bind(b: &mut HashMap<char, PatBinding>, v: char, val: PatBinding) -> bool {
    match b.get(&v) {
        Some(prev) => *prev == val,
        None => {
            b.insert(v, val);
            true
        }
    }
}

fn match_fpat(pat: &FormPattern, target: &FormPattern, b: &mut HashMap<char, PatBinding>) -> bool {
    match (pat, target) {
        (FormPattern::FVar(v), _) => pat_bind(b, *v, PatBinding::F(target.clone())),
        (FormPattern::FAt(s), FormPattern::FAt(t)) => s == t,
        (FormPattern::FSlash(pa, pb), FormPattern::FSlash(ta, tb))
        | (FormPattern::FBackslash(pa, pb), FormPattern::FBackslash(ta, tb))
        | (FormPattern::FDot(pa, pb), FormPattern::FDot(ta, tb)) => {
            match_fpat(pa, ta, b) && match_fpat(pb, tb, b)
        }
        _ => false,
    }
}

fn match_tpat(pat: &TermPattern, target: &TermPattern, b: &mut HashMap<char, PatBinding>) -> bool {
    match (pat, target) {
        (TermPattern::TVar(v), _) => pat_bind(b, *v, PatBinding::T(target.clone())),
        (TermPattern::POne(fp), TermPattern::POne(tf)) => match_fpat(fp, tf, b),
        (TermPattern::PComma(pl, pr), TermPattern::PComma(tl, tr)) => {
            match_tpat(pl, tl, b) && match_tpat(pr, tr, b)
        }
        _ => false,
    }
}

fn rule_subsumes(general: &StructRule, specific: &StructRule) -> bool {
    let mut b = HashMap::new();
    match_tpat(&general.lhs, &specific.lhs, &mut b) && match_tpat(&general.rhs, &specific.rhs, &mut b)
}

/// True iff every rule of `e1` is an instance of some rule of `e2`, so the
/// relation of `e1` is included in that of `e2`.
pub fn extends_ext(e1: &Extension, e2: &Extension) -> bool {
    e1.rules
        .iter()
        .all(|r1| e2.rules.iter().any(|r2| rule_subsumes(r2, r1)))
}

/// Union of two extensions.  The name is the built-in's if the combined
/// rule set coincides with one (so NLP + L is LP), otherwise
/// `<left>+<right>`; cut trust requires both sides to be trusted.
pub fn add_extension(e1: &Extension, e2: &Extension) -> Extension {
    let mut rules = e1.rules.clone();
    for r in &e2.rules {
        if !rules.contains(r) {
            rules.push(r.clone());
        }
    }
    let name = ["NL", "L", "NLP", "LP"]
        .iter()
        .find_map(|n| {
            let b = Extension::builtin(n).unwrap();
            same_rule_set(&rules, &b.rules).then(|| n.to_string())
        })
        .unwrap_or_else(|| format!("{}+{}", e1.name, e2.name));
    Extension::new(name, rules, e1.cond_cut && e2.cond_cut)
}

fn tpat_leaves(p: &TermPattern) -> Vec<&TermPattern> {
    match p {
        TermPattern::TVar(_) | TermPattern::POne(_) => vec![p],
        TermPattern::PComma(l, r) => {
            let mut out = tpat_leaves(l);
            out.extend(tpat_leaves(r));
            out
        }
    }
}

fn fpat_subtree(needle: &FormPattern, hay: &FormPattern) -> bool {
    if needle == hay {
        return true;
    }
    match hay {
        FormPattern::FVar(_) | FormPattern::FAt(_) => false,
        FormPattern::FSlash(a, b) | FormPattern::FBackslash(a, b) | FormPattern::FDot(a, b) => {
            fpat_subtree(needle, a) || fpat_subtree(needle, b)
        }
    }
}

// Every leaf of the left side must survive into the right side: a term
// variable as a leaf there too, a category leaf inside some category leaf.
// Then any category occurring in a rewritten subterm already occurred in
// the original, which is what the sub-formula property needs of SeqExt.
fn rule_preserves_leaves(r: &StructRule) -> bool {
    let rhs_leaves = tpat_leaves(&r.rhs);
    tpat_leaves(&r.lhs).iter().all(|leaf| match leaf {
        TermPattern::TVar(_) => rhs_leaves.contains(leaf),
        TermPattern::POne(fp) => rhs_leaves.iter().any(|rl| match rl {
            TermPattern::POne(rf) => fpat_subtree(fp, rf),
            _ => false,
        }),
        TermPattern::PComma(..) => unreachable!("leaves are not commas"),
    })
}

/// The structural check behind the `ext_sub` flag: do all rules of `e`
/// preserve their category leaves across the rewrite?
pub fn extension_sub_ok(e: &Extension) -> bool {
    e.rules.iter().all(rule_preserves_leaves)
}

/// Serialise an extension.
pub fn extension_to_json(e: &Extension) -> serde_json::Value {
    serde_json::json!({
        "name": e.name,
        "cond_cut": e.cond_cut,
        "rules": e.rules.iter().map(|r| serde_json::json!({
            "name": r.name,
            "lhs": render_term_pattern(&r.lhs),
            "rhs": render_term_pattern(&r.rhs),
        })).collect::<Vec<_>>(),
    })
}

fn json_str<'a>(v: &'a serde_json::Value, key: &str, what: &str) -> Result<&'a str, DecodeError> {
    v.get(key)
        .and_then(|s| s.as_str())
        .ok_or_else(|| DecodeError::new(format!("{what}: missing string field `{key}`")))
}

/// Deserialise an extension: `{"name": …, "cond_cut": …, "rules": [{"name",
/// "lhs", "rhs"}…]}`.  `cond_cut` defaults to false for user extensions.
pub fn extension_from_json(v: &serde_json::Value) -> Result<Extension, DecodeError> {
    let name = json_str(v, "name", "extension")?;
    let cond_cut = v.get("cond_cut").and_then(|b| b.as_bool()).unwrap_or(false);
    let rules_json = v
        .get("rules")
        .and_then(|r| r.as_array())
        .ok_or_else(|| DecodeError::new("extension: missing array field `rules`"))?;
    let mut rules = Vec::new();
    for rv in rules_json {
        let rule = StructRule::parse(
            json_str(rv, "name", "rule")?,
            json_str(rv, "lhs", "rule")?,
            json_str(rv, "rhs", "rule")?,
        )
        .map_err(|e| DecodeError::new(format!("rule pattern: {e}")))?;
        rules.push(rule);
    }
    Ok(Extension::new(name, rules, cond_cut))
}

/// One named category rewrite rule of an arrow extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowRule {
    pub name: String,
    pub lhs: FormPattern,
    pub rhs: FormPattern,
}

/// A structural extension at the category level: extra arrow axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowExtension {
    pub name: String,
    pub rules: Vec<ArrowRule>,
}

impl ArrowExtension {
    pub fn nl() -> ArrowExtension {
        to_arrow_ext(&Extension::nl())
    }

    pub fn l() -> ArrowExtension {
        to_arrow_ext(&Extension::l())
    }

    pub fn nlp() -> ArrowExtension {
        to_arrow_ext(&Extension::nlp())
    }

    pub fn lp() -> ArrowExtension {
        to_arrow_ext(&Extension::lp())
    }
}

fn delta_pattern(p: &TermPattern) -> FormPattern {
    match p {
        TermPattern::TVar(v) => FormPattern::FVar(*v),
        TermPattern::POne(fp) => fp.clone(),
        TermPattern::PComma(l, r) => {
            FormPattern::FDot(Box::new(delta_pattern(l)), Box::new(delta_pattern(r)))
        }
    }
}

/// The arrow extension induced by a term extension.  A term rule
/// `lhs -> rhs` becomes the arrow rule `delta(rhs) -> delta(lhs)`: the
/// sides swap because a structural step rewrites the antecedent, and an
/// antecedent strengthens leftward along arrows.
pub fn to_arrow_ext(e: &Extension) -> ArrowExtension {
    ArrowExtension {
        name: e.name.clone(),
        rules: e
            .rules
            .iter()
            .map(|r| ArrowRule {
                name: r.name.clone(),
                lhs: delta_pattern(&r.rhs),
                rhs: delta_pattern(&r.lhs),
            })
            .collect(),
    }
}

/// True iff some rule of `x` relates `f1` to `f2` as a ground instance.
pub fn arrow_relates(x: &ArrowExtension, f1: &Form, f2: &Form) -> bool {
    x.rules.iter().any(|r| arrow_relates_rule(r, f1, f2))
}

/// True iff the single arrow rule `r` relates `f1` to `f2` as a ground
/// instance (shared bindings across both sides).
pub(crate) fn arrow_relates_rule(r: &ArrowRule, f1: &Form, f2: &Form) -> bool {
    let mut b = Bindings::new();
    match_form(&r.lhs, f1, &mut b) && match_form(&r.rhs, f2, &mut b)
}

fn form_rewrites_one(from: &FormPattern, to: &FormPattern, f: &Form) -> Vec<Form> {
    let mut out = Vec::new();
    let mut b = Bindings::new();
    if match_form(from, f, &mut b) {
        if let Some(inst) = instantiate_form(to, &b) {
            out.push(inst);
        }
    }
    match f {
        Form::At(_) => {}
        Form::Slash(l, r) => {
            for l2 in form_rewrites_one(from, to, l) {
                out.push(Form::slash(l2, (**r).clone()));
            }
            for r2 in form_rewrites_one(from, to, r) {
                out.push(Form::slash((**l).clone(), r2));
            }
        }
        Form::Backslash(l, r) => {
            for l2 in form_rewrites_one(from, to, l) {
                out.push(Form::backslash(l2, (**r).clone()));
            }
            for r2 in form_rewrites_one(from, to, r) {
                out.push(Form::backslash((**l).clone(), r2));
            }
        }
        Form::Dot(l, r) => {
            for l2 in form_rewrites_one(from, to, l) {
                out.push(Form::dot(l2, (**r).clone()));
            }
            for r2 in form_rewrites_one(from, to, r) {
                out.push(Form::dot((**l).clone(), r2));
            }
        }
    }
    out
}

/// All categories reachable from `f` by rewriting one subformula with one
/// rule of `x`, applied in either direction.
pub fn arrow_rewrites(x: &ArrowExtension, f: &Form) -> Vec<Form> {
    let mut out = Vec::new();
    for r in &x.rules {
        for g in form_rewrites_one(&r.lhs, &r.rhs, f) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        for g in form_rewrites_one(&r.rhs, &r.lhs, f) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_category;

    fn t(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn f(src: &str) -> Form {
        parse_category(src).unwrap()
    }

    #[test]
    fn builtin_rule_sets() {
        assert!(Extension::nl().rules.is_empty());
        assert_eq!(Extension::l().rules.len(), 2);
        assert_eq!(Extension::nlp().rules.len(), 1);
        assert_eq!(Extension::lp().rules.len(), 3);
        for e in [Extension::nl(), Extension::l(), Extension::nlp(), Extension::lp()] {
            assert!(e.cond_cut, "{} is cut-trusted", e.name);
            assert!(e.ext_sub, "{} preserves leaves", e.name);
            assert_eq!(Extension::builtin(&e.name), Some(e.clone()));
        }
        assert_eq!(Extension::builtin("X"), None);
    }

    #[test]
    fn relates_matches_ground_instances() {
        let nlp = Extension::nlp();
        assert!(ext_relates(&nlp, &t("(x, y)"), &t("(y, x)")));
        assert!(ext_relates(&nlp, &t("((x, y), z)"), &t("(z, (x, y))")));
        assert!(!ext_relates(&nlp, &t("(x, y)"), &t("(x, y)")));
        assert!(!ext_relates(&Extension::nl(), &t("(x, y)"), &t("(y, x)")));

        let l = Extension::l();
        assert!(ext_relates(&l, &t("(a, (b, c))"), &t("((a, b), c)")));
        assert!(ext_relates(&l, &t("((a, b), c)"), &t("(a, (b, c))")));
        assert!(!ext_relates(&l, &t("(a, b)"), &t("(b, a)")));
    }

    #[test]
    fn rewrites_enumerate_positions_and_rules() {
        assert!(ext_rewrites(&Extension::nl(), &t("(x, y)")).is_empty());

        let nlp = Extension::nlp();
        let got = ext_rewrites(&nlp, &t("(x, (y, z))"));
        assert_eq!(
            got,
            vec![
                (t("((y, z), x)"), vec![], "comm".to_string()),
                (t("(x, (z, y))"), vec![crate::form::Step::Right], "comm".to_string()),
            ]
        );

        let l = Extension::l();
        let got = ext_rewrites(&l, &t("((a, b), c)"));
        assert_eq!(got, vec![(t("(a, (b, c))"), vec![], "assocR".to_string())]);
        // the inverse direction undoes it
        let inv = ext_rewrites_inv(&l, &t("(a, (b, c))"));
        assert!(inv.contains(&(t("((a, b), c)"), vec![], "assocR".to_string())));
    }

    #[test]
    fn subsumption_orders_the_builtins() {
        let (nl, l, nlp, lp) = (Extension::nl(), Extension::l(), Extension::nlp(), Extension::lp());
        assert!(extends_ext(&nl, &l));
        assert!(extends_ext(&nlp, &lp));
        assert!(extends_ext(&l, &lp));
        assert!(!extends_ext(&l, &nlp));
        assert!(!extends_ext(&lp, &l));
        assert!(extends_ext(&lp, &lp));

        // an instance, not just a renaming: (X, X) -> (X, X) is commutativity
        // applied to equal halves
        let degenerate = Extension::new(
            "deg",
            vec![StructRule::parse("dd", "(X, X)", "(X, X)").unwrap()],
            false,
        );
        assert!(extends_ext(&degenerate, &nlp));
        // but plain identity (X, Y) -> (X, Y) is not an instance of comm
        let ident = Extension::new(
            "id",
            vec![StructRule::parse("ii", "(X, Y)", "(X, Y)").unwrap()],
            false,
        );
        assert!(!extends_ext(&ident, &nlp));
    }

    #[test]
    fn union_recovers_lp() {
        let lp = add_extension(&Extension::nlp(), &Extension::l());
        assert_eq!(lp.name, "LP");
        assert!(same_rule_set(&lp.rules, &Extension::lp().rules));
        assert!(lp.cond_cut);

        let e = add_extension(&Extension::nl(), &Extension::nlp());
        assert_eq!(e.name, "NLP");

        let custom = Extension::new(
            "rot",
            vec![StructRule::parse("rot", "((A, B), C)", "((C, A), B)").unwrap()],
            false,
        );
        let u = add_extension(&Extension::l(), &custom);
        assert_eq!(u.name, "L+rot");
        assert!(!u.cond_cut);
    }

    #[test]
    fn leaf_preservation_flags() {
        assert!(extension_sub_ok(&Extension::lp()));
        // B is dropped on the right: rewriting loses a category leaf
        let dropping = Extension::new(
            "drop",
            vec![StructRule::parse("d", "(A, B)", "(A, A)").unwrap()],
            false,
        );
        assert!(!extension_sub_ok(&dropping));
        assert!(!dropping.ext_sub);
        // a concrete category may survive inside a larger leaf
        let widening = Extension::new(
            "widen",
            vec![StructRule::parse("w", "(A, s)", "(A, s/s)").unwrap()],
            false,
        );
        assert!(extension_sub_ok(&widening));
    }

    #[test]
    fn json_round_trip() {
        for e in [Extension::nl(), Extension::l(), Extension::nlp(), Extension::lp()] {
            let v = extension_to_json(&e);
            let back = extension_from_json(&v).unwrap();
            assert_eq!(back, e);
            assert_eq!(back.cond_cut, e.cond_cut);
        }
        let v = serde_json::json!({
            "name": "swap2",
            "rules": [{"name": "s", "lhs": "(A, (B, C))", "rhs": "(A, (C, B))"}],
        });
        let e = extension_from_json(&v).unwrap();
        assert_eq!(e.name, "swap2");
        assert!(!e.cond_cut);
        assert!(ext_relates(&e, &t("(x, (y, z))"), &t("(x, (z, y))")));
        assert!(extension_from_json(&serde_json::json!({"name": "x"})).is_err());
        assert!(extension_from_json(&serde_json::json!({
            "name": "x", "rules": [{"name": "r", "lhs": "(", "rhs": "A"}]
        }))
        .is_err());
    }

    #[test]
    fn arrow_translation_swaps_sides() {
        let nlp = ArrowExtension::nlp();
        assert_eq!(nlp.rules.len(), 1);
        // comm: (A, B) -> (B, A) becomes B.A -> A.B; as a relation that is
        // still "swap the product", matched on ground instances
        assert!(arrow_relates(&nlp, &f("x.y"), &f("y.x")));
        assert!(!arrow_relates(&nlp, &f("x.y"), &f("x.y")));
        assert!(ArrowExtension::nl().rules.is_empty());

        let l = ArrowExtension::l();
        assert!(arrow_relates(&l, &f("a.(b.c)"), &f("(a.b).c")));
        assert!(arrow_relates(&l, &f("(a.b).c"), &f("a.(b.c)")));

        // rewriting reaches inner positions and both directions
        let reachable = arrow_rewrites(&l, &f("x/(a.(b.c))"));
        assert!(reachable.contains(&f("x/((a.b).c)")));
    }
}
