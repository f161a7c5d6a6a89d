//! Sequents and first-class Gentzen proof trees.
//!
//! A [`Dertree`] is either a finished node `Der(sequent, rule, premises)`
//! or an unfinished leaf `Unf(sequent)`.  Finished nodes are *claims*;
//! [`check_node`] verifies one claim against its premises' head sequents
//! (searching for the positional witness the rule needs), and
//! [`check_proof`] verifies a whole tree, reporting the first failure in
//! preorder together with its child-index path.
//!
//! [`expansions`] produces every one-step backward expansion of a goal —
//! the same side conditions as the checker, run in reverse — which is what
//! the proof search in [`crate::search`] iterates, and [`refines`] decides
//! whether one tree is reachable from another by expanding unfinished
//! leaves with valid steps.

use crate::extension::{extension_sub_ok, DecodeError, Extension};
use crate::form::{degree_formula, is_sub_form_term, is_sub_formula, Form, Path, Step, Term};
use crate::replace::{positions, replace_at, subterm_at};
use crate::syntax::{parse_category, parse_term, render_category, render_sequent_text, render_term};
use serde_json::{json, Value};
use thiserror::Error;

/// A sequent `Γ ⊢ C` relative to a structural extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub ext: Extension,
    pub ante: Term,
    pub succ: Form,
}

impl Sequent {
    pub fn new(ext: Extension, ante: Term, succ: Form) -> Sequent {
        Sequent { ext, ante, succ }
    }
}

impl std::fmt::Display for Sequent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render_sequent_text(&self.ante, &self.succ))
    }
}

/// The nine rules of the sequent calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleName {
    SeqAxiom,
    RightSlash,
    RightBackslash,
    RightDot,
    LeftSlash,
    LeftBackslash,
    LeftDot,
    CutRule,
    SeqExt,
}

impl RuleName {
    pub const ALL: [RuleName; 9] = [
        RuleName::SeqAxiom,
        RuleName::RightSlash,
        RuleName::RightBackslash,
        RuleName::RightDot,
        RuleName::LeftSlash,
        RuleName::LeftBackslash,
        RuleName::LeftDot,
        RuleName::CutRule,
        RuleName::SeqExt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleName::SeqAxiom => "SeqAxiom",
            RuleName::RightSlash => "RightSlash",
            RuleName::RightBackslash => "RightBackslash",
            RuleName::RightDot => "RightDot",
            RuleName::LeftSlash => "LeftSlash",
            RuleName::LeftBackslash => "LeftBackslash",
            RuleName::LeftDot => "LeftDot",
            RuleName::CutRule => "CutRule",
            RuleName::SeqExt => "SeqExt",
        }
    }

    pub fn parse(s: &str) -> Option<RuleName> {
        RuleName::ALL.iter().copied().find(|r| r.as_str() == s)
    }
}

impl std::fmt::Display for RuleName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A proof tree with finished and unfinished nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Dertree {
    Der(Sequent, RuleName, Vec<Dertree>),
    Unf(Sequent),
}

impl Dertree {
    /// The sequent this (sub)tree claims.
    pub fn head(&self) -> &Sequent {
        match self {
            Dertree::Der(s, _, _) => s,
            Dertree::Unf(s) => s,
        }
    }

    /// The succedent of the head sequent.
    pub fn concl(&self) -> &Form {
        &self.head().succ
    }

    /// The antecedent of the head sequent.
    pub fn prems(&self) -> &Term {
        &self.head().ante
    }

    /// The extension of the head sequent.
    pub fn exten(&self) -> &Extension {
        &self.head().ext
    }
}

/// True iff the tree has no unfinished leaves.  Purely structural: a
/// finished node with a wrong rule is still "complete" — validity is
/// [`check_proof`]'s job.
pub fn is_complete(d: &Dertree) -> bool {
    match d {
        Dertree::Unf(_) => false,
        Dertree::Der(_, _, ch) => ch.iter().all(is_complete),
    }
}

/// Asked a question only finished proofs can answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the proof tree has unfinished leaves")]
pub struct UnfinishedProof;

/// Maximum degree of a cut formula in the tree; 0 iff cut-free.
pub fn degree_proof(d: &Dertree) -> Result<usize, UnfinishedProof> {
    if !is_complete(d) {
        return Err(UnfinishedProof);
    }
    fn deg(d: &Dertree) -> usize {
        match d {
            Dertree::Der(_, RuleName::CutRule, ch) => {
                let cut = ch.first().map(|h| degree_formula(h.concl())).unwrap_or(0);
                cut.max(ch.iter().map(deg).max().unwrap_or(0))
            }
            Dertree::Der(_, _, ch) => ch.iter().map(deg).max().unwrap_or(0),
            Dertree::Unf(_) => unreachable!("completeness checked above"),
        }
    }
    Ok(deg(d))
}

/// True iff no node uses CutRule.
pub fn is_cut_free(d: &Dertree) -> Result<bool, UnfinishedProof> {
    if !is_complete(d) {
        return Err(UnfinishedProof);
    }
    fn free(d: &Dertree) -> bool {
        match d {
            Dertree::Der(_, RuleName::CutRule, _) => false,
            Dertree::Der(_, _, ch) => ch.iter().all(free),
            Dertree::Unf(_) => unreachable!(),
        }
    }
    Ok(free(d))
}

/// How a node's rule instantiates: the positional data found by
/// [`check_node`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleWitness {
    Axiom,
    RightSlash,
    RightBackslash,
    RightDot,
    LeftSlash { path: Path, num: Form, den: Form },
    LeftBackslash { path: Path, num: Form, den: Form },
    LeftDot { path: Path, left: Form, right: Form },
    Cut { path: Path, formula: Form },
    Ext { path: Path, rule: String },
}

/// Why a node failed to check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unfinished leaf")]
    UnfinishedNode,
    #[error("{rule} expects {want} premises, found {found}")]
    Arity { rule: RuleName, want: usize, found: usize },
    #[error("premise extension differs from the node's")]
    ExtensionMismatch,
    #[error("{rule}: {msg}")]
    RuleMismatch { rule: RuleName, msg: String },
}

fn mismatch<T>(rule: RuleName, msg: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError::RuleMismatch { rule, msg: msg.into() })
}

fn want_arity(rule: RuleName, ch: &[Dertree], want: usize) -> Result<(), CheckError> {
    if ch.len() == want {
        Ok(())
    } else {
        Err(CheckError::Arity { rule, want, found: ch.len() })
    }
}

/// Verify one finished node against its premises' head sequents, returning
/// the positional witness that makes the rule fire.  Premises themselves
/// are not descended into — see [`check_proof`] for whole trees.
pub fn check_node(d: &Dertree) -> Result<RuleWitness, CheckError> {
    let (s, rule, ch) = match d {
        Dertree::Unf(_) => return Err(CheckError::UnfinishedNode),
        Dertree::Der(s, rule, ch) => (s, *rule, ch),
    };
    if ch.iter().any(|c| c.head().ext != s.ext) {
        return Err(CheckError::ExtensionMismatch);
    }
    match rule {
        RuleName::SeqAxiom => {
            want_arity(rule, ch, 0)?;
            if s.ante == Term::one(s.succ.clone()) {
                Ok(RuleWitness::Axiom)
            } else {
                mismatch(rule, "antecedent is not exactly the succedent")
            }
        }
        RuleName::RightSlash => {
            want_arity(rule, ch, 1)?;
            let Form::Slash(a, b) = &s.succ else {
                return mismatch(rule, "succedent is not a / category");
            };
            let prem = ch[0].head();
            let want = Term::comma(s.ante.clone(), Term::one((**b).clone()));
            if prem.ante == want && prem.succ == **a {
                Ok(RuleWitness::RightSlash)
            } else {
                mismatch(rule, "premise is not (Γ, B) |- A")
            }
        }
        RuleName::RightBackslash => {
            want_arity(rule, ch, 1)?;
            let Form::Backslash(b, a) = &s.succ else {
                return mismatch(rule, "succedent is not a \\ category");
            };
            let prem = ch[0].head();
            let want = Term::comma(Term::one((**b).clone()), s.ante.clone());
            if prem.ante == want && prem.succ == **a {
                Ok(RuleWitness::RightBackslash)
            } else {
                mismatch(rule, "premise is not (B, Γ) |- A")
            }
        }
        RuleName::RightDot => {
            want_arity(rule, ch, 2)?;
            let Form::Dot(a, b) = &s.succ else {
                return mismatch(rule, "succedent is not a product");
            };
            let Term::Comma(g, dl) = &s.ante else {
                return mismatch(rule, "antecedent is not a comma pair");
            };
            let (p1, p2) = (ch[0].head(), ch[1].head());
            if p1.ante == **g && p1.succ == **a && p2.ante == **dl && p2.succ == **b {
                Ok(RuleWitness::RightDot)
            } else {
                mismatch(rule, "premises do not split the antecedent at the root")
            }
        }
        RuleName::LeftSlash => {
            want_arity(rule, ch, 2)?;
            let (main, side) = (ch[0].head(), ch[1].head());
            if main.succ != s.succ {
                return mismatch(rule, "main premise changes the succedent");
            }
            for p in positions(&s.ante) {
                let Term::Comma(l, r) = subterm_at(&s.ante, &p).unwrap() else { continue };
                let Term::OneForm(Form::Slash(a, b)) = &**l else { continue };
                if **r == side.ante
                    && side.succ == **b
                    && replace_at(&s.ante, &p, Term::one((**a).clone())).unwrap() == main.ante
                {
                    return Ok(RuleWitness::LeftSlash {
                        path: p,
                        num: (**a).clone(),
                        den: (**b).clone(),
                    });
                }
            }
            mismatch(rule, "no occurrence (A/B, Δ) matches the premises")
        }
        RuleName::LeftBackslash => {
            want_arity(rule, ch, 2)?;
            let (main, side) = (ch[0].head(), ch[1].head());
            if main.succ != s.succ {
                return mismatch(rule, "main premise changes the succedent");
            }
            for p in positions(&s.ante) {
                let Term::Comma(l, r) = subterm_at(&s.ante, &p).unwrap() else { continue };
                let Term::OneForm(Form::Backslash(b, a)) = &**r else { continue };
                if **l == side.ante
                    && side.succ == **b
                    && replace_at(&s.ante, &p, Term::one((**a).clone())).unwrap() == main.ante
                {
                    return Ok(RuleWitness::LeftBackslash {
                        path: p,
                        num: (**a).clone(),
                        den: (**b).clone(),
                    });
                }
            }
            mismatch(rule, "no occurrence (Δ, B\\A) matches the premise")
        }
        RuleName::LeftDot => {
            want_arity(rule, ch, 1)?;
            let prem = ch[0].head();
            if prem.succ != s.succ {
                return mismatch(rule, "premise changes the succedent");
            }
            for p in positions(&s.ante) {
                let Term::OneForm(Form::Dot(a, b)) = subterm_at(&s.ante, &p).unwrap() else {
                    continue;
                };
                let pair = Term::comma(Term::one((**a).clone()), Term::one((**b).clone()));
                if replace_at(&s.ante, &p, pair).unwrap() == prem.ante {
                    return Ok(RuleWitness::LeftDot {
                        path: p,
                        left: (**a).clone(),
                        right: (**b).clone(),
                    });
                }
            }
            mismatch(rule, "no product leaf expands to the premise")
        }
        RuleName::CutRule => {
            want_arity(rule, ch, 2)?;
            let (cut, main) = (ch[0].head(), ch[1].head());
            if main.succ != s.succ {
                return mismatch(rule, "main premise changes the succedent");
            }
            for p in positions(&s.ante) {
                if subterm_at(&s.ante, &p).unwrap() == &cut.ante
                    && replace_at(&s.ante, &p, Term::one(cut.succ.clone())).unwrap() == main.ante
                {
                    return Ok(RuleWitness::Cut { path: p, formula: cut.succ.clone() });
                }
            }
            mismatch(rule, "no occurrence of the cut premise's antecedent matches")
        }
        RuleName::SeqExt => {
            want_arity(rule, ch, 1)?;
            let prem = ch[0].head();
            if prem.succ != s.succ {
                return mismatch(rule, "premise changes the succedent");
            }
            for p in positions(&s.ante) {
                let delta_prime = subterm_at(&s.ante, &p).unwrap();
                let Ok(delta) = subterm_at(&prem.ante, &p) else { continue };
                if replace_at(&s.ante, &p, delta.clone()).unwrap() != prem.ante {
                    continue;
                }
                if let Some(r) = s
                    .ext
                    .rules
                    .iter()
                    .find(|r| crate::extension::ext_relates_rule(r, delta, delta_prime))
                {
                    return Ok(RuleWitness::Ext { path: p, rule: r.name.clone() });
                }
            }
            mismatch(rule, "no structural rule bridges the premise")
        }
    }
}

/// A failed check, located by child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid node at {}: {error}", fmt_tree_path(at))]
pub struct ProofCheckError {
    /// Child-index path from the root to the offending node.
    pub at: Vec<usize>,
    pub error: CheckError,
}

pub(crate) fn fmt_tree_path(at: &[usize]) -> String {
    if at.is_empty() {
        "the root".to_string()
    } else {
        format!(
            "path {}",
            at.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
        )
    }
}

/// Verify a whole tree: every node must check and no leaf may be
/// unfinished.  Reports the first failure in preorder.
pub fn check_proof(d: &Dertree) -> Result<(), ProofCheckError> {
    fn walk(d: &Dertree, at: &mut Vec<usize>) -> Result<(), ProofCheckError> {
        check_node(d).map_err(|error| ProofCheckError { at: at.clone(), error })?;
        if let Dertree::Der(_, _, ch) = d {
            for (i, c) in ch.iter().enumerate() {
                at.push(i);
                walk(c, at)?;
                at.pop();
            }
        }
        Ok(())
    }
    walk(d, &mut Vec::new())
}

fn unf(ext: &Extension, ante: Term, succ: Form) -> Dertree {
    Dertree::Unf(Sequent::new(ext.clone(), ante, succ))
}

/// One-step backward expansions of the goal `s` for a single rule.
/// CutRule yields nothing here; see [`expansions`].
pub(crate) fn expansions_for(s: &Sequent, rule: RuleName) -> Vec<Dertree> {
    let mut out = Vec::new();
    match rule {
        RuleName::SeqAxiom => {
            if s.ante == Term::one(s.succ.clone()) {
                out.push(Dertree::Der(s.clone(), rule, Vec::new()));
            }
        }
        RuleName::RightSlash => {
            if let Form::Slash(a, b) = &s.succ {
                let child = unf(
                    &s.ext,
                    Term::comma(s.ante.clone(), Term::one((**b).clone())),
                    (**a).clone(),
                );
                out.push(Dertree::Der(s.clone(), rule, vec![child]));
            }
        }
        RuleName::RightBackslash => {
            if let Form::Backslash(b, a) = &s.succ {
                let child = unf(
                    &s.ext,
                    Term::comma(Term::one((**b).clone()), s.ante.clone()),
                    (**a).clone(),
                );
                out.push(Dertree::Der(s.clone(), rule, vec![child]));
            }
        }
        RuleName::RightDot => {
            if let (Form::Dot(a, b), Term::Comma(g, d)) = (&s.succ, &s.ante) {
                let c1 = unf(&s.ext, (**g).clone(), (**a).clone());
                let c2 = unf(&s.ext, (**d).clone(), (**b).clone());
                out.push(Dertree::Der(s.clone(), rule, vec![c1, c2]));
            }
        }
        RuleName::LeftSlash => {
            for p in positions(&s.ante) {
                let Term::Comma(l, r) = subterm_at(&s.ante, &p).unwrap() else { continue };
                let Term::OneForm(Form::Slash(a, b)) = &**l else { continue };
                let main = replace_at(&s.ante, &p, Term::one((**a).clone())).unwrap();
                out.push(Dertree::Der(
                    s.clone(),
                    rule,
                    vec![
                        unf(&s.ext, main, s.succ.clone()),
                        unf(&s.ext, (**r).clone(), (**b).clone()),
                    ],
                ));
            }
        }
        RuleName::LeftBackslash => {
            for p in positions(&s.ante) {
                let Term::Comma(l, r) = subterm_at(&s.ante, &p).unwrap() else { continue };
                let Term::OneForm(Form::Backslash(b, a)) = &**r else { continue };
                let main = replace_at(&s.ante, &p, Term::one((**a).clone())).unwrap();
                out.push(Dertree::Der(
                    s.clone(),
                    rule,
                    vec![
                        unf(&s.ext, main, s.succ.clone()),
                        unf(&s.ext, (**l).clone(), (**b).clone()),
                    ],
                ));
            }
        }
        RuleName::LeftDot => {
            for p in positions(&s.ante) {
                let Term::OneForm(Form::Dot(a, b)) = subterm_at(&s.ante, &p).unwrap() else {
                    continue;
                };
                let pair = Term::comma(Term::one((**a).clone()), Term::one((**b).clone()));
                let child = replace_at(&s.ante, &p, pair).unwrap();
                out.push(Dertree::Der(
                    s.clone(),
                    rule,
                    vec![unf(&s.ext, child, s.succ.clone())],
                ));
            }
        }
        RuleName::SeqExt => {
            for (t2, _, _) in crate::extension::ext_rewrites_inv(&s.ext, &s.ante) {
                let cand = Dertree::Der(
                    s.clone(),
                    rule,
                    vec![unf(&s.ext, t2, s.succ.clone())],
                );
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        RuleName::CutRule => {}
    }
    out
}

/// Backward CutRule expansions: cut any subterm against any candidate
/// formula.  Finite, and only as large as the candidate list.
pub(crate) fn cut_expansions(s: &Sequent, cut_candidates: &[Form]) -> Vec<Dertree> {
    let mut out = Vec::new();
    for p in positions(&s.ante) {
        let delta = subterm_at(&s.ante, &p).unwrap().clone();
        for a in cut_candidates {
            let main = replace_at(&s.ante, &p, Term::one(a.clone())).unwrap();
            out.push(Dertree::Der(
                s.clone(),
                RuleName::CutRule,
                vec![
                    unf(&s.ext, delta.clone(), a.clone()),
                    unf(&s.ext, main, s.succ.clone()),
                ],
            ));
        }
    }
    out
}

/// All one-step backward expansions of `Unf(s)`: for each applicable rule,
/// a finished node over unfinished premises.  Every result passes
/// [`check_node`].  CutRule fires only when `allow_cut`, instantiating the
/// cut formula over `cut_candidates`.
pub fn expansions(s: &Sequent, allow_cut: bool, cut_candidates: &[Form]) -> Vec<Dertree> {
    let mut out = Vec::new();
    for rule in [
        RuleName::SeqAxiom,
        RuleName::RightSlash,
        RuleName::RightBackslash,
        RuleName::RightDot,
        RuleName::LeftSlash,
        RuleName::LeftBackslash,
        RuleName::LeftDot,
        RuleName::SeqExt,
    ] {
        out.extend(expansions_for(s, rule));
    }
    if allow_cut {
        out.extend(cut_expansions(s, cut_candidates));
    }
    out
}

/// `q` is an immediate premise of the valid node `d`.
pub fn is_subproof_one(q: &Dertree, d: &Dertree) -> bool {
    match d {
        Dertree::Der(_, _, ch) => check_node(d).is_ok() && ch.iter().any(|c| c == q),
        Dertree::Unf(_) => false,
    }
}

/// `q` is reachable from `d` by descending through valid nodes
/// (reflexively).
pub fn is_subproof(q: &Dertree, d: &Dertree) -> bool {
    if q == d {
        return true;
    }
    match d {
        Dertree::Der(_, _, ch) => {
            check_node(d).is_ok() && ch.iter().any(|c| is_subproof(q, c))
        }
        Dertree::Unf(_) => false,
    }
}

/// Why the sub-formula property could not be certified.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubformulaError {
    #[error("the given subtree is not a subproof of the proof")]
    NotSubproof,
    #[error("the proof has unfinished leaves")]
    Unfinished,
    #[error("the proof is not cut-free")]
    NotCutFree,
    #[error("extension `{0}` does not preserve category leaves across rewrites")]
    ExtensionNotSub(String),
    #[error("category {0} of the subproof is not a sub-formula of the end-sequent")]
    Violation(String),
}

/// The sub-formula property, checked: every category leaf of `q`'s head
/// sequent occurs as a sub-formula inside `p`'s end-sequent.  Preconditions
/// — `q` a subproof of `p`, `p` cut-free, and a leaf-preserving extension —
/// are verified and reported individually.
pub fn check_subformula_property(q: &Dertree, p: &Dertree) -> Result<(), SubformulaError> {
    match is_cut_free(p) {
        Err(UnfinishedProof) => return Err(SubformulaError::Unfinished),
        Ok(false) => return Err(SubformulaError::NotCutFree),
        Ok(true) => {}
    }
    if !extension_sub_ok(p.exten()) {
        return Err(SubformulaError::ExtensionNotSub(p.exten().name.clone()));
    }
    if !is_subproof(q, p) {
        return Err(SubformulaError::NotSubproof);
    }
    let end = p.head();
    let mut candidates: Vec<&Form> = crate::form::term_forms(&q.head().ante);
    candidates.push(&q.head().succ);
    for f in candidates {
        if !is_sub_form_term(f, &end.ante) && !is_sub_formula(f, &end.succ) {
            return Err(SubformulaError::Violation(render_category(f)));
        }
    }
    Ok(())
}

// A tree is reachable from a bare unfinished leaf iff every finished node
// in it checks.
fn grows_from_leaf(d: &Dertree) -> bool {
    match d {
        Dertree::Unf(_) => true,
        Dertree::Der(_, _, ch) => check_node(d).is_ok() && ch.iter().all(grows_from_leaf),
    }
}

/// Can `to` be obtained from `from` by repeatedly expanding unfinished
/// leaves with valid rule applications?  The finished part of `from` must
/// be preserved verbatim; everything grown below its unfinished leaves
/// must check.
pub fn refines(from: &Dertree, to: &Dertree) -> bool {
    match (from, to) {
        (Dertree::Unf(s), _) => to.head() == s && grows_from_leaf(to),
        (Dertree::Der(..), Dertree::Unf(_)) => false,
        (Dertree::Der(s1, r1, ch1), Dertree::Der(s2, r2, ch2)) => {
            s1 == s2
                && r1 == r2
                && ch1.len() == ch2.len()
                && ch1.iter().zip(ch2).all(|(a, b)| refines(a, b))
        }
    }
}

pub fn sequent_to_json(s: &Sequent) -> Value {
    json!({
        "ext": s.ext.name,
        "ante": render_term(&s.ante),
        "succ": render_category(&s.succ),
    })
}

/// Serialise a tree.  Extensions are stored by name only.
pub fn dertree_to_json(d: &Dertree) -> Value {
    match d {
        Dertree::Der(s, rule, ch) => json!({
            "der": {
                "seq": sequent_to_json(s),
                "rule": rule.as_str(),
                "children": ch.iter().map(dertree_to_json).collect::<Vec<_>>(),
            }
        }),
        Dertree::Unf(s) => json!({ "unf": { "seq": sequent_to_json(s) } }),
    }
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value, DecodeError> {
    v.get(key)
        .ok_or_else(|| DecodeError::new(format!("{what}: missing field `{key}`")))
}

fn str_field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a str, DecodeError> {
    field(v, key, what)?
        .as_str()
        .ok_or_else(|| DecodeError::new(format!("{what}: field `{key}` is not a string")))
}

/// Decode a sequent, resolving the extension name through `resolve`.
pub fn sequent_from_json(
    v: &Value,
    resolve: &dyn Fn(&str) -> Option<Extension>,
) -> Result<Sequent, DecodeError> {
    let name = str_field(v, "ext", "sequent")?;
    let ext = resolve(name)
        .ok_or_else(|| DecodeError::new(format!("unknown extension `{name}`")))?;
    let ante = parse_term(str_field(v, "ante", "sequent")?)?;
    let succ = parse_category(str_field(v, "succ", "sequent")?)?;
    Ok(Sequent::new(ext, ante, succ))
}

/// Decode a tree serialised by [`dertree_to_json`].  Extension names are
/// resolved through `resolve`; [`Extension::builtin`] covers the built-ins.
pub fn dertree_from_json(
    v: &Value,
    resolve: &dyn Fn(&str) -> Option<Extension>,
) -> Result<Dertree, DecodeError> {
    if let Some(der) = v.get("der") {
        let seq = sequent_from_json(field(der, "seq", "der node")?, resolve)?;
        let rule_name = str_field(der, "rule", "der node")?;
        let rule = RuleName::parse(rule_name)
            .ok_or_else(|| DecodeError::new(format!("unknown rule `{rule_name}`")))?;
        let children = field(der, "children", "der node")?
            .as_array()
            .ok_or_else(|| DecodeError::new("der node: `children` is not an array"))?
            .iter()
            .map(|c| dertree_from_json(c, resolve))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Dertree::Der(seq, rule, children))
    } else if let Some(unf) = v.get("unf") {
        Ok(Dertree::Unf(sequent_from_json(field(unf, "seq", "unf node")?, resolve)?))
    } else {
        Err(DecodeError::new("expected a `der` or `unf` node"))
    }
}

/// Convenience: serialise a path as `["L","R",…]`.
pub fn path_to_json(p: &[Step]) -> Value {
    Value::Array(
        p.iter()
            .map(|s| Value::String(match s {
                Step::Left => "L".to_string(),
                Step::Right => "R".to_string(),
            }))
            .collect(),
    )
}

/// Decode a `["L","R",…]` path.
pub fn path_from_json(v: &Value) -> Result<Path, DecodeError> {
    let arr = v
        .as_array()
        .ok_or_else(|| DecodeError::new("path: expected an array of \"L\"/\"R\""))?;
    arr.iter()
        .map(|s| match s.as_str() {
            Some("L") => Ok(Step::Left),
            Some("R") => Ok(Step::Right),
            _ => Err(DecodeError::new("path: expected \"L\" or \"R\"")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn seq(ext: &Extension, src: &str) -> Sequent {
        let (ante, succ) = parse_sequent(src).unwrap();
        Sequent::new(ext.clone(), ante, succ)
    }

    fn ax(ext: &Extension, src: &str) -> Dertree {
        Dertree::Der(seq(ext, src), RuleName::SeqAxiom, Vec::new())
    }

    #[test]
    fn axiom_and_right_rules_check() {
        let nl = Extension::nl();
        assert_eq!(check_node(&ax(&nl, "a |- a")), Ok(RuleWitness::Axiom));
        assert!(matches!(
            check_node(&ax(&nl, "a |- b")),
            Err(CheckError::RuleMismatch { .. })
        ));

        let d = Dertree::Der(
            seq(&nl, "a |- b/c"),
            RuleName::RightSlash,
            vec![Dertree::Unf(seq(&nl, "(a, c) |- b"))],
        );
        assert_eq!(check_node(&d), Ok(RuleWitness::RightSlash));

        let d = Dertree::Der(
            seq(&nl, "a |- c\\b"),
            RuleName::RightBackslash,
            vec![Dertree::Unf(seq(&nl, "(c, a) |- b"))],
        );
        assert_eq!(check_node(&d), Ok(RuleWitness::RightBackslash));

        let d = Dertree::Der(
            seq(&nl, "(a, b) |- a.b"),
            RuleName::RightDot,
            vec![Dertree::Unf(seq(&nl, "a |- a")), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert_eq!(check_node(&d), Ok(RuleWitness::RightDot));

        // wrong split
        let d = Dertree::Der(
            seq(&nl, "(a, b) |- b.a"),
            RuleName::RightDot,
            vec![Dertree::Unf(seq(&nl, "a |- a")), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert!(check_node(&d).is_err());
    }

    #[test]
    fn left_rules_find_their_occurrence() {
        let nl = Extension::nl();
        // (a/b, b) |- a by LeftSlash at the root
        let d = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![Dertree::Unf(seq(&nl, "a |- a")), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert_eq!(
            check_node(&d),
            Ok(RuleWitness::LeftSlash {
                path: vec![],
                num: Form::at("a"),
                den: Form::at("b"),
            })
        );

        // nested occurrence: (x, (a/b, b)) |- succedent of the main premise
        let d = Dertree::Der(
            seq(&nl, "(x, (a/b, b)) |- c"),
            RuleName::LeftSlash,
            vec![Dertree::Unf(seq(&nl, "(x, a) |- c")), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert_eq!(
            check_node(&d),
            Ok(RuleWitness::LeftSlash {
                path: vec![Step::Right],
                num: Form::at("a"),
                den: Form::at("b"),
            })
        );

        let d = Dertree::Der(
            seq(&nl, "(b, b\\a) |- a"),
            RuleName::LeftBackslash,
            vec![Dertree::Unf(seq(&nl, "a |- a")), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert!(matches!(check_node(&d), Ok(RuleWitness::LeftBackslash { .. })));

        let d = Dertree::Der(
            seq(&nl, "a.b |- c"),
            RuleName::LeftDot,
            vec![Dertree::Unf(seq(&nl, "(a, b) |- c"))],
        );
        assert_eq!(
            check_node(&d),
            Ok(RuleWitness::LeftDot {
                path: vec![],
                left: Form::at("a"),
                right: Form::at("b"),
            })
        );
    }

    #[test]
    fn cut_and_ext_check() {
        let l = Extension::l();
        // cut b into (a/b, c) at the right leaf
        let d = Dertree::Der(
            seq(&l, "(a/b, c) |- a"),
            RuleName::CutRule,
            vec![
                Dertree::Unf(seq(&l, "c |- b")),
                Dertree::Unf(seq(&l, "(a/b, b) |- a")),
            ],
        );
        assert_eq!(
            check_node(&d),
            Ok(RuleWitness::Cut { path: vec![Step::Right], formula: Form::at("b") })
        );

        let d = Dertree::Der(
            seq(&l, "((x, y), z) |- c"),
            RuleName::SeqExt,
            vec![Dertree::Unf(seq(&l, "(x, (y, z)) |- c"))],
        );
        assert_eq!(
            check_node(&d),
            Ok(RuleWitness::Ext { path: vec![], rule: "assocL".to_string() })
        );

        // NL has no structural rules
        let nl = Extension::nl();
        let d = Dertree::Der(
            seq(&nl, "((x, y), z) |- c"),
            RuleName::SeqExt,
            vec![Dertree::Unf(seq(&nl, "(x, (y, z)) |- c"))],
        );
        assert!(check_node(&d).is_err());

        // extensions must agree between node and premise
        let d = Dertree::Der(
            seq(&l, "((x, y), z) |- c"),
            RuleName::SeqExt,
            vec![Dertree::Unf(seq(&Extension::lp(), "(x, (y, z)) |- c"))],
        );
        assert_eq!(check_node(&d), Err(CheckError::ExtensionMismatch));
    }

    #[test]
    fn check_proof_reports_first_preorder_failure() {
        let nl = Extension::nl();
        let good = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), ax(&nl, "b |- b")],
        );
        assert_eq!(check_proof(&good), Ok(()));

        let bad = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), ax(&nl, "c |- b")],
        );
        let err = check_proof(&bad).unwrap_err();
        assert_eq!(err.at, Vec::<usize>::new()); // the root's occurrence search fails first

        let bad_leaf = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), Dertree::Der(seq(&nl, "b |- b"), RuleName::RightSlash, vec![])],
        );
        let err = check_proof(&bad_leaf).unwrap_err();
        assert_eq!(err.at, vec![1]);

        let unfinished = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        let err = check_proof(&unfinished).unwrap_err();
        assert_eq!(err.at, vec![1]);
        assert_eq!(err.error, CheckError::UnfinishedNode);
    }

    #[test]
    fn expansion_examples() {
        let nl = Extension::nl();
        // a product sequent has both the axiom and the left-dot expansion
        let s = seq(&nl, "a.b |- a.b");
        let exps = expansions(&s, false, &[]);
        let rules: Vec<RuleName> = exps
            .iter()
            .map(|d| match d {
                Dertree::Der(_, r, _) => *r,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rules, vec![RuleName::SeqAxiom, RuleName::LeftDot]);
        for e in &exps {
            assert!(check_node(e).is_ok(), "expansion must check");
        }

        // no rule applies to an atomic mismatch
        assert!(expansions(&seq(&nl, "a |- b"), false, &[]).is_empty());

        // cut candidates multiply over positions
        let cuts = expansions(&seq(&nl, "(a, b) |- c"), true, &[Form::at("x")]);
        assert_eq!(cuts.len(), 3); // three positions, one candidate

        let l = Extension::l();
        let s = seq(&l, "((x, y), z) |- c");
        let exps = expansions(&s, false, &[]);
        assert!(exps.iter().any(|d| matches!(d, Dertree::Der(_, RuleName::SeqExt, _))));
    }

    #[test]
    fn degree_and_cut_freedom() {
        let nl = Extension::nl();
        let axiom = ax(&nl, "a |- a");
        assert_eq!(degree_proof(&axiom), Ok(0));
        assert_eq!(is_cut_free(&axiom), Ok(true));

        let cut = Dertree::Der(
            seq(&nl, "a/b |- a/b"),
            RuleName::CutRule,
            vec![ax(&nl, "a/b |- a/b"), ax(&nl, "a/b |- a/b")],
        );
        assert_eq!(degree_proof(&cut), Ok(2));
        assert_eq!(is_cut_free(&cut), Ok(false));

        let unfinished = Dertree::Unf(seq(&nl, "a |- a"));
        assert_eq!(degree_proof(&unfinished), Err(UnfinishedProof));
        assert_eq!(is_cut_free(&unfinished), Err(UnfinishedProof));
        assert!(!is_complete(&unfinished));
        assert!(is_complete(&axiom));
    }

    #[test]
    fn refinement_grows_unfinished_leaves() {
        let nl = Extension::nl();
        let goal = seq(&nl, "(a/b, b) |- a");
        let start = Dertree::Unf(goal.clone());
        let finished = Dertree::Der(
            goal.clone(),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), ax(&nl, "b |- b")],
        );
        let half = Dertree::Der(
            goal.clone(),
            RuleName::LeftSlash,
            vec![ax(&nl, "a |- a"), Dertree::Unf(seq(&nl, "b |- b"))],
        );
        assert!(refines(&start, &start));
        assert!(refines(&start, &half));
        assert!(refines(&start, &finished));
        assert!(refines(&half, &finished));
        assert!(!refines(&finished, &half));
        assert!(!refines(&start, &ax(&nl, "a |- a")));

        // an invalid grown node is not a refinement
        let invalid = Dertree::Der(goal, RuleName::RightSlash, vec![]);
        assert!(!refines(&start, &invalid));
    }

    #[test]
    fn subproofs_and_subformula_property() {
        let nl = Extension::nl();
        let leaf_a = ax(&nl, "a |- a");
        let leaf_b = ax(&nl, "b |- b");
        let root = Dertree::Der(
            seq(&nl, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![leaf_a.clone(), leaf_b.clone()],
        );
        assert!(is_subproof_one(&leaf_a, &root));
        assert!(is_subproof(&leaf_b, &root));
        assert!(is_subproof(&root, &root));
        assert!(!is_subproof_one(&root, &leaf_a));

        assert_eq!(check_subformula_property(&leaf_a, &root), Ok(()));
        assert_eq!(check_subformula_property(&root, &root), Ok(()));
        assert_eq!(
            check_subformula_property(&leaf_a, &leaf_b),
            Err(SubformulaError::NotSubproof)
        );
    }

    #[test]
    fn json_round_trip_is_identity() {
        let l = Extension::l();
        let d = Dertree::Der(
            seq(&l, "(a/b, b) |- a"),
            RuleName::LeftSlash,
            vec![ax(&l, "a |- a"), Dertree::Unf(seq(&l, "b |- b"))],
        );
        let v = dertree_to_json(&d);
        let back = dertree_from_json(&v, &Extension::builtin).unwrap();
        assert_eq!(back, d);

        assert!(dertree_from_json(&json!({"x": 1}), &Extension::builtin).is_err());
        let unknown = json!({"unf": {"seq": {"ext": "QQ", "ante": "a", "succ": "a"}}});
        assert!(dertree_from_json(&unknown, &Extension::builtin).is_err());
    }
}
