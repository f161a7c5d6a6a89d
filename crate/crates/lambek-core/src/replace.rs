//! Positional subterm access and the `replace` relation.
//!
//! The deduction rules are stated in terms of "Γ' is Γ with one occurrence
//! of Δ replaced by Δ'".  Here that relation is made positional: a
//! [`Path`] addresses the occurrence, [`replace_at`] rewrites it, and
//! [`holds_replace`] asks whether any position witnesses the relation.
//!
//! [`decide_replace_comma_dot`] decides the reflexive–transitive closure of
//! the single-step "collapse one comma pair of categories into a product"
//! relation used by the LeftDot rule; its correctness against a
//! breadth-first closure oracle is part of the acceptance suite.

use crate::form::{delta_translation, Form, Path, Step, Term};
use thiserror::Error;

/// A path step that does not exist in the term being addressed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path step {index} ({step:?}) descends into a category leaf")]
pub struct PathError {
    /// Index of the first failing step within the path.
    pub index: usize,
    pub step: Step,
}

/// The subterm of `t` at `p`.
pub fn subterm_at<'a>(t: &'a Term, p: &[Step]) -> Result<&'a Term, PathError> {
    let mut cur = t;
    for (index, &step) in p.iter().enumerate() {
        match (cur, step) {
            (Term::Comma(l, _), Step::Left) => cur = l,
            (Term::Comma(_, r), Step::Right) => cur = r,
            (Term::OneForm(_), step) => return Err(PathError { index, step }),
        }
    }
    Ok(cur)
}

/// `t` with the subterm at `p` replaced by `new`.
pub fn replace_at(t: &Term, p: &[Step], new: Term) -> Result<Term, PathError> {
    fn go(t: &Term, p: &[Step], index: usize, new: Term) -> Result<Term, PathError> {
        match p.split_first() {
            None => Ok(new),
            Some((&step, rest)) => match (t, step) {
                (Term::Comma(l, r), Step::Left) => {
                    Ok(Term::comma(go(l, rest, index + 1, new)?, (**r).clone()))
                }
                (Term::Comma(l, r), Step::Right) => {
                    Ok(Term::comma((**l).clone(), go(r, rest, index + 1, new)?))
                }
                (Term::OneForm(_), step) => Err(PathError { index, step }),
            },
        }
    }
    go(t, p, 0, new)
}

/// All positions of `t`, in preorder (a node before its children, left
/// before right).
pub fn positions(t: &Term) -> Vec<Path> {
    let mut out = Vec::new();
    fn walk(t: &Term, prefix: &mut Path, out: &mut Vec<Path>) {
        out.push(prefix.clone());
        if let Term::Comma(l, r) = t {
            prefix.push(Step::Left);
            walk(l, prefix, out);
            prefix.pop();
            prefix.push(Step::Right);
            walk(r, prefix, out);
            prefix.pop();
        }
    }
    walk(t, &mut Vec::new(), &mut out);
    out
}

/// The positions where `needle` occurs as a subterm of `t`, in preorder.
pub fn occurrences(t: &Term, needle: &Term) -> Vec<Path> {
    positions(t)
        .into_iter()
        .filter(|p| subterm_at(t, p).expect("position enumerated from t") == needle)
        .collect()
}

/// True iff `t2` is `t1` with one occurrence of `d1` replaced by `d2`:
/// some position carries `d1` in `t1` and rewriting it yields `t2`.
pub fn holds_replace(t1: &Term, t2: &Term, d1: &Term, d2: &Term) -> bool {
    occurrences(t1, d1)
        .iter()
        .any(|p| replace_at(t1, p, d2.clone()).expect("occurrence path") == *t2)
}

/// One step of comma-pair collapse: every term obtained from `t` by
/// rewriting a single `(OneForm A, OneForm B)` subterm to `OneForm (A.B)`.
pub fn comma_dot_steps(t: &Term) -> Vec<Term> {
    positions(t)
        .into_iter()
        .filter_map(|p| {
            let sub = subterm_at(t, &p).expect("position enumerated from t");
            if let Term::Comma(l, r) = sub {
                if let (Term::OneForm(a), Term::OneForm(b)) = (&**l, &**r) {
                    let collapsed = Term::one(Form::dot(a.clone(), b.clone()));
                    return Some(replace_at(t, &p, collapsed).expect("occurrence path"));
                }
            }
            None
        })
        .collect()
}

/// Decide the reflexive–transitive closure of [`comma_dot_steps`]: can
/// `t1` be turned into `t2` by collapsing comma pairs, zero or more times?
///
/// Every step keeps the delta translation fixed and only merges whole
/// subtrees into single leaves, so the closure decomposes structurally:
/// a comma node of `t2` must be reached componentwise, and a leaf of `t2`
/// must be the full collapse of the corresponding subtree of `t1`.
pub fn decide_replace_comma_dot(t1: &Term, t2: &Term) -> bool {
    match (t1, t2) {
        (Term::OneForm(g), Term::OneForm(f)) => g == f,
        (Term::Comma(a, b), Term::Comma(c, d)) => {
            decide_replace_comma_dot(a, c) && decide_replace_comma_dot(b, d)
        }
        (Term::Comma(..), Term::OneForm(f)) => delta_translation(t1) == *f,
        (Term::OneForm(_), Term::Comma(..)) => false,
    }
}
