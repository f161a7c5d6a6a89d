//! Categories, antecedent terms, and the positional vocabulary shared by
//! every deduction system in this crate.
//!
//! A [`Form`] is a syntactic category: an atom, a rightward functor `A / B`,
//! a leftward functor `B \ A`, or a product `A . B`.  A [`Term`] is a
//! binary-bracketed sequence of categories — the antecedent of a sequent —
//! where `Comma` marks the word boundary that `Dot` internalises.  The
//! [`delta_translation`] homomorphism collapses a term into the single
//! category obtained by reading every comma as a product.

use std::fmt;

/// A syntactic category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    /// An atomic category such as `S`, `np`, or `inf`.
    At(String),
    /// `A / B`: looks for a `B` on its right to form an `A`.
    Slash(Box<Form>, Box<Form>),
    /// `B \ A`: looks for a `B` on its left to form an `A`.
    Backslash(Box<Form>, Box<Form>),
    /// `A . B`: the product (concatenation) of an `A` and a `B`.
    Dot(Box<Form>, Box<Form>),
}

impl Form {
    pub fn at(name: impl Into<String>) -> Form {
        Form::At(name.into())
    }

    pub fn slash(num: Form, den: Form) -> Form {
        Form::Slash(Box::new(num), Box::new(den))
    }

    /// `backslash(den, num)` is the category written `den \ num`.
    pub fn backslash(den: Form, num: Form) -> Form {
        Form::Backslash(Box::new(den), Box::new(num))
    }

    pub fn dot(left: Form, right: Form) -> Form {
        Form::Dot(Box::new(left), Box::new(right))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_category(self))
    }
}

/// A binary-bracketed antecedent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    OneForm(Form),
    Comma(Box<Term>, Box<Term>),
}

impl Term {
    pub fn one(f: Form) -> Term {
        Term::OneForm(f)
    }

    pub fn comma(left: Term, right: Term) -> Term {
        Term::Comma(Box::new(left), Box::new(right))
    }

    /// Number of `OneForm` leaves.
    pub fn leaves(&self) -> usize {
        match self {
            Term::OneForm(_) => 1,
            Term::Comma(l, r) => l.leaves() + r.leaves(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_term(self))
    }
}

/// One branch choice inside a [`Term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Left,
    Right,
}

/// A position inside a [`Term`]: the branch choices from the root down.
/// The empty path addresses the whole term.
pub type Path = Vec<Step>;

/// Collapse a term into a single category by reading every comma as a
/// product: `delta(OneForm A) = A`, `delta(Comma Γ Δ) = delta Γ . delta Δ`.
pub fn delta_translation(t: &Term) -> Form {
    match t {
        Term::OneForm(f) => f.clone(),
        Term::Comma(l, r) => Form::dot(delta_translation(l), delta_translation(r)),
    }
}

/// Degree of a category: atoms have degree 1, a connective adds one on top
/// of the larger side.
pub fn degree_formula(f: &Form) -> usize {
    match f {
        Form::At(_) => 1,
        Form::Slash(a, b) | Form::Backslash(a, b) | Form::Dot(a, b) => {
            1 + degree_formula(a).max(degree_formula(b))
        }
    }
}

/// `f` occurs inside `g` (reflexively): `f = g` or `f` occurs in either
/// side of `g`.
pub fn is_sub_formula(f: &Form, g: &Form) -> bool {
    if f == g {
        return true;
    }
    match g {
        Form::At(_) => false,
        Form::Slash(a, b) | Form::Backslash(a, b) | Form::Dot(a, b) => {
            is_sub_formula(f, a) || is_sub_formula(f, b)
        }
    }
}

/// `f` occurs inside some category leaf of `t`.
pub fn is_sub_form_term(f: &Form, t: &Term) -> bool {
    match t {
        Term::OneForm(g) => is_sub_formula(f, g),
        Term::Comma(l, r) => is_sub_form_term(f, l) || is_sub_form_term(f, r),
    }
}

/// All distinct subformulas of `f`, outermost first.
pub fn sub_formulas(f: &Form) -> Vec<Form> {
    let mut out = Vec::new();
    fn walk(f: &Form, out: &mut Vec<Form>) {
        if !out.contains(f) {
            out.push(f.clone());
        }
        match f {
            Form::At(_) => {}
            Form::Slash(a, b) | Form::Backslash(a, b) | Form::Dot(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    walk(f, &mut out);
    out
}

/// The category leaves of `t`, left to right.
pub fn term_forms(t: &Term) -> Vec<&Form> {
    match t {
        Term::OneForm(f) => vec![f],
        Term::Comma(l, r) => {
            let mut out = term_forms(l);
            out.extend(term_forms(r));
            out
        }
    }
}
