//! Decision procedures and certified proof objects for the Lambek calculus
//! and its structural extensions.

pub mod arrow;
pub mod extension;
pub mod form;
pub mod grammar;
pub mod natded;
pub mod proof;
pub mod render;
pub mod replace;
pub mod search;
pub mod syntax;

pub use arrow::{
    antimono_backslash_left, antimono_slash_right, arrow_proof_from_json, arrow_proof_to_json,
    arrow_to_gentzen, arrow_to_gentzen_with, check_arrow_proof, gentzen_to_arrow, mono_backslash_right,
    mono_dot, mono_dot_left, mono_dot_right, mono_slash_left, ArrowCheckError, ArrowProof,
    ArrowSearcher, ArrowShapeError, ArrowStep, TranslateError,
};
pub use extension::{
    add_extension, arrow_relates, arrow_rewrites, ext_relates, ext_rewrites, ext_rewrites_inv,
    extends_ext, extension_from_json, extension_sub_ok, extension_to_json, to_arrow_ext,
    ArrowExtension, ArrowRule, DecodeError, Extension, FormPattern, StructRule, TermPattern,
};
pub use form::{
    degree_formula, delta_translation, is_sub_form_term, is_sub_formula, sub_formulas, term_forms,
    Form, Path, Step, Term,
};
pub use grammar::{
    bracketings, load_lexicon, parse, Bracketing, Lexicon, LexiconError, ParseError, ParseResult,
    Parses,
};
pub use natded::{
    check_natded_proof, natded_from_json, natded_to_gentzen, natded_to_json, NatDedCheckError,
    NatDedNode, NatDedProof, NatRule,
};
pub use proof::{
    check_node, check_proof, check_subformula_property, degree_proof, dertree_from_json,
    dertree_to_json, expansions, is_complete, is_cut_free, is_subproof, is_subproof_one,
    path_from_json, path_to_json, refines, sequent_from_json, sequent_to_json, CheckError, Dertree,
    ProofCheckError, RuleName, RuleWitness, Sequent, SubformulaError, UnfinishedProof,
};
pub use render::{
    render_arrow_latex, render_arrow_tree, render_latex, render_natded_latex, render_natded_tree,
    render_tree,
};
pub use replace::{
    comma_dot_steps, decide_replace_comma_dot, holds_replace, occurrences, positions, replace_at,
    subterm_at, PathError,
};
pub use search::{
    oracle_provable, prove, prove_all, prove_all_stats, SearchOptions, SearchStats,
    DEFAULT_RULE_ORDER,
};
pub use syntax::{
    parse_category, parse_sequent, parse_term, render_category, render_sequent_text, render_term,
    SyntaxError,
};
