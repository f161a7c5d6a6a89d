//! Natural deduction over the same sequents as the Gentzen system.
//!
//! Introduction rules mirror the Right rules; elimination rules apply a
//! functor to an argument (`SlashElim`/`BackslashElim`) or unpack a product
//! anywhere in the antecedent (`DotElim`).  Unlike [`crate::proof`], the
//! positional rules carry their witness in the node — natural deduction
//! proofs are usually written down rather than searched for — so checking
//! is pure verification with no occurrence search.
//!
//! [`natded_to_gentzen`] maps a checked proof onto the sequent calculus
//! node by node: introductions become Right rules, eliminations become
//! cuts against one-step Left-rule derivations, and structural steps map
//! across unchanged.  The image proves the same end-sequent.

use crate::extension::{ext_relates, DecodeError, Extension};
use crate::form::{Form, Path, Term};
use crate::proof::{fmt_tree_path, path_from_json, path_to_json, Dertree, RuleName, Sequent};
use crate::replace::{replace_at, subterm_at};
use crate::syntax::{parse_category, parse_term, render_category, render_term};
use serde_json::{json, Value};
use thiserror::Error;

/// A natural deduction proof: one extension governing the whole tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatDedProof {
    pub ext: Extension,
    pub root: NatDedNode,
}

/// One node: the sequent it claims, the rule, and its premises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatDedNode {
    pub ante: Term,
    pub succ: Form,
    pub rule: NatRule,
    pub children: Vec<NatDedNode>,
}

/// Natural deduction rules.  Positional rules store their witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatRule {
    /// `A ⊢ A`.
    NatAxiom,
    /// From `(Γ, B) ⊢ A` conclude `Γ ⊢ A/B`.
    SlashIntro,
    /// From `(B, Γ) ⊢ A` conclude `Γ ⊢ B\A`.
    BackslashIntro,
    /// From `Γ ⊢ A` and `Δ ⊢ B` conclude `(Γ, Δ) ⊢ A·B`.
    DotIntro,
    /// From `Γ ⊢ A/B` and `Δ ⊢ B` conclude `(Γ, Δ) ⊢ A`.
    SlashElim { b: Form },
    /// From `Γ ⊢ B` and `Δ ⊢ B\A` conclude `(Γ, Δ) ⊢ A`.
    BackslashElim { b: Form },
    /// From `Δ ⊢ A·B` and `Γ ⊢ C` with `(A, B)` at `path` in `Γ`,
    /// conclude `Γ[path := Δ] ⊢ C`.
    DotElim { path: Path },
    /// From `Γ ⊢ C` conclude `Γ' ⊢ C` where the subterms at `path` are
    /// related by a structural rule of the extension.
    NatExt { path: Path },
}

impl NatDedNode {
    pub fn new(ante: Term, succ: Form, rule: NatRule, children: Vec<NatDedNode>) -> NatDedNode {
        NatDedNode { ante, succ, rule, children }
    }
}

/// An invalid natural deduction node, located by child indices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid natural deduction step at {}: {msg}", fmt_tree_path(at))]
pub struct NatDedCheckError {
    pub at: Vec<usize>,
    pub msg: String,
}

/// Verify every node of the proof, reporting the first failure in
/// preorder.
pub fn check_natded_proof(p: &NatDedProof) -> Result<(), NatDedCheckError> {
    check_nat_node(&p.ext, &p.root, &mut Vec::new())
}

fn check_nat_node(
    e: &Extension,
    n: &NatDedNode,
    at: &mut Vec<usize>,
) -> Result<(), NatDedCheckError> {
    let fail = |at: &[usize], msg: String| Err(NatDedCheckError { at: at.to_vec(), msg });
    let arity = |want: usize| -> Result<(), NatDedCheckError> {
        if n.children.len() == want {
            Ok(())
        } else {
            Err(NatDedCheckError {
                at: at.clone(),
                msg: format!("expected {want} premises, found {}", n.children.len()),
            })
        }
    };
    match &n.rule {
        NatRule::NatAxiom => {
            arity(0)?;
            if n.ante != Term::one(n.succ.clone()) {
                return fail(at, "axiom: antecedent is not exactly the succedent".into());
            }
        }
        NatRule::SlashIntro => {
            arity(1)?;
            let Form::Slash(a, b) = &n.succ else {
                return fail(at, "slash introduction needs a / succedent".into());
            };
            let c = &n.children[0];
            if c.ante != Term::comma(n.ante.clone(), Term::one((**b).clone())) || c.succ != **a {
                return fail(at, "slash introduction: premise is not (Γ, B) ⊢ A".into());
            }
        }
        NatRule::BackslashIntro => {
            arity(1)?;
            let Form::Backslash(b, a) = &n.succ else {
                return fail(at, "backslash introduction needs a \\ succedent".into());
            };
            let c = &n.children[0];
            if c.ante != Term::comma(Term::one((**b).clone()), n.ante.clone()) || c.succ != **a {
                return fail(at, "backslash introduction: premise is not (B, Γ) ⊢ A".into());
            }
        }
        NatRule::DotIntro => {
            arity(2)?;
            let Form::Dot(a, b) = &n.succ else {
                return fail(at, "product introduction needs a product succedent".into());
            };
            let (l, r) = (&n.children[0], &n.children[1]);
            if n.ante != Term::comma(l.ante.clone(), r.ante.clone())
                || l.succ != **a
                || r.succ != **b
            {
                return fail(at, "product introduction: premises do not assemble the claim".into());
            }
        }
        NatRule::SlashElim { b } => {
            arity(2)?;
            let (fun, arg) = (&n.children[0], &n.children[1]);
            if fun.succ != Form::slash(n.succ.clone(), b.clone())
                || arg.succ != *b
                || n.ante != Term::comma(fun.ante.clone(), arg.ante.clone())
            {
                return fail(at, "slash elimination: premises do not assemble the claim".into());
            }
        }
        NatRule::BackslashElim { b } => {
            arity(2)?;
            let (arg, fun) = (&n.children[0], &n.children[1]);
            if fun.succ != Form::backslash(b.clone(), n.succ.clone())
                || arg.succ != *b
                || n.ante != Term::comma(arg.ante.clone(), fun.ante.clone())
            {
                return fail(at, "backslash elimination: premises do not assemble the claim".into());
            }
        }
        NatRule::DotElim { path } => {
            arity(2)?;
            let (pair, body) = (&n.children[0], &n.children[1]);
            if body.succ != n.succ {
                return fail(at, "product elimination: body changes the succedent".into());
            }
            let Ok(occ) = subterm_at(&body.ante, path) else {
                return fail(at, "product elimination: path leaves the body".into());
            };
            let Term::Comma(l, r) = occ else {
                return fail(at, "product elimination: path does not address a pair".into());
            };
            let (Term::OneForm(a), Term::OneForm(b)) = (&**l, &**r) else {
                return fail(at, "product elimination: pair is not two category leaves".into());
            };
            if pair.succ != Form::dot(a.clone(), b.clone()) {
                return fail(at, "product elimination: pair premise proves the wrong product".into());
            }
            match replace_at(&body.ante, path, pair.ante.clone()) {
                Ok(t) if t == n.ante => {}
                _ => {
                    return fail(
                        at,
                        "product elimination: claim is not the body with the pair replaced".into(),
                    )
                }
            }
        }
        NatRule::NatExt { path } => {
            arity(1)?;
            let c = &n.children[0];
            if c.succ != n.succ {
                return fail(at, "structural step changes the succedent".into());
            }
            let Ok(delta_prime) = subterm_at(&n.ante, path) else {
                return fail(at, "structural step: path leaves the claim".into());
            };
            let Ok(delta) = subterm_at(&c.ante, path) else {
                return fail(at, "structural step: path leaves the premise".into());
            };
            if replace_at(&n.ante, path, delta.clone()).ok() != Some(c.ante.clone()) {
                return fail(at, "structural step: contexts differ outside the path".into());
            }
            if !ext_relates(e, delta, delta_prime) {
                return fail(
                    at,
                    format!("no structural rule of `{}` bridges the step", e.name),
                );
            }
        }
    }
    for (i, c) in n.children.iter().enumerate() {
        at.push(i);
        check_nat_node(e, c, at)?;
        at.pop();
    }
    Ok(())
}

/// Translate a checked natural deduction proof into a sequent derivation
/// of the same end-sequent under the same extension.
pub fn natded_to_gentzen(p: &NatDedProof) -> Result<Dertree, NatDedCheckError> {
    check_natded_proof(p)?;
    Ok(gentzen_of(&p.ext, &p.root))
}

fn gentzen_of(e: &Extension, n: &NatDedNode) -> Dertree {
    let seq = |ante: Term, succ: Form| Sequent::new(e.clone(), ante, succ);
    let ax = |f: &Form| {
        Dertree::Der(
            seq(Term::one(f.clone()), f.clone()),
            RuleName::SeqAxiom,
            Vec::new(),
        )
    };
    let claim = seq(n.ante.clone(), n.succ.clone());
    match &n.rule {
        NatRule::NatAxiom => Dertree::Der(claim, RuleName::SeqAxiom, Vec::new()),
        NatRule::SlashIntro => Dertree::Der(
            claim,
            RuleName::RightSlash,
            vec![gentzen_of(e, &n.children[0])],
        ),
        NatRule::BackslashIntro => Dertree::Der(
            claim,
            RuleName::RightBackslash,
            vec![gentzen_of(e, &n.children[0])],
        ),
        NatRule::DotIntro => Dertree::Der(
            claim,
            RuleName::RightDot,
            vec![gentzen_of(e, &n.children[0]), gentzen_of(e, &n.children[1])],
        ),
        NatRule::SlashElim { b } => {
            let (fun, arg) = (&n.children[0], &n.children[1]);
            let functor = Form::slash(n.succ.clone(), b.clone());
            let applied = Dertree::Der(
                seq(
                    Term::comma(Term::one(functor), arg.ante.clone()),
                    n.succ.clone(),
                ),
                RuleName::LeftSlash,
                vec![ax(&n.succ), gentzen_of(e, arg)],
            );
            Dertree::Der(claim, RuleName::CutRule, vec![gentzen_of(e, fun), applied])
        }
        NatRule::BackslashElim { b } => {
            let (arg, fun) = (&n.children[0], &n.children[1]);
            let functor = Form::backslash(b.clone(), n.succ.clone());
            let applied = Dertree::Der(
                seq(
                    Term::comma(arg.ante.clone(), Term::one(functor)),
                    n.succ.clone(),
                ),
                RuleName::LeftBackslash,
                vec![ax(&n.succ), gentzen_of(e, arg)],
            );
            Dertree::Der(claim, RuleName::CutRule, vec![gentzen_of(e, fun), applied])
        }
        NatRule::DotElim { path } => {
            let (pair, body) = (&n.children[0], &n.children[1]);
            let folded = replace_at(&body.ante, path, Term::one(pair.succ.clone()))
                .expect("checked witness path");
            let unpacked = Dertree::Der(
                seq(folded, n.succ.clone()),
                RuleName::LeftDot,
                vec![gentzen_of(e, body)],
            );
            Dertree::Der(claim, RuleName::CutRule, vec![gentzen_of(e, pair), unpacked])
        }
        NatRule::NatExt { .. } => Dertree::Der(
            claim,
            RuleName::SeqExt,
            vec![gentzen_of(e, &n.children[0])],
        ),
    }
}

fn nat_rule_parts(r: &NatRule) -> (&'static str, Option<&Form>, Option<&Path>) {
    match r {
        NatRule::NatAxiom => ("NatAxiom", None, None),
        NatRule::SlashIntro => ("SlashIntro", None, None),
        NatRule::BackslashIntro => ("BackslashIntro", None, None),
        NatRule::DotIntro => ("DotIntro", None, None),
        NatRule::SlashElim { b } => ("SlashElim", Some(b), None),
        NatRule::BackslashElim { b } => ("BackslashElim", Some(b), None),
        NatRule::DotElim { path } => ("DotElim", None, Some(path)),
        NatRule::NatExt { path } => ("NatExt", None, Some(path)),
    }
}

fn nat_node_to_json(n: &NatDedNode) -> Value {
    let (rule, b, path) = nat_rule_parts(&n.rule);
    let mut obj = json!({
        "rule": rule,
        "ante": render_term(&n.ante),
        "succ": render_category(&n.succ),
        "children": n.children.iter().map(nat_node_to_json).collect::<Vec<_>>(),
    });
    if let Some(b) = b {
        obj["b"] = Value::String(render_category(b));
    }
    if let Some(p) = path {
        obj["path"] = path_to_json(p);
    }
    obj
}

/// Serialise a proof as `{"ext": name, "proof": node}`; the extension is
/// stored by name only.
pub fn natded_to_json(p: &NatDedProof) -> Value {
    json!({ "ext": p.ext.name, "proof": nat_node_to_json(&p.root) })
}

fn nat_node_from_json(v: &Value) -> Result<NatDedNode, DecodeError> {
    let get_str = |key: &str| -> Result<&str, DecodeError> {
        v.get(key)
            .and_then(|s| s.as_str())
            .ok_or_else(|| DecodeError::new(format!("natded node: missing string field `{key}`")))
    };
    let b = || -> Result<Form, DecodeError> { Ok(parse_category(get_str("b")?)?) };
    let path = || -> Result<Path, DecodeError> {
        path_from_json(
            v.get("path")
                .ok_or_else(|| DecodeError::new("natded node: missing field `path`"))?,
        )
    };
    let rule = match get_str("rule")? {
        "NatAxiom" => NatRule::NatAxiom,
        "SlashIntro" => NatRule::SlashIntro,
        "BackslashIntro" => NatRule::BackslashIntro,
        "DotIntro" => NatRule::DotIntro,
        "SlashElim" => NatRule::SlashElim { b: b()? },
        "BackslashElim" => NatRule::BackslashElim { b: b()? },
        "DotElim" => NatRule::DotElim { path: path()? },
        "NatExt" => NatRule::NatExt { path: path()? },
        other => return Err(DecodeError::new(format!("unknown natded rule `{other}`"))),
    };
    let ante = parse_term(get_str("ante")?)?;
    let succ = parse_category(get_str("succ")?)?;
    let children = match v.get("children") {
        None => Vec::new(),
        Some(c) => c
            .as_array()
            .ok_or_else(|| DecodeError::new("natded node: `children` is not an array"))?
            .iter()
            .map(nat_node_from_json)
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(NatDedNode { ante, succ, rule, children })
}

/// Decode a proof serialised by [`natded_to_json`], resolving the extension
/// name through `resolve`.
pub fn natded_from_json(
    v: &Value,
    resolve: &dyn Fn(&str) -> Option<Extension>,
) -> Result<NatDedProof, DecodeError> {
    let name = v
        .get("ext")
        .and_then(|s| s.as_str())
        .ok_or_else(|| DecodeError::new("natded proof: missing string field `ext`"))?;
    let ext = resolve(name)
        .ok_or_else(|| DecodeError::new(format!("unknown extension `{name}`")))?;
    let proof = v
        .get("proof")
        .ok_or_else(|| DecodeError::new("natded proof: missing field `proof`"))?;
    Ok(NatDedProof { ext, root: nat_node_from_json(proof)? })
}
