//! Human-readable proof output: plain-text trees and LaTeX (bussproofs).
//!
//! The text renderers draw the conclusion first and indent premises below
//! it with box-drawing connectors, which reads naturally in a terminal.
//! The LaTeX renderers emit a `prooftree` environment growing upwards in
//! the usual sequent-calculus style; paste the output into any document
//! that loads the `bussproofs` package.

use crate::arrow::{children_of, ArrowProof, ArrowStep};
use crate::form::{Form, Path, Step, Term};
use crate::natded::{NatDedNode, NatDedProof, NatRule};
use crate::proof::{Dertree, RuleName, Sequent};
use crate::syntax::{level, render_category, render_term};

// ---------------------------------------------------------------------
// plain-text trees

// Append `children` (already rendered into lines) under a node, drawing
// the connectors.
fn branch(out: &mut Vec<String>, children: Vec<Vec<String>>) {
    let n = children.len();
    for (i, child) in children.into_iter().enumerate() {
        let (head, tail) = if i + 1 == n { ("└─ ", "   ") } else { ("├─ ", "│  ") };
        let mut lines = child.into_iter();
        if let Some(first) = lines.next() {
            out.push(format!("{head}{first}"));
        }
        for line in lines {
            out.push(format!("{tail}{line}"));
        }
    }
}

fn path_loc(p: &Path) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter().map(|s| if *s == Step::Left { 'L' } else { 'R' }).collect()
    }
}

fn dertree_lines(p: &Dertree) -> Vec<String> {
    match p {
        Dertree::Unf(s) => vec![format!("{s}   [?]")],
        Dertree::Der(s, rule, prems) => {
            let mut out = vec![format!("{s}   [{rule}]")];
            branch(&mut out, prems.iter().map(dertree_lines).collect());
            out
        }
    }
}

/// Draw a sequent proof as an indented text tree, conclusion first.
/// Unfinished leaves are tagged `[?]`.
pub fn render_tree(p: &Dertree) -> String {
    dertree_lines(p).join("\n")
}

fn arrow_lines(p: &ArrowProof) -> Vec<String> {
    let tag = match &p.step {
        ArrowStep::Comp(_, _, mid) => format!("Comp via {}", render_category(mid)),
        ArrowStep::Ext(rule) => format!("Ext {rule}"),
        step => step.name().to_string(),
    };
    let mut out = vec![format!(
        "{} -> {}   [{tag}]",
        render_category(&p.source),
        render_category(&p.target)
    )];
    branch(&mut out, children_of(p).into_iter().map(arrow_lines).collect());
    out
}

/// Draw an arrow proof as an indented text tree, conclusion first.
pub fn render_arrow_tree(p: &ArrowProof) -> String {
    arrow_lines(p).join("\n")
}

fn nat_rule_tag(r: &NatRule) -> String {
    match r {
        NatRule::NatAxiom => "ax".to_string(),
        NatRule::SlashIntro => "/I".to_string(),
        NatRule::BackslashIntro => "\\I".to_string(),
        NatRule::DotIntro => ".I".to_string(),
        NatRule::SlashElim { b } => format!("/E {}", render_category(b)),
        NatRule::BackslashElim { b } => format!("\\E {}", render_category(b)),
        NatRule::DotElim { path } => format!(".E at {}", path_loc(path)),
        NatRule::NatExt { path } => format!("ext at {}", path_loc(path)),
    }
}

fn nat_lines(n: &NatDedNode) -> Vec<String> {
    let mut out = vec![format!(
        "{} |- {}   [{}]",
        render_term(&n.ante),
        render_category(&n.succ),
        nat_rule_tag(&n.rule)
    )];
    branch(&mut out, n.children.iter().map(nat_lines).collect());
    out
}

/// Draw a natural-deduction proof as an indented text tree.
pub fn render_natded_tree(p: &NatDedProof) -> String {
    nat_lines(&p.root).join("\n")
}

// ---------------------------------------------------------------------
// LaTeX (bussproofs)

fn latex_escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if "_#%&${}".contains(c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

// Same parenthesisation as the text renderer, with `\cdot` and
// `\backslash` for the product and the left division.
fn latex_form_at(f: &Form, req: u8, out: &mut String) {
    if level(f) < req {
        out.push('(');
        latex_form_at(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Form::At(name) => out.push_str(&latex_escape(name)),
        Form::Dot(l, r) => {
            latex_form_at(l, 0, out);
            out.push_str(" \\cdot ");
            latex_form_at(r, 1, out);
        }
        Form::Slash(l, r) => {
            latex_form_at(l, 1, out);
            out.push('/');
            latex_form_at(r, 2, out);
        }
        Form::Backslash(l, r) => {
            latex_form_at(l, 3, out);
            out.push_str(" \\backslash ");
            latex_form_at(r, 2, out);
        }
    }
}

fn latex_category(f: &Form) -> String {
    let mut out = String::new();
    latex_form_at(f, 0, &mut out);
    out
}

fn latex_term(t: &Term) -> String {
    match t {
        Term::OneForm(f) => latex_category(f),
        Term::Comma(l, r) => format!("({}, {})", latex_term(l), latex_term(r)),
    }
}

fn latex_sequent(s: &Sequent) -> String {
    format!("{} \\vdash {}", latex_term(&s.ante), latex_category(&s.succ))
}

struct Buss {
    out: String,
}

impl Buss {
    fn new() -> Buss {
        Buss { out: String::from("\\begin{prooftree}\n") }
    }

    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    // One inference: premises are already on the stack.
    fn infer(&mut self, arity: usize, label: &str, body: &str) {
        if arity == 0 {
            self.line("\\AxiomC{}");
        }
        self.line(&format!("\\RightLabel{{${label}$}}"));
        let cmd = if arity == 2 { "\\BinaryInfC" } else { "\\UnaryInfC" };
        self.line(&format!("{cmd}{{${body}$}}"));
    }

    fn open_goal(&mut self, body: &str) {
        self.line("\\AxiomC{$\\vdots$}");
        self.line("\\noLine");
        self.line(&format!("\\UnaryInfC{{${body}$}}"));
    }

    fn finish(mut self) -> String {
        self.out.push_str("\\end{prooftree}");
        self.out
    }
}

fn gentzen_label(r: RuleName) -> &'static str {
    match r {
        RuleName::SeqAxiom => "\\mathrm{ax}",
        RuleName::RightSlash => "/R",
        RuleName::RightBackslash => "\\backslash R",
        RuleName::RightDot => "\\cdot R",
        RuleName::LeftSlash => "/L",
        RuleName::LeftBackslash => "\\backslash L",
        RuleName::LeftDot => "\\cdot L",
        RuleName::CutRule => "\\mathrm{cut}",
        RuleName::SeqExt => "\\mathrm{ext}",
    }
}

fn latex_dertree(p: &Dertree, out: &mut Buss) {
    match p {
        Dertree::Unf(s) => out.open_goal(&latex_sequent(s)),
        Dertree::Der(s, rule, prems) => {
            for prem in prems {
                latex_dertree(prem, out);
            }
            out.infer(prems.len(), gentzen_label(*rule), &latex_sequent(s));
        }
    }
}

/// Render a sequent proof as a LaTeX `prooftree` (bussproofs package).
pub fn render_latex(p: &Dertree) -> String {
    let mut out = Buss::new();
    latex_dertree(p, &mut out);
    out.finish()
}

fn arrow_label(step: &ArrowStep) -> String {
    match step {
        ArrowStep::One => "\\mathrm{one}".to_string(),
        ArrowStep::Beta(_) => "\\beta".to_string(),
        ArrowStep::BetaInv(_) => "\\beta^{-1}".to_string(),
        ArrowStep::Gamma(_) => "\\gamma".to_string(),
        ArrowStep::GammaInv(_) => "\\gamma^{-1}".to_string(),
        ArrowStep::Comp(..) => "\\mathrm{comp}".to_string(),
        ArrowStep::Ext(rule) => format!("\\mathrm{{{}}}", latex_escape(rule)),
    }
}

fn latex_arrow(p: &ArrowProof, out: &mut Buss) {
    let kids = children_of(p);
    for kid in &kids {
        latex_arrow(kid, out);
    }
    let body = format!("{} \\to {}", latex_category(&p.source), latex_category(&p.target));
    out.infer(kids.len(), &arrow_label(&p.step), &body);
}

/// Render an arrow proof as a LaTeX `prooftree` (bussproofs package).
pub fn render_arrow_latex(p: &ArrowProof) -> String {
    let mut out = Buss::new();
    latex_arrow(p, &mut out);
    out.finish()
}

fn nat_label(r: &NatRule) -> &'static str {
    match r {
        NatRule::NatAxiom => "\\mathrm{ax}",
        NatRule::SlashIntro => "/I",
        NatRule::BackslashIntro => "\\backslash I",
        NatRule::DotIntro => "\\cdot I",
        NatRule::SlashElim { .. } => "/E",
        NatRule::BackslashElim { .. } => "\\backslash E",
        NatRule::DotElim { .. } => "\\cdot E",
        NatRule::NatExt { .. } => "\\mathrm{ext}",
    }
}

fn latex_nat(n: &NatDedNode, out: &mut Buss) {
    for kid in &n.children {
        latex_nat(kid, out);
    }
    let body = format!("{} \\vdash {}", latex_term(&n.ante), latex_category(&n.succ));
    out.infer(n.children.len(), nat_label(&n.rule), &body);
}

/// Render a natural-deduction proof as a LaTeX `prooftree`.
pub fn render_natded_latex(p: &NatDedProof) -> String {
    let mut out = Buss::new();
    latex_nat(&p.root, &mut out);
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::Extension;
    use crate::search::{prove, SearchOptions};
    use crate::syntax::{parse_category, parse_sequent};

    fn proved(ext: Extension, src: &str) -> Dertree {
        let (ante, succ) = parse_sequent(src).unwrap();
        prove(&Sequent::new(ext, ante, succ), &SearchOptions::default()).expect("provable")
    }

    #[test]
    fn text_tree_shows_rules_and_connectors() {
        let p = proved(Extension::nl(), "(a/b, b) |- a");
        let text = render_tree(&p);
        assert!(text.starts_with("(a/b, b) |- a   [LeftSlash]"));
        assert!(text.contains("├─ a |- a   [SeqAxiom]"));
        assert!(text.contains("└─ b |- b   [SeqAxiom]"));

        let open = Dertree::Unf(p.head().clone());
        assert_eq!(render_tree(&open), "(a/b, b) |- a   [?]");
    }

    #[test]
    fn latex_counts_one_binary_inference_per_branching_node() {
        let p = proved(Extension::l(), "(S/(S/np), (S/inf, inf/np)) |- S");
        let tex = render_latex(&p);
        let binary = tex.matches("\\BinaryInfC").count();
        fn branching(p: &Dertree) -> usize {
            match p {
                Dertree::Unf(_) => 0,
                Dertree::Der(_, _, prems) => {
                    usize::from(prems.len() == 2) + prems.iter().map(branching).sum::<usize>()
                }
            }
        }
        assert_eq!(binary, branching(&p));
        assert!(tex.starts_with("\\begin{prooftree}"));
        assert!(tex.ends_with("\\end{prooftree}"));
        assert!(tex.contains("\\vdash"));
    }

    #[test]
    fn latex_categories_keep_text_parenthesisation() {
        let f = parse_category("a\\(b/c)").unwrap();
        assert_eq!(latex_category(&f), "a \\backslash (b/c)");
        let f = parse_category("(a.b)/b").unwrap();
        assert_eq!(latex_category(&f), "(a \\cdot b)/b");
        let f = parse_category("x_1/y").unwrap();
        assert_eq!(latex_category(&f), "x\\_1/y");
    }

    #[test]
    fn arrow_and_natded_renderers_cover_their_rules() {
        use crate::arrow::gentzen_to_arrow;
        let p = proved(Extension::l(), "(a/b, (b/c, c)) |- a");
        let a = gentzen_to_arrow(&p).unwrap();
        let text = render_arrow_tree(&a);
        assert!(text.contains(" -> "));
        let tex = render_arrow_latex(&a);
        assert!(tex.contains("\\to"));
        assert_eq!(tex.matches("\\BinaryInfC").count(), text.matches("Comp via").count());

        let nat = NatDedProof {
            ext: Extension::nl(),
            root: NatDedNode::new(
                Term::comma(Term::one(Form::slash(Form::at("a"), Form::at("b"))), Term::one(Form::at("b"))),
                Form::at("a"),
                NatRule::SlashElim { b: Form::at("b") },
                vec![
                    NatDedNode::new(
                        Term::one(Form::slash(Form::at("a"), Form::at("b"))),
                        Form::slash(Form::at("a"), Form::at("b")),
                        NatRule::NatAxiom,
                        vec![],
                    ),
                    NatDedNode::new(Term::one(Form::at("b")), Form::at("b"), NatRule::NatAxiom, vec![]),
                ],
            ),
        };
        crate::natded::check_natded_proof(&nat).unwrap();
        assert!(render_natded_tree(&nat).starts_with("(a/b, b) |- a   [/E b]"));
        assert_eq!(render_natded_latex(&nat).matches("\\BinaryInfC").count(), 1);
    }
}
