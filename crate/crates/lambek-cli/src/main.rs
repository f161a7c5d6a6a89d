//! `lambek` — prove sequents, parse sentences, check and translate proof
//! files, and render derivations.
//!
//! Exit codes follow the usual scripting contract: 0 for a positive
//! result (proved / parsed / valid / provable), 1 for a negative one
//! (no proof, invalid proof, not provable), 2 for usage or data errors.
//! Set `LAMBEK_LOG` to any non-empty value for search diagnostics on
//! stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lambek_core::{
    arrow_proof_from_json, arrow_proof_to_json, arrow_to_gentzen, check_arrow_proof,
    check_natded_proof, check_proof, dertree_from_json, dertree_to_json, extension_from_json,
    gentzen_to_arrow, load_lexicon, natded_from_json, natded_to_gentzen, natded_to_json,
    oracle_provable, parse as parse_words, parse_category, parse_sequent, prove_all_stats,
    render_arrow_latex, render_arrow_tree, render_category, render_latex, render_natded_latex,
    render_natded_tree, render_tree, to_arrow_ext, ArrowProof, Dertree, Extension, NatDedProof,
    SearchOptions, Sequent, TranslateError,
};

#[derive(Parser)]
#[command(name = "lambek")]
#[command(about = "Decision procedures and proof objects for the Lambek calculus")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tree,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum System {
    Gentzen,
    Arrow,
    Natded,
}

#[derive(Subcommand)]
enum Commands {
    /// Decide a sequent and print its derivation
    Prove {
        /// The sequent, e.g. "(S/inf, inf/np) |- S/np"
        sequent: String,
        /// Structural extension: NL, L, NLP, LP, or @file.json
        #[arg(long, default_value = "NL")]
        ext: String,
        #[arg(long, value_enum, default_value_t = Format::Tree)]
        format: Format,
        /// Return up to N distinct derivations (JSON output becomes an array)
        #[arg(long, default_value_t = 1)]
        max_solutions: usize,
        /// Cap the derivation height (only needed for custom growing rules)
        #[arg(long)]
        max_depth: Option<usize>,
        /// Disable the branch-local loop check
        #[arg(long)]
        no_loop_check: bool,
    },
    /// Parse a sentence against a categorial lexicon
    Parse {
        /// The words, quoted as one sentence or given separately
        #[arg(required = true)]
        words: Vec<String>,
        /// Lexicon file (TSV `word<TAB>cat,cat,…` or JSON object)
        #[arg(long)]
        lexicon: PathBuf,
        /// Goal category, e.g. S
        #[arg(long)]
        goal: String,
        /// Structural extension: NL, L, NLP, LP, or @file.json
        #[arg(long, default_value = "NL")]
        ext: String,
        #[arg(long, value_enum, default_value_t = Format::Tree)]
        format: Format,
        /// Return up to N parses overall
        #[arg(long, default_value_t = 1)]
        max_solutions: usize,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        no_loop_check: bool,
    },
    /// Check a proof file; exit 0 if valid, 1 with the failing node otherwise
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = System::Gentzen)]
        system: System,
        /// Register a custom extension (@file.json) for name resolution
        #[arg(long)]
        ext: Option<String>,
    },
    /// Translate a proof file between systems
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: System,
        #[arg(long, value_enum)]
        to: System,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Register a custom extension (@file.json) for name resolution
        #[arg(long)]
        ext: Option<String>,
    },
    /// Decide provability with the height-bounded reference procedure
    Oracle {
        /// The sequent, e.g. "(a/b, b) |- a"
        sequent: String,
        /// Structural extension: NL, L, NLP, LP, or @file.json
        #[arg(long, default_value = "NL")]
        ext: String,
        /// Height bound
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Pretty-print a proof file
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = System::Gentzen)]
        system: System,
        #[arg(long, value_enum, default_value_t = Format::Tree)]
        format: Format,
        /// Register a custom extension (@file.json) for name resolution
        #[arg(long)]
        ext: Option<String>,
    },
}

fn main() -> ExitCode {
    // Die quietly instead of panicking when stdout closes early, e.g. when
    // the output is piped through `head`.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Commands::Prove { sequent, ext, format, max_solutions, max_depth, no_loop_check } => {
            let ext = load_extension(&ext)?;
            let (ante, succ) = parse_sequent(&sequent)?;
            let opts = SearchOptions {
                max_depth,
                max_solutions: max_solutions.max(1),
                loop_check: !no_loop_check,
                ..SearchOptions::default()
            };
            let (proofs, stats) = prove_all_stats(&Sequent::new(ext, ante, succ), &opts);
            diag(format!("{} expansions", stats.expansions));
            if proofs.is_empty() {
                println!("no proof");
                return Ok(ExitCode::from(1));
            }
            match format {
                Format::Json if max_solutions <= 1 => print_json(&dertree_to_json(&proofs[0]))?,
                Format::Json => {
                    print_json(&Value::Array(proofs.iter().map(dertree_to_json).collect()))?
                }
                Format::Tree => print_blocks(proofs.iter().map(render_tree)),
                Format::Latex => print_blocks(proofs.iter().map(render_latex)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Commands::Parse {
            words,
            lexicon,
            goal,
            ext,
            format,
            max_solutions,
            max_depth,
            no_loop_check,
        } => {
            let ext = load_extension(&ext)?;
            let goal = parse_category(&goal)?;
            let source = fs::read_to_string(&lexicon)
                .with_context(|| format!("reading {}", lexicon.display()))?;
            let lex = load_lexicon(&source)?;
            let words: Vec<&str> = words.iter().flat_map(|w| w.split_whitespace()).collect();
            let opts = SearchOptions {
                max_depth,
                max_solutions: max_solutions.max(1),
                loop_check: !no_loop_check,
                ..SearchOptions::default()
            };
            let parses = parse_words(&words, &goal, &lex, &ext, &opts)?;
            diag(format!("{} candidates, {} parses", parses.candidates, parses.results.len()));
            if parses.results.is_empty() {
                println!("no parse");
                return Ok(ExitCode::from(1));
            }
            match format {
                Format::Json => {
                    let results: Vec<Value> = parses
                        .results
                        .iter()
                        .map(|r| {
                            json!({
                                "bracketing": r.bracketing.words_string(&words),
                                "assignment": words
                                    .iter()
                                    .zip(&r.assignment)
                                    .map(|(w, c)| json!([w, render_category(c)]))
                                    .collect::<Vec<_>>(),
                                "proof": dertree_to_json(&r.proof),
                            })
                        })
                        .collect();
                    print_json(&json!({ "candidates": parses.candidates, "results": results }))?;
                }
                Format::Tree | Format::Latex => {
                    for (i, r) in parses.results.iter().enumerate() {
                        if i > 0 {
                            println!();
                        }
                        println!("{}", r.bracketing.words_string(&words));
                        for (w, c) in words.iter().zip(&r.assignment) {
                            println!("  {w}: {}", render_category(c));
                        }
                        let proof = match format {
                            Format::Latex => render_latex(&r.proof),
                            _ => render_tree(&r.proof),
                        };
                        println!("{proof}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Commands::Check { file, system, ext } => {
            let extra = ext.as_deref().map(load_extension).transpose()?;
            let failure = match load_proof(&file, system, extra)? {
                Proof::Gentzen(d) => check_proof(&d).err().map(|e| e.to_string()),
                Proof::Arrow(x, p) => {
                    check_arrow_proof(&to_arrow_ext(&x), &p).err().map(|e| e.to_string())
                }
                Proof::NatDed(p) => check_natded_proof(&p).err().map(|e| e.to_string()),
            };
            match failure {
                None => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Some(msg) => {
                    println!("invalid: {msg}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Commands::Translate { file, from, to, format, ext } => {
            let extra = ext.as_deref().map(load_extension).transpose()?;
            let proof = load_proof(&file, from, extra)?;
            let out = match (proof, to) {
                (Proof::Gentzen(d), System::Arrow) => {
                    let ext_name = d.head().ext.name.clone();
                    match gentzen_to_arrow(&d) {
                        Ok(a) => Proof::Arrow(d.head().ext.clone(), a),
                        Err(TranslateError::UnsatisfiedExtension { rule, from, to }) => {
                            println!(
                                "untranslatable: extension step {rule}: {from} -> {to} has no {ext_name} derivation"
                            );
                            return Ok(ExitCode::from(1));
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                (Proof::Arrow(x, a), System::Gentzen) => Proof::Gentzen(arrow_to_gentzen(&a, &x)?),
                (Proof::NatDed(p), System::Gentzen) => Proof::Gentzen(natded_to_gentzen(&p)?),
                (_, to) if to == from => bail!("--from and --to are the same system"),
                _ => bail!(
                    "unsupported translation; supported: gentzen -> arrow, arrow -> gentzen, natded -> gentzen"
                ),
            };
            print_proof(&out, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Commands::Oracle { sequent, ext, depth } => {
            let ext = load_extension(&ext)?;
            let (ante, succ) = parse_sequent(&sequent)?;
            if oracle_provable(&Sequent::new(ext, ante, succ), depth) {
                println!("provable");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not provable within height {depth}");
                Ok(ExitCode::from(1))
            }
        }
        Commands::Render { file, system, format, ext } => {
            let extra = ext.as_deref().map(load_extension).transpose()?;
            let proof = load_proof(&file, system, extra)?;
            print_proof(&proof, format)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// A decoded proof file; arrow proofs keep the extension they were checked
// against.
enum Proof {
    Gentzen(Dertree),
    Arrow(Extension, ArrowProof),
    NatDed(NatDedProof),
}

fn load_extension(spec: &str) -> Result<Extension> {
    if let Some(path) = spec.strip_prefix('@') {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading extension {path}"))?;
        let v: Value =
            serde_json::from_str(&text).with_context(|| format!("parsing extension {path}"))?;
        Ok(extension_from_json(&v)?)
    } else {
        Extension::builtin(spec).ok_or_else(|| {
            anyhow!("unknown extension `{spec}` (expected NL, L, NLP, LP, or @file.json)")
        })
    }
}

fn load_proof(path: &Path, system: System, extra: Option<Extension>) -> Result<Proof> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let resolve = move |name: &str| match &extra {
        Some(e) if e.name == name => Some(e.clone()),
        _ => Extension::builtin(name),
    };
    match system {
        System::Gentzen => Ok(Proof::Gentzen(dertree_from_json(&v, &resolve)?)),
        System::Natded => Ok(Proof::NatDed(natded_from_json(&v, &resolve)?)),
        System::Arrow => {
            let name = v
                .get("ext")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("arrow proof: missing string field `ext`"))?;
            let ext = resolve(name).ok_or_else(|| anyhow!("unknown extension `{name}`"))?;
            let node =
                v.get("proof").ok_or_else(|| anyhow!("arrow proof: missing field `proof`"))?;
            Ok(Proof::Arrow(ext, arrow_proof_from_json(node)?))
        }
    }
}

fn print_proof(p: &Proof, format: Format) -> Result<()> {
    match (p, format) {
        (Proof::Gentzen(d), Format::Json) => print_json(&dertree_to_json(d)),
        (Proof::Gentzen(d), Format::Tree) => Ok(println!("{}", render_tree(d))),
        (Proof::Gentzen(d), Format::Latex) => Ok(println!("{}", render_latex(d))),
        (Proof::Arrow(x, a), Format::Json) => {
            print_json(&json!({ "ext": x.name, "proof": arrow_proof_to_json(a) }))
        }
        (Proof::Arrow(_, a), Format::Tree) => Ok(println!("{}", render_arrow_tree(a))),
        (Proof::Arrow(_, a), Format::Latex) => Ok(println!("{}", render_arrow_latex(a))),
        (Proof::NatDed(n), Format::Json) => print_json(&natded_to_json(n)),
        (Proof::NatDed(n), Format::Tree) => Ok(println!("{}", render_natded_tree(n))),
        (Proof::NatDed(n), Format::Latex) => Ok(println!("{}", render_natded_latex(n))),
    }
}

fn print_json(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn print_blocks(blocks: impl Iterator<Item = String>) {
    for (i, block) in blocks.enumerate() {
        if i > 0 {
            println!();
        }
        println!("{block}");
    }
}

fn diag(msg: String) {
    let on = std::env::var("LAMBEK_LOG").map(|v| !v.is_empty() && v != "0").unwrap_or(false);
    if on {
        eprintln!("lambek: {msg}");
    }
}
