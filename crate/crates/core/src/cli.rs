//! Command-line front end. [`run`] returns the exit status and the text that
//! would be printed, so the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::denote::{eval_all_indices, eval_ext, eval_int, Term};
use crate::fragment::{self, FragmentError, Lexicon, SentenceResult};
use crate::gen::{self, TermGen, FREE_VARS};
use crate::kripke::FrameMap;
use crate::modelfile::{self, Document, ModelFile};
use crate::modint::{self, Morphism};
use crate::relalg::{Property, Relation};
use crate::semmodel::{Assignment, Index, Model};

#[derive(Debug, Parser)]
#[command(name = "modint", version, about = "Evaluate and transform finite intensional models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relation property report for a relation file, or for every frame of a model.
    CheckRel {
        file: PathBuf,
        /// Property name, or `all`.
        #[arg(long, default_value = "all")]
        prop: String,
    },
    /// Monotone/bounded report for a frame-map file, or for each frame's trivialization.
    CheckMap { file: PathBuf },
    /// Lists validation violations.
    Validate { model: PathBuf },
    /// Evaluates a term.
    Eval {
        model: PathBuf,
        /// Term in s-expression syntax.
        #[arg(long, conflicts_with = "named", required_unless_present = "named")]
        term: Option<String>,
        /// Name of a term stored in the model file.
        #[arg(long)]
        named: Option<String>,
        /// Comma-separated elements in frame order.
        #[arg(long)]
        index: Option<String>,
        /// Variable binding `x=entity`; repeatable.
        #[arg(long = "assign")]
        assign: Vec<String>,
        /// Print the value at every index.
        #[arg(long)]
        all_indices: bool,
    },
    /// Parses a sentence and prints its tree.
    Parse {
        #[arg(long)]
        text: String,
        /// Take the lexicon from this model file.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Evaluates a sentence and prints its truth value and derivation.
    Sentence {
        model: PathBuf,
        #[arg(long)]
        text: String,
        #[arg(long)]
        index: Option<String>,
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Collapses one frame and writes the resulting model file.
    Trivialize {
        model: PathBuf,
        #[arg(long)]
        frame: String,
        /// Element whose slice the interpretation keeps; defaults to the file's choice.
        #[arg(long)]
        designate: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trivializes every frame and compares intensional and extensional evaluation.
    VerifyTheorem {
        model: PathBuf,
        /// Number of random composite terms.
        #[arg(long, default_value_t = 100)]
        terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks that every ordering of the given trivializations ends in the same model.
    Square {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        frames: Vec<String>,
    },
    /// Prints the trivialization hypercube as node and edge lines.
    Diagram {
        model: PathBuf,
        #[arg(long, value_delimiter = ',')]
        frames: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// File, JSON, syntax or usage problems.
    Input(String),
    /// A violated precondition.
    Precondition(String),
}

type CmdResult = Result<(i32, String), Failure>;

fn input(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

fn pre(e: impl ToString) -> Failure {
    Failure::Precondition(e.to_string())
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure::Input(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Precondition(msg)) => {
            let line = msg.lines().collect::<Vec<_>>().join("; ");
            Outcome { code: 1, stdout: String::new(), stderr: format!("error: {line}\n") }
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::CheckRel { file, prop } => check_rel(&file, &prop),
        Command::CheckMap { file } => check_map(&file),
        Command::Validate { model } => validate(&model),
        Command::Eval { model, term, named, index, assign, all_indices } => {
            eval(&model, term, named, index, &assign, all_indices)
        }
        Command::Parse { text, model } => parse(&text, model.as_deref()),
        Command::Sentence { model, text, index, assign } => sentence(&model, &text, index, &assign),
        Command::Trivialize { model, frame, designate, out } => trivialize(&model, &frame, designate, out),
        Command::VerifyTheorem { model, terms, seed } => verify_theorem(&model, terms, seed),
        Command::Square { model, frames } => square(&model, &frames),
        Command::Diagram { model, frames } => diagram(&model, frames),
    }
}

fn load(path: &Path) -> Result<ModelFile, Failure> {
    modelfile::load_model(path).map_err(input)
}

fn load_valid(path: &Path) -> Result<ModelFile, Failure> {
    let file = load(path)?;
    file.model.ensure_valid().map_err(pre)?;
    Ok(file)
}

fn check_rel(path: &Path, prop: &str) -> CmdResult {
    check_rel_document(modelfile::load_document(path).map_err(input)?, prop)
}

fn check_rel_document(doc: Document, prop: &str) -> CmdResult {
    let props: Vec<Property> = if prop == "all" {
        Property::ALL.to_vec()
    } else {
        vec![prop.parse().map_err(input)?]
    };
    let mut out = String::new();
    match doc {
        Document::Relation { name, relation } => relation_report(&mut out, &name, &relation, &props, prop != "all")?,
        Document::Model(file) => {
            for f in file.model.frames() {
                relation_report(&mut out, f.label(), f.rel(), &props, prop != "all")?;
            }
        }
        Document::Map(_) => return Err(input("expected a relation or model file, found a frame map")),
    }
    Ok((0, out))
}

fn relation_report(out: &mut String, name: &str, r: &Relation, props: &[Property], strict: bool) -> Result<(), Failure> {
    let _ = writeln!(out, "relation {name}: {} -> {}, {} pairs", r.source().len(), r.target().len(), r.len());
    let _ = writeln!(out, "  pairs: {r}");
    for &p in props {
        match r.check_property(p) {
            Ok(b) => {
                let _ = writeln!(out, "  {p}: {b}");
            }
            Err(e) if strict => return Err(pre(e)),
            Err(_) => {
                let _ = writeln!(out, "  {p}: n/a (not an endorelation)");
            }
        }
    }
    if !strict {
        let f = r.function_characterization();
        let _ = writeln!(out, "  function: {}", f.is_function);
        let _ = writeln!(out, "  total: {} (dagger form {})", f.is_total, f.dagger_eq_total);
        let _ = writeln!(out, "  single_valued: {} (dagger form {})", f.is_single_valued, f.dagger_eq_single);
        if f.is_function {
            let _ = writeln!(out, "  injective: {} (dagger form {})", f.is_injective, f.inj_eq);
            let _ = writeln!(out, "  surjective: {} (dagger form {})", f.is_surjective, f.surj_eq);
        }
    }
    Ok(())
}

fn map_report(out: &mut String, title: &str, m: &FrameMap) {
    let mono = m.monotone_inclusions();
    let b = m.bounded_report();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  monotone: {}", m.is_monotone());
    let _ = writeln!(
        out,
        "  monotone forms: pointwise {}, sandwich {}, semicommute {}",
        mono.pointwise, mono.sandwich, mono.semicommute
    );
    let _ = writeln!(out, "  forth: {}", b.forth);
    let _ = writeln!(out, "  back: {}", b.back);
    let _ = writeln!(out, "  commutes: {}", b.commutes);
    let _ = writeln!(out, "  bounded: {}", b.is_bounded());
    let _ = writeln!(out, "  surjective: {}", m.is_surjective());
}

fn check_map(path: &Path) -> CmdResult {
    let mut out = String::new();
    match modelfile::load_document(path).map_err(input)? {
        Document::Map(m) => {
            let title = format!("map {} -> {}", m.from().label(), m.to().label());
            map_report(&mut out, &title, &m);
        }
        Document::Model(file) => {
            let model = &file.model;
            for f in model.frames().iter().filter(|f| !f.is_trivial()) {
                let mor = Morphism::trivialize_default(model, f.label()).map_err(pre)?;
                for m in modint::frame_map(model, &mor).map_err(pre)? {
                    let title = format!("trivialization {mor}: {} -> {}", f.label(), m.to().label());
                    map_report(&mut out, &title, &m);
                }
            }
        }
        Document::Relation { .. } => return Err(input("expected a frame-map or model file, found a relation")),
    }
    Ok((0, out))
}

fn validate(path: &Path) -> CmdResult {
    let file = load(path)?;
    let violations = file.model.validate();
    if violations.is_empty() {
        return Ok((0, "valid\n".into()));
    }
    let mut out = String::new();
    for v in &violations {
        let _ = writeln!(out, "{v}");
    }
    Ok((1, out))
}

fn assignment(model: &Model, binds: &[String]) -> Result<Assignment, Failure> {
    let mut g = Assignment::new();
    for b in binds {
        let (x, k) = b.split_once('=').ok_or_else(|| input(format!("expected x=entity, found `{b}`")))?;
        g = g.variant(model.entities(), x.trim(), k.trim()).map_err(pre)?;
    }
    Ok(g)
}

fn index(model: &Model, text: Option<&str>) -> Result<Option<Index>, Failure> {
    text.map(|t| model.parse_index(t).map_err(pre)).transpose()
}

fn eval(
    path: &Path,
    term: Option<String>,
    named: Option<String>,
    index_text: Option<String>,
    binds: &[String],
    all_indices: bool,
) -> CmdResult {
    let file = load_valid(path)?;
    let m = &file.model;
    let text = match (term, named) {
        (Some(t), _) => t,
        (None, Some(n)) => file
            .terms
            .get(&n)
            .cloned()
            .ok_or_else(|| input(format!("no term named `{n}` in the model file")))?,
        (None, None) => return Err(input("give --term or --named")),
    };
    let t = Term::parse(&text, m).map_err(input)?;
    let g = assignment(m, binds)?;
    let s = index(m, index_text.as_deref())?;
    let mut out = String::new();
    if all_indices {
        for (s, v) in eval_all_indices(&t, m, &g).map_err(pre)? {
            let _ = writeln!(out, "{s}: {}", m.show_value(&v));
        }
        return Ok((0, out));
    }
    let v = match s {
        Some(s) => eval_int(&t, m, &g, &s),
        None if m.is_extensional() => eval_ext(&t, m, &g),
        None => return Err(pre("the model has nontrivial frames; give --index")),
    }
    .map_err(pre)?;
    let _ = writeln!(out, "{}", m.show_value(&v));
    Ok((0, out))
}

fn parse(text: &str, model: Option<&Path>) -> CmdResult {
    let lexicon = match model {
        Some(p) => load(p)?.lexicon,
        None => Lexicon::default(),
    };
    let tree = fragment::parse(&fragment::tokenize(text), &lexicon).map_err(input)?;
    Ok((0, format!("{tree}\n")))
}

fn sentence(path: &Path, text: &str, index_text: Option<String>, binds: &[String]) -> CmdResult {
    let file = load_valid(path)?;
    let m = &file.model;
    let g = assignment(m, binds)?;
    let s = index(m, index_text.as_deref())?;
    let r = fragment::eval_sentence(text, m, &file.lexicon, &g, s.as_ref()).map_err(|e| match e {
        FragmentError::UnknownWord(_) | FragmentError::NoParse | FragmentError::AmbiguousParse(_) => input(e),
        other => pre(other),
    })?;
    Ok((0, sentence_text(m, &r)))
}

fn sentence_text(m: &Model, r: &SentenceResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", m.show_value(&r.value));
    let _ = writeln!(out, "tree: {}", r.tree);
    let _ = writeln!(out, "term: {}", r.term);
    for line in &r.trace {
        let _ = writeln!(out, "{line}");
    }
    out
}

fn trivialize(path: &Path, frame: &str, designate: Option<String>, out: Option<PathBuf>) -> CmdResult {
    let file = load_valid(path)?;
    let mor = match designate {
        Some(d) => Morphism::trivialize(frame, &d),
        None => Morphism::trivialize_default(&file.model, frame).map_err(pre)?,
    };
    let model = modint::apply(&file.model, &mor).map_err(pre)?;
    let text = modelfile::to_string(&ModelFile { model, ..file });
    match out {
        Some(p) => {
            std::fs::write(&p, text).map_err(|e| input(format!("{}: {e}", p.display())))?;
            Ok((0, format!("wrote {}\n", p.display())))
        }
        None => Ok((0, text)),
    }
}

fn verify_theorem(path: &Path, n_terms: usize, seed: u64) -> CmdResult {
    let file = load_valid(path)?;
    let mut path_desc = Vec::new();
    for f in file.model.frames().iter().filter(|f| !f.is_trivial()) {
        path_desc.push(Morphism::trivialize_default(&file.model, f.label()).map_err(pre)?.to_string());
    }
    let m = modint::trivialize_all(&file.model).map_err(pre)?;

    let mut terms = modint::lemma_terms(&m, &FREE_VARS);
    let mut named = Vec::new();
    for (name, text) in &file.terms {
        named.push((name.clone(), Term::parse(text, &m).map_err(|e| input(format!("term `{name}`: {e}")))?));
    }
    terms.extend(named.iter().map(|(_, t)| t.clone()));
    let mut rng = gen::rng(seed);
    let mut tg = TermGen::new(&mut rng, &m, &[]);
    let random: Vec<Term> = (0..n_terms).map(|_| tg.any(4)).collect();
    terms.extend(random);
    let assignments: Vec<Assignment> = (0..5).map(|_| gen::assignment(&mut rng, &m)).collect();

    let report = modint::verify_equivalence(&m, &terms, &assignments).map_err(pre)?;
    let mut out = String::new();
    let desc = if path_desc.is_empty() { "none".to_string() } else { path_desc.join(" ; ") };
    let _ = writeln!(out, "trivialized: {desc}");
    let _ = writeln!(out, "terms: {} ({} named), assignments: {}", terms.len(), named.len(), assignments.len());
    let _ = writeln!(out, "{report}");
    let code = if report.mismatches() == 0 { 0 } else { 1 };
    Ok((code, out))
}

fn square(path: &Path, frames: &[String]) -> CmdResult {
    square_of(&load_valid(path)?.model, frames)
}

fn square_of(m: &Model, frames: &[String]) -> CmdResult {
    let paths = modint::permutation_paths(m, frames).map_err(pre)?;
    let results = paths
        .iter()
        .map(|p| modint::compose_path(m, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(pre)?;
    let mut out = String::new();
    let mut all = true;
    for (p, r) in paths.iter().zip(&results) {
        let same = r.structurally_eq(&results[0]);
        all &= same;
        let names: Vec<String> = p.iter().map(Morphism::to_string).collect();
        let _ = writeln!(out, "path {}: {}", names.join(" ; "), if same { "agrees" } else { "differs" });
    }
    let _ = writeln!(out, "commutes: {all}");
    Ok((if all { 0 } else { 1 }, out))
}

fn diagram(path: &Path, frames: Option<Vec<String>>) -> CmdResult {
    let file = load(path)?;
    let frames = frames.unwrap_or_else(|| file.model.frames().iter().map(|f| f.label().to_string()).collect());
    if frames.is_empty() {
        return Err(pre("the model has no frames"));
    }
    Ok((0, modint::diagram_export(&file.model, &frames).map_err(pre)?))
}

/// Used by the browser demo and tests: runs a sentence against an in-memory model file.
pub fn sentence_report(file: &ModelFile, text: &str, index_text: Option<&str>) -> Result<String, String> {
    let m = &file.model;
    m.ensure_valid().map_err(|e| e.to_string())?;
    let s = index_text.map(|t| m.parse_index(t)).transpose().map_err(|e| e.to_string())?;
    let r = fragment::eval_sentence(text, m, &file.lexicon, &Assignment::new(), s.as_ref())
        .map_err(|e| e.to_string())?;
    Ok(sentence_text(m, &r))
}

fn message(f: Failure) -> String {
    match f {
        Failure::Input(m) | Failure::Precondition(m) => m,
    }
}

/// The `check-rel` report for a relation or model given as JSON text.
pub fn relation_check_report(json: &str, prop: &str) -> Result<String, String> {
    let doc = modelfile::parse_document(json).map_err(|e| e.to_string())?;
    check_rel_document(doc, prop).map(|(_, out)| out).map_err(message)
}

/// The `square` report for an in-memory model, and whether every path agrees.
pub fn square_report(file: &ModelFile, frames: &[String]) -> Result<(bool, String), String> {
    file.model.ensure_valid().map_err(|e| e.to_string())?;
    square_of(&file.model, frames).map(|(code, out)| (code == 0, out)).map_err(message)
}
