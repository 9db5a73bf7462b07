//! A small English fragment: the definite article, common nouns, a transitive
//! verb and the modal `might`, parsed by a context-free grammar and translated
//! compositionally into object-language terms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::denote::{eval_ext, eval_int, EvalError, Term};
use crate::semmodel::{Assignment, Index, Model, SemType, Value};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LexEntry {
    /// The definite article: builds a definite description.
    Det,
    Noun { pred: String },
    /// Transitive verb over a binary predicate, taking its object first.
    Verb { pred: String },
    Modal { frame: String },
}

impl LexEntry {
    pub fn category(&self) -> &'static str {
        match self {
            LexEntry::Det => "D",
            LexEntry::Noun { .. } => "N",
            LexEntry::Verb { .. } => "V",
            LexEntry::Modal { .. } => "Mod",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
}

impl Default for Lexicon {
    fn default() -> Self {
        let entries = [
            ("the", LexEntry::Det),
            ("student", LexEntry::Noun { pred: "student".into() }),
            ("book", LexEntry::Noun { pred: "book".into() }),
            ("read", LexEntry::Verb { pred: "read".into() }),
            ("might", LexEntry::Modal { frame: "W".into() }),
        ];
        Lexicon { entries: entries.into_iter().map(|(w, e)| (w.to_string(), e)).collect() }
    }
}

impl Lexicon {
    pub fn new(entries: BTreeMap<String, LexEntry>) -> Self {
        Lexicon { entries }
    }

    pub fn get(&self, word: &str) -> Option<&LexEntry> {
        self.entries.get(word)
    }

    pub fn entries(&self) -> &BTreeMap<String, LexEntry> {
        &self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    Pass,
    /// `⟦left⟧(⟦right⟧)`
    LeftApplies,
    /// `⟦right⟧(⟦left⟧)`
    RightApplies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrammarRule {
    pub lhs: &'static str,
    pub rhs: &'static [&'static str],
    pub semantics: Composition,
    /// Only licensed by the modal grammar.
    pub modal: bool,
}

pub const RULES: &[GrammarRule] = &[
    GrammarRule { lhs: "S", rhs: &["DP", "VP"], semantics: Composition::RightApplies, modal: false },
    GrammarRule { lhs: "DP", rhs: &["D", "NP"], semantics: Composition::LeftApplies, modal: false },
    GrammarRule { lhs: "NP", rhs: &["N"], semantics: Composition::Pass, modal: false },
    GrammarRule { lhs: "VP", rhs: &["V", "DP"], semantics: Composition::LeftApplies, modal: false },
    GrammarRule { lhs: "VP", rhs: &["Mod", "V'"], semantics: Composition::LeftApplies, modal: true },
    GrammarRule { lhs: "V'", rhs: &["V", "DP"], semantics: Composition::LeftApplies, modal: true },
];

const PRETERMINALS: [&str; 4] = ["D", "N", "V", "Mod"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub word: Option<String>,
    pub children: Vec<ParseTree>,
    /// Covered tokens as a half-open range.
    pub span: (usize, usize),
}

impl ParseTree {
    fn rule(&self) -> Option<&'static GrammarRule> {
        let labels: Vec<&str> = self.children.iter().map(|c| c.label.as_str()).collect();
        RULES.iter().find(|r| r.lhs == self.label && r.rhs == labels.as_slice())
    }

    pub fn words(&self) -> Vec<&str> {
        match &self.word {
            Some(w) => vec![w.as_str()],
            None => self.children.iter().flat_map(ParseTree::words).collect(),
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = &self.word {
            return write!(f, "{} {w}", self.label);
        }
        write!(f, "{}(", self.label)?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("no parse")]
    NoParse,
    #[error("ambiguous: {0} parses")]
    AmbiguousParse(usize),
    #[error("mode error: {0}")]
    ModeError(String),
    #[error("an index is required for a model with nontrivial frames")]
    IndexRequired,
    #[error("presupposition failure in `{dp}`: {source}")]
    Presupposition { dp: String, source: EvalError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot compose {0}")]
    Composition(String),
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// All parses of `tokens` as a sentence.
pub fn parse_all(tokens: &[String], lexicon: &Lexicon) -> Result<Vec<ParseTree>, FragmentError> {
    let cats = tokens
        .iter()
        .map(|t| lexicon.get(t).map(LexEntry::category).ok_or_else(|| FragmentError::UnknownWord(t.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parses("S", 0, tokens.len(), tokens, &cats))
}

pub fn parse(tokens: &[String], lexicon: &Lexicon) -> Result<ParseTree, FragmentError> {
    let mut all = parse_all(tokens, lexicon)?;
    match all.len() {
        0 => Err(FragmentError::NoParse),
        1 => Ok(all.remove(0)),
        n => Err(FragmentError::AmbiguousParse(n)),
    }
}

fn parses(sym: &str, i: usize, j: usize, tokens: &[String], cats: &[&str]) -> Vec<ParseTree> {
    if PRETERMINALS.contains(&sym) {
        return if j == i + 1 && cats[i] == sym {
            vec![ParseTree { label: sym.to_string(), word: Some(tokens[i].clone()), children: vec![], span: (i, j) }]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for rule in RULES.iter().filter(|r| r.lhs == sym) {
        match rule.rhs {
            [only] => {
                for c in parses(only, i, j, tokens, cats) {
                    out.push(ParseTree { label: sym.to_string(), word: None, children: vec![c], span: (i, j) });
                }
            }
            [left, right] => {
                for k in i + 1..j {
                    let lefts = parses(left, i, k, tokens, cats);
                    if lefts.is_empty() {
                        continue;
                    }
                    let rights = parses(right, k, j, tokens, cats);
                    for l in &lefts {
                        for r in &rights {
                            out.push(ParseTree {
                                label: sym.to_string(),
                                word: None,
                                children: vec![l.clone(), r.clone()],
                                span: (i, j),
                            });
                        }
                    }
                }
            }
            _ => unreachable!("rules are unary or binary"),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Extensional,
    Intensional,
}

/// A node's translation: a term, or one of the two operators that act on
/// terms rather than denoting in the object language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sem {
    Term(Term),
    IotaBuilder,
    ModalBuilder(String),
}

impl fmt::Display for Sem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sem::Term(t) => write!(f, "{t}"),
            Sem::IotaBuilder => f.write_str("<iota>"),
            Sem::ModalBuilder(frame) => write!(f, "<might {frame}>"),
        }
    }
}

fn fresh_name(n: usize) -> String {
    let base = ["x", "y", "z"][n % 3];
    match n / 3 {
        0 => base.to_string(),
        k => format!("{base}{k}"),
    }
}

struct Translator<'a> {
    lexicon: &'a Lexicon,
    mode: Mode,
    next_var: usize,
}

impl Translator<'_> {
    fn lexical(&self, word: &str) -> Result<Sem, FragmentError> {
        let entry = self.lexicon.get(word).ok_or_else(|| FragmentError::UnknownWord(word.to_string()))?;
        Ok(match entry {
            LexEntry::Det => Sem::IotaBuilder,
            LexEntry::Noun { pred } => {
                Sem::Term(Term::lam("u", SemType::E, Term::pred(pred, vec![Term::var("u")])))
            }
            LexEntry::Verb { pred } => Sem::Term(Term::lam(
                "o",
                SemType::E,
                Term::lam("s", SemType::E, Term::pred(pred, vec![Term::var("s"), Term::var("o")])),
            )),
            LexEntry::Modal { frame } => {
                if self.mode == Mode::Extensional {
                    return Err(FragmentError::ModeError(format!(
                        "`{word}` needs an intensional model"
                    )));
                }
                Sem::ModalBuilder(frame.clone())
            }
        })
    }

    fn combine(&mut self, functor: Sem, arg: Sem) -> Result<Sem, FragmentError> {
        match (functor, arg) {
            (Sem::IotaBuilder, Sem::Term(Term::Lam(v, _, body))) => {
                let x = fresh_name(self.next_var);
                self.next_var += 1;
                Ok(Sem::Term(Term::iota(&x, body.substitute_closed(&v, &Term::var(&x)))))
            }
            (Sem::ModalBuilder(frame), Sem::Term(Term::Lam(v, ty, body))) => {
                Ok(Sem::Term(Term::Lam(v, ty, Box::new(Term::diamond(&frame, *body)))))
            }
            (Sem::Term(f), Sem::Term(a)) => Ok(Sem::Term(Term::app(f, a).beta_reduce_closed())),
            (f, a) => Err(FragmentError::Composition(format!("{f} with {a}"))),
        }
    }

    /// Translates bottom-up, left to right, recording each node's result.
    fn node(&mut self, tree: &ParseTree, out: &mut Vec<(usize, Sem)>, depth: usize) -> Result<Sem, FragmentError> {
        let slot = out.len();
        out.push((depth, Sem::IotaBuilder));
        let sem = if let Some(w) = &tree.word {
            self.lexical(w)?
        } else {
            let rule = tree.rule().ok_or_else(|| FragmentError::Composition(format!("no rule for {tree}")))?;
            if rule.modal && self.mode == Mode::Extensional {
                return Err(FragmentError::ModeError(format!(
                    "{} -> {} is not part of the extensional grammar",
                    rule.lhs,
                    rule.rhs.join(" ")
                )));
            }
            let mut kids = Vec::new();
            for c in &tree.children {
                kids.push(self.node(c, out, depth + 1)?);
            }
            match rule.semantics {
                Composition::Pass => kids.remove(0),
                Composition::LeftApplies => {
                    let right = kids.pop().expect("binary");
                    let left = kids.pop().expect("binary");
                    self.combine(left, right)?
                }
                Composition::RightApplies => {
                    let right = kids.pop().expect("binary");
                    let left = kids.pop().expect("binary");
                    self.combine(right, left)?
                }
            }
        };
        out[slot].1 = sem.clone();
        Ok(sem)
    }
}

/// Translation of every node in pre-order, with depths.
pub fn translate_nodes(tree: &ParseTree, mode: Mode, lexicon: &Lexicon) -> Result<Vec<(usize, Sem)>, FragmentError> {
    let mut tr = Translator { lexicon, mode, next_var: 0 };
    let mut out = Vec::new();
    tr.node(tree, &mut out, 0)?;
    Ok(out)
}

pub fn translate(tree: &ParseTree, mode: Mode, lexicon: &Lexicon) -> Result<Term, FragmentError> {
    match translate_nodes(tree, mode, lexicon)?.swap_remove(0).1 {
        Sem::Term(t) => Ok(t),
        other => Err(FragmentError::Composition(format!("{other} is not a term"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub depth: usize,
    pub node: String,
    pub sem: String,
    pub value: Option<String>,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:indent$}{} => {}", "", self.node, self.sem, indent = 2 * self.depth)?;
        if let Some(v) = &self.value {
            write!(f, " = {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceResult {
    pub tree: ParseTree,
    pub term: Term,
    pub value: Value,
    pub trace: Vec<TraceLine>,
}

fn preorder(tree: &ParseTree) -> Vec<&ParseTree> {
    let mut out = vec![tree];
    for c in &tree.children {
        out.extend(preorder(c));
    }
    out
}

/// Parses, translates and evaluates a sentence. Extensional models use the
/// extensional evaluator; otherwise `s` must be given.
pub fn eval_sentence(
    sentence: &str,
    m: &Model,
    lexicon: &Lexicon,
    g: &Assignment,
    s: Option<&Index>,
) -> Result<SentenceResult, FragmentError> {
    let mode = if m.is_extensional() { Mode::Extensional } else { Mode::Intensional };
    let tree = parse(&tokenize(sentence), lexicon)?;
    let nodes = translate_nodes(&tree, mode, lexicon)?;
    let eval = |t: &Term| -> Result<Value, EvalError> {
        match (mode, s) {
            (Mode::Extensional, _) => eval_ext(t, m, g),
            (Mode::Intensional, Some(s)) => eval_int(t, m, g, s),
            (Mode::Intensional, None) => unreachable!("checked below"),
        }
    };
    if mode == Mode::Intensional && s.is_none() {
        return Err(FragmentError::IndexRequired);
    }
    if let Some(s) = s {
        if !m.contains_index(s) {
            return Err(EvalError::UnknownIndex(s.to_string()).into());
        }
    }

    let subtrees = preorder(&tree);
    let mut trace = Vec::new();
    for (sub, (depth, sem)) in subtrees.iter().zip(&nodes) {
        let node = match &sub.word {
            Some(w) => format!("{} {w}", sub.label),
            None => sub.label.clone(),
        };
        let value = match sem {
            Sem::Term(t) => Some(match eval(t) {
                Ok(v) => m.show_value(&v),
                Err(e) => format!("error: {e}"),
            }),
            _ => None,
        };
        trace.push(TraceLine { depth: *depth, node, sem: sem.to_string(), value });
    }

    let Sem::Term(term) = nodes[0].1.clone() else {
        return Err(FragmentError::Composition("sentence is not a term".into()));
    };
    let value = eval(&term).map_err(|e| match &e {
        EvalError::PresuppositionFailure { term: failed, .. } => {
            let dp = subtrees
                .iter()
                .zip(&nodes)
                .find(|(sub, (_, sem))| sub.label == "DP" && sem.to_string() == *failed)
                .map(|(sub, _)| sub.words().join(" "));
            match dp {
                Some(dp) => FragmentError::Presupposition { dp, source: e },
                None => FragmentError::Eval(e),
            }
        }
        _ => FragmentError::Eval(e),
    })?;
    Ok(SentenceResult { tree, term, value, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn parses_both_sentences() {
        let lex = Lexicon::default();
        let t1 = parse(&toks("the student read the book"), &lex).unwrap();
        assert_eq!(t1.to_string(), "S(DP(D the, NP(N student)), VP(V read, DP(D the, NP(N book))))");
        assert_eq!(t1.span, (0, 5));
        let t2 = parse(&toks("The student might read the book"), &lex).unwrap();
        assert_eq!(
            t2.to_string(),
            "S(DP(D the, NP(N student)), VP(Mod might, V'(V read, DP(D the, NP(N book)))))"
        );
    }

    #[test]
    fn parse_errors() {
        let lex = Lexicon::default();
        assert_eq!(parse(&toks("student the read"), &lex), Err(FragmentError::NoParse));
        assert_eq!(parse(&toks("the cat read"), &lex), Err(FragmentError::UnknownWord("cat".into())));
        assert_eq!(parse(&[], &lex), Err(FragmentError::NoParse));
    }

    #[test]
    fn translations() {
        let lex = Lexicon::default();
        let t1 = parse(&toks("the student read the book"), &lex).unwrap();
        assert_eq!(
            translate(&t1, Mode::Extensional, &lex).unwrap().to_string(),
            "(pred read (iota x (pred student x)) (iota y (pred book y)))"
        );
        let t2 = parse(&toks("the student might read the book"), &lex).unwrap();
        assert_eq!(
            translate(&t2, Mode::Intensional, &lex).unwrap().to_string(),
            "(might W (pred read (iota x (pred student x)) (iota y (pred book y))))"
        );
        assert!(matches!(translate(&t2, Mode::Extensional, &lex), Err(FragmentError::ModeError(_))));

        let dp = &t1.children[1].children[1];
        let nodes = translate_nodes(dp, Mode::Extensional, &lex).unwrap();
        assert_eq!(nodes[0].1.to_string(), "(iota x (pred book x))");
    }

    #[test]
    fn fresh_names_cycle() {
        let names: Vec<String> = (0..5).map(fresh_name).collect();
        assert_eq!(names, ["x", "y", "z", "x1", "y1"]);
    }
}
