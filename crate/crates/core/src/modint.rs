//! The category of intensional models: trivialization morphisms, path
//! composition, commutativity squares, extensional recovery and the
//! equivalence check between the two evaluators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::denote::{eval_ext, eval_int, EvalError, Signature, Term};
use crate::kripke::{self, FrameError, FrameMap, TRIVIAL_ELEMENT};
use crate::semmodel::{Assignment, Index, Model, ModelError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModIntError {
    #[error("unknown frame `{0}`")]
    UnknownFrame(String),
    #[error("frame `{0}` is already trivial")]
    AlreadyTrivial(String),
    #[error("element `{element}` is not in frame `{frame}`")]
    UnknownElement { frame: String, element: String },
    #[error("frame `{0}` is not trivial")]
    NotFullyTrivial(String),
    #[error("constant `{0}` has an index-typed value and cannot be carried over")]
    IndexTypedConstant(String),
    #[error("constant `{constant}`: collapsing frame `{frame}` merges function arguments with different results")]
    NonFunctionalImage { constant: String, frame: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Morphism {
    Identity,
    TrivializeFrame { frame: String, designated: String },
}

impl Morphism {
    pub fn trivialize(frame: &str, designated: &str) -> Morphism {
        Morphism::TrivializeFrame { frame: frame.to_string(), designated: designated.to_string() }
    }

    /// Trivialization of `frame` at the model's designated element.
    pub fn trivialize_default(m: &Model, frame: &str) -> Result<Morphism, ModIntError> {
        let d = m.designated(frame).ok_or_else(|| ModIntError::UnknownFrame(frame.to_string()))?;
        Ok(Morphism::trivialize(frame, d))
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morphism::Identity => f.write_str("id"),
            Morphism::TrivializeFrame { frame, designated } => write!(f, "f_{frame}@{designated}"),
        }
    }
}

/// The frame map underlying a morphism applied to `m`.
pub fn frame_map(m: &Model, mor: &Morphism) -> Result<Vec<FrameMap>, ModIntError> {
    match mor {
        Morphism::Identity => Ok(m.frames().iter().map(FrameMap::identity).collect()),
        Morphism::TrivializeFrame { frame, designated } => {
            let f = m.frame(frame).ok_or_else(|| ModIntError::UnknownFrame(frame.clone()))?;
            if f.is_trivial() {
                return Err(ModIntError::AlreadyTrivial(frame.clone()));
            }
            let triv = kripke::trivialize(f, designated).map_err(|e| match e {
                FrameError::UnknownElement { frame, element } => ModIntError::UnknownElement { frame, element },
                other => other.into(),
            })?;
            Ok(vec![triv.map])
        }
    }
}

pub fn apply(m: &Model, mor: &Morphism) -> Result<Model, ModIntError> {
    let (label, designated) = match mor {
        Morphism::Identity => return Ok(m.clone()),
        Morphism::TrivializeFrame { frame, designated } => (frame, designated),
    };
    m.ensure_valid()?;
    let pos = m.frame_position(label).ok_or_else(|| ModIntError::UnknownFrame(label.clone()))?;
    if m.frames()[pos].is_trivial() {
        return Err(ModIntError::AlreadyTrivial(label.clone()));
    }
    let triv = kripke::trivialize(&m.frames()[pos], designated).map_err(|e| match e {
        FrameError::UnknownElement { frame, element } => ModIntError::UnknownElement { frame, element },
        other => other.into(),
    })?;

    let mut out = m.clone();
    out.frames_mut()[pos] = triv.frame;
    out.clear_designated(label);
    let new_space = out.index_space();
    for c in out.constants_mut() {
        let mut table = BTreeMap::new();
        for s in &new_space {
            let old = s.with(label, designated);
            let v = c.table.get(&old).expect("validated table");
            let v = collapse_value(v, label).ok_or_else(|| ModIntError::NonFunctionalImage {
                constant: c.name.clone(),
                frame: label.clone(),
            })?;
            table.insert(s.clone(), v);
        }
        c.table = table;
    }
    Ok(out)
}

/// Pushes index-typed components of `frame` through the collapsing map.
fn collapse_value(v: &Value, frame: &str) -> Option<Value> {
    Some(match v {
        Value::IndexElem { frame: f, .. } if f == frame => {
            Value::IndexElem { frame: f.clone(), elem: TRIVIAL_ELEMENT.to_string() }
        }
        Value::Entity(_) | Value::Truth(_) | Value::IndexElem { .. } => v.clone(),
        Value::Tuple(vs) => Value::Tuple(vs.iter().map(|x| collapse_value(x, frame)).collect::<Option<_>>()?),
        Value::Set(vs) => Value::Set(vs.iter().map(|x| collapse_value(x, frame)).collect::<Option<_>>()?),
        Value::Func(map) => {
            let mut out = BTreeMap::new();
            for (k, x) in map {
                let (k, x) = (collapse_value(k, frame)?, collapse_value(x, frame)?);
                if out.get(&k).is_some_and(|prev| *prev != x) {
                    return None;
                }
                out.insert(k, x);
            }
            Value::Func(out)
        }
    })
}

pub fn compose_path(m: &Model, path: &[Morphism]) -> Result<Model, ModIntError> {
    path.iter().try_fold(m.clone(), |acc, mor| apply(&acc, mor))
}

#[derive(Debug, Clone)]
pub struct CommutativitySquare {
    pub start: Model,
    pub path1: Vec<Morphism>,
    pub path2: Vec<Morphism>,
}

impl CommutativitySquare {
    pub fn check(&self) -> Result<bool, ModIntError> {
        check_square(&self.start, &self.path1, &self.path2)
    }
}

pub fn check_square(start: &Model, path1: &[Morphism], path2: &[Morphism]) -> Result<bool, ModIntError> {
    let a = compose_path(start, path1)?;
    let b = compose_path(start, path2)?;
    Ok(a.structurally_eq(&b))
}

/// Every ordering of trivializations of `frames` at their designated elements.
pub fn permutation_paths(m: &Model, frames: &[String]) -> Result<Vec<Vec<Morphism>>, ModIntError> {
    let mors = frames
        .iter()
        .map(|f| Morphism::trivialize_default(m, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    permute(&mors, &mut Vec::new(), &mut vec![false; mors.len()], &mut out);
    Ok(out)
}

fn permute(items: &[Morphism], cur: &mut Vec<Morphism>, used: &mut [bool], out: &mut Vec<Vec<Morphism>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i].clone());
            permute(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Trivializes every nontrivial frame, in frame order, at its designated element.
pub fn trivialize_all(m: &Model) -> Result<Model, ModIntError> {
    let path = m
        .frames()
        .iter()
        .filter(|f| !f.is_trivial())
        .map(|f| Morphism::trivialize_default(m, f.label()))
        .collect::<Result<Vec<_>, _>>()?;
    compose_path(m, &path)
}

/// The frame-free model given by the single-index slice of a fully trivial model.
pub fn extensionalize(m: &Model) -> Result<Model, ModIntError> {
    if let Some(f) = m.frames().iter().find(|f| !f.is_trivial()) {
        return Err(ModIntError::NotFullyTrivial(f.label().to_string()));
    }
    m.ensure_valid()?;
    let space = m.index_space();
    let s0 = &space[0];
    let mut out = Model::new(m.entities().elements().iter().cloned(), vec![])?;
    for c in m.constants() {
        let mut labels = BTreeSet::new();
        c.ty.frame_labels(&mut labels);
        if !labels.is_empty() {
            return Err(ModIntError::IndexTypedConstant(c.name.clone()));
        }
        let v = c.table.get(s0).expect("validated table").clone();
        out.add_constant(c.name.clone(), c.ty.clone(), [(Index::empty(), v)].into());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Constants,
    Variables,
    Predicates,
    Functions,
    Composite,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Constants,
        Category::Variables,
        Category::Predicates,
        Category::Functions,
        Category::Composite,
    ];

    pub fn of(t: &Term) -> Category {
        let atomic = |args: &[Term]| args.iter().all(|a| matches!(a, Term::Var(_) | Term::Const(_)));
        match t {
            Term::Const(_) => Category::Constants,
            Term::Var(_) => Category::Variables,
            Term::Pred(_, args) if atomic(args) => Category::Predicates,
            Term::Func(_, args) if atomic(args) => Category::Functions,
            _ => Category::Composite,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Constants => "constants",
            Category::Variables => "variables",
            Category::Predicates => "predicates",
            Category::Functions => "functions",
            Category::Composite => "composite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub term: String,
    pub assignment: String,
    pub intensional: String,
    pub extensional: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryResult {
    pub checks: usize,
    /// Both sides failed with the same error.
    pub agreed_errors: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub categories: BTreeMap<Category, CategoryResult>,
    /// Terms left out because they contain a modal operator.
    pub skipped: usize,
}

impl EquivalenceReport {
    pub fn checks(&self) -> usize {
        self.categories.values().map(|c| c.checks).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.categories.values().map(|c| c.mismatches.len()).sum()
    }

    pub fn agreed_errors(&self) -> usize {
        self.categories.values().map(|c| c.agreed_errors).sum()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cat in Category::ALL {
            let r = self.categories.get(&cat).cloned().unwrap_or_default();
            writeln!(
                f,
                "{}: {} checks, {} mismatches, {} agreed errors",
                cat.name(),
                r.checks,
                r.mismatches.len(),
                r.agreed_errors
            )?;
            for mm in &r.mismatches {
                writeln!(
                    f,
                    "  mismatch {} under {}: intensional {} vs extensional {}",
                    mm.term, mm.assignment, mm.intensional, mm.extensional
                )?;
            }
        }
        if self.skipped > 0 {
            writeln!(f, "skipped {} modal terms", self.skipped)?;
        }
        write!(f, "{} mismatches / {} checks", self.mismatches(), self.checks())
    }
}

/// Base terms for the four atomic categories: every constant, each variable,
/// and every predicate and function applied to each tuple of variables.
pub fn lemma_terms(m: &Model, vars: &[&str]) -> Vec<Term> {
    let mut out: Vec<Term> = m.constants().iter().map(|c| Term::Const(c.name.clone())).collect();
    out.extend(vars.iter().map(|x| Term::var(x)));
    let sig = Signature::of(m);
    for (p, n) in &sig.preds {
        out.extend(var_tuples(vars, *n).into_iter().map(|args| Term::pred(p, args)));
    }
    for (f, n) in &sig.funcs {
        out.extend(var_tuples(vars, *n).into_iter().map(|args| Term::func(f, args)));
    }
    out
}

fn var_tuples(vars: &[&str], n: usize) -> Vec<Vec<Term>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                vars.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(Term::var(x));
                    next
                })
            })
            .collect()
    })
}

/// Evaluates every term under every assignment both intensionally at the
/// unique index of `m_trivial` and extensionally on its extensionalization.
pub fn verify_equivalence(
    m_trivial: &Model,
    terms: &[Term],
    assignments: &[Assignment],
) -> Result<EquivalenceReport, ModIntError> {
    let ext = extensionalize(m_trivial)?;
    let space = m_trivial.index_space();
    let s0 = &space[0];
    let mut report = EquivalenceReport::default();
    for t in terms {
        if t.contains_diamond() {
            report.skipped += 1;
            continue;
        }
        let entry = report.categories.entry(Category::of(t)).or_default();
        for g in assignments {
            entry.checks += 1;
            let lhs = eval_int(t, m_trivial, g, s0);
            let rhs = eval_ext(t, &ext, g);
            let show = |r: &Result<Value, EvalError>| match r {
                Ok(v) => m_trivial.show_value(v),
                Err(e) => format!("error: {e}"),
            };
            match (&lhs, &rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                (Err(a), Err(b)) if a == b => entry.agreed_errors += 1,
                _ => entry.mismatches.push(Mismatch {
                    term: t.to_string(),
                    assignment: g.to_string(),
                    intensional: show(&lhs),
                    extensional: show(&rhs),
                }),
            }
        }
    }
    Ok(report)
}

/// The hypercube of trivializations over `frame_order` as `node`/`edge` lines.
pub fn diagram_export(m: &Model, frame_order: &[String]) -> Result<String, ModIntError> {
    for f in frame_order {
        if m.frame(f).is_none() {
            return Err(ModIntError::UnknownFrame(f.clone()));
        }
    }
    let n = frame_order.len();
    let name = |mask: usize| {
        let parts: Vec<String> = frame_order
            .iter()
            .enumerate()
            .map(|(i, f)| if mask & (1 << i) != 0 { format!("{f}'") } else { f.clone() })
            .collect();
        format!("M[{}]", parts.join(","))
    };
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for mask in 0..(1usize << n) {
        nodes.push(format!("node {}", name(mask)));
        for (i, f) in frame_order.iter().enumerate() {
            if mask & (1 << i) == 0 {
                edges.push(format!("edge {} {} f_{f}", name(mask), name(mask | (1 << i))));
            }
        }
    }
    nodes.sort();
    edges.sort();
    let mut out = nodes;
    out.extend(edges);
    Ok(out.join("\n") + "\n")
}
