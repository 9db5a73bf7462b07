//! Object-language terms, their typechecker, and the two denotation
//! evaluators: one over extensional models, one over intensional models at an
//! index. The evaluators are written separately on purpose so that agreement
//! between them is a real check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::semmodel::{Assignment, Index, Model, SemType, Value, Violation};
use crate::sexpr::{self, Sexp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(String),
    Var(String),
    Pred(String, Vec<Term>),
    Func(String, Vec<Term>),
    Lam(String, SemType, Box<Term>),
    App(Box<Term>, Box<Term>),
    Iota(String, Box<Term>),
    /// Existential over points accessible in the named frame.
    Diamond(String, Box<Term>),
    And(Box<Term>, Box<Term>),
    Not(Box<Term>),
    Eq(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    pub fn pred(p: &str, args: Vec<Term>) -> Term {
        Term::Pred(p.to_string(), args)
    }

    pub fn func(f: &str, args: Vec<Term>) -> Term {
        Term::Func(f.to_string(), args)
    }

    pub fn lam(x: &str, ty: SemType, body: Term) -> Term {
        Term::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn iota(x: &str, body: Term) -> Term {
        Term::Iota(x.to_string(), Box::new(body))
    }

    pub fn diamond(frame: &str, body: Term) -> Term {
        Term::Diamond(frame.to_string(), Box::new(body))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Term) -> Term {
        Term::Not(Box::new(a))
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::Eq(Box::new(a), Box::new(b))
    }

    pub fn contains_diamond(&self) -> bool {
        match self {
            Term::Diamond(..) => true,
            Term::Const(_) | Term::Var(_) => false,
            Term::Pred(_, args) | Term::Func(_, args) => args.iter().any(Term::contains_diamond),
            Term::Lam(_, _, b) | Term::Iota(_, b) | Term::Not(b) => b.contains_diamond(),
            Term::App(a, b) | Term::And(a, b) | Term::Eq(a, b) => {
                a.contains_diamond() || b.contains_diamond()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 0,
            Term::Pred(_, args) | Term::Func(_, args) => {
                1 + args.iter().map(Term::depth).max().unwrap_or(0)
            }
            Term::Lam(_, _, b) | Term::Iota(_, b) | Term::Not(b) | Term::Diamond(_, b) => 1 + b.depth(),
            Term::App(a, b) | Term::And(a, b) | Term::Eq(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Pred(_, args) | Term::Func(_, args) => {
                args.iter().for_each(|a| a.collect_free(bound, out))
            }
            Term::Lam(x, _, b) | Term::Iota(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::Not(b) | Term::Diamond(_, b) => b.collect_free(bound, out),
            Term::App(a, b) | Term::And(a, b) | Term::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
        }
    }

    /// Replaces free occurrences of `var` by `replacement`, which must be closed.
    pub fn substitute_closed(&self, var: &str, replacement: &Term) -> Term {
        let go = |t: &Term| t.substitute_closed(var, replacement);
        match self {
            Term::Const(_) => self.clone(),
            Term::Var(x) if x == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::Pred(p, args) => Term::Pred(p.clone(), args.iter().map(go).collect()),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(go).collect()),
            Term::Lam(x, _, _) | Term::Iota(x, _) if x == var => self.clone(),
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(go(b))),
            Term::Iota(x, b) => Term::Iota(x.clone(), Box::new(go(b))),
            Term::Diamond(f, b) => Term::Diamond(f.clone(), Box::new(go(b))),
            Term::Not(b) => Term::Not(Box::new(go(b))),
            Term::App(a, b) => Term::App(Box::new(go(a)), Box::new(go(b))),
            Term::And(a, b) => Term::And(Box::new(go(a)), Box::new(go(b))),
            Term::Eq(a, b) => Term::Eq(Box::new(go(a)), Box::new(go(b))),
        }
    }

    /// Contracts redexes whose argument is closed. Used at translation time only.
    pub fn beta_reduce_closed(&self) -> Term {
        let go = |t: &Term| t.beta_reduce_closed();
        match self {
            Term::App(f, a) => {
                let f = go(f);
                let a = go(a);
                match f {
                    Term::Lam(x, _, body) if a.free_vars().is_empty() => {
                        body.substitute_closed(&x, &a).beta_reduce_closed()
                    }
                    f => Term::app(f, a),
                }
            }
            Term::Const(_) | Term::Var(_) => self.clone(),
            Term::Pred(p, args) => Term::Pred(p.clone(), args.iter().map(go).collect()),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(go).collect()),
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(go(b))),
            Term::Iota(x, b) => Term::Iota(x.clone(), Box::new(go(b))),
            Term::Diamond(f, b) => Term::Diamond(f.clone(), Box::new(go(b))),
            Term::Not(b) => Term::Not(Box::new(go(b))),
            Term::And(a, b) => Term::and(go(a), go(b)),
            Term::Eq(a, b) => Term::eq(go(a), go(b)),
        }
    }

    /// Parses the s-expression surface syntax. An unbound symbol is a constant
    /// when `is_constant` says so, otherwise a free variable.
    pub fn parse_with(text: &str, is_constant: &dyn Fn(&str) -> bool) -> Result<Term, TermSyntaxError> {
        let sexp = sexpr::parse(text).map_err(|e| TermSyntaxError(format!("{e}")))?;
        from_sexp(&sexp, &mut Vec::new(), is_constant)
    }

    pub fn parse(text: &str, model: &Model) -> Result<Term, TermSyntaxError> {
        Term::parse_with(text, &|s| model.constant(s).is_some())
    }
}

/// Constants of a model grouped by how terms can use them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    /// Constants of type `e`.
    pub entities: Vec<String>,
    /// Predicates over entity tuples, with arity.
    pub preds: Vec<(String, usize)>,
    /// Functions from entity tuples to entities, with arity.
    pub funcs: Vec<(String, usize)>,
    /// Constants of type `(fn e t)`, usable with `app`.
    pub props: Vec<String>,
}

impl Signature {
    pub fn of(m: &Model) -> Signature {
        let mut sig = Signature::default();
        for c in m.constants() {
            match &c.ty {
                SemType::E => sig.entities.push(c.name.clone()),
                SemType::RelOf(ts) if ts.iter().all(|t| *t == SemType::E) => {
                    sig.preds.push((c.name.clone(), ts.len()))
                }
                SemType::SetOf(a) if **a == SemType::E => sig.preds.push((c.name.clone(), 1)),
                SemType::Fn(a, b) if **b == SemType::E => {
                    if let Some(n) = entity_tuple_arity(a) {
                        sig.funcs.push((c.name.clone(), n));
                    }
                }
                SemType::Fn(a, b) if **a == SemType::E && **b == SemType::T => sig.props.push(c.name.clone()),
                _ => {}
            }
        }
        sig
    }
}

/// `n` when `ty` is the argument type of an n-ary entity function.
fn entity_tuple_arity(ty: &SemType) -> Option<usize> {
    match ty {
        SemType::E => Some(1),
        SemType::Pair(a, b) if **a == SemType::E => Some(1 + entity_tuple_arity(b)?),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term syntax: {0}")]
pub struct TermSyntaxError(pub String);

fn from_sexp(
    s: &Sexp,
    bound: &mut Vec<String>,
    is_constant: &dyn Fn(&str) -> bool,
) -> Result<Term, TermSyntaxError> {
    let bad = |why: &str| TermSyntaxError(format!("{why} in `{s}`"));
    let items = match s {
        Sexp::Atom(a) => {
            return Ok(if bound.contains(a) || !is_constant(a) {
                Term::Var(a.clone())
            } else {
                Term::Const(a.clone())
            })
        }
        Sexp::List(items) => items,
    };
    let head = items.first().and_then(Sexp::as_atom).ok_or_else(|| bad("missing operator"))?;
    let args = &items[1..];
    let sub = |t: &Sexp, bound: &mut Vec<String>| from_sexp(t, bound, is_constant);
    let name = |t: &Sexp| t.as_atom().map(str::to_string).ok_or_else(|| bad("expected a name"));
    match head {
        "pred" | "fn" => {
            let (first, rest) = args.split_first().ok_or_else(|| bad("missing symbol"))?;
            let sym = name(first)?;
            let terms = rest.iter().map(|a| sub(a, bound)).collect::<Result<Vec<_>, _>>()?;
            if terms.is_empty() {
                return Err(bad("application needs arguments"));
            }
            Ok(if head == "pred" { Term::Pred(sym, terms) } else { Term::Func(sym, terms) })
        }
        "lam" => {
            let [x, ty, body] = args else { return Err(bad("expected (lam x type body)")) };
            let x = name(x)?;
            let ty = SemType::from_sexp(ty).map_err(|e| TermSyntaxError(e.to_string()))?;
            bound.push(x.clone());
            let body = sub(body, bound);
            bound.pop();
            Ok(Term::Lam(x, ty, Box::new(body?)))
        }
        "iota" => {
            let [x, body] = args else { return Err(bad("expected (iota x body)")) };
            let x = name(x)?;
            bound.push(x.clone());
            let body = sub(body, bound);
            bound.pop();
            Ok(Term::Iota(x, Box::new(body?)))
        }
        "might" | "dia" => {
            let [frame, body] = args else { return Err(bad("expected (might FRAME body)")) };
            Ok(Term::Diamond(name(frame)?, Box::new(sub(body, bound)?)))
        }
        "app" | "and" | "eq" => {
            let [a, b] = args else { return Err(bad("expected two operands")) };
            let a = Box::new(sub(a, bound)?);
            let b = Box::new(sub(b, bound)?);
            Ok(match head {
                "app" => Term::App(a, b),
                "and" => Term::And(a, b),
                _ => Term::Eq(a, b),
            })
        }
        "not" => {
            let [a] = args else { return Err(bad("expected one operand")) };
            Ok(Term::Not(Box::new(sub(a, bound)?)))
        }
        _ => Err(bad("unknown operator")),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, items: &[&dyn fmt::Display]| {
            write!(f, "({head}")?;
            for it in items {
                write!(f, " {it}")?;
            }
            f.write_str(")")
        };
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(x) => f.write_str(x),
            Term::Pred(p, args) | Term::Func(p, args) => {
                let head = if matches!(self, Term::Pred(..)) { "pred" } else { "fn" };
                write!(f, "({head} {p}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Term::Lam(x, ty, b) => list(f, "lam", &[x, ty, b]),
            Term::App(a, b) => list(f, "app", &[a, b]),
            Term::Iota(x, b) => list(f, "iota", &[x, b]),
            Term::Diamond(frame, b) => list(f, "might", &[frame, b]),
            Term::And(a, b) => list(f, "and", &[a, b]),
            Term::Not(a) => list(f, "not", &[a]),
            Term::Eq(a, b) => list(f, "eq", &[a, b]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    Mismatch { path: String, expected: String, found: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown frame `{0}`")]
    UnknownFrame(String),
}

fn mismatch(path: &[String], expected: impl fmt::Display, found: impl fmt::Display) -> TypeError {
    TypeError::Mismatch {
        path: if path.is_empty() { "/".to_string() } else { path.join("/") },
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Infers the type of `t`. `gtypes` gives the types of free variables.
pub fn typecheck(t: &Term, m: &Model, gtypes: &BTreeMap<String, SemType>) -> Result<SemType, TypeError> {
    let mut env: Vec<(String, SemType)> = gtypes.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    infer(t, m, &mut env, &mut Vec::new())
}

/// Free-variable types induced by an assignment: every bound variable is an entity.
pub fn assignment_types(g: &Assignment) -> BTreeMap<String, SemType> {
    g.bindings().keys().map(|x| (x.clone(), SemType::E)).collect()
}

fn infer(
    t: &Term,
    m: &Model,
    env: &mut Vec<(String, SemType)>,
    path: &mut Vec<String>,
) -> Result<SemType, TypeError> {
    let at = |seg: String, t: &Term, env: &mut Vec<(String, SemType)>, path: &mut Vec<String>| {
        path.push(seg);
        let r = infer(t, m, env, path);
        path.pop();
        r
    };
    match t {
        Term::Const(c) => m
            .constant(c)
            .map(|k| k.ty.clone())
            .ok_or_else(|| TypeError::UnknownConstant(c.clone())),
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::Pred(p, args) => {
            let ty = m.constant(p).map(|k| k.ty.clone()).ok_or_else(|| TypeError::UnknownConstant(p.clone()))?;
            let places: Vec<SemType> = match (&ty, args.len()) {
                (SemType::RelOf(ts), _) => ts.clone(),
                (SemType::SetOf(a), 1) => vec![(**a).clone()],
                _ => return Err(mismatch(path, format!("a {}-place predicate", args.len()), &ty)),
            };
            if places.len() != args.len() {
                return Err(mismatch(path, &ty, format!("{} arguments", args.len())));
            }
            for (i, (arg, want)) in args.iter().zip(&places).enumerate() {
                let got = at(format!("{p}.{i}"), arg, env, path)?;
                if &got != want {
                    path.push(format!("{p}.{i}"));
                    let e = mismatch(path, want, got);
                    path.pop();
                    return Err(e);
                }
            }
            Ok(SemType::T)
        }
        Term::Func(f, args) => {
            let ty = m.constant(f).map(|k| k.ty.clone()).ok_or_else(|| TypeError::UnknownConstant(f.clone()))?;
            let SemType::Fn(dom, cod) = &ty else {
                return Err(mismatch(path, "a function constant", &ty));
            };
            let mut got = Vec::new();
            for (i, arg) in args.iter().enumerate() {
                got.push(at(format!("{f}.{i}"), arg, env, path)?);
            }
            let arg_ty = SemType::tuple_of(&got).expect("non-empty arguments");
            if arg_ty != **dom {
                return Err(mismatch(path, dom, arg_ty));
            }
            Ok((**cod).clone())
        }
        Term::Lam(x, ty, body) => {
            if *ty != SemType::E {
                return Err(mismatch(path, "an entity-typed variable", ty));
            }
            env.push((x.clone(), ty.clone()));
            let b = at("lam".into(), body, env, path);
            env.pop();
            Ok(SemType::func(ty.clone(), b?))
        }
        Term::App(fun, arg) => {
            let fty = at("fun".into(), fun, env, path)?;
            let aty = at("arg".into(), arg, env, path)?;
            match fty {
                SemType::Fn(dom, cod) if *dom == aty => Ok(*cod),
                SemType::Fn(dom, _) => Err(mismatch(path, dom, aty)),
                other => Err(mismatch(path, "a function", other)),
            }
        }
        Term::Iota(x, body) => {
            env.push((x.clone(), SemType::E));
            let b = at("iota".into(), body, env, path);
            env.pop();
            let b = b?;
            if b != SemType::T {
                return Err(mismatch(path, SemType::T, b));
            }
            Ok(SemType::E)
        }
        Term::Diamond(frame, body) => {
            if m.frame(frame).is_none() {
                return Err(TypeError::UnknownFrame(frame.clone()));
            }
            let b = at("might".into(), body, env, path)?;
            if b != SemType::T {
                return Err(mismatch(path, SemType::T, b));
            }
            Ok(SemType::T)
        }
        Term::And(a, b) => {
            for (seg, side) in [("and.0", a), ("and.1", b)] {
                let ty = at(seg.into(), side, env, path)?;
                if ty != SemType::T {
                    return Err(mismatch(path, SemType::T, ty));
                }
            }
            Ok(SemType::T)
        }
        Term::Not(a) => {
            let ty = at("not".into(), a, env, path)?;
            if ty != SemType::T {
                return Err(mismatch(path, SemType::T, ty));
            }
            Ok(SemType::T)
        }
        Term::Eq(a, b) => {
            let ta = at("eq.0".into(), a, env, path)?;
            let tb = at("eq.1".into(), b, env, path)?;
            if ta != tb {
                return Err(mismatch(path, ta, tb));
            }
            Ok(SemType::T)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("presupposition failure: {term} has {satisfiers} satisfiers")]
    PresuppositionFailure { term: String, satisfiers: usize },
    #[error("mode error: {0}")]
    ModeError(String),
    #[error("index {0} is not in the model's index space")]
    UnknownIndex(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("model is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
    #[error("internal evaluation error: {0}")]
    Internal(String),
}

fn check_preconditions(t: &Term, m: &Model, g: &Assignment) -> Result<SemType, EvalError> {
    let violations = m.validate();
    if !violations.is_empty() {
        return Err(EvalError::InvalidModel(violations));
    }
    for k in g.bindings().values() {
        if !m.entities().contains(k) {
            return Err(EvalError::Internal(format!("assignment binds unknown entity `{k}`")));
        }
    }
    Ok(typecheck(t, m, &assignment_types(g))?)
}

/// Denotation in an extensional model: no frames, or only trivial ones.
pub fn eval_ext(t: &Term, m: &Model, g: &Assignment) -> Result<Value, EvalError> {
    if let Some(f) = m.frames().iter().find(|f| !f.is_trivial()) {
        return Err(EvalError::ModeError(format!(
            "extensional evaluation needs trivial frames, `{}` is not",
            f.label()
        )));
    }
    check_preconditions(t, m, g)?;
    let space = m.index_space();
    let [only] = space.as_slice() else {
        return Err(EvalError::Internal("extensional model with several indices".into()));
    };
    let interp: BTreeMap<&str, &Value> = m
        .constants()
        .iter()
        .map(|c| (c.name.as_str(), c.table.get(only).expect("validated table")))
        .collect();
    let ev = ExtEval { m, interp };
    let den = ev.eval(t, g)?;
    ev.force(den)
}

struct ExtEval<'m> {
    m: &'m Model,
    interp: BTreeMap<&'m str, &'m Value>,
}

enum ExtDen<'t> {
    Val(Value),
    Closure { var: &'t str, body: &'t Term, env: Assignment },
}

impl<'m> ExtEval<'m> {
    fn lookup(&self, c: &str) -> Result<&'m Value, EvalError> {
        self.interp
            .get(c)
            .copied()
            .ok_or_else(|| EvalError::Type(TypeError::UnknownConstant(c.to_string())))
    }

    fn value(&self, t: &Term, g: &Assignment) -> Result<Value, EvalError> {
        let d = self.eval(t, g)?;
        self.force(d)
    }

    fn truth(&self, t: &Term, g: &Assignment) -> Result<bool, EvalError> {
        self.value(t, g)?
            .as_truth()
            .ok_or_else(|| EvalError::Internal(format!("{t} is not a truth value")))
    }

    fn force(&self, d: ExtDen<'_>) -> Result<Value, EvalError> {
        match d {
            ExtDen::Val(v) => Ok(v),
            ExtDen::Closure { var, body, env } => {
                let mut table = BTreeMap::new();
                for k in self.m.entities().elements() {
                    let v = self.value(body, &env.variant_unchecked(var, k))?;
                    table.insert(Value::Entity(k.clone()), v);
                }
                Ok(Value::Func(table))
            }
        }
    }

    fn eval<'t>(&self, t: &'t Term, g: &Assignment) -> Result<ExtDen<'t>, EvalError> {
        let val = |v| Ok(ExtDen::Val(v));
        match t {
            Term::Const(c) => val(self.lookup(c)?.clone()),
            Term::Var(x) => match g.get(x) {
                Some(k) => val(Value::Entity(k.to_string())),
                None => Err(TypeError::UnboundVariable(x.clone()).into()),
            },
            Term::Pred(p, args) => {
                let Value::Set(members) = self.lookup(p)? else {
                    return Err(EvalError::Internal(format!("predicate `{p}` is not a set")));
                };
                let vals = args.iter().map(|a| self.value(a, g)).collect::<Result<Vec<_>, _>>()?;
                let probe = match self.m.constant(p).map(|c| &c.ty) {
                    Some(SemType::SetOf(_)) => vals.into_iter().next().expect("one argument"),
                    _ => Value::Tuple(vals),
                };
                val(Value::Truth(members.contains(&probe)))
            }
            Term::Func(f, args) => {
                let Value::Func(table) = self.lookup(f)? else {
                    return Err(EvalError::Internal(format!("`{f}` is not a function")));
                };
                let vals = args.iter().map(|a| self.value(a, g)).collect::<Result<Vec<_>, _>>()?;
                let key = Value::tuple_of(vals).expect("non-empty arguments");
                match table.get(&key) {
                    Some(v) => val(v.clone()),
                    None => Err(EvalError::Internal(format!("`{f}` undefined at {key}"))),
                }
            }
            Term::Lam(x, _, body) => Ok(ExtDen::Closure { var: x, body, env: g.clone() }),
            Term::App(fun, arg) => {
                let f = self.eval(fun, g)?;
                let a = self.value(arg, g)?;
                match f {
                    ExtDen::Closure { var, body, env } => match a {
                        Value::Entity(k) => self.eval(body, &env.variant_unchecked(var, &k)),
                        other => Err(EvalError::Internal(format!("lambda applied to non-entity {other}"))),
                    },
                    ExtDen::Val(Value::Func(table)) => match table.get(&a) {
                        Some(v) => val(v.clone()),
                        None => Err(EvalError::Internal(format!("function undefined at {a}"))),
                    },
                    ExtDen::Val(other) => Err(EvalError::Internal(format!("{other} applied as a function"))),
                }
            }
            Term::Iota(x, body) => {
                let mut found = Vec::new();
                for k in self.m.entities().elements() {
                    if self.truth(body, &g.variant_unchecked(x, k))? {
                        found.push(k.clone());
                    }
                }
                match found.as_slice() {
                    [k] => val(Value::Entity(k.clone())),
                    _ => Err(EvalError::PresuppositionFailure {
                        term: t.to_string(),
                        satisfiers: found.len(),
                    }),
                }
            }
            Term::Diamond(frame, _) => Err(EvalError::ModeError(format!(
                "modal operator over `{frame}` has no extensional denotation"
            ))),
            Term::And(a, b) => {
                let (x, y) = (self.truth(a, g)?, self.truth(b, g)?);
                val(Value::Truth(x && y))
            }
            Term::Not(a) => val(Value::Truth(!self.truth(a, g)?)),
            Term::Eq(a, b) => {
                let (x, y) = (self.value(a, g)?, self.value(b, g)?);
                val(Value::Truth(x == y))
            }
        }
    }
}

/// Denotation in an intensional model at index `s`.
pub fn eval_int(t: &Term, m: &Model, g: &Assignment, s: &Index) -> Result<Value, EvalError> {
    if !m.contains_index(s) {
        return Err(EvalError::UnknownIndex(s.to_string()));
    }
    check_preconditions(t, m, g)?;
    let ev = IntEval { m };
    let den = ev.eval(t, g, s)?;
    ev.force(den)
}

/// `eval_int` at every index, in index-space order.
pub fn eval_all_indices(t: &Term, m: &Model, g: &Assignment) -> Result<Vec<(Index, Value)>, EvalError> {
    check_preconditions(t, m, g)?;
    let ev = IntEval { m };
    m.index_space()
        .into_iter()
        .map(|s| {
            let d = ev.eval(t, g, &s)?;
            Ok((s.clone(), ev.force(d)?))
        })
        .collect()
}

struct IntEval<'m> {
    m: &'m Model,
}

enum IntDen<'t> {
    Val(Value),
    Closure { var: &'t str, body: &'t Term, env: Assignment, at: Index },
}

impl<'m> IntEval<'m> {
    fn intension_at(&self, c: &str, s: &Index) -> Result<&'m Value, EvalError> {
        let k = self
            .m
            .constant(c)
            .ok_or_else(|| EvalError::Type(TypeError::UnknownConstant(c.to_string())))?;
        k.table
            .get(s)
            .ok_or_else(|| EvalError::Internal(format!("`{c}` has no entry at {s}")))
    }

    fn value(&self, t: &Term, g: &Assignment, s: &Index) -> Result<Value, EvalError> {
        let d = self.eval(t, g, s)?;
        self.force(d)
    }

    fn truth(&self, t: &Term, g: &Assignment, s: &Index) -> Result<bool, EvalError> {
        match self.value(t, g, s)? {
            Value::Truth(b) => Ok(b),
            other => Err(EvalError::Internal(format!("{t} evaluated to {other}, not a truth value"))),
        }
    }

    fn force(&self, d: IntDen<'_>) -> Result<Value, EvalError> {
        match d {
            IntDen::Val(v) => Ok(v),
            IntDen::Closure { var, body, env, at } => {
                let table = self
                    .m
                    .entities()
                    .elements()
                    .iter()
                    .map(|k| Ok((Value::Entity(k.clone()), self.value(body, &env.variant_unchecked(var, k), &at)?)))
                    .collect::<Result<BTreeMap<_, _>, EvalError>>()?;
                Ok(Value::Func(table))
            }
        }
    }

    fn eval<'t>(&self, t: &'t Term, g: &Assignment, s: &Index) -> Result<IntDen<'t>, EvalError> {
        match t {
            Term::Const(c) => Ok(IntDen::Val(self.intension_at(c, s)?.clone())),
            Term::Var(x) => g
                .get(x)
                .map(|k| IntDen::Val(Value::Entity(k.to_string())))
                .ok_or_else(|| TypeError::UnboundVariable(x.clone()).into()),
            Term::Pred(p, args) => {
                let extension = self.intension_at(p, s)?;
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.value(a, g, s)?);
                }
                let unary_set = matches!(self.m.constant(p).map(|c| &c.ty), Some(SemType::SetOf(_)));
                let held = match extension {
                    Value::Set(members) if unary_set => members.contains(&vals[0]),
                    Value::Set(members) => members.contains(&Value::Tuple(vals)),
                    other => return Err(EvalError::Internal(format!("predicate `{p}` denotes {other}"))),
                };
                Ok(IntDen::Val(Value::Truth(held)))
            }
            Term::Func(f, args) => {
                let extension = self.intension_at(f, s)?;
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.value(a, g, s)?);
                }
                let key = Value::tuple_of(vals).expect("non-empty arguments");
                match extension {
                    Value::Func(table) => table
                        .get(&key)
                        .map(|v| IntDen::Val(v.clone()))
                        .ok_or_else(|| EvalError::Internal(format!("`{f}` undefined at {key} in {s}"))),
                    other => Err(EvalError::Internal(format!("`{f}` denotes {other}"))),
                }
            }
            Term::Lam(x, _, body) => Ok(IntDen::Closure { var: x, body, env: g.clone(), at: s.clone() }),
            Term::App(fun, arg) => {
                let f = self.eval(fun, g, s)?;
                let a = self.value(arg, g, s)?;
                match (f, a) {
                    (IntDen::Closure { var, body, env, at }, Value::Entity(k)) => {
                        self.eval(body, &env.variant_unchecked(var, &k), &at)
                    }
                    (IntDen::Closure { .. }, other) => {
                        Err(EvalError::Internal(format!("lambda applied to non-entity {other}")))
                    }
                    (IntDen::Val(Value::Func(table)), a) => table
                        .get(&a)
                        .map(|v| IntDen::Val(v.clone()))
                        .ok_or_else(|| EvalError::Internal(format!("function undefined at {a}"))),
                    (IntDen::Val(other), _) => Err(EvalError::Internal(format!("{other} applied as a function"))),
                }
            }
            Term::Iota(x, body) => {
                let mut satisfiers = Vec::new();
                for k in self.m.entities().elements() {
                    if self.truth(body, &g.variant_unchecked(x, k), s)? {
                        satisfiers.push(k);
                    }
                }
                if satisfiers.len() == 1 {
                    Ok(IntDen::Val(Value::Entity(satisfiers[0].clone())))
                } else {
                    Err(EvalError::PresuppositionFailure { term: t.to_string(), satisfiers: satisfiers.len() })
                }
            }
            Term::Diamond(label, body) => {
                let frame = self
                    .m
                    .frame(label)
                    .ok_or_else(|| EvalError::Type(TypeError::UnknownFrame(label.clone())))?;
                let here = s.get(label).ok_or_else(|| EvalError::UnknownIndex(s.to_string()))?;
                let mut any = false;
                for next in frame.successors(here) {
                    any |= self.truth(body, g, &s.with(label, next))?;
                }
                Ok(IntDen::Val(Value::Truth(any)))
            }
            Term::And(a, b) => {
                let x = self.truth(a, g, s)?;
                let y = self.truth(b, g, s)?;
                Ok(IntDen::Val(Value::Truth(x && y)))
            }
            Term::Not(a) => Ok(IntDen::Val(Value::Truth(!self.truth(a, g, s)?))),
            Term::Eq(a, b) => {
                let x = self.value(a, g, s)?;
                let y = self.value(b, g, s)?;
                Ok(IntDen::Val(Value::Truth(x == y)))
            }
        }
    }
}
