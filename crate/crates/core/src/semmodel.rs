//! Semantic types, values, and finite extensional/intensional models.
//!
//! A model carries an entity domain, an ordered family of labelled Kripke
//! frames and an interpretation table per constant. Intensions are stored as
//! finite tables from indices (one element per frame, in frame order) to
//! values; a frame-free model has a single empty index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::kripke::Frame;
use crate::relalg::{FinSet, RelError};
use crate::sexpr::{self, Sexp};

/// Default upper bound on enumerated type domains.
pub const DEFAULT_DOMAIN_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the entity domain must be non-empty")]
    EmptyEntityDomain,
    #[error("duplicate frame label `{0}`")]
    DuplicateFrame(String),
    #[error("unknown frame `{0}`")]
    UnknownFrame(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("type {ty} mentions frame `{label}` which the model does not declare")]
    UngroundedType { ty: String, label: String },
    #[error("domain of type {ty} has more than {bound} elements")]
    DomainTooLarge { ty: String, bound: u128 },
    #[error("type syntax: {0}")]
    TypeSyntax(String),
    #[error("model is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Relation(#[from] RelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    E,
    T,
    /// Index type of the frame with this label.
    S(String),
    Pair(Box<SemType>, Box<SemType>),
    SetOf(Box<SemType>),
    /// Relation over `α1 × … × αn`: a set of n-tuples.
    RelOf(Vec<SemType>),
    Fn(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn pair(a: SemType, b: SemType) -> SemType {
        SemType::Pair(Box::new(a), Box::new(b))
    }

    pub fn set_of(a: SemType) -> SemType {
        SemType::SetOf(Box::new(a))
    }

    pub fn func(a: SemType, b: SemType) -> SemType {
        SemType::Fn(Box::new(a), Box::new(b))
    }

    /// `(rel e … e)` with `arity` entity places.
    pub fn entity_relation(arity: usize) -> SemType {
        SemType::RelOf(vec![SemType::E; arity])
    }

    /// Argument type for an n-ary application: the single type, or right-nested pairs.
    pub fn tuple_of(types: &[SemType]) -> Option<SemType> {
        let (last, init) = types.split_last()?;
        Some(init.iter().rev().fold(last.clone(), |acc, t| SemType::pair(t.clone(), acc)))
    }

    /// Frame labels mentioned anywhere in the type.
    pub fn frame_labels(&self, out: &mut BTreeSet<String>) {
        match self {
            SemType::E | SemType::T => {}
            SemType::S(l) => {
                out.insert(l.clone());
            }
            SemType::Pair(a, b) | SemType::Fn(a, b) => {
                a.frame_labels(out);
                b.frame_labels(out);
            }
            SemType::SetOf(a) => a.frame_labels(out),
            SemType::RelOf(ts) => ts.iter().for_each(|t| t.frame_labels(out)),
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<SemType, ModelError> {
        let bad = || ModelError::TypeSyntax(s.to_string());
        match s {
            Sexp::Atom(a) if a == "e" => Ok(SemType::E),
            Sexp::Atom(a) if a == "t" => Ok(SemType::T),
            Sexp::Atom(_) => Err(bad()),
            Sexp::List(items) => {
                let head = items.first().and_then(Sexp::as_atom).ok_or_else(bad)?;
                let args = &items[1..];
                match (head, args) {
                    ("s", [Sexp::Atom(label)]) => Ok(SemType::S(label.clone())),
                    ("pair", [a, b]) => Ok(SemType::pair(Self::from_sexp(a)?, Self::from_sexp(b)?)),
                    ("set", [a]) => Ok(SemType::set_of(Self::from_sexp(a)?)),
                    ("rel", ts) if !ts.is_empty() => {
                        Ok(SemType::RelOf(ts.iter().map(Self::from_sexp).collect::<Result<_, _>>()?))
                    }
                    ("fn", [a, b]) => Ok(SemType::func(Self::from_sexp(a)?, Self::from_sexp(b)?)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl FromStr for SemType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sexp = sexpr::parse(s).map_err(|e| ModelError::TypeSyntax(format!("{s}: {e}")))?;
        SemType::from_sexp(&sexp)
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::S(l) => write!(f, "(s {l})"),
            SemType::Pair(a, b) => write!(f, "(pair {a} {b})"),
            SemType::SetOf(a) => write!(f, "(set {a})"),
            SemType::RelOf(ts) => {
                f.write_str("(rel")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
            SemType::Fn(a, b) => write!(f, "(fn {a} {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Entity(String),
    Truth(bool),
    IndexElem { frame: String, elem: String },
    Tuple(Vec<Value>),
    Set(BTreeSet<Value>),
    Func(BTreeMap<Value, Value>),
}

impl Value {
    pub fn entity(e: impl Into<String>) -> Value {
        Value::Entity(e.into())
    }

    pub fn as_truth(&self) -> Option<bool> {
        match self {
            Value::Truth(b) => Some(*b),
            _ => None,
        }
    }

    /// Argument value for an n-ary application; mirrors [`SemType::tuple_of`].
    pub fn tuple_of(values: Vec<Value>) -> Option<Value> {
        let mut values = values;
        let last = values.pop()?;
        Some(values.into_iter().rev().fold(last, |acc, v| Value::Tuple(vec![v, acc])))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Entity(e) => f.write_str(e),
            Value::Truth(b) => f.write_str(if *b { "1" } else { "0" }),
            Value::IndexElem { frame, elem } => write!(f, "{frame}:{elem}"),
            Value::Tuple(vs) => write_seq(f, "<", ">", vs.iter().map(|v| v.to_string())),
            Value::Set(vs) => write_seq(f, "{", "}", vs.iter().map(|v| v.to_string())),
            Value::Func(m) => write_seq(f, "[", "]", m.iter().map(|(k, v)| format!("{k} -> {v}"))),
        }
    }
}

fn write_seq(
    f: &mut fmt::Formatter<'_>,
    open: &str,
    close: &str,
    items: impl Iterator<Item = String>,
) -> fmt::Result {
    f.write_str(open)?;
    f.write_str(&items.collect::<Vec<_>>().join(", "))?;
    f.write_str(close)
}

/// A point of evaluation: one element per frame, in the model's frame order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Index {
    components: Vec<(String, String)>,
}

impl Index {
    pub fn new(components: Vec<(String, String)>) -> Self {
        Index { components }
    }

    pub fn empty() -> Self {
        Index::default()
    }

    pub fn components(&self) -> &[(String, String)] {
        &self.components
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.components.iter().find(|(l, _)| l == label).map(|(_, e)| e.as_str())
    }

    /// Copy with the `label` component rebound.
    pub fn with(&self, label: &str, elem: &str) -> Index {
        let mut next = self.clone();
        for (l, e) in &mut next.components {
            if l == label {
                *e = elem.to_string();
            }
        }
        next
    }

    pub fn elements(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(|(_, e)| e.as_str())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<&str> = self.elements().collect();
        f.write_str(&parts.join(","))
    }
}

/// Variable bindings `g: V → D_e`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    bindings: BTreeMap<String, String>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.bindings.get(var).map(String::as_str)
    }

    pub fn bindings(&self) -> &BTreeMap<String, String> {
        &self.bindings
    }

    /// `g[x ↦ k]`, overriding any existing binding of `x`.
    pub fn variant(&self, entities: &FinSet, var: &str, entity: &str) -> Result<Assignment, ModelError> {
        if !entities.contains(entity) {
            return Err(ModelError::UnknownEntity(entity.to_string()));
        }
        Ok(self.variant_unchecked(var, entity))
    }

    pub(crate) fn variant_unchecked(&self, var: &str, entity: &str) -> Assignment {
        let mut next = self.clone();
        next.bindings.insert(var.to_string(), entity.to_string());
        next
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bindings.iter().map(|(x, k)| format!("{x}={k}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A non-logical constant with its intension table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constant {
    pub name: String,
    pub ty: SemType,
    pub table: BTreeMap<Index, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateConstant(String),
    UngroundedType { constant: String, label: String },
    MissingIndexEntry { constant: String, index: String },
    UnexpectedIndexEntry { constant: String, index: String },
    IllTypedValue { constant: String, index: String, reason: String },
    UnknownDesignated { frame: String, element: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateConstant(c) => write!(f, "constant `{c}` declared twice"),
            Violation::UngroundedType { constant, label } => {
                write!(f, "constant `{constant}`: type mentions undeclared frame `{label}`")
            }
            Violation::MissingIndexEntry { constant, index } => {
                write!(f, "constant `{constant}`: no entry for index {index}")
            }
            Violation::UnexpectedIndexEntry { constant, index } => {
                write!(f, "constant `{constant}`: entry for {index} is not an index of the model")
            }
            Violation::IllTypedValue { constant, index, reason } => {
                write!(f, "constant `{constant}` at {index}: {reason}")
            }
            Violation::UnknownDesignated { frame, element } => {
                write!(f, "designated element `{element}` is not in frame `{frame}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    entities: Arc<FinSet>,
    frames: Vec<Frame>,
    constants: Vec<Constant>,
    designated: BTreeMap<String, String>,
}

impl Model {
    pub fn new<S: Into<String>>(
        entities: impl IntoIterator<Item = S>,
        frames: Vec<Frame>,
    ) -> Result<Self, ModelError> {
        let entities = FinSet::new("e", entities)?;
        if entities.is_empty() {
            return Err(ModelError::EmptyEntityDomain);
        }
        let mut seen = BTreeSet::new();
        for f in &frames {
            if !seen.insert(f.label().to_string()) {
                return Err(ModelError::DuplicateFrame(f.label().to_string()));
            }
        }
        Ok(Model {
            entities: Arc::new(entities),
            frames,
            constants: Vec::new(),
            designated: BTreeMap::new(),
        })
    }

    pub fn entities(&self) -> &Arc<FinSet> {
        &self.entities
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, label: &str) -> Option<&Frame> {
        self.frames.iter().find(|f| f.label() == label)
    }

    pub fn frame_position(&self, label: &str) -> Option<usize> {
        self.frames.iter().position(|f| f.label() == label)
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<&Constant> {
        self.constants.iter().find(|c| c.name == name)
    }

    pub fn add_constant(&mut self, name: impl Into<String>, ty: SemType, table: BTreeMap<Index, Value>) {
        self.constants.push(Constant { name: name.into(), ty, table });
    }

    /// Adds a constant whose value is the same at every index.
    pub fn add_rigid_constant(&mut self, name: impl Into<String>, ty: SemType, value: Value) {
        let table = self.index_space().into_iter().map(|s| (s, value.clone())).collect();
        self.add_constant(name, ty, table);
    }

    pub(crate) fn constants_mut(&mut self) -> &mut Vec<Constant> {
        &mut self.constants
    }

    pub(crate) fn frames_mut(&mut self) -> &mut Vec<Frame> {
        &mut self.frames
    }

    /// Explicit designations only.
    pub fn designations(&self) -> &BTreeMap<String, String> {
        &self.designated
    }

    /// Designated element of a frame: the explicit choice, else the first element.
    pub fn designated(&self, label: &str) -> Option<&str> {
        let frame = self.frame(label)?;
        Some(
            self.designated
                .get(label)
                .map(String::as_str)
                .unwrap_or_else(|| frame.domain().element(0)),
        )
    }

    pub fn set_designated(&mut self, label: impl Into<String>, element: impl Into<String>) {
        self.designated.insert(label.into(), element.into());
    }

    pub(crate) fn clear_designated(&mut self, label: &str) {
        self.designated.remove(label);
    }

    /// No frames, or only trivial ones.
    pub fn is_extensional(&self) -> bool {
        self.frames.iter().all(Frame::is_trivial)
    }

    /// Lexicographic enumeration of the product of frame domains.
    pub fn index_space(&self) -> Vec<Index> {
        let mut out = vec![Vec::new()];
        for frame in &self.frames {
            let mut next = Vec::with_capacity(out.len() * frame.domain().len());
            for prefix in &out {
                for e in frame.domain().elements() {
                    let mut comps: Vec<(String, String)> = prefix.clone();
                    comps.push((frame.label().to_string(), e.clone()));
                    next.push(comps);
                }
            }
            out = next;
        }
        out.into_iter().map(Index::new).collect()
    }

    pub fn contains_index(&self, s: &Index) -> bool {
        s.components().len() == self.frames.len()
            && self
                .frames
                .iter()
                .zip(s.components())
                .all(|(f, (l, e))| f.label() == l && f.domain().contains(e))
    }

    /// Parses comma-separated element ids in frame order.
    pub fn parse_index(&self, text: &str) -> Result<Index, ModelError> {
        let parts: Vec<&str> = if text.trim().is_empty() || text.trim() == "()" {
            Vec::new()
        } else {
            text.split(',').map(str::trim).collect()
        };
        if parts.len() != self.frames.len() {
            return Err(ModelError::UnknownFrame(format!(
                "index `{text}` has {} components, model has {} frames",
                parts.len(),
                self.frames.len()
            )));
        }
        let mut comps = Vec::new();
        for (frame, part) in self.frames.iter().zip(parts) {
            if !frame.domain().contains(part) {
                return Err(ModelError::Relation(RelError::UnknownElement {
                    set: frame.label().to_string(),
                    element: part.to_string(),
                }));
            }
            comps.push((frame.label().to_string(), part.to_string()));
        }
        Ok(Index::new(comps))
    }

    fn check_grounded(&self, ty: &SemType) -> Result<(), ModelError> {
        let mut labels = BTreeSet::new();
        ty.frame_labels(&mut labels);
        match labels.into_iter().find(|l| self.frame(l).is_none()) {
            Some(label) => Err(ModelError::UngroundedType { ty: ty.to_string(), label }),
            None => Ok(()),
        }
    }

    pub fn cardinality(&self, ty: &SemType) -> Result<Option<u128>, ModelError> {
        self.check_grounded(ty)?;
        Ok(self.cardinality_unchecked(ty))
    }

    fn cardinality_unchecked(&self, ty: &SemType) -> Option<u128> {
        fn pow(base: u128, exp: u128) -> Option<u128> {
            let exp = u32::try_from(exp).ok()?;
            base.checked_pow(exp)
        }
        match ty {
            SemType::E => Some(self.entities.len() as u128),
            SemType::T => Some(2),
            SemType::S(l) => self.frame(l).map(|f| f.domain().len() as u128),
            SemType::Pair(a, b) => self.cardinality_unchecked(a)?.checked_mul(self.cardinality_unchecked(b)?),
            SemType::SetOf(a) => pow(2, self.cardinality_unchecked(a)?),
            SemType::RelOf(ts) => {
                let tuples = ts
                    .iter()
                    .try_fold(1u128, |acc, t| acc.checked_mul(self.cardinality_unchecked(t)?))?;
                pow(2, tuples)
            }
            SemType::Fn(a, b) => pow(self.cardinality_unchecked(b)?, self.cardinality_unchecked(a)?),
        }
    }

    /// Canonical enumeration of the domain of `ty`.
    pub fn type_domain(&self, ty: &SemType, bound: u128) -> Result<Vec<Value>, ModelError> {
        self.check_grounded(ty)?;
        match self.cardinality_unchecked(ty) {
            Some(n) if n <= bound => Ok(self.enumerate(ty)),
            _ => Err(ModelError::DomainTooLarge { ty: ty.to_string(), bound }),
        }
    }

    fn enumerate(&self, ty: &SemType) -> Vec<Value> {
        match ty {
            SemType::E => self.entities.elements().iter().map(|e| Value::Entity(e.clone())).collect(),
            SemType::T => vec![Value::Truth(false), Value::Truth(true)],
            SemType::S(l) => {
                let frame = self.frame(l).expect("grounded");
                frame
                    .domain()
                    .elements()
                    .iter()
                    .map(|e| Value::IndexElem { frame: l.clone(), elem: e.clone() })
                    .collect()
            }
            SemType::Pair(a, b) => {
                let bs = self.enumerate(b);
                self.enumerate(a)
                    .into_iter()
                    .flat_map(|x| bs.iter().map(move |y| Value::Tuple(vec![x.clone(), y.clone()])))
                    .collect()
            }
            SemType::SetOf(a) => power_set(&self.enumerate(a)),
            SemType::RelOf(ts) => power_set(&self.tuples(ts)),
            SemType::Fn(a, b) => {
                let args = self.enumerate(a);
                let results = self.enumerate(b);
                let mut out = Vec::new();
                if results.is_empty() && !args.is_empty() {
                    return out;
                }
                // odometer with the first argument most significant
                let mut digits = vec![0usize; args.len()];
                loop {
                    out.push(Value::Func(
                        args.iter().cloned().zip(digits.iter().map(|&d| results[d].clone())).collect(),
                    ));
                    let mut i = digits.len();
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < results.len() {
                            break;
                        }
                        digits[i] = 0;
                    }
                }
            }
        }
    }

    fn tuples(&self, ts: &[SemType]) -> Vec<Value> {
        let mut out: Vec<Vec<Value>> = vec![Vec::new()];
        for t in ts {
            let dom = self.enumerate(t);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    dom.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Value::Tuple).collect()
    }

    /// Checks that `value` inhabits `ty`, explaining the first failure.
    pub fn inhabits(&self, value: &Value, ty: &SemType) -> Result<(), String> {
        match (ty, value) {
            (SemType::E, Value::Entity(e)) => {
                if self.entities.contains(e) {
                    Ok(())
                } else {
                    Err(format!("entity `{e}` is outside D_e"))
                }
            }
            (SemType::T, Value::Truth(_)) => Ok(()),
            (SemType::S(l), Value::IndexElem { frame, elem }) => match self.frame(l) {
                Some(f) if frame == l && f.domain().contains(elem) => Ok(()),
                _ => Err(format!("`{frame}:{elem}` is not an element of frame {l}")),
            },
            (SemType::Pair(a, b), Value::Tuple(vs)) if vs.len() == 2 => {
                self.inhabits(&vs[0], a)?;
                self.inhabits(&vs[1], b)
            }
            (SemType::SetOf(a), Value::Set(vs)) => vs.iter().try_for_each(|v| self.inhabits(v, a)),
            (SemType::RelOf(ts), Value::Set(vs)) => vs.iter().try_for_each(|v| match v {
                Value::Tuple(items) if items.len() == ts.len() => {
                    items.iter().zip(ts).try_for_each(|(item, t)| self.inhabits(item, t))
                }
                other => Err(format!("`{other}` is not a {}-tuple", ts.len())),
            }),
            (SemType::Fn(a, b), Value::Func(map)) => {
                for (k, v) in map {
                    self.inhabits(k, a)?;
                    self.inhabits(v, b)?;
                }
                match self.cardinality_unchecked(a) {
                    Some(n) if n == map.len() as u128 => Ok(()),
                    _ => Err(format!("function `{value}` is not total over {a}")),
                }
            }
            _ => Err(format!("`{value}` does not have type {ty}")),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let space = self.index_space();
        let mut names = BTreeSet::new();
        for (label, element) in &self.designated {
            match self.frame(label) {
                Some(f) if f.domain().contains(element) => {}
                _ => out.push(Violation::UnknownDesignated {
                    frame: label.clone(),
                    element: element.clone(),
                }),
            }
        }
        for c in &self.constants {
            if !names.insert(c.name.as_str()) {
                out.push(Violation::DuplicateConstant(c.name.clone()));
            }
            if let Err(ModelError::UngroundedType { label, .. }) = self.check_grounded(&c.ty) {
                out.push(Violation::UngroundedType { constant: c.name.clone(), label });
                continue;
            }
            for s in &space {
                match c.table.get(s) {
                    None => out.push(Violation::MissingIndexEntry {
                        constant: c.name.clone(),
                        index: s.to_string(),
                    }),
                    Some(v) => {
                        if let Err(reason) = self.inhabits(v, &c.ty) {
                            out.push(Violation::IllTypedValue {
                                constant: c.name.clone(),
                                index: s.to_string(),
                                reason,
                            });
                        }
                    }
                }
            }
            for s in c.table.keys() {
                if !self.contains_index(s) {
                    out.push(Violation::UnexpectedIndexEntry {
                        constant: c.name.clone(),
                        index: s.to_string(),
                    });
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    /// Equality of entity domain, frames and every interpretation table.
    pub fn structurally_eq(&self, other: &Model) -> bool {
        if self.entities != other.entities || self.frames != other.frames {
            return false;
        }
        if self.constants.len() != other.constants.len() {
            return false;
        }
        self.constants.iter().all(|c| {
            other
                .constant(&c.name)
                .is_some_and(|o| o.ty == c.ty && o.table == c.table)
        })
    }

    /// Renders a value with sets and maps sorted by canonical element order.
    pub fn show_value(&self, value: &Value) -> String {
        match value {
            Value::Entity(_) | Value::Truth(_) | Value::IndexElem { .. } => value.to_string(),
            Value::Tuple(vs) => {
                format!("<{}>", vs.iter().map(|v| self.show_value(v)).collect::<Vec<_>>().join(","))
            }
            Value::Set(vs) => {
                let mut items: Vec<&Value> = vs.iter().collect();
                items.sort_by_key(|v| self.sort_key(v));
                let shown: Vec<String> = items.into_iter().map(|v| self.show_value(v)).collect();
                format!("{{{}}}", shown.join(", "))
            }
            Value::Func(map) => {
                let mut items: Vec<(&Value, &Value)> = map.iter().collect();
                items.sort_by_key(|(k, _)| self.sort_key(k));
                let shown: Vec<String> = items
                    .into_iter()
                    .map(|(k, v)| format!("{} -> {}", self.show_value(k), self.show_value(v)))
                    .collect();
                format!("[{}]", shown.join(", "))
            }
        }
    }

    /// Key ordering values by canonical element order.
    pub fn sort_key(&self, value: &Value) -> Vec<usize> {
        match value {
            Value::Entity(e) => vec![self.entities.position(e).unwrap_or(usize::MAX)],
            Value::Truth(b) => vec![usize::from(*b)],
            Value::IndexElem { frame, elem } => {
                let fpos = self.frame_position(frame).unwrap_or(usize::MAX);
                let epos = self
                    .frame(frame)
                    .and_then(|f| f.domain().position(elem))
                    .unwrap_or(usize::MAX);
                vec![fpos, epos]
            }
            Value::Tuple(vs) => {
                let mut key = vec![vs.len()];
                vs.iter().for_each(|v| key.extend(self.sort_key(v)));
                key
            }
            Value::Set(vs) => {
                let mut keys: Vec<Vec<usize>> = vs.iter().map(|v| self.sort_key(v)).collect();
                keys.sort();
                let mut key = vec![vs.len()];
                keys.into_iter().for_each(|k| key.extend(k));
                key
            }
            Value::Func(map) => {
                let mut keys: Vec<(Vec<usize>, Vec<usize>)> =
                    map.iter().map(|(k, v)| (self.sort_key(k), self.sort_key(v))).collect();
                keys.sort();
                keys.into_iter().flat_map(|(_, v)| v).collect()
            }
        }
    }
}

fn power_set(items: &[Value]) -> Vec<Value> {
    let n = items.len();
    (0u64..(1u64 << n))
        .map(|mask| {
            Value::Set(
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| v.clone())
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_frames() -> Model {
        let w = Frame::from_parts("W", ["w1", "w2"], [("w1", "w2")]).unwrap();
        let t = Frame::from_parts("T", ["t1", "t2"], [("t1", "t2")]).unwrap();
        Model::new(["s1", "b1"], vec![w, t]).unwrap()
    }

    #[test]
    fn index_space_is_lexicographic() {
        let m = two_frames();
        let shown: Vec<String> = m.index_space().iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["w1,t1", "w1,t2", "w2,t1", "w2,t2"]);

        let plain = Model::new(["a"], vec![]).unwrap();
        assert_eq!(plain.index_space(), vec![Index::empty()]);

        let frames = vec![
            Frame::from_parts("W", ["w1", "w2", "w3"], []).unwrap(),
            Frame::from_parts("T", ["t1", "t2"], []).unwrap(),
            Frame::from_parts("L", ["l1", "l2"], []).unwrap(),
        ];
        assert_eq!(Model::new(["a"], frames).unwrap().index_space().len(), 12);
    }

    #[test]
    fn entity_domain_must_be_inhabited() {
        assert_eq!(
            Model::new(Vec::<String>::new(), vec![]).unwrap_err(),
            ModelError::EmptyEntityDomain
        );
    }

    #[test]
    fn validate_reports_missing_and_ill_typed_entries() {
        let mut m = two_frames();
        m.add_rigid_constant(
            "student",
            SemType::entity_relation(1),
            Value::Set([Value::Tuple(vec![Value::entity("s1")])].into()),
        );
        assert!(m.validate().is_empty());

        let mut table: BTreeMap<Index, Value> = m
            .index_space()
            .into_iter()
            .map(|s| (s, Value::Set(BTreeSet::new())))
            .collect();
        let first = m.index_space()[0].clone();
        table.remove(&first);
        m.add_constant("book", SemType::entity_relation(1), table);
        let v = m.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::MissingIndexEntry { constant, .. } if constant == "book"));

        let mut bad = Model::new(["s1"], vec![]).unwrap();
        bad.add_rigid_constant(
            "student",
            SemType::entity_relation(1),
            Value::Set([Value::Tuple(vec![Value::entity("zz")])].into()),
        );
        let v = bad.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::IllTypedValue { .. }));
    }

    #[test]
    fn assignment_variants() {
        let m = two_frames();
        let g = Assignment::new();
        let g1 = g.variant(m.entities(), "x", "s1").unwrap();
        assert_eq!(g1.get("x"), Some("s1"));
        assert_eq!(g.get("x"), None);
        let g2 = g1.variant(m.entities(), "x", "b1").unwrap();
        assert_eq!(g2.get("x"), Some("b1"));
        let h = g.variant(m.entities(), "y", "b1").unwrap().variant(m.entities(), "x", "s1").unwrap();
        assert_eq!(h.get("y"), Some("b1"));
        assert_eq!(h.get("x"), Some("s1"));
        assert!(matches!(
            g.variant(m.entities(), "x", "nobody"),
            Err(ModelError::UnknownEntity(_))
        ));
    }

    #[test]
    fn type_domains() {
        let m = two_frames();
        assert_eq!(
            m.type_domain(&SemType::T, DEFAULT_DOMAIN_BOUND).unwrap(),
            vec![Value::Truth(false), Value::Truth(true)]
        );
        let fns = m.type_domain(&SemType::func(SemType::E, SemType::T), DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(fns.len(), 4);
        assert_eq!(fns[1].to_string(), "[b1 -> 1, s1 -> 0]");
        assert_eq!(m.show_value(&fns[1]), "[s1 -> 0, b1 -> 1]");
        let pairs = m.type_domain(&SemType::pair(SemType::E, SemType::T), DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(pairs.len(), 4);
        let sets = m.type_domain(&SemType::set_of(SemType::E), DEFAULT_DOMAIN_BOUND).unwrap();
        assert_eq!(m.show_value(&sets[3]), "{s1, b1}");
        assert_eq!(m.type_domain(&SemType::S("W".into()), 10).unwrap().len(), 2);
        assert!(matches!(
            m.type_domain(&SemType::S("L".into()), 10),
            Err(ModelError::UngroundedType { .. })
        ));
        assert!(matches!(
            m.type_domain(&SemType::set_of(SemType::set_of(SemType::set_of(SemType::E))), 1000),
            Err(ModelError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn type_syntax_round_trips() {
        for text in ["e", "t", "(s W)", "(pair e t)", "(set e)", "(rel e e)", "(fn (pair e e) e)"] {
            assert_eq!(text.parse::<SemType>().unwrap().to_string(), text);
        }
        assert!("(fn e)".parse::<SemType>().is_err());
        assert!("q".parse::<SemType>().is_err());
    }

    #[test]
    fn tuple_helpers_nest_to_the_right() {
        let ty = SemType::tuple_of(&[SemType::E, SemType::E, SemType::T]).unwrap();
        assert_eq!(ty.to_string(), "(pair e (pair e t))");
        let v = Value::tuple_of(vec![Value::entity("a")]).unwrap();
        assert_eq!(v, Value::entity("a"));
    }
}
