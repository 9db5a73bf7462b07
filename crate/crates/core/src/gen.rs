//! Seeded random relations, frames, models and well-typed terms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::denote::{Signature, Term};
use crate::kripke::{Frame, FrameMap};
use crate::relalg::{FinSet, FnGraph, Relation};
use crate::semmodel::{Assignment, Index, Model, SemType, Value};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A set named `name` with between `min` and `max` elements `prefix0, prefix1, …`.
pub fn finset(rng: &mut GenRng, name: &str, prefix: &str, min: usize, max: usize) -> Arc<FinSet> {
    let n = rng.gen_range(min..=max);
    Arc::new(FinSet::new(name, (0..n).map(|i| format!("{prefix}{i}"))).expect("distinct names"))
}

/// Each pair is present with a density drawn per relation.
pub fn relation(rng: &mut GenRng, source: &Arc<FinSet>, target: &Arc<FinSet>) -> Relation {
    let density: f64 = rng.gen();
    let pairs: Vec<(usize, usize)> = (0..source.len())
        .flat_map(|a| (0..target.len()).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Relation::from_positions(source.clone(), target.clone(), pairs)
}

/// A total function; `target` must be inhabited when `source` is.
pub fn function(rng: &mut GenRng, source: &Arc<FinSet>, target: &Arc<FinSet>) -> FnGraph {
    let images: Vec<usize> = (0..source.len()).map(|_| rng.gen_range(0..target.len())).collect();
    let rel = Relation::from_positions(source.clone(), target.clone(), images.into_iter().enumerate());
    FnGraph::new(rel).expect("one image per element")
}

/// A frame with 1..=`max` points. With `serial`, every point gets a successor.
pub fn frame(rng: &mut GenRng, label: &str, max: usize, serial: bool) -> Frame {
    let prefix = label.to_lowercase();
    let domain = finset(rng, label, &prefix, 1, max);
    let mut rel = relation(rng, &domain, &domain);
    if serial {
        let mut pairs: BTreeSet<(usize, usize)> = rel.positions().collect();
        for a in 0..domain.len() {
            if rel.image_of(a).next().is_none() {
                pairs.insert((a, rng.gen_range(0..domain.len())));
            }
        }
        rel = Relation::from_positions(domain.clone(), domain.clone(), pairs);
    }
    Frame::new(label, domain, rel).expect("well-formed frame")
}

pub fn frame_map(rng: &mut GenRng, from: &Frame, to: &Frame) -> FrameMap {
    let graph = function(rng, from.domain(), to.domain());
    FrameMap::new(from.clone(), to.clone(), graph).expect("matching endpoints")
}

/// Constants every generated model declares.
pub const SIGNATURE: &[(&str, &str)] = &[
    ("c", "e"),
    ("p", "(rel e)"),
    ("q", "(rel e e)"),
    ("r", "(set e)"),
    ("f", "(fn e e)"),
    ("g", "(fn (pair e e) e)"),
    ("k", "(fn e t)"),
];

#[derive(Debug, Clone)]
pub struct ModelShape {
    pub labels: Vec<String>,
    pub max_entities: usize,
    pub max_frame: usize,
    pub serial: bool,
}

impl ModelShape {
    pub fn new(labels: &[&str], max_entities: usize, max_frame: usize) -> Self {
        ModelShape {
            labels: labels.iter().map(|l| l.to_string()).collect(),
            max_entities,
            max_frame,
            serial: false,
        }
    }
}

/// A valid model over the fixed signature with intensions drawn per index.
pub fn model(rng: &mut GenRng, shape: &ModelShape) -> Model {
    let n = rng.gen_range(1..=shape.max_entities.max(1));
    let frames: Vec<Frame> = shape
        .labels
        .iter()
        .map(|l| frame(rng, l, shape.max_frame, shape.serial))
        .collect();
    let mut m = Model::new((0..n).map(|i| format!("e{i}")), frames).expect("fresh labels");
    for f in m.frames().to_vec() {
        if rng.gen_bool(0.5) {
            let d = f.domain().elements().choose(rng).expect("inhabited").clone();
            m.set_designated(f.label(), d);
        }
    }
    let space = m.index_space();
    for (name, ty) in SIGNATURE {
        let ty: SemType = ty.parse().expect("signature types parse");
        let table: BTreeMap<Index, Value> = space.iter().map(|s| (s.clone(), value(rng, &m, &ty))).collect();
        m.add_constant(*name, ty, table);
    }
    debug_assert!(m.validate().is_empty());
    m
}

/// A uniformly drawn inhabitant of `ty`, built without enumerating its domain.
pub fn value(rng: &mut GenRng, m: &Model, ty: &SemType) -> Value {
    let small = |t: &SemType| m.type_domain(t, u128::MAX).expect("grounded type");
    match ty {
        SemType::E | SemType::T | SemType::S(_) => small(ty).choose(rng).expect("inhabited domain").clone(),
        SemType::Pair(a, b) => Value::Tuple(vec![value(rng, m, a), value(rng, m, b)]),
        SemType::SetOf(a) => Value::Set(small(a).into_iter().filter(|_| rng.gen_bool(0.5)).collect()),
        SemType::RelOf(ts) => {
            let mut tuples: Vec<Vec<Value>> = vec![vec![]];
            for t in ts {
                let dom = small(t);
                tuples = tuples
                    .into_iter()
                    .flat_map(|p| dom.iter().map(move |v| [p.clone(), vec![v.clone()]].concat()))
                    .collect();
            }
            Value::Set(tuples.into_iter().filter(|_| rng.gen_bool(0.5)).map(Value::Tuple).collect())
        }
        SemType::Fn(a, b) => Value::Func(small(a).into_iter().map(|x| (x, value(rng, m, b))).collect()),
    }
}

/// Free variables used by generated terms.
pub const FREE_VARS: [&str; 3] = ["x", "y", "z"];

pub fn assignment(rng: &mut GenRng, m: &Model) -> Assignment {
    let mut g = Assignment::new();
    for x in FREE_VARS {
        let k = m.entities().elements().choose(rng).expect("inhabited").clone();
        g = g.variant(m.entities(), x, &k).expect("entity from the domain");
    }
    g
}

/// Generates well-typed terms of bounded depth over a model's constants.
pub struct TermGen<'a> {
    rng: &'a mut GenRng,
    sig: Signature,
    frames: Vec<String>,
    free: Vec<String>,
    bound: Vec<String>,
}

impl<'a> TermGen<'a> {
    /// `modal_frames` lists frames the generator may quantify over; empty means modal-free.
    pub fn new(rng: &'a mut GenRng, m: &Model, modal_frames: &[&str]) -> Self {
        TermGen {
            rng,
            sig: Signature::of(m),
            frames: modal_frames.iter().map(|s| s.to_string()).collect(),
            free: FREE_VARS.iter().map(|s| s.to_string()).collect(),
            bound: vec![],
        }
    }

    /// A term of type t, e or (fn e _), of depth at most `depth`
    /// (formulas need depth 1, so a budget of 0 yields an entity).
    pub fn any(&mut self, depth: usize) -> Term {
        match self.rng.gen_range(0..4) {
            0 | 1 if depth >= 1 => self.truth(depth),
            2 => self.entity(depth),
            _ if depth >= 2 => self.lambda(depth, |g, d| if g.rng.gen_bool(0.5) { g.truth(d) } else { g.entity(d) }),
            _ => self.entity(depth),
        }
    }

    fn fresh(&self) -> String {
        format!("v{}", self.bound.len())
    }

    fn lambda(&mut self, depth: usize, body: impl FnOnce(&mut Self, usize) -> Term) -> Term {
        let v = self.fresh();
        self.bound.push(v.clone());
        let b = body(self, depth - 1);
        self.bound.pop();
        Term::lam(&v, SemType::E, b)
    }

    fn atom(&mut self) -> Term {
        let mut choices: Vec<Term> = self.free.iter().chain(&self.bound).map(|x| Term::var(x)).collect();
        choices.extend(self.sig.entities.iter().map(|c| Term::constant(c)));
        choices.choose(self.rng).expect("free variables exist").clone()
    }

    fn args(&mut self, n: usize, depth: usize) -> Vec<Term> {
        (0..n).map(|_| self.entity(depth)).collect()
    }

    pub fn entity(&mut self, depth: usize) -> Term {
        if depth == 0 {
            return self.atom();
        }
        match self.rng.gen_range(0..5) {
            1 if !self.sig.funcs.is_empty() => {
                let (f, n) = self.sig.funcs.choose(self.rng).expect("non-empty").clone();
                Term::func(&f, self.args(n, depth - 1))
            }
            2 if depth >= 3 => {
                // a description pinned by an equation, so it usually has one satisfier
                let v = self.fresh();
                self.bound.push(v.clone());
                let pin = self.entity(depth - 3);
                let extra = self.truth(depth - 2);
                self.bound.pop();
                Term::iota(&v, Term::and(Term::eq(Term::var(&v), pin), extra))
            }
            3 if depth >= 2 => {
                let v = self.fresh();
                self.bound.push(v.clone());
                let body = self.truth(depth - 1);
                self.bound.pop();
                Term::iota(&v, body)
            }
            4 if depth >= 2 => {
                let arg = self.entity(depth - 1);
                let f = self.lambda(depth - 1, |g, d| g.entity(d));
                Term::app(f, arg)
            }
            _ => self.atom(),
        }
    }

    pub fn truth(&mut self, depth: usize) -> Term {
        if depth <= 1 {
            return self.atomic_truth();
        }
        let sub = depth - 1;
        match self.rng.gen_range(0..8) {
            0 | 1 if !self.sig.preds.is_empty() => {
                let (p, n) = self.sig.preds.choose(self.rng).expect("non-empty").clone();
                Term::pred(&p, self.args(n, sub))
            }
            2 => Term::not(self.truth(sub)),
            3 => Term::and(self.truth(sub), self.truth(sub)),
            4 => Term::eq(self.entity(sub), self.entity(sub)),
            5 if !self.sig.props.is_empty() => {
                let k = self.sig.props.choose(self.rng).expect("non-empty").clone();
                Term::app(Term::constant(&k), self.entity(sub))
            }
            6 if depth >= 3 => {
                let arg = self.entity(sub);
                let f = self.lambda(sub, |g, d| g.truth(d));
                Term::app(f, arg)
            }
            7 if !self.frames.is_empty() => {
                let frame = self.frames.choose(self.rng).expect("non-empty").clone();
                Term::diamond(&frame, self.truth(sub))
            }
            _ => self.atomic_truth(),
        }
    }

    /// The shallowest formulas, of depth 1.
    fn atomic_truth(&mut self) -> Term {
        match self.sig.preds.choose(self.rng).cloned() {
            Some((p, n)) => Term::pred(&p, (0..n).map(|_| self.atom()).collect()),
            None => Term::eq(self.atom(), self.atom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denote::typecheck;

    #[test]
    fn generated_models_validate_and_terms_typecheck() {
        let mut r = rng(7);
        for _ in 0..30 {
            let m = model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
            assert!(m.validate().is_empty());
            assert!(m.index_space().iter().all(|s| m.constants().iter().all(|c| m.inhabits(&c.table[s], &c.ty).is_ok())));
            let gtypes = FREE_VARS.iter().map(|x| (x.to_string(), SemType::E)).collect();
            for _ in 0..20 {
                let t = TermGen::new(&mut r, &m, &["W"]).any(4);
                assert!(t.depth() <= 4, "{t}");
                typecheck(&t, &m, &gtypes).unwrap_or_else(|e| panic!("{t}: {e}"));
            }
        }
    }

    #[test]
    fn serial_frames_are_serial() {
        let mut r = rng(1);
        for _ in 0..50 {
            let f = frame(&mut r, "W", 4, true);
            assert!(f.domain().elements().iter().all(|w| f.successors(w).next().is_some()));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = model(&mut rng(3), &ModelShape::new(&["W"], 3, 3));
        let b = model(&mut rng(3), &ModelShape::new(&["W"], 3, 3));
        assert!(a.structurally_eq(&b));
    }
}
