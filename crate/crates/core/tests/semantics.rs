use std::collections::BTreeMap;

use modint::denote::{eval_all_indices, eval_ext, eval_int, typecheck, EvalError, Term};
use modint::gen::{self, ModelShape, TermGen};
use modint::modelfile::{self, ModelFile};
use modint::modint::{
    apply, check_square, extensionalize, permutation_paths, trivialize_all, verify_equivalence, Morphism,
};
use modint::fragment::Lexicon;
use modint::semmodel::{Assignment, Index, Model, SemType, Value};
use proptest::prelude::*;

/// Direct recursive evaluator used as a reference for the library's two
/// evaluators. `None` marks a failed definite description.
fn oracle(t: &Term, m: &Model, g: &BTreeMap<String, String>, s: &Index) -> Option<Value> {
    let at = |c: &str| m.constant(c).unwrap().table[s].clone();
    let truth = |t: &Term, g: &BTreeMap<String, String>| oracle(t, m, g, s).map(|v| v == Value::Truth(true));
    Some(match t {
        Term::Var(x) => Value::Entity(g[x].clone()),
        Term::Const(c) => at(c),
        Term::Pred(p, args) => {
            let vals: Vec<Value> = args.iter().map(|a| oracle(a, m, g, s)).collect::<Option<_>>()?;
            let Value::Set(members) = at(p) else { panic!("{p} is not a set") };
            let probe = match &m.constant(p).unwrap().ty {
                SemType::SetOf(_) => vals[0].clone(),
                _ => Value::Tuple(vals),
            };
            Value::Truth(members.contains(&probe))
        }
        Term::Func(f, args) => {
            let mut vals: Vec<Value> = args.iter().map(|a| oracle(a, m, g, s)).collect::<Option<_>>()?;
            let Value::Func(table) = at(f) else { panic!("{f} is not a function") };
            let mut key = vals.pop().unwrap();
            while let Some(v) = vals.pop() {
                key = Value::Tuple(vec![v, key]);
            }
            table[&key].clone()
        }
        Term::App(fun, arg) => {
            let a = oracle(arg, m, g, s)?;
            match &**fun {
                Term::Lam(x, _, body) => {
                    let Value::Entity(k) = a else { panic!("non-entity argument") };
                    let mut g2 = g.clone();
                    g2.insert(x.clone(), k);
                    oracle(body, m, &g2, s)?
                }
                other => {
                    let Value::Func(table) = oracle(other, m, g, s)? else { panic!("not a function") };
                    table[&a].clone()
                }
            }
        }
        Term::Iota(x, body) => {
            let mut found = vec![];
            for k in m.entities().elements() {
                let mut g2 = g.clone();
                g2.insert(x.clone(), k.clone());
                if truth(body, &g2)? {
                    found.push(k.clone());
                }
            }
            if found.len() != 1 {
                return None;
            }
            Value::Entity(found.pop().unwrap())
        }
        Term::Diamond(frame, body) => {
            let here = s.get(frame).unwrap();
            let mut any = false;
            for w in m.frame(frame).unwrap().successors(here) {
                any |= oracle(body, m, g, &s.with(frame, w))? == Value::Truth(true);
            }
            Value::Truth(any)
        }
        Term::And(a, b) => {
            let (x, y) = (truth(a, g)?, truth(b, g)?);
            Value::Truth(x && y)
        }
        Term::Not(a) => Value::Truth(!truth(a, g)?),
        Term::Eq(a, b) => Value::Truth(oracle(a, m, g, s)? == oracle(b, m, g, s)?),
        Term::Lam(..) => panic!("oracle handles saturated terms only"),
    })
}

fn agrees(result: &Result<Value, EvalError>, expected: &Option<Value>) -> bool {
    match (result, expected) {
        (Ok(v), Some(w)) => v == w,
        (Err(EvalError::PresuppositionFailure { .. }), None) => true,
        _ => false,
    }
}

fn gtypes() -> BTreeMap<String, SemType> {
    gen::FREE_VARS.iter().map(|x| (x.to_string(), SemType::E)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluators_match_reference(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        let g = gen::assignment(&mut r, &m);
        for _ in 0..20 {
            let t = TermGen::new(&mut r, &m, &["W", "T"]).truth(4);
            prop_assert!(typecheck(&t, &m, &gtypes()).is_ok());
            let all = eval_all_indices(&t, &m, &g);
            for s in m.index_space() {
                let expected = oracle(&t, &m, g.bindings(), &s);
                let got = eval_int(&t, &m, &g, &s);
                prop_assert!(agrees(&got, &expected), "{} at {}: {:?} vs {:?}", t, s, got, expected);
                if let Ok(all) = &all {
                    prop_assert_eq!(Some(&all.iter().find(|(i, _)| *i == s).unwrap().1), got.as_ref().ok());
                }
            }
        }
    }

    #[test]
    fn extensional_evaluator_matches_reference(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&[], 3, 1));
        let g = gen::assignment(&mut r, &m);
        for _ in 0..20 {
            let t = TermGen::new(&mut r, &m, &[]).truth(4);
            let expected = oracle(&t, &m, g.bindings(), &Index::empty());
            let got = eval_ext(&t, &m, &g);
            prop_assert!(agrees(&got, &expected), "{}: {:?} vs {:?}", t, got, expected);
            prop_assert_eq!(got, eval_int(&t, &m, &g, &Index::empty()));
        }
    }

    #[test]
    fn trivialized_models_evaluate_extensionally(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        let triv = trivialize_all(&m).unwrap();
        let ext = extensionalize(&triv).unwrap();
        prop_assert!(ext.is_extensional());
        let assignments: Vec<Assignment> = (0..3).map(|_| gen::assignment(&mut r, &m)).collect();
        let terms: Vec<Term> = (0..30).map(|_| TermGen::new(&mut r, &m, &[]).any(4)).collect();
        let report = verify_equivalence(&triv, &terms, &assignments).unwrap();
        prop_assert_eq!(report.mismatches(), 0, "{}", report);
        prop_assert_eq!(report.checks(), 90);
    }

    #[test]
    fn trivialization_squares_commute(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        prop_assume!(m.frames().iter().all(|f| !f.is_trivial()));
        let paths = permutation_paths(&m, &["W".into(), "T".into()]).unwrap();
        prop_assert_eq!(paths.len(), 2);
        prop_assert!(check_square(&m, &paths[0], &paths[1]).unwrap());
    }

    #[test]
    fn trivialization_restricts_to_designated_slice(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        prop_assume!(!m.frame("W").unwrap().is_trivial());
        let d = m.designated("W").unwrap().to_string();
        let out = apply(&m, &Morphism::trivialize("W", &d)).unwrap();
        prop_assert!(out.frame("W").unwrap().is_trivial());
        prop_assert!(out.validate().is_empty());
        for c in m.constants() {
            for (s, v) in &out.constant(&c.name).unwrap().table {
                prop_assert_eq!(v, &c.table[&s.with("W", &d)]);
            }
        }
    }

    #[test]
    fn variables_and_rigid_constants_ignore_the_index(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let mut m = gen::model(&mut r, &ModelShape::new(&["W"], 3, 3));
        let g = gen::assignment(&mut r, &m);
        let k = m.entities().elements()[0].clone();
        m.add_rigid_constant("rigid", SemType::E, Value::Entity(k.clone()));
        for t in [Term::var("x"), Term::constant("rigid")] {
            let vals = eval_all_indices(&t, &m, &g).unwrap();
            prop_assert!(vals.windows(2).all(|w| w[0].1 == w[1].1));
        }
    }

    #[test]
    fn terms_print_and_parse_back(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W"], 3, 3));
        for _ in 0..20 {
            let t = TermGen::new(&mut r, &m, &["W"]).any(4);
            prop_assert_eq!(Term::parse(&t.to_string(), &m).unwrap(), t);
        }
    }

    #[test]
    fn beta_reduction_preserves_modal_free_denotation(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W"], 3, 3));
        let g = gen::assignment(&mut r, &m);
        for _ in 0..20 {
            let t = TermGen::new(&mut r, &m, &[]).truth(4);
            // a discarded argument can still fail under strict evaluation
            if let Ok(vals) = eval_all_indices(&t, &m, &g) {
                prop_assert_eq!(eval_all_indices(&t.beta_reduce_closed(), &m, &g).unwrap(), vals, "{}", t);
            }
        }
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        let file = ModelFile { model: m, lexicon: Lexicon::default(), terms: BTreeMap::new() };
        let text = modelfile::to_string(&file);
        let back = modelfile::parse_model(&text).unwrap();
        prop_assert!(back.model.structurally_eq(&file.model));
        prop_assert_eq!(modelfile::to_string(&back), text);
    }
}

#[test]
fn trivializing_twice_is_rejected() {
    let mut r = gen::rng(0);
    let m = gen::model(&mut r, &ModelShape::new(&["W"], 2, 2));
    let once = apply(&m, &Morphism::trivialize_default(&m, "W").unwrap()).unwrap();
    assert!(apply(&once, &Morphism::trivialize("W", "k0")).is_err());
    assert!(apply(&m, &Morphism::trivialize("Q", "q0")).is_err());
}

#[test]
fn identity_morphism_is_neutral() {
    let mut r = gen::rng(1);
    let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
    assert!(apply(&m, &Morphism::Identity).unwrap().structurally_eq(&m));
}

#[test]
fn beta_reduction_moves_arguments_into_modal_scope() {
    let file = modelfile::read_text(std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/modal.model")))
        .and_then(|t| modelfile::parse_model(&t))
        .unwrap();
    let m = &file.model;
    let g = Assignment::new();
    let applied = Term::parse(
        "(app (lam o e (might W (pred read (iota x (pred student x)) o))) (iota y (pred book y)))",
        m,
    )
    .unwrap();
    let reduced = applied.beta_reduce_closed();
    assert_eq!(
        reduced.to_string(),
        "(might W (pred read (iota x (pred student x)) (iota y (pred book y))))"
    );
    // rigid here, since the book is the same at both worlds
    assert_eq!(eval_all_indices(&applied, m, &g).unwrap(), eval_all_indices(&reduced, m, &g).unwrap());
}
