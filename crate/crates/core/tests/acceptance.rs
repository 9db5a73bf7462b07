//! Acceptance suite: one line per criterion, exact (boolean) tolerances and
//! wall-clock budgets. Run with `cargo test --test acceptance`.

mod common;

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{corpus, documented_invocations, oracle, pairs_of, MODELS};
use modint::denote::Term;
use modint::fragment::{eval_sentence, parse, tokenize, Lexicon};
use modint::gen::{self, GenRng, ModelShape, TermGen};
use modint::kripke::{trivialize, Frame, FrameMap};
use modint::modelfile;
use modint::modint::{
    check_square, compose_path, lemma_terms, permutation_paths, trivialize_all, verify_equivalence, Category,
};
use modint::relalg::{FinSet, FnGraph, Property, Relation};
use modint::semmodel::{Assignment, Model, Value};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, detail: String) -> Outcome {
    Outcome { pass: failures == 0, detail }
}

/// Criteria whose literal claim is known not to hold; they must still be
/// reported as FAIL, and an unexpected pass is treated as an error.
const EXPECTED_FAILURES: &[usize] = &[3];

fn carriers(r: &mut GenRng) -> [Arc<FinSet>; 4] {
    ["X", "Y", "Z", "V"].map(|n| gen::finset(r, n, &n.to_lowercase(), 0, 4))
}

fn random_function(r: &mut GenRng, x: &Arc<FinSet>, y: &Arc<FinSet>) -> Option<FnGraph> {
    (!y.is_empty() || x.is_empty()).then(|| gen::function(r, x, y))
}

fn superset(r: &mut GenRng, rel: &Relation) -> Relation {
    rel.union(&gen::relation(r, rel.source(), rel.target())).unwrap()
}

fn criterion_1() -> Outcome {
    let mut r = gen::rng(1);
    let n = 500;
    let mut bad = 0;
    for _ in 0..n {
        let [x, y, z, v] = carriers(&mut r);
        let f = gen::relation(&mut r, &x, &y);
        let g = gen::relation(&mut r, &y, &z);
        let h = gen::relation(&mut r, &z, &v);
        let b = gen::relation(&mut r, &x, &z);
        let (idx, idy) = (Relation::identity(x.clone()), Relation::identity(y.clone()));
        let fg = f.compose(&g).unwrap();
        let category = fg.compose(&h).unwrap() == f.compose(&g.compose(&h).unwrap()).unwrap()
            && idx.compose(&f).unwrap() == f
            && f.compose(&idy).unwrap() == f
            && pairs_of(&fg) == oracle::compose(&pairs_of(&f), &pairs_of(&g));
        let fd = f.dagger();
        let dagger = fd.source() == f.target()
            && fd.target() == f.source()
            && pairs_of(&fd) == oracle::converse(&pairs_of(&f))
            && fd.dagger() == f
            && fg.dagger() == g.dagger().compose(&fd).unwrap()
            && idx.dagger() == idx;
        let (f2, g2) = (superset(&mut r, &f), superset(&mut r, &g));
        let order_iso = f.leq(&f2).unwrap() == fd.leq(&f2.dagger()).unwrap()
            && f2.leq(&f).unwrap() == f2.dagger().leq(&fd).unwrap();
        let posetal = fg.leq(&f2.compose(&g2).unwrap()).unwrap();
        let modular = f.modularity_holds(&g, &b).unwrap();
        if !(category && dagger && order_iso && posetal && modular) {
            bad += 1;
        }
    }
    outcome(bad, format!("{n} random triples, {bad} law violations"))
}

fn criterion_2() -> Outcome {
    let mut r = gen::rng(2);
    let n = 500;
    let mut bad = 0;
    let mut functions = 0;
    for i in 0..n {
        let [x, y, z, _] = carriers(&mut r);
        let endo = gen::relation(&mut r, &x, &x);
        let prop1 = endo.check_property(Property::Reflexive).unwrap()
            == oracle::identity(x.len()).is_subset(&pairs_of(&endo));
        // every other instance is a function so the injective/surjective forms get exercised
        let rel = match (i % 2, random_function(&mut r, &x, &y)) {
            (0, Some(f)) => f.into_relation(),
            _ => gen::relation(&mut r, &x, &y),
        };
        let rep = rel.function_characterization();
        let prop2 = rep.is_function == (rep.dagger_eq_total && rep.dagger_eq_single)
            && rep.is_total == rep.dagger_eq_total
            && rep.is_single_valued == rep.dagger_eq_single;
        let (prop3, prop4) = if rep.is_function {
            functions += 1;
            (rep.is_injective == rep.inj_eq, rep.is_surjective == rep.surj_eq)
        } else {
            (true, true)
        };
        let prop5 = match (random_function(&mut r, &x, &y), random_function(&mut r, &y, &z)) {
            (Some(f), Some(g)) => f.then(&g).unwrap().underlying() == &f.underlying().compose(g.underlying()).unwrap(),
            _ => true,
        };
        let (p1, p2) = rel.graph_projections();
        let prop6 = p1.underlying().dagger().compose(p2.underlying()).unwrap() == rel
            && Relation::from_jointly_monic(&p1, &p2).unwrap() == rel;
        if !(prop1 && prop2 && prop3 && prop4 && prop5 && prop6) {
            bad += 1;
        }
    }
    outcome(bad, format!("{n} instances ({functions} functions), {bad} biconditional failures"))
}

fn serial(f: &Frame) -> bool {
    f.domain().elements().iter().all(|w| f.successors(w).next().is_some())
}

fn criterion_3() -> Outcome {
    let mut r = gen::rng(3);
    let n = 300;
    let (mut unbounded, mut unbounded_serial, mut nonserial, mut other) = (0, 0, 0, 0);
    let mut bounded_maps = 0;
    for _ in 0..n {
        let a = gen::frame(&mut r, "W", 4, false);
        let b = gen::frame(&mut r, "V", 4, false);
        let c = gen::frame(&mut r, "U", 4, false);

        let d = a.domain().element(r.gen_range(0..a.domain().len())).to_string();
        let t = trivialize(&a, &d).unwrap();
        let report = t.map.bounded_report();
        if !serial(&a) {
            nonserial += 1;
        }
        if !(t.map.is_surjective() && report.forth && report.consistent()) {
            other += 1;
        }
        if !report.is_bounded() {
            unbounded += 1;
            if serial(&a) {
                unbounded_serial += 1;
            }
        }

        let f = gen::frame_map(&mut r, &a, &b);
        let g = gen::frame_map(&mut r, &b, &c);
        let fg = f.then(&g).unwrap();
        for m in [&f, &g, &fg] {
            let rep = m.bounded_report();
            if !rep.consistent() || (rep.is_bounded() && !m.is_monotone()) {
                other += 1;
            }
            bounded_maps += usize::from(rep.is_bounded());
        }
        if (f.is_monotone() && g.is_monotone() && !fg.is_monotone())
            || (f.is_bounded() && g.is_bounded() && !fg.is_bounded())
        {
            other += 1;
        }
        let id = FrameMap::identity(&a);
        if !id.is_bounded() || id.then(&f).unwrap() != f {
            other += 1;
        }
    }
    outcome(
        unbounded + other,
        format!(
            "{n} frames: trivialization maps surjective, forth holds; back fails on {unbounded} \
             ({nonserial} non-serial, {unbounded_serial} of the failures serial); \
             {bounded_maps} bounded maps among {} random, {other} other violations",
            3 * n
        ),
    )
}

fn nontrivial_two_frame_model(r: &mut GenRng) -> Model {
    loop {
        let m = gen::model(r, &ModelShape::new(&["W", "T"], 3, 3));
        if m.frames().iter().all(|f| !f.is_trivial()) {
            return m;
        }
    }
}

fn load(name: &str) -> modelfile::ModelFile {
    modelfile::load_model(std::path::Path::new(&corpus(name))).unwrap()
}

fn criterion_4() -> Outcome {
    let mut r = gen::rng(4);
    let n = 200;
    let mut bad = 0;
    for _ in 0..n {
        let m = nontrivial_two_frame_model(&mut r);
        let paths = permutation_paths(&m, &["W".into(), "T".into()]).unwrap();
        if !check_square(&m, &paths[0], &paths[1]).unwrap() {
            bad += 1;
        }
    }
    let cube = load("location.model").model;
    let labels: Vec<String> = cube.frames().iter().map(|f| f.label().to_string()).collect();
    let paths = permutation_paths(&cube, &labels).unwrap();
    let first = compose_path(&cube, &paths[0]).unwrap();
    let cube_bad = paths[1..].iter().filter(|p| !compose_path(&cube, p).unwrap().structurally_eq(&first)).count();
    outcome(
        bad + cube_bad + usize::from(paths.len() != 6),
        format!("{n} two-frame squares, {bad} differ; {} cube paths, {cube_bad} differ", paths.len()),
    )
}

fn criterion_5() -> Outcome {
    let mut r = gen::rng(5);
    let (models, per_model) = (100, 100);
    let mut checks = 0;
    let mut mismatches = 0;
    let mut agreed = 0;
    let mut per_category = [0usize; 5];
    for _ in 0..models {
        let m = gen::model(&mut r, &ModelShape::new(&["W", "T"], 3, 3));
        let triv = trivialize_all(&m).unwrap();
        let assignments: Vec<Assignment> = (0..3).map(|_| gen::assignment(&mut r, &m)).collect();
        let mut terms = lemma_terms(&triv, &gen::FREE_VARS);
        terms.extend((0..per_model).map(|_| TermGen::new(&mut r, &triv, &[]).any(4)));
        assert!(terms.iter().all(|t: &Term| t.depth() <= 4 && !t.contains_diamond()));
        let report = verify_equivalence(&triv, &terms, &assignments).unwrap();
        checks += report.checks();
        mismatches += report.mismatches();
        agreed += report.agreed_errors();
        for (i, cat) in Category::ALL.iter().enumerate() {
            per_category[i] += report.categories.get(cat).map_or(0, |c| c.checks);
        }
    }
    let uncovered = per_category.iter().filter(|&&c| c == 0).count();
    outcome(
        mismatches + uncovered,
        format!(
            "{models} models x ({per_model} random + lemma terms): {mismatches} mismatches / {checks} checks \
             ({agreed} agreed presupposition failures); per category {per_category:?}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let lex = Lexicon::default();
    let ext = load("extensional.model");
    let modal = load("modal.model");
    let g = Assignment::new();
    let s1 = "the student read the book";
    let s2 = "the student might read the book";
    let mut bad = 0;
    let v1 = eval_sentence(s1, &ext.model, &ext.lexicon, &g, None).unwrap().value;
    bad += usize::from(v1 != Value::Truth(true));
    let mut at = vec![];
    for (w, expected) in [("w0", true), ("w1", false)] {
        let s = modal.model.parse_index(w).unwrap();
        let v = eval_sentence(s2, &modal.model, &modal.lexicon, &g, Some(&s)).unwrap().value;
        at.push(format!("{w}={v}"));
        bad += usize::from(v != Value::Truth(expected));
    }
    for name in ["sentence1", "sentence2"] {
        let text = std::fs::read_to_string(corpus(&format!("golden/{name}.txt"))).unwrap();
        let golden = std::fs::read(corpus(&format!("golden/{name}.tree"))).unwrap();
        let tree = parse(&tokenize(text.trim()), &lex).unwrap();
        bad += usize::from(format!("{tree}\n").into_bytes() != golden);
    }
    outcome(bad, format!("plain sentence = {v1}; modal sentence {}; golden trees compared byte-for-byte", at.join(" ")))
}

fn criterion_7() -> Outcome {
    let run = |args: &[String]| Command::new(env!("CARGO_BIN_EXE_modint")).args(args).output().unwrap();
    let cases = documented_invocations();
    let mut differ = 0;
    for args in &cases {
        let (a, b) = (run(args), run(args));
        if a.stdout != b.stdout || a.stderr != b.stderr || a.status != b.status {
            differ += 1;
        }
    }
    let failing: Vec<&str> = MODELS
        .iter()
        .copied()
        .filter(|m| run(&["verify-theorem".into(), corpus(m)]).status.code() != Some(0))
        .collect();
    outcome(
        differ + failing.len(),
        format!("{} invocations run twice, {differ} differ; verify-theorem non-zero on {failing:?}", cases.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("relation-algebra law suite", criterion_1, Duration::from_secs(5)),
        ("characterization biconditionals", criterion_2, Duration::from_secs(5)),
        ("kripke suite", criterion_3, Duration::from_secs(5)),
        ("modint commutativity", criterion_4, Duration::from_secs(10)),
        ("trivial-model equivalence check", criterion_5, Duration::from_secs(60)),
        ("fragment golden tests", criterion_6, Duration::from_secs(1)),
        ("cli determinism", criterion_7, Duration::from_secs(600)),
    ];
    let mut unexpected = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        let expected_failure = EXPECTED_FAILURES.contains(&id);
        let status = match (pass, expected_failure) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (true, true) => "PASS (unexpected)",
            (false, false) => "FAIL",
        };
        if pass == expected_failure {
            unexpected += 1;
        }
        println!(
            "criterion {id} {name}: {status}: {}; {:.2}s (budget {}s)",
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
