#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use modint::relalg::{FinSet, Relation};

pub type Pairs = BTreeSet<(usize, usize)>;

/// Naive reference implementations over plain position sets.
pub mod oracle {
    use super::Pairs;

    pub fn compose(r: &Pairs, s: &Pairs) -> Pairs {
        let mut out = Pairs::new();
        for &(x, y) in r {
            for &(y2, z) in s {
                if y == y2 {
                    out.insert((x, z));
                }
            }
        }
        out
    }

    pub fn converse(r: &Pairs) -> Pairs {
        r.iter().map(|&(a, b)| (b, a)).collect()
    }

    pub fn identity(n: usize) -> Pairs {
        (0..n).map(|i| (i, i)).collect()
    }

    pub fn out_degree(r: &Pairs, x: usize) -> usize {
        r.iter().filter(|&&(a, _)| a == x).count()
    }

    pub fn in_degree(r: &Pairs, y: usize) -> usize {
        r.iter().filter(|&&(_, b)| b == y).count()
    }
}

pub fn set(name: &str, n: usize) -> Arc<FinSet> {
    Arc::new(FinSet::new(name, (0..n).map(|i| format!("{}{i}", name.to_lowercase()))).unwrap())
}

pub fn pairs_of(r: &Relation) -> Pairs {
    r.positions().collect()
}

pub fn rel(source: &Arc<FinSet>, target: &Arc<FinSet>, bits: u64) -> Relation {
    let m = target.len();
    let pairs = (0..source.len() * m).filter(|i| bits >> i & 1 == 1).map(|i| (i / m, i % m));
    Relation::from_positions(source.clone(), target.clone(), pairs)
}

pub fn corpus(rel: &str) -> String {
    format!("{}/../../corpus/{rel}", env!("CARGO_MANIFEST_DIR"))
}

pub const MODELS: [&str; 4] = ["extensional.model", "modal.model", "modal_tense.model", "location.model"];

/// One invocation of every documented subcommand against the bundled corpus.
pub fn documented_invocations() -> Vec<Vec<String>> {
    let c = corpus;
    let raw: Vec<Vec<String>> = vec![
        vec!["check-rel".into(), c("relations/leq3.json"), "--prop".into(), "all".into()],
        vec!["check-rel".into(), c("relations/parity.json"), "--prop".into(), "equivalence".into()],
        vec!["check-rel".into(), c("relations/author.json"), "--prop".into(), "all".into()],
        vec!["check-map".into(), c("maps/collapse.json")],
        vec!["check-map".into(), c("maps/fold.json")],
        vec!["eval".into(), c("extensional.model"), "--named".into(), "clause".into()],
        vec!["eval".into(), c("modal.model"), "--named".into(), "might_clause".into(), "--all-indices".into()],
        vec!["eval".into(), c("modal_tense.model"), "--term".into(), "(pred read x (iota y (pred book y)))".into(),
             "--index".into(), "w1,t0".into(), "--assign".into(), "x=s1".into()],
        vec!["parse".into(), "--text".into(), "the student might read the book".into()],
        vec!["sentence".into(), c("extensional.model"), "--text".into(), "the student read the book".into()],
        vec!["sentence".into(), c("modal.model"), "--text".into(), "the student might read the book".into(),
             "--index".into(), "w0".into()],
        vec!["trivialize".into(), c("modal_tense.model"), "--frame".into(), "T".into()],
        vec!["square".into(), c("modal_tense.model"), "--frames".into(), "W,T".into()],
        vec!["diagram".into(), c("location.model")],
    ];
    let mut out = raw;
    for m in MODELS {
        out.push(vec!["validate".into(), c(m)]);
        out.push(vec!["verify-theorem".into(), c(m)]);
    }
    out
}
