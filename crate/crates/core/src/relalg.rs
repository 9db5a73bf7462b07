//! Finite sets and binary relations between them.
//!
//! Relations are stored as sets of canonical positions into their endpoint
//! sets, so every enumeration (pairs, images, products) follows the listing
//! order of the carriers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("endpoint mismatch: expected set `{expected}`, found `{found}`")]
    EndpointMismatch { expected: String, found: String },
    #[error("relation {source_set} -> {target} is not an endorelation")]
    NotEndorelation { source_set: String, target: String },
    #[error("pairing is not injective: `{first}` and `{second}` map to the same pair")]
    NotJointlyMonic { first: String, second: String },
    #[error("element `{element}` is not in set `{set}`")]
    UnknownElement { set: String, element: String },
    #[error("duplicate element `{element}` in set `{set}`")]
    DuplicateElement { set: String, element: String },
    #[error("relation {0} is not a function (total and single-valued)")]
    NotAFunction(String),
    #[error("unknown relation property `{0}`")]
    UnknownProperty(String),
}

/// A finite carrier with a canonical (listing) order.
#[derive(Debug, Clone)]
pub struct FinSet {
    name: String,
    elements: Vec<String>,
    positions: HashMap<String, usize>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.elements == other.elements
    }
}

impl Eq for FinSet {}

impl FinSet {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        elements: impl IntoIterator<Item = S>,
    ) -> Result<Self, RelError> {
        let name = name.into();
        let mut positions = HashMap::new();
        let mut list = Vec::new();
        for e in elements {
            let e = e.into();
            if positions.insert(e.clone(), list.len()).is_some() {
                return Err(RelError::DuplicateElement { set: name, element: e });
            }
            list.push(e);
        }
        Ok(FinSet { name, elements: list, positions })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, element: &str) -> Option<usize> {
        self.positions.get(element).copied()
    }

    pub fn contains(&self, element: &str) -> bool {
        self.positions.contains_key(element)
    }

    pub fn element(&self, pos: usize) -> &str {
        &self.elements[pos]
    }

    fn require(&self, element: &str) -> Result<usize, RelError> {
        self.position(element).ok_or_else(|| RelError::UnknownElement {
            set: self.name.clone(),
            element: element.to_string(),
        })
    }

    /// Cartesian product with elements named `(a,b)` in lexicographic order.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let elements = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| pair_name(a, b)));
        // pair names are unique whenever both factors are
        FinSet::new(format!("{}×{}", self.name, other.name), elements)
            .expect("product of duplicate-free sets")
    }
}

pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// A binary relation between two finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    source: Arc<FinSet>,
    target: Arc<FinSet>,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new<'a>(
        source: Arc<FinSet>,
        target: Arc<FinSet>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, RelError> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            set.insert((source.require(a)?, target.require(b)?));
        }
        Ok(Relation { source, target, pairs: set })
    }

    /// Builds a relation from canonical positions. Positions must be in range.
    pub fn from_positions(
        source: Arc<FinSet>,
        target: Arc<FinSet>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        assert!(pairs.iter().all(|&(a, b)| a < source.len() && b < target.len()));
        Relation { source, target, pairs }
    }

    pub fn empty(source: Arc<FinSet>, target: Arc<FinSet>) -> Self {
        Relation { source, target, pairs: BTreeSet::new() }
    }

    pub fn identity(set: Arc<FinSet>) -> Self {
        let pairs = (0..set.len()).map(|i| (i, i)).collect();
        Relation { source: set.clone(), target: set, pairs }
    }

    pub fn full(source: Arc<FinSet>, target: Arc<FinSet>) -> Self {
        let pairs = (0..source.len())
            .flat_map(|a| (0..target.len()).map(move |b| (a, b)))
            .collect();
        Relation { source, target, pairs }
    }

    pub fn source(&self) -> &Arc<FinSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinSet> {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// Pairs in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.pairs
            .iter()
            .map(|&(a, b)| (self.source.element(a), self.target.element(b)))
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        match (self.source.position(a), self.target.position(b)) {
            (Some(i), Some(j)) => self.pairs.contains(&(i, j)),
            _ => false,
        }
    }

    pub fn contains_positions(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// Positions related to `a`, in canonical order.
    pub fn image_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((a, 0)..(a + 1, 0)).map(|&(_, b)| b)
    }

    pub fn is_endorelation(&self) -> bool {
        self.source == self.target
    }

    fn require_endo(&self) -> Result<(), RelError> {
        if self.is_endorelation() {
            Ok(())
        } else {
            Err(RelError::NotEndorelation {
                source_set: self.source.name().to_string(),
                target: self.target.name().to_string(),
            })
        }
    }

    fn require_same_endpoints(&self, other: &Relation) -> Result<(), RelError> {
        same_set(&self.source, &other.source)?;
        same_set(&self.target, &other.target)
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn compose(&self, next: &Relation) -> Result<Relation, RelError> {
        same_set(&self.target, &next.source)?;
        let mut pairs = BTreeSet::new();
        for &(x, y) in &self.pairs {
            for z in next.image_of(y) {
                pairs.insert((x, z));
            }
        }
        Ok(Relation { source: self.source.clone(), target: next.target.clone(), pairs })
    }

    /// Converse relation.
    pub fn dagger(&self) -> Relation {
        Relation {
            source: self.target.clone(),
            target: self.source.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn product(&self, other: &Relation) -> Relation {
        let source = Arc::new(self.source.product(&other.source));
        let target = Arc::new(self.target.product(&other.target));
        let m = other.source.len();
        let n = other.target.len();
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(x, y)| other.pairs.iter().map(move |&(x2, y2)| (x * m + x2, y * n + y2)))
            .collect();
        Relation { source, target, pairs }
    }

    /// Inclusion order on a hom-set.
    pub fn leq(&self, other: &Relation) -> Result<bool, RelError> {
        self.require_same_endpoints(other)?;
        Ok(self.pairs.is_subset(&other.pairs))
    }

    pub fn intersect(&self, other: &Relation) -> Result<Relation, RelError> {
        self.require_same_endpoints(other)?;
        Ok(Relation {
            source: self.source.clone(),
            target: self.target.clone(),
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelError> {
        self.require_same_endpoints(other)?;
        Ok(Relation {
            source: self.source.clone(),
            target: self.target.clone(),
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    pub fn check_property(&self, prop: Property) -> Result<bool, RelError> {
        self.require_endo()?;
        let n = self.source.len();
        let r = |u: usize, v: usize| self.pairs.contains(&(u, v));
        let all2 = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|u| (0..n).all(|v| f(u, v)));
        Ok(match prop {
            Property::Serial => (0..n).all(|u| (0..n).any(|v| r(u, v))),
            Property::Reflexive => (0..n).all(|u| r(u, u)),
            Property::Symmetric => all2(&|u, v| !r(u, v) || r(v, u)),
            Property::Antisymmetric => all2(&|u, v| !(r(u, v) && r(v, u)) || u == v),
            Property::Transitive => {
                all2(&|u, v| !r(u, v) || (0..n).all(|w| !r(v, w) || r(u, w)))
            }
            Property::Total => all2(&|u, v| r(u, v)),
            Property::Equivalence => {
                self.check_property(Property::Symmetric)?
                    && self.check_property(Property::Transitive)?
                    && self.check_property(Property::Reflexive)?
            }
            Property::PartialOrder => {
                self.check_property(Property::Antisymmetric)?
                    && self.check_property(Property::Transitive)?
                    && self.check_property(Property::Reflexive)?
            }
            Property::TotalOrder => {
                self.check_property(Property::PartialOrder)?
                    && self.check_property(Property::Total)?
            }
            Property::StronglyConnected => all2(&|u, v| r(u, v) || r(v, u)),
            Property::WeaklyConnected => all2(&|u, v| {
                (0..n).all(|v2| {
                    let premise = (r(u, v) && r(u, v2)) || (r(v, u) && r(v2, u));
                    !premise || r(v, v2) || r(v2, v)
                })
            }),
        })
    }

    /// Compares the definitional reflexivity check against `id ⊆ R`.
    pub fn reflexive_iff_id_leq(&self) -> Result<bool, RelError> {
        let direct = self.check_property(Property::Reflexive)?;
        let algebraic = Relation::identity(self.source.clone()).leq(self)?;
        Ok(direct == algebraic)
    }

    pub fn function_characterization(&self) -> FunctionReport {
        let n = self.source.len();
        let m = self.target.len();
        let out_degree = |x: usize| self.image_of(x).count();
        let is_total = (0..n).all(|x| out_degree(x) >= 1);
        let is_single_valued = (0..n).all(|x| out_degree(x) <= 1);
        let is_injective = (0..n).all(|a| {
            (0..n).all(|b| a == b || self.image_of(a).all(|y| !self.contains_positions(b, y)))
        });
        let is_surjective = (0..m).all(|y| (0..n).any(|x| self.contains_positions(x, y)));

        let id_x = Relation::identity(self.source.clone());
        let id_y = Relation::identity(self.target.clone());
        let back_and_forth = self.compose(&self.dagger()).expect("R then R† is typed");
        let forth_and_back = self.dagger().compose(self).expect("R† then R is typed");
        FunctionReport {
            is_total,
            is_single_valued,
            is_function: is_total && is_single_valued,
            is_injective,
            is_surjective,
            dagger_eq_total: id_x.pairs.is_subset(&back_and_forth.pairs),
            dagger_eq_single: forth_and_back.pairs.is_subset(&id_y.pairs),
            inj_eq: back_and_forth == id_x,
            surj_eq: forth_and_back == id_y,
        }
    }

    /// The one-sided inclusion of the law of modularity for `self: X→Y`,
    /// `next: Y→Z`, `bound: X→Z`.
    pub fn modularity_holds(&self, next: &Relation, bound: &Relation) -> Result<bool, RelError> {
        let lhs = self.compose(next)?.intersect(bound)?;
        let pulled_back = bound.compose(&next.dagger())?;
        let rhs = self.intersect(&pulled_back)?.compose(next)?;
        lhs.leq(&rhs)
    }

    /// Span representation: the graph set `G` with its two projections.
    pub fn graph_projections(&self) -> (FnGraph, FnGraph) {
        let graph = Arc::new(
            FinSet::new(
                format!("G({}→{})", self.source.name(), self.target.name()),
                self.pairs().map(|(a, b)| pair_name(a, b)),
            )
            .expect("pairs are distinct"),
        );
        let p1 = self.pairs.iter().enumerate().map(|(u, &(x, _))| (u, x));
        let p2 = self.pairs.iter().enumerate().map(|(u, &(_, y))| (u, y));
        (
            FnGraph { underlying: Relation::from_positions(graph.clone(), self.source.clone(), p1) },
            FnGraph { underlying: Relation::from_positions(graph, self.target.clone(), p2) },
        )
    }

    pub fn from_jointly_monic(left: &FnGraph, right: &FnGraph) -> Result<Relation, RelError> {
        same_set(left.source(), right.source())?;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for z in 0..left.source().len() {
            let key = (left.apply_position(z), right.apply_position(z));
            if let Some(prev) = seen.insert(key, z) {
                return Err(RelError::NotJointlyMonic {
                    first: left.source().element(prev).to_string(),
                    second: left.source().element(z).to_string(),
                });
            }
        }
        Ok(Relation {
            source: left.target().clone(),
            target: right.target().clone(),
            pairs: seen.into_keys().collect(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

fn same_set(expected: &Arc<FinSet>, found: &Arc<FinSet>) -> Result<(), RelError> {
    if Arc::ptr_eq(expected, found) || expected == found {
        Ok(())
    } else {
        Err(RelError::EndpointMismatch {
            expected: expected.name().to_string(),
            found: found.name().to_string(),
        })
    }
}

/// Both the enumerative and the dagger-equation characterizations of a relation.
/// `is_injective`/`is_surjective` and `inj_eq`/`surj_eq` only correspond when
/// `is_function` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionReport {
    pub is_function: bool,
    pub is_total: bool,
    pub is_single_valued: bool,
    pub is_injective: bool,
    pub is_surjective: bool,
    /// `id_X ⊆ R†∘R`
    pub dagger_eq_total: bool,
    /// `R∘R† ⊆ id_Y`
    pub dagger_eq_single: bool,
    /// `f†∘f = id_X`
    pub inj_eq: bool,
    /// `f∘f† = id_Y`
    pub surj_eq: bool,
}

/// A relation known to be total and single-valued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnGraph {
    underlying: Relation,
}

impl FnGraph {
    pub fn new(underlying: Relation) -> Result<Self, RelError> {
        let report = underlying.function_characterization();
        if report.is_function {
            Ok(FnGraph { underlying })
        } else {
            Err(RelError::NotAFunction(underlying.to_string()))
        }
    }

    pub fn from_fn(
        source: Arc<FinSet>,
        target: Arc<FinSet>,
        f: impl Fn(&str) -> String,
    ) -> Result<Self, RelError> {
        let images: Vec<(String, String)> =
            source.elements().iter().map(|x| (x.clone(), f(x))).collect();
        let rel = Relation::new(
            source,
            target,
            images.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )?;
        FnGraph::new(rel)
    }

    pub fn identity(set: Arc<FinSet>) -> Self {
        FnGraph { underlying: Relation::identity(set) }
    }

    pub fn underlying(&self) -> &Relation {
        &self.underlying
    }

    pub fn into_relation(self) -> Relation {
        self.underlying
    }

    pub fn source(&self) -> &Arc<FinSet> {
        self.underlying.source()
    }

    pub fn target(&self) -> &Arc<FinSet> {
        self.underlying.target()
    }

    pub fn apply_position(&self, x: usize) -> usize {
        self.underlying.image_of(x).next().expect("function graph is total")
    }

    pub fn apply(&self, x: &str) -> Option<&str> {
        let pos = self.source().position(x)?;
        Some(self.target().element(self.apply_position(pos)))
    }

    /// Pointwise composition `x ↦ next(self(x))`.
    pub fn then(&self, next: &FnGraph) -> Result<FnGraph, RelError> {
        same_set(self.target(), next.source())?;
        let pairs = (0..self.source().len()).map(|x| (x, next.apply_position(self.apply_position(x))));
        Ok(FnGraph {
            underlying: Relation::from_positions(self.source().clone(), next.target().clone(), pairs),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.underlying.function_characterization().is_surjective
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Serial,
    Reflexive,
    Symmetric,
    Antisymmetric,
    Transitive,
    Total,
    Equivalence,
    PartialOrder,
    TotalOrder,
    StronglyConnected,
    WeaklyConnected,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::Serial,
        Property::Reflexive,
        Property::Symmetric,
        Property::Antisymmetric,
        Property::Transitive,
        Property::Total,
        Property::Equivalence,
        Property::PartialOrder,
        Property::TotalOrder,
        Property::StronglyConnected,
        Property::WeaklyConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Serial => "serial",
            Property::Reflexive => "reflexive",
            Property::Symmetric => "symmetric",
            Property::Antisymmetric => "antisymmetric",
            Property::Transitive => "transitive",
            Property::Total => "total",
            Property::Equivalence => "equivalence",
            Property::PartialOrder => "partial_order",
            Property::TotalOrder => "total_order",
            Property::StronglyConnected => "strongly_connected",
            Property::WeaklyConnected => "weakly_connected",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = RelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        Property::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| RelError::UnknownProperty(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, elems: &[&str]) -> Arc<FinSet> {
        Arc::new(FinSet::new(name, elems.iter().copied()).unwrap())
    }

    fn rel(a: &Arc<FinSet>, b: &Arc<FinSet>, pairs: &[(&str, &str)]) -> Relation {
        Relation::new(a.clone(), b.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_elements_rejected() {
        assert!(matches!(
            FinSet::new("X", ["a", "a"]),
            Err(RelError::DuplicateElement { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let x = set("X", &["a", "b"]);
        let y = set("Y", &["y"]);
        let z = set("Z", &["z"]);
        let r1 = rel(&x, &y, &[("a", "y")]);
        let r2 = rel(&y, &z, &[("y", "z")]);
        assert_eq!(r1.compose(&r2).unwrap(), rel(&x, &z, &[("a", "z")]));
        assert!(r1.compose(&Relation::empty(y.clone(), z.clone())).unwrap().is_empty());
        assert_eq!(Relation::identity(x.clone()).compose(&r1).unwrap(), r1);
        assert!(matches!(r1.compose(&r1), Err(RelError::EndpointMismatch { .. })));
    }

    #[test]
    fn dagger_and_identity() {
        let x = set("X", &["a", "b"]);
        let r = rel(&x, &x, &[("a", "b")]);
        assert_eq!(r.dagger(), rel(&x, &x, &[("b", "a")]));
        assert_eq!(Relation::identity(x.clone()).dagger(), Relation::identity(x.clone()));
        assert_eq!(Relation::identity(x.clone()), rel(&x, &x, &[("a", "a"), ("b", "b")]));
        assert!(Relation::identity(set("E", &[])).is_empty());
    }

    #[test]
    fn product_examples() {
        let a = set("A", &["a"]);
        let b = set("B", &["b"]);
        let c = set("C", &["c"]);
        let d = set("D", &["d"]);
        let p = rel(&a, &b, &[("a", "b")]).product(&rel(&c, &d, &[("c", "d")]));
        assert_eq!(p.pairs().collect::<Vec<_>>(), vec![("(a,c)", "(b,d)")]);

        let x = set("X", &["1", "2"]);
        let y = set("Y", &["p", "q", "r"]);
        let ids = Relation::identity(x.clone()).product(&Relation::identity(y.clone()));
        assert_eq!(ids, Relation::identity(Arc::new(x.product(&y))));
        assert_eq!(x.product(&y).elements()[1], "(1,q)");
    }

    #[test]
    fn leq_examples() {
        let x = set("X", &["a", "b", "c"]);
        let r = rel(&x, &x, &[("a", "b"), ("a", "c")]);
        assert!(Relation::empty(x.clone(), x.clone()).leq(&r).unwrap());
        assert!(r.leq(&r).unwrap());
        assert!(!r.leq(&rel(&x, &x, &[("a", "b")])).unwrap());
    }

    #[test]
    fn property_examples() {
        let x = set("X", &["a", "b"]);
        assert!(Relation::identity(x.clone()).check_property(Property::Reflexive).unwrap());
        let sym = rel(&x, &x, &[("a", "b"), ("b", "a")]);
        assert!(sym.check_property(Property::Symmetric).unwrap());
        assert!(!sym.check_property(Property::Reflexive).unwrap());

        let n = set("N", &["1", "2", "3"]);
        let le = rel(
            &n,
            &n,
            &[("1", "1"), ("1", "2"), ("1", "3"), ("2", "2"), ("2", "3"), ("3", "3")],
        );
        assert!(le.check_property(Property::PartialOrder).unwrap());
        assert!(le.check_property(Property::StronglyConnected).unwrap());
        // `total` in the quantifier sense (every pair related) fails for ≤,
        // so the composite total order fails as well
        assert!(!le.check_property(Property::Total).unwrap());
        assert!(!le.check_property(Property::TotalOrder).unwrap());

        let y = set("Y", &["y"]);
        assert!(matches!(
            rel(&x, &y, &[]).check_property(Property::Serial),
            Err(RelError::NotEndorelation { .. })
        ));
    }

    #[test]
    fn empty_carrier_properties_are_vacuous() {
        let e = set("E", &[]);
        let r = Relation::empty(e.clone(), e);
        for p in Property::ALL {
            assert!(r.check_property(p).unwrap(), "{p}");
        }
    }

    #[test]
    fn weakly_connected_example() {
        let x = set("X", &["u", "v", "w"]);
        // u sees v and w, but v and w are unrelated
        let fork = rel(&x, &x, &[("u", "v"), ("u", "w")]);
        assert!(!fork.check_property(Property::WeaklyConnected).unwrap());
        let chain = rel(&x, &x, &[("u", "v"), ("u", "w"), ("v", "w")]);
        assert!(!chain.check_property(Property::WeaklyConnected).unwrap());
        let closed = rel(
            &x,
            &x,
            &[("u", "v"), ("u", "w"), ("v", "w"), ("v", "v"), ("w", "w"), ("u", "u")],
        );
        assert!(closed.check_property(Property::WeaklyConnected).unwrap());
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("dense".parse::<Property>().is_err());
    }

    #[test]
    fn function_characterization_examples() {
        let x = set("X", &["a", "b"]);
        let id = Relation::identity(x.clone()).function_characterization();
        assert!(id.is_function && id.is_injective && id.is_surjective);
        assert!(id.dagger_eq_total && id.dagger_eq_single && id.inj_eq && id.surj_eq);

        let y = set("Y", &["a", "b", "c"]);
        let multi = rel(&x, &y, &[("a", "b"), ("a", "c")]).function_characterization();
        assert!(!multi.is_function);
        assert!(!multi.is_single_valued);
        assert!(!multi.dagger_eq_single);
    }

    #[test]
    fn modularity_examples() {
        let x = set("X", &["a"]);
        let y = set("Y", &["y"]);
        let z = set("Z", &["z"]);
        let e1 = Relation::empty(x.clone(), y.clone());
        let e2 = Relation::empty(y.clone(), z.clone());
        let e3 = Relation::empty(x.clone(), z.clone());
        assert!(e1.modularity_holds(&e2, &e3).unwrap());
        let r1 = rel(&x, &y, &[("a", "y")]);
        let r2 = rel(&y, &z, &[("y", "z")]);
        let r3 = rel(&x, &z, &[("a", "z")]);
        assert!(r1.modularity_holds(&r2, &r3).unwrap());
    }

    #[test]
    fn span_examples() {
        let a = set("A", &["a"]);
        let b = set("B", &["b"]);
        let r = rel(&a, &b, &[("a", "b")]);
        let (p1, p2) = r.graph_projections();
        assert_eq!(p1.source().elements(), ["(a,b)"]);
        assert_eq!(p1.apply("(a,b)"), Some("a"));
        assert_eq!(p2.apply("(a,b)"), Some("b"));
        assert_eq!(Relation::from_jointly_monic(&p1, &p2).unwrap(), r);

        let empty = Relation::empty(a.clone(), b.clone());
        let (q1, q2) = empty.graph_projections();
        assert!(q1.source().is_empty());
        assert_eq!(Relation::from_jointly_monic(&q1, &q2).unwrap(), empty);
    }

    #[test]
    fn colliding_pairing_is_rejected() {
        let z = set("Z", &["z", "z'"]);
        let x = set("X", &["a"]);
        let y = set("Y", &["b"]);
        let p1 = FnGraph::new(rel(&z, &x, &[("z", "a"), ("z'", "a")])).unwrap();
        let p2 = FnGraph::new(rel(&z, &y, &[("z", "b"), ("z'", "b")])).unwrap();
        assert!(matches!(
            Relation::from_jointly_monic(&p1, &p2),
            Err(RelError::NotJointlyMonic { .. })
        ));
    }

    #[test]
    fn fn_graph_rejects_partial() {
        let x = set("X", &["a", "b"]);
        assert!(FnGraph::new(rel(&x, &x, &[("a", "a")])).is_err());
    }
}
