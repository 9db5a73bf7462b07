//! Kripke frames with monotone maps and bounded morphisms between them.

use std::sync::Arc;

use thiserror::Error;

use crate::relalg::{FinSet, FnGraph, RelError, Relation};

/// Name of the single point of a trivial frame.
pub const TRIVIAL_ELEMENT: &str = "k0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("element `{element}` is not in frame `{frame}`")]
    UnknownElement { frame: String, element: String },
    #[error(transparent)]
    Relation(#[from] RelError),
}

/// A labelled frame `⟨D, R⟩`. The domain set carries the frame label as its name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    label: String,
    domain: Arc<FinSet>,
    rel: Relation,
    trivial: bool,
}

impl Frame {
    pub fn new(label: impl Into<String>, domain: Arc<FinSet>, rel: Relation) -> Result<Self, FrameError> {
        let label = label.into();
        if domain.is_empty() {
            return Err(FrameError::EmptyDomain(label));
        }
        for end in [rel.source(), rel.target()] {
            if **end != *domain {
                return Err(RelError::EndpointMismatch {
                    expected: domain.name().to_string(),
                    found: end.name().to_string(),
                }
                .into());
            }
        }
        let trivial = domain.len() == 1 && rel.len() == 1;
        Ok(Frame { label, domain, rel, trivial })
    }

    /// Convenience constructor from element names and pairs.
    pub fn from_parts<'a>(
        label: &str,
        elements: impl IntoIterator<Item = &'a str>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, FrameError> {
        let domain = Arc::new(FinSet::new(label, elements)?);
        let rel = Relation::new(domain.clone(), domain.clone(), pairs)?;
        Frame::new(label, domain, rel)
    }

    /// The one-point frame `⟨{k0}, {(k0,k0)}⟩` under `label`.
    pub fn trivial(label: &str) -> Frame {
        let domain = Arc::new(FinSet::new(label, [TRIVIAL_ELEMENT]).expect("single element"));
        let rel = Relation::identity(domain.clone());
        Frame { label: label.to_string(), domain, rel, trivial: true }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &Arc<FinSet> {
        &self.domain
    }

    pub fn rel(&self) -> &Relation {
        &self.rel
    }

    /// One point related to itself.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Successors of `element` in canonical order.
    pub fn successors<'a>(&'a self, element: &str) -> impl Iterator<Item = &'a str> + 'a {
        let pos = self.domain.position(element);
        pos.into_iter()
            .flat_map(move |p| self.rel.image_of(p))
            .map(move |q| self.domain.element(q))
    }
}

/// A function between frame domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMap {
    from: Frame,
    to: Frame,
    graph: FnGraph,
}

/// The three equivalent readings of monotonicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneInclusions {
    pub pointwise: bool,
    /// `R_X ⊆ f†∘R_Y∘f`
    pub sandwich: bool,
    /// `f∘R_X ⊆ R_Y∘f`
    pub semicommute: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedReport {
    pub forth: bool,
    pub back: bool,
    /// `f∘R_X = R_Y∘f` computed as a relation equation.
    pub commutes: bool,
}

impl BoundedReport {
    pub fn is_bounded(&self) -> bool {
        self.forth && self.back
    }

    pub fn consistent(&self) -> bool {
        (self.forth && self.back) == self.commutes
    }
}

impl FrameMap {
    pub fn new(from: Frame, to: Frame, graph: FnGraph) -> Result<Self, FrameError> {
        for (expected, found) in [(from.domain(), graph.source()), (to.domain(), graph.target())] {
            if expected != found {
                return Err(RelError::EndpointMismatch {
                    expected: expected.name().to_string(),
                    found: found.name().to_string(),
                }
                .into());
            }
        }
        Ok(FrameMap { from, to, graph })
    }

    pub fn from_pairs<'a>(
        from: Frame,
        to: Frame,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, FrameError> {
        let rel = Relation::new(from.domain().clone(), to.domain().clone(), pairs)?;
        let graph = FnGraph::new(rel)?;
        FrameMap::new(from, to, graph)
    }

    pub fn identity(frame: &Frame) -> FrameMap {
        FrameMap {
            from: frame.clone(),
            to: frame.clone(),
            graph: FnGraph::identity(frame.domain().clone()),
        }
    }

    pub fn from(&self) -> &Frame {
        &self.from
    }

    pub fn to(&self) -> &Frame {
        &self.to
    }

    pub fn graph(&self) -> &FnGraph {
        &self.graph
    }

    pub fn apply(&self, element: &str) -> Option<&str> {
        self.graph.apply(element)
    }

    fn image(&self, pos: usize) -> usize {
        self.graph.apply_position(pos)
    }

    pub fn is_monotone(&self) -> bool {
        let pointwise = self.pointwise_monotone();
        debug_assert_eq!(pointwise, self.semicommute_inclusion());
        pointwise
    }

    fn pointwise_monotone(&self) -> bool {
        self.from
            .rel
            .positions()
            .all(|(u, v)| self.to.rel.contains_positions(self.image(u), self.image(v)))
    }

    /// `R_X then f` and `f then R_Y`, as relations `X → Y`.
    fn commuting_sides(&self) -> (Relation, Relation) {
        let f = self.graph.underlying();
        let rel_then_f = self.from.rel.compose(f).expect("domains agree");
        let f_then_rel = f.compose(&self.to.rel).expect("domains agree");
        (rel_then_f, f_then_rel)
    }

    fn semicommute_inclusion(&self) -> bool {
        let (lhs, rhs) = self.commuting_sides();
        lhs.leq(&rhs).expect("same endpoints")
    }

    pub fn monotone_inclusions(&self) -> MonotoneInclusions {
        let f = self.graph.underlying();
        let sandwiched = f
            .compose(&self.to.rel)
            .and_then(|r| r.compose(&f.dagger()))
            .expect("domains agree");
        MonotoneInclusions {
            pointwise: self.pointwise_monotone(),
            sandwich: self.from.rel.leq(&sandwiched).expect("same endpoints"),
            semicommute: self.semicommute_inclusion(),
        }
    }

    /// Every `R_X`-edge maps onto an `R_Y`-edge.
    pub fn forth_holds(&self) -> bool {
        self.pointwise_monotone()
    }

    /// Every `R_Y`-successor of an image is the image of an `R_X`-successor.
    pub fn back_holds(&self) -> bool {
        (0..self.from.domain.len()).all(|ki| {
            self.to.rel.image_of(self.image(ki)).all(|target| {
                self.from.rel.image_of(ki).any(|kj| self.image(kj) == target)
            })
        })
    }

    pub fn bounded_report(&self) -> BoundedReport {
        let (lhs, rhs) = self.commuting_sides();
        BoundedReport { forth: self.forth_holds(), back: self.back_holds(), commutes: lhs == rhs }
    }

    pub fn is_bounded(&self) -> bool {
        let report = self.bounded_report();
        debug_assert!(report.consistent());
        report.is_bounded()
    }

    pub fn is_surjective(&self) -> bool {
        self.graph.is_surjective()
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &FrameMap) -> Result<FrameMap, FrameError> {
        if self.to != next.from {
            return Err(RelError::EndpointMismatch {
                expected: self.to.label.clone(),
                found: next.from.label.clone(),
            }
            .into());
        }
        Ok(FrameMap {
            from: self.from.clone(),
            to: next.to.clone(),
            graph: self.graph.then(&next.graph)?,
        })
    }
}

/// Free-function form of [`FrameMap::then`].
pub fn compose_maps(first: &FrameMap, second: &FrameMap) -> Result<FrameMap, FrameError> {
    first.then(second)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trivialization {
    pub frame: Frame,
    pub map: FrameMap,
    pub designated: String,
}

/// Collapses `frame` onto the one-point frame, recording the designated element
/// used to restrict interpretations.
pub fn trivialize(frame: &Frame, designated: &str) -> Result<Trivialization, FrameError> {
    if !frame.domain.contains(designated) {
        return Err(FrameError::UnknownElement {
            frame: frame.label.clone(),
            element: designated.to_string(),
        });
    }
    let target = Frame::trivial(&frame.label);
    let graph = FnGraph::from_fn(frame.domain.clone(), target.domain.clone(), |_| {
        TRIVIAL_ELEMENT.to_string()
    })?;
    let map = FrameMap::new(frame.clone(), target.clone(), graph)?;
    Ok(Trivialization { frame: target, map, designated: designated.to_string() })
}
