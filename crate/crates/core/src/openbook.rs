//! Planar open books read off a normalised surgery diagram.
//!
//! Every `0`-framed component becomes a binding (a puncture of the disk
//! page), every `-1`-framed component a right-handed Dehn twist along a curve
//! on the page. A twist curve encloses the bindings its circle is linked
//! with, through either direction of the encirclement relation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kirby::{Component, Move, MixedDiagram, MoveTrace, Target};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("diagram is not a pipeline endpoint: {0}")]
    NotNormalized(String),
    #[error("{circle} runs around {target}, which is neither a binding nor on the page")]
    UnplaceableCircle { circle: Component, target: Target },
}

/// What bounds the page before puncturing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PageBoundary {
    /// Disk bounded by the unknotted `K` (`S^1 x S^2`).
    KnotDisk,
    /// Boundary sum of the disks bounded by the unknotted `K` and by `U`.
    ConnectedSum,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Page {
    pub genus: u32,
    pub punctures: Vec<Component>,
    pub boundary: PageBoundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Twist {
    /// The `-1`-framed component this twist comes from.
    pub source: Component,
    pub curve: Vec<Component>,
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenBook {
    pub p: u32,
    pub page: Page,
    pub monodromy: Vec<Twist>,
    /// Punctures enclosed by the push-off of the knot's disk boundary.
    pub knot: Vec<Component>,
}

impl OpenBook {
    pub fn punctures(&self) -> usize {
        self.page.punctures.len()
    }

    pub fn is_positive(&self) -> bool {
        self.monodromy.iter().all(|t| t.sign == 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&OpenBookJson::from(self)).expect("plain data serialises")
    }
}

pub fn euler_characteristic(b: &OpenBook) -> i64 {
    1 - b.punctures() as i64
}

fn target_component(t: Target) -> Option<Component> {
    match t {
        Target::Strand(_) => None,
        Target::Surgery => Some(Component::Surgery),
        Target::Circle(id) => Some(Component::Circle(id)),
    }
}

/// Live components in creation order: `U` first, then circles by their last
/// blow-up in the trace. Circles the trace never created keep diagram order
/// after the traced ones.
fn creation_order(d: &MixedDiagram, trace: &MoveTrace) -> Vec<Component> {
    let mut born: Vec<(usize, usize, Component)> = d
        .circles()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let at = trace
                .moves
                .iter()
                .rposition(|m| matches!(m, Move::BlowUp { id, .. } if *id == c.id))
                .unwrap_or(usize::MAX);
            (at, k, Component::Circle(c.id))
        })
        .collect();
    born.sort();
    std::iter::once(Component::Surgery).chain(born.into_iter().map(|(_, _, c)| c)).collect()
}

fn framing_of(d: &MixedDiagram, c: Component) -> i64 {
    match c {
        Component::Surgery => d.surgery().framing,
        Component::Circle(id) => d.circle(id).map_or(0, |c| c.framing),
        Component::Knot(_) => 0,
    }
}

fn links_knot(d: &MixedDiagram, c: Component) -> bool {
    match c {
        Component::Surgery => !d.surgery().axis.is_empty(),
        Component::Circle(id) => d.circle(id).is_some_and(|c| c.links_knot()),
        Component::Knot(_) => false,
    }
}

pub fn extract(d: &MixedDiagram, trace: &MoveTrace) -> Result<OpenBook, ExtractError> {
    let framing_u = d.surgery().framing;
    if framing_u != 0 && framing_u != -1 {
        return Err(ExtractError::NotNormalized(format!("U has framing {framing_u}")));
    }
    if let Some(c) = d.circles().iter().find(|c| c.framing != 0 && c.framing != -1) {
        return Err(ExtractError::NotNormalized(format!("c{} has framing {}", c.id, c.framing)));
    }
    if !d.pending().is_empty() {
        return Err(ExtractError::NotNormalized(format!("{} syllables of K are still pending", d.pending().len())));
    }

    let order = creation_order(d, trace);
    let bindings: Vec<Component> = order.iter().copied().filter(|&c| framing_of(d, c) == 0).collect();
    let is_binding = |c: Component| bindings.contains(&c);

    let mut monodromy = Vec::new();
    for &source in order.iter().filter(|&&c| framing_of(d, c) == -1) {
        let own_targets: Vec<Target> = match source {
            Component::Circle(id) => d.circle(id).map(|c| c.targets.iter().map(|l| l.target).collect()).unwrap_or_default(),
            _ => Vec::new(),
        };
        let mut enclosed = Vec::new();
        for t in own_targets {
            match target_component(t) {
                None => {}
                Some(Component::Surgery) if !is_binding(Component::Surgery) => {}
                Some(c) if is_binding(c) => enclosed.push(c),
                Some(_) => return Err(ExtractError::UnplaceableCircle { circle: source, target: t }),
            }
        }
        let me = match source {
            Component::Surgery => Target::Surgery,
            Component::Circle(id) => Target::Circle(id),
            Component::Knot(_) => unreachable!(),
        };
        enclosed.extend(d.encircled_by(me).map(|c| Component::Circle(c.id)).filter(|&c| is_binding(c)));
        let curve = bindings.iter().copied().filter(|b| enclosed.contains(b)).collect();
        monodromy.push(Twist { source, curve, sign: 1 });
    }

    let knot = bindings.iter().copied().filter(|&b| links_knot(d, b)).collect();
    let boundary = if d.p() == 0 { PageBoundary::KnotDisk } else { PageBoundary::ConnectedSum };
    Ok(OpenBook {
        p: d.p(),
        page: Page { genus: 0, punctures: bindings, boundary },
        monodromy,
        knot,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageJson {
    pub genus: u32,
    pub punctures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistJson {
    pub curve: Vec<String>,
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotJson {
    pub encloses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldJson {
    pub p: u32,
}

/// Wire form of an [`OpenBook`]; field order is part of the format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenBookJson {
    pub page: PageJson,
    pub monodromy: Vec<TwistJson>,
    pub knot: KnotJson,
    pub manifold: ManifoldJson,
}

fn names(cs: &[Component]) -> Vec<String> {
    cs.iter().map(ToString::to_string).collect()
}

impl From<&OpenBook> for OpenBookJson {
    fn from(b: &OpenBook) -> Self {
        OpenBookJson {
            page: PageJson { genus: b.page.genus, punctures: names(&b.page.punctures) },
            monodromy: b.monodromy.iter().map(|t| TwistJson { curve: names(&t.curve), sign: t.sign }).collect(),
            knot: KnotJson { encloses: names(&b.knot) },
            manifold: ManifoldJson { p: b.p },
        }
    }
}

impl OpenBookJson {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_word, PlatInput};
    use crate::kirby::{initial_diagram, Link, Step};
    use crate::pipeline::run;

    fn book(word: &str, p: u32) -> OpenBook {
        let r = run(&PlatInput::new(parse_word(word).unwrap(), p)).unwrap();
        extract(&r.endpoint, &r.trace).unwrap()
    }

    #[test]
    fn boundary_case_has_bare_disk() {
        // n = 1, p = 1: U is the only -1 component and nothing is a binding
        let b = book("n=1", 1);
        assert!(b.page.punctures.is_empty());
        assert_eq!(euler_characteristic(&b), 1);
        assert_eq!(b.monodromy.len(), 1);
        assert_eq!(b.monodromy[0].source, Component::Surgery);
        assert_eq!(b.page.boundary, PageBoundary::ConnectedSum);
    }

    #[test]
    fn lens_space_page() {
        let b = book("n=2 a(1,2) a(2,3)^-1", 4);
        // ladder c1,c2, raise c5, cancel of the negative syllable c8
        assert_eq!(b.page.punctures, vec![Component::Circle(1), Component::Circle(2), Component::Circle(5), Component::Circle(8)]);
        assert!(b.is_positive());
        let u = b.monodromy.iter().find(|t| t.source == Component::Surgery).unwrap();
        assert_eq!(u.curve, vec![Component::Circle(1), Component::Circle(2), Component::Circle(5)]);
        assert_eq!(b.knot, vec![Component::Circle(1), Component::Circle(2), Component::Circle(8)]);
    }

    #[test]
    fn sphere_product_page() {
        let b = book("n=1 a(1,2)", 0);
        // U, and the restore circle around U and s2
        assert_eq!(b.page.punctures, vec![Component::Surgery, Component::Circle(2)]);
        assert_eq!(b.page.boundary, PageBoundary::KnotDisk);
        assert_eq!(euler_characteristic(&b), -1);
        assert!(b.knot.contains(&Component::Surgery));
    }

    #[test]
    fn refuses_plus_one_circles() {
        let d = initial_diagram(&PlatInput::new(parse_word("n=1").unwrap(), 0));
        let (e, mv) = d.blow_up(&[], 1, Step::Free).unwrap();
        let t = MoveTrace { moves: vec![mv] };
        assert!(matches!(extract(&e, &t), Err(ExtractError::NotNormalized(_))));
        assert!(extract(&d, &MoveTrace::new()).is_ok());
    }

    #[test]
    fn refuses_unplaceable() {
        let d = initial_diagram(&PlatInput::new(parse_word("n=1").unwrap(), 0));
        let mut moves = Vec::new();
        let (d, m) = d.blow_up(&[], 1, Step::Free).unwrap();
        moves.push(m);
        let (d, m) = d.meridian_zero(1).unwrap();
        moves.push(m);
        // a second -1 meridian drags c1 down to -1, so c2 circles a twist curve
        let (d, m) = d.blow_up(&[Link::pos(Target::Circle(1))], -1, Step::Free).unwrap();
        moves.push(m);
        let err = extract(&d, &MoveTrace { moves }).unwrap_err();
        assert_eq!(err, ExtractError::UnplaceableCircle { circle: Component::Circle(2), target: Target::Circle(1) });
    }

    #[test]
    fn json_shape() {
        let b = book("n=1", 2);
        let json = b.to_json();
        assert_eq!(
            json,
            r#"{"page":{"genus":0,"punctures":["c1"]},"monodromy":[{"curve":["c1"],"sign":1},{"curve":["c1"],"sign":1}],"knot":{"encloses":[]},"manifold":{"p":2}}"#
        );
        assert_eq!(OpenBookJson::parse(&json).unwrap(), OpenBookJson::from(&b));
    }
}
