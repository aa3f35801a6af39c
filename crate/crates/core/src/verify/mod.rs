//! Independent checks on pipeline output: first homology from the linking
//! matrix, the blow-down round trip, and the open book audit.

mod snf;

pub use snf::{cokernel, smith_normal_form, CertificateError, SnfResult};

use std::fmt;

use crate::kirby::{Component, Move, MixedDiagram, MoveTrace, Target};
use crate::matrix::Overflow;
use crate::openbook::{OpenBook, OpenBookJson};

/// `H_1` of the surgered manifold as cyclic orders, `0` meaning `ℤ`.
pub fn h1(d: &MixedDiagram) -> Result<Vec<i128>, Overflow> {
    cokernel(&d.linking_matrix().matrix)
}

/// `H_1` with the SNF certificate re-checked.
pub fn certified_h1(d: &MixedDiagram) -> Result<Vec<i128>, String> {
    let m = d.linking_matrix().matrix;
    let snf = smith_normal_form(&m).map_err(|e| e.to_string())?;
    snf.certify(&m).map_err(|e| format!("{e:?}"))?;
    cokernel(&m).map_err(|e| e.to_string())
}

/// Expected `H_1` of `L(p,1)`, or of `S^1 x S^2` for `p = 0`.
pub fn expected_h1(p: u32) -> Vec<i128> {
    match p {
        1 => Vec::new(),
        p => vec![i128::from(p)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// Index of the move whose inversion (or replay) went wrong.
    pub at: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    pub moves: usize,
    pub divergence: Option<Divergence>,
}

impl RoundTripReport {
    pub fn ok(&self) -> bool {
        self.divergence.is_none()
    }
}

fn invert(before: &MixedDiagram, after: &MixedDiagram, mv: &Move) -> Result<MixedDiagram, String> {
    match mv {
        Move::BlowUp { id, .. } => after.blow_down(*id).map(|(d, _)| d).map_err(|e| e.to_string()),
        Move::BlowDown { id } => {
            let c = before.circle(*id).ok_or_else(|| format!("c{id} was not there to blow down"))?;
            let redo = Move::BlowUp { id: *id, sign: c.sign, targets: c.targets.clone(), step: c.step };
            after.apply(&redo).map_err(|e| e.to_string())
        }
    }
}

/// Walks back from `endpoint` by undoing the trace move by move, comparing
/// each diagram with the forward replay from `initial`, and finally with
/// `initial` itself.
pub fn round_trip(initial: &MixedDiagram, endpoint: &MixedDiagram, trace: &MoveTrace) -> RoundTripReport {
    let report = |divergence| RoundTripReport { moves: trace.len(), divergence };
    let states = match trace.states(initial) {
        Ok(s) => s,
        Err((at, e)) => return report(Some(Divergence { at, detail: format!("replay failed: {e}") })),
    };
    let mut current = endpoint.clone();
    for (k, mv) in trace.moves.iter().enumerate().rev() {
        if current != states[k + 1] {
            return report(Some(Divergence { at: k, detail: format!("diagram after `{mv}` differs from replay") }));
        }
        current = match invert(&states[k], &current, mv) {
            Ok(d) => d,
            Err(e) => return report(Some(Divergence { at: k, detail: format!("cannot undo `{mv}`: {e}") })),
        };
    }
    if &current != initial {
        return report(Some(Divergence { at: 0, detail: "undoing every move does not give the initial diagram".into() }));
    }
    report(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, passed, detail: detail.into() });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn minus_one_components(d: &MixedDiagram) -> Vec<Component> {
    let mut out = Vec::new();
    if d.surgery().framing == -1 {
        out.push(Component::Surgery);
    }
    out.extend(d.circles().iter().filter(|c| c.framing == -1).map(|c| Component::Circle(c.id)));
    out
}

fn binding_count(d: &MixedDiagram) -> usize {
    d.circles().iter().filter(|c| c.framing == 0).count() + usize::from(d.surgery().framing == 0)
}

/// Positivity, planarity and bookkeeping checks of `book` against the
/// diagram it was read from.
pub fn audit(book: &OpenBook, d: &MixedDiagram) -> AuditReport {
    let mut r = AuditReport::default();
    let negative = book.monodromy.iter().filter(|t| t.sign != 1).count();
    r.push("positive-monodromy", negative == 0, format!("{negative} non-positive twists"));
    r.push("planar-page", book.page.genus == 0, format!("genus {}", book.page.genus));

    let bindings = binding_count(d);
    r.push(
        "binding-count",
        bindings == book.punctures(),
        format!("{} punctures, {bindings} zero-framed components", book.punctures()),
    );

    let sources = minus_one_components(d);
    let uses: Vec<usize> = sources
        .iter()
        .map(|s| book.monodromy.iter().filter(|t| t.source == *s).count())
        .collect();
    let stray = book.monodromy.iter().filter(|t| !sources.contains(&t.source)).count();
    let consumed_once = uses.iter().all(|&u| u == 1) && stray == 0 && book.monodromy.len() == sources.len();
    r.push(
        "twist-per-minus-one",
        consumed_once,
        format!("{} twists, {} -1 components, {stray} stray", book.monodromy.len(), sources.len()),
    );

    let outside: Vec<String> = book
        .monodromy
        .iter()
        .flat_map(|t| t.curve.iter())
        .chain(book.knot.iter())
        .filter(|c| !book.page.punctures.contains(c))
        .map(ToString::to_string)
        .collect();
    r.push("curves-on-page", outside.is_empty(), format!("off-page: {outside:?}"));

    let knot_ok = book.knot.iter().all(|&c| match c {
        Component::Surgery => !d.surgery().axis.is_empty(),
        Component::Circle(id) => d.circle(id).is_some_and(|c| c.links_knot()),
        Component::Knot(_) => false,
    });
    r.push("knot-encloses-linked", knot_ok, format!("{} enclosed", book.knot.len()));
    r
}

/// Audit of a serialised open book, for when only the JSON is at hand.
pub fn audit_json(book: &OpenBookJson, d: &MixedDiagram) -> AuditReport {
    let mut r = AuditReport::default();
    let negative = book.monodromy.iter().filter(|t| t.sign != 1).count();
    r.push("positive-monodromy", negative == 0, format!("{negative} non-positive twists"));
    r.push("planar-page", book.page.genus == 0, format!("genus {}", book.page.genus));
    let bindings = binding_count(d);
    r.push(
        "binding-count",
        bindings == book.page.punctures.len(),
        format!("{} punctures, {bindings} zero-framed components", book.page.punctures.len()),
    );
    let sources = minus_one_components(d).len();
    r.push(
        "twist-per-minus-one",
        sources == book.monodromy.len(),
        format!("{} twists, {sources} -1 components", book.monodromy.len()),
    );
    r.push("manifold", book.manifold.p == d.p(), format!("p = {} in file, {} in diagram", book.manifold.p, d.p()));
    r
}

/// Framing of `U` recomputed from the trace alone: `-p` plus `ε·ℓ²` for
/// every blow-up around `U`, minus the same for every blow-down.
pub fn framing_from_trace(p: u32, trace: &MoveTrace) -> i64 {
    let mut live: std::collections::HashMap<u32, i64> = std::collections::HashMap::new();
    let mut framing = -i64::from(p);
    for mv in &trace.moves {
        match mv {
            Move::BlowUp { id, sign, targets, .. } => {
                let l: i64 = targets.iter().filter(|t| t.target == Target::Surgery).map(|t| i64::from(t.sign)).sum();
                let delta = i64::from(*sign) * l * l;
                framing += delta;
                live.insert(*id, delta);
            }
            Move::BlowDown { id } => framing -= live.remove(id).unwrap_or(0),
        }
    }
    framing
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_word, PlatInput};
    use crate::kirby::{initial_diagram, Step};
    use crate::openbook::extract;
    use crate::pipeline::run;

    fn input(word: &str, p: u32) -> PlatInput {
        PlatInput::new(parse_word(word).unwrap(), p)
    }

    #[test]
    fn h1_of_initial_diagrams() {
        assert_eq!(h1(&initial_diagram(&input("n=2", 4))).unwrap(), vec![4]);
        assert_eq!(h1(&initial_diagram(&input("n=2", 0))).unwrap(), vec![0]);
        assert_eq!(h1(&initial_diagram(&input("n=2", 1))).unwrap(), Vec::<i128>::new());
    }

    #[test]
    fn h1_of_endpoints() {
        for (w, p) in [("n=2 a(1,2) a(3,4)^-1", 4), ("n=1 a(1,2)^-3", 0), ("n=3 a(2,5)", 9)] {
            let r = run(&input(w, p)).unwrap();
            assert_eq!(certified_h1(&r.endpoint).unwrap(), expected_h1(p));
        }
    }

    #[test]
    fn empty_trace_round_trips() {
        let d = initial_diagram(&input("n=2", 3));
        assert!(round_trip(&d, &d, &MoveTrace::new()).ok());
    }

    #[test]
    fn lens_space_round_trip_restores_framing() {
        let r = run(&input("n=2 a(1,2)", 4)).unwrap();
        let report = round_trip(&r.initial, &r.endpoint, &r.trace);
        assert!(report.ok(), "{report:?}");
        assert_eq!(r.initial.surgery().framing, -4);
    }

    #[test]
    fn flipped_sign_is_caught_at_that_move() {
        let r = run(&input("n=2 a(1,2)", 4)).unwrap();
        let mut bad = r.trace.clone();
        if let Move::BlowUp { sign, .. } = &mut bad.moves[1] {
            *sign = -*sign;
        }
        let report = round_trip(&r.initial, &r.endpoint, &bad);
        // the flipped ladder circle breaks the meridian that follows it
        assert!(!report.ok());
        assert!(report.divergence.unwrap().at >= 1);

        let mut bad = r.trace.clone();
        let last = bad.len() - 1;
        if let Move::BlowUp { sign, .. } = &mut bad.moves[last] {
            *sign = -*sign;
        }
        let report = round_trip(&r.initial, &r.endpoint, &bad);
        assert_eq!(report.divergence.map(|d| d.at), Some(last));
    }

    #[test]
    fn trace_with_blow_downs_round_trips() {
        let d = initial_diagram(&input("n=1", 2));
        let (e, m1) = d.blow_up(&[Link::pos(Target::Surgery)], 1, Step::Free).unwrap();
        let (f, m2) = e.blow_up(&[], -1, Step::Free).unwrap();
        let (g, m3) = f.blow_down(2).unwrap();
        let t = MoveTrace { moves: vec![m1, m2, m3] };
        assert!(round_trip(&d, &g, &t).ok());
        assert_eq!(framing_from_trace(2, &t), g.surgery().framing);
    }

    use crate::kirby::Link;

    #[test]
    fn audit_passes_and_catches_deleted_twist() {
        let r = run(&input("n=2 a(1,2) a(1,3)^-1", 5)).unwrap();
        let mut b = extract(&r.endpoint, &r.trace).unwrap();
        assert!(audit(&b, &r.endpoint).ok());
        b.monodromy.pop();
        let report = audit(&b, &r.endpoint);
        assert!(!report.ok());
        assert!(report.failures().any(|c| c.name == "twist-per-minus-one"));
    }

    #[test]
    fn audit_catches_negative_twist_and_lost_puncture() {
        let r = run(&input("n=2 a(1,2)^-1", 0)).unwrap();
        let b = extract(&r.endpoint, &r.trace).unwrap();
        let mut neg = b.clone();
        neg.monodromy[0].sign = -1;
        assert!(audit(&neg, &r.endpoint).failures().any(|c| c.name == "positive-monodromy"));
        let mut fewer = b.clone();
        fewer.page.punctures.pop();
        assert!(audit(&fewer, &r.endpoint).failures().any(|c| c.name == "binding-count"));
        assert!(audit_json(&OpenBookJson::from(&b), &r.endpoint).ok());
    }
}
