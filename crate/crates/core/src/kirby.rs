//! Mixed surgery diagrams and the blow-up / blow-down calculus.
//!
//! A diagram is kept combinatorially: the knot `K` as plat strands, the
//! surgery unknot `U` with its framing and the strands it still encircles,
//! an ordered list of blow-up circles, and the syllables of `K`'s braid word
//! that have not been cancelled yet. Strands are oriented upward and circles
//! counterclockwise, so a target listed with sign `+1` is linked `+1`.
//!
//! Sign convention: an `ε`-framed blow-up inserts an `ε` full twist among the
//! encircled strands and adds `ε·ℓ²` to the framing of every framed
//! component it links `ℓ` times; its blow-down removes both again.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::braid::{u_decomposition, PlatInput, Syllable};
use crate::matrix::IntMatrix;

pub type CircleId = u32;

/// A component of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Knot(usize),
    Surgery,
    Circle(CircleId),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Knot(k) => write!(f, "K{k}"),
            Component::Surgery => f.write_str("U"),
            Component::Circle(c) => write!(f, "c{c}"),
        }
    }
}

impl FromStr for Component {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TraceParseError::BadToken(s.to_string());
        if s == "U" {
            Ok(Component::Surgery)
        } else if let Some(k) = s.strip_prefix('K') {
            k.parse().map(Component::Knot).map_err(|_| bad())
        } else if let Some(c) = s.strip_prefix('c') {
            c.parse().map(Component::Circle).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// Something a circle can run around: a plat strand of `K`, `U`, or an
/// earlier circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Strand(usize),
    Surgery,
    Circle(CircleId),
}

impl Target {
    pub fn is_framed(&self) -> bool {
        !matches!(self, Target::Strand(_))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Strand(s) => write!(f, "s{s}"),
            Target::Surgery => f.write_str("U"),
            Target::Circle(c) => write!(f, "c{c}"),
        }
    }
}

impl FromStr for Target {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TraceParseError::BadToken(s.to_string());
        if s == "U" {
            Ok(Target::Surgery)
        } else if let Some(k) = s.strip_prefix('s') {
            k.parse().map(Target::Strand).map_err(|_| bad())
        } else if let Some(c) = s.strip_prefix('c') {
            c.parse().map(Target::Circle).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// One passage of a circle around a target, geometric linking 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Link {
    pub target: Target,
    pub sign: i32,
}

impl Link {
    pub fn pos(target: Target) -> Self {
        Link { target, sign: 1 }
    }

    pub fn neg(target: Target) -> Self {
        Link { target, sign: -1 }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        write!(f, "{}", self.target)
    }
}

impl FromStr for Link {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('-') {
            Some(rest) => Ok(Link::neg(rest.parse()?)),
            None => Ok(Link::pos(s.strip_prefix('+').unwrap_or(s).parse()?)),
        }
    }
}

fn linking_with(links: &[Link], target: Target) -> i64 {
    links
        .iter()
        .filter(|l| l.target == target)
        .map(|l| i64::from(l.sign))
        .sum()
}

/// The role of a blow-up in a move program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// Unconstrained blow-up.
    Free,
    /// Cancels the next pending syllable of `K`.
    Cancel,
    /// Cancels one strand of `U`'s axis decomposition.
    Axis,
    /// `+1` bump of `U` at an interior strand before the lens-space raise.
    Ladder,
    /// `+1` bump of `U` alone, lifting its framing to `-1`.
    Raise,
    /// Bump of `U` back to framing `0` in the `S^1 x S^2` case.
    Restore,
    /// `-1` meridian taking a `+1` circle to framing `0`.
    Meridian,
}

impl Step {
    pub const ALL: [Step; 7] = [
        Step::Free,
        Step::Cancel,
        Step::Axis,
        Step::Ladder,
        Step::Raise,
        Step::Restore,
        Step::Meridian,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Step::Free => "free",
            Step::Cancel => "cancel",
            Step::Axis => "axis",
            Step::Ladder => "ladder",
            Step::Raise => "raise",
            Step::Restore => "restore",
            Step::Meridian => "meridian",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Step {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Step::ALL
            .into_iter()
            .find(|st| st.tag() == s)
            .ok_or_else(|| TraceParseError::BadToken(s.to_string()))
    }
}

/// What a cancelling blow-up removed from the diagram, restored on blow-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Consumed {
    Knot(Syllable),
    Axis { link: Link, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circle {
    pub id: CircleId,
    pub framing: i64,
    /// Framing at creation; the sign of the inserted twist.
    pub sign: i32,
    pub targets: Vec<Link>,
    pub step: Step,
    pub consumed: Option<Consumed>,
}

impl Circle {
    pub fn linking_with(&self, target: Target) -> i64 {
        linking_with(&self.targets, target)
    }

    pub fn links_knot(&self) -> bool {
        self.targets.iter().any(|l| matches!(l.target, Target::Strand(_)))
    }
}

/// The surgery unknot and the strands it still encircles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurgeryUnknot {
    pub framing: i64,
    pub axis: Vec<Link>,
}

impl SurgeryUnknot {
    pub fn knot_linking(&self) -> i64 {
        self.axis.iter().map(|l| i64::from(l.sign)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnotComponent {
    pub index: usize,
    pub strands: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown target {0}")]
    UnknownTarget(Target),
    #[error("no circle c{0}")]
    UnknownCircle(CircleId),
    #[error("blow-up sign must be +1 or -1, got {0}")]
    BadSign(i32),
    #[error("c{id} has framing {framing}, only unit-framed circles blow down")]
    NotUnitFramed { id: CircleId, framing: i64 },
    #[error("c{id} is encircled by c{by}; blow that down first")]
    OrphanedNesting { id: CircleId, by: CircleId },
    #[error("no pending syllable left")]
    NoPendingSyllable,
    #[error("syllable {0} is not a unit full twist")]
    NonUnitExponent(Syllable),
    #[error("next pending syllable is {expected}, not {found}")]
    SyllableMismatch { expected: Syllable, found: Syllable },
    #[error("c{id} has framing {framing}, expected +1")]
    WrongFraming { id: CircleId, framing: i64 },
    #[error("U does not encircle strand {0}")]
    AxisStrandMissing(usize),
    #[error("blow-up creates c{found} but the next fresh id is c{expected}")]
    IdMismatch { expected: CircleId, found: CircleId },
    #[error("{step} blow-up does not match the diagram: {reason}")]
    StepMismatch { step: Step, reason: String },
}

/// A diagram of `K ∪ U` plus blow-up circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedDiagram {
    n: usize,
    p: u32,
    knots: Vec<KnotComponent>,
    surgery: SurgeryUnknot,
    circles: Vec<Circle>,
    pending: Vec<Syllable>,
}

/// Diagram of `K ∪ U` before any move: `U` framed `-p` in axis position, the
/// braid word expanded to unit syllables and pending.
pub fn initial_diagram(input: &PlatInput) -> MixedDiagram {
    let n = input.n();
    let knots = input
        .components()
        .into_iter()
        .enumerate()
        .map(|(k, strands)| KnotComponent { index: k + 1, strands })
        .collect();
    let axis = u_decomposition(n)
        .generators
        .iter()
        .map(|g| Link { target: Target::Strand(g.strand), sign: g.sign })
        .collect();
    MixedDiagram {
        n,
        p: input.p,
        knots,
        surgery: SurgeryUnknot { framing: -i64::from(input.p), axis },
        circles: Vec::new(),
        pending: input.word.unit_expansion(),
    }
}

impl MixedDiagram {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `p` of the ambient `L(p,1)`; `0` for `S^1 x S^2`.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn knots(&self) -> &[KnotComponent] {
        &self.knots
    }

    pub fn surgery(&self) -> &SurgeryUnknot {
        &self.surgery
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn pending(&self) -> &[Syllable] {
        &self.pending
    }

    pub fn circle(&self, id: CircleId) -> Option<&Circle> {
        self.circles.iter().find(|c| c.id == id)
    }

    fn circle_mut(&mut self, id: CircleId) -> Option<&mut Circle> {
        self.circles.iter_mut().find(|c| c.id == id)
    }

    /// Framing of `U` or of a circle; `None` for knot strands.
    pub fn framing(&self, target: Target) -> Option<i64> {
        match target {
            Target::Strand(_) => None,
            Target::Surgery => Some(self.surgery.framing),
            Target::Circle(id) => self.circle(id).map(|c| c.framing),
        }
    }

    fn framing_mut(&mut self, target: Target) -> Option<&mut i64> {
        match target {
            Target::Strand(_) => None,
            Target::Surgery => Some(&mut self.surgery.framing),
            Target::Circle(id) => self.circle_mut(id).map(|c| &mut c.framing),
        }
    }

    /// Smallest id not used by a live circle.
    pub fn next_circle_id(&self) -> CircleId {
        self.circles.iter().map(|c| c.id).max().map_or(1, |m| m + 1)
    }

    fn contains(&self, target: Target) -> bool {
        match target {
            Target::Strand(s) => (1..=2 * self.n).contains(&s),
            Target::Surgery => true,
            Target::Circle(id) => self.circle(id).is_some(),
        }
    }

    /// Signed number of times a framed component runs around `strand`.
    pub fn strand_linking(&self, component: Component, strand: usize) -> i64 {
        match component {
            Component::Surgery => linking_with(&self.surgery.axis, Target::Strand(strand)),
            Component::Circle(id) => self.circle(id).map_or(0, |c| c.linking_with(Target::Strand(strand))),
            Component::Knot(_) => 0,
        }
    }

    /// Algebraic linking of a framed component with `K`, counted over the
    /// strands it encircles.
    pub fn knot_linking(&self, component: Component) -> i64 {
        (1..=2 * self.n).map(|s| self.strand_linking(component, s)).sum()
    }

    /// Circles that run around `target`.
    pub fn encircled_by(&self, target: Target) -> impl Iterator<Item = &Circle> {
        self.circles.iter().filter(move |c| c.targets.iter().any(|l| l.target == target))
    }

    pub fn apply(&self, mv: &Move) -> Result<MixedDiagram, MoveError> {
        match mv {
            Move::BlowUp { id, sign, targets, step } => self.apply_blow_up(*id, *sign, targets, *step),
            Move::BlowDown { id } => self.apply_blow_down(*id),
        }
    }

    fn apply_blow_up(&self, id: CircleId, sign: i32, targets: &[Link], step: Step) -> Result<MixedDiagram, MoveError> {
        if sign.abs() != 1 {
            return Err(MoveError::BadSign(sign));
        }
        let expected = self.next_circle_id();
        if id != expected {
            return Err(MoveError::IdMismatch { expected, found: id });
        }
        for l in targets {
            if l.sign.abs() != 1 {
                return Err(MoveError::BadSign(l.sign));
            }
            if !self.contains(l.target) {
                return Err(MoveError::UnknownTarget(l.target));
            }
        }
        let mismatch = |reason: String| MoveError::StepMismatch { step, reason };
        let mut next = self.clone();
        let consumed = match step {
            Step::Cancel => {
                let s = *self.pending.first().ok_or(MoveError::NoPendingSyllable)?;
                if !s.is_unit() {
                    return Err(MoveError::NonUnitExponent(s));
                }
                let want = [Link::pos(Target::Strand(s.i)), Link::pos(Target::Strand(s.j))];
                if targets != want || sign != -s.sign() {
                    return Err(mismatch(format!("{s} is cancelled by e={:+} around [s{},s{}]", -s.sign(), s.i, s.j)));
                }
                next.pending.remove(0);
                Some(Consumed::Knot(s))
            }
            Step::Axis => {
                let strand = match targets {
                    [Link { target: Target::Surgery, sign: 1 }, Link { target: Target::Strand(k), sign: 1 }] => *k,
                    _ => return Err(mismatch("axis blow-ups run around [U,s<k>]".into())),
                };
                let position = self
                    .surgery
                    .axis
                    .iter()
                    .position(|l| l.target == Target::Strand(strand))
                    .ok_or(MoveError::AxisStrandMissing(strand))?;
                let link = self.surgery.axis[position];
                if sign != -link.sign {
                    return Err(mismatch(format!("strand {strand} is cancelled by e={:+}", -link.sign)));
                }
                next.surgery.axis.remove(position);
                Some(Consumed::Axis { link, position })
            }
            Step::Meridian => {
                let target = match targets {
                    [Link { target: Target::Circle(c), sign: 1 }] => *c,
                    _ => return Err(mismatch("a meridian runs once around a single circle".into())),
                };
                let framing = self.framing(Target::Circle(target)).unwrap_or_default();
                if framing != 1 {
                    return Err(MoveError::WrongFraming { id: target, framing });
                }
                if sign != -1 {
                    return Err(mismatch("meridians are framed -1".into()));
                }
                None
            }
            _ => None,
        };
        for (target, l) in framed_linkings(targets) {
            *next.framing_mut(target).expect("target checked above") += i64::from(sign) * l * l;
        }
        next.circles.push(Circle { id, framing: i64::from(sign), sign, targets: targets.to_vec(), step, consumed });
        Ok(next)
    }

    fn apply_blow_down(&self, id: CircleId) -> Result<MixedDiagram, MoveError> {
        let idx = self.circles.iter().position(|c| c.id == id).ok_or(MoveError::UnknownCircle(id))?;
        let circle = &self.circles[idx];
        if circle.framing.abs() != 1 {
            return Err(MoveError::NotUnitFramed { id, framing: circle.framing });
        }
        if let Some(by) = self.encircled_by(Target::Circle(id)).next() {
            return Err(MoveError::OrphanedNesting { id, by: by.id });
        }
        debug_assert_eq!(circle.framing, i64::from(circle.sign));
        let mut next = self.clone();
        let circle = next.circles.remove(idx);
        for (target, l) in framed_linkings(&circle.targets) {
            *next.framing_mut(target).expect("targets outlive their circles") -= i64::from(circle.sign) * l * l;
        }
        match circle.consumed {
            Some(Consumed::Knot(s)) => next.pending.insert(0, s),
            Some(Consumed::Axis { link, position }) => {
                let at = position.min(next.surgery.axis.len());
                next.surgery.axis.insert(at, link)
            }
            None => {}
        }
        Ok(next)
    }

    /// Adds an `ε`-framed unknot around `targets`; an empty target list is a
    /// disjoint blow-up.
    pub fn blow_up(&self, targets: &[Link], sign: i32, step: Step) -> Result<(MixedDiagram, Move), MoveError> {
        let mv = Move::BlowUp { id: self.next_circle_id(), sign, targets: targets.to_vec(), step };
        Ok((self.apply(&mv)?, mv))
    }

    pub fn blow_down(&self, id: CircleId) -> Result<(MixedDiagram, Move), MoveError> {
        let mv = Move::BlowDown { id };
        Ok((self.apply(&mv)?, mv))
    }

    /// Removes the full twist `s` (the next pending syllable) with a
    /// `-sign(s)` blow-up around its two strands.
    pub fn cancel_syllable(&self, s: Syllable) -> Result<(MixedDiagram, Move), MoveError> {
        if !s.is_unit() {
            return Err(MoveError::NonUnitExponent(s));
        }
        let expected = *self.pending.first().ok_or(MoveError::NoPendingSyllable)?;
        if expected != s {
            return Err(MoveError::SyllableMismatch { expected, found: s });
        }
        let targets = [Link::pos(Target::Strand(s.i)), Link::pos(Target::Strand(s.j))];
        self.blow_up(&targets, -s.sign(), Step::Cancel)
    }

    /// Cancels the next pending syllable, whatever it is.
    pub fn cancel_next(&self) -> Result<(MixedDiagram, Move), MoveError> {
        let s = *self.pending.first().ok_or(MoveError::NoPendingSyllable)?;
        self.cancel_syllable(s)
    }

    /// Unlinks `U` from `strand` by cancelling that factor of its axis
    /// decomposition.
    pub fn cancel_axis(&self, strand: usize) -> Result<(MixedDiagram, Move), MoveError> {
        let link = self
            .surgery
            .axis
            .iter()
            .find(|l| l.target == Target::Strand(strand))
            .ok_or(MoveError::AxisStrandMissing(strand))?;
        let targets = [Link::pos(Target::Surgery), Link::pos(Target::Strand(strand))];
        self.blow_up(&targets, -link.sign, Step::Axis)
    }

    /// Takes a `+1` circle to framing `0` with a `-1` meridian.
    pub fn meridian_zero(&self, id: CircleId) -> Result<(MixedDiagram, Move), MoveError> {
        let framing = self.circle(id).ok_or(MoveError::UnknownCircle(id))?.framing;
        if framing != 1 {
            return Err(MoveError::WrongFraming { id, framing });
        }
        self.blow_up(&[Link::pos(Target::Circle(id))], -1, Step::Meridian)
    }

    /// Framed components in matrix order: `U`, then circles by creation.
    pub fn surgery_components(&self) -> Vec<Component> {
        std::iter::once(Component::Surgery)
            .chain(self.circles.iter().map(|c| Component::Circle(c.id)))
            .collect()
    }

    pub fn linking_matrix(&self) -> LinkingMatrix {
        let labels = self.surgery_components();
        let target_of = |c: Component| match c {
            Component::Surgery => Target::Surgery,
            Component::Circle(id) => Target::Circle(id),
            Component::Knot(_) => unreachable!("knots are not surgery components"),
        };
        let direct = |a: Component, b: Component| -> i64 {
            match a {
                Component::Circle(id) => self.circle(id).map_or(0, |c| c.linking_with(target_of(b))),
                // U only runs around strands
                _ => 0,
            }
        };
        let size = labels.len();
        let mut m = IntMatrix::zeros(size, size);
        for (r, &a) in labels.iter().enumerate() {
            m[(r, r)] = i128::from(self.framing(target_of(a)).expect("framed"));
            for (c, &b) in labels.iter().enumerate().skip(r + 1) {
                let (ta, tb) = (target_of(a), target_of(b));
                let twisted: i64 = self
                    .circles
                    .iter()
                    .map(|k| i64::from(k.sign) * k.linking_with(ta) * k.linking_with(tb))
                    .sum();
                let v = i128::from(direct(a, b) + direct(b, a) + twisted);
                m[(r, c)] = v;
                m[(c, r)] = v;
            }
        }
        LinkingMatrix { labels, matrix: m }
    }
}

fn framed_linkings(targets: &[Link]) -> BTreeMap<Target, i64> {
    let mut out = BTreeMap::new();
    for l in targets.iter().filter(|l| l.target.is_framed()) {
        *out.entry(l.target).or_insert(0) += i64::from(l.sign);
    }
    out
}

/// Linking matrix of the surgery components; `K` is not surgered and is
/// left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    pub labels: Vec<Component>,
    pub matrix: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    BlowUp { id: CircleId, sign: i32, targets: Vec<Link>, step: Step },
    BlowDown { id: CircleId },
}

impl Move {
    pub fn circle(&self) -> CircleId {
        match self {
            Move::BlowUp { id, .. } | Move::BlowDown { id } => *id,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::BlowUp { id, sign, targets, step } => {
                let targets: Vec<String> = targets.iter().map(ToString::to_string).collect();
                write!(f, "BU c{id} e={sign:+} targets=[{}] step={step}", targets.join(","))
            }
            Move::BlowDown { id } => write!(f, "BD c{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("bad token `{0}`")]
    BadToken(String),
    #[error("line {line}: {reason}")]
    BadLine { line: usize, reason: String },
}

fn parse_circle_id(tok: &str) -> Result<CircleId, TraceParseError> {
    match tok.parse::<Component>()? {
        Component::Circle(id) => Ok(id),
        _ => Err(TraceParseError::BadToken(tok.to_string())),
    }
}

impl FromStr for Move {
    type Err = TraceParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || TraceParseError::BadToken(line.to_string());
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("BD") => {
                let id = parse_circle_id(tokens.next().ok_or_else(bad)?)?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                Ok(Move::BlowDown { id })
            }
            Some("BU") => {
                let id = parse_circle_id(tokens.next().ok_or_else(bad)?)?;
                let sign = match tokens.next().and_then(|t| t.strip_prefix("e=")) {
                    Some("+1") | Some("1") => 1,
                    Some("-1") => -1,
                    _ => return Err(bad()),
                };
                let list = tokens
                    .next()
                    .and_then(|t| t.strip_prefix("targets=["))
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let targets = list
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Link>, _>>()?;
                let step = tokens.next().and_then(|t| t.strip_prefix("step=")).ok_or_else(bad)?.parse()?;
                if tokens.next().is_some() {
                    return Err(bad());
                }
                Ok(Move::BlowUp { id, sign, targets, step })
            }
            _ => Err(bad()),
        }
    }
}

/// Ordered log of moves; replaying it from the initial diagram reproduces the
/// current one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveTrace {
    pub moves: Vec<Move>,
}

impl MoveTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn replay(&self, initial: &MixedDiagram) -> Result<MixedDiagram, (usize, MoveError)> {
        self.moves
            .iter()
            .enumerate()
            .try_fold(initial.clone(), |d, (k, mv)| d.apply(mv).map_err(|e| (k, e)))
    }

    /// Every intermediate diagram, `states[k]` being the one before move `k`.
    pub fn states(&self, initial: &MixedDiagram) -> Result<Vec<MixedDiagram>, (usize, MoveError)> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(initial.clone());
        for (k, mv) in self.moves.iter().enumerate() {
            let next = out[k].apply(mv).map_err(|e| (k, e))?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn count(&self, step: Step) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::BlowUp { step: s, .. } if *s == step))
            .count()
    }

    pub fn to_text(&self) -> String {
        self.moves.iter().map(|m| format!("{m}\n")).collect()
    }

    /// One move per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, TraceParseError> {
        let mut moves = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mv = line
                .parse()
                .map_err(|e: TraceParseError| TraceParseError::BadLine { line: k + 1, reason: e.to_string() })?;
            moves.push(mv);
        }
        Ok(MoveTrace { moves })
    }
}

/// A diagram together with the moves that produced it from its initial state.
#[derive(Debug, Clone)]
pub struct Tracked {
    initial: MixedDiagram,
    current: MixedDiagram,
    trace: MoveTrace,
}

impl Tracked {
    pub fn new(initial: MixedDiagram) -> Self {
        Tracked { current: initial.clone(), initial, trace: MoveTrace::new() }
    }

    pub fn initial(&self) -> &MixedDiagram {
        &self.initial
    }

    pub fn current(&self) -> &MixedDiagram {
        &self.current
    }

    pub fn trace(&self) -> &MoveTrace {
        &self.trace
    }

    pub fn into_parts(self) -> (MixedDiagram, MixedDiagram, MoveTrace) {
        (self.initial, self.current, self.trace)
    }

    fn record(&mut self, result: Result<(MixedDiagram, Move), MoveError>) -> Result<CircleId, MoveError> {
        let (next, mv) = result?;
        let id = mv.circle();
        self.current = next;
        self.trace.push(mv);
        Ok(id)
    }

    pub fn blow_up(&mut self, targets: &[Link], sign: i32, step: Step) -> Result<CircleId, MoveError> {
        let r = self.current.blow_up(targets, sign, step);
        self.record(r)
    }

    pub fn blow_down(&mut self, id: CircleId) -> Result<CircleId, MoveError> {
        let r = self.current.blow_down(id);
        self.record(r)
    }

    pub fn cancel_next(&mut self) -> Result<CircleId, MoveError> {
        let r = self.current.cancel_next();
        self.record(r)
    }

    pub fn cancel_axis(&mut self, strand: usize) -> Result<CircleId, MoveError> {
        let r = self.current.cancel_axis(strand);
        self.record(r)
    }

    pub fn meridian_zero(&mut self, id: CircleId) -> Result<CircleId, MoveError> {
        let r = self.current.meridian_zero(id);
        self.record(r)
    }
}
