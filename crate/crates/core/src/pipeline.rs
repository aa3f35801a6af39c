//! Move programs taking `K ∪ U` to a diagram whose circles are all framed
//! `0` or `-1`.
//!
//! For `S^1 x S^2` (`p = 0`) `U` is first unlinked from every strand but the
//! first, then bumped back to framing `0` by `+1` circles that are each
//! neutralised by a meridian. For `L(p,1)` with `p > 2n-2` the order is:
//! `2n-2` ladder bumps of `U`, meridians on them, `p-2n+1` raise bumps of `U`
//! to framing `-1`, meridians on those. In both cases `K` is then unknotted
//! by cancelling its syllables and neutralising any `+1` circle left behind.

use thiserror::Error;

use crate::braid::PlatInput;
use crate::kirby::{initial_diagram, CircleId, Component, Link, MixedDiagram, MoveError, MoveTrace, Step, Target, Tracked};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(
        "L({p},1) with a {strands}-plat needs p > 2n-2 = {bound}; otherwise U must be bumped with -1 circles \
         whose neutralising +1 circles contribute negative Dehn twists to the monodromy"
    )]
    HypothesisViolated { n: usize, p: u32, strands: usize, bound: usize },
    #[error("the S^1 x S^2 program needs p = 0, got p = {0}")]
    NotSphereProduct(u32),
    #[error("endpoint check failed: {0}")]
    PipelineInvariantViolated(String),
    #[error("move failed during {stage}: {source}")]
    Move {
        stage: Stage,
        #[source]
        source: MoveError,
    },
}

/// Named phases of a move program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Unlink `U` from all strands but one (`p = 0`).
    Unlink,
    /// Return `U` to framing `0` (`p = 0`).
    Restore,
    Ladder,
    LadderMeridians,
    Raise,
    RaiseMeridians,
    Unknot,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Unlink => "unlink",
            Stage::Restore => "restore",
            Stage::Ladder => "ladder",
            Stage::LadderMeridians => "ladder-meridians",
            Stage::Raise => "raise",
            Stage::RaiseMeridians => "raise-meridians",
            Stage::Unknot => "unknot",
        };
        f.write_str(s)
    }
}

/// Where a stage ended in the trace and what `U`'s framing was there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageMark {
    pub stage: Stage,
    pub end: usize,
    pub framing_u: i64,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub input: PlatInput,
    pub initial: MixedDiagram,
    pub endpoint: MixedDiagram,
    pub trace: MoveTrace,
    pub stages: Vec<StageMark>,
}

impl PipelineRun {
    pub fn framing_after(&self, stage: Stage) -> Option<i64> {
        self.stages.iter().find(|m| m.stage == stage).map(|m| m.framing_u)
    }
}

struct Program {
    tracked: Tracked,
    stages: Vec<StageMark>,
}

impl Program {
    fn new(input: &PlatInput) -> Self {
        Program { tracked: Tracked::new(initial_diagram(input)), stages: Vec::new() }
    }

    fn mark(&mut self, stage: Stage) {
        self.stages.push(StageMark {
            stage,
            end: self.tracked.trace().len(),
            framing_u: self.tracked.current().surgery().framing,
        });
    }

    fn step<T>(&mut self, stage: Stage, f: impl FnOnce(&mut Tracked) -> Result<T, MoveError>) -> Result<T, PipelineError> {
        f(&mut self.tracked).map_err(|source| PipelineError::Move { stage, source })
    }

    fn bump_u(&mut self, stage: Stage, extra: Option<usize>, sign: i32, step: Step) -> Result<CircleId, PipelineError> {
        let mut targets = vec![Link::pos(Target::Surgery)];
        targets.extend(extra.map(|s| Link::pos(Target::Strand(s))));
        self.step(stage, |t| t.blow_up(&targets, sign, step))
    }

    fn unknot(&mut self) -> Result<(), PipelineError> {
        self.step(Stage::Unknot, unknot_k_tracked)?;
        self.mark(Stage::Unknot);
        Ok(())
    }

    fn finish(self, input: &PlatInput, expected_u: i64) -> Result<PipelineRun, PipelineError> {
        let (initial, endpoint, trace) = self.tracked.into_parts();
        check_endpoint(&endpoint, expected_u)?;
        Ok(PipelineRun { input: input.clone(), initial, endpoint, trace, stages: self.stages })
    }
}

/// Cancels every pending syllable of `K`, then gives each `+1` circle this
/// produced a `-1` meridian. Returns the ids of the cancelling circles.
pub fn unknot_k_tracked(t: &mut Tracked) -> Result<Vec<CircleId>, MoveError> {
    let mut cancelled = Vec::with_capacity(t.current().pending().len());
    while !t.current().pending().is_empty() {
        cancelled.push(t.cancel_next()?);
    }
    for &id in &cancelled {
        if t.current().circle(id).map(|c| c.framing) == Some(1) {
            t.meridian_zero(id)?;
        }
    }
    Ok(cancelled)
}

/// Unknots `K` in `d`; the returned trace holds only the new moves.
pub fn unknot_k(d: &MixedDiagram) -> Result<(MixedDiagram, MoveTrace), MoveError> {
    let mut t = Tracked::new(d.clone());
    unknot_k_tracked(&mut t)?;
    let (_, end, trace) = t.into_parts();
    Ok((end, trace))
}

fn check_endpoint(d: &MixedDiagram, expected_u: i64) -> Result<(), PipelineError> {
    let fail = |msg: String| Err(PipelineError::PipelineInvariantViolated(msg));
    if d.surgery().framing != expected_u {
        return fail(format!("U has framing {}, expected {expected_u}", d.surgery().framing));
    }
    if let Some(c) = d.circles().iter().find(|c| c.framing != 0 && c.framing != -1) {
        return fail(format!("c{} has framing {}", c.id, c.framing));
    }
    if !d.pending().is_empty() {
        return fail(format!("{} syllables of K left", d.pending().len()));
    }
    Ok(())
}

/// `S^1 x S^2`: ends with `U` framed `0` and linking `K` once.
pub fn sphere_product(input: &PlatInput) -> Result<PipelineRun, PipelineError> {
    if input.p != 0 {
        return Err(PipelineError::NotSphereProduct(input.p));
    }
    let strands = 2 * input.n();
    let mut prog = Program::new(input);
    for s in 2..=strands {
        prog.step(Stage::Unlink, |t| t.cancel_axis(s))?;
    }
    prog.mark(Stage::Unlink);
    // U now sits at -(2n-1); each restore circle also links K so that it
    // punctures the knot's disk once it is a binding
    for s in 2..=strands {
        let id = prog.bump_u(Stage::Restore, Some(s), 1, Step::Restore)?;
        prog.step(Stage::Restore, |t| t.meridian_zero(id))?;
    }
    prog.mark(Stage::Restore);
    prog.unknot()?;
    let run = prog.finish(input, 0)?;
    let linking = run.endpoint.knot_linking(Component::Surgery);
    if linking != 1 {
        return Err(PipelineError::PipelineInvariantViolated(format!("U links K {linking} times")));
    }
    if let Some(c) = run.endpoint.circles().iter().find(|c| c.framing == 0 && !c.links_knot()) {
        return Err(PipelineError::PipelineInvariantViolated(format!("0-framed c{} misses the knot's disk", c.id)));
    }
    Ok(run)
}

/// `L(p,1)` for `p > 2n-2`: ends with `U` framed `-1`.
pub fn lens_space(input: &PlatInput) -> Result<PipelineRun, PipelineError> {
    let n = input.n();
    let bound = 2 * n - 2;
    if input.p as usize <= bound {
        return Err(PipelineError::HypothesisViolated { n, p: input.p, strands: 2 * n, bound });
    }
    let mut prog = Program::new(input);

    let mut ladder = Vec::with_capacity(bound);
    for s in 2..2 * n {
        ladder.push(prog.bump_u(Stage::Ladder, Some(s), 1, Step::Ladder)?);
    }
    prog.mark(Stage::Ladder);
    for &id in &ladder {
        prog.step(Stage::LadderMeridians, |t| t.meridian_zero(id))?;
    }
    prog.mark(Stage::LadderMeridians);

    let raises = input.p as usize - bound - 1;
    let mut raised = Vec::with_capacity(raises);
    for _ in 0..raises {
        raised.push(prog.bump_u(Stage::Raise, None, 1, Step::Raise)?);
    }
    prog.mark(Stage::Raise);
    for &id in &raised {
        prog.step(Stage::RaiseMeridians, |t| t.meridian_zero(id))?;
    }
    prog.mark(Stage::RaiseMeridians);

    prog.unknot()?;
    prog.finish(input, -1)
}

/// Dispatches on `p`.
pub fn run(input: &PlatInput) -> Result<PipelineRun, PipelineError> {
    if input.p == 0 {
        sphere_product(input)
    } else {
        lens_space(input)
    }
}
