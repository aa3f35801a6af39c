//! Compiles knots in `L(p,1)` and `S^1 x S^2`, given as shifted plats of
//! pure braids, into planar open books with positive monodromy carrying the
//! knot on a page.
//!
//! The flow is [`braid`] input → [`kirby`] diagram → [`pipeline`] move
//! program → [`openbook`] extraction, with [`verify`] holding the checks that
//! can falsify each step.

pub mod braid;
pub mod corpus;
pub mod kirby;
pub mod matrix;
pub mod openbook;
pub mod pipeline;
pub mod svg;
pub mod verify;

pub use braid::{parse_word, u_decomposition, ParseError, PlatInput, PureBraidWord, Syllable};
pub use kirby::{initial_diagram, Component, LinkingMatrix, MixedDiagram, Move, MoveError, MoveTrace, Step, Target};
pub use openbook::{euler_characteristic, extract, ExtractError, OpenBook, OpenBookJson};
pub use pipeline::{lens_space, run, sphere_product, unknot_k, PipelineError, PipelineRun, Stage};
pub use svg::render_svg;
pub use verify::{audit, h1, round_trip, smith_normal_form, AuditReport, RoundTripReport, SnfResult};
