use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use lensbook::braid::parse_syllables_for;
use lensbook::matrix::IntMatrix;
use lensbook::verify::{audit_json, certified_h1};
use lensbook::{
    audit, extract, initial_diagram, render_svg, round_trip, MoveTrace, OpenBook, OpenBookJson, PipelineError,
    PipelineRun,
};

create_exception!(lensbook, LensbookError, PyException);
create_exception!(lensbook, HypothesisViolated, LensbookError);
create_exception!(lensbook, BraidParseError, LensbookError);
create_exception!(lensbook, KirbyMoveError, LensbookError);
create_exception!(lensbook, ExtractError, LensbookError);

fn pipeline_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::HypothesisViolated { .. } => HypothesisViolated::new_err(e.to_string()),
        PipelineError::Move { .. } => KirbyMoveError::new_err(e.to_string()),
        e => LensbookError::new_err(e.to_string()),
    }
}

/// A pure braid word on `2n` strands together with the surgery coefficient.
#[pyclass(frozen, skip_from_py_object, name = "PlatInput")]
#[derive(Clone)]
struct PyPlatInput(lensbook::PlatInput);

#[pymethods]
impl PyPlatInput {
    #[new]
    #[pyo3(signature = (n, p, word = ""))]
    fn new(n: usize, p: u32, word: &str) -> PyResult<Self> {
        let w = parse_syllables_for(n, word).map_err(|e| BraidParseError::new_err(e.to_string()))?;
        Ok(PyPlatInput(lensbook::PlatInput::new(w, p)))
    }

    /// Parses the `n=<int> p=<int> <syllables>` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        lensbook::PlatInput::parse(text)
            .map(PyPlatInput)
            .map_err(|e| BraidParseError::new_err(e.to_string()))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p
    }

    #[getter]
    fn word(&self) -> String {
        self.0.word.render_syllables()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PlatInput({:?})", self.0.to_string())
    }
}

/// Result of running the move program on one input.
#[pyclass(frozen, name = "OpenBookRun")]
struct PyRun {
    run: PipelineRun,
    book: OpenBook,
}

#[pymethods]
impl PyRun {
    #[getter]
    fn input(&self) -> PyPlatInput {
        PyPlatInput(self.run.input.clone())
    }

    fn to_json(&self) -> String {
        self.book.to_json()
    }

    fn to_svg(&self) -> String {
        render_svg(&self.book, &self.run.trace)
    }

    fn trace_text(&self) -> String {
        self.run.trace.to_text()
    }

    #[getter]
    fn punctures(&self) -> Vec<String> {
        self.book.page.punctures.iter().map(ToString::to_string).collect()
    }

    /// `(curve, sign)` for each twist, in monodromy order.
    #[getter]
    fn monodromy(&self) -> Vec<(Vec<String>, i32)> {
        self.book
            .monodromy
            .iter()
            .map(|t| (t.curve.iter().map(ToString::to_string).collect(), t.sign))
            .collect()
    }

    #[getter]
    fn euler_characteristic(&self) -> i64 {
        lensbook::euler_characteristic(&self.book)
    }

    /// Framing of `U` after each named stage.
    fn stage_framings(&self) -> Vec<(String, i64)> {
        self.run.stages.iter().map(|m| (m.stage.to_string(), m.framing_u)).collect()
    }

    /// Cyclic orders of `H_1` of the endpoint, `0` for a free factor.
    fn h1(&self) -> PyResult<Vec<i128>> {
        certified_h1(&self.run.endpoint).map_err(LensbookError::new_err)
    }

    /// Names of failed checks; empty when the run verifies.
    fn verify(&self) -> Vec<String> {
        let mut out: Vec<String> = audit(&self.book, &self.run.endpoint).failures().map(|c| c.name.to_string()).collect();
        if !round_trip(&self.run.initial, &self.run.endpoint, &self.run.trace).ok() {
            out.push("round-trip".into());
        }
        out
    }
}

#[pyfunction]
fn run(input: &PyPlatInput) -> PyResult<PyRun> {
    let r = lensbook::run(&input.0).map_err(pipeline_err)?;
    let book = extract(&r.endpoint, &r.trace).map_err(|e| ExtractError::new_err(e.to_string()))?;
    Ok(PyRun { run: r, book })
}

/// Replays a serialised trace from the input and returns the names of
/// failed checks, including any against `json` when given.
#[pyfunction]
#[pyo3(signature = (input, trace, json = None))]
fn verify_trace(input: &PyPlatInput, trace: &str, json: Option<&str>) -> PyResult<Vec<String>> {
    let trace = MoveTrace::parse(trace).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let initial = initial_diagram(&input.0);
    let endpoint = match trace.replay(&initial) {
        Ok(d) => d,
        Err((at, e)) => return Ok(vec![format!("replay at move {at}: {e}")]),
    };
    let mut out: Vec<String> = match extract(&endpoint, &trace) {
        Ok(b) => audit(&b, &endpoint).failures().map(|c| c.name.to_string()).collect(),
        Err(e) => vec![format!("extract: {e}")],
    };
    if !round_trip(&initial, &endpoint, &trace).ok() {
        out.push("round-trip".into());
    }
    if let Some(text) = json {
        let given = OpenBookJson::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        out.extend(audit_json(&given, &endpoint).failures().map(|c| format!("json {}", c.name)));
    }
    Ok(out)
}

type Matrix = Vec<Vec<i128>>;

/// Invariant factors with unimodular `left`, `right` such that
/// `left * m * right` is diagonal.
#[pyfunction]
fn smith_normal_form(rows: Matrix) -> PyResult<(Vec<i128>, Matrix, Matrix)> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    let m = IntMatrix::from_rows(&rows);
    let snf = lensbook::smith_normal_form(&m).map_err(|e| LensbookError::new_err(e.to_string()))?;
    Ok((snf.factors, snf.left.to_rows(), snf.right.to_rows()))
}

#[pymodule]
#[pyo3(name = "lensbook")]
fn lensbook_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlatInput>()?;
    m.add_class::<PyRun>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify_trace, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    let py = m.py();
    m.add("LensbookError", py.get_type::<LensbookError>())?;
    m.add("HypothesisViolated", py.get_type::<HypothesisViolated>())?;
    m.add("BraidParseError", py.get_type::<BraidParseError>())?;
    m.add("KirbyMoveError", py.get_type::<KirbyMoveError>())?;
    m.add("ExtractError", py.get_type::<ExtractError>())?;
    Ok(())
}
