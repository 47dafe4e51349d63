//! Python bindings for `irs_core`. Matrices cross the boundary as lists of
//! rows of integer symbols.

use std::sync::Arc;

use irs_core::bounds::{self, BoundsInput};
use irs_core::collab::{self, DecodeOutcome};
use irs_core::irs::{self, ErrorMode, ReceivedWord};
use irs_core::sim::{self, Decoder, SimConfig};
use irs_core::{indep, Field, FieldElement, Matrix, RsSpec, Variant};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: irs_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(field: &Field, rows: Vec<Vec<u32>>) -> PyResult<Matrix> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|v| field.element(v)).collect::<irs_core::Result<Vec<_>>>())
        .collect::<irs_core::Result<Vec<_>>>()
        .map_err(py_err)?;
    Matrix::from_rows(&rows).map_err(py_err)
}

fn from_matrix(m: &Matrix) -> Vec<Vec<u16>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.value()).collect()).collect()
}

#[pyclass(name = "Field", module = "irs_py", frozen)]
struct PyField {
    inner: Arc<Field>,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (bits = 8, poly = 0x11d))]
    fn new(bits: u32, poly: u32) -> PyResult<Self> {
        Ok(PyField { inner: Arc::new(Field::new(bits, poly).map_err(py_err)?) })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u16> {
        Ok(self.inner.add(self.el(a)?, self.el(b)?).value())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u16> {
        Ok(self.inner.mul(self.el(a)?, self.el(b)?).value())
    }

    fn div(&self, a: u32, b: u32) -> PyResult<u16> {
        Ok(self.inner.div(self.el(a)?, self.el(b)?).map_err(py_err)?.value())
    }

    fn inv(&self, a: u32) -> PyResult<u16> {
        Ok(self.inner.inv(self.el(a)?).map_err(py_err)?.value())
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u16> {
        Ok(self.inner.pow(self.el(a)?, e).value())
    }

    fn exp(&self, i: usize) -> u16 {
        self.inner.exp(i).value()
    }

    fn log(&self, a: u32) -> PyResult<Option<usize>> {
        Ok(self.inner.log(self.el(a)?))
    }

    fn __repr__(&self) -> String {
        format!("Field(bits={}, poly={:#x})", self.inner.bits(), self.inner.primitive_poly())
    }
}

impl PyField {
    fn el(&self, v: u32) -> PyResult<FieldElement> {
        self.inner.element(v).map_err(py_err)
    }
}

/// Outcome of a decode. `word` and `support` are `None` on failure, and
/// `reason` names the failure.
#[pyclass(name = "DecodeResult", module = "irs_py", frozen, get_all)]
struct PyDecodeResult {
    success: bool,
    word: Option<Vec<Vec<u16>>>,
    support: Option<Vec<usize>>,
    f_hat: Option<usize>,
    reason: Option<String>,
}

#[pymethods]
impl PyDecodeResult {
    fn __repr__(&self) -> String {
        match &self.reason {
            None => format!("DecodeResult(success=True, f_hat={})", self.f_hat.unwrap_or(0)),
            Some(r) => format!("DecodeResult(success=False, reason={r})"),
        }
    }
}

impl From<DecodeOutcome> for PyDecodeResult {
    fn from(out: DecodeOutcome) -> Self {
        match out {
            DecodeOutcome::Success(d) => PyDecodeResult {
                success: true,
                word: Some(from_matrix(d.word.matrix())),
                support: Some(d.support),
                f_hat: Some(d.locator.f_hat),
                reason: None,
            },
            DecodeOutcome::DetectedFailure(r) => {
                PyDecodeResult { success: false, word: None, support: None, f_hat: None, reason: Some(r.name().into()) }
            }
        }
    }
}

fn parse_variant(name: &str, shorten: usize) -> PyResult<Variant> {
    match name {
        "extended" => Ok(Variant::Extended),
        "cyclic" => Ok(Variant::Cyclic),
        "shortened" => Ok(Variant::Shortened(shorten)),
        other => Err(PyValueError::new_err(format!("unknown variant `{other}`"))),
    }
}

/// A Reed-Solomon code used column-wise in an interleaved word.
#[pyclass(name = "Code", module = "irs_py", frozen)]
struct PyCode {
    spec: RsSpec,
}

#[pymethods]
impl PyCode {
    #[new]
    #[pyo3(signature = (k = 188, variant = "shortened", shorten = 51, bits = 8, poly = 0x11d))]
    fn new(k: usize, variant: &str, shorten: usize, bits: u32, poly: u32) -> PyResult<Self> {
        let field = Arc::new(Field::new(bits, poly).map_err(py_err)?);
        let spec = RsSpec::new(field, k, parse_variant(variant, shorten)?).map_err(py_err)?;
        Ok(PyCode { spec })
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.spec.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.spec.m()
    }

    #[getter]
    fn q(&self) -> usize {
        self.spec.field().size()
    }

    #[getter]
    fn t_half(&self) -> usize {
        self.spec.t_half()
    }

    fn f_max(&self, l: usize) -> usize {
        self.spec.f_max(l)
    }

    /// Encodes a `k x l` information matrix into an `n x l` word.
    fn encode(&self, info: Vec<Vec<u32>>) -> PyResult<Vec<Vec<u16>>> {
        let info = to_matrix(self.spec.field(), info)?;
        Ok(from_matrix(irs::encode_irs(&info, &self.spec).map_err(py_err)?.matrix()))
    }

    #[pyo3(signature = (received, incremental = false, check_cols = 2))]
    fn decode(&self, received: Vec<Vec<u32>>, incremental: bool, check_cols: usize) -> PyResult<PyDecodeResult> {
        let y = ReceivedWord::from_matrix(to_matrix(self.spec.field(), received)?);
        let out = if incremental {
            collab::decode_incremental(&y, &self.spec, check_cols)
        } else {
            collab::decode(&y, &self.spec)
        };
        Ok(out.map_err(py_err)?.into())
    }

    /// Column-by-column decoding up to half the minimum distance.
    fn decode_independent(&self, received: Vec<Vec<u32>>) -> PyResult<Option<Vec<Vec<u16>>>> {
        let y = ReceivedWord::from_matrix(to_matrix(self.spec.field(), received)?);
        Ok(indep::decode_word(&y, &self.spec).map_err(py_err)?.map(|w| from_matrix(w.matrix())))
    }

    /// `(fer_bound, fer_err_bound)` for depth `l` at row error probability `p`.
    fn bounds(&self, l: usize, p: f64) -> PyResult<(f64, f64)> {
        let input = BoundsInput::for_code(&self.spec, l, p).map_err(py_err)?;
        let fer = bounds::fer_bound(&input).map_err(py_err)?;
        let fe = bounds::fer_error_bound(&input).map_err(py_err)?;
        Ok((fer.value, fe.value))
    }

    /// Monte-Carlo run with Bernoulli row errors. Returns the statistics as a
    /// dict.
    #[pyo3(signature = (l, p, trials, seed = 0, workers = 0, decoder = "collab", check_cols = None))]
    #[allow(clippy::too_many_arguments)]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        l: usize,
        p: f64,
        trials: u64,
        seed: u64,
        workers: usize,
        decoder: &str,
        check_cols: Option<usize>,
    ) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let mut config = SimConfig::new(self.spec.clone(), l, ErrorMode::BernoulliRows(p), trials, seed);
        config.workers = workers;
        config.decoder = match (decoder, check_cols) {
            ("collab", None) => Decoder::Collaborative,
            ("collab", Some(c)) => Decoder::Incremental(c),
            ("indep", _) => Decoder::IndependentColumns,
            (other, _) => return Err(PyValueError::new_err(format!("unknown decoder `{other}`"))),
        };
        let stats = py.detach(|| sim::run(&config)).map_err(py_err)?;
        let (lo, hi) = stats.non_success_ci();
        let d = pyo3::types::PyDict::new(py);
        d.set_item("trials", stats.trials)?;
        d.set_item("successes", stats.successes)?;
        d.set_item("detected_failures", stats.detected_failures())?;
        d.set_item("column_failures", stats.column_failures)?;
        d.set_item("miscorrections", stats.miscorrections)?;
        d.set_item("fer", stats.non_success_rate())?;
        d.set_item("ci", (lo, hi))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(n={}, k={}, variant={}, q={})",
            self.spec.n(),
            self.spec.k(),
            self.spec.variant().name(),
            self.q()
        )
    }
}

#[pymodule]
fn irs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyDecodeResult>()?;
    Ok(())
}
