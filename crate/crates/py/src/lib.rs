//! Python bindings. Exact amplitudes cross the boundary as
//! `fractions.Fraction`; λ is passed as a `"p/q"` string.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use inbl_core::amplitude::format_rational;
use inbl_core::analysis::{self, ExperimentReport, RangeMode};
use inbl_core::rtw::StreamId;
use inbl_core::signal::{ProductWave, SuperpositionWave, Waveform};
use inbl_core::{Lambda, Rational, Symbolic};

fn err(e: inbl_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lambda(text: &str) -> PyResult<Lambda> {
    text.parse().map_err(err)
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    rs.iter().map(|r| fraction(py, r)).collect()
}

fn json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn report<'py>(py: Python<'py>, r: inbl_core::Result<ExperimentReport>) -> PyResult<Bound<'py, PyAny>> {
    json(py, &r.map_err(err)?.to_json())
}

fn stream_id(bit: usize, level: &str) -> PyResult<StreamId> {
    match level {
        "H" => Ok(StreamId::high(bit)),
        "L" => Ok(StreamId::low(bit)),
        _ => Err(PyValueError::new_err(format!("level must be 'H' or 'L', got {level:?}"))),
    }
}

/// Seeded reference noise: one `A_r`/`B_r` pair per noise-bit.
#[pyclass(name = "ReferenceSystem", module = "inbl", frozen)]
struct PyReferenceSystem(inbl_core::ReferenceSystem);

#[pymethods]
impl PyReferenceSystem {
    #[new]
    #[pyo3(signature = (seed, bits, periods, lam = "1/2"))]
    fn new(seed: u64, bits: usize, periods: u64, lam: &str) -> PyResult<Self> {
        inbl_core::build_reference_system(seed, bits, periods, lambda(lam)?).map(Self).map_err(err)
    }

    #[getter]
    fn num_bits(&self) -> usize {
        self.0.num_bits()
    }

    #[getter]
    fn num_periods(&self) -> u64 {
        self.0.grid().num_periods()
    }

    #[getter]
    fn total_ticks(&self) -> u64 {
        self.0.grid().total_ticks()
    }

    #[getter]
    fn lam(&self) -> String {
        self.0.lambda().to_string()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.master_seed()
    }

    /// `(a, b)` sign lists for one clock period.
    fn period_signs(&self, period: u64) -> PyResult<(Vec<i8>, Vec<i8>)> {
        self.0.grid().check_tick(self.0.grid().readout_tick(period)).map_err(err)?;
        let s = self.0.period_signs(period);
        Ok((s.a().iter().map(|x| x.as_i8()).collect(), s.b().iter().map(|x| x.as_i8()).collect()))
    }

    /// Value of `H_r` or `L_r` at a sub-clock tick.
    #[pyo3(signature = (bit, level, tick, shifted = false))]
    fn logical_value<'py>(
        &self,
        py: Python<'py>,
        bit: usize,
        level: &str,
        tick: u64,
        shifted: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let v = self.0.logical_value(stream_id(bit, level)?, tick, shifted).map_err(err)?;
        fraction(py, &v)
    }

    fn __repr__(&self) -> String {
        format!(
            "ReferenceSystem(seed={}, bits={}, periods={}, lam='{}')",
            self.0.master_seed(),
            self.0.num_bits(),
            self.0.grid().num_periods(),
            self.0.lambda()
        )
    }
}

/// One N-bit product of reference values, written as H/L letters.
#[pyclass(name = "ProductString", module = "inbl", frozen, skip_from_py_object, eq, ord, hash)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyProductString(inbl_core::ProductString);

#[pymethods]
impl PyProductString {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    /// 1-based enumeration index (`LL..L` is 1).
    #[staticmethod]
    fn from_index(bits: usize, index: u64) -> PyResult<Self> {
        inbl_core::ProductString::from_index(bits, index).map(Self).map_err(err)
    }

    #[getter]
    fn num_bits(&self) -> usize {
        self.0.num_bits()
    }

    #[getter]
    fn index(&self) -> u64 {
        self.0.index()
    }

    #[getter]
    fn code(&self) -> u64 {
        self.0.code()
    }

    fn level(&self, bit: usize) -> PyResult<String> {
        self.0.check_bit(bit).map_err(err)?;
        Ok(self.0.level(bit).letter().to_string())
    }

    fn flipped(&self, bit: usize) -> PyResult<Self> {
        self.0.check_bit(bit).map_err(err)?;
        Ok(Self(self.0.flipped(bit)))
    }

    /// Exact readouts of this product's waveform, one per period.
    #[pyo3(signature = (refs, shifted = false))]
    fn readouts<'py>(
        &self,
        py: Python<'py>,
        refs: &PyReferenceSystem,
        shifted: bool,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let w = ProductWave::new(&refs.0, self.0, shifted).map_err(err)?;
        fractions(py, &w.readouts())
    }

    /// Sampled waveform as CSV (`tick,period,scp,amplitude`).
    #[pyo3(signature = (refs, shifted = false))]
    fn trace_csv(&self, refs: &PyReferenceSystem, shifted: bool) -> PyResult<String> {
        Ok(inbl_core::trace_product(&refs.0, &self.0, shifted).map_err(err)?.to_csv())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ProductString('{}')", self.0)
    }
}

/// Expanded superposition: product-string to exact coefficient.
#[pyclass(name = "Superposition", module = "inbl", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PySuperposition(inbl_core::Superposition);

#[pymethods]
impl PySuperposition {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        inbl_core::Superposition::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn num_bits(&self) -> usize {
        self.0.num_bits()
    }

    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(String, Bound<'py, PyAny>)>> {
        self.0.terms().map(|(s, c)| Ok((s.to_string(), fraction(py, c)?))).collect()
    }

    fn coefficient<'py>(&self, py: Python<'py>, string: &str) -> PyResult<Bound<'py, PyAny>> {
        let s: inbl_core::ProductString = string.parse().map_err(err)?;
        fraction(py, &self.0.coefficient(&s))
    }

    #[pyo3(signature = (bit, lam = "1/2"))]
    fn apply_not(&self, bit: usize, lam: &str) -> PyResult<Self> {
        self.0.apply_not(bit, &lambda(lam)?).map(Self).map_err(err)
    }

    /// Exact value at one period of `refs`.
    fn evaluate<'py>(&self, py: Python<'py>, refs: &PyReferenceSystem, period: u64) -> PyResult<Bound<'py, PyAny>> {
        refs.0.grid().check_tick(refs.0.grid().readout_tick(period)).map_err(err)?;
        let v = self.0.evaluate(&refs.0.period_signs(period), refs.0.lambda()).map_err(err)?;
        fraction(py, &v)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Superposition(bits={}, terms={})", self.0.num_bits(), self.0.len())
    }
}

/// Per-bit `(c_H, c_L)` factored superposition.
#[pyclass(name = "FactoredSuperposition", module = "inbl", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyFactoredSuperposition(inbl_core::FactoredSuperposition);

#[pymethods]
impl PyFactoredSuperposition {
    /// Product of `(H_r + L_r)` over all bits.
    #[staticmethod]
    fn uniform(bits: usize) -> PyResult<Self> {
        inbl_core::uniform_superposition(bits).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_product(string: &PyProductString) -> Self {
        Self(inbl_core::FactoredSuperposition::from_product(&string.0))
    }

    #[getter]
    fn num_bits(&self) -> usize {
        self.0.num_bits()
    }

    fn pairs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.0
            .high()
            .iter()
            .zip(self.0.low())
            .map(|(h, l)| PyTuple::new(py, [fraction(py, h)?, fraction(py, l)?]))
            .collect()
    }

    #[pyo3(signature = (bit, lam = "1/2"))]
    fn apply_not(&self, bit: usize, lam: &str) -> PyResult<Self> {
        self.0.apply_not(bit, &lambda(lam)?).map(Self).map_err(err)
    }

    fn expand(&self) -> PyResult<PySuperposition> {
        self.0.expand().map(PySuperposition).map_err(err)
    }

    fn evaluate<'py>(&self, py: Python<'py>, refs: &PyReferenceSystem, period: u64) -> PyResult<Bound<'py, PyAny>> {
        refs.0.grid().check_tick(refs.0.grid().readout_tick(period)).map_err(err)?;
        let v = self.0.evaluate(&refs.0.period_signs(period), refs.0.lambda()).map_err(err)?;
        fraction(py, &v)
    }

    #[pyo3(signature = (refs, shifted = false))]
    fn readouts<'py>(
        &self,
        py: Python<'py>,
        refs: &PyReferenceSystem,
        shifted: bool,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let w = SuperpositionWave::new(&refs.0, &self.0, shifted).map_err(err)?;
        fractions(py, &w.readouts())
    }

    fn __repr__(&self) -> String {
        format!("FactoredSuperposition(bits={})", self.0.num_bits())
    }
}

/// Identifies `hidden` from its time-shifted waveform over `max_periods`
/// periods. `refs` must hold at least `max_periods + 1` periods.
#[pyfunction]
fn tsinbl_identify<'py>(
    py: Python<'py>,
    refs: &PyReferenceSystem,
    hidden: &PyProductString,
    max_periods: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let w = ProductWave::new(&refs.0, hidden.0, true).map_err(err)?;
    let r = inbl_core::tsinbl_identify(&w, &refs.0, max_periods).map_err(err)?;
    json(py, &r.to_json())
}

/// Baseline scan; returns `(string, tests_performed, periods_per_test)`.
#[pyfunction]
fn baseline_search(refs: &PyReferenceSystem, hidden: &PyProductString, epsilon: f64) -> PyResult<(String, u64, u64)> {
    let w = ProductWave::new(&refs.0, hidden.0, false).map_err(err)?;
    let o = inbl_core::baseline_search(&w, &refs.0, epsilon).map_err(err)?;
    Ok((o.string.to_string(), o.tests_performed, o.periods_per_test))
}

#[pyfunction]
fn error_bound<'py>(py: Python<'py>, bits: usize, max_periods: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &inbl_core::error_bound(bits, max_periods).map_err(err)?)
}

#[pyfunction]
fn required_periods(bits: usize, epsilon: f64) -> PyResult<u64> {
    inbl_core::required_periods(bits, epsilon).map_err(err)
}

#[pyfunction]
fn baseline_periods(epsilon: f64) -> PyResult<u64> {
    inbl_core::baseline_periods(epsilon).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (bits, lam = "1/2"))]
fn resolution_bits(bits: usize, lam: &str) -> PyResult<u64> {
    analysis::resolution_bits(bits, &lambda(lam)?).map_err(err)
}

#[pyfunction]
fn zero_probability<'py>(py: Python<'py>, bits: usize, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, analysis::zero_probability_experiment(bits, trials, seed))
}

/// Exhaustive when `trials` is `None`.
#[pyfunction]
#[pyo3(signature = (bits, lam = "1/2", trials = None, seed = 0))]
fn amplitude_range<'py>(
    py: Python<'py>,
    bits: usize,
    lam: &str,
    trials: Option<u64>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = match trials {
        None => RangeMode::Exhaustive,
        Some(trials) => RangeMode::MonteCarlo { trials, seed },
    };
    report(py, analysis::amplitude_range_experiment(bits, &lambda(lam)?, mode))
}

#[pyfunction]
#[pyo3(signature = (bits, epsilon, trials, seed, baseline = false))]
fn identification<'py>(
    py: Python<'py>,
    bits: usize,
    epsilon: f64,
    trials: u64,
    seed: u64,
    baseline: bool,
) -> PyResult<Bound<'py, PyAny>> {
    report(py, analysis::identification_experiment(bits, epsilon, trials, seed, baseline))
}

#[pyfunction]
#[pyo3(signature = (bits, target, lam = "1/2", periods = 1000, seed = 0))]
fn not_gate_demo<'py>(
    py: Python<'py>,
    bits: usize,
    target: usize,
    lam: &str,
    periods: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    report(py, analysis::not_gate_demo(bits, &lambda(lam)?, target, periods, seed))
}

#[pymodule]
fn inbl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReferenceSystem>()?;
    m.add_class::<PyProductString>()?;
    m.add_class::<PySuperposition>()?;
    m.add_class::<PyFactoredSuperposition>()?;
    m.add_function(wrap_pyfunction!(tsinbl_identify, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_search, m)?)?;
    m.add_function(wrap_pyfunction!(error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(required_periods, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_periods, m)?)?;
    m.add_function(wrap_pyfunction!(resolution_bits, m)?)?;
    m.add_function(wrap_pyfunction!(zero_probability, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_range, m)?)?;
    m.add_function(wrap_pyfunction!(identification, m)?)?;
    m.add_function(wrap_pyfunction!(not_gate_demo, m)?)?;
    Ok(())
}
