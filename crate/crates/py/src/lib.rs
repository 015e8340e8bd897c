//! Python bindings. Sequences are accepted wherever the library takes a
//! slice; measures may be given as a `WeightMeasure` or a spec string such as
//! `"gauss:var=0.5"`.

use dcorr_core as core;
use dcorr_core::{ArModel, Envelope, LagCurve, WeightMeasure};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(dcorr, DcorrError, PyValueError, "Error raised by the dcorr library.");

fn err(e: core::Error) -> PyErr {
    DcorrError::new_err(e.to_string())
}

#[pyclass(name = "WeightMeasure", module = "dcorr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyWeightMeasure(WeightMeasure);

#[pymethods]
impl PyWeightMeasure {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (alpha = 1.0))]
    fn szekely(alpha: f64) -> PyResult<Self> {
        WeightMeasure::szekely(alpha).map(Self).map_err(err)
    }

    #[staticmethod]
    fn gaussian(variance: f64) -> PyResult<Self> {
        WeightMeasure::gaussian(variance).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (beta, scale = 1.0))]
    fn stable(beta: f64, scale: f64) -> PyResult<Self> {
        WeightMeasure::stable(beta, scale).map(Self).map_err(err)
    }

    fn kernel(&self, x: f64) -> f64 {
        self.0.kernel(x)
    }

    fn admissibility<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let a = self.0.admissibility();
        let d = PyDict::new(py);
        d.set_item("satisfies_lemma1", a.satisfies_lemma1)?;
        d.set_item("satisfies_int_res", a.satisfies_int_res)?;
        d.set_item("required_moment", a.required_moment)?;
        Ok(d)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("WeightMeasure('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[derive(FromPyObject)]
enum MeasureArg<'py> {
    Measure(PyRef<'py, PyWeightMeasure>),
    Spec(String),
}

impl MeasureArg<'_> {
    fn resolve(&self) -> PyResult<WeightMeasure> {
        match self {
            MeasureArg::Measure(m) => Ok(m.0),
            MeasureArg::Spec(s) => s.parse().map_err(err),
        }
    }
}

#[pyclass(name = "LagCurve", module = "dcorr", frozen, skip_from_py_object)]
struct PyLagCurve(LagCurve);

#[pymethods]
impl PyLagCurve {
    #[getter]
    fn lags(&self) -> Vec<i64> {
        self.0.lags.clone()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values.clone()
    }

    #[getter]
    fn statistic(&self) -> String {
        format!("{:?}", self.0.statistic)
    }

    fn value_at(&self, lag: i64) -> Option<f64> {
        self.0.value_at(lag)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("LagCurve({:?}, lags={:?})", self.0.statistic, self.0.lags)
    }
}

#[pyclass(name = "ArModel", module = "dcorr", frozen, skip_from_py_object)]
struct PyArModel(ArModel);

#[pymethods]
impl PyArModel {
    #[getter]
    fn p(&self) -> usize {
        self.0.p
    }

    #[getter]
    fn phi(&self) -> Vec<f64> {
        self.0.phi.clone()
    }

    #[getter]
    fn noise_variance(&self) -> f64 {
        self.0.noise_variance
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn method(&self) -> String {
        format!("{:?}", self.0.method)
    }

    #[getter]
    fn residuals(&self) -> Vec<f64> {
        self.0.residuals.clone()
    }

    fn is_causal(&self) -> bool {
        self.0.is_causal()
    }

    fn __repr__(&self) -> String {
        format!("ArModel(p={}, phi={:?}, noise_variance={})", self.0.p, self.0.phi, self.0.noise_variance)
    }
}

#[pyclass(name = "Envelope", module = "dcorr", frozen, skip_from_py_object)]
struct PyEnvelope(Envelope);

#[pymethods]
impl PyEnvelope {
    #[getter]
    fn lags(&self) -> Vec<i64> {
        self.0.lags.clone()
    }

    #[getter]
    fn levels(&self) -> Vec<f64> {
        self.0.levels.clone()
    }

    #[getter]
    fn quantiles(&self) -> Vec<Vec<f64>> {
        self.0.quantiles.clone()
    }

    #[getter]
    fn method(&self) -> String {
        format!("{:?}", self.0.method)
    }

    #[getter]
    fn replicates(&self) -> usize {
        self.0.replicates
    }

    #[getter]
    fn discarded(&self) -> usize {
        self.0.discarded
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    fn quantile(&self, level: f64) -> Option<Vec<f64>> {
        self.0.quantile(level).map(<[f64]>::to_vec)
    }

    fn exceedances(&self, observed: &PyLagCurve, level: f64) -> Vec<i64> {
        self.0.exceedances(&observed.0, level)
    }

    fn __repr__(&self) -> String {
        format!("Envelope({:?}, levels={:?}, replicates={})", self.0.method, self.0.levels, self.0.replicates)
    }
}

#[pyfunction]
fn dcov_v(py: Python<'_>, x: Vec<f64>, y: Vec<f64>, measure: MeasureArg) -> PyResult<f64> {
    let m = measure.resolve()?;
    py.detach(|| core::dcov_v(&x, &y, &m)).map_err(err)
}

#[pyfunction]
fn dcor(py: Python<'_>, x: Vec<f64>, y: Vec<f64>, measure: MeasureArg) -> PyResult<f64> {
    let m = measure.resolve()?;
    py.detach(|| core::dcor(&x, &y, &m)).map_err(err)
}

#[pyfunction]
fn adcv(py: Python<'_>, x: Vec<f64>, max_lag: usize, measure: MeasureArg) -> PyResult<PyLagCurve> {
    let m = measure.resolve()?;
    py.detach(|| core::adcv(&x, max_lag, &m)).map(PyLagCurve).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, max_lag, measure, scaled = false))]
fn adcf(
    py: Python<'_>,
    x: Vec<f64>,
    max_lag: usize,
    measure: MeasureArg,
    scaled: bool,
) -> PyResult<PyLagCurve> {
    let m = measure.resolve()?;
    py.detach(|| core::adcf(&x, max_lag, &m, scaled)).map(PyLagCurve).map_err(err)
}

#[pyfunction]
fn cdcf(
    py: Python<'_>,
    x: Vec<f64>,
    y: Vec<f64>,
    lags: Vec<i64>,
    measure: MeasureArg,
) -> PyResult<PyLagCurve> {
    let m = measure.resolve()?;
    py.detach(|| core::cdcf(&x, &y, &lags, &m)).map(PyLagCurve).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, max_lag, transform = "identity"))]
fn acf(x: Vec<f64>, max_lag: usize, transform: &str) -> PyResult<PyLagCurve> {
    let t: core::Transform = transform.parse().map_err(err)?;
    core::acf(&x, max_lag, t).map(PyLagCurve).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, p, method = "ls"))]
fn fit_ar(x: Vec<f64>, p: usize, method: &str) -> PyResult<PyArModel> {
    let method: core::FitMethod = method.parse().map_err(err)?;
    core::fit_ar(&x, p, method).map(PyArModel).map_err(err)
}

#[pyfunction]
fn select_order_aicc(x: Vec<f64>, p_max: usize) -> PyResult<usize> {
    core::select_order_aicc(&x, p_max).map_err(err)
}

#[pyfunction]
fn residuals(model: &PyArModel, x: Vec<f64>) -> PyResult<Vec<f64>> {
    core::residuals(&model.0, &x).map_err(err)
}

#[pyfunction]
fn is_causal(phi: Vec<f64>) -> bool {
    core::is_causal(&phi)
}

#[pyfunction]
#[pyo3(signature = (phi, n, noise = "gauss", burn_in = None, seed = 0))]
fn simulate_ar(
    phi: Vec<f64>,
    n: usize,
    noise: &str,
    burn_in: Option<usize>,
    seed: u64,
) -> PyResult<Vec<f64>> {
    let gen: core::NoiseGen = noise.parse().map_err(err)?;
    core::simulate_ar(&phi, &gen, n, burn_in, seed).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (noise, n, seed = 0))]
fn draw_noise(noise: &str, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    let gen: core::NoiseGen = noise.parse().map_err(err)?;
    gen.draw(n, seed).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, max_lag, measure, b = 1000, levels = vec![0.05, 0.5, 0.95], seed = 0))]
fn permutation_envelope(
    py: Python<'_>,
    x: Vec<f64>,
    max_lag: usize,
    measure: MeasureArg,
    b: usize,
    levels: Vec<f64>,
    seed: u64,
) -> PyResult<PyEnvelope> {
    let m = measure.resolve()?;
    py.detach(|| core::permutation_envelope(&x, max_lag, &m, b, &levels, seed)).map(PyEnvelope).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, max_lag, measure, b = 1000, levels = vec![0.05, 0.5, 0.95], seed = 0))]
fn iid_bootstrap_envelope(
    py: Python<'_>,
    x: Vec<f64>,
    max_lag: usize,
    measure: MeasureArg,
    b: usize,
    levels: Vec<f64>,
    seed: u64,
) -> PyResult<PyEnvelope> {
    let m = measure.resolve()?;
    py.detach(|| core::iid_bootstrap_envelope(&x, max_lag, &m, b, &levels, seed)).map(PyEnvelope).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (
    model, n, max_lag, measure, b = 1000, levels = vec![0.05, 0.5, 0.95], seed = 0,
    bootstrap_noise = "resample"
))]
#[allow(clippy::too_many_arguments)]
fn parametric_bootstrap_envelope(
    py: Python<'_>,
    model: &PyArModel,
    n: usize,
    max_lag: usize,
    measure: MeasureArg,
    b: usize,
    levels: Vec<f64>,
    seed: u64,
    bootstrap_noise: &str,
) -> PyResult<PyEnvelope> {
    let m = measure.resolve()?;
    let noise: core::BootstrapNoise = bootstrap_noise.parse().map_err(err)?;
    let model = &model.0;
    py.detach(|| core::parametric_bootstrap_envelope(model, n, max_lag, &m, b, &levels, seed, noise))
        .map(PyEnvelope)
        .map_err(err)
}

#[pyfunction]
fn gaussian_adcv_closed_form(sigma2: f64, gamma_h: f64) -> PyResult<f64> {
    core::gaussian_adcv_closed_form(sigma2, gamma_h).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, y, variance, half_width = 8.0, grid_points = 512))]
fn ecf_quadrature_dcov(
    x: Vec<f64>,
    y: Vec<f64>,
    variance: f64,
    half_width: f64,
    grid_points: usize,
) -> PyResult<f64> {
    core::ecf_quadrature_dcov(&x, &y, variance, half_width, grid_points).map_err(err)
}

#[pymodule]
fn dcorr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DcorrError", m.py().get_type::<DcorrError>())?;
    m.add("BENCHMARK_AR10", core::BENCHMARK_AR10.to_vec())?;
    m.add_class::<PyWeightMeasure>()?;
    m.add_class::<PyLagCurve>()?;
    m.add_class::<PyArModel>()?;
    m.add_class::<PyEnvelope>()?;
    m.add_function(wrap_pyfunction!(dcov_v, m)?)?;
    m.add_function(wrap_pyfunction!(dcor, m)?)?;
    m.add_function(wrap_pyfunction!(adcv, m)?)?;
    m.add_function(wrap_pyfunction!(adcf, m)?)?;
    m.add_function(wrap_pyfunction!(cdcf, m)?)?;
    m.add_function(wrap_pyfunction!(acf, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ar, m)?)?;
    m.add_function(wrap_pyfunction!(select_order_aicc, m)?)?;
    m.add_function(wrap_pyfunction!(residuals, m)?)?;
    m.add_function(wrap_pyfunction!(is_causal, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_ar, m)?)?;
    m.add_function(wrap_pyfunction!(draw_noise, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(iid_bootstrap_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(parametric_bootstrap_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_adcv_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ecf_quadrature_dcov, m)?)?;
    Ok(())
}
