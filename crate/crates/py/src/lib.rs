//! Python bindings for the ICE inference toolkit.
//!
//! Exposes the study pipeline (ingest/generate, scale, bootstrap,
//! wedge, quadrants), the preference-map family, and frontier
//! classification. Build with maturin, or `cargo build --release -p
//! ice-py` and rename the cdylib to `ice_py.so` / `ice_py.pyd`.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ice_core::bootstrap::{self, BootstrapScatter};
use ice_core::data_model::{self, Arm, ArmSample, PatientRecord, SummaryStats, Variable};
use ice_core::frontier as frontier_core;
use ice_core::preference;
use ice_core::scale::{self, LambdaSource, Perspective, ShadowPrice};
use ice_core::wedge;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_perspective(name: &str) -> PyResult<Perspective> {
    match name {
        "alias" => Ok(Perspective::Alias),
        "alibi" => Ok(Perspective::Alibi),
        other => Err(value_err(format!(
            "perspective must be 'alias' or 'alibi', got '{other}'"
        ))),
    }
}

fn summary_dict<'py>(py: Python<'py>, s: &SummaryStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("min", s.min)?;
    d.set_item("q1", s.q1)?;
    d.set_item("median", s.median)?;
    d.set_item("mean", s.mean)?;
    d.set_item("q3", s.q3)?;
    d.set_item("max", s.max)?;
    d.set_item("sd", s.sd)?;
    Ok(d)
}

/// A two-arm study: per-patient effectiveness and cost observations.
#[pyclass(name = "Study")]
struct PyStudy {
    std: ArmSample,
    new: ArmSample,
}

#[pymethods]
impl PyStudy {
    /// Builds a study from two lists of (effe, cost) pairs.
    #[new]
    fn new(std: Vec<(f64, f64)>, new: Vec<(f64, f64)>) -> PyResult<Self> {
        let build = |arm: Arm, rows: Vec<(f64, f64)>| {
            ArmSample::new(
                arm,
                rows.into_iter()
                    .map(|(effe, cost)| PatientRecord { arm, effe, cost })
                    .collect(),
            )
            .map_err(value_err)
        };
        Ok(Self {
            std: build(Arm::Std, std)?,
            new: build(Arm::New, new)?,
        })
    }

    /// Reads a `trtm,effe,cost` CSV (arm codes 0 = Std, 1 = New).
    #[staticmethod]
    fn from_csv(path: &str) -> PyResult<Self> {
        let (std, new) =
            data_model::ingest_csv(std::path::Path::new(path)).map_err(|e| match e {
                data_model::DataError::Io(msg) => PyIOError::new_err(msg),
                other => value_err(other),
            })?;
        Ok(Self { std, new })
    }

    /// Synthetic 200-patient demo study, deterministic per seed.
    #[staticmethod]
    fn demo(seed: u64) -> PyResult<Self> {
        let (std, new) =
            data_model::split_arms(data_model::generate_demo_data(seed)).map_err(value_err)?;
        Ok(Self { std, new })
    }

    #[getter]
    fn n_std(&self) -> usize {
        self.std.n()
    }

    #[getter]
    fn n_new(&self) -> usize {
        self.new.n()
    }

    /// Six-number summary plus sd for one arm ("std"/"new") and
    /// variable ("effe"/"cost").
    fn summary<'py>(
        &self,
        py: Python<'py>,
        arm: &str,
        variable: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let sample = match arm {
            "std" => &self.std,
            "new" => &self.new,
            other => {
                return Err(value_err(format!(
                    "arm must be 'std' or 'new', got '{other}'"
                )))
            }
        };
        let variable = match variable {
            "effe" => Variable::Effe,
            "cost" => Variable::Cost,
            other => {
                return Err(value_err(format!(
                    "variable must be 'effe' or 'cost', got '{other}'"
                )))
            }
        };
        summary_dict(py, &data_model::summarize(sample, variable))
    }

    /// Cost/effe scale ratio and the recommended power-of-10 lambda.
    /// Rule is "se" (default) or "pooled".
    #[pyo3(signature = (rule = "se"))]
    fn scale<'py>(&self, py: Python<'py>, rule: &str) -> PyResult<Bound<'py, PyDict>> {
        let rule = match rule {
            "se" => scale::ScaleRule::StandardError,
            "pooled" => scale::ScaleRule::Pooled,
            other => {
                return Err(value_err(format!(
                    "rule must be 'se' or 'pooled', got '{other}'"
                )))
            }
        };
        let r = scale::ice_scale(&self.std, &self.new, rule).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("ratio", r.ratio)?;
        d.set_item("s_cost", r.s_cost)?;
        d.set_item("s_effe", r.s_effe)?;
        d.set_item("lambda", r.recommended.value())?;
        Ok(d)
    }

    /// Bootstraps the between-arm mean differences into a scatter.
    /// `lambda=None` selects the nearest power of 10 automatically.
    #[pyo3(signature = (reps, seed, lambda = None, perspective = "alias"))]
    fn bootstrap(
        &self,
        reps: usize,
        seed: u64,
        lambda: Option<f64>,
        perspective: &str,
    ) -> PyResult<PyScatter> {
        let lambda = match lambda {
            Some(v) => ShadowPrice::new(v, LambdaSource::UserSupplied).map_err(value_err)?,
            None => {
                scale::ice_scale(&self.std, &self.new, scale::ScaleRule::StandardError)
                    .map_err(value_err)?
                    .recommended
            }
        };
        let scatter = bootstrap::resample(
            &self.std,
            &self.new,
            reps,
            seed,
            lambda,
            parse_perspective(perspective)?,
        )
        .map_err(value_err)?;
        Ok(PyScatter { inner: scatter })
    }

    fn __repr__(&self) -> String {
        format!("Study(n_std={}, n_new={})", self.std.n(), self.new.n())
    }
}

/// A bootstrap scatter of replicated ICE outcomes.
#[pyclass(name = "Scatter")]
struct PyScatter {
    inner: BootstrapScatter,
}

#[pymethods]
impl PyScatter {
    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    #[getter]
    fn lambda(&self) -> f64 {
        self.inner.lambda().value()
    }

    #[getter]
    fn perspective(&self) -> &'static str {
        self.inner.perspective().name()
    }

    #[getter]
    fn observed(&self) -> (f64, f64) {
        let p = self.inner.observed();
        (p.x, p.y)
    }

    /// Replicate coordinates as a list of (x, y) pairs.
    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.replicates().iter().map(|p| (p.x, p.y)).collect()
    }

    /// Angular confidence wedge. Tails is "symmetric" or "equal".
    #[pyo3(signature = (confidence = 0.95, tails = "symmetric"))]
    fn wedge<'py>(
        &self,
        py: Python<'py>,
        confidence: f64,
        tails: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rule = match tails {
            "symmetric" => wedge::TailRule::Symmetric,
            "equal" => wedge::TailRule::EqualTails,
            other => {
                return Err(value_err(format!(
                    "tails must be 'symmetric' or 'equal', got '{other}'"
                )))
            }
        };
        let w = wedge::compute_wedge(&self.inner, confidence, rule).map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("center_rad", w.center.radians())?;
        d.set_item("center_deg", w.center.degrees())?;
        d.set_item("half_angle_rad", w.half_angle)?;
        d.set_item("lower_rad", w.lower.radians())?;
        d.set_item("upper_rad", w.upper.radians())?;
        d.set_item("confidence", w.confidence)?;
        d.set_item("count_below", w.count_below)?;
        d.set_item("count_above", w.count_above)?;
        d.set_item("count_inside", w.count_inside)?;
        d.set_item("count_origin", w.count_origin)?;
        d.set_item("r", w.r)?;
        Ok(d)
    }

    /// Replicate counts by quadrant: SE, NE, NW, SW, plus axis points.
    fn quadrants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let q = wedge::quadrant_counts(&self.inner);
        let d = PyDict::new(py);
        d.set_item("se", q.se)?;
        d.set_item("ne", q.ne)?;
        d.set_item("nw", q.nw)?;
        d.set_item("sw", q.sw)?;
        d.set_item("boundary", q.boundary)?;
        Ok(d)
    }

    /// Preference values of all replicates under a map.
    fn preferences(&self, map: &PyPreferenceMap) -> Vec<f64> {
        self.inner
            .replicates()
            .iter()
            .map(|p| map.inner.evaluate(p.x, p.y).value())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scatter(r={}, seed={}, lambda={}, perspective='{}')",
            self.inner.r(),
            self.inner.seed(),
            self.inner.lambda().value(),
            self.inner.perspective().name()
        )
    }
}

/// A two-parameter ICE preference map.
#[pyclass(name = "PreferenceMap")]
struct PyPreferenceMap {
    inner: preference::PreferenceMap,
}

#[pymethods]
impl PyPreferenceMap {
    #[new]
    fn new(beta: f64, gamma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: preference::PreferenceMap::with_unit_lambda(beta, gamma).map_err(value_err)?,
        })
    }

    /// The linear Net Benefit map (beta = gamma = 1).
    #[staticmethod]
    fn net_benefit() -> Self {
        Self {
            inner: preference::PreferenceMap::net_benefit(),
        }
    }

    /// The maximally nonlinear monotone map (beta = 1, gamma = Omega).
    #[staticmethod]
    fn omega() -> Self {
        Self {
            inner: preference::PreferenceMap::omega_map(),
        }
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    #[getter]
    fn is_monotone_valid(&self) -> bool {
        self.inner.is_monotone_valid()
    }

    #[getter]
    fn returns_to_scale(&self) -> &'static str {
        self.inner.returns_to_scale().name()
    }

    /// Preference strength at a standardized point.
    fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.inner.evaluate(x, y).value()
    }

    /// Runs the four coherence axioms on an n-by-n grid over
    /// [-range, range] squared; returns {axiom: passed}.
    #[pyo3(signature = (n = 41, range = 2.0))]
    fn check_axioms<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        range: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.check_axioms(&preference::square_grid(n, range));
        let d = PyDict::new(py);
        d.set_item(
            "indifference_direction",
            report.indifference_direction.passed,
        )?;
        d.set_item("monotonicity", report.monotonicity.passed)?;
        d.set_item("relabeling", report.relabeling.passed)?;
        d.set_item("symmetry", report.symmetry.passed)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "PreferenceMap(beta={}, gamma={})",
            self.inner.beta(),
            self.inner.gamma()
        )
    }
}

/// Signed power [z]^c = sign(z) * |z|^c.
#[pyfunction]
fn signed_power(z: f64, c: f64) -> PyResult<f64> {
    if c <= 0.0 {
        return Err(value_err("the exponent must be strictly positive"));
    }
    Ok(preference::signed_power(z, c))
}

/// (1/Omega, Omega) with Omega = (1 + sqrt(2))^2.
#[pyfunction]
fn omega_bounds() -> (f64, f64) {
    preference::omega_bounds()
}

/// Integer power of 10 nearest to `ratio` in log scale.
#[pyfunction]
fn nearest_power_of_10(ratio: f64) -> PyResult<f64> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(value_err("ratio must be strictly positive and finite"));
    }
    Ok(scale::nearest_power_of_10(ratio))
}

/// Classifies (name, effe, cost) options into frontier, strictly
/// dominated, extendedly dominated, and coordinate duplicates.
#[pyfunction]
fn frontier<'py>(
    py: Python<'py>,
    options: Vec<(String, f64, f64)>,
) -> PyResult<Bound<'py, PyDict>> {
    let options: Vec<frontier_core::TreatmentOption> = options
        .into_iter()
        .map(|(name, effe, cost)| frontier_core::TreatmentOption::new(name, effe, cost))
        .collect();
    let result = frontier_core::analyze(&options).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item(
        "frontier",
        result
            .frontier
            .iter()
            .map(|p| (p.name.clone(), p.effe, p.cost))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "dominated",
        result
            .dominated
            .iter()
            .map(|(p, by)| (p.name.clone(), by.clone()))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "extendedly_dominated",
        result
            .extendedly_dominated
            .iter()
            .map(|(p, (l, r))| (p.name.clone(), l.clone(), r.clone()))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "duplicates",
        result
            .duplicates
            .iter()
            .map(|(p, twin)| (p.name.clone(), twin.clone()))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "slopes",
        result.incremental_slopes().into_iter().collect::<Vec<_>>(),
    )?;
    Ok(d)
}

/// Mixture of `left` and `right` matching `target_effe`; returns
/// (weight_on_left, cost_saving_vs_target).
#[pyfunction]
fn mixture_compare(
    target: (String, f64, f64),
    left: (String, f64, f64),
    right: (String, f64, f64),
) -> PyResult<(f64, f64)> {
    let opt = |(name, effe, cost): (String, f64, f64)| {
        frontier_core::TreatmentOption::new(name, effe, cost)
    };
    frontier_core::mixture_compare(&opt(target), &opt(left), &opt(right)).map_err(value_err)
}

#[pymodule]
fn ice_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyStudy>()?;
    m.add_class::<PyScatter>()?;
    m.add_class::<PyPreferenceMap>()?;
    m.add_function(wrap_pyfunction!(signed_power, m)?)?;
    m.add_function(wrap_pyfunction!(omega_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(nearest_power_of_10, m)?)?;
    m.add_function(wrap_pyfunction!(frontier, m)?)?;
    m.add_function(wrap_pyfunction!(mixture_compare, m)?)?;
    Ok(())
}
