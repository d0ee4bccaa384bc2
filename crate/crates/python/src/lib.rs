use std::collections::BTreeMap;

use hypersphere_lab::constructions::{
    coset_config, formula_tables, integer_oracle, trivial_config, CosetSpec,
};
use hypersphere_lab::counting::{self, CountOptions};
use hypersphere_lab::geometry::{
    general_position_check, invert_set, lift_set, GeneralPosition, Point,
};
use hypersphere_lab::numeric::{parse_rational, Backend, ScalarDecoder};
use hypersphere_lab::{selftest, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Domain(_) | Error::Unsupported(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn backend(name: &str) -> PyResult<Backend> {
    match name {
        "rational" => Ok(Backend::Rational),
        "cyclotomic" => Ok(Backend::Cyclotomic),
        "interval" => Ok(Backend::Interval),
        _ => Err(PyValueError::new_err(format!("unknown backend {name:?}"))),
    }
}

/// A finite point set with exact (or interval) coordinates.
#[pyclass(name = "PointSet", frozen)]
struct PyPointSet(hypersphere_lab::geometry::PointSet);

#[pymethods]
impl PyPointSet {
    #[staticmethod]
    #[pyo3(signature = (text, bits = 4096))]
    fn from_json(text: &str, bits: u32) -> PyResult<Self> {
        let v = serde_json_value(text)?;
        hypersphere_lab::geometry::PointSet::from_json_with(
            &v,
            &mut ScalarDecoder::with_max_bits(bits),
        )
        .map(PyPointSet)
        .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (d, n, seed = 0))]
    fn trivial(d: usize, n: usize, seed: u64) -> PyResult<Self> {
        trivial_config(d, n, seed).map(PyPointSet).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (d, n, l = 0))]
    fn coset(d: usize, n: usize, l: i64) -> PyResult<Self> {
        let spec = CosetSpec::new(d, n, l).map_err(to_py)?;
        coset_config(&spec).map(PyPointSet).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn backend(&self) -> Option<&'static str> {
        self.0.backend().map(Backend::name)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Coordinates as floats, for plotting.
    fn coordinates(&self) -> Vec<Vec<f64>> {
        self.0.points().iter().map(Point::to_f64).collect()
    }

    #[pyo3(signature = (name, bits = 4096))]
    fn convert(&self, name: &str, bits: u32) -> PyResult<Self> {
        self.0
            .convert(backend(name)?, bits)
            .map(PyPointSet)
            .map_err(to_py)
    }

    fn lift(&self) -> PyResult<Self> {
        lift_set(&self.0).map(PyPointSet).map_err(to_py)
    }

    /// Inversion in the unit sphere around `center`, given as rational strings.
    fn invert(&self, center: Vec<String>) -> PyResult<Self> {
        let like = self
            .0
            .points()
            .first()
            .ok_or_else(|| PyValueError::new_err("empty point set"))?;
        let coords = center
            .iter()
            .map(|c| {
                parse_rational(c)
                    .map(|q| like.coords()[0].constant_like(&q))
                    .ok_or_else(|| PyValueError::new_err(format!("not a rational number: {c:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let c = Point::new(coords).map_err(to_py)?;
        invert_set(&self.0, &c).map(PyPointSet).map_err(to_py)
    }

    /// First degenerate subset, or `None` when the set is in general position.
    #[pyo3(signature = (threads = None))]
    fn general_position_witness(
        &self,
        py: Python<'_>,
        threads: Option<usize>,
    ) -> PyResult<Option<Vec<usize>>> {
        let r = py
            .detach(|| general_position_check(&self.0, threads))
            .map_err(to_py)?;
        Ok(match r {
            GeneralPosition::Ok => None,
            GeneralPosition::Violation(w) => Some(w),
        })
    }

    #[pyo3(signature = (threads = None, hyperplanes = false))]
    fn spectrum(
        &self,
        py: Python<'_>,
        threads: Option<usize>,
        hyperplanes: bool,
    ) -> PyResult<Spectrum> {
        let opts = CountOptions { threads };
        let s = py
            .detach(|| {
                if hyperplanes {
                    counting::ordinary_hyperplane_spectrum(&self.0, &opts)
                } else {
                    counting::spectrum(&self.0, &opts)
                }
            })
            .map_err(to_py)?;
        Ok(Spectrum(s))
    }

    fn __repr__(&self) -> String {
        format!(
            "PointSet(dimension={}, n={}, backend={})",
            self.0.dimension(),
            self.0.len(),
            self.0.backend().map(Backend::name).unwrap_or("none")
        )
    }
}

fn serde_json_value(text: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

/// Incidence spectrum: `counts[m]` hyperspheres carry exactly `m` points.
#[pyclass(frozen)]
struct Spectrum(counting::Spectrum);

#[pymethods]
impl Spectrum {
    #[getter]
    fn counts(&self) -> BTreeMap<usize, u64> {
        self.0.counts.clone()
    }

    #[getter]
    fn indeterminate_count(&self) -> u64 {
        self.0.indeterminate_count
    }

    #[getter]
    fn certified(&self) -> bool {
        self.0.certified()
    }

    /// Hyperspheres through exactly `subset_size` points.
    #[getter]
    fn ordinary(&self) -> u64 {
        self.0.ordinary()
    }

    /// Hyperspheres through exactly `subset_size + 1` points.
    #[getter]
    fn next(&self) -> u64 {
        self.0.next()
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(counts={:?}, indeterminate_count={})",
            self.0.counts, self.0.indeterminate_count
        )
    }
}

/// `(ordinary, dplus2)` from residue arithmetic for the curve coset with offset `l`.
#[pyfunction]
#[pyo3(signature = (d, n, l = 0, threads = None))]
fn oracle(
    py: Python<'_>,
    d: usize,
    n: usize,
    l: i64,
    threads: Option<usize>,
) -> PyResult<(u64, u64)> {
    let o = py
        .detach(|| integer_oracle(n, d, l, threads))
        .map_err(to_py)?;
    Ok((o.ordinary, o.dplus2))
}

/// `(min ordinary, max dplus2)`; the second entry is `None` when unknown.
#[pyfunction]
fn formula(d: usize, n: usize) -> PyResult<(Option<u64>, Option<u64>)> {
    let f = formula_tables(d, n).map_err(to_py)?;
    Ok((f.min_ordinary_u64(), f.max_dplus2_u64()))
}

/// Built-in checks as `(name, passed, detail)` triples.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn run_selftest(py: Python<'_>, seed: u64) -> Vec<(String, bool, String)> {
    py.detach(|| selftest::run(seed))
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.detail))
        .collect()
}

#[pymodule]
fn hypersphere_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPointSet>()?;
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(formula, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
