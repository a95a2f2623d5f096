//! Python bindings: knots, models, cones and obstruction reports.
//!
//! Structured results cross the boundary as plain dicts and lists, and exact
//! rationals as `fractions.Fraction`.

use fsl_core::cone::{self, ConeError, Slope};
use fsl_core::knotdata::{self, KnotModel, RecordFormat, Tier, ValidatedKnot};
use fsl_core::obstruct::{self, Orientation};
use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, r: Ratio<i64>) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn slope(raw: &str) -> PyResult<Slope> {
    raw.parse().map_err(|e: ConeError| value_error(e))
}

/// A validated knot record.
#[pyclass(frozen)]
struct Knot {
    inner: ValidatedKnot,
}

#[pymethods]
impl Knot {
    #[new]
    #[pyo3(signature = (name, alexander, genus, slice_genus=None, is_slice=false, is_alternating=false, hfk_top=None))]
    fn new(
        name: String,
        alexander: Vec<i64>,
        genus: u32,
        slice_genus: Option<u32>,
        is_slice: bool,
        is_alternating: bool,
        hfk_top: Option<(u64, u64)>,
    ) -> PyResult<Self> {
        let rec = knotdata::KnotRecord {
            name,
            alexander,
            genus,
            slice_genus,
            is_slice,
            is_alternating,
            hfk_top: hfk_top.map(|(even, odd)| fsl_core::HfkTop { even, odd }),
        };
        Self::from_record(&rec)
    }

    /// Parses one table line (`format` is "csv" or "json").
    #[staticmethod]
    #[pyo3(signature = (line, format="csv"))]
    fn parse(line: &str, format: &str) -> PyResult<Self> {
        let format = match format {
            "csv" => RecordFormat::Csv,
            "json" => RecordFormat::Json,
            other => return Err(value_error(format!("unknown format `{other}`"))),
        };
        Self::from_record(&knotdata::parse_knot_record(line, format).map_err(value_error)?)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.genus()
    }

    #[getter]
    fn slice_genus(&self) -> Option<u32> {
        self.inner.slice_genus()
    }

    #[getter]
    fn alexander(&self) -> Vec<i64> {
        self.inner.alexander().coeffs().to_vec()
    }

    /// `t_0, ..., t_{d-1}`; all later coefficients vanish.
    #[getter]
    fn torsion(&self) -> Vec<i64> {
        self.inner.torsion().values
    }

    fn sf_window<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &obstruct::sf_window(&self.inner))
    }

    /// Verdict for a slope `"p/q"` and orientation `"pos"` or `"neg"`.
    fn verdict<'py>(&self, py: Python<'py>, slope_text: &str, orientation: &str) -> PyResult<Bound<'py, PyAny>> {
        let orientation = match orientation {
            "pos" => Orientation::PositiveSF,
            "neg" => Orientation::NegativeSF,
            other => return Err(value_error(format!("unknown orientation `{other}`"))),
        };
        to_py(py, &obstruct::verdict_at(&self.inner, slope(slope_text)?, orientation))
    }

    fn __repr__(&self) -> String {
        format!("Knot({:?}, alexander={}, genus={})", self.inner.name(), self.inner.alexander(), self.inner.genus())
    }
}

impl Knot {
    fn from_record(rec: &knotdata::KnotRecord) -> PyResult<Self> {
        knotdata::validate_record(rec)
            .map(|inner| Self { inner })
            .map_err(|v| value_error(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))
    }
}

/// V/H data (and reduced summands) of a knot, ready for cone computations.
#[pyclass(frozen)]
struct Model {
    inner: KnotModel,
}

#[pymethods]
impl Model {
    /// L-space model built from the torsion coefficients.
    #[staticmethod]
    fn lspace(knot: &Knot) -> PyResult<Self> {
        let inner = knotdata::build_model(&knot.inner, Tier::LSpaceTier, None).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Model from explicit JSON data: `{"window": [...], "V": {...}, "reduced": [...]}`.
    #[staticmethod]
    fn explicit(knot: &Knot, data: &str) -> PyResult<Self> {
        let data = knotdata::ExplicitData::from_json(data).map_err(value_error)?;
        let inner = knotdata::build_model(&knot.inner, Tier::ExplicitTier, Some(data)).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn v(&self, k: i64) -> PyResult<u64> {
        self.inner.vh.v(k).map_err(value_error)
    }

    fn h(&self, k: i64) -> PyResult<u64> {
        self.inner.vh.h(k).map_err(value_error)
    }

    fn cone_homology<'py>(&self, py: Python<'py>, slope_text: &str, spinc: i64) -> PyResult<Bound<'py, PyAny>> {
        let cone = cone::build_surgery_cone(&self.inner, slope(slope_text)?, spinc).map_err(value_error)?;
        to_py(py, &cone::cone_homology(&cone).map_err(value_error)?)
    }

    /// Full diagnostic record behind a cone summary.
    fn cone_dump<'py>(&self, py: Python<'py>, slope_text: &str, spinc: i64) -> PyResult<Bound<'py, PyAny>> {
        let cone = cone::build_surgery_cone(&self.inner, slope(slope_text)?, spinc).map_err(value_error)?;
        to_py(py, &cone.homology_dump().map_err(value_error)?)
    }

    fn zero_surgery_homology<'py>(&self, py: Python<'py>, spinc: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &cone::zero_surgery_homology(&self.inner, spinc).map_err(value_error)?)
    }

    fn surgery_d<'py>(&self, py: Python<'py>, slope_text: &str, spinc: i64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, cone::surgery_d(&self.inner, slope(slope_text)?, spinc).map_err(value_error)?)
    }

    /// Number of basis elements of the truncated B-side given verified preimages.
    fn check_dt_surjective(&self, slope_text: &str, spinc: i64) -> PyResult<usize> {
        let report = cone::check_dt_surjective(&self.inner, slope(slope_text)?, spinc).map_err(value_error)?;
        Ok(report.checked)
    }
}

#[pyfunction]
fn lens_d(py: Python<'_>, p: i64, q: i64, i: i64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, cone::lens_d(p, q, i).map_err(value_error)?)
}

#[pyfunction]
fn spinc_level(i: i64, slope_text: &str, s: i64) -> PyResult<i64> {
    Ok(cone::spinc_level(i, slope(slope_text)?, s))
}

#[pymodule]
fn fsl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Knot>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(lens_d, m)?)?;
    m.add_function(wrap_pyfunction!(spinc_level, m)?)?;
    Ok(())
}
