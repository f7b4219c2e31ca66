//! Python bindings: fields, polynomial specs, codes and the verification
//! harness. Field elements cross the boundary as their integer encoding.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyComplex, PyDict, PyList, PyString};
use serde_json::{json, Value};

use sfcode_core::charsums::{self, LemmaId};
use sfcode_core::construct::{self, MdsViolation, OvalWitness, PolySpec};
use sfcode_core::lincode::{self, DualDistance, EnumOptions, LinearCode, DEFAULT_BUDGET};
use sfcode_core::subfield::{self, ADomain, Basis};
use sfcode_core::verify::{self, TheoremId};
use sfcode_core::{make_field, Elem, Error, FiniteField};

create_exception!(sfcode, SfcError, PyException);
create_exception!(sfcode, NotApplicableError, SfcError);
create_exception!(sfcode, BudgetExceededError, SfcError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::NotApplicable { .. } | Error::OddCharacteristic | Error::EvenCharacteristic | Error::EvenM => {
            NotApplicableError::new_err(msg)
        }
        Error::BudgetExceeded(_) => BudgetExceededError::new_err(msg),
        Error::NotPrime(_) | Error::BadPolySpec(_) | Error::InvalidBasis(_) | Error::DivisionByZero => {
            PyValueError::new_err(msg)
        }
        _ => SfcError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for sfcode_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn complex<'py>(py: Python<'py>, z: charsums::ComplexVal) -> Bound<'py, PyComplex> {
    PyComplex::from_doubles(py, z.re, z.im)
}

/// The finite field GF(p^m).
#[pyclass(name = "Field", module = "sfcode", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: Arc<FiniteField>,
}

impl PyField {
    fn elem(&self, x: u32) -> PyResult<Elem> {
        let e = Elem(x);
        if self.inner.contains(e) {
            Ok(e)
        } else {
            Err(PyValueError::new_err(format!("{x} is not an element of GF({})", self.inner.q())))
        }
    }
}

#[pymethods]
impl PyField {
    #[new]
    fn new(p: u64, m: u32) -> PyResult<Self> {
        Ok(Self {
            inner: make_field(p, m).py()?,
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    /// Coefficients of the primitive modulus, lowest degree first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn alpha_pow(&self, i: u64) -> u32 {
        self.inner.alpha_pow(i).0
    }

    fn log(&self, x: u32) -> PyResult<Option<u32>> {
        Ok(self.inner.log(self.elem(x)?))
    }

    fn digits(&self, x: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.digits(self.elem(x)?))
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.add(self.elem(a)?, self.elem(b)?).0)
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.sub(self.elem(a)?, self.elem(b)?).0)
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(a)?, self.elem(b)?).0)
    }

    fn div(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.div(self.elem(a)?, self.elem(b)?).py()?.0)
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.inv(self.elem(a)?).py()?.0)
    }

    fn pow(&self, a: u32, e: i64) -> PyResult<u32> {
        Ok(self.inner.pow_signed(self.elem(a)?, e).py()?.0)
    }

    /// Absolute trace to GF(p).
    fn trace(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.abs_trace(self.elem(a)?).0)
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, m={})", self.inner.p(), self.inner.m())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.p() == other.inner.p() && self.inner.m() == other.inner.m()
    }
}

/// A function GF(q) -> GF(q) given by a spec such as `mono:3` or `segre`.
#[pyclass(name = "Poly", module = "sfcode", frozen)]
struct PyPoly {
    inner: PolySpec,
}

#[pymethods]
impl PyPoly {
    #[new]
    fn new(field: &PyField, spec: &str) -> PyResult<Self> {
        Ok(Self {
            inner: PolySpec::parse(spec, &field.inner).py()?,
        })
    }

    /// Polynomial from an explicit value table indexed by element encoding.
    #[staticmethod]
    fn from_table(field: &PyField, table: Vec<u32>) -> PyResult<Self> {
        let table = table.into_iter().map(Elem).collect();
        Ok(Self {
            inner: PolySpec::explicit(&field.inner, table).py()?,
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    fn table(&self) -> Vec<u32> {
        self.inner.table().iter().map(|e| e.0).collect()
    }

    fn __call__(&self, x: u32) -> PyResult<u32> {
        let f = PyField {
            inner: self.inner.field().clone(),
        };
        Ok(self.inner.eval(f.elem(x)?).0)
    }

    /// `{"passed": bool, "violation": dict | None}` for the MDS conditions.
    fn mds_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let w = construct::mds_conditions(&self.inner);
        let violation = match w.violation {
            None => Value::Null,
            Some(MdsViolation::ZeroValue { x }) => json!({"kind": "zero_value", "x": x.0}),
            Some(MdsViolation::ProportionalPair { x, y }) => json!({"kind": "proportional_pair", "x": x.0, "y": y.0}),
        };
        to_py(py, &json!({"passed": w.passed, "violation": violation}))
    }

    /// Oval test over GF(2^m).
    fn oval_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = construct::oval_check(&self.inner).py()?;
        let witness = match r.witness {
            None => Value::Null,
            Some(OvalWitness::NotPermutation { x, y }) => json!({"kind": "not_permutation", "x": x.0, "y": y.0}),
            Some(OvalWitness::SlopeCollision { x, y, z }) => {
                json!({"kind": "slope_collision", "x": x.0, "y": y.0, "z": z.0})
            }
        };
        to_py(py, &json!({"is_oval": r.is_oval, "normalized": r.normalized, "witness": witness}))
    }

    /// The [q+1, 2] code over GF(q).
    fn parent_code(&self) -> PyCode {
        PyCode {
            inner: LinearCode::new(construct::build_g(&self.inner)),
        }
    }

    /// The GF(p) subfield code of the parent code.
    fn subfield_code(&self) -> PyResult<PyCode> {
        Ok(PyCode {
            inner: subfield::subfield_code(&self.inner).py()?,
        })
    }

    /// Trace representation; `a_subfield = l` restricts a to GF(p^l).
    #[pyo3(signature = (a_subfield=None))]
    fn trace_code(&self, a_subfield: Option<u32>) -> PyResult<PyCode> {
        let domain = a_subfield.map_or(ADomain::Full, ADomain::Subfield);
        Ok(PyCode {
            inner: subfield::trace_code(&self.inner, domain).py()?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?} over GF({}))", self.inner.label(), self.inner.field().q())
    }
}

/// Weight distribution A_0..A_n.
#[pyclass(name = "WeightDistribution", module = "sfcode", frozen)]
struct PyWeights {
    inner: lincode::WeightDistribution,
}

#[pymethods]
impl PyWeights {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts.clone()
    }

    #[getter]
    fn min_distance(&self) -> Option<usize> {
        self.inner.min_distance()
    }

    fn nonzero_weights(&self) -> Vec<(usize, u64)> {
        self.inner.nonzero_weights()
    }

    fn enumerator(&self) -> String {
        self.inner.enumerator_string()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn __repr__(&self) -> String {
        format!("WeightDistribution({})", self.inner.enumerator_string())
    }
}

/// A linear code given by a generator matrix.
#[pyclass(name = "Code", module = "sfcode", frozen)]
struct PyCode {
    inner: LinearCode,
}

#[pymethods]
impl PyCode {
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        let rows: Vec<Vec<Elem>> = rows.into_iter().map(|r| r.into_iter().map(Elem).collect()).collect();
        let gen = lincode::GenMatrix::from_rows(&field.inner, &rows).py()?;
        Ok(Self {
            inner: LinearCode::new(gen),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    /// Reduced basis rows.
    fn basis(&self) -> Vec<Vec<u32>> {
        self.inner
            .basis()
            .iter()
            .map(|r| r.iter().map(|e| e.0).collect())
            .collect()
    }

    #[pyo3(signature = (budget=None))]
    fn weight_distribution(&self, py: Python<'_>, budget: Option<u128>) -> PyResult<PyWeights> {
        let code = &self.inner;
        let wd = py
            .detach(|| {
                let opts = EnumOptions {
                    budget,
                    ..Default::default()
                };
                lincode::weight_distribution_with(code, &opts)
            })
            .py()?;
        Ok(PyWeights { inner: wd })
    }

    /// Dual minimum distance if it is at most `t` (at most 4), else None.
    #[pyo3(signature = (t=4))]
    fn dual_distance(&self, t: usize) -> PyResult<Option<usize>> {
        if t > 4 {
            return Err(PyValueError::new_err("t must be at most 4"));
        }
        Ok(match lincode::dual_min_distance_upto(&self.inner, t) {
            DualDistance::Exact { d, .. } => Some(d),
            DualDistance::Above(_) => None,
        })
    }

    fn dual(&self) -> PyCode {
        PyCode {
            inner: self.inner.dual(),
        }
    }

    /// Expansion over the GF(p) basis alpha^j, ..., alpha^(j+m-1).
    #[pyo3(signature = (basis_shift=0))]
    fn expand(&self, basis_shift: u64) -> PyResult<PyCode> {
        let basis = Basis::shifted(self.inner.field(), basis_shift);
        Ok(PyCode {
            inner: subfield::expand_subfield(&self.inner, &basis).py()?,
        })
    }

    /// Same set of codewords.
    #[pyo3(signature = (other, budget=None))]
    fn same_code(&self, other: &PyCode, budget: Option<u128>) -> PyResult<bool> {
        subfield::same_code_set(&self.inner, &other.inner, budget.unwrap_or(DEFAULT_BUDGET)).py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Code([{}, {}] over GF({}))",
            self.inner.length(),
            self.inner.dimension(),
            self.inner.field().q()
        )
    }
}

fn theorem(name: &str) -> PyResult<TheoremId> {
    TheoremId::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown theorem {name:?}")))
}

/// Verification report for a theorem (or conjecture probe) as a dict.
#[pyfunction]
#[pyo3(signature = (theorem_id, p, param, budget=None))]
fn verify_theorem<'py>(
    py: Python<'py>,
    theorem_id: &str,
    p: u64,
    param: u32,
    budget: Option<u128>,
) -> PyResult<Bound<'py, PyAny>> {
    let id = theorem(theorem_id)?;
    let report = py
        .detach(|| {
            let opts = EnumOptions {
                budget,
                ..Default::default()
            };
            verify::run_verification(id, p, param, &opts)
        })
        .py()?;
    to_py(py, &report.to_json())
}

/// Measurement of a conjecture at extension degree `m`.
#[pyfunction]
#[pyo3(signature = (conj, m, budget=None))]
fn probe<'py>(py: Python<'py>, conj: &str, m: u32, budget: Option<u128>) -> PyResult<Bound<'py, PyAny>> {
    let id = theorem(conj)?;
    if !id.is_conjecture() {
        return Err(PyValueError::new_err(format!("{conj} is not a conjecture")));
    }
    let report = py
        .detach(|| {
            let opts = EnumOptions {
                budget,
                ..Default::default()
            };
            verify::probe_conjecture(id, m, &opts)
        })
        .py()?;
    to_py(py, &report.to_json())
}

/// Gauss sum G(lambda^j) with lambda(alpha) = exp(2 pi i / (q - 1)).
#[pyfunction]
fn gauss_sum<'py>(py: Python<'py>, field: &PyField, j: u64) -> Bound<'py, PyComplex> {
    complex(py, charsums::gauss_sum(&field.inner, j))
}

/// `(numeric, closed)` for `sum_x chi_b(a2 x^2 + a1 x + a0)`.
#[pyfunction]
fn weil_quadratic<'py>(
    py: Python<'py>,
    field: &PyField,
    b: u32,
    a2: u32,
    a1: u32,
    a0: u32,
) -> PyResult<(Bound<'py, PyComplex>, Bound<'py, PyComplex>)> {
    let [b, a2, a1, a0] = [field.elem(b)?, field.elem(a2)?, field.elem(a1)?, field.elem(a0)?];
    let pair = charsums::weil_quadratic(&field.inner, b, a2, a1, a0).py()?;
    Ok((complex(py, pair.numeric), complex(py, pair.closed)))
}

/// `S(a, b)` over GF(2^m), m odd.
#[pyfunction]
fn carlitz_s(field: &PyField, a: u32, b: u32) -> PyResult<i64> {
    charsums::carlitz_s(&field.inner, field.elem(a)?, field.elem(b)?).py()
}

/// Exhaustive `S(a, b)` scan over GF(2^m) as a dict.
#[pyfunction]
fn carlitz_scan<'py>(py: Python<'py>, m: u32) -> PyResult<Bound<'py, PyAny>> {
    let field = make_field(2, m).py()?;
    let scan = py.detach(|| charsums::carlitz_scan(&field)).py()?;
    let mut v = serde_json::to_value(&scan).map_err(|e| SfcError::new_err(e.to_string()))?;
    v["passed"] = json!(scan.passed());
    to_py(py, &v)
}

/// Brute-force counts for a counting lemma next to their closed forms.
#[pyfunction]
#[pyo3(signature = (lemma, p, param, budget=None))]
fn count_oracle<'py>(
    py: Python<'py>,
    lemma: &str,
    p: u64,
    param: u32,
    budget: Option<u128>,
) -> PyResult<Bound<'py, PyAny>> {
    let id = LemmaId::parse(lemma).ok_or_else(|| PyValueError::new_err(format!("unknown lemma {lemma:?}")))?;
    let report = py
        .detach(|| charsums::count_oracle(id, p, param, budget.unwrap_or(DEFAULT_BUDGET)))
        .py()?;
    to_py(py, &report.to_json())
}

/// Names accepted by `verify_theorem`.
#[pyfunction]
fn theorems() -> Vec<&'static str> {
    TheoremId::all().iter().map(|t| t.name()).collect()
}

#[pymodule]
fn sfcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyField>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyWeights>()?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(weil_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(carlitz_s, m)?)?;
    m.add_function(wrap_pyfunction!(carlitz_scan, m)?)?;
    m.add_function(wrap_pyfunction!(count_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(theorems, m)?)?;
    m.add("SfcError", py.get_type::<SfcError>())?;
    m.add("NotApplicableError", py.get_type::<NotApplicableError>())?;
    m.add("BudgetExceededError", py.get_type::<BudgetExceededError>())?;
    Ok(())
}
