//! Python bindings for `absrr`. Rationals cross the boundary as strings
//! such as `"3/2"`; reports come back as dictionaries.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};

use absrr::balanced_ternary::BalancedTernary;
use absrr::exact_arith::{ceil_log3 as ceil_log3_exact, format_rational, parse_rational};
use absrr::{cli, h0, h1, rr, tolerance, ArakelovDivisor, PosRational, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

fn err(e: absrr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pos(s: &str) -> PyResult<PosRational> {
    s.parse().map_err(err)
}

fn rational(s: &str) -> PyResult<BigRational> {
    parse_rational(s).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// An Arakelov divisor `sum a_p {p} + a {inf}` with `lambda = e^a` rational.
#[pyclass(name = "Divisor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDivisor(ArakelovDivisor);

#[pymethods]
impl PyDivisor {
    /// Parses `"p:e,...;lambda=p/q"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        cli::parse_divisor(spec).map(PyDivisor).map_err(err)
    }

    #[staticmethod]
    fn zero() -> Self {
        PyDivisor(ArakelovDivisor::zero())
    }

    #[staticmethod]
    fn canonical() -> Self {
        PyDivisor(ArakelovDivisor::canonical())
    }

    #[staticmethod]
    fn archimedean(lam: &str) -> PyResult<Self> {
        Ok(PyDivisor(ArakelovDivisor::archimedean(pos(lam)?)))
    }

    #[staticmethod]
    fn principal(q: &str) -> PyResult<Self> {
        ArakelovDivisor::principal(&rational(q)?)
            .map(PyDivisor)
            .map_err(err)
    }

    fn exp_degree(&self) -> String {
        self.0.exp_degree().to_string()
    }

    /// `deg D` as a float, for display.
    fn degree(&self) -> f64 {
        self.0.degree().approx
    }

    fn lattice_generator(&self) -> String {
        self.0.lattice_generator().to_string()
    }

    fn dim_h0(&self) -> u32 {
        h0::dim_h0(&self.0)
    }

    fn dim_h1(&self) -> u32 {
        h1::dim_h1(&self.0)
    }

    fn euler_characteristic(&self) -> i64 {
        rr::euler_characteristic(&self.0)
    }

    fn __add__(&self, other: &PyDivisor) -> Self {
        PyDivisor(self.0.combine(&other.0, Sign::Plus))
    }

    fn __sub__(&self, other: &PyDivisor) -> Self {
        PyDivisor(self.0.combine(&other.0, Sign::Minus))
    }

    fn __neg__(&self) -> Self {
        PyDivisor(self.0.negate())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Divisor({:?})", self.0.to_string())
    }
}

#[pyfunction]
fn ceil_log3(q: &str) -> PyResult<i64> {
    Ok(ceil_log3_exact(&pos(q)?))
}

#[pyfunction]
fn ceil_prime_log3(q: &str) -> PyResult<i64> {
    Ok(rr::ceil_prime_log3(&pos(q)?))
}

/// Balanced ternary digits of `n`, least significant first.
#[pyfunction]
fn bt_encode(n: BigInt) -> Vec<i8> {
    BalancedTernary::encode(&n)
        .digits()
        .iter()
        .map(|t| t.value())
        .collect()
}

#[pyfunction]
fn bt_decode(digits: Vec<i64>) -> PyResult<BigInt> {
    absrr::balanced_ternary::decode_digits(&digits).map_err(err)
}

/// Balanced ternary numeral of `n` written most significant first.
#[pyfunction]
fn bt_format(n: BigInt) -> String {
    BalancedTernary::encode(&n).to_string()
}

#[pyfunction]
fn truncate_expand(x: &str, m: u32) -> PyResult<String> {
    Ok(format_rational(&absrr::balanced_ternary::truncate_expand(
        &rational(x)?,
        m,
    )))
}

#[pyfunction]
fn dim_hzn(n: u64) -> u32 {
    h0::dim_hzn(n)
}

#[pyfunction]
fn in_e(n: u64) -> Option<(u32, u32)> {
    h0::in_e(n)
}

#[pyfunction]
fn genset<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, &h0::genset(n).map_err(err)?)
}

#[pyfunction]
fn verify_genset<'py>(py: Python<'py>, n: u64, gens: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    report(py, &h0::verify_genset(n, &gens).map_err(err)?)
}

#[pyfunction]
fn dim_u1(lam: &str) -> PyResult<u32> {
    Ok(h1::dim_u1(&pos(lam)?))
}

#[pyfunction]
fn circle_genset(lam: &str) -> PyResult<Vec<String>> {
    Ok(h1::circle_genset(&pos(lam)?)
        .generators
        .iter()
        .map(format_rational)
        .collect())
}

#[pyfunction]
fn verify_circle_cover(lam: &str, gens: Vec<String>) -> PyResult<bool> {
    let gens = gens
        .iter()
        .map(|g| rational(g))
        .collect::<PyResult<Vec<_>>>()?;
    h1::verify_circle_cover(&pos(lam)?, &gens).map_err(err)
}

#[pyfunction]
fn rr_verify<'py>(py: Python<'py>, d: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    report(py, &rr::rr_verify(&d.0))
}

#[pyfunction]
fn serre_verify<'py>(py: Python<'py>, d: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    report(py, &rr::serre_verify(&d.0))
}

#[pyfunction]
fn indicator_l(d: &PyDivisor) -> u8 {
    rr::indicator_l(&d.0)
}

#[pyfunction]
fn hom_bound(lam: &str, mu: &str) -> PyResult<String> {
    Ok(rr::hom_bound(&pos(lam)?, &pos(mu)?).to_string())
}

#[pyfunction]
fn l_measure(k_max: u32) -> f64 {
    rr::l_measure(k_max).sum
}

#[pyfunction]
fn oracle_dim_hzn(py: Python<'_>, n: u64) -> PyResult<usize> {
    py.detach(|| tolerance::oracle_dim_hzn(n)).map_err(err)
}

/// Brute-force dimension of a module given as its JSON description.
#[pyfunction]
#[pyo3(signature = (spec, max_card = 8))]
fn module_dim(py: Python<'_>, spec: &str, max_card: usize) -> PyResult<usize> {
    let spec: tolerance::ModuleSpec =
        serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let module = tolerance::FiniteToleranceModule::from_spec(&spec).map_err(err)?;
    py.detach(|| module.dim_bruteforce(max_card)).map_err(err)
}

#[pymodule]
fn absrr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDivisor>()?;
    m.add_function(wrap_pyfunction!(ceil_log3, m)?)?;
    m.add_function(wrap_pyfunction!(ceil_prime_log3, m)?)?;
    m.add_function(wrap_pyfunction!(bt_encode, m)?)?;
    m.add_function(wrap_pyfunction!(bt_decode, m)?)?;
    m.add_function(wrap_pyfunction!(bt_format, m)?)?;
    m.add_function(wrap_pyfunction!(truncate_expand, m)?)?;
    m.add_function(wrap_pyfunction!(dim_hzn, m)?)?;
    m.add_function(wrap_pyfunction!(in_e, m)?)?;
    m.add_function(wrap_pyfunction!(genset, m)?)?;
    m.add_function(wrap_pyfunction!(verify_genset, m)?)?;
    m.add_function(wrap_pyfunction!(dim_u1, m)?)?;
    m.add_function(wrap_pyfunction!(circle_genset, m)?)?;
    m.add_function(wrap_pyfunction!(verify_circle_cover, m)?)?;
    m.add_function(wrap_pyfunction!(rr_verify, m)?)?;
    m.add_function(wrap_pyfunction!(serre_verify, m)?)?;
    m.add_function(wrap_pyfunction!(indicator_l, m)?)?;
    m.add_function(wrap_pyfunction!(hom_bound, m)?)?;
    m.add_function(wrap_pyfunction!(l_measure, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_dim_hzn, m)?)?;
    m.add_function(wrap_pyfunction!(module_dim, m)?)?;
    Ok(())
}
