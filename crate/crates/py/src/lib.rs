use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wpda_kbest::automata::{compile_string, intersect, stack_bound, StackBound, Wfsa};
use wpda_kbest::bench::{run_algo, Algo};
use wpda_kbest::format::{parse_parens, parse_wfsa, parse_wpda, write_parens, write_wpda};
use wpda_kbest::inference::{
    gamma, inside, outside, reverse_inside, shortest_distance, WeightTable,
};
use wpda_kbest::oracle::ExpandOptions;
use wpda_kbest::semiring::{Semiring, Tropical};
use wpda_kbest::{fixtures, Error};

create_exception!(pywpda, WpdaError, PyException);
create_exception!(pywpda, LimitError, WpdaError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::LimitExceeded(_) | Error::NonTerminating(_) | Error::UnboundedInput(_) => {
            LimitError::new_err(e.to_string())
        }
        _ => WpdaError::new_err(e.to_string()),
    }
}

fn weight(w: Tropical) -> Option<f64> {
    (!w.is_zero()).then(|| w.value())
}

fn table_dict<'py>(py: Python<'py>, table: &WeightTable<Tropical>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (item, w) in table.sorted() {
        d.set_item((item.from, item.to), w.value())?;
    }
    Ok(d)
}

/// One of the k best accepting paths.
#[pyclass(frozen, get_all, skip_from_py_object)]
struct ScoredPath {
    weight: f64,
    /// Input symbols read along the path.
    tokens: Vec<String>,
    /// The same path with its parenthesis labels kept.
    labels: Vec<String>,
    /// Transition indices, in order.
    transitions: Vec<u32>,
}

#[pymethods]
impl ScoredPath {
    fn __repr__(&self) -> String {
        format!(
            "ScoredPath(weight={}, tokens={:?})",
            self.weight, self.tokens
        )
    }
}

/// A weighted pushdown automaton over the tropical semiring.
#[pyclass(frozen)]
struct Wpda {
    inner: wpda_kbest::automata::Wpda<Tropical>,
}

#[pymethods]
impl Wpda {
    /// Parse the tab-separated transition format. `parens` holds one
    /// `open close` pair per line.
    #[staticmethod]
    #[pyo3(signature = (text, parens = None))]
    fn parse(text: &str, parens: Option<&str>) -> PyResult<Self> {
        let pairs = match parens {
            Some(p) => parse_parens(p).map_err(to_py)?,
            None => Vec::new(),
        };
        let inner = parse_wpda(text, &pairs).map_err(to_py)?;
        Ok(Wpda { inner })
    }

    /// A built-in example automaton: `anbn`, `nested` or `h2trap`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::by_name(name)
            .map(|inner| Wpda { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown fixture `{name}`")))
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    #[getter]
    fn num_transitions(&self) -> usize {
        self.inner.transitions().len()
    }

    #[getter]
    fn start(&self) -> u32 {
        self.inner.start()
    }

    #[getter]
    fn final_state(&self) -> u32 {
        self.inner.final_state()
    }

    fn to_text(&self) -> String {
        write_wpda(&self.inner)
    }

    fn parens_text(&self) -> String {
        write_parens(&self.inner)
    }

    /// Maximum stack depth, or None when it is unbounded.
    fn stack_depth(&self) -> Option<usize> {
        match stack_bound(&self.inner) {
            StackBound::Bounded { depth } => Some(depth),
            StackBound::Unbounded { .. } => None,
        }
    }

    /// Intersect with an acceptor given either as text or as a token string.
    #[pyo3(signature = (fsa = None, tokens = None))]
    fn intersect(&self, fsa: Option<&str>, tokens: Option<Vec<String>>) -> PyResult<Self> {
        let acceptor: Wfsa<Tropical> = match (fsa, tokens) {
            (Some(text), None) => parse_wfsa(text).map_err(to_py)?,
            (None, Some(tokens)) => {
                let t: Vec<&str> = tokens.iter().map(String::as_str).collect();
                compile_string(&t, &t).map_err(to_py)?
            }
            _ => {
                return Err(PyValueError::new_err(
                    "pass exactly one of `fsa` and `tokens`",
                ))
            }
        };
        let inner = intersect(&self.inner, &acceptor).map_err(to_py)?;
        Ok(Wpda { inner })
    }

    /// Weight of the best accepting path, or None if nothing is accepted.
    fn shortest_distance(&self, py: Python<'_>) -> PyResult<Option<f64>> {
        let w = py
            .detach(|| shortest_distance(&self.inner))
            .map_err(to_py)?;
        Ok(weight(w))
    }

    /// The k best accepting paths. `algo` is one of `lazy`, `astar-h1`,
    /// `astar-h2` or `expand`.
    #[pyo3(signature = (k, algo = "lazy"))]
    fn kshortest(&self, py: Python<'_>, k: usize, algo: &str) -> PyResult<Vec<ScoredPath>> {
        let algo: Algo = algo.parse().map_err(|e: String| PyValueError::new_err(e))?;
        let result = py
            .detach(|| run_algo(&self.inner, k, algo, ExpandOptions::default()))
            .map_err(to_py)?;
        let m = &self.inner;
        Ok(result
            .paths
            .iter()
            .map(|p| ScoredPath {
                weight: p.weight.value(),
                tokens: m
                    .yield_tokens(&p.path, false)
                    .into_iter()
                    .map(String::from)
                    .collect(),
                labels: m
                    .yield_tokens(&p.path, true)
                    .into_iter()
                    .map(String::from)
                    .collect(),
                transitions: p.path.0.clone(),
            })
            .collect())
    }

    /// Inside weights as a dict keyed by `(from, to)`.
    fn inside<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let alpha = inside(&self.inner).map_err(to_py)?;
        table_dict(py, &alpha.table)
    }

    /// Outside weights for every item with an inside weight.
    fn outside<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let alpha = inside(&self.inner).map_err(to_py)?;
        table_dict(py, &outside(&self.inner, &alpha.table))
    }

    /// Inside weights of the reversed automaton, keyed in original orientation.
    fn reverse_inside<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        table_dict(py, &reverse_inside(&self.inner).map_err(to_py)?)
    }

    /// Exit distances for every item with an inside weight.
    fn gamma<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let alpha = inside(&self.inner).map_err(to_py)?;
        let d = reverse_inside(&self.inner).map_err(to_py)?;
        table_dict(py, &gamma(&self.inner, &d).to_table(&alpha.table))
    }

    fn __repr__(&self) -> String {
        format!(
            "Wpda(states={}, transitions={}, parens={})",
            self.inner.num_states(),
            self.inner.transitions().len(),
            self.inner.parens().len()
        )
    }
}

#[pymodule]
fn pywpda(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Wpda>()?;
    m.add_class::<ScoredPath>()?;
    m.add("WpdaError", m.py().get_type::<WpdaError>())?;
    m.add("LimitError", m.py().get_type::<LimitError>())?;
    Ok(())
}
