//! Python module `kecc`. Vertex ids are 0-based, as in the core crate.

use kecc_core::driver::{compute_k2ecc_from, Mode};
use kecc_core::flow::lambda_bounded;
use kecc_core::format::{parse_graph, write_graph};
use kecc_core::gen::{generate, Model};
use kecc_core::oracle::ecc_components;
use kecc_core::{Digraph, Partition};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn blocks(p: &Partition, ordinary: &[usize]) -> Vec<Vec<usize>> {
    p.restricted_blocks(ordinary)
}

/// A directed multigraph with ordinary and auxiliary vertices.
#[pyclass(name = "Graph", module = "kecc")]
struct PyGraph {
    inner: Digraph,
}

#[pymethods]
impl PyGraph {
    /// Empty graph on `n` ordinary vertices.
    #[new]
    fn new(n: usize) -> Self {
        Self {
            inner: Digraph::with_vertices(n),
        }
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        parse_graph(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    /// Generator by name: cyc, kn, blocks, random-kec or chain.
    #[staticmethod]
    #[pyo3(signature = (model, n=8, k=2, p=6, q=6, extra=0, blocks=3, size=5, seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn generate(
        model: &str,
        n: usize,
        k: usize,
        p: usize,
        q: usize,
        extra: usize,
        blocks: usize,
        size: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let m = match model {
            "cyc" => Model::Cyc { n, k },
            "kn" => Model::Kn { n },
            "blocks" => Model::Blocks { p, q, k },
            "random-kec" => Model::RandomKec { n, k, extra },
            "chain" => Model::Chain { blocks, size, k },
            other => return Err(value_err(format!("unknown model `{other}`"))),
        };
        generate(&m, seed)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    fn add_edge(&mut self, tail: usize, head: usize, copies: usize) -> PyResult<()> {
        self.inner
            .add_edge(tail, head, copies)
            .map(|_| ())
            .map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n_live()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m_live()
    }

    fn ordinary(&self) -> Vec<usize> {
        self.inner.ordinary_vertices()
    }

    fn to_text(&self) -> String {
        write_graph(&self.inner, None)
    }

    #[pyo3(signature = (u, v, cap=usize::MAX))]
    fn lambda_(&self, u: usize, v: usize, cap: usize) -> PyResult<usize> {
        let n = self.inner.vertex_bound();
        if u >= n || v >= n {
            return Err(value_err("vertex out of range"));
        }
        Ok(lambda_bounded(&self.inner, u, v, cap))
    }

    /// (k+2)-edge-connected components of the ordinary vertices.
    #[pyo3(signature = (k, delta=0.1, mode="rand", seed=0, root=None))]
    fn components(
        &self,
        py: Python<'_>,
        k: usize,
        delta: f64,
        mode: &str,
        seed: u64,
        root: Option<usize>,
    ) -> PyResult<Vec<Vec<usize>>> {
        let mode: Mode = mode.parse().map_err(value_err)?;
        let g = &self.inner;
        let out = py
            .detach(|| compute_k2ecc_from(g, root, k, delta, mode, seed))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(blocks(&out.partition, &g.ordinary_vertices()))
    }

    /// Brute-force c-edge-connected components of the ordinary vertices.
    fn oracle(&self, c: usize) -> PyResult<Vec<Vec<usize>>> {
        let p = ecc_components(&self.inner, c).map_err(value_err)?;
        Ok(blocks(&p, &self.inner.ordinary_vertices()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.n_live(),
            self.inner.m_live()
        )
    }
}

#[pymodule]
fn kecc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    Ok(())
}
