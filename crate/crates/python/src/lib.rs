use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tvg_centrality as tc;
use tvg_centrality::{
    CoverageThreshold, DistributionKind, MetricSpec, MetricValue, NodeId, StopRule, TemporalNode, TimeIndex,
};

fn err(e: tc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value_to_f64(v: MetricValue) -> f64 {
    v.finite().unwrap_or(f64::INFINITY)
}

/// Immutable time-varying graph.
#[pyclass(name = "Tvg", module = "tvgcentrality", frozen)]
struct PyTvg {
    inner: tc::Tvg,
}

impl PyTvg {
    fn start(&self, node: u32, time: u32) -> TemporalNode {
        TemporalNode {
            node: NodeId(node),
            time: TimeIndex(time),
        }
    }

    fn threshold(&self, tau: &str) -> PyResult<CoverageThreshold> {
        CoverageThreshold::from_decimal(tau, self.inner.num_nodes()).map_err(err)
    }

    fn range(&self, start: Option<usize>, end: Option<usize>) -> std::ops::Range<usize> {
        let default = tc::default_eval_range(self.inner.num_instants());
        start.unwrap_or(default.start)..end.unwrap_or(default.end)
    }
}

#[pymethods]
impl PyTvg {
    /// `contacts` is a list of `(a, b, time)` triples.
    #[new]
    fn new(num_nodes: usize, num_instants: usize, contacts: Vec<(u32, u32, u32)>) -> PyResult<Self> {
        let contacts = contacts
            .into_iter()
            .map(|(a, b, t)| tc::Contact::new(NodeId(a), NodeId(b), TimeIndex(t)))
            .collect::<tc::Result<Vec<_>>>()
            .map_err(err)?;
        let inner = tc::Tvg::build(num_nodes, num_instants, contacts).map_err(err)?;
        Ok(PyTvg { inner })
    }

    #[staticmethod]
    fn generate_er(num_nodes: usize, num_instants: usize, prob: f64, seed: u64) -> PyResult<Self> {
        let spec = tc::ErTvgSpec::new(num_nodes, num_instants, prob, seed).map_err(err)?;
        Ok(PyTvg {
            inner: tc::generate_er_tvg(&spec).map_err(err)?,
        })
    }

    /// 160 nodes, 800 instants, p = 0.01 ln(160)/160.
    #[staticmethod]
    fn sparse_default(seed: u64) -> PyResult<Self> {
        Ok(PyTvg {
            inner: tc::generate_er_tvg(&tc::ErTvgSpec::sparse_default(seed)).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyTvg {
            inner: tc::Tvg::read_text(text.as_bytes()).map_err(err)?,
        })
    }

    /// Parses a `timestamp,label_a,label_b` log and bins it into snapshots.
    #[staticmethod]
    #[pyo3(signature = (text, granularity=30, start=None, end=None))]
    fn from_contact_log(text: &str, granularity: u64, start: Option<i64>, end: Option<i64>) -> PyResult<Self> {
        let records = tc::parse_contacts(text.as_bytes())
            .collect::<tc::Result<Vec<_>>>()
            .map_err(err)?;
        let cfg = tc::IngestConfig {
            granularity_seconds: granularity,
            start_timestamp: start,
            end_timestamp: end,
        };
        Ok(PyTvg {
            inner: tc::discretize(records, &cfg).map_err(err)?.tvg,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    #[getter]
    fn num_instants(&self) -> usize {
        self.inner.num_instants()
    }

    #[getter]
    fn num_contacts(&self) -> usize {
        self.inner.num_contacts()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.inner.labels().map(<[String]>::to_vec)
    }

    fn contacts(&self) -> Vec<(u32, u32, u32)> {
        self.inner.contacts().map(|c| (c.a.0, c.b.0, c.time.0)).collect()
    }

    fn neighbors(&self, node: u32, time: u32) -> PyResult<Vec<u32>> {
        let n = self.inner.neighbors(NodeId(node), TimeIndex(time)).map_err(err)?;
        Ok(n.into_iter().map(|v| v.0).collect())
    }

    fn churn_rate(&self) -> PyResult<f64> {
        self.inner.churn_rate().map_err(err)
    }

    /// Returns `(sizes, exhausted, informed)`.
    #[pyo3(signature = (node, time, max_steps=None))]
    fn diffuse(&self, node: u32, time: u32, max_steps: Option<usize>) -> PyResult<(Vec<usize>, bool, Vec<u32>)> {
        let stop = max_steps.map_or(StopRule::Exhaustion, StopRule::Budget);
        let t = tc::diffuse(&self.inner, self.start(node, time), stop).map_err(err)?;
        Ok((t.sizes, t.exhausted, t.informed.into_iter().map(|v| v.0).collect()))
    }

    /// Steps to inform a fraction `tau` of the nodes, or None if never reached.
    fn cover_steps(&self, node: u32, time: u32, tau: &str) -> PyResult<Option<usize>> {
        let thr = self.threshold(tau)?;
        match tc::cover_steps(&self.inner, self.start(node, time), thr).map_err(err)? {
            tc::Cover::Reached(s) => Ok(Some(s)),
            tc::Cover::Unreached => Ok(None),
        }
    }

    fn constrained_count(&self, node: u32, time: u32, phi: usize) -> PyResult<usize> {
        tc::constrained_count(&self.inner, self.start(node, time), phi).map_err(err)
    }

    /// Cover time at one instant; `inf` when some start node never covers `tau`.
    fn cover_time(&self, time: u32, tau: &str) -> PyResult<f64> {
        let thr = self.threshold(tau)?;
        Ok(value_to_f64(tc::cover_time(&self.inner, TimeIndex(time), thr).map_err(err)?))
    }

    fn tcc(&self, time: u32, phi: usize) -> PyResult<f64> {
        tc::tcc(&self.inner, TimeIndex(time), phi).map_err(err)
    }

    #[pyo3(signature = (tau, start=None, end=None))]
    fn ct_sweep(&self, py: Python<'_>, tau: &str, start: Option<usize>, end: Option<usize>) -> PyResult<PyMetricTable> {
        let spec = MetricSpec::CoverTime(self.threshold(tau)?);
        let range = self.range(start, end);
        let inner = py.detach(|| tc::metric_sweep(&self.inner, spec, range)).map_err(err)?;
        Ok(PyMetricTable { inner })
    }

    #[pyo3(signature = (phi, start=None, end=None))]
    fn tcc_sweep(&self, py: Python<'_>, phi: usize, start: Option<usize>, end: Option<usize>) -> PyResult<PyMetricTable> {
        let range = self.range(start, end);
        let inner = py
            .detach(|| tc::metric_sweep(&self.inner, MetricSpec::Tcc(phi), range))
            .map_err(err)?;
        Ok(PyMetricTable { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "Tvg(num_nodes={}, num_instants={}, num_contacts={})",
            self.inner.num_nodes(),
            self.inner.num_instants(),
            self.inner.num_contacts()
        )
    }
}

/// Per-instant metric values from a sweep.
#[pyclass(name = "MetricTable", module = "tvgcentrality", frozen)]
struct PyMetricTable {
    inner: tc::MetricTable,
}

#[pymethods]
impl PyMetricTable {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    /// `(time_index, value, unreached_starts)`; infinite cover times are `inf`.
    fn rows(&self) -> Vec<(u32, f64, Option<usize>)> {
        self.inner
            .rows
            .iter()
            .map(|r| (r.time.0, value_to_f64(r.value), r.unreached_starts))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn finite_median(&self) -> Option<f64> {
        self.inner.finite_median()
    }

    fn rank(&self, k: usize) -> PyResult<Vec<(u32, f64)>> {
        let top = tc::rank_instants(&self.inner, k).map_err(err)?;
        Ok(top.into_iter().map(|r| (r.time.0, value_to_f64(r.value))).collect())
    }

    /// Points `(value, fraction)` over finite values; `kind` is "cdf" or "ccdf".
    #[pyo3(signature = (kind="cdf"))]
    fn distribution(&self, kind: &str) -> PyResult<Vec<(f64, f64)>> {
        let kind = match kind {
            "cdf" => DistributionKind::Cdf,
            "ccdf" => DistributionKind::Ccdf,
            other => return Err(PyValueError::new_err(format!("unknown distribution kind {other:?}"))),
        };
        Ok(tc::empirical_distribution(&self.inner, kind).map_err(err)?.points)
    }

    fn compare(&self, py: Python<'_>, k: usize, seed: u64) -> PyResult<Py<PyDict>> {
        let c = tc::compare_topk_random(&self.inner, k, seed).map_err(err)?;
        let d = PyDict::new(py);
        let rows = |rs: &[tc::MetricRow]| -> Vec<(u32, f64)> {
            rs.iter().map(|r| (r.time.0, value_to_f64(r.value))).collect()
        };
        d.set_item("top", rows(&c.top))?;
        d.set_item("random", rows(&c.random))?;
        d.set_item("top_median", value_to_f64(c.top_summary.median))?;
        d.set_item("random_median", value_to_f64(c.random_summary.median))?;
        Ok(d.unbind())
    }

    fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.inner.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ASCII")
    }
}

#[pymodule]
fn tvgcentrality(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTvg>()?;
    m.add_class::<PyMetricTable>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
