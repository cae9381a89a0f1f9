//! Exhaustive and property-based checks of the extremal problem: brute force
//! over all graphs, sweeps over the symmetric staircase class, per-lemma
//! suites and the certificate for the last case of the proof.

mod brute;
mod certificate;
mod rooted;
mod suite;
mod sweep;

pub use brute::{verify_bruteforce, verify_bruteforce_with, BRUTE_DEFAULT_MAX, BRUTE_OPT_IN_MAX};
pub use certificate::{
    final_case_certificate, final_case_instance, CertificateReport, CertificateRow,
    FinalCaseInstance, InstanceCheck, THIN_MARGIN,
};
pub use rooted::{rooted_bound_check, rooted_synthetic, RootedReport};
pub use suite::{
    lemma_suite, LemmaResult, SuiteReport, SUITE_FULL_CLASS_MAX, SUITE_MAX_ORDER, SUITE_NONSYM_RHO_MAX,
};
pub use sweep::{sweep_sym, verify_staircase, STAIRCASE_CROSS_CHECK_MAX};

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::{predicted_best_q, rho0_closed};
use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::staircase::{SimpleGraph, StaircaseMatrix};

/// Tolerance on the gap between the observed maximum and the closed form,
/// and the window for collecting maximizers.
pub const GAP_TOL: f64 = 1e-9;
/// Grid used to round spectra in fingerprints.
pub const FINGERPRINT_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    AllGraphs,
    StaircaseSym,
}

/// Sorted degree sequence plus spectrum rounded to [`FINGERPRINT_STEP`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub degrees: Vec<usize>,
    pub spectrum: Vec<i64>,
}

pub fn fingerprint(g: &SimpleGraph) -> Result<Fingerprint> {
    let mut degrees = g.degrees();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let mut spectrum: Vec<i64> = sym_eigenvalues(&g.adjacency())?
        .into_iter()
        .map(|x| (x / FINGERPRINT_STEP).round() as i64)
        .collect();
    spectrum.sort_unstable();
    Ok(Fingerprint { degrees, spectrum })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    /// Family name, or `unexpected` when it matches no conjectured family.
    pub label: String,
    /// A representative, in graph6.
    pub graph6: String,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub search_space: SearchSpace,
    pub max_value: f64,
    pub arg_max: Vec<Maximizer>,
    pub rho0_expected: f64,
    /// `max_value - rho0_expected`.
    pub gap: f64,
    pub counterexamples: Vec<String>,
    pub instances_checked: u64,
    /// Maximum over all graphs, when it was computed as a cross-check.
    pub all_graphs_max: Option<f64>,
    pub elapsed: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// The conjectured extremal graphs of order `n`, with labels.
pub fn conjectured_families(n: usize) -> Result<Vec<(String, SimpleGraph)>> {
    let mut out = Vec::new();
    for q in predicted_best_q(n) {
        let g = SimpleGraph::from_staircase(&StaircaseMatrix::split_graph(n, q)?)?;
        out.push((format!("K_{q} v N_{}", n - q), g.clone()));
        out.push((format!("K_{} + N_{q}", n - q), g.complement()));
    }
    Ok(out)
}

/// Running maximum of `rho + rho_bar` with every candidate within
/// [`GAP_TOL`] of it. Candidates carry a sort key so merged results do not
/// depend on chunking.
#[derive(Clone, Debug)]
pub(crate) struct Best<K> {
    pub value: f64,
    pub hits: Vec<(K, f64)>,
}

impl<K: Ord> Best<K> {
    pub fn new() -> Self {
        Best {
            value: f64::NEG_INFINITY,
            hits: Vec::new(),
        }
    }

    pub fn offer(&mut self, key: K, value: f64) {
        if value > self.value {
            self.value = value;
            let floor = value - GAP_TOL;
            self.hits.retain(|h| h.1 >= floor);
        }
        if value >= self.value - GAP_TOL {
            self.hits.push((key, value));
        }
    }

    pub fn merge(mut self, other: Best<K>) -> Self {
        for (k, v) in other.hits {
            self.offer(k, v);
        }
        self.hits.sort_by(|a, b| a.0.cmp(&b.0));
        self
    }
}

/// Groups maximizer graphs by fingerprint, labels them against the
/// conjectured families and lists every discrepancy.
pub(crate) fn classify(
    n: usize,
    max_value: f64,
    graphs: impl IntoIterator<Item = SimpleGraph>,
) -> Result<(Vec<Maximizer>, Vec<String>, f64)> {
    let rho0 = rho0_closed(n)?;
    let mut expected = BTreeMap::new();
    for (label, g) in conjectured_families(n)? {
        expected.insert(fingerprint(&g)?, label);
    }
    let mut seen: BTreeMap<Fingerprint, Maximizer> = BTreeMap::new();
    let mut order = Vec::new();
    for g in graphs {
        let fp = fingerprint(&g)?;
        if seen.contains_key(&fp) {
            continue;
        }
        let label = expected
            .get(&fp)
            .cloned()
            .unwrap_or_else(|| "unexpected".to_string());
        order.push(fp.clone());
        seen.insert(
            fp,
            Maximizer {
                label,
                graph6: g.to_graph6(),
                degrees: g.degrees(),
            },
        );
    }
    let mut counterexamples = Vec::new();
    let gap = max_value - rho0;
    if gap.abs() > GAP_TOL {
        counterexamples.push(format!(
            "maximum {max_value:.12} differs from rho0 = {rho0:.12} by {gap:.3e}"
        ));
    }
    for fp in &order {
        let m = &seen[fp];
        if m.label == "unexpected" {
            counterexamples.push(format!("unexpected maximizer {}", m.graph6));
        }
    }
    for (fp, label) in &expected {
        if !seen.contains_key(fp) {
            counterexamples.push(format!("conjectured family {label} not among maximizers"));
        }
    }
    let arg_max = order.into_iter().map(|fp| seen.remove(&fp).unwrap()).collect();
    Ok((arg_max, counterexamples, gap))
}

/// Writes one CSV row per report.
pub fn write_verify_csv<W: Write>(out: W, reports: &[VerifyReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "search_space",
        "max_value",
        "rho0_expected",
        "gap",
        "maximizers",
        "counterexamples",
        "instances_checked",
    ])
    .map_err(csv_err)?;
    for r in reports {
        let space = match r.search_space {
            SearchSpace::AllGraphs => "all_graphs",
            SearchSpace::StaircaseSym => "staircase_sym",
        };
        let labels: Vec<&str> = r.arg_max.iter().map(|m| m.label.as_str()).collect();
        w.write_record([
            r.n.to_string(),
            space.to_string(),
            r.max_value.to_string(),
            r.rho0_expected.to_string(),
            r.gap.to_string(),
            labels.join("; "),
            r.counterexamples.len().to_string(),
            r.instances_checked.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Output(e.to_string())
}
