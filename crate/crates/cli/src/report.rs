//! Machine-readable reports. Field order is fixed by the structs and all
//! sets are sorted, so reports are byte-identical across runs of the same
//! query (timing is opt-in for that reason).

use serde::Serialize;

use strata_core::algebra::MonoidDump;
use strata_core::basis::Basis;
use strata_core::bpol::SatSet;
use strata_core::decide::{Iterations, Sizes, Verdict};
use strata_core::pol::PointedImprint;
use strata_core::rating::Antichain;

#[derive(Debug, Serialize)]
pub struct Report {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_value: Option<Vec<String>>,
    pub sizes: Sizes,
    pub iterations: Iterations,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pol_imprint: Option<PolImprintDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bpol_imprint: Option<BpolImprintDump>,
}

impl Report {
    pub fn from_verdict(verdict: &Verdict) -> Report {
        Report {
            verdict: verdict.answer.as_str().to_string(),
            bad_value: verdict.bad_value.as_ref().map(|bad| bad.labels.clone()),
            sizes: verdict.sizes,
            iterations: verdict.iterations,
            wall_ms: None,
            monoid: None,
            pol_imprint: None,
            bpol_imprint: None,
        }
    }

    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub oracle: String,
    pub result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl OracleReport {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Antichain of maximal rating values, each as a sorted element-index array.
fn antichain_values(chain: &Antichain) -> Vec<Vec<usize>> {
    chain
        .maximal()
        .iter()
        .map(|v| v.elements().collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BpolImprintDump {
    pub classes: Vec<BpolImprintEntry>,
}

#[derive(Debug, Serialize)]
pub struct BpolImprintEntry {
    pub class: String,
    pub values: Vec<Vec<usize>>,
}

impl BpolImprintDump {
    pub fn new(basis: &Basis, imprint: &SatSet) -> BpolImprintDump {
        BpolImprintDump {
            classes: (0..imprint.class_count())
                .map(|d| BpolImprintEntry {
                    class: basis.class_label(d).to_string(),
                    values: antichain_values(imprint.values(d)),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PolImprintDump {
    pub elements: Vec<PolImprintEntry>,
}

#[derive(Debug, Serialize)]
pub struct PolImprintEntry {
    pub element: String,
    pub values: Vec<Vec<usize>>,
}

impl PolImprintDump {
    pub fn new(labels: &[String], imprint: &PointedImprint) -> PolImprintDump {
        PolImprintDump {
            elements: (0..imprint.element_count())
                .map(|s| PolImprintEntry {
                    element: labels[s].clone(),
                    values: antichain_values(imprint.values(s)),
                })
                .collect(),
        }
    }
}
