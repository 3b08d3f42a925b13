//! JSON report for a factor map.
//!
//! ```text
//! {"target_levels":[2,4],"labels":{"0":[0,0],"1":[1,1],...},"fibers":[[0,4],...],"maximal":false,"sigma_top":"2^2"}
//! ```
//!
//! Keys appear in the order above and `labels` is keyed by point id in
//! numeric order, so equal inputs give byte-identical output.

use adic_core::projection::sigma_of_system;
use adic_core::FactorMap;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorMapReport {
    pub target_levels: Vec<u64>,
    pub labels: Labels,
    pub fibers: Vec<Vec<usize>>,
    pub maximal: bool,
    pub sigma_top: String,
}

/// Residue vector of every point, indexed by point id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels(pub Vec<Vec<u64>>);

impl Serialize for Labels {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().enumerate().map(|(x, l)| (x.to_string(), l)))
    }
}

impl FactorMapReport {
    pub fn new(map: &FactorMap<'_>) -> Self {
        FactorMapReport {
            target_levels: map.target().levels().to_vec(),
            labels: Labels(map.labels().iter().map(|a| a.residues().to_vec()).collect()),
            fibers: map.fibers(),
            maximal: map.is_maximal(),
            sigma_top: sigma_of_system(map.source()).top.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
