use serde::{Deserialize, Serialize};

use super::{par_map, ExperimentConfig};
use crate::error::Result;
use crate::lattice::{Point, Region};
use crate::passage::{envelope, geodesic_dag, max_weight_stats};
use crate::weights::prf::derive_seed;
use crate::weights::WeightConfig;

/// One replica of `0 -> N e_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub replica: usize,
    pub seed: u64,
    pub time: f64,
    pub max_m: f64,
    pub min_m: f64,
    pub dag_edges: usize,
    pub boundary_reached: bool,
    pub touches_boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub rows: Vec<SimulateRow>,
}

pub(super) fn run(cfg: &ExperimentConfig, n_list: &[u64]) -> Result<SimulateReport> {
    let jobs: Vec<(u64, usize)> = n_list.iter().flat_map(|&n| (0..cfg.samples).map(move |i| (n, i))).collect();
    let rows = par_map(jobs, |(n, replica)| {
        let seed = derive_seed(cfg.master_seed, &[n, replica as u64]);
        let weights = WeightConfig::new(cfg.dist, seed)?;
        let (v, w) = (Point::origin(cfg.d), Point::axis(cfg.d, 0, n as i64));
        let env = Region::Box(envelope(&v, &w, cfg.envelope_k)?);
        let dag = geodesic_dag(&weights, v, w, &env)?;
        let st = max_weight_stats(&dag)?;
        Ok(SimulateRow {
            n,
            replica,
            seed,
            time: dag.time(),
            max_m: st.max_over_geodesics,
            min_m: st.min_over_geodesics,
            dag_edges: dag.edges().len(),
            boundary_reached: dag.boundary_reached(),
            touches_boundary: dag.touches_boundary(),
        })
    })?;
    Ok(SimulateReport { rows })
}
