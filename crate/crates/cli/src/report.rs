use std::fmt::Write as _;

use afd_core::{Dataset, Guarantee, SearchStats, TopKResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternRow {
    pub attributes: Vec<String>,
    pub indices: Vec<usize>,
    pub f_hat: f64,
    pub b0: f64,
    pub f0: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub bins: usize,
    pub seed: u64,
    pub budget_seconds: Option<f64>,
    pub parallel: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscoveryReport {
    pub dataset: String,
    pub n: usize,
    pub d: usize,
    pub target: String,
    pub k: usize,
    pub alpha: f64,
    pub guarantee: Guarantee,
    pub patterns: Vec<PatternRow>,
    pub stats: SearchStats,
    pub config: RunConfig,
}

impl DiscoveryReport {
    pub fn new(dataset: &Dataset, result: &TopKResult, stats: SearchStats, config: RunConfig) -> Self {
        let patterns = result
            .patterns
            .iter()
            .map(|p| PatternRow {
                attributes: dataset.attribute_names(&p.attrs),
                indices: p.attrs.indices().to_vec(),
                f_hat: p.f_hat,
                b0: p.b0,
                f0: p.f0,
                depth: p.attrs.len(),
            })
            .collect();
        DiscoveryReport {
            dataset: dataset.name().to_string(),
            n: dataset.n(),
            d: dataset.d(),
            target: dataset.target().name().to_string(),
            k: result.k,
            alpha: result.alpha,
            guarantee: result.guarantee,
            patterns,
            stats,
            config,
        }
    }

    /// One row per pattern; run-level fields repeat on every row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "rank\tattributes\tdepth\tf_hat\tb0\tf0\tdataset\tn\td\ttarget\tk\talpha\tguarantee\t\
             bins\tseed\tbudget_seconds\tnodes_expanded\tnodes_enqueued\tnodes_pruned\tnodes_scored\t\
             max_depth_explored\tsolution_depth\twall_time\tpruned_fraction\n",
        );
        let s = &self.stats;
        let budget = self
            .config
            .budget_seconds
            .map_or_else(|| "none".to_string(), |b| b.to_string());
        for (rank, p) in self.patterns.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                rank + 1,
                p.attributes.join(","),
                p.depth,
                p.f_hat,
                p.b0,
                p.f0,
                self.dataset,
                self.n,
                self.d,
                self.target,
                self.k,
                self.alpha,
                self.guarantee.as_str(),
                self.config.bins,
                self.config.seed,
                budget,
                s.nodes_expanded,
                s.nodes_enqueued,
                s.nodes_pruned,
                s.nodes_scored,
                s.max_depth_explored,
                s.solution_depth,
                s.wall_time,
                s.pruned_fraction
            );
        }
        out
    }
}
