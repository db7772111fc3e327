use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;

/// Parameters of a random layered DAG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyConfig {
    pub layers: usize,
    pub width: usize,
    #[serde(alias = "indegree")]
    pub max_indegree: usize,
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_density() -> f64 {
    0.5
}

/// Layered DAG with a single source (layer 0) and a single sink (last layer).
/// Node ids increase with the layer; edges are sorted by `(dst, src)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTopology {
    layer_sizes: Vec<usize>,
    edges: Vec<(usize, usize)>,
    max_indegree: usize,
}

impl NetworkTopology {
    pub fn new(
        layer_sizes: Vec<usize>,
        mut edges: Vec<(usize, usize)>,
        max_indegree: usize,
    ) -> Result<Self, SimError> {
        let bad = |msg: String| Err(SimError::Topology(msg));
        if layer_sizes.len() < 2 {
            return bad("need at least two layers".into());
        }
        if layer_sizes[0] != 1 || *layer_sizes.last().unwrap() != 1 {
            return bad("source and sink layers must hold one node each".into());
        }
        if layer_sizes.contains(&0) {
            return bad("empty layer".into());
        }
        let layer_of: Vec<usize> = layer_sizes
            .iter()
            .enumerate()
            .flat_map(|(l, &s)| std::iter::repeat_n(l, s))
            .collect();
        let m = layer_of.len();
        edges.sort_by_key(|&(s, d)| (d, s));
        edges.dedup();
        let mut indeg = vec![0usize; m];
        for &(s, d) in &edges {
            if s >= m || d >= m {
                return bad(format!("edge ({s},{d}) names a missing node"));
            }
            if layer_of[s] >= layer_of[d] {
                return bad(format!("edge ({s},{d}) does not go to a later layer"));
            }
            indeg[d] += 1;
        }
        for (v, &deg) in indeg.iter().enumerate().skip(1) {
            if deg == 0 || deg > max_indegree {
                return bad(format!("node {v} has in-degree {deg}, allowed 1..={max_indegree}"));
            }
        }
        Ok(NetworkTopology {
            layer_sizes,
            edges,
            max_indegree,
        })
    }

    /// Random layered DAG. Every non-source node draws one predecessor from
    /// the previous layer, then each other node of that layer joins with
    /// probability `density` while the in-degree allows.
    pub fn random(cfg: &TopologyConfig) -> Result<Self, SimError> {
        if cfg.layers < 2 || cfg.width == 0 || cfg.max_indegree == 0 {
            return Err(SimError::Topology(format!(
                "infeasible parameters layers={}, width={}, max_indegree={}",
                cfg.layers, cfg.width, cfg.max_indegree
            )));
        }
        if !(0.0..=1.0).contains(&cfg.density) {
            return Err(SimError::BadProbability(cfg.density));
        }
        let mut sizes = vec![1];
        sizes.extend(std::iter::repeat_n(cfg.width, cfg.layers - 2));
        sizes.push(1);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut edges = Vec::new();
        let mut start = 0;
        for l in 1..sizes.len() {
            let prev: Vec<usize> = (start..start + sizes[l - 1]).collect();
            let first = start + sizes[l - 1];
            for v in first..first + sizes[l] {
                let must = prev[rng.gen_range(0..prev.len())];
                let mut deg = 1;
                edges.push((must, v));
                for &u in &prev {
                    if u != must && deg < cfg.max_indegree && rng.gen_bool(cfg.density) {
                        edges.push((u, v));
                        deg += 1;
                    }
                }
            }
            start = first;
        }
        Self::new(sizes, edges, cfg.max_indegree)
    }

    pub fn node_count(&self) -> usize {
        self.layer_sizes.iter().sum()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.node_count() - 1
    }

    pub fn max_indegree(&self) -> usize {
        self.max_indegree
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incoming edges of `v`, in edge order.
    pub fn incoming(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied().filter(move |&(_, d)| d == v)
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.incoming(v).count()
    }

    pub fn sink_edges(&self) -> Vec<(usize, usize)> {
        self.incoming(self.sink()).collect()
    }
}
