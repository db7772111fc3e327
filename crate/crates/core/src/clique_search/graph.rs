use serde::{Deserialize, Serialize};

use super::bitset::BitSet;
use super::CliqueError;

/// Largest ground set handled (subsets are `u32` masks).
pub const MAX_N: usize = 24;
/// Largest vertex count; adjacency is quadratic in this.
pub const MAX_VERTICES: usize = 16_384;

/// Adjacency rule between two k-subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "distance", rename_all = "snake_case")]
pub enum Mode {
    /// Distance exactly `d`; `Exact(2i)` is the generalized Johnson graph J(n,k,i).
    Exact(usize),
    /// Distance at least `d`; cliques are `(n,k,d)` codes.
    AtLeast(usize),
}

impl Mode {
    pub fn distance(self) -> usize {
        match self {
            Mode::Exact(d) | Mode::AtLeast(d) => d,
        }
    }

    pub fn admits(self, distance: usize) -> bool {
        match self {
            Mode::Exact(d) => distance == d,
            Mode::AtLeast(d) => distance >= d,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    n: usize,
    k: usize,
    mode: Mode,
    vertices: Vec<u32>,
    adj: Vec<BitSet>,
}

/// All k-subsets of `0..n` as bitmasks, in lexicographic order of their
/// sorted index lists.
pub fn lex_subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(n: usize, k: usize, start: usize, mask: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for i in start..=n - k {
            rec(n, k - 1, i + 1, mask | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 0, 0, &mut out);
    }
    out
}

pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

impl CompatibilityGraph {
    pub fn build(n: usize, k: usize, mode: Mode) -> Result<Self, CliqueError> {
        let d = mode.distance();
        if k == 0 || k > n || d == 0 || d % 2 == 1 {
            return Err(CliqueError::BadParameters { n, k, d });
        }
        if n > MAX_N {
            return Err(CliqueError::SizeLimit {
                what: "n",
                value: n,
                limit: MAX_N,
            });
        }
        let vertices = lex_subsets(n, k);
        let v = vertices.len();
        if v > MAX_VERTICES {
            return Err(CliqueError::SizeLimit {
                what: "vertices",
                value: v,
                limit: MAX_VERTICES,
            });
        }
        let mut adj = vec![BitSet::new(v); v];
        for i in 0..v {
            for j in (i + 1)..v {
                let dist = (vertices[i] ^ vertices[j]).count_ones() as usize;
                if mode.admits(dist) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Ok(CompatibilityGraph {
            n,
            k,
            mode,
            vertices,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// The k-subset of vertex `v` as a bitmask.
    pub fn vertex_mask(&self, v: usize) -> u32 {
        self.vertices[v]
    }

    pub fn vertex_indices(&self, v: usize) -> Vec<usize> {
        mask_indices(self.vertices[v])
    }

    pub fn vertex_of(&self, indices: &[usize]) -> Option<usize> {
        let mask = indices.iter().try_fold(0u32, |m, &i| (i < self.n).then(|| m | 1 << i))?;
        self.vertices.binary_search_by(|&v| lex_cmp(v, mask)).ok()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| {
            a < self.vertex_count() && vs[i + 1..].iter().all(|&b| self.adjacent(a, b))
        })
    }
}

/// Lexicographic comparison of two masks as sorted index lists.
fn lex_cmp(a: u32, b: u32) -> std::cmp::Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return std::cmp::Ordering::Equal,
            (true, false) => return std::cmp::Ordering::Less,
            (false, true) => return std::cmp::Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}
