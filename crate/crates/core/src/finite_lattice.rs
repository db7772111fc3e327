//! Explicit finite lattices given by Hasse diagrams.
//!
//! Elements are addressed by index (`usize`) in the order they were declared.
//! Meets and joins are tabulated at construction, so every query after that
//! is a lookup.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on `m` for the sublattice scan.
pub const DEFAULT_SCAN_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("cover relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("`{a}` and `{b}` have no greatest lower bound")]
    NoMeet { a: String, b: String },
    #[error("`{a}` and `{b}` have no least upper bound")]
    NoJoin { a: String, b: String },
    #[error("lattice has {m} elements, scan limit is {limit}")]
    SizeLimit { m: usize, limit: usize },
    #[error("inconsistent multiplication table: {0}")]
    InconsistentTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    upper: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
}

impl FiniteLattice {
    /// Builds a lattice from labels and `(lower, upper)` cover pairs.
    ///
    /// Redundant pairs (already implied by transitivity) are accepted; the
    /// Hasse diagram is recomputed from the closure.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self, LatticeError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| LatticeError::UnknownLabel(s.as_ref().to_string()))
        };
        let pairs = covers
            .iter()
            .map(|(lo, hi)| Ok((lookup(lo)?, lookup(hi)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::build(labels, &pairs)
    }

    /// Builds a lattice on `0..m` with labels `"0"`, `"1"`, ...
    pub fn from_order(m: usize, relations: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let labels = (0..m).map(|i| i.to_string()).collect();
        if let Some(&(a, b)) = relations.iter().find(|&&(a, b)| a >= m || b >= m) {
            return Err(LatticeError::UnknownLabel(a.max(b).to_string()));
        }
        Self::build(labels, relations)
    }

    fn build(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let m = labels.len();
        if m == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![vec![false; m]; m];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a == b {
                return Err(LatticeError::Cycle(labels[a].clone()));
            }
            leq[a][b] = true;
        }
        for k in 0..m {
            for i in 0..m {
                if leq[i][k] {
                    for j in 0..m {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if leq[i][j] && leq[j][i] {
                    return Err(LatticeError::Cycle(labels[i].clone()));
                }
            }
        }

        // Number of elements below x orders any linear extension.
        let height: Vec<usize> = (0..m).map(|x| (0..m).filter(|&y| leq[y][x]).count()).collect();
        let mut meet = vec![vec![0; m]; m];
        let mut join = vec![vec![0; m]; m];
        for a in 0..m {
            for b in a..m {
                let lower: Vec<usize> = (0..m).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let g = lower.iter().copied().max_by_key(|&c| height[c]);
                match g {
                    Some(g) if lower.iter().all(|&c| leq[c][g]) => {
                        meet[a][b] = g;
                        meet[b][a] = g;
                    }
                    _ => {
                        return Err(LatticeError::NoMeet {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                        })
                    }
                }
                let upper: Vec<usize> = (0..m).filter(|&c| leq[a][c] && leq[b][c]).collect();
                let l = upper.iter().copied().min_by_key(|&c| height[c]);
                match l {
                    Some(l) if upper.iter().all(|&c| leq[l][c]) => {
                        join[a][b] = l;
                        join[b][a] = l;
                    }
                    _ => {
                        return Err(LatticeError::NoJoin {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                        })
                    }
                }
            }
        }
        let top = (0..m).fold(0, |acc, x| join[acc][x]);
        let bottom = (0..m).fold(0, |acc, x| meet[acc][x]);

        let upper = (0..m)
            .map(|x| {
                (0..m)
                    .filter(|&y| {
                        y != x
                            && leq[x][y]
                            && !(0..m).any(|z| z != x && z != y && leq[x][z] && leq[z][y])
                    })
                    .collect()
            })
            .collect();

        Ok(FiniteLattice {
            labels,
            leq,
            upper,
            meet,
            join,
            top,
            bottom,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// True iff `hi` covers `lo`.
    pub fn covers(&self, lo: usize, hi: usize) -> bool {
        self.upper[lo].contains(&hi)
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// Hasse diagram as `(lower, upper)` index pairs.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.upper[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Meet of a set; the empty meet is top.
    pub fn meet_all(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.top, |acc, &x| self.meet[acc][x])
    }

    /// Elements other than top with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| x != self.top && self.upper[x].len() == 1)
            .collect()
    }

    /// All irredundant sets of meet-irreducibles whose meet is `x`.
    ///
    /// An irredundant set is an antichain, so the search only extends
    /// antichains. Each result is sorted; the list is sorted.
    pub fn irreducible_decompositions(&self, x: usize) -> Vec<Vec<usize>> {
        let cands: Vec<usize> = self
            .meet_irreducibles()
            .into_iter()
            .filter(|&c| self.leq[x][c])
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.extend_antichain(x, &cands, 0, &mut chosen, &mut out);
        out.sort();
        out
    }

    fn extend_antichain(
        &self,
        x: usize,
        cands: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if self.meet_all(chosen) == x && self.is_irredundant(x, chosen) {
            out.push(chosen.clone());
        }
        for i in from..cands.len() {
            let c = cands[i];
            if chosen.iter().any(|&s| self.leq[s][c] || self.leq[c][s]) {
                continue;
            }
            chosen.push(c);
            self.extend_antichain(x, cands, i + 1, chosen, out);
            chosen.pop();
        }
    }

    fn is_irredundant(&self, x: usize, set: &[usize]) -> bool {
        (0..set.len()).all(|skip| {
            let rest = set
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(self.top, |acc, (_, &s)| self.meet[acc][s]);
            rest != x
        })
    }

    /// Upper semimodularity: if `a` covers `a∧b` then `a∨b` covers `b`.
    pub fn is_birkhoff(&self) -> bool {
        let m = self.len();
        (0..m).all(|a| {
            (0..m).all(|b| !self.covers(self.meet[a][b], a) || self.covers(b, self.join[a][b]))
        })
    }

    /// True iff no sublattice is a diamond M3.
    pub fn modular_sublattices_distributive(&self, limit: usize) -> Result<bool, LatticeError> {
        let m = self.len();
        if m > limit {
            return Err(LatticeError::SizeLimit { m, limit });
        }
        Ok(self.find_diamond().is_none())
    }

    /// Three distinct elements with a common pairwise meet and join.
    pub fn find_diamond(&self) -> Option<[usize; 3]> {
        let m = self.len();
        for x in 0..m {
            for y in (x + 1)..m {
                let (lo, hi) = (self.meet[x][y], self.join[x][y]);
                if lo == x || lo == y {
                    continue;
                }
                for z in (y + 1)..m {
                    if self.meet[x][z] == lo
                        && self.meet[y][z] == lo
                        && self.join[x][z] == hi
                        && self.join[y][z] == hi
                    {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    /// A pentagon N5 as `[bottom, x, y, z, top]` with `x < y` and `z` off the chain.
    pub fn find_pentagon(&self) -> Option<[usize; 5]> {
        let m = self.len();
        for x in 0..m {
            for y in 0..m {
                if x == y || !self.leq[x][y] {
                    continue;
                }
                for z in 0..m {
                    let (o, i) = (self.meet[y][z], self.join[x][z]);
                    if self.meet[x][z] == o
                        && self.join[y][z] == i
                        && z != o
                        && z != i
                        && x != o
                        && y != i
                    {
                        return Some([o, x, y, z, i]);
                    }
                }
            }
        }
        None
    }

    /// Evaluates both sides of the unique-decomposition theorem.
    pub fn unique_decomposition_theorem_check(
        &self,
        limit: usize,
    ) -> Result<TheoremReport, LatticeError> {
        let m3_free = self.modular_sublattices_distributive(limit)?;
        let birkhoff = self.is_birkhoff();
        let non_unique: Vec<String> = (0..self.len())
            .filter(|&x| self.irreducible_decompositions(x).len() != 1)
            .map(|x| self.labels[x].clone())
            .collect();
        let unique = non_unique.is_empty();
        Ok(TheoremReport {
            unique_decompositions: unique,
            birkhoff,
            modular_sublattices_distributive: m3_free,
            agrees: unique == (birkhoff && m3_free),
            non_unique,
        })
    }

    /// Chain `0 < 1 < ... < m-1`.
    pub fn chain(m: usize) -> Result<Self, LatticeError> {
        let rel: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
        Self::from_order(m, &rel)
    }

    /// Boolean lattice of subsets of `{a, b, c, ...}` with `k` generators.
    pub fn boolean(k: usize) -> Result<Self, LatticeError> {
        let m = 1usize << k;
        let labels: Vec<String> = (0..m)
            .map(|s| {
                if s == 0 {
                    "0".to_string()
                } else {
                    (0..k)
                        .filter(|i| s >> i & 1 == 1)
                        .map(|i| (b'a' + i as u8) as char)
                        .collect()
                }
            })
            .collect();
        let mut rel = Vec::new();
        for s in 0..m {
            for i in 0..k {
                if s >> i & 1 == 0 {
                    rel.push((s, s | 1 << i));
                }
            }
        }
        Self::build(labels, &rel)
    }

    /// Diamond: `0 < x, y, z < 1`.
    pub fn diamond() -> Self {
        let e = ["0", "x", "y", "z", "1"];
        let c = [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")];
        Self::new(&e, &c).expect("diamond is a lattice")
    }

    /// Pentagon: `0 < x < y < 1` and `0 < z < 1`.
    pub fn pentagon() -> Self {
        let e = ["0", "x", "y", "z", "1"];
        let c = [("0", "x"), ("x", "y"), ("y", "1"), ("0", "z"), ("z", "1")];
        Self::new(&e, &c).expect("pentagon is a lattice")
    }

    /// Non-Noether example with unique irreducible decompositions.
    ///
    /// Order: `e < b < a`, `e < f`, `b < c`, `f < c`, `f < d`, and `a, c, d < 1`.
    /// Multiplication: `xy = b` on `{a, b}`, `xy = e` whenever one factor is
    /// in `{c, d, e, f}`, and `1` is the unit. `d` is irreducible and
    /// `d ≥ e = bc`, yet `d` is above neither `c` nor any power of `b`.
    pub fn example_non_noether() -> (Self, MultiplicationTable) {
        let e = ["e", "b", "a", "c", "d", "f", "1"];
        let c = [
            ("e", "b"),
            ("e", "f"),
            ("b", "a"),
            ("b", "c"),
            ("f", "c"),
            ("f", "d"),
            ("a", "1"),
            ("c", "1"),
            ("d", "1"),
        ];
        let lattice = Self::new(&e, &c).expect("example is a lattice");
        let rows: Vec<Vec<&str>> = e
            .iter()
            .map(|&x| {
                e.iter()
                    .map(|&y| match (x, y) {
                        ("1", y) => y,
                        (x, "1") => x,
                        ("a" | "b", "a" | "b") => "b",
                        _ => "e",
                    })
                    .collect()
            })
            .collect();
        let table = MultiplicationTable::from_labels(&lattice, &rows).expect("example table is consistent");
        (lattice, table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub unique_decompositions: bool,
    pub birkhoff: bool,
    pub modular_sublattices_distributive: bool,
    pub agrees: bool,
    pub non_unique: Vec<String>,
}

/// Commutative multiplication on a lattice with `xy ≤ x∧y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    product: Vec<Vec<usize>>,
}

impl MultiplicationTable {
    pub fn new(lattice: &FiniteLattice, product: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let m = lattice.len();
        if product.len() != m || product.iter().any(|r| r.len() != m) {
            return Err(LatticeError::InconsistentTable(format!("table must be {m}x{m}")));
        }
        for x in 0..m {
            for y in 0..m {
                let xy = product[x][y];
                if xy >= m {
                    return Err(LatticeError::InconsistentTable(format!(
                        "entry ({x},{y}) out of range"
                    )));
                }
                if xy != product[y][x] {
                    return Err(LatticeError::InconsistentTable(format!(
                        "{}*{} != {}*{}",
                        lattice.label(x),
                        lattice.label(y),
                        lattice.label(y),
                        lattice.label(x)
                    )));
                }
                if !lattice.leq(xy, lattice.meet(x, y)) {
                    return Err(LatticeError::InconsistentTable(format!(
                        "{}*{} = {} is not below {}",
                        lattice.label(x),
                        lattice.label(y),
                        lattice.label(xy),
                        lattice.label(lattice.meet(x, y))
                    )));
                }
            }
        }
        Ok(MultiplicationTable { product })
    }

    pub fn from_labels<S: AsRef<str>>(
        lattice: &FiniteLattice,
        rows: &[Vec<S>],
    ) -> Result<Self, LatticeError> {
        let product = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        lattice
                            .index_of(s.as_ref())
                            .ok_or_else(|| LatticeError::UnknownLabel(s.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lattice, product)
    }

    /// Multiplication equal to meet.
    pub fn meet_table(lattice: &FiniteLattice) -> Self {
        let m = lattice.len();
        MultiplicationTable {
            product: (0..m).map(|x| (0..m).map(|y| lattice.meet(x, y)).collect()).collect(),
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.product[x][y]
    }

    /// Distinct powers `b, b², ...` up to the first repeat.
    pub fn powers(&self, b: usize) -> Vec<usize> {
        let mut seen = Vec::new();
        let mut cur = b;
        while !seen.contains(&cur) {
            seen.push(cur);
            cur = self.product[cur][b];
        }
        seen
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.product
    }

    /// `p ≥ ab ⇒ p ≥ a or p ≥ b`.
    pub fn check_prime(&self, lattice: &FiniteLattice, p: usize) -> bool {
        let m = lattice.len();
        (0..m).all(|a| {
            (0..m).all(|b| {
                !lattice.leq(self.product[a][b], p) || lattice.leq(a, p) || lattice.leq(b, p)
            })
        })
    }

    /// `q ≥ ab, q ≱ a ⇒ q ≥ b^s` for some `s ≥ 1`.
    pub fn check_primary(&self, lattice: &FiniteLattice, q: usize) -> bool {
        let m = lattice.len();
        (0..m).all(|a| {
            (0..m).all(|b| {
                !lattice.leq(self.product[a][b], q)
                    || lattice.leq(a, q)
                    || self.powers(b).iter().any(|&bs| lattice.leq(bs, q))
            })
        })
    }
}

/// Lattice file: `{"elements": [...], "covers": [[lo, hi], ...], "mult": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<Vec<String>>>,
}

impl LatticeFile {
    pub fn build(&self) -> Result<(FiniteLattice, Option<MultiplicationTable>), LatticeError> {
        let lattice = FiniteLattice::new(&self.elements, &self.covers)?;
        let table = match &self.mult {
            Some(rows) => Some(MultiplicationTable::from_labels(&lattice, rows)?),
            None => None,
        };
        Ok((lattice, table))
    }

    pub fn from_lattice(lattice: &FiniteLattice, table: Option<&MultiplicationTable>) -> Self {
        let l = |x: usize| lattice.label(x).to_string();
        LatticeFile {
            elements: lattice.labels().to_vec(),
            covers: lattice.cover_pairs().into_iter().map(|(a, b)| (l(a), l(b))).collect(),
            mult: table.map(|t| t.rows().iter().map(|r| r.iter().map(|&x| l(x)).collect()).collect()),
        }
    }
}

/// Per-element analysis used by reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementReport {
    pub element: String,
    pub irreducible: bool,
    pub decompositions: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary: Option<bool>,
}

pub fn element_reports(
    lattice: &FiniteLattice,
    table: Option<&MultiplicationTable>,
) -> Vec<ElementReport> {
    let irr = lattice.meet_irreducibles();
    (0..lattice.len())
        .map(|x| ElementReport {
            element: lattice.label(x).to_string(),
            irreducible: irr.contains(&x),
            decompositions: lattice
                .irreducible_decompositions(x)
                .into_iter()
                .map(|d| d.into_iter().map(|i| lattice.label(i).to_string()).collect())
                .collect(),
            prime: table.map(|t| t.check_prime(lattice, x)),
            primary: table.map(|t| t.check_primary(lattice, x)),
        })
        .collect()
}

/// Maps labels to indices; handy for callers holding label strings.
pub fn label_index(lattice: &FiniteLattice) -> BTreeMap<String, usize> {
    lattice
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect()
}
