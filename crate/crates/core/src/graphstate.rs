//! Graph-state data model: bipartition handling, graph family
//! constructors, the row-structure classifier that routes to closed
//! forms, and the text graph file format.

use std::collections::BTreeSet;
use std::fmt;

use crate::gf2::BitMatrix;
use crate::{Error, Result};

/// One side of the bipartition. Alice owns the low vertex indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// Probability `P` that a qubit stays in `|+>` before the CZ gates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "noise probability P must be in [0, 1], got {p}"
            )));
        }
        Ok(NoiseModel { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Graph state with a bipartition: Alice owns vertices `0..n_a`, Bob
/// owns `n_a..n_a + n_b`. Edges are unordered pairs without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraphState {
    n_a: usize,
    n_b: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraphState {
    pub fn new(
        n_a: usize,
        n_b: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = n_a + n_b;
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(BipartiteGraphState { n_a, n_b, edges: set })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn n(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn n_side(&self, side: Side) -> usize {
        match side {
            Side::A => self.n_a,
            Side::B => self.n_b,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Cross-edge biadjacency matrix: entry `(i, j)` is 1 iff Alice's
    /// qubit `i` shares an edge with Bob's qubit `j`. Local edges are
    /// excluded; local CZ gates are local unitaries and cannot change
    /// the coherent information (the [`crate::oracle`] module sees them).
    pub fn biadjacency(&self) -> BitMatrix {
        BitMatrix::from_fn(self.n_a, self.n_b, |i, j| self.has_edge(i, self.n_a + j))
    }

    /// True if every vertex is reachable from vertex 0 through edges
    /// (local edges included).
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Complete bipartite graph: every Alice vertex joined to every Bob
    /// vertex, no local edges.
    pub fn complete_bipartite(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::InvalidGraph(
                "complete bipartite graph needs at least one vertex per side".into(),
            ));
        }
        let edges = (0..n_a).flat_map(|i| (0..n_b).map(move |j| (i, n_a + j)));
        BipartiteGraphState::new(n_a, n_b, edges)
    }

    /// Star graph: complete bipartite with one side usually of size 1.
    /// The biadjacency matrix is all ones, hence rank 1.
    pub fn star(n_a: usize, n_b: usize) -> Result<Self> {
        Self::complete_bipartite(n_a, n_b)
    }

    /// Graph whose biadjacency matrix is a block matrix of all-ones
    /// blocks where `pattern` is 1 and zero blocks elsewhere. Row
    /// blocks partition Alice's qubits, column blocks Bob's. `pattern`
    /// entries are 0/1 rows matching the block lists.
    pub fn block_graph(
        row_blocks: &[usize],
        col_blocks: &[usize],
        pattern: &[&[u8]],
    ) -> Result<Self> {
        if pattern.len() != row_blocks.len()
            || pattern.iter().any(|row| row.len() != col_blocks.len())
        {
            return Err(Error::InvalidGraph(
                "block pattern dimensions do not match block lists".into(),
            ));
        }
        if row_blocks.iter().chain(col_blocks).any(|&c| c == 0) {
            return Err(Error::InvalidGraph("block sizes must be at least 1".into()));
        }
        let n_a: usize = row_blocks.iter().sum();
        let n_b: usize = col_blocks.iter().sum();
        let mut edges = Vec::new();
        let mut row_base = 0usize;
        for (bi, &rb) in row_blocks.iter().enumerate() {
            let mut col_base = 0usize;
            for (bj, &cb) in col_blocks.iter().enumerate() {
                if pattern[bi][bj] != 0 {
                    for i in 0..rb {
                        for j in 0..cb {
                            edges.push((row_base + i, n_a + col_base + j));
                        }
                    }
                }
                col_base += cb;
            }
            row_base += rb;
        }
        BipartiteGraphState::new(n_a, n_b, edges)
    }

    /// Parses the text graph format: first non-comment line `nA nB`,
    /// then one `u v` edge per line (0-based). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected two integers, got {line:?}"),
                });
            }
            let a: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("not an integer: {:?}", fields[0]),
            })?;
            let b: usize = fields[1].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("not an integer: {:?}", fields[1]),
            })?;
            if header.is_none() {
                header = Some((a, b));
            } else {
                edges.push((a, b));
            }
        }
        let (n_a, n_b) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `nA nB` header line".into(),
        })?;
        BipartiteGraphState::new(n_a, n_b, edges)
    }

    /// Writes the same format [`BipartiteGraphState::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n_a, self.n_b);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Row-structure classification of one side of a biadjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureVariant {
    /// All connected rows identical.
    Rank1 { n_connected: usize },
    /// Two classes of identical rows with independent representatives.
    Rank2Type1 { n1: usize, n2: usize },
    /// Three classes whose representatives XOR to zero.
    Rank2Type2 { n1: usize, n2: usize, n3: usize },
    General { rank: usize },
}

/// Per-side classification with the count of this side's qubits that
/// have no cross edge (zero rows, excluded from the class counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureClass {
    pub side: Side,
    pub variant: StructureVariant,
    pub disconnected: usize,
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "side {}: ", self.side)?;
        match &self.variant {
            StructureVariant::Rank1 { n_connected } => {
                write!(f, "rank-1 (n_connected={n_connected})")?
            }
            StructureVariant::Rank2Type1 { n1, n2 } => {
                write!(f, "rank-2 type-1 (n1={n1}, n2={n2})")?
            }
            StructureVariant::Rank2Type2 { n1, n2, n3 } => {
                write!(f, "rank-2 type-2 (n1={n1}, n2={n2}, n3={n3})")?
            }
            StructureVariant::General { rank } => write!(f, "general (rank={rank})")?,
        }
        write!(f, ", disconnected={}", self.disconnected)
    }
}

/// Classifies one side of the biadjacency matrix by grouping its rows
/// (columns, for side B) into equality classes after discarding zero
/// rows. Classes are ordered by first occurrence.
pub fn classify(gab: &BitMatrix, side: Side) -> StructureClass {
    let m = match side {
        Side::A => gab.clone(),
        Side::B => gab.transpose(),
    };
    let mut disconnected = 0usize;
    // (representative row index, member count) per class.
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for r in 0..m.rows() {
        if m.row_is_zero(r) {
            disconnected += 1;
            continue;
        }
        match classes.iter_mut().find(|(rep, _)| m.rows_equal(*rep, r)) {
            Some((_, count)) => *count += 1,
            None => classes.push((r, 1)),
        }
    }
    let variant = match classes.as_slice() {
        [] => StructureVariant::General { rank: 0 },
        [(_, n)] => StructureVariant::Rank1 { n_connected: *n },
        // Two distinct non-zero rows are always independent over GF(2).
        [(_, n1), (_, n2)] => StructureVariant::Rank2Type1 { n1: *n1, n2: *n2 },
        [(r1, n1), (r2, n2), (r3, n3)] if reps_xor_to_zero(&m, *r1, *r2, *r3) => {
            StructureVariant::Rank2Type2 {
                n1: *n1,
                n2: *n2,
                n3: *n3,
            }
        }
        _ => StructureVariant::General { rank: m.rank() },
    };
    StructureClass {
        side,
        variant,
        disconnected,
    }
}

fn reps_xor_to_zero(m: &BitMatrix, r1: usize, r2: usize, r3: usize) -> bool {
    (0..m.cols()).all(|c| !(m.get(r1, c) ^ m.get(r2, c) ^ m.get(r3, c)))
}
