//! Trees, caterpillars and three independent routes to the independence
//! polynomial: subset enumeration, vertex deletion, and a rooted tree DP.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;

/// Default vertex cap for [`indpoly_bruteforce`].
pub const DEFAULT_CAP: usize = 22;
/// Hard ceiling for the brute-force cap.
pub const MAX_CAP: usize = 30;

/// An undirected tree on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct Tree {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<TreeRepr> for Tree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        Tree::new(r.vertex_count, r.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<Tree> for TreeRepr {
    fn from(t: Tree) -> Self {
        TreeRepr {
            vertex_count: t.vertex_count,
            edges: t.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Tree {
    /// Validates that the edge list spans a tree on `vertex_count` vertices.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if edges.len() != vertex_count - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {vertex_count} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidTree(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidTree(format!("duplicate edge ({u},{v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let tree = Tree {
            vertex_count,
            edges,
            adj,
        };
        if tree.bfs_order(0).len() != vertex_count {
            return Err(Error::InvalidTree("graph is disconnected".into()));
        }
        Ok(tree)
    }

    pub fn path(n: usize) -> Result<Self> {
        Tree::new(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn star(leaves: usize) -> Result<Self> {
        Tree::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

/// The caterpillar `T(m, n)`: a spine path of `n` vertices, spine vertex `k`
/// carrying `m_k` pendant leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct CaterpillarSpec {
    m: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    m: Vec<usize>,
    n: usize,
}

impl TryFrom<SpecRepr> for CaterpillarSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        CaterpillarSpec::with_prefix(&r.m, r.n)
    }
}

impl From<CaterpillarSpec> for SpecRepr {
    fn from(s: CaterpillarSpec) -> Self {
        let n = s.n();
        SpecRepr { m: s.m, n }
    }
}

impl CaterpillarSpec {
    /// Spine length is `m.len()`; every `m_i` must be at least 1.
    pub fn new(m: Vec<usize>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidSpec("spine length must be at least 1".into()));
        }
        if let Some(i) = m.iter().position(|&mi| mi == 0) {
            return Err(Error::InvalidSpec(format!("m_{} = 0; every m_i must be >= 1", i + 1)));
        }
        Ok(CaterpillarSpec { m })
    }

    /// Takes the first `n` entries of `m`.
    pub fn with_prefix(m: &[usize], n: usize) -> Result<Self> {
        if n > m.len() {
            return Err(Error::InvalidSpec(format!(
                "spine length {n} exceeds the {} given m values",
                m.len()
            )));
        }
        CaterpillarSpec::new(m[..n].to_vec())
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// `T(m, j)` for `1 <= j <= n`.
    pub fn prefix(&self, j: usize) -> CaterpillarSpec {
        assert!((1..=self.n()).contains(&j), "prefix length {j} out of range");
        CaterpillarSpec {
            m: self.m[..j].to_vec(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n() + self.leaf_count()
    }

    pub fn leaf_count(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.m.windows(2).all(|w| w[0] <= w[1])
    }

    /// Spine vertices are `0..n` in path order, then leaves grouped by spine
    /// vertex in ascending order.
    pub fn build_tree(&self) -> Tree {
        let n = self.n();
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        let mut next = n;
        for (k, &mk) in self.m.iter().enumerate() {
            for _ in 0..mk {
                edges.push((k, next));
                next += 1;
            }
        }
        Tree::new(next, edges).expect("caterpillar construction always yields a tree")
    }
}

impl std::fmt::Display for CaterpillarSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.m.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn build_caterpillar(spec: &CaterpillarSpec) -> Tree {
    spec.build_tree()
}

/// Counts independent sets by cardinality over all `2^|V|` vertex subsets.
pub fn indpoly_bruteforce(tree: &Tree, cap: usize) -> Result<Polynomial> {
    if cap > MAX_CAP {
        return Err(Error::CapTooLarge(cap));
    }
    let n = tree.vertex_count();
    if n > cap {
        return Err(Error::TooLarge { vertices: n, cap });
    }
    let adj_mask: Vec<u64> = (0..n)
        .map(|v| tree.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();

    let total: u64 = 1 << n;
    let chunk_bits = n.saturating_sub(6).min(n);
    let chunk_len: u64 = 1 << chunk_bits;
    let chunks = total / chunk_len;

    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; n + 1];
            for set in c * chunk_len..(c + 1) * chunk_len {
                let mut rest = set;
                let mut independent = true;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    if adj_mask[v] & set != 0 {
                        independent = false;
                        break;
                    }
                    rest &= rest - 1;
                }
                if independent {
                    counts[set.count_ones() as usize] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(Polynomial::new(counts.into_iter().map(BigInt::from).collect()))
}

/// Recursive `I(G) = I(G - v) + x I(G - N[v])`, pivoting on a maximum-degree
/// vertex, multiplying over components, and memoizing on vertex sets.
pub fn indpoly_deletion(tree: &Tree) -> Polynomial {
    let mut solver = DeletionSolver {
        adj: &tree.adj,
        memo: HashMap::new(),
        mark: vec![false; tree.vertex_count()],
    };
    let all: Vec<usize> = (0..tree.vertex_count()).collect();
    solver.forest(&all)
}

struct DeletionSolver<'a> {
    adj: &'a [Vec<usize>],
    memo: HashMap<Vec<usize>, Polynomial>,
    // Scratch membership flags; always all-false between calls.
    mark: Vec<bool>,
}

impl DeletionSolver<'_> {
    /// Independence polynomial of the subgraph induced by `vertices` (sorted).
    fn forest(&mut self, vertices: &[usize]) -> Polynomial {
        self.components(vertices)
            .into_iter()
            .fold(Polynomial::one(), |acc, comp| &acc * &self.connected(comp))
    }

    fn components(&mut self, vertices: &[usize]) -> Vec<Vec<usize>> {
        for &v in vertices {
            self.mark[v] = true;
        }
        let mut comps = Vec::new();
        for &start in vertices {
            if !self.mark[start] {
                continue;
            }
            self.mark[start] = false;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &w in &self.adj[v] {
                    if self.mark[w] {
                        self.mark[w] = false;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn connected(&mut self, comp: Vec<usize>) -> Polynomial {
        match comp.len() {
            1 => return Polynomial::from_coeffs([1, 1]),
            2 => return Polynomial::from_coeffs([1, 2]),
            _ => {}
        }
        if let Some(p) = self.memo.get(&comp) {
            return p.clone();
        }

        for &v in &comp {
            self.mark[v] = true;
        }
        let induced_degree = |v: usize, mark: &[bool]| self.adj[v].iter().filter(|&&w| mark[w]).count();
        let mut pivot = comp[0];
        let mut best = 0;
        for &v in &comp {
            let d = induced_degree(v, &self.mark);
            if d > best {
                best = d;
                pivot = v;
            }
        }
        let closed: Vec<usize> = std::iter::once(pivot)
            .chain(self.adj[pivot].iter().copied().filter(|&w| self.mark[w]))
            .collect();
        for &v in &comp {
            self.mark[v] = false;
        }

        let without_v: Vec<usize> = comp.iter().copied().filter(|&w| w != pivot).collect();
        let without_closed: Vec<usize> = comp.iter().copied().filter(|w| !closed.contains(w)).collect();

        let a = self.forest(&without_v);
        let b = self.forest(&without_closed);
        let p = &a + &b.shift(1);
        self.memo.insert(comp, p.clone());
        p
    }
}

/// Rooted DP from vertex 0: `A_v` counts sets avoiding `v`, `B_v` sets using
/// it; `A_v = prod (A_c + B_c)`, `B_v = x prod A_c`.
pub fn indpoly_treedp(tree: &Tree) -> Polynomial {
    let order = tree.bfs_order(0);
    let mut parent = vec![usize::MAX; tree.vertex_count()];
    for &v in &order {
        for &w in tree.neighbors(v) {
            if w != parent[v] {
                parent[w] = v;
            }
        }
    }
    let mut excl = vec![Polynomial::one(); tree.vertex_count()];
    let mut incl = vec![Polynomial::x(); tree.vertex_count()];
    for &v in order.iter().rev() {
        let p = parent[v];
        if p == usize::MAX {
            continue;
        }
        let sum = &excl[v] + &incl[v];
        excl[p] = &excl[p] * &sum;
        incl[p] = &incl[p] * &excl[v];
    }
    &excl[0] + &incl[0]
}
