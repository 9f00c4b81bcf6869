//! Bit-packed simple graphs plus the small Ramsey-type facts used by the
//! orthogonality arguments.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 4096;
/// Largest graph for which [`Graph::independence_number`] runs.
pub const MAX_INDEPENDENCE_VERTICES: usize = 64;

/// Fixed-capacity set of small integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    /// `{0, …, n-1}` in a set of capacity `n`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(n);
            *w = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    /// `{lo, …, n-1}` in a set of capacity `n`.
    pub fn range_from(n: usize, lo: usize) -> Self {
        let mut s = Self::full(n);
        for i in 0..lo.min(n) {
            s.remove(i);
        }
        s
    }

    pub fn from_indices(capacity: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i >> 6)
            .is_some_and(|w| w >> (i & 63) & 1 == 1)
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    #[inline]
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Drops every element `<= i`.
    pub fn retain_above(&mut self, i: usize) {
        let w = i >> 6;
        let len = self.words.len();
        for word in &mut self.words[..w.min(len)] {
            *word = 0;
        }
        if let Some(word) = self.words.get_mut(w) {
            let b = i & 63;
            *word &= if b == 63 { 0 } else { u64::MAX << (b + 1) };
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
}

/// Wire form: `{"n": …, "edges": [[i, j], …]}` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::BadParams(format!(
                    "bad edge ({u}, {v}) on {n} vertices"
                )));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on `i < j`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_fn(n, |i, j| j == i + 1 || (i == 0 && j + 1 == n && n > 2))
    }

    /// Circulant graph: `i ~ j` iff `j - i mod n` lies in `connections`.
    pub fn circulant(n: usize, connections: &[usize]) -> Self {
        Self::from_fn(n, |i, j| {
            let d = j - i;
            connections
                .iter()
                .any(|&c| c % n == d || (n - c % n) % n == d)
        })
    }

    /// Graph on `n` vertices whose edges are the set bits of `mask`, in the
    /// pair order `(0,1), (0,2), …, (n-2,n-1)`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::new(n);
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    g.add_edge(i, j);
                }
                bit += 1;
            }
        }
        g
    }

    pub fn from_record(rec: &GraphRecord) -> Result<Self> {
        let edges: Vec<(usize, usize)> = rec.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(rec.n, &edges)
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for v in 0..self.n {
            let mut row = BitSet::full(self.n);
            row.difference_with(&self.adj[v]);
            row.remove(v);
            g.adj[v] = row;
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |i, j| {
            self.has_edge(vertices[i], vertices[j])
        })
    }

    pub fn is_triangle_free(&self) -> bool {
        (0..self.n).all(|u| {
            self.adj[u]
                .iter()
                .filter(|&v| v > u)
                .all(|v| !self.adj[u].intersects(&self.adj[v]))
        })
    }

    /// First triangle `u < v < w` in lexicographic order.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                let mut common = self.adj[u].intersection(&self.adj[v]);
                common.retain_above(v);
                if let Some(w) = common.first() {
                    return Some([u, v, w]);
                }
            }
        }
        None
    }

    /// Lexicographically first `k`-clique.
    pub fn find_clique(&self, k: usize) -> Option<Vec<usize>> {
        fn extend(g: &Graph, chosen: &mut Vec<usize>, cand: BitSet, k: usize) -> bool {
            if chosen.len() == k {
                return true;
            }
            if chosen.len() + cand.count() < k {
                return false;
            }
            for v in cand.iter() {
                let mut next = cand.intersection(&g.adj[v]);
                next.retain_above(v);
                chosen.push(v);
                if extend(g, chosen, next, k) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::with_capacity(k);
        extend(self, &mut chosen, BitSet::full(self.n), k).then_some(chosen)
    }

    pub fn has_clique(&self, k: usize) -> bool {
        self.find_clique(k).is_some()
    }

    /// Size of a largest clique (exhaustive).
    pub fn clique_number(&self) -> usize {
        fn grow(g: &Graph, size: usize, cand: BitSet, best: &mut usize) {
            if size > *best {
                *best = size;
            }
            if size + cand.count() <= *best {
                return;
            }
            for v in cand.iter() {
                let mut next = cand.intersection(&g.adj[v]);
                next.retain_above(v);
                grow(g, size + 1, next, best);
            }
        }
        let mut best = 0;
        grow(self, 0, BitSet::full(self.n), &mut best);
        best
    }

    pub fn independence_number(&self) -> Result<usize> {
        if self.n > MAX_INDEPENDENCE_VERTICES {
            return Err(Error::TooLarge(format!(
                "independence number on {} vertices (limit {MAX_INDEPENDENCE_VERTICES})",
                self.n
            )));
        }
        Ok(self.complement().clique_number())
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = BitSet::new(self.n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(u) = stack.pop() {
            for v in self.adj[u].iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        seen.count() == self.n
    }

    /// The structural C5 test: five vertices, 2-regular, connected, triangle-free.
    pub fn is_c5(&self) -> bool {
        self.n == 5
            && (0..5).all(|v| self.degree(v) == 2)
            && self.is_connected()
            && self.is_triangle_free()
    }
}

/// Checks that every graph on 5 or 6 vertices with itself and its complement
/// triangle-free is the 5-cycle (there are none on 6 vertices).
pub fn verify_c5_lemma() -> bool {
    let five_ok = (0u64..1 << 10).all(|mask| {
        let g = Graph::from_mask(5, mask);
        !(g.is_triangle_free() && g.complement().is_triangle_free()) || g.is_c5()
    });
    five_ok && every_six_vertex_graph_has_mono_triangle()
}

fn every_six_vertex_graph_has_mono_triangle() -> bool {
    (0u64..1 << 15).all(|mask| {
        let g = Graph::from_mask(6, mask);
        !g.is_triangle_free() || !g.complement().is_triangle_free()
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(s + t - 2, s - 1)`, the classical upper bound on `R(s, t)`.
pub fn ramsey_binomial_bound(s: u64, t: u64) -> u64 {
    binomial(s + t - 2, s - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct RamseyFacts {
    /// C5: triangle-free with triangle-free complement, so `R(3,3) > 5`.
    pub r33_lower_witness: GraphRecord,
    /// Every 6-vertex graph has a triangle in it or its complement.
    pub r33_upper_verified: bool,
    /// 8-vertex triangle-free graph with independence number below 4, so `R(3,4) > 8`.
    pub r34_lower_witness: GraphRecord,
    /// Connection set of the circulant witness.
    pub r34_witness_connections: Vec<usize>,
    pub binomial_r33: u64,
    pub binomial_r34: u64,
}

/// Finds an 8-vertex triangle-free circulant with independence number at most 3.
pub fn r34_circulant_witness() -> Option<(Vec<usize>, Graph)> {
    // connection sets are subsets of {1, 2, 3, 4}, closed under negation
    (1u32..16).find_map(|mask| {
        let conns: Vec<usize> = (1..=4).filter(|c| mask >> (c - 1) & 1 == 1).collect();
        let g = Graph::circulant(8, &conns);
        (g.is_triangle_free() && !g.complement().has_clique(4)).then_some((conns, g))
    })
}

pub fn ramsey_facts() -> Result<RamseyFacts> {
    let c5 = Graph::cycle(5);
    if !(c5.is_triangle_free() && c5.complement().is_triangle_free()) {
        return Err(Error::WitnessNotFound("C5 is not a R(3,3) witness".into()));
    }
    let (conns, w) = r34_circulant_witness()
        .ok_or_else(|| Error::WitnessNotFound("no 8-vertex circulant R(3,4) witness".into()))?;
    Ok(RamseyFacts {
        r33_lower_witness: c5.to_record(),
        r33_upper_verified: every_six_vertex_graph_has_mono_triangle(),
        r34_lower_witness: w.to_record(),
        r34_witness_connections: conns,
        binomial_r33: ramsey_binomial_bound(3, 3),
        binomial_r34: ramsey_binomial_bound(3, 4),
    })
}

/// Exhaustively checks that no 9-vertex triangle-free graph has independence
/// number at most 3. Vertices are added one at a time; a new vertex's
/// neighbourhood must be an independent set of at most 3 earlier vertices,
/// and every earlier vertex keeps degree at most 3.
pub fn verify_r34_upper() -> bool {
    fn has_independent_four(adj: &[u16], n: usize) -> bool {
        // only sets containing the newest vertex need checking
        let v = n - 1;
        let non: Vec<usize> = (0..v).filter(|&u| adj[v] >> u & 1 == 0).collect();
        for (a, &x) in non.iter().enumerate() {
            for (b, &y) in non.iter().enumerate().skip(a + 1) {
                if adj[x] >> y & 1 == 1 {
                    continue;
                }
                for &z in &non[b + 1..] {
                    if adj[x] >> z & 1 == 0 && adj[y] >> z & 1 == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }
    fn extend(adj: &mut [u16; 9], n: usize) -> bool {
        if n == 9 {
            return true;
        }
        // neighbourhoods of the new vertex: independent sets of size <= 3
        for mask in 0u16..1 << n {
            if mask.count_ones() > 3 {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&u| mask >> u & 1 == 1).collect();
            if members
                .iter()
                .any(|&u| adj[u] & mask != 0 || adj[u].count_ones() >= 3)
            {
                continue;
            }
            adj[n] = mask;
            for &u in &members {
                adj[u] |= 1 << n;
            }
            let ok = !has_independent_four(adj, n + 1) && extend(adj, n + 1);
            for &u in &members {
                adj[u] &= !(1 << n);
            }
            adj[n] = 0;
            if ok {
                return true;
            }
        }
        false
    }
    !extend(&mut [0u16; 9], 0)
}

/// `(1 - 1/r) n^2 / 2`, the maximum edge count of a `K_{r+1}`-free graph.
pub fn turan_bound(r: u64, n: u64) -> Ratio<i64> {
    assert!(r >= 1, "turan_bound needs r >= 1");
    let (r, n) = (r as i64, n as i64);
    Ratio::new((r - 1) * n * n, 2 * r)
}
