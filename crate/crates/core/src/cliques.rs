//! Graphs on labeled vertices, `G(n,p)` sampling, the clique hypergraph `H_r(G)`,
//! and the complete family of all `r`-cliques of `K_n` (index space for outcomes).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::bits::BlockSet;
use crate::error::{Error, Result};
use crate::events::{EventFamily, Outcome};
use crate::moments::binomial;

/// Simple graph on `n` labeled vertices; adjacency as bit rows of `ceil(n/64)` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        LabeledGraph { n, words, adj: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), bound: n });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True iff the given vertices are pairwise adjacent.
    pub fn is_clique(&self, verts: &[u32]) -> bool {
        for (a, &u) in verts.iter().enumerate() {
            for &v in &verts[a + 1..] {
                if !self.has_edge(u as usize, v as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// Text form: header `n 0`, one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} 0\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Labeled `r`-uniform hypergraph on `[n]`; edges are strictly increasing
/// `r`-tuples, stored sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RUniformHypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<u32>>,
}

impl RUniformHypergraph {
    pub fn new(n: usize, r: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        for e in &edges {
            if e.len() != r {
                return Err(Error::InvalidParameter(format!(
                    "hyperedge {e:?} has {} vertices, expected {r}",
                    e.len()
                )));
            }
            if !e.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "hyperedge {e:?} is not strictly increasing"
                )));
            }
            if let Some(&last) = e.last() {
                if last as usize >= n {
                    return Err(Error::IndexOutOfRange { index: last as usize, bound: n });
                }
            }
        }
        edges.sort();
        edges.dedup();
        Ok(RUniformHypergraph { n, r, edges })
    }

    pub fn empty(n: usize, r: usize) -> Self {
        RUniformHypergraph { n, r, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.edges[i]
    }

    /// Vertex set of edge `i` as a bitmask (requires `n <= 128`).
    pub fn vertex_mask(&self, i: usize) -> u128 {
        assert!(self.n <= 128, "vertex masks need n <= 128");
        self.edges[i].iter().fold(0u128, |m, &v| m | 1 << v)
    }

    pub fn vertex_masks(&self) -> Vec<u128> {
        (0..self.edges.len()).map(|i| self.vertex_mask(i)).collect()
    }

    /// Text form: header `n r`, one line of vertex indices per hyperedge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.r);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Either object the shared text format can hold (`r = 0` marks a graph).
#[derive(Clone, Debug, PartialEq)]
pub enum InputObject {
    Graph(LabeledGraph),
    Hypergraph(RUniformHypergraph),
}

/// Parses the shared text format: first line `n r` (`r = 0` for graphs), then
/// one edge per line as space-separated vertex indices.
pub fn parse_input(text: &str) -> Result<InputObject> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidParameter("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("bad header {header:?}")))?;
    let r: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("bad header {header:?}")))?;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for line in lines {
        let row: std::result::Result<Vec<u32>, _> =
            line.split_whitespace().map(|t| t.parse::<u32>()).collect();
        let row = row.map_err(|_| Error::InvalidParameter(format!("bad edge line {line:?}")))?;
        rows.push(row);
    }
    if r == 0 {
        let mut edges = Vec::new();
        for row in rows {
            if row.len() != 2 {
                return Err(Error::InvalidParameter(format!("graph edge {row:?} needs 2 vertices")));
            }
            let (u, v) = (row[0] as usize, row[1] as usize);
            edges.push((u.min(v), u.max(v)));
        }
        Ok(InputObject::Graph(LabeledGraph::from_edges(n, &edges)?))
    } else {
        let rows = rows
            .into_iter()
            .map(|mut row| {
                row.sort_unstable();
                row
            })
            .collect();
        Ok(InputObject::Hypergraph(RUniformHypergraph::new(n, r, rows)?))
    }
}

/// Reproducible named RNG: ChaCha12, keyed by `(seed, stream_id)`. Identical keys
/// reproduce identical draws bit-for-bit on every platform and thread layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Stream for a derived unit of work (worker, batch, run). Callers partition
    /// the offset space so parallel workers never share a stream.
    pub fn substream(&self, offset: u64) -> RngStream {
        RngStream { seed: self.seed, stream_id: self.stream_id.wrapping_add(offset) }
    }
}

/// Samples `G(n,p)`: each of the `C(n,2)` edges present independently with probability `p`.
pub fn sample_gnp(n: usize, p: f64, stream: &RngStream) -> LabeledGraph {
    let mut rng = stream.rng();
    let mut g = LabeledGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Samples the binomial random hypergraph `H_r(n,q)`: each `r`-set is a hyperedge
/// independently with probability `q`.
pub fn sample_hypergraph(n: usize, r: usize, q: f64, stream: &RngStream) -> RUniformHypergraph {
    let mut rng = stream.rng();
    let mut edges = Vec::new();
    let mut cur: Vec<u32> = (0..r as u32).collect();
    loop {
        if rng.random::<f64>() < q {
            edges.push(cur.clone());
        }
        // next r-subset in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return RUniformHypergraph { n, r, edges };
            }
            i -= 1;
            if cur[i] < (n - r + i) as u32 {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `r`-subsets of `[n]` that induce cliques, enumerated by ascending-vertex
/// DFS with bit-row intersections; output is in lexicographic order.
pub fn clique_hypergraph(g: &LabeledGraph, r: usize) -> RUniformHypergraph {
    assert!(2 <= r && r <= g.n(), "need 2 <= r <= n");
    let n = g.n();
    let words = n.div_ceil(64).max(1);
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut chosen: Vec<u32> = Vec::with_capacity(r);
    // cand stack: cand[d] holds vertices > chosen[d] adjacent to all chosen[..=d]
    let mut cand: Vec<u64> = vec![0; r * words];

    fn above_mask(word: usize, v: usize) -> u64 {
        // bits strictly greater than v within this word
        let lo = word * 64;
        if v < lo {
            u64::MAX
        } else if v >= lo + 63 {
            0
        } else {
            !0u64 << (v - lo + 1)
        }
    }

    struct Ctx<'a> {
        g: &'a LabeledGraph,
        r: usize,
        words: usize,
        edges: Vec<Vec<u32>>,
    }

    fn recurse(ctx: &mut Ctx, chosen: &mut Vec<u32>, cand: &mut Vec<u64>, depth: usize) {
        if chosen.len() == ctx.r {
            ctx.edges.push(chosen.clone());
            return;
        }
        let base = depth * ctx.words;
        for w in 0..ctx.words {
            let mut bits = cand[base + w];
            while bits != 0 {
                let v = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                chosen.push(v as u32);
                if chosen.len() == ctx.r {
                    ctx.edges.push(chosen.clone());
                } else {
                    let nbase = (depth + 1) * ctx.words;
                    let row = ctx.g.row(v);
                    for w2 in 0..ctx.words {
                        cand[nbase + w2] = cand[base + w2] & row[w2] & above_mask(w2, v);
                    }
                    recurse(ctx, chosen, cand, depth + 1);
                }
                chosen.pop();
            }
        }
    }

    let mut ctx = Ctx { g, r, words, edges: Vec::new() };
    for v in 0..n {
        chosen.push(v as u32);
        let row = g.row(v);
        for w in 0..words {
            cand[w] = row[w] & above_mask(w, v);
        }
        recurse(&mut ctx, &mut chosen, &mut cand, 0);
        chosen.pop();
    }
    edges.append(&mut ctx.edges);
    RUniformHypergraph { n, r, edges }
}

/// `G(H)`: edge `{u,v}` present iff some hyperedge contains both.
pub fn shadow_graph(h: &RUniformHypergraph) -> LabeledGraph {
    let mut g = LabeledGraph::empty(h.n());
    for e in h.edges() {
        for (a, &u) in e.iter().enumerate() {
            for &v in &e[a + 1..] {
                g.add_edge(u as usize, v as usize);
            }
        }
    }
    g
}

/// Repeated-pair count `t(H) = C(r,2) e(H) - e(G(H))`: a vertex pair lying in
/// `k` hyperedges is counted `k - 1` times.
pub fn t_of(h: &RUniformHypergraph) -> u64 {
    let per_edge = binomial(h.r(), 2) as u64;
    per_edge * h.edge_count() as u64 - shadow_graph(h).edge_count() as u64
}

/// True iff `H = H_r(G)` for some graph `G`, equivalently for `G = G(H)`.
pub fn is_clique_realizable(h: &RUniformHypergraph) -> bool {
    if h.edge_count() == 0 {
        return true;
    }
    clique_hypergraph(&shadow_graph(h), h.r()) == *h
}

/// The complete family of all `C(n,r)` cliques of `K_n`, in lexicographic order
/// of vertex sets. Member index `i` is the canonical key space for outcomes.
#[derive(Clone, Debug)]
pub struct CliqueFamily {
    n: usize,
    r: usize,
    members: Vec<Vec<u32>>,
    vmasks: Vec<u128>,
}

impl CliqueFamily {
    pub fn new(n: usize, r: usize) -> Self {
        assert!(2 <= r && r <= n && n <= 128, "need 2 <= r <= n <= 128");
        let members = all_rsets(n, r);
        let vmasks = members
            .iter()
            .map(|m| m.iter().fold(0u128, |acc, &v| acc | 1 << v))
            .collect();
        CliqueFamily { n, r, members, vmasks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    pub fn vertex_mask(&self, i: usize) -> u128 {
        self.vmasks[i]
    }

    /// Vertices shared by members `i` and `j`.
    pub fn overlap_size(&self, i: usize, j: usize) -> usize {
        (self.vmasks[i] & self.vmasks[j]).count_ones() as usize
    }

    /// The overlap relation `i ~ j`: distinct members sharing at least one
    /// graph edge, i.e. at least two vertices.
    pub fn overlapping(&self, i: usize, j: usize) -> bool {
        i != j && self.overlap_size(i, j) >= 2
    }

    /// Lexicographic rank of a strictly increasing `r`-set.
    pub fn rank(&self, set: &[u32]) -> usize {
        rank_rset(self.n, self.r, set)
    }

    /// Ground set = edges of `K_n` (pair indices); member `i` maps to the edge
    /// set of the `i`-th clique. Order is preserved: vertex-lex equals edge-lex.
    pub fn to_event_family(&self) -> EventFamily {
        let ground = binomial(self.n, 2) as usize;
        let members: Vec<Vec<u32>> = self
            .members
            .iter()
            .map(|m| {
                let mut es = Vec::with_capacity(self.r * (self.r - 1) / 2);
                for (a, &u) in m.iter().enumerate() {
                    for &v in &m[a + 1..] {
                        es.push(pair_index(self.n, u as usize, v as usize) as u32);
                    }
                }
                es
            })
            .collect();
        let fam = EventFamily::new(ground, members).expect("clique family is well-formed");
        debug_assert_eq!(fam.len(), self.members.len());
        fam
    }
}

/// Index of pair `{u,v}` (`u < v`) in the lexicographic list of edges of `K_n`.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// All strictly increasing `r`-subsets of `[n]` in lexicographic order.
pub fn all_rsets(n: usize, r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(binomial(n, r) as usize);
    let mut cur: Vec<u32> = (0..r as u32).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - r + i) as u32 {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Lexicographic rank of a strictly increasing `r`-set over `[n]`.
pub fn rank_rset(n: usize, r: usize, set: &[u32]) -> usize {
    debug_assert_eq!(set.len(), r);
    let mut rank: u128 = 0;
    let mut prev: i64 = -1;
    for (i, &s) in set.iter().enumerate() {
        for v in (prev + 1) as usize..s as usize {
            rank += binomial(n - 1 - v, r - 1 - i);
        }
        prev = s as i64;
    }
    rank as usize
}

/// Inverse of [`rank_rset`].
pub fn unrank_rset(n: usize, r: usize, mut rank: usize) -> Vec<u32> {
    let mut set = Vec::with_capacity(r);
    let mut v = 0usize;
    for i in 0..r {
        loop {
            let block = binomial(n - 1 - v, r - 1 - i) as usize;
            if rank < block {
                set.push(v as u32);
                v += 1;
                break;
            }
            rank -= block;
            v += 1;
        }
    }
    set
}

/// Outcome `Y(H)`: the set of member indices of the complete `(n,r)` family
/// whose vertex sets are hyperedges of `H`.
pub fn outcome_of(h: &RUniformHypergraph) -> Outcome {
    let indices = h.edges().iter().map(|e| rank_rset(h.n(), h.r(), e) as u32).collect();
    Outcome::new(indices)
}

/// Inverse of [`outcome_of`]: rebuilds the hypergraph from member indices.
pub fn hypergraph_of_outcome(n: usize, r: usize, outcome: &Outcome) -> RUniformHypergraph {
    let edges = outcome.indices().iter().map(|&i| unrank_rset(n, r, i as usize)).collect();
    RUniformHypergraph { n, r, edges }
}

/// Outcome as a bitmask over member indices (requires `C(n,r) <= 128`).
pub fn outcome_mask(h: &RUniformHypergraph) -> u128 {
    assert!(binomial(h.n(), h.r()) <= 128, "outcome masks need C(n,r) <= 128");
    h.edges()
        .iter()
        .fold(0u128, |m, e| m | 1 << rank_rset(h.n(), h.r(), e))
}

/// Inverse of [`outcome_mask`].
pub fn hypergraph_of_mask(n: usize, r: usize, mut mask: u128) -> RUniformHypergraph {
    let mut edges = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        edges.push(unrank_rset(n, r, i));
    }
    RUniformHypergraph { n, r, edges }
}

/// Revealed ground set of `H` inside the event family of [`CliqueFamily::to_event_family`],
/// i.e. the edge set of the shadow graph, as a [`BlockSet`] over pair indices.
pub fn revealed_edges(h: &RUniformHypergraph) -> BlockSet {
    let ground = binomial(h.n(), 2) as usize;
    let shadow = shadow_graph(h);
    let mut s = BlockSet::empty(ground);
    for (u, v) in shadow.edges() {
        s.insert(pair_index(h.n(), u, v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, r: usize, edges: &[&[u32]]) -> RUniformHypergraph {
        RUniformHypergraph::new(n, r, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cliques_of_complete_and_empty() {
        let k6 = LabeledGraph::complete(6);
        assert_eq!(clique_hypergraph(&k6, 3).edge_count(), 20);
        let e6 = LabeledGraph::empty(6);
        assert_eq!(clique_hypergraph(&e6, 3).edge_count(), 0);
    }

    #[test]
    fn five_cycle_is_triangle_free() {
        let c5 = LabeledGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(clique_hypergraph(&c5, 3).edge_count(), 0);
    }

    #[test]
    fn clique_enumeration_is_lexicographic() {
        let g = LabeledGraph::complete(5);
        let hg = clique_hypergraph(&g, 3);
        let all = all_rsets(5, 3);
        assert_eq!(hg.edges(), &all[..]);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(rank_rset(5, 3, e), i);
            assert_eq!(unrank_rset(5, 3, i), *e);
        }
    }

    #[test]
    fn shadow_and_t() {
        let h1 = h(4, 3, &[&[0, 1, 2], &[0, 1, 3]]);
        let shadow = shadow_graph(&h1);
        assert_eq!(shadow.edge_count(), 5);
        assert_eq!(t_of(&h1), 1);
        let h2 = h(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4]]);
        assert_eq!(t_of(&h2), 2);
        assert_eq!(t_of(&RUniformHypergraph::empty(5, 3)), 0);
        let single = h(5, 3, &[&[1, 2, 3]]);
        let sh = shadow_graph(&single);
        assert_eq!(sh.edges(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn realizability() {
        assert!(is_clique_realizable(&RUniformHypergraph::empty(6, 3)));
        // three of the four triples of [4]: shadow is K4, which realizes all four
        let bad = h(4, 3, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3]]);
        assert!(!is_clique_realizable(&bad));
        let good = h(6, 3, &[&[0, 1, 2], &[3, 4, 5]]);
        assert!(is_clique_realizable(&good));
    }

    #[test]
    fn realizable_closure_contains_h() {
        let cases = vec![
            h(6, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 4, 5]]),
            h(4, 3, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3]]),
        ];
        for hg in cases {
            let closure = clique_hypergraph(&shadow_graph(&hg), hg.r());
            for e in hg.edges() {
                assert!(closure.edges().contains(e));
            }
        }
    }

    #[test]
    fn outcome_roundtrip() {
        let hg = h(4, 3, &[&[0, 1, 2], &[1, 2, 3]]);
        let y = outcome_of(&hg);
        assert_eq!(y.indices(), &[0, 3]);
        assert_eq!(hypergraph_of_outcome(4, 3, &y), hg);
        let first = h(4, 3, &[&[0, 1, 2]]);
        assert_eq!(outcome_of(&first).indices(), &[0]);
        assert_eq!(outcome_mask(&hg), 0b1001);
        assert_eq!(hypergraph_of_mask(4, 3, 0b1001), hg);
    }

    #[test]
    fn gnp_edge_cases_and_determinism() {
        let s = RngStream::new(7, 0);
        assert_eq!(sample_gnp(10, 0.0, &s).edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, &s).edge_count(), 45);
        let a = sample_gnp(20, 0.3, &RngStream::new(42, 5));
        let b = sample_gnp(20, 0.3, &RngStream::new(42, 5));
        assert_eq!(a, b);
        let c = sample_gnp(20, 0.3, &RngStream::new(42, 6));
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_edge_count_mean_is_binomial() {
        // mean edge count over samples within 4 sigma of C(50,2) * 0.1 = 122.5
        let samples = 4000u64;
        let mut total = 0u64;
        for s in 0..samples {
            total += sample_gnp(50, 0.1, &RngStream::new(0x6e9, s)).edge_count() as u64;
        }
        let mean = total as f64 / samples as f64;
        let sigma = (1225.0 * 0.1 * 0.9 / samples as f64).sqrt();
        assert!((mean - 122.5).abs() <= 4.0 * sigma, "mean {mean}, sigma {sigma}");
    }

    #[test]
    fn text_roundtrip() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        match parse_input(&g.to_text()).unwrap() {
            InputObject::Graph(g2) => assert_eq!(g, g2),
            _ => panic!("expected graph"),
        }
        let hg = h(5, 3, &[&[0, 1, 2], &[1, 3, 4]]);
        match parse_input(&hg.to_text()).unwrap() {
            InputObject::Hypergraph(h2) => assert_eq!(hg, h2),
            _ => panic!("expected hypergraph"),
        }
    }

    #[test]
    fn wide_graph_over_64_vertices() {
        let mut g = LabeledGraph::empty(70);
        g.add_edge(1, 65);
        g.add_edge(65, 69);
        g.add_edge(1, 69);
        assert!(g.has_edge(65, 1));
        assert_eq!(clique_hypergraph(&g, 3).edges(), &[vec![1, 65, 69]]);
    }

    #[test]
    fn event_family_order_matches_member_order() {
        let fam = CliqueFamily::new(5, 3);
        let ev = fam.to_event_family();
        // member 0 = {0,1,2}: edges (0,1),(0,2),(1,2) -> pair indices 0,1,4
        assert_eq!(ev.member(0).to_indices(), vec![0, 1, 4]);
        assert_eq!(ev.len(), fam.len());
    }
}
