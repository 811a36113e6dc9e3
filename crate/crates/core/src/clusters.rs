//! Configuration statistics over outcomes: clusters and `W_k`, pairwise overlap
//! counts `t_s` / `t_s^-`, the conditioned cluster expectation `L_2`, the error
//! functionals `Q_2`..`Q_4` and the complex-term sum `C(Y)`, star-clusters with
//! `C_hat`, and the legality machinery of the constant-`p` regime.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::cliques::{
    clique_hypergraph, is_clique_realizable, rank_rset, shadow_graph, t_of, CliqueFamily,
    LabeledGraph, RUniformHypergraph,
};
use crate::error::{Error, Result};
use crate::moments::binomial;
use crate::scalar::{dot_powers, Scalar};

/// Hard default cap for `W_k` / `Delta_k` subset enumeration.
pub const WK_GUARD: usize = 4;

/// Adjacency lists of the overlap graph on the hyperedges of `H`
/// (`i ~ j`: distinct edges sharing at least two vertices).
pub fn overlap_adjacency(h: &RUniformHypergraph) -> Vec<Vec<u32>> {
    let masks = h.vertex_masks();
    let m = masks.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if (masks[i] & masks[j]).count_ones() >= 2 {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    adj
}

/// Connected components of the overlap graph, as sorted index sets.
pub fn clusters(h: &RUniformHypergraph) -> Vec<Vec<u32>> {
    let adj = overlap_adjacency(h);
    let m = adj.len();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start as u32];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    comp.push(u);
                    stack.push(u as usize);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Calls `f` once per connected `k`-subset of the graph given by adjacency
/// lists (ESU-style enumeration: each subset visited exactly once).
pub fn for_each_connected_subset(adj: &[Vec<u32>], k: usize, f: &mut dyn FnMut(&[u32])) {
    let n = adj.len();
    if k == 0 || n == 0 {
        return;
    }
    if k == 1 {
        for v in 0..n as u32 {
            f(&[v]);
        }
        return;
    }
    let words = n.div_ceil(64);
    let bit = |mask: &mut [u64], v: u32| mask[v as usize / 64] |= 1 << (v % 64);

    fn extend(
        adj: &[Vec<u32>],
        root: u32,
        sub: &mut Vec<u32>,
        ext: Vec<u32>,
        nbh: &[u64],
        k: usize,
        f: &mut dyn FnMut(&[u32]),
    ) {
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            if sub.len() + 1 == k {
                sub.push(w);
                f(sub);
                sub.pop();
                continue;
            }
            // extension set for the recursive call: remaining ext plus the
            // exclusive neighbours of w (unseen, larger than the root)
            let mut nbh2 = nbh.to_vec();
            let mut ext2 = ext.clone();
            for &u in &adj[w as usize] {
                if u > root && nbh2[u as usize / 64] >> (u % 64) & 1 == 0 {
                    ext2.push(u);
                }
            }
            for &u in &adj[w as usize] {
                nbh2[u as usize / 64] |= 1 << (u % 64);
            }
            nbh2[w as usize / 64] |= 1 << (w % 64);
            sub.push(w);
            extend(adj, root, sub, ext2, &nbh2, k, f);
            sub.pop();
        }
    }

    for root in 0..n as u32 {
        let mut nbh = vec![0u64; words];
        bit(&mut nbh, root);
        for &u in &adj[root as usize] {
            bit(&mut nbh, u);
        }
        let ext: Vec<u32> = adj[root as usize].iter().copied().filter(|&u| u > root).collect();
        let mut sub = vec![root];
        extend(adj, root, &mut sub, ext, &nbh, k, f);
    }
}

/// `W_k(H)`: number of connected `k`-subsets of the hyperedges (not only
/// maximal components). `k <= 4` unless the guard override is set.
pub fn count_wk(h: &RUniformHypergraph, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("W_k needs k >= 2, got {k}")));
    }
    if k > WK_GUARD && !crate::guard_override() {
        return Err(Error::GuardExceeded(format!("W_k guarded at k <= {WK_GUARD}, got {k}")));
    }
    let adj = overlap_adjacency(h);
    let mut count = 0u64;
    for_each_connected_subset(&adj, k, &mut |_s| count += 1);
    Ok(count)
}

/// All pairwise-overlap statistics of one hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterReport {
    /// `W_k` for `k = 2..=4`.
    pub w: BTreeMap<usize, u64>,
    /// `t_s(H)` for `0 <= s <= r-1`: unordered hyperedge pairs sharing exactly `s` vertices.
    pub t_by_size: Vec<u64>,
    /// `t_s^-(H)` for `2 <= s <= r-1` (slots 0 and 1 stay zero): isolated 2-clusters.
    pub t_isolated: Vec<u64>,
    /// `t(H)`: repeated-pair count.
    pub t_total: u64,
}

impl ClusterReport {
    /// Flat JSON object: keys `W2`, `W3`, `W4`, `t_s`, `t_iso_s`, `t_total`.
    pub fn to_json(&self) -> Value {
        let map_of = |v: &[u64]| -> Value {
            let m: serde_json::Map<String, Value> =
                v.iter().enumerate().map(|(s, c)| (s.to_string(), json!(c))).collect();
            Value::Object(m)
        };
        json!({
            "W2": self.w.get(&2).copied().unwrap_or(0),
            "W3": self.w.get(&3).copied().unwrap_or(0),
            "W4": self.w.get(&4).copied().unwrap_or(0),
            "t_s": map_of(&self.t_by_size),
            "t_iso_s": map_of(&self.t_isolated),
            "t_total": self.t_total,
        })
    }
}

/// Fills every slot of a [`ClusterReport`].
pub fn t_counts(h: &RUniformHypergraph) -> ClusterReport {
    let r = h.r();
    let masks = h.vertex_masks();
    let m = masks.len();
    let mut t_by_size = vec![0u64; r.max(1)];
    let mut touched: Vec<Vec<u32>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            let s = (masks[i] & masks[j]).count_ones() as usize;
            if s < r {
                t_by_size[s] += 1;
            }
            if s >= 2 {
                touched[i].push(j as u32);
                touched[j].push(i as u32);
            }
        }
    }
    let mut t_isolated = vec![0u64; r.max(1)];
    for i in 0..m {
        if touched[i].len() != 1 {
            continue;
        }
        let j = touched[i][0] as usize;
        if j > i && touched[j].len() == 1 {
            let s = (masks[i] & masks[j]).count_ones() as usize;
            t_isolated[s] += 1;
        }
    }
    let mut w = BTreeMap::new();
    for k in 2..=4usize {
        w.insert(k, count_wk(h, k).unwrap_or(0));
    }
    ClusterReport { w, t_by_size, t_isolated, t_total: t_of(h) }
}

/// Checks the two exact sandwich bounds tying `t_s`, `t_s^-`, `t(H)` and `W_3`:
/// `0 <= sum_s C(s,2) t_s - t <= C(r-1,2) W_3` and
/// `0 <= sum_s C(s,2) (t_s - t_s^-) <= 3 C(r-1,2) W_3`.
pub fn check_overlap_bounds(report: &ClusterReport, r: usize) -> bool {
    let w3 = report.w.get(&3).copied().unwrap_or(0) as i128;
    let cap = binomial(r - 1, 2) as i128;
    let weighted: i128 = (2..r)
        .map(|s| binomial(s, 2) as i128 * report.t_by_size[s] as i128)
        .sum();
    let weighted_iso: i128 = (2..r)
        .map(|s| binomial(s, 2) as i128 * report.t_isolated[s] as i128)
        .sum();
    let d1 = weighted - report.t_total as i128;
    let d2 = weighted - weighted_iso;
    (0..=cap * w3).contains(&d1) && (0..=3 * cap * w3).contains(&d2)
}

/// View of the complete clique family with its overlap structure, shared by
/// the `Q_i`, `C`, and star-cluster computations.
pub struct FamilyView {
    pub fam: CliqueFamily,
    /// Overlap sizes (shared vertices) for every member pair.
    overlap: Vec<u8>,
    /// Adjacency lists of the `i ~ j` relation.
    pub adj: Vec<Vec<u32>>,
}

impl FamilyView {
    pub fn new(n: usize, r: usize) -> Self {
        let fam = CliqueFamily::new(n, r);
        let m = fam.len();
        let mut overlap = vec![0u8; m * m];
        let mut adj = vec![Vec::new(); m];
        for i in 0..m {
            for j in 0..m {
                let s = fam.overlap_size(i, j) as u8;
                overlap[i * m + j] = s;
                if i != j && s >= 2 {
                    adj[i].push(j as u32);
                }
            }
        }
        FamilyView { fam, overlap, adj }
    }

    #[inline]
    pub fn overlap_size(&self, i: usize, j: usize) -> usize {
        self.overlap[i * self.fam.len() + j] as usize
    }

    #[inline]
    pub fn overlapping(&self, i: usize, j: usize) -> bool {
        i != j && self.overlap_size(i, j) >= 2
    }

    /// Membership flags of the outcome `Y(H)` in this family's index space.
    pub fn membership(&self, h: &RUniformHypergraph) -> (Vec<bool>, Vec<u32>) {
        let mut flags = vec![false; self.fam.len()];
        let mut idx = Vec::with_capacity(h.edge_count());
        for e in h.edges() {
            let i = rank_rset(h.n(), h.r(), e) as u32;
            flags[i as usize] = true;
            idx.push(i);
        }
        idx.sort_unstable();
        (flags, idx)
    }

    fn r2(&self) -> u64 {
        binomial(self.fam.r(), 2) as u64
    }

    /// Exponent of `Pr(A_b | A_a) = p^{C(r,2) - C(t,2)}`.
    #[inline]
    fn cond_exponent(&self, a: usize, b: usize) -> usize {
        (self.r2() - binomial(self.overlap_size(a, b), 2) as u64) as usize
    }
}

/// `L_2(Y) = sum_{j in Y} sum_{i ~ j} Pr(A_i | A_j)` over the complete family.
pub fn l2_sum<T: Scalar>(h: &RUniformHypergraph, p: &T) -> T {
    let view = FamilyView::new(h.n(), h.r());
    let (_, idx) = view.membership(h);
    let mut hist = vec![0u64; view.r2() as usize + 1];
    for &j in &idx {
        for &i in &view.adj[j as usize] {
            hist[view.cond_exponent(j as usize, i as usize)] += 1;
        }
    }
    dot_powers(&hist, p)
}

/// `Q_2(H) = W_2(H)`: intersecting pairs of hyperedges.
pub fn q2(h: &RUniformHypergraph) -> u64 {
    count_wk(h, 2).expect("k = 2 is always in guard")
}

/// Role convention for the `Q_3` sum (its defining equation leaves the roles
/// of an unordered 3-cluster ambiguous).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Q3Convention {
    /// Ordered triples `(i,j,k)` of distinct indices forming a 3-cluster,
    /// indicator on `(i,j)`, factor `Pr(A_k | A_i)`. Makes the bound
    /// `sum_{i,k in Y} sum_{i~j~k} Pr(A_j|A_i) <= Q_3(Y)` hold literally.
    #[default]
    Ordered,
    /// One term per unordered 3-cluster, roles assigned by ascending index.
    Unordered,
}

/// `Q_3(H)` under the given convention.
pub fn q3<T: Scalar>(h: &RUniformHypergraph, p: &T, convention: Q3Convention) -> T {
    let view = FamilyView::new(h.n(), h.r());
    let (flags, idx) = view.membership(h);
    let n_members = view.fam.len();
    let mut hist = vec![0u64; view.r2() as usize + 1];
    match convention {
        Q3Convention::Ordered => {
            for &i in &idx {
                for &j in &idx {
                    if i == j {
                        continue;
                    }
                    for k in 0..n_members {
                        if k as u32 == i || k as u32 == j {
                            continue;
                        }
                        if is_three_cluster(&view, i as usize, j as usize, k) {
                            hist[view.cond_exponent(i as usize, k)] += 1;
                        }
                    }
                }
            }
        }
        Q3Convention::Unordered => {
            for i in 0..n_members {
                for j in i + 1..n_members {
                    for k in j + 1..n_members {
                        if is_three_cluster(&view, i, j, k) && flags[i] && flags[j] {
                            hist[view.cond_exponent(i, k)] += 1;
                        }
                    }
                }
            }
        }
    }
    dot_powers(&hist, p)
}

fn is_three_cluster(view: &FamilyView, a: usize, b: usize, c: usize) -> bool {
    let ab = view.overlapping(a, b);
    let ac = view.overlapping(a, c);
    let bc = view.overlapping(b, c);
    (ab && ac) || (ab && bc) || (ac && bc)
}

/// `Q_4(H)`: sum over 4-tuples of distinct indices `i ~ i' ~ j' ~ j` with
/// `i' !~ j`, `i !~ j'`, of `1[i,j in Y] Pr(A_{i'} cap A_{j'} | A_i cap A_j)`.
pub fn q4<T: Scalar>(h: &RUniformHypergraph, p: &T) -> T {
    let view = FamilyView::new(h.n(), h.r());
    let (flags, idx) = view.membership(h);
    let mut hist = vec![0u64; 2 * view.r2() as usize + 1];
    for &i in &idx {
        let i = i as usize;
        for &ip in &view.adj[i] {
            let ip = ip as usize;
            for &jp in &view.adj[ip] {
                let jp = jp as usize;
                if jp == i || view.overlapping(i, jp) {
                    continue;
                }
                for &j in &view.adj[jp] {
                    let j = j as usize;
                    if j == i || j == ip || !flags[j] || view.overlapping(ip, j) {
                        continue;
                    }
                    hist[q4_exponent(&view.fam, i, j, ip, jp)] += 1;
                }
            }
        }
    }
    dot_powers(&hist, p)
}

/// `|(E_{i'} u E_{j'}) \ (E_i u E_j)|` in graph edges, by direct pair counting.
fn q4_exponent(fam: &CliqueFamily, i: usize, j: usize, ip: usize, jp: usize) -> usize {
    let mi = fam.vertex_mask(i);
    let mj = fam.vertex_mask(j);
    let mip = fam.vertex_mask(ip);
    let mjp = fam.vertex_mask(jp);
    let mut verts = mip | mjp;
    let mut vs: Vec<u32> = Vec::new();
    while verts != 0 {
        vs.push(verts.trailing_zeros());
        verts &= verts - 1;
    }
    let mut count = 0usize;
    for (a, &u) in vs.iter().enumerate() {
        for &v in &vs[a + 1..] {
            let pair = (1u128 << u) | (1u128 << v);
            let in_new = pair & mip == pair || pair & mjp == pair;
            let in_old = pair & mi == pair || pair & mj == pair;
            if in_new && !in_old {
                count += 1;
            }
        }
    }
    count
}

/// Exact `E[Q_3(I)] = sum Pr(A_i cap A_j) Pr(A_k | A_i)` by tuple enumeration.
pub fn expected_q3<T: Scalar>(n: usize, r: usize, p: &T, convention: Q3Convention) -> T {
    let view = FamilyView::new(n, r);
    let n_members = view.fam.len();
    let r2 = view.r2() as usize;
    let mut hist = vec![0u64; 3 * r2 + 1];
    let pair_exp = |a: usize, b: usize| 2 * r2 - binomial(view.overlap_size(a, b), 2) as usize;
    match convention {
        Q3Convention::Ordered => {
            for i in 0..n_members {
                for j in 0..n_members {
                    if i == j {
                        continue;
                    }
                    for k in 0..n_members {
                        if k == i || k == j || !is_three_cluster(&view, i, j, k) {
                            continue;
                        }
                        hist[pair_exp(i, j) + view.cond_exponent(i, k)] += 1;
                    }
                }
            }
        }
        Q3Convention::Unordered => {
            for i in 0..n_members {
                for j in i + 1..n_members {
                    for k in j + 1..n_members {
                        if is_three_cluster(&view, i, j, k) {
                            hist[pair_exp(i, j) + view.cond_exponent(i, k)] += 1;
                        }
                    }
                }
            }
        }
    }
    dot_powers(&hist, p)
}

/// Exact `E[Q_4(I)]`: every qualifying 4-tuple present, `p^{|E_i u E_j u E_{i'} u E_{j'}|}`.
pub fn expected_q4<T: Scalar>(n: usize, r: usize, p: &T) -> T {
    let view = FamilyView::new(n, r);
    let n_members = view.fam.len();
    let mut hist = vec![0u64; binomial(n, 2) as usize + 1];
    for i in 0..n_members {
        for &ip in &view.adj[i] {
            let ip = ip as usize;
            for &jp in &view.adj[ip] {
                let jp = jp as usize;
                if jp == i || view.overlapping(i, jp) {
                    continue;
                }
                for &j in &view.adj[jp] {
                    let j = j as usize;
                    if j == i || j == ip || view.overlapping(ip, j) {
                        continue;
                    }
                    hist[union_edge_count(&view.fam, &[i, j, ip, jp])] += 1;
                }
            }
        }
    }
    dot_powers(&hist, p)
}

/// Sum over ordered 3-cluster tuples of `p^{|E_a u E_b u E_c|}` (all-present
/// weight). Dominates `E[Q_3]` by Harris at the formula level.
pub fn present_3tuple_sum<T: Scalar>(n: usize, r: usize, p: &T) -> T {
    let view = FamilyView::new(n, r);
    let n_members = view.fam.len();
    let mut hist = vec![0u64; binomial(n, 2) as usize + 1];
    for i in 0..n_members {
        for j in 0..n_members {
            if i == j {
                continue;
            }
            for k in 0..n_members {
                if k == i || k == j || !is_three_cluster(&view, i, j, k) {
                    continue;
                }
                hist[union_edge_count(&view.fam, &[i, j, k])] += 1;
            }
        }
    }
    dot_powers(&hist, p)
}

/// Graph edges covered by the union of the given members.
fn union_edge_count(fam: &CliqueFamily, members: &[usize]) -> usize {
    let masks: Vec<u128> = members.iter().map(|&m| fam.vertex_mask(m)).collect();
    let mut verts = masks.iter().fold(0u128, |a, &b| a | b);
    let mut vs: Vec<u32> = Vec::new();
    while verts != 0 {
        vs.push(verts.trailing_zeros());
        verts &= verts - 1;
    }
    let mut count = 0usize;
    for (a, &u) in vs.iter().enumerate() {
        for &v in &vs[a + 1..] {
            let pair = (1u128 << u) | (1u128 << v);
            if masks.iter().any(|&m| pair & m == pair) {
                count += 1;
            }
        }
    }
    count
}

/// `C(Y) = sum_{j complex} p^{|E_j \ R(Y)|}`. Requires a possible `H`.
pub fn complex_sum<T: Scalar>(h: &RUniformHypergraph, p: &T) -> Result<T> {
    if !is_clique_realizable(h) {
        return Err(Error::NotRealizable);
    }
    let view = FamilyView::new(h.n(), h.r());
    let (flags, idx) = view.membership(h);
    let shadow = shadow_graph(h);
    let r2 = view.r2() as usize;
    let mut hist = vec![0u64; r2 + 1];
    for j in 0..view.fam.len() {
        if flags[j] {
            continue;
        }
        let mut overlaps = 0usize;
        for &i in &idx {
            if view.overlapping(j, i as usize) {
                overlaps += 1;
                if overlaps >= 2 {
                    break;
                }
            }
        }
        if overlaps < 2 {
            continue;
        }
        hist[r2 - covered_pairs(&shadow, view.fam.member(j))] += 1;
    }
    Ok(dot_powers(&hist, p))
}

/// Pairs within `verts` that are edges of `g`.
fn covered_pairs(g: &LabeledGraph, verts: &[u32]) -> usize {
    let mut count = 0;
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            if g.has_edge(u as usize, v as usize) {
                count += 1;
            }
        }
    }
    count
}

/// A star-cluster `(j, T)`: centre `E_j` not covered by the union of the
/// leaves, each leaf (when there are three or more) meeting the centre in an
/// element private to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCluster {
    pub center: u32,
    pub leaves: Vec<u32>,
}

/// Enumerates stars with prescribed leaf pool, reporting the `pi_c` exponent
/// `|E_j \ R(T)|` for each. `leaf_pool` must be sorted member indices.
fn for_each_star(
    view: &FamilyView,
    leaf_pool: &[u32],
    f: &mut dyn FnMut(u32, &[u32], usize),
) {
    let fam = &view.fam;
    let r2 = binomial(fam.r(), 2) as usize;
    let max_leaves = r2;
    for j in 0..fam.len() {
        let center = fam.member(j).to_vec();
        let covered_by = |t: &[u32], u: u32, v: u32| {
            t.iter().any(|&i| {
                let m = fam.vertex_mask(i as usize);
                m >> u & 1 == 1 && m >> v & 1 == 1
            })
        };
        let center_uncovered = |t: &[u32]| -> usize {
            let mut cnt = 0;
            for (a, &u) in center.iter().enumerate() {
                for &v in &center[a + 1..] {
                    if !covered_by(t, u, v) {
                        cnt += 1;
                    }
                }
            }
            cnt
        };
        // |T| = 2: any pair of distinct pool members not covering the centre
        for (a, &x) in leaf_pool.iter().enumerate() {
            if x as usize == j {
                continue;
            }
            for &y in &leaf_pool[a + 1..] {
                if y as usize == j {
                    continue;
                }
                let t = [x, y];
                let unc = center_uncovered(&t);
                if unc > 0 {
                    f(j as u32, &t, unc);
                }
            }
        }
        // |T| >= 3: leaves must each own a private element of the centre,
        // so they all overlap it; enumerate subsets of the overlapping pool
        let overlapping: Vec<u32> = leaf_pool
            .iter()
            .copied()
            .filter(|&i| view.overlapping(j, i as usize))
            .collect();
        let pool = overlapping;
        if pool.len() < 3 {
            continue;
        }
        let leaf_private_ok = |t: &[u32]| -> bool {
            t.iter().all(|&i| {
                let mi = fam.vertex_mask(i as usize) & fam.vertex_mask(j);
                // pairs within the centre-leaf intersection
                let mut vs: Vec<u32> = Vec::new();
                let mut m = mi;
                while m != 0 {
                    vs.push(m.trailing_zeros());
                    m &= m - 1;
                }
                let others: Vec<u32> = t.iter().copied().filter(|&o| o != i).collect();
                let mut private = false;
                'outer: for (a, &u) in vs.iter().enumerate() {
                    for &v in &vs[a + 1..] {
                        if !covered_by(&others, u, v) {
                            private = true;
                            break 'outer;
                        }
                    }
                }
                private
            })
        };
        let mut t = Vec::new();
        subsets_of_size(&pool, 3, max_leaves, &mut t, 0, &mut |t: &[u32]| {
            let unc = center_uncovered(t);
            if unc > 0 && leaf_private_ok(t) {
                f(j as u32, t, unc);
            }
        });
    }
}

fn subsets_of_size(
    pool: &[u32],
    min: usize,
    max: usize,
    cur: &mut Vec<u32>,
    start: usize,
    f: &mut dyn FnMut(&[u32]),
) {
    if cur.len() >= min {
        f(cur);
    }
    if cur.len() == max {
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        subsets_of_size(pool, min, max, cur, i + 1, f);
        cur.pop();
    }
}

fn star_guard(view: &FamilyView, pool_len: usize) -> Result<()> {
    let work = view.fam.len() as u128 * binomial(pool_len, 2).max(1);
    if work > 50_000_000 && !crate::guard_override() {
        return Err(Error::GuardExceeded(format!(
            "star-cluster enumeration over {} centers x {} leaves is out of desk scale",
            view.fam.len(),
            pool_len
        )));
    }
    Ok(())
}

/// All star-clusters pre-present in `Y(H)` (leaves drawn from the hyperedges of `H`).
pub fn star_clusters(h: &RUniformHypergraph) -> Result<Vec<StarCluster>> {
    let view = FamilyView::new(h.n(), h.r());
    let (_, idx) = view.membership(h);
    star_guard(&view, idx.len())?;
    let mut out = Vec::new();
    for_each_star(&view, &idx, &mut |center, leaves, _| {
        out.push(StarCluster { center, leaves: leaves.to_vec() });
    });
    Ok(out)
}

/// `C_hat(Y) = sum over pre-present stars of pi_c(S) = p^{|E_j \ R(T)|}`.
pub fn c_hat<T: Scalar>(h: &RUniformHypergraph, p: &T) -> Result<T> {
    let view = FamilyView::new(h.n(), h.r());
    let (_, idx) = view.membership(h);
    star_guard(&view, idx.len())?;
    let r2 = binomial(h.r(), 2) as usize;
    let mut hist = vec![0u64; r2 + 1];
    for_each_star(&view, &idx, &mut |_, _, unc| hist[unc] += 1);
    Ok(dot_powers(&hist, p))
}

/// `E[C_hat(I)] = sum over all stars of pi_1(S) = p^{|E_j u R(T)|}`.
pub fn expected_c_hat<T: Scalar>(n: usize, r: usize, p: &T) -> Result<T> {
    let view = FamilyView::new(n, r);
    let pool: Vec<u32> = (0..view.fam.len() as u32).collect();
    star_guard(&view, pool.len())?;
    let mut hist = vec![0u64; binomial(n, 2) as usize + 1];
    for_each_star(&view, &pool, &mut |center, leaves, _| {
        let mut members: Vec<usize> = leaves.iter().map(|&x| x as usize).collect();
        members.push(center as usize);
        hist[union_edge_count(&view.fam, &members)] += 1;
    });
    Ok(dot_powers(&hist, p))
}

/// `sum over all stars of pi_0(S) pi_c(S)`; equals `E[C_hat(I)]` term by term.
pub fn expected_c_hat_via_pi0_pic<T: Scalar>(n: usize, r: usize, p: &T) -> Result<T> {
    let view = FamilyView::new(n, r);
    let pool: Vec<u32> = (0..view.fam.len() as u32).collect();
    star_guard(&view, pool.len())?;
    let mut hist = vec![0u64; 2 * binomial(n, 2) as usize + 1];
    for_each_star(&view, &pool, &mut |_, leaves, unc| {
        let members: Vec<usize> = leaves.iter().map(|&x| x as usize).collect();
        hist[union_edge_count(&view.fam, &members) + unc] += 1;
    });
    Ok(dot_powers(&hist, p))
}

/// Legality of a single cluster (Def.: inside a `K_{r+1}` of the ambient
/// graph, a pair sharing exactly two vertices, or the specific 3-cluster shape).
fn cluster_is_legal(
    ambient: &LabeledGraph,
    masks: &[u128],
    component: &[u32],
    r: usize,
) -> bool {
    if component.len() < 2 {
        return true;
    }
    // (a) contained in a copy of K_{r+1}
    let union = component.iter().fold(0u128, |m, &i| m | masks[i as usize]);
    if union.count_ones() as usize == r + 1 {
        let mut vs: Vec<u32> = Vec::new();
        let mut m = union;
        while m != 0 {
            vs.push(m.trailing_zeros());
            m &= m - 1;
        }
        if ambient.is_clique(&vs) {
            return true;
        }
    }
    // (b) a pair sharing exactly 2 vertices
    if component.len() == 2 {
        let shared = masks[component[0] as usize] & masks[component[1] as usize];
        return shared.count_ones() == 2;
    }
    // (c) 3-cluster S1,S2,S3 with |S1 n S2| = |S1 n S3| = 2 and (S2 n S3) \ S1 empty
    if component.len() == 3 {
        for (a, &s1) in component.iter().enumerate() {
            let m1 = masks[s1 as usize];
            let rest: Vec<u128> =
                component.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, &s)| masks[s as usize]).collect();
            let ok = (m1 & rest[0]).count_ones() == 2
                && (m1 & rest[1]).count_ones() == 2
                && (rest[0] & rest[1]) & !m1 == 0;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Legality of a hypergraph: every cluster legal, with the `K_{r+1}` clause
/// tested against the shadow graph.
pub fn is_legal(h: &RUniformHypergraph) -> bool {
    let masks = h.vertex_masks();
    let shadow = shadow_graph(h);
    clusters(h).iter().all(|c| cluster_is_legal(&shadow, &masks, c, h.r()))
}

/// Legality of a graph: every cluster of its `r`-clique hypergraph is legal,
/// with the `K_{r+1}` clause tested against the graph itself.
pub fn is_legal_graph(g: &LabeledGraph, r: usize) -> bool {
    if g.n() < r {
        return true;
    }
    let h = clique_hypergraph(g, r);
    let masks = h.vertex_masks();
    clusters(&h).iter().all(|c| cluster_is_legal(g, &masks, c, r))
}

/// Union graph of a set of family members (the leaves of a star).
fn leaves_union_graph(fam: &CliqueFamily, leaves: &[u32]) -> LabeledGraph {
    let mut g = LabeledGraph::empty(fam.n());
    for &i in leaves {
        let m = fam.member(i as usize);
        for (a, &u) in m.iter().enumerate() {
            for &v in &m[a + 1..] {
                g.add_edge(u as usize, v as usize);
            }
        }
    }
    g
}

/// `C_hat_L(Y)`: the star sum restricted to legal stars (leaf union legal as a graph).
pub fn c_hat_legal<T: Scalar>(h: &RUniformHypergraph, p: &T) -> Result<T> {
    let view = FamilyView::new(h.n(), h.r());
    let (_, idx) = view.membership(h);
    star_guard(&view, idx.len())?;
    let r2 = binomial(h.r(), 2) as usize;
    let mut hist = vec![0u64; r2 + 1];
    for_each_star(&view, &idx, &mut |_, leaves, unc| {
        if is_legal_graph(&leaves_union_graph(&view.fam, leaves), h.r()) {
            hist[unc] += 1;
        }
    });
    Ok(dot_powers(&hist, p))
}

/// `E[C_hat_L(I)]`: present-probability sum over legal stars.
pub fn expected_c_hat_legal<T: Scalar>(n: usize, r: usize, p: &T) -> Result<T> {
    let view = FamilyView::new(n, r);
    let pool: Vec<u32> = (0..view.fam.len() as u32).collect();
    star_guard(&view, pool.len())?;
    let mut hist = vec![0u64; binomial(n, 2) as usize + 1];
    for_each_star(&view, &pool, &mut |center, leaves, _| {
        if is_legal_graph(&leaves_union_graph(&view.fam, leaves), r) {
            let mut members: Vec<usize> = leaves.iter().map(|&x| x as usize).collect();
            members.push(center as usize);
            hist[union_edge_count(&view.fam, &members)] += 1;
        }
    });
    Ok(dot_powers(&hist, p))
}
