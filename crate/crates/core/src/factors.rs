//! Exact `K_r`-factor and perfect-matching counting, the expectation identity
//! `E[F_r] = Sigma(n,pi)`, the conditional factor-ratio diagnostic, and the
//! random hyperedge-deletion (Shamir) process.

use num_traits::Zero;
use rand::Rng;

use crate::cliques::{
    all_rsets, clique_hypergraph, LabeledGraph, RUniformHypergraph, RngStream,
};
use crate::dist::{binomial_point_prob, is_well_behaved, PredicateConfig};
use crate::error::{Error, Result};
use crate::moments::{binomial, matching_count_complete, sigma_nm};
use crate::scalar::Scalar;
use crate::Rational;

/// Default guard for the deletion process (matching recounts stay trivial).
pub const SHAMIR_GUARD_N: usize = 12;

/// Exact number of perfect matchings of `h`, by backtracking on the lowest
/// uncovered vertex. Requires `r | n`.
pub fn count_matchings(h: &RUniformHypergraph) -> Result<u128> {
    if h.r() == 0 || h.n() % h.r() != 0 {
        return Err(Error::NotDivisible { n: h.n(), r: h.r() });
    }
    let masks = h.vertex_masks();
    let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); h.n()];
    for (i, e) in h.edges().iter().enumerate() {
        for &v in e {
            by_vertex[v as usize].push(i as u32);
        }
    }
    let full: u128 = if h.n() == 128 { !0 } else { (1u128 << h.n()) - 1 };
    Ok(count_covering(&masks, &by_vertex, full, 0))
}

fn count_covering(masks: &[u128], by_vertex: &[Vec<u32>], full: u128, covered: u128) -> u128 {
    if covered == full {
        return 1;
    }
    let v = (!covered & full).trailing_zeros() as usize;
    let mut total = 0u128;
    for &ei in &by_vertex[v] {
        let m = masks[ei as usize];
        if m & covered == 0 {
            total += count_covering(masks, by_vertex, full, covered | m);
        }
    }
    total
}

/// Exact number of `K_r`-factors of `G`, by branching on `r`-cliques through
/// the lowest uncovered vertex directly on the graph (no hypergraph built);
/// definitionally equal to `count_matchings(clique_hypergraph(G, r))`.
pub fn count_factors(g: &LabeledGraph, r: usize) -> Result<u128> {
    if r == 0 || g.n() % r != 0 {
        return Err(Error::NotDivisible { n: g.n(), r });
    }
    if g.n() > 128 {
        return Err(Error::GuardExceeded("factor counting needs n <= 128".into()));
    }
    let n = g.n();
    let rows: Vec<u128> = (0..n)
        .map(|v| {
            let mut m = 0u128;
            for u in 0..n {
                if g.has_edge(v, u) {
                    m |= 1 << u;
                }
            }
            m
        })
        .collect();
    let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };

    fn extend_clique(
        rows: &[u128],
        full: u128,
        covered: u128,
        clique: u128,
        cand: u128,
        left: usize,
        r: usize,
        total: &mut u128,
    ) {
        if left == 0 {
            let next_covered = covered | clique;
            if next_covered == full {
                *total += 1;
            } else {
                let v = (!next_covered & full).trailing_zeros() as usize;
                extend_clique(
                    rows,
                    full,
                    next_covered,
                    1u128 << v,
                    rows[v] & !next_covered,
                    r - 1,
                    r,
                    total,
                );
            }
            return;
        }
        let mut options = cand;
        while options != 0 {
            let u = options.trailing_zeros() as usize;
            options &= options - 1;
            // keep candidates above u to enumerate each clique once
            let above = if u + 1 >= 128 { 0 } else { !0u128 << (u + 1) };
            extend_clique(
                rows,
                full,
                covered,
                clique | 1 << u,
                cand & rows[u] & above,
                left - 1,
                r,
                total,
            );
        }
    }

    let mut total = 0u128;
    let v0 = 0usize;
    extend_clique(&rows, full, 0, 1u128 << v0, rows[v0], r - 1, r, &mut total);
    Ok(total)
}

/// `E[F_r(G(n,p))]` by exhaustive enumeration of all labeled graphs; must
/// equal `Sigma(n, pi)` exactly. Guarded at `n <= 7` by default.
pub fn expected_factors_exact<T: Scalar>(n: usize, r: usize, p: &T) -> Result<T> {
    if r == 0 || n % r != 0 {
        return Err(Error::NotDivisible { n, r });
    }
    let m_edges = binomial(n, 2) as usize;
    let guard = if crate::guard_override() { 28 } else { 21 };
    if m_edges > guard {
        return Err(Error::GuardExceeded(format!(
            "factor expectation needs C(n,2) <= {guard}, got {m_edges}"
        )));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut by_edges: Vec<u128> = vec![0; m_edges + 1];
    for mask in 0u64..1u64 << m_edges {
        let mut g = LabeledGraph::empty(n);
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        by_edges[mask.count_ones() as usize] += count_factors(&g, r)?;
    }
    let q = T::one() - p.clone();
    let mut acc = T::zero();
    for (e, &f) in by_edges.iter().enumerate() {
        if f != 0 {
            acc = acc + T::from_u128(f) * p.powu(e as u64) * q.powu((m_edges - e) as u64);
        }
    }
    Ok(acc)
}

/// Both sides of the conditional factor-count comparison at fixed `m`:
/// exact `E[F_r 1_{W_m}] / Pr(Bin(N,pi) = m)` against
/// `Sigma(n,m) * exp(-C(k,2) C(m,2)^{-1} (Delta_2 - Delta_2^0))`, `k = n/r`.
/// Diagnostic only; no pass/fail attaches to the log-ratio.
#[derive(Clone, Debug)]
pub struct FactorRatioDiagnostic {
    pub m: u128,
    /// `E[F_r 1_{W_m}] / Pr(Bin = m)`, exact.
    pub lhs: Rational,
    /// `Sigma(n,m)`, exact.
    pub sigma_nm: Rational,
    /// The bare falling-factorial ratio `(m)_k / (N)_k`, exact.
    pub falling_ratio: Rational,
    /// `exp(-C(k,2)/C(m,2) * (Delta2 - Delta2^0))`.
    pub correction: f64,
    /// `Sigma(n,m) * correction`.
    pub rhs: f64,
    pub log_ratio: f64,
}

pub fn conditional_factor_ratio(
    n: usize,
    r: usize,
    p: &Rational,
    m: u128,
    cfg: &PredicateConfig,
) -> Result<FactorRatioDiagnostic> {
    if r == 0 || n % r != 0 {
        return Err(Error::NotDivisible { n, r });
    }
    let m_edges = binomial(n, 2) as usize;
    let guard = if crate::guard_override() { 28 } else { 21 };
    if m_edges > guard {
        return Err(Error::GuardExceeded(format!(
            "conditional ratio needs C(n,2) <= {guard}, got {m_edges}"
        )));
    }
    let n_members = binomial(n, r);
    if m > n_members {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds N = {n_members}")));
    }
    let table = crate::moments::moment_table(n, r, p)?;
    let mu = table.mu.to_f64();
    if (m as f64 - mu).abs() > cfg.omega * mu.sqrt() {
        return Err(Error::InvalidParameter(format!(
            "m = {m} is outside mu +- omega sqrt(mu) = {mu} +- {}",
            cfg.omega * mu.sqrt()
        )));
    }

    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let q = Rational::from_integer(1.into()) - p.clone();
    let mut weighted = Rational::zero();
    for mask in 0u64..1u64 << m_edges {
        let mut g = LabeledGraph::empty(n);
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        let h = clique_hypergraph(&g, r);
        if h.edge_count() as u128 != m || !is_well_behaved(&h, cfg).pass {
            continue;
        }
        let f = count_factors(&g, r)?;
        if f != 0 {
            let e = g.edge_count() as u64;
            weighted = weighted
                + Rational::from_u128(f) * p.powu(e) * q.powu(m_edges as u64 - e);
        }
    }
    let bin = binomial_point_prob(n_members, &table.pi, m)?;
    let lhs = weighted / bin;
    let sigma: Rational = sigma_nm(n, r, m)?;
    let blocks = n / r;
    let falling_ratio = crate::moments::falling::<Rational>(m, blocks)
        / crate::moments::falling::<Rational>(n_members, blocks);
    let lambda = table.lambda.to_f64();
    let correction = if m >= 2 {
        (-(binomial(blocks, 2) as f64 / binomial_u128_f64(m, 2)) * lambda).exp()
    } else {
        1.0
    };
    let rhs = sigma.to_f64() * correction;
    let log_ratio = lhs.to_f64().ln() - rhs.ln();
    Ok(FactorRatioDiagnostic {
        m,
        lhs,
        sigma_nm: sigma,
        falling_ratio,
        correction,
        rhs,
        log_ratio,
    })
}

fn binomial_u128_f64(m: u128, k: u128) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (m - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Mutable state of the deletion process on the complete `r`-uniform hypergraph.
pub struct DeletionState {
    n: usize,
    r: usize,
    masks: Vec<u128>,
    by_vertex: Vec<Vec<u32>>,
    alive: Vec<bool>,
    alive_count: usize,
    phi: u128,
}

impl DeletionState {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r == 0 || n % r != 0 {
            return Err(Error::NotDivisible { n, r });
        }
        if n > SHAMIR_GUARD_N && !crate::guard_override() {
            return Err(Error::GuardExceeded(format!(
                "deletion process guarded at n <= {SHAMIR_GUARD_N}, got {n}"
            )));
        }
        let edges = all_rsets(n, r);
        let masks: Vec<u128> = edges
            .iter()
            .map(|e| e.iter().fold(0u128, |m, &v| m | 1 << v))
            .collect();
        let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                by_vertex[v as usize].push(i as u32);
            }
        }
        let alive_count = masks.len();
        let phi: u128 = matching_count_complete::<Rational>(n, r)
            .to_integer()
            .try_into()
            .map_err(|_| Error::GuardExceeded("matching count exceeds u128".into()))?;
        Ok(DeletionState {
            n,
            r,
            masks,
            by_vertex,
            alive: vec![true; alive_count],
            alive_count,
            phi,
        })
    }

    pub fn n_edges_total(&self) -> usize {
        self.masks.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn phi(&self) -> u128 {
        self.phi
    }

    pub fn alive_indices(&self) -> Vec<u32> {
        (0..self.masks.len() as u32).filter(|&i| self.alive[i as usize]).collect()
    }

    /// Matchings of the current hypergraph that use the given edge.
    pub fn forced_count(&self, edge: u32) -> u128 {
        if !self.alive[edge as usize] {
            return 0;
        }
        self.count_from(self.masks[edge as usize])
    }

    fn count_from(&self, covered: u128) -> u128 {
        let full: u128 = if self.n == 128 { !0 } else { (1u128 << self.n) - 1 };
        self.count_rec(covered, full)
    }

    fn count_rec(&self, covered: u128, full: u128) -> u128 {
        if covered == full {
            return 1;
        }
        let v = (!covered & full).trailing_zeros() as usize;
        let mut total = 0u128;
        for &ei in &self.by_vertex[v] {
            if self.alive[ei as usize] && self.masks[ei as usize] & covered == 0 {
                total += self.count_rec(covered | self.masks[ei as usize], full);
            }
        }
        total
    }

    /// Full recount of the current matching total (used as an oracle; the
    /// process itself maintains `phi` incrementally via forced-edge counts).
    pub fn count_from_scratch(&self) -> u128 {
        self.count_from(0)
    }

    /// Removes the edge, returning the number of matchings destroyed.
    pub fn remove(&mut self, edge: u32) -> u128 {
        let destroyed = self.forced_count(edge);
        self.alive[edge as usize] = false;
        self.alive_count -= 1;
        self.phi -= destroyed;
        destroyed
    }

    pub fn edge_vertices(&self, edge: u32) -> Vec<u32> {
        let mut m = self.masks[edge as usize];
        let mut out = Vec::with_capacity(self.r);
        while m != 0 {
            out.push(m.trailing_zeros());
            m &= m - 1;
        }
        out
    }
}

/// One step of a recorded deletion process.
#[derive(Clone, Debug)]
pub struct ShamirStep {
    pub t: usize,
    pub removed_edge: Vec<u32>,
    /// Matchings remaining after this removal.
    pub phi: u128,
    /// Fraction of matchings destroyed (zero once none remain).
    pub xi: Rational,
    /// `(n/r) / (N - t + 1)`.
    pub gamma: Rational,
    /// `xi - gamma`.
    pub alpha: Rational,
}

/// A full trace of the deletion process from the complete hypergraph.
#[derive(Clone, Debug)]
pub struct ProcessTrace {
    pub n: usize,
    pub r: usize,
    pub n_edges: usize,
    pub phi0: u128,
    pub steps: Vec<ShamirStep>,
}

impl ProcessTrace {
    pub fn terminal_phi(&self) -> u128 {
        self.steps.last().map(|s| s.phi).unwrap_or(self.phi0)
    }

    /// CSV with header `t,phi,xi,gamma,alpha` (exact rationals as `num/den`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,phi,xi,gamma,alpha\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{},{},{}\n", s.t, s.phi, s.xi, s.gamma, s.alpha));
        }
        out
    }
}

/// Runs the deletion process until `stop_m` edges remain: hyperedges removed
/// one by one uniformly at random, the matching count maintained by
/// forced-edge subtraction.
pub fn shamir_process(n: usize, r: usize, stream: &RngStream, stop_m: usize) -> Result<ProcessTrace> {
    let mut state = DeletionState::new(n, r)?;
    let n_edges = state.n_edges_total();
    if stop_m > n_edges {
        return Err(Error::InvalidParameter(format!(
            "stop_m = {stop_m} exceeds the number of hyperedges {n_edges}"
        )));
    }
    let mut rng = stream.rng();
    let phi0 = state.phi();
    let blocks = (n / r) as u64;
    let mut steps = Vec::with_capacity(n_edges - stop_m);
    for t in 1..=n_edges - stop_m {
        let pick = rng.random_range(0..state.alive_count() as u64) as usize;
        let edge = state.alive_indices()[pick];
        let phi_before = state.phi();
        let destroyed = state.remove(edge);
        let xi = if phi_before == 0 {
            Rational::zero()
        } else {
            Rational::from_ratio_u128(destroyed, phi_before)
        };
        let gamma = Rational::from_ratio_u128(blocks as u128, (n_edges - t + 1) as u128);
        let alpha = xi.clone() - gamma.clone();
        steps.push(ShamirStep {
            t,
            removed_edge: state.edge_vertices(edge),
            phi: state.phi(),
            xi,
            gamma,
            alpha,
        });
    }
    Ok(ProcessTrace { n, r, n_edges, phi0, steps })
}
