//! The exact small-`n` law of `H_r(G(n,p))`, the reweighted-binomial model,
//! total-variation comparison, the typicality predicates, and seeded Monte
//! Carlo estimation at larger `n`.

use std::collections::BTreeMap;
use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::json;

use crate::cliques::{
    clique_hypergraph, hypergraph_of_mask, is_clique_realizable, pair_index, sample_gnp,
    CliqueFamily, RUniformHypergraph, RngStream,
};
use crate::clusters::{
    c_hat_legal, complex_sum, count_wk, expected_c_hat_legal, expected_q3, expected_q4, is_legal,
    q2, q3, q4, t_counts, Q3Convention,
};
use crate::error::{Error, Result};
use crate::moments::{binomial, delta_k_exact, MomentTable};
use crate::scalar::Scalar;

/// Default guard: exact enumeration needs `C(n,2)` bits, capped at 21 (`n <= 7`).
pub const EXACTDIST_GUARD_BITS: usize = 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistMode {
    Exact,
    Estimated,
}

/// Finite distribution over canonical labeled hypergraphs on `(n,r)`, keyed by
/// the member-index bitmask of the outcome (lexicographic `r`-set ranks).
#[derive(Clone, Debug)]
pub struct Distribution<T> {
    pub n: usize,
    pub r: usize,
    pub mode: DistMode,
    entries: BTreeMap<u128, T>,
    stderr: BTreeMap<u128, f64>,
}

impl<T: Scalar> Distribution<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prob(&self, key: u128) -> T {
        self.entries.get(&key).cloned().unwrap_or_else(T::zero)
    }

    pub fn stderr(&self, key: u128) -> Option<f64> {
        self.stderr.get(&key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u128, &T)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = u128> + '_ {
        self.entries.keys().copied()
    }

    pub fn total_mass(&self) -> T {
        self.entries.values().fold(T::zero(), |acc, x| acc + x.clone())
    }

    /// Expectation of a per-hypergraph statistic under this law.
    pub fn expectation<F>(&self, mut stat: F) -> T
    where
        F: FnMut(&RUniformHypergraph) -> T,
    {
        let mut acc = T::zero();
        for (&key, prob) in &self.entries {
            let h = hypergraph_of_mask(self.n, self.r, key);
            acc = acc + prob.clone() * stat(&h);
        }
        acc
    }

    pub fn to_f64(&self) -> Distribution<f64> {
        Distribution {
            n: self.n,
            r: self.r,
            mode: self.mode,
            entries: self.entries.iter().map(|(&k, v)| (k, v.to_f64())).collect(),
            stderr: self.stderr.clone(),
        }
    }

    /// JSON-lines export: one `{"edges":[[...]],"prob":"..."}` record per
    /// hypergraph, in canonical key order; estimated mode adds `stderr`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (&key, prob) in &self.entries {
            let h = hypergraph_of_mask(self.n, self.r, key);
            let mut record = json!({
                "edges": h.edges(),
                "prob": prob.render(),
            });
            if let Some(se) = self.stderr.get(&key) {
                record["stderr"] = json!(crate::scalar::format_real(*se));
            }
            out.push_str(&record.to_string());
            out.push('\n');
        }
        out
    }
}

/// Exact law of `H_r(G(n,p))` by Gray-code enumeration of all `2^{C(n,2)}`
/// labeled graphs: consecutive graphs differ in one edge and the clique set is
/// updated incrementally through per-clique missing-edge counters.
///
/// Work is partitioned over fixed high-bit prefixes; per-worker accumulators
/// hold integer counts bucketed by edge count, so the merge is exact and the
/// result independent of the worker layout.
pub fn exact_distribution<T: Scalar>(n: usize, r: usize, p: &T) -> Result<Distribution<T>> {
    let m_edges = binomial(n, 2) as usize;
    let guard = if crate::guard_override() { 28 } else { EXACTDIST_GUARD_BITS };
    if m_edges > guard {
        return Err(Error::GuardExceeded(format!(
            "exact distribution needs C(n,2) <= {guard} bits, got {m_edges} (n = {n})"
        )));
    }
    if r > n || r < 2 {
        return Err(Error::InvalidParameter(format!("need 2 <= r <= n, got r = {r}, n = {n}")));
    }
    let n_members = binomial(n, r);
    if n_members > 128 {
        return Err(Error::GuardExceeded(format!(
            "outcome masks need C(n,r) <= 128, got {n_members}"
        )));
    }

    let fam = CliqueFamily::new(n, r);
    let r2 = binomial(r, 2) as usize;
    // members containing each ground edge
    let mut members_by_edge: Vec<Vec<u16>> = vec![Vec::new(); m_edges];
    for i in 0..fam.len() {
        let verts = fam.member(i);
        for (a, &u) in verts.iter().enumerate() {
            for &v in &verts[a + 1..] {
                members_by_edge[pair_index(n, u as usize, v as usize)].push(i as u16);
            }
        }
    }

    let prefix_bits = 6.min(m_edges);
    let low_bits = m_edges - prefix_bits;
    let n_prefixes = 1usize << prefix_bits;

    let run_prefix = |prefix: usize| -> HashMap<u128, Vec<u64>> {
        let mut counts: HashMap<u128, Vec<u64>> = HashMap::new();
        let mut missing: Vec<u8> = vec![r2 as u8; fam.len()];
        let mut outcome: u128 = 0;
        let mut edge_count: u32 = 0;
        let toggle = |edge: usize,
                          missing: &mut Vec<u8>,
                          outcome: &mut u128,
                          edge_count: &mut u32,
                          on: bool| {
            if on {
                *edge_count += 1;
                for &mi in &members_by_edge[edge] {
                    missing[mi as usize] -= 1;
                    if missing[mi as usize] == 0 {
                        *outcome |= 1 << mi;
                    }
                }
            } else {
                *edge_count -= 1;
                for &mi in &members_by_edge[edge] {
                    if missing[mi as usize] == 0 {
                        *outcome &= !(1u128 << mi);
                    }
                    missing[mi as usize] += 1;
                }
            }
        };
        for b in 0..prefix_bits {
            if prefix >> b & 1 == 1 {
                toggle(low_bits + b, &mut missing, &mut outcome, &mut edge_count, true);
            }
        }
        let steps: u64 = 1u64 << low_bits;
        let mut gray: u64 = 0;
        for i in 0..steps {
            let slot = counts
                .entry(outcome)
                .or_insert_with(|| vec![0u64; m_edges + 1]);
            slot[edge_count as usize] += 1;
            if i + 1 < steps {
                let bit = (i + 1).trailing_zeros() as usize;
                let on = gray >> bit & 1 == 0;
                gray ^= 1 << bit;
                toggle(bit, &mut missing, &mut outcome, &mut edge_count, on);
            }
        }
        counts
    };

    let merged: HashMap<u128, Vec<u64>> = (0..n_prefixes)
        .into_par_iter()
        .map(run_prefix)
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                match a.get_mut(&k) {
                    Some(slot) => {
                        for (x, y) in slot.iter_mut().zip(&v) {
                            *x += y;
                        }
                    }
                    None => {
                        a.insert(k, v);
                    }
                }
            }
            a
        });

    // weight table: p^e (1-p)^{M-e}
    let q = T::one() - p.clone();
    let mut weights: Vec<T> = Vec::with_capacity(m_edges + 1);
    for e in 0..=m_edges {
        weights.push(p.powu(e as u64) * q.powu((m_edges - e) as u64));
    }
    let entries: BTreeMap<u128, T> = merged
        .into_iter()
        .map(|(k, hist)| {
            let mut acc = T::zero();
            for (e, &c) in hist.iter().enumerate() {
                if c != 0 {
                    acc = acc + T::from_u64(c) * weights[e].clone();
                }
            }
            (k, acc)
        })
        .collect();

    Ok(Distribution { n, r, mode: DistMode::Exact, entries, stderr: BTreeMap::new() })
}

/// Monte Carlo re-estimate of the small-`n` law: same canonical keys, relative
/// frequencies, and per-key standard errors `sqrt(phat (1-phat) / samples)`.
pub fn estimated_distribution(
    n: usize,
    r: usize,
    p: f64,
    samples: u64,
    stream: &RngStream,
) -> Result<Distribution<f64>> {
    if binomial(n, r) > 128 {
        return Err(Error::GuardExceeded("outcome masks need C(n,r) <= 128".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need samples >= 1".into()));
    }
    let n_batches = samples.div_ceil(MC_BATCH);
    let partials: Vec<HashMap<u128, u64>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut local: HashMap<u128, u64> = HashMap::new();
            for s in 0..count {
                let g = sample_gnp(n, p, &stream.substream(b * MC_BATCH + s));
                let h = clique_hypergraph(&g, r);
                *local.entry(crate::cliques::outcome_mask(&h)).or_insert(0) += 1;
            }
            local
        })
        .collect();
    let mut counts: BTreeMap<u128, u64> = BTreeMap::new();
    for part in partials {
        for (k, v) in part {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    let total = samples as f64;
    let mut entries = BTreeMap::new();
    let mut stderr = BTreeMap::new();
    for (k, c) in counts {
        let phat = c as f64 / total;
        entries.insert(k, phat);
        stderr.insert(k, (phat * (1.0 - phat) / total).sqrt());
    }
    Ok(Distribution { n, r, mode: DistMode::Estimated, entries, stderr })
}

/// Which exponential correction the model applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LambdaVariant {
    /// `Lambda(n,r)`: all overlap sizes (sparse regime).
    #[default]
    Full,
    /// `Lambda'(n,r)`: the `s = 2` term only (constant-`p` regime).
    PairOnly,
}

/// Log of the reweighted-binomial model probability:
/// `e(H) ln pi + (N - e(H)) ln(1-pi) - t(H) ln p - Lambda`.
pub fn model_log_prob<T: Scalar>(
    h: &RUniformHypergraph,
    table: &MomentTable<T>,
    variant: LambdaVariant,
) -> f64 {
    let e = h.edge_count() as f64;
    let n_members = table.n_members as f64;
    let pi = table.pi.to_f64();
    let p = table.p.to_f64();
    let lambda = match variant {
        LambdaVariant::Full => table.lambda.to_f64(),
        LambdaVariant::PairOnly => table.lambda_prime.to_f64(),
    };
    e * pi.ln() + (n_members - e) * (1.0 - pi).ln() - crate::cliques::t_of(h) as f64 * p.ln()
        - lambda
}

/// The model as a weight vector over the support of the exact law (realizable
/// hypergraphs); mass placed elsewhere is reported via [`model_mass_report`].
pub fn model_distribution<T: Scalar>(
    support: &Distribution<T>,
    table: &MomentTable<T>,
    variant: LambdaVariant,
) -> Distribution<f64> {
    let entries: BTreeMap<u128, f64> = support
        .iter()
        .map(|(&k, _)| {
            let h = hypergraph_of_mask(support.n, support.r, k);
            (k, model_log_prob(&h, table, variant).exp())
        })
        .collect();
    Distribution {
        n: support.n,
        r: support.r,
        mode: DistMode::Exact,
        entries,
        stderr: BTreeMap::new(),
    }
}

/// Total variation distance `(1/2) sum |p1 - p2|` over the union key space.
pub fn tv_distance<T: Scalar>(a: &Distribution<T>, b: &Distribution<T>) -> Result<T> {
    if a.n != b.n || a.r != b.r {
        return Err(Error::InvalidParameter("distributions live on different (n,r)".into()));
    }
    let mut keys: Vec<u128> = a.keys().chain(b.keys()).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut acc = T::zero();
    for k in keys {
        let x = a.prob(k);
        let y = b.prob(k);
        let d = if x >= y { x - y } else { y - x };
        acc = acc + d;
    }
    Ok(acc / (T::one() + T::one()))
}

/// Masses the unnormalized model assigns to realizable vs unrealizable
/// hypergraphs, by Gray-code enumeration over all `2^N` outcome masks.
#[derive(Clone, Debug)]
pub struct ModelMassReport {
    pub total: f64,
    pub realizable: f64,
    pub unrealizable: f64,
}

pub fn model_mass_report<T: Scalar>(
    table: &MomentTable<T>,
    variant: LambdaVariant,
    support: &Distribution<T>,
) -> Result<ModelMassReport> {
    let n = table.n;
    let r = table.r;
    let n_members = binomial(n, r) as usize;
    if n_members > 22 && !crate::guard_override() {
        return Err(Error::GuardExceeded(format!(
            "model mass enumeration over 2^{n_members} outcomes is out of desk scale"
        )));
    }
    let fam = CliqueFamily::new(n, r);
    let m_edges = binomial(n, 2) as usize;
    let r2 = binomial(r, 2) as usize;
    // pair-coverage counters drive incremental t(H) = C(r,2) e(H) - e(shadow)
    let mut cover = vec![0u32; m_edges];
    let mut shadow_edges: usize = 0;
    let mut e_members: usize = 0;
    let member_pairs: Vec<Vec<usize>> = (0..fam.len())
        .map(|i| {
            let vs = fam.member(i);
            let mut ps = Vec::new();
            for (a, &u) in vs.iter().enumerate() {
                for &v in &vs[a + 1..] {
                    ps.push(pair_index(n, u as usize, v as usize));
                }
            }
            ps
        })
        .collect();
    // counts[e][t] over all outcome masks
    let mut counts = vec![vec![0u64; r2 * n_members + 1]; n_members + 1];
    let steps: u128 = 1u128 << n_members;
    let mut gray: u128 = 0;
    let mut i: u128 = 0;
    loop {
        let t = r2 * e_members - shadow_edges;
        counts[e_members][t] += 1;
        i += 1;
        if i == steps {
            break;
        }
        let bit = i.trailing_zeros() as usize;
        let on = gray >> bit & 1 == 0;
        gray ^= 1 << bit;
        if on {
            e_members += 1;
            for &pidx in &member_pairs[bit] {
                if cover[pidx] == 0 {
                    shadow_edges += 1;
                }
                cover[pidx] += 1;
            }
        } else {
            e_members -= 1;
            for &pidx in &member_pairs[bit] {
                cover[pidx] -= 1;
                if cover[pidx] == 0 {
                    shadow_edges -= 1;
                }
            }
        }
    }
    let pi = table.pi.to_f64();
    let p = table.p.to_f64();
    let lambda = match variant {
        LambdaVariant::Full => table.lambda.to_f64(),
        LambdaVariant::PairOnly => table.lambda_prime.to_f64(),
    };
    let mut total = 0.0;
    for (e, row) in counts.iter().enumerate() {
        for (t, &c) in row.iter().enumerate() {
            if c != 0 {
                let logw = e as f64 * pi.ln() + (n_members - e) as f64 * (1.0 - pi).ln()
                    - t as f64 * p.ln()
                    - lambda;
                total += c as f64 * logw.exp();
            }
        }
    }
    let model = model_distribution(support, table, variant);
    let realizable = model.total_mass();
    Ok(ModelMassReport { total, realizable, unrealizable: total - realizable })
}

/// Outcome of a predicate evaluation, carrying the violated clauses.
#[derive(Clone, Debug)]
pub struct PredicateReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

impl PredicateReport {
    fn from_violations(violations: Vec<String>) -> Self {
        PredicateReport { pass: violations.is_empty(), violations }
    }
}

/// Everything the typicality predicates compare against, on the float view.
#[derive(Clone, Debug)]
pub struct PredicateConfig {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    /// The slowly-growing function `omega(n)`; a config knob here.
    pub omega: f64,
    /// Exponent `C` in the `(log n)^C` slack factors.
    pub plaus_c: f64,
    /// `delta in (0, 1/4)` of the plausibility edge-count window.
    pub plaus_delta: f64,
    pub mu: f64,
    pub nu: Vec<f64>,
    pub expected_q: [f64; 3],
    pub expected_c: f64,
    pub expected_c_hat_legal: f64,
    pub delta3: f64,
    /// Role convention used for `Q_3` on both sides of the good-ness clause.
    pub q3_convention: Q3Convention,
    /// Standard errors of Monte Carlo-estimated expectations (empty when exact).
    pub estimate_stderr: BTreeMap<String, f64>,
}

/// Default `omega(n) = lnln(max(n,3)) + 3`.
pub fn default_omega(n: usize) -> f64 {
    ((n.max(3) as f64).ln()).ln() + 3.0
}

impl PredicateConfig {
    /// Exact expectations at enumeration scale: `E[Q_i]` by tuple enumeration,
    /// `E[C]` against the provided exact law, `E[C_hat_L]` by star enumeration,
    /// `Delta_3` by connected-triple enumeration.
    pub fn exact<T: Scalar>(
        table: &MomentTable<T>,
        law: &Distribution<T>,
        omega: f64,
        plaus_c: f64,
        plaus_delta: f64,
    ) -> Result<Self> {
        check_delta(plaus_delta)?;
        let (n, r) = (table.n, table.r);
        let p = table.p.to_f64();
        let expected_c = law
            .expectation(|h| complex_sum(h, &table.p).expect("support is realizable"))
            .to_f64();
        Ok(PredicateConfig {
            n,
            r,
            p,
            omega,
            plaus_c,
            plaus_delta,
            mu: table.mu.to_f64(),
            nu: table.nu.iter().map(|x| x.to_f64()).collect(),
            expected_q: [
                table.delta2.to_f64(),
                expected_q3(n, r, &p, Q3Convention::Ordered),
                expected_q4(n, r, &p),
            ],
            expected_c,
            expected_c_hat_legal: expected_c_hat_legal(n, r, &p)?,
            delta3: delta_k_exact(n, r, &p, 3)?,
            q3_convention: Q3Convention::Ordered,
            estimate_stderr: BTreeMap::new(),
        })
    }

    /// Monte Carlo expectations with recorded standard errors, for `n` beyond
    /// exact enumeration (still desk scale: per-sample `Q`/`C` enumeration).
    pub fn estimate<T: Scalar>(
        table: &MomentTable<T>,
        samples: u64,
        stream: &RngStream,
        omega: f64,
        plaus_c: f64,
        plaus_delta: f64,
    ) -> Result<Self> {
        check_delta(plaus_delta)?;
        let (n, r) = (table.n, table.r);
        let p = table.p.to_f64();
        if samples == 0 {
            return Err(Error::InvalidParameter("need samples >= 1".into()));
        }
        let names = ["q2", "q3", "q4", "c", "c_hat_legal", "w3"];
        let sums = mc_fold(samples, stream, move |run_stream| {
            let g = sample_gnp(n, p, &run_stream);
            let h = clique_hypergraph(&g, r);
            vec![
                q2(&h) as f64,
                q3(&h, &p, Q3Convention::Ordered),
                q4(&h, &p),
                complex_sum(&h, &p).unwrap_or(0.0),
                c_hat_legal(&h, &p).unwrap_or(0.0),
                count_wk(&h, 3).unwrap_or(0) as f64,
            ]
        });
        let mean = |i: usize| sums.sum[i] / samples as f64;
        let se = |i: usize| {
            let m = mean(i);
            let var = (sums.sum_sq[i] / samples as f64 - m * m).max(0.0);
            (var / samples as f64).sqrt()
        };
        let estimate_stderr: BTreeMap<String, f64> =
            names.iter().enumerate().map(|(i, n)| (n.to_string(), se(i))).collect();
        Ok(PredicateConfig {
            n,
            r,
            p,
            omega,
            plaus_c,
            plaus_delta,
            mu: table.mu.to_f64(),
            nu: table.nu.iter().map(|x| x.to_f64()).collect(),
            expected_q: [table.delta2.to_f64(), mean(1), mean(2)],
            expected_c: mean(3),
            expected_c_hat_legal: mean(4),
            delta3: mean(5),
            q3_convention: Q3Convention::Ordered,
            estimate_stderr,
        })
    }

    /// Switches the `Q_3` role convention, recomputing `E[Q_3]` by exact tuple
    /// enumeration (desk scale only).
    pub fn with_q3_convention(mut self, convention: Q3Convention) -> Self {
        self.q3_convention = convention;
        self.expected_q[1] = expected_q3(self.n, self.r, &self.p, convention);
        self
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::InvalidParameter(format!("plaus_delta must lie in (0, 1/4), got {delta}")));
    }
    Ok(())
}

/// Good: realizable, edge count within `omega sqrt(mu)` of `mu`, and the
/// `Q_i` / `C` functionals within `omega` times their means.
pub fn is_good(h: &RUniformHypergraph, cfg: &PredicateConfig) -> PredicateReport {
    let mut v = Vec::new();
    if !is_clique_realizable(h) {
        v.push("not H_r(G) of any graph".to_string());
        return PredicateReport::from_violations(v);
    }
    let e = h.edge_count() as f64;
    if (e - cfg.mu).abs() > cfg.omega * cfg.mu.sqrt() {
        v.push(format!("edge count {e} outside mu +- omega sqrt(mu) = {} +- {}", cfg.mu, cfg.omega * cfg.mu.sqrt()));
    }
    let qs = [
        q2(h) as f64,
        q3(h, &cfg.p, cfg.q3_convention),
        q4(h, &cfg.p),
    ];
    for (i, (q, bound)) in qs.iter().zip(cfg.expected_q.iter()).enumerate() {
        if *q > cfg.omega * bound {
            v.push(format!("Q{}(H) = {q} exceeds omega E[Q{}] = {}", i + 2, i + 2, cfg.omega * bound));
        }
    }
    let c = complex_sum(h, &cfg.p).expect("realizable checked above");
    if c > cfg.omega * cfg.expected_c {
        v.push(format!("C(H) = {c} exceeds omega E[C] = {}", cfg.omega * cfg.expected_c));
    }
    PredicateReport::from_violations(v)
}

/// Plausible: overlap-pair counts within `(ln n)^C` of their means for
/// `k in {0,1,2,r-1}`, none at all for `3 <= k <= r-2`, and the edge count
/// within `n^{1-delta}` of `mu`.
pub fn is_plausible(h: &RUniformHypergraph, cfg: &PredicateConfig) -> PredicateReport {
    let mut v = Vec::new();
    let rep = t_counts(h);
    let slack = (cfg.n as f64).ln().powf(cfg.plaus_c);
    let mut checked: Vec<usize> = vec![0, 1, 2];
    if cfg.r >= 2 {
        checked.push(cfg.r - 1);
    }
    checked.sort_unstable();
    checked.dedup();
    for k in checked {
        if k >= cfg.r {
            continue;
        }
        let t = rep.t_by_size[k] as f64;
        if t > slack * cfg.nu[k] {
            v.push(format!("t_{k}(H) = {t} exceeds (ln n)^C nu_{k} = {}", slack * cfg.nu[k]));
        }
    }
    for k in 3..cfg.r.saturating_sub(1) {
        if rep.t_by_size[k] != 0 {
            v.push(format!("t_{k}(H) = {} but must vanish", rep.t_by_size[k]));
        }
    }
    let e = h.edge_count() as f64;
    let window = (cfg.n as f64).powf(1.0 - cfg.plaus_delta);
    if (e - cfg.mu).abs() > window {
        v.push(format!("edge count {e} outside mu +- n^(1-delta) = {} +- {window}", cfg.mu));
    }
    PredicateReport::from_violations(v)
}

/// Well behaved: good, and `W_3(H) <= omega Delta_3`.
pub fn is_well_behaved(h: &RUniformHypergraph, cfg: &PredicateConfig) -> PredicateReport {
    let mut base = is_good(h, cfg);
    let w3 = count_wk(h, 3).unwrap_or(0) as f64;
    if w3 > cfg.omega * cfg.delta3 {
        base.violations.push(format!("W3(H) = {w3} exceeds omega Delta3 = {}", cfg.omega * cfg.delta3));
        base.pass = false;
    }
    base
}

/// Reasonable: plausible, legal, and `C_hat_L(H) <= (ln n)^C E[C_hat_L]`.
pub fn is_reasonable(h: &RUniformHypergraph, cfg: &PredicateConfig) -> PredicateReport {
    let mut base = is_plausible(h, cfg);
    if !is_legal(h) {
        base.violations.push("contains an illegal cluster".to_string());
        base.pass = false;
    }
    match c_hat_legal(h, &cfg.p) {
        Ok(chl) => {
            let slack = (cfg.n as f64).ln().powf(cfg.plaus_c);
            if chl > slack * cfg.expected_c_hat_legal {
                base.violations.push(format!(
                    "C_hat_L(H) = {chl} exceeds (ln n)^C E[C_hat_L] = {}",
                    slack * cfg.expected_c_hat_legal
                ));
                base.pass = false;
            }
        }
        Err(e) => {
            base.violations.push(format!("C_hat_L unavailable: {e}"));
            base.pass = false;
        }
    }
    base
}

/// One summary statistic from a Monte Carlo run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McStat {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
}

/// Deterministic Monte Carlo summary: per-statistic mean, standard error, count.
#[derive(Clone, Debug, Default)]
pub struct McSummary {
    pub entries: BTreeMap<String, McStat>,
}

impl McSummary {
    pub fn get(&self, name: &str) -> Option<McStat> {
        self.entries.get(name).copied()
    }

    /// CSV with header `statistic,mean,stderr,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,mean,stderr,count\n");
        for (name, stat) in &self.entries {
            out.push_str(&format!(
                "{name},{},{},{}\n",
                crate::scalar::format_real(stat.mean),
                crate::scalar::format_real(stat.stderr),
                stat.count
            ));
        }
        out
    }
}

struct FoldSums {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

const MC_BATCH: u64 = 512;

/// Seeded batched fold: batch `b` draws from `stream.substream(b)`, partial
/// sums are combined in batch order, so results do not depend on thread count.
fn mc_fold<F>(samples: u64, stream: &RngStream, per_sample: F) -> FoldSums
where
    F: Fn(RngStream) -> Vec<f64> + Sync,
{
    let n_batches = samples.div_ceil(MC_BATCH);
    let mut partials: Vec<(Vec<f64>, Vec<f64>)> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut sum: Vec<f64> = Vec::new();
            let mut sum_sq: Vec<f64> = Vec::new();
            for s in 0..count {
                let run = stream.substream(b * MC_BATCH + s);
                let vals = per_sample(run);
                if sum.is_empty() {
                    sum = vec![0.0; vals.len()];
                    sum_sq = vec![0.0; vals.len()];
                }
                for (i, v) in vals.iter().enumerate() {
                    sum[i] += v;
                    sum_sq[i] += v * v;
                }
            }
            (sum, sum_sq)
        })
        .collect();
    let width = partials.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    let mut sums = FoldSums { sum: vec![0.0; width], sum_sq: vec![0.0; width] };
    for (s, sq) in partials.drain(..) {
        for i in 0..s.len() {
            sums.sum[i] += s[i];
            sums.sum_sq[i] += sq[i];
        }
    }
    sums
}

/// Seeded parallel Monte Carlo over `G(n,p)` samples. Always reports the edge
/// count of `H_r`, `W_2`, `W_3`, and `t(H)`; with a [`PredicateConfig`], also
/// the good / plausible / well-behaved rates.
pub fn monte_carlo_stats(
    n: usize,
    r: usize,
    p: f64,
    samples: u64,
    stream: &RngStream,
    cfg: Option<&PredicateConfig>,
) -> Result<McSummary> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need samples >= 1".into()));
    }
    let names: Vec<&str> = if cfg.is_some() {
        vec!["edges", "w2", "w3", "t_total", "good_rate", "plausible_rate", "well_behaved_rate"]
    } else {
        vec!["edges", "w2", "w3", "t_total"]
    };
    let sums = mc_fold(samples, stream, |run| {
        let g = sample_gnp(n, p, &run);
        let h = clique_hypergraph(&g, r);
        let mut vals = vec![
            h.edge_count() as f64,
            q2(&h) as f64,
            count_wk(&h, 3).unwrap_or(0) as f64,
            crate::cliques::t_of(&h) as f64,
        ];
        if let Some(cfg) = cfg {
            vals.push(if is_good(&h, cfg).pass { 1.0 } else { 0.0 });
            vals.push(if is_plausible(&h, cfg).pass { 1.0 } else { 0.0 });
            vals.push(if is_well_behaved(&h, cfg).pass { 1.0 } else { 0.0 });
        }
        vals
    });
    let mut entries = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        let mean = sums.sum[i] / samples as f64;
        let var = (sums.sum_sq[i] / samples as f64 - mean * mean).max(0.0);
        let stderr = if samples > 1 {
            (var * samples as f64 / (samples - 1) as f64 / samples as f64).sqrt()
        } else {
            f64::INFINITY
        };
        entries.insert(name.to_string(), McStat { mean, stderr, count: samples });
    }
    Ok(McSummary { entries })
}

/// Exact binomial point probability `Pr(Bin(N, pi) = m)`.
pub fn binomial_point_prob<T: Scalar>(n_trials: u128, pi: &T, m: u128) -> Result<T> {
    if m > n_trials {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds N = {n_trials}")));
    }
    // C(N, m) can be astronomically large; build it in the scalar type
    let mut coeff = T::one();
    let k = m.min(n_trials - m);
    for i in 0..k {
        coeff = coeff * T::from_u128(n_trials - i) / T::from_u128(i + 1);
    }
    Ok(coeff * pi.powu(m as u64) * (T::one() - pi.clone()).powu((n_trials - m) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, Zero};

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn tiny_triangle_law() {
        let d = exact_distribution(3, 3, &half()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.prob(0), Rational::new(7.into(), 8.into()));
        assert_eq!(d.prob(1), Rational::new(1.into(), 8.into()));
        assert_eq!(d.total_mass(), Rational::one());
    }

    #[test]
    fn mass_one_and_support_realizable() {
        for (n, r, p) in [(4usize, 3usize, half()), (5, 3, Rational::new(1.into(), 4.into()))] {
            let d = exact_distribution(n, r, &p).unwrap();
            assert_eq!(d.total_mass(), Rational::one(), "(n,r)=({n},{r})");
            for key in d.keys() {
                let h = hypergraph_of_mask(n, r, key);
                assert!(is_clique_realizable(&h));
            }
        }
    }

    #[test]
    fn empty_outcome_matches_triangle_free_count() {
        // oracle: direct count over all 64 graphs on 4 vertices
        let mut free = 0u64;
        for mask in 0u64..64 {
            let mut g = crate::cliques::LabeledGraph::empty(4);
            for (idx, (u, v)) in
                (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).enumerate()
            {
                if mask >> idx & 1 == 1 {
                    g.add_edge(u, v);
                }
            }
            if clique_hypergraph(&g, 3).edge_count() == 0 {
                free += 1;
            }
        }
        let d = exact_distribution(4, 3, &half()).unwrap();
        assert_eq!(d.prob(0), Rational::new(free.into(), 64.into()));
    }

    #[test]
    fn expectation_of_edges_is_mu() {
        let p = half();
        let d = exact_distribution(5, 3, &p).unwrap();
        let table = crate::moments::moment_table(5, 3, &p).unwrap();
        let mean_edges = d.expectation(|h| Rational::from_usize(h.edge_count()));
        assert_eq!(mean_edges, table.mu);
    }

    #[test]
    fn model_exact_on_k3() {
        // n = r = 3: no overlaps, Lambda = 0, t = 0: the model is exact
        let p = half();
        let table = crate::moments::moment_table(3, 3, &p).unwrap();
        let d = exact_distribution(3, 3, &p).unwrap();
        for (&key, prob) in d.iter() {
            let h = hypergraph_of_mask(3, 3, key);
            let model = model_log_prob(&h, &table, LambdaVariant::Full).exp();
            assert!((model - prob.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn tv_basics() {
        let d = exact_distribution(4, 3, &half()).unwrap();
        assert_eq!(tv_distance(&d, &d).unwrap(), Rational::zero());
        let mut a = d.clone();
        a.entries.clear();
        a.entries.insert(0, Rational::one());
        let mut b = d.clone();
        b.entries.clear();
        b.entries.insert(1, Rational::one());
        assert_eq!(tv_distance(&a, &b).unwrap(), Rational::one());
    }

    #[test]
    fn estimated_law_close_to_exact() {
        let p = 0.5;
        let exact = exact_distribution(4, 3, &half()).unwrap().to_f64();
        let est = estimated_distribution(4, 3, p, 20_000, &RngStream::new(11, 0)).unwrap();
        let tv = tv_distance(&exact, &est).unwrap();
        assert!(tv < 0.03, "tv = {tv}");
        let est2 = estimated_distribution(4, 3, p, 20_000, &RngStream::new(11, 0)).unwrap();
        assert_eq!(est.entries, est2.entries);
    }

    #[test]
    fn predicates_on_tiny_instances() {
        let p = half();
        let table = crate::moments::moment_table(6, 3, &p).unwrap();
        let law = exact_distribution(6, 3, &p).unwrap();
        let cfg = PredicateConfig::exact(&table, &law, 10.0, 1.0, 0.2).unwrap();
        // a typical sample is good and well behaved at omega = 10
        let g = sample_gnp(6, 0.5, &RngStream::new(3, 1));
        let h = clique_hypergraph(&g, 3);
        assert!(is_good(&h, &cfg).pass, "{:?}", is_good(&h, &cfg).violations);
        assert!(is_well_behaved(&h, &cfg).pass);
        // the empty hypergraph fails the edge-count clause here (mu = 2.5,
        // omega sqrt(mu) covers 0 only if omega large; with omega = 1 it fails)
        let strict = PredicateConfig::exact(&table, &law, 1.0, 1.0, 0.2).unwrap();
        let empty = RUniformHypergraph::empty(6, 3);
        assert!(!is_good(&empty, &strict).pass);
        // non-realizable fails with the dedicated reason
        let bad = RUniformHypergraph::new(
            6,
            3,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]],
        )
        .unwrap();
        let rep = is_good(&bad, &cfg);
        assert!(!rep.pass && rep.violations[0].contains("not H_r(G)"));
    }

    #[test]
    fn plausibility_tk_zero_clause() {
        // r = 5 desk case: a pair overlapping in 3 vertices breaks plausibility
        let p = 0.4f64;
        let table = crate::moments::moment_table(10, 5, &p).unwrap();
        let cfg = PredicateConfig {
            n: 10,
            r: 5,
            p,
            omega: 10.0,
            plaus_c: 1.0,
            plaus_delta: 0.2,
            mu: table.mu,
            nu: table.nu.clone(),
            expected_q: [1.0, 1.0, 1.0],
            expected_c: 1.0,
            expected_c_hat_legal: 1.0,
            delta3: 1.0,
            q3_convention: Q3Convention::Ordered,
            estimate_stderr: BTreeMap::new(),
        };
        let h = RUniformHypergraph::new(
            10,
            5,
            vec![vec![0, 1, 2, 3, 4], vec![0, 1, 2, 5, 6]],
        )
        .unwrap();
        let rep = is_plausible(&h, &cfg);
        assert!(rep.violations.iter().any(|v| v.contains("t_3")));
    }

    #[test]
    fn mc_reproducible_and_calibrated() {
        let s = RngStream::new(99, 0);
        let a = monte_carlo_stats(20, 3, 0.2, 2000, &s, None).unwrap();
        let b = monte_carlo_stats(20, 3, 0.2, 2000, &s, None).unwrap();
        assert_eq!(a.get("edges"), b.get("edges"));
        let mu = crate::moments::moment_table(20, 3, &0.2f64).unwrap().mu;
        let stat = a.get("edges").unwrap();
        assert!((stat.mean - mu).abs() <= 4.0 * stat.stderr, "mean {} vs mu {mu}", stat.mean);
    }

    #[test]
    fn model_mass_splits_between_realizable_and_not() {
        let p = half();
        let table = crate::moments::moment_table(5, 3, &p).unwrap();
        let law = exact_distribution(5, 3, &p).unwrap();
        let report = model_mass_report(&table, LambdaVariant::Full, &law).unwrap();
        let direct = model_distribution(&law, &table, LambdaVariant::Full).total_mass();
        assert!((report.realizable - direct).abs() < 1e-9);
        assert!(report.unrealizable >= -1e-9);
        assert!((report.total - report.realizable - report.unrealizable).abs() < 1e-9);
    }

    #[test]
    fn variance_of_edge_count_is_bounded() {
        // Var(e) <= mu + 2 Delta2, exactly, by rational comparison
        let p = half();
        for (n, r) in [(5usize, 3usize), (6, 3), (6, 4)] {
            let t = crate::moments::moment_table(n, r, &p).unwrap();
            let d = exact_distribution(n, r, &p).unwrap();
            let mean_sq = d.expectation(|h| {
                Rational::from_usize(h.edge_count() * h.edge_count())
            });
            let var = mean_sq - t.mu.clone() * t.mu.clone();
            let bound = t.mu.clone() + t.delta2.clone() + t.delta2.clone();
            assert!(var <= bound, "(n,r)=({n},{r})");
        }
    }

    #[test]
    fn q_expectations_match_law_integration() {
        // two routes: tuple-enumeration formulas vs integration over the law
        let p = half();
        let (n, r) = (5usize, 3usize);
        let d = exact_distribution(n, r, &p).unwrap();
        let via_law_q3 = d.expectation(|h| q3(h, &p, Q3Convention::Ordered));
        assert_eq!(via_law_q3, expected_q3(n, r, &p, Q3Convention::Ordered));
        let via_law_q4 = d.expectation(|h| q4(h, &p));
        assert_eq!(via_law_q4, expected_q4(n, r, &p));
        let via_law_chl = d.expectation(|h| c_hat_legal(h, &p).unwrap());
        assert_eq!(via_law_chl, expected_c_hat_legal(n, r, &p).unwrap());
    }

    #[test]
    fn reasonable_predicate_reports() {
        let p = half();
        let table = crate::moments::moment_table(6, 3, &p).unwrap();
        let law = exact_distribution(6, 3, &p).unwrap();
        let cfg = PredicateConfig::exact(&table, &law, default_omega(6), 1.0, 0.2).unwrap();
        // a pair sharing exactly two vertices: legal, plausible, small C_hat_L
        let pair = RUniformHypergraph::new(6, 3, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let rep = is_reasonable(&pair, &cfg);
        assert!(rep.pass, "{:?}", rep.violations);
        // an illegal configuration is flagged with the legality clause
        let chain4 = RUniformHypergraph::new(
            9,
            3,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]],
        )
        .unwrap();
        let cfg9 = PredicateConfig { n: 9, ..cfg.clone() };
        let rep = is_reasonable(&chain4, &cfg9);
        assert!(rep.violations.iter().any(|v| v.contains("illegal")));
        // empty hypergraph fails the plausibility edge clause once mu > n^{1-delta}
        let p_dense = Rational::new(9.into(), 10.into());
        let table = crate::moments::moment_table(6, 3, &p_dense).unwrap();
        let law = exact_distribution(6, 3, &p_dense).unwrap();
        let cfg = PredicateConfig::exact(&table, &law, default_omega(6), 1.0, 0.2).unwrap();
        let rep = is_plausible(&RUniformHypergraph::empty(6, 3), &cfg);
        assert!(!rep.pass && rep.violations.iter().any(|v| v.contains("edge count")));
    }

    #[test]
    fn q3_convention_switch_is_consistent() {
        let p = half();
        let table = crate::moments::moment_table(5, 3, &p).unwrap();
        let law = exact_distribution(5, 3, &p).unwrap();
        let cfg = PredicateConfig::exact(&table, &law, default_omega(5), 1.0, 0.2)
            .unwrap()
            .with_q3_convention(Q3Convention::Unordered);
        // E[Q3] under the switched convention still matches law integration
        let via_law = law.expectation(|h| q3(h, &p, Q3Convention::Unordered)).to_f64();
        assert!((via_law - cfg.expected_q[1]).abs() < 1e-12);
    }

    #[test]
    fn binomial_point_prob_sums_to_one() {
        let pi = half().powu(3);
        let total: Rational =
            (0..=4u128).map(|m| binomial_point_prob(4, &pi, m).unwrap()).fold(Rational::zero(), |a, b| a + b);
        assert_eq!(total, Rational::one());
    }
}
