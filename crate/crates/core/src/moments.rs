//! Closed-form moments and thresholds for the clique hypergraph of `G(n,p)`,
//! plus enumeration-based exact `Delta_k` as the independent oracle.

use serde_json::{json, Value};

use crate::cliques::CliqueFamily;
use crate::clusters::for_each_connected_subset;
use crate::error::{Error, Result};
use crate::scalar::{dot_powers, format_real, Scalar};

/// Binomial coefficient in `u128` (panics on overflow; fine at desk scale).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Falling factorial `(x)_k = x (x-1) ... (x-k+1)` as a scalar.
pub fn falling<T: Scalar>(x: u128, k: usize) -> T {
    let mut acc = T::one();
    for i in 0..k as u128 {
        if i > x {
            return T::zero();
        }
        acc = acc * T::from_u128(x - i);
    }
    acc
}

/// `n!` as a scalar.
pub fn factorial<T: Scalar>(n: usize) -> T {
    let mut acc = T::one();
    for i in 2..=n {
        acc = acc * T::from_usize(i);
    }
    acc
}

/// All closed-form quantities for one `(n, r, p)`.
///
/// Rationally-valued fields are scalars (exact on the rational backend); the
/// threshold and `xi` fields are inherently real and always `f64`.
#[derive(Clone, Debug)]
pub struct MomentTable<T> {
    pub n: usize,
    pub r: usize,
    pub p: T,
    /// `N = C(n,r)`.
    pub n_members: u128,
    /// `pi = p^{C(r,2)}`.
    pub pi: T,
    /// `mu_r = C(n,r) pi`: expected number of `r`-cliques.
    pub mu: T,
    /// `mu_{r+1}`.
    pub mu_next: T,
    /// `nu_k` for `0 <= k <= r-1`: expected pairs of copies sharing exactly `k` vertices.
    pub nu: Vec<T>,
    /// `nu_k^0 = p^{C(k,2)} nu_k`: the same expectation in `H_r(n,pi)`.
    pub nu0: Vec<T>,
    /// `Delta_2 = sum_{k=2}^{r-1} nu_k`.
    pub delta2: T,
    /// `Delta_2^0 = sum_{k=2}^{r-1} nu_k^0`.
    pub delta2_0: T,
    /// `Lambda(n,r)`, evaluated by its own closed form (equals `delta2 - delta2_0`).
    pub lambda: T,
    /// `Lambda'(n,r) = nu_2 - nu_2^0` (the `s = 2` term only).
    pub lambda_prime: T,
    /// `phi = max_{i != j} Pr(A_i | A_j) = p^{r-1}`.
    pub phi: T,
    /// Error-scale `xi`: `n^5 p^7 + sqrt(n^5 p^7)` (r=3), `n^3 p^6 + n^8 p^16` (r=4),
    /// `mu_{r+1}` (r>=5).
    pub xi: f64,
    /// The individual summands of `xi` (the r=3 case mixes orders).
    pub xi_terms: Vec<f64>,
    /// Sharp `K_r`-factor threshold `q_r = ((r-1)! ln n)^{1/C(r,2)} n^{-2/r}`.
    pub q_threshold: f64,
    /// Matching threshold `m_r = n ln n / r`.
    pub m_threshold: f64,
    /// `pi_r = m_r / N`.
    pub pi_threshold: f64,
    /// `Sigma(n,pi)`: expected number of perfect matchings in `H_r(n,pi)`, when `r | n`.
    pub sigma_npi: Option<T>,
}

/// Computes the full table. Preconditions: `3 <= r <= n`, `0 < p < 1`.
pub fn moment_table<T: Scalar>(n: usize, r: usize, p: &T) -> Result<MomentTable<T>> {
    if r < 3 || r > n {
        return Err(Error::InvalidParameter(format!("need 3 <= r <= n, got r = {r}, n = {n}")));
    }
    if !(p.clone() > T::zero() && p.clone() < T::one()) {
        return Err(Error::InvalidParameter("need 0 < p < 1".into()));
    }
    let r2 = binomial(r, 2) as u64;
    let n_members = binomial(n, r);
    let pi = p.powu(r2);
    let mu = T::from_u128(n_members) * pi.clone();
    let mu_next = T::from_u128(binomial(n, r + 1)) * p.powu(binomial(r + 1, 2) as u64);

    let mut nu = Vec::with_capacity(r);
    let mut nu0 = Vec::with_capacity(r);
    for k in 0..r {
        let pairs = binomial(n, r) * binomial(r, k) * binomial(n - r, r - k);
        let coeff = T::from_ratio_u128(pairs, 2);
        let k2 = binomial(k, 2) as u64;
        nu.push(coeff.clone() * p.powu(2 * r2 - k2));
        nu0.push(coeff * p.powu(2 * r2));
    }
    let sum_from2 = |v: &[T]| {
        v.iter().skip(2).fold(T::zero(), |acc, x| acc + x.clone())
    };
    let delta2 = sum_from2(&nu);
    let delta2_0 = sum_from2(&nu0);

    // Lambda by its own closed form, independent of the nu sums
    let mut lambda = T::zero();
    for s in 2..r {
        let pairs = binomial(n, r) * binomial(r, s) * binomial(n - r, r - s);
        let s2 = binomial(s, 2) as u64;
        let inflate = T::one() / p.powu(s2) - T::one();
        lambda = lambda + T::from_ratio_u128(pairs, 2) * p.powu(2 * r2) * inflate;
    }
    let lambda_prime = nu[2].clone() - nu0[2].clone();
    let phi = p.powu(r as u64 - 1);

    let pf = p.to_f64();
    let nf = n as f64;
    let xi_terms: Vec<f64> = match r {
        3 => {
            let a = nf.powi(5) * pf.powi(7);
            vec![a, a.sqrt()]
        }
        4 => vec![nf.powi(3) * pf.powi(6), nf.powi(8) * pf.powi(16)],
        _ => vec![mu_next.to_f64()],
    };
    let xi = xi_terms.iter().sum();

    let q_threshold =
        (factorial::<f64>(r - 1) * nf.ln()).powf(1.0 / r2 as f64) * nf.powf(-2.0 / r as f64);
    let m_threshold = nf * nf.ln() / r as f64;
    let pi_threshold = m_threshold / n_members as f64;

    let sigma_npi =
        if n % r == 0 { Some(sigma_npi_value(n, r, &pi)?) } else { None };

    Ok(MomentTable {
        n,
        r,
        p: p.clone(),
        n_members,
        pi,
        mu,
        mu_next,
        nu,
        nu0,
        delta2,
        delta2_0,
        lambda,
        lambda_prime,
        phi,
        xi,
        xi_terms,
        q_threshold,
        m_threshold,
        pi_threshold,
        sigma_npi,
    })
}

impl<T: Scalar> MomentTable<T> {
    /// JSON with rationals as `num/den` strings and reals as fixed-precision decimals.
    pub fn to_json(&self) -> Value {
        let vec_obj = |v: &[T]| -> Value {
            let map: serde_json::Map<String, Value> = v
                .iter()
                .enumerate()
                .map(|(k, x)| (k.to_string(), Value::String(x.render())))
                .collect();
            Value::Object(map)
        };
        json!({
            "n": self.n,
            "r": self.r,
            "p": self.p.render(),
            "N": self.n_members.to_string(),
            "pi": self.pi.render(),
            "mu": self.mu.render(),
            "mu_next": self.mu_next.render(),
            "nu": vec_obj(&self.nu),
            "nu0": vec_obj(&self.nu0),
            "delta2": self.delta2.render(),
            "delta2_0": self.delta2_0.render(),
            "lambda": self.lambda.render(),
            "lambda_prime": self.lambda_prime.render(),
            "phi": self.phi.render(),
            "xi": format_real(self.xi),
            "xi_terms": self.xi_terms.iter().map(|x| format_real(*x)).collect::<Vec<_>>(),
            "q_threshold": format_real(self.q_threshold),
            "m_threshold": format_real(self.m_threshold),
            "pi_threshold": format_real(self.pi_threshold),
            "sigma_npi": self.sigma_npi.as_ref().map(|s| s.render()),
        })
    }
}

/// `phi = max_{i != j} Pr(A_i | A_j)` in closed form: the maximal overlap is
/// `r - 1` vertices, so `phi = p^{C(r,2) - C(r-1,2)} = p^{r-1}`.
pub fn phi_value<T: Scalar>(r: usize, p: &T) -> Result<T> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("phi needs r >= 3, got {r}")));
    }
    Ok(p.powu(r as u64 - 1))
}

/// `phi` cross-check: brute-force `max_{i != j} Pr(A_i | A_j)` over the actual
/// family. Needs `n >= r + 1` for any overlapping pair to exist.
pub fn phi_bruteforce<T: Scalar>(n: usize, r: usize, p: &T) -> Result<T> {
    if n < r + 1 {
        return Err(Error::InvalidParameter(format!(
            "phi brute force needs n >= r+1, got n = {n}, r = {r}"
        )));
    }
    let fam = CliqueFamily::new(n, r);
    let r2 = binomial(r, 2) as u64;
    let mut best_exponent = u64::MAX;
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if i == j {
                continue;
            }
            let t = fam.overlap_size(i, j);
            let exponent = r2 - binomial(t, 2) as u64;
            best_exponent = best_exponent.min(exponent);
        }
    }
    Ok(p.powu(best_exponent))
}

/// Exact `Delta_k = E[W_k(I)]`: sum over connected `k`-subsets of the complete
/// family of `p^{|R(S)|}`. Enumerates with connectivity pruning; `k` in 2..=4;
/// edge-union bookkeeping caps `n` at 16.
pub fn delta_k_exact<T: Scalar>(n: usize, r: usize, p: &T, k: usize) -> Result<T> {
    if !(2..=4).contains(&k) {
        return Err(Error::GuardExceeded(format!("delta_k supports k in 2..=4, got {k}")));
    }
    if n > 16 {
        return Err(Error::GuardExceeded(format!("delta_k edge masks need n <= 16, got {n}")));
    }
    let fam = CliqueFamily::new(n, r);
    let edge_masks: Vec<u128> = (0..fam.len())
        .map(|i| {
            let m = fam.member(i);
            let mut mask = 0u128;
            for (a, &u) in m.iter().enumerate() {
                for &v in &m[a + 1..] {
                    mask |= 1 << crate::cliques::pair_index(n, u as usize, v as usize);
                }
            }
            mask
        })
        .collect();
    let adjacency: Vec<Vec<u32>> = (0..fam.len())
        .map(|i| {
            (0..fam.len())
                .filter(|&j| fam.overlapping(i, j))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let max_exp = (binomial(r, 2) as usize) * k;
    let mut hist = vec![0u64; max_exp + 1];
    for_each_connected_subset(&adjacency, k, &mut |subset: &[u32]| {
        let union = subset.iter().fold(0u128, |m, &i| m | edge_masks[i as usize]);
        hist[union.count_ones() as usize] += 1;
    });
    Ok(dot_powers(&hist, p))
}

/// `Sigma(n,m)`: expected number of perfect matchings in `H_r(n,m)`.
pub fn sigma_nm<T: Scalar>(n: usize, r: usize, m: u128) -> Result<T> {
    let blocks = check_divisible(n, r)?;
    let n_members = binomial(n, r);
    if m > n_members {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds N = {n_members}")));
    }
    let base: T = matching_count_complete(n, r);
    Ok(base * falling::<T>(m, blocks) / falling::<T>(n_members, blocks))
}

/// `Sigma(n,pi)`: the corresponding expectation in `H_r(n,pi)`.
pub fn sigma_npi_value<T: Scalar>(n: usize, r: usize, pi: &T) -> Result<T> {
    let blocks = check_divisible(n, r)?;
    let base: T = matching_count_complete(n, r);
    Ok(base * pi.powu(blocks as u64))
}

/// `n! / (r!^{n/r} (n/r)!)`: perfect matchings of the complete `r`-uniform
/// hypergraph, equally the number of `K_r`-factors of `K_n`.
pub fn matching_count_complete<T: Scalar>(n: usize, r: usize) -> T {
    let blocks = n / r;
    factorial::<T>(n) / (factorial::<T>(r).powu(blocks as u64) * factorial::<T>(blocks))
}

/// `Sigma(n,pi)/Sigma(n,m)` at `pi = m/N`, exactly, plus the leading
/// approximation `exp(n^2 / (2 r^2 m))` for diagnostics.
#[derive(Clone, Debug)]
pub struct SigmaRatio<T> {
    pub exact: T,
    pub leading_approx: f64,
}

pub fn ratio_sigma<T: Scalar>(n: usize, r: usize, m: u128) -> Result<SigmaRatio<T>> {
    let blocks = check_divisible(n, r)?;
    let n_members = binomial(n, r);
    if m == 0 || m > n_members {
        return Err(Error::InvalidParameter(format!("need 0 < m <= N = {n_members}, got {m}")));
    }
    if (m as usize) < blocks {
        return Err(Error::InvalidParameter(format!(
            "Sigma(n,m) = 0 for m = {m} < n/r = {blocks}; ratio undefined"
        )));
    }
    let pi_pow = T::from_ratio_u128(m, n_members).powu(blocks as u64);
    let exact = pi_pow * falling::<T>(n_members, blocks) / falling::<T>(m, blocks);
    let leading_approx = ((n * n) as f64 / (2.0 * (r * r) as f64 * m as f64)).exp();
    Ok(SigmaRatio { exact, leading_approx })
}

fn check_divisible(n: usize, r: usize) -> Result<usize> {
    if r == 0 || n % r != 0 {
        return Err(Error::NotDivisible { n, r });
    }
    Ok(n / r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(num: i64, den: i64) -> Rational {
        Rational::new(num.into(), den.into())
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(50, 2), 1225);
    }

    #[test]
    fn table_values_n4_and_n5() {
        let t = moment_table(4, 3, &q(1, 2)).unwrap();
        assert_eq!(t.mu, q(1, 2));
        assert_eq!(t.pi, q(1, 8));

        let t = moment_table(5, 3, &q(1, 2)).unwrap();
        assert_eq!(t.nu[2], q(15, 16));
        assert_eq!(t.delta2, q(15, 16));
        assert_eq!(t.delta2_0, q(15, 32));
        assert_eq!(t.lambda, q(15, 32));
        assert_eq!(t.lambda_prime, q(15, 32));
        assert_eq!(t.lambda, t.delta2.clone() - t.delta2_0.clone());
    }

    #[test]
    fn nu0_is_pi_squared_route() {
        // independent route: nu_k^0 = (1/2) C(n,r) C(r,k) C(n-r,r-k) pi^2
        for (n, r) in [(6usize, 3usize), (6, 4), (7, 3)] {
            let p = q(2, 5);
            let t = moment_table(n, r, &p).unwrap();
            let pi2 = t.pi.clone() * t.pi.clone();
            for k in 0..r {
                let pairs = binomial(n, r) * binomial(r, k) * binomial(n - r, r - k);
                let expect = Rational::from_ratio_u128(pairs, 2) * pi2.clone();
                assert_eq!(t.nu0[k], expect, "(n,r,k)=({n},{r},{k})");
                assert_eq!(
                    t.nu0[k],
                    p.powu(binomial(k, 2) as u64) * t.nu[k].clone(),
                    "nu0 = p^C(k,2) nu at k={k}"
                );
            }
        }
    }

    #[test]
    fn xi_example() {
        let t = moment_table(10, 3, &0.1f64).unwrap();
        assert!((t.xi - 0.11).abs() < 1e-12);
        assert_eq!(t.xi_terms.len(), 2);
        assert!((t.xi_terms[0] - 0.01).abs() < 1e-14);
    }

    #[test]
    fn phi_matches_bruteforce() {
        let p = q(1, 2);
        let t = moment_table(5, 3, &p).unwrap();
        assert_eq!(t.phi, q(1, 4));
        assert_eq!(phi_value(3, &p).unwrap(), q(1, 4));
        assert_eq!(phi_bruteforce(5, 3, &p).unwrap(), q(1, 4));
        let t = moment_table(6, 4, &p).unwrap();
        assert_eq!(t.phi, phi_bruteforce(6, 4, &p).unwrap());
        assert!(moment_table(4, 2, &p).is_err());
        assert!(phi_value(2, &p).is_err());
    }

    #[test]
    fn delta2_exact_matches_nu_sum() {
        for (n, r) in [(5usize, 3usize), (6, 3), (6, 4)] {
            for p in [q(1, 4), q(1, 2), q(3, 4)] {
                let t = moment_table(n, r, &p).unwrap();
                let d2 = delta_k_exact(n, r, &p, 2).unwrap();
                assert_eq!(d2, t.delta2, "(n,r)=({n},{r}), p={p}");
            }
        }
        assert_eq!(delta_k_exact(5, 3, &q(1, 2), 2).unwrap(), q(15, 16));
    }

    #[test]
    fn delta3_matches_direct_triple_enumeration() {
        // oracle: loop over all unordered member triples, test connectivity of
        // the overlap relation directly, accumulate p^{|edge union|}
        let (n, r) = (5usize, 3usize);
        let p = q(1, 2);
        let fam = CliqueFamily::new(n, r);
        let mut expected = Rational::from_integer(0.into());
        for a in 0..fam.len() {
            for b in a + 1..fam.len() {
                for c in b + 1..fam.len() {
                    let ab = fam.overlapping(a, b);
                    let ac = fam.overlapping(a, c);
                    let bc = fam.overlapping(b, c);
                    let connected = (ab && ac) || (ab && bc) || (ac && bc);
                    if !connected {
                        continue;
                    }
                    let mut edges = std::collections::HashSet::new();
                    for &m in &[a, b, c] {
                        let verts = fam.member(m);
                        for (x, &u) in verts.iter().enumerate() {
                            for &v in &verts[x + 1..] {
                                edges.insert((u, v));
                            }
                        }
                    }
                    expected += p.powu(edges.len() as u64);
                }
            }
        }
        assert_eq!(delta_k_exact(n, r, &p, 3).unwrap(), expected);
    }

    #[test]
    fn sigma_identities() {
        assert_eq!(sigma_nm::<Rational>(3, 3, 1).unwrap(), Rational::from_integer(1.into()));
        assert_eq!(sigma_nm::<Rational>(6, 3, 20).unwrap(), Rational::from_integer(10.into()));
        assert_eq!(sigma_npi_value(6, 3, &q(1, 64)).unwrap(), q(5, 2048));
        assert!(sigma_nm::<Rational>(7, 3, 5).is_err());
        assert!(sigma_nm::<Rational>(6, 3, 21).is_err());
    }

    #[test]
    fn sigma_ratio_values() {
        let r = ratio_sigma::<Rational>(6, 3, 10).unwrap();
        assert_eq!(r.exact, q(19, 18));
        let r = ratio_sigma::<Rational>(3, 3, 1).unwrap();
        assert_eq!(r.exact, Rational::from_integer(1.into()));
        assert!(ratio_sigma::<Rational>(6, 3, 1).is_err());
    }

    #[test]
    fn json_has_string_fields() {
        let t = moment_table(5, 3, &q(1, 2)).unwrap();
        let v = t.to_json();
        assert_eq!(v["lambda"], "15/32");
        assert_eq!(v["mu"], "5/4");
    }
}
