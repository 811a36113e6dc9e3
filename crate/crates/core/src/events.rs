//! Abstract symmetric event families: a ground set `X`, a family of `s`-subsets
//! `E_i`, the random subset `X_p`, and the realized index set `I = {i : E_i ⊆ X_p}`.
//!
//! The centrepiece is the exact conditional product decomposition
//! `Pr(I = Y) = p^{|R(Y)|} · prod_j (1 - pi_j)`, with every `pi_j` brute-forced
//! over the subsets of `X \ R(Y)`; it holds for any processing order.

use std::collections::HashSet;

use crate::bits::BlockSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on `|X \ R(Y)|` for subset enumeration (`2^24` terms).
pub const CHAIN_GUARD_BITS: usize = 24;

/// Default cap on the ground size for the brute-force symmetry checker.
pub const SYMMETRY_GUARD: usize = 8;

/// An `s`-uniform family of subsets of `[ground_size]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventFamily {
    ground_size: usize,
    uniformity: usize,
    members: Vec<BlockSet>,
    member_indices: Vec<Vec<u32>>,
}

impl EventFamily {
    /// Members must be strictly increasing index sequences of equal length,
    /// pairwise distinct, given in lexicographic order.
    pub fn new(ground_size: usize, members: Vec<Vec<u32>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("family needs at least one member".into()));
        }
        let uniformity = members[0].len();
        if uniformity == 0 {
            return Err(Error::InvalidParameter("members must be nonempty".into()));
        }
        for m in &members {
            if m.len() != uniformity {
                return Err(Error::InvalidParameter(format!(
                    "member {m:?} has {} elements, expected {uniformity}",
                    m.len()
                )));
            }
            if !m.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidParameter(format!("member {m:?} is not strictly increasing")));
            }
            if m[uniformity - 1] as usize >= ground_size {
                return Err(Error::IndexOutOfRange {
                    index: m[uniformity - 1] as usize,
                    bound: ground_size,
                });
            }
        }
        if !members.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "members must be distinct and in lexicographic order".into(),
            ));
        }
        let sets = members.iter().map(|m| BlockSet::from_indices(ground_size, m)).collect();
        Ok(EventFamily { ground_size, uniformity, members: sets, member_indices: members })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    /// Number of members `N`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &BlockSet {
        &self.members[i]
    }

    pub fn member_indices(&self, i: usize) -> &[u32] {
        &self.member_indices[i]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, bound: self.len() });
        }
        Ok(())
    }

    pub fn validate_outcome(&self, y: &Outcome) -> Result<()> {
        if let Some(&last) = y.indices.last() {
            self.check_index(last as usize)?;
        }
        Ok(())
    }

    /// `R(Y)`: union of the members selected by `Y` (the revealed elements).
    pub fn revealed_set(&self, y: &Outcome) -> Result<BlockSet> {
        self.validate_outcome(y)?;
        let mut r = BlockSet::empty(self.ground_size);
        for &j in &y.indices {
            r.union_with(&self.members[j as usize]);
        }
        Ok(r)
    }

    /// `i ~ j`: distinct members with intersecting element sets.
    pub fn overlaps(&self, i: usize, j: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(i != j && self.members[i].intersects(&self.members[j]))
    }

    /// Partitions the complement of `Y` by how many selected members each index
    /// overlaps: none (neutral), exactly one (simple), two or more (complex).
    pub fn classify_indices(&self, y: &Outcome) -> Result<Classification> {
        self.validate_outcome(y)?;
        let mut cls = Classification::default();
        for j in 0..self.len() as u32 {
            if y.contains(j) {
                continue;
            }
            let mut hits = 0usize;
            for &i in &y.indices {
                if self.members[i as usize].intersects(&self.members[j as usize]) {
                    hits += 1;
                    if hits >= 2 {
                        break;
                    }
                }
            }
            match hits {
                0 => cls.neutral.push(j),
                1 => cls.simple.push(j),
                _ => cls.complex.push(j),
            }
        }
        Ok(cls)
    }

    /// `Pr(I = Y) > 0`, equivalently no unselected member lies inside `R(Y)`.
    pub fn is_possible(&self, y: &Outcome) -> Result<bool> {
        let revealed = self.revealed_set(y)?;
        for j in 0..self.len() as u32 {
            if !y.contains(j) && self.members[j as usize].is_subset_of(&revealed) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The realized index set `I` for a concrete ground subset.
    pub fn realized_outcome(&self, subset: &BlockSet) -> Result<Outcome> {
        if subset.capacity() != self.ground_size {
            return Err(Error::InvalidParameter(format!(
                "subset capacity {} does not match ground size {}",
                subset.capacity(),
                self.ground_size
            )));
        }
        let indices = (0..self.len() as u32)
            .filter(|&i| self.members[i as usize].is_subset_of(subset))
            .collect();
        Ok(Outcome::new(indices))
    }

    /// Exact `Pr(I = Y)` by direct enumeration of all subsets of `X \ R(Y)`.
    /// Returns zero for impossible outcomes.
    pub fn outcome_probability<T: Scalar>(&self, y: &Outcome, p: &T, guard_bits: usize) -> Result<T> {
        let revealed = self.revealed_set(y)?;
        let free = self.free_elements(&revealed, guard_bits)?;
        let residuals = self.residual_masks(y, &free);
        let f = free.len();
        let mut counts = vec![0u64; f + 1];
        for w in 0u64..1u64 << f {
            if residuals.iter().all(|&res| res & !w != 0) {
                counts[w.count_ones() as usize] += 1;
            }
        }
        let revealed_weight = p.powu(revealed.count() as u64);
        Ok(revealed_weight * weighted_sum(&counts, p))
    }

    /// The exact conditional chain for `Pr(I = Y)`: reveal `R(Y)`, then multiply
    /// `1 - pi_j` over the complement in the chosen order.
    ///
    /// Every `pi_j = Pr(A_j'(Y) | no earlier A_i'(Y))` is computed exactly by
    /// summing over subsets of `X \ R(Y)`. The product equals `Pr(I = Y)` for
    /// any admissible order; the default order is neutral, then simple, then
    /// complex, ties by ascending index.
    pub fn conditional_chain<T: Scalar>(
        &self,
        y: &Outcome,
        p: &T,
        order: &ChainOrder,
        guard_bits: usize,
    ) -> Result<ChainReport<T>> {
        if !self.is_possible(y)? {
            return Err(Error::NotPossible);
        }
        let revealed = self.revealed_set(y)?;
        let free = self.free_elements(&revealed, guard_bits)?;
        let f = free.len();

        let order: Vec<u32> = match order {
            ChainOrder::NeutralSimpleComplex => {
                let cls = self.classify_indices(y)?;
                let mut o = cls.neutral;
                o.extend(cls.simple);
                o.extend(cls.complex);
                o
            }
            ChainOrder::Custom(o) => {
                let mut expected: Vec<u32> =
                    (0..self.len() as u32).filter(|&j| !y.contains(j)).collect();
                let mut given = o.clone();
                given.sort_unstable();
                expected.sort_unstable();
                if given != expected {
                    return Err(Error::InvalidParameter(
                        "custom order must be a permutation of the complement of Y".into(),
                    ));
                }
                o.clone()
            }
        };

        if !order.is_empty() && p.clone() >= T::one() {
            return Err(Error::InvalidParameter(
                "p = 1 makes the conditional chain degenerate".into(),
            ));
        }

        // residual masks in the chosen order, compressed onto the free elements
        let member_residual = |j: u32| -> u64 {
            let mut mask = 0u64;
            for (bit, &elem) in free.iter().enumerate() {
                if self.members[j as usize].contains(elem) {
                    mask |= 1 << bit;
                }
            }
            mask
        };
        let residuals: Vec<u64> = order.iter().map(|&j| member_residual(j)).collect();

        // alive[w] = no earlier residual is contained in w
        let n_words = (1usize << f).div_ceil(64);
        let mut alive = vec![u64::MAX; n_words];
        let mut pi_seq: Vec<T> = Vec::with_capacity(order.len());
        let mut product = p.powu(revealed.count() as u64);
        for &res in &residuals {
            let mut num = vec![0u64; f + 1];
            let mut den = vec![0u64; f + 1];
            for w in 0u64..1u64 << f {
                let slot = (w >> 6) as usize;
                let bit = w & 63;
                if alive[slot] >> bit & 1 == 0 {
                    continue;
                }
                let k = w.count_ones() as usize;
                den[k] += 1;
                if res & !w == 0 {
                    num[k] += 1;
                    alive[slot] &= !(1 << bit);
                }
            }
            let pi = weighted_sum(&num, p) / weighted_sum(&den, p);
            product = product * (T::one() - pi.clone());
            pi_seq.push(pi);
        }

        Ok(ChainReport { order, pi_seq, revealed_size: revealed.count(), product_prob: product })
    }

    /// Brute-force orbit-transitivity check: enumerates all permutations of the
    /// ground set preserving the family and tests that they act transitively on
    /// the members. Only feasible for tiny ground sets.
    pub fn is_symmetric_small(&self, guard: usize) -> Result<bool> {
        if self.ground_size > guard {
            return Err(Error::GuardExceeded(format!(
                "symmetry check needs ground_size <= {guard}, got {}",
                self.ground_size
            )));
        }
        let member_set: HashSet<&[u32]> =
            self.member_indices.iter().map(|m| m.as_slice()).collect();
        let mut orbit: HashSet<Vec<u32>> = HashSet::new();
        let mut perm: Vec<u32> = (0..self.ground_size as u32).collect();
        // Heap's algorithm, checking each permutation for being an automorphism
        let g = self.ground_size;
        let mut c = vec![0usize; g];
        let consider = |perm: &[u32], orbit: &mut HashSet<Vec<u32>>| {
            let mut images: Vec<Vec<u32>> = Vec::with_capacity(self.len());
            for m in &self.member_indices {
                let mut img: Vec<u32> = m.iter().map(|&e| perm[e as usize]).collect();
                img.sort_unstable();
                if !member_set.contains(img.as_slice()) {
                    return;
                }
                images.push(img);
            }
            orbit.insert(images[0].clone());
        };
        consider(&perm, &mut orbit);
        let mut i = 0;
        while i < g {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                consider(&perm, &mut orbit);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(orbit.len() == self.len())
    }

    fn free_elements(&self, revealed: &BlockSet, guard_bits: usize) -> Result<Vec<usize>> {
        let free: Vec<usize> =
            (0..self.ground_size).filter(|&e| !revealed.contains(e)).collect();
        if free.len() > guard_bits.min(63) {
            return Err(Error::GuardExceeded(format!(
                "subset enumeration over {} free elements exceeds the {guard_bits}-bit guard",
                free.len()
            )));
        }
        Ok(free)
    }

    fn residual_masks(&self, y: &Outcome, free: &[usize]) -> Vec<u64> {
        (0..self.len() as u32)
            .filter(|&j| !y.contains(j))
            .map(|j| {
                let mut mask = 0u64;
                for (bit, &elem) in free.iter().enumerate() {
                    if self.members[j as usize].contains(elem) {
                        mask |= 1 << bit;
                    }
                }
                mask
            })
            .collect()
    }
}

/// `sum_k counts[k] p^k (1-p)^{f-k}` where `f = counts.len() - 1`.
fn weighted_sum<T: Scalar>(counts: &[u64], p: &T) -> T {
    let f = counts.len() - 1;
    let q = T::one() - p.clone();
    let mut acc = T::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            acc = acc + T::from_u64(c) * p.powu(k as u64) * q.powu((f - k) as u64);
        }
    }
    acc
}

/// A subset `Y` of the member index space, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    indices: Vec<u32>,
}

impl Outcome {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Outcome { indices }
    }

    pub fn empty() -> Self {
        Outcome { indices: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Outcome { indices: (0..n as u32).collect() }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// The neutral / simple / complex partition of the complement of `Y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub neutral: Vec<u32>,
    pub simple: Vec<u32>,
    pub complex: Vec<u32>,
}

impl Classification {
    pub fn total(&self) -> usize {
        self.neutral.len() + self.simple.len() + self.complex.len()
    }
}

/// Processing order for the conditional chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOrder {
    /// Neutral terms first, then simple, then complex; ties by ascending index.
    NeutralSimpleComplex,
    /// Caller-supplied permutation of the complement of `Y`.
    Custom(Vec<u32>),
}

/// Result of a conditional chain evaluation.
#[derive(Clone, Debug)]
pub struct ChainReport<T> {
    /// The order in which complement indices were processed.
    pub order: Vec<u32>,
    /// `pi_j` for each processed index, in order.
    pub pi_seq: Vec<T>,
    /// `|R(Y)|`.
    pub revealed_size: usize,
    /// `p^{|R(Y)|} * prod (1 - pi_j)`, equal to `Pr(I = Y)`.
    pub product_prob: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::CliqueFamily;
    use crate::Rational;

    fn triangles(n: usize) -> EventFamily {
        CliqueFamily::new(n, 3).to_event_family()
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn revealed_sets() {
        let fam = triangles(4);
        assert_eq!(fam.revealed_set(&Outcome::empty()).unwrap().count(), 0);
        // single member reveals its 3 edges
        assert_eq!(fam.revealed_set(&Outcome::new(vec![0])).unwrap().count(), 3);
        // {0,1,2} and {0,1,3} share edge 01: 5 revealed edges
        assert_eq!(fam.revealed_set(&Outcome::new(vec![0, 1])).unwrap().count(), 5);
        assert!(fam.revealed_set(&Outcome::new(vec![99])).is_err());
    }

    #[test]
    fn overlap_relation() {
        let fam = triangles(6);
        assert!(!fam.overlaps(0, 0).unwrap());
        // {0,1,2} vs {0,1,3} share edge 01
        assert!(fam.overlaps(0, 1).unwrap());
        // {0,1,2} vs {3,4,5} are edge-disjoint
        let far = CliqueFamily::new(6, 3).rank(&[3, 4, 5]);
        assert!(!fam.overlaps(0, far).unwrap());
    }

    #[test]
    fn classification() {
        let fam = triangles(5);
        let cls = fam.classify_indices(&Outcome::empty()).unwrap();
        assert_eq!(cls.neutral.len(), fam.len());

        let cf = CliqueFamily::new(5, 3);
        // Y = {012}: {034} shares only vertex 0 (no edge) -> neutral; {013} -> simple
        let y = Outcome::new(vec![cf.rank(&[0, 1, 2]) as u32]);
        let cls = fam.classify_indices(&y).unwrap();
        assert!(cls.neutral.contains(&(cf.rank(&[0, 3, 4]) as u32)));
        assert!(cls.simple.contains(&(cf.rank(&[0, 1, 3]) as u32)));
        assert_eq!(cls.total(), fam.len() - 1);

        // Y = {012, 013}: {014} overlaps both -> complex
        let y = Outcome::new(vec![cf.rank(&[0, 1, 2]) as u32, cf.rank(&[0, 1, 3]) as u32]);
        let cls = fam.classify_indices(&y).unwrap();
        assert!(cls.complex.contains(&(cf.rank(&[0, 1, 4]) as u32)));
    }

    #[test]
    fn possibility() {
        let fam = triangles(4);
        assert!(fam.is_possible(&Outcome::empty()).unwrap());
        // three triangles of K4 cover all 6 edges, so the fourth is forced
        assert!(!fam.is_possible(&Outcome::new(vec![0, 1, 2])).unwrap());
        let fam5 = triangles(5);
        let cf = CliqueFamily::new(5, 3);
        let y = Outcome::new(vec![cf.rank(&[0, 1, 2]) as u32, cf.rank(&[0, 3, 4]) as u32]);
        assert!(fam5.is_possible(&y).unwrap());
    }

    #[test]
    fn realized_outcomes() {
        let fam = triangles(4);
        let empty = BlockSet::empty(6);
        assert!(fam.realized_outcome(&empty).unwrap().is_empty());
        let full = BlockSet::from_indices(6, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(fam.realized_outcome(&full).unwrap().len(), 4);
        // edges {01,02,12,03}: only triangle {0,1,2} complete
        let partial = BlockSet::from_indices(6, &[0, 1, 3, 2]);
        assert_eq!(fam.realized_outcome(&partial).unwrap().indices(), &[0]);
    }

    #[test]
    fn chain_trivial_cases() {
        let fam = triangles(4);
        // Y = [N]: empty chain, product = p^{|R|} = p^6
        let full = Outcome::full(4);
        let rep = fam
            .conditional_chain(&full, &half(), &ChainOrder::NeutralSimpleComplex, CHAIN_GUARD_BITS)
            .unwrap();
        assert!(rep.pi_seq.is_empty());
        assert_eq!(rep.product_prob, half().powu(6));

        // single triangle family: Pr(I = empty) = 1 - p^3 = 7/8
        let fam3 = triangles(3);
        let rep = fam3
            .conditional_chain(
                &Outcome::empty(),
                &half(),
                &ChainOrder::NeutralSimpleComplex,
                CHAIN_GUARD_BITS,
            )
            .unwrap();
        assert_eq!(rep.product_prob, Rational::new(7.into(), 8.into()));
    }

    #[test]
    fn chain_matches_triangle_free_count_on_k4() {
        // independent oracle: count triangle-free labeled graphs on 4 vertices
        let mut free = 0u64;
        for mask in 0u64..64 {
            let has_edge = |u: usize, v: usize| {
                let (a, b) = (u.min(v), u.max(v));
                let idx = crate::cliques::pair_index(4, a, b);
                mask >> idx & 1 == 1
            };
            let mut triangle = false;
            for a in 0..4 {
                for b in a + 1..4 {
                    for c in b + 1..4 {
                        if has_edge(a, b) && has_edge(a, c) && has_edge(b, c) {
                            triangle = true;
                        }
                    }
                }
            }
            if !triangle {
                free += 1;
            }
        }
        let fam = triangles(4);
        let rep = fam
            .conditional_chain(
                &Outcome::empty(),
                &half(),
                &ChainOrder::NeutralSimpleComplex,
                CHAIN_GUARD_BITS,
            )
            .unwrap();
        assert_eq!(rep.product_prob, Rational::new(free.into(), 64.into()));
        assert_eq!(
            fam.outcome_probability(&Outcome::empty(), &half(), CHAIN_GUARD_BITS).unwrap(),
            Rational::new(free.into(), 64.into())
        );
    }

    #[test]
    fn chain_is_order_independent() {
        let fam = triangles(4);
        let y = Outcome::new(vec![0]);
        let base = fam
            .conditional_chain(&y, &half(), &ChainOrder::NeutralSimpleComplex, CHAIN_GUARD_BITS)
            .unwrap();
        let oracle = fam.outcome_probability(&y, &half(), CHAIN_GUARD_BITS).unwrap();
        assert_eq!(base.product_prob, oracle);
        let complement: Vec<u32> = (0..fam.len() as u32).filter(|&j| !y.contains(j)).collect();
        // try reversed and rotated orders
        let mut rev = complement.clone();
        rev.reverse();
        for order in [rev, {
            let mut rot = complement.clone();
            rot.rotate_left(1);
            rot
        }] {
            let rep = fam
                .conditional_chain(&y, &half(), &ChainOrder::Custom(order), CHAIN_GUARD_BITS)
                .unwrap();
            assert_eq!(rep.product_prob, oracle);
        }
    }

    #[test]
    fn chain_rejects_impossible() {
        let fam = triangles(4);
        let y = Outcome::new(vec![0, 1, 2]);
        let err = fam
            .conditional_chain(&y, &half(), &ChainOrder::NeutralSimpleComplex, CHAIN_GUARD_BITS)
            .unwrap_err();
        assert_eq!(err, Error::NotPossible);
        // but the direct enumeration reports probability zero
        assert_eq!(
            fam.outcome_probability(&y, &half(), CHAIN_GUARD_BITS).unwrap(),
            Rational::from_integer(0.into())
        );
    }

    #[test]
    fn neutral_pi_equals_pi_power() {
        // K3 triangle family, Y = empty: the single term is neutral with pi = p^3
        let fam = triangles(3);
        let rep = fam
            .conditional_chain(
                &Outcome::empty(),
                &half(),
                &ChainOrder::NeutralSimpleComplex,
                CHAIN_GUARD_BITS,
            )
            .unwrap();
        assert_eq!(rep.pi_seq, vec![half().powu(3)]);
    }

    #[test]
    fn degenerate_p_values() {
        let fam = triangles(4);
        // p = 0: only the empty outcome survives
        let zero = Rational::from_integer(0.into());
        let rep = fam
            .conditional_chain(
                &Outcome::empty(),
                &zero,
                &ChainOrder::NeutralSimpleComplex,
                CHAIN_GUARD_BITS,
            )
            .unwrap();
        assert_eq!(rep.product_prob, Rational::from_integer(1.into()));
        let y = Outcome::new(vec![0]);
        let rep = fam
            .conditional_chain(&y, &zero, &ChainOrder::NeutralSimpleComplex, CHAIN_GUARD_BITS)
            .unwrap();
        assert_eq!(rep.product_prob, Rational::from_integer(0.into()));
        // p = 1 with a nonempty complement is degenerate
        let one = Rational::from_integer(1.into());
        assert!(fam
            .conditional_chain(&y, &one, &ChainOrder::NeutralSimpleComplex, CHAIN_GUARD_BITS)
            .is_err());
        // but Y = [N] is fine: empty chain
        let rep = fam
            .conditional_chain(
                &Outcome::full(4),
                &one,
                &ChainOrder::NeutralSimpleComplex,
                CHAIN_GUARD_BITS,
            )
            .unwrap();
        assert_eq!(rep.product_prob, Rational::from_integer(1.into()));
    }

    #[test]
    fn construction_rejects_malformed_members() {
        assert!(EventFamily::new(4, vec![]).is_err());
        assert!(EventFamily::new(4, vec![vec![0, 0]]).is_err());
        assert!(EventFamily::new(4, vec![vec![0, 5]]).is_err());
        assert!(EventFamily::new(4, vec![vec![0, 1], vec![0, 1]]).is_err());
        // out of lexicographic order
        assert!(EventFamily::new(4, vec![vec![1, 2], vec![0, 1]]).is_err());
        // mixed uniformity
        assert!(EventFamily::new(4, vec![vec![0, 1], vec![0, 1, 2]]).is_err());
        // guard on the chain enumeration
        let fam = triangles(5);
        assert!(matches!(
            fam.conditional_chain(
                &Outcome::empty(),
                &half(),
                &ChainOrder::NeutralSimpleComplex,
                4
            ),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn symmetry_checker() {
        let fam = triangles(4);
        assert!(fam.is_symmetric_small(SYMMETRY_GUARD).unwrap());
        // two overlapping pairs of different shape: not orbit-transitive
        let asym = EventFamily::new(5, vec![vec![0, 1], vec![1, 2], vec![3, 4]]).unwrap();
        assert!(!asym.is_symmetric_small(SYMMETRY_GUARD).unwrap());
        let big = triangles(5);
        assert!(big.is_symmetric_small(SYMMETRY_GUARD).is_err());
    }

    #[test]
    fn realized_contains_y() {
        let fam = triangles(5);
        for indices in [vec![0u32], vec![0, 1], vec![2, 7], vec![0, 3, 9]] {
            let y = Outcome::new(indices);
            let r = fam.revealed_set(&y).unwrap();
            let realized = fam.realized_outcome(&r).unwrap();
            for &j in y.indices() {
                assert!(realized.contains(j));
            }
        }
    }
}
