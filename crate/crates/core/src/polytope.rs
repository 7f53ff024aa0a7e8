//! Brute-force stable set polytope oracle for small graphs.
//!
//! Enumeration streams independent sets as `u64` bitmasks over the graph's
//! vertex order; every validity and facet statement is decided in exact
//! rational arithmetic.

use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::graph::{build_hk, hk_index, Graph};
use crate::real::{format_rat, parse_rat, Rat};
use crate::{Error, Result};

/// Enumeration guard: keeps facet checks for `H_k` feasible up to `k = 11`.
pub const MAX_ENUM_VERTICES: usize = 34;

/// Rational linear inequality `coeffs . x <= rhs` over a graph's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearInequality {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

impl LinearInequality {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        LinearInequality { coeffs, rhs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Value of the left-hand side on a 0/1 set given as a bitmask.
    pub fn lhs_on_mask(&self, mask: u64) -> Rat {
        let mut total = Rat::zero();
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            total += &self.coeffs[v];
            bits &= bits - 1;
        }
        total
    }

    pub fn lhs_on_vector(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: x.len() });
        }
        Ok(self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum())
    }

    /// Scales coefficients and right-hand side by a positive rational.
    pub fn scale(&self, factor: &Rat) -> LinearInequality {
        LinearInequality {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            rhs: &self.rhs * factor,
        }
    }

    pub fn add(&self, other: &LinearInequality) -> Result<LinearInequality> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(LinearInequality {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            rhs: &self.rhs + &other.rhs,
        })
    }

    /// Serializes as `{"coeffs": {"label": "num/den", ...}, "rhs": "..."}`
    /// with zero coefficients omitted and keys sorted.
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let mut coeffs = BTreeMap::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(g.label(i).to_string(), format_rat(c));
            }
        }
        serde_json::json!({ "coeffs": coeffs, "rhs": format_rat(&self.rhs) })
    }

    pub fn from_json(g: &Graph, value: &serde_json::Value) -> Result<LinearInequality> {
        let coeffs_map = value
            .get("coeffs")
            .and_then(|v| v.as_object())
            .ok_or_else(|| Error::Parse("inequality json needs a coeffs object".into()))?;
        let mut coeffs = vec![Rat::zero(); g.n()];
        for (label, raw) in coeffs_map {
            let s = raw
                .as_str()
                .ok_or_else(|| Error::Parse("coefficients must be rational strings".into()))?;
            coeffs[g.index_of(label)?] = parse_rat(s)?;
        }
        let rhs = value
            .get("rhs")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("inequality json needs a rhs string".into()))?;
        Ok(LinearInequality { coeffs, rhs: parse_rat(rhs)? })
    }
}

/// Stable sets of a graph, as bitmasks over its vertex order.
#[derive(Debug, Clone)]
pub struct StableSetList {
    pub sets: Vec<u64>,
}

impl StableSetList {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

fn guard(g: &Graph) -> Result<()> {
    if g.n() > MAX_ENUM_VERTICES {
        return Err(Error::SizeGuard { actual: g.n(), limit: MAX_ENUM_VERTICES });
    }
    Ok(())
}

/// Streams every independent set (including the empty set) exactly once.
/// Branches on the lowest-degree vertex of the remaining graph.
pub fn for_each_stable_set(g: &Graph, mut visit: impl FnMut(u64)) -> Result<()> {
    guard(g)?;
    let masks = g.adjacency_masks()?;
    fn recurse(masks: &[u64], available: u64, current: u64, visit: &mut impl FnMut(u64)) {
        if available == 0 {
            visit(current);
            return;
        }
        // lowest-degree vertex within the remaining graph
        let mut pivot = available.trailing_zeros() as usize;
        let mut best = usize::MAX;
        let mut bits = available;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (masks[v] & available).count_ones() as usize;
            if d < best {
                best = d;
                pivot = v;
            }
        }
        let bit = 1u64 << pivot;
        recurse(masks, available & !bit & !masks[pivot], current | bit, visit);
        recurse(masks, available & !bit, current, visit);
    }
    recurse(&masks, (1u64 << g.n()).wrapping_sub(1), 0, &mut visit);
    Ok(())
}

pub fn enumerate_stable_sets(g: &Graph) -> Result<StableSetList> {
    let mut sets = Vec::new();
    for_each_stable_set(g, |m| sets.push(m))?;
    Ok(StableSetList { sets })
}

/// Maximum stable set size.
pub fn alpha(g: &Graph) -> Result<usize> {
    let mut best = 0;
    for_each_stable_set(g, |m| best = best.max(m.count_ones() as usize))?;
    Ok(best)
}

/// Inclusion-wise maximal stable sets.
pub fn maximal_stable_sets(g: &Graph) -> Result<Vec<u64>> {
    let masks = g.adjacency_masks()?;
    let mut out = Vec::new();
    for_each_stable_set(g, |m| {
        let maximal = (0..g.n()).all(|v| {
            let bit = 1u64 << v;
            m & bit != 0 || masks[v] & m != 0
        });
        if maximal {
            out.push(m);
        }
    })?;
    Ok(out)
}

/// The two structural classes of maximal stable sets in `H_k`.
#[derive(Debug, Clone)]
pub struct MaximalClassification {
    /// Size-k sets hitting every triple once and avoiding one outer layer.
    pub class_one: Vec<u64>,
    /// Size-(k+1) sets of the form `([k]_1 \ {j_1}) u {j_0, j_2}`.
    pub class_two: Vec<u64>,
}

/// Partitions every maximal stable set of `H_k` into the two classes;
/// any set fitting neither is a verification failure.
pub fn classify_maximal_stable_sets(k: usize) -> Result<MaximalClassification> {
    if !(2..=8).contains(&k) {
        return Err(Error::InvalidArgument(format!("classification supported for k in 2..=8, got {k}")));
    }
    let g = build_hk(k)?;
    let layer_mask = |p: usize| -> u64 {
        (1..=k).fold(0u64, |acc, i| acc | 1 << hk_index(i, p))
    };
    let layer0 = layer_mask(0);
    let layer1 = layer_mask(1);
    let layer2 = layer_mask(2);
    let mut class_one = Vec::new();
    let mut class_two = Vec::new();
    for m in maximal_stable_sets(&g)? {
        let size = m.count_ones() as usize;
        let one_per_triple = (1..=k).all(|i| {
            let triple =
                1u64 << hk_index(i, 0) | 1 << hk_index(i, 1) | 1 << hk_index(i, 2);
            (m & triple).count_ones() == 1
        });
        if size == k && one_per_triple && (m & layer0 == 0 || m & layer2 == 0) {
            class_one.push(m);
            continue;
        }
        let is_class_two = size == k + 1
            && (1..=k).any(|j| {
                let expected = (layer1 & !(1 << hk_index(j, 1)))
                    | 1 << hk_index(j, 0)
                    | 1 << hk_index(j, 2);
                m == expected
            });
        if is_class_two {
            class_two.push(m);
            continue;
        }
        return Err(Error::Verification(format!(
            "maximal stable set {m:#b} of H_{k} fits neither class"
        )));
    }
    Ok(MaximalClassification { class_one, class_two })
}

/// The facet `sum_{i in B_{j,j'}} x_i <= k-1` where `B_{j,j'}` drops
/// `j_1, j_2, j'_0, j'_1`.
pub fn b_inequality(k: usize, j: usize, jp: usize) -> Result<LinearInequality> {
    if k < 2 || j == jp || j < 1 || jp < 1 || j > k || jp > k {
        return Err(Error::InvalidArgument(format!(
            "b_inequality needs distinct j, j' in 1..={k}"
        )));
    }
    let mut coeffs = vec![Rat::one(); 3 * k];
    for idx in [hk_index(j, 1), hk_index(j, 2), hk_index(jp, 0), hk_index(jp, 1)] {
        coeffs[idx] = Rat::zero();
    }
    Ok(LinearInequality::new(coeffs, Rat::from_integer((k as i64 - 1).into())))
}

/// The layer-symmetric valid inequality
/// `(k-1) * (outer layers) + (k-2) * (middle layer) <= k(k-1)`.
pub fn symmetric_inequality(k: usize) -> Result<LinearInequality> {
    if k < 2 {
        return Err(Error::InvalidArgument("symmetric_inequality needs k >= 2".into()));
    }
    let mut coeffs = vec![Rat::zero(); 3 * k];
    for i in 1..=k {
        coeffs[hk_index(i, 0)] = Rat::from_integer((k as i64 - 1).into());
        coeffs[hk_index(i, 1)] = Rat::from_integer((k as i64 - 2).into());
        coeffs[hk_index(i, 2)] = Rat::from_integer((k as i64 - 1).into());
    }
    Ok(LinearInequality::new(
        coeffs,
        Rat::from_integer((k as i64 * (k as i64 - 1)).into()),
    ))
}

/// Validity of an inequality for the stable set polytope, by enumeration.
pub fn is_valid(g: &Graph, ineq: &LinearInequality) -> Result<bool> {
    if ineq.dim() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: ineq.dim() });
    }
    let mut valid = true;
    for_each_stable_set(g, |m| {
        if valid && ineq.lhs_on_mask(m) > ineq.rhs {
            valid = false;
        }
    })?;
    Ok(valid)
}

/// Incremental exact-rational row basis for rank computations.
struct RationalBasis {
    rows: Vec<(usize, Vec<Rat>)>, // (pivot column, reduced row)
}

impl RationalBasis {
    fn new() -> Self {
        RationalBasis { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; inserts it when independent.
    fn insert(&mut self, mut row: Vec<Rat>) -> bool {
        for (pivot, basis_row) in &self.rows {
            if !row[*pivot].is_zero() {
                let factor = row[*pivot].clone();
                for (x, b) in row.iter_mut().zip(basis_row) {
                    *x -= &factor * b;
                }
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(pivot) => {
                let inv = row[pivot].clone();
                for x in row.iter_mut() {
                    *x /= &inv;
                }
                self.rows.push((pivot, row));
                true
            }
        }
    }
}

/// Exact facet test: validity plus `|V|` affinely independent tight
/// incidence vectors (affine rank over the rationals, no floating point).
pub fn is_facet(g: &Graph, ineq: &LinearInequality) -> Result<bool> {
    if !is_valid(g, ineq)? {
        return Ok(false);
    }
    let mut tight: Vec<u64> = Vec::new();
    for_each_stable_set(g, |m| {
        if ineq.lhs_on_mask(m) == ineq.rhs {
            tight.push(m);
        }
    })?;
    let Some(&base) = tight.first() else {
        return Ok(false);
    };
    let n = g.n();
    let to_vec = |m: u64| -> Vec<Rat> {
        (0..n)
            .map(|v| if m >> v & 1 == 1 { Rat::one() } else { Rat::zero() })
            .collect()
    };
    let base_vec = to_vec(base);
    let mut basis = RationalBasis::new();
    for &m in tight.iter().skip(1) {
        let row: Vec<Rat> =
            to_vec(m).into_iter().zip(&base_vec).map(|(a, b)| a - b).collect();
        basis.insert(row);
        if basis.rank() == n - 1 {
            return Ok(true); // affine rank n reached
        }
    }
    Ok(false)
}

/// Membership of `[lambda; y]` in the homogenization of the fractional
/// stable set polytope: `lambda >= 0`, `0 <= y_i <= lambda`, and
/// `y_i + y_j <= lambda` on every edge.
pub fn cone_frac_member(g: &Graph, vec: &[Rat]) -> Result<bool> {
    if vec.len() != g.n() + 1 {
        return Err(Error::DimensionMismatch { expected: g.n() + 1, got: vec.len() });
    }
    let lambda = &vec[0];
    if lambda.is_negative() {
        return Ok(false);
    }
    for y in &vec[1..] {
        if y.is_negative() || y > lambda {
            return Ok(false);
        }
    }
    for (u, v) in g.edges() {
        if &vec[u + 1] + &vec[v + 1] > *lambda {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete graph, handy as a test subject.
pub fn complete_graph(n: usize) -> Result<Graph> {
    let labels: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            edges.push((u.to_string(), v.to_string()));
        }
    }
    Graph::new(labels, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lk, cycle_graph, hk_label};
    use crate::real::{rat, rat_int};

    fn mask_of(g: &Graph, labels: &[&str]) -> u64 {
        labels
            .iter()
            .fold(0u64, |acc, l| acc | 1 << g.index_of(l).unwrap())
    }

    #[test]
    fn stable_set_counts() {
        let h2 = build_hk(2).unwrap();
        assert_eq!(enumerate_stable_sets(&h2).unwrap().len(), 18);

        let empty3 = Graph::new(vec!["a", "b", "c"], &[]).unwrap();
        assert_eq!(enumerate_stable_sets(&empty3).unwrap().len(), 8);

        // Closed form 2*3^k - 2^k + k*2^(k-1) for H_k.
        for k in 2..=6usize {
            let count = enumerate_stable_sets(&build_hk(k).unwrap()).unwrap().len();
            let expected = 2 * 3usize.pow(k as u32) - (1 << k) + k * (1 << (k - 1));
            assert_eq!(count, expected, "k={k}");
        }
    }

    #[test]
    fn alpha_examples() {
        for k in 2..=8 {
            assert_eq!(alpha(&build_hk(k).unwrap()).unwrap(), k + 1, "alpha(H_{k})");
        }
        assert_eq!(alpha(&complete_graph(5).unwrap()).unwrap(), 1);
        let l4c4 = build_lk(&cycle_graph(4).unwrap(), 4).unwrap();
        assert_eq!(alpha(&l4c4).unwrap(), 5);

        let h2 = build_hk(2).unwrap();
        let mut maximum = Vec::new();
        for_each_stable_set(&h2, |m| {
            if m.count_ones() == 3 {
                maximum.push(m);
            }
        })
        .unwrap();
        maximum.sort_unstable();
        let mut expected = vec![
            mask_of(&h2, &["1_0", "1_2", "2_1"]),
            mask_of(&h2, &["1_1", "2_0", "2_2"]),
        ];
        expected.sort_unstable();
        assert_eq!(maximum, expected);
    }

    #[test]
    fn size_guard() {
        let h12 = build_hk(12).unwrap();
        assert!(matches!(alpha(&h12), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn classification_small_k() {
        let c2 = classify_maximal_stable_sets(2).unwrap();
        assert_eq!(c2.class_two.len(), 2);
        assert_eq!(c2.class_one.len() + c2.class_two.len(), 5);

        let c3 = classify_maximal_stable_sets(3).unwrap();
        assert_eq!(c3.class_two.len(), 3);

        // [k]_1 itself lies in class one.
        let g = build_hk(3).unwrap();
        let middle = mask_of(&g, &["1_1", "2_1", "3_1"]);
        assert!(c3.class_one.contains(&middle));

        assert!(classify_maximal_stable_sets(1).is_err());
        assert!(classify_maximal_stable_sets(9).is_err());
    }

    #[test]
    fn b_and_symmetric_inequalities() {
        let b = b_inequality(3, 1, 2).unwrap();
        assert_eq!(b.coeffs.iter().filter(|c| !c.is_zero()).count(), 5);
        assert!(b_inequality(3, 2, 2).is_err());

        // symmetric = (1/(k-1)) * sum over ordered distinct pairs.
        for k in 3..=6 {
            let mut total = LinearInequality::new(vec![Rat::zero(); 3 * k], Rat::zero());
            for j in 1..=k {
                for jp in 1..=k {
                    if j != jp {
                        total = total.add(&b_inequality(k, j, jp).unwrap()).unwrap();
                    }
                }
            }
            let scaled = total.scale(&rat(1, k as i64 - 1));
            assert_eq!(scaled, symmetric_inequality(k).unwrap(), "k={k}");
        }

        // Rewriting as w(k-1, k-2)^T x <= k(k-1).
        let s = symmetric_inequality(4).unwrap();
        for i in 1..=4 {
            assert_eq!(s.coeffs[hk_index(i, 0)], rat_int(3));
            assert_eq!(s.coeffs[hk_index(i, 1)], rat_int(2));
            assert_eq!(s.coeffs[hk_index(i, 2)], rat_int(3));
        }
        assert_eq!(s.rhs, rat_int(12));
    }

    #[test]
    fn validity_and_facets() {
        for k in 2..=4 {
            let g = build_hk(k).unwrap();
            assert!(is_facet(&g, &b_inequality(k, 1, 2).unwrap()).unwrap(), "k={k}");
            assert!(is_valid(&g, &symmetric_inequality(k).unwrap()).unwrap());
        }
        // -x_v <= 0 is valid but never a facet-in-this-sense for C6... it is
        // a facet of STAB actually; just check validity here.
        let g = build_hk(2).unwrap();
        let mut coeffs = vec![Rat::zero(); 6];
        coeffs[0] = -Rat::one();
        assert!(is_valid(&g, &LinearInequality::new(coeffs, Rat::zero())).unwrap());

        // A non-facet valid inequality: sum of all <= alpha + 1.
        let loose = LinearInequality::new(vec![Rat::one(); 6], rat_int(4));
        assert!(is_valid(&g, &loose).unwrap());
        assert!(!is_facet(&g, &loose).unwrap());
    }

    #[test]
    fn tight_sets_of_symmetric_inequality() {
        for k in 2..=6 {
            let g = build_hk(k).unwrap();
            let s = symmetric_inequality(k).unwrap();
            let classes = if k <= 8 { classify_maximal_stable_sets(k).ok() } else { None };
            if let Some(c) = classes {
                for m in c.class_two {
                    assert_eq!(s.lhs_on_mask(m), s.rhs, "class-two set tight, k={k}");
                }
            }
            let layer0 = (1..=k).fold(0u64, |acc, i| acc | 1 << hk_index(i, 0));
            let layer2 = (1..=k).fold(0u64, |acc, i| acc | 1 << hk_index(i, 2));
            assert_eq!(s.lhs_on_mask(layer0), s.rhs);
            assert_eq!(s.lhs_on_mask(layer2), s.rhs);
            assert_eq!(g.n(), 3 * k);
        }
    }

    #[test]
    fn cone_membership() {
        let g = build_hk(2).unwrap();
        // [1; chi_S] for a stable set.
        let mut v = vec![Rat::one()];
        let mask = mask_of(&g, &["1_0", "1_2", "2_1"]);
        for i in 0..6 {
            v.push(if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() });
        }
        assert!(cone_frac_member(&g, &v).unwrap());
        assert!(cone_frac_member(&g, &vec![Rat::zero(); 7]).unwrap());
        assert!(!cone_frac_member(&g, &{
            let mut w = vec![Rat::one(); 7];
            w[1] = rat(3, 2);
            w
        })
        .unwrap());
        assert!(cone_frac_member(&g, &vec![Rat::zero(); 3]).is_err());
    }

    #[test]
    fn inequality_json_round_trip() {
        let g = build_hk(3).unwrap();
        let b = b_inequality(3, 1, 2).unwrap();
        let json = b.to_json(&g);
        assert_eq!(json["coeffs"].as_object().unwrap().len(), 5);
        assert!(json["coeffs"].get(hk_label(1, 1)).is_none());
        let parsed = LinearInequality::from_json(&g, &json).unwrap();
        assert_eq!(parsed, b);
    }
}
