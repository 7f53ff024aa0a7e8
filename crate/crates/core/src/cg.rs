//! Cutting-plane (rounding-closure) rank bounds for the stable set polytope
//! of the three-layer family.
//!
//! The lower bound is carried by an explicit sequence of uniform points
//! whose membership in successive closures reduces to a number-theoretic
//! threshold; the upper bound is an exact-rational averaging/flooring
//! derivation executed symbolically, never materializing the exponentially
//! many subset choices.

use num::bigint::BigInt;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_hk, hk_index, Graph};
use crate::polytope::{for_each_stable_set, LinearInequality};
use crate::real::{format_rat, log2_enc, rat, rat_int, Enc, Rat};
use crate::{Error, Result};

/// Certified enclosures of the two rank bounds
/// `log_4((3k-7)/2) < d <= log_2(k-1)`.
pub fn rank_bounds(k: usize, bits: u32) -> Result<(Enc, Enc)> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("rank bounds need k >= 3, got {k}")));
    }
    let ki = k as i64;
    let lower_arg = rat(3 * ki - 7, 2);
    let lower = log2_enc(&lower_arg, bits)?.scale(&rat(1, 2));
    let upper = log2_enc(&rat_int(ki - 1), bits)?;
    Ok((lower, upper))
}

/// Exact route for `lower < upper`: comparing the log arguments reduces to
/// `(3k-7)/2 < (k-1)^2`.
pub fn lower_below_upper_exact(k: u64) -> bool {
    let k = k as i128;
    3 * k - 7 < 2 * (k - 1) * (k - 1)
}

/// Witness data for the closure-rank lower bound at depth `d`.
#[derive(Debug, Clone)]
pub struct CgWitness {
    pub d: usize,
    pub k: usize,
    /// Uniform point scalars: coordinate value of the i-th witness point.
    pub points: Vec<Rat>,
}

impl CgWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "k": self.k,
            "points": self.points.iter().map(format_rat).collect::<Vec<_>>(),
        })
    }
}

fn pow2_rat(e: usize) -> Rat {
    Rat::from_integer(BigInt::one() << e)
}

/// Verifies the lower-bound witness for depth `d`:
/// (a) `k = (2^(2d+1) + 7)/3` is integral,
/// (b) the final uniform point violates the size-`3k-4` facet,
/// (c) the number-theoretic threshold holds for each level, and
/// (d) for small `k`, the one-third lower bound on valid-inequality ratios
///     is spot-checked against enumeration.
pub fn verify_lower_witness(d: usize) -> Result<CgWitness> {
    if d < 1 {
        return Err(Error::InvalidArgument("witness depth must be >= 1".into()));
    }
    // (a) integrality of k.
    let power = BigInt::one() << (2 * d + 1);
    let numer = &power + BigInt::from(7);
    if (&numer % BigInt::from(3)) != BigInt::zero() {
        return Err(Error::Verification("2^(2d+1) + 7 is not divisible by 3".into()));
    }
    if (&power % BigInt::from(3)) != BigInt::from(2) {
        return Err(Error::Verification("2^(2d+1) is not 2 mod 3".into()));
    }
    let k_big = numer / BigInt::from(3);
    let k = usize::try_from(&k_big)
        .map_err(|_| Error::InvalidArgument(format!("depth {d} gives an oversized k")))?;

    // Witness points x^(i) = (2^(2i+1) + 1) / (3 * 2^(2i+1)), equal to the
    // partial sums 1/2 - sum_{j<=i} 2^-(2j+1).
    let mut points = Vec::with_capacity(d);
    let mut partial = rat(1, 2);
    for i in 1..=d {
        let m = pow2_rat(2 * i + 1);
        let closed = (&m + rat_int(1)) / (rat_int(3) * &m);
        partial -= rat_int(1) / &m;
        if partial != closed {
            return Err(Error::Verification(format!(
                "partial-sum identity failed at level {i}"
            )));
        }
        points.push(closed);
    }

    // (b) violation of the facet: value * (3k - 4) > k - 1.
    let last = points.last().expect("d >= 1");
    let lhs = last * rat_int(3 * k as i64 - 4);
    if lhs <= rat_int(k as i64 - 1) {
        return Err(Error::Verification(format!(
            "witness point does not violate the facet: {} <= {}",
            format_rat(&lhs),
            k - 1
        )));
    }

    // (c) threshold: every fraction beta/s > 1/3 with integer s < 2^(2i+1)
    // already satisfies beta/s >= (2^(2i+1)+1) / (3 * 2^(2i+1)).
    for i in 1..=d {
        let m: i64 = 1 << (2 * i + 1);
        let threshold = rat(m + 1, 3 * m);
        for s in 1..m {
            let beta_min = s / 3 + 1;
            if rat(beta_min, s) < threshold {
                return Err(Error::Verification(format!(
                    "threshold fails at level {i} for s = {s}"
                )));
            }
        }
    }

    // (d) sampled evidence for the one-third bound, only at enumerable size.
    if k <= 9 {
        spot_check_one_third(k, 60)?;
    }

    Ok(CgWitness { d, k, points })
}

/// Samples nonneg integral objective vectors, maximizes them over the stable
/// sets by enumeration, and checks `beta / (a . ones) > 1/3`.
fn spot_check_one_third(k: usize, samples: usize) -> Result<()> {
    let g = build_hk(k)?;
    let mut masks = Vec::new();
    for_each_stable_set(&g, |m| masks.push(m))?;
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..samples {
        let coeffs: Vec<i64> = (0..g.n()).map(|_| rng.gen_range(0..=3)).collect();
        let total: i64 = coeffs.iter().sum();
        if total == 0 {
            continue;
        }
        let beta = masks
            .iter()
            .map(|&m| {
                (0..g.n())
                    .filter(|&v| m >> v & 1 == 1)
                    .map(|v| coeffs[v])
                    .sum::<i64>()
            })
            .max()
            .expect("stable sets exist");
        if rat(beta, 1) / rat(total, 1) <= rat(1, 3) {
            return Err(Error::Verification(format!(
                "one-third bound failed for sampled objective {coeffs:?}"
            )));
        }
    }
    Ok(())
}

/// One inequality of the symbolic derivation, in the uniform shape
/// `pair_coeff * (x_{j_0} + x_{j'_2}) + triple_coeff * sum(all other
/// triples) <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationStep {
    pub name: String,
    pub pair_coeff: Rat,
    pub triple_coeff: Rat,
    pub rhs: Rat,
}

impl DerivationStep {
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "pair_coeff": format_rat(&self.pair_coeff),
            "triple_coeff": format_rat(&self.triple_coeff),
            "rhs": format_rat(&self.rhs),
        })
    }

    /// Materializes the inequality over the concrete vertex order of `H_k`
    /// for the index pair `(j, j')`.
    pub fn materialize(&self, k: usize, j: usize, jp: usize) -> LinearInequality {
        let mut coeffs = vec![Rat::zero(); 3 * k];
        coeffs[hk_index(j, 0)] = self.pair_coeff.clone();
        coeffs[hk_index(jp, 2)] = self.pair_coeff.clone();
        for l in 1..=k {
            if l != j && l != jp {
                for p in 0..3 {
                    coeffs[hk_index(l, p)] = self.triple_coeff.clone();
                }
            }
        }
        LinearInequality::new(coeffs, self.rhs.clone())
    }
}

/// The audited averaging/flooring derivation of the upper bound.
#[derive(Debug, Clone)]
pub struct CgDerivation {
    pub d: usize,
    pub k: usize,
    pub steps: Vec<DerivationStep>,
    pub final_rhs: Rat,
    pub floored_rhs: Rat,
}

impl CgDerivation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "k": self.k,
            "steps": self.steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "final_rhs": format_rat(&self.final_rhs),
            "floored_rhs": format_rat(&self.floored_rhs),
        })
    }
}

/// Symbolically executes the upper-bound derivation for `k = 2^d + 1`:
/// average the inherited inequality over its subset choices, average the
/// edge-augmented variant, combine, and floor. Every identity is exact.
pub fn run_upper_derivation(d: usize) -> Result<CgDerivation> {
    if d < 2 {
        return Err(Error::InvalidArgument("upper derivation needs d >= 2".into()));
    }
    if d > 62 {
        return Err(Error::InvalidArgument("depth too large".into()));
    }
    let k: usize = (1usize << d) + 1;
    let half = 1i64 << (d - 1); // 2^(d-1)
    let ki = k as i64;

    let mut steps = Vec::new();

    // Averaging the inherited inequality (small-subset form) over all
    // subset choices: each remaining triple appears in |T|/(k-2) of them.
    let avg1 = DerivationStep {
        name: "averaged-inherited".into(),
        pair_coeff: Rat::one(),
        triple_coeff: rat(half - 1, ki - 2),
        rhs: rat_int(half),
    };
    steps.push(avg1.clone());

    // Edge-augmented variant (two edge inequalities absorb the pair terms)
    // averaged over the larger subsets.
    let avg2 = DerivationStep {
        name: "averaged-augmented".into(),
        pair_coeff: Rat::zero(),
        triple_coeff: rat(half + 1, ki - 2),
        rhs: rat_int(half + 2),
    };
    steps.push(avg2.clone());

    // Combine: avg1 + ((k - 2^(d-1) - 1)/(2^(d-1) + 1)) * avg2.
    let factor = rat(ki - half - 1, half + 1);
    let combined = DerivationStep {
        name: "combined".into(),
        pair_coeff: &avg1.pair_coeff + &factor * &avg2.pair_coeff,
        triple_coeff: &avg1.triple_coeff + &factor * &avg2.triple_coeff,
        rhs: &avg1.rhs + &factor * &avg2.rhs,
    };
    steps.push(combined.clone());

    // The combined left side must be exactly the facet support.
    if combined.pair_coeff != Rat::one() || combined.triple_coeff != Rat::one() {
        return Err(Error::Verification(format!(
            "combined coefficients are not uniform ones: pair {}, triple {}",
            format_rat(&combined.pair_coeff),
            format_rat(&combined.triple_coeff)
        )));
    }
    // Right side simplifies to k - 2 + k/(2^(d-1) + 1), strictly between
    // k - 1 and k, so the floor is k - 1.
    let expected_rhs = rat_int(ki - 2) + rat(ki, half + 1);
    if combined.rhs != expected_rhs {
        return Err(Error::Verification(format!(
            "combined right-hand side {} differs from {}",
            format_rat(&combined.rhs),
            format_rat(&expected_rhs)
        )));
    }
    let excess = rat(ki, half + 1);
    if excess <= Rat::one() || excess >= rat_int(2) {
        return Err(Error::Verification(format!(
            "fractional excess {} is not strictly between 1 and 2",
            format_rat(&excess)
        )));
    }
    let floored = combined.rhs.floor();
    if floored != rat_int(ki - 1) {
        return Err(Error::Verification(format!(
            "floored right-hand side {} is not k - 1",
            format_rat(&floored)
        )));
    }
    steps.push(DerivationStep {
        name: "floored".into(),
        pair_coeff: Rat::one(),
        triple_coeff: Rat::one(),
        rhs: floored.clone(),
    });

    Ok(CgDerivation { d, k, steps, final_rhs: combined.rhs, floored_rhs: floored })
}

/// The concrete pre-averaging inequalities for the only enumerable depth
/// (`d = 2`, `k = 5`): the inherited instances for every small subset, and
/// the edge-augmented instances for every large subset.
pub fn concrete_instances_d2(j: usize, jp: usize) -> Result<Vec<(String, LinearInequality)>> {
    let k = 5usize;
    let others: Vec<usize> = (1..=k).filter(|&l| l != j && l != jp).collect();
    let mut out = Vec::new();
    // |T| = 1 inherited instances.
    for &t in &others {
        let mut coeffs = vec![Rat::zero(); 3 * k];
        coeffs[hk_index(j, 0)] = Rat::one();
        coeffs[hk_index(jp, 2)] = Rat::one();
        for p in 0..3 {
            coeffs[hk_index(t, p)] = Rat::one();
        }
        out.push((
            format!("inherited T={{{t}}}"),
            LinearInequality::new(coeffs, rat_int(2)),
        ));
    }
    // |T| = 3 edge-augmented instance.
    let mut coeffs = vec![Rat::zero(); 3 * k];
    for &t in &others {
        for p in 0..3 {
            coeffs[hk_index(t, p)] = Rat::one();
        }
    }
    out.push((
        "augmented T=all".into(),
        LinearInequality::new(coeffs, rat_int(4)),
    ));
    Ok(out)
}

/// Checks that a mask is an independent set of `g`.
fn is_stable_mask(g: &Graph, mask: u64) -> bool {
    g.edges().all(|(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0)
}

/// The three-cover identity: the rotated layer sets
/// `S_0 = ([k]_0 \ {j_0}) u {j_1}`, `S_1 = ([k]_1 \ {j_1}) u {j_0, j_2}`,
/// `S_2 = ([k]_2 \ {j_2}) u {j_1}` are stable and their incidence vectors
/// sum to `ones + e_{j_1}` exactly.
pub fn triple_cover_identity(k: usize, j: usize) -> Result<bool> {
    if !(2..=8).contains(&k) || j < 1 || j > k {
        return Err(Error::InvalidArgument(format!(
            "triple cover identity needs 2 <= k <= 8 and j in 1..={k}"
        )));
    }
    let g = build_hk(k)?;
    let layer = |p: usize| -> u64 { (1..=k).fold(0, |m, i| m | 1 << hk_index(i, p)) };
    let s0 = (layer(0) & !(1 << hk_index(j, 0))) | 1 << hk_index(j, 1);
    let s1 = (layer(1) & !(1 << hk_index(j, 1)))
        | 1 << hk_index(j, 0)
        | 1 << hk_index(j, 2);
    let s2 = (layer(2) & !(1 << hk_index(j, 2))) | 1 << hk_index(j, 1);
    for (name, s) in [("S0", s0), ("S1", s1), ("S2", s2)] {
        if !is_stable_mask(&g, s) {
            return Err(Error::Verification(format!("{name} is not stable for k={k}, j={j}")));
        }
    }
    let mut counts = vec![0u32; 3 * k];
    for s in [s0, s1, s2] {
        for (v, slot) in counts.iter_mut().enumerate() {
            *slot += (s >> v & 1) as u32;
        }
    }
    let expected = |v: usize| if v == hk_index(j, 1) { 2 } else { 1 };
    Ok((0..3 * k).all(|v| counts[v] == expected(v)))
}
