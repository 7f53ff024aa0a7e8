//! Slope-iteration rank bounds.
//!
//! A slope sequence `l_1 > l_2 > ... > l_p` (each tied to a shrinking graph
//! index) certifies the rank bound `p + 1` once the threshold and step
//! conditions hold; every strict inequality is decided with certified
//! enclosures and an explicit margin. Sequence values are stored as exact
//! dyadic rationals so that re-verification reproduces the run bit for bit.

use num::traits::Signed;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use crate::cert::MembershipCertificate;
use crate::graph::{build_hk, hk_label};
use crate::real::{dyadic_ceil, format_rat, rat, rat_int, Enc, Rat};
use crate::{Error, Result};

/// The four slope thresholds of a given graph index. `u1` is exact; the
/// other three carry one square root each.
#[derive(Debug, Clone)]
pub struct SlopeThresholds {
    pub k: usize,
    pub u1: Rat,
    pub u2: Enc,
    pub u3: Enc,
    pub u4: Enc,
}

/// `u1(k) = -2(k-1)/(k-2)`, the slope of the shadow facet edge.
pub fn u1_exact(k: usize) -> Rat {
    rat(-2 * (k as i64 - 1), k as i64 - 2)
}

static THRESHOLD_CACHE: LazyLock<RwLock<HashMap<(usize, u32), SlopeThresholds>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

pub fn thresholds(k: usize, bits: u32) -> Result<SlopeThresholds> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("thresholds need k >= 3, got {k}")));
    }
    // Enclosure widths must stay far below 1e-12 regardless of the caller.
    let bits = bits.max(64);
    if let Some(hit) = THRESHOLD_CACHE.read().expect("cache lock").get(&(k, bits)) {
        return Ok(hit.clone());
    }
    let computed = thresholds_uncached(k, bits)?;
    THRESHOLD_CACHE
        .write()
        .expect("cache lock")
        .insert((k, bits), computed.clone());
    Ok(computed)
}

fn thresholds_uncached(k: usize, bits: u32) -> Result<SlopeThresholds> {
    let ki = k as i64;
    let u1 = u1_exact(k);
    // u2 = (k-4 - sqrt(17k^2 - 48k + 32)) / (2(k-2))
    let s2 = Enc::exact(rat_int(17 * ki * ki - 48 * ki + 32)).sqrt(bits)?;
    let u2 = s2
        .neg()
        .add_rat(&rat_int(ki - 4))
        .scale(&rat(1, 2 * (ki - 2)));
    // u3 = 4(k-1)(-3k + 4 - 2 sqrt(k-1)) / ((k-2)(9k-10))
    let s3 = Enc::exact(rat_int(ki - 1)).sqrt(bits)?;
    let u3 = s3
        .scale(&rat_int(-2))
        .add_rat(&rat_int(-3 * ki + 4))
        .scale(&rat(4 * (ki - 1), (ki - 2) * (9 * ki - 10)));
    // u4 = -1 - k / (3k^2 - 2(k-1)^2 sqrt(2k/(k-1)) - 4k)
    let s4 = Enc::exact(rat(2 * ki, ki - 1)).sqrt(bits)?;
    let denom = s4
        .scale(&rat_int(-2 * (ki - 1) * (ki - 1)))
        .add_rat(&rat_int(3 * ki * ki - 4 * ki));
    let u4 = Enc::exact(rat_int(ki)).div(&denom)?.neg().add_rat(&rat_int(-1));
    Ok(SlopeThresholds { k, u1, u2, u3, u4 })
}

/// The step discriminant
/// `gamma = (k-2)(9k-10) l^2 + 8(k-1)(3k-4) l + 16(k-1)^2`, exact.
pub fn gamma(k: usize, ell: &Rat) -> Rat {
    let ki = k as i64;
    rat_int((ki - 2) * (9 * ki - 10)) * ell * ell
        + rat_int(8 * (ki - 1) * (3 * ki - 4)) * ell
        + rat_int(16 * (ki - 1) * (ki - 1))
}

/// One slope-decay step:
/// `h(k, l) = (4(k-2)l + 8(k-1)) / (sqrt(gamma) + 3(k-2)l + 8(k-1)) - 2 - l`.
/// Requires `k >= 5`, `l` strictly inside `(u1(k), u3(k))`, and
/// `gamma >= 0`.
pub fn h_step(k: usize, ell: &Rat, bits: u32) -> Result<Enc> {
    if k < 5 {
        return Err(Error::InvalidArgument(format!("h step needs k >= 5, got {k}")));
    }
    let th = thresholds(k, bits)?;
    if ell <= &th.u1 {
        return Err(Error::InvalidArgument(format!(
            "slope {} not above u1({k}) = {}",
            format_rat(ell),
            format_rat(&th.u1)
        )));
    }
    let ell_enc = Enc::exact(ell.clone());
    if ell_enc.lt(&th.u3) != Some(true) {
        return Err(Error::InvalidArgument(format!(
            "slope {} not certified below u3({k})",
            format_rat(ell)
        )));
    }
    let g = gamma(k, ell);
    if g.is_negative() {
        return Err(Error::InvalidArgument("negative step discriminant".into()));
    }
    let ki = k as i64;
    let root = Enc::exact(g).sqrt(bits)?;
    let numer = rat_int(4 * (ki - 2)) * ell + rat_int(8 * (ki - 1));
    let denom = root.add_rat(&(rat_int(3 * (ki - 2)) * ell + rat_int(8 * (ki - 1))));
    let quotient = Enc::exact(numer).div(&denom)?;
    Ok(quotient.add_rat(&(rat_int(-2) - ell)))
}

/// A slope sequence in decreasing-index order: `values[i-1]` is `l_i`, tied
/// to graph index `k - p + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSequence {
    pub k: usize,
    pub values: Vec<Rat>,
}

impl SlopeSequence {
    pub fn p(&self) -> usize {
        self.values.len()
    }

    pub fn graph_index(&self, i: usize) -> usize {
        self.k - self.p() + i
    }
}

/// One verified condition with its certified margin.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionRecord {
    pub name: String,
    pub margin: String,
}

/// Verification outcome: the rank bound plus the full audit trail.
#[derive(Debug, Clone)]
pub struct VerifiedSequence {
    pub sequence: SlopeSequence,
    pub bound: usize,
    pub conditions: Vec<ConditionRecord>,
    /// Smallest certified margin among the strict threshold conditions.
    pub min_strict_margin: Rat,
}

/// Checks every sequence condition with certified enclosures; strict
/// inequalities must hold with positive margin, step inequalities must hold
/// with nonnegative slack.
pub fn verify_sequence(seq: &SlopeSequence, bits: u32) -> Result<VerifiedSequence> {
    let p = seq.p();
    let k = seq.k;
    if p == 0 {
        return Err(Error::InvalidArgument("empty slope sequence".into()));
    }
    if k < 5 {
        return Err(Error::InvalidArgument(format!("sequence needs k >= 5, got {k}")));
    }
    let mut conditions = Vec::new();
    let mut min_strict: Option<Rat> = None;
    let mut record_strict = |name: String, margin: Rat, min_strict: &mut Option<Rat>| {
        conditions.push(ConditionRecord { name, margin: format_rat(&margin) });
        if min_strict.as_ref().is_none_or(|m| margin < *m) {
            *min_strict = Some(margin);
        }
    };

    // l_p > u1(k), exact.
    let lp = &seq.values[p - 1];
    let u1 = u1_exact(k);
    let m = lp - &u1;
    if !m.is_positive() {
        return Err(Error::Verification(format!(
            "condition l_p > u1({k}) failed: {} <= {}",
            format_rat(lp),
            format_rat(&u1)
        )));
    }
    record_strict(format!("l_{p} > u1({k})"), m, &mut min_strict);

    // l_2 < u3(k - p + 2).
    if p >= 2 {
        let idx = seq.graph_index(2);
        let th = thresholds(idx, bits)?;
        let l2 = Enc::exact(seq.values[1].clone());
        if l2.lt(&th.u3) != Some(true) {
            return Err(Error::Verification(format!(
                "condition l_2 < u3({idx}) failed: {} vs {}",
                format_rat(&seq.values[1]),
                th.u3
            )));
        }
        record_strict(format!("l_2 < u3({idx})"), l2.margin_below(&th.u3), &mut min_strict);
    }

    // l_1 < u4(k - p + 1).
    let idx1 = seq.graph_index(1);
    if idx1 < 4 {
        return Err(Error::Verification(format!(
            "sequence too long: terminal graph index {idx1} below 4"
        )));
    }
    let th1 = thresholds(idx1, bits)?;
    let l1 = Enc::exact(seq.values[0].clone());
    if l1.lt(&th1.u4) != Some(true) {
        return Err(Error::Verification(format!(
            "condition l_1 < u4({idx1}) failed: {} vs {}",
            format_rat(&seq.values[0]),
            th1.u4
        )));
    }
    record_strict(format!("l_1 < u4({idx1})"), l1.margin_below(&th1.u4), &mut min_strict);

    // Step conditions l_i + h(k-p+i, l_i) <= l_{i-1}.
    for i in (2..=p).rev() {
        let gi = seq.graph_index(i);
        let li = &seq.values[i - 1];
        let h = h_step(gi, li, bits)?;
        let stepped_hi = li + h.hi();
        let slack = &seq.values[i - 2] - &stepped_hi;
        if slack.is_negative() {
            return Err(Error::Verification(format!(
                "step condition l_{i} + h({gi}, l_{i}) <= l_{} failed by {}",
                i - 1,
                format_rat(&-slack)
            )));
        }
        record_strict(format!("l_{i} + h({gi}) <= l_{}", i - 1), slack, &mut min_strict);
    }

    Ok(VerifiedSequence {
        sequence: seq.clone(),
        bound: p + 1,
        conditions,
        min_strict_margin: min_strict.expect("at least one condition"),
    })
}

/// Grid for stored sequence values.
const VALUE_BITS: u32 = 96;

/// Extra slack added above each step so that re-verification has certified
/// margin rather than a zero-width tie.
fn default_slack() -> Rat {
    rat(1, 1 << 26)
}

/// Extends a starting slope at graph index `k` by the step map for as long
/// as the thresholds permit, then keeps the longest prefix whose terminal
/// value certifies below `u4`, and re-verifies the result.
pub fn sequence_from_start(k: usize, start: &Rat, bits: u32) -> Result<VerifiedSequence> {
    let slack = default_slack();
    // vals[t] sits at graph index k - t; the start value is kept exact,
    // computed extensions are rounded up onto the dyadic grid.
    let mut vals = vec![start.clone()];
    let mut m = k;
    while m >= 5 {
        let v = vals.last().expect("nonempty").clone();
        let th = thresholds(m, bits)?;
        if v <= th.u1 || Enc::exact(v.clone()).lt(&th.u3) != Some(true) {
            break;
        }
        if gamma(m, &v).is_negative() {
            break;
        }
        let h = h_step(m, &v, bits)?;
        let next = dyadic_ceil(&(&v + h.hi() + &slack), VALUE_BITS);
        vals.push(next);
        m -= 1;
    }
    // Largest p whose terminal value certifies below u4 at its graph index.
    for p in (1..=vals.len()).rev() {
        let gi = k + 1 - p;
        if gi < 4 {
            continue;
        }
        let th = thresholds(gi, bits)?;
        if Enc::exact(vals[p - 1].clone()).lt(&th.u4) == Some(true) {
            let mut values: Vec<Rat> = vals[..p].to_vec();
            values.reverse();
            return verify_sequence(&SlopeSequence { k, values }, bits);
        }
    }
    Err(Error::Verification(format!(
        "no terminal slope certified below u4 for k = {k}, start = {}",
        format_rat(start)
    )))
}

/// Builds the longest slope sequence it can for graph index `k`: starts just
/// above `u1(k)` and retries with halved `eps` when the terminal conditions
/// fail.
pub fn greedy_search(k: usize, eps: &Rat, bits: u32) -> Result<VerifiedSequence> {
    if k < 5 {
        return Err(Error::InvalidArgument(format!("greedy search needs k >= 5, got {k}")));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mut eps_try = eps.clone();
    let mut last_err: Option<Error> = None;
    for _ in 0..20 {
        match sequence_from_start(k, &(u1_exact(k) + &eps_try), bits) {
            Ok(v) => return Ok(v),
            Err(e) => last_err = Some(e),
        }
        eps_try /= rat_int(2);
    }
    Err(last_err.unwrap_or_else(|| Error::Verification("greedy search failed".into())))
}

/// Closed-form analytic floor bound: `2` for `4 <= k <= 6`, `3` for
/// `7 <= k <= 9`, and `floor(0.19 (k-2)) + 3` beyond.
pub fn analytic_bound(k: usize) -> Result<usize> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!("analytic bound needs k >= 4, got {k}")));
    }
    Ok(match k {
        4..=6 => 2,
        7..=9 => 3,
        _ => {
            let scaled = rat(19, 100) * rat_int(k as i64 - 2);
            let floor = scaled.floor().to_integer();
            let floor: i64 = i64::try_from(floor).expect("small bound");
            floor as usize + 3
        }
    })
}

/// Destroy-recursion upper bound `k - 2`, rebuilt and structurally verified
/// step by step: the base graph has every destruction bipartite, and each
/// increment destroys either to a bipartite graph or to the previous family
/// member (exact labeled-graph equality after renumbering).
pub fn upper_bound_chain(k: usize) -> Result<usize> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("upper bound chain needs k >= 3, got {k}")));
    }
    // Base: every destruction of the k = 3 member is bipartite.
    let base = build_hk(3)?;
    for v in 0..base.n() {
        if !base.destroy(base.label(v))?.is_bipartite() {
            return Err(Error::Verification(format!(
                "destruction of {} in the base graph is not bipartite",
                base.label(v)
            )));
        }
    }
    for kk in 4..=k {
        let g = build_hk(kk)?;
        // Middle-layer destruction removes one whole triple; the remainder
        // must equal the previous member after shifting indices by one.
        let destroyed = g.destroy(&hk_label(1, 1))?;
        let expected = build_hk(kk - 1)?.relabel(|label| {
            let (i, p) = label.split_once('_').expect("layer label");
            let i: usize = i.parse().expect("index label");
            format!("{}_{p}", i + 1)
        })?;
        if destroyed != expected {
            return Err(Error::Verification(format!(
                "middle destruction of member {kk} does not reproduce member {}",
                kk - 1
            )));
        }
        // Outer-layer destructions are bipartite; rotations cover the rest.
        for p in [0usize, 2] {
            if !g.destroy(&hk_label(1, p))?.is_bipartite() {
                return Err(Error::Verification(format!(
                    "outer destruction 1_{p} of member {kk} is not bipartite"
                )));
            }
        }
    }
    Ok(k - 2)
}

/// How a rank bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Certificate,
    SlopeSequence,
    AnalyticFormula,
    DestroyUpper,
}

/// A rank bound with its justifying witness.
#[derive(Debug, Clone)]
pub struct RankBoundReport {
    pub k: usize,
    pub method: Method,
    pub bound: usize,
    pub sequence: Option<VerifiedSequence>,
    pub certificate: Option<MembershipCertificate>,
}

impl RankBoundReport {
    pub fn from_sequence(v: VerifiedSequence) -> Self {
        RankBoundReport {
            k: v.sequence.k,
            method: Method::SlopeSequence,
            bound: v.bound,
            sequence: Some(v),
            certificate: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match (&self.sequence, &self.certificate) {
            (Some(seq), _) => serde_json::json!({
                "values": seq
                    .sequence
                    .values
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>(),
                "conditions": seq.conditions,
                "min_strict_margin": format_rat(&seq.min_strict_margin),
            }),
            (None, Some(cert)) => cert.to_json(),
            (None, None) => serde_json::Value::Null,
        };
        serde_json::json!({
            "k": self.k,
            "method": serde_json::to_value(self.method).expect("enum"),
            "bound": self.bound,
            "witness": witness,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DEFAULT_BITS;

    const BITS: u32 = DEFAULT_BITS;

    fn close_to(e: &Enc, target: &Rat, tol: &Rat) -> bool {
        (e.lo() - target).abs() < *tol && (e.hi() - target).abs() < *tol
    }

    #[test]
    fn threshold_limits() {
        let million = thresholds(1_000_000, 128).unwrap();
        assert!((million.u1.clone() - rat_int(-2)).abs() < rat(1, 1000));
        // u2 tends to (1 - sqrt(17))/2.
        let target = Enc::exact(rat_int(17))
            .sqrt(128)
            .unwrap()
            .neg()
            .add_rat(&rat_int(1))
            .scale(&rat(1, 2));
        let diff = million.u2.sub(&target);
        assert!(diff.lo().abs() < rat(1, 1000) && diff.hi().abs() < rat(1, 1000));
        // u3 tends to -4/3.
        assert!(close_to(&million.u3, &rat(-4, 3), &rat(1, 1000)));
        // u4 tends to -1 and stays above -4/3.
        assert!(close_to(&million.u4, &rat_int(-1), &rat(1, 100)));
        assert!(Enc::exact(rat(-4, 3)).lt(&million.u4) == Some(true));
    }

    #[test]
    fn threshold_ordering_samples() {
        for k in [5usize, 6, 7, 10, 27, 100, 1000] {
            let th = thresholds(k, BITS).unwrap();
            assert_eq!(Enc::exact(th.u1.clone()).lt(&th.u2), Some(true), "u1<u2 k={k}");
            assert_eq!(th.u2.lt(&th.u3), Some(true), "u2<u3 k={k}");
            assert_eq!(th.u3.lt(&th.u4), Some(true), "u3<u4 k={k}");
        }
        // The sandwich chain at k = 27.
        let th = thresholds(27, BITS).unwrap();
        let phi = Enc::exact(rat_int(17))
            .sqrt(BITS)
            .unwrap()
            .neg()
            .add_rat(&rat_int(1))
            .scale(&rat(1, 2));
        assert_eq!(Enc::exact(rat_int(-2)).lt(&th.u2), Some(true));
        assert_eq!(th.u2.lt(&phi), Some(true));
        assert_eq!(phi.lt(&th.u3), Some(true));
        assert_eq!(th.u3.lt(&Enc::exact(rat(-4, 3))), Some(true));
        assert_eq!(Enc::exact(rat(-4, 3)).lt(&th.u4), Some(true));
    }

    #[test]
    fn threshold_monotonicity_sample() {
        let mut prev = thresholds(5, 128).unwrap();
        for k in 6..=300usize {
            let cur = thresholds(k, 128).unwrap();
            assert!(prev.u1 < cur.u1, "u1 k={k}");
            assert_eq!(prev.u2.lt(&cur.u2), Some(true), "u2 k={k}");
            assert_eq!(prev.u3.lt(&cur.u3), Some(true), "u3 k={k}");
            assert_eq!(prev.u4.lt(&cur.u4), Some(true), "u4 k={k}");
            prev = cur;
        }
    }

    #[test]
    fn h_step_boundary_identities() {
        // At l = u1(k) the step value equals 2/(k-2); just above u1 it stays
        // within a hair of it.
        for k in [5usize, 10, 50] {
            let l = u1_exact(k) + rat(1, 1_000_000_000_000i64);
            let h = h_step(k, &l, BITS).unwrap();
            let target = rat(2, k as i64 - 2);
            assert!(close_to(&h, &target, &rat(1, 100_000_000)), "k={k}: {h}");
        }
        // Derivative at u1 is about -1/(k-1): finite difference check.
        for k in [6usize, 10] {
            let step = rat(1, 10_000_000);
            let l0 = u1_exact(k) + &step;
            let l1 = &l0 + &step;
            let h0 = h_step(k, &l0, BITS).unwrap();
            let h1 = h_step(k, &l1, BITS).unwrap();
            let fd = h1.sub(&h0).scale(&(rat_int(1) / &step));
            let target = rat(-1, k as i64 - 1);
            assert!(close_to(&fd, &target, &rat(1, 10_000)), "k={k}");
        }
        // Domain errors.
        assert!(h_step(4, &rat_int(-2), BITS).is_err());
        assert!(h_step(10, &rat_int(-3), BITS).is_err());
        assert!(h_step(10, &rat_int(0), BITS).is_err());
    }

    #[test]
    fn h_bounded_on_lower_interval() {
        // h(k, l) <= 2/(k-2) across (u1, u2), sampled.
        for k in [5usize, 8, 21, 60] {
            let th = thresholds(k, BITS).unwrap();
            let lo = &th.u1;
            let hi = th.u2.lo();
            let bound = rat(2, k as i64 - 2);
            for i in 1..25 {
                let l = lo + (hi - lo) * rat(i, 25);
                let h = h_step(k, &l, BITS).unwrap();
                assert!(h.hi() <= &bound, "k={k} i={i}: {h}");
            }
        }
    }

    #[test]
    fn worked_sequences() {
        // k = 7 with l_2 = -2.39.
        let l2 = rat(-239, 100);
        let h = h_step(7, &l2, BITS).unwrap();
        let l1 = dyadic_ceil(&(&l2 + h.hi() + rat(1, 1 << 26)), VALUE_BITS);
        let seq = SlopeSequence { k: 7, values: vec![l1, l2] };
        let verified = verify_sequence(&seq, BITS).unwrap();
        assert_eq!(verified.bound, 3);
        assert!(verified.min_strict_margin > rat(1, 1_000_000_000));

        // k = 10 with l_3 = -2.24.
        let l3 = rat(-224, 100);
        let h3 = h_step(10, &l3, BITS).unwrap();
        let l2 = dyadic_ceil(&(&l3 + h3.hi() + rat(1, 1 << 26)), VALUE_BITS);
        let h2 = h_step(9, &l2, BITS).unwrap();
        let l1 = dyadic_ceil(&(&l2 + h2.hi() + rat(1, 1 << 26)), VALUE_BITS);
        let seq = SlopeSequence { k: 10, values: vec![l1, l2, l3] };
        let verified = verify_sequence(&seq, BITS).unwrap();
        assert_eq!(verified.bound, 4);
        assert!(verified.min_strict_margin > rat(1, 1_000_000_000));

        // Empty sequence rejected.
        assert!(verify_sequence(&SlopeSequence { k: 7, values: vec![] }, BITS).is_err());
    }

    #[test]
    fn greedy_round_trip_small() {
        for k in [7usize, 10, 15, 30] {
            let verified = greedy_search(k, &rat(1, 1_000_000), BITS).unwrap();
            // Round trip: re-verification succeeds on the same values.
            let again = verify_sequence(&verified.sequence, BITS).unwrap();
            assert_eq!(again.bound, verified.bound);
            assert!(verified.bound >= analytic_bound(k).unwrap(), "k={k}");
        }
        assert!(greedy_search(4, &rat(1, 10), BITS).is_err());
    }

    #[test]
    fn analytic_bound_values() {
        assert_eq!(analytic_bound(4).unwrap(), 2);
        assert_eq!(analytic_bound(7).unwrap(), 3);
        assert_eq!(analytic_bound(10).unwrap(), 4);
        assert_eq!(analytic_bound(100).unwrap(), 21);
        assert!(analytic_bound(3).is_err());
    }

    #[test]
    fn upper_chain_values() {
        assert_eq!(upper_bound_chain(3).unwrap(), 1);
        assert_eq!(upper_bound_chain(4).unwrap(), 2);
        assert_eq!(upper_bound_chain(10).unwrap(), 8);
        assert!(upper_bound_chain(2).is_err());
        // Lower and upper bound meet at k = 4.
        assert_eq!(analytic_bound(4).unwrap(), upper_bound_chain(4).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let verified = greedy_search(7, &rat(1, 1_000_000), BITS).unwrap();
        let report = RankBoundReport::from_sequence(verified);
        let json = report.to_json();
        assert_eq!(json["method"], "slope-sequence");
        assert_eq!(json["k"], 7);
        assert!(json["witness"]["values"].as_array().unwrap().len() >= 2);
    }

    #[test]
    fn slope_matches_thresholds_geometry() {
        // u1 equals the slope from (1/2, 0) to the apex; cross-module check.
        for k in 5..=12usize {
            let s = crate::shadow::slope(k, &rat(1, 2), &rat_int(0)).unwrap();
            assert_eq!(s, u1_exact(k));
        }
    }
}
