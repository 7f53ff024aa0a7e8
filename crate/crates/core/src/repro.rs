//! The reproduction manifest: every acceptance check as a callable item.
//!
//! Each criterion returns a detail string on success and a verification
//! error on failure; runtime budgets are part of the contract and are
//! enforced here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

use crate::cert::{
    build_wk, discriminant_identity_check, discriminant_identity_exact, example_h7_params,
    psd_closed_form, psd_eigen_oracle, verify_recursive, CertificateParams, ClosedFormResolver,
};
use crate::cg::{run_upper_derivation, verify_lower_witness};
use crate::graph::{
    build_hk, build_lk, build_lk2, build_qls, cycle_graph, find_isomorphism, hk_label,
    is_isomorphism_map, petersen,
};
use crate::polytope::{
    alpha, b_inequality, classify_maximal_stable_sets, is_facet, is_valid, symmetric_inequality,
    LinearInequality,
};
use crate::rank::{analytic_bound, greedy_search, h_step, sequence_from_start, thresholds};
use crate::real::{rat, rat_int, Enc, Rat, DEFAULT_BITS};
use crate::shadow::{brute_force_stab_shadow, p_bar_eval, p_k_eval, phi_stab};
use crate::{Error, Result};

use num::traits::{Signed, Zero};

macro_rules! check {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(Error::Verification(format!($($arg)+)));
        }
    };
}

fn budget(start: Instant, seconds: f64, what: &str) -> Result<f64> {
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= seconds {
        return Err(Error::Verification(format!(
            "{what} took {elapsed:.2}s, budget {seconds}s"
        )));
    }
    Ok(elapsed)
}

/// 1. Exact depth-2 certificate for k = 7.
fn certificate_h7() -> Result<String> {
    let start = Instant::now();
    let params = example_h7_params();
    let cert = verify_recursive(&params, 2, &ClosedFormResolver)?;
    check!(cert.children.len() == 2, "expected two children");
    let combination = rat_int(12) * &params.a + rat_int(5) * &params.b;
    check!(
        combination == rat(60026, 10000),
        "facet combination must equal 6.0026 exactly"
    );
    check!(combination > rat_int(6), "facet combination must exceed 6");
    let elapsed = budget(start, 1.0, "depth-2 certificate")?;
    Ok(format!(
        "depth-2 certificate verified exactly; 12a + 5b = 6.0026 > 6, rank >= 3 ({elapsed:.3}s)"
    ))
}

/// 2. The two worked slope sequences.
fn slope_examples() -> Result<String> {
    let margin_floor = rat(1, 1_000_000_000);

    let start = Instant::now();
    let v7 = sequence_from_start(7, &rat(-239, 100), DEFAULT_BITS)?;
    check!(v7.bound >= 3, "k=7 sequence must certify rank >= 3, got {}", v7.bound);
    check!(
        v7.min_strict_margin >= margin_floor,
        "k=7 margin below 1e-9"
    );
    let t7 = budget(start, 1.0, "k=7 sequence")?;

    let start = Instant::now();
    let v10 = sequence_from_start(10, &rat(-224, 100), DEFAULT_BITS)?;
    check!(v10.bound >= 4, "k=10 sequence must certify rank >= 4, got {}", v10.bound);
    check!(
        v10.min_strict_margin >= margin_floor,
        "k=10 margin below 1e-9"
    );
    let t10 = budget(start, 1.0, "k=10 sequence")?;

    Ok(format!(
        "k=7 bound {} ({t7:.3}s), k=10 bound {} ({t10:.3}s); all margins >= 1e-9",
        v7.bound, v10.bound
    ))
}

/// 3. Greedy sweep against the analytic floor and the quarter-k line.
fn greedy_sweep() -> Result<String> {
    let eps = rat(1, 1_000_000);
    let bits = DEFAULT_BITS;

    let start = Instant::now();
    let failures: Vec<usize> = (10usize..=500)
        .into_par_iter()
        .filter(|&k| {
            let bound = greedy_search(k, &eps, bits).map(|v| v.bound).unwrap_or(0);
            bound < analytic_bound(k).unwrap_or(usize::MAX)
        })
        .collect();
    check!(failures.is_empty(), "greedy below analytic floor at k = {failures:?}");
    let t1 = budget(start, 60.0, "k = 10..500 sweep")?;

    let start = Instant::now();
    let quarter_failures: Vec<usize> = (50usize..=2000)
        .into_par_iter()
        .filter(|&k| {
            let bound = greedy_search(k, &eps, bits).map(|v| v.bound).unwrap_or(0);
            rat_int(bound as i64) <= rat(k as i64, 4)
        })
        .collect();
    check!(
        quarter_failures.is_empty(),
        "greedy bound not above k/4 at k = {quarter_failures:?}"
    );
    let t2 = budget(start, 600.0, "k = 50..2000 sweep")?;

    Ok(format!(
        "greedy >= analytic floor on 10..500 ({t1:.1}s); greedy > k/4 on 50..2000 ({t2:.1}s)"
    ))
}

/// 4. Closed-form PSD criterion against the eigenvalue oracle.
fn psd_oracle_agreement() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(424_242);
    let band = rat(1, 100_000_000);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    while accepted < 1000 {
        let k = rng.gen_range(2..=12usize);
        let pick = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-1000..=1000), 1000);
        let params = CertificateParams::new(
            k,
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
        );
        let breakdown = psd_closed_form(&params);
        if breakdown.min_value().abs() < band {
            rejected += 1;
            check!(rejected < 100_000, "rejection loop runaway");
            continue;
        }
        accepted += 1;
        let oracle = psd_eigen_oracle(&build_wk(&params), 1e-10)?;
        check!(
            oracle == breakdown.verdict,
            "disagreement at sample {accepted}: {params:?}"
        );
    }
    Ok(format!(
        "1000 banded samples agree (eigen oracle tol 1e-10); {rejected} near-boundary samples skipped"
    ))
}

/// 5. Brute-force symmetrized shadow equals the closed-form quadrilateral.
fn shadow_hull_equality() -> Result<String> {
    let start = Instant::now();
    for k in 2..=7 {
        let brute = brute_force_stab_shadow(k)?;
        let closed = phi_stab(k)?.canonical();
        check!(brute == closed, "shadow hull mismatch at k = {k}");
    }
    let elapsed = budget(start, 120.0, "shadow hulls")?;
    Ok(format!("shadow hulls match the closed form for k = 2..7 ({elapsed:.2}s)"))
}

/// 6. Maximal stable set classification.
fn maximal_classification() -> Result<String> {
    for k in 2..=8 {
        let classes = classify_maximal_stable_sets(k)?;
        check!(
            classes.class_two.len() == k,
            "k = {k}: expected {k} swap-type sets, found {}",
            classes.class_two.len()
        );
    }
    Ok("maximal stable sets partition into the two classes for k = 2..8".into())
}

/// 7. Facet rank checks and the exact combination identity.
fn facet_checks() -> Result<String> {
    for k in 2..=6 {
        let g = build_hk(k)?;
        check!(
            is_facet(&g, &b_inequality(k, 1, 2)?)?,
            "facet check failed at k = {k}"
        );
    }
    for k in 3..=6 {
        let mut total = LinearInequality::new(vec![Rat::zero(); 3 * k], Rat::zero());
        for j in 1..=k {
            for jp in 1..=k {
                if j != jp {
                    total = total.add(&b_inequality(k, j, jp)?)?;
                }
            }
        }
        check!(
            total.scale(&rat(1, k as i64 - 1)) == symmetric_inequality(k)?,
            "combination identity failed at k = {k}"
        );
    }
    Ok("facet rank 3k verified for k = 2..6; combination identity exact for k = 3..6".into())
}

/// 8. Graph family checks: stability numbers and isomorphisms.
fn graph_families() -> Result<String> {
    let start = Instant::now();
    for k in 2..=10 {
        check!(
            alpha(&build_hk(k)?)? == k + 1,
            "stability number of member {k} is not {}",
            k + 1
        );
    }
    let clebsch = build_lk(&cycle_graph(4)?, 4)?;
    check!(alpha(&clebsch)? == 5, "16-vertex blowup must have stability number 5");

    for k in 3..=6 {
        let destroyed = build_hk(k)?.destroy(&hk_label(1, 1))?;
        check!(
            find_isomorphism(&destroyed, &build_hk(k - 1)?)?.is_some(),
            "middle destruction of member {k} is not the previous member"
        );
    }

    let target = petersen();
    for v in 0..clebsch.n() {
        let reduced = clebsch.destroy(clebsch.label(v))?;
        check!(
            find_isomorphism(&reduced, &target)?.is_some(),
            "destroying {} did not give the 10-vertex target",
            clebsch.label(v)
        );
    }

    for l in 2..=3usize {
        let left = build_lk2(
            &build_qls(l, &[1].into())?,
            &build_qls(l, &[l].into())?,
            4,
        )?;
        let right = build_qls(l + 2, &[1, l + 2].into())?;
        let flip =
            |p: &str| -> String { p.chars().map(|c| if c == '0' { '1' } else { '0' }).collect() };
        let witness = |label: &str| -> String {
            let (i, p) = label.split_once('_').expect("layer label");
            match i {
                "1" => format!("00{p}"),
                "2" => format!("01{}", flip(p)),
                "3" => format!("10{}", flip(p)),
                _ => format!("11{p}"),
            }
        };
        check!(
            is_isomorphism_map(&left, &right, witness)?,
            "blowup of the distance graphs is not the folded cube at l = {l}"
        );
        if l == 2 {
            check!(
                find_isomorphism(&left, &right)?.is_some(),
                "search cross-check failed at l = 2"
            );
        }
    }
    let elapsed = budget(start, 60.0, "graph family checks")?;
    Ok(format!(
        "stability numbers, destructions, and blowup isomorphisms verified ({elapsed:.2}s)"
    ))
}

/// 9. Closure-rank bounds: upper derivation and lower witnesses.
fn cg_bounds() -> Result<String> {
    for d in 2..=10 {
        let derivation = run_upper_derivation(d)?;
        check!(
            derivation.floored_rhs == rat_int(derivation.k as i64 - 1),
            "floor is not k-1 at depth {d}"
        );
    }
    for d in 1..=6 {
        verify_lower_witness(d)?;
    }
    // Every intermediate inequality at the enumerable depth is valid.
    let g = build_hk(5)?;
    for (name, ineq) in crate::cg::concrete_instances_d2(1, 2)? {
        check!(is_valid(&g, &ineq)?, "instance {name} invalid for the k=5 polytope");
    }
    for step in run_upper_derivation(2)?.steps {
        check!(
            is_valid(&g, &step.materialize(5, 1, 2))?,
            "derivation step {} invalid for the k=5 polytope",
            step.name
        );
    }
    Ok("upper derivation floors to k-1 for d = 2..10; lower witnesses hold for d = 1..6".into())
}

/// 10. Threshold ordering across the sweep and the step bound on a grid.
fn threshold_ordering() -> Result<String> {
    let start = Instant::now();
    let bits = 128u32;
    let bad: Vec<usize> = (5usize..=10_000)
        .into_par_iter()
        .filter(|&k| {
            let Ok(th) = thresholds(k, bits) else {
                return true;
            };
            !(Enc::exact(th.u1.clone()).lt(&th.u2) == Some(true)
                && th.u2.lt(&th.u3) == Some(true)
                && th.u3.lt(&th.u4) == Some(true))
        })
        .collect();
    check!(bad.is_empty(), "ordering fails at k = {bad:?}");

    let grid_bad: Vec<usize> = (5usize..=200)
        .into_par_iter()
        .filter(|&k| {
            let Ok(th) = thresholds(k, bits) else {
                return true;
            };
            let lo = th.u1.clone();
            let hi = th.u2.lo().clone();
            let bound = rat(2, k as i64 - 2);
            (1..=100).any(|i| {
                let l = &lo + (&hi - &lo) * rat(i, 101);
                match h_step(k, &l, bits) {
                    Ok(h) => h.hi() > &bound,
                    Err(_) => true,
                }
            })
        })
        .collect();
    check!(grid_bad.is_empty(), "step bound fails at k = {grid_bad:?}");
    let elapsed = start.elapsed().as_secs_f64();
    Ok(format!(
        "ordering certified for k = 5..10000; step bounded by 2/(k-2) on the grid ({elapsed:.1}s)"
    ))
}

/// 11. Discriminant factorization on random rational points.
fn discriminant_identity() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(31_415);
    let bits = 192u32;
    let width_cap = rat(1, 10_000_000_000i64);
    for sample in 0..200 {
        let k = rng.gen_range(4..=12usize);
        let a = rat(rng.gen_range(0..=10_000), 10_000);
        let b = rat(rng.gen_range(0..=10_000), 10_000);
        check!(
            discriminant_identity_check(k, &a, &b, bits)?,
            "enclosure disagreement at sample {sample} (k={k})"
        );
        check!(
            discriminant_identity_exact(k, &a, &b)?,
            "exact identity failed at sample {sample} (k={k})"
        );
        let width = p_k_eval(k, &a, &b, bits)?
            .mul(&p_bar_eval(k, &a, &b, bits)?)
            .width();
        check!(
            width <= width_cap,
            "enclosure width {width} above 1e-10 at sample {sample}"
        );
    }
    Ok("discriminant factorization holds on 200 random points, widths <= 1e-10".into())
}

/// One manifest entry.
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub run: fn() -> Result<String>,
}

/// The full reproduction manifest; ids match the acceptance list.
pub fn manifest() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "depth-2 certificate (k=7, exact)", run: certificate_h7 },
        Criterion { id: 2, name: "worked slope sequences (k=7, k=10)", run: slope_examples },
        Criterion { id: 3, name: "greedy sweep vs analytic floor", run: greedy_sweep },
        Criterion { id: 4, name: "closed-form PSD vs eigen oracle", run: psd_oracle_agreement },
        Criterion { id: 5, name: "symmetrized shadow hull equality", run: shadow_hull_equality },
        Criterion { id: 6, name: "maximal stable set classification", run: maximal_classification },
        Criterion { id: 7, name: "facet checks and combination identity", run: facet_checks },
        Criterion { id: 8, name: "graph family isomorphisms", run: graph_families },
        Criterion { id: 9, name: "closure-rank bounds", run: cg_bounds },
        Criterion { id: 10, name: "threshold ordering and step bound", run: threshold_ordering },
        Criterion { id: 11, name: "discriminant factorization", run: discriminant_identity },
    ]
}

/// Outcome of one criterion run.
#[derive(Debug)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub fn run_criterion(c: &Criterion) -> CheckOutcome {
    let start = Instant::now();
    let result = (c.run)();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => CheckOutcome { id: c.id, name: c.name, passed: true, detail, seconds },
        Err(e) => CheckOutcome {
            id: c.id,
            name: c.name,
            passed: false,
            detail: e.to_string(),
            seconds,
        },
    }
}

/// Runs the selected criteria (all when `only` is empty).
pub fn run(only: &[usize]) -> Vec<CheckOutcome> {
    manifest()
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(run_criterion)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_is_complete_and_unique() {
        let m = manifest();
        assert_eq!(m.len(), 11);
        let mut ids: Vec<usize> = m.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    }
}
