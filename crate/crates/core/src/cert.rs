//! Symmetric certificate matrices for layer-symmetric points of `H_k`.
//!
//! `W_k(a,b,c,d)` is the four-parameter candidate certificate; its positive
//! semidefiniteness reduces to five closed-form sign conditions (S1–S5),
//! checked in exact rational arithmetic. Membership verification is either
//! first-level (explicit column decompositions into the fractional cone) or
//! recursive, delegating two derived points at `k-1` to a child resolver.

use num::traits::{One, Signed, Zero};

use crate::graph::{build_hk, hk_index, Graph};
use crate::polytope::cone_frac_member;
use crate::real::{format_rat, parse_rat, rat, rat_int, Enc, Rat};
use crate::shadow::{p_bar_eval, p_k_eval, pk_pbar_product, region_c_member};
use crate::{Error, Result};

/// Parameters of the candidate certificate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateParams {
    pub k: usize,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl CertificateParams {
    pub fn new(k: usize, a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        CertificateParams { k, a, b, c, d }
    }
}

/// Dense symmetric matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl SymmetricMatrix {
    pub fn zero(n: usize) -> Self {
        SymmetricMatrix { n, entries: vec![Rat::zero(); n * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        self.entries[i * self.n + j] = value.clone();
        self.entries[j * self.n + i] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn add(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        assert_eq!(self.n, other.n);
        SymmetricMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        assert_eq!(self.n, other.n);
        let mut out = SymmetricMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Rat::zero();
                for t in 0..self.n {
                    acc += self.get(i, t) * other.get(t, j);
                }
                out.entries[i * self.n + j] = acc;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| crate::real::rat_to_f64(self.get(i, j))).collect())
            .collect()
    }
}

/// Builds the order-`3k+1` certificate matrix: border row/column equal to
/// `(1, w_k(a,b))`, per-triple diagonal blocks `[[a,0,a-c],[0,b,0],[a-c,0,a]]`
/// and cross-triple blocks `[[c,a-c,0],[a-c,d,a-c],[0,a-c,c]]`. The diagonal
/// equals the border by construction.
#[allow(clippy::needless_range_loop)]
pub fn build_wk(params: &CertificateParams) -> SymmetricMatrix {
    let CertificateParams { k, a, b, c, d } = params;
    let k = *k;
    let n = 3 * k + 1;
    let mut w = SymmetricMatrix::zero(n);
    w.set(0, 0, Rat::one());
    let layer_value = |p: usize| if p == 1 { b.clone() } else { a.clone() };
    for i in 1..=k {
        for p in 0..3 {
            w.set(0, 1 + hk_index(i, p), layer_value(p));
        }
    }
    let ac = a - c;
    let diag_block = [
        [a.clone(), Rat::zero(), ac.clone()],
        [Rat::zero(), b.clone(), Rat::zero()],
        [ac.clone(), Rat::zero(), a.clone()],
    ];
    let off_block = [
        [c.clone(), ac.clone(), Rat::zero()],
        [ac.clone(), d.clone(), ac.clone()],
        [Rat::zero(), ac.clone(), c.clone()],
    ];
    for i in 1..=k {
        for j in i..=k {
            let block = if i == j { &diag_block } else { &off_block };
            for p in 0..3 {
                for q in 0..3 {
                    w.set(1 + hk_index(i, p), 1 + hk_index(j, q), block[p][q].clone());
                }
            }
        }
    }
    w
}

/// The five closed-form sign conditions equivalent to `W_k(a,b,c,d) >= 0`.
#[derive(Debug, Clone)]
pub struct PsdBreakdown {
    pub values: [Rat; 5],
    pub verdict: bool,
}

impl PsdBreakdown {
    pub fn failed(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_negative())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn min_value(&self) -> &Rat {
        self.values.iter().min().expect("five values")
    }
}

pub fn s_values(params: &CertificateParams) -> [Rat; 5] {
    let CertificateParams { k, a, b, c, d } = params;
    let kq = rat_int(*k as i64);
    let s1 = c.clone();
    let s2 = a - c;
    let s3 = (b - d) - (a - c);
    let s4 = rat_int(2) * a + (&kq - rat_int(2)) * c - rat_int(2) * &kq * a * a;
    let t = rat_int(2) * b + rat_int(2) * (&kq - rat_int(1)) * d - rat_int(2) * &kq * b * b;
    let beta = rat_int(2) * (&kq - rat_int(1)) * (a - c) - rat_int(2) * &kq * a * b;
    let s5 = &s4 * t - &beta * &beta;
    [s1, s2, s3, s4, s5]
}

pub fn psd_closed_form(params: &CertificateParams) -> PsdBreakdown {
    let values = s_values(params);
    let verdict = values.iter().all(|v| !v.is_negative());
    PsdBreakdown { values, verdict }
}

/// Eigenvalue oracle guard.
pub const MAX_EIGEN_ORDER: usize = 400;

/// Cyclic Jacobi eigenvalues of a dense symmetric matrix.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_EIGEN_ORDER {
        return Err(Error::SizeGuard { actual: n, limit: MAX_EIGEN_ORDER });
    }
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            return Ok((0..n).map(|i| a[i][i]).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = cos * aip - sin * aiq;
                    a[i][q] = sin * aip + cos * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = cos * api - sin * aqi;
                    a[q][i] = sin * api + cos * aqi;
                }
            }
        }
    }
    Err(Error::Verification("jacobi iteration did not converge".into()))
}

/// Independent PSD oracle: smallest eigenvalue above `-tol`.
pub fn psd_eigen_oracle(m: &SymmetricMatrix, tol: f64) -> Result<bool> {
    let eigen = jacobi_eigenvalues(m.to_f64())?;
    let min = eigen.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min >= -tol)
}

/// Nonnegative-combination certificate that a point of `H_k` lies in an
/// iterated relaxation; leaves (`p = 1`) are verified by explicit column
/// decompositions, internal nodes carry exactly two children at `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCertificate {
    pub params: CertificateParams,
    pub p: usize,
    pub children: Vec<MembershipCertificate>,
}

impl MembershipCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.params.k,
            "p": self.p,
            "params": [
                format_rat(&self.params.a),
                format_rat(&self.params.b),
                format_rat(&self.params.c),
                format_rat(&self.params.d),
            ],
            "children": self.children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let k = value
            .get("k")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse("certificate json needs integer k".into()))?
            as usize;
        let p = value
            .get("p")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse("certificate json needs integer p".into()))?
            as usize;
        let raw = value
            .get("params")
            .and_then(|v| v.as_array())
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse("certificate json needs 4 params".into()))?;
        let mut vals = Vec::with_capacity(4);
        for item in raw {
            let s = item
                .as_str()
                .ok_or_else(|| Error::Parse("params must be rational strings".into()))?;
            vals.push(parse_rat(s)?);
        }
        let children = match value.get("children") {
            None => Vec::new(),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(MembershipCertificate::from_json)
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("children must be an array".into())),
        };
        Ok(MembershipCertificate {
            params: CertificateParams::new(
                k,
                vals[0].clone(),
                vals[1].clone(),
                vals[2].clone(),
                vals[3].clone(),
            ),
            p,
            children,
        })
    }
}

/// First-level closed form: the midpoint root of the quadratic obtained by
/// forcing S3 and S5 to vanish, together with `d = b - a + c`.
pub fn closed_form_cd(k: usize, a: &Rat, b: &Rat) -> (Rat, Rat) {
    let km1 = rat_int(k as i64 - 1);
    let c = -(a * a) - rat_int(2) * a * b - b * b / rat_int(2)
        + rat(3, 2) * a
        + b / rat_int(2)
        + b * (b - rat_int(1)) / (rat_int(2) * &km1);
    let d = b - a + &c;
    (c, d)
}

/// Quadratic coefficients in `c` after substituting `d = b - a + c` into the
/// S5 determinant expression.
pub fn quadratic_in_c(k: usize, a: &Rat, b: &Rat) -> (Rat, Rat, Rat) {
    let km1 = rat_int(k as i64 - 1);
    let km2 = rat_int(k as i64 - 2);
    let kq = rat_int(k as i64);
    let big = rat_int(2) * b + rat_int(2) * &km1 * (b - a) - rat_int(2) * &kq * b * b;
    let ha = rat_int(2) * a - rat_int(2) * &kq * a * a;
    let beta0 = rat_int(2) * &km1 * a - rat_int(2) * &kq * a * b;
    let p2 = &km2 * rat_int(2) * &km1 - rat_int(4) * &km1 * &km1;
    let p1 = &km2 * &big + &ha * rat_int(2) * &km1 + rat_int(4) * &km1 * &beta0;
    let p0 = &ha * &big - &beta0 * &beta0;
    (p0, p1, p2)
}

fn ineq_check(name: &'static str, lhs: Rat, rhs: Rat) -> Result<()> {
    if lhs <= rhs {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "column condition violated: {name} ({} > {})",
            format_rat(&lhs),
            format_rat(&rhs)
        )))
    }
}

fn cone_check(g: &Graph, name: &str, vector: &[Rat]) -> Result<()> {
    if cone_frac_member(g, vector)? {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "column {name} leaves the fractional cone"
        )))
    }
}

/// Verifies the first-level conditions for the given parameters: the five
/// sign conditions, the six explicit edge inequalities, and full fractional-
/// cone membership for the representative columns.
pub fn verify_first_level(params: &CertificateParams) -> Result<()> {
    let CertificateParams { k, a, b, c, d } = params;
    let breakdown = psd_closed_form(params);
    if !breakdown.verdict {
        return Err(Error::Verification(format!(
            "sign conditions S{:?} failed",
            breakdown.failed()
        )));
    }
    ineq_check("2(a-c) <= b", rat_int(2) * (a - c), b.clone())?;
    ineq_check("a-c+d <= b", a - c + d, b.clone())?;
    ineq_check("a+(a-c) <= 1-a", a + (a - c), rat_int(1) - a)?;
    ineq_check("(b-a+c)+a <= 1-a", (b - a + c) + a, rat_int(1) - a)?;
    ineq_check("a+c <= 1-b", a + c, rat_int(1) - b)?;
    ineq_check("c+(b-d) <= 1-b", c + (b - d), rat_int(1) - b)?;

    let g = build_hk(*k)?;
    let w = build_wk(params);
    let col0 = w.column(0);
    for (label, vertex) in [("Ye_{1_0}", hk_index(1, 0)), ("Ye_{1_1}", hk_index(1, 1))] {
        let col = w.column(1 + vertex);
        cone_check(&g, label, &col)?;
        let complement: Vec<Rat> =
            col0.iter().zip(&col).map(|(x, y)| x - y).collect();
        cone_check(&g, &format!("Y(e_0 - e_{{{label}}})"), &complement)?;
    }
    Ok(())
}

/// Exhaustive variant: checks every column pair, not just the
/// representatives. Only intended for small `k`.
pub fn verify_columns_exhaustive(params: &CertificateParams) -> Result<()> {
    if params.k > 8 {
        return Err(Error::SizeGuard { actual: params.k, limit: 8 });
    }
    let g = build_hk(params.k)?;
    let w = build_wk(params);
    let col0 = w.column(0);
    for v in 0..3 * params.k {
        let col = w.column(1 + v);
        cone_check(&g, &format!("Ye_{{{}}}", g.label(v)), &col)?;
        let complement: Vec<Rat> = col0.iter().zip(&col).map(|(x, y)| x - y).collect();
        cone_check(&g, &format!("Y(e_0 - e_{{{}}})", g.label(v)), &complement)?;
    }
    Ok(())
}

/// First-level membership: requires the point inside the certified region,
/// then builds the closed-form parameters and verifies all conditions.
pub fn first_level_membership(k: usize, a: &Rat, b: &Rat) -> Result<MembershipCertificate> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!(
            "first-level rule needs k >= 4, got {k}"
        )));
    }
    if !region_c_member(k, a, b)? {
        return Err(Error::Verification(format!(
            "point ({}, {}) lies outside the certified region for k = {k}",
            format_rat(a),
            format_rat(b)
        )));
    }
    let (c, d) = closed_form_cd(k, a, b);
    let params = CertificateParams::new(k, a.clone(), b.clone(), c, d);
    verify_first_level(&params)?;
    Ok(MembershipCertificate { params, p: 1, children: Vec::new() })
}

/// Strategy for resolving child membership claims at `(k-1, p-1)`.
pub trait ChildResolver {
    fn resolve(&self, k: usize, p: usize, point: (Rat, Rat)) -> Result<MembershipCertificate>;
}

/// Closed-form resolver: first-level rule at depth one, and the same
/// closed-form parameter choice applied recursively at greater depth.
pub struct ClosedFormResolver;

impl ChildResolver for ClosedFormResolver {
    fn resolve(&self, k: usize, p: usize, point: (Rat, Rat)) -> Result<MembershipCertificate> {
        if p == 1 {
            return first_level_membership(k, &point.0, &point.1);
        }
        let (c, d) = closed_form_cd(k, &point.0, &point.1);
        let params = CertificateParams::new(k, point.0, point.1, c, d);
        verify_recursive(&params, p, self)
    }
}

/// Replays a stored subtree: children must match the requested claims
/// exactly and withstand full re-verification.
pub struct ReplayResolver<'a> {
    children: &'a [MembershipCertificate],
}

impl ChildResolver for ReplayResolver<'_> {
    fn resolve(&self, k: usize, p: usize, point: (Rat, Rat)) -> Result<MembershipCertificate> {
        let stored = self
            .children
            .iter()
            .find(|c| {
                c.params.k == k && c.p == p && c.params.a == point.0 && c.params.b == point.1
            })
            .ok_or_else(|| {
                Error::Verification(format!(
                    "stored certificate has no child for k={k}, p={p} at ({}, {})",
                    format_rat(&point.0),
                    format_rat(&point.1)
                ))
            })?;
        replay_certificate(stored)?;
        Ok(stored.clone())
    }
}

/// Recursive membership verification: the matrix must be PSD (closed form),
/// satisfy `2b + 2c - d <= 1`, and both derived points
/// `((a-c)/b, d/b)` and `((a-c)/(1-a-c), (b-a+c)/(1-a-c))`
/// must resolve at `(k-1, p-1)`.
pub fn verify_recursive(
    params: &CertificateParams,
    p: usize,
    resolver: &dyn ChildResolver,
) -> Result<MembershipCertificate> {
    let CertificateParams { k, a, b, c, d } = params;
    if p < 2 {
        return Err(Error::InvalidArgument("recursive rule needs p >= 2".into()));
    }
    if *k < 3 {
        return Err(Error::InvalidArgument("recursive rule needs k >= 3".into()));
    }
    if !b.is_positive() {
        return Err(Error::InvalidArgument("recursive rule needs b > 0".into()));
    }
    let one_minus = rat_int(1) - a - c;
    if !one_minus.is_positive() {
        return Err(Error::InvalidArgument("recursive rule needs 1 - a - c > 0".into()));
    }
    let linear = rat_int(2) * b + rat_int(2) * c - d;
    if linear > rat_int(1) {
        return Err(Error::Verification(format!(
            "(ii) failed: 2b+2c-d = {} > 1",
            format_rat(&linear)
        )));
    }
    let breakdown = psd_closed_form(params);
    if !breakdown.verdict {
        return Err(Error::Verification(format!(
            "(i) failed: sign conditions S{:?} negative",
            breakdown.failed()
        )));
    }
    let point1 = ((a - c) / b, d / b);
    let point2 = ((a - c) / &one_minus, (b - a + c) / &one_minus);
    let mut children = Vec::with_capacity(2);
    for point in [point1, point2] {
        let child = resolver.resolve(k - 1, p - 1, point.clone())?;
        if child.params.k != k - 1
            || child.p != p - 1
            || child.params.a != point.0
            || child.params.b != point.1
        {
            return Err(Error::Verification(
                "resolver returned a certificate for the wrong claim".into(),
            ));
        }
        children.push(child);
    }
    Ok(MembershipCertificate { params: params.clone(), p, children })
}

/// Full re-verification of a stored certificate tree.
pub fn replay_certificate(cert: &MembershipCertificate) -> Result<()> {
    if cert.p == 1 {
        if !cert.children.is_empty() {
            return Err(Error::Verification("depth-1 certificate with children".into()));
        }
        return verify_first_level(&cert.params);
    }
    if cert.children.len() != 2 {
        return Err(Error::Verification(format!(
            "depth-{} certificate needs exactly two children",
            cert.p
        )));
    }
    let resolver = ReplayResolver { children: &cert.children };
    verify_recursive(&cert.params, cert.p, &resolver).map(|_| ())
}

/// Whether the point violates the symmetric facet combination
/// `2(k-1)a + (k-2)b <= k-1`; combined with a verified membership at depth
/// `p`, this yields the rank bound `p + 1`.
pub fn violates_symmetric_facet(k: usize, a: &Rat, b: &Rat) -> bool {
    rat_int(2 * (k as i64 - 1)) * a + rat_int(k as i64 - 2) * b > rat_int(k as i64 - 1)
}

/// The headline depth-2 parameters for `H_7`, read as exact rationals.
pub fn example_h7_params() -> CertificateParams {
    CertificateParams::new(
        7,
        rat(1553, 10000),
        rat(8278, 10000),
        rat(5428, 1_000_000),
        rat(6665, 10000),
    )
}

/// The constant in the discriminant factorization: `p2^2 = (2k(k-1))^2`,
/// so that `p1^2 - 4 p0 p2 = (2k(k-1))^2 p_k(a,b) pbar_k(a,b)`.
fn discriminant_factor(k: usize) -> Rat {
    let half = rat_int(2 * k as i64 * (k as i64 - 1));
    &half * &half
}

/// Checks the discriminant factorization
/// `p1^2 - 4 p0 p2 = (2k(k-1))^2 p_k(a,b) pbar_k(a,b)` with enclosures of
/// the requested width; also exact on the rational route.
pub fn discriminant_identity_check(k: usize, a: &Rat, b: &Rat, bits: u32) -> Result<bool> {
    let (p0, p1, p2) = quadratic_in_c(k, a, b);
    let delta = &p1 * &p1 - rat_int(4) * &p0 * &p2;
    let lhs = Enc::exact(delta);
    let rhs = p_k_eval(k, a, b, bits)?
        .mul(&p_bar_eval(k, a, b, bits)?)
        .scale(&discriminant_factor(k));
    // Agreement: the exact left side must lie inside the enclosure of the
    // right side (they denote the same real number).
    Ok(rhs.contains(lhs.lo()))
}

/// Exact-rational route for the same identity; the enclosure-free oracle.
pub fn discriminant_identity_exact(k: usize, a: &Rat, b: &Rat) -> Result<bool> {
    let (p0, p1, p2) = quadratic_in_c(k, a, b);
    let delta = &p1 * &p1 - rat_int(4) * &p0 * &p2;
    let product = pk_pbar_product(k, a, b)?;
    Ok(delta == discriminant_factor(k) * product)
}

/// The three rank-one-ish components of the bordered Schur complement; their
/// sum equals `Wbar - w w^T` and their column spaces are mutually orthogonal.
pub fn schur_parts(params: &CertificateParams) -> [SymmetricMatrix; 3] {
    let CertificateParams { k, a, b, c, d } = params;
    let k = *k;
    let n = 3 * k;
    let kq = rat_int(k as i64);
    let s4 = rat_int(2) * a + (&kq - rat_int(2)) * c - rat_int(2) * &kq * a * a;
    let beta = rat_int(2) * (&kq - rat_int(1)) * (a - c) - rat_int(2) * &kq * a * b;
    let t = rat_int(2) * b + rat_int(2) * (&kq - rat_int(1)) * d - rat_int(2) * &kq * b * b;
    let ac = a - c;
    let block1 = [
        [c.clone(), Rat::zero(), -c.clone()],
        [Rat::zero(), Rat::zero(), Rat::zero()],
        [-c.clone(), Rat::zero(), c.clone()],
    ];
    let block2 = [
        [ac.clone(), -ac.clone(), ac.clone()],
        [-ac.clone(), b - d, -ac.clone()],
        [ac.clone(), -ac.clone(), ac.clone()],
    ];
    let block3 = [
        [s4.clone(), beta.clone(), s4.clone()],
        [beta.clone(), t.clone(), beta.clone()],
        [s4.clone(), beta.clone(), s4.clone()],
    ];
    let mut parts = [
        SymmetricMatrix::zero(n),
        SymmetricMatrix::zero(n),
        SymmetricMatrix::zero(n),
    ];
    let half = rat(1, 2);
    let inv_k = rat(1, k as i64);
    let inv_2k = rat(1, 2 * k as i64);
    for i in 0..k {
        for j in 0..k {
            for p in 0..3 {
                for q in 0..3 {
                    let row = 3 * i + p;
                    let col = 3 * j + q;
                    // W1 = (1/2) J (x) block1
                    parts[0].set(row, col, &half * &block1[p][q]);
                    // W2 = (1/k)(kI - J) (x) block2
                    let coeff = if i == j { &kq - rat_int(1) } else { rat_int(-1) };
                    parts[1].set(row, col, &inv_k * coeff * &block2[p][q]);
                    // W3 = (1/2k) J (x) block3
                    parts[2].set(row, col, &inv_2k * &block3[p][q]);
                }
            }
        }
    }
    parts
}
