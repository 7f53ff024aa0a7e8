//! The 2-dimensional shadow of layer-symmetric points of `H_k`.
//!
//! A symmetric point assigns `a` to both outer layers and `b` to the middle
//! layer; the shadow of a relaxation is the set of `(a, b)` whose expansion
//! lies in it. Shadow polygons are exact rational; the certificate parabola
//! `p_k` carries one square root and is evaluated either exactly (rational
//! inputs, quadratic-field sign) or as a certified enclosure.

use num::traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::graph::hk_index;
use crate::polytope::enumerate_stable_sets;
use crate::real::{rat, rat_int, rat_to_f64, sign_quad, Enc, Rat};
use crate::{Error, Result};

/// A layer-symmetric vector: `a` on the outer layers, `b` on the middle one.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricVector {
    pub k: usize,
    pub a: Rat,
    pub b: Rat,
}

impl SymmetricVector {
    pub fn new(k: usize, a: Rat, b: Rat) -> Self {
        SymmetricVector { k, a, b }
    }

    /// Expands to the full vector over `H_k`'s vertex order: `2k` entries of
    /// `a` and `k` entries of `b`.
    pub fn expand(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); 3 * self.k];
        for i in 1..=self.k {
            out[hk_index(i, 0)] = self.a.clone();
            out[hk_index(i, 1)] = self.b.clone();
            out[hk_index(i, 2)] = self.a.clone();
        }
        out
    }
}

pub type Point = (Rat, Rat);

/// Convex polygon with exact rational vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Exact 2-D convex hull (monotone chain); output is counterclockwise with
/// collinear points dropped, starting from the lexicographic minimum.
pub fn convex_hull(points: &[Point]) -> Polygon {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Polygon { vertices: pts };
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Polygon { vertices: lower }
}

impl Polygon {
    /// Canonical form: counterclockwise starting at the smallest vertex.
    pub fn canonical(&self) -> Polygon {
        convex_hull(&self.vertices)
    }

    /// Point containment for a counterclockwise convex polygon (boundary
    /// counts as inside).
    pub fn contains(&self, p: &Point) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return self.vertices[0] == *p;
        }
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            if cross(a, b, p).is_negative() {
                return false;
            }
        }
        true
    }

    pub fn contains_polygon(&self, other: &Polygon) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }
}

/// Shadow of the fractional stable set polytope:
/// the quadrilateral `(0,0), (1/2,0), (1/2,1/2), (0,1)`.
pub fn phi_frac(k: usize) -> Result<Polygon> {
    if k < 2 {
        return Err(Error::InvalidArgument("phi_frac needs k >= 2".into()));
    }
    Ok(Polygon {
        vertices: vec![
            (rat_int(0), rat_int(0)),
            (rat(1, 2), rat_int(0)),
            (rat(1, 2), rat(1, 2)),
            (rat_int(0), rat_int(1)),
        ],
    })
}

/// Shadow of the stable set polytope:
/// the quadrilateral `(0,0), (1/2,0), (1/k,(k-1)/k), (0,1)`.
pub fn phi_stab(k: usize) -> Result<Polygon> {
    if k < 2 {
        return Err(Error::InvalidArgument("phi_stab needs k >= 2".into()));
    }
    let k_i = k as i64;
    Ok(Polygon {
        vertices: vec![
            (rat_int(0), rat_int(0)),
            (rat(1, 2), rat_int(0)),
            (rat(1, k_i), rat(k_i - 1, k_i)),
            (rat_int(0), rat_int(1)),
        ],
    })
}

/// Brute-force shadow of the stable set polytope: projects every stable-set
/// incidence vector through the layer averaging and takes the exact hull.
pub fn brute_force_stab_shadow(k: usize) -> Result<Polygon> {
    let g = crate::graph::build_hk(k)?;
    let outer: u64 = (1..=k).fold(0, |m, i| m | 1 << hk_index(i, 0) | 1 << hk_index(i, 2));
    let middle: u64 = (1..=k).fold(0, |m, i| m | 1 << hk_index(i, 1));
    let mut points = Vec::new();
    for m in enumerate_stable_sets(&g)?.sets {
        let a = rat((m & outer).count_ones() as i64, 2 * k as i64);
        let b = rat((m & middle).count_ones() as i64, k as i64);
        points.push((a, b));
    }
    points.sort();
    points.dedup();
    Ok(convex_hull(&points))
}

/// Exact square of the parabola constant: `r = k / (2k-2)`, with
/// `q_k = 1 - sqrt(r)`.
pub fn parabola_r(k: usize) -> Result<Rat> {
    if k < 3 {
        return Err(Error::InvalidArgument("parabola defined for k >= 3".into()));
    }
    Ok(rat(k as i64, 2 * k as i64 - 2))
}

/// Enclosures of the parabola constants `q_k` and its conjugate.
#[derive(Debug, Clone)]
pub struct ParabolaParams {
    pub k: usize,
    pub q: Enc,
    pub q_bar: Enc,
}

impl ParabolaParams {
    pub fn new(k: usize, bits: u32) -> Result<Self> {
        let s = Enc::exact(parabola_r(k)?).sqrt(bits)?;
        Ok(ParabolaParams {
            k,
            q: Enc::exact_int(1).sub(&s),
            q_bar: Enc::exact_int(1).add(&s),
        })
    }
}

/// Decomposes `p_k(x, y) = A + B * sqrt(r)` with all three parts rational.
pub fn pk_decompose(k: usize, x: &Rat, y: &Rat) -> Result<(Rat, Rat, Rat)> {
    let r = parabola_r(k)?;
    let yy = y * y - y;
    let a = (x * x * rat_int(2) - x) + (rat_int(2) + rat_int(2) * &r) * &yy + rat_int(4) * x * y;
    let b = rat_int(-4) * &yy - rat_int(4) * x * y;
    Ok((a, b, r))
}

/// Exact sign of `p_k(x, y)` for rational inputs.
pub fn pk_sign(k: usize, x: &Rat, y: &Rat) -> Result<Ordering> {
    let (a, b, r) = pk_decompose(k, x, y)?;
    sign_quad(&a, &b, &r)
}

/// Certified enclosure of `p_k(x, y)`.
pub fn p_k_eval(k: usize, x: &Rat, y: &Rat, bits: u32) -> Result<Enc> {
    let (a, b, r) = pk_decompose(k, x, y)?;
    let s = Enc::exact(r).sqrt(bits)?;
    Ok(s.scale(&b).add_rat(&a))
}

/// Conjugate-parabola enclosure (used by the discriminant identity).
pub fn p_bar_eval(k: usize, x: &Rat, y: &Rat, bits: u32) -> Result<Enc> {
    let (a, b, r) = pk_decompose(k, x, y)?;
    let s = Enc::exact(r).sqrt(bits)?;
    Ok(s.scale(&-b).add_rat(&a))
}

/// Exact value of the rational product `p_k(x,y) * p_bar_k(x,y) = A^2 - B^2 r`.
pub fn pk_pbar_product(k: usize, x: &Rat, y: &Rat) -> Result<Rat> {
    let (a, b, r) = pk_decompose(k, x, y)?;
    Ok(&a * &a - &b * &b * r)
}

/// Membership in the certified region: `p_k <= 0`, `x + y <= 1`,
/// `x, y >= 0`. Decided exactly for rational inputs.
pub fn region_c_member(k: usize, x: &Rat, y: &Rat) -> Result<bool> {
    if k < 3 {
        return Err(Error::InvalidArgument("region defined for k >= 3".into()));
    }
    if x.is_negative() || y.is_negative() || x + y > Rat::one() {
        return Ok(false);
    }
    Ok(pk_sign(k, x, y)? != Ordering::Greater)
}

/// Slope of the line from `(a, b)` to the apex `(1/k, (k-1)/k)`.
pub fn slope(k: usize, a: &Rat, b: &Rat) -> Result<Rat> {
    let x0 = rat(1, k as i64);
    if a == &x0 {
        return Err(Error::InvalidArgument("slope undefined at a = 1/k".into()));
    }
    let y0 = rat(k as i64 - 1, k as i64);
    Ok((&y0 - b) / (&x0 - a))
}

/// Tangent slope of the parabola at the apex; the closed form carries the
/// square root of `2k/(k-1)`.
pub fn tangent_slope_at_apex(k: usize, bits: u32) -> Result<Enc> {
    if k < 4 {
        return Err(Error::InvalidArgument("tangent slope needs k >= 4".into()));
    }
    let k_i = k as i64;
    let s = Enc::exact(rat(2 * k_i, k_i - 1)).sqrt(bits)?;
    let denom = s
        .scale(&rat_int(-2 * (k_i - 1) * (k_i - 1)))
        .add_rat(&rat_int(3 * k_i * k_i - 4 * k_i));
    let ratio = Enc::exact(rat_int(k_i)).div(&denom)?;
    Ok(ratio.neg().add_rat(&rat_int(-1)))
}

/// Same slope via the implicit derivative `-p_x / p_y` at the apex,
/// evaluated with enclosures; cross-checks the closed form.
pub fn tangent_slope_implicit(k: usize, bits: u32) -> Result<Enc> {
    let params = ParabolaParams::new(k, bits)?;
    let x = rat(1, k as i64);
    let y = rat(k as i64 - 1, k as i64);
    let q = &params.q;
    // p_x = 4x - 1 + 4qy ; p_y = 2q^2(2y - 1) + 4qx
    let px = q
        .scale(&(rat_int(4) * &y))
        .add_rat(&(rat_int(4) * &x - rat_int(1)));
    let py = q
        .mul(q)
        .scale(&(rat_int(2) * (rat_int(2) * &y - rat_int(1))))
        .add(&q.scale(&(rat_int(4) * &x)));
    px.neg().div(&py)
}

fn f64_point(p: &Point) -> (f64, f64) {
    (rat_to_f64(&p.0), rat_to_f64(&p.1))
}

/// Samples the parabola branch from the apex `(1/k,(k-1)/k)` down to
/// `(1/2, 0)`; plain f64 is fine here since the output is for rendering only.
pub fn sample_boundary(k: usize, samples: usize) -> Result<Vec<(f64, f64)>> {
    if k < 3 {
        return Err(Error::InvalidArgument("boundary sampling needs k >= 3".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let kf = k as f64;
    let q = 1.0 - (kf / (2.0 * kf - 2.0)).sqrt();
    let x0 = 1.0 / kf;
    let x1 = 0.5;
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let x = x0 + t * (x1 - x0);
        let a = 2.0 * q * q;
        let b = 4.0 * q * x - 2.0 * q * q;
        let c = 2.0 * x * x - x;
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let y = (-b + disc.sqrt()) / (2.0 * a);
        out.push((x, y));
    }
    Ok(out)
}

/// CSV rendering: `x,y,curve` rows, the sampled parabola followed by the
/// shadow polygon vertices.
pub fn shadow_csv(k: usize, samples: usize) -> Result<String> {
    let boundary = sample_boundary(k, samples)?;
    let stab = phi_stab(k)?;
    let mut out = String::from("x,y,curve\n");
    for (x, y) in &boundary {
        writeln!(out, "{x:.12},{y:.12},parabola").expect("string write");
    }
    for v in &stab.vertices {
        let (x, y) = f64_point(v);
        writeln!(out, "{x:.12},{y:.12},stab").expect("string write");
    }
    Ok(out)
}

/// SVG rendering on a fixed 600x600 viewBox with axes `[0, 0.6] x [0, 1.0]`.
pub fn shadow_svg(k: usize, samples: usize) -> Result<String> {
    let boundary = sample_boundary(k, samples)?;
    let stab = phi_stab(k)?;
    let to_px = |x: f64, y: f64| -> (f64, f64) { (x / 0.6 * 600.0, 600.0 - y * 600.0) };
    let mut path = String::new();
    for (i, (x, y)) in boundary.iter().enumerate() {
        let (px, py) = to_px(*x, *y);
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(path, "{cmd}{px:.2},{py:.2} ").expect("string write");
    }
    let mut poly = String::new();
    for v in &stab.vertices {
        let (x, y) = f64_point(v);
        let (px, py) = to_px(x, y);
        write!(poly, "{px:.2},{py:.2} ").expect("string write");
    }
    Ok(format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\">\n",
            "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n",
            "<line x1=\"0\" y1=\"600\" x2=\"600\" y2=\"600\" stroke=\"black\"/>\n",
            "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"600\" stroke=\"black\"/>\n",
            "<polygon points=\"{poly}\" fill=\"#c8d8f0\" stroke=\"#3060c0\"/>\n",
            "<path d=\"{path}\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"2\"/>\n",
            "</svg>\n"
        ),
        poly = poly.trim_end(),
        path = path.trim_end(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_hk, hk_balancing_families, symmetrize};

    #[test]
    fn expand_examples() {
        let w = SymmetricVector::new(3, rat_int(0), rat_int(1)).expand();
        for i in 1..=3 {
            assert_eq!(w[hk_index(i, 1)], rat_int(1));
            assert_eq!(w[hk_index(i, 0)], rat_int(0));
        }
        // Midpoint of the two outer layers.
        let w2 = SymmetricVector::new(2, rat(1, 2), rat_int(0)).expand();
        assert_eq!(w2[hk_index(1, 0)], rat(1, 2));
        assert_eq!(w2[hk_index(2, 1)], rat_int(0));
    }

    #[test]
    fn expand_is_symmetrize_fixed_point() {
        let k = 4;
        let g = build_hk(k).unwrap();
        let (_, s2) = hk_balancing_families(k).unwrap();
        let w = SymmetricVector::new(k, rat(2, 7), rat(3, 5)).expand();
        assert_eq!(symmetrize(&g, &s2, &w).unwrap(), w);
    }

    #[test]
    fn shadow_polygons() {
        assert_eq!(phi_stab(2).unwrap().vertices[2], (rat(1, 2), rat(1, 2)));
        assert_eq!(
            phi_stab(2).unwrap().canonical(),
            phi_frac(2).unwrap().canonical()
        );
        assert_eq!(phi_stab(5).unwrap().vertices[2], (rat(1, 5), rat(4, 5)));
        for k in 2..=8 {
            let frac = phi_frac(k).unwrap();
            assert!(frac.contains_polygon(&phi_stab(k).unwrap()), "k={k}");
        }
    }

    #[test]
    fn brute_force_shadow_matches_closed_form() {
        for k in 2..=4 {
            assert_eq!(
                brute_force_stab_shadow(k).unwrap(),
                phi_stab(k).unwrap().canonical(),
                "k={k}"
            );
        }
    }

    #[test]
    fn parabola_zero_points() {
        for k in 3..=12 {
            let apex_x = rat(1, k as i64);
            let apex_y = rat(k as i64 - 1, k as i64);
            assert_eq!(pk_sign(k, &apex_x, &apex_y).unwrap(), Ordering::Equal, "apex k={k}");
            assert_eq!(pk_sign(k, &rat(1, 2), &rat_int(0)).unwrap(), Ordering::Equal);
            assert_eq!(pk_sign(k, &rat_int(0), &rat_int(0)).unwrap(), Ordering::Equal);
            assert_eq!(pk_sign(k, &rat_int(0), &rat_int(1)).unwrap(), Ordering::Equal);
        }
        // Enclosure at the apex contains zero and can be driven very tight.
        for k in 4..=10 {
            let e = p_k_eval(k, &rat(1, k as i64), &rat(k as i64 - 1, k as i64), 64).unwrap();
            assert!(e.contains_zero());
            let tight =
                p_k_eval(k, &rat(1, k as i64), &rat(k as i64 - 1, k as i64), 192).unwrap();
            assert!(tight.width() < rat(1, 1_000_000_000_000), "k={k}");
        }
    }

    #[test]
    fn region_and_line_identity() {
        assert!(region_c_member(10, &rat(1, 10), &rat(9, 10)).unwrap());
        assert!(region_c_member(10, &rat(1, 4), &rat(1, 2)).unwrap());
        assert!(!region_c_member(10, &rat(6, 10), &rat(5, 10)).unwrap());
        // 2(k-1)a + (k-2)b = k-1 at both polygon corners.
        for k in 3i64..=9 {
            for (a, b) in [(rat(1, 2), rat_int(0)), (rat(1, k), rat(k - 1, k))] {
                assert_eq!(rat_int(2 * (k - 1)) * &a + rat_int(k - 2) * &b, rat_int(k - 1));
            }
        }
    }

    #[test]
    fn slope_examples() {
        for k in 3..=10 {
            assert_eq!(slope(k, &rat(1, 2), &rat(1, 2)).unwrap(), rat_int(-1), "k={k}");
            let u1 = slope(k, &rat(1, 2), &rat_int(0)).unwrap();
            assert_eq!(u1, rat(-2 * (k as i64 - 1), k as i64 - 2));
            assert_eq!(
                slope(k, &rat_int(0), &rat(k as i64 - 1, k as i64)).unwrap(),
                rat_int(0)
            );
        }
        assert!(slope(5, &rat(1, 5), &rat_int(0)).is_err());
    }

    #[test]
    fn tangent_formulas_agree() {
        for k in [4usize, 7, 10, 50] {
            let closed = tangent_slope_at_apex(k, 160).unwrap();
            let implicit = tangent_slope_implicit(k, 160).unwrap();
            let diff = closed.sub(&implicit);
            assert!(
                diff.contains_zero() || diff.width() < rat(1, 10_000_000_000),
                "k={k}: {closed} vs {implicit}"
            );
            assert!(diff.lo().abs() < rat(1, 10_000_000_000));
            assert!(diff.hi().abs() < rat(1, 10_000_000_000));
        }
    }

    #[test]
    fn emit_formats() {
        let csv = shadow_csv(10, 256).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,y,curve"));
        assert_eq!(csv.lines().filter(|l| l.ends_with("parabola")).count(), 256);
        assert_eq!(csv.lines().filter(|l| l.ends_with("stab")).count(), 4);

        let svg = shadow_svg(10, 64).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("viewBox=\"0 0 600 600\""));

        // Degenerate-safe at k = 3: all sampled points satisfy p_3 <= 0 up to
        // the sampling tolerance.
        let pts = sample_boundary(3, 64).unwrap();
        for (x, y) in pts {
            assert!(y.is_finite() && (0.0..=1.01).contains(&y), "({x}, {y})");
        }
    }

    #[test]
    fn region_strictly_exceeds_stab_shadow() {
        // Every vertex of the shadow polygon (and each edge midpoint) lies
        // inside the certified region, while a parabola boundary point
        // strictly between the apex and (1/2, 0) violates the symmetric
        // facet line: that is the rank gap.
        for k in 4..=10usize {
            let stab = phi_stab(k).unwrap();
            let vs = &stab.vertices;
            for i in 0..vs.len() {
                let (x, y) = &vs[i];
                assert!(region_c_member(k, x, y).unwrap(), "vertex {i} k={k}");
                let (nx, ny) = &vs[(i + 1) % vs.len()];
                let mx = (x + nx) / rat_int(2);
                let my = (y + ny) / rat_int(2);
                assert!(region_c_member(k, &mx, &my).unwrap(), "midpoint {i} k={k}");
            }
            // Rational point near the sampled boundary: take x midway, solve
            // for the exact y on the line 2(k-1)x + (k-2)y = k-1, then nudge
            // upward until p_k > 0 fails; simpler: use the sampled float and
            // check the symmetric-line violation on a rationalization that
            // still lies inside region C.
            let samples = sample_boundary(k, 33).unwrap();
            let (xf, yf) = samples[16];
            // rationalize slightly inside the region (shrink y)
            let x = Rat::from_float(xf).unwrap();
            let y = Rat::from_float((yf - 1e-9).max(0.0)).unwrap();
            assert!(region_c_member(k, &x, &y).unwrap(), "k={k}");
            let line = rat_int(2 * (k as i64 - 1)) * &x + rat_int(k as i64 - 2) * &y;
            assert!(line > rat_int(k as i64 - 1), "k={k} should violate the facet line");
            assert!(!stab.contains(&(x, y)), "k={k}");
        }
    }

    #[test]
    fn stab_vertices_lift_to_stable_set_combinations() {
        use crate::polytope::for_each_stable_set;
        for k in 2..=5usize {
            let g = build_hk(k).unwrap();
            let ki = k as i64;
            // apex = (1/k) * sum of the k swap sets
            let apex = SymmetricVector::new(k, rat(1, ki), rat(ki - 1, ki)).expand();
            let mut total = vec![Rat::zero(); 3 * k];
            for j in 1..=k {
                for i in 1..=k {
                    if i != j {
                        total[hk_index(i, 1)] += Rat::one();
                    }
                }
                total[hk_index(j, 0)] += Rat::one();
                total[hk_index(j, 2)] += Rat::one();
            }
            let scaled: Vec<Rat> = total.into_iter().map(|v| v / rat_int(ki)).collect();
            assert_eq!(apex, scaled, "k={k}");
            // each swap set is indeed stable
            let mut masks = Vec::new();
            for_each_stable_set(&g, |m| masks.push(m)).unwrap();
            for j in 1..=k {
                let mut m = 0u64;
                for i in 1..=k {
                    if i != j {
                        m |= 1 << hk_index(i, 1);
                    }
                }
                m |= 1 << hk_index(j, 0) | 1 << hk_index(j, 2);
                assert!(masks.contains(&m));
            }
        }
    }
}
