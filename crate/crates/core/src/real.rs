//! Exact rational arithmetic plus certified real enclosures.
//!
//! Everything downstream that touches a square root goes through [`Enc`],
//! an interval with exact rational endpoints and outward rounding, so that
//! every strict-inequality verdict in the verification paths is conservative.
//! Quantities of the form `a + b*sqrt(r)` with rational `a, b, r` can instead
//! be signed exactly via [`sign_quad`].

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

pub type Rat = BigRational;

/// Default bit precision for enclosure square roots (width <= 2^(1-bits)).
pub const DEFAULT_BITS: u32 = 192;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "nnn", "-nnn/ddd" style exact rationals.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |n: &str, d: &str| -> Result<Rat> {
        let num: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational numerator {n:?}")))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational denominator {d:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    };
    match s.split_once('/') {
        Some((n, d)) => make(n, d),
        None => make(s, "1"),
    }
}

/// Canonical "n/d" (or plain "n") rendering of a reduced rational.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Largest multiple of 2^-bits that is <= r.
pub fn dyadic_floor(r: &Rat, bits: u32) -> Rat {
    let scaled = r * Rat::from_integer(pow2(bits));
    Rat::new(scaled.floor().to_integer(), pow2(bits))
}

/// Smallest multiple of 2^-bits that is >= r.
pub fn dyadic_ceil(r: &Rat, bits: u32) -> Rat {
    let scaled = r * Rat::from_integer(pow2(bits));
    Rat::new(scaled.ceil().to_integer(), pow2(bits))
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let s = isqrt_floor(n);
    if &(&s * &s) < n {
        s + 1
    } else {
        s
    }
}

/// Exact square root when the reduced rational is a perfect square.
pub fn rational_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = isqrt_floor(r.numer());
    if &(&n * &n) != r.numer() {
        return None;
    }
    let d = isqrt_floor(r.denom());
    if &(&d * &d) != r.denom() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Largest dyadic (denominator 2^bits) rational whose square is <= r;
/// exact on perfect squares.
pub fn sqrt_lower(r: &Rat, bits: u32) -> Result<Rat> {
    if r.is_negative() {
        return Err(Error::InvalidArgument("sqrt of negative rational".into()));
    }
    if let Some(exact) = rational_sqrt_exact(r) {
        return Ok(exact);
    }
    let scaled = r.numer() * pow2(2 * bits) / r.denom(); // floor
    Ok(Rat::new(isqrt_floor(&scaled), pow2(bits)))
}

/// Smallest dyadic (denominator 2^bits) rational whose square is >= r;
/// exact on perfect squares.
pub fn sqrt_upper(r: &Rat, bits: u32) -> Result<Rat> {
    if r.is_negative() {
        return Err(Error::InvalidArgument("sqrt of negative rational".into()));
    }
    if let Some(exact) = rational_sqrt_exact(r) {
        return Ok(exact);
    }
    let num = r.numer() * pow2(2 * bits);
    let scaled = (&num + r.denom() - BigInt::one()) / r.denom(); // ceil
    Ok(Rat::new(isqrt_ceil(&scaled), pow2(bits)))
}

/// Exact sign of `a + b*sqrt(r)` for rationals with r >= 0.
pub fn sign_quad(a: &Rat, b: &Rat, r: &Rat) -> Result<Ordering> {
    if r.is_negative() {
        return Err(Error::InvalidArgument("sign_quad needs r >= 0".into()));
    }
    if b.is_zero() || r.is_zero() {
        return Ok(a.cmp(&Rat::zero()));
    }
    if a.is_zero() {
        return Ok(b.cmp(&Rat::zero()));
    }
    Ok(match (a.is_positive(), b.is_positive()) {
        (true, true) => Ordering::Greater,
        (false, false) => Ordering::Less,
        (true, false) => {
            // positive iff a^2 > b^2 r
            (a * a).cmp(&(b * b * r))
        }
        (false, true) => (b * b * r).cmp(&(a * a)),
    })
}

/// Three-valued sign of a certified quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Undecided,
}

/// Interval with exact rational endpoints; `lo <= hi` always holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Enc {
    lo: Rat,
    hi: Rat,
}

impl Enc {
    pub fn exact(r: Rat) -> Self {
        Enc { lo: r.clone(), hi: r }
    }

    pub fn exact_int(n: i64) -> Self {
        Enc::exact(rat_int(n))
    }

    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument("enclosure with lo > hi".into()));
        }
        Ok(Enc { lo, hi })
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rat::zero())
    }

    pub fn midpoint_f64(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / rat_int(2)))
    }

    pub fn add(&self, rhs: &Enc) -> Enc {
        Enc { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    pub fn sub(&self, rhs: &Enc) -> Enc {
        Enc { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }

    pub fn neg(&self) -> Enc {
        Enc { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, rhs: &Enc) -> Enc {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Enc { lo, hi }
    }

    pub fn scale(&self, r: &Rat) -> Enc {
        if r.is_negative() {
            Enc { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            Enc { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    pub fn add_rat(&self, r: &Rat) -> Enc {
        Enc { lo: &self.lo + r, hi: &self.hi + r }
    }

    /// Division; fails when the divisor encloses zero.
    pub fn div(&self, rhs: &Enc) -> Result<Enc> {
        if rhs.contains_zero() {
            return Err(Error::Undecided("division by enclosure containing zero".into()));
        }
        let quotients = [
            &self.lo / &rhs.lo,
            &self.lo / &rhs.hi,
            &self.hi / &rhs.lo,
            &self.hi / &rhs.hi,
        ];
        let lo = quotients.iter().min().unwrap().clone();
        let hi = quotients.iter().max().unwrap().clone();
        Ok(Enc { lo, hi })
    }

    /// Outward square root; requires lo >= 0.
    pub fn sqrt(&self, bits: u32) -> Result<Enc> {
        if self.lo.is_negative() {
            return Err(Error::InvalidArgument(
                "sqrt of enclosure with negative lower bound".into(),
            ));
        }
        Ok(Enc { lo: sqrt_lower(&self.lo, bits)?, hi: sqrt_upper(&self.hi, bits)? })
    }

    /// Rounds both endpoints outward to the 2^-bits grid.
    pub fn out_round(&self, bits: u32) -> Enc {
        Enc { lo: dyadic_floor(&self.lo, bits), hi: dyadic_ceil(&self.hi, bits) }
    }

    pub fn sign(&self) -> Sign {
        if self.lo.is_positive() {
            Sign::Positive
        } else if self.hi.is_negative() {
            Sign::Negative
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Sign::Zero
        } else {
            Sign::Undecided
        }
    }

    /// Certified `self < rhs`; `None` when the enclosures overlap.
    pub fn lt(&self, rhs: &Enc) -> Option<bool> {
        if self.hi < rhs.lo {
            Some(true)
        } else if self.lo >= rhs.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self <= rhs`; `None` when undecidable.
    pub fn le(&self, rhs: &Enc) -> Option<bool> {
        if self.hi <= rhs.lo {
            Some(true)
        } else if self.lo > rhs.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified gap `rhs.lo - self.hi`; positive when `self < rhs` holds
    /// with that margin.
    pub fn margin_below(&self, rhs: &Enc) -> Rat {
        &rhs.lo - &self.hi
    }
}

impl fmt::Display for Enc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", format_rat(&self.lo))
        } else {
            write!(f, "[{:.17e}, {:.17e}]", rat_to_f64(&self.lo), rat_to_f64(&self.hi))
        }
    }
}

fn log2_one_sided(r: &Rat, bits: u32, upper: bool) -> Rat {
    // Integer part: largest e with 2^e <= r.
    let mut e: i64 = 0;
    let mut m = r.clone();
    let two = rat_int(2);
    let one = Rat::one();
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < one {
        m *= &two;
        e -= 1;
    }
    // m in [1,2); extract fractional bits by repeated squaring with
    // directed rounding so the result stays one-sided.
    let work_bits = 2 * bits + 16;
    let mut frac = Rat::zero();
    let mut weight = rat(1, 2);
    for _ in 0..bits {
        m = &m * &m;
        m = if upper { dyadic_ceil(&m, work_bits) } else { dyadic_floor(&m, work_bits) };
        if m >= two {
            m /= &two;
            frac += &weight;
        }
        weight /= &two;
    }
    let base = Rat::from_integer(BigInt::from(e)) + frac;
    if upper {
        // remaining fractional tail is < 2^-bits
        base + Rat::new(BigInt::one(), pow2(bits))
    } else {
        base
    }
}

/// Certified enclosure of log2(r) for rational r > 0, width <= 2^(1-bits).
/// Exact (degenerate) for powers of two.
pub fn log2_enc(r: &Rat, bits: u32) -> Result<Enc> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument("log2 of non-positive rational".into()));
    }
    // Exact case: r = 2^e.
    if r.denom().is_one() {
        let n = r.numer();
        if n.bits() >= 1 {
            let e = (n.bits() - 1) as u32;
            if *n == pow2(e) {
                return Ok(Enc::exact(rat_int(e as i64)));
            }
        }
    }
    if r.numer().is_one() {
        let d = r.denom();
        let e = (d.bits() - 1) as u32;
        if *d == pow2(e) {
            return Ok(Enc::exact(rat_int(-(e as i64))));
        }
    }
    Enc::new(log2_one_sided(r, bits, false), log2_one_sided(r, bits, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_format_round_trip() {
        for s in ["3/2", "-7/4", "5", "0", "1553/10000"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn sqrt_encloses_value() {
        let two = rat_int(2);
        let lo = sqrt_lower(&two, 64).unwrap();
        let hi = sqrt_upper(&two, 64).unwrap();
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!(&hi - &lo <= rat(1, 1 << 62));
    }

    #[test]
    fn sqrt_exact_on_perfect_squares() {
        let e = Enc::exact(rat(25, 49)).sqrt(32).unwrap();
        assert_eq!(e.lo(), &rat(5, 7));
        assert_eq!(e.hi(), &rat(5, 7));
    }

    #[test]
    fn sign_quad_boundary_cases() {
        // 1 - sqrt(1) = 0
        assert_eq!(sign_quad(&rat_int(1), &rat_int(-1), &rat_int(1)).unwrap(), Ordering::Equal);
        // 3 - 2*sqrt(2) > 0
        assert_eq!(
            sign_quad(&rat_int(3), &rat_int(-2), &rat_int(2)).unwrap(),
            Ordering::Greater
        );
        // 1 - sqrt(2) < 0
        assert_eq!(sign_quad(&rat_int(1), &rat_int(-1), &rat_int(2)).unwrap(), Ordering::Less);
    }

    #[test]
    fn log2_powers_and_margins() {
        assert_eq!(log2_enc(&rat_int(8), 64).unwrap(), Enc::exact(rat_int(3)));
        assert_eq!(log2_enc(&rat(1, 4), 64).unwrap(), Enc::exact(rat_int(-2)));
        let e = log2_enc(&rat_int(10), 64).unwrap();
        assert!(e.contains(&rat(332192809488736235, 100000000000000000)) || {
            // loose sanity: 3.3219 <= log2(10) <= 3.3220
            e.lo() > &rat(33219, 10000) && e.hi() < &rat(3322, 1000)
        });
        assert!(e.width() <= rat(1, 1 << 62));
    }

    proptest! {
        #[test]
        fn interval_ops_contain_true_value(an in -50i64..50, ad in 1i64..20,
                                           bn in -50i64..50, bd in 1i64..20) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            let ea = Enc::exact(a.clone());
            let eb = Enc::exact(b.clone());
            prop_assert!(ea.add(&eb).contains(&(&a + &b)));
            prop_assert!(ea.sub(&eb).contains(&(&a - &b)));
            prop_assert!(ea.mul(&eb).contains(&(&a * &b)));
            if !b.is_zero() {
                prop_assert!(ea.div(&eb).unwrap().contains(&(&a / &b)));
            }
        }

        #[test]
        fn sqrt_quad_consistency(n in 0i64..500, d in 1i64..60) {
            let r = rat(n, d);
            let s = Enc::exact(r.clone()).sqrt(96).unwrap();
            // sign_quad of (-s_hi + sqrt(r)) must not be positive, etc.
            prop_assert!(sign_quad(&-s.hi().clone(), &rat_int(1), &r).unwrap() != Ordering::Greater);
            prop_assert!(sign_quad(&-s.lo().clone(), &rat_int(1), &r).unwrap() != Ordering::Less);
        }
    }
}
