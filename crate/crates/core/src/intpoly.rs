//! Dense polynomials over ℤ with exact arithmetic, root counting and
//! factorization.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::finitefield::{distinct_degree, factor_fp, FpPoly, DEFAULT_SEED};
use crate::linalg::det_bareiss;

/// Polynomial with integer coefficients, constant term first. The zero
/// polynomial is the empty vector; otherwise the last entry is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    /// X - c.
    pub fn linear(c: i64) -> Self {
        IntPoly::from_i64(&[-c, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = IntPoly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Sign of f(x) at a rational point, computed on integers only.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.homogenized_numerator(x.numer(), x.denom()).sign_ord()
    }

    /// Σ c_i a^i b^{n-i}, the numerator of f(a/b)·b^n.
    fn homogenized_numerator(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let n = self.degree();
        let mut apow = BigInt::one();
        let mut bpows = Vec::with_capacity(n + 1);
        let mut bp = BigInt::one();
        for _ in 0..=n {
            bpows.push(bp.clone());
            bp *= b;
        }
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &apow * &bpows[n - i];
            }
            apow *= a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// f(X + c), by repeated synthetic division.
    pub fn shift(&self, c: &BigInt) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        IntPoly::new(a)
    }

    /// X^deg f(1/X).
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// Quotient and remainder over ℤ when every step divides exactly;
    /// `None` if a leading-coefficient division is inexact.
    pub fn div_rem_checked(&self, d: &Self) -> Option<(Self, Self)> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return Some((IntPoly::zero(), self.clone()));
        }
        let dl = d.lead();
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            q[k] = c;
        }
        r.truncate(dd);
        Some((IntPoly::new(q), IntPoly::new(r)))
    }

    /// Exact quotient in ℤ[X], or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.div_rem_checked(d) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// lc(d)^{deg a - deg d + 1} · a mod d.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        if self.coeffs.len() < d.coeffs.len() {
            return self.clone();
        }
        let dl = d.lead();
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        let steps = r.len() - dd;
        for k in (0..steps).rev() {
            let top = r[k + dd].clone();
            for c in r.iter_mut() {
                *c *= &dl;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] -= &top * b;
            }
        }
        r.truncate(dd);
        IntPoly::new(r)
    }

    /// Gcd in ℤ[X] with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_part().scale(&o.content());
        }
        if o.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&c)
    }

    /// Squarefree decomposition of the primitive part: pairs `(g_i, i)`
    /// with each `g_i` primitive, squarefree, pairwise coprime and
    /// `prim(f) = Π g_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        if f.degree() == 0 {
            return out;
        }
        let mut g = f.gcd(&f.derivative()).primitive_part();
        let mut w = f.div_exact(&g).expect("gcd divides").primitive_part();
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&g).primitive_part();
            let z = w.div_exact(&y).expect("gcd divides").primitive_part();
            if z.degree() > 0 {
                out.push((z, i));
            }
            i += 1;
            g = g.div_exact(&y).expect("gcd divides");
            w = y;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition()
            .into_iter()
            .fold(IntPoly::one(), |acc, (g, _)| &acc * &g)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, o: &Self) -> BigInt {
        let (m, n) = (self.degree(), o.degree());
        if self.is_zero() || o.is_zero() {
            return BigInt::zero();
        }
        if m == 0 {
            return self.lead().pow(n as u32);
        }
        if n == 0 {
            return o.lead().pow(m as u32);
        }
        let size = m + n;
        let mut s = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                s[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in o.coeffs.iter().rev().enumerate() {
                s[n + i][i + j] = c.clone();
            }
        }
        det_bareiss(&s)
    }

    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        let r = self.resultant(&self.derivative());
        let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        sign * r / self.lead()
    }

    /// Reduce every coefficient into `[0, m)`.
    pub fn mod_floor(&self, m: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Reduce every coefficient into the symmetric range `(-m/2, m/2]`.
    pub fn mod_symmetric(&self, m: &BigInt) -> Self {
        let half = m / 2;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    /// Canonical order: by degree, then coefficients lexicographically
    /// from the constant term.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, o: IntPoly) -> IntPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -(&self)
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::one(), |a, b| &a * &b)
    }
}

impl fmt::Display for IntPoly {
    /// Text form accepted by the polynomial parser, e.g. `x^2 - 3*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// JSON number when the value fits in i64, decimal string otherwise.
pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("non-integer coefficient {n}"))
            }
        }
        serde_json::Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {s:?}: {e}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_to_json).collect();
        let mut st = s.serialize_struct("IntPoly", 1)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(bigint_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        Ok(IntPoly::new(coeffs))
    }
}

// ---------------------------------------------------------------------------
// Reciprocity

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    PlusSymmetric,
    MinusSymmetric,
    NotStarSymmetric,
}

fn check_monic_unit_constant(f: &IntPoly) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(())
}

/// F* = F(0)^{-1} X^{deg F} F(1/X) for monic F with F(0) = ±1.
pub fn reciprocal_star(f: &IntPoly) -> Result<IntPoly> {
    check_monic_unit_constant(f)?;
    let c0 = f.coeff(0);
    if !c0.abs().is_one() {
        return Err(Error::NotStarSymmetric);
    }
    Ok(f.reversed().scale(&c0))
}

/// Compares f with f^∨ = X^{deg f} f(1/X).
pub fn classify_symmetry(f: &IntPoly) -> Result<Symmetry> {
    check_monic_unit_constant(f)?;
    let r = f.reversed();
    Ok(if r == *f {
        Symmetry::PlusSymmetric
    } else if r == -f {
        Symmetry::MinusSymmetric
    } else {
        Symmetry::NotStarSymmetric
    })
}

pub fn is_star_symmetric(f: &IntPoly) -> bool {
    matches!(
        classify_symmetry(f),
        Ok(Symmetry::PlusSymmetric | Symmetry::MinusSymmetric)
    )
}

fn is_palindromic(f: &IntPoly) -> bool {
    !f.is_zero() && f.reversed() == *f && !f.coeff(0).is_zero()
}

// ---------------------------------------------------------------------------
// Cyclotomic and trace polynomials

fn mobius(n: u64) -> i32 {
    let fac = crate::arith::factor_u64(n);
    if fac.iter().any(|&(_, e)| e > 1) {
        0
    } else if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Φ_m = Π_{d | m} (X^d − 1)^{μ(m/d)}.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in (1..=m).filter(|d| m % d == 0) {
        let xd = &IntPoly::monomial(BigInt::one(), d as usize) - &IntPoly::one();
        match mobius(m / d) {
            1 => num = &num * &xd,
            -1 => den = &den * &xd,
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact")
}

/// φ with f(X) = X^m φ(X + 1/X) for palindromic f of degree 2m.
pub fn trace_polynomial(f: &IntPoly) -> Result<IntPoly> {
    if f.degree() % 2 == 1 {
        return Err(Error::OddDegree);
    }
    if !is_palindromic(f) {
        return Err(Error::NotPlusSymmetric);
    }
    let m = f.degree() / 2;
    // V_0 = 2, V_1 = Y, V_{j+1} = Y V_j − V_{j−1}; X^j + X^{−j} = V_j(X + 1/X)
    let y = IntPoly::x();
    let mut prev = IntPoly::from_i64(&[2]);
    let mut cur = y.clone();
    let mut phi = IntPoly::constant(f.coeff(m));
    for j in 1..=m {
        phi = &phi + &cur.scale(&f.coeff(m + j));
        let next = &(&y * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(phi)
}

// ---------------------------------------------------------------------------
// Real roots

/// Open interval (lo, hi) with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo < hi, "empty interval");
        RationalInterval { lo, hi }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        RationalInterval::new(rat(lo), rat(hi))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.hi <= o.lo || o.hi <= self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2)
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalInterval", 2)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RationalInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        let raw = Raw::deserialize(d)?;
        let lo = parse_rational(&raw.lo).map_err(de::Error::custom)?;
        let hi = parse_rational(&raw.hi).map_err(de::Error::custom)?;
        if lo >= hi {
            return Err(de::Error::custom("interval must satisfy lo < hi"));
        }
        Ok(RationalInterval { lo, hi })
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            let d: BigInt = d.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            if d.is_zero() {
                return Err(format!("{s:?}: zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.parse().map_err(|e| format!("{s:?}: {e}"))?,
        )),
    }
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// 1 + max |c_i / lead|: every complex root has smaller absolute value.
pub fn cauchy_bound(f: &IntPoly) -> BigRational {
    let lead = BigRational::from_integer(f.lead().abs());
    let m = f.coeffs[..f.degree()]
        .iter()
        .map(|c| BigRational::from_integer(c.abs()) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// Sturm chain of a squarefree polynomial, kept primitive.
fn sturm_chain(f: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.degree() == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        let k = a.degree() - b.degree() + 1;
        if b.lead().is_negative() && k % 2 == 1 {
            r = -r;
        }
        r = -r;
        if r.is_zero() {
            break;
        }
        let c = r.content();
        r = IntPoly::new(r.coeffs.iter().map(|x| x / &c).collect());
        chain.push(r);
    }
    chain
}

fn sign_variations(chain: &[IntPoly], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|&s| s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of f in the open interval.
pub fn sturm_count(f: &IntPoly, iv: &RationalInterval) -> Result<usize> {
    let g = f.squarefree_part();
    if g.sign_at(&iv.lo) == Ordering::Equal || g.sign_at(&iv.hi) == Ordering::Equal {
        return Err(Error::EndpointIsRoot);
    }
    if g.degree() == 0 {
        return Ok(0);
    }
    let chain = sturm_chain(&g);
    Ok(sign_variations(&chain, &iv.lo) - sign_variations(&chain, &iv.hi))
}

/// Disjoint isolating intervals, in increasing order, for the real roots of
/// f inside `iv`.
pub fn isolate_real_roots(f: &IntPoly, iv: &RationalInterval) -> Result<Vec<RationalInterval>> {
    let g = f.squarefree_part();
    if g.sign_at(&iv.lo) == Ordering::Equal || g.sign_at(&iv.hi) == Ordering::Equal {
        return Err(Error::EndpointIsRoot);
    }
    if g.degree() == 0 {
        return Ok(vec![]);
    }
    let chain = sturm_chain(&g);
    let mut out = Vec::new();
    let mut stack = vec![(iv.clone(), sign_variations(&chain, &iv.lo), sign_variations(&chain, &iv.hi))];
    while let Some((cur, vlo, vhi)) = stack.pop() {
        let n = vlo - vhi;
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(cur);
            continue;
        }
        let m = split_point(&g, &cur);
        let vm = sign_variations(&chain, &m);
        stack.push((RationalInterval::new(m.clone(), cur.hi.clone()), vm, vhi));
        stack.push((RationalInterval::new(cur.lo.clone(), m), vlo, vm));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// A point strictly inside `iv` near its middle that is not a root of g.
fn split_point(g: &IntPoly, iv: &RationalInterval) -> BigRational {
    let w = iv.width();
    for k in 0i64.. {
        // 1/2, then 1/2 ± small offsets
        let off = BigRational::new(BigInt::from(k), BigInt::from(4 * k + 16));
        for cand in [&iv.lo + &w * (rat(1) / rat(2) + &off), &iv.lo + &w * (rat(1) / rat(2) - &off)] {
            if g.sign_at(&cand) != Ordering::Equal {
                return cand;
            }
        }
    }
    unreachable!()
}

/// Shrink an isolating interval of a squarefree g until narrower than `width`.
pub fn refine_interval(g: &IntPoly, iv: &RationalInterval, width: &BigRational) -> RationalInterval {
    let mut cur = iv.clone();
    let slo = g.sign_at(&cur.lo);
    while &cur.width() >= width {
        let m = split_point(g, &cur);
        if g.sign_at(&m) == slo {
            cur = RationalInterval::new(m, cur.hi);
        } else {
            cur = RationalInterval::new(cur.lo, m);
        }
    }
    cur
}

/// Roots of a *-symmetric F on the unit circle, with multiplicity,
/// counted through the trace polynomials of the squarefree parts.
pub fn count_unit_circle_roots(f: &IntPoly) -> Result<usize> {
    if !is_star_symmetric(f) {
        return Err(Error::NotStarSymmetric);
    }
    let mut total = 0;
    for (g, e) in f.squarefree_decomposition() {
        let mut h = g;
        let mut unit = 0;
        for c in [-1i64, 1] {
            let lin = IntPoly::linear(c);
            if let Some(q) = h.div_exact(&lin) {
                h = q;
                unit += 1;
            }
        }
        if h.degree() > 0 {
            let phi = trace_polynomial(&h)?;
            unit += 2 * sturm_count(&phi, &RationalInterval::from_ints(-2, 2))?;
        }
        total += unit * e;
    }
    Ok(total)
}

/// m(F) from the whole-polynomial unit-root count: (deg F − U) / 2.
pub fn m_from_unit_count(f: &IntPoly) -> Result<usize> {
    let u = count_unit_circle_roots(f)?;
    Ok((f.degree() - u) / 2)
}

/// m(F) = number of roots with |λ| > 1, summed factor by factor.
pub fn m_of(f: &IntPoly) -> Result<usize> {
    if !is_star_symmetric(f) {
        return Err(Error::NotStarSymmetric);
    }
    let fac = factor_over_z(f);
    let mut twice = 0usize;
    for (g, n) in &fac.factors {
        if g.degree() == 1 {
            continue;
        }
        if is_palindromic(g) && g.degree() % 2 == 0 {
            let phi = trace_polynomial(g)?;
            let u = sturm_count(&phi, &RationalInterval::from_ints(-2, 2))?;
            twice += n * (g.degree() - 2 * u);
        } else {
            twice += n * g.degree();
        }
    }
    Ok(twice / 2)
}

// ---------------------------------------------------------------------------
// Factorization over ℤ

/// f = content · Π g^e with each g primitive, irreducible, positive leading
/// coefficient, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZFactorization {
    #[serde(with = "bigint_string")]
    pub content: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ZFactorization {
    pub fn product(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::constant(self.content.clone()), |acc, (g, e)| {
                &acc * &g.pow(*e)
            })
    }

    /// Factors as a flat multiset, repeated by multiplicity.
    pub fn multiset(&self) -> Vec<IntPoly> {
        self.factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.clone(), *e))
            .collect()
    }
}

/// Complete factorization of a nonzero polynomial into irreducibles.
pub fn factor_over_z(f: &IntPoly) -> ZFactorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut content = f.content();
    if f.lead().is_negative() {
        content = -content;
    }
    let mut factors: Vec<(IntPoly, usize)> = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in factor_squarefree(&g) {
            factors.push((h, e));
        }
    }
    factors.sort();
    ZFactorization { content, factors }
}

/// Irreducible factors of a primitive squarefree polynomial.
pub fn factor_squarefree(g: &IntPoly) -> Vec<IntPoly> {
    let mut g = g.primitive_part();
    let mut out = Vec::new();
    if g.coeff(0).is_zero() && g.degree() > 0 {
        out.push(IntPoly::x());
        g = g.div_exact(&IntPoly::x()).expect("x divides");
    }
    if g.degree() == 0 {
        return out;
    }
    if g.degree() == 1 {
        out.push(g);
        return out;
    }
    let choice = choose_prime(&g);
    if choice.irreducible {
        out.push(g);
        return out;
    }
    out.extend(zassenhaus(&g, choice.p, &choice.allowed));
    out.sort();
    out
}

struct PrimeChoice {
    p: u64,
    allowed: Vec<bool>,
    irreducible: bool,
}

/// Scan good primes, intersect the possible factor degrees and keep the
/// prime with the fewest modular factors.
fn choose_prime(g: &IntPoly) -> PrimeChoice {
    let n = g.degree();
    let mut allowed = vec![true; n + 1];
    let mut best: Option<(usize, u64)> = None;
    let mut good = 0;
    let mut p = 2u64;
    while good < 5 || (best.is_none() && p < 100_000) {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let gp = FpPoly::from_int_poly(g, p);
        if gp.degree() != n || !gp.is_squarefree() {
            continue;
        }
        good += 1;
        let dd = distinct_degree(&gp.monic());
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        let mut count = 0;
        for (h, d) in &dd {
            for _ in 0..h.degree() / d {
                count += 1;
                for s in (*d..=n).rev() {
                    if reach[s - d] {
                        reach[s] = true;
                    }
                }
            }
        }
        for (a, r) in allowed.iter_mut().zip(&reach) {
            *a &= *r;
        }
        if best.is_none_or(|(c, _)| count < c) {
            best = Some((count, p));
        }
        if (1..n).all(|k| !allowed[k]) {
            return PrimeChoice {
                p,
                allowed,
                irreducible: true,
            };
        }
        if good >= 8 {
            break;
        }
    }
    PrimeChoice {
        p: best.expect("some good prime").1,
        allowed,
        irreducible: false,
    }
}

/// Bound on the coefficients of any factor of g, times |lc(g)|.
fn mignotte_bound(g: &IntPoly) -> BigInt {
    let norm2: BigInt = g.coeffs.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + BigInt::one();
    (BigInt::one() << g.degree()) * norm * g.lead().abs()
}

fn zassenhaus(g: &IntPoly, p: u64, allowed: &[bool]) -> Vec<IntPoly> {
    let bound = mignotte_bound(g) * 2 + BigInt::one();
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= bound {
        pk *= &bp;
        k += 1;
    }
    let gp = FpPoly::from_int_poly(g, p);
    let modular: Vec<FpPoly> = factor_fp(&gp, DEFAULT_SEED)
        .into_iter()
        .map(|(h, e)| {
            debug_assert_eq!(e, 1);
            h
        })
        .collect();
    let lc_inv = modinv_big(&g.lead(), &pk);
    let target = g.scale(&lc_inv).mod_floor(&pk);
    let mut lifted = hensel_lift(&target, &modular, p, k);

    let mut rest = g.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        let lc = rest.lead();
        for subset in (0..lifted.len()).combinations(size) {
            let deg: usize = subset.iter().map(|&i| lifted[i].degree()).sum();
            if !allowed[deg] {
                continue;
            }
            let cand = subset
                .iter()
                .fold(IntPoly::constant(lc.clone()), |acc, &i| {
                    (&acc * &lifted[i]).mod_floor(&pk)
                })
                .mod_symmetric(&pk)
                .primitive_part();
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.degree() > 0 {
        found.push(rest.primitive_part());
    }
    found
}

/// Inverse of a modulo m (gcd(a, m) = 1).
pub(crate) fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Lift a factorization f ≡ Π g_i (mod p) of a monic f into pairwise
/// coprime monic factors to one modulo p^k. Outputs have coefficients in
/// [0, p^k).
pub fn hensel_lift(f: &IntPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<IntPoly> {
    let pk = BigInt::from(p).pow(k);
    let f = f.mod_floor(&pk);
    if factors.len() == 1 {
        return vec![f];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let a = left.iter().fold(FpPoly::one(p), |acc, h| acc.mul(h));
    let b = right.iter().fold(FpPoly::one(p), |acc, h| acc.mul(h));
    let (ga, gb) = hensel_lift_pair(&f, &a, &b, p, k);
    let mut out = hensel_lift(&ga, left, p, k);
    out.extend(hensel_lift(&gb, right, p, k));
    out
}

/// Linear Hensel lifting of f ≡ g·h (mod p), g and h monic and coprime.
pub fn hensel_lift_pair(f: &IntPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let (one, _, t) = g.ext_gcd(h);
    assert!(one.is_one(), "Hensel factors must be coprime mod p");
    let bp = BigInt::from(p);
    let pk = bp.pow(k);
    let mut gg = g.to_int_poly();
    let mut hh = h.to_int_poly();
    let mut pj = bp.clone();
    for _ in 1..k {
        let err = &f.mod_floor(&pk) - &(&gg * &hh);
        let e = IntPoly::new(err.coeffs.iter().map(|c| c / &pj).collect());
        let e = FpPoly::from_int_poly(&e, p);
        let a = t.mul(&e).rem(g);
        let b = e.sub(&a.mul(h)).div_exact(g);
        gg = &gg + &a.to_int_poly().scale(&pj);
        hh = &hh + &b.to_int_poly().scale(&pj);
        pj *= &bp;
    }
    (gg.mod_floor(&pk), hh.mod_floor(&pk))
}

/// Integer-square-root helper exposed for callers that need the Mignotte
/// style bound on a product.
pub fn coefficient_height(f: &IntPoly) -> BigInt {
    f.max_abs_coeff()
}

/// True when f reduces mod p to a squarefree polynomial of the same degree.
pub fn good_reduction(f: &IntPoly, p: u64) -> bool {
    let fp = FpPoly::from_int_poly(f, p);
    fp.degree() == f.degree() && !fp.is_zero() && fp.is_squarefree()
}
