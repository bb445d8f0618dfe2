//! Local arithmetic over ℚ_p and ℝ: square classes, Hilbert symbols,
//! Hasse–Witt invariants, and factorization of integer polynomials over ℤ_p.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, pow_mod, split_p, val_p};
use crate::error::{Error, Result};
use crate::finitefield::{factor_fp, star_symmetric_mod_p, FpPoly, DEFAULT_SEED};
use crate::intpoly::{hensel_lift, hensel_lift_pair, modinv_big, trace_polynomial, IntPoly};
use crate::linalg::charpoly_berkowitz;

/// A place of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Prime(p) => s.serialize_u64(*p),
            Place::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .filter(|&p| is_prime(p))
                .map(Place::Prime)
                .ok_or_else(|| serde::de::Error::custom(format!("{v} is not a prime"))),
            serde_json::Value::String(s) if s == "inf" => Ok(Place::Infinity),
            _ => Err(serde::de::Error::custom(format!("bad place {v}"))),
        }
    }
}

/// Square class of a nonzero rational at a place, named by a canonical
/// integer representative: {1, u, p, up} at odd p (u the least quadratic
/// non-residue), {±1, ±2, ±5, ±10} at 2, {±1} at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QpSquareClass {
    pub place: Place,
    pub class_id: i64,
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).unwrap()
}

/// Numerator times denominator: same square class, integral.
fn integral_rep(a: &BigRational) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(a.numer() * a.denom())
}

pub fn square_class(a: &BigRational, v: Place) -> Result<QpSquareClass> {
    let n = integral_rep(a)?;
    Ok(square_class_int(&n, v))
}

/// Square class of a nonzero integer.
pub fn square_class_int(n: &BigInt, v: Place) -> QpSquareClass {
    assert!(!n.is_zero(), "square class of zero");
    let class_id = match v {
        Place::Infinity => {
            if n.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (k, u) = split_p(n, 2);
            let unit = match u.mod_floor(&BigInt::from(8)).to_u64().unwrap() {
                1 => 1,
                3 => -5,
                5 => 5,
                7 => -1,
                _ => unreachable!(),
            };
            if k % 2 == 1 {
                unit * 2
            } else {
                unit
            }
        }
        Place::Prime(p) => {
            let (k, u) = split_p(n, p);
            let unit = if legendre(&u, p) == 1 {
                1
            } else {
                least_nonresidue(p) as i64
            };
            if k % 2 == 1 {
                unit * p as i64
            } else {
                unit
            }
        }
    };
    QpSquareClass { place: v, class_id }
}

/// All square classes at a place.
pub fn square_classes(v: Place) -> Vec<QpSquareClass> {
    let ids: Vec<i64> = match v {
        Place::Infinity => vec![1, -1],
        Place::Prime(2) => vec![1, -1, 2, -2, 5, -5, 10, -10],
        Place::Prime(p) => {
            let u = least_nonresidue(p) as i64;
            vec![1, u, p as i64, u * p as i64]
        }
    };
    ids.into_iter()
        .map(|class_id| QpSquareClass { place: v, class_id })
        .collect()
}

pub fn is_local_square(a: &BigRational, v: Place) -> Result<bool> {
    Ok(square_class(a, v)?.class_id == 1)
}

/// Local Hilbert symbol (a, b)_v as ±1.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8> {
    let a = integral_rep(a)?;
    let b = integral_rep(b)?;
    Ok(hilbert_symbol_int(&a, &b, v))
}

pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, v: Place) -> i8 {
    match v {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_p(a, 2);
            let (beta, w) = split_p(b, 2);
            let eps = |x: &BigInt| -> u64 {
                let r = x.mod_floor(&BigInt::from(4)).to_u64().unwrap();
                u64::from(r == 3)
            };
            let omega = |x: &BigInt| -> u64 {
                let r = x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
                u64::from(r == 3 || r == 5)
            };
            let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_p(a, p);
            let (beta, w) = split_p(b, p);
            let mut s: i32 = 1;
            if (alpha * beta) % 2 == 1 && ((p - 1) / 2) % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&w, p);
            }
            s as i8
        }
    }
}

/// Hasse–Witt invariant Σ_{i<j} (a_i, a_j)_v written additively in {0, 1}.
pub fn hasse_witt(diag: &[BigRational], v: Place) -> Result<u8> {
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::ZeroEntry);
    }
    let mut acc = 0u8;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if hilbert_symbol(&diag[i], &diag[j], v)? == -1 {
                acc ^= 1;
            }
        }
    }
    Ok(acc)
}

/// Places supporting the Hilbert symbols of a and b: 2, infinity and the
/// primes dividing numerators and denominators.
pub fn supporting_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut primes = vec![2u64];
    for x in [a.numer(), a.denom(), b.numer(), b.denom()] {
        if let Some(ps) = crate::arith::prime_divisors(x, 1 << 20) {
            primes.extend(ps);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    out.push(Place::Infinity);
    out
}

// ---------------------------------------------------------------------------
// ℤ_p factorization

/// Environment override for the p-adic precision budget.
pub const PRECISION_ENV: &str = "ISOLAB_PRECISION_BUDGET";

pub fn default_precision_budget() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&b: &u32| b > 0)
        .unwrap_or(256)
}

/// One irreducible factor of f over ℤ_p, known modulo p^precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicFactor {
    pub p: u64,
    pub lifted: IntPoly,
    pub precision: u32,
    pub degree: usize,
    pub residual: FpPoly,
    pub residual_mult: usize,
    pub star_symmetric: bool,
    pub ramification_index: usize,
    pub residue_degree: usize,
    /// False only for blocks the splitter could not resolve.
    pub irreducible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorizationStatus {
    Complete,
    PrecisionExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicFactorization {
    pub input: IntPoly,
    pub p: u64,
    pub factors: Vec<PadicFactor>,
    pub status: FactorizationStatus,
}

impl PadicFactorization {
    /// Indices of factors certified irreducible and *-symmetric.
    pub fn symmetric_factors(&self) -> impl Iterator<Item = &PadicFactor> {
        self.factors
            .iter()
            .filter(|f| f.irreducible && f.star_symmetric)
    }
}

/// A factor found during block analysis, before *-symmetry is decided.
#[derive(Debug, Clone)]
struct RawFactor {
    poly: IntPoly,
    precision: u32,
    residual: FpPoly,
    ram: usize,
    res_deg: usize,
    irreducible: bool,
}

#[derive(Debug)]
enum BlockFail {
    NeedMorePrecision,
}

/// Factor a squarefree f over ℤ_p. Blocks with a repeated residual are
/// split using Newton polygons and residual polynomials with respect to a
/// lift of the residual, refining the lift or splitting along eigenspaces
/// of suitable elements of ℤ_p[X]/(block). A block that resists all of
/// this within the budget is returned unresolved with status
/// `PrecisionExceeded`.
pub fn factor_over_zp(f: &IntPoly, p: u64, budget: u32) -> Result<PadicFactorization> {
    if budget == 0 {
        return Err(Error::BudgetNonpositive);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::ZeroInput);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if (f.lead() % BigInt::from(p)).is_zero() {
        return Err(Error::NonMonic);
    }
    let disc_v = {
        let d = symmetric_closure(f).discriminant();
        if d.is_zero() {
            0
        } else {
            val_p(&d, p) as u32
        }
    };
    let k0 = (2 * disc_v + 8).min(budget);
    let mut k = k0;
    loop {
        match attempt(f, p, k, disc_v) {
            Ok(Some(fz)) => return Ok(fz),
            Ok(None) | Err(BlockFail::NeedMorePrecision) => {
                if k >= budget {
                    return Ok(fallback(f, p, k));
                }
                k = (2 * k).min(budget);
            }
        }
    }
}

/// Squarefree part of f·f*: the discriminant bound used to certify
/// congruences between factors and their reciprocals.
fn symmetric_closure(f: &IntPoly) -> IntPoly {
    let rev = f.reversed();
    (f * &rev).squarefree_part()
}

fn pk_of(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// Monic version of f modulo p^k.
fn make_monic(f: &IntPoly, p: u64, k: u32) -> IntPoly {
    let pk = pk_of(p, k);
    let inv = modinv_big(&f.lead(), &pk);
    f.scale(&inv).mod_floor(&pk)
}

/// Hensel blocks of f: (block mod p^k, residual irreducible, multiplicity).
fn hensel_blocks(f: &IntPoly, p: u64, k: u32) -> Vec<(IntPoly, FpPoly, usize)> {
    let monic = make_monic(f, p, k);
    let fac = factor_fp(&FpPoly::from_int_poly(&monic, p), DEFAULT_SEED);
    let powers: Vec<FpPoly> = fac
        .iter()
        .map(|(h, e)| (0..*e).fold(FpPoly::one(p), |acc, _| acc.mul(h)))
        .collect();
    let lifted = hensel_lift(&monic, &powers, p, k);
    lifted
        .into_iter()
        .zip(fac)
        .map(|(b, (h, e))| (b, h, e))
        .collect()
}

fn attempt(
    f: &IntPoly,
    p: u64,
    k: u32,
    disc_v: u32,
) -> std::result::Result<Option<PadicFactorization>, BlockFail> {
    let mut raw = Vec::new();
    for (block, h, e) in hensel_blocks(f, p, k) {
        if e == 1 {
            raw.push(RawFactor {
                poly: block,
                precision: k,
                residual: h.clone(),
                ram: 1,
                res_deg: h.degree(),
                irreducible: true,
            });
        } else {
            match analyze_block(&block, &h, p, k, 0)? {
                Some(mut parts) => raw.append(&mut parts),
                None => return Ok(None),
            }
        }
    }
    let factors = finish(f, p, raw, disc_v)?;
    Ok(Some(PadicFactorization {
        input: f.clone(),
        p,
        factors,
        status: FactorizationStatus::Complete,
    }))
}

/// Result when the budget runs out: Hensel blocks, with blocks whose
/// multiplicity exceeds one left unresolved.
fn fallback(f: &IntPoly, p: u64, k: u32) -> PadicFactorization {
    let mut factors = Vec::new();
    let mut all_irreducible = true;
    for (block, h, e) in hensel_blocks(f, p, k) {
        let sym_res = star_symmetric_mod_p(&h).unwrap_or(false);
        let sym = sym_res && reciprocal_mod(&block, p, k).is_some_and(|r| r == block);
        all_irreducible &= e == 1;
        factors.push(PadicFactor {
            p,
            degree: block.degree(),
            lifted: block,
            precision: k,
            residual_mult: e,
            star_symmetric: sym,
            ramification_index: 1,
            residue_degree: h.degree(),
            irreducible: e == 1,
            residual: h,
        });
    }
    PadicFactorization {
        input: f.clone(),
        p,
        factors,
        status: if all_irreducible {
            FactorizationStatus::Complete
        } else {
            FactorizationStatus::PrecisionExceeded
        },
    }
}

/// Monic reciprocal g(0)^{-1} X^d g(1/X) modulo p^k, if g(0) is a unit.
fn reciprocal_mod(g: &IntPoly, p: u64, k: u32) -> Option<IntPoly> {
    let c0 = g.coeff(0);
    if (&c0 % BigInt::from(p)).is_zero() {
        return None;
    }
    let pk = pk_of(p, k);
    Some(g.reversed().scale(&modinv_big(&c0, &pk)).mod_floor(&pk))
}

/// Decide *-symmetry and assemble the public factor records.
fn finish(
    f: &IntPoly,
    p: u64,
    raw: Vec<RawFactor>,
    disc_v: u32,
) -> std::result::Result<Vec<PadicFactor>, BlockFail> {
    let mut out = Vec::new();
    for r in &raw {
        let sym_res = star_symmetric_mod_p(&r.residual).unwrap_or(false);
        let sym = if !sym_res {
            false
        } else {
            // a congruence modulo p^j with 2j > v_p(disc) forces equality
            if 2 * r.precision <= disc_v {
                return Err(BlockFail::NeedMorePrecision);
            }
            let pk = pk_of(p, r.precision);
            reciprocal_mod(&r.poly, p, r.precision)
                .is_some_and(|rev| rev == r.poly.mod_floor(&pk))
        };
        out.push(PadicFactor {
            p,
            lifted: r.poly.clone(),
            precision: r.precision,
            degree: r.poly.degree(),
            residual_mult: r.poly.degree() / r.residual.degree(),
            residual: r.residual.clone(),
            star_symmetric: sym,
            ramification_index: r.ram,
            residue_degree: r.res_deg,
            irreducible: r.irreducible,
        });
    }
    let _ = f;
    out.sort_by(|a, b| {
        (a.residual.clone(), a.degree, a.lifted.clone()).cmp(&(
            b.residual.clone(),
            b.degree,
            b.lifted.clone(),
        ))
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Residue field arithmetic F_q = F_p[X]/(h) and polynomials over it.

#[derive(Clone)]
struct Fq {
    p: u64,
    h: FpPoly,
}

type FqPoly = Vec<FpPoly>;

impl Fq {
    fn zero(&self) -> FpPoly {
        FpPoly::zero(self.p)
    }

    fn one(&self) -> FpPoly {
        FpPoly::one(self.p)
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        a.mul(b).rem(&self.h)
    }

    fn inv(&self, a: &FpPoly) -> FpPoly {
        let (g, s, _) = a.ext_gcd(&self.h);
        assert!(g.is_one(), "zero divisor in residue field");
        s.rem(&self.h)
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.h.degree() as u32)
    }

    fn trim(&self, mut a: FqPoly) -> FqPoly {
        while a.last().is_some_and(FpPoly::is_zero) {
            a.pop();
        }
        a
    }

    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.trim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    fn pmul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&self.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn divrem(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (vec![], r);
        }
        let inv = self.inv(b.last().unwrap());
        let db = b.len() - 1;
        let mut q = vec![self.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(&r[k + db], &inv);
            if c.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[k + j] = r[k + j].sub(&self.mul(&c, y));
            }
            q[k] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    fn monic(&self, a: &FqPoly) -> FqPoly {
        match a.last() {
            None => vec![],
            Some(l) => {
                let inv = self.inv(l);
                a.iter().map(|c| self.mul(c, &inv)).collect()
            }
        }
    }

    fn gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.divrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn powmod(&self, base: &FqPoly, e: &BigUint, m: &FqPoly) -> FqPoly {
        let mut result = self.divrem(&vec![self.one()], m).1;
        let base = self.divrem(base, m).1;
        for i in (0..e.bits()).rev() {
            result = self.divrem(&self.pmul(&result, &result), m).1;
            if e.bit(i) {
                result = self.divrem(&self.pmul(&result, &base), m).1;
            }
        }
        result
    }

    fn y(&self) -> FqPoly {
        vec![self.zero(), self.one()]
    }

    /// Rabin's irreducibility test for a polynomial over F_q.
    fn is_irreducible(&self, r: &FqPoly) -> bool {
        let d = r.len().saturating_sub(1);
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let r = self.monic(r);
        let q = self.order();
        let y = self.y();
        // frob[i] = y^{q^i} mod r
        let mut frob = vec![self.divrem(&y, &r).1];
        for i in 1..=d {
            let next = self.powmod(&frob[i - 1], &q, &r);
            frob.push(next);
        }
        if self.sub(&frob[d], &y).iter().any(|c| !c.is_zero()) {
            return false;
        }
        for (prime, _) in crate::arith::factor_u64(d as u64) {
            let g = self.gcd(&self.sub(&frob[d / prime as usize], &y), &r);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// If r = c·(y − ρ)^m, returns ρ.
    fn single_root_power(&self, r: &FqPoly) -> Option<FpPoly> {
        let r = self.monic(r);
        let m = r.len() - 1;
        let yq = self.powmod(&self.y(), &self.order(), &r);
        let g = self.gcd(&self.sub(&yq, &self.y()), &r);
        if g.len() != 2 {
            return None;
        }
        let rho = g[0].neg().rem(&self.h);
        // check r == (y - rho)^m
        let lin = vec![rho.neg().rem(&self.h), self.one()];
        let mut acc = vec![self.one()];
        for _ in 0..m {
            acc = self.pmul(&acc, &lin);
        }
        (acc == r).then_some(rho)
    }
}

// ---------------------------------------------------------------------------
// Block analysis

/// Coefficients of g in base φ: g = Σ a_i φ^i with deg a_i < deg φ.
fn phi_expansion(g: &IntPoly, phi: &IntPoly, pk: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut cur = g.mod_floor(pk);
    while !cur.is_zero() {
        let (q, r) = cur.div_rem_checked(phi).expect("phi is monic");
        out.push(r.mod_floor(pk));
        cur = q.mod_floor(pk);
    }
    out
}

/// Minimum p-adic valuation of the coefficients, capped at k.
fn poly_val(a: &IntPoly, p: u64, k: u32) -> u32 {
    a.coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| (val_p(c, p) as u32).min(k))
        .min()
        .unwrap_or(k)
}

/// Side of a Newton polygon: abscissae [start, end], slope h/e in lowest
/// terms (roots on this side have v(φ(α)) = h/e).
#[derive(Debug, Clone)]
struct Side {
    start: usize,
    end: usize,
    h: u32,
    e: usize,
}

/// Lower convex hull of (i, v_i) from i = 0 to the last point.
fn newton_sides(vals: &[u32]) -> Vec<Side> {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as i64, v as i64))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let len = (b.0 - a.0) as u64;
            let height = (a.1 - b.1) as u64;
            let g = len.gcd(&height).max(1);
            Side {
                start: a.0 as usize,
                end: b.0 as usize,
                h: (height / g) as u32,
                e: (len / g) as usize,
            }
        })
        .collect()
}

/// Residual polynomial of a side, with coefficients in F_q.
fn residual_polynomial(
    fq: &Fq,
    coeffs: &[IntPoly],
    vals: &[u32],
    side: &Side,
) -> FqPoly {
    let p = fq.p;
    let deg = (side.end - side.start) / side.e;
    let v_start = vals[side.start];
    (0..=deg)
        .map(|j| {
            let i = side.start + j * side.e;
            let target = v_start - j as u32 * side.h;
            if vals[i] != target {
                return fq.zero();
            }
            let scale = pk_of(p, target);
            let a = IntPoly::new(coeffs[i].coeffs().iter().map(|c| c / &scale).collect());
            FpPoly::from_int_poly(&a, p).rem(&fq.h)
        })
        .collect()
}

fn mulmod_block(a: &IntPoly, b: &IntPoly, block: &IntPoly, pk: &BigInt) -> IntPoly {
    let prod = (a * b).mod_floor(pk);
    prod.div_rem_checked(block).expect("monic").1.mod_floor(pk)
}

fn powmod_block(a: &IntPoly, e: usize, block: &IntPoly, pk: &BigInt) -> IntPoly {
    let mut r = IntPoly::one();
    for _ in 0..e {
        r = mulmod_block(&r, a, block, pk);
    }
    r
}

/// Matrix of multiplication by t on ℤ/p^k[X]/(block), power basis.
fn mult_matrix(t: &IntPoly, block: &IntPoly, pk: &BigInt) -> Vec<Vec<BigInt>> {
    let n = block.degree();
    let mut cols = Vec::with_capacity(n);
    let mut cur = t.div_rem_checked(block).expect("monic").1.mod_floor(pk);
    for _ in 0..n {
        cols.push(cur.clone());
        cur = mulmod_block(&cur, &IntPoly::x(), block, pk);
    }
    (0..n)
        .map(|i| (0..n).map(|j| cols[j].coeff(i)).collect())
        .collect()
}

const MAX_REFINEMENTS: usize = 24;

/// Irreducible factors of a block ≡ h^e (mod p), e ≥ 2, known mod p^k.
/// `Ok(None)` means the block could not be resolved at this precision
/// by any means (caller escalates); `Err` requests more precision.
fn analyze_block(
    block: &IntPoly,
    h: &FpPoly,
    p: u64,
    k: u32,
    depth: usize,
) -> std::result::Result<Option<Vec<RawFactor>>, BlockFail> {
    let n = block.degree();
    if n == h.degree() {
        return Ok(Some(vec![RawFactor {
            poly: block.clone(),
            precision: k,
            residual: h.clone(),
            ram: 1,
            res_deg: h.degree(),
            irreducible: true,
        }]));
    }
    if depth > 2 * n {
        return Ok(None);
    }
    let pk = pk_of(p, k);
    let fq = Fq { p, h: h.clone() };
    let mut phi = h.to_int_poly_symmetric();
    for _ in 0..MAX_REFINEMENTS {
        let coeffs = phi_expansion(block, &phi, &pk);
        let vals: Vec<u32> = coeffs.iter().map(|a| poly_val(a, p, k)).collect();
        // a capped v_0 is only a lower bound: the hull is then usable for
        // splitting but not as an irreducibility certificate
        let capped = vals[0] >= k;
        let sides = newton_sides(&vals);
        let residuals: Vec<FqPoly> = sides
            .iter()
            .map(|s| residual_polynomial(&fq, &coeffs, &vals, s))
            .collect();
        if !capped && sides.len() == 1 && fq.is_irreducible(&residuals[0]) {
            let s = &sides[0];
            let deg_r = residuals[0].len() - 1;
            return Ok(Some(vec![RawFactor {
                poly: block.clone(),
                precision: k,
                residual: h.clone(),
                ram: s.e,
                res_deg: h.degree() * deg_r,
                irreducible: true,
            }]));
        }
        // try to split along an element separating the roots
        if let Some((f1, f2, prec)) = try_split(block, &phi, &sides, &residuals, &fq, p, k)? {
            let mut out = Vec::new();
            for part in [f1, f2] {
                match analyze_block(&part, h, p, prec, depth + 1)? {
                    Some(mut fs) => out.append(&mut fs),
                    None => return Ok(None),
                }
            }
            return Ok(Some(out));
        }
        // single side with residual (y - ρ)^m and integral slope: refine φ
        if capped {
            return Err(BlockFail::NeedMorePrecision);
        }
        if sides.len() == 1 && sides[0].e == 1 {
            if let Some(rho) = fq.single_root_power(&residuals[0]) {
                let shift = rho.to_int_poly().scale(&pk_of(p, sides[0].h));
                phi = (&phi - &shift).mod_floor(&pk);
                continue;
            }
        }
        return Ok(None);
    }
    Ok(None)
}

/// Candidate separating elements θ = (θ₀) / p^H, as (θ₀, H).
fn split_candidates(block: &IntPoly, phi: &IntPoly, sides: &[Side], pk: &BigInt, p: u64) -> Vec<(IntPoly, u32)> {
    // the side of least slope value gives units; every other root maps to
    // an element of positive valuation
    let s = sides.last().unwrap();
    let (e, hh) = (s.e, s.h);
    let phi_e = powmod_block(phi, e, block, pk);
    let ph = pk_of(p, hh);
    let x = IntPoly::x();
    let mut out = vec![(phi_e.clone(), hh)];
    for j in 1..=3usize {
        let xj = powmod_block(&x, j, block, pk);
        for t in 1..=2i64 {
            let add = xj.scale(&(&ph * BigInt::from(t)));
            out.push(((&phi_e + &add).mod_floor(pk), hh));
        }
        out.push((mulmod_block(&phi_e, &xj, block, pk), hh));
    }
    out
}

/// Attempt to split a block into two coprime-over-ℚ_p pieces.
fn try_split(
    block: &IntPoly,
    phi: &IntPoly,
    sides: &[Side],
    residuals: &[FqPoly],
    fq: &Fq,
    p: u64,
    k: u32,
) -> std::result::Result<Option<(IntPoly, IntPoly, u32)>, BlockFail> {
    let splittable = sides.len() > 1
        || residuals
            .iter()
            .any(|r| fq.single_root_power(r).is_none() && !fq.is_irreducible(r));
    if !splittable {
        return Ok(None);
    }
    let n = block.degree();
    let pk = pk_of(p, k);
    for (theta0, hh) in split_candidates(block, phi, sides, &pk, p) {
        let loss = hh as usize * n;
        if loss as u32 + 4 >= k {
            return Err(BlockFail::NeedMorePrecision);
        }
        let k1 = k - loss as u32;
        let pk1 = pk_of(p, k1);
        let chi0 = charpoly_berkowitz(&mult_matrix(&theta0, block, &pk), Some(&pk));
        // χ_θ(Y) = p^{-Hn} χ_θ₀(p^H Y): scale coefficient j by p^{-H(n-j)}
        let mut cs = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let c = chi0.coeff(j);
            let sh = pk_of(p, hh * (n - j) as u32);
            if !(&c % &sh).is_zero() {
                // θ is not integral: this candidate is unusable
                cs.clear();
                break;
            }
            cs.push((c / sh).mod_floor(&pk1));
        }
        if cs.is_empty() {
            continue;
        }
        let chi = IntPoly::new(cs);
        let fac = factor_fp(&FpPoly::from_int_poly(&chi, p), DEFAULT_SEED);
        if fac.len() < 2 {
            continue;
        }
        let (g1, m1) = &fac[0];
        let g1p = (0..*m1).fold(FpPoly::one(p), |acc, _| acc.mul(g1));
        let g2p = FpPoly::from_int_poly(&chi, p).div_exact(&g1p);
        let (g1l, _) = hensel_lift_pair(&chi, &g1p.monic(), &g2p.monic(), p, k1);
        // P = p^{H d1} G1(θ) as an element of the block algebra
        let d1 = g1l.degree();
        let theta0_k1 = theta0.mod_floor(&pk1);
        let block_k1 = block.mod_floor(&pk1);
        let mut acc = IntPoly::one();
        for j in (0..d1).rev() {
            acc = mulmod_block(&acc, &theta0_k1, &block_k1, &pk1);
            let term = g1l.coeff(j) * pk_of(p, hh * (d1 - j) as u32);
            acc = (&acc + &IntPoly::constant(term)).mod_floor(&pk1);
        }
        let Some((f1, prec)) = ideal_generator(&acc, &block_k1, d1, p, k1) else {
            return Err(BlockFail::NeedMorePrecision);
        };
        let pkp = pk_of(p, prec);
        let (f2, rem) = block
            .mod_floor(&pkp)
            .div_rem_checked(&f1)
            .expect("monic divisor");
        if !rem.mod_floor(&pkp).is_zero() {
            return Err(BlockFail::NeedMorePrecision);
        }
        let f2 = f2.mod_floor(&pkp);
        let h = &fq.h;
        let is_power_of_h = |g: &IntPoly| {
            let gp = FpPoly::from_int_poly(g, p);
            let e = g.degree() / h.degree();
            g.degree() % h.degree() == 0
                && (0..e).fold(FpPoly::one(p), |acc, _| acc.mul(h)) == gp
        };
        if !is_power_of_h(&f1) || !is_power_of_h(&f2) {
            return Err(BlockFail::NeedMorePrecision);
        }
        return Ok(Some((f1, f2, prec)));
    }
    Ok(None)
}

/// Given an element P of ℚ_p[X]/(B) whose zero set among the roots of B
/// has size d1, returns the monic generator of (B, P) (of degree d1) and
/// the precision to which it is known.
fn ideal_generator(
    pelt: &IntPoly,
    block: &IntPoly,
    d1: usize,
    p: u64,
    k: u32,
) -> Option<(IntPoly, u32)> {
    let n = block.degree();
    let pk = pk_of(p, k);
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut cur = pelt.clone();
    for _ in 0..n {
        cols.push((0..n).map(|i| cur.coeff(i)).collect());
        cur = mulmod_block(&cur, &IntPoly::x(), block, &pk);
    }
    let mut prec = k;
    let mut used = vec![false; n];
    let mut last = None;
    for row in (d1..n).rev() {
        let pmod = pk_of(p, prec);
        let mut best: Option<(usize, u32)> = None;
        for (c, col) in cols.iter().enumerate() {
            if used[c] {
                continue;
            }
            let x = col[row].mod_floor(&pmod);
            if x.is_zero() {
                continue;
            }
            let v = val_p(&x, p) as u32;
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((c, v));
            }
        }
        let (pc, v) = best?;
        if v + 1 >= prec {
            return None;
        }
        let piv = cols[pc][row].mod_floor(&pmod);
        let pv = pk_of(p, v);
        let unit = &piv / &pv;
        let new_prec = prec - v;
        let pnew = pk_of(p, new_prec);
        let uinv = modinv_big(&unit, &pnew);
        for c in 0..n {
            if used[c] || c == pc {
                continue;
            }
            let x = cols[c][row].mod_floor(&pmod);
            if x.is_zero() {
                continue;
            }
            let m = ((&x / &pv) * &uinv).mod_floor(&pnew);
            let pivcol = cols[pc].clone();
            for (i, y) in cols[c].iter_mut().enumerate() {
                *y = (&*y - &m * &pivcol[i]).mod_floor(&pnew);
            }
        }
        used[pc] = true;
        prec = new_prec;
        last = Some((pc, v));
    }
    let (pc, v) = last?;
    let pmod = pk_of(p, prec);
    let col: Vec<BigInt> = cols[pc].iter().map(|x| x.mod_floor(&pmod)).collect();
    let lead = col[d1].clone();
    let pv = pk_of(p, v);
    let fin = prec.checked_sub(v)?;
    if fin < 2 {
        return None;
    }
    let pfin = pk_of(p, fin);
    let uinv = modinv_big(&(&lead / &pv), &pfin);
    let mut coeffs = Vec::with_capacity(d1 + 1);
    for x in col.iter().take(d1) {
        if !(x % &pv).is_zero() {
            return None;
        }
        coeffs.push(((x / &pv) * &uinv).mod_floor(&pfin));
    }
    coeffs.push(BigInt::one());
    Some((IntPoly::new(coeffs), fin))
}

// ---------------------------------------------------------------------------
// Place types

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaceType {
    Split,
    Unramified,
    Ramified,
}

/// Type of the place of E^σ below a *-symmetric irreducible ℤ_p-factor:
/// ramified iff β² − 4 (β = α + α⁻¹) has odd valuation in E^σ.
pub fn classify_place(factor: &PadicFactor, p: u64) -> Result<PlaceType> {
    if p == 2 {
        return Err(Error::PIsTwo);
    }
    if !factor.star_symmetric {
        return Err(Error::NotStarSymmetric);
    }
    if factor.degree % 2 == 1 {
        return Err(Error::OddDegree);
    }
    // symmetrize the approximation: the top half determines the rest
    let pk = pk_of(p, factor.precision);
    let d = factor.degree;
    let c: Vec<BigInt> = (0..=d)
        .map(|i| factor.lifted.coeff(i.max(d - i)).mod_floor(&pk))
        .collect();
    let g = IntPoly::new(c).mod_symmetric(&pk);
    let psi = trace_polynomial(&g)?;
    let norm = psi.eval_i64(2) * psi.eval_i64(-2);
    let v = if norm.is_zero() {
        return Err(Error::PrecisionExceeded);
    } else {
        val_p(&norm, p) as u32
    };
    if v + 1 >= factor.precision {
        return Err(Error::PrecisionExceeded);
    }
    // residue degree of E^σ from the local factorization of ψ
    let fz = factor_over_zp(&psi.mod_symmetric(&pk), p, default_precision_budget().max(factor.precision))?;
    if fz.factors.len() != 1 || !fz.factors[0].irreducible {
        return Err(Error::PrecisionExceeded);
    }
    let f_k = fz.factors[0].residue_degree as u32;
    let vk = v / f_k;
    Ok(if vk % 2 == 1 {
        PlaceType::Ramified
    } else {
        PlaceType::Unramified
    })
}

/// Place type for a +1-symmetric polynomial whose trace polynomial is
/// irreducible over ℚ_p: Split when f breaks into a reciprocal pair.
pub fn classify_place_poly(f: &IntPoly, p: u64) -> Result<PlaceType> {
    if p == 2 {
        return Err(Error::PIsTwo);
    }
    let fz = factor_over_zp(f, p, default_precision_budget())?;
    if fz.status != FactorizationStatus::Complete {
        return Err(Error::PrecisionExceeded);
    }
    let sym: Vec<&PadicFactor> = fz.factors.iter().filter(|x| x.star_symmetric).collect();
    match (sym.len(), fz.factors.len()) {
        (0, _) => Ok(PlaceType::Split),
        (1, 1) => classify_place(sym[0], p),
        _ => Err(Error::NotStarSymmetric),
    }
}
