//! Polynomials over prime fields and the Witt groups of finite fields.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod, prime_power};
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;

/// Seed used when callers do not supply one.
pub const DEFAULT_SEED: u64 = 0x1505_1ab0;

/// A polynomial over F_p, coefficients ascending in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FpPoly {
    /// Canonical order: degree first, then coefficients lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p, self.coeffs.len(), &self.coeffs).cmp(&(other.p, other.coeffs.len(), &other.coeffs))
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        f
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pm = p as i128;
        FpPoly::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(pm) as u64)
                .collect(),
        )
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        FpPoly::new(
            p,
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&bp).to_u64().unwrap())
                .collect(),
        )
    }

    /// Lift to the symmetric residue range `(-p/2, p/2]`.
    pub fn to_int_poly_symmetric(&self) -> IntPoly {
        let half = self.p / 2;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > half {
                        BigInt::from(c) - BigInt::from(self.p)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        FpPoly::zero(self.p).sub(self)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.coeffs.len() < d.coeffs.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                let t = mul_mod(c, b, p);
                r[k + j] = (r[k + j] + p - t) % p;
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact division over F_p");
        q
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, m);
            if e.bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// For f with f' = 0, the polynomial g with g^p = f.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        FpPoly::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// h(0)^{-1} X^{deg h} h(1/X).
    pub fn reciprocal_normalized(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0 == 0 {
            return Err(Error::ZeroConstant);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        Ok(FpPoly::new(self.p, rev).scale(inv_mod(c0, self.p)))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.to_int_poly(), self.p)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[{}]{:?}", self.p, self.coeffs)
    }
}

/// h is *-symmetric mod p: it equals h(0)^{-1} X^{deg h} h(1/X) after
/// making both monic.
pub fn star_symmetric_mod_p(h: &FpPoly) -> Result<bool> {
    let r = h.reciprocal_normalized()?;
    Ok(r.monic() == h.monic())
}

/// Factor the reduction of `f` mod `p` into monic irreducibles with
/// multiplicity (the leading coefficient is dropped).
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<Vec<(FpPoly, usize)>> {
    factor_mod_p_seeded(f, p, DEFAULT_SEED)
}

pub fn factor_mod_p_seeded(f: &IntPoly, p: u64, seed: u64) -> Result<Vec<(FpPoly, usize)>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let fp = FpPoly::from_int_poly(f, p);
    if fp.is_zero() {
        return Err(Error::ZeroReduction);
    }
    Ok(factor_fp(&fp, seed))
}

/// Full factorization of a nonzero polynomial over F_p, canonical order.
pub fn factor_fp(f: &FpPoly, seed: u64) -> Vec<(FpPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(FpPoly, usize)> = Vec::new();
    for (sf, e) in squarefree_fp(&f.monic()) {
        for (g, d) in distinct_degree(&sf) {
            for h in equal_degree(&g, d, &mut rng) {
                match out.iter_mut().find(|(q, _)| *q == h) {
                    Some(entry) => entry.1 += e,
                    None => out.push((h, e)),
                }
            }
        }
    }
    out.sort();
    out
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with `g`
/// squarefree and `f = Π g^e`.
pub fn squarefree_fp(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, e) in squarefree_fp(&f.pth_root()) {
            out.push((g, e * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if c.degree() > 0 {
        for (g, e) in squarefree_fp(&c.monic().pth_root()) {
            out.push((g, e * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.rem(&rest);
    let pe = BigUint::from(p);
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&pe, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree() > 0 {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest.monic(), deg));
    }
    out
}

/// Split a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.degree();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(nd-1)) restricted to degree d
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                s = s.add(&t);
            }
            s
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = b.gcd(f);
        if g.degree() > 0 && g.degree() < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div_exact(&g), d, rng));
            out.sort();
            return out;
        }
    }
}

/// Structure of the Witt group W(F_q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WittGroupStructure {
    Z2,
    Z2xZ2,
    Z4,
}

/// Determined by q: characteristic 2 gives Z/2; otherwise whether -1 is a
/// square in F_q decides between Z/2 x Z/2 and Z/4.
pub fn witt_group_structure(q: u64) -> Result<WittGroupStructure> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(if p == 2 {
        WittGroupStructure::Z2
    } else if q % 4 == 1 {
        WittGroupStructure::Z2xZ2
    } else {
        WittGroupStructure::Z4
    })
}

/// A Witt class over F_q in canonical form. `disc_class` is 1 when the
/// signed discriminant (-1)^{n(n-1)/2} det is a non-square; it is always 0
/// in characteristic 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittClassFq {
    pub q: u64,
    pub dim_parity: u8,
    pub disc_class: u8,
}

impl WittClassFq {
    pub fn zero(q: u64) -> Result<Self> {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Ok(WittClassFq {
            q,
            dim_parity: 0,
            disc_class: 0,
        })
    }

    fn minus_one_nonsquare(&self) -> bool {
        self.q % 4 == 3
    }

    fn char_two(&self) -> bool {
        self.q % 2 == 0
    }

    /// Class of the diagonal form <a_1, ..., a_n> over a prime field F_p.
    pub fn of_diagonal(p: u64, diag: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut c = WittClassFq::zero(p)?;
        for &a in diag {
            let a = a % p;
            if a == 0 {
                return Err(Error::ZeroEntry);
            }
            let nonsq = p != 2 && pow_mod(a, (p - 1) / 2, p) != 1;
            c = witt_add(
                c,
                WittClassFq {
                    q: p,
                    dim_parity: 1,
                    disc_class: nonsq as u8,
                },
            );
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.dim_parity == 0 && self.disc_class == 0
    }

    /// Order of the class in W(F_q).
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_zero() {
            acc = witt_add(acc, *self);
            k += 1;
        }
        k
    }
}

/// disc(a ⊕ b) = (-1)^{dim a · dim b} disc a · disc b.
pub fn witt_add(a: WittClassFq, b: WittClassFq) -> WittClassFq {
    assert_eq!(a.q, b.q, "classes over different fields");
    if a.char_two() {
        return WittClassFq {
            q: a.q,
            dim_parity: a.dim_parity ^ b.dim_parity,
            disc_class: 0,
        };
    }
    let twist = (a.dim_parity & b.dim_parity) & a.minus_one_nonsquare() as u8;
    WittClassFq {
        q: a.q,
        dim_parity: a.dim_parity ^ b.dim_parity,
        disc_class: a.disc_class ^ b.disc_class ^ twist,
    }
}

/// All elements of W(F_q) in canonical form.
pub fn witt_elements(q: u64) -> Result<Vec<WittClassFq>> {
    let z = WittClassFq::zero(q)?;
    let discs: &[u8] = if z.char_two() { &[0] } else { &[0, 1] };
    let mut out = Vec::new();
    for dim_parity in [0u8, 1] {
        for &disc_class in discs {
            out.push(WittClassFq {
                q,
                dim_parity,
                disc_class,
            });
        }
    }
    Ok(out)
}

/// Reduce an integer mod p to `[0, p)`.
pub fn reduce(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}
