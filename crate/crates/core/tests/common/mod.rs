//! Test oracles that do not go through the library's exact root counting.

#![allow(dead_code)]

use isolab::IntPoly;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Working precision of the numeric oracle, in bits (about 120 digits).
pub const BITS: u64 = 400;

/// Fixed-point complex number scaled by 2^BITS.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Cx {
    fn from_f64(re: f64, im: f64) -> Cx {
        let s = |x: f64| {
            let m = (x * 2f64.powi(60)).round() as i64;
            BigInt::from(m) << (BITS - 60)
        };
        Cx { re: s(re), im: s(im) }
    }

    fn int(c: &BigInt) -> Cx {
        Cx {
            re: c << BITS,
            im: BigInt::zero(),
        }
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: (&self.re * &o.re - &self.im * &o.im) >> BITS,
            im: (&self.re * &o.im + &self.im * &o.re) >> BITS,
        }
    }

    fn div(&self, o: &Cx) -> Cx {
        let den = &o.re * &o.re + &o.im * &o.im;
        let re = (&self.re * &o.re + &self.im * &o.im) << BITS;
        let im = (&self.im * &o.re - &self.re * &o.im) << BITS;
        Cx { re: re / &den, im: im / den }
    }

    /// |z|² scaled by 2^BITS.
    fn norm2(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> BITS
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let f = |x: &BigInt| (x >> (BITS - 60)).to_f64().unwrap() / 2f64.powi(60);
        (f(&self.re), f(&self.im))
    }
}

fn horner(f: &IntPoly, z: &Cx) -> Cx {
    let mut acc = Cx::int(&BigInt::zero());
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Cx::int(c));
    }
    acc
}

/// Durand–Kerner in f64, then in fixed point until the corrections vanish
/// at the working precision. Input must be squarefree and monic.
pub fn roots_squarefree(f: &IntPoly) -> Vec<Cx> {
    let n = f.degree();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap()).collect();
    let eval = |z: (f64, f64)| {
        let mut a = (0.0, 0.0);
        for k in (0..=n).rev() {
            a = (a.0 * z.0 - a.1 * z.1 + c[k], a.0 * z.1 + a.1 * z.0);
        }
        a
    };
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (1.1 * t.cos(), 1.1 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let num = eval(z[i]);
            let mut den = (1.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
            }
            let m = den.0 * den.0 + den.1 * den.1;
            let q = ((num.0 * den.0 + num.1 * den.1) / m, (num.1 * den.0 - num.0 * den.1) / m);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
            delta = delta.max(q.0.abs() + q.1.abs());
        }
        if delta < 1e-13 {
            break;
        }
    }
    let mut w: Vec<Cx> = z.iter().map(|&(a, b)| Cx::from_f64(a, b)).collect();
    let tol = BigInt::from(1) << (BITS / 2 + 40);
    for _ in 0..40 {
        let mut done = true;
        for i in 0..n {
            let num = horner(f, &w[i]);
            let mut den = Cx::int(&BigInt::from(1));
            for j in (0..n).filter(|&j| j != i) {
                den = den.mul(&w[i].sub(&w[j]));
            }
            let q = num.div(&den);
            if q.re.abs() > tol || q.im.abs() > tol {
                done = false;
            }
            w[i] = w[i].sub(&q);
        }
        if done {
            break;
        }
    }
    w
}

/// Sign of |z| − 1 with the band |(|z|² − 1)| < 2^−150 treated as 0.
pub fn modulus_vs_one(z: &Cx) -> i8 {
    let one = BigInt::from(1) << BITS;
    let d = z.norm2() - one;
    let band = BigInt::from(1) << (BITS - 150);
    if d > band {
        1
    } else if d < -band {
        -1
    } else {
        0
    }
}

/// Numeric count of roots with |z| > 1, with multiplicity.
pub fn numeric_m(f: &IntPoly) -> usize {
    f.squarefree_decomposition()
        .iter()
        .filter(|(g, _)| g.degree() > 0)
        .map(|(g, e)| {
            let g = if g.lead().is_negative() { -g } else { g.clone() };
            roots_squarefree(&g).iter().filter(|z| modulus_vs_one(z) > 0).count() * e
        })
        .sum()
}

/// (n₊, n₋, multiplicities of unit-circle root pairs off ±1) read off the
/// numeric roots.
pub fn numeric_unit_profile(f: &IntPoly) -> (usize, usize, Vec<usize>) {
    let (mut np, mut nm, mut quads) = (0, 0, Vec::new());
    for (g, e) in f.squarefree_decomposition() {
        if g.degree() == 0 {
            continue;
        }
        let g = if g.lead().is_negative() { -&g } else { g };
        for z in roots_squarefree(&g) {
            if modulus_vs_one(&z) != 0 {
                continue;
            }
            let (re, im) = z.to_f64();
            if im.abs() < 1e-9 {
                if re > 0.0 {
                    np += e;
                } else {
                    nm += e;
                }
            } else if im > 0.0 {
                quads.push(e);
            }
        }
    }
    (np, nm, quads)
}
