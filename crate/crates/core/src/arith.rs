//! Small-integer helpers shared by the polynomial modules.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo a prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = factor_u64(q)[0].0;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Trial-division factorization, fine for the small moduli used here.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut ord = euler_phi(m);
    for (q, _) in factor_u64(ord) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Legendre symbol (a/p) for odd prime p, as -1, 0 or 1.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p));
    let r = u64::try_from(r).expect("residue fits");
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_p(a: &BigInt, p: u64) -> u64 {
    assert!(!a.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut a = a.clone();
    loop {
        let (q, r) = a.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        a = q;
        v += 1;
    }
}

/// Strips all factors of `p`, returning `(valuation, unit part)`.
pub fn split_p(a: &BigInt, p: u64) -> (u64, BigInt) {
    let v = val_p(a, p);
    (v, a / BigInt::from(p).pow(v as u32))
}

pub fn is_square(a: &BigInt) -> bool {
    if a.sign() == Sign::Minus {
        return false;
    }
    let r = a.sqrt();
    &r * &r == *a
}

/// Distinct prime divisors of a nonzero integer: trial division up to
/// `limit`, then Pollard–Brent on the cofactor. Returns `None` if a
/// composite cofactor resists factoring or a prime factor exceeds u64.
pub fn prime_divisors(a: &BigInt, limit: u64) -> Option<Vec<u64>> {
    let mut n = a.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut d = 2u64;
    while d <= limit && n > BigInt::one() {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        if &bd * &bd > n {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match u64::try_from(&n) {
            Ok(small) => collect_prime_factors(small, &mut out),
            Err(_) => collect_big(&n, &mut out)?,
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

fn collect_big(n: &BigInt, out: &mut Vec<u64>) -> Option<()> {
    if let Ok(small) = u64::try_from(n) {
        collect_prime_factors(small, out);
        return Some(());
    }
    if is_probable_prime_big(n) {
        return None;
    }
    let d = pollard_brent_big(n, 1 << 22)?;
    collect_big(&d, out)?;
    collect_big(&(n / &d), out)
}

/// Miller–Rabin with the first twelve prime bases.
pub fn is_probable_prime_big(n: &BigInt) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho with an iteration cap.
fn pollard_brent_big(n: &BigInt, max_iter: u64) -> Option<BigInt> {
    let one = BigInt::one();
    for c in 1u64..8 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigInt::from(2), 1u64, BigInt::one());
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut iters = 0u64;
        while g == one && iters < max_iter {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            iters += r;
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

/// Finds a nontrivial divisor of an odd composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_phi() {
        assert_eq!(mult_order(5, 12), 2);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(euler_phi(30), 8);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn primality() {
        let ps = primes_up_to(50);
        assert_eq!(ps.len(), 15);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 101] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    #[test]
    fn divisors_of_big() {
        let n = BigInt::from(2u64 * 2 * 3 * 1_000_003);
        assert_eq!(prime_divisors(&n, 1000), Some(vec![2, 3, 1_000_003]));
        let m = BigInt::from(1_000_003u64 * 998_244_353);
        assert_eq!(prime_divisors(&m, 100), Some(vec![1_000_003, 998_244_353]));
        let big = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * BigInt::from(1_000_003u64);
        assert_eq!(
            prime_divisors(&big, 100),
            Some(vec![1_000_003, 998_244_353, 1_000_000_007])
        );
        assert!(is_probable_prime_big(&BigInt::from(2).pow(89u32).checked_sub(&BigInt::one()).unwrap()));
    }
}
