//! Type decomposition of *-symmetric polynomials, the sign and square
//! conditions, real quadratic factors and index maps.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_square;
use crate::error::{Error, Result};
use crate::intpoly::{
    classify_symmetry, factor_over_z, isolate_real_roots, m_of, reciprocal_star, refine_interval,
    sturm_count, trace_polynomial, IntPoly, RationalInterval, Symmetry,
};

/// F = (X−1)^{n₊} (X+1)^{n₋} · Π f^{n_f} · Π (g g*)^{n_g}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricProfile {
    pub f: IntPoly,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Irreducible +1-symmetric factors of even degree, canonical order.
    pub i1: Vec<(IntPoly, usize)>,
    /// Pairs (g, g*) with g < g* in canonical order.
    pub i2: Vec<(IntPoly, IntPoly, usize)>,
    pub degree: usize,
}

impl SymmetricProfile {
    /// F₁F₂: the part of F prime to X² − 1.
    pub fn f12(&self) -> IntPoly {
        let mut acc = IntPoly::one();
        for (f, n) in &self.i1 {
            acc = &acc * &f.pow(*n);
        }
        for (g, gs, n) in &self.i2 {
            acc = &acc * &(g * gs).pow(*n);
        }
        acc
    }

    pub fn rebuild(&self) -> IntPoly {
        let f0 = &IntPoly::linear(1).pow(self.n_plus) * &IntPoly::linear(-1).pow(self.n_minus);
        &f0 * &self.f12()
    }

    pub fn multiplicity(&self, v: Vertex) -> usize {
        match v {
            Vertex::XMinus1 => self.n_plus,
            Vertex::XPlus1 => self.n_minus,
            Vertex::I1(i) => self.i1[i].1,
        }
    }

    pub fn vertex_poly(&self, v: Vertex) -> IntPoly {
        match v {
            Vertex::XMinus1 => IntPoly::linear(1),
            Vertex::XPlus1 => IntPoly::linear(-1),
            Vertex::I1(i) => self.i1[i].0.clone(),
        }
    }

    /// Vertices I₀ ∪ I₁ of the obstruction graph, type 0 first.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = Vec::new();
        if self.n_plus > 0 {
            v.push(Vertex::XMinus1);
        }
        if self.n_minus > 0 {
            v.push(Vertex::XPlus1);
        }
        v.extend((0..self.i1.len()).map(Vertex::I1));
        v
    }
}

/// A factor in I₀ ∪ I₁ over ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    XMinus1,
    XPlus1,
    I1(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::XMinus1 => write!(f, "X-1"),
            Vertex::XPlus1 => write!(f, "X+1"),
            Vertex::I1(i) => write!(f, "I1[{i}]"),
        }
    }
}

fn check_input(f: &IntPoly) -> Result<()> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::NonMonic);
    }
    if f.degree() % 2 == 1 {
        return Err(Error::OddDegree);
    }
    match classify_symmetry(f)? {
        Symmetry::NotStarSymmetric => Err(Error::NotStarSymmetric),
        _ => Ok(()),
    }
}

pub fn decompose(f: &IntPoly) -> Result<SymmetricProfile> {
    check_input(f)?;
    let fac = factor_over_z(f);
    let (mut n_plus, mut n_minus) = (0, 0);
    let mut i1 = Vec::new();
    let mut rest: Vec<(IntPoly, usize)> = Vec::new();
    for (g, e) in &fac.factors {
        if *g == IntPoly::linear(1) {
            n_plus = *e;
        } else if *g == IntPoly::linear(-1) {
            n_minus = *e;
        } else if reciprocal_star(g).ok().as_ref() == Some(g) {
            i1.push((g.clone(), *e));
        } else {
            rest.push((g.clone(), *e));
        }
    }
    let mut i2 = Vec::new();
    let mut used = vec![false; rest.len()];
    for i in 0..rest.len() {
        if used[i] {
            continue;
        }
        let star = reciprocal_star(&rest[i].0).map_err(|_| Error::NotStarSymmetric)?;
        let j = (0..rest.len())
            .find(|&j| !used[j] && j != i && rest[j].0 == star)
            .ok_or(Error::NotStarSymmetric)?;
        if rest[j].1 != rest[i].1 {
            return Err(Error::NotStarSymmetric);
        }
        used[i] = true;
        used[j] = true;
        i2.push((rest[i].0.clone(), star, rest[i].1));
    }
    Ok(SymmetricProfile {
        f: f.clone(),
        n_plus,
        n_minus,
        i1,
        i2,
        degree: f.degree(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason")]
pub enum ConditionCheck {
    Holds,
    Fails(String),
}

impl ConditionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionCheck::Holds)
    }
}

/// r, s ≥ m(F), and r ≡ s ≡ m(F) mod 2 when F(1)F(−1) ≠ 0.
pub fn check_sign_condition(profile: &SymmetricProfile, r: usize, s: usize) -> Result<ConditionCheck> {
    if r + s != profile.degree {
        return Err(Error::DegreeMismatch(format!(
            "r + s = {} but deg F = {}",
            r + s,
            profile.degree
        )));
    }
    let m = m_of(&profile.f)?;
    if r < m || s < m {
        return Ok(ConditionCheck::Fails(format!("min(r, s) < m(F) = {m}")));
    }
    let zero_at_pm1 = profile.n_plus > 0 || profile.n_minus > 0;
    if !zero_at_pm1 && (r % 2 != m % 2 || s % 2 != m % 2) {
        return Ok(ConditionCheck::Fails(format!(
            "F(1)F(-1) != 0 and ({r}, {s}) not congruent to m(F) = {m} mod 2"
        )));
    }
    Ok(ConditionCheck::Holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareFailure {
    AbsF1,
    AbsFm1,
    SignedProduct,
}

/// |F(1)|, |F(−1)| and (−1)^{deg/2} F(1)F(−1) are squares (0 included).
pub fn check_square_condition(f: &IntPoly) -> Vec<SquareFailure> {
    let f1 = f.eval_i64(1);
    let fm1 = f.eval_i64(-1);
    let mut prod = &f1 * &fm1;
    if (f.degree() / 2) % 2 == 1 {
        prod = -prod;
    }
    let mut out = Vec::new();
    if !is_square(&f1.abs()) {
        out.push(SquareFailure::AbsF1);
    }
    if !is_square(&fm1.abs()) {
        out.push(SquareFailure::AbsFm1);
    }
    if !is_square(&prod) {
        out.push(SquareFailure::SignedProduct);
    }
    out
}

pub fn square_condition_holds(f: &IntPoly) -> bool {
    check_square_condition(f).is_empty()
}

/// X² − βX + 1 over ℝ with β ∈ (−2, 2), a real root of the trace
/// polynomial of an I₁ entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealQuadFactor {
    /// Index into `SymmetricProfile::i1`.
    pub parent: usize,
    pub parent_poly: IntPoly,
    pub beta_interval: RationalInterval,
    pub multiplicity: usize,
}

/// One entry per root of a trace polynomial in (−2, 2), with isolating
/// intervals refined until pairwise disjoint.
pub fn real_quad_factors(profile: &SymmetricProfile) -> Result<Vec<RealQuadFactor>> {
    let window = RationalInterval::from_ints(-2, 2);
    let mut out = Vec::new();
    let mut traces = Vec::new();
    for (idx, (f, n)) in profile.i1.iter().enumerate() {
        let psi = trace_polynomial(f)?;
        for iv in isolate_real_roots(&psi, &window)? {
            out.push(RealQuadFactor {
                parent: idx,
                parent_poly: f.clone(),
                beta_interval: iv,
                multiplicity: *n,
            });
        }
        traces.push(psi);
    }
    // roots of distinct irreducibles differ, so halving terminates
    loop {
        let mut changed = false;
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if out[i].beta_interval.disjoint(&out[j].beta_interval) {
                    continue;
                }
                changed = true;
                for k in [i, j] {
                    let half = out[k].beta_interval.width() / BigRational::from_integer(2.into());
                    out[k].beta_interval =
                        refine_interval(&traces[out[k].parent], &out[k].beta_interval, &half);
                }
            }
        }
        if !changed {
            break;
        }
    }
    out.sort_by(|a, b| {
        (a.parent, &a.beta_interval.lo).cmp(&(b.parent, &b.beta_interval.lo))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub parent: IntPoly,
    pub beta_interval: RationalInterval,
    pub multiplicity: usize,
    pub value: i64,
}

/// ι on I₀(ℝ) ∪ I₁(ℝ); entries keyed by their β-intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_x_minus_1: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_x_plus_1: Option<i64>,
    pub at: Vec<IndexEntry>,
}

impl IndexMap {
    pub fn values(&self) -> Vec<i64> {
        self.at.iter().map(|e| e.value).collect()
    }

    pub fn total(&self) -> i64 {
        self.at_x_minus_1.unwrap_or(0) + self.at_x_plus_1.unwrap_or(0) + self.values().iter().sum::<i64>()
    }

    fn build(quads: &[RealQuadFactor], xm: Option<i64>, xp: Option<i64>, vals: &[i64]) -> Self {
        IndexMap {
            at_x_minus_1: xm,
            at_x_plus_1: xp,
            at: quads
                .iter()
                .zip(vals)
                .map(|(q, &value)| IndexEntry {
                    parent: q.parent_poly.clone(),
                    beta_interval: q.beta_interval.clone(),
                    multiplicity: q.multiplicity,
                    value,
                })
                .collect(),
        }
    }
}

/// Admissible values at X∓1: n ≡ ι mod 2 and |ι| ≤ n.
fn type0_range(n: usize) -> Vec<i64> {
    let n = n as i64;
    (-n..=n).step_by(2).collect()
}

/// Admissible values at a real quadratic factor of multiplicity n:
/// ι ∈ {−2n, −2n+4, …, 2n}.
fn quad_range(n: usize) -> Vec<i64> {
    let n = n as i64;
    (-2 * n..=2 * n).step_by(4).collect()
}

/// Every index map in Idx_{r,s}(F), in lexicographic order of
/// (ι(X−1), ι(X+1), values).
pub fn enumerate_index_maps(profile: &SymmetricProfile, r: usize, s: usize) -> Result<Vec<IndexMap>> {
    if let ConditionCheck::Fails(why) = check_sign_condition(profile, r, s)? {
        return Err(Error::SignConditionFails(why));
    }
    let quads = real_quad_factors(profile)?;
    let target = r as i64 - s as i64;
    let mut ranges: Vec<Vec<i64>> = Vec::new();
    if profile.n_plus > 0 {
        ranges.push(type0_range(profile.n_plus));
    }
    if profile.n_minus > 0 {
        ranges.push(type0_range(profile.n_minus));
    }
    ranges.extend(quads.iter().map(|q| quad_range(q.multiplicity)));
    // suffix bounds for pruning
    let mut lo_suffix = vec![0i64; ranges.len() + 1];
    let mut hi_suffix = vec![0i64; ranges.len() + 1];
    for i in (0..ranges.len()).rev() {
        lo_suffix[i] = lo_suffix[i + 1] + ranges[i][0];
        hi_suffix[i] = hi_suffix[i + 1] + ranges[i].last().unwrap();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ranges.len());
    dfs(&ranges, &lo_suffix, &hi_suffix, 0, 0, target, &mut cur, &mut |vals| {
        let mut it = vals.iter().copied();
        let xm = (profile.n_plus > 0).then(|| it.next().unwrap());
        let xp = (profile.n_minus > 0).then(|| it.next().unwrap());
        let rest: Vec<i64> = it.collect();
        out.push(IndexMap::build(&quads, xm, xp, &rest));
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    ranges: &[Vec<i64>],
    lo: &[i64],
    hi: &[i64],
    i: usize,
    sum: i64,
    target: i64,
    cur: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    if i == ranges.len() {
        if sum == target {
            emit(cur);
        }
        return;
    }
    if sum + lo[i] > target || sum + hi[i] < target {
        return;
    }
    for &v in &ranges[i] {
        cur.push(v);
        dfs(ranges, lo, hi, i + 1, sum + v, target, cur, emit);
        cur.pop();
    }
}

/// Checks ι against Idx_{r,s}(F), identifying entries with the profile's
/// real quadratic factors through their intervals.
pub fn check_index_map(profile: &SymmetricProfile, r: usize, s: usize, iota: &IndexMap) -> Result<()> {
    if r + s != profile.degree {
        return Err(Error::DegreeMismatch(format!(
            "r + s = {} but deg F = {}",
            r + s,
            profile.degree
        )));
    }
    let bad = |m: String| Err(Error::InvalidIndexMap(m));
    for (name, n, val) in [
        ("X-1", profile.n_plus, iota.at_x_minus_1),
        ("X+1", profile.n_minus, iota.at_x_plus_1),
    ] {
        match (n, val) {
            (0, None) => {}
            (0, Some(_)) => return bad(format!("{name} is not a factor of F")),
            (_, None) => return bad(format!("missing value at {name}")),
            (n, Some(v)) => {
                if !type0_range(n).contains(&v) {
                    return bad(format!("value {v} at {name} outside the admissible range"));
                }
            }
        }
    }
    let quads = real_quad_factors(profile)?;
    if quads.len() != iota.at.len() {
        return bad(format!(
            "expected {} real quadratic factors, got {}",
            quads.len(),
            iota.at.len()
        ));
    }
    let mut seen = vec![false; quads.len()];
    for e in &iota.at {
        let k = match_entry(&quads, e)?;
        if seen[k] {
            return bad("two entries name the same factor".into());
        }
        seen[k] = true;
        if !quad_range(quads[k].multiplicity).contains(&e.value) {
            return bad(format!("value {} outside the admissible range", e.value));
        }
    }
    if iota.total() != r as i64 - s as i64 {
        return bad(format!("values sum to {}, expected {}", iota.total(), r as i64 - s as i64));
    }
    Ok(())
}

pub fn validate_index_map(profile: &SymmetricProfile, r: usize, s: usize, iota: &IndexMap) -> bool {
    check_sign_condition(profile, r, s).is_ok_and(|c| c.holds())
        && check_index_map(profile, r, s, iota).is_ok()
}

/// Index of the real quadratic factor named by an entry: same parent and
/// the entry's interval meets the factor's isolating interval in a root.
fn match_entry(quads: &[RealQuadFactor], e: &IndexEntry) -> Result<usize> {
    let psi = trace_polynomial(&e.parent)
        .map_err(|_| Error::InvalidIndexMap(format!("parent {} is not +1-symmetric", e.parent)))?;
    let hits: Vec<usize> = quads
        .iter()
        .enumerate()
        .filter(|(_, q)| q.parent_poly == e.parent)
        .filter(|(_, q)| {
            let lo = (&q.beta_interval.lo).max(&e.beta_interval.lo).clone();
            let hi = (&q.beta_interval.hi).min(&e.beta_interval.hi).clone();
            lo < hi && sturm_count(&psi, &RationalInterval::new(lo, hi)).is_ok_and(|c| c == 1)
        })
        .map(|(k, _)| k)
        .collect();
    match hits.as_slice() {
        [k] => Ok(*k),
        [] => Err(Error::InvalidIndexMap(format!(
            "no real quadratic factor of {} in {:?}",
            e.parent, e.beta_interval
        ))),
        _ => Err(Error::InvalidIndexMap(format!(
            "interval {:?} does not isolate a single factor",
            e.beta_interval
        ))),
    }
}

/// Re-keys an index map onto the profile's canonical intervals.
pub fn canonicalize_index_map(profile: &SymmetricProfile, iota: &IndexMap) -> Result<IndexMap> {
    let quads = real_quad_factors(profile)?;
    let mut vals = vec![0i64; quads.len()];
    if quads.len() != iota.at.len() {
        return Err(Error::InvalidIndexMap("wrong number of entries".into()));
    }
    for e in &iota.at {
        vals[match_entry(&quads, e)?] = e.value;
    }
    Ok(IndexMap::build(&quads, iota.at_x_minus_1, iota.at_x_plus_1, &vals))
}

/// (D₊, D₋); each is absent when the corresponding n_± vanishes.
pub fn d_plus_minus(
    profile: &SymmetricProfile,
    iota: &IndexMap,
) -> Result<(Option<BigRational>, Option<BigRational>)> {
    let f12 = profile.f12();
    let two = if profile.n_plus % 2 == 1 { 2 } else { 1 };
    let one = |n: usize, at: Option<i64>, x: i64, name: &str| -> Result<Option<BigRational>> {
        if n == 0 {
            return Ok(None);
        }
        let v = at.ok_or_else(|| Error::InvalidIndexMap(format!("missing value at {name}")))?;
        let e = n as i64 - v;
        if e % 2 != 0 || v.abs() > n as i64 {
            return Err(Error::InvalidIndexMap(format!("value {v} at {name}")));
        }
        let mut d = f12.eval_i64(x).abs() * BigInt::from(two);
        if (e / 2) % 2 != 0 {
            d = -d;
        }
        debug_assert!(!d.is_zero());
        Ok(Some(BigRational::from_integer(d)))
    };
    Ok((
        one(profile.n_plus, iota.at_x_minus_1, 1, "X-1")?,
        one(profile.n_minus, iota.at_x_plus_1, -1, "X+1")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::cyclotomic;

    fn lehmer() -> IntPoly {
        IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    #[test]
    fn decompose_examples() {
        let f = &(&IntPoly::linear(1).pow(2) * &cyclotomic(3)) * &IntPoly::from_i64(&[1, -3, 1]);
        let p = decompose(&f).unwrap();
        assert_eq!((p.n_plus, p.n_minus), (2, 0));
        assert_eq!(p.i1.len(), 2);
        assert!(p.i2.is_empty());
        assert_eq!(p.rebuild(), f);

        // constant term 2 rules out *-symmetry; h h* is a type 2 pair
        let g = IntPoly::from_i64(&[2, 1, 1]);
        assert_eq!(decompose(&g), Err(Error::NotStarSymmetric));
        let h = IntPoly::from_i64(&[-1, 1, 1]);
        let hs = reciprocal_star(&h).unwrap();
        let p = decompose(&(&h * &hs)).unwrap();
        assert_eq!(p.i2.len(), 1);
        assert_eq!(p.rebuild(), &h * &hs);

        let odd = IntPoly::linear(1);
        assert_eq!(decompose(&odd), Err(Error::OddDegree));
    }

    #[test]
    fn sign_and_square() {
        let f = &(&IntPoly::linear(1) * &IntPoly::linear(-1)) * &lehmer();
        let p = decompose(&f).unwrap();
        assert!(check_sign_condition(&p, 3, 9).unwrap().holds());
        assert!(square_condition_holds(&f));
        let l = decompose(&lehmer()).unwrap();
        assert!(!check_sign_condition(&l, 6, 4).unwrap().holds());
        assert!(check_sign_condition(&l, 5, 5).unwrap().holds());
        assert!(square_condition_holds(&lehmer()));
        assert_eq!(
            check_square_condition(&IntPoly::from_i64(&[1, -3, 1])),
            vec![SquareFailure::AbsFm1, SquareFailure::SignedProduct]
        );
        let q = &IntPoly::linear(1).pow(2) * &IntPoly::linear(-1).pow(2);
        assert!(check_sign_condition(&decompose(&q).unwrap(), 4, 0).unwrap().holds());
        assert!(matches!(check_sign_condition(&p, 3, 3), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn quad_factors() {
        let p = decompose(&cyclotomic(12)).unwrap();
        assert_eq!(real_quad_factors(&p).unwrap().len(), 2);
        let p = decompose(&lehmer()).unwrap();
        assert_eq!(real_quad_factors(&p).unwrap().len(), 4);
        let p = decompose(&IntPoly::from_i64(&[1, -3, 1])).unwrap();
        assert!(real_quad_factors(&p).unwrap().is_empty());
        // Φ_5 Φ_10 share no β but the intervals must come out disjoint
        let p = decompose(&(&cyclotomic(5) * &cyclotomic(10))).unwrap();
        let q = real_quad_factors(&p).unwrap();
        assert_eq!(q.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(q[i].beta_interval.disjoint(&q[j].beta_interval));
            }
        }
    }

    #[test]
    fn index_maps() {
        let p = decompose(&cyclotomic(3)).unwrap();
        let maps = enumerate_index_maps(&p, 2, 0).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].values(), vec![2]);

        // (X-1)(X+1)·Lehmer at (3, 9): r - s = -6 from 4 quads and two ±1
        let f = &(&IntPoly::linear(1) * &IntPoly::linear(-1)) * &lehmer();
        let p = decompose(&f).unwrap();
        let maps = enumerate_index_maps(&p, 3, 9).unwrap();
        for m in &maps {
            assert!(validate_index_map(&p, 3, 9, m));
            assert_eq!(m.total(), -6);
        }
        // one +2 among four (4 ways) with -1, -1; or all -2 with +1, +1
        assert_eq!(maps.len(), 5);

        let p = decompose(&cyclotomic(3)).unwrap();
        assert!(matches!(
            enumerate_index_maps(&p, 1, 1),
            Err(Error::SignConditionFails(_))
        ));
    }

    #[test]
    fn index_map_json_round_trip() {
        let f = &(&IntPoly::linear(1) * &IntPoly::linear(-1)) * &lehmer();
        let p = decompose(&f).unwrap();
        let maps = enumerate_index_maps(&p, 3, 9).unwrap();
        let s = serde_json::to_string(&maps[2]).unwrap();
        let back: IndexMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, maps[2]);
        assert_eq!(canonicalize_index_map(&p, &back).unwrap(), maps[2]);
        let mut wrong = back.clone();
        wrong.at[0].value = 6;
        assert!(!validate_index_map(&p, 3, 9, &wrong));
    }

    #[test]
    fn d_values() {
        let f = &(&IntPoly::linear(1) * &IntPoly::linear(-1)) * &lehmer();
        let p = decompose(&f).unwrap();
        let m = &enumerate_index_maps(&p, 3, 9).unwrap()[0];
        assert_eq!(m.at_x_minus_1, Some(-1));
        let (dp, dm) = d_plus_minus(&p, m).unwrap();
        // n+ = 1 odd, (1 - (-1))/2 = 1: D+ = -2 |L(1)| = -2
        assert_eq!(dp.unwrap(), BigRational::from_integer((-2).into()));
        assert_eq!(dm.unwrap(), BigRational::from_integer((-2).into()));

        // n+ = 2, ι(X-1) = 0, F12(1) = 25 → D+ = -25
        let s = IntPoly::from_i64(&[1, -7, 1]); // S(1) = -5, S(-1) = 9
        let f = &IntPoly::linear(1).pow(2) * &s.pow(2);
        let p = decompose(&f).unwrap();
        assert_eq!(p.f12().eval_i64(1), BigInt::from(25));
        let iota = IndexMap { at_x_minus_1: Some(0), at_x_plus_1: None, at: vec![] };
        let (dp, dm) = d_plus_minus(&p, &iota).unwrap();
        assert_eq!(dp.unwrap(), BigRational::from_integer((-25).into()));
        assert!(dm.is_none());
    }
}
