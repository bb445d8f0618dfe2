//! Salem polynomials, complemented Salem products, the ι_δ index maps,
//! lattice catalog and an exact checker for explicit isometries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::val_p;
use crate::error::{Error, Result};
use crate::intpoly::{
    cauchy_bound, classify_symmetry, cyclotomic, factor_over_z, isolate_real_roots, rat,
    refine_interval, sturm_count, trace_polynomial, IntPoly, RationalInterval, Symmetry,
};
use crate::linalg::{
    charpoly_berkowitz, det_bareiss, eval_poly_at_matrix, inverse_rational, kernel_rational,
    mat_mul, rat_mul, rat_transpose, signature_rational, to_rational, transpose, IntMatrix,
    RatMatrix,
};
use crate::obstruction::{decide_with, LocalCache, Status, Verdict};
use crate::structure::{
    check_index_map, decompose, real_quad_factors, square_condition_holds, IndexEntry, IndexMap,
    SymmetricProfile,
};

/// Rank of the K3 lattice.
pub const K3_RANK: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SalemCertificate {
    pub s: IntPoly,
    pub degree: usize,
    /// Isolates λ > 1.
    pub lambda_interval: RationalInterval,
    /// Conjugate pairs on the unit circle, degree/2 − 1.
    pub unit_pairs: usize,
}

impl SalemCertificate {
    /// Bounds for log λ from the isolating interval.
    pub fn log_lambda_bounds(&self) -> (f64, f64) {
        let lo = self.lambda_interval.lo.to_f64().unwrap_or(1.0).max(1.0);
        let hi = self.lambda_interval.hi.to_f64().unwrap_or(f64::INFINITY);
        (lo.ln(), hi.ln())
    }
}

pub fn verify_salem(s: &IntPoly) -> Result<SalemCertificate> {
    let not = |why: &str| Error::NotSalem(why.to_string());
    if s.is_zero() || !s.is_monic() {
        return Err(Error::NonMonic);
    }
    let d = s.degree();
    if d < 2 || d % 2 == 1 {
        return Err(not("degree must be even and at least 2"));
    }
    if s.coeff(0).is_zero() || classify_symmetry(s)? != Symmetry::PlusSymmetric {
        return Err(not("not +1-symmetric"));
    }
    let fac = factor_over_z(s);
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Err(not("reducible"));
    }
    let psi = trace_polynomial(s)?;
    let b = cauchy_bound(&psi) + rat(3);
    let above = sturm_count(&psi, &RationalInterval::new(rat(2), b.clone()))?;
    let below = sturm_count(&psi, &RationalInterval::new(-b, rat(-2)))?;
    let inside = sturm_count(&psi, &RationalInterval::from_ints(-2, 2))?;
    if above != 1 || below != 0 || inside != d / 2 - 1 {
        return Err(not(&format!(
            "trace roots: {above} above 2, {below} below -2, {inside} of {} inside",
            d / 2 - 1
        )));
    }
    let lb = cauchy_bound(s) + rat(1);
    let roots = isolate_real_roots(s, &RationalInterval::new(rat(1), lb))?;
    let [iv] = roots.as_slice() else {
        return Err(not("expected one real root above 1"));
    };
    let width = BigRational::new(BigInt::one(), BigInt::one() << 30);
    Ok(SalemCertificate {
        s: s.clone(),
        degree: d,
        lambda_interval: refine_interval(s, iv, &width),
        unit_pairs: d / 2 - 1,
    })
}

/// X^k ψ(X + 1/X) for ψ of degree k.
pub fn from_trace_polynomial(psi: &IntPoly) -> IntPoly {
    let k = psi.degree();
    let x2p1 = IntPoly::from_i64(&[1, 0, 1]);
    let mut acc = IntPoly::zero();
    let mut pw = IntPoly::one();
    for (i, c) in psi.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let term = &pw * &IntPoly::monomial(c.clone(), k - i);
            acc = &acc + &term;
        }
        pw = &pw * &x2p1;
    }
    acc
}

/// Root pattern of a real-rooted squarefree p with all roots above −2:
/// (roots in (−2, 2), roots ≥ 2). `None` otherwise.
fn trace_root_pattern(p: &IntPoly) -> Option<(usize, usize)> {
    let d = p.degree();
    if p.eval_i64(-2).is_zero() || !p.is_squarefree() {
        return None;
    }
    let at2 = p.eval_i64(2).is_zero();
    let q = if at2 { p.div_exact(&IntPoly::linear(2))? } else { p.clone() };
    let b = cauchy_bound(&q) + rat(3);
    let inside = sturm_count(&q, &RationalInterval::from_ints(-2, 2)).ok()?;
    let above = sturm_count(&q, &RationalInterval::new(rat(2), b)).ok()? + usize::from(at2);
    (inside + above == d).then_some((inside, above))
}

fn falling(i: usize, j: usize) -> BigInt {
    ((i - j + 1)..=i).fold(BigInt::one(), |a, x| a * x)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |a, i| a * (n - i) as i64 / (i + 1) as i64)
}

/// Salem polynomials S of degree 2k with every coefficient in
/// [−bound, bound], found by depth-first search over monic trace
/// polynomials ψ. The top half of S determines ψ triangularly, so each
/// level fixes one coefficient of S and one of ψ. Every derivative of a
/// valid ψ is again real-rooted above −2 with at most one root ≥ 2, which
/// prunes the tree level by level. Results come in lexicographic order of
/// (s_{2k−1}, …, s_k).
pub fn search_salem(k: usize, bound: i64, limit: usize) -> Vec<SalemCertificate> {
    let mut out = Vec::new();
    if k == 0 || limit == 0 {
        return out;
    }
    let mut coeffs = vec![0i64; k + 1];
    coeffs[k] = 1;
    salem_dfs(k, k, bound, limit, &mut coeffs, &mut out);
    out
}

fn salem_dfs(
    k: usize,
    level: usize,
    bound: i64,
    limit: usize,
    coeffs: &mut Vec<i64>,
    out: &mut Vec<SalemCertificate>,
) {
    let j = level - 1;
    // coefficient of X^{k+j} in S = Σ c_i X^{k−i} (X² + 1)^i
    let carried: i64 = (j + 1..=k)
        .filter(|i| (i - j) % 2 == 0)
        .map(|i| coeffs[i] * binomial(i, (i - j) / 2))
        .sum();
    for sc in -bound..=bound {
        if out.len() >= limit {
            return;
        }
        coeffs[j] = sc - carried;
        // j-th derivative depends only on coefficients j..=k
        let der = IntPoly::new(
            (j..=k)
                .map(|i| falling(i, j) * BigInt::from(coeffs[i]))
                .collect(),
        );
        let Some((inside, above)) = trace_root_pattern(&der) else {
            continue;
        };
        if inside + 1 < k - j || above > 1 {
            continue;
        }
        if j > 0 {
            salem_dfs(k, j, bound, limit, coeffs, out);
        } else if above == 1 && !der.eval_i64(2).is_zero() {
            let s = from_trace_polynomial(&der);
            if s.coeffs().iter().all(|c| c.abs() <= BigInt::from(bound)) {
                if let Ok(cert) = verify_salem(&s) {
                    out.push(cert);
                }
            }
        }
    }
    coeffs[j] = 0;
}

// ---------------------------------------------------------------------------
// Complemented Salem polynomials

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementedSalem {
    pub s: SalemCertificate,
    /// Cyclotomic indices m with multiplicities, increasing in m.
    pub c: Vec<(u64, usize)>,
    pub f: IntPoly,
}

pub fn assemble_complemented(s: &SalemCertificate, cyclo: &[(u64, usize)]) -> Result<ComplementedSalem> {
    let mut merged: Vec<(u64, usize)> = Vec::new();
    let mut sorted: Vec<(u64, usize)> = cyclo.iter().copied().filter(|&(_, n)| n > 0).collect();
    sorted.sort_unstable();
    for (m, n) in sorted {
        if m == 0 {
            return Err(Error::DegreeMismatch("cyclotomic index must be positive".into()));
        }
        match merged.last_mut() {
            Some((lm, ln)) if *lm == m => *ln += n,
            _ => merged.push((m, n)),
        }
    }
    let total = s.degree
        + merged
            .iter()
            .map(|&(m, n)| n * crate::arith::euler_phi(m) as usize)
            .sum::<usize>();
    if total != K3_RANK {
        return Err(Error::DegreeSumNot22(total));
    }
    let f = merged
        .iter()
        .fold(s.s.clone(), |acc, &(m, n)| &acc * &cyclotomic(m).pow(n));
    Ok(ComplementedSalem {
        s: s.clone(),
        c: merged,
        f,
    })
}

/// Recovers (S, C) from F = S·C with S Salem and C a product of
/// cyclotomic polynomials.
pub fn split_complemented(f: &IntPoly) -> Result<ComplementedSalem> {
    let fac = factor_over_z(f);
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let mut salem = None;
    let mut cyclo = Vec::new();
    for (g, n) in &fac.factors {
        let d = g.degree();
        let m = (1..=(6 * d as u64 + 6))
            .filter(|&m| crate::arith::euler_phi(m) as usize == d)
            .find(|&m| cyclotomic(m) == *g);
        match m {
            Some(m) => cyclo.push((m, *n)),
            None if salem.is_none() && *n == 1 => salem = Some(verify_salem(g)?),
            None => return Err(Error::NotSalem("more than one non-cyclotomic factor".into())),
        }
    }
    let s = salem.ok_or_else(|| Error::NotSalem("no Salem factor".into()))?;
    assemble_complemented(&s, &cyclo)
}

/// ι_δ: +2 on the chosen unit pair of S (pairs ordered by β), −2n_f on
/// every other real quadratic factor and −n_± on X∓1.
pub fn iota_delta(cs: &ComplementedSalem, delta_index: usize) -> Result<IndexMap> {
    if delta_index >= cs.s.unit_pairs {
        return Err(Error::IndexOutOfRange(delta_index));
    }
    let profile = decompose(&cs.f)?;
    let parent = profile
        .i1
        .iter()
        .position(|(g, _)| *g == cs.s.s)
        .ok_or_else(|| Error::NotSalem("Salem factor missing from F".into()))?;
    let mut seen = 0;
    let at = real_quad_factors(&profile)?
        .into_iter()
        .map(|q| {
            let n = q.multiplicity as i64;
            let value = if q.parent == parent {
                seen += 1;
                if seen - 1 == delta_index {
                    2
                } else {
                    -2 * n
                }
            } else {
                -2 * n
            };
            IndexEntry {
                parent: q.parent_poly,
                beta_interval: q.beta_interval,
                multiplicity: q.multiplicity,
                value,
            }
        })
        .collect();
    let iota = IndexMap {
        at_x_minus_1: (profile.n_plus > 0).then(|| -(profile.n_plus as i64)),
        at_x_plus_1: (profile.n_minus > 0).then(|| -(profile.n_minus as i64)),
        at,
    };
    match check_index_map(&profile, 3, 19, &iota) {
        Ok(()) => Ok(iota),
        Err(Error::DegreeMismatch(m)) => Err(Error::DegreeMismatch(m)),
        Err(e) => Err(Error::NotInIdx(e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonprojectiveReport {
    pub status: Status,
    /// The accepted complemented polynomial, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplementedSalem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub candidates_examined: usize,
}

/// Cap on (C, δ) pairs examined for degrees below 20.
pub const CANDIDATE_BUDGET: usize = 400;

/// Cyclotomic multisets of total degree `target`, as nondecreasing index
/// lists in lexicographic order.
pub fn cyclotomic_multisets(target: usize) -> Vec<Vec<(u64, usize)>> {
    // φ(m) ≤ target forces m ≤ 2 target² + 2 crudely; scan generously
    let ms: Vec<(u64, usize)> = (1..=(6 * target as u64 + 6))
        .map(|m| (m, crate::arith::euler_phi(m) as usize))
        .filter(|&(_, d)| d <= target)
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<u64> = Vec::new();
    fn rec(ms: &[(u64, usize)], start: usize, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<(u64, usize)>>) {
        if left == 0 {
            let mut grouped: Vec<(u64, usize)> = Vec::new();
            for &m in cur.iter() {
                match grouped.last_mut() {
                    Some((lm, n)) if *lm == m => *n += 1,
                    _ => grouped.push((m, 1)),
                }
            }
            out.push(grouped);
            return;
        }
        for i in start..ms.len() {
            let (m, d) = ms[i];
            if d <= left {
                cur.push(m);
                rec(ms, i, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&ms, 0, target, &mut cur, &mut out);
    out
}

/// Searches complemented Salem polynomials F = S·C with the index maps ι_δ
/// and returns the first candidate that `decide` accepts.
pub fn nonprojective_realizable(s: &SalemCertificate) -> Result<NonprojectiveReport> {
    let d = s.degree;
    if !(4..=K3_RANK).contains(&d) {
        return Err(Error::DegreeOutOfRange(d));
    }
    let mut cache = LocalCache::default();
    let mut report = NonprojectiveReport {
        status: Status::Indeterminate,
        witness: None,
        delta_index: None,
        verdict: None,
        candidates_examined: 0,
    };
    if d == K3_RANK && !square_condition_holds(&s.s) {
        let cs = assemble_complemented(s, &[])?;
        report.status = Status::NotRealizable;
        report.verdict = Some(decide_with(&cs.f, 3, 19, None, &mut cache)?);
        report.witness = Some(cs);
        return Ok(report);
    }
    let candidates = match d {
        22 => vec![vec![]],
        20 => vec![vec![(1, 1), (2, 1)]],
        _ => cyclotomic_multisets(K3_RANK - d),
    };
    for c in candidates {
        let cs = assemble_complemented(s, &c)?;
        for delta in 0..s.unit_pairs {
            if report.candidates_examined >= CANDIDATE_BUDGET {
                return Ok(report);
            }
            let iota = match iota_delta(&cs, delta) {
                Ok(i) => i,
                Err(Error::NotInIdx(_)) => continue,
                Err(e) => return Err(e),
            };
            report.candidates_examined += 1;
            let v = decide_with(&cs.f, 3, 19, Some(&iota), &mut cache)?;
            if v.status == Status::Realizable {
                report.status = Status::Realizable;
                report.witness = Some(cs);
                report.delta_index = Some(delta);
                report.verdict = Some(v);
                return Ok(report);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lattices

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramLattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
    pub signature: (usize, usize),
    pub determinant: i64,
    pub even: bool,
}

fn to_int(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn check_square(m: &[Vec<i64>], what: &str) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::BadMatrix(format!("{what} must be a nonempty square matrix")));
    }
    Ok(n)
}

impl GramLattice {
    pub fn new(name: &str, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = check_square(&gram, "gram")?;
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(Error::BadMatrix("gram must be symmetric".into()));
        }
        let g = to_int(&gram);
        let det = det_bareiss(&g);
        if det.is_zero() {
            return Err(Error::BadMatrix("gram is degenerate".into()));
        }
        let (pos, neg, _) = signature_rational(&to_rational(&g));
        Ok(GramLattice {
            name: name.to_string(),
            even: (0..n).all(|i| gram[i][i] % 2 == 0),
            determinant: det
                .to_i64()
                .ok_or_else(|| Error::BadMatrix("determinant out of range".into()))?,
            signature: (pos, neg),
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even_unimodular(&self) -> bool {
        self.even && self.determinant.abs() == 1
    }
}

fn direct_sum(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            out[off + i][off..off + row.len()].copy_from_slice(row);
        }
        off += b.len();
    }
    out
}

fn e8_gram() -> Vec<Vec<i64>> {
    // Cartan matrix, Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 on 4
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = vec![vec![0; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    g
}

pub const CATALOG_NAMES: [&str; 5] = ["U", "V2", "E8", "E8minus", "K3"];

pub fn catalog(name: &str) -> Result<GramLattice> {
    let u = vec![vec![0, 1], vec![1, 0]];
    let neg = |m: Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        m.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect()
    };
    let gram = match name {
        "U" => u,
        "V2" => vec![vec![2, 1], vec![1, 2]],
        "E8" => e8_gram(),
        "E8minus" => neg(e8_gram()),
        "K3" => direct_sum(&[u.clone(), u.clone(), u, neg(e8_gram()), neg(e8_gram())]),
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    GramLattice::new(name, gram)
}

// ---------------------------------------------------------------------------
// Witness checker

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryWitness {
    pub lattice: GramLattice,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub char_poly: IntPoly,
    pub is_semisimple: bool,
    pub determinant: i64,
    /// Present when t is semisimple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_map: Option<IndexMap>,
    /// Parity of v₂ of the spinor norm predicted from the (−1)-eigenspace
    /// and f(−1); present on even unimodular lattices when t is
    /// semisimple at −1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spinor_valuation_odd: Option<bool>,
    /// Whether det t = −1 exactly when that valuation is odd.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spinor_parity_ok: Option<bool>,
}

/// b restricted to the span of the columns of `basis` (given as rows).
fn restricted_form(g: &RatMatrix, basis: &[Vec<BigRational>]) -> RatMatrix {
    let bt: RatMatrix = basis.to_vec();
    let b = rat_transpose(&bt);
    rat_mul(&rat_mul(&bt, g), &b)
}

fn signature_value(m: &RatMatrix) -> i64 {
    if m.is_empty() {
        return 0;
    }
    let (p, n, _) = signature_rational(m);
    p as i64 - n as i64
}

fn rat_det(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if pr != c {
            a.swap(c, pr);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    det
}

fn v2_rational(x: &BigRational) -> i64 {
    val_p(x.numer(), 2) as i64 - val_p(x.denom(), 2) as i64
}

pub fn verify_witness(w: &IsometryWitness) -> Result<WitnessReport> {
    let n = check_square(&w.matrix, "matrix")?;
    if n != w.lattice.rank() {
        return Err(Error::BadMatrix(format!(
            "matrix has size {n}, lattice has rank {}",
            w.lattice.rank()
        )));
    }
    let g = to_int(&w.lattice.gram);
    let t = to_int(&w.matrix);
    if mat_mul(&mat_mul(&transpose(&t), &g), &t) != g {
        return Err(Error::NotAnIsometry);
    }
    let chi = charpoly_berkowitz(&t, None);
    let determinant = det_bareiss(&t)
        .to_i64()
        .ok_or(Error::NotAnIsometry)?;
    let rad = chi.squarefree_part();
    let is_semisimple = eval_poly_at_matrix(&rad, &t)
        .iter()
        .flatten()
        .all(Zero::is_zero);
    let gq = to_rational(&g);
    let kernel_of = |p: &IntPoly| kernel_rational(&to_rational(&eval_poly_at_matrix(p, &t)), n);

    let index_map = if is_semisimple {
        Some(witness_index_map(&chi, &gq, &t, &kernel_of)?)
    } else {
        None
    };

    let (mut spinor_valuation_odd, mut spinor_parity_ok) = (None, None);
    if w.lattice.is_even_unimodular() {
        let mult = |c: i64| {
            let lin = IntPoly::linear(c);
            let mut h = chi.clone();
            let mut k = 0;
            while let Some(q) = h.div_exact(&lin) {
                h = q;
                k += 1;
            }
            (k, h)
        };
        let (n_minus, f) = mult(-1);
        let (_, f) = {
            let (kp, _) = mult(1);
            (kp, f.div_exact(&IntPoly::linear(1).pow(kp)).expect("exact"))
        };
        let eig = kernel_of(&IntPoly::linear(-1));
        if eig.len() == n_minus {
            let det_v = if eig.is_empty() {
                BigRational::one()
            } else {
                rat_det(&restricted_form(&gq, &eig))
            };
            let fm1 = f.eval_i64(-1);
            let odd = (v2_rational(&det_v) + val_p(&fm1, 2) as i64).is_odd();
            spinor_valuation_odd = Some(odd);
            spinor_parity_ok = Some((determinant == -1) == odd);
        }
    }
    Ok(WitnessReport {
        char_poly: chi,
        is_semisimple,
        determinant,
        index_map,
        spinor_valuation_odd,
        spinor_parity_ok,
    })
}

/// Signatures of the eigenspaces of a semisimple isometry. On ker g(t),
/// T = t + t⁻¹ is self-adjoint, so b((T − c)·, ·) has signature
/// Σ sign(β − c)·idx(β) and idx at β is half the jump across β.
fn witness_index_map(
    chi: &IntPoly,
    gq: &RatMatrix,
    t: &IntMatrix,
    kernel_of: &dyn Fn(&IntPoly) -> Vec<Vec<BigRational>>,
) -> Result<IndexMap> {
    let profile: SymmetricProfile = decompose(chi)?;
    let sig_on = |p: &IntPoly| signature_value(&restricted_form(gq, &kernel_of(p)));
    let at_x_minus_1 = (profile.n_plus > 0).then(|| sig_on(&IntPoly::linear(1)));
    let at_x_plus_1 = (profile.n_minus > 0).then(|| sig_on(&IntPoly::linear(-1)));
    let quads = real_quad_factors(&profile)?;
    let mut at = Vec::with_capacity(quads.len());
    if !quads.is_empty() {
        let tq = to_rational(t);
        let ginv = inverse_rational(gq).ok_or_else(|| Error::BadMatrix("gram is degenerate".into()))?;
        let tinv = rat_mul(&rat_mul(&ginv, &rat_transpose(&tq)), gq);
        let big_t: RatMatrix = tq
            .iter()
            .zip(&tinv)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        let gt = rat_mul(gq, &big_t);
        let mut kernels: Vec<Option<(Vec<Vec<BigRational>>, RatMatrix, RatMatrix)>> = vec![None; profile.i1.len()];
        for q in quads {
            let slot = &mut kernels[q.parent];
            if slot.is_none() {
                let basis = kernel_of(&profile.i1[q.parent].0);
                let bt: RatMatrix = basis.clone();
                let b = rat_transpose(&bt);
                let gram_w = rat_mul(&rat_mul(&bt, gq), &b);
                let t_w = rat_mul(&rat_mul(&bt, &gt), &b);
                *slot = Some((basis, gram_w, t_w));
            }
            let (_, gram_w, t_w) = slot.as_ref().expect("filled");
            let s_at = |c: &BigRational| {
                let m: RatMatrix = t_w
                    .iter()
                    .zip(gram_w)
                    .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - c * y).collect())
                    .collect();
                signature_value(&m)
            };
            let jump = s_at(&q.beta_interval.lo) - s_at(&q.beta_interval.hi);
            at.push(IndexEntry {
                parent: q.parent_poly,
                beta_interval: q.beta_interval,
                multiplicity: q.multiplicity,
                value: jump / 2,
            });
        }
    }
    Ok(IndexMap {
        at_x_minus_1,
        at_x_plus_1,
        at,
    })
}
