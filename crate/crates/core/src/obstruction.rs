//! Local existence tests, the obstruction graph and the decision engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_divisors, val_p};
use crate::error::{Error, Result};
use crate::finitefield::{factor_mod_p, star_symmetric_mod_p, FpPoly};
use crate::intpoly::IntPoly;
use crate::padic::{
    default_precision_budget, factor_over_zp, square_class, FactorizationStatus, PadicFactorization,
    Place,
};
use crate::structure::{
    check_index_map, check_sign_condition, check_square_condition, d_plus_minus, decompose,
    enumerate_index_maps, ConditionCheck, IndexMap, SymmetricProfile, Vertex,
};

/// Trial-division limit used before falling back to Pollard rho.
const TRIAL_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub p: u64,
    pub condition_a: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_b: Option<bool>,
    pub verdict: bool,
}

fn even_valuation(x: &BigInt, p: u64) -> bool {
    x.is_zero() || val_p(x, p) % 2 == 0
}

/// Existence of an F-stable even unimodular ℤ_p-lattice.
pub fn local_existence(f: &IntPoly, p: u64) -> Result<LocalReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let f1 = f.eval_i64(1);
    let fm1 = f.eval_i64(-1);
    let condition_a = even_valuation(&f1, p) && even_valuation(&fm1, p);
    let condition_b = (p == 2).then(|| {
        let mut prod = &f1 * &fm1;
        if prod.is_zero() {
            return true;
        }
        if (f.degree() / 2) % 2 == 1 {
            prod = -prod;
        }
        square_class(&BigRational::from_integer(prod), Place::Prime(2))
            .map(|c| c.class_id == 1)
            .unwrap_or(false)
    });
    Ok(LocalReport {
        p,
        condition_a,
        condition_b,
        verdict: condition_a && condition_b.unwrap_or(true),
    })
}

/// Primes at which local existence can fail: 2 and the primes dividing
/// the nonzero values among F(1), F(−1) and disc of the squarefree part.
pub fn relevant_primes(f: &IntPoly) -> Option<Vec<u64>> {
    let mut ps = BTreeSet::from([2u64]);
    let sf = f.squarefree_part();
    for x in [f.eval_i64(1), f.eval_i64(-1), sf.discriminant()] {
        if !x.is_zero() {
            ps.extend(prime_divisors(&x, TRIAL_LIMIT)?);
        }
    }
    Some(ps.into_iter().collect())
}

/// Finite superset of Π_{f,g}; `None` if a needed integer could not be
/// factored.
pub fn candidate_primes(profile: &SymmetricProfile, f: Vertex, g: Vertex) -> Result<Option<Vec<u64>>> {
    if f == g {
        return Err(Error::SameVertex);
    }
    let n = match (f, g) {
        (Vertex::I1(_), Vertex::I1(_)) => profile.vertex_poly(f).resultant(&profile.vertex_poly(g)),
        (Vertex::XMinus1, other) | (other, Vertex::XMinus1) => profile.vertex_poly(other).eval_i64(1),
        (Vertex::XPlus1, other) | (other, Vertex::XPlus1) => profile.vertex_poly(other).eval_i64(-1),
    };
    if n.is_zero() {
        return Ok(Some(vec![]));
    }
    Ok(prime_divisors(&n, TRIAL_LIMIT))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Member,
    NotMember,
    Unknown,
}

/// Caches ℤ_p-factorizations of vertex polynomials.
#[derive(Default)]
pub struct LocalCache {
    budget: Option<u32>,
    map: BTreeMap<(IntPoly, u64), Result<PadicFactorization>>,
}

impl LocalCache {
    pub fn with_budget(budget: u32) -> Self {
        LocalCache {
            budget: Some(budget),
            map: BTreeMap::new(),
        }
    }

    fn get(&mut self, f: &IntPoly, p: u64) -> &Result<PadicFactorization> {
        let budget = self.budget.unwrap_or_else(default_precision_budget);
        self.map
            .entry((f.clone(), p))
            .or_insert_with(|| factor_over_zp(f, p, budget))
    }
}

/// Residual irreducibles of the irreducible *-symmetric ℤ_p-factors of f,
/// and whether unresolved blocks could hide more.
fn symmetric_residuals(cache: &mut LocalCache, f: &IntPoly, p: u64) -> Result<(Vec<FpPoly>, bool)> {
    let fz = cache.get(f, p).clone()?;
    let res = fz
        .factors
        .iter()
        .filter(|x| x.irreducible && x.star_symmetric)
        .map(|x| x.residual.clone())
        .collect();
    let incomplete = fz.status == FactorizationStatus::PrecisionExceeded;
    Ok((res, incomplete))
}

/// Whether p ∈ Π_{f,g}.
pub fn pi_membership(
    profile: &SymmetricProfile,
    iota: Option<&IndexMap>,
    f: Vertex,
    g: Vertex,
    p: u64,
) -> Result<Membership> {
    pi_membership_cached(profile, iota, f, g, p, &mut LocalCache::default())
}

pub fn pi_membership_cached(
    profile: &SymmetricProfile,
    iota: Option<&IndexMap>,
    f: Vertex,
    g: Vertex,
    p: u64,
    cache: &mut LocalCache,
) -> Result<Membership> {
    if f == g {
        return Err(Error::SameVertex);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match (f, g) {
        (Vertex::I1(_), Vertex::I1(_)) => {
            let (fp, gp) = (profile.vertex_poly(f), profile.vertex_poly(g));
            // a shared *-symmetric irreducible mod p is necessary
            let ff = factor_mod_p(&fp, p)?;
            let gf = factor_mod_p(&gp, p)?;
            let shared: Vec<&FpPoly> = ff
                .iter()
                .map(|(h, _)| h)
                .filter(|h| gf.iter().any(|(k, _)| k == *h))
                .filter(|h| star_symmetric_mod_p(h).unwrap_or(false))
                .collect();
            if shared.is_empty() {
                return Ok(Membership::NotMember);
            }
            let (rf, inc_f) = symmetric_residuals(cache, &fp, p)?;
            let (rg, inc_g) = symmetric_residuals(cache, &gp, p)?;
            if rf.iter().any(|h| rg.contains(h)) {
                Ok(Membership::Member)
            } else if inc_f || inc_g {
                Ok(Membership::Unknown)
            } else {
                Ok(Membership::NotMember)
            }
        }
        (Vertex::XMinus1, Vertex::XPlus1) | (Vertex::XPlus1, Vertex::XMinus1) => {
            // both readings of the pair must agree on membership
            let a = type0_membership(profile, iota, f, g, p, cache)?;
            let b = type0_membership(profile, iota, g, f, p, cache)?;
            Ok(match (a, b) {
                (Membership::Member, Membership::Member) => Membership::Member,
                (Membership::NotMember, _) | (_, Membership::NotMember) => Membership::NotMember,
                _ => Membership::Unknown,
            })
        }
        (Vertex::I1(_), t0) => type0_membership(profile, iota, f, t0, p, cache),
        (t0, _) => type0_membership(profile, iota, g, t0, p, cache),
    }
}

/// p ∈ Π_{f, X∓1} for the type 0 vertex `t0`.
fn type0_membership(
    profile: &SymmetricProfile,
    iota: Option<&IndexMap>,
    f: Vertex,
    t0: Vertex,
    p: u64,
    cache: &mut LocalCache,
) -> Result<Membership> {
    let (n, x) = match t0 {
        Vertex::XMinus1 => (profile.n_plus, 1i64),
        Vertex::XPlus1 => (profile.n_minus, -1i64),
        Vertex::I1(_) => unreachable!("not a type 0 vertex"),
    };
    let mult_ok = match n {
        0 | 1 => false,
        2 => {
            let iota = iota.ok_or_else(|| {
                Error::InvalidIndexMap("an index map is needed when n_± = 2".into())
            })?;
            let (dp, dm) = d_plus_minus(profile, iota)?;
            let d = if x == 1 { dp } else { dm }.expect("n_± > 0");
            let cd = square_class(&d, Place::Prime(p))?;
            let cm1 = square_class(&BigRational::from_integer((-1).into()), Place::Prime(p))?;
            cd != cm1
        }
        _ => true,
    };
    if !mult_ok {
        return Ok(Membership::NotMember);
    }
    let fp = profile.vertex_poly(f);
    if !(fp.eval_i64(x).mod_floor(&BigInt::from(p))).is_zero() {
        return Ok(Membership::NotMember);
    }
    let lin = FpPoly::from_int_poly(&IntPoly::linear(x), p);
    let (res, incomplete) = symmetric_residuals(cache, &fp, p)?;
    if res.contains(&lin) {
        Ok(Membership::Member)
    } else if incomplete {
        Ok(Membership::Unknown)
    } else {
        Ok(Membership::NotMember)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub id: Vertex,
    pub poly: IntPoly,
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub a: Vertex,
    pub b: Vertex,
    pub witness_primes: Vec<u64>,
}

/// A pair whose membership could not be settled at some primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownEdge {
    pub a: Vertex,
    pub b: Vertex,
    /// Empty when the candidate primes themselves could not be found.
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub unknown_edges: Vec<UnknownEdge>,
    /// (ι(X−1), ι(X+1)) when some n_± = 2 makes edges depend on ι.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota_dependence: Option<(Option<i64>, Option<i64>)>,
    pub forced_zero: Vec<Vertex>,
}

fn vertex_label(profile: &SymmetricProfile, v: Vertex) -> String {
    match v {
        Vertex::XMinus1 => "x - 1".into(),
        Vertex::XPlus1 => "x + 1".into(),
        Vertex::I1(_) => profile.vertex_poly(v).to_string(),
    }
}

pub fn build_graph(profile: &SymmetricProfile, iota: Option<&IndexMap>) -> Result<ObstructionGraph> {
    build_graph_cached(profile, iota, &mut LocalCache::default())
}

pub fn build_graph_cached(
    profile: &SymmetricProfile,
    iota: Option<&IndexMap>,
    cache: &mut LocalCache,
) -> Result<ObstructionGraph> {
    let verts = profile.vertices();
    let mut edges = Vec::new();
    let mut unknown = Vec::new();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let Some(primes) = candidate_primes(profile, a, b)? else {
                unknown.push(UnknownEdge { a, b, primes: vec![] });
                continue;
            };
            let mut witness = Vec::new();
            let mut unsure = Vec::new();
            for p in primes {
                match pi_membership_cached(profile, iota, a, b, p, cache)? {
                    Membership::Member => witness.push(p),
                    Membership::Unknown => unsure.push(p),
                    Membership::NotMember => {}
                }
            }
            if !witness.is_empty() {
                edges.push(GraphEdge { a, b, witness_primes: witness });
            } else if !unsure.is_empty() {
                unknown.push(UnknownEdge { a, b, primes: unsure });
            }
        }
    }
    let depends = profile.n_plus == 2 || profile.n_minus == 2;
    let iota_dependence = if depends {
        iota.map(|m| (m.at_x_minus_1, m.at_x_plus_1))
    } else {
        None
    };
    let forced_zero = verts
        .iter()
        .copied()
        .filter(|v| matches!(v, Vertex::XMinus1 | Vertex::XPlus1) && profile.multiplicity(*v) == 1)
        .collect();
    Ok(ObstructionGraph {
        vertices: verts
            .iter()
            .map(|&v| GraphVertex {
                id: v,
                poly: profile.vertex_poly(v),
                label: vertex_label(profile, v),
                multiplicity: profile.multiplicity(v),
            })
            .collect(),
        edges,
        unknown_edges: unknown,
        iota_dependence,
        forced_zero,
    })
}

impl ObstructionGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph obstruction {\n");
        let idx = |v: Vertex| self.vertices.iter().position(|x| x.id == v).unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if self.forced_zero.contains(&v.id) { "box" } else { "ellipse" };
            let _ = writeln!(
                s,
                "  v{i} [label=\"{}\", shape={shape}];",
                v.label.replace('"', "\\\"")
            );
        }
        for e in &self.edges {
            let ps: Vec<String> = e.witness_primes.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", idx(e.a), idx(e.b), ps.join(","));
        }
        for e in &self.unknown_edges {
            let _ = writeln!(s, "  v{} -- v{} [style=dashed, label=\"?\"];", idx(e.a), idx(e.b));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionGroupInfo {
    /// Connected components over certain edges.
    pub components: Vec<Vec<Vertex>>,
    pub omega_rank: usize,
    pub forced_zero: Vec<Vertex>,
    /// True when unresolved pairs could merge components.
    pub has_unknown_edges: bool,
}

pub fn omega_info(graph: &ObstructionGraph) -> ObstructionGroupInfo {
    let n = graph.vertices.len();
    let idx = |v: Vertex| graph.vertices.iter().position(|x| x.id == v).unwrap();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for e in &graph.edges {
        let (a, b) = (find(&mut parent, idx(e.a)), find(&mut parent, idx(e.b)));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comps: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(graph.vertices[i].id);
    }
    let components: Vec<Vec<Vertex>> = comps.into_values().collect();
    ObstructionGroupInfo {
        omega_rank: components.len().saturating_sub(1),
        components,
        forced_zero: graph.forced_zero.clone(),
        has_unknown_edges: !graph.unknown_edges.is_empty(),
    }
}

/// Every component except at most one lies inside the forced-zero set.
/// On the certain-edge graph this is sound: extra true edges only merge
/// components.
pub fn forced_zero_rule(info: &ObstructionGroupInfo) -> bool {
    let free = info
        .components
        .iter()
        .filter(|c| !c.iter().all(|v| info.forced_zero.contains(v)))
        .count();
    free <= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Realizable,
    NotRealizable,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub rule: u8,
    pub tag: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota: Option<IndexMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<ObstructionGroupInfo>,
}

fn reason(rule: u8, tag: &str, detail: impl Into<String>) -> Reason {
    Reason {
        rule,
        tag: tag.into(),
        detail: detail.into(),
    }
}

/// Decides whether an even unimodular lattice of signature (r, s) carries
/// a semisimple isometry with characteristic polynomial F (and index map
/// ι when given).
pub fn decide(f: &IntPoly, r: usize, s: usize, iota: Option<&IndexMap>) -> Result<Verdict> {
    decide_with(f, r, s, iota, &mut LocalCache::default())
}

pub fn decide_with(
    f: &IntPoly,
    r: usize,
    s: usize,
    iota: Option<&IndexMap>,
    cache: &mut LocalCache,
) -> Result<Verdict> {
    if r + s != f.degree() {
        return Err(Error::DegreeMismatch(format!(
            "r + s = {} but deg F = {}",
            r + s,
            f.degree()
        )));
    }
    if (r as i64 - s as i64).rem_euclid(8) != 0 {
        return Err(Error::SignatureNotMod8(r as u64, s as u64));
    }
    // (1)
    let profile = decompose(f)?;
    let mut reasons = vec![reason(1, "star-symmetric", "F is *-symmetric of even degree")];
    // (2)
    match check_sign_condition(&profile, r, s)? {
        ConditionCheck::Fails(why) => {
            reasons.push(reason(2, "sign-condition", format!("fails: {why}")));
            return Ok(Verdict {
                status: Status::NotRealizable,
                reasons,
                iota: None,
                omega: None,
            });
        }
        ConditionCheck::Holds => reasons.push(reason(2, "sign-condition", "holds")),
    }
    // (3)
    if let Some(m) = iota {
        check_index_map(&profile, r, s, m)?;
        reasons.push(reason(3, "index-map", "ι lies in Idx_{r,s}(F)"));
    }
    // (4)
    let sq = check_square_condition(f);
    if !sq.is_empty() {
        reasons.push(reason(4, "square-condition", format!("fails: {sq:?}")));
        return Ok(Verdict {
            status: Status::NotRealizable,
            reasons,
            iota: iota.cloned(),
            omega: None,
        });
    }
    reasons.push(reason(4, "square-condition", "holds"));
    // (5)
    let depends = profile.n_plus == 2 || profile.n_minus == 2;
    let candidates: Vec<Option<IndexMap>> = match iota {
        Some(m) => vec![Some(m.clone())],
        None if depends => {
            let all = enumerate_index_maps(&profile, r, s)?;
            if all.is_empty() {
                reasons.push(reason(5, "index-map", "Idx_{r,s}(F) is empty"));
                return Ok(Verdict {
                    status: Status::NotRealizable,
                    reasons,
                    iota: None,
                    omega: None,
                });
            }
            all.into_iter().map(Some).collect()
        }
        None => vec![None],
    };
    let mut last_info = None;
    for cand in &candidates {
        let graph = build_graph_cached(&profile, cand.as_ref(), cache)?;
        let info = omega_info(&graph);
        if forced_zero_rule(&info) {
            reasons.push(reason(
                5,
                "forced-zero",
                format!(
                    "{} component(s), all but at most one inside the forced-zero set {:?}",
                    info.components.len(),
                    info.forced_zero
                ),
            ));
            return Ok(Verdict {
                status: Status::Realizable,
                reasons,
                iota: cand.clone(),
                omega: Some(info),
            });
        }
        last_info = Some(info);
    }
    let info = last_info.expect("at least one candidate");
    reasons.push(reason(
        5,
        "forced-zero",
        format!("not applicable: omega rank {}", info.omega_rank),
    ));
    // (6)
    if iota.is_none() && r == s && profile.n_plus != 1 && profile.n_minus != 1 {
        reasons.push(reason(
            6,
            "balanced-signature",
            "signature (n, n) with neither X-1 nor X+1 of multiplicity 1",
        ));
        return Ok(Verdict {
            status: Status::Realizable,
            reasons,
            iota: None,
            omega: Some(info),
        });
    }
    // (7)
    reasons.push(reason(
        7,
        "indeterminate",
        "the obstruction map is not determined by the forced rules",
    ));
    Ok(Verdict {
        status: Status::Indeterminate,
        reasons,
        iota: iota.cloned(),
        omega: Some(info),
    })
}
