//! Exact arithmetic on vertex types: vertex counts from the Euler relation,
//! face vectors, the local admissibility filters, and the census of all
//! candidate (n, type) pairs for a negative Euler characteristic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::exec::Exec;
use crate::vertex_type::{canonical_cyclic, VertexType};

type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Prop31Case {
    /// A unique odd size occurring as a single run of length 2.
    I,
    /// A unique odd size occurring once, between two different sizes.
    II,
    /// The form `[p^1,q^m,p^1,r^n]` with `p, q, r` distinct and `p` odd.
    III,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "String")]
pub enum Rejection {
    /// The Euler relation has no positive solution (`χ` of the wrong sign).
    Spherical,
    NonIntegral,
    VertexFloor,
    FaceCountFloor,
    Prop31(Prop31Case),
    LinkBound {
        link: u32,
        n: u64,
    },
    CompletenessBound,
    PatchBound {
        required: u64,
        n: u64,
    },
    StaticExclusion,
}

impl Rejection {
    pub fn tag(&self) -> &'static str {
        match self {
            Rejection::Spherical => "spherical",
            Rejection::NonIntegral => "non_integral",
            Rejection::VertexFloor => "vertex_floor",
            Rejection::FaceCountFloor => "face_count_floor",
            Rejection::Prop31(Prop31Case::I) => "prop31(i)",
            Rejection::Prop31(Prop31Case::II) => "prop31(ii)",
            Rejection::Prop31(Prop31Case::III) => "prop31(iii)",
            Rejection::LinkBound { .. } => "link_bound",
            Rejection::CompletenessBound => "completeness_bound",
            Rejection::PatchBound { .. } => "patch_bound",
            Rejection::StaticExclusion => "static_exclusion",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::LinkBound { link, n } => write!(f, "link_bound ({link} > {n})"),
            Rejection::PatchBound { required, n } => write!(f, "patch_bound ({required} > {n})"),
            other => f.write_str(other.tag()),
        }
    }
}

impl From<Rejection> for String {
    fn from(r: Rejection) -> String {
        r.to_string()
    }
}

/// `1 - d/2 + Σ 1/s_j`; a vertex of the type on `n` vertices gives
/// `χ = n · denominator`.
fn euler_density(t: &VertexType) -> Q {
    let d = t.degree() as i64;
    let mut q = Q::from_integer(1) - Q::new(d, 2);
    for &s in t.sizes() {
        q += Q::new(1, s as i64);
    }
    q
}

/// The unique `n` with `χ = n(1 - d/2 + Σ 1/s_j)`, if a positive integer.
pub fn vertex_count(t: &VertexType, chi: i64) -> Result<u64, Rejection> {
    let den = euler_density(t);
    if den == Q::from_integer(0) || (den > Q::from_integer(0)) != (chi > 0) {
        return Err(Rejection::Spherical);
    }
    let n = Q::from_integer(chi) / den;
    if !n.is_integer() {
        return Err(Rejection::NonIntegral);
    }
    Ok(n.to_integer() as u64)
}

/// Number of faces of each size: `x_s = n · (occurrences of s) / s`.
pub fn face_vector(t: &VertexType, n: u64) -> Result<BTreeMap<u32, u64>, Rejection> {
    let mut out = BTreeMap::new();
    for (s, m) in t.multiplicities() {
        let total = n * m as u64;
        if !total.is_multiple_of(s as u64) {
            return Err(Rejection::NonIntegral);
        }
        out.insert(s, total / s as u64);
    }
    Ok(out)
}

/// The three run-pattern conditions under which no semi-equivelar map of
/// the type exists. Indices of the cyclic run-length form are taken mod k.
pub fn prop31_check(t: &VertexType) -> Result<(), Prop31Case> {
    let runs = t.runs();
    let k = runs.len();
    let unique = |i: usize| (0..k).all(|j| j == i || runs[j].0 != runs[i].0);
    for i in 0..k {
        let (p, n) = runs[i];
        if n == 2 && p % 2 == 1 && unique(i) {
            return Err(Prop31Case::I);
        }
    }
    for i in 0..k {
        let (p, n) = runs[i];
        if n == 1 && p % 2 == 1 && unique(i) && runs[(i + k - 1) % k].0 != runs[(i + 1) % k].0 {
            return Err(Prop31Case::II);
        }
    }
    if k == 4 {
        for i in 0..4 {
            let (a, b, c, d) = (
                runs[i],
                runs[(i + 1) % 4],
                runs[(i + 2) % 4],
                runs[(i + 3) % 4],
            );
            if a.1 == 1 && c.1 == 1 && a.0 == c.0 && a.0 % 2 == 1 && b.0 != d.0 {
                return Err(Prop31Case::III);
            }
        }
    }
    Ok(())
}

/// Counting obstructions at one vertex against the vertex budget `n`.
pub fn local_obstructions(
    t: &VertexType,
    n: u64,
    apply_patch_bound: bool,
) -> Result<(), Rejection> {
    let link = t.link_length();
    let closed_star = link as u64 + 1;
    if closed_star > n {
        return Err(Rejection::LinkBound {
            link: closed_star as u32,
            n,
        });
    }
    if closed_star == n && t.degree() as u64 != n - 1 {
        return Err(Rejection::CompletenessBound);
    }
    if apply_patch_bound {
        if let Some(required) = patch_requirement(t) {
            if required > n {
                return Err(Rejection::PatchBound { required, n });
            }
        }
    }
    Ok(())
}

/// For the cyclic pattern `(3,q,3,q)`: around one q-gon every edge meets a
/// triangle, and the q-gons through the triangle apexes are pairwise
/// distinct, so at least `q + (q-1) + (q-2) + (q-3) = 4q - 6` vertices are
/// forced.
fn patch_requirement(t: &VertexType) -> Option<u64> {
    match *t.sizes() {
        [3, q, 3, r] if q == r && q > 3 => Some(4 * q as u64 - 6),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationParams {
    pub chi: i64,
    pub min_vertices: u64,
    pub min_face_count: u64,
    /// Drop the types listed in [`static_exclusions`].
    pub apply_exclusions: bool,
    /// Also apply the `(3,q,3,q)` patch bound.
    pub apply_patch_bound: bool,
}

impl EnumerationParams {
    pub fn new(chi: i64) -> Self {
        EnumerationParams {
            chi,
            min_vertices: 12,
            min_face_count: 3,
            apply_exclusions: true,
            apply_patch_bound: false,
        }
    }
}

/// Types removed by fiat: `[3^2,4^1,3^2,4^1]` is rejected in the source
/// census although none of the three run conditions applies to it.
pub fn static_exclusions() -> Vec<VertexType> {
    vec![VertexType::new(&[3, 3, 4, 3, 3, 4]).unwrap()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCensusEntry {
    pub n: u64,
    #[serde(rename = "type")]
    pub vertex_type: VertexType,
    pub face_vector: BTreeMap<u32, u64>,
    pub rejection: Option<Rejection>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Census {
    pub accepted: Vec<TypeCensusEntry>,
    /// Rejected types with a positive integral vertex count.
    pub rejected: Vec<TypeCensusEntry>,
}

/// Applies the filter chain to one type; `Ok` carries the accepted entry.
pub fn evaluate(
    t: &VertexType,
    params: &EnumerationParams,
) -> Result<TypeCensusEntry, (Option<u64>, Rejection)> {
    let n = vertex_count(t, params.chi).map_err(|r| (None, r))?;
    let fail = |r| (Some(n), r);
    if n < params.min_vertices {
        return Err(fail(Rejection::VertexFloor));
    }
    let fv = face_vector(t, n).map_err(fail)?;
    if fv.values().any(|&x| x < params.min_face_count) {
        return Err(fail(Rejection::FaceCountFloor));
    }
    prop31_check(t).map_err(|c| fail(Rejection::Prop31(c)))?;
    local_obstructions(t, n, params.apply_patch_bound).map_err(fail)?;
    if params.apply_exclusions && static_exclusions().contains(t) {
        return Err(fail(Rejection::StaticExclusion));
    }
    Ok(TypeCensusEntry {
        n,
        vertex_type: t.clone(),
        face_vector: fv,
        rejection: None,
    })
}

/// Largest vertex degree worth trying: every face has at least 3 sides, so
/// `χ ≤ n(6-d)/6`, and `n` is at least the vertex floor and at least
/// `d + 1` (the closed star of a vertex).
pub fn max_degree(params: &EnumerationParams) -> usize {
    let a = params.chi.unsigned_abs();
    let fits = |d: u64| d <= 6 || (d - 6) * params.min_vertices.max(d + 1) <= 6 * a;
    let mut d = 3u64;
    while fits(d + 1) {
        d += 1;
    }
    d as usize
}

/// Bound on the largest face size in a type of degree `d` that can survive
/// the link bound. With sizes sorted `s_1 ≤ … ≤ s_d`, the closed star has
/// `L ≥ s_d` vertices and `n = |χ|/E` with `E = d/2 - 1 - Σ 1/s_j`, so
/// `s_d · E ≤ |χ|`. If `s_{d-1} ≥ t = ⌈24/(d-2)⌉` then `E ≥ (d-2)/12`;
/// otherwise the first `d-1` sizes lie in `[3, t)` and
/// `s_d ≤ (|χ|+1)/E'` with `E'` computed from those `d-1` sizes.
pub fn size_upper_bound(d: usize, params: &EnumerationParams) -> u32 {
    assert!(d >= 3);
    let a = params.chi.unsigned_abs() as i64;
    let dd = d as i64 - 2;
    let t = (24 + dd - 1) / dd;
    let mut bound = Q::new(12 * a, dd).to_integer();
    let mut prefix = vec![3i64; d - 1];
    loop {
        let mut e = Q::new(d as i64, 2) - Q::from_integer(1);
        for &s in &prefix {
            e -= Q::new(1, s);
        }
        if e > Q::from_integer(0) {
            bound = bound.max((Q::from_integer(a + 1) / e).to_integer());
        }
        // Next non-decreasing prefix with entries in [3, t).
        let Some(i) = (0..prefix.len()).rev().find(|&i| prefix[i] + 1 < t) else {
            break;
        };
        let v = prefix[i] + 1;
        for x in &mut prefix[i..] {
            *x = v;
        }
    }
    bound.max(3) as u32
}

/// Non-decreasing sequences of length `d` with entries in `[3, b]`.
fn multisets(d: usize, b: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(d: usize, lo: u32, b: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for s in lo..=b {
            cur.push(s);
            rec(d, s, b, cur, out);
            cur.pop();
        }
    }
    rec(d, 3, b, &mut cur, &mut out);
    out
}

/// Distinct cyclic arrangements (up to rotation and reflection) of a
/// multiset of sizes.
pub fn arrangements(multiset: &[u32]) -> Vec<VertexType> {
    let mut found = BTreeSet::new();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &s in multiset {
        *counts.entry(s).or_insert(0) += 1;
    }
    let first = multiset[0];
    *counts.get_mut(&first).unwrap() -= 1;
    let mut cur = vec![first];
    fn rec(
        len: usize,
        counts: &mut BTreeMap<u32, usize>,
        cur: &mut Vec<u32>,
        found: &mut BTreeSet<Vec<u32>>,
    ) {
        if cur.len() == len {
            found.insert(canonical_cyclic(cur));
            return;
        }
        let keys: Vec<u32> = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, _)| k)
            .collect();
        for k in keys {
            *counts.get_mut(&k).unwrap() -= 1;
            cur.push(k);
            rec(len, counts, cur, found);
            cur.pop();
            *counts.get_mut(&k).unwrap() += 1;
        }
    }
    rec(multiset.len(), &mut counts, &mut cur, &mut found);
    found
        .into_iter()
        .map(|s| VertexType::new(&s).unwrap())
        .collect()
}

/// Every type of degree 3 and up that passes the filter chain for the given
/// parameters, sorted by `(n, canonical sizes)`, with the rejected ones.
pub fn enumerate_types(params: &EnumerationParams, exec: Exec) -> Census {
    assert!(
        params.chi < 0,
        "census is defined for negative Euler characteristic"
    );
    let mut work: Vec<Vec<u32>> = Vec::new();
    for d in 3..=max_degree(params) {
        let b = size_upper_bound(d, params);
        work.extend(multisets(d, b));
    }
    let results = exec.map(&work, |ms| {
        let mut acc = Vec::new();
        let mut rej = Vec::new();
        let probe = VertexType::new(ms).unwrap();
        // All arrangements share n and face vector; skip hopeless multisets early.
        match vertex_count(&probe, params.chi) {
            Err(_) => return (acc, rej),
            Ok(n) if n < params.min_vertices => return (acc, rej),
            _ => {}
        }
        for t in arrangements(ms) {
            match evaluate(&t, params) {
                Ok(e) => acc.push(e),
                Err((Some(n), r)) => rej.push(TypeCensusEntry {
                    n,
                    face_vector: face_vector(&t, n).unwrap_or_default(),
                    vertex_type: t,
                    rejection: Some(r),
                }),
                Err((None, _)) => {}
            }
        }
        (acc, rej)
    });
    let mut census = Census::default();
    for (a, r) in results {
        census.accepted.extend(a);
        census.rejected.extend(r);
    }
    let key = |e: &TypeCensusEntry| (e.n, e.vertex_type.sizes().to_vec());
    census.accepted.sort_by_key(key);
    census.rejected.sort_by_key(key);
    census
}

/// Euler characteristic recomputed from an entry: `n - dn/2 + Σ_s x_s`.
pub fn recomputed_chi(entry: &TypeCensusEntry) -> Q {
    let n = entry.n as i64;
    let d = entry.vertex_type.degree() as i64;
    let f2: i64 = entry.face_vector.values().map(|&x| x as i64).sum();
    Q::from_integer(n) - Q::new(d * n, 2) + Q::from_integer(f2)
}
