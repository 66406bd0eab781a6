//! Exhaustive generation of semi-equivelar maps of a given type, up to
//! isomorphism, and the block invariants used to tell the results apart.

mod blocks;
mod search;

use std::collections::BTreeMap;
use std::sync::atomic::Ordering;

use thiserror::Error;

use crate::arith::{self, Rejection};
use crate::complex::FlagSystem;
use crate::exec::Exec;
use crate::map::PolyhedralMap;
use crate::symmetry::{canonical_certificate, Certificate};
use crate::vertex_type::VertexType;

pub use blocks::{block_certificate, blocks, Block, BlockCycleCertificate};

use search::{Anchors, Budget, State};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Anchored when the largest face size occurs once in the type.
    #[default]
    Auto,
    Anchored,
    Generic,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub strategy: Strategy,
    pub budget: u64,
    pub exec: Exec,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            strategy: Strategy::Auto,
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("type {0} has no admissible vertex count for χ = {1} ({2})")]
    NoVertexCount(VertexType, i64, &'static str),
    #[error("anchored search needs the largest face size of {0} to occur once")]
    NotAnchorable(VertexType),
    #[error("node budget of {budget} exhausted; {} map(s) found so far, result incomplete", partial.len())]
    BudgetExhausted {
        budget: u64,
        partial: Vec<PolyhedralMap>,
    },
}

#[derive(Debug, Clone)]
pub struct Classification {
    /// One representative per isomorphism class, sorted by certificate.
    pub maps: Vec<PolyhedralMap>,
    pub certificates: Vec<Certificate>,
    /// Search nodes visited.
    pub nodes: u64,
    pub strategy: Strategy,
}

/// Whether the anchored strategy applies: the largest face size occurs once
/// at each vertex, so its faces partition the vertex set.
pub fn anchor_size(t: &VertexType) -> Option<u32> {
    let max = *t.sizes().iter().max()?;
    (t.sizes().iter().filter(|&&s| s == max).count() == 1 && max > 3).then_some(max)
}

/// Relabels a map whose `p`-gons partition its vertices so that the `p`-gons
/// become `[1..=p]`, `[p+1..=2p]`, …, in an order fixed by the canonical
/// traversal. Isomorphic maps give identical results. `None` when the
/// `p`-gons do not partition the vertex set.
pub fn anchored_normal_form(map: &PolyhedralMap, p: usize) -> Option<PolyhedralMap> {
    let n = map.num_vertices();
    let order = FlagSystem::new(map.faces(), n).canonical_vertex_order();
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut anchors: Vec<&Vec<usize>> = map.faces().iter().filter(|f| f.len() == p).collect();
    let mut covered = vec![false; n];
    for f in &anchors {
        for &v in f.iter() {
            if std::mem::replace(&mut covered[v], true) {
                return None;
            }
        }
    }
    if covered.contains(&false) {
        return None;
    }
    anchors.sort_by_key(|f| f.iter().map(|&v| rank[v]).min());
    let mut label = vec![0u32; n];
    for (k, f) in anchors.iter().enumerate() {
        let i = (0..p).min_by_key(|&i| rank[f[i]]).unwrap();
        let fwd = rank[f[(i + 1) % p]] < rank[f[(i + p - 1) % p]];
        for j in 0..p {
            let v = if fwd {
                f[(i + j) % p]
            } else {
                f[(i + p - j) % p]
            };
            label[v] = (k * p + j + 1) as u32;
        }
    }
    let relabeled = map
        .relabeled(|l| label[map.index_of(l).expect("label")])
        .ok()?;
    PolyhedralMap::from_faces(&relabeled.standard_faces()).ok()
}

/// All polyhedral maps of type `t` on a closed surface of Euler
/// characteristic `chi`, one per isomorphism class.
pub fn classify_type(
    t: &VertexType,
    chi: i64,
    opts: &ClassifyOptions,
) -> Result<Classification, ClassifyError> {
    let n = arith::vertex_count(t, chi)
        .map_err(|r| ClassifyError::NoVertexCount(t.clone(), chi, r.tag()))?;
    let fv: BTreeMap<u32, u64> = arith::face_vector(t, n)
        .map_err(|r: Rejection| ClassifyError::NoVertexCount(t.clone(), chi, r.tag()))?;
    let counts: Vec<(u32, u64)> = fv.into_iter().collect();
    let strategy = match opts.strategy {
        Strategy::Auto if anchor_size(t).is_some() => Strategy::Anchored,
        Strategy::Auto => Strategy::Generic,
        s => s,
    };
    let anchors = match strategy {
        Strategy::Anchored => {
            let p = anchor_size(t).ok_or_else(|| ClassifyError::NotAnchorable(t.clone()))?;
            let count = counts
                .iter()
                .find(|(s, _)| *s == p)
                .map(|&(_, x)| x as usize)
                .unwrap_or(0);
            Some(Anchors {
                p: p as usize,
                count,
            })
        }
        _ => None,
    };
    // The closed star of one vertex does not fit: provably no maps.
    if 1 + t.link_length() as u64 > n {
        return Ok(Classification {
            maps: Vec::new(),
            certificates: Vec::new(),
            nodes: 0,
            strategy,
        });
    }
    let root = State::new(t, n as usize, &counts, anchors);
    let budget = Budget::new(opts.budget);

    // Each completion is certified on arrival so only one map per class is
    // kept in memory.
    let accept = |found: &mut BTreeMap<Certificate, PolyhedralMap>, faces: &[Vec<u32>]| {
        let Ok(map) = PolyhedralMap::from_faces(faces) else {
            return;
        };
        if map.semi_equivelar_type().as_ref() == Some(t) && map.euler_characteristic() == chi {
            found.entry(canonical_certificate(&map)).or_insert(map);
        }
    };

    // Expand breadth-first until there is enough work to spread out.
    let want = if opts.exec.is_parallel() { 256 } else { 1 };
    let mut found = BTreeMap::new();
    let mut frontier = vec![root];
    while frontier.len() < want && !frontier.is_empty() {
        let mut next = Vec::new();
        for s in frontier {
            budget.used.fetch_add(1, Ordering::Relaxed);
            match s.children() {
                Some(kids) => next.extend(kids),
                None if s.is_solution() => accept(&mut found, s.faces()),
                None => {}
            }
        }
        frontier = next;
    }
    let results = opts.exec.map(&frontier, |s| {
        let mut s = s.clone();
        let mut out = BTreeMap::new();
        let done = s.dfs(&budget, &mut |faces| accept(&mut out, faces));
        (done, out)
    });
    let complete =
        results.iter().all(|(done, _)| *done) && !budget.exhausted.load(Ordering::Relaxed);
    for (_, out) in results {
        for (c, m) in out {
            found.entry(c).or_insert(m);
        }
    }
    let certified: Vec<(Certificate, PolyhedralMap)> = found.into_iter().collect();
    let nodes = budget.used.load(Ordering::Relaxed).min(opts.budget.max(1));
    if !complete {
        return Err(ClassifyError::BudgetExhausted {
            budget: opts.budget,
            partial: certified.into_iter().map(|(_, m)| m).collect(),
        });
    }
    let (certificates, maps) = certified.into_iter().unzip();
    Ok(Classification {
        maps,
        certificates,
        nodes,
        strategy,
    })
}
