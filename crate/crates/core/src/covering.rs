//! Cyclic covers by cut-and-glue: cut a map open along a cycle into a piece
//! with two boundary copies A and B of the cycle, then glue m copies of the
//! piece in a ring, B of copy k onto A of copy k+1.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::complex::FlagSystem;
use crate::exec::Exec;
use crate::map::{check_intersections, connected, edge_key, MapError, PolyhedralMap};
use crate::perm::VertexPermutation;
use crate::symmetry::{automorphism_group, identify_group, AutGroup, GroupId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("a cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {0} is not in the map")]
    UnknownVertex(u32),
    #[error("vertex {0} repeats in the cycle")]
    RepeatedVertex(u32),
    #[error("[{0},{1}] is not an edge")]
    NotAnEdge(u32, u32),
    #[error("cycle is one-sided: the two sides cannot be told apart consistently")]
    OneSided,
    #[error("face {0} lies on both sides of the cycle")]
    FaceConflict(usize),
    #[error("cutting along the cycle disconnects the map")]
    Separating,
    #[error("cut piece is not a valid bordered map: {0}")]
    BadPiece(String),
    #[error("fold count must be at least 1")]
    ZeroFold,
    #[error("glued complex is not a polyhedral map: {0}")]
    Invalid(#[from] MapError),
    #[error("malformed cycle `{0}`")]
    Malformed(String),
}

/// A simple closed walk `(v_1, ..., v_r)` in the edge graph, over labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CycleSpec {
    vertices: Vec<u32>,
}

impl CycleSpec {
    pub fn new(vertices: Vec<u32>) -> Self {
        CycleSpec { vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Least representative under rotation and reflection.
    pub fn normalized(&self) -> CycleSpec {
        let r = self.vertices.len();
        let Some(start) = (0..r).min_by_key(|&i| self.vertices[i]) else {
            return self.clone();
        };
        let fwd: Vec<u32> = (0..r).map(|i| self.vertices[(start + i) % r]).collect();
        let bwd: Vec<u32> = (0..r).map(|i| self.vertices[(start + r - i) % r]).collect();
        CycleSpec {
            vertices: fwd.min(bwd),
        }
    }

    /// Checks the cycle against `map` and returns it over vertex indices.
    fn resolve(&self, map: &PolyhedralMap) -> Result<Vec<usize>, CoverError> {
        let r = self.vertices.len();
        if r < 3 {
            return Err(CoverError::TooShort(r));
        }
        let mut out = Vec::with_capacity(r);
        for &l in &self.vertices {
            let v = map.index_of(l).ok_or(CoverError::UnknownVertex(l))?;
            if out.contains(&v) {
                return Err(CoverError::RepeatedVertex(l));
            }
            out.push(v);
        }
        for i in 0..r {
            let (a, b) = (out[i], out[(i + 1) % r]);
            if map.edge_faces(a, b).is_none() {
                return Err(CoverError::NotAnEdge(map.label(a), map.label(b)));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for CycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for CycleSpec {
    type Err = CoverError;

    /// Comma-separated labels, optionally in parentheses: `0,6,10`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let vertices = t
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CoverError::Malformed(s.to_string()))?;
        Ok(CycleSpec { vertices })
    }
}

/// A map cut open along a cycle. Vertex `i` of the piece is a copy of
/// `origin[i]` of the original map; `boundary_a[i]` and `boundary_b[i]` are
/// the two copies of the i-th cycle vertex.
#[derive(Debug, Clone)]
pub struct BorderedMap {
    labels: Vec<u32>,
    origin: Vec<usize>,
    faces: Vec<Vec<usize>>,
    boundary_a: Vec<usize>,
    boundary_b: Vec<usize>,
}

impl BorderedMap {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn labeled_faces(&self) -> Vec<Vec<u32>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&v| self.labels[v]).collect())
            .collect()
    }

    pub fn boundary_a(&self) -> &[usize] {
        &self.boundary_a
    }

    pub fn boundary_b(&self) -> &[usize] {
        &self.boundary_b
    }

    pub fn num_edges(&self) -> usize {
        let mut es: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| (0..f.len()).map(move |i| edge_key(f[i], f[(i + 1) % f.len()])))
            .collect();
        es.sort_unstable();
        es.dedup();
        es.len()
    }

    pub fn flag_system(&self) -> FlagSystem {
        FlagSystem::new(&self.faces, self.labels.len())
    }

    /// Checks the bordered-map invariants: boundary edges are exactly the
    /// edges of the two boundary cycles and lie in one face, all other edges
    /// in two, faces meet properly, and the piece is connected.
    pub fn validate(&self) -> Result<(), String> {
        let mut count = std::collections::BTreeMap::new();
        for f in &self.faces {
            let k = f.len();
            for i in 0..k {
                *count
                    .entry(edge_key(f[i], f[(i + 1) % k]))
                    .or_insert(0usize) += 1;
            }
        }
        let r = self.boundary_a.len();
        let mut boundary = std::collections::BTreeSet::new();
        for cyc in [&self.boundary_a, &self.boundary_b] {
            if cyc.len() != r {
                return Err("boundary cycles differ in length".into());
            }
            for i in 0..r {
                boundary.insert(edge_key(cyc[i], cyc[(i + 1) % r]));
            }
        }
        for (e, &c) in &count {
            let want = if boundary.contains(e) { 1 } else { 2 };
            if c != want {
                return Err(format!(
                    "edge [{},{}] in {c} face(s), expected {want}",
                    self.labels[e.0], self.labels[e.1]
                ));
            }
        }
        if boundary.iter().any(|e| !count.contains_key(e)) {
            return Err("boundary edge missing from faces".into());
        }
        check_intersections(&self.faces, self.labels.len())
            .map_err(|(f, g, _)| format!("faces {f} and {g} meet improperly"))?;
        let mut adj = vec![Vec::new(); self.labels.len()];
        for &(a, b) in count.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        if !connected(&adj) {
            return Err("piece is disconnected".into());
        }
        Ok(())
    }
}

/// The faces at `v` split by the two cycle edges `v-prev` and `v-next`:
/// the first arc runs in rotation order from after `prev` up to `next`.
fn rotation_arcs(map: &PolyhedralMap, v: usize, prev: usize, next: usize) -> [Vec<usize>; 2] {
    let rot = map.rotation(v);
    let nb = map.neighbours(v);
    let d = rot.len();
    let a = nb
        .iter()
        .position(|&x| x == prev)
        .expect("cycle edge at vertex");
    let b = nb
        .iter()
        .position(|&x| x == next)
        .expect("cycle edge at vertex");
    let mut first = Vec::new();
    let mut j = (a + 1) % d;
    loop {
        first.push(rot[j]);
        if j == b {
            break;
        }
        j = (j + 1) % d;
    }
    let second = rot.iter().copied().filter(|f| !first.contains(f)).collect();
    [first, second]
}

pub fn cut_along(map: &PolyhedralMap, cycle: &CycleSpec) -> Result<BorderedMap, CoverError> {
    let cyc = cycle.resolve(map)?;
    let r = cyc.len();
    let n = map.num_vertices();
    let arcs: Vec<[Vec<usize>; 2]> = (0..r)
        .map(|i| rotation_arcs(map, cyc[i], cyc[(i + r - 1) % r], cyc[(i + 1) % r]))
        .collect();

    // Which arc at each cycle vertex is side A; propagate along cycle edges.
    let mut a_arc = vec![0usize; r];
    for i in 0..r {
        let j = (i + 1) % r;
        let side = &arcs[i][a_arc[i]];
        let [f1, f2] = map.edge_faces(cyc[i], cyc[j]).unwrap();
        let f = if side.contains(&f1) { f1 } else { f2 };
        let k = if arcs[j][0].contains(&f) { 0 } else { 1 };
        if j == 0 {
            if k != a_arc[0] {
                return Err(CoverError::OneSided);
            }
        } else {
            a_arc[j] = k;
        }
    }

    let mut side: Vec<Option<bool>> = vec![None; map.num_faces()];
    for i in 0..r {
        for (is_b, arc) in [(false, &arcs[i][a_arc[i]]), (true, &arcs[i][1 - a_arc[i]])] {
            for &f in arc {
                match side[f] {
                    Some(s) if s != is_b => return Err(CoverError::FaceConflict(f)),
                    _ => side[f] = Some(is_b),
                }
            }
        }
    }

    let max_label = *map.labels().last().unwrap();
    let mut labels = map.labels().to_vec();
    let mut origin: Vec<usize> = (0..n).collect();
    let mut copy = vec![usize::MAX; n];
    for (i, &v) in cyc.iter().enumerate() {
        copy[v] = n + i;
        labels.push(max_label + 1 + i as u32);
        origin.push(v);
    }
    let b_side: Vec<bool> = side.iter().map(|s| *s == Some(true)).collect();
    let faces: Vec<Vec<usize>> = map
        .faces()
        .iter()
        .zip(&b_side)
        .map(|(f, &b)| {
            f.iter()
                .map(|&v| {
                    if b && copy[v] != usize::MAX {
                        copy[v]
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let piece = BorderedMap {
        labels,
        origin,
        faces,
        boundary_a: cyc.clone(),
        boundary_b: (0..r).map(|i| n + i).collect(),
    };
    let mut adj = vec![Vec::new(); piece.num_vertices()];
    for f in &piece.faces {
        let k = f.len();
        for i in 0..k {
            adj[f[i]].push(f[(i + 1) % k]);
            adj[f[(i + 1) % k]].push(f[i]);
        }
    }
    if !connected(&adj) {
        return Err(CoverError::Separating);
    }
    piece.validate().map_err(CoverError::BadPiece)?;
    Ok(piece)
}

/// Simple cycles of length `3..=max_len` along which the map can be cut
/// into a connected bordered piece, normalized and sorted.
pub fn admissible_cycles(map: &PolyhedralMap, max_len: usize, exec: Exec) -> Vec<CycleSpec> {
    let n = map.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in map.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut candidates = Vec::new();
    // Each cycle is generated once: from its least vertex, with the second
    // vertex smaller than the last.
    fn extend(
        adj: &[Vec<usize>],
        max_len: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let s = path[0];
        let last = *path.last().unwrap();
        for &w in &adj[last] {
            if w == s && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            } else if w > s && !path.contains(&w) && path.len() < max_len {
                path.push(w);
                extend(adj, max_len, path, out);
                path.pop();
            }
        }
    }
    for s in 0..n {
        extend(&adj, max_len, &mut vec![s], &mut candidates);
    }
    let mut out = exec.filter_map(&candidates, |c| {
        let spec = CycleSpec::new(c.iter().map(|&v| map.label(v)).collect());
        cut_along(map, &spec).ok().map(|_| spec.normalized())
    });
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.dedup();
    out
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub cover: PolyhedralMap,
    pub m: usize,
    pub deck_rotation: VertexPermutation,
    pub predicted_group: GroupId,
    pub verified_group: Option<GroupId>,
}

impl CoverReport {
    /// Computes the cover's automorphism group by brute force and records
    /// its identification in `verified_group`.
    pub fn verify(&mut self, exec: Exec) -> AutGroup {
        let group = automorphism_group(&self.cover, exec);
        self.verified_group = Some(identify_group(&group));
        group
    }
}

/// Glues `m` copies of the cut piece in a ring. Vertex `v` (index) of copy
/// `k` gets label `k·n + v`; the deck rotation sends copy `k` to `k+1`.
pub fn build_cover(
    map: &PolyhedralMap,
    cycle: &CycleSpec,
    m: usize,
) -> Result<CoverReport, CoverError> {
    if m == 0 {
        return Err(CoverError::ZeroFold);
    }
    let piece = cut_along(map, cycle)?;
    let n = map.num_vertices();
    let mut faces = Vec::with_capacity(m * map.num_faces());
    for k in 0..m {
        for f in &piece.faces {
            faces.push(
                f.iter()
                    .map(|&x| {
                        let v = piece.origin[x];
                        // B copies belong to the next copy's A boundary.
                        let copy = if x >= n { (k + 1) % m } else { k };
                        (copy * n + v) as u32
                    })
                    .collect(),
            );
        }
    }
    let cover = PolyhedralMap::from_faces(&faces)?;
    let deck_rotation = VertexPermutation::new((0..m * n).map(|x| (x + n) % (m * n)).collect());
    let predicted_group =
        predict_from_swap(side_swap_in(map, &piece, Exec::default()).is_some(), m);
    Ok(CoverReport {
        cover,
        m,
        deck_rotation,
        predicted_group,
        verified_group: None,
    })
}

/// Signed count of crossings of the cut, per face pair: stepping from face
/// `f` to the neighbouring face across a cycle edge moves one copy forward
/// in the cover when `f` is on side B, one copy back when on side A.
struct CrossingVoltage {
    /// For each face, (neighbour face, voltage) across each of its edges.
    steps: Vec<Vec<(usize, i64)>>,
}

impl CrossingVoltage {
    fn new(map: &PolyhedralMap, piece: &BorderedMap) -> Self {
        let n = map.num_vertices();
        let b_side: Vec<bool> = piece
            .faces
            .iter()
            .map(|f| f.iter().any(|&x| x >= n))
            .collect();
        let cyc = &piece.boundary_a;
        let r = cyc.len();
        let cut: std::collections::BTreeSet<(usize, usize)> =
            (0..r).map(|i| edge_key(cyc[i], cyc[(i + 1) % r])).collect();
        let steps = map
            .faces()
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                let k = f.len();
                (0..k)
                    .map(|i| {
                        let e = edge_key(f[i], f[(i + 1) % k]);
                        let [g1, g2] = map.edge_faces(e.0, e.1).unwrap();
                        let g = if g1 == fi { g2 } else { g1 };
                        let volt = match (cut.contains(&e), b_side[fi]) {
                            (false, _) => 0,
                            (true, true) => 1,
                            (true, false) => -1,
                        };
                        (g, volt)
                    })
                    .collect()
            })
            .collect();
        CrossingVoltage { steps }
    }

    fn voltage(&self, f: usize, g: usize) -> i64 {
        self.steps[f]
            .iter()
            .find(|(h, _)| *h == g)
            .map_or(0, |s| s.1)
    }

    /// True if the automorphism `alpha` of the base map lifts to every
    /// cyclic cover along the cut with the deck rotation conjugated to its
    /// `eps`-th power: the pulled-back voltage equals `eps` times the
    /// voltage up to a coboundary.
    fn lifts(&self, map: &PolyhedralMap, alpha: &VertexPermutation, eps: i64) -> bool {
        let key = |f: &[usize]| {
            let mut s = f.to_vec();
            s.sort_unstable();
            s
        };
        let index: std::collections::HashMap<Vec<usize>, usize> = map
            .faces()
            .iter()
            .enumerate()
            .map(|(i, f)| (key(f), i))
            .collect();
        let image: Vec<usize> = map
            .faces()
            .iter()
            .map(|f| index[&key(&f.iter().map(|&v| alpha.apply(v)).collect::<Vec<_>>())])
            .collect();
        let mut h: Vec<Option<i64>> = vec![None; map.num_faces()];
        h[0] = Some(0);
        let mut stack = vec![0];
        while let Some(f) = stack.pop() {
            for &(g, volt) in &self.steps[f] {
                let want = h[f].unwrap() + self.voltage(image[f], image[g]) - eps * volt;
                match h[g] {
                    None => {
                        h[g] = Some(want);
                        stack.push(g);
                    }
                    Some(x) if x != want => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// An involutive automorphism `α` of the base map exchanging the two sides
/// of the cut up to homology: its lift to every cyclic cover along the cycle
/// conjugates the deck rotation to its inverse. Returned over the vertex
/// indices of `map`; the least such involution, or `None`.
pub fn side_swap_symmetry(
    map: &PolyhedralMap,
    cycle: &CycleSpec,
) -> Result<Option<VertexPermutation>, CoverError> {
    let piece = cut_along(map, cycle)?;
    Ok(side_swap_in(map, &piece, Exec::default()))
}

fn side_swap_in(map: &PolyhedralMap, piece: &BorderedMap, exec: Exec) -> Option<VertexPermutation> {
    let volt = CrossingVoltage::new(map, piece);
    automorphism_group(map, exec)
        .elements()
        .iter()
        .find(|p| p.order() == 2 && volt.lifts(map, p, -1))
        .cloned()
}

fn predict_from_swap(swap: bool, m: usize) -> GroupId {
    match (swap, m) {
        (false, 1) => GroupId::Trivial,
        (true, 1) => GroupId::Cyclic(2),
        (true, _) => GroupId::Dihedral(m),
        (false, _) => GroupId::Cyclic(m),
    }
}

/// Dihedral of order 2m when a side swap exists, cyclic of order m
/// otherwise.
pub fn predict_cover_group(
    map: &PolyhedralMap,
    cycle: &CycleSpec,
    m: usize,
) -> Result<GroupId, CoverError> {
    Ok(predict_from_swap(
        side_swap_symmetry(map, cycle)?.is_some(),
        m,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symmetry::are_isomorphic;

    fn c0610() -> CycleSpec {
        "0,6,10".parse().unwrap()
    }

    #[test]
    fn cut_n1() {
        let piece = cut_along(&fixtures::n1(), &c0610()).unwrap();
        assert_eq!(piece.num_vertices(), 15);
        assert_eq!(piece.faces().len(), 28);
        assert_eq!(piece.boundary_a().len(), 3);
        assert_eq!(piece.flag_system().boundary_edges(), 6);
        piece.validate().unwrap();
    }

    #[test]
    fn tetrahedron_cycles_separate() {
        let t = fixtures::tetrahedron();
        assert_eq!(
            cut_along(&t, &"0,1,2".parse().unwrap()).unwrap_err(),
            CoverError::Separating
        );
        assert!(admissible_cycles(&t, 4, Exec::Sequential).is_empty());
    }

    #[test]
    fn bad_cycles() {
        let m = fixtures::n1();
        assert_eq!(
            cut_along(&m, &"0,1".parse().unwrap()).unwrap_err(),
            CoverError::TooShort(2)
        );
        assert_eq!(
            cut_along(&m, &"0,3,5".parse().unwrap()).unwrap_err(),
            CoverError::NotAnEdge(0, 3)
        );
        assert_eq!(
            cut_along(&m, &"0,1,99".parse().unwrap()).unwrap_err(),
            CoverError::UnknownVertex(99)
        );
        assert!("0,x".parse::<CycleSpec>().is_err());
    }

    #[test]
    fn covers_of_n1() {
        let m = fixtures::n1();
        let one = build_cover(&m, &c0610(), 1).unwrap();
        assert!(are_isomorphic(&one.cover, &m).is_some());
        for k in 2..=3 {
            let rep = build_cover(&m, &c0610(), k).unwrap();
            assert_eq!(rep.cover.num_vertices(), 12 * k);
            assert_eq!(rep.cover.euler_characteristic(), -2 * k as i64);
            assert_eq!(rep.deck_rotation.order(), k);
            let g = automorphism_group(&rep.cover, Exec::default());
            assert!(g.contains(&rep.deck_rotation));
            assert_eq!(identify_group(&g), rep.predicted_group);
        }
    }

    #[test]
    fn one_sided_cycle_on_projective_plane() {
        let m = fixtures::rp2_6();
        let cycles = admissible_cycles(&m, 6, Exec::Sequential);
        assert!(cycles.is_empty(), "{cycles:?}");
        let err = cut_along(&m, &"1,2,3".parse().unwrap()).unwrap_err();
        assert!(
            matches!(err, CoverError::OneSided | CoverError::FaceConflict(_)),
            "{err}"
        );
    }

    #[test]
    fn n1_side_swap_is_the_half_turn() {
        let m = fixtures::n1();
        let alpha = side_swap_symmetry(&m, &c0610()).unwrap().unwrap();
        assert_eq!(
            alpha.to_cycle_string(m.labels()),
            "(0,6)(1,7)(2,8)(3,9)(4,10)(5,11)"
        );
        assert_eq!(
            predict_cover_group(&m, &c0610(), 3).unwrap(),
            GroupId::Dihedral(3)
        );
    }

    #[test]
    fn normalization() {
        let c = CycleSpec::new(vec![10, 0, 6]);
        assert_eq!(c.normalized().vertices(), &[0, 6, 10]);
        let c = CycleSpec::new(vec![6, 0, 10]);
        assert_eq!(c.normalized().vertices(), &[0, 6, 10]);
        assert_eq!(c.to_string(), "(6,0,10)");
    }
}
