use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complex::FlagSystem;
use crate::exec::Exec;
use crate::map::PolyhedralMap;
use crate::perm::VertexPermutation;

/// A finite permutation group stored by its full element list, sorted, with
/// the identity first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    elements: Vec<VertexPermutation>,
    generators: Vec<VertexPermutation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum GroupId {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    Other(usize),
}

impl GroupId {
    pub fn order(&self) -> usize {
        match *self {
            GroupId::Trivial => 1,
            GroupId::Cyclic(m) => m,
            GroupId::Dihedral(m) => 2 * m,
            GroupId::Other(n) => n,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Trivial => write!(f, "trivial"),
            GroupId::Cyclic(m) => write!(f, "Z{m}"),
            GroupId::Dihedral(m) => write!(f, "D{m}"),
            GroupId::Other(n) => write!(f, "other({n})"),
        }
    }
}

impl From<GroupId> for String {
    fn from(g: GroupId) -> String {
        g.to_string()
    }
}

impl AutGroup {
    /// Wraps a set of permutations already known to form a group.
    pub fn from_elements(mut elements: Vec<VertexPermutation>) -> Self {
        elements.sort();
        elements.dedup();
        let generators = pick_generators(&elements);
        AutGroup {
            elements,
            generators,
        }
    }

    pub fn elements(&self) -> &[VertexPermutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[VertexPermutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &VertexPermutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Closure under composition and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse())
                && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }
}

fn generated(gens: &[VertexPermutation], n: usize) -> BTreeSet<VertexPermutation> {
    let mut set = BTreeSet::from([VertexPermutation::identity(n)]);
    let mut frontier = vec![VertexPermutation::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn pick_generators(elements: &[VertexPermutation]) -> Vec<VertexPermutation> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut gens: Vec<VertexPermutation> = Vec::new();
    let mut span = generated(&gens, n);
    // Prefer elements of large order so cyclic parts need one generator.
    let mut by_order: Vec<&VertexPermutation> = elements.iter().collect();
    by_order.sort_by_key(|p| std::cmp::Reverse(p.order()));
    for p in by_order {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(p) {
            gens.push(p.clone());
            span = generated(&gens, n);
        }
    }
    gens
}

/// Vertex map of an isomorphism `a -> b` found by flag propagation from the
/// base flag of `a`, trying candidate images in flag order.
fn flag_isomorphism(fa: &FlagSystem, fb: &FlagSystem) -> Option<Vec<usize>> {
    let base = fa.base_flag();
    fa.candidate_images(fb, base)
        .into_iter()
        .find_map(|t| fa.propagate(fb, base, t))
}

pub fn automorphism_group(map: &PolyhedralMap, exec: Exec) -> AutGroup {
    let fs = FlagSystem::new(map.faces(), map.num_vertices());
    automorphisms_of(&fs, exec)
}

/// All automorphisms of a flag system (closed or bordered).
pub fn automorphisms_of(fs: &FlagSystem, exec: Exec) -> AutGroup {
    let base = fs.base_flag();
    let candidates = fs.candidate_images(fs, base);
    let elements = exec.filter_map(&candidates, |&t| {
        fs.propagate(fs, base, t).map(VertexPermutation::new)
    });
    AutGroup::from_elements(elements)
}

pub fn identify_group(group: &AutGroup) -> GroupId {
    let n = group.order();
    if n <= 1 {
        return GroupId::Trivial;
    }
    let orders: Vec<usize> = group.elements.iter().map(|p| p.order()).collect();
    if orders.contains(&n) {
        return GroupId::Cyclic(n);
    }
    if n.is_multiple_of(2) {
        let m = n / 2;
        for (r, _) in group.elements.iter().zip(&orders).filter(|(_, &o)| o == m) {
            let rot: BTreeSet<VertexPermutation> = generated(std::slice::from_ref(r), r.len());
            let r_inv = r.inverse();
            let flips = group
                .elements
                .iter()
                .zip(&orders)
                .any(|(s, &o)| o == 2 && !rot.contains(s) && s.compose(r).compose(s) == r_inv);
            if flips {
                return GroupId::Dihedral(m);
            }
        }
    }
    GroupId::Other(n)
}

/// A vertex bijection `a -> b` (over labels of `a` and `b`) if the maps are
/// isomorphic, reflections allowed.
pub fn are_isomorphic(a: &PolyhedralMap, b: &PolyhedralMap) -> Option<Vec<(u32, u32)>> {
    if a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
        || a.num_faces() != b.num_faces()
    {
        return None;
    }
    let fa = FlagSystem::new(a.faces(), a.num_vertices());
    let fb = FlagSystem::new(b.faces(), b.num_vertices());
    flag_isomorphism(&fa, &fb).map(|vmap| {
        vmap.iter()
            .enumerate()
            .map(|(v, &w)| (a.label(v), b.label(w)))
            .collect()
    })
}

/// Canonical byte encoding; equal for two maps iff they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn from_flags(fs: &FlagSystem) -> Self {
        let code = fs.canonical_code();
        Certificate(code.iter().flat_map(|c| c.to_le_bytes()).collect())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Short stable digest for display: 64-bit FNV-1a, hex.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for &b in &self.0 {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

pub fn canonical_certificate(map: &PolyhedralMap) -> Certificate {
    Certificate::from_flags(&FlagSystem::new(map.faces(), map.num_vertices()))
}

/// The map relabelled `0..n` in canonical order; isomorphic maps give
/// identical results.
pub fn canonical_form(map: &PolyhedralMap) -> PolyhedralMap {
    let order = FlagSystem::new(map.faces(), map.num_vertices()).canonical_vertex_order();
    let mut rank = vec![0u32; map.num_vertices()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i as u32;
    }
    let relabeled = map
        .relabeled(|l| rank[map.index_of(l).expect("label")])
        .expect("relabelling is a bijection");
    PolyhedralMap::from_faces(&relabeled.standard_faces()).expect("same faces")
}

/// Orbits of the group on vertices, each sorted, ordered by least element.
pub fn vertex_orbits(n: usize, group: &AutGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let mut orbit: Vec<usize> = group.elements.iter().map(|p| p.apply(v)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &w in &orbit {
            seen[w] = true;
        }
        out.push(orbit);
    }
    out
}

pub fn is_vertex_transitive(map: &PolyhedralMap, exec: Exec) -> bool {
    let g = automorphism_group(map, exec);
    vertex_orbits(map.num_vertices(), &g).len() == 1
}

/// True if `p` maps every face of `map` onto a face.
pub fn preserves_faces(map: &PolyhedralMap, p: &VertexPermutation) -> bool {
    let key = |f: &[usize]| {
        let mut s = f.to_vec();
        s.sort_unstable();
        s
    };
    let faces: BTreeSet<Vec<usize>> = map.faces().iter().map(|f| key(f)).collect();
    map.faces().iter().all(|f| {
        let img: Vec<usize> = f.iter().map(|&v| p.apply(v)).collect();
        faces.contains(&key(&img))
    })
}
