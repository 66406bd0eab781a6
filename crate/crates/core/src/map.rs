use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::vertex_type::VertexType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("face list is empty")]
    Empty,
    #[error("face {face} has {len} vertices; at least 3 are required")]
    ShortFace { face: usize, len: usize },
    #[error("face {face} repeats vertex {vertex}")]
    RepeatedVertex { face: usize, vertex: u32 },
    #[error("edge [{0},{1}] in {2} face(s)")]
    EdgeMultiplicity(u32, u32, usize),
    #[error("faces {0} and {1} meet in {2:?}, not in a vertex or an edge")]
    BadIntersection(usize, usize, Vec<u32>),
    #[error("faces around vertex {0} do not form a single cycle")]
    SplitVertex(u32),
    #[error("edge graph is disconnected")]
    Disconnected,
}

/// A validated polyhedral map. Vertices are stored as indices `0..n` into the
/// sorted list of the original labels.
#[derive(Debug, Clone)]
pub struct PolyhedralMap {
    labels: Vec<u32>,
    faces: Vec<Vec<usize>>,
    edges: BTreeMap<(usize, usize), [usize; 2]>,
    rotation: Vec<Vec<usize>>,
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Position of `v` in `face`.
pub(crate) fn position(face: &[usize], v: usize) -> Option<usize> {
    face.iter().position(|&x| x == v)
}

/// The two neighbours of `v` along `face` (previous, next).
pub(crate) fn face_neighbours(face: &[usize], v: usize) -> (usize, usize) {
    let k = face.len();
    let i = position(face, v).expect("vertex on face");
    (face[(i + k - 1) % k], face[(i + 1) % k])
}

/// Checks the pairwise intersection rule for a collection of faces: two
/// faces share nothing, one vertex, or exactly one common edge.
pub(crate) fn check_intersections(
    faces: &[Vec<usize>],
    n: usize,
) -> Result<(), (usize, usize, Vec<usize>)> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (f, face) in faces.iter().enumerate() {
        for &v in face {
            incident[v].push(f);
        }
    }
    let mut shared: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (v, fs) in incident.iter().enumerate() {
        for (i, &f) in fs.iter().enumerate() {
            for &g in &fs[i + 1..] {
                shared.entry((f, g)).or_default().push(v);
            }
        }
    }
    let mut pairs: Vec<_> = shared.into_iter().collect();
    pairs.sort();
    for ((f, g), common) in pairs {
        let ok = match common.len() {
            1 => true,
            2 => {
                let (a, b) = (common[0], common[1]);
                adjacent_on(&faces[f], a, b) && adjacent_on(&faces[g], a, b)
            }
            _ => false,
        };
        if !ok {
            return Err((f, g, common));
        }
    }
    Ok(())
}

pub(crate) fn adjacent_on(face: &[usize], a: usize, b: usize) -> bool {
    let k = face.len();
    (0..k).any(|i| {
        let (x, y) = (face[i], face[(i + 1) % k]);
        (x == a && y == b) || (x == b && y == a)
    })
}

impl PolyhedralMap {
    pub fn from_faces(faces: &[Vec<u32>]) -> Result<Self, MapError> {
        if faces.is_empty() {
            return Err(MapError::Empty);
        }
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(MapError::ShortFace {
                    face: i,
                    len: f.len(),
                });
            }
            let mut s = f.clone();
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(MapError::RepeatedVertex {
                    face: i,
                    vertex: w[0],
                });
            }
        }
        let mut labels: Vec<u32> = faces.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let norm: Vec<Vec<usize>> = faces
            .iter()
            .map(|f| f.iter().map(|l| index[l]).collect())
            .collect();
        let n = labels.len();

        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in norm.iter().enumerate() {
            let k = f.len();
            for i in 0..k {
                edge_faces
                    .entry(edge_key(f[i], f[(i + 1) % k]))
                    .or_default()
                    .push(fi);
            }
        }
        let mut edges = BTreeMap::new();
        for (&(a, b), fs) in &edge_faces {
            if fs.len() != 2 {
                return Err(MapError::EdgeMultiplicity(labels[a], labels[b], fs.len()));
            }
            edges.insert((a, b), [fs[0], fs[1]]);
        }
        check_intersections(&norm, n).map_err(|(f, g, common)| {
            MapError::BadIntersection(f, g, common.iter().map(|&v| labels[v]).collect())
        })?;

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (fi, f) in norm.iter().enumerate() {
            for &v in f {
                incident[v].push(fi);
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for v in 0..n {
            let first = incident[v][0];
            let (p, q) = face_neighbours(&norm[first], v);
            // Leave the first face through the edge to its lower-labelled neighbour.
            let mut through = p.min(q);
            let mut cur = first;
            let mut order = vec![first];
            loop {
                let [f1, f2] = edges[&edge_key(v, through)];
                let next = if f1 == cur { f2 } else { f1 };
                if next == first {
                    break;
                }
                if order.len() > incident[v].len() {
                    return Err(MapError::SplitVertex(labels[v]));
                }
                order.push(next);
                let (a, b) = face_neighbours(&norm[next], v);
                through = if a == through { b } else { a };
                cur = next;
            }
            if order.len() != incident[v].len() {
                return Err(MapError::SplitVertex(labels[v]));
            }
            rotation.push(order);
        }

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        if !connected(&adj) {
            return Err(MapError::Disconnected);
        }
        Ok(PolyhedralMap {
            labels,
            faces: norm,
            edges,
            rotation,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Faces over normalized vertex indices.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Faces over the original labels, in input order.
    pub fn labeled_faces(&self) -> Vec<Vec<u32>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&v| self.labels[v]).collect())
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }

    /// The two faces on an edge.
    pub fn edge_faces(&self, a: usize, b: usize) -> Option<[usize; 2]> {
        self.edges.get(&edge_key(a, b)).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Faces around `v` in rotation order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    /// Neighbours of `v` in rotation order: the i-th entry is the vertex
    /// shared by the i-th and (i+1)-th faces of the rotation.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let rot = &self.rotation[v];
        let d = rot.len();
        (0..d)
            .map(|i| {
                let (a, b) = face_neighbours(&self.faces[rot[i]], v);
                let next = &self.faces[rot[(i + 1) % d]];
                if position(next, a).is_some() {
                    a
                } else {
                    b
                }
            })
            .collect()
    }

    pub fn face_cycle_type(&self, v: usize) -> VertexType {
        let sizes: Vec<u32> = self.rotation[v]
            .iter()
            .map(|&f| self.faces[f].len() as u32)
            .collect();
        VertexType::new(&sizes).expect("faces have at least 3 vertices and vertices degree 3")
    }

    pub fn semi_equivelar_type(&self) -> Option<VertexType> {
        let t = self.face_cycle_type(0);
        (1..self.num_vertices())
            .all(|v| self.face_cycle_type(v) == t)
            .then_some(t)
    }

    /// The boundary cycle of the closed star of `v`, in rotation order.
    pub fn link_cycle(&self, v: usize) -> Vec<usize> {
        let rot = &self.rotation[v];
        let d = rot.len();
        let nb = self.neighbours(v);
        let mut link = Vec::new();
        for i in 0..d {
            // Face rot[i] runs from nb[i-1] to nb[i] around v.
            let start = nb[(i + d - 1) % d];
            let face = &self.faces[rot[i]];
            let k = face.len();
            let pv = position(face, v).unwrap();
            let forward = face[(pv + 1) % k] == start;
            for j in 1..k - 1 {
                let idx = if forward {
                    (pv + j) % k
                } else {
                    (pv + k - j) % k
                };
                link.push(face[idx]);
            }
        }
        link
    }

    /// Coherent orientation by propagation over the dual graph.
    pub fn is_orientable(&self) -> bool {
        let nf = self.faces.len();
        let mut sign: Vec<Option<bool>> = vec![None; nf];
        for root in 0..nf {
            if sign[root].is_some() {
                continue;
            }
            sign[root] = Some(true);
            let mut queue = VecDeque::from([root]);
            while let Some(f) = queue.pop_front() {
                let face = &self.faces[f];
                let k = face.len();
                let sf = sign[f].unwrap();
                for i in 0..k {
                    let (a, b) = (face[i], face[(i + 1) % k]);
                    let [g1, g2] = self.edges[&edge_key(a, b)];
                    let g = if g1 == f { g2 } else { g1 };
                    // g must traverse a->b in the opposite direction after orientation.
                    let gface = &self.faces[g];
                    let same_dir = gface
                        .iter()
                        .enumerate()
                        .any(|(j, &x)| x == a && gface[(j + 1) % gface.len()] == b);
                    let want = if same_dir { !sf } else { sf };
                    match sign[g] {
                        None => {
                            sign[g] = Some(want);
                            queue.push_back(g);
                        }
                        Some(s) if s != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Faces in label form, each started at its least label and read
    /// towards the lesser neighbour, sorted.
    pub fn standard_faces(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self
            .labeled_faces()
            .into_iter()
            .map(|f| {
                let k = f.len();
                let i = (0..k).min_by_key(|&i| f[i]).unwrap();
                let fwd = f[(i + 1) % k] < f[(i + k - 1) % k];
                (0..k)
                    .map(|j| {
                        if fwd {
                            f[(i + j) % k]
                        } else {
                            f[(i + k - j) % k]
                        }
                    })
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    /// Applies a label map to every face.
    pub fn relabeled(&self, map: impl Fn(u32) -> u32) -> Result<Self, MapError> {
        let faces: Vec<Vec<u32>> = self
            .labeled_faces()
            .into_iter()
            .map(|f| f.into_iter().map(&map).collect())
            .collect();
        PolyhedralMap::from_faces(&faces)
    }

    /// The mirror image: every face read in reverse.
    pub fn reflected(&self) -> Self {
        let faces: Vec<Vec<u32>> = self
            .labeled_faces()
            .into_iter()
            .map(|mut f| {
                f.reverse();
                f
            })
            .collect();
        PolyhedralMap::from_faces(&faces).expect("reflection preserves validity")
    }

    /// Face sizes as a map size -> count.
    pub fn face_vector(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for f in &self.faces {
            *m.entry(f.len() as u32).or_insert(0) += 1;
        }
        m
    }

    /// Faces with vertices in label order of the rendering `[u_1,...,u_k]`.
    pub fn render_face(&self, f: usize) -> String {
        let body: Vec<String> = self.faces[f]
            .iter()
            .map(|&v| self.labels[v].to_string())
            .collect();
        format!("[{}]", body.join(","))
    }
}

pub(crate) fn connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

impl PartialEq for PolyhedralMap {
    /// Same labels and the same faces as cyclic sequences, in any order and
    /// with any starting vertex (orientation of each face respected).
    fn eq(&self, other: &Self) -> bool {
        fn norm(m: &PolyhedralMap) -> Vec<Vec<u32>> {
            let mut fs: Vec<Vec<u32>> = m
                .labeled_faces()
                .into_iter()
                .map(|f| {
                    let i = (0..f.len()).min_by_key(|&i| f[i]).unwrap();
                    let mut g = f[i..].to_vec();
                    g.extend_from_slice(&f[..i]);
                    g
                })
                .collect();
            fs.sort();
            fs
        }
        self.labels == other.labels && norm(self) == norm(other)
    }
}

impl Eq for PolyhedralMap {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn n1_counts() {
        let m = fixtures::n1();
        assert_eq!(m.num_vertices(), 12);
        assert_eq!(m.num_edges(), 42);
        assert_eq!(m.num_faces(), 28);
        assert_eq!(m.euler_characteristic(), -2);
        assert_eq!(m.face_cycle_type(0).to_string(), "[3^7]");
        assert!(m.is_orientable());
    }

    #[test]
    fn tetrahedron() {
        let m = fixtures::tetrahedron();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.face_cycle_type(0).to_string(), "[3^3]");
        let mut link = m.link_cycle(0);
        link.sort();
        assert_eq!(link, vec![1, 2, 3]);
        assert!(m.is_orientable());
    }

    #[test]
    fn missing_triangle_is_rejected() {
        let mut faces = fixtures::n1().labeled_faces();
        faces.pop();
        let err = PolyhedralMap::from_faces(&faces).unwrap_err();
        assert!(err.to_string().contains("in 1 face"), "{err}");
    }

    #[test]
    fn degenerate_faces() {
        assert_eq!(PolyhedralMap::from_faces(&[]).unwrap_err(), MapError::Empty);
        assert!(matches!(
            PolyhedralMap::from_faces(&[vec![0, 1]]),
            Err(MapError::ShortFace { .. })
        ));
        assert!(matches!(
            PolyhedralMap::from_faces(&[vec![0, 1, 0]]),
            Err(MapError::RepeatedVertex { .. })
        ));
        assert!(PolyhedralMap::from_faces(&[vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn two_faces_on_two_edges_rejected() {
        // A cube is fine; two triangles on the same three vertices are not.
        let faces = vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
            vec![4, 5, 6, 7],
        ];
        assert!(PolyhedralMap::from_faces(&faces).is_ok());
        let bad = vec![vec![0, 1, 2], vec![0, 2, 1]];
        assert!(matches!(
            PolyhedralMap::from_faces(&bad),
            Err(MapError::BadIntersection(..))
        ));
    }

    #[test]
    fn link_lengths_match_type() {
        for m in [fixtures::n1(), fixtures::tetrahedron(), fixtures::rp2_6()] {
            for v in 0..m.num_vertices() {
                let link = m.link_cycle(v);
                assert_eq!(link.len() as u32, m.face_cycle_type(v).link_length());
                let mut s = link.clone();
                s.sort();
                s.dedup();
                assert_eq!(s.len(), link.len());
            }
        }
    }

    #[test]
    fn n1_link_is_neighbourhood() {
        let m = fixtures::n1();
        let v = m.index_of(1).unwrap();
        let mut link = m.link_cycle(v);
        link.sort();
        let mut nb = m.neighbours(v);
        nb.sort();
        assert_eq!(link.len(), 7);
        assert_eq!(link, nb);
    }

    #[test]
    fn projective_plane_is_non_orientable() {
        let m = fixtures::rp2_6();
        assert_eq!(m.euler_characteristic(), 1);
        assert!(!m.is_orientable());
    }

    #[test]
    fn mixed_types_have_no_common_type() {
        let m = fixtures::cube_with_pyramid();
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.semi_equivelar_type().is_none());
        assert_eq!(
            fixtures::n1().semi_equivelar_type().unwrap().to_string(),
            "[3^7]"
        );
    }

    #[test]
    fn labels_are_preserved() {
        let m = PolyhedralMap::from_faces(&[
            vec![10, 20, 30],
            vec![10, 20, 40],
            vec![10, 30, 40],
            vec![20, 30, 40],
        ])
        .unwrap();
        assert_eq!(m.labels(), &[10, 20, 30, 40]);
        assert_eq!(m.labeled_faces()[1], vec![10, 20, 40]);
        assert_eq!(m.index_of(30), Some(2));
    }
}
