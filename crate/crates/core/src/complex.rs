//! Flag structure of a face complex (closed or with boundary) and the flag
//! propagation primitives behind isomorphism, automorphism and canonical
//! certificates.
//!
//! A flag is a (vertex, edge, face) triple with the vertex on the edge and the
//! edge on the face. `sigma[k]` switches the k-th component keeping the
//! others: 0 the vertex, 1 the edge, 2 the face. On a boundary edge `sigma[2]`
//! is undefined.

use std::collections::{HashMap, VecDeque};

use crate::map::edge_key;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct FlagSystem {
    n_vertices: usize,
    vertex: Vec<u32>,
    /// Other endpoint of the flag's edge.
    partner: Vec<u32>,
    face: Vec<u32>,
    sigma: [Vec<u32>; 3],
    /// Number of flags at each vertex.
    vertex_flags: Vec<u32>,
}

impl FlagSystem {
    /// Builds the flag system of faces over `0..n_vertices`. Every edge must
    /// lie in one or two faces.
    pub fn new(faces: &[Vec<usize>], n_vertices: usize) -> Self {
        let mut base = Vec::with_capacity(faces.len());
        let mut total = 0usize;
        for f in faces {
            base.push(total);
            total += f.len();
        }
        let nflags = 2 * total;
        let idx = |f: usize, i: usize, d: usize| (2 * (base[f] + i) + d) as u32;

        let mut on_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            let k = f.len();
            for i in 0..k {
                on_edge
                    .entry(edge_key(f[i], f[(i + 1) % k]))
                    .or_default()
                    .push(fi);
            }
        }

        let mut vertex = vec![0u32; nflags];
        let mut partner = vec![0u32; nflags];
        let mut face = vec![0u32; nflags];
        let mut sigma = [vec![NONE; nflags], vec![NONE; nflags], vec![NONE; nflags]];
        let mut vertex_flags = vec![0u32; n_vertices];
        for (fi, f) in faces.iter().enumerate() {
            let k = f.len();
            for i in 0..k {
                for d in 0..2 {
                    let me = idx(fi, i, d) as usize;
                    let v = f[i];
                    let w = if d == 0 {
                        f[(i + 1) % k]
                    } else {
                        f[(i + k - 1) % k]
                    };
                    vertex[me] = v as u32;
                    partner[me] = w as u32;
                    face[me] = fi as u32;
                    vertex_flags[v] += 1;
                    sigma[0][me] = if d == 0 {
                        idx(fi, (i + 1) % k, 1)
                    } else {
                        idx(fi, (i + k - 1) % k, 0)
                    };
                    sigma[1][me] = idx(fi, i, 1 - d);
                    let owners = &on_edge[&edge_key(v, w)];
                    assert!(owners.len() <= 2, "edge in more than two faces");
                    if let Some(&g) = owners.iter().find(|&&g| g != fi) {
                        let gf = &faces[g];
                        let kg = gf.len();
                        let j = gf.iter().position(|&x| x == v).unwrap();
                        let dg = if gf[(j + 1) % kg] == w { 0 } else { 1 };
                        sigma[2][me] = idx(g, j, dg);
                    }
                }
            }
        }
        FlagSystem {
            n_vertices,
            vertex,
            partner,
            face,
            sigma,
            vertex_flags,
        }
    }

    pub fn num_flags(&self) -> usize {
        self.vertex.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn vertex(&self, flag: usize) -> usize {
        self.vertex[flag] as usize
    }

    pub fn face(&self, flag: usize) -> usize {
        self.face[flag] as usize
    }

    pub fn sigma(&self, k: usize, flag: usize) -> Option<usize> {
        let s = self.sigma[k][flag];
        (s != NONE).then_some(s as usize)
    }

    /// The lexicographically least (vertex, neighbour, face) flag.
    pub fn base_flag(&self) -> usize {
        (0..self.num_flags())
            .min_by_key(|&f| (self.vertex[f], self.partner[f], self.face[f]))
            .expect("non-empty complex")
    }

    /// A cheap isomorphism invariant of a flag: face size, flags at its
    /// vertex and whether its edge is on the boundary.
    fn flag_invariant(&self, flag: usize) -> (u32, u32, bool) {
        let mut size = 1;
        let mut g = flag;
        loop {
            g = self.sigma[0][self.sigma[1][g] as usize] as usize;
            if g == flag {
                break;
            }
            size += 1;
        }
        (
            size,
            self.vertex_flags[self.vertex[flag] as usize],
            self.sigma[2][flag] == NONE,
        )
    }

    /// Extends `a -> b` to a flag map from `self` to `other` commuting with
    /// every `sigma`, and returns the induced vertex map if it is a
    /// bijection.
    pub fn propagate(&self, other: &FlagSystem, a: usize, b: usize) -> Option<Vec<usize>> {
        if self.num_flags() != other.num_flags() || self.n_vertices != other.n_vertices {
            return None;
        }
        let mut image = vec![NONE; self.num_flags()];
        image[a] = b as u32;
        let mut queue = VecDeque::from([a]);
        let mut vmap = vec![NONE; self.n_vertices];
        while let Some(x) = queue.pop_front() {
            let y = image[x] as usize;
            let (vx, vy) = (self.vertex[x] as usize, other.vertex[y]);
            if vmap[vx] == NONE {
                vmap[vx] = vy;
            } else if vmap[vx] != vy {
                return None;
            }
            for k in 0..3 {
                let sx = self.sigma[k][x];
                let sy = other.sigma[k][y];
                match (sx == NONE, sy == NONE) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return None,
                }
                let sx = sx as usize;
                if image[sx] == NONE {
                    image[sx] = sy;
                    queue.push_back(sx);
                } else if image[sx] != sy {
                    return None;
                }
            }
        }
        if image.contains(&NONE) {
            return None;
        }
        let mut hit = vec![false; self.n_vertices];
        for &w in &vmap {
            if w == NONE || hit[w as usize] {
                return None;
            }
            hit[w as usize] = true;
        }
        Some(vmap.into_iter().map(|w| w as usize).collect())
    }

    /// Flags of `other` that could be the image of `flag` of `self`.
    pub fn candidate_images(&self, other: &FlagSystem, flag: usize) -> Vec<usize> {
        let inv = self.flag_invariant(flag);
        (0..other.num_flags())
            .filter(|&g| other.flag_invariant(g) == inv)
            .collect()
    }

    /// Canonical code: the least breadth-first encoding over all root flags
    /// of minimum invariant. Equal codes iff isomorphic complexes.
    pub fn canonical_code(&self) -> Vec<u32> {
        self.canonical_search().0
    }

    /// Vertices in order of first appearance along the canonical traversal.
    /// Isomorphic complexes yield orders related by an isomorphism.
    pub fn canonical_vertex_order(&self) -> Vec<usize> {
        let (_, flags) = self.canonical_search();
        let mut seen = vec![false; self.n_vertices];
        let mut out = Vec::with_capacity(self.n_vertices);
        for f in flags {
            let v = self.vertex(f);
            if !seen[v] {
                seen[v] = true;
                out.push(v);
            }
        }
        out
    }

    fn canonical_search(&self) -> (Vec<u32>, Vec<usize>) {
        let nflags = self.num_flags();
        let invs: Vec<_> = (0..nflags).map(|f| self.flag_invariant(f)).collect();
        let least = invs.iter().min().copied();
        let mut best: Option<Vec<u32>> = None;
        let mut best_order = Vec::new();
        let mut number = vec![NONE; nflags];
        let mut order = Vec::with_capacity(nflags);
        let mut code = Vec::with_capacity(3 * nflags + 2);
        for root in 0..nflags {
            if Some(invs[root]) != least {
                continue;
            }
            number.iter_mut().for_each(|x| *x = NONE);
            order.clear();
            code.clear();
            code.push(nflags as u32);
            code.push(self.n_vertices as u32);
            number[root] = 0;
            order.push(root);
            let mut head = 0;
            // While `tied`, the code so far equals the prefix of `best`.
            let mut tied = best.is_some();
            let mut worse = false;
            while head < order.len() {
                let x = order[head];
                head += 1;
                for k in 0..3 {
                    let s = self.sigma[k][x];
                    let c = if s == NONE {
                        NONE
                    } else {
                        let s = s as usize;
                        if number[s] == NONE {
                            number[s] = order.len() as u32;
                            order.push(s);
                        }
                        number[s]
                    };
                    code.push(c);
                    if tied {
                        let b = best.as_ref().unwrap()[code.len() - 1];
                        if c > b {
                            worse = true;
                            break;
                        }
                        if c < b {
                            tied = false;
                        }
                    }
                }
                if worse {
                    break;
                }
            }
            if worse || order.len() != nflags {
                continue;
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code.clone());
                best_order = order.clone();
            }
        }
        (best.unwrap_or_default(), best_order)
    }

    /// Number of boundary edges (each seen from two flags with undefined
    /// `sigma[2]`).
    pub fn boundary_edges(&self) -> usize {
        self.sigma[2].iter().filter(|&&s| s == NONE).count() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sigma_are_involutions() {
        let m = fixtures::n1();
        let fs = FlagSystem::new(m.faces(), m.num_vertices());
        assert_eq!(fs.num_flags(), 4 * m.num_edges());
        for f in 0..fs.num_flags() {
            for k in 0..3 {
                let g = fs.sigma(k, f).unwrap();
                assert_ne!(g, f);
                assert_eq!(fs.sigma(k, g), Some(f));
            }
            let g = fs.sigma(0, f).unwrap();
            assert_eq!(
                fs.sigma(2, fs.sigma(0, fs.sigma(2, g).unwrap()).unwrap()),
                Some(f)
            );
        }
    }

    #[test]
    fn boundary_edges_counted() {
        let faces = vec![vec![0, 1, 2], vec![0, 2, 3]];
        let fs = FlagSystem::new(&faces, 4);
        assert_eq!(fs.boundary_edges(), 4);
        assert_eq!(fs.num_flags(), 12);
    }

    #[test]
    fn identity_propagates() {
        let m = fixtures::tetrahedron();
        let fs = FlagSystem::new(m.faces(), m.num_vertices());
        let b = fs.base_flag();
        assert_eq!(fs.propagate(&fs, b, b), Some(vec![0, 1, 2, 3]));
    }
}
