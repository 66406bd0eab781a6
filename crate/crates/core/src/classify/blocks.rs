//! Blocks: pairs of triangles `[a,b,c]`, `[b,c,d]` whose outer edges `ab`
//! and `cd` lie on `g`-gons meeting the pair only in that edge. Blocks chain
//! into cycles through `g`-gons they meet along antipodal edges; the
//! distances between consecutive blocks of each cycle form an isomorphism
//! invariant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::map::PolyhedralMap;

/// `[a,b,c|d]`, as vertex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}|{}]", self.a, self.b, self.c, self.d)
    }
}

/// Per cycle, the sorted distances between consecutive blocks; the cycles
/// themselves sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockCycleCertificate(pub Vec<Vec<u32>>);

impl fmt::Display for BlockCycleCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| {
                format!(
                    "{{{}}}",
                    c.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Index form of a block with its two triangles and the `g`-gons on its
/// outer edges.
#[derive(Debug, Clone)]
struct RawBlock {
    q: [usize; 4],
    triangles: [usize; 2],
    /// `(face, edge position)` of `ab` and of `cd` on their `g`-gons.
    ends: [(usize, usize); 2],
}

fn other_face(map: &PolyhedralMap, u: usize, v: usize, not: usize) -> usize {
    let [f, g] = map.edge_faces(u, v).expect("edge");
    if f == not {
        g
    } else {
        f
    }
}

fn edge_position(face: &[usize], u: usize, v: usize) -> usize {
    let k = face.len();
    (0..k)
        .find(|&i| {
            let (x, y) = (face[i], face[(i + 1) % k]);
            (x == u && y == v) || (x == v && y == u)
        })
        .expect("edge on face")
}

fn raw_blocks(map: &PolyhedralMap, g: usize) -> Vec<RawBlock> {
    let faces = map.faces();
    let third =
        |f: usize, u: usize, v: usize| *faces[f].iter().find(|&&x| x != u && x != v).unwrap();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (b, c) in map.edges() {
        let [t1, t2] = map.edge_faces(b, c).unwrap();
        if faces[t1].len() != 3 || faces[t2].len() != 3 {
            continue;
        }
        let (x, y) = (third(t1, b, c), third(t2, b, c));
        // The two ways of reading the strip: outer edges x-b, c-y or x-c, b-y.
        for (a, b, c, d, ta, td) in [(x, b, c, y, t1, t2), (x, c, b, y, t1, t2)] {
            let fa = other_face(map, a, b, ta);
            let fd = other_face(map, c, d, td);
            let quad = [a, b, c, d];
            let meets_only = |f: usize, u: usize, v: usize| {
                faces[f].len() == g
                    && quad.iter().filter(|q| faces[f].contains(q)).count() == 2
                    && faces[f].contains(&u)
                    && faces[f].contains(&v)
            };
            if !meets_only(fa, a, b) || !meets_only(fd, c, d) {
                continue;
            }
            let key = quad.min([d, c, b, a]);
            if !seen.insert(key) {
                continue;
            }
            let (q, tris, ends) = if key == quad {
                (
                    quad,
                    [ta, td],
                    [
                        (fa, edge_position(&faces[fa], a, b)),
                        (fd, edge_position(&faces[fd], c, d)),
                    ],
                )
            } else {
                (
                    [d, c, b, a],
                    [td, ta],
                    [
                        (fd, edge_position(&faces[fd], c, d)),
                        (fa, edge_position(&faces[fa], a, b)),
                    ],
                )
            };
            out.push(RawBlock {
                q,
                triangles: tris,
                ends,
            });
        }
    }
    out.sort_by_key(|r| r.q);
    out
}

/// All blocks with respect to `g`-gons, one per `[a,b,c|d]` ↔ `[d,c,b|a]`
/// pair, in label form.
pub fn blocks(map: &PolyhedralMap, g: usize) -> Vec<Block> {
    let mut out: Vec<Block> = raw_blocks(map, g)
        .iter()
        .map(|r| {
            let [a, b, c, d] = r.q.map(|v| map.label(v));
            let fwd = Block { a, b, c, d };
            let rev = Block {
                a: d,
                b: c,
                c: b,
                d: a,
            };
            fwd.min(rev)
        })
        .collect();
    out.sort();
    out
}

/// Cycles `B_1 - F_1 - B_2 - F_2 - …` in which consecutive blocks meet the
/// shared `g`-gon along antipodal edges, as block index sequences starting
/// at their least block and read in the lesser direction.
fn block_cycles(raw: &[RawBlock], g: usize) -> Vec<Vec<usize>> {
    if !g.is_multiple_of(2) {
        return Vec::new();
    }
    let mut at: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (i, r) in raw.iter().enumerate() {
        for (e, &(f, pos)) in r.ends.iter().enumerate() {
            at.entry((f, pos)).or_default().push((i, e));
        }
    }
    // From block `i`, leaving through end `e`, reach block `j` entering through end `e2`.
    let step = |i: usize, e: usize| -> Vec<(usize, usize)> {
        let (f, pos) = raw[i].ends[e];
        at.get(&(f, (pos + g / 2) % g)).cloned().unwrap_or_default()
    };
    let mut cycles = BTreeSet::new();
    for start in 0..raw.len() {
        for e0 in 0..2 {
            // Walk: leave through the end opposite the one entered.
            let mut stack = vec![(vec![start], 1 - e0)];
            while let Some((path, out_end)) = stack.pop() {
                let cur = *path.last().unwrap();
                for (j, e_in) in step(cur, out_end) {
                    if j == start && path.len() >= 2 && e_in == e0 {
                        cycles.insert(normalize_cycle(&path));
                    } else if j > start && !path.contains(&j) {
                        let mut p = path.clone();
                        p.push(j);
                        stack.push((p, 1 - e_in));
                    }
                }
            }
        }
    }
    cycles.into_iter().collect()
}

fn normalize_cycle(c: &[usize]) -> Vec<usize> {
    let k = c.len();
    let mut best: Option<Vec<usize>> = None;
    for s in 0..k {
        for rev in [false, true] {
            let v: Vec<usize> = (0..k)
                .map(|i| {
                    if rev {
                        c[(s + k - i) % k]
                    } else {
                        c[(s + i) % k]
                    }
                })
                .collect();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.unwrap_or_default()
}

/// Block-to-block distances: blocks are adjacent when some triangle outside
/// both shares an edge with a triangle of each; the distance is the number
/// of intermediate blocks on a shortest path.
fn block_distances(map: &PolyhedralMap, raw: &[RawBlock]) -> Vec<Vec<Option<u32>>> {
    let faces = map.faces();
    let tri_nbrs = |t: usize| -> Vec<usize> {
        let f = &faces[t];
        (0..3)
            .map(|i| other_face(map, f[i], f[(i + 1) % 3], t))
            .filter(|&h| faces[h].len() == 3)
            .collect()
    };
    let k = raw.len();
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            let own: Vec<usize> = raw[i]
                .triangles
                .iter()
                .chain(raw[j].triangles.iter())
                .copied()
                .collect();
            let near_i: BTreeSet<usize> =
                raw[i].triangles.iter().flat_map(|&t| tri_nbrs(t)).collect();
            let linked = raw[j]
                .triangles
                .iter()
                .flat_map(|&t| tri_nbrs(t))
                .any(|t| near_i.contains(&t) && !own.contains(&t));
            if linked {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    (0..k)
        .map(|s| {
            let mut dist = vec![None; k];
            dist[s] = Some(0u32);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v].is_none() {
                        dist[v] = Some(dist[u].unwrap() + 1);
                        queue.push_back(v);
                    }
                }
            }
            dist.into_iter()
                .map(|d| d.map(|x| x.saturating_sub(1)))
                .collect()
        })
        .collect()
}

/// The multiset, over block cycles, of the multisets of distances between
/// consecutive blocks. Unreachable pairs count as `u32::MAX`.
pub fn block_certificate(map: &PolyhedralMap, g: usize) -> BlockCycleCertificate {
    let raw = raw_blocks(map, g);
    let cycles = block_cycles(&raw, g);
    if cycles.is_empty() {
        return BlockCycleCertificate(Vec::new());
    }
    let dist = block_distances(map, &raw);
    let mut out: Vec<Vec<u32>> = cycles
        .iter()
        .map(|c| {
            let k = c.len();
            let mut ds: Vec<u32> = (0..k)
                .map(|i| dist[c[i]][c[(i + 1) % k]].unwrap_or(u32::MAX))
                .collect();
            ds.sort();
            ds
        })
        .collect();
    out.sort();
    BlockCycleCertificate(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fixtures;

    fn k(name: &str) -> PolyhedralMap {
        catalog::get(name).unwrap().map
    }

    #[test]
    fn no_blocks_without_anchor_faces() {
        assert!(blocks(&fixtures::tetrahedron(), 3).is_empty());
        assert!(blocks(&fixtures::n1(), 10).is_empty());
        assert_eq!(
            block_certificate(&fixtures::n1(), 10),
            BlockCycleCertificate(Vec::new())
        );
    }

    #[test]
    fn blocks_join_distinct_decagons() {
        let m = k("K1_3-4_10");
        let decagons: Vec<Vec<u32>> = m
            .labeled_faces()
            .into_iter()
            .filter(|f| f.len() == 10)
            .collect();
        let on = |u: u32, v: u32| {
            decagons
                .iter()
                .position(|f| f.contains(&u) && f.contains(&v))
        };
        let bs = blocks(&m, 10);
        assert!(!bs.is_empty());
        assert!(bs.iter().any(|b| on(b.a, b.b).is_some()
            && on(b.c, b.d).is_some()
            && on(b.a, b.b) != on(b.c, b.d)));
        assert_eq!(bs[0].to_string(), "[1,2,21|30]");
    }

    #[test]
    fn certificate_is_invariant_and_separates() {
        let (a, b) = (k("K1_3-4_10"), k("K2_3-4_10"));
        for m in [&a, &b] {
            let c = block_certificate(m, 10);
            let moved = m.relabeled(|l| (l * 7) % 31 + 100).unwrap();
            assert_eq!(block_certificate(&moved, 10), c);
            assert_eq!(block_certificate(&m.reflected(), 10), c);
            assert_eq!(blocks(&moved, 10).len(), blocks(m, 10).len());
        }
        assert_ne!(block_certificate(&a, 10), block_certificate(&b, 10));
        assert_eq!(
            block_certificate(&a, 10).to_string(),
            "{{1,2,2},{1,2,2},{1,2,2},{1,2,2},{1,2,2}}"
        );
    }
}
