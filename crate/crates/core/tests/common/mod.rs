//! Independent reference implementations used as oracles by the integration
//! suites. They share no search or symmetry code with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

/// Labelled maps of type `[3^4,p]` whose `p`-gons are
/// `[k·p, …, k·p + p - 1]` for `k < count`, built one vertex at a time by
/// choosing its whole link `v+1, x, y, z, v-1`. The triangle on the edge
/// `0-1` is fixed to `[0,1,p]`, which every such map admits after
/// relabelling.
pub fn star_search(p: usize, count: usize) -> Vec<Vec<Vec<u32>>> {
    let n = p * count;
    let mut s = Star {
        p,
        n,
        tris: Vec::new(),
        set: HashSet::new(),
        at: vec![Vec::new(); n],
        edge: vec![0; n * n],
        done: vec![false; n],
        out: Vec::new(),
    };
    for k in 0..count {
        for i in 0..p {
            let (a, b) = (k * p + i, k * p + (i + 1) % p);
            s.edge[a * n + b] = 1;
            s.edge[b * n + a] = 1;
        }
    }
    s.add(&[[0, 1, p]]);
    s.step();
    s.out
}

struct Star {
    p: usize,
    n: usize,
    tris: Vec<[usize; 3]>,
    set: HashSet<[usize; 3]>,
    at: Vec<Vec<usize>>,
    edge: Vec<u8>,
    done: Vec<bool>,
    out: Vec<Vec<Vec<u32>>>,
}

fn key(t: [usize; 3]) -> [usize; 3] {
    let mut k = t;
    k.sort();
    k
}

impl Star {
    fn anchor(&self, v: usize) -> usize {
        v / self.p
    }

    fn around(&self, v: usize) -> (usize, usize) {
        let base = v - v % self.p;
        let i = v % self.p;
        (base + (i + self.p - 1) % self.p, base + (i + 1) % self.p)
    }

    fn adjacent_on_anchor(&self, a: usize, b: usize) -> bool {
        let (m, l) = self.around(a);
        b == m || b == l
    }

    fn add(&mut self, ts: &[[usize; 3]]) {
        for &t in ts {
            let id = self.tris.len();
            self.tris.push(t);
            self.set.insert(key(t));
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                self.edge[a * self.n + b] += 1;
                self.edge[b * self.n + a] += 1;
                self.at[t[i]].push(id);
            }
        }
    }

    fn remove(&mut self, count: usize) {
        for _ in 0..count {
            let t = self.tris.pop().unwrap();
            self.set.remove(&key(t));
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                self.edge[a * self.n + b] -= 1;
                self.edge[b * self.n + a] -= 1;
                self.at[t[i]].pop();
            }
        }
    }

    /// The neighbours of `u` form paths, closing into a cycle only once
    /// all four triangles are present.
    fn link_ok(&self, u: usize) -> bool {
        let (m, l) = self.around(u);
        let mut pairs = vec![(m, l)];
        for &id in &self.at[u] {
            let t = self.tris[id];
            let o: Vec<usize> = t.iter().copied().filter(|&x| x != u).collect();
            pairs.push((o[0], o[1]));
        }
        if pairs.len() > 5 {
            return false;
        }
        let mut deg: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &pairs {
            for x in [a, b] {
                match deg.iter_mut().find(|(y, _)| *y == x) {
                    Some(e) => e.1 += 1,
                    None => deg.push((x, 1)),
                }
            }
        }
        if deg.iter().any(|&(_, d)| d > 2) {
            return false;
        }
        // A graph of maximum degree 2 has a cycle iff edges >= vertices in
        // some component; with all degrees 2 it is a union of cycles.
        let closed = deg.iter().all(|&(_, d)| d == 2);
        if pairs.len() == 5 {
            return closed && deg.len() == 5 && self.single_cycle(&pairs);
        }
        // Fewer than five faces: no component may close up.
        !self.has_cycle(&pairs)
    }

    fn has_cycle(&self, pairs: &[(usize, usize)]) -> bool {
        let mut comp: Vec<(usize, usize)> = Vec::new();
        fn find(comp: &mut Vec<(usize, usize)>, x: usize) -> usize {
            match comp.iter().find(|(y, _)| *y == x) {
                Some(&(_, r)) if r == x => x,
                Some(&(_, r)) => find(comp, r),
                None => {
                    comp.push((x, x));
                    x
                }
            }
        }
        for &(a, b) in pairs {
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra == rb {
                return true;
            }
            comp.iter_mut().find(|(y, _)| *y == ra).unwrap().1 = rb;
        }
        false
    }

    fn single_cycle(&self, pairs: &[(usize, usize)]) -> bool {
        let mut seen = BTreeSet::new();
        let (start, mut cur) = pairs[0];
        let mut prev_pair = 0;
        seen.insert(start);
        for _ in 0..pairs.len() {
            seen.insert(cur);
            let next = (0..pairs.len())
                .find(|&j| j != prev_pair && (pairs[j].0 == cur || pairs[j].1 == cur));
            let Some(j) = next else { return false };
            cur = if pairs[j].0 == cur {
                pairs[j].1
            } else {
                pairs[j].0
            };
            prev_pair = j;
        }
        cur == pairs[0].1 && seen.len() == pairs.len()
    }

    fn triangle_ok(&self, t: [usize; 3]) -> bool {
        if self.set.contains(&key(t)) {
            return true;
        }
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            if a == b || self.edge[a * self.n + b] >= 2 {
                return false;
            }
            if self.anchor(a) == self.anchor(b) && !self.adjacent_on_anchor(a, b) {
                return false;
            }
        }
        !(self.anchor(t[0]) == self.anchor(t[1]) && self.anchor(t[1]) == self.anchor(t[2]))
    }

    fn step(&mut self) {
        let next = (0..self.n)
            .filter(|&v| !self.done[v])
            .max_by_key(|&v| (self.at[v].len(), std::cmp::Reverse(v)));
        let Some(v) = next else {
            if self.at.iter().all(|a| a.len() == 4) {
                let mut faces: Vec<Vec<u32>> = (0..self.n / self.p)
                    .map(|k| (k * self.p..(k + 1) * self.p).map(|x| x as u32).collect())
                    .collect();
                faces.extend(
                    self.tris
                        .iter()
                        .map(|t| t.iter().map(|&x| x as u32).collect()),
                );
                self.out.push(faces);
            }
            return;
        };
        let (m, l) = self.around(v);
        let have: Vec<[usize; 3]> = self.at[v].iter().map(|&id| key(self.tris[id])).collect();
        let others: Vec<usize> = (0..self.n)
            .filter(|&x| self.anchor(x) != self.anchor(v))
            .collect();
        // An existing triangle on an edge at `v` fixes the next link vertex.
        let forced = |a: usize, not: Option<usize>| -> Option<usize> {
            have.iter()
                .filter(|t| t.contains(&a) && not.is_none_or(|w| !t.contains(&w)))
                .map(|t| *t.iter().find(|&&x| x != v && x != a).unwrap())
                .next()
        };
        let choices =
            |f: Option<usize>| -> Vec<usize> { f.map_or_else(|| others.clone(), |w| vec![w]) };
        for x in choices(forced(l, None)) {
            if self.anchor(x) == self.anchor(v) || !self.triangle_ok([v, l, x]) {
                continue;
            }
            for y in choices(forced(x, Some(l))) {
                if y == x || self.anchor(y) == self.anchor(v) || !self.triangle_ok([v, x, y]) {
                    continue;
                }
                for z in choices(forced(m, None)) {
                    if self.anchor(z) == self.anchor(v) {
                        continue;
                    }
                    if z == x
                        || z == y
                        || !self.triangle_ok([v, y, z])
                        || !self.triangle_ok([v, z, m])
                    {
                        continue;
                    }
                    let ts = [[v, l, x], [v, x, y], [v, y, z], [v, z, m]];
                    let keys: Vec<[usize; 3]> = ts.iter().map(|&t| key(t)).collect();
                    if !have.iter().all(|h| keys.contains(h)) {
                        continue;
                    }
                    let new: Vec<[usize; 3]> = ts
                        .iter()
                        .copied()
                        .filter(|&t| !self.set.contains(&key(t)))
                        .collect();
                    let mut uniq = new.clone();
                    uniq.sort_by_key(|&t| key(t));
                    uniq.dedup_by_key(|t| key(*t));
                    if uniq.len() != new.len() {
                        continue;
                    }
                    self.add(&new);
                    let touched: BTreeSet<usize> =
                        new.iter().flat_map(|t| t.iter().copied()).collect();
                    let edges_ok = new
                        .iter()
                        .all(|t| (0..3).all(|i| self.edge[t[i] * self.n + t[(i + 1) % 3]] <= 2));
                    if edges_ok
                        && touched
                            .iter()
                            .all(|&u| self.at[u].len() <= 4 && self.link_ok(u))
                    {
                        self.done[v] = true;
                        self.step();
                        self.done[v] = false;
                    }
                    self.remove(new.len());
                }
            }
        }
    }
}
