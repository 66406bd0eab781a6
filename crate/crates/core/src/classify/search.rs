//! Backtracking generation of closed face complexes with a prescribed vertex
//! type. A state is a set of faces on vertices `0..used`; the search picks an
//! open edge (an edge in one face) and tries every face that can be glued on
//! its other side.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::vertex_type::VertexType;

/// Shared node counter and budget.
pub(crate) struct Budget {
    pub limit: u64,
    pub used: AtomicU64,
    pub exhausted: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Anchored mode: the first `count` faces are the pre-placed `p`-gons
/// `[k·p, …, k·p + p - 1]`, which partition the vertex set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Anchors {
    pub p: usize,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct State {
    n: usize,
    d: usize,
    sizes: Vec<u32>,
    /// How often each face size occurs in the type.
    mult: Vec<u32>,
    /// Remaining number of faces of each size.
    left: Vec<u64>,
    faces: Vec<Vec<u32>>,
    vfaces: Vec<Vec<u32>>,
    /// Faces on each edge, as a dense `n × n` count matrix.
    edge: Vec<u8>,
    /// Number of distinct neighbours of each vertex.
    nbrs: Vec<u32>,
    /// Faces of each size at each vertex.
    at_size: Vec<Vec<u32>>,
    used: usize,
    anchors: Option<Anchors>,
    /// Anchored mode: vertices that lie on some non-anchor face.
    touched: Vec<bool>,
}

impl State {
    pub fn new(
        t: &VertexType,
        n: usize,
        face_counts: &[(u32, u64)],
        anchors: Option<Anchors>,
    ) -> Self {
        let max = *t.sizes().iter().max().unwrap() as usize;
        let mut mult = vec![0; max + 1];
        for &s in t.sizes() {
            mult[s as usize] += 1;
        }
        let mut left = vec![0; max + 1];
        for &(s, x) in face_counts {
            left[s as usize] = x;
        }
        let mut st = State {
            n,
            d: t.degree(),
            sizes: t.sizes().to_vec(),
            mult,
            left,
            faces: Vec::new(),
            vfaces: vec![Vec::new(); n],
            edge: vec![0; n * n],
            nbrs: vec![0; n],
            at_size: vec![vec![0; max + 1]; n],
            used: 0,
            anchors,
            touched: vec![false; n],
        };
        match anchors {
            Some(a) => {
                st.used = n;
                for k in 0..a.count {
                    let f: Vec<u32> = (k * a.p..(k + 1) * a.p).map(|v| v as u32).collect();
                    st.add_face(f);
                }
            }
            None => {
                // Full star of vertex 0 with the faces in canonical order and
                // the link labelled 1, 2, … around it.
                let d = st.d;
                let mut next = 2u32;
                let first = 1u32;
                let mut corner = first;
                for j in 0..d {
                    let s = st.sizes[j];
                    let mut f = vec![0, corner];
                    for _ in 0..s - 3 {
                        f.push(next);
                        next += 1;
                    }
                    let end = if j + 1 == d {
                        first
                    } else {
                        next += 1;
                        next - 1
                    };
                    f.push(end);
                    corner = end;
                    st.add_face(f);
                }
                st.used = next as usize;
            }
        }
        st
    }

    pub fn faces(&self) -> &[Vec<u32>] {
        &self.faces
    }

    fn e(&self, a: u32, b: u32) -> u8 {
        self.edge[a as usize * self.n + b as usize]
    }

    fn bump_edge(&mut self, a: u32, b: u32, delta: i8) {
        let (a, b) = (a as usize, b as usize);
        let before = self.edge[a * self.n + b];
        let after = (before as i8 + delta) as u8;
        self.edge[a * self.n + b] = after;
        self.edge[b * self.n + a] = after;
        if before == 0 && after == 1 {
            self.nbrs[a] += 1;
            self.nbrs[b] += 1;
        } else if before == 1 && after == 0 {
            self.nbrs[a] -= 1;
            self.nbrs[b] -= 1;
        }
    }

    fn add_face(&mut self, f: Vec<u32>) {
        let id = self.faces.len() as u32;
        let k = f.len();
        for i in 0..k {
            self.bump_edge(f[i], f[(i + 1) % k], 1);
            self.vfaces[f[i] as usize].push(id);
            self.at_size[f[i] as usize][k] += 1;
        }
        self.left[k] -= 1;
        self.faces.push(f);
    }

    fn pop_face(&mut self) {
        let f = self.faces.pop().expect("face to remove");
        let k = f.len();
        for i in 0..k {
            self.bump_edge(f[i], f[(i + 1) % k], -1);
            self.vfaces[f[i] as usize].pop();
            self.at_size[f[i] as usize][k] -= 1;
        }
        self.left[k] += 1;
    }

    fn complete(&self, v: u32) -> bool {
        self.vfaces[v as usize].len() == self.d
    }

    /// An open edge to branch on: the one whose possible faces have the
    /// fewest free vertices in total, or `None` when every edge lies in two
    /// faces.
    fn pick_open_edge(&self) -> Option<(u32, u32)> {
        let mut best: Option<((usize, usize, u32, u32), (u32, u32))> = None;
        for f in &self.faces {
            let k = f.len();
            for i in 0..k {
                let (a, b) = (f[i], f[(i + 1) % k]);
                if self.e(a, b) != 1 {
                    continue;
                }
                let cost: usize = self.allowed_sizes(a, b).iter().map(|s| s - 2).sum();
                let missing = |v: u32| self.d - self.vfaces[v as usize].len();
                let score = (cost, missing(a).min(missing(b)), a.min(b), a.max(b));
                if cost == 0 {
                    return Some((a, b));
                }
                if best.is_none_or(|(s, _)| score < s) {
                    best = Some((score, (a, b)));
                }
            }
        }
        best.map(|(_, e)| e)
    }

    /// Neighbours `w` of `v` whose edge `v-w` lies in exactly one face.
    fn open_ends(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for &g in &self.vfaces[v as usize] {
            let f = &self.faces[g as usize];
            let m = f.len();
            let i = f.iter().position(|&x| x == v).unwrap();
            for w in [f[(i + m - 1) % m], f[(i + 1) % m]] {
                if self.e(v, w) == 1 && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Whether a face of size `s` can sit at `v` next to the edge `v-w`,
    /// with its other edge at `v` either new or one of the open ones.
    fn corner_fits(&self, v: u32, s: usize, w: u32) -> bool {
        let fresh = (self.nbrs[v as usize] as usize) < self.d
            && self.corner_ok(v, Some((s as u32, w, u32::MAX)));
        fresh
            || self
                .open_ends(v)
                .into_iter()
                .any(|x| x != w && self.corner_ok(v, Some((s as u32, w, x))))
    }

    /// Face sizes that can be glued onto the open edge `a-b`.
    fn allowed_sizes(&self, a: u32, b: u32) -> Vec<usize> {
        (3..self.mult.len())
            .filter(|&s| {
                self.mult[s] > 0
                    && self.left[s] > 0
                    && self.size_room(a, s)
                    && self.size_room(b, s)
                    && self.corner_fits(a, s, b)
                    && self.corner_fits(b, s, a)
            })
            .collect()
    }

    /// Faces of admissible size around each vertex never exceed the type's
    /// multiset.
    fn size_room(&self, v: u32, s: usize) -> bool {
        self.at_size[v as usize][s] < self.mult[s]
    }

    /// A vertex may gain the edge `v-w` if it is present already (with room
    /// for one more face) or `v` still has a free neighbour slot.
    fn edge_room(&self, v: u32, w: u32) -> bool {
        match self.e(v, w) {
            0 => (self.nbrs[v as usize] as usize) < self.d,
            1 => true,
            _ => false,
        }
    }

    /// Representatives of the vertex choices up to the symmetries of the
    /// anchored state that fix everything placed so far and `partial`.
    fn anchored_choices(&self, partial: &[u32]) -> Vec<u32> {
        let a = self.anchors.expect("anchored");
        let in_partial = |v: usize| partial.contains(&(v as u32));
        let mut out = Vec::new();
        let mut untouched_taken = false;
        for k in 0..a.count {
            let base = k * a.p;
            let touched: Vec<usize> = (0..a.p)
                .filter(|&i| self.touched[base + i] || in_partial(base + i))
                .collect();
            if touched.is_empty() {
                if !untouched_taken {
                    out.push(base as u32);
                    untouched_taken = true;
                }
            } else if touched.iter().all(|&i| i == 0 || 2 * i == a.p) {
                out.extend((0..=a.p / 2).map(|i| (base + i) as u32));
            } else {
                out.extend((0..a.p).map(|i| (base + i) as u32));
            }
        }
        out
    }

    /// Every face that can be glued onto the open edge `a-b`, as vertex
    /// sequences `[a, b, z_1, …]`.
    fn candidates(&self, a: u32, b: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for s in self.allowed_sizes(a, b) {
            let mut f = vec![a, b];
            self.extend_face(s, &mut f, 0, &mut out);
        }
        out
    }

    fn extend_face(&self, s: usize, f: &mut Vec<u32>, fresh: usize, out: &mut Vec<Vec<u32>>) {
        let prev = *f.last().unwrap();
        let last = f.len() + 1 == s;
        let a = f[0];
        let mut options: Vec<u32> = match self.anchors {
            Some(_) => self.anchored_choices(f),
            None => (0..self.used as u32).collect(),
        };
        if self.anchors.is_none() && self.used + fresh < self.n {
            options.push((self.used + fresh) as u32);
        }
        for z in options {
            let is_fresh = z as usize >= self.used;
            if !is_fresh {
                if f.contains(&z) || self.complete(z) || !self.size_room(z, s) {
                    continue;
                }
                if !self.edge_room(prev, z) || !self.edge_room(z, prev) {
                    continue;
                }
                if last && (!self.edge_room(z, a) || !self.edge_room(a, z)) {
                    continue;
                }
            } else {
                // A fresh vertex needs free neighbour slots where it attaches.
                let has_slot =
                    |v: u32| v as usize >= self.used || (self.nbrs[v as usize] as usize) < self.d;
                if !has_slot(prev) || (last && !has_slot(a)) {
                    continue;
                }
            }
            let pp = f[f.len() - 2];
            if (prev as usize) < self.used && !self.corner_ok(prev, Some((s as u32, pp, z))) {
                continue;
            }
            if last {
                let b = f[1];
                if !is_fresh && !self.corner_ok(z, Some((s as u32, prev, a))) {
                    continue;
                }
                if !self.corner_ok(a, Some((s as u32, z, b))) {
                    continue;
                }
            }
            f.push(z);
            if last {
                out.push(f.clone());
            } else {
                self.extend_face(s, f, fresh + is_fresh as usize, out);
            }
            f.pop();
        }
    }

    /// Two faces meet in nothing, a vertex, or one common edge.
    fn meets_properly(&self, f: &[u32]) -> bool {
        let mut shared: Vec<(u32, u32)> = Vec::new();
        for &v in f {
            if v as usize >= self.used {
                continue;
            }
            for &g in &self.vfaces[v as usize] {
                match shared.iter_mut().find(|(h, _)| *h == g) {
                    Some(e) => e.1 += 1,
                    None => shared.push((g, 1)),
                }
            }
        }
        for (g, c) in shared {
            if c >= 3 {
                return false;
            }
            if c == 2 {
                let gf = &self.faces[g as usize];
                let common: Vec<u32> = f.iter().copied().filter(|v| gf.contains(v)).collect();
                if !adjacent(f, common[0], common[1]) || !adjacent(gf, common[0], common[1]) {
                    return false;
                }
            }
        }
        true
    }

    /// The faces at `v` must form either one cycle realizing the type, or
    /// disjoint paths that fit into the type's cyclic sequence with gaps.
    fn vertex_ok(&self, v: u32) -> bool {
        self.corner_ok(v, None)
    }

    /// `vertex_ok` with one more face at `v`, given as `(size, w1, w2)` where
    /// `w1`, `w2` are its neighbours of `v`.
    fn corner_ok(&self, v: u32, extra: Option<(u32, u32, u32)>) -> bool {
        let fs = &self.vfaces[v as usize];
        let k = fs.len() + extra.is_some() as usize;
        if k > self.d {
            return false;
        }
        // (size, w1, w2) per face, where w1, w2 are the neighbours of v on it.
        let info: Vec<(u32, u32, u32)> = fs
            .iter()
            .map(|&g| {
                let f = &self.faces[g as usize];
                let m = f.len();
                let i = f.iter().position(|&x| x == v).unwrap();
                (m as u32, f[(i + m - 1) % m], f[(i + 1) % m])
            })
            .chain(extra)
            .collect();
        if let Some((_, w1, w2)) = extra {
            let on = |w: u32| info.iter().filter(|x| x.1 == w || x.2 == w).count();
            if on(w1) > 2 || on(w2) > 2 {
                return false;
            }
        }
        let partner = |i: usize, w: u32| -> Option<usize> {
            (0..k).find(|&j| j != i && (info[j].1 == w || info[j].2 == w))
        };
        let mut seen = vec![false; k];
        let mut paths: Vec<Vec<u32>> = Vec::new();
        for i in 0..k {
            if seen[i] {
                continue;
            }
            let open = if partner(i, info[i].1).is_none() {
                Some(info[i].1)
            } else if partner(i, info[i].2).is_none() {
                Some(info[i].2)
            } else {
                None
            };
            let Some(w_in) = open else { continue };
            let mut path = Vec::new();
            let (mut cur, mut w_in) = (i, w_in);
            loop {
                seen[cur] = true;
                path.push(info[cur].0);
                let w_out = if info[cur].1 == w_in {
                    info[cur].2
                } else {
                    info[cur].1
                };
                match partner(cur, w_out) {
                    Some(j) if !seen[j] => {
                        cur = j;
                        w_in = w_out;
                    }
                    Some(_) => return false,
                    None => break,
                }
            }
            paths.push(path);
        }
        if seen.iter().any(|s| !s) {
            // Some faces close up into a cycle.
            if !paths.is_empty() || k != self.d {
                return false;
            }
            let mut cyc = Vec::with_capacity(k);
            let (mut cur, mut w_in) = (0usize, info[0].1);
            for _ in 0..k {
                cyc.push(info[cur].0);
                let w_out = if info[cur].1 == w_in {
                    info[cur].2
                } else {
                    info[cur].1
                };
                match partner(cur, w_out) {
                    Some(j) => {
                        cur = j;
                        w_in = w_out;
                    }
                    None => return false,
                }
            }
            if cur != 0 {
                return false;
            }
            return crate::vertex_type::canonical_cyclic(&cyc) == self.sizes;
        }
        fits(&self.sizes, &paths)
    }

    /// Glues `f`, checks it, and reports whether the state is still
    /// consistent. The face stays added either way; call `pop_face`.
    fn push_checked(&mut self, f: Vec<u32>) -> bool {
        if !self.meets_properly(&f) {
            self.add_face(f);
            return false;
        }
        let top = f.iter().copied().max().unwrap() as usize + 1;
        self.used = self.used.max(top);
        self.add_face(f);
        let f = self.faces.last().unwrap().clone();
        f.iter().all(|&v| self.vertex_ok(v))
    }

    fn undo(&mut self, used_before: usize) {
        self.pop_face();
        self.used = used_before;
    }

    fn mark_touched(&mut self, f: &[u32]) -> Vec<u32> {
        let mut newly = Vec::new();
        if self.anchors.is_some() {
            for &v in f {
                if !self.touched[v as usize] {
                    self.touched[v as usize] = true;
                    newly.push(v);
                }
            }
        }
        newly
    }

    fn unmark(&mut self, newly: &[u32]) {
        for &v in newly {
            self.touched[v as usize] = false;
        }
    }

    fn closed_and_complete(&self) -> bool {
        self.used == self.n && (0..self.n as u32).all(|v| self.complete(v))
    }

    /// Children of this state: `Ok(None)` when it is a leaf.
    pub fn children(&self) -> Option<Vec<State>> {
        let (a, b) = self.pick_open_edge()?;
        let mut out = Vec::new();
        for f in self.candidates(a, b) {
            let mut child = self.clone();
            child.mark_touched(&f);
            if child.push_checked(f) {
                out.push(child);
            }
        }
        Some(out)
    }

    pub fn is_solution(&self) -> bool {
        self.pick_open_edge().is_none() && self.closed_and_complete()
    }

    /// Depth-first completion, passing each complete map to `out`; false
    /// when the budget ran out.
    pub fn dfs(&mut self, budget: &Budget, out: &mut dyn FnMut(&[Vec<u32>])) -> bool {
        if !budget.tick() {
            return false;
        }
        let Some((a, b)) = self.pick_open_edge() else {
            if self.closed_and_complete() {
                out(&self.faces);
            }
            return true;
        };
        for f in self.candidates(a, b) {
            let used_before = self.used;
            let newly = self.mark_touched(&f);
            let ok = self.push_checked(f);
            let fine = !ok || self.dfs(budget, out);
            self.undo(used_before);
            self.unmark(&newly);
            if !fine {
                return false;
            }
        }
        true
    }
}

fn adjacent(f: &[u32], a: u32, b: u32) -> bool {
    let k = f.len();
    (0..k).any(|i| {
        let (x, y) = (f[i], f[(i + 1) % k]);
        (x == a && y == b) || (x == b && y == a)
    })
}

/// Whether the face-size paths can be laid disjointly, each in either
/// direction, along the cyclic sequence `sizes` with at least one position
/// between consecutive paths.
pub(crate) fn fits(sizes: &[u32], paths: &[Vec<u32>]) -> bool {
    let d = sizes.len();
    let total: usize = paths.iter().map(|p| p.len()).sum();
    if paths.is_empty() {
        return true;
    }
    if total + paths.len() > d {
        return false;
    }
    let mut occupied = vec![false; d];
    fn place(sizes: &[u32], paths: &[Vec<u32>], idx: usize, occupied: &mut [bool]) -> bool {
        if idx == paths.len() {
            return true;
        }
        let d = sizes.len();
        let p = &paths[idx];
        let len = p.len();
        for start in 0..d {
            for rev in [false, true] {
                let pos = |i: usize| {
                    if rev {
                        (start + d - i) % d
                    } else {
                        (start + i) % d
                    }
                };
                let before = if rev {
                    (start + 1) % d
                } else {
                    (start + d - 1) % d
                };
                let after = pos(len);
                if occupied[before] || occupied[after] {
                    continue;
                }
                if !(0..len).all(|i| !occupied[pos(i)] && sizes[pos(i)] == p[i]) {
                    continue;
                }
                for i in 0..len {
                    occupied[pos(i)] = true;
                }
                let ok = place(sizes, paths, idx + 1, occupied);
                for i in 0..len {
                    occupied[pos(i)] = false;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    place(sizes, paths, 0, &mut occupied)
}
