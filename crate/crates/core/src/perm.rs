use std::fmt::Write as _;

use serde::Serialize;

/// A bijection on normalized vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexPermutation {
    images: Vec<usize>,
}

impl VertexPermutation {
    /// Panics if `images` is not a permutation of `0..len`.
    pub fn new(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        VertexPermutation { images }
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        VertexPermutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        VertexPermutation { images: inv }
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Disjoint cycles of length at least 2, each starting at its least
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for s in 0..self.images.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.images[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Cycle notation over the given labels, e.g. `(0,6)(1,7)`; the identity
    /// renders as `()`.
    pub fn to_cycle_string(&self, labels: &[u32]) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            let body: Vec<String> = c.iter().map(|&v| labels[v].to_string()).collect();
            let _ = write!(s, "({})", body.join(","));
        }
        s
    }
}
