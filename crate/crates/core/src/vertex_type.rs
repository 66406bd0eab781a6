use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("face size {0} is below 3")]
    SizeTooSmall(u32),
    #[error("vertex degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("malformed type string `{0}`")]
    Malformed(String),
}

/// Cyclic sequence of face sizes around a vertex, stored in canonical form:
/// the lexicographically least sequence over all rotations and reflections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexType {
    sizes: Vec<u32>,
}

/// Lexicographically least rotation or reflection of a cyclic sequence.
pub fn canonical_cyclic(seq: &[u32]) -> Vec<u32> {
    let d = seq.len();
    let mut best: Option<Vec<u32>> = None;
    let mut rev: Vec<u32> = seq.to_vec();
    rev.reverse();
    for s in [seq, &rev[..]] {
        for r in 0..d {
            let cand: Vec<u32> = (0..d).map(|i| s[(r + i) % d]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

impl VertexType {
    pub fn new(sizes: &[u32]) -> Result<Self, TypeError> {
        if sizes.len() < 3 {
            return Err(TypeError::DegreeTooSmall(sizes.len()));
        }
        if let Some(&s) = sizes.iter().find(|&&s| s < 3) {
            return Err(TypeError::SizeTooSmall(s));
        }
        Ok(VertexType {
            sizes: canonical_cyclic(sizes),
        })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn degree(&self) -> usize {
        self.sizes.len()
    }

    /// Run-length form `(p_i, n_i)`. Because the canonical sequence starts at
    /// the beginning of a maximal run, its linear runs are its cyclic runs.
    pub fn runs(&self) -> Vec<(u32, u32)> {
        let mut runs: Vec<(u32, u32)> = Vec::new();
        for &s in &self.sizes {
            match runs.last_mut() {
                Some((p, n)) if *p == s => *n += 1,
                _ => runs.push((s, 1)),
            }
        }
        runs
    }

    /// Distinct sizes with their multiplicities, `q_i -> m_i`.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &s in &self.sizes {
            *m.entry(s).or_insert(0) += 1;
        }
        m
    }

    /// Length of the link cycle of a vertex of this type.
    pub fn link_length(&self) -> u32 {
        self.sizes.iter().map(|s| s - 2).sum()
    }

    /// True if `partial` (a linear run of face sizes seen consecutively around
    /// a vertex) occurs as a contiguous window of this cyclic type in either
    /// direction.
    pub fn admits_window(&self, partial: &[u32]) -> bool {
        let d = self.sizes.len();
        if partial.len() > d {
            return false;
        }
        if partial.is_empty() {
            return true;
        }
        (0..d).any(|r| {
            partial
                .iter()
                .enumerate()
                .all(|(i, &p)| self.sizes[(r + i) % d] == p)
                || partial
                    .iter()
                    .enumerate()
                    .all(|(i, &p)| self.sizes[(r + d - i) % d] == p)
        })
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .runs()
            .iter()
            .map(|(p, n)| format!("{p}^{n}"))
            .collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl FromStr for VertexType {
    type Err = TypeError;

    /// Accepts `[3^4,10]`, `[3^4, 10^1]` or a bare `3,3,3,3,10`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypeError::Malformed(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(&compact);
        if inner.is_empty() {
            return Err(bad());
        }
        let mut sizes = Vec::new();
        for part in inner.split(',') {
            let (p, n) = match part.split_once('^') {
                Some((p, n)) => (p, n),
                None => (part, "1"),
            };
            let p: u32 = p.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            sizes.extend(std::iter::repeat_n(p, n));
        }
        VertexType::new(&sizes)
    }
}

impl TryFrom<String> for VertexType {
    type Error = TypeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<VertexType> for String {
    fn from(t: VertexType) -> String {
        t.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        let t = VertexType::new(&[3, 3, 4, 3, 3, 4]).unwrap();
        assert_eq!(t.sizes(), &[3, 3, 4, 3, 3, 4]);
        assert_eq!(t.to_string(), "[3^2,4^1,3^2,4^1]");
        let t = VertexType::new(&[10, 3, 3, 3, 3]).unwrap();
        assert_eq!(t.sizes(), &[3, 3, 3, 3, 10]);
        assert_eq!(t.to_string(), "[3^4,10^1]");
        assert_eq!(
            VertexType::new(&[3, 3, 4, 3, 6]).unwrap(),
            VertexType::new(&[3, 3, 6, 3, 4]).unwrap()
        );
    }

    #[test]
    fn parse_round_trip() {
        let t: VertexType = "[3^4,10]".parse().unwrap();
        assert_eq!(t.to_string(), "[3^4,10^1]");
        let u: VertexType = " [ 3^4 , 10^1 ] ".parse().unwrap();
        assert_eq!(t, u);
        let w: VertexType = "10,3,3,3,3".parse().unwrap();
        assert_eq!(t, w);
        assert_eq!(t.to_string().parse::<VertexType>().unwrap(), t);
        assert!("[2^3]".parse::<VertexType>().is_err());
        assert!("[3,4]".parse::<VertexType>().is_err());
        assert!("[x]".parse::<VertexType>().is_err());
    }

    #[test]
    fn runs_wrap_correctly() {
        let t = VertexType::new(&[4, 3, 3, 4, 4]).unwrap();
        assert_eq!(t.runs(), vec![(3, 2), (4, 3)]);
        let t = VertexType::new(&[3; 7]).unwrap();
        assert_eq!(t.runs(), vec![(3, 7)]);
    }

    #[test]
    fn windows() {
        let t = VertexType::new(&[3, 3, 3, 3, 10]).unwrap();
        assert!(t.admits_window(&[10, 3, 3]));
        assert!(t.admits_window(&[3, 10, 3]));
        assert!(!t.admits_window(&[10, 10]));
        let t = VertexType::new(&[3, 4, 3, 5]).unwrap();
        assert!(t.admits_window(&[5, 3, 4]));
        assert!(!t.admits_window(&[4, 5]));
    }
}
