//! Vertices, edges, vertex sets and colours.
//!
//! An [`Edge`] is a sorted set of at most [`MAX_K`] vertices packed into a
//! `u64`, one byte per vertex (stored as `v + 1`, first vertex in the high
//! byte). Numeric order of the packed word is lexicographic order on the
//! sorted vertex sequences, with a proper prefix sorting first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex label.
pub type Vertex = usize;

/// Largest supported uniformity.
pub const MAX_K: usize = 8;
/// Vertex labels must be below this bound.
pub const MAX_N: usize = 255;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Colour {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Colour {
    pub const BOTH: [Colour; 2] = [Colour::Red, Colour::Blue];

    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Colour::Red => 0,
            Colour::Blue => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'R',
            Colour::Blue => 'B',
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

/// A sorted set of distinct vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Edge(u64);

#[inline]
fn shift(i: usize) -> u32 {
    56 - 8 * i as u32
}

impl Edge {
    pub const EMPTY: Edge = Edge(0);

    /// Builds an edge from vertices in any order.
    pub fn new(vertices: &[Vertex]) -> Result<Edge> {
        if vertices.len() > MAX_K {
            return Err(Error::InvalidParameter(format!(
                "edge has {} vertices, at most {MAX_K} supported",
                vertices.len()
            )));
        }
        let mut v: Vec<Vertex> = vertices.to_vec();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidParameter(format!("duplicate vertex {}", w[0])));
            }
        }
        if let Some(&big) = v.last() {
            if big >= MAX_N {
                return Err(Error::InvalidParameter(format!("vertex {big} exceeds {}", MAX_N - 1)));
            }
        }
        Ok(Edge::from_sorted(&v))
    }

    /// Builds an edge from a strictly increasing slice. Not checked.
    pub fn from_sorted(vertices: &[Vertex]) -> Edge {
        debug_assert!(vertices.len() <= MAX_K);
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut word = 0u64;
        for (i, &v) in vertices.iter().enumerate() {
            word |= ((v as u64) + 1) << shift(i);
        }
        Edge(word)
    }

    pub fn singleton(v: Vertex) -> Edge {
        Edge::from_sorted(&[v])
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        if self.0 == 0 {
            0
        } else {
            ((71 - self.0.trailing_zeros()) / 8) as usize
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The `i`-th smallest vertex.
    #[inline]
    pub fn get(self, i: usize) -> Vertex {
        debug_assert!(i < self.len());
        (((self.0 >> shift(i)) & 0xff) - 1) as Vertex
    }

    pub fn iter(self) -> EdgeIter {
        EdgeIter { word: self.0 }
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }

    #[inline]
    pub fn contains(self, v: Vertex) -> bool {
        let b = v as u64 + 1;
        let mut w = self.0;
        while w != 0 {
            let top = w >> 56;
            if top >= b {
                return top == b;
            }
            w <<= 8;
        }
        false
    }

    pub fn is_subset(self, other: Edge) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersection_len(self, other: Edge) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    pub fn is_disjoint(self, other: Edge) -> bool {
        self.intersection_len(other) == 0
    }

    /// Union of two sets; the result must fit in [`MAX_K`] vertices.
    pub fn union(self, other: Edge) -> Edge {
        let mut out = self;
        for v in other.iter() {
            out = out.with(v);
        }
        out
    }

    #[inline]
    pub fn with(self, v: Vertex) -> Edge {
        let b = v as u64 + 1;
        let w = self.0;
        let mut p = 0;
        while p < 8 {
            let x = (w >> shift(p)) & 0xff;
            if x == b {
                return self;
            }
            if x == 0 || x > b {
                break;
            }
            p += 1;
        }
        assert!(w & 0xff == 0, "union exceeds {MAX_K} vertices");
        let hi = if p == 0 { 0 } else { !0u64 << (64 - 8 * p as u32) };
        Edge((w & hi) | (b << shift(p)) | ((w & !hi) >> 8))
    }

    pub fn minus(self, other: Edge) -> Edge {
        let mut out = self;
        for v in other.iter() {
            out = out.without(v);
        }
        out
    }

    #[inline]
    pub fn without(self, v: Vertex) -> Edge {
        let b = v as u64 + 1;
        let w = self.0;
        let mut p = 0;
        while p < 8 {
            let x = (w >> shift(p)) & 0xff;
            if x == b {
                let hi = if p == 0 { 0 } else { !0u64 << (64 - 8 * p as u32) };
                let lo = if p == 7 { 0 } else { (w << (8 * (p as u32 + 1))) >> (8 * p as u32) };
                return Edge((w & hi) | lo);
            }
            if x == 0 || x > b {
                break;
            }
            p += 1;
        }
        self
    }

    /// All subsets of the given size, in lexicographic order.
    pub fn subsets(self, size: usize) -> Vec<Edge> {
        let verts = self.to_vec();
        let mut out = Vec::new();
        crate::combin::for_each_combination(&verts, size, |c| out.push(Edge::from_sorted(c)));
        out
    }

    /// The `len` facets obtained by removing one vertex each.
    pub fn facets(self) -> impl Iterator<Item = Edge> {
        self.iter().map(move |v| self.without(v))
    }

    pub fn to_set(self) -> VertexSet {
        self.iter().collect()
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Edge, D::Error> {
        let v = Vec::<Vertex>::deserialize(d)?;
        Edge::new(&v).map_err(serde::de::Error::custom)
    }
}

pub struct EdgeIter {
    word: u64,
}

impl Iterator for EdgeIter {
    type Item = Vertex;

    #[inline]
    fn next(&mut self) -> Option<Vertex> {
        let top = self.word >> 56;
        if top == 0 {
            return None;
        }
        self.word <<= 8;
        Some((top - 1) as Vertex)
    }
}

/// Bitset over vertex labels below 256.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet([u64; 4]);

impl VertexSet {
    pub fn new() -> VertexSet {
        VertexSet([0; 4])
    }

    /// `{0, …, n−1}`.
    pub fn range(n: usize) -> VertexSet {
        assert!(n <= 256);
        let mut s = VertexSet::new();
        for (i, w) in s.0.iter_mut().enumerate() {
            let lo = i * 64;
            if n >= lo + 64 {
                *w = u64::MAX;
            } else if n > lo {
                *w = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v < 256 && self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) -> bool {
        let fresh = !self.contains(v);
        self.0[v >> 6] |= 1 << (v & 63);
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) -> bool {
        let had = self.contains(v);
        self.0[v >> 6] &= !(1 << (v & 63));
        had
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = *self;
        for i in 0..4 {
            s.0[i] |= other.0[i];
        }
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = *self;
        for i in 0..4 {
            s.0[i] &= other.0[i];
        }
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = *self;
        for i in 0..4 {
            s.0[i] &= !other.0[i];
        }
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        (0..4).all(|i| self.0[i] & !other.0[i] == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        (0..4).all(|i| self.0[i] & other.0[i] == 0)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        e.iter().all(|v| self.contains(v))
    }

    pub fn meets_edge(&self, e: Edge) -> bool {
        e.iter().any(|v| self.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..4).flat_map(move |i| {
            let mut w = self.0[i];
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Vertex> {
        self.iter().next()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> VertexSet {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Extend<Vertex> for VertexSet {
    fn extend<I: IntoIterator<Item = Vertex>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<VertexSet, D::Error> {
        let v = Vec::<Vertex>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= 256) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}
