//! Binomial coefficients, combination enumeration and colex ranks.

use std::sync::OnceLock;

use crate::edge::{Edge, Vertex, MAX_K, MAX_N};

/// `C(n, k)`, exact (panics on overflow of `u128`).
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Table of `C(v, j)` for `v <= MAX_N`, `j <= MAX_K`.
struct Table([[u64; MAX_K + 1]; MAX_N + 1]);

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [[0u64; MAX_K + 1]; MAX_N + 1];
        for (v, row) in t.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = binom(v, j) as u64;
            }
        }
        Table(t)
    })
}

#[inline]
pub fn small_binom(v: usize, j: usize) -> u64 {
    table().0[v][j]
}

/// Colex rank of a sorted set among all sets of the same size.
#[inline]
pub fn colex_rank(e: Edge) -> usize {
    let t = &table().0;
    let mut r = 0u64;
    for (i, v) in e.iter().enumerate() {
        r += t[v][i + 1];
    }
    r as usize
}

/// Colex ranks of `e ∪ {a, b}` for a fixed `e` and `a < b` outside it,
/// without building the edge. Terms may be negative so sums wrap.
pub struct PairRanks {
    base: u64,
    s1: [u64; MAX_K + 1],
    s2: [u64; MAX_K + 1],
    below: Vec<u8>,
}

impl PairRanks {
    pub fn new(e: Edge, bound: usize) -> PairRanks {
        let t = &table().0;
        let m = e.len();
        assert!(m + 2 <= MAX_K);
        let mut base = 0u64;
        let (mut s1, mut s2) = ([0u64; MAX_K + 1], [0u64; MAX_K + 1]);
        for j in (0..m).rev() {
            let x = e.get(j);
            base = base.wrapping_add(t[x][j + 1]);
            s1[j] = s1[j + 1].wrapping_add(t[x][j + 2].wrapping_sub(t[x][j + 1]));
            s2[j] = s2[j + 1].wrapping_add(t[x][j + 3].wrapping_sub(t[x][j + 1]));
        }
        let mut below = vec![0u8; bound];
        let mut p = 0u8;
        for (v, slot) in below.iter_mut().enumerate() {
            *slot = p;
            if e.contains(v) {
                p += 1;
            }
        }
        PairRanks { base, s1, s2, below }
    }

    #[inline]
    pub fn rank(&self, a: Vertex, b: Vertex) -> usize {
        debug_assert!(a < b);
        let t = &table().0;
        let (pa, pb) = (self.below[a] as usize, self.below[b] as usize);
        self.base
            .wrapping_add(self.s2[pb])
            .wrapping_add(self.s1[pa].wrapping_sub(self.s1[pb]))
            .wrapping_add(t[a][pa + 1])
            .wrapping_add(t[b][pb + 2]) as usize
    }
}

/// Inverse of [`colex_rank`] for sets of size `size`.
pub fn colex_unrank(mut rank: usize, size: usize) -> Edge {
    let t = &table().0;
    let mut out = [0usize; MAX_K];
    for i in (0..size).rev() {
        // largest v with C(v, i+1) <= rank
        let mut v = i;
        while v < MAX_N && t[v + 1][i + 1] as usize <= rank {
            v += 1;
        }
        out[i] = v;
        rank -= t[v][i + 1] as usize;
    }
    Edge::from_sorted(&out[..size])
}

/// Calls `f` on every `size`-subset of `items` (sorted input gives
/// lexicographic output).
pub fn for_each_combination<T: Copy, F: FnMut(&[T])>(items: &[T], size: usize, mut f: F) {
    let n = items.len();
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = size;
        while i > 0 && idx[i - 1] == i - 1 + n - size {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        i -= 1;
        idx[i] += 1;
        buf[i] = items[idx[i]];
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
            buf[j] = items[idx[j]];
        }
    }
}

/// Every `size`-subset of `vertices` as an edge, lexicographically.
pub fn combinations(vertices: &[Vertex], size: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(binom(vertices.len(), size).min(1 << 24) as usize);
    for_each_combination(vertices, size, |c| out.push(Edge::from_sorted(c)));
    out
}

/// Iterator over the `size`-subsets of a sorted vertex list, lexicographically.
pub struct Subsets {
    items: Vec<Vertex>,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(items: Vec<Vertex>, size: usize) -> Subsets {
        let done = size > items.len();
        Subsets { idx: (0..size).collect(), items, done }
    }
}

impl Iterator for Subsets {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        if self.done {
            return None;
        }
        let size = self.idx.len();
        let n = self.items.len();
        let mut buf = [0usize; MAX_K];
        for (b, &i) in buf.iter_mut().zip(&self.idx) {
            *b = self.items[i];
        }
        let out = Edge::from_sorted(&buf[..size]);
        let mut i = size;
        while i > 0 && self.idx[i - 1] == i - 1 + n - size {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
        } else {
            i -= 1;
            self.idx[i] += 1;
            for j in i + 1..size {
                self.idx[j] = self.idx[j - 1] + 1;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_ranks() {
        for e in Subsets::new((0..9).collect(), 3) {
            let pr = PairRanks::new(e, 9);
            for a in 0..9 {
                for b in a + 1..9 {
                    if !e.contains(a) && !e.contains(b) {
                        assert_eq!(pr.rank(a, b), colex_rank(e.with(a).with(b)));
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(60, 5), 5_461_512);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(7, 0), 1);
        assert_eq!(small_binom(255, 8) as u128, binom(255, 8));
    }

    #[test]
    fn combination_order_and_count() {
        let mut seen = Vec::new();
        for_each_combination(&[0, 1, 2, 3], 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_combination(&[0, 1, 2], 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_combination(&[0, 1, 2], 4, |_| count += 1);
        assert_eq!(count, 1);
        let verts: Vec<usize> = (0..9).collect();
        assert_eq!(combinations(&verts, 4).len(), 126);
        assert_eq!(Subsets::new(verts.clone(), 4).collect::<Vec<_>>(), combinations(&verts, 4));
        assert_eq!(Subsets::new(verts.clone(), 0).count(), 1);
        assert_eq!(Subsets::new(vec![1, 2], 3).count(), 0);
    }

    #[test]
    fn colex_is_a_bijection() {
        let verts: Vec<usize> = (0..10).collect();
        let mut ranks: Vec<usize> = combinations(&verts, 3).into_iter().map(colex_rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..120).collect::<Vec<_>>());
        for e in combinations(&verts, 4) {
            assert_eq!(colex_unrank(colex_rank(e), 4), e);
        }
    }
}
