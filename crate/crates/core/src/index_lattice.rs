//! Lexicographic enumeration of lower-triangle positions and the past-cone
//! index sets `B_ij^a` that generate the filtrations.
//!
//! All indices are 1-based. Position `(i, j)` with `1 <= j <= i <= n` maps to
//! `l = i(i-1)/2 + j`, so row 4 holds `l = 7..=10`.

use crate::error::{invalid, Result};

/// Lexicographic comparison on Z^2: first coordinate, then second.
pub fn lex_le(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1)
}

/// Enumeration of the lower triangle of an order-`n` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeIndex {
    n: usize,
}

impl LatticeIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("matrix order must be positive");
        }
        Ok(Self { n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `k_n = n(n+1)/2`.
    pub fn len(&self) -> usize {
        triangle_len(self.n)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lex_index(&self, i: usize, j: usize) -> Result<usize> {
        if i > self.n {
            return invalid(format!("row {i} exceeds order {}", self.n));
        }
        lex_index(i, j)
    }

    pub fn lex_pair(&self, l: usize) -> Result<(usize, usize)> {
        if l == 0 || l > self.len() {
            return invalid(format!("linear index {l} outside [1, {}]", self.len()));
        }
        Ok(lex_pair_unchecked(l))
    }

    /// Iterates `(i, j)` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(|i| (1..=i).map(move |j| (i, j)))
    }
}

pub fn triangle_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `u(i, j) = i(i-1)/2 + j` for `1 <= j <= i`.
pub fn lex_index(i: usize, j: usize) -> Result<usize> {
    if i == 0 || j == 0 {
        return invalid(format!("indices are 1-based, got ({i}, {j})"));
    }
    if j > i {
        return invalid(format!("({i}, {j}) is above the diagonal"));
    }
    Ok(i * (i - 1) / 2 + j)
}

fn lex_pair_unchecked(l: usize) -> (usize, usize) {
    // largest i with i(i-1)/2 < l
    let mut i = ((((8 * l) as f64).sqrt() - 1.0) / 2.0).floor() as usize;
    i = i.max(1);
    while i * (i - 1) / 2 >= l {
        i -= 1;
    }
    while (i + 1) * i / 2 < l {
        i += 1;
    }
    (i, l - i * (i - 1) / 2)
}

/// Inverse of [`lex_index`] without an upper bound on the order.
pub fn lex_pair(l: usize) -> Result<(usize, usize)> {
    if l == 0 {
        return invalid("linear index must be >= 1");
    }
    Ok(lex_pair_unchecked(l))
}

/// The past cone `B_ij^a`: lex-predecessors of `(i, j)` (inclusive) at
/// Chebyshev distance at least `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PastCone {
    pub center: (i64, i64),
    pub radius: u32,
}

impl PastCone {
    pub fn new(center: (i64, i64), radius: u32) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        let d = (p.0 - self.center.0).abs().max((p.1 - self.center.1).abs());
        d >= i64::from(self.radius) && lex_le(p, self.center)
    }
}

/// Lower-triangle positions in `B_ij^1 \ B_ij^a`: lex-predecessors of
/// `(i, j)` with `1 <= max(|u-i|, |v-j|) < a`, clipped to `1 <= v <= u <= n`.
/// Sorted lexicographically.
pub fn ring_set(center: (usize, usize), a: u32, n: usize) -> Result<Vec<(usize, usize)>> {
    let (i, j) = center;
    if a == 0 {
        return invalid("ring radius must be >= 1");
    }
    if j == 0 || j > i || i > n {
        return invalid(format!("center ({i}, {j}) is not in the lower triangle of order {n}"));
    }
    let r = a as usize - 1;
    let inner = PastCone::new((i as i64, j as i64), 1);
    let outer = PastCone::new((i as i64, j as i64), a);
    let mut out = Vec::new();
    for u in i.saturating_sub(r).max(1)..=i {
        for v in j.saturating_sub(r).max(1)..=(j + r).min(u) {
            let p = (u as i64, v as i64);
            if inner.contains(p) && !outer.contains(p) {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

/// Ring set expressed as 0-based positions in the lex-ordered entry vector.
pub(crate) fn ring_offsets(center: (usize, usize), a: u32, n: usize) -> Result<Vec<usize>> {
    ring_set(center, a, n)?
        .into_iter()
        .map(|(u, v)| lex_index(u, v).map(|l| l - 1))
        .collect()
}
