//! Vertices, edges, and orientations of the n-cube, in-degree accounting, and
//! the hat-guessing view of an orientation.
//!
//! Coordinates are 0-indexed: coordinate `i` is bit `i` of the vertex value.
//! When a word is written as a string (as players would read hats left to
//! right), the leftmost character is coordinate 0.
//!
//! Edges are keyed by their lower endpoint `v` (the one with bit `i` clear)
//! and the direction `i`. The canonical edge order walks `v` ascending and,
//! for each `v`, every clear bit `i` ascending. An [`Orientation`] stores one
//! direction bit per edge in that order: `1` means the head is `v | 1 << i`,
//! `0` means the head is `v`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest dimension an [`Orientation`] can be built for.
pub const MAX_DIM: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex(pub u64);

impl Vertex {
    pub fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    pub fn bit(self, i: u32) -> bool {
        self.0 >> i & 1 == 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Toggles coordinate `i` of `v` in the `n`-cube.
pub fn flip(v: Vertex, i: u32, n: u32) -> Result<Vertex> {
    if i >= n {
        return Err(Error::CoordinateOutOfRange { coord: i, n });
    }
    if n < 64 && v.0 >> n != 0 {
        return Err(Error::VertexOutOfRange { vertex: v.0, n });
    }
    Ok(Vertex(v.0 ^ (1 << i)))
}

/// Sum of the bits of `v`, mod 2.
pub fn parity(v: Vertex) -> u8 {
    v.parity()
}

/// Reads a `0`/`1` string left to right as coordinates `0, 1, ...`.
pub fn parse_word(s: &str) -> Result<(Vertex, u32)> {
    let mut value = 0u64;
    let mut n = 0u32;
    for (col, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => value |= 1 << col,
            other => {
                return Err(Error::parse(1, col + 1, format!("expected '0' or '1', found {other:?}")))
            }
        }
        n += 1;
        if n > 63 {
            return Err(Error::TooLarge(format!("word of length {}", s.len())));
        }
    }
    Ok((Vertex(value), n))
}

/// Inverse of [`parse_word`].
pub fn format_word(v: Vertex, n: u32) -> String {
    (0..n).map(|i| if v.bit(i) { '1' } else { '0' }).collect()
}

#[inline]
fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Σ_{u < v} popcount(u).
fn prefix_popcount(v: u64) -> u64 {
    let mut total = 0;
    let mut j = 0;
    while j < 64 && (v >> j) != 0 {
        let period = 1u64 << (j + 1);
        let half = 1u64 << j;
        total += (v >> (j + 1)) << j;
        let rem = v & (period - 1);
        total += rem.saturating_sub(half);
        j += 1;
    }
    total
}

/// Number of edges of the `n`-cube, `n * 2^(n-1)`.
pub fn edge_count(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        (n as u64) << (n - 1)
    }
}

/// Position of the edge `(v, i)` in canonical order. `v` may be either endpoint.
pub fn edge_index(n: u32, v: u64, i: u32) -> u64 {
    let v = v & !(1u64 << i);
    let offset = n as u64 * v - prefix_popcount(v);
    offset + i as u64 - (v & low_mask(i)).count_ones() as u64
}

/// Calls `f(v, i, index)` for every edge in canonical order.
#[inline]
pub fn for_each_edge(n: u32, mut f: impl FnMut(u64, u32, usize)) {
    let mask = low_mask(n);
    let mut idx = 0usize;
    for v in 0..(1u64 << n) {
        let mut zeros = !v & mask;
        while zeros != 0 {
            let i = zeros.trailing_zeros();
            f(v, i, idx);
            idx += 1;
            zeros &= zeros - 1;
        }
    }
}

/// A direction bit for every edge of the n-cube, in canonical edge order.
#[derive(Clone, PartialEq, Eq)]
pub struct Orientation {
    n: u32,
    len: u64,
    words: Vec<u64>,
}

impl fmt::Debug for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Orientation").field("n", &self.n).field("edges", &self.len).finish()
    }
}

impl Orientation {
    /// All-zero orientation: every edge points at its lower endpoint.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidParams(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        let len = edge_count(n);
        Ok(Orientation { n, len, words: vec![0; len.div_ceil(64) as usize] })
    }

    /// Builds an orientation from `head_is_upper(v, i)`, called once per
    /// canonical edge with `v` the lower endpoint.
    pub fn from_fn(n: u32, mut head_is_upper: impl FnMut(u64, u32) -> bool) -> Result<Self> {
        let mut o = Orientation::new(n)?;
        for_each_edge(n, |v, i, idx| {
            if head_is_upper(v, i) {
                o.words[idx >> 6] |= 1 << (idx & 63);
            }
        });
        Ok(o)
    }

    /// Wraps a raw canonical bit stream, given as packed little-endian words.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        let mut o = Orientation::new(n)?;
        if words.len() != o.words.len() {
            return Err(Error::InvalidParams(format!(
                "expected {} words for n={n}, got {}",
                o.words.len(),
                words.len()
            )));
        }
        o.words = words;
        let tail = (o.len % 64) as u32;
        if tail != 0 {
            let last = o.words.len() - 1;
            if o.words[last] & !low_mask(tail) != 0 {
                return Err(Error::InvalidParams("bits set past the last edge".into()));
            }
        }
        Ok(o)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> u64 {
        1 << self.n
    }

    pub fn num_edges(&self) -> u64 {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, idx: u64) -> bool {
        debug_assert!(idx < self.len);
        self.words[(idx >> 6) as usize] >> (idx & 63) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, idx: u64, value: bool) {
        let w = &mut self.words[(idx >> 6) as usize];
        if value {
            *w |= 1 << (idx & 63);
        } else {
            *w &= !(1 << (idx & 63));
        }
    }

    /// Whether the edge through `v` in direction `i` points at its endpoint
    /// with bit `i` set.
    #[inline]
    pub fn head_is_upper(&self, v: u64, i: u32) -> bool {
        self.bit(edge_index(self.n, v, i))
    }

    /// Head of the edge through `v` in direction `i`.
    pub fn head(&self, v: Vertex, i: u32) -> Result<Vertex> {
        self.check_vertex(v)?;
        if i >= self.n {
            return Err(Error::CoordinateOutOfRange { coord: i, n: self.n });
        }
        let low = v.0 & !(1 << i);
        Ok(Vertex(if self.head_is_upper(low, i) { low | 1 << i } else { low }))
    }

    /// Iterates `(v, i, head_is_upper)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u32, bool)> + '_ {
        let mask = low_mask(self.n);
        (0..(1u64 << self.n))
            .flat_map(move |v| {
                let zeros = !v & mask;
                (0..self.n).filter(move |i| zeros >> i & 1 == 1).map(move |i| (v, i))
            })
            .enumerate()
            .map(move |(idx, (v, i))| (v, i, self.bit(idx as u64)))
    }

    /// Every edge reversed.
    pub fn reversed(&self) -> Orientation {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = (self.len % 64) as u32;
        if tail != 0 {
            let last = words.len() - 1;
            words[last] &= low_mask(tail);
        }
        Orientation { n: self.n, len: self.len, words }
    }

    /// In-degree of a single vertex.
    pub fn in_degree(&self, v: Vertex) -> Result<u32> {
        self.check_vertex(v)?;
        Ok((0..self.n).filter(|&i| self.head_is_upper(v.0, i) == v.bit(i)).count() as u32)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.0 >> self.n != 0 {
            return Err(Error::VertexOutOfRange { vertex: v.0, n: self.n });
        }
        Ok(())
    }
}

/// Number of vertices at each in-degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeHistogram {
    counts: Vec<u64>,
}

impl DegreeHistogram {
    pub fn from_degrees(degrees: &[u32]) -> Self {
        let mut counts = Vec::new();
        for &d in degrees {
            let d = d as usize;
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        DegreeHistogram { counts }
    }

    /// From `(degree, count)` pairs; zero counts are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut counts = Vec::new();
        for (d, c) in pairs {
            let d = d as usize;
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += c;
        }
        let mut h = DegreeHistogram { counts };
        h.trim();
        h
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }

    pub fn count(&self, degree: u32) -> u64 {
        self.counts.get(degree as usize).copied().unwrap_or(0)
    }

    /// Degrees with a nonzero count, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.iter().map(|(d, _)| d).collect()
    }

    /// `(degree, count)` for nonzero counts, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, &c)| (d as u32, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Σ degree · count.
    pub fn weighted_sum(&self) -> u64 {
        self.iter().map(|(d, c)| d as u64 * c).sum()
    }
}

impl fmt::Display for DegreeHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (d, c)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}:{c}")?;
        }
        f.write_str("}")
    }
}

/// Per-vertex in-degrees of an orientation.
#[derive(Debug, Clone)]
pub struct InDegrees {
    degrees: Vec<u32>,
}

impl InDegrees {
    pub fn of(&self, v: Vertex) -> u32 {
        self.degrees[v.0 as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.degrees
    }

    pub fn histogram(&self) -> DegreeHistogram {
        DegreeHistogram::from_degrees(&self.degrees)
    }
}

/// One pass over the canonical edges, crediting each head.
pub fn in_degrees(o: &Orientation) -> InDegrees {
    let mut degrees = vec![0u32; o.num_vertices() as usize];
    for_each_edge(o.dim(), |v, i, idx| {
        let head = if o.bit(idx as u64) { v | 1 << i } else { v };
        degrees[head as usize] += 1;
    });
    InDegrees { degrees }
}

/// The instance `[a,b]_n`, normalized so that `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProblemSpec {
    pub n: u32,
    pub a: u32,
    pub b: u32,
}

impl ProblemSpec {
    pub fn new(n: u32, a: u32, b: u32) -> Result<Self> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if n == 0 || b > n {
            return Err(Error::InvalidParams(format!("[{a},{b}]_{n} needs n >= 1 and degrees <= n")));
        }
        Ok(ProblemSpec { n, a, b })
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]_{}", self.a, self.b, self.n)
    }
}

/// Guess of `player` (0-indexed) who sees `observed`: the hats of every other
/// player packed in ascending coordinate order, skipping `player`'s own slot.
pub fn guess(o: &Orientation, player: u32, observed: u64) -> Result<u8> {
    let n = o.dim();
    if player >= n {
        return Err(Error::CoordinateOutOfRange { coord: player, n });
    }
    if observed >> (n - 1) != 0 {
        return Err(Error::MalformedObservation { observed, width: n - 1 });
    }
    let low = observed & low_mask(player);
    let high = observed >> player;
    let v = low | (high << (player + 1));
    Ok(o.head_is_upper(v, player) as u8)
}

/// What `player` sees when the hats are `placement`.
pub fn observation(placement: Vertex, player: u32) -> u64 {
    let low = placement.0 & low_mask(player);
    let high = placement.0 >> (player + 1);
    low | (high << player)
}

/// Number of players guessing their own hat correctly under `placement`.
pub fn simulate(o: &Orientation, placement: Vertex) -> Result<u32> {
    let n = o.dim();
    if placement.0 >> n != 0 {
        return Err(Error::VertexOutOfRange { vertex: placement.0, n });
    }
    let mut correct = 0;
    for player in 0..n {
        if guess(o, player, observation(placement, player))? == placement.bit(player) as u8 {
            correct += 1;
        }
    }
    debug_assert_eq!(Ok(correct), o.in_degree(placement));
    Ok(correct)
}

/// Runs `trials` uniformly random placements and tallies the correct-guess counts.
pub fn simulate_random<R: Rng + ?Sized>(
    o: &Orientation,
    trials: u64,
    rng: &mut R,
) -> Result<DegreeHistogram> {
    let n = o.dim();
    let mut counts = vec![0u64; n as usize + 1];
    for _ in 0..trials {
        let placement = Vertex(rng.gen::<u64>() & low_mask(n));
        counts[simulate(o, placement)? as usize] += 1;
    }
    Ok(DegreeHistogram::from_pairs(counts.into_iter().enumerate().map(|(d, c)| (d as u32, c))))
}
