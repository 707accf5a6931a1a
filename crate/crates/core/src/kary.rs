//! Markings of the k-ary n-cube: the hat game with `k` colours.
//!
//! Vertices are words of `n` digits over `0..k`, stored as `x = Σ digit_i k^i`.
//! A line fixes every digit but one; the line in direction `d` with base `w`
//! (digit `d` of `w` is zero) holds `w + j k^d` for `j in 0..k`. Lines are
//! numbered direction by direction, and within a direction by ascending base
//! index. A marking picks one vertex (a digit) on every line; the mark count
//! of a vertex is the k-ary analogue of in-degree.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cube::{DegreeHistogram, Orientation};
use crate::error::{Error, Result};
use crate::exact_cover::{ExactCover, Outcome};

/// Cap on `k^n` for anything that materializes every vertex.
pub const MAX_VERTICES: u64 = 1 << 26;

/// Shape of the k-ary n-cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KaryCube {
    pub k: u32,
    pub n: u32,
}

impl KaryCube {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k < 2 || n == 0 || k > 255 {
            return Err(Error::InvalidParams(format!("k-ary cube needs 2 <= k <= 255 and n >= 1, got k={k} n={n}")));
        }
        match (k as u64).checked_pow(n) {
            Some(v) if v <= MAX_VERTICES => Ok(KaryCube { k, n }),
            _ => Err(Error::TooLarge(format!("{k}^{n} vertices"))),
        }
    }

    pub fn num_vertices(&self) -> u64 {
        (self.k as u64).pow(self.n)
    }

    pub fn lines_per_direction(&self) -> u64 {
        (self.k as u64).pow(self.n - 1)
    }

    pub fn num_lines(&self) -> u64 {
        self.n as u64 * self.lines_per_direction()
    }

    #[inline]
    fn pow(&self, d: u32) -> u64 {
        (self.k as u64).pow(d)
    }

    #[inline]
    pub fn digit(&self, x: u64, d: u32) -> u32 {
        (x / self.pow(d) % self.k as u64) as u32
    }

    pub fn digits(&self, x: u64) -> Vec<u32> {
        (0..self.n).map(|d| self.digit(x, d)).collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u64 {
        digits.iter().rev().fold(0, |acc, &g| acc * self.k as u64 + g as u64)
    }

    /// Line through `x` in direction `d`.
    #[inline]
    pub fn line_through(&self, x: u64, d: u32) -> u64 {
        let p = self.pow(d);
        let rank = x % p + x / (p * self.k as u64) * p;
        d as u64 * self.lines_per_direction() + rank
    }

    /// `(direction, base)` of a line.
    #[inline]
    pub fn line(&self, id: u64) -> (u32, u64) {
        let d = (id / self.lines_per_direction()) as u32;
        let rank = id % self.lines_per_direction();
        let p = self.pow(d);
        (d, rank % p + rank / p * p * self.k as u64)
    }

    #[inline]
    pub fn vertex_on(&self, id: u64, digit: u32) -> u64 {
        let (d, base) = self.line(id);
        base + digit as u64 * self.pow(d)
    }
}

/// One marked digit per line, in canonical line order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    cube: KaryCube,
    marks: Vec<u8>,
}

impl Marking {
    pub fn new(cube: KaryCube, marks: Vec<u8>) -> Result<Self> {
        if marks.len() as u64 != cube.num_lines() {
            return Err(Error::InvalidParams(format!(
                "{} marks for {} lines",
                marks.len(),
                cube.num_lines()
            )));
        }
        if let Some(pos) = marks.iter().position(|&m| m as u32 >= cube.k) {
            return Err(Error::InvalidParams(format!("line {pos} marks digit {} >= k", marks[pos])));
        }
        Ok(Marking { cube, marks })
    }

    pub fn cube(&self) -> KaryCube {
        self.cube
    }

    pub fn marks(&self) -> &[u8] {
        &self.marks
    }

    /// Builds a marking by asking `pick(direction, base)` for every line.
    pub fn from_fn(cube: KaryCube, mut pick: impl FnMut(u32, u64) -> u32) -> Result<Self> {
        let marks = (0..cube.num_lines())
            .map(|id| {
                let (d, base) = cube.line(id);
                pick(d, base) as u8
            })
            .collect();
        Marking::new(cube, marks)
    }

    /// Mark count of every vertex.
    pub fn counts(&self) -> Vec<u32> {
        let mut c = vec![0u32; self.cube.num_vertices() as usize];
        for (id, &digit) in self.marks.iter().enumerate() {
            c[self.cube.vertex_on(id as u64, digit as u32) as usize] += 1;
        }
        c
    }
}

pub fn mark_degrees(m: &Marking) -> DegreeHistogram {
    DegreeHistogram::from_degrees(&m.counts())
}

/// For `k = 2`: mark the head of every edge.
pub fn marking_from_orientation(o: &Orientation) -> Result<Marking> {
    let cube = KaryCube::new(2, o.dim())?;
    Marking::from_fn(cube, |d, base| o.head_is_upper(base, d) as u32)
}

/// Inverse of [`marking_from_orientation`].
pub fn orientation_from_marking(m: &Marking) -> Result<Orientation> {
    if m.cube.k != 2 {
        return Err(Error::InvalidParams(format!("orientations are binary markings, got k={}", m.cube.k)));
    }
    let cube = m.cube;
    Orientation::from_fn(cube.n, |v, i| m.marks[cube.line_through(v, i) as usize] == 1)
}

/// Solves `s + t = k^n`, `a s + b t = n k^(n-1)` in non-negative integers.
pub fn kary_feasible(a: u32, b: u32, n: u32, k: u32) -> Option<(u64, u64)> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if k < 2 || n == 0 || b > n {
        return None;
    }
    let per = (k as u128).checked_pow(n - 1)?;
    let total = per * k as u128;
    if a == b {
        return (a as u128 * k as u128 == n as u128).then_some((total as u64, 0));
    }
    let num_s = b as i128 * k as i128 - n as i128;
    let num_t = n as i128 - a as i128 * k as i128;
    if num_s < 0 || num_t < 0 {
        return None;
    }
    let s_num = per * num_s as u128;
    let d = (b - a) as u128;
    if !s_num.is_multiple_of(d) {
        return None;
    }
    let s = s_num / d;
    let t = total - s;
    Some((u64::try_from(s).ok()?, u64::try_from(t).ok()?))
}

/// Checks a marking against `[a,b]_n` and its counts.
pub fn kary_verify(m: &Marking, a: u32, b: u32) -> Result<DegreeHistogram> {
    let cube = m.cube;
    let h = mark_degrees(m);
    let (s, t) = kary_feasible(a, b, cube.n, cube.k)
        .ok_or_else(|| Error::Unverified(format!("[{a},{b}]_{} infeasible over k={}", cube.n, cube.k)))?;
    let (a, b) = (a.min(b), a.max(b));
    let expected = DegreeHistogram::from_pairs([(a, s), (b, t)]);
    if h != expected {
        return Err(Error::Unverified(format!("marking has {h}, expected {expected}")));
    }
    Ok(h)
}

fn two_valued(m: &Marking) -> Result<()> {
    let h = mark_degrees(m);
    if h.support().len() > 2 {
        return Err(Error::Unverified(format!("mark counts {h} take more than two values")));
    }
    Ok(())
}

fn digit_sum_mod(cube: &KaryCube, x: u64) -> u32 {
    cube.digits(x).iter().sum::<u32>() % cube.k
}

/// Every vertex of the k-ary k-cube marked exactly once: the direction-`d`
/// line marks its vertex whose digit sum is `d` mod `k`.
pub fn perfect_block_marking(k: u32) -> Result<Marking> {
    let cube = KaryCube::new(k, k)?;
    Marking::from_fn(cube, |d, base| (d + k - digit_sum_mod(&cube, base)) % k)
}

/// `[a,b]_n -> [a+1,b+1]_(n+k)`: the first `n` digits carry `m` in every slice
/// and the last `k` digits carry [`perfect_block_marking`].
pub fn kary_lift(m: &Marking) -> Result<Marking> {
    two_valued(m)?;
    let KaryCube { k, n } = m.cube;
    let cube = KaryCube::new(k, n + k)?;
    let block = perfect_block_marking(k)?;
    let split = (k as u64).pow(n);
    Marking::from_fn(cube, |d, base| {
        let (low, high) = (base % split, base / split);
        if d < n {
            m.marks[m.cube.line_through(low, d) as usize] as u32
        } else {
            block.marks[block.cube.line_through(high, d - n) as usize] as u32
        }
    })
}

/// `[a,b]_n -> [la,lb]_(ln)`: blocks of `l` consecutive digits collapse to
/// their digit sum mod `k`; a line inside block `i` follows the marked vertex
/// of the direction-`i` line through the image.
pub fn kary_blowup(m: &Marking, l: u32) -> Result<Marking> {
    if l == 0 {
        return Err(Error::InvalidParams("blow-up factor must be at least 1".into()));
    }
    two_valued(m)?;
    let KaryCube { k, n } = m.cube;
    let cube = KaryCube::new(k, n * l)?;
    let small = m.cube;
    Marking::from_fn(cube, |d, base| {
        let digits = cube.digits(base);
        let image: Vec<u32> = digits.chunks(l as usize).map(|c| c.iter().sum::<u32>() % k).collect();
        let i = d / l;
        let rest = image[i as usize];
        let image_x = small.from_digits(&image);
        let y = m.marks[small.line_through(image_x, i) as usize] as u32;
        (y + k - rest) % k
    })
}

/// Outcome of a marking search that did not run out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KarySearch {
    Found(Marking),
    Absent,
}

fn subsets_of_size(n: u32, size: u32) -> Vec<u32> {
    (0u32..1 << n).filter(|s| s.count_ones() == size).collect()
}

/// Searches for a marking of `[a,b]_n` over `k` letters.
///
/// Posed as exact cover: every line is covered once, and every vertex picks
/// the set of directions whose lines mark it, of size `a` or `b`. When
/// `a = 0` a vertex may pick nothing, so vertices become at-most-once items.
/// Each option tried costs one unit of `node_budget`.
pub fn kary_search(a: u32, b: u32, n: u32, k: u32, node_budget: u64) -> Result<KarySearch> {
    let (a, b) = (a.min(b), a.max(b));
    let cube = KaryCube::new(k, n)?;
    if n > 16 {
        return Err(Error::TooLarge(format!("search over n={n} directions")));
    }
    if kary_feasible(a, b, n, k).is_none() {
        return Ok(KarySearch::Absent);
    }
    let lines = cube.num_lines() as usize;
    let verts = cube.num_vertices() as usize;
    let mut ec = if a == 0 { ExactCover::new(lines, verts) } else { ExactCover::new(lines + verts, 0) };
    let mut sizes = vec![b];
    if a != b && a > 0 {
        sizes.insert(0, a);
    }
    let dir_sets: Vec<u32> = sizes.iter().flat_map(|&s| subsets_of_size(n, s)).collect();
    let mut option_meaning = Vec::with_capacity(verts * dir_sets.len());
    let mut items = Vec::with_capacity(n as usize + 1);
    for x in 0..verts as u64 {
        for &dirs in &dir_sets {
            items.clear();
            items.extend((0..n).filter(|d| dirs >> d & 1 == 1).map(|d| cube.line_through(x, d) as usize));
            items.push(lines + x as usize);
            ec.add_option(&items);
            option_meaning.push((x, dirs));
        }
    }
    match ec.solve(node_budget)? {
        Outcome::Unsolvable => Ok(KarySearch::Absent),
        Outcome::Solved(chosen) => {
            let mut marks = vec![u8::MAX; lines];
            for opt in chosen {
                let (x, dirs) = option_meaning[opt];
                for d in (0..n).filter(|d| dirs >> d & 1 == 1) {
                    marks[cube.line_through(x, d) as usize] = cube.digit(x, d) as u8;
                }
            }
            let m = Marking::new(cube, marks)?;
            kary_verify(&m, a, b)?;
            Ok(KarySearch::Found(m))
        }
    }
}

/// A CNF formula in DIMACS terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
    cube: KaryCube,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "c {c}");
        }
        let _ = writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(s, "{lit} ");
            }
            s.push_str("0\n");
        }
        s
    }

    /// Whether `assignment` (index `v - 1` holds variable `v`) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }

    /// Variable for "line `id` marks digit `j`".
    pub fn mark_var(&self, id: u64, j: u32) -> u32 {
        (id * self.cube.k as u64 + j as u64 + 1) as u32
    }

    /// Selector variable of vertex `x` (true: count `b`, false: count `a`).
    pub fn selector_var(&self, x: u64) -> u32 {
        (self.cube.num_lines() * self.cube.k as u64 + x + 1) as u32
    }

    /// Reads the marking off a model; each line must have exactly one true digit.
    pub fn decode(&self, assignment: &[bool]) -> Result<Marking> {
        let cube = self.cube;
        let marks = (0..cube.num_lines())
            .map(|id| {
                let set: Vec<u32> =
                    (0..cube.k).filter(|&j| assignment[self.mark_var(id, j) as usize - 1]).collect();
                match set.as_slice() {
                    [j] => Ok(*j as u8),
                    _ => Err(Error::Unverified(format!("line {id} has {} marked digits", set.len()))),
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Marking::new(cube, marks)
    }

    /// Assignment encoding `m` (selectors set from the mark counts).
    pub fn encode(&self, m: &Marking, b: u32) -> Vec<bool> {
        let cube = self.cube;
        let mut asg = vec![false; self.num_vars as usize];
        for (id, &j) in m.marks().iter().enumerate() {
            asg[self.mark_var(id as u64, j as u32) as usize - 1] = true;
        }
        for (x, c) in m.counts().into_iter().enumerate() {
            asg[self.selector_var(x as u64) as usize - 1] = c == b;
        }
        debug_assert_eq!(cube, m.cube());
        asg
    }
}

fn combinations(items: &[i32], size: usize, out: &mut Vec<Vec<i32>>) {
    fn go(items: &[i32], size: usize, start: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    if size <= items.len() {
        go(items, size, 0, &mut Vec::with_capacity(size), out);
    }
}

/// Clauses forcing exactly `c` of `lits` true whenever `guard` is false.
fn exactly_guarded(lits: &[i32], c: u32, guard: i32, clauses: &mut Vec<Vec<i32>>) {
    let n = lits.len();
    let mut subsets = Vec::new();
    // at most c: no c+1 of them together
    combinations(lits, c as usize + 1, &mut subsets);
    for s in subsets.drain(..) {
        let mut clause = vec![guard];
        clause.extend(s.iter().map(|l| -l));
        clauses.push(clause);
    }
    // at least c: every n-c+1 of them contains a true one
    if c > 0 {
        combinations(lits, n - c as usize + 1, &mut subsets);
        for s in subsets {
            let mut clause = vec![guard];
            clause.extend(s);
            clauses.push(clause);
        }
    }
}

/// DIMACS encoding of the marking problem `[a,b]_n` over `k` letters.
///
/// Variable `line * k + j + 1` says line `line` marks digit `j`; each line has
/// exactly one (one positive clause, pairwise negative clauses). Vertex `x`
/// gets selector `lines * k + x + 1`: true forces exactly `b` of its `n`
/// incident mark variables, false forces exactly `a`, both by binomial clauses.
pub fn export_cnf(a: u32, b: u32, n: u32, k: u32) -> Result<Cnf> {
    let (a, b) = (a.min(b), a.max(b));
    let cube = KaryCube::new(k, n)?;
    if b > n {
        return Err(Error::InvalidParams(format!("degree {b} exceeds n={n}")));
    }
    let lines = cube.num_lines();
    let verts = cube.num_vertices();
    let num_vars = lines * k as u64 + verts;
    if num_vars > i32::MAX as u64 {
        return Err(Error::TooLarge(format!("{num_vars} variables")));
    }
    let mut cnf = Cnf { num_vars: num_vars as u32, clauses: Vec::new(), comments: Vec::new(), cube };
    cnf.comments = vec![
        format!("marking [{a},{b}]_{n} over k={k}: {lines} lines, {verts} vertices"),
        "line L = d*k^(n-1) + rank; rank = x mod k^d + (x div k^(d+1))*k^d for a vertex x on it".into(),
        format!("var L*{k} + j + 1 (1..={}): line L marks the vertex with digit d = j", lines * k as u64),
        format!("var {} + x + 1: vertex x is marked {b} times (else {a} times)", lines * k as u64),
        "vertex x = sum of digit_i * k^i".into(),
    ];
    let mut clauses = Vec::new();
    for id in 0..lines {
        let vars: Vec<i32> = (0..k).map(|j| cnf.mark_var(id, j) as i32).collect();
        clauses.push(vars.clone());
        for i in 0..vars.len() {
            for j in (i + 1)..vars.len() {
                clauses.push(vec![-vars[i], -vars[j]]);
            }
        }
    }
    for x in 0..verts {
        let lits: Vec<i32> =
            (0..n).map(|d| cnf.mark_var(cube.line_through(x, d), cube.digit(x, d)) as i32).collect();
        let sel = cnf.selector_var(x) as i32;
        exactly_guarded(&lits, b, -sel, &mut clauses);
        exactly_guarded(&lits, a, sel, &mut clauses);
    }
    cnf.clauses = clauses;
    Ok(cnf)
}

/// Reads a star listing: one marked vertex per row, written as its digits
/// left to right (digit 0 first) followed by a mask with `*` under each
/// direction whose line marks it, e.g. `2022 **.*`. Lines starting with `#`
/// are comments.
pub fn parse_star_listing(text: &str, k: u32) -> Result<Marking> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(word), Some(mask), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(lineno + 1, 1, "expected `<digits> <star mask>`"));
        };
        if word.len() != mask.len() {
            return Err(Error::parse(lineno + 1, word.len() + 2, "mask length differs from word length"));
        }
        let digits = word
            .chars()
            .enumerate()
            .map(|(c, ch)| match ch.to_digit(10) {
                Some(g) if g < k => Ok(g),
                _ => Err(Error::parse(lineno + 1, c + 1, format!("bad digit {ch:?}"))),
            })
            .collect::<Result<Vec<u32>>>()?;
        let stars = mask
            .chars()
            .enumerate()
            .map(|(c, ch)| match ch {
                '*' => Ok(true),
                '.' => Ok(false),
                _ => Err(Error::parse(lineno + 1, word.len() + 2 + c, format!("bad mask character {ch:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push((lineno + 1, digits, stars));
    }
    let n = rows.first().map(|r| r.1.len() as u32).ok_or_else(|| Error::parse(1, 1, "no rows"))?;
    let cube = KaryCube::new(k, n)?;
    let mut marks: BTreeMap<u64, (u8, usize)> = BTreeMap::new();
    for (lineno, digits, stars) in rows {
        if digits.len() as u32 != n {
            return Err(Error::parse(lineno, 1, "word length differs from the first row"));
        }
        let x = cube.from_digits(&digits);
        for d in (0..n).filter(|&d| stars[d as usize]) {
            let id = cube.line_through(x, d);
            if let Some((_, first)) = marks.insert(id, (digits[d as usize] as u8, lineno)) {
                return Err(Error::parse(lineno, 1, format!("line {id} already marked on line {first}")));
            }
        }
    }
    if marks.len() as u64 != cube.num_lines() {
        let missing = (0..cube.num_lines()).find(|id| !marks.contains_key(id)).unwrap_or(0);
        return Err(Error::Unverified(format!(
            "{} of {} lines marked; line {missing} has no mark",
            marks.len(),
            cube.num_lines()
        )));
    }
    Marking::new(cube, marks.into_values().map(|(digit, _)| digit).collect())
}

/// The `[0,3]_4` marking over three letters, as listed in the fixture file.
pub const K3_N4_0_3_FIXTURE: &str = include_str!("../fixtures/k3_n4_0_3.marking");
