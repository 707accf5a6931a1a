//! Independent checks: a verifier that reads nothing but the canonical bit
//! stream, exhaustive enumeration for tiny cubes, a backtracking orientation
//! search on small graphs, and the two negative results (a cubic graph on 8
//! vertices with no `{0,3}` orientation, and no three-valued `{0:7, 2:2, 4:7}`
//! orientation of the 4-cube).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cube::{DegreeHistogram, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::feasibility::solve_counts;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Infeasible,
    /// Vertex whose in-degree is neither `a` nor `b`.
    Support { vertex: Vertex, degree: u32 },
    Counts { expected: DegreeHistogram },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub histogram: DegreeHistogram,
    pub pass: bool,
    pub failure: Option<Failure>,
}

impl VerifyReport {
    pub fn first_offending_vertex(&self) -> Option<Vertex> {
        match self.failure {
            Some(Failure::Support { vertex, .. }) => Some(vertex),
            _ => None,
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {}", self.histogram),
            Some(Failure::Infeasible) => {
                write!(f, "FAIL [{},{}]_{} is infeasible; observed {}", self.a, self.b, self.n, self.histogram)
            }
            Some(Failure::Support { vertex, degree }) => write!(
                f,
                "FAIL vertex {vertex} has in-degree {degree}, not in {{{}, {}}}; observed {}",
                self.a, self.b, self.histogram
            ),
            Some(Failure::Counts { expected }) => {
                write!(f, "FAIL counts {} differ from expected {expected}", self.histogram)
            }
        }
    }
}

/// Per-vertex in-degrees straight from the stored bits.
fn stream_degrees(o: &Orientation) -> Vec<u32> {
    let n = o.dim();
    let mut deg = vec![0u32; 1 << n];
    let mut idx = 0u64;
    for v in 0..(1u64 << n) {
        for i in 0..n {
            if v >> i & 1 == 1 {
                continue;
            }
            let head = if o.bit(idx) { v | 1 << i } else { v };
            deg[head as usize] += 1;
            idx += 1;
        }
    }
    debug_assert_eq!(idx, o.num_edges());
    deg
}

/// Checks that every in-degree is `a` or `b` and the class sizes solve the
/// counting equations.
pub fn verify(o: &Orientation, a: u32, b: u32) -> VerifyReport {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let n = o.dim();
    let deg = stream_degrees(o);
    let histogram = DegreeHistogram::from_degrees(&deg);
    let mut report = VerifyReport { n, a, b, histogram, pass: false, failure: None };
    let Some(counts) = solve_counts(a, b, n).and_then(|c| c.to_u64()) else {
        report.failure = Some(Failure::Infeasible);
        return report;
    };
    if let Some((v, &d)) = deg.iter().enumerate().find(|(_, &d)| d != a && d != b) {
        report.failure = Some(Failure::Support { vertex: Vertex(v as u64), degree: d });
        return report;
    }
    let expected = DegreeHistogram::from_pairs([(a, counts.0), (b, counts.1)]);
    if report.histogram != expected {
        report.failure = Some(Failure::Counts { expected });
        return report;
    }
    report.pass = true;
    report
}

/// An in-degree profile: `(degree, count)` ascending.
pub type Profile = Vec<(u32, u64)>;

/// Every profile with at most two distinct in-degrees reached by some
/// orientation of the `n`-cube, by exhaustive enumeration.
pub fn oracle_profiles(n: u32) -> Result<BTreeSet<Profile>> {
    if n == 0 || n > 3 {
        return Err(Error::TooLarge(format!("exhaustive enumeration needs 1 <= n <= 3, got {n}")));
    }
    let edges: Vec<(usize, usize)> = (0..1usize << n)
        .flat_map(|v| (0..n).filter(move |i| v >> i & 1 == 0).map(move |i| (v, v | 1 << i)))
        .collect();
    let mut profiles = BTreeSet::new();
    for mask in 0u64..(1 << edges.len()) {
        let mut deg = vec![0u32; 1 << n];
        for (e, &(lo, hi)) in edges.iter().enumerate() {
            deg[if mask >> e & 1 == 1 { hi } else { lo }] += 1;
        }
        let h = DegreeHistogram::from_degrees(&deg);
        if h.support().len() <= 2 {
            profiles.insert(h.iter().collect());
        }
    }
    Ok(profiles)
}

/// Two-valued supports `(a, b)`, `a < b`, among `profiles`.
pub fn two_valued_supports(profiles: &BTreeSet<Profile>) -> BTreeSet<(u32, u32)> {
    profiles.iter().filter(|p| p.len() == 2).map(|p| (p[0].0, p[1].0)).collect()
}

/// A simple graph on at most 32 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    num_vertices: u32,
    edges: Vec<(u32, u32)>,
}

impl SmallGraph {
    pub fn new(num_vertices: u32, edges: Vec<(u32, u32)>) -> Result<Self> {
        if num_vertices > 32 {
            return Err(Error::TooLarge(format!("{num_vertices} vertices")));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidParams(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidParams(format!("loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParams(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(SmallGraph { num_vertices, edges })
    }

    pub fn hypercube(n: u32) -> Result<Self> {
        if n > 5 {
            return Err(Error::TooLarge(format!("hypercube of dimension {n}")));
        }
        let edges = (0..1u32 << n)
            .flat_map(|v| (0..n).filter(move |i| v >> i & 1 == 0).map(move |i| (v, v | 1 << i)))
            .collect();
        SmallGraph::new(1 << n, edges)
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.num_vertices as usize];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    fn adjacency_masks(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.num_vertices as usize];
        for &(u, v) in &self.edges {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let adj = self.adjacency_masks();
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros();
            frontier &= frontier - 1;
            let fresh = adj[v as usize] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen.count_ones() == self.num_vertices
    }

    /// In-degrees when edge `e` points at its second endpoint iff `dirs[e]`.
    pub fn in_degrees(&self, dirs: &[bool]) -> Vec<u32> {
        let mut d = vec![0; self.num_vertices as usize];
        for (&(u, v), &to_second) in self.edges.iter().zip(dirs) {
            d[if to_second { v } else { u } as usize] += 1;
        }
        d
    }

    /// `GRAPH <n> <m>` followed by one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("GRAPH {} {}\n", self.num_vertices, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty graph file"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "GRAPH" {
            return Err(Error::parse(1, 1, "expected `GRAPH <n> <m>`"));
        }
        let num = |s: &str, line: usize, col: usize| {
            s.parse::<u32>().map_err(|_| Error::parse(line, col, format!("bad integer {s:?}")))
        };
        let n = num(fields[1], 1, 7)?;
        let m = num(fields[2], 1, 8 + fields[1].len())?;
        let mut edges = Vec::with_capacity(m as usize);
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(lineno + 1, 1, "expected `u v`"));
            }
            let u = num(parts[0], lineno + 1, 1)?;
            let v = num(parts[1], lineno + 1, parts[0].len() + 2)?;
            edges.push((u, v));
        }
        if edges.len() != m as usize {
            return Err(Error::parse(1, 1, format!("header promises {m} edges, found {}", edges.len())));
        }
        SmallGraph::new(n, edges)
    }
}

/// Largest edge count [`search_orientation`] accepts.
pub const MAX_SEARCH_EDGES: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `dirs[e]` is true when edge `e` points at its second endpoint.
    Found(Vec<bool>),
    Absent,
}

struct Search<'g> {
    g: &'g SmallGraph,
    order: Vec<usize>,
    allowed: Vec<bool>,
    targets: Option<Vec<Option<u32>>>,
    indeg: Vec<u32>,
    remaining: Vec<u32>,
    finished: Vec<u32>,
    dirs: Vec<bool>,
}

impl Search<'_> {
    fn can_reach(&self, v: usize) -> bool {
        let lo = self.indeg[v] as usize;
        let hi = lo + self.remaining[v] as usize;
        (lo..=hi.min(self.allowed.len() - 1)).any(|d| self.allowed[d])
    }

    fn globally_consistent(&self) -> bool {
        let Some(targets) = &self.targets else { return true };
        for (d, target) in targets.iter().enumerate() {
            let Some(target) = *target else { continue };
            if self.finished[d] > target {
                return false;
            }
            let reachable = (0..self.indeg.len())
                .filter(|&v| {
                    self.remaining[v] > 0
                        && self.indeg[v] as usize <= d
                        && d <= (self.indeg[v] + self.remaining[v]) as usize
                })
                .count() as u32;
            if self.finished[d] + reachable < target {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, e: usize, to_second: bool) {
        let (u, v) = self.g.edges[e];
        let head = if to_second { v } else { u } as usize;
        self.dirs[e] = to_second;
        self.indeg[head] += 1;
        for w in [u as usize, v as usize] {
            self.remaining[w] -= 1;
            if self.remaining[w] == 0 {
                self.finished[self.indeg[w] as usize] += 1;
            }
        }
    }

    fn unassign(&mut self, e: usize) {
        let (u, v) = self.g.edges[e];
        let head = if self.dirs[e] { v } else { u } as usize;
        for w in [u as usize, v as usize] {
            if self.remaining[w] == 0 {
                self.finished[self.indeg[w] as usize] -= 1;
            }
            self.remaining[w] += 1;
        }
        self.indeg[head] -= 1;
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        let (u, v) = self.g.edges[e];
        for to_second in [false, true] {
            self.assign(e, to_second);
            if self.can_reach(u as usize) && self.can_reach(v as usize) && self.globally_consistent() && self.run(depth + 1) {
                return true;
            }
            self.unassign(e);
        }
        false
    }
}

/// Edge order that completes vertices as early as possible: repeatedly take
/// the vertex with the fewest undecided edges (ties to the lowest id) and
/// queue all of its undecided edges.
fn completion_order(g: &SmallGraph) -> Vec<usize> {
    let n = g.num_vertices as usize;
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        pending[u as usize].push(e);
        pending[v as usize].push(e);
    }
    let mut taken = vec![false; g.edges.len()];
    let mut order = Vec::with_capacity(g.edges.len());
    let mut started = vec![false; n];
    while order.len() < g.edges.len() {
        let slack = |v: usize| pending[v].iter().filter(|&&e| !taken[e]).count();
        let v = (0..n)
            .filter(|&v| slack(v) > 0)
            .min_by_key(|&v| (!started[v], slack(v), v))
            .expect("edges remain");
        for &e in &pending[v] {
            if !taken[e] {
                taken[e] = true;
                order.push(e);
                let (a, b) = g.edges[e];
                started[a as usize] = true;
                started[b as usize] = true;
            }
        }
    }
    order
}

/// Backtracking search for an orientation with every in-degree in `allowed`
/// and, when `counts` is given, exactly `counts[d]` vertices of in-degree `d`.
pub fn search_orientation(
    g: &SmallGraph,
    allowed: &BTreeSet<u32>,
    counts: Option<&BTreeMap<u32, u32>>,
) -> Result<SearchOutcome> {
    if g.edges.len() > MAX_SEARCH_EDGES {
        return Err(Error::TooLarge(format!("{} edges (limit {MAX_SEARCH_EDGES})", g.edges.len())));
    }
    let max_deg = g.degrees().into_iter().max().unwrap_or(0) as usize;
    let width = max_deg.max(allowed.iter().next_back().map_or(0, |&d| d as usize)) + 1;
    let mut allowed_vec = vec![false; width];
    for &d in allowed {
        allowed_vec[d as usize] = true;
    }
    let targets = match counts {
        Some(c) => {
            if c.keys().any(|d| !allowed.contains(d)) {
                return Ok(SearchOutcome::Absent);
            }
            if c.values().map(|&x| x as u64).sum::<u64>() != g.num_vertices as u64 {
                return Ok(SearchOutcome::Absent);
            }
            let mut t = vec![Some(0); width];
            for (&d, &x) in c {
                t[d as usize] = Some(x);
            }
            Some(t)
        }
        None => None,
    };
    let degrees = g.degrees();
    let mut search = Search {
        g,
        order: completion_order(g),
        allowed: allowed_vec,
        targets,
        indeg: vec![0; g.num_vertices as usize],
        remaining: degrees.clone(),
        finished: vec![0; width],
        dirs: vec![false; g.edges.len()],
    };
    for (v, &d) in degrees.iter().enumerate() {
        if d == 0 {
            search.finished[0] += 1;
        }
        if !search.can_reach(v) {
            return Ok(SearchOutcome::Absent);
        }
    }
    if !search.globally_consistent() {
        return Ok(SearchOutcome::Absent);
    }
    if search.run(0) {
        let dirs = search.dirs.clone();
        debug_assert!(g.in_degrees(&dirs).iter().all(|&d| allowed.contains(&d)));
        Ok(SearchOutcome::Found(dirs))
    } else {
        Ok(SearchOutcome::Absent)
    }
}

/// All `k`-subsets of `0..n` with no two members adjacent, as bitmasks.
fn independent_sets(adj: &[u32], k: u32) -> Vec<u32> {
    fn go(adj: &[u32], start: usize, k: u32, chosen: u32, blocked: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(chosen);
            return;
        }
        for v in start..adj.len() {
            if blocked >> v & 1 == 0 {
                go(adj, v + 1, k - 1, chosen | 1 << v, blocked | adj[v] | 1 << v, out);
            }
        }
    }
    let mut out = Vec::new();
    go(adj, 0, k, 0, 0, &mut out);
    out
}

/// Second route for a regular graph: a vertex of full in-degree is a sink,
/// sinks are pairwise non-adjacent, so enumerate every independent set of the
/// required size, point its edges inward, and try all directions of the rest.
/// Returns the number of witnesses found.
pub fn count_by_sink_sets(g: &SmallGraph, counts: &BTreeMap<u32, u32>) -> Result<u64> {
    let degrees = g.degrees();
    let r = degrees[0];
    if degrees.iter().any(|&d| d != r) {
        return Err(Error::InvalidParams("sink-set enumeration needs a regular graph".into()));
    }
    let adj = g.adjacency_masks();
    let sinks_needed = counts.get(&r).copied().unwrap_or(0);
    let mut witnesses = 0;
    for sinks in independent_sets(&adj, sinks_needed) {
        let free: Vec<usize> = (0..g.edges.len())
            .filter(|&e| {
                let (u, v) = g.edges[e];
                sinks >> u & 1 == 0 && sinks >> v & 1 == 0
            })
            .collect();
        if free.len() > 24 {
            return Err(Error::TooLarge(format!("{} free edges after fixing sinks", free.len())));
        }
        let mut dirs = vec![false; g.edges.len()];
        for (e, &(_, v)) in g.edges.iter().enumerate() {
            dirs[e] = sinks >> v & 1 == 1;
        }
        for mask in 0u32..(1 << free.len()) {
            for (j, &e) in free.iter().enumerate() {
                dirs[e] = mask >> j & 1 == 1;
            }
            let deg = g.in_degrees(&dirs);
            let mut tally: BTreeMap<u32, u32> = BTreeMap::new();
            for d in deg {
                *tally.entry(d).or_default() += 1;
            }
            if &tally == counts {
                witnesses += 1;
            }
        }
    }
    Ok(witnesses)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDegreeReport {
    pub search: SearchOutcome,
    pub sink_sets_checked: usize,
    pub sink_set_witnesses: u64,
}

impl ThreeDegreeReport {
    pub fn refuted(&self) -> bool {
        self.search == SearchOutcome::Absent && self.sink_set_witnesses == 0
    }
}

/// No orientation of the 4-cube has 7 vertices of in-degree 0, 2 of in-degree
/// 2 and 7 of in-degree 4. Checked by search and by sink-set enumeration.
pub fn q4_three_degrees() -> Result<ThreeDegreeReport> {
    let g = SmallGraph::hypercube(4)?;
    let counts: BTreeMap<u32, u32> = [(0, 7), (2, 2), (4, 7)].into_iter().collect();
    let allowed: BTreeSet<u32> = counts.keys().copied().collect();
    let search = search_orientation(&g, &allowed, Some(&counts))?;
    let sink_sets_checked = independent_sets(&g.adjacency_masks(), 7).len();
    let sink_set_witnesses = count_by_sink_sets(&g, &counts)?;
    Ok(ThreeDegreeReport { search, sink_sets_checked, sink_set_witnesses })
}

/// All labeled cubic graphs on `n` vertices, each exactly once: the lowest
/// vertex with missing edges is always joined to higher vertices in
/// increasing order.
fn labeled_cubic_graphs(n: u32) -> Vec<SmallGraph> {
    fn go(n: usize, adj: &mut Vec<u32>, edges: &mut Vec<(u32, u32)>, out: &mut Vec<SmallGraph>) {
        let Some(u) = (0..n).find(|&v| adj[v].count_ones() < 3) else {
            out.push(SmallGraph { num_vertices: n as u32, edges: edges.clone() });
            return;
        };
        let floor = 32 - (adj[u] & !((1u32 << (u + 1)) - 1)).leading_zeros() as usize;
        let start = floor.max(u + 1);
        for w in start..n {
            if adj[w].count_ones() < 3 && adj[u] >> w & 1 == 0 {
                adj[u] |= 1 << w;
                adj[w] |= 1 << u;
                edges.push((u as u32, w as u32));
                go(n, adj, edges, out);
                edges.pop();
                adj[u] &= !(1 << w);
                adj[w] &= !(1 << u);
            }
        }
    }
    let mut out = Vec::new();
    go(n as usize, &mut vec![0; n as usize], &mut Vec::new(), &mut out);
    out
}

/// Sorted per-vertex triangle counts, a cheap isomorphism invariant.
fn triangle_profile(adj: &[u32]) -> Vec<u32> {
    let mut p: Vec<u32> = (0..adj.len())
        .map(|v| {
            let nb = adj[v];
            (0..adj.len()).filter(|&w| nb >> w & 1 == 1).map(|w| (adj[w] & nb).count_ones()).sum::<u32>() / 2
        })
        .collect();
    p.sort_unstable();
    p
}

fn isomorphic(x: &[u32], y: &[u32]) -> bool {
    fn extend(x: &[u32], y: &[u32], map: &mut Vec<usize>, used: u32) -> bool {
        let v = map.len();
        if v == x.len() {
            return true;
        }
        for w in 0..y.len() {
            if used >> w & 1 == 1 || x[v].count_ones() != y[w].count_ones() {
                continue;
            }
            let consistent = (0..v).all(|u| (x[v] >> u & 1) == (y[w] >> map[u] & 1));
            if consistent {
                map.push(w);
                if extend(x, y, map, used | 1 << w) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    x.len() == y.len() && extend(x, y, &mut Vec::with_capacity(x.len()), 0)
}

/// Connected cubic graphs on 8 vertices up to isomorphism, each with whether it
/// admits an orientation with four vertices of in-degree 3 and four of 0.
pub fn cubic_counterexample_scan() -> Result<Vec<(SmallGraph, bool)>> {
    let mut reps: Vec<(SmallGraph, Vec<u32>, Vec<u32>)> = Vec::new();
    for g in labeled_cubic_graphs(8) {
        if !g.is_connected() {
            continue;
        }
        let adj = g.adjacency_masks();
        let profile = triangle_profile(&adj);
        let seen = reps.iter().any(|(_, radj, rprof)| *rprof == profile && isomorphic(&adj, radj));
        if !seen {
            reps.push((g, adj, profile));
        }
    }
    let allowed: BTreeSet<u32> = [0, 3].into_iter().collect();
    let counts: BTreeMap<u32, u32> = [(0, 4), (3, 4)].into_iter().collect();
    reps.into_iter()
        .map(|(g, _, _)| {
            let found = matches!(search_orientation(&g, &allowed, Some(&counts))?, SearchOutcome::Found(_));
            Ok((g, found))
        })
        .collect()
}

/// Whether two graphs on the same vertex count are isomorphic.
pub fn graphs_isomorphic(g: &SmallGraph, h: &SmallGraph) -> bool {
    g.num_vertices == h.num_vertices
        && g.edges.len() == h.edges.len()
        && isomorphic(&g.adjacency_masks(), &h.adjacency_masks())
}
