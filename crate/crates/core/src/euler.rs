//! Balanced orientation of even-degree multigraphs along Euler circuits.
//!
//! Hierholzer's walk is run from every vertex that still has unused edges,
//! always taking the lowest unused edge id. Each edge is oriented in the
//! direction it is first walked. In an even graph a greedy walk can only get
//! stuck where it started, so every walk is closed and each vertex ends with
//! in-degree equal to out-degree.

use crate::error::{Error, Result};

pub type EdgeId = u32;

/// An undirected multigraph with every degree even (checked when oriented).
/// Loops count twice toward their vertex's degree.
#[derive(Debug, Clone, Default)]
pub struct EvenGraph {
    num_vertices: u32,
    edges: Vec<(u32, u32)>,
}

impl EvenGraph {
    pub fn new(num_vertices: u32) -> Self {
        EvenGraph { num_vertices, edges: Vec::new() }
    }

    pub fn with_capacity(num_vertices: u32, edges: usize) -> Self {
        EvenGraph { num_vertices, edges: Vec::with_capacity(edges) }
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> EdgeId {
        assert!(u < self.num_vertices && v < self.num_vertices, "edge ({u},{v}) out of range");
        self.edges.push((u, v));
        (self.edges.len() - 1) as EdgeId
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> (u32, u32) {
        self.edges[e as usize]
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.num_vertices as usize];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }
}

/// Compressed adjacency: for each vertex, `(neighbor, edge id)` sorted by edge id.
struct Adjacency {
    offsets: Vec<usize>,
    slots: Vec<(u32, EdgeId)>,
}

impl Adjacency {
    fn build(g: &EvenGraph, degrees: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &d in degrees {
            acc += d as usize;
            offsets.push(acc);
        }
        let mut fill = offsets[..degrees.len()].to_vec();
        let mut slots = vec![(0u32, 0u32); acc];
        for (e, &(u, v)) in g.edges.iter().enumerate() {
            slots[fill[u as usize]] = (v, e as EdgeId);
            fill[u as usize] += 1;
            slots[fill[v as usize]] = (u, e as EdgeId);
            fill[v as usize] += 1;
        }
        Adjacency { offsets, slots }
    }
}

/// Orients every edge so that each vertex has in-degree `deg / 2`.
/// Returns `(tail, head)` per edge id.
pub fn euler_orient(g: &EvenGraph) -> Result<Vec<(u32, u32)>> {
    let degrees = g.degrees();
    if let Some((v, &d)) = degrees.iter().enumerate().find(|(_, &d)| d % 2 == 1) {
        return Err(Error::OddDegree { vertex: v as u32, degree: d });
    }
    let adj = Adjacency::build(g, &degrees);
    let mut cursor = adj.offsets[..degrees.len()].to_vec();
    let mut used = vec![false; g.edges.len()];
    let mut oriented = vec![(u32::MAX, u32::MAX); g.edges.len()];
    let mut stack: Vec<u32> = Vec::new();

    for start in 0..g.num_vertices {
        stack.push(start);
        while let Some(&u) = stack.last() {
            let end = adj.offsets[u as usize + 1];
            let c = &mut cursor[u as usize];
            while *c < end && used[adj.slots[*c].1 as usize] {
                *c += 1;
            }
            if *c < end {
                let (w, e) = adj.slots[*c];
                used[e as usize] = true;
                oriented[e as usize] = (u, w);
                stack.push(w);
            } else {
                stack.pop();
            }
        }
    }

    let mut indeg = vec![0u32; degrees.len()];
    for &(_, head) in &oriented {
        indeg[head as usize] += 1;
    }
    assert!(
        indeg.iter().zip(&degrees).all(|(&i, &d)| 2 * i == d),
        "Euler orientation left an unbalanced vertex"
    );
    Ok(oriented)
}
