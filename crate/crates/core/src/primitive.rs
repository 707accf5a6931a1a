//! Primitive orientations `[a,n]_n` (`n` odd, `n = a + 2^k`, `a < 2^k`) from
//! thickened Hamming balls.
//!
//! A vertex of the `n`-cube is split as `(p, v)`: `v` is the low `n0 = 2^k - 1`
//! bits, a word of the Hamming cube, and `p` the top `2m = a + 1` bits. It is
//! even when `P(p) = P(v)` (equivalently, the whole word has even weight).
//! With `v = h` or `v = h<i>` for a codeword `h`, the vertex is an `H`, `Low`
//! (`i <= a`) or `High` (`i > a`) vertex, giving six classes.
//!
//! The construction runs in three phases:
//!
//! 1. `H+` and `High+` are sinks: every incident edge points in.
//! 2. Edges from `Low+` to `H-` or `High-` point at the odd vertex. After
//!    this every `H-` and `High-` vertex is fully oriented with in-degree `a`.
//! 3. What is left joins `Low+` to `Low-` only and is `2a`-regular on those
//!    vertices. Euler tours finish it with in-degree `a` at every `Low` vertex.
//!
//! Every phase checks its accounting before the next one starts.

use std::fmt;

use crate::cube::{for_each_edge, in_degrees, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::euler::{euler_orient, EvenGraph};
use crate::feasibility::{classify_primitive, solve_counts, PrimitiveParams};
use crate::hamming::HammingCode;

/// Largest dimension the primitive construction accepts.
pub const MAX_PRIMITIVE_DIM: u32 = 27;

/// A vertex written as `(p, v)`, `p` on the `2m`-cube and `v` on the `n0`-cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitVertex {
    pub p: u64,
    pub v: u64,
}

impl SplitVertex {
    pub fn split(x: Vertex, n0: u32) -> Self {
        SplitVertex { p: x.0 >> n0, v: x.0 & ((1 << n0) - 1) }
    }

    pub fn join(self, n0: u32) -> Vertex {
        Vertex(self.p << n0 | self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    HPlus,
    HMinus,
    LowPlus,
    LowMinus,
    HighPlus,
    HighMinus,
}

impl VertexClass {
    pub fn is_sink(self) -> bool {
        matches!(self, VertexClass::HPlus | VertexClass::HighPlus)
    }

    pub fn is_even(self) -> bool {
        matches!(self, VertexClass::HPlus | VertexClass::LowPlus | VertexClass::HighPlus)
    }

    pub fn is_low(self) -> bool {
        matches!(self, VertexClass::LowPlus | VertexClass::LowMinus)
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::HPlus => "H+",
            VertexClass::HMinus => "H-",
            VertexClass::LowPlus => "Low+",
            VertexClass::LowMinus => "Low-",
            VertexClass::HighPlus => "High+",
            VertexClass::HighMinus => "High-",
        })
    }
}

/// Class of `(p, v)` relative to `code` and threshold `a`.
pub fn classify(x: SplitVertex, code: &HammingCode, a: u32) -> VertexClass {
    let even = x.p.count_ones() % 2 == x.v.count_ones() % 2;
    match (code.decode(x.v).1, even) {
        (None, true) => VertexClass::HPlus,
        (None, false) => VertexClass::HMinus,
        (Some(i), true) if i <= a => VertexClass::LowPlus,
        (Some(i), false) if i <= a => VertexClass::LowMinus,
        (Some(_), true) => VertexClass::HighPlus,
        (Some(_), false) => VertexClass::HighMinus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    ToLower,
    ToUpper,
    Leftover,
}

/// Direction rule for an edge whose lower endpoint has class `lo` and upper
/// endpoint class `hi`.
fn edge_rule(lo: VertexClass, hi: VertexClass) -> Result<Rule> {
    use VertexClass::*;
    if lo.is_sink() && hi.is_sink() {
        return Err(Error::Invariant(format!("adjacent sinks {lo} and {hi}")));
    }
    Ok(match (lo, hi) {
        (_, h) if h.is_sink() => Rule::ToUpper,
        (l, _) if l.is_sink() => Rule::ToLower,
        (LowPlus, HMinus | HighMinus) => Rule::ToUpper,
        (HMinus | HighMinus, LowPlus) => Rule::ToLower,
        (LowPlus, LowMinus) | (LowMinus, LowPlus) => Rule::Leftover,
        _ => return Err(Error::Invariant(format!("no rule for an edge between {lo} and {hi}"))),
    })
}

fn check_dim(n: u32) -> Result<()> {
    if n > MAX_PRIMITIVE_DIM {
        return Err(Error::TooLarge(format!("primitive construction at n={n}")));
    }
    Ok(())
}

/// Builds the primitive orientation for `params`, verified against the
/// counting solution before it is returned.
pub fn construct_primitive(params: &PrimitiveParams) -> Result<Orientation> {
    if classify_primitive(params.a, params.n, params.n).as_ref() != Some(params) {
        return Err(Error::InvalidParams(format!("{params} is not primitive")));
    }
    if params.is_base() {
        return Orientation::from_fn(1, |_, _| true);
    }
    let n = params.n;
    let a = params.a;
    check_dim(n)?;
    let code = HammingCode::new(params.k)?;
    let n0 = params.n0;

    let classes: Vec<VertexClass> = (0..(1u64 << n))
        .map(|x| classify(SplitVertex::split(Vertex(x), n0), &code, a))
        .collect();

    let (s, t) = solve_counts(a, n, n)
        .and_then(|c| c.to_u64())
        .ok_or_else(|| Error::Invariant(format!("[{a},{n}]_{n} has no counts")))?;
    let sinks = classes.iter().filter(|c| c.is_sink()).count() as u64;
    if sinks != t {
        return Err(Error::Invariant(format!("{sinks} sinks, expected {t}")));
    }

    // phases 1 and 2
    let mut o = Orientation::new(n)?;
    let mut forced_in = vec![0u32; 1 << n];
    let mut leftover_deg = vec![0u32; 1 << n];
    let mut leftover = EvenGraph::with_capacity(1 << n, (a as usize) << n);
    let mut leftover_index = Vec::with_capacity((a as usize) << n);
    let mut failure = None;
    for_each_edge(n, |v, i, idx| {
        if failure.is_some() {
            return;
        }
        let u = v | 1 << i;
        match edge_rule(classes[v as usize], classes[u as usize]) {
            Ok(Rule::ToUpper) => {
                o.set_bit(idx as u64, true);
                forced_in[u as usize] += 1;
            }
            Ok(Rule::ToLower) => forced_in[v as usize] += 1,
            Ok(Rule::Leftover) => {
                leftover.add_edge(v as u32, u as u32);
                leftover_index.push(idx as u64);
                leftover_deg[v as usize] += 1;
                leftover_deg[u as usize] += 1;
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    for (x, &class) in classes.iter().enumerate() {
        let (want_in, want_left) = match class {
            VertexClass::HPlus | VertexClass::HighPlus => (n, 0),
            VertexClass::HMinus | VertexClass::HighMinus => (a, 0),
            VertexClass::LowPlus | VertexClass::LowMinus => (0, 2 * a),
        };
        if forced_in[x] != want_in || leftover_deg[x] != want_left {
            return Err(Error::Invariant(format!(
                "{class} vertex {x}: forced in-degree {}, leftover degree {}; expected {want_in}, {want_left}",
                forced_in[x], leftover_deg[x]
            )));
        }
    }

    // phase 3
    let tours = euler_orient(&leftover)?;
    for (e, &(_, head)) in tours.iter().enumerate() {
        let (lo, hi) = leftover.edge(e as u32);
        let lower = lo.min(hi);
        o.set_bit(leftover_index[e], head != lower);
    }

    let hist = in_degrees(&o).histogram();
    if hist.count(a) != s || hist.count(n) != t || hist.total() != s + t {
        return Err(Error::Invariant(format!("[{a},{n}]_{n} produced {hist}")));
    }
    Ok(o)
}

/// `[(n-1)/2, n]_n` for `n = 2^k - 1` directly: codewords are the sinks and
/// Euler tours orient the `(n-1)`-regular rest.
pub fn special_case_perfect(n: u32) -> Result<Orientation> {
    if n == 0 || !(n + 1).is_power_of_two() {
        return Err(Error::InvalidParams(format!("n={n} is not of the form 2^k - 1")));
    }
    check_dim(n)?;
    let code = HammingCode::new((n + 1).trailing_zeros())?;
    let is_sink: Vec<bool> = (0..(1u64 << n)).map(|v| code.is_codeword(v)).collect();

    let mut o = Orientation::new(n)?;
    let mut rest = EvenGraph::with_capacity(1 << n, 0);
    let mut rest_index = Vec::new();
    for_each_edge(n, |v, i, idx| {
        let u = v | 1 << i;
        match (is_sink[v as usize], is_sink[u as usize]) {
            (false, true) => o.set_bit(idx as u64, true),
            (true, false) => {}
            (false, false) => {
                rest.add_edge(v as u32, u as u32);
                rest_index.push(idx as u64);
            }
            (true, true) => unreachable!("codewords are at distance >= 3"),
        }
    });
    for (e, &(_, head)) in euler_orient(&rest)?.iter().enumerate() {
        let (lo, hi) = rest.edge(e as u32);
        o.set_bit(rest_index[e], head != lo.min(hi));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn params(a: u32, n: u32) -> PrimitiveParams {
        classify_primitive(a, n, n).unwrap()
    }

    #[test]
    fn classify_examples() {
        let code = HammingCode::new(2).unwrap();
        assert_eq!(classify(SplitVertex { p: 0b00, v: 0b000 }, &code, 1), VertexClass::HPlus);
        assert_eq!(classify(SplitVertex { p: 0b00, v: 0b001 }, &code, 1), VertexClass::LowMinus);
        assert_eq!(classify(SplitVertex { p: 0b01, v: 0b001 }, &code, 1), VertexClass::LowPlus);
        assert_eq!(classify(SplitVertex { p: 0b00, v: 0b100 }, &code, 1), VertexClass::HighMinus);
        assert_eq!(classify(SplitVertex { p: 0b11, v: 0b111 }, &code, 1), VertexClass::HMinus);
    }

    #[test]
    fn split_roundtrip() {
        for x in 0..32 {
            assert_eq!(SplitVertex::split(Vertex(x), 3).join(3), Vertex(x));
        }
    }

    #[test]
    fn class_counts_for_one_five_five() {
        let code = HammingCode::new(2).unwrap();
        let mut tally: HashMap<VertexClass, u32> = HashMap::new();
        for x in 0..32 {
            *tally.entry(classify(SplitVertex::split(Vertex(x), 3), &code, 1)).or_default() += 1;
        }
        let sinks = tally[&VertexClass::HPlus] + tally[&VertexClass::HighPlus];
        assert_eq!(sinks, 12);
        assert_eq!(tally.values().sum::<u32>(), 32);
    }

    #[test]
    fn small_primitives() {
        for (a, n, want) in [(0, 1, "{0:1, 1:1}"), (1, 3, "{1:6, 3:2}"), (1, 5, "{1:20, 5:12}")] {
            let o = construct_primitive(&params(a, n)).unwrap();
            assert_eq!(in_degrees(&o).histogram().to_string(), want);
        }
    }

    #[test]
    fn base_case_points_up() {
        let o = construct_primitive(&params(0, 1)).unwrap();
        assert!(o.bit(0));
    }

    #[test]
    fn primitives_up_to_fifteen() {
        for (a, n) in [(3, 7), (1, 9), (3, 11), (5, 13), (7, 15)] {
            let o = construct_primitive(&params(a, n)).unwrap();
            let counts = solve_counts(a, n, n).unwrap().to_u64().unwrap();
            let h = in_degrees(&o).histogram();
            assert_eq!((h.count(a), h.count(n)), counts);
            assert_eq!(h.support(), vec![a, n]);
        }
    }

    #[test]
    fn rejects_non_primitive_params() {
        let mut p = params(1, 5);
        p.a = 3;
        assert!(construct_primitive(&p).is_err());
    }

    #[test]
    fn perfect_special_case() {
        let h3 = in_degrees(&special_case_perfect(3).unwrap()).histogram();
        assert_eq!(h3.to_string(), "{1:6, 3:2}");
        let h7 = in_degrees(&special_case_perfect(7).unwrap()).histogram();
        assert_eq!(h7.to_string(), "{3:112, 7:16}");
        let via_thickening = in_degrees(&construct_primitive(&params(3, 7)).unwrap()).histogram();
        assert_eq!(h7, via_thickening);
        assert!(special_case_perfect(5).is_err());
    }
}
