//! Constructive transformations between instances and the planner that
//! reduces any feasible `[a,b]_n` to a base or primitive instance.
//!
//! | step             | from          | to                   |
//! |------------------|---------------|----------------------|
//! | reverse          | `[a,b]_n`     | `[n-b,n-a]_n`        |
//! | checkerboard(a)  |               | `[a,n-a]_n`          |
//! | lift             | `[a,b]_n`     | `[a+1,b+1]_(n+2)`    |
//! | blow-up(k)       | `[a,b]_n`     | `[ka,kb]_(kn)`       |
//! | balanced Euler   |               | `[n/2,n/2]_n`        |
//! | primitive        |               | `[a,n]_n`            |

use std::fmt;

use num_integer::Integer;

use crate::cube::{edge_count, for_each_edge, in_degrees, Orientation, ProblemSpec, MAX_DIM};
use crate::error::{Error, Result};
use crate::euler::{euler_orient, EvenGraph};
use crate::feasibility::{classify_primitive, solve_counts, PrimitiveParams};
use crate::primitive::construct_primitive;

/// Every edge reversed; in-degrees become `n - d`.
pub fn reverse(o: &Orientation) -> Orientation {
    o.reversed()
}

/// Orients the direction-`i` edge toward its even endpoint when `i < a` and
/// toward its odd endpoint otherwise. Even vertices end with in-degree `a`,
/// odd vertices with `n - a`.
pub fn checkerboard(a: u32, n: u32) -> Result<Orientation> {
    if a > n {
        return Err(Error::InvalidParams(format!("checkerboard threshold {a} exceeds n={n}")));
    }
    Orientation::from_fn(n, |v, i| {
        let lower_is_even = v.count_ones() % 2 == 0;
        // head is the upper endpoint exactly when it is the wanted parity
        if i < a {
            !lower_is_even
        } else {
            lower_is_even
        }
    })
}

fn check_two_valued(o: &Orientation) -> Result<()> {
    let support = in_degrees(o).histogram().support();
    if support.len() > 2 {
        return Err(Error::Unverified(format!("in-degrees {support:?} take more than two values")));
    }
    Ok(())
}

/// Product with the 4-cycle on two new top coordinates `n` and `n+1`. The
/// low `n` coordinates carry `o` in every copy; each 4-cycle is oriented
/// `00 -> 10 -> 11 -> 01 -> 00` (bits `n`, `n+1`), adding one to every in-degree.
pub fn lift_plus_two(o: &Orientation) -> Result<Orientation> {
    check_two_valued(o)?;
    let n = o.dim();
    if n + 2 > MAX_DIM {
        return Err(Error::TooLarge(format!("lift to n={}", n + 2)));
    }
    let mut out = Orientation::new(n + 2)?;
    // Walk the source bits alongside: within one top-bit copy, the low-coordinate
    // edges of the lifted cube appear in the same relative order as in `o`.
    let mut src = 0u64;
    for_each_edge(n + 2, |v, i, idx| {
        let bit = if i < n {
            let b = o.bit(src);
            src += 1;
            if src == o.num_edges() {
                src = 0;
            }
            b
        } else if i == n {
            v >> (n + 1) & 1 == 0
        } else {
            v >> n & 1 == 1
        };
        if bit {
            out.set_bit(idx as u64, true);
        }
    });
    Ok(out)
}

/// Splits the `kn` coordinates into `n` contiguous blocks of `k` and maps a
/// vertex to its block parities. An edge in block `i` follows the direction
/// of the `i`-edge between the images, so every in-degree is multiplied by `k`.
pub fn blow_up(o: &Orientation, k: u32) -> Result<Orientation> {
    if k == 0 {
        return Err(Error::InvalidParams("blow-up factor must be at least 1".into()));
    }
    check_two_valued(o)?;
    let n = o.dim();
    let kn = n * k;
    if kn > MAX_DIM {
        return Err(Error::TooLarge(format!("blow-up to n={kn}")));
    }
    let block_mask = (1u64 << k) - 1;
    let psi = |v: u64| -> u64 {
        (0..n).fold(0, |acc, b| acc | (((v >> (b * k)) & block_mask).count_ones() as u64 & 1) << b)
    };
    Orientation::from_fn(kn, |v, j| {
        let block = j / k;
        let image = psi(v);
        let image_parity = image >> block & 1 == 1;
        o.head_is_upper(image, block) ^ image_parity
    })
}

/// Every vertex gets in-degree `n/2`, from Euler tours of the whole cube.
pub fn balanced_euler(n: u32) -> Result<Orientation> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParams(format!("balanced orientation needs even n >= 2, got {n}")));
    }
    if n > 26 {
        return Err(Error::TooLarge(format!("balanced Euler orientation at n={n}")));
    }
    let mut g = EvenGraph::with_capacity(1 << n, edge_count(n) as usize);
    for_each_edge(n, |v, i, _| {
        g.add_edge(v as u32, (v | 1 << i) as u32);
    });
    let tours = euler_orient(&g)?;
    let mut o = Orientation::new(n)?;
    // edge ids were assigned in canonical order
    for (e, &(tail, head)) in tours.iter().enumerate() {
        o.set_bit(e as u64, head > tail);
    }
    Ok(o)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Reverse,
    Checkerboard { a: u32 },
    LiftPlusTwo,
    BlowUp { factor: u32 },
    BalancedEuler,
    Primitive(PrimitiveParams),
}

impl StepKind {
    pub fn is_terminal(&self) -> bool {
        matches!(self, StepKind::Checkerboard { .. } | StepKind::BalancedEuler | StepKind::Primitive(_))
    }
}

/// One link of a plan: `input` is `None` for terminal steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub input: Option<ProblemSpec>,
    pub output: ProblemSpec,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Reverse => write!(f, "reverse"),
            StepKind::Checkerboard { a } => write!(f, "checkerboard a={a}"),
            StepKind::LiftPlusTwo => write!(f, "lift+2"),
            StepKind::BlowUp { factor } => write!(f, "blow-up x{factor}"),
            StepKind::BalancedEuler => write!(f, "balanced-euler"),
            StepKind::Primitive(p) => write!(f, "primitive k={} m={} n0={}", p.k, p.m, p.n0),
        }?;
        match self.input {
            Some(input) => write!(f, " {input} -> {}", self.output),
            None => write!(f, " -> {}", self.output),
        }
    }
}

/// Steps from a terminal construction up to the requested instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPlan {
    pub steps: Vec<ReductionStep>,
}

impl ReductionPlan {
    pub fn target(&self) -> ProblemSpec {
        self.steps.last().expect("plans are never empty").output
    }

    pub fn terminal(&self) -> &ReductionStep {
        &self.steps[0]
    }
}

impl fmt::Display for ReductionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Deterministic reduction of `[a,b]_n`:
///
/// 1. balanced (`a = b = n/2`, or one count is zero) → balanced Euler;
/// 2. `a + b = n` → checkerboard;
/// 3. `a + b < n` → reverse of `[n-b, n-a]_n`;
/// 4. `b < n` → lift of `[a-1, b-1]_(n-2)`;
/// 5. `g = gcd(a, n) > 1` → blow-up by `g` of `[a/g, n/g]_(n/g)`;
/// 6. otherwise the instance is primitive.
pub fn plan(a: u32, b: u32, n: u32) -> Result<ReductionPlan> {
    let target = ProblemSpec::new(n, a, b)?;
    let mut steps = Vec::new();
    plan_into(target, &mut steps)?;
    Ok(ReductionPlan { steps })
}

fn plan_into(spec: ProblemSpec, steps: &mut Vec<ReductionStep>) -> Result<()> {
    let ProblemSpec { n, a, b } = spec;
    let counts = solve_counts(a, b, n).ok_or(Error::Infeasible { n, a, b })?;
    let push = |steps: &mut Vec<ReductionStep>, kind, input| {
        steps.push(ReductionStep { kind, input, output: spec });
    };
    if a == b || counts.degenerate() {
        push(steps, StepKind::BalancedEuler, None);
    } else if a + b == n {
        push(steps, StepKind::Checkerboard { a }, None);
    } else if a + b < n {
        let inner = ProblemSpec::new(n, n - b, n - a)?;
        plan_into(inner, steps)?;
        push(steps, StepKind::Reverse, Some(inner));
    } else if b < n {
        let inner = ProblemSpec::new(n - 2, a - 1, b - 1)?;
        plan_into(inner, steps)?;
        push(steps, StepKind::LiftPlusTwo, Some(inner));
    } else {
        let g = a.gcd(&n);
        if g > 1 {
            let inner = ProblemSpec::new(n / g, a / g, n / g)?;
            plan_into(inner, steps)?;
            push(steps, StepKind::BlowUp { factor: g }, Some(inner));
        } else {
            let params = classify_primitive(a, b, n)
                .ok_or_else(|| Error::Invariant(format!("{spec} should be primitive")))?;
            push(steps, StepKind::Primitive(params), None);
        }
    }
    Ok(())
}

/// Runs a plan bottom-up.
pub fn execute(plan: &ReductionPlan) -> Result<Orientation> {
    let mut current: Option<Orientation> = None;
    for step in &plan.steps {
        let next = match (&step.kind, current.as_ref()) {
            (StepKind::Checkerboard { a }, None) => checkerboard(*a, step.output.n)?,
            (StepKind::BalancedEuler, None) => balanced_euler(step.output.n)?,
            (StepKind::Primitive(p), None) => construct_primitive(p)?,
            (StepKind::Reverse, Some(o)) => reverse(o),
            (StepKind::LiftPlusTwo, Some(o)) => lift_plus_two(o)?,
            (StepKind::BlowUp { factor }, Some(o)) => blow_up(o, *factor)?,
            (kind, _) => return Err(Error::Invariant(format!("malformed plan at {kind:?}"))),
        };
        current = Some(next);
    }
    current.ok_or_else(|| Error::Invariant("empty plan".into()))
}

/// Plans, executes, and checks the result against the counting solution.
pub fn construct(a: u32, b: u32, n: u32) -> Result<Orientation> {
    let p = plan(a, b, n)?;
    let spec = p.target();
    let o = execute(&p)?;
    let (s, t) = solve_counts(spec.a, spec.b, spec.n)
        .and_then(|c| c.to_u64())
        .ok_or(Error::Infeasible { n, a, b })?;
    let h = in_degrees(&o).histogram();
    let ok = if spec.a == spec.b {
        h.count(spec.a) == s
    } else {
        h.count(spec.a) == s && h.count(spec.b) == t
    };
    if !ok || h.total() != 1 << n {
        return Err(Error::Invariant(format!("{spec} produced {h}")));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Vertex;

    fn hist(o: &Orientation) -> String {
        in_degrees(o).histogram().to_string()
    }

    #[test]
    fn checkerboard_histograms() {
        assert_eq!(hist(&checkerboard(0, 3).unwrap()), "{0:4, 3:4}");
        assert_eq!(hist(&checkerboard(1, 3).unwrap()), "{1:4, 2:4}");
        assert_eq!(checkerboard(4, 4).unwrap(), reverse(&checkerboard(0, 4).unwrap()));
        let o = checkerboard(2, 5).unwrap();
        let d = in_degrees(&o);
        for v in 0..32u64 {
            let want = if v.count_ones() % 2 == 0 { 2 } else { 3 };
            assert_eq!(d.of(Vertex(v)), want);
        }
        assert!(checkerboard(4, 3).is_err());
    }

    #[test]
    fn reversed_checkerboard_swaps_classes() {
        let o = checkerboard(0, 3).unwrap();
        let r = reverse(&o);
        assert_eq!(hist(&r), "{0:4, 3:4}");
        let (d, dr) = (in_degrees(&o), in_degrees(&r));
        assert_eq!(d.of(Vertex(0)), 0);
        assert_eq!(dr.of(Vertex(0)), 3);
    }

    #[test]
    fn lift_examples() {
        let base = checkerboard(0, 1).unwrap();
        assert_eq!(hist(&lift_plus_two(&base).unwrap()), "{1:4, 2:4}");
        let o = construct(1, 3, 3).unwrap();
        let lifted = lift_plus_two(&o).unwrap();
        assert_eq!(hist(&lifted), "{2:24, 4:8}");
        let d = in_degrees(&lifted);
        for v in 0..32u64 {
            assert_eq!(d.of(Vertex(v)), o.in_degree(Vertex(v & 7)).unwrap() + 1);
        }
    }

    #[test]
    fn lift_keeps_low_coordinates() {
        let o = construct(1, 5, 5).unwrap();
        let lifted = lift_plus_two(&o).unwrap();
        for (v, i, up) in o.edges() {
            for top in 0..4u64 {
                assert_eq!(lifted.head_is_upper(v | top << 5, i), up);
            }
        }
    }

    #[test]
    fn blow_up_examples() {
        let o = checkerboard(1, 3).unwrap();
        assert_eq!(blow_up(&o, 1).unwrap(), o);
        assert_eq!(hist(&blow_up(&o, 2).unwrap()), "{2:32, 4:32}");
        let p = construct(1, 3, 3).unwrap();
        assert_eq!(hist(&blow_up(&p, 2).unwrap()), "{2:48, 6:16}");
        assert!(blow_up(&o, 0).is_err());
    }

    #[test]
    fn balanced_examples() {
        assert_eq!(hist(&balanced_euler(2).unwrap()), "{1:4}");
        assert_eq!(hist(&balanced_euler(4).unwrap()), "{2:16}");
        assert_eq!(hist(&balanced_euler(6).unwrap()), "{3:64}");
        assert!(balanced_euler(3).is_err());
    }

    #[test]
    fn plan_one_five_eight() {
        let p = plan(1, 5, 8).unwrap();
        let kinds: Vec<_> = p.steps.iter().map(|s| s.kind.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                StepKind::Primitive(classify_primitive(1, 3, 3).unwrap()),
                StepKind::BlowUp { factor: 2 },
                StepKind::LiftPlusTwo,
                StepKind::Reverse,
            ]
        );
        let outs: Vec<String> = p.steps.iter().map(|s| s.output.to_string()).collect();
        assert_eq!(outs, ["[1,3]_3", "[2,6]_6", "[3,7]_8", "[1,5]_8"]);
        for w in p.steps.windows(2) {
            assert_eq!(w[1].input, Some(w[0].output));
        }
    }

    #[test]
    fn plan_branch_choices() {
        assert_eq!(plan(2, 4, 6).unwrap().steps.len(), 1);
        assert_eq!(plan(2, 4, 6).unwrap().terminal().kind, StepKind::Checkerboard { a: 2 });
        assert!(matches!(plan(1, 5, 5).unwrap().terminal().kind, StepKind::Primitive(_)));
        assert_eq!(plan(1, 5, 5).unwrap().steps.len(), 1);
        assert_eq!(plan(2, 2, 4).unwrap().terminal().kind, StepKind::BalancedEuler);
        assert_eq!(plan(0, 2, 4).unwrap().terminal().kind, StepKind::BalancedEuler);
        assert!(matches!(plan(0, 3, 4), Err(Error::Infeasible { .. })));
        // swapped arguments plan the same instance
        assert_eq!(plan(5, 1, 8).unwrap(), plan(1, 5, 8).unwrap());
    }

    #[test]
    fn construct_examples() {
        assert_eq!(hist(&construct(0, 4, 4).unwrap()), "{0:8, 4:8}");
        assert_eq!(hist(&construct(3, 5, 8).unwrap()), "{3:128, 5:128}");
        assert_eq!(hist(&construct(2, 2, 4).unwrap()), "{2:16}");
        assert_eq!(hist(&reverse(&construct(1, 5, 5).unwrap())), "{0:12, 4:20}");
    }
}
