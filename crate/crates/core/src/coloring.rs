//! Face colorings of the square lattice and the equivalent edge-state model.
//!
//! Around a vertex, walk the four faces clockwise. Each edge crossed gets the
//! state `(next color − previous color) mod k` with respect to that vertex, so
//! states are nonzero, the two endpoints of an edge see conjugate states, and
//! the four states at a vertex sum to zero mod k. Conversely an edge-state
//! assignment determines a coloring once one face color is fixed, provided the
//! states sum to zero around every non-contractible loop.
//!
//! Two lattice pictures are used:
//!
//! * the **face grid** of `m × p` faces, for colorings and the
//!   coloring ↔ edge-state conversion;
//! * the **vertex lattice** used by the transfer matrices, where `m` counts
//!   rows of vertical edges and rows carry free dangling edges at both ends.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};

/// Edge states at one vertex in clockwise order starting from the top:
/// `[up, right, down, left]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexConfig {
    pub states: [u32; 4],
}

pub const UP: usize = 0;
pub const RIGHT: usize = 1;
pub const DOWN: usize = 2;
pub const LEFT: usize = 3;

impl VertexConfig {
    pub fn new(states: [u32; 4], k: u32) -> Result<Self> {
        check_k(k)?;
        for &s in &states {
            if s == 0 || s >= k {
                return Err(Error::InvalidEdgeState { state: s, max: k - 1 });
            }
        }
        if states.iter().sum::<u32>() % k != 0 {
            return Err(Error::VertexViolation { vertex: "(single)".into(), states: states.to_vec() });
        }
        Ok(VertexConfig { states })
    }
}

/// All admissible vertex configurations, in lexicographic order of `states`.
pub fn vertex_configs(k: u32) -> Result<Vec<VertexConfig>> {
    check_k(k)?;
    let mut out = Vec::new();
    for a in 1..k {
        for b in 1..k {
            for c in 1..k {
                for d in 1..k {
                    if (a + b + c + d) % k == 0 {
                        out.push(VertexConfig { states: [a, b, c, d] });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `M_k = (k-1)^3 - (k-1)^2 + (k-1)`.
pub fn vertex_count_closed_form(k: u32) -> Result<u64> {
    check_k(k)?;
    let x = u64::from(k - 1);
    Ok(x * x * x - x * x + x)
}

/// `M_k` by enumeration, checked against the closed form.
pub fn vertex_count(k: u32) -> Result<u64> {
    let enumerated = vertex_configs(k)?.len() as u64;
    let closed = vertex_count_closed_form(k)?;
    if enumerated != closed {
        return Err(Error::InvalidParameter(format!(
            "vertex enumeration {enumerated} disagrees with closed form {closed}"
        )));
    }
    Ok(enumerated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    /// Periodic in the row-stacking (`m`) direction only.
    Cylinder,
    Torus,
}

impl Boundary {
    fn wraps_rows(self) -> bool {
        matches!(self, Boundary::Cylinder | Boundary::Torus)
    }

    fn wraps_columns(self) -> bool {
        matches!(self, Boundary::Torus)
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Cylinder => "cylinder",
            Boundary::Torus => "torus",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "cylinder" => Ok(Boundary::Cylinder),
            "torus" => Ok(Boundary::Torus),
            other => Err(Error::Parse(format!("unknown boundary {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountTarget {
    Colorings,
    EdgeStates,
}

impl fmt::Display for CountTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountTarget::Colorings => "colorings",
            CountTarget::EdgeStates => "edge-states",
        })
    }
}

impl FromStr for CountTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "colorings" => Ok(CountTarget::Colorings),
            "edge-states" => Ok(CountTarget::EdgeStates),
            other => Err(Error::Parse(format!("unknown count target {other:?}"))),
        }
    }
}

/// An `m × p` grid of faces with its adjacency under a boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGrid {
    pub m: usize,
    pub p: usize,
    pub boundary: Boundary,
}

/// Which pair of faces an edge separates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceEdge {
    /// Between face `(r, c)` and its right neighbor; a vertical segment.
    Side { r: usize, c: usize },
    /// Between face `(r, c)` and the face below it; a horizontal segment.
    Stack { r: usize, c: usize },
}

impl fmt::Display for FaceEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceEdge::Side { r, c } => write!(f, "side({r},{c})"),
            FaceEdge::Stack { r, c } => write!(f, "stack({r},{c})"),
        }
    }
}

impl FaceGrid {
    pub fn new(m: usize, p: usize, boundary: Boundary) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::InvalidParameter("face grid needs m, p >= 1".into()));
        }
        Ok(FaceGrid { m, p, boundary })
    }

    pub fn faces(&self) -> usize {
        self.m * self.p
    }

    pub fn face(&self, r: usize, c: usize) -> usize {
        r * self.p + c
    }

    fn right_of(&self, r: usize, c: usize) -> Option<(usize, usize)> {
        if c + 1 < self.p {
            Some((r, c + 1))
        } else if self.boundary.wraps_columns() {
            Some((r, 0))
        } else {
            None
        }
    }

    fn below(&self, r: usize, c: usize) -> Option<(usize, usize)> {
        if r + 1 < self.m {
            Some((r + 1, c))
        } else if self.boundary.wraps_rows() {
            Some((0, c))
        } else {
            None
        }
    }

    /// Every face adjacency once, side edges first, each in row-major order.
    pub fn edges(&self) -> Vec<FaceEdge> {
        let mut out = Vec::new();
        for r in 0..self.m {
            for c in 0..self.p {
                if self.right_of(r, c).is_some() {
                    out.push(FaceEdge::Side { r, c });
                }
            }
        }
        for r in 0..self.m {
            for c in 0..self.p {
                if self.below(r, c).is_some() {
                    out.push(FaceEdge::Stack { r, c });
                }
            }
        }
        out
    }

    /// The two faces of an edge, `(first, second)` = (left, right) or (top, bottom).
    pub fn endpoints(&self, e: FaceEdge) -> (usize, usize) {
        match e {
            FaceEdge::Side { r, c } => {
                let (r2, c2) = self.right_of(r, c).expect("edge exists");
                (self.face(r, c), self.face(r2, c2))
            }
            FaceEdge::Stack { r, c } => {
                let (r2, c2) = self.below(r, c).expect("edge exists");
                (self.face(r, c), self.face(r2, c2))
            }
        }
    }

    /// Lattice vertices: the bottom-right corner of face `(r, c)` whenever the
    /// four faces around it exist.
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.m {
            for c in 0..self.p {
                if let (Some((r1, c1)), Some(_)) = (self.right_of(r, c), self.below(r, c)) {
                    if self.below(r1, c1).is_some() {
                        out.push((r, c));
                    }
                }
            }
        }
        out
    }

    /// The edges around vertex `(r, c)` as `[up, right, down, left]`, each with
    /// the side of the edge the vertex sits on (0 = first endpoint, 1 = second).
    pub fn vertex_edges(&self, r: usize, c: usize) -> [(FaceEdge, usize); 4] {
        let (_, c1) = self.right_of(r, c).expect("vertex exists");
        let (r1, _) = self.below(r, c).expect("vertex exists");
        [
            // side edge between TL and TR; the vertex is its lower end
            (FaceEdge::Side { r, c }, 0),
            // stack edge between TR and BR; the vertex is its left end
            (FaceEdge::Stack { r, c: c1 }, 0),
            // side edge between BL and BR; the vertex is its upper end
            (FaceEdge::Side { r: r1, c }, 1),
            // stack edge between TL and BL; the vertex is its right end
            (FaceEdge::Stack { r, c }, 1),
        ]
    }
}

/// A proper coloring of a face grid with colors `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeColoring {
    pub k: u32,
    pub m: usize,
    pub p: usize,
    pub boundary: Boundary,
    pub grid: Vec<u32>,
}

impl LatticeColoring {
    pub fn new(k: u32, grid: FaceGrid, colors: Vec<u32>) -> Result<Self> {
        check_k(k)?;
        if colors.len() != grid.faces() {
            return Err(Error::DimensionMismatch { expected: grid.faces(), got: colors.len() });
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::InvalidParameter(format!("color {bad} outside 1..={k}")));
        }
        Ok(LatticeColoring { k, m: grid.m, p: grid.p, boundary: grid.boundary, grid: colors })
    }

    pub fn face_grid(&self) -> FaceGrid {
        FaceGrid { m: self.m, p: self.p, boundary: self.boundary }
    }

    pub fn color(&self, r: usize, c: usize) -> u32 {
        self.grid[r * self.p + c]
    }

    pub fn is_proper(&self) -> bool {
        let g = self.face_grid();
        g.edges().into_iter().all(|e| {
            let (a, b) = g.endpoints(e);
            self.grid[a] != self.grid[b]
        })
    }
}

/// States of every face-grid edge, with respect to its first and second endpoint vertex.
///
/// For a side edge the first endpoint is the lower vertex; for a stack edge it
/// is the left vertex. With this choice, a coloring gives state
/// `color(second face) − color(first face)` with respect to the first endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeAssignment {
    pub k: u32,
    pub grid: FaceGrid,
    pub edges: Vec<FaceEdge>,
    pub states: Vec<[u32; 2]>,
}

impl EdgeAssignment {
    fn state(&self, e: FaceEdge) -> [u32; 2] {
        let i = self.edges.iter().position(|&x| x == e).expect("edge exists");
        self.states[i]
    }

    /// Checks conjugacy on every edge and the zero-sum rule at every vertex.
    pub fn validate(&self) -> Result<()> {
        let k = self.k;
        for (e, s) in self.edges.iter().zip(&self.states) {
            for &x in s {
                if x == 0 || x >= k {
                    return Err(Error::InvalidEdgeState { state: x, max: k - 1 });
                }
            }
            if (s[0] + s[1]) % k != 0 {
                return Err(Error::ConjugateViolation { edge: e.to_string(), first: s[0], second: s[1] });
            }
        }
        for (r, c) in self.grid.vertices() {
            let states: Vec<u32> = self.grid.vertex_edges(r, c).iter().map(|&(e, side)| self.state(e)[side]).collect();
            if states.iter().sum::<u32>() % k != 0 {
                return Err(Error::VertexViolation { vertex: format!("({r},{c})"), states });
            }
        }
        Ok(())
    }

    /// The configuration at vertex `(r, c)` of the face grid.
    pub fn vertex_config(&self, r: usize, c: usize) -> VertexConfig {
        let e = self.grid.vertex_edges(r, c);
        VertexConfig { states: [0, 1, 2, 3].map(|i| self.state(e[i].0)[e[i].1]) }
    }
}

/// Edge states read off a coloring.
pub fn coloring_to_edgestates(coloring: &LatticeColoring) -> Result<EdgeAssignment> {
    if !coloring.is_proper() {
        return Err(Error::InvalidParameter("coloring is not proper".into()));
    }
    let k = coloring.k;
    let grid = coloring.face_grid();
    let edges = grid.edges();
    let states = edges
        .iter()
        .map(|&e| {
            let (a, b) = grid.endpoints(e);
            let d = (coloring.grid[b] + k - coloring.grid[a]) % k;
            [d, (k - d) % k]
        })
        .collect();
    Ok(EdgeAssignment { k, grid, edges, states })
}

/// All `k` colorings consistent with an edge-state assignment, ordered by the
/// color of face `(0, 0)`.
pub fn edgestates_to_colorings(assignment: &EdgeAssignment) -> Result<Vec<LatticeColoring>> {
    assignment.validate()?;
    let k = assignment.k;
    let grid = assignment.grid;
    let n = grid.faces();
    // adjacency: (neighbor, state from this face to neighbor)
    let mut adj: Vec<Vec<(usize, u32, FaceEdge)>> = vec![Vec::new(); n];
    for (&e, s) in assignment.edges.iter().zip(&assignment.states) {
        let (a, b) = grid.endpoints(e);
        adj[a].push((b, s[0], e));
        adj[b].push((a, s[1], e));
    }
    // Offsets relative to face 0 are shared by all k colorings.
    let mut offset: Vec<Option<u32>> = vec![None; n];
    for start in 0..n {
        if offset[start].is_some() {
            continue;
        }
        offset[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let base = offset[f].expect("visited");
            for &(g, d, e) in &adj[f] {
                let want = (base + d) % k;
                match offset[g] {
                    None => {
                        offset[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(have) if have != want => return Err(Error::Holonomy { edge: e.to_string() }),
                    Some(_) => {}
                }
            }
        }
    }
    let offsets: Vec<u32> = offset.into_iter().map(|o| o.expect("all faces visited")).collect();
    Ok((0..k)
        .map(|shift| LatticeColoring {
            k,
            m: grid.m,
            p: grid.p,
            boundary: grid.boundary,
            grid: offsets.iter().map(|&o| (o + shift) % k + 1).collect(),
        })
        .collect())
}

/// Bound on the number of leaves a brute-force search may enumerate.
pub const DEFAULT_SEARCH_BUDGET: u128 = 20_000_000_000;

/// Proper colorings of the face grid by backtracking in row-major order.
pub fn count_colorings(grid: FaceGrid, k: u32, budget: u128) -> Result<BigUint> {
    check_k(k)?;
    let n = grid.faces();
    let size = u128::from(k) * u128::from(k - 1).checked_pow(n as u32 - 1).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::SearchBudgetExceeded { what: "colorings", size, budget });
    }
    // For each face, earlier faces it must differ from.
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in grid.edges() {
        let (a, b) = grid.endpoints(e);
        if a == b {
            return Ok(BigUint::from(0u32));
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        earlier[hi].push(lo);
    }
    fn go(i: usize, colors: &mut Vec<u32>, earlier: &[Vec<usize>], k: u32) -> u64 {
        if i == colors.len() {
            return 1;
        }
        let mut total = 0;
        for c in 1..=k {
            if earlier[i].iter().all(|&j| colors[j] != c) {
                colors[i] = c;
                total += go(i + 1, colors, earlier, k);
            }
        }
        colors[i] = 0;
        total
    }
    let total: u64 = (1..=k)
        .into_par_iter()
        .map(|first| {
            let mut colors = vec![0u32; n];
            colors[0] = first;
            go(1, &mut colors, &earlier, k)
        })
        .sum();
    Ok(BigUint::from(total))
}

/// Solutions of a system `Σ coef·x ≡ 0 (mod k)` with every `x` in `1..k`.
///
/// Variables are assigned in index order. A constraint is resolved when its
/// highest-index variable is reached; if that variable has coefficient ±1 its
/// value is forced, otherwise it is branched on and checked.
#[derive(Debug, Clone)]
pub struct ModularSystem {
    k: u32,
    vars: usize,
    constraints: Vec<Vec<(usize, u32)>>,
}

impl ModularSystem {
    pub fn new(k: u32, vars: usize) -> Self {
        ModularSystem { k, vars, constraints: Vec::new() }
    }

    /// Adds `Σ sign·x_var ≡ 0`. Repeated variables are merged.
    pub fn add(&mut self, terms: &[(usize, i64)]) {
        let k = i64::from(self.k);
        let mut merged: Vec<(usize, u32)> = Vec::new();
        for &(v, s) in terms {
            let s = s.rem_euclid(k) as u32;
            match merged.iter_mut().find(|(u, _)| *u == v) {
                Some((_, c)) => *c = (*c + s) % self.k,
                None => merged.push((v, s)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        merged.sort_unstable();
        self.constraints.push(merged);
    }

    /// Number of variables that are branched on rather than forced.
    pub fn branching_vars(&self) -> usize {
        let forced = self.plan().iter().filter(|p| p.forced.is_some()).count();
        self.vars - forced
    }

    fn plan(&self) -> Vec<VarPlan> {
        let mut plans: Vec<VarPlan> = (0..self.vars).map(|_| VarPlan::default()).collect();
        for (ci, c) in self.constraints.iter().enumerate() {
            match c.last() {
                None => {}
                Some(&(last, coef)) => {
                    if plans[last].forced.is_none() && (coef == 1 || coef == self.k - 1) {
                        plans[last].forced = Some(ci);
                    } else {
                        plans[last].checks.push(ci);
                    }
                }
            }
        }
        plans
    }

    pub fn count(&self, budget: u128) -> Result<BigUint> {
        let size = u128::from(self.k - 1).checked_pow(self.branching_vars() as u32).unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::SearchBudgetExceeded { what: "edge states", size, budget });
        }
        if self.vars == 0 {
            return Ok(BigUint::from(1u32));
        }
        let plans = self.plan();
        let first: Vec<u32> = match plans[0].forced {
            Some(_) => vec![0],
            None => (1..self.k).collect(),
        };
        let total: u64 = first
            .into_par_iter()
            .map(|x0| {
                let mut values = vec![0u32; self.vars];
                self.search(0, Some(x0), &mut values, &plans)
            })
            .sum();
        Ok(BigUint::from(total))
    }

    fn partial(&self, ci: usize, values: &[u32]) -> u32 {
        self.constraints[ci].iter().fold(0, |acc, &(v, c)| (acc + c * values[v]) % self.k)
    }

    fn search(&self, i: usize, preset: Option<u32>, values: &mut Vec<u32>, plans: &[VarPlan]) -> u64 {
        if i == self.vars {
            return 1;
        }
        let k = self.k;
        let candidates: Vec<u32> = match (plans[i].forced, preset) {
            (Some(ci), _) => {
                values[i] = 0;
                let rest = self.partial(ci, values);
                let coef = self.constraints[ci].last().expect("nonempty").1;
                // coef·x + rest ≡ 0 with coef = ±1
                let x = if coef == 1 { (k - rest) % k } else { rest };
                if x == 0 {
                    return 0;
                }
                vec![x]
            }
            (None, Some(x)) => vec![x],
            (None, None) => (1..k).collect(),
        };
        let mut total = 0;
        for x in candidates {
            values[i] = x;
            if plans[i].checks.iter().all(|&ci| self.partial(ci, values) == 0) {
                total += self.search(i + 1, None, values, plans);
            }
        }
        values[i] = 0;
        total
    }
}

#[derive(Debug, Clone, Default)]
struct VarPlan {
    forced: Option<usize>,
    checks: Vec<usize>,
}

/// Edge-state system on the face grid. With `zero_holonomy`, the states must
/// also sum to zero along one loop in each periodic direction, which is
/// exactly the condition for the assignment to come from a coloring.
pub fn face_edge_system(grid: FaceGrid, k: u32, zero_holonomy: bool) -> (ModularSystem, Vec<FaceEdge>) {
    let edges = grid.edges();
    let index = |e: FaceEdge| edges.iter().position(|&x| x == e).expect("edge exists");
    let mut sys = ModularSystem::new(k, edges.len());
    for (r, c) in grid.vertices() {
        let terms: Vec<(usize, i64)> =
            grid.vertex_edges(r, c).iter().map(|&(e, side)| (index(e), if side == 0 { 1 } else { -1 })).collect();
        sys.add(&terms);
    }
    if zero_holonomy {
        if grid.boundary.wraps_columns() {
            let terms: Vec<(usize, i64)> = (0..grid.p).map(|c| (index(FaceEdge::Side { r: 0, c }), 1)).collect();
            sys.add(&terms);
        }
        if grid.boundary.wraps_rows() {
            let terms: Vec<(usize, i64)> = (0..grid.m).map(|r| (index(FaceEdge::Stack { r, c: 0 }), 1)).collect();
            sys.add(&terms);
        }
    }
    (sys, edges)
}

/// Edge-state system on the transfer-matrix vertex lattice.
///
/// `m` is the number of rows of vertical edges and `p` the vertices per row.
/// Rows are open with a free dangling horizontal edge at each end, except on
/// the torus where they close up.
///
/// * cylinder: `m` vertex rows, vertical edges periodic;
/// * open: `m − 1` vertex rows between `m` layers of vertical edges, the
///   outermost layers dangling;
/// * torus: `m` vertex rows of `p` vertices, periodic both ways.
pub fn vertex_lattice_system(m: usize, p: usize, k: u32, boundary: Boundary) -> Result<ModularSystem> {
    check_k(k)?;
    if m == 0 || p == 0 {
        return Err(Error::InvalidParameter("vertex lattice needs m, p >= 1".into()));
    }
    let vertex_rows = match boundary {
        Boundary::Open => {
            if m < 2 {
                return Err(Error::InvalidParameter("open vertex lattice needs m >= 2".into()));
            }
            m - 1
        }
        Boundary::Cylinder | Boundary::Torus => m,
    };
    let h_per_row = if boundary == Boundary::Torus { p } else { p + 1 };
    // Variables interleaved row by row so constraints close early:
    // vertical layer r, then horizontal edges of vertex row r.
    let mut next = 0usize;
    let mut vertical = Vec::with_capacity(m);
    let mut horizontal = Vec::with_capacity(vertex_rows);
    for r in 0..m {
        vertical.push((next..next + p).collect::<Vec<_>>());
        next += p;
        if r < vertex_rows {
            horizontal.push((next..next + h_per_row).collect::<Vec<_>>());
            next += h_per_row;
        }
    }
    let mut sys = ModularSystem::new(k, next);
    // Horizontal variable = state w.r.t. its left endpoint; vertical = w.r.t. its lower endpoint.
    for r in 0..vertex_rows {
        for c in 0..p {
            let (left, right) = if boundary == Boundary::Torus {
                (horizontal[r][(c + p - 1) % p], horizontal[r][c])
            } else {
                (horizontal[r][c], horizontal[r][c + 1])
            };
            let below = vertical[r][c];
            let above = vertical[(r + 1) % m][c];
            sys.add(&[(right, 1), (left, -1), (above, 1), (below, -1)]);
        }
    }
    Ok(sys)
}

/// Edge-state assignments of the torus whose states sum to zero around both
/// cycles: the assignments that lift to colorings.
pub fn count_liftable_torus(m: usize, p: usize, k: u32, budget: u128) -> Result<BigUint> {
    let mut sys = vertex_lattice_system(m, p, k, Boundary::Torus)?;
    // Variables: vertical layer r occupies [r(2p), r(2p)+p), horizontals follow.
    let vertical = |r: usize, c: usize| r * 2 * p + c;
    let horizontal = |r: usize, c: usize| r * 2 * p + p + c;
    sys.add(&(0..p).map(|c| (vertical(0, c), 1)).collect::<Vec<_>>());
    sys.add(&(0..m).map(|r| (horizontal(r, 0), 1)).collect::<Vec<_>>());
    sys.count(budget)
}

/// Exhaustive count of colorings (on the `m × p` face grid) or of edge-state
/// assignments (on the transfer-matrix vertex lattice).
pub fn brute_force_count(
    m: usize,
    p: usize,
    k: u32,
    boundary: Boundary,
    what: CountTarget,
    budget: u128,
) -> Result<BigUint> {
    match what {
        CountTarget::Colorings => count_colorings(FaceGrid::new(m, p, boundary)?, k, budget),
        CountTarget::EdgeStates => vertex_lattice_system(m, p, k, boundary)?.count(budget),
    }
}

/// JSON record for a brute-force count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub m: usize,
    pub p: usize,
    pub k: u32,
    pub boundary: Boundary,
    pub what: CountTarget,
    pub count: String,
    pub elapsed_ms: Option<u64>,
}

pub fn timed_count(
    m: usize,
    p: usize,
    k: u32,
    boundary: Boundary,
    what: CountTarget,
    budget: u128,
) -> Result<CountRecord> {
    let start = Instant::now();
    let count = brute_force_count(m, p, k, boundary, what, budget)?;
    Ok(CountRecord {
        m,
        p,
        k,
        boundary,
        what,
        count: count.to_string(),
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}
