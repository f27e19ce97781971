//! Nearest-neighbor routing on coupling graphs.
//!
//! A routed circuit is indexed by wires, and wire `w` stays at physical site
//! `wire_sites[w]` for the whole circuit. Logical qubit `q` starts on wire
//! `q`; the remaining wires cover the unused sites in ascending order. A SWAP
//! exchanges the states of two wires, so logical qubits drift across sites
//! and [`RoutedResult::final_layout`] records where each one ends up.

use std::collections::VecDeque;
use std::fmt;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::sim::{self, StateVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    adj: Vec<Vec<usize>>,
    grid: Option<(usize, usize)>,
}

impl CouplingGraph {
    /// Graph over `sites` vertices; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(sites: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); sites];
        for &(a, b) in edges {
            if a >= sites || b >= sites || a == b {
                return Err(Error::Validation(format!("invalid edge ({a}, {b}) for {sites} sites")));
            }
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(CouplingGraph { adj, grid: None })
    }

    pub fn sites(&self) -> usize {
        self.adj.len()
    }

    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        self.grid
    }

    pub fn neighbors(&self, s: usize) -> &[usize] {
        &self.adj[s]
    }

    pub fn degree(&self, s: usize) -> usize {
        self.adj[s].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.sites()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.sites() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Longest shortest-path length, or `None` for a disconnected graph.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.sites() {
            for d in self.distances_from(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Shortest path `from..=to`. Among equally short paths, each step takes
    /// the lowest-numbered site that still lies on a shortest path.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let dist = self.distances_from(to);
        let mut d = dist[from]?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            cur = *self.adj[cur].iter().find(|&&v| dist[v] == Some(d - 1))?;
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }
}

/// 4-neighbor lattice; site `row * cols + col`.
pub fn grid_graph(rows: usize, cols: usize) -> Result<CouplingGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::Validation(format!("grid dimensions must be positive, got {rows}x{cols}")));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let s = r * cols + c;
            if c + 1 < cols {
                edges.push((s, s + 1));
            }
            if r + 1 < rows {
                edges.push((s, s + cols));
            }
        }
    }
    let mut g = CouplingGraph::from_edges(rows * cols, &edges)?;
    g.grid = Some((rows, cols));
    Ok(g)
}

/// Injective map from logical qubit to physical site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    sites: Vec<usize>,
}

impl Layout {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        for (i, s) in sites.iter().enumerate() {
            if let Some(j) = sites[..i].iter().position(|t| t == s) {
                return Err(Error::Validation(format!("qubits {j} and {i} share site {s}")));
            }
        }
        Ok(Layout { sites })
    }

    pub fn identity(n: usize) -> Self {
        Layout { sites: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, q: usize) -> usize {
        self.sites[q]
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Site of every wire: logical qubits first, then the unused sites ascending.
    pub fn wire_sites(&self, total_sites: usize) -> Vec<usize> {
        let mut wires = self.sites.clone();
        wires.extend((0..total_sites).filter(|s| !self.sites.contains(s)));
        wires
    }

    fn check(&self, g: &CouplingGraph) -> Result<()> {
        if let Some(&s) = self.sites.iter().find(|&&s| s >= g.sites()) {
            return Err(Error::Validation(format!("layout site {s} is outside the {}-site graph", g.sites())));
        }
        Ok(())
    }
}

/// Grid dimensions plus a layout, as stored in a layout file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub rows: usize,
    pub cols: usize,
    pub layout: Layout,
}

impl GridLayout {
    pub fn graph(&self) -> Result<CouplingGraph> {
        grid_graph(self.rows, self.cols)
    }
}

impl fmt::Display for GridLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {} {}", self.rows, self.cols)?;
        for (q, &s) in self.layout.sites().iter().enumerate() {
            writeln!(f, "q{q} {} {}", s / self.cols, s % self.cols)?;
        }
        Ok(())
    }
}

/// Parses `grid <rows> <cols>` followed by `q<i> <row> <col>` lines. Every
/// index `0..count` must appear exactly once. `#` starts a comment.
pub fn parse_layout(text: &str) -> Result<GridLayout> {
    let mut dims: Option<(usize, usize)> = None;
    let mut entries: Vec<Option<usize>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let loc = format!("line {}", lineno + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(&loc, format!("expected an integer, found {t:?}")));
        if toks[0] == "grid" {
            if dims.is_some() || toks.len() != 3 {
                return Err(Error::parse(&loc, "expected a single `grid <rows> <cols>` header"));
            }
            let (r, c) = (num(toks[1])?, num(toks[2])?);
            if r == 0 || c == 0 {
                return Err(Error::Validation(format!("{loc}: grid dimensions must be positive")));
            }
            dims = Some((r, c));
            continue;
        }
        let (rows, cols) = dims.ok_or_else(|| Error::parse(&loc, "layout entry before `grid` header"))?;
        let q = toks[0]
            .strip_prefix('q')
            .ok_or_else(|| Error::parse(&loc, format!("expected `q<index>`, found {:?}", toks[0])))
            .and_then(num)?;
        if toks.len() != 3 {
            return Err(Error::parse(&loc, "expected `q<index> <row> <col>`"));
        }
        let (r, c) = (num(toks[1])?, num(toks[2])?);
        if r >= rows || c >= cols {
            return Err(Error::Validation(format!("{loc}: position ({r}, {c}) is outside the {rows}x{cols} grid")));
        }
        if q >= entries.len() {
            entries.resize(q + 1, None);
        }
        if entries[q].is_some() {
            return Err(Error::Validation(format!("{loc}: q{q} placed twice")));
        }
        entries[q] = Some(r * cols + c);
    }
    let (rows, cols) = dims.ok_or_else(|| Error::parse("end of input", "missing `grid` header"))?;
    let sites = entries
        .iter()
        .enumerate()
        .map(|(q, s)| s.ok_or_else(|| Error::Validation(format!("q{q} has no position"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridLayout { rows, cols, layout: Layout::new(sites)? })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutedResult {
    /// Circuit over `graph.sites()` wires.
    pub circuit: Circuit,
    /// Site of each wire.
    pub wire_sites: Vec<usize>,
    /// Site holding each logical qubit after the circuit.
    pub final_layout: Layout,
    pub swap_count: usize,
}

impl RoutedResult {
    /// For each logical qubit, the wire holding it at the end.
    pub fn final_wires(&self) -> Vec<usize> {
        self.final_layout
            .sites()
            .iter()
            .map(|s| self.wire_sites.iter().position(|w| w == s).expect("final sites come from wire sites"))
            .collect()
    }
}

/// Tracks which logical qubit occupies each site while SWAPs are replayed.
struct Occupancy {
    pos: Vec<usize>,
    at: Vec<Option<usize>>,
}

impl Occupancy {
    fn new(l0: &Layout, sites: usize) -> Self {
        let mut at = vec![None; sites];
        for (q, &s) in l0.sites().iter().enumerate() {
            at[s] = Some(q);
        }
        Occupancy { pos: l0.sites().to_vec(), at }
    }

    fn swap_sites(&mut self, a: usize, b: usize) {
        self.at.swap(a, b);
        for s in [a, b] {
            if let Some(q) = self.at[s] {
                self.pos[q] = s;
            }
        }
    }
}

fn check_inputs(c: &Circuit, g: &CouplingGraph, l0: &Layout) -> Result<()> {
    if l0.len() != c.nqubits() {
        return Err(Error::Dimension { expected: c.nqubits(), found: l0.len() });
    }
    l0.check(g)?;
    if !g.is_connected() {
        return Err(Error::Routing("coupling graph is disconnected".into()));
    }
    Ok(())
}

/// Greedy router: before each two-qubit gate whose operands are not
/// adjacent, the first operand is swapped along a shortest path until it
/// neighbors the second. SWAPs already in the input are treated like any
/// other two-qubit gate. Three-qubit gates are rejected.
pub fn route(c: &Circuit, g: &CouplingGraph, l0: &Layout) -> Result<RoutedResult> {
    check_inputs(c, g, l0)?;
    let wire_sites = l0.wire_sites(g.sites());
    let mut wire_at = vec![0; g.sites()];
    for (w, &s) in wire_sites.iter().enumerate() {
        wire_at[s] = w;
    }
    let mut occ = Occupancy::new(l0, g.sites());
    let mut out = Circuit::new(g.sites(), c.ncbits());
    let mut swap_count = 0;
    for (idx, gate) in c.gates().iter().enumerate() {
        match gate.qubits().as_slice() {
            [a, b] => {
                let (a, b) = (*a, *b);
                if !g.adjacent(occ.pos[a], occ.pos[b]) {
                    let path = g
                        .shortest_path(occ.pos[a], occ.pos[b])
                        .ok_or_else(|| Error::Routing(format!("no path for gate {idx} ({gate})")))?;
                    for step in path.windows(2).take(path.len() - 2) {
                        out.push(Gate::Swap(wire_at[step[0]], wire_at[step[1]]))?;
                        occ.swap_sites(step[0], step[1]);
                        swap_count += 1;
                    }
                }
            }
            [_, _, _] => {
                return Err(Error::Routing(format!(
                    "gate {idx} ({gate}) needs three mutually adjacent sites; three-qubit gates are not routed"
                )));
            }
            _ => {}
        }
        // A SWAP from the input moves logical contents, not logical labels,
        // so it leaves the occupancy map alone.
        out.push(gate.map_qubits(|q| wire_at[occ.pos[q]]))?;
    }
    Ok(RoutedResult { circuit: out, wire_sites, final_layout: Layout::new(occ.pos)?, swap_count })
}

/// True iff every multi-qubit gate of a wire-indexed circuit acts on
/// pairwise adjacent sites, with wires placed as in [`Layout::wire_sites`].
pub fn is_compliant(c: &Circuit, g: &CouplingGraph, l0: &Layout) -> bool {
    if l0.check(g).is_err() || c.nqubits() > g.sites() || l0.len() > c.nqubits() {
        return false;
    }
    let wire_sites = l0.wire_sites(g.sites());
    c.gates().iter().all(|gate| {
        let sites: Vec<usize> = gate.qubits().iter().map(|&w| wire_sites[w]).collect();
        sites.iter().enumerate().all(|(i, &a)| sites[i + 1..].iter().all(|&b| g.adjacent(a, b)))
    })
}

/// Each `SWAP a b` becomes `CX a b`, `CX b a`, `CX a b`.
pub fn decompose_swaps(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    for &g in c.gates() {
        match g {
            Gate::Swap(a, b) => gates.extend([Gate::CX(a, b), Gate::CX(b, a), Gate::CX(a, b)]),
            other => gates.push(other),
        }
    }
    Circuit::from_gates(c.nqubits(), c.ncbits(), gates).expect("decomposition keeps operands valid")
}

/// Overlap `|⟨expected|actual⟩|` between the original circuit applied to
/// `input` and the routed circuit applied to `input` padded with `|0⟩` on the
/// spare wires, after undoing the routing permutation. Measurements are
/// dropped from both circuits.
pub fn routed_overlap(original: &Circuit, routed: &RoutedResult, input: &StateVector) -> Result<f64> {
    let n = original.nqubits();
    let wires = routed.circuit.nqubits();
    let expected = sim::run(&original.without_measurements(), input, 0)?.final_state;
    let expected = expected.tensor(&StateVector::zero(wires - n)?)?;
    let padded = input.tensor(&StateVector::zero(wires - n)?)?;
    let actual = sim::run(&routed.circuit.without_measurements(), &padded, 0)?.final_state;
    let logical = routed.final_wires();
    let mut source = logical.clone();
    source.extend((0..wires).filter(|w| !logical.contains(w)));
    Ok(expected.inner(&actual.permute_qubits(&source)?)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(grid_graph(1, 5).unwrap().edge_count(), 4);
        assert_eq!(grid_graph(2, 2).unwrap().edge_count(), 4);
        let g = grid_graph(3, 3).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!((g.degree(0), g.degree(1), g.degree(4)), (2, 3, 4));
        assert_eq!(g.diameter(), Some(4));
        assert!(grid_graph(0, 3).is_err());
    }

    #[test]
    fn shortest_path_prefers_low_sites() {
        let g = grid_graph(2, 2).unwrap();
        assert_eq!(g.shortest_path(0, 3), Some(vec![0, 1, 3]));
        assert_eq!(g.shortest_path(3, 0), Some(vec![3, 1, 0]));
        let split = CouplingGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(!split.is_connected());
        assert_eq!(split.shortest_path(0, 2), None);
        assert_eq!(split.diameter(), None);
    }

    #[test]
    fn layout_file_round_trip() {
        let text = "# corner placement\ngrid 2 3\nq1 0 2\nq0 1 0\n";
        let gl = parse_layout(text).unwrap();
        assert_eq!(gl.layout.sites(), &[3, 2]);
        assert_eq!(parse_layout(&gl.to_string()).unwrap(), gl);
        assert!(parse_layout("grid 2 2\nq0 0 0\nq1 0 0\n").is_err());
        assert!(parse_layout("grid 2 2\nq0 2 0\n").is_err());
        assert!(parse_layout("grid 2 2\nq1 0 0\n").is_err());
        assert!(parse_layout("q0 0 0\n").is_err());
    }

    #[test]
    fn corner_cx_needs_a_swap() {
        let g = grid_graph(2, 2).unwrap();
        let c = Circuit::from_gates(4, 0, vec![Gate::CX(0, 3)]).unwrap();
        let l0 = Layout::identity(4);
        assert!(!is_compliant(&c, &g, &l0));
        let r = route(&c, &g, &l0).unwrap();
        assert_eq!(r.swap_count, 1);
        assert_eq!(r.circuit.gates(), &[Gate::Swap(0, 1), Gate::CX(1, 3)]);
        assert_eq!(r.final_layout.sites(), &[1, 0, 2, 3]);
        assert!(is_compliant(&r.circuit, &g, &l0));
    }

    #[test]
    fn adjacent_circuit_is_untouched() {
        let g = grid_graph(1, 3).unwrap();
        let c = Circuit::from_gates(3, 0, vec![Gate::H(0), Gate::CX(0, 1), Gate::CZ(2, 1)]).unwrap();
        let r = route(&c, &g, &Layout::identity(3)).unwrap();
        assert_eq!(r.swap_count, 0);
        assert_eq!(r.circuit, c);
    }

    #[test]
    fn rejects_three_qubit_gates_and_bad_graphs() {
        let c = Circuit::from_gates(3, 0, vec![Gate::CCX(0, 1, 2)]).unwrap();
        assert!(matches!(route(&c, &grid_graph(1, 3).unwrap(), &Layout::identity(3)), Err(Error::Routing(_))));
        let split = CouplingGraph::from_edges(3, &[(0, 1)]).unwrap();
        let c = Circuit::from_gates(3, 0, vec![Gate::CX(0, 2)]).unwrap();
        assert!(matches!(route(&c, &split, &Layout::identity(3)), Err(Error::Routing(_))));
    }

    #[test]
    fn swap_decomposition() {
        let c = Circuit::from_gates(2, 0, vec![Gate::Swap(0, 1)]).unwrap();
        assert_eq!(decompose_swaps(&c).gates(), &[Gate::CX(0, 1), Gate::CX(1, 0), Gate::CX(0, 1)]);
        let plain = Circuit::from_gates(2, 0, vec![Gate::H(1)]).unwrap();
        assert_eq!(decompose_swaps(&plain), plain);
    }
}
