//! Structural existence conditions on the dependency graphs.

mod decompose;

pub use decompose::{
    complete, decompose, solve_by_decomposition, Bridge, CompletedCycle, DecomposeError, DecomposeOptions,
    Decomposition, ExtendedCycle, DEFAULT_HYPOTHESIS_BUDGET,
};

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::graph::{build_dg, enumerate_cycles, Edg, Sign};
use crate::kernel::KernelProgram;
use crate::program::{AtomId, Program};

/// Outcome of a structural check, with a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub holds: bool,
    /// For stratification, the atoms of an SCC with an internal negative
    /// edge. For call-consistency, a closed walk `a0, a1, ..., a0` with an
    /// odd number of negative edges.
    pub witness: Vec<AtomId>,
}

struct SignedGraph {
    graph: DiGraph<AtomId, Sign>,
    scc_of: Vec<usize>,
    sccs: Vec<Vec<usize>>,
}

fn signed_graph(p: &Program) -> SignedGraph {
    let dg = build_dg(p);
    let mut graph = DiGraph::new();
    let nodes: Vec<_> = dg.atoms().iter().map(|&a| graph.add_node(a)).collect();
    for &(from, to, sign) in dg.edges() {
        graph.add_edge(nodes[dg.position(from).unwrap()], nodes[dg.position(to).unwrap()], sign);
    }
    let mut sccs: Vec<Vec<usize>> =
        tarjan_scc(&graph).into_iter().map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        }).collect();
    sccs.sort();
    let mut scc_of = vec![0; graph.node_count()];
    for (i, c) in sccs.iter().enumerate() {
        for &n in c {
            scc_of[n] = i;
        }
    }
    SignedGraph { graph, scc_of, sccs }
}

/// Stratified iff no strongly connected component of the DG contains a
/// negative edge.
pub fn is_stratified(p: &Program) -> Finding {
    let sg = signed_graph(p);
    let g = &sg.graph;
    let bad = g
        .edge_indices()
        .filter(|&e| g[e] == Sign::Neg)
        .map(|e| g.edge_endpoints(e).unwrap())
        .filter(|(a, b)| sg.scc_of[a.index()] == sg.scc_of[b.index()])
        .map(|(a, _)| sg.scc_of[a.index()])
        .min();
    match bad {
        None => Finding { holds: true, witness: Vec::new() },
        Some(c) => Finding {
            holds: false,
            witness: sg.sccs[c].iter().map(|&n| g[petgraph::graph::NodeIndex::new(n)]).collect(),
        },
    }
}

/// Call-consistent iff no atom reaches itself through an odd number of
/// negative edges. Each SCC is labelled with BFS-tree path parities from its
/// smallest atom; a parity clash yields an odd closed walk.
pub fn is_call_consistent(p: &Program) -> Finding {
    use petgraph::graph::NodeIndex;
    use petgraph::visit::EdgeRef;

    let sg = signed_graph(p);
    let g = &sg.graph;
    let odd = |s: Sign| (s == Sign::Neg) as u8;

    let mut parity: Vec<Option<u8>> = vec![None; g.node_count()];
    let mut parent: Vec<usize> = (0..g.node_count()).collect();
    for scc in &sg.sccs {
        let root = scc[0];
        let inside = |v: usize| sg.scc_of[v] == sg.scc_of[root];
        parity[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = parity[u].unwrap();
            for e in g.edges(NodeIndex::new(u)) {
                let v = e.target().index();
                if !inside(v) {
                    continue;
                }
                let expect = pu ^ odd(*e.weight());
                match parity[v] {
                    None => {
                        parity[v] = Some(expect);
                        parent[v] = u;
                        queue.push_back(v);
                    }
                    Some(pv) if pv == expect => {}
                    Some(pv) => {
                        // Tree paths root->u and root->v have parities pu and
                        // pv; closing both with the same path v->root gives
                        // two walks of different parity.
                        let tree = |mut x: usize| {
                            let mut out = vec![x];
                            while x != root {
                                x = parent[x];
                                out.push(x);
                            }
                            out.reverse();
                            out
                        };
                        let (back, back_parity) = return_path(g, v, root, &inside);
                        let mut walk = if (pu ^ odd(*e.weight()) ^ back_parity) == 1 {
                            tree(u)
                        } else {
                            debug_assert_eq!(pv ^ back_parity, 1);
                            let mut w = tree(v);
                            w.pop();
                            w
                        };
                        walk.extend(back);
                        return Finding { holds: false, witness: walk.into_iter().map(|n| g[NodeIndex::new(n)]).collect() };
                    }
                }
            }
        }
    }
    Finding { holds: true, witness: Vec::new() }
}

/// Shortest path `from -> to` through vertices accepted by `inside`, with
/// the parity of its negative edges.
fn return_path(g: &DiGraph<AtomId, Sign>, from: usize, to: usize, inside: &dyn Fn(usize) -> bool) -> (Vec<usize>, u8) {
    use petgraph::graph::NodeIndex;
    use petgraph::visit::EdgeRef;

    let mut prev: Vec<Option<(usize, u8)>> = vec![None; g.node_count()];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; g.node_count()];
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for e in g.edges(NodeIndex::new(u)) {
            let v = e.target().index();
            if inside(v) && !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, (*e.weight() == Sign::Neg) as u8));
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut parity = 0;
    let mut cur = to;
    while cur != from {
        let (u, b) = prev[cur].expect("target reachable inside its SCC");
        parity ^= b;
        path.push(u);
        cur = u;
    }
    path.reverse();
    (path, parity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceStatus {
    NoModelsProven,
    ModelsGuaranteed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub status: ExistenceStatus,
    pub reasons: Vec<String>,
}

fn names(p: &Program, atoms: &[AtomId]) -> String {
    atoms.iter().map(|&a| p.name(a)).collect::<Vec<_>>().join(", ")
}

/// An unconstrained odd cycle rules out stable models; stratification or
/// call-consistency guarantees one. Anything else is left open.
pub fn check_necessary_condition(k: &KernelProgram, g: &Edg, cycle_cap: usize) -> ExistenceVerdict {
    let p = k.program();
    let cycles = match enumerate_cycles(g, cycle_cap) {
        Ok(c) => c,
        Err(e) => {
            return ExistenceVerdict { status: ExistenceStatus::Unknown, reasons: vec![e.to_string()] };
        }
    };
    let unconstrained: Vec<String> = cycles
        .iter()
        .filter(|c| c.is_odd() && c.is_unconstrained())
        .map(|c| {
            let labels: Vec<&str> = c.vertices.iter().map(|&v| g.label(v)).collect();
            format!("unconstrained odd cycle at {{{}}}", labels.join(", "))
        })
        .collect();
    if !unconstrained.is_empty() {
        return ExistenceVerdict { status: ExistenceStatus::NoModelsProven, reasons: unconstrained };
    }
    let strat = is_stratified(p);
    if strat.holds {
        return ExistenceVerdict { status: ExistenceStatus::ModelsGuaranteed, reasons: vec!["stratified".into()] };
    }
    let cc = is_call_consistent(p);
    if cc.holds {
        return ExistenceVerdict { status: ExistenceStatus::ModelsGuaranteed, reasons: vec!["call-consistent".into()] };
    }
    ExistenceVerdict {
        status: ExistenceStatus::Unknown,
        reasons: vec![
            "every odd cycle is constrained".into(),
            format!("not stratified: negative dependency inside {{{}}}", names(p, &strat.witness)),
            format!("not call-consistent: odd walk {}", cc.witness.iter().map(|&a| p.name(a)).collect::<Vec<_>>().join(" -> ")),
        ],
    }
}
