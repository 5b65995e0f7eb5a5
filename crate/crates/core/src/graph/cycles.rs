//! Elementary cycles of the negative subgraph of an EDG, and their handles.
//!
//! Enumeration is Johnson's circuit search: for each start vertex `s` in
//! increasing order, cycles are searched inside the strongly connected
//! component of `s` in the subgraph induced by the vertices `>= s`. Each
//! cycle is therefore reported once, rotated to start at its smallest vertex.

use serde::Serialize;
use thiserror::Error;

use super::{Edg, Sign, VertexId};
use crate::program::AtomId;

pub const DEFAULT_CYCLE_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("more than {cap} elementary cycles")]
    CycleBudgetExceeded { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HandleKind {
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
}

/// An edge entering a cycle that is not one of the cycle's own edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handle {
    /// Index into [`Edg::edges`].
    pub edge: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub sign: Sign,
    pub kind: HandleKind,
    pub source_atom: AtomId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleInfo {
    /// `vertices[i] -> vertices[i + 1]` and last -> first are negative edges.
    pub vertices: Vec<VertexId>,
    /// Distinct atoms of the cycle vertices, in id order.
    pub atoms: Vec<AtomId>,
    pub parity: Parity,
    pub handles: Vec<Handle>,
}

impl CycleInfo {
    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn is_unconstrained(&self) -> bool {
        self.handles.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_atom(&self, a: AtomId) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    /// The vertex preceding `v` along the cycle.
    pub fn predecessor(&self, v: VertexId) -> Option<VertexId> {
        let i = self.vertices.iter().position(|&x| x == v)?;
        let n = self.vertices.len();
        Some(self.vertices[(i + n - 1) % n])
    }
}

fn negative_adjacency(g: &Edg) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.len()];
    for e in g.edges().iter().filter(|e| e.sign == Sign::Neg) {
        adj[e.from.index()].push(e.to.index());
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn reach(adj: &[Vec<usize>], start: usize, min: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if w >= min && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    component: Vec<bool>,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<Vec<usize>>,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(u) = work.pop() {
            if !self.blocked[u] {
                continue;
            }
            self.blocked[u] = false;
            work.extend(std::mem::take(&mut self.block_map[u]));
        }
    }

    fn circuit(&mut self, v: usize, s: usize) -> Result<bool, CycleError> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let next: Vec<usize> = self.adj[v].iter().copied().filter(|&w| self.component[w]).collect();
        for &w in &next {
            if w == s {
                self.out.push(self.stack.clone());
                if self.out.len() > self.cap {
                    return Err(CycleError::CycleBudgetExceeded { cap: self.cap });
                }
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &next {
                if !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }
}

/// All elementary cycles over negative edges, each with its handles, sorted
/// by vertex sequence.
pub fn enumerate_cycles(g: &Edg, cap: usize) -> Result<Vec<CycleInfo>, CycleError> {
    let adj = negative_adjacency(g);
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (v, list) in adj.iter().enumerate() {
        for &w in list {
            radj[w].push(v);
        }
    }
    let mut search = Johnson {
        adj: &adj,
        component: vec![false; n],
        blocked: vec![false; n],
        block_map: vec![Vec::new(); n],
        stack: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for s in 0..n {
        let fwd = reach(&adj, s, s);
        let bwd = reach(&radj, s, s);
        let component: Vec<bool> = (0..n).map(|v| fwd[v] && bwd[v]).collect();
        let trivial = component.iter().filter(|&&c| c).count() == 1 && !adj[s].contains(&s);
        if trivial {
            continue;
        }
        for v in 0..n {
            search.blocked[v] = false;
            search.block_map[v].clear();
        }
        search.component = component;
        search.circuit(s, s)?;
    }
    let mut raw = search.out;
    raw.sort();
    Ok(raw
        .into_iter()
        .map(|vs| {
            let vertices: Vec<VertexId> = vs.into_iter().map(VertexId).collect();
            let mut atoms: Vec<AtomId> = vertices.iter().map(|&v| g.vertex(v).atom).collect();
            atoms.sort_unstable();
            atoms.dedup();
            let parity = if vertices.len().is_multiple_of(2) { Parity::Even } else { Parity::Odd };
            let mut c = CycleInfo { vertices, atoms, parity, handles: Vec::new() };
            c.handles = find_handles(&c, g);
            c
        })
        .collect())
}

/// Edges entering a vertex of `c` other than the cycle's own edges.
///
/// An edge from outside the cycle is an OR handle when it starts at another
/// vertex of a cycle atom (an alternative rule), and an AND handle when its
/// atom is foreign to the cycle. A chord between two cycle vertices is an OR
/// handle when it repeats the atom of the cycle edge it sits beside, and an
/// AND handle otherwise.
pub fn find_handles(c: &CycleInfo, g: &Edg) -> Vec<Handle> {
    let mut handles = Vec::new();
    for &v in &c.vertices {
        let pred = c.predecessor(v).expect("vertex is on the cycle");
        for &ei in g.incoming(v) {
            let e = g.edges()[ei];
            if e.sign == Sign::Neg && e.from == pred {
                continue;
            }
            let source_atom = g.vertex(e.from).atom;
            let kind = if c.contains_vertex(e.from) {
                if source_atom == g.vertex(pred).atom {
                    HandleKind::Or
                } else {
                    HandleKind::And
                }
            } else if c.contains_atom(source_atom) {
                HandleKind::Or
            } else {
                HandleKind::And
            };
            handles.push(Handle { edge: ei, from: e.from, to: e.to, sign: e.sign, kind, source_atom });
        }
    }
    handles.sort_by_key(|h| h.edge);
    handles
}
