use serde::Serialize;

use super::Sign;
use crate::program::{AtomId, Literal, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// One vertex per rule, `a^(k)` for the k-th rule with head `a`, and one
/// per atom that heads no rule (`rule == None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub atom: AtomId,
    pub rule: Option<usize>,
    /// Position of the rule in the program, for rule vertices.
    pub rule_pos: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub sign: Sign,
}

/// Extended dependency graph.
#[derive(Clone, Debug)]
pub struct Edg {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    labels: Vec<String>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    by_atom: Vec<Vec<VertexId>>,
}

impl Edg {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    /// `a`, `a'`, `a''`, ... following the rule index.
    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    /// Indices into [`Edg::edges`] of the edges entering `v`.
    pub fn incoming(&self, v: VertexId) -> &[usize] {
        &self.incoming[v.0]
    }

    pub fn outgoing(&self, v: VertexId) -> &[usize] {
        &self.outgoing[v.0]
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incoming[v.0].iter().map(|&e| self.edges[e].from)
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.outgoing[v.0].iter().map(|&e| self.edges[e].to)
    }

    /// Every vertex standing for `atom`.
    pub fn atom_vertices(&self, atom: AtomId) -> &[VertexId] {
        self.by_atom.get(atom.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count_sign(&self, sign: Sign) -> usize {
        self.edges.iter().filter(|e| e.sign == sign).count()
    }
}

/// Vertices follow rule order, then undefined atoms alphabetically. Edges are
/// grouped by target vertex, then body literal order, then source vertex.
pub fn build_edg(p: &Program) -> Edg {
    let atoms = p.atoms();
    let mut vertices: Vec<Vertex> = p
        .rules()
        .iter()
        .enumerate()
        .map(|(i, r)| Vertex { atom: r.head, rule: Some(r.index), rule_pos: Some(i) })
        .collect();
    let heads = p.heads();
    let mut undefined: Vec<AtomId> = p.herbrand_base().into_iter().filter(|a| heads.binary_search(a).is_err()).collect();
    undefined.sort_by(|&a, &b| atoms.name(a).cmp(atoms.name(b)));
    vertices.extend(undefined.into_iter().map(|atom| Vertex { atom, rule: None, rule_pos: None }));

    let mut by_atom = vec![Vec::new(); atoms.len()];
    for (i, v) in vertices.iter().enumerate() {
        by_atom[v.atom.index()].push(VertexId(i));
    }

    let mut edges = Vec::new();
    for (i, r) in p.rules().iter().enumerate() {
        for lit in &r.body {
            let sign = match lit {
                Literal::Pos(_) => Sign::Pos,
                Literal::Neg(_) => Sign::Neg,
            };
            for &from in &by_atom[lit.atom().index()] {
                edges.push(Edge { from, to: VertexId(i), sign });
            }
        }
    }

    let mut incoming = vec![Vec::new(); vertices.len()];
    let mut outgoing = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        incoming[e.to.0].push(i);
        outgoing[e.from.0].push(i);
    }

    let labels = vertices
        .iter()
        .map(|v| format!("{}{}", atoms.name(v.atom), "'".repeat(v.rule.unwrap_or(0))))
        .collect();

    Edg { vertices, edges, labels, incoming, outgoing, by_atom }
}
