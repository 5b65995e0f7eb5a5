use std::collections::BTreeSet;

use super::Sign;
use crate::program::{AtomId, Literal, Program};

/// Signed atom-level dependency graph: an edge `(c, a, s)` for every rule
/// with head `a` that has `c` in its body with sign `s`.
#[derive(Clone, Debug)]
pub struct Dg {
    atoms: Vec<AtomId>,
    names: Vec<String>,
    edges: Vec<(AtomId, AtomId, Sign)>,
}

impl Dg {
    /// Vertices in atom id order.
    pub fn atoms(&self) -> &[AtomId] {
        &self.atoms
    }

    pub fn edges(&self) -> &[(AtomId, AtomId, Sign)] {
        &self.edges
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a.index()]
    }

    pub fn position(&self, a: AtomId) -> Option<usize> {
        self.atoms.binary_search(&a).ok()
    }

    /// Name-level view for comparing graphs of programs with different
    /// atom tables.
    pub fn signature(&self) -> (BTreeSet<String>, BTreeSet<(String, String, Sign)>) {
        let atoms = self.atoms.iter().map(|&a| self.name(a).to_owned()).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(c, a, s)| (self.name(c).to_owned(), self.name(a).to_owned(), s))
            .collect();
        (atoms, edges)
    }
}

pub fn build_dg(p: &Program) -> Dg {
    let mut edges = BTreeSet::new();
    for r in p.rules() {
        for lit in &r.body {
            let sign = match lit {
                Literal::Pos(_) => Sign::Pos,
                Literal::Neg(_) => Sign::Neg,
            };
            edges.insert((lit.atom(), r.head, sign));
        }
    }
    Dg {
        atoms: p.herbrand_base(),
        names: p.atoms().ids().map(|a| p.name(a).to_owned()).collect(),
        edges: edges.into_iter().collect(),
    }
}
