use std::fmt::Write;

use super::{Dg, Edg, Sign};
use crate::coloring::{Color, Coloring};

/// Anything that can be drawn as a signed digraph.
pub trait DotGraph {
    fn node_labels(&self) -> Vec<String>;
    fn signed_edges(&self) -> Vec<(usize, usize, Sign)>;
}

impl DotGraph for Edg {
    fn node_labels(&self) -> Vec<String> {
        self.ids().map(|v| self.label(v).to_owned()).collect()
    }

    fn signed_edges(&self) -> Vec<(usize, usize, Sign)> {
        self.edges().iter().map(|e| (e.from.index(), e.to.index(), e.sign)).collect()
    }
}

impl DotGraph for Dg {
    fn node_labels(&self) -> Vec<String> {
        self.atoms().iter().map(|&a| self.name(a).to_owned()).collect()
    }

    fn signed_edges(&self) -> Vec<(usize, usize, Sign)> {
        self.edges()
            .iter()
            .map(|&(c, a, s)| (self.position(c).unwrap(), self.position(a).unwrap(), s))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct DotOptions<'a> {
    pub name: &'a str,
    /// Fills vertices green/red; only meaningful for an [`Edg`].
    pub coloring: Option<&'a Coloring>,
}

impl Default for DotOptions<'_> {
    fn default() -> Self {
        DotOptions { name: "edg", coloring: None }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Negative edges are dashed and labelled `-`, positive ones solid with `+`.
pub fn to_dot(g: &(impl DotGraph + ?Sized), opts: &DotOptions<'_>) -> String {
    let labels = g.node_labels();
    let edges = g.signed_edges();
    let mut out = format!("digraph {} {{\n", opts.name);
    if labels.is_empty() {
        out.push_str("}\n");
        return out;
    }
    for (i, l) in labels.iter().enumerate() {
        let fill = opts.coloring.and_then(|c| c.get(i)).map(|c| match c {
            Color::Green => "green",
            Color::Red => "red",
        });
        match fill {
            Some(f) => writeln!(out, "  n{i} [label={}, style=filled, fillcolor={f}];", quote(l)).unwrap(),
            None => writeln!(out, "  n{i} [label={}];", quote(l)).unwrap(),
        }
    }
    for (from, to, sign) in edges {
        let style = match sign {
            Sign::Neg => "dashed",
            Sign::Pos => "solid",
        };
        writeln!(out, "  n{from} -> n{to} [label=\"{}\", style={style}];", sign.symbol()).unwrap();
    }
    out.push_str("}\n");
    out
}
