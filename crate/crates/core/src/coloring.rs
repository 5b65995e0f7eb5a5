//! Stable models of kernel programs as admissible green/red colorings of
//! their EDG.
//!
//! A total coloring is admissible when no negative edge joins two green
//! vertices and every red vertex has a green in-neighbor. On a kernel
//! program this makes a vertex green exactly when all of its in-neighbors
//! are red, i.e. when its rule body holds, and an atom is true when any of
//! its rule vertices is green.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{enumerate_cycles, Edg, Sign, VertexId, DEFAULT_CYCLE_CAP};
use crate::program::Interpretation;

pub const DEFAULT_MAX_MODELS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Green,
    Red,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Green => Color::Red,
            Color::Red => Color::Green,
        }
    }
}

/// Partial or total assignment of colors to EDG vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring(Vec<Option<Color>>);

impl Coloring {
    pub fn empty(n: usize) -> Self {
        Coloring(vec![None; n])
    }

    pub fn from_colors(colors: impl IntoIterator<Item = Color>) -> Self {
        Coloring(colors.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Color> {
        self.0.get(i).copied().flatten()
    }

    pub fn color(&self, v: VertexId) -> Option<Color> {
        self.get(v.index())
    }

    pub fn set(&mut self, v: VertexId, c: Option<Color>) {
        self.0[v.index()] = c;
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn with(&self, color: Color) -> impl Iterator<Item = VertexId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == Some(color))
            .map(|(i, _)| VertexId(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    GreenGreenEdge,
    RedAllRedIn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending edge for `GreenGreenEdge`.
    pub edge: Option<usize>,
    /// The red vertex for `RedAllRedIn`, the edge target otherwise.
    pub vertex: VertexId,
}

/// Violations of the two admissibility clauses among decided vertices.
/// For a total coloring the result is empty iff the coloring is admissible.
pub fn violations(g: &Edg, c: &Coloring) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.sign == Sign::Neg && c.color(e.from) == Some(Color::Green) && c.color(e.to) == Some(Color::Green) {
            out.push(Violation { kind: ViolationKind::GreenGreenEdge, edge: Some(i), vertex: e.to });
        }
    }
    for v in g.ids() {
        let all_red = g
            .incoming(v)
            .iter()
            .filter(|&&e| g.edges()[e].sign == Sign::Neg)
            .all(|&e| c.color(g.edges()[e].from) == Some(Color::Red));
        if c.color(v) == Some(Color::Red) && all_red {
            out.push(Violation { kind: ViolationKind::RedAllRedIn, edge: None, vertex: v });
        }
    }
    out
}

pub fn is_admissible(g: &Edg, c: &Coloring) -> bool {
    c.is_total() && c.len() == g.len() && violations(g, c).is_empty()
}

/// Atom true iff at least one of its vertices is green.
pub fn coloring_to_interpretation(g: &Edg, c: &Coloring) -> Interpretation {
    c.with(Color::Green).map(|v| g.vertex(v).atom).collect()
}

/// Rule vertex green iff its body holds in `s`; undefined-atom vertices
/// follow the atom itself.
pub fn interpretation_to_coloring(g: &Edg, s: &Interpretation) -> Coloring {
    Coloring::from_colors(g.ids().map(|v| {
        let vert = g.vertex(v);
        let green = if vert.rule.is_none() {
            s.contains(vert.atom)
        } else {
            g.incoming(v).iter().all(|&e| {
                let e = g.edges()[e];
                s.contains(g.vertex(e.from).atom) == (e.sign == Sign::Pos)
            })
        };
        if green {
            Color::Green
        } else {
            Color::Red
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", content = "vertex", rename_all = "snake_case")]
pub enum Reason {
    /// Given in the initial partial coloring.
    Seed,
    /// Branching choice of the search.
    Decision,
    /// An in-neighbor is green.
    GreenInNeighbor(VertexId),
    /// An out-neighbor is green.
    GreenOutNeighbor(VertexId),
    /// Every in-neighbor is red.
    AllInNeighborsRed,
    /// The given red vertex has no other possible green in-neighbor.
    LastSupportOf(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("vertex {vertex:?} is {existing:?} ({existing_reason:?}) but forced {forced:?} ({forced_reason:?})")]
pub struct Conflict {
    pub vertex: VertexId,
    pub existing: Color,
    pub existing_reason: Reason,
    pub forced: Color,
    pub forced_reason: Reason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub coloring: Coloring,
    /// Assignments in the order they were made.
    pub trace: Vec<(VertexId, Color, Reason)>,
}

struct Propagator<'g> {
    g: &'g Edg,
    colors: Coloring,
    reasons: Vec<Option<Reason>>,
    trail: Vec<VertexId>,
    queue: Vec<VertexId>,
    neg_in: Vec<Vec<VertexId>>,
    neg_out: Vec<Vec<VertexId>>,
}

impl<'g> Propagator<'g> {
    fn new(g: &'g Edg) -> Self {
        let mut neg_in = vec![Vec::new(); g.len()];
        let mut neg_out = vec![Vec::new(); g.len()];
        for e in g.edges().iter().filter(|e| e.sign == Sign::Neg) {
            neg_in[e.to.index()].push(e.from);
            neg_out[e.from.index()].push(e.to);
        }
        Propagator {
            g,
            colors: Coloring::empty(g.len()),
            reasons: vec![None; g.len()],
            trail: Vec::new(),
            queue: Vec::new(),
            neg_in,
            neg_out,
        }
    }

    fn assign(&mut self, v: VertexId, color: Color, reason: Reason) -> Result<(), Conflict> {
        match self.colors.color(v) {
            Some(c) if c == color => Ok(()),
            Some(c) => Err(Conflict {
                vertex: v,
                existing: c,
                existing_reason: self.reasons[v.index()].unwrap_or(Reason::Seed),
                forced: color,
                forced_reason: reason,
            }),
            None => {
                self.colors.set(v, Some(color));
                self.reasons[v.index()] = Some(reason);
                self.trail.push(v);
                self.queue.push(v);
                Ok(())
            }
        }
    }

    fn check_support(&mut self, w: VertexId) -> Result<(), Conflict> {
        let mut open = None;
        let mut open_count = 0;
        for &u in &self.neg_in[w.index()] {
            match self.colors.color(u) {
                Some(Color::Green) => return Ok(()),
                Some(Color::Red) => {}
                None => {
                    if open != Some(u) {
                        open_count += 1;
                    }
                    open = Some(u);
                }
            }
        }
        match (open_count, self.colors.color(w)) {
            (0, _) => self.assign(w, Color::Green, Reason::AllInNeighborsRed),
            (1, Some(Color::Red)) => self.assign(open.unwrap(), Color::Green, Reason::LastSupportOf(w)),
            _ => Ok(()),
        }
    }

    fn run(&mut self) -> Result<(), Conflict> {
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            if self.colors.color(v) == Some(Color::Green) {
                for i in 0..self.neg_out[v.index()].len() {
                    let w = self.neg_out[v.index()][i];
                    self.assign(w, Color::Red, Reason::GreenInNeighbor(v))?;
                }
                for i in 0..self.neg_in[v.index()].len() {
                    let u = self.neg_in[v.index()][i];
                    self.assign(u, Color::Red, Reason::GreenOutNeighbor(v))?;
                }
            } else {
                self.check_support(v)?;
                for i in 0..self.neg_out[v.index()].len() {
                    let w = self.neg_out[v.index()][i];
                    self.check_support(w)?;
                }
            }
        }
        self.queue.clear();
        Ok(())
    }

    fn initial(&mut self) -> Result<(), Conflict> {
        for v in self.g.ids() {
            self.check_support(v)?;
        }
        self.run()
    }

    fn decide(&mut self, v: VertexId, color: Color) -> Result<(), Conflict> {
        self.assign(v, color, Reason::Decision)?;
        self.run()
    }

    fn backtrack(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.colors.set(v, None);
            self.reasons[v.index()] = None;
        }
        self.queue.clear();
    }
}

/// Closes `partial` under the unit consequences of the admissibility
/// clauses: green forces its negative neighbours red, a vertex whose
/// in-neighbors are all red turns green, and a red vertex with a single
/// undecided in-neighbor left (all others red) forces that one green.
pub fn propagate(g: &Edg, partial: &Coloring) -> Result<Propagation, Conflict> {
    let mut p = Propagator::new(g);
    for v in g.ids() {
        if let Some(c) = partial.color(v) {
            p.assign(v, c, Reason::Seed)?;
        }
    }
    p.run()?;
    p.initial()?;
    let trace = p.trail.iter().map(|&v| (v, p.colors.color(v).unwrap(), p.reasons[v.index()].unwrap())).collect();
    Ok(Propagation { coloring: p.colors, trace })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    /// Branch first on vertices that feed handles of odd cycles.
    #[default]
    Handles,
    /// Branch on vertices in index order.
    Lexicographic,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_models: usize,
    pub heuristic: Heuristic,
    pub cycle_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_models: DEFAULT_MAX_MODELS, heuristic: Heuristic::Handles, cycle_cap: DEFAULT_CYCLE_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("EDG is not the graph of a kernel program: {0}")]
    NotKernel(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub decisions: usize,
    pub conflicts: usize,
    /// The handle heuristic could not enumerate cycles within the cap and
    /// fell back to index order.
    pub heuristic_fallback: bool,
}

#[derive(Clone, Debug)]
pub struct ColoringSolution {
    pub models: Vec<(Coloring, Interpretation)>,
    /// More admissible colorings exist beyond `max_models`.
    pub truncated: bool,
    pub stats: SearchStats,
}

fn branch_order(g: &Edg, opts: &SolveOptions, stats: &mut SearchStats) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = g.ids().collect();
    if opts.heuristic == Heuristic::Handles {
        match enumerate_cycles(g, opts.cycle_cap) {
            Ok(cycles) => {
                let mut crucial = vec![false; g.len()];
                for c in cycles.iter().filter(|c| c.is_odd()) {
                    for h in &c.handles {
                        crucial[h.from.index()] = true;
                    }
                }
                order.sort_by_key(|v| (!crucial[v.index()], *v));
            }
            Err(_) => stats.heuristic_fallback = true,
        }
    }
    order
}

fn check_kernel_shape(g: &Edg) -> Result<(), ColoringError> {
    if g.edges().iter().any(|e| e.sign == Sign::Pos) {
        return Err(ColoringError::NotKernel("positive edge present".into()));
    }
    if let Some(v) = g.ids().find(|&v| g.incoming(v).is_empty()) {
        return Err(ColoringError::NotKernel(format!("vertex {} has no incoming edge", g.label(v))));
    }
    Ok(())
}

struct Search<'g> {
    prop: Propagator<'g>,
    order: Vec<VertexId>,
    max: usize,
    models: Vec<(Coloring, Interpretation)>,
    truncated: bool,
    stats: SearchStats,
}

impl Search<'_> {
    fn dfs(&mut self) {
        if self.truncated {
            return;
        }
        let next = self.order.iter().copied().find(|&v| self.prop.colors.color(v).is_none());
        let Some(v) = next else {
            let c = self.prop.colors.clone();
            debug_assert!(is_admissible(self.prop.g, &c));
            if self.models.len() == self.max {
                self.truncated = true;
            } else {
                let i = coloring_to_interpretation(self.prop.g, &c);
                self.models.push((c, i));
            }
            return;
        };
        for color in [Color::Green, Color::Red] {
            let mark = self.prop.trail.len();
            self.stats.decisions += 1;
            match self.prop.decide(v, color) {
                Ok(()) => self.dfs(),
                Err(_) => self.stats.conflicts += 1,
            }
            self.prop.backtrack(mark);
            if self.truncated {
                return;
            }
        }
    }
}

/// Every admissible total coloring of a kernel EDG, green branch first.
pub fn solve_colorings(g: &Edg, opts: SolveOptions) -> Result<ColoringSolution, ColoringError> {
    check_kernel_shape(g)?;
    let mut stats = SearchStats::default();
    let order = branch_order(g, &opts, &mut stats);
    let mut prop = Propagator::new(g);
    if prop.initial().is_err() {
        stats.conflicts += 1;
        return Ok(ColoringSolution { models: Vec::new(), truncated: false, stats });
    }
    let mut search = Search { prop, order, max: opts.max_models, models: Vec::new(), truncated: false, stats };
    search.dfs();
    Ok(ColoringSolution { models: search.models, truncated: search.truncated, stats: search.stats })
}
