//! Reduction of a ground normal program to an equivalent kernel program
//! (negative bodies only, every head used in some body), plus the log needed
//! to lift kernel stable models back to models of the input.
//!
//! The construction runs in three phases:
//!
//! 1. fact/falsity propagation, to a fixpoint;
//! 2. unfolding of positive body literals into every non-repeating
//!    derivation of them, after which propagation runs again;
//! 3. stripping of heads that no body mentions, layer by layer.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::program::{AtomId, AtomTable, Interpretation, Literal, Program, Rule};

pub const DEFAULT_UNFOLD_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("positive unfolding generated more than {cap} rules")]
    UnfoldBudgetExceeded { cap: usize },
    #[error("transform log is inconsistent: atom {atom:?} has no truth value while replaying {head:?}")]
    InconsistentLog { atom: String, head: String },
}

#[derive(Clone, Copy, Debug)]
pub struct KernelOptions {
    pub unfold_cap: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { unfold_cap: DEFAULT_UNFOLD_CAP }
    }
}

/// A program satisfying the kernel conditions. Only [`to_kernel`] builds one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelProgram(Program);

impl KernelProgram {
    /// Accepts `p` when it already has the shape [`to_kernel`] produces:
    /// kernel conditions hold and every body atom heads some rule.
    pub fn new(p: Program) -> Option<Self> {
        let mut defined = vec![false; p.atoms().len()];
        for r in p.rules() {
            defined[r.head.index()] = true;
        }
        let closed = p.rules().iter().all(|r| r.body.iter().all(|l| defined[l.atom().index()]));
        (p.is_kernel() && closed).then_some(KernelProgram(p))
    }

    pub fn program(&self) -> &Program {
        &self.0
    }

    pub fn into_program(self) -> Program {
        self.0
    }
}

impl std::ops::Deref for KernelProgram {
    type Target = Program;

    fn deref(&self) -> &Program {
        &self.0
    }
}

/// An atom removed because no body mentions it, with the rules it had when
/// it was removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrippedAtom {
    pub atom: AtomId,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UnfoldTrace {
    pub generated: usize,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformLog {
    pub established_facts: Vec<AtomId>,
    pub forced_false: Vec<AtomId>,
    /// In removal order.
    pub stripped_tail: Vec<StrippedAtom>,
    pub unfold: UnfoldTrace,
    /// Atoms that head some kernel rule.
    pub kernel_atoms: Vec<AtomId>,
}

impl TransformLog {
    /// No simplification touched the program.
    pub fn is_empty(&self) -> bool {
        self.established_facts.is_empty() && self.forced_false.is_empty() && self.stripped_tail.is_empty()
    }

    pub fn to_json(&self, atoms: &AtomTable) -> LogJson {
        let names = |v: &[AtomId]| {
            let mut n: Vec<String> = v.iter().map(|&a| atoms.name(a).to_owned()).collect();
            n.sort();
            n
        };
        LogJson {
            facts: names(&self.established_facts),
            forced_false: names(&self.forced_false),
            tail: self
                .stripped_tail
                .iter()
                .map(|s| TailJson {
                    atom: atoms.name(s.atom).to_owned(),
                    rules: s.rules.iter().map(|r| r.display(atoms).to_string()).collect(),
                })
                .collect(),
            unfolded_rules: self.unfold.generated,
            unfold_cap: self.unfold.cap,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LogJson {
    pub facts: Vec<String>,
    #[serde(rename = "false")]
    pub forced_false: Vec<String>,
    pub tail: Vec<TailJson>,
    pub unfolded_rules: usize,
    pub unfold_cap: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailJson {
    pub atom: String,
    pub rules: Vec<String>,
}

type WorkRule = (AtomId, Vec<Literal>);

#[derive(Default)]
struct Propagation {
    facts: BTreeSet<AtomId>,
    falses: BTreeSet<AtomId>,
}

impl Propagation {
    /// Runs simplification to a fixpoint over `rules`, restricted to atoms of
    /// `universe`.
    fn run(&mut self, mut rules: Vec<WorkRule>, universe: &[AtomId]) -> Vec<WorkRule> {
        loop {
            let mut changed = false;
            let mut next = Vec::with_capacity(rules.len());
            for (head, body) in rules {
                if self.facts.contains(&head) {
                    changed = true;
                    continue;
                }
                let mut kept = Vec::with_capacity(body.len());
                let mut alive = true;
                for lit in body {
                    match lit {
                        Literal::Pos(a) if self.facts.contains(&a) => changed = true,
                        Literal::Neg(a) if self.falses.contains(&a) => changed = true,
                        Literal::Pos(a) if self.falses.contains(&a) || a == head => alive = false,
                        Literal::Neg(a) if self.facts.contains(&a) => alive = false,
                        _ => kept.push(lit),
                    }
                }
                let contradictory = kept
                    .iter()
                    .any(|l| l.is_positive() && kept.contains(&Literal::Neg(l.atom())));
                if !alive || contradictory {
                    changed = true;
                } else if kept.is_empty() {
                    self.facts.insert(head);
                    changed = true;
                } else {
                    next.push((head, kept));
                }
            }
            rules = next;

            let headed: BTreeSet<AtomId> = rules.iter().map(|r| r.0).collect();
            for &a in universe {
                if !self.facts.contains(&a) && !headed.contains(&a) && self.falses.insert(a) {
                    changed = true;
                }
            }
            if !changed {
                return rules;
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Support {
    /// Negative leaves, in first-seen order.
    neg: Vec<AtomId>,
    /// Atoms used positively below the root.
    used: BTreeSet<AtomId>,
}

impl Support {
    fn merge(&self, other: &Support) -> Support {
        let mut neg = self.neg.clone();
        for &a in &other.neg {
            if !neg.contains(&a) {
                neg.push(a);
            }
        }
        Support { neg, used: self.used.union(&other.used).copied().collect() }
    }

    fn is_contradictory(&self) -> bool {
        self.neg.iter().any(|a| self.used.contains(a))
    }

    fn subsumes(&self, other: &Support) -> bool {
        self.neg.iter().all(|a| other.neg.contains(a)) && self.used.is_subset(&other.used)
    }
}

fn drop_subsumed(supports: Vec<Support>) -> Vec<Support> {
    let mut out: Vec<Support> = Vec::with_capacity(supports.len());
    for s in supports {
        if out.iter().any(|o| o.subsumes(&s)) {
            continue;
        }
        out.retain(|o| !s.subsumes(o));
        out.push(s);
    }
    out
}

struct Unfolder<'a> {
    rules: &'a [WorkRule],
    by_head: HashMap<AtomId, Vec<usize>>,
    generated: usize,
    cap: usize,
}

impl<'a> Unfolder<'a> {
    fn new(rules: &'a [WorkRule], cap: usize) -> Self {
        let mut by_head: HashMap<AtomId, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_head.entry(r.0).or_default().push(i);
        }
        Unfolder { rules, by_head, generated: 0, cap }
    }

    fn count(&mut self, n: usize) -> Result<(), KernelError> {
        self.generated += n;
        if self.generated > self.cap {
            return Err(KernelError::UnfoldBudgetExceeded { cap: self.cap });
        }
        Ok(())
    }

    /// Combines a rule body with the supports of its positive atoms.
    /// `ancestors` holds every atom on the path from the root, including the
    /// rule's head.
    fn expand_body(&mut self, body: &[Literal], ancestors: &mut Vec<AtomId>) -> Result<Vec<Support>, KernelError> {
        let mut acc = vec![Support {
            neg: body.iter().filter(|l| !l.is_positive()).map(|l| l.atom()).collect(),
            used: BTreeSet::new(),
        }];
        for lit in body.iter().filter(|l| l.is_positive()) {
            let subs = self.supports(lit.atom(), ancestors)?;
            let mut next = Vec::new();
            for a in &acc {
                for s in &subs {
                    let m = a.merge(s);
                    if !m.is_contradictory() {
                        next.push(m);
                    }
                }
            }
            self.count(next.len())?;
            acc = drop_subsumed(next);
            if acc.is_empty() {
                break;
            }
        }
        Ok(acc)
    }

    /// Every derivation of `atom` whose paths never repeat an atom, reduced to
    /// its negative leaves.
    fn supports(&mut self, atom: AtomId, ancestors: &mut Vec<AtomId>) -> Result<Vec<Support>, KernelError> {
        let rules = self.by_head.get(&atom).cloned().unwrap_or_default();
        ancestors.push(atom);
        let mut out = Vec::new();
        for ri in rules {
            let body = &self.rules[ri].1;
            if body.iter().any(|l| l.is_positive() && ancestors.contains(&l.atom())) {
                continue;
            }
            let mut expanded = self.expand_body(body, ancestors)?;
            for s in &mut expanded {
                s.used.insert(atom);
            }
            out.extend(expanded.into_iter().filter(|s| !s.is_contradictory()));
        }
        ancestors.pop();
        Ok(drop_subsumed(out))
    }
}

fn unfold(rules: Vec<WorkRule>, cap: usize, generated: &mut usize) -> Result<Vec<WorkRule>, KernelError> {
    let mut unfolder = Unfolder::new(&rules, cap.saturating_sub(*generated));
    let mut out = Vec::new();
    for (head, body) in &rules {
        if body.iter().all(|l| !l.is_positive()) {
            out.push((*head, body.clone()));
            continue;
        }
        let mut ancestors = vec![*head];
        for s in unfolder.expand_body(body, &mut ancestors)? {
            out.push((*head, s.neg.into_iter().map(Literal::Neg).collect()));
        }
    }
    *generated += unfolder.generated;
    Ok(out)
}

/// Strips heads that occur in no body until none remain.
fn strip_tail(mut rules: Vec<WorkRule>, atoms: &AtomTable) -> (Vec<WorkRule>, Vec<StrippedAtom>) {
    let mut tail = Vec::new();
    loop {
        let in_body: BTreeSet<AtomId> = rules.iter().flat_map(|r| r.1.iter().map(|l| l.atom())).collect();
        let mut layer: Vec<AtomId> = Vec::new();
        for r in &rules {
            if !in_body.contains(&r.0) && !layer.contains(&r.0) {
                layer.push(r.0);
            }
        }
        if layer.is_empty() {
            return (rules, tail);
        }
        for atom in layer {
            let (mine, rest): (Vec<WorkRule>, Vec<WorkRule>) = rules.into_iter().partition(|r| r.0 == atom);
            rules = rest;
            let stripped = Program::from_rules(atoms.clone(), mine);
            tail.push(StrippedAtom { atom, rules: stripped.rules().to_vec() });
        }
    }
}

/// Computes a kernel program equivalent to `p` with respect to stable
/// models, together with the log that [`reconstruct_model`] replays.
pub fn to_kernel(p: &Program, opts: KernelOptions) -> Result<(KernelProgram, TransformLog), KernelError> {
    let universe = p.herbrand_base();
    let mut prop = Propagation::default();
    let mut rules: Vec<WorkRule> = p.rules().iter().map(|r| (r.head, r.body.clone())).collect();
    let mut generated = 0;
    loop {
        rules = prop.run(rules, &universe);
        if rules.iter().all(|r| r.1.iter().all(|l| !l.is_positive())) {
            break;
        }
        rules = unfold(rules, opts.unfold_cap, &mut generated)?;
    }
    let (rules, stripped_tail) = strip_tail(rules, p.atoms());
    let kernel = p.with_rules(rules);
    let log = TransformLog {
        established_facts: prop.facts.into_iter().collect(),
        forced_false: prop.falses.into_iter().collect(),
        stripped_tail,
        unfold: UnfoldTrace { generated, cap: opts.unfold_cap },
        kernel_atoms: kernel.heads(),
    };
    Ok((KernelProgram(kernel), log))
}

/// Lifts a stable model of the kernel to the corresponding stable model of
/// the program the log was produced from.
pub fn reconstruct_model(s: &Interpretation, log: &TransformLog, atoms: &AtomTable) -> Result<Interpretation, KernelError> {
    let mut known: HashMap<AtomId, bool> = HashMap::new();
    for &a in &log.kernel_atoms {
        known.insert(a, s.contains(a));
    }
    for &a in &log.established_facts {
        known.insert(a, true);
    }
    for &a in &log.forced_false {
        known.insert(a, false);
    }
    for stripped in log.stripped_tail.iter().rev() {
        let mut value = false;
        for r in &stripped.rules {
            let mut sat = true;
            for lit in &r.body {
                let v = *known.get(&lit.atom()).ok_or_else(|| KernelError::InconsistentLog {
                    atom: atoms.name(lit.atom()).to_owned(),
                    head: atoms.name(stripped.atom).to_owned(),
                })?;
                if v != lit.is_positive() {
                    sat = false;
                }
            }
            value |= sat;
        }
        known.insert(stripped.atom, value);
    }
    Ok(known.into_iter().filter(|&(_, v)| v).map(|(a, _)| a).collect())
}
