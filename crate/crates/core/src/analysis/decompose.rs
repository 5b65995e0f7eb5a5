//! Extended cycles, completed cycles and the solver that stitches their
//! local stable models into global ones.
//!
//! Every kernel rule whose head lies on some cycle belongs to that cycle's
//! extended cycle, either as a cycle rule or as an auxiliary rule. The
//! remaining rules define atoms on no cycle at all; they form acyclic chains
//! (bridges) between cycles and are evaluated directly once the cycle atoms
//! are fixed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{enumerate_cycles, CycleError, CycleInfo, Edg};
use crate::kernel::KernelProgram;
use crate::oracle::{enumerate_stable_brute, is_stable, OracleError, DEFAULT_ATOM_CAP};
use crate::program::{sort_models, AtomId, Interpretation, Literal, Program};

pub const DEFAULT_HYPOTHESIS_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Cycles(#[from] CycleError),
    #[error("hypothesis {atom} is not a handle atom of the cycle")]
    HypothesisOutOfRange { atom: String },
    #[error("hypothesis space of {space} exceeds the budget of {budget}")]
    DecompositionBudgetExceeded { space: u128, budget: u64 },
    #[error("completed cycle too large for local enumeration: {0}")]
    Local(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCycle {
    pub cycle: CycleInfo,
    /// Positions of the rules behind the cycle vertices, in cycle order.
    pub cycle_rules: Vec<usize>,
    /// Other rules with a head on the cycle, by position.
    pub auxiliary_rules: Vec<usize>,
    /// Atoms off the cycle that occur in the bodies of cycle or auxiliary
    /// rules, in id order.
    pub handle_atoms: Vec<AtomId>,
}

impl ExtendedCycle {
    pub fn rules(&self) -> impl Iterator<Item = usize> + '_ {
        let mut all: Vec<usize> = self.cycle_rules.iter().chain(&self.auxiliary_rules).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.into_iter()
    }
}

/// An auxiliary rule whose body reaches other cycles through a chain of
/// rules that lie on no cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub auxiliary_rule: usize,
    /// Rules on no cycle traversed backwards from the auxiliary rule.
    pub chain: Vec<usize>,
    /// Cycles containing the head of the auxiliary rule.
    pub into: Vec<usize>,
    /// Cycles whose atoms feed the chain.
    pub from: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub cycles: Vec<ExtendedCycle>,
    /// Rules in no extended cycle, by position.
    pub residue: Vec<usize>,
    pub bridges: Vec<Bridge>,
}

pub fn decompose(k: &KernelProgram, g: &Edg, cycle_cap: usize) -> Result<Decomposition, DecomposeError> {
    let p = k.program();
    let cycles = enumerate_cycles(g, cycle_cap)?;
    let by_head = p.rules_by_head();

    let mut on_cycle = vec![Vec::new(); p.atoms().len()];
    for (i, c) in cycles.iter().enumerate() {
        for &a in &c.atoms {
            on_cycle[a.index()].push(i);
        }
    }

    let extended: Vec<ExtendedCycle> = cycles
        .into_iter()
        .map(|cycle| {
            let cycle_rules: Vec<usize> = cycle.vertices.iter().map(|&v| g.vertex(v).rule_pos.unwrap()).collect();
            let auxiliary_rules: Vec<usize> = cycle
                .atoms
                .iter()
                .flat_map(|a| by_head[a.index()].iter().copied())
                .filter(|r| !cycle_rules.contains(r))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let handle_atoms: BTreeSet<AtomId> = cycle_rules
                .iter()
                .chain(&auxiliary_rules)
                .flat_map(|&r| p.rules()[r].body.iter().map(|l| l.atom()))
                .filter(|&a| !cycle.contains_atom(a))
                .collect();
            ExtendedCycle { cycle, cycle_rules, auxiliary_rules, handle_atoms: handle_atoms.into_iter().collect() }
        })
        .collect();

    let residue: Vec<usize> =
        (0..p.len()).filter(|&r| on_cycle[p.rules()[r].head.index()].is_empty()).collect();

    let mut bridges = Vec::new();
    let aux: BTreeSet<usize> = extended.iter().flat_map(|e| e.auxiliary_rules.iter().copied()).collect();
    for r in aux {
        let mut chain = BTreeSet::new();
        let mut from = BTreeSet::new();
        let mut stack: Vec<AtomId> = p.rules()[r].body.iter().map(|l| l.atom()).collect();
        let mut seen = BTreeSet::new();
        let mut crosses = false;
        while let Some(a) = stack.pop() {
            if !seen.insert(a) {
                continue;
            }
            if !on_cycle[a.index()].is_empty() {
                from.extend(on_cycle[a.index()].iter().copied());
                continue;
            }
            crosses = true;
            for &q in &by_head[a.index()] {
                chain.insert(q);
                stack.extend(p.rules()[q].body.iter().map(|l| l.atom()));
            }
        }
        if crosses {
            bridges.push(Bridge {
                auxiliary_rule: r,
                chain: chain.into_iter().collect(),
                into: on_cycle[p.rules()[r].head.index()].clone(),
                from: from.into_iter().collect(),
            });
        }
    }

    Ok(Decomposition { cycles: extended, residue, bridges })
}

/// An extended cycle with a hypothesis on its handle atoms, as a standalone
/// program over the same atom table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletedCycle {
    pub hypothesis: Interpretation,
    pub program: Program,
}

pub fn complete(k: &KernelProgram, ec: &ExtendedCycle, hypothesis: &Interpretation) -> Result<CompletedCycle, DecomposeError> {
    let p = k.program();
    if let Some(a) = hypothesis.iter().find(|a| ec.handle_atoms.binary_search(a).is_err()) {
        return Err(DecomposeError::HypothesisOutOfRange { atom: p.name(a).to_owned() });
    }
    let rules = ec
        .rules()
        .map(|r| (p.rules()[r].head, p.rules()[r].body.clone()))
        .chain(hypothesis.iter().map(|a| (a, Vec::<Literal>::new())));
    Ok(CompletedCycle { hypothesis: hypothesis.clone(), program: p.with_rules(rules) })
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub cycle_cap: usize,
    pub hypothesis_budget: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { cycle_cap: crate::graph::DEFAULT_CYCLE_CAP, hypothesis_budget: DEFAULT_HYPOTHESIS_BUDGET }
    }
}

#[derive(Default)]
struct Frame {
    mask: usize,
    models: Option<Vec<Interpretation>>,
    next: usize,
    touched: Vec<AtomId>,
}

struct Stitch<'a> {
    k: &'a KernelProgram,
    d: &'a Decomposition,
    /// Local models of completed cycles, indexed by cycle and by hypothesis
    /// bitmask over `handle_atoms`, filled on first use.
    local: Vec<Vec<Option<Vec<Interpretation>>>>,
    residue_order: Vec<AtomId>,
    value: Vec<Option<bool>>,
    found: BTreeSet<Interpretation>,
}

impl Stitch<'_> {
    fn local_models(&mut self, i: usize, mask: usize) -> Result<&[Interpretation], DecomposeError> {
        if self.local[i][mask].is_none() {
            let ec = &self.d.cycles[i];
            let hyp: Interpretation =
                ec.handle_atoms.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &a)| a).collect();
            let cc = complete(self.k, ec, &hyp)?;
            self.local[i][mask] = Some(enumerate_stable_brute(&cc.program, DEFAULT_ATOM_CAP)?);
        }
        Ok(self.local[i][mask].as_deref().unwrap())
    }

    /// Moves `f` to the next (hypothesis, local model) pair of cycle `i`
    /// that agrees with the current partial assignment, and applies it.
    fn advance(&mut self, i: usize, f: &mut Frame) -> Result<bool, DecomposeError> {
        let d = self.d;
        let ec = &d.cycles[i];
        let masks = 1usize << ec.handle_atoms.len();
        loop {
            if f.models.is_none() {
                if f.mask >= masks {
                    return Ok(false);
                }
                let mask = f.mask;
                let fits = ec
                    .handle_atoms
                    .iter()
                    .enumerate()
                    .all(|(b, a)| self.value[a.index()].is_none_or(|v| v == (mask >> b & 1 == 1)));
                if !fits {
                    f.mask += 1;
                    continue;
                }
                f.models = Some(self.local_models(i, mask)?.to_vec());
                f.next = 0;
            }
            let models = f.models.as_ref().unwrap();
            while f.next < models.len() {
                let model = &models[f.next];
                f.next += 1;
                let agrees = ec.cycle.atoms.iter().all(|a| self.value[a.index()].is_none_or(|v| v == model.contains(*a)));
                if !agrees {
                    continue;
                }
                let fixed = ec
                    .handle_atoms
                    .iter()
                    .enumerate()
                    .map(|(b, &a)| (a, f.mask >> b & 1 == 1))
                    .chain(ec.cycle.atoms.iter().map(|&a| (a, model.contains(a))));
                for (a, v) in fixed {
                    if self.value[a.index()].is_none() {
                        self.value[a.index()] = Some(v);
                        f.touched.push(a);
                    }
                }
                return Ok(true);
            }
            f.models = None;
            f.mask += 1;
        }
    }

    fn undo(&mut self, f: &mut Frame) {
        for a in f.touched.drain(..) {
            self.value[a.index()] = None;
        }
    }

    /// Depth-first over cycles with an explicit stack; kernels can have
    /// thousands of cycles.
    fn search(&mut self) -> Result<(), DecomposeError> {
        let n = self.d.cycles.len();
        let mut frames = vec![Frame::default()];
        while let Some(mut f) = frames.pop() {
            let i = frames.len();
            if i == n {
                self.leaf();
                continue;
            }
            self.undo(&mut f);
            if self.advance(i, &mut f)? {
                frames.push(f);
                frames.push(Frame::default());
            }
        }
        Ok(())
    }

    fn leaf(&mut self) {
        let p = self.k.program();
        let mut value = self.value.clone();
        let by_head = p.rules_by_head();
        for &a in &self.residue_order {
            let holds = by_head[a.index()]
                .iter()
                .any(|&r| p.rules()[r].neg().all(|b| value[b.index()] == Some(false)));
            if value[a.index()].is_some_and(|v| v != holds) {
                return;
            }
            value[a.index()] = Some(holds);
        }
        let s: Interpretation = p.atoms().ids().filter(|a| value[a.index()] == Some(true)).collect();
        if is_stable(p, &s) {
            self.found.insert(s);
        }
    }
}

/// Atoms on no cycle, ordered so that every atom comes after the atoms its
/// rules depend on. These dependencies are acyclic: a dependency cycle among
/// them would show up as an EDG cycle.
fn residue_order(p: &Program, d: &Decomposition) -> Vec<AtomId> {
    let atoms: BTreeSet<AtomId> = d.residue.iter().map(|&r| p.rules()[r].head).collect();
    let mut done = BTreeSet::new();
    let mut order = Vec::new();
    while order.len() < atoms.len() {
        for &a in &atoms {
            if done.contains(&a) {
                continue;
            }
            let ready = d
                .residue
                .iter()
                .filter(|&&r| p.rules()[r].head == a)
                .flat_map(|&r| p.rules()[r].body.iter().map(|l| l.atom()))
                .all(|b| !atoms.contains(&b) || done.contains(&b));
            if ready {
                done.insert(a);
                order.push(a);
            }
        }
    }
    order
}

/// Stable models of a kernel program, assembled from locally stable models
/// of completed cycles that agree on shared atoms and on their hypotheses.
/// Every candidate passes a final reduct check.
pub fn solve_by_decomposition(k: &KernelProgram, g: &Edg, opts: DecomposeOptions) -> Result<Vec<Interpretation>, DecomposeError> {
    let d = decompose(k, g, opts.cycle_cap)?;
    let bits: u32 = d.cycles.iter().map(|e| e.handle_atoms.len() as u32).sum();
    let space = 1u128.checked_shl(bits).unwrap_or(u128::MAX);
    if space > opts.hypothesis_budget as u128 {
        return Err(DecomposeError::DecompositionBudgetExceeded { space, budget: opts.hypothesis_budget });
    }
    let local = d.cycles.iter().map(|ec| vec![None; 1 << ec.handle_atoms.len()]).collect();
    let p = k.program();
    let mut st = Stitch {
        k,
        d: &d,
        local,
        residue_order: residue_order(p, &d),
        value: vec![None; p.atoms().len()],
        found: BTreeSet::new(),
    };
    st.search()?;
    let mut models: Vec<Interpretation> = st.found.into_iter().collect();
    sort_models(&mut models, p.atoms());
    Ok(models)
}
