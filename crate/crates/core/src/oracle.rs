//! Reference semantics: reduct, least model, stability check and exhaustive
//! enumeration. Everything else in the crate is checked against this module,
//! so it stays as direct as possible.

use thiserror::Error;

use crate::program::{sort_models, AtomId, Interpretation, Program};

pub const DEFAULT_ATOM_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("program has {atoms} atoms, above the brute-force cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRule {
    pub head: AtomId,
    pub body: Vec<AtomId>,
}

/// A program without negative literals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PositiveProgram {
    pub rules: Vec<PositiveRule>,
}

impl PositiveProgram {
    /// `None` when some rule has a negative literal.
    pub fn from_program(p: &Program) -> Option<Self> {
        if !p.is_positive() {
            return None;
        }
        Some(PositiveProgram {
            rules: p
                .rules()
                .iter()
                .map(|r| PositiveRule { head: r.head, body: r.pos().collect() })
                .collect(),
        })
    }
}

/// Deletes every rule with `not a` for some `a` in `s`, then drops the
/// remaining negative literals.
pub fn gl_reduct(p: &Program, s: &Interpretation) -> PositiveProgram {
    let rules = p
        .rules()
        .iter()
        .filter(|r| !r.neg().any(|a| s.contains(a)))
        .map(|r| PositiveRule { head: r.head, body: r.pos().collect() })
        .collect();
    PositiveProgram { rules }
}

/// Least model by naive iteration of the immediate consequence operator.
pub fn minimal_model(p: &PositiveProgram) -> Interpretation {
    let mut model = Interpretation::new();
    loop {
        let mut changed = false;
        for r in &p.rules {
            if !model.contains(r.head) && r.body.iter().all(|&a| model.contains(a)) {
                model.insert(r.head);
                changed = true;
            }
        }
        if !changed {
            return model;
        }
    }
}

pub fn is_stable(p: &Program, s: &Interpretation) -> bool {
    minimal_model(&gl_reduct(p, s)) == *s
}

/// All stable models in [`sort_models`] order.
///
/// Only subsets of the head atoms are tried: a least model never contains an
/// atom that heads no rule.
pub fn enumerate_stable_brute(p: &Program, atom_cap: usize) -> Result<Vec<Interpretation>, OracleError> {
    let base = p.herbrand_base();
    if base.len() > atom_cap {
        return Err(OracleError::TooManyAtoms { atoms: base.len(), cap: atom_cap });
    }
    let heads = p.heads();
    let mut models = Vec::new();
    for mask in 0u64..(1u64 << heads.len()) {
        let s: Interpretation = heads
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        if is_stable(p, &s) {
            models.push(s);
        }
    }
    sort_models(&mut models, p.atoms());
    Ok(models)
}
