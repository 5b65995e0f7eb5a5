//! Ground normal logic programs: interned atoms, rules with positive and
//! negative bodies, and two-valued interpretations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

/// Dense index of an interned atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bijective name <-> id table. Ids are handed out in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    ids: HashMap<String, AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> AtomId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = AtomId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<AtomId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len() as u32).map(AtomId)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Pos(AtomId),
    Neg(AtomId),
}

impl Literal {
    pub fn atom(self) -> AtomId {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Literal::Pos(_))
    }
}

/// A rule `head :- body.` together with its ordinal among the rules that
/// share its head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: AtomId,
    /// Body literals in source order, without repeats.
    pub body: Vec<Literal>,
    pub index: usize,
}

impl Rule {
    pub fn pos(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter_map(|l| match *l {
            Literal::Pos(a) => Some(a),
            Literal::Neg(_) => None,
        })
    }

    pub fn neg(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter_map(|l| match *l {
            Literal::Neg(a) => Some(a),
            Literal::Pos(_) => None,
        })
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Some atom occurs both positively and negatively in the body.
    pub fn is_tautology_candidate(&self) -> bool {
        self.pos().any(|a| self.neg().any(|b| a == b))
    }

    pub fn display<'a>(&'a self, atoms: &'a AtomTable) -> RuleDisplay<'a> {
        RuleDisplay { rule: self, atoms }
    }
}

pub struct RuleDisplay<'a> {
    rule: &'a Rule,
    atoms: &'a AtomTable,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.atoms.name(self.rule.head))?;
        for (i, lit) in self.rule.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            match *lit {
                Literal::Pos(a) => f.write_str(self.atoms.name(a))?,
                Literal::Neg(a) => write!(f, "not {}", self.atoms.name(a))?,
            }
        }
        f.write_str(".")
    }
}

/// An ordered list of ground rules over an atom table.
///
/// The atom table may hold atoms that no rule mentions (for example after a
/// transformation dropped rules); [`Program::herbrand_base`] only reports
/// atoms that occur in some rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    atoms: AtomTable,
    rules: Vec<Rule>,
}

impl Program {
    /// Builds a program from `(head, body)` pairs, assigning per-head
    /// indices in the given order.
    pub fn from_rules(
        atoms: AtomTable,
        rules: impl IntoIterator<Item = (AtomId, Vec<Literal>)>,
    ) -> Self {
        let mut counts: HashMap<AtomId, usize> = HashMap::new();
        let rules = rules
            .into_iter()
            .map(|(head, body)| {
                let slot = counts.entry(head).or_default();
                let index = *slot;
                *slot += 1;
                Rule { head, body: dedup_literals(body), index }
            })
            .collect();
        Program { atoms, rules }
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn name(&self, id: AtomId) -> &str {
        self.atoms.name(id)
    }

    /// Atoms occurring anywhere in the rules, in id order.
    pub fn herbrand_base(&self) -> Vec<AtomId> {
        let mut seen = vec![false; self.atoms.len()];
        for r in &self.rules {
            seen[r.head.index()] = true;
            for l in &r.body {
                seen[l.atom().index()] = true;
            }
        }
        self.atoms.ids().filter(|a| seen[a.index()]).collect()
    }

    /// Atoms that head at least one rule, in id order.
    pub fn heads(&self) -> Vec<AtomId> {
        let set: BTreeSet<AtomId> = self.rules.iter().map(|r| r.head).collect();
        set.into_iter().collect()
    }

    /// Rule positions grouped by head atom, indexed by atom id.
    pub fn rules_by_head(&self) -> Vec<Vec<usize>> {
        let mut by_head = vec![Vec::new(); self.atoms.len()];
        for (i, r) in self.rules.iter().enumerate() {
            by_head[r.head.index()].push(i);
        }
        by_head
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| r.neg().next().is_none())
    }

    /// Both kernel conditions: no positive body literals, and every head
    /// occurs in some body.
    pub fn is_kernel(&self) -> bool {
        if self.rules.iter().any(|r| r.pos().next().is_some()) {
            return false;
        }
        let mut in_body = vec![false; self.atoms.len()];
        for r in &self.rules {
            for a in r.neg() {
                in_body[a.index()] = true;
            }
        }
        self.rules.iter().all(|r| in_body[r.head.index()])
    }

    /// Rebuilds with the same atom table and new rules.
    pub fn with_rules(&self, rules: impl IntoIterator<Item = (AtomId, Vec<Literal>)>) -> Program {
        Program::from_rules(self.atoms.clone(), rules)
    }

    /// Parses a set of atom names into an interpretation over this program.
    /// Unknown names are reported back as the error.
    pub fn interpretation<'n>(
        &self,
        names: impl IntoIterator<Item = &'n str>,
    ) -> Result<Interpretation, String> {
        names
            .into_iter()
            .map(|n| self.atoms.get(n).ok_or_else(|| n.to_owned()))
            .collect()
    }
}

/// Canonical text form: one rule per line.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}", r.display(&self.atoms))?;
        }
        Ok(())
    }
}

fn dedup_literals(body: Vec<Literal>) -> Vec<Literal> {
    let mut seen = BTreeSet::new();
    body.into_iter().filter(|l| seen.insert(*l)).collect()
}

/// Two-valued interpretation: the listed atoms are true, everything else
/// is false.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(BTreeSet<AtomId>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: AtomId) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: AtomId) -> bool {
        self.0.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    /// True atom names in alphabetical order.
    pub fn names<'a>(&self, atoms: &'a AtomTable) -> Vec<&'a str> {
        let mut v: Vec<&str> = self.iter().map(|a| atoms.name(a)).collect();
        v.sort_unstable();
        v
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<T: IntoIterator<Item = AtomId>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl Extend<AtomId> for Interpretation {
    fn extend<T: IntoIterator<Item = AtomId>>(&mut self, iter: T) {
        self.0.extend(iter)
    }
}

/// Presentation order for model lists: by size, then by sorted atom names.
pub fn sort_models(models: &mut [Interpretation], atoms: &AtomTable) {
    models.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.names(atoms).cmp(&b.names(atoms)))
    });
}
