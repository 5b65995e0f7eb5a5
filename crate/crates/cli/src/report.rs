use std::fmt::Write;

use edgsm::analysis::Decomposition;
use edgsm::graph::{CycleInfo, HandleKind, Parity};
use edgsm::program::Rule;
use edgsm::{Edg, Program};
use serde::Serialize;

pub fn rule_text(p: &Program, r: &Rule) -> String {
    r.display(p.atoms()).to_string()
}

#[derive(Serialize)]
pub struct HandleJson {
    pub from: String,
    pub to: String,
    pub kind: HandleKind,
    pub atom: String,
}

#[derive(Serialize)]
pub struct CycleJson {
    pub id: String,
    pub parity: Parity,
    pub vertices: Vec<String>,
    pub atoms: Vec<String>,
    pub rules: Vec<String>,
    pub constrained: bool,
    pub handles: Vec<HandleJson>,
}

#[derive(Serialize)]
pub struct ExtendedJson {
    pub cycle: String,
    pub auxiliary_rules: Vec<String>,
    pub handle_atoms: Vec<String>,
}

#[derive(Serialize)]
pub struct BridgeJson {
    pub auxiliary_rule: String,
    pub chain: Vec<String>,
    pub into: Vec<String>,
    pub from: Vec<String>,
}

/// Output of `analyze`. Cycles are numbered `C1, C2, ...` in enumeration
/// order and referred to by that id elsewhere.
#[derive(Serialize)]
pub struct AnalyzeJson {
    pub kernel: Vec<String>,
    pub cycles: Vec<CycleJson>,
    pub extended_cycles: Vec<ExtendedJson>,
    pub residue_rules: Vec<String>,
    pub bridges: Vec<BridgeJson>,
}

fn cycle_id(i: usize) -> String {
    format!("C{}", i + 1)
}

fn cycle_json(i: usize, c: &CycleInfo, p: &Program, g: &Edg, rules: &[usize]) -> CycleJson {
    CycleJson {
        id: cycle_id(i),
        parity: c.parity,
        vertices: c.vertices.iter().map(|&v| g.label(v).to_owned()).collect(),
        atoms: c.atoms.iter().map(|&a| p.name(a).to_owned()).collect(),
        rules: rules.iter().map(|&r| rule_text(p, &p.rules()[r])).collect(),
        constrained: !c.is_unconstrained(),
        handles: c
            .handles
            .iter()
            .map(|h| HandleJson {
                from: g.label(h.from).to_owned(),
                to: g.label(h.to).to_owned(),
                kind: h.kind,
                atom: p.name(h.source_atom).to_owned(),
            })
            .collect(),
    }
}

impl AnalyzeJson {
    pub fn new(p: &Program, g: &Edg, d: &Decomposition) -> Self {
        let rule = |r: usize| rule_text(p, &p.rules()[r]);
        let ids = |v: &[usize]| v.iter().map(|&i| cycle_id(i)).collect::<Vec<_>>();
        AnalyzeJson {
            kernel: p.rules().iter().map(|r| rule_text(p, r)).collect(),
            cycles: d.cycles.iter().enumerate().map(|(i, e)| cycle_json(i, &e.cycle, p, g, &e.cycle_rules)).collect(),
            extended_cycles: d
                .cycles
                .iter()
                .enumerate()
                .map(|(i, e)| ExtendedJson {
                    cycle: cycle_id(i),
                    auxiliary_rules: e.auxiliary_rules.iter().map(|&r| rule(r)).collect(),
                    handle_atoms: e.handle_atoms.iter().map(|&a| p.name(a).to_owned()).collect(),
                })
                .collect(),
            residue_rules: d.residue.iter().map(|&r| rule(r)).collect(),
            bridges: d
                .bridges
                .iter()
                .map(|b| BridgeJson {
                    auxiliary_rule: rule(b.auxiliary_rule),
                    chain: b.chain.iter().map(|&r| rule(r)).collect(),
                    into: ids(&b.into),
                    from: ids(&b.from),
                })
                .collect(),
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let parity = |p: Parity| match p {
            Parity::Odd => "odd",
            Parity::Even => "even",
        };
        writeln!(out, "{:<5} {:<6} {:<20} handles", "cycle", "parity", "vertices").unwrap();
        for c in &self.cycles {
            let handles: Vec<String> = c
                .handles
                .iter()
                .map(|h| format!("{} {}->{}", if h.kind == HandleKind::And { "AND" } else { "OR" }, h.from, h.to))
                .collect();
            let handles = if handles.is_empty() { "none".to_owned() } else { handles.join(", ") };
            writeln!(out, "{:<5} {:<6} {:<20} {}", c.id, parity(c.parity), c.vertices.join(" "), handles).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:<5} {:<30} handle atoms", "cycle", "auxiliary rules").unwrap();
        for e in &self.extended_cycles {
            let aux = if e.auxiliary_rules.is_empty() { "-".to_owned() } else { e.auxiliary_rules.join(" ") };
            let atoms = if e.handle_atoms.is_empty() { "-".to_owned() } else { e.handle_atoms.join(" ") };
            writeln!(out, "{:<5} {:<30} {}", e.cycle, aux, atoms).unwrap();
        }
        if !self.residue_rules.is_empty() {
            writeln!(out).unwrap();
            writeln!(out, "rules on no cycle: {}", self.residue_rules.join(" ")).unwrap();
        }
        for b in &self.bridges {
            writeln!(
                out,
                "bridge {} <- {} from {} into {}",
                b.auxiliary_rule,
                b.chain.join(" "),
                if b.from.is_empty() { "-".to_owned() } else { b.from.join(" ") },
                b.into.join(" ")
            )
            .unwrap();
        }
        out
    }
}
