//! Random ground programs for property tests and the acceptance suite.
//!
//! Every generator is a plain function of an RNG so the same seed always
//! produces the same program; the `arb_*` strategies wrap them for proptest.

use std::fmt::Write;

use edgsm::{parse_program, KernelProgram, Program};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOM_NAMES: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(head, [(atom, positive)])` over atom indices.
pub type RawRule = (usize, Vec<(usize, bool)>);

pub fn render(names: &[String], rules: &[RawRule]) -> String {
    let mut out = String::new();
    for (head, body) in rules {
        out.push_str(&names[*head]);
        if !body.is_empty() {
            out.push_str(" :- ");
            let lits: Vec<String> = body
                .iter()
                .map(|&(a, pos)| if pos { names[a].clone() } else { format!("not {}", names[a]) })
                .collect();
            out.push_str(&lits.join(", "));
        }
        out.push_str(".\n");
    }
    out
}

fn letters(n: usize) -> Vec<String> {
    ATOM_NAMES[..n].iter().map(|s| s.to_string()).collect()
}

fn parse(text: &str) -> Program {
    parse_program(text).expect("generated text parses")
}

/// Up to `max_atoms` atoms and `max_rules` rules, bodies of up to three
/// literals with either sign. Facts and undefined atoms both occur.
pub fn random_program_text(rng: &mut impl Rng, max_atoms: usize, max_rules: usize) -> String {
    let n = rng.gen_range(1..=max_atoms.min(ATOM_NAMES.len()));
    let r = rng.gen_range(0..=max_rules);
    let rules: Vec<RawRule> = (0..r)
        .map(|_| {
            let len = rng.gen_range(0..=3);
            let body = (0..len).map(|_| (rng.gen_range(0..n), rng.gen_bool(0.3))).collect();
            (rng.gen_range(0..n), body)
        })
        .collect();
    render(&letters(n), &rules)
}

pub fn random_program(rng: &mut impl Rng, max_atoms: usize, max_rules: usize) -> Program {
    parse(&random_program_text(rng, max_atoms, max_rules))
}

/// A kernel program whose EDG has at most `max_vertices` vertices: negative
/// bodies only, every head used in a body and every body atom defined.
pub fn random_kernel(rng: &mut impl Rng, max_vertices: usize) -> KernelProgram {
    loop {
        let n = rng.gen_range(1..=max_vertices.clamp(1, 5));
        let r = rng.gen_range(n..=max_vertices.max(n));
        let mut rules: Vec<RawRule> = (0..r)
            .map(|i| {
                let head = if i < n { i } else { rng.gen_range(0..n) };
                let len = rng.gen_range(1..=3.min(n));
                let mut atoms: Vec<usize> = (0..n).collect();
                atoms.shuffle(rng);
                (head, atoms[..len].iter().map(|&a| (a, false)).collect())
            })
            .collect();
        rules.shuffle(rng);
        if let Some(k) = KernelProgram::new(parse(&render(&letters(n), &rules))) {
            return k;
        }
    }
}

/// Call-consistent by construction: atoms get a parity label, and a body
/// literal is negative exactly when its atom's label differs from the head's.
/// Every dependency cycle then has an even number of negative edges.
pub fn random_call_consistent(rng: &mut impl Rng, max_atoms: usize, max_rules: usize) -> Program {
    let n = rng.gen_range(1..=max_atoms.min(ATOM_NAMES.len()));
    let label: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let r = rng.gen_range(1..=max_rules);
    let rules: Vec<RawRule> = (0..r)
        .map(|_| {
            let head = rng.gen_range(0..n);
            let len = rng.gen_range(0..=3);
            let body = (0..len)
                .map(|_| {
                    let a = rng.gen_range(0..n);
                    (a, label[a] == label[head])
                })
                .collect();
            (head, body)
        })
        .collect();
    parse(&render(&letters(n), &rules))
}

/// `u0 :- not u{len-1}. u1 :- not u0. ...` on fresh atoms.
pub fn cycle_text(prefix: &str, len: usize) -> String {
    let mut out = String::new();
    for i in 0..len {
        writeln!(out, "{prefix}{i} :- not {prefix}{}.", (i + len - 1) % len).unwrap();
    }
    out
}

/// A random program with an odd cycle on fresh atoms appended. Nothing
/// else mentions those atoms, so the cycle has no handles.
pub fn with_unconstrained_odd_cycle(rng: &mut impl Rng, max_atoms: usize, max_rules: usize) -> Program {
    let base = random_program_text(rng, max_atoms, max_rules);
    let len = 2 * rng.gen_range(0..3) + 1;
    parse(&format!("{base}{}", cycle_text("u", len)))
}

/// `e0 .. e{2n-1}` in a single negative cycle.
pub fn even_cycle(n: usize) -> Program {
    parse(&cycle_text("e", 2 * n))
}

pub fn arb_program() -> impl Strategy<Value = Program> {
    (1usize..=10).prop_flat_map(|n| {
        let lit = (0..n, prop::bool::weighted(0.3));
        let rule = (0..n, prop::collection::vec(lit, 0..=3));
        prop::collection::vec(rule, 0..=20).prop_map(move |rules| parse(&render(&letters(n), &rules)))
    })
}

pub fn arb_kernel(max_vertices: usize) -> impl Strategy<Value = KernelProgram> {
    any::<u64>().prop_map(move |seed| random_kernel(&mut rng(seed), max_vertices))
}

pub fn arb_call_consistent() -> impl Strategy<Value = Program> {
    any::<u64>().prop_map(|seed| random_call_consistent(&mut rng(seed), 8, 12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use edgsm::{build_edg, is_call_consistent};

    #[test]
    fn seeds_are_reproducible() {
        let a = random_program_text(&mut rng(7), 10, 20);
        let b = random_program_text(&mut rng(7), 10, 20);
        assert_eq!(a, b);
    }

    #[test]
    fn kernels_stay_small() {
        for seed in 0..200 {
            let k = random_kernel(&mut rng(seed), 8);
            assert!(build_edg(&k).len() <= 8);
            assert!(k.is_kernel());
        }
    }

    #[test]
    fn call_consistent_by_construction() {
        for seed in 0..200 {
            assert!(is_call_consistent(&random_call_consistent(&mut rng(seed), 8, 12)).holds);
        }
    }

    #[test]
    fn cycle_shapes() {
        assert_eq!(cycle_text("u", 3), "u0 :- not u2.\nu1 :- not u0.\nu2 :- not u1.\n");
        assert_eq!(even_cycle(2).len(), 4);
    }
}
