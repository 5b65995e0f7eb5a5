use edgsm::coloring::{violations, Coloring};
use edgsm::oracle::{gl_reduct, minimal_model, DEFAULT_ATOM_CAP};
use edgsm::*;
use edgsm_testkit::{arb_call_consistent, arb_kernel, arb_program, cycle_text, even_cycle};
use proptest::prelude::*;

type Names = Vec<Vec<String>>;

fn named(models: &[Interpretation], p: &Program) -> Names {
    models.iter().map(|m| m.names(p.atoms()).into_iter().map(String::from).collect()).collect()
}

fn oracle(p: &Program) -> Names {
    named(&enumerate_stable_brute(p, DEFAULT_ATOM_CAP).unwrap(), p)
}

fn via_coloring(p: &Program, heuristic: Heuristic) -> Names {
    let (k, log) = to_kernel(p, KernelOptions::default()).unwrap();
    let g = build_edg(&k);
    let sol = solve_colorings(&g, SolveOptions { heuristic, ..Default::default() }).unwrap();
    let mut models: Vec<Interpretation> =
        sol.models.iter().map(|(_, s)| reconstruct_model(s, &log, p.atoms()).unwrap()).collect();
    sort_models(&mut models, p.atoms());
    named(&models, p)
}

fn all_colorings(n: usize) -> impl Iterator<Item = Coloring> {
    (0u32..1 << n).map(move |bits| {
        Coloring::from_colors((0..n).map(|i| if bits >> i & 1 == 1 { Color::Green } else { Color::Red }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(p in arb_program()) {
        let text = p.to_string();
        let q = parse_program(&text).unwrap();
        prop_assert_eq!(q.to_string(), text);
    }

    #[test]
    fn kernel_pipeline_matches_oracle(p in arb_program()) {
        prop_assert_eq!(via_coloring(&p, Heuristic::Handles), oracle(&p));
    }

    #[test]
    fn kernel_is_idempotent(p in arb_program()) {
        let (k, _) = to_kernel(&p, KernelOptions::default()).unwrap();
        prop_assert!(k.is_kernel());
        let (k2, log2) = to_kernel(&k, KernelOptions::default()).unwrap();
        prop_assert_eq!(k2.to_string(), k.to_string());
        prop_assert!(log2.is_empty());
    }

    #[test]
    fn heuristic_does_not_change_models(p in arb_program()) {
        prop_assert_eq!(via_coloring(&p, Heuristic::Handles), via_coloring(&p, Heuristic::Lexicographic));
    }

    #[test]
    fn admissible_colorings_are_stable_models(k in arb_kernel(8)) {
        let g = build_edg(&k);
        let admissible: Vec<Coloring> = all_colorings(g.len()).filter(|c| is_admissible(&g, c)).collect();
        let stable = enumerate_stable_brute(&k, DEFAULT_ATOM_CAP).unwrap();
        prop_assert_eq!(admissible.len(), stable.len());
        let mut images: Vec<Interpretation> = admissible.iter().map(|c| coloring_to_interpretation(&g, c)).collect();
        for (c, s) in admissible.iter().zip(&images) {
            prop_assert_eq!(&interpretation_to_coloring(&g, s), c);
            prop_assert!(is_stable(&k, s));
        }
        images.sort();
        images.dedup();
        prop_assert_eq!(images.len(), admissible.len());
    }

    #[test]
    fn stable_models_color_admissibly(k in arb_kernel(8)) {
        let g = build_edg(&k);
        for s in enumerate_stable_brute(&k, DEFAULT_ATOM_CAP).unwrap() {
            let c = interpretation_to_coloring(&g, &s);
            prop_assert!(violations(&g, &c).is_empty());
        }
    }

    #[test]
    fn propagation_never_contradicts_a_model(k in arb_kernel(8), mask in any::<u32>()) {
        let g = build_edg(&k);
        for s in enumerate_stable_brute(&k, DEFAULT_ATOM_CAP).unwrap() {
            let full = interpretation_to_coloring(&g, &s);
            let mut partial = Coloring::empty(g.len());
            for v in g.ids().filter(|v| mask >> v.index() & 1 == 1) {
                partial.set(v, full.color(v));
            }
            let fix = propagate(&g, &partial).unwrap();
            for v in g.ids() {
                if let Some(c) = fix.coloring.color(v) {
                    prop_assert_eq!(Some(c), full.color(v));
                }
            }
        }
    }

    #[test]
    fn decomposition_matches_oracle(k in arb_kernel(8)) {
        let g = build_edg(&k);
        let models = solve_by_decomposition(&k, &g, DecomposeOptions::default());
        prop_assume!(models.is_ok(), "outside the hypothesis budget");
        prop_assert_eq!(models.unwrap(), enumerate_stable_brute(&k, DEFAULT_ATOM_CAP).unwrap());
    }

    #[test]
    fn every_kernel_rule_is_covered(k in arb_kernel(8)) {
        let g = build_edg(&k);
        let d = decompose(&k, &g, graph::DEFAULT_CYCLE_CAP);
        prop_assume!(d.is_ok(), "too many cycles");
        let d = d.unwrap();
        let mut covered: Vec<usize> = d.cycles.iter().flat_map(|e| e.rules()).chain(d.residue.iter().copied()).collect();
        covered.sort_unstable();
        covered.dedup();
        prop_assert_eq!(covered, (0..k.len()).collect::<Vec<_>>());
    }

    #[test]
    fn reduct_is_antimonotone(p in arb_program(), a in any::<u16>(), b in any::<u16>()) {
        let atoms: Vec<AtomId> = p.atoms().ids().collect();
        let pick = |m: u16| -> Interpretation { atoms.iter().filter(|x| m >> x.index() & 1 == 1).copied().collect() };
        let small = pick(a & b);
        let big = pick(a);
        let from_small = minimal_model(&gl_reduct(&p, &small));
        let from_big = minimal_model(&gl_reduct(&p, &big));
        prop_assert!(from_big.is_subset(&from_small));
    }

    #[test]
    fn call_consistent_programs_have_models(p in arb_call_consistent()) {
        prop_assert!(!oracle(&p).is_empty());
        prop_assert!(!via_coloring(&p, Heuristic::Handles).is_empty());
    }
}

#[test]
fn unconstrained_even_cycles_have_two_alternating_models() {
    for n in 1..=5 {
        let p = even_cycle(n);
        let evens: Vec<String> = (0..2 * n).step_by(2).map(|i| format!("e{i}")).collect();
        let odds: Vec<String> = (1..2 * n).step_by(2).map(|i| format!("e{i}")).collect();
        let mut expected = vec![evens, odds];
        for m in &mut expected {
            m.sort();
        }
        expected.sort();
        let mut got = via_coloring(&p, Heuristic::Handles);
        got.sort();
        assert_eq!(got, expected, "cycle of length {}", 2 * n);
    }
}

#[test]
fn unconstrained_odd_cycles_have_no_models() {
    for len in [1, 3, 5, 7] {
        let p = parse_program(&cycle_text("u", len)).unwrap();
        assert!(oracle(&p).is_empty());
        assert!(via_coloring(&p, Heuristic::Handles).is_empty());
    }
}

#[test]
fn constrained_cycles_have_a_stratifying_hypothesis() {
    let pi1 = parse_program("p :- not p, not e. a :- not b. b :- not a. e :- not f. f :- not h. h :- not e. h :- not a.").unwrap();
    let (k, _) = to_kernel(&pi1, KernelOptions::default()).unwrap();
    let g = build_edg(&k);
    let d = decompose(&k, &g, graph::DEFAULT_CYCLE_CAP).unwrap();
    for ec in d.cycles.iter().filter(|e| !e.cycle.is_unconstrained()) {
        let n = ec.handle_atoms.len();
        let unique = (0..1u32 << n).any(|mask| {
            let hyp: Interpretation =
                ec.handle_atoms.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &a)| a).collect();
            let cc = analysis::complete(&k, ec, &hyp).unwrap();
            enumerate_stable_brute(&cc.program, DEFAULT_ATOM_CAP).unwrap().len() == 1
        });
        assert!(unique);
    }
}
