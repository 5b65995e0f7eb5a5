use edgsm::*;

#[test]
fn library_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_program("a :- not b. b :- not a.")?;
    let (k, log) = to_kernel(&p, KernelOptions::default())?;
    let g = build_edg(&k);
    let sol = solve_colorings(&g, SolveOptions::default())?;
    let mut names = Vec::new();
    for (_, s) in &sol.models {
        let m = reconstruct_model(s, &log, p.atoms())?;
        names.push(m.names(p.atoms()));
    }
    names.sort();
    assert_eq!(names, vec![vec!["a"], vec!["b"]]);
    Ok(())
}
