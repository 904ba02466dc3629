//! End-to-end acceptance checks, one line of output per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nulla_cert::{verify, write_cert, Certificate};
use nulla_core::assemble::{
    assemble, coloring_schedule, nulla_prove, NullaOutcome, ProveOptions, Pruning, Verdict,
};
use nulla_core::encode::{build_coloring_system, encode_coloring, target_candidates, AltTarget, Cutters, EncodingOptions};
use nulla_core::graphs::{gen_complete, gen_kneser, gen_mycielski, gen_random, gen_wheel, oracle_colorable, Graph};
use nulla_core::linsolve::{solve, SolveStatus};
use nulla_core::symmetry::{assemble_orbit, lift_solution, PermutationSet};
use nulla_poly::{FieldSpec, Monomial, PolySystem, Polynomial, SourceTag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Rows of the degree-one K4 matrix, columns `c0, c12^1..c12^4, c13^1.., ..., c34^4`.
const K4_MATRIX: &str = "
1            1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
x1^3         1 1 0 0 0 1 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
x1^2*x2      0 1 1 0 0 0 1 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0
x1^2*x3      0 0 0 1 0 1 0 1 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 0
x1^2*x4      0 0 0 0 1 0 0 0 1 1 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0
x1*x2^2      0 1 1 0 0 0 0 0 0 0 0 0 0 1 0 0 0 1 0 0 0 0 0 0 0
x1*x2*x3     0 0 0 1 0 0 1 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0
x1*x2*x4     0 0 0 0 1 0 0 0 0 0 1 0 0 0 0 0 0 1 0 0 0 0 0 0 0
x1*x3^2      0 0 0 0 0 1 0 1 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0
x1*x3*x4     0 0 0 0 0 0 0 0 1 0 0 1 0 0 0 0 0 0 0 0 0 1 0 0 0
x1*x4^2      0 0 0 0 0 0 0 0 0 1 0 0 1 0 0 0 0 1 0 0 0 1 0 0 0
x2^3         0 0 1 0 0 0 0 0 0 0 0 0 0 0 1 0 0 0 1 0 0 0 0 0 0
x2^2*x3      0 0 0 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0 0 1 0 0 0 0 0
x2^2*x4      0 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 1 0 1 0 1 0 0 0 0
x2*x3^2      0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 1 0 0 0 0 0 0 1 0 0
x2*x3*x4     0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 0 0 1 0 0 1 0 0
x2*x4^2      0 0 0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 1 0 1 0 0
x3^3         0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0
x3^2*x4      0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 0 0 0 1 1
x3*x4^2      0 0 0 0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 1 1
x4^3         0 0 0 0 0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 1
";

/// Orbit matrix under (2,3,4) before reduction mod 2.
const K4_ORBITS_INTEGER: &str = "
1            1 0 0 0 0 0 0 0 0
x1^3         1 3 0 0 0 0 0 0 0
x1^2*x2      0 1 1 1 1 0 0 0 0
x1*x2^2      0 1 1 0 0 2 0 0 0
x1*x2*x3     0 0 0 1 1 1 0 0 0
x2^3         0 0 1 0 0 0 1 1 0
x2^2*x3      0 0 0 1 0 0 1 1 1
x2^2*x4      0 0 0 0 1 0 1 1 1
x2*x3*x4     0 0 0 0 0 0 0 0 3
";

const K4_ORBITS_MOD2: &str = "
1            1 0 0 0 0 0 0 0 0
x1^3         1 1 0 0 0 0 0 0 0
x1^2*x2      0 1 1 1 1 0 0 0 0
x1*x2^2      0 1 1 0 0 0 0 0 0
x1*x2*x3     0 0 0 1 1 1 0 0 0
x2^3         0 0 1 0 0 0 1 1 0
x2^2*x3      0 0 0 1 0 0 1 1 1
x2^2*x4      0 0 0 0 1 0 1 1 1
x2*x3*x4     0 0 0 0 0 0 0 0 1
";

/// Column orbits in table order, each named by one member `(edge, shift variable)`.
const K4_ORBIT_COLUMNS: [Option<((u32, u32), usize)>; 9] = [
    None,
    Some(((1, 2), 1)),
    Some(((1, 2), 2)),
    Some(((1, 2), 3)),
    Some(((1, 2), 4)),
    Some(((2, 3), 1)),
    Some(((2, 3), 2)),
    Some(((2, 4), 2)),
    Some(((3, 4), 2)),
];

fn table(text: &str, n_vars: usize) -> Vec<(Monomial, Vec<u64>)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.split_whitespace();
            let label = parts.next().unwrap();
            let m = Polynomial::parse(label, n_vars, FieldSpec::gf2()).unwrap();
            let (mono, _) = m.terms().next().unwrap();
            (mono.clone(), parts.map(|v| v.parse().unwrap()).collect())
        })
        .collect()
}

fn gf2() -> FieldSpec {
    FieldSpec::gf2()
}

fn one(n: usize, field: FieldSpec) -> Polynomial {
    Polynomial::one(n, field)
}

fn graded_opts() -> ProveOptions {
    ProveOptions {
        pruning: Pruning::Graded(3),
        ..ProveOptions::default()
    }
}

fn coloring(g: &Graph, cutters: Cutters) -> PolySystem {
    let mut opts = EncodingOptions::three_coloring_gf2();
    opts.cutters = cutters;
    build_coloring_system(g, &opts).unwrap()
}

/// Runs the degree loop and insists that any certificate verifies.
fn prove(sys: &PolySystem, schedule: &[u32], targets: &[Polynomial]) -> Result<NullaOutcome, String> {
    let out = nulla_prove(sys, schedule, targets, &graded_opts()).map_err(|e| e.to_string())?;
    if let Some(cert) = out.certificate() {
        ensure!(verify(cert).map_err(|e| e.to_string())?, "certificate does not verify");
    }
    Ok(out)
}

fn k4_preprocessed() -> PolySystem {
    coloring(&gen_complete(4).unwrap(), Cutters::None)
}

fn col_index(sys: &PolySystem, keys: &[nulla_core::assemble::ColumnKey], edge: (u32, u32), var: usize) -> usize {
    let pi = sys.tags().iter().position(|t| *t == SourceTag::Edge(edge.0, edge.1)).unwrap();
    let shift = Monomial::var(var - 1);
    keys.iter().position(|k| k.poly_index == pi && k.shift == shift).unwrap()
}

fn criterion_1() -> Outcome {
    let sys = k4_preprocessed();
    let asm = assemble(&sys, 1, &one(4, gf2()), Pruning::Graded(3)).map_err(|e| e.to_string())?;
    let (r, c) = (asm.system.n_rows(), asm.system.n_cols());
    ensure!((r, c) == (21, 25), "size {r}x{c}");
    let mut col_order = vec![0usize];
    for edge in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
        for var in 1..=4 {
            col_order.push(col_index(&sys, &asm.col_keys, edge, var));
        }
    }
    ensure!(asm.col_keys[0].shift.is_one() && sys.tags()[0] == SourceTag::Vertex(1), "c0 is not x1^3+1");
    let golden = table(K4_MATRIX, 4);
    let order: Vec<Monomial> = golden.iter().map(|(m, _)| m.clone()).collect();
    ensure!(order == asm.row_keys, "row order differs");
    let mut checked = 0;
    for (ri, (_, expected)) in golden.iter().enumerate() {
        let row = asm.system.row(ri);
        for (pos, &want) in expected.iter().enumerate() {
            let col = col_order[pos] as u32;
            let got = row.iter().find(|e| e.0 == col).map_or(0, |e| e.1) as u64;
            ensure!(got == want, "entry ({}, column {pos}) = {got}, expected {want}", asm.row_keys[ri]);
            checked += 1;
        }
    }
    ensure!(asm.system.rhs()[0] == 1 && asm.system.rhs()[1..].iter().all(|&v| v == 0), "rhs is not e_1");
    Ok(format!("21x25, {checked} entries match"))
}

fn criterion_2() -> Outcome {
    let sys = k4_preprocessed();
    let perms = PermutationSet::parse_cycles(4, "(2,3,4)").unwrap();
    let orb = assemble_orbit(&sys, 1, &one(4, gf2()), &perms, Pruning::Graded(3)).map_err(|e| e.to_string())?;
    let (r, c) = (orb.system.n_rows(), orb.system.n_cols());
    ensure!((r, c) == (9, 9), "orbit size {r}x{c}");
    ensure!(orb.group_order == Some(3) && orb.coprime_verified, "group order {:?}", orb.group_order);

    let members = orb.col_members();
    for (o, name) in K4_ORBIT_COLUMNS.iter().enumerate() {
        let expected = match name {
            None => 0,
            Some((edge, var)) => col_index(&sys, &orb.full.col_keys, *edge, *var),
        };
        ensure!(members[o].contains(&expected), "column orbit {o} does not contain {name:?}");
    }
    let integer = table(K4_ORBITS_INTEGER, 4);
    let reduced = table(K4_ORBITS_MOD2, 4);
    for (o, ((m, ints), (_, bits))) in integer.iter().zip(&reduced).enumerate() {
        ensure!(&orb.row_orbits[o] == m, "row orbit {o} is {} not {m}", orb.row_orbits[o]);
        for (col, (&want_int, &want_bit)) in ints.iter().zip(bits).enumerate() {
            let got_int = orb.integer_rows[o].iter().find(|e| e.0 as usize == col).map_or(0, |e| e.1);
            let got_bit = orb.system.row(o).iter().find(|e| e.0 as usize == col).map_or(0, |e| e.1) as u64;
            ensure!(got_int == want_int, "integer entry ({m}, {col}) = {got_int}, expected {want_int}");
            ensure!(got_bit == want_bit, "mod-2 entry ({m}, {col}) = {got_bit}, expected {want_bit}");
        }
    }
    ensure!(orb.is_well_defined(), "orbit rows depend on the representative");

    let res = solve(&orb.system).map_err(|e| e.to_string())?;
    ensure!(res.status == SolveStatus::Consistent, "orbit system inconsistent");
    let y = lift_solution(&orb, res.solution.as_ref().unwrap());
    ensure!(orb.full.system.satisfies(&y, orb.full.system.rhs()), "lifted vector does not solve M y = b");
    let cert = nulla_core::assemble::build_certificate(&sys, &orb.full, &y, &one(4, gf2()), Default::default())
        .map_err(|e| e.to_string())?;
    ensure!(verify(&cert).map_err(|e| e.to_string())?, "lifted certificate does not verify");

    // The unpreprocessed encoding is invariant as well and adds one orbit
    // {x2^3+1, x3^3+1, x4^3+1} of vertex columns.
    let full_sys = encode_coloring(&gen_complete(4).unwrap(), &EncodingOptions::new(3, gf2()).unwrap()).unwrap();
    let full_orb = assemble_orbit(&full_sys, 1, &one(4, gf2()), &perms, Pruning::Graded(3)).map_err(|e| e.to_string())?;
    let (fr, fc) = (full_orb.system.n_rows(), full_orb.system.n_cols());
    ensure!((fr, fc) == (9, 10), "unpreprocessed orbit size {fr}x{fc}");
    ensure!(
        solve(&full_orb.system).map_err(|e| e.to_string())?.status == SolveStatus::Consistent,
        "unpreprocessed orbit system inconsistent"
    );
    Ok("9x9 orbit matrix matches integer and mod-2 tables; lifted certificate verifies; 9x10 without preprocessing".into())
}

fn example_system(field: FieldSpec) -> PolySystem {
    let polys = ["x1^2+2", "x1+x2", "x1+x3", "x2+x3"]
        .iter()
        .map(|t| Polynomial::parse(t, 3, field).unwrap())
        .collect();
    PolySystem::new(3, field, polys).unwrap()
}

/// Distinct monomials of all `x^δ f_i`, deg δ <= 1, from dense exponent vectors.
fn count_product_monomials(terms: &[&[[u32; 3]]]) -> usize {
    let shifts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut seen = BTreeSet::new();
    for f in terms {
        for s in &shifts {
            for t in f.iter() {
                seen.insert([s[0] + t[0], s[1] + t[1], s[2] + t[2]]);
            }
        }
    }
    seen.len()
}

fn criterion_3() -> Outcome {
    let field = FieldSpec::new(3).unwrap();
    let sys = example_system(field);
    let asm = assemble(&sys, 1, &one(3, field), Pruning::OccurringRows).map_err(|e| e.to_string())?;
    ensure!(asm.system.n_cols() == 16, "{} columns", asm.system.n_cols());
    let expected_rows = count_product_monomials(&[
        &[[2, 0, 0], [0, 0, 0]],
        &[[1, 0, 0], [0, 1, 0]],
        &[[1, 0, 0], [0, 0, 1]],
        &[[0, 1, 0], [0, 0, 1]],
    ]);
    ensure!(expected_rows == 13, "independent count gave {expected_rows}");
    ensure!(asm.system.n_rows() == expected_rows, "{} rows", asm.system.n_rows());
    let out = nulla_prove(&sys, &[1], &[one(3, field)], &ProveOptions::default()).map_err(|e| e.to_string())?;
    ensure!(out.degree() == Some(1), "no degree-1 certificate");
    ensure!(verify(out.certificate().unwrap()).unwrap(), "certificate does not verify");
    Ok("16 columns, 13 rows, degree-1 certificate over GF(3) verifies".into())
}

fn criterion_4() -> Outcome {
    for rim in [5, 7, 9] {
        let g = gen_wheel(rim).unwrap();
        let out = prove(&coloring(&g, Cutters::None), &[1], &[one(g.n_vertices(), gf2())])?;
        ensure!(out.degree() == Some(1), "wheel rim {rim}: no degree-1 certificate");
    }
    for rim in [4, 6] {
        let g = gen_wheel(rim).unwrap();
        let out = prove(&coloring(&g, Cutters::None), &coloring_schedule(3, 4), &[one(g.n_vertices(), gf2())])?;
        ensure!(
            matches!(out.verdict, Verdict::NoCertificateUpTo(4)),
            "wheel rim {rim}: {:?}",
            out.degree()
        );
        ensure!(oracle_colorable(&g, 3), "wheel rim {rim} not 3-colorable");
    }
    Ok("rims 5,7,9 degree 1; rims 4,6 no certificate up to 4 and 3-colorable".into())
}

fn within_10pct(actual: usize, target: usize) -> bool {
    (actual as f64 - target as f64).abs() <= 0.1 * target as f64
}

fn criterion_5() -> Outcome {
    let g = gen_kneser(8, 3).unwrap();
    let out = prove(&coloring(&g, Cutters::None), &[1], &[one(g.n_vertices(), gf2())])?;
    ensure!(out.degree() == Some(1), "no degree-1 certificate");
    let s = &out.stats[0];
    ensure!(within_10pct(s.rows, 15_737) && within_10pct(s.cols, 15_681), "size {}x{}", s.rows, s.cols);
    Ok(format!("degree 1, {}x{}", s.rows, s.cols))
}

fn criterion_6() -> Outcome {
    let g = gen_mycielski(7).unwrap();
    let out = prove(&coloring(&g, Cutters::None), &[1], &[one(g.n_vertices(), gf2())])?;
    ensure!(out.degree() == Some(1), "m7: no degree-1 certificate");
    let s = out.stats[0].clone();
    let g4 = gen_mycielski(4).unwrap();
    ensure!((g4.n_vertices(), g4.n_edges()) == (11, 20), "m4 has wrong size");
    let out4 = prove(&coloring(&g4, Cutters::None), &[1], &[one(11, gf2())])?;
    ensure!(out4.degree() == Some(1), "m4: no degree-1 certificate");
    Ok(format!("m7 degree 1 ({}x{}, {} ms); m4 degree 1", s.rows, s.cols, s.millis))
}

/// The hundred seeded G(16, 0.27) instances.
fn random_instances() -> Vec<(u64, Graph)> {
    (0..100).map(|seed| (seed, gen_random(16, 0.27, seed).unwrap())).collect()
}

fn criterion_7() -> Outcome {
    let (mut infeasible, mut degree_one, mut degree_four, mut violations) = (0, 0, 0, 0);
    for (seed, g) in random_instances() {
        let colorable = oracle_colorable(&g, 3);
        let sys = coloring(&g, Cutters::None);
        let out = prove(&sys, &[1], &[one(16, gf2())]).map_err(|e| format!("seed {seed}: {e}"))?;
        if out.degree().is_some() && colorable {
            violations += 1;
        }
        if colorable {
            continue;
        }
        infeasible += 1;
        if out.degree().is_some() {
            degree_one += 1;
        } else if prove(&sys, &[4], &[one(16, gf2())])?.degree().is_some() {
            degree_four += 1;
        }
    }
    ensure!(violations == 0, "{violations} certificates for 3-colorable graphs");
    ensure!((33..=63).contains(&infeasible), "{infeasible}/100 infeasible");
    ensure!(degree_one * 10 >= infeasible * 7, "only {degree_one}/{infeasible} at degree 1");
    Ok(format!(
        "{infeasible}/100 infeasible, {degree_one} at degree 1, {degree_four} more at degree 4, 0 oracle violations"
    ))
}

fn criterion_8() -> Outcome {
    let targets = target_candidates(&AltTarget::Auto(3), 16, gf2()).unwrap();
    let (mut hard, mut rescued, mut by_monomial) = (0, 0, 0);
    for (seed, g) in random_instances() {
        if oracle_colorable(&g, 3) || prove(&coloring(&g, Cutters::None), &[1], &[one(16, gf2())])?.degree().is_some() {
            continue;
        }
        hard += 1;
        let out = prove(&coloring(&g, Cutters::Triangles), &[1], &targets)?;
        let Some(cert) = out.certificate() else {
            continue;
        };
        rescued += 1;
        let t = cert.target();
        let cubic_monomial = t.n_terms() == 1 && t.degree() == 3 && t.terms().all(|(_, c)| c == 1);
        ensure!(t.degree() == 0 || cubic_monomial, "seed {seed}: target {t}");
        if cubic_monomial {
            by_monomial += 1;
        }
    }
    ensure!(hard > 0, "no instance needs more than degree 1");
    ensure!(rescued >= 1 && by_monomial >= 1, "{rescued}/{hard} rescued, {by_monomial} via a cubic monomial");
    Ok(format!("{rescued}/{hard} rescued at degree 1, {by_monomial} with a cubic monomial target"))
}

fn certificate_bytes(cert: &Certificate) -> String {
    write_cert(cert)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let sys = common::random_system(&mut rng, p, 48);
        let (consistent, _) = common::reference(&sys, sys.rhs());
        let res = solve(&sys).map_err(|e| e.to_string())?;
        ensure!((res.status == SolveStatus::Consistent) == consistent, "system {i}: status mismatch");
        if let Some(y) = &res.solution {
            ensure!(sys.satisfies(y, sys.rhs()), "system {i}: wrong solution");
        }
    }

    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../certificate");
    let manifest: toml::Table = std::fs::read_to_string(format!("{dir}/Cargo.toml"))
        .map_err(|e| e.to_string())?
        .parse()
        .map_err(|e: toml::de::Error| e.to_string())?;
    let deps: Vec<&String> = ["dependencies", "dev-dependencies", "build-dependencies"]
        .iter()
        .filter_map(|k| manifest.get(*k).and_then(|v| v.as_table()))
        .flat_map(|t| t.keys())
        .collect();
    ensure!(deps.iter().all(|d| d.as_str() != "nulla-core"), "certificate crate depends on nulla-core");
    for entry in std::fs::read_dir(format!("{dir}/src")).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure!(!text.contains("nulla_core"), "{} mentions nulla_core", path.display());
    }

    let run = || -> Result<String, String> {
        let g = gen_mycielski(5).unwrap();
        let out = prove(&coloring(&g, Cutters::None), &[1], &[one(g.n_vertices(), gf2())])?;
        Ok(certificate_bytes(out.certificate().ok_or("no certificate")?))
    };
    ensure!(run()? == run()?, "two runs produced different certificates");
    Ok("1000 solver checks match, certificate crate independent, runs byte-identical".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("K4 golden matrix", criterion_1, Duration::from_secs(1)),
        ("K4 orbit matrix", criterion_2, Duration::from_secs(1)),
        ("three-variable example over GF(3)", criterion_3, Duration::from_secs(1)),
        ("odd and even wheels", criterion_4, Duration::from_secs(5)),
        ("Kneser(8,3)", criterion_5, Duration::from_secs(60)),
        ("Mycielski 7 and 4", criterion_6, Duration::from_secs(300)),
        ("random G(16, 0.27)", criterion_7, Duration::from_secs(600)),
        ("cutters and alternative targets", criterion_8, Duration::from_secs(600)),
        ("solver, independence, determinism", criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > *limit {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
