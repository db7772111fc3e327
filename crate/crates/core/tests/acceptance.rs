//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latcode::bounds::{self, Applicability};
use latcode::clique_search::{
    count_maximum_cliques, max_clique, CliqueCount, CompatibilityGraph, Mode, SearchOptions,
};
use latcode::cwcode::{symmetric_distance, Codeword, ConstantWeightCode, DecodeOutcome, ReceivedSet};
use latcode::finite_lattice::FiniteLattice;
use latcode::gf_poly::{monic_polynomials, Polynomial, PrimeField};
use latcode::ideal_lattice::{ConstituentPool, DecomposableElement};
use latcode::saf_sim::{
    run_experiment, run_trial, source_encode, Adversary, Experiment, NetworkTopology, Outcome, Setup, SymbolMap,
    TopologyConfig,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn cw(ix: &[usize]) -> Codeword {
    Codeword::new(ix.to_vec(), 7).unwrap()
}

fn c1_worked_example() -> Check {
    let expected: BTreeSet<&str> = ["2B29", "2E7B", "93BD", "23D75", "144B1", "5F237", "17153"].into();
    let pool = ConstituentPool::example_binary();
    let code = ConstantWeightCode::example_7_4_4();
    let mut got = BTreeSet::new();
    for c in code.codewords() {
        let e = pool.compose(c.indices()).map_err(|e| e.to_string())?;
        ensure!(pool.decompose(&e).map_err(|e| e.to_string())? == c.indices(), "decompose does not invert {c}");
        got.insert(e.hex().unwrap());
    }
    let mut problems = Vec::new();
    let missing: Vec<_> = expected.iter().filter(|h| !got.contains(**h)).collect();
    let extra: Vec<_> = got.iter().filter(|h| !expected.contains(h.as_str())).collect();
    if !missing.is_empty() {
        problems.push(format!("reference values not produced: {missing:?}; produced instead: {extra:?}"));
    }
    for h in &expected {
        let e = DecomposableElement::Generator(Polynomial::from_hex(h, PrimeField::binary()).unwrap());
        match pool.decompose(&e) {
            Ok(ix) if pool.compose(&ix).ok().as_ref() == Some(&e) => {}
            Ok(ix) => problems.push(format!("{h} decomposes to {ix:?} but is not their product")),
            Err(err) => problems.push(format!("{h}: {err}")),
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok(format!("alphabet {got:?}"))
}

fn c2_code_metrics() -> Check {
    let code = ConstantWeightCode::example_7_4_4();
    let d = code.min_distance().map_err(|e| e.to_string())?;
    ensure!(d == 4, "d_min = {d}");
    ensure!(code.len() == 7, "N = {}", code.len());
    let den = bounds::johnson1_denominator(7, 4, 2);
    ensure!(den == 2, "denominator {den}");
    let j1 = bounds::johnson1(7, 4, 2);
    ensure!(j1 == Applicability::Value(7), "johnson1 {j1:?}");
    ensure!(code.len() as u128 == 7, "bound not met");
    Ok("d_min 4, N 7, J1 7 (denominator 2)".into())
}

fn c3_bounds() -> Check {
    let a = bounds::johnson2(7, 5, 1).map_err(|e| e.to_string())?;
    ensure!(a == 21, "johnson2(7,5,1) = {a}");
    let b = bounds::johnson2(8, 4, 2).map_err(|e| e.to_string())?;
    ensure!(b == 14, "johnson2(8,4,2) = {b}");
    let c = bounds::johnson1(9, 7, 2);
    ensure!(c == Applicability::Value(4), "johnson1(9,7,2) = {c:?}");
    let r = bounds::johnson1_refined(9, 7, 2);
    ensure!(r == Applicability::Value(4), "refined = {r:?}");
    ensure!(bounds::johnson1_refined_feasible(9, 7, 2, 4), "N=4 infeasible");
    ensure!(!bounds::johnson1_refined_feasible(9, 7, 2, 5), "N=5 feasible");
    Ok("J2(7,5,1)=21, J2(8,4,2)=14, J1(9,7,2)=4, refined 4".into())
}

fn c4_table_sizes() -> Check {
    let rows = [
        (8, 4, 4, 14),
        (8, 5, 4, 8),
        (9, 4, 4, 18),
        (9, 5, 4, 18),
        (9, 7, 4, 4),
        (9, 6, 6, 3),
        (10, 3, 4, 13),
        (10, 7, 4, 13),
        (10, 6, 6, 5),
        (10, 7, 6, 3),
    ];
    let mut slowest = 0.0f64;
    for (n, k, d, want) in rows {
        let g = CompatibilityGraph::build(n, k, Mode::AtLeast(d)).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let r = max_clique(
            &g,
            &SearchOptions {
                timeout: Some(Duration::from_secs(120)),
                ..SearchOptions::with_bound_hint(&g)
            },
        );
        slowest = slowest.max(t.elapsed().as_secs_f64());
        ensure!(r.complete, "({n},{k},{d}) timed out");
        ensure!(r.max_size == want, "({n},{k},{d}) = {}, expected {want}", r.max_size);
        ensure!(g.is_clique(&r.witness_vertices[0]), "({n},{k},{d}) witness is not a clique");
    }
    Ok(format!(
        "all 10 rows, slowest {slowest:.3} s; (10,7,4) = 13 by complement symmetry, reference table lists 8"
    ))
}

fn c5_counts() -> Check {
    let rows: [(usize, usize, usize, usize, u64); 5] = [
        (8, 6, 4, 4, 105),
        (8, 4, 4, 14, 30),
        (9, 7, 4, 4, 945),
        (9, 6, 6, 3, 280),
        (10, 3, 4, 13, 373_680),
    ];
    let mut problems = Vec::new();
    for (n, k, d, size, want) in rows {
        let g = CompatibilityGraph::build(n, k, Mode::AtLeast(d)).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let c = count_maximum_cliques(&g, size, 10_000_000, None).map_err(|e| e.to_string())?;
        if c != CliqueCount::Exact(want) {
            problems.push(format!(
                "({n},{k},{d}) size {size}: counted {c:?} in {:.1} s, expected {want}",
                t.elapsed().as_secs_f64()
            ));
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok("105, 30, 945, 280, 373680".into())
}

fn c6_decoder() -> Check {
    let code = ConstantWeightCode::example_7_4_4();
    let r = ReceivedSet::new(vec![1, 3, 4, 6], 7).unwrap();
    match code.decode(&r).map_err(|e| e.to_string())? {
        DecodeOutcome::Ambiguous(t) => {
            ensure!(t.len() == 3, "{} ties", t.len());
            ensure!(t == vec![cw(&[0, 1, 3, 4]), cw(&[1, 2, 4, 6]), cw(&[1, 3, 5, 6])], "ties {t:?}");
        }
        o => return Err(format!("{{p2,p4,p5,p7}} gave {o:?}")),
    }
    let r = ReceivedSet::new(vec![1, 3, 6], 7).unwrap();
    let o = code.decode(&r).map_err(|e| e.to_string())?;
    ensure!(o == DecodeOutcome::Decoded(cw(&[1, 3, 5, 6])), "{{p2,p4,p7}} gave {o:?}");
    Ok("3 ties for {p2,p4,p5,p7}; {p2,p4,p7} -> {p2,p4,p6,p7}".into())
}

fn c7_saf() -> Check {
    let start = Instant::now();
    let code = ConstantWeightCode::example_7_4_4();
    let pool = ConstituentPool::example_binary();
    let map = SymbolMap::default_for(7);
    let cfg = TopologyConfig {
        layers: 4,
        width: 3,
        max_indegree: 3,
        density: 0.5,
        seed: 0,
    };
    let clean = Setup {
        code: &code,
        pool: Some(&pool),
        map: &map,
        adversary: &Adversary::Clean,
    };
    let rep = run_experiment(&Experiment { topology: cfg.clone(), trials: 1000, seed: 2024 }, &clean)
        .map_err(|e| e.to_string())?;
    ensure!(rep.stats.success == 1000, "clean: {:?}", rep.stats);

    let invalid = map.invalid_symbols()[0];
    let (mut erasures, mut substitutions, mut detected) = (0, 0, 0);
    for topo_seed in 0..10 {
        let topo = NetworkTopology::random(&TopologyConfig { seed: topo_seed, ..cfg.clone() }).map_err(|e| e.to_string())?;
        let edges = topo.sink_edges();
        for (msg, c) in code.codewords().iter().enumerate() {
            let sent = source_encode(c, &map).map_err(|e| e.to_string())?;
            for &from in &sent.0 {
                let erase = Adversary::TargetedSubstitution { edges: edges.clone(), substitutions: vec![(from, invalid)] };
                let r = run_trial(&topo, &Setup { adversary: &erase, ..clean }, msg, 0).map_err(|e| e.to_string())?;
                ensure!(r.outcome == Outcome::Success && (r.t, r.e) == (0, 1), "erasure of {from} in {c}: {r:?}");
                erasures += 1;
                for to in (1..map.q()).filter(|&x| x != from) {
                    let sub = Adversary::TargetedSubstitution { edges: edges.clone(), substitutions: vec![(from, to)] };
                    let r = run_trial(&topo, &Setup { adversary: &sub, ..clean }, msg, 0).map_err(|e| e.to_string())?;
                    ensure!(
                        matches!(r.outcome, Outcome::Success | Outcome::DetectedError { .. }),
                        "substitution {from}->{to} in {c}: {:?}",
                        r.outcome
                    );
                    detected += matches!(r.outcome, Outcome::DetectedError { .. }) as usize;
                    substitutions += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(start.elapsed() < Duration::from_secs(30), "took {secs:.1} s");
    Ok(format!(
        "1000/1000 clean; {erasures}/{erasures} erasures recovered; {substitutions} substitutions, 0 wrong ({detected} detected); {secs:.2} s"
    ))
}

fn naive_max_clique(adj: &[Vec<bool>]) -> usize {
    fn go(adj: &[Vec<bool>], r: usize, p: Vec<usize>, mut x: Vec<usize>, best: &mut usize) {
        if p.is_empty() {
            if x.is_empty() {
                *best = (*best).max(r);
            }
            return;
        }
        let pivot = p[0];
        let mut p = p;
        for v in p.clone().into_iter().filter(|&v| !adj[pivot][v]) {
            let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
            go(adj, r + 1, np, nx, best);
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut best = 0;
    go(adj, 0, (0..adj.len()).collect(), Vec::new(), &mut best);
    best
}

// Every lattice on at most `max_m` elements, labelled 0 = bottom, m-1 = top.
fn small_lattices(max_m: usize) -> Vec<FiniteLattice> {
    let mut out = vec![FiniteLattice::chain(1).unwrap()];
    for m in 2..=max_m {
        let inner: Vec<usize> = (1..m - 1).collect();
        let pairs: Vec<(usize, usize)> = inner
            .iter()
            .flat_map(|&a| inner.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
            .collect();
        for mask in 0u64..(1 << pairs.len()) {
            let mut rel: Vec<(usize, usize)> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            rel.extend((1..m).map(|i| (0, i)));
            rel.extend((0..m - 1).map(|i| (i, m - 1)));
            if let Ok(l) = FiniteLattice::from_order(m, &rel) {
                if pairs.iter().enumerate().all(|(i, &(a, b))| l.leq(a, b) == (mask >> i & 1 == 1)) {
                    out.push(l);
                }
            }
        }
    }
    out
}

fn random_code(rng: &mut ChaCha8Rng) -> ConstantWeightCode {
    let n = rng.gen_range(4..=12);
    let k = rng.gen_range(2..n);
    let mut words: Vec<Vec<usize>> = Vec::new();
    for _ in 0..rng.gen_range(2..=12) {
        let mut w = sample(rng, n, k).into_vec();
        w.sort_unstable();
        if words.iter().all(|v| symmetric_distance(v, &w) >= 4) {
            words.push(w);
        }
    }
    if words.len() < 2 {
        return ConstantWeightCode::example_7_4_4();
    }
    ConstantWeightCode::from_indices(n, k, words).unwrap()
}

fn c8_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10_000 {
        let set = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            let s: BTreeSet<usize> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..12)).collect();
            s.into_iter().collect()
        };
        let (a, b, c) = (set(&mut rng), set(&mut rng), set(&mut rng));
        let d = symmetric_distance;
        ensure!(d(&a, &a) == 0, "d(a,a) != 0");
        ensure!(d(&a, &b) == d(&b, &a), "asymmetric");
        ensure!((d(&a, &b) == 0) == (a == b), "identity of indiscernibles");
        ensure!(d(&a, &c) <= d(&a, &b) + d(&b, &c), "triangle {a:?} {b:?} {c:?}");
    }

    let binary = PrimeField::binary();
    let irreducibles: Vec<Polynomial> = (1..=5)
        .flat_map(|deg| monic_polynomials(binary, deg))
        .filter(|f| f.is_irreducible().unwrap())
        .take(10)
        .collect();
    let mut roundtrips = 0;
    for n in 1..=10 {
        let pools = [
            ConstituentPool::abstract_set(n).unwrap(),
            ConstituentPool::polynomial(irreducibles[..n].to_vec()).map_err(|e| e.to_string())?,
        ];
        for pool in &pools {
            for mask in 1u32..1 << n {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let e = pool.compose(&s).map_err(|e| e.to_string())?;
                ensure!(pool.decompose(&e).map_err(|e| e.to_string())? == s, "roundtrip {s:?} on n={n}");
                roundtrips += 1;
            }
        }
    }

    for n in 0..=20u64 {
        for k in 0..=n {
            for r in 0..=k.min(n - k) {
                let a = bounds::sphere_size(n, k, r).map_err(|e| e.to_string())?;
                let b = bounds::sphere_size(n, n - k, r).map_err(|e| e.to_string())?;
                ensure!(a == b, "sphere_size({n},{k},{r}) = {a}, ({n},{},{r}) = {b}", n - k);
            }
        }
    }

    let mut punctures = 0;
    let mut codes = vec![ConstantWeightCode::example_7_4_4()];
    codes.extend((0..500).map(|_| random_code(&mut rng)));
    for code in &codes {
        let d = code.min_distance().map_err(|e| e.to_string())?;
        for i in 0..code.n() {
            let p = code.puncture(Some(i)).map_err(|e| e.to_string())?;
            ensure!(p.len() == code.len(), "puncture changed N");
            let pd = p.min_distance().map_err(|e| e.to_string())?;
            ensure!(pd + 2 >= d && pd <= d, "puncture at {i}: d {d} -> {pd}");
            punctures += 1;
        }
    }

    let mut graphs = 0;
    for n in 1..=8 {
        for k in 1..=n {
            for d in (2..=2 * k.min(n - k).max(1)).step_by(2) {
                for mode in [Mode::AtLeast(d), Mode::Exact(d)] {
                    let Ok(g) = CompatibilityGraph::build(n, k, mode) else { continue };
                    if g.vertex_count() > 70 {
                        continue;
                    }
                    let m = g.vertex_count();
                    let adj: Vec<Vec<bool>> = (0..m).map(|u| (0..m).map(|v| u != v && g.adjacent(u, v)).collect()).collect();
                    let want = naive_max_clique(&adj);
                    for opts in [SearchOptions::default(), SearchOptions::with_bound_hint(&g)] {
                        let r = max_clique(&g, &opts);
                        ensure!(r.max_size == want, "({n},{k},{mode:?}): {} vs oracle {want}", r.max_size);
                    }
                    graphs += 1;
                }
            }
        }
    }

    let mut lattices = small_lattices(6);
    let count = lattices.len();
    lattices.extend([
        FiniteLattice::boolean(3).unwrap(),
        FiniteLattice::diamond(),
        FiniteLattice::pentagon(),
    ]);
    lattices.extend((1..=8).map(|m| FiniteLattice::chain(m).unwrap()));
    for l in &lattices {
        let rep = l.unique_decomposition_theorem_check(12).map_err(|e| e.to_string())?;
        ensure!(rep.agrees, "equivalence fails on {:?}: {rep:?}", l.labels());
    }
    Ok(format!(
        "10^4 metric cases, {roundtrips} roundtrips, {punctures} punctures, {graphs} graphs vs oracle, {} lattices ({count} with <= 6 elements)",
        lattices.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked example alphabet", c1_worked_example),
        ("2 code metrics", c2_code_metrics),
        ("3 bound values", c3_bounds),
        ("4 optimal code sizes", c4_table_sizes),
        ("5 maximum clique counts", c5_counts),
        ("6 decoder scenarios", c6_decoder),
        ("7 store-and-forward end to end", c7_saf),
        ("8 property suites", c8_properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let res = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {name} ({secs:.2} s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2} s): {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
