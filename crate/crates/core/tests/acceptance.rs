//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use latgap::points::Points;
use latgap::{
    enumerate_monotone_maps, gap_bruteforce, salomaa_function, verify_boolean, verify_gap_theorem,
    verify_pseudo_boolean, Lattice, Node, PolyFn, SweepSummary, Term, DEFAULT_BUDGET,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TABLE_LIMIT: usize = 1 << 20;

type Outcome = Result<String, String>;

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    if elapsed <= Duration::from_secs(limit_secs) {
        Ok(())
    } else {
        Err(format!("took {:.2?}, limit {limit_secs} s", elapsed))
    }
}

fn clean(s: &SweepSummary, what: &str) -> Result<(), String> {
    if s.disagreements == 0 {
        Ok(())
    } else {
        Err(format!(
            "{what}: {} disagreement(s), first {:?}",
            s.disagreements, s.first_failure
        ))
    }
}

fn fixture_lattices() -> Vec<(&'static str, Arc<Lattice>)> {
    let c2 = Lattice::chain(2).unwrap();
    let c3 = Lattice::chain(3).unwrap();
    vec![
        ("2-chain", Arc::new(c2.clone())),
        ("3-chain", Arc::new(c3.clone())),
        ("4-chain", Arc::new(Lattice::chain(4).unwrap())),
        ("2x2", Arc::new(Lattice::product(&c2, &c2).unwrap())),
        ("2x3", Arc::new(Lattice::product(&c2, &c3).unwrap())),
    ]
}

/// Criterion 1: Boolean classifier vs oracle, n in {2,3,4}.
fn boolean_sweep(sweeps: &mut Vec<SweepSummary>) -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=4 {
        let start = Instant::now();
        let s = verify_boolean(n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if s.scanned != 1 << (1 << n) {
            return Err(format!("n={n}: scanned {} functions", s.scanned));
        }
        clean(&s, &format!("n={n}"))?;
        if n == 4 {
            within(elapsed, 60)?;
        }
        notes.push(format!("n={n}: {} checked in {:.2?}", s.checked, elapsed));
        sweeps.push(s);
    }
    Ok(notes.join("; "))
}

/// Criterion 2: pseudo-Boolean classifier vs oracle, |B| = 3, n in {2,3}.
fn pseudo_boolean_sweep(sweeps: &mut Vec<SweepSummary>) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, expected) in [(2, 81), (3, 6561)] {
        let s = verify_pseudo_boolean(n, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if s.scanned != expected {
            return Err(format!("n={n}: scanned {} tables, expected {expected}", s.scanned));
        }
        clean(&s, &format!("n={n}"))?;
        notes.push(format!("n={n}: {} essentially {n}-ary", s.checked));
        sweeps.push(s);
    }
    within(start.elapsed(), 10)?;
    notes.push(format!("{:.2?}", start.elapsed()));
    Ok(notes.join("; "))
}

/// Criteria 3 and 4 share the lattice sweeps.
fn lattice_sweeps() -> Result<Vec<(String, SweepSummary, Duration)>, String> {
    let mut out = Vec::new();
    for (name, l) in fixture_lattices() {
        let start = Instant::now();
        let mut total = SweepSummary::default();
        let mut runs = Vec::new();
        for n in [2, 3] {
            let s = verify_gap_theorem(l.clone(), n, TABLE_LIMIT).map_err(|e| e.to_string())?;
            runs.push(s);
        }
        for s in runs {
            total.scanned += s.scanned;
            total.checked += s.checked;
            total.disagreements += s.disagreements;
            total.essentiality_mismatches += s.essentiality_mismatches;
            total.other_failures += s.other_failures;
            total.bound_violations += s.bound_violations;
            total.willard_violations += s.willard_violations;
            for (g, c) in s.gaps {
                *total.gaps.entry(g).or_default() += c;
            }
            for (t, c) in s.verdicts {
                *total.verdicts.entry(t).or_default() += c;
            }
            total.first_failure = total.first_failure.or(s.first_failure);
        }
        out.push((name.to_string(), total, start.elapsed()));
    }
    Ok(out)
}

fn lattice_theorem(runs: &[(String, SweepSummary, Duration)]) -> Outcome {
    let mut notes = Vec::new();
    for (name, s, elapsed) in runs {
        clean(s, name)?;
        if s.other_failures != 0 {
            return Err(format!("{name}: {} failure(s), first {:?}", s.other_failures, s.first_failure));
        }
        if s.gaps.keys().any(|g| !(1..=2).contains(g)) {
            return Err(format!("{name}: gaps {:?}", s.gaps));
        }
        within(*elapsed, 60).map_err(|e| format!("{name}: {e}"))?;
        notes.push(format!(
            "{name}: {} maps, gap2 {}",
            s.scanned,
            s.gaps.get(&2).copied().unwrap_or(0)
        ));
    }
    Ok(notes.join("; "))
}

fn essentiality(runs: &[(String, SweepSummary, Duration)]) -> Outcome {
    let mismatches: usize = runs.iter().map(|(_, s, _)| s.essentiality_mismatches).sum();
    if mismatches == 0 {
        let total: usize = runs.iter().map(|(_, s, _)| s.scanned).sum();
        Ok(format!("{total} functions, coefficient = scan = restriction"))
    } else {
        let first = runs.iter().find_map(|(_, s, _)| s.first_failure.clone());
        Err(format!("{mismatches} mismatch(es), first {first:?}"))
    }
}

fn random_node(rng: &mut StdRng, depth: usize, arity: usize, consts: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.3) {
        if rng.gen_bool(0.7) {
            Node::Var(rng.gen_range(0..arity))
        } else {
            Node::Const(rng.gen_range(0..consts))
        }
    } else {
        let a = random_node(rng, depth - 1, arity, consts);
        let b = random_node(rng, depth - 1, arity, consts);
        if rng.gen_bool(0.5) {
            Node::meet(a, b)
        } else {
            Node::join(a, b)
        }
    }
}

/// Criterion 5: term evaluation equals the normal form at every point.
fn goodstein_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x1a77_1ce5);
    let lattices = [
        ("4-chain", Arc::new(Lattice::chain(4).unwrap())),
        ("2x2", Arc::new(Lattice::boolean_cube(2).unwrap())),
    ];
    let mut points_checked = 0usize;
    for (name, l) in &lattices {
        let pts: Vec<Vec<usize>> = Points::new(3, l.len()).collect();
        for k in 0..1000 {
            let root = random_node(&mut rng, 6, 3, l.len());
            let t = Term::new(l.clone(), 3, root).map_err(|e| e.to_string())?;
            let f = PolyFn::canonicalize(&t).map_err(|e| e.to_string())?;
            for p in &pts {
                if t.eval_idx(p) != f.eval_idx(p) {
                    return Err(format!("{name} term #{k} `{t}` differs at {p:?}"));
                }
            }
            points_checked += pts.len();
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!("2000 terms, {points_checked} points, {:.2?}", start.elapsed()))
}

/// Criterion 6: Salomaa's function has gap k.
fn salomaa() -> Outcome {
    let start = Instant::now();
    for k in [3, 4] {
        let f = salomaa_function(k).map_err(|e| e.to_string())?;
        let r = gap_bruteforce(&f).map_err(|e| e.to_string())?;
        if r.ess != k || r.gap != k {
            return Err(format!("k={k}: ess {} gap {}", r.ess, r.gap));
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!("gap 3 and 4, {:.2?}", start.elapsed()))
}

/// Criterion 7: gap <= |A| everywhere; gap <= 2 when ess > |A| = 2.
fn bounds(
    finite: &[SweepSummary],
    lattice: &[(String, SweepSummary, Duration)],
) -> Outcome {
    let all = finite.iter().chain(lattice.iter().map(|(_, s, _)| s));
    let mut checked = 0;
    for s in all {
        if s.bound_violations + s.willard_violations != 0 {
            return Err(format!(
                "{} |A| violation(s), {} Willard violation(s), first {:?}",
                s.bound_violations, s.willard_violations, s.first_failure
            ));
        }
        checked += s.checked;
    }
    for k in [3, 4] {
        let r = gap_bruteforce(&salomaa_function(k).unwrap()).unwrap();
        if r.gap > k {
            return Err(format!("Salomaa k={k} gap {} > {k}", r.gap));
        }
        checked += 1;
    }
    Ok(format!("{checked} functions within bounds"))
}

/// Criterion 8: monotone map counts against filtering all maps.
fn enumerator_counts() -> Outcome {
    let c2 = Arc::new(Lattice::chain(2).unwrap());
    for (n, expected) in [(2usize, 6usize), (3, 20)] {
        let size = 1usize << n;
        let filtered = (0..1usize << size)
            .filter(|&code| {
                (0..size).all(|m| (0..n).all(|i| m >> i & 1 == 0 || (code >> (m & !(1 << i)) & 1) <= (code >> m & 1)))
            })
            .count();
        let maps: Vec<PolyFn> = enumerate_monotone_maps(n, c2.clone()).unwrap().collect();
        let distinct: BTreeSet<Vec<u16>> = maps.iter().map(|f| f.coeffs().to_vec()).collect();
        if filtered != expected || maps.len() != expected || distinct.len() != expected {
            return Err(format!(
                "n={n}: filter {filtered}, enumerator {}, distinct {}, expected {expected}",
                maps.len(),
                distinct.len()
            ));
        }
    }
    Ok("6 (n=2) and 20 (n=3) on the 2-chain".into())
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut finite = Vec::new();

    results.push((1, "Boolean gap theorem sweep", boolean_sweep(&mut finite)));
    results.push((2, "pseudo-Boolean gap theorem sweep", pseudo_boolean_sweep(&mut finite)));
    let lattice = lattice_sweeps();
    match &lattice {
        Ok(runs) => {
            results.push((3, "lattice polynomial gap theorem sweep", lattice_theorem(runs)));
            results.push((4, "essentiality criterion", essentiality(runs)));
        }
        Err(e) => {
            results.push((3, "lattice polynomial gap theorem sweep", Err(e.clone())));
            results.push((4, "essentiality criterion", Err(e.clone())));
        }
    }
    results.push((5, "normal form identity on random terms", goodstein_identity()));
    results.push((6, "Salomaa fixture", salomaa()));
    let empty = Vec::new();
    results.push((7, "gap bounds", bounds(&finite, lattice.as_ref().unwrap_or(&empty))));
    results.push((8, "monotone map counts", enumerator_counts()));

    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] criterion {n}: {name} ({detail})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {n}: {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
