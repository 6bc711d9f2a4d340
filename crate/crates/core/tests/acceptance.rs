//! Acceptance run. Prints one line per criterion and exits non-zero if any
//! of them fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use eqlat::laws::join_by_composition;
use eqlat::lattice::SubLattice;
use eqlat::suites::{
    classical_generated_suite, closure_suite, dedekind_suite, transposition_suite, SuiteOptions,
};
use eqlat::transposition::FailureKind;
use eqlat::{
    classical_transposition_check, enumerate_partitions, phi, search_necessity_witness,
    verify_transposition, Error, Partition, SearchOutcome,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn n5() -> Result<SubLattice, String> {
    SubLattice::load(concat!(env!("CARGO_MANIFEST_DIR"), "/lattices/n5.lat"), false).map_err(err)
}

fn dedekind_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 2..=4 {
        let l = SubLattice::full(n).map_err(err)?;
        let started = Instant::now();
        let r = dedekind_suite(&l, &SuiteOptions::default()).map_err(err)?;
        ensure(r.pass, format!("n={n}: {} failures", r.failures.len()))?;
        if n == 4 {
            let t = started.elapsed();
            ensure(t < Duration::from_secs(5), format!("n=4 took {t:?}"))?;
        }
        cases += r.cases_checked;
    }
    Ok(format!("{cases} triples, 0 failures, {:?}", start.elapsed()))
}

fn transposition_all_pairs() -> Outcome {
    let mut pairs = 0;
    for n in 2..=4 {
        let l = SubLattice::full(n).map_err(err)?;
        let started = Instant::now();
        let r = transposition_suite(&l, &SuiteOptions::default()).map_err(err)?;
        ensure(r.pass, format!("n={n}: {} failing certificates", r.failures.len()))?;
        // cross-check the pair count against the brute-force permutability test
        let expected = l
            .elements()
            .iter()
            .flat_map(|a| l.elements().iter().map(move |b| (a, b)))
            .filter(|(a, b)| permutes_oracle(a, b))
            .count() as u64;
        ensure(r.cases_checked == expected, format!("n={n}: {} pairs, oracle {expected}", r.cases_checked))?;
        if n == 4 {
            let t = started.elapsed();
            ensure(t < Duration::from_secs(10), format!("n=4 took {t:?}"))?;
        }
        pairs += r.cases_checked;
    }
    Ok(format!("{pairs} permuting pairs, all certificates valid"))
}

fn n5_showcase() -> Outcome {
    let l = n5()?;
    let (eta, theta) = (p("0,2|1,3"), p("0,1|2,3"));
    let c = verify_transposition(&l, &eta, &theta).map_err(err)?;
    let got = (c.upper.len(), c.lower.len(), c.lower_unconstrained);
    ensure(got == (2, 2, 3), format!("sizes {got:?}, expected (2, 2, 3)"))?;
    let (a, b, x) = l.modularity_violation().ok_or("N5 reported modular")?;
    let (ra, rb, rx) = (rel_of(&a), rel_of(&b), rel_of(&x));
    ensure(leq(&rx, &ra), "triple does not satisfy c <= a")?;
    let lhs = intersect(&ra, &join_rel(4, &rb, &rx));
    let rhs = join_rel(4, &intersect(&ra, &rb), &rx);
    ensure(lhs != rhs, "reported triple satisfies the modular law")?;
    Ok(format!("sizes 2/2/3, violating triple a={a} b={b} c={x}"))
}

fn necessity_search() -> Outcome {
    let w = match search_necessity_witness(3, 1).map_err(err)? {
        SearchOutcome::Found(w) => w,
        other => return Err(format!("no witness: {other:?}")),
    };
    ensure(!permutes_oracle(&w.eta, &w.theta), "eta and theta permute")?;
    ensure(w.failure_kind == FailureKind::PhiImageNotPermuting, "wrong failure kind")?;
    let top = Partition::top(3);
    ensure(w.alpha.as_ref() == Some(&top), "failing element is not the top")?;
    let image = phi(&top, &w.eta).map_err(err)?;
    ensure(w.phi_image.as_ref() == Some(&image), "stored image differs from phi(top)")?;
    ensure(!permutes_oracle(&image, &w.theta), "phi(top) permutes with theta")?;
    ensure((w.upper_len, w.lower_len) == (2, 1), format!("sizes {} vs {}", w.upper_len, w.lower_len))?;
    Ok(format!("eta={} theta={}, phi(top)={image}, sizes 2 vs 1", w.eta, w.theta))
}

fn closure_inclusions() -> Outcome {
    let l = SubLattice::full(4).map_err(err)?;
    let r = closure_suite(&l, &SuiteOptions::default()).map_err(err)?;
    ensure(r.pass, format!("{} failures", r.failures.len()))?;
    ensure(r.cases_checked > 0, "no instances")?;
    Ok(format!("{} instances in Eq(4), 0 failures", r.cases_checked))
}

fn classical_cross_check() -> Outcome {
    let full = SubLattice::full(4).map_err(err)?;
    let r = classical_generated_suite(&full, &SuiteOptions::default()).map_err(err)?;
    ensure(r.pass, format!("{} failures", r.failures.len()))?;
    let modular = r.observations[0]["modular_lattices"].as_u64().unwrap_or(0);
    ensure(modular > 0, "no modular sublattices")?;
    let l = n5()?;
    match classical_transposition_check(&l, &p("0,2|1,3"), &p("0,1|2,3")) {
        Err(Error::Precondition(_)) => {}
        other => return Err(format!("N5 not refused: {other:?}")),
    }
    Ok(format!("{modular} modular sublattices, {} pairs; N5 refused", r.cases_checked))
}

fn oracle_agreement() -> Outcome {
    let mut exhaustive = 0;
    for n in 0..=5 {
        let all = enumerate_partitions(n).map_err(err)?;
        for a in &all {
            for b in &all {
                let uf = a.join(b).map_err(err)?;
                ensure(join_by_composition(a, b).map_err(err)? == uf, format!("({a}, {b})"))?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a6f_696e);
    let samples = 10_000;
    for _ in 0..samples {
        let a = Partition::random(8, &mut rng);
        let b = Partition::random(8, &mut rng);
        let uf = a.join(&b).map_err(err)?;
        ensure(join_by_composition(&a, &b).map_err(err)? == uf, format!("({a}, {b})"))?;
        ensure(uf.to_string() == text_of(8, &join_rel(8, &rel_of(&a), &rel_of(&b))), "Warshall oracle")?;
    }
    let counts: Vec<usize> = (0..=6).map(|n| enumerate_partitions(n).map(|v| v.len())).collect::<Result<_, _>>().map_err(err)?;
    let bells: Vec<usize> = (0..=6).map(|n| bell(n) as usize).collect();
    ensure(counts == [1, 1, 2, 5, 15, 52, 203], format!("counts {counts:?}"))?;
    ensure(counts == bells, "Bell triangle disagrees")?;
    Ok(format!("{exhaustive} exhaustive pairs, {samples} random pairs at n=8, Bell counts {counts:?}"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_eqlat"))
            .args(["verify", "transposition", "--n", "4", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), "non-zero exit")?;
    ensure(!a.stdout.is_empty(), "empty report")?;
    ensure(a.stdout == b.stdout, "reports differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Dedekind rule exhaustive, n = 2..4", dedekind_exhaustive),
        ("transposition certificates for every permuting pair, n = 2..4", transposition_all_pairs),
        ("N5 interval sizes and modularity violation", n5_showcase),
        ("necessity witness at n = 3", necessity_search),
        ("closure inclusions over Eq(4)", closure_inclusions),
        ("classical check on small modular sublattices, N5 refused", classical_cross_check),
        ("join oracles and Bell counts", oracle_agreement),
        ("byte-identical JSON reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
