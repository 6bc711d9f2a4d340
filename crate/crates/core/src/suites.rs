//! Exhaustive and sampled verification runs, each summarized as a
//! [`VerificationReport`].

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laws::{closure_under_join, closure_under_meet, dedekind_left, dedekind_right};
use crate::lattice::SubLattice;
use crate::partition::Partition;
use crate::transposition::{classical_transposition_check, verify_transposition};

pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    /// Record wall-clock time in the report. Off by default so reports are
    /// reproducible byte for byte.
    pub timing: bool,
    pub budget: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: String,
    pub n: usize,
    pub cases_checked: u64,
    pub failures: Vec<Value>,
    pub elapsed_ms: Option<u64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Value>,
}

struct Run {
    start: Instant,
    options: SuiteOptions,
}

impl Run {
    fn new(options: &SuiteOptions) -> Self {
        Run {
            start: Instant::now(),
            options: options.clone(),
        }
    }

    fn check_budget(&self, cases: u64) -> Result<()> {
        match self.options.budget {
            Some(b) if self.start.elapsed() > b => Err(Error::BudgetExceeded {
                seconds: b.as_secs_f64(),
                cases,
            }),
            _ => Ok(()),
        }
    }

    fn finish(
        self,
        property: &str,
        n: usize,
        cases_checked: u64,
        failures: Vec<Value>,
        observations: Vec<Value>,
    ) -> VerificationReport {
        VerificationReport {
            property: property.into(),
            n,
            cases_checked,
            pass: failures.is_empty(),
            failures,
            elapsed_ms: self
                .options
                .timing
                .then(|| self.start.elapsed().as_millis() as u64),
            observations,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Both Dedekind identities for every `(α, β, γ) ∈ L³` with `α ≤ β`.
pub fn dedekind_suite(lattice: &SubLattice, options: &SuiteOptions) -> Result<VerificationReport> {
    let run = Run::new(options);
    let els = lattice.elements();
    let mut comparable = Vec::new();
    for a in els {
        for b in els {
            if a.leq(b)? {
                comparable.push((a, b));
            }
        }
    }
    let per_pair = comparable
        .par_iter()
        .map(|&(a, b)| {
            run.check_budget(0)?;
            let mut failed = Vec::new();
            for g in els {
                for w in [dedekind_left(a, b, g)?, dedekind_right(a, b, g)?] {
                    if !w.held() {
                        failed.push(to_value(&w));
                    }
                }
            }
            Ok(failed)
        })
        .collect::<Result<Vec<_>>>()?;
    let cases = (comparable.len() * els.len()) as u64;
    let failures = per_pair.into_iter().flatten().collect();
    Ok(run.finish("dedekind", lattice.size(), cases, failures, Vec::new()))
}

/// Both Dedekind identities on `samples` seeded random triples with `α ≤ β`.
pub fn dedekind_sampled(
    n: usize,
    samples: u64,
    seed: u64,
    options: &SuiteOptions,
) -> Result<VerificationReport> {
    let run = Run::new(options);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..samples {
        if i % 1024 == 0 {
            run.check_budget(i)?;
        }
        let beta = Partition::random(n, &mut rng);
        let alpha = beta.meet(&Partition::random(n, &mut rng))?;
        let gamma = Partition::random(n, &mut rng);
        for w in [
            dedekind_left(&alpha, &beta, &gamma)?,
            dedekind_right(&alpha, &beta, &gamma)?,
        ] {
            if !w.held() {
                failures.push(to_value(&w));
            }
        }
    }
    Ok(run.finish("dedekind", n, samples, failures, Vec::new()))
}

/// Certifies the transposition isomorphism for every ordered permuting pair
/// of `L`. Pairs whose permuting interval is strictly smaller than the plain
/// interval are listed as observations.
pub fn transposition_suite(
    lattice: &SubLattice,
    options: &SuiteOptions,
) -> Result<VerificationReport> {
    let run = Run::new(options);
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut observations = Vec::new();
    for eta in lattice.elements() {
        run.check_budget(cases)?;
        for theta in lattice.elements() {
            if !eta.permutes(theta)? {
                continue;
            }
            cases += 1;
            let cert = verify_transposition(lattice, eta, theta)?;
            if !cert.is_valid() {
                failures.push(to_value(&cert.report(options.timing)));
            }
            if cert.lower.len() < cert.lower_unconstrained {
                observations.push(json!({
                    "eta": eta,
                    "theta": theta,
                    "upper_len": cert.upper.len(),
                    "lower_len": cert.lower.len(),
                    "lower_unconstrained_len": cert.lower_unconstrained,
                }));
            }
        }
    }
    Ok(run.finish("transposition", lattice.size(), cases, failures, observations))
}

/// Both permutability-closure inclusions on every instance of `L` that
/// satisfies their hypotheses.
pub fn closure_suite(lattice: &SubLattice, options: &SuiteOptions) -> Result<VerificationReport> {
    let run = Run::new(options);
    let els = lattice.elements();
    let mut cases = 0;
    let mut failures = Vec::new();
    for theta in els {
        run.check_budget(cases)?;
        let mut permuting = Vec::new();
        for g in els {
            if g.permutes(theta)? {
                permuting.push(g);
            }
        }
        for &alpha in &permuting {
            for &beta in &permuting {
                cases += 1;
                let w = closure_under_join(alpha, beta, theta)?;
                if !w.held() {
                    failures.push(to_value(&w));
                }
            }
        }
        for eta in els {
            let floor = eta.meet(theta)?;
            let below: Vec<&Partition> = permuting
                .iter()
                .copied()
                .filter(|g| g.leq(eta).unwrap_or(false))
                .collect();
            for &alpha in &below {
                for &beta in &below {
                    if !floor.leq(&alpha.meet(beta)?)? {
                        continue;
                    }
                    cases += 1;
                    let w = closure_under_meet(alpha, beta, theta, eta)?;
                    if !w.held() {
                        failures.push(to_value(&w));
                    }
                }
            }
        }
    }
    Ok(run.finish("closure", lattice.size(), cases, failures, Vec::new()))
}

fn classical_cases(
    lattice: &SubLattice,
    run: &Run,
    cases: &mut u64,
    failures: &mut Vec<Value>,
) -> Result<()> {
    for a in lattice.elements() {
        run.check_budget(*cases)?;
        for b in lattice.elements() {
            *cases += 1;
            let cert = classical_transposition_check(lattice, a, b)?;
            if !cert.is_valid() {
                failures.push(json!({
                    "lattice": lattice,
                    "a": a,
                    "b": b,
                    "certificate": cert,
                }));
            }
        }
    }
    Ok(())
}

/// The modular-lattice transposition on every pair of one lattice; refuses
/// non-modular lattices.
pub fn classical_suite(lattice: &SubLattice, options: &SuiteOptions) -> Result<VerificationReport> {
    if let Some((a, b, c)) = lattice.modularity_violation() {
        return Err(Error::Precondition(format!(
            "lattice is not modular: a = {a}, b = {b}, c = {c} violates the modular law"
        )));
    }
    let run = Run::new(options);
    let mut cases = 0;
    let mut failures = Vec::new();
    classical_cases(lattice, &run, &mut cases, &mut failures)?;
    Ok(run.finish("classical", lattice.size(), cases, failures, Vec::new()))
}

/// Every distinct sublattice of `full` generated by one or two elements,
/// in order of first generation.
pub fn small_generated_sublattices(full: &SubLattice) -> Result<Vec<SubLattice>> {
    let els = full.elements();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..els.len() {
        for j in i..els.len() {
            let l = SubLattice::closure(full.size(), [&els[i], &els[j]])?;
            if seen.insert(l.elements().to_vec()) {
                out.push(l);
            }
        }
    }
    Ok(out)
}

/// The modular-lattice transposition on every pair of every modular
/// sublattice of `full` generated by at most two elements, and on `full`
/// itself when it is modular.
pub fn classical_generated_suite(
    full: &SubLattice,
    options: &SuiteOptions,
) -> Result<VerificationReport> {
    let run = Run::new(options);
    let mut lattices = small_generated_sublattices(full)?;
    if !lattices.contains(full) {
        lattices.push(full.clone());
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut modular = 0;
    let total = lattices.len();
    for l in lattices.iter().filter(|l| l.is_modular()) {
        modular += 1;
        classical_cases(l, &run, &mut cases, &mut failures)?;
    }
    let observations = vec![json!({ "lattices": total, "modular_lattices": modular })];
    Ok(run.finish("classical", full.size(), cases, failures, observations))
}
