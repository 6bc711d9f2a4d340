//! The transposition principle for permuting equivalence relations.
//!
//! For `η, θ ∈ L` with `η ∘ θ = θ ∘ η`, the maps `α ↦ α ∧ η` and
//! `α ↦ α ∘ θ` are inverse lattice isomorphisms between `⟦θ, η ∨ θ⟧_L` and
//! the members of `⟦η ∧ θ, η⟧_L` that permute with `θ`, and that second set
//! is itself closed under meet and join. [`verify_transposition`] checks every
//! part of that claim by evaluating it on every member of both intervals.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{check_sizes, Error, Result};
use crate::lattice::{certify_iso, IntervalSlice, IsoCertificate, IsoChecks, SubLattice};
use crate::partition::{Partition, DEFAULT_MAX_N};

/// `α ↦ α ∧ η`.
pub fn phi(alpha: &Partition, eta: &Partition) -> Result<Partition> {
    alpha.meet(eta)
}

/// `α ↦ α ∘ θ`, defined only when `α` permutes with `θ`; the composite is
/// then an equivalence relation.
pub fn psi(alpha: &Partition, theta: &Partition) -> Result<Partition> {
    check_sizes(alpha.size(), theta.size())?;
    if let Some((x, y)) = alpha.permutation_witness(theta)? {
        return Err(Error::NotPermuting(x, y));
    }
    Partition::from_relation(&alpha.compose(theta)?)
}

/// A clause of the certificate that failed, with the members involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub clause: String,
    pub members: Vec<Partition>,
}

#[derive(Debug, Clone)]
pub struct TranspositionCertificate<'a> {
    pub eta: Partition,
    pub theta: Partition,
    /// `⟦θ, η ∨ θ⟧_L`
    pub upper: IntervalSlice<'a>,
    /// `⟦η ∧ θ, η⟧_L^θ`
    pub lower: IntervalSlice<'a>,
    /// `|⟦η ∧ θ, η⟧_L|`, before the permutability filter.
    pub lower_unconstrained: usize,
    pub phi_table: Vec<(Partition, Partition)>,
    pub psi_table: Vec<(Partition, Partition)>,
    pub iso: IsoCertificate,
    pub range_ok: bool,
    pub sublattice_ok: bool,
    pub psi_join_ok: bool,
    pub issues: Vec<Issue>,
    pub elapsed: Duration,
}

impl TranspositionCertificate<'_> {
    pub fn is_valid(&self) -> bool {
        self.iso.is_valid() && self.range_ok && self.sublattice_ok && self.psi_join_ok
    }

    /// Serializable form. `elapsed_ms` is filled only when `timing` is set,
    /// so untimed reports are byte-for-byte reproducible.
    pub fn report(&self, timing: bool) -> CertificateReport {
        let c = &self.iso.checks;
        CertificateReport {
            n: self.eta.size(),
            eta: self.eta.clone(),
            theta: self.theta.clone(),
            upper: self.upper.members.clone(),
            lower: self.lower.members.clone(),
            lower_unconstrained_len: self.lower_unconstrained,
            phi: self.phi_table.clone(),
            psi: self.psi_table.clone(),
            flags: CertificateFlags {
                bijection: c.bijection,
                forward_monotone: c.forward_monotone,
                backward_monotone: c.backward_monotone,
                meet_preserving: c.meet_preserving,
                join_preserving: c.join_preserving,
                range_ok: self.range_ok,
                sublattice_ok: self.sublattice_ok,
                psi_join_ok: self.psi_join_ok,
            },
            valid: self.is_valid(),
            issues: self.issues.clone(),
            elapsed_ms: timing.then_some(self.elapsed.as_millis() as u64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFlags {
    pub bijection: bool,
    pub forward_monotone: bool,
    pub backward_monotone: bool,
    pub meet_preserving: bool,
    pub join_preserving: bool,
    pub range_ok: bool,
    pub sublattice_ok: bool,
    pub psi_join_ok: bool,
}

impl CertificateFlags {
    pub fn all(&self) -> bool {
        self.bijection
            && self.forward_monotone
            && self.backward_monotone
            && self.meet_preserving
            && self.join_preserving
            && self.range_ok
            && self.sublattice_ok
            && self.psi_join_ok
    }
}

/// JSON form of a [`TranspositionCertificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub eta: Partition,
    pub theta: Partition,
    pub upper: Vec<Partition>,
    pub lower: Vec<Partition>,
    pub lower_unconstrained_len: usize,
    pub phi: Vec<(Partition, Partition)>,
    pub psi: Vec<(Partition, Partition)>,
    pub flags: CertificateFlags,
    pub valid: bool,
    pub issues: Vec<Issue>,
    pub elapsed_ms: Option<u64>,
}

impl CertificateReport {
    /// Recomputes the certificate for `(eta, theta)` in `lattice` and
    /// returns whether its verdict matches this report.
    pub fn recheck(&self, lattice: &SubLattice) -> Result<bool> {
        let fresh = verify_transposition(lattice, &self.eta, &self.theta)?;
        Ok(fresh.is_valid() == self.valid && fresh.report(false).flags == self.flags)
    }
}

fn require_member(lattice: &SubLattice, p: &Partition) -> Result<()> {
    check_sizes(lattice.size(), p.size())?;
    if lattice.contains(p) {
        Ok(())
    } else {
        Err(Error::NotInLattice(p.to_string()))
    }
}

/// Builds both intervals for the permuting pair `(eta, theta)` of `lattice`
/// and certifies the isomorphism between them, the range of `φ`, the closure
/// of the permuting interval, and `ψ(α) = α ∨ θ`.
pub fn verify_transposition<'a>(
    lattice: &'a SubLattice,
    eta: &Partition,
    theta: &Partition,
) -> Result<TranspositionCertificate<'a>> {
    let start = Instant::now();
    require_member(lattice, eta)?;
    require_member(lattice, theta)?;
    if let Some((x, y)) = eta.permutation_witness(theta)? {
        return Err(Error::NotPermuting(x, y));
    }

    let top = eta.join(theta)?;
    let floor = eta.meet(theta)?;
    let upper = lattice.interval(theta, &top)?;
    let lower = lattice.interval_permuting(&floor, eta, theta)?;
    let lower_unconstrained = lattice.interval(&floor, eta)?.len();
    let eta_theta = eta.compose(theta)?;

    let mut issues = Vec::new();

    let mut phi_table = Vec::with_capacity(upper.len());
    let mut range_ok = true;
    for alpha in &upper.members {
        let image = phi(alpha, eta)?;
        // (α ∧ η) ∘ θ = α ∩ (η ∘ θ)
        let dedekind = image.compose(theta)? == alpha.as_relation().intersect(&eta_theta)?;
        if !(dedekind && image.permutes(theta)? && lower.contains(&image)) {
            range_ok = false;
            issues.push(Issue {
                clause: "range".into(),
                members: vec![alpha.clone(), image.clone()],
            });
        }
        phi_table.push((alpha.clone(), image));
    }

    let mut psi_table = Vec::with_capacity(lower.len());
    let mut psi_join_ok = true;
    for beta in &lower.members {
        let image = psi(beta, theta)?;
        if image != beta.join(theta)? {
            psi_join_ok = false;
            issues.push(Issue {
                clause: "psi_join".into(),
                members: vec![beta.clone(), image.clone()],
            });
        }
        psi_table.push((beta.clone(), image));
    }

    let forward: BTreeMap<Partition, Partition> = phi_table.iter().cloned().collect();
    let backward: BTreeMap<Partition, Partition> = psi_table.iter().cloned().collect();
    let iso = certify_iso(&upper, &lower, &forward, &backward)?;
    if !iso.checks.bijection {
        for (alpha, image) in &phi_table {
            if backward.get(image) != Some(alpha) {
                issues.push(Issue {
                    clause: "psi_after_phi".into(),
                    members: vec![alpha.clone(), image.clone()],
                });
            }
        }
        for (beta, image) in &psi_table {
            if forward.get(image) != Some(beta) {
                issues.push(Issue {
                    clause: "phi_after_psi".into(),
                    members: vec![beta.clone(), image.clone()],
                });
            }
        }
    }
    push_iso_issues(&iso.checks, &mut issues);

    let gap = lower.closure_gap();
    if let Some((op, a, b, r)) = &gap {
        issues.push(Issue {
            clause: format!("lower_{op}_closed"),
            members: vec![a.clone(), b.clone(), r.clone()],
        });
    }

    Ok(TranspositionCertificate {
        eta: eta.clone(),
        theta: theta.clone(),
        upper,
        lower,
        lower_unconstrained,
        phi_table,
        psi_table,
        iso,
        range_ok,
        sublattice_ok: gap.is_none(),
        psi_join_ok,
        issues,
        elapsed: start.elapsed(),
    })
}

fn push_iso_issues(checks: &IsoChecks, issues: &mut Vec<Issue>) {
    let named = [
        ("forward_monotone", checks.forward_monotone),
        ("backward_monotone", checks.backward_monotone),
        ("meet_preserving", checks.meet_preserving),
        ("join_preserving", checks.join_preserving),
    ];
    for (clause, ok) in named {
        if !ok {
            issues.push(Issue {
                clause: clause.into(),
                members: Vec::new(),
            });
        }
    }
}

/// Certifies `x ↦ x ∧ a` and `y ↦ y ∨ b` as inverse isomorphisms between
/// `⟦b, a ∨ b⟧_L` and `⟦a ∧ b, a⟧_L`. Refuses non-modular lattices.
pub fn classical_transposition_check(
    lattice: &SubLattice,
    a: &Partition,
    b: &Partition,
) -> Result<IsoCertificate> {
    require_member(lattice, a)?;
    require_member(lattice, b)?;
    if let Some((x, y, z)) = lattice.modularity_violation() {
        return Err(Error::Precondition(format!(
            "lattice is not modular: a = {x}, b = {y}, c = {z} violates the modular law"
        )));
    }
    let upper = lattice.interval(b, &a.join(b)?)?;
    let lower = lattice.interval(&a.meet(b)?, a)?;
    let forward = upper
        .members
        .iter()
        .map(|x| Ok((x.clone(), x.meet(a)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let backward = lower
        .members
        .iter()
        .map(|y| Ok((y.clone(), y.join(b)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    certify_iso(&upper, &lower, &forward, &backward)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    PhiImageNotPermuting,
    SizeMismatchOfIntervals,
}

/// A non-permuting pair for which the transposition correspondence breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessityWitness {
    pub lattice: SubLattice,
    pub eta: Partition,
    pub theta: Partition,
    pub failure_kind: FailureKind,
    /// First member of the upper interval whose `φ`-image does not permute
    /// with `θ`; absent when only the sizes disagree.
    pub alpha: Option<Partition>,
    pub phi_image: Option<Partition>,
    pub upper_len: usize,
    pub lower_len: usize,
}

impl NecessityWitness {
    /// Re-derives the witness from `(lattice, eta, theta)`.
    pub fn recheck(&self) -> Result<bool> {
        Ok(necessity_witness_for(&self.lattice, &self.eta, &self.theta)?.as_ref() == Some(self))
    }
}

/// Tests one pair of `lattice` for a breakdown of the correspondence.
/// Returns `None` when `eta` and `theta` permute or nothing breaks.
pub fn necessity_witness_for(
    lattice: &SubLattice,
    eta: &Partition,
    theta: &Partition,
) -> Result<Option<NecessityWitness>> {
    require_member(lattice, eta)?;
    require_member(lattice, theta)?;
    if eta.permutes(theta)? {
        return Ok(None);
    }
    let upper = lattice.interval(theta, &eta.join(theta)?)?;
    let lower = lattice.interval_permuting(&eta.meet(theta)?, eta, theta)?;
    let mut bad = None;
    for alpha in &upper.members {
        let image = phi(alpha, eta)?;
        if !image.permutes(theta)? {
            bad = Some((alpha.clone(), image));
            break;
        }
    }
    let failure_kind = match (&bad, upper.len() != lower.len()) {
        (Some(_), _) => FailureKind::PhiImageNotPermuting,
        (None, true) => FailureKind::SizeMismatchOfIntervals,
        (None, false) => return Ok(None),
    };
    let (alpha, phi_image) = bad.unzip();
    Ok(Some(NecessityWitness {
        lattice: lattice.clone(),
        eta: eta.clone(),
        theta: theta.clone(),
        failure_kind,
        alpha,
        phi_image,
        upper_len: upper.len(),
        lower_len: lower.len(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<NecessityWitness>),
    Exhausted { lattices: usize, pairs: usize },
}

/// Searches `Eq(n)` and then, up to `max_lattices` lattices in total, the
/// sublattices generated by two partitions, for the first pair (in
/// enumeration order) where dropping permutability breaks the
/// correspondence.
pub fn search_necessity_witness(n: usize, max_lattices: usize) -> Result<SearchOutcome> {
    if n > DEFAULT_MAX_N {
        return Err(Error::CapExceeded { n, cap: DEFAULT_MAX_N });
    }
    let full = SubLattice::full(n)?;
    let mut seen: Vec<SubLattice> = Vec::new();
    let mut pairs = 0;
    let mut lattices = 0;

    let elements = full.elements();
    let generated = (0..elements.len())
        .flat_map(|i| (i + 1..elements.len()).map(move |j| (i, j)))
        .map(|(i, j)| SubLattice::closure(n, [&elements[i], &elements[j]]));
    let candidates = std::iter::once(Ok(full.clone())).chain(generated);

    for lattice in candidates {
        if lattices >= max_lattices {
            break;
        }
        let lattice = lattice?;
        if seen.contains(&lattice) {
            continue;
        }
        seen.push(lattice.clone());
        lattices += 1;
        for eta in lattice.elements() {
            for theta in lattice.elements() {
                pairs += 1;
                if let Some(w) = necessity_witness_for(&lattice, eta, theta)? {
                    return Ok(SearchOutcome::Found(Box::new(w)));
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted { lattices, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn m3() -> SubLattice {
        SubLattice::closure(4, &[p("0,1|2,3"), p("0,2|1,3"), p("0,3|1,2")]).unwrap()
    }

    fn n5() -> SubLattice {
        SubLattice::from_elements(
            4,
            ["0|1|2|3", "0,2|1|3", "0,2|1,3", "0,1|2,3", "0,1,2,3"].map(p),
        )
        .unwrap()
    }

    #[test]
    fn phi_examples() {
        let eta = p("0,1|2,3");
        assert_eq!(phi(&Partition::top(4), &eta).unwrap(), eta);
        assert_eq!(phi(&p("0,2|1,3"), &eta).unwrap(), Partition::bottom(4));
        let a = p("0,2|1|3");
        assert_eq!(phi(&a, &Partition::top(4)).unwrap(), a);
        assert_eq!(phi(&Partition::bottom(4), &eta).unwrap(), Partition::bottom(4));
    }

    #[test]
    fn psi_examples() {
        let theta = p("0,2|1,3");
        assert_eq!(psi(&Partition::bottom(4), &theta).unwrap(), theta);
        assert_eq!(psi(&p("0,1|2,3"), &theta).unwrap(), Partition::top(4));
        assert_eq!(psi(&theta, &theta).unwrap(), theta);
        assert_eq!(
            psi(&p("0,1|2|3"), &p("0|1,2|3")),
            Err(Error::NotPermuting(0, 2))
        );
    }

    #[test]
    fn m3_certificate() {
        let l = m3();
        let cert = verify_transposition(&l, &p("0,1|2,3"), &p("0,2|1,3")).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.issues);
        assert_eq!(cert.upper.members, vec![Partition::top(4), p("0,2|1,3")]);
        assert_eq!(cert.lower.members, vec![p("0,1|2,3"), Partition::bottom(4)]);
    }

    #[test]
    fn n5_certificate() {
        let l = n5();
        let cert = verify_transposition(&l, &p("0,2|1,3"), &p("0,1|2,3")).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.issues);
        assert_eq!(cert.upper.len(), 2);
        assert_eq!(cert.lower.len(), 2);
        assert_eq!(cert.lower_unconstrained, 3);
        assert!(cert.issues.is_empty());
    }

    #[test]
    fn degenerate_certificate() {
        let l = SubLattice::full(4).unwrap();
        let t = p("0,1|2|3");
        let cert = verify_transposition(&l, &t, &t).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.upper.members, vec![t.clone()]);
        assert_eq!(cert.lower.members, vec![t.clone()]);
        assert_eq!(cert.phi_table, vec![(t.clone(), t.clone())]);
    }

    #[test]
    fn verify_rejects_bad_inputs() {
        let l = SubLattice::full(4).unwrap();
        assert_eq!(
            verify_transposition(&l, &p("0,1|2|3"), &p("0|1,2|3")).unwrap_err(),
            Error::NotPermuting(0, 2)
        );
        let n5 = n5();
        assert!(matches!(
            verify_transposition(&n5, &p("0,3|1,2"), &Partition::bottom(4)),
            Err(Error::NotInLattice(_))
        ));
    }

    #[test]
    fn report_round_trips_through_json() {
        let l = n5();
        let cert = verify_transposition(&l, &p("0,2|1,3"), &p("0,1|2,3")).unwrap();
        let report = cert.report(false);
        assert_eq!(report.elapsed_ms, None);
        let json = serde_json::to_string(&report).unwrap();
        let back: CertificateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(back.recheck(&l).unwrap());
        assert!(cert.report(true).elapsed_ms.is_some());
    }

    #[test]
    fn classical_examples() {
        let chain = SubLattice::from_elements(4, ["0|1|2|3", "0,1|2|3", "0,1,2|3", "0,1,2,3"].map(p))
            .unwrap();
        for a in chain.elements() {
            for b in chain.elements() {
                assert!(classical_transposition_check(&chain, a, b).unwrap().is_valid());
            }
        }
        let cert = classical_transposition_check(&m3(), &p("0,1|2,3"), &p("0,2|1,3")).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.forward.len(), 2);
        assert_eq!(cert.backward.len(), 2);
        assert!(matches!(
            classical_transposition_check(&n5(), &p("0,2|1,3"), &p("0,1|2,3")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn necessity_for_documented_pair() {
        let l = SubLattice::full(3).unwrap();
        let w = necessity_witness_for(&l, &p("0,1|2"), &p("0|1,2")).unwrap().unwrap();
        assert_eq!(w.failure_kind, FailureKind::PhiImageNotPermuting);
        assert_eq!(w.alpha, Some(Partition::top(3)));
        assert_eq!(w.phi_image, Some(p("0,1|2")));
        assert_eq!((w.upper_len, w.lower_len), (2, 1));
        assert!(w.recheck().unwrap());
        assert_eq!(necessity_witness_for(&l, &p("0,1|2"), &Partition::top(3)).unwrap(), None);
    }

    #[test]
    fn search_examples() {
        match search_necessity_witness(3, 1).unwrap() {
            SearchOutcome::Found(w) => {
                assert!(!w.eta.permutes(&w.theta).unwrap());
                assert_eq!(w.failure_kind, FailureKind::PhiImageNotPermuting);
                assert_eq!((w.upper_len, w.lower_len), (2, 1));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        assert!(matches!(
            search_necessity_witness(2, 10).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
        assert!(matches!(
            search_necessity_witness(3, 0).unwrap(),
            SearchOutcome::Exhausted { lattices: 0, .. }
        ));
    }
}
