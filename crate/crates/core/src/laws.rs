//! Executable checks of the relational identities behind the transposition
//! principle: the generalized Dedekind rule in both orientations, alternating
//! composition chains, and closure of permutability under join and meet.
//!
//! Every check evaluates both sides as bit matrices and reports the first
//! pair on which they disagree, so a failure can be re-checked by hand.

use serde::{Deserialize, Serialize};

use crate::error::{check_sizes, Error, Result};
use crate::partition::Partition;
use crate::relation::BinaryRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawId {
    /// `α ∘ (β ∩ γ) = β ∩ (α ∘ γ)` for `α ≤ β`.
    Eq1,
    /// `(β ∩ γ) ∘ α = β ∩ (γ ∘ α)` for `α ≤ β`.
    Eq2,
    /// `(α ∨ β) ∘ θ = θ ∘ (α ∨ β)` when `α`, `β` permute with `θ`.
    ClosureJoin,
    /// `(α ∧ β) ∘ θ = θ ∘ (α ∧ β)` under the interval hypotheses.
    ClosureMeet,
}

/// Outcome of one law check. `offending_pair` is `None` iff the identity held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawWitness {
    pub law_id: LawId,
    pub inputs: Vec<Partition>,
    pub offending_pair: Option<(usize, usize)>,
}

impl LawWitness {
    pub fn held(&self) -> bool {
        self.offending_pair.is_none()
    }

    /// Re-evaluates both sides from `inputs`. Returns `true` when the stored
    /// verdict is reproduced: either both sides agree and no pair was stored,
    /// or the stored pair lies in exactly one side.
    pub fn recheck(&self) -> Result<bool> {
        let (lhs, rhs) = self.sides()?;
        Ok(match self.offending_pair {
            None => lhs == rhs,
            Some((x, y)) => {
                x < lhs.size() && y < lhs.size() && lhs.contains(x, y) != rhs.contains(x, y)
            }
        })
    }

    fn sides(&self) -> Result<(BinaryRelation, BinaryRelation)> {
        let arity = match self.law_id {
            LawId::ClosureMeet => 4,
            _ => 3,
        };
        if self.inputs.len() != arity {
            return Err(Error::Malformed(format!(
                "{:?} takes {arity} inputs, got {}",
                self.law_id,
                self.inputs.len()
            )));
        }
        let i = &self.inputs;
        match self.law_id {
            LawId::Eq1 => dedekind_left_sides(&i[0], &i[1], &i[2]),
            LawId::Eq2 => dedekind_right_sides(&i[0], &i[1], &i[2]),
            LawId::ClosureJoin => commutator_sides(&i[0].join(&i[1])?, &i[2]),
            LawId::ClosureMeet => commutator_sides(&i[0].meet(&i[1])?, &i[2]),
        }
    }
}

fn require(holds: bool, what: impl FnOnce() -> String) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}

fn dedekind_left_sides(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
) -> Result<(BinaryRelation, BinaryRelation)> {
    let beta_cap_gamma = beta.as_relation().intersect(gamma.as_relation())?;
    let lhs = alpha.as_relation().compose(&beta_cap_gamma)?;
    let rhs = beta.as_relation().intersect(&alpha.compose(gamma)?)?;
    Ok((lhs, rhs))
}

fn dedekind_right_sides(
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
) -> Result<(BinaryRelation, BinaryRelation)> {
    let beta_cap_gamma = beta.as_relation().intersect(gamma.as_relation())?;
    let lhs = beta_cap_gamma.compose(alpha.as_relation())?;
    let rhs = beta.as_relation().intersect(&gamma.compose(alpha)?)?;
    Ok((lhs, rhs))
}

fn commutator_sides(
    rel: &Partition,
    theta: &Partition,
) -> Result<(BinaryRelation, BinaryRelation)> {
    Ok((rel.compose(theta)?, theta.compose(rel)?))
}

fn dedekind(
    law_id: LawId,
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
) -> Result<LawWitness> {
    check_sizes(alpha.size(), beta.size())?;
    check_sizes(alpha.size(), gamma.size())?;
    require(alpha.leq(beta)?, || format!("alpha {alpha} is not below beta {beta}"))?;
    let (lhs, rhs) = match law_id {
        LawId::Eq1 => dedekind_left_sides(alpha, beta, gamma)?,
        _ => dedekind_right_sides(alpha, beta, gamma)?,
    };
    Ok(LawWitness {
        law_id,
        inputs: vec![alpha.clone(), beta.clone(), gamma.clone()],
        offending_pair: lhs.first_difference(&rhs),
    })
}

/// Checks `α ∘ (β ∩ γ) = β ∩ (α ∘ γ)`; requires `α ≤ β`.
pub fn dedekind_left(alpha: &Partition, beta: &Partition, gamma: &Partition) -> Result<LawWitness> {
    dedekind(LawId::Eq1, alpha, beta, gamma)
}

/// Checks `(β ∩ γ) ∘ α = β ∩ (γ ∘ α)`; requires `α ≤ β`.
pub fn dedekind_right(alpha: &Partition, beta: &Partition, gamma: &Partition) -> Result<LawWitness> {
    dedekind(LawId::Eq2, alpha, beta, gamma)
}

/// `a ∘ b ∘ a ∘ …` with `factors` factors, starting with `a`.
pub fn iterated_compose(a: &Partition, b: &Partition, factors: usize) -> Result<BinaryRelation> {
    check_sizes(a.size(), b.size())?;
    if factors == 0 {
        return Err(Error::Malformed("iterated composition needs at least one factor".into()));
    }
    let mut acc = a.as_relation().clone();
    for k in 1..factors {
        let next = if k % 2 == 1 { b } else { a };
        acc = acc.compose(next.as_relation())?;
    }
    Ok(acc)
}

/// Extends the alternating chain until it stops growing. Returns the limit
/// relation and the number of factors at which it was first reached.
pub fn composition_fixpoint(a: &Partition, b: &Partition) -> Result<(BinaryRelation, usize)> {
    check_sizes(a.size(), b.size())?;
    let mut factors = 1;
    let mut acc = a.as_relation().clone();
    loop {
        let next = if factors % 2 == 1 { b } else { a };
        let grown = acc.compose(next.as_relation())?;
        // once one step adds nothing, the next cannot either: acc already
        // absorbs the factor it ended with
        if grown == acc {
            return Ok((acc, factors));
        }
        acc = grown;
        factors += 1;
    }
}

/// Join computed as the limit of alternating compositions; independent of
/// the union-find join in [`Partition::join`].
pub fn join_by_composition(a: &Partition, b: &Partition) -> Result<Partition> {
    let (limit, _) = composition_fixpoint(a, b)?;
    Partition::from_relation(&limit)
}

/// Checks that `α ∨ β` permutes with `θ`, in both inclusions; requires `α`
/// and `β` to permute with `θ`.
pub fn closure_under_join(
    alpha: &Partition,
    beta: &Partition,
    theta: &Partition,
) -> Result<LawWitness> {
    check_sizes(alpha.size(), beta.size())?;
    check_sizes(alpha.size(), theta.size())?;
    require(alpha.permutes(theta)?, || format!("alpha {alpha} does not permute with theta {theta}"))?;
    require(beta.permutes(theta)?, || format!("beta {beta} does not permute with theta {theta}"))?;
    let joined = alpha.join(beta)?;
    let (lhs, rhs) = commutator_sides(&joined, theta)?;
    Ok(LawWitness {
        law_id: LawId::ClosureJoin,
        inputs: vec![alpha.clone(), beta.clone(), theta.clone()],
        offending_pair: lhs.first_excess(&rhs).or_else(|| rhs.first_excess(&lhs)),
    })
}

/// Checks that `α ∧ β` permutes with `θ`, in both inclusions. Requires `α`,
/// `β` to permute with `θ`, both to lie below `η`, and `η ∧ θ ≤ α ∧ β`.
pub fn closure_under_meet(
    alpha: &Partition,
    beta: &Partition,
    theta: &Partition,
    eta: &Partition,
) -> Result<LawWitness> {
    for other in [beta, theta, eta] {
        check_sizes(alpha.size(), other.size())?;
    }
    require(alpha.permutes(theta)?, || format!("alpha {alpha} does not permute with theta {theta}"))?;
    require(beta.permutes(theta)?, || format!("beta {beta} does not permute with theta {theta}"))?;
    require(alpha.leq(eta)?, || format!("alpha {alpha} is not below eta {eta}"))?;
    require(beta.leq(eta)?, || format!("beta {beta} is not below eta {eta}"))?;
    let met = alpha.meet(beta)?;
    let floor = eta.meet(theta)?;
    require(floor.leq(&met)?, || {
        format!("eta ∧ theta = {floor} is not below alpha ∧ beta = {met}")
    })?;
    let (lhs, rhs) = commutator_sides(&met, theta)?;
    Ok(LawWitness {
        law_id: LawId::ClosureMeet,
        inputs: vec![alpha.clone(), beta.clone(), theta.clone(), eta.clone()],
        offending_pair: lhs.first_excess(&rhs).or_else(|| rhs.first_excess(&lhs)),
    })
}
