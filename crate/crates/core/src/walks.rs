//! Walks on ordinals below ε₀.
//!
//! Ladders (the C-sequence) are `C_{ξ+1} = {ξ}` and, for a limit `λ`, `0`
//! followed by the standard fundamental sequence of `λ`, with the leading
//! `0` merged when the fundamental sequence already starts there. The walk
//! from `β` down to `α` steps to `min(C_{β_i} ∖ α)`; its lower trace records
//! running maxima of `C_{β_i} ∩ α`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{enumerate_below, Kind, Ordinal, OrdinalError, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// The ladder system: `C_{ξ+1} = {ξ}`, limits get `0` then `λ[0], λ[1], …`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ladders;

impl Ladders {
    /// The `i`-th element of `C_β`, or `None` past the end of a successor ladder.
    pub fn element(&self, beta: &Ordinal, i: u64) -> Option<Ordinal> {
        match beta.kind() {
            Kind::Zero => None,
            Kind::Successor => (i == 0).then(|| beta.pred().expect("successor")),
            Kind::Limit => {
                let first = beta.standard_fundamental(0).expect("limit");
                if first.is_zero() {
                    Some(beta.standard_fundamental(i).expect("limit"))
                } else if i == 0 {
                    Some(Ordinal::zero())
                } else {
                    Some(beta.standard_fundamental(i - 1).expect("limit"))
                }
            }
        }
    }

    /// `(|C_β ∩ α|, min(C_β ∖ α))`. For `α < β` the minimum always exists.
    pub fn split(&self, beta: &Ordinal, alpha: &Ordinal) -> (u64, Ordinal) {
        match beta.kind() {
            Kind::Zero => unreachable!("the walk never visits 0 above a target"),
            Kind::Successor => {
                let xi = beta.pred().expect("successor");
                if &xi < alpha {
                    unreachable!("the walk only visits ordinals above its target")
                }
                (0, xi)
            }
            Kind::Limit => {
                if let Some(found) = successor_exponent_split(beta, alpha) {
                    return found;
                }
                let at = |i| self.element(beta, i).expect("limit ladders are infinite");
                if &at(0) >= alpha {
                    return (0, at(0));
                }
                // galloping search for the least index whose element is ≥ α
                let mut lo = 0;
                let mut hi = 1;
                while &at(hi) < alpha {
                    lo = hi;
                    hi *= 2;
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if &at(mid) < alpha {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (hi, at(hi))
            }
        }
    }
}

/// Closed form of [`Ladders::split`] for `λ = γ + ω^{β+1}`, whose
/// fundamental sequence is `γ + ω^β·n`; `None` for other limits.
fn successor_exponent_split(lambda: &Ordinal, alpha: &Ordinal) -> Option<(u64, Ordinal)> {
    let terms = lambda.terms();
    let last = terms.last()?;
    if !last.exp.is_successor() {
        return None;
    }
    if alpha.is_zero() {
        return Some((0, Ordinal::zero()));
    }
    let beta = last.exp.pred().ok()?;
    let mut gamma = terms[..terms.len() - 1].to_vec();
    if last.coeff > 1 {
        gamma.push(Term {
            exp: last.exp.clone(),
            coeff: last.coeff - 1,
        });
    }
    let gamma = Ordinal::from_terms(gamma).ok()?;
    // least n with γ + ω^β·n ≥ α
    let n = if alpha <= &gamma {
        0
    } else {
        // γ < α < λ, so α is γ's terms followed by some δ < ω^{β+1}
        let delta = &alpha.terms()[gamma.terms().len()..];
        match delta.first() {
            Some(t) if t.exp == beta => t.coeff + u64::from(delta.len() > 1),
            _ => 1,
        }
    };
    let element = gamma.plus(&Ordinal::monomial(beta, n));
    let index = if gamma.is_zero() { n } else { n + 1 };
    Some((index, element))
}

/// Upper and lower trace of a walk from `β` to `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub upper: Vec<Ordinal>,
    pub lower: Vec<Ordinal>,
}

struct Step {
    below_max: Option<Ordinal>,
}

/// Walks from `beta` to `alpha` (`alpha ≤ beta`), returning the visited
/// ordinals and, per step, the size and maximum of `C_{β_i} ∩ α`.
fn raw_walk(ladders: &Ladders, alpha: &Ordinal, beta: &Ordinal) -> (Vec<Ordinal>, Vec<Step>) {
    let mut upper = vec![beta.clone()];
    let mut steps = Vec::new();
    let mut current = beta.clone();
    while &current != alpha {
        let (count, next) = ladders.split(&current, alpha);
        let below_max = count.checked_sub(1).map(|i| ladders.element(&current, i).unwrap());
        steps.push(Step {
            below_max,
        });
        upper.push(next.clone());
        current = next;
    }
    (upper, steps)
}

fn check_range(alpha: &Ordinal, beta: &Ordinal) -> Result<(), WalkError> {
    if alpha.is_zero() {
        return Err(WalkError::OutOfRange("walks need α ≥ 1".into()));
    }
    if alpha > beta {
        return Err(WalkError::OutOfRange(format!("α = {alpha} exceeds β = {beta}")));
    }
    Ok(())
}

/// The walk from `beta` down to `alpha`, for `1 ≤ α ≤ β`.
///
/// `ξ_k` is the maximum of `⋃_{j≤k} C_{β_j} ∩ α`, with an empty union read
/// as `0`; successor steps contribute nothing to the union.
pub fn walk(ladders: &Ladders, alpha: &Ordinal, beta: &Ordinal) -> Result<WalkRecord, WalkError> {
    check_range(alpha, beta)?;
    let (upper, steps) = raw_walk(ladders, alpha, beta);
    let mut running: Option<Ordinal> = None;
    let lower = steps
        .into_iter()
        .map(|step| {
            if let Some(m) = step.below_max {
                if running.as_ref().is_none_or(|r| &m > r) {
                    running = Some(m);
                }
            }
            running.clone().unwrap_or_else(Ordinal::zero)
        })
        .collect();
    Ok(WalkRecord { upper, lower })
}

/// `ρ₁(ξ, β) = max(|C_β ∩ ξ|, ρ₁(ξ, min(C_β ∖ ξ)))`, `ρ₁(ξ, ξ) = 0`; used as
/// `e_β(ξ)` for `ξ < β`.
pub fn e_value(ladders: &Ladders, beta: &Ordinal, xi: &Ordinal) -> Result<u64, WalkError> {
    if xi >= beta {
        return Err(WalkError::OutOfRange(format!("e_β(ξ) needs ξ < β, got ξ = {xi}, β = {beta}")));
    }
    let mut current = beta.clone();
    let mut weight = 0;
    while &current != xi {
        let (count, next) = ladders.split(&current, xi);
        weight = weight.max(count);
        current = next;
    }
    Ok(weight)
}

/// Result of searching for `Δ(α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaOutcome {
    /// The least disagreement found in enumeration order.
    Found { xi: Ordinal, position: usize },
    /// No disagreement among the first `searched` ordinals below `α`. When
    /// `exhausted` is true every ordinal below `α` was checked and `Δ = α`.
    NoWitness { searched: usize, exhausted: bool },
}

/// `Δ(α, β)`: the least `ξ < α` with `e_α(ξ) ≠ e_β(ξ)`, searched over the
/// first `budget` ordinals of the level enumeration below `α`.
pub fn delta_ordinal(
    ladders: &Ladders,
    alpha: &Ordinal,
    beta: &Ordinal,
    budget: usize,
) -> Result<DeltaOutcome, WalkError> {
    if alpha >= beta {
        return Err(WalkError::OutOfRange(format!("Δ(α, β) needs α < β, got {alpha} ≥ {beta}")));
    }
    let (candidates, exhausted) = enumerate_below(alpha, budget);
    let mut best: Option<(Ordinal, usize)> = None;
    for (position, xi) in candidates.iter().enumerate() {
        if best.as_ref().is_some_and(|(b, _)| xi >= b) {
            continue;
        }
        if e_value(ladders, alpha, xi)? != e_value(ladders, beta, xi)? {
            best = Some((xi.clone(), position));
        }
    }
    Ok(match best {
        Some((xi, position)) => DeltaOutcome::Found { xi, position },
        None => DeltaOutcome::NoWitness {
            searched: candidates.len(),
            exhausted,
        },
    })
}

/// Moore's oscillation along the lower trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscReport {
    pub value: u64,
    pub osc_set: Vec<Ordinal>,
    pub lower: Vec<Ordinal>,
}

/// `osc(α, β)`: positions `i ≤ l-2` of `L(α, β)` with
/// `e_α(ξ_i) ≤ e_β(ξ_i)` and `e_α(ξ_{i+1}) > e_β(ξ_{i+1})`.
pub fn osc_ordinal(ladders: &Ladders, alpha: &Ordinal, beta: &Ordinal) -> Result<OscReport, WalkError> {
    check_range(alpha, beta)?;
    if alpha == beta {
        return Err(WalkError::OutOfRange("osc(α, β) needs α < β".into()));
    }
    let lower = walk(ladders, alpha, beta)?.lower;
    let below = lower
        .iter()
        .map(|xi| Ok(e_value(ladders, alpha, xi)? <= e_value(ladders, beta, xi)?))
        .collect::<Result<Vec<bool>, WalkError>>()?;
    let osc_set: Vec<Ordinal> = (0..lower.len().saturating_sub(1))
        .filter(|&i| below[i] && !below[i + 1])
        .map(|i| lower[i].clone())
        .collect();
    Ok(OscReport {
        value: osc_set.len() as u64,
        osc_set,
        lower,
    })
}

/// Outcome of checking one triple against the trace concatenation property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatVerdict {
    pub hypothesis: bool,
    /// `None` when the hypothesis fails.
    pub conclusion: Option<bool>,
}

/// `max L(β,γ) < min L(α,β)` implies `L(α,γ) = L(α,β) ∪ L(β,γ)`, for `α < β < γ`.
pub fn trace_concat(
    ladders: &Ladders,
    alpha: &Ordinal,
    beta: &Ordinal,
    gamma: &Ordinal,
) -> Result<ConcatVerdict, WalkError> {
    if alpha >= beta || beta >= gamma {
        return Err(WalkError::OutOfRange("need α < β < γ for nonempty lower traces".into()));
    }
    let ab = walk(ladders, alpha, beta)?.lower;
    let bg = walk(ladders, beta, gamma)?.lower;
    let ag = walk(ladders, alpha, gamma)?.lower;
    Ok(concat_verdict(&ab, &bg, &ag))
}

/// The verdict from precomputed lower traces `L(α,β)`, `L(β,γ)`, `L(α,γ)`.
pub fn concat_verdict(ab: &[Ordinal], bg: &[Ordinal], ag: &[Ordinal]) -> ConcatVerdict {
    let hypothesis = match (bg.iter().max(), ab.iter().min()) {
        (Some(hi), Some(lo)) => hi < lo,
        _ => false,
    };
    let conclusion = hypothesis.then(|| {
        let union: BTreeSet<&Ordinal> = ab.iter().chain(bg.iter()).collect();
        let whole: BTreeSet<&Ordinal> = ag.iter().collect();
        union == whole
    });
    ConcatVerdict {
        hypothesis,
        conclusion,
    }
}

/// A run of consecutive oscillation values from a single `α`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscRun {
    pub alpha: Option<Ordinal>,
    pub start_value: u64,
    /// `betas[m]` realizes `osc(α, β_m) = start_value + m`.
    pub betas: Vec<Ordinal>,
    pub target: usize,
    pub reached: bool,
}

/// Best-effort search for `α ∈ A` and `β_0, …, β_{r-1} ∈ B` above `α` with
/// `osc(α, β_m) = k₀ + m`; the longest run is reported, capped at `n`.
pub fn search_osc_run(
    ladders: &Ladders,
    a: &[Ordinal],
    b: &[Ordinal],
    n: usize,
) -> Result<OscRun, WalkError> {
    let mut best = OscRun {
        target: n,
        ..OscRun::default()
    };
    for alpha in a.iter().filter(|x| !x.is_zero()) {
        let mut by_value: BTreeMap<u64, Ordinal> = BTreeMap::new();
        for beta in b.iter().filter(|beta| *beta > alpha) {
            let v = osc_ordinal(ladders, alpha, beta)?.value;
            by_value.entry(v).or_insert_with(|| beta.clone());
        }
        let values: Vec<u64> = by_value.keys().copied().collect();
        let mut i = 0;
        while i < values.len() {
            let mut j = i + 1;
            while j < values.len() && values[j] == values[j - 1] + 1 && j - i < n {
                j += 1;
            }
            if j - i > best.betas.len() {
                best.alpha = Some(alpha.clone());
                best.start_value = values[i];
                best.betas = values[i..j].iter().map(|v| by_value[v].clone()).collect();
            }
            i = j;
        }
    }
    best.reached = n > 0 && best.betas.len() >= n;
    Ok(best)
}
