//! Oscillation of finite sets of naturals.
//!
//! Two finite sets `s, t` oscillate once for every maximal run of consecutive
//! integers lying entirely on one side of `s △ t`. On top of that this module
//! provides the continuous three-set variant `osc₃`, a truncated
//! Cantor–Bendixson derivative over intensional families, and the
//! constructive realization of the values `1..=2k-1` from a depth-`k`
//! derivative certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiniteError {
    #[error("Δ(s, t) is undefined for equal sets")]
    EqualSets,
    #[error("osc₃ needs pairwise distinct sets")]
    NotDistinct,
    #[error("elements must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<u64>),
    #[error("cannot parse set {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid family descriptor {0:?}")]
    BadDescriptor(String),
    #[error("cannot read family file {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("no certificate of depth {depth} found within {budget} search nodes")]
    SearchExhausted { depth: usize, budget: usize },
}

/// A finite set of naturals, stored as its strictly increasing enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FiniteNatSet(Vec<u64>);

/// Which side of a symmetric difference an element came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl FiniteNatSet {
    pub fn new(elements: Vec<u64>) -> Result<Self, FiniteError> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FiniteError::NotIncreasing(elements));
        }
        Ok(Self(elements))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// `sup(s)`, with `sup(∅) = 0`.
    pub fn sup(&self) -> u64 {
        self.max().unwrap_or(0)
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    /// `s ∩ n`, i.e. the elements below `n`.
    pub fn below(&self, n: u64) -> Self {
        let cut = self.0.partition_point(|&x| x < n);
        Self(self.0[..cut].to_vec())
    }

    /// `self ⊑ other`: `self` is an initial segment of `other`'s enumeration.
    pub fn is_initial_segment_of(&self, other: &Self) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Elements of `self` that follow the prefix `base`; `None` unless `base ⊑ self`.
    pub fn tail_after(&self, base: &Self) -> Option<&[u64]> {
        base.is_initial_segment_of(self).then(|| &self.0[base.len()..])
    }

    pub fn union(&self, other: &Self) -> Self {
        let merged: BTreeSet<u64> = self.0.iter().chain(other.0.iter()).copied().collect();
        Self(merged.into_iter().collect())
    }

    /// Merged enumeration of `self △ other`, each element tagged with its side.
    pub fn symmetric_difference(&self, other: &Self) -> Vec<(u64, Side)> {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x < y => {
                    out.push((x, Side::Left));
                    i += 1;
                }
                (Some(&x), None) => {
                    out.push((x, Side::Left));
                    i += 1;
                }
                (_, Some(&y)) => {
                    out.push((y, Side::Right));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }
}

impl From<FiniteNatSet> for String {
    fn from(s: FiniteNatSet) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for FiniteNatSet {
    type Error = FiniteError;
    fn try_from(s: String) -> Result<Self, FiniteError> {
        s.parse()
    }
}

impl FromIterator<u64> for FiniteNatSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let set: BTreeSet<u64> = iter.into_iter().collect();
        Self(set.into_iter().collect())
    }
}

impl fmt::Display for FiniteNatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

impl FromStr for FiniteNatSet {
    type Err = FiniteError;

    /// Comma-separated ascending naturals; the empty string is `∅`.
    fn from_str(text: &str) -> Result<Self, FiniteError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Self::empty());
        }
        let elements = trimmed
            .split(',')
            .map(|part| {
                part.trim().parse::<u64>().map_err(|e| FiniteError::Parse {
                    text: text.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(elements)
    }
}

/// `osc(s, t)`: the number of `∼`-classes of `s △ t`.
///
/// Two elements are equivalent when the whole integer interval between them
/// lies in `s ∖ t` or in `t ∖ s`, so classes are maximal runs of consecutive
/// integers taken from a single side.
pub fn osc(s: &FiniteNatSet, t: &FiniteNatSet) -> u64 {
    let diff = s.symmetric_difference(t);
    let mut classes = 0;
    let mut prev: Option<(u64, Side)> = None;
    for &(x, side) in &diff {
        match prev {
            Some((p, ps)) if ps == side && p + 1 == x => {}
            _ => classes += 1,
        }
        prev = Some((x, side));
    }
    classes
}

/// `Δ(s, t) = min(s △ t)`.
pub fn delta(s: &FiniteNatSet, t: &FiniteNatSet) -> Result<u64, FiniteError> {
    s.symmetric_difference(t)
        .first()
        .map(|&(x, _)| x)
        .ok_or(FiniteError::EqualSets)
}

/// `Δ(s, t, u)`: the largest of the three pairwise `Δ`s.
pub fn delta3(s: &FiniteNatSet, t: &FiniteNatSet, u: &FiniteNatSet) -> Result<u64, FiniteError> {
    let pair = |a, b| delta(a, b).map_err(|_| FiniteError::NotDistinct);
    Ok(pair(s, t)?.max(pair(t, u)?).max(pair(s, u)?))
}

/// `osc₃(s, t, u)`: `osc` of the two distinct traces `{s∩n, t∩n, u∩n}` at
/// `n = Δ(s, t, u)`.
pub fn osc_triple(s: &FiniteNatSet, t: &FiniteNatSet, u: &FiniteNatSet) -> Result<u64, FiniteError> {
    let n = delta3(s, t, u)?;
    let traces: BTreeSet<FiniteNatSet> = [s.below(n), t.below(n), u.below(n)].into_iter().collect();
    let traces: Vec<_> = traces.into_iter().collect();
    debug_assert_eq!(traces.len(), 2, "three distinct sets leave exactly two traces below Δ₃");
    Ok(osc(&traces[0], &traces[1]))
}

/// An intensional family `X ⊆ [ℕ]^{<ω}` whose members use elements `≤ element_bound()`.
pub trait Family: Send + Sync {
    fn contains(&self, s: &FiniteNatSet) -> bool;

    fn element_bound(&self) -> u64;

    /// Members `t ≠ s` with `t ∩ n = s`, cheapest first.
    fn extensions<'a>(
        &'a self,
        s: &'a FiniteNatSet,
        n: u64,
    ) -> Box<dyn Iterator<Item = FiniteNatSet> + 'a>;
}

/// `[{0..M}]^{≤k}`: every set of at most `k` elements, each at most `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalFamily {
    pub k: usize,
    pub bound: u64,
}

impl CanonicalFamily {
    pub fn new(k: usize, bound: u64) -> Self {
        Self { k, bound }
    }
}

impl Family for CanonicalFamily {
    fn contains(&self, s: &FiniteNatSet) -> bool {
        s.len() <= self.k && s.max().is_none_or(|m| m <= self.bound)
    }

    fn element_bound(&self) -> u64 {
        self.bound
    }

    fn extensions<'a>(
        &'a self,
        s: &'a FiniteNatSet,
        n: u64,
    ) -> Box<dyn Iterator<Item = FiniteNatSet> + 'a> {
        let room = self.k.saturating_sub(s.len());
        let lo = n.max(s.max().map_or(0, |m| m + 1));
        if room == 0 || lo > self.bound {
            return Box::new(std::iter::empty());
        }
        Box::new((1..=room).flat_map(move |size| {
            (lo..=self.bound).combinations(size).map(move |extra| {
                let mut elems = s.as_slice().to_vec();
                elems.extend(extra);
                FiniteNatSet(elems)
            })
        }))
    }
}

/// A family given by an explicit list of members.
#[derive(Clone, Debug, Default)]
pub struct ExplicitFamily {
    members: BTreeSet<FiniteNatSet>,
    bound: u64,
}

impl ExplicitFamily {
    pub fn new(members: impl IntoIterator<Item = FiniteNatSet>) -> Self {
        let members: BTreeSet<_> = members.into_iter().collect();
        let bound = members.iter().filter_map(FiniteNatSet::max).max().unwrap_or(0);
        Self { members, bound }
    }

    /// One set per line, in the comma-separated text form; `#` starts a comment.
    pub fn parse_list(text: &str) -> Result<Self, FiniteError> {
        let members = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .map(str::parse)
            .collect::<Result<Vec<FiniteNatSet>, _>>()?;
        Ok(Self::new(members))
    }

    pub fn load(path: &Path) -> Result<Self, FiniteError> {
        let text = std::fs::read_to_string(path).map_err(|e| FiniteError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse_list(&text)
    }

    pub fn members(&self) -> impl Iterator<Item = &FiniteNatSet> {
        self.members.iter()
    }
}

impl Family for ExplicitFamily {
    fn contains(&self, s: &FiniteNatSet) -> bool {
        self.members.contains(s)
    }

    fn element_bound(&self) -> u64 {
        self.bound
    }

    fn extensions<'a>(
        &'a self,
        s: &'a FiniteNatSet,
        n: u64,
    ) -> Box<dyn Iterator<Item = FiniteNatSet> + 'a> {
        Box::new(
            self.members
                .iter()
                .filter(move |t| match t.tail_after(s) {
                    Some(tail) => tail.first().is_some_and(|&x| x >= n),
                    None => false,
                })
                .cloned(),
        )
    }
}

/// Truncated closure test: is `s` a limit of `X ∖ {s}`?
///
/// Holds iff for every `n` with `sup(s) < n ≤ M` some member `t ≠ s` has
/// `t ∩ n = s`. A witness for `n` is a witness for every smaller `n`, so only
/// `n = M` has to be searched. Sets with nothing to quantify over (`sup(s) ≥ M`)
/// are not limits.
pub fn in_closure(s: &FiniteNatSet, family: &dyn Family) -> bool {
    let bound = family.element_bound();
    let lowest = if s.is_empty() { 1 } else { s.sup() + 1 };
    if lowest > bound {
        return false;
    }
    family.extensions(s, bound).next().is_some()
}

/// One application of the truncated derivative `δ(X)`.
///
/// Members keep `X`'s membership test plus the closure test; the element bound
/// drops by one so that every member still has room for a witness above it.
pub struct Derivative {
    base: Arc<dyn Family>,
    bound: u64,
    memo: Mutex<HashMap<FiniteNatSet, bool>>,
}

impl Derivative {
    pub fn new(base: Arc<dyn Family>) -> Self {
        let bound = base.element_bound().saturating_sub(1);
        Self {
            base,
            bound,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl Family for Derivative {
    fn contains(&self, s: &FiniteNatSet) -> bool {
        if let Some(&hit) = self.memo.lock().expect("memo poisoned").get(s) {
            return hit;
        }
        let verdict = self.base.contains(s) && in_closure(s, self.base.as_ref());
        self.memo
            .lock()
            .expect("memo poisoned")
            .insert(s.clone(), verdict);
        verdict
    }

    fn element_bound(&self) -> u64 {
        self.bound
    }

    fn extensions<'a>(
        &'a self,
        s: &'a FiniteNatSet,
        n: u64,
    ) -> Box<dyn Iterator<Item = FiniteNatSet> + 'a> {
        Box::new(self.base.extensions(s, n).filter(move |t| self.contains(t)))
    }
}

/// `δ^k(X)` with the truncated closure; `δ⁰(X) = X`.
pub fn truncated_derivative(family: Arc<dyn Family>, k: usize) -> Arc<dyn Family> {
    (0..k).fold(family, |acc, _| Arc::new(Derivative::new(acc)) as Arc<dyn Family>)
}

/// The chain `δ⁰(X), δ¹(X), …, δ^k(X)`.
pub fn derivative_tower(family: Arc<dyn Family>, k: usize) -> Vec<Arc<dyn Family>> {
    let mut tower = vec![family];
    for _ in 0..k {
        let next = Arc::new(Derivative::new(tower.last().unwrap().clone())) as Arc<dyn Family>;
        tower.push(next);
    }
    tower
}

/// The recursive choices behind a depth-`k` realization: `t_0 = u_0 = root`,
/// `t_i, u_i ∈ δ^{k-i}(X)` for `1 ≤ i ≤ k`, both chains strictly growing and
/// the new blocks interleaved `t_i∖t_{i-1} < u_i∖u_{i-1} < t_{i+1}∖t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeCertificate {
    pub root: FiniteNatSet,
    pub depth: usize,
    /// `t[i - 1]` is `t_i`.
    pub t: Vec<FiniteNatSet>,
    /// `u[i - 1]` is `u_i`.
    pub u: Vec<FiniteNatSet>,
}

impl DerivativeCertificate {
    fn t_at(&self, i: usize) -> &FiniteNatSet {
        if i == 0 {
            &self.root
        } else {
            &self.t[i - 1]
        }
    }

    fn u_at(&self, i: usize) -> &FiniteNatSet {
        if i == 0 {
            &self.root
        } else {
            &self.u[i - 1]
        }
    }

    /// Checks membership of every witness and the interleaving conditions.
    ///
    /// Each new block must also be a run of consecutive integers: a block with
    /// a gap would split into several classes and the counts would overshoot.
    pub fn validate(&self, family: Arc<dyn Family>) -> Result<(), FiniteError> {
        let bad = |msg: String| Err(FiniteError::InvalidCertificate(msg));
        let k = self.depth;
        if k == 0 {
            return bad("depth must be positive".into());
        }
        if self.t.len() != k || self.u.len() != k {
            return bad(format!(
                "expected {k} t- and u-witnesses, got {} and {}",
                self.t.len(),
                self.u.len()
            ));
        }
        let tower = derivative_tower(family, k);
        if !tower[k].contains(&self.root) {
            return bad(format!("root {{{}}} is not in δ^{k}(X)", self.root));
        }
        let mut previous_block_end: Option<u64> = None;
        for i in 1..=k {
            let level = &tower[k - i];
            for (name, prev, cur) in [
                ("t", self.t_at(i - 1), self.t_at(i)),
                ("u", self.u_at(i - 1), self.u_at(i)),
            ] {
                if !level.contains(cur) {
                    return bad(format!("{name}_{i} = {{{cur}}} is not in δ^{}(X)", k - i));
                }
                let Some(block) = cur.tail_after(prev).filter(|b| !b.is_empty()) else {
                    return bad(format!("{name}_{} is not a proper initial segment of {name}_{i}", i - 1));
                };
                if block.windows(2).any(|w| w[1] != w[0] + 1) {
                    return bad(format!("block {name}_{i}∖{name}_{} is not a run", i - 1));
                }
                if previous_block_end.is_some_and(|end| block[0] <= end) {
                    return bad(format!("block {name}_{i}∖{name}_{} breaks the interleaving", i - 1));
                }
                previous_block_end = block.last().copied();
            }
        }
        Ok(())
    }
}

/// Certificate for `[{0..M}]^{≤k}` rooted at `∅` with singleton blocks
/// `t_i∖t_{i-1} = {2i-2}` and `u_i∖u_{i-1} = {2i-1}`.
pub fn canonical_certificate(k: usize) -> DerivativeCertificate {
    let t = (1..=k as u64).map(|i| (0..i).map(|j| 2 * j).collect()).collect();
    let u = (1..=k as u64).map(|i| (0..i).map(|j| 2 * j + 1).collect()).collect();
    DerivativeCertificate {
        root: FiniteNatSet::empty(),
        depth: k,
        t,
        u,
    }
}

/// Depth-first search for a certificate rooted at `root`, exploring at most
/// `budget` candidate witnesses.
pub fn search_certificate(
    family: Arc<dyn Family>,
    depth: usize,
    root: &FiniteNatSet,
    budget: usize,
) -> Result<DerivativeCertificate, FiniteError> {
    let tower = derivative_tower(family, depth);
    if depth == 0 || !tower[depth].contains(root) {
        return Err(FiniteError::SearchExhausted { depth, budget });
    }
    let mut cert = DerivativeCertificate {
        root: root.clone(),
        depth,
        t: Vec::new(),
        u: Vec::new(),
    };
    let mut explored = 0;
    if extend_certificate(&tower, &mut cert, 1, &mut explored, budget) {
        Ok(cert)
    } else {
        Err(FiniteError::SearchExhausted { depth, budget })
    }
}

fn extend_certificate(
    tower: &[Arc<dyn Family>],
    cert: &mut DerivativeCertificate,
    i: usize,
    explored: &mut usize,
    budget: usize,
) -> bool {
    let k = cert.depth;
    if i > k {
        return true;
    }
    let level = &tower[k - i];
    let base = &tower[0];
    let t_prev = cert.t_at(i - 1).clone();
    let u_prev = cert.u_at(i - 1).clone();
    let floor_t = if i == 1 { FiniteNatSet::max(&cert.root).map_or(0, |m| m + 1) } else { u_prev.sup() + 1 };
    let t_candidates: Vec<FiniteNatSet> = base
        .extensions(&t_prev, floor_t)
        .filter(|c| is_run(c.tail_after(&t_prev).unwrap_or(&[])))
        .take(budget)
        .collect();
    for t_i in t_candidates {
        *explored += 1;
        if *explored > budget {
            return false;
        }
        if !level.contains(&t_i) {
            continue;
        }
        let floor_u = t_i.sup() + 1;
        let u_candidates: Vec<FiniteNatSet> = base
            .extensions(&u_prev, floor_u)
            .filter(|c| is_run(c.tail_after(&u_prev).unwrap_or(&[])))
            .take(budget)
            .collect();
        for u_i in u_candidates {
            *explored += 1;
            if *explored > budget {
                return false;
            }
            if !level.contains(&u_i) {
                continue;
            }
            cert.t.push(t_i.clone());
            cert.u.push(u_i);
            if extend_certificate(tower, cert, i + 1, explored, budget) {
                return true;
            }
            cert.t.pop();
            cert.u.pop();
        }
    }
    false
}

fn is_run(block: &[u64]) -> bool {
    !block.is_empty() && block.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Pairs of members realizing every value `1..=2k-1` of `osc`:
/// `osc(t_j, u_{j-1}) = 2j-1` and `osc(t_j, u_j) = 2j`.
pub fn realize_oscillations(
    family: Arc<dyn Family>,
    cert: &DerivativeCertificate,
) -> Result<BTreeMap<u64, (FiniteNatSet, FiniteNatSet)>, FiniteError> {
    cert.validate(family)?;
    let k = cert.depth;
    let mut out = BTreeMap::new();
    for j in 1..=k {
        out.insert(2 * j as u64 - 1, (cert.t_at(j).clone(), cert.u_at(j - 1).clone()));
        if j < k {
            out.insert(2 * j as u64, (cert.t_at(j).clone(), cert.u_at(j).clone()));
        }
    }
    for (&v, (a, b)) in &out {
        if osc(a, b) != v {
            return Err(FiniteError::InvalidCertificate(format!(
                "pair for {v} oscillates {} times",
                osc(a, b)
            )));
        }
    }
    Ok(out)
}

/// Triples of members realizing every value `1..=2k-1` of `osc₃`.
///
/// The third set extends one of the other two past every disagreement, so
/// `Δ₃` lands just above the pair being measured.
pub fn realize_osc_triple(
    family: Arc<dyn Family>,
    cert: &DerivativeCertificate,
) -> Result<BTreeMap<u64, (FiniteNatSet, FiniteNatSet, FiniteNatSet)>, FiniteError> {
    cert.validate(family)?;
    let k = cert.depth;
    let mut out = BTreeMap::new();
    for j in 1..=k {
        out.insert(
            2 * j as u64 - 1,
            (cert.t_at(j).clone(), cert.u_at(j - 1).clone(), cert.u_at(j).clone()),
        );
        if j < k {
            out.insert(
                2 * j as u64,
                (cert.t_at(j).clone(), cert.u_at(j).clone(), cert.t_at(j + 1).clone()),
            );
        }
    }
    for (&v, (a, b, c)) in &out {
        let got = osc_triple(a, b, c)?;
        if got != v {
            return Err(FiniteError::InvalidCertificate(format!("triple for {v} gives osc₃ = {got}")));
        }
    }
    Ok(out)
}

/// Parsed `canonical:k=<int>,M=<int>` or `explicit:<path>` descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyDescriptor {
    Canonical { k: usize, bound: u64 },
    Explicit(std::path::PathBuf),
}

impl FromStr for FamilyDescriptor {
    type Err = FiniteError;

    fn from_str(text: &str) -> Result<Self, FiniteError> {
        let bad = || FiniteError::BadDescriptor(text.to_string());
        if let Some(path) = text.strip_prefix("explicit:") {
            return Ok(Self::Explicit(path.into()));
        }
        let params = text.strip_prefix("canonical:").ok_or_else(bad)?;
        let (mut k, mut bound) = (None, None);
        for kv in params.split(',') {
            let (key, value) = kv.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "k" => k = Some(value.trim().parse().map_err(|_| bad())?),
                "M" => bound = Some(value.trim().parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(Self::Canonical {
            k: k.ok_or_else(bad)?,
            bound: bound.ok_or_else(bad)?,
        })
    }
}

impl FamilyDescriptor {
    pub fn build(&self) -> Result<Arc<dyn Family>, FiniteError> {
        Ok(match self {
            Self::Canonical { k, bound } => Arc::new(CanonicalFamily::new(*k, *bound)),
            Self::Explicit(path) => Arc::new(ExplicitFamily::load(path)?),
        })
    }
}
