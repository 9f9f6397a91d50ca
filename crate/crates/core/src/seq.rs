//! Oscillation of increasing sequences and the colorings derived from it.
//!
//! `osc(s, t)` counts the positions where `s` goes from weakly below `t` to
//! strictly above it. On top of it sit the splitting extension that adds an
//! exact number of crossings, the refined color `π₀(e(i₀))` read off the top
//! binary digit of `osc`, and the rectangle color `c` driven by an
//! enumeration of finite rectangles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baire::{BaireError, TreeOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequences have different lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("the oscillation is zero, so the color is undefined")]
    ZeroOscillation,
    #[error("window too short: the rectangle needs length {need}, got {have}")]
    WindowTooShort { need: usize, have: usize },
    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("step budget {budget} exceeded: {needed} extension steps needed")]
    BudgetExceeded { budget: u64, needed: String },
    #[error("not strictly increasing: {0:?}")]
    NotIncreasing(Vec<u64>),
    #[error("cannot parse sequence {0:?}")]
    Parse(String),
    #[error(transparent)]
    Tree(#[from] BaireError),
}

/// A strictly increasing finite sequence of naturals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct IncreasingSeq(Vec<u64>);

impl IncreasingSeq {
    pub fn new(values: Vec<u64>) -> Result<Self, SeqError> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeqError::NotIncreasing(values));
        }
        Ok(Self(values))
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

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for IncreasingSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IncreasingSeq {
    type Err = SeqError;

    fn from_str(text: &str) -> Result<Self, SeqError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::default());
        }
        let values = text
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| SeqError::Parse(text.to_string())))
            .collect::<Result<Vec<u64>, _>>()?;
        Self::new(values)
    }
}

impl From<IncreasingSeq> for String {
    fn from(s: IncreasingSeq) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for IncreasingSeq {
    type Error = SeqError;
    fn try_from(s: String) -> Result<Self, SeqError> {
        s.parse()
    }
}

/// `|{n : s(n) ≤ t(n) ∧ s(n+1) > t(n+1)}|` over positions present in both.
pub fn osc_seq_common(s: &[u64], t: &[u64]) -> u64 {
    let len = s.len().min(t.len());
    (0..len.saturating_sub(1))
        .filter(|&n| s[n] <= t[n] && s[n + 1] > t[n + 1])
        .count() as u64
}

/// `osc(s, t)` for sequences of equal length.
pub fn osc_seq(s: &[u64], t: &[u64]) -> Result<u64, SeqError> {
    if s.len() != t.len() {
        return Err(SeqError::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    Ok(osc_seq_common(s, t))
}

/// A bijection `e: ℕ → ℕ × ℕ`.
pub trait PairingScheme: Send + Sync {
    fn pair(&self, a: u64, b: u64) -> u64;
    fn unpair(&self, m: u64) -> (u64, u64);
}

/// Cantor pairing `π(a, b) = (a+b)(a+b+1)/2 + b`; `e` is its inverse.
#[derive(Clone, Copy, Debug, Default)]
pub struct CantorPairing;

impl PairingScheme for CantorPairing {
    fn pair(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        s * (s + 1) / 2 + b
    }

    fn unpair(&self, m: u64) -> (u64, u64) {
        let m = m as u128;
        let w = ((8 * m + 1).sqrt() - 1) / 2;
        let b = m - w * (w + 1) / 2;
        ((w - b) as u64, b as u64)
    }
}

fn top_bit(v: u64) -> u64 {
    63 - v.leading_zeros() as u64
}

/// `π₀(e(i₀))` where `2^{i₀}` is the top binary digit of `osc(f, g)`.
pub fn refined_color(f: &[u64], g: &[u64], p: &dyn PairingScheme) -> Result<u64, SeqError> {
    let osc = osc_seq(f, g)?;
    if osc == 0 {
        return Err(SeqError::ZeroOscillation);
    }
    Ok(p.unpair(top_bit(osc)).0)
}

/// A finite rectangle `(t, D, E, k)`: `D, E` are sets of increasing
/// sequences of length `k` and `t: D × E → ℕ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RectangleJson", into = "RectangleJson")]
pub struct Rectangle {
    pub k: usize,
    pub d: BTreeSet<Vec<u64>>,
    pub e: BTreeSet<Vec<u64>>,
    pub t: BTreeMap<(Vec<u64>, Vec<u64>), u64>,
}

#[derive(Serialize, Deserialize)]
struct RectangleJson {
    k: usize,
    #[serde(rename = "D")]
    d: Vec<Vec<u64>>,
    #[serde(rename = "E")]
    e: Vec<Vec<u64>>,
    t: Vec<(Vec<u64>, Vec<u64>, u64)>,
}

impl From<Rectangle> for RectangleJson {
    fn from(r: Rectangle) -> Self {
        Self {
            k: r.k,
            d: r.d.into_iter().collect(),
            e: r.e.into_iter().collect(),
            t: r.t.into_iter().map(|((a, b), v)| (a, b, v)).collect(),
        }
    }
}

impl TryFrom<RectangleJson> for Rectangle {
    type Error = SeqError;
    fn try_from(j: RectangleJson) -> Result<Self, SeqError> {
        let r = Rectangle {
            k: j.k,
            d: j.d.into_iter().collect(),
            e: j.e.into_iter().collect(),
            t: j.t.into_iter().map(|(a, b, v)| ((a, b), v)).collect(),
        };
        r.validate()?;
        Ok(r)
    }
}

impl Rectangle {
    pub fn validate(&self) -> Result<(), SeqError> {
        let bad = |m: String| Err(SeqError::InvalidRectangle(m));
        for node in self.d.iter().chain(self.e.iter()) {
            if node.len() != self.k {
                return bad(format!("node {node:?} does not have length {}", self.k));
            }
            if node.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("node {node:?} is not strictly increasing"));
            }
        }
        if self.t.len() != self.d.len() * self.e.len() {
            return bad("t is not total on D × E".into());
        }
        for (a, b) in self.t.keys() {
            if !self.d.contains(a) || !self.e.contains(b) {
                return bad(format!("t is defined outside D × E at ({a:?}, {b:?})"));
            }
        }
        Ok(())
    }

    /// `t(f↾k, g↾k)` when both restrictions lie in the rectangle.
    pub fn value(&self, f: &[u64], g: &[u64]) -> Option<u64> {
        self.t.get(&(f[..self.k].to_vec(), g[..self.k].to_vec())).copied()
    }
}

fn push_gamma(bits: &mut Vec<bool>, x: u64) {
    // Elias gamma code of x + 1
    let v = x as u128 + 1;
    let len = 128 - v.leading_zeros() as usize;
    bits.extend(std::iter::repeat_n(false, len - 1));
    bits.extend((0..len).rev().map(|i| (v >> i) & 1 == 1));
}

fn read_gamma(bits: &[bool], pos: &mut usize) -> Option<u64> {
    let mut zeros = 0;
    while *bits.get(*pos)? == false {
        zeros += 1;
        *pos += 1;
    }
    if zeros > 64 {
        return None;
    }
    let mut v: u128 = 0;
    for _ in 0..=zeros {
        v = (v << 1) | (*bits.get(*pos)? as u128);
        *pos += 1;
    }
    u64::try_from(v - 1).ok()
}

/// Canonical index of a rectangle.
///
/// The list `[k, |D|, D…, |E|, E…, t in D×E order]` is written as
/// Elias gamma codes of `x + 1` behind a leading `1` bit and read as a
/// binary natural. Distinct rectangles get distinct indices.
pub fn rectangle_index(r: &Rectangle) -> Result<BigUint, SeqError> {
    r.validate()?;
    let mut bits = vec![true];
    push_gamma(&mut bits, r.k as u64);
    for set in [&r.d, &r.e] {
        push_gamma(&mut bits, set.len() as u64);
        for node in set {
            for &v in node {
                push_gamma(&mut bits, v);
            }
        }
    }
    for a in &r.d {
        for b in &r.e {
            push_gamma(&mut bits, r.t[&(a.clone(), b.clone())]);
        }
    }
    let mut n = BigUint::zero();
    for b in bits {
        n = (n << 1u32) + BigUint::from(b as u8);
    }
    Ok(n)
}

/// Inverse of [`rectangle_index`]; indices that are not canonical codes
/// decode to the empty rectangle.
pub fn decode_rectangle(index: &BigUint) -> Rectangle {
    try_decode(index).unwrap_or_default()
}

fn try_decode(index: &BigUint) -> Option<Rectangle> {
    if index.is_zero() {
        return None;
    }
    let nbits = index.bits();
    let bits: Vec<bool> = (0..nbits).rev().map(|i| index.bit(i)).collect();
    let mut pos = 1;
    let k = read_gamma(&bits, &mut pos)? as usize;
    let mut sets = Vec::new();
    for _ in 0..2 {
        let count = read_gamma(&bits, &mut pos)?;
        if count > (bits.len() as u64) {
            return None;
        }
        let mut set = Vec::new();
        for _ in 0..count {
            let node = (0..k).map(|_| read_gamma(&bits, &mut pos)).collect::<Option<Vec<_>>>()?;
            set.push(node);
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        sets.push(set);
    }
    let (d, e) = (sets.remove(0), sets.remove(0));
    let mut t = BTreeMap::new();
    for a in &d {
        for b in &e {
            t.insert((a.clone(), b.clone()), read_gamma(&bits, &mut pos)?);
        }
    }
    if pos != bits.len() {
        return None;
    }
    let r = Rectangle {
        k,
        d: d.into_iter().collect(),
        e: e.into_iter().collect(),
        t,
    };
    r.validate().ok()?;
    Some(r)
}

/// An enumeration `n ↦ (t_n, D_n, E_n, k_n)` of finite rectangles.
pub trait RectangleEnumeration: Send + Sync {
    fn rectangle(&self, n: u64) -> Rectangle;
}

/// Rectangle `n` is the one whose canonical index is `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalEnumeration;

impl RectangleEnumeration for CanonicalEnumeration {
    fn rectangle(&self, n: u64) -> Rectangle {
        decode_rectangle(&BigUint::from(n))
    }
}

/// The canonical enumeration with two universal rectangles placed first.
///
/// Index `0` holds the universal rectangle for `2×2` targets and index `1`
/// the one for `3×3` targets; neither index is a canonical code, so every
/// other rectangle keeps its canonical index.
#[derive(Debug, Default)]
pub struct SeededEnumeration {
    universal: [OnceLock<Rectangle>; 2],
}

impl SeededEnumeration {
    pub fn new() -> Self {
        Self::default()
    }

    /// The index holding the universal rectangle for `n×n` targets.
    pub fn index_for(n: usize) -> Option<u64> {
        match n {
            1 | 2 => Some(0),
            3 => Some(1),
            _ => None,
        }
    }
}

impl RectangleEnumeration for SeededEnumeration {
    fn rectangle(&self, n: u64) -> Rectangle {
        match n {
            0 => self.universal[0].get_or_init(|| universal_rectangle(2)).clone(),
            1 => self.universal[1].get_or_init(|| universal_rectangle(3)).clone(),
            _ => CanonicalEnumeration.rectangle(n),
        }
    }
}

fn row_code(n: usize, i: usize, row: &[u8]) -> u64 {
    let base = 4u64.pow(n as u32);
    let enc = row.iter().rev().fold(0u64, |acc, &v| acc * 4 + v as u64);
    i as u64 * base + enc
}

/// `D = E = {(i·4ⁿ + Σ row[j]·4^j)}` over `i < n` and rows in `{0..3}ⁿ`, with
/// `t(d, e) = row_d[j_e]` where `j_e = ⌊e / 4ⁿ⌋`.
pub fn universal_rectangle(n: usize) -> Rectangle {
    let base = 4u64.pow(n as u32);
    let codes: Vec<u64> = (0..n as u64 * base).collect();
    let row_of = |code: u64, j: u64| ((code % base) >> (2 * j)) & 3;
    let mut t = BTreeMap::new();
    for &a in &codes {
        for &b in &codes {
            t.insert((vec![a], vec![b]), row_of(a, b / base));
        }
    }
    let set: BTreeSet<Vec<u64>> = codes.iter().map(|&c| vec![c]).collect();
    Rectangle {
        k: 1,
        d: set.clone(),
        e: set,
        t,
    }
}

/// `c(f, g) = t_n(f↾k_n, g↾k_n)` when both restrictions lie in the rectangle
/// `n = o(f, g)`, and `0` otherwise.
pub fn final_color(
    f: &[u64],
    g: &[u64],
    rects: &dyn RectangleEnumeration,
    p: &dyn PairingScheme,
) -> Result<u64, SeqError> {
    let n = refined_color(f, g, p)?;
    let r = rects.rectangle(n);
    let have = f.len().min(g.len());
    if have < r.k {
        return Err(SeqError::WindowTooShort { need: r.k, have });
    }
    Ok(r.value(f, g).unwrap_or(0))
}

fn grow(tree: &dyn TreeOracle<u64>, node: &[u64], bound: Option<u64>) -> Result<Vec<u64>, SeqError> {
    let next = tree.large_extension(node, bound.as_ref())?;
    Ok(tree.least_splitting_above(&next)?)
}

/// Extends `node` with values above `bound` (and above itself) until it has
/// at least `len` entries.
fn grow_to(
    tree: &dyn TreeOracle<u64>,
    mut node: Vec<u64>,
    bound: Option<u64>,
    len: usize,
) -> Result<Vec<u64>, SeqError> {
    while node.len() < len {
        node = grow(tree, &node, bound)?;
    }
    Ok(node)
}

fn normalized(s: &[u64], t: &[u64]) -> bool {
    !s.is_empty() && s.len() < t.len() && s[s.len() - 1] <= t[s.len() - 1]
}

fn max_last<'a>(nodes: impl IntoIterator<Item = &'a Vec<u64>>) -> Option<u64> {
    nodes.into_iter().filter_map(|n| n.last().copied()).max()
}

/// Result of [`extend_splitting`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitExtension {
    pub s: Vec<u64>,
    pub t: Vec<u64>,
    /// `osc` of the starting splitting nodes on their common length.
    pub baseline: u64,
    pub osc: u64,
}

/// Extends ∞-splitting nodes `s ⊂ S`, `t ⊂ T` so that `osc` on the common
/// length grows by exactly `n`.
///
/// The pair is first brought to the shape `|s| < |t|` with
/// `s(|s|-1) ≤ t(|s|-1)` using extensions that dominate everything built so
/// far, which never adds a crossing. Each of the `n` rounds then extends `s`
/// above the last value of `t` and past its length, and `t` above the last
/// value of `s` and past its length: one crossing per round.
pub fn extend_splitting(
    tree_s: &dyn TreeOracle<u64>,
    tree_t: &dyn TreeOracle<u64>,
    s: &[u64],
    t: &[u64],
    n: u64,
) -> Result<SplitExtension, SeqError> {
    let mut s = tree_s.least_splitting_above(s)?;
    let mut t = tree_t.least_splitting_above(t)?;
    let baseline = osc_seq_common(&s, &t);
    if n > 0 && !normalized(&s, &t) {
        // s only ever gains positions where it is above t, after a position where it already was
        let top = |s: &[u64], t: &[u64]| s.last().copied().max(t.last().copied());
        if s.is_empty() {
            s = grow(tree_s, &s, top(&s, &t))?;
        }
        while s.len() <= t.len() {
            s = grow(tree_s, &s, top(&s, &t))?;
        }
        while t.len() <= s.len() {
            t = grow(tree_t, &t, top(&s, &t))?;
        }
    }
    for _ in 0..n {
        let u = grow(tree_s, &s, t.last().copied())?;
        let u = grow_to(tree_s, u, t.last().copied(), t.len() + 1)?;
        let v = grow(tree_t, &t, u.last().copied())?;
        let v = grow_to(tree_t, v, u.last().copied(), u.len() + 1)?;
        s = u;
        t = v;
    }
    let osc = osc_seq_common(&s, &t);
    Ok(SplitExtension { s, t, baseline, osc })
}

/// A run of the target-hitting construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetDemo {
    pub rectangle_index: u64,
    /// Top binary digit forced on every `osc(A(i), B(j))`.
    pub top_bit: u64,
    pub a: Vec<Vec<u64>>,
    pub b: Vec<Vec<u64>>,
    /// `colors[i][j] = c(A(i), B(j))`.
    pub colors: Vec<Vec<u64>>,
}

/// Builds `A(0..n)` in `S` and `B(0..n)` in `T` with `c(A(i), B(j)) = u[i][j]`
/// under [`SeededEnumeration`], for `n ≤ 3` and values in `{0..3}`.
///
/// The first entries pin `A(i)↾1` and `B(j)↾1` inside the universal rectangle;
/// then all pairs are normalized at once and driven through `2^m` joint
/// crossing rounds, where `m` is the least exponent above every baseline
/// `osc(A(i), B(j))` with `π₀(e(m))` equal to the rectangle's index.
pub fn hit_target(
    tree_s: &dyn TreeOracle<u64>,
    tree_t: &dyn TreeOracle<u64>,
    u: &[Vec<u8>],
    p: &dyn PairingScheme,
    max_steps: u64,
) -> Result<TargetDemo, SeqError> {
    let n = u.len();
    let index = SeededEnumeration::index_for(n)
        .ok_or_else(|| SeqError::PreconditionViolated(format!("targets must be n×n with 1 ≤ n ≤ 3, got n = {n}")))?;
    if u.iter().any(|row| row.len() != n || row.iter().any(|&v| v > 3)) {
        return Err(SeqError::PreconditionViolated("target must be square with values in 0..=3".into()));
    }
    let width = if index == 0 { 2 } else { 3 };
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = u[i].clone();
            row.resize(width, 0);
            vec![row_code(width, i, &row)]
        })
        .collect();
    let mut b: Vec<Vec<u64>> = (0..n).map(|j| vec![row_code(width, j, &vec![0; width])]).collect();
    for (node, tree) in a.iter().map(|x| (x, tree_s)).chain(b.iter().map(|x| (x, tree_t))) {
        if !tree.is_member(node) {
            return Err(SeqError::PreconditionViolated(format!("{node:?} is not in the tree")));
        }
    }
    a = a.iter().map(|x| tree_s.least_splitting_above(x)).collect::<Result<_, _>>()?;
    b = b.iter().map(|x| tree_t.least_splitting_above(x)).collect::<Result<_, _>>()?;
    if a.iter().chain(b.iter()).any(|x| x.len() != 1) {
        return Err(SeqError::PreconditionViolated("pinned first entries must be splitting nodes".into()));
    }

    // normalize: every A strictly longer than every B, then every B longer than every A
    let longest = |xs: &[Vec<u64>]| xs.iter().map(Vec::len).max().unwrap_or(0);
    let top = max_last(a.iter().chain(b.iter()));
    let target = longest(&b) + 1;
    a = a.into_iter().map(|x| grow_to(tree_s, x, top, target)).collect::<Result<_, _>>()?;
    let top = max_last(a.iter().chain(b.iter()));
    let target = longest(&a) + 1;
    b = b.into_iter().map(|x| grow_to(tree_t, x, top, target)).collect::<Result<_, _>>()?;

    let baseline = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| osc_seq_common(x, y)))
        .max()
        .unwrap_or(0);
    let mut m = 0;
    while p.unpair(m).0 != index || (1u64 << m) <= baseline {
        m += 1;
    }
    let steps = 1u64 << m;
    if steps > max_steps {
        return Err(SeqError::BudgetExceeded {
            budget: max_steps,
            needed: steps.to_string(),
        });
    }
    for _ in 0..steps {
        let bound = max_last(b.iter());
        let target = longest(&b) + 1;
        a = a
            .into_iter()
            .map(|x| grow(tree_s, &x, bound).and_then(|x| grow_to(tree_s, x, bound, target)))
            .collect::<Result<_, _>>()?;
        let bound = max_last(a.iter());
        let target = longest(&a) + 1;
        b = b
            .into_iter()
            .map(|y| grow(tree_t, &y, bound).and_then(|y| grow_to(tree_t, y, bound, target)))
            .collect::<Result<_, _>>()?;
    }
    let rects = SeededEnumeration::new();
    let colors = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| {
                    let len = x.len().min(y.len());
                    final_color(&x[..len], &y[..len], &rects, p)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TargetDemo {
        rectangle_index: index,
        top_bit: m,
        a,
        b,
        colors,
    })
}

/// With the plain canonical enumeration: the smallest canonical index of a
/// rectangle able to carry `u`, and the least top binary digit `m` with
/// `π₀(e(m))` equal to it. Hitting `u` would take `2^m` crossings.
pub fn canonical_requirement(u: &[Vec<u8>]) -> Result<(BigUint, BigUint), SeqError> {
    let n = u.len();
    let nodes: BTreeSet<Vec<u64>> = (0..n as u64).map(|i| vec![i]).collect();
    let mut t = BTreeMap::new();
    for (i, row) in u.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t.insert((vec![i as u64], vec![j as u64]), v as u64);
        }
    }
    let rect = Rectangle {
        k: 1,
        d: nodes.clone(),
        e: nodes,
        t,
    };
    let index = rectangle_index(&rect)?;
    // least m with π₀(e(m)) = N is π(N, 0) = N(N+1)/2
    let m = &index * (&index + BigUint::one()) / BigUint::from(2u8);
    Ok((index, m))
}

/// Convenience: `m` as a `u64` when it fits.
pub fn small(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baire::FullTree;

    #[test]
    fn osc_seq_examples() {
        assert_eq!(osc_seq(&[1, 4, 5, 9], &[2, 3, 7, 8]), Ok(2));
        assert_eq!(osc_seq(&[1, 2, 3], &[1, 2, 3]), Ok(0));
        assert!(matches!(osc_seq(&[1], &[1, 2]), Err(SeqError::LengthMismatch { .. })));
    }

    #[test]
    fn cantor_pairing_round_trip() {
        let p = CantorPairing;
        for a in 0..60 {
            for b in 0..60 {
                assert_eq!(p.unpair(p.pair(a, b)), (a, b));
            }
        }
        assert_eq!(p.unpair(2), (0, 1));
        assert_eq!(p.unpair(0), (0, 0));
    }

    #[test]
    fn refined_color_examples() {
        let p = CantorPairing;
        // a single crossing: top bit 0, e(0) = (0, 0)
        assert_eq!(refined_color(&[1, 5], &[2, 3], &p), Ok(0));
        assert_eq!(refined_color(&[1, 2], &[1, 2], &p), Err(SeqError::ZeroOscillation));
    }

    #[test]
    fn empty_rectangle_has_fixed_index() {
        assert_eq!(rectangle_index(&Rectangle::default()).unwrap(), BigUint::from(15u8));
        assert_eq!(decode_rectangle(&BigUint::from(15u8)), Rectangle::default());
        assert_eq!(decode_rectangle(&BigUint::from(3u8)), Rectangle::default());
    }

    #[test]
    fn final_color_branches() {
        let p = CantorPairing;
        let canon = CanonicalEnumeration;
        // osc = 1 points at rectangle 0, which is empty under the canonical enumeration
        assert_eq!(final_color(&[1, 5], &[2, 3], &canon, &p), Ok(0));
        let seeded = SeededEnumeration::new();
        // rectangle 0 is the universal 2×2 one (k = 1); its D has codes < 32
        assert_eq!(final_color(&[40, 50], &[41, 42], &seeded, &p), Ok(0));
        assert_eq!(
            final_color(&[1], &[2], &seeded, &p),
            Err(SeqError::ZeroOscillation)
        );
    }

    #[test]
    fn extend_splitting_zero_and_one() {
        let full = FullTree;
        let r = extend_splitting(&full, &full, &[3, 8], &[4, 6], 0).unwrap();
        assert_eq!((r.s, r.t), (vec![3, 8], vec![4, 6]));
        assert_eq!(r.osc, r.baseline);
        let r = extend_splitting(&full, &full, &[3, 8], &[4, 6], 1).unwrap();
        assert_eq!(r.osc, r.baseline + 1);
        let r = extend_splitting(&full, &full, &[], &[], 5).unwrap();
        assert_eq!(r.osc, 5);
    }

    #[test]
    fn hit_one_target() {
        let full = FullTree;
        let u = vec![vec![3, 1], vec![0, 2]];
        let demo = hit_target(&full, &full, &u, &CantorPairing, 1 << 10).unwrap();
        assert_eq!(demo.colors, vec![vec![3, 1], vec![0, 2]]);
    }

    #[test]
    fn canonical_route_is_out_of_reach() {
        let (index, m) = canonical_requirement(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(index > BigUint::from(1u64 << 20));
        assert!(m > index);
    }
}
