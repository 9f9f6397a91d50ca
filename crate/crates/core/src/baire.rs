//! Triple oscillations of infinite increasing sequences, superperfect tree
//! oracles and the perfect-to-superperfect map.
//!
//! Infinite objects are handled through finite windows and on-demand
//! streams. Every search that could diverge carries an explicit budget.

use std::collections::BTreeSet;
use std::fmt::{self, Debug};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaireError {
    #[error("tree oracle could not answer: {0}")]
    OracleFailure(String),
    #[error("search budget of {budget} exceeded while {context}")]
    SearchBudgetExceeded { budget: u64, context: String },
    #[error("invalid prefix triple: {0}")]
    InvalidPrefix(String),
    #[error("cannot parse {what} {text:?}")]
    Parse { what: &'static str, text: String },
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

/// A totally ordered index type with a least element and a way to jump
/// strictly above any given index.
pub trait IndexDomain: Ord + Clone + Debug + Send + Sync {
    fn least() -> Self;

    /// Some index strictly above `self`; trees use it as their default large
    /// extension.
    fn jump_above(&self) -> Self;
}

impl IndexDomain for u64 {
    fn least() -> Self {
        0
    }

    fn jump_above(&self) -> Self {
        self + 1
    }
}

/// Ordinal indices jump to the next limit, so a run over ordinals below `ω²`
/// visits only multiples of `ω`.
impl IndexDomain for Ordinal {
    fn least() -> Self {
        Ordinal::zero()
    }

    fn jump_above(&self) -> Self {
        self.next_limit()
    }
}

/// Intensional tree of strictly increasing sequences.
pub trait TreeOracle<I: IndexDomain>: Send + Sync {
    fn is_member(&self, node: &[I]) -> bool;

    /// An ∞-splitting node extending `node`.
    fn least_splitting_above(&self, node: &[I]) -> Result<Vec<I>, BaireError>;

    /// A one-step extension of `node` whose new value exceeds `bound` (any
    /// value when `bound` is `None`).
    fn large_extension(&self, node: &[I], bound: Option<&I>) -> Result<Vec<I>, BaireError>;
}

fn floor_for<'a, I: IndexDomain>(node: &'a [I], bound: Option<&'a I>) -> Option<&'a I> {
    match (node.last(), bound) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

fn is_increasing<I: Ord>(node: &[I]) -> bool {
    node.windows(2).all(|w| w[0] < w[1])
}

/// All strictly increasing sequences; every node is ∞-splitting.
#[derive(Clone, Copy, Debug, Default)]
pub struct FullTree;

impl<I: IndexDomain> TreeOracle<I> for FullTree {
    fn is_member(&self, node: &[I]) -> bool {
        is_increasing(node)
    }

    fn least_splitting_above(&self, node: &[I]) -> Result<Vec<I>, BaireError> {
        Ok(node.to_vec())
    }

    fn large_extension(&self, node: &[I], bound: Option<&I>) -> Result<Vec<I>, BaireError> {
        let value = floor_for(node, bound).map_or_else(I::least, I::jump_above);
        let mut out = node.to_vec();
        out.push(value);
        Ok(out)
    }
}

/// Strictly increasing sequences of even naturals.
#[derive(Clone, Copy, Debug, Default)]
pub struct EvenTree;

impl TreeOracle<u64> for EvenTree {
    fn is_member(&self, node: &[u64]) -> bool {
        is_increasing(node) && node.iter().all(|x| x % 2 == 0)
    }

    fn least_splitting_above(&self, node: &[u64]) -> Result<Vec<u64>, BaireError> {
        if !self.is_member(node) {
            return Err(BaireError::OracleFailure(format!("{node:?} is not in the even tree")));
        }
        Ok(node.to_vec())
    }

    fn large_extension(&self, node: &[u64], bound: Option<&u64>) -> Result<Vec<u64>, BaireError> {
        let value = match floor_for(node, bound) {
            None => 0,
            Some(&f) => f + 2 - f % 2,
        };
        let mut out = node.to_vec();
        out.push(value);
        Ok(out)
    }
}

/// A finite tree given by a list of nodes, closed under initial segments.
///
/// A finite tree cannot be ∞-splitting, so a node counts as splitting when
/// it has a child, and queries that run past the listed nodes fail with
/// [`BaireError::OracleFailure`].
#[derive(Clone, Debug, Default)]
pub struct NodeListTree {
    nodes: BTreeSet<Vec<u64>>,
}

impl NodeListTree {
    pub fn new(listed: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut nodes = BTreeSet::new();
        for node in listed {
            for k in 0..=node.len() {
                nodes.insert(node[..k].to_vec());
            }
        }
        nodes.insert(Vec::new());
        Self { nodes }
    }

    /// One node per line, comma-separated; blank lines are the root.
    pub fn parse_list(text: &str) -> Result<Self, BaireError> {
        let nodes = text
            .lines()
            .map(|line| parse_seq(line.trim()).filter(|n| is_increasing(n)).ok_or_else(|| {
                BaireError::Parse {
                    what: "tree node",
                    text: line.to_string(),
                }
            }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(nodes))
    }

    pub fn load(path: &Path) -> Result<Self, BaireError> {
        let text = std::fs::read_to_string(path).map_err(|e| BaireError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse_list(&text)
    }

    fn children<'a>(&'a self, node: &'a [u64]) -> impl Iterator<Item = &'a Vec<u64>> + 'a {
        self.nodes
            .iter()
            .filter(move |c| c.len() == node.len() + 1 && c.starts_with(node))
    }
}

impl TreeOracle<u64> for NodeListTree {
    fn is_member(&self, node: &[u64]) -> bool {
        self.nodes.contains(node)
    }

    fn least_splitting_above(&self, node: &[u64]) -> Result<Vec<u64>, BaireError> {
        let mut frontier = vec![node.to_vec()];
        while !frontier.is_empty() {
            for n in &frontier {
                if self.children(n).next().is_some() {
                    return Ok(n.clone());
                }
            }
            frontier = frontier
                .iter()
                .flat_map(|n| self.children(n).cloned().collect::<Vec<_>>())
                .collect();
        }
        Err(BaireError::OracleFailure(format!("no splitting node above {node:?}")))
    }

    fn large_extension(&self, node: &[u64], bound: Option<&u64>) -> Result<Vec<u64>, BaireError> {
        self.children(node)
            .find(|c| bound.is_none_or(|b| c.last().unwrap() > b))
            .cloned()
            .ok_or_else(|| {
                BaireError::OracleFailure(format!("no extension of {node:?} above {bound:?}"))
            })
    }
}

fn parse_seq(text: &str) -> Option<Vec<u64>> {
    if text.is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// CLI tree descriptor: `full`, `even` or `nodes:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeDescriptor {
    Full,
    Even,
    Nodes(std::path::PathBuf),
}

impl FromStr for TreeDescriptor {
    type Err = BaireError;

    fn from_str(text: &str) -> Result<Self, BaireError> {
        match text {
            "full" => Ok(Self::Full),
            "even" => Ok(Self::Even),
            _ => text
                .strip_prefix("nodes:")
                .map(|p| Self::Nodes(p.into()))
                .ok_or_else(|| BaireError::Parse {
                    what: "tree descriptor",
                    text: text.to_string(),
                }),
        }
    }
}

impl TreeDescriptor {
    pub fn build(&self) -> Result<Box<dyn TreeOracle<u64>>, BaireError> {
        Ok(match self {
            Self::Full => Box::new(FullTree),
            Self::Even => Box::new(EvenTree),
            Self::Nodes(path) => Box::new(NodeListTree::load(path)?),
        })
    }
}

/// A finite bit string, serialized as `0`/`1` text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = BaireError;

    fn from_str(text: &str) -> Result<Self, BaireError> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BaireError::Parse {
                    what: "bit string",
                    text: text.to_string(),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BitString {
    type Error = BaireError;
    fn try_from(s: String) -> Result<Self, BaireError> {
        s.parse()
    }
}

/// Finite windows of three increasing sequences, all known up to and
/// including `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixTriple<I> {
    pub x: Vec<I>,
    pub y: Vec<I>,
    pub z: Vec<I>,
    pub window: I,
}

impl<I: IndexDomain> PrefixTriple<I> {
    pub fn new(x: Vec<I>, y: Vec<I>, z: Vec<I>, window: I) -> Result<Self, BaireError> {
        for (name, seq) in [("x", &x), ("y", &y), ("z", &z)] {
            if !is_increasing(seq) {
                return Err(BaireError::InvalidPrefix(format!("{name} is not strictly increasing")));
            }
            if seq.last().is_some_and(|l| l > &window) {
                return Err(BaireError::InvalidPrefix(format!("{name} has elements past the window")));
            }
        }
        Ok(Self { x, y, z, window })
    }
}

/// `o(x, y, z)` on a window.
///
/// The classes of `∼_x` are the gaps strictly between consecutive elements
/// of `x` (and the gap before `x(0)`). A gap is settled once the element of
/// `x` closing it is visible; for each settled gap meeting both `y` and `z`,
/// in increasing order, the bit is `0` iff `min(I∩y) ≤ min(I∩z)`. The open
/// gap after the last visible element of `x` is never reported.
pub fn osc_infinite<I: IndexDomain>(p: &PrefixTriple<I>) -> BitString {
    let mut bits = Vec::new();
    let mut lower: Option<&I> = None;
    for upper in &p.x {
        let inside = |v: &&I| lower.is_none_or(|l| *v > l) && *v < upper;
        let my = p.y.iter().find(inside);
        let mz = p.z.iter().find(inside);
        if let (Some(a), Some(b)) = (my, mz) {
            bits.push(a > b);
        }
        lower = Some(upper);
    }
    BitString(bits)
}

/// Output of [`realize_bits`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization<I> {
    pub triple: PrefixTriple<I>,
    /// Bits contributed by the starting splitting nodes, which precede the target.
    pub lead: usize,
}

/// Builds prefixes `s ⊂ T1`, `t ⊂ T2`, `u ⊂ T3` whose triple oscillation
/// reads `alpha` after the bits (if any) fixed by the starting nodes.
///
/// Each round opens a fresh gap of `s` above everything built so far: for a
/// `0` bit `t` enters it first, then `u`, and for a `1` bit the other way
/// round; then `s` closes the gap above both. Every extension is followed by
/// the tree's least splitting node, so the nodes stay ∞-splitting.
pub fn realize_bits<I: IndexDomain>(
    trees: [&dyn TreeOracle<I>; 3],
    alpha: &BitString,
) -> Result<Realization<I>, BaireError> {
    let [ts, tt, tu] = trees;
    let mut s = ts.least_splitting_above(&[])?;
    let mut t = tt.least_splitting_above(&[])?;
    let mut u = tu.least_splitting_above(&[])?;
    let top = |s: &[I], t: &[I], u: &[I]| -> Option<I> {
        [s.last(), t.last(), u.last()].into_iter().flatten().max().cloned()
    };
    let grow = |tree: &dyn TreeOracle<I>, node: &[I], bound: Option<I>| -> Result<Vec<I>, BaireError> {
        let next = tree.large_extension(node, bound.as_ref())?;
        tree.least_splitting_above(&next)
    };
    if !alpha.is_empty() && top(&[], &t, &u).is_some() && top(&[], &t, &u) >= s.last().cloned() {
        s = grow(ts, &s, top(&s, &t, &u))?;
    }
    let window_of = |s: &[I], t: &[I], u: &[I]| top(s, t, u).unwrap_or_else(I::least);
    let lead = osc_infinite(&PrefixTriple {
        x: s.clone(),
        y: t.clone(),
        z: u.clone(),
        window: window_of(&s, &t, &u),
    })
    .len();
    for &bit in &alpha.0 {
        if bit {
            u = grow(tu, &u, top(&s, &t, &u))?;
            t = grow(tt, &t, top(&s, &t, &u))?;
        } else {
            t = grow(tt, &t, top(&s, &t, &u))?;
            u = grow(tu, &u, top(&s, &t, &u))?;
        }
        s = grow(ts, &s, top(&s, &t, &u))?;
    }
    let window = window_of(&s, &t, &u);
    Ok(Realization {
        triple: PrefixTriple {
            x: s,
            y: t,
            z: u,
            window,
        },
        lead,
    })
}

/// An infinite bit stream answered on demand.
pub trait BitStream: Send + Sync {
    fn bit(&self, n: u64) -> bool;
}

/// Binary expansion `0.b₀b₁b₂…` of `num/den ∈ [0, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct BinaryExpansion {
    pub num: u64,
    pub den: u64,
}

impl BitStream for BinaryExpansion {
    fn bit(&self, n: u64) -> bool {
        // b_n = ⌊2^{n+1}·num/den⌋ mod 2, from r = 2^n·num mod den
        let mut r = self.num as u128 % self.den as u128;
        let mut base = 2u128 % self.den as u128;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.den as u128;
            }
            base = base * base % self.den as u128;
            e >>= 1;
        }
        2 * r >= self.den as u128
    }
}

/// Finite prefix followed by a constant tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixThen {
    pub prefix: Vec<bool>,
    pub tail: bool,
}

impl BitStream for PrefixThen {
    fn bit(&self, n: u64) -> bool {
        self.prefix.get(n as usize).copied().unwrap_or(self.tail)
    }
}

/// Pseudo-random stream; with overwhelming probability not eventually constant.
#[derive(Clone, Copy, Debug)]
pub struct HashStream {
    pub seed: u64,
}

impl BitStream for HashStream {
    fn bit(&self, n: u64) -> bool {
        let mut z = self.seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z ^ (z >> 31)) & 1 == 1
    }
}

/// A countable family `D = ⟨d_k⟩` of bit streams.
pub trait StreamFamily: Send + Sync {
    fn bit(&self, k: u64, n: u64) -> bool;

    /// Number of streams, `None` when the family is infinite.
    fn len(&self) -> Option<u64> {
        None
    }

    /// The least `k ≥ from` with `Δ(x, d_k) > threshold`, with that `Δ`,
    /// when the family can name it without scanning. `None` means scan.
    fn least_beyond(
        &self,
        _x: &dyn BitStream,
        _from: u64,
        _threshold: u64,
        _depth: u64,
    ) -> Option<Result<(u64, u64), BaireError>> {
        None
    }
}

/// Every finite binary string, in shortlex order, padded with zeros: the
/// dyadic rationals, dense in `2^ω`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DyadicFamily;

impl DyadicFamily {
    /// The finite string behind `d_k`: the binary digits of `k + 1` after the leading one.
    pub fn word(k: u64) -> Vec<bool> {
        let m = k + 1;
        let len = 63 - m.leading_zeros() as u64;
        (0..len).map(|i| (m >> (len - 1 - i)) & 1 == 1).collect()
    }

    /// The least index whose word is exactly `word`.
    pub fn index_of(word: &[bool]) -> u64 {
        word.iter().fold(1u64, |acc, &b| acc * 2 + b as u64) - 1
    }
}

impl StreamFamily for DyadicFamily {
    fn bit(&self, k: u64, n: u64) -> bool {
        let m = k + 1;
        let len = 63 - m.leading_zeros() as u64;
        n < len && (m >> (len - 1 - n)) & 1 == 1
    }

    /// A padded word agrees with `x` through `threshold` exactly when it
    /// extends `x↾(p+1)`, `p` the last one of `x` at or below `threshold`;
    /// in shortlex order that word itself comes first.
    fn least_beyond(
        &self,
        x: &dyn BitStream,
        from: u64,
        threshold: u64,
        depth: u64,
    ) -> Option<Result<(u64, u64), BaireError>> {
        let len = (0..=threshold).rev().find(|&n| x.bit(n)).map_or(0, |p| p + 1);
        if len >= 62 {
            return Some(Err(BaireError::SearchBudgetExceeded {
                budget: 62,
                context: format!("dyadic word of length {len} overflows the index"),
            }));
        }
        let word: Vec<bool> = (0..len).map(|n| x.bit(n)).collect();
        let k = Self::index_of(&word);
        if k < from {
            return None;
        }
        Some(stream_delta(x, self, k, depth).map(|d| (k, d)))
    }
}

/// An explicit finite list of streams; indices past the end are never matched.
pub struct ListFamily(pub Vec<Box<dyn BitStream>>);

impl StreamFamily for ListFamily {
    fn bit(&self, k: u64, n: u64) -> bool {
        self.0[k as usize].bit(n)
    }

    fn len(&self) -> Option<u64> {
        Some(self.0.len() as u64)
    }
}

/// Budgets for the on-demand searches behind `k_x` and `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBudget {
    /// Largest bit position compared when computing `Δ(x, d_k)`.
    pub depth: u64,
    /// Most family members examined while searching for one `k_x(i)`; a
    /// structured lookup counts as one.
    pub candidates: u64,
}

impl Default for MapBudget {
    fn default() -> Self {
        Self {
            depth: 4096,
            candidates: 1 << 20,
        }
    }
}

/// `Δ(x, d_k) = min{n : x(n) ≠ d_k(n)}`, searched below `depth`.
pub fn stream_delta(
    x: &dyn BitStream,
    family: &dyn StreamFamily,
    k: u64,
    depth: u64,
) -> Result<u64, BaireError> {
    (0..depth)
        .find(|&n| x.bit(n) != family.bit(k, n))
        .ok_or_else(|| BaireError::SearchBudgetExceeded {
            budget: depth,
            context: format!("comparing x with d_{k}"),
        })
}

/// The sequences `k_x(0..n)` and `f(x)(0..n)` with
/// `k_x(i) = min{k : Δ(x, d_k) > Δ(x, d_{k_x(j)}) for all j < i}` and
/// `f(x)(i) = Δ(x, d_{k_x(i)})`.
pub fn k_and_image(
    x: &dyn BitStream,
    family: &dyn StreamFamily,
    n: usize,
    budget: MapBudget,
) -> Result<(Vec<u64>, Vec<u64>), BaireError> {
    let mut ks = Vec::with_capacity(n);
    let mut fs: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let (k, d) = if i == 0 {
            (0, stream_delta(x, family, 0, budget.depth)?)
        } else {
            // indices below k_x(i-1) already fell short of the previous threshold
            let threshold = fs[i - 1];
            let from = ks[i - 1] + 1;
            match family.least_beyond(x, from, threshold, budget.depth) {
                Some(hit) => hit?,
                None => {
                    let end = from.saturating_add(budget.candidates);
                    let end = family.len().map_or(end, |l| l.min(end));
                    let mut found = None;
                    for k in from..end {
                        let d = stream_delta(x, family, k, budget.depth)?;
                        if d > threshold {
                            found = Some((k, d));
                            break;
                        }
                    }
                    found.ok_or_else(|| BaireError::SearchBudgetExceeded {
                        budget: budget.candidates,
                        context: format!("looking for k_x({i}) from index {from}"),
                    })?
                }
            }
        };
        ks.push(k);
        fs.push(d);
    }
    Ok((ks, fs))
}

/// `k_x(n)`.
pub fn k_index(
    x: &dyn BitStream,
    family: &dyn StreamFamily,
    n: usize,
    budget: MapBudget,
) -> Result<u64, BaireError> {
    if n == 0 {
        return Ok(0);
    }
    Ok(k_and_image(x, family, n + 1, budget)?.0[n])
}

/// The first `len` values of `f(x)`; strictly increasing by construction.
pub fn superperfect_image(
    x: &dyn BitStream,
    family: &dyn StreamFamily,
    len: usize,
    budget: MapBudget,
) -> Result<Vec<u64>, BaireError> {
    Ok(k_and_image(x, family, len, budget)?.1)
}

/// Outcome of checking that an image node splits infinitely.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCheck {
    pub node: Vec<u64>,
    pub l: u64,
    pub checked_bounds: Vec<u64>,
}

/// For the image node `s = f(x)↾n` and each `j` from `Δ(x, d_l)` (with
/// `l = k_x(n)`) up to `max_j`, builds `x_j = d_l↾j ⁀ (1 - d_l(j)) ⁀ 111…`
/// and confirms `f(x_j)↾n = s` and `f(x_j)(n) ≥ j`.
pub fn check_image_splitting(
    x: &dyn BitStream,
    n: usize,
    max_j: u64,
    budget: MapBudget,
) -> Result<SplitCheck, BaireError> {
    let family = DyadicFamily;
    let (ks, fs) = k_and_image(x, &family, n + 1, budget)?;
    let node = fs[..n].to_vec();
    let l = ks[n];
    let mut checked = Vec::new();
    for j in fs[n]..=max_j {
        let mut prefix: Vec<bool> = (0..j).map(|i| family.bit(l, i)).collect();
        prefix.push(!family.bit(l, j));
        let xj = PrefixThen { prefix, tail: true };
        let (_, image) = k_and_image(&xj, &family, n + 1, budget)?;
        if image[..n] != node[..] || image[n] < j {
            return Err(BaireError::OracleFailure(format!(
                "witness for j = {j} maps to {image:?}, expected prefix {node:?} then ≥ {j}"
            )));
        }
        checked.push(j);
    }
    Ok(SplitCheck {
        node,
        l,
        checked_bounds: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn osc_infinite_examples() {
        let p = PrefixTriple::new(vec![2, 5, 9], vec![0, 3, 7], vec![1, 4, 6], 9).unwrap();
        assert_eq!(osc_infinite(&p), bits("001"));
        let open = PrefixTriple::new(vec![], vec![0, 3], vec![1, 2], 5).unwrap();
        assert!(osc_infinite(&open).is_empty());
        let same = PrefixTriple::new(vec![2, 5], vec![0, 3], vec![0, 3], 6).unwrap();
        assert_eq!(osc_infinite(&same), bits("00"));
        assert!(PrefixTriple::new(vec![3, 1], vec![], vec![], 4).is_err());
        assert!(PrefixTriple::new(vec![1], vec![7], vec![], 4).is_err());
    }

    #[test]
    fn realize_empty_target_returns_splitting_nodes() {
        let r = realize_bits::<u64>([&FullTree, &FullTree, &FullTree], &BitString::default()).unwrap();
        assert!(r.triple.x.is_empty() && r.triple.y.is_empty() && r.triple.z.is_empty());
        assert_eq!(r.lead, 0);
    }

    #[test]
    fn realize_fixed_target() {
        let target = bits("0110");
        let r = realize_bits::<u64>([&FullTree, &FullTree, &FullTree], &target).unwrap();
        assert_eq!(osc_infinite(&r.triple), target);
        let r = realize_bits::<u64>([&EvenTree, &FullTree, &EvenTree], &target).unwrap();
        assert_eq!(osc_infinite(&r.triple), target);
    }

    #[test]
    fn realize_over_node_list_seeds() {
        let s = NodeListTree::parse_list("0,5,100,200,300,400,500").unwrap();
        let t = NodeListTree::parse_list("1,101,150,250,350,450").unwrap();
        let u = NodeListTree::parse_list("2,102,120,220,320,420").unwrap();
        let r = realize_bits::<u64>([&s, &t, &u], &bits("01"));
        // s cannot jump above the first values of t and u
        assert!(matches!(r, Err(BaireError::OracleFailure(_))));
    }

    #[test]
    fn k_index_examples() {
        let x = PrefixThen {
            prefix: vec![true],
            tail: false,
        };
        let d = ListFamily(vec![
            Box::new(PrefixThen { prefix: vec![], tail: false }),
            Box::new(PrefixThen { prefix: vec![], tail: true }),
            Box::new(PrefixThen { prefix: vec![true, false, true], tail: false }),
        ]);
        assert_eq!(k_index(&x, &d, 0, MapBudget::default()).unwrap(), 0);
        // Δ(x,d_0)=0, Δ(x,d_1)=1, Δ(x,d_2)=2
        assert_eq!(k_and_image(&x, &d, 3, MapBudget::default()).unwrap(), (vec![0, 1, 2], vec![0, 1, 2]));
        let inside = PrefixThen { prefix: vec![], tail: false };
        assert!(matches!(
            k_index(&inside, &d, 1, MapBudget { depth: 64, candidates: 3 }),
            Err(BaireError::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn image_of_one_third_is_increasing() {
        let x = BinaryExpansion { num: 1, den: 3 };
        assert_eq!((0..6).map(|n| x.bit(n) as u8).collect::<Vec<_>>(), [0, 1, 0, 1, 0, 1]);
        let img = superperfect_image(&x, &DyadicFamily, 8, MapBudget::default()).unwrap();
        assert_eq!(img.len(), 8);
        assert!(img.windows(2).all(|w| w[0] < w[1]));
        assert!(superperfect_image(&x, &DyadicFamily, 0, MapBudget::default()).unwrap().is_empty());
    }

    #[test]
    fn dyadic_words() {
        assert_eq!(DyadicFamily::word(0), Vec::<bool>::new());
        assert_eq!(DyadicFamily::word(1), vec![false]);
        assert_eq!(DyadicFamily::word(2), vec![true]);
        assert_eq!(DyadicFamily::word(3), vec![false, false]);
        for k in 0..200 {
            assert_eq!(DyadicFamily::index_of(&DyadicFamily::word(k)), k);
        }
    }

    #[test]
    fn ordinal_indices_jump_to_limits() {
        let w: Ordinal = "w*3+4".parse().unwrap();
        assert_eq!(w.jump_above(), "w*4".parse().unwrap());
    }

    /// Dyadic bits without the structured lookup, forcing a linear scan.
    struct ScannedDyadic;

    impl StreamFamily for ScannedDyadic {
        fn bit(&self, k: u64, n: u64) -> bool {
            DyadicFamily.bit(k, n)
        }
    }

    #[test]
    fn dyadic_lookup_matches_scan() {
        let budget = MapBudget { depth: 4096, candidates: 1 << 16 };
        for seed in 0..40 {
            let x = HashStream { seed };
            let fast = k_and_image(&x, &DyadicFamily, 6, budget);
            let slow = k_and_image(&x, &ScannedDyadic, 6, budget);
            match (fast, slow) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (_, Err(_)) => {}
                (a, b) => panic!("lookup {a:?} vs scan {b:?}"),
            }
        }
    }
}
