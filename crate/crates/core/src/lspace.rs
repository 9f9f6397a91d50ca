//! Exact points of the unit circle and the circle-valued coloring
//! `o(α, β) = z_α^{osc(α,β)+1}`.
//!
//! A [`CircleAngle`] `θ` stands for `exp(2πiθ)` with
//! `θ = q₀ + Σ q_m·√m` over squarefree `m ≥ 2`. Since `{1} ∪ {√m}` is
//! linearly independent over ℚ, two angles name the same point exactly when
//! their canonical forms agree, so equality is decided without floats.
//! Distances go through double-double arithmetic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dd::Dd;
use crate::ordinal::Ordinal;
use crate::walks::{osc_ordinal, Ladders, WalkError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LspaceError {
    #[error("{0} has no assigned circle point in this session")]
    UnassignedOrdinal(Ordinal),
    #[error("no m below the cap {0} satisfies every approximation")]
    CapExceeded(u64),
    #[error("cannot parse angle {0:?}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// A point `exp(2πiθ)` of the unit circle with `θ = q₀ + Σ q_m·√m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CircleAngle {
    /// `q₀`, reduced into `[0, 1)`.
    rational: BigRational,
    /// Squarefree `m ≥ 2` to nonzero `q_m`.
    terms: BTreeMap<u64, BigRational>,
}

/// Writes `m = a²·b` with `b` squarefree; returns `(a, b)`.
fn square_split(mut m: u64) -> (u64, u64) {
    let mut a = 1;
    let mut b = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        a *= p.pow(e / 2);
        if e % 2 == 1 {
            b *= p;
        }
        p += 1;
    }
    (a, b * m)
}

pub fn is_squarefree(m: u64) -> bool {
    m >= 1 && square_split(m).0 == 1
}

fn reduce_mod_one(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn rational_to_dd(q: &BigRational) -> Dd {
    match (q.numer().to_i128(), q.denom().to_i128()) {
        (Some(n), Some(d)) if n.unsigned_abs() < 1 << 100 && d < 1 << 100 => {
            Dd::from_i128(n).div(Dd::from_i128(d))
        }
        _ => Dd::from_f64(q.to_f64().unwrap_or(0.0)),
    }
}

impl CircleAngle {
    /// The angle `0`, i.e. the point `1`.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self {
            rational: reduce_mod_one(&q),
            terms: BTreeMap::new(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    /// The angle `√m`, rewritten over the squarefree part of `m`.
    pub fn sqrt(m: u64) -> Self {
        let (a, b) = square_split(m);
        if b == 1 {
            return Self::rational(BigRational::from_integer(a.into()));
        }
        Self {
            rational: BigRational::zero(),
            terms: BTreeMap::from([(b, BigRational::from_integer(a.into()))]),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational_terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.terms.is_empty()
    }

    /// The product of the two points.
    pub fn add(&self, other: &CircleAngle) -> CircleAngle {
        let mut terms = self.terms.clone();
        for (m, q) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(BigRational::zero);
            *entry += q;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        CircleAngle {
            rational: reduce_mod_one(&(&self.rational + &other.rational)),
            terms,
        }
    }

    /// The inverse point.
    pub fn neg(&self) -> CircleAngle {
        CircleAngle {
            rational: reduce_mod_one(&-&self.rational),
            terms: self.terms.iter().map(|(m, q)| (*m, -q)).collect(),
        }
    }

    pub fn sub(&self, other: &CircleAngle) -> CircleAngle {
        self.add(&other.neg())
    }

    /// `z^n` for an integer `n`.
    pub fn scale(&self, n: &BigInt) -> CircleAngle {
        if n.is_zero() {
            return Self::zero();
        }
        let n = BigRational::from_integer(n.clone());
        CircleAngle {
            rational: reduce_mod_one(&(&self.rational * &n)),
            terms: self.terms.iter().map(|(m, q)| (*m, q * &n)).collect(),
        }
    }

    /// `z^n`.
    pub fn power(&self, n: u64) -> CircleAngle {
        self.scale(&BigInt::from(n))
    }

    /// `θ mod 1` in double-double.
    fn turns_dd(&self) -> Dd {
        let mut acc = rational_to_dd(&self.rational);
        for (m, q) in &self.terms {
            acc = acc.add(rational_to_dd(q).mul(Dd::sqrt_u64(*m))).frac();
        }
        acc.frac()
    }

    /// `θ mod 1` as an `f64` in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        let t = self.turns_dd().to_f64();
        if t >= 1.0 {
            0.0
        } else {
            t
        }
    }

    /// `(cos 2πθ, sin 2πθ)`.
    pub fn coords(&self) -> (f64, f64) {
        let a = std::f64::consts::TAU * self.turns();
        (a.cos(), a.sin())
    }

    /// Text of the irrational part, `q1*sqrt(m1) + …`, empty when rational.
    pub fn terms_text(&self) -> String {
        self.terms
            .iter()
            .map(|(m, q)| format!("{q}*sqrt({m})"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn chord_from_turns(delta: Dd) -> f64 {
    let d = delta.frac().to_f64();
    let d = d.min(1.0 - d).max(0.0);
    2.0 * (std::f64::consts::PI * d).sin()
}

/// Chordal distance `|exp(2πiθ_a) - exp(2πiθ_b)|`.
///
/// The difference is formed exactly and reduced mod 1 in double-double
/// before the sine, so the result is accurate to well below `10⁻⁹` for
/// coefficients up to `10⁶`.
pub fn angle_distance(a: &CircleAngle, b: &CircleAngle) -> f64 {
    chord_from_turns(a.sub(b).turns_dd())
}

impl fmt::Display for CircleAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for (m, q) in &self.terms {
            write!(f, " + {q}*sqrt({m})")?;
        }
        Ok(())
    }
}

impl From<CircleAngle> for String {
    fn from(a: CircleAngle) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for CircleAngle {
    type Error = LspaceError;
    fn try_from(s: String) -> Result<Self, LspaceError> {
        s.parse()
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

impl FromStr for CircleAngle {
    type Err = LspaceError;

    /// Accepts the canonical text form: summands joined by `+`, each a
    /// rational `p/q`, `sqrt(m)` or `<rational>*sqrt(m)`.
    fn from_str(text: &str) -> Result<Self, LspaceError> {
        let err = || LspaceError::Parse(text.to_string());
        let mut acc = CircleAngle::zero();
        for part in text.split('+') {
            let part = part.trim();
            let (coeff, root) = match part.find("sqrt(") {
                Some(at) => {
                    let inner = part[at + 5..].strip_suffix(')').ok_or_else(err)?;
                    let m: u64 = inner.trim().parse().map_err(|_| err())?;
                    let c = part[..at].trim().trim_end_matches('*').trim();
                    let c = if c.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(c).ok_or_else(err)?
                    };
                    (c, Some(m))
                }
                None => (parse_rational(part).ok_or_else(err)?, None),
            };
            let summand = match root {
                Some(m) => {
                    let r = CircleAngle::sqrt(m);
                    CircleAngle {
                        rational: reduce_mod_one(&(&r.rational * &coeff)),
                        terms: r
                            .terms
                            .into_iter()
                            .map(|(k, q)| (k, q * &coeff))
                            .filter(|(_, q)| !q.is_zero())
                            .collect(),
                    }
                }
                None => CircleAngle::rational(coeff),
            };
            acc = acc.add(&summand);
        }
        Ok(acc)
    }
}

/// Assigns `z_α = √m_α` to a finite session of ordinals, where the `k`-th
/// ordinal in increasing order gets the `k`-th squarefree integer `≥ 2`.
#[derive(Clone, Debug, Default)]
pub struct ZAssignment {
    points: BTreeMap<Ordinal, u64>,
}

/// The first `count` squarefree integers `≥ 2`.
pub fn squarefrees(count: usize) -> Vec<u64> {
    (2..).filter(|&m| is_squarefree(m)).take(count).collect()
}

impl ZAssignment {
    pub fn new(session: impl IntoIterator<Item = Ordinal>) -> Self {
        let ordered: BTreeSet<Ordinal> = session.into_iter().collect();
        let roots = squarefrees(ordered.len());
        Self {
            points: ordered.into_iter().zip(roots).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn root_of(&self, alpha: &Ordinal) -> Option<u64> {
        self.points.get(alpha).copied()
    }

    pub fn z(&self, alpha: &Ordinal) -> Result<CircleAngle, LspaceError> {
        self.root_of(alpha)
            .map(CircleAngle::sqrt)
            .ok_or_else(|| LspaceError::UnassignedOrdinal(alpha.clone()))
    }

    pub fn angles(&self) -> Vec<CircleAngle> {
        self.points.values().map(|&m| CircleAngle::sqrt(m)).collect()
    }
}

/// `o(α, β) = z_α^{osc(α, β) + 1}`.
pub fn moore_color(
    ladders: &Ladders,
    zs: &ZAssignment,
    alpha: &Ordinal,
    beta: &Ordinal,
) -> Result<CircleAngle, LspaceError> {
    let z = zs.z(alpha)?;
    let osc = osc_ordinal(ladders, alpha, beta)?.value;
    Ok(z.power(osc + 1))
}

/// `w_β(ξ) = o(ξ, β)` for `0 < ξ < β`, and the point `1` otherwise.
pub fn w_point(
    ladders: &Ladders,
    zs: &ZAssignment,
    beta: &Ordinal,
    xi: &Ordinal,
) -> Result<CircleAngle, LspaceError> {
    if xi >= beta || xi.is_zero() {
        return Ok(CircleAngle::zero());
    }
    moore_color(ladders, zs, xi, beta)
}

/// One row of the `w_β↾X` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LRow {
    pub beta: Ordinal,
    pub xi: Ordinal,
    pub angle_rational: String,
    pub angle_terms: String,
    pub x: f64,
    pub y: f64,
}

/// `w_β(ξ)` for every `β ∈ B` and `ξ ∈ X`.
pub fn sample_lspace(
    ladders: &Ladders,
    zs: &ZAssignment,
    xs: &[Ordinal],
    betas: &[Ordinal],
) -> Result<Vec<LRow>, LspaceError> {
    let mut rows = Vec::with_capacity(xs.len() * betas.len());
    for beta in betas {
        for xi in xs {
            let angle = w_point(ladders, zs, beta, xi)?;
            let (x, y) = angle.coords();
            rows.push(LRow {
                beta: beta.clone(),
                xi: xi.clone(),
                angle_rational: angle.rational_part().to_string(),
                angle_terms: angle.terms_text(),
                x,
                y,
            });
        }
    }
    Ok(rows)
}

/// The least `m < cap` with `|u_i·z_i^m - v_i| < eps` for every `i`.
///
/// Candidates are screened in double-double arithmetic and each hit is
/// re-evaluated from the exact angle `u_i + m·z_i` before it is accepted.
pub fn kronecker_search(
    z: &[CircleAngle],
    u: &[CircleAngle],
    v: &[CircleAngle],
    eps: f64,
    cap: u64,
) -> Result<u64, LspaceError> {
    if z.len() != u.len() || z.len() != v.len() {
        return Err(LspaceError::Invalid("z, u and v must have the same length".into()));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(LspaceError::Invalid("eps must be positive".into()));
    }
    let base: Vec<Dd> = u.iter().zip(v).map(|(a, b)| a.sub(b).turns_dd()).collect();
    let step: Vec<Dd> = z.iter().map(CircleAngle::turns_dd).collect();
    for m in 0..cap {
        let md = Dd::from_i128(m as i128);
        let close = base
            .iter()
            .zip(&step)
            .all(|(b, s)| chord_from_turns(b.add(s.mul(md))) < eps);
        if close && exact_hit(z, u, v, eps, m) {
            return Ok(m);
        }
    }
    Err(LspaceError::CapExceeded(cap))
}

/// Re-checks a candidate from exact angles.
pub fn exact_hit(z: &[CircleAngle], u: &[CircleAngle], v: &[CircleAngle], eps: f64, m: u64) -> bool {
    z.iter()
        .zip(u)
        .zip(v)
        .all(|((zi, ui), vi)| angle_distance(&ui.add(&zi.power(m)), vi) < eps)
}

/// Searches for integers `|n_i| ≤ bound`, not all zero, with
/// `Σ n_i·θ_i ≡ 0`, by meeting in the middle. `None` means no such relation.
pub fn find_integer_relation(angles: &[CircleAngle], bound: i64) -> Option<Vec<i64>> {
    let half = angles.len() / 2;
    let (left, right) = angles.split_at(half);
    let combos = |part: &[CircleAngle]| -> Vec<(Vec<i64>, CircleAngle)> {
        let mut out = vec![(Vec::new(), CircleAngle::zero())];
        for theta in part {
            let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
            for (coeffs, acc) in &out {
                for n in -bound..=bound {
                    let mut c = coeffs.clone();
                    c.push(n);
                    next.push((c, acc.add(&theta.scale(&BigInt::from(n)))));
                }
            }
            out = next;
        }
        out
    };
    // keep one all-zero and one nonzero vector per left value
    let mut table: HashMap<CircleAngle, Vec<Vec<i64>>> = HashMap::new();
    for (c, a) in combos(left) {
        let slot = table.entry(a).or_default();
        let nonzero = c.iter().any(|&n| n != 0);
        if !slot.iter().any(|s| s.iter().any(|&n| n != 0) == nonzero) {
            slot.push(c);
        }
    }
    for (c, a) in combos(right) {
        if let Some(slot) = table.get(&a.neg()) {
            let right_nonzero = c.iter().any(|&n| n != 0);
            for l in slot {
                if right_nonzero || l.iter().any(|&n| n != 0) {
                    let mut full = l.clone();
                    full.extend(&c);
                    return Some(full);
                }
            }
        }
    }
    None
}

/// A target arc: the points within chordal distance `radius` of `center`.
/// A radius of at least 2 covers the whole circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub center: CircleAngle,
    pub radius: f64,
}

impl Target {
    pub fn gap(&self, point: &CircleAngle) -> f64 {
        if self.radius >= 2.0 {
            return f64::NEG_INFINITY;
        }
        angle_distance(point, &self.center) - self.radius
    }
}

/// Search outcome for [`neighborhood_hit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitReport {
    pub cap: u64,
    pub examined: u64,
    pub hits: u64,
    pub exhausted: bool,
    /// Indices into `A` and `B` of the first hit.
    pub first_hit: Option<(usize, usize)>,
    /// The miss whose worst coordinate came closest to its target.
    pub nearest_miss: Option<NearMiss>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearMiss {
    pub a: usize,
    pub b: usize,
    /// `max_i (distance_i - radius_i)`.
    pub excess: f64,
}

/// Looks for `a ∈ A`, `b ∈ B` with `max(a) < min(b)` and
/// `o(a(i), b(φ(i))) ∈ U_i` for every `i`, examining at most `cap` pairs.
pub fn neighborhood_hit(
    ladders: &Ladders,
    zs: &ZAssignment,
    a_family: &[Vec<Ordinal>],
    b_family: &[Vec<Ordinal>],
    targets: &[Target],
    phi: &[usize],
    cap: u64,
) -> Result<HitReport, LspaceError> {
    let k = targets.len();
    if phi.len() != k || a_family.iter().any(|a| a.len() != k) {
        return Err(LspaceError::Invalid("A-tuples, targets and φ must share one length".into()));
    }
    let l = b_family.first().map_or(0, Vec::len);
    if b_family.iter().any(|b| b.len() != l) || (!b_family.is_empty() && phi.iter().any(|&p| p >= l)) {
        return Err(LspaceError::Invalid("B-tuples must share a length that φ maps into".into()));
    }
    let mut report = HitReport {
        cap,
        examined: 0,
        hits: 0,
        exhausted: true,
        first_hit: None,
        nearest_miss: None,
    };
    'outer: for (ia, a) in a_family.iter().enumerate() {
        for (ib, b) in b_family.iter().enumerate() {
            let admissible = match (a.iter().max(), b.iter().min()) {
                (Some(hi), Some(lo)) => hi < lo,
                _ => true,
            };
            if !admissible {
                continue;
            }
            if report.examined == cap {
                report.exhausted = false;
                break 'outer;
            }
            report.examined += 1;
            let mut excess = f64::NEG_INFINITY;
            for i in 0..k {
                let color = w_point(ladders, zs, &b[phi[i]], &a[i])?;
                excess = excess.max(targets[i].gap(&color));
            }
            if excess < 0.0 {
                report.hits += 1;
                report.first_hit.get_or_insert((ia, ib));
            } else if report.nearest_miss.as_ref().is_none_or(|m| excess < m.excess) {
                report.nearest_miss = Some(NearMiss { a: ia, b: ib, excess });
            }
        }
    }
    Ok(report)
}
