//! Seeded property suites over every module. Reports carry no wall-clock
//! data, so a fixed seed gives byte-identical JSON.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::baire::{
    check_image_splitting, osc_infinite, realize_bits, superperfect_image, BinaryExpansion, BitStream,
    BitString, DyadicFamily, FullTree, HashStream, MapBudget, PrefixTriple, TreeOracle,
};
use crate::finite::{
    canonical_certificate, osc, osc_triple, realize_osc_triple, realize_oscillations, CanonicalFamily,
    Family, FiniteNatSet,
};
use crate::lspace::{
    angle_distance, exact_hit, find_integer_relation, kronecker_search, neighborhood_hit, sample_lspace,
    squarefrees, CircleAngle, Target, ZAssignment,
};
use crate::ordinal::{below_omega_cubed, enumerate_below, Ordinal};
use crate::seq::{
    decode_rectangle, extend_splitting, hit_target, osc_seq_common, rectangle_index, refined_color,
    CantorPairing, PairingScheme, Rectangle,
};
use crate::walks::{concat_verdict, e_value, osc_ordinal, walk, Ladders};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of finite, baire, seq, walks, lspace, all")]
    UnknownSuite(String),
}

pub const SUITES: [&str; 5] = ["finite", "baire", "seq", "walks", "lspace"];

/// One property checked over a batch of instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

/// A failing input, in a form that can be replayed through the library or CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub input: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub budgets: BTreeMap<String, u64>,
    pub checks: Vec<Check>,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

/// Budgets shared by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub osc_pairs: u64,
    pub osc3_triples: u64,
    pub realize_targets: u64,
    pub image_streams: u64,
    pub split_candidates: u64,
    pub extend_instances: u64,
    pub concat_sample: u64,
    pub window_small: u64,
    pub window_large: u64,
    pub kronecker_cap: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            osc_pairs: 10_000,
            osc3_triples: 1_000,
            realize_targets: 200,
            image_streams: 100,
            split_candidates: 10_000,
            extend_instances: 100,
            concat_sample: 200,
            window_small: 10_000,
            window_large: 100_000,
            kronecker_cap: 10_000_000,
        }
    }
}

impl Budgets {
    fn as_map(&self) -> BTreeMap<String, u64> {
        [
            ("osc_pairs", self.osc_pairs),
            ("osc3_triples", self.osc3_triples),
            ("realize_targets", self.realize_targets),
            ("image_streams", self.image_streams),
            ("split_candidates", self.split_candidates),
            ("extend_instances", self.extend_instances),
            ("concat_sample", self.concat_sample),
            ("window_small", self.window_small),
            ("window_large", self.window_large),
            ("kronecker_cap", self.kronecker_cap),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

struct Recorder {
    prefix: String,
    checks: Vec<Check>,
    counterexamples: Vec<Counterexample>,
}

impl Recorder {
    fn new(prefix: &str) -> Self {
        Self {
            prefix: prefix.to_string(),
            checks: Vec::new(),
            counterexamples: Vec::new(),
        }
    }

    /// Records a check; every failure becomes a counterexample.
    fn check(&mut self, name: &str, instances: u64, failures: Vec<Value>, details: Value) {
        let name = format!("{}/{}", self.prefix, name);
        self.checks.push(Check {
            name: name.clone(),
            instances,
            passed: failures.is_empty(),
            details,
        });
        self.counterexamples.extend(failures.into_iter().map(|input| Counterexample {
            check: name.clone(),
            input,
        }));
    }
}

/// Runs the named suite (or `all`) under `seed` with default budgets.
pub fn verify_suite(name: &str, seed: u64) -> Result<VerificationReport, VerifyError> {
    verify_suite_with(name, seed, &Budgets::default())
}

pub fn verify_suite_with(name: &str, seed: u64, budgets: &Budgets) -> Result<VerificationReport, VerifyError> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    let mut checks = Vec::new();
    let mut counterexamples = Vec::new();
    for suite in names {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rec = Recorder::new(suite);
        match suite {
            "finite" => finite_suite(&mut rec, &mut rng, budgets),
            "baire" => baire_suite(&mut rec, &mut rng, budgets),
            "seq" => seq_suite(&mut rec, &mut rng, budgets),
            "walks" => walks_suite(&mut rec, &mut rng, budgets),
            _ => lspace_suite(&mut rec, &mut rng, budgets),
        }
        checks.extend(rec.checks);
        counterexamples.extend(rec.counterexamples);
    }
    Ok(VerificationReport {
        suite: name.to_string(),
        seed,
        budgets: budgets.as_map(),
        checks,
        counterexamples,
    })
}

/// Maps `f` over `items` on scoped threads, keeping input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.iter().map(|item| scope.spawn(|| f(item))).collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    })
}

// ---------------------------------------------------------------- finite

fn random_set(rng: &mut ChaCha8Rng, below: u64) -> FiniteNatSet {
    let density: f64 = rng.gen_range(0.05..0.95);
    (0..below).filter(|_| rng.gen_bool(density)).collect()
}

/// Class count of `s △ t` by pairwise unions of neighbours whose closed
/// interval stays on one side.
fn osc_by_classes(s: &FiniteNatSet, t: &FiniteNatSet) -> u64 {
    let only_s: BTreeSet<u64> = s.as_slice().iter().copied().filter(|&x| !t.contains(x)).collect();
    let only_t: BTreeSet<u64> = t.as_slice().iter().copied().filter(|&x| !s.contains(x)).collect();
    let diff: Vec<u64> = only_s.union(&only_t).copied().collect();
    let mut parent: Vec<usize> = (0..diff.len()).collect();
    fn root(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..diff.len() {
        for j in i + 1..diff.len() {
            let (a, b) = (diff[i], diff[j]);
            let inside = |side: &BTreeSet<u64>| (a..=b).all(|x| side.contains(&x));
            if inside(&only_s) || inside(&only_t) {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..diff.len()).filter(|&i| root(&mut parent, i) == i).count() as u64
}

fn runs(s: &FiniteNatSet) -> u64 {
    let xs = s.as_slice();
    (0..xs.len()).filter(|&i| i == 0 || xs[i] != xs[i - 1] + 1).count() as u64
}

fn finite_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, b: &Budgets) {
    let mut mismatches = Vec::new();
    let mut law_failures = Vec::new();
    for _ in 0..b.osc_pairs {
        let s = random_set(rng, 64);
        let t = random_set(rng, 64);
        let got = osc(&s, &t);
        if got != osc_by_classes(&s, &t) {
            mismatches.push(json!({"s": s, "t": t, "osc": got}));
        }
        if got != osc(&t, &s) || osc(&s, &s) != 0 || osc(&s, &FiniteNatSet::empty()) != runs(&s) {
            law_failures.push(json!({"s": s, "t": t}));
        }
    }
    rec.check("osc-matches-class-oracle", b.osc_pairs, mismatches, Value::Null);
    rec.check("osc-symmetry-and-identity", b.osc_pairs, law_failures, Value::Null);

    let mut local = Vec::new();
    let padding: Vec<u64> = (1000..1100).collect();
    let mut done = 0;
    while done < b.osc3_triples {
        let (s, t, u) = (random_set(rng, 64), random_set(rng, 64), random_set(rng, 64));
        let Ok(v) = osc_triple(&s, &t, &u) else { continue };
        done += 1;
        let pad = |x: &FiniteNatSet| x.union(&padding.iter().copied().collect());
        match osc_triple(&pad(&s), &pad(&t), &pad(&u)) {
            Ok(w) if w == v => {}
            other => local.push(json!({"s": s, "t": t, "u": u, "before": v, "after": format!("{other:?}")})),
        }
    }
    rec.check("osc3-padding-locality", b.osc3_triples, local, Value::Null);

    let mut realized = BTreeMap::new();
    let mut failures = Vec::new();
    for k in 1..=4usize {
        let family: Arc<dyn Family> = Arc::new(CanonicalFamily::new(k, 8 * k as u64));
        let cert = canonical_certificate(k);
        let pairs = realize_oscillations(family.clone(), &cert);
        let triples = realize_osc_triple(family.clone(), &cert);
        match (pairs, triples) {
            (Ok(p), Ok(t)) => {
                let want: Vec<u64> = (1..2 * k as u64).collect();
                let members = p.values().all(|(a, b)| family.contains(a) && family.contains(b))
                    && t.values().all(|(a, b, c)| family.contains(a) && family.contains(b) && family.contains(c));
                let pair_ok = p.keys().copied().collect::<Vec<_>>() == want
                    && p.iter().all(|(&v, (a, b))| osc(a, b) == v);
                let triple_ok = t.keys().copied().collect::<Vec<_>>() == want
                    && t.iter().all(|(&v, (a, b, c))| osc_triple(a, b, c) == Ok(v));
                if !(members && pair_ok && triple_ok) {
                    failures.push(json!({"k": k, "M": 8 * k}));
                }
                realized.insert(k.to_string(), json!(p.keys().collect::<Vec<_>>()));
            }
            (p, t) => failures.push(json!({"k": k, "M": 8 * k, "error": format!("{:?}", p.err().or(t.err()))})),
        }
    }
    rec.check("derivative-realization-k1-4", 4, failures, json!({"realized": realized}));
}

// ---------------------------------------------------------------- baire

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitString {
    BitString((0..len).map(|_| rng.gen_bool(0.5)).collect())
}

fn window_prefixes<I: crate::baire::IndexDomain>(triple: &PrefixTriple<I>) -> bool {
    let full = osc_infinite(triple);
    let mut cuts: Vec<I> = triple.x.iter().chain(&triple.y).chain(&triple.z).cloned().collect();
    cuts.sort();
    cuts.dedup();
    cuts.into_iter().all(|w| {
        let keep = |v: &Vec<I>| v.iter().filter(|e| **e <= w).cloned().collect::<Vec<_>>();
        let part = PrefixTriple {
            x: keep(&triple.x),
            y: keep(&triple.y),
            z: keep(&triple.z),
            window: w,
        };
        full.starts_with(&osc_infinite(&part))
    })
}

/// Ranks of every entry among all entries of the triple.
fn shape<I: Ord + Clone>(t: &PrefixTriple<I>) -> [Vec<usize>; 3] {
    let all: BTreeSet<I> = t.x.iter().chain(&t.y).chain(&t.z).cloned().collect();
    let rank = |v: &Vec<I>| v.iter().map(|e| all.range(..e.clone()).count()).collect();
    [rank(&t.x), rank(&t.y), rank(&t.z)]
}

fn baire_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, b: &Budgets) {
    let full: &dyn TreeOracle<u64> = &FullTree;
    let mut failures = Vec::new();
    let mut window_failures = Vec::new();
    for _ in 0..b.realize_targets {
        let target = random_bits(rng, 16);
        match realize_bits([full, full, full], &target) {
            Ok(r) => {
                let bits = osc_infinite(&r.triple);
                if r.lead != 0 || !bits.starts_with(&target) {
                    failures.push(json!({"target": target.to_string(), "got": bits.to_string()}));
                }
                if !window_prefixes(&r.triple) {
                    window_failures.push(json!({"target": target.to_string()}));
                }
            }
            Err(e) => failures.push(json!({"target": target.to_string(), "error": e.to_string()})),
        }
    }
    rec.check("realize-bits-round-trip", b.realize_targets, failures, Value::Null);
    rec.check("window-stability", b.realize_targets, window_failures, Value::Null);

    let ord_full: &dyn TreeOracle<Ordinal> = &FullTree;
    let mut param = Vec::new();
    let runs = 50;
    for _ in 0..runs {
        let target = random_bits(rng, 10);
        let nat = realize_bits([full, full, full], &target);
        let ord = realize_bits([ord_full, ord_full, ord_full], &target);
        match (nat, ord) {
            (Ok(n), Ok(o)) => {
                let below_w2 = o.triple.x.iter().chain(&o.triple.y).chain(&o.triple.z).all(|v| {
                    v.terms().first().is_none_or(|t| t.exp <= Ordinal::one())
                });
                if osc_infinite(&n.triple) != osc_infinite(&o.triple) || shape(&n.triple) != shape(&o.triple) || !below_w2
                {
                    param.push(json!({"target": target.to_string()}));
                }
            }
            _ => param.push(json!({"target": target.to_string(), "error": "realization failed"})),
        }
    }
    rec.check("ordinal-index-parametricity", runs, param, Value::Null);

    let budget = MapBudget::default();
    let mut streams: Vec<(String, Box<dyn BitStream>)> = vec![(
        "1/3".into(),
        Box::new(BinaryExpansion { num: 1, den: 3 }),
    )];
    while (streams.len() as u64) < b.image_streams {
        let seed: u64 = rng.gen();
        streams.push((format!("hash:{seed}"), Box::new(HashStream { seed })));
    }
    let mut mono = Vec::new();
    for (label, x) in &streams {
        match superperfect_image(x.as_ref(), &DyadicFamily, 8, budget) {
            Ok(img) if img.windows(2).all(|w| w[0] < w[1]) && img.len() == 8 => {}
            other => mono.push(json!({"stream": label, "result": format!("{other:?}")})),
        }
    }
    rec.check("image-strictly-increasing", streams.len() as u64, mono, Value::Null);

    let split_budget = MapBudget {
        depth: budget.depth,
        candidates: b.split_candidates,
    };
    let mut split_failures = Vec::new();
    let mut bounds_checked = 0u64;
    let mut nodes = 0u64;
    for (label, x) in &streams {
        let image = match superperfect_image(x.as_ref(), &DyadicFamily, 4, split_budget) {
            Ok(img) => img,
            Err(e) => {
                split_failures.push(json!({"stream": label, "error": e.to_string()}));
                continue;
            }
        };
        for n in 0..4 {
            nodes += 1;
            match check_image_splitting(x.as_ref(), n, image[n] + 4, split_budget) {
                Ok(c) if !c.checked_bounds.is_empty() => bounds_checked += c.checked_bounds.len() as u64,
                other => split_failures.push(json!({"stream": label, "depth": n, "result": format!("{other:?}")})),
            }
        }
    }
    rec.check(
        "image-node-splitting",
        nodes,
        split_failures,
        json!({"bounds_checked": bounds_checked, "candidate_budget": b.split_candidates}),
    );
}

// ---------------------------------------------------------------- seq

fn random_increasing(rng: &mut ChaCha8Rng, max_len: usize, below: u64) -> Vec<u64> {
    let len = rng.gen_range(0..=max_len);
    let mut pool: Vec<u64> = (0..below).collect();
    pool.shuffle(rng);
    let mut v: Vec<u64> = pool.into_iter().take(len).collect();
    v.sort_unstable();
    v
}

fn random_rectangle(rng: &mut ChaCha8Rng) -> Rectangle {
    let k = rng.gen_range(0..=3usize);
    let node = |rng: &mut ChaCha8Rng| {
        let mut pool: Vec<u64> = (0..12).collect();
        pool.shuffle(rng);
        let mut v: Vec<u64> = pool.into_iter().take(k).collect();
        v.sort_unstable();
        v
    };
    let d: BTreeSet<Vec<u64>> = (0..rng.gen_range(0..=3)).map(|_| node(rng)).collect();
    let e: BTreeSet<Vec<u64>> = (0..rng.gen_range(0..=3)).map(|_| node(rng)).collect();
    let mut t = BTreeMap::new();
    for x in &d {
        for y in &e {
            t.insert((x.clone(), y.clone()), rng.gen_range(0..20));
        }
    }
    Rectangle { k, d, e, t }
}

fn seq_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, b: &Budgets) {
    let full: &dyn TreeOracle<u64> = &FullTree;
    let mut failures = Vec::new();
    for _ in 0..b.extend_instances {
        let s = random_increasing(rng, 5, 30);
        let t = random_increasing(rng, 5, 30);
        let n = rng.gen_range(0..=8u64);
        match extend_splitting(full, full, &s, &t, n) {
            Ok(ext) if ext.osc == ext.baseline + n && ext.s.starts_with(&s) && ext.t.starts_with(&t) => {
                if osc_seq_common(&ext.s, &ext.t) != ext.osc || ext.baseline != osc_seq_common(&s, &t) {
                    failures.push(json!({"s": s, "t": t, "n": n}));
                }
            }
            other => failures.push(json!({"s": s, "t": t, "n": n, "result": format!("{other:?}")})),
        }
    }
    rec.check("extend-splitting-exact", b.extend_instances, failures, Value::Null);

    let p = CantorPairing;
    let mut refined = Vec::new();
    let mut tried = 0;
    while tried < 100 {
        let s = random_increasing(rng, 4, 20);
        let t = random_increasing(rng, 4, 20);
        let Ok(first) = extend_splitting(full, full, &s, &t, rng.gen_range(1..=12)) else { continue };
        tried += 1;
        let top = 63 - first.osc.leading_zeros() as u64;
        let room = (1u64 << (top + 1)) - 1 - first.osc;
        let bump = if room == 0 { 0 } else { rng.gen_range(0..=room) };
        let color = |x: &[u64], y: &[u64]| {
            let len = x.len().min(y.len());
            refined_color(&x[..len], &y[..len], &p)
        };
        match extend_splitting(full, full, &first.s, &first.t, bump) {
            Ok(second) if color(&first.s, &first.t).is_ok() && color(&first.s, &first.t) == color(&second.s, &second.t) => {}
            other => refined.push(json!({"s": s, "t": t, "bump": bump, "result": format!("{other:?}")})),
        }
    }
    rec.check("refined-color-top-bit-invariance", tried, refined, Value::Null);

    let mut pairing = Vec::new();
    for _ in 0..10_000 {
        let (a, c) = (rng.gen_range(0..1u64 << 16), rng.gen_range(0..1u64 << 16));
        if p.unpair(p.pair(a, c)) != (a, c) {
            pairing.push(json!({"a": a, "b": c}));
        }
    }
    rec.check("pairing-round-trip", 10_000, pairing, Value::Null);

    let mut codes = Vec::new();
    let mut seen = BTreeMap::new();
    for _ in 0..100 {
        let r = random_rectangle(rng);
        match rectangle_index(&r) {
            Ok(idx) => {
                if decode_rectangle(&idx) != r || seen.insert(idx.clone(), r.clone()).is_some_and(|prev| prev != r) {
                    codes.push(json!({"rectangle": r}));
                }
            }
            Err(e) => codes.push(json!({"rectangle": r, "error": e.to_string()})),
        }
    }
    rec.check("rectangle-encode-decode", 100, codes, Value::Null);

    let mut demo = Vec::new();
    for code in 0..256u32 {
        let u: Vec<Vec<u8>> = (0..2).map(|i| (0..2).map(|j| ((code >> (2 * (2 * i + j))) & 3) as u8).collect()).collect();
        match hit_target(full, full, &u, &p, 1 << 20) {
            Ok(d) if d.colors.iter().zip(&u).all(|(c, w)| c.iter().zip(w).all(|(x, y)| *x == *y as u64)) => {}
            other => demo.push(json!({"u": u, "result": format!("{other:?}")})),
        }
    }
    rec.check("final-color-hits-every-2x2-target", 256, demo, Value::Null);

    let mut demo3 = Vec::new();
    for _ in 0..8 {
        let u: Vec<Vec<u8>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..4)).collect()).collect();
        match hit_target(full, full, &u, &p, 1 << 20) {
            Ok(d) if d.colors.iter().zip(&u).all(|(c, w)| c.iter().zip(w).all(|(x, y)| *x == *y as u64)) => {}
            other => demo3.push(json!({"u": u, "result": format!("{other:?}")})),
        }
    }
    rec.check("final-color-hits-sampled-3x3-targets", 8, demo3, Value::Null);
}

// ---------------------------------------------------------------- walks

/// The fixed sample behind the trace-concatenation check: `count` distinct
/// nonzero `ω²a + ωb + c` with `a, b, c ≤ 7`, sorted.
pub fn concat_sample(rng: &mut ChaCha8Rng, count: usize) -> Vec<Ordinal> {
    let mut pool: Vec<Ordinal> = (0..8)
        .flat_map(|a| (0..8).flat_map(move |b| (0..8).map(move |c| below_omega_cubed(a, b, c))))
        .filter(|o| !o.is_zero())
        .collect();
    pool.shuffle(rng);
    pool.truncate(count);
    pool.sort();
    pool
}

/// Checks `max L(β,γ) < min L(α,β) ⇒ L(α,γ) = L(α,β) ∪ L(β,γ)` over all
/// `α < β < γ` in `sample`. Returns (hypothesis count, failures).
pub fn concat_check(sample: &[Ordinal]) -> (u64, Vec<Value>) {
    let l = Ladders;
    let n = sample.len();
    let mut lower: Vec<Vec<Vec<Ordinal>>> = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            lower[i][j] = walk(&l, &sample[i], &sample[j]).map(|w| w.lower).unwrap_or_default();
        }
    }
    let mut hyp = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = concat_verdict(&lower[i][j], &lower[j][k], &lower[i][k]);
                if v.hypothesis {
                    hyp += 1;
                    if v.conclusion != Some(true) {
                        failures.push(json!({
                            "alpha": sample[i], "beta": sample[j], "gamma": sample[k]
                        }));
                    }
                }
            }
        }
    }
    (hyp, failures)
}

/// For `γ < β`: the least sampled threshold `α₀` past which every sampled
/// `α ∈ (α₀, β)` has `min L(α, β) > γ`, taken over the small sample, then
/// tested on the large one. Returns per-γ thresholds and failures.
pub fn lower_trace_limit_check(beta: &Ordinal, small: usize, large: usize) -> (Vec<(Ordinal, Ordinal)>, Vec<Value>) {
    let l = Ladders;
    let min_lower = |a: &Ordinal| walk(&l, a, beta).ok().and_then(|w| w.lower.into_iter().min());
    let mut fit: Vec<Ordinal> = enumerate_below(beta, small).0;
    fit.retain(|a| !a.is_zero());
    fit.sort();
    let mut test: Vec<Ordinal> = enumerate_below(beta, large).0;
    test.retain(|a| !a.is_zero());
    let lows: BTreeMap<Ordinal, Option<Ordinal>> =
        fit.iter().chain(&test).map(|a| (a.clone(), min_lower(a))).collect();
    let min_lower = |a: &Ordinal| lows[a].clone();
    let gammas: Vec<Ordinal> = enumerate_below(beta, 24).0;
    let mut thresholds = Vec::new();
    let mut failures = Vec::new();
    for gamma in gammas {
        let threshold = fit
            .iter()
            .filter(|a| min_lower(a).is_none_or(|m| m <= gamma))
            .max()
            .cloned()
            .unwrap_or_else(Ordinal::zero);
        let fresh: Vec<&Ordinal> = test.iter().filter(|a| **a > threshold).collect();
        let bad: Vec<&&Ordinal> = fresh.iter().filter(|a| min_lower(a).is_none_or(|m| m <= gamma)).collect();
        if fresh.is_empty() || !bad.is_empty() {
            failures.push(json!({
                "beta": beta, "gamma": gamma, "threshold": threshold,
                "violations": bad.iter().take(5).collect::<Vec<_>>()
            }));
        }
        thresholds.push((gamma, threshold));
    }
    (thresholds, failures)
}

/// For each budget `b`: the number of `ξ` with `e(β, ξ) = v`, for each
/// `v ≤ max_v`, among the first `b` ordinals below `β`.
pub fn preimage_counts(beta: &Ordinal, max_v: u64, budgets: &[usize]) -> Vec<Vec<u64>> {
    let l = Ladders;
    let largest = budgets.iter().copied().max().unwrap_or(0);
    let values: Vec<Option<u64>> = enumerate_below(beta, largest)
        .0
        .iter()
        .map(|xi| e_value(&l, beta, xi).ok())
        .collect();
    budgets
        .iter()
        .map(|&b| {
            let mut counts = vec![0; max_v as usize + 1];
            for v in values.iter().take(b).flatten() {
                if *v <= max_v {
                    counts[*v as usize] += 1;
                }
            }
            counts
        })
        .collect()
}

/// Finite-to-one evidence: a value whose count is positive and unchanged
/// from `small/2` to `small` has stopped growing; it must gain nothing
/// between `small` and `large`.
pub fn finite_to_one_check(beta: &Ordinal, max_v: u64, small: usize, large: usize) -> (Value, Vec<Value>) {
    let counts = preimage_counts(beta, max_v, &[small / 2, small, large]);
    let (half, at_small, at_large) = (&counts[0], &counts[1], &counts[2]);
    let mut failures = Vec::new();
    let mut stopped = Vec::new();
    for v in 0..=max_v as usize {
        if at_small[v] > 0 && half[v] == at_small[v] {
            stopped.push(v);
            if at_large[v] != at_small[v] {
                failures.push(json!({"beta": beta, "value": v, "small": at_small[v], "large": at_large[v]}));
            }
        }
    }
    (
        json!({"beta": beta, "stopped_values": stopped, "counts_small": at_small, "counts_large": at_large}),
        failures,
    )
}

/// For each budget: disagreements `e(α, ξ) ≠ e(β, ξ)` among the first
/// `budget` ordinals below `α`.
pub fn disagreement_counts(alpha: &Ordinal, beta: &Ordinal, budgets: &[usize]) -> Vec<u64> {
    let l = Ladders;
    let largest = budgets.iter().copied().max().unwrap_or(0);
    let differs: Vec<bool> = enumerate_below(alpha, largest)
        .0
        .iter()
        .map(|xi| e_value(&l, alpha, xi).ok() != e_value(&l, beta, xi).ok())
        .collect();
    budgets
        .iter()
        .map(|&b| differs.iter().take(b).filter(|d| **d).count() as u64)
        .collect()
}

fn walks_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, b: &Budgets) {
    let l = Ladders;
    let sample = concat_sample(rng, b.concat_sample as usize);

    let mut shape_failures = Vec::new();
    let mut walks = 0;
    for (i, alpha) in sample.iter().enumerate().step_by(3) {
        for beta in sample[i..].iter().step_by(3) {
            walks += 1;
            let Ok(w) = walk(&l, alpha, beta) else {
                shape_failures.push(json!({"alpha": alpha, "beta": beta}));
                continue;
            };
            let upper_ok = w.upper.windows(2).all(|p| p[0] > p[1])
                && w.upper.first() == Some(beta)
                && w.upper.last() == Some(alpha);
            let lower_ok = w.lower.windows(2).all(|p| p[0] <= p[1]) && w.lower.len() + 1 == w.upper.len();
            let osc_ok = alpha == beta
                || osc_ordinal(&l, alpha, beta).is_ok_and(|r| r.value as usize <= w.lower.len().saturating_sub(1));
            if !(upper_ok && lower_ok && osc_ok) {
                shape_failures.push(json!({"alpha": alpha, "beta": beta}));
            }
        }
    }
    rec.check("walk-trace-shape-and-osc-bound", walks, shape_failures, Value::Null);

    let mut ladder_failures = Vec::new();
    let limits: Vec<Ordinal> = enumerate_below(&"w^(w)".parse().unwrap(), 400)
        .0
        .into_iter()
        .filter(Ordinal::is_limit)
        .take(60)
        .collect();
    for lambda in &limits {
        let elems: Vec<Ordinal> = (0..20).filter_map(|i| l.element(lambda, i)).collect();
        let increasing = elems.len() == 20 && elems.windows(2).all(|p| p[0] < p[1]) && elems.iter().all(|e| e < lambda);
        let cofinal = enumerate_below(lambda, 30)
            .0
            .iter()
            .all(|g| (0..64).any(|i| l.element(lambda, i).is_some_and(|e| e > *g)));
        if !(increasing && cofinal && elems[0].is_zero()) {
            ladder_failures.push(json!({"lambda": lambda}));
        }
    }
    rec.check("ladder-increasing-and-cofinal", limits.len() as u64, ladder_failures, Value::Null);

    let (hyp, failures) = concat_check(&sample);
    let n = sample.len() as u64;
    rec.check(
        "lower-trace-concatenation",
        n * (n - 1) * (n - 2) / 6,
        failures,
        json!({"sample": sample.len(), "hypothesis_holds": hyp}),
    );

    let mut limit_failures = Vec::new();
    let mut thresholds = BTreeMap::new();
    for beta in ["w", "w^2", "w*3"] {
        let beta: Ordinal = beta.parse().unwrap();
        let (found, failures) = lower_trace_limit_check(&beta, 500, 5000);
        thresholds.insert(
            beta.to_string(),
            found.iter().map(|(g, t)| json!([g, t])).collect::<Vec<_>>(),
        );
        limit_failures.extend(failures);
    }
    rec.check(
        "lower-trace-minimum-tends-to-beta",
        3,
        limit_failures,
        json!({"thresholds": thresholds}),
    );

    let mut fto = Vec::new();
    let mut fto_details = Vec::new();
    let betas: Vec<Ordinal> = ["w^2", "w^2+w", "w^3"].iter().map(|t| t.parse().unwrap()).collect();
    let results = parallel_map(&betas, |beta| {
        finite_to_one_check(beta, 20, b.window_small as usize, b.window_large as usize)
    });
    for (details, failures) in results {
        fto_details.push(details);
        fto.extend(failures);
    }
    rec.check("e-finite-to-one-stabilizes", 3, fto, json!(fto_details));

    let mut coherence = Vec::new();
    let mut pairs = Vec::new();
    let candidates: Vec<Ordinal> = sample.iter().filter(|o| !o.is_zero()).cloned().collect();
    while pairs.len() < 8 {
        let a = candidates.choose(rng).unwrap().clone();
        let c = candidates.choose(rng).unwrap().clone();
        if a < c {
            pairs.push((a, c));
        }
    }
    let windows = [b.window_small as usize, b.window_large as usize];
    let found = parallel_map(&pairs, |(a, c)| disagreement_counts(a, c, &windows));
    let mut counts = Vec::new();
    for ((a, c), found) in pairs.iter().zip(found) {
        let (small, large) = (found[0], found[1]);
        counts.push(json!({"alpha": a, "beta": c, "small": small, "large": large}));
        if small != large {
            coherence.push(json!({"alpha": a, "beta": c, "small": small, "large": large}));
        }
    }
    rec.check("e-coherence-stabilizes", pairs.len() as u64, coherence, json!(counts));
}

// ---------------------------------------------------------------- lspace

fn lspace_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, b: &Budgets) {
    let z = [CircleAngle::sqrt(2)];
    let got = kronecker_search(&z, &[CircleAngle::zero()], &[CircleAngle::ratio(1, 2)], 0.3, b.kronecker_cap);
    let fail = if got == Ok(6) { vec![] } else { vec![json!({"result": format!("{got:?}")})] };
    rec.check("kronecker-sqrt2-half-turn", 1, fail, Value::Null);

    let mut relations = Vec::new();
    for size in 1..=8 {
        let angles: Vec<CircleAngle> = squarefrees(size).into_iter().map(CircleAngle::sqrt).collect();
        if let Some(rel) = find_integer_relation(&angles, 5) {
            relations.push(json!({"session_size": size, "relation": rel}));
        }
    }
    rec.check("rational-independence-up-to-8-points", 8, relations, Value::Null);

    let mut exact = Vec::new();
    for _ in 0..200 {
        let base = CircleAngle::sqrt(*squarefrees(6).choose(rng).unwrap())
            .add(&CircleAngle::ratio(rng.gen_range(0..50), rng.gen_range(1..50)));
        let (p, q) = (rng.gen_range(0..=1000u64), rng.gen_range(0..=1000u64));
        if base.power(p).power(q) != base.power(p * q) || base.scale(&BigInt::from(p)) != base.power(p) {
            exact.push(json!({"angle": base, "a": p, "b": q}));
        }
    }
    rec.check("angle-power-exact", 200, exact, Value::Null);

    let mut kron = Vec::new();
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let roots = squarefrees(8);
        let zs: Vec<CircleAngle> = roots.choose_multiple(rng, k).map(|&m| CircleAngle::sqrt(m)).collect();
        let us: Vec<CircleAngle> = (0..k).map(|_| CircleAngle::ratio(rng.gen_range(0..16), 16)).collect();
        let vs: Vec<CircleAngle> = (0..k).map(|_| CircleAngle::ratio(rng.gen_range(0..16), 16)).collect();
        match kronecker_search(&zs, &us, &vs, 0.3, b.kronecker_cap) {
            Ok(m) if exact_hit(&zs, &us, &vs, 0.3, m) && !(0..m).any(|j| exact_hit(&zs, &us, &vs, 0.3, j)) => {}
            other => kron.push(json!({"z": zs, "u": us, "v": vs, "result": format!("{other:?}")})),
        }
    }
    rec.check("kronecker-least-and-exact", 20, kron, Value::Null);

    let l = Ladders;
    let pool: Vec<Ordinal> = concat_sample(rng, 70);
    let xs: Vec<Ordinal> = pool[..50].to_vec();
    let betas: Vec<Ordinal> = pool[50..].to_vec();
    let zs = ZAssignment::new(pool.iter().cloned());
    let mut circle = Vec::new();
    let rows = sample_lspace(&l, &zs, &xs, &betas);
    let count = rows.as_ref().map_or(0, Vec::len) as u64;
    match rows {
        Ok(rows) => {
            for r in rows {
                let norm = (r.x * r.x + r.y * r.y - 1.0).abs();
                if norm > 1e-9 {
                    circle.push(json!({"beta": r.beta, "xi": r.xi, "norm_error": norm}));
                }
            }
        }
        Err(e) => circle.push(json!({"error": e.to_string()})),
    }
    rec.check("w-points-on-unit-circle", count, circle, Value::Null);

    let mut consistency = Vec::new();
    for (i, a) in xs.iter().enumerate().take(10) {
        let c = &betas[i];
        if a < c {
            let o = crate::lspace::moore_color(&l, &zs, a, c);
            let expect = osc_ordinal(&l, a, c).map(|r| zs.z(a).unwrap().power(r.value + 1));
            if o.ok() != expect.ok() {
                consistency.push(json!({"alpha": a, "beta": c}));
            }
        }
    }
    rec.check("moore-color-composition", 10, consistency, Value::Null);

    let a_family: Vec<Vec<Ordinal>> = xs.iter().take(20).map(|x| vec![x.clone()]).collect();
    let b_family: Vec<Vec<Ordinal>> = betas.iter().map(|x| vec![x.clone()]).collect();
    let everywhere = [Target {
        center: CircleAngle::zero(),
        radius: 2.0,
    }];
    let mut hit = Vec::new();
    let report = neighborhood_hit(&l, &zs, &a_family, &b_family, &everywhere, &[0], 10_000);
    let first_admissible = a_family.iter().enumerate().find_map(|(i, a)| {
        b_family.iter().position(|bb| a[0] < bb[0]).map(|j| (i, j))
    });
    match report {
        Ok(r) if r.first_hit == first_admissible && r.hits == r.examined => {}
        other => hit.push(json!({"result": format!("{other:?}")})),
    }
    let probe = angle_distance(&CircleAngle::zero(), &CircleAngle::ratio(1, 2));
    rec.check("full-circle-target-hits-first-pair", 1, hit, json!({"antipodal_chord": probe}));
}
