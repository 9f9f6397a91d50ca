use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use osc_core::baire::{osc_infinite, realize_bits, BitString, TreeDescriptor, TreeOracle};
use osc_core::finite::{
    self, derivative_tower, realize_osc_triple, realize_oscillations, search_certificate, FamilyDescriptor,
    FiniteNatSet,
};
use osc_core::lspace::{self, CircleAngle, Target, ZAssignment};
use osc_core::ordinal::Ordinal;
use osc_core::seq::{self, CanonicalEnumeration, CantorPairing, IncreasingSeq, SeededEnumeration};
use osc_core::verify::{verify_suite, SUITES};
use osc_core::walks::{self, Ladders};

#[derive(Parser)]
#[command(name = "osc", version, about = "Oscillation colorings, ordinal walks and their verification suites")]
struct Cli {
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format; defaults to text, or json for `verify`
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Record wall time in `elapsed_ms`
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Oscillation of finite sets, sequences, triples or ordinals
    #[command(subcommand)]
    Osc(OscCommand),
    /// Upper and lower trace of the walk from beta down to alpha
    Walk(OrdinalPair),
    /// Members of a truncated derivative, or realizations from a certificate
    Derivative(DerivativeArgs),
    /// Build prefixes whose triple oscillation reads the given bits
    RealizeBits(RealizeArgs),
    /// Extend splitting nodes so their oscillation grows by exactly n
    ExtendSplitting(ExtendArgs),
    /// Derived colorings
    #[command(subcommand)]
    Color(ColorCommand),
    /// Least m with |u_i z_i^m - v_i| < eps for all i
    Kronecker(KroneckerArgs),
    /// Circle-valued point families
    #[command(subcommand)]
    Lspace(LspaceCommand),
    /// Run a verification suite
    Verify {
        /// finite, baire, seq, walks, lspace or all
        suite: String,
    },
}

#[derive(Subcommand)]
enum OscCommand {
    /// Classes of the symmetric difference of two finite sets
    Finite {
        #[arg(long, allow_hyphen_values = true)]
        s: FiniteNatSet,
        #[arg(long, allow_hyphen_values = true)]
        t: FiniteNatSet,
    },
    /// Crossings of two increasing sequences of equal length
    Seq {
        #[arg(long)]
        s: IncreasingSeq,
        #[arg(long)]
        t: IncreasingSeq,
    },
    /// Oscillation of three pairwise distinct finite sets
    Triple {
        #[arg(long)]
        s: FiniteNatSet,
        #[arg(long)]
        t: FiniteNatSet,
        #[arg(long)]
        u: FiniteNatSet,
    },
    /// Oscillation of e along the lower trace
    Ordinal(OrdinalPair),
}

#[derive(Args)]
struct OrdinalPair {
    #[arg(long)]
    alpha: Ordinal,
    #[arg(long)]
    beta: Ordinal,
}

#[derive(Args)]
struct DerivativeArgs {
    /// `canonical:k=<int>,M=<int>` or `explicit:<path>`
    #[arg(long)]
    family: String,
    /// Derivative order
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Test a single set instead of listing members
    #[arg(long)]
    member: Option<FiniteNatSet>,
    /// Search a depth-k certificate and realize oscillations 1..2k-1
    #[arg(long)]
    realize: bool,
    /// Root of the certificate search
    #[arg(long, default_value = "")]
    root: FiniteNatSet,
    /// Members listed, or witnesses explored by the certificate search
    #[arg(long, default_value_t = 10_000)]
    limit: usize,
}

#[derive(Args)]
struct RealizeArgs {
    /// Target bits, e.g. 0110
    #[arg(long)]
    alpha: BitString,
    /// Three tree descriptors (`full`, `even`, `nodes:<path>`)
    #[arg(long, default_value = "full,full,full")]
    trees: String,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long, default_value = "")]
    s: IncreasingSeq,
    #[arg(long, default_value = "")]
    t: IncreasingSeq,
    #[arg(long)]
    n: u64,
    /// Two tree descriptors
    #[arg(long, default_value = "full,full")]
    trees: String,
}

#[derive(Subcommand)]
enum ColorCommand {
    /// Pairing coordinate of the top binary digit of osc
    Refined {
        #[arg(long)]
        f: IncreasingSeq,
        #[arg(long)]
        g: IncreasingSeq,
    },
    /// Rectangle coloring; with `--target`, builds pairs hitting a target matrix
    Final {
        #[arg(long)]
        f: Option<IncreasingSeq>,
        #[arg(long)]
        g: Option<IncreasingSeq>,
        /// Target rows separated by `;`, entries by `,` (values 0..=3, n ≤ 3)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value = "seeded")]
        enumeration: Enumeration,
        /// Cap on crossing rounds for `--target`
        #[arg(long, default_value_t = 1 << 20)]
        max_steps: u64,
    },
    /// z_alpha raised to osc(alpha, beta) + 1
    Moore {
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long)]
        beta: Ordinal,
        /// Session ordinals, comma-separated; alpha is always included
        #[arg(long, default_value = "")]
        session: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Enumeration {
    Seeded,
    Canonical,
}

#[derive(Args)]
struct KroneckerArgs {
    /// Angles separated by `;`, e.g. `sqrt(2);sqrt(3)`
    #[arg(long)]
    z: String,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 10_000_000)]
    cap: u64,
}

#[derive(Subcommand)]
enum LspaceCommand {
    /// Table of w_beta(xi) for beta in B, xi in X
    Sample {
        /// X, comma-separated ordinals
        #[arg(long)]
        xs: String,
        /// B, comma-separated ordinals
        #[arg(long)]
        betas: String,
    },
    /// Search a in A, b in B with max(a) < min(b) and every color in its target
    Hit {
        /// k-tuples separated by `;`, entries by `,`
        #[arg(long)]
        a: String,
        /// l-tuples separated by `;`, entries by `,`
        #[arg(long)]
        b: String,
        /// k target centers separated by `;`
        #[arg(long)]
        centers: String,
        /// Chordal radius of every target; 2 or more covers the circle
        #[arg(long)]
        eps: f64,
        /// φ: comma-separated indices into the B-tuples
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
}

/// What a command produced, before formatting.
struct Outcome {
    command: String,
    budgets: BTreeMap<String, u64>,
    result: Value,
    counterexamples: Value,
    table: Option<Vec<lspace::LRow>>,
    failed: bool,
}

impl Outcome {
    fn new(command: &str, result: Value) -> Self {
        Self {
            command: command.to_string(),
            budgets: BTreeMap::new(),
            result,
            counterexamples: json!([]),
            table: None,
            failed: false,
        }
    }

    fn budget(mut self, name: &str, value: u64) -> Self {
        self.budgets.insert(name.to_string(), value);
        self
    }
}

fn ordinals(text: &str) -> Result<Vec<Ordinal>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("bad ordinal {s:?}")))
        .collect()
}

fn tuples(text: &str) -> Result<Vec<Vec<Ordinal>>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(ordinals).collect()
}

fn angles(text: &str) -> Result<Vec<CircleAngle>> {
    text.split(';')
        .map(|s| s.parse().with_context(|| format!("bad angle {s:?}")))
        .collect()
}

fn trees(text: &str, count: usize) -> Result<Vec<Box<dyn TreeOracle<u64>>>> {
    let built = text
        .split(',')
        .map(|d| Ok(d.trim().parse::<TreeDescriptor>()?.build()?))
        .collect::<Result<Vec<_>>>()?;
    if built.len() != count {
        bail!("expected {count} tree descriptors, got {}", built.len());
    }
    Ok(built)
}

fn target_matrix(text: &str) -> Result<Vec<Vec<u8>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<u8>().with_context(|| format!("bad target entry {v:?}")))
                .collect()
        })
        .collect()
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<Value> {
    Ok(serde_json::to_value(value)?)
}

fn run_osc(cmd: OscCommand) -> Result<Outcome> {
    Ok(match cmd {
        OscCommand::Finite { s, t } => Outcome::new("osc finite", json!(finite::osc(&s, &t))),
        OscCommand::Seq { s, t } => Outcome::new("osc seq", json!(seq::osc_seq(s.as_slice(), t.as_slice())?)),
        OscCommand::Triple { s, t, u } => Outcome::new("osc triple", json!(finite::osc_triple(&s, &t, &u)?)),
        OscCommand::Ordinal(p) => {
            let report = walks::osc_ordinal(&Ladders, &p.alpha, &p.beta)?;
            Outcome::new("osc ordinal", to_value(&report)?)
        }
    })
}

fn run_derivative(args: DerivativeArgs) -> Result<Outcome> {
    let descriptor: FamilyDescriptor = args.family.parse()?;
    let family = descriptor.build()?;
    if args.realize {
        let cert = search_certificate(family.clone(), args.k, &args.root, args.limit)?;
        let pairs = realize_oscillations(family.clone(), &cert)?;
        let triples = realize_osc_triple(family, &cert)?;
        let result = json!({
            "certificate": cert,
            "pairs": pairs.iter().map(|(v, (a, b))| json!({"osc": v, "s": a, "t": b})).collect::<Vec<_>>(),
            "triples": triples
                .iter()
                .map(|(v, (a, b, c))| json!({"osc3": v, "s": a, "t": b, "u": c}))
                .collect::<Vec<_>>(),
        });
        return Ok(Outcome::new("derivative", result).budget("search", args.limit as u64));
    }
    let tower = derivative_tower(family.clone(), args.k);
    let level = &tower[args.k];
    if let Some(set) = args.member {
        return Ok(Outcome::new("derivative", json!({"set": set, "k": args.k, "member": level.contains(&set)})));
    }
    let empty = FiniteNatSet::empty();
    let mut members = Vec::new();
    let mut truncated = false;
    for candidate in std::iter::once(empty.clone()).chain(family.extensions(&empty, 0)) {
        if family.contains(&candidate) && level.contains(&candidate) {
            if members.len() == args.limit {
                truncated = true;
                break;
            }
            members.push(candidate);
        }
    }
    let result = json!({"k": args.k, "members": members, "truncated": truncated});
    Ok(Outcome::new("derivative", result).budget("limit", args.limit as u64))
}

fn run_color(cmd: ColorCommand) -> Result<Outcome> {
    let pairing = CantorPairing;
    Ok(match cmd {
        ColorCommand::Refined { f, g } => Outcome::new(
            "color refined",
            json!(seq::refined_color(f.as_slice(), g.as_slice(), &pairing)?),
        ),
        ColorCommand::Final {
            f,
            g,
            target,
            enumeration,
            max_steps,
        } => {
            if let Some(target) = target {
                if enumeration != Enumeration::Seeded {
                    let (index, m) = seq::canonical_requirement(&target_matrix(&target)?)?;
                    let result = json!({
                        "rectangle_index": index.to_string(),
                        "top_bit": m.to_string(),
                        "feasible": seq::small(&m).is_some_and(|m| m < 64 && (1u64 << m) <= max_steps),
                    });
                    return Ok(Outcome::new("color final", result).budget("max_steps", max_steps));
                }
                let full: Box<dyn TreeOracle<u64>> = Box::new(osc_core::baire::FullTree);
                let demo = seq::hit_target(full.as_ref(), full.as_ref(), &target_matrix(&target)?, &pairing, max_steps)?;
                return Ok(Outcome::new("color final", to_value(&demo)?).budget("max_steps", max_steps));
            }
            let (f, g) = f.zip(g).ok_or_else(|| anyhow!("color final needs --f and --g, or --target"))?;
            let value = match enumeration {
                Enumeration::Seeded => seq::final_color(f.as_slice(), g.as_slice(), &SeededEnumeration::new(), &pairing)?,
                Enumeration::Canonical => seq::final_color(f.as_slice(), g.as_slice(), &CanonicalEnumeration, &pairing)?,
            };
            Outcome::new("color final", json!(value))
        }
        ColorCommand::Moore { alpha, beta, session } => {
            let mut members = ordinals(&session)?;
            members.push(alpha.clone());
            let zs = ZAssignment::new(members);
            let angle = lspace::moore_color(&Ladders, &zs, &alpha, &beta)?;
            Outcome::new("color moore", json!(angle.to_string()))
        }
    })
}

fn run_lspace(cmd: LspaceCommand) -> Result<Outcome> {
    let l = Ladders;
    Ok(match cmd {
        LspaceCommand::Sample { xs, betas } => {
            let (xs, betas) = (ordinals(&xs)?, ordinals(&betas)?);
            let zs = ZAssignment::new(xs.iter().chain(&betas).cloned());
            let rows = lspace::sample_lspace(&l, &zs, &xs, &betas)?;
            let mut out = Outcome::new("lspace sample", to_value(&rows)?);
            out.table = Some(rows);
            out
        }
        LspaceCommand::Hit {
            a,
            b,
            centers,
            eps,
            phi,
            cap,
        } => {
            let (a, b) = (tuples(&a)?, tuples(&b)?);
            let targets: Vec<Target> = angles(&centers)?
                .into_iter()
                .map(|center| Target { center, radius: eps })
                .collect();
            let phi: Vec<usize> = phi
                .split(',')
                .map(|p| p.trim().parse().with_context(|| format!("bad index {p:?}")))
                .collect::<Result<_>>()?;
            let zs = ZAssignment::new(a.iter().chain(&b).flatten().cloned());
            let report = lspace::neighborhood_hit(&l, &zs, &a, &b, &targets, &phi, cap)?;
            Outcome::new("lspace hit", to_value(&report)?).budget("cap", cap)
        }
    })
}

fn run(command: Command, seed: u64) -> Result<Outcome> {
    Ok(match command {
        Command::Osc(cmd) => run_osc(cmd)?,
        Command::Walk(p) => Outcome::new("walk", to_value(&walks::walk(&Ladders, &p.alpha, &p.beta)?)?),
        Command::Derivative(args) => run_derivative(args)?,
        Command::RealizeBits(args) => {
            let trees = trees(&args.trees, 3)?;
            let r = realize_bits([trees[0].as_ref(), trees[1].as_ref(), trees[2].as_ref()], &args.alpha)?;
            let bits = osc_infinite(&r.triple);
            Outcome::new("realize-bits", json!({"triple": r.triple, "lead": r.lead, "bits": bits}))
        }
        Command::ExtendSplitting(args) => {
            let trees = trees(&args.trees, 2)?;
            let ext = seq::extend_splitting(trees[0].as_ref(), trees[1].as_ref(), args.s.as_slice(), args.t.as_slice(), args.n)?;
            Outcome::new("extend-splitting", to_value(&ext)?)
        }
        Command::Color(cmd) => run_color(cmd)?,
        Command::Kronecker(args) => {
            let (z, u, v) = (angles(&args.z)?, angles(&args.u)?, angles(&args.v)?);
            let m = lspace::kronecker_search(&z, &u, &v, args.eps, args.cap)?;
            Outcome::new("kronecker", json!(m)).budget("cap", args.cap)
        }
        Command::Lspace(cmd) => run_lspace(cmd)?,
        Command::Verify { suite } => {
            let report = verify_suite(&suite, seed)?;
            let mut out = Outcome::new(&format!("verify {suite}"), Value::Null);
            out.budgets = report.budgets.clone();
            out.counterexamples = to_value(&report.counterexamples)?;
            out.failed = !report.passed();
            out.result = json!({
                "suite": report.suite,
                "passed": report.passed(),
                "suites": if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] },
                "checks": report.checks,
            });
            out
        }
    })
}

fn render(out: &Outcome, format: Format, seed: u64, elapsed_ms: Option<u128>) -> Result<String> {
    Ok(match format {
        Format::Text => match &out.result {
            Value::String(s) => format!("{s}\n"),
            Value::Number(n) => format!("{n}\n"),
            other => format!("{}\n", serde_json::to_string(other)?),
        },
        Format::Json => {
            let envelope = json!({
                "command": out.command,
                "seed": seed,
                "budgets": out.budgets,
                "result": out.result,
                "counterexamples": out.counterexamples,
                "elapsed_ms": elapsed_ms,
            });
            format!("{}\n", serde_json::to_string_pretty(&envelope)?)
        }
        Format::Csv => {
            let rows = out
                .table
                .as_ref()
                .ok_or_else(|| anyhow!("csv output is only available for `lspace sample`"))?;
            let mut writer = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                writer.write_record(["beta", "xi", "angle_rational", "angle_terms", "x", "y"])?;
            }
            for row in rows {
                writer.serialize(row)?;
            }
            String::from_utf8(writer.into_inner()?)?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let default_format = match cli.command {
        Command::Verify { .. } => Format::Json,
        _ => Format::Text,
    };
    let format = cli.format.unwrap_or(default_format);
    let outcome = match run(cli.command, cli.seed) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = cli.timing.then(|| started.elapsed().as_millis());
    let text = match render(&outcome, format, cli.seed, elapsed) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
