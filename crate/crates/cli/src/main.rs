//! `oplab`: command-line access to identity ideals, operadic ideal slices and the slice cache.
//!
//! Every invocation prints one JSON report with sorted keys on standard output. Exit status is
//! 0 on success, 1 on a domain error (reported as an `error` object) and 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oplab::algebra::{is_identity_general, IdentityCheck};
use oplab::free::{multilinearize, parse, parse_list, phi, phi_inv};
use oplab::ideal::cache::{content_hash, generator_hash, SliceCache};
use oplab::ideal::{
    ideal_slice_closure, ideal_slice_spanning, roundtrip_check, verify_ideal_closure,
    IdentityTower,
};
use oplab::{Algebra, Element, Error, Generators, Mode, Multilinear, Poly, Rational, Result, Slice};

#[derive(Parser)]
#[command(name = "oplab", version, about = "Operadic ideals of As and polynomial identities")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Whether substituting the nullary unit is allowed.
    #[arg(long, global = true, default_value = "unital")]
    mode: Mode,
    /// Directory of the slice cache; caching is off when unset.
    #[arg(long, global = true, env = "OPLAB_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Largest number of basis tuples an exhaustive evaluation may visit.
    #[arg(long, global = true, default_value_t = oplab::algebra::DEFAULT_BUDGET)]
    budget: u64,
    /// Extra arities explored by the closure method.
    #[arg(long, global = true, default_value_t = oplab::ideal::DEFAULT_HEADROOM)]
    headroom: usize,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Add timing and cache statistics to the report.
    #[arg(long, global = true)]
    stats: bool,
}

/// Generators given as multilinear polynomials, operad elements, or a file of polynomials.
#[derive(Args, Clone, Default)]
struct GenArgs {
    /// Multilinear polynomials separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    /// File of multilinear polynomials separated by ';'.
    #[arg(long)]
    gens_file: Option<PathBuf>,
    /// A generator written as an operad element, e.g. "1*(1,2) - 1*(2,1)". Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    gen_elem: Vec<String>,
}

#[derive(Args, Clone, Default)]
struct OtherGenArgs {
    #[arg(long, allow_hyphen_values = true)]
    other_gens: Option<String>,
    #[arg(long)]
    other_gens_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    other_gen_elem: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Spanning,
    Closure,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a polynomial is an identity of an algebra.
    CheckIdentity {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Algebra description as JSON, or @path to a JSON file.
        #[arg(long)]
        algebra: String,
    },
    /// Least degree of a multilinear identity.
    MinDegree {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        max: usize,
    },
    /// Codimension n! - dim of the identities in arity n.
    Codim {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        n: usize,
    },
    /// Dimension of the arity-n slice of a generated ideal.
    IdealDim {
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "spanning")]
        method: Method,
        /// Also list the canonical basis.
        #[arg(long)]
        basis: bool,
        /// Also compare against one more arity of headroom (closure method).
        #[arg(long)]
        check_stable: bool,
    },
    /// Whether an element lies in a generated ideal.
    Membership {
        #[command(flatten)]
        gens: GenArgs,
        /// The element as an operad element.
        #[arg(long, conflicts_with = "poly", allow_hyphen_values = true)]
        element: Option<String>,
        /// The element as a multilinear polynomial.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Whether two generator sets give the same slices up to an arity.
    SlicesEqual {
        #[command(flatten)]
        gens: GenArgs,
        #[command(flatten)]
        other: OtherGenArgs,
        #[arg(long)]
        max: usize,
    },
    /// Recompute slices from their own multilinear generators and compare.
    Roundtrip {
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long)]
        max: usize,
    },
    /// Check that identity slices or generated slices are closed under the operad operations.
    ClosureVerify {
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        max: usize,
    },
    /// Convert between operad elements and multilinear polynomials.
    Phi {
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly", allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Multilinear components of a polynomial.
    Multilinearize {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Partial or full composition of operad elements.
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        outer: String,
        /// Partial composition into this slot; otherwise every --inner fills one slot.
        #[arg(long)]
        slot: Option<usize>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        inner: Vec<String>,
    },
    /// Inspect or clean the slice cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    List,
    /// Remove unreadable entries, or everything with --all.
    Gc {
        #[arg(long)]
        all: bool,
    },
}

/// Shared state of one invocation.
struct Context {
    mode: Mode,
    budget: u64,
    headroom: usize,
    cache: Option<SliceCache>,
    hits: usize,
    misses: usize,
}

impl Context {
    fn spanning(&mut self, g: &Generators, n: usize) -> Result<Slice> {
        let hash = generator_hash(g);
        self.cached(&hash, n, || Ok(ideal_slice_spanning(g, n)))
    }

    fn cached(&mut self, hash: &str, n: usize, compute: impl FnOnce() -> Result<Slice>) -> Result<Slice> {
        let Some(cache) = &self.cache else {
            return compute();
        };
        if let Some(slice) = cache.load(hash, self.mode, n) {
            self.hits += 1;
            return Ok(slice);
        }
        self.misses += 1;
        let slice = compute()?;
        cache.store(hash, self.mode, &slice)?;
        Ok(slice)
    }

    fn identities(&mut self, algebra: &Algebra, tower: &mut IdentityTower<'_, oplab::Rational>, n: usize) -> Result<Slice> {
        let spec = serde_json::to_string(&algebra.to_spec())?;
        let hash = content_hash("identities", &[spec]);
        // identity ideals do not depend on the mode; store them under the unital tag
        let mode = std::mem::replace(&mut self.mode, Mode::Unital);
        let out = self.cached(&hash, n, || tower.slice(n));
        self.mode = mode;
        out
    }
}

fn read_algebra(text: &str) -> Result<Algebra> {
    match text.strip_prefix('@') {
        Some(path) => Algebra::from_json(&std::fs::read_to_string(path)?),
        None => Algebra::from_json(text),
    }
}

fn multilinear(text: &str) -> Result<Multilinear> {
    Multilinear::new(parse(text)?)
}

fn generators(
    mode: Mode,
    polys: Option<&str>,
    file: Option<&PathBuf>,
    elements: &[String],
) -> Result<Generators> {
    let mut gens = Vec::new();
    let mut texts = Vec::new();
    if let Some(p) = polys {
        texts.push(p.to_string());
    }
    if let Some(path) = file {
        texts.push(std::fs::read_to_string(path)?);
    }
    for text in texts {
        for poly in parse_list(&text)? {
            gens.push(phi_inv(&Multilinear::new(poly)?));
        }
    }
    for e in elements {
        gens.push(e.parse::<Element>()?);
    }
    Generators::new(gens, mode)
}

fn gen_set(mode: Mode, g: &GenArgs) -> Result<Generators> {
    generators(mode, g.gens.as_deref(), g.gens_file.as_ref(), &g.gen_elem)
}

fn slice_json(slice: &Slice, with_basis: bool) -> Value {
    let mut out = json!({
        "arity": slice.arity(),
        "dim": slice.dim(),
        "codim": slice.codim(),
    });
    if with_basis {
        out["basis"] = slice.elements().iter().map(|e| Value::String(e.to_string())).collect();
    }
    out
}

fn run(command: &Command, ctx: &mut Context) -> Result<Value> {
    let mode = ctx.mode;
    match command {
        Command::CheckIdentity { poly, algebra } => {
            let f: Poly = parse(poly)?;
            let a = read_algebra(algebra)?;
            let check = IdentityCheck { budget: ctx.budget, ..IdentityCheck::default() };
            Ok(json!({ "identity": is_identity_general(&f, &a, &check)? }))
        }
        Command::MinDegree { algebra, max } => {
            let a = read_algebra(algebra)?;
            let mut tower = IdentityTower::new(&a, ctx.budget);
            let mut found = None;
            for n in 1..=*max {
                if !ctx.identities(&a, &mut tower, n)?.is_zero() {
                    found = Some(n);
                    break;
                }
            }
            Ok(json!({ "min_degree": found, "max": max }))
        }
        Command::Codim { algebra, n } => {
            let a = read_algebra(algebra)?;
            let mut tower = IdentityTower::new(&a, ctx.budget);
            let slice = ctx.identities(&a, &mut tower, *n)?;
            Ok(json!({ "codim": slice.codim(), "arity": n, "identities_dim": slice.dim() }))
        }
        Command::IdealDim { gens, n, method, basis, check_stable } => {
            let g = gen_set(mode, gens)?;
            let (slice, name) = match method {
                Method::Spanning => (ctx.spanning(&g, *n)?, "spanning"),
                Method::Closure => (ideal_slice_closure(&g, *n, ctx.headroom), "closure"),
            };
            let mut out = slice_json(&slice, *basis);
            out["method"] = json!(name);
            if *check_stable {
                out["stable"] = json!(oplab::ideal::closure_is_stable(&g, *n, ctx.headroom));
            }
            Ok(out)
        }
        Command::Membership { gens, element, poly } => {
            let g = gen_set(mode, gens)?;
            let theta = match (element, poly) {
                (Some(e), _) => e.parse::<Element>()?,
                (None, Some(p)) => phi_inv(&multilinear(p)?),
                (None, None) => return Err(Error::Parse { pos: 0, message: "give --element or --poly".into() }),
            };
            let slice = ctx.spanning(&g, theta.arity())?;
            Ok(json!({ "member": slice.contains(&theta)?, "arity": theta.arity(), "slice_dim": slice.dim() }))
        }
        Command::SlicesEqual { gens, other, max } => {
            let g1 = gen_set(mode, gens)?;
            let g2 = generators(mode, other.other_gens.as_deref(), other.other_gens_file.as_ref(), &other.other_gen_elem)?;
            let mut dims = Vec::new();
            let mut first_difference = None;
            for n in 0..=*max {
                let (a, b) = (ctx.spanning(&g1, n)?, ctx.spanning(&g2, n)?);
                if a != b && first_difference.is_none() {
                    first_difference = Some(n);
                }
                dims.push(json!([a.dim(), b.dim()]));
            }
            Ok(json!({ "equal": first_difference.is_none(), "first_difference": first_difference, "dims": dims }))
        }
        Command::Roundtrip { gens, max } => {
            let g = gen_set(mode, gens)?;
            Ok(serde_json::to_value(roundtrip_check(&g, *max))?)
        }
        Command::ClosureVerify { gens, algebra, max } => {
            let mut slices = std::collections::BTreeMap::new();
            let low = mode.min_arity();
            match algebra {
                Some(text) => {
                    let a = read_algebra(text)?;
                    let mut tower = IdentityTower::new(&a, ctx.budget);
                    for n in low..=*max {
                        slices.insert(n, ctx.identities(&a, &mut tower, n)?);
                    }
                }
                None => {
                    let g = gen_set(mode, gens)?;
                    for n in low..=*max {
                        slices.insert(n, ctx.spanning(&g, n)?);
                    }
                }
            }
            let report = verify_ideal_closure(&slices, mode, *max)?;
            let mut out = serde_json::to_value(&report)?;
            out["closed"] = json!(report.closed());
            Ok(out)
        }
        Command::Phi { element, poly } => match (element, poly) {
            (Some(e), _) => {
                let theta: Element = e.parse()?;
                Ok(json!({ "poly": phi(&theta).to_string(), "arity": theta.arity() }))
            }
            (None, Some(p)) => {
                let f = multilinear(p)?;
                Ok(json!({ "element": phi_inv(&f).to_string(), "arity": f.arity() }))
            }
            (None, None) => Err(Error::Parse { pos: 0, message: "give --element or --poly".into() }),
        },
        Command::Multilinearize { poly } => {
            let components = multilinearize(&parse::<Rational>(poly)?)?;
            let list: Vec<Value> = components
                .iter()
                .map(|c| json!({ "arity": c.arity(), "poly": c.to_string() }))
                .collect();
            Ok(json!({ "components": list }))
        }
        Command::Compose { outer, slot, inner } => {
            let mu: Element = outer.parse()?;
            let parts = inner.iter().map(|s| s.parse::<Element>()).collect::<Result<Vec<_>>>()?;
            let result = match slot {
                Some(i) => {
                    if parts.len() != 1 {
                        return Err(Error::WrongPartCount { expected: 1, found: parts.len() });
                    }
                    mu.partial_compose_in(mode, *i, &parts[0])?
                }
                None => mu.full_compose_in(mode, &parts)?,
            };
            Ok(json!({ "result": result.to_string(), "arity": result.arity() }))
        }
        Command::Cache { action } => {
            let Some(cache) = &ctx.cache else {
                return Ok(json!({ "cache_dir": null, "entries": [] }));
            };
            match action {
                CacheAction::List => {
                    Ok(json!({ "cache_dir": cache.dir().display().to_string(), "entries": cache.list()? }))
                }
                CacheAction::Gc { all } => {
                    Ok(json!({ "cache_dir": cache.dir().display().to_string(), "removed": cache.gc(*all)? }))
                }
            }
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::CheckIdentity { .. } => "check-identity",
        Command::MinDegree { .. } => "min-degree",
        Command::Codim { .. } => "codim",
        Command::IdealDim { .. } => "ideal-dim",
        Command::Membership { .. } => "membership",
        Command::SlicesEqual { .. } => "slices-equal",
        Command::Roundtrip { .. } => "roundtrip",
        Command::ClosureVerify { .. } => "closure-verify",
        Command::Phi { .. } => "phi",
        Command::Multilinearize { .. } => "multilinearize",
        Command::Compose { .. } => "compose",
        Command::Cache { action: CacheAction::List } => "cache list",
        Command::Cache { action: CacheAction::Gc { .. } } => "cache gc",
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let started = Instant::now();
    let mut ctx = Context {
        mode: cli.global.mode,
        budget: cli.global.budget,
        headroom: cli.global.headroom,
        cache: cli.global.cache_dir.as_ref().map(SliceCache::new),
        hits: 0,
        misses: 0,
    };
    let outcome = run(&cli.command, &mut ctx);
    let mut report = json!({
        "command": command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let code = match outcome {
        Ok(result) => {
            report["result"] = result;
            ExitCode::SUCCESS
        }
        Err(e) => {
            report["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
            ExitCode::from(1)
        }
    };
    if cli.global.stats {
        report["stats"] = json!({
            "elapsed_ms": started.elapsed().as_millis() as u64,
            "cache_hits": ctx.hits,
            "cache_misses": ctx.misses,
        });
    }
    let text = if cli.global.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("JSON values always serialize");
    println!("{text}");
    code
}
