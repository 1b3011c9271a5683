//! Command-line front end for `rankseq`.
//!
//! [`run`] parses arguments, writes JSON (or TSV with `--tsv`) to `out`,
//! diagnostics to `err`, and returns the process exit status: 0 on success,
//! 1 on usage or specification errors, 2 when a scale guard rejects the input.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rankseq::census::{self, AutoSet, CensusOptions};
use rankseq::codes::{self, AlphaSel, EtaSel};
use rankseq::invariants;
use rankseq::{Code, CodeSpec, Error, Family, FieldTower};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "rankseq", version, about = "Frobenius-sequence invariants of rank-metric codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the tower F_p ⊆ F_q ⊆ F_{q^m}.
    FieldInfo(FieldArgs),
    /// Build a code and print its generator matrix.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        /// Print the fully resolved spec instead of the generator.
        #[arg(long)]
        emit_spec: bool,
    },
    /// τ-sum dimensions s_0, s_1, … for one automorphism.
    Sequence {
        #[command(flatten)]
        code: CodeArgs,
        /// τ = x -> x^(q^auto_exp).
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        auto_exp: i64,
        /// Last index (default n − k).
        #[arg(long)]
        imax: Option<usize>,
        #[arg(long)]
        tsv: bool,
    },
    /// Sequences over a set of automorphisms.
    Fingerprint {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        autos: AutoArgs,
    },
    /// One-sided inequivalence test between two codes given as spec files.
    Distinguish {
        /// Two CodeSpec JSON files.
        #[arg(num_args = 2, required = true)]
        specs: Vec<PathBuf>,
        #[command(flatten)]
        autos: AutoArgs,
        /// Compare dim(C + τ^{p_1}(C) + …) for these powers instead.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["auto_exp", "auto_set"])]
        powers: Option<Vec<i64>>,
    },
    /// Fingerprint classes of the one-twist codes for a single (n, k).
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        run: CensusArgs,
        #[arg(long)]
        tsv: bool,
    },
    /// The census table: every 2 < k < n − 2 for n in a range.
    Table1 {
        /// A single n or a range such as 7-18.
        #[arg(long, default_value = "7-18", value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[command(flatten)]
        run: CensusArgs,
        #[arg(long)]
        tsv: bool,
    },
    /// φ(m)/2 classes of full-length Gabidulin codes.
    CountGabidulin {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
    },
    /// (φ(m)/2)·|X_q(m,k)| classes of full-length MRD twisted codes.
    CountSheekey(CountArgs),
    /// |X_q(m,k)|: automorphism orbits on the admissible twist scalars.
    CountOrbits(CountArgs),
    /// Brute-force minimum rank distance against the Singleton bound.
    MrdCheck {
        #[command(flatten)]
        code: CodeArgs,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    m: u32,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long, default_value = "m", value_parser = parse_auto_set)]
    auto_set: AutoSet,
    /// Twist scalar (default: smallest encoding outside F_{q^n}).
    #[arg(long, value_parser = parse_auto_u64)]
    eta: Option<Option<u64>>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct AutoArgs {
    /// Automorphism exponents (comma list).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    auto_exp: Option<Vec<i64>>,
    /// m: generators of Gal(F_{q^m}/F_q) (default); n: j < n coprime to n.
    #[arg(long, value_parser = parse_auto_set)]
    auto_set: Option<AutoSet>,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// CodeSpec JSON file; replaces the parameter flags.
    spec: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// σ = x -> x^(q^s).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    s: i64,
    #[arg(long, value_delimiter = ',')]
    h: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<usize>,
    /// auto, one encoding, or a comma list (one per twist).
    #[arg(long, default_value = "auto")]
    eta: String,
    /// auto, random (with --seed), or a comma list of encodings.
    #[arg(long, default_value = "auto")]
    alpha: String,
    /// Seed for --alpha random.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn parse_auto_set(s: &str) -> Result<AutoSet, String> {
    s.parse::<AutoSet>().map_err(|e| e.to_string())
}

fn parse_auto_u64(s: &str) -> Result<Option<u64>, String> {
    if s == "auto" {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| format!("expected an integer or auto, got {s:?}"))
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected N or A-B, got {s:?}");
    match s.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n = s.parse().map_err(|_| bad())?;
            Ok(n..=n)
        }
    }
}

fn parse_list(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| usage(format!("bad element {x:?}"))))
        .collect()
}

fn read_spec(path: &PathBuf) -> CliResult<CodeSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(CodeSpec::from_json(&text)?)
}

/// The spec named by the flags or the spec file, validated, with its tower.
fn resolve_code_args(a: &CodeArgs) -> CliResult<(CodeSpec, std::sync::Arc<FieldTower>)> {
    let mut spec = match &a.spec {
        Some(path) => read_spec(path)?,
        None => {
            let need = |what: &str| usage(format!("--{what} is required without a spec file"));
            let mut spec = CodeSpec::new(
                a.family.ok_or_else(|| need("family"))?,
                a.q.ok_or_else(|| need("q"))?,
                a.m.ok_or_else(|| need("m"))?,
                a.n.ok_or_else(|| need("n"))?,
                a.k.ok_or_else(|| need("k"))?,
            )
            .with_e(a.e)
            .with_s(a.s)
            .with_twists(a.h.clone(), a.t.clone());
            spec.eta = match a.eta.as_str() {
                "auto" => EtaSel::Auto,
                s if s.contains(',') => EtaSel::List(parse_list(s)?),
                s => EtaSel::Single(parse_list(s)?[0]),
            };
            spec.alpha = match a.alpha.as_str() {
                "auto" | "random" => AlphaSel::Auto,
                s => AlphaSel::Explicit(parse_list(s)?),
            };
            spec
        }
    };
    spec.validate()?;
    let tower = spec.build_tower()?;
    if a.alpha == "random" {
        let seed = a.seed.ok_or_else(|| usage("--alpha random needs --seed"))?;
        let mut rng = StdRng::seed_from_u64(seed);
        let alpha = loop {
            let v: Vec<_> = (0..spec.n).map(|_| tower.random(&mut rng)).collect();
            if rankseq::linalg::q_rank(&tower, &v) == spec.n {
                break v;
            }
        };
        spec.alpha = AlphaSel::Explicit(alpha.iter().map(|x| x.enc()).collect());
    }
    Ok((spec, tower))
}

fn build_code(a: &CodeArgs) -> CliResult<Code> {
    let (spec, tower) = resolve_code_args(a)?;
    Ok(codes::build_in(&tower, &spec)?)
}

fn auto_exps(a: &AutoArgs, c: &Code) -> Vec<i64> {
    match (&a.auto_exp, a.auto_set) {
        (Some(v), _) => v.clone(),
        (None, set) => set.unwrap_or_default().exponents(c.tower().m(), c.n()),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn census_options(r: &CensusArgs) -> CensusOptions {
    CensusOptions {
        q: r.q,
        e: r.e,
        auto_set: r.auto_set,
        eta: r.eta.flatten(),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::FieldInfo(f) => {
            let spec = CodeSpec::new(Family::Gabidulin, f.q, f.m, 1, 1).with_e(f.e);
            let (p, e, m) = spec.tower_params()?;
            let t = FieldTower::build(p, e, m)?;
            let subfields: Vec<_> = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| {
                    let basis = t.subfield_basis(d).ok().map(|b| b.iter().map(|x| x.enc()).collect::<Vec<_>>());
                    json!({"d": d, "basis": basis})
                })
                .collect();
            emit(
                out,
                &json!({
                    "label": t.label(),
                    "p": t.p(), "e": t.e(), "m": t.m(), "q": t.q(),
                    "size": t.size(),
                    "modulus": t.modulus(),
                    "primitive_element": t.primitive_element(),
                    "subfields": subfields,
                }),
            )
        }
        Command::Build { code, emit_spec } => {
            let (spec, tower) = resolve_code_args(&code)?;
            let c = codes::build_in(&tower, &spec)?;
            if emit_spec {
                emit(out, &spec.to_explicit(&tower)?)
            } else {
                emit(
                    out,
                    &json!({
                        "tower": tower.label(),
                        "n": c.n(),
                        "k": c.k(),
                        "spec": spec.to_explicit(&tower)?,
                        "generator": c.gen().to_enc_rows(),
                    }),
                )
            }
        }
        Command::Sequence { code, auto_exp, imax, tsv } => {
            let c = build_code(&code)?;
            let seq = invariants::sigma_sequence(&c, auto_exp, imax);
            if tsv {
                let cells: Vec<String> = seq.dims.iter().map(|d| d.to_string()).collect();
                writeln!(out, "{}", cells.join("\t"))?;
                Ok(())
            } else {
                emit(out, &seq)
            }
        }
        Command::Fingerprint { code, autos } => {
            let c = build_code(&code)?;
            let fp = invariants::fingerprint(&c, &auto_exps(&autos, &c))?;
            emit(out, &json!({"digest": fp.digest(), "fingerprint": fp}))
        }
        Command::Distinguish { specs, autos, powers } => {
            let mut built = Vec::new();
            for path in &specs {
                built.push(codes::build(&read_spec(path)?)?);
            }
            let (a, b) = (&built[0], &built[1]);
            match powers {
                Some(p) => {
                    let v = invariants::distinguish_by_powers(a, b, &p)?;
                    let dims = [invariants::general_sum_dim(a, &p)?, invariants::general_sum_dim(b, &p)?];
                    emit(out, &json!({"verdict": v, "powers": p, "dims": dims}))
                }
                None => {
                    let exps = auto_exps(&autos, a);
                    let v = invariants::distinguish(a, b, &exps)?;
                    let fps = [invariants::fingerprint(a, &exps)?, invariants::fingerprint(b, &exps)?];
                    emit(out, &json!({"verdict": v, "fingerprints": fps}))
                }
            }
        }
        Command::Census { n, k, run, tsv } => {
            let opts = census_options(&run);
            let report = with_jobs(run.jobs, || census::census_report(n, k, &opts))??;
            if tsv {
                write!(out, "{}", census::format_table_tsv(std::slice::from_ref(&report.row)))?;
                Ok(())
            } else {
                emit(out, &report)
            }
        }
        Command::Table1 { n, run, tsv } => {
            let opts = census_options(&run);
            let rows = with_jobs(run.jobs, || census::table1(n, &opts))??;
            if tsv {
                write!(out, "{}", census::format_table_tsv(&rows))?;
                Ok(())
            } else {
                emit(out, &rows)
            }
        }
        Command::CountGabidulin { m, k } => {
            let count = census::gabidulin_class_count(m, k)?;
            emit(out, &json!({"m": m, "k": k, "count": count}))
        }
        Command::CountSheekey(a) => {
            let orbits = census::orbit_count_x(a.q, a.e, a.m, a.k)?;
            let count = census::sheekey_class_count(a.q, a.e, a.m, a.k)?;
            emit(out, &json!({"q": a.q, "e": a.e, "m": a.m, "k": a.k, "orbits": orbits, "count": count}))
        }
        Command::CountOrbits(a) => {
            let orbits = census::orbit_count_x(a.q, a.e, a.m, a.k)?;
            emit(out, &json!({"q": a.q, "e": a.e, "m": a.m, "k": a.k, "orbits": orbits}))
        }
        Command::MrdCheck { code } => {
            let (spec, tower) = resolve_code_args(&code)?;
            let c = codes::build_in(&tower, &spec)?;
            let d = codes::min_rank_distance_bruteforce(&c)?;
            let bound = c.n() - c.k() + 1;
            let etas = spec.resolve_eta(&tower)?;
            let norm_ok: Vec<bool> = etas
                .iter()
                .map(|&x| codes::mrd_norm_condition(&tower, x, spec.k))
                .collect();
            emit(
                out,
                &json!({"d": d, "singleton": bound, "mrd": d == bound, "norm_condition": norm_ok}),
            )
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(CliError::Lib(e)) if e.is_scale_guard() => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
