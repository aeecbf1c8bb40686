use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use mzvwb::cartier::cartier_decompose;
use mzvwb::coords::{
    cubical_to_simplicial, delta_map, pullback_check, simplicial_to_cubical, MarkedPointConfig,
};
use mzvwb::numerics::{
    double_shuffle_relations, verify_relation, verify_relations, RelationReport, MIN_TOLERANCE,
};
use mzvwb::strata::{
    b0_certificate, blowup_schedule, boundary_clearance_check, build_poset, flag_partition,
    sigma_identity_check, validate_flags, Subset, MAX_POSET_DIMENSION,
};
use mzvwb::words::{Composition, Relation};
use mzvwb::BigRational;

const MAX_WEIGHT: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "mzvwb", version, about = "Double shuffle workbench for multiple zeta values")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest total weight of the relations considered.
    #[arg(long, global = true, default_value_t = 8)]
    max_weight: u32,

    /// Absolute tolerance for numerical checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Number of random samples per check.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Output file, or directory for `strata`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List shuffle and stuffle relations of all admissible pairs.
    Relations,
    /// Check relations numerically; reads a JSON relation list if given.
    Verify { input: Option<PathBuf> },
    /// Decompose f_k * f_l, e.g. `cartier 2,1 / 2,1`.
    Cartier {
        #[arg(num_args = 1.., allow_hyphen_values = true)]
        pair: Vec<String>,
    },
    /// Stratum poset, blow-up schedule and boundary clearance in dimension n.
    Strata { n: usize },
    /// Coordinate changes, pullbacks and the splitting of the stuffle map.
    CoordsCheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MZVWB_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("MZVWB_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("MZVWB_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn validate(cli: &Cli) -> Result<()> {
    if !(2..=MAX_WEIGHT).contains(&cli.max_weight) {
        bail!("--max-weight must be in 2..={MAX_WEIGHT}, got {}", cli.max_weight);
    }
    if !(cli.tol >= MIN_TOLERANCE) {
        bail!("--tol must be at least {MIN_TOLERANCE:e}, got {}", cli.tol);
    }
    Ok(())
}

/// Returns whether every check passed.
fn run(cli: &Cli) -> Result<bool> {
    validate(cli)?;
    match &cli.command {
        Command::Relations => cmd_relations(cli),
        Command::Verify { input } => cmd_verify(cli, input.as_deref()),
        Command::Cartier { pair } => cmd_cartier(cli, pair),
        Command::Strata { n } => cmd_strata(cli, *n),
        Command::CoordsCheck => cmd_coords(cli),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json_text<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_relations(cli: &Cli) -> Result<bool> {
    let rels = double_shuffle_relations(cli.max_weight);
    let text = match cli.format {
        Format::Json => to_json_text(&rels)?,
        Format::Tsv => {
            let mut s = String::from("product\tk\tl\trhs\n");
            for r in &rels {
                s.push_str(&format!("{}\t{}\t{}\t{}\n", r.product, r.left, r.right, r.rhs));
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifyError {
    relation: String,
    error: String,
}

fn cmd_verify(cli: &Cli, input: Option<&Path>) -> Result<bool> {
    let rels: Vec<Relation> = match input {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => double_shuffle_relations(cli.max_weight),
    };
    let mut rels = rels;
    rels.sort_by(|a, b| a.key().cmp(&b.key()));

    let (reports, errors): (Vec<RelationReport>, Vec<VerifyError>) = match verify_relations(&rels, cli.tol) {
        Ok(reports) => (reports, Vec::new()),
        Err(_) => {
            // Fall back to one relation at a time so a single failure does
            // not hide the others.
            let results: Vec<_> = rels.par_iter().map(|r| (r, verify_relation(r, cli.tol))).collect();
            let mut reports = Vec::new();
            let mut errors = Vec::new();
            for (r, res) in results {
                match res {
                    Ok(rep) => reports.push(rep),
                    Err(e) => errors.push(VerifyError {
                        relation: r.to_string(),
                        error: e.to_string(),
                    }),
                }
            }
            (reports, errors)
        }
    };
    let passed = reports.iter().filter(|r| r.pass).count();
    let failed = reports.len() - passed + errors.len();
    let text = match cli.format {
        Format::Json => to_json_text(&json!({
            "reports": reports,
            "errors": errors,
            "summary": { "passed": passed, "failed": failed },
        }))?,
        Format::Tsv => {
            let mut s = String::from(RelationReport::TSV_HEADER);
            s.push('\n');
            for r in &reports {
                s.push_str(&r.tsv_row());
                s.push('\n');
            }
            for e in &errors {
                s.push_str(&format!("# error\t{}\t{}\n", e.relation, e.error));
            }
            s
        }
    };
    emit(cli, &text)?;
    eprintln!("summary: {passed} passed, {failed} failed");
    Ok(failed == 0)
}

/// Parses `2,1 / 2,1` (the arguments may or may not be split by the shell).
fn parse_pair(args: &[String]) -> Result<(Composition, Composition)> {
    let joined = args.join(" ");
    let Some((a, b)) = joined.split_once('/') else {
        bail!("expected two compositions separated by `/`, e.g. `2,1 / 2`");
    };
    let parse = |s: &str| -> Result<Composition> {
        s.parse::<Composition>()
            .map_err(|e| anyhow::anyhow!("bad composition `{}`: {e}", s.trim()))
    };
    Ok((parse(a)?, parse(b)?))
}

fn cmd_cartier(cli: &Cli, args: &[String]) -> Result<bool> {
    let (k, l) = parse_pair(args)?;
    let dec = cartier_decompose(&k, &l).with_context(|| format!("decomposing {k} x {l}"))?;
    let exact = dec.is_exact();
    emit(cli, &to_json_text(&dec.to_json(Some(exact)))?)?;
    Ok(exact)
}

fn cmd_strata(cli: &Cli, n: usize) -> Result<bool> {
    if !(2..=MAX_POSET_DIMENSION).contains(&n) {
        bail!("n must be in 2..={MAX_POSET_DIMENSION}, got {n}");
    }
    let poset = build_poset(n)?;
    let levels = blowup_schedule(&poset.order);
    let flags = flag_partition(&poset.order);
    let flags_valid = validate_flags(&poset.order, &flags).is_ok();
    let b0 = b0_certificate(&poset);
    let conditions = poset.conditions.expect("computed by build_poset");
    let schedule = json!({
        "levels": levels,
        "flags": flags.flags,
        "flags_valid": flags_valid,
        "conditions": conditions,
        "b0_certificate": b0,
    });

    let subsets: Vec<Subset> = Subset::all_nonempty(n).into_iter().filter(|s| s.len() >= 2).collect();
    let reports = subsets
        .iter()
        .map(|&s| boundary_clearance_check(s, n, cli.samples, cli.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma: Vec<Value> = (1..n)
        .map(|p| Ok(json!({ "p": p, "holds": sigma_identity_check(p)? })))
        .collect::<Result<_>>()?;
    let clearance = json!({
        "samples": cli.samples,
        "seed": cli.seed,
        "sigma_identity": sigma,
        "reports": reports,
        "all_pass": reports.iter().all(|r| r.pass),
    });

    let ok = flags_valid
        && b0.holds
        && conditions.smooth
        && conditions.clean
        && conditions.disjoint_union != Some(false)
        && reports.iter().all(|r| r.pass)
        && sigma.iter().all(|s| s["holds"] == json!(true));

    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let write = |name: &str, text: &str| {
                let path = dir.join(name);
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
            };
            write("poset.dot", &poset.to_dot())?;
            write("poset.json", &to_json_text(&poset.to_json())?)?;
            write("schedule.json", &to_json_text(&schedule)?)?;
            write("clearance.json", &to_json_text(&clearance)?)?;
        }
        None => {
            let all = json!({
                "poset": poset.to_json(),
                "dot": poset.to_dot(),
                "schedule": schedule,
                "clearance": clearance,
            });
            print!("{}", to_json_text(&all)?);
        }
    }
    Ok(ok)
}

fn cmd_coords(cli: &Cli) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let max = cli.max_weight.min(mzvwb::coords::MAX_PULLBACK_WEIGHT);
    let mut pullbacks = Vec::new();
    for w in 2..=max {
        for k in Composition::admissible_of_weight(w) {
            let r = pullback_check(&k)?;
            pullbacks.push(json!({
                "composition": k,
                "sign": r.sign,
                "matches": r.matches,
                "integrand": r.integrand.to_string(),
            }));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let den = 1_000_003i64;
    let mut round_trip_failures = 0usize;
    let mut splitting_failures = 0usize;
    for _ in 0..cli.samples {
        let total = rng.gen_range(2..=8usize);
        let mut nums: Vec<i64> = Vec::new();
        while nums.len() < total {
            let v = rng.gen_range(1..den);
            if !nums.contains(&v) {
                nums.push(v);
            }
        }
        nums.sort_unstable();
        let t: Vec<BigRational> = nums
            .iter()
            .map(|&a| BigRational::new(a.into(), den.into()))
            .collect();
        let x = simplicial_to_cubical(&t)?;
        if cubical_to_simplicial(&x)? != t {
            round_trip_failures += 1;
        }
        let n = rng.gen_range(1..total);
        let z = MarkedPointConfig::new(t)?;
        let (left, right) = delta_map(&z, n, total - n)?;
        let mut split = left.cubical();
        split.extend(right.cubical());
        if split != z.cubical() || !left.in_standard_cell() || !right.in_standard_cell() {
            splitting_failures += 1;
        }
    }
    let ok = pullbacks.iter().all(|p| p["matches"] == json!(true))
        && round_trip_failures == 0
        && splitting_failures == 0;
    let report = json!({
        "pullback": pullbacks,
        "samples": cli.samples,
        "seed": cli.seed,
        "round_trip_failures": round_trip_failures,
        "delta_splitting_failures": splitting_failures,
        "pass": ok,
    });
    emit(cli, &to_json_text(&report)?)?;
    Ok(ok)
}
