use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ubcfill::format::{self, FormatError};
use ubcfill::gluecalc::{glue_cycle, glue_upper_bound, interior_bound, GlueOutcome};
use ubcfill::groupcx::{
    f2_experiment, records_to_csv, shapiro_maps, F2Config, FiniteGroupData, GroupError,
};
use ubcfill::nervekit::{check_relative_cover, collar_multiplicity_bound, nerve_pair};
use ubcfill::normcx::{
    ubc_constant, uubc_constant, ComplexError, ConstantEstimate, EstimateMode, NormedComplex,
    UbcMode, DEFAULT_SAMPLES,
};
use ubcfill::{FillStatus, Rational};

#[derive(Parser)]
#[command(name = "ubcfill", version, about = "Exact filling norms, UBC constants, nerves and glueing bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal-norm filling of a chain given as `label value` lines.
    Fill {
        complex: PathBuf,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        chain: PathBuf,
        /// Also write the filler to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norm of the homology class of a cycle.
    Seminorm {
        complex: PathBuf,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        chain: PathBuf,
    },
    /// UBC constant of one complex in a degree.
    Ubc {
        complex: PathBuf,
        #[arg(long)]
        degree: i64,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// One constant serving every complex in the given files.
    Uubc {
        #[arg(required = true)]
        complexes: Vec<PathBuf>,
        #[arg(long)]
        degree: i64,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Nerve pair of a cover with multiplicities.
    Nerve { cover: PathBuf },
    /// RC1, weak convexity and convexity of a relative cover.
    CheckCover {
        cover: PathBuf,
        /// Condition that decides the exit code.
        #[arg(long, value_enum, default_value_t = Requirement::Relative)]
        require: Requirement,
    },
    /// `max(mult, mult_boundary + 1)`.
    CollarBound {
        #[arg(long)]
        mult: usize,
        #[arg(long)]
        mult_boundary: usize,
    },
    /// `(1 + K(n+1))` times the sum of the piece volumes.
    GlueBound {
        #[arg(long = "k")]
        k: String,
        #[arg(long)]
        n: u32,
        #[arg(long, num_args = 0.., allow_hyphen_values = true)]
        volumes: Vec<String>,
    },
    /// `(K(n+1) + 1)` times the relative volume.
    InteriorBound {
        #[arg(long = "k")]
        k: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        volume: String,
    },
    /// Glues relative cycles along identified faces.
    GlueCycle {
        instance: PathBuf,
        /// Declared constant the filler is checked against.
        #[arg(long = "k")]
        k: String,
        /// Writes `cycle.chain` and `filler.chain` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random fillings in truncated bar complexes of F2, written as CSV.
    F2Experiment {
        #[arg(long)]
        seed: u64,
        #[arg(long = "k")]
        k: usize,
        #[arg(long)]
        l_cycle: usize,
        #[arg(long)]
        l_fill: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Shapiro maps for a finite group and a subgroup.
    Shapiro {
        /// `Z<m>` or `S<n>`.
        #[arg(long)]
        group: String,
        /// Generators of the subgroup, by element name.
        #[arg(long, num_args = 0..)]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
    /// Parses a file of any supported format and checks it.
    Validate {
        file: PathBuf,
        /// Rewrite the file in canonical form to standard output.
        #[arg(long)]
        canonical: bool,
    },
}

#[derive(clap::Args)]
struct ModeArgs {
    /// Exact vertex enumeration; fails above the dimension cap.
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Sampled lower bound with this many samples.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> UbcMode {
        match (self.exact, self.samples) {
            (true, _) => UbcMode::Exact,
            (false, Some(samples)) => UbcMode::Sampled {
                samples,
                seed: self.seed,
            },
            (false, None) => UbcMode::Auto {
                samples: DEFAULT_SAMPLES,
                seed: self.seed,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Requirement {
    Rc1,
    WeaklyConvex,
    /// RC1 and weak convexity.
    Relative,
    Convex,
}

/// A well-posed question with a negative answer; exits with status 1.
#[derive(Debug)]
struct Negative(String);

impl fmt::Display for Negative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Negative {}

fn negative(msg: impl Into<String>) -> anyhow::Error {
    Negative(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn with_path(path: &Path, e: FormatError) -> anyhow::Error {
    anyhow!("{}: {e}", path.display())
}

fn parse_q(what: &str, s: &str) -> Result<Rational> {
    s.parse::<Rational>()
        .map_err(|e| anyhow!("bad {what} `{s}`: {e}"))
}

fn first_keyword(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
}

/// Complexes in a file: `complex` blocks, or a simplicial complex given by
/// `simplex` lines, read as its ℓ¹ chain complex named after the file.
fn load_complexes(path: &Path) -> Result<Vec<NormedComplex>> {
    let text = read(path)?;
    let complexes = match first_keyword(&text) {
        Some("simplex") => {
            let x = format::parse_simplicial(&text).map_err(|e| with_path(path, e))?;
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| !s.is_empty())
                .unwrap_or("X");
            vec![x.chain_complex(name)]
        }
        _ => format::parse_complexes(&text).map_err(|e| with_path(path, e))?,
    };
    if complexes.is_empty() {
        bail!("{}: no complex found", path.display());
    }
    for c in &complexes {
        c.validate()
            .with_context(|| format!("{}: complex `{}`", path.display(), c.name()))?;
    }
    Ok(complexes)
}

fn load_complex(path: &Path) -> Result<NormedComplex> {
    let mut all = load_complexes(path)?;
    if all.len() != 1 {
        bail!("{}: expected one complex, found {}", path.display(), all.len());
    }
    Ok(all.pop().expect("one complex"))
}

fn load_chain(path: &Path) -> Result<ubcfill::SparseVec> {
    format::parse_chain(&read(path)?).map_err(|e| with_path(path, e))
}

fn mode_name(m: EstimateMode) -> &'static str {
    match m {
        EstimateMode::ExactOnFiniteComplex => "exact",
        EstimateMode::SampledLowerBound => "sampled lower bound",
    }
}

fn print_estimate(est: &ConstantEstimate) {
    println!("K = {}", est.value);
    println!("mode: {}", mode_name(est.mode));
    if let Some(w) = est.witnesses.iter().max_by(|a, b| a.ratio().cmp(&b.ratio())) {
        println!(
            "witness: fill {} / boundary {}: {}",
            w.fill_norm,
            w.boundary_norm,
            format::serialize_chain(&w.boundary).trim_end().replace('\n', ", ")
        );
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn parse_group(name: &str) -> Result<FiniteGroupData> {
    let (kind, n) = name.split_at(name.len().min(1));
    let n: usize = n
        .parse()
        .map_err(|_| anyhow!("group must be Z<m> or S<n>, got `{name}`"))?;
    let g = match kind {
        "Z" => FiniteGroupData::cyclic(n),
        "S" => FiniteGroupData::symmetric(n),
        _ => bail!("group must be Z<m> or S<n>, got `{name}`"),
    };
    Ok(g?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fill {
            complex,
            degree,
            chain,
            out,
        } => {
            let c = load_complex(&complex)?;
            let b = load_chain(&chain)?;
            let r = c.fill_norm(degree, &b)?;
            let d = c.differential_into(degree);
            if !r.verify(&d, &b, c.flavor().norm()) {
                bail!("certificate failed to verify");
            }
            match r.status {
                FillStatus::Optimal => {
                    println!("status: optimal");
                    println!("fill norm = {}", r.objective);
                    print!("{}", format::serialize_chain(&r.solution));
                    if let Some(out) = out {
                        fs::write(&out, format::serialize_chain(&r.solution))
                            .with_context(|| format!("cannot write {}", out.display()))?;
                    }
                    Ok(())
                }
                FillStatus::Infeasible => {
                    println!("status: infeasible");
                    println!("certificate:");
                    print!("{}", format::serialize_chain(&r.dual_certificate));
                    Err(negative("the chain is not a boundary"))
                }
            }
        }
        Command::Seminorm {
            complex,
            degree,
            chain,
        } => {
            let c = load_complex(&complex)?;
            let z = load_chain(&chain)?;
            match c.homology_seminorm(degree, &z) {
                Ok(v) => {
                    println!("seminorm = {v}");
                    Ok(())
                }
                Err(ComplexError::NotACycle(dz)) => {
                    println!("not a cycle; boundary:");
                    print!("{}", format::serialize_chain(&dz));
                    Err(negative("the chain is not a cycle"))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Ubc {
            complex,
            degree,
            mode,
        } => {
            let c = load_complex(&complex)?;
            print_estimate(&ubc_constant(&c, degree, mode.mode())?);
            Ok(())
        }
        Command::Uubc {
            complexes,
            degree,
            mode,
        } => {
            let mut family = Vec::new();
            for p in &complexes {
                family.extend(load_complexes(p)?);
            }
            let est = uubc_constant(&family, degree, mode.mode())?;
            println!("members: {}", family.len());
            print_estimate(&est);
            Ok(())
        }
        Command::Nerve { cover } => {
            let cover = format::parse_cover(&read(&cover)?).map_err(|e| with_path(&cover, e))?;
            let pair = nerve_pair(&cover);
            println!("nerve:");
            print!("{}", format::serialize_simplicial(&pair.nerve));
            println!("relative nerve:");
            print!("{}", format::serialize_simplicial(&pair.relative_nerve));
            println!("mult = {}", pair.mult);
            println!("mult_A = {}", pair.mult_a);
            match pair.nerve.dim() {
                Some(d) => println!("dim = {d}"),
                None => println!("dim = -1"),
            }
            Ok(())
        }
        Command::CheckCover { cover, require } => {
            let cover = format::parse_cover(&read(&cover)?).map_err(|e| with_path(&cover, e))?;
            let r = check_relative_cover(&cover);
            println!("rc1: {}", yes_no(r.rc1));
            println!("weakly convex: {}", yes_no(r.weakly_convex));
            println!("convex: {}", yes_no(r.convex));
            println!("rc2 asserted: {}", yes_no(r.rc2_user_asserted));
            for w in &r.witnesses {
                println!(
                    "violation {:?}: members {} component {}",
                    w.condition,
                    w.members.join(","),
                    w.component.join(",")
                );
            }
            let ok = match require {
                Requirement::Rc1 => r.rc1,
                Requirement::WeaklyConvex => r.weakly_convex,
                Requirement::Relative => r.rc1 && r.weakly_convex,
                Requirement::Convex => r.convex,
            };
            if ok {
                Ok(())
            } else {
                Err(negative("the required cover condition fails"))
            }
        }
        Command::CollarBound {
            mult,
            mult_boundary,
        } => {
            println!("{}", collar_multiplicity_bound(mult, mult_boundary));
            Ok(())
        }
        Command::GlueBound { k, n, volumes } => {
            let k = parse_q("K", &k)?;
            let vols = volumes
                .iter()
                .map(|v| parse_q("volume", v))
                .collect::<Result<Vec<_>>>()?;
            println!("{}", glue_upper_bound(&k, n, &vols)?);
            Ok(())
        }
        Command::InteriorBound { k, n, volume } => {
            let k = parse_q("K", &k)?;
            let v = parse_q("volume", &volume)?;
            println!("{}", interior_bound(&k, n, &v)?);
            Ok(())
        }
        Command::GlueCycle { instance, k, out } => {
            let k = parse_q("K", &k)?;
            let inst = format::parse_glueing(&read(&instance)?).map_err(|e| with_path(&instance, e))?;
            match glue_cycle(&inst, &k)? {
                GlueOutcome::Glued {
                    cycle,
                    filler,
                    report,
                } => {
                    println!("boundary norm = {}", report.boundary_norm);
                    println!("filler norm = {}", report.filler_norm);
                    println!("cycles norm = {}", report.cycles_norm);
                    println!("measured ratio = {}", report.measured_ratio);
                    match &report.locus_constant {
                        Some(kn) => println!("K_N = {kn}"),
                        None => println!("K_N = unavailable"),
                    }
                    println!("boundary bound: {}", yes_no(report.boundary_bound_ok));
                    println!("declared bound: {}", yes_no(report.declared_ok));
                    if let Some(ok) = report.locus_bound_ok {
                        println!("locus bound: {}", yes_no(ok));
                    }
                    println!("free support: {}", yes_no(report.free_support_ok));
                    println!("cycle:");
                    print!("{}", format::serialize_chain(&cycle));
                    if let Some(dir) = out {
                        fs::create_dir_all(&dir)
                            .with_context(|| format!("cannot create {}", dir.display()))?;
                        fs::write(dir.join("cycle.chain"), format::serialize_chain(&cycle))?;
                        fs::write(dir.join("filler.chain"), format::serialize_chain(&filler))?;
                    }
                    let ok = report.boundary_bound_ok
                        && report.declared_ok
                        && report.free_support_ok
                        && report.locus_bound_ok != Some(false);
                    if ok {
                        Ok(())
                    } else {
                        Err(negative("a bound check failed"))
                    }
                }
                GlueOutcome::Inconsistent {
                    boundary,
                    certificate,
                } => {
                    println!("inconsistent: the glue boundary does not bound in the glue locus");
                    println!("boundary:");
                    print!("{}", format::serialize_chain(&boundary));
                    println!("certificate:");
                    print!("{}", format::serialize_chain(&certificate));
                    Err(negative("the pieces do not glue"))
                }
            }
        }
        Command::F2Experiment {
            seed,
            k,
            l_cycle,
            l_fill,
            trials,
            out,
        } => {
            let cfg = F2Config::new(seed, k, l_cycle, l_fill, trials);
            let records = match f2_experiment(&cfg) {
                Ok(r) => r,
                Err(e @ GroupError::Certificate(_)) => return Err(negative(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            let file = out.join(format!("f2_seed{seed}_k{k}_L{l_cycle}-{l_fill}_n{trials}.csv"));
            fs::write(&file, records_to_csv(&records))
                .with_context(|| format!("cannot write {}", file.display()))?;
            let optimal = records.iter().filter(|r| r.status == FillStatus::Optimal).count();
            let max = records.iter().filter_map(|r| r.ratio.clone()).max();
            println!("trials: {}", records.len());
            println!("optimal: {optimal}");
            println!("infeasible: {}", records.len() - optimal);
            if let Some(m) = max {
                println!("max ratio = {m}");
            }
            println!("csv: {}", file.display());
            Ok(())
        }
        Command::Shapiro {
            group,
            subgroup,
            k_max,
        } => {
            let g = parse_group(&group)?;
            let gens = subgroup
                .iter()
                .map(|s| g.element(s).ok_or_else(|| anyhow!("`{s}` is not an element of {group}")))
                .collect::<Result<Vec<_>>>()?;
            let h = g.generated(&gens);
            let maps = shapiro_maps(&g, &h, k_max)?;
            let r = maps.check()?;
            println!("|G| = {}, |H| = {}", g.order(), h.len());
            println!("psi phi = id: {}", yes_no(r.psi_phi_is_identity));
            println!("dh + hd = phi psi - id: {}", yes_no(r.homotopy_identity));
            for (k, ((p, s), h)) in r
                .phi_norms
                .iter()
                .zip(&r.psi_norms)
                .zip(&r.homotopy_norms)
                .enumerate()
            {
                println!("degree {k}: |phi| = {p}, |psi| = {s}, |h| = {h}");
            }
            if r.all_ok() {
                Ok(())
            } else {
                Err(negative("a Shapiro identity or norm bound fails"))
            }
        }
        Command::Validate { file, canonical } => {
            let text = read(&file)?;
            let e = |err| with_path(&file, err);
            let (kind, serialized) = match first_keyword(&text) {
                Some("glue") => {
                    let inst = format::parse_glueing(&text).map_err(e)?;
                    for p in inst.pieces() {
                        validate_complex(&p.complex)?;
                    }
                    ("glueing instance", format::serialize_glueing(&inst))
                }
                Some("simplex") if text.lines().any(|l| l.trim_start().starts_with("member")) => {
                    let cover = format::parse_cover(&text).map_err(e)?;
                    ("cover", format::serialize_cover(&cover))
                }
                Some("simplex") => {
                    let x = format::parse_simplicial(&text).map_err(e)?;
                    ("simplicial complex", format::serialize_simplicial(&x))
                }
                _ => {
                    let cs = format::parse_complexes(&text).map_err(e)?;
                    if cs.is_empty() {
                        bail!("{}: no complex found", file.display());
                    }
                    for c in &cs {
                        validate_complex(c)?;
                    }
                    ("complex", format::serialize_complexes(&cs))
                }
            };
            if canonical {
                print!("{serialized}");
            } else {
                println!("OK ({kind})");
            }
            Ok(())
        }
    }
}

fn validate_complex(c: &NormedComplex) -> Result<()> {
    match c.validate() {
        Ok(()) => Ok(()),
        Err(e @ ComplexError::NonComplex { .. }) => {
            Err(negative(format!("complex `{}`: {e}", c.name())))
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Negative>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
