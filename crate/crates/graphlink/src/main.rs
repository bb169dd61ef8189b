//! Command-line interface: splice-diagram invariants, group computations,
//! twisted Alexander polynomials, the representation search, and the
//! fixture verification suite.
//!
//! Exit codes: 0 success, 1 failed verification, 2 parse error,
//! 3 precondition violation, 4 budget exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use graphlink::error::{GroupError, SearchError, SpliceError, TwistedError};
use graphlink::manifest::{run_manifest, Manifest};
use graphlink::presentation::{fox_derivative, GroupPresentation};
use graphlink::search::{
    obstruction_sweep_with_checkpoint, verify_certificate, Certificate, SearchConfig,
};
use graphlink::splice::{mcmullen_report, CohomologyClass, SpliceDiagram};
use graphlink::twisted::{fk_degree_test, tilde_norm_bound, twisted_alexander, PermRep};

const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "graphlink",
    version,
    about = "Graph-link invariants from splice diagrams and twisted Alexander polynomials over prime fields"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a splice diagram.
    Splice {
        file: PathBuf,
        /// Multivariable Alexander polynomial by the vertex product formula.
        #[arg(long)]
        alexander: bool,
        /// Thurston norm of the class P,Q (one integer per component).
        #[arg(long, value_name = "P,Q")]
        norm: Option<String>,
        /// Fiberedness of the class.
        #[arg(long, value_name = "P,Q")]
        fibered: Option<String>,
        /// Genus of a knot diagram.
        #[arg(long)]
        genus: bool,
        /// Single-variable polynomial of the class (links only).
        #[arg(long, value_name = "P,Q")]
        specialize: Option<String>,
        /// Linking number of an arrowhead with a vertex.
        #[arg(long, value_name = "ARROW,VERTEX")]
        linking: Option<String>,
        /// Degree/monicness report of the class polynomial against the norm.
        #[arg(long, value_name = "P,Q")]
        mcmullen: Option<String>,
    },
    /// Computations on a finitely presented group.
    Group {
        file: PathBuf,
        /// Abelianization: rank, torsion, generator images.
        #[arg(long)]
        abelianize: bool,
        /// Fox derivative of WORD with respect to GEN.
        #[arg(long, num_args = 2, value_names = ["WORD", "GEN"])]
        fox: Option<Vec<String>>,
        /// Express a class on the H1 basis as a character on generators.
        #[arg(long, value_name = "P,Q")]
        class: Option<String>,
    },
    /// Twisted Alexander polynomial of a group and representation.
    Twisted {
        group: PathBuf,
        rep: PathBuf,
        /// Class on the H1 basis, or a full character (one value per
        /// generator). Defaults to the class 1 for knot-like groups.
        #[arg(long, value_name = "VEC")]
        phi: Option<String>,
        /// Primes to compute at (default 5,7,11,13,17,19,23,29).
        #[arg(long, value_name = "LIST")]
        primes: Option<String>,
        /// Report the secondary polynomial (product of torsion invariants).
        #[arg(long)]
        tilde: bool,
        /// Generator whose block column is deleted.
        #[arg(long, value_name = "GEN")]
        delete: Option<String>,
        /// Thurston norm of the class; adds the degree test to the report.
        #[arg(long)]
        norm: Option<i64>,
    },
    /// Search representations whose twisted polynomial obstructs fibering.
    Search {
        group: PathBuf,
        /// Class on the H1 basis, or a full character.
        #[arg(long, value_name = "VEC")]
        phi: Option<String>,
        /// Symmetric group degree.
        #[arg(long)]
        degree: usize,
        /// Primes to sweep (default 5,7,11,13,17,19,23,29).
        #[arg(long, value_name = "LIST")]
        primes: Option<String>,
        /// Node budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Time budget in seconds.
        #[arg(long)]
        time_budget: Option<u64>,
        /// Stop at the first certificate.
        #[arg(long)]
        first: bool,
        /// Quotient by conjugacy: canonical first image per cycle type.
        #[arg(long)]
        reduce: bool,
        /// Verify mode: sweep only the representation in this file.
        #[arg(long, value_name = "REP")]
        seed: Option<PathBuf>,
        /// Directory to write .cert files into.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Checkpoint file recording completed partitions.
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<PathBuf>,
        /// Resume from the checkpoint file.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Run partitions in parallel (thread count from GRAPHLINK_THREADS).
        #[arg(long)]
        parallel: bool,
        /// Thurston norm; enables degree-mismatch certificates.
        #[arg(long)]
        norm: Option<i64>,
    },
    /// Run every check in a fixture manifest.
    Verify {
        manifest: PathBuf,
        /// Include checks tagged slow.
        #[arg(long)]
        slow: bool,
    },
    /// Re-verify a stored certificate.
    Cert {
        group: PathBuf,
        cert: PathBuf,
        /// Class on the H1 basis, or a full character.
        #[arg(long, value_name = "VEC")]
        phi: Option<String>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("GRAPHLINK_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn parse_error(msg: impl ToString) -> CliError {
    CliError {
        code: EXIT_PARSE,
        message: msg.to_string(),
    }
}

fn precondition(msg: impl ToString) -> CliError {
    CliError {
        code: EXIT_PRECONDITION,
        message: msg.to_string(),
    }
}

impl From<SpliceError> for CliError {
    fn from(e: SpliceError) -> Self {
        match e {
            SpliceError::Parse { .. } | SpliceError::Structure(_) => parse_error(e),
            _ => precondition(e),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Parse { .. } => parse_error(e),
            _ => precondition(e),
        }
    }
}

impl From<TwistedError> for CliError {
    fn from(e: TwistedError) -> Self {
        match e {
            TwistedError::Parse { .. } => parse_error(e),
            _ => precondition(e),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExhausted { .. } => CliError {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            SearchError::Twisted(t) => t.into(),
            SearchError::BadConfig(_) => precondition(e),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn parse_int_list(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|w| w.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            precondition(format!(
                "expected a comma-separated integer list, got '{text}'"
            ))
        })
}

fn parse_prime_list(text: &str) -> Result<Vec<u64>, CliError> {
    let list: Vec<u64> = text
        .split(',')
        .map(|w| w.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            precondition(format!(
                "expected a comma-separated prime list, got '{text}'"
            ))
        })?;
    for &p in &list {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(precondition(format!("{p} is not prime")));
        }
    }
    Ok(list)
}

fn default_primes() -> Vec<u64> {
    vec![5, 7, 11, 13, 17, 19, 23, 29]
}

/// A class vector is read on the H1 basis when its length matches the
/// rank, and as a raw character when it matches the generator count.
fn character_for(
    g: &GroupPresentation,
    phi: &Option<String>,
) -> Result<(Vec<i64>, Vec<i64>), CliError> {
    let ab = g.abelianize()?;
    let class = match phi {
        None => {
            if ab.rank == 1 {
                vec![1]
            } else {
                return Err(precondition(format!(
                    "the group has rank-{} homology; pass --phi",
                    ab.rank
                )));
            }
        }
        Some(text) => parse_int_list(text)?,
    };
    if class.len() == ab.rank {
        let chi = ab.class_as_char(&class)?;
        return Ok((class, chi));
    }
    if class.len() == g.num_generators() {
        // raw character; validated against the relators downstream
        return Ok((class.clone(), class));
    }
    Err(precondition(format!(
        "--phi has length {}, expected the rank ({}) or the generator count ({})",
        class.len(),
        ab.rank,
        g.num_generators()
    )))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Splice {
            file,
            alexander,
            norm,
            fibered,
            genus,
            specialize,
            linking,
            mcmullen,
        } => {
            let diagram = SpliceDiagram::parse(&read_file(&file)?)?;
            let nothing_asked = !alexander
                && norm.is_none()
                && fibered.is_none()
                && !genus
                && specialize.is_none()
                && linking.is_none()
                && mcmullen.is_none();
            let mut out = serde_json::Map::new();
            let mut lines = Vec::new();

            if alexander || nothing_asked {
                let delta = diagram.alexander_polynomial()?;
                lines.push(delta.to_string());
                out.insert("alexander".into(), json!(delta.to_string()));
            }
            if let Some(text) = &norm {
                let phi = CohomologyClass(parse_int_list(text)?);
                let n = diagram.thurston_norm(&phi)?;
                lines.push(n.to_string());
                out.insert("norm".into(), json!(n));
            }
            if let Some(text) = &fibered {
                let phi = CohomologyClass(parse_int_list(text)?);
                let f = diagram.is_fibered(&phi)?;
                lines.push(if f { "fibered" } else { "not fibered" }.to_string());
                out.insert("fibered".into(), json!(f));
            }
            if genus {
                let g = diagram.genus()?;
                lines.push(g.to_string());
                out.insert("genus".into(), json!(g));
            }
            if let Some(text) = &specialize {
                let phi = CohomologyClass(parse_int_list(text)?);
                let delta = diagram.alexander_polynomial()?;
                let s = diagram.specialize(&delta, &phi)?;
                lines.push(s.to_string());
                out.insert("specialization".into(), json!(s.to_string()));
            }
            if let Some(text) = &linking {
                let parts: Vec<&str> = text.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(precondition("--linking takes ARROW,VERTEX"));
                }
                let l = diagram.linking_number_by_id(parts[0], parts[1])?;
                lines.push(l.to_string());
                out.insert("linking".into(), json!(l));
            }
            if let Some(text) = &mcmullen {
                let phi = CohomologyClass(parse_int_list(text)?);
                let delta = diagram.alexander_polynomial()?;
                let n = diagram.thurston_norm(&phi)?;
                let (poly, b1) = if diagram.num_components() == 1 {
                    (delta, 1)
                } else {
                    (diagram.specialize(&delta, &phi)?, diagram.num_components())
                };
                let report = mcmullen_report(&poly, n, b1, phi.divisibility());
                lines.push(format!(
                    "degree {} vs norm {} + {}: {}",
                    report.degree.map_or("-".to_string(), |d| d.to_string()),
                    report.norm,
                    report.allowance,
                    if report.obstructs_fibering {
                        "obstructs fibering"
                    } else {
                        "no obstruction"
                    }
                ));
                out.insert("mcmullen".into(), serde_json::to_value(&report).unwrap());
            }
            emit(cli.json, &serde_json::Value::Object(out), &lines);
            Ok(ExitCode::SUCCESS)
        }

        Command::Group {
            file,
            abelianize,
            fox,
            class,
        } => {
            let g = GroupPresentation::parse(&read_file(&file)?)?;
            let mut out = serde_json::Map::new();
            let mut lines = Vec::new();
            let nothing_asked = !abelianize && fox.is_none() && class.is_none();

            if abelianize || nothing_asked {
                let ab = g.abelianize()?;
                lines.push(format!("rank: {}", ab.rank));
                if ab.torsion.is_empty() {
                    lines.push("torsion: none".into());
                } else {
                    let t: Vec<String> = ab.torsion.iter().map(|d| d.to_string()).collect();
                    lines.push(format!("torsion: {}", t.join(" ")));
                }
                for (name, img) in g.generators.iter().zip(&ab.images) {
                    let v: Vec<String> = img.iter().map(|c| c.to_string()).collect();
                    lines.push(format!("{name}: {}", v.join(" ")));
                }
                out.insert("rank".into(), json!(ab.rank));
                out.insert(
                    "torsion".into(),
                    json!(ab.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
                );
                out.insert(
                    "images".into(),
                    json!(g
                        .generators
                        .iter()
                        .zip(&ab.images)
                        .map(|(n, i)| (n.clone(), i.clone()))
                        .collect::<std::collections::BTreeMap<_, _>>()),
                );
            }
            if let Some(args) = &fox {
                let word = g.word(&args[0])?;
                let gen = g.generator_index(&args[1])?;
                let d = fox_derivative(&word, gen);
                lines.push(d.display(&g.generators).to_string());
                out.insert("fox".into(), json!(d.display(&g.generators).to_string()));
            }
            if let Some(text) = &class {
                let ab = g.abelianize()?;
                let phi = parse_int_list(text)?;
                let chi = ab.class_as_char(&phi)?;
                for (name, value) in g.generators.iter().zip(&chi) {
                    lines.push(format!("{name}: {value}"));
                }
                out.insert(
                    "character".into(),
                    json!(g
                        .generators
                        .iter()
                        .zip(&chi)
                        .map(|(n, c)| (n.clone(), *c))
                        .collect::<std::collections::BTreeMap<_, _>>()),
                );
            }
            emit(cli.json, &serde_json::Value::Object(out), &lines);
            Ok(ExitCode::SUCCESS)
        }

        Command::Twisted {
            group,
            rep,
            phi,
            primes,
            tilde,
            delete,
            norm,
        } => {
            let g = GroupPresentation::parse(&read_file(&group)?)?;
            let r = PermRep::parse(&read_file(&rep)?)?;
            let (_, chi) = character_for(&g, &phi)?;
            let primes = match &primes {
                Some(text) => parse_prime_list(text)?,
                None => default_primes(),
            };
            let deleted = match &delete {
                None => None,
                Some(name) => Some(g.generator_index(name)?),
            };
            if !r.respects(&g)? {
                return Err(precondition("the representation is not a homomorphism"));
            }
            let mut lines = Vec::new();
            let mut reports = Vec::new();
            let mut any_vanished = false;
            for &p in &primes {
                let res = twisted_alexander(&g, &r, &chi, p, deleted)?;
                any_vanished |= res.delta.is_zero();
                let shown = if tilde { &res.delta_tilde } else { &res.delta };
                lines.push(format!("p={p}: {shown}"));
                let mut entry = serde_json::Map::new();
                entry.insert("prime".into(), json!(p));
                entry.insert("delta".into(), json!(res.delta.to_string()));
                entry.insert("delta_tilde".into(), json!(res.delta_tilde.to_string()));
                entry.insert("delta_zero".into(), json!(res.delta_zero.to_string()));
                entry.insert("free_rank".into(), json!(res.free_rank));
                entry.insert("monic".into(), json!(res.monic.to_string()));
                entry.insert(
                    "torsion".into(),
                    json!(res
                        .torsion
                        .iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()),
                );
                if tilde && !res.delta_tilde.is_zero() {
                    let bound = tilde_norm_bound(&res.delta_tilde, r.degree())?;
                    entry.insert("norm_lower_bound".into(), json!(bound));
                }
                if let Some(n) = norm {
                    let report = fk_degree_test(&res, r.degree(), n);
                    lines.push(format!(
                        "  degree test: lhs {} rhs {} ({} + delta_0 {} + delta_2 {} assumed): {}",
                        report
                            .degree_delta
                            .map_or("-".to_string(), |d| d.to_string()),
                        report.rhs,
                        r.degree() as i64 * n,
                        report.degree_delta_zero,
                        report.degree_delta_two_assumed,
                        if report.obstructed {
                            "obstructed"
                        } else {
                            "consistent"
                        }
                    ));
                    entry.insert("degree_test_obstructed".into(), json!(report.obstructed));
                }
                reports.push(serde_json::Value::Object(entry));
            }
            // what the whole prime sweep can say about integral monicness
            let monic_summary = if any_vanished {
                graphlink::twisted::Monicity::No
            } else {
                graphlink::twisted::Monicity::WouldRequireIntegerCoefficients
            };
            emit(
                cli.json,
                &json!({ "results": reports, "monic_summary": monic_summary.to_string() }),
                &lines,
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Search {
            group,
            phi,
            degree,
            primes,
            budget,
            time_budget,
            first,
            reduce,
            seed,
            out,
            checkpoint,
            resume,
            parallel,
            norm,
        } => {
            let g = GroupPresentation::parse(&read_file(&group)?)?;
            let (_, chi) = character_for(&g, &phi)?;
            let primes = match &primes {
                Some(text) => parse_prime_list(text)?,
                None => default_primes(),
            };
            let mut cfg = SearchConfig::new(degree, primes).map_err(CliError::from)?;
            cfg.node_budget = budget;
            cfg.time_budget = time_budget.map(std::time::Duration::from_secs);
            cfg.stop_at_first = first;
            cfg.conjugacy_reduction = reduce;
            cfg.parallel = parallel;
            cfg.norm = norm;
            if let Some(path) = &seed {
                cfg.seed = Some(PermRep::parse(&read_file(path)?)?);
            }
            let checkpoint_path = if resume || checkpoint.is_some() {
                checkpoint.as_deref()
            } else {
                None
            };
            if !resume {
                if let Some(path) = checkpoint_path {
                    let _ = std::fs::remove_file(path);
                }
            }
            let outcome = obstruction_sweep_with_checkpoint(&g, &chi, &cfg, checkpoint_path)
                .map_err(CliError::from)?;

            let mut lines = Vec::new();
            let mut written = Vec::new();
            for (i, cert) in outcome.certificates.iter().enumerate() {
                let mut line = format!(
                    "certificate {}: prime {}, reason {}, polynomial {}",
                    i + 1,
                    cert.prime,
                    cert.reason,
                    cert.polynomial
                );
                if let Some(dir) = &out {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| precondition(format!("{}: {e}", dir.display())))?;
                    let path = dir.join(format!(
                        "{:016x}-p{}-{}.cert",
                        cert.presentation_hash,
                        cert.prime,
                        i + 1
                    ));
                    std::fs::write(&path, cert.to_text())
                        .map_err(|e| precondition(format!("{}: {e}", path.display())))?;
                    line.push_str(&format!(" -> {}", path.display()));
                    written.push(path.display().to_string());
                }
                lines.push(line);
            }
            lines.push(format!("search: {}", outcome.stats));
            let payload = json!({
                "certificates": outcome.certificates.iter().map(|c| c.to_text()).collect::<Vec<_>>(),
                "written": written,
                "stats": serde_json::to_value(outcome.stats).unwrap(),
                "exhausted": outcome.exhausted,
            });
            emit(cli.json, &payload, &lines);
            if outcome.exhausted {
                eprintln!("budget exhausted: {}", outcome.stats);
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { manifest, slow } => {
            let text = read_file(&manifest)?;
            let m = Manifest::parse(&text).map_err(parse_error)?;
            let base = manifest
                .parent()
                .map(|p| p.join(".."))
                .unwrap_or_else(|| PathBuf::from("."));
            if m.checks.is_empty() {
                eprintln!("warning: empty manifest, vacuous pass");
            }
            let outcomes = run_manifest(&m, &base, slow);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let lines: Vec<String> = outcomes
                .iter()
                .map(|o| o.to_string())
                .chain(std::iter::once(format!(
                    "{} passed, {} failed",
                    outcomes.len() - failed,
                    failed
                )))
                .collect();
            let payload = json!({
                "outcomes": outcomes,
                "passed": outcomes.len() - failed,
                "failed": failed,
            });
            emit(cli.json, &payload, &lines);
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_FAILED));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Cert { group, cert, phi } => {
            let g = GroupPresentation::parse(&read_file(&group)?)?;
            let c = Certificate::parse(&read_file(&cert)?).map_err(parse_error)?;
            let (_, chi) = character_for(&g, &phi)?;
            let ok = verify_certificate(&g, &chi, &c);
            emit(
                cli.json,
                &json!({ "verified": ok }),
                &[if ok { "verified" } else { "NOT verified" }.to_string()],
            );
            if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_FAILED))
            }
        }
    }
}

fn emit(as_json: bool, payload: &serde_json::Value, lines: &[String]) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(payload).unwrap());
    } else {
        for line in lines {
            println!("{line}");
        }
    }
}
