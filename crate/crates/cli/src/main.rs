//! Command-line entry point: verification suites, orbit tools, homology,
//! spherical-map checking, and truncated partial-basis builds, all with
//! deterministic JSON reports.
//!
//! Exit codes: 0 success (including negative decisions), 1 verified failure
//! (a relation or certificate check failed), 2 budget exhaustion, 3
//! malformed input.

use clap::{Parser, Subcommand};
use pbcx_core::error::Error;
use pbcx_core::freegroup::{parse_tuple, parse_word, ReducedWord};
use pbcx_core::pbcomplex::{build_truncated_pb, experiment_sphericity, link_in_pb, PbBudget};
use pbcx_core::presentations::{verify_presentation_families, Theorem};
use pbcx_core::quillen::{
    check_spherical_map, top_homology_basis, top_homology_decomposition, PosetMap, PosetMapJson,
};
use pbcx_core::topology::{
    homology_of_complex, homology_of_poset, ComplexJson, FinitePoset, PosetJson,
    SimplicialComplex,
};
use pbcx_core::whitehead::{
    extend_to_basis, is_partial_basis_budgeted, level_graph, minimize, stabilizer_presentation,
    Budget,
};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pbcx",
    version,
    about = "Exact Whitehead-automorphism and partial-basis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a presentation's relation families semantically
    Verify {
        /// 2.1, 2.4, 2.5, 2.7, 2.9, 2.10 or 2.11
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        l: usize,
        /// comma-separated family tags (default: all for the theorem)
        #[arg(long)]
        families: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Greedy Whitehead minimization of a word tuple
    Minimize {
        /// comma-separated words, e.g. "a b, b^-1 a"
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide whether a set of words is a partial basis
    DecideBasis {
        #[arg(long)]
        n: usize,
        /// comma-separated words
        #[arg(long)]
        words: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Produce a basis-extension certificate for a partial basis
    ExtendBasis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        words: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Level graph and stabilizer presentation of a minimal tuple
    Stabilizer {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        n: usize,
        /// vertex budget for the level graph
        #[arg(long, default_value_t = 1_000_000)]
        max_vertices: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reduced integer homology of a complex or poset file
    Homology {
        #[arg(long, conflicts_with = "poset")]
        complex: Option<PathBuf>,
        #[arg(long)]
        poset: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Spherical-map checking and the constructive top-homology basis
    Quillen {
        #[command(subcommand)]
        sub: QuillenCommand,
    },
    /// Truncated partial-basis complexes
    Pb {
        #[command(subcommand)]
        sub: PbCommand,
    },
}

#[derive(Subcommand)]
enum QuillenCommand {
    /// Check that a poset map is homologically n-spherical
    Check {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        n: isize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the basis construction for a map on the face poset of a complex
    Basis {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        n: isize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate seeded admissible instances and run the whole pipeline
    Suite {
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PbCommand {
    /// Build the truncated complex
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long = "L")]
        length_bound: usize,
        /// keep only the k-skeleton in the output
        #[arg(long)]
        skeleton: Option<isize>,
        /// write the bare complex JSON here (reusable as homology input)
        #[arg(long)]
        out: Option<PathBuf>,
        /// lift the default size envelope
        #[arg(long, default_value_t = false)]
        allow_large: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Truncated link of a partial basis
    Link {
        #[arg(long)]
        n: usize,
        #[arg(long = "L")]
        length_bound: usize,
        /// comma-separated words of the partial basis
        #[arg(long)]
        basis: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        allow_large: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Truncated sphericity evidence report
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long = "L")]
        length_bound: usize,
        #[arg(long, default_value = "")]
        basis: String,
        #[arg(long, default_value_t = false)]
        allow_large: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Envelope embedded in every JSON report. The seed is null for the
/// deterministic subcommands that take none.
#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: u32,
    version: String,
    command: String,
    config: serde_json::Value,
    seed: Option<u64>,
    payload: T,
}

fn write_report<T: Serialize>(
    path: &Option<PathBuf>,
    command: &str,
    config: serde_json::Value,
    seed: Option<u64>,
    payload: T,
) -> Result<(), Error> {
    if let Some(path) = path {
        let report = Report {
            schema_version: 1,
            version: pbcx_core::VERSION.to_string(),
            command: command.to_string(),
            config,
            seed,
            payload,
        };
        let text = serde_json::to_string_pretty(&report)? + "\n";
        std::fs::write(path, text).map_err(|e| Error::InvalidParameters(format!("{e}")))?;
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        pos: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ),
    })
}

fn parse_words(text: &str, rank: usize) -> Result<Vec<ReducedWord>, Error> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| parse_word(part, rank))
        .collect()
}

/// exit 1 = verified failure, 2 = budget, 3 = bad input
fn error_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 2,
        Error::NotABasis(_) | Error::HypothesisFailed(_) | Error::NotPartialBasis { .. } => 1,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify {
            theorem,
            n,
            l,
            families,
            json,
        } => {
            let thm = Theorem::parse(&theorem)?;
            let only: Option<Vec<String>> = families
                .as_ref()
                .map(|f| f.split(',').map(|s| s.trim().to_string()).collect());
            let report = verify_presentation_families(thm, n, l, only.as_deref())?;
            for fam in &report.families {
                println!(
                    "family {:>4}: {:>6} instances, {} failures{}",
                    fam.family,
                    fam.instances,
                    fam.failures.len(),
                    if fam.consequence { " (consequence)" } else { "" }
                );
            }
            println!(
                "theorem {} at n={} l={}: {} instances, {} failures -> {}",
                report.theorem,
                n,
                l,
                report.total_instances,
                report.total_failures,
                if report.pass { "pass" } else { "FAIL" }
            );
            let pass = report.pass;
            write_report(
                &json,
                "verify",
                json!({"theorem": theorem, "n": n, "l": l, "families": families}),
                None,
                report,
            )?;
            Ok(if pass { 0 } else { 1 })
        }

        Command::Minimize { tuple, n, json } => {
            let input = parse_tuple(&tuple, n)?;
            let (minimal, phi) = minimize(&input);
            println!("input   {input}");
            println!(
                "minimal {minimal}  (total length {})",
                minimal.total_length()
            );
            write_report(
                &json,
                "minimize",
                json!({"tuple": tuple, "n": n}),
                None,
                json!({
                    "input": input.to_json(),
                    "minimal": minimal.to_json(),
                    "total_length": minimal.total_length(),
                    "automorphism": phi.to_json(),
                }),
            )?;
            Ok(0)
        }

        Command::DecideBasis { n, words, json } => {
            let ws = parse_words(&words, n)?;
            let verdict = is_partial_basis_budgeted(&ws, n, Budget::default())?;
            println!(
                "{} {} a partial basis of F_{n}",
                words,
                if verdict { "IS" } else { "is NOT" }
            );
            let certificate = if verdict {
                Some(extend_to_basis(&ws, n)?.to_json())
            } else {
                None
            };
            write_report(
                &json,
                "decide-basis",
                json!({"n": n, "words": words}),
                None,
                json!({"verdict": verdict, "certificate": certificate}),
            )?;
            Ok(0)
        }

        Command::ExtendBasis { n, words, json } => {
            let ws = parse_words(&words, n)?;
            let phi = extend_to_basis(&ws, n)?;
            let inverse = phi.invert()?;
            println!("certificate: {phi}");
            println!("basis preimages: {inverse}");
            write_report(
                &json,
                "extend-basis",
                json!({"n": n, "words": words}),
                None,
                json!({
                    "certificate": phi.to_json(),
                    "basis_preimages": inverse.to_json(),
                }),
            )?;
            Ok(0)
        }

        Command::Stabilizer {
            tuple,
            n,
            max_vertices,
            json,
        } => {
            let input = parse_tuple(&tuple, n)?;
            let budget = Budget { max_vertices };
            let (minimal, _) = minimize(&input);
            if minimal.total_length() != input.total_length() {
                return Err(Error::InvalidParameters(format!(
                    "tuple is not minimal (orbit minimum has total length {}); minimize first",
                    minimal.total_length()
                )));
            }
            let graph = level_graph(&input, budget)?;
            println!(
                "level graph: {} vertices, {} edges",
                graph.vertices().len(),
                graph.edges().len()
            );
            let pres = stabilizer_presentation(&input, budget)?;
            println!(
                "stabilizer presentation: {} generators, {} relators ({} 2-cells)",
                pres.generators.len(),
                pres.relators.len(),
                pres.two_cells
            );
            write_report(
                &json,
                "stabilizer",
                json!({"tuple": tuple, "n": n, "max_vertices": max_vertices}),
                None,
                pres.to_json(),
            )?;
            Ok(0)
        }

        Command::Homology {
            complex,
            poset,
            json,
        } => {
            let (label, h) = match (&complex, &poset) {
                (Some(path), None) => {
                    let cj: ComplexJson = read_json(path)?;
                    let k = SimplicialComplex::from_json(&cj)?;
                    (path.display().to_string(), homology_of_complex(&k))
                }
                (None, Some(path)) => {
                    let pj: PosetJson = read_json(path)?;
                    let p = FinitePoset::from_json(&pj)?;
                    (path.display().to_string(), homology_of_poset(&p))
                }
                _ => {
                    return Err(Error::InvalidParameters(
                        "give exactly one of --complex or --poset".into(),
                    ))
                }
            };
            for (d, g) in &h.groups {
                let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
                println!(
                    "H~_{d} = Z^{}{}",
                    g.rank,
                    if torsion.is_empty() {
                        String::new()
                    } else {
                        format!(" + torsion {torsion:?}")
                    }
                );
            }
            write_report(&json, "homology", json!({"input": label}), None, h)?;
            Ok(0)
        }

        Command::Quillen { sub } => run_quillen(sub),
        Command::Pb { sub } => run_pb(sub),
    }
}

fn run_quillen(sub: QuillenCommand) -> Result<u8, Error> {
    match sub {
        QuillenCommand::Check { map, n, json } => {
            let mj: PosetMapJson = read_json(&map)?;
            let f = PosetMap::from_json(&mj)?;
            let report = check_spherical_map(&f, n);
            for c in &report.per_element {
                println!(
                    "y = {:<12} h = {}  upper {}  fiber {}",
                    c.element,
                    c.height,
                    if c.upper_spherical { "ok" } else { "FAIL" },
                    if c.fiber_spherical { "ok" } else { "FAIL" }
                );
            }
            println!(
                "heights {} surjective {} dims {} -> {}",
                report.heights_monotone,
                report.surjective,
                report.dims_match,
                if report.pass { "pass" } else { "FAIL" }
            );
            let mut code = if report.pass { 0 } else { 1 };
            let decomposition = if report.pass {
                let dec = top_homology_decomposition(&f, n)?;
                println!(
                    "rank identity: {} = {} -> {}",
                    dec.combined,
                    dec.source_rank,
                    if dec.identity_holds { "pass" } else { "FAIL" }
                );
                if !dec.identity_holds {
                    code = 1;
                }
                Some(dec)
            } else {
                None
            };
            write_report(
                &json,
                "quillen check",
                json!({"map": map.display().to_string(), "n": n}),
                None,
                json!({"spherical": report, "decomposition": decomposition}),
            )?;
            Ok(code)
        }

        QuillenCommand::Basis {
            map,
            complex,
            n,
            json,
        } => {
            let mj: PosetMapJson = read_json(&map)?;
            let f = PosetMap::from_json(&mj)?;
            let cj: ComplexJson = read_json(&complex)?;
            let k = SimplicialComplex::from_json(&cj)?;
            let cert = top_homology_basis(&k, &f, n)?;
            println!(
                "basis certificate: rank {}, {} lifted classes, determinant {} ({} chain identities checked)",
                cert.rank, cert.gamma_count, cert.determinant, cert.chain_identity_pairs
            );
            let ok = cert.unimodular;
            write_report(
                &json,
                "quillen basis",
                json!({
                    "map": map.display().to_string(),
                    "complex": complex.display().to_string(),
                    "n": n
                }),
                None,
                cert,
            )?;
            Ok(if ok { 0 } else { 1 })
        }

        QuillenCommand::Suite { count, seed, json } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut all_ok = true;
            for index in 0..count {
                let inst = pbcx_core::quillen::gen::random_admissible_instance(&mut rng);
                let spherical = check_spherical_map(&inst.map, inst.n).pass;
                let dec = top_homology_decomposition(&inst.map, inst.n)?;
                let cert = top_homology_basis(&inst.complex, &inst.map, inst.n)?;
                let ok = spherical && dec.identity_holds && cert.unimodular && cert.epimorphism;
                all_ok &= ok;
                println!(
                    "instance {index:>3}: n = {} rank = {:>2} identity {} epi {} unimodular {} pairs {}",
                    inst.n,
                    cert.rank,
                    dec.identity_holds,
                    cert.epimorphism,
                    cert.unimodular,
                    cert.chain_identity_pairs
                );
                rows.push(json!({
                    "index": index,
                    "n": inst.n,
                    "rank": cert.rank,
                    "identity": dec.identity_holds,
                    "epimorphism": cert.epimorphism,
                    "unimodular": cert.unimodular,
                    "chain_identity_pairs": cert.chain_identity_pairs,
                }));
            }
            println!("suite: {}", if all_ok { "pass" } else { "FAIL" });
            write_report(
                &json,
                "quillen suite",
                json!({"count": count, "seed": seed}),
                Some(seed),
                json!({"instances": rows, "pass": all_ok}),
            )?;
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

fn run_pb(sub: PbCommand) -> Result<u8, Error> {
    match sub {
        PbCommand::Build {
            n,
            length_bound,
            skeleton,
            out,
            allow_large,
            json,
        } => {
            let pb = build_truncated_pb(n, length_bound, PbBudget { allow_large })?;
            let complex = match skeleton {
                Some(k) => pb.complex.skeleton(k),
                None => pb.complex.clone(),
            };
            println!(
                "truncation at rank {n}, length {length_bound}: {} vertices, {} simplices, dim {}",
                complex.simplices_of_dim(0).len(),
                complex.simplex_count(),
                complex.dim()
            );
            if let Some(path) = &out {
                let text = serde_json::to_string_pretty(&complex.to_json())? + "\n";
                std::fs::write(path, text)
                    .map_err(|e| Error::InvalidParameters(format!("{e}")))?;
            }
            write_report(
                &json,
                "pb build",
                json!({"n": n, "L": length_bound, "skeleton": skeleton}),
                None,
                json!({
                    "vertices": complex.simplices_of_dim(0).len(),
                    "simplices": complex.simplex_count(),
                    "dim": complex.dim(),
                    "complex": complex.to_json(),
                }),
            )?;
            Ok(0)
        }

        PbCommand::Link {
            n,
            length_bound,
            basis,
            out,
            allow_large,
            json,
        } => {
            let ws = parse_words(&basis, n)?;
            let lk = link_in_pb(&ws, n, length_bound, PbBudget { allow_large })?;
            println!(
                "link: {} vertices, {} simplices, dim {}",
                lk.simplices_of_dim(0).len(),
                lk.simplex_count(),
                lk.dim()
            );
            if let Some(path) = &out {
                let text = serde_json::to_string_pretty(&lk.to_json())? + "\n";
                std::fs::write(path, text)
                    .map_err(|e| Error::InvalidParameters(format!("{e}")))?;
            }
            write_report(
                &json,
                "pb link",
                json!({"n": n, "L": length_bound, "basis": basis}),
                None,
                json!({
                    "vertices": lk.simplices_of_dim(0).len(),
                    "simplices": lk.simplex_count(),
                    "dim": lk.dim(),
                    "complex": lk.to_json(),
                }),
            )?;
            Ok(0)
        }

        PbCommand::Experiment {
            n,
            length_bound,
            basis,
            allow_large,
            json,
        } => {
            let ws = parse_words(&basis, n)?;
            let report = experiment_sphericity(n, length_bound, &ws, PbBudget { allow_large })?;
            println!("{}", report.note);
            println!(
                "observed: dim {} (predicted {}), connected {} (predicted {}), torsion-free top {}",
                report.observed_dim,
                report.predicted_dim,
                report.observed_connected,
                report.predicted_connected,
                report.top_torsion_free
            );
            for (d, g) in &report.homology.groups {
                let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
                println!("H~_{d} rank {} torsion {torsion:?}", g.rank);
            }
            println!("consistent with the statements: {}", report.consistent);
            let ok = report.consistent;
            write_report(
                &json,
                "pb experiment",
                json!({"n": n, "L": length_bound, "basis": basis}),
                None,
                report,
            )?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
