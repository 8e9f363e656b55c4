//! Command-line front end. Exit codes encode decisions: 0 affirmative or
//! success, 1 negative, 2 error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use medial_core::group::{
    classify, coefficient_vector, criterion_in_sigma_k, in_sigma, leaf_colors, oracle_in_sigma_k,
    GroupSpec, OperationSelector,
};
use medial_core::harness;
use medial_core::interchange::{derive_interchange, to_quad_form, SwapRequest};
use medial_core::rewrite::{
    bounded_search, model_check, verify_trace, DerivationTrace, FiniteGroupoid, IdentitySet,
};
use medial_core::signature::{build_sigma_term, is_compressed, terminator, Signature};
use medial_core::spectral::{eigenvalues, interchange_basis_decision, MulticirculantSpec};
use medial_core::term::{parse, parse_identity, Position};
use medial_core::total_color::{construct_tree, is_representable, total_color, TotalColor};

#[derive(Parser)]
#[command(name = "medial", version, about = "Equational reasoning for medial groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Criterion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    Representability,
    Interchange,
    Closure,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an identity belongs to a variety
    Check {
        /// The identity, e.g. "(xy)(zt)=(xz)(yt)"
        identity: String,
        /// Decide membership in Sigma(G; alpha, beta); requires --group
        #[arg(long)]
        variety: Option<String>,
        /// Group spec "m,n,a,a',b,b'"
        #[arg(long)]
        group: Option<String>,
        /// Operation subset, e.g. "2,4"
        #[arg(long)]
        k: Option<String>,
        /// Decision procedure for --k
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
    },
    /// Print the leaf colors of a term
    Color {
        term: String,
        /// Group spec "m,n,a,a',b,b'"; defaults to the Klein 4-group
        #[arg(long, default_value = "2,2,1,0,0,1")]
        group: String,
    },
    /// Print the coefficient vector of a term over the Klein 4-group
    Coeffs { term: String },
    /// Derive the interchange of two same-colored leaves; emits trace JSON
    Derive {
        term: String,
        /// Two leaf positions over L/R, comma-separated, e.g. "LR,RL"
        #[arg(long)]
        swap: String,
    },
    /// Replay and verify a trace file
    VerifyTrace {
        file: PathBuf,
        /// Rule set the trace names refer to ("M" or a basis key like "2,4")
        #[arg(long, default_value = "M")]
        rules: String,
    },
    /// Breadth-first proof search for an identity
    Search {
        identity: String,
        #[arg(long, default_value = "M")]
        rules: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Test whether a signature word over a/b is compressed
    Compress { word: String },
    /// Print the canonical linear term realizing a signature
    SigmaTerm {
        word: String,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Print the total color and its two invariants
    Lambda { term: String },
    /// Decide representability of a total-color tuple "a,b,c,d"
    Represent {
        tuple: String,
        /// Also print a witness tree
        #[arg(long)]
        witness: bool,
    },
    /// Rewrite a linear all-four-color term to expose a quad subterm
    QuadForm { term: String },
    /// Eigenvalues and determinant of a multicirculant matrix
    Spectrum {
        /// Index sequence, e.g. "2,2"
        #[arg(long)]
        s: String,
        /// Top row, e.g. "-1,1,1,0"
        #[arg(long, allow_hyphen_values = true)]
        row: String,
    },
    /// Decide whether the interchange laws form a basis for Sigma(G)
    BasisStatus {
        /// Group spec "m,n,a,a',b,b'"
        #[arg(long)]
        group: String,
    },
    /// Evaluate an identity in a finite groupoid given by its table
    ModelCheck {
        /// Table file: first line the size k, then k rows of k indices
        #[arg(long)]
        table: PathBuf,
        identity: String,
    },
    /// Run an exhaustive enumeration harness
    Enumerate {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum)]
        report: ReportKind,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn verdict_code(yes: bool) -> u8 {
    if yes {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { identity, variety, group, k, method } => {
            let e = parse_identity(&identity).map_err(|e| e.to_string())?;
            if let Some(k) = k {
                let selector = OperationSelector::parse(&k).map_err(|e| e.to_string())?;
                let verdict = match method {
                    Method::Oracle => oracle_in_sigma_k(&e, &selector),
                    Method::Criterion => {
                        criterion_in_sigma_k(&e, &selector).map_err(|e| e.to_string())?
                    }
                };
                println!("{} in Sigma_{}: {}", e, selector, if verdict { "yes" } else { "no" });
                Ok(verdict_code(verdict))
            } else {
                match variety.as_deref() {
                    Some("sigma") => {}
                    Some(v) => return Err(format!("unknown variety `{v}`; use --variety sigma")),
                    None => return Err("pass --k LIST or --variety sigma --group SPEC".to_string()),
                }
                let spec = group.ok_or("--variety sigma requires --group")?;
                let g = GroupSpec::parse(&spec).map_err(|e| e.to_string())?;
                let verdict = in_sigma(&e, &g);
                println!("{} in Sigma(G): {}", e, if verdict { "yes" } else { "no" });
                Ok(verdict_code(verdict))
            }
        }
        Command::Color { term, group } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let g = GroupSpec::parse(&group).map_err(|e| e.to_string())?;
            let colors = leaf_colors(&t, &g);
            let leaves: Vec<serde_json::Value> = t
                .leaves()
                .into_iter()
                .map(|(p, name)| {
                    serde_json::json!({
                        "pos": p.to_string(),
                        "var": name,
                        "color": colors[&p].to_string(),
                    })
                })
                .collect();
            println!("{}", serde_json::json!({ "term": t.to_string(), "leaves": leaves }));
            Ok(0)
        }
        Command::Coeffs { term } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let kl = GroupSpec::klein();
            let v = coefficient_vector(&t, &kl);
            let c = classify(
                &medial_core::term::Identity { lhs: t.clone(), rhs: t.clone() },
                &kl,
            );
            let mut vars = serde_json::Map::new();
            for (name, ring) in &v {
                let mut entries = serde_json::Map::new();
                for (elem, coeff) in ring {
                    entries.insert(elem.to_string(), serde_json::json!(coeff.to_string()));
                }
                vars.insert(name.clone(), serde_json::Value::Object(entries));
            }
            println!(
                "{}",
                serde_json::json!({
                    "term": t.to_string(),
                    "linear": c.linear,
                    "coefficients": vars,
                })
            );
            Ok(0)
        }
        Command::Derive { term, swap } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let (p1, p2) = swap
                .split_once(',')
                .ok_or("expected --swap POS1,POS2 with positions over L/R")?;
            let first: Position = p1.trim().parse().map_err(|e| format!("{e}"))?;
            let second: Position = p2.trim().parse().map_err(|e| format!("{e}"))?;
            let trace = derive_interchange(&SwapRequest { term: t, first, second })
                .map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&trace).unwrap());
            Ok(0)
        }
        Command::VerifyTrace { file, rules } => {
            let text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
            let trace: DerivationTrace = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let set = IdentitySet::builtin(&rules).map_err(|e| e.to_string())?;
            let verdict = verify_trace(&trace, &set);
            println!(
                "{}",
                serde_json::json!({
                    "ok": verdict.ok,
                    "failed_step": verdict.failed_step,
                    "final": verdict.final_term.to_string(),
                })
            );
            Ok(verdict_code(verdict.ok))
        }
        Command::Search { identity, rules, depth } => {
            let e = parse_identity(&identity).map_err(|e| e.to_string())?;
            let set = IdentitySet::builtin(&rules).map_err(|e| e.to_string())?;
            match bounded_search(&e, &set, depth) {
                Some(trace) => {
                    println!("{}", serde_json::to_string_pretty(&trace).unwrap());
                    Ok(0)
                }
                None => {
                    println!("no derivation of {e} within {depth} steps from {rules}");
                    Ok(1)
                }
            }
        }
        Command::Compress { word } => {
            let sig: Signature = word.parse().map_err(|e| format!("{e}"))?;
            let verdict = is_compressed(&sig);
            println!("{} is {}compressed", sig, if verdict { "" } else { "not " });
            Ok(verdict_code(verdict))
        }
        Command::SigmaTerm { word, var } => {
            let sig: Signature = word.parse().map_err(|e| format!("{e}"))?;
            if !matches!(parse(&var), Ok(medial_core::term::Term::Leaf(_))) {
                return Err(format!("`{var}` is not a variable"));
            }
            let t = build_sigma_term(&sig, &var).map_err(|e| e.to_string())?;
            debug_assert!(terminator(&t, &Position::root(), &sig).is_ok());
            println!("{t}");
            Ok(0)
        }
        Command::Lambda { term } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let (q, p1, p2) = total_color(&t);
            println!(
                "{}",
                serde_json::json!({
                    "term": t.to_string(),
                    "lambda": [q.a, q.b, q.c, q.d],
                    "phi1": p1,
                    "phi2": p2,
                })
            );
            Ok(0)
        }
        Command::Represent { tuple, witness } => {
            let q = TotalColor::parse(&tuple).map_err(|e| e.to_string())?;
            let verdict = is_representable(&q);
            if verdict && witness {
                let t = construct_tree(&q).map_err(|e| e.to_string())?;
                println!("{q} is representable: {t}");
            } else {
                println!("{q} is {}representable", if verdict { "" } else { "not " });
            }
            Ok(verdict_code(verdict))
        }
        Command::QuadForm { term } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let (out, trace) = to_quad_form(&t).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::json!({
                    "result": out.to_string(),
                    "trace": serde_json::to_value(&trace).unwrap(),
                })
            );
            Ok(0)
        }
        Command::Spectrum { s, row } => {
            let spec = MulticirculantSpec::parse(&s, &row).map_err(|e| e.to_string())?;
            let spectrum = eigenvalues(&spec);
            let eigs: Vec<[f64; 2]> = spectrum.eigenvalues.iter().map(|l| [l.re, l.im]).collect();
            println!(
                "{}",
                serde_json::json!({
                    "eigenvalues": eigs,
                    "determinant": [spectrum.determinant.re, spectrum.determinant.im],
                    "determinant_exact": spectrum.determinant_exact.to_string(),
                })
            );
            Ok(0)
        }
        Command::BasisStatus { group } => {
            let g = GroupSpec::parse(&group).map_err(|e| e.to_string())?;
            let d = interchange_basis_decision(&g);
            println!(
                "{}",
                serde_json::json!({
                    "verdict": d.verdict,
                    "methods": {
                        "congruence": d.congruence,
                        "rank": d.rank_full,
                        "closed_form": d.closed_form,
                    },
                })
            );
            Ok(verdict_code(d.verdict))
        }
        Command::ModelCheck { table, identity } => {
            let text = std::fs::read_to_string(&table).map_err(|e| e.to_string())?;
            let groupoid = FiniteGroupoid::parse(&text).map_err(|e| e.to_string())?;
            let e = parse_identity(&identity).map_err(|e| e.to_string())?;
            let verdict = model_check(&groupoid, &e);
            println!("{} holds in the model: {}", e, if verdict { "yes" } else { "no" });
            Ok(verdict_code(verdict))
        }
        Command::Enumerate { rank, report } => {
            let r = match report {
                ReportKind::Representability => harness::representability_report(rank),
                ReportKind::Interchange => harness::interchange_report(rank),
                ReportKind::Closure => harness::closure_report(),
            };
            println!("{}", r.render());
            Ok(verdict_code(r.ok))
        }
    }
}
