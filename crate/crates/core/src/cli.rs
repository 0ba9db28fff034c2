//! Command-line front end. Every command prints one JSON document with
//! sorted keys; exit status is 0 on success, 1 when a verification fails
//! and 2 on usage or resource errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::ce::{cmodb_dim, homology_dims, RankMethod};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hall::{hall_dims, FreeLie};
use crate::homs::{calibrate, johnson, lie_json, morita, verify_morita_johnson};
use crate::malcev::Nilpotent;
use crate::word::{
    catalog, catalog_expr, format_automorphism, parse_automorphism, torelli_search, MappingClass,
    Word,
};

/// Default verification suite at genus 2: catalog expressions, one per
/// instance. `sep1` is excluded since it fixes the duality sign.
pub const DEFAULT_SUITE: &[&str] = &[
    "conj_l",
    "conj_l^-1",
    "sep1^-1",
    "conj_l sep1",
    "sep1^2 conj_l^-1",
    "mix1 sep1 mix1^-1",
    "mix1^-1 sep1 mix1",
    "s2 mix1 sep1 mix1^-1 s2^-1",
    "t2 mix1^-1 sep1 mix1 t2^-1",
    "mix1 t1 sep1 t1^-1 mix1^-1 sep1",
];

#[derive(Parser, Debug)]
#[command(
    name = "torelli",
    version,
    about = "Johnson and Morita homomorphisms on nilpotent quotients of surface groups"
)]
struct Cli {
    /// Configuration file (key=value).
    #[arg(long, global = true, default_value = "torelli.conf")]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Sparse,
    Bareiss,
}

#[derive(Args, Debug)]
struct Source {
    /// Automorphism file (`a1 -> a1 b1` lines, optional `inverse:` section).
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    auto: Option<PathBuf>,
    /// Catalog expression such as `mix1 sep1 mix1^-1`.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of the graded pieces of the free Lie algebra.
    HallDims {
        #[arg(long)]
        n: usize,
        #[arg(long = "class")]
        class: usize,
    },
    /// Rational homology of the Lie algebra of Γ_k.
    Homology {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        weights: bool,
        #[arg(long, value_enum, default_value = "sparse")]
        method: Method,
    },
    /// dim C_3 − dim B_3 for the Lie algebra of Γ_k.
    CmodbDim {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
    },
    /// Log and collected coordinates of a word in Γ_k.
    Log {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        word: String,
    },
    /// k-th Johnson homomorphism.
    Johnson {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Chain-level k-th Morita homomorphism and its d² invariant.
    Morita {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        source: Source,
        /// Include the 3-cycle itself.
        #[arg(long)]
        chain: bool,
    },
    /// Checks τ_k = (D⊗id)∘d²∘τ̃_k on a suite of Torelli elements.
    Verify {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        /// `default` or a file with one catalog expression per line.
        #[arg(long, default_value = "default")]
        suite: String,
    },
    /// Fixes the two global signs and stores them in the configuration.
    Calibrate {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        force: bool,
    },
    /// Products of catalog elements acting trivially on homology.
    SearchTorelli {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 10)]
        max_length: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Comma-separated catalog names.
        #[arg(long, value_delimiter = ',')]
        gens: Option<Vec<String>>,
    },
}

fn load_source(src: &Source, g: usize) -> Result<(String, MappingClass)> {
    if let Some(path) = &src.auto {
        let text = std::fs::read_to_string(path)?;
        let m = MappingClass::new(parse_automorphism(&text, g)?)?;
        return Ok((path.display().to_string(), m));
    }
    let expr = src.catalog.as_deref().unwrap_or("id");
    Ok((expr.to_string(), catalog_expr(g, expr)?))
}

fn suite_entries(suite: &str) -> Result<Vec<String>> {
    if suite == "default" {
        return Ok(DEFAULT_SUITE.iter().map(|s| s.to_string()).collect());
    }
    let text = std::fs::read_to_string(suite)?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

struct Outcome {
    json: Value,
    failed: bool,
}

fn ok(json: Value) -> Result<Outcome> {
    Ok(Outcome {
        json,
        failed: false,
    })
}

fn execute(cli: Cli) -> Result<Outcome> {
    let config = RunConfig::load(&cli.config)?;
    match cli.command {
        Command::HallDims { n, class } => {
            let mut m = Map::new();
            for (w, d) in hall_dims(n, class).into_iter().enumerate() {
                m.insert((w + 1).to_string(), json!(d));
            }
            ok(Value::Object(m))
        }
        Command::Homology {
            g,
            k,
            nmax,
            weights,
            method,
        } => {
            let method = match method {
                Method::Sparse => RankMethod::Sparse,
                Method::Bareiss => RankMethod::Bareiss,
            };
            let t = homology_dims(g, k, nmax, method, config.max_block)?;
            let mut total = Map::new();
            for (n, d) in t.total.iter().enumerate() {
                total.insert(n.to_string(), json!(d));
            }
            let mut out = json!({ "genus": g, "k": k, "dims": total });
            if weights {
                let mut bw = Map::new();
                for (n, row) in &t.by_weight {
                    let r: Map<String, Value> =
                        row.iter().map(|(w, d)| (w.to_string(), json!(d))).collect();
                    bw.insert(n.to_string(), Value::Object(r));
                }
                out["by_weight"] = Value::Object(bw);
            }
            ok(out)
        }
        Command::CmodbDim { g, k } => {
            ok(json!({ "cmodb_dim": cmodb_dim(g, k, config.max_block)?, "genus": g, "k": k }))
        }
        Command::Log { g, k, word } => {
            let nil = Nilpotent::get(g, k)?;
            let w = Word::parse(&word, g)?;
            let x = nil.log_word(&w);
            let alg = FreeLie::get(2 * g, k - 1);
            ok(json!({
                "log": lie_json(&alg, &x.log),
                "normal_form": nil.word_normal_form(&w).0,
                "word": w.to_string(),
            }))
        }
        Command::Johnson { g, k, source } => {
            let (name, phi) = load_source(&source, g)?;
            let mut out = johnson(&phi, k)?.to_json();
            out["name"] = json!(name);
            ok(out)
        }
        Command::Morita {
            g,
            k,
            source,
            chain,
        } => {
            let (name, phi) = load_source(&source, g)?;
            let cal = config
                .calibration()
                .unwrap_or(crate::homs::Calibration { eps: 1, delta: 1 });
            let m = morita(&phi, k, cal.eps, config.max_terms)?;
            let mut out = m.to_json();
            if !chain {
                out.as_object_mut().unwrap().remove("cycle");
            }
            out["cycle_terms"] = json!(m.cycle.len());
            out["eps"] = json!(cal.eps);
            out["name"] = json!(name);
            ok(out)
        }
        Command::Verify { g, k, suite } => {
            let cal = config.calibration()?;
            let mut results = Vec::new();
            let mut failed = false;
            for expr in suite_entries(&suite)? {
                let phi = catalog_expr(g, &expr)?;
                let v = verify_morita_johnson(&phi, k, cal, config.max_terms)?;
                failed |= !v.holds;
                let mut r = json!({ "holds": v.holds, "name": expr });
                if !v.holds {
                    r["discrepancy"] = v.difference.to_json();
                }
                results.push(r);
            }
            Ok(Outcome {
                json: json!({
                    "all_hold": !failed,
                    "calibration": { "delta": cal.delta, "eps": cal.eps },
                    "genus": g,
                    "k": k,
                    "results": results,
                }),
                failed,
            })
        }
        Command::Calibrate { g, force } => {
            if (config.eps.is_some() || config.delta.is_some()) && !force {
                return Err(Error::Calibration(format!(
                    "{} already holds signs; pass --force to overwrite",
                    cli.config.display()
                )));
            }
            let cal = calibrate(g, config.max_terms)?;
            let updated = RunConfig {
                genus: g,
                eps: Some(cal.eps),
                delta: Some(cal.delta),
                ..config
            };
            write_config(&cli.config, &updated)?;
            ok(
                json!({ "config": cli.config.display().to_string(), "delta": cal.delta, "eps": cal.eps }),
            )
        }
        Command::SearchTorelli {
            g,
            max_length,
            count,
            gens,
        } => {
            let cat = catalog(g)?;
            let names: Vec<String> = match gens {
                Some(v) => v,
                None => cat
                    .iter()
                    .map(|(n, _)| n.clone())
                    .filter(|n| {
                        n.starts_with('t')
                            || n.starts_with('s') && !n.starts_with("sep")
                            || n.starts_with("mix")
                    })
                    .collect(),
            };
            let mut chosen = Vec::new();
            for n in &names {
                match cat.iter().find(|(m, _)| m == n) {
                    Some(e) => chosen.push(e.clone()),
                    None => return Err(Error::Config(format!("unknown catalog entry `{n}`"))),
                }
            }
            let found = torelli_search(g, &chosen, max_length, count);
            let list: Vec<Value> = found
                .iter()
                .map(|(n, m)| json!({ "automorphism": format_automorphism(m), "name": n }))
                .collect();
            ok(json!({ "found": list, "generators": names }))
        }
    }
}

fn write_config(path: &Path, c: &RunConfig) -> Result<()> {
    std::fs::write(path, c.render())?;
    Ok(())
}

/// Parses `args` (including the program name), runs the command and writes
/// JSON to `out` or an error to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.json).unwrap());
            i32::from(o.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            2
        }
    }
}
