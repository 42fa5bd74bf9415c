//! Command-line front end: coupling constants, hydrogen-like orbitals,
//! variational solves, batch tables, verification against the embedded
//! reference data.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

use helike::acceptance;
use helike::couplings;
use helike::functionals::{self, HylleraasState, ModelKind};
use helike::hydrogenic::{self, Orbital};
use helike::optimizer::{self, OptimizerConfig, VariationalResult, XiInitStrategy};
use helike::reference;

mod config;

const SCHEMA_VERSION: u32 = 1;

const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "helike",
    version,
    about = "Hydrogen- and helium-like atomic structure with inverse-square correction couplings"
)]
struct Cli {
    /// Optional key=value configuration file (flags take precedence)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Schrodinger,
    Improved,
    Both,
}

impl ModelArg {
    fn kinds(self) -> Vec<ModelKind> {
        match self {
            ModelArg::Schrodinger => vec![ModelKind::Schrodinger],
            ModelArg::Improved => vec![ModelKind::Improved],
            ModelArg::Both => vec![ModelKind::Schrodinger, ModelKind::Improved],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Pretty,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the intermediate functions, couplings, and basis exponents for one charge
    Deltas {
        #[arg(long)]
        z: i32,
    },
    /// Solve one hydrogen-like orbital in closed form
    Hydrogen {
        #[arg(long)]
        z: i32,
        #[arg(long)]
        n: i32,
        #[arg(long, default_value_t = 0)]
        l: i32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i32,
        /// spin label J (square-root branch), 0 or 1
        #[arg(long, default_value_t = 0)]
        j: i32,
        /// parity label P (square-root branch), 0 or 1
        #[arg(long, default_value_t = 1)]
        p: i32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Minimize a ground-state energy functional for one charge
    Solve {
        #[arg(long)]
        z: i32,
        #[arg(long, value_enum, default_value_t = ModelArg::Improved)]
        model: ModelArg,
        /// correlation order: 2, 3, or auto (3 through Z=56, then 2)
        #[arg(long, default_value = "auto")]
        order: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// start the exponent search from the embedded reference row
        #[arg(long)]
        seed_from_table: bool,
    },
    /// Solve a charge range and write the computed energy table
    Table {
        #[arg(long)]
        from: i32,
        #[arg(long)]
        to: i32,
        #[arg(long, default_value = "auto")]
        order: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// worker threads (also via HELIKE_THREADS or the config file)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed_from_table: bool,
    },
    /// Run the acceptance checklist against the embedded reference data
    Verify {
        /// run only criteria whose identifier contains this substring
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
    },
    /// Evaluate the functionals at the embedded parameters and compare
    Compare {
        #[arg(long, default_value_t = 1)]
        from: i32,
        #[arg(long, default_value_t = 8)]
        to: i32,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let outcome = match cli.cmd {
        Cmd::Deltas { z } => cmd_deltas(z),
        Cmd::Hydrogen {
            z,
            n,
            l,
            m,
            j,
            p,
            format,
        } => cmd_hydrogen(z, n, l, m, j, p, format),
        Cmd::Solve {
            z,
            model,
            order,
            format,
            out,
            seed_from_table,
        } => cmd_solve(&cfg, z, model, &order, format, out, seed_from_table),
        Cmd::Table {
            from,
            to,
            order,
            out,
            threads,
            seed_from_table,
        } => cmd_table(&cfg, from, to, &order, out, threads, seed_from_table),
        Cmd::Verify { only } => cmd_verify(only.as_deref()),
        Cmd::Compare {
            from,
            to,
            format,
            out,
        } => cmd_compare(from, to, format, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn parse_order(z: i32, order: &str) -> Result<usize, String> {
    match order {
        "auto" => Ok(optimizer::default_order(z)),
        "2" => Ok(2),
        "3" => Ok(3),
        other => Err(format!("order must be 2, 3, or auto, got {other:?}")),
    }
}

fn optimizer_config(cfg: &config::Config, seed_from_table: bool) -> OptimizerConfig {
    let mut oc = OptimizerConfig {
        xi_init_strategy: if seed_from_table {
            XiInitStrategy::TableSeed
        } else {
            XiInitStrategy::Heuristic
        },
        ..OptimizerConfig::default()
    };
    cfg.apply(&mut oc);
    oc
}

fn cmd_deltas(z: i32) -> CmdResult {
    let l = couplings::lambdas(z)?;
    let d = couplings::deltas(z)?;
    let e = couplings::basis_exponents(z)?;
    println!("Z = {z} (step index {})", l.kdot);
    for (name, v) in [
        ("Lambda1", l.l1),
        ("Lambda2", l.l2),
        ("Lambda3", l.l3),
        ("delta1", d.d1),
        ("delta2", d.d2),
        ("delta3", d.d3),
        ("A0", e.a0),
        ("A1", e.a1),
        ("B0", e.b0),
        ("B1", e.b1),
        ("C", e.c),
    ] {
        // 15 significant digits
        println!("{name:>8} = {v:.14e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hydrogen(z: i32, n: i32, l: i32, m: i32, j: i32, p: i32, format: Format) -> CmdResult {
    let orb = Orbital::new(n, l, m, j, p)?;
    let sol = hydrogenic::solve_orbital(&orb, z)?;
    match format {
        Format::Pretty => {
            println!("orbital (n={n}, l={l}, m={m}, J={j}, P={p}), Z = {z}");
            println!("  T               = {}", sol.t);
            println!("  L               = {}", sol.l_eff);
            println!("  xi              = {} 1/bohr", sol.xi);
            println!("  energy          = {} hartree", sol.energy);
            println!("  radial exponent = {}", sol.radial_exponent);
            println!("  sine exponent   = {}", sol.sine_exponent());
            println!("  radial coeffs   = {:?}", sol.radial_coeffs);
            println!("  angular coeffs  = {:?}", sol.angular_coeffs);
        }
        Format::Json => {
            let rec = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "z": z,
                "orbital": { "n": n, "l": l, "m": m, "j": j, "p": p },
                "t": sol.t,
                "l_eff": sol.l_eff,
                "xi": sol.xi,
                "energy": sol.energy,
                "radial_exponent": sol.radial_exponent,
                "sine_exponent": sol.sine_exponent(),
                "radial_coeffs": sol.radial_coeffs,
                "angular_coeffs": sol.angular_coeffs,
            });
            println!("{rec}");
        }
        Format::Csv => {
            println!("z,n,l,m,j,p,t,l_eff,xi,energy,radial_exponent");
            println!(
                "{z},{n},{l},{m},{j},{p},{},{},{},{},{}",
                sol.t, sol.l_eff, sol.xi, sol.energy, sol.radial_exponent
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_or_print(out: Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            std::io::stdout().flush()
        }
    }
}

fn solve_record(z: i32, model: ModelKind, r: &VariationalResult) -> serde_json::Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "z": z,
        "model": model.label(),
        "energy": r.energy,
        "xi1": r.state.xi1,
        "xi2": r.state.xi2,
        "coeffs": r.state.coeffs,
        "outer_iters": r.outer_iters,
        "converged": r.converged,
    })
}

fn cmd_solve(
    cfg: &config::Config,
    z: i32,
    model: ModelArg,
    order: &str,
    format: Format,
    out: Option<PathBuf>,
    seed_from_table: bool,
) -> CmdResult {
    let order = parse_order(z, order)?;
    let oc = optimizer_config(cfg, seed_from_table);
    let mut body = String::new();
    let mut all_converged = true;
    if format == Format::Csv {
        body.push_str("z,model,energy,xi1,xi2,b1,b2,b3,outer_iters,converged\n");
    }
    for kind in model.kinds() {
        let r = optimizer::solve_full_with_order(z, kind, &oc, order)?;
        all_converged &= r.converged;
        match format {
            Format::Pretty => {
                body.push_str(&format!(
                    "Z = {z}, model = {}\n  energy     = {} hartree\n  exponents  = ({}, {})\n  \
                     coeffs     = {:?}\n  iterations = {} (converged: {})\n",
                    kind.label(),
                    r.energy,
                    r.state.xi1,
                    r.state.xi2,
                    r.state.coeffs,
                    r.outer_iters,
                    r.converged
                ));
            }
            Format::Json => {
                body.push_str(&solve_record(z, kind, &r).to_string());
                body.push('\n');
            }
            Format::Csv => {
                let c = &r.state.coeffs;
                let cell = |i: usize| c.get(i).map(|v| v.to_string()).unwrap_or_default();
                body.push_str(&format!(
                    "{z},{},{},{},{},{},{},{},{},{}\n",
                    kind.label(),
                    r.energy,
                    r.state.xi1,
                    r.state.xi2,
                    cell(1),
                    cell(2),
                    cell(3),
                    r.outer_iters,
                    r.converged
                ));
            }
        }
    }
    write_or_print(out, &body)?;
    Ok(if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NONCONVERGENCE)
    })
}

struct TableRow {
    z: i32,
    result: Result<(VariationalResult, VariationalResult), String>,
}

fn cmd_table(
    cfg: &config::Config,
    from: i32,
    to: i32,
    order: &str,
    out: Option<PathBuf>,
    threads_flag: Option<usize>,
    seed_from_table: bool,
) -> CmdResult {
    if from < couplings::Z_MIN || to > couplings::Z_MAX || from > to {
        return Err(format!(
            "charge range must satisfy {} <= from <= to <= {}",
            couplings::Z_MIN,
            couplings::Z_MAX
        )
        .into());
    }
    let oc = optimizer_config(cfg, seed_from_table);
    let zs: Vec<i32> = (from..=to).collect();
    let threads = cfg.threads(threads_flag).clamp(1, zs.len().max(1));
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<TableRow>>> = Mutex::new((0..zs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= zs.len() {
                    break;
                }
                let z = zs[idx];
                let solve = |kind| -> Result<VariationalResult, String> {
                    parse_order(z, order).and_then(|ord| {
                        optimizer::solve_full_with_order(z, kind, &oc, ord)
                            .map_err(|e| e.to_string())
                    })
                };
                let result = solve(ModelKind::Schrodinger)
                    .and_then(|s| solve(ModelKind::Improved).map(|i| (s, i)));
                rows.lock().unwrap()[idx] = Some(TableRow { z, result });
            });
        }
    });
    let mut body = String::from("Z,lambda1,lambda2,xi1,xi2,E_S,E_Z,diff,status\n");
    let mut nonconverged = false;
    for slot in rows.into_inner().unwrap() {
        let row = slot.expect("all rows computed");
        match row.result {
            Ok((s, i)) => {
                let status = if s.converged && i.converged {
                    "ok"
                } else {
                    nonconverged = true;
                    "nonconverged"
                };
                body.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    row.z,
                    s.state.xi1,
                    s.state.xi2,
                    i.state.xi1,
                    i.state.xi2,
                    s.energy,
                    i.energy,
                    s.energy - i.energy,
                    status
                ));
            }
            Err(e) => {
                nonconverged = true;
                body.push_str(&format!("{},,,,,,,,{}\n", row.z, e.replace(',', ";")));
            }
        }
    }
    write_or_print(out, &body)?;
    Ok(if nonconverged {
        ExitCode::from(EXIT_NONCONVERGENCE)
    } else {
        ExitCode::SUCCESS
    })
}

/// Lenient criterion matching: substring, or token-prefix either way,
/// so `--only integrals` hits `integral-kernel`.
fn criterion_matches(id: &str, filter: &str) -> bool {
    if filter.is_empty() || id.contains(filter) {
        return true;
    }
    id.split('-').any(|tok| {
        filter
            .split('-')
            .any(|f| tok.starts_with(f) || f.starts_with(tok))
    })
}

fn cmd_verify(only: Option<&str>) -> CmdResult {
    let filter = only.unwrap_or("");
    let reports: Vec<_> = acceptance::CRITERION_IDS
        .iter()
        .filter(|id| criterion_matches(id, filter))
        .map(|id| acceptance::run(id).expect("listed ids all run"))
        .collect();
    if reports.is_empty() {
        return Err(format!(
            "no criterion matches {:?}; known ids: {}",
            only.unwrap_or(""),
            acceptance::CRITERION_IDS.join(", ")
        )
        .into());
    }
    let mut all_passed = true;
    for rep in &reports {
        println!("{:<40} {}", rep.id, rep.status_label());
        if !rep.passed {
            all_passed = false;
            for line in rep.details.iter().filter(|l| l.starts_with("BAD")) {
                println!("    {line}");
            }
        }
        for flag in &rep.flags {
            println!("    flagged: {flag}");
        }
    }
    let n_pass = reports.iter().filter(|r| r.passed).count();
    println!("{n_pass}/{} criteria passed", reports.len());
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_compare(from: i32, to: i32, format: Format, out: Option<PathBuf>) -> CmdResult {
    if from < couplings::Z_MIN || to > couplings::Z_MAX || from > to {
        return Err("invalid charge range".into());
    }
    let mut body = String::new();
    if format == Format::Csv {
        body.push_str("Z,E_S_ref,E_S_eval,E_S_dev,E_Z_ref,E_Z_eval,E_Z_dev,epsilon,eta\n");
    }
    for z in from..=to {
        let row = reference::row(z)?;
        let mk_state = |x1: f64, x2: f64, c: &[f64]| {
            let mut coeffs = vec![1.0];
            coeffs.extend_from_slice(c);
            HylleraasState::new(x1, x2, coeffs)
        };
        let es = functionals::energy(
            &mk_state(row.lambda1, row.lambda2, &row.a)?,
            z,
            ModelKind::Schrodinger,
        )?;
        let ez = functionals::energy(
            &mk_state(row.xi1, row.xi2, &row.b)?,
            z,
            ModelKind::Improved,
        )?;
        let eps = row
            .e_exp
            .map(|exp| reference::epsilon_metric(row.e_z, exp))
            .transpose()?;
        let eta = match (row.e0, row.e_corr) {
            (Some(e0), Some(ec)) => Some(reference::eta_metric(es, ez, e0, ec)?),
            _ => None,
        };
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        match format {
            Format::Csv => body.push_str(&format!(
                "{z},{},{es},{},{},{ez},{},{},{}\n",
                row.e_s,
                es - row.e_s,
                row.e_z,
                ez - row.e_z,
                opt(eps),
                opt(eta)
            )),
            Format::Pretty => body.push_str(&format!(
                "Z={z:>2}  E_S {es:+.7} (ref {:+.7}, dev {:+.2e})  E_Z {ez:+.7} (ref {:+.7}, dev {:+.2e}){}{}\n",
                row.e_s,
                es - row.e_s,
                row.e_z,
                ez - row.e_z,
                eps.map(|e| format!("  eps {e:.3e}")).unwrap_or_default(),
                eta.map(|e| format!("  eta {e:.3}")).unwrap_or_default(),
            )),
            Format::Json => {
                let rec = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "z": z,
                    "e_s_ref": row.e_s,
                    "e_s_eval": es,
                    "e_z_ref": row.e_z,
                    "e_z_eval": ez,
                    "epsilon": eps,
                    "eta": eta,
                });
                body.push_str(&rec.to_string());
                body.push('\n');
            }
        }
    }
    write_or_print(out, &body)?;
    Ok(ExitCode::SUCCESS)
}
