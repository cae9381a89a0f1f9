mod input;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ng_spectral::bounds::{bound_report, rho0};
use ng_spectral::par::with_workers;
use ng_spectral::staircase::{enumerate_sstar, enumerate_sstar_sym};
use ng_spectral::verifier::{
    final_case_certificate, verify_bruteforce_with, verify_staircase, write_verify_csv,
    CertificateReport, SearchSpace, VerifyReport,
};
use ng_spectral::{BoundReport, EqualityWitness, Exec, ParamSix, StaircaseMatrix};
use serde::Serialize;

use input::Item;
use output::{join, sig12, write_json, write_json_line, Format, Table};

/// Spectral-radius bounds for staircase matrices and exhaustive checks of
/// the Nordhaus-Gaddum extremal problem.
#[derive(Parser, Debug)]
#[command(name = "ng", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for `verify` and `certificate`; 1 runs sequentially.
    #[arg(long, env = "NG_PARALLEL", global = true)]
    parallel: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// One graph in graph6; must be a threshold graph.
    #[arg(long)]
    graph6: Option<String>,
    /// One profile as `{"n": N, "mu": [...]}`.
    #[arg(long)]
    profile: Option<String>,
    /// File of graph6 lines, profile JSON lines or an edge list; `-` reads
    /// stdin.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrderRange {
    #[arg(long, conflicts_with_all = ["from", "to"])]
    n: Option<usize>,
    #[arg(long, requires = "to")]
    from: Option<usize>,
    #[arg(long, requires = "from")]
    to: Option<usize>,
}

impl OrderRange {
    fn orders(&self) -> Result<Vec<usize>> {
        match (self.n, self.from, self.to) {
            (Some(n), _, _) => Ok(vec![n]),
            (None, Some(a), Some(b)) if a <= b => Ok((a..=b).collect()),
            (None, Some(a), Some(b)) => bail!("--from {a} is larger than --to {b}"),
            _ => bail!("give --n or both --from and --to"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Space {
    /// Every labeled graph (n <= 7, or 8 with --allow-large).
    All,
    /// Symmetric staircase matrices (n <= 24).
    Staircase,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    Sstar,
    Sym,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral radii and every phi bound for one or more graphs.
    Bounds(InputArgs),
    /// Parameters (c, v, s, cbar, vbar, sbar, T).
    Params(InputArgs),
    /// Maximum of rho(G) + rho(complement) against the closed form.
    Verify {
        #[command(flatten)]
        range: OrderRange,
        #[arg(long, value_enum, default_value_t = Space::Staircase)]
        space: Space,
        /// Admit n = 8 for `--space all` (hours of work).
        #[arg(long)]
        allow_large: bool,
    },
    /// Stream the profiles of a staircase class.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Sstar)]
        class: ClassArg,
    },
    /// The 6x6 certificate for the last case of the proof.
    Certificate {
        #[arg(long)]
        k_max: i64,
    },
    /// Closed-form extremal value over a range of orders.
    Rho0 {
        #[command(flatten)]
        range: OrderRange,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let workers = match cli.parallel {
        Some(0) => bail!("--parallel must be at least 1"),
        w => w,
    };
    let outcome = match &cli.command {
        Command::Bounds(inp) => bounds(&load(inp)?, cli.format, &mut out)?,
        Command::Params(inp) => params(&load(inp)?, cli.format, &mut out)?,
        Command::Verify {
            range,
            space,
            allow_large,
        } => {
            let orders = range.orders()?;
            let reports = in_pool(workers, |exec| {
                orders
                    .iter()
                    .map(|&n| match space {
                        Space::All => verify_bruteforce_with(n, exec, *allow_large),
                        Space::Staircase => verify_staircase(n, exec),
                    })
                    .collect::<ng_spectral::Result<Vec<_>>>()
            })?;
            verify_out(&reports, cli.format, &mut out)?
        }
        Command::Enumerate { n, class } => enumerate(*n, *class, cli.format, &mut out)?,
        Command::Certificate { k_max } => {
            let rep = in_pool(workers, |exec| final_case_certificate(*k_max, exec))?;
            certificate_out(&rep, cli.format, &mut out)?
        }
        Command::Rho0 { range } => rho0_out(&range.orders()?, cli.format, &mut out)?,
    };
    out.flush()?;
    Ok(outcome)
}

fn load(inp: &InputArgs) -> Result<Vec<Item>> {
    match (&inp.graph6, &inp.profile, &inp.input) {
        (Some(g), _, _) => Ok(vec![input::from_graph6(g)?]),
        (_, Some(p), _) => Ok(vec![input::from_profile(p)?]),
        (_, _, Some(path)) => input::from_path(path),
        _ => bail!("give one of --graph6, --profile or --input"),
    }
}

/// Runs `f` sequentially for one worker, on a pool of the requested size
/// otherwise, and on the default pool when no count is given.
fn in_pool<R: Send>(workers: Option<usize>, f: impl FnOnce(Exec) -> R + Send) -> R {
    match workers {
        Some(1) => f(Exec::Sequential),
        Some(w) => with_workers(w, || f(Exec::Parallel)),
        None => f(Exec::Parallel),
    }
}

fn mu_text(a: &StaircaseMatrix) -> String {
    join(a.mu(), " ")
}

fn witness_text(w: &Option<EqualityWitness>) -> String {
    match w {
        None => "-".into(),
        Some(EqualityWitness::Clique { clique, isolated }) => {
            format!("K_{clique} + N_{isolated}")
        }
        Some(EqualityWitness::SplitJoin {
            t,
            clique,
            independent,
            isolated,
        }) => format!("(K_{clique} v N_{independent}) + N_{isolated}, t = {t}"),
    }
}

#[derive(Serialize)]
struct BoundsLine<'a> {
    source: &'a str,
    n: usize,
    mu: &'a [usize],
    #[serde(flatten)]
    report: &'a BoundReport,
}

fn bounds(items: &[Item], format: Format, out: &mut dyn Write) -> Result<Outcome> {
    let reports = items
        .iter()
        .map(|it| bound_report(&it.matrix))
        .collect::<ng_spectral::Result<Vec<_>>>()?;
    if format == Format::Json {
        for (it, r) in items.iter().zip(&reports) {
            write_json_line(
                out,
                &BoundsLine {
                    source: &it.source,
                    n: it.matrix.n(),
                    mu: it.matrix.mu(),
                    report: r,
                },
            )?;
        }
        return Ok(Outcome::Pass);
    }
    let mut t = Table::new(vec![
        "source", "n", "mu", "rho", "rho_bar", "phi", "phi_bar", "phi_ell", "c", "v", "s",
        "cbar", "vbar", "sbar", "T", "equality_case",
    ]);
    for (it, r) in items.iter().zip(&reports) {
        let p = &r.params;
        let phi_ell = if format == Format::Text {
            r.phi_ell.iter().map(|&x| sig12(x)).collect::<Vec<_>>().join(" ")
        } else {
            join(&r.phi_ell, " ")
        };
        t.push(vec![
            it.source.as_str().into(),
            it.matrix.n().into(),
            mu_text(&it.matrix).into(),
            r.rho.into(),
            r.rho_bar.into(),
            r.phi.into(),
            r.phi_bar.into(),
            phi_ell.into(),
            p.c.into(),
            p.v.into(),
            p.s.into(),
            p.cbar.into(),
            p.vbar.into(),
            p.sbar.into(),
            p.t.into(),
            witness_text(&r.equality_case).into(),
        ]);
    }
    write_table(&t, format, out)?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct ParamsLine<'a> {
    n: usize,
    mu: &'a [usize],
    #[serde(flatten)]
    params: ParamSix,
}

fn params(items: &[Item], format: Format, out: &mut dyn Write) -> Result<Outcome> {
    let mut t = Table::new(vec!["n", "mu", "c", "v", "s", "cbar", "vbar", "sbar", "T"]);
    for it in items {
        let p = it.matrix.full_params()?;
        if format == Format::Json {
            write_json_line(
                out,
                &ParamsLine {
                    n: it.matrix.n(),
                    mu: it.matrix.mu(),
                    params: p,
                },
            )?;
            continue;
        }
        t.push(vec![
            it.matrix.n().into(),
            mu_text(&it.matrix).into(),
            p.c.into(),
            p.v.into(),
            p.s.into(),
            p.cbar.into(),
            p.vbar.into(),
            p.sbar.into(),
            p.t.into(),
        ]);
    }
    if format != Format::Json {
        write_table(&t, format, out)?;
    }
    Ok(Outcome::Pass)
}

fn enumerate(n: usize, class: ClassArg, format: Format, out: &mut dyn Write) -> Result<Outcome> {
    let it = match class {
        ClassArg::Sstar => enumerate_sstar(n)?,
        ClassArg::Sym => enumerate_sstar_sym(n)?,
    };
    if format == Format::Csv {
        writeln!(out, "n,mu")?;
    }
    for a in it {
        match format {
            Format::Json => write_json_line(out, &a)?,
            Format::Csv => writeln!(out, "{n},{}", mu_text(&a))?,
            Format::Text => writeln!(out, "{}", mu_text(&a))?,
        }
    }
    Ok(Outcome::Pass)
}

fn space_name(s: SearchSpace) -> &'static str {
    match s {
        SearchSpace::AllGraphs => "all_graphs",
        SearchSpace::StaircaseSym => "staircase_sym",
    }
}

fn verify_out(reports: &[VerifyReport], format: Format, out: &mut dyn Write) -> Result<Outcome> {
    match format {
        Format::Json => write_json(out, reports)?,
        Format::Csv => write_verify_csv(&mut *out, reports)?,
        Format::Text => {
            let mut t = Table::new(vec![
                "n", "space", "max", "rho0", "gap", "maximizers", "instances", "status",
            ]);
            for r in reports {
                let labels: Vec<&str> = r.arg_max.iter().map(|m| m.label.as_str()).collect();
                t.push(vec![
                    r.n.into(),
                    space_name(r.search_space).into(),
                    r.max_value.into(),
                    r.rho0_expected.into(),
                    format!("{:.3e}", r.gap).into(),
                    labels.join("; ").into(),
                    r.instances_checked.into(),
                    if r.passed() { "pass" } else { "FAIL" }.into(),
                ]);
            }
            t.write_text(out)?;
            for r in reports {
                for c in &r.counterexamples {
                    writeln!(out, "n = {}: {c}", r.n)?;
                }
            }
        }
    }
    Ok(if reports.iter().all(VerifyReport::passed) {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn certificate_out(rep: &CertificateReport, format: Format, out: &mut dyn Write) -> Result<Outcome> {
    match format {
        Format::Json => write_json(out, rep)?,
        Format::Csv => rep.write_csv(&mut *out)?,
        Format::Text => {
            let mut t = Table::new(vec![
                "k", "instances", "expected", "det", "h", "roots", "bound", "min_margin", "thin",
            ]);
            for r in &rep.rows {
                t.push(vec![
                    r.k.into(),
                    r.instances.into(),
                    r.expected_instances.into(),
                    r.det_failures.into(),
                    r.h_failures.into(),
                    r.interleaving_failures.into(),
                    r.bound_failures.into(),
                    r.min_margin.into(),
                    r.thin.into(),
                ]);
            }
            t.write_text(out)?;
            writeln!(
                out,
                "{} instances, {} failures: {}",
                rep.instances_checked,
                rep.failures.len(),
                if rep.passed { "pass" } else { "FAIL" }
            )?;
            for f in &rep.failures {
                writeln!(out, "{f}")?;
            }
        }
    }
    Ok(if rep.passed { Outcome::Pass } else { Outcome::Fail })
}

fn rho0_out(orders: &[usize], format: Format, out: &mut dyn Write) -> Result<Outcome> {
    let rows = orders
        .iter()
        .map(|&n| rho0(n))
        .collect::<ng_spectral::Result<Vec<_>>>()?;
    if format == Format::Json {
        write_json(out, &rows)?;
        return Ok(Outcome::Pass);
    }
    let mut t = Table::new(vec!["n", "k", "k_n", "rho0", "u_n", "best_q", "f"]);
    for r in &rows {
        let f: Vec<String> = r
            .f
            .coeffs()
            .iter()
            .map(|&c| if format == Format::Text { sig12(c) } else { c.to_string() })
            .collect();
        t.push(vec![
            r.n.into(),
            r.k.into(),
            usize::from(r.k_n).into(),
            r.rho0.into(),
            r.u_n.into(),
            join(&r.best_q, " ").into(),
            f.join(" ").into(),
        ]);
    }
    write_table(&t, format, out)?;
    Ok(Outcome::Pass)
}

fn write_table(t: &Table, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => t.write_csv(out),
        _ => t.write_text(out),
    }
}
