use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latdiag::bases::build_b;
use latdiag::combinatorics::{count_t, depth_tuple, enum_f, enum_t, mu_f, mu_f_holes};
use latdiag::determinant::delta;
use latdiag::shiftops::{shift_apply, ShiftOp};
use latdiag::spaces::{build_mkij, mkij_bound};
use latdiag::{Alphabet, Cell, LatticeDiagram, Partition};
use latdiag_cli::{render_table, run_suite, Check, SuiteConfig, OUT_DIR_ENV};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "latdiag", version, about = "Lattice diagram determinants and their derivative spaces")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write output to FILE (for `verify`, the report path; `.csv` selects CSV).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for `verify`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Default directory for reports when --out is not given.
    #[arg(long, global = true, env = OUT_DIR_ENV, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the lattice determinant of a diagram.
    Delta(DiagramArgs),
    /// Apply p_k, e_k or h_k to a diagram as a signed sum of diagrams.
    Shift(ShiftArgs),
    /// Dimension and Hilbert series of M^k_{i,j}.
    Mkij(AnchorArgs),
    /// Row-increasing injective tableaux with k white cells in the shadow.
    Tableaux(AnchorArgs),
    /// Circled selections, their shapes, holes and depth tuples.
    Selections(AnchorArgs),
    /// The explicit basis of the Y-degree zero part of M^k_{i,j}.
    Basis(AnchorArgs),
    /// Run the batch verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DiagramArgs {
    /// Cells as "(p,q);(p,q);...".
    #[arg(long, conflicts_with = "mu")]
    cells: Option<String>,
    /// A partition such as "3,2", optionally with --holes.
    #[arg(long)]
    mu: Option<String>,
    #[arg(long, requires = "mu")]
    holes: Option<String>,
}

impl DiagramArgs {
    fn diagram(&self) -> Result<LatticeDiagram> {
        match (&self.cells, &self.mu) {
            (Some(c), _) => Ok(c.parse()?),
            (None, Some(m)) => {
                let mu: Partition = m.parse()?;
                let holes = match &self.holes {
                    Some(h) => latdiag::diagrams::parse_cells(h)?,
                    None => Vec::new(),
                };
                Ok(mu.remove_cells(holes)?.diagram())
            }
            (None, None) => bail!("give --cells or --mu"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphabetArg {
    X,
    Y,
}

#[derive(Args)]
struct ShiftArgs {
    #[command(flatten)]
    diagram: DiagramArgs,
    /// pk, ek or hk.
    #[arg(long)]
    op: String,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "x")]
    alphabet: AlphabetArg,
}

#[derive(Args)]
struct AnchorArgs {
    #[arg(long)]
    mu: String,
    /// Anchor cell "(i,j)".
    #[arg(long, default_value = "(0,0)")]
    cell: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Only the Y-degree zero part (mkij).
    #[arg(long)]
    x_only: bool,
    /// List every item, not only the count (tableaux).
    #[arg(long)]
    list: bool,
}

impl AnchorArgs {
    fn parts(&self) -> Result<(Partition, Cell, usize)> {
        Ok((self.mu.parse()?, self.cell.parse()?, self.k))
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Checks to run (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<Check>,
    /// Largest |mu| (overrides the per-check defaults of 5, or 6 for X-only checks).
    #[arg(long)]
    max_size: Option<usize>,
    /// Random polynomials per ideal-equality case.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Random annihilator combinations per orbit case.
    #[arg(long, default_value_t = 20)]
    orbit_trials: usize,
    /// Refuse suites whose estimated cost exceeds this.
    #[arg(long, default_value_t = 2e9)]
    cost_ceiling: f64,
}

fn emit(cli: &Cli, value: &Value, text: String) -> Result<()> {
    let body = if cli.json { serde_json::to_string_pretty(value)? + "\n" } else { text };
    match &cli.out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Delta(a) => {
            let d = a.diagram()?;
            let p = delta(&d)?;
            emit(cli, &json!({ "diagram": d.cells(), "nvars": p.nvars(), "terms": p.to_json_terms() }), format!("{p}\n"))?;
        }
        Command::Shift(a) => {
            let d = a.diagram.diagram()?;
            let op: ShiftOp = a.op.parse()?;
            let alphabet = match a.alphabet {
                AlphabetArg::X => Alphabet::X,
                AlphabetArg::Y => Alphabet::Y,
            };
            let sum = shift_apply(op, a.k, &d, alphabet)?;
            let mut text = String::new();
            for (c, t) in &sum.terms {
                text += &format!("{}  {t}\n", latdiag::polycore::format_rational(c));
            }
            if sum.is_empty() {
                text += "0\n";
            }
            emit(cli, &serde_json::to_value(&sum)?, text)?;
        }
        Command::Mkij(a) => {
            let (mu, c, k) = a.parts()?;
            let space = build_mkij(&mu, c, k, a.x_only)?;
            let bound = mkij_bound(&mu, c, k)?;
            let hs = space.hilbert_series();
            let mut text = format!("dimension {}\nbound {bound}\n", space.dimension());
            for (dx, dy, n) in &hs {
                text += &format!("  ({dx},{dy}) {n}\n");
            }
            emit(
                cli,
                &json!({ "mu": mu.parts(), "cell": c, "k": k, "x_only": a.x_only, "dimension": space.dimension(), "bound": bound.to_string(), "hilbert": hs }),
                text,
            )?;
        }
        Command::Tableaux(a) => {
            let (mu, c, k) = a.parts()?;
            let count = count_t(&mu, c, k)?;
            let mut text = format!("{count}\n");
            let mut listed = Vec::new();
            if a.list {
                for t in enum_t(&mu, c, k)? {
                    for row in t.rows() {
                        let cells: Vec<String> = row.iter().map(|e| e.map_or("o".into(), |v| v.to_string())).collect();
                        text += &format!("{}\n", cells.join(" "));
                    }
                    text += "\n";
                    listed.push(t);
                }
            }
            emit(cli, &json!({ "count": count.to_string(), "tableaux": listed }), text)?;
        }
        Command::Selections(a) => {
            let (mu, c, k) = a.parts()?;
            let mut rows = Vec::new();
            let mut text = String::new();
            for sel in enum_f(&mu, c, k)? {
                let shape = mu_f(&sel);
                let holed = mu_f_holes(&sel)?;
                let depths = depth_tuple(&holed);
                text += &format!(
                    "circled {}  mu_F ({shape})  holes {}  depths {:?}\n",
                    latdiag::diagrams::format_cells(&sel.circled),
                    latdiag::diagrams::format_cells(&holed.holes),
                    depths.0
                );
                rows.push(json!({ "circled": sel.circled, "mu_f": shape.parts(), "holes": holed.holes, "depths": depths }));
            }
            emit(cli, &Value::Array(rows), text)?;
        }
        Command::Basis(a) => {
            let (mu, c, k) = a.parts()?;
            let family = build_b(&mu, c, k)?;
            let mut text = format!("{} elements\n", family.len());
            for e in &family.entries {
                text += &format!("{:?} {:?}: {}\n", e.index.layer, e.index.xmon, e.value);
            }
            emit(cli, &serde_json::to_value(&family)?, text)?;
        }
        Command::Verify(v) => {
            let cfg = SuiteConfig {
                checks: if v.checks.is_empty() { Check::ALL.to_vec() } else { v.checks.clone() },
                max_size: v.max_size,
                seed: cli.seed,
                jobs: cli.jobs,
                trials: v.trials,
                orbit_trials: v.orbit_trials,
                cost_ceiling: v.cost_ceiling,
            };
            let report = match (&cli.out, &cli.out_dir) {
                (Some(p), _) => p.clone(),
                (None, Some(d)) => d.join("report.json"),
                (None, None) => PathBuf::from("latdiag-report.json"),
            };
            let (summary, records) = run_suite(&cfg, &report)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print!("{}", render_table(&records));
                println!(
                    "{} records: {} pass, {} fail, {} finding ({} computed now); report {}",
                    summary.total,
                    summary.passed,
                    summary.failed,
                    summary.findings,
                    summary.computed,
                    report.display()
                );
            }
            return Ok(summary.ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
