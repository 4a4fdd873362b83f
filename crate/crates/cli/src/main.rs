//! `bsfh`: command-line front end.

mod verify;
mod workspace;

use anyhow::{bail, Context, Result};
use bsfh_core::homalg::{CancelOrder, Kind};
use bsfh_core::invariants::Invariant;
use bsfh_core::ops;
use bsfh_core::{ArcDiagram, Algebra};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use workspace::{InvariantKind, Workspace};

#[derive(Parser)]
#[command(name = "bsfh", version, about = "Bordered sutured Floer homology of nice diagrams")]
struct Cli {
    /// Worker threads for relation checks and algebra verification.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validates an arc diagram (.arc), a Heegaard diagram (.hd) or an operations file (.ops).
    Check { path: PathBuf },
    /// Lists generators by spin-c class.
    Generators {
        diagram: PathBuf,
        #[arg(long)]
        spinc: Option<String>,
    },
    /// Computes an invariant of a nice diagram.
    Invariant {
        #[arg(value_enum)]
        kind: InvariantKind,
        diagram: PathBuf,
        #[arg(long)]
        spinc: Option<String>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Box tensor product. Operands are .ops files or `<kind>:<diagram>[@<spinc>]`.
    Tensor {
        lhs: String,
        rhs: String,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Cancels idempotent-coefficient terms until none remain.
    Reduce {
        structure: String,
        #[arg(long, value_enum, default_value_t = Order::First)]
        order: Order,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Glues two diagrams along boundary components and prints the result.
    Glue {
        first: PathBuf,
        second: PathBuf,
        /// `<component of first>=<component of second>`; repeatable.
        #[arg(long = "along")]
        along: Vec<String>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Prints generator gradings and checks the grading law of every term.
    Grading {
        #[arg(value_enum)]
        kind: InvariantKind,
        diagram: PathBuf,
        #[arg(long)]
        spinc: Option<String>,
    },
    /// Runs a named check suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Fixture directory.
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    First,
    Last,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    PaperExamples,
}

fn write_export(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// Runs the structure relation matching the kind; prints the witness on failure.
fn report_relations(st: &bsfh_core::homalg::Structure) -> bool {
    let r = match st.kind() {
        Kind::TypeD | Kind::Complex => st.check_typed().unwrap_or_else(|_| st.check()),
        Kind::AInf => st.check_ainf().unwrap_or_else(|_| st.check()),
        Kind::TypeDA => st.check_da(),
    };
    match r {
        Ok(()) => true,
        Err(v) => {
            println!("violation: {}", v);
            false
        }
    }
}

fn check_arc(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let z = ArcDiagram::parse(&text)?;
    println!("points {}", z.num_points());
    println!("pairs {}", z.num_pairs);
    println!("segments {}", z.segments.len());
    if let Err(e) = z.validate() {
        println!("degenerate: {}", e);
        return Ok(false);
    }
    let alg = Algebra::new(&z)?;
    let counts: Vec<String> = (0..=z.num_pairs).map(|i| alg.summand(i).len().to_string()).collect();
    println!("summands ({})", counts.join(","));
    let diff = (0..alg.len()).any(|a| !alg.diff_basis(a).is_empty());
    println!("differential {}", if diff { "nonzero" } else { "zero" });
    let bad = alg.axiom_violations();
    for v in &bad {
        println!("violation: {}", v);
    }
    Ok(bad.is_empty())
}

fn check_hd(ws: &mut Workspace, path: &Path) -> Result<bool> {
    let h = ws.diagram(path)?;
    let report = h.check();
    for p in &report.problems {
        println!("problem: {}", p);
    }
    let adm = h.admissibility();
    println!("regions {}", h.regions.len());
    println!("generators {}", h.generators().len());
    println!("spinc classes {}", h.spinc_partition().len());
    println!("nice {}", if h.is_nice() { "yes" } else { "no" });
    println!("provincially admissible {}", if adm.provincial { "yes" } else { "no" });
    println!("admissible {}", if adm.full { "yes" } else { "no" });
    Ok(report.is_ok())
}

fn check_ops(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let st = ops::import(&text)?;
    println!("kind {:?}", st.kind());
    println!("generators {}", st.gens.len());
    println!("terms {}", st.num_terms());
    Ok(report_relations(&st))
}

fn print_invariant(inv: &Invariant) {
    print!("{}", inv.structure.pretty());
}

fn run(cli: Cli) -> Result<bool> {
    let mut ws = Workspace::default();
    match cli.command {
        Command::Check { path } => match path.extension().and_then(|e| e.to_str()) {
            Some("arc") => check_arc(&path),
            Some("hd") => check_hd(&mut ws, &path),
            Some("ops") => check_ops(&path),
            _ => bail!("unknown file type `{}`: expected .arc, .hd or .ops", path.display()),
        },
        Command::Generators { diagram, spinc } => {
            let h = ws.diagram(&diagram)?;
            let classes = match &spinc {
                Some(k) => vec![h.select_spinc(k)?],
                None => h.spinc_partition(),
            };
            for c in classes {
                let names: Vec<String> = c.generators.iter().map(|g| h.generator_name(g)).collect();
                println!("class {}: {}", c.index, names.join(" "));
            }
            Ok(true)
        }
        Command::Invariant { kind, diagram, spinc, export } => {
            let inv = ws.invariant(kind, &diagram, spinc.as_deref())?;
            print_invariant(&inv);
            write_export(&export, &ops::export(&inv.structure))?;
            Ok(report_relations(&inv.structure))
        }
        Command::Tensor { lhs, rhs, export } => {
            let a = ws.structure(&lhs)?;
            let b = ws.structure(&rhs)?;
            let t = if a.kind() == Kind::AInf { a.box_tensor(&b)? } else { a.box_da(&b)? };
            print!("{}", t.pretty());
            write_export(&export, &ops::export(&t))?;
            Ok(report_relations(&t))
        }
        Command::Reduce { structure, order, export } => {
            let st = ws.structure(&structure)?;
            let order = match order {
                Order::First => CancelOrder::First,
                Order::Last => CancelOrder::Last,
            };
            let r = st.reduce_with(order)?;
            print!("{}", r.pretty());
            write_export(&export, &ops::export(&r))?;
            Ok(report_relations(&r))
        }
        Command::Glue { first, second, along, export } => {
            let a = ws.diagram(&first)?;
            let b = ws.diagram(&second)?;
            let pairs: Vec<(String, String)> = along
                .iter()
                .map(|s| s.split_once('=').map(|(x, y)| (x.to_string(), y.to_string())).context("expected `--along <first>=<second>`"))
                .collect::<Result<_>>()?;
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
            let g = a.glue(&b, &refs)?;
            let text = g.raw.to_string();
            print!("{}", text);
            write_export(&export, &text)?;
            Ok(g.check().is_ok())
        }
        Command::Grading { kind, diagram, spinc } => {
            let h = ws.diagram(&diagram)?;
            let inv = ws.invariant(kind, &diagram, spinc.as_deref())?;
            let base = inv.generators.first().context("no generators")?;
            for g in &inv.generators {
                let c = h.generator_grading(g, base)?;
                println!("gr {} = {} mod {} periodic classes", h.generator_name(g), c.rep, c.stabilizer.gens.len());
            }
            let bad = inv.grading_violations(&h)?;
            for v in &bad {
                println!("violation: {}", v);
            }
            println!("grading law {}", if bad.is_empty() { "holds" } else { "fails" });
            Ok(bad.is_empty())
        }
        Command::Verify { suite: Suite::PaperExamples, fixtures } => verify::example_suite(&fixtures),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {}", e);
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
