use std::error::Error;
use std::fs;
use std::io::{self as stdio, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use detlab::constructions::{self, ConstructionResult};
use detlab::cop;
use detlab::graph;
use detlab::io;
use detlab::leafrank::{self, Outcome};
use detlab::linalg::{det_exact, hadamard_row_bound};
use detlab::path::{self, PathFamily, RootStrategy, RootedTree};
use detlab::search::{self, MatrixClass};
use detlab::verify::{self, SuiteOptions};
use detlab::ExactMatrix;
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

mod bounds;

type Res<T = ()> = Result<T, Box<dyn Error>>;

#[derive(Parser, Debug)]
#[command(name = "detlab", version, about = "Exact determinants of sparse 0/1 matrices, edge Gramians, path-edge matrices and leaf ranks")]
struct Cli {
    /// Worker threads for the parallel parts (search, verify)
    #[arg(long, global = true, env = "DETLAB_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact determinant and Hadamard bound of a matrix file (`-` for stdin)
    Det { input: PathBuf },
    /// Gram determinant of the incidence matrix of a graph file
    Gram { input: PathBuf },
    /// Build one of the extremal matrices
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Number of nonzeros, for `prop01`
        #[arg(long)]
        t: Option<usize>,
        /// Write the matrix here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Consecutive-ones checks and the 2-COP row shortening
    #[command(subcommand)]
    Cop(CopCommand),
    /// Path-edge incidence matrices of trees
    #[command(subcommand)]
    Path(PathCommand),
    /// Exact leaf rank of a graph on at most 7 vertices
    Leafrank { input: PathBuf },
    /// Branch and bound for the largest |det| in a class of 0/1 matrices
    Search {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget: usize,
        /// Enumerate every matrix instead (n <= 5)
        #[arg(long)]
        exhaustive: bool,
        /// Write the witness matrix here
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Table of the bounds that apply to order n
    Bounds {
        #[arg(long)]
        n: usize,
        /// Number of ones (default 2n)
        #[arg(long)]
        ones: Option<usize>,
        /// Block count for the k-COP row
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Run a verification suite, or `all`
    Verify {
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Cyclic,
    Fano,
    Kcop,
    TwoCop,
    Prop01,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Maxones,
    Maxperrow,
    Kcop,
}

#[derive(Subcommand, Debug)]
enum CopCommand {
    /// Does every row have at most k blocks of ones
    Check {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Row shortening of a nonsingular 2-COP matrix
    Reduce { input: PathBuf },
    /// (2k)^(n/2) and 3.936^(n/2)
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PathCommand {
    /// Matrix, transform, row cases and reduction for a tree and path family
    Matrix {
        tree: PathBuf,
        paths: PathBuf,
        /// Root for the transform; by default a leaf where two paths end
        #[arg(long)]
        root: Option<usize>,
    },
    /// The ternary-tree instance of depth d
    Extremal {
        #[arg(long)]
        d: usize,
    },
    /// Is a 0/1 matrix (at most 5 columns) a path-edge matrix of some tree
    Realizable { input: PathBuf },
}

fn read_input(p: &Path) -> Res<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        stdio::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()).into())
    }
}

fn need(v: Option<usize>, name: &str, what: &str) -> Res<usize> {
    v.ok_or_else(|| format!("{what} needs --{name}").into())
}

fn print_json(v: &Value) -> Res {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn write_csv<T: Serialize>(rows: &[T]) -> Res {
    let mut w = csv::Writer::from_writer(stdio::stdout());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn matrix_csv(m: &ExactMatrix) -> Res {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(stdio::stdout());
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn det(fmt: Format, input: &Path) -> Res {
    let m = io::read_matrix(&read_input(input)?)?;
    let d = det_exact(&m)?;
    let bound = hadamard_row_bound(&m)?;
    match fmt {
        Format::Json => print_json(&json!({
            "det": d.to_string(),
            "abs_det": d.abs().to_string(),
            "hadamard": bound.value,
        })),
        Format::Csv => write_csv(&[DetRow {
            n: m.rows(),
            det: d.to_string(),
            abs_det: d.abs().to_string(),
            hadamard: bound.value,
        }]),
        Format::Text => {
            println!("det={d}");
            println!("abs_det={}", d.abs());
            println!("hadamard={}", bound.value);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DetRow {
    n: usize,
    det: String,
    abs_det: String,
    hadamard: f64,
}

fn gram(fmt: Format, input: &Path) -> Res {
    let g = io::read_graph(&read_input(input)?)?;
    let d = graph::gram_det(&g)?;
    let bound = graph::lemma_gram_bound(g.n(), g.m());
    let attains = graph::attains_lemma_bound(&d, g.n(), g.m());
    match fmt {
        Format::Json => print_json(&json!({
            "n": g.n(),
            "m": g.m(),
            "gram_det": d.to_string(),
            "bound": bound.value,
            "attains_bound": attains,
        })),
        Format::Csv => write_csv(&[GramRow {
            n: g.n(),
            m: g.m(),
            gram_det: d.to_string(),
            bound: bound.value,
            attains_bound: attains,
        }]),
        Format::Text => {
            println!("gram_det={d}");
            println!("bound={} ({})", bound.value, bound.formula);
            println!("attains_bound={attains}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct GramRow {
    n: usize,
    m: usize,
    gram_det: String,
    bound: f64,
    attains_bound: bool,
}

fn construct(
    fmt: Format,
    kind: Construction,
    (n, k, p, t): (Option<usize>, Option<usize>, Option<usize>, Option<usize>),
    output: Option<&Path>,
) -> Res {
    let r: ConstructionResult = match kind {
        Construction::Cyclic => constructions::cyclic_block_matrix(need(n, "n", "cyclic")?)?,
        Construction::Fano => constructions::fano_block_matrix(need(n, "n", "fano")?)?,
        Construction::Kcop => constructions::kcop_construct(need(k, "k", "kcop")?, need(p, "p", "kcop")?)?,
        Construction::TwoCop => constructions::two_cop_construct(need(p, "p", "two-cop")?)?,
        Construction::Prop01 => constructions::prop01_extremal(need(n, "n", "prop01")?, need(t, "t", "prop01")?)?,
    };
    let properties: Vec<String> = r.properties.iter().map(|p| p.to_string()).collect();
    let body = match fmt {
        Format::Json => serde_json::to_string(&io::matrix_to_json(&r.matrix))? + "\n",
        _ => io::format_matrix(&r.matrix),
    };
    if let Some(path) = output {
        fs::write(path, body)?;
    } else if fmt != Format::Json {
        print!("{body}");
    }
    match fmt {
        Format::Json => print_json(&json!({
            "abs_det": r.predicted_abs_det.to_string(),
            "matrix": if output.is_none() { io::matrix_to_json(&r.matrix) } else { Value::Null },
            "properties": properties,
        })),
        _ => {
            println!("abs_det={}", r.predicted_abs_det);
            for p in properties {
                println!("property={p}");
            }
            Ok(())
        }
    }
}

fn cop_command(fmt: Format, c: &CopCommand) -> Res {
    match c {
        CopCommand::Check { input, k } => {
            let m = io::read_matrix(&read_input(input)?)?;
            let ok = cop::has_kcop(&m, *k)?;
            match fmt {
                Format::Json => print_json(&json!({ "k": k, "kcop": ok })),
                _ => {
                    println!("kcop(k={k})={ok}");
                    Ok(())
                }
            }
        }
        CopCommand::Reduce { input } => {
            let m = io::read_matrix(&read_input(input)?)?;
            let r = cop::two_cop_reduce(&m)?;
            let norms: Vec<String> = r.row_norms_sq().iter().map(|x| x.to_string()).collect();
            match fmt {
                Format::Json => print_json(&json!({
                    "transformed": io::matrix_to_json(&r.transformed),
                    "rows": io::matrix_to_json(&r.rows),
                    "partition": r.partition,
                    "row_norms_sq": norms,
                    "steps": r.steps.len(),
                    "hadamard_product": r.hadamard_product(),
                })),
                Format::Csv => matrix_csv(&r.rows),
                Format::Text => {
                    print!("{}", io::format_matrix(&r.rows));
                    println!("four={:?} kept={:?} shortened={:?}", r.partition.four, r.partition.kept, r.partition.shortened);
                    for s in &r.steps {
                        println!("row {} -= {} * row {}", s.replaced, s.coefficient, s.pivot);
                    }
                    println!("hadamard_product={}", r.hadamard_product());
                    Ok(())
                }
            }
        }
        CopCommand::Bound { n, k } => {
            let rows = [("kcop", cop::kcop_bound(*n, *k)), ("two-cop", cop::two_cop_bound(*n))];
            bound_output(fmt, rows.into_iter().map(|(name, b)| bounds::BoundRow {
                name,
                kind: "upper",
                value: b.value,
                formula: b.formula,
            }).collect())
        }
    }
}

fn path_command(fmt: Format, c: &PathCommand) -> Res {
    match c {
        PathCommand::Matrix { tree, paths, root } => {
            let t = io::parse_tree(&read_input(tree)?)?;
            let family = io::parse_paths(&read_input(paths)?, t.graph())?;
            let strategy = root.map_or(RootStrategy::LeafWithTwoPathEnds, RootStrategy::Vertex);
            let r = path::choose_root(t.graph(), &family, strategy);
            let t = RootedTree::new(t.graph().clone(), r)?;
            path_report(fmt, &t, &family)
        }
        PathCommand::Extremal { d } => {
            let inst = path::extremal_path_instance(*d)?;
            let m = inst.matrix();
            let det = det_exact(&m)?.abs();
            match fmt {
                Format::Json => print_json(&json!({
                    "d": d,
                    "n": inst.tree.n(),
                    "abs_det": det.to_string(),
                    "predicted_abs_det": inst.predicted_abs_det.to_string(),
                    "matrix": io::matrix_to_json(&m),
                })),
                Format::Csv => matrix_csv(&m),
                Format::Text => {
                    print!("{}", io::format_tree(&inst.tree));
                    print!("{}", io::format_paths(&inst.paths));
                    println!("abs_det={det}");
                    println!("predicted_abs_det={}", inst.predicted_abs_det);
                    Ok(())
                }
            }
        }
        PathCommand::Realizable { input } => {
            let m = io::read_matrix(&read_input(input)?)?;
            let ok = path::is_realizable(&m)?;
            match fmt {
                Format::Json => print_json(&json!({ "realizable": ok })),
                _ => {
                    println!("realizable={ok}");
                    Ok(())
                }
            }
        }
    }
}

fn path_report(fmt: Format, t: &RootedTree, family: &PathFamily) -> Res {
    let order = path::natural_order(t.graph());
    let a = path::path_edge_matrix(t.graph(), family, &order)?;
    let b = path::ancestor_transform(&a, t, &order)?;
    let cases = path::classify_transformed_rows(&b, t, &order, family)?;
    let square = a.is_square();
    let det = if square { Some(det_exact(&a)?.abs()) } else { None };
    let reduction = if square { Some(path::reduce_path_matrix(&b, t, &order)?) } else { None };
    let bound = path::path_matrix_bound(t.n());
    match fmt {
        Format::Json => print_json(&json!({
            "root": t.root(),
            "matrix": io::matrix_to_json(&a),
            "transformed": io::matrix_to_json(&b),
            "cases": cases,
            "abs_det": det.map(|d| d.to_string()),
            "bound": bound.value,
            "reduction_steps": reduction.as_ref().map(|r| r.steps.len()),
            "expansion_bound": reduction.as_ref().map(|r| r.expansion_bound()),
        })),
        Format::Csv => matrix_csv(&b),
        Format::Text => {
            println!("root={}", t.root());
            print!("{}", io::format_matrix(&a));
            println!("transformed:");
            print!("{}", io::format_matrix(&b));
            for (i, c) in cases.iter().enumerate() {
                println!("row {i}: {c:?}");
            }
            if let Some(d) = det {
                println!("abs_det={d}");
            }
            println!("bound={} ({})", bound.value, bound.formula);
            if let Some(r) = reduction {
                println!("reduction_steps={} expansion_bound={}", r.steps.len(), r.expansion_bound());
            }
            Ok(())
        }
    }
}

fn leafrank_command(fmt: Format, input: &Path) -> Res {
    let g = io::read_graph(&read_input(input)?)?;
    let r = leafrank::leaf_rank(&g)?;
    let (outcome, k) = match r.outcome {
        Outcome::Finite(k) => ("finite", Some(k)),
        Outcome::Infinite => ("infinite", None),
    };
    if fmt == Format::Csv {
        #[derive(Serialize)]
        struct Row {
            outcome: &'static str,
            k: Option<u64>,
        }
        return write_csv(&[Row { outcome, k }]);
    }
    let mut v = json!({ "outcome": outcome });
    if let (Some(k), Some(w)) = (k, &r.witness) {
        let edges = w.topology.edges();
        let lengths: serde_json::Map<String, Value> = edges
            .iter()
            .zip(&w.lengths)
            .map(|(&(a, b), &l)| (format!("{a}-{b}"), json!(l)))
            .collect();
        v["k"] = json!(k);
        v["topology"] = json!({
            "leaves": w.topology.leaves(),
            "vertices": w.topology.tree().n(),
            "edges": edges,
        });
        v["lengths"] = Value::Object(lengths);
        if r.by_convention {
            v["by_convention"] = json!(true);
        }
    }
    print_json(&v)
}

#[derive(Serialize)]
struct SearchRow {
    n: usize,
    class: &'static str,
    budget: usize,
    max_abs_det: u64,
    nodes: u64,
    seconds: f64,
}

fn search_command(fmt: Format, class: ClassArg, n: usize, budget: usize, exhaustive: bool, witness: Option<&Path>) -> Res {
    let class = match class {
        ClassArg::Maxones => MatrixClass::max_ones(n, budget)?,
        ClassArg::Maxperrow => MatrixClass::max_per_row(n, budget)?,
        ClassArg::Kcop => MatrixClass::kcop(n, budget)?,
    };
    let start = Instant::now();
    let r = if exhaustive { search::max_det_exhaustive(&class)? } else { search::max_det(&class)? };
    let seconds = start.elapsed().as_secs_f64();
    if let Some(p) = witness {
        fs::write(p, io::format_matrix(&r.witness))?;
    }
    let row = SearchRow {
        n,
        class: class.name(),
        budget,
        max_abs_det: r.max_abs_det,
        nodes: r.nodes_explored,
        seconds,
    };
    match fmt {
        Format::Csv => write_csv(&[row]),
        Format::Json => {
            let mut v = serde_json::to_value(&row)?;
            v["witness"] = io::matrix_to_json(&r.witness);
            print_json(&v)
        }
        Format::Text => {
            println!("{class} max_abs_det={} nodes={} seconds={seconds:.3}", r.max_abs_det, r.nodes_explored);
            if witness.is_none() {
                print!("{}", io::format_matrix(&r.witness));
            }
            Ok(())
        }
    }
}

fn bound_output(fmt: Format, rows: Vec<bounds::BoundRow>) -> Res {
    match fmt {
        Format::Csv => write_csv(&rows),
        Format::Json => print_json(&serde_json::to_value(&rows)?),
        Format::Text => {
            let mut out = stdio::stdout().lock();
            for r in rows {
                writeln!(out, "{:<17} {:<5} {:>16.6} {}", r.name, r.kind, r.value, r.formula)?;
            }
            Ok(())
        }
    }
}

fn bounds_command(fmt: Format, n: usize, ones: Option<usize>, k: usize) -> Res {
    if n == 0 {
        return Err("bounds needs n >= 1".into());
    }
    bound_output(fmt, bounds::table(n, ones.unwrap_or(2 * n), k))
}

fn verify_command(fmt: Format, suite: &str, opts: &SuiteOptions) -> Res {
    let names: Vec<&str> = if suite == "all" { verify::SUITES.to_vec() } else { vec![suite] };
    for name in names {
        let r = verify::run_suite(name, opts)?;
        match fmt {
            Format::Json => print_json(&json!({ "suite": r.suite, "checked": r.checked, "detail": r.detail }))?,
            Format::Csv => {
                #[derive(Serialize)]
                struct Row<'a> {
                    suite: &'a str,
                    checked: u64,
                    detail: &'a str,
                }
                write_csv(&[Row { suite: r.suite, checked: r.checked, detail: &r.detail }])?
            }
            Format::Text => println!("{r}"),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Det { input } => det(fmt, input),
        Command::Gram { input } => gram(fmt, input),
        Command::Construct { kind, n, k, p, t, output } => construct(fmt, *kind, (*n, *k, *p, *t), output.as_deref()),
        Command::Cop(c) => cop_command(fmt, c),
        Command::Path(c) => path_command(fmt, c),
        Command::Leafrank { input } => leafrank_command(fmt, input),
        Command::Search { class, n, budget, exhaustive, witness } => {
            search_command(fmt, *class, *n, *budget, *exhaustive, witness.as_deref())
        }
        Command::Bounds { n, ones, k } => bounds_command(fmt, *n, *ones, *k),
        Command::Verify { suite, max_n, samples, seed } => verify_command(
            fmt,
            suite,
            &SuiteOptions {
                seed: *seed,
                max_n: *max_n,
                samples: *samples,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
