use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use bcx::arrangement::DiskArrangement;
use bcx::bundling::{greedy_bundling, min_bundling_exact, BundledCrossing};
use bcx::circular::{build_chord_arrangement, CyclicOrder};
use bcx::genus::{bc_prime, bco_prime, chord_oracle_bco_upper, min_genus, GenusResult, OracleBound};
use bcx::obstruction::{detect_obstruction, encode_configuration, Pattern, PolylineDrawing};
use bcx::render::{render_svg, RenderSpec};
use bcx::solver::{decide_bco, verify_certificate, Certificate, Decision};
use bcx::{parse_graph, Budget, Graph};

const YES: u8 = 0;
const NO: u8 = 1;
const INPUT: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "bcx", version, about = "Bundled crossings in circular graph layouts")]
struct Cli {
    /// Worker threads for parallel search.
    #[arg(long, global = true, env = "BCX_JOBS")]
    jobs: Option<usize>,
    /// Node-expansion cap shared by the search routines.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph has a layout with at most k bundled crossings.
    Solve {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bundle the crossings of a fixed circular order.
    Bundle {
        file: PathBuf,
        /// Comma-separated vertex names.
        #[arg(long)]
        order: String,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Orientable genus.
    Genus { file: PathBuf },
    /// Genus variant of the bundled crossing number.
    BcPrime { file: PathBuf },
    /// Circular genus variant: genus of the graph plus a universal vertex.
    BcoPrime { file: PathBuf },
    /// Best bundling over all straight-chord circular layouts.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Look for the forbidden curve configuration.
    Obstruct {
        /// JSON drawing: `{"curves": [...]}` or an arrangement document.
        file: Option<PathBuf>,
        #[arg(long, value_enum, requires = "p")]
        pattern: Option<PatternArg>,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Draw a certified layout as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        style: Style,
    },
    /// Re-check a certificate against its graph.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    A,
    B,
}

#[derive(Args)]
struct Style {
    #[arg(long, default_value_t = 480.0)]
    width: f64,
    #[arg(long, default_value_t = 480.0)]
    height: f64,
    #[arg(long, default_value_t = 6.0)]
    vertex_radius: f64,
    #[arg(long, default_value = "#f4a261")]
    color: String,
    #[arg(long, default_value = "6 3")]
    frame_dash: String,
}

impl Style {
    fn spec(&self) -> RenderSpec {
        RenderSpec {
            width: self.width,
            height: self.height,
            vertex_radius: self.vertex_radius,
            bundle_color: self.color.clone(),
            frame_dash: self.frame_dash.clone(),
        }
    }
}

/// Failure to read or understand the input.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Run = Result<u8, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("bcx: {e}");
            return ExitCode::from(INPUT);
        }
    }
    let budget = cli.budget.map_or_else(Budget::default, Budget::new);
    match run(cli.command, &budget) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(m)) => {
            eprintln!("bcx: {m}");
            ExitCode::from(INPUT)
        }
    }
}

fn run(command: Command, budget: &Budget) -> Run {
    match command {
        Command::Solve { file, k, emit_cert, svg } => solve(&file, k, emit_cert.as_deref(), svg.as_deref(), budget),
        Command::Bundle { file, order, exact: _, greedy } => bundle(&file, &order, greedy, budget),
        Command::Genus { file } => genus(&file, |g| min_genus(g, budget)),
        Command::BcPrime { file } => genus(&file, |g| bc_prime(g, budget)),
        Command::BcoPrime { file } => genus(&file, |g| bco_prime(g, budget)),
        Command::Oracle { file, max_k } => oracle(&file, max_k, budget),
        Command::Obstruct { file, pattern, p } => obstruct(file.as_deref(), pattern, p),
        Command::Render { file, cert, out, style } => render(&file, &cert, out.as_deref(), &style.spec()),
        Command::Verify { file, cert } => {
            let g = read_graph(&file)?;
            let cert = read_cert(&cert)?;
            match verify_certificate(&g, &cert) {
                Ok(()) => {
                    println!("valid");
                    Ok(YES)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(NO)
                }
            }
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn read_cert(path: &Path) -> Result<Certificate, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), InputError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn solve(file: &Path, k: usize, emit: Option<&Path>, svg: Option<&Path>, budget: &Budget) -> Run {
    let g = read_graph(file)?;
    match decide_bco(&g, k, budget) {
        Decision::Yes(cert) => {
            let text = serde_json::to_string_pretty(&cert)?;
            match emit {
                Some(path) => std::fs::write(path, &text)?,
                None => println!("{text}"),
            }
            if let Some(path) = svg {
                let ord = CyclicOrder::new(&g, cert.layout.order.clone())?;
                std::fs::write(path, render_svg(&g, &ord, &cert.layout.bundling, &RenderSpec::default())?)?;
            }
            eprintln!("yes: at most {k} bundled crossings");
            Ok(YES)
        }
        Decision::No => {
            eprintln!("no: more than {k} bundled crossings needed");
            Ok(NO)
        }
        Decision::Inconclusive => {
            eprintln!("inconclusive: search budget exhausted");
            Ok(INCONCLUSIVE)
        }
    }
}

fn parse_order(g: &Graph, text: &str) -> Result<CyclicOrder, InputError> {
    let order = text
        .split(',')
        .map(|name| {
            let name = name.trim();
            g.vertex_index(name).ok_or_else(|| InputError(format!("unknown vertex {name}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CyclicOrder::new(g, order)?)
}

fn named_bundles(g: &Graph, arr: &DiskArrangement, bundling: &[BundledCrossing]) -> serde_json::Value {
    let name = |c: &usize| {
        let (u, v) = g.edge(arr.label(*c));
        [g.name(u), g.name(v)]
    };
    bundling
        .iter()
        .map(|b| {
            json!({
                "bundle1": b.bundle1.iter().map(name).collect::<Vec<_>>(),
                "bundle2": b.bundle2.iter().map(name).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn bundle(file: &Path, order: &str, greedy: bool, budget: &Budget) -> Run {
    let g = read_graph(file)?;
    let ord = parse_order(&g, order)?;
    let arr = build_chord_arrangement(&g, &ord);
    let (bundling, optimal) = if greedy {
        (greedy_bundling(&arr), false)
    } else {
        let r = min_bundling_exact(&arr, budget);
        (r.bundling, r.optimal)
    };
    print_json(&json!({
        "crossings": arr.crossing_count(),
        "classes": bundling.len(),
        "optimal": optimal,
        "bundling": named_bundles(&g, &arr, &bundling),
    }))?;
    Ok(if greedy || optimal { YES } else { INCONCLUSIVE })
}

fn genus(file: &Path, f: impl Fn(&Graph) -> GenusResult) -> Run {
    let g = read_graph(file)?;
    let r = f(&g);
    println!("{}", r.genus);
    if r.exact {
        Ok(YES)
    } else {
        eprintln!("inconclusive: {} is only an upper bound", r.genus);
        Ok(INCONCLUSIVE)
    }
}

fn oracle(file: &Path, max_k: usize, budget: &Budget) -> Run {
    let g = read_graph(file)?;
    match chord_oracle_bco_upper(&g, max_k, budget) {
        OracleBound::Value {
            k,
            order,
            arrangement,
            bundling,
        } => {
            let names: Vec<&str> = order.as_slice().iter().map(|&v| g.name(v)).collect();
            print_json(&json!({
                "k": k,
                "order": names,
                "bundling": named_bundles(&g, &arrangement, &bundling),
            }))?;
            Ok(YES)
        }
        OracleBound::Exceeds => {
            eprintln!("every layout needs more than {max_k} bundled crossings");
            Ok(NO)
        }
        OracleBound::Inconclusive => Ok(INCONCLUSIVE),
    }
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum DrawingDoc {
    Polylines(PolylineDrawing),
    Arrangement {
        positions: usize,
        chords: Vec<[usize; 2]>,
        partners: Vec<Vec<usize>>,
    },
}

fn obstruct(file: Option<&Path>, pattern: Option<PatternArg>, p: Option<usize>) -> Run {
    let witness = match (file, pattern, p) {
        (_, Some(pat), Some(p)) => {
            if p < 2 {
                return Err(InputError("p must be at least 2".into()));
            }
            let pat = match pat {
                PatternArg::A => Pattern::A,
                PatternArg::B => Pattern::B,
            };
            detect_obstruction(&encode_configuration(pat, p))
        }
        (Some(path), None, _) => {
            let text = std::fs::read_to_string(path)?;
            match serde_json::from_str::<DrawingDoc>(&text)? {
                DrawingDoc::Polylines(d) => detect_obstruction(&d),
                DrawingDoc::Arrangement {
                    positions,
                    chords,
                    partners,
                } => detect_obstruction(&DiskArrangement::new(positions, chords, partners)?),
            }
        }
        _ => return Err(InputError("give a drawing file or --pattern with --p".into())),
    };
    match witness {
        Some(w) => {
            print_json(&w)?;
            Ok(YES)
        }
        None => {
            println!("null");
            Ok(NO)
        }
    }
}

fn render(file: &Path, cert: &Path, out: Option<&Path>, spec: &RenderSpec) -> Run {
    let g = read_graph(file)?;
    let cert = read_cert(cert)?;
    let ord = CyclicOrder::new(&g, cert.layout.order.clone())?;
    let svg = render_svg(&g, &ord, &cert.layout.bundling, spec)?;
    match out {
        Some(path) => std::fs::write(path, svg)?,
        None => print!("{svg}"),
    }
    Ok(YES)
}
