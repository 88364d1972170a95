use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use zzm_core::ar_quiver::ArQuiver;
use zzm_core::block_sheaf::{comparison_report, d_bl_a, d_bl_a_barcodes, d_c_m_plus, d_c_nd};
use zzm_core::derived::{
    decompose_complex, derived_bottleneck, derived_interleaving_distance, derived_interleaving_distance_graded,
};
use zzm_core::diagram::{emit_barcode, Format, Layout};
use zzm_core::distances::{bottleneck_distance, interleaving_distance, search_distance, ExtRational, OracleBudget};
use zzm_core::io::{barcode_to_json, graded_to_json, parse_document, Document};
use zzm_core::quiver_rep::{decompose, Orientation, QuiverAn};
use zzm_core::tilting_transport::{induced_bottleneck, induced_distance, induced_distance_by_search, transport_table};
use zzm_core::verify::{run_suite, Suite};
use zzm_core::Error;

#[derive(Parser, Debug)]
#[command(name = "zzm", version, about = "Zigzag persistence over type-A quivers: barcodes, distances, AR quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Barcode of a representation, or derived barcode of a complex.
    Decompose {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// Distance between two documents; prints `p/q` or `inf`.
    Distance {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Orientation for barcode inputs of the induced and block metrics.
        #[arg(long)]
        orientation: Option<String>,
        /// Use the exhaustive interleaving search instead of the barcode formula.
        #[arg(long)]
        oracle: bool,
    },
    /// The Auslander–Reiten quiver of A_n(a), or a window of the derived one.
    ArQuiver {
        #[arg(long)]
        n: usize,
        /// Arrow directions over `f`/`b`; all forward when omitted.
        #[arg(long)]
        orientation: Option<String>,
        #[arg(long)]
        derived: bool,
        #[arg(long, default_value_t = 1)]
        window: usize,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Dot)]
        format: DiagramFormat,
    },
    /// Transport table of A_n(a) as CSV.
    Transport {
        #[arg(long)]
        n: usize,
        /// Arrow directions over `f`/`b`; all forward when omitted.
        #[arg(long)]
        orientation: Option<String>,
    },
    /// Comparison of d^{z1} with the block distance over A_n(z1), n odd, as CSV.
    Compare {
        #[arg(long)]
        n: usize,
    },
    /// Runs a seeded self-check suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Metric {
    Interleaving,
    Bottleneck,
    Induced,
    Block,
    ConvNd,
    ConvMplus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Dot,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DiagramFormat {
    Dot,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Isometry,
    Imt,
    Transport,
    Blocks,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
enum Failure {
    Input(String),
    Mismatch(String),
    Budget(String),
    Verify(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) | Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::Mismatch(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Mismatch(m) | Failure::Budget(m) | Failure::Verify(m) | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Malformed { .. } | Error::InvalidInput(_) => Failure::Input(msg),
            Error::Unsupported(_) => Failure::Mismatch(msg),
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            Error::Precondition(_) => Failure::Other(msg),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &str) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))?;
    Ok(parse_document(&text, path)?)
}

fn orientation_for(n: usize, s: Option<&str>) -> Result<Orientation, Failure> {
    if n == 0 {
        return Err(Failure::Input("--n must be at least 1".into()));
    }
    let Some(s) = s else { return Ok(Orientation::equioriented(n)) };
    let a = Orientation::parse(s)?;
    if a.num_arrows() + 1 != n {
        return Err(Failure::Input(format!("--orientation {s:?} has {} arrows, A_{n} needs {}", a.num_arrows(), n - 1)));
    }
    Ok(a)
}

fn mismatch(metric: Metric, a: &Document, b: &Document) -> Failure {
    Failure::Mismatch(format!("metric {metric:?} is not defined between a {} and a {}", a.kind(), b.kind()))
}

fn same_quiver(a: &QuiverAn, b: &QuiverAn) -> Result<(), Failure> {
    if a != b {
        return Err(Failure::Mismatch(format!(
            "inputs live over different quivers: A_{}({}) and A_{}({})",
            a.n(),
            a.orientation(),
            b.n(),
            b.orientation()
        )));
    }
    Ok(())
}

fn distance(metric: Metric, a: &Document, b: &Document, orientation: Option<&str>, oracle: bool) -> Result<ExtRational, Failure> {
    use Document as D;
    let budget = OracleBudget::from_env();
    let barcode_orientation = || -> Result<Orientation, Failure> {
        let s = orientation.ok_or_else(|| Failure::Input("barcode inputs need --orientation".into()))?;
        Ok(Orientation::parse(s)?)
    };
    match (metric, a, b) {
        (Metric::Interleaving, D::Representation(x), D::Representation(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            if !x.quiver().is_equioriented() {
                return Err(Failure::Mismatch(format!(
                    "interleavings need an equioriented quiver, got orientation {}; use --metric induced",
                    x.quiver().orientation()
                )));
            }
            if oracle {
                Ok(search_distance(x, y, &budget)?.into())
            } else {
                Ok(interleaving_distance(x, y)?)
            }
        }
        (Metric::Interleaving, D::Complex(x), D::Complex(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            Ok(derived_interleaving_distance(x, y)?)
        }
        (Metric::Interleaving, D::Graded(x), D::Graded(y)) => {
            let n = x.max_vertex().max(y.max_vertex()).max(1);
            Ok(derived_interleaving_distance_graded(x, y, n, zzm_core::field_linear::PrimeField::gf2())?)
        }
        (Metric::Bottleneck, D::Barcode(x), D::Barcode(y)) => Ok(bottleneck_distance(x, y)),
        (Metric::Bottleneck, D::Representation(x), D::Representation(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            if !x.quiver().is_equioriented() {
                return Err(Failure::Mismatch("the bottleneck distance needs an equioriented quiver".into()));
            }
            Ok(bottleneck_distance(&decompose(x), &decompose(y)))
        }
        (Metric::Bottleneck, D::Graded(x), D::Graded(y)) => Ok(derived_bottleneck(x, y)),
        (Metric::Bottleneck, D::Complex(x), D::Complex(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            Ok(derived_bottleneck(&decompose_complex(x), &decompose_complex(y)))
        }
        (Metric::Induced, D::Representation(x), D::Representation(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            if oracle {
                Ok(induced_distance_by_search(x, y, &budget)?)
            } else {
                Ok(induced_distance(x, y)?)
            }
        }
        (Metric::Induced, D::Barcode(x), D::Barcode(y)) => Ok(induced_bottleneck(x, y, &barcode_orientation()?)?),
        (Metric::Block, D::Representation(x), D::Representation(y)) => {
            same_quiver(x.quiver(), y.quiver())?;
            Ok(d_bl_a(x, y)?)
        }
        (Metric::Block, D::Barcode(x), D::Barcode(y)) => Ok(d_bl_a_barcodes(x, y, &barcode_orientation()?)?),
        (Metric::ConvNd, D::Sheaf(x), D::Sheaf(y)) => {
            let c = d_c_nd(x, y)?;
            if c.open_summand {
                eprintln!("note: an open summand is present; the derived convolution distance may be larger");
            }
            Ok(c.value)
        }
        (Metric::ConvMplus, D::ShmPlus(x), D::ShmPlus(y)) => {
            if x.m != y.m {
                return Err(Failure::Mismatch(format!("objects use windows m = {} and m = {}", x.m, y.m)));
            }
            Ok(d_c_m_plus(x, y)?)
        }
        _ => Err(mismatch(metric, a, b)),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Decompose { input, format } => match (load(&input)?, format) {
            (Document::Representation(m), OutFormat::Json) => Ok(barcode_to_json(&decompose(&m))),
            (Document::Representation(m), OutFormat::Dot) => Ok(emit_barcode(&decompose(&m), Format::Dot)),
            (Document::Representation(m), OutFormat::Svg) => Ok(emit_barcode(&decompose(&m), Format::Svg)),
            (Document::Barcode(b), OutFormat::Dot) => Ok(emit_barcode(&b, Format::Dot)),
            (Document::Barcode(b), OutFormat::Svg) => Ok(emit_barcode(&b, Format::Svg)),
            (Document::Complex(c), OutFormat::Json) => Ok(graded_to_json(&decompose_complex(&c))),
            (d, _) => Err(Failure::Mismatch(format!("cannot decompose a {} into this format", d.kind()))),
        },
        Command::Distance { metric, a, b, orientation, oracle } => {
            let (da, db) = (load(&a)?, load(&b)?);
            Ok(distance(metric, &da, &db, orientation.as_deref(), oracle)?.to_string())
        }
        Command::ArQuiver { n, orientation, derived, window, format } => {
            let a = orientation_for(n, orientation.as_deref())?;
            let g = ArQuiver::shared(&QuiverAn::new(n, a)?);
            Ok(match (derived, format) {
                (false, DiagramFormat::Dot) => g.to_dot(),
                (false, DiagramFormat::Svg) => Layout::ar_quiver(&g).to_svg(),
                (true, DiagramFormat::Dot) => g.derived_window_dot(window),
                (true, DiagramFormat::Svg) => Layout::derived_window(&g, window).to_svg(),
            })
        }
        Command::Transport { n, orientation } => {
            let a = orientation_for(n, orientation.as_deref())?;
            Ok(transport_table(&a)?.to_csv())
        }
        Command::Compare { n } => {
            if n % 2 == 0 {
                return Err(Failure::Input(format!("--n must be odd, got {n}")));
            }
            let r = comparison_report(n)?;
            for v in &r.violations {
                eprintln!("violation: {v}");
            }
            eprintln!(
                "X_oc/X_o cell: {} pairs with d_bl > d_zz, {} with d_bl < d_zz",
                r.xoc_xo_bl_greater.len(),
                r.xoc_xo_bl_less.len()
            );
            if r.violations.is_empty() {
                Ok(r.to_csv())
            } else {
                print!("{}", r.to_csv());
                Err(Failure::Verify(format!("{} comparison inequalities fail", r.violations.len())))
            }
        }
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::Isometry => Suite::Isometry,
                SuiteArg::Imt => Suite::Imt,
                SuiteArg::Transport => Suite::Transport,
                SuiteArg::Blocks => Suite::Blocks,
            };
            let report = run_suite(suite, seed)?;
            if report.passed() {
                Ok(report.to_string())
            } else {
                println!("{report}");
                Err(Failure::Verify(format!("suite {} failed", suite.name())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            if !out.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
