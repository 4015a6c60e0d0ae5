//! `nanotube`: command-line front end for the random eigenvalue of dual
//! nanotubes. Every subcommand writes its artifacts to the output directory
//! and prints their paths.

mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nanotube_spectra::density::{build_armchair, build_zigzag, pdf_chiral_numeric, PiecewiseDensity, TriangularDensity};
use nanotube_spectra::lattice::{build_finite_armchair55_dual, half_loop_matrix, normalized_trace_moments};
use nanotube_spectra::mgf::{mgf, mgf_csv, mgf_limit};
use nanotube_spectra::moments::{moment_table, moments_csv, moments_indicator_sum, Method, Target};
use nanotube_spectra::numerics::symmetric_eigenvalues;
use nanotube_spectra::sampler::{
    sample_armchair, sample_general, sample_triangular_limit, sample_zigzag, samples_csv, SeededStream,
};
use nanotube_spectra::stats::{histogram, histogram_csv};
use nanotube_spectra::verify::{run_criterion, Suite};
use nanotube_spectra::{ChiralVector, Error, NanotubeClass};
use num_traits::ToPrimitive;

use output::{emit, Format, Meta};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "nanotube", version, about = "Spectra of dual (p,q)-nanotubes")]
struct Cli {
    /// Directory for artifact files.
    #[arg(long, global = true, env = "NANOTUBE_OUT_DIR", default_value = "nanotube-out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact moments by every applicable method, cross-checked.
    Moments(MomentsArgs),
    /// Seeded samples of the random eigenvalue and their histogram.
    Sample(SampleArgs),
    /// Density and distribution function on a grid.
    Pdf(PdfArgs),
    /// Moment generating function by quadrature.
    Mgf(MgfArgs),
    /// Finite (5,5) dual nanotube: edges, spectrum and trace moments.
    Lattice(LatticeArgs),
    /// Runs the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct TubeArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    /// Use the plane triangular lattice instead of a tube.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    triangular: bool,
    /// Accept 3 <= p+q < 5.
    #[arg(long)]
    allow_thin: bool,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    tube: TubeArgs,
    #[arg(long, default_value_t = 12)]
    kmax: usize,
    /// `all` or a comma list of indicator, binomial_ratio, seven_multinomial,
    /// oracle, triangular_sum.
    #[arg(long, default_value = "all")]
    methods: String,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    tube: TubeArgs,
    /// Limit parameter `c` in [0,1] for `--triangular`.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 90)]
    bins: usize,
    /// Draw from the two-uniform representation even for zigzag and
    /// armchair tubes.
    #[arg(long)]
    general: bool,
}

#[derive(Debug, Args)]
struct PdfArgs {
    #[command(flatten)]
    tube: TubeArgs,
    /// Number of grid points on [0,9].
    #[arg(long, default_value_t = 2000)]
    grid: usize,
    /// Scan resolution for the extrema of chiral branches.
    #[arg(long, default_value_t = 4096)]
    scan: usize,
    /// Upper limit of the Bessel integral for `--triangular`.
    #[arg(long, default_value_t = 200.0 * PI)]
    cutoff: f64,
    /// Gauss-Legendre nodes per panel for `--triangular`.
    #[arg(long, default_value_t = 32)]
    nodes: usize,
}

#[derive(Debug, Args)]
struct MgfArgs {
    #[command(flatten)]
    tube: TubeArgs,
    /// Comma-separated arguments.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,-0.5,0,0.5,1")]
    t: Vec<f64>,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// Number of tube rings between the two caps.
    #[arg(long, default_value_t = 0)]
    rings: usize,
    #[arg(long, default_value_t = 6)]
    kmax: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    suite: String,
}

/// Failure of a subcommand together with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidChiral { .. } | Error::Domain(_) | Error::MethodNotApplicable { .. } => EXIT_VALIDATION,
        Error::NoConvergence { .. } | Error::ExtremumDetectionFailure { .. } => EXIT_NUMERICAL,
        Error::MomentMismatch { .. } | Error::NonIntegralMoment { .. } => EXIT_MISMATCH,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: format!("i/o error: {e}"),
        }
    }
}

type Outcome = Result<Vec<PathBuf>, Failure>;

impl TubeArgs {
    fn target(&self) -> Result<Target, Failure> {
        if self.triangular {
            return Ok(Target::Triangular);
        }
        let (Some(p), Some(q)) = (self.p, self.q) else {
            return Err(Failure::validation("give --p and --q, or --triangular"));
        };
        let chiral = if self.allow_thin {
            ChiralVector::new(p, q)?
        } else {
            ChiralVector::physical(p, q)?
        };
        Ok(Target::Tube(chiral))
    }

    fn record(&self, meta: &mut Meta, target: Target) {
        match target {
            Target::Tube(c) => {
                meta.set("p", c.p()).set("q", c.q());
            }
            Target::Triangular => {
                meta.set("triangular", true);
            }
        }
        if self.allow_thin {
            meta.set("allow_thin", true);
        }
    }
}

fn parse_methods(spec: &str, target: Target) -> Result<Vec<Method>, Failure> {
    if spec == "all" {
        return Ok(Method::applicable(target));
    }
    spec.split(',')
        .map(|s| Method::parse(s.trim()).ok_or_else(|| Failure::validation(format!("unknown method {s:?}"))))
        .collect()
}

fn moments(cli: &Cli, args: &MomentsArgs) -> Outcome {
    let target = args.tube.target()?;
    let methods = parse_methods(&args.methods, target)?;
    let mut meta = Meta::new("moments", 0);
    args.tube.record(&mut meta, target);
    meta.set("kmax", args.kmax).set("methods", args.methods.replace(',', "+"));
    let names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    let table = match moment_table(target, args.kmax, &methods) {
        Ok(t) => t,
        Err(e @ Error::MomentMismatch { .. }) => {
            // keep the disagreeing columns as evidence before failing
            let partial: Vec<_> = methods
                .iter()
                .filter_map(|&m| nanotube_spectra::moments::moment_sequence(target, args.kmax, m).ok())
                .collect();
            let note = vec![("cross_check".to_string(), format!("MISMATCH {e}"))];
            emit(&cli.out, "moments", &meta, &note, &moments_csv(&partial), cli.format)?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    let status = if methods.len() > 1 {
        format!("PASS {} agree for k <= {}", names.join(", "), args.kmax)
    } else {
        format!("SINGLE {} only, nothing to compare", names.join(""))
    };
    let note = vec![("cross_check".to_string(), status)];
    Ok(vec![emit(&cli.out, "moments", &meta, &note, &moments_csv(&table), cli.format)?])
}

fn sample(cli: &Cli, args: &SampleArgs) -> Outcome {
    let target = args.tube.target()?;
    if args.bins == 0 {
        return Err(Failure::validation("--bins must be positive"));
    }
    let mut meta = Meta::new("sample", args.seed);
    args.tube.record(&mut meta, target);
    meta.set("n", args.n).set("bins", args.bins);
    let mut stream = SeededStream::new(args.seed);
    let (draws, sampler) = match target {
        Target::Triangular => {
            meta.set("c", args.c);
            (sample_triangular_limit(args.c, &mut stream, args.n)?, "triangular_limit")
        }
        Target::Tube(c) if args.general => (sample_general(c, &mut stream, args.n), "general"),
        Target::Tube(c) => match c.class() {
            NanotubeClass::Zigzag => (sample_zigzag(c.p(), &mut stream, args.n)?, "zigzag"),
            NanotubeClass::Armchair => (sample_armchair(c.p(), &mut stream, args.n)?, "armchair"),
            NanotubeClass::Chiral => (sample_general(c, &mut stream, args.n), "general"),
        },
    };
    meta.set("sampler", sampler);
    let bins = histogram(&draws, 0.0, 9.0, args.bins)?;
    Ok(vec![
        emit(&cli.out, "samples", &meta, &[], &samples_csv(&draws), cli.format)?,
        emit(&cli.out, "histogram", &meta, &[], &histogram_csv(&bins), cli.format)?,
    ])
}

fn tube_density(c: ChiralVector, scan: usize) -> Result<PiecewiseDensity, Error> {
    match c.class() {
        NanotubeClass::Zigzag => build_zigzag(c.p()),
        NanotubeClass::Armchair => build_armchair(c.p()),
        NanotubeClass::Chiral => pdf_chiral_numeric(c, scan),
    }
}

fn pdf(cli: &Cli, args: &PdfArgs) -> Outcome {
    let target = args.tube.target()?;
    if args.grid < 2 {
        return Err(Failure::validation("--grid must be at least 2"));
    }
    let mut meta = Meta::new("pdf", 0);
    args.tube.record(&mut meta, target);
    meta.set("grid", args.grid);
    match target {
        Target::Tube(c) => {
            if c.class() == NanotubeClass::Chiral {
                meta.set("scan", args.scan);
            }
            let d = tube_density(c, args.scan)?;
            let mass = vec![("total_mass".to_string(), format!("{:.12}", d.total_mass_check))];
            let mut pieces = String::from("lo,hi,weight,mass,label\n");
            for piece in &d.pieces {
                pieces.push_str(&format!(
                    "{},{},{},{},{}\n",
                    piece.lo,
                    piece.hi,
                    piece.weight,
                    piece.mass()?,
                    piece.label
                ));
            }
            Ok(vec![
                emit(&cli.out, "pdf", &meta, &mass, &d.grid_csv(args.grid)?, cli.format)?,
                emit(&cli.out, "atoms", &meta, &[], &d.atoms_csv(), cli.format)?,
                emit(&cli.out, "pieces", &meta, &[], &pieces, cli.format)?,
            ])
        }
        Target::Triangular => {
            meta.set("cutoff", args.cutoff).set("nodes", args.nodes);
            let kernel = TriangularDensity::new(args.cutoff, args.nodes)?;
            // cell midpoints avoid the endpoints and, for most grids, the
            // logarithmic singularity at 1
            let mut body = String::from("x,pdf,err\n");
            for i in 0..args.grid {
                let x = 9.0 * (i as f64 + 0.5) / args.grid as f64;
                let r = kernel.eval(x)?;
                body.push_str(&format!("{x},{},{}\n", r.value, r.error_estimate));
            }
            Ok(vec![emit(&cli.out, "pdf", &meta, &[], &body, cli.format)?])
        }
    }
}

fn mgf_cmd(cli: &Cli, args: &MgfArgs) -> Outcome {
    let target = args.tube.target()?;
    if args.t.is_empty() || args.t.iter().any(|t| !t.is_finite()) {
        return Err(Failure::validation("--t needs finite values"));
    }
    let mut meta = Meta::new("mgf", 0);
    args.tube.record(&mut meta, target);
    let shown: Vec<String> = args.t.iter().map(f64::to_string).collect();
    meta.set("t", shown.join("+"));
    let rows = args
        .t
        .iter()
        .map(|&t| {
            let r = match target {
                Target::Tube(c) => mgf(c, t)?,
                Target::Triangular => mgf_limit(t)?,
            };
            Ok((t, r))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(vec![emit(&cli.out, "mgf", &meta, &[], &mgf_csv(&rows), cli.format)?])
}

fn lattice(cli: &Cli, args: &LatticeArgs) -> Outcome {
    let mut meta = Meta::new("lattice", 0);
    meta.set("rings", args.rings).set("kmax", args.kmax);
    let g = build_finite_armchair55_dual(args.rings);
    let n = g.vertex_count();

    let mut edges = String::from("u,v\n");
    for (u, v) in g.edges() {
        edges.push_str(&format!("{u},{v}\n"));
    }
    let mut loops = String::from("v,weight\n");
    for (v, w) in g.loop_weights().iter().enumerate() {
        loops.push_str(&format!("{v},{}/{}\n", w.numer(), w.denom()));
    }

    let m = half_loop_matrix(&g);
    let spectrum = symmetric_eigenvalues(&m.to_f64())?;
    let mut spec = String::from("index,eigenvalue\n");
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        spec.push_str(&format!("{i},{l}\n"));
    }

    let traces = normalized_trace_moments(&m, args.kmax);
    let tube = ChiralVector::new(5, 5)?;
    let mut moments = String::from("k,trace_moment,approx,target\n");
    for (k, t) in traces.iter().enumerate() {
        moments.push_str(&format!(
            "{k},{t},{},{}\n",
            t.to_f64().unwrap_or(f64::NAN),
            moments_indicator_sum(tube, k)
        ));
    }

    let shape = vec![
        ("vertices".to_string(), n.to_string()),
        ("edges".to_string(), g.edge_count().to_string()),
    ];
    Ok(vec![
        emit(&cli.out, "edges", &meta, &shape, &edges, cli.format)?,
        emit(&cli.out, "loops", &meta, &shape, &loops, cli.format)?,
        emit(&cli.out, "spectrum", &meta, &shape, &spec, cli.format)?,
        emit(&cli.out, "trace_moments", &meta, &shape, &moments, cli.format)?,
    ])
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let suite = Suite::parse(&args.suite)
        .ok_or_else(|| Failure::validation(format!("unknown suite {:?}, expected quick or full", args.suite)))?;
    let mut meta = Meta::new("verify", nanotube_spectra::verify::SUITE_SEED);
    meta.set("suite", &args.suite);
    let mut body = String::from("criterion,title,pass,seconds\n");
    let mut failed = Vec::new();
    for id in 1..=10 {
        let report = run_criterion(id, suite);
        println!("{report}");
        if !report.pass {
            failed.push(id);
        }
        body.push_str(&format!(
            "{id},{},{},{:.3}\n",
            report.title.replace(',', ";"),
            if report.pass { "PASS" } else { "FAIL" },
            report.seconds
        ));
    }
    let path = emit(&cli.out, "verify", &meta, &[], &body, cli.format)?;
    if failed.is_empty() {
        Ok(vec![path])
    } else {
        Err(Failure {
            code: EXIT_MISMATCH,
            message: format!("criteria {failed:?} failed, report in {}", path.display()),
        })
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Moments(a) => moments(cli, a),
        Command::Sample(a) => sample(cli, a),
        Command::Pdf(a) => pdf(cli, a),
        Command::Mgf(a) => mgf_cmd(cli, a),
        Command::Lattice(a) => lattice(cli, a),
        Command::Verify(a) => verify(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
