//! `graphcode`: build, split, present and decompose two-parameter modules.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphcode::interval::{
    decide_interval_decomposition, eta_from_graphcode, intervals_to_graphcode, random_interval_sum, scramble,
    write_intervals, DecisionResult, FailureStep, IntervalError,
};
use graphcode::io::{parse_any, parse_graphcode, parse_presentation, write_graphcode, write_presentation, Input, ParseError};
use graphcode::oracle::{are_isomorphic, module_from_graphcode, module_from_presentation, GridModule, OracleError};
use graphcode::present::{minimize, presentation_from_graphcode};
use graphcode::random::{random_presentation, random_strict_graphcode, rng_from_seed, PresentationShape};
use graphcode::{build_graphcode, build_graphcode_with_stats, BuildMode, Graphcode, Presentation};

#[derive(Parser)]
#[command(name = "graphcode", version, about = "Graphcodes of two-parameter persistence modules over F2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graphcode of a presentation.
    Build {
        input: PathBuf,
        /// One vertex per bar and height.
        #[arg(long)]
        uncompressed: bool,
        /// Also remove every superfluous vertex.
        #[arg(long)]
        fully_compress: bool,
        #[command(flatten)]
        output: Output,
    },
    /// One graphcode file per weakly connected component.
    Components {
        input: PathBuf,
        /// Directory for the `component_<k>.gc` files.
        #[arg(short, default_value = ".")]
        o: PathBuf,
    },
    /// Presentation read off a graphcode.
    Present {
        input: PathBuf,
        /// Cancel equal-grade generator/relation pairs.
        #[arg(long)]
        minimize: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Decides interval-decomposability and lists the intervals.
    Intervals {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Brute-force comparisons on small inputs.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Seeded random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::Presentation)]
        kind: Kind,
        #[arg(long, default_value_t = 8)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Generators, bars per height, or intervals, depending on the kind.
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sizes and operation counts.
    Stats { input: PathBuf },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compares dimension functions, rank invariants and isomorphism type.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Presentation,
    Graphcode,
    /// A scrambled direct sum of staircase intervals, as a graphcode.
    IntervalSum,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output if absent.
    #[arg(short)]
    o: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.o {
            Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
            None => io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
        }
    }
}

enum Failure {
    Mismatch,
    Input(String),
    Invariant(String),
    Precondition(String),
    Budget(String),
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Self::Input(format!("{}: {e}", path.display()))
    }

    fn parse(path: &Path, e: ParseError) -> Self {
        let message = format!("{}:{}: {e}", path.display(), e.line());
        if e.is_invariant_violation() {
            Self::Invariant(message)
        } else {
            Self::Input(message)
        }
    }

    fn code(&self) -> u8 {
        match self {
            Self::Mismatch => 1,
            Self::Input(_) => 2,
            Self::Invariant(_) => 3,
            Self::Precondition(_) => 4,
            Self::Budget(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mismatch => f.write_str("inputs differ"),
            Self::Input(m) | Self::Invariant(m) | Self::Precondition(m) | Self::Budget(m) => f.write_str(m),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Self::Budget(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::io(path, e))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    parse_presentation(&read(path)?).map_err(|e| Failure::parse(path, e))
}

fn read_graphcode(path: &Path) -> Result<Graphcode, Failure> {
    parse_graphcode(&read(path)?).map_err(|e| Failure::parse(path, e))
}

fn read_any(path: &Path) -> Result<Input, Failure> {
    parse_any(&read(path)?).map_err(|e| Failure::parse(path, e))
}

/// Counters reported on standard error.
#[derive(Default)]
struct RunStats {
    generators: Option<usize>,
    relations: Option<usize>,
    vertices: usize,
    edges: usize,
    components: usize,
    column_additions: Option<u64>,
    millis: f64,
}

impl fmt::Display for RunStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(g), Some(r)) = (self.generators, self.relations) {
            write!(f, "generators={g} relations={r} ")?;
        }
        write!(
            f,
            "vertices={} edges={} components={}",
            self.vertices, self.edges, self.components
        )?;
        if let Some(c) = self.column_additions {
            write!(f, " column_additions={c}")?;
        }
        write!(f, " time_ms={:.3}", self.millis)
    }
}

fn cmd_build(input: &Path, uncompressed: bool, fully_compress: bool, output: &Output) -> Result<(), Failure> {
    let p = read_presentation(input)?;
    let start = Instant::now();
    let mode = if uncompressed {
        BuildMode::Uncompressed
    } else {
        BuildMode::Compressed
    };
    let (mut g, build) = build_graphcode_with_stats(&p, mode);
    if fully_compress {
        g = g.compress();
    }
    let stats = RunStats {
        generators: Some(p.num_generators()),
        relations: Some(p.num_relations()),
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        components: g.component_labels().0,
        column_additions: Some(build.column_additions),
        millis: start.elapsed().as_secs_f64() * 1e3,
    };
    output.write(&write_graphcode(&g))?;
    eprintln!("{stats}");
    Ok(())
}

fn cmd_components(input: &Path, dir: &Path) -> Result<(), Failure> {
    let g = read_graphcode(input)?;
    let start = Instant::now();
    let parts = g.connected_components();
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    for (k, part) in parts.iter().enumerate() {
        let path = dir.join(format!("component_{k}.gc"));
        fs::write(&path, write_graphcode(part)).map_err(|e| Failure::io(&path, e))?;
    }
    let stats = RunStats {
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        components: parts.len(),
        millis: start.elapsed().as_secs_f64() * 1e3,
        ..RunStats::default()
    };
    eprintln!("{stats}");
    Ok(())
}

fn cmd_present(input: &Path, minimized: bool, output: &Output) -> Result<(), Failure> {
    let g = read_graphcode(input)?;
    let mut p = presentation_from_graphcode(&g).map_err(|e| Failure::Invariant(format!("{}: {e}", input.display())))?;
    if minimized {
        p = minimize(&p);
    }
    output.write(&write_presentation(&p))?;
    eprintln!("generators={} relations={}", p.num_generators(), p.num_relations());
    Ok(())
}

fn step_name(step: FailureStep) -> &'static str {
    match step {
        FailureStep::PivotConflict => "pivot_conflict",
        FailureStep::RowEliminationFailed => "row_elimination_failed",
    }
}

fn cmd_intervals(input: &Path, output: &Output) -> Result<(), Failure> {
    let g = match read_any(input)? {
        Input::Presentation(p) => build_graphcode(&p, BuildMode::Uncompressed),
        Input::Graphcode(g) => g,
    };
    let eta = eta_from_graphcode(&g).map_err(|e| match e {
        IntervalError::DuplicateBars { .. } => Failure::Precondition(format!("{}: {e}", input.display())),
        e => Failure::Invariant(format!("{}: {e}", input.display())),
    })?;
    match decide_interval_decomposition(eta) {
        DecisionResult::Decomposed { intervals } => {
            output.write(&format!("YES\n{}", write_intervals(&intervals)))?;
            eprintln!("intervals={}", intervals.len());
            Ok(())
        }
        DecisionResult::NotIntervalDecomposable { height, step, involved } => {
            output.write(&format!("NO\nheight={height} step={}\n", step_name(step)))?;
            let bars: Vec<String> = involved.iter().map(ToString::to_string).collect();
            eprintln!("involved={}", bars.join(" "));
            Err(Failure::Mismatch)
        }
    }
}

fn module_of(input: &Input, m: u32, n: u32) -> Result<GridModule, OracleError> {
    match input {
        Input::Presentation(p) => module_from_presentation(&p.extended_to(m, n).expect("the grid contains every grade")),
        Input::Graphcode(g) => module_from_graphcode(g),
    }
}

fn extents(input: &Input) -> (u32, u32) {
    match input {
        Input::Presentation(p) => (p.m(), p.n()),
        Input::Graphcode(g) => (g.m(), g.n()),
    }
}

/// Presentations only carry lower bounds for their grid and are extended to
/// the other side; graphcodes fix theirs.
fn common_grid(a: &Input, b: &Input) -> Option<(u32, u32)> {
    let (ea, eb) = (extents(a), extents(b));
    let joint = (ea.0.max(eb.0), ea.1.max(eb.1));
    let fits = |input: &Input, e: (u32, u32)| matches!(input, Input::Presentation(_)) || e == joint;
    (fits(a, ea) && fits(b, eb)).then_some(joint)
}

fn verdict(equal: bool) -> &'static str {
    if equal {
        "equal"
    } else {
        "different"
    }
}

fn cmd_oracle_compare(a_path: &Path, b_path: &Path) -> Result<(), Failure> {
    let a = read_any(a_path)?;
    let b = read_any(b_path)?;
    let Some((m, n)) = common_grid(&a, &b) else {
        println!("grid: different {:?} {:?}", extents(&a), extents(&b));
        return Err(Failure::Mismatch);
    };
    let ma = module_of(&a, m, n)?;
    let mb = module_of(&b, m, n)?;
    let dims = ma.dimension_function() == mb.dimension_function();
    let ranks = ma.rank_invariant()? == mb.rank_invariant()?;
    println!("grid: {m} {n}");
    println!("dimension_function: {}", verdict(dims));
    println!("rank_invariant: {}", verdict(ranks));
    let iso = if dims && ranks {
        match are_isomorphic(&ma, &mb) {
            Ok(iso) => {
                println!("isomorphic: {}", if iso { "yes" } else { "no" });
                iso
            }
            Err(e) => {
                println!("isomorphic: skipped ({e})");
                true
            }
        }
    } else {
        println!("isomorphic: no");
        false
    };
    if dims && ranks && iso {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_gen(seed: u64, kind: Kind, m: u32, n: u32, size: usize, output: &Output) -> Result<(), Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::Input("grid extents must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let text = match kind {
        Kind::Presentation => {
            let shape = PresentationShape {
                max_generators: size,
                max_relations: size + size / 3,
                m,
                n,
                ..PresentationShape::default()
            };
            write_presentation(&random_presentation(&mut rng, &shape))
        }
        Kind::Graphcode => write_graphcode(&random_strict_graphcode(&mut rng, m, n, size, 50)),
        Kind::IntervalSum => {
            let intervals = random_interval_sum(&mut rng, m, n, size.max(1));
            let g = intervals_to_graphcode(m, n, &intervals).expect("staircases form a graphcode");
            let mut eta = eta_from_graphcode(&g).expect("staircases have distinct bars");
            scramble(&mut rng, &mut eta, 20);
            write_graphcode(&eta.to_graphcode())
        }
    };
    output.write(&text)
}

fn cmd_stats(input: &Path) -> Result<(), Failure> {
    let start = Instant::now();
    match read_any(input)? {
        Input::Presentation(p) => {
            let (compressed, c) = build_graphcode_with_stats(&p, BuildMode::Compressed);
            let (uncompressed, u) = build_graphcode_with_stats(&p, BuildMode::Uncompressed);
            println!("generators {}", p.num_generators());
            println!("relations {}", p.num_relations());
            println!("compressed_vertices {}", compressed.num_vertices());
            println!("compressed_edges {}", compressed.num_edges());
            println!("compressed_column_additions {}", c.column_additions);
            println!("uncompressed_vertices {}", uncompressed.num_vertices());
            println!("uncompressed_edges {}", uncompressed.num_edges());
            println!("uncompressed_column_additions {}", u.column_additions);
            println!("components {}", compressed.component_labels().0);
        }
        Input::Graphcode(g) => {
            println!("vertices {}", g.num_vertices());
            println!("edges {}", g.num_edges());
            println!("superfluous {}", g.superfluous_vertices().len());
            println!("components {}", g.component_labels().0);
            println!("strict {}", g.is_strict());
        }
    }
    eprintln!("time_ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build {
            input,
            uncompressed,
            fully_compress,
            output,
        } => cmd_build(&input, uncompressed, fully_compress, &output),
        Command::Components { input, o } => cmd_components(&input, &o),
        Command::Present { input, minimize, output } => cmd_present(&input, minimize, &output),
        Command::Intervals { input, output } => cmd_intervals(&input, &output),
        Command::Oracle {
            command: OracleCommand::Compare { a, b },
        } => cmd_oracle_compare(&a, &b),
        Command::Gen {
            seed,
            kind,
            m,
            n,
            size,
            output,
        } => cmd_gen(seed, kind, m, n, size, &output),
        Command::Stats { input } => cmd_stats(&input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !matches!(failure, Failure::Mismatch) {
                eprintln!("error: {failure}");
            }
            ExitCode::from(failure.code())
        }
    }
}
