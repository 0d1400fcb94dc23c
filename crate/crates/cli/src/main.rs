use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use graphcalc_core::algebra::parse_algebra;
use graphcalc_core::check::run_checks;
use graphcalc_core::enumerate::{graphs_up_to_order, Catalog, CatalogEntry, ValenceProfile};
use graphcalc_core::evaluate::{evaluate, ContractionSchedule};
use graphcalc_core::expansion::{
    connected_sum, free_energy, partition_function, partition_function_oracle, Expansion,
    ExpansionMode, ExpansionRequest,
};
use graphcalc_core::graph::{parse_graph, write_graph, Mode, RibbonGraph};
use graphcalc_core::kontsevich::{
    euler_series, euler_series_oracle, standard_model_oracle, standard_model_series,
    z_gamma_coloring, z_gamma_contraction, KontsevichSpectrum,
};
use graphcalc_core::scalar::{int, parse_rational, Rational};
use graphcalc_core::series::MultiSeries;
use graphcalc_core::{Error, SymAlgebra};

#[derive(Parser)]
#[command(
    name = "graphcalc",
    version,
    about = "Exact graphical calculus and Feynman expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphMode {
    Ribbon,
    Ordinary,
}

impl From<GraphMode> for Mode {
    fn from(m: GraphMode) -> Mode {
        match m {
            GraphMode::Ribbon => Mode::Ribbon,
            GraphMode::Ordinary => Mode::Ordinary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpandMode {
    Ribbon,
    Ordinary,
    Modular,
}

impl From<ExpandMode> for ExpansionMode {
    fn from(m: ExpandMode) -> ExpansionMode {
        match m {
            ExpandMode::Ribbon => ExpansionMode::Ribbon,
            ExpandMode::Ordinary => ExpansionMode::Ordinary,
            ExpandMode::Modular => ExpansionMode::Modular,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// List isomorphism classes of closed graphs.
    Enumerate {
        /// Vertex counts by valence, starting at valence 1, e.g. `0,2`.
        #[arg(long, conflicts_with = "max")]
        profile: Option<String>,
        /// Every profile with at most this many slots.
        #[arg(long)]
        max: Option<usize>,
        #[arg(long, value_enum, default_value = "ribbon")]
        mode: GraphMode,
        /// Connected classes only.
        #[arg(long)]
        connected: bool,
        /// Also print each class as a graph file.
        #[arg(long)]
        graphs: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a graph against an algebra.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "ribbon")]
        mode: GraphMode,
        /// `greedy` or `random:<seed>`.
        #[arg(long, default_value = "greedy")]
        schedule: String,
    },
    /// Feynman expansion of the Gaussian integral of an algebra.
    Expand {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "ribbon")]
        mode: ExpandMode,
        /// Truncation order on coupled slots.
        #[arg(long)]
        order: u32,
        /// Special vertices as `valence:count` pairs, e.g. `2:2,1:1`.
        #[arg(long)]
        special: Option<String>,
        /// Univalent cap components, e.g. `1/2,3` (modular mode).
        #[arg(long)]
        zeta: Option<String>,
        /// Print log Z (the connected sum) instead of Z.
        #[arg(long)]
        free_energy: bool,
        /// Print the per-class table.
        #[arg(long)]
        ledger: bool,
        /// Recompute by Taylor–Wick expansion and fail on a mismatch.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The 't Hooft–Kontsevich matrix model.
    Kontsevich {
        #[command(subcommand)]
        command: KontsevichCommand,
    },
    /// Run the cross-oracle suite.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum KontsevichCommand {
    /// `Z(Γ)` by hole colorings, checked against tensor contraction.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        /// Eigenvalues, e.g. `1,2`.
        #[arg(long)]
        lambda: String,
    },
    /// Standard matrix model at `Λ = I`.
    Standard {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        verify: bool,
    },
    /// Euler-characteristic series in `t` and `N`.
    Euler {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        verify: bool,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<RibbonGraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_algebra(path: &Path) -> anyhow::Result<SymAlgebra> {
    parse_algebra(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn domain(msg: String) -> anyhow::Error {
    Error::Domain(msg).into()
}

fn mismatch(msg: String) -> anyhow::Error {
    Error::InvariantViolation(msg).into()
}

fn parse_rationals(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|p| {
            parse_rational(p)
                .ok_or_else(|| domain(format!("`{}` is not a rational number", p.trim())))
        })
        .collect()
}

fn parse_special(s: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|p| {
            let (k, l) = p
                .split_once(':')
                .ok_or_else(|| domain(format!("special vertices `{p}`: expected valence:count")))?;
            let k = k
                .trim()
                .parse()
                .map_err(|_| domain(format!("bad valence `{k}`")))?;
            let l = l
                .trim()
                .parse()
                .map_err(|_| domain(format!("bad count `{l}`")))?;
            Ok((k, l))
        })
        .collect()
}

fn parse_schedule(s: &str) -> anyhow::Result<ContractionSchedule> {
    match s.split_once(':') {
        None if s == "greedy" => Ok(ContractionSchedule::Greedy),
        Some(("random", seed)) => Ok(ContractionSchedule::Random(
            seed.parse()
                .map_err(|_| domain(format!("bad seed `{seed}`")))?,
        )),
        _ => Err(domain(format!("unknown schedule `{s}`"))),
    }
}

fn enumerate_cmd(
    profile: Option<String>,
    max: Option<usize>,
    mode: Mode,
    connected: bool,
    graphs: bool,
    format: Format,
) -> anyhow::Result<String> {
    let catalog = match (profile, max) {
        (Some(p), _) => Catalog::for_profiles(vec![p.parse::<ValenceProfile>()?], mode)?,
        (None, Some(m)) => graphs_up_to_order(m, mode, &[])?,
        (None, None) => bail!(domain("enumerate needs --profile or --max".into())),
    };
    let rows: Vec<&CatalogEntry> = catalog
        .entries()
        .iter()
        .filter(|e| !connected || e.is_connected())
        .collect();
    let mut out = String::new();
    let sep = if format == Format::Tsv { "\t" } else { "  " };
    let header = [
        "class",
        "profile",
        "occurrences",
        "aut",
        "vertices",
        "edges",
        "b0",
        "holes",
        "genus",
    ];
    if format == Format::Tsv {
        writeln!(out, "{}", header.join(sep))?;
    } else {
        writeln!(out, "# {mode} mode, {} classes", rows.len())?;
    }
    for e in rows {
        let holes = e.holes.map_or("-".to_string(), |h| h.to_string());
        let genus = e.components.as_ref().map_or("-".to_string(), |cs| {
            cs.iter()
                .map(|c| c.genus.to_string())
                .collect::<Vec<_>>()
                .join(",")
        });
        let fields = [
            e.form.to_string(),
            e.profile.to_string(),
            e.occurrences.to_string(),
            e.automorphisms.to_string(),
            e.graph.num_vertices().to_string(),
            e.graph.num_edges().to_string(),
            e.b0.to_string(),
            holes,
            genus,
        ];
        if format == Format::Tsv {
            writeln!(out, "{}", fields.join(sep))?;
        } else {
            let named: Vec<String> = header
                .iter()
                .zip(&fields)
                .map(|(h, v)| format!("{h}={v}"))
                .collect();
            writeln!(out, "{}", named.join(sep))?;
        }
        if graphs {
            for line in write_graph(&e.graph).lines() {
                writeln!(out, "    {line}")?;
            }
        }
    }
    Ok(out)
}

fn eval_cmd(graph: &Path, algebra: &Path, mode: Mode, schedule: &str) -> anyhow::Result<String> {
    let g = load_graph(graph)?;
    let alg = load_algebra(algebra)?;
    let t = evaluate(&g, &alg, mode, &parse_schedule(schedule)?)?;
    if t.arity() == 0 {
        return Ok(format!("{}\n", t.get(&[])));
    }
    let ty = g.graph_type();
    let mut out = format!(
        "# type ({},{}), 1-based indices, inputs then outputs\n",
        ty.inputs, ty.outputs
    );
    for (ix, v) in t.nonzero() {
        let ix: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "{} {v}", ix.join(" "))?;
    }
    Ok(out)
}

fn render_series(s: &MultiSeries, format: Format) -> String {
    match format {
        Format::Text => format!("{s}\n"),
        Format::Tsv => s.dump(),
    }
}

fn render_ledger(e: &Expansion, format: Format) -> anyhow::Result<String> {
    let mut out = String::new();
    let sep = if format == Format::Tsv { "\t" } else { "  " };
    let modular = e.ledger.iter().any(|r| r.hbar_exponent.is_some());
    let mut header = vec![
        "class",
        "profile",
        "aut",
        "edges",
        "b0",
        "value",
        "contribution",
    ];
    if modular {
        header.extend(["hbar", "genus"]);
    }
    writeln!(out, "# {}", header.join(sep))?;
    for r in &e.ledger {
        let mut fields = vec![
            r.class.to_string(),
            r.profile.to_string(),
            r.automorphisms.to_string(),
            r.edges.to_string(),
            r.b0.to_string(),
            r.value.to_string(),
            r.contribution.to_string(),
        ];
        if modular {
            fields.push(r.hbar_exponent.map_or("-".into(), |h| h.to_string()));
            fields.push(r.modular_genus.map_or("-".into(), |g| g.to_string()));
        }
        writeln!(out, "{}", fields.join(sep))?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn expand_cmd(
    algebra: &Path,
    mode: ExpansionMode,
    order: u32,
    special: Option<String>,
    zeta: Option<String>,
    free: bool,
    ledger: bool,
    verify: bool,
    format: Format,
) -> anyhow::Result<String> {
    let mut req = ExpansionRequest::new(load_algebra(algebra)?, mode, order);
    if let Some(s) = special {
        req = req.with_special(&parse_special(&s)?);
    }
    if let Some(z) = zeta {
        req = req.with_zeta(parse_rationals(&z)?);
    }
    let mut out = String::new();
    if free {
        let e = connected_sum(&req)?;
        if verify {
            free_energy(&req)?;
        }
        out += &render_series(&e.series, format);
        if ledger {
            out += &render_ledger(&e, format)?;
        }
        return Ok(out);
    }
    let e = partition_function(&req)?;
    if verify {
        let oracle = partition_function_oracle(&req)?;
        if oracle != e.series {
            return Err(mismatch(format!(
                "graph sum and Taylor–Wick expansion differ:\n{}\nvs\n{oracle}",
                e.series
            )));
        }
    }
    out += &render_series(&e.series, format);
    if ledger {
        out += &render_ledger(&e, format)?;
    }
    Ok(out)
}

fn kontsevich_cmd(cmd: KontsevichCommand) -> anyhow::Result<String> {
    match cmd {
        KontsevichCommand::Eval { graph, lambda } => {
            let g = load_graph(&graph)?;
            let spectrum: KontsevichSpectrum = lambda.parse()?;
            let a = z_gamma_coloring(&g, &spectrum)?;
            let b = z_gamma_contraction(&g, &spectrum)?;
            if a != b {
                return Err(mismatch(format!(
                    "hole colorings give {a}, contraction gives {b}"
                )));
            }
            Ok(format!("{a}\n"))
        }
        KontsevichCommand::Standard { n, order, verify } => {
            let s = standard_model_series(n, order)?.series;
            if verify && s != standard_model_oracle(n, order)? {
                return Err(mismatch(
                    "standard model graph sum differs from the Wick expansion".into(),
                ));
            }
            Ok(format!("{s}\n"))
        }
        KontsevichCommand::Euler { order, verify } => {
            let s = euler_series(order)?.series;
            if verify {
                for n in 1..=2 {
                    if s.evaluate_at("N", &int(n))? != euler_series_oracle(order, n as usize)? {
                        return Err(mismatch(format!(
                            "Euler series differs from log of the matrix integral at N = {n}"
                        )));
                    }
                }
            }
            Ok(format!("{s}\n"))
        }
    }
}

fn check_cmd(seed: u64) -> anyhow::Result<String> {
    let mut out = String::new();
    let mut failed = Vec::new();
    for o in run_checks(seed) {
        match &o.failure {
            None => writeln!(out, "PASS {}", o.name)?,
            Some(why) => {
                writeln!(out, "FAIL {}: {why}", o.name)?;
                failed.push(o.name);
            }
        }
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(mismatch(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Enumerate {
            profile,
            max,
            mode,
            connected,
            graphs,
            format,
        } => enumerate_cmd(profile, max, mode.into(), connected, graphs, format),
        Command::Eval {
            graph,
            algebra,
            mode,
            schedule,
        } => eval_cmd(&graph, &algebra, mode.into(), &schedule),
        Command::Expand {
            algebra,
            mode,
            order,
            special,
            zeta,
            free_energy,
            ledger,
            verify,
            format,
        } => expand_cmd(
            &algebra,
            mode.into(),
            order,
            special,
            zeta,
            free_energy,
            ledger,
            verify,
            format,
        ),
        Command::Kontsevich { command } => kontsevich_cmd(command),
        Command::Check { seed } => check_cmd(seed),
    }
}

/// 2 for failed cross-checks, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(err) if err.is_invariant_violation() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
