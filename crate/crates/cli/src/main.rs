//! `orbitquant`: builds the universal 2-tensor of a coadjoint orbit, runs the
//! identity suites on the resulting star product and tabulates invariants.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 for bad
//! arguments or configuration, 3 when the pairing degenerates or the cutoff
//! is too small.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbitquant::arith::{fmt_q, parse_q, q, Q};
use orbitquant::enveloping::{centralizer_split, normalize_root_vectors, ChevalleyAlgebra, LeviSplit};
use orbitquant::invariants::{characteristic_class, dimension_table, freudenthal_dim, quantum_dimension, table_csv, DimensionRow, RescaledWeight};
use orbitquant::orbitstar::{module_records, Suite, SuiteConfig, Verifier, VerifyRecord};
use orbitquant::rootsys::{RootSystem, Series, Weight};
use orbitquant::shapovalov::{is_identity, matmul, BlockCache, Shapovalov, TwoTensor};
use orbitquant::Error;

#[derive(Parser, Debug)]
#[command(name = "orbitquant", version, about = "Exact star products on semisimple coadjoint orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and cache the blocks of B up to the cutoff and print a summary.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Run identity suites and emit a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        triples: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        word_length: Option<usize>,
    },
    /// Characteristic class and the quantum dimension table as CSV.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Tabulate every xi with fundamental coordinates in [0, GRID].
        #[arg(long)]
        grid: Option<u32>,
        /// One xi: fundamental coordinates "k1,k2,..", or rho,
        /// short-fundamental, long-fundamental.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    /// Print the t-expansion of B up to an order.
    DumpB {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long = "type", value_name = "SERIES")]
    series: Series,
    #[arg(long)]
    rank: usize,
    /// Values on the simple coroots, comma separated rationals.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda_fundamental")]
    lambda: Option<String>,
    /// Coordinates in the fundamental weights.
    #[arg(long, allow_hyphen_values = true)]
    lambda_fundamental: Option<String>,
    /// Height cutoff for B; the default covers every suite.
    #[arg(long)]
    cutoff: Option<u32>,
    #[arg(long, env = "ORBITQUANT_CACHE_DIR", default_value = ".orbitquant-cache")]
    cache_dir: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// File of `key = value` lines mirroring the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Fault {
    /// Double the first-order coefficient of B.
    ScaleT,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Degenerate(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateOrbit | Error::Singular { .. } | Error::Cutoff { .. } => Failure::Degenerate(e.to_string()),
            Error::Consistency(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_list(s: &str) -> CliResult<Vec<Q>> {
    s.split(',').map(|x| parse_q(x).map_err(Failure::from)).collect()
}

impl Common {
    fn root_system(&self) -> CliResult<RootSystem> {
        Ok(RootSystem::new(self.series, self.rank)?)
    }

    /// `lambda(h_i)`; fundamental coordinates are the same numbers.
    fn lambda_values(&self, default_regular: bool) -> CliResult<Vec<Q>> {
        let values = match (&self.lambda, &self.lambda_fundamental) {
            (Some(s), _) | (None, Some(s)) => parse_list(s)?,
            (None, None) if default_regular => vec![q(1); self.rank],
            (None, None) => return Err(Failure::Usage("one of --lambda or --lambda-fundamental is required".into())),
        };
        if values.len() != self.rank {
            return Err(Failure::Usage(format!("lambda has {} coordinates, rank is {}", values.len(), self.rank)));
        }
        Ok(values)
    }

    fn split(&self, default_regular: bool) -> CliResult<LeviSplit> {
        let alg = Arc::new(ChevalleyAlgebra::new(&self.root_system()?)?);
        Ok(centralizer_split(alg, &self.lambda_values(default_regular)?)?)
    }

    fn cutoff(&self, rs: &RootSystem, multiple: u32) -> CliResult<u32> {
        match self.cutoff {
            Some(0) => Err(Failure::Usage("--cutoff must be at least 1".into())),
            Some(c) => Ok(c),
            None => Ok(multiple * rs.highest_root().height()),
        }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(p) => fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn tensor(&self, split: &LeviSplit, cutoff: u32) -> CliResult<(TwoTensor, usize)> {
        let cache = BlockCache::new(&self.cache_dir)?;
        let shap = Shapovalov::new(split.clone());
        let hits = shap.monomials_up_to(cutoff).iter().filter(|(mu, _)| cache.path_for(split, mu).exists()).count();
        Ok((shap.compute_b(cutoff, Some(&cache))?, hits))
    }
}

fn lambda_text(split: &LeviSplit) -> String {
    split.lambda_values().iter().map(fmt_q).collect::<Vec<_>>().join(",")
}

fn build(common: &Common) -> CliResult<u8> {
    let split = normalize_root_vectors(common.split(false)?)?;
    let rs = split.algebra().root_system().clone();
    let cutoff = common.cutoff(&rs, 2)?;
    let (b, hits) = common.tensor(&split, cutoff)?;
    let mut s = String::new();
    let alg = split.algebra();
    writeln!(s, "algebra {} (dimension {})", rs.name(), alg.dim()).unwrap();
    writeln!(s, "lambda(h) = {}", lambda_text(&split)).unwrap();
    writeln!(s, "split: {} moving roots, {} centralizer roots", split.delta_plus().len(), split.levi_roots().len()).unwrap();
    writeln!(s, "cutoff {cutoff}: {} blocks plus the zero degree, {hits} read from cache", b.blocks().len() - 1).unwrap();
    let mut ok = true;
    for blk in b.blocks() {
        let transposed: Vec<Vec<_>> = (0..blk.cols.len()).map(|j| blk.coeffs.iter().map(|row| row[j].clone()).collect()).collect();
        let inverse_ok = is_identity(&matmul(&blk.pairing, &transposed));
        ok &= inverse_ok;
        writeln!(
            s,
            "  degree {} height {} size {} leading t^{} inverse {}",
            blk.degree,
            blk.degree.height(),
            blk.rows.len(),
            blk.valuation().unwrap_or(0),
            if inverse_ok { "ok" } else { "FAILED" }
        )
        .unwrap();
    }
    common.emit(&s)?;
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct Report<'a> {
    algebra: String,
    lambda: Vec<String>,
    cutoff: u32,
    seed: u64,
    fault: Option<&'a str>,
    suites: Vec<&'static str>,
    total: usize,
    failed: usize,
    records: Vec<VerifyRecord>,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    common: &Common,
    suites: &[Suite],
    seed: u64,
    fault: Option<Fault>,
    samples: Option<usize>,
    triples: Option<usize>,
    points: Option<usize>,
    word_length: Option<usize>,
) -> CliResult<u8> {
    let split = normalize_root_vectors(common.split(false)?)?;
    let rs = split.algebra().root_system().clone();
    // degree <= 2 momentum polynomials raise and lower by at most 4 ht(theta)
    let cutoff = common.cutoff(&rs, 4)?;
    let (mut b, _) = common.tensor(&split, cutoff)?;
    if let Some(Fault::ScaleT) = fault {
        b = b.with_scaled_t_coefficient(&q(2))?;
    }
    let suites: Vec<Suite> = if suites.is_empty() { Suite::ALL.to_vec() } else { suites.to_vec() };
    let defaults = SuiteConfig::default();
    let config = SuiteConfig {
        seed,
        samples: samples.unwrap_or(defaults.samples),
        triples: triples.unwrap_or(defaults.triples),
        points: points.unwrap_or(defaults.points),
        word_length: word_length.unwrap_or(defaults.word_length),
    };
    let mut records = Vec::new();
    if suites.contains(&Suite::Composition) {
        records.extend(module_records(&b));
    }
    records.extend(Verifier::new(&b).run(&suites, &config)?);
    let failed = records.iter().filter(|r| !r.pass).count();
    let report = Report {
        algebra: rs.name(),
        lambda: split.lambda_values().iter().map(fmt_q).collect(),
        cutoff,
        seed,
        fault: fault.map(|_| "scale-t"),
        suites: suites.iter().map(|s| s.name()).collect(),
        total: records.len(),
        failed,
        records,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    common.emit(&text)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

fn named_xi(rs: &RootSystem, name: &str) -> CliResult<Weight> {
    let lengths: Vec<Q> = (0..rs.rank()).map(|i| rs.form_matrix()[i][i].clone()).collect();
    let pick = |long: bool| {
        let target = if long { lengths.iter().max() } else { lengths.iter().min() }.unwrap();
        rs.fundamental_weight(lengths.iter().position(|l| l == target).unwrap())
    };
    match name {
        "rho" => Ok(rs.rho()),
        "short-fundamental" => Ok(pick(false)),
        "long-fundamental" => Ok(pick(true)),
        coords => {
            let ks = parse_list(coords)?;
            if ks.len() != rs.rank() {
                return Err(Failure::Usage(format!("xi has {} coordinates, rank is {}", ks.len(), rs.rank())));
            }
            Ok(ks.iter().enumerate().fold(Weight::zero(rs.rank()), |acc, (i, k)| acc.add(&rs.fundamental_weight(i).scale(k))))
        }
    }
}

fn invariants(common: &Common, grid: Option<u32>, xi: Option<&str>) -> CliResult<u8> {
    let split = common.split(true)?;
    let rs = split.algebra().root_system().clone();
    let class = characteristic_class(&split)?;
    let class_json = serde_json::to_string(&class).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut rows: Vec<DimensionRow> = Vec::new();
    let mut extra = String::new();
    if let Some(g) = grid {
        rows = dimension_table(&rs, &split, g)?;
    }
    if let Some(name) = xi {
        let w = named_xi(&rs, name)?;
        let qdim = quantum_dimension(&rs, &split, &RescaledWeight::new(w.clone()))?;
        let values = rs.coroot_values(&w)?;
        if rs.is_dominant_integral(&w)? {
            let ks = values.iter().map(|v| u32::try_from(v.to_integer()).expect("dominant integral")).collect();
            rows.push(DimensionRow { fundamental: ks, qdim, freudenthal: freudenthal_dim(&rs, &w)? });
        } else {
            eprintln!("note: xi = {name} is not dominant integral, Freudenthal count skipped");
            let ks: Vec<String> = values.iter().map(fmt_q).collect();
            writeln!(extra, "# xi {} qdim {}", ks.join(","), fmt_q(&qdim)).unwrap();
        }
    }
    let csv = table_csv(rs.rank(), &rows) + &extra;
    match &common.output {
        Some(p) => {
            println!("{class_json}");
            fs::write(p, csv)?;
        }
        None => print!("{class_json}\n\n{csv}"),
    }
    Ok(if rows.iter().all(|r| r.matches()) { 0 } else { 1 })
}

fn dump_b(common: &Common, order: usize) -> CliResult<u8> {
    let split = normalize_root_vectors(common.split(false)?)?;
    let rs = split.algebra().root_system().clone();
    let cutoff = common.cutoff(&rs, 2)?;
    let (b, _) = common.tensor(&split, cutoff)?;
    common.emit(&b.b_series(order)?.to_string())?;
    Ok(0)
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Build { common } => build(common),
        Command::Verify { common, suite, seed, inject_fault, samples, triples, points, word_length } => {
            verify(common, suite, *seed, *inject_fault, *samples, *triples, *points, *word_length)
        }
        Command::Invariants { common, grid, xi } => invariants(common, *grid, xi.as_deref()),
        Command::DumpB { common, order } => dump_b(common, *order),
    }
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    // clap exits with 2 on usage errors
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Degenerate(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
