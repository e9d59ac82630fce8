//! The `qperm` command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance;
use crate::central::{ad_invariant_value, dims, AdInvariantSpec};
use crate::cohomology::{h1_representatives, summary};
use crate::config::{RunConfig, MAGIC_TOL, MAX_WORD_LEN, RANK_THRESHOLD, SERIES_ORDER, TERM_BUDGET};
use crate::error::{Error, Result};
use crate::io::{rep_from_value, to_json_string, vector_to_json, ComplexJson, MagicJson, TripleJson};
use crate::magic::{f4_phi, fourier, from_hadamard, from_permutation, MagicUnitary, PermutationRep};
use crate::perm::Permutation;
use crate::schurmann::{classify, Classification};
use crate::semigroup::{fundamental_semigroup, state_table, SeriesValue};
use crate::stochsim::{path_sample, simulate_marginals, MarginalEstimate, PermProcessSpec};
use crate::wordalg::Word;

/// Exit code for command-line usage errors.
pub const USAGE_EXIT: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "qperm", version, about = "Lévy processes on the quantum permutation group S_n^+")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Tolerance for relation and symmetry checks.
    #[arg(long, global = true, default_value_t = MAGIC_TOL)]
    pub tol: f64,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = RANK_THRESHOLD)]
    pub rank_threshold: f64,
    #[arg(long, global = true, default_value_t = MAX_WORD_LEN)]
    pub max_word_len: usize,
    /// Truncation order of the convolution exponential.
    #[arg(long, global = true, default_value_t = SERIES_ORDER)]
    pub order: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = TERM_BUDGET)]
    pub term_budget: u128,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl CommonArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            tol: self.tol,
            rank_threshold: self.rank_threshold,
            max_word_len: self.max_word_len,
            series_order: self.order,
            seed: self.seed,
            term_budget: self.term_budget,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cocycle, coboundary and first cohomology dimensions of a representation.
    #[command(group(ArgGroup::new("source").required(true).args(["fourier", "f4_phi", "sigma", "input"])))]
    Cohomology {
        /// The Fourier matrix F_n.
        #[arg(long)]
        fourier: Option<usize>,
        /// The one-parameter family F_4(φ), φ in [0, π).
        #[arg(long)]
        f4_phi: Option<f64>,
        /// A permutation in cycle notation, e.g. "(1 2 3)(4 5)".
        #[arg(long)]
        sigma: Option<String>,
        /// Degree of the permutation (default: largest point in --sigma).
        #[arg(long)]
        n: Option<usize>,
        /// Multiplicity d of the permutation representation.
        #[arg(long, default_value_t = 1)]
        mult: usize,
        /// JSON file with {n, d, entries}, {n, H} or {rep}; "-" reads stdin.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Include an orthonormal basis of H₁ representatives.
        #[arg(long)]
        basis: bool,
    },
    /// Classify a Schürmann triple given as {rep, xs}.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Convolution semigroup ω_t of a triple on a time grid.
    Semigroup {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',', required = true)]
        time: Vec<f64>,
        /// Semicolon-separated words such as "p(1,2) p(2,1)"; defaults to all generators.
        #[arg(long)]
        words: Option<String>,
    },
    /// Ad-invariant generator values on the central algebra.
    Central {
        /// JSON file with {n, a, atoms: [[x, w], ...]}.
        #[arg(long, conflicts_with_all = ["n", "a", "atoms"])]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Drift a ≥ 0.
        #[arg(long)]
        a: Option<f64>,
        /// Comma-separated atoms x:w with x in [0, n).
        #[arg(long)]
        atoms: Option<String>,
        #[arg(long, default_value_t = 8)]
        smax: usize,
    },
    /// Monte Carlo marginals of a classical permutation process.
    Simulate {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        n: Option<usize>,
        /// One rate per non-trivial cycle, in order of smallest point.
        #[arg(long, value_delimiter = ',', required = true)]
        rates: Vec<f64>,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Also write one sampled path as CSV to this file.
        #[arg(long)]
        paths: Option<PathBuf>,
        /// Grid for --paths (default: ten equal steps up to --t).
        #[arg(long, value_delimiter = ',')]
        path_times: Vec<f64>,
    },
    /// Run the acceptance suite.
    Selftest,
}

/// Serialized result of a subcommand.
pub struct Rendered {
    pub json: String,
    pub csv: Option<String>,
    pub success: bool,
}

impl Rendered {
    fn json<T: Serialize>(value: &T) -> Result<Self> {
        Ok(Self { json: to_json_string(value)?, csv: None, success: true })
    }
}

/// Parse `argv`, run the subcommand and write its output. Returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match run(&cli).and_then(|r| emit(&cli.common, r)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(k) = std::env::var("QPERM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if k > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
}

fn emit(common: &CommonArgs, rendered: Rendered) -> Result<bool> {
    let mut text = match common.format {
        Format::Json => rendered.json,
        Format::Csv => rendered
            .csv
            .ok_or_else(|| Error::Precondition("this subcommand has no CSV output".into()))?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(rendered.success)
}

pub fn run(cli: &Cli) -> Result<Rendered> {
    let cfg = cli.common.config();
    cfg.validate()?;
    match &cli.command {
        Command::Cohomology { fourier: f, f4_phi: phi, sigma, n, mult, input, basis } => {
            let rep = if let Some(k) = f {
                from_hadamard(&fourier(*k)?)
            } else if let Some(phi) = phi {
                from_hadamard(&f4_phi(*phi)?)
            } else if let Some(sigma) = sigma {
                if *mult == 0 {
                    return Err(Error::Precondition("--mult must be at least 1".into()));
                }
                from_permutation(&PermutationRep { sigma: parse_sigma(sigma, *n)?, d: *mult })
            } else {
                let path = input.as_ref().expect("clap enforces one source");
                rep_from_value(&read_json(path)?, cfg.tol)?
            };
            cohomology(&rep, &cfg, *basis)
        }
        Command::Verify { input } => verify(&read_triple(input, &cfg)?, &cfg),
        Command::Semigroup { input, time, words } => semigroup(&read_triple(input, &cfg)?, time, words.as_deref(), &cfg),
        Command::Central { input, n, a, atoms, smax } => {
            let spec = match input {
                Some(path) => serde_json::from_value::<CentralInput>(read_json(path)?)?,
                None => CentralInput {
                    n: n.ok_or_else(|| Error::Precondition("--n or --input is required".into()))?,
                    a: a.unwrap_or(0.0),
                    atoms: parse_atoms(atoms.as_deref().unwrap_or(""))?,
                },
            };
            central(&spec, *smax)
        }
        Command::Simulate { sigma, n, rates, t, samples, paths, path_times } => {
            let spec = PermProcessSpec::new(parse_sigma(sigma, *n)?, rates.clone())?;
            simulate(&spec, *t, *samples, cfg.seed, paths.as_deref(), path_times)
        }
        Command::Selftest => selftest(),
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    Ok(serde_json::from_str(&text)?)
}

fn read_triple(path: &Path, cfg: &RunConfig) -> Result<crate::schurmann::SchurmannTriple> {
    let t: TripleJson = serde_json::from_value(read_json(path)?)?;
    t.to_triple(cfg.tol)
}

/// Parse cycle notation; the degree defaults to the largest point named.
pub fn parse_sigma(s: &str, n: Option<usize>) -> Result<Permutation> {
    let largest = s
        .split(|ch: char| !ch.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .filter_map(|t| t.parse::<usize>().ok())
        .max()
        .unwrap_or(1);
    Permutation::parse_cycles(s, n.unwrap_or(largest))
}

fn parse_atoms(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (x, w) = t.split_once(':').ok_or_else(|| Error::Parse(format!("atom '{t}' is not x:w")))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number in atom '{t}'")));
            Ok((num(x)?, num(w)?))
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct CohomologyOutput {
    rep: MagicJson,
    zdim: usize,
    bdim: usize,
    h1dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<ComplexJson>>>,
}

fn cohomology(rep: &MagicUnitary, cfg: &RunConfig, with_basis: bool) -> Result<Rendered> {
    let s = summary(rep, cfg.rank_threshold);
    let basis = with_basis.then(|| {
        let h = h1_representatives(rep, cfg.rank_threshold);
        (0..h.dim()).map(|k| vector_to_json(&h.vector(k))).collect()
    });
    let out = CohomologyOutput { rep: MagicJson::from_magic(rep), zdim: s.zdim, bdim: s.bdim, h1dim: s.h1dim, basis };
    let mut r = Rendered::json(&out)?;
    r.csv = Some(format!("n,d,zdim,bdim,h1dim\n{},{},{},{},{}\n", rep.n(), rep.d(), s.zdim, s.bdim, s.h1dim));
    Ok(r)
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    triple: TripleJson,
    #[serde(flatten)]
    classification: Classification,
}

fn verify(t: &crate::schurmann::SchurmannTriple, cfg: &RunConfig) -> Result<Rendered> {
    let classification = classify(t, cfg.max_word_len, cfg.tol, cfg.seed)?;
    Rendered::json(&VerifyOutput { triple: TripleJson::from_triple(t), classification })
}

#[derive(Debug, Serialize)]
struct SemigroupRow {
    t: f64,
    /// exp(tA), A_ij = L(p_ij)
    matrix: Vec<Vec<f64>>,
    words: BTreeMap<String, SeriesValue>,
}

#[derive(Debug, Serialize)]
struct SemigroupOutput {
    #[serde(flatten)]
    triple: TripleJson,
    order: usize,
    table: Vec<SemigroupRow>,
}

fn semigroup(
    t: &crate::schurmann::SchurmannTriple,
    times: &[f64],
    words: Option<&str>,
    cfg: &RunConfig,
) -> Result<Rendered> {
    let n = t.n();
    let words: Vec<Word> = match words {
        Some(list) => list.split(';').map(|w| Word::parse(w, n)).collect::<Result<_>>()?,
        None => (1..=n).flat_map(|i| (1..=n).map(move |j| Word::generator(n, i, j))).collect::<Result<_>>()?,
    };
    let mut table = Vec::with_capacity(times.len());
    let mut csv = String::from("t,word,re,im,last_term,terms,exp\n");
    for &time in times {
        let m = fundamental_semigroup(t, time, cfg.tol)?;
        let st = state_table(t, time, &words, cfg.series_order, cfg.term_budget)?;
        for w in &words {
            let v = st.values[&w.to_string()];
            let exp = match w.letters() {
                [g] => format!("{:.16e}", m[(g.row - 1, g.col - 1)]),
                _ => String::new(),
            };
            let _ = writeln!(
                csv,
                "{:.16e},{},{:.16e},{:.16e},{:.16e},{},{}",
                time, w, v.value.re, v.value.im, v.last_term, v.terms, exp
            );
        }
        table.push(SemigroupRow {
            t: time,
            matrix: (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect(),
            words: st.values,
        });
    }
    let mut r = Rendered::json(&SemigroupOutput { triple: TripleJson::from_triple(t), order: cfg.series_order, table })?;
    r.csv = Some(csv);
    Ok(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CentralInput {
    n: usize,
    a: f64,
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
struct CentralRow {
    s: usize,
    dim: u128,
    value: f64,
}

#[derive(Debug, Serialize)]
struct CentralOutput {
    #[serde(flatten)]
    input: CentralInput,
    smax: usize,
    table: Vec<CentralRow>,
}

fn central(input: &CentralInput, smax: usize) -> Result<Rendered> {
    let spec = AdInvariantSpec::new(input.n, input.a, input.atoms.clone())?;
    let fd = dims(input.n, smax)?;
    let table = (0..=smax)
        .map(|s| Ok(CentralRow { s, dim: fd.dims[s], value: ad_invariant_value(&spec, s, 1, 1)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("s,dim,value\n");
    for row in &table {
        let _ = writeln!(csv, "{},{},{:.16e}", row.s, row.dim, row.value);
    }
    let mut r = Rendered::json(&CentralOutput { input: input.clone(), smax, table })?;
    r.csv = Some(csv);
    Ok(r)
}

#[derive(Debug, Serialize)]
struct SimulateOutput {
    sigma: String,
    n: usize,
    rates: Vec<f64>,
    #[serde(flatten)]
    estimate: MarginalEstimate,
}

fn simulate(
    spec: &PermProcessSpec,
    t: f64,
    samples: u64,
    seed: u64,
    paths: Option<&Path>,
    path_times: &[f64],
) -> Result<Rendered> {
    let estimate = simulate_marginals(spec, t, samples, seed)?;
    if let Some(path) = paths {
        let grid: Vec<f64> = if path_times.is_empty() {
            (1..=10).map(|k| t * k as f64 / 10.0).collect()
        } else {
            path_times.to_vec()
        };
        let sample = path_sample(spec, &grid, seed)?;
        let n = spec.n();
        let cycles = spec.cycles().count();
        let mut csv = String::from("t");
        (0..cycles).for_each(|c| {
            let _ = write!(csv, ",jumps{}", c + 1);
        });
        (0..n).for_each(|i| {
            let _ = write!(csv, ",x{}", i + 1);
        });
        csv.push('\n');
        for (k, time) in sample.times.iter().enumerate() {
            let _ = write!(csv, "{time:.16e}");
            sample.jumps[k].iter().for_each(|j| {
                let _ = write!(csv, ",{j}");
            });
            sample.states[k].iter().for_each(|x| {
                let _ = write!(csv, ",{}", x + 1);
            });
            csv.push('\n');
        }
        std::fs::write(path, csv)?;
    }
    let mut csv = String::from("i,j,prob,stderr\n");
    for (i, row) in estimate.probs.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{:.16e},{:.16e}", i + 1, j + 1, p, estimate.stderr[i][j]);
        }
    }
    let out = SimulateOutput {
        sigma: spec.sigma().to_string(),
        n: spec.n(),
        rates: spec.cycles().map(|(_, r)| r).collect(),
        estimate,
    };
    let mut r = Rendered::json(&out)?;
    r.csv = Some(csv);
    Ok(r)
}

fn selftest() -> Result<Rendered> {
    let reports = acceptance::run_all();
    for r in &reports {
        eprintln!("{r}");
    }
    let mut out = Rendered::json(&reports)?;
    out.success = reports.iter().all(|r| r.passed);
    Ok(out)
}
