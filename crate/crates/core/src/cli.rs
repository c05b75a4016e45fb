//! Command-line front end. [`run`] parses arguments, writes TSV to `out`
//! and diagnostics to `err`, and returns the process exit code:
//! 0 on success, 1 when a check fails, 2 on usage or validation errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::axioms::{
    self, check_concavity_condition, check_concavity_numeric, check_sk2_maximum, check_sk3_expansibility,
    check_sk4_bg, check_strict_composability, check_weak_composability, lesche_probe, Axiom, AxiomError,
    AxiomReport, ConcavityOptions, ParameterRegion, Verdict,
};
use crate::coeff::{format_rational, Coefficient, Param};
use crate::entropy::{
    catalog, evaluate, expansion_coefficients, expansion_sum, group_exponential_of, Distribution, EntropyError,
    EntropySpec, JointDistribution,
};
use crate::formal_group::{check_axioms, BivariateTruncated, GroupLaw, Violation};
use crate::numeric::format_significant;
use crate::series::ExactSeries;
use crate::thermo::{
    asymptotic_scan, extensivity_check, legendre_check, maxent_solve, parse_energies, temperature_and_free_energy,
    EnergyMode, MaxEntProblem, OccupationLaw, ThermoError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ugentropy", version, about = "Group entropies, formal group laws and generalized MaxEnt")]
struct Cli {
    /// Significant digits for printed reals.
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: u32,
    /// Write the table to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an entropy on a distribution.
    Eval(EvalArgs),
    /// Print the coefficients of the expansion in the functionals S_k.
    Expand(ExpandArgs),
    /// Build the formal group law of an exponential and check its axioms.
    GroupLaw(GroupLawArgs),
    /// Run axiom checks on an entropy.
    Check(CheckArgs),
    /// Solve the canonical MaxEnt problem.
    Maxent(MaxentArgs),
    /// Tabulate the occupation law W(N) and test extensivity.
    Occupation(OccupationArgs),
    /// Tabulate S on uniform distributions and classify its growth.
    Scan(ScanArgs),
    /// List the entropy kinds with their parameters and domains.
    Catalog,
}

/// Entropy selection: `--entropy tsallis --q 0.5`, or the compact form
/// `--entropy tsallis:q=0.5` (lists separated by ';').
#[derive(Debug, Args)]
struct EntropyArgs {
    /// Entropy kind (see `catalog`), optionally with `:key=value,...`.
    #[arg(long)]
    entropy: String,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Borges-Roditi `a`, or the `a`-list (`1;-1/2`) of a generic entropy.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    /// Group-entropy coefficients, e.g. `1;-2;0;1`.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Boltzmann constant (default 1).
    #[arg(long)]
    kb: Option<String>,
    /// Scale constant c of G(ct)/c (default 1).
    #[arg(long, allow_hyphen_values = true)]
    scale: Option<String>,
}

impl EntropyArgs {
    fn flags(&self) -> Vec<(&'static str, &String)> {
        [
            ("q", &self.q),
            ("kappa", &self.kappa),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("sigma", &self.sigma),
            ("l", &self.l),
            ("k", &self.k),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("delta", &self.delta),
            ("kb", &self.kb),
            ("scale", &self.scale),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    fn spec(&self) -> Result<EntropySpec, CliError> {
        let (name, inline) = match self.entropy.split_once(':') {
            Some((n, rest)) => (n, rest),
            None => (self.entropy.as_str(), ""),
        };
        let mut params = BTreeMap::new();
        for part in inline.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("--entropy: expected key=value, got {part:?}")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        for (k, v) in self.flags() {
            if params.insert(k.to_string(), v.clone()).is_some() {
                return Err(CliError::usage(format!("parameter '{k}' given twice")));
            }
        }
        Ok(EntropySpec::from_parts(name, &params)?)
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Probability file (one value per line) or `uniform:W`.
    #[arg(long)]
    dist: String,
    /// Also print the expansion truncated after this many terms.
    #[arg(long)]
    terms: Option<usize>,
    /// Write the distribution as read, in the probability file format.
    #[arg(long)]
    dump_dist: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Number of coefficients.
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Also print partial sums on this distribution.
    #[arg(long)]
    dist: Option<String>,
}

#[derive(Debug, Args)]
struct GroupLawArgs {
    /// Coefficients of G from degree 1, e.g. `1, 1/2, 1/6`.
    #[arg(long, conflicts_with_all = ["entropy", "table"])]
    series: Option<String>,
    /// Use the group exponential of this entropy (see `eval` for parameters).
    #[arg(long)]
    entropy: Option<String>,
    /// Check an arbitrary coefficient table (lines `k m c_km`).
    #[arg(long, conflicts_with = "entropy")]
    table: Option<PathBuf>,
    /// Truncation order.
    #[arg(long, default_value_t = 6)]
    order: usize,
    /// Total degree up to which associativity is expanded (default: order).
    #[arg(long)]
    assoc_degree: Option<usize>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Axiom to check (repeatable); all applicable ones when omitted.
    #[arg(long = "axiom")]
    axioms: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// States for sk2 and lesche.
    #[arg(long, default_value_t = 4)]
    states: usize,
    /// Subsystem sizes for the composability checks.
    #[arg(long, default_value_t = 3)]
    wa: usize,
    #[arg(long, default_value_t = 5)]
    wb: usize,
    /// Distribution for sk3 (file or `uniform:W`).
    #[arg(long)]
    dist: Option<String>,
    /// Joint distribution for sk4: one row per line, values separated by whitespace.
    #[arg(long)]
    joint: Option<PathBuf>,
    /// Parameter region for concavity, e.g. `q=0.55:1.4,alpha=0.02:0.23@3`.
    #[arg(long)]
    region: Option<String>,
    /// Sample points in (0, 1) for numeric concavity.
    #[arg(long, default_value_t = 400)]
    points: usize,
    /// Number of coefficients for the concavity condition.
    #[arg(long, default_value_t = 10)]
    order: usize,
    /// L1 distance for the Lesche probe.
    #[arg(long, default_value_t = 1e-3)]
    lesche_distance: f64,
    /// Print per-check detail lines.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct MaxentArgs {
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Energy levels, one real per line.
    #[arg(long)]
    energies: PathBuf,
    /// Fixed inverse temperature (the multiplier of the energy constraint).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["energy", "inv_temp_grid"])]
    inv_temp: Option<f64>,
    /// Fixed internal energy.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "inv_temp_grid")]
    energy: Option<f64>,
    /// Temperature table over `lo:hi:n` (n grid points).
    #[arg(long, allow_hyphen_values = true)]
    inv_temp_grid: Option<String>,
}

#[derive(Debug, Args)]
struct OccupationArgs {
    #[command(flatten)]
    entropy: EntropyArgs,
    /// Largest N tested and tabulated.
    #[arg(long, default_value_t = 100)]
    n_max: u64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Entropy in compact form, e.g. `tsallis:q=0.5` (repeatable).
    #[arg(long = "entropy")]
    entropies: Vec<String>,
    /// Largest W, a power of ten.
    #[arg(long, default_value_t = 1e12)]
    w_max: f64,
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        let code = if matches!(e, EntropyError::Numeric(_)) { EXIT_CHECK_FAILED } else { EXIT_USAGE };
        CliError { message: e.to_string(), code }
    }
}

impl From<AxiomError> for CliError {
    fn from(e: AxiomError) -> Self {
        match e {
            AxiomError::Entropy(e) => e.into(),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<ThermoError> for CliError {
    fn from(e: ThermoError) -> Self {
        match e {
            ThermoError::Entropy(e) => e.into(),
            ThermoError::NoConvergence(m) => CliError {
                message: m,
                code: EXIT_CHECK_FAILED,
            },
            other => CliError::usage(other.to_string()),
        }
    }
}

/// Text output plus the exit code it implies.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn new() -> Self {
        Output {
            text: String::new(),
            code: EXIT_OK,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

/// Run the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let digits = cli.digits as usize;
    let result = match &cli.command {
        Command::Eval(a) => eval(a, digits),
        Command::Expand(a) => expand(a, digits),
        Command::GroupLaw(a) => group_law(a),
        Command::Check(a) => check(a, digits),
        Command::Maxent(a) => maxent(a, digits),
        Command::Occupation(a) => occupation(a, digits),
        Command::Scan(a) => scan(a, digits),
        Command::Catalog => Ok(catalog_table()),
    };
    match result {
        Ok(output) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &output.text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(output.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => output.code,
                Err(message) => {
                    let _ = writeln!(err, "error: {message}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// `uniform:W` or a probability file.
fn load_distribution(arg: &str) -> Result<Distribution, CliError> {
    if let Some(w) = arg.strip_prefix("uniform:") {
        let w: f64 = w
            .parse()
            .map_err(|_| CliError::usage(format!("--dist: cannot parse state count {w:?}")))?;
        return Distribution::uniform(w).map_err(|e| CliError::usage(format!("--dist: {e}")));
    }
    let text = read_file(Path::new(arg))?;
    Distribution::parse(&text).map_err(|e| CliError::usage(format!("{arg}: {e}")))
}

fn load_joint(path: &Path) -> Result<JointDistribution, CliError> {
    let text = read_file(path)?;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| CliError::usage(format!("{}: line {}: cannot parse {s:?}", path.display(), i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    JointDistribution::new(rows).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn fmt(x: f64, digits: usize) -> String {
    format_significant(x, digits)
}

fn eval(a: &EvalArgs, digits: usize) -> Result<Output, CliError> {
    let spec = a.entropy.spec()?;
    let dist = load_distribution(&a.dist)?;
    if let Some(path) = &a.dump_dist {
        let text = dist.to_text().map_err(|e| CliError::usage(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let s = evaluate(&spec, &dist)?;
    let mut o = Output::new();
    o.line("# entropy\tstates\tS");
    o.line(format!("{spec}\t{}\t{}", fmt(dist.states(), digits), fmt(s, digits)));
    if let Some(n) = a.terms {
        let partial = expansion_sum(&spec, &dist, n)?;
        o.line("# terms\texpansion\tdifference");
        o.line(format!("{n}\t{}\t{}", fmt(partial, digits), fmt(partial - s, 3)));
    }
    Ok(o)
}

fn expand(a: &ExpandArgs, digits: usize) -> Result<Output, CliError> {
    let spec = a.entropy.spec()?;
    if a.order == 0 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let coeffs: Vec<BigRational> = expansion_coefficients(&spec, a.order)?;
    let mut o = Output::new();
    o.line(format!("# {spec}: S = k_B sum_k a'_k S_k"));
    o.line("# k\ta'_k\tdecimal");
    for (i, c) in coeffs.iter().enumerate() {
        o.line(format!("{}\t{}\t{}", i + 1, format_rational(c), fmt(c.to_f64(), digits)));
    }
    if let Some(d) = &a.dist {
        let dist = load_distribution(d)?;
        let exact = evaluate(&spec, &dist)?;
        o.line("# terms\tpartial_sum\tS");
        for n in 1..=a.order {
            o.line(format!(
                "{n}\t{}\t{}",
                fmt(expansion_sum(&spec, &dist, n)?, digits),
                fmt(exact, digits)
            ));
        }
    }
    Ok(o)
}

fn violation_line(name: &str, v: &Option<Violation<BigRational>>) -> String {
    match v {
        None => format!("{name}\tpass\t-"),
        Some(v) => format!(
            "{name}\tfail\tdegree {} at {:?}: {} vs {}",
            v.degree(),
            v.exponents,
            format_rational(&v.lhs),
            format_rational(&v.rhs)
        ),
    }
}

fn parse_table(path: &Path, order: usize) -> Result<BivariateTruncated<BigRational>, CliError> {
    let text = read_file(path)?;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::usage(format!("{}: line {}: {what}", path.display(), i + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [k, m, c] = fields[..] else {
            return Err(bad("expected `k m c_km`"));
        };
        let k: usize = k.parse().map_err(|_| bad("k must be a nonnegative integer"))?;
        let m: usize = m.parse().map_err(|_| bad("m must be a nonnegative integer"))?;
        let c = crate::coeff::parse_rational(c).map_err(|e| bad(&e.to_string()))?;
        if k + m <= order {
            terms.push((k, m, c));
        }
    }
    Ok(BivariateTruncated::from_terms(order, &terms))
}

fn group_law(a: &GroupLawArgs) -> Result<Output, CliError> {
    if a.order == 0 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let assoc = a.assoc_degree.unwrap_or(a.order);
    let mut o = Output::new();
    let phi = if let Some(path) = &a.table {
        o.line(format!("# table from {}", path.display()));
        parse_table(path, a.order)?
    } else {
        let exp: ExactSeries = match (&a.series, &a.entropy) {
            (Some(s), None) => {
                let g: ExactSeries = s.parse().map_err(|e| CliError::usage(format!("--series: {e}")))?;
                if g.order() < a.order {
                    return Err(CliError::usage(format!(
                        "--series has degree {} but --order is {}",
                        g.order(),
                        a.order
                    )));
                }
                g.truncate(a.order)
            }
            (None, Some(e)) => {
                let spec: EntropySpec = e.parse()?;
                let g = group_exponential_of(&spec)?;
                o.line(format!("# {spec}: G = {}", g.describe()));
                g.series(a.order)
            }
            _ => return Err(CliError::usage("give exactly one of --series, --entropy, --table")),
        };
        let law = GroupLaw::from_exponential(&exp).map_err(|e| CliError::usage(e.to_string()))?;
        o.line(format!("# G = {}", law.exp()));
        o.line(format!("# F = {}", law.log()));
        law.phi().clone()
    };
    o.text.push_str(&phi.to_tsv());
    let report = check_axioms(&phi, assoc);
    o.line("# axiom\tresult\twitness");
    o.line(violation_line("symmetry", &report.symmetry));
    o.line(violation_line("null-composability", &report.null_composability));
    o.line(violation_line(
        &format!("associativity(deg<={})", report.associativity_degree),
        &report.associativity,
    ));
    if report.all_pass() {
        let bracket = crate::formal_group::lie_bracket(&phi);
        o.line("# lie bracket [x,y]");
        o.text.push_str(&bracket.to_tsv());
    } else {
        o.code = EXIT_CHECK_FAILED;
    }
    Ok(o)
}

fn run_axiom(axiom: Axiom, spec: &EntropySpec, a: &CheckArgs) -> Result<AxiomReport, AxiomError> {
    match axiom {
        Axiom::ConcavityCondition => {
            let base = spec.clone().with_scale(Param::int(1))?;
            let c: Vec<BigRational> = expansion_coefficients(&base, a.order + 1)?;
            let mut coeffs = vec![BigRational::from_integer(0.into())];
            coeffs.extend(c);
            let seq = ExactSeries::new(coeffs).a_sequence();
            let mut report = check_concavity_condition(&seq, spec.scale().exact());
            report.subject = format!("{spec} {}", report.subject);
            Ok(report)
        }
        Axiom::Concavity => {
            let region = match &a.region {
                Some(r) => r.parse()?,
                None => ParameterRegion::new(1)?,
            };
            let options = ConcavityOptions {
                points: a.points,
                ..ConcavityOptions::default()
            };
            check_concavity_numeric(spec, &region, &options)
        }
        Axiom::Sk2Maximum => check_sk2_maximum(spec, a.states, a.trials, a.seed),
        Axiom::Sk3Expansibility => {
            let dist = match &a.dist {
                Some(d) => load_distribution(d).map_err(|e| AxiomError::InvalidInput(e.message))?,
                None => Distribution::new(vec![0.5, 0.3, 0.2]).map_err(EntropyError::from)?,
            };
            check_sk3_expansibility(spec, &dist)
        }
        Axiom::WeakComposability => check_weak_composability(spec, a.wa as f64, a.wb as f64),
        Axiom::StrictComposability => check_strict_composability(spec, a.wa, a.wb, a.trials, a.seed),
        Axiom::Sk4Additivity => {
            let joint = match &a.joint {
                Some(p) => load_joint(p).map_err(|e| AxiomError::InvalidInput(e.message))?,
                None => JointDistribution::new(vec![vec![0.3, 0.1, 0.1], vec![0.05, 0.25, 0.2]])
                    .map_err(EntropyError::from)?,
            };
            check_sk4_bg(spec, &joint)
        }
        Axiom::Lesche => lesche_probe(spec, a.states, a.lesche_distance, a.trials, a.seed),
    }
}

fn check(a: &CheckArgs, digits: usize) -> Result<Output, CliError> {
    let spec = a.entropy.spec()?;
    let explicit = !a.axioms.is_empty();
    let list: Vec<Axiom> = if explicit {
        a.axioms
            .iter()
            .map(|s| s.parse::<Axiom>())
            .collect::<Result<_, _>>()?
    } else {
        Axiom::ALL.to_vec()
    };
    let mut o = Output::new();
    o.line(axioms::TSV_HEADER);
    for axiom in list {
        let report = match run_axiom(axiom, &spec, a) {
            Ok(r) => r,
            Err(e @ (AxiomError::Unsupported(_) | AxiomError::Entropy(EntropyError::Unsupported(_)))) if !explicit => {
                o.line(format!("# skipped {axiom}: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        o.line(report.to_tsv_row(digits));
        if a.verbose {
            for d in &report.details {
                o.line(format!("#\t{d}"));
            }
        }
        if report.verdict == Verdict::Fail {
            o.code = EXIT_CHECK_FAILED;
        }
    }
    Ok(o)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("--inv-temp-grid: expected lo:hi:n, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    if n < 2 || !(lo < hi) {
        return Err(bad());
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn maxent(a: &MaxentArgs, digits: usize) -> Result<Output, CliError> {
    let spec = a.entropy.spec()?;
    let energies = parse_energies(&read_file(&a.energies)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", a.energies.display())))?;
    let mut o = Output::new();
    if let Some(grid) = &a.inv_temp_grid {
        let betas = parse_grid(grid)?;
        let table = temperature_and_free_energy(&spec, &energies, &betas)?;
        o.line(format!("# {spec}\tU monotone: {}", table.u_monotone));
        for w in &table.warnings {
            o.line(format!("# warning: {w}"));
        }
        o.line("# beta\tU\tS\tT\tF");
        let opt = |x: Option<f64>| x.map_or("-".to_string(), |x| fmt(x, digits));
        for r in &table.rows {
            o.line(format!(
                "{}\t{}\t{}\t{}\t{}",
                fmt(r.beta, digits),
                fmt(r.u, digits),
                fmt(r.s, digits),
                opt(r.temperature),
                opt(r.free_energy)
            ));
        }
        return Ok(o);
    }
    let mode = match (a.inv_temp, a.energy) {
        (Some(b), None) => EnergyMode::FixedBeta(b),
        (None, Some(u)) => EnergyMode::FixedEnergy(u),
        _ => return Err(CliError::usage("give exactly one of --inv-temp, --energy, --inv-temp-grid")),
    };
    let solution = maxent_solve(&MaxEntProblem::new(spec.clone(), energies, mode)?)?;
    let legendre = match legendre_check(&solution, &spec) {
        Ok(r) => fmt(r, digits),
        Err(ThermoError::Unsupported(_)) => "-".to_string(),
        Err(e) => return Err(e.into()),
    };
    o.line(format!("# {spec}"));
    o.line("# quantity\tvalue");
    let rows: [(&str, String); 10] = [
        ("alpha", fmt(solution.alpha, digits)),
        ("beta", fmt(solution.beta, digits)),
        ("Z", fmt(solution.z, digits)),
        ("U", fmt(solution.u, digits)),
        ("S", fmt(solution.s, digits)),
        ("stationarity_residual", fmt(solution.stationarity_residual, 3)),
        ("normalization_residual", fmt(solution.normalization_residual, 3)),
        ("energy_residual", solution.energy_residual.map_or("-".into(), |r| fmt(r, 3))),
        ("legendre_residual", legendre),
        ("cutoff_states", solution.cutoff_states.to_string()),
    ];
    for (k, v) in rows {
        o.line(format!("{k}\t{v}"));
    }
    o.line("# state\tenergy\tp");
    for (i, (e, p)) in solution.energies.iter().zip(&solution.probabilities).enumerate() {
        o.line(format!("{i}\t{}\t{}", fmt(*e, digits), fmt(*p, digits)));
    }
    Ok(o)
}

fn occupation(a: &OccupationArgs, digits: usize) -> Result<Output, CliError> {
    let spec = a.entropy.spec()?;
    let law = OccupationLaw::new(&spec, a.n_max)?;
    let mut o = Output::new();
    o.line(format!("# {spec}\tmethod: {:?}\tvalid: {}", law.method(), law.is_valid()));
    for d in law.diagnostics() {
        o.line(format!("# witness: {d}"));
    }
    o.line("# N\tW\tln_W\tS");
    for n in 0..=a.n_max {
        match law.ln_states(n as f64) {
            Ok(ln_w) => {
                let s = crate::thermo::microcanonical_from_log(&spec, ln_w)
                    .map_or("-".to_string(), |s| fmt(s, digits));
                o.line(format!("{n}\t{}\t{}\t{s}", fmt(ln_w.exp(), digits), fmt(ln_w, digits)));
            }
            Err(_) => o.line(format!("{n}\t-\t-\t-")),
        }
    }
    if law.is_valid() {
        let r = extensivity_check(&law, a.n_max)?;
        o.line("# extensivity\tmax_residual\tworst_N\tmax_residual_rounded");
        o.line(format!(
            "extensivity\t{}\t{}\t{}",
            fmt(r.max_residual, 3),
            r.worst_n,
            r.max_residual_rounded.map_or("-".to_string(), |x| fmt(x, 3))
        ));
    } else {
        o.code = EXIT_CHECK_FAILED;
    }
    Ok(o)
}

fn scan(a: &ScanArgs, digits: usize) -> Result<Output, CliError> {
    let specs: Vec<EntropySpec> = if a.entropies.is_empty() {
        vec![
            EntropySpec::bg(),
            EntropySpec::tsallis(Param::ratio(1, 2))?,
            EntropySpec::s_delta(Param::int(2))?,
        ]
    } else {
        a.entropies.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    if !(a.w_max >= 1000.0) || !a.w_max.is_finite() {
        return Err(CliError::usage("--w-max must be at least 1000"));
    }
    let top = a.w_max.log10().floor() as i32;
    let grid: Vec<f64> = (1..=top).map(|k| 10f64.powi(k)).collect();
    let rows = asymptotic_scan(&specs, &grid);
    let mut o = Output::new();
    let names: Vec<String> = rows.iter().map(|r| r.spec.to_string()).collect();
    o.line(format!("# W\t{}", names.join("\t")));
    for (i, w) in grid.iter().enumerate() {
        let cells: Vec<String> = rows
            .iter()
            .map(|r| r.values[i].map_or("-".to_string(), |s| fmt(s, digits)))
            .collect();
        o.line(format!("{}\t{}", fmt(*w, digits), cells.join("\t")));
    }
    o.line("# entropy\tclass\texponent");
    for r in &rows {
        o.line(format!(
            "{}\t{}\t{}",
            r.spec,
            r.class,
            r.class.exponent().map_or("-".to_string(), |x| fmt(x, 6))
        ));
    }
    Ok(o)
}

fn catalog_table() -> Output {
    let mut o = Output::new();
    o.line("# name\tparameters\tdomain\tform");
    for e in catalog() {
        o.line(format!("{}\t{}\t{}\t{}", e.name, e.parameters, e.domain, e.form));
    }
    o
}
