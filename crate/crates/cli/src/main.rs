use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sombor_core::closed_forms::{closed_forms_for, ClosedEvaluation};
use sombor_core::graph::{edge_partition_of, predicted_ring_degrees, ring_graph_of_kind};
use sombor_core::indices::sombor_bruteforce;
use sombor_core::ring::RingKind;
use sombor_core::report::{
    identity_csv, identity_json, structure_csv, structure_json, sweep_csv, sweep_json, timestamp_now,
};
use sombor_core::verify::{
    identity_sweep, structure_sweep, sweep, sweep_rings, verify_case, SweepFamily, SweepReport, SweepSpec,
    VerifyConfig, DEFAULT_CEILING,
};
use sombor_core::{
    EdgePartition, Error, FiniteRing, FormulaSelection, FormulaVariant, GraphKind, RadicalSum,
};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_OFF_FAMILY: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "sombor", version, about = "Sombor index of total and unit graphs of finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sombor index of one ring graph, by brute force and/or closed form.
    Compute(ComputeArgs),
    /// Edge partition of one ring graph by endpoint class.
    Partition(PartitionArgs),
    /// Check every applicable closed form on one ring.
    Verify(VerifyArgs),
    /// Check closed forms over a range of rings.
    Sweep(SweepArgs),
    /// Degree, complement and clique checks.
    Structure(StructureArgs),
    /// Complement identity for regular graphs.
    Identity(IdentityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RingType {
    Zn,
    Zppow,
    Fpxk,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_enum, default_value = "zn")]
    ring: RingType,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
}

impl RingArgs {
    fn build(&self) -> Result<FiniteRing, Failure> {
        let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Failure::usage(format!("--{flag} is required")));
        let need32 = |v: Option<u32>, flag: &str| v.ok_or_else(|| Failure::usage(format!("--{flag} is required")));
        let ring = match self.ring {
            RingType::Zn => FiniteRing::zn(need(self.n, "n")?),
            RingType::Zppow => FiniteRing::zp_pow(need(self.p, "p")?, need32(self.alpha, "alpha")?),
            RingType::Fpxk => FiniteRing::truncated_poly(need(self.p, "p")?, need32(self.k, "k")?),
        };
        Ok(ring?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Total,
    Unit,
}

impl From<Kind> for GraphKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Total => GraphKind::Total,
            Kind::Unit => GraphKind::Unit,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kinds {
    Total,
    Unit,
    Both,
}

impl Kinds {
    fn kinds(self) -> Vec<GraphKind> {
        match self {
            Kinds::Total => vec![GraphKind::Total],
            Kinds::Unit => vec![GraphKind::Unit],
            Kinds::Both => GraphKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Closed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Printed,
    Corrected,
}

impl From<Variant> for FormulaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => FormulaVariant::AsPrinted,
            Variant::Corrected => FormulaVariant::Corrected,
        }
    }
}

/// `auto` uses the local-ring formulas when the ring is local and the `Z_n`
/// family formulas otherwise.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaChoice {
    Auto,
    Family,
    Local,
}

impl FormulaChoice {
    fn selection(self, ring: &FiniteRing) -> FormulaSelection {
        match self {
            FormulaChoice::Auto if ring.is_local() => FormulaSelection::Local,
            FormulaChoice::Auto | FormulaChoice::Family => FormulaSelection::Family,
            FormulaChoice::Local => FormulaSelection::Local,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Even,
    PrimePower,
    Pq,
    P2q,
    Other,
    Local,
    All,
}

impl From<FamilyArg> for SweepFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Even => SweepFamily::Even,
            FamilyArg::PrimePower => SweepFamily::PrimePower,
            FamilyArg::Pq => SweepFamily::Pq,
            FamilyArg::P2q => SweepFamily::P2q,
            FamilyArg::Other => SweepFamily::Other,
            FamilyArg::Local => SweepFamily::Local,
            FamilyArg::All => SweepFamily::All,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum, default_value = "total")]
    graph: Kind,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "corrected")]
    variant: Variant,
    #[arg(long, value_enum, default_value = "auto")]
    formula: FormulaChoice,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    /// Print exact radical values (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Print values as floats with 12 significant digits.
    #[arg(long)]
    float: bool,
    /// Write the graph as a DIMACS edge list.
    #[arg(long, value_name = "FILE")]
    dump_graph: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum, default_value = "total")]
    graph: Kind,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
    /// Report destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum, default_value = "both")]
    graph: Kinds,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    /// Record per-case wall-clock time.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    min_n: u64,
    #[arg(long)]
    max_n: u64,
    #[arg(long, value_enum, default_value = "both")]
    kinds: Kinds,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long, value_enum)]
    ring: Option<RingType>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Check every `Z_n` with `2 <= n <= max-n` instead of a single ring.
    #[arg(long, conflicts_with = "ring")]
    max_n: Option<u64>,
    /// Add the local rings of order at most `max-n`.
    #[arg(long, requires = "max_n")]
    with_local: bool,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long)]
    max_n: u64,
    #[arg(long, default_value_t = 100)]
    circulant_max_n: u64,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: EXIT_USAGE, message }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OffFamily(_) => EXIT_OFF_FAMILY,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn check_ceiling(ring: &FiniteRing, ceiling: usize) -> Result<(), Failure> {
    if ring.order() > ceiling {
        return Err(Error::CeilingExceeded { order: ring.order(), ceiling }.into());
    }
    Ok(())
}

/// 12 significant digits.
fn float_text(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..12).contains(&magnitude) {
        format!("{:.*}", (11 - magnitude) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn value_text(v: &RadicalSum, float: bool) -> String {
    if float {
        float_text(v.to_f64())
    } else {
        v.to_string()
    }
}

fn pick_closed(evals: Vec<ClosedEvaluation>, variant: FormulaVariant) -> Option<ClosedEvaluation> {
    evals
        .into_iter()
        .find(|e| e.variant.is_none() || e.variant == Some(variant))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .map_err(|e| Failure::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn family_label(ring: &FiniteRing) -> String {
    ring.family().map_or_else(|| "local".to_string(), |f| f.label())
}

fn cmd_compute(args: ComputeArgs) -> CmdResult {
    let ring = args.ring.build()?;
    let kind = GraphKind::from(args.graph);
    let variant = FormulaVariant::from(args.variant);
    let degrees = predicted_ring_degrees(&ring, kind);

    let need_graph = args.mode != Mode::Closed || args.dump_graph.is_some();
    let mut oracle: Option<(RadicalSum, EdgePartition)> = None;
    if need_graph {
        check_ceiling(&ring, args.ceiling)?;
        let (g, classes) = ring_graph_of_kind(&ring, kind);
        if let Some(path) = &args.dump_graph {
            let comment = format!("{} graph of {ring}", kind.as_str());
            File::create(path)
                .and_then(|f| g.write_dimacs(io::BufWriter::new(f), Some(&comment)))
                .map_err(|e| Failure::io(path, e))?;
        }
        if args.mode != Mode::Closed {
            oracle = Some((sombor_bruteforce(&g), edge_partition_of(&g, &classes)));
        }
    }

    let mut closed = None;
    if args.mode != Mode::Oracle {
        match closed_forms_for(&ring, kind, args.formula.selection(&ring)) {
            Ok(evals) => {
                let corrected = pick_closed(evals.clone(), FormulaVariant::Corrected);
                let chosen = pick_closed(evals, variant);
                if let Some(p) = chosen.as_ref().filter(|p| p.variant == Some(FormulaVariant::AsPrinted)) {
                    let reference = match &oracle {
                        Some((v, _)) => Some((v.clone(), "brute-force")),
                        None if ring.order() <= args.ceiling => {
                            Some((sombor_bruteforce(&ring_graph_of_kind(&ring, kind).0), "brute-force"))
                        }
                        None => corrected.map(|c| (c.value, "corrected")),
                    };
                    if let Some((value, source)) = reference.filter(|(v, _)| *v != p.value) {
                        eprintln!(
                            "warning: printed {} gives {}, which differs from the {source} value {value}",
                            p.formula, p.value
                        );
                    }
                }
                closed = chosen;
            }
            Err(e @ Error::OffFamily(_)) if args.mode == Mode::Both => {
                eprintln!("note: no closed form: {e}");
            }
            Err(e) => return Err(e.into()),
        }
    }

    let partition = closed
        .as_ref()
        .and_then(|c| c.partition)
        .or(oracle.as_ref().map(|o| o.1));
    let agree = match (&oracle, &closed) {
        (Some((o, _)), Some(c)) => Some(*o == c.value),
        _ => None,
    };
    let float = args.float;
    let formula = closed.as_ref().map(|c| format!("{}/{}", c.formula, c.variant_label()));

    let text = match args.format {
        TextFormat::Text => {
            let mut s = format!("ring: {ring} ({})\ngraph: {}\n", family_label(&ring), kind.as_str());
            s += &format!("degrees: zero_divisor={} unit={}\n", degrees.zero_divisor, degrees.unit);
            if let Some(p) = partition {
                s += &format!("partition: alpha={} beta={} gamma={} edges={}\n", p.alpha, p.beta, p.gamma, p.total);
            }
            if let Some((v, _)) = &oracle {
                s += &format!("oracle: {}\n", value_text(v, float));
            }
            if let (Some(c), Some(f)) = (&closed, &formula) {
                s += &format!("closed[{f}]: {}\n", value_text(&c.value, float));
            }
            if let Some(m) = agree {
                s += &format!("match: {m}\n");
            }
            s
        }
        TextFormat::Json => {
            let val = |v: &RadicalSum| if float { json!(v.to_f64()) } else { json!(v.to_string()) };
            let doc = json!({
                "ring": ring.to_string(),
                "order": ring.order(),
                "family": family_label(&ring),
                "graph": kind.as_str(),
                "degrees": degrees,
                "partition": partition,
                "oracle": oracle.as_ref().map(|o| val(&o.0)),
                "formula": formula,
                "closed": closed.as_ref().map(|c| val(&c.value)),
                "match": agree,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
        TextFormat::Csv => {
            let p = partition.unwrap_or_default();
            let opt = |v: Option<&RadicalSum>| v.map(|v| value_text(v, float)).unwrap_or_default();
            let quote = |s: String| if s.contains(',') { format!("\"{s}\"") } else { s };
            format!(
                "ring,graph,zero_divisor_degree,unit_degree,alpha,beta,gamma,edges,formula,oracle,closed,match\n\
                 {},{},{},{},{},{},{},{},{},{},{},{}\n",
                ring,
                kind.as_str(),
                degrees.zero_divisor,
                degrees.unit,
                p.alpha,
                p.beta,
                p.gamma,
                p.total,
                formula.unwrap_or_default(),
                quote(opt(oracle.as_ref().map(|o| &o.0))),
                quote(opt(closed.as_ref().map(|c| &c.value))),
                agree.map(|m| m.to_string()).unwrap_or_default(),
            )
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn cmd_partition(args: PartitionArgs) -> CmdResult {
    let ring = args.ring.build()?;
    check_ceiling(&ring, args.ceiling)?;
    let kind = GraphKind::from(args.graph);
    let (g, classes) = ring_graph_of_kind(&ring, kind);
    let p = edge_partition_of(&g, &classes);
    let (zd, units) = classes.sizes();
    let text = match args.format {
        TextFormat::Text => format!(
            "{ring} {}: zero_divisors={zd} units={units} alpha={} beta={} gamma={} edges={}\n",
            kind.as_str(),
            p.alpha,
            p.beta,
            p.gamma,
            p.total
        ),
        TextFormat::Json => {
            let doc = json!({
                "ring": ring.to_string(),
                "graph": kind.as_str(),
                "zero_divisors": zd,
                "units": units,
                "partition": p,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        TextFormat::Csv => format!(
            "ring,graph,zero_divisors,units,alpha,beta,gamma,edges\n{ring},{},{zd},{units},{},{},{},{}\n",
            kind.as_str(),
            p.alpha,
            p.beta,
            p.gamma,
            p.total
        ),
    };
    emit(&text, None)?;
    Ok(0)
}

fn write_sweep(report: &SweepReport, output: &OutputArgs) -> CmdResult {
    let ts = timestamp_now();
    let text = match output.format {
        ReportFormat::Csv => sweep_csv(report, Some(&ts)),
        ReportFormat::Json => sweep_json(report, Some(&ts)),
    };
    emit(&text, output.out.as_deref())?;
    let mismatched = report
        .cases
        .iter()
        .filter(|c| c.in_hypothesis && !c.required_match())
        .count();
    eprintln!(
        "{} cases, {} required mismatches, {} errata entries",
        report.cases.len(),
        mismatched,
        report.errata.len()
    );
    for e in &report.errata {
        eprintln!(
            "errata: {} at {} {}: printed {} vs brute force {}",
            e.formula,
            e.counterexample,
            e.kind.as_str(),
            e.printed_value,
            e.oracle_value
        );
    }
    Ok(if report.all_required_match() { 0 } else { EXIT_MISMATCH })
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let ring = args.ring.build()?;
    check_ceiling(&ring, args.ceiling)?;
    let cfg = VerifyConfig {
        ceiling: args.ceiling,
        timings: args.timings,
        ..VerifyConfig::default()
    };
    let cases = args
        .graph
        .kinds()
        .into_iter()
        .map(|k| verify_case(&ring, k, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    write_sweep(&SweepReport::from_cases(cases), &args.output)
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    if args.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1".into()));
    }
    let spec = SweepSpec {
        family: args.family.into(),
        min_n: args.min_n,
        max_n: args.max_n,
        kinds: args.kinds.kinds(),
    };
    let cfg = VerifyConfig {
        ceiling: args.ceiling,
        timings: args.timings,
        ..VerifyConfig::default()
    };
    let report = sweep(&spec, &cfg, args.workers)?;
    write_sweep(&report, &args.output)
}

fn cmd_structure(args: StructureArgs) -> CmdResult {
    let rings = match (args.max_n, args.ring) {
        (Some(max_n), _) => {
            let mut rings: Vec<FiniteRing> = (2..=max_n).map(FiniteRing::zn).collect::<Result<_, _>>()?;
            if args.with_local {
                rings.extend(
                    sweep_rings(SweepFamily::Local, 2, max_n)
                        .into_iter()
                        .filter(|r| matches!(r.kind(), RingKind::TruncatedPoly { .. })),
                );
            }
            rings
        }
        (None, Some(ring)) => vec![RingArgs {
            ring,
            n: args.n,
            p: args.p,
            alpha: args.alpha,
            k: args.k,
        }
        .build()?],
        (None, None) => return Err(Failure::usage("give --ring or --max-n".into())),
    };
    if rings.is_empty() {
        return Err(Error::EmptySweep.into());
    }
    let rows = structure_sweep(&rings, args.workers.max(1));
    let ts = timestamp_now();
    let text = match args.output.format {
        ReportFormat::Csv => structure_csv(&rows, Some(&ts)),
        ReportFormat::Json => structure_json(&rows, Some(&ts)),
    };
    emit(&text, args.output.out.as_deref())?;
    let bad: Vec<&str> = rows.iter().filter(|r| !r.consistent()).map(|r| r.ring.as_str()).collect();
    eprintln!("{} rings checked, {} inconsistent", rows.len(), bad.len());
    for ring in &bad {
        eprintln!("inconsistent: {ring}");
    }
    Ok(if bad.is_empty() { 0 } else { EXIT_MISMATCH })
}

fn cmd_identity(args: IdentityArgs) -> CmdResult {
    let report = identity_sweep(args.max_n, args.circulant_max_n, args.workers.max(1))?;
    let ts = timestamp_now();
    let text = match args.output.format {
        ReportFormat::Csv => identity_csv(&report, Some(&ts)),
        ReportFormat::Json => identity_json(&report, Some(&ts)),
    };
    emit(&text, args.output.out.as_deref())?;
    let failing = report
        .rows
        .iter()
        .filter(|r| !r.residual.is_zero() || r.circulant_match == Some(false))
        .count();
    eprintln!("{} (n, k) pairs checked, {} failing", report.rows.len(), failing);
    Ok(if report.all_hold() { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Structure(a) => cmd_structure(a),
        Command::Identity(a) => cmd_identity(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_has_twelve_significant_digits() {
        assert_eq!(float_text(455.811_267_914_020_9), "455.811267914");
        assert_eq!(float_text(0.0), "0");
        assert_eq!(float_text(1.0), "1.00000000000");
        assert_eq!(float_text(-2.5), "-2.50000000000");
        assert_eq!(float_text(1.5e13), "1.50000000000e13");
    }
}
