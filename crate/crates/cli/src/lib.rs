//! `indcat`: compute, analyze and verify caterpillar independence polynomials.
//!
//! Exit codes: 0 when every requested check conforms or the command is purely
//! computational, 1 when at least one record is nonconform, 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indcat_core::caterpoly::p_sequence;
use indcat_core::verify::{
    check_diff_bounds, check_shift_lemma, check_symmetric_multiplier, cross_validate_instance, enumerate_specs,
    gen_dominant_poly, read_spec_list, run_sweep, verify_theorem_instance, write_csv, write_jsonl, Oracle, SweepConfig,
    SweepReport, VerdictCounts,
};
use indcat_core::{
    analyze_shape, check_conditions, default_cond3_range, indpoly_bruteforce, indpoly_deletion, indpoly_treedp,
    instance_report, CaterpillarSpec, ConditionReport, ConformanceRecord, Dominance, Error, Polynomial, ShapeReport,
    DEFAULT_CAP, MAX_CAP,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONCONFORM: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursion,
    Brute,
    Deletion,
    Treedp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaCheck {
    Shift,
    Diff,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Auto,
    Brute,
    Scalable,
}

impl From<OracleArg> for Oracle {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Auto => Oracle::Auto,
            OracleArg::Brute => Oracle::Brute,
            OracleArg::Scalable => Oracle::Scalable,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "indcat", version, about = "Independence polynomials of caterpillar trees")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute I(T(m, n)) by the chosen method.
    Indpoly {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = Method::Recursion)]
        method: Method,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Shape report for an explicit coefficient list.
    Analyze {
        /// Comma-separated coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Polynomial,
    },
    /// Report the unimodality theorem's hypotheses for m.
    Conditions {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        cond3: Cond3Arg,
    },
    /// Full instance report plus theorem and cross-validation records.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        cond3: Cond3Arg,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Shift-lemma and difference-bound checks on a given or generated q.
    Lemma(LemmaArgs),
    /// Run both instance checks over a family of caterpillars.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Pendant counts m_1,...,m_k (positive integers).
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub m: Vec<usize>,
    /// Spine length; defaults to the number of m values.
    #[arg(long)]
    pub n: Option<usize>,
}

impl SpecArgs {
    fn spec(&self) -> Result<CaterpillarSpec, Error> {
        CaterpillarSpec::with_prefix(&self.m, self.n.unwrap_or(self.m.len()))
    }
}

#[derive(Debug, Args)]
pub struct CapArg {
    /// Vertex cap for brute-force enumeration (at most 30).
    #[arg(long, env = "INDCAT_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

impl CapArg {
    fn checked(&self) -> Result<usize, Error> {
        if self.cap > MAX_CAP {
            return Err(Error::CapTooLarge(self.cap));
        }
        Ok(self.cap)
    }
}

#[derive(Debug, Args)]
pub struct Cond3Arg {
    /// Condition (3) index range `a:b`; defaults to `3:n`.
    #[arg(long, value_parser = parse_range)]
    pub cond3_range: Option<(usize, usize)>,
}

impl Cond3Arg {
    fn range(&self, n: usize) -> RangeInclusive<usize> {
        match self.cond3_range {
            Some((a, b)) => a..=b,
            None => default_cond3_range(n),
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    /// Coefficients of q; omit to generate q from --seed.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["seed", "class", "degree", "unbalanced"])]
    pub q: Option<Polynomial>,
    /// Binomial exponent t.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Seed for the generated q.
    #[arg(long, required_unless_present = "q")]
    pub seed: Option<u64>,
    /// Dominance class of the generated q (strict-LD, weak-LD, strict-RD, weak-RD).
    #[arg(long, default_value = "strict-LD")]
    pub class: Dominance,
    /// Degree of the generated q.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Generate an unbalanced q.
    #[arg(long)]
    pub unbalanced: bool,
    #[arg(long, value_enum, default_value_t = LemmaCheck::Both)]
    pub check: LemmaCheck,
    /// Also check a symmetric multiplier in place of (1+x)^t.
    #[arg(long, allow_hyphen_values = true)]
    pub p_sym: Option<Polynomial>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub m_min: usize,
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    /// Keep only non-decreasing m.
    #[arg(long)]
    pub monotone: bool,
    /// File with one comma-separated m per line, replacing the enumerated family.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OracleArg::Auto)]
    pub oracle: OracleArg,
    #[command(flatten)]
    pub cap: CapArg,
    #[command(flatten)]
    pub cond3: Cond3Arg,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Write per-instance records here (JSON lines, or CSV with --format csv).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
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
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let format = cli.format;
    match &cli.command {
        Command::Indpoly { spec, method, cap } => indpoly(out, format, &spec.spec()?, *method, cap.checked()?),
        Command::Analyze { coeffs } => analyze(out, format, coeffs),
        Command::Conditions { spec, cond3 } => {
            let spec = spec.spec()?;
            conditions(out, format, &spec, cond3.range(spec.n()))
        }
        Command::Verify { spec, cond3, cap } => {
            let spec = spec.spec()?;
            verify(out, format, &spec, cond3.range(spec.n()), cap.checked()?)
        }
        Command::Lemma(args) => lemma(out, format, args),
        Command::Sweep(args) => sweep(out, format, args),
    }
}

fn exit_for(records: &[&ConformanceRecord]) -> i32 {
    if records.iter().any(|r| r.is_nonconform()) {
        EXIT_NONCONFORM
    } else {
        EXIT_OK
    }
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<(), Error> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_rows<const N: usize>(out: &mut dyn Write, header: [&str; N], rows: Vec<[String; N]>) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn indpoly(
    out: &mut dyn Write,
    format: Format,
    spec: &CaterpillarSpec,
    method: Method,
    cap: usize,
) -> Result<i32, Error> {
    let tree = spec.build_tree();
    let p = match method {
        Method::Recursion => p_sequence(spec.m()).pop().expect("spine length is at least 1"),
        Method::Brute => indpoly_bruteforce(&tree, cap)?,
        Method::Deletion => indpoly_deletion(&tree),
        Method::Treedp => indpoly_treedp(&tree),
    };
    match format {
        Format::Text => writeln!(out, "{p}")?,
        Format::Json => write_json(
            out,
            &json!({
                "spec": spec,
                "method": format!("{method:?}").to_lowercase(),
                "vertices": tree.vertex_count(),
                "polynomial": p,
            }),
        )?,
        Format::Csv => {
            let rows = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| [k.to_string(), c.to_string()])
                .collect();
            write_rows(out, ["k", "coefficient"], rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn shape_text(s: &ShapeReport) -> String {
    let balanced = match s.balanced {
        Some(b) => b.to_string(),
        None => "n/a".into(),
    };
    let dominance = if s.dominance.is_empty() {
        "none".into()
    } else {
        join(&s.dominance, ", ")
    };
    format!(
        "degree: {}\nmodes: {}\nunimodal: {}\nstrictly unimodal: {}\ndominance: {dominance}\nbalanced: {balanced}\nsymmetric: {}\n",
        s.degree,
        join(&s.modes, ", "),
        s.unimodal,
        s.strictly_unimodal,
        s.symmetric
    )
}

fn analyze(out: &mut dyn Write, format: Format, p: &Polynomial) -> Result<i32, Error> {
    let s = analyze_shape(p)?;
    match format {
        Format::Text => write!(out, "coefficients: {p}\n{}", shape_text(&s))?,
        Format::Json => write_json(out, &json!({ "coefficients": p, "shape": s }))?,
        Format::Csv => write_rows(
            out,
            [
                "degree",
                "modes",
                "unimodal",
                "strictly_unimodal",
                "dominance",
                "balanced",
                "symmetric",
            ],
            vec![[
                s.degree.to_string(),
                join(&s.modes, " "),
                s.unimodal.to_string(),
                s.strictly_unimodal.to_string(),
                join(&s.dominance, " "),
                s.balanced.map(|b| b.to_string()).unwrap_or_default(),
                s.symmetric.to_string(),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn conditions_text(c: &ConditionReport) -> String {
    let mut s = format!(
        "condition 1 (non-decreasing): {}\ncondition 2 (base): {}\n",
        yes_no(c.cond1_nondecreasing),
        yes_no(c.cond2_base)
    );
    match c.cond3_range {
        Some([a, b]) => s.push_str(&format!("condition 3, k in [{a}, {b}]:\n")),
        None => s.push_str("condition 3: empty range\n"),
    }
    for (k, e) in &c.cond3_results {
        s.push_str(&format!("  k={k}: {} < {} {}\n", e.lhs, e.rhs, yes_no(e.holds)));
    }
    for (k, e) in &c.sufficient_variant {
        s.push_str(&format!(
            "  sufficient k={k}: {} <= {} {}\n",
            e.m_k,
            e.bound,
            yes_no(e.holds)
        ));
    }
    if !c.sufficient_discrepancies.is_empty() {
        s.push_str(&format!(
            "sufficient test disagrees with condition 3 at k = {}\n",
            join(&c.sufficient_discrepancies, ", ")
        ));
    }
    s.push_str(&format!("all conditions: {}\n", yes_no(c.all_pass)));
    s
}

fn conditions(
    out: &mut dyn Write,
    format: Format,
    spec: &CaterpillarSpec,
    range: RangeInclusive<usize>,
) -> Result<i32, Error> {
    let c = check_conditions(spec, range);
    match format {
        Format::Text => write!(out, "spec: {spec}\n{}", conditions_text(&c))?,
        Format::Json => write_json(out, &json!({ "spec": spec, "conditions": c }))?,
        Format::Csv => {
            let blank = String::new;
            let mut rows = vec![
                [
                    "cond1".into(),
                    blank(),
                    blank(),
                    blank(),
                    c.cond1_nondecreasing.to_string(),
                ],
                ["cond2".into(), blank(), blank(), blank(), c.cond2_base.to_string()],
            ];
            for (k, e) in &c.cond3_results {
                rows.push([
                    "cond3".into(),
                    k.to_string(),
                    e.lhs.to_string(),
                    e.rhs.to_string(),
                    e.holds.to_string(),
                ]);
            }
            for (k, e) in &c.sufficient_variant {
                rows.push([
                    "sufficient".into(),
                    k.to_string(),
                    e.m_k.to_string(),
                    e.bound.to_string(),
                    e.holds.to_string(),
                ]);
            }
            write_rows(out, ["check", "k", "lhs", "rhs", "holds"], rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn records_csv(out: &mut dyn Write, records: &[&ConformanceRecord]) -> Result<(), Error> {
    let rows = records
        .iter()
        .map(|r| {
            [
                r.check_name.clone(),
                r.verdict.to_string(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_rows(out, ["check", "verdict", "seed"], rows)
}

fn verify(
    out: &mut dyn Write,
    format: Format,
    spec: &CaterpillarSpec,
    range: RangeInclusive<usize>,
    cap: usize,
) -> Result<i32, Error> {
    let report = instance_report(spec, range.clone())?;
    let theorem = verify_theorem_instance(spec, range);
    let cross = cross_validate_instance(spec, cap);
    let records = [&theorem, &cross];
    match format {
        Format::Text => {
            writeln!(out, "spec: {spec}")?;
            writeln!(out, "p_n: {}", report.p.last().expect("spine length is at least 1"))?;
            writeln!(out, "k: {}", join(&report.k, ", "))?;
            for (j, q) in report.q.iter().enumerate() {
                writeln!(out, "q_{}: {q}", j + 1)?;
            }
            let predicted = match &report.prediction {
                Some(pr) => join(&pr.mode_set, ", "),
                None => "n/a (m is not non-decreasing)".into(),
            };
            writeln!(
                out,
                "p_n modes: {} (predicted {predicted})",
                join(&report.p_shape.modes, ", ")
            )?;
            write!(out, "{}", conditions_text(&report.conditions))?;
            for r in records {
                writeln!(out, "{}: {}", r.check_name, r.verdict)?;
            }
        }
        Format::Json => write_json(out, &json!({ "instance": report, "records": records }))?,
        Format::Csv => records_csv(out, &records)?,
    }
    Ok(exit_for(&records))
}

fn lemma(out: &mut dyn Write, format: Format, args: &LemmaArgs) -> Result<i32, Error> {
    let (q, seed) = match (&args.q, args.seed) {
        (Some(q), _) => (q.clone(), None),
        (None, Some(seed)) => (
            gen_dominant_poly(seed, args.class, args.degree, !args.unbalanced)?,
            Some(seed),
        ),
        (None, None) => return Err(Error::Parameter("give --q or --seed".into())),
    };
    let stamp = |r: ConformanceRecord| match seed {
        Some(s) => r.with_seed(s),
        None => r,
    };
    let mut records = Vec::new();
    if matches!(args.check, LemmaCheck::Shift | LemmaCheck::Both) {
        records.push(stamp(check_shift_lemma(&q, args.t)));
    }
    if matches!(args.check, LemmaCheck::Diff | LemmaCheck::Both) {
        records.push(stamp(check_diff_bounds(&q, args.t)));
    }
    if let Some(p_sym) = &args.p_sym {
        records.push(stamp(check_symmetric_multiplier(&q, p_sym)));
    }
    let refs: Vec<&ConformanceRecord> = records.iter().collect();
    match format {
        Format::Text => {
            writeln!(out, "q: {q}")?;
            writeln!(out, "t: {}", args.t)?;
            for r in &records {
                writeln!(out, "{}: {}", r.check_name, r.verdict)?;
                if let Some(reason) = r.observed.get("reason").and_then(Value::as_str) {
                    writeln!(out, "  reason: {reason}")?;
                }
                if let Some(Value::Array(m)) = r.observed.get("mismatches") {
                    for line in m.iter().filter_map(Value::as_str) {
                        writeln!(out, "  mismatch: {line}")?;
                    }
                }
                if let Some(n) = r.observed.get("failures").and_then(Value::as_u64).filter(|&n| n > 0) {
                    writeln!(out, "  failing inequalities: {n}")?;
                }
            }
        }
        Format::Json => write_json(out, &json!({ "q": q, "t": args.t, "seed": seed, "records": records }))?,
        Format::Csv => records_csv(out, &refs)?,
    }
    Ok(exit_for(&refs))
}

fn counts_text(c: &VerdictCounts) -> String {
    format!(
        "{} conform, {} nonconform, {} hypothesis-not-met",
        c.conform, c.nonconform, c.hypothesis_not_met
    )
}

fn sweep(out: &mut dyn Write, format: Format, args: &SweepArgs) -> Result<i32, Error> {
    let config = SweepConfig {
        m_bounds: (args.m_min, args.m_max),
        n_bounds: (args.n_min, args.n_max),
        monotone_only: args.monotone,
        oracle: args.oracle.into(),
        cap: args.cap.checked()?,
        cond3_range: args.cond3.cond3_range,
        jobs: args.jobs,
        output: args.output.clone(),
    };
    let specs = match &args.input {
        Some(path) => {
            let specs = read_spec_list(BufReader::new(File::open(path)?))?;
            specs
                .into_iter()
                .filter(|s| !args.monotone || s.is_non_decreasing())
                .collect()
        }
        None => enumerate_specs(&config),
    };
    let report = run_sweep(&specs, &config)?;

    if let Some(path) = &args.output {
        let file = io::BufWriter::new(File::create(path)?);
        match format {
            Format::Csv => write_csv(&report, file)?,
            Format::Text | Format::Json => write_jsonl(&report, file)?,
        }
    }
    match format {
        Format::Text => sweep_text(out, &report)?,
        Format::Json => {
            let value = match &args.output {
                Some(path) => json!({ "summary": report.summary, "output": path }),
                None => json!({ "records": report.records, "summary": report.summary }),
            };
            write_json(out, &value)?;
        }
        Format::Csv if args.output.is_none() => write_csv(&report, &mut *out)?,
        Format::Csv => {}
    }
    Ok(if report.summary.any_nonconform() {
        EXIT_NONCONFORM
    } else {
        EXIT_OK
    })
}

fn sweep_text(out: &mut dyn Write, report: &SweepReport) -> Result<(), Error> {
    let s = &report.summary;
    writeln!(out, "instances: {}", s.instances)?;
    writeln!(out, "cross-validate: {}", counts_text(&s.cross_validation))?;
    writeln!(out, "theorem-instance: {}", counts_text(&s.theorem))?;
    if s.nonconform_specs.is_empty() {
        writeln!(out, "nonconform specs: none")?;
    } else {
        writeln!(out, "nonconform specs: {}", s.nonconform_specs.join(" "))?;
    }
    Ok(())
}
