//! Command-line front end for `masseylab`.
//!
//! [`run_command`] parses arguments and runs a subcommand without touching
//! the process, which keeps the binary trivial and the commands testable.
//! Exit codes: 0 on success, 1 on domain errors and undefined Massey
//! products, 2 on parse and usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use masseylab::formality::{
    ideal_closed_scan, verdict_report_with_threads, IdealScanSpec, Verdict,
};
use masseylab::linalg::{format_rational, Rational};
use masseylab::massey::{massey_pair_sum_scan, massey_scan_with_threads, ScanReport};
use masseylab::models::{
    circle_h5_report, diagonalize_pairing, parse_lambdas, poincare_gram, BlowupSpec,
    CircleBundleSpec, QkOrbifoldSpec, RelationSign,
};
use masseylab::spec_file::{export_algebra, AlgebraSpecFile};
use masseylab::{
    betti_vector, class_of, cohomology_basis, massey_triple, verify_axioms, Algebra, Error,
    MasseyStatus, ModelSpec,
};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "masseylab",
    version,
    about = "Exact cohomology and Massey products of finite CDGAs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the CDGA axioms exhaustively.
    Validate(Common),
    /// Betti numbers and cohomology representatives.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Highest degree to report (default: top analyzable degree).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// One triple Massey product of closed cochains.
    Massey {
        #[command(flatten)]
        common: Common,
        /// Three closed cochains, e.g. `a1 a1 a2`.
        #[arg(long, num_args = 3, required = true, value_names = ["C1", "C2", "C3"])]
        classes: Vec<String>,
    },
    /// Triple Massey products of all basis triples.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Highest degree of the products (default: top analyzable degree).
        #[arg(long)]
        top: Option<usize>,
        /// Also scan sums of two basis classes in each degree.
        #[arg(long)]
        pair_sums: bool,
        /// List every triple, not only nontrivial ones.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        threads: Threads,
    },
    /// Closed elements of the ideal generated by some generators of a free CDGA.
    IdealScan {
        #[command(flatten)]
        common: Common,
        /// Generators spanning the ideal.
        #[arg(long, num_args = 0.., value_name = "NAME")]
        ideal: Vec<String>,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        /// Default: top analyzable degree.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Built-in models.
    Model {
        kind: ModelKind,
        #[command(flatten)]
        params: ModelParams,
        /// Print the Betti vector through the top degree.
        #[arg(long)]
        betti: bool,
        /// Print the formality verdict.
        #[arg(long)]
        verdict: bool,
        /// Print the degree-5 report of the circle-bundle model.
        #[arg(long)]
        h5: bool,
        /// Print the Poincaré pairing matrices.
        #[arg(long)]
        pairing: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        threads: Threads,
    },
    /// Write an algebra as a JSON file.
    Export {
        #[command(flatten)]
        source: Source,
        /// Output path (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct Source {
    /// Algebra file (JSON).
    #[arg(
        long,
        value_name = "FILE",
        required_unless_present = "model",
        conflicts_with = "model"
    )]
    algebra: Option<PathBuf>,
    /// Built-in model instead of a file.
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Debug, Args)]
struct ModelParams {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Comma-separated diagonal of the degree-2 form (default: all 1).
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Euler coefficient of the circle bundle.
    #[arg(long = "l", default_value_t = 10)]
    ell: u64,
    #[arg(long, value_enum, default_value_t = SignArg::Negative)]
    relation_sign: SignArg,
}

#[derive(Debug, Args)]
struct Threads {
    /// Worker threads for scans.
    #[arg(long, env = "MASSEYLAB_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    ThreeSasakian,
    SasakiCircle,
    Blowup,
    Qk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    Negative,
    Positive,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::SpecFile(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

type CmdResult = std::result::Result<(i32, String), Failure>;

/// Runs the command line `argv` (program name first).
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Domain(m)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Validate(c) => validate(&c),
        Command::Cohomology { common, max_degree } => cohomology(&common, max_degree),
        Command::Massey { common, classes } => massey(&common, &classes),
        Command::Scan {
            common,
            top,
            pair_sums,
            all,
            threads,
        } => scan(&common, top, pair_sums, all, threads.threads),
        Command::IdealScan {
            common,
            ideal,
            min_degree,
            max_degree,
        } => ideal_scan(&common, ideal, min_degree, max_degree),
        Command::Model {
            kind,
            params,
            betti,
            verdict,
            h5,
            pairing,
            json,
            threads,
        } => model(
            kind,
            &params,
            [betti, verdict, h5, pairing],
            json,
            threads.threads,
        ),
        Command::Export { source, output } => export(&source, output),
    }
}

fn model_spec(kind: ModelKind, p: &ModelParams) -> Result<ModelSpec, Failure> {
    let relation_sign = match p.relation_sign {
        SignArg::Negative => RelationSign::Negative,
        SignArg::Positive => RelationSign::Positive,
    };
    let qk = || -> Result<QkOrbifoldSpec, Failure> {
        Ok(match &p.lambdas {
            Some(src) => QkOrbifoldSpec {
                k: p.k,
                lambdas: parse_lambdas(src)?,
            },
            None => QkOrbifoldSpec::unit(p.k),
        })
    };
    Ok(match kind {
        ModelKind::Qk => ModelSpec::QkOrbifold(qk()?),
        ModelKind::ThreeSasakian => ModelSpec::ThreeSasakian(qk()?),
        ModelKind::Blowup => ModelSpec::Blowup(BlowupSpec {
            k: p.k,
            relation_sign,
        }),
        ModelKind::SasakiCircle => ModelSpec::SasakiCircle(CircleBundleSpec {
            k: p.k,
            ell: p.ell,
            relation_sign,
        }),
    })
}

fn read_file(path: &PathBuf) -> Result<AlgebraSpecFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(AlgebraSpecFile::from_json(&text)?)
}

fn load(source: &Source) -> Result<Algebra, Failure> {
    match (&source.algebra, source.model) {
        (Some(path), _) => Ok(read_file(path)?.build()?),
        (None, Some(kind)) => Ok(model_spec(kind, &source.params)?.build()?),
        (None, None) => Err(Failure::Usage(
            "one of --algebra or --model is required".into(),
        )),
    }
}

fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn qs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn validate(c: &Common) -> CmdResult {
    let alg = match &c.source.algebra {
        Some(path) => read_file(path)?.build_unchecked()?,
        None => load(&c.source)?,
    };
    let report = verify_axioms(&alg);
    let code = if report.is_valid() { 0 } else { 1 };
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    if c.json {
        return Ok((
            code,
            render_json(&json!({
                "algebra": alg.label(),
                "valid": report.is_valid(),
                "violations": violations,
            })),
        ));
    }
    let mut out = String::new();
    if report.is_valid() {
        writeln!(out, "valid: {}", alg.label()).unwrap();
    } else {
        writeln!(
            out,
            "invalid: {} ({} violations)",
            alg.label(),
            violations.len()
        )
        .unwrap();
        for v in &violations {
            writeln!(out, "  {v}").unwrap();
        }
    }
    Ok((code, out))
}

fn cohomology(c: &Common, max_degree: Option<usize>) -> CmdResult {
    let alg = load(&c.source)?;
    let top = max_degree.unwrap_or(alg.top_analyzable_degree());
    let betti = betti_vector(&alg, top)?;
    let mut degrees = Vec::new();
    for k in 0..=top {
        let reps: Vec<String> = cohomology_basis(&alg, k)?
            .iter()
            .map(|h| h.representative().to_string())
            .collect();
        degrees.push((k, reps));
    }
    if c.json {
        let degrees: Vec<Value> = degrees
            .iter()
            .map(|(k, reps)| json!({"degree": k, "representatives": reps}))
            .collect();
        return Ok((
            0,
            render_json(&json!({
                "algebra": alg.label(),
                "betti": betti,
                "degrees": degrees,
            })),
        ));
    }
    let mut out = format!("algebra: {}\nbetti: {}\n", alg.label(), join(&betti));
    for (k, reps) in degrees.iter().filter(|(_, r)| !r.is_empty()) {
        writeln!(out, "H^{k}: {}", reps.join(", ")).unwrap();
    }
    Ok((0, out))
}

fn massey(c: &Common, classes: &[String]) -> CmdResult {
    let alg = load(&c.source)?;
    let mut cs = Vec::new();
    for src in classes {
        let cochain = alg.parse_cochain(src)?;
        let class =
            class_of(&cochain)?.ok_or_else(|| Failure::Domain(format!("`{src}` is not closed")))?;
        cs.push(class);
    }
    let r = massey_triple(&cs[0], &cs[1], &cs[2])?;
    match &r.status {
        MasseyStatus::Undefined {
            left_product_nonzero,
            right_product_nonzero,
        } => {
            let mut nonzero = Vec::new();
            if *left_product_nonzero {
                nonzero.push(format!("[{}][{}]", classes[0], classes[1]));
            }
            if *right_product_nonzero {
                nonzero.push(format!("[{}][{}]", classes[1], classes[2]));
            }
            let out = if c.json {
                render_json(&json!({
                    "degrees": r.degrees,
                    "left_product_nonzero": left_product_nonzero,
                    "right_product_nonzero": right_product_nonzero,
                    "status": "undefined",
                }))
            } else {
                format!("UNDEFINED; nonzero cup products: {}\n", nonzero.join(", "))
            };
            Ok((1, out))
        }
        MasseyStatus::Defined(d) => {
            let status = if d.trivial { "trivial" } else { "nontrivial" };
            let out = if c.json {
                render_json(&json!({
                    "class": qs(d.representative.coords()),
                    "degrees": r.degrees,
                    "indeterminacy": {
                        "basis": d.indeterminacy.vectors().iter().map(|v| qs(v)).collect::<Vec<_>>(),
                        "dim": d.indeterminacy.dim(),
                    },
                    "representative": d.representative.representative().to_string(),
                    "status": status,
                    "x": d.x.to_string(),
                    "y": d.y.to_string(),
                }))
            } else {
                format!(
                    "{}; representative {}; indeterminacy dim {}\n",
                    status.to_uppercase(),
                    d.representative.representative(),
                    d.indeterminacy.dim()
                )
            };
            Ok((0, out))
        }
    }
}

fn scan_json(report: &ScanReport) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut v = json!({
                "classes": e.labels,
                "degrees": e.result.degrees,
            });
            let obj = v.as_object_mut().unwrap();
            match e.result.defined() {
                Some(d) => {
                    obj.insert(
                        "status".into(),
                        json!(if d.trivial { "trivial" } else { "nontrivial" }),
                    );
                    obj.insert(
                        "representative".into(),
                        json!(d.representative.representative().to_string()),
                    );
                    obj.insert("indeterminacy_dim".into(), json!(d.indeterminacy.dim()));
                }
                None => {
                    obj.insert("status".into(), json!("undefined"));
                }
            }
            v
        })
        .collect();
    json!({
        "algebra": report.algebra,
        "counts": {
            "defined": report.defined,
            "nontrivial": report.nontrivial,
            "trivial": report.trivial,
            "triples": report.entries.len(),
            "undefined": report.undefined,
        },
        "entries": entries,
        "top_degree": report.top_degree,
    })
}

fn scan_text(report: &ScanReport, all: bool) -> String {
    let mut out = format!("algebra: {}\n{report}\n", report.algebra);
    for e in &report.entries {
        let line = match e.result.defined() {
            Some(d) if !d.trivial => format!(
                "NONTRIVIAL {} = {}",
                e.triple_label(),
                d.representative.representative()
            ),
            Some(d) if all => format!(
                "trivial {} = {}",
                e.triple_label(),
                d.representative.representative()
            ),
            None if all => format!("undefined {}", e.triple_label()),
            _ => continue,
        };
        writeln!(out, "{line}").unwrap();
    }
    out
}

fn scan(c: &Common, top: Option<usize>, pair_sums: bool, all: bool, threads: usize) -> CmdResult {
    let alg = load(&c.source)?;
    let top = top.unwrap_or(alg.top_analyzable_degree());
    let report = if pair_sums {
        massey_pair_sum_scan(&alg, top, threads)?
    } else {
        massey_scan_with_threads(&alg, top, threads)?
    };
    let out = if c.json {
        render_json(&scan_json(&report))
    } else {
        scan_text(&report, all)
    };
    Ok((0, out))
}

fn ideal_scan(
    c: &Common,
    ideal: Vec<String>,
    min_degree: usize,
    max_degree: Option<usize>,
) -> CmdResult {
    let alg = load(&c.source)?;
    let max_degree = max_degree.unwrap_or(alg.top_analyzable_degree());
    let report = ideal_closed_scan(&IdealScanSpec {
        algebra: alg.clone(),
        ideal_generators: ideal.clone(),
        min_degree,
        max_degree,
    })?;
    if c.json {
        let degrees: Vec<Value> = report
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "degree": d.degree,
                    "non_exact": d.non_exact.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        return Ok((
            0,
            render_json(&json!({
                "algebra": alg.label(),
                "all_exact": report.is_empty(),
                "degrees": degrees,
                "ideal": ideal,
            })),
        ));
    }
    let mut out = format!("algebra: {}\nideal: ({})\n", alg.label(), ideal.join(", "));
    if report.is_empty() {
        writeln!(
            out,
            "every closed element of the ideal is exact in degrees {min_degree}..={max_degree}"
        )
        .unwrap();
    }
    for d in report.degrees.iter().filter(|d| !d.non_exact.is_empty()) {
        let names: Vec<String> = d.non_exact.iter().map(|c| c.to_string()).collect();
        writeln!(
            out,
            "degree {}: closed, not exact: {}",
            d.degree,
            names.join(", ")
        )
        .unwrap();
    }
    Ok((0, out))
}

fn matrix_json(m: &masseylab::Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| qs(m.row(i))).collect())
}

fn matrix_text(m: &masseylab::Matrix) -> String {
    (0..m.rows())
        .map(|i| {
            format!(
                "  [{}]",
                m.row(i)
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn model(
    kind: ModelKind,
    params: &ModelParams,
    flags: [bool; 4],
    json: bool,
    threads: usize,
) -> CmdResult {
    let spec = model_spec(kind, params)?;
    let alg = spec.build()?;
    let [betti_flag, verdict_flag, h5_flag, pairing_flag] = flags;
    let summary = !flags.iter().any(|&f| f);
    let top = spec.formal_dimension();
    let betti = betti_vector(&alg, top)?;

    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    obj.insert("model".into(), json!(spec.to_string()));
    obj.insert("betti".into(), json!(betti));

    if summary {
        writeln!(text, "model: {spec}").unwrap();
        writeln!(text, "dims: {}", join(&alg.dims())).unwrap();
        writeln!(text, "betti: {}", join(&betti)).unwrap();
        obj.insert("dims".into(), json!(alg.dims()));
    }
    if betti_flag {
        writeln!(text, "{}", join(&betti)).unwrap();
    }
    if verdict_flag {
        let report = verdict_report_with_threads(&spec, threads)?;
        write!(text, "{report}").unwrap();
        let verdict = match &report.verdict {
            Verdict::Formal => json!({"formal": true}),
            Verdict::NonFormal { witness } => json!({"formal": false, "witness": witness}),
            Verdict::Inconclusive => json!({"formal": null}),
        };
        obj.insert(
            "verdict".into(),
            json!({
                "line": report.line,
                "notes": report.notes,
                "result": verdict,
                "scans": report.scans.iter().map(|(name, s)| json!({
                    "name": name,
                    "nontrivial": s.nontrivial,
                    "triples": s.entries.len(),
                })).collect::<Vec<_>>(),
            }),
        );
    }
    if h5_flag {
        let ModelSpec::SasakiCircle(c) = &spec else {
            return Err(Failure::Usage(
                "--h5 applies to the sasaki-circle model".into(),
            ));
        };
        let r = circle_h5_report(c)?;
        writeln!(text, "dim H^5: {}", r.dim_h5).unwrap();
        writeln!(
            text,
            "kernel of e: H^4(M) -> H^6(M): {}",
            r.euler_kernel_dim
        )
        .unwrap();
        writeln!(text, "H^5 basis: {}", r.computed_basis.join(", ")).unwrap();
        for (name, closed) in r.plus_family.iter().chain(&r.minus_family) {
            writeln!(
                text,
                "{name}: {}",
                if *closed { "closed" } else { "not closed" }
            )
            .unwrap();
        }
        writeln!(text, "{}", r.sign_note()).unwrap();
        let fam = |f: &[(String, bool)]| {
            f.iter()
                .map(|(n, c)| json!({"closed": c, "element": n}))
                .collect::<Vec<_>>()
        };
        obj.insert(
            "h5".into(),
            json!({
                "basis": r.computed_basis,
                "dim": r.dim_h5,
                "euler_kernel_dim": r.euler_kernel_dim,
                "minus_family": fam(&r.minus_family),
                "note": r.sign_note(),
                "plus_family": fam(&r.plus_family),
            }),
        );
    }
    if pairing_flag {
        let g = poincare_gram(&alg, top)?;
        writeln!(text, "top class: {}", g.top_class).unwrap();
        let mut blocks = Vec::new();
        for b in &g.blocks {
            writeln!(
                text,
                "H^{} x H^{}: rank {}, {}",
                b.degree,
                top - b.degree,
                b.rank,
                if b.nondegenerate {
                    "nondegenerate"
                } else {
                    "degenerate"
                }
            )
            .unwrap();
            if b.matrix.rows() > 0 && b.matrix.cols() > 0 {
                writeln!(text, "{}", matrix_text(&b.matrix)).unwrap();
            }
            let mut block = json!({
                "degree": b.degree,
                "matrix": matrix_json(&b.matrix),
                "nondegenerate": b.nondegenerate,
                "rank": b.rank,
            });
            if 2 * b.degree == top && b.nondegenerate && b.matrix.rows() > 0 {
                let d = diagonalize_pairing(&b.matrix)?;
                let (pos, neg) = d.signature();
                writeln!(
                    text,
                    "diagonal: {}; signature ({pos}, {neg})",
                    d.diagonal
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>()
                        .join(", ")
                )
                .unwrap();
                block
                    .as_object_mut()
                    .unwrap()
                    .insert("diagonal".into(), qs(&d.diagonal));
            }
            blocks.push(block);
        }
        obj.insert(
            "pairing".into(),
            json!({"blocks": blocks, "nondegenerate": g.nondegenerate()}),
        );
    }
    let out = if json {
        render_json(&Value::Object(obj))
    } else {
        text
    };
    Ok((0, out))
}

fn export(source: &Source, output: Option<PathBuf>) -> CmdResult {
    let alg = load(source)?;
    let text = export_algebra(&alg);
    match output {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok((0, format!("wrote {}\n", path.display())))
        }
        None => Ok((0, text)),
    }
}
