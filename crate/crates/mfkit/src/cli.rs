//! The `mfkit` command line.
//!
//! Exit codes: 0 when every assertion passes, 1 when one fails, 2 for usage
//! and input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::classify::{self, AdeTag, DmfType, Kind, NormalForm};
use crate::corpus;
use crate::cover::{self, CoverModule, ModuleWire};
use crate::exactalg::{FieldHeader, RootedField};
use crate::homalg::{self, IsoStatus, Search, SplitStatus};
use crate::mf::{MatrixFactorization, MfError, MfWire};
use crate::report::{Certificate, Finding, Input, Report, Settings};
use crate::wire;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Field characteristic; must agree with the header of any input file.
    #[arg(long, global = true)]
    pub field_char: Option<u64>,
    /// Truncation degree N [default: 2 deg f + 2].
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    /// Degree bound D for exact certificates.
    #[arg(long, global = true, default_value_t = 2)]
    pub cert_degree: u32,
    /// Seed for the randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(
    name = "mfkit",
    version,
    about = "Exact computations with d-fold matrix factorizations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

/// An input file, given positionally or with `--file`.
#[derive(Debug, Args)]
pub struct FileArg {
    #[arg(value_name = "FILE", required_unless_present = "file")]
    path: Option<PathBuf>,
    #[arg(long = "file", value_name = "FILE", conflicts_with = "path")]
    file: Option<PathBuf>,
}

impl FileArg {
    pub fn path(&self) -> &Path {
        self.path
            .as_deref()
            .or(self.file.as_deref())
            .expect("clap requires one of them")
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining identity of a factorization or module file.
    Verify {
        #[command(flatten)]
        file: FileArg,
    },
    /// Rotate the factors: T^k X.
    Shift {
        #[command(flatten)]
        file: FileArg,
        #[arg(short, long, default_value_t = 1, allow_negative_numbers = true)]
        k: i64,
    },
    /// The factorization (mu phi, ..., mu phi) of a module.
    Flat {
        #[command(flatten)]
        file: FileArg,
        /// A d-th root of -1 other than the canonical one.
        #[arg(long)]
        mu: Option<u64>,
    },
    /// The module X# of a factorization.
    Sharp {
        #[command(flatten)]
        file: FileArg,
    },
    /// Split into summands with an exact base change.
    Decompose {
        #[command(flatten)]
        file: FileArg,
    },
    /// Test two factorizations (or two modules) for isomorphism.
    Isom { first: PathBuf, second: PathBuf },
    /// Smallest k with T^k X isomorphic to X.
    Order {
        #[command(flatten)]
        file: FileArg,
    },
    /// Finite or infinite d-MF type of a normal form.
    Classify(ClassifyArgs),
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Scan for a prime whose Moore-matrix triples form enough symmetry orbits.
    Moore {
        #[arg(long, default_value_t = 5)]
        min: usize,
    },
    /// Re-verify every certificate in a JSON report.
    Recheck {
        #[command(flatten)]
        file: FileArg,
    },
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Exponent in y^e + x_2^2 + ... + x_r^2.
    #[arg(long, conflicts_with = "ade")]
    pub e: Option<u32>,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// An ADE tag such as A3, D5 or E7 (d = 2 only).
    #[arg(long)]
    pub ade: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    List,
    /// Canonical JSON of an entry; families emit one line per member.
    Emit {
        name: String,
    },
    /// Evaluate every expectation and emit a report.
    Check {
        #[arg(long)]
        entry: Option<String>,
        /// Re-verify the embedded certificates after the run.
        #[arg(long)]
        recheck: bool,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Object {
    Mf(MatrixFactorization),
    Module(CoverModule),
}

struct Loaded {
    object: Object,
    input: Input,
}

fn check_header(header: &FieldHeader, g: &Global) -> Result<(), String> {
    match g.field_char {
        Some(p) if p != header.p => Err(format!(
            "--field-char {p} disagrees with the file header p = {}",
            header.p
        )),
        _ => Ok(()),
    }
}

/// Reads either kind of object, telling them apart by their keys.
fn load_any(path: &Path, g: &Global) -> Result<Loaded, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let input = Input::digest(path.display().to_string(), text.as_bytes());
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let object = if value.get("factors").is_some() {
        let w: MfWire = serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
        check_header(&w.field, g)?;
        Object::Mf(MatrixFactorization::from_wire(&w).map_err(|e| format!("{}: {e}", path.display()))?)
    } else if value.get("phi").is_some() {
        let w: ModuleWire = serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
        check_header(&w.field, g)?;
        Object::Module(CoverModule::from_wire(&w).map_err(|e| format!("{}: {e}", path.display()))?)
    } else {
        return Err(format!("{}: expected a \"factors\" or \"phi\" key", path.display()));
    };
    Ok(Loaded { object, input })
}

fn load_mf(path: &Path, g: &Global) -> Result<(MatrixFactorization, Input), String> {
    match load_any(path, g)? {
        Loaded {
            object: Object::Mf(x),
            input,
        } => Ok((x, input)),
        _ => Err(format!("{}: expected a factorization", path.display())),
    }
}

fn load_module(path: &Path, g: &Global) -> Result<(CoverModule, Input), String> {
    match load_any(path, g)? {
        Loaded {
            object: Object::Module(m),
            input,
        } => Ok((m, input)),
        _ => Err(format!("{}: expected a module", path.display())),
    }
}

fn search(g: &Global, f: &crate::exactalg::Poly) -> Search {
    Search::new(
        g.truncation.unwrap_or(Search::default_for(f).truncation),
        g.cert_degree,
        g.seed,
    )
}

fn settings(g: &Global, p: Option<u64>, truncation: Option<u32>) -> Settings {
    Settings {
        p,
        truncation,
        cert_degree: g.cert_degree,
        seed: g.seed,
    }
}

fn emit(report: &Report, g: &Global) -> Outcome {
    let stdout = match g.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    Outcome {
        code: if report.all_passed() { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

fn verify(file: &Path, g: &Global) -> Outcome {
    // read the raw wire form so a failing product is a FAIL, not a usage error
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let subject = file.display().to_string();
    let mut report = Report::new("verify", settings(g, None, None));
    report.inputs.push(Input::digest(subject.clone(), text.as_bytes()));
    match load_any(file, g) {
        Ok(Loaded {
            object: Object::Mf(x), ..
        }) => {
            report.settings.p = Some(x.field().p());
            report.push(
                Finding::new(&subject, "product = f·I", true).with(Certificate::factorization(x.f(), x.factors())),
            );
        }
        Ok(Loaded {
            object: Object::Module(m),
            ..
        }) => {
            report.settings.p = Some(m.field().p());
            let minus_f = -m.f();
            report.push(
                Finding::new(&subject, "phi^d = -f·I", true).with(Certificate::power_identity(
                    m.phi(),
                    m.d() as u32,
                    &minus_f,
                )),
            );
        }
        Err(e) => {
            let parsed: Result<MfWire, _> = wire::from_json(&text);
            match parsed.map(|w| MatrixFactorization::from_wire(&w)) {
                Ok(Err(err @ MfError::ProductMismatch { .. })) => {
                    report.push(Finding::new(&subject, "product = f·I", false).detail(err.to_string()));
                }
                _ => {
                    let parsed: Result<ModuleWire, _> = wire::from_json(&text);
                    match parsed.map(|w| CoverModule::from_wire(&w)) {
                        Ok(Err(err @ cover::CoverError::PowerMismatch { .. })) => {
                            report.push(Finding::new(&subject, "phi^d = -f·I", false).detail(err.to_string()));
                        }
                        _ => return Outcome::usage(e),
                    }
                }
            }
        }
    }
    emit(&report, g)
}

fn decompose(file: &Path, g: &Global) -> Outcome {
    let (x, input) = match load_mf(file, g) {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    let s = search(g, x.f());
    let dec = homalg::decompose(&x, &s);
    let total = MatrixFactorization::direct_sum_all(&dec.summands).expect("summands share f and d");
    let mut report = Report::new("decompose", settings(g, Some(x.field().p()), Some(s.truncation)));
    report.inputs.push(input);
    let sizes: Vec<String> = dec.summands.iter().map(|y| y.size().to_string()).collect();
    report.push(
        Finding::new(
            file.display().to_string(),
            "CertifiedSplit",
            dec.status == SplitStatus::CertifiedSplit,
        )
        .detail(format!(
            "{:?}: {} summands of sizes {}",
            dec.status,
            dec.summands.len(),
            sizes.join(",")
        ))
        .with(Certificate::base_change(
            x.factors(),
            total.factors(),
            &dec.base_change.u,
            &dec.base_change.u_inv,
        )),
    );
    for (i, y) in dec.summands.iter().enumerate() {
        report.push(
            Finding::new(format!("summand {i}"), "product = f·I", true)
                .with(Certificate::factorization(y.f(), y.factors())),
        );
    }
    emit(&report, g)
}

fn isom(a: &Path, b: &Path, g: &Global) -> Outcome {
    let (la, lb) = match (load_any(a, g), load_any(b, g)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Outcome::usage(e),
    };
    let subject = format!("{} vs {}", a.display(), b.display());
    let (verdict, src, tgt, f, p) = match (&la.object, &lb.object) {
        (Object::Mf(x), Object::Mf(y)) => {
            let s = search(g, x.f());
            (
                homalg::is_isomorphic(x, y, &s),
                x.factors().to_vec(),
                y.factors().to_vec(),
                x.f().clone(),
                x.field().p(),
            )
        }
        (Object::Module(x), Object::Module(y)) => {
            let s = search(g, x.f());
            (
                homalg::modules_isomorphic(x, y, &s),
                vec![x.phi().clone()],
                vec![y.phi().clone()],
                x.f().clone(),
                x.field().p(),
            )
        }
        _ => return Outcome::usage("cannot compare a factorization with a module"),
    };
    let s = search(g, &f);
    let mut report = Report::new("isom", settings(g, Some(p), Some(s.truncation)));
    report.inputs.extend([la.input, lb.input]);
    let mut finding = Finding::new(subject, "CertifiedIso", verdict.status == IsoStatus::CertifiedIso).detail(format!(
        "{:?} at (N={}, D={})",
        verdict.status, verdict.truncation, verdict.cert_degree
    ));
    if let Some(c) = &verdict.certificate {
        finding = finding.with(Certificate::isomorphism(&src, &tgt, &c.alpha, &c.alpha_inv));
    }
    report.push(finding);
    emit(&report, g)
}

fn order(file: &Path, g: &Global) -> Outcome {
    let (x, input) = match load_mf(file, g) {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    let s = search(g, x.f());
    let k = homalg::order_of(&x, &s);
    let mut report = Report::new("order", settings(g, Some(x.field().p()), Some(s.truncation)));
    report.inputs.push(input);
    report.push(
        Finding::new(
            file.display().to_string(),
            format!("order divides d = {}", x.d()),
            x.d() % k == 0,
        )
        .detail(format!("order = {k} at N={}", s.truncation)),
    );
    emit(&report, g)
}

fn parse_ade(s: &str) -> Option<AdeTag> {
    let s = s.trim().replace('_', "");
    let (head, tail) = s.split_at(1);
    match (head.to_ascii_uppercase().as_str(), tail) {
        ("E", "6") => Some(AdeTag::E6),
        ("E", "7") => Some(AdeTag::E7),
        ("E", "8") => Some(AdeTag::E8),
        ("A", n) => n.parse().ok().map(AdeTag::A),
        ("D", n) => n.parse().ok().map(AdeTag::D),
        _ => None,
    }
}

fn classify_cmd(args: &ClassifyArgs, g: &Global) -> Outcome {
    let kind = match (&args.e, &args.ade) {
        (Some(e), None) => Kind::A { e: *e },
        (None, Some(tag)) => match parse_ade(tag) {
            Some(t) => Kind::Ade(t),
            None => return Outcome::usage(format!("unknown ADE tag {tag:?}")),
        },
        _ => return Outcome::usage("pass exactly one of --e or --ade"),
    };
    let nf = match NormalForm::new(kind, args.r, args.d) {
        Ok(nf) => nf,
        Err(e) => return Outcome::usage(e),
    };
    let ty = classify::dmf_type(&nf);
    let row = classify::finite_row(&nf);
    let verdict = match (&ty, &row) {
        (DmfType::Finite, Some(r)) => format!("Finite ({r} row)"),
        _ => "Infinite".to_string(),
    };
    let mut report = Report::new("classify", settings(g, None, None));
    report.push(Finding::new(format!("{:?}, d = {}", nf.kind, nf.d), "dmf_type", true).detail(verdict.clone()));
    match g.format {
        Format::Text => Outcome::ok(format!("{verdict}\n")),
        Format::Json => emit(&report, g),
    }
}

/// Runs the corpus expectations in parallel and merges in entry order.
pub fn corpus_report(entries: &[corpus::CorpusEntry], g: &Global) -> Report {
    let findings: Vec<Vec<Finding>> = entries.par_iter().map(|e| corpus::check_entry(e, g.seed)).collect();
    let mut report = Report::new("corpus check", settings(g, None, None));
    for e in entries {
        report
            .inputs
            .push(Input::digest(e.name.clone(), e.to_json().as_bytes()));
    }
    for f in findings.into_iter().flatten() {
        report.push(f);
    }
    report
}

fn recheck_findings(report: &Report) -> Finding {
    let out = report.recheck();
    let detail = if out.failures.is_empty() {
        format!("{} certificates", out.checked)
    } else {
        out.failures
            .iter()
            .map(|(i, r)| format!("#{i}: {r}"))
            .collect::<Vec<_>>()
            .join("; ")
    };
    Finding::new("recheck", "every certificate verifies exactly", out.failures.is_empty()).detail(detail)
}

fn corpus_cmd(cmd: &CorpusCommand, g: &Global) -> Outcome {
    match cmd {
        CorpusCommand::List => {
            let mut out = String::new();
            for e in corpus::all_entries() {
                out.push_str(&format!("{}\t{}\n", e.name, e.description));
            }
            Outcome::ok(out)
        }
        CorpusCommand::Emit { name } => match corpus::entry(name) {
            Ok(e) => Outcome::ok(e.to_json()),
            Err(e) => Outcome::usage(e),
        },
        CorpusCommand::Check { entry, recheck } => {
            let entries = match entry {
                Some(name) => match corpus::entry(name) {
                    Ok(e) => vec![e],
                    Err(e) => return Outcome::usage(e),
                },
                None => corpus::all_entries(),
            };
            let mut report = corpus_report(&entries, g);
            if *recheck {
                let f = recheck_findings(&report);
                report.push(f);
            }
            emit(&report, g)
        }
    }
}

fn moore_cmd(min: usize, g: &Global) -> Outcome {
    let batch = corpus::moore_scan(min);
    let (p, triples) = (batch.p, batch.triples);
    let field = RootedField::new(3, Some(p)).expect("p = 1 mod 6");
    let mut report = Report::new("moore", settings(g, Some(p), None));
    for &(a, b, c) in &triples {
        let m = corpus::moore(&field, a, b, c).expect("scanned triples are admissible");
        let minus_f = -m.f();
        let ok = crate::certify::power_is_scalar(m.phi(), 3, &minus_f);
        report.push(
            Finding::new(format!("({a},{b},{c}) over F_{p}"), "phi_abc^3 = -(x^3 + y^3)·I", ok)
                .with(Certificate::power_identity(m.phi(), 3, &minus_f)),
        );
    }
    emit(&report, g)
}

fn recheck_cmd(file: &Path, g: &Global) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let original = match Report::from_json(&text) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let mut report = Report::new("recheck", settings(g, None, None));
    report
        .inputs
        .push(Input::digest(file.display().to_string(), text.as_bytes()));
    report.push(recheck_findings(&original));
    emit(&report, g)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let g = &cli.global;
    match &cli.command {
        Command::Verify { file } => verify(file.path(), g),
        Command::Shift { file, k } => match load_mf(file.path(), g) {
            Ok((x, _)) => Outcome::ok(x.shift(*k).to_json()),
            Err(e) => Outcome::usage(e),
        },
        Command::Flat { file, mu } => match load_module(file.path(), g) {
            Ok((m, _)) => match mu {
                None => Outcome::ok(m.flat().to_json()),
                Some(mu) => match m.flat_with_mu(*mu) {
                    Ok(x) => Outcome::ok(x.to_json()),
                    Err(e) => Outcome::usage(e),
                },
            },
            Err(e) => Outcome::usage(e),
        },
        Command::Sharp { file } => match load_mf(file.path(), g) {
            Ok((x, _)) => match cover::sharp(&x) {
                Ok(m) => Outcome::ok(m.to_json()),
                Err(e) => Outcome::usage(e),
            },
            Err(e) => Outcome::usage(e),
        },
        Command::Decompose { file } => decompose(file.path(), g),
        Command::Isom { first, second } => isom(first, second, g),
        Command::Order { file } => order(file.path(), g),
        Command::Classify(args) => classify_cmd(args, g),
        Command::Corpus(cmd) => corpus_cmd(cmd, g),
        Command::Moore { min } => moore_cmd(*min, g),
        Command::Recheck { file } => recheck_cmd(file.path(), g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("mfkit").chain(args.iter().copied()))
    }

    #[test]
    fn classify_text() {
        assert_eq!(run_args(&["classify", "--e", "3", "--d", "6"]).stdout, "Infinite\n");
        assert_eq!(
            run_args(&["classify", "--e", "3", "--d", "5"]).stdout,
            "Finite (A_2 row)\n"
        );
        assert_eq!(
            run_args(&["classify", "--ade", "E7", "--d", "2"]).stdout,
            "Finite (E_7 row)\n"
        );
        assert_eq!(run_args(&["classify", "--d", "3"]).code, 2);
        assert_eq!(run_args(&["classify", "--e", "1", "--d", "3"]).code, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["corpus", "emit", "nope"]).code, 2);
        assert_eq!(run_args(&["verify", "/nonexistent/x.json"]).code, 2);
    }

    #[test]
    fn ade_tags() {
        assert_eq!(parse_ade("D_5"), Some(AdeTag::D(5)));
        assert_eq!(parse_ade("a3"), Some(AdeTag::A(3)));
        assert_eq!(parse_ade("E9"), None);
    }
}
