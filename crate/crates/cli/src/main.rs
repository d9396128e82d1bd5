use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tightframe::embeddings::maurer_cartan::derive_maurer_cartan;
use tightframe::embeddings::survey::{tightness_survey, TightnessReport};
use tightframe::export::{
    latex_connection, latex_form_matrix, latex_polynomial, ConnectionMatrixDoc, EquationSystemDoc, FormMatrixDoc,
};
use tightframe::normal_form::{hurwitz_gram_defect, hurwitz_symbolic, normal_form_rewrite_system, qmu_from_normal_form};
use tightframe::pipeline::{self, k2, RunReport};
use tightframe::symbolic::{parse_one_form, Relation};
use tightframe::KernelError;

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "TIGHTFRAME_WORKERS";

#[derive(Parser)]
#[command(name = "tightframe", version, about = "Moving-frame computations for tight embeddings of projective planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the Maurer-Cartan matrix of the standard embedding of KP².
    DeriveStandard {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Replay the staged frame changes and verify the final matrix.
    VerifyProof {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also solve the k = 4 initial system.
        #[arg(long)]
        long_running: bool,
        /// Replace the final relation list with the relations in this file,
        /// one per line.
        #[arg(long)]
        relations: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Sample random height functions on the standard embedding.
    Tightness {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Check BᵀB = (Σ s_i²) I for the Hurwitz family.
    Hurwitz {
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Write a JSON document.
    Export {
        #[arg(long, value_enum)]
        what: ExportKind,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    /// The derived standard matrix.
    Standard,
    /// The differentiated Cartan-lemma rules.
    Rules,
    /// The initial connection matrix with the rules loaded.
    Connection,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::InvalidK(_) | KernelError::NotDerivedInPaper(_) | KernelError::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Mismatch(other.to_string()),
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn derive_standard(k: usize, out: &Output) -> Result<bool, Failure> {
    if !matches!(k, 1 | 2 | 4) {
        return Err(Failure::Usage(format!(
            "k = {k}: standard matrices are derived for k = 1, 2, 4 (the printed quaternionic matrix is the largest case)"
        )));
    }
    let m = derive_maurer_cartan(k)?;
    let text = match out.format {
        Format::Json => json(&FormMatrixDoc::new(k, m)),
        Format::Latex => latex_form_matrix(&m),
        Format::Text => m.to_string(),
    };
    emit(&out.output, &text)?;
    Ok(true)
}

fn read_relations(path: &PathBuf) -> Result<Vec<Relation>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let form = parse_one_form(l).map_err(|e| Failure::Usage(format!("{l}: {e}")))?;
            Relation::from_form(format!("{l} = 0"), form).map_err(Failure::from)
        })
        .collect()
}

fn report_text(r: &RunReport) -> String {
    let mut s = format!("k = {}\n", r.k);
    for st in &r.stages {
        s += &format!("[{}] {} equations ({} distinct), {} solved, {} residual, {} ms\n",
            st.label, st.system.generated, st.system.distinct, st.system.solved, st.system.residual, st.millis);
        if let Some(c) = &st.rule_equations {
            s += &format!("  rule equations: {} generated, {} nonzero\n", c.generated, c.nonzero);
        }
        for (p, v) in &st.parameters {
            s += &format!("  {p} = {v}\n");
        }
        for c in &st.published {
            s += &format!("  published {}: agrees = {}, meets targets = {}\n", c.parameter, c.agrees, c.meets_targets);
        }
        for a in &st.added {
            if st.stage != pipeline::Stage::Init {
                s += &format!("  + {a}\n");
            }
        }
    }
    if let Some(v) = &r.verdict {
        s += &format!(
            "final list: {} equations; {} symbols solved, {} residual; span {} vs {}\n",
            v.final_equations.generated, v.solved_symbols, v.residual_equations, v.omega_rank, v.standard_rank
        );
        for n in &v.not_previously_implied {
            s += &format!("  not implied: {n}\n");
        }
        for d in v.display_diff.iter().chain(&v.renaming_diff) {
            s += &format!("  ({},{}) expected {}: left {}\n", d.row, d.col, d.expected, d.residual);
        }
        s += if v.matches { "verdict: match\n" } else { "verdict: MISMATCH\n" };
    } else {
        s += "verdict: none\n";
    }
    for n in &r.notes {
        s += &format!("note: {n}\n");
    }
    s
}

fn verify_proof(k: usize, long_running: bool, relations: &Option<PathBuf>, out: &Output) -> Result<bool, Failure> {
    let report = match k {
        2 => {
            let list = match relations {
                Some(p) => read_relations(p)?,
                None => k2::final_relations(),
            };
            pipeline::run_k2_with(&list, &k2::final_matrix())?
        }
        4 if long_running => pipeline::run_k4(true)?,
        4 => return Err(Failure::Usage("k = 4 needs --long-running".into())),
        _ => return Err(Failure::Usage(format!("k = {k}: verify-proof supports k = 2, and k = 4 with --long-running"))),
    };
    let matched = report.verdict.as_ref().is_some_and(|v| v.matches);
    let text = match out.format {
        Format::Json => json(&report),
        Format::Latex if matched => latex_connection(&k2::final_matrix()),
        Format::Latex | Format::Text => report_text(&report),
    };
    emit(&out.output, &text)?;
    Ok(matched)
}

fn tightness_text(r: &TightnessReport) -> String {
    let mut s = format!("k = {}, seed {}: {}/{} runs with indices 0, {}, {}\n", r.k, r.seed, r.perfect_runs, r.samples, r.k, 2 * r.k);
    for (n, c) in &r.critical_point_counts {
        s += &format!("  {c} runs with {n} critical points\n");
    }
    for (i, c) in &r.index_histogram {
        s += &format!("  index {i}: {c}\n");
    }
    if r.degenerate_runs > 0 {
        s += &format!("  degenerate: {}\n", r.degenerate_runs);
    }
    s += &format!("affine span of {} points: {} (expected {})\n", r.span_samples, r.span_dimension, r.expected_span);
    s
}

fn tightness(k: usize, samples: usize, seed: u64, out: &Output) -> Result<bool, Failure> {
    if !matches!(k, 1 | 2 | 4) {
        return Err(Failure::Usage(format!("k = {k}: height functions are sampled for k = 1, 2, 4")));
    }
    let r = tightness_survey(k, samples, seed)?;
    let text = match out.format {
        Format::Json => json(&r),
        _ => tightness_text(&r),
    };
    emit(&out.output, &text)?;
    Ok(r.all_perfect())
}

#[derive(Serialize)]
struct HurwitzReport {
    k: usize,
    holds: bool,
    matrix: Vec<Vec<String>>,
}

fn hurwitz(k: usize, out: &Output) -> Result<bool, Failure> {
    let b = hurwitz_symbolic(k)?;
    let holds = hurwitz_gram_defect(k)?.iter().flatten().all(|p| p.is_zero());
    let text = match out.format {
        Format::Json => json(&HurwitzReport {
            k,
            holds,
            matrix: b.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect(),
        }),
        Format::Latex => {
            let rows: Vec<String> = b.iter().map(|r| r.iter().map(latex_polynomial).collect::<Vec<_>>().join(" & ")).collect();
            format!("\\pmatrix{{\n{} \\cr\n}}", rows.join(" \\cr\n"))
        }
        Format::Text => {
            let rows: Vec<String> =
                b.iter().map(|r| r.iter().map(|p| format!("{p:>4}")).collect::<Vec<_>>().join(" ")).collect();
            format!("{}\nB^T B = (sum s_i^2) I: {}", rows.join("\n"), if holds { "holds" } else { "FAILS" })
        }
    };
    emit(&out.output, &text)?;
    Ok(holds)
}

fn export(what: ExportKind, k: usize, output: &Option<PathBuf>) -> Result<bool, Failure> {
    let text = match what {
        ExportKind::Standard => {
            if !matches!(k, 1 | 2 | 4) {
                return Err(Failure::Usage(format!("k = {k}: standard matrices are derived for k = 1, 2, 4")));
            }
            json(&FormMatrixDoc::new(k, derive_maurer_cartan(k)?))
        }
        ExportKind::Rules => json(&EquationSystemDoc::new(&pipeline::rule_system(k)?)),
        ExportKind::Connection => {
            let rs = normal_form_rewrite_system(&qmu_from_normal_form(k)?);
            json(&ConnectionMatrixDoc::new(&rs.loaded_matrix()))
        }
    };
    emit(output, &text)?;
    Ok(true)
}

fn configure_workers() -> Result<(), Failure> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().map_err(|_| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer")))?;
        if n == 0 {
            return Err(Failure::Usage(format!("{WORKERS_ENV} must be a positive integer")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_workers()?;
    match cli.command {
        Command::DeriveStandard { k, out } => derive_standard(k, &out),
        Command::VerifyProof { k, long_running, relations, out } => verify_proof(k, long_running, &relations, &out),
        Command::Tightness { k, samples, seed, out } => tightness(k, samples, seed, &out),
        Command::Hurwitz { k, out } => hurwitz(k, &out),
        Command::Export { what, k, output } => export(what, k, &output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
