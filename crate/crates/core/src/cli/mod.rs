//! Command-line front end.

mod spec;

pub use spec::{
    canonical_json, parse_spec, parse_spec_str, AutoSpec, Built, CrystalElementSpec, ElementSpec,
    GroupSpec, Params, PointGroupSpec, SpecDocument,
};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::crystal::{crystal_entropy, CrystalElement, CrystalGroup};
use crate::error::Error;
use crate::estimate::EntropyEstimate;
use crate::folner::{
    box_upper_bound, choose_folner_constant, convolution_tower, min_rank_bruteforce, min_rank_search,
    parallelepiped_folner, LpMode, Parallelepiped, RankCertificate, SearchSpace,
};
use crate::group::{AbelianElement, FgAbelianGroup};
use crate::laws::{run_suite, LawReport, Verdict};
use crate::peters::{growth_rate_estimate, peters_growth, unit_cube_corners, GrowthSeries, DEFAULT_CAP};
use crate::spectral::{eigen_entropy, DEFAULT_ROOT_TOL};

pub const THREADS_ENV: &str = "DUALENT_THREADS";
pub const DEFAULT_RADIUS: i64 = 4;
pub const DEFAULT_N: usize = 12;
pub const DEFAULT_TOWER_HEIGHT: usize = 3;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Spec { field: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dualent", version, about = "Entropy of group automorphisms by three routes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral entropy of the document's automorphism.
    Entropy {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Sumset growth series and its tail-difference rate.
    Peters {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Amenable δ-rank of the document's ω.
    Rank {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the law-checking suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub radius: Option<i64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_support: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<RankMethod>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankMethod {
    Lp,
    Interval,
    Parallelepiped,
    Tower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Rendered output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub bytes: Vec<u8>,
    pub exit_code: i32,
}

#[derive(Debug, Serialize)]
pub struct PetersReport {
    pub series: GrowthSeries,
    pub estimate: EntropyEstimate,
}

#[derive(Debug, Serialize)]
pub struct CrystalRankReport {
    pub rank: usize,
    pub support: Vec<CrystalElementSpec>,
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_weights: Option<Vec<String>>,
    pub defect: f64,
    pub delta: f64,
    pub search_radius: i64,
    pub exhaustive_within_radius: bool,
    pub supports_examined: u64,
    pub method: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<LawReport>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Report {
    Entropy(EntropyEstimate),
    Peters(PetersReport),
    Rank(RankCertificate),
    CrystalRank(CrystalRankReport),
    Verify(VerifyReport),
}

struct Settings {
    delta: Option<f64>,
    radius: i64,
    n: usize,
    cap: usize,
    tol: f64,
    max_support: Option<usize>,
    tower_height: usize,
}

fn settings(flags: &Flags, params: &Params) -> Result<Settings, CliError> {
    let s = Settings {
        delta: flags.delta.or(params.delta),
        radius: flags.radius.or(params.radius).unwrap_or(DEFAULT_RADIUS),
        n: flags.n.or(params.n).unwrap_or(DEFAULT_N),
        cap: flags.cap.or(params.cap).unwrap_or(DEFAULT_CAP),
        tol: flags.tol.or(params.tol).unwrap_or(DEFAULT_ROOT_TOL),
        max_support: flags.max_support.or(params.max_support),
        tower_height: flags.n.or(params.n).unwrap_or(DEFAULT_TOWER_HEIGHT),
    };
    if let Some(d) = s.delta {
        if !(d > 0.0 && d.is_finite()) {
            return Err(CliError::Usage(format!("delta must be positive and finite, got {d}")));
        }
    }
    if !(s.tol > 0.0) {
        return Err(CliError::Usage(format!("tol must be positive, got {}", s.tol)));
    }
    Ok(s)
}

fn need_delta(s: &Settings) -> Result<f64, CliError> {
    s.delta
        .ok_or_else(|| CliError::Usage("this command needs δ: pass --delta or set params.delta".into()))
}

fn missing(what: &str) -> CliError {
    CliError::Spec {
        field: what.into(),
        message: "required by this command".into(),
    }
}

/// Runs one parsed command without touching the process state.
pub fn run(cli: &Cli) -> Result<(Report, Format), CliError> {
    match &cli.command {
        Command::Entropy { spec, flags } => {
            let doc = parse_spec(spec)?;
            let s = settings(flags, &doc.params)?;
            let est = match doc.build()? {
                Built::Abelian { auto, .. } => {
                    let auto = auto.ok_or_else(|| missing("auto"))?;
                    eigen_entropy(auto.lattice_part(), s.tol)?
                }
                Built::Crystal { group, auto, .. } => {
                    let auto = auto.ok_or_else(|| missing("auto"))?;
                    crystal_entropy(&group, &auto, s.tol)?
                }
            };
            Ok((Report::Entropy(est), flags.format))
        }
        Command::Peters { spec, flags } => {
            let doc = parse_spec(spec)?;
            let s = settings(flags, &doc.params)?;
            match doc.build()? {
                Built::Abelian { group, auto, set, .. } => {
                    let auto = auto.ok_or_else(|| missing("auto"))?;
                    let e = set.unwrap_or_else(|| unit_cube_corners(&group));
                    let series = peters_growth(&auto, &e, s.n, s.cap)?;
                    let estimate = growth_rate_estimate(&series)?;
                    Ok((Report::Peters(PetersReport { series, estimate }), flags.format))
                }
                Built::Crystal { .. } => Err(CliError::Usage(
                    "peters works on abelian groups; use entropy for crystal groups".into(),
                )),
            }
        }
        Command::Rank { spec, flags } => {
            let doc = parse_spec(spec)?;
            let s = settings(flags, &doc.params)?;
            let delta = need_delta(&s)?;
            if s.radius < 1 {
                return Err(CliError::Usage("radius must be at least 1".into()));
            }
            let method = flags.method.unwrap_or(RankMethod::Lp);
            let report = match doc.build()? {
                Built::Abelian { group, auto, omega, .. } => {
                    let omega = omega.ok_or_else(|| missing("omega"))?;
                    Report::Rank(abelian_rank(&group, auto.as_ref(), &omega, delta, &s, method)?)
                }
                Built::Crystal { group, omega, .. } => {
                    if method != RankMethod::Lp {
                        return Err(CliError::Usage("crystal groups support --method lp only".into()));
                    }
                    let omega = omega.ok_or_else(|| missing("omega"))?;
                    Report::CrystalRank(crystal_rank(&group, &omega, delta, &s)?)
                }
            };
            Ok((report, flags.format))
        }
        Command::Verify { suite, flags } => {
            let seed = flags.seed.unwrap_or(DEFAULT_SEED);
            let reports = run_suite(suite, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            let passed = reports.iter().all(LawReport::passed);
            Ok((
                Report::Verify(VerifyReport {
                    suite: suite.clone(),
                    seed,
                    passed,
                    reports,
                }),
                flags.format,
            ))
        }
    }
}

fn abelian_rank(
    group: &FgAbelianGroup,
    auto: Option<&crate::group::AbelianAutomorphism>,
    omega: &[AbelianElement],
    delta: f64,
    s: &Settings,
    method: RankMethod,
) -> Result<RankCertificate, CliError> {
    Ok(match method {
        RankMethod::Lp => {
            let window = group.ball(s.radius).len();
            min_rank_bruteforce(group, omega, delta, s.radius, s.max_support.unwrap_or(window))?
        }
        RankMethod::Interval => {
            let f = box_upper_bound(group, omega, delta, s.radius)?;
            RankCertificate::upper_bound(f, omega, delta, "interval")?
        }
        RankMethod::Parallelepiped => {
            if group.torsion_len() > 0 || group.rank() == 0 {
                return Err(CliError::Usage("the parallelepiped construction needs a free abelian group".into()));
            }
            let c = choose_folner_constant(group.rank(), delta)?;
            let f = parallelepiped_folner(&Parallelepiped::canonical(group.rank()), c)?;
            RankCertificate::upper_bound(f, omega, delta, "parallelepiped")?
        }
        RankMethod::Tower => {
            let gamma = auto.ok_or_else(|| missing("auto"))?;
            let height = s.tower_height.max(1);
            let base = box_upper_bound(group, omega, delta, s.radius)?;
            let tower = convolution_tower(&base, gamma, height, s.cap)?;
            let mut moved = Vec::new();
            let mut power = crate::group::AbelianAutomorphism::identity(group);
            for _ in 0..height {
                for x in omega {
                    let y = power.apply(x)?;
                    if !moved.contains(&y) {
                        moved.push(y);
                    }
                }
                power = power.compose(gamma)?;
            }
            RankCertificate::upper_bound(tower, &moved, delta, &format!("tower of height {height}"))?
        }
    })
}

fn crystal_rank(
    group: &CrystalGroup,
    omega: &[CrystalElement],
    delta: f64,
    s: &Settings,
) -> Result<CrystalRankReport, CliError> {
    let window = group.ball(s.radius);
    let max_support = s.max_support.unwrap_or(window.len());
    let space = SearchSpace::new(
        window,
        group.identity(),
        omega,
        |a: &CrystalElement, b: &CrystalElement| group.multiply(a, b),
        |a: &CrystalElement| group.inverse(a),
    )?;
    let found = min_rank_search(&space, delta, max_support, LpMode::Auto)?.ok_or(Error::RankSearchExhausted {
        radius: s.radius,
        max_support,
        delta,
    })?;
    let name = |x: &CrystalElement| CrystalElementSpec {
        point: group.point_group().name(x.h).to_string(),
        lattice: x.lattice.clone(),
    };
    Ok(CrystalRankReport {
        rank: found.rank,
        support: found.support.iter().map(name).collect(),
        weights: found.weights,
        exact_weights: found.exact_weights.map(|w| w.iter().map(|q| q.to_string()).collect()),
        defect: found.defect,
        delta,
        search_radius: s.radius,
        exhaustive_within_radius: true,
        supports_examined: found.supports_examined,
        method: "lp".into(),
    })
}

/// Deterministic serialization of a report.
pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => csv(report),
        Format::Text => text(report),
    };
    Ok(text.into_bytes())
}

fn csv(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Entropy(e) => {
            out.push_str("value,method,tolerance\n");
            let _ = writeln!(out, "{},{},{}", e.value, method_name(e), e.tolerance);
        }
        Report::Peters(p) => out.push_str(&p.series.to_csv()),
        Report::Rank(c) => {
            out.push_str("rank,defect,delta,exhaustive_within_radius,supports_examined\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.rank, c.defect, c.delta, c.exhaustive_within_radius, c.supports_examined
            );
        }
        Report::CrystalRank(c) => {
            out.push_str("rank,defect,delta,exhaustive_within_radius,supports_examined\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.rank, c.defect, c.delta, c.exhaustive_within_radius, c.supports_examined
            );
        }
        Report::Verify(v) => {
            out.push_str("law,verdict,instances,failures,inconclusive,max_deviation\n");
            for r in &v.reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.law,
                    verdict_name(r.verdict()),
                    r.instances,
                    r.failures.len(),
                    r.inconclusive.len(),
                    r.max_deviation
                );
            }
        }
    }
    out
}

fn method_name(e: &EntropyEstimate) -> &'static str {
    match e.method {
        crate::estimate::Method::Spectral => "spectral",
        crate::estimate::Method::Peters => "peters",
        crate::estimate::Method::Rank => "rank",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Entropy(e) => {
            let _ = writeln!(out, "entropy  {:.10}", e.value);
            let _ = writeln!(out, "method   {}", method_name(e));
            if let crate::estimate::Diagnostics::Spectral { char_poly, root_moduli, .. } = &e.diagnostics {
                let _ = writeln!(out, "charpoly {char_poly}");
                let moduli: Vec<String> = root_moduli.iter().map(|m| format!("{m:.6}")).collect();
                let _ = writeln!(out, "|roots|  {}", moduli.join(" "));
            }
            if let Some(note) = &e.note {
                let _ = writeln!(out, "note     {note}");
            }
        }
        Report::Peters(p) => {
            let _ = writeln!(out, "{:>3} {:>12} {:>12}", "n", "size", "log(s_n)/n");
            for (i, s) in p.series.sizes.iter().enumerate() {
                let n = i + 1;
                let _ = writeln!(out, "{n:>3} {s:>12} {:>12.6}", (*s as f64).ln() / n as f64);
            }
            let _ = writeln!(out, "rate     {:.10}", p.estimate.value);
            if p.series.capped {
                let _ = writeln!(out, "note     series stopped at the size cap");
            }
        }
        Report::Rank(c) => {
            let _ = writeln!(out, "rank     {}", c.rank);
            let _ = writeln!(out, "defect   {:.10} (delta {})", c.defect, c.delta);
            let _ = writeln!(out, "method   {}", c.method);
            let _ = writeln!(
                out,
                "search   radius {} exhaustive {} supports {}",
                c.search_radius, c.exhaustive_within_radius, c.supports_examined
            );
            for (x, w) in c.witness.iter() {
                let _ = writeln!(out, "  {x:?} {w:.10}");
            }
        }
        Report::CrystalRank(c) => {
            let _ = writeln!(out, "rank     {}", c.rank);
            let _ = writeln!(out, "defect   {:.10} (delta {})", c.defect, c.delta);
            let _ = writeln!(
                out,
                "search   radius {} exhaustive {} supports {}",
                c.search_radius, c.exhaustive_within_radius, c.supports_examined
            );
            for (x, w) in c.support.iter().zip(&c.weights) {
                let _ = writeln!(out, "  ({}, {:?}) {w:.10}", x.point, x.lattice);
            }
        }
        Report::Verify(v) => {
            for r in &v.reports {
                let _ = writeln!(out, "{}", r.summary_line());
                for c in r.failures.iter().chain(&r.inconclusive) {
                    let _ = writeln!(out, "    #{} {} {}", c.instance, c.detail, c.inputs);
                }
            }
            let _ = writeln!(out, "{}", if v.passed { "all laws passed" } else { "some laws failed" });
        }
    }
    out
}

fn exit_code(report: &Report) -> i32 {
    match report {
        Report::Verify(v) if !v.passed => 3,
        _ => 0,
    }
}

/// Parses, runs and renders; never exits the process.
pub fn execute<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    let (report, format) = run(&cli)?;
    Ok(Output {
        bytes: emit_report(&report, format)?,
        exit_code: exit_code(&report),
    })
}

fn out_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Entropy { flags, .. }
        | Command::Peters { flags, .. }
        | Command::Rank { flags, .. }
        | Command::Verify { flags, .. } => flags.out.as_ref(),
    }
}

fn configure_threads() {
    let n = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Process entry point; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|(report, format)| Ok((emit_report(&report, format)?, exit_code(&report))));
    match result {
        Ok((bytes, code)) => {
            let written = match out_path(&cli) {
                Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                }),
                None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                }),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    }

    #[test]
    fn entropy_of_cat_map() {
        let dir = tempfile::tempdir().unwrap();
        let spec = write(
            &dir,
            "cat.json",
            r#"{"group": {"kind": "free_abelian", "rank": 2}, "auto": {"lattice": [[2, 1], [1, 1]]}}"#,
        );
        let out = execute(["dualent", "entropy", &spec, "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.bytes).unwrap();
        assert!((v["value"].as_f64().unwrap() - 0.9624236501192069).abs() < 1e-9);
        assert_eq!(v["method"], "spectral");
        assert!(v.get("diagnostics").is_some());
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn rank_of_interval() {
        let dir = tempfile::tempdir().unwrap();
        let spec = write(
            &dir,
            "z.json",
            r#"{"group": {"kind": "free_abelian", "rank": 1}, "omega": [[1], [-1]], "params": {"delta": 0.5, "radius": 8}}"#,
        );
        let out = execute(["dualent", "rank", &spec, "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.bytes).unwrap();
        assert_eq!(v["rank"], 5);
        assert_eq!(v["exhaustive_within_radius"], true);
        assert!((v["defect"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn error_codes() {
        let dir = tempfile::tempdir().unwrap();
        let bad = write(&dir, "bad.json", r#"{"group": {"kind": "free_abelian", "rank": 2}, "auto": {"lattice": [[2, 0], [0, 1]]}}"#);
        assert_eq!(main_with_args(["dualent", "entropy", &bad]), 2);
        assert_eq!(main_with_args(["dualent", "entropy", "/nonexistent/spec.json"]), 2);
        let no_delta = write(&dir, "nd.json", r#"{"group": {"kind": "free_abelian", "rank": 1}, "omega": [[1]]}"#);
        assert_eq!(execute(["dualent", "rank", &no_delta]).unwrap_err().exit_code(), 2);
        let tiny = write(
            &dir,
            "tiny.json",
            r#"{"group": {"kind": "free_abelian", "rank": 1}, "omega": [[1]], "params": {"delta": 0.1, "radius": 2}}"#,
        );
        assert_eq!(execute(["dualent", "rank", &tiny]).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn peters_csv() {
        let dir = tempfile::tempdir().unwrap();
        let spec = write(
            &dir,
            "cat.json",
            r#"{"group": {"kind": "free_abelian", "rank": 2}, "auto": {"lattice": [[2, 1], [1, 1]]}, "params": {"n": 4}}"#,
        );
        let out = execute(["dualent", "peters", &spec, "--format", "csv"]).unwrap();
        let text = String::from_utf8(out.bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,size,log_size_over_n");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,4,"));
    }
}
