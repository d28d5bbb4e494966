//! Job configuration, orchestration and report emission.

mod report;

pub use report::{emit, run_job, DecompSummary, OrbitSampleResult, RecordRow, Report, SigmaSummary, StageResult, Verification};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::typea::parse_matrix;
use clap::Parser;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Gminus,
    Full,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum R0Source {
    Canonical,
    File(PathBuf),
    MatchTheta(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordList {
    Gminus,
    Full,
}

/// Matrix file f for record `index` (1-based) of the given list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub list: Option<RecordList>,
    pub index: usize,
    pub path: PathBuf,
}

/// Simple-root indices are 1-based here and in all user-facing text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub root_system: String,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub tau: Vec<(usize, usize)>,
    pub r0: R0Source,
    pub mode: Mode,
    pub typea_checks: bool,
    pub orbit_samples: Vec<OrbitSample>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Gram matrix on the central torus, rows separated by ';'.
    pub torus_gram: Option<String>,
    /// Generators (columns) of the exp kernel in h.
    pub kernel: Option<String>,
    /// Generators (columns) of the enlarged lattice ker'.
    pub lambda2: Option<String>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            root_system: String::new(),
            gamma1: Vec::new(),
            gamma2: Vec::new(),
            tau: Vec::new(),
            r0: R0Source::Canonical,
            mode: Mode::Gminus,
            typea_checks: false,
            orbit_samples: Vec::new(),
            format: Format::Table,
            out: None,
            torus_gram: None,
            kernel: None,
            lambda2: None,
        }
    }
}

#[derive(Parser, Debug, Default)]
#[command(name = "leafatlas", version, about = "Symplectic leaf and double coset classification tables")]
pub struct Args {
    /// Config file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub root_system: Option<String>,
    #[arg(long)]
    pub gamma1: Option<String>,
    #[arg(long)]
    pub gamma2: Option<String>,
    /// Map syntax "1:2,2:3".
    #[arg(long)]
    pub tau: Option<String>,
    /// `canonical`, a matrix file, or `match_theta:<file>`.
    #[arg(long)]
    pub r0: Option<String>,
    /// gminus, full or both.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub typea_checks: Option<bool>,
    /// `[gminus:|full:]index:path`, repeatable.
    #[arg(long = "orbit-sample")]
    pub orbit_sample: Vec<String>,
    /// table or machine.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub torus_gram: Option<String>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub lambda2: Option<String>,
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index {x:?}"))))
        .collect()
}

fn parse_map(s: &str) -> Result<Vec<(usize, usize)>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| Error::Parse(format!("bad pair {p:?}")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad pair {p:?}")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(format!("bad pair {p:?}")))?;
            Ok((a, b))
        })
        .collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Error::Parse(format!("bad boolean {other:?}"))),
    }
}

fn parse_r0(s: &str, base: &Path) -> R0Source {
    let s = s.trim();
    if s == "canonical" {
        R0Source::Canonical
    } else if let Some(p) = s.strip_prefix("match_theta:") {
        R0Source::MatchTheta(base.join(p.trim()))
    } else {
        R0Source::File(base.join(s))
    }
}

fn parse_sample(s: &str, base: &Path) -> Result<OrbitSample> {
    let bad = || Error::Parse(format!("bad orbit sample {s:?}"));
    let (list, rest) = if let Some(r) = s.strip_prefix("gminus:") {
        (Some(RecordList::Gminus), r)
    } else if let Some(r) = s.strip_prefix("full:") {
        (Some(RecordList::Full), r)
    } else {
        (None, s)
    };
    let (idx, path) = rest.split_once(':').ok_or_else(bad)?;
    let index = idx.trim().parse().map_err(|_| bad())?;
    Ok(OrbitSample { list, index, path: base.join(path.trim()) })
}

/// Matrix given inline with rows separated by ';'.
pub fn parse_inline_matrix(s: &str) -> Result<QMatrix> {
    parse_matrix(&s.replace(';', "\n"))
}

impl JobConfig {
    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        match key {
            "root_system" => self.root_system = value.trim().to_string(),
            "gamma1" => self.gamma1 = parse_list(value)?,
            "gamma2" => self.gamma2 = parse_list(value)?,
            "tau" => self.tau = parse_map(value)?,
            "r0" => self.r0 = parse_r0(value, base),
            "mode" => {
                self.mode = match value.trim() {
                    "gminus" => Mode::Gminus,
                    "full" => Mode::Full,
                    "both" => Mode::Both,
                    other => return Err(Error::Parse(format!("bad mode {other:?}"))),
                }
            }
            "typea_checks" => self.typea_checks = parse_bool(value)?,
            "orbit_sample" | "orbit_samples" => {
                for s in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    self.orbit_samples.push(parse_sample(s, base)?);
                }
            }
            "format" => {
                self.format = match value.trim() {
                    "table" => Format::Table,
                    "machine" => Format::Machine,
                    other => return Err(Error::Parse(format!("bad format {other:?}"))),
                }
            }
            "out" => self.out = Some(base.join(value.trim())),
            "torus_gram" => self.torus_gram = Some(value.trim().to_string()),
            "kernel" => self.kernel = Some(value.trim().to_string()),
            "lambda2" => self.lambda2 = Some(value.trim().to_string()),
            other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Relative paths are
    /// resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<JobConfig> {
        let mut cfg = JobConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            cfg.set(k.trim(), v, base)?;
        }
        Ok(cfg)
    }

    /// Config file first, then flags on top.
    pub fn from_args(args: &Args) -> Result<JobConfig> {
        let mut cfg = match &args.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                JobConfig::parse(&text, p.parent().unwrap_or(Path::new(".")))?
            }
            None => JobConfig::default(),
        };
        let here = Path::new("");
        let pairs: [(&str, &Option<String>); 10] = [
            ("root_system", &args.root_system),
            ("gamma1", &args.gamma1),
            ("gamma2", &args.gamma2),
            ("tau", &args.tau),
            ("r0", &args.r0),
            ("mode", &args.mode),
            ("format", &args.format),
            ("torus_gram", &args.torus_gram),
            ("kernel", &args.kernel),
            ("lambda2", &args.lambda2),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, v, here)?;
            }
        }
        if let Some(b) = args.typea_checks {
            cfg.typea_checks = b;
        }
        if !args.orbit_sample.is_empty() {
            cfg.orbit_samples = args.orbit_sample.iter().map(|s| parse_sample(s, here)).collect::<Result<_>>()?;
        }
        if let Some(o) = &args.out {
            cfg.out = Some(o.clone());
        }
        Ok(cfg)
    }

    /// Renders back to config text that parses to an equal value.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        s += &format!("root_system = {}\n", self.root_system);
        s += &format!("gamma1 = {}\n", join(&self.gamma1));
        s += &format!("gamma2 = {}\n", join(&self.gamma2));
        let tau: Vec<String> = self.tau.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        s += &format!("tau = {}\n", tau.join(","));
        s += &format!(
            "r0 = {}\n",
            match &self.r0 {
                R0Source::Canonical => "canonical".to_string(),
                R0Source::File(p) => p.display().to_string(),
                R0Source::MatchTheta(p) => format!("match_theta:{}", p.display()),
            }
        );
        let mode = match self.mode {
            Mode::Gminus => "gminus",
            Mode::Full => "full",
            Mode::Both => "both",
        };
        s += &format!("mode = {mode}\n");
        s += &format!("typea_checks = {}\n", self.typea_checks);
        for o in &self.orbit_samples {
            let prefix = match o.list {
                Some(RecordList::Gminus) => "gminus:",
                Some(RecordList::Full) => "full:",
                None => "",
            };
            s += &format!("orbit_sample = {prefix}{}:{}\n", o.index, o.path.display());
        }
        s += &format!("format = {}\n", if self.format == Format::Table { "table" } else { "machine" });
        if let Some(o) = &self.out {
            s += &format!("out = {}\n", o.display());
        }
        for (k, v) in [("torus_gram", &self.torus_gram), ("kernel", &self.kernel), ("lambda2", &self.lambda2)] {
            if let Some(v) = v {
                s += &format!("{k} = {v}\n");
            }
        }
        s
    }
}

/// Process exit code for a finished report: 0, 2 (input) or 3 (internal).
pub fn exit_code(report: &Report) -> i32 {
    let failed: Vec<&StageResult> = report.stages.iter().filter(|s| s.error.is_some()).collect();
    if failed.iter().any(|s| !s.input_error) {
        3
    } else if failed.is_empty() {
        0
    } else {
        2
    }
}
