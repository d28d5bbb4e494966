use super::{Format, JobConfig, Mode, R0Source, RecordList};
use crate::bdtriple::{
    induction_chain, solve_r0, validate_triple, BDTriple, CartanTerm, R0Mode, R0_CONVENTION_NOTE,
};
use crate::decomp::{compute_decomposition, full_h_predicate, Decomposition};
use crate::error::{Error, Result};
use crate::leafclass::{classify_g, classify_gminus, sigma_group, LeafRecord};
use crate::linalg::{fmt_q, QMatrix};
use crate::rootsys::{exp_kernel_lattice, Lattice, RootSystem};
use crate::typea::{self, dot_w, parse_matrix, MatrixElement, ThetaPrime, TwistAutomorphism};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: String,
    pub error: Option<String>,
    pub input_error: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompSummary {
    pub r0: Vec<Vec<String>>,
    pub f: Vec<Vec<String>>,
    pub theta: Option<Vec<Vec<String>>>,
    pub ord_tau: usize,
    pub induction_steps: usize,
    pub dim_g: usize,
    pub dim_gplus: usize,
    pub dim_gminus: usize,
    pub dim_l1: usize,
    pub dim_h_ort1: usize,
    pub dim_h_ort2: usize,
    pub dim_a1: usize,
    pub full_h: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub index: usize,
    /// Reduced words, one per Weyl element (v, or v1 and v2).
    pub v: Vec<String>,
    /// One-line permutations (1-based), type A only.
    pub permutations: Option<Vec<Vec<usize>>>,
    pub length: usize,
    pub lv_dim: usize,
    pub derived_dim: usize,
    pub moduli_dim: usize,
    pub d_orb_max: usize,
    pub leaf_dim: i64,
    pub coset_dim: i64,
    pub simplified_leaf_dim: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSummary {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    pub display: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub invariant_violations: Vec<String>,
    pub cybe_zero: Option<bool>,
    pub cybe_residual_terms: Option<usize>,
    pub symmetric_part: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSampleResult {
    pub list: RecordList,
    pub index: usize,
    pub path: String,
    pub d_orb: Option<usize>,
    pub leaf_dim: Option<i64>,
    pub coset_dim: Option<i64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: JobConfig,
    pub convention_note: String,
    pub stages: Vec<StageResult>,
    pub decomposition: Option<DecompSummary>,
    pub gminus: Option<Vec<RecordRow>>,
    pub full: Option<Vec<RecordRow>>,
    pub sigma: Option<SigmaSummary>,
    pub verification: Verification,
    pub orbit_samples: Vec<OrbitSampleResult>,
}

fn mat_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(fmt_q).collect()).collect()
}

fn zero_based(v: &[usize], what: &str) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Parse(format!("{what}: indices are 1-based"))))
        .collect()
}

fn read_matrix(path: &std::path::Path) -> Result<QMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

struct Stages(Vec<StageResult>);

impl Stages {
    fn run<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        match f() {
            Ok(v) => {
                self.0.push(StageResult { stage: stage.into(), error: None, input_error: false });
                Some(v)
            }
            Err(e) => {
                self.0.push(StageResult { stage: stage.into(), error: Some(e.to_string()), input_error: e.is_input_error() });
                None
            }
        }
    }
}

fn row(rs: &RootSystem, index: usize, r: &LeafRecord) -> RecordRow {
    let perms = rs.type_a_rank().map(|_| {
        r.v.iter()
            .map(|w| w.to_permutation(rs).unwrap_or_default().iter().map(|p| p + 1).collect())
            .collect()
    });
    RecordRow {
        index,
        v: r.v.iter().map(|w| w.word_string(rs)).collect(),
        permutations: perms,
        length: r.v.iter().map(|w| w.length()).sum(),
        lv_dim: r.stable.lv_dim,
        derived_dim: r.stable.derived_dim,
        moduli_dim: r.stable.moduli_dim,
        d_orb_max: r.d_orb_max,
        leaf_dim: r.leaf_dim.constant,
        coset_dim: r.coset_dim.constant,
        simplified_leaf_dim: r.simplified_leaf_dim.map(|d| d.constant),
    }
}

fn summary(rs: &RootSystem, t: &BDTriple, r0: &CartanTerm, d: &Decomposition) -> Result<DecompSummary> {
    Ok(DecompSummary {
        r0: mat_strings(&r0.r0),
        f: mat_strings(&d.f_cartan),
        theta: d.theta_full.as_ref().map(mat_strings),
        ord_tau: t.ord_tau,
        induction_steps: induction_chain(rs, t)?.len(),
        dim_g: d.dim_g,
        dim_gplus: d.dim_gplus(),
        dim_gminus: d.dim_gminus(),
        dim_l1: d.dim_l1(),
        dim_h_ort1: d.h_ort1.dim(),
        dim_h_ort2: d.h_ort2.dim(),
        dim_a1: d.a1.dim(),
        full_h: full_h_predicate(d),
    })
}

/// Orbit dimension of f through the record's stable subgroup.
fn sample_orbit(rs: &RootSystem, t: &BDTriple, rec: &LeafRecord, f: &QMatrix) -> Result<usize> {
    let f = MatrixElement::group(f.clone())?;
    let size = rs.type_a_rank().ok_or(Error::NotTypeA)? + 1;
    if f.size() != size {
        return Err(Error::DimensionMismatch { expected: size, got: f.size() });
    }
    let positions = typea::root_unit_positions(rs, &rec.stable.root_set);
    for i in 0..size {
        for j in 0..size {
            if i != j && !num::Zero::is_zero(f.entries.get(i, j)) && !positions.contains(&(i, j)) {
                return Err(Error::Parse("f must lie in the stable subgroup".into()));
            }
        }
    }
    let twist = match rec.v.as_slice() {
        [v] => TwistAutomorphism::Conjugation(dot_w(rs, v)?),
        [v1, v2] => TwistAutomorphism::Chain { v1: dot_w(rs, v1)?, theta: ThetaPrime::new(rs, t)?, v2: dot_w(rs, v2)? },
        _ => return Err(Error::Internal("record without Weyl data".into())),
    };
    let d = typea::tc_orbit_dim(&f.entries, &twist, &rec.stable.root_set)?;
    if d > rec.d_orb_max {
        return Err(Error::Internal(format!("orbit dimension {d} exceeds {}", rec.d_orb_max)));
    }
    Ok(d)
}

/// validate → r0 → decomposition → classification → Σ → type A checks.
pub fn run_job(cfg: &JobConfig) -> Report {
    let mut st = Stages(Vec::new());
    let mut report = Report {
        input: cfg.clone(),
        convention_note: R0_CONVENTION_NOTE.to_string(),
        stages: Vec::new(),
        decomposition: None,
        gminus: None,
        full: None,
        sigma: None,
        verification: Verification::default(),
        orbit_samples: Vec::new(),
    };
    let rs = st.run("root_system", || match &cfg.torus_gram {
        Some(g) => RootSystem::build_with_torus_gram(&cfg.root_system, super::parse_inline_matrix(g)?),
        None => RootSystem::build(&cfg.root_system),
    });
    let triple = rs.as_ref().and_then(|rs| {
        st.run("triple", || {
            let g1 = zero_based(&cfg.gamma1, "gamma1")?;
            let g2 = zero_based(&cfg.gamma2, "gamma2")?;
            let tau: Vec<(usize, usize)> = cfg
                .tau
                .iter()
                .map(|&(a, b)| Ok((a.checked_sub(1).ok_or(Error::IndexOutOfRange(0))?, b.checked_sub(1).ok_or(Error::IndexOutOfRange(0))?)))
                .collect::<Result<_>>()?;
            if cfg.typea_checks && rs.type_a_rank().is_none() {
                return Err(Error::NotTypeA);
            }
            validate_triple(rs, &g1, &g2, &tau)
        })
    });
    let (Some(rs), Some(t)) = (rs, triple) else {
        report.stages = st.0;
        return report;
    };
    let r0 = st.run("r0", || {
        let mode = match &cfg.r0 {
            R0Source::Canonical => R0Mode::Canonical,
            R0Source::File(p) => R0Mode::FromMatrix(read_matrix(p)?),
            R0Source::MatchTheta(p) => R0Mode::MatchTheta(read_matrix(p)?),
        };
        solve_r0(&rs, &t, &mode)
    });
    let Some(r0) = r0 else {
        report.stages = st.0;
        return report;
    };
    let d = st.run("decomposition", || compute_decomposition(&rs, &t, &r0));
    if let Some(d) = &d {
        report.decomposition = st.run("summary", || summary(&rs, &t, &r0, d));
        let v = d.invariant_violations(&rs, &t);
        st.run("invariants", || {
            if v.is_empty() {
                Ok(())
            } else {
                Err(Error::Internal(v.join("; ")))
            }
        });
        report.verification.invariant_violations = v;
    }
    let mut gminus_recs = None;
    let mut full_recs = None;
    if let Some(d) = &d {
        if matches!(cfg.mode, Mode::Gminus | Mode::Both) {
            gminus_recs = st.run("classify_gminus", || classify_gminus(&rs, &t, d));
            report.gminus = gminus_recs.as_ref().map(|r| r.iter().enumerate().map(|(i, x)| row(&rs, i + 1, x)).collect());
        }
        if matches!(cfg.mode, Mode::Full | Mode::Both) {
            full_recs = st.run("classify_g", || classify_g(&rs, &t, d, false));
            report.full = full_recs.as_ref().map(|r| r.iter().enumerate().map(|(i, x)| row(&rs, i + 1, x)).collect());
        }
        report.sigma = st.run("sigma", || {
            let parse_lattice = |s: &Option<String>| -> Result<Option<Lattice>> {
                s.as_ref().map(|s| Lattice::new(super::parse_inline_matrix(s)?)).transpose()
            };
            let user = parse_lattice(&cfg.kernel)?;
            let l2 = parse_lattice(&cfg.lambda2)?;
            let ker = exp_kernel_lattice(&rs, user.as_ref())?;
            let g = sigma_group(d, &ker, l2.as_ref())?;
            Ok(SigmaSummary { display: g.to_string(), invariant_factors: g.invariant_factors, free_rank: g.free_rank })
        });
    }
    if cfg.typea_checks {
        st.run("typea", || {
            let r = typea::realize_r(&rs, &t, &r0)?;
            let res = typea::check_cybe(&r);
            report.verification.cybe_zero = Some(res.is_zero());
            report.verification.cybe_residual_terms = Some(res.nonzero_terms());
            report.verification.symmetric_part = Some(typea::check_symmetric_part(&r));
            if !res.is_zero() {
                return Err(Error::Internal("CYBE residual is nonzero".into()));
            }
            Ok(())
        });
    }
    for s in &cfg.orbit_samples {
        let list = s.list.unwrap_or(if gminus_recs.is_some() { RecordList::Gminus } else { RecordList::Full });
        let recs = match list {
            RecordList::Gminus => gminus_recs.as_ref(),
            RecordList::Full => full_recs.as_ref(),
        };
        let res = (|| {
            let recs = recs.ok_or_else(|| Error::Parse("orbit sample refers to a list that was not computed".into()))?;
            let rec = s
                .index
                .checked_sub(1)
                .and_then(|i| recs.get(i))
                .ok_or(Error::IndexOutOfRange(s.index))?;
            let f = read_matrix(&s.path)?;
            let d = sample_orbit(&rs, &t, rec, &f)?;
            Ok::<_, Error>((d, rec.leaf_dim.at(d), rec.coset_dim.at(d)))
        })();
        let mut out = OrbitSampleResult {
            list,
            index: s.index,
            path: s.path.display().to_string(),
            d_orb: None,
            leaf_dim: None,
            coset_dim: None,
            error: None,
        };
        match res {
            Ok((d, l, c)) => {
                out.d_orb = Some(d);
                out.leaf_dim = Some(l);
                out.coset_dim = Some(c);
            }
            Err(e) => {
                st.0.push(StageResult {
                    stage: format!("orbit_sample {}", s.index),
                    error: Some(e.to_string()),
                    input_error: e.is_input_error(),
                });
                out.error = Some(e.to_string());
            }
        }
        report.orbit_samples.push(out);
    }
    report.stages = st.0;
    report
}

fn table(out: &mut String, title: &str, rows: &[RecordRow]) {
    let header = ["#", "v", "perm", "l(v)", "dim l^v", "leaf_dim", "coset_dim"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            let v = if r.v.len() == 1 { r.v[0].clone() } else { format!("({})", r.v.join(", ")) };
            let perm = r
                .permutations
                .as_ref()
                .map(|ps| {
                    ps.iter()
                        .map(|p| format!("[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_else(|| "-".into());
            [
                r.index.to_string(),
                v,
                perm,
                r.length.to_string(),
                r.lv_dim.to_string(),
                format!("{} + d_orb", r.leaf_dim),
                format!("{} + d_orb", r.coset_dim),
            ]
        })
        .collect();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for c in &cells {
        for (w, s) in width.iter_mut().zip(c.iter()) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |xs: &[String]| -> String {
        xs.iter()
            .zip(&width)
            .map(|(s, w)| format!("{s:<w$}", w = *w))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{}", line(&header.map(String::from)));
    let _ = writeln!(out, "{}", width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    for c in &cells {
        let _ = writeln!(out, "{}", line(c));
    }
}

/// Table text or a JSON document.
pub fn emit(report: &Report, format: Format) -> String {
    if format == Format::Machine {
        return serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    }
    let mut out = String::new();
    let cfg = &report.input;
    let _ = writeln!(out, "root system: {}", cfg.root_system);
    let idx = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let _ = writeln!(out, "gamma1: {{{}}}  gamma2: {{{}}}", idx(&cfg.gamma1), idx(&cfg.gamma2));
    let tau: Vec<String> = cfg.tau.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    let _ = writeln!(out, "tau: {}", if tau.is_empty() { "(empty)".into() } else { tau.join(", ") });
    let _ = writeln!(out, "note: {}", report.convention_note);
    for s in report.stages.iter().filter(|s| s.error.is_some()) {
        let _ = writeln!(out, "error [{}]: {}", s.stage, s.error.as_deref().unwrap_or(""));
    }
    if let Some(d) = &report.decomposition {
        let _ = writeln!(out, "r0: [{}]", d.r0.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("; "));
        let _ = writeln!(
            out,
            "ord(tau) = {}  dim g = {}  dim g+ = {}  dim g- = {}  dim l1 = {}",
            d.ord_tau, d.dim_g, d.dim_gplus, d.dim_gminus, d.dim_l1
        );
        let _ = writeln!(
            out,
            "dim h^ort_1 = {}  dim h^ort_2 = {}  dim a1 = {}  full h: {}",
            d.dim_h_ort1, d.dim_h_ort2, d.dim_a1, d.full_h
        );
    }
    if let Some(s) = &report.sigma {
        let _ = writeln!(out, "Sigma: {}", s.display);
    }
    let v = &report.verification;
    if let (Some(c), Some(s)) = (v.cybe_zero, v.symmetric_part) {
        let _ = writeln!(out, "CYBE residual zero: {c}  r + r21 = Casimir: {s}");
    }
    if let Some(rows) = &report.gminus {
        let _ = writeln!(out);
        table(&mut out, "G- double cosets", rows);
    }
    if let Some(rows) = &report.full {
        let _ = writeln!(out);
        table(&mut out, "G double cosets", rows);
    }
    if !report.orbit_samples.is_empty() {
        let _ = writeln!(out);
        for s in &report.orbit_samples {
            match (&s.error, s.d_orb, s.leaf_dim) {
                (None, Some(d), Some(l)) => {
                    let _ = writeln!(out, "orbit sample {} ({}): d_orb = {d}, leaf_dim = {l}", s.index, s.path);
                }
                (e, ..) => {
                    let _ = writeln!(out, "orbit sample {} ({}): error: {}", s.index, s.path, e.as_deref().unwrap_or("?"));
                }
            }
        }
    }
    out
}
