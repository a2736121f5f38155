//! Batch command-line entry point for the laboratory.
//!
//! Subcommands: `verlinde`, `theta-decay`, `toeplitz`, `tqft`, `report`.
//! Settings resolve in three layers — built-in defaults, then a
//! line-oriented `key = value` config file, then flags — and the
//! effective configuration is echoed as `# key = value` header lines in
//! every CSV artifact (and a `config` object in JSON artifacts), so an
//! output file is self-describing and a run is reproducible byte for
//! byte.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 domain error,
//! 3 precision failure.

use clap::{Args, Parser, Subcommand};
use mcg_lab::error::Error;
use mcg_lab::spectra::{
    fit_bundle, records_to_csv, sweep, DecayRecord, Experiment, SweepParams,
};
use mcg_lab::su2::commutant::{fixed_and_commutant_with, RANK_TOL};
use mcg_lab::su2::genus1::{best_phase_residual, genus1_rep};
use mcg_lab::su2::genus2::{genus2_rep, max_relation_residual};
use mcg_lab::su2::gram::gram_form;
use mcg_lab::theta::quadrature::{FourierMode, TrigPoly, QUAD_TOL};
use mcg_lab::theta::{GeneratorWord, ModularParameter, TorusPoint};
use mcg_lab::verlinde::{
    twisted_dim_with, untwisted_dim_with, GenusLevel, INTEGRALITY_TOL,
};
use mcg_lab::C64;
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "MCG_LAB_OUT";

#[derive(Parser)]
#[command(name = "mcg-lab", version, about = "Numerical laboratory for quantum mapping class group representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Line-oriented `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Explicit CSV output path (fit JSON, when produced, replaces the
    /// extension with `.fit.json`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output directory (default: $MCG_LAB_OUT or the working directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output format for the record artifact: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// Integrality certification tolerance.
    #[arg(long)]
    integrality_tol: Option<f64>,
    /// Quadrature convergence tolerance.
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Commutant rank tolerance.
    #[arg(long)]
    rank_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Twisted and untwisted Verlinde dimensions over a k range.
    Verlinde {
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Theta-model decay sweep (invariance defect by default).
    ThetaDecay {
        /// invariance_defect | transport_defect | coherent_overlap
        #[arg(long)]
        experiment: Option<String>,
        /// Generator word over S, T (e.g. S, T, TS).
        #[arg(long)]
        generator: Option<String>,
        /// k grid: `a:b:pow2`, `a:b:step`, comma list, or single value.
        #[arg(long)]
        k: Option<String>,
        /// Torsion order of the point set X.
        #[arg(long)]
        m: Option<u32>,
        /// Base modular parameter `re,im`.
        #[arg(long)]
        tau: Option<String>,
        /// Second modular parameter `re,im` (transport defect).
        #[arg(long)]
        tau1: Option<String>,
        /// First torus point `a,b` (overlap/transport).
        #[arg(long)]
        x: Option<String>,
        /// Second torus point `a,b` (overlap).
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Toeplitz product-law defect sweep.
    Toeplitz {
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        /// Symbol: `cos:p,q`, `sin:p,q`, `exp:p,q`, or `const:c`.
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// TQFT representation report: dimensions, commutant, Gram, relations.
    Tqft {
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// All four decay experiments with a shared configuration.
    Report {
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        tau1: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// A usage-layer failure (bad flags/config), distinct from math errors.
#[derive(Debug)]
struct UsageError(String);

/// Effective settings after defaults < config file < flags.
#[derive(Debug, Clone)]
struct Settings {
    g: u32,
    k_max: u32,
    k_spec: String,
    experiment: String,
    generator: String,
    m: u32,
    tau: String,
    tau1: String,
    x: String,
    y: String,
    f1: String,
    f2: String,
    out: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    format: String,
    integrality_tol: f64,
    quad_tol: f64,
    rank_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            g: 2,
            k_max: 8,
            k_spec: "8:128:pow2".into(),
            experiment: "invariance_defect".into(),
            generator: "S".into(),
            m: 2,
            tau: "0,1".into(),
            tau1: "1,1".into(),
            x: "0,0".into(),
            y: "0.5,0.5".into(),
            f1: "cos:1,0".into(),
            f2: "sin:0,1".into(),
            out: None,
            out_dir: None,
            format: "csv".into(),
            integrality_tol: INTEGRALITY_TOL,
            quad_tol: QUAD_TOL,
            rank_tol: RANK_TOL,
        }
    }
}

impl Settings {
    fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        let bad_num = |k: &str, v: &str| UsageError(format!("config key {k}: bad number {v:?}"));
        match key {
            "g" => self.g = value.parse().map_err(|_| bad_num(key, value))?,
            "k_max" => self.k_max = value.parse().map_err(|_| bad_num(key, value))?,
            "k" => self.k_spec = value.to_string(),
            "experiment" => self.experiment = value.to_string(),
            "generator" => self.generator = value.to_string(),
            "m" => self.m = value.parse().map_err(|_| bad_num(key, value))?,
            "tau" => self.tau = value.to_string(),
            "tau1" => self.tau1 = value.to_string(),
            "x" => self.x = value.to_string(),
            "y" => self.y = value.to_string(),
            "f1" => self.f1 = value.to_string(),
            "f2" => self.f2 = value.to_string(),
            "out" => self.out = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "format" => self.format = value.to_string(),
            "integrality_tol" => {
                self.integrality_tol = value.parse().map_err(|_| bad_num(key, value))?
            }
            "quad_tol" => self.quad_tol = value.parse().map_err(|_| bad_num(key, value))?,
            "rank_tol" => self.rank_tol = value.parse().map_err(|_| bad_num(key, value))?,
            _ => return Err(UsageError(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    fn load_config(&mut self, path: &Path) -> Result<(), UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                UsageError(format!(
                    "config line {} is not `key = value`: {raw:?}",
                    lineno + 1
                ))
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn apply_common(&mut self, c: &CommonOpts) -> Result<(), UsageError> {
        if let Some(p) = &c.config {
            self.load_config(p)?;
        }
        if let Some(v) = &c.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = &c.out_dir {
            self.out_dir = Some(v.clone());
        }
        if let Some(v) = &c.format {
            self.format = v.clone();
        }
        if let Some(v) = c.integrality_tol {
            self.integrality_tol = v;
        }
        if let Some(v) = c.quad_tol {
            self.quad_tol = v;
        }
        if let Some(v) = c.rank_tol {
            self.rank_tol = v;
        }
        if self.format != "csv" && self.format != "json" {
            return Err(UsageError(format!("format must be csv or json, got {:?}", self.format)));
        }
        Ok(())
    }

    fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn csv_path(&self, stem: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let ext = if self.format == "json" { "json" } else { "csv" };
            self.out_dir().join(format!("{stem}.{ext}"))
        })
    }

    fn fit_path(&self, csv_path: &Path) -> PathBuf {
        csv_path.with_extension("fit.json")
    }
}

fn parse_k_spec(spec: &str) -> Result<Vec<u32>, UsageError> {
    let bad = || UsageError(format!("bad k specification {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [one] => one
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?,
        [a, b, mode] => {
            let lo: u32 = a.parse().map_err(|_| bad())?;
            let hi: u32 = b.parse().map_err(|_| bad())?;
            let mut grid = Vec::new();
            if *mode == "pow2" {
                let mut k = lo;
                while k <= hi {
                    grid.push(k);
                    k = k.checked_mul(2).ok_or_else(bad)?;
                }
            } else {
                let step: u32 = mode.parse().map_err(|_| bad())?;
                if step == 0 {
                    return Err(bad());
                }
                let mut k = lo;
                while k <= hi {
                    grid.push(k);
                    k += step;
                }
            }
            grid
        }
        _ => return Err(bad()),
    };
    if grid.is_empty() {
        return Err(UsageError(format!("k specification {spec:?} yields an empty grid")));
    }
    Ok(grid)
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), UsageError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| UsageError(format!("{what} must be `a,b`, got {s:?}")))?;
    let pa = a.trim().parse().map_err(|_| UsageError(format!("{what}: bad number {a:?}")))?;
    let pb = b.trim().parse().map_err(|_| UsageError(format!("{what}: bad number {b:?}")))?;
    Ok((pa, pb))
}

fn parse_symbol(s: &str) -> Result<TrigPoly, UsageError> {
    let bad = || UsageError(format!("bad symbol {s:?} (use cos:p,q sin:p,q exp:p,q const:c)"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "const" => {
            let c: f64 = rest.trim().parse().map_err(|_| bad())?;
            Ok(TrigPoly::constant(c))
        }
        _ => {
            let (p, q) = parse_pair(rest, "symbol mode")?;
            let (p, q) = (p as i32, q as i32);
            match kind {
                "cos" => Ok(TrigPoly::cosine(p, q)),
                "sin" => Ok(TrigPoly::sine(p, q)),
                "exp" => Ok(TrigPoly {
                    modes: vec![FourierMode { p, q, coeff: C64::new(1.0, 0.0) }],
                }),
                _ => Err(bad()),
            }
        }
    }
}

fn parse_tau(s: &str) -> Result<ModularParameter, Error> {
    let (re, im) = parse_pair(s, "tau").map_err(|e| Error::Domain(e.0))?;
    ModularParameter::new(re, im)
}

fn build_sweep_params(s: &Settings) -> Result<SweepParams, Failure> {
    let word = GeneratorWord::parse(&s.generator)?;
    let tau0 = parse_tau(&s.tau)?;
    let tau1 = parse_tau(&s.tau1)?;
    let (xa, xb) = parse_pair(&s.x, "x")?;
    let (ya, yb) = parse_pair(&s.y, "y")?;
    Ok(SweepParams {
        word,
        m: s.m,
        tau0,
        tau1,
        x: TorusPoint::new(xa, xb),
        y: TorusPoint::new(ya, yb),
        f1: parse_symbol(&s.f1)?,
        f2: parse_symbol(&s.f2)?,
        quad_tol: s.quad_tol,
    })
}

/// Either a usage failure (exit 1) or a math failure (exit 2/3).
enum Failure {
    Usage(String),
    Math(Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Math(Error::Precision(_)) => 3,
            Failure::Math(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Math(e) => format!("error: {e}"),
        }
    }
}

fn write_artifact(path: &Path, content: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn header_lines(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn csv_with_header(pairs: &[(&str, String)], columns: &str, rows: &[String]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(columns);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

fn config_json(pairs: &[(&str, String)]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (k, v) in pairs {
        map.insert((*k).to_string(), serde_json::Value::String(v.clone()));
    }
    serde_json::Value::Object(map)
}

fn bundle_json(records: &[DecayRecord], pairs: &[(&str, String)]) -> Result<String, Failure> {
    let bundle = fit_bundle(records)?;
    let mut v = serde_json::to_value(&bundle).expect("bundle serializes");
    v.as_object_mut()
        .expect("bundle is an object")
        .insert("config".into(), config_json(pairs));
    Ok(format!("{:#}\n", v))
}

fn rows_json(
    columns: &[&str],
    rows: &[Vec<serde_json::Value>],
    pairs: &[(&str, String)],
) -> String {
    let data: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            for (c, v) in columns.iter().zip(r) {
                m.insert((*c).to_string(), v.clone());
            }
            serde_json::Value::Object(m)
        })
        .collect();
    let mut top = serde_json::Map::new();
    top.insert("config".into(), config_json(pairs));
    top.insert("rows".into(), serde_json::Value::Array(data));
    format!("{:#}\n", serde_json::Value::Object(top))
}

fn num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn run_verlinde(s: &Settings) -> Result<(), Failure> {
    if s.g < 2 {
        return Err(Failure::Math(Error::Domain(format!(
            "verlinde subcommand needs g >= 2, got g={}",
            s.g
        ))));
    }
    let pairs = [
        ("command", "verlinde".to_string()),
        ("g", s.g.to_string()),
        ("k_max", s.k_max.to_string()),
        ("integrality_tol", format!("{:e}", s.integrality_tol)),
        ("format", s.format.clone()),
    ];
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for k in 1..=s.k_max {
        let gl = GenusLevel::new(s.g, k)?;
        let tw = twisted_dim_with(gl, s.integrality_tol)?;
        let un = untwisted_dim_with(gl, None, s.integrality_tol)?;
        rows.push(format!("{},{},{},{}", s.g, k, tw, un));
        json_rows.push(vec![
            serde_json::Value::from(s.g),
            serde_json::Value::from(k),
            serde_json::Value::String(tw.to_string()),
            serde_json::Value::String(un.to_string()),
        ]);
    }
    let path = s.csv_path("verlinde");
    let content = if s.format == "json" {
        rows_json(&["g", "k", "twisted_dim", "untwisted_dim"], &json_rows, &pairs)
    } else {
        csv_with_header(&pairs, "g,k,twisted_dim,untwisted_dim", &rows)
    };
    write_artifact(&path, &content)?;
    println!("verlinde: g={} k=1..{} ({} rows) -> {}", s.g, s.k_max, rows.len(), path.display());
    Ok(())
}

fn experiment_from_name(name: &str) -> Result<Experiment, UsageError> {
    match name {
        "invariance_defect" => Ok(Experiment::InvarianceDefect),
        "transport_defect" => Ok(Experiment::TransportDefect),
        "toeplitz_product" => Ok(Experiment::ToeplitzProduct),
        "coherent_overlap" => Ok(Experiment::CoherentOverlap),
        _ => Err(UsageError(format!("unknown experiment {name:?}"))),
    }
}

fn summarize(records: &[DecayRecord], pairs: &[(&str, String)]) -> String {
    match fit_bundle(records) {
        Ok(b) => format!(
            "{}: n={} slope={:.4} r2={:.4} sup k*value={:.6e}",
            b.experiment, b.n, b.slope, b.r2, b.sup_k_times_value
        ),
        Err(e) => {
            let tag = &records[0].experiment;
            let _ = pairs;
            format!("{tag}: fit unavailable ({e})")
        }
    }
}

fn run_theta_decay(s: &Settings) -> Result<(), Failure> {
    let experiment = experiment_from_name(&s.experiment)?;
    if experiment == Experiment::ToeplitzProduct {
        return Err(Failure::Usage(
            "experiment toeplitz_product belongs to the `toeplitz` subcommand".into(),
        ));
    }
    let params = build_sweep_params(s)?;
    let grid = parse_k_spec(&s.k_spec)?;
    let pairs = [
        ("command", "theta-decay".to_string()),
        ("experiment", s.experiment.clone()),
        ("generator", s.generator.clone()),
        ("k", s.k_spec.clone()),
        ("m", s.m.to_string()),
        ("tau", s.tau.clone()),
        ("tau1", s.tau1.clone()),
        ("x", s.x.clone()),
        ("y", s.y.clone()),
        ("quad_tol", format!("{:e}", s.quad_tol)),
        ("format", s.format.clone()),
    ];
    let records = sweep(experiment, &grid, &params)?;
    let rows: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{:.17e}",
                r.k, params.tau0.re, params.tau0.im, params.word, r.value
            )
        })
        .collect();
    let path = s.csv_path("theta_decay");
    let content = if s.format == "json" {
        let json_rows: Vec<Vec<serde_json::Value>> = records
            .iter()
            .map(|r| {
                vec![
                    serde_json::Value::from(r.k),
                    num(params.tau0.re),
                    num(params.tau0.im),
                    serde_json::Value::String(params.word.to_string()),
                    num(r.value),
                ]
            })
            .collect();
        rows_json(&["k", "tau_re", "tau_im", "generator", "value"], &json_rows, &pairs)
    } else {
        csv_with_header(&pairs, "k,tau_re,tau_im,generator,value", &rows)
    };
    write_artifact(&path, &content)?;
    println!("{} -> {}", summarize(&records, &pairs), path.display());
    let fit_path = s.fit_path(&path);
    let fit = bundle_json(&records, &pairs)?;
    write_artifact(&fit_path, &fit)?;
    println!("fit -> {}", fit_path.display());
    Ok(())
}

fn run_toeplitz(s: &Settings) -> Result<(), Failure> {
    let params = build_sweep_params(s)?;
    let grid = parse_k_spec(&s.k_spec)?;
    let pairs = [
        ("command", "toeplitz".to_string()),
        ("k", s.k_spec.clone()),
        ("tau", s.tau.clone()),
        ("f1", s.f1.clone()),
        ("f2", s.f2.clone()),
        ("quad_tol", format!("{:e}", s.quad_tol)),
        ("format", s.format.clone()),
    ];
    let records = sweep(Experiment::ToeplitzProduct, &grid, &params)?;
    let path = s.csv_path("toeplitz");
    let content = if s.format == "json" {
        let json_rows: Vec<Vec<serde_json::Value>> = records
            .iter()
            .map(|r| {
                vec![
                    serde_json::Value::String(r.experiment.clone()),
                    serde_json::Value::from(r.k),
                    num(r.value),
                    serde_json::Value::String(r.fingerprint.clone()),
                ]
            })
            .collect();
        rows_json(&["experiment", "k", "value", "params_hash"], &json_rows, &pairs)
    } else {
        records_to_csv(&records, &header_lines(&pairs))
    };
    write_artifact(&path, &content)?;
    println!("{} -> {}", summarize(&records, &pairs), path.display());
    let fit_path = s.fit_path(&path);
    let fit = bundle_json(&records, &pairs)?;
    write_artifact(&fit_path, &fit)?;
    println!("fit -> {}", fit_path.display());
    Ok(())
}

fn run_tqft(s: &Settings) -> Result<(), Failure> {
    let grid = parse_k_spec(&s.k_spec)?;
    let pairs = [
        ("command", "tqft".to_string()),
        ("g", s.g.to_string()),
        ("k", s.k_spec.clone()),
        ("rank_tol", format!("{:e}", s.rank_tol)),
        ("format", s.format.clone()),
    ];
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &k in &grid {
        let (gens, relation_residual) = match s.g {
            1 => {
                let (rep_s, rep_t) = genus1_rep(k)?;
                let st = &rep_s.matrix * &rep_t.matrix;
                let (res, _) = best_phase_residual(
                    &((&st * &st) * &st),
                    &(&rep_s.matrix * &rep_s.matrix),
                );
                (vec![rep_s, rep_t], res)
            }
            2 => {
                let gens = genus2_rep(k)?;
                let res = max_relation_residual(&gens);
                (gens, res)
            }
            other => {
                return Err(Failure::Math(Error::Domain(format!(
                    "tqft representations are available at genus 1 and 2, got g={other}"
                ))))
            }
        };
        let dim = gens[0].matrix.nrows();
        let gram = gram_form(s.g, k)?;
        let mats: Vec<_> = gens.iter().map(|g| g.matrix.clone()).collect();
        let rep = fixed_and_commutant_with(&mats, s.rank_tol)?;
        rows.push(format!(
            "{},{},{},{},{},{:.17e},{:.17e}",
            s.g, k, dim, rep.commutant_dim, rep.fixed_dim, gram.min_eigenvalue, relation_residual
        ));
        json_rows.push(vec![
            serde_json::Value::from(s.g),
            serde_json::Value::from(k),
            serde_json::Value::from(dim),
            serde_json::Value::from(rep.commutant_dim),
            serde_json::Value::from(rep.fixed_dim),
            num(gram.min_eigenvalue),
            num(relation_residual),
        ]);
        println!(
            "tqft g={} k={}: dim={} commutant_dim={} fixed_dim={} sv_gap={}",
            s.g,
            k,
            dim,
            rep.commutant_dim,
            rep.fixed_dim,
            rep.sv_gap.map_or("n/a".into(), |g| format!("{g:.3e}")),
        );
    }
    let path = s.csv_path("tqft");
    let columns = "g,k,dim,commutant_dim,fixed_dim,min_gram_eig,max_relation_residual";
    let content = if s.format == "json" {
        rows_json(
            &["g", "k", "dim", "commutant_dim", "fixed_dim", "min_gram_eig", "max_relation_residual"],
            &json_rows,
            &pairs,
        )
    } else {
        csv_with_header(&pairs, columns, &rows)
    };
    write_artifact(&path, &content)?;
    println!("tqft: {} rows -> {}", rows.len(), path.display());
    Ok(())
}

fn run_report(s: &Settings) -> Result<(), Failure> {
    let params = build_sweep_params(s)?;
    let grid = parse_k_spec(&s.k_spec)?;
    let pairs = [
        ("command", "report".to_string()),
        ("k", s.k_spec.clone()),
        ("generator", s.generator.clone()),
        ("m", s.m.to_string()),
        ("tau", s.tau.clone()),
        ("tau1", s.tau1.clone()),
        ("x", s.x.clone()),
        ("y", s.y.clone()),
        ("f1", s.f1.clone()),
        ("f2", s.f2.clone()),
        ("quad_tol", format!("{:e}", s.quad_tol)),
        ("format", s.format.clone()),
    ];
    let experiments = [
        Experiment::InvarianceDefect,
        Experiment::TransportDefect,
        Experiment::ToeplitzProduct,
        Experiment::CoherentOverlap,
    ];
    let mut all_records = Vec::new();
    let mut fits = Vec::new();
    let mut fit_failure: Option<Failure> = None;
    for e in experiments {
        let records = sweep(e, &grid, &params)?;
        println!("{}", summarize(&records, &pairs));
        match fit_bundle(&records) {
            Ok(b) => {
                let mut v = serde_json::to_value(&b).expect("bundle serializes");
                v.as_object_mut()
                    .expect("bundle is an object")
                    .insert("config".into(), config_json(&pairs));
                fits.push(v);
            }
            Err(err) => fit_failure = Some(Failure::Math(err)),
        }
        all_records.extend(records);
    }
    let path = s.csv_path("report");
    let content = if s.format == "json" {
        let json_rows: Vec<Vec<serde_json::Value>> = all_records
            .iter()
            .map(|r| {
                vec![
                    serde_json::Value::String(r.experiment.clone()),
                    serde_json::Value::from(r.k),
                    num(r.value),
                    serde_json::Value::String(r.fingerprint.clone()),
                ]
            })
            .collect();
        rows_json(&["experiment", "k", "value", "params_hash"], &json_rows, &pairs)
    } else {
        records_to_csv(&all_records, &header_lines(&pairs))
    };
    write_artifact(&path, &content)?;
    println!("report: {} records -> {}", all_records.len(), path.display());
    let fit_path = s.fit_path(&path);
    write_artifact(&fit_path, &format!("{:#}\n", serde_json::Value::Array(fits)))?;
    println!("fits -> {}", fit_path.display());
    // A fit that cannot be formed (e.g. an identically-zero series) is a
    // domain failure of the run even though all artifacts were written.
    match fit_failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn dispatch(cmd: &Cmd) -> Result<(), Failure> {
    let mut s = Settings::default();
    match cmd {
        Cmd::Verlinde { g, k_max, common } => {
            s.apply_common(common)?;
            if let Some(v) = g {
                s.g = *v;
            }
            if let Some(v) = k_max {
                s.k_max = *v;
            }
            run_verlinde(&s)
        }
        Cmd::ThetaDecay { experiment, generator, k, m, tau, tau1, x, y, common } => {
            s.apply_common(common)?;
            if let Some(v) = experiment {
                s.experiment = v.clone();
            }
            if let Some(v) = generator {
                s.generator = v.clone();
            }
            if let Some(v) = k {
                s.k_spec = v.clone();
            }
            if let Some(v) = m {
                s.m = *v;
            }
            if let Some(v) = tau {
                s.tau = v.clone();
            }
            if let Some(v) = tau1 {
                s.tau1 = v.clone();
            }
            if let Some(v) = x {
                s.x = v.clone();
            }
            if let Some(v) = y {
                s.y = v.clone();
            }
            run_theta_decay(&s)
        }
        Cmd::Toeplitz { k, tau, f1, f2, common } => {
            s.apply_common(common)?;
            if let Some(v) = k {
                s.k_spec = v.clone();
            }
            if let Some(v) = tau {
                s.tau = v.clone();
            }
            if let Some(v) = f1 {
                s.f1 = v.clone();
            }
            if let Some(v) = f2 {
                s.f2 = v.clone();
            }
            run_toeplitz(&s)
        }
        Cmd::Tqft { g, k, common } => {
            s.apply_common(common)?;
            if let Some(v) = g {
                s.g = *v;
            }
            // the representation grid defaults to small levels, not the
            // asymptotic sweep grid
            s.k_spec = "1".into();
            if let Some(v) = k {
                s.k_spec = v.clone();
            }
            run_tqft(&s)
        }
        Cmd::Report { k, generator, m, tau, tau1, x, y, f1, f2, common } => {
            s.apply_common(common)?;
            if let Some(v) = k {
                s.k_spec = v.clone();
            }
            if let Some(v) = generator {
                s.generator = v.clone();
            }
            if let Some(v) = m {
                s.m = *v;
            }
            if let Some(v) = tau {
                s.tau = v.clone();
            }
            if let Some(v) = tau1 {
                s.tau1 = v.clone();
            }
            if let Some(v) = x {
                s.x = v.clone();
            }
            if let Some(v) = y {
                s.y = v.clone();
            }
            if let Some(v) = f1 {
                s.f1 = v.clone();
            }
            if let Some(v) = f2 {
                s.f2 = v.clone();
            }
            run_report(&s)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(&cli.cmd) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("{}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}
