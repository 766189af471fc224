//! Command-line driver for the time-frequency laboratory.
//!
//! Subcommands construct atoms, check frame bounds, estimate modulation
//! norms, profile divergence, and run the acceptance suite. Every run
//! writes a `manifest.txt` (command, parameters, seed, artifact version)
//! next to its outputs so results can be reproduced byte-for-byte.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure.

use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use gaborlab_core::accept;
use gaborlab_core::gabor::{
    painless_check, periodization, walnut_check, walnut_csv, GaborError, GaborSystem,
};
use gaborlab_core::modnorm::{
    box_equiv_norm, default_stft_grids, mpq_norm_stft, norm_report_csv, GaussianWindow,
    ModNormError, NormReportRow,
};
use gaborlab_core::srlab::{
    block_poly, counterexample_atom, dichotomy_csv, divergence_profile, gp_atom, h_atom,
    parseval_atom, DichotomyRow, SrError,
};
use gaborlab_core::tfcore::{
    atom_from_json, atom_to_json, box_atom, triangle_atom, GridSpec, Piece, PiecewiseAtom,
    QuadOpts, SampledSignal, TfError,
};

#[derive(Parser)]
#[command(name = "gaborlab", version, about = "Gabor frame and modulation-space laboratory")]
struct Cli {
    /// Flat key=value config file; explicit flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for randomized probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an atom and serialize it to <out>/atom.json.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Frame bounds of (atom, alpha, beta) via the compact-support
    /// criterion; writes the periodization as CSV.
    FrameCheck {
        #[arg(long)]
        atom: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Norm estimation via the stft or box route; writes a CSV report row.
    Norm {
        #[arg(long)]
        atom: PathBuf,
        /// "stft" or "box".
        #[arg(long)]
        method: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Frequency window half-width for the box route.
        #[arg(long)]
        k_max: Option<i64>,
    },
    /// Translate-correlation duality table for two atoms; writes CSV.
    Walnut {
        #[arg(long)]
        atom: PathBuf,
        /// The second window of the candidate dual pair.
        #[arg(long)]
        dual: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        shift: Option<f64>,
        #[arg(long)]
        n_max: Option<i64>,
    },
    /// Running coefficient power sums over a sparse frequency sublattice;
    /// writes the dichotomy CSV.
    Diverge {
        #[arg(long)]
        atom: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long = "L")]
        l: Option<u32>,
        #[arg(long)]
        blocks: Option<u32>,
    },
    /// Run the acceptance suite; exit 0 iff every criterion passes.
    Accept {
        /// Only run criteria whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// The indicator of [a, b).
    Box {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
    },
    /// The reference hat: x/2 on [0,1), 1-x/2 on [1,2).
    Triangle,
    /// The n-th dyadic sign block (frequencies 2^{n-1}..2^n-1).
    SrBlock {
        #[arg(long)]
        n: Option<u32>,
    },
    /// The geometric block sum with weight exponent p, truncated at
    /// --blocks blocks.
    Gp {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        blocks: Option<u32>,
    },
    /// Localized dilated block sum on [a, b) with b-a = 1/L, certified
    /// below --epsilon in the diagonal q-norm.
    H {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long = "L")]
        l: Option<u32>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        blocks: Option<u32>,
    },
    /// Multi-cell frame atom with per-cell q-norm budgets 2^{-k}.
    Counterexample {
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        cells: Option<u32>,
        #[arg(long)]
        blocks: Option<u32>,
    },
    /// Square-root completion of an existing atom file: the integer
    /// translates of the result have constant squared sum beta.
    Parseval {
        #[arg(long)]
        beta: Option<f64>,
        /// Atom file holding the base window on [0, 1).
        #[arg(long)]
        h: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
    },
}

enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TfError> for CliError {
    fn from(e: TfError) -> Self {
        match e {
            TfError::QuadratureFailure { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        match e {
            GaborError::Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SrError> for CliError {
    fn from(e: SrError) -> Self {
        match e {
            SrError::TruncationTooShallow { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ModNormError> for CliError {
    fn from(e: ModNormError) -> Self {
        match e {
            ModNormError::Quadrature(_) | ModNormError::DomainTruncation { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Flat key=value configuration; explicit flags take precedence.
struct Params {
    cfg: BTreeMap<String, String>,
}

impl Params {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = BTreeMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::Validation(format!(
                        "config line {} is not `key = value`: {line:?}",
                        lineno + 1
                    )));
                };
                cfg.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Params { cfg })
    }

    fn lookup<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.cfg.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Validation(format!("config value for {key} is not valid: {raw:?}"))
            }),
        }
    }

    fn resolve<T: std::str::FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
        default: Option<T>,
    ) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.lookup::<T>(key)? {
            return Ok(v);
        }
        default.ok_or_else(|| {
            CliError::Validation(format!("missing required parameter --{key} (or config `{key}`)"))
        })
    }
}

struct Run {
    out: PathBuf,
    manifest: BTreeMap<String, String>,
}

impl Run {
    fn new(out: &Path, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(out)?;
        let mut manifest = BTreeMap::new();
        manifest.insert("command".into(), command.into());
        manifest.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        Ok(Run {
            out: out.to_path_buf(),
            manifest,
        })
    }

    fn record(&mut self, key: &str, value: impl std::fmt::Display) {
        self.manifest.insert(key.into(), value.to_string());
    }

    fn write_file(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn finish(&self) -> Result<(), CliError> {
        let mut text = String::new();
        for (k, v) in &self.manifest {
            let _ = writeln!(text, "{k} = {v}");
        }
        self.write_file("manifest.txt", &text)?;
        Ok(())
    }
}

fn load_atom(path: &Path) -> Result<PiecewiseAtom, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("atom file {}: {e}", path.display())))?;
    atom_from_json(&text).map_err(CliError::validation)
}

fn max_trig_frequency(atom: &PiecewiseAtom) -> f64 {
    atom.pieces()
        .iter()
        .filter_map(|p| match p {
            Piece::Trig(t) => t.terms().iter().map(|&(_, f)| f.abs()).fold(None, |acc, v| {
                Some(acc.map_or(v, |a: f64| a.max(v)))
            }),
            Piece::Numeric(_) => None,
        })
        .fold(0.0, f64::max)
}

fn cmd_build(kind: &BuildKind, params: &Params, run: &mut Run) -> Result<(), CliError> {
    let atom = match kind {
        BuildKind::Box { a, b } => {
            let a = params.resolve(*a, "a", Some(0.0))?;
            let b = params.resolve(*b, "b", Some(1.0))?;
            run.record("kind", "box");
            run.record("a", a);
            run.record("b", b);
            box_atom(a, b)?
        }
        BuildKind::Triangle => {
            run.record("kind", "triangle");
            triangle_atom()
        }
        BuildKind::SrBlock { n } => {
            let n = params.resolve(*n, "n", None)?;
            run.record("kind", "sr-block");
            run.record("n", n);
            PiecewiseAtom::from_trig(block_poly(n)?)
        }
        BuildKind::Gp { p, blocks } => {
            let p = params.resolve(*p, "p", None)?;
            let blocks = params.resolve(*blocks, "blocks", Some(8))?;
            run.record("kind", "gp");
            run.record("p", p);
            run.record("blocks", blocks);
            gp_atom(p, blocks)?
        }
        BuildKind::H {
            p,
            q,
            a,
            b,
            l,
            epsilon,
            blocks,
        } => {
            let p = params.resolve(*p, "p", None)?;
            let q = params.resolve(*q, "q", None)?;
            let a = params.resolve(*a, "a", Some(0.0))?;
            let l = params.resolve(*l, "L", Some(1))?;
            let b = params.resolve(*b, "b", Some(a + 1.0 / l as f64))?;
            let epsilon = params.resolve(*epsilon, "epsilon", None)?;
            let blocks = params.resolve(*blocks, "blocks", Some(10))?;
            run.record("kind", "h");
            run.record("p", p);
            run.record("q", q);
            run.record("a", a);
            run.record("b", b);
            run.record("L", l);
            run.record("epsilon", epsilon);
            run.record("blocks", blocks);
            let h = h_atom(p, q, a, b, l, epsilon, blocks)?;
            run.record("scale", h.scale);
            run.record("certified_q_norm", format!("{:.17e}", h.certified_q_norm(q)));
            h.atom
        }
        BuildKind::Counterexample { q, cells, blocks } => {
            let q = params.resolve(*q, "q", Some(2.0))?;
            let cells = params.resolve(*cells, "cells", Some(8))?;
            let blocks = params.resolve(*blocks, "blocks", Some(10))?;
            run.record("kind", "counterexample");
            run.record("q", q);
            run.record("cells", cells);
            run.record("blocks", blocks);
            let ce = counterexample_atom(q, cells, blocks)?;
            for cell in &ce.cells {
                run.record(
                    &format!("cell_{}_q_norm", cell.index),
                    format!("{:.17e}", cell.q_norm_certified),
                );
            }
            ce.atom
        }
        BuildKind::Parseval { beta, h, delta } => {
            let beta = params.resolve(*beta, "beta", Some(0.5))?;
            let delta = params.resolve(*delta, "delta", Some(beta / 20.0))?;
            let h_path = match h {
                Some(p) => p.clone(),
                None => PathBuf::from(
                    params
                        .lookup::<String>("h")?
                        .ok_or_else(|| CliError::Validation("missing --h <atom file>".into()))?,
                ),
            };
            run.record("kind", "parseval");
            run.record("beta", beta);
            run.record("delta", delta);
            run.record("h", h_path.display());
            let base = load_atom(&h_path)?;
            parseval_atom(beta, &base, delta)?
        }
    };
    let path = run.write_file("atom.json", &atom_to_json(&atom))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_frame_check(
    atom_path: &Path,
    alpha: Option<f64>,
    beta: Option<f64>,
    params: &Params,
    run: &mut Run,
) -> Result<(), CliError> {
    let atom = load_atom(atom_path)?;
    let alpha = params.resolve(alpha, "alpha", Some(1.0))?;
    let beta = params.resolve(beta, "beta", Some(1.0))?;
    run.record("atom", atom_path.display());
    run.record("alpha", alpha);
    run.record("beta", beta);
    let system = GaborSystem::new(atom, alpha, beta)?;
    let report = painless_check(&system, 1 << 14)?;
    println!(
        "A={} B={} frame={}",
        report.lower, report.upper, report.is_frame
    );
    run.record("A", report.lower);
    run.record("B", report.upper);
    run.record("frame", report.is_frame);
    let d = periodization(&system, GridSpec::over(0.0, alpha, 1 << 12).map_err(CliError::from)?);
    let mut csv = String::from("x,periodization\n");
    for (i, v) in d.samples().iter().enumerate() {
        let _ = writeln!(csv, "{:.17e},{:.17e}", d.x(i), v.re);
    }
    run.write_file("periodization.csv", &csv)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_norm(
    atom_path: &Path,
    method: &str,
    p: Option<f64>,
    q: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    k_max: Option<i64>,
    params: &Params,
    run: &mut Run,
) -> Result<(), CliError> {
    let atom = load_atom(atom_path)?;
    let p = params.resolve(p, "p", None)?;
    let q = params.resolve(q, "q", Some(p))?;
    run.record("atom", atom_path.display());
    run.record("method", method);
    run.record("p", p);
    run.record("q", q);
    let atom_id = atom_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "atom".into());
    let (value, window_desc) = match method {
        "box" => {
            let alpha = params.resolve(alpha, "alpha", Some(1.0))?;
            let beta = params.resolve(beta, "beta", Some(1.0))?;
            let (lo, hi) = atom.support();
            let n_lo = (lo / alpha).floor() as i64;
            let n_hi = ((hi / alpha).ceil() as i64 - 1).max(n_lo);
            let k_hi = match k_max {
                Some(k) => k,
                None => ((max_trig_frequency(&atom) / beta).ceil() as i64 + 16).max(64),
            };
            run.record("alpha", alpha);
            run.record("beta", beta);
            run.record("k_max", k_hi);
            let v = box_equiv_norm(
                &atom,
                p,
                alpha,
                beta,
                (-k_hi, k_hi),
                (n_lo, n_hi),
                QuadOpts::default(),
            )?;
            (v, format!("k=[-{k_hi},{k_hi}];n=[{n_lo},{n_hi}]"))
        }
        "stft" => {
            let window = GaussianWindow::new(1.0)?;
            let band = max_trig_frequency(&atom) + 2.0;
            let (lo, hi) = atom.support();
            let count = (((hi - lo) / (window.sigma() / 8.0)).ceil() as usize).max(64);
            let grid = GridSpec::over(lo, hi, count).map_err(CliError::from)?;
            let f = SampledSignal::from_atom(&atom, grid);
            let (xg, wg) = default_stft_grids(&f, &window, band);
            let norm = mpq_norm_stft(&f, &window, p, q, xg, wg)?;
            if !norm.is_clean() {
                eprintln!(
                    "warning: transform boundary ring is {:.3e} of the peak; value is truncated",
                    norm.boundary_ratio
                );
                run.record("truncation_warning", format!("{:.3e}", norm.boundary_ratio));
            }
            (
                norm.value,
                format!(
                    "x=[{:.3},{:.3}];w=[{:.3},{:.3}]",
                    xg.start,
                    xg.end(),
                    wg.start,
                    wg.end()
                ),
            )
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown norm method {other:?} (expected \"stft\" or \"box\")"
            )))
        }
    };
    println!("{value:.12e}");
    run.record("value", format!("{value:.17e}"));
    let csv = norm_report_csv(&[NormReportRow {
        atom_id,
        method: method.into(),
        p,
        q,
        window: window_desc,
        value,
    }]);
    run.write_file("norm.csv", &csv)?;
    Ok(())
}

fn cmd_walnut(
    atom_path: &Path,
    dual_path: &Path,
    alpha: Option<f64>,
    shift: Option<f64>,
    n_max: Option<i64>,
    params: &Params,
    run: &mut Run,
) -> Result<(), CliError> {
    let g = load_atom(atom_path)?;
    let h = load_atom(dual_path)?;
    let alpha = params.resolve(alpha, "alpha", Some(1.0))?;
    let shift = params.resolve(shift, "shift", Some(2.0))?;
    let n_max = params.resolve(n_max, "n_max", Some(8))?;
    run.record("atom", atom_path.display());
    run.record("dual", dual_path.display());
    run.record("alpha", alpha);
    run.record("shift", shift);
    run.record("n_max", n_max);
    let rows = walnut_check(&g, &h, alpha, shift, n_max, 1 << 12);
    let worst = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    println!("max deviation over |n|<={n_max}: {worst:.6e}");
    run.record("max_deviation", format!("{worst:.17e}"));
    run.write_file("walnut.csv", &walnut_csv(&rows))?;
    Ok(())
}

fn cmd_diverge(
    atom_path: &Path,
    p: Option<f64>,
    q: Option<f64>,
    l: Option<u32>,
    blocks: Option<u32>,
    params: &Params,
    run: &mut Run,
) -> Result<(), CliError> {
    let atom = load_atom(atom_path)?;
    let p = params.resolve(p, "p", None)?;
    let q = params.resolve(q, "q", Some(2.0))?;
    let l = params.resolve(l, "L", Some(1))?;
    let blocks = params.resolve(blocks, "blocks", Some(12))?;
    if q <= p {
        return Err(CliError::Validation(format!(
            "the convergent column needs q > p, got p = {p}, q = {q}"
        )));
    }
    run.record("atom", atom_path.display());
    run.record("p", p);
    run.record("q", q);
    run.record("L", l);
    run.record("blocks", blocks);
    let p_profile = divergence_profile(&atom, p, l, blocks);
    let q_profile = divergence_profile(&atom, q, 1, blocks);
    // tail bounds follow the geometric block-weight law of the g_p family
    let r = 2f64.powf(1.0 - q / p);
    let rows: Vec<DichotomyRow> = (0..blocks as usize)
        .map(|i| DichotomyRow {
            block: (i + 1) as u32,
            partial_sum_p: p_profile.partial_sum[i],
            partial_sum_q_power: q_profile.partial_sum[i],
            tail_bound_q: 0.5 * r.powi(i as i32 + 2) / (1.0 - r),
        })
        .collect();
    let last = rows.last().expect("blocks >= 1");
    println!(
        "block {}: p-sum {:.6}, q-power sum {:.6}",
        last.block, last.partial_sum_p, last.partial_sum_q_power
    );
    run.write_file("diverge.csv", &dichotomy_csv(&rows))?;
    Ok(())
}

fn cmd_accept(filter: Option<&str>, run: &mut Run) -> Result<bool, CliError> {
    if let Some(f) = filter {
        run.record("filter", f);
    }
    let results = accept::run(filter);
    if results.is_empty() {
        return Err(CliError::Validation(format!(
            "filter {:?} matches no criterion",
            filter.unwrap_or("")
        )));
    }
    let mut all_passed = true;
    let mut json = String::from("{\n  \"criteria\": [\n");
    for (i, r) in results.iter().enumerate() {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:02} {} — {}", r.id, r.name, r.detail);
        all_passed &= r.passed;
        let _ = write!(
            json,
            "    {{\"id\": {}, \"name\": \"{}\", \"passed\": {}, \"detail\": \"{}\"}}",
            r.id,
            r.name,
            r.passed,
            r.detail.replace('"', "'")
        );
        json.push_str(if i + 1 < results.len() { ",\n" } else { "\n" });
    }
    let _ = write!(json, "  ],\n  \"all_passed\": {all_passed}\n}}\n");
    run.write_file("accept.json", &json)?;
    println!(
        "{}: {} criteria checked",
        if all_passed { "ALL PASS" } else { "FAILURES" },
        results.len()
    );
    run.record("all_passed", all_passed);
    Ok(all_passed)
}

fn execute(cli: &Cli) -> Result<ExitCode, CliError> {
    let params = Params::load(cli.config.as_deref())?;
    let command_name = match &cli.command {
        Command::Build { .. } => "build",
        Command::FrameCheck { .. } => "frame-check",
        Command::Norm { .. } => "norm",
        Command::Walnut { .. } => "walnut",
        Command::Diverge { .. } => "diverge",
        Command::Accept { .. } => "accept",
    };
    let mut run = Run::new(&cli.out, command_name)?;
    if let Some(seed) = cli.seed {
        run.record("seed", seed);
    }
    let mut ok = true;
    match &cli.command {
        Command::Build { kind } => cmd_build(kind, &params, &mut run)?,
        Command::FrameCheck { atom, alpha, beta } => {
            cmd_frame_check(atom, *alpha, *beta, &params, &mut run)?
        }
        Command::Norm {
            atom,
            method,
            p,
            q,
            alpha,
            beta,
            k_max,
        } => cmd_norm(atom, method, *p, *q, *alpha, *beta, *k_max, &params, &mut run)?,
        Command::Walnut {
            atom,
            dual,
            alpha,
            shift,
            n_max,
        } => cmd_walnut(atom, dual, *alpha, *shift, *n_max, &params, &mut run)?,
        Command::Diverge {
            atom,
            p,
            q,
            l,
            blocks,
        } => cmd_diverge(atom, *p, *q, *l, *blocks, &params, &mut run)?,
        Command::Accept { filter } => {
            ok = cmd_accept(filter.as_deref(), &mut run)?;
        }
    }
    run.finish()?;
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
