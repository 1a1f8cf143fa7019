//! Command-line front end. Reports go to stdout (or `--out`) as JSON, a
//! one-line summary goes to stderr. Exit codes: 0 pass, 1 violation, 2 usage.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{region_member, sharp_bound_t23, sharpness_search, RegionPoint};
use crate::coeffs::{a3_closed_form, a4_closed_form, coeffs_from_subordination};
use crate::error::{Error, Result};
use crate::extremal::{build_extremal, verify_attainment};
use crate::highdim::{equality_gap_at_extremal, soundness_sweep, Norm};
use crate::psi::PsiTarget;
use crate::schwarz::{jet_from_schur, lemma1_bound, lemma1_functional, lemma2_bound, lemma2_functional, sample_params};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "toeplitz", version, about = "Second-order Toeplitz determinant bounds for Ma-Minda convex classes")]
struct Cli {
    #[command(subcommand)]
    command: CommandKind,

    /// Target: halfplane, alpha:<v> or beta:<v>
    #[arg(long, global = true, default_value = "halfplane")]
    psi: String,
    /// Objective evaluations for `search`
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Sample count for `verify` and `highdim`
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = NormArg::L2)]
    norm: NormArg,
    /// Dimension for `highdim`
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance override, e.g. `--tol lemma=1e-10`
    #[arg(long, global = true)]
    tol: Vec<String>,
    /// Parameter grid for `bound`, e.g. `alpha=0:0.9:0.1`; emits CSV
    #[arg(long, global = true)]
    grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Closed-form sharp bound and its gates
    Bound,
    /// Lemma sweeps and oracle cross-checks
    Verify,
    /// Randomized search for the maximum of |T(2,3)|
    Search,
    /// Extremal function and attainment of the bound
    Extremal,
    /// Ball and polydisk checks in several variables
    Highdim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    L2,
    Linf,
}

/// Tolerances used by the commands; each can be overridden by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Lemma inequalities in `verify`.
    pub lemma: f64,
    /// Recurrence against closed forms in `verify`.
    pub oracle: f64,
    /// Search value above the bound.
    pub soundness: f64,
    /// Distance of the search maximum from the bound.
    pub gap: f64,
    /// Bound minus the extremal's value.
    pub attainment: f64,
    /// Several-variable inequalities and extremal equality.
    pub highdim: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lemma: 1e-12,
            oracle: 1e-12,
            soundness: 1e-9,
            gap: 1e-6,
            attainment: 1e-10,
            highdim: 1e-9,
        }
    }
}

impl Tolerances {
    fn set(&mut self, spec: &str) -> std::result::Result<(), String> {
        let (name, v) = spec.split_once('=').ok_or_else(|| format!("--tol expects name=value, got `{spec}`"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("bad tolerance value `{v}`"))?;
        if !(v >= 0.0) {
            return Err(format!("tolerance must be non-negative, got {v}"));
        }
        let slot = match name.trim() {
            "lemma" => &mut self.lemma,
            "oracle" => &mut self.oracle,
            "soundness" => &mut self.soundness,
            "gap" => &mut self.gap,
            "attainment" => &mut self.attainment,
            "highdim" => &mut self.highdim,
            other => return Err(format!("unknown tolerance `{other}`")),
        };
        *slot = v;
        Ok(())
    }
}

/// A parameter sweep `family=lo:hi:step`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub family: String,
    pub values: Vec<f64>,
}

impl Grid {
    fn parse(spec: &str) -> std::result::Result<Self, String> {
        let bad = || format!("--grid expects family=lo:hi:step, got `{spec}`");
        let (family, range) = spec.split_once('=').ok_or_else(bad)?;
        let family = family.trim();
        if family != "alpha" && family != "beta" {
            return Err(format!("grid family must be alpha or beta, got `{family}`"));
        }
        let parts: Vec<f64> = range
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let [lo, hi, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0) || !(hi >= lo) {
            return Err(bad());
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        let values = (0..count).map(|k| lo + k as f64 * step).collect();
        Ok(Self { family: family.to_string(), values })
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub psi: PsiTarget,
    pub budget: usize,
    pub samples: usize,
    pub seed: u64,
    pub n: usize,
    pub norm: Norm,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
    pub grid: Option<Grid>,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> std::result::Result<Self, String> {
        let psi: PsiTarget = cli.psi.parse().map_err(|e: Error| e.to_string())?;
        let default_samples = match cli.command {
            CommandKind::Highdim => 10_000,
            _ => 100_000,
        };
        let budget = cli.budget.unwrap_or(100_000);
        let samples = cli.samples.unwrap_or(default_samples);
        if budget == 0 {
            return Err("--budget must be at least 1".into());
        }
        if samples == 0 {
            return Err("--samples must be at least 1".into());
        }
        if cli.n == 0 {
            return Err("--n must be at least 1".into());
        }
        let mut tol = Tolerances::default();
        for t in &cli.tol {
            tol.set(t)?;
        }
        let grid = cli.grid.as_deref().map(Grid::parse).transpose()?;
        if grid.is_some() && cli.command != CommandKind::Bound {
            return Err("--grid only applies to `bound`".into());
        }
        Ok(Self {
            command: cli.command,
            psi,
            budget,
            samples,
            seed: cli.seed,
            n: cli.n,
            norm: match cli.norm {
                NormArg::L2 => Norm::L2,
                NormArg::Linf => Norm::Linf,
            },
            tol,
            out: cli.out,
            grid,
        })
    }
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// The document written to stdout or `--out`.
    pub body: String,
    pub passed: bool,
    pub summary: String,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.body),
    }
    eprintln!("{}", outcome.summary);
    if outcome.passed {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Bound => match &cfg.grid {
            Some(g) => cmd_bound_grid(g),
            None => cmd_bound(cfg),
        },
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Search => cmd_search(cfg),
        CommandKind::Extremal => cmd_extremal(cfg),
        CommandKind::Highdim => cmd_highdim(cfg),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn bound_json(p: &PsiTarget) -> Result<Value> {
    let r = sharp_bound_t23(p)?;
    Ok(json!({
        "psi": p.label(),
        "jet": p.jet().as_array(),
        "r1": r.r1,
        "r2": r.r2,
        "region": r.region_index,
        "hypothesis_ok": r.hypothesis_ok,
        "bound": r.bound,
    }))
}

pub fn cmd_bound(cfg: &RunConfig) -> Result<Outcome> {
    let r = sharp_bound_t23(&cfg.psi)?;
    Ok(Outcome {
        body: render(&bound_json(&cfg.psi)?),
        passed: true,
        summary: format!("{}: bound {:.15} ({})", cfg.psi.label(), r.bound, r.notes),
    })
}

fn cmd_bound_grid(g: &Grid) -> Result<Outcome> {
    let mut csv = String::from("family,param,r1,r2,region,hypothesis_ok,bound\n");
    for &v in &g.values {
        let p = match g.family.as_str() {
            "alpha" => PsiTarget::order_alpha(v)?,
            _ => PsiTarget::strong_beta(v)?,
        };
        let r = sharp_bound_t23(&p)?;
        let region = r.region_index.map(|i| i.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{:?},{:?},{:?},{},{},{:?}\n",
            g.family, v, r.r1, r.r2, region, r.hypothesis_ok, r.bound
        ));
    }
    Ok(Outcome {
        body: csv,
        passed: true,
        summary: format!("{} grid: {} rows", g.family, g.values.len()),
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    checked: usize,
    violations: usize,
    worst_margin: f64,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, violations: 0, worst_margin: f64::INFINITY }
    }

    fn offer(&mut self, margin: f64, tol: f64) {
        self.checked += 1;
        if !(margin >= -tol) {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }

    fn merge(mut self, o: Self) -> Self {
        self.checked += o.checked;
        self.violations += o.violations;
        self.worst_margin = self.worst_margin.min(o.worst_margin);
        self
    }

    fn json(&self, name: &str) -> Value {
        json!({
            "name": name,
            "checked": self.checked,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        })
    }
}

/// Complex `λ` for the first lemma: moduli up to 5 at eight angles.
pub fn lemma1_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for rho in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        for k in 0..8 {
            out.push(Complex64::from_polar(rho, std::f64::consts::PI * k as f64 / 4.0));
        }
    }
    out
}

/// Real `(ν₁, ν₂)` on a half-unit lattice of `[−6, 6] × [−4, 6]` that fall
/// in one of the seven regions.
pub fn lemma2_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in -12..=12 {
        for j in -8..=12 {
            let (nu1, nu2) = (i as f64 * 0.5, j as f64 * 0.5);
            if region_member(&RegionPoint::real(nu1, nu2)).is_some() {
                out.push((nu1, nu2));
            }
        }
    }
    out
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.psi;
    let tol = cfg.tol;
    let l1 = lemma1_grid();
    let l2 = lemma2_grid();
    let (t1, t2, t3) = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(Tally, Tally, Tally)> {
            let j = jet_from_schur(&sample_params(cfg.seed, i));
            let mut a = Tally::new();
            for &lambda in &l1 {
                a.offer(lemma1_bound(lambda) - lemma1_functional(&j, lambda), tol.lemma);
            }
            let mut b = Tally::new();
            for &(nu1, nu2) in &l2 {
                b.offer(lemma2_bound(nu2) - lemma2_functional(&j, nu1.into(), nu2), tol.lemma);
            }
            let mut c = Tally::new();
            let v = coeffs_from_subordination(p, &j);
            let err = (v.a3 - a3_closed_form(p, &j)?).norm().max((v.a4 - a4_closed_form(p, &j)?).norm());
            c.offer(-err, tol.oracle);
            Ok((a, b, c))
        })
        .try_reduce(
            || (Tally::new(), Tally::new(), Tally::new()),
            |x, y| Ok((x.0.merge(y.0), x.1.merge(y.1), x.2.merge(y.2))),
        )?;

    let adm = p.admissibility_report(4096)?;
    let bound = sharp_bound_t23(p)?;
    let att = verify_attainment(p)?;
    let attained_ok = !bound.certified() || att.gap.abs() <= tol.attainment;

    let passed = t1.violations == 0 && t2.violations == 0 && t3.violations == 0 && adm.passed && attained_ok;
    let report = json!({
        "psi": p.label(),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "checks": [
            t1.json("lemma1"),
            t2.json("lemma2"),
            t3.json("recurrence_vs_closed_form"),
        ],
        "admissible": adm.passed,
        "attainment_gap": att.gap,
        "certified": bound.certified(),
        "passed": passed,
    });
    Ok(Outcome {
        body: render(&report),
        passed,
        summary: format!(
            "verify {}: {} lemma checks, {} violations; oracle worst {:.3e}; {}",
            p.label(),
            t1.checked + t2.checked,
            t1.violations + t2.violations,
            -t3.worst_margin,
            if passed { "PASS" } else { "FAIL" }
        ),
    })
}

pub fn cmd_search(cfg: &RunConfig) -> Result<Outcome> {
    let s = sharpness_search(&cfg.psi, cfg.budget, cfg.seed)?;
    let sound = s.best <= s.bound + cfg.tol.soundness;
    let attained = s.gap <= cfg.tol.gap;
    let passed = sound && (!s.certified || attained);
    let report = json!({
        "psi": cfg.psi.label(),
        "budget": cfg.budget,
        "seed": cfg.seed,
        "bound": s.bound,
        "best": s.best,
        "gap": s.gap,
        "best_gamma": s.best_gamma,
        "evaluations": s.evaluations,
        "certified": s.certified,
    });
    Ok(Outcome {
        body: render(&report),
        passed,
        summary: format!(
            "search {}: best {:.15} of bound {:.15} (gap {:.3e}); {}",
            cfg.psi.label(),
            s.best,
            s.bound,
            s.gap,
            if passed { "PASS" } else { "FAIL" }
        ),
    })
}

pub fn cmd_extremal(cfg: &RunConfig) -> Result<Outcome> {
    let f = build_extremal(&cfg.psi);
    let v = f.coefficients();
    let att = verify_attainment(&cfg.psi)?;
    let certified = sharp_bound_t23(&cfg.psi)?.certified();
    let passed = !certified || att.gap.abs() <= cfg.tol.attainment;
    let series: Vec<[f64; 2]> = f.series.coeffs().iter().map(|&c| pair(c)).collect();
    let report = json!({
        "psi": cfg.psi.label(),
        "series": series,
        "a2": pair(v.a2),
        "a3": pair(v.a3),
        "a4": pair(v.a4),
        "bound": att.bound,
        "attained": att.attained,
        "gap": att.gap,
        "certified": certified,
    });
    Ok(Outcome {
        body: render(&report),
        passed,
        summary: format!(
            "extremal {}: |a3^2 - a4^2| = {:.15}, bound {:.15}, gap {:.3e}",
            cfg.psi.label(),
            att.attained,
            att.bound,
            att.gap
        ),
    })
}

pub fn cmd_highdim(cfg: &RunConfig) -> Result<Outcome> {
    let sweep = soundness_sweep(Some(&cfg.psi), cfg.norm, cfg.n, cfg.samples, cfg.seed)?;
    let eq = equality_gap_at_extremal(&cfg.psi, cfg.norm, cfg.n, &[0.1, 0.5, 0.9])?;
    let passed = sweep.violations == 0 && eq <= cfg.tol.highdim;
    let report = json!({
        "psi": cfg.psi.label(),
        "norm": cfg.norm.name(),
        "n": cfg.n,
        "seed": cfg.seed,
        "checks_run": sweep.checks,
        "violations": sweep.violations,
        "worst_margin": sweep.worst_margin,
        "equality_gap_at_extremal": eq,
    });
    Ok(Outcome {
        body: render(&report),
        passed,
        summary: format!(
            "highdim {} {} n={}: {} checks, {} violations, equality gap {:.3e}",
            cfg.psi.label(),
            cfg.norm.name(),
            cfg.n,
            sweep.checks,
            sweep.violations,
            eq
        ),
    })
}

/// Parses a command line into a validated config (program name first).
pub fn parse_config<I, T>(args: I) -> std::result::Result<RunConfig, String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    RunConfig::from_cli(cli)
}
