//! Command-line harness: runs the laboratory experiments on model or
//! file-supplied tensors, writes a summary JSON (plus per-experiment CSV)
//! into the output directory, and reports through the exit status:
//! 0 success, 1 property failure, 2 usage error, 3 internal assertion.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

use kahler_core::cones::{self, ArgminFrame, CertifyOptions, Condition, Status};
use kahler_core::decomposition::{self, CaseOutcome};
use kahler_core::flow;
use kahler_core::models::{self, ModelSpec};
use kahler_core::rng;
use kahler_core::tensor::{hdot, CVector, KahlerCurvatureTensor, C64};
use kahler_core::variations::{self, VariationFamily};
use kahler_core::{io, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// Verify the product counterexample: identity, cone membership,
    /// isotropic violation.
    VerifyCounterexample,
    /// Certify one positivity condition on a tensor.
    Certify,
    /// Integrate the curvature reaction ODE with monitors.
    Flow,
    /// Check the variation formulas against finite differences.
    Variations,
    /// Detect product structure, classify blocks, apply the case logic.
    Decompose,
    /// Pairwise inequality chain on certified cone samples.
    InequalityChain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditionArg {
    Ohb,
    Hb,
    HolSec,
    Isotropic,
}

impl From<ConditionArg> for Condition {
    fn from(c: ConditionArg) -> Self {
        match c {
            ConditionArg::Ohb => Condition::Ohb,
            ConditionArg::Hb => Condition::Hb,
            ConditionArg::HolSec => Condition::HolSec,
            ConditionArg::Isotropic => Condition::Isotropic,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "kahler-lab",
    about = "Numerical laboratory for algebraic Kähler curvature tensors",
    after_help = "Models: flat:N | fs:N:HOLSEC | surface:KAPPA | counterexample:N\n\
                  Tensor files follow the kct-1 JSON schema (see README)."
)]
struct Cli {
    #[arg(long, value_enum)]
    experiment: Experiment,

    /// Built-in model, e.g. fs:2:4 or example:2.
    #[arg(long)]
    model: Option<String>,

    /// Tensor file in the kct-1 schema; alternative to --model.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Seeds for randomized pieces; repeatable.
    #[arg(long)]
    seed: Vec<u64>,

    /// Primary tolerance of the experiment (defaults are per-experiment).
    #[arg(long)]
    tol: Option<f64>,

    /// Output directory for summary.json and CSV reports.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Time step for flow integration.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,

    /// Horizon for flow integration.
    #[arg(long, default_value_t = 0.1)]
    horizon: f64,

    /// Multi-start count for certifications.
    #[arg(long, default_value_t = 64)]
    starts: usize,

    /// Condition for the certify experiment.
    #[arg(long, value_enum, default_value_t = ConditionArg::Ohb)]
    condition: ConditionArg,

    /// Complex dimension for experiments that draw their own tensors.
    #[arg(long, default_value_t = 2)]
    n: usize,
}

fn parse_model(text: &str) -> Result<KahlerCurvatureTensor, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse_n = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| format!("bad dimension {s:?}: {e}"))
    };
    let parse_f = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| format!("bad number {s:?}: {e}"))
    };
    match parts.as_slice() {
        ["flat", n] => models::make_model(ModelSpec::Flat { n: parse_n(n)? }),
        ["fs", n, h] => models::make_model(ModelSpec::FubiniStudy {
            n: parse_n(n)?,
            hol_sec: parse_f(h)?,
        }),
        ["surface", k] => models::make_model(ModelSpec::Surface { kappa: parse_f(k)? }),
        ["counterexample", n] => {
            let n = parse_n(n)?;
            if n < 1 {
                return Err("counterexample model needs n >= 1".into());
            }
            return Ok(models::counterexample_product(n));
        }
        _ => {
            return Err(format!(
                "unrecognized model {text:?} (flat:N | fs:N:H | surface:K | counterexample:N)"
            ))
        }
    }
    .map_err(|e| e.to_string())
}

struct Ctx {
    cli: Cli,
    seeds: Vec<u64>,
}

impl Ctx {
    fn tensor(&self) -> Result<KahlerCurvatureTensor, CliError> {
        match (&self.cli.model, &self.cli.input) {
            (Some(m), None) => parse_model(m).map_err(CliError::Usage),
            (None, Some(path)) => {
                let loaded = io::load_tensor(path).map_err(|e| CliError::Usage(e.to_string()))?;
                if loaded.was_completed() {
                    eprintln!(
                        "note: {} entries completed from the symmetry orbit, {} defaulted to zero",
                        loaded.completed_entries, loaded.defaulted_entries
                    );
                }
                Ok(loaded.tensor)
            }
            (Some(_), Some(_)) => Err(CliError::Usage(
                "--model and --input are mutually exclusive".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "this experiment needs --model or --input".into(),
            )),
        }
    }

    fn certify_options(&self, seed: u64) -> CertifyOptions {
        CertifyOptions {
            starts: self.cli.starts.max(1),
            tolerance: self.cli.tol.unwrap_or(1e-9),
            seed,
            ..Default::default()
        }
    }
}

enum CliError {
    Usage(String),
    Property(String),
    Internal(String, Option<KahlerCurvatureTensor>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => CliError::Internal(msg, None),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Attaches the tensor an internal assertion tripped on, so the failure can
/// be dumped for diagnosis.
fn with_tensor(e: Error, t: &KahlerCurvatureTensor) -> CliError {
    match e {
        Error::Internal(msg) => CliError::Internal(msg, Some(t.clone())),
        other => other.into(),
    }
}

fn write_summary(out: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    let text = serde_json::to_string_pretty(value).expect("serializable summary");
    std::fs::write(out.join("summary.json"), text + "\n")
}

fn frame_json(frame: &ArgminFrame) -> serde_json::Value {
    let cvec = |v: &CVector| -> serde_json::Value {
        json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
    };
    match frame {
        ArgminFrame::Pair { x, y } => {
            json!({ "kind": "orthonormal-pair", "x": cvec(x), "y": cvec(y) })
        }
        ArgminFrame::UnitPair { x, y } => {
            json!({ "kind": "unit-pair", "x": cvec(x), "y": cvec(y) })
        }
        ArgminFrame::Single { x } => json!({ "kind": "unit-vector", "x": cvec(x) }),
        ArgminFrame::RealFrame { vectors } => json!({
            "kind": "real-4-frame",
            "vectors": vectors.iter().map(|v| v.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    }
}

fn run_verify_counterexample(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let n = ctx.cli.n.max(1);
    let tol = ctx.cli.tol.unwrap_or(1e-10);
    let t = models::counterexample_product(n);
    let seed = ctx.seeds[0];

    let mut r = rng::seeded(seed);
    let mut identity_residual_max = 0.0f64;
    for _ in 0..1000 {
        let (x, y) = rng::random_orthonormal_pair(&mut r, n + 1);
        let lhs = t.bisectional_raw(&x, &y).re;
        let mut rhs = 0.0;
        for i in 1..=n {
            for j in (i + 1)..=n {
                rhs += 2.0 * (x[i] * y[j] - x[j] * y[i]).norm_sqr();
            }
        }
        identity_residual_max = identity_residual_max.max((lhs - rhs).abs());
    }

    let ohb = cones::certify(&t, Condition::Ohb, &ctx.certify_options(seed ^ 1))?;
    let zero_frame_value = match &ohb.argmin {
        ArgminFrame::Pair { x, y } => t.bisectional_raw(x, y).re,
        _ => f64::NAN,
    };
    let iso = cones::certify(&t, Condition::Isotropic, &ctx.certify_options(seed ^ 2))?;
    let oracle = cones::brute::sample_isotropic_min(&t.realify(), 100_000, seed ^ 3);

    let pass = identity_residual_max <= tol
        && ohb.min_value >= -1e-6
        && zero_frame_value.abs() <= 1e-6
        && iso.status == Status::Violated
        && iso.min_value < 0.0
        && iso.min_value <= oracle + 1e-4;
    let summary = json!({
        "experiment": "verify-counterexample",
        "n": n,
        "seeds": ctx.seeds,
        "identity_residual_max": identity_residual_max,
        "identity_tol": tol,
        "ohb_min": ohb.min_value,
        "ohb_status": ohb.status,
        "zero_frame_value": zero_frame_value,
        "isotropic_min": iso.min_value,
        "isotropic_status": iso.status,
        "isotropic_oracle": oracle,
        "pass": pass,
    });
    if pass {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property(format!(
            "verification failed: identity residual {identity_residual_max:.3e}, ohb {:.3e}, isotropic {:.3e} (oracle {oracle:.3e})",
            ohb.min_value, iso.min_value
        )))
    }
}

fn run_certify(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let t = ctx.tensor()?;
    let cond: Condition = ctx.cli.condition.into();
    let res = cones::certify(&t, cond, &ctx.certify_options(ctx.seeds[0]))
        .map_err(|e| with_tensor(e, &t))?;
    let summary = json!({
        "experiment": "certify",
        "condition": res.condition,
        "min_value": res.min_value,
        "status": res.status,
        "starts": res.starts,
        "tolerance": res.tolerance,
        "seeds": ctx.seeds,
        "argmin": frame_json(&res.argmin),
        "pass": res.status == Status::CertifiedNonnegative,
    });
    if res.status == Status::CertifiedNonnegative {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property(format!(
            "{:?} not certified: min {:.6e}, status {:?}",
            cond, res.min_value, res.status
        )))
    }
}

fn run_flow(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let t0 = ctx.tensor()?;
    if !ctx.cli.dt.is_finite()
        || ctx.cli.dt <= 0.0
        || !ctx.cli.horizon.is_finite()
        || ctx.cli.horizon <= 0.0
    {
        return Err(CliError::Usage(
            "flow needs positive --dt and --horizon".into(),
        ));
    }
    let mut opts = flow::FlowOptions::new(ctx.cli.dt, ctx.cli.horizon, 10);
    opts.monitor_seed = ctx.seeds[0];
    let traj = flow::integrate_with(&t0, &opts).map_err(|e| with_tensor(e, &t0))?;

    std::fs::create_dir_all(&ctx.cli.out).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = String::from("time,scalar,ohb_min,min_ricci_eigenvalue,tensor_norm\n");
    for m in &traj.monitors {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            m.time, m.scalar, m.ohb_min, m.min_ricci_eigenvalue, m.tensor_norm
        ));
    }
    std::fs::write(ctx.cli.out.join("trajectory.csv"), csv)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    // Fubini–Study initial data admits a closed-form check.
    let closed_form = ctx.cli.model.as_deref().and_then(|m| {
        let parts: Vec<&str> = m.split(':').collect();
        match parts.as_slice() {
            ["fs", n, h] => {
                let n: usize = n.parse().ok()?;
                let c0: f64 = h.parse::<f64>().ok()? / 2.0;
                let t_final = traj.steps_taken as f64 * ctx.cli.dt;
                let denom = 1.0 - (n as f64 + 1.0) * c0 * t_final;
                if denom <= 0.0 {
                    return None;
                }
                let expect = models::fubini_study(n, 2.0 * c0 / denom);
                let err = traj
                    .final_state()
                    .entries()
                    .iter()
                    .zip(expect.entries().iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                Some(err)
            }
            _ => None,
        }
    });

    let pass = closed_form.is_none_or(|err| err <= ctx.cli.tol.unwrap_or(1e-6));
    let summary = json!({
        "experiment": "flow",
        "dt": ctx.cli.dt,
        "horizon": ctx.cli.horizon,
        "steps_taken": traj.steps_taken,
        "blow_up": traj.blow_up,
        "min_ohb": traj.min_ohb(),
        "final_scalar": traj.final_state().scalar(),
        "final_norm": traj.final_state().frobenius_norm(),
        "closed_form_residual": closed_form,
        "seeds": ctx.seeds,
        "pass": pass,
    });
    if pass {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property(format!(
            "closed-form residual {:.3e} above tolerance",
            closed_form.unwrap_or(f64::NAN)
        )))
    }
}

fn run_variations(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let h_first = 1e-4;
    let h_second = 2e-3;
    let tensors: Vec<KahlerCurvatureTensor> = if ctx.cli.model.is_some() || ctx.cli.input.is_some()
    {
        vec![ctx.tensor()?]
    } else {
        let n = ctx.cli.n.max(3);
        ctx.seeds
            .iter()
            .map(|&s| models::random_tensor(&mut rng::seeded(s), n, 1.0))
            .collect()
    };

    let mut csv = String::from("tensor,family,alpha,beta,mu,analytic,fd,fd_fine,residual,ratio\n");
    let mut worst = 0.0f64;
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = f64::NEG_INFINITY;
    let mut ok = true;
    for (ti, t) in tensors.iter().enumerate() {
        let n = t.n();
        if n < 3 {
            return Err(CliError::Usage(
                "variation sweeps need complex dimension at least 3".into(),
            ));
        }
        let mut r = rng::seeded(ctx.seeds[0] ^ (ti as u64));
        let (alpha, beta, mu) = (0usize, 1usize, 2usize);
        let unit_dir = |r: &mut rng::ChaCha8Rng| -> CVector {
            loop {
                let mut w = rng::random_complex_vector(r, n);
                w[alpha] = C64::new(0.0, 0.0);
                w[beta] = C64::new(0.0, 0.0);
                let norm = hdot(&w, &w).re.sqrt();
                if norm > 1e-6 {
                    return w / C64::new(norm, 0.0);
                }
            }
        };
        let second = VariationFamily::SecondOrder {
            alpha,
            beta,
            omega_alpha: unit_dir(&mut r),
            omega_beta: unit_dir(&mut r),
        };
        let families: Vec<(&str, VariationFamily)> = vec![
            (
                "rotation-real",
                VariationFamily::RotationReal { alpha, beta },
            ),
            (
                "rotation-imag",
                VariationFamily::RotationImag { alpha, beta },
            ),
            (
                "translation-real",
                VariationFamily::TranslationReal { alpha, beta, mu },
            ),
            (
                "translation-imag",
                VariationFamily::TranslationImag { alpha, beta, mu },
            ),
            (
                "translation-beta-slot",
                VariationFamily::TranslationBetaSlot { alpha, beta, mu },
            ),
            ("second-order", second.clone()),
        ];
        let mut push = |name: &str, analytic: f64, fd: f64, fd_fine: f64| {
            let residual = (analytic - fd_fine).abs();
            let coarse = (analytic - fd).abs();
            let ratio = if residual > 1e-11 {
                coarse / residual
            } else {
                f64::NAN
            };
            worst = worst.max(residual);
            if residual > 1e-5 {
                ok = false;
            }
            if ratio.is_finite() {
                ratio_lo = ratio_lo.min(ratio);
                ratio_hi = ratio_hi.max(ratio);
                if !(3.5..=4.5).contains(&ratio) {
                    ok = false;
                }
            }
            csv.push_str(&format!(
                "{ti},{name},{alpha},{beta},{mu},{analytic},{fd},{fd_fine},{residual},{ratio}\n"
            ));
        };
        for (name, fam) in &families {
            let analytic = variations::first_variation(t, fam)?;
            let fd = variations::fd_first_variation(t, fam, h_first)?;
            let fd_fine = variations::fd_first_variation(t, fam, h_first / 2.0)?;
            push(name, analytic, fd, fd_fine);
        }
        let analytic = variations::second_variation(t, &second)?;
        let fd = variations::fd_second_variation(t, &second, h_second)?;
        let fd_fine = variations::fd_second_variation(t, &second, h_second / 2.0)?;
        push("second-order-curvature", analytic, fd, fd_fine);
    }
    std::fs::create_dir_all(&ctx.cli.out).map_err(|e| CliError::Usage(e.to_string()))?;
    std::fs::write(ctx.cli.out.join("fd_table.csv"), csv)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let summary = json!({
        "experiment": "variations",
        "tensors": tensors.len(),
        "worst_fine_residual": worst,
        "ratio_min": ratio_lo,
        "ratio_max": ratio_hi,
        "seeds": ctx.seeds,
        "pass": ok,
    });
    if ok {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property(format!(
            "finite-difference verification failed: worst residual {worst:.3e}, ratios [{ratio_lo:.2}, {ratio_hi:.2}]"
        )))
    }
}

fn run_decompose(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let t = ctx.tensor()?;
    let tol = ctx.cli.tol.unwrap_or(1e-8);
    let structure = decomposition::detect_blocks_seeded(&t, tol, ctx.seeds[0])
        .map_err(|e| with_tensor(e, &t))?;
    let rotated = t.conjugate_frame(&structure.change_of_frame)?;
    let mins: Vec<f64> = structure
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let sub = rotated.restrict(&b.indices);
            cones::certify(
                &sub,
                Condition::HolSec,
                &ctx.certify_options(ctx.seeds[0] ^ i as u64),
            )
            .map(|r| r.min_value)
        })
        .collect::<Result<_, _>>()?;
    let report =
        decomposition::classification_case(&structure, &mins, &vec![true; structure.blocks.len()])?;
    let pass = !matches!(report.outcome, CaseOutcome::Violation { .. });
    let summary = json!({
        "experiment": "decompose",
        "tol": tol,
        "block_sizes": structure.block_sizes(),
        "degeneracy_warning": structure.degeneracy_warning,
        "blocks": report.blocks,
        "cross_bounds": report.cross_bounds,
        "outcome": report.outcome,
        "seeds": ctx.seeds,
        "pass": pass,
    });
    if pass {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property("cross-factor bound violated".into()))
    }
}

fn run_inequality_chain(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    let n = ctx.cli.n.max(2);
    let tol = ctx.cli.tol.unwrap_or(1e-8);
    let mut min_value = f64::INFINITY;
    let mut per_seed = Vec::new();
    for &seed in &ctx.seeds {
        let t = models::sample_cone(seed, n)?;
        let report = cones::derived_inequalities(&t, tol);
        min_value = min_value.min(report.min_value);
        per_seed.push(json!({ "seed": seed, "min_value": report.min_value }));
    }
    let pass = min_value >= -tol;
    let summary = json!({
        "experiment": "inequality-chain",
        "n": n,
        "tol": tol,
        "min_value": min_value,
        "per_seed": per_seed,
        "pass": pass,
    });
    if pass {
        Ok(summary)
    } else {
        write_summary(&ctx.cli.out, &summary).map_err(|e| CliError::Usage(e.to_string()))?;
        Err(CliError::Property(format!(
            "inequality chain dipped to {min_value:.3e}"
        )))
    }
}

fn run(ctx: &Ctx) -> Result<serde_json::Value, CliError> {
    if let Some(tol) = ctx.cli.tol {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    match ctx.cli.experiment {
        Experiment::VerifyCounterexample => run_verify_counterexample(ctx),
        Experiment::Certify => run_certify(ctx),
        Experiment::Flow => run_flow(ctx),
        Experiment::Variations => run_variations(ctx),
        Experiment::Decompose => run_decompose(ctx),
        Experiment::InequalityChain => run_inequality_chain(ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seeds = if cli.seed.is_empty() {
        vec![0]
    } else {
        cli.seed.clone()
    };
    let ctx = Ctx { cli, seeds };
    match run(&ctx) {
        Ok(summary) => {
            if let Err(e) = write_summary(&ctx.cli.out, &summary) {
                eprintln!("error: could not write summary: {e}");
                return ExitCode::from(2);
            }
            println!("{}", summary["pass"]);
            ExitCode::SUCCESS
        }
        Err(CliError::Property(msg)) => {
            eprintln!("property failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg, tensor)) => {
            eprintln!("internal assertion: {msg}");
            if let Some(t) = tensor {
                let path = ctx.cli.out.join("diagnostic_tensor.json");
                if std::fs::create_dir_all(&ctx.cli.out).is_ok() {
                    if let Ok(json) = io::tensor_to_json(&t) {
                        let _ = std::fs::write(&path, json);
                        eprintln!("offending tensor dumped to {}", path.display());
                    }
                }
            }
            ExitCode::from(3)
        }
    }
}
