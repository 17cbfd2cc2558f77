//! Scenario runners. Each runner is callable directly (returning a typed
//! outcome for programmatic use) and through `run_scenario`, which also
//! emits CSV/JSON/SVG artifacts plus a digest manifest.

use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::nn::{
    build_mlp, init_two_layer, stable_learning_rate, train, train_mlp, InitConfig, Mlp,
    MlpTrainConfig, TrainConfig, TrainRecord,
};
use crate::plot::{write_heatmap, write_line_plot, Axes, Series};
use crate::rng::RandomSource;
use crate::spectral::{
    convergence_per_frequency, error_vs_n_scaling, generalization_bound, nudft_raw,
    ConvergenceCurves, ScalingReport, SpectralProfile,
};
use crate::spline::{kernel_weights_from_stats, steady_state, KernelInterpolant};
use crate::Real;

use super::compare::{compare_predictors, ComparisonTable};
use super::config::{
    CustomParams, Fig1Params, Fig3Params, Fig4Params, ParityParams, ScalingParams, Scenario,
    ScenarioConfig,
};
use super::manifest::{ArtifactLog, RunManifest};

/// Executes the configured scenario and writes all artifacts plus
/// `manifest.json` into `out_dir`.
pub fn run_scenario(
    config: &ScenarioConfig,
    out_dir: impl AsRef<Path>,
    paper_scale: bool,
) -> Result<RunManifest> {
    config.validate()?;
    let started = Instant::now();
    let mut log = ArtifactLog::new(out_dir.as_ref())?;
    let config_json = serde_json::to_string_pretty(config)?;
    std::fs::write(log.path("config.json"), &config_json)?;
    log.record("config.json")?;
    let stage = |name: &str, e: FplError| {
        FplError::Numerical(format!("stage '{name}' failed: {e}"))
    };
    match &config.scenario {
        Scenario::Fig1TwoTone(p) => {
            run_fig1(p, config.seed, Some(&mut log)).map_err(|e| stage("fig1_two_tone", e))?;
        }
        Scenario::Fig3Splines(p) => {
            let mut p = p.clone();
            if paper_scale {
                p.m = 40_000;
            }
            run_fig3(&p, config.seed, Some(&mut log)).map_err(|e| stage("fig3_splines", e))?;
        }
        Scenario::Fig4Xor(p) => {
            let mut p = p.clone();
            if paper_scale {
                p.m = 160_000;
            }
            run_fig4(&p, config.seed, Some(&mut log)).map_err(|e| stage("fig4_xor", e))?;
        }
        Scenario::Parity(p) => {
            run_parity(p, config.seed, Some(&mut log)).map_err(|e| stage("parity", e))?;
        }
        Scenario::ScalingLaw(p) => {
            run_scaling(p, config.seed, Some(&mut log)).map_err(|e| stage("scaling_law", e))?;
        }
        Scenario::Custom(p) => {
            run_custom(p, config.seed, Some(&mut log)).map_err(|e| stage("custom", e))?;
        }
    }
    log.finish(
        config.scenario.id(),
        &config_json,
        config.seed,
        started.elapsed().as_secs_f64(),
    )
}

fn linspace(lo: Real, hi: Real, n: usize) -> Vec<Real> {
    (0..n).map(|i| lo + (hi - lo) * i as Real / (n - 1) as Real).collect()
}

fn two_tone(x: Real) -> Real {
    x.sin() + (5.0 * x).sin()
}

// ---------------------------------------------------------------------
// Two-tone target: low frequency first
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct Fig1Outcome {
    pub eta: Real,
    pub record: TrainRecord,
    pub curves: ConvergenceCurves,
    /// Convergence times at the low (k=1) and high (k=5) tone peaks.
    pub tau_low: Option<Real>,
    pub tau_high: Option<Real>,
}

pub fn run_fig1(p: &Fig1Params, seed: u64, log: Option<&mut ArtifactLog>) -> Result<Fig1Outcome> {
    let source = RandomSource::new(seed);
    let xs = linspace(p.domain.0, p.domain.1, p.n);
    let dataset = Dataset::from_fn(xs.iter().map(|&x| vec![x]).collect(), |x| two_tone(x[0]))?;
    let eval_xs = linspace(p.domain.0, p.domain.1, p.eval_points);
    let eval_grid: Vec<Vec<Real>> = eval_xs.iter().map(|&x| vec![x]).collect();
    let eval_target: Vec<Real> = eval_xs.iter().map(|&x| two_tone(x)).collect();

    let mut net = init_two_layer(
        p.m,
        1,
        &InitConfig { sigma_a: p.sigma_a, sigma_w: p.sigma_w, sigma_c: p.sigma_c, asi: true, stratified: false },
        &source,
    )?;
    let eta = match p.eta {
        Some(e) => e,
        None => stable_learning_rate(&net, &dataset, 1.0)?,
    };
    let checkpoints: Vec<usize> =
        (1..=p.max_steps / p.checkpoint_every).map(|i| i * p.checkpoint_every).collect();
    let record = train(
        &mut net,
        &dataset,
        &eval_grid,
        &TrainConfig { eta, max_steps: p.max_steps, loss_tolerance: 0.0, checkpoints },
    )?;

    let times: Vec<Real> = record.checkpoints.iter().map(|c| eta * c.step as Real).collect();
    let preds: Vec<Vec<Real>> = record.checkpoints.iter().map(|c| c.eval.clone()).collect();
    // domain spans one period of the slow tone, so after the [0,1] projection
    // rescale the tones sit at k = 1 and k = 5 cycles
    let curves = convergence_per_frequency(
        &preds,
        &times,
        &eval_target,
        &eval_grid,
        &[1.0],
        &[1.0, 5.0],
    )?;
    let (tau_low, tau_high) = (curves.tau[0], curves.tau[1]);

    if let Some(log) = log {
        dataset.write_csv(log.path("train_points.csv"))?;
        log.record("train_points.csv")?;
        curves.write_csv(log.path("convergence.csv"))?;
        log.record("convergence.csv")?;
        let mut wtr = csv::Writer::from_path(log.path("checkpoint_eval.csv"))?;
        let mut header = vec!["x".to_string(), "target".to_string()];
        header.extend(record.checkpoints.iter().map(|c| format!("step_{}", c.step)));
        wtr.write_record(&header)?;
        for (i, &x) in eval_xs.iter().enumerate() {
            let mut row = vec![format!("{x}"), format!("{}", eval_target[i])];
            row.extend(record.checkpoints.iter().map(|c| format!("{}", c.eval[i])));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        log.record("checkpoint_eval.csv")?;

        let summary = serde_json::json!({
            "eta": eta,
            "steps_run": record.steps_run,
            "final_loss": record.final_loss,
            "tau_low": tau_low,
            "tau_high": tau_high,
        });
        std::fs::write(log.path("summary.json"), serde_json::to_string_pretty(&summary)?)?;
        log.record("summary.json")?;

        // pick early/mid/final checkpoints for the overlay
        let picks = [
            record.checkpoints.len() / 8,
            record.checkpoints.len() / 3,
            record.checkpoints.len() - 1,
        ];
        let mut series =
            vec![Series::line("target", eval_xs.clone(), eval_target.clone())];
        for &pi in &picks {
            let c = &record.checkpoints[pi];
            series.push(Series::line(format!("step {}", c.step), eval_xs.clone(), c.eval.clone()));
        }
        write_line_plot(
            log.path("overlay.svg"),
            &Axes {
                title: "two-tone fit over training".into(),
                x_label: "x".into(),
                y_label: "f(x)".into(),
                ..Default::default()
            },
            &series,
        )?;
        log.record("overlay.svg")?;

        let conv_series: Vec<Series> = curves
            .peaks
            .iter()
            .zip(&curves.curves)
            .map(|(k, c)| Series::line(format!("k = {k}"), curves.times.clone(), c.clone()))
            .collect();
        write_line_plot(
            log.path("convergence.svg"),
            &Axes {
                title: "relative spectral error at the tone peaks".into(),
                x_label: "t".into(),
                y_label: "delta".into(),
                ..Default::default()
            },
            &conv_series,
        )?;
        log.record("convergence.svg")?;
    }
    Ok(Fig1Outcome { eta, record, curves, tau_low, tau_high })
}

// ---------------------------------------------------------------------
// Spline equivalence in the two initialization regimes
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct Fig3Outcome {
    pub eta: Real,
    pub final_loss: Real,
    pub stats: (Real, Real),
    /// NN prediction, matched-kernel spline, and the other regime's spline
    /// on the evaluation grid.
    pub eval_xs: Vec<Real>,
    pub nn: Vec<Real>,
    pub matched_spline: Vec<Real>,
    pub other_spline: Vec<Real>,
    /// Relative L2 difference between NN and the matched spline.
    pub rel_l2: Real,
    pub table: ComparisonTable,
}

pub fn regime_init(regime: &str, sigma_c: Real) -> Result<InitConfig> {
    match regime {
        "a" => Ok(InitConfig { sigma_a: 1e-2, sigma_w: 1.0, sigma_c, asi: true, stratified: true }),
        "b" => Ok(InitConfig { sigma_a: 10.0, sigma_w: 10.0, sigma_c, asi: true, stratified: true }),
        other => Err(FplError::Config(format!("regime must be \"a\" or \"b\", got '{other}'"))),
    }
}

pub fn run_fig3(p: &Fig3Params, seed: u64, log: Option<&mut ArtifactLog>) -> Result<Fig3Outcome> {
    let source = RandomSource::new(seed);
    let mut rng = source.split("data").rng();
    let (lo, hi) = p.domain;
    let points: Vec<Vec<Real>> = {
        // keep points separated so the interpolation problems stay benign
        let mut xs: Vec<Real> = (0..p.n)
            .map(|i| {
                let cell = lo + (hi - lo) * i as Real / p.n as Real;
                cell + rng.gen_range(0.1..0.9) * (hi - lo) / p.n as Real
            })
            .collect();
        xs.sort_by(Real::total_cmp);
        xs.into_iter().map(|x| vec![x]).collect()
    };
    let values: Vec<Real> = points.iter().map(|x| 0.1 * (std::f64::consts::PI * x[0]).sin()).collect();
    let _ = &mut rng;
    let dataset = Dataset::new(points, values)?;

    let init = regime_init(&p.regime, p.sigma_c)?;
    let mut net = init_two_layer(p.m, 1, &init, &source)?;
    let (a_stat, b_stat) = net.init_stats();
    let eta = match p.eta {
        Some(e) => e,
        None => stable_learning_rate(&net, &dataset, 1.0)?,
    };
    let record = train(
        &mut net,
        &dataset,
        &[],
        &TrainConfig {
            eta,
            max_steps: p.max_steps,
            loss_tolerance: p.loss_tolerance,
            checkpoints: vec![],
        },
    )?;
    if !record.converged {
        return Err(FplError::Numerical(format!(
            "did not reach loss {} within {} steps (final {:.3e})",
            p.loss_tolerance, p.max_steps, record.final_loss
        )));
    }

    let linear = steady_state(&dataset, &kernel_weights_from_stats(0.0, b_stat, 1)?)?;
    let cubic = steady_state(&dataset, &kernel_weights_from_stats(a_stat, 0.0, 1)?)?;
    let eval_xs = linspace(lo, hi, p.eval_points);
    let nn: Vec<Real> = eval_xs.iter().map(|&x| net.forward(&[x])).collect();
    let lin_eval: Vec<Real> = eval_xs.iter().map(|&x| linear.evaluate(&[x])).collect();
    let cub_eval: Vec<Real> = eval_xs.iter().map(|&x| cubic.evaluate(&[x])).collect();
    // regime (b) makes B dominate -> linear spline; regime (a) -> cubic
    let (matched_spline, other_spline, matched_name, other_name) = if p.regime == "b" {
        (lin_eval, cub_eval, "linear_spline", "cubic_spline")
    } else {
        (cub_eval, lin_eval, "cubic_spline", "linear_spline")
    };
    let table = compare_predictors(&[
        ("nn", &nn),
        (matched_name, &matched_spline),
        (other_name, &other_spline),
    ])?;
    let rel_l2 = {
        // normalize by the matched spline so tiny NN artifacts do not inflate it
        let diff2: Real =
            nn.iter().zip(&matched_spline).map(|(a, b)| (a - b) * (a - b)).sum();
        let norm2: Real = matched_spline.iter().map(|v| v * v).sum();
        (diff2 / norm2).sqrt()
    };

    if let Some(log) = log {
        dataset.write_csv(log.path("train_points.csv"))?;
        log.record("train_points.csv")?;
        let mut wtr = csv::Writer::from_path(log.path("predictions.csv"))?;
        wtr.write_record(["x", "nn", matched_name, other_name])?;
        for (i, &x) in eval_xs.iter().enumerate() {
            wtr.write_record(&[
                format!("{x}"),
                format!("{}", nn[i]),
                format!("{}", matched_spline[i]),
                format!("{}", other_spline[i]),
            ])?;
        }
        wtr.flush()?;
        log.record("predictions.csv")?;
        let summary = serde_json::json!({
            "regime": p.regime,
            "eta": eta,
            "steps_run": record.steps_run,
            "final_loss": record.final_loss,
            "measured_a": a_stat,
            "measured_b": b_stat,
            "rel_l2_nn_vs_matched": rel_l2,
            "comparison": table,
        });
        std::fs::write(log.path("summary.json"), serde_json::to_string_pretty(&summary)?)?;
        log.record("summary.json")?;
        write_line_plot(
            log.path("overlay.svg"),
            &Axes {
                title: format!("regime ({}) fit vs kernel steady states", p.regime),
                x_label: "x".into(),
                y_label: "f(x)".into(),
                ..Default::default()
            },
            &[
                Series::line("nn", eval_xs.clone(), nn.clone()),
                Series::line(matched_name, eval_xs.clone(), matched_spline.clone()),
                Series::line(other_name, eval_xs.clone(), other_spline.clone()),
                Series::scatter(
                    "data",
                    dataset.points().iter().map(|p| p[0]).collect(),
                    dataset.values().to_vec(),
                ),
            ],
        )?;
        log.record("overlay.svg")?;
    }
    Ok(Fig3Outcome {
        eta,
        final_loss: record.final_loss,
        stats: (a_stat, b_stat),
        eval_xs,
        nn,
        matched_spline,
        other_spline,
        rel_l2,
        table,
    })
}

// ---------------------------------------------------------------------
// XOR: kernel prediction of a trained network over the whole square
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct Fig4Outcome {
    pub eta: Real,
    pub final_loss: Real,
    pub stats: (Real, Real),
    pub grid: Vec<Vec<Real>>,
    pub nn: Vec<Real>,
    pub lfp: Vec<Real>,
    pub pearson: Real,
    pub slope: Real,
}

pub fn run_fig4(p: &Fig4Params, seed: u64, log: Option<&mut ArtifactLog>) -> Result<Fig4Outcome> {
    let source = RandomSource::new(seed);
    let points =
        vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]];
    let dataset = Dataset::from_fn(points, |x| x[0] * x[1])?;

    let mut net = init_two_layer(
        p.m,
        2,
        &InitConfig { sigma_a: p.sigma_a, sigma_w: p.sigma_w, sigma_c: p.sigma_c, asi: true, stratified: false },
        &source,
    )?;
    let (a_stat, b_stat) = net.init_stats();
    let eta = match p.eta {
        Some(e) => e,
        None => stable_learning_rate(&net, &dataset, 1.0)?,
    };
    let record = train(
        &mut net,
        &dataset,
        &[],
        &TrainConfig {
            eta,
            max_steps: p.max_steps,
            loss_tolerance: p.loss_tolerance,
            checkpoints: vec![],
        },
    )?;

    let interp: KernelInterpolant =
        steady_state(&dataset, &kernel_weights_from_stats(a_stat, b_stat, 2)?)?;
    let axis = linspace(-1.0, 1.0, p.grid);
    let mut grid = Vec::with_capacity(p.grid * p.grid);
    for &y in &axis {
        for &x in &axis {
            grid.push(vec![x, y]);
        }
    }
    let nn: Vec<Real> = grid.iter().map(|q| net.forward(q)).collect();
    let lfp: Vec<Real> = grid.iter().map(|q| interp.evaluate(q)).collect();
    let table = compare_predictors(&[("lfp", &lfp), ("nn", &nn)])?;
    let (pearson, slope) = (table.pairs[0].pearson, table.pairs[0].slope);

    if let Some(log) = log {
        dataset.write_csv(log.path("train_points.csv"))?;
        log.record("train_points.csv")?;
        let mut wtr = csv::Writer::from_path(log.path("grid_predictions.csv"))?;
        wtr.write_record(["x0", "x1", "nn", "lfp"])?;
        for (q, (a, b)) in grid.iter().zip(nn.iter().zip(&lfp)) {
            wtr.write_record(&[
                format!("{}", q[0]),
                format!("{}", q[1]),
                format!("{a}"),
                format!("{b}"),
            ])?;
        }
        wtr.flush()?;
        log.record("grid_predictions.csv")?;
        let summary = serde_json::json!({
            "eta": eta,
            "steps_run": record.steps_run,
            "final_loss": record.final_loss,
            "measured_a": a_stat,
            "measured_b": b_stat,
            "pearson": pearson,
            "identity_slope": slope,
            "comparison": table,
        });
        std::fs::write(log.path("summary.json"), serde_json::to_string_pretty(&summary)?)?;
        log.record("summary.json")?;
        for (name, vals) in [("nn_heatmap.svg", &nn), ("lfp_heatmap.svg", &lfp)] {
            write_heatmap(
                log.path(name),
                &Axes {
                    title: name.trim_end_matches(".svg").replace('_', " "),
                    x_label: "x0".into(),
                    y_label: "x1".into(),
                    ..Default::default()
                },
                vals,
                p.grid,
                p.grid,
                (-1.0, 1.0),
                (-1.0, 1.0),
            )?;
            log.record(name)?;
        }
        write_line_plot(
            log.path("identity_scatter.svg"),
            &Axes {
                title: "kernel prediction vs trained network".into(),
                x_label: "f_lfp".into(),
                y_label: "f_nn".into(),
                ..Default::default()
            },
            &[
                Series::scatter("grid", lfp.clone(), nn.clone()),
                Series::line("identity", vec![-1.2, 1.2], vec![-1.2, 1.2]),
            ],
        )?;
        log.record("identity_scatter.svg")?;
    }
    Ok(Fig4Outcome {
        eta,
        final_loss: record.final_loss,
        stats: (a_stat, b_stat),
        grid,
        nn,
        lfp,
        pearson,
        slope,
    })
}

// ---------------------------------------------------------------------
// Parity: the designed failure case
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct ParityOutcome {
    pub train_accuracy: Real,
    pub test_accuracy: Real,
    pub epochs_run: usize,
    pub final_loss: Real,
    /// Diagonal-direction spectrum of the exact parity target.
    pub spectrum: SpectralProfile,
    /// |k| of the amplitude argmax over the spectrum grid.
    pub peak_abs_k: Real,
}

fn parity_corners(dim: usize) -> Vec<Vec<Real>> {
    let n = 1usize << dim;
    (0..n)
        .map(|mask| {
            (0..dim).map(|j| if mask >> j & 1 == 1 { 1.0 } else { -1.0 }).collect()
        })
        .collect()
}

pub fn run_parity(
    p: &ParityParams,
    seed: u64,
    log: Option<&mut ArtifactLog>,
) -> Result<ParityOutcome> {
    let source = RandomSource::new(seed);
    let corners = parity_corners(p.dim);
    let parity = |x: &[Real]| x.iter().product::<Real>();
    let mut order: Vec<usize> = (0..corners.len()).collect();
    order.shuffle(&mut source.split("split").rng());
    let n_train = ((corners.len() as Real) * p.train_fraction).round() as usize;
    let take = |ids: &[usize]| -> Result<Dataset<Real>> {
        Dataset::from_fn(ids.iter().map(|&i| corners[i].clone()).collect(), |x| parity(x))
    };
    let train_set = take(&order[..n_train])?;
    let test_set = take(&order[n_train..])?;

    let mut widths = vec![p.dim];
    widths.extend(&p.widths);
    widths.push(1);
    let mut net: Mlp = build_mlp(&widths, &source)?;
    let record = train_mlp(
        &mut net,
        &train_set,
        &MlpTrainConfig {
            eta: p.eta,
            max_steps: p.max_epochs,
            loss_tolerance: 0.0,
            check_every: p.check_every,
            stop_at_full_sign_accuracy: true,
        },
    )?;
    let train_accuracy = net.sign_accuracy(&train_set)?;
    let test_accuracy = net.sign_accuracy(&test_set)?;

    // spectrum of the exact target along the main diagonal; with unit
    // direction u = 1/sqrt(d) the lattice coordinate is sum(x)/sqrt(d), so
    // frequencies are queried at k*sqrt(d) to mean k cycles per axis
    let dirn = vec![1.0 / (p.dim as Real).sqrt(); p.dim];
    let ks = linspace(-p.spectrum_k_max, p.spectrum_k_max, p.spectrum_k_points);
    let ks_scaled: Vec<Real> = ks.iter().map(|k| k * (p.dim as Real).sqrt()).collect();
    let all_values: Vec<Real> = corners.iter().map(|c| parity(c)).collect();
    let mut spectrum = nudft_raw(&corners, &all_values, &dirn, &ks_scaled, "parity_target")?;
    spectrum.frequencies = ks.clone();
    let peak_idx = spectrum
        .amplitudes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    let peak_abs_k = ks[peak_idx].abs();

    if let Some(log) = log {
        spectrum.write_csv(log.path("target_spectrum.csv"))?;
        log.record("target_spectrum.csv")?;
        let mut wtr = csv::Writer::from_path(log.path("loss.csv"))?;
        wtr.write_record(["epoch", "loss"])?;
        for (step, loss) in &record.losses {
            wtr.write_record(&[format!("{step}"), format!("{loss}")])?;
        }
        wtr.flush()?;
        log.record("loss.csv")?;
        let summary = serde_json::json!({
            "train_accuracy": train_accuracy,
            "test_accuracy": test_accuracy,
            "epochs_run": record.steps_run,
            "final_loss": record.final_loss,
            "spectrum_peak_abs_k": peak_abs_k,
        });
        std::fs::write(log.path("summary.json"), serde_json::to_string_pretty(&summary)?)?;
        log.record("summary.json")?;
        write_line_plot(
            log.path("target_spectrum.svg"),
            &Axes {
                title: "parity target spectrum along the diagonal".into(),
                x_label: "k (cycles per axis)".into(),
                y_label: "amplitude".into(),
                ..Default::default()
            },
            &[Series::line("|F|", ks, spectrum.amplitudes.clone())],
        )?;
        log.record("target_spectrum.svg")?;
    }
    Ok(ParityOutcome {
        train_accuracy,
        test_accuracy,
        epochs_run: record.steps_run,
        final_loss: record.final_loss,
        spectrum,
        peak_abs_k,
    })
}

// ---------------------------------------------------------------------
// Error-vs-n scaling
// ---------------------------------------------------------------------

pub fn run_scaling(
    p: &ScalingParams,
    seed: u64,
    log: Option<&mut ArtifactLog>,
) -> Result<ScalingReport> {
    let kernel = kernel_weights_from_stats(p.a, p.b, 1)?;
    let target = |x: Real| (1.5 * x).sin() + 0.2 * (60.0 * x).cos();
    let report = error_vs_n_scaling(
        &target,
        &kernel,
        &p.n_values,
        p.trials,
        &RandomSource::new(seed),
    )?;
    if let Some(log) = log {
        report.write_json(log.path("scaling.json"))?;
        log.record("scaling.json")?;
        if let Some(&worst) = report
            .mean_mse
            .first()
            .filter(|_| !report.degenerate)
        {
            let bound = generalization_bound(worst.sqrt(), p.n_values[0], p.delta, p.c_gamma)?
                .with_measured_error(worst);
            bound.write_json(log.path("bound.json"))?;
            log.record("bound.json")?;
        }
        if !report.degenerate {
            let xs: Vec<Real> = report.n_values.iter().map(|&n| (n as Real).log10()).collect();
            let ys: Vec<Real> = report.mean_mse.iter().map(|m| m.log10()).collect();
            write_line_plot(
                log.path("scaling.svg"),
                &Axes {
                    title: "mean-square error vs sample count".into(),
                    x_label: "log10 n".into(),
                    y_label: "log10 mse".into(),
                    ..Default::default()
                },
                &[Series::line("mse", xs, ys)],
            )?;
            log.record("scaling.svg")?;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// Custom 1-d problem through the full dynamics pipeline
// ---------------------------------------------------------------------

pub fn run_custom(
    p: &CustomParams,
    seed: u64,
    log: Option<&mut ArtifactLog>,
) -> Result<crate::lfp::ReducedFlow> {
    use crate::gamma::GammaSpec;
    use crate::lattice::FrequencyLattice;
    use crate::lfp::ReducedFlow;

    let target: Box<dyn Fn(Real) -> Real> = match p.target.as_str() {
        "two_tone" => Box::new(two_tone),
        "sine" => {
            let f = p.freq;
            Box::new(move |x: Real| (f * x).sin())
        }
        "dataset" => Box::new(|_| 0.0), // values come from the file
        other => return Err(FplError::Config(format!("unknown target '{other}'"))),
    };
    let dataset = if p.target == "dataset" {
        Dataset::read_csv(p.dataset_path.as_ref().expect("validated"))?
    } else {
        let mut rng = RandomSource::new(seed).split("data").rng();
        let pts: Vec<Vec<Real>> =
            (0..p.n).map(|_| vec![rng.gen_range(p.domain.0..p.domain.1)]).collect();
        Dataset::from_fn(pts, |x| target(x[0]))?
    };
    if dataset.dim() != 1 {
        return Err(FplError::Config("custom scenario is one-dimensional".into()));
    }

    let gamma = GammaSpec::power_law(p.a, p.b, 1)?;
    let lattice = FrequencyLattice::build(1, p.xi_max, p.delta_xi, p.delta_xi / 2.0)?;
    let flow = ReducedFlow::new(&dataset, &gamma, &lattice)?;
    let trajectory = flow.evolve(p.t_end, p.checkpoints)?;

    if let Some(log) = log {
        dataset.write_csv(log.path("train_points.csv"))?;
        log.record("train_points.csv")?;
        trajectory.write_csv(log.path("trajectory.csv"))?;
        log.record("trajectory.csv")?;
        let eval_xs = linspace(p.domain.0, p.domain.1, p.eval_points);
        let steady: Vec<Real> = eval_xs.iter().map(|&x| flow.predict_steady(&[x])).collect();
        let ending: Vec<Real> = eval_xs.iter().map(|&x| flow.predict(&[x], p.t_end)).collect();
        let mut wtr = csv::Writer::from_path(log.path("prediction.csv"))?;
        wtr.write_record(["x", "h_t_end", "h_steady"])?;
        for (i, &x) in eval_xs.iter().enumerate() {
            wtr.write_record(&[format!("{x}"), format!("{}", ending[i]), format!("{}", steady[i])])?;
        }
        wtr.flush()?;
        log.record("prediction.csv")?;
        write_line_plot(
            log.path("prediction.svg"),
            &Axes {
                title: "dynamics endpoint and steady state".into(),
                x_label: "x".into(),
                y_label: "h(x)".into(),
                ..Default::default()
            },
            &[
                Series::line("h at t_end", eval_xs.clone(), ending),
                Series::line("steady state", eval_xs.clone(), steady),
                Series::scatter(
                    "data",
                    dataset.points().iter().map(|p| p[0]).collect(),
                    dataset.values().to_vec(),
                ),
            ],
        )?;
        log.record("prediction.svg")?;
        let losses = trajectory.losses();
        write_line_plot(
            log.path("loss.svg"),
            &Axes {
                title: "training loss".into(),
                x_label: "t".into(),
                y_label: "loss".into(),
                ..Default::default()
            },
            &[Series::line("loss", trajectory.times().to_vec(), losses.to_vec())],
        )?;
        log.record("loss.svg")?;
    }
    Ok(flow)
}
