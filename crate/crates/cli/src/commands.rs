//! The four experiments.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qrisk::ae::{qpe_probabilities, run_ae};
use qrisk::approx::ApproxParams;
use qrisk::circuits::{
    amplitude_estimation_circuit, cnot_count, BinaryPolynomial, PolynomialSpec, ResourceReport,
};
use qrisk::finance::{
    daily_differences, load_cmt, pca, synthetic_cmt, tbill_distribution, tbill_problem,
    write_pca_csv, RateSeries, TwoAssetConfig, TwoAssetModel,
};
use qrisk::qsim::{Circuit, NoiseModel};
use qrisk::risk::{
    cdf_problem, classical_oracle, convergence_study, expectation_problem, monte_carlo_baseline,
    monte_carlo_report, noise_study, noisy_ae_circuit, quantum_report, AESettings,
    ConvergenceConfig, RiskReport, ScalingRule, StudyProblem,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    Common, ConvergenceArgs, ConvergenceProblem, DataSource, NoiseArgs, PortfolioArgs, TbillArgs,
};

/// Files written under the output directory, in creation order.
pub struct Output {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Output> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write_with(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> Result<()>,
    ) -> Result<()> {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        body(&mut w).with_context(|| format!("writing {}", path.display()))?;
        w.flush()
            .with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_with(name, |w| Ok(w.write_all(text.as_bytes())?))
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        self.write_with(name, |w| {
            let mut out = csv::Writer::from_writer(w);
            for r in rows {
                out.serialize(r)?;
            }
            out.flush()?;
            Ok(())
        })
    }

    fn json(&mut self, name: &str, value: &serde_json::Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.text(name, &text)
    }
}

#[derive(Serialize)]
struct GateRow {
    m: usize,
    cnots: usize,
    ancillas: usize,
    ratio: Option<f64>,
}

fn gate_rows(counts: &[(usize, ResourceReport)]) -> Vec<GateRow> {
    counts
        .iter()
        .enumerate()
        .map(|(k, (m, r))| GateRow {
            m: *m,
            cnots: r.cnot_total,
            ancillas: r.ancillas,
            ratio: (k > 0).then(|| r.cnot_total as f64 / counts[k - 1].1.cnot_total as f64),
        })
        .collect()
}

fn write_circuits(
    out: &mut Output,
    common: &Common,
    prefix: &str,
    circuits: &[(usize, Circuit)],
) -> Result<()> {
    if common.report_gates {
        let counts = circuits
            .iter()
            .map(|(m, c)| Ok((*m, cnot_count(c)?)))
            .collect::<Result<Vec<_>>>()?;
        out.csv(&format!("{prefix}_gates.csv"), &gate_rows(&counts))?;
    }
    if common.dump_circuit {
        for (m, c) in circuits {
            out.text(&format!("{prefix}_m{m}.circuit"), &c.to_text())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HistogramRow {
    m: usize,
    y: u64,
    estimate: f64,
    count: u64,
    probability: f64,
}

#[derive(Serialize)]
struct TbillRow {
    m: usize,
    #[serde(rename = "M")]
    samples: u64,
    modal_y: u64,
    estimate: f64,
    low: f64,
    high: f64,
    shots: u64,
    seed: u64,
    error: f64,
    mc_half_width: f64,
}

pub fn tbill(args: &TbillArgs) -> Result<Output> {
    let mut out = Output::new(&args.common.out)?;
    let seed = args.common.seed;
    let dist = tbill_distribution(args.p)?;
    let mut histogram = Vec::new();
    let mut table = Vec::new();
    let mut circuits = Vec::new();
    for m in 1..=args.m {
        let problem = tbill_problem(args.p, m)?;
        let probs = qpe_probabilities(&problem)?;
        let r = run_ae(&problem, args.shots, seed)?;
        for (y, &p) in probs.iter().enumerate() {
            histogram.push(HistogramRow {
                m,
                y: y as u64,
                estimate: qrisk::ae::estimate_for(y as u64, m),
                count: r.counts.get(y as u64),
                probability: p,
            });
        }
        let mc = monte_carlo_baseline(&dist, &BinaryPolynomial::bit(0), 1 << m, seed)?;
        let rec = r.record();
        table.push(TbillRow {
            m,
            samples: rec.samples,
            modal_y: rec.modal_y,
            estimate: rec.estimate,
            low: rec.low,
            high: rec.high,
            shots: rec.shots,
            seed: rec.seed,
            error: (r.estimate - args.p).abs(),
            mc_half_width: mc.half_width,
        });
        if args.common.report_gates || args.common.dump_circuit {
            circuits.push((m, amplitude_estimation_circuit(&problem)?));
        }
    }
    out.csv("tbill_histograms.csv", &histogram)?;
    out.csv("tbill_errors.csv", &table)?;
    write_circuits(&mut out, &args.common, "tbill", &circuits)?;
    Ok(out)
}

fn load_series(data: &DataSource, days: u64, seed: u64) -> Result<RateSeries> {
    match &data.data {
        Some(path) => {
            let s = load_cmt(path).with_context(|| format!("loading {}", path.display()))?;
            if s.len() < 3 {
                bail!(
                    "{} has {} complete rows; at least 3 are needed",
                    path.display(),
                    s.len()
                );
            }
            Ok(s)
        }
        None => Ok(synthetic_cmt(days as usize, seed)),
    }
}

fn model_json(model: &TwoAssetModel, series: &RateSeries) -> serde_json::Value {
    let lin = &model.linearization;
    json!({
        "rows": series.len(),
        "first_date": series.dates.first().map(|d| d.to_string()),
        "last_date": series.dates.last().map(|d| d.to_string()),
        "tenors": [model.config.tenors.0, model.config.tenors.1],
        "loadings": [[model.loadings[(0, 0)], model.loadings[(0, 1)]], [model.loadings[(1, 0)], model.loadings[(1, 1)]]],
        "shift_probabilities": model.shift.dist.probs(),
        "shift_clipped": model.shift.clipped,
        "twist_probabilities": model.twist.dist.probs(),
        "twist_clipped": model.twist.clipped,
        "linearization": {
            "v_mid": lin.v_mid, "x_mid": lin.x_mid, "y_mid": lin.y_mid,
            "gx": lin.gx, "gy": lin.gy, "intercept": lin.intercept(),
            "f_min": lin.f_min, "f_max": lin.f_max,
            "n0": lin.n0, "nx": lin.nx, "ny": lin.ny,
        },
        "today": model.today,
        "value_grid": model.values.grid(),
        "value_probabilities": model.values.probs(),
    })
}

fn two_asset(data: &DataSource, days: u64, seed: u64) -> Result<(RateSeries, TwoAssetModel)> {
    let series = load_series(data, days, seed)?;
    let model = TwoAssetModel::fit(&series, TwoAssetConfig::default())
        .context("fitting the two-asset model")?;
    Ok((series, model))
}

fn params(c: f64, u: u32) -> ApproxParams {
    ApproxParams::new(c, u as usize)
}

pub fn portfolio(args: &PortfolioArgs) -> Result<Output> {
    let mut out = Output::new(&args.common.out)?;
    let seed = args.common.seed;
    let (series, model) = two_asset(&args.data, args.days, seed)?;

    let full = pca(&daily_differences(&series)?)?;
    out.write_with("pca.csv", |w| Ok(write_pca_csv(&full, &series.tenors, w)?))?;
    out.json("model.json", &model_json(&model, &series))?;

    let dist = &model.values;
    let bits = dist.num_qubits();
    let top = (dist.len() - 1) as f64;
    let f = BinaryPolynomial::from_index_polynomial(&PolynomialSpec::linear(1.0 / top, 0.0), bits);
    let oracle = classical_oracle(dist, &f, args.alpha)?;
    let mc = monte_carlo_report(dist, &f, args.alpha, args.mc_samples, seed)?;
    let encoding = params(args.encoding.c, args.encoding.u);
    let mut reports = vec![oracle.clone(), mc.clone()];
    out.text("report_oracle.json", &(oracle.to_json() + "\n"))?;
    out.text("report_monte_carlo.json", &(mc.to_json() + "\n"))?;
    for m in 1..=args.m {
        let r = quantum_report(
            dist,
            &f,
            args.alpha,
            &encoding,
            AESettings::new(m, args.shots, seed),
        )
        .with_context(|| format!("quantum estimation at m = {m}"))?;
        out.text(&format!("report_quantum_m{m}.json"), &(r.to_json() + "\n"))?;
        reports.push(r);
    }
    out.write_with("reports.csv", |w| Ok(RiskReport::write_csv(&reports, w)?))?;

    if args.common.report_gates || args.common.dump_circuit {
        let level = oracle.var_index.expect("oracle reports VaR");
        let circuits = (1..=args.m)
            .map(|m| {
                Ok((
                    m,
                    amplitude_estimation_circuit(&cdf_problem(dist, level, m)?)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        write_circuits(&mut out, &args.common, "var", &circuits)?;
    }
    Ok(out)
}

pub fn noise_sweep(args: &NoiseArgs) -> Result<Output> {
    if args.m < 2 {
        bail!("the estimate 0.5 needs at least 2 evaluation qubits");
    }
    let mut out = Output::new(&args.common.out)?;
    let seed = args.common.seed;
    let (_, model) = two_asset(&args.data, args.days, seed)?;
    let encoding = params(args.encoding.c, args.encoding.u);
    let problem = expectation_problem(&model.joint, &model.objective, &encoding, args.m)?;
    let base = NoiseModel {
        t_cnot: args.t_cnot,
        trajectories: args.trajectories as usize,
        seed,
        ..NoiseModel::default()
    };
    let cells = noise_study(&problem, 0.5, &args.gamma, &args.crosstalk, base)?;
    out.csv("noise.csv", &cells)?;
    if args.common.report_gates || args.common.dump_circuit {
        write_circuits(
            &mut out,
            &args.common,
            "noise",
            &[(args.m, noisy_ae_circuit(&problem)?)],
        )?;
    }
    Ok(out)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<Output> {
    let (problem, first) = match args.problem {
        ConvergenceProblem::Tbill => (StudyProblem::TBill { p: args.p }, 1),
        ConvergenceProblem::Bernoulli => (
            StudyProblem::RandomBernoulli {
                scaling: ScalingRule::Optimal { u: args.u as usize },
            },
            2,
        ),
    };
    if args.m < first {
        bail!("--m must be at least {first} for this problem");
    }
    let mut out = Output::new(&args.common.out)?;
    let config = ConvergenceConfig {
        problem,
        m_range: (first..=args.m).collect(),
        trials: args.trials as usize,
        shots: args.shots,
        seed: args.common.seed,
    };
    let table = convergence_study(&config)?;
    out.csv("convergence.csv", &table.rows)?;
    out.json(
        "convergence_summary.json",
        &json!({
            "quantum_slope": table.quantum_slope,
            "mc_slope": table.mc_slope,
            "trials": args.trials,
            "shots": args.shots,
            "seed": args.common.seed,
        }),
    )?;
    if args.common.report_gates || args.common.dump_circuit {
        let circuits = config
            .m_range
            .iter()
            .map(|&m| Ok((m, amplitude_estimation_circuit(&tbill_problem(args.p, m)?)?)))
            .collect::<Result<Vec<_>>>()?;
        write_circuits(&mut out, &args.common, "convergence", &circuits)?;
    }
    Ok(out)
}
