use crate::args::{DynamicsArgs, StabilityArgs, SubdivisionArgs, SweepArgs};
use crate::output::{num, write_report, Echo, Table};
use meanforce::bath::ModeCount;
use meanforce::dynamics::{evolve_covariance_with_tol, uniform_grid, DEFAULT_MODE_TOL};
use meanforce::equilibrium::DEFAULT_TOL;
use meanforce::stability::DEFAULT_CRITICAL_TOL;
use meanforce::thermo::{hybridization_free_energy_spectral, subdivision_potential, vartheta};
use meanforce::{characteristic_roots, classify, Classification, GaussianState, ModelParams};
use rayon::prelude::*;
use std::fmt;
use std::process::ExitCode;

/// Route disagreement accepted by `subdivision` unless `--tol` says otherwise.
pub const DEFAULT_ROUTE_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Model(meanforce::Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        use meanforce::Error as E;
        ExitCode::from(match self {
            Failure::Usage(_) => 64,
            Failure::Model(
                E::InvalidParameter { .. }
                | E::Domain(_)
                | E::Pole(_)
                | E::PoleCollision { .. }
                | E::StabilityViolation { .. }
                | E::CriticalPoint(_),
            ) => 65,
            Failure::Model(_) => 70,
            Failure::Io(_) => 74,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Model(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<meanforce::Error> for Failure {
    fn from(e: meanforce::Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn echo_model(echo: &mut Echo, omega_s: f64, beta: f64, gamma: f64) {
    echo.value("omega-s", omega_s)
        .value("beta", beta)
        .value("temperature", 1.0 / beta)
        .value("gamma", gamma);
}

pub fn stability(args: &StabilityArgs) -> Result<ExitCode, Failure> {
    let c = &args.common;
    let beta = args.temperature.beta();
    let tol = c.tol.unwrap_or(DEFAULT_CRITICAL_TOL);
    let params = ModelParams::drude(c.omega_s, beta, args.eta, c.gamma)?;
    let report = classify(&params, tol)?;
    let roots = characteristic_roots(&params);

    let mut echo = Echo::new("stability");
    echo_model(&mut echo, c.omega_s, beta, c.gamma);
    echo.value("eta", args.eta).value("tol", tol);

    let mut entries = vec![
        ("classification".to_string(), report.classification.to_string()),
        ("chi_static".to_string(), num(report.chi_static)),
        ("hurwitz_pass".to_string(), report.hurwitz_pass.to_string()),
        ("max_real_root".to_string(), num(report.max_real_root)),
        ("critical_band".to_string(), num(tol * c.omega_s)),
    ];
    for (k, r) in roots.roots.iter().enumerate() {
        entries.push((format!("root{}_re", k + 1), num(r.re)));
        entries.push((format!("root{}_im", k + 1), num(r.im)));
    }
    let column: Vec<String> = report.routh_first_column.iter().map(|&v| num(v)).collect();
    entries.push(("routh_first_column".to_string(), column.join(" ")));
    write_report(c.out.as_deref(), &echo, &entries)?;

    Ok(ExitCode::from(match report.classification {
        Classification::Stable => 0,
        Classification::Critical => 1,
        Classification::Unstable => 2,
    }))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                a
            } else if i + 1 == n {
                b
            } else {
                x.exp()
            }
        })
        .collect()
}

pub fn sweep_eta(args: &SweepArgs) -> Result<ExitCode, Failure> {
    let c = &args.common;
    let beta = args.temperature.beta();
    let tol = c.tol.unwrap_or(DEFAULT_TOL);
    if !(0.0 <= args.eta_min && args.eta_min <= args.eta_max) {
        return Err(usage("need 0 <= eta-min <= eta-max"));
    }
    ModelParams::drude(c.omega_s, beta, args.eta_min, c.gamma)?;
    let etas = linspace(args.eta_min, args.eta_max, args.eta_steps as usize);
    let band = DEFAULT_CRITICAL_TOL * c.omega_s;

    let rows: Vec<[String; 4]> = etas
        .par_iter()
        .map(|&eta| -> Result<[String; 4], Failure> {
            let gap = c.omega_s - 2.0 * eta;
            if gap.abs() < band {
                return Ok([num(eta), String::new(), String::new(), "critical".into()]);
            }
            if gap < 0.0 {
                return Ok([num(eta), String::new(), String::new(), "0".into()]);
            }
            let params = ModelParams::drude(c.omega_s, beta, eta, c.gamma)?;
            let a_hyb = hybridization_free_energy_spectral(&params, tol)?;
            let stable = classify(&params, DEFAULT_CRITICAL_TOL)?.classification == Classification::Stable;
            Ok([
                num(eta),
                num(a_hyb),
                num(vartheta(&params, 0.0)),
                if stable { "1" } else { "0" }.into(),
            ])
        })
        .collect::<Result<_, _>>()?;

    let mut echo = Echo::new("sweep-eta");
    echo_model(&mut echo, c.omega_s, beta, c.gamma);
    echo.value("eta-min", args.eta_min)
        .value("eta-max", args.eta_max)
        .text("eta-steps", args.eta_steps.to_string())
        .value("tol", tol)
        .value("critical-band", band);
    let mut table = Table::create(c.out.as_deref(), &echo, &["eta", "a_hyb", "vartheta0", "stable_flag"])?;
    for r in &rows {
        table.row(r)?;
    }
    table.finish()?;
    Ok(ExitCode::SUCCESS)
}

pub fn dynamics(args: &DynamicsArgs) -> Result<ExitCode, Failure> {
    let c = &args.common;
    let beta = args.temperature.beta();
    let tol = c.tol.unwrap_or(DEFAULT_MODE_TOL);
    if !(args.t_max > 0.0 && args.dt > 0.0) {
        return Err(usage("t-max and dt must be positive"));
    }
    let steps = (args.t_max / args.dt).round();
    if steps < 1.0 || (steps * args.dt - args.t_max).abs() > 1e-9 * args.t_max {
        return Err(usage("t-max must be a whole multiple of dt"));
    }
    let params = ModelParams::drude(c.omega_s, beta, args.eta, c.gamma)?;
    let mut initial = GaussianState::thermal(&params, args.q0, args.p0);
    initial.sigma_qq = args.sigma_qq.unwrap_or(initial.sigma_qq);
    initial.sigma_pp = args.sigma_pp.unwrap_or(initial.sigma_pp);
    initial.sigma_qp = args.sigma_qp.unwrap_or(initial.sigma_qp);
    let modes = args.modes.map_or(ModeCount::Adaptive, |n| ModeCount::Fixed(n as usize));
    let grid = uniform_grid(args.t_max, steps as usize);
    let tr = evolve_covariance_with_tol(&initial, &params, &grid, modes, tol)?;

    let mut echo = Echo::new("dynamics");
    echo_model(&mut echo, c.omega_s, beta, c.gamma);
    echo.value("eta", args.eta)
        .value("t-max", args.t_max)
        .value("dt", args.dt)
        .value("q0", initial.q_mean)
        .value("p0", initial.p_mean)
        .value("sigma-qq", initial.sigma_qq)
        .value("sigma-pp", initial.sigma_pp)
        .value("sigma-qp", initial.sigma_qp)
        .text("modes", args.modes.map_or("adaptive".to_string(), |n| n.to_string()))
        .value("tol", tol)
        .text("matsubara-modes-used", tr.n_matsubara.to_string())
        .value("matsubara-tail-weight", tr.tail_weight);
    for w in &tr.warnings {
        echo.text("warning", w.clone());
    }
    let columns = ["t", "q_mean", "p_mean", "sigma_qq", "sigma_pp", "sigma_qp"];
    let mut table = Table::create(c.out.as_deref(), &echo, &columns)?;
    for (t, s) in tr.times.iter().zip(&tr.states) {
        table.row([*t, s.q_mean, s.p_mean, s.sigma_qq, s.sigma_pp, s.sigma_qp].map(num))?;
    }
    if let Some(t) = tr.diverged_at {
        table.row([
            num(t),
            "diverged".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ])?;
    }
    table.finish()?;
    Ok(ExitCode::SUCCESS)
}

pub fn subdivision(args: &SubdivisionArgs) -> Result<ExitCode, Failure> {
    let c = &args.common;
    let tol = c.tol.unwrap_or(DEFAULT_ROUTE_TOL);
    if !(args.temp_min > 0.0 && args.temp_min <= args.temp_max) {
        return Err(usage("need 0 < temp-min <= temp-max"));
    }
    if args.eta.iter().any(|&e| e < 0.0) {
        return Err(usage("eta values must be non-negative"));
    }
    let temps = logspace(args.temp_min, args.temp_max, args.temp_steps as usize);
    let points: Vec<(f64, f64)> = args
        .eta
        .iter()
        .flat_map(|&e| temps.iter().map(move |&t| (e, t)))
        .collect();

    let rows: Vec<[String; 6]> = points
        .par_iter()
        .map(|&(eta, temp)| -> Result<[String; 6], Failure> {
            let params = ModelParams::drude(c.omega_s, 1.0 / temp, eta, c.gamma)?;
            let marker = |detail: String| {
                [
                    num(temp),
                    num(eta),
                    "error".into(),
                    String::new(),
                    String::new(),
                    detail,
                ]
            };
            Ok(match subdivision_potential(&params) {
                Ok(r) if r.route_disagreement <= tol => [
                    num(temp),
                    num(eta),
                    num(r.subdivision),
                    num(r.s_therm - r.s_beta),
                    num(r.s_ent - r.s_beta),
                    num(r.route_disagreement),
                ],
                Ok(r) => {
                    eprintln!(
                        "meanforce: T={temp} eta={eta}: route disagreement {} exceeds tol",
                        r.route_disagreement
                    );
                    marker(num(r.route_disagreement))
                }
                Err(e) => {
                    eprintln!("meanforce: T={temp} eta={eta}: {e}");
                    marker(String::new())
                }
            })
        })
        .collect::<Result<_, _>>()?;

    let mut echo = Echo::new("subdivision");
    echo.value("omega-s", c.omega_s)
        .value("gamma", c.gamma)
        .list("eta", &args.eta);
    echo.value("temp-min", args.temp_min)
        .value("temp-max", args.temp_max)
        .text("temp-steps", format!("{} (log spaced)", args.temp_steps))
        .value("tol", tol);
    let columns = [
        "T",
        "eta",
        "subdivision",
        "delta_s_therm",
        "delta_s_ent",
        "route_disagreement",
    ];
    let mut table = Table::create(c.out.as_deref(), &echo, &columns)?;
    for r in &rows {
        table.row(r)?;
    }
    table.finish()?;
    Ok(ExitCode::SUCCESS)
}
