use meanforce::equilibrium::equilibrium_variances;
use meanforce::ModelParams;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn meanforce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanforce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

struct Csv {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(bytes: &[u8]) -> Csv {
        let text = std::str::from_utf8(bytes).unwrap();
        assert!(text.ends_with("\r\n"), "records end in CRLF");
        let comments = text
            .lines()
            .filter(|l| l.starts_with('#'))
            .map(str::to_string)
            .collect();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = reader.headers().unwrap().iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|r| r.unwrap().iter().map(str::to_string).collect())
            .collect();
        Csv { comments, header, rows }
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().filter_map(|r| r[i].parse().ok()).collect()
    }

    fn echo(&self, key: &str) -> Option<&str> {
        let prefix = format!("# {key} = ");
        self.comments.iter().find_map(|c| c.strip_prefix(&prefix))
    }
}

#[test]
fn stability_exit_codes() {
    for (eta, code, label) in [("0.2", 0, "stable"), ("0.5", 1, "critical"), ("0.8", 2, "unstable")] {
        let out = meanforce(&["stability", "--eta", eta, "--gamma", "2"]);
        assert_eq!(out.status.code(), Some(code), "eta={eta}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains(&format!("classification={label}\n")));
        for key in ["chi_static=", "root3_im=", "routh_first_column=", "hurwitz_pass="] {
            assert!(text.contains(key), "missing {key}");
        }
    }
}

#[test]
fn bad_flags_exit_64() {
    for args in [
        &["stability", "--no-such-flag"][..],
        &["stability", "--beta", "2", "--temperature", "0.5"],
        &["stability", "--eta", "abc"],
        &["sweep-eta", "--eta", "0.2"],
        &["dynamics", "--threads", "0"],
        &["dynamics", "--t-max", "1", "--dt", "0.3"],
        &["frobnicate"],
    ] {
        assert_eq!(meanforce(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(meanforce(&["--help"]).status.code(), Some(0));
}

#[test]
fn model_errors_exit_above_two() {
    let out = meanforce(&["stability", "--gamma", "-1"]);
    assert!(out.status.code().unwrap() > 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("gamma"));
}

#[test]
fn sweep_eta_rows() {
    let out = meanforce(&["sweep-eta"]);
    assert!(out.status.success());
    let csv = Csv::parse(&out.stdout);
    assert_eq!(csv.header, ["eta", "a_hyb", "vartheta0", "stable_flag"]);
    assert_eq!(csv.rows[0][..3], ["0.0", "0.0", "0.0"]);
    let last = csv.rows.last().unwrap();
    assert_eq!(last, &["0.5", "", "", "critical"]);
    let a = csv.column("a_hyb");
    assert_eq!(a.len(), csv.rows.len() - 1);
    assert!(a.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(csv.echo("beta"), Some("5.0"));
}

#[test]
fn sweep_beyond_critical_marks_unstable_rows() {
    let csv = Csv::parse(&meanforce(&["sweep-eta", "--eta-min", "0.4", "--eta-max", "0.6", "--eta-steps", "3"]).stdout);
    assert_eq!(csv.rows[1], ["0.5", "", "", "critical"]);
    assert_eq!(csv.rows[2], ["0.6", "", "", "0"]);
    assert_eq!(csv.rows[0][3], "1");
}

#[test]
fn headers_echo_every_parameter() {
    let out = meanforce(&["dynamics", "--t-max", "2", "--dt", "0.5", "--sigma-qp", "0.05"]);
    let csv = Csv::parse(&out.stdout);
    assert_eq!(
        csv.header,
        ["t", "q_mean", "p_mean", "sigma_qq", "sigma_pp", "sigma_qp"]
    );
    assert!(csv.echo("tool").unwrap().starts_with("meanforce "));
    assert_eq!(csv.echo("units"), Some("Omega_S = hbar = k_B = 1"));
    for key in [
        "omega-s",
        "beta",
        "temperature",
        "gamma",
        "eta",
        "t-max",
        "dt",
        "q0",
        "p0",
        "sigma-qq",
        "sigma-pp",
        "tol",
    ] {
        assert!(csv.echo(key).is_some(), "missing {key}");
    }
    assert_eq!(csv.echo("sigma-qp"), Some("0.05"));
    assert_eq!(csv.rows.len(), 5);
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("run{i}.csv"));
        let out = meanforce(&[
            "subdivision",
            "--temp-steps",
            "30",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# recipe\neta = 0.8\nbeta = 2\ngamma = 2\n").unwrap();
    let conf = conf.to_str().unwrap();
    let out = meanforce(&["stability", "--config", conf]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("# beta = 2.0"));
    let out = meanforce(&["stability", "--config", conf, "--eta", "0.2", "--temperature", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# eta = 0.2") && text.contains("# temperature = 0.5"));

    std::fs::write(dir.path().join("bad.conf"), "eta 0.2\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(
        meanforce(&["stability", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        meanforce(&["stability", "--config", "/nonexistent.conf"]).status.code(),
        Some(64)
    );
    std::fs::write(dir.path().join("unknown.conf"), "colour = blue\n").unwrap();
    let unknown = dir.path().join("unknown.conf");
    assert_eq!(
        meanforce(&["stability", "--config", unknown.to_str().unwrap()])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn stable_dynamics_settles_on_equilibrium() {
    let conf = configs().join("dynamics-stable.conf");
    let csv = Csv::parse(&meanforce(&["dynamics", "--config", conf.to_str().unwrap()]).stdout);
    let eq = equilibrium_variances(&ModelParams::drude(1.0, 5.0, 0.2, 2.0).unwrap(), 1e-12).unwrap();
    let (qq, pp) = (csv.column("sigma_qq"), csv.column("sigma_pp"));
    assert!((qq.last().unwrap() / eq.var_q - 1.0).abs() < 1e-3);
    assert!((pp.last().unwrap() / eq.var_p - 1.0).abs() < 1e-3);
    assert_eq!(csv.column("t").last(), Some(&60.0));
}

#[test]
fn critical_dynamics_spreads() {
    let conf = configs().join("dynamics-critical.conf");
    let csv = Csv::parse(&meanforce(&["dynamics", "--config", conf.to_str().unwrap()]).stdout);
    let (t, qq) = (csv.column("t"), csv.column("sigma_qq"));
    let n = t.len();
    let k = 3 * n / 4;
    let slope = (qq[n - 1] - qq[k]) / (t[n - 1] - t[k]);
    assert!(slope > 0.5);
}

#[test]
fn unstable_dynamics_ends_with_marker() {
    let conf = configs().join("dynamics-unstable.conf");
    let csv = Csv::parse(&meanforce(&["dynamics", "--config", conf.to_str().unwrap()]).stdout);
    let last = csv.rows.last().unwrap();
    assert_eq!(last[1], "diverged");
    assert!(last[2..].iter().all(String::is_empty));
    let t: f64 = last[0].parse().unwrap();
    assert!(t > 20.0 && t < 40.0);
}

#[test]
fn subdivision_reproduces_temperature_profile() {
    let conf = configs().join("subdivision.conf");
    let csv = Csv::parse(&meanforce(&["subdivision", "--config", conf.to_str().unwrap()]).stdout);
    assert_eq!(
        csv.header,
        [
            "T",
            "eta",
            "subdivision",
            "delta_s_therm",
            "delta_s_ent",
            "route_disagreement"
        ]
    );
    for eta in ["0.15", "0.3", "0.45"] {
        let rows: Vec<&Vec<String>> = csv.rows.iter().filter(|r| r[1] == eta).collect();
        assert_eq!(rows.len(), 120);
        let (t_min, _) = rows
            .iter()
            .map(|r| (r[0].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap()))
            .fold((0.0, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best });
        assert!((0.1..=0.4).contains(&t_min), "eta={eta}: minimum at T={t_min}");
        assert!(rows.iter().all(|r| r[5].parse::<f64>().unwrap() < 1e-6));
    }
}

#[test]
fn subdivision_marks_unstable_rows() {
    let out = meanforce(&["subdivision", "--eta", "0.7", "--temp-steps", "2"]);
    assert!(out.status.success());
    let csv = Csv::parse(&out.stdout);
    assert!(csv.rows.iter().all(|r| r[2] == "error"));
}
