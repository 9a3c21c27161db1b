mod common;

use common::*;

const QUARTER_PERIOD: &str = r#"{
  "model": "jcm",
  "initial_state": {"r": 1, "theta": 0, "phi": 0},
  "params": {"g": 1, "delta": 0},
  "time_grid": {"t_start": 0, "t_end": 3.141592653589793, "samples": 5},
  "measures": ["LN"]
}"#;

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn resonant_jcm_hits_one_at_quarter_period() {
    let cfg = scratch("q.json", QUARTER_PERIOD);
    let out = stdout(&run(&["run", cfg.to_str().unwrap()]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,LN");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[2], "0.78539816339744828,1.0000000000000000");
    assert_eq!(lines[1], "0.0000000000000000,0.0000000000000000");
}

#[test]
fn exit_codes() {
    let s = |name: &str, text: String| scratch(name, &text).to_str().unwrap().to_string();
    let eoe_mixed = s("a.json", QUARTER_PERIOD.replace("\"r\": 1", "\"r\": 0.5").replace("LN", "EOE"));
    assert_eq!(code(&["run", &eoe_mixed]), 2);
    let empty_sweep = s(
        "b.json",
        QUARTER_PERIOD.replace("\"measures\"", "\"sweep\": {\"parameter\": \"delta\", \"values\": []},\n  \"measures\""),
    );
    assert_eq!(code(&["sweep", &empty_sweep]), 2);
    let broken = s("c.json", QUARTER_PERIOD.replace('}', ""));
    assert_eq!(code(&["run", &broken]), 1);
    let unknown_model = s("d.json", QUARTER_PERIOD.replace("\"jcm\"", "\"rabi\""));
    assert_eq!(code(&["run", &unknown_model]), 1);
    assert_eq!(code(&["run", "/nonexistent/scenario.json"]), 1);
    let plain = s("e.json", QUARTER_PERIOD.to_string());
    // sweep without a sweep block, poles of a model without a pole report
    assert_eq!(code(&["sweep", &plain]), 2);
    assert_eq!(code(&["poles", &plain]), 2);
    assert_eq!(code(&["run", &plain, "--plot-script"]), 2);
    assert_eq!(code(&["run", &plain, "--workers", "0"]), 2);
    assert_eq!(code(&["run", &plain, "--bogus"]), 1);
    let bad_param = s("f.json", QUARTER_PERIOD.replace("\"g\": 1", "\"g\": -1"));
    assert_eq!(code(&["run", &bad_param]), 2);
    let poles_only = config("cavity_poles_resonant.json");
    assert_eq!(code(&["run", poles_only.to_str().unwrap()]), 2);
    // a decoupled atom has no decaying pole to scale time by
    let frozen = s(
        "g.json",
        std::fs::read_to_string(config("cavity_longtime.json")).unwrap().replace("\"lambda\": 0.05", "\"lambda\": 0.0"),
    );
    let o = run(&["run", &frozen]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical failure"));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let cfg = config("two_mode_detuning_sweep.json");
    let c = cfg.to_str().unwrap();
    let one = stdout(&run(&["sweep", c, "--workers", "1"]));
    let four = stdout(&run(&["sweep", c, "--workers", "4"]));
    let env = bin().args(["sweep", c]).env("ENTANGLEDYN_WORKERS", "3").output().unwrap();
    assert_eq!(one, four);
    assert_eq!(one, stdout(&env));
    assert_eq!(one, stdout(&run(&["sweep", c, "--workers", "1"])));
    // rows ordered by t, then by sweep value
    let (header, rows) = parse_csv(&one);
    assert_eq!(header, ["t", "EOE", "abs_u", "sweep_value"]);
    for w in rows.windows(2) {
        assert!(w[0][0] < w[1][0] || (w[0][0] == w[1][0] && w[0][3] < w[1][3]));
    }
}

#[test]
fn out_file_and_plot_script() {
    let dir = scratch("marker", "").with_file_name("plot-out");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("sweep.csv");
    let cfg = config("jcm_detuning_sweep.json");
    let o = run(&["sweep", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--plot-script"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,LN,abs_u,sweep_value\n"));
    let gp = std::fs::read_to_string(dir.join("sweep.csv.gp")).unwrap();
    assert!(gp.contains("set datafile separator ','"));
    assert!(gp.contains("'sweep.csv'"));
    assert!(gp.contains("multiplot"));
}

#[test]
fn single_mode_pole_report() {
    let cfg = scratch(
        "m1.json",
        r#"{"model": "multimode", "params": {"deltas": [0], "couplings": [1]},
            "time_grid": {"t_start": 0, "t_end": 1, "samples": 2}, "measures": ["abs_u"]}"#,
    );
    let (header, rows) = parse_csv(&stdout(&run(&["poles", cfg.to_str().unwrap()])));
    assert_eq!(header, ["re_z", "im_z", "weight_re", "weight_im", "method", "secular_residual"]);
    assert_eq!(rows.len(), 2);
    let mut im: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    im.sort_by(f64::total_cmp);
    assert!((im[0] + 1.0).abs() < 1e-14 && (im[1] - 1.0).abs() < 1e-14);
    for r in &rows {
        assert!((r[2] - 0.5).abs() < 1e-14 && r[3] == 0.0 && r[5] < 1e-14);
    }
}

#[test]
fn cavity_pole_reports() {
    let text = stdout(&run(&["poles", config("cavity_poles_resonant.json").to_str().unwrap()]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["re_z", "im_z", "weight_re", "weight_im", "method"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(text.matches(",numeric\n").count(), 2);
    assert!(rows.iter().all(|r| r[0] <= 0.0));

    let text = stdout(&run(&["poles", config("cavity_poles_offresonant.json").to_str().unwrap()]));
    let (_, rows) = parse_csv(&text);
    assert!(text.contains(",numeric\n") && text.contains(",perturbative\n"));
    let dz = (rows[0][0] - rows[1][0]).hypot(rows[0][1] - rows[1][1]);
    assert!(dz < 1e-5, "{dz}");
}

#[test]
fn weak_ladder_poles_follow_perturbation_theory() {
    let cfg = scratch(
        "lq2.json",
        r#"{"model": "ladder", "params": {"q": 2, "g": 1, "delta": 1, "big_delta": 1e4, "omega0": 1e7},
            "time_grid": {"t_start": 0, "t_end": 1, "samples": 2}, "measures": ["abs_u"]}"#,
    );
    let (_, rows) = parse_csv(&stdout(&run(&["poles", cfg.to_str().unwrap()])));
    assert_eq!(rows.len(), 6);
    let approx = entangledyn::multimode::perturbative_poles(2, 1.0, 1.0, 1e4, 1e7).unwrap();
    for p in approx {
        let best = rows.iter().map(|r| (r[0] - p.re).hypot(r[1] - p.im) / p.norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-6, "{p}: {best}");
    }
}

#[test]
fn cavity_time_axis_is_in_decay_units() {
    let (header, rows) = parse_csv(&stdout(&run(&["run", config("cavity_longtime.json").to_str().unwrap()])));
    assert_eq!(header, ["t", "LN", "EOE", "abs_u"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 10.0);
    // |u| ∝ e^{−γt}, so ten decay times leave a fraction e^{−10} of the start
    let ratio = last[3] / rows[0][3];
    assert!((ratio / (-10.0f64).exp() - 1.0).abs() < 1e-10, "{ratio}");
    // LN peaks where |u|² = 1/2 and decays monotonically afterwards
    let peak = (0..rows.len()).max_by(|&a, &b| rows[a][1].total_cmp(&rows[b][1])).unwrap();
    assert!(rows[peak][3] > 0.6 && rows[peak][3] < 0.8);
    assert!(rows[peak..].windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(last[1] < 2e-4);
}
