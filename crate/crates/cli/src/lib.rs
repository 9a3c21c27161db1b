//! Scenario runner behind the `entangledyn` binary.
//!
//! Exit codes: 0 success, 1 unreadable or malformed config, 2 a scenario
//! invariant is violated, 3 a numerical routine failed.

pub mod config;
pub mod error;
pub mod format;
pub mod runner;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::Scenario;
pub use error::CliError;
use format::sig17;
use runner::{PoleRow, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Poles,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub plot_script: bool,
    pub workers: usize,
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text)
}

pub fn table_csv(t: &Table) -> String {
    let mut s = t.header.join(",");
    s.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|&x| sig17(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn poles_csv(rows: &[PoleRow]) -> String {
    let finite = rows.iter().any(|r| r.secular_residual.is_some());
    let mut s = String::from("re_z,im_z,weight_re,weight_im,method");
    if finite {
        s.push_str(",secular_residual");
    }
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}",
            sig17(r.z.re),
            sig17(r.z.im),
            sig17(r.weight.re),
            sig17(r.weight.im),
            r.method
        ));
        if let Some(res) = r.secular_residual {
            s.push(',');
            s.push_str(&sig17(res));
        }
        s.push('\n');
    }
    s
}

/// Gnuplot commands that draw the CSV at `data`, one panel per measure.
pub fn plot_script(data: &Path, header: &[String], sweep: Option<&[f64]>) -> String {
    let file = data.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key outside\n");
    s.push_str(&format!("set xlabel '{}'\n", header[0]));
    let measures: Vec<&String> = header[1..].iter().filter(|h| *h != "sweep_value").collect();
    if measures.len() > 1 {
        s.push_str(&format!("set multiplot layout {},1\n", measures.len()));
    }
    let sweep_col = header.len();
    for (i, m) in measures.iter().enumerate() {
        let col = i + 2;
        s.push_str(&format!("set ylabel '{m}'\n"));
        match sweep {
            None => s.push_str(&format!("plot '{file}' using 1:{col} skip 1 with lines title '{m}'\n")),
            Some(values) => {
                let list: Vec<String> = values.iter().map(|&v| sig17(v)).collect();
                s.push_str(&format!(
                    "plot for [v in \"{}\"] '{file}' using 1:(abs(column({sweep_col}) - (v+0)) < 1e-12 ? column({col}) : NaN) skip 1 with lines title 'sweep '.v\n",
                    list.join(" ")
                ));
            }
        }
    }
    if measures.len() > 1 {
        s.push_str("unset multiplot\n");
    }
    s
}

fn poles_plot_script(data: &Path) -> String {
    let file = data.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    format!(
        "set datafile separator ','\nset xlabel 'Re z'\nset ylabel 'Im z'\nplot '{file}' using 1:2 skip 1 with points pt 7 title 'poles'\n"
    )
}

/// Script path next to the CSV: `<out>.gp`.
pub fn script_path(out: &Path) -> PathBuf {
    let mut p = out.as_os_str().to_owned();
    p.push(".gp");
    PathBuf::from(p)
}

/// Runs a command and returns the text that goes to stdout (empty when `--out` is set).
pub fn execute(cmd: Command, opts: &Options) -> Result<String, CliError> {
    if opts.plot_script && opts.out.is_none() {
        return Err(CliError::Validation("--plot-script writes next to the CSV and needs --out".into()));
    }
    if opts.workers == 0 {
        return Err(CliError::Validation("--workers must be at least 1".into()));
    }
    let scenario = load(&opts.config)?;
    let (csv, script) = match cmd {
        Command::Run | Command::Sweep => {
            if cmd == Command::Sweep && scenario.sweep.is_none() {
                return Err(CliError::Validation("sweep needs a 'sweep' block in the config".into()));
            }
            let table = runner::time_series_table(&scenario, opts.workers)?;
            let values: Option<Vec<f64>> =
                scenario.sweep.is_some().then(|| scenario.sweep_values().into_iter().flatten().collect());
            let script = opts.out.as_ref().map(|o| plot_script(o, &table.header, values.as_deref()));
            (table_csv(&table), script)
        }
        Command::Poles => {
            let rows = runner::pole_rows(&scenario)?;
            (poles_csv(&rows), opts.out.as_ref().map(|o| poles_plot_script(o)))
        }
    };
    match &opts.out {
        None => Ok(csv),
        Some(out) => {
            write(out, &csv)?;
            if opts.plot_script {
                write(&script_path(out), &script.expect("out is set"))?;
            }
            Ok(String::new())
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))
}
