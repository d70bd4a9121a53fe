//! CSV reports and plot data.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::fail::CliResult;

pub const GRID_HEADER: [&str; 12] = [
    "x",
    "y",
    "u",
    "beta",
    "psi_exact",
    "lambda",
    "g_beta",
    "ratio_uncorrected",
    "ratio_corrected",
    "model_rhs",
    "normalized_deviation",
    "psiover_rhs",
];

pub const DENSITY_HEADER: [&str; 8] = [
    "beta0",
    "t_height",
    "ordinates",
    "seed",
    "n_samples",
    "positive",
    "density",
    "stderr",
];

/// 17 significant digits, exponent form, locale independent.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub beta: f64,
    pub psi_exact: u64,
    pub lambda: f64,
    pub g_beta: f64,
    pub ratio_uncorrected: f64,
    pub ratio_corrected: f64,
    pub model_rhs: Option<f64>,
    pub normalized_deviation: Option<f64>,
    pub psiover_rhs: Option<f64>,
}

impl GridRow {
    fn record(&self) -> Vec<String> {
        vec![
            fmt_f(self.x),
            fmt_f(self.y),
            fmt_f(self.u),
            fmt_f(self.beta),
            self.psi_exact.to_string(),
            fmt_f(self.lambda),
            fmt_f(self.g_beta),
            fmt_f(self.ratio_uncorrected),
            fmt_f(self.ratio_corrected),
            fmt_opt(self.model_rhs),
            fmt_opt(self.normalized_deviation),
            fmt_opt(self.psiover_rhs),
        ]
    }
}

fn sink(output: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(|e| {
            crate::fail::CliError::Io(format!("{}: {e}", p.display()))
        })?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn write_csv(output: Option<&Path>, header: &[&str], records: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink(output)?);
    w.write_record(header)?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows sorted by `(y, x)`.
pub fn write_grid(output: Option<&Path>, rows: &mut [GridRow]) -> CliResult<()> {
    rows.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    let records: Vec<Vec<String>> = rows.iter().map(GridRow::record).collect();
    write_csv(output, &GRID_HEADER, &records)
}

/// `PREFIX.dat` holds one block per curve (`# name`, then `y value` lines,
/// blocks separated by two blank lines); `PREFIX.gp` plots every block
/// against `log y`.
pub fn write_plot(prefix: &Path, rows: &[GridRow]) -> CliResult<()> {
    let mut curves: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut push = |name: String, y: f64, v: f64| match curves.iter_mut().find(|c| c.0 == name) {
        Some(c) => c.1.push((y, v)),
        None => curves.push((name, vec![(y, v)])),
    };
    for r in rows {
        let tag = format!("u={}", fmt_short(r.u));
        let same_u = rows.iter().all(|q| fmt_short(q.u) == fmt_short(r.u));
        let label = |s: &str| if same_u { s.to_string() } else { format!("{s} {tag}") };
        push(label("ratio_uncorrected"), r.y, r.ratio_uncorrected);
        push(label("ratio_corrected"), r.y, r.ratio_corrected);
        if let Some(v) = r.normalized_deviation {
            push(label("normalized_deviation"), r.y, v);
        }
        if let Some(v) = r.model_rhs {
            push(label("model_rhs"), r.y, v);
        }
        if let Some(v) = r.psiover_rhs {
            push(label("psiover_rhs"), r.y, v);
        }
    }
    let dat = with_ext(prefix, "dat");
    let mut text = String::new();
    for (i, (name, pts)) in curves.iter().enumerate() {
        if i > 0 {
            text.push_str("\n\n");
        }
        text.push_str(&format!("# {name}\n"));
        for (y, v) in pts {
            text.push_str(&format!("{} {}\n", fmt_f(*y), fmt_f(*v)));
        }
    }
    std::fs::write(&dat, text).map_err(|e| crate::fail::CliError::Io(format!("{}: {e}", dat.display())))?;
    let mut gp = String::from("set logscale x\nset xlabel 'y'\nset key outside\nplot \\\n");
    let dat_name = dat.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    for (i, (name, _)) in curves.iter().enumerate() {
        let sep = if i + 1 == curves.len() { "\n" } else { ", \\\n" };
        gp.push_str(&format!("  '{dat_name}' index {i} using 1:2 with linespoints title '{name}'{sep}"));
    }
    if curves.is_empty() {
        gp = String::from("# no data\n");
    }
    let gp_path = with_ext(prefix, "gp");
    std::fs::write(&gp_path, gp).map_err(|e| crate::fail::CliError::Io(format!("{}: {e}", gp_path.display())))?;
    Ok(())
}

fn fmt_short(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
