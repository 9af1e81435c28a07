//! CSV emission and gnuplot script generation for sweep tables.

use std::io;
use std::path::Path;

use crate::analytic::optimal_payload;

use super::{figure_variable, HarnessError, SweepTable};

pub const CSV_HEADER: &str = "sweep_value,pcf_S_analytic,pcf_S_sim,crpcf_S_analytic,\
crpcf_S_sim_mean,crpcf_S_sim_std,switch_analytic,switch_sim_mean,rounds_sim_mean,retx_sim_mean";

/// Formats with six significant digits, plain decimal inside a sane
/// magnitude range and scientific notation outside it. Idempotent under
/// parse-and-reformat, so emitted files re-serialize byte-identically.
pub fn fmt_sig(x: f64) -> String {
    fn raw(x: f64) -> String {
        if x == 0.0 {
            return "0".to_string();
        }
        if !x.is_finite() {
            return if x.is_nan() {
                "NaN".to_string()
            } else if x > 0.0 {
                "inf".to_string()
            } else {
                "-inf".to_string()
            };
        }
        let exp = x.abs().log10().floor() as i32;
        if (-4..6).contains(&exp) {
            let decimals = (5 - exp).max(0) as usize;
            format!("{x:.decimals$}")
        } else {
            format!("{x:.5e}")
        }
    }
    // a rounding carry can add a digit (9.999996 -> "10.00000"); one
    // re-format of the parsed value reaches the fixed point
    let first = raw(x);
    match first.parse::<f64>() {
        Ok(v) => raw(v),
        Err(_) => first,
    }
}

/// Renders the table as CSV: the fixed header then one row per sweep point.
/// Failed points carry NaN metrics; their error text is reported separately
/// by [`SweepTable::failures`].
pub fn csv_string(table: &SweepTable) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        let m = row.metrics.as_ref();
        let cols = [
            row.sweep_value,
            m.map_or(f64::NAN, |m| m.pcf_s_analytic),
            m.map_or(f64::NAN, |m| m.pcf_s_sim),
            m.map_or(f64::NAN, |m| m.crpcf_s_analytic),
            m.map_or(f64::NAN, |m| m.crpcf_s_sim_mean),
            m.map_or(f64::NAN, |m| m.crpcf_s_sim_std),
            m.map_or(f64::NAN, |m| m.switch_analytic),
            m.map_or(f64::NAN, |m| m.switch_sim_mean),
            m.map_or(f64::NAN, |m| m.rounds_sim_mean),
            m.map_or(f64::NAN, |m| m.retx_sim_mean),
        ];
        let line: Vec<String> = cols.iter().map(|&c| fmt_sig(c)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

impl SweepTable {
    /// `(sweep_value, error)` for every failed point.
    pub fn failures(&self) -> Vec<(f64, &str)> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.metrics
                    .as_ref()
                    .err()
                    .map(|e| (r.sweep_value, e.as_str()))
            })
            .collect()
    }
}

/// Writes the table's CSV to `path`.
pub fn write_csv(table: &SweepTable, path: &Path) -> io::Result<()> {
    std::fs::write(path, csv_string(table))
}

/// Renders a standalone gnuplot script for the given preset figure:
/// analytic curves as lines, simulated points with error bars, and a
/// second panel for switch counts. The payload-length figure also marks
/// the computed optimal payload.
pub fn plot_script_string(
    table: &SweepTable,
    figure: u8,
    csv_path: &str,
) -> Result<String, HarnessError> {
    let expected = figure_variable(figure)?;
    if expected != table.variable {
        return Err(HarnessError::FigureVariableMismatch {
            figure,
            expected,
            actual: table.variable,
        });
    }

    let xlabel = table.variable.axis_label();
    let logscale = if figure == 11 {
        "set logscale x 2\n"
    } else {
        ""
    };
    let marker = if figure == 11 {
        let opt = optimal_payload(&table.base.params, &table.base.pu, 64..=65536);
        format!(
            "set arrow from {x}, graph 0 to {x}, graph 1 nohead dashtype 2 lc rgb 'red'\n\
             set label sprintf(\"optimal X = {x} B\") at {x}, graph 0.92 offset 1,0\n",
            x = opt.payload_len
        )
    } else {
        String::new()
    };

    Ok(format!(
        "# gnuplot script; run: gnuplot {base}.gp\n\
         set datafile separator ','\n\
         set terminal pngcairo size 960,600\n\
         set key top left\n\
         set grid\n\
         set xlabel \"{xlabel}\"\n\
         {logscale}\
         set output '{base}_throughput.png'\n\
         set ylabel \"Throughput S\"\n\
         {marker}\
         plot '{csv}' skip 1 using 1:2 with lines lw 2 title 'PCF analytic', \\\n\
         \x20    ''      skip 1 using 1:3 with points pt 4 ps 1.2 title 'PCF simulated', \\\n\
         \x20    ''      skip 1 using 1:4 with lines lw 2 title 'CR-PCF analytic', \\\n\
         \x20    ''      skip 1 using 1:5:6 with yerrorbars pt 7 ps 1.2 title 'CR-PCF simulated'\n\
         unset arrow\n\
         unset label\n\
         set output '{base}_switches.png'\n\
         set ylabel \"Channel switches O\"\n\
         plot '{csv}' skip 1 using 1:7 with lines lw 2 title 'CR-PCF analytic', \\\n\
         \x20    ''      skip 1 using 1:8 with points pt 7 ps 1.2 title 'CR-PCF simulated'\n",
        base = csv_path.trim_end_matches(".csv"),
        csv = csv_path,
    ))
}

/// Writes the plot script for `figure` next to `csv_path`, returning the
/// script path.
pub fn emit_plot_script(
    table: &SweepTable,
    figure: u8,
    csv_path: &Path,
) -> Result<std::path::PathBuf, PlotError> {
    let csv_name = csv_path.to_string_lossy();
    let script = plot_script_string(table, figure, &csv_name).map_err(PlotError::Harness)?;
    let script_path = csv_path.with_extension("gp");
    std::fs::write(&script_path, script).map_err(PlotError::Io)?;
    Ok(script_path)
}

#[derive(Debug)]
pub enum PlotError {
    Harness(HarnessError),
    Io(io::Error),
}

impl std::fmt::Display for PlotError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlotError::Harness(e) => write!(f, "{e}"),
            PlotError::Io(e) => write!(f, "writing plot script: {e}"),
        }
    }
}

impl std::error::Error for PlotError {}
