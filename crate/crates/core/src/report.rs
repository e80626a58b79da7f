//! CSV logs and static SVG plots for finished runs.
//!
//! All output is a pure function of the [`RunLog`]: numbers are printed with
//! 9 significant digits and the plot files embed their raw data series in a
//! `<metadata>` block, so identical runs produce byte-identical artifacts
//! and tests can parse the plotted series back out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::engine::RunLog;
use crate::error::SimError;

/// Format a float with 9 significant digits (scientific notation).
fn sig9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Write `metrics.csv` (one row per round: round, time, per-UAV errors and
/// speed, target speed, view angles) and `trajectories.csv` (round, uav, x,
/// y, z, yaw, u, v). Returns the created paths.
///
/// # Errors
/// [`SimError::Io`] on any filesystem failure.
pub fn emit_csv(log: &RunLog, output_dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    std::fs::create_dir_all(output_dir)?;
    let num_uavs = log.final_world.agents.len();

    let mut metrics = String::from("round,time");
    for i in 0..num_uavs {
        let _ = write!(
            metrics,
            ",uav{i}_e_x,uav{i}_e_y,uav{i}_e_z,uav{i}_e_a,uav{i}_speed"
        );
    }
    metrics.push_str(",target_speed,total_view,effective_view\n");
    for rec in &log.records {
        let _ = write!(metrics, "{},{}", rec.round, sig9(rec.time));
        for u in &rec.uavs {
            let _ = write!(
                metrics,
                ",{},{},{},{},{}",
                sig9(u.e_x),
                sig9(u.e_y),
                sig9(u.e_z),
                sig9(u.e_a),
                sig9(u.speed)
            );
        }
        let _ = writeln!(
            metrics,
            ",{},{},{}",
            sig9(rec.target_speed),
            sig9(rec.total_view),
            sig9(rec.effective_view)
        );
    }

    let mut trajectories = String::from("round,uav,x,y,z,yaw,u,v\n");
    for t in &log.trajectories {
        let _ = writeln!(
            trajectories,
            "{},{},{},{},{},{},{},{}",
            t.round,
            t.uav,
            sig9(t.position.x),
            sig9(t.position.y),
            sig9(t.position.z),
            sig9(t.yaw),
            sig9(t.u),
            sig9(t.v)
        );
    }

    let metrics_path = output_dir.join("metrics.csv");
    let trajectories_path = output_dir.join("trajectories.csv");
    std::fs::write(&metrics_path, metrics)?;
    std::fs::write(&trajectories_path, trajectories)?;
    Ok(vec![metrics_path, trajectories_path])
}

/// One named data series of a line chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 55.0;

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-3 && v.abs() < 1e5 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

/// Render a deterministic SVG line chart with the raw series embedded in a
/// `<metadata id="series">` block (`name|x,y;x,y;...`, one line per series).
pub fn render_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all_points = series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all_points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if !x_min.is_finite() {
        (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    svg.push_str("<metadata id=\"series\">\n");
    for s in series {
        let _ = write!(svg, "{}|", s.name);
        for (i, (x, y)) in s.points.iter().enumerate() {
            if i > 0 {
                svg.push(';');
            }
            let _ = write!(svg, "{},{}", sig9(*x), sig9(*y));
        }
        svg.push('\n');
    }
    svg.push_str("</metadata>\n");
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"18\">{title}</text>",
        WIDTH / 2.0
    );

    // Axes and ticks.
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let x = x_min + f * (x_max - x_min);
        let y = y_min + f * (y_max - y_min);
        let (x_px, _) = to_px(x, y_min);
        let (_, y_px) = to_px(x_min, y);
        let _ = writeln!(
            svg,
            "<line x1=\"{x_px:.2}\" y1=\"{:.2}\" x2=\"{x_px:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>",
            MARGIN_T,
            MARGIN_T + plot_h
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_L}\" y1=\"{y_px:.2}\" x2=\"{:.2}\" y2=\"{y_px:.2}\" stroke=\"#ccc\"/>",
            MARGIN_L + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x_px:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"12\">{}</text>",
            MARGIN_T + plot_h + 18.0,
            fmt_tick(x)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{y_px:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"12\">{}</text>",
            MARGIN_L - 6.0,
            fmt_tick(y)
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{x_label}</text>",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\" transform=\"rotate(-90 18 {:.1})\">{y_label}</text>",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );

    // Series polylines and legend.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !s.points.is_empty() {
            let mut path = String::new();
            for (j, (x, y)) in s.points.iter().enumerate() {
                let (px, py) = to_px(*x, *y);
                let _ = write!(path, "{}{px:.2},{py:.2}", if j == 0 { "" } else { " " });
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
            );
        }
        let ly = MARGIN_T + 16.0 + i as f64 * 16.0;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"12\" height=\"3\" fill=\"{color}\"/>",
            MARGIN_L + plot_w - 130.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{ly:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            MARGIN_L + plot_w - 112.0,
            s.name
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Parse the embedded data series back out of a chart produced by
/// [`render_line_chart`].
pub fn parse_plot_series(svg: &str) -> Vec<Series> {
    let Some(start) = svg.find("<metadata id=\"series\">") else {
        return Vec::new();
    };
    let Some(end) = svg.find("</metadata>") else {
        return Vec::new();
    };
    let body = &svg[start + "<metadata id=\"series\">".len()..end];
    body.lines()
        .filter(|line| line.contains('|'))
        .map(|line| {
            let (name, data) = line.split_once('|').expect("checked above");
            let points = data
                .split(';')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    let (x, y) = p.split_once(',').expect("x,y pair");
                    (x.parse().expect("finite x"), y.parse().expect("finite y"))
                })
                .collect();
            Series { name: name.to_string(), points }
        })
        .collect()
}

/// Per-scenario summary used by the sweep plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// Number of UAVs.
    pub num_uavs: usize,
    /// Final-round mean normalized errors across UAVs.
    pub mean_e_x: f64,
    pub mean_e_y: f64,
    pub mean_e_z: f64,
    /// Final-round view angles, degrees.
    pub total_view: f64,
    pub effective_view: f64,
}

/// Final-round summary of a run, for sweep aggregation.
pub fn summarize_final(log: &RunLog) -> SweepPoint {
    let last = log.records.last().expect("run logs the initial record");
    let m = last.uavs.len().max(1) as f64;
    SweepPoint {
        num_uavs: last.uavs.len(),
        mean_e_x: last.uavs.iter().map(|u| u.e_x).sum::<f64>() / m,
        mean_e_y: last.uavs.iter().map(|u| u.e_y).sum::<f64>() / m,
        mean_e_z: last.uavs.iter().map(|u| u.e_z).sum::<f64>() / m,
        total_view: last.total_view,
        effective_view: last.effective_view,
    }
}

/// Write the three per-run plots: top-view trajectories, error area vs
/// round, and speed comparison. Returns the created paths.
///
/// # Errors
/// [`SimError::Io`] on any filesystem failure.
pub fn emit_plots(log: &RunLog, output_dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    std::fs::create_dir_all(output_dir)?;
    let num_uavs = log.final_world.agents.len();

    // Top view: x-y tracks of every UAV plus the target.
    let mut trajectory_series: Vec<Series> = (0..num_uavs)
        .map(|i| Series {
            name: format!("uav{i}"),
            points: log
                .trajectories
                .iter()
                .filter(|t| t.uav == i as u32)
                .map(|t| (t.position.x, t.position.y))
                .collect(),
        })
        .collect();
    trajectory_series.push(Series {
        name: "target".to_string(),
        points: log.target_track.iter().map(|p| (p.x, p.y)).collect(),
    });
    let top_view = render_line_chart("UAV trajectories (top view)", "x [m]", "y [m]", &trajectory_series);

    let error_series: Vec<Series> = (0..num_uavs)
        .map(|i| Series {
            name: format!("uav{i}"),
            points: log
                .records
                .iter()
                .map(|r| (f64::from(r.round), r.uavs[i].e_a))
                .collect(),
        })
        .collect();
    let error_area = render_line_chart("Error area per round", "round", "e_a", &error_series);

    let mut speed_series: Vec<Series> = (0..num_uavs)
        .map(|i| Series {
            name: format!("uav{i}"),
            points: log
                .records
                .iter()
                .map(|r| (f64::from(r.round), r.uavs[i].speed))
                .collect(),
        })
        .collect();
    speed_series.push(Series {
        name: "target".to_string(),
        points: log
            .records
            .iter()
            .map(|r| (f64::from(r.round), r.target_speed))
            .collect(),
    });
    let speed = render_line_chart("UAV vs target speed", "round", "speed [m/s]", &speed_series);

    let paths = [
        ("trajectory_top_view.svg", top_view),
        ("error_area.svg", error_area),
        ("speed_comparison.svg", speed),
    ];
    let mut out = Vec::with_capacity(paths.len());
    for (name, content) in paths {
        let path = output_dir.join(name);
        std::fs::write(&path, content)?;
        out.push(path);
    }
    Ok(out)
}

/// Write `sweep_summary.csv`: one row per swept team size with the values
/// the sweep plots are drawn from. Returns the created path.
///
/// # Errors
/// [`SimError::Io`] on any filesystem failure.
pub fn emit_sweep_csv(points: &[SweepPoint], output_dir: &Path) -> Result<PathBuf, SimError> {
    std::fs::create_dir_all(output_dir)?;
    let mut csv =
        String::from("num_uavs,mean_e_x,mean_e_y,mean_e_z,total_view,effective_view\n");
    for p in points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            p.num_uavs,
            sig9(p.mean_e_x),
            sig9(p.mean_e_y),
            sig9(p.mean_e_z),
            sig9(p.total_view),
            sig9(p.effective_view)
        );
    }
    let path = output_dir.join("sweep_summary.csv");
    std::fs::write(&path, csv)?;
    Ok(path)
}

/// Write the two sweep plots: final mean errors vs UAV count and view
/// coverage vs UAV count. Returns the created paths.
///
/// # Errors
/// [`SimError::Io`] on any filesystem failure.
pub fn emit_sweep_plots(points: &[SweepPoint], output_dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    std::fs::create_dir_all(output_dir)?;
    let xs = |f: &dyn Fn(&SweepPoint) -> f64| -> Vec<(f64, f64)> {
        points.iter().map(|p| (p.num_uavs as f64, f(p))).collect()
    };
    let errors = render_line_chart(
        "Final mean errors vs UAV count",
        "UAVs",
        "normalized error",
        &[
            Series { name: "e_x".to_string(), points: xs(&|p| p.mean_e_x) },
            Series { name: "e_y".to_string(), points: xs(&|p| p.mean_e_y) },
            Series { name: "e_z".to_string(), points: xs(&|p| p.mean_e_z) },
        ],
    );
    let coverage = render_line_chart(
        "View coverage vs UAV count",
        "UAVs",
        "degrees",
        &[
            Series { name: "total".to_string(), points: xs(&|p| p.total_view) },
            Series { name: "effective".to_string(), points: xs(&|p| p.effective_view) },
        ],
    );

    let paths = [
        ("error_vs_uavs.svg", errors),
        ("coverage_vs_uavs.svg", coverage),
    ];
    let mut out = Vec::with_capacity(paths.len());
    for (name, content) in paths {
        let path = output_dir.join(name);
        std::fs::write(&path, content)?;
        out.push(path);
    }
    Ok(out)
}
