//! Self-contained SVG line charts for trajectories and sweeps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bubble_core::analysis::{StatField, SweepResult};
use bubble_core::model::{simulate, Trajectory};

use crate::error::CliError;

const WIDTH: f64 = 960.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const PANEL_HEIGHT: f64 = 170.0;
const PANEL_GAP: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Plot area in pixels plus the data range it maps.
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.left + (x - lo) / (hi - lo) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.top + self.height - (y - lo) / (hi - lo) * self.height
    }
}

fn padded_range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let span = hi - lo;
    if span <= f64::EPSILON * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1e-3);
        return (lo - pad, hi + pad);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn polyline(
    out: &mut String,
    frame: &Frame,
    points: impl Iterator<Item = (f64, f64)>,
    color: &str,
) {
    out.push_str("<polyline fill=\"none\" stroke=\"");
    out.push_str(color);
    out.push_str("\" stroke-width=\"1.2\" points=\"");
    for (i, (x, y)) in points.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.2},{:.2}", frame.px(x), frame.py(y));
    }
    out.push_str("\"/>\n");
}

fn axes(out: &mut String, frame: &Frame, title: &str, y_label: &str, x_label: Option<&str>) {
    let (l, t, w, h) = (frame.left, frame.top, frame.width, frame.height);
    let _ = writeln!(
        out,
        "<rect class=\"frame\" x=\"{l:.2}\" y=\"{t:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"none\" stroke=\"#444\"/>"
    );
    let _ = writeln!(
        out,
        "<text class=\"panel-title\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        l + w / 2.0,
        t - 8.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        "<text class=\"y-label\" transform=\"translate({:.2},{:.2}) rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
        l - 58.0,
        t + h / 2.0,
        escape(y_label)
    );
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let (ylo, yhi) = frame.y_range;
        let yv = ylo + frac * (yhi - ylo);
        let y = frame.py(yv);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{l:.2}\" y2=\"{y:.2}\" stroke=\"#444\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"end\">{}</text>",
            l - 4.0,
            l - 6.0,
            y + 3.0,
            tick_label(yv)
        );
        let (xlo, xhi) = frame.x_range;
        let xv = xlo + frac * (xhi - xlo);
        let x = frame.px(xv);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#444\"/><text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
            t + h,
            t + h + 4.0,
            t + h + 16.0,
            tick_label(xv.round())
        );
    }
    if let Some(xl) = x_label {
        let _ = writeln!(
            out,
            "<text class=\"x-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            l + w / 2.0,
            t + h + 34.0,
            escape(xl)
        );
    }
}

fn document(width: f64, height: f64, title: &str, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">\n\
         <title>{}</title>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         {body}</svg>\n",
        escape(title)
    )
}

/// Four stacked panels sharing the time axis: log-price, momentum with the
/// crash threshold `b` as a red dashed line, trading intensity, direction
/// state.
pub fn render_trajectory_svg(traj: &Trajectory) -> String {
    let b = traj.params.root_mid;
    let t_range = match (traj.records.first(), traj.records.last()) {
        (Some(f), Some(l)) if l.t > f.t => (f.t as f64, l.t as f64),
        (Some(f), _) => (f.t as f64, f.t as f64 + 1.0),
        _ => (0.0, 1.0),
    };
    type Getter = fn(&bubble_core::model::StepRecord) -> f64;
    let panels: [(&str, String, &str, Getter, &str); 4] = [
        (
            "log-price",
            "Log-price log P_t".into(),
            "log P_t",
            |r| r.log_price,
            "#1f77b4",
        ),
        (
            "momentum",
            format!(
                "Momentum M_t (red dashed: crash threshold b = {})",
                tick_label(b)
            ),
            "M_t",
            |r| r.momentum,
            "#2ca02c",
        ),
        (
            "intensity",
            "Trading intensity λ_t".into(),
            "λ_t",
            |r| r.lambda,
            "#ff7f0e",
        ),
        (
            "direction-state",
            "Direction state x_t".into(),
            "x_t",
            |r| r.x,
            "#9467bd",
        ),
    ];

    let mut body = String::new();
    for (i, (id, title, y_label, get, color)) in panels.iter().enumerate() {
        let values = traj.records.iter().map(get);
        let y_range = if *id == "momentum" {
            padded_range(values.chain(std::iter::once(b)))
        } else {
            padded_range(values)
        };
        let frame = Frame {
            left: MARGIN_LEFT,
            top: MARGIN_TOP + i as f64 * (PANEL_HEIGHT + PANEL_GAP),
            width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            height: PANEL_HEIGHT,
            x_range: t_range,
            y_range,
        };
        let _ = writeln!(
            body,
            "<g class=\"panel\" id=\"panel-{id}\" data-index=\"{}\">",
            i + 1
        );
        let x_label = (i == panels.len() - 1).then_some("t");
        axes(&mut body, &frame, title, y_label, x_label);
        polyline(
            &mut body,
            &frame,
            traj.records.iter().map(|r| (r.t as f64, get(r))),
            color,
        );
        if *id == "momentum" {
            let y = frame.py(b);
            let _ = writeln!(
                body,
                "<line class=\"threshold\" data-value=\"{b}\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"red\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>",
                frame.left,
                frame.left + frame.width
            );
        }
        body.push_str("</g>\n");
    }
    let height = MARGIN_TOP + 4.0 * PANEL_HEIGHT + 3.0 * PANEL_GAP + 50.0;
    document(
        WIDTH,
        height,
        &format!("Simulated trajectory, seed {}", traj.seed),
        &body,
    )
}

pub fn plot_trajectory(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_trajectory_svg(traj)).map_err(|e| CliError::io(path, e))
}

/// Log-price paths of the first seed for every sweep value, overlaid, with a
/// legend and an inset bar chart of the median peak log-price per value.
pub fn render_sweep_svg(result: &SweepResult) -> String {
    let spec = &result.spec;
    let Some(&seed) = spec.seeds.first() else {
        return document(WIDTH, 100.0, "empty sweep", "");
    };
    let paths: Vec<(usize, Trajectory)> = spec
        .values
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| simulate(&spec.params_for(v), seed).ok().map(|t| (i, t)))
        .collect();

    let main_width = 640.0;
    let main_height = 400.0;
    let frame = Frame {
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        width: main_width,
        height: main_height,
        x_range: padded_t_range(&paths),
        y_range: padded_range(paths.iter().flat_map(|(_, t)| t.log_prices())),
    };

    let mut body = String::new();
    body.push_str("<g class=\"panel\" id=\"panel-paths\">\n");
    axes(
        &mut body,
        &frame,
        &format!("Log-price paths, {} varied (seed {seed})", spec.axis),
        "log P_t",
        Some("t"),
    );
    for (i, traj) in &paths {
        let value = spec.values[*i];
        let _ = writeln!(body, "<g class=\"curve\" data-value=\"{value}\">");
        polyline(
            &mut body,
            &frame,
            traj.records.iter().map(|r| (r.t as f64, r.log_price)),
            PALETTE[i % PALETTE.len()],
        );
        body.push_str("</g>\n");
    }
    body.push_str("</g>\n");

    let legend_x = frame.left + main_width + 30.0;
    body.push_str("<g class=\"legend\">\n");
    for (i, &value) in spec.values.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + i as f64 * 20.0;
        let _ = writeln!(
            body,
            "<g class=\"legend-entry\" data-value=\"{value}\"><line x1=\"{legend_x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" stroke-width=\"3\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{} = {}</text></g>",
            legend_x + 24.0,
            PALETTE[i % PALETTE.len()],
            legend_x + 30.0,
            y + 4.0,
            spec.axis,
            tick_label(value)
        );
    }
    body.push_str("</g>\n");

    let medians: Vec<Option<f64>> = result
        .summaries
        .iter()
        .map(|s| s.field(StatField::PeakLogPrice).map(|q| q.median))
        .collect();
    let inset_top = MARGIN_TOP + 40.0 + spec.values.len() as f64 * 20.0;
    let inset_height = (main_height - (inset_top - MARGIN_TOP)).max(120.0);
    let inset = Frame {
        left: legend_x + 20.0,
        top: inset_top,
        width: WIDTH - legend_x - 20.0 - MARGIN_RIGHT,
        height: inset_height,
        x_range: (0.0, spec.values.len() as f64),
        y_range: {
            let hi = medians.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
            let lo = medians.iter().flatten().fold(0.0f64, |a, &b| a.min(b));
            if hi > lo {
                (lo, hi * 1.1)
            } else {
                (lo, lo + 1.0)
            }
        },
    };
    let _ = writeln!(
        body,
        "<g class=\"inset\"><rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">Median peak log P ({} seeds)</text>",
        inset.left,
        inset.top,
        inset.width,
        inset.height,
        inset.left + inset.width / 2.0,
        inset.top - 6.0,
        spec.seeds.len()
    );
    let slot = inset.width / spec.values.len() as f64;
    for (i, m) in medians.iter().enumerate() {
        let Some(m) = *m else { continue };
        let x = inset.left + i as f64 * slot + 0.15 * slot;
        let y0 = inset.py(0.0_f64.max(inset.y_range.0));
        let y1 = inset.py(m);
        let _ = writeln!(
            body,
            "<rect class=\"median-bar\" data-value=\"{}\" data-median=\"{m}\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
            spec.values[i],
            y1.min(y0),
            0.7 * slot,
            (y0 - y1).abs(),
            PALETTE[i % PALETTE.len()],
            x + 0.35 * slot,
            y1.min(y0) - 3.0,
            tick_label(m)
        );
    }
    body.push_str("</g>\n");

    document(
        WIDTH,
        MARGIN_TOP + main_height + 60.0,
        &format!("Sweep over {}", spec.axis),
        &body,
    )
}

fn padded_t_range(paths: &[(usize, Trajectory)]) -> (f64, f64) {
    let hi = paths
        .iter()
        .filter_map(|(_, t)| t.records.last().map(|r| r.t as f64))
        .fold(2.0, f64::max);
    (1.0, hi)
}

pub fn plot_sweep(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    fs::write(path, render_sweep_svg(result)).map_err(|e| CliError::io(path, e))
}
