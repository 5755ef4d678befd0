//! SVG trajectory plots of a run.

use std::fmt::Write;

use crate::engine::RunTrace;
use crate::geometry::Point;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 32.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn robot_color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

struct Viewport {
    min: Point,
    scale: f64,
}

impl Viewport {
    fn fit(trace: &RunTrace) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in trace.rounds.iter().flat_map(|r| &r.positions) {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.x.is_finite() {
            return Viewport {
                min: Point::ORIGIN,
                scale: 1.0,
            };
        }
        let span = (max.x - min.x).max(max.y - min.y);
        let scale = if span > 0.0 {
            (SIZE - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        Viewport { min, scale }
    }

    /// SVG y grows downward, so the plot is flipped.
    fn map(&self, p: Point) -> (f64, f64) {
        let x = MARGIN + (p.x - self.min.x) * self.scale;
        let y = SIZE - MARGIN - (p.y - self.min.y) * self.scale;
        (x, y)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One polyline per robot through its positions, a circle at every initial
/// location and a small marker at every round.
pub fn render_svg(trace: &RunTrace) -> String {
    let view = Viewport::fit(trace);
    let n = trace.robots();
    let mut svg = String::new();
    let w = |svg: &mut String, s: std::fmt::Arguments| svg.write_fmt(s).expect("write to string");
    w(
        &mut svg,
        format_args!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
        ),
    );
    w(
        &mut svg,
        format_args!("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"),
    );
    if let Some(first) = trace.rounds.first() {
        w(&mut svg, format_args!("<g class=\"initial\">\n"));
        for (i, p) in first.positions.iter().enumerate() {
            let (x, y) = view.map(*p);
            w(
                &mut svg,
                format_args!(
                    "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"7\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"><title>robot {i} start</title></circle>\n",
                    robot_color(i)
                ),
            );
        }
        w(&mut svg, format_args!("</g>\n"));
    }
    for i in 0..n {
        let color = robot_color(i);
        w(
            &mut svg,
            format_args!("<g class=\"robot\" id=\"robot-{i}\">\n"),
        );
        let coords: Vec<String> = trace
            .rounds
            .iter()
            .map(|r| {
                let (x, y) = view.map(r.positions[i]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        w(
            &mut svg,
            format_args!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                coords.join(" ")
            ),
        );
        for (round, r) in trace.rounds.iter().enumerate().skip(1) {
            let (x, y) = view.map(r.positions[i]);
            w(
                &mut svg,
                format_args!(
                    "<circle class=\"round\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2.5\" fill=\"{color}\"><title>robot {i}, round {round}</title></circle>\n"
                ),
            );
        }
        w(&mut svg, format_args!("</g>\n"));
    }
    if let Some(err) = &trace.error {
        w(
            &mut svg,
            format_args!(
                "<text x=\"{MARGIN}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#b00\">round {}: {}</text>\n",
                MARGIN / 2.0,
                err.round,
                escape(&err.to_string())
            ),
        );
    }
    svg.push_str("</svg>\n");
    svg
}
