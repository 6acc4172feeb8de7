use std::fmt::Write as _;
use std::io::Write;

use super::{format_sig17, SweepResult};
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

/// Data-to-pixel mapping of a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartFrame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl ChartFrame {
    pub fn fit(rows: &[(f64, f64)]) -> Self {
        let fold = |f: fn(&(f64, f64)) -> f64| {
            rows.iter()
                .map(f)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                })
        };
        let (mut x_min, mut x_max) = fold(|r| r.0);
        let (y_min, mut y_max) = fold(|r| r.1);
        if x_max == x_min {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_max == y_min {
            // Flat curve: draw it on the lower axis.
            y_max = y_min + y_min.abs().max(1.0);
        }
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn x_px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    pub fn y_px(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn x_from_px(&self, px: f64) -> f64 {
        self.x_min + (px - LEFT) / (WIDTH - LEFT - RIGHT) * (self.x_max - self.x_min)
    }
}

fn label(x: f64) -> String {
    format!("{x:.4e}")
}

/// Standalone SVG line chart of the sweep rows with min/max tick labels and a
/// marker at the maximum.
pub fn emit_svg_chart<W: Write>(res: &SweepResult, mut sink: W) -> Result<()> {
    if res.rows.is_empty() {
        return Err(Error::InvalidSpec("cannot chart an empty sweep".into()));
    }
    let frame = ChartFrame::fit(&res.rows);
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);

    let mut svg = String::new();
    // fmt::Write into a String cannot fail.
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{} vs {}</text>"#,
        WIDTH / 2.0,
        res.quantity,
        res.param
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );
    let text = |svg: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{body}</text>"#
        );
    };
    text(&mut svg, x0, y0 + 16.0, "middle", &label(frame.x_min));
    text(&mut svg, x1, y0 + 16.0, "middle", &label(frame.x_max));
    text(&mut svg, x0 - 6.0, y0 + 4.0, "end", &label(frame.y_min));
    text(&mut svg, x0 - 6.0, y1 + 4.0, "end", &label(frame.y_max));
    text(&mut svg, (x0 + x1) / 2.0, HEIGHT - 12.0, "middle", res.param.as_str());

    let mut points = String::with_capacity(res.rows.len() * 18);
    for (i, &(x, y)) in res.rows.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{:.3},{:.3}", frame.x_px(x), frame.y_px(y));
    }
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{points}"/>"#
    );
    if let Some(max) = &res.argmax {
        let _ = writeln!(
            svg,
            r#"<circle class="argmax" cx="{:.3}" cy="{:.3}" r="4" fill="crimson"><title>max at {}</title></circle>"#,
            frame.x_px(max.param),
            frame.y_px(max.value),
            format_sig17(max.param)
        );
    }
    svg.push_str("</svg>\n");
    sink.write_all(svg.as_bytes())?;
    sink.flush()?;
    Ok(())
}
