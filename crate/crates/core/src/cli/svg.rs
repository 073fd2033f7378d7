use std::fmt::Write as _;

use super::output::fmt_sig;

const WIDTH: f64 = 860.0;
const MARGIN: f64 = 56.0;
const LEGEND_WIDTH: f64 = 250.0;
const MAX_PLOT_HEIGHT: f64 = 760.0;
const MIN_PLOT_HEIGHT: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    /// Raw coordinates attached as `data-re` / `data-im`.
    pub data: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LayerKind {
    /// Axis-aligned rectangles `(x, y, w, h)` with `y` the lower edge.
    Cells(Vec<(f64, f64, f64, f64)>),
    Lines(Vec<Vec<(f64, f64)>>, Stroke),
    Markers(Vec<Marker>, bool),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub id: String,
    pub label: String,
    pub colour: &'static str,
    pub kind: LayerKind,
}

impl Layer {
    pub fn is_empty(&self) -> bool {
        match &self.kind {
            LayerKind::Cells(c) => c.is_empty(),
            LayerKind::Lines(l, _) => l.iter().all(|p| p.len() < 2),
            LayerKind::Markers(m, _) => m.is_empty(),
        }
    }
}

/// A plot: a data window in display units plus an ordered layer list.
/// Every non-empty layer gets exactly one legend entry.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub title: String,
    /// `(x_min, x_max, y_min, y_max)`.
    pub window: (f64, f64, f64, f64),
    pub x_label: String,
    pub y_label: String,
    /// Keep unit aspect ratio (complex plane) or stretch (profiles).
    pub equal_aspect: bool,
    pub layers: Vec<Layer>,
}

fn c6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Short tick label.
fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl FigureSpec {
    pub fn push(&mut self, layer: Layer) {
        if !layer.is_empty() {
            self.layers.push(layer);
        }
    }

    /// Plot area in pixels, `(width, height)`.
    fn plot_size(&self) -> (f64, f64) {
        let w = WIDTH - 2.0 * MARGIN - LEGEND_WIDTH;
        if !self.equal_aspect {
            return (w, 0.62 * w);
        }
        let (x0, x1, y0, y1) = self.window;
        let ratio = (y1 - y0) / (x1 - x0);
        if w * ratio > MAX_PLOT_HEIGHT {
            (MAX_PLOT_HEIGHT / ratio, MAX_PLOT_HEIGHT)
        } else {
            (w, (w * ratio).max(MIN_PLOT_HEIGHT))
        }
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.window;
        let (dw, dh) = (x1 - x0, y1 - y0);
        let (pw, ph) = self.plot_size();
        let height = ph + 2.0 * MARGIN;
        let width = MARGIN + pw + LEGEND_WIDTH + 60.0;
        // Stretched plots scale y so that one user unit is square on screen.
        let sy = if self.equal_aspect { 1.0 } else { (dw / pw) / (dh / ph) };
        // User units per pixel, for strokes that look the same at any window.
        let px = dw / pw;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = c6(width),
            h = c6(height)
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="14">{}</text>"#,
            MARGIN,
            MARGIN / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<svg id="plot" x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" viewBox="{} {} {} {}" preserveAspectRatio="xMidYMid meet" overflow="hidden">"#,
            c6(pw),
            c6(ph),
            c6(x0),
            c6(-y1 * sy),
            c6(dw),
            c6(dh * sy)
        );
        for layer in &self.layers {
            let _ = writeln!(
                s,
                r#"<g id="layer-{}" class="layer" data-label="{}">"#,
                layer.id,
                escape(&layer.label)
            );
            match &layer.kind {
                LayerKind::Cells(rects) => {
                    for &(x, y, w, h) in rects {
                        let _ = writeln!(
                            s,
                            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" shape-rendering="crispEdges"/>"#,
                            c6(x),
                            c6(-(y + h) * sy),
                            c6(w),
                            c6(h * sy),
                            layer.colour
                        );
                    }
                }
                LayerKind::Lines(lines, stroke) => {
                    let dash = match stroke {
                        Stroke::Solid => String::new(),
                        Stroke::Dashed => {
                            format!(r#" stroke-dasharray="{} {}""#, c6(7.0 * px), c6(4.0 * px))
                        }
                    };
                    for line in lines.iter().filter(|l| l.len() >= 2) {
                        let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{},{}", c6(x), c6(-y * sy))).collect();
                        let _ = writeln!(
                            s,
                            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{}"{dash}/>"#,
                            pts.join(" "),
                            layer.colour,
                            c6(1.6 * px)
                        );
                    }
                }
                LayerKind::Markers(markers, hollow) => {
                    let fill = if *hollow { "white" } else { layer.colour };
                    for m in markers {
                        let _ = writeln!(
                            s,
                            r#"<circle class="marker" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{}" stroke-width="{}" data-re="{}" data-im="{}"/>"#,
                            c6(m.x),
                            c6(-m.y * sy),
                            c6(4.5 * px),
                            layer.colour,
                            c6(1.2 * px),
                            fmt_sig(m.data.0),
                            fmt_sig(m.data.1)
                        );
                    }
                }
            }
            let _ = writeln!(s, "</g>");
        }
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333" stroke-width="{}"/>"##,
            c6(x0),
            c6(-y1 * sy),
            c6(dw),
            c6(dh * sy),
            c6(2.0 * px)
        );
        let _ = writeln!(s, "</svg>");

        // Axis annotation in pixel space.
        let right = MARGIN + pw;
        let bottom = MARGIN + ph;
        let _ = writeln!(s, r#"<g id="axes-labels">"#);
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" text-anchor="start">{}</text>"#, c6(bottom + 16.0), tick(x0));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, c6(right), c6(bottom + 16.0), tick(x1));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            c6(MARGIN + pw / 2.0),
            c6(bottom + 34.0),
            escape(&self.x_label)
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, MARGIN - 4.0, c6(bottom), tick(y0));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, MARGIN - 4.0, c6(MARGIN + 10.0), tick(y1));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
            MARGIN - 30.0,
            c6(MARGIN + ph / 2.0),
            MARGIN - 30.0,
            c6(MARGIN + ph / 2.0),
            escape(&self.y_label)
        );
        let _ = writeln!(s, "</g>");

        let lx = right + 20.0;
        let _ = writeln!(s, r#"<g id="legend">"#);
        for (i, layer) in self.layers.iter().enumerate() {
            let y = MARGIN + 10.0 + 22.0 * i as f64;
            let _ = writeln!(s, r#"<g class="legend-entry" data-layer="{}">"#, layer.id);
            match &layer.kind {
                LayerKind::Cells(_) => {
                    let _ = writeln!(s, r#"<rect x="{}" y="{}" width="24" height="10" fill="{}"/>"#, lx, c6(y - 5.0), layer.colour);
                }
                LayerKind::Lines(_, stroke) => {
                    let dash = if *stroke == Stroke::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        s,
                        r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="1.6"{dash}/>"#,
                        lx,
                        lx + 24.0,
                        layer.colour
                    );
                }
                LayerKind::Markers(_, hollow) => {
                    let fill = if *hollow { "white" } else { layer.colour };
                    let _ = writeln!(s, r#"<circle cx="{}" cy="{y}" r="4" fill="{fill}" stroke="{}"/>"#, lx + 12.0, layer.colour);
                }
            }
            let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, c6(y + 4.0), escape(&layer.label));
            let _ = writeln!(s, "</g>");
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, "</svg>");
        s
    }
}
