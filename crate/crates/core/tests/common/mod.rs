#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn wavespec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavespec"))
        .args(args)
        .env("WAVESPEC_THREADS", "4")
        .output()
        .expect("binary runs")
}

/// Value of `name="..."` in a tag.
pub fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = tag.find(&key)? + key.len();
    let end = tag[start..].find('"')? + start;
    Some(&tag[start..end])
}

/// Body of `<g id="layer-{id}" ...> ... </g>`, if present.
pub fn layer<'a>(svg: &'a str, id: &str) -> Option<&'a str> {
    let key = format!("<g id=\"layer-{id}\"");
    let start = svg.find(&key)?;
    let end = svg[start..].find("</g>")? + start;
    Some(&svg[start..end])
}

/// All tags with the given element name.
pub fn tags<'a>(text: &'a str, element: &str) -> Vec<&'a str> {
    let open = format!("<{element} ");
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(i) = rest.find(&open) {
        let tail = &rest[i..];
        let end = tail.find('>').expect("closed tag");
        out.push(&tail[..=end]);
        rest = &tail[end..];
    }
    out
}

/// Polylines of a layer in plot coordinates (y pointing up).
pub fn polylines(section: &str) -> Vec<Vec<(f64, f64)>> {
    tags(section, "polyline")
        .into_iter()
        .map(|t| {
            attr(t, "points")
                .unwrap()
                .split_whitespace()
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), -y.parse::<f64>().unwrap())
                })
                .collect()
        })
        .collect()
}

/// Marker centres in plot coordinates.
pub fn markers(section: &str) -> Vec<(f64, f64)> {
    tags(section, "circle")
        .into_iter()
        .map(|t| {
            (
                attr(t, "cx").unwrap().parse().unwrap(),
                -attr(t, "cy").unwrap().parse::<f64>().unwrap(),
            )
        })
        .collect()
}

pub fn distance_to_polyline(p: (f64, f64), line: &[(f64, f64)]) -> f64 {
    line.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let d = (b.0 - a.0, b.1 - a.1);
            let len2 = d.0 * d.0 + d.1 * d.1;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p.0 - a.0) * d.0 + (p.1 - a.1) * d.1) / len2).clamp(0.0, 1.0)
            };
            ((a.0 + t * d.0 - p.0).powi(2) + (a.1 + t * d.1 - p.1).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Layer ids in document order and legend entries in document order.
pub fn layers_and_legend(svg: &str) -> (Vec<String>, Vec<String>) {
    let layers = tags(svg, "g")
        .into_iter()
        .filter(|t| attr(t, "class") == Some("layer"))
        .map(|t| attr(t, "id").unwrap().trim_start_matches("layer-").to_string())
        .collect();
    let legend = tags(svg, "g")
        .into_iter()
        .filter(|t| attr(t, "class") == Some("legend-entry"))
        .map(|t| attr(t, "data-layer").unwrap().to_string())
        .collect();
    (layers, legend)
}

/// `(re, im, region)` rows of a grid CSV.
pub fn grid_rows(path: &Path) -> Vec<(f64, f64, String)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,i_plus,i_minus,region"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[4].to_string())
        })
        .collect()
}
