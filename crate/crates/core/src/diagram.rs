//! DOT and SVG renderings of barcodes and Auslander–Reiten quivers.
//! Output depends only on the input, so it can be compared byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::ar_quiver::ArQuiver;
use crate::quiver_rep::Barcode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Svg,
}

/// Nodes on the integer grid and edges between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    pub nodes: Vec<(String, i64, i64)>,
    /// `(from, to, dashed)` by node index.
    pub edges: Vec<(usize, usize, bool)>,
}

impl Layout {
    pub fn ar_quiver(g: &ArQuiver) -> Layout {
        let index: BTreeMap<_, _> = g.vertices().iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let nodes = g
            .vertices()
            .iter()
            .map(|&v| {
                let (t, r) = g.coords(v);
                (v.to_string(), t, r as i64)
            })
            .collect();
        let mut edges: Vec<_> = g.arrows().iter().map(|(x, y)| (index[x], index[y], false)).collect();
        edges.extend(g.tau_map().iter().map(|(x, y)| (index[x], index[y], true)));
        Layout { nodes, edges }
    }

    pub fn derived_window(g: &ArQuiver, window: usize) -> Layout {
        let nodes = g.derived_window(window);
        let at: BTreeMap<(i64, usize), usize> = nodes.iter().enumerate().map(|(k, &(_, c))| (c, k)).collect();
        let n = g.quiver().n();
        let mut edges = Vec::new();
        for (&(t, r), &k) in &at {
            for r2 in [r.wrapping_sub(1), r + 1] {
                if (1..=n).contains(&r2) {
                    if let Some(&k2) = at.get(&(t + 1, r2)) {
                        edges.push((k, k2, false));
                    }
                }
            }
            if let Some(&k2) = at.get(&(t - 2, r)) {
                edges.push((k, k2, true));
            }
        }
        let nodes = nodes.into_iter().map(|((v, i), (t, r))| (format!("{v}[-{i}]"), t, r as i64)).collect();
        Layout { nodes, edges }
    }

    pub fn to_svg(&self) -> String {
        const STEP: i64 = 60;
        const PAD: i64 = 50;
        let xs = self.nodes.iter().map(|n| n.1);
        let ys = self.nodes.iter().map(|n| n.2);
        let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        let px = |x: i64| (x - x0) * STEP + PAD;
        let py = |y: i64| (y - y0) * STEP + PAD;
        let (w, h) = ((x1 - x0) * STEP + 2 * PAD, (y1 - y0) * STEP + 2 * PAD);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(
            s,
            r#"  <defs><marker id="head" markerWidth="8" markerHeight="6" refX="8" refY="3" orient="auto"><path d="M0,0 L8,3 L0,6 z"/></marker></defs>"#
        );
        for &(a, b, dashed) in &self.edges {
            let (fa, fb) = (&self.nodes[a], &self.nodes[b]);
            let (ax, ay, bx, by) = (px(fa.1), py(fa.2), px(fb.1), py(fb.2));
            // stop short of the label
            let (dx, dy) = ((bx - ax) as f64, (by - ay) as f64);
            let len = (dx * dx + dy * dy).sqrt().max(1.0);
            let k = 14.0 / len;
            let style = if dashed { r#" stroke-dasharray="4,3""# } else { r#" marker-end="url(#head)""# };
            let _ = writeln!(
                s,
                r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"{style}/>"#,
                ax as f64 + dx * k,
                ay as f64 + dy * k,
                bx as f64 - dx * k,
                by as f64 - dy * k
            );
        }
        for (label, x, y) in &self.nodes {
            let _ = writeln!(
                s,
                r#"  <text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="middle" dominant-baseline="middle">{label}</text>"#,
                px(*x),
                py(*y)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

pub fn barcode_dot(b: &Barcode) -> String {
    let mut s = String::from("digraph barcode {\n  node [shape=box];\n");
    for (row, i) in b.expanded().into_iter().enumerate() {
        let _ = writeln!(s, "  bar{row} [label=\"{i}\", pos=\"{},{}!\"];", i.b, -(row as i64));
    }
    s.push_str("}\n");
    s
}

pub fn barcode_svg(b: &Barcode) -> String {
    const UNIT: usize = 40;
    const ROW: usize = 16;
    let bars = b.expanded();
    let n = b.max_vertex().max(1);
    let (w, h) = ((n + 1) * UNIT, (bars.len() + 1) * ROW + 20);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    for x in 1..=n {
        let _ = writeln!(s, r#"  <text x="{}" y="12" font-family="monospace" font-size="10" text-anchor="middle">{x}</text>"#, x * UNIT);
    }
    for (row, i) in bars.iter().enumerate() {
        let y = 20 + row * ROW;
        let _ = writeln!(
            s,
            r#"  <rect x="{}" y="{y}" width="{}" height="{}" fill="steelblue"><title>{i}</title></rect>"#,
            i.b * UNIT - UNIT / 4,
            (i.d - i.b) * UNIT + UNIT / 2,
            ROW - 4
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_barcode(b: &Barcode, format: Format) -> String {
    match format {
        Format::Dot => barcode_dot(b),
        Format::Svg => barcode_svg(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver_rep::{Interval, Orientation, QuiverAn};

    #[test]
    fn ar_quiver_layouts() {
        let g = ArQuiver::build(&QuiverAn::equioriented(3));
        let l = Layout::ar_quiver(&g);
        assert_eq!(l.nodes.len(), 6);
        assert_eq!(l.edges.iter().filter(|e| e.2).count(), 3);
        let svg = l.to_svg();
        assert_eq!(svg.matches("<text").count(), 6);
        assert_eq!(svg, Layout::ar_quiver(&g).to_svg());
        let d = Layout::derived_window(&g, 1);
        assert_eq!(d.nodes.len(), 12);
        assert!(d.to_svg().contains("I[1,3][-1]"));
        let z = ArQuiver::build(&QuiverAn::new(4, Orientation::z2(4)).unwrap());
        assert_eq!(Layout::ar_quiver(&z).nodes.len(), 10);
    }

    #[test]
    fn barcode_renderings() {
        let empty = Barcode::new();
        assert_eq!(barcode_dot(&empty), "digraph barcode {\n  node [shape=box];\n}\n");
        assert!(barcode_svg(&empty).ends_with("</svg>\n"));
        let b = Barcode::from_intervals([Interval { b: 1, d: 3 }, Interval { b: 2, d: 2 }]);
        assert_eq!(emit_barcode(&b, Format::Dot).matches("bar").count(), 3);
        assert_eq!(emit_barcode(&b, Format::Svg).matches("<rect").count(), 2);
    }
}
