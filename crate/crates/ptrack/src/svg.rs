//! Self-contained SVG rendering of x-t front diagrams: shocks solid,
//! rarefaction fronts dashed, compressions dotted.

use crate::curves::WaveKind;
use crate::engine::FrontPath;

/// Renders front trajectories into an SVG document (x horizontal, t upward).
pub fn render_xt(paths: &[FrontPath], width: u32, height: u32) -> String {
    let live: Vec<&FrontPath> = paths.iter().filter(|p| p.t1 > p.t0).collect();
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut t_lo, mut t_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &live {
        x_lo = x_lo.min(p.x0).min(p.x1);
        x_hi = x_hi.max(p.x0).max(p.x1);
        t_lo = t_lo.min(p.t0);
        t_hi = t_hi.max(p.t1);
    }
    if live.is_empty() || !(x_hi > x_lo) || !(t_hi > t_lo) {
        x_lo = 0.0;
        x_hi = 1.0;
        t_lo = 0.0;
        t_hi = 1.0;
    }
    let margin = 40.0;
    let w = width as f64;
    let h = height as f64;
    let sx = (w - 2.0 * margin) / (x_hi - x_lo);
    let sy = (h - 2.0 * margin) / (t_hi - t_lo);
    let px = |x: f64| margin + (x - x_lo) * sx;
    let py = |t: f64| h - margin - (t - t_lo) * sy;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-width=\"1\"/>\n",
        margin, h - margin, w - margin, h - margin
    ));
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-width=\"1\"/>\n",
        margin, h - margin, margin, margin
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">x</text>\n",
        w - margin + 6.0, h - margin + 4.0
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#444\">t</text>\n",
        margin - 14.0, margin - 6.0
    ));
    for p in &live {
        let (dash, widthpx) = match p.kind {
            WaveKind::Shock => ("none", 1.4),
            WaveKind::Rarefaction => ("6,4", 1.0),
            WaveKind::Compression => ("2,3", 1.0),
        };
        out.push_str(&format!(
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\" \
             stroke-width=\"{widthpx}\" stroke-dasharray=\"{dash}\"/>\n",
            px(p.x0),
            py(p.t0),
            px(p.x1),
            py(p.t1)
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::WaveFamily;

    #[test]
    fn renders_styles_per_kind() {
        let paths = vec![
            FrontPath {
                id: 1,
                family: WaveFamily::First,
                kind: WaveKind::Shock,
                t0: 0.0,
                x0: 0.0,
                t1: 1.0,
                x1: -1.0,
            },
            FrontPath {
                id: 2,
                family: WaveFamily::Second,
                kind: WaveKind::Rarefaction,
                t0: 0.0,
                x0: 0.0,
                t1: 1.0,
                x1: 1.0,
            },
            FrontPath {
                id: 3,
                family: WaveFamily::Second,
                kind: WaveKind::Compression,
                t0: 0.0,
                x0: 0.5,
                t1: 1.0,
                x1: 1.5,
            },
        ];
        let svg = render_xt(&paths, 400, 300);
        assert!(svg.contains("stroke-dasharray=\"none\""));
        assert!(svg.contains("stroke-dasharray=\"6,4\""));
        assert!(svg.contains("stroke-dasharray=\"2,3\""));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn deterministic_output() {
        let p = FrontPath {
            id: 1,
            family: WaveFamily::First,
            kind: WaveKind::Shock,
            t0: 0.0,
            x0: 0.3,
            t1: 2.0,
            x1: -0.7,
        };
        assert_eq!(
            render_xt(std::slice::from_ref(&p), 300, 200),
            render_xt(std::slice::from_ref(&p), 300, 200)
        );
    }
}
