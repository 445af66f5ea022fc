//! Dependency-free SVG emission for ICE scatters and preference
//! histograms. SVG is text, so tests can parse geometry straight back
//! out of the files.

use std::fs;
use std::io;
use std::path::Path;

use crate::bootstrap::BootstrapScatter;
use crate::preference::PreferenceMap;
use crate::scale::Perspective;
use crate::wedge::ConfidenceWedge;

use super::{Band, ColorScale};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 70.0;

/// Renders a bootstrap scatter, optionally re-colored by a preference
/// map and overlaid with the limit rays of a confidence wedge.
///
/// Both axes share one scale (units per pixel), so angles on screen are
/// data-space angles and the plot is square. Replicate points carry
/// `class="replicate"`, and when a map is given, a `data-band`
/// attribute recording the sign band of their preference value. The
/// observed mean point has `id="observed"`, the ICE origin
/// `id="origin"`, and each wedge ray `class="wedge-limit"` plus a
/// `data-angle-rad` attribute.
pub fn render_scatter_svg(
    scatter: &BootstrapScatter,
    wedge: Option<&ConfidenceWedge>,
    map: Option<&PreferenceMap>,
    out: &Path,
) -> io::Result<()> {
    fs::write(out, scatter_svg_string(scatter, wedge, map))
}

fn scatter_svg_string(
    scatter: &BootstrapScatter,
    wedge: Option<&ConfidenceWedge>,
    map: Option<&PreferenceMap>,
) -> String {
    // Data bounds always include the origin and the observed point.
    let mut min_x: f64 = 0.0;
    let mut max_x: f64 = 0.0;
    let mut min_y: f64 = 0.0;
    let mut max_y: f64 = 0.0;
    let observed = scatter.observed();
    for p in scatter
        .replicates()
        .iter()
        .chain(std::iter::once(&observed))
    {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let side = (max_x - min_x).max(max_y - min_y).max(1e-12) * 1.08;
    let plot = SIZE - 2.0 * MARGIN;
    let scale = plot / side;
    let cx = (min_x + max_x) / 2.0;
    let cy = (min_y + max_y) / 2.0;
    // Pixel position: (tx + scale*x, ty - scale*y).
    let tx = SIZE / 2.0 - scale * cx;
    let ty = SIZE / 2.0 + scale * cy;

    let values: Option<(Vec<f64>, ColorScale)> = map.map(|m| {
        let vals: Vec<f64> = scatter
            .replicates()
            .iter()
            .map(|p| m.evaluate(p.x, p.y).value())
            .collect();
        let color_scale = ColorScale::from_values(&vals);
        (vals, color_scale)
    });

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<g transform=\"translate({tx:.6} {ty:.6}) scale({scale:.6} -{scale:.6})\">\n"
    ));

    // Wedge limit rays, drawn first so points sit on top.
    if let Some(w) = wedge {
        let ray_len = [min_x.abs(), max_x.abs(), min_y.abs(), max_y.abs()]
            .into_iter()
            .fold(0.0f64, f64::max)
            .max(1e-12)
            * 1.6;
        for (angle, which) in [(w.lower.radians(), "lower"), (w.upper.radians(), "upper")] {
            s.push_str(&format!(
                "<line class=\"wedge-limit\" data-limit=\"{which}\" data-angle-rad=\"{angle:.12}\" x1=\"0\" y1=\"0\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"#555555\" stroke-width=\"{:.6}\" stroke-dasharray=\"{:.6} {:.6}\"/>\n",
                ray_len * angle.cos(),
                ray_len * angle.sin(),
                1.4 / scale,
                6.0 / scale,
                4.0 / scale,
            ));
        }
    }

    let point_r = 2.2 / scale;
    for (i, p) in scatter.replicates().iter().enumerate() {
        match &values {
            Some((vals, color_scale)) => {
                s.push_str(&format!(
                    "<circle class=\"replicate\" data-band=\"{}\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{point_r:.6}\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                    Band::of(vals[i]).name(),
                    p.x,
                    p.y,
                    color_scale.color(vals[i]),
                ));
            }
            None => {
                s.push_str(&format!(
                    "<circle class=\"replicate\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{point_r:.6}\" fill=\"#4477aa\" fill-opacity=\"0.55\"/>\n",
                    p.x, p.y,
                ));
            }
        }
    }

    // ICE origin crosshair (the standard treatment).
    let d = 7.0 / scale;
    s.push_str(&format!(
        "<path id=\"origin\" d=\"M {m:.6} 0 H {d:.6} M 0 {m:.6} V {d:.6}\" stroke=\"#cc2222\" stroke-width=\"{:.6}\" fill=\"none\"/>\n",
        1.6 / scale,
        m = -d,
    ));
    s.push_str(&format!(
        "<circle id=\"observed\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#1133bb\" stroke=\"white\" stroke-width=\"{:.6}\"/>\n",
        observed.x,
        observed.y,
        4.5 / scale,
        1.2 / scale,
    ));
    s.push_str("</g>\n");

    // Frame and axis labels live outside the flipped group.
    s.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{plot}\" height=\"{plot}\" fill=\"none\" stroke=\"#999999\"/>\n"
    ));
    let lambda = scatter.lambda().value();
    let (x_label, y_label) = match scatter.perspective() {
        Perspective::Alias => (
            format!("effectiveness difference, effe units (lambda = {lambda})"),
            format!("cost difference / lambda, effe units (lambda = {lambda})"),
        ),
        Perspective::Alibi => (
            format!("lambda x effectiveness difference, cost units (lambda = {lambda})"),
            format!("cost difference, cost units (lambda = {lambda})"),
        ),
    };
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{x_label}</text>\n",
        SIZE / 2.0,
        SIZE - 18.0,
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" transform=\"rotate(-90 20 {:.1})\">{y_label}</text>\n",
        20.0,
        SIZE / 2.0,
        SIZE / 2.0,
    ));
    // Corner coordinates of the data window.
    let view = side / 1.08;
    s.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#777777\">x: [{:.3}, {:.3}]  y: [{:.3}, {:.3}]</text>\n",
        MARGIN - 8.0,
        cx - view / 2.0,
        cx + view / 2.0,
        cy - view / 2.0,
        cy + view / 2.0,
    ));
    s.push_str("</svg>\n");
    s
}

/// Renders a histogram as an SVG bar chart with bin-edge labels and a
/// zero reference line whenever zero falls inside the edge range.
pub fn render_histogram_svg(hist: &super::Histogram, out: &Path) -> io::Result<()> {
    fs::write(out, histogram_svg_string(hist))
}

fn histogram_svg_string(hist: &super::Histogram) -> String {
    let width = 640.0;
    let height = 420.0;
    let margin_left = 60.0;
    let margin_right = 25.0;
    let margin_top = 25.0;
    let margin_bottom = 55.0;
    let plot_w = width - margin_left - margin_right;
    let plot_h = height - margin_top - margin_bottom;

    let lo = hist.bin_edges[0];
    let hi = *hist.bin_edges.last().expect("edges");
    let max_count = hist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let x_of = |v: f64| margin_left + (v - lo) / (hi - lo) * plot_w;
    let y_of = |count: f64| margin_top + plot_h * (1.0 - count / max_count);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));

    for (i, &count) in hist.counts.iter().enumerate() {
        let x0 = x_of(hist.bin_edges[i]);
        let x1 = x_of(hist.bin_edges[i + 1]);
        let y = y_of(count as f64);
        s.push_str(&format!(
            "<rect class=\"bar\" data-count=\"{count}\" x=\"{x0:.4}\" y=\"{y:.4}\" width=\"{:.4}\" height=\"{:.6}\" fill=\"#4477aa\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
            x1 - x0,
            margin_top + plot_h - y,
        ));
    }

    if lo <= 0.0 && 0.0 <= hi {
        s.push_str(&format!(
            "<line id=\"zero-line\" x1=\"{x:.4}\" y1=\"{margin_top}\" x2=\"{x:.4}\" y2=\"{:.4}\" stroke=\"#cc2222\" stroke-width=\"1.2\" stroke-dasharray=\"5 3\"/>\n",
            margin_top + plot_h,
            x = x_of(0.0),
        ));
    }

    // Axis frame.
    s.push_str(&format!(
        "<line x1=\"{margin_left}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        margin_top + plot_h,
        width - margin_right,
        margin_top + plot_h,
    ));
    s.push_str(&format!(
        "<line x1=\"{margin_left}\" y1=\"{margin_top}\" x2=\"{margin_left}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        margin_top + plot_h,
    ));

    // Up to seven evenly spaced bin-edge labels.
    let n_edges = hist.bin_edges.len();
    let step = (n_edges / 7).max(1);
    for (i, &edge) in hist.bin_edges.iter().enumerate() {
        if i % step != 0 && i != n_edges - 1 {
            continue;
        }
        s.push_str(&format!(
            "<text class=\"edge-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>\n",
            x_of(edge),
            margin_top + plot_h + 16.0,
        edge,
        ));
    }
    // Count axis: zero and the max.
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n",
        margin_left - 6.0,
        margin_top + plot_h + 4.0,
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
        margin_left - 6.0,
        margin_top + 4.0,
        max_count as u64,
    ));
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">preference value (n = {})</text>\n",
        margin_left + plot_w / 2.0,
        height - 14.0,
        hist.n,
    ));
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::BootstrapScatter;
    use crate::report::{preference_histogram, Histogram};
    use crate::scale::{IceOutcome, Perspective, ShadowPrice};
    use crate::wedge::{compute_wedge, TailRule};

    fn outcome(x: f64, y: f64) -> IceOutcome {
        IceOutcome {
            x,
            y,
            lambda: ShadowPrice::unit(),
            perspective: Perspective::Alias,
        }
    }

    fn scatter_from(observed: (f64, f64), points: &[(f64, f64)]) -> BootstrapScatter {
        BootstrapScatter::from_parts(
            outcome(observed.0, observed.1),
            points.iter().map(|&(x, y)| outcome(x, y)).collect(),
            0,
        )
        .unwrap()
    }

    fn attr(element: &str, name: &str) -> f64 {
        let key = format!("{name}=\"");
        let start = element.find(&key).expect("attribute present") + key.len();
        let end = element[start..].find('"').unwrap() + start;
        element[start..end].parse().unwrap()
    }

    #[test]
    fn plain_scatter_has_one_element_per_point_plus_markers() {
        let scatter = scatter_from(
            (0.5, -0.5),
            &[(0.4, -0.4), (0.6, -0.6), (0.5, -0.3), (0.7, -0.7)],
        );
        let svg = scatter_svg_string(&scatter, None, None);
        assert_eq!(svg.matches("class=\"replicate\"").count(), 4);
        assert_eq!(svg.matches("id=\"origin\"").count(), 1);
        assert_eq!(svg.matches("id=\"observed\"").count(), 1);
        assert_eq!(svg.matches("wedge-limit").count(), 0);
    }

    #[test]
    fn wedge_ray_angles_survive_the_round_trip() {
        let points: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let theta = -0.8 + 0.04 * i as f64;
                (2.0 * theta.cos(), 2.0 * theta.sin())
            })
            .collect();
        let scatter = scatter_from((2.0f64 * 0.0f64.cos(), 0.0), &points);
        let wedge = compute_wedge(&scatter, 0.9, TailRule::Symmetric).unwrap();
        let svg = scatter_svg_string(&scatter, Some(&wedge), None);

        let mut angles = Vec::new();
        for line in svg.lines().filter(|l| l.contains("wedge-limit")) {
            let (x2, y2) = (attr(line, "x2"), attr(line, "y2"));
            angles.push(y2.atan2(x2));
        }
        assert_eq!(angles.len(), 2);
        let expected_lower = wedge.center.radians() - wedge.half_angle;
        let expected_upper = wedge.center.radians() + wedge.half_angle;
        assert!((angles[0] - expected_lower).abs() < 1e-6, "{angles:?}");
        assert!((angles[1] - expected_upper).abs() < 1e-6, "{angles:?}");
    }

    #[test]
    fn bands_in_the_file_match_the_sign_of_x_minus_y() {
        use crate::preference::PreferenceMap;
        let points = [
            (0.5, -0.5),
            (-0.5, 0.5),
            (0.3, 0.1),
            (0.1, 0.3),
            (-1.0, -2.0),
        ];
        let scatter = scatter_from((0.5, -0.5), &points);
        let map = PreferenceMap::omega_map();
        let svg = scatter_svg_string(&scatter, None, Some(&map));
        let bands: Vec<&str> = svg
            .lines()
            .filter(|l| l.contains("class=\"replicate\""))
            .map(|l| {
                let key = "data-band=\"";
                let start = l.find(key).unwrap() + key.len();
                &l[start..start + 3]
            })
            .collect();
        let expected: Vec<&str> = points
            .iter()
            .map(|&(x, y)| if x > y { "pos" } else { "neg" })
            .collect();
        assert_eq!(bands, expected);
    }

    #[test]
    fn omega_recoloring_concentrates_small_preferences() {
        use crate::data_model::{generate_demo_data, split_arms};
        use crate::preference::PreferenceMap;
        use crate::scale::LambdaSource;

        let (std, new) = split_arms(generate_demo_data(42)).unwrap();
        let lambda = ShadowPrice::new(10.0, LambdaSource::NearestPowerOf10).unwrap();
        let scatter =
            crate::bootstrap::resample(&std, &new, 500, 42, lambda, Perspective::Alias).unwrap();

        let near_zero_share = |map: &PreferenceMap| {
            let vals: Vec<f64> = scatter
                .replicates()
                .iter()
                .map(|p| map.evaluate(p.x, p.y).value())
                .collect();
            let max_abs = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            vals.iter().filter(|v| v.abs() < 0.15 * max_abs).count()
        };
        let nb = near_zero_share(&PreferenceMap::net_benefit());
        let omega = near_zero_share(&PreferenceMap::omega_map());
        assert!(
            omega > nb,
            "omega map should yield more near-zero preferences: {omega} vs {nb}"
        );
    }

    #[test]
    fn histogram_bars_scale_with_counts() {
        let hist = Histogram {
            bin_edges: vec![0.0, 1.0, 2.0],
            counts: vec![3, 7],
            n: 10,
            all_positive: true,
        };
        // Bypass from_values to exercise the stated 2-bar example even
        // though the public constructor enforces >= 5 bins.
        let svg = histogram_svg_string(&hist);
        let heights: Vec<f64> = svg
            .lines()
            .filter(|l| l.contains("class=\"bar\""))
            .map(|l| attr(l, "height"))
            .collect();
        assert_eq!(heights.len(), 2);
        assert!((heights[0] / heights[1] - 3.0 / 7.0).abs() < 1e-6);
    }

    #[test]
    fn zero_line_tracks_the_edge_range() {
        let with_zero = Histogram {
            bin_edges: vec![-1.0, 0.0, 1.0, 2.0, 3.0, 4.0],
            counts: vec![1, 2, 3, 2, 1],
            n: 9,
            all_positive: false,
        };
        assert!(histogram_svg_string(&with_zero).contains("id=\"zero-line\""));
        let positive = Histogram {
            bin_edges: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            counts: vec![1, 2, 3, 2, 1],
            n: 9,
            all_positive: true,
        };
        assert!(!histogram_svg_string(&positive).contains("id=\"zero-line\""));
    }

    #[test]
    fn paired_histograms_share_n() {
        use crate::preference::PreferenceMap;
        let scatter = scatter_from((1.0, -1.0), &[(1.0, -1.0), (0.9, -1.2), (1.1, -0.8)]);
        let nb = preference_histogram(&scatter, &PreferenceMap::net_benefit(), 5);
        let omega = preference_histogram(&scatter, &PreferenceMap::omega_map(), 5);
        assert_eq!(nb.n, omega.n);
    }

    #[test]
    fn files_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let scatter = scatter_from((1.0, -1.0), &[(1.0, -1.0), (0.9, -1.2)]);
        let svg_path = dir.path().join("scatter.svg");
        render_scatter_svg(&scatter, None, None, &svg_path).unwrap();
        assert!(svg_path.exists());
        let hist = Histogram::from_values(&[1.0, 2.0, 3.0], 5);
        let hist_path = dir.path().join("hist.svg");
        render_histogram_svg(&hist, &hist_path).unwrap();
        let content = std::fs::read_to_string(&hist_path).unwrap();
        assert!(content.starts_with("<svg"));
    }
}
