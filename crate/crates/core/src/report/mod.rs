//! Study reporting: preference histograms, the preference color scale,
//! plot emission (the SVG renderers), and the plain-text study summary.

mod svg;

pub use svg::{render_histogram_svg, render_scatter_svg};

use crate::bootstrap::BootstrapScatter;
use crate::data_model::SummaryStats;
use crate::preference::PreferenceMap;
use crate::scale::{IceScaleResult, LambdaSource, Perspective, ShadowPrice};
use crate::wedge::{ConfidenceWedge, QuadrantCounts};

/// Default histogram bin count for reports.
pub const DEFAULT_BINS: usize = 30;

/// Equal-width histogram over the observed value range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n: u64,
    pub all_positive: bool,
}

impl Histogram {
    /// Bins `values` into `bins` equal-width cells spanning [min, max].
    /// A constant input widens the range by ±0.5 so one interior bin
    /// holds everything.
    pub fn from_values(values: &[f64], bins: usize) -> Histogram {
        assert!(bins >= 5, "at least 5 bins are required");
        assert!(!values.is_empty(), "cannot bin an empty value set");
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if min == max {
            min -= 0.5;
            max += 0.5;
        }
        let width = (max - min) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins).map(|i| min + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            let idx = (((v - min) / (max - min)) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        Histogram {
            bin_edges,
            counts,
            n: values.len() as u64,
            all_positive: values.iter().all(|&v| v > 0.0),
        }
    }
}

/// Evaluates the preference map on every replicate and bins the values.
pub fn preference_histogram(
    scatter: &BootstrapScatter,
    map: &PreferenceMap,
    bins: usize,
) -> Histogram {
    let values: Vec<f64> = scatter
        .replicates()
        .iter()
        .map(|p| map.evaluate(p.x, p.y).value())
        .collect();
    Histogram::from_values(&values, bins)
}

/// Sign band of a preference value: positive values color into the
/// yellow-to-green band, negative ones into the tan-to-red band, zero
/// gets the shared boundary color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Positive,
    Negative,
    Zero,
}

impl Band {
    pub fn of(value: f64) -> Band {
        if value > 0.0 {
            Band::Positive
        } else if value < 0.0 {
            Band::Negative
        } else {
            Band::Zero
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Band::Positive => "pos",
            Band::Negative => "neg",
            Band::Zero => "zero",
        }
    }
}

// Ramp endpoints (sRGB). Interpolation runs in Oklab so perceived
// lightness moves evenly along each band.
const YELLOW: [f64; 3] = [250.0, 232.0, 85.0];
const GREEN: [f64; 3] = [22.0, 110.0, 48.0];
const TAN: [f64; 3] = [210.0, 180.0, 140.0];
const RED: [f64; 3] = [172.0, 32.0, 32.0];

/// Maps preference values to colors, normalized by the largest
/// magnitude seen in the data so the scale is ordinal.
///
/// t = |v| / max|v|: positive values interpolate yellow → green,
/// negative ones tan → red, both piecewise-linearly in Oklab; zero maps
/// to the yellow/tan midpoint.
#[derive(Debug, Clone, Copy)]
pub struct ColorScale {
    max_abs: f64,
}

impl ColorScale {
    pub fn from_values(values: &[f64]) -> ColorScale {
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        ColorScale { max_abs }
    }

    pub fn color(&self, value: f64) -> String {
        let t = if self.max_abs == 0.0 {
            0.0
        } else {
            (value.abs() / self.max_abs).clamp(0.0, 1.0)
        };
        let rgb = match Band::of(value) {
            Band::Positive => oklab_lerp(YELLOW, GREEN, t),
            Band::Negative => oklab_lerp(TAN, RED, t),
            Band::Zero => oklab_lerp(YELLOW, TAN, 0.5),
        };
        format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
    }
}

fn srgb_to_linear(c: f64) -> f64 {
    let c = c / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn linear_to_srgb(c: f64) -> u8 {
    let c = if c <= 0.0031308 {
        12.92 * c
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    };
    (c.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn to_oklab(rgb: [f64; 3]) -> [f64; 3] {
    let (r, g, b) = (
        srgb_to_linear(rgb[0]),
        srgb_to_linear(rgb[1]),
        srgb_to_linear(rgb[2]),
    );
    let l = (0.4122214708 * r + 0.5363325363 * g + 0.0514459929 * b).cbrt();
    let m = (0.2119034982 * r + 0.6806995451 * g + 0.1073969566 * b).cbrt();
    let s = (0.0883024619 * r + 0.2817188376 * g + 0.6299787005 * b).cbrt();
    [
        0.2104542553 * l + 0.7936177850 * m - 0.0040720468 * s,
        1.9779984951 * l - 2.4285922050 * m + 0.4505937099 * s,
        0.0259040371 * l + 0.7827717662 * m - 0.8086757660 * s,
    ]
}

fn from_oklab(lab: [f64; 3]) -> [u8; 3] {
    let l = (lab[0] + 0.3963377774 * lab[1] + 0.2158037573 * lab[2]).powi(3);
    let m = (lab[0] - 0.1055613458 * lab[1] - 0.0638541728 * lab[2]).powi(3);
    let s = (lab[0] - 0.0894841775 * lab[1] - 1.2914855480 * lab[2]).powi(3);
    [
        linear_to_srgb(4.0767416621 * l - 3.3077115913 * m + 0.2309699292 * s),
        linear_to_srgb(-1.2684380046 * l + 2.6097574011 * m - 0.3413193965 * s),
        linear_to_srgb(-0.0041960863 * l - 0.7034186147 * m + 1.7076147010 * s),
    ]
}

fn oklab_lerp(from: [f64; 3], to: [f64; 3], t: f64) -> [u8; 3] {
    let a = to_oklab(from);
    let b = to_oklab(to);
    from_oklab([
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ])
}

/// Everything the plain-text study summary reports on.
pub struct StudyReport<'a> {
    pub n_std: usize,
    pub n_new: usize,
    pub std_effe: SummaryStats,
    pub std_cost: SummaryStats,
    pub new_effe: SummaryStats,
    pub new_cost: SummaryStats,
    pub scale: Option<&'a IceScaleResult>,
    pub lambda: ShadowPrice,
    pub perspective: Perspective,
    pub reps: usize,
    pub seed: u64,
    pub wedge: &'a ConfidenceWedge,
    pub quadrants: &'a QuadrantCounts,
    pub nb_hist: &'a Histogram,
    pub nonlinear_map: &'a PreferenceMap,
    pub nonlinear_hist: &'a Histogram,
}

fn lambda_source_text(source: LambdaSource) -> &'static str {
    match source {
        LambdaSource::UserSupplied => "user-supplied",
        LambdaSource::StatisticalRatio => "statistical ratio",
        LambdaSource::NearestPowerOf10 => "nearest power of 10",
    }
}

fn verdict(hist: &Histogram) -> &'static str {
    if hist.all_positive {
        "all replicate preferences strictly positive -> favors New"
    } else {
        "preferences straddle zero -> no uniform verdict"
    }
}

fn percent(x: f64) -> String {
    let pct = x * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{:.0}%", pct)
    } else {
        format!("{:.2}%", pct)
    }
}

/// Renders the study as plain text: arm summaries, the shadow price and
/// where it came from, the wedge geometry and counts, quadrant shares,
/// and the preference verdict under both the linear and the nonlinear
/// map.
pub fn study_report(inputs: &StudyReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };

    line("ICE study report".into());
    line("================".into());
    line(String::new());

    line("Arms (differences are New - Std)".into());
    let summary = |s: &SummaryStats| {
        format!(
            "min={:.4} q1={:.4} median={:.4} mean={:.4} q3={:.4} max={:.4} sd={:.4}",
            s.min, s.q1, s.median, s.mean, s.q3, s.max, s.sd
        )
    };
    line(format!("  Std arm, n={}", inputs.n_std));
    line(format!("    effe: {}", summary(&inputs.std_effe)));
    line(format!("    cost: {}", summary(&inputs.std_cost)));
    line(format!("  New arm, n={}", inputs.n_new));
    line(format!("    effe: {}", summary(&inputs.new_effe)));
    line(format!("    cost: {}", summary(&inputs.new_cost)));
    line(String::new());

    line("Shadow price".into());
    line(format!(
        "  lambda = {} ({})",
        inputs.lambda.value(),
        lambda_source_text(inputs.lambda.source())
    ));
    if let Some(scale) = inputs.scale {
        line(format!(
            "  statistical ratio = {:.4} (rule {}: S_cost = {:.4}, S_effe = {:.4})",
            scale.ratio,
            scale.rule.name(),
            scale.s_cost,
            scale.s_effe
        ));
    }
    line(String::new());

    line("Bootstrap".into());
    line(format!(
        "  R = {} replicates, seed = {}, perspective = {}",
        inputs.reps,
        inputs.seed,
        inputs.perspective.name()
    ));
    line(String::new());

    let w = inputs.wedge;
    line(format!(
        "Confidence wedge (confidence {})",
        percent(w.confidence)
    ));
    line(format!(
        "  center = {:.3} deg, half-angle = {:.3} deg, limits = [{:.3}, {:.3}] deg",
        w.center.degrees(),
        w.half_angle.to_degrees(),
        w.lower.degrees(),
        w.upper.degrees()
    ));
    line(format!(
        "  tails: {} below / {} above, inside {} (origin {})",
        w.count_below, w.count_above, w.count_inside, w.count_origin
    ));
    line(String::new());

    let q = inputs.quadrants;
    let share = |c: usize| percent(c as f64 / q.total().max(1) as f64);
    line("Quadrant shares".into());
    line(format!(
        "  SE (more effective, less costly): {}",
        share(q.se)
    ));
    line(format!(
        "  NE (more effective, more costly): {}",
        share(q.ne)
    ));
    line(format!(
        "  NW (less effective, more costly): {}",
        share(q.nw)
    ));
    line(format!(
        "  SW (less effective, less costly): {}",
        share(q.sw)
    ));
    line(format!("  on an axis: {}", share(q.boundary)));
    line(String::new());

    line("Preference verdicts".into());
    line(format!(
        "  net benefit (beta=1, gamma=1): {}",
        verdict(inputs.nb_hist)
    ));
    line(format!(
        "  nonlinear (beta={}, gamma={:.6}): {}",
        inputs.nonlinear_map.beta(),
        inputs.nonlinear_map.gamma(),
        verdict(inputs.nonlinear_hist)
    ));
    out
}
