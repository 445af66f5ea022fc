//! Wedge-shaped (angular) confidence regions over a bootstrap scatter.
//!
//! Each replicate is reduced to its polar angle about the ICE origin;
//! the wedge is the angular sector about the observed outcome's ray that
//! captures the target fraction of replicates. The default rule grows a
//! symmetric half-width about the observed ray until the coverage count
//! is reached, so the two tail counts sum to exactly r − ceil(confidence·r)
//! but need not be equal to each other. An equal-tail variant trims the
//! same number of angular order statistics from each side instead.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::bootstrap::BootstrapScatter;
use crate::scale::IceOutcome;

#[derive(Debug, Error, PartialEq)]
pub enum WedgeError {
    #[error("the ICE origin has no polar angle")]
    OriginPoint,
    #[error("observed outcome sits at the ICE origin; the wedge center is undefined")]
    OriginObserved,
    #[error("confidence must satisfy 0.5 <= c < 1, got {0}")]
    InvalidConfidence(f64),
    #[error("required half-angle reaches {0} rad >= pi; the scatter surrounds the origin and the region is not a wedge")]
    WedgeDegenerate(f64),
}

/// Polar angle of a standardized ICE point, in radians in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IceAngle(f64);

impl IceAngle {
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

/// atan2 angle of a standardized point; the origin is rejected.
pub fn ice_angle(outcome: &IceOutcome) -> Result<IceAngle, WedgeError> {
    angle_of(outcome.x, outcome.y)
}

fn angle_of(x: f64, y: f64) -> Result<IceAngle, WedgeError> {
    if x == 0.0 && y == 0.0 {
        return Err(WedgeError::OriginPoint);
    }
    // Collapse -0.0 so points on the negative x-axis land on +pi,
    // keeping the range (-pi, pi].
    let y = if y == 0.0 { 0.0 } else { y };
    Ok(IceAngle(y.atan2(x)))
}

/// Wraps an angular difference into (−π, π].
pub fn wrap_angle(delta: f64) -> f64 {
    let mut a = delta % TAU;
    if a <= -PI {
        a += TAU;
    } else if a > PI {
        a -= TAU;
    }
    a
}

// Count targets like ceil(confidence * r) must not wobble by one when
// the decimal confidence is a half-ulp above its nominal value
// (0.95 * 25000 must be 23750, never 23751).
fn ceil_count(x: f64) -> usize {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-6 {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

fn floor_count(x: f64) -> usize {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-6 {
        nearest as usize
    } else {
        x.floor() as usize
    }
}

/// Tail-handling rule for [`compute_wedge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailRule {
    /// Smallest symmetric half-width about the observed ray covering
    /// ceil(confidence·r) replicates. Tail counts are data-driven and
    /// generally unequal. Default.
    Symmetric,
    /// Exclude floor((1−confidence)/2·r) angular order statistics from
    /// each side; the wedge need not be centered on the observed ray.
    EqualTails,
}

impl TailRule {
    pub fn name(self) -> &'static str {
        match self {
            TailRule::Symmetric => "symmetric",
            TailRule::EqualTails => "equal",
        }
    }
}

/// Angular confidence region about the observed ICE ray.
///
/// `count_below` replicates sit clockwise of the lower limit,
/// `count_above` counter-clockwise of the upper limit, and
/// `count_below + count_above + count_inside + count_origin = r`.
/// Exact-origin replicates have no angle and count as inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceWedge {
    pub center: IceAngle,
    pub half_angle: f64,
    pub lower: IceAngle,
    pub upper: IceAngle,
    pub confidence: f64,
    pub count_below: usize,
    pub count_above: usize,
    pub count_inside: usize,
    pub count_origin: usize,
    pub r: usize,
}

/// Computes the confidence wedge of a scatter.
///
/// Ties at the included limits are broken toward inclusion (both
/// endpoints are inside). Fails when the needed half-width reaches π.
pub fn compute_wedge(
    scatter: &BootstrapScatter,
    confidence: f64,
    rule: TailRule,
) -> Result<ConfidenceWedge, WedgeError> {
    if !(0.5..1.0).contains(&confidence) {
        return Err(WedgeError::InvalidConfidence(confidence));
    }
    let center = ice_angle(&scatter.observed()).map_err(|_| WedgeError::OriginObserved)?;

    let r = scatter.r();
    let mut deviations = Vec::with_capacity(r);
    let mut count_origin = 0usize;
    for p in scatter.replicates() {
        match angle_of(p.x, p.y) {
            Ok(theta) => deviations.push(wrap_angle(theta.radians() - center.radians())),
            Err(_) => count_origin += 1,
        }
    }

    let need = ceil_count(confidence * r as f64);
    let (lower_dev, upper_dev, half_angle) = match rule {
        TailRule::Symmetric => {
            let needed_angular = need.saturating_sub(count_origin);
            let mut abs_devs: Vec<f64> = deviations.iter().map(|d| d.abs()).collect();
            abs_devs.sort_by(f64::total_cmp);
            let h = if needed_angular == 0 {
                0.0
            } else {
                abs_devs[needed_angular - 1]
            };
            if h >= PI {
                return Err(WedgeError::WedgeDegenerate(h));
            }
            (-h, h, h)
        }
        TailRule::EqualTails => {
            let trim = floor_count((1.0 - confidence) / 2.0 * r as f64);
            let mut sorted = deviations.clone();
            sorted.sort_by(f64::total_cmp);
            let m = sorted.len();
            if m == 0 {
                (0.0, 0.0, 0.0)
            } else {
                let lo = sorted[trim.min(m - 1)];
                let hi = sorted[(m - 1).saturating_sub(trim)];
                let h = (hi - lo) / 2.0;
                if h >= PI {
                    return Err(WedgeError::WedgeDegenerate(h));
                }
                (lo, hi, h)
            }
        }
    };

    let count_below = deviations.iter().filter(|&&d| d < lower_dev).count();
    let count_above = deviations.iter().filter(|&&d| d > upper_dev).count();
    // Origin replicates never land in a tail, so the complement already
    // counts them as inside.
    let count_inside = r - count_below - count_above;

    Ok(ConfidenceWedge {
        center,
        half_angle,
        lower: IceAngle(wrap_angle(center.radians() + lower_dev)),
        upper: IceAngle(wrap_angle(center.radians() + upper_dev)),
        confidence,
        count_below,
        count_above,
        count_inside,
        count_origin,
        r,
    })
}

/// Replicate counts by quadrant: (x>0,y<0), (x>0,y>0), (x<0,y>0),
/// (x<0,y<0), with axis points (x = 0 or y = 0, origin included)
/// reported separately. The five counts sum to r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadrantCounts {
    pub se: usize,
    pub ne: usize,
    pub nw: usize,
    pub sw: usize,
    pub boundary: usize,
}

impl QuadrantCounts {
    pub fn total(&self) -> usize {
        self.se + self.ne + self.nw + self.sw + self.boundary
    }
}

pub fn quadrant_counts(scatter: &BootstrapScatter) -> QuadrantCounts {
    let mut counts = QuadrantCounts {
        se: 0,
        ne: 0,
        nw: 0,
        sw: 0,
        boundary: 0,
    };
    for p in scatter.replicates() {
        if p.x == 0.0 || p.y == 0.0 {
            counts.boundary += 1;
        } else if p.x > 0.0 && p.y < 0.0 {
            counts.se += 1;
        } else if p.x > 0.0 && p.y > 0.0 {
            counts.ne += 1;
        } else if p.x < 0.0 && p.y > 0.0 {
            counts.nw += 1;
        } else {
            counts.sw += 1;
        }
    }
    counts
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::bootstrap::BootstrapScatter;
    use crate::scale::{IceOutcome, Perspective, ShadowPrice};
    use proptest::prelude::*;

    fn outcome(x: f64, y: f64) -> IceOutcome {
        IceOutcome {
            x,
            y,
            lambda: ShadowPrice::unit(),
            perspective: Perspective::Alias,
        }
    }

    fn scatter_strategy() -> impl Strategy<Value = BootstrapScatter> {
        // Clustered scatters keep the needed half-angle away from pi.
        (
            -3.0f64..3.0,
            proptest::collection::vec((-0.8f64..0.8, -0.8f64..0.8), 20..200),
        )
            .prop_map(|(center, jitter)| {
                let radius = 3.0;
                let observed = (radius * center.cos(), radius * center.sin());
                let points: Vec<IceOutcome> = jitter
                    .into_iter()
                    .map(|(dx, dy)| outcome(observed.0 + dx, observed.1 + dy))
                    .collect();
                BootstrapScatter::from_parts(outcome(observed.0, observed.1), points, 0).unwrap()
            })
    }

    fn rotate(s: &BootstrapScatter, phi: f64) -> BootstrapScatter {
        let rot = |p: &IceOutcome| {
            outcome(
                p.x * phi.cos() - p.y * phi.sin(),
                p.x * phi.sin() + p.y * phi.cos(),
            )
        };
        BootstrapScatter::from_parts(
            rot(&s.observed()),
            s.replicates().iter().map(rot).collect(),
            0,
        )
        .unwrap()
    }

    fn scale(s: &BootstrapScatter, c: f64) -> BootstrapScatter {
        let f = |p: &IceOutcome| outcome(p.x * c, p.y * c);
        BootstrapScatter::from_parts(f(&s.observed()), s.replicates().iter().map(f).collect(), 0)
            .unwrap()
    }

    proptest! {
        #[test]
        fn counts_sum_and_coverage_is_minimal(s in scatter_strategy(), c in 0.5f64..0.99) {
            let w = compute_wedge(&s, c, TailRule::Symmetric).unwrap();
            let r = s.r();
            prop_assert_eq!(w.count_below + w.count_above + w.count_inside, r);
            let need = {
                let x = c * r as f64;
                let nearest = x.round();
                if (x - nearest).abs() < 1e-6 { nearest as usize } else { x.ceil() as usize }
            };
            prop_assert!(w.count_inside >= need);
            // Minimality: dropping the boundary order statistic (and its
            // ties) must fall below the target coverage.
            let boundary_multiplicity = s
                .replicates()
                .iter()
                .filter(|p| {
                    ice_angle(p).map(|t| {
                        let d = wrap_angle(t.radians() - w.center.radians()).abs();
                        (d - w.half_angle).abs() <= 1e-12
                    }).unwrap_or(false)
                })
                .count();
            if w.half_angle > 0.0 {
                prop_assert!(w.count_inside - boundary_multiplicity < need);
            }
        }

        #[test]
        fn rotation_shifts_center_and_keeps_counts(s in scatter_strategy(), phi in -3.0f64..3.0, c in 0.5f64..0.99) {
            let w0 = compute_wedge(&s, c, TailRule::Symmetric).unwrap();
            let w1 = compute_wedge(&rotate(&s, phi), c, TailRule::Symmetric).unwrap();
            prop_assert_eq!(w0.count_below, w1.count_below);
            prop_assert_eq!(w0.count_above, w1.count_above);
            prop_assert_eq!(w0.count_inside, w1.count_inside);
            prop_assert!((w0.half_angle - w1.half_angle).abs() < 1e-9);
            let shift = wrap_angle(w1.center.radians() - w0.center.radians() - phi);
            prop_assert!(shift.abs() < 1e-9);
        }

        #[test]
        fn uniform_positive_scaling_preserves_counts(s in scatter_strategy(), c in 0.5f64..0.99, k in 1e-3f64..1e3) {
            let w0 = compute_wedge(&s, c, TailRule::Symmetric).unwrap();
            let w1 = compute_wedge(&scale(&s, k), c, TailRule::Symmetric).unwrap();
            prop_assert_eq!(
                (w0.count_below, w0.count_above, w0.count_inside),
                (w1.count_below, w1.count_above, w1.count_inside)
            );
        }
    }
}
