//! Shadow-price (λ) selection and standardization of cost/effectiveness
//! differences into the alias (effectiveness-unit) and alibi (cost-unit)
//! perspectives.
//!
//! The statistical λ candidate is the ratio of the cost and effectiveness
//! spread of the between-arm difference; the recommended value is the
//! integer power of 10 nearest to that ratio in log scale, so that only
//! the decimal point of axis labels moves.

use thiserror::Error;

use crate::data_model::{summarize, ArmSample, Variable};

/// How a shadow price came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSource {
    UserSupplied,
    StatisticalRatio,
    NearestPowerOf10,
}

/// Monetary value per unit effectiveness, used to put both ICE axes in
/// commensurate units. Always strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowPrice {
    lambda: f64,
    source: LambdaSource,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("shadow price must be strictly positive and finite, got {0}")]
    InvalidLambda(f64),
    #[error("effectiveness spread is zero; the cost/effe scale ratio is undefined")]
    ZeroEffeVariance,
    #[error("cost spread is zero; no positive shadow price can be recommended")]
    ZeroCostVariance,
}

impl ShadowPrice {
    pub fn new(lambda: f64, source: LambdaSource) -> Result<Self, ScaleError> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Self { lambda, source })
        } else {
            Err(ScaleError::InvalidLambda(lambda))
        }
    }

    pub fn value(self) -> f64 {
        self.lambda
    }

    pub fn source(self) -> LambdaSource {
        self.source
    }

    /// λ = 1 in user-supplied mode; handy for unit-free geometry.
    pub fn unit() -> Self {
        Self {
            lambda: 1.0,
            source: LambdaSource::UserSupplied,
        }
    }
}

/// Unit system for standardized ICE points.
///
/// Alias expresses both axes in effectiveness units (cost divided by λ);
/// alibi expresses both in cost units (effectiveness multiplied by λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perspective {
    Alias,
    Alibi,
}

impl Perspective {
    pub fn name(self) -> &'static str {
        match self {
            Perspective::Alias => "alias",
            Perspective::Alibi => "alibi",
        }
    }
}

/// One standardized point on the ICE plane.
///
/// In the alias perspective the stored coordinates are (ΔE, ΔC/λ); in
/// the alibi perspective they are (λ·ΔE, ΔC). The origin is the standard
/// treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IceOutcome {
    pub x: f64,
    pub y: f64,
    pub lambda: ShadowPrice,
    pub perspective: Perspective,
}

impl IceOutcome {
    /// Re-expresses the point in the other unit system. Alias → alibi
    /// multiplies both coordinates by λ; alibi → alias divides.
    pub fn to_perspective(self, target: Perspective) -> IceOutcome {
        if self.perspective == target {
            return self;
        }
        let l = self.lambda.value();
        let (x, y) = match target {
            Perspective::Alibi => (self.x * l, self.y * l),
            Perspective::Alias => (self.x / l, self.y / l),
        };
        IceOutcome {
            x,
            y,
            lambda: self.lambda,
            perspective: target,
        }
    }
}

/// Standardizes a raw difference pair (ΔE, ΔC) into the requested
/// perspective: alias (ΔE, ΔC/λ) or alibi (λ·ΔE, ΔC).
pub fn standardize(
    delta_e: f64,
    delta_c: f64,
    lambda: ShadowPrice,
    perspective: Perspective,
) -> IceOutcome {
    let l = lambda.value();
    let (x, y) = match perspective {
        Perspective::Alias => (delta_e, delta_c / l),
        Perspective::Alibi => (l * delta_e, delta_c),
    };
    IceOutcome {
        x,
        y,
        lambda,
        perspective,
    }
}

/// Which spread statistic feeds the cost/effe scale ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleRule {
    /// Standard error of the between-arm mean difference per variable:
    /// S_v = sqrt(sd_v(Std)²/n_Std + sd_v(New)²/n_New). Default.
    StandardError,
    /// Pooled sample standard deviation per variable.
    Pooled,
}

impl ScaleRule {
    pub fn name(self) -> &'static str {
        match self {
            ScaleRule::StandardError => "se",
            ScaleRule::Pooled => "pooled",
        }
    }
}

/// Output of [`ice_scale`]: the statistical ratio, its components, and
/// the recommended power-of-10 shadow price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IceScaleResult {
    pub ratio: f64,
    pub s_cost: f64,
    pub s_effe: f64,
    pub rule: ScaleRule,
    pub recommended: ShadowPrice,
}

impl IceScaleResult {
    /// The raw ratio itself as a shadow price, for analysts who prefer
    /// it over the rounded power of 10.
    pub fn statistical_lambda(&self) -> ShadowPrice {
        ShadowPrice::new(self.ratio, LambdaSource::StatisticalRatio)
            .expect("ratio is positive and finite")
    }
}

/// Computes the cost/effectiveness scale ratio for a two-arm study and
/// recommends the integer power of 10 nearest to it in log scale.
///
/// Both arms must have computable, not-all-zero effectiveness spread.
pub fn ice_scale(
    std: &ArmSample,
    new: &ArmSample,
    rule: ScaleRule,
) -> Result<IceScaleResult, ScaleError> {
    let spread = |variable: Variable| -> f64 {
        let sd_std = summarize(std, variable).sd;
        let sd_new = summarize(new, variable).sd;
        let (n_std, n_new) = (std.n() as f64, new.n() as f64);
        match rule {
            ScaleRule::StandardError => (sd_std * sd_std / n_std + sd_new * sd_new / n_new).sqrt(),
            ScaleRule::Pooled => (((n_std - 1.0) * sd_std * sd_std
                + (n_new - 1.0) * sd_new * sd_new)
                / (n_std + n_new - 2.0))
                .sqrt(),
        }
    };
    let s_effe = spread(Variable::Effe);
    let s_cost = spread(Variable::Cost);
    if s_effe == 0.0 {
        return Err(ScaleError::ZeroEffeVariance);
    }
    if s_cost == 0.0 {
        return Err(ScaleError::ZeroCostVariance);
    }
    let ratio = s_cost / s_effe;
    let recommended = ShadowPrice::new(nearest_power_of_10(ratio), LambdaSource::NearestPowerOf10)?;
    Ok(IceScaleResult {
        ratio,
        s_cost,
        s_effe,
        rule,
        recommended,
    })
}

/// The integer power of 10 closest to `ratio` in log scale; ties at half
/// a decade round up (10^1.5 → 100).
pub fn nearest_power_of_10(ratio: f64) -> f64 {
    debug_assert!(ratio > 0.0 && ratio.is_finite());
    let exponent = (ratio.log10() + 0.5).floor();
    10f64.powf(exponent)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn nearest_power_stays_within_half_decade(log_r in -11.9f64..11.9) {
            let r = 10f64.powf(log_r);
            let rec = nearest_power_of_10(r);
            prop_assert!((rec.log10() - r.log10()).abs() <= 0.5 + 1e-12);
        }

        #[test]
        fn alias_alibi_round_trip_is_identity(
            de in -1e6f64..1e6,
            dc in -1e6f64..1e6,
            lambda in 1e-6f64..1e6,
        ) {
            let lambda = ShadowPrice::new(lambda, LambdaSource::UserSupplied).unwrap();
            let alias = standardize(de, dc, lambda, Perspective::Alias);
            let back = alias.to_perspective(Perspective::Alibi).to_perspective(Perspective::Alias);
            let tol = |a: f64| 1e-12 * a.abs().max(1.0);
            prop_assert!((back.x - alias.x).abs() <= tol(alias.x));
            prop_assert!((back.y - alias.y).abs() <= tol(alias.y));
        }

        #[test]
        fn alias_and_alibi_share_the_scaled_polar_angle(
            de in -1e3f64..1e3,
            dc in -1e3f64..1e3,
            lambda in 1e-3f64..1e3,
        ) {
            prop_assume!(de != 0.0 || dc != 0.0);
            let lambda = ShadowPrice::new(lambda, LambdaSource::UserSupplied).unwrap();
            let alias = standardize(de, dc, lambda, Perspective::Alias);
            let alibi = standardize(de, dc, lambda, Perspective::Alibi);
            let l = lambda.value();
            let a = alias.y.atan2(alias.x);
            let b = (alibi.y / l).atan2(alibi.x / l);
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn standardize_is_linear(
            de1 in -1e3f64..1e3, dc1 in -1e3f64..1e3,
            de2 in -1e3f64..1e3, dc2 in -1e3f64..1e3,
            a in -100.0f64..100.0,
            lambda in 1e-3f64..1e3,
        ) {
            let lambda = ShadowPrice::new(lambda, LambdaSource::UserSupplied).unwrap();
            for perspective in [Perspective::Alias, Perspective::Alibi] {
                let combined = standardize(a * de1 + de2, a * dc1 + dc2, lambda, perspective);
                let p1 = standardize(de1, dc1, lambda, perspective);
                let p2 = standardize(de2, dc2, lambda, perspective);
                let tol = |v: f64| 1e-9 * v.abs().max(1.0);
                prop_assert!((combined.x - (a * p1.x + p2.x)).abs() <= tol(combined.x));
                prop_assert!((combined.y - (a * p1.y + p2.y)).abs() <= tol(combined.y));
            }
        }
    }
}
