//! The two-parameter family of ICE preference maps, its monotonicity
//! validity bound Ω, the returns-to-scale law, and the four coherence
//! axioms as executable checks.
//!
//! A map with radius power β > 0 and signed-power exponent γ > 0 scores
//! a standardized ICE point (x, y) as
//!
//! ```text
//! P(x, y) = (x² + y²)^((β − γ)/2) · [x − y]^γ
//! ```
//!
//! where `[z]^c` is the signed power sign(z)·|z|^c. Preferences are
//! ordinal, so the proportionality constant is fixed at 1. The linear
//! Net Benefit map x − y is the β = γ = 1 special case. All maps of this
//! form satisfy the indifference/direction, re-labeling, and symmetry
//! axioms; monotonicity additionally requires 1/Ω ≤ γ/β ≤ Ω with
//! Ω = (1 + √2)².

use thiserror::Error;

use crate::scale::ShadowPrice;

/// Relative tolerance for the axiom equality checks.
pub const AXIOM_REL_TOL: f64 = 1e-9;

/// Default axiom-check grid: 41×41 points over [−2, 2]².
pub const DEFAULT_GRID_POINTS: usize = 41;
pub const DEFAULT_GRID_RANGE: f64 = 2.0;

#[derive(Debug, Error, PartialEq)]
pub enum PreferenceError {
    #[error(
        "power parameters must be strictly positive and finite, got beta={beta}, gamma={gamma}"
    )]
    InvalidMap { beta: f64, gamma: f64 },
}

/// How preference strength responds to scaling both differences by a
/// common positive factor f: P(f·x, f·y) = f^β · P(x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnsToScale {
    Decreasing,
    Constant,
    Increasing,
}

impl ReturnsToScale {
    pub fn name(self) -> &'static str {
        match self {
            ReturnsToScale::Decreasing => "decreasing",
            ReturnsToScale::Constant => "constant",
            ReturnsToScale::Increasing => "increasing",
        }
    }
}

/// Ordinal preference strength; positive favors the New treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceValue(f64);

impl PreferenceValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<PreferenceValue> for f64 {
    fn from(v: PreferenceValue) -> f64 {
        v.0
    }
}

/// Signed power `[z]^c` = sign(z) · |z|^c, real-valued for all real z.
pub fn signed_power(z: f64, c: f64) -> f64 {
    debug_assert!(c > 0.0);
    if z == 0.0 {
        0.0
    } else {
        z.signum() * z.abs().powf(c)
    }
}

/// (1/Ω, Ω) with Ω = (1 + √2)², the γ/β interval on which maps of this
/// family stay monotone.
pub fn omega_bounds() -> (f64, f64) {
    let omega = (1.0 + 2f64.sqrt()).powi(2);
    (1.0 / omega, omega)
}

/// One ICE preference map: radius power β, signed-power exponent γ, and
/// the shadow price that defines the units of the plane it scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceMap {
    beta: f64,
    gamma: f64,
    lambda: ShadowPrice,
}

impl PreferenceMap {
    pub fn new(beta: f64, gamma: f64, lambda: ShadowPrice) -> Result<Self, PreferenceError> {
        if beta > 0.0 && gamma > 0.0 && beta.is_finite() && gamma.is_finite() {
            Ok(Self {
                beta,
                gamma,
                lambda,
            })
        } else {
            Err(PreferenceError::InvalidMap { beta, gamma })
        }
    }

    /// Map with λ = 1, for unit-free work.
    pub fn with_unit_lambda(beta: f64, gamma: f64) -> Result<Self, PreferenceError> {
        Self::new(beta, gamma, ShadowPrice::unit())
    }

    /// The linear Net Benefit map x − y (β = γ = 1).
    pub fn net_benefit() -> Self {
        Self::with_unit_lambda(1.0, 1.0).expect("1,1 is valid")
    }

    /// The maximally nonlinear monotone map: β = 1, γ = Ω.
    pub fn omega_map() -> Self {
        Self::with_unit_lambda(1.0, omega_bounds().1).expect("omega map is valid")
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> ShadowPrice {
        self.lambda
    }

    /// True iff 1/Ω ≤ γ/β ≤ Ω, the condition for monotonicity.
    pub fn is_monotone_valid(&self) -> bool {
        let (lo, hi) = omega_bounds();
        let ratio = self.gamma / self.beta;
        (lo..=hi).contains(&ratio)
    }

    /// Scores a standardized point. Zero on the whole x = y diagonal
    /// (including the origin, where continuity along the diagonal pins
    /// the value); elsewhere the direct product form. For β < γ the
    /// magnitude grows without bound near the origin off the diagonal.
    pub fn evaluate(&self, x: f64, y: f64) -> PreferenceValue {
        PreferenceValue(self.eval_raw(x, y))
    }

    fn eval_raw(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return 0.0;
        }
        let radius_factor = (x * x + y * y).powf((self.beta - self.gamma) / 2.0);
        radius_factor * signed_power(x - y, self.gamma)
    }

    /// Decreasing iff β < 1, constant iff β = 1, increasing iff β > 1.
    pub fn returns_to_scale(&self) -> ReturnsToScale {
        if self.beta < 1.0 {
            ReturnsToScale::Decreasing
        } else if self.beta == 1.0 {
            ReturnsToScale::Constant
        } else {
            ReturnsToScale::Increasing
        }
    }

    /// Searches `points` for a pair (q, p) with x_p ≥ x_q, y_p ≤ y_q and
    /// P(p) < P(q) − tol, i.e. a monotonicity violation. Returns the
    /// witnessing (better-dominated, worse-scoring) pair.
    ///
    /// All ordered pairs are covered in O(m log m) by sweeping the points
    /// in x order with a prefix-max structure over compressed y ranks.
    pub fn find_monotonicity_violation(
        &self,
        points: &[(f64, f64)],
    ) -> Option<MonotonicityWitness> {
        let m = points.len();
        if m < 2 {
            return None;
        }
        let values: Vec<f64> = points.iter().map(|&(x, y)| self.eval_raw(x, y)).collect();
        // Adjusted score: a pair violates when P(p) < P(q) − rel tol.
        let adjusted: Vec<f64> = values
            .iter()
            .map(|&v| v - AXIOM_REL_TOL * v.abs().max(1.0))
            .collect();

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| points[a].0.total_cmp(&points[b].0));

        // Compress y to ranks; the Fenwick tree is indexed by descending
        // y so "all q with y_q ≥ y_p" becomes a prefix query.
        let mut ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let rank_desc = |y: f64| -> usize {
            let asc = ys.partition_point(|&v| v < y); // index of y in ys
            ys.len() - asc // 1-based rank from the top
        };

        let mut tree = PrefixMax::new(ys.len());
        let mut i = 0;
        while i < m {
            // Group of equal x.
            let mut j = i;
            let x = points[order[i]].0;
            while j < m && points[order[j]].0 == x {
                j += 1;
            }
            let group = &order[i..j];

            // Cross-group pairs: q already inserted has x_q < x_p.
            for &p in group {
                if let Some((best, q)) = tree.query(rank_desc(points[p].1)) {
                    if values[p] < best {
                        return Some(MonotonicityWitness {
                            from: points[q],
                            to: points[p],
                            from_value: values[q],
                            to_value: values[p],
                        });
                    }
                }
            }
            // Within-group pairs share x; only the y order matters.
            let mut by_y_desc: Vec<usize> = group.to_vec();
            by_y_desc.sort_by(|&a, &b| points[b].1.total_cmp(&points[a].1));
            let mut best: Option<(f64, usize)> = None;
            for &p in &by_y_desc {
                if let Some((b, q)) = best {
                    if values[p] < b {
                        return Some(MonotonicityWitness {
                            from: points[q],
                            to: points[p],
                            from_value: values[q],
                            to_value: values[p],
                        });
                    }
                }
                if best.is_none_or(|(b, _)| adjusted[p] > b) {
                    best = Some((adjusted[p], p));
                }
            }
            for &p in group {
                tree.insert(rank_desc(points[p].1), adjusted[p], p);
            }
            i = j;
        }
        None
    }

    /// Runs the four coherence axioms over a finite point set and reports
    /// pass/fail per axiom. Failures are report entries, not errors.
    ///
    /// The grid must not contain the exact origin (see
    /// [`square_grid`]); equalities are compared at relative tolerance
    /// [`AXIOM_REL_TOL`].
    pub fn check_axioms(&self, points: &[(f64, f64)]) -> AxiomReport {
        let close =
            |a: f64, b: f64| (a - b).abs() <= AXIOM_REL_TOL * a.abs().max(b.abs()).max(1e-300);

        let mut indifference = AxiomCheck::pass();
        let mut relabeling = AxiomCheck::pass();
        let mut symmetry = AxiomCheck::pass();
        for &(x, y) in points {
            let p = self.eval_raw(x, y);
            if indifference.passed {
                let ok = if x == y {
                    p == 0.0
                } else if x > y {
                    p > 0.0
                } else {
                    p < 0.0
                };
                if !ok {
                    indifference = AxiomCheck::fail(format!(
                        "sign(P({x}, {y})) = sign({p}) does not match sign(x − y)"
                    ));
                }
            }
            if relabeling.passed {
                let q = self.eval_raw(-x, -y);
                if !close(p, -q) {
                    relabeling = AxiomCheck::fail(format!(
                        "P({x}, {y}) = {p} but −P({viewx}, {viewy}) = {mq}",
                        viewx = -x,
                        viewy = -y,
                        mq = -q
                    ));
                }
            }
            if symmetry.passed {
                let refl = self.eval_raw(-y, -x);
                let swap = self.eval_raw(y, x);
                if !close(p, refl) || !close(p, -swap) {
                    symmetry = AxiomCheck::fail(format!(
                        "P({x}, {y}) = {p}, P({my}, {mx}) = {refl}, −P({y}, {x}) = {mswap}",
                        my = -y,
                        mx = -x,
                        mswap = -swap
                    ));
                }
            }
        }

        let monotonicity = match self.find_monotonicity_violation(points) {
            None => AxiomCheck::pass(),
            Some(w) => AxiomCheck::fail(format!(
                "P{:?} = {} exceeds P{:?} = {} despite the latter being at least as effective and no more costly",
                w.from, w.from_value, w.to, w.to_value
            )),
        };

        AxiomReport {
            indifference_direction: indifference,
            monotonicity,
            relabeling,
            symmetry,
        }
    }
}

/// A monotonicity counterexample: moving from `from` to `to` gains
/// effectiveness and sheds cost, yet the preference value drops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityWitness {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub from_value: f64,
    pub to_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub passed: bool,
    pub detail: Option<String>,
}

impl AxiomCheck {
    fn pass() -> Self {
        Self {
            passed: true,
            detail: None,
        }
    }

    fn fail(detail: String) -> Self {
        Self {
            passed: false,
            detail: Some(detail),
        }
    }
}

/// Results of the four-axiom suite.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub indifference_direction: AxiomCheck,
    pub monotonicity: AxiomCheck,
    pub relabeling: AxiomCheck,
    pub symmetry: AxiomCheck,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.indifference_direction.passed
            && self.monotonicity.passed
            && self.relabeling.passed
            && self.symmetry.passed
    }
}

/// n×n lattice over [−range, range]², excluding the exact origin (the
/// origin has no defined preference direction and would poison the
/// monotonicity comparison for β < γ).
pub fn square_grid(n: usize, range: f64) -> Vec<(f64, f64)> {
    assert!(n >= 2 && range > 0.0);
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = -range + 2.0 * range * i as f64 / (n - 1) as f64;
            let y = -range + 2.0 * range * j as f64 / (n - 1) as f64;
            if x == 0.0 && y == 0.0 {
                continue;
            }
            points.push((x, y));
        }
    }
    points
}

/// Fenwick tree over prefix maxima of (score, payload index).
struct PrefixMax {
    tree: Vec<Option<(f64, usize)>>,
}

impl PrefixMax {
    fn new(len: usize) -> Self {
        Self {
            tree: vec![None; len + 1],
        }
    }

    fn insert(&mut self, mut idx: usize, score: f64, payload: usize) {
        while idx < self.tree.len() {
            if self.tree[idx].is_none_or(|(s, _)| score > s) {
                self.tree[idx] = Some((score, payload));
            }
            idx += idx & idx.wrapping_neg();
        }
    }

    fn query(&self, mut idx: usize) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        while idx > 0 {
            if let Some((s, p)) = self.tree[idx] {
                if best.is_none_or(|(b, _)| s > b) {
                    best = Some((s, p));
                }
            }
            idx -= idx & idx.wrapping_neg();
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_power_keeps_fractional_roots_real() {
        assert_eq!(signed_power(-4.0, 0.5), -2.0);
        assert_eq!(signed_power(0.0, 0.5), 0.0);
        assert_eq!(signed_power(0.0, 3.0), 0.0);
        assert_eq!(signed_power(-3.0, 2.0), -9.0);
        assert_eq!(signed_power(2.0, 3.0), 8.0);
    }

    #[test]
    fn omega_bounds_match_closed_form() {
        let (lo, hi) = omega_bounds();
        assert!((hi - 5.828427).abs() < 1e-6);
        assert!((lo - 0.1715729).abs() < 1e-7);
        assert!((lo * hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn net_benefit_is_the_unit_special_case() {
        let nb = PreferenceMap::net_benefit();
        for &(x, y) in &[
            (0.3, -0.9),
            (-2.0, 1.5),
            (5.0, 5.0),
            (0.0, 0.0),
            (1e-9, -1e9),
        ] {
            assert_eq!(nb.evaluate(x, y).value(), x - y);
        }
    }

    #[test]
    fn diagonal_scores_zero_for_every_map() {
        let maps = [
            PreferenceMap::with_unit_lambda(1.0, 1.0).unwrap(),
            PreferenceMap::with_unit_lambda(0.5, 2.0).unwrap(),
            PreferenceMap::omega_map(),
        ];
        for map in maps {
            for v in [-3.0, -0.1, 0.0, 0.4, 7.0] {
                assert_eq!(map.evaluate(v, v).value(), 0.0);
            }
        }
    }

    #[test]
    fn unit_circle_point_scores_one_under_omega_map() {
        // (1, 0): the radius term is 1^((1−γ)/2) = 1 and [1]^γ = 1.
        let map = PreferenceMap::with_unit_lambda(1.0, 5.828427).unwrap();
        assert!((map.evaluate(1.0, 0.0).value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(PreferenceMap::with_unit_lambda(0.0, 1.0).is_err());
        assert!(PreferenceMap::with_unit_lambda(1.0, -2.0).is_err());
        assert!(PreferenceMap::with_unit_lambda(f64::NAN, 1.0).is_err());
        assert!(PreferenceMap::with_unit_lambda(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn returns_to_scale_depends_only_on_beta() {
        let rts = |beta: f64| {
            PreferenceMap::with_unit_lambda(beta, beta) // ratio 1 keeps it valid
                .unwrap()
                .returns_to_scale()
        };
        assert_eq!(rts(0.5), ReturnsToScale::Decreasing);
        assert_eq!(rts(1.0), ReturnsToScale::Constant);
        assert_eq!(rts(2.0), ReturnsToScale::Increasing);
    }

    #[test]
    fn validity_flag_tracks_omega_interval() {
        let (lo, hi) = omega_bounds();
        let valid = |b: f64, g: f64| {
            PreferenceMap::with_unit_lambda(b, g)
                .unwrap()
                .is_monotone_valid()
        };
        assert!(valid(1.0, 1.0));
        assert!(valid(1.0, hi));
        assert!(valid(1.0, lo));
        assert!(valid(2.0, 2.0 * hi));
        assert!(!valid(1.0, hi * 1.01));
        assert!(!valid(1.0, lo * 0.99));
    }

    #[test]
    fn net_benefit_passes_all_axioms() {
        let grid = square_grid(DEFAULT_GRID_POINTS, DEFAULT_GRID_RANGE);
        let report = PreferenceMap::net_benefit().check_axioms(&grid);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn omega_boundary_map_passes_all_axioms() {
        let grid = square_grid(DEFAULT_GRID_POINTS, DEFAULT_GRID_RANGE);
        let report = PreferenceMap::omega_map().check_axioms(&grid);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn ratio_beyond_omega_fails_monotonicity() {
        let grid = square_grid(DEFAULT_GRID_POINTS, DEFAULT_GRID_RANGE);
        let map = PreferenceMap::with_unit_lambda(1.0, 8.0).unwrap();
        let report = map.check_axioms(&grid);
        assert!(!report.monotonicity.passed);
        // The other three hold for every member of the family.
        assert!(report.indifference_direction.passed);
        assert!(report.relabeling.passed);
        assert!(report.symmetry.passed);

        let w = map.find_monotonicity_violation(&grid).expect("violation");
        assert!(w.to.0 >= w.from.0 && w.to.1 <= w.from.1);
        assert!(w.to_value < w.from_value);
    }

    #[test]
    fn sweep_matches_brute_force_search() {
        // The O(m log m) sweep must agree with the quadratic definition.
        let brute = |map: &PreferenceMap, pts: &[(f64, f64)]| -> bool {
            for &(x0, y0) in pts {
                let p0 = map.evaluate(x0, y0).value();
                let bar = p0 - AXIOM_REL_TOL * p0.abs().max(1.0);
                for &(x, y) in pts {
                    if x >= x0 && y <= y0 && map.evaluate(x, y).value() < bar {
                        return true;
                    }
                }
            }
            false
        };
        let grid = square_grid(15, 2.0);
        for (b, g) in [
            (1.0, 1.0),
            (1.0, 5.0),
            (1.0, 6.5),
            (2.0, 12.5),
            (1.0, 0.15),
            (0.7, 4.2),
        ] {
            let map = PreferenceMap::with_unit_lambda(b, g).unwrap();
            assert_eq!(
                map.find_monotonicity_violation(&grid).is_some(),
                brute(&map, &grid),
                "disagreement at beta={b}, gamma={g}"
            );
        }
    }

    #[test]
    fn grid_excludes_origin() {
        let grid = square_grid(41, 2.0);
        assert_eq!(grid.len(), 41 * 41 - 1);
        assert!(grid.iter().all(|&(x, y)| x != 0.0 || y != 0.0));
    }
}
