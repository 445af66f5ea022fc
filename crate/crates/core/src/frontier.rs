//! Cost-effectiveness frontier over a set of treatment options: strict
//! dominance, extended dominance against two-option mixtures, and the
//! lower convex boundary in the (effe, cost) plane.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FrontierError {
    #[error("duplicate option name `{0}`")]
    DuplicateName(String),
    #[error("option `{0}` has a non-finite coordinate")]
    NonFiniteCoordinate(String),
    #[error("at least one option is required")]
    NoOptions,
    #[error("target effectiveness must lie strictly between the bracketing options")]
    OutsideBracket,
}

/// One candidate treatment at a (effectiveness, cost) position.
#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentOption {
    pub name: String,
    pub effe: f64,
    pub cost: f64,
}

impl TreatmentOption {
    pub fn new(name: impl Into<String>, effe: f64, cost: f64) -> Self {
        Self {
            name: name.into(),
            effe,
            cost,
        }
    }
}

/// Frontier classification of an option set.
///
/// `frontier` is ordered by increasing effectiveness and forms the lower
/// convex boundary; `dominated` options lost to a single strictly better
/// option; `extendedly_dominated` options sit strictly above a frontier
/// segment and lose to a mixture of its endpoints; `duplicates` are
/// exact coordinate copies of an earlier option (the frontier itself is
/// invariant to removing them).
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierResult {
    pub frontier: Vec<TreatmentOption>,
    pub dominated: Vec<(TreatmentOption, String)>,
    pub extendedly_dominated: Vec<(TreatmentOption, (String, String))>,
    pub duplicates: Vec<(TreatmentOption, String)>,
}

impl FrontierResult {
    /// Incremental cost per incremental effectiveness between adjacent
    /// frontier options, in frontier order.
    pub fn incremental_slopes(&self) -> Vec<(String, String, f64)> {
        self.frontier
            .windows(2)
            .map(|w| {
                (
                    w[0].name.clone(),
                    w[1].name.clone(),
                    (w[1].cost - w[0].cost) / (w[1].effe - w[0].effe),
                )
            })
            .collect()
    }
}

/// Splits options into those kept and those strictly dominated: another
/// option is at least as effective and at most as costly, with at least
/// one inequality strict. Each dominated entry records the first
/// witnessing dominator in input order.
pub fn strict_dominance(
    options: &[TreatmentOption],
) -> (Vec<TreatmentOption>, Vec<(TreatmentOption, String)>) {
    let mut kept = Vec::new();
    let mut dominated = Vec::new();
    for p in options {
        let witness = options
            .iter()
            .find(|q| q.effe >= p.effe && q.cost <= p.cost && (q.effe > p.effe || q.cost < p.cost));
        match witness {
            Some(q) => dominated.push((p.clone(), q.name.clone())),
            None => kept.push(p.clone()),
        }
    }
    (kept, dominated)
}

/// Builds the lower convex frontier of strict-dominance survivors and
/// classifies the points strictly above it as extendedly dominated,
/// recording their bracketing frontier neighbors. Points exactly on a
/// frontier segment stay on the frontier.
pub fn extended_dominance(kept: &[TreatmentOption]) -> FrontierResult {
    // Exact coordinate copies collapse onto their first occurrence.
    let mut unique: Vec<TreatmentOption> = Vec::new();
    let mut duplicates = Vec::new();
    for p in kept {
        match unique.iter().find(|q| q.effe == p.effe && q.cost == p.cost) {
            Some(q) => duplicates.push((p.clone(), q.name.clone())),
            None => unique.push(p.clone()),
        }
    }

    let mut sorted = unique.clone();
    sorted.sort_by(|a, b| a.effe.total_cmp(&b.effe).then(a.cost.total_cmp(&b.cost)));

    // Andrew's monotone chain, lower hull only. cross > 0 keeps left
    // turns; collinear points (cross == 0) are kept on the frontier.
    let mut hull: Vec<TreatmentOption> = Vec::new();
    for p in &sorted {
        while hull.len() >= 2 {
            let o = &hull[hull.len() - 2];
            let a = &hull[hull.len() - 1];
            let cross =
                (a.effe - o.effe) * (p.cost - o.cost) - (a.cost - o.cost) * (p.effe - o.effe);
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }

    let on_hull: HashSet<&str> = hull.iter().map(|p| p.name.as_str()).collect();
    let mut extendedly_dominated = Vec::new();
    for p in &unique {
        if on_hull.contains(p.name.as_str()) {
            continue;
        }
        let segment = hull
            .windows(2)
            .find(|w| w[0].effe <= p.effe && p.effe <= w[1].effe)
            .expect("hull spans the effe range of every kept point");
        extendedly_dominated.push((
            p.clone(),
            (segment[0].name.clone(), segment[1].name.clone()),
        ));
    }

    FrontierResult {
        frontier: hull,
        dominated: Vec::new(),
        extendedly_dominated,
        duplicates,
    }
}

/// Full frontier analysis: validates names and coordinates, applies
/// strict dominance, then extended dominance.
pub fn analyze(options: &[TreatmentOption]) -> Result<FrontierResult, FrontierError> {
    if options.is_empty() {
        return Err(FrontierError::NoOptions);
    }
    let mut names = HashSet::new();
    for p in options {
        if !p.effe.is_finite() || !p.cost.is_finite() {
            return Err(FrontierError::NonFiniteCoordinate(p.name.clone()));
        }
        if !names.insert(p.name.as_str()) {
            return Err(FrontierError::DuplicateName(p.name.clone()));
        }
    }
    let (kept, dominated) = strict_dominance(options);
    let mut result = extended_dominance(&kept);
    result.dominated = dominated;
    Ok(result)
}

/// Compares `target` against the mixture of `left` and `right` that
/// matches its effectiveness exactly. Returns the weight on `left` and
/// the cost saved by switching to the mixture; a positive saving means
/// the target is extendedly dominated at equal effectiveness.
pub fn mixture_compare(
    target: &TreatmentOption,
    left: &TreatmentOption,
    right: &TreatmentOption,
) -> Result<(f64, f64), FrontierError> {
    if !(left.effe < target.effe && target.effe < right.effe) {
        return Err(FrontierError::OutsideBracket);
    }
    let w = (right.effe - target.effe) / (right.effe - left.effe);
    let mixture_cost = w * left.cost + (1.0 - w) * right.cost;
    Ok((w, target.cost - mixture_cost))
}
