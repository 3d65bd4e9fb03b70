//! Scoring detections against ground truth: one-to-one matching,
//! probability of detection, false alarms per km² and threshold sweeps.

use rayon::prelude::*;

use crate::cda::{compute_threshold, detect_on_difference, difference};
use crate::error::{Error, Result};
use crate::image::{CdaParams, Detection, Image, Target};

/// Default match radius in pixels.
pub const DEFAULT_MATCH_RADIUS_PX: f64 = 10.0;

/// Threshold constants swept by default.
pub const DEFAULT_C_VALUES: [f64; 5] = [2.0, 3.0, 4.0, 5.0, 6.0];

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    pub target_id: String,
    pub target_index: usize,
    pub detection_index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchResult {
    pub matched_pairs: Vec<MatchedPair>,
    pub missed_targets: Vec<String>,
    pub false_alarms: Vec<usize>,
}

impl MatchResult {
    pub fn matched(&self) -> usize {
        self.matched_pairs.len()
    }
}

/// Greedy nearest-first one-to-one matching of detection centroids to
/// targets. Pairs farther than `radius_px` are never formed. Equal distances
/// go to the lower target id.
pub fn match_detections(detections: &[Detection], targets: &[Target], radius_px: f64) -> Result<MatchResult> {
    if !(radius_px.is_finite() && radius_px > 0.0) {
        return Err(Error::Argument(format!("match radius must be positive, got {radius_px}")));
    }
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (ti, t) in targets.iter().enumerate() {
        for (di, d) in detections.iter().enumerate() {
            let dist = (d.centroid_row - t.row).hypot(d.centroid_col - t.col);
            if dist <= radius_px {
                candidates.push((dist, ti, di));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| targets[a.1].id.cmp(&targets[b.1].id))
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut target_used = vec![false; targets.len()];
    let mut det_used = vec![false; detections.len()];
    let mut pairs = Vec::new();
    for (dist, ti, di) in candidates {
        if target_used[ti] || det_used[di] {
            continue;
        }
        target_used[ti] = true;
        det_used[di] = true;
        pairs.push(MatchedPair {
            target_id: targets[ti].id.clone(),
            target_index: ti,
            detection_index: di,
            distance: dist,
        });
    }
    pairs.sort_by_key(|p| p.target_index);
    Ok(MatchResult {
        matched_pairs: pairs,
        missed_targets: targets
            .iter()
            .zip(&target_used)
            .filter(|(_, &u)| !u)
            .map(|(t, _)| t.id.clone())
            .collect(),
        false_alarms: (0..detections.len()).filter(|&i| !det_used[i]).collect(),
    })
}

/// `(pd, far)`: matched / known and false alarms per km².
pub fn score(result: &MatchResult, known_count: usize, area_km2: f64) -> Result<(f64, f64)> {
    rates(result.matched(), known_count, result.false_alarms.len(), area_km2)
}

fn rates(matched: usize, known: usize, false_alarms: usize, area_km2: f64) -> Result<(f64, f64)> {
    if known == 0 {
        return Err(Error::Argument("known target count must be positive".into()));
    }
    if !(area_km2.is_finite() && area_km2 > 0.0) {
        return Err(Error::Argument(format!("area must be positive, got {area_km2}")));
    }
    Ok((matched as f64 / known as f64, false_alarms as f64 / area_km2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocRow {
    pub c_constant: f64,
    /// Mean of the per-case thresholds.
    pub lambda: f64,
    pub detected: usize,
    pub known: usize,
    pub pd: f64,
    pub false_alarms: usize,
    pub area_km2: f64,
    pub far: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RocTable {
    pub rows: Vec<RocRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseLabel {
    pub mission: String,
    pub pass: String,
}

impl CaseLabel {
    pub fn new(mission: impl Into<String>, pass: impl Into<String>) -> Self {
        Self {
            mission: mission.into(),
            pass: pass.into(),
        }
    }
}

/// One surveillance image with its reference and ground truth.
#[derive(Debug, Clone, Copy)]
pub struct Case<'a> {
    pub label: &'a CaseLabel,
    pub surveillance: &'a Image,
    pub reference: &'a Image,
    pub targets: &'a [Target],
}

/// Per-case counts for one threshold constant.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub label: CaseLabel,
    pub c_constant: f64,
    pub lambda: f64,
    pub known: usize,
    pub detected: usize,
    pub false_alarms: usize,
    pub detections: Vec<Detection>,
}

impl CaseOutcome {
    pub fn pd(&self) -> f64 {
        if self.known == 0 {
            0.0
        } else {
            self.detected as f64 / self.known as f64
        }
    }
}

/// Runs detection for every case at every `C`; result is indexed `[c][case]`.
pub fn evaluate_cases(
    cases: &[Case<'_>],
    c_values: &[f64],
    params: &CdaParams,
    radius_px: f64,
) -> Result<Vec<Vec<CaseOutcome>>> {
    if cases.is_empty() {
        return Err(Error::Argument("no cases to evaluate".into()));
    }
    if c_values.is_empty() {
        return Err(Error::Argument("no threshold constants given".into()));
    }
    for &c in c_values {
        CdaParams { c_constant: c, ..*params }.validate()?;
    }
    let per_case: Vec<Result<Vec<CaseOutcome>>> = cases
        .par_iter()
        .map(|case| {
            let diff = difference(case.surveillance, case.reference)?;
            let base = compute_threshold(&diff, c_values[0]);
            c_values
                .iter()
                .map(|&c| {
                    let p = CdaParams { c_constant: c, ..*params };
                    let run = detect_on_difference(&diff, &base.with_c(c), &p)?;
                    let m = match_detections(&run.detections, case.targets, radius_px)?;
                    Ok(CaseOutcome {
                        label: case.label.clone(),
                        c_constant: c,
                        lambda: run.threshold.lambda,
                        known: case.targets.len(),
                        detected: m.matched(),
                        false_alarms: m.false_alarms.len(),
                        detections: run.detections,
                    })
                })
                .collect()
        })
        .collect();
    let per_case = per_case.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((0..c_values.len())
        .map(|ci| per_case.iter().map(|outcomes| outcomes[ci].clone()).collect())
        .collect())
}

/// Aggregates [`evaluate_cases`] into one ROC row per `C`.
pub fn roc_table(outcomes: &[Vec<CaseOutcome>], area_km2_per_image: f64) -> Result<RocTable> {
    let mut rows = Vec::with_capacity(outcomes.len());
    for at_c in outcomes {
        let first = at_c
            .first()
            .ok_or_else(|| Error::Argument("no cases to aggregate".into()))?;
        let known: usize = at_c.iter().map(|o| o.known).sum();
        let detected: usize = at_c.iter().map(|o| o.detected).sum();
        let false_alarms: usize = at_c.iter().map(|o| o.false_alarms).sum();
        let area_km2 = at_c.len() as f64 * area_km2_per_image;
        let (pd, far) = rates(detected, known, false_alarms, area_km2)?;
        rows.push(RocRow {
            c_constant: first.c_constant,
            lambda: at_c.iter().map(|o| o.lambda).sum::<f64>() / at_c.len() as f64,
            detected,
            known,
            pd,
            false_alarms,
            area_km2,
            far,
        });
    }
    Ok(RocTable { rows })
}

pub fn roc_sweep(
    cases: &[Case<'_>],
    c_values: &[f64],
    params: &CdaParams,
    radius_px: f64,
    area_km2_per_image: f64,
) -> Result<RocTable> {
    roc_table(&evaluate_cases(cases, c_values, params, radius_px)?, area_km2_per_image)
}

/// Per-case rows `mission,pass,known,detected,pd,false_alarms`.
pub fn render_case_table(outcomes: &[CaseOutcome]) -> String {
    let mut out = String::from(crate::io::CASE_TABLE_HEADER);
    out.push('\n');
    for o in outcomes {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{}\n",
            o.label.mission,
            o.label.pass,
            o.known,
            o.detected,
            o.pd(),
            o.false_alarms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::BoundingBox;

    fn det(r: f64, c: f64) -> Detection {
        Detection {
            centroid_row: r,
            centroid_col: c,
            pixel_count: 1,
            bbox: BoundingBox {
                min_row: r as usize,
                min_col: c as usize,
                max_row: r as usize,
                max_col: c as usize,
            },
        }
    }

    #[test]
    fn single_pair() {
        let m = match_detections(&[det(10.0, 10.0)], &[Target::new("t", 12.0, 12.0)], 10.0).unwrap();
        assert_eq!(m.matched(), 1);
        assert!((m.matched_pairs[0].distance - 8f64.sqrt()).abs() < 1e-12);
        assert!(m.missed_targets.is_empty() && m.false_alarms.is_empty());
    }

    #[test]
    fn nothing_detected() {
        let targets: Vec<Target> = (0..25).map(|i| Target::new(format!("t{i}"), i as f64, 0.0)).collect();
        let m = match_detections(&[], &targets, 10.0).unwrap();
        assert_eq!(m.missed_targets.len(), 25);
        assert_eq!(score(&m, 25, 6.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn nearest_detection_wins() {
        let m = match_detections(&[det(5.0, 9.0), det(5.0, 6.0)], &[Target::new("t", 5.0, 5.0)], 10.0).unwrap();
        assert_eq!(m.matched_pairs[0].detection_index, 1);
        assert_eq!(m.false_alarms, vec![0]);
    }

    #[test]
    fn beyond_radius_not_matched() {
        let m = match_detections(&[det(0.0, 0.0)], &[Target::new("t", 0.0, 10.5)], 10.0).unwrap();
        assert_eq!(m.matched(), 0);
        assert!(match_detections(&[], &[], 0.0).is_err());
    }

    #[test]
    fn equal_distance_goes_to_lower_id() {
        let m = match_detections(
            &[det(5.0, 5.0)],
            &[Target::new("b", 5.0, 8.0), Target::new("a", 5.0, 2.0)],
            10.0,
        )
        .unwrap();
        assert_eq!(m.matched_pairs[0].target_id, "a");
        assert_eq!(m.missed_targets, vec!["b".to_string()]);
    }

    #[test]
    fn rates_match_reported_totals() {
        let (pd, far) = rates(579, 600, 22, 144.0).unwrap();
        assert!((pd - 0.965).abs() < 1e-12);
        assert!((far - 0.152_777_777_777_777_8).abs() < 1e-12);
        assert_eq!(rates(25, 25, 0, 6.0).unwrap(), (1.0, 0.0));
        assert_eq!(rates(0, 25, 0, 6.0).unwrap().0, 0.0);
        assert!(rates(1, 0, 0, 6.0).is_err());
        assert!(rates(1, 1, 0, 0.0).is_err());
        // scale consistency
        assert_eq!(rates(1, 2, 3, 4.0).unwrap().1, rates(1, 2, 6, 8.0).unwrap().1);
    }

    #[test]
    fn sweep_preconditions() {
        let img = Image::filled(10, 10, 0.1).unwrap();
        let label = CaseLabel::new("1", "1");
        let case = Case {
            label: &label,
            surveillance: &img,
            reference: &img,
            targets: &[],
        };
        let p = CdaParams::default();
        assert!(roc_sweep(&[case], &[], &p, 10.0, 6.0).is_err());
        assert!(roc_sweep(&[], &[5.0], &p, 10.0, 6.0).is_err());
    }
}
