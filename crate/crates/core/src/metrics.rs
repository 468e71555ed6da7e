//! KPIs comparing a PGT grid against the GT grid, and the validity gate.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{logodds_to_prob, CellMask, OccupancyGrid};
use crate::pgt::observed_mask;

/// Minimum KPI values for a PGT to count as a GT substitute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpiThresholds {
    pub pearson_min: f64,
    pub map_score_min: f64,
    pub ocr_min: f64,
}

impl Default for KpiThresholds {
    fn default() -> Self {
        Self { pearson_min: 0.95, map_score_min: 0.90, ocr_min: 0.90 }
    }
}

impl KpiThresholds {
    pub fn new(pearson_min: f64, map_score_min: f64, ocr_min: f64) -> Result<Self> {
        let t = Self { pearson_min, map_score_min, ocr_min };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.pearson_min) {
            return Err(Error::invalid("thresholds.pearson", "must lie in [-1, 1]"));
        }
        if !(0.0..=1.0).contains(&self.map_score_min) {
            return Err(Error::invalid("thresholds.map_score", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.ocr_min) {
            return Err(Error::invalid("thresholds.ocr", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// `None` marks an undefined KPI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpiReport {
    pub pearson: Option<f64>,
    pub map_score: Option<f64>,
    pub occupied_cells_ratio: Option<f64>,
    pub n_observed: usize,
    pub n_gt_occupied_observed: usize,
    pub valid: bool,
    pub thresholds: KpiThresholds,
}

impl KpiReport {
    fn gate(&mut self) {
        let t = &self.thresholds;
        self.valid = match (self.pearson, self.map_score, self.occupied_cells_ratio) {
            (Some(r), Some(ms), Some(ocr)) => r >= t.pearson_min && ms >= t.map_score_min && ocr >= t.ocr_min,
            _ => false,
        };
    }

    /// Same KPIs judged against other thresholds.
    pub fn with_thresholds(mut self, thresholds: KpiThresholds) -> Self {
        self.thresholds = thresholds;
        self.gate();
        self
    }
}

/// Pearson correlation between `xs` and the binary series `ys`.
///
/// `None` when the series are empty or either has zero variance. If `xs`
/// takes one value on each class of `ys` it is an exact affine function of
/// `ys`, and the result is exactly ±1.
pub fn pearson_series(xs: &[f64], ys: &[bool]) -> Result<Option<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: (xs.len(), 1), found: (ys.len(), 1) });
    }
    if xs.is_empty() {
        return Ok(None);
    }
    let mut class = [None::<(f64, f64)>; 2];
    for (x, y) in xs.iter().zip(ys) {
        let c = &mut class[*y as usize];
        *c = Some(match *c {
            None => (*x, *x),
            Some((lo, hi)) => (lo.min(*x), hi.max(*x)),
        });
    }
    let (Some(c0), Some(c1)) = (class[0], class[1]) else {
        return Ok(None);
    };
    if c0.0 == c0.1 && c1.0 == c1.1 {
        return Ok(match c1.0.partial_cmp(&c0.0) {
            Some(core::cmp::Ordering::Greater) => Some(1.0),
            Some(core::cmp::Ordering::Less) => Some(-1.0),
            _ => None,
        });
    }

    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().filter(|y| **y).count() as f64 / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = if *y { 1.0 } else { 0.0 } - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0)))
}

/// Mean probability assigned to the true state of each cell.
pub fn map_score_series(ps: &[f64], gs: &[bool]) -> Result<f64> {
    if ps.len() != gs.len() {
        return Err(Error::DimensionMismatch { expected: (ps.len(), 1), found: (gs.len(), 1) });
    }
    if ps.is_empty() {
        return Err(Error::EmptyMask);
    }
    let total: f64 = ps.iter().zip(gs).map(|(p, g)| if *g { *p } else { 1.0 - p }).sum();
    Ok(total / ps.len() as f64)
}

/// Share of occupied reference cells with `p > occ_threshold`. `None` without any.
pub fn ocr_series(ps: &[f64], gs: &[bool], occ_threshold: f64) -> Result<Option<f64>> {
    if ps.len() != gs.len() {
        return Err(Error::DimensionMismatch { expected: (ps.len(), 1), found: (gs.len(), 1) });
    }
    check_threshold(occ_threshold)?;
    let occupied = gs.iter().filter(|g| **g).count();
    if occupied == 0 {
        return Ok(None);
    }
    let hits = ps.iter().zip(gs).filter(|(p, g)| **g && **p > occ_threshold).count();
    Ok(Some(hits as f64 / occupied as f64))
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("occ_threshold", "must lie in (0, 1)"))
    }
}

/// Masked `(p_pgt, gt_occupied)` pairs in row-major order.
fn masked_series(pgt: &OccupancyGrid, gt: &OccupancyGrid, mask: &CellMask) -> Result<(Vec<f64>, Vec<bool>)> {
    let dims = (pgt.width(), pgt.height());
    for found in [(gt.width(), gt.height()), (mask.width(), mask.height())] {
        if found != dims {
            return Err(Error::DimensionMismatch { expected: dims, found });
        }
    }
    let mut ps = Vec::with_capacity(mask.count());
    let mut gs = Vec::with_capacity(mask.count());
    for ((l, g), m) in pgt.cells().iter().zip(gt.cells()).zip(mask.bits()) {
        if *m {
            ps.push(logodds_to_prob(*l));
            gs.push(*g > 0.0);
        }
    }
    Ok((ps, gs))
}

pub fn pearson(pgt: &OccupancyGrid, gt: &OccupancyGrid, mask: &CellMask) -> Result<Option<f64>> {
    let (ps, gs) = masked_series(pgt, gt, mask)?;
    pearson_series(&ps, &gs)
}

pub fn map_score(pgt: &OccupancyGrid, gt: &OccupancyGrid, mask: &CellMask) -> Result<f64> {
    let (ps, gs) = masked_series(pgt, gt, mask)?;
    map_score_series(&ps, &gs)
}

pub fn occupied_cells_ratio(
    pgt: &OccupancyGrid,
    gt: &OccupancyGrid,
    mask: &CellMask,
    occ_threshold: f64,
) -> Result<Option<f64>> {
    let (ps, gs) = masked_series(pgt, gt, mask)?;
    ocr_series(&ps, &gs, occ_threshold)
}

/// All KPIs over the PGT's observed cells, plus the validity verdict.
pub fn evaluate(pgt: &OccupancyGrid, gt: &OccupancyGrid, thresholds: &KpiThresholds) -> Result<KpiReport> {
    thresholds.validate()?;
    let (a, b) = (pgt.frame(), gt.frame());
    if a.resolution.to_bits() != b.resolution.to_bits()
        || a.origin.x.to_bits() != b.origin.x.to_bits()
        || a.origin.y.to_bits() != b.origin.y.to_bits()
    {
        return Err(Error::NotAligned);
    }
    let mask = observed_mask(pgt);
    let (ps, gs) = masked_series(pgt, gt, &mask)?;
    let mut report = KpiReport {
        pearson: pearson_series(&ps, &gs)?,
        map_score: if ps.is_empty() { None } else { Some(map_score_series(&ps, &gs)?) },
        occupied_cells_ratio: ocr_series(&ps, &gs, 0.5)?,
        n_observed: ps.len(),
        n_gt_occupied_observed: gs.iter().filter(|g| **g).count(),
        valid: false,
        thresholds: *thresholds,
    };
    report.gate();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2D;
    use crate::grid::{GridFrame, L_MAX, L_MIN};
    use crate::rng::{rng_stream, Stage};
    use alloc::vec;
    use proptest::prelude::*;

    // Textbook formulas written independently of the implementation above.
    fn naive_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
        let n = x.len() as f64;
        let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        let cov = sxy - sx * sy / n;
        let vx = sxx - sx * sx / n;
        let vy = syy - sy * sy / n;
        if vx <= 1e-300 || vy <= 1e-300 {
            None
        } else {
            Some(cov / (vx.sqrt() * vy.sqrt()))
        }
    }

    fn frame(w: usize, h: usize) -> GridFrame {
        GridFrame::new(w, h, 0.1, Point2D::default()).unwrap()
    }

    #[test]
    fn four_cell_pearson() {
        let r = pearson_series(&[0.9, 0.8, 0.2, 0.1], &[true, true, false, false]).unwrap().unwrap();
        // Centred sums: Sxy = 0.7, Sxx = 0.5, Syy = 1, so r = 0.7 / sqrt(0.5).
        let want = 0.7 / 0.5f64.sqrt();
        assert!((r - want).abs() < 1e-12);
        assert!((r - naive_pearson(&[0.9, 0.8, 0.2, 0.1], &[1.0, 1.0, 0.0, 0.0]).unwrap()).abs() < 1e-12);
        assert!((r - 0.989949).abs() < 1e-6);
    }

    #[test]
    fn pearson_exact_cases() {
        let ys = [true, false, true, true, false];
        let xs: Vec<f64> = ys.iter().map(|y| if *y { 1.0 } else { 0.0 }).collect();
        assert_eq!(pearson_series(&xs, &ys).unwrap(), Some(1.0));
        let inv: Vec<f64> = xs.iter().map(|x| 1.0 - x).collect();
        assert_eq!(pearson_series(&inv, &ys).unwrap(), Some(-1.0));
        assert_eq!(pearson_series(&[0.3, 0.3], &[true, false]).unwrap(), None);
        assert_eq!(pearson_series(&[0.1, 0.9], &[true, true]).unwrap(), None);
        assert_eq!(pearson_series(&[], &[]).unwrap(), None);
        assert!(pearson_series(&[0.1], &[]).is_err());
    }

    #[test]
    fn map_score_examples() {
        assert!((map_score_series(&[0.7, 0.4], &[true, false]).unwrap() - 0.65).abs() < 1e-15);
        assert_eq!(map_score_series(&[1.0, 0.0, 1.0], &[true, false, true]).unwrap(), 1.0);
        assert_eq!(map_score_series(&[0.5; 6], &[true, false, true, false, false, false]).unwrap(), 0.5);
        assert!(matches!(map_score_series(&[], &[]), Err(Error::EmptyMask)));
    }

    #[test]
    fn ocr_examples() {
        let gs = [true; 10];
        let ps = [0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.2, 0.5];
        assert_eq!(ocr_series(&ps, &gs, 0.5).unwrap(), Some(0.8));
        assert_eq!(ocr_series(&[0.1; 10], &gs, 0.5).unwrap(), Some(0.0));
        assert_eq!(ocr_series(&[0.1], &[false], 0.5).unwrap(), None);
        assert!(ocr_series(&[0.1], &[true], 1.0).is_err());
    }

    #[test]
    fn evaluate_self_and_degenerate() {
        let f = frame(10, 10);
        let cells: Vec<f64> = (0..100).map(|i| if i % 7 == 0 { L_MAX } else { L_MIN }).collect();
        let gt = OccupancyGrid::from_cells(f, cells).unwrap();
        let r = evaluate(&gt, &gt, &KpiThresholds::new(1.0, 0.99, 1.0).unwrap()).unwrap();
        assert_eq!(r.pearson, Some(1.0));
        assert_eq!(r.occupied_cells_ratio, Some(1.0));
        assert!((r.map_score.unwrap() - logodds_to_prob(L_MAX)).abs() < 1e-12);
        assert_eq!(r.n_observed, 100);
        assert_eq!(r.n_gt_occupied_observed, 15);
        assert!(r.valid);

        let blank = OccupancyGrid::new(f);
        let r = evaluate(&blank, &gt, &KpiThresholds::default()).unwrap();
        assert_eq!((r.pearson, r.map_score, r.occupied_cells_ratio), (None, None, None));
        assert!(!r.valid);
    }

    #[test]
    fn evaluate_rejects_misaligned() {
        let a = OccupancyGrid::new(frame(4, 4));
        let b = OccupancyGrid::new(GridFrame::new(4, 4, 0.2, Point2D::default()).unwrap());
        let c = OccupancyGrid::new(GridFrame::new(4, 4, 0.1, Point2D::new(0.1, 0.0)).unwrap());
        let d = OccupancyGrid::new(frame(5, 4));
        let t = KpiThresholds::default();
        assert!(matches!(evaluate(&a, &b, &t), Err(Error::NotAligned)));
        assert!(matches!(evaluate(&a, &c, &t), Err(Error::NotAligned)));
        assert!(matches!(evaluate(&a, &d, &t), Err(Error::DimensionMismatch { .. })));
        assert!(pearson(&a, &d, &CellMask::filled(4, 4, true)).is_err());
    }

    #[test]
    fn thresholds_validated() {
        assert!(KpiThresholds::new(-1.0, 0.0, 1.0).is_ok());
        assert!(KpiThresholds::new(1.1, 0.5, 0.5).is_err());
        assert!(KpiThresholds::new(0.5, -0.1, 0.5).is_err());
        assert!(KpiThresholds::new(0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn random_grids_match_definitions() {
        for seed in 0..200u64 {
            let mut rng = rng_stream(seed, 0, 0, Stage::Test);
            let f = frame(20, 20);
            let pgt: Vec<f64> = (0..400).map(|_| if rng.uniform() < 0.3 { 0.0 } else { rng.uniform_range(-10.0, 10.0) }).collect();
            let gt: Vec<f64> = (0..400).map(|_| if rng.uniform() < 0.25 { L_MAX } else { L_MIN }).collect();
            let pgt = OccupancyGrid::from_cells(f, pgt).unwrap();
            let gt = OccupancyGrid::from_cells(f, gt).unwrap();
            let report = evaluate(&pgt, &gt, &KpiThresholds::default()).unwrap();

            let (mut x, mut y) = (vec![], vec![]);
            for (l, g) in pgt.cells().iter().zip(gt.cells()) {
                if *l != 0.0 {
                    x.push(1.0 / (1.0 + (-l).exp()));
                    y.push(if *g > 0.0 { 1.0 } else { 0.0 });
                }
            }
            let n = x.len() as f64;
            let ms: f64 = x.iter().zip(&y).map(|(p, g)| g * p + (1.0 - g) * (1.0 - p)).sum::<f64>() / n;
            let occ = y.iter().filter(|g| **g == 1.0).count() as f64;
            let hit = x.iter().zip(&y).filter(|(p, g)| **g == 1.0 && **p > 0.5).count() as f64;

            assert_eq!(report.n_observed, x.len());
            assert!((report.pearson.unwrap() - naive_pearson(&x, &y).unwrap()).abs() < 1e-12);
            assert!((report.map_score.unwrap() - ms).abs() < 1e-12);
            assert!((report.occupied_cells_ratio.unwrap() - hit / occ).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(xs in proptest::collection::vec(0.0..1.0f64, 4..60),
                                    seed in any::<u64>(), a in 0.01..100.0f64, b in -50.0..50.0f64) {
            let mut rng = rng_stream(seed, 0, 0, Stage::Test);
            let ys: Vec<bool> = xs.iter().map(|_| rng.uniform() < 0.5).collect();
            let r0 = pearson_series(&xs, &ys).unwrap();
            let moved: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            let r1 = pearson_series(&moved, &ys).unwrap();
            match (r0, r1) {
                (Some(p), Some(q)) => prop_assert!((p - q).abs() < 1e-12, "{p} vs {q}"),
                (None, None) => {}
                _ => prop_assert!(false, "definedness changed"),
            }
        }

        #[test]
        fn map_score_complement(ps in proptest::collection::vec(0.0..=1.0f64, 1..100), seed in any::<u64>()) {
            let mut rng = rng_stream(seed, 0, 0, Stage::Test);
            let gs: Vec<bool> = ps.iter().map(|_| rng.uniform() < 0.5).collect();
            let comp: Vec<f64> = ps.iter().map(|p| 1.0 - p).collect();
            let sum = map_score_series(&ps, &gs).unwrap() + map_score_series(&comp, &gs).unwrap();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ocr_monotone_in_threshold(ps in proptest::collection::vec(0.0..=1.0f64, 1..100), t1 in 0.01..0.99f64, t2 in 0.01..0.99f64) {
            let gs = vec![true; ps.len()];
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let a = ocr_series(&ps, &gs, lo).unwrap().unwrap();
            let b = ocr_series(&ps, &gs, hi).unwrap().unwrap();
            prop_assert!(b <= a);
        }

        #[test]
        fn kpis_in_range(ps in proptest::collection::vec(0.0..=1.0f64, 2..100), seed in any::<u64>()) {
            let mut rng = rng_stream(seed, 1, 0, Stage::Test);
            let gs: Vec<bool> = ps.iter().map(|_| rng.uniform() < 0.5).collect();
            if let Some(r) = pearson_series(&ps, &gs).unwrap() { prop_assert!((-1.0..=1.0).contains(&r)); }
            let ms = map_score_series(&ps, &gs).unwrap();
            prop_assert!((0.0..=1.0).contains(&ms));
        }
    }
}
