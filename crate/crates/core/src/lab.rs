//! Floating-point experiments on sampled points: box counting, projection
//! coverage along fixed or random directions, and the difference-set check.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::automaton::{product, Limits, SafetyAutomaton};
use crate::dimension::{has_interior, measure};
use crate::error::{Error, Result};
use crate::restriction::{es_truncate, DensityDescriptor};
use crate::structure::{affine_image, AffineSpec};

/// Points of a set sampled by uniform random walks; each point is the lower
/// corner of the depth-`depth` cell reached.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub points: Vec<Vec<f64>>,
    /// Integer cell coordinates at `depth`; `points = cells / base^depth`.
    pub cells: Vec<Vec<u64>>,
    pub base: u32,
    pub depth: usize,
    pub seed: u64,
    pub source: String,
}

impl PointSample {
    pub fn arity(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }
}

pub fn sample_points(
    a: &SafetyAutomaton,
    count: usize,
    depth: usize,
    seed: u64,
    source: impl Into<String>,
) -> Result<PointSample> {
    let Some(q0) = a.initial() else {
        return Err(Error::EmptySet);
    };
    if count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let base = a.base() as u64;
    let Some(scale) = base.checked_pow(depth as u32).filter(|&s| s < 1 << 53) else {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} too fine for base {base}"
        )));
    };
    let alphabet = a.alphabet();
    let n = a.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = Vec::with_capacity(count);
    for _ in 0..count {
        let mut q = q0;
        let mut cell = vec![0u64; n];
        for _ in 0..depth {
            let row = a.transitions(q);
            let (letter, target) = row[rng.gen_range(0..row.len())];
            for (t, c) in cell.iter_mut().enumerate() {
                *c = *c * base + alphabet.digit(letter, t) as u64;
            }
            q = target;
        }
        cells.push(cell);
    }
    let points = cells
        .iter()
        .map(|c| c.iter().map(|&x| x as f64 / scale as f64).collect())
        .collect();
    Ok(PointSample {
        points,
        cells,
        base: a.base(),
        depth,
        seed,
        source: source.into(),
    })
}

/// Samples `E_S^power` truncated at `depth`.
pub fn sample_es(
    s: &DensityDescriptor,
    power: usize,
    count: usize,
    depth: usize,
    seed: u64,
    limits: &Limits,
) -> Result<PointSample> {
    if power == 0 {
        return Err(Error::InvalidArity);
    }
    let one = es_truncate(s, depth)?;
    let mut set = one.clone();
    for _ in 1..power {
        set = product(&set, &one, limits)?;
    }
    sample_points(&set, count, depth, seed, format!("es({s},{depth})^{power}"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCountEstimate {
    pub slope: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `(k, occupied cells at depth k)`.
    pub counts: Vec<(usize, usize)>,
}

/// Least-squares slope of `log N_k` against `k log b` for `k` in `k1..=k2`.
pub fn box_count_estimate(sample: &PointSample, k1: usize, k2: usize) -> Result<BoxCountEstimate> {
    if k2 <= k1 {
        return Err(Error::InvalidArgument("need at least two depths".into()));
    }
    if k2 > sample.depth {
        return Err(Error::InvalidArgument(format!(
            "depth {k2} exceeds sample depth {}",
            sample.depth
        )));
    }
    let base = sample.base as u64;
    let counts: Vec<(usize, usize)> = (k1..=k2)
        .map(|k| {
            let shrink = base.pow((sample.depth - k) as u32);
            let boxes: HashSet<Vec<u64>> = sample
                .cells
                .iter()
                .map(|c| c.iter().map(|&x| x / shrink).collect())
                .collect();
            (k, boxes.len())
        })
        .collect();
    let lb = (sample.base as f64).ln();
    let xs: Vec<f64> = counts.iter().map(|&(k, _)| k as f64 * lb).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(BoxCountEstimate {
        slope,
        residual,
        counts,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub direction: Vec<f64>,
    /// Angle from the first axis, for planar samples.
    pub angle: Option<f64>,
    pub resolution: f64,
    /// `occupied * resolution / range`, clipped to `[0, 1]`; 0 for a
    /// degenerate range.
    pub covered_fraction: f64,
    pub occupied: usize,
    pub range: (f64, f64),
    pub seed: Option<u64>,
}

impl fmt::Display for ProjectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let angle = self.angle.map_or("-".to_string(), |a| format!("{a:.6}"));
        write!(
            f,
            "{:>10} {:>12.3e} {:>10} {:>10.6} [{:.6}, {:.6}]",
            angle,
            self.resolution,
            self.occupied,
            self.covered_fraction,
            self.range.0,
            self.range.1
        )
    }
}

/// Coverage of the projection `x -> <direction, x>` by left-closed
/// `resolution`-cells anchored at the smallest projected value.
pub fn project_measure_estimate(
    sample: &PointSample,
    direction: &[f64],
    resolution: f64,
) -> Result<ProjectionReport> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidTolerance(resolution));
    }
    if direction.len() != sample.arity() {
        return Err(Error::ArityMismatch(sample.arity(), direction.len()));
    }
    let values: Vec<f64> = sample
        .points
        .iter()
        .map(|p| p.iter().zip(direction).map(|(x, d)| x * d).sum())
        .collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let occupied: HashSet<u64> = values
        .iter()
        .map(|v| ((v - lo) / resolution).floor() as u64)
        .collect();
    let range = hi - lo;
    let covered_fraction = if range > 0.0 {
        (occupied.len() as f64 * resolution / range).min(1.0)
    } else {
        0.0
    };
    let angle = (direction.len() == 2).then(|| direction[1].atan2(direction[0]));
    Ok(ProjectionReport {
        direction: direction.to_vec(),
        angle,
        resolution,
        covered_fraction,
        occupied: occupied.len(),
        range: (lo, hi),
        seed: None,
    })
}

/// Uniform direction on the unit sphere; the angle is uniform in `[0, pi)`
/// for planar samples.
fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    if n == 2 {
        let theta = rng.gen_range(0.0..PI);
        return vec![theta.cos(), theta.sin()];
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Projections along `num_angles` random directions. Direction `i` is drawn
/// from a generator seeded by `seed` on stream `i`, so the scan does not
/// depend on scheduling.
pub fn marstrand_scan(
    sample: &PointSample,
    num_angles: usize,
    resolution: f64,
    seed: u64,
) -> Result<Vec<ProjectionReport>> {
    if sample.arity() < 2 {
        return Err(Error::InvalidArgument(
            "projection scans need a sample of arity at least 2".into(),
        ));
    }
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidTolerance(resolution));
    }
    (0..num_angles)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let direction = random_direction(&mut rng, sample.arity());
            let mut report = project_measure_estimate(sample, &direction, resolution)?;
            report.seed = Some(seed);
            Ok(report)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteinhausReport {
    pub interior: bool,
    /// The measure hypothesis failed and nothing was checked.
    pub vacuous: bool,
    pub measure: f64,
}

impl SteinhausReport {
    pub fn holds(&self) -> bool {
        self.vacuous || self.interior
    }
}

/// For a set of measure above `tol`, checks that `(x - y + 1)/b` over `A x A`
/// has interior.
pub fn steinhaus_check(a: &SafetyAutomaton, tol: f64, limits: &Limits) -> Result<SteinhausReport> {
    if a.arity() != 1 {
        return Err(Error::ArityMismatch(1, a.arity()));
    }
    let m = measure(a, tol / 16.0)?;
    if m <= tol {
        return Ok(SteinhausReport {
            interior: false,
            vacuous: true,
            measure: m,
        });
    }
    let square = product(a, a, limits)?;
    let diff = affine_image(&square, &AffineSpec::new(vec![1, -1], 1, 1), limits)?;
    Ok(SteinhausReport {
        interior: has_interior(&diff, limits)?,
        vacuous: false,
        measure: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::union;
    use crate::rational::rat;
    use crate::structure::{box_set, cantor, singleton};

    #[test]
    fn cantor_samples_have_even_digits() {
        let s = sample_points(&cantor(), 1000, 12, 7, "cantor").unwrap();
        assert_eq!(s.points.len(), 1000);
        for c in &s.cells {
            let mut x = c[0];
            for _ in 0..12 {
                assert_ne!(x % 3, 1);
                x /= 3;
            }
        }
        assert_eq!(s, sample_points(&cantor(), 1000, 12, 7, "cantor").unwrap());
        assert_ne!(
            s.cells,
            sample_points(&cantor(), 1000, 12, 8, "cantor")
                .unwrap()
                .cells
        );
    }

    #[test]
    fn sampling_errors() {
        let e = SafetyAutomaton::empty(3, 1).unwrap();
        assert!(matches!(
            sample_points(&e, 5, 3, 0, ""),
            Err(Error::EmptySet)
        ));
        assert!(sample_points(&cantor(), 0, 3, 0, "").is_err());
        assert!(sample_points(&cantor(), 1, 40, 0, "").is_err());
    }

    #[test]
    fn box_count_slopes() {
        let s = sample_points(&cantor(), 4000, 10, 1, "cantor").unwrap();
        let est = box_count_estimate(&s, 4, 10).unwrap();
        assert!((est.slope - 2f64.ln() / 3f64.ln()).abs() < 0.05);
        let p = sample_points(
            &singleton(3, &[rat(1, 4)], &Limits::default()).unwrap(),
            50,
            8,
            1,
            "",
        )
        .unwrap();
        assert_eq!(box_count_estimate(&p, 2, 8).unwrap().slope, 0.0);
        assert!(box_count_estimate(&s, 4, 4).is_err());
        assert!(box_count_estimate(&s, 4, 11).is_err());
    }

    #[test]
    fn coverage_refines_monotonically() {
        let lim = Limits::default();
        let cc = product(&cantor(), &cantor(), &lim).unwrap();
        let s = sample_points(&cc, 20000, 10, 3, "cc").unwrap();
        let mut last = 1.0;
        for j in 4..12 {
            let r = project_measure_estimate(&s, &[0.6, 0.8], 2f64.powi(-j)).unwrap();
            assert!(r.covered_fraction <= last + 1e-12);
            last = r.covered_fraction;
        }
        assert!(project_measure_estimate(&s, &[1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn scans_are_deterministic() {
        let cc = product(&cantor(), &cantor(), &Limits::default()).unwrap();
        let s = sample_points(&cc, 2000, 8, 3, "cc").unwrap();
        let a = marstrand_scan(&s, 6, 1e-3, 11).unwrap();
        let b = marstrand_scan(&s, 6, 1e-3, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!(a.iter().all(|r| r.angle.unwrap() >= 0.0));
        let line = sample_points(&cantor(), 10, 4, 0, "").unwrap();
        assert!(marstrand_scan(&line, 3, 0.1, 0).is_err());
    }

    #[test]
    fn singleton_square_covers_nothing() {
        let lim = Limits::default();
        let p = singleton(2, &[rat(1, 3), rat(1, 3)], &lim).unwrap();
        let s = sample_points(&p, 100, 10, 0, "").unwrap();
        let r = project_measure_estimate(&s, &[0.5, 0.5], 1e-3).unwrap();
        assert!(r.covered_fraction < 0.01);
    }

    #[test]
    fn steinhaus_examples() {
        let lim = Limits::default();
        let half = box_set(2, &[(rat(0, 1), rat(1, 2))], &lim).unwrap();
        assert!(steinhaus_check(&half, 1e-6, &lim).unwrap().interior);
        let i1 = box_set(10, &[(rat(0, 1), rat(1, 10))], &lim).unwrap();
        let i2 = box_set(10, &[(rat(1, 2), rat(7, 10))], &lim).unwrap();
        let two = union(&i1, &i2, &lim).unwrap();
        let r = steinhaus_check(&two, 1e-6, &lim).unwrap();
        assert!(r.interior && !r.vacuous);
        assert!((r.measure - 0.3).abs() < 1e-6);
        let c = steinhaus_check(&cantor(), 1e-6, &lim).unwrap();
        assert!(c.vacuous && c.holds());
    }
}
