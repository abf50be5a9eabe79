// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Statistics that watch integer points and CM points equidistribute:
//! spherical cap discrepancy, spherical-harmonic Weyl sums, cell
//! discrepancy on the fundamental domain, cusp mass, and scans over ranges
//! of d. Trends are aggregated over dyadic blocks `[2^k, 2^{k+1})`, since
//! pointwise values fluctuate with the class number.

use crate::arith;
use crate::forms::{self, BinaryForm};
use crate::reps;
use crate::spheres;
use crate::surface::{self, HalfPlanePoint};
use crate::{par, Error, Result};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default seed for every randomized statistic.
pub const DEFAULT_SEED: u64 = 0;

/// One measured value, with the parameters needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub d: i64,
    pub statistic: String,
    pub value: f64,
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub h: Option<Ratio<i64>>,
    pub seed: Option<u64>,
}

impl ScanRow {
    pub fn new(d: i64, statistic: impl Into<String>, value: f64) -> Self {
        Self {
            d,
            statistic: statistic.into(),
            value,
            p: None,
            m: None,
            h: None,
            seed: None,
        }
    }

    pub fn with_p(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_h(mut self, h: Ratio<i64>) -> Self {
        self.h = Some(h);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

// ---------------------------------------------------------------------------
// Spherical statistics

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `|#{v : v·center >= t}/n - (1 - t)/2|` for one cap.
pub fn cap_deviation(points: &[[f64; 3]], center: &[f64; 3], t: f64) -> f64 {
    let inside = points.iter().filter(|v| dot(v, center) >= t).count();
    (inside as f64 / points.len() as f64 - (1.0 - t) / 2.0).abs()
}

/// Largest cap deviation over `n_caps` caps with uniform centers and uniform
/// heights `t ∈ [-1, 1)`, drawn from a ChaCha stream seeded by `seed`.
pub fn cap_discrepancy(points: &[[f64; 3]], n_caps: usize, seed: u64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_caps {
        let center: [f64; 3] = UnitSphere.sample(&mut rng);
        let t: f64 = rng.gen_range(-1.0..1.0);
        worst = worst.max(cap_deviation(points, &center, t));
    }
    Ok(worst)
}

/// Real orthonormal spherical harmonics up to degree `lmax` at a unit
/// vector, indexed by `l² + l + m` for `-l <= m <= l`. Positive `m` carries
/// `cos(mφ)`, negative `m` carries `sin(|m|φ)`; no Condon–Shortley phase.
pub fn real_spherical_harmonics(lmax: usize, v: &[f64; 3]) -> Vec<f64> {
    let [x, y, z] = *v;
    let mut out = vec![0.0; (lmax + 1) * (lmax + 1)];
    // (x + iy)^m = sin^m θ e^{imφ}
    let (mut cm, mut sm) = (1.0f64, 0.0f64);
    let mut double_fact = 1.0f64;
    for m in 0..=lmax {
        if m > 0 {
            let (c, s) = (cm * x - sm * y, cm * y + sm * x);
            cm = c;
            sm = s;
            double_fact *= (2 * m - 1) as f64;
        }
        // Q_l^m(z) = P_l^m(z) / (1 - z²)^{m/2}
        let mut q_prev = 0.0;
        let mut q = double_fact;
        for l in m..=lmax {
            if l > m {
                let next = ((2 * l - 1) as f64 * z * q - (l + m - 1) as f64 * q_prev) / (l - m) as f64;
                q_prev = q;
                q = next;
            }
            let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| k as f64).product();
            let norm = ((2 * l + 1) as f64 / (4.0 * PI) / ratio).sqrt();
            let base = l * l + l;
            if m == 0 {
                out[base] = norm * q;
            } else {
                out[base + m] = std::f64::consts::SQRT_2 * norm * q * cm;
                out[base - m] = std::f64::consts::SQRT_2 * norm * q * sm;
            }
        }
    }
    out
}

/// Average of one real harmonic over a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicAverage {
    pub l: usize,
    pub m: i64,
    pub value: f64,
}

pub const MAX_HARMONIC_DEGREE: usize = 8;

/// Averages of every `Y_{lm}` with `l <= lmax` over `points`.
pub fn weyl_harmonic_sums(points: &[[f64; 3]], lmax: usize) -> Result<Vec<HarmonicAverage>> {
    if lmax > MAX_HARMONIC_DEGREE {
        return Err(Error::Precondition(format!(
            "lmax must be at most {MAX_HARMONIC_DEGREE}"
        )));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sums = vec![0.0; (lmax + 1) * (lmax + 1)];
    for v in points {
        for (s, y) in sums.iter_mut().zip(real_spherical_harmonics(lmax, v)) {
            *s += y;
        }
    }
    let n = points.len() as f64;
    let mut out = Vec::with_capacity(sums.len());
    for l in 0..=lmax {
        for m in -(l as i64)..=(l as i64) {
            let idx = (l * l + l) as i64 + m;
            out.push(HarmonicAverage {
                l,
                m,
                value: sums[idx as usize] / n,
            });
        }
    }
    Ok(out)
}

/// Largest `|average|` among harmonics of degree exactly `l`.
pub fn weyl_degree_max(avgs: &[HarmonicAverage], l: usize) -> f64 {
    avgs.iter()
        .filter(|h| h.l == l)
        .map(|h| h.value.abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Fundamental domain statistics

/// Rectangular cells covering the fundamental domain below `y_max`: `nx`
/// equal columns over `[-1/2, 1/2]` and `ny` rows between `√3/2` and `y_max`,
/// equally spaced in `1/y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    pub nx: usize,
    pub ny: usize,
    pub y_max: f64,
}

impl Default for CellGrid {
    fn default() -> Self {
        Self {
            nx: 4,
            ny: 4,
            y_max: 10.0,
        }
    }
}

impl CellGrid {
    fn x_edges(&self) -> Vec<f64> {
        (0..=self.nx)
            .map(|i| -0.5 + i as f64 / self.nx as f64)
            .collect()
    }

    fn y_edges(&self) -> Vec<f64> {
        let lo = 2.0 / 3f64.sqrt();
        let hi = 1.0 / self.y_max;
        (0..=self.ny)
            .map(|j| 1.0 / (lo + (hi - lo) * j as f64 / self.ny as f64))
            .collect()
    }
}

/// Hyperbolic area `∫∫ dx dy / y²` of `[x0, x1] × [y0, y1]` intersected with
/// `{x² + y² >= 1}`.
pub fn cell_mass(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    if x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    let mut cuts = vec![x0, x1];
    for y in [y0, y1] {
        if y < 1.0 {
            let r = (1.0 - y * y).sqrt();
            for c in [-r, r] {
                if c > x0 && c < x1 {
                    cuts.push(c);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let arc = (1.0 - mid * mid).max(0.0).sqrt();
        if arc >= y1 {
            continue;
        } else if arc > y0 {
            // lower edge is the unit circle
            total += (b.asin() - a.asin()) - (b - a) / y1;
        } else {
            total += (b - a) * (1.0 / y0 - 1.0 / y1);
        }
    }
    total
}

/// Total hyperbolic area of the fundamental domain.
pub fn fundamental_domain_area() -> f64 {
    PI / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicDiscrepancy {
    /// Largest `|empirical - normalized area|` over the grid cells.
    pub discrepancy: f64,
    /// Fraction of points above `y_max`.
    pub truncated_empirical: f64,
    /// Normalized area above `y_max`, i.e. `3/(π y_max)`.
    pub truncated_mass: f64,
}

pub fn hyperbolic_cell_discrepancy(
    points: &[HalfPlanePoint],
    grid: &CellGrid,
) -> Result<HyperbolicDiscrepancy> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let xs = grid.x_edges();
    let ys = grid.y_edges();
    let mut counts = vec![0usize; grid.nx * grid.ny];
    let mut above = 0usize;
    for z in points {
        if !z.is_reduced() {
            let (x, y) = z.to_float();
            return Err(Error::NotReduced { x, y });
        }
        let (x, y) = z.to_float();
        if y >= grid.y_max {
            above += 1;
            continue;
        }
        let i = (((x + 0.5) * grid.nx as f64).floor().max(0.0) as usize).min(grid.nx - 1);
        let j = ys.windows(2).position(|w| y < w[1]).unwrap_or(grid.ny - 1);
        counts[j * grid.nx + i] += 1;
    }
    let n = points.len() as f64;
    let area = fundamental_domain_area();
    let mut worst = 0.0f64;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let mass = cell_mass(xs[i], xs[i + 1], ys[j], ys[j + 1]) / area;
            worst = worst.max((counts[j * grid.nx + i] as f64 / n - mass).abs());
        }
    }
    Ok(HyperbolicDiscrepancy {
        discrepancy: worst,
        truncated_empirical: above as f64 / n,
        truncated_mass: 1.0 / (grid.y_max * area),
    })
}

/// Fraction of the CM points with height at least `h`, decided exactly.
pub fn cusp_mass(forms: &[BinaryForm], h: Ratio<i64>) -> Result<f64> {
    if forms.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut high = 0usize;
    for f in forms {
        if surface::cm_height_at_least(f, h)? {
            high += 1;
        }
    }
    Ok(high as f64 / forms.len() as f64)
}

/// CM points of every class of discriminant `d`.
pub fn cm_points(d: i64) -> Result<Vec<HalfPlanePoint>> {
    forms::class_group(d)?
        .forms()
        .iter()
        .map(forms::cm_point)
        .collect()
}

/// Least-squares slope of `log(cusp_mass)` against `log(H)` for `n_h`
/// thresholds spaced geometrically over `[h_min, h_max]`. Thresholds with
/// zero mass are dropped; `None` if fewer than three remain.
pub fn cusp_exponent(forms: &[BinaryForm], h_min: f64, h_max: f64, n_h: usize) -> Result<Option<f64>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..n_h {
        let t = if n_h == 1 { 0.0 } else { i as f64 / (n_h - 1) as f64 };
        let h = h_min * (h_max / h_min).powf(t);
        let hr = Ratio::new((h * 10_000.0).round() as i64, 10_000);
        let mass = cusp_mass(forms, hr)?;
        if mass > 0.0 {
            xs.push((*hr.numer() as f64 / *hr.denom() as f64).ln());
            ys.push(mass.ln());
        }
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 3 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

// ---------------------------------------------------------------------------
// Scans

/// Which norms a sphere scan keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Legendre,
    /// Legendre plus `-d` a nonzero square mod p.
    Linnik(u64),
}

impl Admissibility {
    pub fn admits(&self, d: i64) -> Result<bool> {
        match *self {
            Admissibility::Legendre => Ok(spheres::legendre_admissible(d)),
            Admissibility::Linnik(p) => spheres::linnik_admissible(d, p),
        }
    }
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Median of the values in each dyadic block `[2^k, 2^{k+1})` of `|d|`,
/// as `(k, median, count)`.
pub fn dyadic_medians(values: &[(i64, f64)]) -> Vec<(u32, f64, usize)> {
    let mut blocks: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for &(d, v) in values {
        let a = d.unsigned_abs();
        if a > 0 {
            blocks.entry(63 - a.leading_zeros()).or_default().push(v);
        }
    }
    blocks
        .into_iter()
        .map(|(k, mut vs)| {
            let n = vs.len();
            (k, median(&mut vs).expect("nonempty block"), n)
        })
        .collect()
}

/// `|I_d|` and `log|I_d| / log d` for every admissible `d` in
/// `[dmin, dmax]`, then one `block_median_exponent` row per dyadic block
/// (with `d = 2^k`).
pub fn volume_growth_scan(dmin: i64, dmax: i64, condition: Admissibility) -> Result<Vec<ScanRow>> {
    if dmin < 1 || dmax < dmin {
        return Err(Error::Precondition(format!("empty range [{dmin}, {dmax}]")));
    }
    if let Admissibility::Linnik(p) = condition {
        arith::check_odd_prime(p)?;
    }
    let counts = spheres::primitive_counts_upto(dmax as usize);
    let tag = |row: ScanRow| match condition {
        Admissibility::Linnik(p) => row.with_p(p),
        Admissibility::Legendre => row,
    };
    let mut rows = Vec::new();
    let mut exponents = Vec::new();
    for d in dmin..=dmax {
        if !condition.admits(d)? {
            continue;
        }
        let n = counts[d as usize];
        rows.push(tag(ScanRow::new(d, "points", n as f64)));
        if d > 1 {
            let e = (n as f64).ln() / (d as f64).ln();
            exponents.push((d, e));
            rows.push(tag(ScanRow::new(d, "exponent", e)));
        }
    }
    for (k, med, _) in dyadic_medians(&exponents) {
        rows.push(tag(ScanRow::new(1i64 << k, "block_median_exponent", med)));
    }
    Ok(rows)
}

/// One norm of the embedding-class scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioRow {
    pub norm: i64,
    pub classes: usize,
    pub class_number: usize,
    pub ratio: Ratio<i64>,
}

/// For each Legendre-admissible `D`, the number of rotation classes of
/// primitive points of norm D against the class number of the associated
/// discriminant.
pub fn embedding_class_ratio_scan(dmin: i64, dmax: i64) -> Result<Vec<RatioRow>> {
    if dmin < 1 || dmax < dmin {
        return Err(Error::Precondition(format!("empty range [{dmin}, {dmax}]")));
    }
    let norms: Vec<i64> = (dmin..=dmax).filter(|&d| spheres::legendre_admissible(d)).collect();
    par::map_collect(&norms, |&norm| {
        let pts = spheres::enumerate_primitive_points(norm);
        let classes = spheres::so3z_orbit_classes(pts.points()).len();
        let class_number = forms::class_number(forms::discriminant_from_norm(norm)?)?;
        Ok(RatioRow {
            norm,
            classes,
            class_number,
            ratio: Ratio::new(classes as i64, class_number as i64),
        })
    })
    .into_iter()
    .collect()
}

pub fn ratio_histogram(rows: &[RatioRow]) -> BTreeMap<Ratio<i64>, usize> {
    let mut hist = BTreeMap::new();
    for r in rows {
        *hist.entry(r.ratio).or_default() += 1;
    }
    hist
}

pub fn ratio_scan_rows(rows: &[RatioRow]) -> Vec<ScanRow> {
    let mut out = Vec::with_capacity(rows.len() * 3);
    for r in rows {
        out.push(ScanRow::new(r.norm, "classes", r.classes as f64));
        out.push(ScanRow::new(r.norm, "class_number", r.class_number as f64));
        out.push(ScanRow::new(r.norm, "ratio", *r.ratio.numer() as f64 / *r.ratio.denom() as f64));
    }
    for (ratio, count) in ratio_histogram(rows) {
        out.push(ScanRow::new(
            0,
            format!("ratio_count_{}_{}", ratio.numer(), ratio.denom()),
            count as f64,
        ));
    }
    out
}

/// Pair census rows for every Legendre-admissible `d` in range with
/// `p ∤ d`.
pub fn census_scan(dmin: i64, dmax: i64, p: u64, m: u32) -> Result<Vec<ScanRow>> {
    arith::check_odd_prime(p)?;
    if dmin < 1 || dmax < dmin {
        return Err(Error::Precondition(format!("empty range [{dmin}, {dmax}]")));
    }
    let ds: Vec<i64> = (dmin..=dmax)
        .filter(|&d| spheres::legendre_admissible(d) && d % p as i64 != 0)
        .collect();
    let censuses = par::map_collect(&ds, |&d| reps::basic_lemma_census(d, p, m));
    let mut rows = Vec::new();
    for c in censuses {
        let c = c?;
        rows.push(ScanRow::new(c.d, "ordered_pairs", c.ordered_pairs as f64).with_p(p).with_m(m));
        rows.push(ScanRow::new(c.d, "classes", c.classes as f64).with_p(p).with_m(m));
    }
    Ok(rows)
}

/// Cusp mass at threshold `h` for every negative discriminant in
/// `[dmin, dmax]`.
pub fn cusp_scan(dmin: i64, dmax: i64, h: Ratio<i64>) -> Result<Vec<ScanRow>> {
    if dmax >= 0 || dmax < dmin {
        return Err(Error::Precondition(format!(
            "need a range of negative discriminants, got [{dmin}, {dmax}]"
        )));
    }
    let ds: Vec<i64> = (dmin..=dmax).filter(|&d| forms::is_discriminant(d)).collect();
    let masses = par::map_collect(&ds, |&d| -> Result<(i64, usize, f64)> {
        let g = forms::class_group(d)?;
        Ok((d, g.order(), cusp_mass(g.forms(), h)?))
    });
    let mut rows = Vec::new();
    for r in masses {
        let (d, order, mass) = r?;
        rows.push(ScanRow::new(d, "class_number", order as f64));
        rows.push(ScanRow::new(d, "cusp_mass", mass).with_h(h));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Dyadic trends

/// Mean of a statistic over the values sampled from one dyadic block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStat {
    pub k: u32,
    pub mean: f64,
    pub samples: usize,
}

fn sample_evenly<T: Copy>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n]).collect()
}

/// Mean cap discrepancy of `I_d` over `samples` evenly spaced norms
/// satisfying Linnik's condition at `p`, in each block `k ∈ [kmin, kmax]`.
pub fn cap_discrepancy_trend(
    kmin: u32,
    kmax: u32,
    p: u64,
    samples: usize,
    n_caps: usize,
    seed: u64,
) -> Result<Vec<BlockStat>> {
    arith::check_odd_prime(p)?;
    let mut out = Vec::new();
    for k in kmin..=kmax {
        let lo = 1i64 << k;
        let admissible: Vec<i64> = (lo..2 * lo)
            .filter(|&d| spheres::linnik_admissible(d, p).unwrap_or(false))
            .collect();
        let chosen = sample_evenly(&admissible, samples);
        let values = par::map_collect(&chosen, |&d| {
            let units = spheres::enumerate_primitive_points(d).unit_vectors();
            cap_discrepancy(&units, n_caps, seed)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        out.push(BlockStat {
            k,
            mean: values.iter().sum::<f64>() / values.len() as f64,
            samples: values.len(),
        });
    }
    Ok(out)
}

/// Mean cell discrepancy of the CM points of discriminant `d` over `samples`
/// evenly spaced discriminants with `d` a nonzero square mod `p`, in each
/// block `|d| ∈ [2^k, 2^{k+1})`.
pub fn hyperbolic_discrepancy_trend(
    kmin: u32,
    kmax: u32,
    p: u64,
    samples: usize,
    grid: &CellGrid,
) -> Result<Vec<BlockStat>> {
    arith::check_odd_prime(p)?;
    let mut out = Vec::new();
    for k in kmin..=kmax {
        let lo = 1i64 << k;
        let admissible: Vec<i64> = (lo..2 * lo)
            .map(|a| -a)
            .filter(|&d| forms::is_discriminant(d) && arith::legendre_symbol(d, p) == Ok(1))
            .collect();
        let chosen = sample_evenly(&admissible, samples);
        let values = par::map_collect(&chosen, |&d| {
            let pts = cm_points(d)?
                .iter()
                .map(surface::reduce_point)
                .collect::<Result<Vec<_>>>()?;
            Ok(hyperbolic_cell_discrepancy(&pts, grid)?.discrepancy)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        out.push(BlockStat {
            k,
            mean: values.iter().sum::<f64>() / values.len() as f64,
            samples: values.len(),
        });
    }
    Ok(out)
}
