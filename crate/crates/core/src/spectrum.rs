//! Spectral objects assembled from the asymptotic characteristic polynomials:
//! dispersion curves, essential-spectrum grids, branch points, absolute
//! spectrum branches, exponential weights and the critical chemotaxis value.

use std::cell::Cell;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    check_well_posed, dispersion_lambda_table, morse_index, sort_ranked,
    spatial_roots_generic, CharTable, Side, PIVOT,
};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::polynomial::{bisect_real_root, roots_cubic, roots_general, sturm_count, ComplexPoly};

/// Coefficients of the tenth-degree polynomial whose unique root above one is
/// the critical chemotactic strength, highest degree first.
pub const F_BETA_DESC: [f64; 11] = [
    310.0, -3234.0, 17112.0, -49101.0, 76180.0, -58398.0, 10056.0, 15040.0, -9680.0, 1716.0, -4.0,
];

/// Newton tolerance for continuation steps.
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;
/// Default number of weight steps between the branch point and zero weight.
pub const DEFAULT_TRACE_STEPS: usize = 400;
/// Wavenumber samples used to maximise the weighted dispersion relation.
pub const WINDOW_K_SAMPLES: usize = 4001;
/// Relative size of `P_lambda` below which a branch point is treated as a
/// collision of two dispersion branches rather than a cusp.
pub const DEGENERATE_CUSP_TOL: f64 = 1e-8;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// Dispersion curves

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumCurve {
    pub side: Side,
    pub branch_id: usize,
    /// `(k, lambda)` pairs. For absolute-spectrum branches the first entry
    /// is the sweep weight instead of a wavenumber.
    pub samples: Vec<(f64, Complex64)>,
    pub weight: f64,
}

impl SpectrumCurve {
    pub fn lambdas(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn mirrored(&self, branch_id: usize) -> Self {
        Self {
            side: self.side,
            branch_id,
            samples: self.samples.iter().map(|&(k, l)| (k, l.conj())).collect(),
            weight: self.weight,
        }
    }

    /// Distance from `z` to the polyline through the samples.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let pts: Vec<Complex64> = self.lambdas().collect();
        if pts.len() == 1 {
            return (pts[0] - z).norm();
        }
        pts.windows(2)
            .map(|w| segment_distance(w[0], w[1], z))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - z).norm()
}

/// Nearest-neighbour matching was ambiguous at this wavenumber.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSwapWarning {
    pub side: Side,
    pub k: f64,
    pub gap_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DispersionCurves {
    pub curves: Vec<SpectrumCurve>,
    pub warnings: Vec<BranchSwapWarning>,
}

/// Samples every dispersion relation on `side` over `k_range` and threads the
/// roots into continuous branches.
pub fn dispersion_curves(
    params: &ModelParams,
    side: Side,
    nu: f64,
    k_range: (f64, f64),
    n_samples: usize,
) -> Result<DispersionCurves> {
    if n_samples < 2 {
        return Err(Error::InvalidInput("n_samples must be at least 2".into()));
    }
    let (k0, k1) = k_range;
    let ks: Vec<f64> = (0..n_samples)
        .map(|i| k0 + (k1 - k0) * i as f64 / (n_samples - 1) as f64)
        .collect();
    dispersion_curves_at(params, side, nu, &ks)
}

/// Same as [`dispersion_curves`] on an explicit, increasing list of wavenumbers.
pub fn dispersion_curves_at(
    params: &ModelParams,
    side: Side,
    nu: f64,
    ks: &[f64],
) -> Result<DispersionCurves> {
    let table = CharTable::new(params, side)?;
    let mut branches: Vec<Vec<(f64, Complex64)>> = Vec::new();
    let mut warnings = Vec::new();
    for &k in ks {
        let roots = dispersion_lambda_table(&table, k, nu)?;
        if branches.is_empty() {
            branches = roots.iter().map(|&l| vec![(k, l)]).collect();
            continue;
        }
        let last: Vec<Complex64> = branches.iter().map(|b| b.last().unwrap().1).collect();
        let straight = (last[0] - roots[0]).norm() + (last[1] - roots[1]).norm();
        let swapped = (last[0] - roots[1]).norm() + (last[1] - roots[0]).norm();
        let (best, other, order) = if straight <= swapped {
            (straight, swapped, [0, 1])
        } else {
            (swapped, straight, [1, 0])
        };
        if best > 0.0 && other / best < 2.0 {
            warnings.push(BranchSwapWarning {
                side,
                k,
                gap_ratio: other / best,
            });
        }
        for (b, &r) in branches.iter_mut().zip(order.iter()) {
            b.push((k, roots[r]));
        }
    }

    let mut curves = Vec::new();
    for samples in branches {
        for piece in split_on_jumps(samples) {
            curves.push(SpectrumCurve {
                side,
                branch_id: curves.len(),
                samples: piece,
                weight: nu,
            });
        }
    }
    Ok(DispersionCurves { curves, warnings })
}

/// Splits a sampled branch wherever a step is far larger than the typical one.
fn split_on_jumps(samples: Vec<(f64, Complex64)>) -> Vec<Vec<(f64, Complex64)>> {
    if samples.len() < 3 {
        return vec![samples];
    }
    let steps: Vec<f64> = samples.windows(2).map(|w| (w[1].1 - w[0].1).norm()).collect();
    let mut sorted = steps.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let threshold = 50.0 * median.max(1e-12);
    let mut out = vec![vec![samples[0]]];
    for (i, &s) in steps.iter().enumerate() {
        if s > threshold {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(samples[i + 1]);
    }
    out
}

// ---------------------------------------------------------------------------
// Essential spectrum grid

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Omega1,
    Omega2,
    Omega3,
    InEssential,
    NearBoundary,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Omega1 => "Omega1",
            Region::Omega2 => "Omega2",
            Region::Omega3 => "Omega3",
            Region::InEssential => "InEssential",
            Region::NearBoundary => "NearBoundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridCell {
    pub lambda: Complex64,
    pub i_plus: usize,
    pub i_minus: usize,
    pub region: Region,
}

/// `(re_min, re_max, im_min, im_max)`.
pub type Window = (f64, f64, f64, f64);

pub fn default_window(c: f64) -> Window {
    let c2 = c * c;
    (-1.6 * c2, 0.6 * c2, -1.6 * c2, 1.6 * c2)
}

pub const DEFAULT_RESOLUTION: (usize, usize) = (400, 400);

#[derive(Clone, Debug, PartialEq)]
pub struct EssentialGrid {
    pub window: Window,
    pub resolution: (usize, usize),
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Row-major from the bottom-left cell: index `iy * nx + ix`.
    pub cells: Vec<GridCell>,
}

impl EssentialGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &GridCell {
        &self.cells[iy * self.resolution.0 + ix]
    }

    /// Cell containing `lambda`, if inside the window.
    pub fn cell_at(&self, lambda: Complex64) -> Option<&GridCell> {
        let (x0, x1, y0, y1) = self.window;
        let (nx, ny) = self.resolution;
        if lambda.re < x0 || lambda.re > x1 || lambda.im < y0 || lambda.im > y1 {
            return None;
        }
        let ix = (((lambda.re - x0) / (x1 - x0) * nx as f64) as usize).min(nx - 1);
        let iy = (((lambda.im - y0) / (y1 - y0) * ny as f64) as usize).min(ny - 1);
        Some(self.cell(ix, iy))
    }

    pub fn count(&self, region: Region) -> usize {
        self.cells.iter().filter(|c| c.region == region).count()
    }
}

/// Classifies every cell of `window` by the Morse indices on both sides.
///
/// Cells with equal indices that connect to the right edge form `Omega1`;
/// among the remaining equal-index components the largest is `Omega2` and
/// the others `Omega3`.
pub fn essential_grid(
    params: &ModelParams,
    nu_minus: f64,
    nu_plus: f64,
    window: Window,
    resolution: (usize, usize),
) -> Result<EssentialGrid> {
    let (nx, ny) = resolution;
    if nx < 8 || ny < 8 {
        return Err(Error::InvalidInput("grid resolution must be at least 8".into()));
    }
    let (x0, x1, y0, y1) = window;
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::InvalidInput("grid window is empty".into()));
    }
    let dx = (x1 - x0) / nx as f64;
    let dy = (y1 - y0) / ny as f64;

    let raw: Vec<Result<GridCell>> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % nx, idx / nx);
            let lambda = Complex64::new(x0 + (ix as f64 + 0.5) * dx, y0 + (iy as f64 + 0.5) * dy);
            let plus = morse_index(params, Side::PlusInfinity, lambda, nu_plus)?;
            let minus = morse_index(params, Side::MinusInfinity, lambda, nu_minus)?;
            let region = if plus.near_nonhyperbolic || minus.near_nonhyperbolic {
                Region::NearBoundary
            } else if plus.index != minus.index {
                Region::InEssential
            } else {
                Region::Omega3
            };
            Ok(GridCell {
                lambda,
                i_plus: plus.index,
                i_minus: minus.index,
                region,
            })
        })
        .collect();
    let mut cells = raw.into_iter().collect::<Result<Vec<_>>>()?;
    label_components(&mut cells, nx, ny);
    Ok(EssentialGrid {
        window,
        resolution,
        nu_minus,
        nu_plus,
        cells,
    })
}

fn label_components(cells: &mut [GridCell], nx: usize, ny: usize) {
    let eligible = |c: &GridCell| c.region == Region::Omega3;
    let mut component = vec![usize::MAX; cells.len()];
    let mut sizes = Vec::new();
    let mut touches_right = Vec::new();
    for start in 0..cells.len() {
        if component[start] != usize::MAX || !eligible(&cells[start]) {
            continue;
        }
        let id = sizes.len();
        let (mut size, mut right) = (0usize, false);
        let mut stack = vec![start];
        component[start] = id;
        while let Some(idx) = stack.pop() {
            size += 1;
            let (ix, iy) = (idx % nx, idx / nx);
            right |= ix == nx - 1;
            let mut push = |j: usize| {
                if component[j] == usize::MAX
                    && eligible(&cells[j])
                    && cells[j].i_plus == cells[idx].i_plus
                {
                    component[j] = id;
                    stack.push(j);
                }
            };
            if ix > 0 {
                push(idx - 1);
            }
            if ix + 1 < nx {
                push(idx + 1);
            }
            if iy > 0 {
                push(idx - nx);
            }
            if iy + 1 < ny {
                push(idx + nx);
            }
        }
        sizes.push(size);
        touches_right.push(right);
    }
    let largest_interior = (0..sizes.len())
        .filter(|&i| !touches_right[i])
        .max_by_key(|&i| (sizes[i], std::cmp::Reverse(i)));
    for (idx, cell) in cells.iter_mut().enumerate() {
        let id = component[idx];
        if id == usize::MAX {
            continue;
        }
        cell.region = if touches_right[id] {
            Region::Omega1
        } else if Some(id) == largest_interior {
            Region::Omega2
        } else {
            Region::Omega3
        };
    }
}

// ---------------------------------------------------------------------------
// Absolute spectrum from the right

/// Closed-form absolute spectrum from `z -> +inf` for `eps = 0`: a real
/// segment plus two wings `lambda_1 +- i lambda_1 (1 + 2 lambda_1 / c^2)`,
/// `lambda_1 < -c^2/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsPlusAnalytic {
    pub c: f64,
    pub segment: (f64, f64),
}

impl AbsPlusAnalytic {
    pub fn rightmost(&self) -> f64 {
        self.segment.1
    }

    /// Upper wing point for `lambda_1 < -c^2/2`.
    pub fn wing(&self, lambda_1: f64) -> Complex64 {
        let c2 = self.c * self.c;
        Complex64::new(lambda_1, (lambda_1 * (1.0 + 2.0 * lambda_1 / c2)).abs())
    }

    /// Distance from `z` to the set.
    pub fn distance(&self, z: Complex64) -> f64 {
        let (a, b) = self.segment;
        let seg = if z.re < a {
            (z - cx(a)).norm()
        } else if z.re > b {
            (z - cx(b)).norm()
        } else {
            z.im.abs()
        };
        // The wing |Im| = x(1 + 2x/c^2) is a parabola in x < a; distance is
        // found by a short golden search on the horizontal coordinate.
        let f = |x: f64| (self.wing(x) - Complex64::new(z.re, z.im.abs())).norm();
        let lo = (z.re.min(a) - 2.0 * z.norm() - 1.0).min(a - 1.0);
        let wing = golden_min(f, lo, a, 200).1;
        seg.min(wing)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (a, b) = self.segment;
        if z.re >= a - tol && z.re <= b + tol && z.im.abs() <= tol {
            return true;
        }
        if z.re < a {
            let w = self.wing(z.re);
            return (z.im.abs() - w.im).abs() <= tol * (1.0 + w.im);
        }
        false
    }

    /// Polyline samples of the whole set: lower wing, segment, upper wing.
    pub fn sample(&self, re_min: f64, n_wing: usize) -> Vec<Vec<Complex64>> {
        let (a, b) = self.segment;
        let mut out = vec![vec![cx(a), cx(b)]];
        if re_min < a && n_wing >= 2 {
            let upper: Vec<Complex64> = (0..n_wing)
                .map(|i| self.wing(a + (re_min - a) * i as f64 / (n_wing - 1) as f64))
                .collect();
            out.push(upper.iter().map(|z| z.conj()).collect());
            out.push(upper);
        }
        out
    }
}

pub fn abs_plus_analytic(params: &ModelParams) -> AbsPlusAnalytic {
    let c2 = params.c * params.c;
    AbsPlusAnalytic {
        c: params.c,
        segment: (-c2 / 2.0, -c2 / 4.0),
    }
}

/// `Re mu[PIVOT-1] - Re mu[PIVOT]` from the generic root solver.
pub fn abs_rank_gap(params: &ModelParams, side: Side, lambda: Complex64) -> Result<f64> {
    let mut roots = spatial_roots_generic(params, side, lambda)?;
    sort_ranked(&mut roots);
    Ok(roots[PIVOT - 1].re - roots[PIVOT].re)
}

/// Rank-based absolute-spectrum membership.
pub fn in_abs_by_rank(params: &ModelParams, side: Side, lambda: Complex64, tol: f64) -> Result<bool> {
    Ok(abs_rank_gap(params, side, lambda)?.abs() < tol)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

// ---------------------------------------------------------------------------
// Branch points

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub lambda_br: Complex64,
    pub double_root_mu: Complex64,
    /// The double root sits at ranks two and three; otherwise the point
    /// belongs to the generalised absolute spectrum.
    pub in_absolute: bool,
    pub side: Side,
    /// `(|p|, |dp/dmu|)` at the point.
    pub residuals: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchPoints {
    /// Sorted by descending `Re lambda`, then descending `Im lambda`.
    pub points: Vec<BranchPoint>,
    /// Seeds whose refinement failed.
    pub failures: Vec<Error>,
}

impl BranchPoints {
    pub fn absolute(&self) -> impl Iterator<Item = &BranchPoint> {
        self.points.iter().filter(|p| p.in_absolute)
    }

    /// In-absolute point with the largest real part, upper half plane first.
    pub fn leading(&self) -> Option<&BranchPoint> {
        self.absolute().next()
    }

    pub fn max_abs_re(&self) -> Option<f64> {
        self.leading().map(|p| p.lambda_br.re)
    }
}

/// Discriminant of the minus-side cubic in `lambda` (times `c^4/4`), for
/// `0 <= m < 1`, as descending coefficients.
pub fn discriminant_quintic(beta: f64, c: f64, m: f64) -> [f64; 6] {
    let b1 = beta + m - 1.0;
    let mm = m - 1.0;
    let c2 = c * c;
    [
        1.0,
        c2 * (2.0 * beta + m - 1.0).powi(2) / (4.0 * b1 * b1),
        beta * c2 * c2 * (18.0 * beta * beta + 37.0 * beta * mm + 20.0 * mm * mm) / (2.0 * b1.powi(3)),
        beta * c2.powi(3)
            * (5.0 * beta.powi(3) + 28.0 * beta * beta * mm + 50.0 * beta * mm * mm + 26.0 * mm.powi(3))
            / (4.0 * b1.powi(4)),
        beta * c2.powi(4) * mm * (beta * beta + 6.0 * beta * mm + 2.0 * mm * mm) / (2.0 * b1.powi(4)),
        beta * beta * c2.powi(5) * mm * mm / (4.0 * b1.powi(4)),
    ]
}

/// Non-trivial factor `4 l^3 + 4 c^2 l^2 + 36 c^4 l + 5 c^6` of the `m = 1`
/// discriminant; the remaining factor is `l^2`.
pub fn discriminant_m1_cubic(c: f64) -> [f64; 4] {
    let c2 = c * c;
    [4.0, 4.0 * c2, 36.0 * c2 * c2, 5.0 * c2.powi(3)]
}

fn poly_desc(desc: &[f64]) -> Result<ComplexPoly> {
    let asc: Vec<f64> = desc.iter().rev().copied().collect();
    ComplexPoly::from_real(&asc)
}

/// Candidate branch-point `lambda` values for `eps = 0`.
fn discriminant_roots(params: &ModelParams) -> Result<Vec<Complex64>> {
    if params.m == 1.0 {
        let mut out = vec![cx(0.0)];
        out.extend(roots_general(&poly_desc(&discriminant_m1_cubic(params.c))?)?.roots);
        Ok(out)
    } else {
        let q = discriminant_quintic(params.beta, params.c, params.m);
        Ok(roots_general(&poly_desc(&q)?)?.roots)
    }
}

/// Double root of the cubic `a x^3 + b x^2 + c x + d` with vanishing
/// discriminant: `(9ad - bc) / (2(b^2 - 3ac))`.
fn cubic_double_root(p: &ComplexPoly) -> Option<Complex64> {
    let k = p.coeffs();
    if k.len() != 4 {
        return None;
    }
    let (d, c, b, a) = (k[0], k[1], k[2], k[3]);
    let den = (b * b - a * c * 3.0) * 2.0;
    if den.norm() < 1e-300 {
        return None;
    }
    Some((a * d * 9.0 - b * c) / den)
}

/// Newton on `P = dP/dmu = 0` in `(mu, lambda)`.
fn refine_double_root(
    table: &CharTable,
    mut mu: Complex64,
    mut lambda: Complex64,
) -> Result<(Complex64, Complex64)> {
    for _ in 0..NEWTON_MAX_ITER {
        let (r0, r1) = double_root_residuals(table, mu, lambda);
        if r0 < 1e-15 && r1 < 1e-14 {
            break;
        }
        let f1 = table.partial(0, 0, mu, lambda);
        let f2 = table.partial(1, 0, mu, lambda);
        let j11 = table.partial(1, 0, mu, lambda);
        let j12 = table.partial(0, 1, mu, lambda);
        let j21 = table.partial(2, 0, mu, lambda);
        let j22 = table.partial(1, 1, mu, lambda);
        let det = j11 * j22 - j12 * j21;
        if det.norm() == 0.0 {
            break;
        }
        let dmu = (f1 * j22 - j12 * f2) / det;
        let dl = (j11 * f2 - j21 * f1) / det;
        mu -= dmu;
        lambda -= dl;
        if dmu.norm() + dl.norm() <= 1e-15 * (1.0 + mu.norm() + lambda.norm()) {
            break;
        }
    }
    let (r0, r1) = double_root_residuals(table, mu, lambda);
    if r0.is_finite() && r0 < 1e-9 && r1 < 1e-7 && mu.re.is_finite() && lambda.re.is_finite() {
        Ok((mu, lambda))
    } else {
        Err(Error::NonConvergence {
            iterations: NEWTON_MAX_ITER,
            worst_residual: r0.max(r1),
        })
    }
}

/// Residuals `|P|`, `|P_mu|` relative to the size of the summed terms.
fn double_root_residuals(table: &CharTable, mu: Complex64, lambda: Complex64) -> (f64, f64) {
    let scale = table.magnitude(mu, lambda).max(1.0);
    let dscale = scale / (1.0 + mu.norm());
    (
        table.partial(0, 0, mu, lambda).norm() / scale,
        table.partial(1, 0, mu, lambda).norm() / dscale,
    )
}

/// Classifies a double root: absolute iff exactly `PIVOT - 1` other roots lie
/// strictly to its right.
fn classify_double_root(params: &ModelParams, side: Side, mu: Complex64, lambda: Complex64) -> Result<bool> {
    let roots = spatial_roots_generic(params, side, lambda)?;
    let mut rest = roots.clone();
    for _ in 0..2 {
        let idx = (0..rest.len())
            .min_by(|&i, &j| (rest[i] - mu).norm().total_cmp(&(rest[j] - mu).norm()))
            .unwrap();
        rest.remove(idx);
    }
    let tol = 1e-7 * (1.0 + mu.norm());
    let right = rest.iter().filter(|z| z.re > mu.re + tol).count();
    let tied = rest.iter().any(|z| (z.re - mu.re).abs() <= tol);
    Ok(right == PIVOT - 1 && !tied)
}

fn make_branch_point(params: &ModelParams, table: &CharTable, mu: Complex64, lambda: Complex64) -> Result<BranchPoint> {
    let in_absolute = classify_double_root(params, Side::MinusInfinity, mu, lambda)?;
    Ok(BranchPoint {
        lambda_br: lambda,
        double_root_mu: mu,
        in_absolute,
        side: Side::MinusInfinity,
        residuals: (
            table.partial(0, 0, mu, lambda).norm(),
            table.partial(1, 0, mu, lambda).norm(),
        ),
    })
}

/// Branch points of the minus-side characteristic polynomial.
pub fn branch_points(params: &ModelParams) -> Result<BranchPoints> {
    let base = params.with_eps(0.0);
    let table0 = CharTable::new(&base, Side::MinusInfinity)?;
    let mut seeds = Vec::new();
    let mut failures = Vec::new();
    for lambda in discriminant_roots(&base)? {
        let p = table0.at_lambda_raw(lambda)?;
        let guess = match cubic_double_root(&p) {
            Some(mu) => mu,
            None => nearest_pair_mean(&roots_cubic(&p)?.roots),
        };
        match refine_double_root(&table0, guess, lambda) {
            Ok(s) => seeds.push(s),
            Err(e) => failures.push(e),
        }
    }

    let (table, refined) = if params.eps > 0.0 {
        let table = CharTable::new(params, Side::MinusInfinity)?;
        let mut out = Vec::new();
        for (mu, lambda) in seeds {
            match continue_in_eps(params, mu, lambda) {
                Ok(s) => out.push(s),
                Err(e) => failures.push(e),
            }
        }
        (table, out)
    } else {
        (table0, seeds)
    };

    let mut points = Vec::new();
    for (mu, lambda) in refined {
        // The m = 1 discriminant has a double zero at the origin; keep one.
        if points
            .iter()
            .any(|p: &BranchPoint| (p.lambda_br - lambda).norm() < 1e-9 * (1.0 + lambda.norm()))
        {
            continue;
        }
        points.push(make_branch_point(params, &table, mu, lambda)?);
    }
    sort_branch_points(&mut points);
    check_conjugates(&points)?;
    Ok(BranchPoints { points, failures })
}

fn nearest_pair_mean(r: &[Complex64]) -> Complex64 {
    let mut best = (f64::INFINITY, r[0]);
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let d = (r[i] - r[j]).norm();
            if d < best.0 {
                best = (d, (r[i] + r[j]) / 2.0);
            }
        }
    }
    best.1
}

fn sort_branch_points(points: &mut [BranchPoint]) {
    points.sort_by(|a, b| {
        b.lambda_br
            .re
            .total_cmp(&a.lambda_br.re)
            .then(b.lambda_br.im.total_cmp(&a.lambda_br.im))
    });
}

fn check_conjugates(points: &[BranchPoint]) -> Result<()> {
    for p in points {
        let l = p.lambda_br;
        if l.im.abs() <= 1e-9 * (1.0 + l.norm()) {
            continue;
        }
        let found = points
            .iter()
            .any(|q| (q.lambda_br - l.conj()).norm() <= 1e-7 * (1.0 + l.norm()));
        if !found {
            return Err(Error::MissingConjugate { lambda: l });
        }
    }
    Ok(())
}

/// Continues an `eps = 0` double root to `params.eps` in small steps.
fn continue_in_eps(params: &ModelParams, mut mu: Complex64, mut lambda: Complex64) -> Result<(Complex64, Complex64)> {
    const STEPS: usize = 16;
    for i in 1..=STEPS {
        let eps = params.eps * i as f64 / STEPS as f64;
        let table = CharTable::new(&params.with_eps(eps), Side::MinusInfinity)?;
        let (m2, l2) = refine_double_root(&table, mu, lambda)?;
        mu = m2;
        lambda = l2;
    }
    Ok((mu, lambda))
}

// ---------------------------------------------------------------------------
// Ideal weights

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealWeights {
    pub nu_minus_star: f64,
    pub nu_plus_star: f64,
}

pub fn ideal_weights_from(params: &ModelParams, bps: &BranchPoints) -> Result<IdealWeights> {
    let lead = bps.leading().ok_or_else(|| {
        Error::NoAbsoluteBranchPoint(format!(
            "{} branch points, none with the double root at ranks 2 and 3",
            bps.points.len()
        ))
    })?;
    Ok(IdealWeights {
        nu_minus_star: -lead.double_root_mu.re,
        nu_plus_star: params.c / 2.0,
    })
}

pub fn ideal_weights(params: &ModelParams) -> Result<IdealWeights> {
    ideal_weights_from(params, &branch_points(params)?)
}

// ---------------------------------------------------------------------------
// Absolute spectrum from the left

#[derive(Clone, Debug, PartialEq)]
pub struct AbsTrace {
    /// Branch through the seed; sample keys are sweep weights.
    pub curve: SpectrumCurve,
    /// Complex-conjugate branch.
    pub mirror: SpectrumCurve,
    /// Weight range actually covered.
    pub nu_range: (f64, f64),
    /// Set when the sweep stopped early.
    pub failure: Option<Error>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    pub step_count: usize,
    /// Final sweep weight; defaults to zero.
    pub nu_end: Option<f64>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            step_count: DEFAULT_TRACE_STEPS,
            nu_end: None,
        }
    }
}

/// Self-intersection state: `lambda` and the two wavenumbers.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Crossing {
    lambda: Complex64,
    k1: f64,
    k2: f64,
}

/// Newton for `P(ik1 - nu, lambda) = P(ik2 - nu, lambda) = 0`.
fn solve_crossing(table: &CharTable, nu: f64, guess: Crossing) -> Option<Crossing> {
    let mut x = [guess.lambda.re, guess.lambda.im, guess.k1, guess.k2];
    for _ in 0..NEWTON_MAX_ITER {
        let lambda = Complex64::new(x[0], x[1]);
        let m1 = Complex64::new(-nu, x[2]);
        let m2 = Complex64::new(-nu, x[3]);
        let p1 = table.eval(m1, lambda);
        let p2 = table.eval(m2, lambda);
        let l1 = table.partial(0, 1, m1, lambda);
        let l2 = table.partial(0, 1, m2, lambda);
        let d1 = table.partial(1, 0, m1, lambda) * Complex64::i();
        let d2 = table.partial(1, 0, m2, lambda) * Complex64::i();
        let i_l1 = l1 * Complex64::i();
        let i_l2 = l2 * Complex64::i();
        let mut a = [
            [l1.re, i_l1.re, d1.re, 0.0],
            [l1.im, i_l1.im, d1.im, 0.0],
            [l2.re, i_l2.re, 0.0, d2.re],
            [l2.im, i_l2.im, 0.0, d2.im],
        ];
        let mut b = [-p1.re, -p1.im, -p2.re, -p2.im];
        let dx = solve4(&mut a, &mut b)?;
        for i in 0..4 {
            x[i] += dx[i];
        }
        let size = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if dx.iter().map(|v| v.abs()).fold(0.0, f64::max) <= NEWTON_TOL * size {
            let out = Crossing {
                lambda: Complex64::new(x[0], x[1]),
                k1: x[2],
                k2: x[3],
            };
            let sep = (out.k1 - out.k2).abs();
            if !x.iter().all(|v| v.is_finite()) || sep < 1e-8 * (1.0 + out.k1.abs()) {
                return None;
            }
            return Some(out);
        }
    }
    None
}

/// Gaussian elimination with partial pivoting.
fn solve4(a: &mut [[f64; 4]; 4], b: &mut [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Local cusp expansion at a branch point: `(L2, a)` with
/// `lambda - lambda_br ~ L2 s^2`, `k_{1,2} ~ Im mu* +- s + Im(a) s^2`,
/// `nu - nu* ~ -Re(a) s^2`.
fn cusp_coefficients(table: &CharTable, mu: Complex64, lambda: Complex64) -> (Complex64, Complex64) {
    let p_l = table.partial(0, 1, mu, lambda);
    let p_mm = table.partial(2, 0, mu, lambda);
    let p_mmm = table.partial(3, 0, mu, lambda);
    let p_ml = table.partial(1, 1, mu, lambda);
    let l2 = p_mm / (p_l * 2.0);
    let a = (p_mmm / 6.0 - p_ml * l2) / p_mm;
    (l2, a)
}

/// Start of the trace when `P_lambda` vanishes at the branch point, so the
/// cusp expansion is singular. The two colliding roots then separate
/// linearly, `mu_j - mu* ~ r_j (lambda - lambda_br)`, and the crossing leaves
/// along `d = i / (r_+ - r_-)`. Points are found by fixing the offset along
/// `d` and solving for the transverse offset, both wavenumbers and the weight.
fn degenerate_start(table: &CharTable, seed: &BranchPoint, c: f64) -> Result<Vec<(f64, Crossing)>> {
    let mu0 = seed.double_root_mu;
    let lam0 = seed.lambda_br;
    let nu_star = -mu0.re;
    let fail = Error::StepFailure { nu: nu_star };
    let p_mm = table.partial(2, 0, mu0, lam0);
    let p_ml = table.partial(1, 1, mu0, lam0);
    let p_ll = table.partial(0, 2, mu0, lam0);
    // (p_mm / 2) r^2 + p_ml r + p_ll / 2 = 0
    let disc = (p_ml * p_ml - p_mm * p_ll).sqrt();
    if p_mm.norm() == 0.0 || disc.norm() == 0.0 {
        return Err(fail);
    }
    let r_plus = (-p_ml + disc) / p_mm;
    let r_minus = (-p_ml - disc) / p_mm;
    let mut d = Complex64::i() / (r_plus - r_minus);
    d /= d.norm();
    if d.im < 0.0 || (d.im == 0.0 && d.re < 0.0) {
        d = -d;
    }
    // Geometric offsets so the first point sits very close to the seed.
    let t_max = 0.05 * c * c;
    let n = 20;
    let mut out = Vec::with_capacity(n);
    let mut prev: Option<(f64, f64, f64, f64)> = None;
    for i in 0..n {
        let t = t_max * 0.5f64.powi((n - 1 - i) as i32);
        let guess = prev.unwrap_or_else(|| {
            let dl = d * t;
            let m1 = r_plus * dl;
            let m2 = r_minus * dl;
            (0.0, mu0.im + m1.im, mu0.im + m2.im, nu_star - m1.re)
        });
        let sol = solve_crossing_along(table, lam0, d, t, guess).ok_or(fail.clone())?;
        prev = Some(sol);
        let (x, k1, k2, nu) = sol;
        out.push((
            nu,
            Crossing {
                lambda: lam0 + d * t + Complex64::i() * d * x,
                k1,
                k2,
            },
        ));
    }
    Ok(out)
}

/// Newton in `(x, k1, k2, nu)` with `lambda = base + (t + i x) d`.
fn solve_crossing_along(
    table: &CharTable,
    base: Complex64,
    d: Complex64,
    t: f64,
    guess: (f64, f64, f64, f64),
) -> Option<(f64, f64, f64, f64)> {
    let mut x = [guess.0, guess.1, guess.2, guess.3];
    let id = Complex64::i() * d;
    for _ in 0..NEWTON_MAX_ITER {
        let lambda = base + d * t + id * x[0];
        let m1 = Complex64::new(-x[3], x[1]);
        let m2 = Complex64::new(-x[3], x[2]);
        let p1 = table.eval(m1, lambda);
        let p2 = table.eval(m2, lambda);
        let l1 = table.partial(0, 1, m1, lambda) * id;
        let l2 = table.partial(0, 1, m2, lambda) * id;
        let q1 = table.partial(1, 0, m1, lambda);
        let q2 = table.partial(1, 0, m2, lambda);
        let d1 = q1 * Complex64::i();
        let d2 = q2 * Complex64::i();
        let mut a = [
            [l1.re, d1.re, 0.0, -q1.re],
            [l1.im, d1.im, 0.0, -q1.im],
            [l2.re, 0.0, d2.re, -q2.re],
            [l2.im, 0.0, d2.im, -q2.im],
        ];
        let mut b = [-p1.re, -p1.im, -p2.re, -p2.im];
        let dx = solve4(&mut a, &mut b)?;
        for i in 0..4 {
            x[i] += dx[i];
        }
        let size = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if dx.iter().map(|v| v.abs()).fold(0.0, f64::max) <= NEWTON_TOL * size {
            let sep = (x[1] - x[2]).abs();
            if !x.iter().all(|v| v.is_finite()) || sep < 1e-8 * (1.0 + x[1].abs()) {
                return None;
            }
            return Some((x[0], x[1], x[2], x[3]));
        }
    }
    None
}

/// Follows the absolute spectrum out of an absolute branch point by sweeping
/// the weight and tracking the self-intersection of the weighted dispersion
/// relation.
pub fn trace_abs_minus(params: &ModelParams, seed: &BranchPoint, options: TraceOptions) -> Result<AbsTrace> {
    if !seed.in_absolute {
        return Err(Error::InvalidInput("trace seed must be an absolute branch point".into()));
    }
    if options.step_count == 0 {
        return Err(Error::InvalidInput("step_count must be positive".into()));
    }
    let table = CharTable::new(params, Side::MinusInfinity)?;
    let nu_star = -seed.double_root_mu.re;
    let k_star = seed.double_root_mu.im;
    let mut samples = vec![(nu_star, seed.lambda_br)];
    let mut states: Vec<(f64, Crossing)> = Vec::new();
    let (l2, a) = cusp_coefficients(&table, seed.double_root_mu, seed.lambda_br);
    let p_l = table.partial(0, 1, seed.double_root_mu, seed.lambda_br).norm();
    let curvature = table.partial(2, 0, seed.double_root_mu, seed.lambda_br).norm()
        + table.partial(1, 1, seed.double_root_mu, seed.lambda_br).norm()
        + table.partial(0, 2, seed.double_root_mu, seed.lambda_br).norm();
    let degenerate = p_l <= DEGENERATE_CUSP_TOL * curvature;
    let direction = if !degenerate && a.re != 0.0 && a.re.is_finite() {
        // The branch opens towards the side where -Re(a) (nu - nu*) > 0.
        -a.re.signum()
    } else {
        states = degenerate_start(&table, seed, params.c)?;
        samples.extend(states.iter().map(|(n, s)| (*n, s.lambda)));
        (states[states.len() - 1].0 - nu_star).signum()
    };
    let nu_end = options.nu_end.unwrap_or(0.0);
    let span = if (nu_end - nu_star) * direction > 0.0 {
        (nu_end - nu_star).abs()
    } else {
        params.c
    };
    let dnu = direction * span / options.step_count as f64;

    let mut nu = states.last().map_or(nu_star, |s| s.0);
    let mut failure = None;
    let mut step = dnu;
    let target = nu_star + direction * span;
    while (target - nu) * direction > 1e-12 * (1.0 + nu.abs()) {
        let next_nu = if (target - (nu + step)) * direction < 0.0 {
            target
        } else {
            nu + step
        };
        let guess = if states.len() < 2 {
            let s = ((next_nu - nu_star) / -a.re).sqrt();
            Crossing {
                lambda: seed.lambda_br + l2 * s * s,
                k1: k_star + s + a.im * s * s,
                k2: k_star - s + a.im * s * s,
            }
        } else {
            let (n0, c0) = states[states.len() - 2];
            let (n1, c1) = states[states.len() - 1];
            let t = (next_nu - n1) / (n1 - n0);
            Crossing {
                lambda: c1.lambda + (c1.lambda - c0.lambda) * t,
                k1: c1.k1 + (c1.k1 - c0.k1) * t,
                k2: c1.k2 + (c1.k2 - c0.k2) * t,
            }
        };
        match solve_crossing(&table, next_nu, guess) {
            Some(sol) => {
                nu = next_nu;
                states.push((nu, sol));
                samples.push((nu, sol.lambda));
                step = dnu;
            }
            None if step.abs() > dnu.abs() / 64.0 => step /= 2.0,
            None => {
                failure = Some(Error::StepFailure { nu: next_nu });
                break;
            }
        }
    }
    let curve = SpectrumCurve {
        side: Side::MinusInfinity,
        branch_id: 0,
        samples,
        weight: nu_star,
    };
    let mirror = curve.mirrored(1);
    Ok(AbsTrace {
        curve,
        mirror,
        nu_range: (nu_star.min(nu), nu_star.max(nu)),
        failure,
    })
}

// ---------------------------------------------------------------------------
// Admissible weights

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightWindow {
    pub nu_minus_star: f64,
    pub nu_plus_star: f64,
    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub empty: bool,
    /// Wavenumber half-width used for the maximisation.
    pub k_max: f64,
}

impl WeightWindow {
    pub fn width(&self) -> Option<f64> {
        Some(self.nu_max? - self.nu_min?)
    }
}

/// Lower end of the weight search range, `-c(beta+m)/(beta+m-1)`.
pub fn nu_asymptote(params: &ModelParams) -> f64 {
    -params.c * (params.beta + params.m) / params.b1()
}

pub fn default_k_window(params: &ModelParams) -> f64 {
    10.0 * params.c.max(params.c / params.b1())
}

/// `sup_k max Re lambda` of the weighted minus-side dispersion relation, with
/// the maximising wavenumber. When the supremum is only approached as
/// `|k| -> inf` the limit is returned with `k = +-inf`.
pub fn max_dispersion_re(table: &CharTable, nu: f64, k_max: f64) -> Result<(f64, f64)> {
    let n = WINDOW_K_SAMPLES;
    let h = 2.0 * k_max / (n - 1) as f64;
    let g = |k: f64| -> f64 {
        dispersion_lambda_table(table, k, nu)
            .map(|ls| ls.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max))
            .unwrap_or(f64::NAN)
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..n {
        let v = g(-k_max + h * i as f64);
        if v.is_nan() {
            return Err(Error::DegenerateLeadingCoefficient { reduced: None });
        }
        if v > best.1 {
            best = (i, v);
        }
    }
    if best.0 == 0 || best.0 == n - 1 {
        let side = if best.0 == 0 { -1.0 } else { 1.0 };
        let tail = [2.0, 4.0, 8.0].map(|f| g(side * f * k_max));
        let (d1, d2) = (tail[0] - best.1, tail[1] - tail[0]);
        let d3 = tail[2] - tail[1];
        // Geometric convergence of the tail: Aitken extrapolation to the limit.
        if tail.iter().all(|v| v.is_finite()) && d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d3 <= 0.5 * d2 && d2 <= 0.5 * d1 {
            let limit = tail[2] + d3 * d3 / (d2 - d3);
            return Ok((limit, side * f64::INFINITY));
        }
        return Err(Error::KWindowTooSmall { k_max });
    }
    let centre = -k_max + h * best.0 as f64;
    let (k, v) = golden_min(|k| -g(k), centre - h, centre + h, 120);
    Ok(if -v > best.1 { (-v, k) } else { (best.1, centre) })
}

/// Interval of minus-side weights for which the weighted dispersion relation
/// lies in the open left half plane.
pub fn admissible_weight_window(
    params: &ModelParams,
    k_window: Option<f64>,
    nu_search_range: Option<(f64, f64)>,
) -> Result<WeightWindow> {
    let ideal = ideal_weights(params)?;
    admissible_weight_window_with(params, ideal, k_window, nu_search_range)
}

pub fn admissible_weight_window_with(
    params: &ModelParams,
    ideal: IdealWeights,
    k_window: Option<f64>,
    nu_search_range: Option<(f64, f64)>,
) -> Result<WeightWindow> {
    let table = CharTable::new(params, Side::MinusInfinity)?;
    let (lo, hi) = nu_search_range.unwrap_or((nu_asymptote(params), 0.0));
    if !(lo < hi) {
        return Err(Error::InvalidInput("empty weight search range".into()));
    }
    let k_max = Cell::new(k_window.unwrap_or_else(|| default_k_window(params)));
    // Enlarge the wavenumber window until the maximiser is interior.
    let g = |nu: f64| -> Result<f64> {
        for _ in 0..4 {
            match max_dispersion_re(&table, nu, k_max.get()) {
                Ok((v, _)) => return Ok(v),
                Err(Error::KWindowTooSmall { .. }) => k_max.set(2.0 * k_max.get()),
                Err(e) => return Err(e),
            }
        }
        Err(Error::KWindowTooSmall { k_max: k_max.get() })
    };

    const SCAN: usize = 400;
    let h = (hi - lo) / SCAN as f64;
    let mut nus: Vec<f64> = (1..SCAN).map(|i| lo + h * i as f64).collect();
    if ideal.nu_minus_star > lo && ideal.nu_minus_star < hi {
        nus.push(ideal.nu_minus_star);
    }
    let mut best = (f64::NAN, f64::INFINITY);
    for &nu in &nus {
        let v = g(nu)?;
        if v < best.1 {
            best = (nu, v);
        }
    }
    if best.1 >= 0.0 {
        // A narrow window can hide between scan points: refine the minimum.
        let (nu, v) = golden_min(
            |nu| g(nu).unwrap_or(f64::INFINITY),
            (best.0 - h).max(lo),
            (best.0 + h).min(hi),
            80,
        );
        if v < best.1 {
            best = (nu, v);
        }
    }
    let empty_window = WeightWindow {
        nu_minus_star: ideal.nu_minus_star,
        nu_plus_star: ideal.nu_plus_star,
        nu_min: None,
        nu_max: None,
        empty: true,
        k_max: k_max.get(),
    };
    if best.1 >= 0.0 {
        return Ok(empty_window);
    }

    let inside = best.0;
    let edge = |dir: f64| -> Result<f64> {
        let bound = if dir < 0.0 { lo } else { hi };
        let mut a = inside;
        let mut b = inside;
        loop {
            let next = (b + dir * h).clamp(lo.min(hi), hi.max(lo));
            if (next - bound).abs() < 1e-15 || (next - b).abs() < 1e-15 {
                return Ok(bound);
            }
            if g(next)? >= 0.0 {
                b = next;
                break;
            }
            a = next;
            b = next;
        }
        // g(a) < 0 <= g(b)
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (b - a).abs() <= 1e-12 * (1.0 + a.abs()) {
                break;
            }
            if g(mid)? < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    };
    let nu_min = edge(-1.0)?;
    let nu_max = edge(1.0)?;
    Ok(WeightWindow {
        nu_min: Some(nu_min),
        nu_max: Some(nu_max),
        empty: false,
        k_max: k_max.get(),
        ..empty_window
    })
}

// ---------------------------------------------------------------------------
// Critical chemotactic strength

pub fn f_beta() -> ComplexPoly {
    poly_desc(&F_BETA_DESC).expect("nonzero constant polynomial")
}

/// `(1-m)^10 f(beta / (1-m))`: its root above `1 - m` is the critical value
/// for consumption exponent `m`.
pub fn f_m(m: f64) -> Result<ComplexPoly> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::OutOfRange { m });
    }
    let s = 1.0 - m;
    let desc: Vec<f64> = F_BETA_DESC
        .iter()
        .enumerate()
        .map(|(i, &a)| a * s.powi(i as i32))
        .collect();
    poly_desc(&desc)
}

/// `Delta(beta) = beta(324 b^5 - 1324 b^4 + 2025 b^3 - 1360 b^2 + 320 b + 16)`.
pub fn delta_beta() -> ComplexPoly {
    ComplexPoly::from_real(&[0.0, 16.0, 320.0, -1360.0, 2025.0, -1324.0, 324.0]).expect("nonzero")
}

/// Unique root of `f` above one, scaled by `1 - m`.
pub fn beta_crit(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::OutOfRange { m });
    }
    let f = f_beta();
    let s = sturm_count(&f, 1.0, 1e6)?;
    if s.count != 1 {
        return Err(Error::InvalidInput(format!(
            "expected one critical root above 1, Sturm count gave {}",
            s.count
        )));
    }
    let (a, b) = s.isolating_intervals[0];
    let root = if (f.eval_real(a) > 0.0) != (f.eval_real(b) > 0.0) {
        bisect_real_root(&f, a, b, 1e-14)?
    } else {
        0.5 * (a + b)
    };
    Ok(root * (1.0 - m))
}

/// Check of the purely imaginary branch-point conditions at `beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaCritCheck {
    /// Effective strength `beta / (1 - m)`.
    pub b_eff: f64,
    pub delta: f64,
    /// Squared imaginary parts `Lambda_{1,2}` of candidate imaginary roots.
    pub lambda_sq: (f64, f64),
    /// Relative residuals of the real-part condition at `Lambda_{1,2}`.
    pub residuals: (f64, f64),
    /// `sqrt(Lambda_1) / c^2`, the predicted `|Im lambda_br| / c^2`.
    pub sqrt_lambda1: f64,
}

impl BetaCritCheck {
    pub fn min_residual(&self) -> f64 {
        self.residuals.0.min(self.residuals.1)
    }
}

/// Substitutes `Lambda_{1,2}` into the real-part condition on `lambda = i l`.
pub fn verify_beta_crit(beta: f64, c: f64, m: f64) -> Result<BetaCritCheck> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::OutOfRange { m });
    }
    if beta + m <= 1.0 {
        return Err(Error::InvalidParams {
            field: "beta",
            constraint: "beta+m must exceed 1",
        });
    }
    let b = beta / (1.0 - m);
    let delta = delta_beta().eval_real(b);
    if delta < 0.0 {
        return Err(Error::NegativeDiscriminant { delta });
    }
    let c4 = c.powi(4);
    let base = b * (18.0 * b * b - 37.0 * b + 20.0);
    let den = 4.0 * (b - 1.0).powi(3);
    let l1 = c4 * (base - delta.sqrt()) / den;
    let l2 = c4 * (base + delta.sqrt()) / den;
    let q = (b - 1.0).powi(2) * (2.0 * b - 1.0).powi(2);
    let lin = b * (5.0 * b.powi(3) - 28.0 * b * b + 50.0 * b - 26.0) * c4 / q;
    let cst = b * b * c4 * c4 / q;
    let resid = |x: f64| (x * x - lin * x + cst).abs() / (x * x + (lin * x).abs() + cst.abs());
    Ok(BetaCritCheck {
        b_eff: b,
        delta,
        lambda_sq: (l1, l2),
        residuals: (resid(l1), resid(l2)),
        sqrt_lambda1: l1.max(0.0).sqrt() / (c * c),
    })
}

/// Strength at which the leading absolute branch point crosses the imaginary
/// axis, bracketed in `(1 - m) [lo, hi]`.
pub fn onset_beta(c: f64, m: f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let h = |beta: f64| -> Result<f64> {
        let p = ModelParams::new(beta, c, m, 0.0)?;
        branch_points(&p)?
            .max_abs_re()
            .ok_or_else(|| Error::NoAbsoluteBranchPoint(format!("beta = {beta}")))
    };
    let (mut a, mut b) = bracket;
    let (ha, hb) = (h(a)?, h(b)?);
    if (ha > 0.0) == (hb > 0.0) {
        return Err(Error::InvalidInput(format!(
            "onset not bracketed: Re lambda_br = {ha} at {a}, {hb} at {b}"
        )));
    }
    let rising = ha < 0.0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if (h(mid)? < 0.0) == rising {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AbsolutelyUnstable,
    WeightedStableCandidate,
    MarginalOriginInAbs,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::AbsolutelyUnstable => "AbsolutelyUnstable",
            Verdict::WeightedStableCandidate => "WeightedStableCandidate",
            Verdict::MarginalOriginInAbs => "MarginalOriginInAbs",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub params: ModelParams,
    /// `None` for `m = 1`, where no critical value exists.
    pub beta_crit_effective: Option<f64>,
    pub branch_points: Vec<BranchPoint>,
    pub weights: WeightWindow,
    pub verdict: Verdict,
    /// Sign of `beta - beta_crit`; the leading-order prediction for `eps > 0`.
    pub beta_above_crit: Option<bool>,
    pub diagnostics: Vec<String>,
}

impl StabilityReport {
    /// Checks the verdict and window invariants.
    pub fn check_invariants(&self) -> Result<()> {
        let unstable = self
            .branch_points
            .iter()
            .any(|p| p.in_absolute && p.lambda_br.re > 0.0);
        let expected = if self.params.m == 1.0 {
            Verdict::MarginalOriginInAbs
        } else if unstable {
            Verdict::AbsolutelyUnstable
        } else {
            Verdict::WeightedStableCandidate
        };
        if self.verdict != expected {
            return Err(Error::InvalidInput(format!(
                "verdict {} inconsistent with branch points",
                self.verdict.label()
            )));
        }
        let w = &self.weights;
        if w.empty != (w.nu_min.is_none() && w.nu_max.is_none()) {
            return Err(Error::InvalidInput("window emptiness flag inconsistent".into()));
        }
        if let (Some(a), Some(b)) = (w.nu_min, w.nu_max) {
            if !(a < b) {
                return Err(Error::InvalidInput("window endpoints out of order".into()));
            }
        }
        if (w.nu_plus_star - self.params.c / 2.0).abs() > 1e-10 * self.params.c {
            return Err(Error::InvalidInput("nu_plus_star differs from c/2".into()));
        }
        Ok(())
    }
}

pub fn classify(params: &ModelParams) -> Result<StabilityReport> {
    let params = params.validate()?;
    let mut diagnostics = params.warnings();
    if let Err(e) = check_well_posed(&params) {
        diagnostics.push(format!("well-posedness: {e}"));
    }
    let bps = branch_points(&params)?;
    for f in &bps.failures {
        diagnostics.push(format!("branch point seed: {f}"));
    }
    let ideal = ideal_weights_from(&params, &bps)?;
    let k_window = (params.eps > 0.0).then(|| 2.0 * default_k_window(&params));
    let weights = match admissible_weight_window_with(&params, ideal, k_window, None) {
        Ok(w) => w,
        Err(e) => {
            diagnostics.push(format!("weight window: {e}"));
            WeightWindow {
                nu_minus_star: ideal.nu_minus_star,
                nu_plus_star: ideal.nu_plus_star,
                nu_min: None,
                nu_max: None,
                empty: true,
                k_max: k_window.unwrap_or_else(|| default_k_window(&params)),
            }
        }
    };
    let (beta_crit_effective, beta_above_crit) = if params.m < 1.0 {
        let bc = beta_crit(params.m)?;
        (Some(bc), Some(params.beta > bc))
    } else {
        (None, None)
    };
    let unstable = bps.absolute().any(|p| p.lambda_br.re > 0.0);
    let verdict = if params.m == 1.0 {
        Verdict::MarginalOriginInAbs
    } else if unstable {
        Verdict::AbsolutelyUnstable
    } else {
        Verdict::WeightedStableCandidate
    };
    if params.m < 1.0 && params.eps == 0.0 && beta_above_crit != Some(unstable) {
        diagnostics.push("branch-point verdict disagrees with the critical-strength prediction".into());
    }
    Ok(StabilityReport {
        params,
        beta_crit_effective,
        branch_points: bps.points,
        weights,
        verdict,
        beta_above_crit,
        diagnostics,
    })
}
