//! Complex polynomials in one variable.
//!
//! Closed-form cubic roots, Aberth–Ehrlich simultaneous iteration for the
//! general case, the cubic discriminant, and Sturm sequences for real-root
//! counting. Every polynomial in this crate has degree at most ten with
//! moderate coefficients, so plain `f64` arithmetic is enough.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute residual tolerance used to accept polished roots, relative to the
/// polynomial scale (see [`RootSet`]).
pub const POLISH_TOL: f64 = 1e-12;
/// Iteration cap for simultaneous iteration.
pub const MAX_ITERATIONS: usize = 200;
/// Two roots are considered equal when `|a - b| < DOUBLE_ROOT_TOL * (1 + max(|a|, |b|))`.
pub const DOUBLE_ROOT_TOL: f64 = 1e-6;
/// Coefficients with imaginary parts below this are treated as real.
pub const REAL_TOL: f64 = 1e-10;
/// Default width below which Sturm isolating intervals stop being bisected.
pub const ISOLATION_WIDTH: f64 = 1e-10;

/// Polynomial with complex coefficients in ascending degree order.
///
/// `coeffs[0]` is the constant term. Trailing zero coefficients are trimmed on
/// construction, so the leading coefficient is always nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("polynomial coefficient is not finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Builds the monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        horner(&self.coeffs, x)
    }

    /// Horner evaluation of the real parts of the coefficients at a real point.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }

    /// Derivative, or `None` for a constant.
    pub fn derivative(&self) -> Option<Self> {
        if self.degree() == 0 {
            return None;
        }
        Self::new(derivative_coeffs(&self.coeffs)).ok()
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        Self {
            coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// True when every coefficient has imaginary part at most `tol` relative
    /// to the largest coefficient magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.max_imag() <= tol * scale.max(1.0)
    }

    /// Residual bound `tol * max(1, |lead| * max|root|^degree)`.
    pub fn residual_bound(&self, roots: &[Complex64], tol: f64) -> f64 {
        let rmax = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        tol * (self.leading().norm() * rmax.powi(self.degree() as i32)).max(1.0)
    }
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn derivative_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// Roots of a polynomial with their residuals `|p(root)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
}

impl RootSet {
    fn from_roots(p: &ComplexPoly, roots: Vec<Complex64>) -> Self {
        let residuals = roots.iter().map(|&r| p.eval(r).norm()).collect();
        Self { roots, residuals }
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    fn check(self, p: &ComplexPoly, iterations: usize) -> Result<Self> {
        let bound = p.residual_bound(&self.roots, POLISH_TOL);
        let worst = self.worst_residual();
        if worst.is_finite() && worst <= bound {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                iterations,
                worst_residual: worst,
            })
        }
    }
}

/// Evaluates `p` at `x`.
pub fn eval(p: &ComplexPoly, x: Complex64) -> Complex64 {
    p.eval(x)
}

/// Closed-form roots of a cubic followed by Newton polishing.
///
/// Cardano's formula with the larger-magnitude cube-root branch, which keeps
/// the formula away from cancellation when two roots nearly coincide.
pub fn roots_cubic(p: &ComplexPoly) -> Result<RootSet> {
    if p.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: p.degree(),
        });
    }
    let q = p.monic();
    let [c0, c1, c2, _] = [q.coeffs[0], q.coeffs[1], q.coeffs[2], q.coeffs[3]];

    let shift = c2 / 3.0;
    let pp = c1 - c2 * c2 / 3.0;
    let qq = c2 * c2 * c2 * (2.0 / 27.0) - c2 * c1 / 3.0 + c0;
    let s = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
    let w_plus = -qq / 2.0 + s;
    let w_minus = -qq / 2.0 - s;
    let w = if w_plus.norm() >= w_minus.norm() {
        w_plus
    } else {
        w_minus
    };

    let mut roots = Vec::with_capacity(3);
    if w.norm() == 0.0 {
        roots.extend([-shift; 3]);
    } else {
        let u = w.cbrt();
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut uk = u;
        for _ in 0..3 {
            roots.push(uk - pp / (uk * 3.0) - shift);
            uk *= omega;
        }
    }

    let roots = finish_roots(p, roots);
    RootSet::from_roots(p, roots).check(p, 0)
}

/// All complex roots via Aberth–Ehrlich iteration with Newton polishing.
///
/// Real-coefficient inputs return conjugate-closed root sets.
pub fn roots_general(p: &ComplexPoly) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: 0,
        });
    }
    let q = p.monic();
    if n == 1 {
        return RootSet::from_roots(p, vec![-q.coeffs[0]]).check(p, 0);
    }
    if n == 3 {
        if let Ok(rs) = roots_cubic(p) {
            return Ok(rs);
        }
    }

    let dq = derivative_coeffs(&q.coeffs);
    // Fujiwara-type bound on the root moduli.
    let bound = (0..n)
        .map(|k| q.coeffs[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let radius = bound;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut converged = true;
        for i in 0..n {
            let pz = horner(&q.coeffs, z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let dpz = horner(&dq, z[i]);
            let ratio = pz / dpz;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let mut d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        d = Complex64::new(f64::EPSILON * (1.0 + z[i].norm()), 0.0);
                    }
                    sum += d.inv();
                }
            }
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                step = if ratio.re.is_finite() && ratio.im.is_finite() {
                    ratio
                } else {
                    Complex64::new(f64::EPSILON * (1.0 + z[i].norm()), 0.0)
                };
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }

    let roots = finish_roots(p, z);
    RootSet::from_roots(p, roots).check(p, iterations)
}

/// Shared post-processing: cluster merge, polish, conjugate closure.
fn finish_roots(p: &ComplexPoly, mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let dp = derivative_coeffs(&p.coeffs);
    let bound = p.residual_bound(&roots, POLISH_TOL);

    // Pair up near-coincident roots: the mean of a split double root is far
    // more accurate than either member.
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if partner[i].is_some() {
            continue;
        }
        let best = (0..n)
            .filter(|&j| j != i && partner[j].is_none())
            .map(|j| (j, (roots[i] - roots[j]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((j, d)) = best {
            if d < DOUBLE_ROOT_TOL * (1.0 + roots[i].norm().max(roots[j].norm())) {
                partner[i] = Some(j);
                partner[j] = Some(i);
            }
        }
    }

    for i in 0..n {
        match partner[i] {
            Some(j) if j > i => {
                // Double root: Newton on p' from the cluster mean.
                let mean = (roots[i] + roots[j]) / 2.0;
                let polished = newton_polish(&dp, mean, |x| p.eval(x).norm());
                if p.eval(polished).norm() <= bound {
                    roots[i] = polished;
                    roots[j] = polished;
                } else {
                    roots[i] = newton_polish(&p.coeffs, roots[i], |x| p.eval(x).norm());
                    roots[j] = newton_polish(&p.coeffs, roots[j], |x| p.eval(x).norm());
                }
            }
            Some(_) => {}
            None => roots[i] = newton_polish(&p.coeffs, roots[i], |x| p.eval(x).norm()),
        }
    }

    if p.is_real(REAL_TOL) {
        enforce_conjugates(&mut roots);
    }
    roots
}

/// A few Newton steps on `f`, keeping each step only if `score` does not grow.
fn newton_polish(f: &[Complex64], x0: Complex64, score: impl Fn(Complex64) -> f64) -> Complex64 {
    if f.len() < 2 {
        return x0;
    }
    let df = derivative_coeffs(f);
    let mut x = x0;
    let mut best = score(x);
    for _ in 0..8 {
        let d = horner(&df, x);
        if d.norm() == 0.0 {
            break;
        }
        let next = x - horner(f, x) / d;
        let s = score(next);
        if !(s <= best) || next == x {
            break;
        }
        x = next;
        best = s;
    }
    x
}

fn enforce_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        done[i] = true;
        let target = roots[i].conj();
        let d_self = (roots[i] - target).norm();
        let best = (0..n)
            .filter(|&j| !done[j])
            .map(|j| (j, (roots[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) if d < d_self => {
                let avg = (roots[i] + roots[j].conj()) / 2.0;
                roots[i] = avg;
                roots[j] = avg.conj();
                done[j] = true;
            }
            _ => roots[i] = Complex64::new(roots[i].re, 0.0),
        }
    }
}

/// Discriminant `18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2` of
/// `a x^3 + b x^2 + c x + d`.
pub fn discriminant_cubic(p: &ComplexPoly) -> Result<Complex64> {
    if p.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: p.degree(),
        });
    }
    let (d, c, b, a) = (p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3]);
    Ok(a * b * c * d * 18.0 - b * b * b * d * 4.0 + b * b * c * c
        - a * c * c * c * 4.0
        - a * a * d * d * 27.0)
}

/// Distinct real roots in `(lo, hi]` together with isolating intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct SturmResult {
    pub count: usize,
    pub isolating_intervals: Vec<(f64, f64)>,
}

/// Sturm chain of a real polynomial, each member scaled to unit max-norm.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<Vec<f64>>,
}

impl SturmSequence {
    pub fn new(p: &ComplexPoly) -> Result<Self> {
        if !p.is_real(REAL_TOL) {
            return Err(Error::NotRealPolynomial {
                max_imag: p.max_imag(),
            });
        }
        let p0: Vec<f64> = p.coeffs.iter().map(|c| c.re).collect();
        let mut chain = vec![normalized(p0)];
        if p.degree() == 0 {
            return Ok(Self { chain });
        }
        let p1: Vec<f64> = chain[0]
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        chain.push(normalized(p1));
        loop {
            let k = chain.len();
            if chain[k - 1].len() == 1 {
                break;
            }
            let rem = remainder(&chain[k - 2], &chain[k - 1]);
            if rem.is_empty() {
                break;
            }
            chain.push(normalized(rem.into_iter().map(|c| -c).collect()));
        }
        Ok(Self { chain })
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Number of sign changes of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for poly in &self.chain {
            let v = poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
            if v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: f64, hi: f64) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    fn eval_base(&self, x: f64) -> f64 {
        self.chain[0].iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn normalized(mut p: Vec<f64>) -> Vec<f64> {
    let scale = p.iter().map(|c| c.abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        p.iter_mut().for_each(|c| *c /= scale);
    }
    while p.len() > 1 && p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

/// Remainder of `a / b`; coefficients that cancel to rounding level are
/// zeroed. Returns an empty vector for a zero remainder.
fn remainder(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    let scale = a.iter().map(|c| c.abs()).fold(0.0, f64::max);
    while r.len() > db {
        let k = r.len() - 1;
        let factor = r[k] / lead;
        for i in 0..=db {
            r[k - db + i] -= factor * b[i];
        }
        r.pop();
    }
    let cutoff = 1e-11 * scale.max(1.0);
    for c in r.iter_mut() {
        if c.abs() <= cutoff {
            *c = 0.0;
        }
    }
    while r.last() == Some(&0.0) {
        r.pop();
    }
    r
}

/// Counts the distinct real roots of `p` in `(lo, hi]` and isolates each one
/// to an interval narrower than [`ISOLATION_WIDTH`] (relative to magnitude).
pub fn sturm_count(p: &ComplexPoly, lo: f64, hi: f64) -> Result<SturmResult> {
    sturm_count_with(p, lo, hi, ISOLATION_WIDTH)
}

pub fn sturm_count_with(
    p: &ComplexPoly,
    lo: f64,
    hi: f64,
    isolation_width: f64,
) -> Result<SturmResult> {
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("empty interval ({lo}, {hi}]")));
    }
    let seq = SturmSequence::new(p)?;
    let nudge = |x: f64| {
        if seq.eval_base(x) == 0.0 {
            x + 1e-12 * (1.0 + x.abs())
        } else {
            x
        }
    };
    let (lo, hi) = (nudge(lo), nudge(hi));
    let count = seq.count(lo, hi);

    let mut intervals = Vec::with_capacity(count);
    let mut stack = vec![(lo, hi, count, 0usize)];
    while let Some((a, b, n, depth)) = stack.pop() {
        if n == 0 {
            continue;
        }
        let width_ok = b - a < isolation_width * (1.0 + a.abs().max(b.abs()));
        if n == 1 && (width_ok || depth > 400) {
            intervals.push((a, b));
            continue;
        }
        if depth > 400 {
            // Clustered roots closer than f64 resolution.
            intervals.push((a, b));
            continue;
        }
        let mid = nudge(0.5 * (a + b));
        let left = seq.count(a, mid);
        stack.push((mid, b, n.saturating_sub(left), depth + 1));
        stack.push((a, mid, left, depth + 1));
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(SturmResult {
        count,
        isolating_intervals: intervals,
    })
}

/// Bisection on a sign change of a real polynomial.
pub fn bisect_real_root(p: &ComplexPoly, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = p.eval_real(lo);
    let fhi = p.eval_real(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::InvalidInput(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval_real(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
