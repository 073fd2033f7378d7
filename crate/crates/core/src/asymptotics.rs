//! Characteristic polynomials of the asymptotic matrices at both ends of the
//! wave, and the spatial eigenvalues they produce.
//!
//! Every characteristic polynomial here has the form
//! `P(mu, lambda) = sum a[i][j] mu^i lambda^j` with real coefficients,
//! degree at most 4 in `mu` and exactly 2 in `lambda`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::polynomial::{roots_cubic, roots_general, ComplexPoly};

/// Smallest admissible `beta + m - 1` before the minus-side coefficients are
/// considered singular.
pub const B1_TOL: f64 = 1e-12;
/// Dead zone for Morse indices: `|Re mu| < HYPERBOLIC_TOL * (1 + |mu|)`.
pub const HYPERBOLIC_TOL: f64 = 1e-9;
/// Rank pivot: the absolute spectrum compares ranks `PIVOT - 1` and `PIVOT`
/// (zero-based), i.e. the second and third eigenvalues.
pub const PIVOT: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    PlusInfinity,
    MinusInfinity,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::MinusInfinity, Side::PlusInfinity];

    pub fn label(&self) -> &'static str {
        match self {
            Side::PlusInfinity => "plus",
            Side::MinusInfinity => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharPolyCase {
    CubicEps0,
    QuarticEps,
}

impl CharPolyCase {
    pub fn of(params: &ModelParams) -> Self {
        if params.eps == 0.0 {
            CharPolyCase::CubicEps0
        } else {
            CharPolyCase::QuarticEps
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            CharPolyCase::CubicEps0 => 3,
            CharPolyCase::QuarticEps => 4,
        }
    }
}

/// Bivariate coefficient table of `P(mu, lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharTable {
    /// `a[i][j]` multiplies `mu^i lambda^j`.
    pub a: [[f64; 3]; 5],
    pub side: Side,
    pub degree: usize,
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl CharTable {
    pub fn new(params: &ModelParams, side: Side) -> Result<Self> {
        let ModelParams { beta, c, m, eps } = *params;
        let mut a = [[0.0; 3]; 5];
        match side {
            Side::PlusInfinity => {
                // (eps mu^2 + c mu - lambda)(mu^2 + c mu - lambda)
                a[4][0] = eps;
                a[3][0] = c * (1.0 + eps);
                a[2][0] = c * c;
                a[2][1] = -(1.0 + eps);
                a[1][1] = -2.0 * c;
                a[0][2] = 1.0;
            }
            Side::MinusInfinity => {
                let b1 = beta + m - 1.0;
                if b1 <= B1_TOL {
                    return Err(Error::InvalidParams {
                        field: "beta",
                        constraint: "beta+m must exceed 1",
                    });
                }
                let (c2, c3, c4) = (c * c, c * c * c, c * c * c * c);
                a[4][0] = eps;
                a[3][0] = c - eps * c * (m + 1.0) / b1;
                a[2][0] = -c2 * (beta + 2.0 * m + 1.0) / b1 - eps * beta * c2 / (b1 * b1);
                a[2][1] = -(1.0 + eps);
                a[1][0] = c3 * (beta + m * (beta + m + 2.0)) / (b1 * b1)
                    + eps * c3 * (m + 1.0) * (beta + m) / b1.powi(3);
                a[1][1] = -(beta - 2.0) * c / b1;
                a[0][0] = -c4 * m * (beta + m) / b1.powi(3) - eps * c4 * m * (beta + m) / b1.powi(4);
                a[0][1] = c2 * m * (beta + m - 2.0) / (b1 * b1) + eps * c2 * m / (b1 * b1);
                a[0][2] = 1.0;
            }
        }
        Ok(Self {
            a,
            side,
            degree: CharPolyCase::of(params).degree(),
        })
    }

    /// Coefficient of `mu^i` at the given `lambda`.
    pub fn mu_coeff(&self, i: usize, lambda: Complex64) -> Complex64 {
        let [a0, a1, a2] = self.a[i];
        cx(a0) + lambda * (cx(a1) + lambda * a2)
    }

    /// The polynomial in `mu` at fixed `lambda`, not normalised.
    pub fn at_lambda_raw(&self, lambda: Complex64) -> Result<ComplexPoly> {
        ComplexPoly::new((0..=self.degree).map(|i| self.mu_coeff(i, lambda)).collect())
    }

    /// Coefficients `[C, B, A]` of `A lambda^2 + B lambda + C` at fixed `mu`.
    pub fn lambda_coeffs(&self, mu: Complex64) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = (0..=self.degree)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, i| acc * mu + self.a[i][j]);
        }
        out
    }

    /// `d^p/dmu^p d^q/dlambda^q P` at `(mu, lambda)`.
    pub fn partial(&self, p: usize, q: usize, mu: Complex64, lambda: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for i in p..=self.degree {
            for j in q..3 {
                let a = self.a[i][j];
                if a == 0.0 {
                    continue;
                }
                let fi: f64 = ((i - p + 1)..=i).map(|v| v as f64).product();
                let fj: f64 = ((j - q + 1)..=j).map(|v| v as f64).product();
                total += mu.powu((i - p) as u32) * lambda.powu((j - q) as u32) * (a * fi * fj);
            }
        }
        total
    }

    pub fn eval(&self, mu: Complex64, lambda: Complex64) -> Complex64 {
        self.partial(0, 0, mu, lambda)
    }

    /// Scale for residual tests: sum of `|a_ij| |mu|^i |lambda|^j`.
    pub fn magnitude(&self, mu: Complex64, lambda: Complex64) -> f64 {
        let mut total = 0.0;
        for i in 0..=self.degree {
            for j in 0..3 {
                total += self.a[i][j].abs() * mu.norm().powi(i as i32) * lambda.norm().powi(j as i32);
            }
        }
        total
    }
}

/// Monic characteristic polynomial in `mu` of the asymptotic matrix on `side`.
pub fn charpoly(params: &ModelParams, side: Side, lambda: Complex64) -> Result<ComplexPoly> {
    let table = CharTable::new(params, side)?;
    Ok(table.at_lambda_raw(lambda)?.monic())
}

/// Minus-side cubic for `m = 0, eps = 0` written directly in monic form:
/// `mu^3 - mu^2((b+1)c/(b-1) + l/c) + mu((2-b)l/(b-1) + b c^2/(b-1)^2) + l^2/c`.
pub fn charpoly_minus_m0(beta: f64, c: f64, lambda: Complex64) -> Result<ComplexPoly> {
    if beta - 1.0 <= B1_TOL {
        return Err(Error::InvalidParams {
            field: "beta",
            constraint: "beta+m must exceed 1",
        });
    }
    let b1 = beta - 1.0;
    ComplexPoly::new(vec![
        lambda * lambda / c,
        lambda * ((2.0 - beta) / b1) + beta * c * c / (b1 * b1),
        -(cx((beta + 1.0) * c / b1) + lambda / c),
        cx(1.0),
    ])
}

/// Spatial eigenvalues of `M(lambda) + nu I`, ranked.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedEigenvalues {
    /// Sorted by descending real part, ties by descending imaginary part.
    pub mu: Vec<Complex64>,
    pub morse_index: usize,
    /// `Re mu[PIVOT-1] - Re mu[PIVOT]`.
    pub rank_gap: f64,
    pub near_nonhyperbolic: bool,
}

impl RankedEigenvalues {
    pub fn from_unsorted(mut mu: Vec<Complex64>) -> Self {
        sort_ranked(&mut mu);
        let near_nonhyperbolic = mu.iter().any(|z| is_near_imaginary(*z));
        let morse_index = mu
            .iter()
            .filter(|z| z.re > 0.0 && !is_near_imaginary(**z))
            .count();
        let rank_gap = if mu.len() > PIVOT {
            mu[PIVOT - 1].re - mu[PIVOT].re
        } else {
            f64::NAN
        };
        Self {
            mu,
            morse_index,
            rank_gap,
            near_nonhyperbolic,
        }
    }
}

pub fn sort_ranked(mu: &mut [Complex64]) {
    mu.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

fn is_near_imaginary(z: Complex64) -> bool {
    z.re.abs() < HYPERBOLIC_TOL * (1.0 + z.norm())
}

/// Unshifted roots of the characteristic polynomial.
pub fn spatial_roots(params: &ModelParams, side: Side, lambda: Complex64) -> Result<Vec<Complex64>> {
    if side == Side::PlusInfinity && params.eps == 0.0 {
        return Ok(plus_closed_form(params.c, lambda).to_vec());
    }
    spatial_roots_generic(params, side, lambda)
}

/// Roots through the generic polynomial solver, no closed forms.
pub fn spatial_roots_generic(
    params: &ModelParams,
    side: Side,
    lambda: Complex64,
) -> Result<Vec<Complex64>> {
    let p = charpoly(params, side, lambda)?;
    let rs = if p.degree() == 3 {
        roots_cubic(&p)?
    } else {
        roots_general(&p)?
    };
    Ok(rs.roots)
}

/// `lambda/c` and `(-c +- sqrt(c^2 + 4 lambda))/2`.
pub fn plus_closed_form(c: f64, lambda: Complex64) -> [Complex64; 3] {
    let s = (lambda * 4.0 + c * c).sqrt();
    [lambda / c, (s - c) / 2.0, (-s - c) / 2.0]
}

pub fn spatial_eigenvalues(
    params: &ModelParams,
    side: Side,
    lambda: Complex64,
    nu: f64,
) -> Result<RankedEigenvalues> {
    let roots = spatial_roots(params, side, lambda)?;
    Ok(RankedEigenvalues::from_unsorted(
        roots.into_iter().map(|z| z + nu).collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorseIndex {
    pub index: usize,
    pub near_nonhyperbolic: bool,
}

pub fn morse_index(params: &ModelParams, side: Side, lambda: Complex64, nu: f64) -> Result<MorseIndex> {
    let r = spatial_eigenvalues(params, side, lambda, nu)?;
    Ok(MorseIndex {
        index: r.morse_index,
        near_nonhyperbolic: r.near_nonhyperbolic,
    })
}

/// All `lambda` with `P(ik - nu, lambda) = 0`.
pub fn dispersion_lambda(params: &ModelParams, side: Side, k: f64, nu: f64) -> Result<Vec<Complex64>> {
    let table = CharTable::new(params, side)?;
    dispersion_lambda_table(&table, k, nu)
}

pub fn dispersion_lambda_table(table: &CharTable, k: f64, nu: f64) -> Result<Vec<Complex64>> {
    let mu = Complex64::new(-nu, k);
    let [c0, b, a] = table.lambda_coeffs(mu);
    let scale = c0.norm().max(b.norm()).max(1.0);
    if a.norm() <= 1e-14 * scale {
        let reduced = (b.norm() > 0.0).then(|| -c0 / b);
        return Err(Error::DegenerateLeadingCoefficient { reduced });
    }
    Ok(solve_quadratic(a, b, c0).to_vec())
}

/// Roots of `a x^2 + b x + c` avoiding cancellation.
pub fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let d = (b * b - a * c * 4.0).sqrt();
    let q = if (b.conj() * d).re >= 0.0 {
        -(b + d) / 2.0
    } else {
        -(b - d) / 2.0
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Right-half-plane sample where both Morse indices must be two.
pub fn well_posedness_lambda(params: &ModelParams) -> f64 {
    let r = 1.0 + 1.0 / params.b1();
    10.0 * params.c * params.c * r * r
}

/// Checks that both sides have Morse index two far to the right.
pub fn check_well_posed(params: &ModelParams) -> Result<()> {
    let lambda = cx(well_posedness_lambda(params));
    let plus = morse_index(params, Side::PlusInfinity, lambda, 0.0)?.index;
    let minus = morse_index(params, Side::MinusInfinity, lambda, 0.0)?.index;
    if plus == PIVOT && minus == PIVOT {
        Ok(())
    } else {
        Err(Error::NotWellPosed { plus, minus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(beta: f64, c: f64, m: f64, eps: f64) -> ModelParams {
        ModelParams::new(beta, c, m, eps).unwrap()
    }

    fn cxy(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        sort_ranked(&mut v);
        v
    }

    fn close_sets(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; b.len()];
        a.iter().all(|x| {
            let best = (0..b.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()));
            match best {
                Some(j) if (b[j] - x).norm() < tol => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn plus_side_at_zero() {
        let r = sorted(spatial_roots_generic(&p(2.0, 2.0, 0.0, 0.0), Side::PlusInfinity, cx(0.0)).unwrap());
        assert!(close_sets(&r, &[cx(0.0), cx(0.0), cx(-2.0)], 1e-12));
    }

    #[test]
    fn minus_side_m1_at_zero() {
        let r = spatial_roots(&p(2.0, 2.0, 1.0, 0.0), Side::MinusInfinity, cx(0.0)).unwrap();
        assert!(close_sets(&r, &[cx(3.0), cx(1.0), cx(1.0)], 1e-10), "{r:?}");
    }

    #[test]
    fn singular_eigenvalue_plus() {
        let r = sorted(spatial_roots(&p(2.0, 2.0, 0.0, 0.01), Side::PlusInfinity, cx(1.0)).unwrap());
        // -c/eps - lambda/c + lambda^2 eps / c^3
        assert!((r[3].re - (-200.5 + 0.01 / 8.0)).abs() < 1e-3, "{}", r[3]);
    }

    #[test]
    fn m0_cubic_matches_general_form() {
        for &(beta, c) in &[(2.0, 2.0), (1.3, 1.0), (3.5, 0.7)] {
            for &l in &[cx(0.0), cxy(-1.0, 0.5), cxy(2.0, -3.0)] {
                let a = charpoly(&p(beta, c, 0.0, 0.0), Side::MinusInfinity, l).unwrap();
                let b = charpoly_minus_m0(beta, c, l).unwrap();
                for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                    assert!((x - y).norm() < 1e-12 * (1.0 + y.norm()));
                }
            }
        }
    }

    #[test]
    fn ranked_examples() {
        let prm = p(2.0, 2.0, 0.0, 0.0);
        let r = spatial_eigenvalues(&prm, Side::PlusInfinity, cx(0.0), 0.0).unwrap();
        assert_eq!(r.morse_index, 0);
        assert!(r.near_nonhyperbolic);
        let r = spatial_eigenvalues(&prm, Side::PlusInfinity, cx(10.0), 0.0).unwrap();
        let s44 = 44f64.sqrt();
        assert!(close_sets(&r.mu, &[cx(5.0), cx((-2.0 + s44) / 2.0), cx((-2.0 - s44) / 2.0)], 1e-12));
        assert_eq!(r.morse_index, 2);

        let r = spatial_eigenvalues(&p(2.0, 2.0, 1.0, 0.0), Side::MinusInfinity, cx(0.0), -1.0).unwrap();
        assert!((r.mu[0] - cx(2.0)).norm() < 1e-9);
        assert!(r.mu[1].norm() < 1e-6 && r.mu[2].norm() < 1e-6);
        assert!(r.rank_gap.abs() < 1e-6);
    }

    #[test]
    fn morse_examples() {
        let prm = p(2.0, 2.0, 0.0, 0.0);
        for side in Side::BOTH {
            assert_eq!(morse_index(&prm, side, cx(100.0), 0.0).unwrap().index, 2);
        }
        assert!(morse_index(&prm, Side::PlusInfinity, cxy(0.0, 2.0), 0.0).unwrap().near_nonhyperbolic);
        let prm = p(2.0, 2.0, 0.0, 0.01);
        assert_eq!(morse_index(&prm, Side::PlusInfinity, cx(100.0), 0.0).unwrap().index, 2);
    }

    #[test]
    fn dispersion_examples() {
        let prm = p(2.0, 2.0, 0.0, 0.0);
        let l = dispersion_lambda(&prm, Side::PlusInfinity, 0.0, 0.0).unwrap();
        assert!(l.iter().all(|z| z.norm() < 1e-14));
        let l = dispersion_lambda(&prm, Side::PlusInfinity, 1.0, 1.0).unwrap();
        assert!(close_sets(&l, &[cxy(-2.0, 2.0), cx(-2.0)], 1e-12));
        let l = dispersion_lambda(&prm, Side::MinusInfinity, 0.0, 0.0).unwrap();
        assert!(l.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn well_posed_everywhere() {
        for &(b, c, m, e) in &[(2.0, 2.0, 0.0, 0.0), (1.3, 1.0, 0.5, 0.0), (0.2, 3.0, 0.9, 0.02), (3.0, 1.0, 1.0, 0.0)] {
            check_well_posed(&p(b, c, m, e)).unwrap();
        }
    }

    fn params_strategy() -> impl Strategy<Value = ModelParams> {
        (0.0..1.0f64, 0.05..3.0f64, 0.2..3.0f64, prop_oneof![Just(0.0), 0.001..0.1f64]).prop_map(
            |(m, excess, c, eps)| ModelParams::new(1.0 - m + excess, c, m, eps).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn substitution_identity(prm in params_strategy(), k in -10.0..10.0f64, nu in -3.0..3.0f64) {
            for side in Side::BOTH {
                let t = CharTable::new(&prm, side).unwrap();
                let mu = cxy(-nu, k);
                for l in dispersion_lambda(&prm, side, k, nu).unwrap() {
                    let scale = t.magnitude(mu, l).max(1.0);
                    prop_assert!(t.eval(mu, l).norm() < 1e-8 * scale);
                }
            }
        }

        #[test]
        fn conjugation_symmetry(prm in params_strategy(), k in -10.0..10.0f64, nu in -3.0..3.0f64) {
            for side in Side::BOTH {
                let a = dispersion_lambda(&prm, side, k, nu).unwrap();
                let b: Vec<_> = dispersion_lambda(&prm, side, -k, nu).unwrap().iter().map(|z| z.conj()).collect();
                let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!(close_sets(&a, &b, 1e-10 * scale));
            }
        }

        #[test]
        fn scaling_invariance(prm in params_strategy(), kt in -5.0..5.0f64, nut in -2.0..2.0f64, c in 0.3..4.0f64) {
            let unit = prm.with_c(1.0);
            let scaled = prm.with_c(c);
            for side in Side::BOTH {
                let a = dispersion_lambda(&scaled, side, c * kt, c * nut).unwrap();
                let b: Vec<_> = dispersion_lambda(&unit, side, kt, nut).unwrap().iter().map(|z| z * c * c).collect();
                let scale = 1.0 + b.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!(close_sets(&a, &b, 1e-9 * scale));
            }
        }

        #[test]
        fn closed_form_matches_generic(c in 0.2..4.0f64, re in -10.0..10.0f64, im in -10.0..10.0f64) {
            let prm = ModelParams::new(2.0, c, 0.0, 0.0).unwrap();
            let l = cxy(re, im);
            let a = plus_closed_form(c, l);
            let b = spatial_roots_generic(&prm, Side::PlusInfinity, l).unwrap();
            prop_assert!(close_sets(&a, &b, 1e-10 * (1.0 + l.norm())));
        }

        #[test]
        fn m_to_zero_continuity(beta in 1.05..3.0f64, c in 0.3..3.0f64, re in -5.0..5.0f64, im in -5.0..5.0f64) {
            let l = cxy(re, im);
            let a = spatial_roots(&ModelParams::new(beta, c, 0.0, 0.0).unwrap(), Side::MinusInfinity, l).unwrap();
            let b = spatial_roots(&ModelParams::new(beta, c, 1e-8, 0.0).unwrap(), Side::MinusInfinity, l).unwrap();
            let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(close_sets(&a, &b, 1e-6 * scale));
        }

        #[test]
        fn eps_to_zero_continuity(m in 0.0..1.0f64, excess in 0.3..3.0f64, c in 1.0..3.0f64, r in 0.0..10.0f64, th in 0.0..std::f64::consts::TAU) {
            let prm = ModelParams::new(1.0 - m + excess, c, m, 0.0).unwrap();
            let l = Complex64::from_polar(r, th);
            let base = prm.with_eps(0.0);
            let pert = prm.with_eps(1e-4);
            for side in Side::BOTH {
                let a = spatial_roots(&base, side, l).unwrap();
                let mut b = spatial_roots(&pert, side, l).unwrap();
                b.sort_by(|x, y| x.re.total_cmp(&y.re));
                let singular = b.remove(0);
                prop_assert!((singular.re + prm.c / 1e-4).abs() < 0.1 * prm.c / 1e-4);
                let scale = 1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max);
                prop_assert!(close_sets(&a, &b, 1e-3 * scale));
            }
        }
    }
}
