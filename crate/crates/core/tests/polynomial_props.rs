use num_complex::Complex64;
use proptest::prelude::*;
use wavespec::polynomial::*;

fn real_poly(coeffs: Vec<f64>) -> ComplexPoly {
    ComplexPoly::from_real(&coeffs).unwrap()
}

fn nearest_match(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let j = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()))
            .unwrap();
        used[j] = true;
        worst = worst.max((b[j] - x).norm());
    }
    worst
}

fn coeff_strategy(deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    deg.prop_flat_map(|d| {
        (
            prop::collection::vec(-10.0..10.0f64, d),
            prop_oneof![-5.0..-0.5f64, 0.5..5.0f64],
        )
            .prop_map(|(mut v, lead)| {
                v.push(lead);
                v
            })
    })
}

proptest! {
    #[test]
    fn vieta(coeffs in coeff_strategy(1..=10)) {
        let p = real_poly(coeffs.clone());
        let rs = roots_general(&p).unwrap();
        let n = p.degree();
        prop_assert_eq!(rs.roots.len(), n);
        let lead = coeffs[n];
        let sum: Complex64 = rs.roots.iter().sum();
        let want_sum = -coeffs[n - 1] / lead;
        let scale_sum = 1.0 + rs.roots.iter().map(|r| r.norm()).sum::<f64>();
        prop_assert!((sum - want_sum).norm() < 1e-8 * scale_sum);
        let prod: Complex64 = rs.roots.iter().product();
        let want_prod = if n % 2 == 0 { 1.0 } else { -1.0 } * coeffs[0] / lead;
        let scale_prod = 1.0 + rs.roots.iter().map(|r| r.norm()).product::<f64>();
        prop_assert!((prod - want_prod).norm() < 1e-8 * scale_prod);
    }

    #[test]
    fn cubic_agrees_with_general(re in prop::collection::vec(-5.0..5.0f64, 4), im in prop::collection::vec(-5.0..5.0f64, 4)) {
        let coeffs: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        prop_assume!(coeffs[3].norm() > 0.5);
        let p = ComplexPoly::new(coeffs).unwrap();
        let a = roots_cubic(&p).unwrap();
        // The general solver dispatches cubics to the closed form, so compare
        // against a quartic with an extra known root instead.
        let extra = Complex64::new(7.5, -3.25);
        let mut q: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); 5];
        for (i, &c) in p.coeffs().iter().enumerate() {
            q[i + 1] += c;
            q[i] -= c * extra;
        }
        let b = roots_general(&ComplexPoly::new(q).unwrap()).unwrap();
        let mut rest = b.roots.clone();
        let idx = (0..4).min_by(|&i, &j| (rest[i] - extra).norm().total_cmp(&(rest[j] - extra).norm())).unwrap();
        rest.remove(idx);
        let scale = 1.0 + a.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        prop_assert!(nearest_match(&a.roots, &rest) < 1e-9 * scale);
    }

    #[test]
    fn sturm_matches_roots(coeffs in coeff_strategy(1..=10), lo in -20.0..0.0f64, width in 0.1..40.0f64) {
        let p = real_poly(coeffs);
        let hi = lo + width;
        let s = sturm_count(&p, lo, hi).unwrap();
        let rs = roots_general(&p).unwrap();
        let mut real: Vec<f64> = rs.roots.iter().filter(|r| r.im.abs() < 1e-9).map(|r| r.re).collect();
        real.sort_by(f64::total_cmp);
        real.dedup_by(|a, b| (*a - *b).abs() < 1e-6 * (1.0 + a.abs()));
        // Skip draws with a root within rounding distance of an endpoint.
        prop_assume!(real.iter().all(|r| (r - lo).abs() > 1e-6 && (r - hi).abs() > 1e-6));
        let want = real.iter().filter(|&&r| r > lo && r <= hi).count();
        prop_assert_eq!(s.count, want);
        prop_assert_eq!(s.isolating_intervals.len(), want);
    }

    #[test]
    fn conjugate_closure(coeffs in coeff_strategy(2..=10)) {
        let p = real_poly(coeffs);
        let rs = roots_general(&p).unwrap();
        let conj: Vec<Complex64> = rs.roots.iter().map(|r| r.conj()).collect();
        let scale = 1.0 + rs.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        prop_assert!(nearest_match(&rs.roots, &conj) < 1e-9 * scale);
    }
}

#[test]
fn special_polynomials() {
    let f = real_poly(
        [310.0, -3234.0, 17112.0, -49101.0, 76180.0, -58398.0, 10056.0, 15040.0, -9680.0, 1716.0, -4.0]
            .into_iter()
            .rev()
            .collect(),
    );
    // Coefficient sum.
    assert!((f.eval(Complex64::new(1.0, 0.0)) - Complex64::new(-3.0, 0.0)).norm() < 1e-9);
    let delta = real_poly(vec![0.0, 16.0, 320.0, -1360.0, 2025.0, -1324.0, 324.0]);
    assert!((delta.eval_real(2.0) - 1200.0).abs() < 1e-9);
    assert_eq!(sturm_count(&f, 1.0, 1e6).unwrap().count, 1);
    assert_eq!(sturm_count(&delta, 1.0, 1e6).unwrap().count, 0);
    let rs = roots_general(&f).unwrap();
    let above: Vec<f64> = rs.roots.iter().filter(|r| r.im.abs() < 1e-9 && r.re > 1.0 + 1e-9).map(|r| r.re).collect();
    assert_eq!(above.len(), 1);
    assert!((above[0] - 1.6195).abs() < 5e-4);
}

#[test]
fn cubic_vieta_check_on_characteristic_polynomial() {
    // Monic minus-side cubic at beta = c = 2, lambda = -1: product of roots is -lambda^2/c.
    let (beta, c, l) = (2.0f64, 2.0f64, -1.0f64);
    let p = real_poly(vec![
        l * l / c,
        (2.0 - beta) * l / (beta - 1.0) + beta * c * c / ((beta - 1.0) * (beta - 1.0)),
        -((beta + 1.0) * c / (beta - 1.0) + l / c),
        1.0,
    ]);
    let rs = roots_cubic(&p).unwrap();
    let prod: Complex64 = rs.roots.iter().product();
    assert!((prod + l * l / c).norm() < 1e-12);
    assert!(discriminant_cubic(&p).unwrap().norm() > 1e-3);
}
