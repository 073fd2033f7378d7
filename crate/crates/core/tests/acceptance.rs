//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wavespec::asymptotics::{spatial_eigenvalues, Side};
use wavespec::model::ModelParams;
use wavespec::polynomial::sturm_count;
use wavespec::spectrum::{
    abs_plus_analytic, admissible_weight_window, beta_crit, branch_points, classify, f_beta, ideal_weights,
    onset_beta, verify_beta_crit, in_abs_by_rank,
};

type Check = std::result::Result<String, String>;

fn p(beta: f64, c: f64, m: f64, eps: f64) -> ModelParams {
    ModelParams::new(beta, c, m, eps).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget_s: f64) -> std::result::Result<(), String> {
    ensure(elapsed.as_secs_f64() < budget_s, || {
        format!("runtime {:.2}s exceeds {budget_s}s", elapsed.as_secs_f64())
    })
}

fn c1_beta_crit() -> Check {
    let t = Instant::now();
    let b = beta_crit(0.0).map_err(|e| e.to_string())?;
    ensure((b - 1.6195).abs() <= 5e-4, || format!("beta_crit = {b}"))?;
    let s = sturm_count(&f_beta(), 1.0, 1e6).map_err(|e| e.to_string())?;
    ensure(s.count == 1, || format!("Sturm count {}", s.count))?;
    within_budget(t.elapsed(), 1.0)?;
    Ok(format!("beta_crit = {b:.10}, one root on (1, 1e6)"))
}

fn c2_branch_points_at_criticality() -> Check {
    let t = Instant::now();
    let b = beta_crit(0.0).map_err(|e| e.to_string())?;
    let bps = branch_points(&p(b, 1.0, 0.0, 0.0)).map_err(|e| e.to_string())?;
    let abs: Vec<Complex64> = bps.absolute().map(|x| x.lambda_br).collect();
    ensure(abs.len() == 2, || format!("{} absolute branch points", abs.len()))?;
    for target in [Complex64::new(0.0, 1.0883), Complex64::new(0.0, -1.0883)] {
        let d = abs.iter().map(|l| (l - target).norm()).fold(f64::INFINITY, f64::min);
        ensure(d <= 2e-3, || format!("no branch point within 2e-3 of {target}: {abs:?}"))?;
    }
    let check = verify_beta_crit(b, 1.0, 0.0).map_err(|e| e.to_string())?;
    ensure(check.min_residual() < 1e-6, || format!("residual {:e}", check.min_residual()))?;
    within_budget(t.elapsed(), 1.0)?;
    Ok(format!("lambda_br = {:.6}, residual {:.1e}", abs[0], check.min_residual()))
}

fn c3_ideal_weights() -> Check {
    let t = Instant::now();
    let cases = [
        ((2.0, 2.0, 0.0, 0.0), -0.73, 1e-2),
        ((1.3, 2.0, 0.0, 0.0), -2.445, 1e-2),
        ((2.0, 2.0, 0.1, 0.0), -0.778, 1e-2),
        ((2.0, 2.0, 0.7, 0.0), -0.959, 1e-2),
        ((2.0, 2.0, 1.0, 0.0), -1.0, 1e-10),
        ((1.3, 2.0, 0.0, 0.02), -2.447, 1e-2),
    ];
    let mut got = Vec::new();
    for ((beta, c, m, eps), target, tol) in cases {
        let w = ideal_weights(&p(beta, c, m, eps)).map_err(|e| e.to_string())?;
        ensure((w.nu_minus_star - target).abs() <= tol, || {
            format!("({beta},{c},{m},{eps}): nu_minus* = {} vs {target}", w.nu_minus_star)
        })?;
        ensure(w.nu_plus_star == c / 2.0, || format!("nu_plus* = {}", w.nu_plus_star))?;
        got.push(format!("{:.4}", w.nu_minus_star));
    }
    within_budget(t.elapsed(), 10.0)?;
    Ok(format!("nu_minus* = [{}]", got.join(", ")))
}

fn c4_m_scaling() -> Check {
    let t = Instant::now();
    let b0 = beta_crit(0.0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for m in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let expected = b0 * (1.0 - m);
        let onset = onset_beta(1.0, m, (expected - 0.1 * (1.0 - m), expected + 0.1 * (1.0 - m)), 1e-9)
            .map_err(|e| format!("m = {m}: {e}"))?;
        worst = worst.max((onset - expected).abs());
        ensure((onset - expected).abs() <= 1e-3, || format!("m = {m}: onset {onset} vs {expected}"))?;
    }
    within_budget(t.elapsed(), 30.0)?;
    Ok(format!("max |onset - beta_crit (1-m)| = {worst:.1e}"))
}

fn c5_off_axis() -> Check {
    let t = Instant::now();
    let mut min_im = f64::INFINITY;
    for m in [0.0, 0.5] {
        let b = beta_crit(m).map_err(|e| e.to_string())?;
        let bps = branch_points(&p(b, 1.0, m, 0.0)).map_err(|e| e.to_string())?;
        for x in bps.absolute() {
            min_im = min_im.min(x.lambda_br.im.abs());
            ensure(x.lambda_br.im.abs() >= 0.5, || format!("m = {m}: lambda_br = {}", x.lambda_br))?;
        }
        let lo = 1.0 - m;
        for i in 1..=40 {
            let beta = lo + (2.0 - lo) * i as f64 / 40.0;
            let bps = branch_points(&p(beta, 1.0, m, 0.0)).map_err(|e| format!("beta = {beta}: {e}"))?;
            for x in bps.absolute() {
                let l = x.lambda_br;
                ensure(!(l.re > 0.0 && l.im.abs() < 1e-6), || format!("real unstable branch point {l} at beta = {beta}"))?;
            }
        }
    }
    within_budget(t.elapsed(), 30.0)?;
    Ok(format!("min |Im lambda_br| at criticality = {min_im:.4}"))
}

fn c6_abs_plus_oracle() -> Check {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let mut disagreements = Vec::new();
    let mut on_set = 0;
    let n = 1000;
    for i in 0..n {
        let prm = if i % 2 == 0 { p(2.0, 2.0, 0.0, 0.0) } else { p(1.3, 1.0, 0.0, 0.0) };
        let c2 = prm.c * prm.c;
        let a = abs_plus_analytic(&prm);
        let (s0, s1) = a.segment;
        let z = match i % 3 {
            0 => Complex64::new(s0 + (s1 - s0) * rng.gen_range(0.01..0.99), 0.0),
            1 => {
                let w = a.wing(s0 - c2 * rng.gen_range(0.01..4.0));
                if rng.gen_bool(0.5) { w } else { w.conj() }
            }
            _ => loop {
                let z = Complex64::new(rng.gen_range(-3.0..1.0) * c2, rng.gen_range(-3.0..3.0) * c2);
                if a.distance(z) > 1e-6 {
                    break z;
                }
            },
        };
        let analytic = a.contains(z, 1e-8);
        on_set += analytic as usize;
        let rank = in_abs_by_rank(&prm, Side::PlusInfinity, z, 1e-8).map_err(|e| e.to_string())?;
        if rank != analytic {
            disagreements.push(z);
        }
    }
    ensure(disagreements.is_empty(), || {
        format!("{} disagreements, first {:?}", disagreements.len(), &disagreements[..disagreements.len().min(3)])
    })?;
    within_budget(t.elapsed(), 5.0)?;
    Ok(format!("{n} samples ({on_set} on the set), 0 disagreements"))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn c7_scaling() -> Check {
    let t = Instant::now();
    let c = 3.0;
    let r3 = classify(&p(1.3, c, 0.0, 0.0)).map_err(|e| e.to_string())?;
    let r1 = classify(&p(1.3, 1.0, 0.0, 0.0)).map_err(|e| e.to_string())?;
    ensure(r3.verdict == r1.verdict, || format!("verdicts {:?} vs {:?}", r3.verdict, r1.verdict))?;
    ensure(r3.beta_crit_effective == r1.beta_crit_effective, || "beta_crit differs".into())?;
    ensure(r3.branch_points.len() == r1.branch_points.len(), || "branch point counts differ".into())?;
    let mut worst: f64 = 0.0;
    for (a, b) in r3.branch_points.iter().zip(&r1.branch_points) {
        ensure(a.in_absolute == b.in_absolute, || "membership differs".into())?;
        let scaled = a.lambda_br / (c * c);
        let d = (scaled - b.lambda_br).norm() / b.lambda_br.norm();
        let dm = (a.double_root_mu / c - b.double_root_mu).norm() / b.double_root_mu.norm();
        worst = worst.max(d).max(dm);
    }
    let (w3, w1) = (&r3.weights, &r1.weights);
    ensure(w3.empty == w1.empty, || "window emptiness differs".into())?;
    worst = worst
        .max(rel(w3.nu_minus_star / c, w1.nu_minus_star))
        .max(rel(w3.nu_plus_star / c, w1.nu_plus_star));
    for (a, b) in [(w3.nu_min, w1.nu_min), (w3.nu_max, w1.nu_max)] {
        match (a, b) {
            (Some(a), Some(b)) => worst = worst.max(rel(a / c, b)),
            (None, None) => {}
            _ => return Err("window endpoints differ in presence".into()),
        }
    }
    ensure(worst <= 1e-8, || format!("worst relative deviation {worst:e}"))?;
    within_budget(t.elapsed(), 10.0)?;
    Ok(format!("worst relative deviation {worst:.1e}"))
}

fn c8_eps_continuity() -> Check {
    let t = Instant::now();
    let lead = |eps: f64| -> std::result::Result<Complex64, String> {
        let bps = branch_points(&p(1.3, 2.0, 0.0, eps)).map_err(|e| e.to_string())?;
        let upper = bps.absolute().map(|b| b.lambda_br).find(|l| l.im > 0.0);
        upper.ok_or_else(|| format!("no upper absolute branch point at eps = {eps}"))
    };
    let l0 = lead(0.0)?;
    let ls: Vec<Complex64> = [0.02, 0.01, 0.005].iter().map(|&e| lead(e)).collect::<Result<_, _>>()?;
    let order = ((ls[0] - ls[1]).norm() / (ls[1] - ls[2]).norm()).log2();
    ensure(order >= 0.9, || format!("observed order {order}"))?;
    let errs: Vec<f64> = ls.iter().map(|l| (l - l0).norm()).collect();
    ensure(errs[0] > errs[1] && errs[1] > errs[2], || format!("errors not decreasing: {errs:?}"))?;
    for eps in [0.02, 0.01, 0.005] {
        let prm = p(1.3, 2.0, 0.0, eps);
        let r = spatial_eigenvalues(&prm, Side::MinusInfinity, Complex64::new(1.0, 0.0), 0.0).map_err(|e| e.to_string())?;
        ensure(r.mu.len() == 4, || format!("{} spatial eigenvalues", r.mu.len()))?;
        let target = -prm.c / eps;
        let far = r.mu.iter().copied().min_by(|a, b| a.re.total_cmp(&b.re)).unwrap();
        ensure((far - target).norm() <= 0.1 * target.abs(), || format!("eps = {eps}: mu_4 = {far} vs {target}"))?;
    }
    within_budget(t.elapsed(), 10.0)?;
    Ok(format!("observed order {order:.3}, errors {:.3e} {:.3e} {:.3e}", errs[0], errs[1], errs[2]))
}

fn c9_window_collapse() -> Check {
    let t = Instant::now();
    let b = beta_crit(0.0).map_err(|e| e.to_string())?;
    let below = admissible_weight_window(&p(b - 1e-3, 1.0, 0.0, 0.0), None, None).map_err(|e| e.to_string())?;
    let width = below.width().ok_or("window empty below criticality")?;
    ensure(width < 0.05, || format!("width {width}"))?;
    let above = admissible_weight_window(&p(b + 1e-3, 1.0, 0.0, 0.0), None, None).map_err(|e| e.to_string())?;
    ensure(above.empty, || format!("window not empty above criticality: {above:?}"))?;
    within_budget(t.elapsed(), 60.0)?;
    Ok(format!("width {width:.4} below, empty above"))
}

fn c10_figures() -> Check {
    let t = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let figures: [(&str, [&str; 8], bool, bool); 5] = [
        ("fig2", ["--beta", "2", "--c", "2", "--m", "0", "--weights", "0,0"], false, false),
        ("fig4", ["--beta", "2", "--c", "2", "--m", "0", "--weights", "ideal"], true, false),
        ("fig6", ["--beta", "1.3", "--c", "2", "--m", "0", "--weights", "ideal"], true, true),
        ("fig8", ["--beta", "2", "--c", "2", "--m", "1", "--weights", "ideal"], true, false),
        ("fig10", ["--beta", "1.3", "--c", "2", "--eps", "0.02", "--weights", "ideal"], true, true),
    ];
    let mut worst_tip: f64 = 0.0;
    for (name, args, cusps, left_half) in figures {
        let out = dir.path().join(name);
        let mut full = vec!["spectrum"];
        full.extend(args);
        full.extend(["--out-dir", out.to_str().unwrap()]);
        let run = common::wavespec(&full);
        ensure(run.status.code() == Some(0), || {
            format!("{name}: exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr))
        })?;
        let svg = std::fs::read_to_string(out.join("spectrum.svg")).map_err(|e| e.to_string())?;
        let (layers, legend) = common::layers_and_legend(&svg);
        ensure(layers == legend, || format!("{name}: layers {layers:?} vs legend {legend:?}"))?;
        if cusps {
            let tips = common::markers(common::layer(&svg, "branch-points").ok_or("no branch-point layer")?);
            let curves = common::polylines(common::layer(&svg, "dispersion-minus").ok_or("no dispersion layer")?);
            ensure(!tips.is_empty(), || format!("{name}: no branch points drawn"))?;
            for tip in tips {
                let d = curves
                    .iter()
                    .map(|l| common::distance_to_polyline(tip, l))
                    .fold(f64::INFINITY, f64::min);
                worst_tip = worst_tip.max(d);
                ensure(d <= 1e-3, || format!("{name}: branch point {tip:?} is {d:e} from the weighted curves"))?;
            }
        }
        if left_half {
            let rows = common::grid_rows(&out.join("grid.csv"));
            let bad = rows.iter().filter(|(re, _, r)| *re > 0.0 && r == "InEssential").count();
            ensure(bad == 0, || format!("{name}: {bad} essential cells with Re > 0"))?;
        }
    }
    within_budget(t.elapsed(), 180.0)?;
    Ok(format!("5 figures, worst cusp-tip distance {worst_tip:.1e} c^2"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 beta_crit reproduction", c1_beta_crit),
        ("2 branch points at criticality", c2_branch_points_at_criticality),
        ("3 ideal-weight golden values", c3_ideal_weights),
        ("4 m-scaling law", c4_m_scaling),
        ("5 off-axis crossing", c5_off_axis),
        ("6 sigma_abs+ oracle equivalence", c6_abs_plus_oracle),
        ("7 scaling invariance", c7_scaling),
        ("8 eps-continuity", c8_eps_continuity),
        ("9 weight-window collapse", c9_window_collapse),
        ("10 figure regeneration", c10_figures),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2}s]", t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{:.2}s]", t.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
