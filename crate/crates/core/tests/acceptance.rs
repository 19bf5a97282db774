//! Acceptance criteria. Each test prints one PASS/FAIL line to stderr.

use std::io::Write;
use std::time::{Duration, Instant};

use slabwell::analytic::square_well_energy;
use slabwell::oracle::{fd_spectrum, observed_order};
use slabwell::quantify::{quantification, recurrence, Rescale};
use slabwell::spectrum::{scan, solve, EigenLevel, SolveOptions};
use slabwell::wavefun::reconstruct;
use slabwell::{parse_potential, partition, Discretization};

fn disc(potential: &str, a: f64, b: f64, n: usize) -> Discretization {
    partition(&parse_potential(potential, a, b).unwrap(), n).unwrap()
}

fn levels(potential: &str, a: f64, b: f64, n: usize, e_max: f64) -> Vec<EigenLevel> {
    let d = disc(potential, a, b, n);
    solve(&d, &SolveOptions::new(0.0, e_max).with_de(0.005).with_tol(1e-10)).unwrap()
}

fn energies(levels: &[EigenLevel]) -> Vec<f64> {
    levels.iter().map(|l| l.energy).collect()
}

/// Written straight to stderr so the line shows even when test output is captured.
fn report(id: &str, what: &str, pass: bool, detail: String) {
    let line = format!("[{}] {id}: {what} -- {detail}\n", if pass { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "{id} failed: {detail}");
}

fn max_abs_dev(found: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(found.len(), expected.len(), "level count {found:?} vs {expected:?}");
    found
        .iter()
        .zip(expected)
        .map(|(f, e)| (f - e).abs())
        .fold(0.0, f64::max)
}

#[test]
fn ac1_square_well_is_exact() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [0usize, 7, 100] {
        let d = disc("squarewell", -5.0, 5.0, n);
        let found = solve(&d, &SolveOptions::new(0.0, 1.0).with_de(0.005).with_tol(1e-13)).unwrap();
        assert!(found.len() >= 3);
        for (i, level) in found.iter().take(3).enumerate() {
            let exact = square_well_energy(i as u32 + 1, 5.0).unwrap();
            worst = worst.max(((level.energy - exact) / exact).abs());
        }
    }
    let elapsed = start.elapsed();
    report(
        "AC1",
        "square well [-5,5], n in {0,7,100}: first 3 levels = p^2 pi^2/100 within 1e-9 rel, < 1 s",
        worst <= 1e-9 && elapsed < Duration::from_secs(1),
        format!("max rel err {worst:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn ac2_table1_l10_block() {
    let start = Instant::now();
    let d = disc("harmonic", -10.0, 10.0, 2000);
    let found = solve(&d, &SolveOptions::new(0.0, 14.0).with_de(0.005)).unwrap();
    let elapsed = start.elapsed();
    let expected = [1.000586, 3.001487, 5.002569, 7.003471, 9.004435, 11.005464, 13.007584];
    let got = energies(&found);
    let pass_count = got.len() == expected.len();
    let dev = if pass_count { max_abs_dev(&got, &expected) } else { f64::INFINITY };
    report(
        "AC2",
        "harmonic [-10,10], n=2000, dE=0.005: seven levels within 5e-3 of the L=10 column, < 30 s",
        pass_count && dev <= 5e-3 && elapsed < Duration::from_secs(30),
        format!("levels {got:.6?}, max dev {dev:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn ac3_table1_trends() {
    let l1 = energies(&levels("harmonic", -1.0, 1.0, 2000, 12.0));
    let dev = max_abs_dev(&l1, &[2.597, 10.151]);

    let e0: Vec<f64> = [10usize, 30, 200, 2000]
        .iter()
        .map(|&n| levels("harmonic", -5.0, 5.0, n, 2.0)[0].energy)
        .collect();
    let decreasing = e0.windows(2).all(|w| w[1] < w[0]);
    report(
        "AC3",
        "harmonic L=1 n=2000 ~ {2.597, 10.151} within 5e-3; L=5 E0 decreasing over n in {10,30,200,2000}",
        dev <= 5e-3 && decreasing,
        format!("L=1 {l1:.6?} (dev {dev:.2e}); L=5 E0 {e0:.6?}"),
    );
}

#[test]
fn ac4_morse_convergence() {
    let ns = [10usize, 30, 50, 200, 2000];
    let e0: Vec<f64> = ns
        .iter()
        .map(|&n| levels("morse:400,1", -2.0, 2.0, n, 40.0)[0].energy)
        .collect();
    let non_increasing = e0.windows(2).all(|w| w[1] <= w[0]);
    let coarse_above_20: Vec<bool> = ns
        .iter()
        .zip(&e0)
        .filter(|(&n, _)| n <= 50)
        .map(|(_, &e)| e > 20.0)
        .collect();
    let last = (e0[4] - 19.75).abs();
    report(
        "AC4",
        "Morse 400,1 on [-2,2]: E0(n) non-increasing, E0 > 20 for n <= 50, |E0(2000) - 19.75| <= 0.05",
        non_increasing && coarse_above_20.iter().all(|&b| b) && last <= 0.05,
        format!(
            "E0 at n={ns:?}: {e0:.6?}; non-increasing {non_increasing}; E0 > 20 for n=10,30,50: {coarse_above_20:?}; |E0(2000)-19.75| = {last:.2e}"
        ),
    );
}

#[test]
fn ac5_table2_narrow_walls() {
    let cases = [
        ("poly:1*x^2+1*x^4", [2.635, 10.265]),
        ("poly:1*x^2+1*x^6", [2.615, 10.205]),
        ("poly:1*x^2+1*x^8", [2.605, 10.185]),
        ("poly:1*x^2+1*x^10", [2.605, 10.175]),
        ("poly:1*x^2+1*x^12", [2.605, 10.165]),
    ];
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (potential, expected) in cases {
        let got = energies(&levels(potential, -1.0, 1.0, 2000, 12.0));
        let dev = max_abs_dev(&got, &expected);
        worst = worst.max(dev);
        details.push(format!("{potential}: {got:.5?}"));
    }
    report(
        "AC5",
        "Table 2 at 2L=2, n=2000: ground/first-excited pairs within 1e-2",
        worst <= 1e-2,
        format!("max dev {worst:.2e}; {}", details.join("; ")),
    );
}

#[test]
fn ac6_quartic_discrepancy() {
    let spec = parse_potential("poly:1*x^2+1*x^4", -2.0, 2.0).unwrap();
    let solver = energies(&levels("poly:1*x^2+1*x^4", -2.0, 2.0, 2000, 7.0));
    let oracle = fd_spectrum(&spec, 4001, 2, true).unwrap();
    let reference = oracle.best();
    let dev = max_abs_dev(&solver[..2], reference);
    let excited = 0.5 * (solver[1] + reference[1]);
    let (reported, alhendi) = (4.695, 4.58734092);
    let supported = if (excited - reported).abs() < (excited - alhendi).abs() {
        "the reported 4.695"
    } else {
        "Alhendi's 4.58734092"
    };
    report(
        "AC6",
        "quartic x^2+x^4 on [-2,2]: solver (n=2000) vs FD oracle (4001/8001 Richardson) within 2e-3",
        dev <= 2e-3,
        format!(
            "solver {:.6?}, oracle {:.6?}, max dev {dev:.2e}; first excited {excited:.6} supports {supported} (|d| = {:.4} vs {:.4})",
            &solver[..2],
            reference,
            (excited - reported).abs(),
            (excited - alhendi).abs()
        ),
    );
}

#[test]
fn ac7_oracle_soundness() {
    let spec = parse_potential("harmonic", -10.0, 10.0).unwrap();
    let r = fd_spectrum(&spec, 4001, 4, true).unwrap();
    let rich = r.richardson.as_ref().unwrap();
    let exact = [1.0, 3.0, 5.0, 7.0];
    let dev = max_abs_dev(&rich.extrapolated, &exact);
    let orders: Vec<f64> = (0..4)
        .map(|i| observed_order(r.eigenvalues[i], rich.fine[i], exact[i]))
        .collect();
    let orders_ok = orders.iter().all(|p| (1.8..=2.2).contains(p));
    report(
        "AC7",
        "FD oracle with Richardson on harmonic [-10,10]: {1,3,5,7} within 1e-4, observed order in [1.8, 2.2]",
        dev <= 1e-4 && orders_ok,
        format!("extrapolated {:.8?}, max dev {dev:.2e}, orders {orders:.4?}", rich.extrapolated),
    );
}

// Criterion 8: property suites.

#[test]
fn ac8a_zero_set_equivalence() {
    let mut worst = 0.0f64;
    let mut local_min = true;
    for (potential, a, b, n, e_max) in [
        ("harmonic", -10.0, 10.0, 2000, 14.0),
        ("poly:1*x^2+1*x^4", -2.0, 2.0, 2000, 20.0),
        ("morse:400,1", -2.0, 2.0, 2000, 100.0),
        ("squarewell", -5.0, 5.0, 7, 1.0),
    ] {
        let d = disc(potential, a, b, n);
        for level in solve(&d, &SolveOptions::new(0.0, e_max).with_tol(1e-11)).unwrap() {
            worst = worst.max(level.residual_b);
            let (lo, hi) = level.search_bracket;
            let at = quantification(&d, level.energy).ln_abs_b();
            local_min &= at < quantification(&d, lo).ln_abs_b() && at < quantification(&d, hi).ln_abs_b();
        }
    }
    report(
        "AC8a",
        "zero-set equivalence: |B_n| at every shooting root <= 1e-6 x bracket endpoints, local minimum",
        worst <= 1e-6 && local_min,
        format!("max relative |B_n| {worst:.2e}, local minima {local_min}"),
    );
}

#[test]
fn ac8b_scaling_neutrality() {
    let mut worst = 0.0f64;
    for n in [0usize, 3, 10, 30] {
        for potential in ["harmonic", "poly:1*x^2+1*x^4", "morse:2,1"] {
            let d = disc(potential, -1.5, 1.5, n);
            for k in 0..=40 {
                let e = -50.0 + 2.5 * k as f64;
                let (s, log) = recurrence(&d, e, Rescale::Enabled);
                let (raw, _) = recurrence(&d, e, Rescale::Disabled);
                let scaled = s * log.exp();
                worst = worst.max((scaled - raw).norm() / raw.norm());
            }
        }
    }
    report(
        "AC8b",
        "scaling neutrality: rescaled and raw B_n agree to 1e-12 relative (n <= 30, |E| <= 50)",
        worst <= 1e-12,
        format!("max relative difference {worst:.2e}"),
    );
}

#[test]
fn ac8c_square_well_slab_independence() {
    let mut worst = 0.0f64;
    for n in [0usize, 1, 7, 100] {
        let d = disc("squarewell", -5.0, 5.0, n);
        for k in 0..=30 {
            let e = -2.0 + 0.1 * k as f64;
            let kw = slabwell::quantify::wavenumber(0.0, e);
            let expected = -2.0 * (kw * 10.0).sinh();
            let got = quantification(&d, e).b();
            worst = worst.max((got - expected).norm() / expected.norm().max(1e-300));
        }
    }
    report(
        "AC8c",
        "square well: B_n = -2 sinh(k (b-a)) for n in {0,1,7,100}",
        worst <= 1e-9,
        format!("max relative deviation {worst:.2e}"),
    );
}

#[test]
fn ac8d_nodes_parity_normalization() {
    let mut node_ok = true;
    let mut worst_parity = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut checked = 0;
    for (potential, l, e_max) in [("harmonic", 10.0, 14.0), ("poly:1*x^2+1*x^4", 2.0, 20.0)] {
        let d = disc(potential, -l, l, 2000);
        let found = solve(&d, &SolveOptions::new(0.0, e_max).with_tol(1e-11)).unwrap();
        for level in &found {
            node_ok &= level.nodes == Some(level.index) && level.diagnostic.is_none();
            let wf = reconstruct(&d, level.energy, 2001).unwrap();
            let s = &wf.samples;
            let parity = if level.index % 2 == 0 { -1.0 } else { 1.0 };
            for j in 0..s.len() {
                worst_parity = worst_parity.max((s[j].1 + parity * s[s.len() - 1 - j].1).abs());
            }
            worst_norm = worst_norm.max(wf.norm_residual);
            checked += 1;
        }
    }
    report(
        "AC8d",
        "node count = index, alternating parity to 1e-6, normalization residual <= 1e-8 (harmonic, quartic)",
        node_ok && worst_parity <= 1e-6 && worst_norm <= 1e-8,
        format!("{checked} levels; nodes ok {node_ok}; parity dev {worst_parity:.2e}; norm residual {worst_norm:.2e}"),
    );
}

#[test]
fn ac8e_scan_halving_keeps_levels() {
    let mut kept = true;
    let mut summary = Vec::new();
    for (potential, a, b, n, e_max) in [
        ("harmonic", -5.0, 5.0, 400, 20.0),
        ("morse:400,1", -2.0, 2.0, 400, 150.0),
        ("poly:1*x^2+1*x^8", -2.0, 2.0, 400, 40.0),
    ] {
        let d = disc(potential, a, b, n);
        let mut de = 0.4;
        let mut previous: Vec<f64> = Vec::new();
        for _ in 0..5 {
            let found = energies(&solve(&d, &SolveOptions::new(0.0, e_max).with_de(de).with_tol(1e-10)).unwrap());
            kept &= previous.iter().all(|e| found.iter().any(|f| (f - e).abs() <= 1e-8));
            previous = found;
            de /= 2.0;
        }
        summary.push(format!("{potential}: {} levels", previous.len()));
        let brackets = scan(&d, 0.0, e_max, 0.1).unwrap();
        kept &= brackets.windows(2).all(|w| w[0].hi <= w[1].lo);
    }
    report(
        "AC8e",
        "scan halving never loses a level",
        kept,
        summary.join("; "),
    );
}

#[test]
fn ac8f_solver_matches_oracle() {
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (potential, l, e_max, count) in [
        ("harmonic", 10.0, 14.0, 7),
        ("harmonic", 1.0, 12.0, 2),
        ("morse:400,1", 2.0, 100.0, 2),
        ("poly:1*x^2+1*x^4", 1.0, 12.0, 2),
        ("poly:1*x^2+1*x^6", 1.0, 12.0, 2),
        ("poly:1*x^2+1*x^8", 1.0, 12.0, 2),
        ("poly:1*x^2+1*x^10", 1.0, 12.0, 2),
        ("poly:1*x^2+1*x^12", 1.0, 12.0, 2),
        ("poly:1*x^2+1*x^12", 2.0, 7.0, 2),
    ] {
        let solver = energies(&levels(potential, -l, l, 2000, e_max));
        let spec = parse_potential(potential, -l, l).unwrap();
        let oracle = fd_spectrum(&spec, 4001, count, true).unwrap();
        let dev = max_abs_dev(&solver[..count], oracle.best());
        worst = worst.max(dev);
        details.push(format!("{potential} L={l}: {dev:.1e}"));
    }
    report(
        "AC8f",
        "solver (n=2000) vs oracle (4001/8001 Richardson) within 2e-3 on every acceptance potential",
        worst <= 2e-3,
        details.join("; "),
    );
}
