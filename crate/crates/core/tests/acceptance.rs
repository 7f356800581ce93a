//! Acceptance run: one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary is printed on
//! every invocation. The process fails if any criterion fails, except those
//! listed in `UNATTAINABLE`, which must fail; a listed criterion that starts
//! passing also fails the run.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use slh_core::operator::pauli::*;
use slh_core::operator::{C64, I};
use slh_core::oracle::{self, SliceConfig};
use slh_core::random;
use slh_core::semigroup::{self, transfer_generator};
use slh_core::slh::{self, identity_model};
use slh_core::zoo::{self, FaradayFamily, LanFamily, PolynomialFamily, SqueezingFamily};
use slh_core::{ExponentialState, Operator, SlhModel};

/// Criteria whose stated instance cannot hold, with the reason.
const UNATTAINABLE: &[(u32, &str)] = &[(
    9,
    "with L = kI and δL = I/k the terms (δL)*L and −L*δL cancel exactly, so the residual is O(1/k)",
)];

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn close(a: &SlhModel, b: &SlhModel) -> f64 {
    a.max_component_diff(b)
}

fn group_laws() -> Outcome {
    let mut rng = random::rng(1001);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let (n, d) = (1 + i % 2, 1 + (i / 2) % 4);
        let [g1, g2, g3] = [0; 3].map(|_| random::model(&mut rng, n, d));
        let e = identity_model(n, d);
        let assoc = close(
            &slh::series(&slh::series(&g3, &g2).unwrap(), &g1).unwrap(),
            &slh::series(&g3, &slh::series(&g2, &g1).unwrap()).unwrap(),
        );
        let ident = close(&slh::series(&e, &g1).unwrap(), &g1).max(close(&slh::series(&g1, &e).unwrap(), &g1));
        let inv = slh::inverse(&g1).unwrap();
        let inverse = close(&slh::series(&g1, &inv).unwrap(), &e).max(close(&slh::series(&inv, &g1).unwrap(), &e));
        let direct = slh::damping(&slh::series(&g2, &g1).unwrap()).unwrap();
        let composed =
            slh::series_damping(&slh::damping(&g2).unwrap(), &slh::damping(&g1).unwrap()).unwrap();
        let damping = direct.max_component_diff(&composed);
        worst = worst.max(assoc).max(ident).max(inverse).max(damping);
    }
    outcome(worst <= 1e-10, format!("max residual {worst:.2e} (tol 1e-10, 100 models)"))
}

fn generator_consistency() -> Outcome {
    let mut rng = random::rng(1002);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (n, d) = (1 + i % 2, 1 + (i / 2) % 4);
        let g = random::model(&mut rng, n, d);
        let k = slh::damping(&g).unwrap();
        let t = transfer_generator(&k, &k).unwrap();
        worst = worst.max(t.superop().max_abs_diff(&slh::lindblad_superoperator(&g)));
    }
    outcome(worst <= 1e-12, format!("max entry difference {worst:.2e} (tol 1e-12, 50 models)"))
}

fn closed_form_delta_generator() -> Outcome {
    let mut rng = random::rng(1003);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (n, d) = (1 + i % 2, 1 + (i / 2) % 4);
        let g = random::model(&mut rng, n, d);
        let dg = random::model(&mut rng, n, d);
        let alpha = random::amplitudes(&mut rng, n, 1.0);
        let gt = slh::series(&g, &dg).unwrap();
        let t = transfer_generator(&slh::displace(&gt, &alpha).unwrap(), &slh::displace(&g, &alpha).unwrap()).unwrap();
        let via_generator = t.apply(&Operator::identity(d)).unwrap();
        let closed = semigroup::delta_generator_on_identity(&g, &dg, &alpha).unwrap();
        worst = worst.max((via_generator - closed).op_norm());
    }
    outcome(worst <= 1e-10, format!("max residual {worst:.2e} (tol 1e-10, 50 triples)"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = random::rng(1004);
    let mut misses = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for i in 0..20 {
        let t = 0.25 + 0.75 * (i as f64 / 19.0);
        let ga = random::model(&mut rng, 1, 2);
        let gb = random::model(&mut rng, 1, 2);
        let psi = random::state(&mut rng, 2, 1, t, 1 + i % 2);
        let exact = semigroup::distance(&ga, &gb, &psi, t).unwrap();
        let cfg = SliceConfig::default_for(&[&ga, &gb], &psi, t);
        let est = oracle::oracle_distance(&ga, &gb, &psi, t, &cfg).unwrap();
        let bar = est.error_bar.max(1e-6);
        let gap = (est.value - exact).abs();
        worst_ratio = worst_ratio.max(gap / bar);
        if gap > bar {
            misses.push(i);
        }
    }

    let ga = SlhModel::coupled(vec![Operator::zeros(2)], random::hermitian(&mut rng, 2, 1.0)).unwrap();
    let gb = SlhModel::coupled(vec![Operator::zeros(2)], random::hermitian(&mut rng, 2, 1.0)).unwrap();
    let psi = random::state(&mut rng, 2, 1, 1.0, 2);
    let exact = semigroup::distance(&ga, &gb, &psi, 1.0).unwrap();
    let cfg = SliceConfig::default_for(&[&ga, &gb], &psi, 1.0);
    let zero_coupling = (oracle::oracle_distance(&ga, &gb, &psi, 1.0, &cfg).unwrap().value - exact).abs();

    outcome(
        misses.is_empty() && zero_coupling <= 1e-6,
        format!(
            "{} of 20 outside error bar (worst gap/bar {worst_ratio:.2}), zero-coupling gap {zero_coupling:.2e} (tol 1e-6)",
            misses.len()
        ),
    )
}

fn faraday() -> Outcome {
    let fam = FaradayFamily {
        j: 0.5,
        kappa: 1.0,
        alpha: 1.0,
    };
    let ks = [2.0, 4.0, 8.0, 16.0, 32.0];
    let psi = ExponentialState::uniform(2, 2, 1.0).unwrap();
    let rep = zoo::convergence_experiment(&fam, &ks, &psi, 1.0, None).unwrap();
    let d = rep.distances();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let ratio = d[4] / d[0];
    let halvings: Vec<f64> = rep.rows.windows(2).map(|w| w[1].delta_residual / w[0].delta_residual).collect();
    let halves = halvings.iter().all(|r| (r - 0.5).abs() <= 0.1);
    let decoupled = ks
        .iter()
        .map(|&k| {
            let m = zoo::faraday_family(&fam.spec(k)).unwrap();
            close(&m.perturbed, &m.decoupled)
        })
        .fold(0.0, f64::max);
    outcome(
        decreasing && ratio <= 0.1 && halves && decoupled <= 1e-10,
        format!(
            "decreasing={decreasing}, d(32)/d(2)={ratio:.3e} (≤0.1), residual ratios {halvings:.3?} (0.5±0.1), decoupling gap {decoupled:.2e} (≤1e-10)"
        ),
    )
}

fn squeezing() -> Outcome {
    let fam = SqueezingFamily::new(sigma_minus(), Operator::zeros(2), std::f64::consts::FRAC_PI_2);
    let ns = [1.0, 4.0, 16.0, 64.0, 256.0];
    let psi = ExponentialState::uniform(2, 1, 0.5).unwrap();
    let rep = zoo::convergence_experiment(&fam, &ns, &psi, 0.5, None).unwrap();
    let d = rep.distances();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let ratio = d[4] / d[0];
    let members: Vec<_> = ns.iter().map(|&n| fam.squeezed(n).unwrap()).collect();
    let f_norms: Vec<f64> = members.iter().map(|m| m.f.op_norm()).collect();
    let growing = f_norms.windows(2).all(|w| w[1] > w[0]);
    // n grows by 4 per step, so √n doubles
    let growth: Vec<f64> = f_norms.windows(2).map(|w| w[1] / w[0]).collect();
    let sqrt_like = growth.iter().skip(1).all(|g| (g - 2.0).abs() <= 0.2);
    let bogoliubov = members
        .iter()
        .flat_map(|m| m.bogoliubov.identity_residuals())
        .fold(0.0, f64::max);
    let h_gaps: Vec<f64> = members.iter().map(|m| (m.h_n.clone() - m.h_limit.clone()).op_norm()).collect();
    let h_converging = h_gaps.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && ratio <= 0.2 && growing && sqrt_like && bogoliubov <= 1e-10 && h_converging,
        format!(
            "decreasing={decreasing}, d(256)/d(1)={ratio:.3e} (≤0.2), ‖F‖ growth {growth:.3?}, Bogoliubov residual {bogoliubov:.2e}, ‖Hₙ−H′‖ {}"
            ,
            sci(&h_gaps)
        ),
    )
}

fn lan() -> Outcome {
    let linear = PolynomialFamily::new(vec![Operator::zeros(2), sigma_minus()], vec![]).unwrap();
    let ks = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let psi = ExponentialState::uniform(2, 1, 1.0).unwrap();
    let fam = LanFamily {
        family: linear,
        theta0: 0.5,
        v: 1.0,
        finite_differences: false,
    };
    let rep = zoo::convergence_experiment(&fam, &ks, &psi, 1.0, None).unwrap();
    let linear_distance = rep.distances().into_iter().fold(0.0, f64::max);
    let linear_delta = rep.rows.iter().map(|r| r.delta_residual).fold(0.0, f64::max);

    let quadratic =
        PolynomialFamily::new(vec![Operator::zeros(2), sigma_minus(), sigma_minus().scale(I)], vec![]).unwrap();
    let (theta0, v) = (0.8, 1.5);
    let m = zoo::lan_family(&zoo::LanSpec {
        family: quadratic,
        theta0,
        v,
        k: 8.0,
        finite_differences: false,
    })
    .unwrap();
    let phase_gap = (m.phase - (&sigma_plus() * &sigma_minus()).scale_re(-v * v * theta0)).op_norm();

    // the quadratic family has no Taylor remainder, so the scaling check uses a cubic one
    let cubic = PolynomialFamily::new(
        vec![Operator::zeros(2), sigma_minus(), sigma_minus().scale(I), sigma_x()],
        vec![Operator::zeros(2), Operator::zeros(2), sigma_z()],
    )
    .unwrap();
    let remainders: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&k| {
            let m = zoo::lan_family(&zoo::LanSpec {
                family: cubic.clone(),
                theta0: 0.3,
                v: 0.9,
                k,
                finite_differences: false,
            })
            .unwrap();
            m.scaled_remainders.0.op_norm() + m.scaled_remainders.1.op_norm()
        })
        .collect();
    let shrinking = remainders.windows(2).all(|w| w[1] < w[0]);
    outcome(
        linear_distance <= 1e-8 && linear_delta == 0.0 && phase_gap <= 1e-8 && shrinking,
        format!(
            "linear: max distance {linear_distance:.2e}, max δ-residual {linear_delta:.2e}; phase gap {phase_gap:.2e}; k²R {}",
            sci(&remainders)
        ),
    )
}

fn virtual_work() -> Outcome {
    let mut rng = random::rng(1008);
    let mut gauge_gap: f64 = 0.0;
    for i in 0..50 {
        let (n, d) = (1 + i % 2, 2 + (i / 2) % 3);
        let g = random::model(&mut rng, n, d);
        let gauge = random::gauge(&mut rng, n);
        let moved = slh::gauge_transform(&gauge, &g).unwrap();
        let x = random::operator(&mut rng, d, 1.0);
        gauge_gap = gauge_gap.max((slh::lindblad(&moved, &x).unwrap() - slh::lindblad(&g, &x).unwrap()).op_norm());
    }

    let mut ratios = Vec::new();
    for _ in 0..5 {
        let g = random::coupled_model(&mut rng, 2, 3);
        let f = random::hermitian(&mut rng, 3, 1.0);
        let residual = |dphi: f64| {
            let r = zoo::virtual_rotation(&g, &f, dphi).unwrap();
            (r.work + r.first_order.scale_re(-1.0)).op_norm()
        };
        ratios.push(residual(1e-2) / residual(5e-3));
    }
    let second_order = ratios.iter().all(|r| (r - 4.0).abs() <= 0.5);

    // decay 2 → 0 conserves the 0–1 coherence
    let g = SlhModel::coupled(vec![Operator::unit(3, 0, 2)], Operator::zeros(3)).unwrap();
    let f = &Operator::unit(3, 0, 1) + &Operator::unit(3, 1, 0);
    let conserved = [1e-1, 1e-2, 1e-3].iter().all(|&dphi| {
        let r = zoo::virtual_rotation(&g, &f, dphi).unwrap();
        r.first_order.op_norm() < 1e-15 && r.work.op_norm() <= dphi * dphi
    });
    outcome(
        gauge_gap <= 1e-10 && second_order && conserved,
        format!("gauge gap {gauge_gap:.2e}, halving ratios {ratios:.3?} (4±0.5), conserved F first-order-zero={conserved}"),
    )
}

fn left_residual() -> Outcome {
    let mut rng = random::rng(1009);
    let g = random::model(&mut rng, 1, 2);
    let alpha = [C64::new(0.5, 0.3)];
    let fixed: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&k| {
            let mut r = random::rng(77);
            let dg = random::perturbation(&mut r, 1, 2, 1.0 / k);
            slh::left_residual(&g, &dg, &alpha).unwrap().op_norm()
        })
        .collect();
    let fixed_vanishes = fixed.windows(2).all(|w| w[1] < w[0]) && fixed[5] < 0.1 * fixed[0];

    let competing = |dl: C64| -> Vec<f64> {
        [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&k| {
                let gk = SlhModel::coupled(vec![Operator::identity(2).scale_re(k)], Operator::zeros(2)).unwrap();
                let dg = SlhModel::coupled(vec![Operator::identity(2).scale(dl / k)], Operator::zeros(2)).unwrap();
                slh::left_residual(&gk, &dg, &alpha).unwrap().op_norm()
            })
            .collect()
    };
    let stated = competing(C64::new(1.0, 0.0));
    let rotated = competing(I);
    let stated_holds = stated.iter().all(|&r| r >= 0.5);
    outcome(
        fixed_vanishes && stated_holds,
        format!(
            "fixed G: {}; L=kI, δL=I/k: {} (need ≥0.5); with δL=iI/k: {rotated:.3?}",
            sci(&fixed),
            sci(&stated)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "group laws", Duration::from_secs(5), group_laws),
        (2, "generator consistency", Duration::from_secs(5), generator_consistency),
        (3, "closed-form δ-generator", Duration::from_secs(10), closed_form_delta_generator),
        (4, "oracle equivalence", Duration::from_secs(300), oracle_equivalence),
        (5, "Faraday convergence", Duration::from_secs(60), faraday),
        (6, "squeezing convergence", Duration::from_secs(60), squeezing),
        (7, "LAN", Duration::from_secs(60), lan),
        (8, "virtual work", Duration::from_secs(10), virtual_work),
        (9, "left-residual discrimination", Duration::from_secs(5), left_residual),
    ];
    let mut unexpected = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = out.passed && in_time;
        let known = UNATTAINABLE.iter().find(|(i, _)| *i == id);
        let status = if passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} [{status}] {name}: {} [{:.2}s / {}s]",
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        match (passed, known) {
            (false, Some((_, why))) => println!("    unattainable as stated: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("    listed as unattainable but passed");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
