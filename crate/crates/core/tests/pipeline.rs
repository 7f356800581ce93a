use slh_core::operator::pauli::*;
use slh_core::semigroup;
use slh_core::slh;
use slh_core::zoo::{
    self, FaradayFamily, LanFamily, ModelFamily, PolynomialFamily, SqueezingFamily, VirtualRotationFamily,
};
use slh_core::{ExponentialState, Operator, SlhModel};

fn faraday() -> FaradayFamily {
    FaradayFamily {
        j: 0.5,
        kappa: 1.0,
        alpha: 1.0,
    }
}

#[test]
fn csv_is_deterministic() {
    let psi = ExponentialState::uniform(2, 2, 1.0).unwrap();
    let ks = [2.0, 4.0, 8.0, 16.0, 32.0];
    let a = zoo::convergence_experiment(&faraday(), &ks, &psi, 1.0, None).unwrap().to_csv().unwrap();
    let b = zoo::convergence_experiment(&faraday(), &ks, &psi, 1.0, None).unwrap().to_csv().unwrap();
    assert_eq!(a, b);
}

#[test]
fn rows_are_rederivable_from_library_calls() {
    let psi = ExponentialState::uniform(2, 2, 1.0).unwrap();
    let rep = zoo::convergence_experiment(&faraday(), &[2.0, 8.0], &psi, 1.0, None).unwrap();
    let csv = rep.to_csv().unwrap();
    for (line, k) in csv.lines().skip(1).zip([2.0, 8.0]) {
        let fields: Vec<f64> = line.split(',').take(3).map(|x| x.parse().unwrap()).collect();
        let m = zoo::faraday_family(&faraday().spec(k)).unwrap();
        let direct = semigroup::distance(&m.model, &m.perturbed, &psi, 1.0).unwrap();
        assert_eq!(fields[0], k);
        assert_eq!(fields[1], direct);
        assert_eq!(fields[2], m.perturbation.distance_to_identity());
    }
}

#[test]
fn squeezing_limit_models_diverge_while_distance_shrinks() {
    let fam = SqueezingFamily::new(sigma_minus(), Operator::zeros(2), std::f64::consts::FRAC_PI_2);
    let psi = ExponentialState::uniform(2, 1, 0.5).unwrap();
    let ns = [1.0, 4.0, 16.0, 64.0, 256.0];
    let rep = zoo::convergence_experiment(&fam, &ns, &psi, 0.5, None).unwrap();
    let d = rep.distances();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    let norms: Vec<f64> = ns.iter().map(|&n| fam.member(n).unwrap().model.l()[0].op_norm()).collect();
    assert!(norms.windows(2).skip(1).all(|w| w[1] > 1.8 * w[0]), "{norms:?}");
}

#[test]
fn linear_lan_family_is_exactly_equivalent() {
    let fam = LanFamily {
        family: PolynomialFamily::new(vec![Operator::zeros(2), sigma_minus()], vec![sigma_z()]).unwrap(),
        theta0: 0.5,
        v: 1.0,
        finite_differences: false,
    };
    let psi = ExponentialState::uniform(2, 1, 1.0).unwrap();
    let rep = zoo::convergence_experiment(&fam, &[1.0, 4.0, 16.0, 64.0], &psi, 1.0, None).unwrap();
    assert!(rep.distances().iter().all(|&d| d <= 1e-8));
}

#[test]
fn virtual_rotation_family_converges() {
    let g = SlhModel::coupled(vec![sigma_minus()], sigma_x().scale_re(0.4)).unwrap();
    let fam = VirtualRotationFamily {
        model: g,
        generator: sigma_y(),
        phi0: 0.5,
    };
    let psi = ExponentialState::uniform(2, 1, 1.0).unwrap();
    let rep = zoo::convergence_experiment(&fam, &[1.0, 2.0, 4.0, 8.0], &psi, 1.0, None).unwrap();
    let d = rep.distances();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn family_specs_round_trip_through_json() {
    let text = serde_json::to_string(&faraday()).unwrap();
    let back: FaradayFamily = serde_json::from_str(&text).unwrap();
    assert_eq!(back, faraday());
    let m = slh::identity_model(2, 3);
    let back = SlhModel::from_json(&m.to_json()).unwrap();
    assert_eq!(back.max_component_diff(&m), 0.0);
}
