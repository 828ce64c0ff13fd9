use ggc_fading::channels::ChannelModel;
use ggc_fading::mc::average_model;
use ggc_fading::metrics::{avg_ser_dpsk, avg_ser_mpsk, McOptions};
use ggc_fading::simkit::*;
use ggc_fading::systems::SystemModel;
use ggc_fading::Modulation;

fn cfg(seed: u64, n: u64, grid: Vec<f64>, m: Modulation) -> SimConfig {
    SimConfig::new(seed, n, grid, m).unwrap()
}

fn exact(ch: &ChannelModel, db: f64, m: Modulation) -> f64 {
    let rho = db_to_linear(db);
    let mc = McOptions::default();
    match m {
        Modulation::Dpsk => avg_ser_dpsk(ch, rho, &mc).unwrap().value,
        Modulation::Mpsk { m } => avg_ser_mpsk(ch, rho, m, &mc).unwrap().value,
    }
}

#[test]
fn point_examples() {
    let c = simulate_ser(&ChannelModel::rayleigh(), &cfg(1, 1_000_000, vec![0.0], Modulation::Dpsk)).unwrap();
    assert!((c.ser[0] - 0.25).abs() < 3.0 * c.stderr[0]);
    let n = ChannelModel::nakagami(2.5).unwrap();
    let c = simulate_ser(&n, &cfg(2, 1_000_000, vec![10.0], Modulation::Dpsk)).unwrap();
    let want = 0.5 * 5f64.powf(-2.5);
    assert!((want - 0.00894).abs() < 1e-5);
    assert!((c.ser[0] - want).abs() < 3.0 * c.stderr[0], "{} vs {want}", c.ser[0]);
}

#[test]
fn fig34_pair_is_separated_at_five_db() {
    let x = SystemModel::mrc(vec![ChannelModel::gamma(2.0, 1.0).unwrap(), ChannelModel::gamma(2.0, 2.0).unwrap()]).unwrap();
    let y = SystemModel::mrc(vec![ChannelModel::gamma(1.0, 0.5).unwrap(), ChannelModel::gamma(3.0, 3.0).unwrap()]).unwrap();
    let c = cfg(5, 100_000, vec![5.0], Modulation::Dpsk);
    let (a, b) = (simulate_ser(x.channel(), &c).unwrap(), simulate_ser(y.channel(), &c).unwrap());
    let se = (a.stderr[0].powi(2) + b.stderr[0].powi(2)).sqrt();
    assert!(b.ser[0] - a.ser[0] > 4.0 * se, "{} vs {} (se {se})", a.ser[0], b.ser[0]);
}

#[test]
fn bit_identical_across_thread_counts() {
    let ch = SystemModel::mrc_unit_power(vec![ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(); 2]).unwrap();
    for est in [Estimator::ConditionalSer, Estimator::SymbolCount] {
        let c = cfg(42, 20_000, vec![0.0, 10.0, 20.0], Modulation::mpsk(4).unwrap()).with_estimator(est);
        let run = |t| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| simulate_ser(ch.channel(), &c).unwrap())
        };
        let (one, eight) = (run(1), run(8));
        assert_eq!(one.to_csv(&serde_json::Value::Null), eight.to_csv(&serde_json::Value::Null));
        assert_eq!(one, run(1));
    }
}

#[test]
fn estimators_agree() {
    let c = cfg(9, 100_000, vec![0.0, 5.0, 10.0, 15.0], Modulation::Dpsk);
    let a = simulate_ser(&ChannelModel::rayleigh(), &c).unwrap();
    let b = simulate_ser(&ChannelModel::rayleigh(), &c.clone().with_estimator(Estimator::SymbolCount)).unwrap();
    for i in 0..a.ser.len() {
        let se = (a.stderr[i].powi(2) + b.stderr[i].powi(2)).sqrt();
        assert!((a.ser[i] - b.ser[i]).abs() < 4.0 * se, "{i}: {} vs {}", a.ser[i], b.ser[i]);
    }
}

#[test]
fn stderr_halves_when_n_quadruples() {
    let ch = ChannelModel::hoyt(0.5).unwrap();
    let se = |n| average_model(&ch, 3, 0, n, None, |x, _| (-x).exp()).stderr;
    let ratio = se(40_000) / se(160_000);
    assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
    let c = |n| simulate_ser(&ch, &cfg(3, n, vec![10.0], Modulation::Dpsk)).unwrap().stderr[0];
    let ratio = c(40_000) / c(160_000);
    assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
}

#[test]
fn simulated_curves_match_exact_paths() {
    let zoo = [
        ChannelModel::rayleigh(),
        ChannelModel::nakagami(2.5).unwrap(),
        ChannelModel::hoyt(0.4).unwrap(),
        ChannelModel::rician(3.0).unwrap(),
        ChannelModel::stable(0.5).unwrap(),
    ];
    let grid = db_grid(0.0, 30.0, 5.0).unwrap();
    for (i, ch) in zoo.iter().enumerate() {
        for m in [Modulation::Dpsk, Modulation::mpsk(2).unwrap(), Modulation::mpsk(8).unwrap()] {
            let c = simulate_ser(ch, &cfg(100 + i as u64, 50_000, grid.clone(), m)).unwrap();
            for (j, &db) in grid.iter().enumerate() {
                let e = exact(ch, db, m);
                assert!((c.ser[j] - e).abs() < 4.0 * c.stderr[j], "{} {m} {db} dB: {} vs {e}", ch.label(), c.ser[j]);
            }
        }
    }
}

#[test]
fn mrc_of_gammas_matches_product_of_lts() {
    let sys = SystemModel::mrc(vec![ChannelModel::gamma(1.5, 2.0).unwrap(), ChannelModel::nakagami(2.0).unwrap()]).unwrap();
    let grid = vec![0.0, 10.0, 20.0];
    let c = simulate_ser(sys.channel(), &cfg(4, 100_000, grid.clone(), Modulation::Dpsk)).unwrap();
    for (j, &db) in grid.iter().enumerate() {
        let rho = db_to_linear(db);
        let lt = (1.0 + rho / 2.0).powf(-1.5) * (1.0 + rho / 2.0).powi(-2);
        assert!((c.ser[j] - 0.5 * lt).abs() < 4.0 * c.stderr[j]);
    }
}

#[test]
fn diversity_fits() {
    let grid = db_grid(25.0, 50.0, 2.5).unwrap();
    let n2 = ChannelModel::nakagami(2.0).unwrap();
    let c = simulate_ser(&n2, &cfg(6, 100_000, grid.clone(), Modulation::Dpsk)).unwrap();
    let d = estimate_diversity(&c, (25.0, 40.0)).unwrap();
    assert!((d - 2.0).abs() < 0.1, "{d}");
    let fig1 = SystemModel::mrc_unit_power(vec![ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(); 2]).unwrap();
    let c = simulate_ser(fig1.channel(), &cfg(7, 100_000, grid.clone(), Modulation::Dpsk)).unwrap();
    let d = estimate_diversity(&c, (30.0, 50.0)).unwrap();
    assert!((d - 2.5).abs() < 0.25, "{d}");
    let gammas = SystemModel::mrc(vec![ChannelModel::gamma(0.8, 1.0).unwrap(), ChannelModel::nakagami(1.7).unwrap()]).unwrap();
    let c = simulate_ser(gammas.channel(), &cfg(8, 100_000, grid, Modulation::mpsk(4).unwrap())).unwrap();
    let d = estimate_diversity(&c, (30.0, 50.0)).unwrap();
    assert!((d - 2.5).abs() < 0.25, "{d}");
}

#[test]
fn composite_diversity_and_mean() {
    let sys = SystemModel::composite(ChannelModel::rayleigh(), ChannelModel::lognormal(0.0, 1.0).unwrap()).unwrap();
    let est = average_model(sys.channel(), 12, 0, 1_000_000, None, |x, _| x);
    assert!((est.value - 1.0).abs() < 3.0 * est.stderr, "{}", est.value);
    let grid = db_grid(30.0, 50.0, 2.5).unwrap();
    let c = simulate_ser(sys.channel(), &cfg(13, 100_000, grid, Modulation::Dpsk)).unwrap();
    let d = estimate_diversity(&c, (30.0, 50.0)).unwrap();
    assert!((d - 1.0).abs() < 0.1, "{d}");
}

#[test]
fn snr_gain_from_curves() {
    let grid = db_grid(0.0, 40.0, 1.0).unwrap();
    let c = cfg(21, 100_000, grid, Modulation::Dpsk);
    let n2 = simulate_ser(&ChannelModel::nakagami(2.0).unwrap(), &c).unwrap();
    assert_eq!(estimate_snr_gain(&n2, &n2, 1e-4).unwrap(), 0.0);
    let gg = simulate_ser(&ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(), &c).unwrap();
    let g = estimate_snr_gain(&n2, &gg, 1e-4).unwrap();
    assert!((g - 1.505).abs() < 0.2, "{g}");
    let n1 = simulate_ser(&ChannelModel::nakagami(1.0).unwrap(), &c).unwrap();
    let d = simulate_ser(&ChannelModel::nakagami(1.0).unwrap().scale(2.0).unwrap(), &c).unwrap();
    let g = estimate_snr_gain(&n1, &d, 1e-3).unwrap();
    assert!((g - 3.01).abs() < 0.1, "{g}");
}
