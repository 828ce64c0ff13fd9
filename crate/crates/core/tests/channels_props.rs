use ggc_fading::channels::{ChannelModel, ClassTags, Membership};
use ggc_fading::config::parse_spec;
use ggc_fading::ext::Extended;
use ggc_fading::mc::{average_model, block_rng};
use ggc_fading::quad::{integrate_positive, QuadOptions};
use ggc_fading::simkit::{estimate_diversity, simulate_ser, SimConfig};
use ggc_fading::Modulation;
use proptest::prelude::*;

fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn closed_lt_zoo() -> Vec<ChannelModel> {
    vec![
        ChannelModel::rayleigh(),
        ChannelModel::nakagami(2.5).unwrap(),
        ChannelModel::gamma(0.6, 3.0).unwrap(),
        ChannelModel::hoyt(0.5).unwrap(),
        ChannelModel::rician(2.0).unwrap(),
        ChannelModel::stable(0.5).unwrap(),
    ]
}

#[test]
fn sampler_matches_lt() {
    for (i, ch) in closed_lt_zoo().into_iter().enumerate() {
        for s in [0.5, 1.0, 5.0] {
            let est = average_model(&ch, 5, i as u32, 100_000, None, move |x, _| (-s * x).exp());
            let lt = ch.lt_closed(s).unwrap();
            assert!((est.value - lt).abs() < 4.0 * est.stderr, "{} s={s}: {} vs {lt}", ch.label(), est.value);
        }
    }
}

#[test]
fn hoyt_lt_example() {
    let h = ChannelModel::hoyt(0.5).unwrap();
    let want = 2.6f64.powf(-0.5) * 1.4f64.powf(-0.5);
    assert!((h.lt_closed(1.0).unwrap() - want).abs() < 1e-12);
    let est = average_model(&h, 9, 0, 1_000_000, None, |x, _| (-x).exp());
    assert!((est.value - want).abs() < 3.0 * est.stderr);
}

#[test]
fn sampler_matches_cdf() {
    let zoo = [
        ChannelModel::gamma(2.5, 2.5).unwrap(),
        ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
        ChannelModel::gen_gamma(1.5, 0.5, 2.0).unwrap(),
        ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(),
        ChannelModel::pareto(2.0, 3.0, -0.5).unwrap(),
        ChannelModel::lognormal(0.2, 0.8).unwrap(),
    ];
    for (i, ch) in zoo.iter().enumerate() {
        let mut xs = ch.sample(&mut block_rng(17, i as u32, 0), 100_000);
        let d = ks_distance(&mut xs, |x| ch.cdf(x).unwrap().unwrap());
        assert!(d <= 0.01, "{}: KS {d}", ch.label());
    }
}

#[test]
fn hoyt_one_is_rayleigh_in_distribution() {
    let h = ChannelModel::hoyt(1.0).unwrap();
    let mut xs = h.sample(&mut block_rng(3, 0, 0), 100_000);
    let d = ks_distance(&mut xs, |x| 1.0 - (-x).exp());
    assert!(d <= 0.01, "KS {d}");
    assert_eq!(h.diversity(), ChannelModel::rayleigh().diversity());
    let (a, b) = (h.thorin().unwrap().unwrap(), ChannelModel::rayleigh().thorin().unwrap().unwrap());
    assert_eq!(a.atoms(), b.atoms());
}

#[test]
fn pdfs_integrate_to_one() {
    let zoo = [
        ChannelModel::nakagami(0.7).unwrap(),
        ChannelModel::hoyt(0.3).unwrap(),
        ChannelModel::rician(4.0).unwrap(),
        ChannelModel::lognormal(-0.5, 1.2).unwrap(),
        ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
        ChannelModel::gen_gamma(-1.5, -0.5, 1.0).unwrap(),
        ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(),
        ChannelModel::pareto(2.0, 2.0, 1.0).unwrap(),
    ];
    for ch in zoo {
        let q = integrate_positive(|x| ch.pdf(x).unwrap_or(0.0), QuadOptions::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "{}: {}", ch.label(), q.value);
    }
}

#[test]
fn canonical_density_form() {
    let zoo = [
        ChannelModel::nakagami(2.0).unwrap(),
        ChannelModel::hoyt(0.5).unwrap(),
        ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(),
        ChannelModel::pareto(1.0, 1.0, 1.25).unwrap(),
        ChannelModel::pareto(2.0, 1.0, -0.5).unwrap(),
    ];
    for ch in zoo {
        let d = ch.diversity().finite().unwrap();
        for x in [1e-3f64, 0.1, 1.0, 3.0, 20.0] {
            let lhs = x.powf(d - 1.0) * ch.h_function(x).unwrap().unwrap();
            let pdf = ch.pdf(x).unwrap();
            assert!((lhs - pdf).abs() <= 1e-9 * pdf, "{} x={x}", ch.label());
        }
    }
}

#[test]
fn point_values() {
    let g = ChannelModel::gamma(2.0, 2.0).unwrap();
    assert!((g.pdf(1.0).unwrap() - 4.0 * (-2f64).exp()).abs() < 1e-14);
    let gg = ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap();
    assert!((gg.pdf(1.0).unwrap() - 2.0 * (-1f64).exp()).abs() < 1e-14);
    assert!((ChannelModel::pareto(1.0, 1.0, 1.0).unwrap().pdf(1.0).unwrap() - 0.25).abs() < 1e-14);
    assert!((ChannelModel::nakagami(2.0).unwrap().lt_closed(2.0).unwrap() - 0.25).abs() < 1e-15);
    assert!((ChannelModel::rician(0.0).unwrap().lt_closed(1.0).unwrap() - 0.5).abs() < 1e-15);
    let n1 = ChannelModel::nakagami(1.0).unwrap();
    for x in [0.0, 0.5, 2.0] {
        assert!((n1.h_function(x).unwrap().unwrap() - (-x).exp()).abs() < 1e-15);
    }
    assert_eq!(ChannelModel::nakagami(2.0).unwrap().h0().unwrap(), Some(Extended::Finite(4.0)));
    assert!((gg.h0().unwrap().unwrap().to_f64() - 2.0).abs() < 1e-14);
}

#[test]
fn classification_examples() {
    assert_eq!(ChannelModel::rician(3.0).unwrap().class_tags(), ClassTags::ID_NOT_GGC);
    assert_eq!(ChannelModel::hoyt(0.5).unwrap().class_tags(), ClassTags::GGC_NOT_HCM);
    assert_eq!(ChannelModel::pareto(1.0, 1.0, 0.5).unwrap().class_tags(), ClassTags::HCM);
    assert_eq!(ChannelModel::pareto(1.0, 1.0, 1.25).unwrap().diversity(), Extended::Finite(1.25));
    assert_eq!(ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap().diversity(), Extended::Finite(2.0));
    let mu = ChannelModel::nakagami(3.0).unwrap().thorin().unwrap().unwrap();
    assert_eq!((mu.atoms()[0].rate, mu.atoms()[0].mass), (3.0, 3.0));
    let stable = ChannelModel::stable(0.25).unwrap().thorin().unwrap().unwrap();
    let dens = stable.density().unwrap();
    let want = 0.25 * (std::f64::consts::PI / 4.0).sin() / std::f64::consts::PI;
    for u in [0.1, 1.0, 7.0] {
        assert!((dens.eval(u) - want * u.powf(-0.75)).abs() < 1e-14);
    }
    let k0 = ChannelModel::rician(0.0).unwrap().levy().unwrap().unwrap();
    assert!((k0.density().eval(2.0) - (-2f64).exp() / 2.0).abs() < 1e-15);
    let k2 = ChannelModel::rician(2.0).unwrap().levy().unwrap().unwrap();
    assert!((k2.density().eval(0.5) - (-1.5f64).exp() * (6.0 + 2.0)).abs() < 1e-14);
    let n1 = ChannelModel::nakagami(1.0).unwrap().levy().unwrap().unwrap();
    assert!((n1.bernstein_eval(1.0).unwrap() - 2f64.ln()).abs() < 1e-9);
}

#[test]
fn sample_means() {
    let cases = [
        (ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap(), 0.886_226_925_452_758),
        (ChannelModel::hoyt(1.0).unwrap(), 1.0),
        (ChannelModel::rician(2.0).unwrap(), 1.0),
    ];
    for (i, (ch, mean)) in cases.into_iter().enumerate() {
        let est = average_model(&ch, 23, i as u32, 1_000_000, None, |x, _| x);
        assert!((est.value - mean).abs() < 3.0 * est.stderr, "{}: {}", ch.label(), est.value);
        assert!((ch.mean().unwrap() - mean).abs() < 1e-12);
    }
}

#[test]
fn normalization() {
    let n = ChannelModel::nakagami(2.5).unwrap();
    assert_eq!(n.normalize_unit_power().unwrap(), n);
    let gg = ChannelModel::gen_gamma(2.0, 2.0, 1.0).unwrap();
    let c = 1.0 / gg.mean().unwrap();
    assert!((c - 1.128_379_167_095_513).abs() < 1e-12);
    assert!((gg.normalize_unit_power().unwrap().mean().unwrap() - 1.0).abs() < 1e-12);
    let p = ChannelModel::pareto(1.0, 1.0, 1.25).unwrap();
    let m = integrate_positive(|x| x * p.pdf(x).unwrap(), QuadOptions::default()).unwrap().value;
    assert!((p.mean().unwrap() - m).abs() < 1e-7 * m);
    assert!((p.normalize_unit_power().unwrap().mean().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn rician_diversity_from_slope() {
    let ch = ChannelModel::rician(5.0).unwrap();
    assert_eq!(ch.diversity(), Extended::Finite(1.0));
    let cfg = SimConfig::new(8, 100_000, vec![30.0, 35.0, 40.0, 45.0, 50.0], Modulation::Dpsk).unwrap();
    let curve = simulate_ser(&ch, &cfg).unwrap();
    let d = estimate_diversity(&curve, (30.0, 50.0)).unwrap();
    assert!((d - 1.0).abs() < 0.1, "{d}");
}

#[test]
fn spec_errors_name_fields() {
    for (text, field) in [
        (r#"{"family":"nakagami","m":-1}"#, "m"),
        (r#"{"family":"hoyt","q":0}"#, "q"),
        (r#"{"family":"rician","K":-2}"#, "K"),
        (r#"{"family":"lognormal","mu":0,"sigma":0}"#, "sigma"),
        (r#"{"family":"stable","r":1.5}"#, "r"),
    ] {
        let e = parse_spec(text).unwrap_err().to_string();
        assert!(e.contains(field), "{text}: {e}");
    }
}

fn leaf() -> impl Strategy<Value = ChannelModel> {
    prop_oneof![
        (0.3f64..6.0).prop_map(|m| ChannelModel::nakagami(m).unwrap()),
        (0.05f64..1.0).prop_map(|q| ChannelModel::hoyt(q).unwrap()),
        (0.0f64..8.0).prop_map(|k| ChannelModel::rician(k).unwrap()),
        (-1.0f64..1.0, 0.1f64..2.0).prop_map(|(m, s)| ChannelModel::lognormal(m, s).unwrap()),
        (0.5f64..4.0, prop_oneof![-3.0f64..-0.1, 0.1f64..3.0], 0.2f64..3.0)
            .prop_map(|(e, r, c)| ChannelModel::gen_gamma(e * r.signum(), r, c).unwrap()),
        (0.5f64..3.0, 0.5f64..3.0, prop_oneof![-1.0f64..-0.1, 0.1f64..2.0])
            .prop_map(|(a, b, r)| ChannelModel::pareto(a, b, r).unwrap()),
        (0.05f64..1.0).prop_map(|r| ChannelModel::stable(r).unwrap()),
    ]
}

fn model() -> impl Strategy<Value = ChannelModel> {
    leaf().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(|b| ChannelModel::mrc(b).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ChannelModel::product(vec![a, b]).unwrap()),
            (inner, 0.1f64..10.0).prop_map(|(m, c)| m.scale(c).unwrap()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn class_tags_are_nested(ch in model()) {
        let t = ch.class_tags();
        prop_assert!(t.is_consistent(), "{:?} for {}", t, ch.label());
        if t.hcm == Membership::Yes {
            prop_assert_eq!(t.ggc, Membership::Yes);
        }
        if t.ggc == Membership::Yes {
            prop_assert_eq!(t.id, Membership::Yes);
        }
    }

    #[test]
    fn spec_round_trip(ch in model()) {
        let text = serde_json::to_string(&ch).unwrap();
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(back.channel(), &ch);
    }
}
