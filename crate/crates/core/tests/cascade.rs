use proptest::prelude::*;
use rehypo_core::cascade::{density_sweep_experiment, UniformVarModel};
use rehypo_core::sweep::SweepAxis;
use rehypo_core::topology::Topology;
use rehypo_core::{
    gen_core_periphery, gen_random_directed, run_cascade, AttackMode, RehypoNetwork, ShockSpec,
    VarConfig,
};

fn arb_network() -> impl Strategy<Value = RehypoNetwork> {
    prop_oneof![
        (4usize..25, 0.05f64..1.0, any::<u64>())
            .prop_map(|(n, p, s)| gen_random_directed(n, p, s).unwrap()),
        (4usize..25, 0.0f64..1.0, any::<u64>())
            .prop_map(|(n, p, s)| gen_core_periphery(n, 3, p, 1, s).unwrap()),
    ]
}

fn cfg(n: usize) -> VarConfig {
    VarConfig::from_offsets(0.1, vec![1.0; n]).unwrap()
}

fn ratio(net: &RehypoNetwork, fraction: f64, magnitude: f64, mode: AttackMode) -> f64 {
    let spec = ShockSpec {
        fraction,
        magnitude,
        mode,
    };
    run_cascade(net, &vec![100.0; net.n()], &cfg(net.n()), &spec)
        .unwrap()
        .s_out_ratio
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ratio_at_most_one(net in arb_network(), f in 0.0f64..=1.0, mag in 0.0f64..3.0, seed in any::<u64>()) {
        for mode in [AttackMode::Random { seed }, AttackMode::Targeted] {
            let spec = ShockSpec { fraction: f, magnitude: mag, mode };
            let out = run_cascade(&net, &vec![100.0; net.n()], &cfg(net.n()), &spec).unwrap();
            prop_assert!(out.s_out_ratio <= 1.0 + 1e-12);
            prop_assert!(out.s_out_ratio >= 0.0);
            prop_assert_eq!(out.shocked.len(), spec.shocked_count(net.n()));
            let hits_pledger = mag > 0.0 && out.shocked.iter().any(|&i| net.is_pledging(i));
            if hits_pledger {
                prop_assert!(out.s_out_ratio < 1.0);
            }
        }
    }

    #[test]
    fn larger_shocks_hurt_more(net in arb_network(), f in 0.0f64..=1.0, a in 0.0f64..2.0, b in 0.0f64..2.0, seed in any::<u64>()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mode = AttackMode::Random { seed };
        prop_assert!(ratio(&net, f, hi, mode) <= ratio(&net, f, lo, mode) + 1e-12);
    }

    #[test]
    fn more_targets_hurt_more(net in arb_network(), f1 in 0.0f64..=1.0, f2 in 0.0f64..=1.0) {
        // targeted sets are prefixes of one ranking, so they nest
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let t = AttackMode::Targeted;
        prop_assert!(ratio(&net, hi, 0.5, t) <= ratio(&net, lo, 0.5, t) + 1e-12);
    }
}

#[test]
fn sweep_shares_graphs_across_modes() {
    let t = Topology::CorePeriphery {
        n: 30,
        n_core: 5,
        k_per: 1,
    };
    let model = UniformVarModel {
        a0: 100.0,
        h: 0.1,
        c0: 1.0,
    };
    let grid = [0.3, 0.7];
    let run = |mode| {
        let spec = ShockSpec {
            fraction: 0.2,
            magnitude: 0.5,
            mode,
        };
        density_sweep_experiment(&t, SweepAxis::Parameter, &grid, &model, &spec, 20, 8).unwrap()
    };
    let random = run(AttackMode::Random { seed: 1 });
    let targeted = run(AttackMode::Targeted);
    for (r, g) in random.iter().zip(&targeted) {
        assert_eq!(r.density, g.density);
        assert_eq!(r.mean_pre_ratio, g.mean_pre_ratio);
    }
}

#[test]
fn zero_shock_sweep_is_flat_at_one() {
    let model = UniformVarModel {
        a0: 100.0,
        h: 0.1,
        c0: 1.0,
    };
    let spec = ShockSpec {
        fraction: 0.2,
        magnitude: 0.0,
        mode: AttackMode::Targeted,
    };
    for t in [Topology::Random { n: 20 }, Topology::KRegular { n: 20 }] {
        let rows =
            density_sweep_experiment(&t, SweepAxis::Density, &[0.2, 0.5], &model, &spec, 5, 2)
                .unwrap();
        for r in rows {
            assert_eq!(r.mean_post_pre, Some(1.0));
        }
    }
}

#[test]
fn infeasible_samples_are_counted() {
    // offsets far above what boxes of 100 can cover
    let model = UniformVarModel {
        a0: 100.0,
        h: 0.1,
        c0: 500.0,
    };
    let spec = ShockSpec {
        fraction: 0.2,
        magnitude: 0.5,
        mode: AttackMode::Random { seed: 0 },
    };
    let t = Topology::Random { n: 10 };
    let rows =
        density_sweep_experiment(&t, SweepAxis::Parameter, &[0.5], &model, &spec, 6, 1).unwrap();
    assert_eq!(rows[0].infeasible, 6);
    assert!(rows[0].mean_post_pre.is_none());
}
