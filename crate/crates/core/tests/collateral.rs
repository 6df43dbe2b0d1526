use proptest::prelude::*;
use rehypo_core::collateral::multiplier_upper_bound;
use rehypo_core::numerics::{lu_solve, neumann_solve};
use rehypo_core::sweep::{multiplier_sweep, SweepAxis, UniformModel};
use rehypo_core::topology::Topology;
use rehypo_core::{
    equilibrium, flow_matrix, gen_closed_k_regular, gen_random_directed, network_from_edges,
    step_dynamics, BankParams, RehypoNetwork,
};

fn uniform(n: usize) -> BankParams {
    BankParams::homogeneous(n, 100.0, 0.9, 0.1).unwrap()
}

fn s_out_path(edges: &[(usize, usize)], steps: usize) -> Vec<f64> {
    let net = network_from_edges(5, edges).unwrap();
    step_dynamics(&net, &uniform(5), steps)
        .unwrap()
        .iter()
        .map(|x| x.iter().sum())
        .collect()
}

fn arb_instance() -> impl Strategy<Value = (RehypoNetwork, BankParams)> {
    (
        2usize..12,
        0.0f64..1.0,
        any::<u64>(),
        0.0f64..0.95,
        0.05f64..1.0,
    )
        .prop_flat_map(|(n, p, seed, theta_hi, h)| {
            let net = gen_random_directed(n, p, seed).unwrap();
            (
                Just(net),
                prop::collection::vec(0.0f64..500.0, n),
                prop::collection::vec(0.0f64..=theta_hi, n),
                Just(h),
            )
                .prop_map(|(net, a0, theta, h)| {
                    let params = BankParams::new(a0, theta, h).unwrap();
                    (net, params)
                })
        })
}

proptest! {
    #[test]
    fn conservation((net, params) in arb_instance()) {
        let eq = equilibrium(&net, &params).unwrap();
        for i in 0..net.n() {
            prop_assert!((eq.a_c[i] - eq.a_c_out[i] - eq.a_c_rm[i]).abs() <= 1e-10);
            let expect = f64::from(net.delta(i)) * params.theta[i] * eq.a_c[i];
            prop_assert!((eq.a_c_out[i] - expect).abs() <= 1e-9 * eq.a_c[i].max(1.0));
        }
    }

    #[test]
    fn multiplier_within_bounds((net, params) in arb_instance()) {
        let eq = equilibrium(&net, &params).unwrap();
        let max_theta = params.theta.iter().cloned().fold(0.0, f64::max);
        if let Some(m) = eq.multiplier {
            prop_assert!(m >= 1.0 - 1e-12);
            prop_assert!(m <= multiplier_upper_bound(params.h, max_theta) + 1e-9);
        } else {
            prop_assert_eq!(eq.s0_out, 0.0);
        }
    }

    #[test]
    fn step_dynamics_converge_to_equilibrium((net, params) in arb_instance()) {
        // (1-h) max θ ≤ 0.95 here, so 1000 steps leave < 0.95^1000 of the gap
        let traj = step_dynamics(&net, &params, 1000).unwrap();
        let eq = equilibrium(&net, &params).unwrap();
        let last = traj.last().unwrap();
        for (a, b) in last.iter().zip(&eq.a_c_out) {
            prop_assert!((a - b).abs() <= 1e-8 * b.max(1.0));
        }
        for w in traj.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                prop_assert!(b >= a);
            }
        }
    }

    #[test]
    fn neumann_agrees_with_lu((net, params) in arb_instance()) {
        let k = flow_matrix(&net, &params).unwrap().matrix().scaled(1.0 - params.h);
        let b = params.proprietary_outflow(&net);
        let direct = lu_solve(&k.identity_minus(), &b).unwrap().solution;
        let iter = neumann_solve(&k, &b, 1e-10, 100_000).unwrap().solution;
        for (a, c) in direct.iter().zip(&iter) {
            prop_assert!((a - c).abs() <= 1e-8 * c.abs().max(1.0));
        }
    }

    #[test]
    fn chords_on_a_cycle_change_nothing(n in 3usize..30, seed in any::<u64>(), frac in 0.0f64..1.0) {
        let cycle = gen_closed_k_regular(n, 1).unwrap();
        let all = gen_random_directed(n, frac, seed).unwrap();
        let chords: Vec<_> = all.edges().iter().copied().filter(|&(j, i)| !cycle.has_edge(j, i)).collect();
        let with = cycle.with_added_edges(&chords).unwrap();
        let a = equilibrium(&cycle, &uniform(n)).unwrap();
        let b = equilibrium(&with, &uniform(n)).unwrap();
        prop_assert!((a.s_out - b.s_out).abs() <= 1e-10 * a.s_out);
        prop_assert!((a.multiplier.unwrap() - b.multiplier.unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn cycle_length_leaves_the_path_unchanged() {
    let a = s_out_path(&[(0, 1), (1, 2), (4, 2), (2, 3), (3, 4)], 200);
    let b = s_out_path(&[(0, 1), (4, 1), (1, 2), (2, 3), (3, 4)], 200);
    let c = s_out_path(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 200);
    for t in 0..200 {
        assert!((a[t] - c[t]).abs() <= 1e-10);
        assert!((b[t] - c[t]).abs() <= 1e-10);
    }
}

#[test]
fn longer_cycles_give_more_collateral() {
    let a = s_out_path(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)], 200);
    let b = s_out_path(&[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)], 200);
    let c = s_out_path(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 200);
    assert_eq!(a[0], b[0]);
    for t in 1..200 {
        assert!(a[t] < b[t] && b[t] < c[t], "t={}", t + 1);
    }
}

#[test]
fn mean_multiplier_grows_with_density() {
    let model = UniformModel {
        a0: 100.0,
        theta: 0.9,
        h: 0.1,
    };
    let grid = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
    for topo in [
        Topology::Random { n: 50 },
        Topology::CorePeriphery {
            n: 50,
            n_core: 5,
            k_per: 1,
        },
    ] {
        let grid: Vec<f64> = if matches!(topo, Topology::Random { .. }) {
            grid.to_vec()
        } else {
            vec![0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0]
        };
        let rows = multiplier_sweep(&topo, SweepAxis::Parameter, &grid, &model, 200, 17).unwrap();
        for w in rows.windows(2) {
            let (a, b) = (w[0].mean_m.unwrap(), w[1].mean_m.unwrap());
            assert!(b >= a - 1e-12, "{}: {a} then {b}", topo.label());
        }
    }
}
