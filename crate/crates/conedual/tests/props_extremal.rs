//! Randomized properties of the extremal window constants: primal/dual
//! agreement, certificate validity, reductions between the variants, and
//! an LP-free grid oracle on small instances.

mod common;

use common::*;
use conedual::cones;
use conedual::extremal::{self, DUALITY_GAP_TOL};
use conedual::group::{GroupSpec, Window};
use conedual::spectral::{self, GFunc};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn group_at(i: usize) -> GroupSpec {
    let groups = groups_up_to(16);
    groups[i % groups.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // two independent LPs, one optimum
    #[test]
    fn primal_and_dual_sides_agree(gi in 0usize..24, seed in any::<u64>()) {
        let group = group_at(gi);
        let mut r = rng(seed);
        let u = random_symmetric_window(&group, &mut r, 0.4);
        let v = random_window(&group, &mut r, 0.4);
        let report = extremal::duality_check(&u, &v, TOL).unwrap();
        prop_assert!(report.gap <= DUALITY_GAP_TOL);
    }

    // the emitted certificates satisfy their defining constraints
    #[test]
    fn certificates_verify(gi in 0usize..24, seed in any::<u64>()) {
        let group = group_at(gi);
        let mut r = rng(seed);
        let u = random_symmetric_window(&group, &mut r, 0.4);
        let v = random_window(&group, &mut r, 0.4);
        let res = extremal::s_value(&u, &v, TOL).unwrap();
        let f = &res.optimizer;
        // primal: doubly positive, unit U-mass, objective = V-mass
        prop_assert!(cones::is_doubly_positive(f, 1e-7));
        let u_mass: f64 = u.members().map(|x| f.value(x).re).sum();
        let v_mass: f64 = v.members().map(|x| f.value(x).re).sum();
        prop_assert!((u_mass - 1.0).abs() <= 1e-8);
        prop_assert!((v_mass - res.value).abs() <= 1e-8);
        // dual: g positive definite and dominated by C*chi_U - chi_V - chi_{-V}
        prop_assert!(cones::is_pd_fourier(&res.dual_g, 1e-7 * (1.0 + res.dual_g.sup_norm())));
        for x in 0..group.order() {
            let h = res.dual_c * f64::from(u.contains(x))
                - f64::from(v.contains(x))
                - f64::from(v.contains(group.negate_index(x)));
            prop_assert!(res.dual_g.value(x).re <= h + 1e-7);
        }
        // the optimizer is positive definite by the Gram route as well:
        // on finite groups all admissible classes coincide
        prop_assert!(cones::is_pd_gram(f, 1e-6).unwrap());
    }

    // enlarging V cannot shrink the supremum
    #[test]
    fn monotone_in_v(gi in 0usize..24, seed in any::<u64>()) {
        let group = group_at(gi);
        let mut r = rng(seed);
        let u = random_symmetric_window(&group, &mut r, 0.4);
        let v = random_window(&group, &mut r, 0.3);
        let mut bigger: Vec<usize> = v.members().collect();
        for x in 0..group.order() {
            if r.random_bool(0.3) {
                bigger.push(x);
            }
        }
        let v_big = Window::new(group.clone(), bigger).unwrap();
        let small = extremal::s_value(&u, &v, TOL).unwrap().value;
        let big = extremal::s_value(&u, &v_big, TOL).unwrap().value;
        prop_assert!(small <= big + 1e-9);
    }

    // Q is S against the k-fold sumset; T is S against a translate
    #[test]
    fn q_and_t_reduce_to_s(gi in 0usize..24, seed in any::<u64>(), k in 1usize..4) {
        let group = group_at(gi);
        let mut r = rng(seed);
        let u = random_symmetric_window(&group, &mut r, 0.4);
        let q = extremal::q_value(&u, k, TOL).unwrap();
        let s = extremal::s_value(&u, &u.sumset(k).unwrap(), TOL).unwrap();
        prop_assert!((q.value - s.value).abs() <= 1e-9);

        let shift_idx = r.random_range(0..group.order());
        let shift = group.index_to_elem(shift_idx).unwrap();
        let t = extremal::t_value(&u, &shift, TOL).unwrap();
        let translated = u.translate(&shift).unwrap();
        let s2 = extremal::s_value(&u, &translated, TOL).unwrap();
        prop_assert!((t.value - s2.value).abs() <= 1e-9);
    }

    // T(U, g) = T(U, -g): reflecting the optimizer swaps the two problems
    #[test]
    fn t_is_reflection_symmetric(gi in 0usize..24, seed in any::<u64>()) {
        let group = group_at(gi);
        let mut r = rng(seed);
        let u = random_symmetric_window(&group, &mut r, 0.4);
        let shift_idx = r.random_range(0..group.order());
        let plus = group.index_to_elem(shift_idx).unwrap();
        let minus = group.index_to_elem(group.negate_index(shift_idx)).unwrap();
        let tp = extremal::t_value(&u, &plus, TOL).unwrap();
        let tm = extremal::t_value(&u, &minus, TOL).unwrap();
        prop_assert!((tp.value - tm.value).abs() <= 1e-8);
    }
}

/// LP-free oracle: sample the doubly positive cone by dense grid /
/// random search and compare the best ratio found against the LP optimum.
/// The sampled value can only fall short, and on these tiny instances it
/// comes close.
#[test]
fn grid_oracle_brackets_lp_value() {
    let cases: &[(usize, &[usize], &[usize])] = &[
        (4, &[0, 1, 3], &[2]),
        (5, &[0, 1, 4], &[2, 3]),
        (6, &[0, 1, 5], &[3]),
    ];
    let mut r = rng(2024);
    for &(n, us, vs) in cases {
        let group = GroupSpec::cyclic(n).unwrap();
        let u = Window::new(group.clone(), us.iter().copied()).unwrap();
        let v = Window::new(group.clone(), vs.iter().copied()).unwrap();
        let lp = extremal::s_value(&u, &v, TOL).unwrap().value;

        // the supremum is attained at an even function, so sample even
        // nonnegative spectra parametrized per reflection orbit, with the
        // zero frequency normalized to 1 (any nonzero nonnegative f has
        // positive total mass) and sparsity mixed in to land near vertices
        let orbits = group.reflection_orbits();
        let zero_orbit = orbits.orbit_of(0);
        let mut best = 0.0f64;
        for _ in 0..120_000 {
            let coeffs: Vec<f64> = (0..orbits.count())
                .map(|o| {
                    if o == zero_orbit {
                        1.0
                    } else if r.random_bool(0.4) {
                        0.0
                    } else {
                        r.random_range(0.0..4.0)
                    }
                })
                .collect();
            let spectrum = GFunc::from_fn(group.clone(), |g| {
                Complex64::new(coeffs[orbits.orbit_of(g)], 0.0)
            });
            let f = spectral::idft(&spectrum);
            if !cones::is_nonneg(&f, 1e-12).unwrap_or(false) {
                continue;
            }
            let u_mass: f64 = u.members().map(|x| f.value(x).re).sum();
            if u_mass < 1e-9 {
                continue;
            }
            let v_mass: f64 = v.members().map(|x| f.value(x).re).sum();
            best = best.max(v_mass / u_mass);
        }
        assert!(
            best <= lp + 1e-7,
            "sampled ratio {best} exceeds LP optimum {lp} on Z_{n}"
        );
        assert!(
            best >= 0.85 * lp,
            "sampling never came near the optimum on Z_{n}: {best} vs {lp}"
        );
    }
}
