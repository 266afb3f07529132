//! Shared generators for the integration suites: seeded RNG, group
//! presentation lists, and random functions landing in specific cones.

#![allow(dead_code)]

use conedual::group::{GroupSpec, Window};
use conedual::spectral::{self, GFunc};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every abelian group of order 2..=max_order, one presentation per
/// isomorphism class (invariant factor form).
pub fn groups_up_to(max_order: usize) -> Vec<GroupSpec> {
    let presentations: &[&[usize]] = &[
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[11],
        &[12],
        &[2, 6],
        &[13],
        &[14],
        &[15],
        &[16],
        &[2, 8],
        &[4, 4],
        &[2, 2, 4],
        &[2, 2, 2, 2],
    ];
    presentations
        .iter()
        .filter(|p| p.iter().product::<usize>() <= max_order)
        .map(|p| GroupSpec::new(p.to_vec()).unwrap())
        .collect()
}

pub fn random_gfunc(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    GFunc::from_fn(group.clone(), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_real_gfunc(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    GFunc::from_fn(group.clone(), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), 0.0)
    })
}

/// Positive definite: inverse transform of a nonnegative real spectrum.
pub fn random_pd(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    let spectrum = GFunc::from_fn(group.clone(), |_| {
        Complex64::new(rng.random_range(0.0..2.0), 0.0)
    });
    spectral::idft(&spectrum)
}

/// Doubly positive: autocorrelation of a nonnegative real function, which
/// is nonnegative pointwise and has spectrum |g_hat|^2.
pub fn random_doubly_positive(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    let g = GFunc::from_fn(group.clone(), |_| {
        Complex64::new(rng.random_range(0.0..1.0), 0.0)
    });
    spectral::convolve(&g, &spectral::converse(&g)).unwrap()
}

/// Real positive definite (not necessarily nonnegative): autocorrelation
/// of a random real function.
pub fn random_real_pd(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    let g = random_real_gfunc(group, rng);
    spectral::convolve(&g, &spectral::converse(&g)).unwrap()
}

pub fn random_odd(group: &GroupSpec, rng: &mut ChaCha8Rng) -> GFunc {
    let u = random_real_gfunc(group, rng);
    let (_, odd) = spectral::even_odd_split(&u);
    odd
}

/// A certified member of the decomposition cone: nonnegative + real
/// positive type + odd, with the summands returned for reference.
pub fn random_member(group: &GroupSpec, rng: &mut ChaCha8Rng) -> (GFunc, GFunc, GFunc, GFunc) {
    let omega = GFunc::from_fn(group.clone(), |_| {
        Complex64::new(rng.random_range(0.0..1.0), 0.0)
    });
    let tau = random_real_pd(group, rng);
    let odd = random_odd(group, rng);
    let rho = omega.add(&tau).unwrap().add(&odd).unwrap();
    (rho, omega, tau, odd)
}

/// A random symmetric window containing 0.
pub fn random_symmetric_window(group: &GroupSpec, rng: &mut ChaCha8Rng, p: f64) -> Window {
    let mut members = vec![0usize];
    for x in 1..group.order() {
        if rng.random_bool(p) {
            members.push(x);
            members.push(group.negate_index(x));
        }
    }
    Window::new(group.clone(), members).unwrap()
}

/// A random nonempty window (no structure required).
pub fn random_window(group: &GroupSpec, rng: &mut ChaCha8Rng, p: f64) -> Window {
    loop {
        let members: Vec<usize> = (0..group.order()).filter(|_| rng.random_bool(p)).collect();
        if !members.is_empty() {
            return Window::new(group.clone(), members).unwrap();
        }
    }
}

pub fn max_abs_diff(a: &GFunc, b: &GFunc) -> f64 {
    a.sup_distance(b).unwrap()
}
