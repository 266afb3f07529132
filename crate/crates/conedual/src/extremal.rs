//! Extremal mass-concentration constants over the doubly positive cone, the
//! dual window constant via majorized positive definite weights, and the
//! closed-form bound for the continuous line problem.
//!
//! `S(U, V)` is the largest fraction of `V`-mass a doubly positive function
//! can carry per unit of `U`-mass. The primal LP maximizes `sum_V f` at
//! `sum_U f = 1` over even nonnegative `f` with nonnegative spectrum (even
//! is no loss: spectra of real functions are Hermitian, so the even part of
//! a feasible `f` is feasible with the same masses). The dual constant
//! `sigma(U, V)` is half the least `C` for which `C chi_U - chi_V -
//! chi_{-V}` majorizes a positive definite weight `g`; both solves are
//! independent, and their agreement is exact LP duality.

use crate::group::{GroupSpec, ReflectionOrbits, Window};
use crate::lp::{self, LpProblem, LpStatus, RowOp, Sense, SolveOptions};
use crate::spectral::{self, GFunc};
use num_complex::Complex64;
use thiserror::Error;

/// Gap tolerance for the two-sided duality check.
pub const DUALITY_GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtremalError {
    #[error("bad window: {0}")]
    BadWindow(String),
    #[error("windows live on different groups")]
    GroupMismatch,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("linear programming failed: {0}")]
    Solver(#[from] lp::LpError),
    #[error("duality gap {gap:.3e} exceeds {DUALITY_GAP_TOL:.0e}: primal {s}, dual {sigma}")]
    DualityGap { s: f64, sigma: f64, gap: f64 },
}

/// Primal optimum with its dual certificate.
///
/// `optimizer` is doubly positive with unit `U`-mass and `V`-mass `value`;
/// `dual_g` is positive definite with `dual_g <= dual_c*chi_U - chi_V -
/// chi_{-V}` pointwise; `gap = |dual_c/2 - value|` vanishes up to solver
/// tolerance.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    pub value: f64,
    pub optimizer: GFunc,
    pub dual_c: f64,
    pub dual_g: GFunc,
    pub gap: f64,
}

/// Both sides of the window duality, solved independently.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub s: ExtremalResult,
    pub sigma: f64,
    pub sigma_c: f64,
    pub sigma_g: GFunc,
    pub gap: f64,
}

fn validate_base_window(u: &Window) -> Result<(), ExtremalError> {
    if u.is_empty() || !u.contains_zero() {
        return Err(ExtremalError::BadWindow("U must contain 0".into()));
    }
    if !u.is_symmetric() {
        return Err(ExtremalError::BadWindow("U must be symmetric".into()));
    }
    Ok(())
}

fn orbit_counts(window: &Window, orbits: &ReflectionOrbits) -> Vec<f64> {
    let mut counts = vec![0.0; orbits.count()];
    for x in window.members() {
        counts[orbits.orbit_of(x)] += 1.0;
    }
    counts
}

/// `S(U, V) = sup { sum_V f / sum_U f }` over doubly positive `f != 0`,
/// with the dual weight extracted from the same solve.
pub fn s_value(u: &Window, v: &Window, tol: f64) -> Result<ExtremalResult, ExtremalError> {
    validate_base_window(u)?;
    if u.group() != v.group() {
        return Err(ExtremalError::GroupMismatch);
    }
    if v.is_empty() {
        return Err(ExtremalError::BadWindow("V must be nonempty".into()));
    }
    let group = u.group().clone();
    let orbits = group.reflection_orbits();
    let k = orbits.count();
    let order = group.order() as f64;

    let c_u = orbit_counts(u, &orbits);
    let c_v = orbit_counts(v, &orbits);

    let mut p = LpProblem::new(Sense::Maximize, k);
    for (r, &cv) in c_v.iter().enumerate() {
        p.set_objective(r, cv);
    }
    p.add_row(RowOp::Eq, c_u.clone(), 1.0);
    // Spectrum nonnegativity, one row per character orbit, written as
    // -dft(f)(gamma) <= 0 so the slack starts basic.
    for oi in 0..k {
        let gamma = orbits.rep(oi);
        let coeffs: Vec<f64> = (0..k)
            .map(|r| -(orbits.size(r) as f64) * group.character(gamma, orbits.rep(r)).re)
            .collect();
        p.add_row(RowOp::Le, coeffs, 0.0);
    }

    let options = SolveOptions {
        feas_tol: tol,
        ..SolveOptions::default()
    };
    let sol = lp::solve_verified(&p, &options)?;
    if sol.status != LpStatus::Optimal {
        return Err(ExtremalError::Solver(lp::LpError::Numerical(format!(
            "expected an optimum, got {:?}",
            sol.status
        ))));
    }

    let optimizer = GFunc::from_fn(group.clone(), |i| {
        Complex64::new(sol.x[orbits.orbit_of(i)].max(0.0), 0.0)
    });
    let dual_c = 2.0 * sol.duals[0];
    // Spectrum-row multipliers scale into the dual weight's transform.
    let spectrum = GFunc::from_fn(group, |g| {
        let oi = orbits.orbit_of(g);
        let w_gamma = orbits.size(oi) as f64;
        Complex64::new((2.0 * order / w_gamma) * sol.duals[1 + oi].max(0.0), 0.0)
    });
    let dual_g = spectral::idft(&spectrum);
    let value = sol.objective;
    Ok(ExtremalResult {
        value,
        optimizer,
        dual_c,
        dual_g,
        gap: (dual_c / 2.0 - value).abs(),
    })
}

/// `Q(U, k) = S(U, U + ... + U)` with `k` summands.
pub fn q_value(u: &Window, k: usize, tol: f64) -> Result<ExtremalResult, ExtremalError> {
    if k == 0 {
        return Err(ExtremalError::BadParameter("k must be at least 1".into()));
    }
    let v = u
        .sumset(k)
        .map_err(|e| ExtremalError::BadWindow(e.to_string()))?;
    s_value(u, &v, tol)
}

/// `T(U, g) = S(U, U + g)`.
pub fn t_value(u: &Window, g: &[usize], tol: f64) -> Result<ExtremalResult, ExtremalError> {
    let v = u
        .translate(g)
        .map_err(|e| ExtremalError::BadWindow(e.to_string()))?;
    s_value(u, &v, tol)
}

/// Least `C` such that `C chi_U - chi_V - chi_{-V}` majorizes a positive
/// definite weight, together with that weight. The weight is parameterized
/// by its (nonnegative, reflection-symmetric) spectrum, so positive
/// definiteness holds by construction.
pub fn sigma_value(u: &Window, v: &Window, tol: f64) -> Result<(f64, GFunc), ExtremalError> {
    validate_base_window(u)?;
    if u.group() != v.group() {
        return Err(ExtremalError::GroupMismatch);
    }
    let group = u.group().clone();
    let orbits = group.reflection_orbits();
    let k = orbits.count();
    let order = group.order() as f64;

    let c_var = k;
    let mut p = LpProblem::new(Sense::Minimize, k + 1);
    p.set_bounds(c_var, None, None);
    p.set_objective(c_var, 1.0);
    for ri in 0..k {
        let r = orbits.rep(ri);
        let mut coeffs: Vec<f64> = (0..k)
            .map(|oi| {
                let gamma = orbits.rep(oi);
                let w_gamma = orbits.size(oi) as f64;
                (w_gamma / order) * group.character(gamma, r).re
            })
            .collect();
        coeffs.push(-chi(u, r));
        let rhs = -(chi(v, r) + chi(v, group.negate_index(r)));
        p.add_row(RowOp::Le, coeffs, rhs);
    }

    let options = SolveOptions {
        feas_tol: tol,
        ..SolveOptions::default()
    };
    let sol = lp::solve_verified(&p, &options)?;
    if sol.status != LpStatus::Optimal {
        return Err(ExtremalError::Solver(lp::LpError::Numerical(format!(
            "expected an optimum, got {:?}",
            sol.status
        ))));
    }
    let spectrum = GFunc::from_fn(group, |g| {
        Complex64::new(sol.x[orbits.orbit_of(g)].max(0.0), 0.0)
    });
    Ok((sol.objective, spectral::idft(&spectrum)))
}

fn chi(w: &Window, x: usize) -> f64 {
    if w.contains(x) {
        1.0
    } else {
        0.0
    }
}

/// Solve both sides independently and compare; errs when the gap exceeds
/// [`DUALITY_GAP_TOL`].
pub fn duality_check(u: &Window, v: &Window, tol: f64) -> Result<DualityReport, ExtremalError> {
    let s = s_value(u, v, tol)?;
    let (sigma_c, sigma_g) = sigma_value(u, v, tol)?;
    let sigma = sigma_c / 2.0;
    let gap = (sigma - s.value).abs();
    if gap > DUALITY_GAP_TOL {
        return Err(ExtremalError::DualityGap {
            s: s.value,
            sigma,
            gap,
        });
    }
    Ok(DualityReport {
        s,
        sigma,
        sigma_c,
        sigma_g,
        gap,
    })
}

/// Closed-form bound for the continuous concentration problem on the line:
/// `([2T]+1)([2T]+2) / (2([2T]+1-T))`.
pub fn logan_bound(t: f64) -> Result<f64, ExtremalError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ExtremalError::BadParameter(format!(
            "T must be positive and finite, got {t}"
        )));
    }
    let m = (2.0 * t).floor();
    let denom = m + 1.0 - t;
    if denom <= 0.0 {
        return Err(ExtremalError::BadParameter(format!(
            "degenerate denominator at T = {t}"
        )));
    }
    Ok(0.5 * (m + 1.0) * (m + 2.0) / denom)
}

/// Embed the line problem `S([-1,1], [-T,T])` into a cyclic group of order
/// `n` covering `[-half_width, half_width)` at spacing `2*half_width/n`.
pub fn discretize_line(
    t: f64,
    half_width: f64,
    n: usize,
) -> Result<(GroupSpec, Window, Window), ExtremalError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(ExtremalError::BadParameter(format!(
            "T must be positive and finite, got {t}"
        )));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(ExtremalError::BadParameter(
            "half_width must be positive and finite".into(),
        ));
    }
    if n < 2 || n % 2 != 0 {
        return Err(ExtremalError::BadParameter(format!(
            "n must be even and at least 2, got {n}"
        )));
    }
    let group = GroupSpec::cyclic(n).map_err(|e| ExtremalError::BadParameter(e.to_string()))?;
    let h = 2.0 * half_width / n as f64;
    let half = (n / 2) as i64;
    let mut u = Vec::new();
    let mut v = Vec::new();
    for x in 0..n {
        let signed = if (x as i64) < half {
            x as i64
        } else {
            x as i64 - n as i64
        };
        let coord = (signed as f64 * h).abs();
        if coord <= 1.0 + 1e-12 {
            u.push(x);
        }
        if coord <= t + 1e-12 {
            v.push(x);
        }
    }
    if u.is_empty() || v.is_empty() {
        return Err(ExtremalError::BadWindow(
            "discretized window came out empty".into(),
        ));
    }
    let u = Window::new(group.clone(), u).map_err(|e| ExtremalError::BadWindow(e.to_string()))?;
    let v = Window::new(group.clone(), v).map_err(|e| ExtremalError::BadWindow(e.to_string()))?;
    Ok((group, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones;

    const TOL: f64 = 1e-9;

    fn window(n: usize, members: &[usize]) -> Window {
        Window::new(GroupSpec::cyclic(n).unwrap(), members.iter().copied()).unwrap()
    }

    #[test]
    fn two_point_instance_solved_exactly() {
        let u = window(2, &[0, 1]);
        let v = window(2, &[1]);
        let r = s_value(&u, &v, TOL).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
        assert!((r.optimizer.value(0).re - 0.5).abs() < 1e-9);
        assert!((r.optimizer.value(1).re - 0.5).abs() < 1e-9);
        assert!((r.dual_c - 1.0).abs() < 1e-9);
        assert!((r.dual_g.value(0).re - 1.0).abs() < 1e-9);
        assert!((r.dual_g.value(1).re + 1.0).abs() < 1e-9);
        assert!(r.gap <= 1e-9);

        let (c, g) = sigma_value(&u, &v, TOL).unwrap();
        assert!((c - 1.0).abs() < 1e-9);
        assert!((g.value(0).re - 1.0).abs() < 1e-9);
        assert!((g.value(1).re + 1.0).abs() < 1e-9);

        let report = duality_check(&u, &v, TOL).unwrap();
        assert!(report.gap < 1e-10);
    }

    #[test]
    fn value_is_one_when_v_equals_u() {
        let u = window(6, &[0, 1, 5]);
        let r = s_value(&u, &u, TOL).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        let report = duality_check(&u, &u, TOL).unwrap();
        assert!((report.sigma - 1.0).abs() < 1e-7);
    }

    #[test]
    fn result_invariants_hold_on_an_asymmetric_target() {
        let u = window(7, &[0, 1, 6]);
        let v = window(7, &[2, 3]);
        let r = s_value(&u, &v, TOL).unwrap();
        assert!(cones::is_doubly_positive(&r.optimizer, 1e-8));
        let u_mass: f64 = u.members().map(|x| r.optimizer.value(x).re).sum();
        assert!((u_mass - 1.0).abs() < 1e-9);
        let v_mass: f64 = v.members().map(|x| r.optimizer.value(x).re).sum();
        assert!((v_mass - r.value).abs() < 1e-9);
        assert!(cones::is_pd_fourier(&r.dual_g, 1e-7));
        // dual weight majorized by the window combination
        let group = r.dual_g.group().clone();
        for x in 0..group.order() {
            let h = r.dual_c * chi(&u, x) - chi(&v, x) - chi(&v, group.negate_index(x));
            assert!(r.dual_g.value(x).re <= h + 1e-8);
        }
        assert!(r.gap <= 1e-7);
        // complementary slackness of the majorization against the optimizer
        let rho: f64 = (0..group.order())
            .map(|x| {
                let h = r.dual_c * chi(&u, x)
                    - chi(&v, x)
                    - chi(&v, group.negate_index(x))
                    - r.dual_g.value(x).re;
                h * r.optimizer.value(x).re
            })
            .sum();
        assert!(rho >= -1e-9);
    }

    #[test]
    fn sigma_of_empty_target_is_zero() {
        let u = window(5, &[0, 1, 4]);
        let v = Window::new(GroupSpec::cyclic(5).unwrap(), std::iter::empty::<usize>()).unwrap();
        let (c, g) = sigma_value(&u, &v, TOL).unwrap();
        assert!(c.abs() < 1e-9);
        assert!(g.sup_norm() < 1e-9);
    }

    #[test]
    fn window_validation_errors() {
        let u = window(5, &[0, 1]); // not symmetric
        let v = window(5, &[2]);
        assert!(matches!(
            s_value(&u, &v, TOL),
            Err(ExtremalError::BadWindow(_))
        ));
        let u = window(5, &[1, 4]); // no zero
        assert!(matches!(
            s_value(&u, &v, TOL),
            Err(ExtremalError::BadWindow(_))
        ));
        let u = window(5, &[0]);
        let v_other = window(7, &[1]);
        assert!(matches!(
            s_value(&u, &v_other, TOL),
            Err(ExtremalError::GroupMismatch)
        ));
    }

    #[test]
    fn dilate_reduces_to_sumset_target() {
        let u = window(8, &[0, 1, 7]);
        let q = q_value(&u, 2, TOL).unwrap();
        let direct = s_value(&u, &u.sumset(2).unwrap(), TOL).unwrap();
        assert!((q.value - direct.value).abs() < 1e-10);
        assert!((q_value(&u, 1, TOL).unwrap().value - 1.0).abs() < 1e-9);
        assert!(matches!(
            q_value(&u, 0, TOL),
            Err(ExtremalError::BadParameter(_))
        ));
    }

    #[test]
    fn dilates_are_monotone_in_k() {
        let u = window(12, &[0, 1, 11]);
        let mut prev = 0.0;
        for k in 1..=3 {
            let val = q_value(&u, k, TOL).unwrap().value;
            assert!(val >= prev - 1e-9, "k = {k}: {val} < {prev}");
            prev = val;
        }
    }

    #[test]
    fn translate_target_is_reflection_invariant() {
        let u = window(9, &[0, 1, 8]);
        let plus = t_value(&u, &[2], TOL).unwrap();
        let minus = t_value(&u, &[7], TOL).unwrap();
        assert!((plus.value - minus.value).abs() < 1e-9);
        assert!((t_value(&u, &[0], TOL).unwrap().value - 1.0).abs() < 1e-9);
        // constant one function gives the overlap ratio as a lower bound
        let overlap = u
            .translate(&[2])
            .unwrap()
            .members()
            .filter(|&x| u.contains(x))
            .count() as f64;
        assert!(plus.value >= overlap / u.len() as f64 - 1e-9);
    }

    #[test]
    fn target_monotone_under_inclusion() {
        let u = window(10, &[0, 1, 9]);
        let small = s_value(&u, &window(10, &[3]), TOL).unwrap().value;
        let large = s_value(&u, &window(10, &[3, 4]), TOL).unwrap().value;
        assert!(small <= large + 1e-9);
    }

    #[test]
    fn logan_bound_pinned_values() {
        assert_eq!(logan_bound(1.0).unwrap(), 3.0);
        assert_eq!(logan_bound(2.0).unwrap(), 5.0);
        assert_eq!(logan_bound(0.5).unwrap(), 2.0);
        assert!(matches!(
            logan_bound(0.0),
            Err(ExtremalError::BadParameter(_))
        ));
        assert!(matches!(
            logan_bound(-1.0),
            Err(ExtremalError::BadParameter(_))
        ));
    }

    #[test]
    fn discretized_line_with_matching_windows() {
        let (_, u, v) = discretize_line(1.0, 4.0, 32).unwrap();
        assert_eq!(u.member_set(), v.member_set());
        assert!(u.is_symmetric());
        assert!(u.contains_zero());
        // spacing 1/4: lattice points within |x/4| <= 1 are -4..4
        assert_eq!(u.len(), 9);
        let r = s_value(&u, &v, TOL).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn discretization_parameter_errors() {
        assert!(matches!(
            discretize_line(1.0, 4.0, 31),
            Err(ExtremalError::BadParameter(_))
        ));
        assert!(matches!(
            discretize_line(0.0, 4.0, 32),
            Err(ExtremalError::BadParameter(_))
        ));
        assert!(matches!(
            discretize_line(1.0, -4.0, 32),
            Err(ExtremalError::BadParameter(_))
        ));
    }
}
