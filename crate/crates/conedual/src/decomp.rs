//! Membership in the dual cone of the doubly positive functions, decided by
//! linear programming, with machine-checkable answers in both directions.
//!
//! A function `rho` pairs nonnegatively against every doubly positive `f`
//! exactly when its even part splits as `omega + tau` with `omega >= 0`
//! pointwise and `tau` of positive type; the odd part is invisible to the
//! pairing and passes through untouched. Membership returns such a split,
//! non-membership returns a doubly positive witness `f` with
//! `sum rho . f < 0`. Either answer can be re-checked without trusting the
//! solver.
//!
//! The LP runs over one variable per reflection orbit (the even part is
//! constant on orbits), with each equality row scaled by its orbit size so
//! that an infeasibility ray lifts directly to the witness: the ray entries
//! are the negated witness values on orbit representatives, its structural
//! conditions are exactly `f >= 0` and `dft(f) >= 0`, and the strict rhs
//! violation is exactly `sum rho . f < 0`.

use crate::cones;
use crate::group::ReflectionOrbits;
use crate::lp::{self, LpProblem, LpStatus, RowOp, Sense, SolveOptions};
use crate::spectral::{self, GFunc};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompError {
    #[error("input must be real: imaginary part {magnitude:.3e} at index {index}")]
    ComplexInput { index: usize, magnitude: f64 },
    #[error("linear programming failed: {0}")]
    Solver(#[from] lp::LpError),
    #[error("certificate failed independent re-verification: {0}")]
    CertificateFailed(String),
}

/// A verified split of the even part plus the untouched odd part. The
/// reconstruction `omega + tau + odd` matches the input within `residual`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub omega: GFunc,
    pub tau: GFunc,
    pub odd: GFunc,
    pub residual: f64,
}

/// A doubly positive function with strictly negative pairing against the
/// rejected input, normalized to unit sup norm.
#[derive(Debug, Clone)]
pub struct Witness {
    pub f: GFunc,
    pub pairing: f64,
}

#[derive(Debug, Clone)]
pub enum DecompOutcome {
    Member(Decomposition),
    NonMember(Witness),
}

/// Endpoints of `{ c : c*mu - nu is in the dual cone }`. The set is closed
/// and convex; `None` on a side means unbounded there.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleInterval {
    pub empty: bool,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

fn require_real(f: &GFunc, tol: f64) -> Result<(), DecompError> {
    for (index, v) in f.values().iter().enumerate() {
        if v.im.abs() > tol {
            return Err(DecompError::ComplexInput {
                index,
                magnitude: v.im.abs(),
            });
        }
    }
    Ok(())
}

/// Shared LP skeleton: one equality row per reflection orbit, variables
/// `omega_r >= 0` then `t_o >= 0` (the even spectrum on orbit reps), each
/// row scaled by its orbit size. Extra columns may be appended by callers.
struct OrbitSystem {
    orbits: ReflectionOrbits,
    num_omega: usize,
    num_t: usize,
}

impl OrbitSystem {
    fn new(rho: &GFunc) -> OrbitSystem {
        let orbits = rho.group().reflection_orbits();
        let k = orbits.count();
        OrbitSystem {
            orbits,
            num_omega: k,
            num_t: k,
        }
    }

    fn num_vars(&self) -> usize {
        self.num_omega + self.num_t
    }

    /// Row coefficients for orbit rep index `ri` over the base variables.
    /// `extra` slots are appended zero-filled for caller columns.
    fn row(&self, group: &crate::group::GroupSpec, ri: usize, extra: usize) -> Vec<f64> {
        let order = group.order() as f64;
        let r = self.orbits.rep(ri);
        let w_r = self.orbits.size(ri) as f64;
        let mut coeffs = vec![0.0; self.num_vars() + extra];
        coeffs[ri] = w_r;
        for oi in 0..self.num_t {
            let gamma = self.orbits.rep(oi);
            let w_gamma = self.orbits.size(oi) as f64;
            coeffs[self.num_omega + oi] = w_r * (w_gamma / order) * group.character(gamma, r).re;
        }
        coeffs
    }

    /// Rebuild full functions from an LP solution laid out as
    /// `[omega_r..., t_o...]`.
    fn reconstruct(&self, rho: &GFunc, x: &[f64]) -> (GFunc, GFunc) {
        let group = rho.group().clone();
        let omega = GFunc::from_fn(group.clone(), |i| {
            Complex64::new(x[self.orbits.orbit_of(i)].max(0.0), 0.0)
        });
        let spectrum = GFunc::from_fn(group, |g| {
            Complex64::new(x[self.num_omega + self.orbits.orbit_of(g)].max(0.0), 0.0)
        });
        let tau = spectral::idft(&spectrum);
        (omega, tau)
    }
}

/// Decide membership of `rho` in the dual cone, producing either a verified
/// decomposition or a verified separating witness.
pub fn decompose(rho: &GFunc, tol: f64) -> Result<DecompOutcome, DecompError> {
    require_real(rho, tol)?;
    let group = rho.group().clone();
    let (rho_e, rho_o) = spectral::even_odd_split(rho);
    let sys = OrbitSystem::new(rho);
    let mut p = LpProblem::new(Sense::Minimize, sys.num_vars());
    for ri in 0..sys.orbits.count() {
        let coeffs = sys.row(&group, ri, 0);
        let w_r = sys.orbits.size(ri) as f64;
        p.add_row(RowOp::Eq, coeffs, w_r * rho_e.value(sys.orbits.rep(ri)).re);
    }
    let options = SolveOptions {
        feas_tol: tol,
        ..SolveOptions::default()
    };
    let sol = p.solve_with(&options)?;
    match sol.status {
        LpStatus::Optimal => {
            let (omega, tau) = sys.reconstruct(rho, &sol.x);
            let rebuilt = omega.add(&tau).unwrap().add(&rho_o).unwrap();
            let residual = rebuilt.sup_distance(rho).unwrap();
            Ok(DecompOutcome::Member(Decomposition {
                omega,
                tau,
                odd: rho_o,
                residual,
            }))
        }
        LpStatus::Infeasible => {
            lp::verify_farkas(&p, &sol.farkas, tol)
                .map_err(DecompError::CertificateFailed)?;
            let witness = lift_witness(rho, &sys, &sol.farkas, tol)?;
            Ok(DecompOutcome::NonMember(witness))
        }
        LpStatus::Unbounded => unreachable!("feasibility problem has zero objective"),
    }
}

/// Turn a Farkas ray on the orbit rows into a doubly positive witness,
/// normalize it, canonicalize it, clean numerical dust, and re-verify it
/// standalone.
fn lift_witness(
    rho: &GFunc,
    sys: &OrbitSystem,
    ray: &[f64],
    tol: f64,
) -> Result<Witness, DecompError> {
    let group = rho.group().clone();
    let raw = GFunc::from_fn(group, |i| {
        Complex64::new(-ray[sys.orbits.orbit_of(i)], 0.0)
    });
    let peak = raw.sup_norm();
    if peak <= 0.0 {
        return Err(DecompError::CertificateFailed("zero witness".into()));
    }
    let scaled = raw.scale_real(1.0 / peak);
    let clip = |f: &GFunc| {
        GFunc::from_fn(f.group().clone(), |i| {
            let v = f.value(i).re;
            Complex64::new(if v < tol { 0.0 } else { v }, 0.0)
        })
    };
    // Preference order: the canonical maximal-mass witness, then the dusted
    // and raw lifts as fallbacks if polishing disturbs a property.
    let mut candidates = Vec::new();
    if let Some(polished) = polish_witness(rho, sys, &scaled, tol) {
        candidates.push(clip(&polished));
        candidates.push(polished);
    }
    candidates.push(clip(&scaled));
    candidates.push(scaled);
    for candidate in candidates {
        if verify_witness(rho, &candidate, tol).is_ok() {
            let pairing = rho.pairing(&candidate).unwrap().re;
            return Ok(Witness {
                f: candidate,
                pairing,
            });
        }
    }
    Err(DecompError::CertificateFailed(
        "lifted ray is not a valid witness".into(),
    ))
}

/// Witnesses are far from unique; pick a canonical one by maximizing total
/// mass over unit-box doubly positive functions that separate at least as
/// strongly as the lifted ray. Returns `None` when the polish LP fails for
/// any reason; the caller then keeps the raw lift.
fn polish_witness(rho: &GFunc, sys: &OrbitSystem, first: &GFunc, tol: f64) -> Option<GFunc> {
    let group = rho.group().clone();
    let k = sys.orbits.count();
    let p0 = rho.pairing(first).ok()?.re;
    let mut p = LpProblem::new(Sense::Maximize, k);
    for ri in 0..k {
        let w_r = sys.orbits.size(ri) as f64;
        p.set_objective(ri, w_r);
        p.set_bounds(ri, Some(0.0), Some(1.0));
    }
    let spectrum_row = |oi: usize| -> Vec<f64> {
        let gamma = sys.orbits.rep(oi);
        (0..k)
            .map(|ri| {
                sys.orbits.size(ri) as f64 * group.character(gamma, sys.orbits.rep(ri)).re
            })
            .collect()
    };
    for oi in 0..k {
        p.add_row(RowOp::Ge, spectrum_row(oi), 0.0);
    }
    let (rho_e, _) = spectral::even_odd_split(rho);
    let pairing_row: Vec<f64> = (0..k)
        .map(|ri| sys.orbits.size(ri) as f64 * rho_e.value(sys.orbits.rep(ri)).re)
        .collect();
    p.add_row(RowOp::Le, pairing_row, p0);
    let options = SolveOptions {
        feas_tol: tol,
        ..SolveOptions::default()
    };
    let sol = p.solve_with(&options).ok()?;
    if sol.status != LpStatus::Optimal {
        return None;
    }
    let f = GFunc::from_fn(group, |i| {
        Complex64::new(sol.x[sys.orbits.orbit_of(i)].clamp(0.0, 1.0), 0.0)
    });
    let peak = f.sup_norm();
    if peak <= 0.0 {
        return None;
    }
    Some(f.scale_real(1.0 / peak))
}

/// Standalone witness check: `f` doubly positive and `sum rho . f` beneath
/// `-tol/2`, using only public predicates.
pub fn verify_witness(rho: &GFunc, f: &GFunc, tol: f64) -> Result<(), String> {
    if !cones::is_doubly_positive(f, tol) {
        return Err("witness is not doubly positive".into());
    }
    let pairing = rho
        .pairing(f)
        .map_err(|e| format!("pairing failed: {e}"))?
        .re;
    if pairing > -tol / 2.0 {
        return Err(format!("pairing {pairing:.3e} is not strictly negative"));
    }
    Ok(())
}

/// Does `c*mu - nu` lie in the dual cone? Same certificates as
/// [`decompose`].
pub fn check_inequality(
    mu: &GFunc,
    nu: &GFunc,
    c: f64,
    tol: f64,
) -> Result<DecompOutcome, DecompError> {
    let rho = mu.scale_real(c).sub(nu).map_err(|_| {
        DecompError::CertificateFailed("mu and nu live on different groups".into())
    })?;
    decompose(&rho, tol)
}

/// The closed set `{ c : c*mu - nu in the dual cone }`, computed by
/// minimizing and maximizing the free variable `c` over the joint system.
pub fn admissible_interval(
    mu: &GFunc,
    nu: &GFunc,
    tol: f64,
) -> Result<AdmissibleInterval, DecompError> {
    require_real(mu, tol)?;
    require_real(nu, tol)?;
    if mu.group() != nu.group() {
        return Err(DecompError::CertificateFailed(
            "mu and nu live on different groups".into(),
        ));
    }
    let group = mu.group().clone();
    let (mu_e, _) = spectral::even_odd_split(mu);
    let (nu_e, _) = spectral::even_odd_split(nu);
    let sys = OrbitSystem::new(mu);
    let c_var = sys.num_vars();
    let options = SolveOptions {
        feas_tol: tol,
        ..SolveOptions::default()
    };
    let mut endpoints = [None, None];
    let mut empty = false;
    for (slot, sense) in [(0, Sense::Minimize), (1, Sense::Maximize)] {
        let mut p = LpProblem::new(sense, sys.num_vars() + 1);
        p.set_bounds(c_var, None, None);
        p.set_objective(c_var, 1.0);
        for ri in 0..sys.orbits.count() {
            let mut coeffs = sys.row(&group, ri, 1);
            let w_r = sys.orbits.size(ri) as f64;
            let rep = sys.orbits.rep(ri);
            coeffs[c_var] = -w_r * mu_e.value(rep).re;
            p.add_row(RowOp::Eq, coeffs, -w_r * nu_e.value(rep).re);
        }
        let sol = p.solve_with(&options)?;
        match sol.status {
            LpStatus::Optimal => endpoints[slot] = Some(sol.objective),
            LpStatus::Unbounded => endpoints[slot] = None,
            LpStatus::Infeasible => {
                empty = true;
                break;
            }
        }
    }
    if empty {
        return Ok(AdmissibleInterval {
            empty: true,
            lo: None,
            hi: None,
        });
    }
    Ok(AdmissibleInterval {
        empty: false,
        lo: endpoints[0],
        hi: endpoints[1],
    })
}

/// `rho` lies in the dual cone and its negation does too exactly when the
/// even part vanishes; exposed as a predicate so the equivalence is
/// testable against the parity check directly.
pub fn intersection_is_odd(rho: &GFunc, tol: f64) -> Result<bool, DecompError> {
    let forward = decompose(rho, tol)?;
    if matches!(forward, DecompOutcome::NonMember(_)) {
        return Ok(false);
    }
    let backward = decompose(&rho.scale_real(-1.0), tol)?;
    Ok(matches!(backward, DecompOutcome::Member(_)))
}
