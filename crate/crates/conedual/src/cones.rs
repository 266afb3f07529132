//! Membership predicates for the cones of nonnegative, positive definite,
//! doubly positive, and positive-type functions, plus Boas-Kac roots and
//! convolution squares.
//!
//! Two independent routes decide positive definiteness: `is_pd_fourier`
//! checks the spectrum, `is_pd_gram` materializes the full Gram matrix and
//! checks eigenvalues. The Gram route exists as a brute-force oracle for the
//! spectral route and is deliberately not implemented through it.

use crate::spectral::{self, GFunc};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Default predicate tolerance; callers can tighten or loosen per call.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest group order the Gram eigenvalue oracle accepts.
pub const GRAM_MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("input must be real: imaginary part {magnitude:.3e} at index {index}")]
    ComplexInput { index: usize, magnitude: f64 },
    #[error("Gram oracle limited to group order {max}, got {got}")]
    GroupTooLarge { got: usize, max: usize },
    #[error("not positive definite: spectrum reaches {min:.6e}")]
    NotPositiveDefinite { min: f64 },
}

fn check_real(f: &GFunc, tol: f64) -> Result<(), ConeError> {
    for (index, v) in f.values().iter().enumerate() {
        if v.im.abs() > tol {
            return Err(ConeError::ComplexInput {
                index,
                magnitude: v.im.abs(),
            });
        }
    }
    Ok(())
}

/// True iff `f` is real within `tol` and `min Re f >= -tol`.
pub fn is_nonneg(f: &GFunc, tol: f64) -> Result<bool, ConeError> {
    check_real(f, tol)?;
    Ok(f.values().iter().all(|v| v.re >= -tol))
}

/// Spectral positive definiteness test: `dft(f)` entrywise real and
/// nonnegative within `tol`.
pub fn is_pd_fourier(f: &GFunc, tol: f64) -> bool {
    let s = spectral::dft(f);
    s.values().iter().all(|v| v.im.abs() <= tol && v.re >= -tol)
}

/// Brute-force positive definiteness oracle: builds `A[x,y] = f(x - y)` and
/// tests Hermitian positive semidefiniteness by eigenvalue computation.
pub fn is_pd_gram(f: &GFunc, tol: f64) -> Result<bool, ConeError> {
    let group = f.group();
    let n = group.order();
    if n > GRAM_MAX_ORDER {
        return Err(ConeError::GroupTooLarge {
            got: n,
            max: GRAM_MAX_ORDER,
        });
    }
    // A Hermitian is exactly the converse symmetry f(-x) = conj(f(x)); if it
    // fails beyond tol, some quadratic form is not even real.
    let mut herm_dev = 0.0f64;
    for x in 0..n {
        let dev = (f.value(x) - f.value(group.negate_index(x)).conj()).norm();
        herm_dev = herm_dev.max(0.5 * dev);
    }
    if herm_dev > tol {
        return Ok(false);
    }
    let rows: Vec<Vec<Complex64>> = crate::batch::map_indexed(n, |x| {
        (0..n)
            .map(|y| {
                let d = group.sub_index(x, y);
                let dn = group.negate_index(d);
                0.5 * (f.value(d) + f.value(dn).conj())
            })
            .collect()
    });
    let a = DMatrix::from_row_iterator(n, n, rows.into_iter().flatten());
    let eig = a.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(min >= -tol)
}

/// Positive type: the transform of `m` is entrywise nonnegative within `tol`.
/// On a finite group this is the measure-side twin of [`is_pd_fourier`].
pub fn is_postype(m: &GFunc, tol: f64) -> bool {
    let s = spectral::dft(m);
    s.values().iter().all(|v| v.im.abs() <= tol && v.re >= -tol)
}

/// Positive type in the real sense: `Re dft(m) >= -tol` everywhere. Intended
/// for real `m`; the imaginary part of the spectrum is ignored by design.
pub fn is_postype_real_sense(m: &GFunc, tol: f64) -> bool {
    let s = spectral::dft(m);
    s.values().iter().all(|v| v.re >= -tol)
}

/// Nonnegative and positive definite simultaneously. A function that is not
/// real within `tol` is simply not in the cone.
pub fn is_doubly_positive(f: &GFunc, tol: f64) -> bool {
    f.is_real(tol) && f.values().iter().all(|v| v.re >= -tol) && is_pd_fourier(f, tol)
}

/// `f(-x) = f(x)` within `tol` (plain reflection, no conjugation).
pub fn is_even(f: &GFunc, tol: f64) -> bool {
    let group = f.group();
    (0..group.order()).all(|i| (f.value(i) - f.value(group.negate_index(i))).norm() <= tol)
}

/// `f(-x) = -f(x)` within `tol`.
pub fn is_odd(f: &GFunc, tol: f64) -> bool {
    let group = f.group();
    (0..group.order()).all(|i| (f.value(i) + f.value(group.negate_index(i))).norm() <= tol)
}

/// The root `g` with `g * converse(g) = f`, for positive definite `f`.
/// Branch choice: the unique root whose transform is real nonnegative, which
/// keeps real even inputs real and even.
pub fn boas_kac_root(f: &GFunc, tol: f64) -> Result<GFunc, ConeError> {
    let s = spectral::dft(f);
    let mut min = f64::INFINITY;
    for v in s.values() {
        if v.im.abs() > tol {
            return Err(ConeError::NotPositiveDefinite { min: -v.im.abs() });
        }
        min = min.min(v.re);
    }
    if min < -tol {
        return Err(ConeError::NotPositiveDefinite { min });
    }
    let root = GFunc::new(
        s.group().clone(),
        s.values()
            .iter()
            .map(|v| Complex64::new(v.re.max(0.0).sqrt(), 0.0))
            .collect(),
    )
    .expect("same length as spectrum");
    Ok(spectral::idft(&root))
}

/// `g * converse(g)`; always positive definite since its transform is
/// `|dft(g)|^2`.
pub fn convolution_square(g: &GFunc) -> GFunc {
    spectral::convolve(g, &spectral::converse(g)).expect("same group by construction")
}
