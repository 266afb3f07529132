//! Complex functions on a finite abelian group and their Fourier transforms.
//!
//! Conventions, fixed once here and relied on everywhere else:
//! `dft(f)(gamma) = sum_x conj(gamma(x)) f(x)` (forward, unnormalized) and
//! `idft(S)(x) = (1/|G|) sum_gamma gamma(x) S(gamma)`, so `idft(dft(f)) = f`.

use crate::batch;
use crate::group::{GroupError, GroupSpec, Window};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("value table has {got} entries, group has order {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A function `G -> C` stored densely in element-index order. The same type
/// carries spectra, i.e. functions on the (self-dual) character group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GFuncRepr", into = "GFuncRepr")]
pub struct GFunc {
    group: GroupSpec,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct GFuncRepr {
    group: GroupSpec,
    values: Vec<[f64; 2]>,
}

impl TryFrom<GFuncRepr> for GFunc {
    type Error = SpectralError;

    fn try_from(repr: GFuncRepr) -> Result<Self, SpectralError> {
        GFunc::new(
            repr.group,
            repr.values
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<GFunc> for GFuncRepr {
    fn from(f: GFunc) -> GFuncRepr {
        GFuncRepr {
            group: f.group,
            values: f.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }
}

impl GFunc {
    pub fn new(group: GroupSpec, values: Vec<Complex64>) -> Result<Self, SpectralError> {
        if values.len() != group.order() {
            return Err(SpectralError::LengthMismatch {
                got: values.len(),
                expected: group.order(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn zeros(group: GroupSpec) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(group: GroupSpec, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..group.order()).map(&mut f).collect();
        Self { group, values }
    }

    pub fn from_real(group: GroupSpec, values: &[f64]) -> Result<Self, SpectralError> {
        Self::new(group, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Indicator function of a window.
    pub fn indicator(window: &Window) -> Self {
        let mut f = Self::zeros(window.group().clone());
        for i in window.members() {
            f.values[i] = Complex64::new(1.0, 0.0);
        }
        f
    }

    /// Point mass at one element.
    pub fn delta(group: GroupSpec, index: usize) -> Result<Self, SpectralError> {
        if index >= group.order() {
            return Err(GroupError::IndexOutOfRange {
                index,
                order: group.order(),
            }
            .into());
        }
        let mut f = Self::zeros(group);
        f.values[index] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Largest pointwise deviation from `other`.
    pub fn sup_distance(&self, other: &GFunc) -> Result<f64, SpectralError> {
        self.check_same_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same_group(&self, other: &GFunc) -> Result<(), SpectralError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch.into());
        }
        Ok(())
    }

    /// `sum_{x in W} f(x)`; the window must live on the same group.
    pub fn sum_over(&self, window: &Window) -> Result<Complex64, SpectralError> {
        if *window.group() != self.group {
            return Err(GroupError::GroupMismatch.into());
        }
        Ok(window.members().map(|i| self.values[i]).sum())
    }

    pub fn total(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Bilinear pairing `sum_x f(x) g(x)` (no conjugation).
    pub fn pairing(&self, other: &GFunc) -> Result<Complex64, SpectralError> {
        self.check_same_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn add(&self, other: &GFunc) -> Result<GFunc, SpectralError> {
        self.check_same_group(other)?;
        Ok(GFunc {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &GFunc) -> Result<GFunc, SpectralError> {
        self.check_same_group(other)?;
        Ok(GFunc {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> GFunc {
        GFunc {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> GFunc {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Entrywise (Schur) product.
    pub fn pointwise_product(&self, other: &GFunc) -> Result<GFunc, SpectralError> {
        self.check_same_group(other)?;
        Ok(GFunc {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

/// Forward transform `dft(f)(gamma) = sum_x conj(gamma(x)) f(x)`.
pub fn dft(f: &GFunc) -> GFunc {
    GFunc {
        group: f.group().clone(),
        values: transform(f.group(), f.values(), -1.0),
    }
}

/// Inverse transform `idft(S)(x) = (1/|G|) sum_gamma gamma(x) S(gamma)`.
pub fn idft(s: &GFunc) -> GFunc {
    let scale = 1.0 / s.group().order() as f64;
    let mut values = transform(s.group(), s.values(), 1.0);
    for v in &mut values {
        *v *= scale;
    }
    GFunc {
        group: s.group().clone(),
        values,
    }
}

/// Convolution `(f * g)(x) = sum_y f(x - y) g(y)`, computed spectrally:
/// `dft(f * g) = dft(f) dft(g)`.
pub fn convolve(f: &GFunc, g: &GFunc) -> Result<GFunc, SpectralError> {
    let product = dft(f).pointwise_product(&dft(g))?;
    Ok(idft(&product))
}

/// The converse function `f~(x) = conj(f(-x))`.
pub fn converse(f: &GFunc) -> GFunc {
    let group = f.group().clone();
    let values = (0..group.order())
        .map(|i| f.value(group.negate_index(i)).conj())
        .collect();
    GFunc { group, values }
}

/// Splits `f` into its even and odd parts under the reflection `x -> -x`
/// (no conjugation): `f = even + odd` with `even(x) = (f(x) + f(-x))/2`.
pub fn even_odd_split(f: &GFunc) -> (GFunc, GFunc) {
    let group = f.group().clone();
    let half = Complex64::new(0.5, 0.0);
    let mut even = Vec::with_capacity(group.order());
    let mut odd = Vec::with_capacity(group.order());
    for i in 0..group.order() {
        let v = f.value(i);
        let r = f.value(group.negate_index(i));
        even.push((v + r) * half);
        odd.push((v - r) * half);
    }
    (
        GFunc {
            group: group.clone(),
            values: even,
        },
        GFunc {
            group,
            values: odd,
        },
    )
}

/// Applies the 1-d transform along every cyclic factor. `sign = -1.0` is the
/// forward direction, `+1.0` the (unnormalized) inverse.
fn transform(group: &GroupSpec, values: &[Complex64], sign: f64) -> Vec<Complex64> {
    let mut data = values.to_vec();
    let total = group.order();
    let orders = group.factor_orders();
    let mut stride = total;
    for &n in orders {
        stride /= n;
        if n == 1 {
            continue;
        }
        // Lines along this axis start at indices whose axis digit is zero.
        let line_count = total / n;
        let starts: Vec<usize> = (0..total)
            .filter(|i| i / stride % n == 0)
            .collect();
        debug_assert_eq!(starts.len(), line_count);
        let data_ref = &data;
        let transformed: Vec<Vec<Complex64>> = batch::map_indexed(line_count, |l| {
            let start = starts[l];
            let line: Vec<Complex64> = (0..n).map(|t| data_ref[start + t * stride]).collect();
            dft_line(&line, sign)
        });
        for (l, line) in transformed.into_iter().enumerate() {
            let start = starts[l];
            for (t, v) in line.into_iter().enumerate() {
                data[start + t * stride] = v;
            }
        }
    }
    data
}

/// Mixed-radix Cooley-Tukey on one line; falls back to the direct
/// O(n^2) sum at prime length.
fn dft_line(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    if n <= 1 {
        return x.to_vec();
    }
    let p = smallest_prime_factor(n);
    if p == n {
        return dft_naive(x, sign);
    }
    let m = n / p;
    let sub_transforms: Vec<Vec<Complex64>> = (0..p)
        .map(|r| {
            let sub: Vec<Complex64> = (0..m).map(|a| x[a * p + r]).collect();
            dft_line(&sub, sign)
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let km = k % m;
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, sub) in sub_transforms.iter().enumerate() {
            let tw = Complex64::from_polar(1.0, sign * TAU * (r * k % n) as f64 / n as f64);
            acc += tw * sub[km];
        }
        out.push(acc);
    }
    out
}

fn dft_naive(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                let tw = Complex64::from_polar(1.0, sign * TAU * (j * k % n) as f64 / n as f64);
                acc += tw * v;
            }
            acc
        })
        .collect()
}

fn smallest_prime_factor(n: usize) -> usize {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}
