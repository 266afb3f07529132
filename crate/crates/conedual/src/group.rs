//! Finite abelian groups presented as products of cyclic factors.
//!
//! Elements are addressed two ways: as residue tuples `(r_1, ..., r_k)` with
//! `0 <= r_j < n_j`, and as flat indices in `0..|G|` laid out row-major with
//! the first factor slowest. The character group is identified with the group
//! itself through the same indexing, so one index type serves both sides.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic factor orders must be at least 1 and the factor list nonempty")]
    InvalidOrder,
    #[error("group order overflows the native word size")]
    OrderOverflow,
    #[error("element has {got} components, group has {expected} factors")]
    ArityMismatch { got: usize, expected: usize },
    #[error("component {component} is {value}, must be below {order}")]
    ComponentOutOfRange {
        component: usize,
        value: usize,
        order: usize,
    },
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("operands live on different groups")]
    GroupMismatch,
    #[error("sumset fold count must be at least 1")]
    EmptySumset,
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_k}` with Haar measure taken
/// as counting measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GroupSpec {
    orders: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
}

impl TryFrom<Vec<usize>> for GroupSpec {
    type Error = GroupError;

    fn try_from(orders: Vec<usize>) -> Result<Self, GroupError> {
        GroupSpec::new(orders)
    }
}

impl From<GroupSpec> for Vec<usize> {
    fn from(g: GroupSpec) -> Vec<usize> {
        g.orders
    }
}

impl GroupSpec {
    pub fn new(orders: Vec<usize>) -> Result<Self, GroupError> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(GroupError::InvalidOrder);
        }
        let mut order = 1usize;
        for &n in &orders {
            order = order.checked_mul(n).ok_or(GroupError::OrderOverflow)?;
        }
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len() - 1).rev() {
            strides[j] = strides[j + 1] * orders[j + 1];
        }
        Ok(Self {
            orders,
            strides,
            order,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    /// Total number of elements `|G|`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factor_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn num_factors(&self) -> usize {
        self.orders.len()
    }

    fn check_index(&self, index: usize) -> Result<(), GroupError> {
        if index < self.order {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    fn check_elem(&self, elem: &[usize]) -> Result<(), GroupError> {
        if elem.len() != self.orders.len() {
            return Err(GroupError::ArityMismatch {
                got: elem.len(),
                expected: self.orders.len(),
            });
        }
        for (j, (&r, &n)) in elem.iter().zip(&self.orders).enumerate() {
            if r >= n {
                return Err(GroupError::ComponentOutOfRange {
                    component: j,
                    value: r,
                    order: n,
                });
            }
        }
        Ok(())
    }

    pub fn index_to_elem(&self, index: usize) -> Result<Vec<usize>, GroupError> {
        self.check_index(index)?;
        let mut out = Vec::with_capacity(self.orders.len());
        for (&stride, &n) in self.strides.iter().zip(&self.orders) {
            out.push(index / stride % n);
        }
        Ok(out)
    }

    pub fn elem_to_index(&self, elem: &[usize]) -> Result<usize, GroupError> {
        self.check_elem(elem)?;
        Ok(elem
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| r * s)
            .sum())
    }

    pub fn add(&self, x: &[usize], y: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.check_elem(x)?;
        self.check_elem(y)?;
        Ok(x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect())
    }

    pub fn negate(&self, x: &[usize]) -> Result<Vec<usize>, GroupError> {
        self.check_elem(x)?;
        Ok(x.iter()
            .zip(&self.orders)
            .map(|(&a, &n)| (n - a) % n)
            .collect())
    }

    /// `gamma(x) = exp(2 pi i sum_j gamma_j x_j / n_j)`.
    pub fn character_value(&self, gamma: &[usize], x: &[usize]) -> Result<Complex64, GroupError> {
        self.check_elem(gamma)?;
        self.check_elem(x)?;
        let mut phase = 0.0f64;
        for ((&g, &r), &n) in gamma.iter().zip(x).zip(&self.orders) {
            phase += (g * r % n) as f64 / n as f64;
        }
        Ok(Complex64::from_polar(1.0, TAU * phase))
    }

    /// Index form of [`GroupSpec::add`]; both indices must be in range.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.order && j < self.order);
        let mut out = 0usize;
        for (&stride, &n) in self.strides.iter().zip(&self.orders) {
            let a = i / stride % n;
            let b = j / stride % n;
            out += (a + b) % n * stride;
        }
        out
    }

    /// Index form of [`GroupSpec::negate`].
    pub fn negate_index(&self, i: usize) -> usize {
        debug_assert!(i < self.order);
        let mut out = 0usize;
        for (&stride, &n) in self.strides.iter().zip(&self.orders) {
            let a = i / stride % n;
            out += (n - a) % n * stride;
        }
        out
    }

    /// `i - j` in the group, on indices.
    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        self.add_index(i, self.negate_index(j))
    }

    /// Index form of [`GroupSpec::character_value`].
    pub fn character(&self, gamma: usize, x: usize) -> Complex64 {
        debug_assert!(gamma < self.order && x < self.order);
        let mut phase = 0.0f64;
        for (&stride, &n) in self.strides.iter().zip(&self.orders) {
            let g = gamma / stride % n;
            let r = x / stride % n;
            phase += (g * r % n) as f64 / n as f64;
        }
        Complex64::from_polar(1.0, TAU * phase)
    }

    /// Orbits of the reflection `x -> -x`, shared by the element and
    /// character sides. Representatives are the smaller index of each pair.
    pub fn reflection_orbits(&self) -> ReflectionOrbits {
        let mut reps = Vec::new();
        let mut rep_of = vec![usize::MAX; self.order];
        let mut sizes = Vec::new();
        for i in 0..self.order {
            if rep_of[i] != usize::MAX {
                continue;
            }
            let neg = self.negate_index(i);
            let slot = reps.len();
            reps.push(i);
            rep_of[i] = slot;
            if neg == i {
                sizes.push(1);
            } else {
                rep_of[neg] = slot;
                sizes.push(2);
            }
        }
        ReflectionOrbits {
            reps,
            rep_of,
            sizes,
        }
    }
}

/// Orbit structure of the reflection `x -> -x` on a group.
#[derive(Debug, Clone)]
pub struct ReflectionOrbits {
    reps: Vec<usize>,
    rep_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl ReflectionOrbits {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Representative element index of orbit `o`.
    pub fn rep(&self, o: usize) -> usize {
        self.reps[o]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Orbit number containing element index `i`.
    pub fn orbit_of(&self, i: usize) -> usize {
        self.rep_of[i]
    }

    /// 1 for self-paired elements (`x = -x`), 2 otherwise.
    pub fn size(&self, o: usize) -> usize {
        self.sizes[o]
    }
}

/// A finite subset of a group, kept as a sorted index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    group: GroupSpec,
    members: BTreeSet<usize>,
}

impl Window {
    pub fn new(
        group: GroupSpec,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GroupError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&max) = members.iter().next_back() {
            if max >= group.order() {
                return Err(GroupError::IndexOutOfRange {
                    index: max,
                    order: group.order(),
                });
            }
        }
        Ok(Self { group, members })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn member_set(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(&index)
    }

    pub fn contains_zero(&self) -> bool {
        self.members.contains(&0)
    }

    /// `{-x : x in W}`.
    pub fn reflect(&self) -> Window {
        let members = self
            .members
            .iter()
            .map(|&i| self.group.negate_index(i))
            .collect();
        Window {
            group: self.group.clone(),
            members,
        }
    }

    /// `{x + g : x in W}` for a fixed element `g` given as a residue tuple.
    pub fn translate(&self, g: &[usize]) -> Result<Window, GroupError> {
        let shift = self.group.elem_to_index(g)?;
        let members = self
            .members
            .iter()
            .map(|&i| self.group.add_index(i, shift))
            .collect();
        Ok(Window {
            group: self.group.clone(),
            members,
        })
    }

    /// `k`-fold sumset `W + W + ... + W` (`k >= 1` copies).
    pub fn sumset(&self, folds: usize) -> Result<Window, GroupError> {
        if folds == 0 {
            return Err(GroupError::EmptySumset);
        }
        let order = self.group.order();
        let mut current: Vec<bool> = vec![false; order];
        for &i in &self.members {
            current[i] = true;
        }
        for _ in 1..folds {
            let mut next = vec![false; order];
            for (i, &hit) in current.iter().enumerate() {
                if !hit {
                    continue;
                }
                for &j in &self.members {
                    next[self.group.add_index(i, j)] = true;
                }
            }
            current = next;
        }
        let members = current
            .iter()
            .enumerate()
            .filter_map(|(i, &hit)| hit.then_some(i))
            .collect();
        Ok(Window {
            group: self.group.clone(),
            members,
        })
    }

    /// Whether `W = -W`.
    pub fn is_symmetric(&self) -> bool {
        self.members
            .iter()
            .all(|&i| self.members.contains(&self.group.negate_index(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn add_wraps_in_z4() {
        let g = z(4);
        assert_eq!(g.add(&[3], &[2]).unwrap(), vec![1]);
        assert_eq!(g.add_index(3, 2), 1);
    }

    #[test]
    fn add_componentwise_in_z2_z3() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        assert_eq!(g.add(&[1, 2], &[1, 2]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn add_rejects_arity_mismatch() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        assert_eq!(
            g.add(&[1], &[1, 2]).unwrap_err(),
            GroupError::ArityMismatch {
                got: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn negate_small_cases() {
        assert_eq!(z(5).negate(&[2]).unwrap(), vec![3]);
        assert_eq!(z(2).negate(&[1]).unwrap(), vec![1]);
        assert_eq!(z(7).negate(&[0]).unwrap(), vec![0]);
    }

    #[test]
    fn character_values() {
        let g4 = z(4);
        let v = g4.character_value(&[1], &[1]).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        let g22 = GroupSpec::new(vec![2, 2]).unwrap();
        let v = g22.character_value(&[1, 1], &[1, 0]).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let g = GroupSpec::new(vec![6]).unwrap();
        let v = g.character_value(&[0], &[5]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn character_rejects_out_of_range() {
        let g = z(4);
        assert!(matches!(
            g.character_value(&[4], &[1]),
            Err(GroupError::ComponentOutOfRange { .. })
        ));
    }

    #[test]
    fn index_round_trip_row_major() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        // first factor slowest: index = r1*3 + r2
        assert_eq!(g.index_to_elem(4).unwrap(), vec![1, 1]);
        assert_eq!(g.elem_to_index(&[1, 1]).unwrap(), 4);
        for i in 0..g.order() {
            assert_eq!(g.elem_to_index(&g.index_to_elem(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn index_round_trip_large() {
        let g = GroupSpec::new(vec![10, 10, 10, 10]).unwrap();
        assert_eq!(g.order(), 10_000);
        for i in (0..g.order()).step_by(37) {
            assert_eq!(g.elem_to_index(&g.index_to_elem(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn index_out_of_range_rejected() {
        let g = z(4);
        assert_eq!(
            g.index_to_elem(4).unwrap_err(),
            GroupError::IndexOutOfRange { index: 4, order: 4 }
        );
    }

    #[test]
    fn sumset_of_symmetric_interval() {
        let g = z(8);
        let u = Window::new(g, [7, 0, 1]).unwrap();
        let s = u.sumset(2).unwrap();
        let expect: Vec<usize> = vec![0, 1, 2, 6, 7];
        assert_eq!(s.members().collect::<Vec<_>>(), expect);
        assert!(s.is_symmetric());
    }

    #[test]
    fn sumset_single_fold_is_identity() {
        let g = z(6);
        let u = Window::new(g, [2, 3]).unwrap();
        assert_eq!(u.sumset(1).unwrap(), u);
        assert!(matches!(u.sumset(0), Err(GroupError::EmptySumset)));
    }

    #[test]
    fn reflect_and_translate() {
        let g = z(5);
        let w = Window::new(g.clone(), [1, 2]).unwrap();
        assert_eq!(w.reflect().members().collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!(
            w.translate(&[4]).unwrap().members().collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert!(!w.is_symmetric());
        assert!(Window::new(g, [0, 2, 3]).unwrap().is_symmetric());
    }

    #[test]
    fn window_rejects_out_of_range() {
        assert!(Window::new(z(4), [4]).is_err());
    }

    #[test]
    fn reflection_orbits_partition_the_group() {
        for orders in [vec![5], vec![4], vec![2, 3], vec![2, 2], vec![12]] {
            let g = GroupSpec::new(orders).unwrap();
            let orbits = g.reflection_orbits();
            let mut seen = vec![0usize; g.order()];
            for o in 0..orbits.count() {
                let r = orbits.rep(o);
                seen[r] += 1;
                if orbits.size(o) == 2 {
                    seen[g.negate_index(r)] += 1;
                } else {
                    assert_eq!(g.negate_index(r), r);
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            for i in 0..g.order() {
                let o = orbits.orbit_of(i);
                assert!(orbits.rep(o) == i || orbits.rep(o) == g.negate_index(i));
            }
        }
    }

    #[test]
    fn group_spec_serde_is_plain_array() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), "[2,3]");
        let back: GroupSpec = serde_json::from_str("[2,3]").unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<GroupSpec>("[0]").is_err());
    }
}
