//! Invariant measure of the greedy transformation, digit frequencies and
//! entropy.
//!
//! The measure lives on the disjoint union of `p` copies of `[0, 1)`. Its
//! slot-`i` component is the absolutely continuous invariant probability of
//! the composition `T_{beta_{i+p-1}} ∘ ... ∘ T_{beta_i}`, given in closed form
//! by [`gora_density`]. Mass on the extended part `[1, xmax)` is zero.

mod density;
mod map;

pub use density::{default_truncation, density_eval, gora_density, measure_interval, DensitySpec};
pub use map::{compose_extended_map, compose_map, PiecewiseLinearMap};

use crate::base::AlternateBase;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// One component `mu_slot([a, b))` of a product query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMeasureQuery<T: Real = f64> {
    pub slot: usize,
    pub a: T,
    pub b: T,
}

/// The invariant measure of an alternate base: one composed map and one
/// density per slot.
#[derive(Debug, Clone)]
pub struct InvariantMeasure<T: Real = f64> {
    base: AlternateBase<T>,
    maps: Vec<PiecewiseLinearMap<T>>,
    specs: Vec<DensitySpec<T>>,
}

impl<T: Real> InvariantMeasure<T> {
    /// Builds every slot with the default truncation depth.
    pub fn new(base: &AlternateBase<T>) -> Result<Self> {
        Self::with_truncation(base, default_truncation(base.product()))
    }

    pub fn with_truncation(base: &AlternateBase<T>, depth: usize) -> Result<Self> {
        let maps: Vec<_> = (0..base.len()).map(|i| compose_map(base, i)).collect();
        let specs = maps
            .iter()
            .map(|m| gora_density(m, depth))
            .collect::<Result<Vec<_>>>()?;
        Ok(InvariantMeasure {
            base: base.clone(),
            maps,
            specs,
        })
    }

    pub fn base(&self) -> &AlternateBase<T> {
        &self.base
    }

    pub fn map(&self, slot: usize) -> &PiecewiseLinearMap<T> {
        &self.maps[slot % self.maps.len()]
    }

    pub fn spec(&self, slot: usize) -> &DensitySpec<T> {
        &self.specs[slot % self.specs.len()]
    }

    /// `mu_slot([a, b))` for `0 <= a <= b <= 1`.
    pub fn measure(&self, slot: usize, a: T, b: T) -> Result<T> {
        self.check_slot(slot)?;
        self.specs[slot].measure_interval(a, b)
    }

    /// Density of `mu_slot` at `x`.
    pub fn density(&self, slot: usize, x: T) -> Result<T> {
        self.check_slot(slot)?;
        Ok(self.specs[slot].eval(x))
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.base.len() {
            return Err(domain(format!("slot {slot} out of range for p = {}", self.base.len())));
        }
        Ok(())
    }

    /// `(1/p) sum_i mu_i([d / beta_i, (d + 1) / beta_i) ∩ [0, 1))`, the
    /// asymptotic frequency of `digit` in greedy expansions.
    pub fn frequency(&self, digit: u32) -> T {
        let p = self.base.len();
        let total = (0..p).fold(T::zero(), |acc, i| {
            let beta = self.base.beta(i);
            let a = T::of(digit as u64) / beta;
            if a >= T::one() {
                return acc;
            }
            let b = (T::of(digit as u64 + 1) / beta).min(T::one());
            acc + self.specs[i]
                .measure_interval(a, b)
                .expect("digit cell lies in [0, 1]")
        });
        total / T::of(p as u64)
    }

    /// `(1/p) sum mu_slot([a, b))` over the queried slots.
    pub fn mu_product(&self, queries: &[IntervalMeasureQuery<T>]) -> Result<T> {
        let p = self.base.len();
        let mut seen = vec![false; p];
        let mut total = T::zero();
        for q in queries {
            self.check_slot(q.slot)?;
            if std::mem::replace(&mut seen[q.slot], true) {
                return Err(domain(format!("slot {} queried twice", q.slot)));
            }
            total = total + self.specs[q.slot].measure_interval(q.a, q.b)?;
        }
        Ok(total / T::of(p as u64))
    }
}

/// Asymptotic frequency of `digit` in greedy expansions in `base`.
pub fn frequency<T: Real>(base: &AlternateBase<T>, digit: u32) -> Result<T> {
    Ok(InvariantMeasure::new(base)?.frequency(digit))
}

/// `mu_beta` of a product of intervals, at most one per slot.
pub fn mu_product<T: Real>(base: &AlternateBase<T>, queries: &[IntervalMeasureQuery<T>]) -> Result<T> {
    InvariantMeasure::new(base)?.mu_product(queries)
}

/// Entropy `(1/p) ln(beta_{p-1} ... beta_0)` of the greedy transformation.
pub fn entropy<T: Real>(base: &AlternateBase<T>) -> T {
    base.product().ln() / T::of(base.len() as u64)
}
