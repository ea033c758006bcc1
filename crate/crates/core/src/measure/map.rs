use std::cmp::Ordering;

use crate::base::{max_digit, AlternateBase};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// A piecewise-linear map with constant slope `s` on
/// `[breakpoints[0], breakpoints[K])`, acting on branch `k` as
/// `x -> s (x - breakpoints[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearMap<T: Real = f64> {
    breakpoints: Vec<T>,
    slope: T,
}

impl<T: Real> PiecewiseLinearMap<T> {
    /// Builds a map from ascending breakpoints (domain end included).
    pub fn new(breakpoints: Vec<T>, slope: T) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(domain("a map needs at least one branch"));
        }
        if breakpoints[0] != T::zero() {
            return Err(domain("the first branch must start at 0"));
        }
        if breakpoints.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less)) {
            return Err(domain("breakpoints must be strictly ascending"));
        }
        if slope.partial_cmp(&T::one()) != Some(Ordering::Greater) {
            return Err(domain("the slope must exceed 1"));
        }
        Ok(PiecewiseLinearMap { breakpoints, slope })
    }

    /// The classical transformation `x -> beta x mod 1` on `[0, 1)`.
    pub fn beta_transformation(beta: T) -> Self {
        Self::digit_branches(beta, T::one())
    }

    /// The extended greedy transformation on `[0, domain_end)`, whose last
    /// branch `[m / beta, domain_end)` subtracts the maximal digit.
    pub fn extended_beta_transformation(beta: T, domain_end: T) -> Self {
        Self::digit_branches(beta, domain_end)
    }

    fn digit_branches(beta: T, end: T) -> Self {
        let m = max_digit(beta);
        let mut breakpoints: Vec<T> = (0..=m).map(|k| T::of(k as u64) / beta).collect();
        breakpoints.push(end);
        PiecewiseLinearMap {
            breakpoints,
            slope: beta,
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Left endpoints of the branches.
    pub fn left_endpoints(&self) -> &[T] {
        &self.breakpoints[..self.breakpoints.len() - 1]
    }

    pub fn slope(&self) -> T {
        self.slope
    }

    pub fn domain_end(&self) -> T {
        *self.breakpoints.last().expect("at least two breakpoints")
    }

    pub fn branch_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn branch_width(&self, k: usize) -> T {
        self.breakpoints[k + 1] - self.breakpoints[k]
    }

    /// Supremum of the image of branch `k`, i.e. the left limit of the map
    /// at the right endpoint of the branch.
    pub fn image_end(&self, k: usize) -> T {
        self.slope * self.branch_width(k)
    }

    /// Index of the branch containing `x`, clamped to the domain.
    pub fn branch_index(&self, x: T) -> usize {
        let k = self.breakpoints.partition_point(|&a| a <= x);
        k.saturating_sub(1).min(self.branch_count() - 1)
    }

    pub fn eval(&self, x: T) -> T {
        let k = self.branch_index(x);
        (self.slope * (x - self.breakpoints[k])).max(T::zero())
    }

    /// The composition `next ∘ self`. The image of every branch of `self`
    /// must lie in the domain of `next`.
    ///
    /// Each branch `[a_k, a_{k+1})` is refined at `a_k + b / s` for every
    /// interior breakpoint `b` of `next` below the branch image end.
    pub fn then(&self, next: &PiecewiseLinearMap<T>) -> PiecewiseLinearMap<T> {
        let s = self.slope;
        let eps = T::snap_eps();
        let mut breakpoints = Vec::with_capacity(self.breakpoints.len() * next.branch_count());
        for k in 0..self.branch_count() {
            let a = self.breakpoints[k];
            let image = self.image_end(k);
            breakpoints.push(a);
            for &b in &next.breakpoints[1..next.breakpoints.len() - 1] {
                if b < image - eps {
                    breakpoints.push(a + b / s);
                }
            }
        }
        breakpoints.push(self.domain_end());
        PiecewiseLinearMap {
            breakpoints,
            slope: s * next.slope,
        }
    }

    /// `{x : map(x) in [a, b)}` as ascending disjoint intervals, one clipped
    /// piece `[a_k + a / s, a_k + b / s)` per branch.
    pub fn preimage(&self, a: T, b: T) -> Result<Vec<(T, T)>> {
        let eps = T::snap_eps();
        if !(a >= -eps && a <= b && b <= self.domain_end() + eps) {
            return Err(domain(format!("[{a}, {b}) is not a subinterval of the domain")));
        }
        let s = self.slope;
        let mut out = Vec::new();
        for k in 0..self.branch_count() {
            let left = self.breakpoints[k];
            let right = self.breakpoints[k + 1];
            let lo = left + a.max(T::zero()) / s;
            let hi = (left + b / s).min(right);
            if lo < hi {
                out.push((lo, hi));
            }
        }
        Ok(out)
    }
}

/// The composition `T_{beta_{slot+p-1}} ∘ ... ∘ T_{beta_slot}` on `[0, 1)`,
/// under which the slot-`slot` component of the invariant measure is
/// invariant.
pub fn compose_map<T: Real>(base: &AlternateBase<T>, slot: usize) -> PiecewiseLinearMap<T> {
    let p = base.len();
    (1..p).fold(
        PiecewiseLinearMap::beta_transformation(base.beta(slot)),
        |acc, k| acc.then(&PiecewiseLinearMap::beta_transformation(base.beta(slot + k))),
    )
}

/// The `p`-fold extended greedy transformation read from slot 0 on
/// `[0, xmax(0))`.
pub fn compose_extended_map<T: Real>(base: &AlternateBase<T>) -> PiecewiseLinearMap<T> {
    let p = base.len();
    let single = |k: usize| PiecewiseLinearMap::extended_beta_transformation(base.beta(k), base.xmax(k));
    (1..p).fold(single(0), |acc, k| acc.then(&single(k)))
}
