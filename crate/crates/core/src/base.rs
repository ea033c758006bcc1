//! Alternate bases and the greedy and lazy transformations acting on them.
//!
//! The phase space is the disjoint union of the intervals
//! `{i} x [0, xmax(i))` for the greedy map and `{i} x (0, xmax(i)]` for the
//! lazy map, where `xmax(i)` is the largest value representable in the
//! rotated base starting at slot `i`.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::scalar::{just_below, snap_ceil, snap_floor, to_u32, Real};

/// A `p`-tuple of real bases `(beta_0, ..., beta_{p-1})`, each greater than
/// one, applied cyclically to the positions of a representation.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternateBase<T: Real = f64> {
    betas: Vec<T>,
    product: T,
    alphabets: Vec<u32>,
    xmax: Vec<T>,
}

/// A point `(slot, value)` of the phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint<T: Real = f64> {
    pub slot: usize,
    pub value: T,
}

impl<T: Real> StatePoint<T> {
    pub fn new(slot: usize, value: T) -> Self {
        StatePoint { slot, value }
    }
}

/// A finite digit sequence read in the base rotated by `base_offset`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DigitWord {
    pub digits: Vec<u32>,
    pub base_offset: usize,
}

impl DigitWord {
    pub fn new(digits: Vec<u32>, base_offset: usize) -> Self {
        DigitWord { digits, base_offset }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl fmt::Display for DigitWord {
    /// Concatenates the digits when all are below ten, otherwise separates
    /// them with commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.digits.iter().all(|&d| d < 10);
        for (k, d) in self.digits.iter().enumerate() {
            if k > 0 && !single {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl<T: Real> AlternateBase<T> {
    /// Validates the bases and caches the product, the alphabets and the
    /// maximal representable values of every rotation.
    pub fn new(betas: impl Into<Vec<T>>) -> Result<Self> {
        let betas = betas.into();
        if betas.is_empty() {
            return Err(domain("an alternate base needs at least one component"));
        }
        for (i, &b) in betas.iter().enumerate() {
            if !b.is_finite() || b <= T::one() {
                return Err(domain(format!("beta_{i} = {b} must be a finite real > 1")));
            }
            if b > T::of(u32::MAX as u64) {
                return Err(domain(format!("beta_{i} = {b} is too large")));
            }
        }
        let p = betas.len();
        let alphabets: Vec<u32> = betas.iter().map(|&b| max_digit(b)).collect();
        let product = betas.iter().fold(T::one(), |acc, &b| acc * b);
        let xmax = (0..p)
            .map(|i| {
                // f of the rotated base evaluated at the all-maximal tuple.
                let dm = (0..p).fold(T::zero(), |acc, k| {
                    let j = (i + k) % p;
                    acc * betas[j] + T::of(alphabets[j] as u64)
                });
                dm / (product - T::one())
            })
            .collect();
        Ok(AlternateBase {
            betas,
            product,
            alphabets,
            xmax,
        })
    }

    /// Length `p` of the base.
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    /// `beta_n` with the index read modulo `p`.
    pub fn beta(&self, n: usize) -> T {
        self.betas[n % self.len()]
    }

    /// `beta_{p-1} ... beta_0`.
    pub fn product(&self) -> T {
        self.product
    }

    /// Largest digit `ceil(beta_n) - 1` allowed at position `n`.
    pub fn alphabet(&self, n: usize) -> u32 {
        self.alphabets[n % self.len()]
    }

    pub fn alphabets(&self) -> &[u32] {
        &self.alphabets
    }

    /// Largest value representable in the rotated base starting at `n`.
    pub fn xmax(&self, n: usize) -> T {
        self.xmax[n % self.len()]
    }

    pub fn xmax_all(&self) -> &[T] {
        &self.xmax
    }

    /// Cyclic rotation `(beta_n, ..., beta_{n+p-1})`; `n` may be negative.
    pub fn shift(&self, n: i64) -> Self {
        let p = self.len() as i64;
        let r = n.rem_euclid(p) as usize;
        let rotate = |v: &[T]| -> Vec<T> { v[r..].iter().chain(&v[..r]).copied().collect() };
        AlternateBase {
            betas: rotate(&self.betas),
            product: self.product,
            alphabets: self.alphabets[r..]
                .iter()
                .chain(&self.alphabets[..r])
                .copied()
                .collect(),
            xmax: rotate(&self.xmax),
        }
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.len() {
            return Err(domain(format!("slot {slot} out of range for a base of length {}", self.len())));
        }
        Ok(())
    }

    /// Clamps `x` into the greedy domain `[0, xmax(slot))`.
    fn greedy_domain(&self, slot: usize, x: T) -> Result<T> {
        let top = self.xmax[slot];
        let eps = T::snap_eps();
        if !x.is_finite() || x < -eps || x > top + eps {
            return Err(domain(format!(
                "x = {x} outside the greedy domain [0, {top}) of slot {slot}"
            )));
        }
        Ok(if x < T::zero() {
            T::zero()
        } else if x >= top {
            just_below(top)
        } else {
            x
        })
    }

    /// Clamps `x` into the lazy domain `(0, xmax(slot)]`; a value within
    /// tolerance of zero is kept at zero.
    fn lazy_domain(&self, slot: usize, x: T) -> Result<T> {
        let top = self.xmax[slot];
        let eps = T::snap_eps();
        if !x.is_finite() || x < -eps || x > top + eps {
            return Err(domain(format!(
                "x = {x} outside the lazy domain (0, {top}] of slot {slot}"
            )));
        }
        Ok(x.max(T::zero()).min(top))
    }

    /// One application of the extended greedy transformation.
    pub fn greedy_step(&self, s: StatePoint<T>) -> Result<(StatePoint<T>, u32)> {
        self.check_slot(s.slot)?;
        let i = s.slot;
        let x = self.greedy_domain(i, s.value)?;
        let beta = self.betas[i];
        let m = self.alphabets[i];
        let digit = if x < T::one() {
            to_u32(snap_floor(beta * x).max(T::zero())).min(m)
        } else {
            m
        };
        let next = (i + 1) % self.len();
        let top = self.xmax[next];
        let mut y = beta * x - T::of(digit as u64);
        if y < T::zero() {
            y = T::zero();
        } else if y >= top {
            y = just_below(top);
        }
        Ok((StatePoint::new(next, y), digit))
    }

    /// One application of the lazy transformation.
    pub fn lazy_step(&self, s: StatePoint<T>) -> Result<(StatePoint<T>, u32)> {
        self.check_slot(s.slot)?;
        let i = s.slot;
        let x = self.lazy_domain(i, s.value)?;
        let beta = self.betas[i];
        let m = self.alphabets[i];
        let next = (i + 1) % self.len();
        let top = self.xmax[next];
        let digit = if x <= self.xmax[i] - T::one() + T::snap_eps() {
            0
        } else {
            to_u32(snap_ceil(beta * x - top).max(T::zero())).min(m)
        };
        let y = (beta * x - T::of(digit as u64)).max(T::zero()).min(top);
        Ok((StatePoint::new(next, y), digit))
    }

    /// The first `n` greedy digits of `x`, read from slot 0.
    pub fn greedy_expand(&self, x: T, n: usize) -> Result<DigitWord> {
        self.greedy_expand_from(StatePoint::new(0, x), n)
    }

    /// The first `n` greedy digits of the state `s`, read in the base
    /// rotated to `s.slot`.
    pub fn greedy_expand_from(&self, s: StatePoint<T>, n: usize) -> Result<DigitWord> {
        self.expand_with(s, n, Self::greedy_step)
    }

    /// The first `n` lazy digits of `x`, read from slot 0.
    pub fn lazy_expand(&self, x: T, n: usize) -> Result<DigitWord> {
        self.lazy_expand_from(StatePoint::new(0, x), n)
    }

    pub fn lazy_expand_from(&self, s: StatePoint<T>, n: usize) -> Result<DigitWord> {
        if s.slot < self.len() && s.value <= T::zero() {
            return Err(domain("the lazy expansion is defined for x > 0"));
        }
        self.expand_with(s, n, Self::lazy_step)
    }

    fn expand_with<F>(&self, s: StatePoint<T>, n: usize, step: F) -> Result<DigitWord>
    where
        F: Fn(&Self, StatePoint<T>) -> Result<(StatePoint<T>, u32)>,
    {
        self.check_slot(s.slot)?;
        let mut state = s;
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (next, d) = step(self, state)?;
            digits.push(d);
            state = next;
        }
        Ok(DigitWord::new(digits, s.slot))
    }

    /// Iterates the greedy map `n` times from `s`.
    pub fn greedy_iterate(&self, s: StatePoint<T>, n: usize) -> Result<StatePoint<T>> {
        (0..n).try_fold(s, |st, _| self.greedy_step(st).map(|(next, _)| next))
    }

    /// Iterates the lazy map `n` times from `s`.
    pub fn lazy_iterate(&self, s: StatePoint<T>, n: usize) -> Result<StatePoint<T>> {
        (0..n).try_fold(s, |st, _| self.lazy_step(st).map(|(next, _)| next))
    }

    /// Value `sum a_n / (beta_0 ... beta_n)` of a word (offset-aware).
    ///
    /// With `with_max_tail`, the value of the all-maximal continuation
    /// `xmax(|w|) / (beta_0 ... beta_{|w|-1})` is added.
    pub fn evaluate(&self, w: &DigitWord, with_max_tail: bool) -> Result<T> {
        let p = self.len();
        let mut denom = T::one();
        let mut sum = T::zero();
        for (k, &a) in w.digits.iter().enumerate() {
            let slot = (w.base_offset + k) % p;
            let max = self.alphabets[slot];
            if a > max {
                return Err(Error::Alphabet {
                    position: k,
                    digit: a,
                    max,
                });
            }
            denom = denom * self.betas[slot];
            sum = sum + T::of(a as u64) / denom;
        }
        if with_max_tail {
            sum = sum + self.xmax[(w.base_offset + w.len()) % p] / denom;
        }
        Ok(sum)
    }

    /// `beta_{offset} ... beta_{offset+n-1}`.
    pub fn partial_product(&self, offset: usize, n: usize) -> T {
        (0..n).fold(T::one(), |acc, k| acc * self.beta(offset + k))
    }

    /// The greedy-to-lazy conjugacy `(i, x) -> (i, xmax(i) - x)`, which is
    /// its own inverse.
    pub fn phi(&self, s: StatePoint<T>) -> Result<StatePoint<T>> {
        self.check_slot(s.slot)?;
        let top = self.xmax[s.slot];
        let eps = T::snap_eps();
        if !s.value.is_finite() || s.value < -eps || s.value > top + eps {
            return Err(domain(format!("x = {} outside [0, {top}]", s.value)));
        }
        let x = s.value.max(T::zero()).min(top);
        Ok(StatePoint::new(s.slot, top - x))
    }
}

/// `ceil(beta) - 1`, with `ceil` snapped so that an integer base computed
/// with rounding error keeps its alphabet.
pub(crate) fn max_digit<T: Real>(beta: T) -> u32 {
    to_u32(snap_ceil(beta)).saturating_sub(1)
}
