//! Single-base expansions over general digit sets, and the comparison of
//! the alternate-base transformation blocked by `p` with the single-base
//! transformation of base `B = beta_{p-1} ... beta_0` over `Delta_beta`.

use crate::base::{AlternateBase, StatePoint};
use crate::error::{domain, Error, Result};
use crate::measure::compose_extended_map;
use crate::scalar::{just_below, Real};
use crate::tuples::{check_search_space, Odometer};

/// A strictly ascending digit set `0 = d_0 < ... < d_m` paired with a base.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSet<T: Real = f64> {
    digits: Vec<T>,
    beta: T,
}

impl<T: Real> DigitSet<T> {
    /// Sorts `digits` and merges values closer than the dedup tolerance
    /// scaled by `max(1, d_m)`. The smallest digit must be 0.
    pub fn new(digits: impl Into<Vec<T>>, beta: T) -> Result<Self> {
        let mut digits: Vec<T> = digits.into();
        if !beta.is_finite() || beta <= T::one() {
            return Err(domain(format!("beta = {beta} must be a finite real > 1")));
        }
        if digits.iter().any(|d| !d.is_finite()) {
            return Err(domain("digits must be finite"));
        }
        digits.sort_by(|a, b| a.partial_cmp(b).expect("finite digits"));
        let top = *digits.last().ok_or_else(|| domain("a digit set needs digits"))?;
        let tol = T::dedup_eps() * top.abs().max(T::one());
        let mut merged: Vec<T> = Vec::with_capacity(digits.len());
        for d in digits {
            match merged.last() {
                Some(&last) if d - last <= tol => {}
                _ => merged.push(d),
            }
        }
        if merged[0].abs() > tol {
            return Err(domain(format!("the least digit is {}, not 0", merged[0])));
        }
        merged[0] = T::zero();
        if merged.len() < 2 {
            return Err(domain("a digit set needs a positive digit"));
        }
        Ok(DigitSet {
            digits: merged,
            beta,
        })
    }

    pub fn digits(&self) -> &[T] {
        &self.digits
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// The largest digit `d_m`.
    pub fn max_digit(&self) -> T {
        *self.digits.last().expect("at least two digits")
    }

    /// `d_m / (beta - 1)`, the end of the domain of both transformations.
    pub fn xmax(&self) -> T {
        self.max_digit() / (self.beta - T::one())
    }

    pub fn max_gap(&self) -> T {
        self.digits
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::zero(), T::max)
    }

    /// Whether every gap `d_{k+1} - d_k` is at most `d_m / (beta - 1)`.
    pub fn is_allowable(&self) -> bool {
        self.max_gap() <= self.xmax() + T::snap_eps()
    }

    fn require_allowable(&self) -> Result<()> {
        if self.is_allowable() {
            Ok(())
        } else {
            Err(Error::NotAllowable {
                gap: self.max_gap().to_f64().unwrap_or(f64::NAN),
                bound: self.xmax().to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// The mirrored set `{d_m - d_k}`.
    pub fn tilde(&self) -> Self {
        let top = self.max_digit();
        let digits: Vec<T> = self.digits.iter().rev().map(|&d| top - d).collect();
        DigitSet::new(digits, self.beta).expect("mirror of a valid set is valid")
    }

    /// Index of the greatest digit `d` with `d <= beta x`.
    fn greedy_index(&self, x: T) -> usize {
        let bx = self.beta * x + T::snap_eps();
        self.digits.partition_point(|&d| d <= bx).max(1) - 1
    }

    /// One step of the greedy `(beta, Delta)`-transformation on
    /// `[0, d_m / (beta - 1))`. Returns the image and the digit used.
    pub fn greedy_step(&self, x: T) -> Result<(T, T)> {
        self.require_allowable()?;
        let top = self.xmax();
        let eps = T::snap_eps();
        if !x.is_finite() || x < -eps || x >= top + eps {
            return Err(domain(format!("x = {x} outside [0, {top})")));
        }
        let x = if x >= top { just_below(top) } else { x.max(T::zero()) };
        let d = self.digits[self.greedy_index(x)];
        let y = (self.beta * x - d).max(T::zero());
        Ok((if y >= top { just_below(top) } else { y }, d))
    }

    /// One step of the lazy `(beta, Delta)`-transformation on
    /// `(0, d_m / (beta - 1)]`. Returns the image and the digit used.
    pub fn lazy_step(&self, x: T) -> Result<(T, T)> {
        self.require_allowable()?;
        let top = self.xmax();
        let eps = T::snap_eps();
        if !x.is_finite() || x <= T::zero() || x > top + eps {
            return Err(domain(format!("x = {x} outside (0, {top}]")));
        }
        let x = x.min(top);
        let need = self.beta * x - top - eps;
        let k = self.digits.partition_point(|&d| d < need).min(self.digits.len() - 1);
        let d = self.digits[k];
        let y = (self.beta * x - d).min(top);
        Ok((if y <= T::zero() { T::min_positive_value() } else { y }, d))
    }
}

/// `f_beta(c) = sum_i beta_{p-1} ... beta_{i+1} c_i`.
pub fn f_beta<T: Real>(base: &AlternateBase<T>, tuple: &[u32]) -> Result<T> {
    if tuple.len() != base.len() {
        return Err(domain(format!(
            "tuple has length {}, expected {}",
            tuple.len(),
            base.len()
        )));
    }
    for (position, &digit) in tuple.iter().enumerate() {
        let max = base.alphabet(position);
        if digit > max {
            return Err(Error::Alphabet {
                position,
                digit,
                max,
            });
        }
    }
    Ok(horner(base, tuple))
}

fn horner<T: Real>(base: &AlternateBase<T>, tuple: &[u32]) -> T {
    tuple
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &c)| acc * base.beta(i) + T::of(c as u64))
}

/// `Delta_beta = im f_beta`, paired with `B`.
pub fn delta_set<T: Real>(base: &AlternateBase<T>) -> Result<DigitSet<T>> {
    check_search_space(base.alphabets())?;
    let values: Vec<T> = Odometer::new(base.alphabets())
        .map(|c| horner(base, &c))
        .collect();
    DigitSet::new(values, base.product())
}

/// Whether `f_beta` is non-decreasing for the lexicographic order, decided
/// by the closed-form inequalities
/// `sum_{i >= j} beta_{p-1} ... beta_{i+1} (ceil(beta_i) - 1) <= beta_{p-1} ... beta_j`
/// for `j` in `[1, p - 2]`.
pub fn nondecreasing_by_criterion<T: Real>(base: &AlternateBase<T>) -> bool {
    let p = base.len();
    (1..p.saturating_sub(1)).all(|j| {
        let (lhs, rhs) = (j..p).rev().fold((T::zero(), T::one()), |(sum, prod), i| {
            (sum + prod * T::of(base.alphabet(i) as u64), prod * base.beta(i))
        });
        lhs <= rhs + T::snap_eps() * rhs.max(T::one())
    })
}

/// First lexicographically adjacent pair `(c, c')` with
/// `f_beta(c') < f_beta(c)`, if any.
pub fn monotonicity_witness<T: Real>(base: &AlternateBase<T>) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
    check_search_space(base.alphabets())?;
    let mut prev: Option<(Vec<u32>, T)> = None;
    for c in Odometer::new(base.alphabets()) {
        let v = horner(base, &c);
        if let Some((pc, pv)) = prev {
            if v < pv - T::snap_eps() * pv.max(T::one()) {
                return Ok(Some((pc, c)));
            }
        }
        prev = Some((c, v));
    }
    Ok(None)
}

/// Whether `f_beta` is non-decreasing, by checking every lexicographically
/// adjacent pair of tuples.
pub fn nondecreasing_bruteforce<T: Real>(base: &AlternateBase<T>) -> Result<bool> {
    Ok(monotonicity_witness(base)?.is_none())
}

/// `pi_2(T_beta^p(0, x))`, the greedy transformation blocked by `p`.
pub fn composed_greedy<T: Real>(base: &AlternateBase<T>, x: T) -> Result<T> {
    Ok(base.greedy_iterate(StatePoint::new(0, x), base.len())?.value)
}

/// `pi_2(L_beta^p(0, x))`, the lazy transformation blocked by `p`.
pub fn composed_lazy<T: Real>(base: &AlternateBase<T>, x: T) -> Result<T> {
    Ok(base.lazy_iterate(StatePoint::new(0, x), base.len())?.value)
}

/// A maximal interval `[start, end)` on which the two greedy maps differ.
#[derive(Debug, Clone, PartialEq)]
pub struct DisagreementInterval<T: Real = f64> {
    pub start: T,
    pub end: T,
    /// Sample point inside the interval.
    pub witness: T,
    /// `T_{B, Delta_beta}(witness)`.
    pub delta_image: T,
    /// `pi_2(T_beta^p(0, witness))`.
    pub composed_image: T,
}

/// Where `T_{B, Delta_beta}` and `pi_2 ∘ T_beta^p ∘ delta_0` differ on
/// `[0, x_beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisagreementReport<T: Real = f64> {
    pub intervals: Vec<DisagreementInterval<T>>,
    /// The same set for the lazy maps, as left-open intervals
    /// `(start, end]`; the image of `intervals` under `x -> x_beta - x`.
    pub lazy_intervals: Vec<(T, T)>,
    /// The domain end `x_beta`.
    pub xmax: T,
}

impl<T: Real> DisagreementReport<T> {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Compares the two greedy maps cell by cell.
///
/// Both maps have slope `B` on every cell of the merged breakpoint list
/// `{d / B : d in Delta_beta}` ∪ breakpoints of the `p`-fold extended map,
/// so each cell is decided by comparing the subtrahends at its midpoint.
pub fn compare_transforms<T: Real>(base: &AlternateBase<T>) -> Result<DisagreementReport<T>> {
    let delta = delta_set(base)?;
    let composed = compose_extended_map(base);
    let b = base.product();
    let top = delta.xmax();
    let eps = T::snap_eps();

    let mut cuts: Vec<T> = delta
        .digits()
        .iter()
        .map(|&d| d / b)
        .chain(composed.breakpoints().iter().copied())
        .filter(|&v| v < top)
        .collect();
    cuts.push(top);
    cuts.sort_by(|a, c| a.partial_cmp(c).expect("finite breakpoints"));
    cuts.dedup_by(|a, c| (*a - *c).abs() <= eps);

    let tol = T::geo_eps() * delta.max_digit().max(T::one());
    let mut intervals: Vec<DisagreementInterval<T>> = Vec::new();
    let mut widest = T::zero();
    for w in cuts.windows(2) {
        let (u, v) = (w[0], w[1]);
        if v - u <= eps {
            continue;
        }
        let mid = (u + v) / T::lit(2.0);
        let d = delta.digits()[delta.greedy_index(mid)];
        let k = composed.branch_index(mid);
        let sub = b * composed.breakpoints()[k];
        if (d - sub).abs() <= tol {
            continue;
        }
        let cell = DisagreementInterval {
            start: u,
            end: v,
            witness: mid,
            delta_image: b * mid - d,
            composed_image: b * mid - sub,
        };
        match intervals.last_mut() {
            Some(last) if u - last.end <= eps => {
                last.end = v;
                if v - u > widest {
                    widest = v - u;
                    last.witness = cell.witness;
                    last.delta_image = cell.delta_image;
                    last.composed_image = cell.composed_image;
                }
            }
            _ => {
                widest = v - u;
                intervals.push(cell);
            }
        }
    }
    let lazy_intervals = intervals
        .iter()
        .rev()
        .map(|i| (top - i.end, top - i.start))
        .collect();
    Ok(DisagreementReport {
        intervals,
        lazy_intervals,
        xmax: top,
    })
}
