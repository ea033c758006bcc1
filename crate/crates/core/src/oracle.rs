//! Brute-force and statistical oracles.
//!
//! The tuple searches implement the lexicographic characterizations of the
//! greedy and lazy expansions directly, without going through the
//! transformations. The ergodic estimators follow a single orbit and count
//! visits, which by the ergodic theorem converge to the closed-form
//! frequencies and interval measures computed in [`crate::measure`].
//!
//! Floating-point orbits of maps whose slope is exactly representable (an
//! integer base, for instance) lose one significant bit per step and collapse
//! to zero after a few dozen iterations. The estimators therefore refill the
//! low-order bits after every step with uniform noise of one machine epsilon
//! drawn from a seeded generator. Equivalently, the orbit followed is that of
//! a real number sampled uniformly from the tiny cell represented by the
//! floating-point start.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{AlternateBase, StatePoint};
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::tuples::{check_search_space, Odometer};

/// Identifier of the random generator behind every seeded routine.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

/// Seeded generator used by the statistical oracles.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Recommended orbit start: `sqrt(2) - 1`.
pub fn default_start<T: Real>() -> T {
    T::SQRT_2() - T::one()
}

/// A tuple found by exhaustive search, with its value
/// `sum beta_{n-1}...beta_{k+1} c_k / (beta_{n-1}...beta_0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleSearchResult<T: Real = f64> {
    pub tuple: Vec<u32>,
    pub value: T,
}

/// Counts collected along an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats<T: Real = f64> {
    pub counts: Vec<u64>,
    pub iterations: u64,
    pub seed: u64,
    pub start: StatePoint<T>,
}

impl<T: Real> EmpiricalStats<T> {
    /// `counts / iterations`, or zeros when nothing was sampled.
    pub fn frequencies(&self) -> Vec<T> {
        if self.iterations == 0 {
            return vec![T::zero(); self.counts.len()];
        }
        let n = T::of(self.iterations);
        self.counts.iter().map(|&c| T::of(c) / n).collect()
    }

    /// Adds the counts of `other`, which must use the same bins.
    pub fn merge(&mut self, other: &EmpiricalStats<T>) -> Result<()> {
        if self.counts.len() != other.counts.len() {
            return Err(domain("cannot merge histograms with different bin counts"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.iterations += other.iterations;
        Ok(())
    }
}

fn horner<T: Real>(betas: &[T], tuple: &[u32]) -> (T, T) {
    tuple
        .iter()
        .zip(betas)
        .fold((T::zero(), T::one()), |(num, scale), (&c, &b)| {
            (num * b + T::of(c as u64), scale * b)
        })
}

/// Depth-first search over `prod [0, maxes[k]]` in ascending or descending
/// lexicographic order. `feasible(k, num, scale)` decides whether a prefix of
/// length `k + 1` can be completed; the first complete tuple reached is
/// returned.
fn pruned_search<T: Real>(
    betas: &[T],
    maxes: &[u32],
    descending: bool,
    feasible: &dyn Fn(usize, T, T) -> bool,
) -> Option<Vec<u32>> {
    fn go<T: Real>(
        betas: &[T],
        maxes: &[u32],
        descending: bool,
        feasible: &dyn Fn(usize, T, T) -> bool,
        prefix: &mut Vec<u32>,
        num: T,
        scale: T,
    ) -> bool {
        let k = prefix.len();
        if k == betas.len() {
            return true;
        }
        let m = maxes[k];
        for step in 0..=m {
            let c = if descending { m - step } else { step };
            let n2 = num * betas[k] + T::of(c as u64);
            let s2 = scale * betas[k];
            if !feasible(k, n2, s2) {
                continue;
            }
            prefix.push(c);
            if go(betas, maxes, descending, feasible, prefix, n2, s2) {
                return true;
            }
            prefix.pop();
        }
        false
    }
    let mut prefix = Vec::with_capacity(betas.len());
    go(betas, maxes, descending, feasible, &mut prefix, T::zero(), T::one())
        .then_some(prefix)
}

fn prefix_betas<T: Real>(base: &AlternateBase<T>, n: usize) -> (Vec<T>, Vec<u32>) {
    ((0..n).map(|k| base.beta(k)).collect(), (0..n).map(|k| base.alphabet(k)).collect())
}

fn check_greedy_x<T: Real>(base: &AlternateBase<T>, x: T) -> Result<()> {
    let eps = T::snap_eps();
    if !x.is_finite() || x < -eps || x >= base.xmax(0) + eps {
        return Err(domain(format!("x = {x} outside [0, {})", base.xmax(0))));
    }
    Ok(())
}

fn check_lazy_x<T: Real>(base: &AlternateBase<T>, x: T) -> Result<()> {
    let eps = T::snap_eps();
    if !x.is_finite() || x <= T::zero() || x > base.xmax(0) + eps {
        return Err(domain(format!("x = {x} outside (0, {}]", base.xmax(0))));
    }
    Ok(())
}

fn result<T: Real>(betas: &[T], tuple: Vec<u32>) -> TupleSearchResult<T> {
    let (num, scale) = horner(betas, &tuple);
    TupleSearchResult {
        tuple,
        value: num / scale,
    }
}

/// Lexicographically greatest tuple `c` in `prod [0, ceil(beta_k) - 1]`
/// whose value does not exceed `x`, for an arbitrary finite base sequence.
pub fn lex_greatest_in<T: Real>(betas: &[T], x: T) -> Result<TupleSearchResult<T>> {
    if !x.is_finite() || x < -T::snap_eps() {
        return Err(domain(format!("x = {x} must be nonnegative")));
    }
    let maxes: Vec<u32> = betas.iter().map(|&b| crate::base::max_digit(b)).collect();
    check_search_space(&maxes)?;
    let eps = T::snap_eps();
    let feasible = |_: usize, num: T, scale: T| num <= scale * x + eps;
    let tuple = pruned_search(betas, &maxes, true, &feasible)
        .ok_or_else(|| domain("no admissible tuple"))?;
    Ok(result(betas, tuple))
}

/// Lexicographically greatest admissible `n`-tuple with value `<= x`.
pub fn lex_greatest<T: Real>(base: &AlternateBase<T>, x: T, n: usize) -> Result<TupleSearchResult<T>> {
    check_greedy_x(base, x)?;
    let (betas, _) = prefix_betas(base, n);
    lex_greatest_in(&betas, x)
}

/// Lexicographically least admissible `n`-tuple whose value plus the
/// all-maximal tail `xmax(n) / (beta_0 ... beta_{n-1})` reaches `x`.
pub fn lex_least<T: Real>(base: &AlternateBase<T>, x: T, n: usize) -> Result<TupleSearchResult<T>> {
    check_lazy_x(base, x)?;
    let (betas, maxes) = prefix_betas(base, n);
    check_search_space(&maxes)?;
    let eps = T::snap_eps();
    let feasible = |k: usize, num: T, scale: T| num + base.xmax(k + 1) >= scale * x - eps;
    let tuple = pruned_search(&betas, &maxes, false, &feasible)
        .ok_or_else(|| domain("no admissible tuple"))?;
    Ok(result(&betas, tuple))
}

/// [`lex_greatest`] by visiting every tuple, without pruning.
pub fn lex_greatest_naive<T: Real>(
    base: &AlternateBase<T>,
    x: T,
    n: usize,
) -> Result<TupleSearchResult<T>> {
    check_greedy_x(base, x)?;
    let (betas, maxes) = prefix_betas(base, n);
    check_search_space(&maxes)?;
    let eps = T::snap_eps();
    let best = Odometer::new(&maxes)
        .filter(|c| {
            let (num, scale) = horner(&betas, c);
            num <= scale * x + eps
        })
        .last()
        .ok_or_else(|| domain("no admissible tuple"))?;
    Ok(result(&betas, best))
}

/// [`lex_least`] by visiting every tuple, without pruning.
pub fn lex_least_naive<T: Real>(
    base: &AlternateBase<T>,
    x: T,
    n: usize,
) -> Result<TupleSearchResult<T>> {
    check_lazy_x(base, x)?;
    let (betas, maxes) = prefix_betas(base, n);
    check_search_space(&maxes)?;
    let eps = T::snap_eps();
    let tail = base.xmax(n);
    let best = Odometer::new(&maxes)
        .find(|c| {
            let (num, scale) = horner(&betas, c);
            num + tail >= scale * x - eps
        })
        .ok_or_else(|| domain("no admissible tuple"))?;
    Ok(result(&betas, best))
}

/// Greedy orbit with low-order bits refilled from a seeded generator.
struct NoisyOrbit<'b, T: Real> {
    base: &'b AlternateBase<T>,
    state: StatePoint<T>,
    rng: ChaCha8Rng,
}

impl<T: Real> NoisyOrbit<'_, T> {
    fn step(&mut self) -> Result<u32> {
        let (next, digit) = self.base.greedy_step(self.state)?;
        let u: f64 = self.rng.gen();
        let mut y = next.value + T::lit(u) * T::epsilon();
        let top = self.base.xmax(next.slot);
        if y >= top {
            y = next.value;
        }
        self.state = StatePoint::new(next.slot, y);
        Ok(digit)
    }
}

fn start_point<T: Real>(x0: Option<T>, rng: &mut ChaCha8Rng) -> Result<T> {
    let x0 = match x0 {
        Some(x) => x,
        None => T::lit(rng.gen::<f64>()),
    };
    if !x0.is_finite() || x0 < T::zero() || x0 >= T::one() {
        return Err(domain(format!("orbit start x0 = {x0} outside [0, 1)")));
    }
    Ok(x0)
}

/// Digit counts along the greedy orbit of `(0, x0)` over `n` steps; counts
/// are indexed by digit up to the largest alphabet.
///
/// With `x0 = None` the start is drawn from the seeded generator.
pub fn birkhoff_digit_counts<T: Real>(
    base: &AlternateBase<T>,
    x0: Option<T>,
    n: u64,
    seed: u64,
) -> Result<EmpiricalStats<T>> {
    let mut rng = rng_from_seed(seed);
    let x0 = start_point(x0, &mut rng)?;
    let top = *base.alphabets().iter().max().expect("nonempty base") as usize;
    let mut counts = vec![0u64; top + 1];
    let start = StatePoint::new(0, x0);
    let mut orbit = NoisyOrbit {
        base,
        state: start,
        rng,
    };
    for _ in 0..n {
        counts[orbit.step()? as usize] += 1;
    }
    Ok(EmpiricalStats {
        counts,
        iterations: n,
        seed,
        start,
    })
}

/// Fraction of the first `n` greedy digits of `x0` equal to `digit`.
pub fn birkhoff_frequency<T: Real>(
    base: &AlternateBase<T>,
    x0: Option<T>,
    digit: u32,
    n: u64,
    seed: u64,
) -> Result<T> {
    if n == 0 {
        return Err(domain("the orbit length must be at least 1"));
    }
    let stats = birkhoff_digit_counts(base, x0, n, seed)?;
    let count = stats.counts.get(digit as usize).copied().unwrap_or(0);
    Ok(T::of(count) / T::of(n))
}

/// Histogram over `bins` uniform bins of `[0, 1)` of the points
/// `T^{kp + slot}(0, x0)` for `k < n`.
pub fn empirical_histogram<T: Real>(
    base: &AlternateBase<T>,
    slot: usize,
    x0: T,
    n: u64,
    bins: usize,
    seed: u64,
) -> Result<EmpiricalStats<T>> {
    let p = base.len();
    if slot >= p {
        return Err(domain(format!("slot {slot} out of range")));
    }
    if bins == 0 {
        return Err(domain("at least one bin is required"));
    }
    let mut rng = rng_from_seed(seed);
    let x0 = start_point(Some(x0), &mut rng)?;
    let start = StatePoint::new(0, x0);
    let mut orbit = NoisyOrbit {
        base,
        state: start,
        rng,
    };
    let mut counts = vec![0u64; bins];
    let nb = T::of(bins as u64);
    for _ in 0..slot {
        orbit.step()?;
    }
    for k in 0..n {
        let v = orbit.state.value;
        let idx = (v * nb).floor().to_usize().unwrap_or(0).min(bins - 1);
        counts[idx] += 1;
        if k + 1 < n {
            for _ in 0..p {
                orbit.step()?;
            }
        }
    }
    Ok(EmpiricalStats {
        counts,
        iterations: n,
        seed,
        start,
    })
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Merged histogram of `chains` independent orbits of length `n_per_chain`,
/// each started at a point drawn from its own sub-seed. Chains are spread
/// over `threads` worker threads; the merged counts do not depend on it.
pub fn ensemble_histogram<T: Real>(
    base: &AlternateBase<T>,
    slot: usize,
    n_per_chain: u64,
    chains: usize,
    bins: usize,
    seed: u64,
    threads: usize,
) -> Result<EmpiricalStats<T>> {
    let run = |c: usize| -> Result<EmpiricalStats<T>> {
        let s = sub_seed(seed, c as u64);
        let x0 = T::lit(rng_from_seed(s).gen::<f64>());
        empirical_histogram(base, slot, x0, n_per_chain, bins, s)
    };
    let threads = threads.clamp(1, chains.max(1));
    let mut per_chain: Vec<Option<Result<EmpiricalStats<T>>>> = (0..chains).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (w, chunk) in per_chain.chunks_mut(chains.div_ceil(threads).max(1)).enumerate() {
            let run = &run;
            let first = w * chains.div_ceil(threads).max(1);
            scope.spawn(move || {
                for (k, slot_out) in chunk.iter_mut().enumerate() {
                    *slot_out = Some(run(first + k));
                }
            });
        }
    });
    let mut merged = EmpiricalStats {
        counts: vec![0; bins.max(1)],
        iterations: 0,
        seed,
        start: StatePoint::new(0, T::zero()),
    };
    for r in per_chain {
        merged.merge(&r.expect("every chain ran")?)?;
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt13() -> AlternateBase {
        let r = 13f64.sqrt();
        AlternateBase::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap()
    }

    #[test]
    fn figure_expansions() {
        let b = sqrt13();
        let x = (1.0 + 5f64.sqrt()) / 5.0;
        assert_eq!(lex_greatest(&b, x, 5).unwrap().tuple, vec![1, 0, 1, 0, 2]);
        assert_eq!(lex_least(&b, x, 5).unwrap().tuple, vec![0, 1, 1, 1, 2]);
    }

    #[test]
    fn extremes() {
        let b = sqrt13();
        assert_eq!(lex_greatest(&b, 0.0, 6).unwrap().tuple, vec![0; 6]);
        assert_eq!(lex_least(&b, b.xmax(0), 4).unwrap().tuple, vec![2, 1, 2, 1]);
        let r = lex_greatest(&b, 0.9, 0).unwrap();
        assert!(r.tuple.is_empty());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn value_respects_constraints() {
        let b = sqrt13();
        let x = 0.3;
        let g = lex_greatest(&b, x, 6).unwrap();
        assert!(g.value <= x);
        let l = lex_least(&b, x, 6).unwrap();
        let tail = b.xmax(6) / b.partial_product(0, 6);
        assert!(l.value + tail >= x - 1e-15);
    }

    #[test]
    fn pruned_equals_naive() {
        let b = AlternateBase::new(vec![1.9, 2.6, 1.3]).unwrap();
        for k in 0..40 {
            let x = b.xmax(0) * (k as f64 + 0.37) / 40.5;
            assert_eq!(lex_greatest(&b, x, 7).unwrap(), lex_greatest_naive(&b, x, 7).unwrap());
            assert_eq!(lex_least(&b, x, 7).unwrap(), lex_least_naive(&b, x, 7).unwrap());
        }
    }

    #[test]
    fn search_too_large() {
        let b = AlternateBase::new(vec![9.5]).unwrap();
        assert!(matches!(
            lex_greatest(&b, 0.5, 8),
            Err(crate::Error::SearchTooLarge { .. })
        ));
    }

    #[test]
    fn domain_checks() {
        let b = sqrt13();
        assert!(lex_greatest(&b, -0.5, 3).is_err());
        assert!(lex_least(&b, 0.0, 3).is_err());
        assert!(birkhoff_frequency(&b, Some(1.5), 0, 10, 1).is_err());
        assert!(birkhoff_frequency(&b, Some(0.5), 0, 0, 1).is_err());
    }

    #[test]
    fn unused_digit_has_zero_frequency() {
        let b = sqrt13();
        assert_eq!(birkhoff_frequency(&b, Some(0.4), 7, 1000, 3).unwrap(), 0.0);
    }

    #[test]
    fn counts_sum_to_orbit_length() {
        let b = AlternateBase::new(vec![2.7, 1.4, 3.3]).unwrap();
        let s = birkhoff_digit_counts(&b, None, 5000, 42).unwrap();
        assert_eq!(s.counts.iter().sum::<u64>(), 5000);
        let total: f64 = (0..=3).map(|d| birkhoff_frequency(&b, None, d, 5000, 42).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binary_digits_are_balanced() {
        let b = AlternateBase::new(vec![2.0]).unwrap();
        let f = birkhoff_frequency(&b, Some(1.0 / std::f64::consts::PI), 1, 1_000_000, 7).unwrap();
        assert!((f - 0.5).abs() < 0.01, "{f}");
    }

    #[test]
    fn binary_histogram_is_uniform() {
        let b = AlternateBase::new(vec![2.0]).unwrap();
        let h = empirical_histogram(&b, 0, default_start::<f64>(), 200_000, 16, 5).unwrap();
        for f in h.frequencies() {
            assert!((f - 1.0 / 16.0).abs() < 5e-3);
        }
    }

    #[test]
    fn empty_histogram() {
        let b = sqrt13();
        let h = empirical_histogram(&b, 1, 0.3, 0, 8, 0).unwrap();
        assert_eq!(h.counts, vec![0; 8]);
        assert_eq!(h.frequencies(), vec![0.0; 8]);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let b = sqrt13();
        let a = empirical_histogram(&b, 0, 0.3, 10_000, 32, 11).unwrap();
        let c = empirical_histogram(&b, 0, 0.3, 10_000, 32, 11).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn ensemble_is_independent_of_thread_split() {
        let b = sqrt13();
        let one = ensemble_histogram(&b, 1, 2000, 7, 10, 99, 1).unwrap();
        let three = ensemble_histogram(&b, 1, 2000, 7, 10, 99, 3).unwrap();
        assert_eq!(one.counts, three.counts);
        assert_eq!(one.iterations, 14_000);

        let mut manual = empirical_histogram(&b, 1, 0.25, 100, 10, 1).unwrap();
        let other = empirical_histogram(&b, 1, 0.5, 100, 10, 2).unwrap();
        manual.merge(&other).unwrap();
        assert_eq!(manual.iterations, 200);
        assert!(manual.merge(&empirical_histogram(&b, 1, 0.5, 10, 3, 2).unwrap()).is_err());
    }
}
