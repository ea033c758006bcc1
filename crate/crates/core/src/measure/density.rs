use std::cmp::Ordering;

use crate::error::{domain, Error, Result};
use crate::measure::map::PiecewiseLinearMap;
use crate::scalar::Real;

/// Góra data of the absolutely continuous invariant density of a
/// constant-slope map on `[0, 1)`.
///
/// The density is
/// `(1/C) (d_0 + sum_j d_j sum_{m <= M} chi_[0, T^m(c_j)](x) / B^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec<T: Real = f64> {
    /// Right endpoints `c_1..c_K` of the branches that are not onto.
    pub c: Vec<T>,
    /// `orbit[j][m - 1] = T^m(c_j)` for `m = 1..=M`.
    pub orbit: Vec<Vec<T>>,
    /// `s[i][j] = sum_m [T^m(c_i) > c_j] / B^m`.
    pub s: Vec<Vec<T>>,
    /// `d[0] = 1` followed by `d_1..d_K`.
    pub d: Vec<T>,
    /// Normalization constant `C`.
    pub normalization: T,
    /// Slope `B` of the map.
    pub slope: T,
    /// Truncation depth `M` of every series.
    pub truncation: usize,
    /// `max |((Id - S)^T d^T - 1)_j|` of the solved weights.
    pub residual: T,
}

/// Smallest depth for which the tail of every series stays below the
/// scalar's truncation tolerance, and never less than
/// `ceil(15 ln 10 / ln B)`.
pub fn default_truncation<T: Real>(slope: T) -> usize {
    let ln_b = slope.ln();
    let base = (T::lit(15.0) * T::LN_10() / ln_b).ceil();
    let tail = ((T::truncation_tol() * (slope - T::one())).ln() / -ln_b).ceil();
    base.max(tail).max(T::one()).to_usize().unwrap_or(usize::MAX)
}

fn tail_bound<T: Real>(slope: T, depth: usize) -> T {
    slope.powi(-(depth.min(i32::MAX as usize) as i32)) / (slope - T::one())
}

/// Next orbit point under the convention of the density formula: points
/// within the orbit tolerance of a not-onto right endpoint take the left
/// limit there, points near any other breakpoint take the branch on its
/// right.
fn orbit_step<T: Real>(map: &PiecewiseLinearMap<T>, not_onto_end: &[bool], y: T) -> T {
    let bps = map.breakpoints();
    let eps = T::orbit_eps();
    let k = bps.partition_point(|&a| a < y);
    let nearest = [k.checked_sub(1), Some(k)]
        .into_iter()
        .flatten()
        .filter(|&i| i < bps.len())
        .min_by(|&i, &j| {
            (bps[i] - y)
                .abs()
                .partial_cmp(&(bps[j] - y).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
    if let Some(i) = nearest {
        if (bps[i] - y).abs() < eps {
            if i > 0 && not_onto_end[i - 1] {
                return map.image_end(i - 1);
            }
            return T::zero();
        }
    }
    map.eval(y)
}

fn snap_to_breakpoint<T: Real>(map: &PiecewiseLinearMap<T>, y: T) -> T {
    let eps = T::orbit_eps();
    map.breakpoints()
        .iter()
        .copied()
        .find(|&b| (b - y).abs() < eps)
        .unwrap_or(y)
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting and
/// returns the solution together with the reciprocal 1-norm condition
/// number of `a`.
fn solve_dense<T: Real>(a: &[Vec<T>], rhs: &[T]) -> Option<(Vec<T>, T)> {
    let n = rhs.len();
    let norm1 = (0..n)
        .map(|j| (0..n).fold(T::zero(), |acc, i| acc + a[i][j].abs()))
        .fold(T::zero(), T::max);
    // Augment with the identity to obtain the inverse for the condition estimate.
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            row.push(rhs[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col] == T::zero() {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v = *v / p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != T::zero() {
                    let pivot_row = m[col].clone();
                    for (v, &w) in m[i].iter_mut().zip(&pivot_row) {
                        *v = *v - f * w;
                    }
                }
            }
        }
    }
    let inv_norm1 = (0..n)
        .map(|j| (0..n).fold(T::zero(), |acc, i| acc + m[i][n + j].abs()))
        .fold(T::zero(), T::max);
    let x = m.iter().map(|row| row[2 * n]).collect();
    let rcond = if n == 0 {
        T::one()
    } else {
        T::one() / (norm1 * inv_norm1)
    };
    Some((x, rcond))
}

/// Builds the Góra density of `map` with series truncated at depth `m`.
///
/// `map` must act on `[0, 1)`; a branch is not onto when its image ends
/// more than the geometric tolerance below 1.
pub fn gora_density<T: Real>(map: &PiecewiseLinearMap<T>, m: usize) -> Result<DensitySpec<T>> {
    let slope = map.slope();
    if m == 0 {
        return Err(domain("the truncation depth must be at least 1"));
    }
    let tail = tail_bound(slope, m);
    if tail > T::truncation_tol() {
        return Err(Error::TruncationTooShallow {
            depth: m,
            tail: tail.to_f64().unwrap_or(f64::INFINITY),
            required: default_truncation(slope),
        });
    }
    let geo = T::geo_eps();
    let not_onto_end: Vec<bool> = (0..map.branch_count())
        .map(|k| map.image_end(k) < T::one() - geo)
        .collect();
    let branches: Vec<usize> = (0..map.branch_count()).filter(|&k| not_onto_end[k]).collect();
    let c: Vec<T> = branches.iter().map(|&k| map.breakpoints()[k + 1]).collect();
    let kk = c.len();

    let orbit: Vec<Vec<T>> = branches
        .iter()
        .map(|&k| {
            let mut pts = Vec::with_capacity(m);
            let mut y = map.image_end(k);
            for step in 0..m {
                if step > 0 {
                    y = orbit_step(map, &not_onto_end, y);
                }
                pts.push(snap_to_breakpoint(map, y));
            }
            pts
        })
        .collect();

    let weights: Vec<T> = (1..=m).map(|k| slope.powi(-(k as i32))).collect();
    let s: Vec<Vec<T>> = (0..kk)
        .map(|i| {
            (0..kk)
                .map(|j| {
                    orbit[i]
                        .iter()
                        .zip(&weights)
                        .filter(|(&t, _)| t > c[j])
                        .fold(T::zero(), |acc, (_, &w)| acc + w)
                })
                .collect()
        })
        .collect();

    // (Id - S)^T d^T = 1
    let a: Vec<Vec<T>> = (0..kk)
        .map(|i| {
            (0..kk)
                .map(|j| if i == j { T::one() - s[j][i] } else { -s[j][i] })
                .collect()
        })
        .collect();
    let ones = vec![T::one(); kk];
    let singular = |rcond: T| Error::SingularSystem {
        rcond: rcond.to_f64().unwrap_or(0.0),
    };
    let (dk, rcond) = solve_dense(&a, &ones).ok_or_else(|| singular(T::zero()))?;
    if rcond < T::lit(1e-10) {
        return Err(singular(rcond));
    }
    let residual = (0..kk)
        .map(|i| {
            let lhs = (0..kk).fold(T::zero(), |acc, j| acc + a[i][j] * dk[j]);
            (lhs - T::one()).abs()
        })
        .fold(T::zero(), T::max);
    if residual > T::geo_eps() {
        return Err(singular(rcond));
    }

    let mut d = Vec::with_capacity(kk + 1);
    d.push(T::one());
    d.extend(dk);
    let normalization = (0..kk).fold(d[0], |acc, j| {
        let series = orbit[j]
            .iter()
            .zip(&weights)
            .fold(T::zero(), |s, (&t, &w)| s + t * w);
        acc + d[j + 1] * series
    });
    if normalization.partial_cmp(&T::zero()) != Some(Ordering::Greater) {
        return Err(singular(rcond));
    }
    Ok(DensitySpec {
        c,
        orbit,
        s,
        d,
        normalization,
        slope,
        truncation: m,
        residual,
    })
}

impl<T: Real> DensitySpec<T> {
    /// Number `K` of not-onto branches.
    pub fn not_onto_count(&self) -> usize {
        self.c.len()
    }

    fn weighted_points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.orbit.iter().enumerate().flat_map(move |(j, pts)| {
            let dj = self.d[j + 1];
            let mut w = T::one();
            pts.iter().map(move |&t| {
                w = w / self.slope;
                (t, dj * w)
            })
        })
    }

    /// The truncated density at `x`.
    pub fn eval(&self, x: T) -> T {
        let sum = self
            .weighted_points()
            .filter(|&(t, _)| x <= t)
            .fold(self.d[0], |acc, (_, w)| acc + w);
        sum / self.normalization
    }

    /// Integral of the density over `[a, b)`.
    pub fn measure_interval(&self, a: T, b: T) -> Result<T> {
        let eps = T::snap_eps();
        if !(a >= -eps && a <= b + eps && b <= T::one() + eps) {
            return Err(domain(format!("[{a}, {b}) is not a subinterval of [0, 1]")));
        }
        let a = a.max(T::zero()).min(T::one());
        let b = b.max(a).min(T::one());
        let sum = self
            .weighted_points()
            .fold((b - a) * self.d[0], |acc, (t, w)| {
                acc + w * (t.max(a).min(b) - a).max(T::zero())
            });
        Ok(sum / self.normalization)
    }
}

/// Free-function form of [`DensitySpec::eval`].
pub fn density_eval<T: Real>(spec: &DensitySpec<T>, x: T) -> T {
    spec.eval(x)
}

/// Free-function form of [`DensitySpec::measure_interval`].
pub fn measure_interval<T: Real>(spec: &DensitySpec<T>, a: T, b: T) -> Result<T> {
    spec.measure_interval(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::AlternateBase;
    use crate::measure::map::compose_map;
    use approx::assert_abs_diff_eq;

    #[test]
    fn truncation_defaults() {
        assert_eq!(default_truncation(10.0f64), 16);
        let b = (3.0 + 13f64.sqrt()) / 2.0;
        let m = default_truncation(b);
        assert!(tail_bound(b, m) <= 1e-15);
        let small = 1.05f64;
        assert!(tail_bound(small, default_truncation(small)) <= 1e-15);
    }

    #[test]
    fn shallow_truncation_is_rejected() {
        let map = PiecewiseLinearMap::beta_transformation(2.5f64);
        assert!(matches!(
            gora_density(&map, 5),
            Err(Error::TruncationTooShallow { .. })
        ));
        assert!(gora_density(&map, 0).is_err());
    }

    #[test]
    fn onto_map_has_constant_density() {
        let map = compose_map(&AlternateBase::new(vec![2.0]).unwrap(), 0);
        let spec = gora_density(&map, default_truncation(2.0)).unwrap();
        assert_eq!(spec.not_onto_count(), 0);
        assert_eq!(spec.normalization, 1.0);
        assert_eq!(spec.eval(0.3), 1.0);
        assert_abs_diff_eq!(spec.measure_interval(0.25, 0.5).unwrap(), 0.25);
    }

    #[test]
    fn golden_square_orbit() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let b = phi * phi;
        let map = PiecewiseLinearMap::beta_transformation(b);
        let spec = gora_density(&map, default_truncation(b)).unwrap();
        assert_eq!(spec.not_onto_count(), 1);
        assert_abs_diff_eq!(spec.c[0], 1.0);
        // Rounding errors grow like B^m along the orbit while the series
        // weights decay like B^-m.
        for (m, &t) in spec.orbit[0].iter().enumerate() {
            assert!((t - (phi - 1.0)).abs() * b.powi(-(m as i32 + 1)) < 1e-15);
        }
        assert_eq!(spec.s[0][0], 0.0);
    }

    #[test]
    fn sqrt13_values() {
        let r = 13f64.sqrt();
        let base = AlternateBase::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap();
        let map = compose_map(&base, 0);
        let spec = gora_density(&map, default_truncation(map.slope())).unwrap();
        let b0 = base.beta(0);
        assert_abs_diff_eq!(spec.eval(0.2), (1.0 + 3.0 / b0) / spec.normalization, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eval(0.2), 1.470_725, epsilon = 1e-6);
        assert_abs_diff_eq!(spec.eval(0.9), 0.638_68, epsilon = 1e-5);
        assert_eq!(spec.measure_interval(0.3, 0.3).unwrap(), 0.0);
        assert!(spec.measure_interval(0.5, 0.2).is_err());
        assert!(spec.measure_interval(-0.1, 0.2).is_err());
    }

    #[test]
    fn dense_solver() {
        let a = vec![vec![0.0, 2.0], vec![1.0, 1.0]];
        let (x, rcond) = solve_dense(&a, &[2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-15);
        assert!(rcond > 0.1);
        assert!(solve_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 1.0]).is_none());
    }
}
