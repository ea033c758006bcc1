//! Greedy expansions in Cantor bases, i.e. arbitrary sequences of bases.

use crate::base::{max_digit, AlternateBase, DigitWord};
use crate::error::{domain, Result};
use crate::scalar::{snap_floor, to_u32, Real};

/// A pull-based sequence `beta_0, beta_1, ...` of bases greater than one.
/// Terms are materialized on demand and cached.
pub struct CantorBaseStream<'a, T: Real = f64> {
    source: Box<dyn Iterator<Item = T> + 'a>,
    prefix: Vec<T>,
}

impl<'a, T: Real> CantorBaseStream<'a, T> {
    pub fn new(source: impl Iterator<Item = T> + 'a) -> Self {
        CantorBaseStream {
            source: Box::new(source),
            prefix: Vec::new(),
        }
    }

    /// The stream `n -> f(n)`.
    pub fn from_fn(f: impl Fn(usize) -> T + 'a) -> Self {
        Self::new((0..).map(f))
    }

    /// The periodic stream of an alternate base.
    pub fn periodic(base: &AlternateBase<T>) -> Self {
        Self::new(base.betas().to_vec().into_iter().cycle())
    }

    /// `beta_n`, pulling terms from the source as needed.
    pub fn beta(&mut self, n: usize) -> Result<T> {
        while self.prefix.len() <= n {
            let k = self.prefix.len();
            let b = self
                .source
                .next()
                .ok_or_else(|| domain(format!("base stream ended before index {k}")))?;
            if !b.is_finite() || b <= T::one() {
                return Err(domain(format!("beta_{k} = {b} must be a finite real > 1")));
            }
            self.prefix.push(b);
        }
        Ok(self.prefix[n])
    }

    /// The first `n` terms.
    pub fn prefix(&mut self, n: usize) -> Result<&[T]> {
        if n > 0 {
            self.beta(n - 1)?;
        }
        Ok(&self.prefix[..n])
    }
}

/// First `n` greedy digits of `x` in `[0, 1)`, obtained by composing the
/// classical transformations `T_{beta_k}`.
pub fn greedy_expand_cantor<T: Real>(
    stream: &mut CantorBaseStream<'_, T>,
    x: T,
    n: usize,
) -> Result<DigitWord> {
    let eps = T::snap_eps();
    if !x.is_finite() || x < -eps || x >= T::one() {
        return Err(domain(format!("x = {x} outside [0, 1)")));
    }
    let mut y = x.max(T::zero());
    let mut digits = Vec::with_capacity(n);
    for k in 0..n {
        let beta = stream.beta(k)?;
        let d = to_u32(snap_floor(beta * y).max(T::zero())).min(max_digit(beta));
        digits.push(d);
        y = (beta * y - T::of(d as u64)).max(T::zero());
        if y >= T::one() {
            y = crate::scalar::just_below(T::one());
        }
    }
    Ok(DigitWord::new(digits, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_stream_matches_alternate_base() {
        let r = 13f64.sqrt();
        let b = AlternateBase::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap();
        let x = (1.0 + 5f64.sqrt()) / 5.0;
        let mut s = CantorBaseStream::periodic(&b);
        let w = greedy_expand_cantor(&mut s, x, 5).unwrap();
        assert_eq!(w.digits, vec![1, 0, 1, 0, 2]);
        assert_eq!(w, b.greedy_expand(x, 5).unwrap());
    }

    #[test]
    fn harmonic_stream() {
        let mut s = CantorBaseStream::from_fn(|n| 1.0 + 1.0 / (n as f64 + 1.0));
        assert_eq!(greedy_expand_cantor(&mut s, 0.0, 6).unwrap().digits, vec![0; 6]);
        assert_eq!(s.prefix(3).unwrap(), &[2.0, 1.5, 1.0 + 1.0 / 3.0]);
    }

    #[test]
    fn rejects_bad_terms_and_inputs() {
        let mut s = CantorBaseStream::new(vec![2.0, 0.9].into_iter());
        assert!(greedy_expand_cantor(&mut s, 0.3, 1).is_ok());
        assert!(greedy_expand_cantor(&mut s, 0.3, 2).is_err());
        let mut s = CantorBaseStream::new(vec![2.0].into_iter());
        assert!(greedy_expand_cantor(&mut s, 0.3, 2).is_err());
        let mut s = CantorBaseStream::from_fn(|_| 3.0);
        assert!(greedy_expand_cantor(&mut s, 1.0, 2).is_err());
    }
}
