use crate::error::{Error, Result};

/// Upper bound on the number of tuples any exhaustive search may visit.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Size of `prod [0, maxes[k]]`, failing when above [`ENUMERATION_LIMIT`].
pub(crate) fn check_search_space(maxes: &[u32]) -> Result<u128> {
    let mut size: u128 = 1;
    for &m in maxes {
        size = size.saturating_mul(m as u128 + 1);
        if size > ENUMERATION_LIMIT {
            return Err(Error::SearchTooLarge {
                size,
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(size)
}

/// Ascending lexicographic enumeration of `prod [0, maxes[k]]`.
pub(crate) struct Odometer<'a> {
    maxes: &'a [u32],
    current: Option<Vec<u32>>,
}

impl<'a> Odometer<'a> {
    pub(crate) fn new(maxes: &'a [u32]) -> Self {
        Odometer {
            maxes,
            current: Some(vec![0; maxes.len()]),
        }
    }
}

impl Iterator for Odometer<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for k in (0..next.len()).rev() {
            if next[k] < self.maxes[k] {
                next[k] += 1;
                self.current = Some(next);
                return Some(out);
            }
            next[k] = 0;
        }
        Some(out)
    }
}
