use super::{Labels, Partition, MAX_POINTS};
use crate::error::{Error, Result};

/// Iterator over all partitions of one shape, in canonical
/// (restricted-growth, lexicographic) order.
#[derive(Clone, Debug)]
pub struct Partitions {
    upper: usize,
    lower: usize,
    current: Option<Labels>,
    // prefix maxima: prefix_max[i] = max(current[..=i])
    prefix_max: Labels,
}

impl Partitions {
    pub fn new(upper: usize, lower: usize) -> Self {
        let n = upper + lower;
        assert!(n <= MAX_POINTS);
        Partitions {
            upper,
            lower,
            current: Some(smallvec::smallvec![0; n]),
            prefix_max: smallvec::smallvec![0; n],
        }
    }

    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        let n = cur.len();
        // rightmost position that can be incremented
        let mut i = n;
        while i > 1 {
            i -= 1;
            if cur[i] <= self.prefix_max[i - 1] {
                cur[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(cur[i]);
                for j in i + 1..n {
                    cur[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self
            .current
            .as_ref()
            .map(|c| Partition::from_canonical(self.upper, self.lower, c.clone()))?;
        self.advance();
        Some(out)
    }
}

/// All partitions in `P(upper, lower)`, checked against a leg bound.
pub fn enumerate(upper: usize, lower: usize, bound: usize) -> Result<Partitions> {
    let legs = upper + lower;
    if legs > bound || legs > MAX_POINTS {
        return Err(Error::BoundExceeded {
            legs,
            bound: bound.min(MAX_POINTS),
        });
    }
    Ok(Partitions::new(upper, lower))
}

/// All shapes `(k, l)` with `k + l <= max_legs`, by total legs then `k`.
pub fn shapes_up_to(max_legs: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=max_legs).flat_map(|total| (0..=total).map(move |k| (k, total - k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> u64 {
        // Bell triangle
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let v = *next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn counts_match_bell_numbers() {
        for n in 0..=8 {
            assert_eq!(Partitions::new(0, n).count() as u64, bell(n), "n = {n}");
            assert_eq!(Partitions::new(n / 2, n - n / 2).count() as u64, bell(n));
        }
    }

    #[test]
    fn canonical_order_and_uniqueness() {
        let all: Vec<_> = Partitions::new(1, 4).collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
    }

    #[test]
    fn empty_shape_has_one_partition() {
        let all: Vec<_> = Partitions::new(0, 0).collect();
        assert_eq!(all, vec![Partition::empty()]);
    }

    #[test]
    fn bound_is_checked() {
        assert!(enumerate(0, 4, 8).is_ok());
        assert_eq!(
            enumerate(5, 4, 8).unwrap_err(),
            Error::BoundExceeded { legs: 9, bound: 8 }
        );
    }

    #[test]
    fn shapes_are_listed_once() {
        let shapes: Vec<_> = shapes_up_to(2).collect();
        assert_eq!(shapes, vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
    }
}
