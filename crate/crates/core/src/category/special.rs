use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::{Partition, Point};

/// Distinguished generators of the half-liberated and hyperoctahedral
/// categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialPartition {
    /// `(13')(22')(31') ∈ P(3,3)`, implementing `abc = cba`.
    HalfCommutation,
    /// `(135… 2'4'6'…)(246… 1'3'5'…) ∈ P(s,s)`, implementing `abab… = baba…`.
    SMixing(usize),
    /// `(1,1',k+2,(k+2)')(2,2')…(k+1,(k+1)') ∈ P(k+2,k+2)`.
    KCubic(usize),
    /// `(1346)(25) ∈ P(0,6)`, the one-row form of the ultracubic partition.
    UltracubicGenerator,
}

impl SpecialPartition {
    pub fn build(self) -> Result<Partition> {
        match self {
            SpecialPartition::HalfCommutation => Partition::from_blocks(
                3,
                3,
                &[
                    vec![Point::Upper(0), Point::Lower(2)],
                    vec![Point::Upper(1), Point::Lower(1)],
                    vec![Point::Upper(2), Point::Lower(0)],
                ],
            ),
            SpecialPartition::SMixing(s) => {
                if s < 2 {
                    return Err(Error::InvalidParameter(format!("s_mixing needs s >= 2, got {s}")));
                }
                // 0-based: upper even indices with lower odd indices, and vice versa
                let first = (0..s)
                    .filter(|i| i % 2 == 0)
                    .map(Point::Upper)
                    .chain((0..s).filter(|j| j % 2 == 1).map(Point::Lower))
                    .collect();
                let second = (0..s)
                    .filter(|i| i % 2 == 1)
                    .map(Point::Upper)
                    .chain((0..s).filter(|j| j % 2 == 0).map(Point::Lower))
                    .collect();
                Partition::from_blocks(s, s, &[first, second])
            }
            SpecialPartition::KCubic(k) => {
                let n = k + 2;
                let mut blocks = vec![vec![
                    Point::Upper(0),
                    Point::Lower(0),
                    Point::Upper(n - 1),
                    Point::Lower(n - 1),
                ]];
                blocks.extend((1..=k).map(|i| vec![Point::Upper(i), Point::Lower(i)]));
                Partition::from_blocks(n, n, &blocks)
            }
            SpecialPartition::UltracubicGenerator => "l1 l3 l4 l6 | l2 l5".parse(),
        }
    }
}

impl fmt::Display for SpecialPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialPartition::HalfCommutation => f.write_str("half_commutation"),
            SpecialPartition::SMixing(s) => write!(f, "s_mixing({s})"),
            SpecialPartition::KCubic(k) => write!(f, "k_cubic({k})"),
            SpecialPartition::UltracubicGenerator => f.write_str("ultracubic_generator"),
        }
    }
}

impl FromStr for SpecialPartition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let arg = |prefix: &str| -> Option<Result<usize>> {
            t.strip_prefix(prefix)?.strip_suffix(')').map(|a| {
                a.trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad argument in '{t}'")))
            })
        };
        if let Some(s) = arg("s_mixing(") {
            return Ok(SpecialPartition::SMixing(s?));
        }
        if let Some(k) = arg("k_cubic(") {
            return Ok(SpecialPartition::KCubic(k?));
        }
        match t {
            "half_commutation" => Ok(SpecialPartition::HalfCommutation),
            "ultracubic_generator" => Ok(SpecialPartition::UltracubicGenerator),
            _ => Err(Error::UnknownName(format!("special partition '{t}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{Row, Side};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn half_commutation_shape() {
        let h = SpecialPartition::HalfCommutation.build().unwrap();
        assert_eq!(h, p("u1 l3 | u2 l2 | u3 l1"));
    }

    #[test]
    fn s_mixing_at_two_is_the_crossing() {
        assert_eq!(
            SpecialPartition::SMixing(2).build().unwrap(),
            Partition::crossing()
        );
        assert_eq!(
            SpecialPartition::SMixing(3).build().unwrap(),
            p("u1 u3 l2 | u2 l1 l3")
        );
        assert!(SpecialPartition::SMixing(1).build().is_err());
    }

    #[test]
    fn cubic_partitions() {
        assert_eq!(
            SpecialPartition::KCubic(0).build().unwrap(),
            Partition::single_block(2, 2)
        );
        assert_eq!(
            SpecialPartition::KCubic(1).build().unwrap(),
            p("u1 u3 l1 l3 | u2 l2")
        );
    }

    #[test]
    fn ultracubic_generator_is_rotated_one_cubic() {
        let one = SpecialPartition::KCubic(1).build().unwrap();
        assert_eq!(
            one.to_lower_row(),
            SpecialPartition::UltracubicGenerator.build().unwrap()
        );
    }

    #[test]
    fn capping_and_rotating_lowers_k() {
        // cap the two bottom-right legs of the 1-cubic partition, then rotate
        let one = SpecialPartition::KCubic(1).build().unwrap();
        let capped = one.fuse_points(4, 5).delete_points(&[4, 5]);
        assert_eq!(capped.shape(), (3, 1));
        let rotated = capped.rotate(Side::Right, Row::Upper).unwrap();
        assert_eq!(rotated.shape(), (2, 2));
        assert_eq!(rotated, SpecialPartition::KCubic(0).build().unwrap());
    }

    #[test]
    fn names_round_trip() {
        for sp in [
            SpecialPartition::HalfCommutation,
            SpecialPartition::SMixing(4),
            SpecialPartition::KCubic(2),
            SpecialPartition::UltracubicGenerator,
        ] {
            assert_eq!(sp.to_string().parse::<SpecialPartition>().unwrap(), sp);
        }
    }
}
