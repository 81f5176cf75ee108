//! Categories of partitions: the six classical families, their noncrossing
//! versions, the half-liberated categories and the two hyperoctahedral series.

mod closure;
mod special;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{shapes_up_to, Partition, Partitions};

pub use closure::{
    axioms_hold, axioms_hold_for, generate, AxiomReport, Counterexample, GeneratedCategory,
    MAX_CLOSURE_LEGS,
};
pub use special::SpecialPartition;

/// The six easy groups `O, S, H, B, S', B'`, indexing both the classical and
/// the free families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    O,
    S,
    H,
    B,
    SPrime,
    BPrime,
}

impl Base {
    pub const ALL: [Base; 6] = [
        Base::O,
        Base::S,
        Base::H,
        Base::B,
        Base::SPrime,
        Base::BPrime,
    ];

    fn suffix(self) -> &'static str {
        match self {
            Base::O => "o",
            Base::S => "s",
            Base::H => "h",
            Base::B => "b",
            Base::SPrime => "s'",
            Base::BPrime => "b'",
        }
    }

    fn holds(self, p: &Partition) -> bool {
        match self {
            Base::O => p.is_pairing(),
            Base::S => true,
            Base::H => p.block_sizes_bounded(|s| s % 2 == 0),
            Base::B => p.block_sizes_bounded(|s| s <= 2),
            Base::SPrime => p.is_even(),
            Base::BPrime => p.is_even() && p.block_sizes_bounded(|s| s <= 2),
        }
    }
}

/// The parameter `s ∈ {2, 3, ...} ∪ {∞}` of the hyperoctahedral series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modulus {
    Finite(u32),
    Infinite,
}

impl Modulus {
    pub fn new(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParameter(format!("s must be at least 2, got {s}")));
        }
        Ok(Modulus::Finite(s))
    }

    /// Whether `x ≡ 0 (mod s)`, or `x = 0` for `s = ∞`.
    pub fn divides(self, x: i64) -> bool {
        match self {
            Modulus::Finite(s) => x.rem_euclid(s as i64) == 0,
            Modulus::Infinite => x == 0,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Finite(s) => write!(f, "{s}"),
            Modulus::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Modulus::Infinite),
            t => {
                let v: u32 = t
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad modulus '{t}'")))?;
                Modulus::new(v)
            }
        }
    }
}

/// A named category of partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryId {
    /// `P_x`: the category of the easy group `x`.
    Classical(Base),
    /// `NC_x`: noncrossing part of `P_x`.
    Free(Base),
    /// `E_o`: pairings joining odd labels to even labels.
    Eo,
    /// `E_h`: every block has as many odd as even labels.
    Eh,
    /// `E_h^s`: per block `#odd − #even ≡ 0 (mod s)`, even total.
    SBalanced(Modulus),
    /// `E_h^[s]`: every subpartition is `s`-balanced.
    LocallySBalanced(Modulus),
}

impl CategoryId {
    /// The fourteen parameter-free families.
    pub fn fixed_families() -> Vec<CategoryId> {
        let mut out: Vec<_> = Base::ALL.iter().map(|&b| CategoryId::Classical(b)).collect();
        out.extend(Base::ALL.iter().map(|&b| CategoryId::Free(b)));
        out.push(CategoryId::Eo);
        out.push(CategoryId::Eh);
        out
    }

    /// All sixteen families, with the two series instantiated at each modulus.
    pub fn all_families(moduli: &[Modulus]) -> Vec<CategoryId> {
        let mut out = Self::fixed_families();
        out.extend(moduli.iter().map(|&s| CategoryId::SBalanced(s)));
        out.extend(moduli.iter().map(|&s| CategoryId::LocallySBalanced(s)));
        out
    }

    /// Membership predicate.
    pub fn contains(&self, p: &Partition) -> bool {
        match *self {
            CategoryId::Classical(b) => b.holds(p),
            CategoryId::Free(b) => b.holds(p) && p.is_noncrossing(),
            CategoryId::Eo => p.is_pairing() && block_balance(p, Modulus::Infinite),
            CategoryId::Eh => block_balance(p, Modulus::Infinite),
            CategoryId::SBalanced(s) => p.is_even() && block_balance(p, s),
            CategoryId::LocallySBalanced(s) => locally_balanced(p, s),
        }
    }

    /// `D(k,l)`: members of one shape, in canonical order.
    pub fn members(&self, upper: usize, lower: usize) -> impl Iterator<Item = Partition> + '_ {
        Partitions::new(upper, lower).filter(move |p| self.contains(p))
    }

    /// All members with at most `max_legs` legs.
    pub fn table(&self, max_legs: usize) -> BTreeSet<Partition> {
        shapes_up_to(max_legs)
            .flat_map(|(k, l)| self.members(k, l).collect::<Vec<_>>())
            .collect()
    }

    /// Whether every member has an even number of legs.
    pub fn is_even(&self) -> bool {
        !matches!(
            self,
            CategoryId::Classical(Base::S | Base::B) | CategoryId::Free(Base::S | Base::B)
        )
    }
}

/// Per-block `#odd − #even` of clockwise parity labels, tested against `s`.
fn block_balance(p: &Partition, s: Modulus) -> bool {
    let mut diff = [0i16; 256];
    for (i, &b) in p.labels().iter().enumerate() {
        diff[b as usize] += if p.parity_label(i) % 2 == 1 { 1 } else { -1 };
    }
    diff[..p.block_count()].iter().all(|&d| s.divides(d as i64))
}

fn locally_balanced(p: &Partition, s: Modulus) -> bool {
    // a one-block subpartition is s-balanced only if the block has even size
    if !p.block_sizes_bounded(|n| n % 2 == 0) {
        return false;
    }
    let nb = p.block_count();
    if nb >= 32 {
        return p.subpartitions().all(|q| q.is_even() && block_balance(&q, s));
    }
    let order: Vec<usize> = p.clockwise_order().collect();
    (1u64..1 << nb).all(|mask| {
        let mut diff = [0i16; 32];
        let mut rank = 0usize;
        for &i in &order {
            let b = p.labels()[i] as usize;
            if mask >> b & 1 == 1 {
                rank += 1;
                diff[b] += if rank % 2 == 1 { 1 } else { -1 };
            }
        }
        (0..nb).all(|b| mask >> b & 1 == 0 || s.divides(diff[b] as i64))
    })
}

impl Serialize for CategoryId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CategoryId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryId::Classical(b) => write!(f, "P{}", b.suffix()),
            CategoryId::Free(b) => write!(f, "NC{}", b.suffix()),
            CategoryId::Eo => f.write_str("Eo"),
            CategoryId::Eh => f.write_str("Eh"),
            CategoryId::SBalanced(s) => write!(f, "Eh(s={s})"),
            CategoryId::LocallySBalanced(s) => write!(f, "Eh[s={s}]"),
        }
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let base = |suffix: &str| {
            Base::ALL
                .iter()
                .copied()
                .find(|b| b.suffix() == suffix)
                .ok_or_else(|| Error::UnknownName(format!("category '{t}'")))
        };
        if let Some(rest) = t.strip_prefix("NC") {
            return Ok(CategoryId::Free(base(rest)?));
        }
        if let Some(rest) = t.strip_prefix("Eh(s=").and_then(|r| r.strip_suffix(')')) {
            return Ok(CategoryId::SBalanced(rest.parse()?));
        }
        if let Some(rest) = t.strip_prefix("Eh[s=").and_then(|r| r.strip_suffix(']')) {
            return Ok(CategoryId::LocallySBalanced(rest.parse()?));
        }
        match t {
            "Eo" => return Ok(CategoryId::Eo),
            "Eh" => return Ok(CategoryId::Eh),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('P') {
            return Ok(CategoryId::Classical(base(rest)?));
        }
        Err(Error::UnknownName(format!("category '{t}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn names_round_trip() {
        let all = CategoryId::all_families(&[Modulus::Finite(3), Modulus::Infinite]);
        assert_eq!(all.len(), 18);
        for c in all {
            assert_eq!(c.to_string().parse::<CategoryId>().unwrap(), c);
        }
        assert_eq!(
            "Ps'".parse::<CategoryId>().unwrap(),
            CategoryId::Classical(Base::SPrime)
        );
        assert_eq!(
            "Eh(s=inf)".parse::<CategoryId>().unwrap(),
            CategoryId::SBalanced(Modulus::Infinite)
        );
        assert!("Px".parse::<CategoryId>().is_err());
        assert!("Eh(s=1)".parse::<CategoryId>().is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(CategoryId::Eh.contains(&Partition::single_block(0, 4)));
        let h = p("l1 l4 | l2 l5 | l3 l6");
        let three = Modulus::Finite(3);
        assert!(CategoryId::SBalanced(three).contains(&h));
        assert!(!CategoryId::LocallySBalanced(three).contains(&h));
        assert!(!CategoryId::Classical(Base::H).contains(&p("l1 l2 l3 | l4")));
    }

    #[test]
    fn half_liberation_categories() {
        let half = SpecialPartition::HalfCommutation.build().unwrap();
        assert!(CategoryId::Eo.contains(&half));
        assert!(!CategoryId::Free(Base::O).contains(&half));
        assert!(!CategoryId::Eo.contains(&Partition::crossing()));
        assert!(CategoryId::Eo.contains(&Partition::identity()));
        assert!(CategoryId::Eo.contains(&Partition::pair()));
    }

    #[test]
    fn singleton_categories() {
        let s = Partition::singleton();
        assert!(CategoryId::Classical(Base::B).contains(&s));
        assert!(!CategoryId::Classical(Base::BPrime).contains(&s));
        assert!(CategoryId::Classical(Base::BPrime).contains(&s.tensor(&s)));
        assert!(!CategoryId::Eh.contains(&s.tensor(&s)));
    }

    #[test]
    fn odd_total_is_never_balanced() {
        for s in [Modulus::Finite(2), Modulus::Finite(3), Modulus::Infinite] {
            for n in [1, 3, 5] {
                assert_eq!(CategoryId::SBalanced(s).members(0, n).count(), 0);
            }
        }
    }

    #[test]
    fn s_equals_two_collapses_to_even_blocks() {
        let two = Modulus::Finite(2);
        for (k, l) in shapes_up_to(6) {
            for q in Partitions::new(k, l) {
                let ph = CategoryId::Classical(Base::H).contains(&q);
                assert_eq!(CategoryId::SBalanced(two).contains(&q), ph);
                assert_eq!(CategoryId::LocallySBalanced(two).contains(&q), ph);
            }
        }
    }

    #[test]
    fn locally_balanced_matches_subpartition_definition() {
        for s in [Modulus::Finite(3), Modulus::Finite(4), Modulus::Infinite] {
            for (k, l) in shapes_up_to(6) {
                for q in Partitions::new(k, l) {
                    let direct = q
                        .subpartitions()
                        .all(|r| CategoryId::SBalanced(s).contains(&r));
                    assert_eq!(CategoryId::LocallySBalanced(s).contains(&q), direct, "{q:?}");
                }
            }
        }
    }
}
