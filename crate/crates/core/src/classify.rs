//! Bounded verification of the classification machinery: cappings, block
//! size sets, the associated noncrossing category, and the closure lemmas.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{generate, Base, CategoryId, SpecialPartition, MAX_CLOSURE_LEGS};
use crate::error::{Error, Result};
use crate::partition::{shapes_up_to, Partition, Partitions};

/// A capping, with 1-based positions in the counterclockwise order that
/// starts at the bottom left (lower row left to right, then upper row right
/// to left).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Capping {
    /// Joins positions `pos` and `pos + 1` (cyclically) and removes both.
    Semicircle(usize),
    Singleton(usize),
    Doubleton(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CappingKind {
    Semicircle,
    Singleton,
    Doubleton,
}

impl Capping {
    pub fn kind(&self) -> CappingKind {
        match self {
            Capping::Semicircle(_) => CappingKind::Semicircle,
            Capping::Singleton(_) => CappingKind::Singleton,
            Capping::Doubleton(..) => CappingKind::Doubleton,
        }
    }

    /// Every capping of the given kind on a partition with `legs` legs.
    pub fn all(kind: CappingKind, legs: usize) -> Vec<Capping> {
        match kind {
            CappingKind::Semicircle if legs >= 2 => (1..=legs).map(Capping::Semicircle).collect(),
            CappingKind::Singleton => (1..=legs).map(Capping::Singleton).collect(),
            CappingKind::Doubleton => (1..=legs)
                .flat_map(|a| (a + 1..=legs).map(move |b| Capping::Doubleton(a, b)))
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Capping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capping::Semicircle(a) => write!(f, "semicircle({a})"),
            Capping::Singleton(a) => write!(f, "singleton({a})"),
            Capping::Doubleton(a, b) => write!(f, "doubleton({a},{b})"),
        }
    }
}

impl FromStr for Capping {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::InvalidCapping(format!("cannot parse '{t}'"));
        let (name, args) = t
            .strip_suffix(')')
            .and_then(|r| r.split_once('('))
            .ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name.trim(), nums.as_slice()) {
            ("semicircle", [a]) => Ok(Capping::Semicircle(*a)),
            ("singleton", [a]) => Ok(Capping::Singleton(*a)),
            ("doubleton", [a, b]) => Ok(Capping::Doubleton(*a, *b)),
            _ => Err(bad()),
        }
    }
}

pub fn apply_capping(p: &Partition, c: Capping) -> Result<Partition> {
    let j = p.legs();
    let ccw: Vec<usize> = p.counterclockwise_order().collect();
    let at = |pos: usize| -> Result<usize> {
        if pos == 0 || pos > j {
            Err(Error::InvalidCapping(format!("position {pos} outside 1..={j}")))
        } else {
            Ok(ccw[pos - 1])
        }
    };
    match c {
        Capping::Semicircle(pos) => {
            if j < 2 {
                return Err(Error::InvalidCapping("semicircle needs two legs".into()));
            }
            let a = at(pos)?;
            let b = ccw[pos % j];
            Ok(p.fuse_points(a, b).delete_points(&[a, b]))
        }
        Capping::Singleton(pos) => Ok(p.delete_points(&[at(pos)?])),
        Capping::Doubleton(x, y) => {
            if x == y {
                return Err(Error::InvalidCapping(format!("doubleton positions coincide at {x}")));
            }
            Ok(p.delete_points(&[at(x)?, at(y)?]))
        }
    }
}

/// Representatives `P(0, j)`, `j ≤ max_legs`, of the rotation classes of
/// members of `c`; every category is closed under rotation.
fn one_row_members(c: &CategoryId, max_legs: usize) -> Vec<Partition> {
    (0..=max_legs).flat_map(|j| c.members(0, j).collect::<Vec<_>>()).collect()
}

/// Block sizes occurring among members of `c` with at most `max_legs` legs.
pub fn lambda_set(c: &CategoryId, max_legs: usize) -> Result<BTreeSet<usize>> {
    check_legs(max_legs)?;
    Ok(one_row_members(c, max_legs)
        .iter()
        .flat_map(|p| p.block_sizes())
        .collect())
}

fn check_legs(max_legs: usize) -> Result<()> {
    if max_legs > MAX_CLOSURE_LEGS {
        return Err(Error::BoundExceeded {
            legs: max_legs,
            bound: MAX_CLOSURE_LEGS,
        });
    }
    Ok(())
}

/// The noncrossing family `NC_x` whose table equals the noncrossing members
/// of `c`, compared over all shapes with at most `max_legs` legs.
pub fn associated_easy_group(c: &CategoryId, max_legs: usize) -> Result<CategoryId> {
    check_legs(max_legs)?;
    let shapes: Vec<(usize, usize)> = shapes_up_to(max_legs).collect();
    let nc: Vec<Partition> = shapes
        .par_iter()
        .flat_map_iter(|&(k, l)| Partitions::new(k, l).filter(|p| p.is_noncrossing()))
        .collect();
    let target: Vec<bool> = nc.par_iter().map(|p| c.contains(p)).collect();
    Base::ALL
        .iter()
        .map(|&b| CategoryId::Free(b))
        .find(|f| nc.par_iter().zip(&target).all(|(p, &t)| f.contains(p) == t))
        .ok_or_else(|| Error::NoMatch(format!("{c} at {max_legs} legs")))
}

/// Outcome of a bounded verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub lemma: String,
    pub case: Option<usize>,
    pub bound: usize,
    /// Leg bound of the swept or sampled partitions, when it differs from `bound`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_legs: Option<usize>,
    pub checked_count: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_even_up_to(c: &CategoryId, max_legs: usize) -> bool {
    // odd-leg members rotate into P(0, j) with j odd
    (1..=max_legs).step_by(2).all(|j| c.members(0, j).next().is_none())
}

pub fn verify_lemma_5_2(c: &CategoryId, max_legs: usize) -> Result<Report> {
    let k = associated_easy_group(c, max_legs)?;
    let lg = lambda_set(c, max_legs)?;
    let lk = lambda_set(&k, max_legs)?;
    let mut failures = Vec::new();
    let shifted: BTreeSet<usize> = lk.iter().flat_map(|&x| [x, x - 1]).filter(|&x| x > 0).collect();
    if !lk.is_subset(&lg) {
        failures.push(format!("block sizes of {k} {lk:?} not contained in those of {c} {lg:?}"));
    }
    if !lg.is_subset(&shifted) {
        failures.push(format!("block sizes of {c} {lg:?} exceed those of {k} and one less"));
    }
    if lg.contains(&1) && !lk.contains(&1) {
        failures.push(format!("{c} has singletons but {k} does not"));
    }
    if is_even_up_to(&k, max_legs) && !is_even_up_to(c, max_legs) {
        failures.push(format!("{k} is even but {c} is not"));
    }
    Ok(Report {
        lemma: "5.2".into(),
        case: None,
        bound: max_legs,
        sample_legs: None,
        checked_count: 3,
        failures,
    })
}

/// The data of one of the six capping/closure cases.
#[derive(Clone, Copy, Debug)]
pub struct LemmaCase {
    /// `p` ranges over `outer − inner`.
    pub outer: CategoryId,
    pub inner: CategoryId,
    /// Noncrossing category adjoined when generating.
    pub base: CategoryId,
    pub capping: CappingKind,
    /// Capping is asserted for partitions with more legs than this.
    pub min_legs: usize,
}

pub fn lemma_case(case: usize) -> Result<LemmaCase> {
    use CategoryId::{Classical, Free};
    let (outer, inner, base, capping, min_legs) = match case {
        1 => (Classical(Base::O), CategoryId::Eo, Free(Base::O), CappingKind::Semicircle, 4),
        2 => (CategoryId::Eo, Free(Base::O), Free(Base::O), CappingKind::Semicircle, 6),
        3 => (Classical(Base::S), Free(Base::S), Free(Base::S), CappingKind::Singleton, 4),
        4 => (Classical(Base::B), Free(Base::B), Free(Base::B), CappingKind::Singleton, 4),
        5 => (Classical(Base::SPrime), Free(Base::SPrime), Free(Base::SPrime), CappingKind::Doubleton, 4),
        6 => (Classical(Base::BPrime), Free(Base::BPrime), Free(Base::BPrime), CappingKind::Doubleton, 4),
        _ => return Err(Error::InvalidParameter(format!("case must be in 1..=6, got {case}"))),
    };
    Ok(LemmaCase {
        outer,
        inner,
        base,
        capping,
        min_legs,
    })
}

impl LemmaCase {
    pub fn in_difference(&self, p: &Partition) -> bool {
        self.outer.contains(p) && !self.inner.contains(p)
    }

    /// Category that `p` together with the base should generate.
    pub fn target(&self) -> CategoryId {
        self.outer
    }
}

/// Every `p` in the difference set with `min_legs < j ≤ max_legs` legs, over
/// all shapes, has a capping of the stated kind that stays in the set.
pub fn verify_lemma_6_2(case: usize, max_legs: usize) -> Result<Report> {
    let lc = lemma_case(case)?;
    if max_legs > 8 {
        return Err(Error::BoundExceeded { legs: max_legs, bound: 8 });
    }
    let candidates: Vec<Partition> = shapes_up_to(max_legs)
        .filter(|(k, l)| k + l > lc.min_legs)
        .flat_map(|(k, l)| Partitions::new(k, l).filter(|p| lc.in_difference(p)).collect::<Vec<_>>())
        .collect();
    let failures: Vec<String> = candidates
        .par_iter()
        .filter(|p| {
            !Capping::all(lc.capping, p.legs())
                .into_iter()
                .any(|c| apply_capping(p, c).is_ok_and(|q| lc.in_difference(&q)))
        })
        .map(|p| format!("{p}: no {:?} capping stays in {} minus {}", lc.capping, lc.outer, lc.inner))
        .collect();
    Ok(Report {
        lemma: "6.2".into(),
        case: Some(case),
        bound: max_legs,
        sample_legs: None,
        checked_count: candidates.len(),
        failures,
    })
}

/// Fixed sample set for the difference-set closure check: every case gets partitions of
/// 4 and 6 legs, in several shapes.
pub fn lemma_6_3_samples(case: usize) -> Result<Vec<Partition>> {
    lemma_case(case)?;
    let texts: &[&str] = match case {
        1 => &["u1 l2 | u2 l1", "l1 l3 | l2 l4", "l1 l2 | l3 l5 | l4 l6"],
        2 => &["u1 l3 | u2 l2 | u3 l1", "l1 l4 | l2 l5 | l3 l6"],
        3 => &["u1 l2 | u2 l1", "l1 l3 | l2 l4 l5", "u1 u3 | u2 l1"],
        4 => &["u1 l2 | u2 l1", "l1 l3 | l2 l4 | l5", "u1 l2 | u2 l1 | u3"],
        5 => &["u1 l2 | u2 l1", "l1 l3 l5 l6 | l2 l4", "u1 u3 | u2 l1 l2 l3"],
        _ => &["u1 l2 | u2 l1", "l1 l3 | l2 l4 | l5 | l6", "l1 l4 | l2 l5 | l3 l6"],
    };
    texts.iter().map(|t| t.parse()).collect()
}

/// For each sample `p` of the difference set, `<p, base>` equals the target
/// category at `max_legs` legs.
pub fn verify_lemma_6_3(case: usize, samples: &[Partition], max_legs: usize) -> Result<Report> {
    let lc = lemma_case(case)?;
    if max_legs > 8 {
        return Err(Error::BoundExceeded { legs: max_legs, bound: 8 });
    }
    for p in samples {
        if !lc.in_difference(p) {
            return Err(Error::NotInDifferenceSet {
                partition: p.to_string(),
                set: format!("{} minus {}", lc.outer, lc.inner),
            });
        }
    }
    let results: Vec<Option<String>> = samples
        .par_iter()
        .map(|p| {
            let g = generate(std::slice::from_ref(p), Some(lc.base), max_legs)?;
            Ok((!g.equals_category(&lc.target()))
                .then(|| format!("{p}: generated {} members, {} has {}", g.len(), lc.target(), lc.target().table(max_legs).len())))
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        lemma: "6.3".into(),
        case: Some(case),
        bound: max_legs,
        sample_legs: samples.iter().map(|p| p.legs()).max(),
        checked_count: samples.len(),
        failures: results.into_iter().flatten().collect(),
    })
}

/// Categories allowed for `<p, NC_x>` with `p ∈ P_x`, for cases 1..=5 of the
/// trichotomy/dichotomy statement.
pub fn lemma_6_4_case(case: usize) -> Result<(CategoryId, Vec<CategoryId>)> {
    use CategoryId::{Classical, Free};
    let b = match case {
        1 => return Ok((Free(Base::O), vec![Classical(Base::O), CategoryId::Eo, Free(Base::O)])),
        2 => Base::S,
        3 => Base::B,
        4 => Base::SPrime,
        5 => Base::BPrime,
        _ => return Err(Error::InvalidParameter(format!("case must be in 1..=5, got {case}"))),
    };
    Ok((Free(b), vec![Classical(b), Free(b)]))
}

/// Every `p ∈ P_x` with at most `sample_legs` legs generates, together with
/// `NC_x` and at `max_legs`, one of the allowed categories. Partitions are
/// taken one per rotation class.
pub fn verify_lemma_6_4(case: usize, sample_legs: usize, max_legs: usize) -> Result<Report> {
    let (base, allowed) = lemma_6_4_case(case)?;
    check_legs(max_legs)?;
    let outer = allowed[0];
    let reps = one_row_members(&outer, sample_legs);
    let results: Vec<Option<String>> = reps
        .par_iter()
        .map(|p| {
            let g = generate(std::slice::from_ref(p), Some(base), max_legs)?;
            Ok((!allowed.iter().any(|c| g.equals_category(c)))
                .then(|| format!("{p}: generated table with {} members matches none", g.len())))
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        lemma: "6.4".into(),
        case: Some(case),
        bound: max_legs,
        sample_legs: Some(sample_legs),
        checked_count: reps.len(),
        failures: results.into_iter().flatten().collect(),
    })
}

/// Semicircle cappings applied twice, in every order.
fn double_semicircle_cappings(p: &Partition) -> Vec<Partition> {
    Capping::all(CappingKind::Semicircle, p.legs())
        .into_iter()
        .filter_map(|c| apply_capping(p, c).ok())
        .flat_map(|q| {
            Capping::all(CappingKind::Semicircle, q.legs())
                .into_iter()
                .filter_map(move |c| apply_capping(&q, c).ok())
                .collect::<Vec<_>>()
        })
        .collect()
}

/// The `k`-cubic partitions for `1 ≤ k ≤ k_max` generate the same category
/// over `NC_h`, which contains the cubic partition. Also checks that the
/// half-commutation partition next to the cubic one caps down to the
/// ultracubic partition.
pub fn verify_prop_4_3(k_max: usize, max_legs: usize) -> Result<Report> {
    if !(1..=3).contains(&k_max) {
        return Err(Error::InvalidParameter(format!("k_max must be in 1..=3, got {k_max}")));
    }
    check_legs(max_legs)?;
    let nch = Some(CategoryId::Free(Base::H));
    let cubic = SpecialPartition::KCubic(0).build()?;
    let ultra = SpecialPartition::KCubic(1).build()?;
    let reference = generate(std::slice::from_ref(&ultra), nch, max_legs)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 2..=k_max {
        let p = SpecialPartition::KCubic(k).build()?;
        if p.legs() > max_legs {
            failures.push(format!("k_cubic({k}) has {} legs, above the bound {max_legs}", p.legs()));
            continue;
        }
        let g = generate(std::slice::from_ref(&p), nch, max_legs)?;
        checked += 1;
        if g.table() != reference.table() {
            failures.push(format!(
                "k_cubic({k}) generates {} members, k_cubic(1) generates {}",
                g.len(),
                reference.len()
            ));
        }
    }
    checked += 1;
    if !reference.contains(&cubic) {
        failures.push("cubic partition missing from the ultracubic closure".into());
    }
    checked += 1;
    let hc = SpecialPartition::HalfCommutation.build()?;
    let glued = hc.tensor(&cubic);
    if !double_semicircle_cappings(&glued).contains(&ultra) {
        failures.push("half-commutation next to cubic does not cap to the ultracubic partition".into());
    }
    Ok(Report {
        lemma: "4.3".into(),
        case: Some(k_max),
        bound: max_legs,
        sample_legs: None,
        checked_count: checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Modulus;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn capping_examples() {
        assert_eq!(apply_capping(&Partition::pair(), Capping::Singleton(1)).unwrap(), p("l1"));
        let four = Partition::single_block(0, 4);
        assert_eq!(apply_capping(&four, Capping::Semicircle(1)).unwrap(), p("l1 l2"));
        assert_eq!(Capping::all(CappingKind::Semicircle, four.legs()).len(), 4);
        assert_eq!(Capping::all(CappingKind::Doubleton, 4).len(), 6);
    }

    #[test]
    fn semicircle_bars() {
        // positions 2 and 3 of P(1,1) run from the lower right to the upper right
        let id = Partition::identity_on(2);
        let q = apply_capping(&id, Capping::Semicircle(2)).unwrap();
        assert_eq!(q, Partition::identity());
        let q = apply_capping(&id, Capping::Semicircle(4)).unwrap();
        assert_eq!(q, Partition::identity());
        // capping the pair of the cup closes a loop
        assert_eq!(apply_capping(&Partition::pair(), Capping::Semicircle(1)).unwrap(), Partition::empty());
    }

    #[test]
    fn capping_errors() {
        assert!(apply_capping(&Partition::pair(), Capping::Singleton(3)).is_err());
        assert!(apply_capping(&Partition::pair(), Capping::Doubleton(1, 1)).is_err());
        assert!(apply_capping(&Partition::singleton(), Capping::Semicircle(1)).is_err());
        assert_eq!("doubleton(1,4)".parse::<Capping>().unwrap(), Capping::Doubleton(1, 4));
        assert!("bar(1)".parse::<Capping>().is_err());
    }

    #[test]
    fn lambda_examples() {
        let set = |c: CategoryId| lambda_set(&c, 8).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(set(CategoryId::Classical(Base::O)), vec![2]);
        assert_eq!(set(CategoryId::Classical(Base::B)), vec![1, 2]);
        assert_eq!(set(CategoryId::Classical(Base::S)), (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn associated_examples() {
        assert_eq!(associated_easy_group(&CategoryId::Eo, 6).unwrap(), CategoryId::Free(Base::O));
        assert_eq!(
            associated_easy_group(&CategoryId::SBalanced(Modulus::Finite(3)), 6).unwrap(),
            CategoryId::Free(Base::H)
        );
        assert_eq!(
            associated_easy_group(&CategoryId::Classical(Base::B), 6).unwrap(),
            CategoryId::Free(Base::B)
        );
    }

    #[test]
    fn lemma_5_2_examples() {
        for c in [CategoryId::Eh, CategoryId::Classical(Base::BPrime), CategoryId::Classical(Base::S)] {
            let r = verify_lemma_5_2(&c, 6).unwrap();
            assert!(r.passed(), "{c}: {:?}", r.failures);
        }
    }

    #[test]
    fn lemma_6_2_small_cases() {
        for case in [3, 4, 5, 6] {
            let r = verify_lemma_6_2(case, 6).unwrap();
            assert!(r.passed(), "case {case}: {:?}", r.failures);
            assert!(r.checked_count > 0);
        }
        // semicircle capping from 6 legs
        assert!(verify_lemma_6_2(1, 6).unwrap().passed());
    }

    #[test]
    fn lemma_6_3_rejects_outsiders() {
        let r = verify_lemma_6_3(3, &[Partition::pair()], 4);
        assert!(matches!(r, Err(Error::NotInDifferenceSet { .. })));
    }

    #[test]
    fn lemma_6_3_crossing() {
        let r = verify_lemma_6_3(3, &[Partition::crossing()], 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn samples_lie_in_their_sets() {
        for case in 1..=6 {
            let lc = lemma_case(case).unwrap();
            for s in lemma_6_3_samples(case).unwrap() {
                assert!(lc.in_difference(&s), "case {case}: {s}");
                assert!(s.legs() <= 6);
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let r = verify_lemma_6_2(3, 5).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lemma"], "6.2");
        assert_eq!(v["case"], 3);
        assert!(v["failures"].as_array().unwrap().is_empty());
    }
}
