//! Bounded closure under the categorical operations.
//!
//! Everything here works on the finite slice of partitions with at most `L`
//! legs. Operations whose result would exceed `L` legs are skipped, so a
//! generated table is an under-approximation of the true category restricted
//! to `L` legs: compositions through larger intermediate diagrams are missed.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::CategoryId;
use crate::error::{Error, Result};
use crate::partition::{shapes_up_to, Partition, MAX_POINTS};

/// Largest leg bound accepted by the closure routines.
pub const MAX_CLOSURE_LEGS: usize = 10;

/// A closure failure: applying `operation` to `inputs` left the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub operation: String,
    pub inputs: Vec<Partition>,
    pub output: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub bound: usize,
    pub member_count: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

fn check_bound(bound: usize) -> Result<()> {
    if bound > MAX_CLOSURE_LEGS {
        return Err(Error::BoundExceeded {
            legs: bound,
            bound: MAX_CLOSURE_LEGS,
        });
    }
    Ok(())
}

/// Members of a predicate, bucketed by shape `(k, l)`.
struct ShapeTable {
    bound: usize,
    by_shape: HashMap<(usize, usize), Vec<Partition>>,
}

impl ShapeTable {
    fn from_predicate(pred: &(impl Fn(&Partition) -> bool + Sync), bound: usize) -> Self {
        let by_shape = shapes_up_to(bound)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(k, l)| {
                let members: Vec<_> = crate::partition::Partitions::new(k, l)
                    .filter(|p| pred(p))
                    .collect();
                ((k, l), members)
            })
            .collect();
        ShapeTable { bound, by_shape }
    }

    fn shape(&self, k: usize, l: usize) -> &[Partition] {
        self.by_shape.get(&(k, l)).map_or(&[], |v| v.as_slice())
    }

    fn len(&self) -> usize {
        self.by_shape.values().map(Vec::len).sum()
    }

    fn all(&self) -> impl Iterator<Item = &Partition> {
        shapes_up_to(self.bound).flat_map(move |(k, l)| self.shape(k, l).iter())
    }
}

/// Checks closure of a category's members with at most `bound` legs.
pub fn axioms_hold(c: &CategoryId, bound: usize) -> Result<AxiomReport> {
    axioms_hold_for(
        |p| c.contains(p),
        bound,
        &[Partition::identity(), Partition::pair()],
    )
}

/// Checks closure of an arbitrary predicate under tensor product, composition,
/// involution and rotation, restricted to results within `bound` legs, and
/// that every partition in `required` within the bound is a member.
pub fn axioms_hold_for(
    pred: impl Fn(&Partition) -> bool + Sync,
    bound: usize,
    required: &[Partition],
) -> Result<AxiomReport> {
    check_bound(bound)?;
    let table = ShapeTable::from_predicate(&pred, bound);
    let report = |cx: Option<Counterexample>| AxiomReport {
        bound,
        member_count: table.len(),
        passed: cx.is_none(),
        counterexample: cx,
    };

    for r in required.iter().filter(|r| r.legs() <= bound) {
        if !pred(r) {
            return Ok(report(Some(Counterexample {
                operation: "contains".into(),
                inputs: vec![],
                output: r.clone(),
            })));
        }
    }

    for p in table.all() {
        let inv = p.involute();
        if !pred(&inv) {
            return Ok(report(Some(Counterexample {
                operation: "involute".into(),
                inputs: vec![p.clone()],
                output: inv,
            })));
        }
        for r in p.rotations() {
            if !pred(&r) {
                return Ok(report(Some(Counterexample {
                    operation: "rotate".into(),
                    inputs: vec![p.clone()],
                    output: r,
                })));
            }
        }
    }

    let shapes: Vec<_> = shapes_up_to(bound).collect();

    let tensor_cx = shapes.par_iter().find_map_first(|&(k1, l1)| {
        for p in table.shape(k1, l1) {
            for (k2, l2) in shapes_up_to(bound - k1 - l1) {
                for q in table.shape(k2, l2) {
                    let t = p.tensor(q);
                    if !pred(&t) {
                        return Some(Counterexample {
                            operation: "tensor".into(),
                            inputs: vec![p.clone(), q.clone()],
                            output: t,
                        });
                    }
                }
            }
        }
        None
    });
    if tensor_cx.is_some() {
        return Ok(report(tensor_cx));
    }

    // p ∈ P(k,l) over q ∈ P(l,m) with k + m within the bound
    let compose_cx = shapes.par_iter().find_map_first(|&(k, l)| {
        for p in table.shape(k, l) {
            for m in 0..=(bound - l).min(bound - k) {
                for q in table.shape(l, m) {
                    let (r, _) = p.compose_unchecked(q);
                    if !pred(&r) {
                        return Some(Counterexample {
                            operation: "compose".into(),
                            inputs: vec![p.clone(), q.clone()],
                            output: r,
                        });
                    }
                }
            }
        }
        None
    });
    Ok(report(compose_cx))
}

/// The category generated by a list of partitions on top of a base category,
/// computed up to a leg bound.
#[derive(Clone, Debug)]
pub struct GeneratedCategory {
    generators: Vec<Partition>,
    base: Option<CategoryId>,
    bound: usize,
    members: BTreeSet<Partition>,
}

impl GeneratedCategory {
    pub fn generators(&self) -> &[Partition] {
        &self.generators
    }

    pub fn base(&self) -> Option<CategoryId> {
        self.base
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl Iterator<Item = &Partition> {
        self.members.iter()
    }

    pub fn table(&self) -> &BTreeSet<Partition> {
        &self.members
    }

    /// Whether the table equals the members of `c` with at most `bound` legs.
    pub fn equals_category(&self, c: &CategoryId) -> bool {
        self.members.len() == c.table(self.bound).len() && self.members.iter().all(|p| c.contains(p))
    }

    /// Members with at most `legs` legs.
    pub fn restricted(&self, legs: usize) -> BTreeSet<Partition> {
        self.members.iter().filter(|p| p.legs() <= legs).cloned().collect()
    }
}

/// Fixed-point closure of `gens ∪ base ∪ {|, ∩}` under tensor product,
/// composition, involution and rotation, discarding results above `bound`
/// legs.
pub fn generate(
    gens: &[Partition],
    base: Option<CategoryId>,
    bound: usize,
) -> Result<GeneratedCategory> {
    check_bound(bound)?;
    assert!(bound <= MAX_POINTS);

    let mut seen: HashSet<Partition> = HashSet::new();
    let mut by_shape: HashMap<(usize, usize), Vec<Partition>> = HashMap::new();
    let mut queue: VecDeque<Partition> = VecDeque::new();

    let insert = |p: Partition,
                      seen: &mut HashSet<Partition>,
                      by_shape: &mut HashMap<(usize, usize), Vec<Partition>>,
                      queue: &mut VecDeque<Partition>| {
        if p.legs() <= bound && !seen.contains(&p) {
            seen.insert(p.clone());
            by_shape.entry(p.shape()).or_default().push(p.clone());
            queue.push_back(p);
        }
    };

    let mut seeds: Vec<Partition> = gens.to_vec();
    seeds.push(Partition::identity());
    seeds.push(Partition::pair());
    if let Some(c) = base {
        seeds.extend(c.table(bound));
    }
    for s in seeds {
        insert(s, &mut seen, &mut by_shape, &mut queue);
    }

    while let Some(x) = queue.pop_front() {
        let (k, l) = x.shape();
        let mut produced: Vec<Partition> = Vec::new();
        produced.push(x.involute());
        produced.extend(x.rotations());

        let room = bound - x.legs();
        for (k2, l2) in shapes_up_to(room) {
            if let Some(ys) = by_shape.get(&(k2, l2)) {
                for y in ys {
                    produced.push(x.tensor(y));
                    produced.push(y.tensor(&x));
                }
            }
        }
        // x over y: y ∈ P(l, m), k + m <= bound
        for m in 0..=bound.saturating_sub(k) {
            if let Some(ys) = by_shape.get(&(l, m)) {
                for y in ys {
                    produced.push(x.compose_unchecked(y).0);
                }
            }
        }
        // y over x: y ∈ P(j, k), j + l <= bound
        for j in 0..=bound.saturating_sub(l) {
            if let Some(ys) = by_shape.get(&(j, k)) {
                for y in ys {
                    produced.push(y.compose_unchecked(&x).0);
                }
            }
        }
        for p in produced {
            insert(p, &mut seen, &mut by_shape, &mut queue);
        }
    }

    Ok(GeneratedCategory {
        generators: gens.to_vec(),
        base,
        bound,
        members: seen.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{Base, Modulus};

    #[test]
    fn classical_categories_are_closed_at_six() {
        for c in CategoryId::fixed_families() {
            let r = axioms_hold(&c, 6).unwrap();
            assert!(r.passed, "{c}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn series_are_closed_at_six() {
        for s in [Modulus::Finite(3), Modulus::Finite(4), Modulus::Infinite] {
            for c in [CategoryId::SBalanced(s), CategoryId::LocallySBalanced(s)] {
                let r = axioms_hold(&c, 6).unwrap();
                assert!(r.passed, "{c}: {:?}", r.counterexample);
            }
        }
    }

    #[test]
    fn small_blocks_fail_under_composition() {
        let r = axioms_hold_for(
            |p| p.block_sizes().first().is_none_or(|&s| s <= 3),
            6,
            &[Partition::identity(), Partition::pair()],
        )
        .unwrap();
        assert!(!r.passed);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.operation, "compose");
        assert!(cx.output.block_sizes()[0] > 3);
    }

    #[test]
    fn missing_base_partition_is_reported() {
        // singletons only: lacks the pair
        let r = axioms_hold_for(
            |p| p.block_sizes().iter().all(|&s| s == 1),
            4,
            &[Partition::pair()],
        )
        .unwrap();
        assert_eq!(r.counterexample.unwrap().operation, "contains");
    }

    #[test]
    fn closure_of_a_category_is_itself() {
        let g = generate(&[], Some(CategoryId::Free(Base::O)), 6).unwrap();
        assert!(g.equals_category(&CategoryId::Free(Base::O)));
    }

    #[test]
    fn crossing_generates_all_partitions() {
        let g = generate(&[Partition::crossing()], Some(CategoryId::Free(Base::S)), 6).unwrap();
        assert!(g.equals_category(&CategoryId::Classical(Base::S)));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(generate(&[], None, 11).is_err());
        assert!(axioms_hold(&CategoryId::Eo, 11).is_err());
    }
}
