use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Serialize, Serializer};

use crate::category::{Base, CategoryId, Modulus};
use crate::error::{Error, Result};

/// Largest finite group enumerated element by element.
pub const MAX_GROUP_ORDER: u128 = 100_000;

/// The classical easy groups, plus the complex reflection groups `H_n^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    O,
    S,
    H,
    B,
    SPrime,
    BPrime,
    /// `Z_s ≀ S_n`.
    Hs(u32),
}

impl GroupTag {
    pub fn new_hs(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParameter(format!("H_n^s needs s >= 2, got {s}")));
        }
        Ok(GroupTag::Hs(s))
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, GroupTag::O | GroupTag::B | GroupTag::BPrime)
    }

    /// Category of partitions describing the intertwiners.
    pub fn category(self) -> CategoryId {
        match self {
            GroupTag::O => CategoryId::Classical(Base::O),
            GroupTag::S => CategoryId::Classical(Base::S),
            GroupTag::H => CategoryId::Classical(Base::H),
            GroupTag::B => CategoryId::Classical(Base::B),
            GroupTag::SPrime => CategoryId::Classical(Base::SPrime),
            GroupTag::BPrime => CategoryId::Classical(Base::BPrime),
            GroupTag::Hs(s) => CategoryId::SBalanced(Modulus::Finite(s)),
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::O => f.write_str("O"),
            GroupTag::S => f.write_str("S"),
            GroupTag::H => f.write_str("H"),
            GroupTag::B => f.write_str("B"),
            GroupTag::SPrime => f.write_str("S'"),
            GroupTag::BPrime => f.write_str("B'"),
            GroupTag::Hs(s) => write!(f, "Hs({s})"),
        }
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(s) = t.strip_prefix("Hs(").and_then(|r| r.strip_suffix(')')) {
            let s = s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad order in '{t}'")))?;
            return GroupTag::new_hs(s);
        }
        match t {
            "O" => Ok(GroupTag::O),
            "S" => Ok(GroupTag::S),
            "H" => Ok(GroupTag::H),
            "B" => Ok(GroupTag::B),
            "S'" | "Sprime" => Ok(GroupTag::SPrime),
            "B'" | "Bprime" => Ok(GroupTag::BPrime),
            _ => Err(Error::UnknownName(format!("group '{t}'"))),
        }
    }
}

impl Serialize for GroupTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A group element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Element {
    /// `g e_c = ω^{phase[c]} e_{perm[c]}` with `ω = exp(2πi/order)`.
    Monomial {
        perm: Vec<usize>,
        phase: Vec<u32>,
        order: u32,
    },
    /// Real orthogonal matrix.
    Dense(#[serde(serialize_with = "serialize_dense")] DMatrix<f64>),
}

fn serialize_dense<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupSample {
    tag: GroupTag,
    n: usize,
    seed: Option<u64>,
    element: Element,
}

pub(crate) fn root_of_unity(e: u32, order: u32) -> Complex64 {
    match (e % order, order) {
        (0, _) => Complex64::new(1.0, 0.0),
        (e, o) if 2 * e == o => Complex64::new(-1.0, 0.0),
        (e, o) if 4 * e == o => Complex64::new(0.0, 1.0),
        (e, o) if 4 * e == 3 * o => Complex64::new(0.0, -1.0),
        (e, o) => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / o as f64),
    }
}

impl GroupSample {
    /// The monomial element `e_c ↦ ω^{phase[c]} e_{perm[c]}` of `tag`.
    pub fn monomial(tag: GroupTag, perm: Vec<usize>, phase: Vec<u32>) -> Result<Self> {
        let n = perm.len();
        check_n(n)?;
        let order = match tag {
            GroupTag::S => 1,
            GroupTag::H | GroupTag::SPrime => 2,
            GroupTag::Hs(s) => s,
            _ => return Err(Error::InvalidParameter(format!("{tag} is not monomial"))),
        };
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        let valid = sorted.iter().copied().eq(0..n)
            && phase.len() == n
            && phase.iter().all(|&e| e < order)
            && (tag != GroupTag::SPrime || phase.iter().all(|&e| e == phase[0]));
        if !valid {
            return Err(Error::InvalidParameter(format!("not an element of {tag}")));
        }
        Ok(GroupSample {
            tag,
            n,
            seed: None,
            element: Element::Monomial { perm, phase, order },
        })
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        match &self.element {
            Element::Monomial { perm, phase, order } => {
                let mut m = DMatrix::from_element(self.n, self.n, Complex64::new(0.0, 0.0));
                for c in 0..self.n {
                    m[(perm[c], c)] = root_of_unity(phase[c], *order);
                }
                m
            }
            Element::Dense(d) => d.map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn trace(&self) -> Complex64 {
        match &self.element {
            Element::Monomial { perm, phase, order } => (0..self.n)
                .filter(|&c| perm[c] == c)
                .map(|c| root_of_unity(phase[c], *order))
                .sum(),
            Element::Dense(d) => Complex64::new(d.trace(), 0.0),
        }
    }

    /// `‖g g* − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.matrix();
        (&m * m.adjoint() - DMatrix::identity(self.n, self.n)).norm()
    }

    /// Largest deviation of a row sum from 1.
    pub fn row_sum_residual(&self) -> f64 {
        let m = self.matrix();
        m.row_iter()
            .map(|r| (r.iter().sum::<Complex64>() - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

fn haar_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..n {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}

/// `(1/n) J + V O V^T`, with `V` an orthonormal basis of the complement of
/// the all-ones vector and `O` Haar on `O_{n−1}`.
fn haar_bistochastic(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    if n == 1 {
        return DMatrix::identity(1, 1);
    }
    let mut basis = DMatrix::<f64>::identity(n, n);
    basis.column_mut(0).fill(1.0 / (n as f64).sqrt());
    let q = basis.qr().q();
    let v = q.columns(1, n - 1).into_owned();
    let o = haar_orthogonal(n - 1, rng);
    DMatrix::from_element(n, n, 1.0 / n as f64) + &v * o * v.transpose()
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension n must be at least 1".into()));
    }
    Ok(())
}

/// Haar sample drawn from `rng`.
pub fn sample_with(tag: GroupTag, n: usize, rng: &mut ChaCha8Rng) -> Result<GroupSample> {
    check_n(n)?;
    if let GroupTag::Hs(s) = tag {
        GroupTag::new_hs(s)?;
    }
    let monomial = |perm, phase, order| Element::Monomial { perm, phase, order };
    let element = match tag {
        GroupTag::S => monomial(shuffled(n, rng), vec![0; n], 1),
        GroupTag::H => {
            let perm = shuffled(n, rng);
            monomial(perm, (0..n).map(|_| rng.random_range(0..2)).collect(), 2)
        }
        GroupTag::Hs(s) => {
            let perm = shuffled(n, rng);
            monomial(perm, (0..n).map(|_| rng.random_range(0..s)).collect(), s)
        }
        GroupTag::SPrime => {
            let perm = shuffled(n, rng);
            let e = rng.random_range(0..2);
            monomial(perm, vec![e; n], 2)
        }
        GroupTag::O => Element::Dense(haar_orthogonal(n, rng)),
        GroupTag::B => Element::Dense(haar_bistochastic(n, rng)),
        GroupTag::BPrime => {
            let b = haar_bistochastic(n, rng);
            Element::Dense(if rng.random::<bool>() { -b } else { b })
        }
    };
    Ok(GroupSample {
        tag,
        n,
        seed: None,
        element,
    })
}

/// Haar sample from a fresh generator seeded with `seed`.
pub fn sample(tag: GroupTag, n: usize, seed: u64) -> Result<GroupSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = sample_with(tag, n, &mut rng)?;
    g.seed = Some(seed);
    Ok(g)
}

/// Order of a finite group, saturating.
pub fn group_order(tag: GroupTag, n: usize) -> Option<u128> {
    let fact = (1..=n as u128).try_fold(1u128, |a, b| a.checked_mul(b));
    let pow = |s: u128| s.checked_pow(n as u32);
    match tag {
        GroupTag::S => fact,
        GroupTag::SPrime => fact?.checked_mul(2),
        GroupTag::H => fact?.checked_mul(pow(2)?),
        GroupTag::Hs(s) => fact?.checked_mul(pow(s as u128)?),
        _ => None,
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Every element of a finite group, permutations in lexicographic order and
/// phases as an odometer within each permutation.
pub fn elements(tag: GroupTag, n: usize) -> Result<Vec<GroupSample>> {
    check_n(n)?;
    let order = group_order(tag, n).ok_or_else(|| {
        Error::InvalidParameter(format!("{tag} is not enumerable at n = {n}"))
    })?;
    if order > MAX_GROUP_ORDER {
        return Err(Error::BudgetExceeded {
            entries: order,
            budget: MAX_GROUP_ORDER,
        });
    }
    let phase_lists: Vec<(Vec<u32>, u32)> = match tag {
        GroupTag::S => vec![(vec![0; n], 1)],
        GroupTag::SPrime => vec![(vec![0; n], 2), (vec![1; n], 2)],
        GroupTag::H | GroupTag::Hs(_) => {
            let s = if let GroupTag::Hs(s) = tag { s } else { 2 };
            let total = (s as usize).pow(n as u32);
            (0..total)
                .map(|mut code| {
                    let mut ph = vec![0u32; n];
                    for slot in ph.iter_mut().rev() {
                        *slot = (code % s as usize) as u32;
                        code /= s as usize;
                    }
                    (ph, s)
                })
                .collect()
        }
        _ => unreachable!(),
    };
    let mut out = Vec::with_capacity(order as usize);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for (phase, s) in &phase_lists {
            out.push(GroupSample {
                tag,
                n,
                seed: None,
                element: Element::Monomial {
                    perm: perm.clone(),
                    phase: phase.clone(),
                    order: *s,
                },
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}
