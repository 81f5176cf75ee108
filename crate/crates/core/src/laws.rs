//! Reference moments of the limiting laws, the balanced-partition
//! recurrence, and comparisons against finite-n Weingarten moments.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::category::{Base, CategoryId, Modulus};
use crate::error::{Error, Result};
use crate::mc::{estimate, Estimate};
use crate::rational::{format_rational, parse_rational};
use crate::weingarten::{asymptotic_moment, MomentRequest, Weingarten};

/// Largest number of moments produced by [`law_moments`].
pub const MAX_ORDER: usize = 12;

fn check_order(k: usize) -> Result<()> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "number of moments must be in 1..={MAX_ORDER}, got {k}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Law {
    Gaussian(BigRational),
    Poisson(BigRational),
    FreePoisson(BigRational),
    Semicircle(BigRational),
    ShiftedGaussian(BigRational),
    Bessel(BigRational),
    /// `Σ_r ω^r x_r` with `x_r` independent Poisson of parameter `t/s`.
    SBessel(Modulus, BigRational),
    /// `(x + iy)/√2`, `x, y` independent Gaussian of parameter `t`.
    ComplexGaussian(BigRational),
    /// Symmetric real law whose even moments are those of `zz*`.
    Squeezed(Box<Law>),
}

impl Law {
    pub fn parameter(&self) -> &BigRational {
        match self {
            Law::Gaussian(t)
            | Law::Poisson(t)
            | Law::FreePoisson(t)
            | Law::Semicircle(t)
            | Law::ShiftedGaussian(t)
            | Law::Bessel(t)
            | Law::SBessel(_, t)
            | Law::ComplexGaussian(t) => t,
            Law::Squeezed(inner) => inner.parameter(),
        }
    }

    pub fn is_squeezed(&self) -> bool {
        matches!(self, Law::Squeezed(_))
    }

    fn is_complex(&self) -> bool {
        matches!(self, Law::ComplexGaussian(_) | Law::SBessel(..))
    }

    /// The category whose partition sums give this law at large `n`.
    pub fn category(&self) -> Option<CategoryId> {
        match self {
            Law::Gaussian(_) => Some(CategoryId::Classical(Base::O)),
            Law::Poisson(_) => Some(CategoryId::Classical(Base::S)),
            Law::Bessel(_) => Some(CategoryId::Classical(Base::H)),
            Law::ShiftedGaussian(_) => Some(CategoryId::Classical(Base::B)),
            Law::Semicircle(_) => Some(CategoryId::Free(Base::O)),
            Law::FreePoisson(_) => Some(CategoryId::Free(Base::S)),
            Law::Squeezed(inner) => match **inner {
                Law::ComplexGaussian(_) => Some(CategoryId::Eo),
                Law::SBessel(Modulus::Infinite, _) => Some(CategoryId::Eh),
                Law::SBessel(s, _) => Some(CategoryId::SBalanced(s)),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |t: &BigRational| {
            if t.is_integer() {
                t.numer().to_string()
            } else {
                format_rational(t)
            }
        };
        match self {
            Law::Gaussian(x) => write!(f, "gaussian({})", t(x)),
            Law::Poisson(x) => write!(f, "poisson({})", t(x)),
            Law::FreePoisson(x) => write!(f, "free_poisson({})", t(x)),
            Law::Semicircle(x) => write!(f, "semicircle({})", t(x)),
            Law::ShiftedGaussian(x) => write!(f, "shifted_gaussian({})", t(x)),
            Law::Bessel(x) => write!(f, "bessel({})", t(x)),
            Law::SBessel(s, x) => write!(f, "s_bessel({s},{})", t(x)),
            Law::ComplexGaussian(x) => write!(f, "complex_gaussian({})", t(x)),
            Law::Squeezed(inner) => write!(f, "squeezed({inner})"),
        }
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::UnknownName(format!("law '{t}'"));
        let (name, args) = t
            .strip_suffix(')')
            .and_then(|r| r.split_once('('))
            .ok_or_else(bad)?;
        if name.trim() == "squeezed" {
            return Ok(Law::Squeezed(Box::new(args.parse()?)));
        }
        let param = |s: &str| -> Result<BigRational> {
            let v = parse_rational(s)?;
            if !v.is_positive() {
                return Err(Error::InvalidParameter(format!("law parameter must be positive in '{t}'")));
            }
            Ok(v)
        };
        Ok(match name.trim() {
            "gaussian" => Law::Gaussian(param(args)?),
            "poisson" => Law::Poisson(param(args)?),
            "free_poisson" => Law::FreePoisson(param(args)?),
            "semicircle" => Law::Semicircle(param(args)?),
            "shifted_gaussian" => Law::ShiftedGaussian(param(args)?),
            "bessel" => Law::Bessel(param(args)?),
            "complex_gaussian" => Law::ComplexGaussian(param(args)?),
            "s_bessel" => {
                let (s, x) = args.split_once(',').ok_or_else(bad)?;
                Law::SBessel(s.parse()?, param(x)?)
            }
            _ => return Err(bad()),
        })
    }
}

/// Exact moments `c_1..c_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSeries {
    pub label: String,
    pub t: BigRational,
    pub values: Vec<BigRational>,
}

impl Serialize for MomentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MomentSeries", 3)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("t", &format_rational(&self.t))?;
        let values: Vec<String> = self.values.iter().map(format_rational).collect();
        st.serialize_field("values", &values)?;
        st.end()
    }
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

/// Stirling numbers of the second kind `S(k, b)` for `b = 0..=k`.
fn stirling_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=k {
        let mut next = vec![BigInt::zero(); n + 1];
        for b in 1..=n {
            let keep = if b < row.len() { &row[b] * b } else { BigInt::zero() };
            next[b] = keep + &row[b - 1];
        }
        row = next;
    }
    row
}

/// Moments `m_1..m_K` from classical cumulants `κ_1..κ_K`, by
/// `m_n = Σ_j C(n−1, j−1) κ_j m_{n−j}`.
pub fn moments_from_cumulants(kappa: &[BigRational]) -> Vec<BigRational> {
    let big_k = kappa.len();
    let mut m = vec![BigRational::one()];
    for n in 1..=big_k {
        let v = (1..=n)
            .map(|j| int(binomial(n - 1, j - 1)) * &kappa[j - 1] * &m[n - j])
            .fold(BigRational::zero(), |a, x| a + x);
        m.push(v);
    }
    m.split_off(1)
}

/// Moments from free cumulants: `m_n = Σ_s κ_s Σ_{i_1+…+i_s = n−s} m_{i_1}⋯m_{i_s}`.
pub fn moments_from_free_cumulants(kappa: &[BigRational]) -> Vec<BigRational> {
    let big_k = kappa.len();
    let mut m = vec![BigRational::one()];
    for n in 1..=big_k {
        let mut total = BigRational::zero();
        // conv holds the coefficients of (Σ m_i x^i)^s
        let mut conv = vec![BigRational::zero(); n];
        conv[0] = BigRational::one();
        for s in 1..=n {
            let mut next = vec![BigRational::zero(); n];
            for (a, ca) in conv.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, mb) in m.iter().enumerate() {
                    if a + b < n {
                        next[a + b] += ca * mb;
                    }
                }
            }
            conv = next;
            total += &kappa[s - 1] * &conv[n - s];
        }
        m.push(total);
    }
    m.split_off(1)
}

fn catalan(j: usize) -> BigInt {
    binomial(2 * j, j) / (j + 1)
}

fn narayana(k: usize, b: usize) -> BigInt {
    binomial(k, b) * binomial(k, b - 1) / k
}

/// `c_0..c_K` of `c_k = Σ_{s<k} C(k,s) C(k−1,s) c_s`, `c_0 = 1`.
pub fn balanced_numbers(big_k: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for k in 1..=big_k {
        let v = (0..k)
            .map(|s| binomial(k, s) * binomial(k - 1, s) * &c[s])
            .fold(BigInt::zero(), |a, x| a + x);
        c.push(v);
    }
    c
}

pub fn balanced_recurrence(big_k: usize) -> Result<MomentSeries> {
    check_order(big_k)?;
    Ok(MomentSeries {
        label: "balanced".into(),
        t: BigRational::one(),
        values: balanced_numbers(big_k)[1..].iter().cloned().map(int).collect(),
    })
}

fn real_moments(law: &Law, big_k: usize) -> Result<Vec<BigRational>> {
    let zero = BigRational::zero;
    Ok(match law {
        Law::Gaussian(t) => (1..=big_k)
            .map(|k| {
                if k % 2 == 1 {
                    zero()
                } else {
                    // (k−1)!! t^{k/2}
                    let dfact = (1..k).step_by(2).fold(BigInt::one(), |a, b| a * b);
                    int(dfact) * Pow::pow(t, k / 2)
                }
            })
            .collect(),
        Law::Poisson(t) => (1..=big_k)
            .map(|k| {
                stirling_row(k)
                    .iter()
                    .enumerate()
                    .map(|(b, s)| int(s.clone()) * Pow::pow(t, b))
                    .fold(zero(), |a, x| a + x)
            })
            .collect(),
        Law::Semicircle(t) => (1..=big_k)
            .map(|k| {
                if k % 2 == 1 {
                    zero()
                } else {
                    int(catalan(k / 2)) * Pow::pow(t, k / 2)
                }
            })
            .collect(),
        Law::FreePoisson(t) => (1..=big_k)
            .map(|k| {
                (1..=k)
                    .map(|b| int(narayana(k, b)) * Pow::pow(t, b))
                    .fold(zero(), |a, x| a + x)
            })
            .collect(),
        Law::ShiftedGaussian(t) => {
            let mut kappa = vec![zero(); big_k];
            kappa[0] = t.clone();
            if big_k > 1 {
                kappa[1] = t.clone();
            }
            moments_from_cumulants(&kappa)
        }
        Law::Bessel(t) => moments_from_cumulants(
            &(1..=big_k)
                .map(|j| if j % 2 == 0 { t.clone() } else { zero() })
                .collect::<Vec<_>>(),
        ),
        // E z^k; κ_j = Σ_r (t/s) ω^{rj} = t [s | j]
        Law::SBessel(s, t) => moments_from_cumulants(
            &(1..=big_k)
                .map(|j| if s.divides(j as i64) { t.clone() } else { zero() })
                .collect::<Vec<_>>(),
        ),
        // rotation invariant: E z^k = 0
        Law::ComplexGaussian(_) => vec![zero(); big_k],
        Law::Squeezed(inner) => squeezed_moments(inner, big_k)?,
    })
}

/// Odd orders vanish; order `2j` is `E (zz*)^j`.
fn squeezed_moments(inner: &Law, big_k: usize) -> Result<Vec<BigRational>> {
    let half = big_k / 2;
    let even: Vec<BigRational> = match inner {
        Law::ComplexGaussian(t) => (1..=half).map(|j| int(factorial(j)) * Pow::pow(t, j)).collect(),
        Law::SBessel(s, t) => {
            let c = match s {
                Modulus::Infinite => CategoryId::Eh,
                _ => CategoryId::SBalanced(*s),
            };
            (1..=half)
                .map(|j| asymptotic_moment(&c, 2 * j, t))
                .collect::<Result<_>>()?
        }
        Law::Squeezed(_) => {
            return Err(Error::InvalidParameter("nested squeezed law".into()));
        }
        // real z: zz* = z²
        real => {
            let m = real_moments(real, 2 * half)?;
            (1..=half).map(|j| m[2 * j - 1].clone()).collect()
        }
    };
    Ok((1..=big_k)
        .map(|k| {
            if k % 2 == 1 {
                BigRational::zero()
            } else {
                even[k / 2 - 1].clone()
            }
        })
        .collect())
}

pub fn law_moments(law: &Law, big_k: usize) -> Result<MomentSeries> {
    check_order(big_k)?;
    Ok(MomentSeries {
        label: law.to_string(),
        t: law.parameter().clone(),
        values: real_moments(law, big_k)?,
    })
}

/// One row of a law comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub k: usize,
    pub finite_n: usize,
    pub m: usize,
    pub value: BigRational,
    pub reference: BigRational,
    pub abs_dev: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub category: CategoryId,
    pub law: Law,
    pub rows: Vec<CompareRow>,
    /// Orders whose deviations failed the monotonicity test, or odd orders
    /// of a squeezed comparison with a nonzero finite value.
    pub failing_orders: Vec<usize>,
}

impl CompareReport {
    pub fn convergent(&self) -> bool {
        self.failing_orders.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.convergent() {
            "CONVERGENT"
        } else {
            "NOT CONVERGENT"
        }
    }

    /// Deviations of order `k`, by increasing `n`.
    pub fn deviations(&self, k: usize) -> Vec<(usize, &BigRational)> {
        self.rows
            .iter()
            .filter(|r| r.k == k)
            .map(|r| (r.finite_n, &r.abs_dev))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let t = format_rational(self.law.parameter());
        let mut out = String::from("category,law,t,k,finite_n,value,reference,abs_dev\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.12e}\n",
                self.category,
                self.law,
                t,
                r.k,
                r.finite_n,
                format_rational(&r.value),
                format_rational(&r.reference),
                r.abs_dev.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out.push_str(self.verdict());
        out.push('\n');
        out
    }
}

impl Serialize for CompareReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Row {
            k: usize,
            finite_n: usize,
            m: usize,
            value: String,
            reference: String,
            abs_dev: String,
        }
        let rows: Vec<Row> = self
            .rows
            .iter()
            .map(|r| Row {
                k: r.k,
                finite_n: r.finite_n,
                m: r.m,
                value: format_rational(&r.value),
                reference: format_rational(&r.reference),
                abs_dev: format_rational(&r.abs_dev),
            })
            .collect();
        let mut st = s.serialize_struct("CompareReport", 6)?;
        st.serialize_field("category", &self.category)?;
        st.serialize_field("law", &self.law.to_string())?;
        st.serialize_field("t", &format_rational(self.law.parameter()))?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("failing_orders", &self.failing_orders)?;
        st.serialize_field("verdict", self.verdict())?;
        st.end()
    }
}

/// `|moment(c, n, k, ⌊tn⌋) − law_k|` for `k ≤ K` and each `n`. An order
/// passes when, along increasing `n`, each deviation is strictly smaller
/// than the previous one or both are exactly zero.
pub fn law_compare(c: &CategoryId, law: &Law, big_k: usize, n_list: &[usize]) -> Result<CompareReport> {
    if law.is_complex() {
        return Err(Error::InvalidParameter(format!(
            "{law} is complex; compare against its squeezed version"
        )));
    }
    let reference = law_moments(law, big_k)?;
    let t = law.parameter();
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty list of dimensions".into()));
    }

    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for k in 1..=big_k {
        let refv = &reference.values[k - 1];
        let mut prev: Option<BigRational> = None;
        let mut ok = true;
        for &n in &ns {
            let req = MomentRequest::with_fraction(*c, n, k, t)?;
            let value = Weingarten::new(c, k, n)?.moment(req.m);
            let dev = (&value - refv).abs();
            if law.is_squeezed() && k % 2 == 1 && !value.is_zero() {
                ok = false;
            }
            if let Some(p) = &prev {
                if !(dev < *p || (dev.is_zero() && p.is_zero())) {
                    ok = false;
                }
            }
            prev = Some(dev.clone());
            rows.push(CompareRow {
                k,
                finite_n: n,
                m: req.m,
                value,
                reference: refv.clone(),
                abs_dev: dev,
            });
        }
        if !ok {
            failing.push(k);
        }
    }
    Ok(CompareReport {
        category: *c,
        law: law.clone(),
        rows,
        failing_orders: failing,
    })
}

/// Poisson variate by inversion of the CDF at `u ∈ [0, 1)`.
pub fn poisson_inverse_cdf(lambda: f64, u: f64) -> u64 {
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u >= cdf {
        k += 1;
        p *= lambda / k as f64;
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    k
}

/// Monte Carlo estimates of `E (zz*)^j`, `j = 1..=j_max`, for `z` drawn from
/// the `s`-Bessel law of parameter `t`.
pub fn squeezed_bessel_mc(s: u32, t: f64, j_max: usize, samples: usize, seed: u64) -> Result<Vec<Estimate>> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("s must be at least 2, got {s}")));
    }
    if !(t > 0.0) || samples == 0 || j_max == 0 {
        return Err(Error::InvalidParameter("need t > 0, samples > 0 and j_max > 0".into()));
    }
    let lambda = t / s as f64;
    let roots: Vec<(f64, f64)> = (1..=s)
        .map(|r| {
            let a = 2.0 * std::f64::consts::PI * r as f64 / s as f64;
            (a.cos(), a.sin())
        })
        .collect();
    Ok(estimate(samples, seed, j_max, |rng, out| {
        let (mut re, mut im) = (0.0, 0.0);
        for &(c, sn) in &roots {
            let x = poisson_inverse_cdf(lambda, rng.random::<f64>()) as f64;
            re += c * x;
            im += sn * x;
        }
        let w = re * re + im * im;
        let mut acc = 1.0;
        for slot in out.iter_mut() {
            acc *= w;
            *slot = acc;
        }
    }))
}
