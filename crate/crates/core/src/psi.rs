//! Exact evaluation of ψ, the sum of element orders.
//!
//! For a p-group `Z_{p^α₁} × … × Z_{p^α_k}` with `α₁ ≤ … ≤ α_k`,
//!
//! ```text
//! ψ = 1 + Σ_{α=1}^{α_k} ( p^{2α}·f(α) − p^{2α−1}·f(α−1) )
//! ```
//!
//! where `f` is the piecewise p-power evaluated by [`f_eval`]. [`psi_p`] is
//! the reference evaluator. The subtraction form [`psi_p_alt`] and the
//! closed forms for small ranks exist to cross-check it. A general abelian
//! group is a product of coprime p-groups, and ψ multiplies over them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{factorize, is_prime, BigNat};
use crate::error::{Error, Result};
use crate::partitions::{lex_iter, Partition};

fn pow(p: u64, e: u32) -> BigNat {
    BigNat::from(p).pow(e)
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// An abelian p-group, `Z_{p^α₁} × … × Z_{p^α_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PGroupType {
    p: u64,
    shape: Partition,
}

impl PGroupType {
    pub fn new(p: u64, shape: Partition) -> Result<Self> {
        check_prime(p)?;
        Ok(PGroupType { p, shape })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn order(&self) -> BigNat {
        pow(self.p, self.shape.n())
    }

    /// Moduli of the cyclic factors, `p^α₁, …, p^α_k`.
    pub fn cyclic_moduli(&self) -> Vec<BigNat> {
        self.shape.parts().iter().map(|&a| pow(self.p, a)).collect()
    }
}

/// A finite abelian group given by its primary components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroupType {
    components: BTreeMap<u64, Partition>,
}

impl AbelianGroupType {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(components: BTreeMap<u64, Partition>) -> Result<Self> {
        for &p in components.keys() {
            check_prime(p)?;
        }
        Ok(AbelianGroupType { components })
    }

    pub fn from_components(components: impl IntoIterator<Item = (u64, Partition)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, shape) in components {
            if map.insert(p, shape).is_some() {
                return Err(Error::InvalidArgument(format!("prime {p} given twice")));
            }
        }
        Self::new(map)
    }

    /// Builds the type of `Z_{m₁} × … × Z_{m_r}` where every `mᵢ` is a prime
    /// power.
    pub fn from_prime_power_moduli(moduli: &[u64]) -> Result<Self> {
        let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in moduli {
            let f = factorize(m)?;
            match f.factors() {
                [(p, e)] => exps.entry(*p).or_default().push(*e),
                _ => {
                    return Err(Error::InvalidArgument(format!("{m} is not a prime power")));
                }
            }
        }
        Self::from_components(exps.into_iter().map(|(p, mut e)| {
            e.sort_unstable();
            (p, Partition::new(e).expect("positive exponents"))
        }))
    }

    pub fn components(&self) -> &BTreeMap<u64, Partition> {
        &self.components
    }

    pub fn p_groups(&self) -> impl Iterator<Item = PGroupType> + '_ {
        self.components.iter().map(|(&p, shape)| PGroupType {
            p,
            shape: shape.clone(),
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    pub fn order(&self) -> BigNat {
        self.components
            .iter()
            .map(|(&p, s)| pow(p, s.n()))
            .product()
    }

    /// Prime-power moduli of the cyclic factors, primes ascending and parts
    /// ascending within each prime.
    pub fn cyclic_moduli(&self) -> Vec<BigNat> {
        self.p_groups().flat_map(|g| g.cyclic_moduli()).collect()
    }
}

impl From<PGroupType> for AbelianGroupType {
    fn from(g: PGroupType) -> Self {
        AbelianGroupType {
            components: BTreeMap::from([(g.p, g.shape)]),
        }
    }
}

/// Renders in the group spec grammar, e.g. `13^[1,1]*23`.
impl fmt::Display for AbelianGroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, shape)) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if shape.parts() == [1] {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{shape}")?;
            }
        }
        Ok(())
    }
}

/// The piecewise p-power of the p-group sum, evaluated branch by branch.
///
/// For `α` in `[α_j, α_{j+1}]` (with `α₀ = 0`) the exponent is
/// `(k−1−j)·α + α₁ + … + α_j`. The last branch, `j = k−1`, holds for every
/// `α ≥ α_{k−1}`. For a cyclic shape every branch is `p⁰`.
pub fn f_eval(shape: &Partition, p: u64, alpha: u32) -> BigNat {
    pow(p, f_exponent(shape, alpha))
}

pub(crate) fn f_exponent(shape: &Partition, alpha: u32) -> u32 {
    let parts = shape.parts();
    let k = parts.len();
    let j = parts[..k - 1].iter().take_while(|&&a| a <= alpha).count();
    let head: u32 = parts[..j].iter().sum();
    (k - 1 - j) as u32 * alpha + head
}

/// ψ of an abelian p-group, by the piecewise sum. This is the reference
/// evaluator every other route is checked against.
pub fn psi_p(g: &PGroupType) -> BigNat {
    let p = g.p;
    let mut total = BigNat::one();
    let mut prev_f = BigNat::one();
    for alpha in 1..=g.shape.largest() {
        let f = f_eval(&g.shape, p, alpha);
        let up = pow(p, 2 * alpha) * &f;
        let down = pow(p, 2 * alpha - 1) * &prev_f;
        // f is non-decreasing, so every bracket is nonnegative.
        total += up.checked_sub(&down).expect("f is non-decreasing");
        prev_f = f;
    }
    total
}

/// ψ by the subtraction form
/// `p^{2α_k + α_{k−1} + … + α₁} − (p−1)·Σ_{α=0}^{α_k−1} p^{2α}·f(α)`.
pub fn psi_p_alt(g: &PGroupType) -> BigNat {
    let p = g.p;
    let lead = pow(p, g.shape.n() + g.shape.largest());
    let sum: BigNat = (0..g.shape.largest())
        .map(|alpha| pow(p, 2 * alpha) * f_eval(&g.shape, p, alpha))
        .sum();
    lead.checked_sub(&(BigNat::from(p - 1) * sum))
        .expect("leading term dominates")
}

fn exact(num: &BigNat, den: &BigNat, formula: &str) -> Result<BigNat> {
    num.exact_div(den).ok_or_else(|| Error::InexactDivision {
        formula: formula.to_string(),
    })
}

fn exact_signed(num: &BigInt, den: &BigInt, formula: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision {
            formula: formula.to_string(),
        })
    }
}

/// `ψ(Z_{pⁿ}) = (p^{2n+1} + 1) / (p + 1)`.
pub fn psi_cyclic(p: u64, n: u32) -> Result<BigNat> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::NonPositive("cyclic exponent"));
    }
    exact(
        &(pow(p, 2 * n + 1) + BigNat::one()),
        &BigNat::from(p + 1),
        "cyclic closed form",
    )
}

/// `ψ(Z_pⁿ) = p^{n+1} − p + 1`.
pub fn psi_elem_abelian(p: u64, n: u32) -> Result<BigNat> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::NonPositive("elementary abelian rank"));
    }
    Ok((pow(p, n + 1) + BigNat::one())
        .checked_sub(&BigNat::from(p))
        .expect("p^{n+1} ≥ p"))
}

/// `ψ(Z_{p²} × Z_p^{n−2}) = p^{n+2} − p^{n+1} + pⁿ − p + 1`, for `n ≥ 2`.
pub fn psi_near_elem(p: u64, n: u32) -> Result<BigNat> {
    check_prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Z_{{p²}} × Z_p^{{n−2}} needs n ≥ 2, got {n}"
        )));
    }
    let plus = pow(p, n + 2) + pow(p, n) + BigNat::one();
    let minus = pow(p, n + 1) + BigNat::from(p);
    Ok(plus.checked_sub(&minus).expect("leading term dominates"))
}

/// `ψ(Z_{p^a1} × Z_{p^a2})` for `1 ≤ a1 ≤ a2`, by the rank-two closed form
/// with denominator `(p+1)(p²+p+1)`.
pub fn psi_rank2(p: u64, a1: u32, a2: u32) -> Result<BigNat> {
    check_prime(p)?;
    if a1 == 0 || a1 > a2 {
        return Err(Error::InvalidArgument(format!(
            "rank-two exponents need 1 ≤ a1 ≤ a2, got ({a1}, {a2})"
        )));
    }
    let e = 2 * a2 + a1;
    let num = pow(p, e + 3)
        + pow(p, e + 2)
        + pow(p, e + 1)
        + pow(p, 3 * a1 + 2)
        + BigNat::from(p)
        + BigNat::one();
    let den = BigNat::from(p + 1) * BigNat::from(p * p + p + 1);
    exact(&num, &den, "rank-two closed form")
}

/// `ψ(Z_{p^a1} × Z_{p^a2} × Z_{p^a3})` for `1 ≤ a1 ≤ a2 ≤ a3`, by the
/// rank-three closed form. Each of its three quotients must be exact.
pub fn psi_rank3(p: u64, a1: u32, a2: u32, a3: u32) -> Result<BigNat> {
    check_prime(p)?;
    if a1 == 0 || a1 > a2 || a2 > a3 {
        return Err(Error::InvalidArgument(format!(
            "rank-three exponents need 1 ≤ a1 ≤ a2 ≤ a3, got ({a1}, {a2}, {a3})"
        )));
    }
    let pw = |e: u32| BigInt::from(p).pow(e);
    let pb = BigInt::from(p);
    let one = BigInt::from(1);

    let first = exact_signed(
        &(pw(2 * a3 + a2 + a1 + 1) + pw(3 * a2 + a1 + 2)),
        &(&pb + &one),
        "rank-three closed form, first quotient",
    )?;
    let second = exact_signed(
        &(pw(3 * a2 + a1 + 3) - pw(4 * a1 + 3)),
        &(&pb * &pb + &pb + &one),
        "rank-three closed form, second quotient",
    )?;
    let third = exact_signed(
        &(pw(4 * a1 + 4) - &one),
        &(pw(3) + pw(2) + &pb + &one),
        "rank-three closed form, third quotient",
    )?;
    let value = first - second - third;
    if value.is_negative() {
        return Err(Error::InexactDivision {
            formula: "rank-three closed form is negative".into(),
        });
    }
    Ok(BigNat::from(value.magnitude().clone()))
}

/// ψ of a general finite abelian group: the product over its primary
/// components. The trivial group gives 1.
pub fn psi_abelian(g: &AbelianGroupType) -> BigNat {
    g.p_groups().map(|pg| psi_p(&pg)).product()
}

/// Every isomorphism type of abelian group of order `n`, each exactly once.
///
/// Types are ordered lexicographically by their per-prime partitions with
/// primes ascending, the smallest prime varying slowest.
pub fn group_type_of_order(n: u64) -> Result<Vec<AbelianGroupType>> {
    let f = factorize(n)?;
    let per_prime: Vec<(u64, Vec<Partition>)> = f
        .iter()
        .map(|(p, e)| Ok((p, lex_iter(e)?.collect())))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut idx = vec![0usize; per_prime.len()];
    loop {
        out.push(AbelianGroupType {
            components: per_prime
                .iter()
                .zip(&idx)
                .map(|((p, parts), &i)| (*p, parts[i].clone()))
                .collect(),
        });
        // Odometer with the last prime fastest.
        let mut pos = per_prime.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_prime[pos].1.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
