//! Brute-force ground truth over explicit direct products of cyclic groups.
//!
//! Elements of `Z_{m₁} × … × Z_{m_r}` are residue tuples. Everything here
//! enumerates elements directly, so it is only meant for groups of modest
//! order; operations that visit every element refuse groups above the
//! enumeration cap.

use std::collections::HashSet;
use std::fmt;

use crate::arith::{gcd_u64, lcm_u64, BigNat};
use crate::error::{Error, Result};
use crate::psi::AbelianGroupType;

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// `Z_{m₁} × … × Z_{m_r}` with every `mᵢ ≥ 2`. The empty list is the trivial
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentList {
    moduli: Vec<u64>,
    cap: u64,
}

impl ComponentList {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidArgument(format!(
                "cyclic modulus {m} is below 2"
            )));
        }
        Ok(ComponentList {
            moduli,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    /// Cyclic factors of a group type, one per part of each primary
    /// component.
    pub fn from_group_type(g: &AbelianGroupType) -> Result<Self> {
        let moduli = g
            .cyclic_moduli()
            .iter()
            .map(|m| {
                m.to_u64().ok_or_else(|| {
                    Error::InvalidArgument(format!("cyclic factor {m} exceeds 64 bits"))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(moduli)
    }

    /// Overrides the enumeration cap.
    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn order(&self) -> BigNat {
        self.moduli.iter().map(|&m| BigNat::from(m)).product()
    }

    fn order_u128(&self) -> Option<u128> {
        self.moduli
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(u128::from(m)))
    }

    /// Group order, if it is within the enumeration cap.
    fn enumerable_order(&self) -> Result<u64> {
        match self.order_u128() {
            Some(o) if o <= u128::from(self.cap) => Ok(o as u64),
            Some(o) => Err(Error::TooLarge {
                order: o,
                cap: self.cap,
            }),
            None => Err(Error::TooLarge {
                order: u128::MAX,
                cap: self.cap,
            }),
        }
    }

    pub fn identity(&self) -> ElementTuple {
        ElementTuple(vec![0; self.moduli.len()])
    }

    fn check(&self, a: &ElementTuple) -> Result<()> {
        if a.0.len() != self.moduli.len() {
            return Err(Error::InvalidElement(format!(
                "{a} has {} coordinates, group has {} factors",
                a.0.len(),
                self.moduli.len()
            )));
        }
        for (i, (&r, &m)) in a.0.iter().zip(&self.moduli).enumerate() {
            if r >= m {
                return Err(Error::InvalidElement(format!(
                    "coordinate {i} of {a} is {r}, outside Z_{m}"
                )));
            }
        }
        Ok(())
    }

    fn encode(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.moduli)
            .rev()
            .fold(0u64, |acc, (&r, &m)| acc * m + r)
    }

    fn decode(&self, mut idx: u64) -> ElementTuple {
        ElementTuple(
            self.moduli
                .iter()
                .map(|&m| {
                    let r = idx % m;
                    idx /= m;
                    r
                })
                .collect(),
        )
    }

    /// `a + b` componentwise.
    pub fn add(&self, a: &ElementTuple, b: &ElementTuple) -> ElementTuple {
        ElementTuple(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| ((u128::from(x) + u128::from(y)) % u128::from(m)) as u64)
                .collect(),
        )
    }

    /// Every element, in mixed-radix order with the first coordinate fastest.
    pub fn elements(&self) -> Result<impl Iterator<Item = ElementTuple> + '_> {
        let order = self.enumerable_order()?;
        Ok((0..order).map(move |i| self.decode(i)))
    }
}

/// A group element as a residue tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementTuple(pub Vec<u64>);

impl fmt::Display for ElementTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

fn order_u64(moduli: &[u64], a: &[u64]) -> u64 {
    moduli
        .iter()
        .zip(a)
        .fold(1u64, |acc, (&m, &r)| lcm_u64(acc, m / gcd_u64(m, r)))
}

/// Order of `a`: the lcm over coordinates of `mᵢ / gcd(mᵢ, aᵢ)`.
pub fn element_order(c: &ComponentList, a: &ElementTuple) -> Result<BigNat> {
    c.check(a)?;
    let mut acc = BigNat::one();
    for (&m, &r) in c.moduli.iter().zip(&a.0) {
        acc = crate::arith::lcm(&acc, &BigNat::from(m / gcd_u64(m, r)))?;
    }
    Ok(acc)
}

/// ψ by summing the order of every element.
pub fn psi_bruteforce(c: &ComponentList) -> Result<BigNat> {
    let order = c.enumerable_order()?;
    let mut a = vec![0u64; c.moduli.len()];
    let mut total: u128 = 0;
    for _ in 0..order {
        total += u128::from(order_u64(&c.moduli, &a));
        // Odometer increment, first coordinate fastest.
        for (r, &m) in a.iter_mut().zip(&c.moduli) {
            *r += 1;
            if *r < m {
                break;
            }
            *r = 0;
        }
    }
    Ok(BigNat::from(total))
}

/// A subgroup, stored as the set of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSet {
    moduli: Vec<u64>,
    elements: HashSet<u64>,
}

impl SubgroupSet {
    /// Validates that `elements` is a subgroup of `c`.
    pub fn from_elements(c: &ComponentList, elements: &[ElementTuple]) -> Result<Self> {
        for a in elements {
            c.check(a)?;
        }
        let set: HashSet<u64> = elements.iter().map(|a| c.encode(&a.0)).collect();
        if !set.contains(&0) {
            return Err(Error::NotASubgroup("identity is missing".into()));
        }
        for a in elements {
            for b in elements {
                let s = c.add(a, b);
                if !set.contains(&c.encode(&s.0)) {
                    return Err(Error::NotASubgroup(format!("{a} + {b} = {s} is missing")));
                }
            }
        }
        Ok(SubgroupSet {
            moduli: c.moduli.clone(),
            elements: set,
        })
    }

    pub fn len(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &ElementTuple) -> bool {
        a.0.len() == self.moduli.len()
            && a.0.iter().zip(&self.moduli).all(|(&r, &m)| r < m)
            && self.elements.contains(&encode_with(&self.moduli, &a.0))
    }

    /// Elements in ascending mixed-radix index order.
    pub fn elements(&self) -> Vec<ElementTuple> {
        let c = ComponentList {
            moduli: self.moduli.clone(),
            cap: u64::MAX,
        };
        let mut idx: Vec<u64> = self.elements.iter().copied().collect();
        idx.sort_unstable();
        idx.into_iter().map(|i| c.decode(i)).collect()
    }

    /// Sorted element indices; equal for equal subgroups.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut idx: Vec<u64> = self.elements.iter().copied().collect();
        idx.sort_unstable();
        idx
    }

    fn check_ambient(&self, c: &ComponentList) -> Result<()> {
        if self.moduli != c.moduli {
            return Err(Error::NotASubgroup(
                "subgroup belongs to a different group".into(),
            ));
        }
        if !self.elements.contains(&0) {
            return Err(Error::NotASubgroup("identity is missing".into()));
        }
        Ok(())
    }
}

fn encode_with(moduli: &[u64], a: &[u64]) -> u64 {
    a.iter()
        .zip(moduli)
        .rev()
        .fold(0u64, |acc, (&r, &m)| acc * m + r)
}

/// Smallest subgroup containing `generators`.
///
/// The group is abelian, so the closure is the sum of the cyclic subgroups
/// of the generators.
pub fn subgroup_closure(c: &ComponentList, generators: &[ElementTuple]) -> Result<SubgroupSet> {
    for g in generators {
        c.check(g)?;
    }
    let mut members: Vec<ElementTuple> = vec![c.identity()];
    let mut seen: HashSet<u64> = HashSet::from([0]);
    for g in generators {
        if seen.contains(&c.encode(&g.0)) {
            continue;
        }
        let ord = order_u64(&c.moduli, &g.0);
        let mut multiples = Vec::with_capacity(ord as usize);
        let mut x = c.identity();
        for _ in 0..ord {
            multiples.push(x.clone());
            x = c.add(&x, g);
        }
        let base = members.clone();
        for s in &base {
            for k in multiples.iter().skip(1) {
                let e = c.add(s, k);
                if seen.insert(c.encode(&e.0)) {
                    if seen.len() as u64 > c.cap {
                        return Err(Error::TooLarge {
                            order: seen.len() as u128,
                            cap: c.cap,
                        });
                    }
                    members.push(e);
                }
            }
        }
    }
    Ok(SubgroupSet {
        moduli: c.moduli.clone(),
        elements: seen,
    })
}

fn relative_order_u64(c: &ComponentList, h: &SubgroupSet, a: &ElementTuple) -> u64 {
    let mut x = a.clone();
    let mut m = 1u64;
    while !h.elements.contains(&c.encode(&x.0)) {
        x = c.add(&x, a);
        m += 1;
    }
    m
}

/// Smallest `m ≥ 1` with `m·a ∈ H`.
pub fn relative_order(c: &ComponentList, h: &SubgroupSet, a: &ElementTuple) -> Result<BigNat> {
    c.check(a)?;
    h.check_ambient(c)?;
    Ok(BigNat::from(relative_order_u64(c, h, a)))
}

/// ψ relative to `H`: the sum of `relative_order` over all elements.
pub fn psi_relative(c: &ComponentList, h: &SubgroupSet) -> Result<BigNat> {
    h.check_ambient(c)?;
    let mut total: u128 = 0;
    for a in c.elements()? {
        total += u128::from(relative_order_u64(c, h, &a));
    }
    Ok(BigNat::from(total))
}
