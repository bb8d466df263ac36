//! Dense integer polynomials, and ψ of a p-group as a polynomial in `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::BigNat;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::psi::f_exponent;

/// Integer polynomial in `x`. `coeffs[i]` is the coefficient of `xⁱ`; the
/// last stored coefficient is never zero, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c·x^d`.
    pub fn monomial(c: impl Into<BigInt>, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c.into();
        Self::from_coeffs(coeffs)
    }

    /// `x^d`.
    pub fn x_pow(d: u32) -> Self {
        Self::monomial(1, d as usize)
    }

    /// Coefficients in ascending degree order.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_u64(&self, x: u64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Quotient `q` with `self = divisor · q`, when one exists over ℤ.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::InvalidArgument(
                "division by the zero polynomial".into(),
            ));
        };
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok(IntPoly::zero());
        };
        if nd < dd {
            return Err(Error::InexactDivision {
                formula: format!("({self}) / ({divisor})"),
            });
        }
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision {
                    formula: format!("({self}) / ({divisor})"),
                });
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision {
                formula: format!("({self}) / ({divisor})"),
            });
        }
        Ok(IntPoly::from_coeffs(quot))
    }
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                match rhs.coeffs.get(i) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        IntPoly::from_coeffs(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

pub fn poly_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a + b
}

pub fn poly_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a - b
}

pub fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a * b
}

pub fn poly_exact_div(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    a.exact_div(b)
}

/// Descending powers of `x`, unit coefficients elided, no spaces:
/// `x^6-x^5+x^4-x+1`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if d == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

/// ψ of the p-group of the given type, as a polynomial in `p`.
///
/// Built from the subtraction form
/// `x^{n+α_k} − (x−1)·Σ_{α=0}^{α_k−1} x^{2α}·f(α)` with each `f(α)` a monomial,
/// so everything stays in ℤ[x].
pub fn psi_symbolic(shape: &Partition) -> IntPoly {
    let lead = IntPoly::x_pow(shape.n() + shape.largest());
    let mut sum = IntPoly::zero();
    for alpha in 0..shape.largest() {
        sum = &sum + &IntPoly::x_pow(2 * alpha + f_exponent(shape, alpha));
    }
    let x_minus_one = IntPoly::from_i64s(&[-1, 1]);
    &lead - &(&x_minus_one * &sum)
}

/// The closed-form families for small or special shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedFormFamily {
    /// `Z_{pⁿ}`.
    Cyclic,
    /// `Z_pⁿ`.
    Elementary,
    /// `Z_{p²} × Z_p^{n−2}`.
    NearElementary,
    /// `Z_{p^a1} × Z_{p^a2}`.
    Rank2,
    /// `Z_{p^a1} × Z_{p^a2} × Z_{p^a3}`.
    Rank3,
}

impl ClosedFormFamily {
    /// Method tag used in command output.
    pub fn tag(self) -> &'static str {
        match self {
            ClosedFormFamily::Cyclic => "corollary2a",
            ClosedFormFamily::Elementary => "corollary2b",
            ClosedFormFamily::NearElementary => "corollary2c",
            ClosedFormFamily::Rank2 => "corollary2d",
            ClosedFormFamily::Rank3 => "corollary2e",
        }
    }

    /// Families whose formula covers `shape`, in tag order.
    pub fn applicable(shape: &Partition) -> Vec<ClosedFormFamily> {
        let parts = shape.parts();
        let mut out = Vec::new();
        if parts.len() == 1 {
            out.push(ClosedFormFamily::Cyclic);
        }
        if parts.iter().all(|&a| a == 1) {
            out.push(ClosedFormFamily::Elementary);
        }
        if shape.n() >= 2
            && shape.largest() == 2
            && parts[..parts.len() - 1].iter().all(|&a| a == 1)
        {
            out.push(ClosedFormFamily::NearElementary);
        }
        if parts.len() == 2 {
            out.push(ClosedFormFamily::Rank2);
        }
        if parts.len() == 3 {
            out.push(ClosedFormFamily::Rank3);
        }
        out
    }

    /// The family's formula as a polynomial, with every division carried
    /// out exactly in ℤ[x].
    pub fn symbolic(self, shape: &Partition) -> Result<IntPoly> {
        let x = |d: u32| IntPoly::x_pow(d);
        let one = IntPoly::one();
        let parts = shape.parts();
        let n = shape.n();
        Ok(match self {
            ClosedFormFamily::Cyclic => {
                (x(2 * n + 1) + one).exact_div(&IntPoly::from_i64s(&[1, 1]))?
            }
            ClosedFormFamily::Elementary => x(n + 1) - x(1) + one,
            ClosedFormFamily::NearElementary => x(n + 2) - x(n + 1) + x(n) - x(1) + one,
            ClosedFormFamily::Rank2 => {
                let (a1, a2) = (parts[0], parts[1]);
                let e = 2 * a2 + a1;
                let num = x(e + 3) + x(e + 2) + x(e + 1) + x(3 * a1 + 2) + x(1) + one;
                let den = IntPoly::from_i64s(&[1, 1]) * IntPoly::from_i64s(&[1, 1, 1]);
                num.exact_div(&den)?
            }
            ClosedFormFamily::Rank3 => {
                let (a1, a2, a3) = (parts[0], parts[1], parts[2]);
                let first = (x(2 * a3 + a2 + a1 + 1) + x(3 * a2 + a1 + 2))
                    .exact_div(&IntPoly::from_i64s(&[1, 1]))?;
                let second = (x(3 * a2 + a1 + 3) - x(4 * a1 + 3))
                    .exact_div(&IntPoly::from_i64s(&[1, 1, 1]))?;
                let third = (x(4 * a1 + 4) - one).exact_div(&IntPoly::from_i64s(&[1, 1, 1, 1]))?;
                first - second - third
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOutcome {
    Equal,
    /// `closed form − psi_symbolic`, nonzero.
    Mismatch {
        residual: IntPoly,
    },
    /// One of the family's divisions left a remainder.
    InexactDivision {
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub family: ClosedFormFamily,
    pub outcome: FamilyOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub shape: Partition,
    pub checks: Vec<FamilyCheck>,
}

impl ClosedFormReport {
    pub fn all_equal(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.outcome == FamilyOutcome::Equal)
    }
}

/// Compares every applicable closed form against [`psi_symbolic`].
///
/// Rejects shapes no family covers.
pub fn verify_closed_form(shape: &Partition) -> Result<ClosedFormReport> {
    let families = ClosedFormFamily::applicable(shape);
    if families.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no closed form covers shape {shape}"
        )));
    }
    let reference = psi_symbolic(shape);
    let checks = families
        .into_iter()
        .map(|family| {
            let outcome = match family.symbolic(shape) {
                Ok(poly) if poly == reference => FamilyOutcome::Equal,
                Ok(poly) => FamilyOutcome::Mismatch {
                    residual: &poly - &reference,
                },
                Err(e) => FamilyOutcome::InexactDivision {
                    detail: e.to_string(),
                },
            };
            FamilyCheck { family, outcome }
        })
        .collect();
    Ok(ClosedFormReport {
        shape: shape.clone(),
        checks,
    })
}

/// Evaluates a polynomial whose values at `x` are known to be nonnegative.
pub fn eval_nonneg(poly: &IntPoly, x: u64) -> Option<BigNat> {
    let v = poly.eval_u64(x);
    v.to_biguint().map(BigNat::from)
}
