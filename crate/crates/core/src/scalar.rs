//! Exact arithmetic in the ring Q[√2], scaled by a symbolic parameter λ.
//!
//! Every weight produced by the construction lives in this ring: vertex and
//! edge weights are rational multiples of λ and of λ√2, and the reduction
//! calculus only ever adds, subtracts, negates, rescales by rationals, and
//! multiplies or divides by powers of √2. All of that stays inside
//! `(a + b√2)·λ` with rational `a`, `b`, so the spectrum derivation can be
//! carried out with zero rounding. λ itself stays symbolic until
//! [`ExactScalar::to_float`] binds it.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Error;

/// Shorthand for a reduced `n/d` rational with arbitrary-precision integers.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// An exact value `(a + b·√2) · λ^d` with rational `a`, `b` and `d ∈ {0, 1}`.
///
/// Values with `d = 1` carry the free parameter λ; values with `d = 0` are
/// plain ring elements used as scaling factors. Products of two λ-carrying
/// scalars never occur in the calculus and are rejected by [`ExactScalar::mul`].
///
/// Equality is structural on `(a, b)`, which is exact equality of values
/// because √2 is irrational; two zeros compare equal regardless of dimension.
#[derive(Debug, Clone)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    carries_lambda: bool,
}

impl ExactScalar {
    /// The weight λ itself.
    pub fn lambda() -> Self {
        Self::lambda_times(ratio(1, 1), BigRational::zero())
    }

    /// The zero weight (λ-carrying; equal to any other zero).
    pub fn zero() -> Self {
        Self::lambda_times(BigRational::zero(), BigRational::zero())
    }

    /// `(a + b√2) · λ`.
    pub fn lambda_times(a: BigRational, b: BigRational) -> Self {
        ExactScalar { a, b, carries_lambda: true }
    }

    /// A dimensionless ring element `a + b√2`, usable as a factor.
    pub fn dimensionless(a: BigRational, b: BigRational) -> Self {
        ExactScalar { a, b, carries_lambda: false }
    }

    /// Dimensionless integer factor.
    pub fn integer(n: i64) -> Self {
        Self::dimensionless(ratio(n, 1), BigRational::zero())
    }

    pub fn coeff_a(&self) -> &BigRational {
        &self.a
    }

    pub fn coeff_b(&self) -> &BigRational {
        &self.b
    }

    pub fn carries_lambda(&self) -> bool {
        self.carries_lambda
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// If the value is a rational multiple `c·λ` (no √2 part), returns `c`.
    /// Zero counts as `0·λ` whatever its dimension.
    pub fn lambda_multiple(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.carries_lambda && self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    /// Exact product. At most one operand may carry λ.
    pub fn mul(&self, other: &ExactScalar) -> Result<ExactScalar, Error> {
        if self.carries_lambda && other.carries_lambda {
            return Err(Error::DimensionError);
        }
        // (a1 + b1√2)(a2 + b2√2) = a1a2 + 2 b1b2 + (a1b2 + b1a2)√2
        let two = BigRational::from_integer(BigInt::from(2));
        Ok(ExactScalar {
            a: &self.a * &other.a + two * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            carries_lambda: self.carries_lambda || other.carries_lambda,
        })
    }

    /// Rescale by a rational factor, keeping the dimension.
    pub fn scale(&self, factor: &BigRational) -> ExactScalar {
        ExactScalar {
            a: &self.a * factor,
            b: &self.b * factor,
            carries_lambda: self.carries_lambda,
        }
    }

    /// Exact multiplication by √2: `(a + b√2)√2 = 2b + a√2`.
    pub fn mul_sqrt2(&self) -> ExactScalar {
        let two = BigRational::from_integer(BigInt::from(2));
        ExactScalar {
            a: two * &self.b,
            b: self.a.clone(),
            carries_lambda: self.carries_lambda,
        }
    }

    /// Exact division by `√2^power`, using `1/√2 = √2/2`.
    pub fn div_sqrt2(&self, power: u32) -> ExactScalar {
        let halves = power / 2;
        let mut out = self.scale(&BigRational::new(BigInt::from(1), BigInt::from(1) << halves));
        if power % 2 == 1 {
            // (a + b√2)/√2 = b + (a/2)√2
            out = ExactScalar {
                a: out.b.clone(),
                b: out.a / BigRational::from_integer(BigInt::from(2)),
                carries_lambda: out.carries_lambda,
            };
        }
        out
    }

    /// Numeric realization at a concrete nonzero λ.
    pub fn to_float(&self, lambda: f64) -> Result<f64, Error> {
        if lambda == 0.0 {
            return Err(Error::LambdaZero);
        }
        if !lambda.is_finite() {
            return Err(Error::LambdaNotFinite { value: lambda });
        }
        let core = rational_to_f64(&self.a) + rational_to_f64(&self.b) * std::f64::consts::SQRT_2;
        Ok(if self.carries_lambda { core * lambda } else { core })
    }

    fn checked_combine(&self, other: &ExactScalar, subtract: bool) -> ExactScalar {
        // Zeros are dimension-neutral; otherwise both sides must agree.
        assert!(
            self.is_zero() || other.is_zero() || self.carries_lambda == other.carries_lambda,
            "cannot add scalars of different lambda dimension"
        );
        let carries = if self.is_zero() { other.carries_lambda } else { self.carries_lambda };
        let (oa, ob) = if subtract {
            (-&other.a, -&other.b)
        } else {
            (other.a.clone(), other.b.clone())
        };
        ExactScalar { a: &self.a + oa, b: &self.b + ob, carries_lambda: carries }
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, other: &ExactScalar) -> ExactScalar {
        self.checked_combine(other, false)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, other: &ExactScalar) -> ExactScalar {
        self.checked_combine(other, true)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
            carries_lambda: self.carries_lambda,
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.carries_lambda == other.carries_lambda || self.is_zero())
    }
}

impl Eq for ExactScalar {}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactScalar", 4)?;
        s.serialize_field("a_num", &self.a.numer().to_string())?;
        s.serialize_field("a_den", &self.a.denom().to_string())?;
        s.serialize_field("b_num", &self.b.numer().to_string())?;
        s.serialize_field("b_den", &self.b.denom().to_string())?;
        s.end()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let core = match (self.a.is_zero(), self.b.is_zero()) {
            (false, true) => format_rational(&self.a),
            (true, false) => format!("{}*sqrt2", format_rational(&self.b)),
            _ => format!(
                "{} {} {}*sqrt2",
                format_rational(&self.a),
                if self.b.is_negative() { "-" } else { "+" },
                format_rational(&self.b.abs())
            ),
        };
        if self.carries_lambda {
            match core.as_str() {
                "1" => write!(f, "lambda"),
                "-1" => write!(f, "-lambda"),
                _ => write!(f, "({})*lambda", core),
            }
        } else {
            write!(f, "{}", core)
        }
    }
}

fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
