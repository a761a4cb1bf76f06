//! Scalars under a dataset-wide arithmetic mode.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Default comparison tolerance in float mode.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float => "float",
        })
    }
}

/// A real quantity: exact rational or binary float.
///
/// Mixed-mode arithmetic degrades to float. Datasets never mix modes, so
/// that path only shows up when float oracles are probed with exact prices.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero(mode: ScalarMode) -> Self {
        Self::from_int(0, mode)
    }

    pub fn one(mode: ScalarMode) -> Self {
        Self::from_int(1, mode)
    }

    pub fn from_int(n: i64, mode: ScalarMode) -> Self {
        match mode {
            ScalarMode::Rational => Scalar::Exact(Rational::from_integer(n)),
            ScalarMode::Float => Scalar::Float(n as f64),
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::Exact(Rational::new(numer, denom))
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Exact(_) => ScalarMode::Rational,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Converts into `mode`; floats become their exact binary value.
    pub fn to_mode(&self, mode: ScalarMode) -> Option<Scalar> {
        match (self, mode) {
            (Scalar::Exact(_), ScalarMode::Rational) | (Scalar::Float(_), ScalarMode::Float) => {
                Some(self.clone())
            }
            (Scalar::Exact(r), ScalarMode::Float) => Some(Scalar::Float(r.to_f64())),
            (Scalar::Float(x), ScalarMode::Rational) => Rational::from_f64(*x).map(Scalar::Exact),
        }
    }

    fn mode_rank(&self) -> u8 {
        match self {
            Scalar::Exact(_) => 0,
            Scalar::Float(_) => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// Exact sign, no tolerance.
    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => r.signum(),
            Scalar::Float(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl Ord for Scalar {
    /// Exact order; floats use IEEE order with `-0 == 0`. A rational and a
    /// float of equal value are ordered rational first, so equality never
    /// crosses modes and stays consistent with `Hash`.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                a.partial_cmp(&b)
                    .unwrap_or_else(|| a.total_cmp(&b))
                    .then_with(|| self.mode_rank().cmp(&other.mode_rank()))
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Exact(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Float(x) => {
                1u8.hash(state);
                // -0.0 and 0.0 compare equal
                (x + 0.0).to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    /// Rationals as `"a/b"` strings, floats as numbers.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.collect_str(r),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => s.parse().map(Scalar::Exact).map_err(D::Error::custom),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::Float(i as f64))
                } else {
                    n.as_f64()
                        .map(Scalar::Float)
                        .ok_or_else(|| D::Error::custom("unrepresentable number"))
                }
            }
            other => Err(D::Error::custom(format!("expected number or rational string, got {other}"))),
        }
    }
}

/// Comparison policy: exact in rational mode, `tol`-fuzzy in float mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arith {
    pub mode: ScalarMode,
    pub tol: f64,
}

impl Arith {
    pub fn exact() -> Self {
        Arith { mode: ScalarMode::Rational, tol: 0.0 }
    }

    pub fn float(tol: f64) -> Self {
        Arith { mode: ScalarMode::Float, tol }
    }

    pub fn new(mode: ScalarMode, tol: f64) -> Self {
        match mode {
            ScalarMode::Rational => Self::exact(),
            ScalarMode::Float => Self::float(tol),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.mode)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.mode)
    }

    pub fn int(&self, n: i64) -> Scalar {
        Scalar::from_int(n, self.mode)
    }

    /// Sign with values inside `[-tol, tol]` treated as zero.
    pub fn sign(&self, s: &Scalar) -> Ordering {
        match s {
            Scalar::Exact(r) => r.signum(),
            Scalar::Float(x) => {
                if x.abs() <= self.tol {
                    Ordering::Equal
                } else if *x > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn is_negative(&self, s: &Scalar) -> bool {
        self.sign(s) == Ordering::Less
    }

    pub fn is_positive(&self, s: &Scalar) -> bool {
        self.sign(s) == Ordering::Greater
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        self.sign(s) == Ordering::Equal
    }

    pub fn compare(&self, a: &Scalar, b: &Scalar) -> Ordering {
        self.sign(&(a - b))
    }
}
