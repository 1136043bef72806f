//! Signed reals stored by the natural log of their magnitude.
//!
//! Quantities such as `e^{2nγ_n}` leave the binary64 range already for
//! `n = 3` (`e^{468}`), so every constant and bound in this crate is carried
//! as a [`LogScalar`] and only converted to `f64` at the very end, through a
//! saturating conversion that reports overflow instead of producing garbage.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest natural log whose exponential is still a finite `f64`.
pub const LN_F64_MAX: f64 = 709.782_712_893_384;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// A real number `sign · exp(ln_mag)`. `ln_mag` is meaningless when the sign
/// is zero and is normalized to `0.0` in that case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScalar {
    sign: Sign,
    ln_mag: f64,
}

/// Result of converting a [`LogScalar`] back to `f64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Saturated {
    pub value: f64,
    /// True when the magnitude exceeds the `f64` range and `value` is `±inf`.
    pub overflow: bool,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar { sign: Sign::Zero, ln_mag: 0.0 };
    pub const ONE: LogScalar = LogScalar { sign: Sign::Positive, ln_mag: 0.0 };

    /// `sign · e^{ln_mag}`. A non-finite `ln_mag` of `-inf` yields zero.
    pub fn new(sign: Sign, ln_mag: f64) -> Self {
        if sign == Sign::Zero || ln_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogScalar { sign, ln_mag }
        }
    }

    /// Positive number with the given natural log.
    pub fn from_ln(ln_mag: f64) -> Self {
        Self::new(Sign::Positive, ln_mag)
    }

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else if v > 0.0 {
            LogScalar { sign: Sign::Positive, ln_mag: v.ln() }
        } else {
            LogScalar { sign: Sign::Negative, ln_mag: (-v).ln() }
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn ln_mag(&self) -> f64 {
        self.ln_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }

    /// Natural log of a positive value. Errors on zero or negative values.
    pub fn ln(&self) -> Result<f64> {
        match self.sign {
            Sign::Positive => Ok(self.ln_mag),
            _ => Err(Error::domain("logarithm of a non-positive LogScalar")),
        }
    }

    pub fn to_value(&self) -> Saturated {
        match self.sign {
            Sign::Zero => Saturated { value: 0.0, overflow: false },
            s => {
                let overflow = self.ln_mag > LN_F64_MAX;
                let mag = if overflow { f64::INFINITY } else { self.ln_mag.exp() };
                let value = if s == Sign::Negative { -mag } else { mag };
                Saturated { value, overflow }
            }
        }
    }

    /// Saturating conversion; `±inf` on overflow.
    pub fn to_f64(&self) -> f64 {
        self.to_value().value
    }

    pub fn mul(&self, other: &LogScalar) -> LogScalar {
        let sign = self.sign.mul(other.sign);
        Self::new(sign, self.ln_mag + other.ln_mag)
    }

    pub fn div(&self, other: &LogScalar) -> Result<LogScalar> {
        if other.is_zero() {
            return Err(Error::domain("division by a zero LogScalar"));
        }
        let sign = self.sign.mul(other.sign);
        Ok(Self::new(sign, self.ln_mag - other.ln_mag))
    }

    pub fn recip(&self) -> Result<LogScalar> {
        Self::ONE.div(self)
    }

    pub fn neg(&self) -> LogScalar {
        LogScalar { sign: self.sign.flip(), ln_mag: self.ln_mag }
    }

    pub fn abs(&self) -> LogScalar {
        match self.sign {
            Sign::Zero => Self::ZERO,
            _ => LogScalar { sign: Sign::Positive, ln_mag: self.ln_mag },
        }
    }

    /// Real power of a positive number, or of zero with a positive exponent.
    /// Negative bases are accepted only for integral exponents.
    pub fn powf(&self, exponent: f64) -> Result<LogScalar> {
        match self.sign {
            Sign::Zero => {
                if exponent > 0.0 {
                    Ok(Self::ZERO)
                } else if exponent == 0.0 {
                    Ok(Self::ONE)
                } else {
                    Err(Error::domain("zero raised to a negative power"))
                }
            }
            Sign::Positive => Ok(Self::from_ln(self.ln_mag * exponent)),
            Sign::Negative => {
                if exponent.fract() != 0.0 {
                    return Err(Error::domain("negative base with non-integral exponent"));
                }
                let odd = (exponent % 2.0).abs() == 1.0;
                let sign = if odd { Sign::Negative } else { Sign::Positive };
                Ok(Self::new(sign, self.ln_mag * exponent))
            }
        }
    }

    pub fn sqrt(&self) -> Result<LogScalar> {
        if self.sign == Sign::Negative {
            return Err(Error::domain("square root of a negative LogScalar"));
        }
        self.powf(0.5)
    }

    /// Signed sum, evaluated without leaving the log domain.
    pub fn add(&self, other: &LogScalar) -> LogScalar {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.ln_mag >= other.ln_mag { (self, other) } else { (other, self) };
        let d = small.ln_mag - big.ln_mag;
        if big.sign == small.sign {
            Self::new(big.sign, big.ln_mag + d.exp().ln_1p())
        } else if d == 0.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.ln_mag + (-d.exp()).ln_1p())
        }
    }

    pub fn sub(&self, other: &LogScalar) -> LogScalar {
        self.add(&other.neg())
    }

    /// `e^{self}` for a value whose magnitude fits in `f64`.
    pub fn exp_of(&self) -> LogScalar {
        Self::from_ln(self.to_f64())
    }

    /// Total order consistent with the represented reals.
    pub fn cmp_value(&self, other: &LogScalar) -> Ordering {
        let key = |x: &LogScalar| x.sign.as_i8();
        match key(self).cmp(&key(other)) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Ordering::Equal,
                Sign::Positive => self.ln_mag.total_cmp(&other.ln_mag),
                Sign::Negative => other.ln_mag.total_cmp(&self.ln_mag),
            },
            o => o,
        }
    }

    pub fn max(self, other: LogScalar) -> LogScalar {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: LogScalar) -> LogScalar {
        if self.cmp_value(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with 17 significant digits, or `inf(ln=<value>)` /
    /// `-inf(ln=<value>)` when the magnitude overflows `f64`.
    pub fn to_decimal_string(&self) -> String {
        let s = self.to_value();
        if s.overflow {
            let prefix = if self.sign == Sign::Negative { "-" } else { "" };
            format!("{prefix}inf(ln={})", fmt_sig17(self.ln_mag))
        } else {
            fmt_sig17(s.value)
        }
    }
}

/// `∏ baseᵢ^{exponentᵢ}` evaluated in log domain.
pub fn log_combine(terms: &[(LogScalar, f64)]) -> Result<LogScalar> {
    let mut acc = LogScalar::ONE;
    for (base, exponent) in terms {
        let term = base.powf(*exponent)?;
        acc = acc.mul(&term);
    }
    Ok(acc)
}

/// `17` significant digits, the CSV number format.
pub fn fmt_sig17(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.16e}", v)
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl From<f64> for LogScalar {
    fn from(v: f64) -> Self {
        LogScalar::from_value(v)
    }
}

impl Serialize for LogScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogScalar", 3)?;
        st.serialize_field("sign", &self.sign.as_i8())?;
        st.serialize_field("ln", &self.ln_mag)?;
        let sat = self.to_value();
        if sat.overflow {
            st.serialize_field("value", &self.to_decimal_string())?;
        } else {
            st.serialize_field("value", &sat.value)?;
        }
        st.end()
    }
}
