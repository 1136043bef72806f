//! Working-precision abstraction.
//!
//! Kernel evaluation, system assembly, the dense solve and interpolant
//! evaluation are written once against [`Real`] and instantiated either with
//! `f64` or with [`Ext`], a software binary float with a configurable
//! mantissa width.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign as BfSign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest mantissa width accepted for extended precision.
pub const MIN_EXTENDED_BITS: u32 = 128;
/// Default mantissa width for extended precision.
pub const DEFAULT_EXTENDED_BITS: u32 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PrecisionPolicy {
    #[default]
    Machine,
    Extended { bits: u32 },
}

impl PrecisionPolicy {
    pub fn extended(bits: u32) -> Result<Self> {
        if bits < MIN_EXTENDED_BITS {
            return Err(Error::InvalidInput(format!(
                "extended precision needs at least {MIN_EXTENDED_BITS} bits, got {bits}"
            )));
        }
        Ok(PrecisionPolicy::Extended { bits })
    }

    /// Significant bits carried by arithmetic under this policy.
    pub fn bits(&self) -> u32 {
        match self {
            PrecisionPolicy::Machine => f64::MANTISSA_DIGITS,
            PrecisionPolicy::Extended { bits } => *bits,
        }
    }

    pub fn unit_roundoff(&self) -> f64 {
        0.5 * (-(self.bits() as f64 - 1.0)).exp2()
    }
}

/// Minimal field interface needed by the dense linear algebra and the kernel.
pub trait Real: Clone + fmt::Debug + Send + Sync + 'static {
    /// Construction context (the precision, for software floats).
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn from_f64(x: f64, ctx: Self::Ctx) -> Self;
    fn to_f64(&self) -> f64;
    fn ctx(&self) -> Self::Ctx;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// `self^e` for `self > 0`.
    fn powf(&self, e: f64) -> Self;

    fn is_zero(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;

    /// Half the spacing between 1 and the next representable number.
    fn unit_roundoff(ctx: Self::Ctx) -> f64;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_f64(0.0, ctx)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_f64(1.0, ctx)
    }
}

impl Real for f64 {
    type Ctx = ();

    fn from_f64(x: f64, _: ()) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ctx(&self) {}
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powf(&self, e: f64) -> Self {
        f64::powf(*self, e)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        f64::abs(*self).total_cmp(&f64::abs(*o))
    }
    fn unit_roundoff(_: ()) -> f64 {
        f64::EPSILON / 2.0
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Software binary float with `bits` mantissa bits.
#[derive(Clone, Debug)]
pub struct Ext {
    v: BigFloat,
    bits: usize,
}

impl Ext {
    pub fn new(x: f64, bits: usize) -> Self {
        Ext { v: BigFloat::from_f64(x, bits), bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.v
    }

    fn wrap(&self, v: BigFloat) -> Self {
        Ext { v, bits: self.bits }
    }

    /// Shortest round-trip decimal rendering at full precision.
    pub fn to_decimal_string(&self) -> String {
        with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "nan".to_string())
    }

    pub fn parse(s: &str, bits: usize) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc));
        if v.is_nan() {
            return Err(Error::InvalidInput(format!("cannot parse '{s}' as a decimal number")));
        }
        Ok(Ext { v, bits })
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    // Scale in steps that keep every intermediate power of two finite.
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Real for Ext {
    type Ctx = usize;

    fn from_f64(x: f64, bits: usize) -> Self {
        Ext::new(x, bits)
    }

    fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.as_raw_parts() {
            Some((words, _, sign, exp, _)) if !words.is_empty() => {
                let hi = words[words.len() - 1];
                let lo = if words.len() > 1 { words[words.len() - 2] } else { 0 };
                // Fold the next word in as a sticky bit so the u64 -> f64
                // rounding sees whether anything lies below the top word.
                let top = if lo != 0 { hi | 1 } else { hi };
                let mag = ldexp(top as f64, exp as i64 - 64);
                if sign == BfSign::Neg {
                    -mag
                } else {
                    mag
                }
            }
            _ => 0.0,
        }
    }

    fn ctx(&self) -> usize {
        self.bits
    }

    fn add(&self, o: &Self) -> Self {
        self.wrap(self.v.add(&o.v, self.bits, RM))
    }
    fn sub(&self, o: &Self) -> Self {
        self.wrap(self.v.sub(&o.v, self.bits, RM))
    }
    fn mul(&self, o: &Self) -> Self {
        self.wrap(self.v.mul(&o.v, self.bits, RM))
    }
    fn div(&self, o: &Self) -> Self {
        self.wrap(self.v.div(&o.v, self.bits, RM))
    }
    fn neg(&self) -> Self {
        self.wrap(self.v.neg())
    }
    fn abs(&self) -> Self {
        self.wrap(self.v.abs())
    }
    fn sqrt(&self) -> Self {
        self.wrap(self.v.sqrt(self.bits, RM))
    }

    fn powf(&self, e: f64) -> Self {
        let twice = 2.0 * e;
        if twice.fract() == 0.0 && twice.abs() < 1e6 {
            // Half-integral exponents only need a square root and an integer power.
            let k = twice as i64;
            let (base, k) = if k % 2 == 0 {
                (self.v.clone(), k / 2)
            } else {
                (self.v.sqrt(self.bits, RM), k)
            };
            let p = base.powi(k.unsigned_abs() as usize, self.bits, RM);
            let p = if k < 0 { p.reciprocal(self.bits, RM) } else { p };
            return self.wrap(p);
        }
        let n = BigFloat::from_f64(e, self.bits);
        self.wrap(with_consts(|cc| self.v.pow(&n, self.bits, RM, cc)))
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    fn cmp_abs(&self, o: &Self) -> Ordering {
        match self.v.abs_cmp(&o.v) {
            Some(x) if x < 0 => Ordering::Less,
            Some(x) if x > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    fn unit_roundoff(bits: usize) -> f64 {
        0.5 * (-(bits as f64 - 1.0)).exp2()
    }
}
