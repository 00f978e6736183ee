//! Exact rational scalars and compensated float summation.
//!
//! Coordinates, labels, masses, and loss values are carried as `i64`
//! rationals so that equality tests and profile keys are exact. Probability
//! accumulation happens in `f64` through [`NeumaierSum`], which keeps
//! enumeration results stable to well below the crate-wide tolerances.

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exact rational scalar.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n)
}

pub fn rat_to_f64(r: Rat) -> f64 {
    r.to_f64().expect("i64 ratio converts to f64")
}

/// Parse `"p/q"`, `"p"`, or a plain decimal such as `"0.25"` into a rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::Input(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Input(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let i: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let f: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part = Rat::new(f, scale);
        let whole = Rat::from_integer(i);
        return Ok(if negative { whole - frac_part } else { whole + frac_part });
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Render a rational back into the config grammar (`p/q` or integer).
pub fn format_rat(r: Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational extended with infinities, for threshold parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtRat {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl ExtRat {
    pub fn finite(self) -> Option<Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => write!(f, "-inf"),
            ExtRat::Finite(r) => write!(f, "{}", format_rat(*r)),
            ExtRat::PosInf => write!(f, "+inf"),
        }
    }
}

/// Neumaier-compensated accumulator; insensitive to cancellation between
/// terms of mixed magnitude, which exact enumeration produces in bulk.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Checks a probability vector: nonnegative entries summing to one within
/// the crate-wide probability tolerance.
pub const PROB_TOL: f64 = 1e-12;

pub fn check_probabilities(probs: &[f64]) -> Result<()> {
    let mut total = NeumaierSum::new();
    for &p in probs {
        if p.is_nan() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "negative or NaN probability {p}"
            )));
        }
        total.add(p);
    }
    let sum = total.value();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {sum}, expected 1 within {PROB_TOL}"
        )));
    }
    Ok(())
}

/// Binomial coefficient in u128, erroring on overflow.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Input("binomial overflow".into()))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// True when `r` is an exactly-zero rational.
pub fn rat_is_zero(r: Rat) -> bool {
    r.numer().is_zero()
}

/// Absolute value helper used by loss rules.
pub fn rat_abs(r: Rat) -> Rat {
    r.abs()
}
