//! Extended-precision series for the Dawson function and `erfi`.
//!
//! Reference values only: fixed-point big-integer arithmetic, slow, used by
//! the verification suite and tests. The argument is taken as the exact
//! dyadic rational its `f64` represents, so the only error is truncation of
//! the fixed-point terms, which the guard bits keep far below `f64`
//! resolution.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest argument accepted; the alternating series needs about `1.44 x²`
/// guard bits to survive its cancellation.
pub const REFERENCE_LIMIT: f64 = 60.0;

/// Splits a finite nonzero `x` into `(m, e)` with `x = m · 2^e` exactly.
fn dyadic(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let m = BigInt::from(mantissa);
    (if negative { -m } else { m }, e)
}

fn shift(v: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        v << by as usize
    } else {
        v >> (-by) as usize
    }
}

/// `v · 2^-scale` rounded to `f64`.
fn to_f64(v: &BigInt, scale: usize) -> f64 {
    let bits = v.bits() as i64;
    // keep ~80 significant bits, then scale exactly by a power of two
    let drop = (bits - 80).max(0);
    let top = (v >> drop as usize).to_f64().unwrap_or(f64::NAN);
    let mut e = drop - scale as i64;
    let mut r = top;
    // apply 2^e in steps that stay inside the exponent range
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        r *= 2f64.powi(step as i32);
        e -= step;
    }
    r
}

fn check(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > REFERENCE_LIMIT {
        return Err(Error::Domain(format!(
            "reference series needs finite |x| <= {REFERENCE_LIMIT}, got {x}"
        )));
    }
    Ok(())
}

/// `D⁺(x) = Σ (-1)^k 2^k x^{2k+1} / (2k+1)!!`, summed in fixed point.
pub fn dawson_reference(x: f64) -> Result<f64> {
    check(x)?;
    if x == 0.0 {
        return Ok(x);
    }
    let (m, e) = dyadic(x);
    let precision = 200usize.max((std::f64::consts::LOG2_E * x * x).ceil() as usize + 120);
    // term_k = term_{k-1} · (-2 m² 2^{2e}) / (2k + 1)
    let ratio = -(BigInt::from(2) * &m * &m);
    let mut term = shift(m, e + precision as i64);
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = shift(term * &ratio, 2 * e) / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    Ok(to_f64(&sum, precision))
}

/// `erfi(x) = (2/√π) Σ x^{2k+1} / (k! (2k+1))`, summed in fixed point; the
/// constant `2/√π` is applied in `f64`.
pub fn erfi_reference(x: f64) -> Result<f64> {
    check(x)?;
    if x == 0.0 {
        return Ok(x);
    }
    let (m, e) = dyadic(x);
    let precision = 200usize;
    let m2 = &m * &m;
    // power_k = x^{2k+1} / k!
    let mut power = shift(m, e + precision as i64);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = shift(&power * &m2, 2 * e) / BigInt::from(k);
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    Ok(std::f64::consts::FRAC_2_SQRT_PI * to_f64(&sum, precision))
}
