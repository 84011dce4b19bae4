//! Big-integer and big-rational plumbing: factorials, binomials, log-domain
//! conversion of huge values, and fixed-precision decimal rendering.
//!
//! The probability formulas produce fractions whose parts overflow every
//! native type long before n reaches 100, so everything downstream of the
//! recursions funnels through the helpers here instead of touching f64
//! until the last moment.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// n! as a big integer.
pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, r| acc * BigUint::from(r))
}

/// C(n, k) as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// n! / m! for m <= n, i.e. the product (m+1)(m+2)...n.
pub fn falling_quotient(n: usize, m: usize) -> BigUint {
    debug_assert!(m <= n);
    (m + 1..=n).fold(BigUint::one(), |acc, r| acc * BigUint::from(r))
}

/// Natural log of a positive big integer, good to a few ulps.
///
/// The top 53 bits convert to f64 exactly, the discarded tail contributes a
/// relative error below 2^-52, so the absolute error in the log is ~2e-16
/// per call regardless of magnitude.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational whose parts may be astronomically big.
pub fn ln_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of a non-positive rational");
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Nearest f64 to a rational, robust to parts that overflow f64 on their own.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
    if num.is_finite() && den.is_finite() {
        return num / den;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&r.abs()).exp()
}

const SIG_DIGITS: usize = 15;

fn pow10(e: u32) -> BigUint {
    num_traits::pow(BigUint::from(10u32), e as usize)
}

/// Decimal rendering with 15 significant digits, round half to even,
/// trailing zeros stripped, falling back to scientific notation outside
/// the exponent window [-4, 15). Matches printf "%.15g" output and never
/// goes through f64, so it stays exact for arbitrarily large fractions.
pub fn decimal_string(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();

    // Decimal exponent e with 10^e <= num/den < 10^(e+1); the digit-count
    // guess is off by at most one.
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let at_least = |m: i64| -> bool {
        if m >= 0 {
            *num >= den * pow10(m as u32)
        } else {
            num * pow10((-m) as u32) >= *den
        }
    };
    while at_least(e + 1) {
        e += 1;
    }
    while !at_least(e) {
        e -= 1;
    }

    // Round num/den * 10^(14-e) half to even; that is the 15-digit mantissa.
    let scale = SIG_DIGITS as i64 - 1 - e;
    let (sn, sd) = if scale >= 0 {
        (num * pow10(scale as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-scale) as u32))
    };
    let (mut q, rem) = sn.div_rem(&sd);
    let twice = &rem * 2u32;
    if twice > sd || (twice == sd && (&q % 2u32).is_one()) {
        q += 1u32;
    }
    let mut digits = q.to_string();
    if digits.len() > SIG_DIGITS {
        // all-nines rounded up to the next power of ten
        digits.truncate(SIG_DIGITS);
        e += 1;
    }
    debug_assert_eq!(digits.len(), SIG_DIGITS);

    let stripped = digits.trim_end_matches('0');
    let s = if stripped.is_empty() { "0" } else { stripped };
    let body = if (-4..SIG_DIGITS as i64).contains(&e) {
        if e >= 0 {
            let point = e as usize + 1;
            if s.len() <= point {
                format!("{}{}", s, "0".repeat(point - s.len()))
            } else {
                format!("{}.{}", &s[..point], &s[point..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e) as usize - 1), s)
        }
    } else {
        let mantissa = if s.len() == 1 {
            s.to_string()
        } else {
            format!("{}.{}", &s[..1], &s[1..])
        };
        format!(
            "{}e{}{:02}",
            mantissa,
            if e < 0 { "-" } else { "+" },
            e.abs()
        )
    };
    if r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}
