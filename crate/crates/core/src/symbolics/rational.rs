use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Returns `Some(m)` when `x` is an integer `<= 0`, i.e. `x = -m`.
pub fn nonpositive_integer(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_positive() {
        (-x.to_integer()).to_u64()
    } else {
        None
    }
}

pub fn nonnegative_integer(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

pub fn factorial(m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=m {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `m (m-1) ... (m-k+1)`.
pub fn falling(m: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(m - i);
    }
    acc
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - Q::from_integer(floor(x))
}

pub fn pow_q(x: &Q, p: i32) -> Q {
    if p >= 0 {
        num_traits::pow(x.clone(), p as usize)
    } else {
        num_traits::pow(x.recip(), (-p) as usize)
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"3"`, `"-2"`, `"1/2"`. Decimal and float syntax is rejected.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n) || !ok(d) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn sign_pow(m: i64) -> Q {
    if m.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}
