//! Exact-arithmetic reference evaluators.
//!
//! Everything here is deliberately written against the raw series definitions
//! with big-integer arithmetic and shares no code with `jacobi-core`. The
//! functions are slow and exist to be compared against.
//!
//! Points are taken as `f64` and converted exactly to rationals, so an oracle
//! value and an implementation value refer to the very same abscissa.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient with the convention that out-of-range lower indices
/// give zero. The upper index must be non-negative.
fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n as u64 - i) / BigInt::from(i + 1);
    }
    acc
}

/// `x = num / den` with `den` a power of two, as produced by an `f64`.
fn dyadic(x: f64) -> (BigInt, BigInt) {
    let r = BigRational::from_float(x).expect("finite abscissa");
    (r.numer().clone(), r.denom().clone())
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("representable")
}

/// Jacobi polynomial `P_n^{(alpha,beta)}(x)` by direct summation of the
/// hypergeometric series
///
/// `sum_s C(n+alpha, s) C(n+beta, n-s) ((x+1)/2)^s ((x-1)/2)^(n-s)`
///
/// in exact rational arithmetic. Terms whose Gamma-function denominators sit
/// on a pole vanish, which the binomial convention handles. Requires
/// `n + alpha >= 0` and `n + beta >= 0`.
pub fn jacobi_poly(n: u32, alpha: i32, beta: i32, x: f64) -> f64 {
    let n = i64::from(n);
    let (a, b) = (i64::from(alpha), i64::from(beta));
    assert!(n + a >= 0 && n + b >= 0, "parameters outside the lattice");
    let (num, den) = dyadic(x);
    // (x+1)/2 = (den+num)/(2 den), (x-1)/2 = (num-den)/(2 den)
    let plus = &den + &num;
    let minus = &num - &den;
    let mut total = BigInt::zero();
    for s in 0..=n {
        let c = binomial(n + a, s) * binomial(n + b, n - s);
        if c.is_zero() {
            continue;
        }
        total += c * plus.pow(s as u32) * minus.pow((n - s) as u32);
    }
    let denom = (BigInt::from(2) * den).pow(n as u32);
    rational_to_f64(&BigRational::new(total, denom))
}

/// Algebraic Jacobi function for the doubled indices `(j2, m2, q2)`.
///
/// Substituting the Jacobi series into the prefactor-dressed definition gives
///
/// `sqrt(R) * sum_s (-1)^(n-s) C(n,s) C(j+m, m-q+s) u^(e1_s) v^(e2_s)`
///
/// with `u = (1-x)/2`, `v = (1+x)/2`, `n = j-m`,
/// `R = (j+q)!(j-q)! / ((j+m)!(j-m)!)`, `e1_s = j + (q-m)/2 - s` and
/// `e2_s = (m-q)/2 + s`. Every surviving term has non-negative exponents, so
/// this form is valid on the closed interval without limit rules. The
/// half-integer parts of the exponents are common to all terms and are pulled
/// out as one square root; everything else is an exact integer sum.
pub fn ajf(j2: i32, m2: i32, q2: i32, x: f64) -> f64 {
    assert!(j2 >= m2.abs() && j2 >= q2.abs(), "range");
    assert!((j2 - m2) % 2 == 0 && (j2 - q2) % 2 == 0, "parity");
    let jm_plus = i64::from((j2 + m2) / 2);
    let n = i64::from((j2 - m2) / 2);
    let jq_plus = u64::try_from((j2 + q2) / 2).unwrap();
    let jq_minus = u64::try_from((j2 - q2) / 2).unwrap();
    let m_minus_q = i64::from((m2 - q2) / 2);

    let (num, den) = dyadic(x);
    let u_num = &den - &num; // u = u_num / (2 den)
    let v_num = &den + &num;

    // doubled exponents at s = 0
    let e1_0 = i64::from(j2) - m_minus_q;
    let e2_0 = m_minus_q;
    let f1 = e1_0.rem_euclid(2);
    let f2 = e2_0.rem_euclid(2);

    let mut total = BigInt::zero();
    let mut int_degree = None;
    for s in 0..=n {
        let c = binomial(n, s) * binomial(jm_plus, m_minus_q + s);
        if c.is_zero() {
            continue;
        }
        let a = (e1_0 - 2 * s - f1) / 2;
        let b = (e2_0 + 2 * s - f2) / 2;
        assert!(a >= 0 && b >= 0, "negative exponent on a surviving term");
        int_degree = Some(a + b);
        let term = c * u_num.pow(a as u32) * v_num.pow(b as u32);
        if (n - s) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let Some(int_degree) = int_degree else {
        return 0.0;
    };
    if total.is_zero() {
        return 0.0;
    }
    let sign = if total.sign() == Sign::Minus {
        -1.0
    } else {
        1.0
    };

    let ratio = BigRational::new(
        factorial(jq_plus) * factorial(jq_minus),
        factorial(jm_plus as u64) * factorial(n as u64),
    );
    let two_den = BigInt::from(2) * &den;
    let mut squared =
        ratio * BigRational::new(total.abs().pow(2), two_den.pow(2 * int_degree as u32));
    if f1 == 1 {
        squared *= BigRational::new(u_num.clone(), two_den.clone());
    }
    if f2 == 1 {
        squared *= BigRational::new(v_num.clone(), two_den.clone());
    }
    sign * rational_to_f64(&squared).sqrt()
}

/// `Gamma(j+m+1) Gamma(j-m+1) / (Gamma(j+q+1) Gamma(j-q+1))` exactly.
pub fn gamma_ratio(j2: i32, m2: i32, q2: i32) -> f64 {
    let f = |k: i32| factorial(u64::try_from(k / 2).unwrap());
    let r = BigRational::new(f(j2 + m2) * f(j2 - m2), f(j2 + q2) * f(j2 - q2));
    rational_to_f64(&r)
}

/// Legendre polynomial by Bonnet's recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for n in 1..l {
        let n = f64::from(n);
        let p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Associated Legendre function `P_l^m(x)` including the Condon-Shortley
/// phase, by the standard upward recurrence in `l`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(m <= l);
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * f64::from(2 * m + 1) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * f64::from(2 * ll - 1) * pmmp1 - f64::from(ll + m - 1) * pmm) / f64::from(ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `n!` as a float, exact for `n <= 22` and correctly rounded beyond.
pub fn factorial_f64(n: u32) -> f64 {
    rational_to_f64(&BigRational::from_integer(factorial(u64::from(n))))
}
