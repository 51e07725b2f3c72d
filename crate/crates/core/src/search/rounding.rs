//! Best rational approximation under a denominator cap, computed exactly
//! from the binary value of the float by continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The closest fraction to `x` with denominator at most `max_den`.
/// Odd-symmetric: `best_rational(-x) == -best_rational(x)`.
pub fn best_rational(x: f64, max_den: u64) -> Option<BigRational> {
    assert!(max_den >= 1, "denominator cap must be positive");
    let exact = BigRational::from_float(x)?;
    if exact.is_negative() {
        return Some(-limit_denominator(&-exact, max_den));
    }
    Some(limit_denominator(&exact, max_den))
}

fn limit_denominator(x: &BigRational, max_den: u64) -> BigRational {
    let cap = BigInt::from(max_den);
    if x.denom() <= &cap {
        return x.clone();
    }
    // convergents p0/q0, p1/q1
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let (a, r) = n.div_rem(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > cap {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (&cap - &q0) / &q1;
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}
