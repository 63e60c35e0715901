use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn central_binomial(k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * k - i) / BigInt::from(i + 1))
}

/// `b_m = (1/2 − 1/(k+1))·binom(2k, k)` for `m = 2k`, and 0 for odd `m`.
pub fn catalan_correction(m: usize) -> BigRational {
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let k = m / 2;
    let half = BigRational::new(1.into(), 2.into());
    let inv = BigRational::new(1.into(), BigInt::from(k + 1));
    (half - inv) * BigRational::from_integer(central_binomial(k))
}

/// `b'_0 = −1/2`, `b'_2 = 1`, and 0 otherwise.
pub fn b_prime(n: usize) -> BigRational {
    match n {
        0 => BigRational::new((-1).into(), 2.into()),
        2 => BigRational::one(),
        _ => BigRational::zero(),
    }
}
