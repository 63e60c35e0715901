use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `(2b - 1)!!` with `(-1)!! = 1`.
pub fn odd_double_factorial(b: usize) -> BigInt {
    (1..=b).fold(BigInt::one(), |acc, k| acc * BigInt::from(2 * k - 1))
}

/// Table of `I(a, b) = E[(g² - 1)^a g^{2b}]` for `a ≤ a_max`, `b ≤ b_max`,
/// filled by the two-term recursions in `a` and `b`.
pub fn gaussian_mixed_moment_table(a_max: usize, b_max: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); b_max + 1]; a_max + 1];
    for a in 0..=a_max {
        t[a][0] = match a {
            0 => BigInt::one(),
            1 => BigInt::zero(),
            _ => BigInt::from(2 * (a - 1)) * (&t[a - 1][0] + &t[a - 2][0]),
        };
    }
    for b in 1..=b_max {
        for a in 0..=a_max {
            let down = BigInt::from(2 * b - 1) * &t[a][b - 1];
            t[a][b] = if a == 0 { down } else { BigInt::from(2 * a) * &t[a - 1][b] + down };
        }
    }
    t
}

/// Exact `I(a, b) = E[(g² - 1)^a g^{2b}]` for a standard Gaussian `g`.
pub fn gaussian_mixed_moment(a: usize, b: usize) -> BigInt {
    gaussian_mixed_moment_table(a, b)[a][b].clone()
}

/// Outcome of checking `E g^{2a+2b} ≤ 2^a I(a, b)` over a range.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentInequalityReport {
    pub cases: usize,
    pub violations: Vec<(usize, usize)>,
}

/// Checks the inequality on `{b = 0, a ≥ 2} ∪ {b ≥ 1, a ≥ 0}` with
/// `a + b ≤ max_total`, in exact arithmetic.
pub fn check_moment_inequality(max_total: usize) -> MomentInequalityReport {
    let t = gaussian_mixed_moment_table(max_total, max_total);
    let mut report = MomentInequalityReport { cases: 0, violations: vec![] };
    for a in 0..=max_total {
        for b in 0..=max_total - a {
            if b == 0 && a < 2 {
                continue;
            }
            report.cases += 1;
            let lhs = odd_double_factorial(a + b);
            let rhs = (BigInt::one() << a) * &t[a][b];
            if lhs > rhs {
                report.violations.push((a, b));
            }
        }
    }
    report
}
