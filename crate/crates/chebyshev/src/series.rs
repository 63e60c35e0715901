use crate::poly::RatPoly;
use crate::scalar::{cheb_poly, t_to_power, ChebKind};
use crate::wishart::{p_polys, q_polys};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesBasis {
    Power,
    /// `T̃_n(x) = 2 T_n(x/2)`, with `T̃_0 = 2`.
    ChebyshevTScaled,
    ChebyshevU,
    PFamily(BigRational),
    QFamily(BigRational),
}

/// `Σ_n c_n b_n(x)` in one of the supported bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    pub basis: SeriesBasis,
    pub coeffs: Vec<BigRational>,
}

impl PolySeries {
    pub fn power(p: RatPoly) -> Self {
        PolySeries { basis: SeriesBasis::Power, coeffs: p.0 }
    }

    /// Expands the series in the monomial basis, exactly.
    pub fn to_power(&self) -> RatPoly {
        let n = self.coeffs.len();
        let basis: Vec<RatPoly> = match &self.basis {
            SeriesBasis::Power => (0..n).map(RatPoly::monomial).collect(),
            SeriesBasis::ChebyshevTScaled => (0..n).map(t_to_power).collect(),
            SeriesBasis::ChebyshevU => (0..n).map(|k| cheb_poly(ChebKind::U, k)).collect(),
            SeriesBasis::PFamily(a) => p_polys(a, n.saturating_sub(1)),
            SeriesBasis::QFamily(a) => q_polys(a, n.saturating_sub(1)),
        };
        basis.iter().zip(&self.coeffs).fold(RatPoly::zero(), |acc, (b, c)| &acc + &b.scale(c))
    }
}

/// `xᵐ` in the scaled first-kind basis.
pub fn power_to_t_series(m: usize) -> PolySeries {
    PolySeries { basis: SeriesBasis::ChebyshevTScaled, coeffs: crate::scalar::power_to_t(m) }
}

pub fn p_poly(n: usize, alpha: &BigRational) -> PolySeries {
    PolySeries::power(p_polys(alpha, n).swap_remove(n))
}

pub fn q_poly(n: usize, alpha: &BigRational) -> PolySeries {
    PolySeries::power(q_polys(alpha, n).swap_remove(n))
}
