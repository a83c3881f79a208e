//! Ground-state fidelity susceptibility and counterdiabatic couplings of the
//! periodic transverse-field Ising chain.

use serde::Serialize;

use crate::kernels::{coth_difference, cosh_over_cosh, cosh_over_cosh_sq, sinh_over_sinh, PoleTerm};
use crate::sector::{Momentum, Parity, SectorFamily};
use crate::summation::pairwise_sum;
use crate::{Error, Real, Result};

/// Below this `|g|` the susceptibility is the `g = 0` value to all digits.
const CHI_ZERO_FIELD: f64 = 1e-100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    Closed,
    Direct,
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiPoint<T> {
    pub n_spins: u64,
    pub g: T,
    pub chi: T,
    pub path: EvalPath,
}

fn check_chain(n_spins: u64) -> Result<()> {
    if n_spins < 2 {
        return Err(Error::ChainSize(n_spins as usize, 2, usize::MAX));
    }
    Ok(())
}

fn check_field<T: Real>(g: T) -> Result<()> {
    if !g.is_finite() {
        return Err(Error::Domain(format!("field g must be finite, got {g}")));
    }
    Ok(())
}

/// `g^2 - 2 g cos k + 1`, written so that no cancellation occurs near `|g| = 1`.
fn field_denominator<T: Real>(k: Momentum, g: T) -> T {
    let four = T::lit(4.0);
    if g >= T::zero() {
        let s = k.half_sin::<T>();
        let d = g - T::one();
        d * d + four * g * s * s
    } else {
        let c = k.half_cos::<T>();
        let d = g + T::one();
        d * d - four * g * c * c
    }
}

/// `(1/4) sum_k sin^2 k / (g^2 - 2 g cos k + 1)^2` over the sector momenta.
pub fn chi_direct<T: Real>(n_spins: u64, parity: Parity, g: T) -> Result<T> {
    check_field(g)?;
    let family = SectorFamily::for_chain(n_spins, parity)?;
    let total = pairwise_sum(family.interior().map(|k| {
        let s = k.sin_times::<T>(1);
        let d = field_denominator(k, g);
        s * s / (d * d)
    }));
    Ok(T::lit(0.25) * total)
}

fn chi_zero_field<T: Real>(n_spins: u64) -> T {
    if n_spins == 2 {
        T::lit(0.25)
    } else {
        T::from_count(n_spins) / T::lit(16.0)
    }
}

/// `sinh((N/2-1)x) / (sinh(x) cosh(N x/2))`, even in `x`.
fn chi_psi<T: Real>(half_n: T, x: T) -> Result<T> {
    let a = half_n - T::one();
    let t = x.abs();
    if half_n * t < T::one() {
        return Ok(sinh_over_sinh(a, T::one(), t)? * cosh_over_cosh(T::zero(), half_n, t)?);
    }
    let two = T::lit(2.0);
    let num = -(-two * a * t).exp_m1();
    let den = -(-two * t).exp_m1() * (T::one() + (-two * half_n * t).exp());
    Ok(two * (-two * t).exp() * num / den)
}

/// `32 g^2 chi` as a function of `x = ln|g|`:
/// `(N^2/2) sech^2(N x/2) + N sinh((N/2-1)x)/sinh(x) sech(N x/2)`.
fn chi_profile<T: Real>(n_spins: u64, x: T) -> Result<T> {
    let nn = T::from_count(n_spins);
    let half_n = T::lit(0.5) * nn;
    let s2 = cosh_over_cosh_sq(T::zero(), half_n, x)?;
    let psi = chi_psi(half_n, x)?;
    Ok(T::lit(0.5) * nn * nn * s2 + nn * psi)
}

/// Closed-form susceptibility, total on the real line.
pub fn chi_closed<T: Real>(n_spins: u64, g: T) -> Result<T> {
    Ok(chi_point(n_spins, g)?.chi)
}

/// [`chi_closed`] together with the branch that produced it.
pub fn chi_point<T: Real>(n_spins: u64, g: T) -> Result<ChiPoint<T>> {
    check_chain(n_spins)?;
    check_field(g)?;
    let a = g.abs();
    let point = |chi, path| ChiPoint { n_spins, g, chi, path };
    if a < T::lit(CHI_ZERO_FIELD) {
        return Ok(point(chi_zero_field(n_spins), EvalPath::Limit));
    }
    if a == T::one() {
        let nn = T::from_count(n_spins);
        return Ok(point(nn * (nn - T::one()) / T::lit(32.0), EvalPath::Limit));
    }
    let profile = chi_profile(n_spins, a.ln())?;
    Ok(point(profile / (T::lit(32.0) * a * a), EvalPath::Closed))
}

/// `d ln(chi) / d ln|g|`.
pub fn chi_log_slope<T: Real>(n_spins: u64, x: T) -> Result<T> {
    check_chain(n_spins)?;
    let nn = T::from_count(n_spins);
    let half_n = T::lit(0.5) * nn;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let s2 = cosh_over_cosh_sq(T::zero(), half_n, x)?;
    let th = (half_n * x).tanh();
    let mut value = half * nn * nn * s2;
    let mut slope = -half * nn * nn * nn * s2 * th;
    if n_spins > 2 {
        let a = half_n - T::one();
        let psi = chi_psi(half_n, x)?;
        let log_sos = coth_difference(PoleTerm::new(a, a, a), PoleTerm::new(T::one(), T::one(), T::one()), x)?;
        value = value + nn * psi;
        slope = slope + nn * psi * (log_sos - half_n * th);
    }
    Ok(slope / value - two)
}

/// Location and height of the susceptibility peak on `0 < g <= 1.5`.
///
/// For `N = 2` the susceptibility decreases monotonically in `g`, and the
/// peak is the boundary value at `g = 0`.
pub fn chi_max<T: Real>(n_spins: u64) -> Result<(T, T)> {
    check_chain(n_spins)?;
    let top = T::lit(1.5).ln();
    let floor = T::lit(1e-8).ln();
    let step = T::lit(0.01).min(T::lit(0.25) / T::from_count(n_spins));
    let slope = |x: T| chi_log_slope(n_spins, x);

    // walk down from the top of the window to the first rising point
    let mut hi = top;
    let mut lo = hi - step;
    let mut bracket = None;
    if slope(hi)? > T::zero() {
        return Ok((T::lit(1.5), chi_closed(n_spins, T::lit(1.5))?));
    }
    while lo > floor {
        if slope(lo)? > T::zero() {
            bracket = Some((lo, hi));
            break;
        }
        hi = lo;
        lo = lo - step;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok((T::zero(), chi_zero_field(n_spins)));
    };
    let tol = T::lit(1e-13);
    for _ in 0..200 {
        if hi.exp() - lo.exp() <= tol {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if slope(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let g = (T::lit(0.5) * (lo + hi)).exp();
    Ok((g, chi_closed(n_spins, g)?))
}

fn check_cd_order(n_spins: u64, m: u64) -> Result<()> {
    check_chain(n_spins)?;
    if m == 0 || m >= n_spins {
        return Err(Error::OrderOutOfRange { m, lo: 1, hi: n_spins - 1 });
    }
    Ok(())
}

/// `(1/2N) sum_k sin k sin(m k) / (g^2 - 2 g cos k + 1)` over the sector momenta.
pub fn cd_coefficient_direct<T: Real>(n_spins: u64, parity: Parity, m: u64, g: T) -> Result<T> {
    check_cd_order(n_spins, m)?;
    check_field(g)?;
    let family = SectorFamily::for_chain(n_spins, parity)?;
    let total =
        pairwise_sum(family.interior().map(|k| k.sin_times::<T>(1) * k.sin_times::<T>(m) / field_denominator(k, g)));
    Ok(total / (T::lit(2.0) * T::from_count(n_spins)))
}

/// `(g^{2m} +- g^N) / (8 g^{m+1} (1 +- g^N))` with the sign set by the parity.
pub fn cd_coefficient<T: Real>(n_spins: u64, parity: Parity, m: u64, g: T) -> Result<T> {
    check_cd_order(n_spins, m)?;
    check_field(g)?;
    if g < T::zero() {
        // k -> pi - k maps the sector onto the one of parity (-1)^N times its own
        let mirrored = if n_spins % 2 == 0 { parity } else { parity.flipped() };
        let sign = if m % 2 == 1 { T::one() } else { -T::one() };
        return Ok(sign * cd_positive_field(n_spins, mirrored, m, -g)?);
    }
    cd_positive_field(n_spins, parity, m, g)
}

fn cd_positive_field<T: Real>(n_spins: u64, parity: Parity, m: u64, g: T) -> Result<T> {
    let eighth = T::lit(0.125);
    let sign = T::from_int(parity.sign());
    if g < T::lit(0.5) {
        let lead = g.powi((m - 1) as i32);
        let mirror = g.powi((n_spins - m - 1) as i32);
        let gn = g.powi(n_spins as i32);
        return Ok(eighth * (lead + sign * mirror) / (T::one() + sign * gn));
    }
    let x = g.ln();
    let half_n = T::lit(0.5) * T::from_count(n_spins);
    let shift = half_n - T::from_count(m);
    let shape = match parity {
        Parity::Positive => cosh_over_cosh(shift, half_n, x)?,
        Parity::Negative => sinh_over_sinh(shift, half_n, x)?,
    };
    Ok(eighth * shape / g)
}

/// Couplings of the counterdiabatic Hamiltonian, without the `-dg/dt` factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdCoefficients<T> {
    pub n_spins: u64,
    pub parity: Parity,
    pub g: T,
    /// `weights[i]` multiplies the `(i+2)`-spin string operator.
    pub weights: Vec<T>,
}

pub fn cd_table<T: Real>(n_spins: u64, parity: Parity, g: T) -> Result<CdCoefficients<T>> {
    check_chain(n_spins)?;
    let top = n_spins / 2;
    let mut weights = (1..=top).map(|m| cd_coefficient(n_spins, parity, m, g)).collect::<Result<Vec<T>>>()?;
    if n_spins % 2 == 0 {
        let last = weights.last_mut().expect("N >= 2 gives at least one weight");
        *last = *last * T::lit(0.5);
    }
    Ok(CdCoefficients { n_spins, parity, g, weights })
}
