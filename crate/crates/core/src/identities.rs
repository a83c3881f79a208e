//! Finite trigonometric sums with hyperbolic closed forms.
//!
//! With `D(k, x) = sin^2(k/2) + sinh^2(x/2)` and `k` running over the interior
//! momenta of a [`SectorFamily`]:
//!
//! ```text
//! f_m(x) = sum_k sinh(x) cos(m k) / D(k, x)        (SumKind::F)
//! h_m(x) = sum_k sin(k) sin(m k) / D(k, x)         (SumKind::H)
//! ```
//!
//! | family | f_m(x)                                                       | h_m(x)                                  |
//! |--------|--------------------------------------------------------------|-----------------------------------------|
//! | KA     | 2n sinh((n-m)x) / cosh(nx)                                   | 2n cosh((n-m)x) / cosh(nx)              |
//! | KB     | 2n cosh((n-m)x) / sinh(nx) - 2 cosh(e_m x) / sinh(x)         | 2n sinh((n-m)x) / sinh(nx)              |
//! | KC     | (2n+1) sinh((n-m+1/2)x) / cosh((n+1/2)x) - (-1)^m tanh(x/2)  | (2n+1) cosh((n-m+1/2)x) / cosh((n+1/2)x) |
//! | KD     | (2n+1) cosh((n-m+1/2)x) / sinh((n+1/2)x) - coth(x/2)         | (2n+1) sinh((n-m+1/2)x) / sinh((n+1/2)x) |
//!
//! where `e_m = (1 + (-1)^m)/2`. The order ranges are those of
//! [`SectorFamily::order_range`].

use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use crate::kernels::{
    coth_difference, coth_difference_dx, cosh_over_cosh, cosh_over_cosh_sq, d_cosh_over_cosh, d_sinh_over_cosh,
    d_sinh_over_sinh, sinh_over_cosh, sinh_over_sinh, PoleTerm,
};
use crate::sector::{FamilyTag, Momentum, SectorFamily, SumKind};
use crate::summation::pairwise_sum;
use crate::{Error, Real, Result};

/// A fully specified identity instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumQuery<T> {
    pub kind: SumKind,
    pub family: SectorFamily,
    pub m: u64,
    pub x: T,
}

impl<T: Real> SumQuery<T> {
    pub fn new(kind: SumKind, family: SectorFamily, m: u64, x: T) -> Result<Self> {
        family.check_order(kind, m)?;
        if !x.is_finite() {
            return Err(Error::Domain(format!("x must be finite, got {x}")));
        }
        Ok(Self { kind, family, m, x })
    }

    pub fn descriptor(&self) -> QueryDescriptor {
        QueryDescriptor {
            kind: self.kind,
            family: self.family.tag,
            n: self.family.n,
            m: self.m,
            x: self.x.to_f64().unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryDescriptor {
    pub kind: SumKind,
    pub family: FamilyTag,
    pub n: u64,
    pub m: u64,
    pub x: f64,
}

/// Outcome of comparing a direct sum with its closed form.
///
/// The error is measured as `|direct - closed| / max(1, |closed|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub query: QueryDescriptor,
    pub direct: T,
    pub closed: T,
    pub rel_err: T,
    pub pass: bool,
    #[serde(skip)]
    pub tolerance: T,
}

impl<T: Real> VerificationReport<T> {
    pub fn new(query: QueryDescriptor, direct: T, closed: T, tolerance: T) -> Self {
        let rel_err = scaled_error(direct, closed);
        Self { query, direct, closed, rel_err, pass: rel_err <= tolerance, tolerance }
    }
}

/// `|a - b| / max(1, |b|)`; NaN if either side is not finite.
pub fn scaled_error<T: Real>(a: T, b: T) -> T {
    if !a.is_finite() || !b.is_finite() {
        return T::nan();
    }
    (a - b).abs() / b.abs().max(T::one())
}

#[inline]
fn denominator<T: Real>(k: Momentum, sh2: T) -> T {
    let s = k.half_sin::<T>();
    s * s + sh2
}

/// Left-hand side, summed pairwise over the interior momenta in O(n).
pub fn direct_sum<T: Real>(q: &SumQuery<T>) -> Result<T> {
    q.family.check_order(q.kind, q.m)?;
    let x = q.x;
    let half = T::lit(0.5);
    let m = q.m;
    let ks = q.family.interior();
    // past |x| ~ 700 sinh^2(x/2) overflows; divide through by it instead
    if x.abs() <= T::lit(700.0) {
        let sh = (half * x).sinh();
        let sh2 = sh * sh;
        let total = match q.kind {
            SumKind::F => {
                let shx = x.sinh();
                pairwise_sum(ks.map(|k| shx * k.cos_times::<T>(m) / denominator(k, sh2)))
            }
            SumKind::H => pairwise_sum(ks.map(|k| k.sin_times::<T>(1) * k.sin_times::<T>(m) / denominator(k, sh2))),
        };
        return Ok(total);
    }
    let inv = (half * x).sinh().powi(-2);
    let total = match q.kind {
        SumKind::F => {
            let coth = (half * x).tanh().recip();
            let two = T::lit(2.0);
            pairwise_sum(ks.map(|k| {
                let s = k.half_sin::<T>();
                two * coth * k.cos_times::<T>(m) / (s * s * inv + T::one())
            }))
        }
        SumKind::H => pairwise_sum(ks.map(|k| {
            let s = k.half_sin::<T>();
            k.sin_times::<T>(1) * k.sin_times::<T>(m) * inv / (s * s * inv + T::one())
        })),
    };
    Ok(total)
}

struct Frequencies<T> {
    // 2n or 2n+1
    weight: T,
    // n or n + 1/2
    top: T,
    // n - m or n - m + 1/2
    shifted: T,
}

fn frequencies<T: Real>(family: &SectorFamily, m: u64) -> Frequencies<T> {
    let n = T::from_count(family.n);
    let m = T::from_count(m);
    let half = T::lit(0.5);
    if family.tag.is_even() {
        Frequencies { weight: n + n, top: n, shifted: n - m }
    } else {
        Frequencies { weight: n + n + T::one(), top: n + half, shifted: n - m + half }
    }
}

fn parity_sign<T: Real>(m: u64) -> T {
    if m % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// The two pole terms of the KB / KD kind-F closed forms.
fn pole_pair<T: Real>(family: &SectorFamily, m: u64) -> (PoleTerm<T>, PoleTerm<T>) {
    let fr = frequencies::<T>(family, m);
    let half = T::lit(0.5);
    let lead = PoleTerm::new(fr.weight, fr.shifted, fr.top);
    let tail = match family.tag {
        FamilyTag::EvenNeg => {
            let e = if m % 2 == 0 { T::one() } else { T::zero() };
            PoleTerm::new(T::lit(2.0), e, T::one())
        }
        _ => PoleTerm::new(T::one(), half, half),
    };
    (lead, tail)
}

/// Right-hand side in O(1), total on the real line.
pub fn closed_form<T: Real>(q: &SumQuery<T>) -> Result<T> {
    q.family.check_order(q.kind, q.m)?;
    let x = q.x;
    let fam = &q.family;
    let fr = frequencies::<T>(fam, q.m);
    let half = T::lit(0.5);
    match (q.kind, fam.tag) {
        (SumKind::F, FamilyTag::EvenPos) => Ok(fr.weight * sinh_over_cosh(fr.shifted, fr.top, x)?),
        (SumKind::F, FamilyTag::OddPos) => Ok(fr.weight * sinh_over_cosh(fr.shifted, fr.top, x)?
            - parity_sign::<T>(q.m) * sinh_over_cosh(half, half, x)?),
        (SumKind::F, FamilyTag::EvenNeg | FamilyTag::OddNeg) => {
            let (lead, tail) = pole_pair(fam, q.m);
            coth_difference(lead, tail, x)
        }
        (SumKind::H, FamilyTag::EvenPos | FamilyTag::OddPos) => Ok(fr.weight * cosh_over_cosh(fr.shifted, fr.top, x)?),
        (SumKind::H, FamilyTag::EvenNeg | FamilyTag::OddNeg) => Ok(fr.weight * sinh_over_sinh(fr.shifted, fr.top, x)?),
    }
}

/// Analytic d/dx of [`closed_form`].
pub fn closed_form_dx<T: Real>(q: &SumQuery<T>) -> Result<T> {
    q.family.check_order(q.kind, q.m)?;
    let x = q.x;
    let fam = &q.family;
    let fr = frequencies::<T>(fam, q.m);
    let half = T::lit(0.5);
    match (q.kind, fam.tag) {
        (SumKind::F, FamilyTag::EvenPos) => Ok(fr.weight * d_sinh_over_cosh(fr.shifted, fr.top, x)?),
        (SumKind::F, FamilyTag::OddPos) => Ok(fr.weight * d_sinh_over_cosh(fr.shifted, fr.top, x)?
            - parity_sign::<T>(q.m) * half * cosh_over_cosh_sq(T::zero(), half, x)?),
        (SumKind::F, FamilyTag::EvenNeg | FamilyTag::OddNeg) => {
            let (lead, tail) = pole_pair(fam, q.m);
            coth_difference_dx(lead, tail, x)
        }
        (SumKind::H, FamilyTag::EvenPos | FamilyTag::OddPos) => {
            Ok(fr.weight * d_cosh_over_cosh(fr.shifted, fr.top, x)?)
        }
        (SumKind::H, FamilyTag::EvenNeg | FamilyTag::OddNeg) => {
            Ok(fr.weight * d_sinh_over_sinh(fr.shifted, fr.top, x)?)
        }
    }
}

/// The `m = 0` kind-F identities written with tanh and coth.
pub fn reduced_identity_rhs<T: Real>(family: &SectorFamily, x: T) -> Result<T> {
    let n = T::from_count(family.n);
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    match family.tag {
        FamilyTag::EvenPos => Ok(two * n * (n * x).tanh()),
        FamilyTag::EvenNeg => coth_difference(PoleTerm::new(two * n, n, n), PoleTerm::new(two, one, one), x),
        FamilyTag::OddPos => {
            let nh = n + half;
            Ok((two * n + one) * (nh * x).tanh() - (half * x).tanh())
        }
        FamilyTag::OddNeg => {
            let nh = n + half;
            coth_difference(PoleTerm::new(two * n + one, nh, nh), PoleTerm::new(one, half, half), x)
        }
    }
}

/// `2 sum_k cos(m k)` as the exact tabulated integer.
pub fn delta_m(family: &SectorFamily, m: u64) -> Result<i64> {
    let range = family.delta_range();
    if !range.contains(&m) {
        return Err(Error::OrderOutOfRange { m, lo: *range.start(), hi: *range.end() });
    }
    let odd = m % 2 == 1;
    Ok(match family.tag {
        FamilyTag::EvenPos => 0,
        FamilyTag::EvenNeg => {
            if odd {
                0
            } else {
                -2
            }
        }
        FamilyTag::OddPos => {
            if odd {
                1
            } else {
                -1
            }
        }
        FamilyTag::OddNeg => -1,
    })
}

/// One step `(f_m, h_m) -> (f_{m+1}, h_{m+1})` given `cosh x` and `sinh x`.
///
/// Generic over any field so it can run in exact rational arithmetic.
pub fn recurrence_step_with<T>(f: &T, h: &T, dm: i64, dm1: i64, cosh_x: &T, sinh_x: &T) -> (T, T)
where
    T: Clone + Num + FromPrimitive,
{
    let dm = T::from_i64(dm).expect("integer embeds");
    let dm1 = T::from_i64(dm1).expect("integer embeds");
    let f_next = cosh_x.clone() * f.clone() - sinh_x.clone() * h.clone() - sinh_x.clone() * dm.clone();
    let h_next = cosh_x.clone() * h.clone() - sinh_x.clone() * f.clone() + cosh_x.clone() * dm + dm1;
    (f_next, h_next)
}

pub fn recurrence_step<T: Real>(f: T, h: T, dm: i64, dm1: i64, x: T) -> (T, T) {
    recurrence_step_with(&f, &h, dm, dm1, &x.cosh(), &x.sinh())
}

/// `f_m` for every kind-F order reachable from `m = 1`, and `h_m` where the
/// sine identity holds.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRow<T> {
    pub m: u64,
    pub f: T,
    pub h: Option<T>,
}

/// Runs the recurrence upward from closed-form seeds at `m = 1`.
///
/// `seed` supplies `(f_1, h_1)` and `step` one recurrence step; this lets the
/// same walk run in floating point or exact arithmetic.
pub fn walk_recurrence<T, S>(family: &SectorFamily, seed: (T, T), mut step: S) -> Result<Vec<RecurrenceRow<T>>>
where
    T: Clone,
    S: FnMut(&T, &T, i64, i64) -> (T, T),
{
    let top_f = *family.order_range(SumKind::F).end();
    let top_h = *family.order_range(SumKind::H).end();
    let (mut f, mut h) = seed;
    let mut rows = vec![RecurrenceRow { m: 1, f: f.clone(), h: Some(h.clone()) }];
    for m in 1..top_f {
        let dm = delta_m(family, m)?;
        let has_next_h = m < top_h;
        let dm1 = if has_next_h { delta_m(family, m + 1)? } else { 0 };
        let (nf, nh) = step(&f, &h, dm, dm1);
        f = nf;
        h = nh;
        rows.push(RecurrenceRow { m: m + 1, f: f.clone(), h: has_next_h.then(|| h.clone()) });
    }
    Ok(rows)
}

/// Floating-point recurrence walk seeded by the closed forms at `m = 1`.
///
/// Forward iteration amplifies rounding by roughly `e^{|x|}` per step, so
/// the chain stays accurate only while `2 n |x|` is modest.
pub fn recurrence_chain<T: Real>(family: &SectorFamily, x: T) -> Result<Vec<RecurrenceRow<T>>> {
    let f1 = closed_form(&SumQuery::new(SumKind::F, *family, 1, x)?)?;
    let h1 = closed_form(&SumQuery::new(SumKind::H, *family, 1, x)?)?;
    let (ch, sh) = (x.cosh(), x.sinh());
    walk_recurrence(family, (f1, h1), |f, h, dm, dm1| recurrence_step_with(f, h, dm, dm1, &ch, &sh))
}

/// Checks the `m = 1` direct sums against the values obtained by rewriting
/// `cos k` and `sin^2 k` through the denominator and using the `m = 0`
/// identity. Returns the kind-F and kind-H reports.
pub fn base_case_check<T: Real>(family: &SectorFamily, x: T, tolerance: T) -> Result<[VerificationReport<T>; 2]> {
    let f0 = reduced_identity_rhs(family, x)?;
    let count = T::from_count(family.interior_count());
    let two = T::lit(2.0);
    let (ch, sh) = (x.cosh(), x.sinh());
    // cos k = cosh x - 2 D  and  sin^2 k = 2 (cosh x + cos k) D - sinh^2 x
    let f1 = ch * f0 - two * count * sh;
    let delta1 = T::from_int(delta_m(family, 1)?);
    let h1 = two * count * ch + delta1 - sh * f0;

    let qf = SumQuery::new(SumKind::F, *family, 1, x)?;
    let qh = SumQuery::new(SumKind::H, *family, 1, x)?;
    Ok([
        VerificationReport::new(qf.descriptor(), direct_sum(&qf)?, f1, tolerance),
        VerificationReport::new(qh.descriptor(), direct_sum(&qh)?, h1, tolerance),
    ])
}

/// Direct sum vs closed form for one query.
pub fn verify<T: Real>(q: &SumQuery<T>, tolerance: T) -> Result<VerificationReport<T>> {
    Ok(VerificationReport::new(q.descriptor(), direct_sum(q)?, closed_form(q)?, tolerance))
}

/// Every valid query for the given families, kinds, `n = 1..=n_max` and `x`
/// grid, in a fixed order.
pub fn identity_queries<T: Real>(
    families: &[FamilyTag],
    kinds: &[SumKind],
    n_max: u64,
    xs: &[T],
) -> Vec<SumQuery<T>> {
    let mut out = Vec::new();
    for &tag in families {
        for n in 1..=n_max {
            let family = SectorFamily { tag, n };
            for &kind in kinds {
                for m in family.order_range(kind) {
                    for &x in xs {
                        out.push(SumQuery { kind, family, m, x });
                    }
                }
            }
        }
    }
    out
}

/// Polynomial factorizations over the roots of unity, in log form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LogFactorization {
    /// `ln(g^{2n} + 1)`
    EvenPlus,
    /// `ln((g^{2n} - 1)/(g^2 - 1))`
    EvenMinus,
    /// `ln((g^{2n+1} + 1)/(g + 1))`
    OddPlus,
    /// `ln((g^{2n+1} - 1)/(g - 1))`
    OddMinus,
}

impl LogFactorization {
    pub const ALL: [LogFactorization; 4] = [Self::EvenPlus, Self::EvenMinus, Self::OddPlus, Self::OddMinus];

    /// The family whose momenta index the product.
    pub fn family_tag(self) -> FamilyTag {
        match self {
            Self::EvenPlus => FamilyTag::EvenPos,
            Self::EvenMinus => FamilyTag::EvenNeg,
            Self::OddPlus => FamilyTag::OddPos,
            Self::OddMinus => FamilyTag::OddNeg,
        }
    }
}

/// `ln(e^a + 1)`.
fn ln_exp_plus_one<T: Real>(a: T) -> T {
    if a > T::zero() {
        a + (-a).exp().ln_1p()
    } else {
        a.exp().ln_1p()
    }
}

/// `ln((e^a - 1)/(e^b - 1))` for `a`, `b` of equal sign.
fn ln_expm1_ratio<T: Real>(a: T, b: T) -> T {
    if a > T::zero() {
        (a - b) + (-(-a).exp_m1()).ln() - (-(-b).exp_m1()).ln()
    } else {
        (a.exp_m1() / b.exp_m1()).ln()
    }
}

/// `ln(g^2 - 2 g cos k + 1)` without cancellation for `g > 0`.
fn ln_quadratic_factor<T: Real>(k: Momentum, g: T, ln_g: T) -> T {
    let s = k.half_sin::<T>();
    let four = T::lit(4.0);
    if g > T::one() {
        let r = T::one() - g.recip();
        let two = T::lit(2.0);
        two * ln_g + (r * r + four * s * s / g).ln()
    } else {
        let d = g - T::one();
        (d * d + four * g * s * s).ln()
    }
}

/// LHS - RHS of the log-factorization identity.
pub fn factorization_residual<T: Real>(which: LogFactorization, n: u64, g: T) -> Result<T> {
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    if !(g > T::zero()) || !g.is_finite() {
        return Err(Error::Domain(format!("log factorization needs g > 0, got {g}")));
    }
    let family = SectorFamily::new(which.family_tag(), n)?;
    let l = g.ln();
    let nn = T::from_count(n);
    let two = T::lit(2.0);
    let odd = two * nn + T::one();
    let lhs = match which {
        LogFactorization::EvenPlus => ln_exp_plus_one(two * nn * l),
        LogFactorization::EvenMinus => {
            if l == T::zero() {
                nn.ln()
            } else {
                ln_expm1_ratio(two * nn * l, two * l)
            }
        }
        LogFactorization::OddPlus => ln_exp_plus_one(odd * l) - g.ln_1p(),
        LogFactorization::OddMinus => {
            if l == T::zero() {
                odd.ln()
            } else {
                ln_expm1_ratio(odd * l, l)
            }
        }
    };
    let rhs = pairwise_sum(family.interior().map(|k| ln_quadratic_factor(k, g, l)));
    Ok(lhs - rhs)
}
