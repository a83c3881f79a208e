//! Exact rational evaluation of the closed forms.
//!
//! Every frequency in the closed forms is a multiple of 1/2, so with
//! `t = e^{x/2}` each hyperbolic function becomes a Laurent polynomial in `t`
//! and rational `t` gives rational values. This lets the recurrence be
//! checked with no rounding at all.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::identities::{recurrence_step_with, walk_recurrence, RecurrenceRow};
use crate::sector::{FamilyTag, SectorFamily, SumKind};
use crate::{Error, Result};

#[derive(Clone, Copy)]
enum Hyp {
    Sinh,
    Cosh,
}

fn power(t: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(t.clone(), e as usize)
    } else {
        num_traits::pow(t.recip(), e.unsigned_abs() as usize)
    }
}

/// `2 sinh(a x)` or `2 cosh(a x)` where `twice_a = 2a`.
fn hyp(kind: Hyp, twice_a: i64, t: &BigRational) -> BigRational {
    let up = power(t, twice_a);
    let down = power(t, -twice_a);
    match kind {
        Hyp::Sinh => up - down,
        Hyp::Cosh => up + down,
    }
}

fn ratio(num: Hyp, twice_a: i64, den: Hyp, twice_b: i64, t: &BigRational) -> BigRational {
    hyp(num, twice_a, t) / hyp(den, twice_b, t)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn check_t(t: &BigRational) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::Domain(format!("t = e^(x/2) must be positive, got {t}")));
    }
    if t.is_one() {
        return Err(Error::Pole("exact forms exclude x = 0"));
    }
    Ok(())
}

/// Closed form at `x = 2 ln t`.
pub fn exact_closed_form(kind: SumKind, family: &SectorFamily, m: u64, t: &BigRational) -> Result<BigRational> {
    family.check_order(kind, m)?;
    check_t(t)?;
    let n = family.n as i64;
    let m = m as i64;
    let (weight, top2, shifted2) = if family.tag.is_even() {
        (2 * n, 2 * n, 2 * (n - m))
    } else {
        (2 * n + 1, 2 * n + 1, 2 * (n - m) + 1)
    };
    let w = int(weight);
    let sign = int(if m % 2 == 0 { 1 } else { -1 });
    Ok(match (kind, family.tag) {
        (SumKind::F, FamilyTag::EvenPos) => w * ratio(Hyp::Sinh, shifted2, Hyp::Cosh, top2, t),
        (SumKind::F, FamilyTag::EvenNeg) => {
            let e2 = if m % 2 == 0 { 2 } else { 0 };
            w * ratio(Hyp::Cosh, shifted2, Hyp::Sinh, top2, t) - int(2) * ratio(Hyp::Cosh, e2, Hyp::Sinh, 2, t)
        }
        (SumKind::F, FamilyTag::OddPos) => {
            w * ratio(Hyp::Sinh, shifted2, Hyp::Cosh, top2, t) - sign * ratio(Hyp::Sinh, 1, Hyp::Cosh, 1, t)
        }
        (SumKind::F, FamilyTag::OddNeg) => {
            w * ratio(Hyp::Cosh, shifted2, Hyp::Sinh, top2, t) - ratio(Hyp::Cosh, 1, Hyp::Sinh, 1, t)
        }
        (SumKind::H, FamilyTag::EvenPos | FamilyTag::OddPos) => w * ratio(Hyp::Cosh, shifted2, Hyp::Cosh, top2, t),
        (SumKind::H, FamilyTag::EvenNeg | FamilyTag::OddNeg) => w * ratio(Hyp::Sinh, shifted2, Hyp::Sinh, top2, t),
    })
}

/// The recurrence walk in exact arithmetic, seeded by the exact closed forms
/// at `m = 1`.
pub fn exact_recurrence_chain(family: &SectorFamily, t: &BigRational) -> Result<Vec<RecurrenceRow<BigRational>>> {
    let f1 = exact_closed_form(SumKind::F, family, 1, t)?;
    let h1 = exact_closed_form(SumKind::H, family, 1, t)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let ch = hyp(Hyp::Cosh, 2, t) * half.clone();
    let sh = hyp(Hyp::Sinh, 2, t) * half;
    walk_recurrence(family, (f1, h1), |f, h, dm, dm1| recurrence_step_with(f, h, dm, dm1, &ch, &sh))
}

/// Rows where the walk disagrees with the exact closed forms: `(m, kind)`.
pub fn exact_recurrence_mismatches(family: &SectorFamily, t: &BigRational) -> Result<Vec<(u64, SumKind)>> {
    let mut bad = Vec::new();
    for row in exact_recurrence_chain(family, t)? {
        if row.f != exact_closed_form(SumKind::F, family, row.m, t)? {
            bad.push((row.m, SumKind::F));
        }
        if let Some(h) = &row.h {
            if *h != exact_closed_form(SumKind::H, family, row.m, t)? {
                bad.push((row.m, SumKind::H));
            }
        }
    }
    Ok(bad)
}

/// Nearest `f64`, or NaN when the value is out of range.
pub fn to_f64(v: &BigRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{closed_form, SumQuery};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn single_mode_values() {
        // n = 1, KA: f_0 = 2 tanh(x) = 2 (g - 1/g)/(g + 1/g)
        let f = SectorFamily::new(FamilyTag::EvenPos, 1).unwrap();
        let t = rat(2, 1);
        let v = exact_closed_form(SumKind::F, &f, 0, &t).unwrap();
        assert_eq!(v, rat(2, 1) * rat(15, 17));
    }

    #[test]
    fn rejects_bad_t() {
        let f = SectorFamily::new(FamilyTag::OddPos, 2).unwrap();
        assert!(matches!(exact_closed_form(SumKind::F, &f, 1, &rat(1, 1)), Err(Error::Pole(_))));
        assert!(matches!(exact_closed_form(SumKind::F, &f, 1, &rat(-1, 2)), Err(Error::Domain(_))));
        assert!(exact_closed_form(SumKind::F, &f, 1, &BigRational::zero()).is_err());
    }

    #[test]
    fn recurrence_holds_exactly() {
        for tag in FamilyTag::ALL {
            for n in 1..=12 {
                let f = SectorFamily::new(tag, n).unwrap();
                for t in [rat(3, 2), rat(2, 7), rat(101, 100)] {
                    assert!(exact_recurrence_mismatches(&f, &t).unwrap().is_empty(), "{f} t={t}");
                }
            }
        }
    }

    #[test]
    fn agrees_with_float_closed_forms() {
        let t = rat(5, 4);
        let x = 2.0 * (1.25f64).ln();
        for tag in FamilyTag::ALL {
            let f = SectorFamily::new(tag, 5).unwrap();
            for kind in SumKind::ALL {
                for m in f.order_range(kind) {
                    let e = to_f64(&exact_closed_form(kind, &f, m, &t).unwrap());
                    let c = closed_form(&SumQuery::new(kind, f, m, x).unwrap()).unwrap();
                    assert!((e - c).abs() <= 1e-14 * c.abs().max(1.0), "{kind} {f} m={m}: {e} vs {c}");
                }
            }
        }
    }
}
