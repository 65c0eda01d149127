//! Exact period of the sequence [D_n(x, alpha) mod (x^q - x)]_n: the
//! theoretical formula, the empirical recurrence-state computation, the
//! anchor and symmetry corollaries, and the column-sum identity for the
//! double-sum coefficient layout.

use thiserror::Error;

use crate::dickson::{dickson_reduced, DicksonId};
use crate::gf::{Felt, FieldCtx};
use crate::numtheory::{binom_exact, binom_mod_p};
use crate::polyring::{rp_mul_x, rp_scale, rp_sub, RPoly};

use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodError {
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("no period within q^2 - 1 steps; the recurrence state never returned")]
    NoPeriodWithinBound,
    #[error("this check requires odd q")]
    EvenQ,
}

/// One row of a period scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub q: u64,
    pub alpha: Felt,
    pub square: bool,
    pub theoretical: u64,
    pub empirical: u64,
    pub agrees: bool,
}

/// (q^2 - 1) / 2 when q is odd and alpha is a square, else q^2 - 1.
pub fn theoretical_period(ctx: &FieldCtx, alpha: Felt) -> Result<u64, PeriodError> {
    if alpha.is_zero() {
        return Err(PeriodError::ZeroAlpha);
    }
    let q = ctx.q();
    let square = ctx.is_square(alpha).map_err(|_| PeriodError::ZeroAlpha)?;
    Ok(if q % 2 == 1 && square {
        (q * q - 1) / 2
    } else {
        q * q - 1
    })
}

/// Smallest t >= 1 with (D_t, D_{t+1}) = (2, x) in the quotient. The
/// order-2 recurrence is invertible for alpha != 0, so the sequence is
/// purely periodic and state return pins the period exactly.
pub fn empirical_period(ctx: &FieldCtx, alpha: Felt) -> Result<u64, PeriodError> {
    if alpha.is_zero() {
        return Err(PeriodError::ZeroAlpha);
    }
    let two = RPoly::constant(ctx.from_int(2), ctx);
    let x = RPoly::x(ctx);
    let q = ctx.q();
    let mut prev = two.clone();
    let mut cur = x.clone();
    for t in 1..=q * q - 1 {
        let next =
            rp_sub(&rp_mul_x(&cur, ctx), &rp_scale(&prev, alpha, ctx), ctx).expect("same context");
        prev = cur;
        cur = next;
        // state now holds (D_t, D_{t+1})
        if prev == two && cur == x {
            return Ok(t);
        }
    }
    Err(PeriodError::NoPeriodWithinBound)
}

/// Scan every prime power q <= q_max and every unit alpha, in canonical
/// order. Each report carries both period computations.
pub fn scan_periods(q_max: u64) -> Vec<PeriodReport> {
    let mut out = Vec::new();
    for q in 2..=q_max {
        let Some((p, s)) = crate::gf::as_prime_power(q) else {
            continue;
        };
        let ctx = crate::gf::make_field(p, s).expect("valid prime power");
        for alpha in ctx.units() {
            out.push(report_for(&ctx, alpha));
        }
    }
    out
}

pub fn report_for(ctx: &FieldCtx, alpha: Felt) -> PeriodReport {
    let theoretical = theoretical_period(ctx, alpha).expect("alpha != 0");
    let empirical = empirical_period(ctx, alpha).expect("alpha != 0");
    PeriodReport {
        q: ctx.q(),
        alpha,
        square: ctx.is_square(alpha).expect("alpha != 0"),
        theoretical,
        empirical,
        agrees: theoretical == empirical,
    }
}

/// Verifies the anchor congruences: D_{q^2-1} = 2 and D_{q^2} = x always,
/// and for odd q with square alpha also D_{(q^2-1)/2} = 2 and
/// D_{(q^2+1)/2} = x.
pub fn check_anchor_props(ctx: &FieldCtx, alpha: Felt) -> Result<bool, PeriodError> {
    if alpha.is_zero() {
        return Err(PeriodError::ZeroAlpha);
    }
    let q = ctx.q();
    let two = RPoly::constant(ctx.from_int(2), ctx);
    let x = RPoly::x(ctx);
    let mut ok = dickson_reduced(DicksonId::new(q * q - 1, alpha), ctx) == two
        && dickson_reduced(DicksonId::new(q * q, alpha), ctx) == x;
    if q % 2 == 1 && ctx.is_square(alpha).unwrap() {
        ok = ok
            && dickson_reduced(DicksonId::new((q * q - 1) / 2, alpha), ctx) == two
            && dickson_reduced(DicksonId::new((q * q).div_ceil(2), alpha), ctx) == x;
    }
    Ok(ok)
}

/// Verifies the reflection D_{q^2-1-i} = alpha^{-i} D_i for 0 <= i <= q^2-1,
/// and the (q^2-1)/2 variant for odd q with square alpha.
pub fn check_symmetry(ctx: &FieldCtx, alpha: Felt) -> Result<bool, PeriodError> {
    if alpha.is_zero() {
        return Err(PeriodError::ZeroAlpha);
    }
    let q = ctx.q();
    let n_top = (q * q - 1) as usize;
    // forward list D_0 .. D_{q^2-1}
    let mut seq = Vec::with_capacity(n_top + 1);
    seq.push(RPoly::constant(ctx.from_int(2), ctx));
    seq.push(RPoly::x(ctx));
    for n in 2..=n_top {
        let next = rp_sub(
            &rp_mul_x(&seq[n - 1], ctx),
            &rp_scale(&seq[n - 2], alpha, ctx),
            ctx,
        )
        .expect("same context");
        seq.push(next);
    }
    let alpha_inv = ctx.inv(alpha).expect("alpha != 0");
    for i in 0..=n_top {
        let scaled = rp_scale(&seq[i], ctx.pow(alpha_inv, i as u64), ctx);
        if seq[n_top - i] != scaled {
            return Ok(false);
        }
    }
    if q % 2 == 1 && ctx.is_square(alpha).unwrap() {
        let half = n_top / 2;
        for i in 0..=half {
            let scaled = rp_scale(&seq[i], ctx.pow(alpha_inv, i as u64), ctx);
            if seq[half - i] != scaled {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The double-sum coefficient layouts of D_{q^2-1} and D_{(q^2-1)/2}:
/// a_{j,k} over 0 <= j <= (q-1)/2, 0 <= k <= q-2 and b_{j,k} over
/// 0 <= j <= (q-1)/2, 0 <= k <= (q-3)/2. Every a-column sums to 0 mod p;
/// every b-column sums to 0 mod p after weighting row j by chi^j with
/// chi = (-1)^{(q-1)/2} (the sign that the (-alpha)^{j(q-1)/2} factor
/// contributes for square alpha; it is +1 exactly when q = 1 mod 4).
///
/// Each cell is computed twice: as an exact big integer via the
/// C(n-i,i) + C(n-i-1,i-1) identity, and mod p via the generalized Lucas
/// binomials; the two must agree.
pub fn check_column_sums(ctx: &FieldCtx) -> Result<bool, PeriodError> {
    let q = ctx.q();
    if q.is_multiple_of(2) {
        return Err(PeriodError::EvenQ);
    }
    let p = ctx.p();
    let s = ctx.pp.s;
    let cell = |n: u64, i: u64| -> u64 {
        // (n / (n - i)) C(n-i, i) as exact integer, then mod p
        let exact = binom_exact(n - i, i).unwrap()
            + if i >= 1 {
                binom_exact(n - i - 1, i - 1).unwrap()
            } else {
                BigUint::zero()
            };
        let exact_mod: u64 = (exact % BigUint::from(p)).try_into().unwrap();
        let lucas_mod = (binom_mod_p(n - i, i, p, s)
            + if i >= 1 {
                binom_mod_p(n - i - 1, i - 1, p, s)
            } else {
                0
            })
            % p;
        assert_eq!(
            exact_mod, lucas_mod,
            "dual-route cell disagreement at n={n} i={i}"
        );
        exact_mod
    };
    // a-table: n = q^2 - 1, i = j(q-1) + k
    let n_a = q * q - 1;
    for k in 0..=q - 2 {
        let mut sum = 0u64;
        for j in 0..=(q - 1) / 2 {
            sum = (sum + cell(n_a, j * (q - 1) + k)) % p;
        }
        if sum != 0 {
            return Ok(false);
        }
    }
    // b-table: n = (q^2 - 1)/2, i = j(q-1)/2 + k, rows weighted by chi^j
    let n_b = (q * q - 1) / 2;
    let chi_negative = (q - 1) / 2 % 2 == 1; // chi = -1 iff q = 3 mod 4
    for k in 0..=(q - 3) / 2 {
        let mut sum = 0u64;
        for j in 0..=(q - 1) / 2 {
            let c = cell(n_b, j * (q - 1) / 2 + k);
            let signed = if chi_negative && j % 2 == 1 {
                (p - c % p) % p
            } else {
                c % p
            };
            sum = (sum + signed) % p;
        }
        if sum != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn theoretical_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(theoretical_period(&f5, Felt(4)).unwrap(), 12);
        assert_eq!(theoretical_period(&f5, Felt(2)).unwrap(), 24);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(theoretical_period(&f4, Felt(2)).unwrap(), 15);
        assert_eq!(
            theoretical_period(&f5, Felt::ZERO),
            Err(PeriodError::ZeroAlpha)
        );
    }

    #[test]
    fn empirical_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(empirical_period(&f2, Felt::ONE).unwrap(), 3);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(empirical_period(&f3, Felt(2)).unwrap(), 8);
        assert_eq!(empirical_period(&f3, Felt::ONE).unwrap(), 4);
    }

    #[test]
    fn periods_divide_group_bounds() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let ctx = make_field(p, s).unwrap();
            let q = ctx.q();
            for alpha in ctx.units() {
                let e = empirical_period(&ctx, alpha).unwrap();
                assert_eq!((q * q - 1) % e, 0);
                if q % 2 == 1 && ctx.is_square(alpha).unwrap() {
                    assert_eq!((q * q - 1) / 2 % e, 0);
                }
            }
        }
    }

    #[test]
    fn anchors_hold() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
            let ctx = make_field(p, s).unwrap();
            for alpha in ctx.units() {
                assert!(check_anchor_props(&ctx, alpha).unwrap());
            }
        }
        // q=2: the index-3 table entry is 0, which equals 2 in F_2
        let f2 = make_field(2, 1).unwrap();
        let d3 = dickson_reduced(DicksonId::new(3, Felt::ONE), &f2);
        assert!(d3.is_zero());
    }

    #[test]
    fn symmetry_holds() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let ctx = make_field(p, s).unwrap();
            for alpha in ctx.units() {
                assert!(check_symmetry(&ctx, alpha).unwrap());
            }
        }
    }

    #[test]
    fn symmetry_spot_q3() {
        // q=3, alpha=2, i=2: D_6 = alpha^{-2} D_2 = 1 * (x^2+2), matching the
        // sixth entry of the alpha=2 sequence table
        let f3 = make_field(3, 1).unwrap();
        let a = Felt(2);
        let d6 = dickson_reduced(DicksonId::new(6, a), &f3);
        let d2 = dickson_reduced(DicksonId::new(2, a), &f3);
        let ainv2 = f3.pow(f3.inv(a).unwrap(), 2);
        assert_eq!(d6, rp_scale(&d2, ainv2, &f3));
        assert_eq!(crate::polyring::poly_text(d6.coeffs(), &f3), "x^2 + 2");
    }

    #[test]
    fn full_scan_small() {
        for r in scan_periods(9) {
            assert!(r.agrees, "q={} alpha={:?}", r.q, r.alpha);
        }
    }

    #[test]
    fn column_sums_vanish() {
        for (p, s) in [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2)] {
            let ctx = make_field(p, s).unwrap();
            assert!(check_column_sums(&ctx).unwrap(), "q = {}", ctx.q());
        }
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(check_column_sums(&f4), Err(PeriodError::EvenQ));
    }
}
