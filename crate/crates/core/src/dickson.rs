//! Dickson polynomials of the first kind, built by three independent
//! routes: the closed-form coefficient formula, the order-2 recurrence
//! inside the quotient ring, and the stride-2 recurrence. The routes
//! cross-check one another in tests; the recurrence is the default
//! constructor at O(n*q).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf::{ExtCtx, ExtElt, Felt, FieldCtx};
use crate::polyring::{rp_compose, rp_mul_x, rp_scale, rp_sub, rp_values, Poly, RPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DicksonError {
    #[error("degree {0} exceeds the desk bound 2^20")]
    DegreeTooLarge(u64),
    #[error("this check requires alpha != 0")]
    ZeroAlpha,
}

/// One member of the family: degree index n and parameter alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DicksonId {
    pub n: u64,
    pub alpha: Felt,
}

impl DicksonId {
    pub fn new(n: u64, alpha: Felt) -> Self {
        DicksonId { n, alpha }
    }
}

pub const CLOSED_FORM_BOUND: u64 = 1 << 20;

/// The unreduced polynomial from the closed form: the coefficient of
/// x^{n-2i} is (n/(n-i)) C(n-i,i) (-alpha)^i, with the formal fraction
/// evaluated as the exact integer C(n-i,i) + C(n-i-1,i-1).
pub fn dickson_closed(id: DicksonId, ctx: &FieldCtx) -> Result<Poly, DicksonError> {
    let n = id.n;
    if n > CLOSED_FORM_BOUND {
        return Err(DicksonError::DegreeTooLarge(n));
    }
    if n == 0 {
        return Ok(Poly::constant(ctx.from_int(2)));
    }
    let p = BigUint::from(ctx.p());
    let mut coeffs = vec![Felt::ZERO; n as usize + 1];
    let neg_alpha = ctx.neg(id.alpha);
    // running binomials: b = C(n-i, i), a = C(n-i-1, i-1)
    let mut b = BigUint::one();
    let mut a = BigUint::zero();
    let mut i: u64 = 0;
    loop {
        let int_coeff = &b + &a;
        let residue: u64 = (int_coeff % &p).try_into().expect("residue fits");
        let c = ctx.mul(ctx.from_int(residue as i64), ctx.pow(neg_alpha, i));
        coeffs[(n - 2 * i) as usize] = c;
        if 2 * (i + 1) > n {
            break;
        }
        // advance both binomials from i to i+1 (divisions are exact)
        let num = BigUint::from(n - 2 * i) * BigUint::from(n - 2 * i - 1);
        b = b * &num / (BigUint::from(i + 1) * BigUint::from(n - i));
        a = if i == 0 {
            BigUint::one() // C(n-2, 0)
        } else {
            a * num / (BigUint::from(i) * BigUint::from(n - i - 1))
        };
        i += 1;
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// D_n(x, alpha) mod (x^q - x) via the order-2 recurrence
/// D_n = x D_{n-1} - alpha D_{n-2}, from (D_0, D_1) = (2, x).
pub fn dickson_reduced(id: DicksonId, ctx: &FieldCtx) -> RPoly {
    let two = RPoly::constant(ctx.from_int(2), ctx);
    if id.n == 0 {
        return two;
    }
    let x = RPoly::x(ctx);
    if id.n == 1 {
        return x;
    }
    let mut prev = two;
    let mut cur = x;
    for _ in 2..=id.n {
        let next = rp_sub(&rp_mul_x(&cur, ctx), &rp_scale(&prev, id.alpha, ctx), ctx)
            .expect("same context");
        prev = cur;
        cur = next;
    }
    cur
}

/// Same value as `dickson_reduced`, via the stride-2 recurrence
/// D_n = (x^2 - 2 alpha) D_{n-2} - alpha^2 D_{n-4}, stepping by parity.
pub fn dickson_stride2(id: DicksonId, ctx: &FieldCtx) -> RPoly {
    let seeds = [
        RPoly::constant(ctx.from_int(2), ctx),
        RPoly::x(ctx),
        dickson_reduced(DicksonId::new(2, id.alpha), ctx),
        dickson_reduced(DicksonId::new(3, id.alpha), ctx),
    ];
    if id.n < 4 {
        return seeds[id.n as usize].clone();
    }
    let alpha2 = ctx.mul(id.alpha, id.alpha);
    let two_alpha = ctx.mul(ctx.from_int(2), id.alpha);
    let step = |h: &RPoly, hprev: &RPoly| -> RPoly {
        // (x^2 - 2 alpha) h - alpha^2 hprev
        let xh = rp_mul_x(&rp_mul_x(h, ctx), ctx);
        let t = rp_sub(&xh, &rp_scale(h, two_alpha, ctx), ctx).expect("same context");
        rp_sub(&t, &rp_scale(hprev, alpha2, ctx), ctx).expect("same context")
    };
    let parity = (id.n % 2) as usize;
    let mut prev = seeds[parity].clone();
    let mut cur = seeds[parity + 2].clone();
    let mut n = parity as u64 + 2;
    while n < id.n {
        let next = step(&cur, &prev);
        prev = cur;
        cur = next;
        n += 2;
    }
    cur
}

/// Checks the functional equation D_n(u + alpha/u, alpha) = u^n + (alpha/u)^n
/// for every u in F_{q^2}^x, lifting the reduced coefficients into the
/// extension.
pub fn check_functional_eq(id: DicksonId, ext: &ExtCtx) -> Result<bool, DicksonError> {
    if id.alpha.is_zero() {
        return Err(DicksonError::ZeroAlpha);
    }
    let ctx = ext.base;
    // use the exact closed form when the degree permits; above the desk
    // bound the functional equation is outside this checker's scope
    let poly = dickson_closed(id, ctx)?;
    let ae = ext.embed(id.alpha);
    for u in ext.elements() {
        if u.is_zero() {
            continue;
        }
        let au_inv = ext.mul(ae, ext.inv(u).map_err(|_| DicksonError::ZeroAlpha)?);
        let arg = ext.add(u, au_inv);
        // Horner evaluation of the lifted polynomial
        let mut acc = ExtElt::ZERO;
        for &c in poly.coeffs.iter().rev() {
            acc = ext.add(ext.mul(acc, arg), ext.embed(c));
        }
        let rhs = ext.add(ext.pow(u, id.n), ext.pow(au_inv, id.n));
        if acc != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks D_m(D_n(x, alpha), alpha^n) = D_{mn}(x, alpha) in the quotient.
pub fn check_compose_identity(m: u64, n: u64, alpha: Felt, ctx: &FieldCtx) -> bool {
    let inner = dickson_reduced(DicksonId::new(n, alpha), ctx);
    let outer = dickson_reduced(DicksonId::new(m, ctx.pow(alpha, n)), ctx);
    let lhs = rp_compose(&outer, &inner, ctx).expect("same context");
    lhs == dickson_reduced(DicksonId::new(m * n, alpha), ctx)
}

/// D_n(x, alpha) permutes F_q iff gcd(n, q^2 - 1) = 1; computed from the
/// value table and cross-checked against the gcd criterion.
pub fn is_permutation(id: DicksonId, ctx: &FieldCtx) -> Result<bool, DicksonError> {
    if id.alpha.is_zero() {
        return Err(DicksonError::ZeroAlpha);
    }
    let rp = dickson_reduced(id, ctx);
    let vals = rp_values(&rp, ctx);
    let mut seen = vec![false; ctx.q() as usize];
    let mut bijective = true;
    for v in vals {
        if seen[v.0 as usize] {
            bijective = false;
            break;
        }
        seen[v.0 as usize] = true;
    }
    let q = ctx.q();
    let coprime = crate::numtheory::gcd(id.n % (q * q - 1), q * q - 1) == 1;
    assert_eq!(
        bijective, coprime,
        "permutation criterion must match gcd(n, q^2-1) = 1"
    );
    Ok(bijective)
}
