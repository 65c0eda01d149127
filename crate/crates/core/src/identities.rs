//! The coefficient rotation symmetry: the two reversal identities of
//! D_{q^2-1} and D_{(q^2-1)/2}, their termwise binomial congruences, and
//! the coefficient-grid rendering whose 180-degree rotation realizes the
//! identity visually.
//!
//! All identity checks run on exact unreduced polynomials of degree up to
//! q^2 + 1, not modulo x^q - x: the identities hold in F_q[x], which is
//! strictly stronger than functional equality.

use thiserror::Error;

use crate::dickson::{dickson_closed, DicksonId};
use crate::gf::{Felt, FieldCtx};
use crate::numtheory::binom_exact;
use crate::polyring::{reverse_scale, Poly};

use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("this identity requires odd q")]
    EvenQ,
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("alpha must be a nonzero square")]
    NotSquare,
    #[error("bad exponent range: hi = {hi} < lo = {lo}")]
    BadRange { hi: u64, lo: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Descending,
    Ascending,
}

/// Coefficients of one polynomial packed row-major into a fixed number of
/// columns, in the printed-table layout. `lead_empty` blank cells may precede
/// the first value (the constant-term slot that some tables leave out).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffGrid {
    pub cols: usize,
    pub lead_empty: usize,
    pub cells: Vec<Felt>,
    pub source: String,
}

impl CoeffGrid {
    /// Rows as rendered, with None for blank offset cells; the last row may
    /// be ragged.
    pub fn rows(&self) -> Vec<Vec<Option<Felt>>> {
        let mut flat: Vec<Option<Felt>> = vec![None; self.lead_empty];
        flat.extend(self.cells.iter().map(|&c| Some(c)));
        flat.chunks(self.cols).map(|ch| ch.to_vec()).collect()
    }

    /// Value cells only, row-major.
    pub fn flat(&self) -> &[Felt] {
        &self.cells
    }
}

/// Extracts the coefficients of x^e for e of the given parity in [lo, hi],
/// ordered per `direction`, packed row-major into `cols` columns.
#[allow(clippy::too_many_arguments)]
pub fn grid_from_poly(
    f: &Poly,
    parity: Parity,
    hi: u64,
    lo: u64,
    cols: usize,
    direction: Direction,
    lead_empty: usize,
    source: &str,
) -> Result<CoeffGrid, IdentityError> {
    if hi < lo {
        return Err(IdentityError::BadRange { hi, lo });
    }
    assert!(cols >= 1);
    let want = |e: u64| match parity {
        Parity::Even => e.is_multiple_of(2),
        Parity::Odd => e % 2 == 1,
    };
    let mut exps: Vec<u64> = (lo..=hi).filter(|&e| want(e)).collect();
    if direction == Direction::Descending {
        exps.reverse();
    }
    let cells = exps.iter().map(|&e| f.coeff(e as usize)).collect();
    Ok(CoeffGrid {
        cols,
        lead_empty,
        cells,
        source: source.to_string(),
    })
}

/// Reverses the flattened cell sequence; rotating the printed table by 180
/// degrees.
pub fn rotate180(g: &CoeffGrid) -> CoeffGrid {
    let mut cells = g.cells.clone();
    cells.reverse();
    CoeffGrid {
        cols: g.cols,
        lead_empty: 0,
        cells,
        source: format!("rotate180({})", g.source),
    }
}

/// The grid pair realizing the full identity visually: the even-exponent
/// table of D_{q^2-1}(x, alpha) over exponents q^2-1 down to 2 in q-1
/// columns, against the (-4 alpha)^{-1}-scaled table at the mapped
/// parameter (16 alpha)^{-1}. The first rotated by 180 degrees equals the
/// second.
pub fn full_identity_grids(
    ctx: &FieldCtx,
    alpha: Felt,
) -> Result<(CoeffGrid, CoeffGrid), IdentityError> {
    if ctx.q().is_multiple_of(2) {
        return Err(IdentityError::EvenQ);
    }
    if alpha.is_zero() {
        return Err(IdentityError::ZeroAlpha);
    }
    let q = ctx.q();
    let n = q * q - 1;
    let cols = (q - 1) as usize;
    let d = dickson_closed(DicksonId::new(n, alpha), ctx).expect("desk scale");
    let g_a = grid_from_poly(
        &d,
        Parity::Even,
        n,
        2,
        cols,
        Direction::Descending,
        0,
        &format!("D_{n}(x,{})", ctx.render(alpha)),
    )?;
    let alpha2 = ctx.inv(ctx.mul(ctx.from_int(16), alpha)).expect("odd q");
    let scalar = ctx.inv(ctx.mul(ctx.from_int(-4), alpha)).expect("odd q");
    let d2 = dickson_closed(DicksonId::new(n, alpha2), ctx)
        .expect("desk scale")
        .scale(scalar, ctx);
    let g_b = grid_from_poly(
        &d2,
        Parity::Even,
        n,
        2,
        cols,
        Direction::Descending,
        0,
        &format!("{}*D_{n}(x,{})", ctx.render(scalar), ctx.render(alpha2)),
    )?;
    Ok((g_a, g_b))
}

/// The grid pair of the half identity: even exponents of D_{(q^2-1)/2}
/// against odd exponents of 2 D_{(q^2+1)/2} at the mapped parameter, in
/// (q-1)/2 columns.
pub fn half_identity_grids(
    ctx: &FieldCtx,
    alpha: Felt,
) -> Result<(CoeffGrid, CoeffGrid), IdentityError> {
    if ctx.q().is_multiple_of(2) {
        return Err(IdentityError::EvenQ);
    }
    if alpha.is_zero() || !ctx.is_square(alpha).unwrap() {
        return Err(IdentityError::NotSquare);
    }
    let q = ctx.q();
    let n = (q * q - 1) / 2;
    let cols = ((q - 1) / 2) as usize;
    let d = dickson_closed(DicksonId::new(n, alpha), ctx).expect("desk scale");
    let g_a = grid_from_poly(
        &d,
        Parity::Even,
        n,
        2,
        cols,
        Direction::Descending,
        0,
        &format!("D_{n}(x,{})", ctx.render(alpha)),
    )?;
    let alpha2 = ctx.inv(ctx.mul(ctx.from_int(16), alpha)).expect("odd q");
    let d2 = dickson_closed(DicksonId::new(n + 1, alpha2), ctx)
        .expect("desk scale")
        .scale(ctx.from_int(2), ctx);
    let g_b = grid_from_poly(
        &d2,
        Parity::Odd,
        n - 1,
        1,
        cols,
        Direction::Descending,
        0,
        &format!("2*D_{}(x,{})", n + 1, ctx.render(alpha2)),
    )?;
    Ok((g_a, g_b))
}

/// The full reversal identity:
/// x^{q^2+1} (D_{q^2-1}(1/x, alpha) - 2)
///   = (-4 alpha)^{-1} (D_{q^2-1}(x, (16 alpha)^{-1}) - 2)
/// as exact polynomials over F_q.
pub fn verify_full_identity(ctx: &FieldCtx, alpha: Felt) -> Result<bool, IdentityError> {
    if ctx.q().is_multiple_of(2) {
        return Err(IdentityError::EvenQ);
    }
    if alpha.is_zero() {
        return Err(IdentityError::ZeroAlpha);
    }
    let q = ctx.q();
    let n = q * q - 1;
    let two = Poly::constant(ctx.from_int(2));

    let d = dickson_closed(DicksonId::new(n, alpha), ctx).expect("desk-scale degree");
    let lhs = reverse_scale(&d.sub(&two, ctx), q * q + 1).expect("m > deg");

    let alpha16_inv = ctx.inv(ctx.mul(ctx.from_int(16), alpha)).expect("odd q");
    let d2 = dickson_closed(DicksonId::new(n, alpha16_inv), ctx).expect("desk-scale degree");
    let scalar = ctx.inv(ctx.mul(ctx.from_int(-4), alpha)).expect("odd q");
    let rhs = d2.sub(&two, ctx).scale(scalar, ctx);

    Ok(lhs == rhs)
}

/// The half-degree reversal identity (square alpha only):
/// x^{(q^2+1)/2} D_{(q^2-1)/2}(1/x, alpha) = 2 D_{(q^2+1)/2}(x, (16 alpha)^{-1}).
pub fn verify_half_identity(ctx: &FieldCtx, alpha: Felt) -> Result<bool, IdentityError> {
    if ctx.q().is_multiple_of(2) {
        return Err(IdentityError::EvenQ);
    }
    if alpha.is_zero() || !ctx.is_square(alpha).unwrap() {
        return Err(IdentityError::NotSquare);
    }
    let q = ctx.q();
    let d = dickson_closed(DicksonId::new((q * q - 1) / 2, alpha), ctx).expect("desk scale");
    let lhs = reverse_scale(&d, (q * q).div_ceil(2)).expect("m > deg");

    let alpha16_inv = ctx.inv(ctx.mul(ctx.from_int(16), alpha)).expect("odd q");
    let d2 =
        dickson_closed(DicksonId::new((q * q).div_ceil(2), alpha16_inv), ctx).expect("desk scale");
    let rhs = d2.scale(ctx.from_int(2), ctx);

    Ok(lhs == rhs)
}

/// Termwise congruences behind the two identities.
///
/// For 1 <= i <= (q^2-1)/2:
///   (q^2-1)/((q^2-1)/2 + i) C((q^2-1)/2 + i, (q^2-1)/2 - i)
///     = (q^2-1)/(4(q^2-i)) C(q^2-i, i-1) (1/16)^{i-1}   mod p,
/// and for 0 <= i <= (q^2-1)/4:
///   ((q^2-1)/2)/((q^2-1)/4 + i) C((q^2-1)/4 + i, (q^2-1)/4 - i)
///     = (q^2+1)/((q^2+1)/2 - i) C((q^2+1)/2 - i, i) (1/16)^i   mod p.
///
/// Each side is the formal fraction (n/(n-j)) C(n-j, j) at some index, so
/// it is evaluated through the integer-valued closed form
/// C(n-j,j) + C(n-j-1,j-1); the 1/4 and 1/16 factors are units mod p.
pub fn verify_lemma_terms(ctx: &FieldCtx) -> Result<bool, IdentityError> {
    let q = ctx.q();
    if q.is_multiple_of(2) {
        return Err(IdentityError::EvenQ);
    }
    let p = ctx.p();
    let term_mod_p = |n: u64, j: u64| -> u64 {
        // (n/(n-j)) C(n-j, j) via the integer identity, reduced mod p
        let exact = binom_exact(n - j, j).unwrap()
            + if j >= 1 {
                binom_exact(n - j - 1, j - 1).unwrap()
            } else {
                BigUint::zero()
            };
        (exact % BigUint::from(p)).try_into().unwrap()
    };
    let inv = |x: i64| -> u64 { ctx.inv(ctx.from_int(x)).expect("unit").0 as u64 };
    let inv16 = inv(16);
    let inv4 = inv(4);

    // first congruence: LHS is the Dickson coefficient of D_{q^2-1} at
    // index (q^2-1)/2 - i; RHS is (1/4) times its coefficient at i-1 times
    // (1/16)^{i-1}
    let n1 = q * q - 1;
    for i in 1..=(q * q - 1) / 2 {
        let lhs = term_mod_p(n1, (q * q - 1) / 2 - i);
        let rhs = term_mod_p(n1, i - 1) * inv4 % p * crate::numtheory::pow_mod(inv16, i - 1, p) % p;
        if lhs != rhs {
            return Ok(false);
        }
    }
    // second congruence: LHS from D_{(q^2-1)/2} at index (q^2-1)/4 - i,
    // RHS is 2 times the coefficient of D_{(q^2+1)/2} at i times (1/16)^i
    let n2 = (q * q - 1) / 2;
    let n3 = (q * q).div_ceil(2);
    for i in 0..=(q * q - 1) / 4 {
        let lhs = term_mod_p(n2, (q * q - 1) / 4 - i);
        let rhs = 2 * term_mod_p(n3, i) % p * crate::numtheory::pow_mod(inv16, i, p) % p;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
