//! Deciding whether a polynomial is congruent to a Dickson polynomial
//! modulo x^q - x, recovering the degree and parameter.
//!
//! Two independent procedures: a brute-force sweep of the recurrence over
//! all parameters (stride-2 with a parity screen for odd q), and a
//! coefficient-guessing method that derives a per-degree profile of the
//! reduced coefficients from binomials mod p, solves for alpha from a
//! nonzero anchor cell, and verifies cell-by-cell. Both return the first
//! witness in the canonical order (alpha ascending by encoding, then n
//! ascending); witnesses may differ between methods but the decisions
//! agree, and every positive answer is re-generated and checked before it
//! is returned.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::dickson::{dickson_reduced, DicksonId};
use crate::gf::{Felt, FieldCtx};
use crate::numtheory::binom_mod_p;
use crate::polyring::{reduce, rp_mul_x, rp_scale, rp_sub, Poly, RPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("the ground-truth table is desk-bounded to q <= 16 (got q = {0})")]
    DeskBoundExceeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecognitionResult {
    /// f = D_n(x, alpha) mod (x^q - x) with alpha a unit.
    Dickson {
        n: u64,
        alpha: Felt,
    },
    /// f = x^n = D_n(x, 0) mod (x^q - x).
    Monomial {
        n: u64,
    },
    NotDickson,
}

impl RecognitionResult {
    pub fn is_dickson(&self) -> bool {
        !matches!(self, RecognitionResult::NotDickson)
    }

    /// Re-generates the reduced polynomial this witness names.
    pub fn regenerate(&self, ctx: &FieldCtx) -> Option<RPoly> {
        match *self {
            RecognitionResult::Dickson { n, alpha } => {
                Some(dickson_reduced(DicksonId::new(n, alpha), ctx))
            }
            RecognitionResult::Monomial { n } => {
                Some(dickson_reduced(DicksonId::new(n, Felt::ZERO), ctx))
            }
            RecognitionResult::NotDickson => None,
        }
    }
}

fn special_cases(g: &RPoly, ctx: &FieldCtx) -> Option<RecognitionResult> {
    let m = g.degree();
    if m >= 1 && g.is_monomial(m) {
        return Some(RecognitionResult::Monomial { n: m as u64 });
    }
    if *g == RPoly::constant(ctx.from_int(2), ctx) {
        return Some(RecognitionResult::Dickson {
            n: 0,
            alpha: Felt::ONE,
        });
    }
    None
}

fn checked(res: RecognitionResult, g: &RPoly, ctx: &FieldCtx) -> RecognitionResult {
    if let Some(regen) = res.regenerate(ctx) {
        assert_eq!(
            &regen, g,
            "recognizer soundness: witness must re-generate the input"
        );
    }
    res
}

/// Brute-force recognizer: for even q the order-1-step recurrence over
/// n = 2..q^2-1 per alpha; for odd q a parity screen and the stride-2
/// recurrence bounded by (q^2-1)/2 for square alpha, q^2-1 otherwise.
pub fn recognize_brute(f: &Poly, ctx: &FieldCtx) -> RecognitionResult {
    let g = reduce(f, ctx);
    if let Some(res) = special_cases(&g, ctx) {
        return checked(res, &g, ctx);
    }
    let q = ctx.q();
    if q.is_multiple_of(2) {
        for alpha in ctx.units() {
            let mut h1 = RPoly::constant(ctx.from_int(2), ctx);
            let mut h2 = RPoly::x(ctx);
            for n in 2..=q * q - 1 {
                let h3 = rp_sub(&rp_mul_x(&h2, ctx), &rp_scale(&h1, alpha, ctx), ctx)
                    .expect("same context");
                if g == h3 {
                    return checked(RecognitionResult::Dickson { n, alpha }, &g, ctx);
                }
                h1 = h2;
                h2 = h3;
            }
        }
        return RecognitionResult::NotDickson;
    }

    // odd q: parity screen
    let m = g.degree();
    let odd_branch = if m % 2 == 1 && g.coeffs().iter().step_by(2).all(|c| c.is_zero()) {
        true
    } else if m.is_multiple_of(2) && g.coeffs().iter().skip(1).step_by(2).all(|c| c.is_zero()) {
        false
    } else {
        return RecognitionResult::NotDickson;
    };

    for alpha in ctx.units() {
        let (mut h1, mut h2, h2_n, mut n) = if odd_branch {
            let d3 = dickson_reduced(DicksonId::new(3, alpha), ctx);
            (RPoly::x(ctx), d3, 3u64, 5u64)
        } else {
            let d2 = dickson_reduced(DicksonId::new(2, alpha), ctx);
            (RPoly::constant(ctx.from_int(2), ctx), d2, 2u64, 4u64)
        };
        if g == h2 {
            return checked(RecognitionResult::Dickson { n: h2_n, alpha }, &g, ctx);
        }
        let ub = if ctx.is_square(alpha).unwrap() {
            (q * q - 1) / 2
        } else {
            q * q - 1
        };
        let two_alpha = ctx.mul(ctx.from_int(2), alpha);
        let alpha2 = ctx.mul(alpha, alpha);
        while n <= ub {
            // h3 = (x^2 - 2 alpha) h2 - alpha^2 h1
            let xxh2 = rp_mul_x(&rp_mul_x(&h2, ctx), ctx);
            let t = rp_sub(&xxh2, &rp_scale(&h2, two_alpha, ctx), ctx).expect("same context");
            let h3 = rp_sub(&t, &rp_scale(&h1, alpha2, ctx), ctx).expect("same context");
            if g == h3 {
                return checked(RecognitionResult::Dickson { n, alpha }, &g, ctx);
            }
            h1 = h2;
            h2 = h3;
            n += 2;
        }
    }
    RecognitionResult::NotDickson
}

/// The coefficient of x^{n-2i} in D_n before the (-alpha)^i factor, mod p:
/// (n/(n-i)) C(n-i, i) = C(n-i, i) + C(n-i-1, i-1), via generalized Lucas.
fn dickson_term_mod_p(n: u64, i: u64, ctx: &FieldCtx) -> u64 {
    let (p, s) = (ctx.p(), ctx.pp.s);
    let b = binom_mod_p(n - i, i, p, s);
    let a = if i >= 1 {
        binom_mod_p(n - i - 1, i - 1, p, s)
    } else {
        0
    };
    (a + b) % p
}

/// Coefficient-guessing recognizer (even q): for each degree n, the profile
/// c_k = sum over j of (n/(n-j q_1 - k)) C(n - j q_1 - k, j q_1 + k) mod p,
/// aligned to the reduced exponents by the rotated index list N, with the
/// anchor cell (power 1 of alpha) solved directly when nonzero.
fn recognize_guess_even(g: &RPoly, ctx: &FieldCtx) -> RecognitionResult {
    let q = ctx.q();
    let q1 = q - 1;
    let q2 = (q - 2) / 2;
    // NN = [0, q2+1, 1, q2+2, 2, ...]; length q-1
    let mut nn_list: Vec<u64> = vec![0];
    for t in 0..q2 {
        nn_list.push(q2 + 1 + t);
        nn_list.push(1 + t);
    }
    nn_list.truncate(q1 as usize);
    // B = [b_{q-1}, ..., b_0]
    let b: Vec<Felt> = (0..q as usize)
        .map(|i| g.coeff(q as usize - 1 - i))
        .collect();

    for n in 1..=q * q - 1 {
        let nprime = n.div_ceil(2);
        let n2 = (n % q1) as usize;
        let n1 = n / q1;
        let mut idx: Vec<u64> = nn_list[n2..].to_vec();
        idx.extend_from_slice(&nn_list[..n2]);
        idx.push(n / 2);
        let anchor = idx.iter().position(|&v| v == 1);

        let mut ck = vec![0u64; q1 as usize + 1];
        for (k, slot) in ck.iter_mut().enumerate() {
            let mut tot = 0u64;
            for j in 0..=n1 {
                let i = j * q1 + k as u64;
                if i < nprime {
                    tot = (tot + dickson_term_mod_p(n, i, ctx)) % ctx.p();
                }
            }
            *slot = tot;
        }
        let mut cells: Vec<Felt> = idx[..q1 as usize]
            .iter()
            .map(|&k| ctx.from_int(ck[k as usize] as i64))
            .collect();
        cells.push(Felt::ZERO); // the constant cell is 0 in characteristic 2

        if !b
            .iter()
            .zip(&cells)
            .all(|(x, y)| x.is_zero() == y.is_zero())
        {
            continue;
        }
        let mut candidates: Vec<Felt> = Vec::new();
        if let Some(s_pos) = anchor {
            if !cells[s_pos].is_zero() {
                let a = ctx
                    .div(ctx.neg(b[s_pos]), cells[s_pos])
                    .expect("anchor cell is nonzero");
                if !a.is_zero() {
                    candidates.push(a);
                }
            }
        }
        candidates.extend(ctx.units());
        for alpha in candidates {
            let na = ctx.neg(alpha);
            let hit = (0..q as usize).all(|i| ctx.mul(cells[i], ctx.pow(na, idx[i])) == b[i]);
            if hit {
                return checked(RecognitionResult::Dickson { n, alpha }, g, ctx);
            }
        }
    }
    RecognitionResult::NotDickson
}

/// Odd-q guessing recognizer. The reduced coefficients of D_n collapse by
/// exponent class mod q' = (q-1)/2 into c_k (-alpha)^k with
/// c_k = sum_j l^j (n/(n-jq'-k)) C(n-jq'-k, jq'+k) and l = (-alpha)^{q'}.
/// Both sign hypotheses run per degree: l_1 = (-1)^{q'+1} corresponds to
/// nonsquare alpha (any degree) and l_0 = (-1)^{q'} to square alpha
/// (degrees up to (q^2-1)/2 only, the period bound for squares).
fn recognize_guess_odd(g: &RPoly, ctx: &FieldCtx) -> RecognitionResult {
    let q = ctx.q();
    let p = ctx.p();
    let qq = (q - 1) / 2;
    let m = g.degree();
    let coeff_desc: Vec<Felt> = (0..q as usize)
        .map(|i| g.coeff(q as usize - 1 - i))
        .collect();

    // parity screen and slice selection
    let (b, start_n, even_n) =
        if m % 2 == 1 && (0..=qq as usize).all(|i| coeff_desc[2 * i].is_zero()) {
            let b: Vec<Felt> = (0..qq as usize).map(|i| coeff_desc[2 * i + 1]).collect();
            (b, 1u64, false)
        } else if m.is_multiple_of(2) && (0..qq as usize).all(|i| coeff_desc[2 * i + 1].is_zero()) {
            let b: Vec<Felt> = (0..=qq as usize).map(|i| coeff_desc[2 * i]).collect();
            (b, 2u64, true)
        } else {
            return RecognitionResult::NotDickson;
        };

    // l0 = (-1)^{q'} (square-alpha branch), l1 = -l0 (nonsquare branch)
    let l0_negative = qq % 2 == 1;
    let ub_all = q * q - 1;
    let ub_square = (q * q - 1) / 2;

    let mut n = start_n;
    while n <= ub_all {
        let nprime = if even_n { n / 2 } else { n.div_ceil(2) };
        let n2 = (nprime % qq) as usize;
        let n1 = nprime / qq;
        // exponent-of-alpha index per cell: rotation of [0..qq) by n2
        let mut idx: Vec<u64> = (n2 as u64..qq).collect();
        idx.extend(0..n2 as u64);
        if even_n {
            idx.push(n / 2);
        }
        let anchor = ((qq as usize) - n2 + 1) % qq as usize;

        // profiles for both sign hypotheses
        let mut ck0 = vec![0u64; qq as usize]; // l = l0 (square alpha)
        let mut ck1 = vec![0u64; qq as usize]; // l = l1 (nonsquare alpha)
        for k in 0..qq as usize {
            let (mut t0, mut t1) = (0u64, 0u64);
            for j in 0..=n1 {
                let i = j * qq + k as u64;
                if i >= nprime {
                    continue;
                }
                let term = dickson_term_mod_p(n, i, ctx);
                let neg = (p - term % p) % p;
                // l0^j: sign flips with odd j iff l0 = -1
                let (s0, s1) = if j % 2 == 0 {
                    (term, term)
                } else if l0_negative {
                    (neg, term)
                } else {
                    (term, neg)
                };
                t0 = (t0 + s0) % p;
                t1 = (t1 + s1) % p;
            }
            ck0[k] = t0;
            ck1[k] = t1;
        }

        // nonsquare branch first (mirrors the reference order), then the
        // square branch bounded by its period
        for (profile, square_class) in [(&ck1, false), (&ck0, true)] {
            if square_class && n > ub_square {
                continue;
            }
            let mut cells: Vec<Felt> = (0..qq as usize)
                .map(|i| ctx.from_int(profile[(n2 + i) % qq as usize] as i64))
                .collect();
            if even_n {
                cells.push(ctx.from_int(2));
            }
            if !b
                .iter()
                .zip(&cells)
                .all(|(x, y)| x.is_zero() == y.is_zero())
            {
                continue;
            }
            let mut candidates: Vec<Felt> = Vec::new();
            if !cells[anchor].is_zero() {
                let a = ctx.div(ctx.neg(b[anchor]), cells[anchor]).expect("nonzero");
                // the profile presumes the class of alpha; a wrong-class
                // solution cannot be verified against this profile
                if !a.is_zero() && ctx.is_square(a).unwrap() == square_class {
                    candidates.push(a);
                }
            }
            candidates.extend(
                ctx.units()
                    .filter(|&a| ctx.is_square(a).unwrap() == square_class),
            );
            for alpha in candidates {
                let na = ctx.neg(alpha);
                let hit = (0..b.len()).all(|i| ctx.mul(cells[i], ctx.pow(na, idx[i])) == b[i]);
                if hit {
                    return checked(RecognitionResult::Dickson { n, alpha }, g, ctx);
                }
            }
        }
        n += 2;
    }
    RecognitionResult::NotDickson
}

/// Coefficient-guessing recognizer; same decision as `recognize_brute`
/// with a possibly different (equivalent) witness.
pub fn recognize_guess(f: &Poly, ctx: &FieldCtx) -> RecognitionResult {
    let g = reduce(f, ctx);
    if let Some(res) = special_cases(&g, ctx) {
        return checked(res, &g, ctx);
    }
    if ctx.q().is_multiple_of(2) {
        recognize_guess_even(&g, ctx)
    } else {
        recognize_guess_odd(&g, ctx)
    }
}

/// Ground-truth oracle: every reduced Dickson polynomial for
/// 0 <= n <= q^2-1 and alpha in F_q^x plus the alpha = 0 monomial family,
/// keyed by reduced polynomial.
#[allow(clippy::mutable_key_type)] // RPoly hashes by coefficients only
pub fn dickson_table(
    ctx: &FieldCtx,
) -> Result<HashMap<RPoly, BTreeSet<(u64, Felt)>>, RecognitionError> {
    let q = ctx.q();
    if q > 16 {
        return Err(RecognitionError::DeskBoundExceeded(q));
    }
    let mut map: HashMap<RPoly, BTreeSet<(u64, Felt)>> = HashMap::new();
    for alpha in ctx.elements() {
        let mut prev = RPoly::constant(ctx.from_int(2), ctx);
        let mut cur = RPoly::x(ctx);
        map.entry(prev.clone()).or_default().insert((0, alpha));
        map.entry(cur.clone()).or_default().insert((1, alpha));
        for n in 2..=q * q - 1 {
            let next = rp_sub(&rp_mul_x(&cur, ctx), &rp_scale(&prev, alpha, ctx), ctx)
                .expect("same context");
            prev = cur;
            cur = next;
            map.entry(cur.clone()).or_default().insert((n, alpha));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::polyring::poly_from_csv;

    #[test]
    fn monomials_and_constants() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(
            recognize_brute(&Poly::monomial(1), &f5),
            RecognitionResult::Monomial { n: 1 }
        );
        assert_eq!(
            recognize_guess(&Poly::monomial(3), &f5),
            RecognitionResult::Monomial { n: 3 }
        );
        let two = Poly::constant(Felt(2));
        assert_eq!(
            recognize_brute(&two, &f5),
            RecognitionResult::Dickson {
                n: 0,
                alpha: Felt::ONE
            }
        );
        let three = Poly::constant(Felt(3));
        assert_eq!(recognize_brute(&three, &f5), RecognitionResult::NotDickson);
        assert_eq!(recognize_guess(&three, &f5), RecognitionResult::NotDickson);
    }

    #[test]
    fn known_sequence_fixture_f5() {
        let f5 = make_field(5, 1).unwrap();
        let f = poly_from_csv("2,0,1,0,1", &f5).unwrap(); // x^4 + x^2 + 2
        assert_eq!(
            recognize_brute(&f, &f5),
            RecognitionResult::Dickson {
                n: 4,
                alpha: Felt::ONE
            }
        );
        assert!(recognize_guess(&f, &f5).is_dickson());
    }

    #[test]
    fn worked_example_f8() {
        let f8 = make_field(2, 3).unwrap();
        for alpha in f8.units() {
            let d36 = dickson_reduced(DicksonId::new(36, alpha), &f8);
            let r = recognize_brute(&d36.to_poly(), &f8);
            assert!(r.is_dickson(), "alpha = {}", f8.render(alpha));
            assert_eq!(r.regenerate(&f8).unwrap(), d36);
            let r2 = recognize_guess(&d36.to_poly(), &f8);
            assert!(r2.is_dickson());
            assert_eq!(r2.regenerate(&f8).unwrap(), d36);
        }
    }

    #[test]
    fn zero_pattern_screen_rejects_fast() {
        // F_11: an odd-degree input with a nonzero even-exponent coefficient
        // cannot be Dickson; both recognizers refuse it
        let f11 = make_field(11, 1).unwrap();
        let mut coeffs = vec![Felt::ZERO; 10];
        coeffs[9] = Felt(1);
        coeffs[4] = Felt(3);
        let f = Poly::from_coeffs(coeffs);
        assert_eq!(recognize_brute(&f, &f11), RecognitionResult::NotDickson);
        assert_eq!(recognize_guess(&f, &f11), RecognitionResult::NotDickson);
    }

    #[test]
    fn alpha_recovery_from_anchor_f11() {
        // D_37(x, alpha0) for a nonsquare alpha0: the x^5 cell carries
        // (-alpha) once, so alpha is recovered before verification
        let f11 = make_field(11, 1).unwrap();
        for alpha0 in f11.units() {
            if f11.is_square(alpha0).unwrap() {
                continue;
            }
            let d = dickson_reduced(DicksonId::new(37, alpha0), &f11);
            let r = recognize_guess(&d.to_poly(), &f11);
            assert!(r.is_dickson());
            assert_eq!(r.regenerate(&f11).unwrap(), d);
        }
    }

    #[test]
    fn round_trip_all_true_dicksons() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let ctx = make_field(p, s).unwrap();
            let q = ctx.q();
            for alpha in ctx.units() {
                for n in 0..q * q {
                    let d = dickson_reduced(DicksonId::new(n, alpha), &ctx);
                    let f = d.to_poly();
                    let rb = recognize_brute(&f, &ctx);
                    assert!(rb.is_dickson(), "brute missed q={q} alpha={alpha:?} n={n}");
                    assert_eq!(rb.regenerate(&ctx).unwrap(), d);
                    let rg = recognize_guess(&f, &ctx);
                    assert!(rg.is_dickson(), "guess missed q={q} alpha={alpha:?} n={n}");
                    assert_eq!(rg.regenerate(&ctx).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn recognizers_agree_with_oracle_on_randoms() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(0xdead);
        for (p, s) in [(3, 1), (2, 2), (5, 1), (7, 1)] {
            let ctx = make_field(p, s).unwrap();
            let q = ctx.q();
            #[allow(clippy::mutable_key_type)]
            let table = dickson_table(&ctx).unwrap();
            for _ in 0..1000 {
                let coeffs: Vec<Felt> = (0..q).map(|_| ctx.felt(rng.random_range(0..q))).collect();
                let g = RPoly::from_reduced(coeffs);
                let truth = table.contains_key(&g);
                let f = g.to_poly();
                assert_eq!(recognize_brute(&f, &ctx).is_dickson(), truth);
                assert_eq!(recognize_guess(&f, &ctx).is_dickson(), truth);
            }
        }
    }

    #[test]
    fn table_contents() {
        let f5 = make_field(5, 1).unwrap();
        #[allow(clippy::mutable_key_type)]
        let table = dickson_table(&f5).unwrap();
        let x = RPoly::x(&f5);
        let entry = table.get(&x).unwrap();
        for alpha in f5.elements() {
            assert!(entry.contains(&(1, alpha)));
        }
        assert!(entry.contains(&(5, Felt::ONE)));
        assert!(entry.contains(&(7, Felt::ONE)));
        let two = RPoly::constant(Felt(2), &f5);
        let centry = table.get(&two).unwrap();
        for alpha in f5.units() {
            assert!(centry.contains(&(0, alpha)));
            assert!(centry.contains(&(24, alpha)), "D_{{q^2-1}} = 2");
        }
        let f17 = make_field(17, 1).unwrap();
        assert!(matches!(
            dickson_table(&f17),
            Err(RecognitionError::DeskBoundExceeded(17))
        ));
    }
}
