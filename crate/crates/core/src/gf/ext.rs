//! The quadratic extension F_{q^2} over a base FieldCtx, and the phi_alpha
//! machinery: preimages of u + alpha/u, the norm-level sets S_gamma, and
//! square roots found by exhaustive search (desk scale).

use super::{Felt, FieldCtx, GfError};

/// An element a + b*y of F_{q^2}, with y^2 = t*y + u fixed by the ExtCtx.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElt {
    pub a: Felt,
    pub b: Felt,
}

impl ExtElt {
    pub const ZERO: ExtElt = ExtElt {
        a: Felt::ZERO,
        b: Felt::ZERO,
    };
    pub const ONE: ExtElt = ExtElt {
        a: Felt::ONE,
        b: Felt::ZERO,
    };

    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the element lies in the embedded copy of F_q.
    pub fn in_base(self) -> bool {
        self.b.is_zero()
    }
}

/// F_{q^2} represented as pairs over a base field, with y^2 - t*y - u
/// irreducible over F_q. For odd q the modulus is y^2 - d with d the
/// smallest nonsquare; for even q it is y^2 + y + c with c of smallest
/// encoding giving irreducibility.
pub struct ExtCtx<'a> {
    pub base: &'a FieldCtx,
    /// y^2 = t*y + u.
    pub t: Felt,
    pub u: Felt,
}

/// Builds the deterministic quadratic extension of `ctx`.
pub fn make_ext(ctx: &FieldCtx) -> ExtCtx<'_> {
    if ctx.q() % 2 == 1 {
        let d = ctx
            .units()
            .find(|&a| !ctx.is_square(a).unwrap())
            .expect("odd q has a nonsquare");
        ExtCtx {
            base: ctx,
            t: Felt::ZERO,
            u: d,
        }
    } else {
        // y^2 + y + c irreducible iff it has no root in F_q
        let c = ctx
            .elements()
            .find(|&c| {
                ctx.elements()
                    .all(|r| ctx.add(ctx.mul(r, r), ctx.add(r, c)) != Felt::ZERO)
            })
            .expect("some y^2 + y + c is irreducible over F_q");
        ExtCtx {
            base: ctx,
            t: Felt::ONE,
            u: c,
        }
    }
}

impl<'a> ExtCtx<'a> {
    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn embed(&self, a: Felt) -> ExtElt {
        ExtElt { a, b: Felt::ZERO }
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElt> + '_ {
        let q = self.base.q() as u32;
        (0..q * q).map(move |i| ExtElt {
            a: Felt(i % q),
            b: Felt(i / q),
        })
    }

    pub fn add(&self, x: ExtElt, y: ExtElt) -> ExtElt {
        ExtElt {
            a: self.base.add(x.a, y.a),
            b: self.base.add(x.b, y.b),
        }
    }

    pub fn sub(&self, x: ExtElt, y: ExtElt) -> ExtElt {
        ExtElt {
            a: self.base.sub(x.a, y.a),
            b: self.base.sub(x.b, y.b),
        }
    }

    pub fn mul(&self, x: ExtElt, y: ExtElt) -> ExtElt {
        let f = self.base;
        let ac = f.mul(x.a, y.a);
        let bd = f.mul(x.b, y.b);
        let cross = f.add(f.mul(x.a, y.b), f.mul(x.b, y.a));
        ExtElt {
            a: f.add(ac, f.mul(bd, self.u)),
            b: f.add(cross, f.mul(bd, self.t)),
        }
    }

    pub fn pow(&self, x: ExtElt, mut e: u64) -> ExtElt {
        let mut base = x;
        let mut acc = ExtElt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: ExtElt) -> Result<ExtElt, GfError> {
        if x.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let q = self.q();
        Ok(self.pow(x, q * q - 2))
    }

    /// Smallest t >= 1 with x^t = 1; divides q^2 - 1.
    pub fn mult_order(&self, x: ExtElt) -> Result<u64, GfError> {
        if x.is_zero() {
            return Err(GfError::ZeroInput);
        }
        let q = self.q();
        let mut t = q * q - 1;
        for &r in &super::prime_factors(q * q - 1) {
            while t.is_multiple_of(r) && self.pow(x, t / r) == ExtElt::ONE {
                t /= r;
            }
        }
        Ok(t)
    }
}

/// phi_alpha(u) = u + alpha/u in F_{q^2}.
pub fn phi_alpha(ext: &ExtCtx, alpha: Felt, u: ExtElt) -> Result<ExtElt, GfError> {
    if alpha.is_zero() || u.is_zero() {
        return Err(GfError::ZeroInput);
    }
    let a = ext.embed(alpha);
    Ok(ext.add(u, ext.mul(a, ext.inv(u)?)))
}

/// The roots of x^2 - beta*x + alpha in F_{q^2}; one or two of them, in
/// canonical order. Every preimage r satisfies phi_alpha(r) = beta.
pub fn phi_preimages(ext: &ExtCtx, alpha: Felt, beta: Felt) -> Vec<ExtElt> {
    debug_assert!(!alpha.is_zero());
    let be = ext.embed(beta);
    let ae = ext.embed(alpha);
    let roots: Vec<ExtElt> = ext
        .elements()
        .filter(|&x| ext.add(ext.sub(ext.mul(x, x), ext.mul(be, x)), ae) == ExtElt::ZERO)
        .collect();
    debug_assert!(!roots.is_empty() && roots.len() <= 2);
    roots
}

/// S_gamma = { u in F_{q^2}^x : u^{q+1} = gamma }, the norm-gamma set;
/// always exactly q+1 elements.
pub fn s_gamma(ext: &ExtCtx, gamma: Felt) -> Vec<ExtElt> {
    debug_assert!(!gamma.is_zero());
    let g = ext.embed(gamma);
    let q = ext.q();
    let out: Vec<ExtElt> = ext
        .elements()
        .filter(|&u| !u.is_zero() && ext.pow(u, q + 1) == g)
        .collect();
    assert_eq!(
        out.len(),
        (q + 1) as usize,
        "norm level sets have q+1 elements"
    );
    out
}

/// A square root of an embedded base element, by exhaustive search. Only
/// meaningful for odd q (every base element is a square in F_{q^2}).
pub fn sqrt_in_ext(ext: &ExtCtx, a: Felt) -> ExtElt {
    assert!(ext.q() % 2 == 1, "sqrt_in_ext requires odd q");
    let target = ext.embed(a);
    ext.elements()
        .find(|&v| ext.mul(v, v) == target)
        .expect("embedded base elements are squares in F_{q^2}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn deterministic_moduli() {
        let f3 = make_field(3, 1).unwrap();
        let e3 = make_ext(&f3);
        assert_eq!((e3.t, e3.u), (Felt::ZERO, Felt(2))); // y^2 - 2

        let f5 = make_field(5, 1).unwrap();
        let e5 = make_ext(&f5);
        assert_eq!((e5.t, e5.u), (Felt::ZERO, Felt(2))); // y^2 - 2

        let f2 = make_field(2, 1).unwrap();
        let e2 = make_ext(&f2);
        assert_eq!((e2.t, e2.u), (Felt::ONE, Felt::ONE)); // y^2 + y + 1
    }

    #[test]
    fn embed_is_ring_hom_and_norm_lands_in_base() {
        for (p, s) in [(3, 1), (5, 1), (2, 2), (7, 1), (3, 2)] {
            let f = make_field(p, s).unwrap();
            let ext = make_ext(&f);
            let q = f.q();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(ext.embed(f.add(a, b)), ext.add(ext.embed(a), ext.embed(b)));
                    assert_eq!(ext.embed(f.mul(a, b)), ext.mul(ext.embed(a), ext.embed(b)));
                }
            }
            for v in ext.elements() {
                assert!(ext.pow(v, q + 1).in_base(), "norms land in F_q");
            }
        }
    }

    #[test]
    fn phi_alpha_spots() {
        let f5 = make_field(5, 1).unwrap();
        let ext = make_ext(&f5);
        // alpha = 1, u = 1 -> 2
        assert_eq!(
            phi_alpha(&ext, Felt(1), ExtElt::ONE).unwrap(),
            ext.embed(Felt(2))
        );
        // alpha = 1, u = 2 -> 2 + 1/2 = 2 + 3 = 0
        assert_eq!(
            phi_alpha(&ext, Felt(1), ext.embed(Felt(2))).unwrap(),
            ExtElt::ZERO
        );
        // u in embedded F_q^x stays in the embedded base
        for alpha in f5.units() {
            for beta in f5.units() {
                assert!(phi_alpha(&ext, alpha, ext.embed(beta)).unwrap().in_base());
            }
        }
    }

    #[test]
    fn preimage_sizes_and_vieta() {
        let f5 = make_field(5, 1).unwrap();
        let ext = make_ext(&f5);
        assert_eq!(phi_preimages(&ext, Felt(1), Felt(2)), vec![ExtElt::ONE]);
        let rs = phi_preimages(&ext, Felt(1), Felt::ZERO);
        assert_eq!(rs, vec![ext.embed(Felt(2)), ext.embed(Felt(3))]);
        for alpha in f5.units() {
            for beta in f5.elements() {
                let rs = phi_preimages(&ext, alpha, beta);
                assert!((1..=2).contains(&rs.len()));
                for &r in &rs {
                    assert_eq!(
                        phi_alpha(&ext, alpha, r).unwrap(),
                        ext.embed(beta),
                        "roots are preimages"
                    );
                }
                // Vieta: product of the roots is alpha
                let prod = if rs.len() == 2 {
                    ext.mul(rs[0], rs[1])
                } else {
                    ext.mul(rs[0], rs[0])
                };
                assert_eq!(prod, ext.embed(alpha));
            }
        }
    }

    #[test]
    fn s_gamma_structure() {
        for (p, s) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (3, 2),
            (11, 1),
            (13, 1),
        ] {
            let f = make_field(p, s).unwrap();
            let ext = make_ext(&f);
            let q = f.q();
            for gamma in f.units() {
                let sg = s_gamma(&ext, gamma);
                assert_eq!(sg.len() as u64, q + 1);
                // Lemma: some u in S_gamma has (q+1) | ord(u)
                assert!(
                    sg.iter()
                        .any(|&u| ext.mult_order(u).unwrap().is_multiple_of(q + 1)),
                    "q={q} gamma={gamma:?}"
                );
            }
            // gamma = 1: the group of (q+1)-st roots of unity; some element
            // of order exactly q+1
            let sg1 = s_gamma(&ext, Felt::ONE);
            assert!(sg1.iter().any(|&u| ext.mult_order(u).unwrap() == q + 1));
        }
    }

    #[test]
    fn membership_in_t_gamma_iff_norm_or_base() {
        // Lemma: phi_gamma(u) lands in F_q iff u^{q+1} = gamma or u in F_q^x
        for (p, s) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (11, 1),
            (13, 1),
        ] {
            let f = make_field(p, s).unwrap();
            let ext = make_ext(&f);
            let q = f.q();
            for gamma in f.units() {
                let ge = ext.embed(gamma);
                for u in ext.elements().filter(|u| !u.is_zero()) {
                    let in_t = phi_alpha(&ext, gamma, u).unwrap().in_base();
                    let norm_matches = ext.pow(u, q + 1) == ge;
                    let in_base_units = u.in_base();
                    assert_eq!(in_t, norm_matches || in_base_units);
                }
            }
        }
    }

    #[test]
    fn sqrt_exists_for_all_base_elements() {
        for (p, s) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
            let f = make_field(p, s).unwrap();
            let ext = make_ext(&f);
            assert_eq!(sqrt_in_ext(&ext, Felt::ZERO), ExtElt::ZERO);
            let one_root = sqrt_in_ext(&ext, Felt::ONE);
            assert!(one_root == ExtElt::ONE || one_root == ext.embed(f.neg(Felt::ONE)));
            for a in f.units() {
                let v = ext.mul(sqrt_in_ext(&ext, a), sqrt_in_ext(&ext, a));
                assert_eq!(v, ext.embed(a));
            }
        }
        // 2 is a nonsquare mod 3; its root exists only outside F_3
        let f3 = make_field(3, 1).unwrap();
        let ext = make_ext(&f3);
        let r = sqrt_in_ext(&ext, Felt(2));
        assert!(!r.in_base());
    }

    #[test]
    fn surjectivity_of_u2_plus_alpha_u_minus2() {
        // Lemma: odd q, square alpha: every beta in F_q^x is u^2 + alpha/u^2
        for (p, s) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let f = make_field(p, s).unwrap();
            let ext = make_ext(&f);
            for alpha in f.units() {
                if !f.is_square(alpha).unwrap() {
                    continue;
                }
                let ae = ext.embed(alpha);
                for beta in f.units() {
                    let be = ext.embed(beta);
                    let hit = ext.elements().filter(|u| !u.is_zero()).any(|u| {
                        let u2 = ext.mul(u, u);
                        ext.add(u2, ext.mul(ae, ext.inv(u2).unwrap())) == be
                    });
                    assert!(hit, "q={} alpha={alpha:?} beta={beta:?}", f.q());
                }
            }
        }
    }
}
