//! Polynomials over F_q: unreduced dense polynomials and the quotient
//! representation modulo x^q - x.
//!
//! Reduction sends exponent e >= 1 to ((e-1) mod (q-1)) + 1 and fixes the
//! constant term, so x^{q-1} stays x^{q-1} (it is NOT congruent to 1).
//! Reduced polynomials have degree < q and are in bijection with functions
//! F_q -> F_q; equality of coefficient vectors therefore coincides with
//! functional equality, and both representations are kept in sync.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use thiserror::Error;

use crate::gf::{Felt, FieldCtx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("reverse_scale needs m >= deg(f), got m = {m} < {deg}")]
    MTooSmall { m: u64, deg: u64 },
    #[error("operands come from different field contexts")]
    ContextMismatch,
    #[error("cannot parse polynomial: {0}")]
    BadPolynomial(String),
}

/// A dense unreduced polynomial; coeffs[e] is the coefficient of x^e.
/// Trailing zeros are trimmed, so the leading coefficient is nonzero unless
/// the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Felt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Felt) -> Poly {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Felt>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn monomial(e: usize) -> Poly {
        let mut coeffs = vec![Felt::ZERO; e + 1];
        coeffs[e] = Felt::ONE;
        Poly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&Felt::ZERO) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, e: usize) -> Felt {
        self.coeffs.get(e).copied().unwrap_or(Felt::ZERO)
    }

    pub fn add(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|e| ctx.add(self.coeff(e), other.coeff(e)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|e| ctx.sub(self.coeff(e), other.coeff(e)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: Felt, ctx: &FieldCtx) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, ctx: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Felt::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn eval(&self, beta: Felt, ctx: &FieldCtx) -> Felt {
        let mut acc = Felt::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, beta), c);
        }
        acc
    }
}

/// x^m * f(1/x): the coefficient of x^e moves to x^{m-e}.
pub fn reverse_scale(f: &Poly, m: u64) -> Result<Poly, PolyError> {
    let deg = f.degree().unwrap_or(0) as u64;
    if m < deg {
        return Err(PolyError::MTooSmall { m, deg });
    }
    let mut coeffs = vec![Felt::ZERO; m as usize + 1];
    for (e, &c) in f.coeffs.iter().enumerate() {
        coeffs[m as usize - e] = c;
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// A polynomial reduced modulo x^q - x: exactly q coefficients indexed by
/// exponent 0..q-1, with a lazily computed value table kept in sync.
pub struct RPoly {
    coeffs: Vec<Felt>,
    values: OnceLock<Vec<Felt>>,
}

impl Clone for RPoly {
    fn clone(&self) -> Self {
        let values = OnceLock::new();
        if let Some(v) = self.values.get() {
            let _ = values.set(v.clone());
        }
        RPoly {
            coeffs: self.coeffs.clone(),
            values,
        }
    }
}

impl PartialEq for RPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for RPoly {}

impl Hash for RPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for RPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Debug for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RPoly{:?}",
            self.coeffs.iter().map(|c| c.0).collect::<Vec<_>>()
        )
    }
}

impl RPoly {
    pub fn zero(ctx: &FieldCtx) -> RPoly {
        RPoly::from_reduced(vec![Felt::ZERO; ctx.q() as usize])
    }

    pub fn constant(c: Felt, ctx: &FieldCtx) -> RPoly {
        let mut coeffs = vec![Felt::ZERO; ctx.q() as usize];
        coeffs[0] = c;
        RPoly::from_reduced(coeffs)
    }

    /// The identity polynomial x.
    pub fn x(ctx: &FieldCtx) -> RPoly {
        let mut coeffs = vec![Felt::ZERO; ctx.q() as usize];
        coeffs[1] = Felt::ONE;
        RPoly::from_reduced(coeffs)
    }

    /// Wraps an already-reduced coefficient vector of length exactly q.
    pub fn from_reduced(coeffs: Vec<Felt>) -> RPoly {
        RPoly {
            coeffs,
            values: OnceLock::new(),
        }
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> Felt {
        self.coeffs[e]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree with deg(0) = 0.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// True iff self == x^m for the given m >= 1.
    pub fn is_monomial(&self, m: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(e, &c)| if e == m { c == Felt::ONE } else { c.is_zero() })
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }
}

/// Reduces an unreduced polynomial modulo x^q - x.
pub fn reduce(f: &Poly, ctx: &FieldCtx) -> RPoly {
    let q = ctx.q() as usize;
    let mut coeffs = vec![Felt::ZERO; q];
    for (e, &c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let r = if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 };
        coeffs[r] = ctx.add(coeffs[r], c);
    }
    RPoly::from_reduced(coeffs)
}

pub fn rp_add(a: &RPoly, b: &RPoly, ctx: &FieldCtx) -> Result<RPoly, PolyError> {
    check_ctx(a, b, ctx)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| ctx.add(x, y))
        .collect();
    let out = RPoly::from_reduced(coeffs);
    if let (Some(va), Some(vb)) = (a.values.get(), b.values.get()) {
        let _ = out
            .values
            .set(va.iter().zip(vb).map(|(&x, &y)| ctx.add(x, y)).collect());
    }
    Ok(out)
}

pub fn rp_sub(a: &RPoly, b: &RPoly, ctx: &FieldCtx) -> Result<RPoly, PolyError> {
    check_ctx(a, b, ctx)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| ctx.sub(x, y))
        .collect();
    Ok(RPoly::from_reduced(coeffs))
}

pub fn rp_scale(a: &RPoly, c: Felt, ctx: &FieldCtx) -> RPoly {
    RPoly::from_reduced(a.coeffs.iter().map(|&x| ctx.mul(x, c)).collect())
}

/// Ring product followed by reduction.
pub fn rp_mul(a: &RPoly, b: &RPoly, ctx: &FieldCtx) -> Result<RPoly, PolyError> {
    check_ctx(a, b, ctx)?;
    Ok(reduce(&a.to_poly().mul(&b.to_poly(), ctx), ctx))
}

/// Multiplication by x, reduced: exponent e goes to e+1 with q wrapping to 1.
pub fn rp_mul_x(a: &RPoly, ctx: &FieldCtx) -> RPoly {
    let q = ctx.q() as usize;
    let mut coeffs = vec![Felt::ZERO; q];
    for (e, &c) in a.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let r = if e + 1 == q { 1 } else { e + 1 };
        coeffs[r] = ctx.add(coeffs[r], c);
    }
    RPoly::from_reduced(coeffs)
}

pub fn rp_eval(a: &RPoly, beta: Felt, ctx: &FieldCtx) -> Felt {
    let mut acc = Felt::ZERO;
    for &c in a.coeffs.iter().rev() {
        acc = ctx.add(ctx.mul(acc, beta), c);
    }
    acc
}

/// The value table (f(0), f(1), ..., f(q-1)) in encoding order, cached.
pub fn rp_values<'a>(a: &'a RPoly, ctx: &FieldCtx) -> &'a [Felt] {
    a.values
        .get_or_init(|| ctx.elements().map(|beta| rp_eval(a, beta, ctx)).collect())
}

/// Unique reduced polynomial with the given value table (Lagrange).
pub fn interpolate(values: &[Felt], ctx: &FieldCtx) -> RPoly {
    let q = ctx.q() as usize;
    assert_eq!(values.len(), q, "value table must have exactly q entries");
    let basis = ctx.lagrange_basis();
    let mut coeffs = vec![Felt::ZERO; q];
    for (j, &v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        for (e, &b) in basis[j].iter().enumerate() {
            coeffs[e] = ctx.add(coeffs[e], ctx.mul(v, b));
        }
    }
    let out = RPoly::from_reduced(coeffs);
    let _ = out.values.set(values.to_vec());
    out
}

/// Composition outer(inner) mod x^q - x, computed by composing value tables
/// and interpolating back to coefficients.
pub fn rp_compose(outer: &RPoly, inner: &RPoly, ctx: &FieldCtx) -> Result<RPoly, PolyError> {
    check_ctx(outer, inner, ctx)?;
    let vo = rp_values(outer, ctx);
    let vi = rp_values(inner, ctx);
    let composed: Vec<Felt> = vi.iter().map(|&y| vo[y.0 as usize]).collect();
    Ok(interpolate(&composed, ctx))
}

fn check_ctx(a: &RPoly, b: &RPoly, ctx: &FieldCtx) -> Result<(), PolyError> {
    let q = ctx.q() as usize;
    if a.coeffs.len() != q || b.coeffs.len() != q {
        return Err(PolyError::ContextMismatch);
    }
    Ok(())
}

/// Renders in the "c_k*x^k + ... + c_0" grammar: descending exponents,
/// unit coefficients omitted, multi-term extension coefficients
/// parenthesized. Used for both Poly and RPoly.
pub fn poly_text(coeffs: &[Felt], ctx: &FieldCtx) -> String {
    let mut terms = Vec::new();
    for e in (0..coeffs.len()).rev() {
        let c = coeffs[e];
        if c.is_zero() {
            continue;
        }
        let ce = ctx.render(c);
        let coef = if ce.contains('+') {
            format!("({ce})")
        } else {
            ce
        };
        let t = match e {
            0 => coef,
            _ => {
                let var = if e == 1 {
                    "x".to_string()
                } else {
                    format!("x^{e}")
                };
                if c == Felt::ONE {
                    var
                } else {
                    format!("{coef}*{var}")
                }
            }
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// The CSV form "c0,c1,...": ascending exponents, element grammar cells.
pub fn poly_csv(coeffs: &[Felt], ctx: &FieldCtx) -> String {
    coeffs
        .iter()
        .map(|&c| ctx.render(c))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses the CSV form; pads with zeros up to q when shorter.
pub fn poly_from_csv(s: &str, ctx: &FieldCtx) -> Result<Poly, PolyError> {
    let mut coeffs = Vec::new();
    for cell in s.split(',') {
        let c = ctx
            .parse(cell)
            .map_err(|_| PolyError::BadPolynomial(s.to_string()))?;
        coeffs.push(c);
    }
    Ok(Poly::from_coeffs(coeffs))
}
