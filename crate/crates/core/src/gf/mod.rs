//! Arithmetic for F_p and F_q = F_{p^s}, plus the quadratic extension F_{q^2}.
//!
//! Fields are built deterministically: the defining modulus is the
//! lexicographically smallest monic irreducible of degree `s` over F_p
//! (coefficients compared low-to-high) and the generator is the element of
//! smallest canonical encoding with multiplicative order q-1. Elements are
//! coefficient vectors over F_p, identified with their base-p integer
//! encoding; that encoding fixes iteration order and tie-breaking everywhere.

mod ext;

pub use ext::{make_ext, phi_alpha, phi_preimages, s_gamma, sqrt_in_ext, ExtCtx, ExtElt};

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Largest supported field size.
pub const MAX_Q: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds the supported bound 2^16")]
    DegreeTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a nonzero input")]
    ZeroInput,
    #[error("cannot parse {0:?} as a field element")]
    BadElement(String),
}

/// A prime power q = p^s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub s: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, s: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        assert!(s >= 1, "exponent must be positive");
        let mut q: u64 = 1;
        for _ in 0..s {
            q = q.checked_mul(p).ok_or(GfError::DegreeTooLarge(u64::MAX))?;
            if q > MAX_Q {
                return Err(GfError::DegreeTooLarge(q));
            }
        }
        Ok(PrimePower { p, s, q })
    }
}

/// Splits q into (p, s) if q is a prime power, by trial division.
pub fn as_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut t = q;
            let mut s = 0;
            while t.is_multiple_of(p) {
                t /= p;
                s += 1;
            }
            return (t == 1).then_some((p, s));
        }
        p += 1;
    }
    Some((q, 1))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// One element of a `FieldCtx`, stored as its canonical base-p encoding.
///
/// The encoding of the coefficient vector (c_0, ..., c_{s-1}) is
/// sum c_i p^i, so constants 0 and 1 always encode as 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A concrete finite field F_q with its modulus, generator, and log tables.
pub struct FieldCtx {
    pub pp: PrimePower,
    /// Coefficients of the defining monic irreducible, ascending, length s+1.
    pub modulus: Vec<u64>,
    pub generator: Felt,
    /// exp[i] = generator^i for i in 0..2(q-1); doubled to skip a reduction.
    exp: Vec<u32>,
    /// log[enc] with log[0] unused.
    log: Vec<u32>,
    /// Lagrange basis polynomials for interpolation, built on first use.
    /// basis[j] holds the q coefficients of L_j with L_j(beta_i) = [i == j].
    lagrange: OnceLock<Vec<Vec<Felt>>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(q = {}^{})", self.pp.p, self.pp.s)
    }
}

/// Builds F_{p^s} deterministically. See the module docs for the choice of
/// modulus and generator.
pub fn make_field(p: u64, s: u32) -> Result<FieldCtx, GfError> {
    let pp = PrimePower::new(p, s)?;
    let modulus = smallest_irreducible(p, s);
    let raw = RawField {
        pp,
        modulus: modulus.clone(),
    };

    let factors = prime_factors(pp.q - 1);
    let mut generator = Felt(1);
    for enc in 1..pp.q as u32 {
        if raw_order_is(&raw, enc, pp.q - 1, &factors) {
            generator = Felt(enc);
            break;
        }
    }

    let order = (pp.q - 1) as usize;
    let mut exp = vec![0u32; 2 * order];
    let mut log = vec![0u32; pp.q as usize];
    let mut acc = 1u32;
    for (i, slot) in exp.iter_mut().enumerate().take(order) {
        *slot = acc;
        log[acc as usize] = i as u32;
        acc = raw.mul(acc, generator.0);
    }
    debug_assert_eq!(acc, 1, "generator order must be q-1");
    for i in 0..order {
        exp[order + i] = exp[i];
    }

    Ok(FieldCtx {
        pp,
        modulus,
        generator,
        exp,
        log,
        lagrange: OnceLock::new(),
    })
}

impl FieldCtx {
    pub fn q(&self) -> u64 {
        self.pp.q
    }

    pub fn p(&self) -> u64 {
        self.pp.p
    }

    /// All q elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.pp.q as u32).map(Felt)
    }

    /// The q-1 nonzero elements in canonical encoding order.
    pub fn units(&self) -> impl Iterator<Item = Felt> {
        (1..self.pp.q as u32).map(Felt)
    }

    pub fn felt(&self, enc: u64) -> Felt {
        assert!(
            enc < self.pp.q,
            "encoding {enc} out of range for q = {}",
            self.pp.q
        );
        Felt(enc as u32)
    }

    /// The image of an integer under Z -> F_q (a constant polynomial).
    pub fn from_int(&self, n: i64) -> Felt {
        Felt(n.rem_euclid(self.pp.p as i64) as u32)
    }

    /// Coefficient vector (c_0, ..., c_{s-1}) of an element.
    pub fn coeffs(&self, a: Felt) -> Vec<u64> {
        let mut e = a.0 as u64;
        (0..self.pp.s)
            .map(|_| {
                let c = e % self.pp.p;
                e /= self.pp.p;
                c
            })
            .collect()
    }

    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        let p = self.pp.p;
        let (mut ea, mut eb) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut w = 1u64;
        for _ in 0..self.pp.s {
            out += w * ((ea % p + eb % p) % p);
            ea /= p;
            eb /= p;
            w *= p;
        }
        Felt(out as u32)
    }

    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        let p = self.pp.p;
        let (mut ea, mut eb) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut w = 1u64;
        for _ in 0..self.pp.s {
            out += w * ((p + ea % p - eb % p) % p);
            ea /= p;
            eb /= p;
            w *= p;
        }
        Felt(out as u32)
    }

    pub fn neg(&self, a: Felt) -> Felt {
        self.sub(Felt::ZERO, a)
    }

    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.is_zero() || b.is_zero() {
            return Felt::ZERO;
        }
        let order = (self.pp.q - 1) as usize;
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        debug_assert!(i < 2 * order);
        Felt(self.exp[i])
    }

    /// a^e with a^0 = 1 (including 0^0 = 1).
    pub fn pow(&self, a: Felt, e: u64) -> Felt {
        if e == 0 {
            return Felt::ONE;
        }
        if a.is_zero() {
            return Felt::ZERO;
        }
        let order = self.pp.q - 1;
        let i = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        Felt(self.exp[i as usize])
    }

    /// Inverse via a^(q-2); uniform across p and s.
    pub fn inv(&self, a: Felt) -> Result<Felt, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.pp.q - 2))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// For odd q, Euler's criterion; for even q every element is a square
    /// (the Frobenius is surjective in characteristic 2).
    pub fn is_square(&self, a: Felt) -> Result<bool, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInput);
        }
        if self.pp.q.is_multiple_of(2) {
            return Ok(true);
        }
        Ok(self.pow(a, (self.pp.q - 1) / 2) == Felt::ONE)
    }

    /// Smallest t >= 1 with a^t = 1; divides q-1.
    pub fn mult_order(&self, a: Felt) -> Result<u64, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInput);
        }
        let mut t = self.pp.q - 1;
        for &r in &prime_factors(self.pp.q - 1) {
            while t.is_multiple_of(r) && self.pow(a, t / r) == Felt::ONE {
                t /= r;
            }
        }
        Ok(t)
    }

    pub(crate) fn lagrange_basis(&self) -> &Vec<Vec<Felt>> {
        self.lagrange.get_or_init(|| {
            let q = self.pp.q as usize;
            let mut basis = Vec::with_capacity(q);
            for j in 0..q as u32 {
                let bj = Felt(j);
                // L_j(x) = prod_{i != j} (x - beta_i) / (beta_j - beta_i)
                let mut poly = vec![Felt::ZERO; q];
                poly[0] = Felt::ONE;
                let mut deg = 0usize;
                let mut denom = Felt::ONE;
                for i in 0..q as u32 {
                    if i == j {
                        continue;
                    }
                    let bi = Felt(i);
                    // poly *= (x - beta_i)
                    for k in (0..=deg).rev() {
                        let c = poly[k];
                        poly[k + 1] = self.add(poly[k + 1], c);
                        poly[k] = self.mul(self.neg(bi), c);
                    }
                    deg += 1;
                    denom = self.mul(denom, self.sub(bj, bi));
                }
                let scale = self.inv(denom).expect("distinct points");
                for c in poly.iter_mut() {
                    *c = self.mul(*c, scale);
                }
                basis.push(poly);
            }
            basis
        })
    }

    /// Renders an element: decimal for prime fields, a polynomial in z for
    /// extensions ("z+1", "2z", "z^2+z").
    pub fn render(&self, a: Felt) -> String {
        if self.pp.s == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let t = if i == 0 {
                c.to_string()
            } else if c == 1 {
                var
            } else {
                format!("{c}{var}")
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parses the grammar produced by [`render`](Self::render). Prime fields
    /// additionally accept signed integers (-1 means p-1).
    pub fn parse(&self, s: &str) -> Result<Felt, GfError> {
        let s = s.trim();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(GfError::BadElement(s.to_string()));
        }
        if let Ok(n) = compact.parse::<i64>() {
            if self.pp.s == 1 || n >= 0 {
                let r = n.rem_euclid(self.pp.p as i64) as u64;
                // for extensions, a bare nonnegative integer means a constant
                if self.pp.s == 1 || (n as u64) < self.pp.p {
                    return Ok(Felt(r as u32));
                }
            }
            return Err(GfError::BadElement(s.to_string()));
        }
        let mut coeffs = vec![0u64; self.pp.s as usize];
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(GfError::BadElement(s.to_string()));
            }
            let (coef_str, exp) = match term.find('z') {
                None => (term, 0usize),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|d| d.parse::<usize>().ok())
                            .ok_or_else(|| GfError::BadElement(s.to_string()))?
                    };
                    (&term[..pos], e)
                }
            };
            let c: u64 = if coef_str.is_empty() {
                1
            } else {
                coef_str
                    .parse()
                    .map_err(|_| GfError::BadElement(s.to_string()))?
            };
            if exp >= self.pp.s as usize {
                return Err(GfError::BadElement(s.to_string()));
            }
            coeffs[exp] = (coeffs[exp] + c) % self.pp.p;
        }
        let enc = coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.pp.p + c);
        Ok(Felt(enc as u32))
    }
}

/// Plain polynomial-basis arithmetic, used to bootstrap the log tables.
struct RawField {
    pp: PrimePower,
    modulus: Vec<u64>,
}

impl RawField {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, s) = (self.pp.p, self.pp.s as usize);
        let dec = |mut e: u64| -> Vec<u64> {
            (0..s)
                .map(|_| {
                    let c = e % p;
                    e /= p;
                    c
                })
                .collect()
        };
        let (av, bv) = (dec(a as u64), dec(b as u64));
        let mut conv = vec![0u64; 2 * s - 1];
        for i in 0..s {
            for j in 0..s {
                conv[i + j] = (conv[i + j] + av[i] * bv[j]) % p;
            }
        }
        for i in (s..2 * s - 1).rev() {
            let f = conv[i];
            if f != 0 {
                for j in 0..=s {
                    let idx = i - s + j;
                    conv[idx] = (conv[idx] + (p - f % p) * self.modulus[j]) % p;
                }
            }
        }
        conv[..s].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn raw_order_is(raw: &RawField, enc: u32, order: u64, factors: &[u64]) -> bool {
    if raw.pow(enc, order) != 1 {
        return false;
    }
    factors.iter().all(|&r| raw.pow(enc, order / r) != 1)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The lexicographically smallest monic irreducible of degree s over F_p,
/// comparing coefficient vectors low-to-high. Returned ascending, length s+1.
fn smallest_irreducible(p: u64, s: u32) -> Vec<u64> {
    let s = s as usize;
    if s == 1 {
        return vec![0, 1]; // z itself; F_p = F_p[z]/(z)
    }
    let mut coeffs = vec![0u64; s];
    loop {
        if is_irreducible(p, &coeffs) {
            let mut m = coeffs.clone();
            m.push(1);
            return m;
        }
        // low-to-high lexicographic successor: increment the highest digit
        // first so that smaller low coefficients are exhausted last.
        let mut i = s;
        loop {
            assert!(i > 0, "no irreducible of degree {s} over F_{p}");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Irreducibility of the monic polynomial x^s + c (given by its low
/// coefficients) via trial division by every monic polynomial of degree
/// 1..=s/2.
fn is_irreducible(p: u64, low: &[u64]) -> bool {
    let s = low.len();
    for d in 1..=s / 2 {
        let mut count = 1u64;
        for _ in 0..d {
            count *= p;
        }
        for enc in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut e = enc;
            for _ in 0..d {
                div.push(e % p);
                e /= p;
            }
            div.push(1);
            // remainder of (low + x^s) mod div
            let mut rem: Vec<u64> = low.to_vec();
            rem.push(1);
            for i in (d..=s).rev() {
                let f = rem[i];
                if f != 0 {
                    for (j, &dc) in div.iter().enumerate() {
                        rem[i - d + j] = (rem[i - d + j] + (p - f % p) * dc) % p;
                    }
                }
            }
            if rem[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
