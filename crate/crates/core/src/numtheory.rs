//! Integer-side machinery: the generalized Lucas theorem, the constructive
//! gcd lemma, CRT, Euler phi, multiplicative orders, dynamic structure of
//! power maps, and the maximal-period CRT construction.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("arguments out of range: need 1 <= M <= N-1, N >= 2 (got M={m}, N={n})")]
    OutOfRange { m: u64, n: u64 },
    #[error("congruences are inconsistent on gcd of the moduli")]
    Inconsistent,
    #[error("{n} is not coprime to {m}")]
    NotCoprime { n: u64, m: u64 },
    #[error("binomial argument {0} exceeds the desk bound 2^20")]
    Overflow(u64),
    #[error("unit group mod 2^{0} is not cyclic; no generator exists")]
    NoGeneratorFound(u32),
}

/// Tail length and cycle length of an eventually periodic power sequence:
/// the minimal (l, k) with a^{l+1} = a^{l+1+k} mod M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynStruct {
    pub tail: u64,
    pub period: u64,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn lcm_list(xs: &[u64]) -> u64 {
    xs.iter().copied().fold(1, lcm)
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(m: u64) -> u64 {
    factorize(m)
        .iter()
        .fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

/// Exact C(m, n) in big integers; desk-bounded at m <= 2^20.
pub fn binom_exact(m: u64, n: u64) -> Result<BigUint, NumError> {
    if m > 1 << 20 {
        return Err(NumError::Overflow(m));
    }
    if n > m {
        return Ok(BigUint::zero());
    }
    let n = n.min(m - n);
    let mut acc = BigUint::one();
    for i in 0..n {
        acc = acc * (m - i) / (i + 1); // division is exact at every step
    }
    Ok(acc)
}

/// C(m, n) mod p by the classical Lucas theorem in base p.
fn lucas_base_p(mut m: u64, mut n: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        let (md, nd) = (m % p, n % p);
        if nd > md {
            return 0;
        }
        // digits are < p <= 2^16, safe in u64 via the multiplicative formula
        let mut digit = 1u64;
        let k = nd.min(md - nd);
        for i in 0..k {
            digit = digit * (md - i) / (i + 1);
        }
        acc = acc * (digit % p) % p;
        m /= p;
        n /= p;
    }
    acc
}

/// C(m, n) mod p via the generalized Lucas theorem: decompose m and n in
/// base q = p^s and multiply the base-case binomials C(m_i, n_i) mod p,
/// each computed by classical Lucas in base p.
pub fn binom_mod_p(mut m: u64, mut n: u64, p: u64, s: u32) -> u64 {
    let q = p.pow(s);
    let mut acc = 1u64;
    while (n > 0 || m > 0) && acc != 0 {
        let (md, nd) = (m % q, n % q);
        acc = acc * lucas_base_p(md, nd, p) % p;
        m /= q;
        n /= q;
    }
    acc
}

/// The constructive k of the gcd lemma: for 1 <= M <= N-1 it satisfies
/// gcd(M + k(N-1), N^2 - 1) | (N-1). Returns exactly the k prescribed by
/// the proof's four-case analysis.
pub fn find_k(m: u64, n: u64) -> Result<u64, NumError> {
    if n < 2 || m == 0 || m > n - 1 {
        return Err(NumError::OutOfRange { m, n });
    }
    let k = if n.is_multiple_of(2) || m % 2 == 1 {
        // Cases 1 and 2 (N even; both odd): k = floor((M-1)/2)
        (m - 1) / 2
    } else if n % 4 == 3 {
        (m - 2) / 2 // Case 3: M even, N = 3 mod 4
    } else {
        // Case 4: M even, N = 1 mod 4; split on the 2-adic valuations
        let s1 = m.trailing_zeros();
        let s2 = (n - 1).trailing_zeros();
        if s1 != s2 {
            m / 2 - 1 // Case 4.1
        } else {
            m / 2 - 2 // Case 4.2 (here 4 | M, so this stays nonnegative)
        }
    };
    debug_assert_eq!((n - 1) % gcd(m + k * (n - 1), n * n - 1), 0);
    Ok(k)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Solves x = r1 mod m1, x = r2 mod m2; unique residue mod lcm(m1, m2).
pub fn crt2(r1: i64, m1: u64, r2: i64, m2: u64) -> Result<u64, NumError> {
    let (m1i, m2i) = (m1 as i128, m2 as i128);
    let r1 = (r1 as i128).rem_euclid(m1i);
    let r2 = (r2 as i128).rem_euclid(m2i);
    let (g, x, _) = ext_gcd(m1i, m2i);
    if (r2 - r1) % g != 0 {
        return Err(NumError::Inconsistent);
    }
    let l = m1i / g * m2i;
    let diff = (r2 - r1) / g;
    let sol = (r1 + m1i * (diff * x).rem_euclid(m2i / g)).rem_euclid(l);
    Ok(sol as u64)
}

/// Minimal (l, k) with n^{l+1+k} = n^{l+1} mod M, by direct iteration.
pub fn dyn_structure_int(n: u64, m: u64) -> DynStruct {
    assert!(m >= 1);
    let mut seen = std::collections::HashMap::new();
    let mut x = n % m;
    let mut step = 1u64;
    loop {
        if let Some(&first) = seen.get(&x) {
            return DynStruct {
                tail: first - 1,
                period: step - first,
            };
        }
        seen.insert(x, step);
        x = x * (n % m) % m;
        step += 1;
    }
}

/// Multiplicative order of n mod M (requires gcd(n, M) = 1).
pub fn mult_order_mod(n: u64, m: u64) -> Result<u64, NumError> {
    if m == 0 || gcd(n % m.max(1), m) != 1 {
        return Err(NumError::NotCoprime { n, m });
    }
    if m == 1 {
        return Ok(1);
    }
    let phi = euler_phi(m);
    let mut t = phi;
    for (r, _) in factorize(phi) {
        while t.is_multiple_of(r) && pow_mod(n, t / r, m) == 1 {
            t /= r;
        }
    }
    Ok(t)
}

pub fn pow_mod(n: u64, mut e: u64, m: u64) -> u64 {
    let mut base = (n % m) as u128;
    let mut acc = 1u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Smallest generator of the cyclic unit group mod p^e. Errors on 2^e with
/// e >= 3, where the unit group is not cyclic.
pub fn unit_group_generator(p: u64, e: u32) -> Result<u64, NumError> {
    if p == 2 && e >= 3 {
        return Err(NumError::NoGeneratorFound(e));
    }
    let m = p.pow(e);
    let phi = euler_phi(m);
    let factors = factorize(phi);
    'outer: for g in 2..m {
        if gcd(g, m) != 1 {
            continue;
        }
        for &(r, _) in &factors {
            if pow_mod(g, phi / r, m) == 1 {
                continue 'outer;
            }
        }
        return Ok(g);
    }
    // m in {1, 2} fall through: the unit group is trivial
    Ok(1)
}

/// Per-factor congruence target of the maximal-period construction.
struct FactorPlan {
    prime: u64,
    modulus: u64,
    residue: u64,
    order: u64,
}

/// Factor plan before any generator squaring: 2-part gets 1 + 2^k' (or 1
/// when m is odd — the k' = 0 case of the period formula carries no 2-part
/// term), primes dividing m get 1 + p^e', the rest get a generator.
fn plan_factors(m: u64, pi: u64) -> Result<Vec<FactorPlan>, NumError> {
    let m_factors = factorize(m);
    let mut plans = Vec::new();
    for (p, e) in factorize(pi) {
        let pe = p.pow(e);
        let residue = if p == 2 {
            let kp = m.trailing_zeros();
            if kp >= 1 {
                (1 + (1u64 << kp)) % pe
            } else {
                1
            }
        } else if let Some(&(_, ep)) = m_factors.iter().find(|&&(r, _)| r == p) {
            (1 + p.pow(ep)) % pe
        } else {
            unit_group_generator(p, e)?
        };
        let order = mult_order_mod(residue.max(1), pe)?;
        plans.push(FactorPlan {
            prime: p,
            modulus: pe,
            residue,
            order,
        });
    }
    Ok(plans)
}

/// The lcm the maximal-period formula predicts for the constructed degree,
/// from the order m of alpha and the period pi(alpha).
pub fn predicted_max_period(m: u64, pi: u64) -> u64 {
    let mut terms = vec![1u64];
    let k = pi.trailing_zeros();
    let kp = m.trailing_zeros();
    if k > 0 && kp >= 1 {
        let shift = if kp > 1 { k - kp } else { k.saturating_sub(2) };
        terms.push(1u64 << shift);
    }
    for (p, e) in factorize(pi) {
        if p == 2 {
            continue;
        }
        if m.is_multiple_of(p) {
            let ep = factorize(m)
                .iter()
                .find(|&&(r, _)| r == p)
                .map(|&(_, e)| e)
                .unwrap();
            terms.push(p.pow(e - ep));
        } else {
            terms.push(euler_phi(p.pow(e)));
        }
    }
    lcm_list(&terms)
}

/// Builds a maximal-period degree n by CRT over the prime-power factors
/// of pi(alpha). The returned n satisfies alpha^n = alpha (i.e.
/// n = 1 mod m) and gcd(n, pi) = 1.
///
/// The proof replaces the first q+1-side generator by its square (and the
/// first q-1-side one too when alpha = 1) to keep q and -1 out of <n>; the
/// replacement is applied only when it preserves the lcm of the factor
/// orders, which is the condition the proof's argument actually needs.
pub fn construct_max_period_n(q: u64, m: u64, pi: u64) -> Result<u64, NumError> {
    let mut plans = plan_factors(m, pi)?;
    let target = lcm_list(&plans.iter().map(|p| p.order).collect::<Vec<_>>());
    let mut squared_qplus = false;
    let mut squared_qminus = false;
    for i in 0..plans.len() {
        let p = plans[i].prime;
        if p == 2 || m.is_multiple_of(p) {
            continue;
        }
        let qminus_side = (q - 1).is_multiple_of(p);
        let wants_square = if qminus_side {
            m == 1 && !squared_qminus
        } else {
            !squared_qplus
        };
        if !wants_square {
            continue;
        }
        let g2 = plans[i].residue * plans[i].residue % plans[i].modulus;
        let ord2 = mult_order_mod(g2.max(1), plans[i].modulus)?;
        let others: Vec<u64> = plans
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, pl)| pl.order)
            .collect();
        if lcm(lcm_list(&others), ord2) == target {
            plans[i].residue = g2;
            plans[i].order = ord2;
        }
        if qminus_side {
            squared_qminus = true;
        } else {
            squared_qplus = true;
        }
    }
    let mut n: u64 = 1;
    let mut modulus: u64 = 1;
    for p in &plans {
        n = crt2(n as i64, modulus, p.residue as i64, p.modulus)?;
        modulus = lcm(modulus, p.modulus);
    }
    if n == 0 {
        n = modulus;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn binom_exact_spots() {
        assert_eq!(binom_exact(4, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(binom_exact(7, 7).unwrap(), BigUint::one());
        assert_eq!(binom_exact(119, 1).unwrap(), BigUint::from(119u32));
        assert_eq!(binom_exact(3, 5).unwrap(), BigUint::zero());
        assert!(matches!(
            binom_exact(1 << 21, 2),
            Err(NumError::Overflow(_))
        ));
    }

    #[test]
    fn lucas_spots() {
        assert_eq!(binom_mod_p(12, 0, 3, 1), 1);
        assert_eq!(binom_mod_p(12, 5, 3, 1), 0); // 792 = 0 mod 3
        assert_eq!(binom_mod_p(12, 5, 3, 2), 0);
    }

    #[test]
    fn lucas_agrees_with_exact_oracle() {
        // exact big integers are cheap at this range; the full 10^6-scale
        // corpus runs in the acceptance suite with a p-adic unit oracle
        let mut rng = StdRng::seed_from_u64(0x1ca5);
        for p in [2u64, 3, 5, 7, 11] {
            for s in 1..=3u32 {
                for _ in 0..400 {
                    let m = rng.random_range(0..3_000u64);
                    let n = rng.random_range(0..3_000u64);
                    let exact = binom_exact(m, n).unwrap() % BigUint::from(p);
                    let exact: u64 = exact.try_into().unwrap();
                    assert_eq!(binom_mod_p(m, n, p, s), exact, "C({m},{n}) mod {p} (s={s})");
                }
            }
        }
    }

    #[test]
    fn find_k_matches_lemma() {
        assert_eq!(find_k(2, 4).unwrap(), 0);
        assert_eq!(gcd(2, 15), 1);
        assert_eq!(find_k(1, 3).unwrap(), 0);
        assert!(find_k(0, 3).is_err());
        assert!(find_k(3, 3).is_err());
        for n in 2..=300u64 {
            for m in 1..n {
                let k = find_k(m, n).unwrap();
                let g = gcd(m + k * (n - 1), n * n - 1);
                assert_eq!((n - 1) % g, 0, "M={m} N={n} k={k}");
            }
        }
    }

    #[test]
    fn crt_spots() {
        assert_eq!(crt2(1, 4, 1, 6).unwrap(), 1);
        assert_eq!(crt2(0, 8, 0, 12).unwrap(), 0);
        // n = 1 mod (q-1), n = -1 mod (q+1) for q = 5 gives n = q
        assert_eq!(crt2(1, 4, -1, 6).unwrap(), 5);
        assert_eq!(crt2(1, 4, 0, 6), Err(NumError::Inconsistent));
    }

    #[test]
    fn dyn_structure_spots() {
        assert_eq!(dyn_structure_int(5, 12), DynStruct { tail: 0, period: 2 });
        assert_eq!(dyn_structure_int(2, 8), DynStruct { tail: 2, period: 1 });
        // coprime case: tail 0 and period = multiplicative order
        for m in 2..60u64 {
            for n in 1..m {
                if gcd(n, m) == 1 {
                    let d = dyn_structure_int(n, m);
                    assert_eq!(d.tail, 0);
                    assert_eq!(d.period, mult_order_mod(n, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn dyn_structure_minimality_brute() {
        for m in 1..=200u64 {
            for n in 0..m.min(50) {
                let d = dyn_structure_int(n, m);
                // brute force the lexicographically smallest (l, k)
                let mut found = None;
                'search: for l in 0..=d.tail {
                    for k in 1..=(d.period + d.tail + 2) {
                        if pow_mod(n, l + 1, m) == pow_mod(n, l + 1 + k, m) {
                            found = Some((l, k));
                            break 'search;
                        }
                    }
                }
                assert_eq!(found, Some((d.tail, d.period)), "n={n} M={m}");
            }
        }
    }

    #[test]
    fn orders_and_phi() {
        assert_eq!(mult_order_mod(7, 12).unwrap(), 2);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(lcm_list(&[4, 6]), 12);
        assert!(mult_order_mod(4, 12).is_err());
    }

    #[test]
    fn max_period_constructions() {
        // q=3, alpha=1: pi = 8, m = 1; the formula has no terms
        let n = construct_max_period_n(3, 1, 8).unwrap();
        assert_eq!(predicted_max_period(1, 8), 1);
        assert_eq!(mult_order_mod(n, 8).unwrap(), 1);
        // q=2, alpha=1: pi = 3 and n = 2 realizes order phi(3) = 2
        let n = construct_max_period_n(2, 1, 3).unwrap();
        assert_eq!(n, 2);
        assert_eq!(mult_order_mod(n, 3).unwrap(), 2);
        assert_eq!(predicted_max_period(1, 3), 2);
        // q=5, alpha=4: m=2, pi=12; odd n with the predicted order
        let n = construct_max_period_n(5, 2, 12).unwrap();
        assert_eq!(n % 2, 1);
        assert_eq!(gcd(n, 12), 1);
        assert_eq!(mult_order_mod(n, 12).unwrap(), predicted_max_period(2, 12));
        // invariants across a grid of (q, m, pi) triples from real fields
        for (q, pi_all) in [(3u64, 8u64), (5, 24), (7, 48), (9, 80), (4, 15), (8, 63)] {
            for m in 1..q {
                if (q - 1) % m != 0 {
                    continue;
                }
                let pi = pi_all; // nonsquare-style period
                let n = construct_max_period_n(q, m, pi).unwrap();
                assert_eq!(gcd(n, pi), 1, "q={q} m={m}");
                assert_eq!(
                    n % m.max(1),
                    1 % m.max(1),
                    "alpha^n = alpha needs n = 1 mod m"
                );
            }
        }
    }

    #[test]
    fn generator_errors_on_noncyclic() {
        assert_eq!(
            unit_group_generator(2, 3),
            Err(NumError::NoGeneratorFound(3))
        );
        assert_eq!(unit_group_generator(3, 2).unwrap(), 2);
        assert_eq!(unit_group_generator(2, 2).unwrap(), 3);
    }
}
