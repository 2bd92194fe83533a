//! Finite fields GF(p^k) in the polynomial basis.
//!
//! Elements are coefficient vectors `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! reduced modulo a monic irreducible polynomial of degree `k`. Every element
//! also has an integer *index* `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, which is
//! the enumeration order used everywhere else in the crate (element 0 is zero,
//! element 1 is one).

use crate::error::{Error, Result};

/// Default cap on field orders accepted by the plane constructions.
pub const DEFAULT_ORDER_CAP: u64 = 9;

/// Returns `Some((p, k))` when `n = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // n itself is prime
        return Some((n, 1));
    }
    let mut rest = n;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power(n).is_some()
}

/// Field description: characteristic, extension degree and reduction modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    k: usize,
    /// Monic modulus, coefficients from `x^0` up to `x^k` (so length `k + 1`).
    modulus: Vec<u32>,
}

/// A field element as a length-`k` coefficient vector, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// Builds GF(order), choosing the lexicographically smallest monic
    /// irreducible modulus (coefficients compared from `x^{k-1}` down to `x^0`).
    pub fn new(order: u64) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidInput(format!(
                "field order must be at least 2, got {order}"
            )));
        }
        let (p, k) = prime_power(order).ok_or(Error::NotPrimePower(order))?;
        let p = u32::try_from(p).map_err(|_| Error::UnsupportedOrder {
            order,
            cap: u32::MAX as u64,
        })?;
        let k = k as usize;
        let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
        Ok(FieldSpec { p, k, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Element with the given index (base-`p` digits, lowest first).
    ///
    /// Panics if `index >= order`.
    pub fn element(&self, index: u64) -> FieldElement {
        assert!(index < self.order(), "element index {index} out of range");
        let p = self.p as u64;
        let mut rest = index;
        let coeffs = (0..self.k)
            .map(|_| {
                let c = (rest % p) as u32;
                rest /= p;
                c
            })
            .collect();
        FieldElement { coeffs }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Builds an element from arbitrary coefficients, reducing them mod p.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        Ok(FieldElement {
            coeffs: coeffs.iter().map(|&c| c % self.p).collect(),
        })
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| ((x as u64 + y as u64) % p as u64) as u32)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let product = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let (_, rem) = poly_divmod(&product, &self.modulus, self.p);
        self.pad(rem)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        // Invariant: s_i * a ≡ r_i (mod modulus).
        let mut r0 = trim(self.modulus.clone());
        let mut r1 = trim(a.coeffs.clone());
        let mut s0: Vec<u32> = vec![];
        let mut s1: Vec<u32> = vec![1];
        while !(r1.len() == 1 && r1[0] != 0) {
            let (q, r) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return Err(Error::InvariantViolation("modulus is not irreducible".into()));
            }
        }
        // r1 is a nonzero constant c; scale s1 by c^{-1}.
        let c_inv = mod_inverse(r1[0], p);
        let scaled: Vec<u32> = s1
            .iter()
            .map(|&s| ((s as u64 * c_inv as u64) % p as u64) as u32)
            .collect();
        let (_, rem) = poly_divmod(&scaled, &self.modulus, p);
        Ok(self.pad(rem))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Precomputed operation tables over element indices.
    pub fn tables(&self) -> FieldTables {
        let q = self.order() as usize;
        let elems: Vec<FieldElement> = self.elements().collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = self.index_of(&self.add(a, b)) as usize;
                mul[i * q + j] = self.index_of(&self.mul(a, b)) as usize;
            }
        }
        let neg = elems.iter().map(|a| self.index_of(&self.neg(a)) as usize).collect();
        let inv = elems
            .iter()
            .map(|a| self.inv(a).ok().map(|b| self.index_of(&b) as usize))
            .collect();
        let frobenius = elems
            .iter()
            .map(|a| self.index_of(&self.pow(a, self.p as u64)) as usize)
            .collect();
        FieldTables {
            q,
            p: self.p as usize,
            add,
            mul,
            neg,
            inv,
            frobenius,
        }
    }

    fn pad(&self, mut coeffs: Vec<u32>) -> FieldElement {
        coeffs.resize(self.k, 0);
        FieldElement { coeffs }
    }
}

/// Index-based operation tables for a small field.
#[derive(Debug, Clone)]
pub struct FieldTables {
    q: usize,
    p: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<Option<usize>>,
    frobenius: Vec<usize>,
}

impl FieldTables {
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        self.inv[a]
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: usize) -> usize {
        self.frobenius[a]
    }
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Polynomial long division over GF(p); `divisor` must be nonzero.
fn poly_divmod(dividend: &[u32], divisor: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let divisor = trim(divisor.to_vec());
    let mut rem = trim(dividend.to_vec());
    assert!(!divisor.is_empty(), "polynomial division by zero");
    if rem.len() < divisor.len() {
        return (vec![], rem);
    }
    let lead_inv = mod_inverse(*divisor.last().unwrap(), p) as u64;
    let mut quot = vec![0u32; rem.len() - divisor.len() + 1];
    while rem.len() >= divisor.len() {
        let shift = rem.len() - divisor.len();
        let factor = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quot[shift] = factor;
        for (i, &d) in divisor.iter().enumerate() {
            let sub = (factor as u64 * d as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p.
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `index`.
fn monic_from_index(index: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut rest = index;
    let mut coeffs: Vec<u32> = (0..deg)
        .map(|_| {
            let c = (rest % p as u64) as u32;
            rest /= p as u64;
            c
        })
        .collect();
    coeffs.push(1);
    coeffs
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let deg = poly.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..(p as u64).pow(d as u32) {
            let candidate = monic_from_index(idx, d, p);
            let (_, rem) = poly_divmod(&poly, &candidate, p);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    // The index's most significant digit is the x^{k-1} coefficient, so
    // increasing index is lexicographic order from x^{k-1} down to x^0.
    (0..(p as u64).pow(k as u32))
        .map(|idx| monic_from_index(idx, k, p))
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}
