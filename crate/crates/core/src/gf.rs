//! Small finite fields GF(p^m) in polynomial representation.
//!
//! An element is stored as its integer code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! where `c_0 + c_1 x + ...` is the residue modulo the field's modulus. Code
//! order is the canonical element order (zero first), and serialization writes
//! the `m` base-p digits least-significant first.
//!
//! Multiplication goes through exp/log tables built once per field, so the
//! raw [`Fe`] API on [`Field`] is cheap enough for matrix work. [`Felt`] is the
//! checked, field-tagged wrapper.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("modulus is not monic")]
    ModulusNotMonic,
    #[error("coefficient {coeff} is not a residue mod {p}")]
    CoefficientOutOfRange { coeff: u32, p: u32 },
    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a valid Frobenius base for this field")]
    InvalidFrobeniusBase(u64),
    #[error("invalid field descriptor {0:?}")]
    InvalidDescriptor(String),
    #[error("invalid element digit string {0:?}")]
    InvalidElement(String),
    #[error("element code {0} out of range")]
    ElementOutOfRange(u32),
}

pub type Result<T> = std::result::Result<T, GfError>;

/// Raw element code. Only meaningful together with the [`Field`] it came from.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for a fixed primitive g, doubled so log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// A validated finite field. Cloning is cheap; all clones compare equal.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]", self.q(), self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
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

/// Splits `q` as `p^m`, returning `None` if it is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, m))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first, trimmed.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Irreducibility by trial division over every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut x = lower;
            for _ in 0..d {
                div.push((x % p as u64) as u32);
                x /= p as u64;
            }
            div.push(1);
            if poly_rem(modulus, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Canonical modulus for GF(p^m): the monic irreducible polynomial of degree `m`
/// with the smallest code `sum c_i p^i`.
pub fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    if let Some(known) = SHIPPED_MODULI
        .iter()
        .find(|(kp, km, _)| *kp == p && *km == m)
    {
        return known.2.to_vec();
    }
    search_canonical_modulus(p, m)
}

/// Moduli for the fields the tools use most, fixed so encodings never drift.
const SHIPPED_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
];

pub(crate) fn search_canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for lower in 0..count {
        let mut poly = Vec::with_capacity(m as usize + 1);
        let mut x = lower;
        for _ in 0..m {
            poly.push((x % p as u64) as u32);
            x /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// One base-36 character per digit when `p <= 36`, otherwise decimal digits
/// joined by `.`.
fn write_digits(digits: &[u32], p: u32) -> String {
    if p <= 36 {
        digits.iter().map(|&d| std::char::from_digit(d, 36).expect("digit below 36")).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn read_digits(s: &str, p: u32) -> Option<Vec<u32>> {
    let digits: Option<Vec<u32>> = if p <= 36 {
        s.chars().map(|c| c.to_digit(36)).collect()
    } else {
        s.split('.').map(|t| t.parse().ok()).collect()
    };
    digits.filter(|ds| ds.iter().all(|&d| d < p))
}

impl Field {
    /// Builds GF(p^m) from a modulus given lowest coefficient first.
    pub fn new(p: u32, m: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GfError::FieldTooLarge((p as u64).saturating_pow(m)))?;
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(GfError::CoefficientOutOfRange { coeff: c, p });
        }
        let trimmed = trim(modulus.to_vec());
        if trimmed.len() != m as usize + 1 {
            return Err(GfError::DegreeMismatch {
                expected: m,
                found: trimmed.len().saturating_sub(1),
            });
        }
        if trimmed[m as usize] != 1 {
            return Err(GfError::ModulusNotMonic);
        }
        if !is_irreducible(&trimmed, p) {
            return Err(GfError::ReducibleModulus(p));
        }
        Ok(Field(Arc::new(Inner::build(p, m, q as u32, trimmed))))
    }

    /// GF(p^m) with the canonical modulus.
    pub fn canonical(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        if (p as u64).saturating_pow(m) > MAX_ORDER {
            return Err(GfError::FieldTooLarge((p as u64).saturating_pow(m)));
        }
        Field::new(p, m, &canonical_modulus(p, m))
    }

    /// Canonical field with `q` elements.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Field::canonical(p, m)
    }

    /// Parses a descriptor such as `2^2/111` (modulus digits lowest first).
    pub fn from_descriptor(s: &str) -> Result<Field> {
        let bad = || GfError::InvalidDescriptor(s.to_string());
        let (pm, digits) = s.trim().split_once('/').ok_or_else(bad)?;
        let (p, m) = pm.split_once('^').ok_or_else(bad)?;
        let p: u32 = p.parse().map_err(|_| bad())?;
        let m: u32 = m.parse().map_err(|_| bad())?;
        let modulus = read_digits(digits, p).ok_or_else(bad)?;
        Field::new(p, m, &modulus)
    }

    pub fn descriptor(&self) -> String {
        let digits = write_digits(&self.0.modulus, self.0.p);
        format!("{}^{}/{}", self.0.p, self.0.m, digits)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Number of elements.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn element(&self, code: u32) -> Result<Fe> {
        if code < self.0.q {
            Ok(Fe(code))
        } else {
            Err(GfError::ElementOutOfRange(code))
        }
    }

    /// Embeds an integer through the prime field.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut x = a.0;
        (0..self.0.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() != self.0.m as usize {
            return Err(GfError::InvalidElement(format!("{coeffs:?}")));
        }
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(GfError::CoefficientOutOfRange { coeff: c, p: self.0.p });
            }
            code = code * self.0.p + c;
        }
        Ok(Fe(code))
    }

    /// Base-p digits, least significant first.
    pub fn to_digits(&self, a: Fe) -> String {
        write_digits(&self.coeffs(a), self.0.p)
    }

    pub fn parse_digits(&self, s: &str) -> Result<Fe> {
        let bad = || GfError::InvalidElement(s.to_string());
        let coeffs = read_digits(s, self.0.p).ok_or_else(bad)?;
        if coeffs.len() != self.0.m as usize {
            return Err(bad());
        }
        self.from_coeffs(&coeffs)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        if inner.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        match &inner.add {
            Some(t) => Fe(t[(a.0 * inner.q + b.0) as usize]),
            None => Fe(inner.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        Fe(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize];
        Ok(Fe(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        let order = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64 * (e % order) % order;
        Fe(inner.exp[l as usize])
    }

    /// Lookup table for `x -> c * x`, used by row operations.
    pub fn mul_table(&self, c: Fe) -> Vec<Fe> {
        self.elements().map(|x| self.mul(c, x)).collect()
    }

    /// `a^{q0}` where `q0` is one of `p, p^2, ..., q`.
    pub fn frobenius(&self, a: Fe, q0: u64) -> Result<Fe> {
        let p = self.0.p as u64;
        let valid = (1..=self.0.m).any(|e| p.pow(e) == q0);
        if !valid {
            return Err(GfError::InvalidFrobeniusBase(q0));
        }
        Ok(self.pow(a, q0))
    }
}

impl Inner {
    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Inner {
        let decode = |mut x: u32| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mul_poly = |a: u32, b: u32| -> u32 {
            let (ca, cb) = (decode(a), decode(b));
            let mut prod = vec![0u32; 2 * m as usize];
            for (i, &x) in ca.iter().enumerate() {
                for (j, &y) in cb.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(m as usize, 0);
            encode(&r)
        };

        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp = vec![1, 1];
        } else {
            'search: for g in 2..q {
                let mut x = 1u32;
                for i in 0..order {
                    exp[i as usize] = x;
                    x = mul_poly(x, g);
                    if x == 1 && i + 1 < order {
                        continue 'search;
                    }
                }
                break;
            }
            for i in 0..order as usize {
                exp[order as usize + i] = exp[i];
            }
        }
        for i in 0..order {
            log[exp[i as usize] as usize] = i;
        }

        let neg = (0..q)
            .map(|x| encode(&decode(x).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();
        let mut inner = Inner { p, m, q, modulus, exp, log, neg, add: None };
        if p != 2 && q <= 256 {
            let table = (0..q * q)
                .map(|i| inner.add_digits(i / q, i % q))
                .collect();
            inner.add = Some(table);
        }
        inner
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }
}

/// A field element tagged with its field; arithmetic checks the tags.
#[derive(Clone, PartialEq, Eq)]
pub struct Felt {
    field: Field,
    value: Fe,
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Felt({})", self.field.to_digits(self.value))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Felt {
    pub fn new(field: &Field, value: Fe) -> Result<Felt> {
        field.element(value.0)?;
        Ok(Felt { field: field.clone(), value })
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Felt> {
        Ok(Felt { field: field.clone(), value: field.from_coeffs(coeffs)? })
    }

    pub fn zero(field: &Field) -> Felt {
        Felt { field: field.clone(), value: Fe::ZERO }
    }

    pub fn one(field: &Field) -> Felt {
        Felt { field: field.clone(), value: Fe::ONE }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn arith(&self, op: ArithOp, rhs: &Felt) -> Result<Felt> {
        fe_arith(op, self, rhs)
    }

    pub fn inv(&self) -> Result<Felt> {
        Ok(Felt { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn frobenius(&self, q0: u64) -> Result<Felt> {
        Ok(Felt { field: self.field.clone(), value: self.field.frobenius(self.value, q0)? })
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.to_digits(self.value))
    }
}

pub fn fe_arith(op: ArithOp, x: &Felt, y: &Felt) -> Result<Felt> {
    if x.field != y.field {
        return Err(GfError::FieldMismatch);
    }
    let f = &x.field;
    let value = match op {
        ArithOp::Add => f.add(x.value, y.value),
        ArithOp::Sub => f.sub(x.value, y.value),
        ArithOp::Mul => f.mul(x.value, y.value),
        ArithOp::Div => f.div(x.value, y.value)?,
    };
    Ok(Felt { field: f.clone(), value })
}
