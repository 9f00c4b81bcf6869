//! Arithmetic in GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`; the base-p digits of the
//! encoding are the coefficients `(c_0, ..., c_{m-1})` of the residue
//! polynomial modulo the field's modulus. Multiplication, inversion and the
//! quadratic character go through discrete-log tables built once per field.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldCtx::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Field orders up to this bound (with `m > 1`) get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

const NO_ROOT: u32 = u32::MAX;

/// A field element, stored as its base-p encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shared handle to a field; matrices and forms keep one of these.
pub type Field = Arc<FieldCtx>;

/// A concrete finite field GF(p^m) with a fixed monic irreducible modulus.
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    gamma: Option<Felt>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    sqrt: Vec<u32>,
    trace: Vec<u32>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("gamma", &self.gamma)
            .finish()
    }
}

/// Wire form of a field: `{"p":…, "m":…, "modulus":[c_0, …, c_m]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

fn digits(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `modulus` over GF(p).
fn poly_rem(a: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - deg;
            for (i, &c) in modulus[..deg].iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=m/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 0 || modulus[m] != 1 {
        return false;
    }
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut factor = digits(code as u32, p, d as u32);
            factor.push(1);
            if poly_rem(modulus, &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `m`, scanning the lower
/// coefficients `(c_0, …, c_{m-1})` in order of their base-p encoding.
pub fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut poly = digits(code as u32, p, m);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// GF(p^m) with the least monic irreducible modulus.
    pub fn new(p: u64, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadParams(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::Overflow(p.saturating_pow(m)))?;
        let modulus = least_irreducible(p as u32, m);
        Ok(Arc::new(Self::build(p as u32, m, q as u32, modulus)))
    }

    /// The field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p as u64, m)
    }

    /// GF(p^m) with an explicitly supplied modulus (checked for irreducibility).
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::BadParams(
                "modulus must have degree at least 1".into(),
            ));
        }
        let m = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::Overflow(p.saturating_pow(m)))?;
        if modulus.iter().any(|&c| c as u64 >= p) || !is_irreducible(&modulus, p as u32) {
            return Err(Error::BadParams(format!(
                "{modulus:?} is not a monic irreducible modulus"
            )));
        }
        Ok(Arc::new(Self::build(p as u32, m, q as u32, modulus)))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let field = Self::with_modulus(spec.p as u64, spec.modulus.clone())?;
        if field.m != spec.m {
            return Err(Error::Malformed(format!(
                "m = {} disagrees with a modulus of degree {}",
                spec.m, field.m
            )));
        }
        Ok(field)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let mut exp = vec![0u32; qs];
        let mut log = vec![0u32; qs];
        // primitive element: first g whose powers reach every nonzero element
        'search: for g in 1..q {
            let gd = digits(g, p, m);
            let mut cur = digits(1, p, m);
            let mut seen = vec![false; qs];
            for i in 0..(q - 1) {
                let v = undigits(&cur, p);
                if seen[v as usize] {
                    continue 'search;
                }
                seen[v as usize] = true;
                exp[i as usize] = v;
                log[v as usize] = i;
                cur = poly_mulmod(&cur, &gd, &modulus, p);
            }
            break;
        }
        exp[qs - 1] = exp[0];

        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let d: Vec<u32> = digits(v, p, m).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p)
            })
            .collect();

        let add_table = (m > 1 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; qs * qs];
            for a in 0..q {
                let da = digits(a, p, m);
                for b in 0..q {
                    let db = digits(b, p, m);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p) as u16;
                }
            }
            t
        });

        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            gamma: None,
            exp,
            log,
            neg,
            add_table,
            sqrt: vec![NO_ROOT; qs],
            trace: vec![0; qs],
        };

        for y in (0..q).rev() {
            let s = ctx.mul(Felt(y), Felt(y)).0 as usize;
            ctx.sqrt[s] = y;
        }
        for x in 0..q {
            let mut acc = Felt::ZERO;
            let mut term = Felt(x);
            for _ in 0..m {
                acc = ctx.add(acc, term);
                term = ctx.pow(term, p as u64);
            }
            ctx.trace[x as usize] = acc.0;
        }
        if q % 2 == 1 {
            ctx.gamma = (1..q).map(Felt).find(|&x| !ctx.is_square(x));
        }
        ctx
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    /// The element with encoding `value`, rejecting out-of-range values.
    pub fn element(&self, value: u64) -> Result<Felt> {
        if value < self.q as u64 {
            Ok(Felt(value as u32))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Felt {
        Felt(v.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficient vector `(c_0, …, c_{m-1})` of an element.
    pub fn coefficients(&self, a: Felt) -> Vec<u32> {
        digits(a.0, self.p, self.m)
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.q).map(Felt)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Felt> {
        (1..self.q).map(Felt)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        if self.m == 1 {
            let s = a.0 + b.0;
            return Felt(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => Felt(t[(a.0 * self.q + b.0) as usize] as u32),
            None => {
                let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
                for _ in 0..self.m {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                Felt(out)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        Felt(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.0 == 0 || b.0 == 0 {
            return Felt::ZERO;
        }
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        let order = self.q - 1;
        Felt(self.exp[(if e >= order { e - order } else { e }) as usize])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(Felt(
            self.exp[((order - self.log[a.0 as usize]) % order) as usize],
        ))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// True iff `x = y^2` for some `y`; zero counts as a square.
    pub fn is_square(&self, x: Felt) -> bool {
        if x.is_zero() || !self.is_odd() {
            return true;
        }
        self.pow(x, ((self.q - 1) / 2) as u64) == Felt::ONE
    }

    /// The least square root of `x` in encoding order, if one exists.
    pub fn sqrt(&self, x: Felt) -> Option<Felt> {
        let r = self.sqrt[x.0 as usize];
        (r != NO_ROOT).then_some(Felt(r))
    }

    /// The least non-square in encoding order.
    pub fn canonical_nonsquare(&self) -> Result<Felt> {
        self.gamma.ok_or(Error::EvenField)
    }

    pub fn gamma(&self) -> Option<Felt> {
        self.gamma
    }

    /// Absolute trace `x + x^p + … + x^{p^{m-1}}`, an element of GF(p).
    #[inline]
    pub fn trace(&self, x: Felt) -> Felt {
        Felt(self.trace[x.0 as usize])
    }

    /// The canonical additive character `exp(2πi·Tr(x)/p)`.
    pub fn psi<T: Float + FloatConst>(&self, x: Felt) -> Complex<T> {
        let t = T::from(self.trace(x).0).unwrap();
        let p = T::from(self.p).unwrap();
        Complex::from_polar(T::one(), T::TAU() * t / p)
    }

    /// Errors with [`Error::MixedFields`] unless both handles describe the same field.
    pub fn same_field(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
        if std::ptr::eq(a, b) || a == b {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
}
