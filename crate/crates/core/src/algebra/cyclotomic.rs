//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are stored as rational coefficient vectors in the power basis
//! 1, zeta, ..., zeta^(phi(m)-1) after reduction modulo the m-th cyclotomic
//! polynomial. Within a fixed conductor the representation is a canonical
//! normal form, so equality of values is decidable by comparing vectors;
//! elements of different conductors are compared after lifting both into
//! Q(zeta_lcm). Values that happen to be rational are demoted to conductor 1,
//! which keeps the common all-rational computations cheap.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use super::{rat, Rat};

/// Euler totient.
pub fn phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(m: u32) -> Vec<u32> {
    let mut ds = Vec::new();
    for d in 1..=m {
        if m % d == 0 {
            ds.push(d);
        }
    }
    ds
}

/// Quotient of polynomial division `num / den` over Q, requiring exactness.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    let dn = den.len() - 1;
    assert!(!den[dn].is_zero());
    let qn = rem.len().saturating_sub(1).saturating_sub(dn);
    let mut quot = vec![Rat::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = &rem[k + dn] / &den[dn];
        if !c.is_zero() {
            for j in 0..=dn {
                let t = &c * &den[j];
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

static CYCLO_CACHE: Lazy<Mutex<HashMap<u32, Vec<Rat>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The m-th cyclotomic polynomial as a dense coefficient vector (monic).
pub fn cyclotomic_poly(m: u32) -> Vec<Rat> {
    if let Some(p) = CYCLO_CACHE.lock().unwrap().get(&m) {
        return p.clone();
    }
    let p = if m == 1 {
        vec![rat(-1), rat(1)]
    } else {
        // x^m - 1 divided by the product of Phi_d over proper divisors d of m
        let mut num = vec![Rat::zero(); m as usize + 1];
        num[0] = rat(-1);
        num[m as usize] = rat(1);
        let mut den = vec![rat(1)];
        for d in divisors(m) {
            if d < m {
                let f = cyclotomic_poly(d);
                den = poly_mul(&den, &f);
            }
        }
        poly_div_exact(&num, &den)
    };
    CYCLO_CACHE.lock().unwrap().insert(m, p.clone());
    p
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Reduce a dense polynomial in zeta_m modulo Phi_m to length phi(m).
fn reduce_mod_cyclotomic(m: u32, mut poly: Vec<Rat>) -> Vec<Rat> {
    let d = phi(m) as usize;
    let f = cyclotomic_poly(m);
    while poly.len() > d {
        let k = poly.len() - 1;
        let c = poly[k].clone();
        poly.pop();
        if !c.is_zero() {
            // zeta^k = -c * (lower terms of Phi) * zeta^(k-d)
            for j in 0..d {
                let t = &c * &f[j];
                poly[k - d + j] -= t;
            }
        }
    }
    poly.resize(d, Rat::zero());
    poly
}

/// An element of Q(zeta_m) in canonical reduced form.
#[derive(Clone)]
pub struct Cyc {
    m: u32,
    c: Vec<Rat>,
}

impl Cyc {
    fn make(m: u32, coeffs: Vec<Rat>) -> Self {
        let c = reduce_mod_cyclotomic(m, coeffs);
        let mut out = Cyc { m, c };
        out.demote();
        out
    }

    /// Canonicalize a raw coefficient vector: reduce mod Phi_m, demote
    /// rational values to conductor 1. Idempotent.
    pub fn normalize(m: u32, raw: Vec<Rat>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        Self::make(m, raw)
    }

    fn demote(&mut self) {
        if self.m > 1 && self.c.iter().skip(1).all(|x| x.is_zero()) {
            self.c.truncate(1);
            self.m = 1;
        }
        if self.c.is_empty() {
            self.c.push(Rat::zero());
        }
    }

    pub fn zero() -> Self {
        Cyc { m: 1, c: vec![Rat::zero()] }
    }

    pub fn one() -> Self {
        Cyc { m: 1, c: vec![Rat::one()] }
    }

    pub fn from_i64(n: i64) -> Self {
        Cyc { m: 1, c: vec![rat(n)] }
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyc { m: 1, c: vec![r] }
    }

    /// zeta_m^k.
    pub fn zeta(m: u32, k: i64) -> Self {
        assert!(m >= 1);
        let k = k.rem_euclid(m as i64) as usize;
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = Rat::one();
        Self::make(m, v)
    }

    /// e^(2 pi i x) for rational x: the canonical root of unity with that
    /// exponent. This is the single branch choice used for every fractional
    /// power of a phase in the crate.
    pub fn phase(x: &Rat) -> Self {
        let den = x.denom().to_u32().expect("phase denominator too large");
        let num = (x.numer() % BigInt::from(den)).to_i64().unwrap();
        Self::zeta(den, num)
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.m == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.m == 1 {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// The rational value, panicking if a nonzero cyclotomic part survives.
    /// Used where theory guarantees rationality; a panic here is a bug.
    pub fn expect_rational(&self) -> Rat {
        self.as_rational()
            .unwrap_or_else(|| panic!("value is not rational: {self}"))
            .clone()
    }

    /// Coefficient vector in the power basis of Q(zeta_target), without
    /// demoting; always has length phi(target).
    fn lift_raw(&self, target: u32) -> Vec<Rat> {
        assert!(target % self.m == 0);
        let step = (target / self.m) as usize;
        let mut v = vec![Rat::zero(); (self.c.len() - 1) * step + 1];
        for (j, cj) in self.c.iter().enumerate() {
            v[j * step] = cj.clone();
        }
        reduce_mod_cyclotomic(target, v)
    }

    /// Lift into Q(zeta_target); target must be a multiple of the conductor.
    pub fn lift_to(&self, target: u32) -> Cyc {
        Cyc::make(target, self.lift_raw(target))
    }

    fn joint(a: &Cyc, b: &Cyc) -> (Vec<Rat>, Vec<Rat>, u32) {
        let m = (a.m as u64).lcm(&(b.m as u64)) as u32;
        (a.lift_raw(m), b.lift_raw(m), m)
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (mut v, b, m) = Cyc::joint(self, other);
        for (x, y) in v.iter_mut().zip(b.iter()) {
            *x += y;
        }
        Cyc::make(m, v)
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            m: self.m,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        if self.is_zero() || other.is_zero() {
            return Cyc::zero();
        }
        if self.m == 1 {
            return other.scale(&self.c[0]);
        }
        if other.m == 1 {
            return self.scale(&other.c[0]);
        }
        let (a, b, m) = Cyc::joint(self, other);
        Cyc::make(m, poly_mul(&a, &b))
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        if r.is_zero() {
            return Cyc::zero();
        }
        let mut out = Cyc {
            m: self.m,
            c: self.c.iter().map(|x| x * r).collect(),
        };
        out.demote();
        out
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// Q[x] modulo Phi_m. Panics on zero.
    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "division by zero");
        if self.m == 1 {
            return Cyc::from_rat(self.c[0].recip());
        }
        let f = cyclotomic_poly(self.m);
        // extended euclid: find u with u*self = gcd = nonzero constant mod Phi
        let (mut r0, mut r1) = (f, self.c.clone());
        let (mut t0, mut t1) = (vec![Rat::zero()], vec![Rat::one()]);
        loop {
            trim(&mut r1);
            if r1.len() == 1 {
                break;
            }
            let (q, rem) = poly_divmod(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        assert!(!r1[0].is_zero(), "element not invertible (not coprime to Phi_m)");
        let scale = r1[0].recip();
        let inv_coeffs: Vec<Rat> = t1.iter().map(|c| c * &scale).collect();
        Cyc::make(self.m, inv_coeffs)
    }

    pub fn div(&self, other: &Cyc) -> Cyc {
        self.mul(&other.inv())
    }

    /// Complex conjugation: zeta -> zeta^(-1). A ring automorphism.
    pub fn conj(&self) -> Cyc {
        if self.m == 1 {
            return self.clone();
        }
        let m = self.m as usize;
        let mut v = vec![Rat::zero(); m];
        for (j, cj) in self.c.iter().enumerate() {
            if !cj.is_zero() {
                v[(m - j) % m] += cj;
            }
        }
        Cyc::make(self.m, v)
    }

    pub fn pow_i64(&self, e: i64) -> Cyc {
        if e == 0 {
            return Cyc::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }
}

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    let mut out = out;
    trim(&mut out);
    out
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dn = den.len() - 1;
    if rem.len() <= dn {
        return (vec![Rat::zero()], rem);
    }
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![Rat::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = &rem[k + dn] / &den[dn];
        if !c.is_zero() {
            for j in 0..=dn {
                let t = &c * &den[j];
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let (a, b, _) = Cyc::joint(self, other);
        a == b
    }
}

impl Eq for Cyc {}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{cj}")?;
            } else if j == 1 {
                write!(f, "{cj}*z{}", self.m)?;
            } else {
                write!(f, "{cj}*z{}^{}", self.m, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait for &Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &Cyc) -> Cyc {
                Cyc::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: Cyc) -> Cyc {
                Cyc::$inner(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Cyc> for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &Cyc) -> Cyc {
                Cyc::$inner(&self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, add);
impl_binop!(Sub, sub, sub);
impl_binop!(Mul, mul, mul);
impl_binop!(Div, div, div);

impl std::ops::Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc::neg(self)
    }
}

impl std::ops::Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc::neg(&self)
    }
}

impl std::ops::AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        *self = Cyc::add(self, rhs);
    }
}
