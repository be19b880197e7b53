//! Exact arithmetic in cyclotomic fields Q(zeta_M).
//!
//! Elements are stored as coefficient vectors in the power basis
//! `1, z, ..., z^(phi(M)-1)` with `z = exp(2 pi i / M)`, reduced modulo the
//! M-th cyclotomic polynomial. Because that polynomial is the minimal
//! polynomial of `z`, the reduced vector is canonical and equality is a plain
//! coefficient comparison.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, usage, Result};

pub type Rational = BigRational;

/// `n/d` as a big rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `"num/den"`, the form used in every output file.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || usage(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Order of the coefficient field used for modulus `a`: `lcm(4, 2a^2)`.
///
/// The field then holds `i`, `omega_a = exp(pi i / a)`, `xi_a = exp(2 pi i / a)`
/// and the `4a`-th roots of unity that appear in the change of variables.
pub fn field_for(a: u32) -> u32 {
    assert!(a >= 1, "modulus must be positive");
    let two_a2 = 2 * a * a;
    4u32.lcm(&two_a2)
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_int_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    debug_assert_eq!(lead.abs(), 1);
    let qlen = rem.len() - dd;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// The field Q(zeta_M) with its reduction data.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    degree: usize,
    /// Monic cyclotomic polynomial, lowest degree first, length `degree + 1`.
    modulus: Vec<i64>,
    /// `z^k` reduced, for `0 <= k < order`.
    powers: Vec<Vec<i64>>,
}

impl CycloField {
    pub fn new(order: u32) -> Arc<CycloField> {
        assert!(order >= 1, "field order must be positive");
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by z
            let top = cur[degree - 1];
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..degree {
                    cur[j] -= top * modulus[j];
                }
            }
        }
        Arc::new(CycloField { order, degree, modulus, powers })
    }

    /// Field for the change of variables at modulus `a`.
    pub fn for_modulus(a: u32) -> Arc<CycloField> {
        CycloField::new(field_for(a))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Dimension of the field over Q, i.e. Euler's phi of the order.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

/// An element of Q(zeta_M).
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(field: &Arc<CycloField>) -> CycloNum {
        CycloNum { field: field.clone(), coeffs: vec![Rational::zero(); field.degree] }
    }

    pub fn one(field: &Arc<CycloField>) -> CycloNum {
        CycloNum::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<CycloField>, r: Rational) -> CycloNum {
        let mut x = CycloNum::zero(field);
        x.coeffs[0] = r;
        x
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> CycloNum {
        CycloNum::from_rational(field, int(n))
    }

    /// Builds an element from power-basis coefficients of any length,
    /// reducing modulo the cyclotomic polynomial.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<Rational>) -> CycloNum {
        let mut acc = CycloNum::zero(field);
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &field.powers[k % field.order as usize];
            for (j, &pj) in p.iter().enumerate() {
                if pj != 0 {
                    acc.coeffs[j] += &c * BigInt::from(pj);
                }
            }
        }
        acc
    }

    /// `zeta_M^k` for any integer `k`.
    pub fn root_of_unity(field: &Arc<CycloField>, k: i64) -> CycloNum {
        let m = field.order as i64;
        let idx = k.rem_euclid(m) as usize;
        CycloNum { field: field.clone(), coeffs: field.powers[idx].iter().map(|&c| int(c)).collect() }
    }

    /// `zeta_n^k`, embedded through `zeta_n = zeta_M^(M/n)`. Requires `n | M`.
    pub fn zeta(field: &Arc<CycloField>, n: u32, k: i64) -> Result<CycloNum> {
        if n == 0 || !field.order.is_multiple_of(n) {
            return Err(usage(format!("zeta_{n} does not embed in Q(zeta_{})", field.order)));
        }
        Ok(CycloNum::root_of_unity(field, k * (field.order / n) as i64))
    }

    /// Image under `zeta_m -> zeta_M^(M/m)`; requires `m | M`.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<CycloNum> {
        let (m, big) = (self.field.order, target.order);
        if big % m != 0 {
            return Err(usage(format!("Q(zeta_{m}) does not embed in Q(zeta_{big})")));
        }
        let step = i64::from(big / m);
        let mut out = CycloNum::zero(target);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += &CycloNum::root_of_unity(target, k as i64 * step).scale(c);
            }
        }
        Ok(out)
    }

    /// `sqrt(-1)^k`.
    pub fn i_pow(field: &Arc<CycloField>, k: i64) -> CycloNum {
        CycloNum::zeta(field, 4, k).expect("every field in use contains i")
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational if it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> CycloNum {
        CycloNum { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, n: i64) -> Result<CycloNum> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CycloNum::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over Q[x].
    pub fn inv(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(domain("inverse of zero"));
        }
        let f = trim(self.coeffs.clone());
        let m: Vec<Rational> = self.field.modulus.iter().map(|&c| int(c)).collect();
        // invariant: s_k * f == r_k (mod m)
        let (mut r0, mut r1) = (m, f);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since the modulus is irreducible
        let c = r1[0].clone();
        debug_assert!(!c.is_zero());
        let s: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(CycloNum::from_coeffs(&self.field, s))
    }

    fn same_field(&self, other: &CycloNum) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order,
            "mixing Q(zeta_{}) and Q(zeta_{})",
            self.field.order,
            other.field.order
        );
    }

    /// Re-reduction of an already canonical value; the identity map.
    pub fn reduced(&self) -> CycloNum {
        CycloNum::from_coeffs(&self.field, self.coeffs.clone())
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(k).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &CycloNum) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        self.same_field(rhs);
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !r.is_zero() {
                *c += r;
            }
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        self.same_field(rhs);
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !r.is_zero() {
                *c -= r;
            }
        }
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.same_field(rhs);
        let field = &self.field;
        let n = field.degree;
        // rational-only fast path
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[k], Rational::zero());
            for (j, &mj) in field.modulus[..n].iter().enumerate() {
                if mj != 0 {
                    prod[k - n + j] -= &c * BigInt::from(mj);
                }
            }
        }
        prod.truncate(n);
        CycloNum { field: field.clone(), coeffs: prod }
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[M={}]({})", self.field.order, self)
    }
}
