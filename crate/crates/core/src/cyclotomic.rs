//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` reduced
//! modulo the n-th cyclotomic polynomial, so two elements of the same
//! conductor are equal iff their coefficient vectors agree. Operands with
//! different conductors are lifted to `Q(ζ_lcm)` before combining.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Precomputed data for one conductor.
pub(crate) struct CycloField {
    phi: usize,
    /// `powers[k]` = coordinates of `ζ_n^k` for `0 <= k < n`.
    powers: Vec<Vec<i64>>,
    /// Reductions of `x^k` for `k < 2φ - 1` (products of two basis elements).
    prod: Vec<Vec<i64>>,
}

fn moebius(mut n: u32) -> i32 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    let mut poly = vec![1i64];
    let mut divide = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match moebius(n / d) {
            1 => {
                // multiply by x^d - 1
                let mut out = vec![0i64; poly.len() + d as usize];
                for (i, c) in poly.iter().enumerate() {
                    out[i + d as usize] += c;
                    out[i] -= c;
                }
                poly = out;
            }
            -1 => divide.push(d),
            _ => {}
        }
    }
    for d in divide {
        // exact division by x^d - 1: synthetic division from the top
        let d = d as usize;
        let deg = poly.len() - 1;
        let mut q = vec![0i64; deg + 1 - d];
        let mut rem = poly.clone();
        for i in (d..=deg).rev() {
            let c = rem[i];
            q[i - d] = c;
            rem[i] -= c;
            rem[i - d] += c;
        }
        debug_assert!(rem.iter().all(|&c| c == 0));
        poly = q;
    }
    poly
}

impl CycloField {
    fn new(n: u32) -> Self {
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let steps = (n as usize).max(2 * phi);
        let mut all = Vec::with_capacity(steps);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..steps {
            all.push(cur.clone());
            // multiply by x and reduce with x^φ = -Σ Φ_i x^i
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..phi {
                next[i] -= top * phi_poly[i];
            }
            cur = next;
        }
        let powers = all[..n as usize].to_vec();
        let prod = all[..(2 * phi - 1).max(1)].to_vec();
        CycloField {
            phi,
            powers,
            prod,
        }
    }
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn cyclo_field(n: u32) -> Arc<CycloField> {
    let mut cache = field_cache().lock().expect("cyclotomic cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(CycloField::new(n)))
        .clone()
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// Exact element of `Q(ζ_n)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        CyclotomicNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    /// Builds an element from power-basis coordinates. The length must be φ(n).
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::Arithmetic("conductor must be positive".into()));
        }
        let f = cyclo_field(conductor);
        if coeffs.len() != f.phi {
            return Err(Error::Arithmetic(format!(
                "expected {} coefficients for conductor {}, got {}",
                f.phi,
                conductor,
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber { conductor, coeffs })
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root_of_unity needs n >= 1");
        let f = cyclo_field(n);
        let e = k.rem_euclid(n as i64) as usize;
        CyclotomicNumber {
            conductor: n,
            coeffs: f.powers[e]
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(ζ_m)`; `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u32) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        assert!(
            m % self.conductor == 0,
            "cannot lift conductor {} to {}",
            self.conductor,
            m
        );
        let f = cyclo_field(m);
        let step = (m / self.conductor) as usize;
        let mut out = vec![BigRational::zero(); f.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(i * step) % m as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CyclotomicNumber {
            conductor: m,
            coeffs: out,
        }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.conductor, b.conductor);
        (a.lift(m), b.lift(m))
    }

    /// Image under `ζ_n ↦ ζ_n^k` for `k` coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        let f = cyclo_field(n);
        let mut out = vec![BigRational::zero(); f.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as i64) * k).rem_euclid(n as i64) as usize;
            for (o, &r) in out.iter_mut().zip(&f.powers[e]) {
                if r != 0 {
                    *o += c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CyclotomicNumber {
            conductor: n,
            coeffs: out,
        }
    }

    /// Complex conjugation, `ζ_n ↦ ζ_n^{-1}`.
    pub fn conjugate(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    /// `N_{Q(ζ_n)/Q}`.
    pub fn norm(&self) -> BigRational {
        let n = self.conductor;
        let mut acc = self.clone();
        for k in 2..n as i64 {
            if (k as u32).gcd(&n) == 1 {
                acc = &acc * &self.galois(k);
            }
        }
        acc.to_rational().expect("norm is rational")
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        if let Some(r) = self.to_rational() {
            return Ok(CyclotomicNumber {
                conductor: self.conductor,
                coeffs: {
                    let mut v = vec![BigRational::zero(); self.coeffs.len()];
                    v[0] = r.recip();
                    v
                },
            });
        }
        let n = self.conductor;
        let mut others = CyclotomicNumber::one().lift(n);
        for k in 2..n as i64 {
            if (k as u32).gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others)
            .to_rational()
            .expect("product of all conjugates is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CyclotomicNumber::one().lift(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Returns `(n, k)` with `self = ζ_n^k`, `n` minimal, or `None`.
    pub fn detect_root_of_unity(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        // roots of unity in Q(ζ_c) form μ_lcm(2,c)
        let big = lcm(2, self.conductor);
        let mut divisors: Vec<u32> = (1..=big).filter(|d| big % d == 0).collect();
        divisors.sort_unstable();
        let order = divisors.into_iter().find(|&d| self.pow(d as u64).is_one())?;
        (0..order)
            .filter(|k| k.gcd(&order) == 1 || order == 1)
            .find(|&k| *self == CyclotomicNumber::root_of_unity(order, k as i64))
            .map(|k| (order, k))
    }

    /// Expresses the element in the smallest conductor that contains it.
    pub fn minimize_conductor(&self) -> Self {
        let n = self.conductor;
        for d in (1..n).filter(|d| n % d == 0) {
            // candidate in Q(ζ_d): check whether the element is fixed by Gal(Q(ζ_n)/Q(ζ_d))
            let fixed = (1..n as i64)
                .filter(|&k| (k as u32).gcd(&n) == 1 && (k as u32) % d == 1 % d)
                .all(|k| self.galois(k) == *self);
            if fixed {
                // solve by expressing in the basis of Q(ζ_d)
                if let Some(v) = self.descend(d) {
                    return v;
                }
            }
        }
        self.clone()
    }

    fn descend(&self, d: u32) -> Option<Self> {
        let fd = cyclo_field(d);
        // basis images ζ_d^i lifted to conductor n; solve linear system by elimination
        let n = self.conductor;
        let cols: Vec<CyclotomicNumber> = (0..fd.phi)
            .map(|i| CyclotomicNumber::root_of_unity(d, i as i64).lift(n))
            .collect();
        let rows = self.coeffs.len();
        let mut m: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let ncols = fd.phi;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if m[r..].iter().any(|row| !row[ncols].is_zero()) {
            return None;
        }
        let mut out = vec![BigRational::zero(); ncols];
        for (i, &c) in pivots.iter().enumerate() {
            out[c] = m[i][ncols].clone();
        }
        Some(CyclotomicNumber {
            conductor: d,
            coeffs: out,
        })
    }

    /// Positive real square root of a positive rational, as an element of a
    /// cyclotomic field (standard embedding `ζ_n = e^{2πi/n}`).
    pub fn sqrt_positive_rational(r: &BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Arithmetic(format!(
                "square root requested for non-positive rational {r}"
            )));
        }
        // r = num/den = num*den / den^2
        let prod = r.numer() * r.denom();
        let (square, free) = split_square(&prod);
        let mut acc = CyclotomicNumber::from_rational(BigRational::new(square, r.denom().clone()));
        for p in factor_small(&free)? {
            acc = &acc * &sqrt_prime(p);
        }
        Ok(acc)
    }
}

/// Splits a positive integer as `s^2 * f` with `f` squarefree.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut n = n.clone();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            f *= &p;
        }
        p += 1;
    }
    f *= n;
    (s, f)
}

fn factor_small(n: &BigInt) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    let mut v: u64 = n
        .try_into()
        .map_err(|_| Error::Arithmetic("square root of a large rational".into()))?;
    let mut p = 2u64;
    while p * p <= v {
        while v % p == 0 {
            out.push(p as u32);
            v /= p;
        }
        p += 1;
    }
    if v > 1 {
        out.push(v as u32);
    }
    Ok(out)
}

/// Positive square root of a prime.
fn sqrt_prime(p: u32) -> CyclotomicNumber {
    if p == 2 {
        // ζ_8 + ζ_8^{-1}
        return &CyclotomicNumber::root_of_unity(8, 1) + &CyclotomicNumber::root_of_unity(8, 7);
    }
    // quadratic Gauss sum g = Σ (x/p) ζ_p^x; g = √p (p ≡ 1 mod 4) or i√p (p ≡ 3 mod 4)
    let mut g = CyclotomicNumber::zero();
    for x in 1..p {
        let legendre = mod_pow(x as u64, ((p - 1) / 2) as u64, p as u64);
        let z = CyclotomicNumber::root_of_unity(p, x as i64);
        if legendre == 1 {
            g = &g + &z;
        } else {
            g = &g - &z;
        }
    }
    if p % 4 == 1 {
        g
    } else {
        &g * &CyclotomicNumber::root_of_unity(4, 3)
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `(numerators, common denominator)` when everything fits in `i64`.
fn small_form(c: &[BigRational]) -> Option<(Vec<i64>, i64)> {
    let mut den = 1i64;
    for x in c {
        let d = i64::try_from(x.denom()).ok()?;
        den = den.checked_mul(d / den.gcd(&d))?;
    }
    let nums = c
        .iter()
        .map(|x| {
            let n = i64::try_from(x.numer()).ok()?;
            n.checked_mul(den / i64::try_from(x.denom()).ok()?)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((nums, den))
}

/// Product over a common denominator in checked `i128`.
fn mul_small(f: &CycloField, a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let phi = f.phi;
    let (an, ad) = small_form(a)?;
    let (bn, bd) = small_form(b)?;
    let mut raw = vec![0i128; 2 * phi - 1];
    for (i, &x) in an.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in bn.iter().enumerate() {
            raw[i + j] = raw[i + j].checked_add((x as i128).checked_mul(y as i128)?)?;
        }
    }
    let mut out = raw[..phi].to_vec();
    for (k, &c) in raw.iter().enumerate().skip(phi) {
        if c == 0 {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(&f.prod[k]) {
            *o = o.checked_add(c.checked_mul(r as i128)?)?;
        }
    }
    let den = BigInt::from(ad as i128 * bd as i128);
    Some(out.into_iter().map(|c| BigRational::new(BigInt::from(c), den.clone())).collect())
}

fn mul_same(a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
    let n = a.conductor;
    let f = cyclo_field(n);
    if let Some(coeffs) = mul_small(&f, &a.coeffs, &b.coeffs) {
        return CyclotomicNumber { conductor: n, coeffs };
    }
    mul_generic(&f, a, b)
}

fn mul_generic(f: &CycloField, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
    let n = a.conductor;
    let phi = f.phi;
    // raw product in Z-coefficients of x^k, k < 2φ-1
    let mut raw: Vec<BigRational> = vec![BigRational::zero(); 2 * phi - 1];
    let mut any = false;
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            raw[i + j] += x * y;
            any = true;
        }
    }
    let mut out = vec![BigRational::zero(); phi];
    if !any {
        return CyclotomicNumber {
            conductor: n,
            coeffs: out,
        };
    }
    for (k, c) in raw.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k < phi {
            out[k] += c;
        } else {
            for (o, &r) in out.iter_mut().zip(&f.prod[k]) {
                if r != 0 {
                    *o += &c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
    }
    CyclotomicNumber {
        conductor: n,
        coeffs: out,
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.conductor == rhs.conductor {
            return mul_same(self, rhs);
        }
        if let Some(r) = self.to_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.to_rational() {
            return self.scale(&r);
        }
        let (a, b) = CyclotomicNumber::unify(self, rhs);
        mul_same(&a, &b)
    }
}

impl Mul for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
        &self * &rhs
    }
}

fn add_impl(a: &CyclotomicNumber, b: &CyclotomicNumber, sign: bool) -> CyclotomicNumber {
    if a.conductor == b.conductor {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| if sign { x + y } else { x - y })
            .collect();
        return CyclotomicNumber {
            conductor: a.conductor,
            coeffs,
        };
    }
    let (x, y) = CyclotomicNumber::unify(a, b);
    add_impl(&x, &y, sign)
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        add_impl(self, rhs, true)
    }
}

impl Add for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
        add_impl(&self, &rhs, true)
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        add_impl(self, rhs, false)
    }
}

impl Sub for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
        add_impl(&self, &rhs, false)
    }
}

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = add_impl(self, rhs, true);
        }
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !y.is_zero() {
                    *x -= y;
                }
            }
        } else {
            *self = add_impl(self, rhs, false);
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let m = lcm(self.conductor, other.conductor);
        self.lift(m).coeffs == other.lift(m).coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z{}", self.conductor)?,
                _ => write!(f, "({c})*z{}^{i}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(v: i64) -> Self {
        CyclotomicNumber::from_int(v)
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    conductor: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycloJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|[n, dd]| {
                let n: BigInt = n.parse().map_err(D::Error::custom)?;
                let dd: BigInt = dd.parse().map_err(D::Error::custom)?;
                if dd.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(BigRational::new(n, dd))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CyclotomicNumber::from_coeffs(raw.conductor, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(15), cyclotomic_polynomial(15).len() - 1);
    }

    #[test]
    fn i_squared() {
        assert_eq!(&z(4, 1) * &z(4, 1), CyclotomicNumber::from_int(-1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = &(&CyclotomicNumber::one() + &z(3, 1)) + &z(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn norm_of_one_plus_two_zeta3_squared() {
        let a = &CyclotomicNumber::one() + &z(3, 2).scale(&BigRational::from_integer(2.into()));
        assert_eq!(&a * &a.conjugate(), CyclotomicNumber::from_int(3));
    }

    #[test]
    fn roots_of_unity() {
        assert!(z(1, 0).is_one());
        assert_eq!(z(4, 2), CyclotomicNumber::from_int(-1));
        assert!(z(8, 1).pow(8).is_one());
        assert_eq!(z(8, 3).pow(8), CyclotomicNumber::one());
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(4, 1).conjugate(), -z(4, 1));
        assert_eq!(CyclotomicNumber::from_int(5).conjugate(), CyclotomicNumber::from_int(5));
        let a = &CyclotomicNumber::one() + &z(3, 1);
        assert_eq!(a.conjugate(), &CyclotomicNumber::one() + &z(3, 2));
    }

    #[test]
    fn detection() {
        assert_eq!(CyclotomicNumber::from_int(-1).detect_root_of_unity(), Some((2, 1)));
        assert_eq!(CyclotomicNumber::from_int(2).detect_root_of_unity(), None);
        assert_eq!(z(8, 3).detect_root_of_unity(), Some((8, 3)));
        assert_eq!(z(24, 6).detect_root_of_unity(), Some((4, 1)));
        assert_eq!(CyclotomicNumber::one().detect_root_of_unity(), Some((1, 0)));
        let half = &z(4, 1) + &CyclotomicNumber::one();
        assert_eq!(half.detect_root_of_unity(), None);
    }

    #[test]
    fn mixed_conductors() {
        // ζ_3 · ζ_4 = ζ_12^{4+3}
        assert_eq!(&z(3, 1) * &z(4, 1), z(12, 7));
        assert_eq!(z(6, 2), z(3, 1));
        assert_eq!(z(3, 1).lift(12), z(12, 4));
    }

    #[test]
    fn division() {
        let a = &z(5, 1) + &CyclotomicNumber::from_int(3);
        let b = a.inverse().unwrap();
        assert!((&a * &b).is_one());
        assert!(CyclotomicNumber::zero().inverse().is_err());
        assert!(a.try_div(&CyclotomicNumber::zero().lift(5)).is_err());
    }

    #[test]
    fn square_roots() {
        for r in [2i64, 3, 5, 6, 7, 8, 12, 13] {
            let s = CyclotomicNumber::sqrt_positive_rational(&BigRational::from_integer(r.into())).unwrap();
            assert_eq!(&s * &s, CyclotomicNumber::from_int(r));
            assert_eq!(s.conjugate(), s);
        }
        let s = CyclotomicNumber::sqrt_positive_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(&s * &s, CyclotomicNumber::from_rational(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn minimize() {
        let a = z(3, 1).lift(12);
        let m = a.minimize_conductor();
        assert_eq!(m.conductor(), 3);
        assert_eq!(m, z(3, 1));
    }

    #[test]
    fn json_round_trip() {
        let a = &z(8, 3) + &CyclotomicNumber::from_rational(BigRational::new((-7).into(), 3.into()));
        let s = serde_json::to_string(&a).unwrap();
        let b: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(s, serde_json::to_string(&b).unwrap());
        assert!(s.contains("\"conductor\":8"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb(n: u32) -> impl Strategy<Value = CyclotomicNumber> {
            let phi = euler_phi(n);
            proptest::collection::vec((-5i64..6, 1i64..4), phi).prop_map(move |v| {
                CyclotomicNumber::from_coeffs(
                    n,
                    v.into_iter()
                        .map(|(a, b)| BigRational::new(a.into(), b.into()))
                        .collect(),
                )
                .unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]
            #[test]
            fn field_axioms(a in arb(12), b in arb(12), c in arb(12)) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                if !a.is_zero() {
                    prop_assert!((&a * &a.inverse().unwrap()).is_one());
                }
            }

            #[test]
            fn small_product_matches_generic(a in arb(12), b in arb(12), big in 0u32..2) {
                let f = cyclo_field(12);
                let a = if big == 1 { &a * &CyclotomicNumber::from_int(i64::MAX) } else { a };
                let generic = mul_generic(&f, &a, &b);
                prop_assert_eq!(&a * &b, generic.clone());
                if let Some(c) = mul_small(&f, &a.coeffs, &b.coeffs) {
                    prop_assert_eq!(c, generic.coeffs);
                }
            }

            #[test]
            fn conjugation_is_automorphism(a in arb(8), b in arb(8)) {
                prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
                prop_assert_eq!(a.conjugate().conjugate(), a);
            }

            #[test]
            fn lift_preserves_equality(a in arb(5), b in arb(5)) {
                prop_assert_eq!(a.lift(20) == b.lift(20), a == b);
                prop_assert_eq!((&a * &b).lift(15), &a.lift(15) * &b.lift(15));
            }
        }
    }
}
