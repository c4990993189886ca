//! Finite fields `F_q`, `q = p^d <= 256`, with the quadratic character,
//! additive characters and the multiplicative-group maps used by the odd
//! constructions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, RingTables};

/// `F_p[x]/(f)` with elements coded as `Σ c_i p^i`.
pub struct FiniteField {
    p: u32,
    d: u32,
    /// Monic modulus, low degree first, length `d + 1`.
    modulus: Vec<u32>,
    tables: RingTables,
    /// `Tr_{F_q/F_p}` of each element, as a residue mod `p`.
    trace: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.q(), self.modulus)
    }
}

/// Serializable field descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Splits `q` as `p^d`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|k| q % k == 0)?;
    let mut r = q;
    let mut d = 0;
    while r % p == 0 {
        r /= p;
        d += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, d))
}

/// Default moduli (low degree first) for the non-prime fields we ship.
fn default_modulus(p: u32, d: u32) -> Option<Vec<u32>> {
    Some(match (p, d) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (2, 4) => vec![1, 1, 0, 0, 1],
        (3, 2) => vec![1, 0, 1],
        (3, 3) => vec![1, 2, 0, 1],
        (5, 2) => vec![2, 1, 1],
        (7, 2) => vec![1, 0, 1],
        _ => return None,
    })
}

fn decode(v: usize, p: u32, d: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(d as usize);
    let mut r = v as u32;
    for _ in 0..d {
        out.push(r % p);
        r /= p;
    }
    out
}

fn encode(c: &[u32], p: u32) -> usize {
    c.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// Multiplies two coordinate vectors modulo a monic polynomial over `Z/n`.
pub(crate) fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], n: u32) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % n;
        }
    }
    for k in (d..2 * d).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &mi) in modulus.iter().take(d).enumerate() {
            prod[k - d + i] = (prod[k - d + i] + n * n - (c * mi) % n) % n;
        }
    }
    prod.truncate(d);
    prod
}

impl FiniteField {
    /// Field of order `q` with the built-in modulus.
    pub fn new(q: u32) -> Result<Self> {
        let (p, d) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        let modulus = default_modulus(p, d)
            .ok_or_else(|| Error::InvalidArgument(format!("no built-in modulus for q = {q}")))?;
        Self::with_modulus(p, modulus)
    }

    /// Field `F_p[x]/(f)` for a user-supplied monic `f` (low degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        let d = modulus.len() as u32 - 1;
        if d == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(
                "modulus must be monic of positive degree with coefficients in 0..p".into(),
            ));
        }
        let q = p.checked_pow(d).filter(|&q| q <= 256).ok_or_else(|| {
            Error::InvalidArgument(format!("field order {p}^{d} exceeds 256"))
        })?;
        let size = q as usize;
        let tables = RingTables::build(
            size,
            |a, b| {
                let (x, y) = (decode(a, p, d), decode(b, p, d));
                let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                encode(&s, p)
            },
            |a, b| {
                if d == 1 {
                    return a * b % p as usize;
                }
                encode(&poly_mulmod(&decode(a, p, d), &decode(b, p, d), &modulus, p), p)
            },
        );
        if (1..size).any(|a| tables.inv[a].is_none()) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let mut field = FiniteField {
            p,
            d,
            modulus,
            tables,
            trace: Vec::new(),
        };
        field.trace = (0..size)
            .map(|a| {
                let mut acc = 0u8;
                let mut x = a as u8;
                for _ in 0..d {
                    acc = field.add(acc, x);
                    x = field.pow(x, p as u64);
                }
                debug_assert!((acc as u32) < p);
                acc as u32
            })
            .collect();
        Ok(field)
    }

    /// Shared instance with the built-in modulus.
    pub fn shared(q: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FiniteField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::new(q)?);
        cache.lock().unwrap().insert(q, f.clone());
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn q(&self) -> u32 {
        self.tables.size as u32
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            d: self.d,
            modulus: self.modulus.clone(),
        }
    }

    pub fn coordinates(&self, a: u8) -> Vec<u32> {
        decode(a as usize, self.p, self.d)
    }

    pub fn from_coordinates(&self, c: &[u32]) -> Result<u8> {
        if c.len() != self.d as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "expected {} residues mod {}",
                self.d, self.p
            )));
        }
        Ok(encode(c, self.p) as u8)
    }

    /// Absolute trace to the prime field, as an integer in `0..p`.
    pub fn trace(&self, a: u8) -> u32 {
        self.trace[a as usize]
    }

    pub fn div(&self, a: u8, b: u8) -> Result<u8> {
        let inv = self
            .inv(b)
            .ok_or_else(|| Error::Arithmetic("division by zero in a finite field".into()))?;
        Ok(self.mul(a, inv))
    }

    pub fn half(&self) -> Result<u8> {
        self.inv(self.from_int(2))
            .ok_or_else(|| Error::WrongCase("1/2 does not exist in characteristic 2".into()))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u8> + '_ {
        (1..self.q()).map(|a| a as u8)
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.q()).map(|a| a as u8)
    }

    /// Legendre-type symbol `a^{(q-1)/2}` as `+1`, `-1`, or `0`.
    pub fn quadratic_character(&self, a: u8) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let r = self.pow(a, (self.q() as u64 - 1) / 2);
        if r == 1 {
            1
        } else {
            debug_assert_eq!(r, self.neg(1));
            -1
        }
    }

    pub fn is_square(&self, a: u8) -> bool {
        self.quadratic_character(a) >= 0
    }

    pub fn same_as(&self, other: &FiniteField) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl FiniteRing for FiniteField {
    fn tables(&self) -> &RingTables {
        &self.tables
    }
    fn name(&self) -> String {
        format!("F_{}", self.q())
    }
}

/// An element of a [`FiniteField`] carrying its field descriptor.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    value: u8,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}", self.field.coordinates(self.value), self.field.name())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.same_as(&o.field) && self.value == o.value
    }
}
impl Eq for FieldElement {}

/// Binary field operations accepted by [`FieldElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: Arc<FiniteField>, value: u8) -> Result<Self> {
        if value as u32 >= field.q() {
            return Err(Error::InvalidArgument(format!(
                "code {value} out of range for {}",
                field.name()
            )));
        }
        Ok(FieldElement { field, value })
    }

    pub fn from_coordinates(field: Arc<FiniteField>, c: &[u32]) -> Result<Self> {
        let value = field.from_coordinates(c)?;
        Ok(FieldElement { field, value })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn value(&self) -> u8 {
        self.value
    }
    pub fn coordinates(&self) -> Vec<u32> {
        self.field.coordinates(self.value)
    }

    pub fn arith(&self, other: &FieldElement, op: FieldOp) -> Result<FieldElement> {
        if !self.field.same_as(&other.field) {
            return Err(Error::Mismatch(format!(
                "{} vs {}",
                self.field.name(),
                other.field.name()
            )));
        }
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            FieldOp::Add => f.add(a, b),
            FieldOp::Sub => f.sub(a, b),
            FieldOp::Mul => f.mul(a, b),
            FieldOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement {
            field: f.clone(),
            value,
        })
    }

    pub fn quadratic_character(&self) -> i8 {
        self.field.quadratic_character(self.value)
    }
}

/// `x ↦ ψ(a x)` with `ψ(x) = ζ_p^{Tr(x)}`.
#[derive(Clone)]
pub struct AdditiveCharacter {
    field: Arc<FiniteField>,
    twist: u8,
    roots: Arc<Vec<CyclotomicNumber>>,
}

impl AdditiveCharacter {
    pub fn new(field: Arc<FiniteField>, twist: u8) -> Self {
        let p = field.p();
        let roots = (0..p).map(|k| CyclotomicNumber::root_of_unity(p, k as i64)).collect();
        AdditiveCharacter {
            field,
            twist,
            roots: Arc::new(roots),
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn twist(&self) -> u8 {
        self.twist
    }

    /// The exponent `k` with `ψ^a(x) = ζ_p^k`.
    pub fn exponent(&self, x: u8) -> u32 {
        self.field.trace(self.field.mul(self.twist, x))
    }

    pub fn eval(&self, x: u8) -> CyclotomicNumber {
        self.roots[self.exponent(x) as usize].clone()
    }

    pub fn root(&self, k: u32) -> &CyclotomicNumber {
        &self.roots[(k % self.field.p()) as usize]
    }

    /// The character `x ↦ ψ^a(s x)`.
    pub fn retwist(&self, s: u8) -> Self {
        AdditiveCharacter {
            field: self.field.clone(),
            twist: self.field.mul(self.twist, s),
            roots: self.roots.clone(),
        }
    }
}

/// Residue class of `q` mod 4, selecting which odd construction applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueCase {
    #[serde(rename = "q3")]
    Q3,
    #[serde(rename = "q1")]
    Q1,
}

impl fmt::Display for ResidueCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidueCase::Q3 => "q3",
            ResidueCase::Q1 => "q1",
        })
    }
}

/// `F^× = F_l × F_{2^n}` with a fixed generator and discrete logarithms.
#[derive(Clone, Debug)]
pub struct MultiplicativeStructure {
    field: Arc<FiniteField>,
    generator: u8,
    l: u64,
    n: u32,
    log: Vec<u64>,
    exp: Vec<u8>,
}

impl MultiplicativeStructure {
    /// Smallest generator by code, with `q - 1 = 2^n l`.
    pub fn decompose(field: Arc<FiniteField>) -> Result<Self> {
        if field.p() == 2 {
            return Err(Error::WrongCase("decomposition needs odd characteristic".into()));
        }
        let order = field.q() as u64 - 1;
        let generator = field
            .nonzero()
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = field.mul(x, g);
                    k += 1;
                }
                k == order
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u64::MAX; field.q() as usize];
        let mut x = 1u8;
        for k in 0..order {
            exp.push(x);
            log[x as usize] = k;
            x = field.mul(x, generator);
        }
        let n = order.trailing_zeros();
        let l = order >> n;
        Ok(MultiplicativeStructure {
            field,
            generator,
            l,
            n,
            log,
            exp,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn generator(&self) -> u8 {
        self.generator
    }
    pub fn l(&self) -> u64 {
        self.l
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn two_power(&self) -> u64 {
        1 << self.n
    }
    fn order(&self) -> u64 {
        self.l << self.n
    }

    pub fn residue_case(&self) -> ResidueCase {
        if self.n == 1 {
            ResidueCase::Q3
        } else {
            ResidueCase::Q1
        }
    }

    pub fn log(&self, a: u8) -> Result<u64> {
        match self.log.get(a as usize) {
            Some(&k) if k != u64::MAX => Ok(k),
            _ => Err(Error::InvalidArgument("zero has no discrete logarithm".into())),
        }
    }

    /// `g^k` for the fixed generator.
    pub fn gpow(&self, k: i64) -> u8 {
        self.exp[k.rem_euclid(self.order() as i64) as usize]
    }

    /// Elements of `F_l = <g^{2^n}>`, sorted by code.
    pub fn f_l(&self) -> Vec<u8> {
        let mut v: Vec<u8> = (0..self.l).map(|k| self.gpow((k << self.n) as i64)).collect();
        v.sort_unstable();
        v
    }

    /// Elements of `F_{2^n} = <g^l>`, sorted by code.
    pub fn f_2n(&self) -> Vec<u8> {
        let mut v: Vec<u8> = (0..self.two_power())
            .map(|k| self.gpow((k * self.l) as i64))
            .collect();
        v.sort_unstable();
        v
    }

    /// Squares of `F^×`, sorted by code.
    pub fn squares(&self) -> Vec<u8> {
        let mut v: Vec<u8> = (0..self.order() / 2).map(|k| self.gpow(2 * k as i64)).collect();
        v.sort_unstable();
        v
    }

    /// Exponent `e` with `e ≡ 1 (mod l)` and `e ≡ 0 (mod 2^n)`.
    fn idempotent_l(&self) -> u64 {
        let t = self.two_power();
        (0..self.order())
            .step_by(t as usize)
            .find(|e| e % self.l == 1 % self.l)
            .expect("CRT idempotent")
    }

    /// Projection `F^× → F_l`.
    pub fn project_l(&self, a: u8) -> Result<u8> {
        let k = self.log(a)?;
        Ok(self.gpow((k * self.idempotent_l()) as i64))
    }

    /// Projection `F^× → F_{2^n}`.
    pub fn chi_plus(&self, a: u8) -> Result<u8> {
        let k = self.log(a)?;
        let e = (self.order() + 1 - self.idempotent_l()) % self.order();
        Ok(self.gpow((k * e) as i64))
    }

    fn check_case(&self, case: ResidueCase) -> Result<()> {
        if self.residue_case() != case {
            return Err(Error::WrongCase(format!(
                "q = {} is not in case {case}",
                self.field.q()
            )));
        }
        Ok(())
    }

    /// `τ` on its odd-order domain (`F^{×2}` for q3, `F_l` for q1): `y ↦ y^{-1/2}`.
    pub fn tau_on_domain(&self, case: ResidueCase, a: u8) -> Result<u8> {
        self.check_case(case)?;
        if self.project_l(a)? != a {
            return Err(Error::InvalidArgument(format!(
                "{a} is outside the domain of tau"
            )));
        }
        self.tau(case, a)
    }

    /// `τ` extended to `F^×`, trivial on the 2-primary part.
    pub fn tau(&self, case: ResidueCase, a: u8) -> Result<u8> {
        self.check_case(case)?;
        let y = self.project_l(a)?;
        let k = self.log(y)? as i64;
        Ok(self.gpow(-k * ((self.l as i64 + 1) / 2)))
    }

    pub fn is_square(&self, a: u8) -> bool {
        a != 0 && self.log[a as usize] % 2 == 0
    }

    /// The fixed section `√(g^{2j}) = g^j`, `0 <= j < (q-1)/2`.
    pub fn sqrt(&self, a: u8) -> Result<u8> {
        let k = self.log(a)?;
        if k % 2 != 0 {
            return Err(Error::InvalidArgument(format!("{a} is not a square")));
        }
        Ok(self.gpow((k / 2) as i64))
    }

    /// `c_√(a, b) = √a √b / √(ab)` as `±1`.
    pub fn c_sqrt(&self, a: u8, b: u8) -> Result<i8> {
        let lhs = self.field.mul(self.sqrt(a)?, self.sqrt(b)?);
        let rhs = self.sqrt(self.field.mul(a, b))?;
        Ok(if lhs == rhs { 1 } else { -1 })
    }
}
