//! The Galois ring `GR(4, d)`, its reduction to `F_{2^d}` and the trace
//! character `ψ(x) = i^{T(x)}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::{poly_mulmod, FiniteField};
use crate::ring::{FiniteRing, RingTables};

/// `(Z/4)[x]/(f̃)` where `f̃` is the coordinate-wise lift of the modulus of
/// `F_{2^d}`. Elements are coded as `Σ c_i 4^i`.
pub struct GaloisRing {
    d: u32,
    modulus: Vec<u32>,
    tables: RingTables,
    field: Arc<FiniteField>,
    /// `T(a)` in `Z/4`, the trace of multiplication by `a`.
    trace: Vec<u32>,
}

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR(4,{})(modulus {:?})", self.d, self.modulus)
    }
}

fn decode4(v: usize, d: u32) -> Vec<u32> {
    (0..d).map(|i| ((v >> (2 * i)) & 3) as u32).collect()
}

fn encode4(c: &[u32]) -> usize {
    c.iter().enumerate().map(|(i, &x)| (x as usize) << (2 * i)).sum()
}

impl GaloisRing {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 || d > 4 {
            return Err(Error::InvalidArgument(format!("GR(4,{d}) is not supported")));
        }
        let field = FiniteField::shared(1 << d)?;
        Self::over(field)
    }

    /// Ring lifted from the modulus of the given characteristic-2 field.
    pub fn over(field: Arc<FiniteField>) -> Result<Self> {
        if field.p() != 2 {
            return Err(Error::InvalidArgument("residue field must have characteristic 2".into()));
        }
        let d = field.d();
        let modulus = field.modulus().to_vec();
        let size = 1usize << (2 * d);
        let tables = RingTables::build(
            size,
            |a, b| {
                let s: Vec<u32> = decode4(a, d)
                    .iter()
                    .zip(decode4(b, d))
                    .map(|(x, y)| (x + y) % 4)
                    .collect();
                encode4(&s)
            },
            |a, b| encode4(&poly_mulmod(&decode4(a, d), &decode4(b, d), &modulus, 4)),
        );
        let mut ring = GaloisRing {
            d,
            modulus,
            tables,
            field,
            trace: Vec::new(),
        };
        ring.trace = (0..size)
            .map(|a| {
                // diagonal of the multiplication-by-a matrix in the power basis
                (0..d as usize)
                    .map(|i| {
                        let basis = 1u8 << (2 * i);
                        decode4(ring.mul(a as u8, basis) as usize, d)[i]
                    })
                    .sum::<u32>()
                    % 4
            })
            .collect();
        Ok(ring)
    }

    pub fn shared(d: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<GaloisRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().unwrap().get(&d) {
            return Ok(r.clone());
        }
        let r = Arc::new(Self::new(d)?);
        cache.lock().unwrap().insert(d, r.clone());
        Ok(r)
    }

    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn residue_field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coordinates(&self, a: u8) -> Vec<u32> {
        decode4(a as usize, self.d)
    }

    pub fn from_coordinates(&self, c: &[u32]) -> Result<u8> {
        if c.len() != self.d as usize || c.iter().any(|&x| x >= 4) {
            return Err(Error::InvalidArgument(format!("expected {} residues mod 4", self.d)));
        }
        Ok(encode4(c) as u8)
    }

    /// Reduction `R → F`, coordinates mod 2.
    pub fn reduce(&self, a: u8) -> u8 {
        let c: Vec<u32> = self.coordinates(a).iter().map(|x| x % 2).collect();
        self.field.from_coordinates(&c).expect("residues mod 2")
    }

    /// Coordinate-wise lift `F → R` with digits in `{0, 1}`.
    pub fn lift(&self, a: u8) -> u8 {
        encode4(&self.field.coordinates(a)) as u8
    }

    /// `2 · lift(a)`, the isomorphism `F → 2R`.
    pub fn double_lift(&self, a: u8) -> u8 {
        let l = self.lift(a);
        self.add(l, l)
    }

    /// Inverse of [`Self::double_lift`] on `2R`.
    pub fn halve(&self, a: u8) -> Result<u8> {
        let c = self.coordinates(a);
        if c.iter().any(|x| x % 2 != 0) {
            return Err(Error::InvalidArgument(format!("{a} is not in 2R")));
        }
        let h: Vec<u32> = c.iter().map(|x| x / 2).collect();
        self.field.from_coordinates(&h)
    }

    pub fn in_two_r(&self, a: u8) -> bool {
        self.coordinates(a).iter().all(|x| x % 2 == 0)
    }

    /// Multiplicative Teichmüller representative `lift(a)^{2^d}`.
    pub fn teichmuller(&self, a: u8) -> u8 {
        self.pow(self.lift(a), 1 << self.d)
    }

    /// The Galois-ring trace `T: R → Z/4`.
    pub fn trace(&self, a: u8) -> u32 {
        self.trace[a as usize]
    }
}

impl FiniteRing for GaloisRing {
    fn tables(&self) -> &RingTables {
        &self.tables
    }
    fn name(&self) -> String {
        format!("GR(4,{})", self.d)
    }
}

/// An element of a [`GaloisRing`] carrying its descriptor.
#[derive(Clone)]
pub struct RingElement {
    ring: Arc<GaloisRing>,
    value: u8,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}", self.ring.coordinates(self.value), self.ring.name())
    }
}

impl PartialEq for RingElement {
    fn eq(&self, o: &Self) -> bool {
        self.ring.modulus == o.ring.modulus && self.value == o.value
    }
}
impl Eq for RingElement {}

/// Binary ring operations accepted by [`RingElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

impl RingElement {
    pub fn new(ring: Arc<GaloisRing>, value: u8) -> Result<Self> {
        if value as usize >= ring.size() {
            return Err(Error::InvalidArgument(format!("code {value} out of range")));
        }
        Ok(RingElement { ring, value })
    }
    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }
    pub fn value(&self) -> u8 {
        self.value
    }
    pub fn arith(&self, other: &RingElement, op: RingOp) -> Result<RingElement> {
        if self.ring.modulus != other.ring.modulus {
            return Err(Error::Mismatch(format!(
                "{} vs {}",
                self.ring.name(),
                other.ring.name()
            )));
        }
        let r = &self.ring;
        let (a, b) = (self.value, other.value);
        let value = match op {
            RingOp::Add => r.add(a, b),
            RingOp::Sub => r.sub(a, b),
            RingOp::Mul => r.mul(a, b),
        };
        Ok(RingElement {
            ring: r.clone(),
            value,
        })
    }
}

/// `ψ(x) = i^{T(x)}`, checked to be nontrivial on `2R` at construction.
#[derive(Clone)]
pub struct RingCharacter {
    ring: Arc<GaloisRing>,
    roots: Arc<Vec<CyclotomicNumber>>,
}

impl RingCharacter {
    pub fn faithful(ring: Arc<GaloisRing>) -> Result<Self> {
        let nontrivial_on_2r = ring
            .residue_field()
            .nonzero()
            .any(|a| ring.trace(ring.double_lift(a)) != 0);
        if !nontrivial_on_2r {
            return Err(Error::Verification(
                "the trace character is trivial on 2R".into(),
            ));
        }
        let roots = (0..4).map(|k| CyclotomicNumber::root_of_unity(4, k)).collect();
        Ok(RingCharacter {
            ring,
            roots: Arc::new(roots),
        })
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    /// `k` with `ψ(x) = i^k`.
    pub fn exponent(&self, x: u8) -> u32 {
        self.ring.trace(x)
    }

    pub fn eval(&self, x: u8) -> CyclotomicNumber {
        self.roots[self.exponent(x) as usize].clone()
    }
}
