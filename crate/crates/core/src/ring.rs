//! Table-driven arithmetic shared by the finite fields and Galois rings, and
//! small square matrices over them.
//!
//! Ring elements are coded as `u8` indices `Σ c_i · base^i` of their
//! coordinate vectors, so every ring handled here has at most 256 elements.

use std::fmt;

use crate::error::{Error, Result};

/// Operation tables of a finite commutative ring with at most 256 elements.
#[derive(Clone)]
pub struct RingTables {
    pub(crate) size: usize,
    pub(crate) add: Vec<u8>,
    pub(crate) mul: Vec<u8>,
    pub(crate) neg: Vec<u8>,
    /// `inv[a]` is the inverse of a unit, `None` for non-units.
    pub(crate) inv: Vec<Option<u8>>,
}

impl RingTables {
    pub(crate) fn build(size: usize, add: impl Fn(usize, usize) -> usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut at = vec![0u8; size * size];
        let mut mt = vec![0u8; size * size];
        for a in 0..size {
            for b in 0..size {
                at[a * size + b] = add(a, b) as u8;
                mt[a * size + b] = mul(a, b) as u8;
            }
        }
        let neg = (0..size)
            .map(|a| (0..size).find(|&b| at[a * size + b] == 0).expect("additive inverse") as u8)
            .collect();
        let inv = (0..size)
            .map(|a| (0..size).find(|&b| mt[a * size + b] == 1).map(|b| b as u8))
            .collect();
        RingTables {
            size,
            add: at,
            mul: mt,
            neg,
            inv,
        }
    }
}

/// A finite commutative ring whose elements are coded as `u8`.
pub trait FiniteRing: Send + Sync {
    fn tables(&self) -> &RingTables;

    /// Short human-readable descriptor, e.g. `F_9` or `GR(4,2)`.
    fn name(&self) -> String;

    fn size(&self) -> usize {
        self.tables().size
    }
    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        let t = self.tables();
        t.add[a as usize * t.size + b as usize]
    }
    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        let t = self.tables();
        t.mul[a as usize * t.size + b as usize]
    }
    #[inline]
    fn neg(&self, a: u8) -> u8 {
        self.tables().neg[a as usize]
    }
    #[inline]
    fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
    #[inline]
    fn inv(&self, a: u8) -> Option<u8> {
        self.tables().inv[a as usize]
    }
    fn is_unit(&self, a: u8) -> bool {
        self.inv(a).is_some()
    }
    fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    /// The element `k · 1`.
    fn from_int(&self, k: i64) -> u8 {
        let mut acc = self.zero();
        let step = if k >= 0 { self.one() } else { self.neg(self.one()) };
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, step);
        }
        acc
    }
    fn units(&self) -> Vec<u8> {
        (0..self.size() as u16).map(|a| a as u8).filter(|&a| self.is_unit(a)).collect()
    }
}

/// Square matrix of side at most 4 over a [`FiniteRing`], row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SMat {
    n: u8,
    e: [u8; 16],
}

impl fmt::Debug for SMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl SMat {
    pub const MAX: usize = 4;

    pub fn zero(n: usize) -> Self {
        assert!(n <= Self::MAX, "matrix side {n} exceeds {}", Self::MAX);
        SMat { n: n as u8, e: [0; 16] }
    }

    pub fn identity<R: FiniteRing + ?Sized>(r: &R, n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, r.one());
        }
        m
    }

    pub fn scalar<R: FiniteRing + ?Sized>(_r: &R, n: usize, s: u8) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n > Self::MAX || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "expected a square matrix of side <= {}",
                Self::MAX
            )));
        }
        let mut m = Self::zero(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        let n = self.n();
        self.e[i * n + j] = v;
    }

    pub fn mul<R: FiniteRing + ?Sized>(&self, r: &R, o: &SMat) -> SMat {
        let n = self.n();
        debug_assert_eq!(n, o.n());
        let mut out = SMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u8;
                for k in 0..n {
                    acc = r.add(acc, r.mul(self.get(i, k), o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add<R: FiniteRing + ?Sized>(&self, r: &R, o: &SMat) -> SMat {
        let mut out = *self;
        for i in 0..self.n() * self.n() {
            out.e[i] = r.add(self.e[i], o.e[i]);
        }
        out
    }

    pub fn scale<R: FiniteRing + ?Sized>(&self, r: &R, s: u8) -> SMat {
        let mut out = *self;
        for i in 0..self.n() * self.n() {
            out.e[i] = r.mul(s, self.e[i]);
        }
        out
    }

    pub fn transpose(&self) -> SMat {
        let mut out = *self;
        for i in 0..self.n() {
            for j in 0..self.n() {
                out.set(i, j, self.get(j, i));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.e[..self.n() * self.n()].iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// `v · self` for a row vector `v`.
    pub fn apply_row<R: FiniteRing + ?Sized>(&self, r: &R, v: &[u8]) -> Vec<u8> {
        let n = self.n();
        (0..n)
            .map(|j| {
                (0..n).fold(0u8, |acc, k| r.add(acc, r.mul(v[k], self.get(k, j))))
            })
            .collect()
    }

    /// Extracts the `k×k` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> SMat {
        let mut out = SMat::zero(k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    /// Assembles `[[a, b], [c, d]]` from four equal-size blocks.
    pub fn from_blocks(a: &SMat, b: &SMat, c: &SMat, d: &SMat) -> SMat {
        let k = a.n();
        let mut out = SMat::zero(2 * k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, a.get(i, j));
                out.set(i, j + k, b.get(i, j));
                out.set(i + k, j, c.get(i, j));
                out.set(i + k, j + k, d.get(i, j));
            }
        }
        out
    }

    /// Inverse over a local ring or field: elimination with unit pivots.
    pub fn inverse<R: FiniteRing + ?Sized>(&self, r: &R) -> Option<SMat> {
        let n = self.n();
        let mut a = *self;
        let mut inv = SMat::identity(r, n);
        for c in 0..n {
            let p = (c..n).find(|&i| r.is_unit(a.get(i, c)))?;
            if p != c {
                for j in 0..n {
                    let (x, y) = (a.get(c, j), a.get(p, j));
                    a.set(c, j, y);
                    a.set(p, j, x);
                    let (x, y) = (inv.get(c, j), inv.get(p, j));
                    inv.set(c, j, y);
                    inv.set(p, j, x);
                }
            }
            let s = r.inv(a.get(c, c)).expect("unit pivot");
            for j in 0..n {
                a.set(c, j, r.mul(s, a.get(c, j)));
                inv.set(c, j, r.mul(s, inv.get(c, j)));
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, r.sub(a.get(i, j), r.mul(f, a.get(c, j))));
                    inv.set(i, j, r.sub(inv.get(i, j), r.mul(f, inv.get(c, j))));
                }
            }
        }
        Some(inv)
    }

    /// Determinant by cofactor expansion (sides are at most 4).
    pub fn det<R: FiniteRing + ?Sized>(&self, r: &R) -> u8 {
        fn rec<R: FiniteRing + ?Sized>(r: &R, m: &SMat, rows: &[usize], cols: &[usize]) -> u8 {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]);
            }
            let mut acc = 0u8;
            for (k, &c) in cols.iter().enumerate() {
                let entry = m.get(rows[0], c);
                if entry == 0 {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = rec(r, m, &rows[1..], &rest);
                let term = r.mul(entry, minor);
                acc = if k % 2 == 0 { r.add(acc, term) } else { r.sub(acc, term) };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n()).collect();
        if idx.is_empty() {
            return r.one();
        }
        rec(r, self, &idx, &idx)
    }

    /// Entry-wise image under a map of coded elements.
    pub fn map(&self, f: impl Fn(u8) -> u8) -> SMat {
        let mut out = *self;
        for i in 0..self.n() * self.n() {
            out.e[i] = f(self.e[i]);
        }
        out
    }

    pub fn entries(&self) -> &[u8] {
        &self.e[..self.n() * self.n()]
    }
}
