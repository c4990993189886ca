//! Dense and monomial matrices over cyclotomic fields, exact elimination,
//! and linear systems over `Z/K`.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};

/// Square matrix of cyclotomic numbers, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloMatrix {
    n: usize,
    data: Vec<CyclotomicNumber>,
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl CycloMatrix {
    pub fn zero(n: usize) -> Self {
        CycloMatrix {
            n,
            data: vec![CyclotomicNumber::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, CyclotomicNumber::one())
    }

    pub fn scalar(n: usize, s: CyclotomicNumber) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CyclotomicNumber>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix rows have unequal length".into()));
        }
        Ok(CycloMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> CyclotomicNumber) -> Self {
        CycloMatrix {
            n,
            data: (0..n * n).map(|k| f(k / n, k % n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<CyclotomicNumber>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.data
    }

    pub fn mul(&self, o: &CycloMatrix) -> CycloMatrix {
        let n = self.n;
        let data = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut acc = CyclotomicNumber::zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect();
        CycloMatrix { n, data }
    }

    pub fn add(&self, o: &CycloMatrix) -> CycloMatrix {
        CycloMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CycloMatrix) -> CycloMatrix {
        CycloMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &CyclotomicNumber) -> CycloMatrix {
        CycloMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> CycloMatrix {
        CycloMatrix {
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn trace(&self) -> CyclotomicNumber {
        (0..self.n).fold(CyclotomicNumber::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn conj_transpose(&self) -> CycloMatrix {
        Self::from_fn(self.n, |i, j| self.get(j, i).conjugate())
    }

    pub fn transpose(&self) -> CycloMatrix {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// `Some(s)` if `self = s·I`.
    pub fn as_scalar(&self) -> Option<CyclotomicNumber> {
        let s = self.get(0, 0).clone();
        let ok = (0..self.n).all(|i| (0..self.n).all(|j| *self.get(i, j) == if i == j { s.clone() } else { CyclotomicNumber::zero() }));
        ok.then_some(s)
    }

    /// `Some(c)` with `self = c · other`, `other ≠ 0`.
    pub fn ratio_to(&self, other: &CycloMatrix) -> Option<CyclotomicNumber> {
        let k = other.data.iter().position(|a| !a.is_zero())?;
        let c = self.data[k].try_div(&other.data[k]).ok()?;
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| *a == &c * b)
            .then_some(c)
    }

    pub fn pow(&self, mut e: u64) -> CycloMatrix {
        let mut acc = Self::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<CycloMatrix> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = Self::identity(n).rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[i][c].is_zero())
                .ok_or_else(|| Error::Arithmetic("singular matrix".into()))?;
            a.swap(c, p);
            inv.swap(c, p);
            let s = a[c][c].inverse()?;
            for j in 0..n {
                a[c][j] = &a[c][j] * &s;
                inv[c][j] = &inv[c][j] * &s;
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= &t;
                    let t = &f * &inv[c][j];
                    inv[i][j] -= &t;
                }
            }
        }
        CycloMatrix::from_rows(inv)
    }

    /// Least common conductor of the entries.
    pub fn conductor(&self) -> u32 {
        self.data
            .iter()
            .map(|a| a.conductor())
            .fold(1, num_integer::lcm)
    }
}

/// `M` with `M[k][perm[k]] = phase[k]` and zeros elsewhere, so
/// `(M f)(k) = phase[k] f(perm[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub phase: Vec<CyclotomicNumber>,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        MonomialMatrix {
            perm: (0..n).collect(),
            phase: vec![CyclotomicNumber::one(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn to_dense(&self) -> CycloMatrix {
        let mut m = CycloMatrix::zero(self.n());
        for (k, (&c, p)) in self.perm.iter().zip(&self.phase).enumerate() {
            m.set(k, c, p.clone());
        }
        m
    }

    /// `self · o`, again monomial.
    pub fn mul(&self, o: &MonomialMatrix) -> MonomialMatrix {
        let (perm, phase) = self
            .perm
            .iter()
            .zip(&self.phase)
            .map(|(&c, p)| (o.perm[c], p * &o.phase[c]))
            .unzip();
        MonomialMatrix { perm, phase }
    }

    /// `A · self` for dense `A`.
    pub fn left_mul(&self, a: &CycloMatrix) -> CycloMatrix {
        let n = self.n();
        let mut out = CycloMatrix::zero(n);
        for (k, (&c, p)) in self.perm.iter().zip(&self.phase).enumerate() {
            for i in 0..n {
                let x = a.get(i, k);
                if !x.is_zero() {
                    out.set(i, c, x * p);
                }
            }
        }
        out
    }

    /// `self · A` for dense `A`.
    pub fn right_mul(&self, a: &CycloMatrix) -> CycloMatrix {
        let n = self.n();
        let mut out = CycloMatrix::zero(n);
        for (k, (&c, p)) in self.perm.iter().zip(&self.phase).enumerate() {
            for j in 0..n {
                let x = a.get(c, j);
                if !x.is_zero() {
                    out.set(k, j, p * x);
                }
            }
        }
        out
    }

    /// `trace(A · self) = Σ_k A[perm[k]][k] · phase[k]`.
    pub fn trace_left_mul(&self, a: &CycloMatrix) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::zero();
        for (k, (&c, p)) in self.perm.iter().zip(&self.phase).enumerate() {
            let x = a.get(c, k);
            if !x.is_zero() {
                acc += &(x * p);
            }
        }
        acc
    }

    pub fn trace(&self) -> CyclotomicNumber {
        self.perm
            .iter()
            .zip(&self.phase)
            .enumerate()
            .filter(|(k, (&c, _))| *k == c)
            .fold(CyclotomicNumber::zero(), |acc, (_, (_, p))| acc + p.clone())
    }
}

/// Basis of the right null space of a (rows × cols) cyclotomic matrix.
pub fn nullspace(rows: &[Vec<CyclotomicNumber>], cols: usize) -> Vec<Vec<CyclotomicNumber>> {
    let mut a: Vec<Vec<CyclotomicNumber>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let s = a[r][c].inverse().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &s;
        }
        let pivot_row = a[r].clone();
        a.par_iter_mut().enumerate().for_each(|(i, row)| {
            if i == r || row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    let t = &f * y;
                    *x -= &t;
                }
            }
        });
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![CyclotomicNumber::zero(); cols];
            v[fc] = CyclotomicNumber::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[i][fc];
            }
            v
        })
        .collect()
}

/// Solves the symmetric rational system `G x = b` (Gaussian elimination);
/// `None` if singular or inconsistent.
pub fn solve_rational(g: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let s = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &s;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pr = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

fn factor(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        let mut e = 0;
        while k % p == 0 {
            k /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

fn valuation(x: i64, p: i64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 && v < e {
        y /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, m, a.rem_euclid(m));
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    (r == 1).then(|| t.rem_euclid(m))
}

/// Solves `A x ≡ b (mod p^e)` by full-pivot elimination with pivots of
/// minimal valuation.
fn solve_prime_power(a: &[Vec<i64>], b: &[i64], cols: usize, p: i64, e: u32) -> Option<Vec<i64>> {
    let md = p.pow(e);
    let mut a: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(md)).collect()).collect();
    let mut b: Vec<i64> = b.iter().map(|x| x.rem_euclid(md)).collect();
    let rows = a.len();
    let mut col_of: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<(u32, i64)> = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = valuation(a[i][j], p, e);
                if v < e && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(k, pi);
        b.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        col_of.swap(k, pj);
        let pv = p.pow(v);
        let unit = a[k][k] / pv;
        let uinv = inv_mod(unit, md).expect("unit part");
        for i in k + 1..rows {
            if a[i][k] == 0 {
                continue;
            }
            // a[i][k] is a multiple of p^v
            let f = ((a[i][k] / pv) * uinv).rem_euclid(md);
            for j in k..cols {
                a[i][j] = (a[i][j] - f * a[k][j]).rem_euclid(md);
            }
            b[i] = (b[i] - f * b[k]).rem_euclid(md);
        }
        pivots.push((v, uinv));
    }
    let r = pivots.len();
    if b[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0i64; cols];
    for k in (0..r).rev() {
        let (v, uinv) = pivots[k];
        let pv = p.pow(v);
        let mut rhs = b[k];
        for j in k + 1..cols {
            rhs = (rhs - a[k][j] * y[j]).rem_euclid(md);
        }
        if rhs % pv != 0 {
            return None;
        }
        // p^v · unit · y_k ≡ rhs, and every a[k][j] is a multiple of p^v
        y[k] = ((rhs / pv) * uinv).rem_euclid(md);
    }
    let mut x = vec![0i64; cols];
    for (k, &c) in col_of.iter().enumerate() {
        x[c] = y[k];
    }
    Some(x)
}

/// Solves `A x ≡ b (mod k)` by prime-power decomposition and CRT; `None`
/// if the system has no solution.
pub fn solve_mod(a: &[Vec<i64>], b: &[i64], cols: usize, k: u64) -> Option<Vec<i64>> {
    if k == 1 {
        return Some(vec![0; cols]);
    }
    let mut x = vec![0i64; cols];
    let mut modulus = 1i64;
    for (p, e) in factor(k) {
        let pe = (p as i64).pow(e);
        let xp = solve_prime_power(a, b, cols, p as i64, e)?;
        // combine x (mod modulus) with xp (mod pe)
        let inv = inv_mod(modulus % pe, pe).expect("coprime moduli");
        for (xi, &yi) in x.iter_mut().zip(&xp) {
            let t = ((yi - *xi).rem_euclid(pe) * inv).rem_euclid(pe);
            *xi += modulus * t;
        }
        modulus *= pe;
    }
    Some(x.into_iter().map(|v| v.rem_euclid(modulus)).collect())
}

/// `⟨χ₁, χ₂⟩ = (1/|G|) Σ χ₁(g) conj(χ₂(g))`, required to be rational.
pub fn inner_product(chi1: &[CyclotomicNumber], chi2: &[CyclotomicNumber]) -> Result<BigRational> {
    if chi1.len() != chi2.len() || chi1.is_empty() {
        return Err(Error::Mismatch("characters on groups of different order".into()));
    }
    let total = chi1
        .par_iter()
        .zip(chi2.par_iter())
        .map(|(a, b)| a * &b.conjugate())
        .reduce(CyclotomicNumber::zero, |a, b| a + b);
    let r = total
        .to_rational()
        .ok_or_else(|| Error::Verification(format!("inner product sum {total} is not rational")))?;
    Ok(r / BigRational::from_integer((chi1.len() as i64).into()))
}

/// Whether a rational is a non-negative integer.
pub fn is_natural(r: &BigRational) -> bool {
    r.is_integer() && *r >= BigRational::zero()
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(n, k)
    }

    #[test]
    fn inverse_and_products() {
        let m = CycloMatrix::from_rows(vec![vec![z(3, 1), z(1, 0)], vec![z(4, 1), z(3, 2)]]).unwrap();
        let mi = m.inverse().unwrap();
        assert_eq!(m.mul(&mi), CycloMatrix::identity(2));
        assert_eq!(mi.mul(&m), CycloMatrix::identity(2));
        let singular = CycloMatrix::from_rows(vec![vec![z(3, 1), z(3, 1)], vec![z(3, 2), z(3, 2)]]).unwrap();
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn monomial_agrees_with_dense() {
        let a = MonomialMatrix {
            perm: vec![2, 0, 1],
            phase: vec![z(3, 1), z(1, 0), z(3, 2)],
        };
        let b = MonomialMatrix {
            perm: vec![1, 2, 0],
            phase: vec![z(4, 1), z(2, 1), z(1, 0)],
        };
        assert_eq!(a.mul(&b).to_dense(), a.to_dense().mul(&b.to_dense()));
        let d = CycloMatrix::from_fn(3, |i, j| z(12, (i * 3 + j) as i64));
        assert_eq!(b.left_mul(&d), d.mul(&b.to_dense()));
        assert_eq!(b.trace_left_mul(&d), d.mul(&b.to_dense()).trace());
        assert_eq!(a.trace(), a.to_dense().trace());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![z(1, 0), z(3, 1), z(1, 0)], vec![z(2, 1), -z(3, 1), z(2, 1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(CyclotomicNumber::zero(), |acc, (a, b)| acc + a * b);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn modular_solver() {
        // 2x ≡ 1 (mod 4) has no solution; 2x ≡ 2 (mod 4) does
        assert!(solve_mod(&[vec![2]], &[1], 1, 4).is_none());
        let x = solve_mod(&[vec![2]], &[2], 1, 4).unwrap();
        assert_eq!((2 * x[0]) % 4, 2);
        // mixed moduli
        let a = vec![vec![3, 4, 1], vec![2, 0, 5], vec![0, 6, 1]];
        let b = vec![7, 3, 5];
        let x = solve_mod(&a, &b, 3, 60).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            let s: i64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!((s - bi).rem_euclid(60), 0);
        }
        // inconsistent zero row
        assert!(solve_mod(&[vec![0, 0]], &[3], 2, 8).is_none());
    }

    #[test]
    fn modular_solver_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let k = [4u64, 6, 8, 9, 12][rng.gen_range(0..5)];
            let a: Vec<Vec<i64>> = (0..3).map(|_| (0..2).map(|_| rng.gen_range(0..k as i64)).collect()).collect();
            let b: Vec<i64> = (0..3).map(|_| rng.gen_range(0..k as i64)).collect();
            let brute = (0..k as i64).any(|x| {
                (0..k as i64).any(|y| a.iter().zip(&b).all(|(r, bi)| (r[0] * x + r[1] * y - bi).rem_euclid(k as i64) == 0))
            });
            let solved = solve_mod(&a, &b, 2, k);
            assert_eq!(solved.is_some(), brute, "{a:?} {b:?} mod {k}");
            if let Some(x) = solved {
                for (r, bi) in a.iter().zip(&b) {
                    assert_eq!((r[0] * x[0] + r[1] * x[1] - bi).rem_euclid(k as i64), 0);
                }
            }
        }
    }

    #[test]
    fn rational_system() {
        let g = vec![vec![rational(2), rational(1)], vec![rational(1), rational(2)]];
        let x = solve_rational(&g, &[rational(3), rational(3)]).unwrap();
        assert_eq!(x, vec![rational(1), rational(1)]);
    }
}
