//! `Sp(W)` and `GSp(W)` as `2m × 2m` matrices acting on row vectors
//! (`w ↦ wg`), in the basis `e_1..e_m, e_1*..e_m*` with Gram matrix
//! `J = [[0, I], [-I, 0]]`, so `⟨e_i, e_j*⟩ = δ_ij`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois_ring::GaloisRing;
use crate::group::{FiniteGroup, GroupLaw};
use crate::ring::{FiniteRing, SMat};

/// A matrix in `GSp(W)` together with its similitude factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticElement {
    pub matrix: SMat,
    pub lambda: u8,
}

impl fmt::Debug for SymplecticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)?;
        if self.lambda != 1 {
            write!(f, "(λ={})", self.lambda)?;
        }
        Ok(())
    }
}

impl SymplecticElement {
    /// Checks membership in `GSp` and computes `λ`.
    pub fn new<R: FiniteRing + ?Sized>(r: &R, matrix: SMat) -> Result<Self> {
        let lambda = similitude(r, &matrix)?;
        Ok(SymplecticElement { matrix, lambda })
    }

    pub fn identity<R: FiniteRing + ?Sized>(r: &R, m: usize) -> Self {
        SymplecticElement {
            matrix: SMat::identity(r, 2 * m),
            lambda: r.one(),
        }
    }

    pub fn m(&self) -> usize {
        self.matrix.n() / 2
    }

    pub fn is_sp(&self) -> bool {
        self.lambda == 1
    }

    pub fn mul<R: FiniteRing + ?Sized>(&self, r: &R, o: &Self) -> Self {
        SymplecticElement {
            matrix: self.matrix.mul(r, &o.matrix),
            lambda: r.mul(self.lambda, o.lambda),
        }
    }

    pub fn inverse<R: FiniteRing + ?Sized>(&self, r: &R) -> Self {
        SymplecticElement {
            matrix: self.matrix.inverse(r).expect("similitudes are invertible"),
            lambda: r.inv(self.lambda).expect("λ is a unit"),
        }
    }

    /// `v g` for a row vector `v` of length `2m`.
    pub fn apply<R: FiniteRing + ?Sized>(&self, r: &R, v: &[u8]) -> Vec<u8> {
        self.matrix.apply_row(r, v)
    }

    /// `a · g` for a scalar `a`.
    pub fn scale<R: FiniteRing + ?Sized>(&self, r: &R, a: u8) -> Self {
        SymplecticElement {
            matrix: self.matrix.scale(r, a),
            lambda: r.mul(self.lambda, r.mul(a, a)),
        }
    }
}

/// The Gram matrix `J` of `⟨,⟩`.
pub fn gram<R: FiniteRing + ?Sized>(r: &R, m: usize) -> SMat {
    let mut j = SMat::zero(2 * m);
    for i in 0..m {
        j.set(i, m + i, r.one());
        j.set(m + i, i, r.neg(r.one()));
    }
    j
}

/// `⟨v, w⟩ = Σ v_i w_{m+i} − v_{m+i} w_i`.
pub fn form<R: FiniteRing + ?Sized>(r: &R, v: &[u8], w: &[u8]) -> u8 {
    let m = v.len() / 2;
    (0..m).fold(0, |acc, i| {
        let t = r.sub(r.mul(v[i], w[m + i]), r.mul(v[m + i], w[i]));
        r.add(acc, t)
    })
}

/// The unique unit `λ` with `gJgᵀ = λJ`.
pub fn similitude<R: FiniteRing + ?Sized>(r: &R, g: &SMat) -> Result<u8> {
    let n = g.n();
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("matrix side {n} is not even")));
    }
    let m = n / 2;
    let j = gram(r, m);
    let p = g.mul(r, &j).mul(r, &g.transpose());
    let lambda = p.get(0, m);
    if p != j.scale(r, lambda) || !r.is_unit(lambda) {
        return Err(Error::NotInGroup(format!("{g:?} is not a symplectic similitude")));
    }
    Ok(lambda)
}

/// Named generators of `GSp(W)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Token {
    /// `[[1, b], [0, 1]]`, `b` symmetric.
    U(SMatRows),
    /// `[[a, 0], [0, a^{-T}]]`.
    D(SMatRows),
    /// `e_i ↦ −e_i*`, `e_i* ↦ e_i`.
    Omega,
    /// `diag(1, t)`.
    H(u8),
}

/// Serializable wrapper of an `m × m` block.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SMatRows(pub SMat);

impl Serialize for SMatRows {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SMatRows {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        SMat::from_rows(&rows)
            .map(SMatRows)
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::U(b) => write!(f, "U{:?}", b.0),
            Token::D(a) => write!(f, "D{:?}", a.0),
            Token::Omega => write!(f, "Ω"),
            Token::H(t) => write!(f, "H({t})"),
        }
    }
}

impl Token {
    pub fn u(b: SMat) -> Self {
        Token::U(SMatRows(b))
    }
    pub fn d(a: SMat) -> Self {
        Token::D(SMatRows(a))
    }
}

/// The matrix of a generator token at rank `m`.
pub fn make_generator<R: FiniteRing + ?Sized>(r: &R, m: usize, token: &Token) -> Result<SymplecticElement> {
    let one = SMat::identity(r, m);
    let zero = SMat::zero(m);
    match token {
        Token::U(b) => {
            let b = b.0;
            if b.n() != m || !b.is_symmetric() {
                return Err(Error::InvalidArgument(format!("U needs a symmetric {m}×{m} block, got {b:?}")));
            }
            Ok(SymplecticElement {
                matrix: SMat::from_blocks(&one, &b, &zero, &one),
                lambda: r.one(),
            })
        }
        Token::D(a) => {
            let a = a.0;
            if a.n() != m {
                return Err(Error::InvalidArgument(format!("D needs a {m}×{m} block")));
            }
            let ai = a
                .inverse(r)
                .ok_or_else(|| Error::InvalidArgument(format!("D needs an invertible block, got {a:?}")))?;
            Ok(SymplecticElement {
                matrix: SMat::from_blocks(&a, &zero, &zero, &ai.transpose()),
                lambda: r.one(),
            })
        }
        Token::Omega => Ok(omega_subset(r, m, &(0..m).collect::<Vec<_>>())),
        Token::H(t) => {
            if !r.is_unit(*t) {
                return Err(Error::InvalidArgument(format!("H needs a unit, got {t}")));
            }
            Ok(SymplecticElement {
                matrix: SMat::from_blocks(&one, &zero, &zero, &SMat::scalar(r, m, *t)),
                lambda: *t,
            })
        }
    }
}

/// `ω_S`: `e_i ↦ −e_i*`, `e_i* ↦ e_i` for `i ∈ S`, identity elsewhere.
pub fn omega_subset<R: FiniteRing + ?Sized>(r: &R, m: usize, s: &[usize]) -> SymplecticElement {
    let mut g = SMat::identity(r, 2 * m);
    for &i in s {
        g.set(i, i, 0);
        g.set(m + i, m + i, 0);
        g.set(i, m + i, r.neg(r.one()));
        g.set(m + i, i, r.one());
    }
    SymplecticElement {
        matrix: g,
        lambda: r.one(),
    }
}

/// `h_t = diag(1_m, t·1_m)`.
pub fn h_t<R: FiniteRing + ?Sized>(r: &R, m: usize, t: u8) -> Result<SymplecticElement> {
    make_generator(r, m, &Token::H(t))
}

/// Product of the tokens, left to right.
pub fn evaluate<R: FiniteRing + ?Sized>(r: &R, m: usize, word: &[Token]) -> Result<SymplecticElement> {
    let mut acc = SymplecticElement::identity(r, m);
    for t in word {
        acc = acc.mul(r, &make_generator(r, m, t)?);
    }
    Ok(acc)
}

fn symmetric_blocks<R: FiniteRing + ?Sized>(r: &R, m: usize) -> Vec<SMat> {
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let q = r.size();
    let total = q.pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut b = SMat::zero(m);
            for &(i, j) in &slots {
                let v = (code % q) as u8;
                code /= q;
                b.set(i, j, v);
                b.set(j, i, v);
            }
            b
        })
        .collect()
}

/// Factors `g ∈ Sp(W)` over a field into `U`, `D` and `Ω` tokens by
/// block elimination. Deterministic.
pub fn factorize<R: FiniteRing + ?Sized>(r: &R, g: &SymplecticElement) -> Result<Vec<Token>> {
    if similitude(r, &g.matrix)? != r.one() {
        return Err(Error::NotInGroup(format!("{g:?} has λ ≠ 1")));
    }
    let word = factor_sp(r, g, 0)?;
    Ok(word)
}

fn upper_word<R: FiniteRing + ?Sized>(r: &R, m: usize, a: &SMat, b: &SMat) -> Option<Vec<Token>> {
    let ai = a.inverse(r)?;
    let mut w = Vec::new();
    if *a != SMat::identity(r, m) {
        w.push(Token::d(*a));
    }
    let u = ai.mul(r, b);
    if !u.is_zero() {
        w.push(Token::u(u));
    }
    Some(w)
}

fn factor_sp<R: FiniteRing + ?Sized>(r: &R, g: &SymplecticElement, depth: usize) -> Result<Vec<Token>> {
    let m = g.m();
    let x = &g.matrix;
    let (a, b, c) = (x.block(0, 0, m), x.block(0, m, m), x.block(m, 0, m));
    if c.is_zero() {
        return upper_word(r, m, &a, &b)
            .ok_or_else(|| Error::NotInGroup(format!("{g:?}: singular diagonal block")));
    }
    if let Some(ai) = a.inverse(r) {
        // g = L(C A^{-1}) [[A, B], [0, D − C A^{-1} B]], L(c) = D(−I) Ω U(−c) Ω
        let cai = c.mul(r, &ai);
        let mut w = vec![
            Token::d(SMat::scalar(r, m, r.neg(r.one()))),
            Token::Omega,
            Token::u(cai.scale(r, r.neg(r.one()))),
            Token::Omega,
        ];
        w.extend(upper_word(r, m, &a, &b).expect("A invertible"));
        return Ok(w);
    }
    if depth > 2 {
        return Err(Error::NotInGroup(format!("factorization of {g:?} did not terminate")));
    }
    // U(b) g has top-left block A + bC
    for s in symmetric_blocks(r, m) {
        if a.add(r, &s.mul(r, &c)).inverse(r).is_some() {
            let ug = make_generator(r, m, &Token::u(s))?.mul(r, g);
            let mut w = vec![Token::u(s.scale(r, r.neg(r.one())))];
            w.extend(factor_sp(r, &ug, depth + 1)?);
            return Ok(w);
        }
    }
    // Ω g, and g = Ω^{-1}(Ω g) with Ω^{-1} = D(−I) Ω
    let om = make_generator(r, m, &Token::Omega)?;
    let mut w = vec![Token::d(SMat::scalar(r, m, r.neg(r.one()))), Token::Omega];
    w.extend(factor_sp(r, &om.mul(r, g), depth + 1)?);
    Ok(w)
}

/// Factors `g ∈ GSp(W)`: `g = H(λ) · (H(λ)^{-1} g)`.
pub fn factorize_gsp<R: FiniteRing + ?Sized>(r: &R, g: &SymplecticElement) -> Result<Vec<Token>> {
    let lambda = similitude(r, &g.matrix)?;
    if lambda == r.one() {
        return factorize(r, g);
    }
    let m = g.m();
    let hinv = make_generator(r, m, &Token::H(r.inv(lambda).expect("unit")))?;
    let mut w = vec![Token::H(lambda)];
    w.extend(factorize(r, &hinv.mul(r, g))?);
    Ok(w)
}

/// Group law of `GSp(W)` over a ring.
pub struct SymplecticLaw<R: ?Sized> {
    pub ring: Arc<R>,
    pub m: usize,
}

impl<R: FiniteRing + ?Sized> GroupLaw<SymplecticElement> for SymplecticLaw<R> {
    fn identity(&self) -> SymplecticElement {
        SymplecticElement::identity(&*self.ring, self.m)
    }
    fn mul(&self, a: &SymplecticElement, b: &SymplecticElement) -> SymplecticElement {
        a.mul(&*self.ring, b)
    }
    fn inv(&self, a: &SymplecticElement) -> SymplecticElement {
        a.inverse(&*self.ring)
    }
}

/// A generator of the unit group of a finite field.
pub fn unit_generator<R: FiniteRing + ?Sized>(r: &R) -> u8 {
    let units = r.units();
    let n = units.len() as u64;
    units
        .into_iter()
        .find(|&u| (1..n).all(|k| r.pow(u, k) != r.one()))
        .expect("unit group of a field is cyclic")
}

/// Generators of `Sp_{2m}` over a field.
pub fn sp_generators<R: FiniteRing + ?Sized>(r: &R, m: usize) -> Vec<SymplecticElement> {
    let mut tokens = vec![Token::Omega];
    // codes Σ c_i p^i: the elements with a single coordinate equal to 1
    let p = (2..=r.size()).find(|&k| r.from_int(k as i64) == 0).unwrap_or(r.size());
    let additive_basis: Vec<u8> = std::iter::successors(Some(1usize), |c| Some(c * p))
        .take_while(|&c| c < r.size())
        .map(|c| c as u8)
        .collect();
    for i in 0..m {
        for j in i..m {
            for &x in &additive_basis {
                let mut b = SMat::zero(m);
                b.set(i, j, x);
                b.set(j, i, x);
                tokens.push(Token::u(b));
            }
        }
    }
    let mut a = SMat::identity(r, m);
    a.set(0, 0, unit_generator(r));
    tokens.push(Token::d(a));
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = SMat::identity(r, m);
                e.set(i, j, r.one());
                tokens.push(Token::d(e));
            }
        }
    }
    tokens
        .iter()
        .map(|t| make_generator(r, m, t).expect("valid generator"))
        .collect()
}

/// Generators of `GSp_{2m}` over a field.
pub fn gsp_generators<R: FiniteRing + ?Sized>(r: &R, m: usize) -> Vec<SymplecticElement> {
    let mut g = sp_generators(r, m);
    g.push(make_generator(r, m, &Token::H(unit_generator(r))).expect("unit"));
    g
}

/// `|Sp_{2m}(F_q)| = q^{m²} Π (q^{2i} − 1)`.
pub fn sp_order(q: u64, m: u32) -> u64 {
    q.pow(m * m) * (1..=m).map(|i| q.pow(2 * i) - 1).product::<u64>()
}

/// All of `Sp_{2m}(F_q)`, checked against the order formula.
pub fn enumerate_sp<R: FiniteRing + 'static>(r: Arc<R>, m: usize, budget: usize) -> Result<FiniteGroup<SymplecticElement>> {
    let expected = sp_order(r.size() as u64, m as u32);
    if expected as usize > budget {
        return Err(Error::Budget(format!("|Sp| = {expected} exceeds {budget}")));
    }
    let gens = sp_generators(&*r, m);
    let law = Arc::new(SymplecticLaw { ring: r, m });
    let g = FiniteGroup::generate(law, &gens, budget)?;
    if g.order() as u64 != expected {
        return Err(Error::Verification(format!("enumerated {} elements, expected {expected}", g.order())));
    }
    Ok(g)
}

/// All of `GSp_{2m}(F_q)`.
pub fn enumerate_gsp<R: FiniteRing + 'static>(r: Arc<R>, m: usize, budget: usize) -> Result<FiniteGroup<SymplecticElement>> {
    let expected = sp_order(r.size() as u64, m as u32) * (r.size() as u64 - 1);
    if expected as usize > budget {
        return Err(Error::Budget(format!("|GSp| = {expected} exceeds {budget}")));
    }
    let gens = gsp_generators(&*r, m);
    let law = Arc::new(SymplecticLaw { ring: r, m });
    let g = FiniteGroup::generate(law, &gens, budget)?;
    if g.order() as u64 != expected {
        return Err(Error::Verification(format!("enumerated {} elements, expected {expected}", g.order())));
    }
    Ok(g)
}

/// A random element as a product of `len` random generators.
pub fn random_element<R: FiniteRing + ?Sized, G: Rng + ?Sized>(
    r: &R,
    gens: &[SymplecticElement],
    len: usize,
    rng: &mut G,
) -> SymplecticElement {
    let m = gens[0].m();
    (0..len).fold(SymplecticElement::identity(r, m), |acc, _| {
        acc.mul(r, &gens[rng.gen_range(0..gens.len())])
    })
}

/// Lifts `g ∈ GSp(W)` over `F_{2^d}` to `GSp(W̃)` over `GR(4, d)` through
/// its factorization: `U`, `D` lift coordinate-wise, `H(t)` by the
/// Teichmüller representative.
pub fn lift_to_ring(ring: &GaloisRing, g: &SymplecticElement) -> Result<SymplecticElement> {
    let f = ring.residue_field();
    let word = factorize_gsp(&**f, g)?;
    lift_word(ring, g.m(), &word)
}

/// Lifts every token of a word over the residue field and evaluates it.
pub fn lift_word(ring: &GaloisRing, m: usize, word: &[Token]) -> Result<SymplecticElement> {
    let lifted: Vec<Token> = word
        .iter()
        .map(|t| match t {
            Token::U(b) => Token::u(b.0.map(|x| ring.lift(x))),
            Token::D(a) => Token::d(a.0.map(|x| ring.lift(x))),
            Token::Omega => Token::Omega,
            Token::H(t) => Token::H(ring.teichmuller(*t)),
        })
        .collect();
    evaluate(ring, m, &lifted)
}

/// Entry-wise reduction `GSp(W̃) → GSp(W)`.
pub fn reduce_from_ring(ring: &GaloisRing, g: &SymplecticElement) -> SymplecticElement {
    SymplecticElement {
        matrix: g.matrix.map(|x| ring.reduce(x)),
        lambda: ring.reduce(g.lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::group::DEFAULT_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Arc<FiniteField> {
        FiniteField::shared(q).unwrap()
    }

    #[test]
    fn omega_matrix_and_lambdas() {
        let f = field(3);
        let om = make_generator(&*f, 1, &Token::Omega).unwrap();
        assert_eq!(om.matrix.rows(), vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(similitude(&*f, &om.matrix).unwrap(), 1);
        let a = SMat::from_rows(&[vec![2]]).unwrap();
        let d = make_generator(&*f, 1, &Token::d(a)).unwrap();
        assert_eq!(similitude(&*f, &d.matrix).unwrap(), 1);
        let f5 = field(5);
        let g = SMat::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(similitude(&*f5, &g).unwrap(), 2);
        for t in 1..5u8 {
            for s in 1..5u8 {
                let ht = h_t(&*f5, 1, t).unwrap();
                assert_eq!(ht.lambda, t);
                let hs = h_t(&*f5, 1, s).unwrap();
                assert_eq!(ht.mul(&*f5, &hs), h_t(&*f5, 1, f5.mul(t, s)).unwrap());
            }
        }
    }

    #[test]
    fn bad_tokens_are_rejected() {
        let f = field(3);
        let b = SMat::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(make_generator(&*f, 2, &Token::u(b)).is_err());
        let a = SMat::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(make_generator(&*f, 2, &Token::d(a)).is_err());
        assert!(make_generator(&*f, 1, &Token::H(0)).is_err());
        let not = SMat::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(similitude(&*f, &not).is_err());
    }

    #[test]
    fn small_factorizations() {
        let f = field(3);
        assert!(factorize(&*f, &SymplecticElement::identity(&*f, 1)).unwrap().is_empty());
        let b = SMat::from_rows(&[vec![2]]).unwrap();
        let u = make_generator(&*f, 1, &Token::u(b)).unwrap();
        assert_eq!(factorize(&*f, &u).unwrap(), vec![Token::u(b)]);
        let om = make_generator(&*f, 1, &Token::Omega).unwrap();
        let w = factorize(&*f, &om).unwrap();
        assert_eq!(evaluate(&*f, 1, &w).unwrap(), om);
    }

    #[test]
    fn group_orders() {
        for (q, n) in [(2u32, 6usize), (3, 24), (4, 60), (5, 120), (7, 336)] {
            let g = enumerate_sp(field(q), 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(g.order(), n);
        }
        assert_eq!(enumerate_sp(field(2), 2, DEFAULT_BUDGET).unwrap().order(), 720);
        assert_eq!(enumerate_gsp(field(5), 1, DEFAULT_BUDGET).unwrap().order(), 480);
        assert!(matches!(enumerate_sp(field(3), 2, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn factorization_round_trips_exhaustively() {
        for (q, m) in [(2u32, 1usize), (3, 1), (4, 1), (5, 1), (7, 1), (2, 2), (3, 2)] {
            let f = field(q);
            let g = enumerate_gsp(f.clone(), m, DEFAULT_BUDGET).unwrap();
            for x in g.elements() {
                let w = factorize_gsp(&*f, x).unwrap();
                assert_eq!(evaluate(&*f, m, &w).unwrap(), *x, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn similitude_is_multiplicative() {
        let f = field(7);
        let gens = gsp_generators(&*f, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_element(&*f, &gens, 12, &mut rng);
            let b = random_element(&*f, &gens, 12, &mut rng);
            let ab = a.mul(&*f, &b);
            assert_eq!(similitude(&*f, &ab.matrix).unwrap(), f.mul(a.lambda, b.lambda));
        }
    }

    #[test]
    fn omega_subset_is_symplectic() {
        let f = field(5);
        for s in [vec![], vec![0], vec![1], vec![0, 1]] {
            let w = omega_subset(&*f, 2, &s);
            assert_eq!(similitude(&*f, &w.matrix).unwrap(), 1);
        }
        assert_eq!(omega_subset(&*f, 2, &[0, 1]), make_generator(&*f, 2, &Token::Omega).unwrap());
    }

    #[test]
    fn lifting_reduces_back() {
        for d in 1..=2 {
            let ring = GaloisRing::shared(d).unwrap();
            let f = ring.residue_field().clone();
            let g = enumerate_gsp(f.clone(), 1, DEFAULT_BUDGET).unwrap();
            for x in g.elements() {
                let lx = lift_to_ring(&ring, x).unwrap();
                similitude(&*ring, &lx.matrix).unwrap();
                assert_eq!(reduce_from_ring(&ring, &lx), *x);
            }
        }
        let ring = GaloisRing::shared(1).unwrap();
        let b = SMat::from_rows(&[vec![1]]).unwrap();
        let u = make_generator(&**ring.residue_field(), 1, &Token::u(b)).unwrap();
        let lu = lift_to_ring(&ring, &u).unwrap();
        assert_eq!(lu.matrix.rows(), vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn token_json_round_trip() {
        let t = Token::u(SMat::from_rows(&[vec![1, 2], vec![2, 0]]).unwrap());
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<Token>(&s).unwrap(), t);
    }
}
