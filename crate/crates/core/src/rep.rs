//! Matrix representations of finite groups: characters, induction,
//! restriction multiplicities, intertwiners, projective cocycles and the
//! coefficient-reduction test for cocycles valued in roots of unity.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupLaw, Pair, SharedLaw};
use crate::linalg::{inner_product, nullspace, rational, solve_mod, solve_rational, CycloMatrix, MonomialMatrix};

/// A homomorphism into `GL_n` of a cyclotomic field.
pub trait MatrixRep<E>: Send + Sync {
    fn dim(&self) -> usize;
    fn matrix(&self, x: &E) -> Result<Arc<CycloMatrix>>;
    fn character(&self, x: &E) -> Result<CyclotomicNumber> {
        Ok(self.matrix(x)?.trace())
    }
}

pub type SharedRep<E> = Arc<dyn MatrixRep<E>>;
pub type MatrixFn<E> = Arc<dyn Fn(&E) -> Result<CycloMatrix> + Send + Sync>;

/// A representation given by a closure, with matrices memoized per element.
pub struct FnRep<E> {
    dim: usize,
    f: MatrixFn<E>,
    cache: RwLock<HashMap<E, Arc<CycloMatrix>>>,
}

impl<E: Element> FnRep<E> {
    pub fn new(dim: usize, f: MatrixFn<E>) -> Self {
        FnRep {
            dim,
            f,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl<E: Element> MatrixRep<E> for FnRep<E> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn matrix(&self, x: &E) -> Result<Arc<CycloMatrix>> {
        if let Some(m) = self.cache.read().unwrap().get(x) {
            return Ok(m.clone());
        }
        let m = Arc::new((self.f)(x)?);
        if m.n() != self.dim {
            return Err(Error::Mismatch(format!("matrix of size {} in a rep of dimension {}", m.n(), self.dim)));
        }
        self.cache.write().unwrap().insert(x.clone(), m.clone());
        Ok(m)
    }
}

pub type MonomialFn<H> = Arc<dyn Fn(&H) -> MonomialMatrix + Send + Sync>;

/// `[g, h] ↦ π(g) π(h)` on a semidirect product, where `π(h)` is monomial.
/// Multiplicativity needs `π(g)⁻¹ π(h) π(g) = π(h·g)`.
pub struct SemidirectRep<G, H> {
    pub g_part: SharedRep<G>,
    pub h_part: MonomialFn<H>,
}

impl<G: Element, H: Element> MatrixRep<Pair<G, H>> for SemidirectRep<G, H> {
    fn dim(&self) -> usize {
        self.g_part.dim()
    }
    fn matrix(&self, x: &Pair<G, H>) -> Result<Arc<CycloMatrix>> {
        let a = self.g_part.matrix(&x.g)?;
        Ok(Arc::new((self.h_part)(&x.h).left_mul(&a)))
    }
    fn character(&self, x: &Pair<G, H>) -> Result<CyclotomicNumber> {
        let a = self.g_part.matrix(&x.g)?;
        Ok((self.h_part)(&x.h).trace_left_mul(&a))
    }
}

/// Precomposition with a map of groups, e.g. the restriction along an
/// embedding or the pullback along a quotient.
pub struct PulledBack<E, F> {
    pub inner: SharedRep<F>,
    pub map: Arc<dyn Fn(&E) -> Result<F> + Send + Sync>,
}

impl<E: Element, F: Element> MatrixRep<E> for PulledBack<E, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn matrix(&self, x: &E) -> Result<Arc<CycloMatrix>> {
        self.inner.matrix(&(self.map)(x)?)
    }
    fn character(&self, x: &E) -> Result<CyclotomicNumber> {
        self.inner.character(&(self.map)(x)?)
    }
}

/// Character values on a list of elements, in parallel.
pub fn character_values<E: Element>(rep: &dyn MatrixRep<E>, elements: &[E]) -> Result<Vec<CyclotomicNumber>> {
    elements.par_iter().map(|x| rep.character(x)).collect()
}

/// First pair `(a, b)` with `ρ(a)ρ(b) ≠ ρ(ab)`, if any.
pub fn homomorphism_witness<E: Element>(
    rep: &dyn MatrixRep<E>,
    law: &dyn GroupLaw<E>,
    pairs: &[(E, E)],
) -> Result<Option<(E, E)>> {
    let bad: Result<Vec<Option<(E, E)>>> = pairs
        .par_iter()
        .map(|(a, b)| {
            let lhs = rep.matrix(a)?.mul(&*rep.matrix(b)?);
            let rhs = rep.matrix(&law.mul(a, b))?;
            Ok((lhs != *rhs).then(|| (a.clone(), b.clone())))
        })
        .collect();
    Ok(bad?.into_iter().flatten().next())
}

pub type Membership<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;

/// `Ind_H^G σ` for `G = ⋃ r_i H`; `H` is given by a membership test so the
/// ambient group never has to be enumerated.
pub struct InducedRep<E> {
    law: SharedLaw<E>,
    member: Membership<E>,
    sigma: SharedRep<E>,
    reps: Vec<E>,
    rep_invs: Vec<E>,
}

impl<E: Element> InducedRep<E> {
    /// Checks that the representatives lie in pairwise distinct left cosets.
    pub fn new(law: SharedLaw<E>, member: Membership<E>, sigma: SharedRep<E>, reps: Vec<E>) -> Result<Self> {
        let rep_invs: Vec<E> = reps.iter().map(|r| law.inv(r)).collect();
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                if i != j && member(&law.mul(&rep_invs[i], &reps[j])) {
                    return Err(Error::InvalidArgument(format!(
                        "coset representatives {:?} and {:?} lie in the same coset",
                        reps[i], reps[j]
                    )));
                }
            }
        }
        Ok(InducedRep {
            law,
            member,
            sigma,
            reps,
            rep_invs,
        })
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[E] {
        &self.reps
    }

    fn conj(&self, i: usize, x: &E, j: usize) -> E {
        self.law.mul(&self.law.mul(&self.rep_invs[i], x), &self.reps[j])
    }
}

impl<E: Element> MatrixRep<E> for InducedRep<E> {
    fn dim(&self) -> usize {
        self.reps.len() * self.sigma.dim()
    }

    fn matrix(&self, x: &E) -> Result<Arc<CycloMatrix>> {
        let k = self.sigma.dim();
        let mut out = CycloMatrix::zero(self.dim());
        for j in 0..self.reps.len() {
            let i = (0..self.reps.len())
                .find(|&i| (self.member)(&self.conj(i, x, j)))
                .ok_or_else(|| Error::Verification("coset representatives do not cover the group".into()))?;
            let block = self.sigma.matrix(&self.conj(i, x, j))?;
            for a in 0..k {
                for b in 0..k {
                    out.set(i * k + a, j * k + b, block.get(a, b).clone());
                }
            }
        }
        Ok(Arc::new(out))
    }

    fn character(&self, x: &E) -> Result<CyclotomicNumber> {
        let mut acc = CyclotomicNumber::zero();
        for i in 0..self.reps.len() {
            let y = self.conj(i, x, i);
            if (self.member)(&y) {
                acc += &self.sigma.character(&y)?;
            }
        }
        Ok(acc)
    }
}

/// Greedy choice of `index` left-coset representatives among `candidates`.
pub fn coset_representatives<E: Element>(
    law: &dyn GroupLaw<E>,
    member: &dyn Fn(&E) -> bool,
    candidates: impl IntoIterator<Item = E>,
    index: usize,
) -> Result<Vec<E>> {
    let mut reps: Vec<E> = Vec::with_capacity(index);
    let mut invs: Vec<E> = Vec::with_capacity(index);
    for c in candidates {
        if reps.len() == index {
            break;
        }
        if invs.iter().all(|ri| !member(&law.mul(ri, &c))) {
            invs.push(law.inv(&c));
            reps.push(c);
        }
    }
    if reps.len() < index {
        return Err(Error::InvalidArgument(format!(
            "found only {} of {index} coset representatives",
            reps.len()
        )));
    }
    Ok(reps)
}

/// Multiplicities of candidate characters inside a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub multiplicities: Vec<BigRational>,
    /// `⟨χ, χ⟩ − Σ mᵢ ⟨χ, χᵢ⟩`: zero iff the candidates explain `χ`.
    pub residual: BigRational,
    pub norm: BigRational,
}

/// Solves the Gram system for the candidate multiplicities.
pub fn decompose(chi: &[CyclotomicNumber], candidates: &[Vec<CyclotomicNumber>]) -> Result<Decomposition> {
    let norm = inner_product(chi, chi)?;
    let b: Vec<BigRational> = candidates.iter().map(|c| inner_product(chi, c)).collect::<Result<_>>()?;
    let gram: Vec<Vec<BigRational>> = candidates
        .iter()
        .map(|ci| candidates.iter().map(|cj| inner_product(ci, cj)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let m = solve_rational(&gram, &b)
        .ok_or_else(|| Error::InvalidArgument("candidate characters are linearly dependent".into()))?;
    let explained = m.iter().zip(&b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
    Ok(Decomposition {
        residual: &norm - explained,
        multiplicities: m,
        norm,
    })
}

/// Basis of `{M : M·A = B·M}` over all pairs `(A, B)`.
pub fn intertwiner_space(pairs: &[(CycloMatrix, CycloMatrix)]) -> Result<Vec<CycloMatrix>> {
    let Some((a0, _)) = pairs.first() else {
        return Err(Error::InvalidArgument("no generators given".into()));
    };
    let n = a0.n();
    let var = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::with_capacity(pairs.len() * n * n);
    for (a, b) in pairs {
        if a.n() != n || b.n() != n {
            return Err(Error::Mismatch("intertwining pairs of different sizes".into()));
        }
        for i in 0..n {
            for j in 0..n {
                // (M A)_{ij} − (B M)_{ij}
                let mut row = vec![CyclotomicNumber::zero(); n * n];
                for k in 0..n {
                    row[var(i, k)] += a.get(k, j);
                    row[var(k, j)] -= b.get(i, k);
                }
                rows.push(row);
            }
        }
    }
    Ok(nullspace(&rows, n * n)
        .into_iter()
        .map(|v| CycloMatrix::from_fn(n, |i, j| v[var(i, j)].clone()))
        .collect())
}

/// The intertwiner `M·A = B·M`, required unique up to scalar, normalized by
/// [`normalize_unitary`].
pub fn solve_intertwiner(pairs: &[(CycloMatrix, CycloMatrix)]) -> Result<CycloMatrix> {
    let space = intertwiner_space(pairs)?;
    match space.len() {
        0 => Err(Error::Verification("the representations are not equivalent".into())),
        1 => Ok(normalize_unitary(&space[0])),
        k => Err(Error::Verification(format!(
            "intertwiner space has dimension {k}; the representations are not irreducible"
        ))),
    }
}

/// Rescales `M` so its first nonzero entry is a positive rational and,
/// when `M M† = c·I` with `c` rational, so that `M` is unitary.
pub fn normalize_unitary(m: &CycloMatrix) -> CycloMatrix {
    let Some(e) = m.entries().iter().find(|x| !x.is_zero()) else {
        return m.clone();
    };
    let m1 = m.scale(&e.inverse().expect("nonzero entry"));
    let Some(c) = m1.mul(&m1.conj_transpose()).as_scalar().and_then(|c| c.to_rational()) else {
        return m1;
    };
    if !c.is_positive() {
        return m1;
    }
    match CyclotomicNumber::sqrt_positive_rational(&c).and_then(|s| s.inverse()) {
        Ok(s) => m1.scale(&s),
        Err(_) => m1,
    }
}

/// `c` with `A·B = c·P`, or an error if `A·B` is not a multiple of `P`.
pub fn cocycle_value(a: &CycloMatrix, b: &CycloMatrix, ab: &CycloMatrix) -> Result<CyclotomicNumber> {
    a.mul(b)
        .ratio_to(ab)
        .ok_or_else(|| Error::Verification("product is not a scalar multiple of the image of the product".into()))
}

/// The full table `c(g, h)` of a projective assignment `M` on a finite group.
pub fn extract_cocycle<E: Element>(group: &FiniteGroup<E>, mats: &[CycloMatrix]) -> Result<Vec<Vec<CyclotomicNumber>>> {
    let els = group.elements();
    if mats.len() != els.len() {
        return Err(Error::Mismatch("one matrix per group element is required".into()));
    }
    (0..els.len())
        .into_par_iter()
        .map(|i| {
            (0..els.len())
                .map(|j| {
                    let k = group.index_of(&group.mul(&els[i], &els[j])).expect("closed group");
                    cocycle_value(&mats[i], &mats[j], &mats[k]).map_err(|_| {
                        Error::Verification(format!("not projective at ({:?}, {:?})", els[i], els[j]))
                    })
                })
                .collect()
        })
        .collect()
}

/// Exponent form of a root of unity inside `μ_n`.
pub fn root_exponent(c: &CyclotomicNumber, n: u64) -> Result<u64> {
    let (ord, k) = c
        .detect_root_of_unity()
        .ok_or_else(|| Error::Verification(format!("{c} is not a root of unity")))?;
    if n % ord as u64 != 0 {
        return Err(Error::Verification(format!("{c} is not in μ_{n}")));
    }
    Ok(k as u64 * (n / ord as u64))
}

/// Least `N` with every value in `μ_N`.
pub fn root_order<'a>(values: impl IntoIterator<Item = &'a CyclotomicNumber>) -> Result<u64> {
    values.into_iter().try_fold(1u64, |acc, c| {
        let (ord, _) = c
            .detect_root_of_unity()
            .ok_or_else(|| Error::Verification(format!("{c} is not a root of unity")))?;
        Ok(num_integer::lcm(acc, ord as u64))
    })
}

/// A `μ_n`-valued 2-cocycle recorded on the edges `(g, s)` of a Cayley
/// graph. For a cocycle, these values determine its class: if
/// `c'(g, s) = 0` for all generators then `c' = 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorCocycle {
    pub n: u64,
    pub identity: usize,
    pub gens: Vec<usize>,
    /// `right[g][j]` is the index of `g · gens[j]`.
    pub right: Vec<Vec<usize>>,
    /// `exps[g][j]`: `c(g, gens[j]) = ζ_n^{exps[g][j]}`.
    pub exps: Vec<Vec<u64>>,
}

impl GeneratorCocycle {
    /// Restricts a full exponent table to generator edges.
    pub fn from_table<E: Element>(group: &FiniteGroup<E>, gens: &[E], table: &[Vec<u64>], n: u64) -> Result<Self> {
        let gi: Vec<usize> = gens
            .iter()
            .map(|g| group.index_of(g).ok_or_else(|| Error::NotInGroup(format!("{g:?}"))))
            .collect::<Result<_>>()?;
        let els = group.elements();
        let right: Vec<Vec<usize>> = els
            .iter()
            .map(|x| gens.iter().map(|s| group.index_of(&group.mul(x, s)).expect("closed")).collect())
            .collect();
        let exps = (0..els.len()).map(|g| gi.iter().map(|&s| table[g][s] % n).collect()).collect();
        Ok(GeneratorCocycle {
            n,
            identity: group.index_of(&group.identity()).expect("identity"),
            gens: gi,
            right,
            exps,
        })
    }

    pub fn order(&self) -> usize {
        self.right.len()
    }

    /// Finds `t: G → Z/ambient` (exponents of `μ_ambient`) such that
    /// `c(g, h) t(g) t(h) / t(gh)` lies in `μ_target` on every generator
    /// edge, or proves that none exists. `ambient` must be a multiple of
    /// `lcm(n, target)`.
    pub fn reduce(&self, target: u64, ambient: u64) -> Result<Option<Vec<u64>>> {
        if ambient % num_integer::lcm(self.n, target) != 0 {
            return Err(Error::InvalidArgument(format!(
                "ambient order {ambient} is not a multiple of lcm({}, {target})",
                self.n
            )));
        }
        let k = ambient / target;
        let ki = k as i64;
        let scale = (ambient / self.n) as i64;
        let s = self.gens.len();
        let order = self.order();
        // t(g) = a_g · x + b_g (mod k), x = (t(s_j))_j
        let mut a: Vec<Option<Vec<i64>>> = vec![None; order];
        let mut b = vec![0i64; order];
        a[self.identity] = Some(vec![0; s]);
        let mut queue = VecDeque::from([self.identity]);
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut rhs: Vec<i64> = Vec::new();
        while let Some(g) = queue.pop_front() {
            let ag = a[g].clone().expect("visited");
            for j in 0..s {
                let h = self.right[g][j];
                let c = (self.exps[g][j] as i64 * scale).rem_euclid(ki);
                // c + t(g) + t(s_j) − t(h) ≡ 0
                let mut lhs = ag.clone();
                lhs[j] += 1;
                match &a[h] {
                    None => {
                        a[h] = Some(lhs.iter().map(|v| v.rem_euclid(ki)).collect());
                        b[h] = (b[g] + c).rem_euclid(ki);
                        queue.push_back(h);
                    }
                    Some(ah) => {
                        let row: Vec<i64> = lhs.iter().zip(ah).map(|(p, q)| (p - q).rem_euclid(ki)).collect();
                        rows.push(row);
                        rhs.push((b[h] - b[g] - c).rem_euclid(ki));
                    }
                }
            }
        }
        if a.iter().any(|x| x.is_none()) {
            return Err(Error::InvalidArgument("generators do not generate the group".into()));
        }
        let Some(x) = solve_mod(&rows, &rhs, s, k) else {
            return Ok(None);
        };
        let t: Vec<u64> = (0..order)
            .map(|g| {
                let ag = a[g].as_ref().expect("visited");
                let v = ag.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() + b[g];
                v.rem_euclid(ki) as u64
            })
            .collect();
        self.check_reduction(&t, target, ambient)?;
        Ok(Some(t))
    }

    /// Confirms that `t` moves every generator-edge value into `μ_target`.
    pub fn check_reduction(&self, t: &[u64], target: u64, ambient: u64) -> Result<()> {
        let k = ambient / target;
        let scale = ambient / self.n;
        for g in 0..self.order() {
            for (j, &s) in self.gens.iter().enumerate() {
                let h = self.right[g][j];
                let v = (self.exps[g][j] * scale + t[g] + t[s] + ambient - t[h] % ambient) % ambient;
                if v % k != 0 {
                    return Err(Error::Verification(format!("rescaling fails on edge ({g}, {s})")));
                }
            }
        }
        Ok(())
    }
}

/// `Σ_{p | n} (p-part of |G|)`-enlarged ambient order: a cochain
/// `t: G → C^×` whose coboundary lies in `μ_n` can be taken in `μ_{n·|G|_n}`.
pub fn ambient_order(n: u64, group_order: u64) -> u64 {
    let mut out = n;
    let mut rest = group_order;
    let mut p = 2;
    let mut primes = Vec::new();
    let mut m = n;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for p in primes {
        while rest % p == 0 {
            rest /= p;
            out *= p;
        }
    }
    out
}

/// `⟨χ, χ⟩` together with whether it equals one.
pub fn is_irreducible(chi: &[CyclotomicNumber]) -> Result<(BigRational, bool)> {
    let n = inner_product(chi, chi)?;
    let one = n == rational(1);
    Ok((n, one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{CyclicLaw, ExtensionLaw, SemidirectLaw};

    fn cyclic_char(n: u32, k: i64) -> SharedRep<u32> {
        Arc::new(FnRep::new(
            1,
            Arc::new(move |x: &u32| Ok(CycloMatrix::scalar(1, CyclotomicNumber::root_of_unity(n, k * *x as i64)))),
        ))
    }

    #[test]
    fn induced_from_cyclic_subgroup() {
        // Z/6 ⊃ 2Z/6, induce a faithful character of the subgroup
        let law: SharedLaw<u32> = Arc::new(CyclicLaw(6));
        let sigma: SharedRep<u32> = Arc::new(FnRep::new(
            1,
            Arc::new(|x: &u32| Ok(CycloMatrix::scalar(1, CyclotomicNumber::root_of_unity(3, (*x / 2) as i64)))),
        ));
        let member: Membership<u32> = Arc::new(|x| x % 2 == 0);
        let ind = InducedRep::new(law.clone(), member.clone(), sigma, vec![0, 1]).unwrap();
        assert!(InducedRep::new(law.clone(), member, cyclic_char(6, 1), vec![0, 2]).is_err());
        let group = FiniteGroup::generate(law.clone(), &[1], 100).unwrap();
        let pairs: Vec<(u32, u32)> = (0..6).flat_map(|a| (0..6).map(move |b| (a, b))).collect();
        assert!(homomorphism_witness(&ind, &*law, &pairs).unwrap().is_none());
        let chi = character_values(&ind, group.elements()).unwrap();
        for (x, c) in group.elements().iter().zip(&chi) {
            assert_eq!(*c, ind.matrix(x).unwrap().trace());
        }
        // the induced character is the sum of the two characters of Z/6 restricting to σ
        let c1 = character_values(&*cyclic_char(6, 1), group.elements()).unwrap();
        let c2 = character_values(&*cyclic_char(6, 4), group.elements()).unwrap();
        let d = decompose(&chi, &[c1, c2]).unwrap();
        assert_eq!(d.multiplicities, vec![rational(1), rational(1)]);
        assert!(d.residual.is_zero());
        // candidates that do not exhaust leave a residual
        let c1 = character_values(&*cyclic_char(6, 1), group.elements()).unwrap();
        let d = decompose(&chi, &[c1]).unwrap();
        assert_eq!(d.residual, rational(1));
    }

    #[test]
    fn frobenius_reciprocity() {
        // S3 = Z/3 ⋊ Z/2, induce a character from Z/3
        let act: crate::group::ActionFn<u32, u32> = Arc::new(|h: &u32, g: &u32| if *g == 0 { *h } else { (3 - h) % 3 });
        let law: SharedLaw<Pair<u32, u32>> = Arc::new(SemidirectLaw {
            g_law: Arc::new(CyclicLaw(2)),
            h_law: Arc::new(CyclicLaw(3)),
            act,
        });
        let group = FiniteGroup::generate(law.clone(), &[Pair::new(1, 0), Pair::new(0, 1)], 100).unwrap();
        assert_eq!(group.order(), 6);
        let sigma: SharedRep<Pair<u32, u32>> = Arc::new(FnRep::new(
            1,
            Arc::new(|x: &Pair<u32, u32>| Ok(CycloMatrix::scalar(1, CyclotomicNumber::root_of_unity(3, x.h as i64)))),
        ));
        let member: Membership<Pair<u32, u32>> = Arc::new(|x| x.g == 0);
        let reps = coset_representatives(&*law, &*member, group.elements().to_vec(), 2).unwrap();
        let ind = InducedRep::new(law.clone(), member, sigma.clone(), reps).unwrap();
        let chi = character_values(&ind, group.elements()).unwrap();
        let (norm, irr) = is_irreducible(&chi).unwrap();
        assert!(irr, "{norm}");
        // ⟨Ind σ, Ind σ⟩_G = ⟨σ, Res Ind σ⟩_H
        let sub: Vec<_> = group.elements().iter().filter(|x| x.g == 0).cloned().collect();
        let lhs = inner_product(&chi, &chi).unwrap();
        let rhs = inner_product(
            &character_values(&*sigma, &sub).unwrap(),
            &character_values(&ind, &sub).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        // the 2-dimensional rep intertwines with itself only by scalars
        let gens = [Pair::new(1, 0), Pair::new(0, 1)];
        let pairs: Vec<_> = gens
            .iter()
            .map(|g| ((*ind.matrix(g).unwrap()).clone(), (*ind.matrix(g).unwrap()).clone()))
            .collect();
        let m = solve_intertwiner(&pairs).unwrap();
        assert_eq!(m, CycloMatrix::identity(2));
    }

    #[test]
    fn intertwiner_between_conjugate_models() {
        let z3 = |k| CyclotomicNumber::root_of_unity(3, k);
        let a = CycloMatrix::from_rows(vec![vec![z3(1), CyclotomicNumber::zero()], vec![CyclotomicNumber::zero(), z3(2)]]).unwrap();
        let p = CycloMatrix::from_rows(vec![
            vec![CyclotomicNumber::zero(), CyclotomicNumber::one()],
            vec![CyclotomicNumber::one(), CyclotomicNumber::zero()],
        ])
        .unwrap();
        let s = CycloMatrix::from_rows(vec![
            vec![CyclotomicNumber::from_int(1), CyclotomicNumber::from_int(1)],
            vec![CyclotomicNumber::from_int(1), CyclotomicNumber::from_int(-1)],
        ])
        .unwrap();
        let si = s.inverse().unwrap();
        let pairs = vec![(a.clone(), s.mul(&a).mul(&si)), (p.clone(), s.mul(&p).mul(&si))];
        let m = solve_intertwiner(&pairs).unwrap();
        for (x, y) in &pairs {
            assert_eq!(m.mul(x), y.mul(&m));
        }
        assert_eq!(m.mul(&m.conj_transpose()), CycloMatrix::identity(2));
    }

    #[test]
    fn cocycle_reduction_controls() {
        // Z/2 with c(1, 1) = −1: the extension is Z/4
        let law: SharedLaw<u32> = Arc::new(CyclicLaw(2));
        let group = FiniteGroup::generate(law, &[1], 10).unwrap();
        let table = vec![vec![0, 0], vec![0, 1]];
        let ext = ExtensionLaw {
            base: Arc::new(CyclicLaw(2)) as SharedLaw<u32>,
            coeff: Arc::new(CyclicLaw(2)) as SharedLaw<u32>,
            cocycle: Arc::new(|a: &u32, b: &u32| (*a * *b) % 2),
        };
        let e = FiniteGroup::generate(Arc::new(ext), &[Pair::new(1, 0)], 10).unwrap();
        assert_eq!(e.order(), 4);
        let c = GeneratorCocycle::from_table(&group, &[1], &table, 2).unwrap();
        assert!(c.reduce(1, 2).unwrap().is_none());
        assert!(c.reduce(2, 2).unwrap().is_some());
        // over μ_4 the class dies: t(1) = i
        let t = c.reduce(1, ambient_order(2, 2)).unwrap().unwrap();
        assert_eq!(ambient_order(2, 2), 4);
        assert_eq!(t[1] % 2, 1);
        // trivial cocycle
        let c0 = GeneratorCocycle::from_table(&group, &[1], &[vec![0, 0], vec![0, 0]], 1).unwrap();
        assert_eq!(c0.reduce(1, 1).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn projective_cocycle_of_pauli_matrices() {
        // Z/2 × Z/2 → PGL_2 via X, Z: the cocycle is nontrivial even over C^×
        let law: SharedLaw<Pair<u32, u32>> = Arc::new(crate::group::SemidirectLaw {
            g_law: Arc::new(CyclicLaw(2)),
            h_law: Arc::new(CyclicLaw(2)),
            act: Arc::new(|h: &u32, _g: &u32| *h),
        });
        let gens = [Pair::new(1, 0), Pair::new(0, 1)];
        let group = FiniteGroup::generate(law, &gens, 10).unwrap();
        let one = CyclotomicNumber::one;
        let zero = CyclotomicNumber::zero;
        let x = CycloMatrix::from_rows(vec![vec![zero(), one()], vec![one(), zero()]]).unwrap();
        let z = CycloMatrix::from_rows(vec![vec![one(), zero()], vec![zero(), -one()]]).unwrap();
        let mats: Vec<CycloMatrix> = group
            .elements()
            .iter()
            .map(|e| x.pow(e.g as u64).mul(&z.pow(e.h as u64)))
            .collect();
        let table = extract_cocycle(&group, &mats).unwrap();
        let n = root_order(table.iter().flatten()).unwrap();
        assert_eq!(n, 2);
        let exps: Vec<Vec<u64>> = table
            .iter()
            .map(|r| r.iter().map(|c| root_exponent(c, n).unwrap()).collect())
            .collect();
        let c = GeneratorCocycle::from_table(&group, &gens, &exps, n).unwrap();
        assert!(c.reduce(1, ambient_order(n, 4)).unwrap().is_none());
        assert!(c.reduce(2, 2).unwrap().is_some());
    }
}
