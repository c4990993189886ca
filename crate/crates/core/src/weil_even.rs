//! Characteristic two: `W = W̃/2W̃` for `W̃ = GR(4,d)^{2m}`, the forms `β`
//! and `⟨,⟩_W`, the Heisenberg group `H_β(W)` and its representation, the
//! affine groups `ASp(W)`, `AGSp(W)`, and the projective Weil
//! representation of `ASp(W)` with its cocycle.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::galois_ring::{GaloisRing, RingCharacter};
use crate::group::{ActionFn, Element, FiniteGroup, GroupLaw, SharedLaw};
use crate::heisenberg::{HeisenbergElement, HeisenbergLaw};
use crate::linalg::CycloMatrix;
use crate::rep::{
    ambient_order, cocycle_value, extract_cocycle, root_exponent, root_order, solve_intertwiner, FnRep, GeneratorCocycle,
    InducedRep, MatrixRep, Membership, SharedRep,
};
use crate::ring::{FiniteRing, SMat};
use crate::symplectic::{
    enumerate_gsp, enumerate_sp, form, h_t, lift_to_ring, make_generator, sp_generators, SymplecticElement, Token,
};

/// Values of a function `W → R`, indexed like [`EvenSpace::points`].
pub type QuadraticFunction = Vec<u8>;

/// `W = F^{2m}` with `F = F_{2^d}`, together with `R = GR(4, d)`, the forms
/// `β`, `⟨,⟩_W` and a faithful character `ψ` of `R`.
pub struct EvenSpace {
    ring: Arc<GaloisRing>,
    field: Arc<FiniteField>,
    m: usize,
    heisenberg: Arc<HeisenbergLaw>,
    psi: RingCharacter,
    points: Vec<Vec<u8>>,
    /// `F₂`-basis of `W`: single coordinates equal to a power of the
    /// polynomial generator.
    basis: Vec<Vec<u8>>,
}

impl fmt::Debug for EvenSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvenSpace(d={}, m={})", self.ring.d(), self.m)
    }
}

impl EvenSpace {
    pub fn new(d: u32, m: usize) -> Result<Arc<Self>> {
        if !(1..=2).contains(&d) || !(1..=2).contains(&m) {
            return Err(Error::InvalidArgument(format!("even case needs d, m ∈ {{1, 2}}, got d={d}, m={m}")));
        }
        let ring = GaloisRing::shared(d)?;
        let field = ring.residue_field().clone();
        let psi = RingCharacter::faithful(ring.clone())?;
        let q = field.size();
        let n = 2 * m;
        let points = (0..q.pow(n as u32))
            .map(|mut code| {
                let mut p = vec![0u8; n];
                for i in (0..n).rev() {
                    p[i] = (code % q) as u8;
                    code /= q;
                }
                p
            })
            .collect();
        let basis = (0..n)
            .flat_map(|i| {
                (0..d).map(move |k| {
                    let mut v = vec![0u8; n];
                    v[i] = 1 << k;
                    v
                })
            })
            .collect();
        Ok(Arc::new(EvenSpace {
            heisenberg: Arc::new(HeisenbergLaw::even(ring.clone(), m)?),
            ring,
            field,
            m,
            psi,
            points,
            basis,
        }))
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn d(&self) -> u32 {
        self.ring.d()
    }
    pub fn heisenberg(&self) -> &Arc<HeisenbergLaw> {
        &self.heisenberg
    }
    pub fn psi(&self) -> &RingCharacter {
        &self.psi
    }
    pub fn points(&self) -> &[Vec<u8>] {
        &self.points
    }
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn index(&self, w: &[u8]) -> usize {
        let q = self.field.size();
        w.iter().fold(0, |acc, &c| acc * q + c as usize)
    }

    /// Coordinate-wise lift `W → W̃`.
    pub fn lift(&self, w: &[u8]) -> Vec<u8> {
        w.iter().map(|&c| self.ring.lift(c)).collect()
    }

    /// `β̃(x + x*, y + y*) = Σ x_i y*_i` over `R`.
    pub fn beta_tilde(&self, a: &[u8], b: &[u8]) -> u8 {
        let r = &*self.ring;
        (0..self.m).fold(0, |acc, i| r.add(acc, r.mul(a[i], b[self.m + i])))
    }

    /// `β(w, w') = 2β̃(w̃, w̃')`.
    pub fn beta(&self, v: &[u8], w: &[u8]) -> u8 {
        self.heisenberg.twist(v, w)
    }

    /// `⟨w, w'⟩_W = 2⟨w̃, w̃'⟩`.
    pub fn form_w(&self, v: &[u8], w: &[u8]) -> u8 {
        self.heisenberg.commutator_form(v, w)
    }

    pub fn apply(&self, g: &SymplecticElement, w: &[u8]) -> Vec<u8> {
        g.apply(&*self.field, w)
    }

    /// `β` and `⟨,⟩_W` are independent of lifts, `⟨w,w'⟩_W = β(w,w') − β(w',w)`,
    /// and `ψ(⟨,⟩_W)` is a nondegenerate pairing. Lifts are enumerated
    /// exhaustively when there are at most `exhaustive_limit` combinations,
    /// otherwise sampled.
    pub fn verify<R: Rng + ?Sized>(&self, exhaustive_limit: usize, samples: usize, rng: &mut R) -> Result<()> {
        let r = &*self.ring;
        let n = 2 * self.m;
        let size = self.size();
        let shifts: Vec<Vec<u8>> = self.points.iter().map(|p| p.iter().map(|&c| r.double_lift(c)).collect()).collect();
        let check = |v: &Vec<u8>, w: &Vec<u8>, a: &Vec<u8>, b: &Vec<u8>| -> Result<()> {
            let lv: Vec<u8> = self.lift(v).iter().zip(a).map(|(&x, &y)| r.add(x, y)).collect();
            let lw: Vec<u8> = self.lift(w).iter().zip(b).map(|(&x, &y)| r.add(x, y)).collect();
            let two = |x: u8| r.add(x, x);
            if two(self.beta_tilde(&lv, &lw)) != self.beta(v, w) || two(form(r, &lv, &lw)) != self.form_w(v, w) {
                return Err(Error::Verification(format!("forms depend on the lift at ({v:?}, {w:?})")));
            }
            Ok(())
        };
        if size.pow(4) <= exhaustive_limit {
            for v in &self.points {
                for w in &self.points {
                    for a in &shifts {
                        for b in &shifts {
                            check(v, w, a, b)?;
                        }
                    }
                }
            }
        } else {
            for _ in 0..samples {
                let pick = |rng: &mut R| self.points[rng.gen_range(0..size)].clone();
                let (v, w) = (pick(rng), pick(rng));
                let (a, b) = (&shifts[rng.gen_range(0..size)], &shifts[rng.gen_range(0..size)]);
                check(&v, &w, a, b)?;
            }
        }
        for v in &self.points {
            for w in &self.points {
                if self.form_w(v, w) != r.sub(self.beta(v, w), self.beta(w, v)) {
                    return Err(Error::Verification(format!("⟨,⟩_W ≠ β − βᵗ at ({v:?}, {w:?})")));
                }
            }
            let zero = v.iter().all(|&c| c == 0);
            let pairs_trivially = self.points.iter().all(|w| self.psi.exponent(self.form_w(v, w)) == 0);
            if !zero && pairs_trivially {
                return Err(Error::Verification(format!("ψ(⟨{v:?}, ·⟩_W) is trivial")));
            }
        }
        debug_assert_eq!(self.basis.len(), n * self.d() as usize);
        Ok(())
    }

    /// Whether `h` is additive; such maps take values in `2R`.
    pub fn is_additive(&self, h: &[u8]) -> bool {
        let r = &*self.ring;
        let f = &*self.field;
        self.points.iter().all(|v| {
            self.points.iter().all(|w| {
                let s: Vec<u8> = v.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect();
                h[self.index(&s)] == r.add(h[self.index(v)], h[self.index(w)])
            })
        })
    }

    /// `Σ₁ = Hom(W, 2R)`, every additive map, in a fixed order.
    pub fn additive_maps(&self) -> Vec<QuadraticFunction> {
        let r = &*self.ring;
        let q = self.field.size();
        let k = self.basis.len();
        let two_r: Vec<u8> = self.field.elements().map(|c| r.double_lift(c)).collect();
        let basis_bits: Vec<Vec<bool>> = self
            .points
            .iter()
            .map(|p| {
                // coordinates of p on the F₂-basis
                self.basis
                    .iter()
                    .map(|b| {
                        let i = b.iter().position(|&c| c != 0).expect("nonzero basis vector");
                        p[i] & b[i] != 0
                    })
                    .collect()
            })
            .collect();
        (0..q.pow(k as u32))
            .map(|mut code| {
                let images: Vec<u8> = (0..k)
                    .map(|_| {
                        let c = two_r[code % q];
                        code /= q;
                        c
                    })
                    .collect();
                basis_bits
                    .iter()
                    .map(|bits| bits.iter().zip(&images).filter(|(&b, _)| b).fold(0, |acc, (_, &v)| r.add(acc, v)))
                    .collect()
            })
            .collect()
    }

    /// `q_{g̃}(w) = β̃(w̃g̃, w̃g̃) − λ_{g̃} β̃(w̃, w̃)` for `g̃ ∈ GSp(W̃)`.
    pub fn sigma_from_lift(&self, gt: &SymplecticElement) -> QuadraticFunction {
        let r = &*self.ring;
        self.points
            .iter()
            .map(|w| {
                let lw = self.lift(w);
                let u = gt.apply(r, &lw);
                r.sub(self.beta_tilde(&u, &u), r.mul(gt.lambda, self.beta_tilde(&lw, &lw)))
            })
            .collect()
    }

    /// The canonical member `q_{g̃}` of `Σ_g`, with `g̃` lifted along a
    /// factorization of `g`.
    pub fn sigma_g(&self, g: &SymplecticElement) -> Result<QuadraticFunction> {
        Ok(self.sigma_from_lift(&lift_to_ring(&self.ring, g)?))
    }

    /// `q(w₁+w₂) − q(w₁) − q(w₂) = β(w₁g, w₂g) − λ_g β(w₁, w₂)` for all pairs.
    pub fn in_sigma(&self, g: &SymplecticElement, q: &[u8]) -> bool {
        let r = &*self.ring;
        let f = &*self.field;
        let lam = self.ring.teichmuller(g.lambda);
        let moved: Vec<Vec<u8>> = self.points.iter().map(|w| self.apply(g, w)).collect();
        self.points.iter().enumerate().all(|(i, v)| {
            self.points.iter().enumerate().all(|(j, w)| {
                let s: Vec<u8> = v.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect();
                let lhs = r.sub(r.sub(q[self.index(&s)], q[i]), q[j]);
                let rhs = r.sub(self.beta(&moved[i], &moved[j]), r.mul(lam, self.beta(v, w)));
                lhs == rhs
            })
        })
    }

    /// Symplectic lifts of `g` other than the canonical one: `g̃ Ω̃²`
    /// (`Ω̃² = −1`) and `g̃ U(2b̃)` for the basic symmetric `b`.
    pub fn alternative_lifts(&self, g: &SymplecticElement) -> Result<Vec<SymplecticElement>> {
        let r = &*self.ring;
        let gt = lift_to_ring(r, g)?;
        let om = make_generator(r, self.m, &Token::Omega)?;
        let mut out = vec![gt.mul(r, &om.mul(r, &om))];
        for i in 0..self.m {
            for j in i..self.m {
                let mut b = SMat::zero(self.m);
                b.set(i, j, 2);
                b.set(j, i, 2);
                out.push(gt.mul(r, &make_generator(r, self.m, &Token::u(b))?));
            }
        }
        Ok(out)
    }
}

/// `(g, q)` with `q ∈ Σ_g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    pub g: SymplecticElement,
    pub q: QuadraticFunction,
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.g, self.q)
    }
}

/// `(g, q)(g', q') = (gg', λ_{g'} q + q'(· g))`; `λ` acts on `R` through its
/// Teichmüller lift, and for `Sp` this is `q + q'(· g)`.
pub struct AffineLaw {
    pub space: Arc<EvenSpace>,
}

impl AffineLaw {
    fn compose(&self, q: &[u8], lam: u8, qp: &[u8], g: &SymplecticElement) -> QuadraticFunction {
        let r = &*self.space.ring;
        let t = self.space.ring.teichmuller(lam);
        self.space
            .points
            .iter()
            .enumerate()
            .map(|(i, w)| r.add(r.mul(t, q[i]), qp[self.space.index(&self.space.apply(g, w))]))
            .collect()
    }
}

impl GroupLaw<AffineElement> for AffineLaw {
    fn identity(&self) -> AffineElement {
        AffineElement {
            g: SymplecticElement::identity(&*self.space.field, self.space.m),
            q: vec![0; self.space.size()],
        }
    }
    fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let f = &*self.space.field;
        AffineElement {
            g: a.g.mul(f, &b.g),
            q: self.compose(&a.q, b.g.lambda, &b.q, &a.g),
        }
    }
    fn inv(&self, a: &AffineElement) -> AffineElement {
        // λ_{g⁻¹} q(w) + q_inv(wg) = 0
        let f = &*self.space.field;
        let r = &*self.space.ring;
        let gi = a.g.inverse(f);
        let t = self.space.ring.teichmuller(gi.lambda);
        let q = self
            .space
            .points
            .iter()
            .map(|u| r.neg(r.mul(t, a.q[self.space.index(&self.space.apply(&gi, u))])))
            .collect();
        AffineElement { g: gi, q }
    }
}

/// `(w, t)·(g, q) = (wg, λ_g t + q(w))`; for `ASp(W)`, `(wg, t + q(w))`.
pub fn affine_action(space: Arc<EvenSpace>) -> ActionFn<HeisenbergElement, AffineElement> {
    Arc::new(move |x, a| {
        let r = &*space.ring;
        let v = x.v(space.m);
        let w = space.apply(&a.g, v);
        let t = r.add(r.mul(space.ring.teichmuller(a.g.lambda), x.t), a.q[space.index(v)]);
        HeisenbergElement::new(&w, t)
    })
}

fn affine_group(space: &Arc<EvenSpace>, base: &FiniteGroup<SymplecticElement>, budget: usize) -> Result<FiniteGroup<AffineElement>> {
    let sigma1 = space.additive_maps();
    let total = base.order() * sigma1.len();
    if total > budget {
        return Err(Error::Budget(format!("affine group of order {total} exceeds {budget}")));
    }
    let r = &*space.ring;
    let canonical: Vec<(SymplecticElement, QuadraticFunction)> = base
        .elements()
        .par_iter()
        .map(|g| Ok((*g, space.sigma_g(g)?)))
        .collect::<Result<_>>()?;
    let elements: Vec<AffineElement> = canonical
        .iter()
        .flat_map(|(g, q0)| {
            sigma1.iter().map(move |h| AffineElement {
                g: *g,
                q: q0.iter().zip(h).map(|(&a, &b)| r.add(a, b)).collect(),
            })
        })
        .collect();
    let law: SharedLaw<AffineElement> = Arc::new(AffineLaw { space: space.clone() });
    Ok(FiniteGroup::from_elements(law, elements))
}

/// `ASp(W) = {(g, q_{g̃} + h) : g ∈ Sp(W), h ∈ Σ₁}`.
pub fn build_asp(space: &Arc<EvenSpace>, budget: usize) -> Result<FiniteGroup<AffineElement>> {
    let sp = enumerate_sp(space.field.clone(), space.m, budget)?;
    affine_group(space, &sp, budget)
}

/// `AGSp(W)`, the same construction over `GSp(W)`.
pub fn build_agsp(space: &Arc<EvenSpace>, budget: usize) -> Result<FiniteGroup<AffineElement>> {
    let gsp = enumerate_gsp(space.field.clone(), space.m, budget)?;
    affine_group(space, &gsp, budget)
}

/// Every stored `q` lies in `Σ_g`, and products land in the group
/// (exhaustive up to `exhaustive_limit` pairs, sampled above).
pub fn verify_affine_group<R: Rng + ?Sized>(
    space: &EvenSpace,
    group: &FiniteGroup<AffineElement>,
    exhaustive_limit: usize,
    samples: usize,
    rng: &mut R,
) -> Result<()> {
    if let Some(x) = group.elements().par_iter().find_any(|x| !space.in_sigma(&x.g, &x.q)) {
        return Err(Error::Verification(format!("{x:?} violates the Σ_g identity")));
    }
    let n = group.order();
    let pairs: Vec<(usize, usize)> = if n * n <= exhaustive_limit {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let els = group.elements();
    if let Some(&(a, b)) = pairs.par_iter().find_any(|&&(a, b)| !group.contains(&group.mul(&els[a], &els[b]))) {
        return Err(Error::Verification(format!("product of {:?} and {:?} leaves the group", els[a], els[b])));
    }
    group.check_axioms(if n <= 30 { n * n * n } else { 0 }, samples, rng)
}

/// The projection `proj` has a homomorphic section exactly when some
/// choice of preimages of `gens` extends along the Cayley graph. Returns
/// the first section found, as a map on `base`, and the number of choices
/// of generator images.
pub fn find_section<G: Element, E: Element>(
    base: &FiniteGroup<G>,
    gens: &[G],
    ext: &FiniteGroup<E>,
    proj: impl Fn(&E) -> G + Sync,
    budget: usize,
) -> Result<(Option<HashMap<G, E>>, usize)> {
    let fibres: Vec<Vec<E>> = gens
        .iter()
        .map(|s| ext.elements().iter().filter(|x| proj(x) == *s).cloned().collect())
        .collect();
    let total: usize = fibres.iter().map(|f| f.len()).product();
    if total > budget {
        return Err(Error::Budget(format!("section search over {total} choices exceeds {budget}")));
    }
    let extend = |code: usize| -> Option<HashMap<G, E>> {
        let mut c = code;
        let images: Vec<E> = fibres
            .iter()
            .map(|f| {
                let x = f[c % f.len()].clone();
                c /= f.len();
                x
            })
            .collect();
        let mut sigma: HashMap<G, E> = HashMap::from([(base.identity(), ext.identity())]);
        let mut queue = VecDeque::from([base.identity()]);
        while let Some(g) = queue.pop_front() {
            let sg = sigma[&g].clone();
            for (s, img) in gens.iter().zip(&images) {
                let h = base.mul(&g, s);
                let sh = ext.mul(&sg, img);
                match sigma.get(&h) {
                    Some(prev) if *prev != sh => return None,
                    Some(_) => {}
                    None => {
                        sigma.insert(h.clone(), sh);
                        queue.push_back(h);
                    }
                }
            }
        }
        (sigma.len() == base.order()).then_some(sigma)
    };
    let found = (0..total).into_par_iter().find_map_first(extend);
    Ok((found, total))
}

/// Which abelian subgroup the Heisenberg representation is induced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeisenbergModel {
    /// `X* × R`, functions on `X`.
    XStar,
    /// `X × R`, functions on `X*`.
    X,
}

/// The Heisenberg representation of `H_β(W)` with central character `ψ`,
/// induced from `(x*, t) ↦ ψ(t)` on `X* × R` (or `(x, t) ↦ ψ(t)` on `X × R`).
pub fn heisenberg_rep_even(space: &Arc<EvenSpace>, model: HeisenbergModel) -> Result<InducedRep<HeisenbergElement>> {
    let m = space.m;
    let (kill, keep): (std::ops::Range<usize>, std::ops::Range<usize>) = match model {
        HeisenbergModel::XStar => (0..m, m..2 * m),
        HeisenbergModel::X => (m..2 * m, 0..m),
    };
    let k2 = kill.clone();
    let member: Membership<HeisenbergElement> = Arc::new(move |x| x.w[k2.clone()].iter().all(|&c| c == 0));
    let psi = space.psi.clone();
    let sigma: SharedRep<HeisenbergElement> = Arc::new(FnRep::new(
        1,
        Arc::new(move |x: &HeisenbergElement| Ok(CycloMatrix::scalar(1, psi.eval(x.t)))),
    ));
    let q = space.field.size();
    let reps = (0..q.pow(m as u32))
        .map(|mut code| {
            let mut w = vec![0u8; 2 * m];
            for i in kill.clone().rev() {
                w[i] = (code % q) as u8;
                code /= q;
            }
            debug_assert!(keep.clone().all(|i| w[i] == 0));
            HeisenbergElement::new(&w, 0)
        })
        .collect();
    InducedRep::new(space.heisenberg.clone(), member, sigma, reps)
}

/// Generators of `H_β(W)` modulo its centre: `(b, 0)` for the `F₂`-basis.
pub fn heisenberg_generators(space: &EvenSpace) -> Vec<HeisenbergElement> {
    space.basis.iter().map(|b| HeisenbergElement::new(b, 0)).collect()
}

/// `M` with `ρ(h) M = M ρ(h·x)` for every generator `h`, unique up to
/// scalar; `pairs_for` gives the linear system.
pub fn intertwiner_for(
    rho: &dyn MatrixRep<HeisenbergElement>,
    gens: &[HeisenbergElement],
    act: impl Fn(&HeisenbergElement) -> HeisenbergElement,
) -> Result<CycloMatrix> {
    let pairs = gens
        .iter()
        .map(|h| Ok(((*rho.matrix(&act(h))?).clone(), (*rho.matrix(h)?).clone())))
        .collect::<Result<Vec<_>>>()?;
    solve_intertwiner(&pairs)
}

/// The projective Weil representation `x ↦ M(x)` of `ASp(W)` on the
/// Heisenberg representation.
pub struct WeilEvenProjective {
    pub space: Arc<EvenSpace>,
    pub group: FiniteGroup<AffineElement>,
    pub rho: Arc<InducedRep<HeisenbergElement>>,
    pub mats: Vec<CycloMatrix>,
    pub gens: Vec<AffineElement>,
}

impl fmt::Debug for WeilEvenProjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilEvenProjective({:?}, |G| = {})", self.space, self.group.order())
    }
}

/// Generators of `ASp(W)`: `(g, q_{g̃})` for the `Sp(W)` generators and
/// `(1, h)` for an `F₂`-basis of `Σ₁`.
pub fn asp_generators(space: &Arc<EvenSpace>) -> Result<Vec<AffineElement>> {
    let f = &*space.field;
    let mut out: Vec<AffineElement> = sp_generators(f, space.m)
        .into_iter()
        .map(|g| Ok(AffineElement { q: space.sigma_g(&g)?, g }))
        .collect::<Result<_>>()?;
    let r = &*space.ring;
    let id = SymplecticElement::identity(f, space.m);
    for b in &space.basis {
        // the additive map dual to b on the F₂-basis, scaled into 2R
        let bi = b.iter().position(|&c| c != 0).expect("nonzero");
        let q = space
            .points
            .iter()
            .map(|p| if p[bi] & b[bi] != 0 { r.double_lift(1) } else { 0 })
            .collect();
        out.push(AffineElement { g: id, q });
    }
    Ok(out)
}

pub fn weil_even_projective(space: &Arc<EvenSpace>, group: FiniteGroup<AffineElement>) -> Result<WeilEvenProjective> {
    let rho = Arc::new(heisenberg_rep_even(space, HeisenbergModel::XStar)?);
    let hgens = heisenberg_generators(space);
    let act = affine_action(space.clone());
    let mats: Vec<CycloMatrix> = group
        .elements()
        .par_iter()
        .map(|x| intertwiner_for(&*rho, &hgens, |h| act(h, x)))
        .collect::<Result<_>>()?;
    let gens = asp_generators(space)?;
    for g in &gens {
        if !group.contains(g) {
            return Err(Error::NotInGroup(format!("generator {g:?}")));
        }
    }
    Ok(WeilEvenProjective {
        space: space.clone(),
        group,
        rho,
        mats,
        gens,
    })
}

/// Outcome of the cocycle-order reductions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mu4Verdict {
    /// Least `N` with all generator-edge cocycle values in `μ_N`.
    pub n: u64,
    /// Ambient `μ` in which rescalings were searched.
    pub ambient: u64,
    pub reduces_to_mu4: bool,
    pub reduces_to_mu2: bool,
    pub reduces_to_mu1: bool,
}

impl WeilEvenProjective {
    pub fn matrix(&self, x: &AffineElement) -> Option<&CycloMatrix> {
        self.group.index_of(x).map(|i| &self.mats[i])
    }

    /// `M(x)⁻¹ ρ(h) M(x) = ρ(h·x)` for every `x`, and every `h ∈ H_β(W)`
    /// when `exhaustive`, otherwise for generators of `H_β(W)` and its
    /// centre (which implies the rest, both sides being homomorphisms in `h`).
    pub fn verify_compatibility(&self, exhaustive: bool) -> Result<()> {
        let hs = if exhaustive {
            self.space.heisenberg.elements()
        } else {
            let mut hs = heisenberg_generators(&self.space);
            hs.push(HeisenbergElement::central(1));
            hs
        };
        let act = affine_action(self.space.clone());
        let rho_h: Vec<Arc<CycloMatrix>> = hs.iter().map(|h| self.rho.matrix(h)).collect::<Result<_>>()?;
        self.group.elements().par_iter().zip(&self.mats).try_for_each(|(x, m)| {
            for (i, h) in hs.iter().enumerate() {
                if rho_h[i].mul(m) != m.mul(&*self.rho.matrix(&act(h, x))?) {
                    return Err(Error::Verification(format!("intertwining fails at {x:?}, {h:?}")));
                }
            }
            Ok(())
        })
    }

    /// The full table `c(x, y)` (small groups only).
    pub fn cocycle_table(&self) -> Result<Vec<Vec<CyclotomicNumber>>> {
        extract_cocycle(&self.group, &self.mats)
    }

    /// `c(x, s)` on the generator edges, as exponents in `μ_N`.
    pub fn generator_cocycle(&self) -> Result<GeneratorCocycle> {
        let els = self.group.elements();
        let gi: Vec<usize> = self.gens.iter().map(|g| self.group.index_of(g).expect("member")).collect();
        let values: Vec<Vec<CyclotomicNumber>> = els
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                gi.iter()
                    .map(|&s| {
                        let k = self.group.index_of(&self.group.mul(x, &els[s])).expect("closed");
                        cocycle_value(&self.mats[i], &self.mats[s], &self.mats[k])
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = root_order(values.iter().flatten())?;
        let exps: Vec<Vec<u64>> = values
            .iter()
            .map(|row| row.iter().map(|c| root_exponent(c, n)).collect())
            .collect::<Result<_>>()?;
        let right = els
            .iter()
            .map(|x| gi.iter().map(|&s| self.group.index_of(&self.group.mul(x, &els[s])).expect("closed")).collect())
            .collect();
        Ok(GeneratorCocycle {
            n,
            identity: self.group.index_of(&self.group.identity()).expect("identity"),
            gens: gi,
            right,
            exps,
        })
    }

    /// Searches rescalings `t: G → μ` bringing the cocycle into `μ₄`, `μ₂`
    /// and `μ₁`, with `μ` large enough that failure also rules out
    /// `C^×`-valued rescalings.
    pub fn verify_mu4(&self) -> Result<Mu4Verdict> {
        let c = self.generator_cocycle()?;
        let base = num_integer::lcm(c.n, 4);
        let ambient = ambient_order(base, self.group.order() as u64);
        Ok(Mu4Verdict {
            n: c.n,
            ambient,
            reduces_to_mu4: c.reduce(4, ambient)?.is_some(),
            reduces_to_mu2: c.reduce(2, ambient)?.is_some(),
            reduces_to_mu1: c.reduce(1, ambient)?.is_some(),
        })
    }
}

/// `α(h_t) = (h_t, 0)` is a homomorphism `F^× → AGSp(W)` splitting
/// `1 → ASp(W) → AGSp(W) → F^× → 1`.
pub fn verify_agsp_split<R: Rng + ?Sized>(
    space: &Arc<EvenSpace>,
    asp: &FiniteGroup<AffineElement>,
    agsp: &FiniteGroup<AffineElement>,
    samples: usize,
    rng: &mut R,
) -> Result<()> {
    let f = &*space.field;
    let alpha = |t: u8| AffineElement {
        g: h_t(f, space.m, t).expect("unit"),
        q: vec![0; space.size()],
    };
    for t in f.nonzero() {
        let a = alpha(t);
        if space.sigma_g(&a.g)? != a.q || !agsp.contains(&a) {
            return Err(Error::Verification(format!("α(h_{t}) ≠ (h_{t}, 0)")));
        }
        for s in f.nonzero() {
            if agsp.mul(&a, &alpha(s)) != alpha(f.mul(t, s)) {
                return Err(Error::Verification(format!("α not multiplicative at ({t}, {s})")));
            }
        }
    }
    if agsp.order() != asp.order() * (f.size() - 1) {
        return Err(Error::Verification("|AGSp| ≠ |ASp|·|F^×|".into()));
    }
    let kernel: Vec<&AffineElement> = agsp.elements().iter().filter(|x| x.g.lambda == 1).collect();
    if kernel.len() != asp.order() || kernel.iter().any(|x| !asp.contains(x)) {
        return Err(Error::Verification("ker λ differs from ASp(W)".into()));
    }
    for _ in 0..samples {
        let x = agsp.random(rng);
        let y = asp.random(rng);
        if agsp.law().conj(y, x).g.lambda != 1 {
            return Err(Error::Verification("ASp(W) is not normal".into()));
        }
        // x = (x α(λ_x)⁻¹) α(λ_x)
        let a = alpha(x.g.lambda);
        let k = agsp.mul(x, &agsp.inv(&a));
        if !asp.contains(&k) || agsp.mul(&k, &a) != *x {
            return Err(Error::Verification(format!("{x:?} does not factor through ASp ⋊ α(F^×)")));
        }
    }
    Ok(())
}

/// For every `g ∈ Sp(W)` and every alternative lift `g̃'`, `q_{g̃'} − q_{g̃}`
/// is additive with values in `2R`.
pub fn verify_lift_independence(space: &EvenSpace, sp: &FiniteGroup<SymplecticElement>) -> Result<()> {
    let r = &*space.ring;
    sp.elements().par_iter().try_for_each(|g| {
        let q0 = space.sigma_g(g)?;
        for lift in space.alternative_lifts(g)? {
            let q1 = space.sigma_from_lift(&lift);
            let diff: Vec<u8> = q1.iter().zip(&q0).map(|(&a, &b)| r.sub(a, b)).collect();
            if !diff.iter().all(|&v| r.in_two_r(v)) || !space.is_additive(&diff) {
                return Err(Error::Verification(format!("lifts of {g:?} give a non-additive difference")));
            }
        }
        Ok(())
    })
}
