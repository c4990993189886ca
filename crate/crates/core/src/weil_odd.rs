//! The Schrödinger model of the Weil representation of `Sp(W) ⋉ H(W)` over
//! an odd finite field, realized on functions on `X = F^m`, its extension to
//! scalar similitudes, and the induced representations of the similitude
//! groups built from it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::{AdditiveCharacter, FiniteField, MultiplicativeStructure, ResidueCase};
use crate::group::{Pair, QuotientLaw, SemidirectLaw, SharedLaw};
use crate::heisenberg::{ActionTag, HeisenbergElement, HeisenbergLaw, TwistedAction};
use crate::linalg::{CycloMatrix, MonomialMatrix};
use crate::rep::{InducedRep, MatrixRep, Membership, SemidirectRep, SharedRep};
use crate::ring::{FiniteRing, SMat};
use crate::symplectic::{factorize, form, h_t, make_generator, SymplecticElement, SymplecticLaw, Token};

/// `γ(ψ) = Σ_x ψ(x²/2)`.
pub fn gauss_sum(psi: &AdditiveCharacter) -> Result<CyclotomicNumber> {
    let f = psi.field();
    let half = f.half()?;
    Ok(f.elements().fold(CyclotomicNumber::zero(), |acc, x| {
        acc + psi.eval(f.mul(half, f.mul(x, x)))
    }))
}

/// The points of `X = F^m` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SchrodingerSpace {
    q: usize,
    m: usize,
    points: Vec<Vec<u8>>,
}

impl SchrodingerSpace {
    pub fn new(q: usize, m: usize) -> Self {
        let n = q.pow(m as u32);
        let points = (0..n)
            .map(|mut code| {
                let mut p = vec![0u8; m];
                for i in (0..m).rev() {
                    p[i] = (code % q) as u8;
                    code /= q;
                }
                p
            })
            .collect();
        SchrodingerSpace { q, m, points }
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<u8>] {
        &self.points
    }

    pub fn index(&self, x: &[u8]) -> usize {
        x.iter().fold(0, |acc, &c| acc * self.q + c as usize)
    }

    /// `(x, 0) ∈ W`.
    fn embed_x(&self, x: &[u8]) -> Vec<u8> {
        let mut v = x.to_vec();
        v.resize(2 * self.m, 0);
        v
    }

    /// `(0, x*) ∈ W`.
    fn embed_xstar(&self, xs: &[u8]) -> Vec<u8> {
        let mut v = vec![0u8; self.m];
        v.extend_from_slice(xs);
        v
    }
}

/// `π_ψ` on `C[X]`, with matrices of `Sp(W)` memoized.
pub struct WeilRep {
    field: Arc<FiniteField>,
    structure: Arc<MultiplicativeStructure>,
    m: usize,
    psi: AdditiveCharacter,
    gamma: CyclotomicNumber,
    omega_scale: CyclotomicNumber,
    space: SchrodingerSpace,
    cache: RwLock<HashMap<SMat, Arc<CycloMatrix>>>,
}

impl fmt::Debug for WeilRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilRep(q={}, m={}, ψ^{})", self.field.q(), self.m, self.psi.twist())
    }
}

impl WeilRep {
    /// The Weil representation attached to `ψ^a`, `a ≠ 0`.
    pub fn new(field: Arc<FiniteField>, m: usize, twist: u8) -> Result<Self> {
        if field.p() == 2 {
            return Err(Error::InvalidArgument("the Schrödinger model needs odd q".into()));
        }
        if twist == 0 {
            return Err(Error::InvalidArgument("ψ^0 is trivial".into()));
        }
        if m == 0 || m > 2 {
            return Err(Error::InvalidArgument(format!("rank m = {m} is not supported")));
        }
        let structure = Arc::new(MultiplicativeStructure::decompose(field.clone())?);
        let psi = AdditiveCharacter::new(field.clone(), twist);
        let gamma = gauss_sum(&psi)?;
        let omega_scale = gamma.powi(-(m as i64))?;
        let space = SchrodingerSpace::new(field.size(), m);
        Ok(WeilRep {
            field,
            structure,
            m,
            psi,
            gamma,
            omega_scale,
            space,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn structure(&self) -> &Arc<MultiplicativeStructure> {
        &self.structure
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn psi(&self) -> &AdditiveCharacter {
        &self.psi
    }
    pub fn gamma(&self) -> &CyclotomicNumber {
        &self.gamma
    }
    pub fn space(&self) -> &SchrodingerSpace {
        &self.space
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    fn legendre(&self, a: u8) -> CyclotomicNumber {
        CyclotomicNumber::from_int(self.field.quadratic_character(a) as i64)
    }

    /// `π[1, (x,0)+(x*,0)+(0,k)] f(y) = ψ(k + ⟨x+y, x*⟩) f(x+y)`.
    pub fn op_heisenberg(&self, h: &HeisenbergElement) -> MonomialMatrix {
        let f = &*self.field;
        let sp = &self.space;
        let m = self.m;
        let v = h.v(m);
        let (x, xs) = (&v[..m], sp.embed_xstar(&v[m..]));
        let half = f.half().expect("odd field");
        let k = f.sub(h.t, f.mul(half, form(f, &sp.embed_x(x), &xs)));
        let (perm, phase) = sp
            .points
            .iter()
            .map(|y| {
                let xy: Vec<u8> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
                let e = f.add(k, form(f, &sp.embed_x(&xy), &xs));
                (sp.index(&xy), self.psi.eval(e))
            })
            .unzip();
        MonomialMatrix { perm, phase }
    }

    /// The operator of `U(b)` or `D(a)`, which are monomial.
    pub fn op_monomial_token(&self, token: &Token) -> Result<MonomialMatrix> {
        let f = &*self.field;
        let sp = &self.space;
        let g = make_generator(f, self.m, token)?;
        match token {
            Token::U(_) => {
                // ψ(½⟨y, y b⟩) f(y)
                let half = f.half()?;
                let phase = sp
                    .points
                    .iter()
                    .map(|y| {
                        let yw = sp.embed_x(y);
                        let moved = g.apply(f, &yw);
                        let yb = sp.embed_xstar(&moved[self.m..]);
                        self.psi.eval(f.mul(half, form(f, &yw, &yb)))
                    })
                    .collect();
                Ok(MonomialMatrix {
                    perm: (0..sp.dim()).collect(),
                    phase,
                })
            }
            Token::D(a) => {
                // χ(det a) f(y a)
                let chi = self.legendre(a.0.det(f));
                let perm = sp
                    .points
                    .iter()
                    .map(|y| sp.index(&g.apply(f, &sp.embed_x(y))[..self.m]))
                    .collect();
                Ok(MonomialMatrix {
                    perm,
                    phase: vec![chi; sp.dim()],
                })
            }
            _ => Err(Error::InvalidArgument(format!("{token:?} is not monomial"))),
        }
    }

    /// `π[ω] f(y) = γ(ψ)^{-m} Σ_x f(x) ψ(⟨x, yω⟩)`.
    pub fn op_omega(&self) -> CycloMatrix {
        let f = &*self.field;
        let sp = &self.space;
        let om = make_generator(f, self.m, &Token::Omega).expect("Ω");
        CycloMatrix::from_fn(sp.dim(), |i, j| {
            let yw = om.apply(f, &sp.embed_x(&sp.points[i]));
            let e = form(f, &sp.embed_x(&sp.points[j]), &yw);
            &self.omega_scale * &self.psi.eval(e)
        })
    }

    /// The operator of one `Sp` generator token.
    pub fn op_generator(&self, token: &Token) -> Result<CycloMatrix> {
        match token {
            Token::Omega => Ok(self.op_omega()),
            Token::H(_) => Err(Error::NotInGroup("H(t) is not in Sp(W)".into())),
            _ => Ok(self.op_monomial_token(token)?.to_dense()),
        }
    }

    /// Product of the generator operators along a word.
    pub fn op_word(&self, word: &[Token]) -> Result<CycloMatrix> {
        // Stay monomial until the first dense factor.
        let mut mono = MonomialMatrix::identity(self.dim());
        let mut dense: Option<CycloMatrix> = None;
        for t in word {
            match (t, &mut dense) {
                (Token::U(_) | Token::D(_), None) => mono = mono.mul(&self.op_monomial_token(t)?),
                (Token::U(_) | Token::D(_), Some(acc)) => *acc = self.op_monomial_token(t)?.left_mul(acc),
                (_, None) => dense = Some(mono.right_mul(&self.op_generator(t)?)),
                (_, Some(acc)) => *acc = acc.mul(&self.op_generator(t)?),
            }
        }
        Ok(dense.unwrap_or_else(|| mono.to_dense()))
    }

    /// `π_ψ(g)` for `g ∈ Sp(W)`, through the factorization of `g`.
    pub fn op_sp(&self, g: &SymplecticElement) -> Result<Arc<CycloMatrix>> {
        if let Some(m) = self.cache.read().unwrap().get(&g.matrix) {
            return Ok(m.clone());
        }
        let word = factorize(&*self.field, g)?;
        let m = Arc::new(self.op_word(&word)?);
        self.cache.write().unwrap().insert(g.matrix, m.clone());
        Ok(m)
    }

    /// `π[aI] f(y) = χ(a^m) f(τ(a²) y a)`, for `q ≡ 3 (mod 4)`.
    pub fn op_scalar_extension(&self, a: u8) -> Result<MonomialMatrix> {
        let f = &*self.field;
        if self.structure.residue_case() != ResidueCase::Q3 {
            return Err(Error::WrongCase("the scalar extension is defined for q ≡ 3 (mod 4)".into()));
        }
        if a == 0 {
            return Err(Error::InvalidArgument("a must be a unit".into()));
        }
        let s = f.mul(self.structure.tau(ResidueCase::Q3, f.mul(a, a))?, a);
        let chi = self.legendre(f.pow(a, self.m as u64));
        let sp = &self.space;
        let perm = sp
            .points
            .iter()
            .map(|y| sp.index(&y.iter().map(|&c| f.mul(s, c)).collect::<Vec<_>>()))
            .collect();
        Ok(MonomialMatrix {
            perm,
            phase: vec![chi; sp.dim()],
        })
    }

    /// `ς(g) = τ(λ_g) g ∈ Sp(W)`, for `λ_g` in the domain of `τ`.
    pub fn varsigma(&self, g: &SymplecticElement) -> Result<SymplecticElement> {
        let case = self.structure.residue_case();
        let s = self.structure.tau_on_domain(case, g.lambda)?;
        let out = g.scale(&*self.field, s);
        debug_assert!(out.is_sp());
        Ok(out)
    }

    /// `π_ψ(ς(g))` on `F^× Sp(W)` (`q ≡ 3`) or `F_l Sp(W)` (`q ≡ 1`).
    pub fn op_twisted(&self, g: &SymplecticElement) -> Result<Arc<CycloMatrix>> {
        if g.is_sp() {
            return self.op_sp(g);
        }
        self.op_sp(&self.varsigma(g)?)
    }
}

impl MatrixRep<SymplecticElement> for WeilRep {
    fn dim(&self) -> usize {
        self.space.dim()
    }
    fn matrix(&self, x: &SymplecticElement) -> Result<Arc<CycloMatrix>> {
        self.op_twisted(x)
    }
}

/// `[g, h] ↦ π(g) π(h)` on `G ⋉_α H(W)` for `G` inside the domain of `ς`.
pub fn semidirect_weil(weil: Arc<WeilRep>) -> SemidirectRep<SymplecticElement, HeisenbergElement> {
    let w = weil.clone();
    SemidirectRep {
        g_part: weil,
        h_part: Arc::new(move |h| w.op_heisenberg(h)),
    }
}

/// Which odd-characteristic construction a field belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddCase {
    /// `q ≡ 3 (mod 4)`.
    Q3,
    /// `q ≡ 1 (mod 4)`.
    Q1,
}

/// The objects of one odd field: groups, actions, the Weil representation
/// and the coset representatives `h_t` used for induction.
pub struct OddScenario {
    pub q: u32,
    pub m: usize,
    pub field: Arc<FiniteField>,
    pub structure: Arc<MultiplicativeStructure>,
    pub case: OddCase,
    pub heisenberg: Arc<HeisenbergLaw>,
    pub weil: Arc<WeilRep>,
    pub gsp_law: SharedLaw<SymplecticElement>,
    /// `|F^{×2}|`.
    pub squares: usize,
}

impl fmt::Debug for OddScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OddScenario(q={}, m={}, {:?})", self.q, self.m, self.case)
    }
}

pub type GspH = Pair<SymplecticElement, HeisenbergElement>;

impl OddScenario {
    pub fn new(q: u32, m: usize) -> Result<Self> {
        let field = FiniteField::shared(q)?;
        if field.p() == 2 {
            return Err(Error::InvalidArgument(format!("q = {q} is even")));
        }
        let weil = Arc::new(WeilRep::new(field.clone(), m, 1)?);
        let structure = weil.structure().clone();
        let case = match structure.residue_case() {
            ResidueCase::Q3 => OddCase::Q3,
            ResidueCase::Q1 => OddCase::Q1,
        };
        let heisenberg = Arc::new(HeisenbergLaw::odd(field.clone(), m)?);
        let squares = structure.squares().len();
        Ok(OddScenario {
            q,
            m,
            gsp_law: Arc::new(SymplecticLaw { ring: field.clone(), m }),
            field,
            structure,
            case,
            heisenberg,
            weil,
            squares,
        })
    }

    /// `π_{ψ^a}` on the same space.
    pub fn weil_twisted(&self, a: u8) -> Result<Arc<WeilRep>> {
        Ok(Arc::new(WeilRep::new(self.field.clone(), self.m, a)?))
    }

    /// `h_t = diag(1, t)`.
    pub fn h(&self, t: u8) -> SymplecticElement {
        h_t(&*self.field, self.m, t).expect("unit")
    }

    /// A fixed nonsquare, the generator of `F^×`.
    pub fn nonsquare(&self) -> u8 {
        self.structure.generator()
    }

    /// The twisted action of `GSp(W)` on `H(W)` for this residue class.
    pub fn gsp_action(&self) -> Result<TwistedAction> {
        let tag = match self.case {
            OddCase::Q3 => ActionTag::Sp6,
            OddCase::Q1 => ActionTag::Sp7,
        };
        TwistedAction::new(tag, self.heisenberg.clone(), self.structure.clone())
    }

    /// Whether `λ_g` lies in the domain of `τ` (`F^{×2}` resp. `F_l`).
    pub fn in_tau_domain(&self, g: &SymplecticElement) -> bool {
        self.structure.project_l(g.lambda).map(|y| y == g.lambda).unwrap_or(false)
    }

    /// `ρ_ψ = Ind_{F^× Sp}^{GSp} π_ψ` with representatives `1, h_a`.
    pub fn rho_gsp(&self) -> Result<InducedRep<SymplecticElement>> {
        if self.case != OddCase::Q3 {
            return Err(Error::WrongCase("ρ_ψ on GSp(W) is built for q ≡ 3 (mod 4)".into()));
        }
        let st = self.structure.clone();
        let member: Membership<SymplecticElement> = Arc::new(move |g| st.is_square(g.lambda));
        let reps = vec![self.gsp_law.identity(), self.h(self.nonsquare())];
        InducedRep::new(self.gsp_law.clone(), member, self.weil.clone() as SharedRep<_>, reps)
    }

    /// `PGSp^±(W) = GSp(W)/F^{×2}` for `q ≡ 3 (mod 4)`, as a law on
    /// canonical representatives.
    pub fn pgsp_law(&self) -> Result<Arc<QuotientLaw<SymplecticElement>>> {
        if self.case != OddCase::Q3 {
            return Err(Error::WrongCase("PGSp^± = GSp/F^{×2} is the q ≡ 3 (mod 4) construction".into()));
        }
        let f = &*self.field;
        let normal = self
            .structure
            .squares()
            .into_iter()
            .map(|a| SymplecticElement::identity(f, self.m).scale(f, a))
            .collect();
        Ok(Arc::new(QuotientLaw {
            law: self.gsp_law.clone(),
            normal,
        }))
    }

    /// `G ⋉_α H(W)` for a law `G` on similitudes and the residue-class action.
    pub fn semidirect_law(&self, g_law: SharedLaw<SymplecticElement>) -> Result<Arc<SemidirectLaw<SymplecticElement, HeisenbergElement>>> {
        Ok(Arc::new(SemidirectLaw {
            g_law,
            h_law: self.heisenberg.clone(),
            act: self.gsp_action()?.as_fn(),
        }))
    }

    /// `ρ'_ψ`: for `q ≡ 3`, `Ind_{F^×Sp ⋉ H}^{PGSp^± ⋉ H} π_ψ` with
    /// representatives `1, h_{-1}`; for `q ≡ 1`,
    /// `Ind_{F_l Sp ⋉ H}^{GSp ⋉ H} π_ψ` with representatives `h_t`,
    /// `t ∈ F_{2^n}`.
    pub fn rho_prime(&self) -> Result<(SharedLaw<GspH>, InducedRep<GspH>)> {
        let f = &*self.field;
        let (g_law, reps): (SharedLaw<SymplecticElement>, Vec<u8>) = match self.case {
            OddCase::Q3 => (self.pgsp_law()?, vec![1, f.neg(1)]),
            OddCase::Q1 => (self.gsp_law.clone(), {
                let mut t = self.structure.f_2n();
                t.sort();
                t
            }),
        };
        let law: SharedLaw<GspH> = self.semidirect_law(g_law.clone())?;
        let st = self.structure.clone();
        let member: Membership<GspH> = Arc::new(move |x| st.project_l(x.g.lambda).map(|y| y == x.g.lambda).unwrap_or(false));
        let reps = reps
            .into_iter()
            .map(|t| {
                let g = g_law.mul(&g_law.identity(), &self.h(t));
                Pair::new(g, HeisenbergElement::central(0))
            })
            .collect();
        let sigma: SharedRep<GspH> = Arc::new(semidirect_weil(self.weil.clone()));
        let ind = InducedRep::new(law.clone(), member, sigma, reps)?;
        Ok((law, ind))
    }

    /// All of `Sp(W) ⋉ H(W)` as pairs.
    pub fn sp_h_elements(&self, sp: &[SymplecticElement]) -> Vec<GspH> {
        let hs = self.heisenberg.elements();
        sp.iter()
            .flat_map(|g| hs.iter().map(move |h| Pair::new(*g, *h)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupLaw, DEFAULT_BUDGET};
    use crate::linalg::rational;
    use crate::rep::{character_values, decompose, homomorphism_witness, is_irreducible};
    use crate::symplectic::{enumerate_gsp, enumerate_sp, evaluate, sp_generators};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z3(k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(3, k)
    }

    #[test]
    fn gauss_sums() {
        let f = FiniteField::shared(3).unwrap();
        let g = gauss_sum(&AdditiveCharacter::new(f, 1)).unwrap();
        assert_eq!(g, CyclotomicNumber::one() + z3(2) * CyclotomicNumber::from_int(2));
        for q in [3u32, 5, 7, 9, 13] {
            let f = FiniteField::shared(q).unwrap();
            let g = gauss_sum(&AdditiveCharacter::new(f, 1)).unwrap();
            assert_eq!(&g * &g.conjugate(), CyclotomicNumber::from_int(q as i64));
        }
    }

    #[test]
    fn heisenberg_operators_q3() {
        let w = WeilRep::new(FiniteField::shared(3).unwrap(), 1, 1).unwrap();
        let psi = w.psi().clone();
        for k in 0..3u8 {
            let m = w.op_heisenberg(&HeisenbergElement::central(k)).to_dense();
            assert_eq!(m, CycloMatrix::scalar(3, psi.eval(k)));
        }
        // (e_1, 0): f(y) ↦ f(1 + y)
        let m = w.op_heisenberg(&HeisenbergElement::new(&[1, 0], 0));
        assert_eq!(m.perm, vec![1, 2, 0]);
        assert!(m.phase.iter().all(|p| p.is_one()));
        // (e_1*, 0): diag ψ(y)
        let m = w.op_heisenberg(&HeisenbergElement::new(&[0, 1], 0));
        assert_eq!(m.perm, vec![0, 1, 2]);
        assert_eq!(m.phase, vec![z3(0), z3(1), z3(2)]);
        // representation of H(W)
        let law = HeisenbergLaw::odd(FiniteField::shared(3).unwrap(), 1).unwrap();
        let els = law.elements();
        for a in &els {
            for b in &els {
                assert_eq!(w.op_heisenberg(a).mul(&w.op_heisenberg(b)), w.op_heisenberg(&law.mul(a, b)));
            }
        }
    }

    #[test]
    fn generator_operators_q3() {
        let f = FiniteField::shared(3).unwrap();
        let w = WeilRep::new(f.clone(), 1, 1).unwrap();
        assert_eq!(w.op_generator(&Token::u(SMat::zero(1))).unwrap(), CycloMatrix::identity(3));
        // D(2) = −(f ↦ f(2y))
        let d = w.op_monomial_token(&Token::d(SMat::scalar(&*f, 1, 2))).unwrap();
        assert_eq!(d.perm, vec![0, 2, 1]);
        assert!(d.phase.iter().all(|p| *p == CyclotomicNumber::from_int(-1)));
        // Ω is unitary, and Ω² = π(−I), Ω⁴ = I
        let om = w.op_omega();
        assert_eq!(om.mul(&om.conj_transpose()), CycloMatrix::identity(3));
        let minus = w.op_sp(&SymplecticElement::identity(&*f, 1).scale(&*f, 2)).unwrap();
        assert_eq!(om.pow(2), *minus);
        assert_eq!(om.pow(4), CycloMatrix::identity(3));
        // unitarity of all generators
        for g in sp_generators(&*f, 1) {
            let m = w.op_sp(&g).unwrap();
            assert_eq!(m.mul(&m.conj_transpose()), CycloMatrix::identity(3));
        }
    }

    #[test]
    fn scalar_extension_q3() {
        let f = FiniteField::shared(3).unwrap();
        let w = WeilRep::new(f.clone(), 1, 1).unwrap();
        assert_eq!(w.op_scalar_extension(1).unwrap().to_dense(), CycloMatrix::identity(3));
        let m = w.op_scalar_extension(2).unwrap();
        assert_eq!(m.perm, vec![0, 2, 1]);
        assert!(m.phase.iter().all(|p| *p == CyclotomicNumber::from_int(-1)));
        // on F^{×2} the extension is trivial, and it agrees with π∘ς at q = 7
        let f7 = FiniteField::shared(7).unwrap();
        let w7 = WeilRep::new(f7.clone(), 1, 1).unwrap();
        for a in 1..7u8 {
            let scalar = SymplecticElement::identity(&*f7, 1).scale(&*f7, a);
            assert_eq!(w7.op_scalar_extension(a).unwrap().to_dense(), *w7.op_twisted(&scalar).unwrap());
            if w7.structure().is_square(a) {
                let s = f7.mul(w7.structure().tau(ResidueCase::Q3, f7.mul(a, a)).unwrap(), a);
                assert_eq!(s, 1, "τ(a²)a = 1 on squares");
            }
        }
        assert!(WeilRep::new(FiniteField::shared(5).unwrap(), 1, 1).unwrap().op_scalar_extension(2).is_err());
    }

    #[test]
    fn compatibility_with_heisenberg_action() {
        // π(g)⁻¹ π(h) π(g) = π(h·g), on generators of F^× Sp and of H
        for q in [3u32, 7] {
            let sc = OddScenario::new(q, 1).unwrap();
            let f = &*sc.field;
            let act = TwistedAction::new(ActionTag::Alphaac, sc.heisenberg.clone(), sc.structure.clone()).unwrap();
            let mut gs = sp_generators(f, 1);
            for a in f.nonzero() {
                gs.push(SymplecticElement::identity(f, 1).scale(f, a));
            }
            let hs = [HeisenbergElement::new(&[1, 0], 0), HeisenbergElement::new(&[0, 1], 0), HeisenbergElement::new(&[1, 1], 2)];
            for g in &gs {
                let pg = sc.weil.op_twisted(g).unwrap();
                let pgi = pg.inverse().unwrap();
                for h in &hs {
                    let lhs = sc.weil.op_heisenberg(h).left_mul(&pgi).mul(&pg);
                    let rhs = sc.weil.op_heisenberg(&act.act(h, g).unwrap()).to_dense();
                    assert_eq!(lhs, rhs, "q={q} g={g:?} h={h:?}");
                }
            }
        }
    }

    #[test]
    fn true_representation_q3_exhaustive() {
        let f = FiniteField::shared(3).unwrap();
        let sp = enumerate_sp(f.clone(), 1, DEFAULT_BUDGET).unwrap();
        let w = WeilRep::new(f, 1, 1).unwrap();
        let pairs: Vec<_> = sp
            .elements()
            .iter()
            .flat_map(|a| sp.elements().iter().map(move |b| (*a, *b)))
            .collect();
        assert!(homomorphism_witness(&w, &**sp.law(), &pairs).unwrap().is_none());
    }

    #[test]
    fn word_independence() {
        let f = FiniteField::shared(5).unwrap();
        let w = WeilRep::new(f.clone(), 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gens = [
            Token::Omega,
            Token::u(SMat::scalar(&*f, 1, 1)),
            Token::u(SMat::scalar(&*f, 1, 3)),
            Token::d(SMat::scalar(&*f, 1, 2)),
        ];
        for _ in 0..30 {
            let word: Vec<Token> = (0..rng.gen_range(1..8)).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
            let g = evaluate(&*f, 1, &word).unwrap();
            assert_eq!(w.op_word(&word).unwrap(), *w.op_sp(&g).unwrap());
        }
    }

    #[test]
    fn stone_von_neumann_q3() {
        let sc = OddScenario::new(3, 1).unwrap();
        let sp = enumerate_sp(sc.field.clone(), 1, DEFAULT_BUDGET).unwrap();
        let els = sc.sp_h_elements(sp.elements());
        assert_eq!(els.len(), 648);
        let rep = semidirect_weil(sc.weil.clone());
        let chi = character_values(&rep, &els).unwrap();
        let (n, irr) = is_irreducible(&chi).unwrap();
        assert!(irr, "⟨χ,χ⟩ = {n}");
        // on Sp alone the Weil representation has two constituents
        let chi_sp = character_values(&*sc.weil, sp.elements()).unwrap();
        assert_eq!(is_irreducible(&chi_sp).unwrap().0, rational(2));
    }

    #[test]
    fn restriction_lemma_q3() {
        let sc = OddScenario::new(3, 1).unwrap();
        let sp = enumerate_sp(sc.field.clone(), 1, DEFAULT_BUDGET).unwrap();
        let rho = sc.rho_gsp().unwrap();
        let gsp = enumerate_gsp(sc.field.clone(), 1, DEFAULT_BUDGET).unwrap();
        let pairs: Vec<_> = gsp.elements().iter().take(12).flat_map(|a| gsp.elements().iter().map(move |b| (*a, *b))).collect();
        assert!(homomorphism_witness(&rho, &**gsp.law(), &pairs).unwrap().is_none());
        let chi = character_values(&rho, sp.elements()).unwrap();
        let c1 = character_values(&*sc.weil, sp.elements()).unwrap();
        let c2 = character_values(&*sc.weil_twisted(sc.nonsquare()).unwrap(), sp.elements()).unwrap();
        let d = decompose(&chi, &[c1, c2]).unwrap();
        assert_eq!(d.multiplicities, vec![rational(1), rational(1)]);
        assert!(d.residual.is_zero());
    }

    #[test]
    fn rho_prime_q3_is_irreducible() {
        let sc = OddScenario::new(3, 1).unwrap();
        let (law, rho) = sc.rho_prime().unwrap();
        let gsp = enumerate_gsp(sc.field.clone(), 1, DEFAULT_BUDGET).unwrap();
        let g: Vec<_> = sc.sp_h_elements(gsp.elements());
        assert_eq!(g.len(), 1296);
        let group = FiniteGroup::from_elements(law.clone(), g);
        let pairs: Vec<_> = (0..200)
            .map(|i| (group.elements()[i * 5 % 1296].clone(), group.elements()[i * 37 % 1296].clone()))
            .collect();
        assert!(homomorphism_witness(&rho, &*law, &pairs).unwrap().is_none());
        assert_eq!(rho.dim(), 6);
        let chi = character_values(&rho, group.elements()).unwrap();
        assert!(is_irreducible(&chi).unwrap().1);
    }
}
