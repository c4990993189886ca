//! 2-cocycles with central coefficients, the extensions they define, and the
//! square-root tower over `F^×` and `GSp(W)` for `q ≡ 1 (mod 4)`:
//! `F̃^{×2}`, `F̃^×`, `G̃Sp(W)`, its `F^×`-extension `⌢G̃Sp(W)`, the maps
//! `λ̃`, `ν`, `τ̃`, and the two constructions of `PGSp^±(W)`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FiniteField, MultiplicativeStructure, ResidueCase};
use crate::group::{
    ActionFn, CocycleFn, CyclicLaw, Element, ExtensionLaw, FieldUnitsLaw, FiniteGroup, GroupLaw, Pair,
    QuotientLaw, SemidirectLaw, SharedLaw, SignLaw,
};
use crate::heisenberg::{HeisenbergElement, HeisenbergLaw};
use crate::rep::{InducedRep, Membership, PulledBack, SemidirectRep, SharedRep};
use crate::ring::FiniteRing;
use crate::symplectic::{enumerate_gsp, enumerate_sp, h_t, SymplecticElement};
use crate::weil_odd::WeilRep;

/// Why a table is not a normalized 2-cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleFailure<G> {
    /// `c(1, g) ≠ 1` or `c(g, 1) ≠ 1`.
    NotNormalized(G),
    /// `c(a,b) c(ab,c) ≠ c(b,c) c(a,bc)`.
    Identity(G, G, G),
}

impl<G: fmt::Debug> fmt::Display for CocycleFailure<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleFailure::NotNormalized(g) => write!(f, "not normalized at {g:?}"),
            CocycleFailure::Identity(a, b, c) => write!(f, "cocycle identity fails at ({a:?}, {b:?}, {c:?})"),
        }
    }
}

/// A rule `G × G → A` on an enumerated group, with `A` abelian and central.
pub struct TwoCocycle<G: Element, A: Element> {
    pub base: FiniteGroup<G>,
    pub coeff: FiniteGroup<A>,
    pub rule: CocycleFn<G, A>,
}

impl<G: Element, A: Element> Clone for TwoCocycle<G, A> {
    fn clone(&self) -> Self {
        TwoCocycle {
            base: self.base.clone(),
            coeff: self.coeff.clone(),
            rule: self.rule.clone(),
        }
    }
}

impl<G: Element, A: Element> TwoCocycle<G, A> {
    pub fn new(base: FiniteGroup<G>, coeff: FiniteGroup<A>, rule: CocycleFn<G, A>) -> Self {
        TwoCocycle { base, coeff, rule }
    }

    /// A cocycle given by a table; missing pairs map to the identity.
    pub fn from_table(base: FiniteGroup<G>, coeff: FiniteGroup<A>, table: HashMap<(G, G), A>) -> Self {
        let one = coeff.identity();
        let rule: CocycleFn<G, A> = Arc::new(move |a, b| table.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(|| one.clone()));
        TwoCocycle { base, coeff, rule }
    }

    pub fn eval(&self, a: &G, b: &G) -> A {
        (self.rule)(a, b)
    }

    /// Every value, keyed by pair.
    pub fn table(&self) -> HashMap<(G, G), A> {
        let els = self.base.elements();
        els.iter()
            .flat_map(|a| els.iter().map(move |b| ((a.clone(), b.clone()), self.eval(a, b))))
            .collect()
    }

    fn check_triple(&self, a: &G, b: &G, c: &G) -> bool {
        let k = &self.coeff;
        let ab = self.base.mul(a, b);
        let bc = self.base.mul(b, c);
        k.mul(&self.eval(a, b), &self.eval(&ab, c)) == k.mul(&self.eval(b, c), &self.eval(a, &bc))
    }

    fn check_normalized(&self) -> std::result::Result<(), CocycleFailure<G>> {
        let one = self.coeff.identity();
        let id = self.base.identity();
        for g in self.base.elements() {
            if self.eval(&id, g) != one || self.eval(g, &id) != one {
                return Err(CocycleFailure::NotNormalized(g.clone()));
            }
        }
        Ok(())
    }

    /// Exhaustive check of normalization and the cocycle identity.
    pub fn validate(&self) -> std::result::Result<(), CocycleFailure<G>> {
        self.check_normalized()?;
        let els = self.base.elements();
        let bad = els.par_iter().find_map_any(|a| {
            for b in els {
                for c in els {
                    if !self.check_triple(a, b, c) {
                        return Some(CocycleFailure::Identity(a.clone(), b.clone(), c.clone()));
                    }
                }
            }
            None
        });
        match bad {
            Some(w) => Err(w),
            None => Ok(()),
        }
    }

    /// Normalization plus the identity on `samples` random triples.
    pub fn validate_sampled<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> std::result::Result<(), CocycleFailure<G>> {
        self.check_normalized()?;
        for _ in 0..samples {
            let (a, b, c) = (self.base.random(rng), self.base.random(rng), self.base.random(rng));
            if !self.check_triple(a, b, c) {
                return Err(CocycleFailure::Identity(a.clone(), b.clone(), c.clone()));
            }
        }
        Ok(())
    }

    pub fn extension_law(&self) -> Arc<ExtensionLaw<G, A>> {
        Arc::new(ExtensionLaw {
            base: self.base.law().clone(),
            coeff: self.coeff.law().clone(),
            cocycle: self.rule.clone(),
        })
    }

    /// The central extension `[g₁,a₁][g₂,a₂] = [g₁g₂, c(g₁,g₂)a₁a₂]`,
    /// after validating the cocycle and that the coefficients commute.
    pub fn build_extension(&self) -> Result<FiniteGroup<Pair<G, A>>> {
        let ks = self.coeff.elements();
        if ks.iter().any(|a| ks.iter().any(|b| self.coeff.mul(a, b) != self.coeff.mul(b, a))) {
            return Err(Error::InvalidArgument("central extensions need abelian coefficients".into()));
        }
        self.validate().map_err(|w| Error::Verification(w.to_string()))?;
        Ok(self.extension_unchecked())
    }

    /// The extension without re-validating (for bases too large for an
    /// exhaustive triple sweep).
    pub fn extension_unchecked(&self) -> FiniteGroup<Pair<G, A>> {
        let elements = self
            .base
            .elements()
            .iter()
            .flat_map(|g| self.coeff.elements().iter().map(move |a| Pair::new(g.clone(), a.clone())))
            .collect();
        FiniteGroup::from_elements(self.extension_law(), elements)
    }
}

/// `[a, ε] ∈ F̃^{×2}`.
pub type TildeSquare = Pair<u8, i8>;
/// `[t, ε] ∈ F̃^×`, as the extension of `F^×` by `±1` through `c‴`.
pub type TildeUnit = Pair<u8, i8>;
/// `([a, ε], ṫ) ∈ F̃^×`, as the extension of `F^×/F^{×2}` by `F̃^{×2}`
/// through `c″`; stored as `Pair { g: ṫ, h: [a, ε] }`.
pub type TildeUnitSplit = Pair<u32, TildeSquare>;
/// `[g, ε] ∈ G̃Sp(W)`.
pub type TildeGsp = Pair<SymplecticElement, i8>;
/// `[g̃, k] ∈ ⌢G̃Sp(W)`.
pub type HatGsp = Pair<TildeGsp, u8>;

/// The field part of the tower: the square-root section, `κ`, and the
/// cocycles `c_√`, `c′`, `c″`, `c‴` and `c`.
pub struct SquareClassTower {
    field: Arc<FiniteField>,
    structure: Arc<MultiplicativeStructure>,
    xi: u8,
    units: FiniteGroup<u8>,
    squares: FiniteGroup<u8>,
    classes: FiniteGroup<u32>,
    signs: FiniteGroup<i8>,
}

impl fmt::Debug for SquareClassTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquareClassTower(q={}, ξ={})", self.field.q(), self.xi)
    }
}

impl SquareClassTower {
    /// Requires `q ≡ 1 (mod 4)`. `ξ` is the generator of `F_{2^n}`, a
    /// nonsquare.
    pub fn new(field: Arc<FiniteField>) -> Result<Self> {
        let structure = Arc::new(MultiplicativeStructure::decompose(field.clone())?);
        if structure.residue_case() != ResidueCase::Q1 {
            return Err(Error::WrongCase("the square-root tower is built for q ≡ 1 (mod 4)".into()));
        }
        let xi = structure.gpow(structure.l() as i64);
        debug_assert!(!structure.is_square(xi));
        let units_law: SharedLaw<u8> = Arc::new(FieldUnitsLaw(field.clone()));
        let units = FiniteGroup::generate(units_law.clone(), &[structure.generator()], 256)?;
        let squares = FiniteGroup::generate(units_law, &[structure.gpow(2)], 256)?;
        let classes = FiniteGroup::generate(Arc::new(CyclicLaw(2)), &[1], 2)?;
        let signs = FiniteGroup::generate(Arc::new(SignLaw), &[-1], 2)?;
        Ok(SquareClassTower {
            field,
            structure,
            xi,
            units,
            squares,
            classes,
            signs,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn structure(&self) -> &Arc<MultiplicativeStructure> {
        &self.structure
    }
    pub fn xi(&self) -> u8 {
        self.xi
    }
    pub fn units(&self) -> &FiniteGroup<u8> {
        &self.units
    }
    pub fn squares(&self) -> &FiniteGroup<u8> {
        &self.squares
    }

    /// `ṫ ∈ F^×/F^{×2}` as `0` (squares) or `1`.
    pub fn class(&self, t: u8) -> u32 {
        if self.structure.is_square(t) {
            0
        } else {
            1
        }
    }

    pub fn kappa(&self, c: u32) -> u8 {
        if c % 2 == 0 {
            1
        } else {
            self.xi
        }
    }

    /// `t = a_t² κ(ṫ)`, returned as `(a_t², ṫ)`.
    pub fn split(&self, t: u8) -> (u8, u32) {
        let c = self.class(t);
        let a2 = self.field.div(t, self.kappa(c)).expect("unit");
        (a2, c)
    }

    /// The fixed section `√(g^{2j}) = g^j`.
    pub fn sqrt(&self, a: u8) -> u8 {
        self.structure.sqrt(a).expect("square")
    }

    pub fn c_sqrt(&self, a: u8, b: u8) -> i8 {
        self.structure.c_sqrt(a, b).expect("squares")
    }

    /// `κ(ṫ₁)κ(ṫ₂) = c′(ṫ₁,ṫ₂) κ(ṫ₁ṫ₂)`.
    pub fn c_prime(&self, c1: u32, c2: u32) -> u8 {
        let f = &*self.field;
        let num = f.mul(self.kappa(c1), self.kappa(c2));
        f.div(num, self.kappa((c1 + c2) % 2)).expect("unit")
    }

    /// `c′` seen in `F̃^{×2}` through `a ↦ [a, 1]`.
    pub fn c_double_prime(&self, c1: u32, c2: u32) -> TildeSquare {
        Pair::new(self.c_prime(c1, c2), 1)
    }

    /// `c‴(t₁,t₂) = c_√(a₁²,a₂²) c_√(a₁²a₂², c′(ṫ₁,ṫ₂))`.
    pub fn c_triple_prime(&self, t1: u8, t2: u8) -> i8 {
        let (a1, c1) = self.split(t1);
        let (a2, c2) = self.split(t2);
        let a12 = self.field.mul(a1, a2);
        self.c_sqrt(a1, a2) * self.c_sqrt(a12, self.c_prime(c1, c2))
    }

    /// `√: F̃^{×2} → F^×, [a, ε] ↦ √a ε`.
    pub fn sqrt_iso(&self, x: &TildeSquare) -> u8 {
        let s = self.sqrt(x.g);
        if x.h == 1 {
            s
        } else {
            self.field.neg(s)
        }
    }

    /// `c(ṫ₁, ṫ₂) = √(c″(ṫ₁, ṫ₂)) ∈ F^×`.
    pub fn c_hat(&self, c1: u32, c2: u32) -> u8 {
        self.sqrt_iso(&self.c_double_prime(c1, c2))
    }

    pub fn cocycle_sqrt(self: &Arc<Self>) -> TwoCocycle<u8, i8> {
        let me = self.clone();
        TwoCocycle::new(self.squares.clone(), self.signs.clone(), Arc::new(move |a, b| me.c_sqrt(*a, *b)))
    }

    pub fn cocycle_prime(self: &Arc<Self>) -> TwoCocycle<u32, u8> {
        let me = self.clone();
        TwoCocycle::new(self.classes.clone(), self.squares.clone(), Arc::new(move |a, b| me.c_prime(*a, *b)))
    }

    pub fn tilde_square_law(self: &Arc<Self>) -> Arc<ExtensionLaw<u8, i8>> {
        self.cocycle_sqrt().extension_law()
    }

    /// `F̃^{×2}`, order `2|F^{×2}|`.
    pub fn tilde_squares(self: &Arc<Self>) -> Result<FiniteGroup<TildeSquare>> {
        self.cocycle_sqrt().build_extension()
    }

    pub fn cocycle_double_prime(self: &Arc<Self>) -> Result<TwoCocycle<u32, TildeSquare>> {
        let me = self.clone();
        Ok(TwoCocycle::new(
            self.classes.clone(),
            self.tilde_squares()?,
            Arc::new(move |a, b| me.c_double_prime(*a, *b)),
        ))
    }

    pub fn cocycle_triple_prime(self: &Arc<Self>) -> TwoCocycle<u8, i8> {
        let me = self.clone();
        TwoCocycle::new(self.units.clone(), self.signs.clone(), Arc::new(move |a, b| me.c_triple_prime(*a, *b)))
    }

    pub fn cocycle_hat(self: &Arc<Self>) -> TwoCocycle<u32, u8> {
        let me = self.clone();
        TwoCocycle::new(self.classes.clone(), self.units.clone(), Arc::new(move |a, b| me.c_hat(*a, *b)))
    }

    /// `F̃^×` as the extension of `F^×/F^{×2}` by `F̃^{×2}`.
    pub fn tilde_units_split(self: &Arc<Self>) -> Result<FiniteGroup<TildeUnitSplit>> {
        self.cocycle_double_prime()?.build_extension()
    }

    /// `F̃^×` as the extension of `F^×` by `±1`.
    pub fn tilde_units(self: &Arc<Self>) -> Result<FiniteGroup<TildeUnit>> {
        self.cocycle_triple_prime().build_extension()
    }

    /// `([g, ε], ṫ) ↦ g κ(ṫ)`, the middle column of the diagram.
    pub fn split_to_units(&self, x: &TildeUnitSplit) -> u8 {
        self.field.mul(x.h.g, self.kappa(x.g))
    }

    /// `[t, ε] ↦ ([a_t², ε], ṫ)`.
    pub fn to_split(&self, x: &TildeUnit) -> TildeUnitSplit {
        let (a2, c) = self.split(x.g);
        Pair::new(c, Pair::new(a2, x.h))
    }

    /// `c‴` read off from the split presentation through the section
    /// `t ↦ ([a_t², 1], ṫ)`.
    pub fn c_triple_prime_from_section(self: &Arc<Self>, t1: u8, t2: u8) -> i8 {
        let law = self.cocycle_double_prime().expect("valid").extension_law();
        let s = |t: u8| self.to_split(&Pair::new(t, 1));
        let prod = law.mul(&s(t1), &s(t2));
        let base = s(self.field.mul(t1, t2));
        debug_assert_eq!((prod.g, prod.h.g), (base.g, base.h.g));
        prod.h.h * base.h.h
    }

    /// The map `F̃^{×2} → F^×` is a bijective homomorphism.
    pub fn verify_sqrt_iso(self: &Arc<Self>) -> Result<()> {
        let g = self.tilde_squares()?;
        let images: HashSet<u8> = g.elements().iter().map(|x| self.sqrt_iso(x)).collect();
        if images.len() != g.order() || images.len() != self.units.order() {
            return Err(Error::Verification("√ on F̃^{×2} is not a bijection onto F^×".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                let lhs = self.sqrt_iso(&g.mul(a, b));
                let rhs = self.field.mul(self.sqrt_iso(a), self.sqrt_iso(b));
                if lhs != rhs {
                    return Err(Error::Verification(format!("√ not multiplicative at {a:?}, {b:?}")));
                }
            }
        }
        Ok(())
    }

    /// `c‴` agrees with its closed form, and both routes
    /// `F̃^× → F^×/F^{×2}` agree.
    pub fn verify_diagram(self: &Arc<Self>) -> Result<()> {
        for &t1 in self.units.elements() {
            for &t2 in self.units.elements() {
                if self.c_triple_prime(t1, t2) != self.c_triple_prime_from_section(t1, t2) {
                    return Err(Error::Verification(format!("c‴ closed form disagrees at ({t1}, {t2})")));
                }
            }
        }
        let split = self.tilde_units_split()?;
        let middle = self.tilde_units()?;
        let split_law = split.law().clone();
        for x in split.elements() {
            if self.class(self.split_to_units(x)) != x.g {
                return Err(Error::Verification(format!("diagram does not commute at {x:?}")));
            }
        }
        // the middle column is a homomorphism, and [t, ε] ↦ ([a_t², ε], ṫ) an isomorphism
        for a in split.elements() {
            for b in split.elements() {
                let lhs = self.split_to_units(&split_law.mul(a, b));
                if lhs != self.field.mul(self.split_to_units(a), self.split_to_units(b)) {
                    return Err(Error::Verification(format!("F̃^× → F^× not multiplicative at {a:?}, {b:?}")));
                }
            }
        }
        for a in middle.elements() {
            for b in middle.elements() {
                if self.to_split(&middle.mul(a, b)) != split_law.mul(&self.to_split(a), &self.to_split(b)) {
                    return Err(Error::Verification(format!("the two presentations of F̃^× differ at {a:?}, {b:?}")));
                }
            }
        }
        Ok(())
    }
}

/// `G̃Sp(W)`, `⌢G̃Sp(W)` and the maps between them, `q ≡ 1 (mod 4)`.
pub struct TildeGspTower {
    pub sq: Arc<SquareClassTower>,
    pub m: usize,
    pub sp: FiniteGroup<SymplecticElement>,
    pub gsp: FiniteGroup<SymplecticElement>,
    pub tilde: FiniteGroup<TildeGsp>,
    pub heisenberg: Arc<HeisenbergLaw>,
    tilde_law: Arc<ExtensionLaw<SymplecticElement, i8>>,
}

impl fmt::Debug for TildeGspTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TildeGspTower(q={}, m={})", self.sq.field.q(), self.m)
    }
}

impl TildeGspTower {
    pub fn new(q: u32, m: usize, budget: usize) -> Result<Arc<Self>> {
        let field = FiniteField::shared(q)?;
        let sq = Arc::new(SquareClassTower::new(field.clone())?);
        let sp = enumerate_sp(field.clone(), m, budget)?;
        let gsp = enumerate_gsp(field.clone(), m, budget)?;
        if 2 * gsp.order() > budget {
            return Err(Error::Budget(format!("|G̃Sp| = {} exceeds {budget}", 2 * gsp.order())));
        }
        let s = sq.clone();
        let cocycle = TwoCocycle::new(
            gsp.clone(),
            sq.signs.clone(),
            Arc::new(move |a: &SymplecticElement, b: &SymplecticElement| s.c_triple_prime(a.lambda, b.lambda)),
        );
        let tilde_law = cocycle.extension_law();
        // the cocycle is pulled back from F^× along λ, where it is checked exhaustively
        let tilde = cocycle.extension_unchecked();
        Ok(Arc::new(TildeGspTower {
            heisenberg: Arc::new(HeisenbergLaw::odd(field, m)?),
            sq,
            m,
            sp,
            gsp,
            tilde,
            tilde_law,
        }))
    }

    pub fn field(&self) -> &FiniteField {
        &self.sq.field
    }

    pub fn tilde_law(&self) -> SharedLaw<TildeGsp> {
        self.tilde_law.clone()
    }

    /// `c(g̃₁, g̃₂) = √(c″(λ̇₁, λ̇₂))`.
    pub fn c(&self, a: &TildeGsp, b: &TildeGsp) -> u8 {
        self.sq.c_hat(self.sq.class(a.g.lambda), self.sq.class(b.g.lambda))
    }

    pub fn cocycle_c(self: &Arc<Self>) -> TwoCocycle<TildeGsp, u8> {
        let me = self.clone();
        TwoCocycle::new(self.tilde.clone(), self.sq.units.clone(), Arc::new(move |a, b| me.c(a, b)))
    }

    pub fn hat_law(self: &Arc<Self>) -> Arc<ExtensionLaw<TildeGsp, u8>> {
        self.cocycle_c().extension_law()
    }

    /// All of `⌢G̃Sp(W)`.
    pub fn hat_elements(&self) -> Vec<HatGsp> {
        self.tilde
            .elements()
            .iter()
            .flat_map(|g| self.sq.units.elements().iter().map(move |&k| Pair::new(g.clone(), k)))
            .collect()
    }

    /// `λ̃[g, ε] = [λ_g, ε]`.
    pub fn lambda_tilde(&self, x: &TildeGsp) -> TildeUnit {
        Pair::new(x.g.lambda, x.h)
    }

    /// `ν[a, ε] = [√a ε, ε]`.
    pub fn nu(&self, x: &TildeSquare) -> TildeGsp {
        let s = self.sq.sqrt_iso(x);
        Pair::new(SymplecticElement::identity(self.field(), self.m).scale(self.field(), s), x.h)
    }

    pub fn nu_image(&self) -> Result<Vec<TildeGsp>> {
        Ok(self.sq.tilde_squares()?.elements().iter().map(|x| self.nu(x)).collect())
    }

    /// `Sp(W) → G̃Sp(W), g ↦ [g, 1]`.
    pub fn embed_sp(&self, g: &SymplecticElement) -> TildeGsp {
        Pair::new(*g, 1)
    }

    /// `Sp(W) → ⌢G̃Sp(W), g ↦ [[g, 1], 1]`.
    pub fn embed_sp_hat(&self, g: &SymplecticElement) -> HatGsp {
        Pair::new(self.embed_sp(g), 1)
    }

    /// `τ̃[g, ε] = (√[a_g², ε])^{-1}`.
    pub fn tau(&self, x: &TildeGsp) -> u8 {
        let (a2, _) = self.sq.split(x.g.lambda);
        self.field().inv(self.sq.sqrt_iso(&Pair::new(a2, x.h))).expect("unit")
    }

    /// `[g̃, k] ↦ τ̃(g̃) k g ∈ GSp(W)`, the similitude through which
    /// `⌢G̃Sp(W)` acts on `H(W)`.
    pub fn phi(&self, x: &HatGsp) -> SymplecticElement {
        let f = self.field();
        x.g.g.scale(f, f.mul(self.tau(&x.g), x.h))
    }

    /// `F̃^{×2}Sp(W)`: elements with square similitude factor.
    pub fn in_square_part(&self, x: &TildeGsp) -> bool {
        self.sq.class(x.g.lambda) == 0
    }

    /// `PGSp^±(W) = G̃Sp(W)/ν(F̃^{×2})`.
    pub fn pgsp(&self) -> Result<FiniteGroup<TildeGsp>> {
        let normal = self.nu_image()?;
        let law = Arc::new(QuotientLaw {
            law: self.tilde_law(),
            normal,
        });
        let reps: Vec<TildeGsp> = self.tilde.elements().par_iter().map(|e| law.canonical(e)).collect();
        Ok(FiniteGroup::from_elements(law, reps))
    }

    /// `λ̃` on sampled pairs.
    pub fn verify_lambda_tilde_sampled<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<()> {
        let units = self.sq.cocycle_triple_prime().extension_law();
        for _ in 0..samples {
            let a = self.tilde.random(rng);
            let b = self.tilde.random(rng);
            if self.lambda_tilde(&self.tilde.mul(a, b)) != units.mul(&self.lambda_tilde(a), &self.lambda_tilde(b)) {
                return Err(Error::Verification(format!("λ̃ not multiplicative at {a:?}, {b:?}")));
            }
        }
        Ok(())
    }

    /// `λ̃` is a homomorphism `G̃Sp(W) → F̃^×`, checked on every pair.
    pub fn verify_lambda_tilde(&self) -> Result<()> {
        let units = self.sq.cocycle_triple_prime().extension_law();
        let els = self.tilde.elements();
        let bad = els.par_iter().find_map_any(|a| {
            els.iter()
                .find(|b| self.lambda_tilde(&self.tilde.mul(a, b)) != units.mul(&self.lambda_tilde(a), &self.lambda_tilde(b)))
                .map(|b| (a.clone(), b.clone()))
        });
        match bad {
            Some((a, b)) => Err(Error::Verification(format!("λ̃ not multiplicative at {a:?}, {b:?}"))),
            None => Ok(()),
        }
    }

    /// `ker λ̃ = {[g, 1] : g ∈ Sp(W)}` and `g ↦ [g, 1]` is a homomorphism.
    pub fn verify_kernel(&self) -> Result<()> {
        let kernel: HashSet<TildeGsp> = self
            .tilde
            .elements()
            .iter()
            .filter(|x| x.g.lambda == 1 && x.h == 1)
            .cloned()
            .collect();
        let image: HashSet<TildeGsp> = self.sp.elements().iter().map(|g| self.embed_sp(g)).collect();
        if kernel != image {
            return Err(Error::Verification("ker λ̃ differs from the image of Sp(W)".into()));
        }
        for a in self.sp.elements() {
            for b in self.sp.elements().iter().step_by(7) {
                if self.tilde.mul(&self.embed_sp(a), &self.embed_sp(b)) != self.embed_sp(&self.sp.mul(a, b)) {
                    return Err(Error::Verification(format!("Sp(W) → G̃Sp(W) not multiplicative at {a:?}, {b:?}")));
                }
            }
        }
        Ok(())
    }

    /// `ν` is an injective homomorphism with central image meeting `Sp(W)`
    /// trivially, and `F̃^{×2}Sp(W) = ν(F̃^{×2}) Sp(W)`.
    pub fn verify_nu(&self) -> Result<()> {
        let ts = self.sq.tilde_squares()?;
        let image = self.nu_image()?;
        if image.iter().collect::<HashSet<_>>().len() != ts.order() {
            return Err(Error::Verification("ν is not injective".into()));
        }
        for a in ts.elements() {
            for b in ts.elements() {
                if self.nu(&ts.mul(a, b)) != self.tilde.mul(&self.nu(a), &self.nu(b)) {
                    return Err(Error::Verification(format!("ν not multiplicative at {a:?}, {b:?}")));
                }
            }
        }
        for z in &image {
            if let Some(g) = self.tilde.elements().par_iter().find_any(|g| self.tilde.mul(g, z) != self.tilde.mul(z, g)) {
                return Err(Error::Verification(format!("ν image not central: {z:?} vs {g:?}")));
            }
            if z.h == 1 && z.g.lambda == 1 && *z != self.tilde.identity() {
                return Err(Error::Verification(format!("ν image meets Sp(W) in {z:?}")));
            }
        }
        let product: HashSet<TildeGsp> = image
            .iter()
            .flat_map(|z| self.sp.elements().iter().map(move |g| (z, g)))
            .map(|(z, g)| self.tilde.mul(z, &self.embed_sp(g)))
            .collect();
        let square_part: HashSet<TildeGsp> = self.tilde.elements().iter().filter(|x| self.in_square_part(x)).cloned().collect();
        if product != square_part {
            return Err(Error::Verification("F̃^{×2}Sp(W) differs from ν(F̃^{×2})Sp(W)".into()));
        }
        Ok(())
    }

    /// `τ̃(g̃₁)τ̃(g̃₂) = τ̃(g̃₁g̃₂) c(g̃₁,g̃₂)` on sampled pairs, and `c` is
    /// trivial when either argument lies in `F̃^{×2}Sp(W)`.
    pub fn verify_tau<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<()> {
        let f = self.field();
        for _ in 0..samples {
            let a = self.tilde.random(rng);
            let b = self.tilde.random(rng);
            let lhs = f.mul(self.tau(a), self.tau(b));
            let rhs = f.mul(self.tau(&self.tilde.mul(a, b)), self.c(a, b));
            if lhs != rhs {
                return Err(Error::Verification(format!("τ̃ identity fails at {a:?}, {b:?}")));
            }
            if (self.in_square_part(a) || self.in_square_part(b)) && (self.c(a, b) != 1 || self.c(b, a) != 1) {
                return Err(Error::Verification(format!("c nontrivial on F̃^{{×2}}Sp at {a:?}, {b:?}")));
            }
        }
        Ok(())
    }

    /// `[g̃, k] ↦ τ̃(g̃) k g` is a homomorphism on sampled pairs.
    pub fn verify_phi<R: Rng + ?Sized>(self: &Arc<Self>, samples: usize, rng: &mut R) -> Result<()> {
        let law = self.hat_law();
        let hats = self.hat_elements();
        let gsp = self.gsp.law();
        for _ in 0..samples {
            let a = &hats[rng.gen_range(0..hats.len())];
            let b = &hats[rng.gen_range(0..hats.len())];
            if self.phi(&law.mul(a, b)) != gsp.mul(&self.phi(a), &self.phi(b)) {
                return Err(Error::Verification(format!("⌢G̃Sp(W) → GSp(W) not multiplicative at {a:?}, {b:?}")));
            }
        }
        Ok(())
    }

    /// `1 → Sp(W) → PGSp^±(W) → F^×/F^{×2} → 1`.
    pub fn verify_pgsp_sequence(&self, pgsp: &FiniteGroup<TildeGsp>) -> Result<()> {
        let canon = |x: &TildeGsp| pgsp.mul(&pgsp.identity(), x);
        let sp_image: Vec<TildeGsp> = self.sp.elements().iter().map(|g| canon(&self.embed_sp(g))).collect();
        let sq = self.sq.clone();
        verify_exact_sequence(pgsp, &sp_image, self.sp.order(), move |x: &TildeGsp| sq.class(x.g.lambda))
    }
}

/// `⌢G̃Sp(W)` acting on `H(W)` by `(v,t) ↦ (τ̃(g̃) v g k, λ_{τ̃(g̃)g} λ_k t)`.
pub fn gsph_action(tower: Arc<TildeGspTower>) -> ActionFn<HeisenbergElement, HatGsp> {
    Arc::new(move |x, y| {
        let g = tower.phi(y);
        tower.heisenberg.scaled_action(x, 1, &g, g.lambda)
    })
}

/// `ρ'_ψ = Ind_{[Z₂ × F̃^{×2}Sp(W)] ⋉ H(W)}^{⌢G̃Sp(W) ⋉ H(W)} π_ψ`, with
/// `π_ψ` acting through `[g̃, k] ↦ τ̃(g̃) k g ∈ Sp(W)`.
pub fn hat_rho_prime(
    tower: &Arc<TildeGspTower>,
    weil: Arc<WeilRep>,
) -> Result<(SharedLaw<Pair<HatGsp, HeisenbergElement>>, InducedRep<Pair<HatGsp, HeisenbergElement>>)> {
    let f = tower.field();
    let hat: SharedLaw<HatGsp> = tower.hat_law();
    let law: SharedLaw<Pair<HatGsp, HeisenbergElement>> = Arc::new(SemidirectLaw {
        g_law: hat.clone(),
        h_law: tower.heisenberg.clone(),
        act: gsph_action(tower.clone()),
    });
    let minus = f.neg(1);
    let t = tower.clone();
    let member: Membership<Pair<HatGsp, HeisenbergElement>> =
        Arc::new(move |x| t.in_square_part(&x.g.g) && (x.g.h == 1 || x.g.h == minus));
    let t = tower.clone();
    let g_part: SharedRep<HatGsp> = Arc::new(PulledBack {
        inner: weil.clone() as SharedRep<SymplecticElement>,
        map: Arc::new(move |x: &HatGsp| {
            let g = t.phi(x);
            if g.lambda != 1 {
                return Err(Error::NotInGroup(format!("{x:?} acts through a proper similitude")));
            }
            Ok(g)
        }),
    });
    let w = weil.clone();
    let sigma: SharedRep<Pair<HatGsp, HeisenbergElement>> = Arc::new(SemidirectRep {
        g_part,
        h_part: Arc::new(move |h| w.op_heisenberg(h)),
    });
    // ([h_s, 1], τ̃([h_s, 1])^{-1}) acts by (v h_s, s t)
    let reps: Vec<Pair<HatGsp, HeisenbergElement>> = f
        .nonzero()
        .map(|s| {
            let g = Pair::new(h_t(f, tower.m, s).expect("unit"), 1i8);
            let k = f.inv(tower.tau(&g)).expect("unit");
            Pair::new(Pair::new(g, k), HeisenbergElement::central(0))
        })
        .collect();
    let mut distinct: Vec<Pair<HatGsp, HeisenbergElement>> = Vec::new();
    for r in reps {
        let fresh = distinct.iter().all(|d| !member(&law.mul(&law.inv(d), &r)));
        if fresh {
            distinct.push(r);
        }
    }
    let ind = InducedRep::new(law.clone(), member, sigma, distinct)?;
    Ok((law, ind))
}

/// Checks `1 → Sp → G → Z/2 → 1` for a class map `G → Z/2`: the Sp image
/// is injective, normal and equal to the kernel, and the class map is a
/// surjective homomorphism.
pub fn verify_exact_sequence<E: Element>(
    group: &FiniteGroup<E>,
    sp_image: &[E],
    sp_order: usize,
    class: impl Fn(&E) -> u32 + Sync,
) -> Result<()> {
    let image: HashSet<&E> = sp_image.iter().collect();
    if image.len() != sp_order {
        return Err(Error::Verification("Sp(W) does not embed".into()));
    }
    if !group.is_subgroup(sp_image) || !group.is_normal(sp_image) {
        return Err(Error::Verification("the image of Sp(W) is not a normal subgroup".into()));
    }
    let kernel: HashSet<&E> = group.elements().iter().filter(|x| class(x) == 0).collect();
    if kernel != image {
        return Err(Error::Verification("kernel of the class map differs from Sp(W)".into()));
    }
    if group.order() != 2 * sp_order {
        return Err(Error::Verification(format!("|G/Sp| = {} / {sp_order} is not 2", group.order())));
    }
    let els = group.elements();
    let bad = els.par_iter().find_any(|a| {
        els.iter().step_by(1 + els.len() / 512).any(|b| class(&group.mul(a, b)) != (class(a) + class(b)) % 2)
    });
    if let Some(a) = bad {
        return Err(Error::Verification(format!("class map not multiplicative at {a:?}")));
    }
    Ok(())
}

/// `PGSp^±(W) = GSp(W)/F^{×2}` for `q ≡ 3 (mod 4)`, with its exact sequence
/// verified.
pub fn quotient_pgsp_q3(q: u32, m: usize, budget: usize) -> Result<FiniteGroup<SymplecticElement>> {
    let field = FiniteField::shared(q)?;
    let structure = MultiplicativeStructure::decompose(field.clone())?;
    if structure.residue_case() != ResidueCase::Q3 {
        return Err(Error::WrongCase("GSp(W)/F^{×2} is the q ≡ 3 (mod 4) construction".into()));
    }
    let gsp = enumerate_gsp(field.clone(), m, budget)?;
    let sp = enumerate_sp(field.clone(), m, budget)?;
    let normal: Vec<SymplecticElement> = structure
        .squares()
        .into_iter()
        .map(|a| SymplecticElement::identity(&*field, m).scale(&*field, a))
        .collect();
    let pgsp = crate::group::quotient(&gsp, normal)?;
    let law = pgsp.law().clone();
    let id = law.identity();
    let sp_image: Vec<SymplecticElement> = sp.elements().iter().map(|g| law.mul(&id, g)).collect();
    let f = field.clone();
    verify_exact_sequence(&pgsp, &sp_image, sp.order(), move |x| if f.is_square(x.lambda) { 0 } else { 1 })?;
    Ok(pgsp)
}


#[cfg(test)]
mod rho_tests {
    use super::*;
    use crate::group::DEFAULT_BUDGET;
    use crate::linalg::{inner_product, rational};
    use crate::rep::{character_values, homomorphism_witness, MatrixRep};
    use crate::weil_odd::{semidirect_weil, OddScenario};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hat_rho_prime_contains_every_twist_q5() {
        let tw = TildeGspTower::new(5, 1, DEFAULT_BUDGET).unwrap();
        let sc = OddScenario::new(5, 1).unwrap();
        let (law, rho) = hat_rho_prime(&tw, sc.weil.clone()).unwrap();
        assert_eq!(rho.index(), 4);
        assert_eq!(rho.dim(), 20);
        let hats = tw.hat_elements();
        let hs = tw.heisenberg.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pairs: Vec<_> = (0..60)
            .map(|_| {
                let a = Pair::new(hats[rng.gen_range(0..hats.len())].clone(), hs[rng.gen_range(0..hs.len())]);
                let b = Pair::new(hats[rng.gen_range(0..hats.len())].clone(), hs[rng.gen_range(0..hs.len())]);
                (a, b)
            })
            .collect();
        assert!(homomorphism_witness(&rho, &*law, &pairs).unwrap().is_none());
        let sp_h = sc.sp_h_elements(tw.sp.elements());
        let embedded: Vec<_> = sp_h.iter().map(|x| Pair::new(tw.embed_sp_hat(&x.g), x.h)).collect();
        let chi = character_values(&rho, &embedded).unwrap();
        for s in 1..5u8 {
            let pi = semidirect_weil(sc.weil_twisted(s).unwrap());
            let chi_s = character_values(&pi, &sp_h).unwrap();
            assert_eq!(inner_product(&chi, &chi_s).unwrap(), rational(1), "s = {s}");
        }
    }
}
