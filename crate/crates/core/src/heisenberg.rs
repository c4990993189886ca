//! Heisenberg groups `W × F` (odd and polarized laws) and `W × R` (the even
//! law twisted by `β`), with the twisted symplectic actions on them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FiniteField, MultiplicativeStructure, ResidueCase};
use crate::galois_ring::GaloisRing;
use crate::group::{ActionFn, FiniteGroup, GroupLaw};
use crate::ring::FiniteRing;
use crate::symplectic::{form, SymplecticElement};

/// `(w, t)`; only the first `2m` slots of `w` are used.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub w: [u8; 4],
    pub t: u8,
}

impl fmt::Debug for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.w, self.t)
    }
}

impl HeisenbergElement {
    pub fn new(w: &[u8], t: u8) -> Self {
        let mut a = [0u8; 4];
        a[..w.len()].copy_from_slice(w);
        HeisenbergElement { w: a, t }
    }

    pub fn central(t: u8) -> Self {
        HeisenbergElement { w: [0; 4], t }
    }

    pub fn v(&self, m: usize) -> &[u8] {
        &self.w[..2 * m]
    }
}

/// Which multiplication law a Heisenberg group uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `(w + w', t + t' + ⟨w, w'⟩/2)` over odd `F`.
    Odd,
    /// `(w + w', t + t' + B(w, w'))` with `B(x + x*, y + y*) = ⟨x, y*⟩`.
    PolarizedB,
    /// `(w + w', t + t' + β(w, w'))` with `t ∈ GR(4, d)` and `β = 2β̃`.
    EvenBeta,
}

/// Multiplication oracle for one Heisenberg group.
pub struct HeisenbergLaw {
    flavor: Flavor,
    field: Arc<FiniteField>,
    ring: Option<Arc<GaloisRing>>,
    m: usize,
    half: u8,
}

impl fmt::Debug for HeisenbergLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({:?}, F_{}, m={})", self.flavor, self.field.q(), self.m)
    }
}

impl HeisenbergLaw {
    pub fn odd(field: Arc<FiniteField>, m: usize) -> Result<Self> {
        let half = field.half()?;
        Self::check_m(m)?;
        Ok(HeisenbergLaw {
            flavor: Flavor::Odd,
            field,
            ring: None,
            m,
            half,
        })
    }

    pub fn polarized(field: Arc<FiniteField>, m: usize) -> Result<Self> {
        Self::check_m(m)?;
        Ok(HeisenbergLaw {
            flavor: Flavor::PolarizedB,
            field,
            ring: None,
            m,
            half: 0,
        })
    }

    pub fn even(ring: Arc<GaloisRing>, m: usize) -> Result<Self> {
        Self::check_m(m)?;
        Ok(HeisenbergLaw {
            flavor: Flavor::EvenBeta,
            field: ring.residue_field().clone(),
            ring: Some(ring),
            m,
            half: 0,
        })
    }

    fn check_m(m: usize) -> Result<()> {
        if m == 0 || m > 2 {
            return Err(Error::InvalidArgument(format!("rank m = {m} is not supported")));
        }
        Ok(())
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn ring(&self) -> Option<&Arc<GaloisRing>> {
        self.ring.as_ref()
    }
    pub fn m(&self) -> usize {
        self.m
    }

    /// Size of the coefficient ring of the centre.
    pub fn center_size(&self) -> usize {
        match &self.ring {
            Some(r) => r.size(),
            None => self.field.size(),
        }
    }

    fn t_add(&self, a: u8, b: u8) -> u8 {
        match &self.ring {
            Some(r) => r.add(a, b),
            None => self.field.add(a, b),
        }
    }

    fn t_neg(&self, a: u8) -> u8 {
        match &self.ring {
            Some(r) => r.neg(a),
            None => self.field.neg(a),
        }
    }

    /// `Σ x_i y*_i` over `F`.
    pub fn b_form(&self, v: &[u8], w: &[u8]) -> u8 {
        let f = &self.field;
        (0..self.m).fold(0, |acc, i| f.add(acc, f.mul(v[i], w[self.m + i])))
    }

    /// `⟨v, w⟩` over `F`.
    pub fn symplectic_form(&self, v: &[u8], w: &[u8]) -> u8 {
        form(&*self.field, v, w)
    }

    /// The central correction `t'' − t − t'` of the group law.
    pub fn twist(&self, v: &[u8], w: &[u8]) -> u8 {
        match self.flavor {
            Flavor::Odd => self.field.mul(self.half, self.symplectic_form(v, w)),
            Flavor::PolarizedB => self.b_form(v, w),
            Flavor::EvenBeta => self.ring.as_ref().expect("ring").double_lift(self.b_form(v, w)),
        }
    }

    /// The commutator form: `⟨v, w⟩` in `F`, or `⟨v, w⟩_W = 2⟨ṽ, w̃⟩` in `R`.
    pub fn commutator_form(&self, v: &[u8], w: &[u8]) -> u8 {
        match self.flavor {
            Flavor::EvenBeta => {
                let r = self.ring.as_ref().expect("ring");
                r.double_lift(self.symplectic_form(v, w))
            }
            _ => self.symplectic_form(v, w),
        }
    }

    fn v_add(&self, v: &[u8; 4], w: &[u8; 4]) -> [u8; 4] {
        let mut out = [0u8; 4];
        for i in 0..2 * self.m {
            out[i] = self.field.add(v[i], w[i]);
        }
        out
    }

    /// Product, after checking that the caller expects this law's flavor.
    pub fn h_mul(&self, x: &HeisenbergElement, y: &HeisenbergElement, flavor: Flavor) -> Result<HeisenbergElement> {
        if flavor != self.flavor {
            return Err(Error::Mismatch(format!("{flavor:?} product in a {:?} group", self.flavor)));
        }
        Ok(self.mul(x, y))
    }

    /// Every element, in canonical order.
    pub fn elements(&self) -> Vec<HeisenbergElement> {
        let q = self.field.size();
        let n = 2 * self.m;
        let total = q.pow(n as u32);
        let mut out = Vec::with_capacity(total * self.center_size());
        for code in 0..total {
            let mut w = [0u8; 4];
            let mut c = code;
            for i in (0..n).rev() {
                w[i] = (c % q) as u8;
                c /= q;
            }
            for t in 0..self.center_size() {
                out.push(HeisenbergElement { w, t: t as u8 });
            }
        }
        out.sort();
        out
    }

    /// `(s·v·g, u·t)`, the common shape of all twisted actions.
    pub fn scaled_action(&self, x: &HeisenbergElement, s: u8, g: &SymplecticElement, u: u8) -> HeisenbergElement {
        let f = &*self.field;
        let moved = g.apply(f, x.v(self.m));
        let scaled: Vec<u8> = moved.iter().map(|&c| f.mul(s, c)).collect();
        let t = match &self.ring {
            Some(r) => r.mul(u, x.t),
            None => f.mul(u, x.t),
        };
        HeisenbergElement::new(&scaled, t)
    }
}

impl GroupLaw<HeisenbergElement> for HeisenbergLaw {
    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::central(0)
    }
    fn mul(&self, x: &HeisenbergElement, y: &HeisenbergElement) -> HeisenbergElement {
        let c = self.twist(x.v(self.m), y.v(self.m));
        HeisenbergElement {
            w: self.v_add(&x.w, &y.w),
            t: self.t_add(self.t_add(x.t, y.t), c),
        }
    }
    fn inv(&self, x: &HeisenbergElement) -> HeisenbergElement {
        // (w, t)(−w, s) = (0, t + s − twist(w, w))
        let f = &*self.field;
        let mut w = [0u8; 4];
        for i in 0..2 * self.m {
            w[i] = f.neg(x.w[i]);
        }
        let c = self.twist(x.v(self.m), x.v(self.m));
        HeisenbergElement {
            w,
            t: self.t_add(c, self.t_neg(x.t)),
        }
    }
}

/// The whole Heisenberg group as a [`FiniteGroup`].
pub fn heisenberg_group(law: Arc<HeisenbergLaw>) -> FiniteGroup<HeisenbergElement> {
    let elements = law.elements();
    FiniteGroup::from_elements(law, elements)
}

/// Named twisted right actions of similitude groups on `H(W)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionTag {
    /// `(τ(λ_g) v g, t)` on `F^× Sp(W)` (or `F_l Sp(W)`).
    Alphaac,
    /// `(τ(λ_g) v g, χ(λ_g) t)` with the Legendre symbol, `q ≡ 3 (mod 4)`.
    Sp6,
    /// `(τ(λ_g) v g, χ⁺(λ_g) t)`, `q ≡ 1 (mod 4)`.
    Sp7,
    /// `(τ̃(g̃) v g k, λ_{τ̃(g̃) g} λ_k t)` on the doubly extended group; built by
    /// [`crate::group_ext::gsph_action`].
    Gsph,
}

/// A twisted action of `GSp(W)` (or a subgroup) on the odd Heisenberg group.
#[derive(Clone)]
pub struct TwistedAction {
    pub tag: ActionTag,
    pub law: Arc<HeisenbergLaw>,
    pub structure: Arc<MultiplicativeStructure>,
}

impl fmt::Debug for TwistedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistedAction({:?})", self.tag)
    }
}

impl TwistedAction {
    pub fn new(tag: ActionTag, law: Arc<HeisenbergLaw>, structure: Arc<MultiplicativeStructure>) -> Result<Self> {
        let case = structure.residue_case();
        match (tag, case) {
            (ActionTag::Sp6, ResidueCase::Q1) | (ActionTag::Sp7, ResidueCase::Q3) => {
                return Err(Error::WrongCase(format!("{tag:?} does not apply when q ≡ {case} (mod 4)")));
            }
            (ActionTag::Gsph, _) => {
                return Err(Error::InvalidArgument("the gsph action acts through the extended group".into()));
            }
            _ => {}
        }
        if law.flavor() != Flavor::Odd {
            return Err(Error::Mismatch("twisted actions act on the odd Heisenberg group".into()));
        }
        Ok(TwistedAction { tag, law, structure })
    }

    pub fn act(&self, x: &HeisenbergElement, g: &SymplecticElement) -> Result<HeisenbergElement> {
        let st = &*self.structure;
        let case = st.residue_case();
        let f = &*self.law.field;
        let (s, u) = match self.tag {
            ActionTag::Alphaac => (st.tau_on_domain(case, g.lambda)?, f.one()),
            ActionTag::Sp6 => {
                let u = if f.quadratic_character(g.lambda) == 1 { f.one() } else { f.neg(f.one()) };
                (st.tau(case, g.lambda)?, u)
            }
            ActionTag::Sp7 => (st.tau(case, g.lambda)?, st.chi_plus(g.lambda)?),
            ActionTag::Gsph => unreachable!("rejected at construction"),
        };
        Ok(self.law.scaled_action(x, s, g, u))
    }

    /// The action as a closure for semidirect products; the group it is
    /// used with must lie in the action's domain.
    pub fn as_fn(&self) -> ActionFn<HeisenbergElement, SymplecticElement> {
        let me = self.clone();
        Arc::new(move |x, g| me.act(x, g).expect("element outside the domain of the twisted action"))
    }
}

/// The untwisted action `(v, t) ↦ (v g, t)` of `Sp(W)`.
pub fn linear_action(law: Arc<HeisenbergLaw>) -> ActionFn<HeisenbergElement, SymplecticElement> {
    Arc::new(move |x, g| law.scaled_action(x, 1, g, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{semidirect, DEFAULT_BUDGET};
    use crate::symplectic::{enumerate_gsp, enumerate_sp, h_t};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn odd(q: u32, m: usize) -> Arc<HeisenbergLaw> {
        Arc::new(HeisenbergLaw::odd(FiniteField::shared(q).unwrap(), m).unwrap())
    }

    #[test]
    fn central_and_basis_products() {
        let h = odd(3, 1);
        let z = h.mul(&HeisenbergElement::central(1), &HeisenbergElement::central(2));
        assert_eq!(z, HeisenbergElement::central(0));
        let e = HeisenbergElement::new(&[1, 0], 0);
        let es = HeisenbergElement::new(&[0, 1], 0);
        assert_eq!(h.mul(&e, &es), HeisenbergElement::new(&[1, 1], 2));
        let r = GaloisRing::shared(1).unwrap();
        let hb = HeisenbergLaw::even(r, 1).unwrap();
        assert_eq!(hb.mul(&e, &es), HeisenbergElement::new(&[1, 1], 2));
        assert_eq!(hb.mul(&es, &e), HeisenbergElement::new(&[1, 1], 0));
        assert!(hb.h_mul(&e, &es, Flavor::Odd).is_err());
    }

    #[test]
    fn axioms_centre_and_commutators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let laws: Vec<Arc<HeisenbergLaw>> = vec![
            odd(3, 1),
            odd(5, 1),
            Arc::new(HeisenbergLaw::polarized(FiniteField::shared(3).unwrap(), 1).unwrap()),
            Arc::new(HeisenbergLaw::even(GaloisRing::shared(1).unwrap(), 1).unwrap()),
            Arc::new(HeisenbergLaw::even(GaloisRing::shared(2).unwrap(), 1).unwrap()),
        ];
        for law in laws {
            let g = heisenberg_group(law.clone());
            g.check_axioms(200_000, 5_000, &mut rng).unwrap();
            let m = law.m();
            for x in g.elements() {
                let central = g.elements().iter().all(|y| g.mul(x, y) == g.mul(y, x));
                assert_eq!(central, x.v(m).iter().all(|&c| c == 0), "{law:?} {x:?}");
            }
            for x in g.elements().iter().step_by(3) {
                for y in g.elements().iter().step_by(5) {
                    // x y x^{-1} y^{-1} = (0, ⟨v_x, v_y⟩)
                    let c = g.mul(&g.mul(x, y), &g.mul(&g.inv(x), &g.inv(y)));
                    let expected = law.commutator_form(x.v(m), y.v(m));
                    assert_eq!(c, HeisenbergElement::central(expected));
                }
            }
        }
    }

    #[test]
    fn even_forms_split_the_commutator() {
        let r = GaloisRing::shared(2).unwrap();
        let h = HeisenbergLaw::even(r.clone(), 1).unwrap();
        let f = h.field().clone();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        let (v, w) = ([a, b], [c, d]);
                        let lhs = h.commutator_form(&v, &w);
                        assert_eq!(lhs, r.sub(h.twist(&v, &w), h.twist(&w, &v)));
                        assert!(r.in_two_r(lhs));
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_actions_are_actions_by_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, tag) in [(3u32, ActionTag::Sp6), (7, ActionTag::Sp6), (5, ActionTag::Sp7)] {
            let f = FiniteField::shared(q).unwrap();
            let st = Arc::new(MultiplicativeStructure::decompose(f.clone()).unwrap());
            let law = odd(q, 1);
            let act = TwistedAction::new(tag, law.clone(), st).unwrap();
            let gsp = enumerate_gsp(f, 1, DEFAULT_BUDGET).unwrap();
            let h = heisenberg_group(law);
            let prod = semidirect(&gsp, &h, act.as_fn(), 10_000_000, &mut rng).unwrap();
            assert_eq!(prod.order(), gsp.order() * h.order());
        }
    }

    #[test]
    fn sp6_h_minus_one_checks() {
        let f = FiniteField::shared(3).unwrap();
        let st = Arc::new(MultiplicativeStructure::decompose(f.clone()).unwrap());
        let law = odd(3, 1);
        let act = TwistedAction::new(ActionTag::Sp6, law.clone(), st).unwrap();
        let hm = h_t(&*f, 1, 2).unwrap();
        let gsp = enumerate_gsp(f.clone(), 1, DEFAULT_BUDGET).unwrap();
        let h = heisenberg_group(law.clone());
        for x in h.elements() {
            let once = act.act(x, &hm).unwrap();
            let moved = hm.apply(&*f, x.v(1));
            assert_eq!(once, HeisenbergElement::new(&moved, f.neg(x.t)));
            assert_eq!(act.act(&once, &hm).unwrap(), *x);
            for g in gsp.elements().iter().filter(|g| f.is_square(g.lambda)) {
                // (ii) and (iii)
                let lhs = act.act(&act.act(x, g).unwrap(), &hm).unwrap();
                assert_eq!(lhs, act.act(x, &g.mul(&*f, &hm)).unwrap());
                let lhs = act.act(&act.act(&act.act(x, &hm).unwrap(), g).unwrap(), &hm).unwrap();
                assert_eq!(lhs, act.act(x, &hm.mul(&*f, g).mul(&*f, &hm)).unwrap());
            }
            for y in h.elements() {
                // (iv)
                let lhs = act.act(&h.mul(x, y), &hm).unwrap();
                assert_eq!(lhs, h.mul(&act.act(x, &hm).unwrap(), &act.act(y, &hm).unwrap()));
            }
        }
    }

    #[test]
    fn alphaac_on_sp_is_linear_and_rejects_outside_domain() {
        let f = FiniteField::shared(7).unwrap();
        let st = Arc::new(MultiplicativeStructure::decompose(f.clone()).unwrap());
        let law = odd(7, 1);
        let act = TwistedAction::new(ActionTag::Alphaac, law.clone(), st).unwrap();
        let sp = enumerate_sp(f.clone(), 1, DEFAULT_BUDGET).unwrap();
        let lin = linear_action(law.clone());
        let x = HeisenbergElement::new(&[3, 5], 4);
        for g in sp.elements() {
            assert_eq!(act.act(&x, g).unwrap(), lin(&x, g));
        }
        let h3 = h_t(&*f, 1, 3).unwrap();
        assert!(act.act(&x, &h3).is_err());
        let st5 = Arc::new(MultiplicativeStructure::decompose(FiniteField::shared(5).unwrap()).unwrap());
        assert!(TwistedAction::new(ActionTag::Sp6, odd(5, 1), st5).is_err());
    }
}
