//! Finite groups given by a multiplication oracle: enumeration by closure,
//! axiom checks, and the generic semidirect, central-extension and quotient
//! laws.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::ring::FiniteRing;

/// Requirements on values used as group elements.
pub trait Element: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static {}
impl<T: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static> Element for T {}

/// Multiplication oracle of a group.
pub trait GroupLaw<E>: Send + Sync {
    fn identity(&self) -> E;
    fn mul(&self, a: &E, b: &E) -> E;
    fn inv(&self, a: &E) -> E;

    fn pow(&self, a: &E, mut e: u64) -> E
    where
        E: Clone,
    {
        let mut acc = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn conj(&self, a: &E, by: &E) -> E {
        // by^{-1} a by
        self.mul(&self.mul(&self.inv(by), a), by)
    }
}

pub type SharedLaw<E> = Arc<dyn GroupLaw<E>>;

/// Default element budget for enumerations.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Explicitly enumerated finite group in canonical (sorted) order.
pub struct FiniteGroup<E: Element> {
    law: SharedLaw<E>,
    elements: Vec<E>,
    index: HashMap<E, usize>,
}

impl<E: Element> Clone for FiniteGroup<E> {
    fn clone(&self) -> Self {
        FiniteGroup {
            law: self.law.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
        }
    }
}

impl<E: Element> Debug for FiniteGroup<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.elements.len())
    }
}

impl<E: Element> FiniteGroup<E> {
    /// Closure of `gens` under right multiplication by generators.
    pub fn generate(law: SharedLaw<E>, gens: &[E], budget: usize) -> Result<Self> {
        let elements = closure(&*law, gens, budget)?;
        Ok(Self::from_sorted(law, elements))
    }

    /// Wraps a known element list; the caller vouches for closure.
    pub fn from_elements(law: SharedLaw<E>, mut elements: Vec<E>) -> Self {
        elements.sort();
        elements.dedup();
        Self::from_sorted(law, elements)
    }

    fn from_sorted(law: SharedLaw<E>, elements: Vec<E>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        FiniteGroup {
            law,
            elements,
            index,
        }
    }

    pub fn law(&self) -> &SharedLaw<E> {
        &self.law
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[E] {
        &self.elements
    }
    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }
    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }
    pub fn identity(&self) -> E {
        self.law.identity()
    }
    pub fn mul(&self, a: &E, b: &E) -> E {
        self.law.mul(a, b)
    }
    pub fn inv(&self, a: &E) -> E {
        self.law.inv(a)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> &E {
        &self.elements[rng.gen_range(0..self.elements.len())]
    }

    /// Closure, identity, inverses and associativity. Triples are checked
    /// exhaustively when `|G|^3 <= exhaustive_limit`, otherwise `samples`
    /// random triples are used.
    pub fn check_axioms<R: Rng + ?Sized>(
        &self,
        exhaustive_limit: usize,
        samples: usize,
        rng: &mut R,
    ) -> Result<()> {
        let id = self.identity();
        if !self.contains(&id) {
            return Err(Error::Verification("identity missing".into()));
        }
        for a in &self.elements {
            if self.mul(&id, a) != *a || self.mul(a, &id) != *a {
                return Err(Error::Verification(format!("identity fails at {a:?}")));
            }
            let ai = self.inv(a);
            if !self.contains(&ai) || self.mul(a, &ai) != id || self.mul(&ai, a) != id {
                return Err(Error::Verification(format!("inverse fails at {a:?}")));
            }
        }
        let n = self.order();
        let triples: Vec<(usize, usize, usize)> = if n.saturating_pow(3) <= exhaustive_limit {
            (0..n)
                .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
                .collect()
        } else {
            (0..samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        };
        let bad = triples.par_iter().find_any(|&&(a, b, c)| {
            let (a, b, c) = (&self.elements[a], &self.elements[b], &self.elements[c]);
            let ab = self.mul(a, b);
            !self.contains(&ab) || self.mul(&ab, c) != self.mul(a, &self.mul(b, c))
        });
        if let Some(&(a, b, c)) = bad {
            return Err(Error::Verification(format!(
                "closure or associativity fails at ({:?}, {:?}, {:?})",
                self.elements[a], self.elements[b], self.elements[c]
            )));
        }
        Ok(())
    }

    /// Whether `sub` is closed under multiplication and inverses here.
    pub fn is_subgroup(&self, sub: &[E]) -> bool {
        let set: HashSet<&E> = sub.iter().collect();
        set.contains(&self.identity())
            && sub.par_iter().all(|a| {
                set.contains(&self.inv(a)) && sub.iter().all(|b| set.contains(&self.mul(a, b)))
            })
    }

    pub fn is_normal(&self, sub: &[E]) -> bool {
        let set: HashSet<&E> = sub.iter().collect();
        self.elements
            .par_iter()
            .all(|g| sub.iter().all(|n| set.contains(&self.law.conj(n, g))))
    }

    /// Element orders, in canonical order.
    pub fn element_order(&self, a: &E) -> u64 {
        let id = self.identity();
        let mut x = a.clone();
        let mut k = 1;
        while x != id {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }
}

/// Breadth-first closure of a generating set, returned sorted.
pub fn closure<E: Element>(law: &dyn GroupLaw<E>, gens: &[E], budget: usize) -> Result<Vec<E>> {
    let id = law.identity();
    let mut seen: HashSet<E> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let next: Vec<E> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |s| law.mul(x, s)))
            .collect();
        frontier = Vec::new();
        for y in next {
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::Budget(format!(
                        "closure exceeds {budget} elements"
                    )));
                }
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<E> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Elements reachable from the identity with the word map `g ↦ g·s`;
/// returns, for each element, the parent index and generator used.
pub struct CayleyTree<E: Element> {
    pub elements: Vec<E>,
    pub index: HashMap<E, usize>,
    /// `parent[i] = (j, s)` with `elements[j] · gens[s] = elements[i]`.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl<E: Element> CayleyTree<E> {
    pub fn build(law: &dyn GroupLaw<E>, gens: &[E], budget: usize) -> Result<Self> {
        let id = law.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut parent = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (s, g) in gens.iter().enumerate() {
                let y = law.mul(&elements[i], g);
                if !index.contains_key(&y) {
                    if elements.len() >= budget {
                        return Err(Error::Budget(format!("Cayley graph exceeds {budget} vertices")));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                    parent.push(Some((i, s)));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Ok(CayleyTree {
            elements,
            index,
            parent,
        })
    }
}

/// `(g, h)` pairs used by semidirect products and central extensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair<A, B> {
    pub g: A,
    pub h: B,
}

impl<A, B> Pair<A, B> {
    pub fn new(g: A, h: B) -> Self {
        Pair { g, h }
    }
}

/// Right action `(h, g) ↦ h·g` of one group on another.
pub type ActionFn<H, G> = Arc<dyn Fn(&H, &G) -> H + Send + Sync>;

/// `G ⋉ H` with `[g, h][g', h'] = [g g', (h·g') h']`.
pub struct SemidirectLaw<G, H> {
    pub g_law: SharedLaw<G>,
    pub h_law: SharedLaw<H>,
    pub act: ActionFn<H, G>,
}

impl<G: Element, H: Element> GroupLaw<Pair<G, H>> for SemidirectLaw<G, H> {
    fn identity(&self) -> Pair<G, H> {
        Pair::new(self.g_law.identity(), self.h_law.identity())
    }
    fn mul(&self, a: &Pair<G, H>, b: &Pair<G, H>) -> Pair<G, H> {
        let moved = (self.act)(&a.h, &b.g);
        Pair::new(self.g_law.mul(&a.g, &b.g), self.h_law.mul(&moved, &b.h))
    }
    fn inv(&self, a: &Pair<G, H>) -> Pair<G, H> {
        let gi = self.g_law.inv(&a.g);
        Pair::new(gi.clone(), (self.act)(&self.h_law.inv(&a.h), &gi))
    }
}

/// Checks that `act` is a right action by automorphisms, returning a
/// witness on failure. Pairs and triples are exhaustive up to `limit`.
pub fn validate_action<G: Element, H: Element, R: Rng + ?Sized>(
    g_group: &FiniteGroup<G>,
    h_group: &FiniteGroup<H>,
    act: &ActionFn<H, G>,
    limit: usize,
    samples: usize,
    rng: &mut R,
) -> Result<()> {
    let (gs, hs) = (g_group.elements(), h_group.elements());
    let gid = g_group.identity();
    for h in hs {
        if act(h, &gid) != *h {
            return Err(Error::Verification(format!("identity does not act trivially on {h:?}")));
        }
    }
    let (ng, nh) = (gs.len(), hs.len());
    let triples: Vec<(usize, usize, usize)> = if ng * ng * nh <= limit && ng * nh * nh <= limit {
        (0..nh)
            .flat_map(|h| (0..ng).flat_map(move |a| (0..ng.max(nh)).map(move |b| (h, a, b))))
            .collect()
    } else {
        (0..samples)
            .map(|_| {
                (
                    rng.gen_range(0..nh),
                    rng.gen_range(0..ng),
                    rng.gen_range(0..ng.max(nh)),
                )
            })
            .collect()
    };
    let bad = triples.par_iter().find_map_any(|&(hi, a, b)| {
        let (h, g1) = (&hs[hi], &gs[a]);
        if b < ng {
            let g2 = &gs[b];
            let lhs = act(&act(h, g1), g2);
            let rhs = act(h, &g_group.mul(g1, g2));
            if lhs != rhs {
                return Some(format!("action not compatible at ({h:?}, {g1:?}, {g2:?})"));
            }
        }
        if b < nh {
            let h2 = &hs[b];
            let lhs = act(&h_group.mul(h, h2), g1);
            let rhs = h_group.mul(&act(h, g1), &act(h2, g1));
            if lhs != rhs {
                return Some(format!("not an automorphism at ({h:?}, {h2:?}, {g1:?})"));
            }
        }
        None
    });
    match bad {
        Some(w) => Err(Error::Verification(w)),
        None => Ok(()),
    }
}

/// Builds `G ⋉_α H` after validating the action.
pub fn semidirect<G: Element, H: Element, R: Rng + ?Sized>(
    g_group: &FiniteGroup<G>,
    h_group: &FiniteGroup<H>,
    act: ActionFn<H, G>,
    budget: usize,
    rng: &mut R,
) -> Result<FiniteGroup<Pair<G, H>>> {
    let n = g_group.order() * h_group.order();
    if n > budget {
        return Err(Error::Budget(format!("semidirect product of order {n} exceeds {budget}")));
    }
    validate_action(g_group, h_group, &act, 2_000_000, 20_000, rng)?;
    let law = Arc::new(SemidirectLaw {
        g_law: g_group.law().clone(),
        h_law: h_group.law().clone(),
        act,
    });
    let mut elements = Vec::with_capacity(n);
    for g in g_group.elements() {
        for h in h_group.elements() {
            elements.push(Pair::new(g.clone(), h.clone()));
        }
    }
    Ok(FiniteGroup::from_sorted(law, elements))
}

/// A 2-cocycle rule `G × G → A`.
pub type CocycleFn<G, A> = Arc<dyn Fn(&G, &G) -> A + Send + Sync>;

/// `[g₁, a₁][g₂, a₂] = [g₁g₂, c(g₁, g₂) a₁ a₂]` for central `A`.
pub struct ExtensionLaw<G, A> {
    pub base: SharedLaw<G>,
    pub coeff: SharedLaw<A>,
    pub cocycle: CocycleFn<G, A>,
}

impl<G: Element, A: Element> GroupLaw<Pair<G, A>> for ExtensionLaw<G, A> {
    fn identity(&self) -> Pair<G, A> {
        Pair::new(self.base.identity(), self.coeff.identity())
    }
    fn mul(&self, x: &Pair<G, A>, y: &Pair<G, A>) -> Pair<G, A> {
        let c = (self.cocycle)(&x.g, &y.g);
        let a = self.coeff.mul(&self.coeff.mul(&c, &x.h), &y.h);
        Pair::new(self.base.mul(&x.g, &y.g), a)
    }
    fn inv(&self, x: &Pair<G, A>) -> Pair<G, A> {
        let gi = self.base.inv(&x.g);
        let c = (self.cocycle)(&x.g, &gi);
        Pair::new(gi, self.coeff.inv(&self.coeff.mul(&c, &x.h)))
    }
}

/// `G/N` with elements the minimal members of their cosets `gN`.
pub struct QuotientLaw<E> {
    pub law: SharedLaw<E>,
    pub normal: Vec<E>,
}

impl<E: Element> QuotientLaw<E> {
    pub fn canonical(&self, e: &E) -> E {
        self.normal
            .iter()
            .map(|n| self.law.mul(e, n))
            .min()
            .expect("normal subgroup contains the identity")
    }
}

impl<E: Element> GroupLaw<E> for QuotientLaw<E> {
    fn identity(&self) -> E {
        self.canonical(&self.law.identity())
    }
    fn mul(&self, a: &E, b: &E) -> E {
        self.canonical(&self.law.mul(a, b))
    }
    fn inv(&self, a: &E) -> E {
        self.canonical(&self.law.inv(a))
    }
}

/// Builds `G/N`, checking that `N` is a normal subgroup.
pub fn quotient<E: Element>(group: &FiniteGroup<E>, normal: Vec<E>) -> Result<FiniteGroup<E>> {
    if !group.is_subgroup(&normal) || !group.is_normal(&normal) {
        return Err(Error::Verification("quotient by a non-normal subset".into()));
    }
    let law = Arc::new(QuotientLaw {
        law: group.law().clone(),
        normal,
    });
    let reps: Vec<E> = group.elements().par_iter().map(|e| law.canonical(e)).collect();
    Ok(FiniteGroup::from_elements(law, reps))
}

/// `{±1}` under multiplication.
pub struct SignLaw;

impl GroupLaw<i8> for SignLaw {
    fn identity(&self) -> i8 {
        1
    }
    fn mul(&self, a: &i8, b: &i8) -> i8 {
        a * b
    }
    fn inv(&self, a: &i8) -> i8 {
        *a
    }
}

/// `Z/n` written additively.
pub struct CyclicLaw(pub u32);

impl GroupLaw<u32> for CyclicLaw {
    fn identity(&self) -> u32 {
        0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (a + b) % self.0
    }
    fn inv(&self, a: &u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }
}

/// `F^×` of a finite field.
pub struct FieldUnitsLaw(pub Arc<FiniteField>);

impl GroupLaw<u8> for FieldUnitsLaw {
    fn identity(&self) -> u8 {
        1
    }
    fn mul(&self, a: &u8, b: &u8) -> u8 {
        self.0.mul(*a, *b)
    }
    fn inv(&self, a: &u8) -> u8 {
        self.0.inv(*a).expect("unit")
    }
}

/// Trivial group.
pub struct TrivialLaw;

impl GroupLaw<()> for TrivialLaw {
    fn identity(&self) {}
    fn mul(&self, _: &(), _: &()) {}
    fn inv(&self, _: &()) {}
}
