//! Named verification suites over a scenario, and the deterministic JSON
//! report and dump formats used by the command-line tool.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::field::AdditiveCharacter;
use crate::ring::FiniteRing;
use crate::group::{FiniteGroup, GroupLaw, DEFAULT_BUDGET};
use crate::group_ext::{hat_rho_prime, SquareClassTower, TildeGspTower};
use crate::heisenberg::{ActionTag, HeisenbergElement, TwistedAction};
use crate::linalg::{inner_product, rational, CycloMatrix};
use crate::rep::{character_values, decompose, homomorphism_witness, is_irreducible, solve_intertwiner, MatrixRep};
use crate::symplectic::{enumerate_gsp, enumerate_sp, sp_generators, sp_order, SymplecticElement};
use crate::weil_even::{
    affine_action, build_agsp, build_asp, find_section, heisenberg_generators, heisenberg_rep_even, verify_affine_group,
    verify_agsp_split, verify_lift_independence, weil_even_projective, EvenSpace, HeisenbergModel,
};
use crate::weil_odd::{gauss_sum, semidirect_weil, OddCase, OddScenario};

pub const SCHEMA: &str = "weilrep/1";

/// Seed for every sampled check, so reports are reproducible.
const SEED: u64 = 0x5eed;

/// Random pairs used when a check is not exhaustive.
const SAMPLES: usize = 500;

pub const ODD_QS: [u32; 5] = [3, 5, 7, 9, 13];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Odd,
    Even,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Odd => "odd",
            Case::Even => "even",
        })
    }
}

/// Scenario parameters: `q` for the odd case, `d` (with `q = 2^d`) for the
/// even case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub case: Case,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u32>,
    pub m: usize,
    pub exhaustive: bool,
    pub budget: usize,
}

impl Params {
    pub fn odd(q: u32, m: usize) -> Self {
        Params {
            case: Case::Odd,
            q: Some(q),
            d: None,
            m,
            exhaustive: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn even(d: u32, m: usize) -> Self {
        Params {
            case: Case::Even,
            q: None,
            d: Some(d),
            m,
            exhaustive: false,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Rejects parameters outside the supported ranges.
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.m) {
            return Err(Error::InvalidArgument(format!("m must be 1 or 2, got {}", self.m)));
        }
        match self.case {
            Case::Odd => match (self.q, self.d) {
                (Some(q), None) if ODD_QS.contains(&q) => Ok(()),
                (Some(q), None) => Err(Error::InvalidArgument(format!("odd case needs q ∈ {ODD_QS:?}, got {q}"))),
                (_, Some(_)) => Err(Error::InvalidArgument("--d applies to the even case".into())),
                (None, None) => Err(Error::InvalidArgument("odd case needs --q".into())),
            },
            Case::Even => match (self.q, self.d) {
                (None, Some(1 | 2)) => Ok(()),
                (None, Some(d)) => Err(Error::InvalidArgument(format!("even case needs d ∈ {{1, 2}}, got {d}"))),
                (Some(_), _) => Err(Error::InvalidArgument("--q applies to the odd case; use --d".into())),
                (None, None) => Err(Error::InvalidArgument("even case needs --d".into())),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not run: the scenario is outside the check's scope or over budget.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub status: Status,
    /// Measured quantity on success, witness on failure, reason when skipped.
    pub detail: String,
    /// Wall time; kept out of JSON so reports are byte-for-byte reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub params: Params,
    pub suites: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        match p.case {
            Case::Odd => writeln!(f, "case odd, q = {}, m = {}", p.q.unwrap_or(0), p.m)?,
            Case::Even => writeln!(f, "case even, d = {}, m = {}", p.d.unwrap_or(0), p.m)?,
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            writeln!(
                f,
                "{tag} {}/{} ({:.2?}): {}",
                c.suite, c.name, c.elapsed, c.detail
            )?;
        }
        let fails = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), fails)
    }
}

/// Suites available for a case, with a one-line description.
pub fn suites(case: Case) -> &'static [(&'static str, &'static str)] {
    match case {
        Case::Odd => &[
            ("gauss", "γ(ψ)·conj(γ(ψ)) = q for the quadratic Gauss sum"),
            ("weil", "π_ψ is a true representation of Sp(W) compatible with the Heisenberg action"),
            ("svn", "π_ψ is irreducible on Sp(W) ⋉ H(W) with central character ψ"),
            ("twist", "π_{ψ^{t²}} and π_ψ have the same character on Sp(W)"),
            ("restriction", "ρ_ψ restricted to Sp(W) is π_ψ ⊕ π_{ψ^a} (q ≡ 3 mod 4)"),
            ("rho-prime", "ρ'_ψ is irreducible (q ≡ 3 mod 4) or has 2ⁿ inequivalent components (q ≡ 1 mod 4)"),
            ("tower", "square-root cocycle tower and the doubly extended similitude group (q ≡ 1 mod 4, m = 1)"),
            ("twist-lemma", "the induced representation over the doubly extended group contains every π_{ψ^s} (q ≡ 1 mod 4, m = 1)"),
        ],
        Case::Even => &[
            ("forms", "β and ⟨,⟩_W are lift independent, β − βᵗ = ⟨,⟩_W, ψ∘⟨,⟩_W nondegenerate"),
            ("svn", "Heisenberg representation of H_β(W): dimension, irreducibility, uniqueness"),
            ("asp", "ASp(W): order, closure, Σ_g membership, action by automorphisms, lift independence"),
            ("agsp", "AGSp(W) = ASp(W) ⋊ F^× via α(h_t) = (h_t, 0)"),
            ("split", "ASp(W) → Sp(W) admits no homomorphic section"),
            ("mu4", "the projective Weil cocycle reduces to μ₄ and not to μ₁"),
        ],
    }
}

/// Expands a comma-separated selection; `all` selects every suite.
pub fn parse_selection(case: Case, selection: &str) -> Result<Vec<String>> {
    let known: Vec<&str> = suites(case).iter().map(|(n, _)| *n).collect();
    let mut out = Vec::new();
    for name in selection.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            return Ok(known.iter().map(|s| s.to_string()).collect());
        }
        if !known.contains(&name) {
            return Err(Error::InvalidArgument(format!("unknown {case} suite {name:?}; known: {}", known.join(", "))));
        }
        if !out.iter().any(|s| s == name) {
            out.push(name.to_string());
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty suite selection".into()));
    }
    Ok(out)
}

struct Runner {
    suite: &'static str,
    checks: Vec<CheckResult>,
}

impl Runner {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<String>) {
        let start = Instant::now();
        let (status, detail) = match f() {
            Ok(detail) => (Status::Pass, detail),
            Err(Error::Budget(msg)) => (Status::Skip, format!("over budget: {msg}")),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(CheckResult {
            suite: self.suite.to_string(),
            name: name.to_string(),
            status,
            detail,
            elapsed: start.elapsed(),
        });
    }

    fn skip(&mut self, name: &str, reason: &str) {
        self.checks.push(CheckResult {
            suite: self.suite.to_string(),
            name: name.to_string(),
            status: Status::Skip,
            detail: reason.to_string(),
            elapsed: Duration::ZERO,
        });
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

fn within(budget: usize, what: &str, size: usize) -> Result<()> {
    if size > budget {
        return Err(Error::Budget(format!("{what} has {size} elements, budget {budget}")));
    }
    Ok(())
}

/// Runs the selected suites. Parameter errors are returned as `Err`;
/// failing checks are recorded in the report.
pub fn run(params: &Params, selection: &[String]) -> Result<SuiteReport> {
    params.validate()?;
    let mut checks = Vec::new();
    match params.case {
        Case::Odd => {
            let ctx = OddContext::new(params)?;
            for s in selection {
                checks.extend(ctx.run_suite(s)?);
            }
        }
        Case::Even => {
            let ctx = EvenContext::new(params)?;
            for s in selection {
                checks.extend(ctx.run_suite(s)?);
            }
        }
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(SuiteReport {
        schema: SCHEMA.to_string(),
        params: params.clone(),
        suites: selection.to_vec(),
        checks,
        passed,
    })
}

struct OddContext {
    params: Params,
    sc: OddScenario,
    sp: FiniteGroup<SymplecticElement>,
}

impl OddContext {
    fn new(params: &Params) -> Result<Self> {
        let q = params.q.expect("validated");
        let sc = OddScenario::new(q, params.m)?;
        let sp = enumerate_sp(sc.field.clone(), params.m, params.budget)?;
        Ok(OddContext {
            params: params.clone(),
            sc,
            sp,
        })
    }

    fn run_suite(&self, suite: &str) -> Result<Vec<CheckResult>> {
        let suite: &'static str = suites(Case::Odd)
            .iter()
            .find(|(n, _)| *n == suite)
            .map(|(n, _)| *n)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {suite}")))?;
        let mut r = Runner { suite, checks: vec![] };
        let sc = &self.sc;
        let budget = self.params.budget;
        match suite {
            "gauss" => r.check("gauss-norm", || {
                let g = gauss_sum(&AdditiveCharacter::new(sc.field.clone(), 1))?;
                let n = &g * &g.conjugate();
                if n != CyclotomicNumber::from_int(sc.q as i64) {
                    return Err(fail(format!("γ·γ̄ = {n}")));
                }
                Ok(format!("γ·γ̄ = {}", sc.q))
            }),
            "weil" => {
                r.check("homomorphism", || self.homomorphism());
                r.check("heisenberg-compatibility", || self.heisenberg_compatibility());
                r.check("unitary-generators", || {
                    for g in sp_generators(&*sc.field, sc.m) {
                        let m = sc.weil.op_sp(&g)?;
                        if m.mul(&m.conj_transpose()) != CycloMatrix::identity(m.n()) {
                            return Err(fail(format!("π_ψ({g:?}) is not unitary")));
                        }
                    }
                    Ok("all generator images unitary".into())
                });
            }
            "svn" => {
                r.check("central-character", || {
                    let dim = sc.weil.dim();
                    for t in sc.field.elements() {
                        let m = sc.weil.op_heisenberg(&HeisenbergElement::central(t)).to_dense();
                        if m != CycloMatrix::scalar(dim, sc.weil.psi().eval(t)) {
                            return Err(fail(format!("π(0, {t}) ≠ ψ({t})·1")));
                        }
                    }
                    Ok("π(0, t) = ψ(t)·1".into())
                });
                r.check("irreducible", || {
                    within(budget, "Sp(W) ⋉ H(W)", self.sp.order() * sc.heisenberg.center_size().pow(2 * sc.m as u32 + 1))?;
                    let els = sc.sp_h_elements(self.sp.elements());
                    let chi = character_values(&semidirect_weil(sc.weil.clone()), &els)?;
                    let (n, ok) = is_irreducible(&chi)?;
                    if !ok {
                        return Err(fail(format!("⟨χ,χ⟩ = {n}")));
                    }
                    Ok(format!("⟨χ,χ⟩ = 1 over {} elements", els.len()))
                });
            }
            "twist" => r.check("square-twist", || {
                let f = &*sc.field;
                let chi = character_values(&*sc.weil, self.sp.elements())?;
                let squares: BTreeSet<u8> = f.nonzero().map(|t| f.mul(t, t)).collect();
                for &a in &squares {
                    let chi_a = character_values(&*sc.weil_twisted(a)?, self.sp.elements())?;
                    if chi_a != chi {
                        return Err(fail(format!("χ(π_{{ψ^{a}}}) ≠ χ(π_ψ) for the square {a}")));
                    }
                }
                let seen = squares.len();
                let chi_n = character_values(&*sc.weil_twisted(sc.nonsquare())?, self.sp.elements())?;
                if chi_n == chi {
                    return Err(fail("a nonsquare twist has the same character"));
                }
                Ok(format!("{seen} square twists agree, the nonsquare twist differs"))
            }),
            "restriction" => {
                if sc.case != OddCase::Q3 {
                    r.skip("rho-restriction", "defined for q ≡ 3 (mod 4)");
                } else {
                    r.check("rho-restriction", || {
                        let rho = sc.rho_gsp()?;
                        let chi = character_values(&rho, self.sp.elements())?;
                        let c1 = character_values(&*sc.weil, self.sp.elements())?;
                        let c2 = character_values(&*sc.weil_twisted(sc.nonsquare())?, self.sp.elements())?;
                        let d = decompose(&chi, &[c1, c2])?;
                        if d.multiplicities != [rational(1), rational(1)] || !d.residual.is_zero() {
                            return Err(fail(format!("multiplicities {:?}, residual {}", d.multiplicities, d.residual)));
                        }
                        Ok("ρ_ψ|Sp = π_ψ ⊕ π_{ψ^a}, residual 0".into())
                    });
                }
            }
            "rho-prime" => match sc.case {
                OddCase::Q3 => r.check("irreducible", || self.rho_prime_irreducible()),
                OddCase::Q1 => r.check("components", || self.rho_prime_components()),
            },
            "tower" => {
                if sc.case != OddCase::Q1 || sc.m != 1 {
                    r.skip("field-cocycles", "defined for q ≡ 1 (mod 4), m = 1");
                    r.skip("similitude-tower", "defined for q ≡ 1 (mod 4), m = 1");
                } else {
                    r.check("field-cocycles", || {
                        let t = Arc::new(SquareClassTower::new(sc.field.clone())?);
                        let named = |name: &str, res: std::result::Result<(), String>| res.map_err(|e| fail(format!("{name}: {e}")));
                        named("c_√", t.cocycle_sqrt().validate().map_err(|e| e.to_string()))?;
                        named("c′", t.cocycle_prime().validate().map_err(|e| e.to_string()))?;
                        named("c″", t.cocycle_double_prime()?.validate().map_err(|e| e.to_string()))?;
                        named("c‴", t.cocycle_triple_prime().validate().map_err(|e| e.to_string()))?;
                        named("ĉ", t.cocycle_hat().validate().map_err(|e| e.to_string()))?;
                        t.verify_sqrt_iso()?;
                        t.verify_diagram()?;
                        Ok("c_√, c′, c″, c‴, ĉ are 2-cocycles; F̃^{×2} ≅ F^×".into())
                    });
                    r.check("similitude-tower", || {
                        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                        let tw = TildeGspTower::new(sc.q, 1, budget)?;
                        let n = tw.tilde.order();
                        let exhaustive = n * n <= budget;
                        if exhaustive {
                            tw.verify_lambda_tilde()?;
                        } else {
                            tw.verify_lambda_tilde_sampled(10_000, &mut rng)?;
                        }
                        tw.verify_kernel()?;
                        tw.verify_nu()?;
                        let samples = 10_000;
                        tw.verify_tau(samples, &mut rng)?;
                        tw.verify_phi(2_000, &mut rng)?;
                        tw.cocycle_c().validate_sampled(samples, &mut rng).map_err(|e| fail(format!("c: {e}")))?;
                        let pgsp = tw.pgsp()?;
                        tw.verify_pgsp_sequence(&pgsp)?;
                        Ok(format!(
                            "λ̃ {}, ν central, τ̃ and c on {samples} pairs, |PGSp^±| = {}",
                            if exhaustive { "exhaustive" } else { "sampled" },
                            pgsp.order()
                        ))
                    });
                }
            }
            "twist-lemma" => {
                if sc.case != OddCase::Q1 || sc.m != 1 {
                    r.skip("contains-every-twist", "defined for q ≡ 1 (mod 4), m = 1");
                } else {
                    r.check("contains-every-twist", || self.twist_lemma());
                }
            }
            _ => unreachable!(),
        }
        Ok(r.checks)
    }

    fn homomorphism(&self) -> Result<String> {
        let sc = &self.sc;
        let n = self.sp.order();
        let exhaustive = self.params.exhaustive && n * n <= self.params.budget;
        let pairs: Vec<(SymplecticElement, SymplecticElement)> = if exhaustive {
            let els = self.sp.elements();
            els.iter().flat_map(|a| els.iter().map(move |b| (*a, *b))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            (0..SAMPLES).map(|_| (*self.sp.random(&mut rng), *self.sp.random(&mut rng))).collect()
        };
        if let Some((a, b)) = homomorphism_witness(&*sc.weil, &**self.sp.law(), &pairs)? {
            return Err(fail(format!("π(g₁)π(g₂) ≠ π(g₁g₂) at g₁ = {a:?}, g₂ = {b:?}")));
        }
        Ok(format!(
            "{} {} pairs",
            pairs.len(),
            if exhaustive { "exhaustive" } else { "sampled" }
        ))
    }

    fn heisenberg_compatibility(&self) -> Result<String> {
        let sc = &self.sc;
        let f = &*sc.field;
        let act = TwistedAction::new(ActionTag::Alphaac, sc.heisenberg.clone(), sc.structure.clone())?;
        let mut gs = sp_generators(f, sc.m);
        for a in f.nonzero() {
            let g = SymplecticElement::identity(f, sc.m).scale(f, a);
            if sc.in_tau_domain(&g) {
                gs.push(g);
            }
        }
        let hs: Vec<HeisenbergElement> = if self.params.exhaustive {
            sc.heisenberg.elements()
        } else {
            let mut hs: Vec<_> = (0..2 * sc.m)
                .map(|i| {
                    let mut w = vec![0u8; 2 * sc.m];
                    w[i] = 1;
                    HeisenbergElement::new(&w, 0)
                })
                .collect();
            hs.push(HeisenbergElement::central(1));
            hs
        };
        for g in &gs {
            let pg = sc.weil.op_twisted(g)?;
            let pgi = pg.inverse()?;
            for h in &hs {
                let lhs = sc.weil.op_heisenberg(h).left_mul(&pgi).mul(&pg);
                let rhs = sc.weil.op_heisenberg(&act.act(h, g)?).to_dense();
                if lhs != rhs {
                    return Err(fail(format!("π(g)⁻¹π(h)π(g) ≠ π(h·g) at g = {g:?}, h = {h:?}")));
                }
            }
        }
        Ok(format!("{} group elements × {} Heisenberg elements", gs.len(), hs.len()))
    }

    fn rho_prime_irreducible(&self) -> Result<String> {
        let sc = &self.sc;
        let (law, rho) = sc.rho_prime()?;
        let gsp = enumerate_gsp(sc.field.clone(), sc.m, self.params.budget)?;
        let pgsp = sc.pgsp_law()?;
        let reps = FiniteGroup::from_elements(pgsp.clone(), gsp.elements().iter().map(|g| pgsp.canonical(g)).collect());
        let size = reps.order() * sc.heisenberg.elements().len();
        within(self.params.budget, "PGSp^±(W) ⋉ H(W)", size)?;
        let els = sc.sp_h_elements(reps.elements());
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let pairs: Vec<_> = (0..SAMPLES / 5)
            .map(|_| {
                use rand::Rng;
                (els[rng.gen_range(0..els.len())].clone(), els[rng.gen_range(0..els.len())].clone())
            })
            .collect();
        if let Some((a, b)) = homomorphism_witness(&rho, &*law, &pairs)? {
            return Err(fail(format!("ρ'_ψ is not multiplicative at {a:?}, {b:?}")));
        }
        let chi = character_values(&rho, &els)?;
        let (n, ok) = is_irreducible(&chi)?;
        if !ok {
            return Err(fail(format!("⟨χ,χ⟩ = {n}")));
        }
        Ok(format!("dim {}, ⟨χ,χ⟩ = 1 over {} elements", rho.dim(), els.len()))
    }

    fn rho_prime_components(&self) -> Result<String> {
        let sc = &self.sc;
        let (_, rho) = sc.rho_prime()?;
        let size = self.sp.order() * sc.heisenberg.elements().len();
        within(self.params.budget, "Sp(W) ⋉ H(W)", size)?;
        let els = sc.sp_h_elements(self.sp.elements());
        let chi = character_values(&rho, &els)?;
        let twists = sc.structure.f_2n();
        let cands: Vec<Vec<CyclotomicNumber>> = twists
            .iter()
            .map(|&t| character_values(&semidirect_weil(sc.weil_twisted(t)?), &els))
            .collect::<Result<_>>()?;
        for (i, a) in cands.iter().enumerate() {
            for (j, b) in cands.iter().enumerate() {
                let ip = inner_product(a, b)?;
                if ip != rational((i == j) as i64) {
                    return Err(fail(format!("⟨π_{{ψ^{}}}, π_{{ψ^{}}}⟩ = {ip}", twists[i], twists[j])));
                }
            }
        }
        let d = decompose(&chi, &cands)?;
        if d.multiplicities.iter().any(|m| !m.is_one()) || !d.residual.is_zero() {
            return Err(fail(format!("multiplicities {:?}, residual {}", d.multiplicities, d.residual)));
        }
        Ok(format!(
            "{} pairwise inequivalent components π_{{ψ^t}}, t ∈ {twists:?}, each once; ⟨χ,χ⟩ = {}",
            twists.len(),
            d.norm
        ))
    }

    fn twist_lemma(&self) -> Result<String> {
        let sc = &self.sc;
        within(self.params.budget, "Sp(W) ⋉ H(W)", self.sp.order() * sc.heisenberg.elements().len())?;
        let tw = TildeGspTower::new(sc.q, 1, self.params.budget)?;
        let (_, rho) = hat_rho_prime(&tw, sc.weil.clone())?;
        let sp_h = sc.sp_h_elements(tw.sp.elements());
        let embedded: Vec<_> = sp_h.iter().map(|x| crate::group::Pair::new(tw.embed_sp_hat(&x.g), x.h)).collect();
        let chi = character_values(&rho, &embedded)?;
        let mut mults = Vec::new();
        for s in sc.field.nonzero() {
            let chi_s = character_values(&semidirect_weil(sc.weil_twisted(s)?), &sp_h)?;
            let ip = inner_product(&chi, &chi_s)?;
            if ip < rational(1) {
                return Err(fail(format!("⟨χ, π_{{ψ^{s}}}⟩ = {ip}")));
            }
            mults.push(ip.to_string());
        }
        Ok(format!("dim {}, multiplicities of π_{{ψ^s}}: [{}]", rho.dim(), mults.join(", ")))
    }
}

struct EvenContext {
    params: Params,
    space: Arc<EvenSpace>,
    sp: FiniteGroup<SymplecticElement>,
}

impl EvenContext {
    fn new(params: &Params) -> Result<Self> {
        let space = EvenSpace::new(params.d.expect("validated"), params.m)?;
        let sp = enumerate_sp(space.field().clone(), params.m, params.budget)?;
        Ok(EvenContext {
            params: params.clone(),
            space,
            sp,
        })
    }

    fn sigma1_size(&self) -> usize {
        let q = self.space.field().size();
        q.pow((2 * self.space.m() as u32) * self.space.d())
    }

    fn asp(&self) -> Result<FiniteGroup<crate::weil_even::AffineElement>> {
        within(self.params.budget, "ASp(W)", self.sp.order() * self.sigma1_size())?;
        build_asp(&self.space, self.params.budget)
    }

    fn run_suite(&self, suite: &str) -> Result<Vec<CheckResult>> {
        let suite: &'static str = suites(Case::Even)
            .iter()
            .find(|(n, _)| *n == suite)
            .map(|(n, _)| *n)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {suite}")))?;
        let mut r = Runner { suite, checks: vec![] };
        let s = &self.space;
        let budget = self.params.budget;
        let exhaustive = self.params.exhaustive;
        match suite {
            "forms" => r.check("forms", || {
                let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                let limit = if exhaustive { budget } else { 1 << 16 };
                s.verify(limit, 5 * SAMPLES, &mut rng)?;
                Ok(format!("|W| = {}", s.size()))
            }),
            "svn" => {
                r.check("dimension", || {
                    let rho = heisenberg_rep_even(s, HeisenbergModel::XStar)?;
                    let expect = 1usize << (s.d() as usize * s.m());
                    if rho.dim() != expect {
                        return Err(fail(format!("dimension {} ≠ 2^(dm) = {expect}", rho.dim())));
                    }
                    Ok(format!("dim = 2^(dm) = {expect}"))
                });
                r.check("irreducible", || {
                    let rho = heisenberg_rep_even(s, HeisenbergModel::XStar)?;
                    let hs = s.heisenberg().elements();
                    within(budget, "H_β(W)", hs.len())?;
                    let chi = character_values(&rho, &hs)?;
                    let (n, ok) = is_irreducible(&chi)?;
                    if !ok {
                        return Err(fail(format!("⟨χ,χ⟩ = {n}")));
                    }
                    for t in 0..s.ring().size() as u8 {
                        let m = rho.matrix(&HeisenbergElement::central(t))?;
                        if *m != CycloMatrix::scalar(rho.dim(), s.psi().eval(t)) {
                            return Err(fail(format!("ρ(0, {t}) ≠ ψ({t})·1")));
                        }
                    }
                    Ok(format!("⟨χ,χ⟩ = 1 over {} elements, central character ψ", hs.len()))
                });
                r.check("model-equivalence", || {
                    let a = heisenberg_rep_even(s, HeisenbergModel::XStar)?;
                    let b = heisenberg_rep_even(s, HeisenbergModel::X)?;
                    let gens = heisenberg_generators(s);
                    let pairs = gens
                        .iter()
                        .map(|h| Ok(((*b.matrix(h)?).clone(), (*a.matrix(h)?).clone())))
                        .collect::<Result<Vec<_>>>()?;
                    let m = solve_intertwiner(&pairs)?;
                    let hs = s.heisenberg().elements();
                    for h in &hs {
                        if m.mul(&*b.matrix(h)?) != a.matrix(h)?.mul(&m) {
                            return Err(fail(format!("intertwiner fails at {h:?}")));
                        }
                    }
                    Ok("models induced from X*×R and X×R are equivalent".into())
                });
            }
            "asp" => {
                r.check("order", || {
                    let asp = self.asp()?;
                    let expect = sp_order(s.field().size() as u64, s.m() as u32) as usize * self.sigma1_size();
                    if asp.order() != expect || s.additive_maps().len() != self.sigma1_size() {
                        return Err(fail(format!("|ASp| = {}, expected {expect}", asp.order())));
                    }
                    Ok(format!("|ASp| = |Sp|·|Σ₁| = {}·{} = {expect}", self.sp.order(), self.sigma1_size()))
                });
                r.check("closure", || {
                    let asp = self.asp()?;
                    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                    let limit = if exhaustive { budget } else { 1 << 12 };
                    verify_affine_group(s, &asp, limit, 10 * SAMPLES, &mut rng)?;
                    let n = asp.order();
                    Ok(format!(
                        "Σ_g membership for all {n} elements; products {}",
                        if n * n <= limit { "exhaustive" } else { "sampled" }
                    ))
                });
                r.check("action-automorphism", || {
                    let asp = self.asp()?;
                    let act = affine_action(s.clone());
                    let law = s.heisenberg().clone();
                    let hs = law.elements();
                    let n = asp.order();
                    let full = n * hs.len() * hs.len() <= if exhaustive { budget * 10 } else { 1 << 16 };
                    let probe: Vec<HeisenbergElement> = if full { hs.clone() } else { heisenberg_generators(s) };
                    let gens = crate::weil_even::asp_generators(s)?;
                    for x in asp.elements() {
                        for a in &probe {
                            for b in &probe {
                                if act(&law.mul(a, b), x) != law.mul(&act(a, x), &act(b, x)) {
                                    return Err(fail(format!("action of {x:?} is not additive at {a:?}, {b:?}")));
                                }
                            }
                            for y in &gens {
                                if act(&act(a, x), y) != act(a, &asp.mul(x, y)) {
                                    return Err(fail(format!("(h·x)·y ≠ h·(xy) at {x:?}, {y:?}")));
                                }
                            }
                        }
                    }
                    Ok(format!("{} Heisenberg elements probed", probe.len()))
                });
                r.check("lift-independence", || {
                    verify_lift_independence(s, &self.sp)?;
                    Ok("alternative lifts change q by additive maps into 2R".into())
                });
            }
            "agsp" => r.check("split-sequence", || {
                let asp = self.asp()?;
                within(budget, "AGSp(W)", asp.order() * (s.field().size() - 1))?;
                let agsp = build_agsp(s, budget)?;
                let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                verify_agsp_split(s, &asp, &agsp, 4 * SAMPLES, &mut rng)?;
                Ok(format!("|AGSp/ASp| = {}, α(h_t) = (h_t, 0) splits", agsp.order() / asp.order()))
            }),
            "split" => r.check("no-section", || {
                let asp = self.asp()?;
                let gens = sp_generators(&**s.field(), s.m());
                let (found, tried) = find_section(&self.sp, &gens, &asp, |x| x.g, budget)?;
                match found {
                    None => Ok(format!("none of {tried} generator lifts extends to a section")),
                    Some(sec) => {
                        let images: Vec<String> = gens.iter().map(|g| format!("{g:?} ↦ q = {:?}", sec[g].q)).collect();
                        Err(fail(format!("section exists: {}", images.join("; "))))
                    }
                }
            }),
            "mu4" => {
                let built = (|| {
                    let asp = self.asp()?;
                    weil_even_projective(s, asp)
                })();
                match built {
                    Err(e) => {
                        let msg = e.to_string();
                        let budget_hit = matches!(e, Error::Budget(_));
                        for name in ["compatibility", "mu4", "not-mu1"] {
                            if budget_hit {
                                r.skip(name, &msg);
                            } else {
                                r.check(name, || Err(fail(msg.clone())));
                            }
                        }
                    }
                    Ok(w) => {
                        r.check("compatibility", || {
                            let full = exhaustive || w.group.order() <= 1000;
                            w.verify_compatibility(full)?;
                            Ok(format!(
                                "M(x)⁻¹ρ(h)M(x) = ρ(h·x) for all x, {} h",
                                if full { "all" } else { "generating" }
                            ))
                        });
                        let verdict = w.verify_mu4();
                        r.check("mu4", || {
                            let v = verdict.as_ref().map_err(|e| fail(e.to_string()))?;
                            if !v.reduces_to_mu4 {
                                return Err(fail(format!("no rescaling into μ₄ (values in μ_{}, searched μ_{})", v.n, v.ambient)));
                            }
                            Ok(format!(
                                "values in μ_{}, reduces to μ₄; μ₂: {}",
                                v.n,
                                if v.reduces_to_mu2 { "yes" } else { "no" }
                            ))
                        });
                        r.check("not-mu1", || {
                            let v = verdict.as_ref().map_err(|e| fail(e.to_string()))?;
                            if v.reduces_to_mu1 {
                                return Err(fail("the cocycle is a coboundary"));
                            }
                            Ok(format!("no rescaling in μ_{} trivializes the cocycle", v.ambient))
                        });
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(r.checks)
    }
}

/// Objects that can be dumped.
pub fn dump_objects(case: Case) -> &'static [&'static str] {
    match case {
        Case::Odd => &["weil-generators", "weil-character"],
        Case::Even => &["heisenberg-generators", "even-cocycle"],
    }
}

/// A group element as matrix rows and similitude factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixElement {
    pub rows: Vec<Vec<u8>>,
    pub lambda: u8,
}

impl From<&SymplecticElement> for MatrixElement {
    fn from(g: &SymplecticElement) -> Self {
        MatrixElement {
            rows: g.matrix.rows(),
            lambda: g.lambda,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "object", content = "data", rename_all = "kebab-case")]
pub enum DumpData {
    /// `π_ψ(s)` for the generators `s` of `Sp(W)`.
    WeilGenerators {
        generators: Vec<MatrixElement>,
        matrices: Vec<CycloMatrix>,
    },
    /// `χ_{π_ψ}` on `Sp(W)`.
    WeilCharacter {
        elements: Vec<MatrixElement>,
        values: Vec<CyclotomicNumber>,
    },
    /// `ρ(h)` for the generators `(b, 0)` of `H_β(W)`.
    HeisenbergGenerators {
        generators: Vec<Vec<u8>>,
        matrices: Vec<CycloMatrix>,
    },
    /// The full cocycle table of the projective Weil representation of
    /// `ASp(W)`; element `i` is `(g, q)` with `q` listed on `W` in
    /// lexicographic order.
    EvenCocycle {
        elements: Vec<(MatrixElement, Vec<u8>)>,
        table: Vec<Vec<CyclotomicNumber>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dump {
    pub schema: String,
    pub params: Params,
    #[serde(flatten)]
    pub data: DumpData,
}

impl Dump {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Dump = serde_json::from_str(s)?;
        if d.schema != SCHEMA {
            return Err(Error::InvalidArgument(format!("unsupported schema {:?}", d.schema)));
        }
        Ok(d)
    }
}

/// Builds a dump object.
pub fn dump(params: &Params, object: &str) -> Result<Dump> {
    params.validate()?;
    let known = dump_objects(params.case);
    if !known.contains(&object) {
        return Err(Error::InvalidArgument(format!(
            "unknown {} object {object:?}; known: {}",
            params.case,
            known.join(", ")
        )));
    }
    let data = match object {
        "weil-generators" => {
            let sc = OddScenario::new(params.q.expect("validated"), params.m)?;
            let gens = sp_generators(&*sc.field, sc.m);
            let matrices = gens.iter().map(|g| Ok((*sc.weil.op_sp(g)?).clone())).collect::<Result<_>>()?;
            DumpData::WeilGenerators {
                generators: gens.iter().map(MatrixElement::from).collect(),
                matrices,
            }
        }
        "weil-character" => {
            let ctx = OddContext::new(params)?;
            let values = character_values(&*ctx.sc.weil, ctx.sp.elements())?;
            DumpData::WeilCharacter {
                elements: ctx.sp.elements().iter().map(MatrixElement::from).collect(),
                values,
            }
        }
        "heisenberg-generators" => {
            let space = EvenSpace::new(params.d.expect("validated"), params.m)?;
            let rho = heisenberg_rep_even(&space, HeisenbergModel::XStar)?;
            let gens = heisenberg_generators(&space);
            let matrices = gens.iter().map(|h| Ok((*rho.matrix(h)?).clone())).collect::<Result<_>>()?;
            DumpData::HeisenbergGenerators {
                generators: gens.iter().map(|h| h.v(space.m()).to_vec()).collect(),
                matrices,
            }
        }
        "even-cocycle" => {
            let ctx = EvenContext::new(params)?;
            let asp = ctx.asp()?;
            within(params.budget, "the cocycle table", asp.order() * asp.order())?;
            let w = weil_even_projective(&ctx.space, asp)?;
            let table = w.cocycle_table()?;
            DumpData::EvenCocycle {
                elements: w.group.elements().iter().map(|x| (MatrixElement::from(&x.g), x.q.clone())).collect(),
                table,
            }
        }
        _ => unreachable!(),
    };
    Ok(Dump {
        schema: SCHEMA.to_string(),
        params: params.clone(),
        data,
    })
}

/// Suite names per case, for `list-suites`.
pub fn suite_listing() -> BTreeMap<String, Vec<(String, String)>> {
    [Case::Odd, Case::Even]
        .into_iter()
        .map(|c| {
            (
                c.to_string(),
                suites(c).iter().map(|(n, d)| (n.to_string(), d.to_string())).collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_validation() {
        assert!(Params::odd(3, 1).validate().is_ok());
        assert!(Params::odd(4, 1).validate().is_err());
        assert!(Params::odd(11, 1).validate().is_err());
        assert!(Params::odd(3, 3).validate().is_err());
        assert!(Params::even(2, 1).validate().is_ok());
        assert!(Params::even(3, 1).validate().is_err());
        let mut p = Params::even(1, 1);
        p.q = Some(3);
        assert!(p.validate().is_err());
    }

    #[test]
    fn selection() {
        assert_eq!(parse_selection(Case::Even, "svn,asp,mu4").unwrap(), ["svn", "asp", "mu4"]);
        assert_eq!(parse_selection(Case::Odd, "all").unwrap().len(), suites(Case::Odd).len());
        assert_eq!(parse_selection(Case::Odd, "svn,svn").unwrap(), ["svn"]);
        assert!(parse_selection(Case::Odd, "mu4").is_err());
        assert!(parse_selection(Case::Odd, "").is_err());
    }

    #[test]
    fn small_odd_report() {
        let sel = parse_selection(Case::Odd, "gauss,weil,svn").unwrap();
        let report = run(&Params::odd(3, 1), &sel).unwrap();
        assert!(report.passed, "{report}");
        assert_eq!(report.checks.len(), 6);
        let json = report.to_json().unwrap();
        assert!(json.contains("\"schema\": \"weilrep/1\""));
        assert!(!json.contains("elapsed"));
        let back: SuiteReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn dump_round_trip() {
        let d = dump(&Params::odd(3, 1), "weil-generators").unwrap();
        match &d.data {
            DumpData::WeilGenerators { matrices, .. } => {
                assert_eq!(matrices.len(), 3);
                assert!(matrices.iter().all(|m| m.n() == 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        let json = d.to_json().unwrap();
        let back = Dump::from_json(&json).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json().unwrap(), json);
        assert!(dump(&Params::odd(3, 1), "even-cocycle").is_err());
    }

    #[test]
    fn even_cocycle_dump() {
        let d = dump(&Params::even(1, 1), "even-cocycle").unwrap();
        let DumpData::EvenCocycle { elements, table } = &d.data else { panic!() };
        assert_eq!(elements.len(), 24);
        assert_eq!(table.len(), 24);
        assert!(table.iter().all(|row| row.len() == 24));
    }
}
