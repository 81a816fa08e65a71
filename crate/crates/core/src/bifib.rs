//! Squares of fibrations, their 2-cells, and the verifiers for the codomain
//! 2-functor `∂₁` being a 2-opfibration.
//!
//! A square from `p : A ↠ B` to `q : C ↠ D` is a functor `f : A → C`, a
//! fibration `g : B ↠ D` and a cell `α : g∘p ⇒ q∘f`. A 2-cell `(φ, ψ)` from
//! `(f, g, α)` to `(h, k, β)` has `φ : f ⇒ h`, `ψ : k ⇒ g` and
//! `β_x = q(φ_x) ∘ α_x ∘ ψ_{p x}`. The 2-cells of `CATFib` point against
//! their underlying transformations: `ψ : k ⇒ g` is a 2-cell `g → k`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{compose_fibrations, DisplayedCat, FibredCat};
use crate::fincat::functor::same_cat;
use crate::fincat::{enumerate_functors, enumerate_nat_trans, Arr, FinCat, FinFunctor, NatTrans, Obj};

#[derive(Clone, Debug)]
pub struct FibSquare {
    pub p: FibredCat,
    pub q: FibredCat,
    pub f: FinFunctor,
    pub g: FibredCat,
    pub cell: NatTrans,
}

type SquareKey = (Vec<Obj>, Vec<Arr>, Vec<Obj>, Vec<Arr>, Vec<Arr>);

impl FibSquare {
    pub fn new(p: FibredCat, q: FibredCat, f: FinFunctor, g: FibredCat, cell: NatTrans) -> Result<Self> {
        let mismatch = |what: &str| Err(Error::Mismatch(format!("square: {what}")));
        if !same_cat(f.dom(), p.total()) || !same_cat(f.cod(), q.total()) {
            return mismatch("the top functor does not connect the totals");
        }
        if !same_cat(g.total(), p.base()) || !same_cat(g.base(), q.base()) {
            return mismatch("the bottom fibration does not connect the bases");
        }
        if *cell.src() != g.display().after(p.display()) || *cell.tgt() != q.display().after(&f) {
            return mismatch("the cell is not of type g∘p ⇒ q∘f");
        }
        Ok(FibSquare { p, q, f, g, cell })
    }

    /// `(1_A, 1_B, 1)` on `p`.
    pub fn identity(p: &FibredCat) -> Self {
        let g = FibredCat::identity(p.base());
        let cell = NatTrans::identity(p.display());
        FibSquare { p: p.clone(), q: p.clone(), f: FinFunctor::identity(p.total()), g, cell }
    }

    pub fn key(&self) -> SquareKey {
        let (fo, fa) = self.f.key();
        let (go, ga) = self.g.display().key();
        (fo, fa, go, ga, self.cell.components().to_vec())
    }

    /// The codomain 2-functor on 1-cells.
    pub fn codomain(&self) -> &FibredCat {
        &self.g
    }
}

#[derive(Clone, Debug)]
pub struct FibSquare2Cell {
    pub src: FibSquare,
    pub tgt: FibSquare,
    pub phi: NatTrans,
    pub psi: NatTrans,
}

impl FibSquare2Cell {
    pub fn new(src: FibSquare, tgt: FibSquare, phi: NatTrans, psi: NatTrans) -> Result<Self> {
        if *phi.src() != src.f || *phi.tgt() != tgt.f || psi.src() != tgt.g.display() || psi.tgt() != src.g.display() {
            return Err(Error::Mismatch("2-cell components have the wrong boundary".into()));
        }
        if !pasting_holds(&src, &tgt, &phi, &psi) {
            return Err(Error::Mismatch("the pasting equation fails".into()));
        }
        Ok(FibSquare2Cell { src, tgt, phi, psi })
    }

    pub fn identity(sq: &FibSquare) -> Self {
        FibSquare2Cell {
            src: sq.clone(),
            tgt: sq.clone(),
            phi: NatTrans::identity(&sq.f),
            psi: NatTrans::identity(sq.g.display()),
        }
    }
}

/// `β_x = q(φ_x) ∘ α_x ∘ ψ_{p x}` at every `x`.
fn pasting_holds(alpha: &FibSquare, beta: &FibSquare, phi: &NatTrans, psi: &NatTrans) -> bool {
    let (a, d) = (alpha.p.total(), alpha.q.base());
    a.objects().all(|x| {
        let lhs = d.compose_path(&[
            psi.component(alpha.p.over(x)),
            alpha.cell.component(x),
            alpha.q.display().arr(phi.component(x)),
        ]);
        lhs == beta.cell.component(x)
    })
}

/// `α * β : p → r` for `α : p → q` and `β : q → r`, with cell
/// `(α * β)_x = β_{f x} ∘ k(α_x)`.
pub fn compose_squares(alpha: &FibSquare, beta: &FibSquare) -> Result<FibSquare> {
    if !same_cat(alpha.q.total(), beta.p.total()) || alpha.q.display() != beta.p.display() {
        return Err(Error::Mismatch("squares are not composable".into()));
    }
    let f = beta.f.after(&alpha.f);
    let g = compose_fibrations(&alpha.g, &beta.g)?;
    let t = beta.q.base();
    let comps = alpha
        .p
        .total()
        .objects()
        .map(|x| t.compose(beta.cell.component(alpha.f.obj(x)), beta.g.display().arr(alpha.cell.component(x))))
        .collect();
    let cell = NatTrans::new(g.display().after(alpha.p.display()), beta.q.display().after(&f), comps)?;
    FibSquare::new(alpha.p.clone(), beta.q.clone(), f, g, cell)
}

/// The square `(1_A, f, 1) : p → f∘p`.
pub fn opcartesian_1cell(p: &FibredCat, f: &FibredCat) -> Result<FibSquare> {
    let q = compose_fibrations(p, f)?;
    let cell = NatTrans::identity(q.display());
    FibSquare::new(p.clone(), q, FinFunctor::identity(p.total()), f.clone(), cell)
}

/// All fibrations `b ↠ d`, each with its least cleaving.
pub fn enumerate_fibrations(b: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<Vec<FibredCat>> {
    let mut out = Vec::new();
    for g in enumerate_functors(b, d)? {
        let displayed = DisplayedCat::new(g);
        if displayed.is_fibration() {
            out.push(FibredCat::find(displayed)?);
        }
    }
    Ok(out)
}

/// `FIBFib(p, q)` as explicit lists of 1-cells and 2-cells.
#[derive(Clone, Debug)]
pub struct SquareHom {
    pub squares: Vec<FibSquare>,
    pub cells: Vec<(usize, usize, FibSquare2Cell)>,
}

pub fn square_hom(p: &FibredCat, q: &FibredCat) -> Result<SquareHom> {
    let tops = enumerate_functors(p.total(), q.total())?;
    let bottoms = enumerate_fibrations(p.base(), q.base())?;
    let mut squares = Vec::new();
    for g in &bottoms {
        for f in &tops {
            let src = g.display().after(p.display());
            let tgt = q.display().after(f);
            for cell in enumerate_nat_trans(&src, &tgt)? {
                squares.push(FibSquare { p: p.clone(), q: q.clone(), f: f.clone(), g: g.clone(), cell });
            }
        }
    }
    let mut cells = Vec::new();
    for (i, s) in squares.iter().enumerate() {
        for (j, t) in squares.iter().enumerate() {
            for phi in enumerate_nat_trans(&s.f, &t.f)? {
                for psi in enumerate_nat_trans(t.g.display(), s.g.display())? {
                    if pasting_holds(s, t, &phi, &psi) {
                        cells.push((i, j, FibSquare2Cell { src: s.clone(), tgt: t.clone(), phi: phi.clone(), psi }));
                    }
                }
            }
        }
    }
    Ok(SquareHom { squares, cells })
}

/// `CATFib(b, d)`: fibrations and all transformations between them, listed
/// as `(k, g, ψ : k ⇒ g)`.
#[derive(Clone, Debug)]
pub struct FibrationHom {
    pub fibrations: Vec<FibredCat>,
    pub cells: Vec<(usize, usize, NatTrans)>,
}

pub fn fibration_hom(b: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<FibrationHom> {
    let fibrations = enumerate_fibrations(b, d)?;
    let mut cells = Vec::new();
    for (i, k) in fibrations.iter().enumerate() {
        for (j, g) in fibrations.iter().enumerate() {
            for psi in enumerate_nat_trans(k.display(), g.display())? {
                cells.push((i, j, psi));
            }
        }
    }
    Ok(FibrationHom { fibrations, cells })
}

/// Counts and verdict of the strict-pullback check for an opcartesian 1-cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpcartesianReport {
    pub lifted_objects: usize,
    pub lifted_arrows: usize,
    pub pullback_objects: usize,
    pub pullback_arrows: usize,
    pub bijective_on_objects: bool,
    pub bijective_on_arrows: bool,
    pub failure: Option<String>,
}

impl OpcartesianReport {
    pub fn passed(&self) -> bool {
        self.bijective_on_objects && self.bijective_on_arrows
    }
}

type NatKey = (Vec<Obj>, Vec<Arr>, Vec<Obj>, Vec<Arr>, Vec<Arr>);

fn nat_key(t: &NatTrans) -> NatKey {
    let (so, sa) = t.src().key();
    let (to, ta) = t.tgt().key();
    (so, sa, to, ta, t.components().to_vec())
}

/// Checks that `FIBFib(f∘p, r) → FIBFib(p, r) ×_{CATFib(B,E)} CATFib(C,E)` is
/// an isomorphism of categories, for `sq = opcartesian_1cell(p, f)`.
pub fn verify_opcartesian_1cell(sq: &FibSquare, r: &FibredCat) -> Result<OpcartesianReport> {
    let f = &sq.g;
    let lifted = square_hom(&sq.q, r)?;
    let restricted = square_hom(&sq.p, r)?;
    let below = fibration_hom(f.base(), r.base())?;

    let mut pullback_objects = HashSet::new();
    for s in &restricted.squares {
        for k in &below.fibrations {
            if k.display().after(f.display()) == *s.g.display() {
                pullback_objects.insert((s.key(), k.display().key()));
            }
        }
    }
    let mut pullback_arrows = HashSet::new();
    for (i, j, c) in &restricted.cells {
        for (k1, k0, psi) in &below.cells {
            let (s, t) = (&restricted.squares[*i], &restricted.squares[*j]);
            let (bk1, bk0) = (&below.fibrations[*k1], &below.fibrations[*k0]);
            if bk0.display().after(f.display()) == *s.g.display()
                && bk1.display().after(f.display()) == *t.g.display()
                && psi.precompose(f.display()).components() == c.psi.components()
            {
                pullback_arrows.insert((s.key(), t.key(), nat_key(&c.phi), nat_key(psi)));
            }
        }
    }

    let mut report = OpcartesianReport {
        lifted_objects: lifted.squares.len(),
        lifted_arrows: lifted.cells.len(),
        pullback_objects: pullback_objects.len(),
        pullback_arrows: pullback_arrows.len(),
        ..Default::default()
    };
    let mut seen = HashSet::new();
    let mut objects_ok = true;
    for s in &lifted.squares {
        let image = compose_squares(sq, s)?;
        let key = (image.key(), s.g.display().key());
        if !pullback_objects.contains(&key) || !seen.insert(key) {
            objects_ok = false;
            report.failure = Some(format!("the square over {} has no unique image", s.g.display().table_name()));
            break;
        }
    }
    report.bijective_on_objects = objects_ok && seen.len() == pullback_objects.len();
    let mut seen = HashSet::new();
    let mut arrows_ok = true;
    for (_, _, c) in &lifted.cells {
        let (s, t) = (compose_squares(sq, &c.src)?, compose_squares(sq, &c.tgt)?);
        let key = (s.key(), t.key(), nat_key(&c.phi), nat_key(&c.psi));
        if !pullback_arrows.contains(&key) || !seen.insert(key) {
            arrows_ok = false;
            report.failure.get_or_insert_with(|| "a 2-cell has no unique image".into());
            break;
        }
    }
    report.bijective_on_arrows = arrows_ok && seen.len() == pullback_arrows.len();
    if report.failure.is_none() && !report.passed() {
        report.failure = Some("the comparison is not surjective".into());
    }
    Ok(report)
}

/// `γ_!α` with cell `α_x ∘ γ_{p x}`, and the 2-cell `⟨1_f, γ⟩ : α → γ_!α`.
pub fn local_opcartesian_lift(alpha: &FibSquare, gamma: &NatTrans, g1: &FibredCat) -> Result<(FibSquare, FibSquare2Cell)> {
    if gamma.tgt() != alpha.g.display() || gamma.src() != g1.display() {
        return Err(Error::Mismatch("γ must go from the new bottom to the bottom of α".into()));
    }
    let d = alpha.q.base();
    let comps = alpha
        .p
        .total()
        .objects()
        .map(|x| d.compose(alpha.cell.component(x), gamma.component(alpha.p.over(x))))
        .collect();
    let cell = NatTrans::new(g1.display().after(alpha.p.display()), alpha.cell.tgt().clone(), comps)?;
    let lifted = FibSquare::new(alpha.p.clone(), alpha.q.clone(), alpha.f.clone(), g1.clone(), cell)?;
    let two_cell = FibSquare2Cell::new(alpha.clone(), lifted.clone(), NatTrans::identity(&alpha.f), gamma.clone())?;
    Ok((lifted, two_cell))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalOpcartesianReport {
    pub from_lift: usize,
    pub factoring: usize,
    pub bijective: bool,
    pub failure: Option<String>,
}

/// Checks that 2-cells `γ_!α → β` correspond to triples `(φ, ψ, χ)` with
/// `(φ, ψ) : α → β` and `ψ = γ • χ`, via `(φ, χ) ↦ (φ, γ • χ, χ)`.
pub fn verify_local_opcartesian(lifted: &(FibSquare, FibSquare2Cell), beta: &FibSquare) -> Result<LocalOpcartesianReport> {
    let (lift, unit) = lifted;
    let (alpha, gamma) = (&unit.src, &unit.psi);
    let from_lift: Vec<(NatTrans, NatTrans)> = cells_between(lift, beta)?;
    let mut triples = HashSet::new();
    for (phi, psi) in cells_between(alpha, beta)? {
        for chi in enumerate_nat_trans(beta.g.display(), lift.g.display())? {
            if gamma.after(&chi).components() == psi.components() {
                triples.insert((nat_key(&phi), nat_key(&psi), nat_key(&chi)));
            }
        }
    }
    let mut report = LocalOpcartesianReport { from_lift: from_lift.len(), factoring: triples.len(), ..Default::default() };
    let mut seen = HashSet::new();
    for (phi, chi) in &from_lift {
        let key = (nat_key(phi), nat_key(&gamma.after(chi)), nat_key(chi));
        if !triples.contains(&key) || !seen.insert(key) {
            report.failure = Some(format!("the 2-cell with χ = {} does not factor uniquely", chi.components_name()));
            return Ok(report);
        }
    }
    report.bijective = seen.len() == triples.len();
    if !report.bijective {
        report.failure = Some("some factoring 2-cell has no preimage".into());
    }
    Ok(report)
}

/// All `(φ, ψ)` from `s` to `t`.
fn cells_between(s: &FibSquare, t: &FibSquare) -> Result<Vec<(NatTrans, NatTrans)>> {
    let mut out = Vec::new();
    for phi in enumerate_nat_trans(&s.f, &t.f)? {
        for psi in enumerate_nat_trans(t.g.display(), s.g.display())? {
            if pasting_holds(s, t, &phi, &psi) {
                out.push((phi.clone(), psi));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HorizontalClosureReport {
    pub equal: bool,
    pub components: usize,
    pub failure: Option<String>,
}

/// Compares `γ_!α * κ_!β` with `(γ*κ)_!(α*β)`, where the bottoms of the
/// lifts are `g1` and `k1`.
pub fn check_horizontal_closure(
    alpha: &FibSquare,
    beta: &FibSquare,
    (gamma, g1): (&NatTrans, &FibredCat),
    (kappa, k1): (&NatTrans, &FibredCat),
) -> Result<HorizontalClosureReport> {
    let (la, _) = local_opcartesian_lift(alpha, gamma, g1)?;
    let (lb, _) = local_opcartesian_lift(beta, kappa, k1)?;
    let left = compose_squares(&la, &lb)?;
    let ab = compose_squares(alpha, beta)?;
    let gk = gamma.hcompose(kappa);
    let bottom = compose_fibrations(g1, k1)?;
    let (right, _) = local_opcartesian_lift(&ab, &gk, &bottom)?;
    let mut report = HorizontalClosureReport { components: left.cell.components().len(), ..Default::default() };
    report.equal = left.key() == right.key();
    if !report.equal {
        let x = left
            .cell
            .components()
            .iter()
            .zip(right.cell.components())
            .position(|(a, b)| a != b)
            .map(|i| left.p.total().object_name(Obj(i)).to_string());
        report.failure = Some(match x {
            Some(x) => format!("the cells differ at {x}"),
            None => "the squares differ in their functors".into(),
        });
    }
    Ok(report)
}
