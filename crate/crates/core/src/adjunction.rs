//! The transpose `♯ : FIB(A)(E, ∇_p F) → FIB(B)(Σ_p E, F)`, its reverse `♭`,
//! and decision procedures for the equivalence and its naturality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{compose_fibrations, fib_hom, FibFunctor, FibredCat, FunctorCategory};
use crate::fincat::{check_equivalence, Arr, FinFunctor, NatTrans, Obj};
use crate::oplax::{local_hom_on_1cell, oplax_base_change, OplaxBaseChange};

/// Everything needed to transpose between `E → ∇_p(F)` over `A` and
/// `Σ_p(E) → F` over `B`.
#[derive(Clone, Debug)]
pub struct Transpose {
    pub p: FibredCat,
    pub e: FibredCat,
    pub f: FibredCat,
    pub sum: FibredCat,
    pub nabla: OplaxBaseChange,
}

impl Transpose {
    pub fn new(p: &FibredCat, e: &FibredCat, f: &FibredCat) -> Result<Self> {
        let sum = compose_fibrations(e, p)?;
        let nabla = oplax_base_change(p, f)?;
        Ok(Transpose { p: p.clone(), e: e.clone(), f: f.clone(), sum, nabla })
    }

    /// `φ♯⟨a,e⟩ = φ(e)⟨a,1_a⟩` and
    /// `φ♯(e01) = φ(e1)(!_{⟨a0,a01⟩}) ∘ φ(e01)⟨a0,1_{a0}⟩`.
    pub fn sharp(&self, phi: &FinFunctor) -> Result<FibFunctor> {
        let (a, et, ft) = (self.p.total(), self.e.total(), self.f.total());
        let slices = &self.nabla.sums.slices;
        let obj = et
            .objects()
            .map(|x| {
                let s = &slices[self.e.over(x).0];
                self.nabla.object(phi.obj(x)).functor.map().obj(s.terminal())
            })
            .collect();
        let arr = et
            .arrows()
            .map(|g| {
                let a01 = self.e.over_arr(g);
                let (s0, s1) = (&slices[a.src(a01).0], &slices[a.tgt(a01).0]);
                let r = self.nabla.arrow(phi.arr(g));
                let bang = s1.to_terminal(s1.object_of(a01));
                let e1 = self.nabla.object(r.tgt).functor.map();
                ft.compose(e1.arr(bang), r.cell.component(s0.terminal()))
            })
            .collect();
        let map = FinFunctor::new(self.sum.total().clone(), ft.clone(), obj, arr)?;
        FibFunctor::new(self.sum.clone(), self.f.clone(), map)
    }

    /// `(φ01♯)⟨a,e⟩ = φ01(e)⟨a,1_a⟩`.
    pub fn sharp_2cell(&self, phi01: &NatTrans, src: &FibFunctor, tgt: &FibFunctor) -> Result<NatTrans> {
        let et = self.e.total();
        let slices = &self.nabla.sums.slices;
        let comps = et
            .objects()
            .map(|x| {
                let s = &slices[self.e.over(x).0];
                self.nabla.arrow(phi01.component(x)).cell.component(s.terminal())
            })
            .collect();
        NatTrans::new(src.map().clone(), tgt.map().clone(), comps)
    }

    /// `ψ♭(e)⟨a′,f⟩ = ψ⟨a′, f^*e⟩`, with arrows sent to the images of the
    /// comparison maps between chosen lifts.
    pub fn flat(&self, psi: &FinFunctor) -> Result<FibFunctor> {
        let (a, et, ft) = (self.p.total(), self.e.total(), self.f.total());
        let e = &self.e;
        let slices = &self.nabla.sums.slices;
        let mut obj = Vec::with_capacity(et.n_objects());
        for x in et.objects() {
            let s = &slices[e.over(x).0];
            let o = s
                .cat
                .objects()
                .map(|t| psi.obj(e.lift_domain(s.object_arrow(t), x)))
                .collect();
            let m = s
                .cat
                .arrows()
                .map(|t| {
                    let (f0, f1) = (s.object_arrow(s.cat.src(t)), s.object_arrow(s.cat.tgt(t)));
                    psi.arr(e.gap(e.lift(f1, x), e.lift(f0, x), s.underlying(t)))
                })
                .collect();
            let functor = FinFunctor::new(s.cat.clone(), ft.clone(), o, m)?;
            let found = self
                .nabla
                .object_of(e.over(x), &functor)
                .ok_or_else(|| Error::NotFibred(format!("the reverse transpose at {} is not fibred", et.object_name(x))))?;
            obj.push(found);
        }
        let mut arr = Vec::with_capacity(et.n_arrows());
        for g in et.arrows() {
            let a01 = e.over_arr(g);
            let (x0, x1) = (et.src(g), et.tgt(g));
            let s0 = &slices[a.src(a01).0];
            let comps: Vec<Arr> = s0
                .cat
                .objects()
                .map(|t| {
                    let f = s0.object_arrow(t);
                    let h = et.compose(g, e.lift(f, x0));
                    psi.arr(e.gap(e.lift(a.compose(a01, f), x1), h, a.identity(a.src(f))))
                })
                .collect();
            let found = self
                .nabla
                .arrow_of(a01, obj[x0.0], obj[x1.0], &comps)
                .ok_or_else(|| Error::NotFibred(format!("the reverse transpose of {} is not a cell", et.arrow_name(g))))?;
            arr.push(found);
        }
        let map = FinFunctor::new(et.clone(), self.nabla.fibred.total().clone(), obj, arr)?;
        FibFunctor::new(self.e.clone(), self.nabla.fibred.clone(), map)
    }

    /// `(ψ01♭)(e)⟨a′,f⟩ = ψ01⟨a′, f^*e⟩`.
    pub fn flat_2cell(&self, psi01: &NatTrans, src: &FibFunctor, tgt: &FibFunctor) -> Result<NatTrans> {
        let (a, et) = (self.p.total(), self.e.total());
        let slices = &self.nabla.sums.slices;
        let comps = et
            .objects()
            .map(|x| {
                let at = self.e.over(x);
                let s = &slices[at.0];
                let cell: Vec<Arr> = s
                    .cat
                    .objects()
                    .map(|t| psi01.component(self.e.lift_domain(s.object_arrow(t), x)))
                    .collect();
                self.nabla
                    .arrow_of(a.identity(at), src.map().obj(x), tgt.map().obj(x), &cell)
                    .ok_or_else(|| Error::NotFibred("the reverse transpose of a 2-cell is not vertical".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        NatTrans::new(src.map().clone(), tgt.map().clone(), comps)
    }

    /// The component of the isomorphism `ψ♭♯ ≅ ψ` at `e`: `ψ(lift(1_a, e))`.
    pub fn eso_witness(&self, psi: &FibFunctor) -> Result<NatTrans> {
        let (a, et) = (self.p.total(), self.e.total());
        let back = self.sharp(self.flat(psi.map())?.map())?;
        let comps = et.objects().map(|x| psi.map().arr(self.e.lift(a.identity(self.e.over(x)), x))).collect();
        NatTrans::new(back.map().clone(), psi.map().clone(), comps)
    }

    /// The preimage of `ψ01 : φ0♯ ⇒ φ1♯`: at `e` and `⟨a′,f⟩`, the unique
    /// vertical `g` with `φ1(e)(!) ∘ g = ψ01_e ∘ φ0(e)(!)`.
    pub fn full_preimage(&self, phi0: &FibFunctor, phi1: &FibFunctor, psi01: &NatTrans) -> Result<NatTrans> {
        let (a, et, ft) = (self.p.total(), self.e.total(), self.f.total());
        let slices = &self.nabla.sums.slices;
        let comps = et
            .objects()
            .map(|x| {
                let at = self.e.over(x);
                let s = &slices[at.0];
                let (o0, o1) = (phi0.map().obj(x), phi1.map().obj(x));
                let (g0, g1) = (self.nabla.object(o0).functor.map(), self.nabla.object(o1).functor.map());
                let cell: Vec<Arr> = s
                    .cat
                    .objects()
                    .map(|t| {
                        let bang = s.to_terminal(t);
                        let h = ft.compose(psi01.component(x), g0.arr(bang));
                        let w = self.f.base().identity(self.f.over(g0.obj(t)));
                        self.f.displayed().factor(g1.arr(bang), h, w).ok_or_else(|| {
                            Error::NotFibred("no factorisation through the image of a cartesian arrow".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                self.nabla
                    .arrow_of(a.identity(at), o0, o1, &cell)
                    .ok_or_else(|| Error::NotFibred("the constructed preimage is not a vertical cell".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        NatTrans::new(phi0.map().clone(), phi1.map().clone(), comps)
    }
}

/// The outcome of checking that `♯_{E,F}` is an equivalence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransposeReport {
    pub lhs_objects: usize,
    pub lhs_arrows: usize,
    pub rhs_objects: usize,
    pub rhs_arrows: usize,
    pub functorial: bool,
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
    pub oracle_agrees: bool,
    pub failure: Option<String>,
}

impl TransposeReport {
    pub fn is_equivalence(&self) -> bool {
        self.functorial && self.full && self.faithful && self.essentially_surjective && self.oracle_agrees
    }
}

/// The materialised hom-categories and `♯` between them.
#[derive(Clone, Debug)]
pub struct TransposeWitness {
    pub transpose: Transpose,
    pub lhs: FunctorCategory,
    pub rhs: FunctorCategory,
    pub forward: FinFunctor,
    pub backward: Vec<Obj>,
    pub iso_family: Vec<NatTrans>,
}

pub fn check_transpose_equivalence(p: &FibredCat, e: &FibredCat, f: &FibredCat) -> Result<(TransposeWitness, TransposeReport)> {
    let t = Transpose::new(p, e, f)?;
    let lhs = fib_hom(e, &t.nabla.fibred)?;
    let rhs = fib_hom(&t.sum, f)?;
    let mut report = TransposeReport {
        lhs_objects: lhs.cat.n_objects(),
        lhs_arrows: lhs.cat.n_arrows(),
        rhs_objects: rhs.cat.n_objects(),
        rhs_arrows: rhs.cat.n_arrows(),
        ..Default::default()
    };
    let as_fib = |m: &FinFunctor, dom: &FibredCat, cod: &FibredCat| FibFunctor::new(dom.clone(), cod.clone(), m.clone());
    let lhs_fib = lhs
        .functors
        .iter()
        .map(|m| as_fib(m, e, &t.nabla.fibred))
        .collect::<Result<Vec<_>>>()?;
    let rhs_fib = rhs.functors.iter().map(|m| as_fib(m, &t.sum, f)).collect::<Result<Vec<_>>>()?;

    let mut sharps = Vec::with_capacity(lhs_fib.len());
    for phi in &lhs_fib {
        let s = t.sharp(phi.map())?;
        match rhs.object_of(s.map()) {
            Some(o) => sharps.push((s, o)),
            None => {
                report.failure = Some("a transpose is missing from the target hom-category".into());
                return Ok((empty_witness(t, lhs, rhs), report));
            }
        }
    }
    let mut arr = Vec::with_capacity(lhs.cat.n_arrows());
    for a in lhs.cat.arrows() {
        let (i, j) = (lhs.cat.src(a), lhs.cat.tgt(a));
        let cell = t.sharp_2cell(lhs.transformation(a), &sharps[i.0].0, &sharps[j.0].0)?;
        let img = rhs
            .arrow_of(&cell)
            .ok_or_else(|| Error::Mismatch("a transposed 2-cell is missing from the target hom-category".into()))?;
        arr.push(img);
    }
    let forward = match FinFunctor::new(lhs.cat.clone(), rhs.cat.clone(), sharps.iter().map(|s| s.1).collect(), arr) {
        Ok(f) => f,
        Err(err) => {
            report.failure = Some(format!("transposition is not functorial: {err}"));
            return Ok((empty_witness(t, lhs, rhs), report));
        }
    };
    report.functorial = true;

    report.faithful = true;
    'faithful: for i in lhs.cat.objects() {
        for j in lhs.cat.objects() {
            let hom = lhs.cat.hom(i, j);
            for (k, &x) in hom.iter().enumerate() {
                for &y in &hom[k + 1..] {
                    if forward.arr(x) == forward.arr(y) {
                        report.faithful = false;
                        report.failure = Some(format!(
                            "{} and {} have the same transpose",
                            lhs.cat.arrow_name(x),
                            lhs.cat.arrow_name(y)
                        ));
                        break 'faithful;
                    }
                }
            }
        }
    }

    report.full = true;
    'full: for i in lhs.cat.objects() {
        for j in lhs.cat.objects() {
            let (si, sj) = (forward.obj(i), forward.obj(j));
            for &target in rhs.cat.hom(si, sj) {
                let pre = t.full_preimage(&lhs_fib[i.0], &lhs_fib[j.0], rhs.transformation(target))?;
                let ok = lhs.arrow_of(&pre).is_some_and(|a| forward.arr(a) == target);
                if !ok {
                    report.full = false;
                    report.failure = Some(format!("the constructed preimage of {} is wrong", rhs.cat.arrow_name(target)));
                    break 'full;
                }
            }
        }
    }

    let mut backward = Vec::with_capacity(rhs_fib.len());
    let mut iso_family = Vec::with_capacity(rhs_fib.len());
    report.essentially_surjective = true;
    for (k, psi) in rhs_fib.iter().enumerate() {
        let flat = t.flat(psi.map())?;
        let Some(o) = lhs.object_of(flat.map()) else {
            report.essentially_surjective = false;
            report.failure = Some("a reverse transpose is missing from the source hom-category".into());
            break;
        };
        backward.push(o);
        let iso = t.eso_witness(psi)?;
        let vertical = iso.components().iter().all(|&c| f.is_vertical(c));
        if !iso.is_invertible() || !vertical || rhs.object_of(iso.src()) != Some(forward.obj(o)) {
            report.essentially_surjective = false;
            report.failure = Some(format!("the witness at f{k} is not a vertical isomorphism"));
            break;
        }
        iso_family.push(iso);
    }

    report.oracle_agrees = check_equivalence(&forward).is_equivalence()
        == (report.full && report.faithful && report.essentially_surjective);
    Ok((TransposeWitness { transpose: t, lhs, rhs, forward, backward, iso_family }, report))
}

fn empty_witness(t: Transpose, lhs: FunctorCategory, rhs: FunctorCategory) -> TransposeWitness {
    let forward = FinFunctor::identity(&lhs.cat);
    TransposeWitness { transpose: t, lhs, rhs, forward, backward: Vec::new(), iso_family: Vec::new() }
}

/// The outcome of comparing both composites around a naturality square of `♯`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PseudoNaturalityReport {
    pub objects_checked: usize,
    pub arrows_checked: usize,
    pub strict: bool,
    pub failure: Option<String>,
}

/// For `e10 : E1 → E0` over `A` and `f01 : F0 → F1` over `B`, checks that
/// `(∇_p(f01) ∘ φ ∘ e10)♯ = f01 ∘ φ♯ ∘ Σ_p(e10)` on every object and 2-cell
/// of `FIB(A)(E0, ∇_p F0)`.
pub fn check_pseudo_naturality(p: &FibredCat, e10: &FibFunctor, f01: &FibFunctor) -> Result<PseudoNaturalityReport> {
    let (e1, e0) = (e10.dom(), e10.cod());
    let (f0, f1) = (f01.dom(), f01.cod());
    let t0 = Transpose::new(p, e0, f0)?;
    let t1 = Transpose::new(p, e1, f1)?;
    let nabla_f01 = local_hom_on_1cell(&t0.nabla, &t1.nabla, f01)?;
    let sum_e10 = FibFunctor::new(t1.sum.clone(), t0.sum.clone(), e10.map().retarget(t1.sum.total(), t0.sum.total()))?;
    let lhs = fib_hom(e0, &t0.nabla.fibred)?;
    let mut report = PseudoNaturalityReport { strict: true, ..Default::default() };
    let mut sharp0 = Vec::new();
    let mut sharp1 = Vec::new();
    for phi in &lhs.functors {
        let phi_fib = FibFunctor::new(e0.clone(), t0.nabla.fibred.clone(), phi.clone())?;
        let moved = nabla_f01.after(&phi_fib.after(e10));
        let left = t1.sharp(moved.map())?;
        let s0 = t0.sharp(phi)?;
        let right = f01.after(&s0.after(&sum_e10));
        report.objects_checked += 1;
        if left.map() != right.map() {
            report.strict = false;
            report.failure = Some(format!("the square fails at {}", phi.table_name()));
            return Ok(report);
        }
        sharp0.push(s0);
        sharp1.push(left);
    }
    for a in lhs.cat.arrows() {
        let (i, j) = (lhs.cat.src(a), lhs.cat.tgt(a));
        let cell = lhs.transformation(a);
        let moved = cell.precompose(e10.map()).postcompose(nabla_f01.map());
        let left = t1.sharp_2cell(&moved, &sharp1[i.0], &sharp1[j.0])?;
        let s0 = t0.sharp_2cell(cell, &sharp0[i.0], &sharp0[j.0])?;
        let right = s0.precompose(sum_e10.map()).postcompose(f01.map());
        report.arrows_checked += 1;
        if left.components() != right.components() {
            report.strict = false;
            report.failure = Some(format!("the square fails at the 2-cell {}", lhs.cat.arrow_name(a)));
            return Ok(report);
        }
    }
    Ok(report)
}
