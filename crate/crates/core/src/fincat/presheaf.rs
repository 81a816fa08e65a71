use std::collections::HashSet;
use std::sync::Arc;

use super::{Arr, FinCat, Obj};
use crate::error::{Error, Result};
use crate::limits::Budget;

/// A presheaf of finite sets. The action of `f : c0 → c1` is stored as a
/// function from indices of `X(c1)` to indices of `X(c0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FinCat>,
    sets: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn new(base: Arc<FinCat>, sets: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Result<Self> {
        let c = &base;
        if sets.len() != c.n_objects() || actions.len() != c.n_arrows() {
            return Err(Error::Presheaf("tables do not cover the base".into()));
        }
        for (i, s) in sets.iter().enumerate() {
            let mut seen = HashSet::new();
            if let Some(dup) = s.iter().find(|e| !seen.insert(*e)) {
                return Err(Error::Presheaf(format!("element `{dup}` repeated at `{}`", c.object_name(Obj(i)))));
            }
        }
        for f in c.arrows() {
            let act = &actions[f.0];
            if act.len() != sets[c.tgt(f).0].len() || act.iter().any(|&v| v >= sets[c.src(f).0].len()) {
                return Err(Error::Presheaf(format!("action of `{}` is not a function", c.arrow_name(f))));
            }
        }
        for x in c.objects() {
            let act = &actions[c.identity(x).0];
            if act.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::Presheaf(format!("identity of `{}` acts non-trivially", c.object_name(x))));
            }
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f);
            for v in 0..sets[c.tgt(g).0].len() {
                if actions[gf.0][v] != actions[f.0][actions[g.0][v]] {
                    return Err(Error::Presheaf(format!(
                        "action of {} . {} is not the composite action",
                        c.arrow_name(g),
                        c.arrow_name(f)
                    )));
                }
            }
        }
        Ok(Presheaf { base, sets, actions })
    }

    pub fn from_fn(
        base: Arc<FinCat>,
        sets: Vec<Vec<String>>,
        action: impl Fn(Arr, usize) -> usize,
    ) -> Result<Self> {
        let actions = base
            .arrows()
            .map(|f| (0..sets[base.tgt(f).0].len()).map(|v| action(f, v)).collect())
            .collect();
        Presheaf::new(base, sets, actions)
    }

    pub fn terminal(base: &Arc<FinCat>) -> Presheaf {
        Presheaf::from_fn(base.clone(), vec![vec!["*".to_string()]; base.n_objects()], |_, _| 0)
            .expect("the terminal presheaf is valid")
    }

    pub fn empty(base: &Arc<FinCat>) -> Presheaf {
        Presheaf::from_fn(base.clone(), vec![Vec::new(); base.n_objects()], |_, _| 0)
            .expect("the empty presheaf is valid")
    }

    /// `C(-, c)`, elements named by arrows.
    pub fn representable(base: &Arc<FinCat>, c: Obj) -> Presheaf {
        let sets: Vec<Vec<String>> = base
            .objects()
            .map(|d| base.hom(d, c).iter().map(|&h| base.arrow_name(h).to_string()).collect())
            .collect();
        Presheaf::from_fn(base.clone(), sets, |f, v| {
            let h = base.hom(base.tgt(f), c)[v];
            let hf = base.compose(h, f);
            base.hom(base.src(f), c).iter().position(|&k| k == hf).expect("composite lies in the hom-set")
        })
        .expect("representables are presheaves")
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn set(&self, c: Obj) -> &[String] {
        &self.sets[c.0]
    }

    pub fn size(&self, c: Obj) -> usize {
        self.sets[c.0].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn act(&self, f: Arr, v: usize) -> usize {
        self.actions[f.0][v]
    }

    pub fn action(&self, f: Arr) -> &[usize] {
        &self.actions[f.0]
    }

    pub fn element(&self, c: Obj, name: &str) -> Option<usize> {
        self.sets[c.0].iter().position(|e| e == name)
    }
}

/// A natural transformation between presheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    src: Presheaf,
    tgt: Presheaf,
    comps: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn new(src: Presheaf, tgt: Presheaf, comps: Vec<Vec<usize>>) -> Result<Self> {
        if src.base != tgt.base {
            return Err(Error::Presheaf("presheaves live over different bases".into()));
        }
        let c = src.base.clone();
        if comps.len() != c.n_objects() {
            return Err(Error::Presheaf("components do not cover the base".into()));
        }
        for x in c.objects() {
            let m = &comps[x.0];
            if m.len() != src.size(x) || m.iter().any(|&v| v >= tgt.size(x)) {
                return Err(Error::Presheaf(format!("component at `{}` is not a function", c.object_name(x))));
            }
        }
        for f in c.arrows() {
            let (c0, c1) = (c.src(f), c.tgt(f));
            for v in 0..src.size(c1) {
                if comps[c0.0][src.act(f, v)] != tgt.act(f, comps[c1.0][v]) {
                    return Err(Error::Presheaf(format!(
                        "naturality fails at `{}` on `{}`",
                        c.arrow_name(f),
                        src.set(c1)[v]
                    )));
                }
            }
        }
        Ok(PresheafMorphism { src, tgt, comps })
    }

    pub fn identity(x: &Presheaf) -> PresheafMorphism {
        let comps = x.base.objects().map(|c| (0..x.size(c)).collect()).collect();
        PresheafMorphism { src: x.clone(), tgt: x.clone(), comps }
    }

    pub fn src(&self) -> &Presheaf {
        &self.src
    }

    pub fn tgt(&self) -> &Presheaf {
        &self.tgt
    }

    pub fn component(&self, c: Obj) -> &[usize] {
        &self.comps[c.0]
    }

    pub fn apply(&self, c: Obj, v: usize) -> usize {
        self.comps[c.0][v]
    }

    /// `self ∘ first`
    pub fn after(&self, first: &PresheafMorphism) -> PresheafMorphism {
        assert!(first.tgt == self.src, "morphisms are not composable");
        let comps = first
            .comps
            .iter()
            .enumerate()
            .map(|(c, m)| m.iter().map(|&v| self.comps[c][v]).collect())
            .collect();
        PresheafMorphism { src: first.src.clone(), tgt: self.tgt.clone(), comps }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.src.base.objects().all(|c| {
            let m = &self.comps[c.0];
            let mut seen = vec![false; self.tgt.size(c)];
            m.len() == self.tgt.size(c) && m.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }
}

/// All presheaf morphisms `x ⇒ y`, in lexicographic order of components.
pub fn enumerate_presheaf_morphisms(x: &Presheaf, y: &Presheaf) -> Result<Vec<PresheafMorphism>> {
    if x.base != y.base {
        return Err(Error::Presheaf("presheaves live over different bases".into()));
    }
    let c = x.base.clone();
    let mut checks = vec![Vec::new(); c.n_objects()];
    for f in c.non_identity_arrows() {
        checks[c.src(f).0.max(c.tgt(f).0)].push(f);
    }
    let vars: Vec<(Obj, usize)> = c.objects().flat_map(|o| (0..x.size(o)).map(move |v| (o, v))).collect();
    let mut comps: Vec<Vec<usize>> = c.objects().map(|o| vec![0; x.size(o)]).collect();
    let mut out = Vec::new();
    let mut budget = Budget::new("enumerating presheaf morphisms");

    fn natural_at(c: &FinCat, x: &Presheaf, y: &Presheaf, comps: &[Vec<usize>], checks: &[Arr]) -> bool {
        checks.iter().all(|&f| {
            let (c0, c1) = (c.src(f), c.tgt(f));
            (0..x.size(c1)).all(|v| comps[c0.0][x.act(f, v)] == y.act(f, comps[c1.0][v]))
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        next_obj: usize,
        c: &FinCat,
        x: &Presheaf,
        y: &Presheaf,
        vars: &[(Obj, usize)],
        checks: &[Vec<Arr>],
        comps: &mut Vec<Vec<usize>>,
        out: &mut Vec<PresheafMorphism>,
        budget: &mut Budget,
    ) -> Result<()> {
        // Objects whose components are complete get their naturality checked.
        let upto = if i < vars.len() { vars[i].0 .0 } else { c.n_objects() };
        for arrows in &checks[next_obj..upto] {
            if !natural_at(c, x, y, comps, arrows) {
                return Ok(());
            }
        }
        if i == vars.len() {
            out.push(PresheafMorphism { src: x.clone(), tgt: y.clone(), comps: comps.clone() });
            return Ok(());
        }
        let (o, v) = vars[i];
        for w in 0..y.size(o) {
            budget.tick()?;
            comps[o.0][v] = w;
            go(i + 1, upto, c, x, y, vars, checks, comps, out, budget)?;
        }
        Ok(())
    }

    go(0, 0, &c, x, y, &vars, &checks, &mut comps, &mut out, &mut budget)?;
    Ok(out)
}
