use std::collections::HashMap;

use super::{Arr, ArrowInfo, FinCat, LawViolation, Obj, NONE};
use crate::names::identity_name;

/// Accumulates a candidate category table; [`CatBuilder::build`] validates it.
///
/// Composites with an identity on either side may be left out and are then
/// filled in by the unit laws. Explicit entries always win, so a wrong unit
/// entry is reported rather than silently repaired.
#[derive(Clone, Debug, Default)]
pub struct CatBuilder {
    name: String,
    objects: Vec<String>,
    arrows: Vec<ArrowInfo>,
    identities: Vec<Option<Arr>>,
    compose: HashMap<(Arr, Arr), Arr>,
    obj_index: HashMap<String, Obj>,
    arr_index: HashMap<String, Arr>,
}

impl CatBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CatBuilder { name: name.into(), ..Default::default() }
    }

    pub fn object(&mut self, name: impl Into<String>) -> Result<Obj, LawViolation> {
        let name = name.into();
        if self.obj_index.contains_key(&name) {
            return Err(LawViolation::DuplicateObject(name));
        }
        let x = Obj(self.objects.len());
        self.obj_index.insert(name.clone(), x);
        self.objects.push(name);
        self.identities.push(None);
        Ok(x)
    }

    /// Adds an object together with an identity arrow named `1_<name>`.
    pub fn object_with_identity(&mut self, name: impl Into<String>) -> Result<Obj, LawViolation> {
        let name = name.into();
        let id = identity_name(&name);
        let x = self.object(name)?;
        let f = self.arrow(id, x, x)?;
        self.identities[x.0] = Some(f);
        Ok(x)
    }

    pub fn arrow(&mut self, name: impl Into<String>, src: Obj, tgt: Obj) -> Result<Arr, LawViolation> {
        let name = name.into();
        if self.arr_index.contains_key(&name) {
            return Err(LawViolation::DuplicateArrow(name));
        }
        let f = Arr(self.arrows.len());
        self.arr_index.insert(name.clone(), f);
        self.arrows.push(ArrowInfo { name, src, tgt });
        Ok(f)
    }

    pub fn set_identity(&mut self, x: Obj, f: Arr) {
        self.identities[x.0] = Some(f);
    }

    pub fn set_compose(&mut self, g: Arr, f: Arr, h: Arr) {
        self.compose.insert((g, f), h);
    }

    pub fn object_id(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<Arr> {
        self.arr_index.get(name).copied()
    }

    pub fn identity_of(&self, x: Obj) -> Option<Arr> {
        self.identities[x.0]
    }

    pub fn arrow_info(&self, f: Arr) -> &ArrowInfo {
        &self.arrows[f.0]
    }

    pub fn build(mut self) -> Result<FinCat, LawViolation> {
        let n = self.arrows.len();
        let an = |f: Arr| self.arrows[f.0].name.clone();

        let mut identities = Vec::with_capacity(self.objects.len());
        for (i, id) in self.identities.iter().enumerate() {
            let Some(id) = *id else {
                return Err(LawViolation::MissingIdentity(self.objects[i].clone()));
            };
            let info = &self.arrows[id.0];
            if info.src.0 != i || info.tgt.0 != i {
                return Err(LawViolation::IdentityMistyped {
                    object: self.objects[i].clone(),
                    arrow: info.name.clone(),
                });
            }
            identities.push(id);
        }

        for f in (0..n).map(Arr) {
            let ArrowInfo { src, tgt, .. } = self.arrows[f.0];
            self.compose.entry((f, identities[src.0])).or_insert(f);
            self.compose.entry((identities[tgt.0], f)).or_insert(f);
        }

        for f in (0..n).map(Arr) {
            let ArrowInfo { src, tgt, .. } = self.arrows[f.0];
            let (is, it) = (identities[src.0], identities[tgt.0]);
            let right = self.compose[&(f, is)];
            if right != f {
                return Err(LawViolation::UnitLaw { arrow: an(f), identity: an(is), found: an(right) });
            }
            let left = self.compose[&(it, f)];
            if left != f {
                return Err(LawViolation::UnitLaw { arrow: an(it), identity: an(f), found: an(left) });
            }
        }

        let mut entries: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        entries.sort();
        for &(g, f, _) in &entries {
            if self.arrows[f.0].tgt != self.arrows[g.0].src {
                return Err(LawViolation::NotComposable { g: an(g), f: an(f) });
            }
        }

        let mut table = vec![NONE; n * n];
        for f in (0..n).map(Arr) {
            for g in (0..n).map(Arr) {
                if self.arrows[f.0].tgt != self.arrows[g.0].src {
                    continue;
                }
                let Some(&h) = self.compose.get(&(g, f)) else {
                    return Err(LawViolation::MissingComposite { g: an(g), f: an(f) });
                };
                let hi = &self.arrows[h.0];
                if hi.src != self.arrows[f.0].src || hi.tgt != self.arrows[g.0].tgt {
                    return Err(LawViolation::CompositeMistyped { g: an(g), f: an(f), h: an(h) });
                }
                table[g.0 * n + f.0] = h.0 as u32;
            }
        }

        let no = self.objects.len();
        let mut out_of = vec![Vec::new(); no];
        let mut into = vec![Vec::new(); no];
        let mut hom = vec![Vec::new(); no * no];
        for (i, a) in self.arrows.iter().enumerate() {
            out_of[a.src.0].push(Arr(i));
            into[a.tgt.0].push(Arr(i));
            hom[a.src.0 * no + a.tgt.0].push(Arr(i));
        }
        let comp = |g: Arr, f: Arr| table[g.0 * n + f.0];

        for f in (0..n).map(Arr) {
            for &g in &out_of[self.arrows[f.0].tgt.0] {
                let gf = Arr(comp(g, f) as usize);
                for &h in &out_of[self.arrows[g.0].tgt.0] {
                    let lhs = comp(h, gf);
                    let rhs = comp(Arr(comp(h, g) as usize), f);
                    if lhs != rhs {
                        return Err(LawViolation::Associativity { h: an(h), g: an(g), f: an(f) });
                    }
                }
            }
        }

        let mut is_identity = vec![false; n];
        for id in &identities {
            is_identity[id.0] = true;
        }
        let mut inverses = vec![None; n];
        for f in (0..n).map(Arr) {
            let ArrowInfo { src, tgt, .. } = self.arrows[f.0];
            inverses[f.0] = hom[tgt.0 * no + src.0].iter().copied().find(|&g| {
                comp(g, f) == identities[src.0].0 as u32 && comp(f, g) == identities[tgt.0].0 as u32
            });
        }

        Ok(FinCat {
            name: self.name,
            objects: self.objects,
            arrows: self.arrows,
            identities,
            is_identity,
            compose: table,
            hom,
            into,
            out_of,
            inverses,
            obj_index: self.obj_index,
            arr_index: self.arr_index,
        })
    }
}
