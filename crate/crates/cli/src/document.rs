//! Validated documents: every block of a parsed file, built into the
//! corresponding library object.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use fibkit::fibration::{find_cleaving, Cleaving};
use fibkit::names::identity_name;
use fibkit::{Arr, CatBuilder, DisplayedCat, FibredCat, FinCat, FinFunctor, Obj, Presheaf};
use serde::Serialize;

use crate::syntax::ast::*;
use crate::syntax::{parse_blocks, print_blocks, Diagnostic, Span};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Category,
    Functor,
    Presheaf,
    Displayed,
    Fibration,
    Chain,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Category => "category",
            Kind::Functor => "functor",
            Kind::Presheaf => "presheaf",
            Kind::Displayed => "displayed",
            Kind::Fibration => "fibration",
            Kind::Chain => "chain",
        })
    }
}

/// Blocks refer to the categories and functors they use by name.
#[derive(Clone, Debug)]
pub enum Payload {
    Category(Arc<FinCat>),
    Functor { dom: String, cod: String, functor: FinFunctor },
    Presheaf { base: String, presheaf: Presheaf },
    Displayed { display: String, displayed: DisplayedCat },
    Fibration { display: String, fibred: FibredCat },
    Chain { members: Vec<String>, fibrations: Vec<FibredCat> },
}

#[derive(Clone, Debug)]
pub struct Item {
    pub name: String,
    pub span: Span,
    pub payload: Payload,
}

impl Item {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Category(_) => Kind::Category,
            Payload::Functor { .. } => Kind::Functor,
            Payload::Presheaf { .. } => Kind::Presheaf,
            Payload::Displayed { .. } => Kind::Displayed,
            Payload::Fibration { .. } => Kind::Fibration,
            Payload::Chain { .. } => Kind::Chain,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

/// Documents are equal when their canonical printed forms agree.
impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.to_blocks() == other.to_blocks()
    }
}

fn n(text: &str) -> Name {
    Name { text: text.to_string(), span: Span::default() }
}

fn dup_check<'a>(names: impl IntoIterator<Item = &'a Name>, what: &str) -> Result<(), Diagnostic> {
    let mut seen = HashSet::new();
    for x in names {
        if !seen.insert(x.text.as_str()) {
            return Err(Diagnostic::syntax(x.span, format!("duplicate {what} `{}`", x.text)));
        }
    }
    Ok(())
}

fn lookup_obj(c: &FinCat, x: &Name) -> Result<Obj, Diagnostic> {
    c.object(&x.text)
        .ok_or_else(|| Diagnostic::validation(x.span, format!("`{}` is not an object of `{}`", x.text, c.name())))
}

fn lookup_arr(c: &FinCat, x: &Name) -> Result<Arr, Diagnostic> {
    c.arrow(&x.text)
        .ok_or_else(|| Diagnostic::validation(x.span, format!("`{}` is not an arrow of `{}`", x.text, c.name())))
}

fn build_category(name: &str, span: Span, c: &CategoryAst) -> Result<FinCat, Diagnostic> {
    dup_check(&c.objects, "object")?;
    dup_check(c.identities.iter().map(|p| &p.0), "identity for object")?;
    let mut b = CatBuilder::new(name);
    let objs: HashMap<&str, Obj> =
        c.objects.iter().map(|x| (x.text.as_str(), b.object(x.text.clone()).expect("checked above"))).collect();
    let obj = |x: &Name| {
        objs.get(x.text.as_str())
            .copied()
            .ok_or_else(|| Diagnostic::validation(x.span, format!("`{}` is not an object of `{name}`", x.text)))
    };
    let mut id_names: HashMap<Obj, &Name> = HashMap::new();
    for (x, i) in &c.identities {
        id_names.insert(obj(x)?, i);
    }
    let mut arrows = HashMap::new();
    let mut arrow_spans = HashSet::new();
    for x in &c.objects {
        let o = objs[x.text.as_str()];
        let (idn, sp) = match id_names.get(&o) {
            Some(i) => (i.text.clone(), i.span),
            None => (identity_name(&x.text), x.span),
        };
        let f = b.arrow(idn.clone(), o, o).map_err(|_| Diagnostic::syntax(sp, format!("duplicate arrow `{idn}`")))?;
        b.set_identity(o, f);
        arrows.insert(idn, f);
    }
    for a in &c.arrows {
        let (s, t) = (obj(&a.src)?, obj(&a.tgt)?);
        if !arrow_spans.insert(a.name.text.as_str()) || arrows.contains_key(&a.name.text) {
            return Err(Diagnostic::syntax(a.name.span, format!("duplicate arrow `{}`", a.name.text)));
        }
        let f = b.arrow(a.name.text.clone(), s, t).expect("checked above");
        arrows.insert(a.name.text.clone(), f);
    }
    let arr = |x: &Name| {
        arrows
            .get(&x.text)
            .copied()
            .ok_or_else(|| Diagnostic::validation(x.span, format!("`{}` is not an arrow of `{name}`", x.text)))
    };
    let mut given = HashSet::new();
    for e in &c.compose {
        let (g, f, h) = (arr(&e.g)?, arr(&e.f)?, arr(&e.h)?);
        if !given.insert((g, f)) {
            return Err(Diagnostic::syntax(e.g.span, format!("composite {} . {} given twice", e.g.text, e.f.text)));
        }
        b.set_compose(g, f, h);
    }
    b.build().map_err(|v| Diagnostic::validation(span, format!("category `{name}`: {v}")))
}

fn category_ast(c: &FinCat) -> CategoryAst {
    let objects = c.objects().map(|x| n(c.object_name(x))).collect();
    let identities = c
        .objects()
        .filter(|&x| c.arrow_name(c.identity(x)) != identity_name(c.object_name(x)))
        .map(|x| (n(c.object_name(x)), n(c.arrow_name(c.identity(x)))))
        .collect();
    let arrows = c
        .non_identity_arrows()
        .map(|f| ArrowDecl { name: n(c.arrow_name(f)), src: n(c.object_name(c.src(f))), tgt: n(c.object_name(c.tgt(f))) })
        .collect();
    let mut compose: Vec<Composite> = c
        .composable_pairs()
        .filter(|&(g, f)| !c.is_identity(g) && !c.is_identity(f))
        .map(|(g, f)| Composite { g: n(c.arrow_name(g)), f: n(c.arrow_name(f)), h: n(c.arrow_name(c.compose(g, f))) })
        .collect();
    compose.sort_by(|a, b| (&a.g.text, &a.f.text).cmp(&(&b.g.text, &b.f.text)));
    CategoryAst { objects, identities, arrows, compose }
}

/// Whether two categories have the same names and the same table.
fn same_named_table(a: &FinCat, b: &FinCat) -> bool {
    a.name() == b.name() && category_ast(a) == category_ast(b)
}

impl Document {
    pub fn parse(src: &str) -> Result<Document, Diagnostic> {
        let blocks = parse_blocks(src)?;
        let mut doc = Document::default();
        for b in &blocks {
            if doc.get(&b.name.text).is_some() {
                return Err(Diagnostic::syntax(b.name.span, format!("duplicate block name `{}`", b.name.text)));
            }
            let payload = doc.build(b)?;
            doc.items.push(Item { name: b.name.text.clone(), span: b.span, payload });
        }
        Ok(doc)
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    fn expect(&self, name: &Name, kind: Kind) -> Result<&Item, Diagnostic> {
        match self.get(&name.text) {
            Some(i) if i.kind() == kind => Ok(i),
            Some(i) => Err(Diagnostic::validation(name.span, format!("`{}` is a {}, not a {kind}", name.text, i.kind()))),
            None => Err(Diagnostic::validation(name.span, format!("no {kind} named `{}` above this point", name.text))),
        }
    }

    fn category(&self, name: &Name) -> Result<Arc<FinCat>, Diagnostic> {
        match &self.expect(name, Kind::Category)?.payload {
            Payload::Category(c) => Ok(c.clone()),
            _ => unreachable!(),
        }
    }

    fn functor(&self, name: &Name) -> Result<FinFunctor, Diagnostic> {
        match &self.expect(name, Kind::Functor)?.payload {
            Payload::Functor { functor, .. } => Ok(functor.clone()),
            _ => unreachable!(),
        }
    }

    fn build(&self, b: &Block) -> Result<Payload, Diagnostic> {
        let name = b.name.text.as_str();
        Ok(match &b.body {
            BlockBody::Category(c) => Payload::Category(Arc::new(build_category(name, b.span, c)?)),
            BlockBody::Functor(f) => {
                let (dom, cod) = (self.category(&f.dom)?, self.category(&f.cod)?);
                dup_check(f.objects.iter().map(|p| &p.0), "object assignment for")?;
                dup_check(f.arrows.iter().map(|p| &p.0), "arrow assignment for")?;
                let mut obj = vec![None; dom.n_objects()];
                for (x, y) in &f.objects {
                    obj[lookup_obj(&dom, x)?.0] = Some(lookup_obj(&cod, y)?);
                }
                let obj: Vec<Obj> = obj
                    .iter()
                    .enumerate()
                    .map(|(i, o)| {
                        o.ok_or_else(|| {
                            Diagnostic::validation(b.span, format!("functor `{name}` leaves `{}` unassigned", dom.object_name(Obj(i))))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let mut arr: Vec<Option<Arr>> =
                    dom.arrows().map(|a| dom.is_identity(a).then(|| cod.identity(obj[dom.src(a).0]))).collect();
                for (a, g) in &f.arrows {
                    arr[lookup_arr(&dom, a)?.0] = Some(lookup_arr(&cod, g)?);
                }
                let arr: Vec<Arr> = arr
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        a.ok_or_else(|| {
                            Diagnostic::validation(b.span, format!("functor `{name}` leaves `{}` unassigned", dom.arrow_name(Arr(i))))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let functor = FinFunctor::new(dom, cod, obj, arr)
                    .map_err(|e| Diagnostic::validation(b.span, format!("functor `{name}`: {e}")))?;
                Payload::Functor { dom: f.dom.text.clone(), cod: f.cod.text.clone(), functor }
            }
            BlockBody::Presheaf(p) => {
                let base = self.category(&p.base)?;
                dup_check(p.sets.iter().map(|s| &s.0), "set for object")?;
                dup_check(p.actions.iter().map(|s| &s.0), "action of")?;
                let mut sets = vec![Vec::new(); base.n_objects()];
                for (x, elems) in &p.sets {
                    dup_check(elems, "element")?;
                    sets[lookup_obj(&base, x)?.0] = elems.iter().map(|e| e.text.clone()).collect();
                }
                let mut given: HashMap<Arr, &Vec<(Name, Name)>> = HashMap::new();
                for (f, pairs) in &p.actions {
                    given.insert(lookup_arr(&base, f)?, pairs);
                }
                let mut actions = Vec::with_capacity(base.n_arrows());
                for f in base.arrows() {
                    let (from, to) = (&sets[base.tgt(f).0], &sets[base.src(f).0]);
                    let index = |set: &Vec<String>, e: &Name| {
                        set.iter().position(|s| *s == e.text).ok_or_else(|| {
                            Diagnostic::validation(e.span, format!("`{}` is not an element here", e.text))
                        })
                    };
                    let mut act = if base.is_identity(f) { (0..from.len()).map(Some).collect() } else { vec![None; from.len()] };
                    if let Some(pairs) = given.get(&f) {
                        for (a, v) in pairs.iter() {
                            act[index(from, a)?] = Some(index(to, v)?);
                        }
                    }
                    let act = act
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            v.ok_or_else(|| {
                                Diagnostic::validation(
                                    b.span,
                                    format!("presheaf `{name}`: action of `{}` on `{}` is missing", base.arrow_name(f), from[i]),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    actions.push(act);
                }
                let presheaf = Presheaf::new(base, sets, actions)
                    .map_err(|e| Diagnostic::validation(b.span, format!("presheaf `{name}`: {e}")))?;
                Payload::Presheaf { base: p.base.text.clone(), presheaf }
            }
            BlockBody::Displayed(d) | BlockBody::Fibration(d) => {
                let functor = self.functor(&d.display)?;
                let Some(Payload::Functor { dom, cod, .. }) = self.get(&d.display.text).map(|i| &i.payload) else {
                    unreachable!()
                };
                for (given, actual, what) in [(&d.total, dom, "total"), (&d.base, cod, "base")] {
                    if let Some(g) = given {
                        if g.text != *actual {
                            return Err(Diagnostic::validation(
                                g.span,
                                format!("`{}` displays `{dom}` over `{cod}`, not with {what} `{}`", d.display.text, g.text),
                            ));
                        }
                    }
                }
                let displayed = DisplayedCat::new(functor);
                if matches!(b.body, BlockBody::Displayed(_)) {
                    Payload::Displayed { display: d.display.text.clone(), displayed }
                } else {
                    let fibred = self.fibred(name, b.span, displayed, &d.cleaving)?;
                    Payload::Fibration { display: d.display.text.clone(), fibred }
                }
            }
            BlockBody::Chain(members) => {
                let mut fibrations = Vec::new();
                for m in members {
                    match &self.expect(m, Kind::Fibration)?.payload {
                        Payload::Fibration { fibred, .. } => fibrations.push(fibred.clone()),
                        _ => unreachable!(),
                    }
                }
                for (i, w) in fibrations.windows(2).enumerate() {
                    if **w[0].base() != **w[1].total() {
                        return Err(Diagnostic::validation(
                            members[i + 1].span,
                            format!("`{}` does not start where `{}` ends", members[i + 1].text, members[i].text),
                        ));
                    }
                }
                Payload::Chain { members: members.iter().map(|m| m.text.clone()).collect(), fibrations }
            }
        })
    }

    fn fibred(&self, name: &str, span: Span, d: DisplayedCat, entries: &[LiftEntry]) -> Result<FibredCat, Diagnostic> {
        let (t, b) = (d.total().clone(), d.base().clone());
        let mut lifts = HashMap::new();
        for e in entries {
            let key = (lookup_arr(&b, &e.along)?, lookup_obj(&t, &e.at)?);
            if lifts.insert(key, lookup_arr(&t, &e.arrow)?).is_some() {
                return Err(Diagnostic::syntax(e.along.span, format!("lift({}, {}) given twice", e.along.text, e.at.text)));
            }
        }
        let complete = b.arrows().all(|f| d.objects_over(b.tgt(f)).all(|e| lifts.contains_key(&(f, e))));
        if !complete {
            let least = find_cleaving(&d).map_err(|e| Diagnostic::validation(span, format!("fibration `{name}`: {e}")))?;
            for (k, v) in least.sorted() {
                lifts.entry(k).or_insert(v);
            }
        }
        FibredCat::new(d, Cleaving::from_map(lifts)).map_err(|e| Diagnostic::validation(span, format!("fibration `{name}`: {e}")))
    }

    pub fn to_blocks(&self) -> Vec<Block> {
        self.items
            .iter()
            .map(|i| {
                let body = match &i.payload {
                    Payload::Category(c) => BlockBody::Category(category_ast(c)),
                    Payload::Functor { dom, cod, functor: f } => {
                        let (c, d) = (f.dom(), f.cod());
                        BlockBody::Functor(FunctorAst {
                            dom: n(dom),
                            cod: n(cod),
                            objects: c.objects().map(|x| (n(c.object_name(x)), n(d.object_name(f.obj(x))))).collect(),
                            arrows: c.non_identity_arrows().map(|a| (n(c.arrow_name(a)), n(d.arrow_name(f.arr(a))))).collect(),
                        })
                    }
                    Payload::Presheaf { base, presheaf: p } => {
                        let c = p.base();
                        BlockBody::Presheaf(PresheafAst {
                            base: n(base),
                            sets: c.objects().map(|x| (n(c.object_name(x)), p.set(x).iter().map(|e| n(e)).collect())).collect(),
                            actions: c
                                .non_identity_arrows()
                                .map(|f| {
                                    let (from, to) = (p.set(c.tgt(f)), p.set(c.src(f)));
                                    let pairs = from.iter().enumerate().map(|(v, e)| (n(e), n(&to[p.act(f, v)]))).collect();
                                    (n(c.arrow_name(f)), pairs)
                                })
                                .collect(),
                        })
                    }
                    Payload::Displayed { display, .. } => {
                        BlockBody::Displayed(DisplayAst { total: None, base: None, display: n(display), cleaving: Vec::new() })
                    }
                    Payload::Fibration { display, fibred } => {
                        let (t, b) = (fibred.total(), fibred.base());
                        let cleaving = fibred
                            .cleaving()
                            .sorted()
                            .into_iter()
                            .map(|((f, e), l)| LiftEntry {
                                along: n(b.arrow_name(f)),
                                at: n(t.object_name(e)),
                                arrow: n(t.arrow_name(l)),
                            })
                            .collect();
                        BlockBody::Fibration(DisplayAst { total: None, base: None, display: n(display), cleaving })
                    }
                    Payload::Chain { members, .. } => BlockBody::Chain(members.iter().map(|m| n(m)).collect()),
                };
                Block { name: n(&i.name), span: Span::default(), body }
            })
            .collect()
    }

    pub fn print(&self) -> String {
        print_blocks(&self.to_blocks())
    }

    fn fresh(&self, hint: &str) -> String {
        if self.get(hint).is_none() {
            return hint.to_string();
        }
        (2..).map(|i| format!("{hint}_{i}")).find(|c| self.get(c).is_none()).expect("names are unbounded")
    }

    fn push(&mut self, hint: &str, payload: Payload) -> String {
        let name = self.fresh(hint);
        self.items.push(Item { name: name.clone(), span: Span::default(), payload });
        name
    }

    /// Adds `c` unless an identical category is already present, returning
    /// the block name to refer to it by.
    pub fn add_category(&mut self, c: &Arc<FinCat>) -> String {
        for i in &self.items {
            if let Payload::Category(d) = &i.payload {
                if Arc::ptr_eq(c, d) || (i.name == c.name() && same_named_table(c, d)) {
                    return i.name.clone();
                }
            }
        }
        self.push(c.name(), Payload::Category(c.clone()))
    }

    pub fn add_functor(&mut self, hint: &str, f: &FinFunctor) -> String {
        let dom = self.add_category(f.dom());
        let cod = self.add_category(f.cod());
        self.push(hint, Payload::Functor { dom, cod, functor: f.clone() })
    }

    pub fn add_presheaf(&mut self, hint: &str, p: &Presheaf) -> String {
        let base = self.add_category(p.base());
        self.push(hint, Payload::Presheaf { base, presheaf: p.clone() })
    }

    pub fn add_displayed(&mut self, hint: &str, d: &DisplayedCat) -> String {
        let display = self.add_functor(&format!("{hint}_display"), d.display());
        self.push(hint, Payload::Displayed { display, displayed: d.clone() })
    }

    pub fn add_fibration(&mut self, hint: &str, e: &FibredCat) -> String {
        let display = self.add_functor(&format!("{hint}_display"), e.display());
        self.push(hint, Payload::Fibration { display, fibred: e.clone() })
    }

    /// The named block, or else the last block of the given kind.
    pub fn select(&self, kind: Kind, name: Option<&str>) -> Result<&Item, String> {
        match name {
            Some(nm) => match self.get(nm) {
                Some(i) if i.kind() == kind => Ok(i),
                Some(i) => Err(format!("`{nm}` is a {}, not a {kind}", i.kind())),
                None => Err(format!("no block named `{nm}`")),
            },
            None => self.items.iter().rev().find(|i| i.kind() == kind).ok_or_else(|| format!("no {kind} block")),
        }
    }
}
