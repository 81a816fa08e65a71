//! Graphviz export. Objects become nodes and non-identity arrows edges;
//! displayed categories are clustered by the base object they lie over, and
//! the chosen lifts of a fibration are drawn bold.

use std::collections::HashSet;
use std::fmt::Write;

use fibkit::nerve::elements;
use fibkit::{DisplayedCat, FibredCat, FinCat};

use crate::document::{Item, Payload};

fn id(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn category_dot(name: &str, c: &FinCat) -> String {
    let mut out = format!("digraph {} {{\n", id(name));
    for x in c.objects() {
        let _ = writeln!(out, "  {};", id(c.object_name(x)));
    }
    for f in c.non_identity_arrows() {
        let (s, t) = (c.object_name(c.src(f)), c.object_name(c.tgt(f)));
        let _ = writeln!(out, "  {} -> {} [label={}];", id(s), id(t), id(c.arrow_name(f)));
    }
    out.push_str("}\n");
    out
}

fn clustered(name: &str, d: &DisplayedCat, lifts: &HashSet<usize>) -> String {
    let (t, b) = (d.total(), d.base());
    let mut out = format!("digraph {} {{\n", id(name));
    for o in b.objects() {
        let _ = writeln!(out, "  subgraph {} {{", id(&format!("cluster_{}", o.0)));
        let _ = writeln!(out, "    label={};", id(b.object_name(o)));
        for e in d.objects_over(o) {
            let _ = writeln!(out, "    {};", id(t.object_name(e)));
        }
        out.push_str("  }\n");
    }
    for f in t.non_identity_arrows() {
        let (s, u) = (t.object_name(t.src(f)), t.object_name(t.tgt(f)));
        let style = if lifts.contains(&f.0) { ", style=bold, color=blue" } else { "" };
        let _ = writeln!(out, "  {} -> {} [label={}{style}];", id(s), id(u), id(t.arrow_name(f)));
    }
    out.push_str("}\n");
    out
}

pub fn displayed_dot(name: &str, d: &DisplayedCat) -> String {
    clustered(name, d, &HashSet::new())
}

pub fn fibration_dot(name: &str, e: &FibredCat) -> String {
    let lifts = e.cleaving().sorted().values().map(|a| a.0).collect();
    clustered(name, e.displayed(), &lifts)
}

/// DOT for a document block; presheaves are drawn through their category of
/// elements.
pub fn export_dot(item: &Item) -> Result<String, String> {
    match &item.payload {
        Payload::Category(c) => Ok(category_dot(&item.name, c)),
        Payload::Displayed { displayed, .. } => Ok(displayed_dot(&item.name, displayed)),
        Payload::Fibration { fibred, .. } => Ok(fibration_dot(&item.name, fibred)),
        Payload::Presheaf { presheaf, .. } => {
            let el = elements(presheaf);
            Ok(displayed_dot(&item.name, &DisplayedCat::new(el.projection)))
        }
        _ => Err(format!("cannot draw the {} `{}`", item.kind(), item.name)),
    }
}
