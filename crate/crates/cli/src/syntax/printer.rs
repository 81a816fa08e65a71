use std::fmt::Write;

use super::ast::*;
use super::lexer::is_plain;

pub fn quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(is_plain) {
        s.to_string()
    } else {
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
}

fn section(out: &mut String, key: &str, items: Vec<String>) {
    if items.len() <= 4 {
        let _ = writeln!(out, "  {key}: {};", items.join(", "));
    } else {
        let _ = writeln!(out, "  {key}:");
        let n = items.len();
        for (i, item) in items.into_iter().enumerate() {
            let _ = writeln!(out, "    {item}{}", if i + 1 == n { ";" } else { "," });
        }
    }
}

fn q(n: &Name) -> String {
    quote(&n.text)
}

fn pair(a: &Name, b: &Name) -> String {
    format!("{} -> {}", q(a), q(b))
}

fn braces(items: Vec<String>) -> String {
    format!("{{{}}}", items.join(", "))
}

pub fn print_block(b: &Block) -> String {
    let mut out = String::new();
    let name = q(&b.name);
    match &b.body {
        BlockBody::Category(c) => {
            let _ = writeln!(out, "category {name} {{");
            section(&mut out, "objects", c.objects.iter().map(q).collect());
            if !c.identities.is_empty() {
                section(&mut out, "identities", c.identities.iter().map(|(x, i)| format!("{} = {}", q(x), q(i))).collect());
            }
            if !c.arrows.is_empty() {
                section(&mut out, "arrows", c.arrows.iter().map(|a| format!("{}: {}", q(&a.name), pair(&a.src, &a.tgt))).collect());
            }
            if !c.compose.is_empty() {
                section(&mut out, "compose", c.compose.iter().map(|e| format!("{} . {} = {}", q(&e.g), q(&e.f), q(&e.h))).collect());
            }
        }
        BlockBody::Functor(f) => {
            let _ = writeln!(out, "functor {name}: {} {{", pair(&f.dom, &f.cod));
            section(&mut out, "objects", f.objects.iter().map(|(a, b)| pair(a, b)).collect());
            if !f.arrows.is_empty() {
                section(&mut out, "arrows", f.arrows.iter().map(|(a, b)| pair(a, b)).collect());
            }
        }
        BlockBody::Presheaf(p) => {
            let _ = writeln!(out, "presheaf {name} on {} {{", q(&p.base));
            section(&mut out, "sets", p.sets.iter().map(|(x, s)| format!("{} = {}", q(x), braces(s.iter().map(q).collect()))).collect());
            if !p.actions.is_empty() {
                let acts = p
                    .actions
                    .iter()
                    .map(|(f, m)| format!("{} = {}", q(f), braces(m.iter().map(|(a, b)| pair(a, b)).collect())))
                    .collect();
                section(&mut out, "actions", acts);
            }
        }
        BlockBody::Displayed(d) | BlockBody::Fibration(d) => {
            let kind = if matches!(b.body, BlockBody::Fibration(_)) { "fibration" } else { "displayed" };
            let _ = writeln!(out, "{kind} {name} {{");
            for (key, v) in [("total", &d.total), ("base", &d.base)] {
                if let Some(v) = v {
                    let _ = writeln!(out, "  {key}: {};", q(v));
                }
            }
            let _ = writeln!(out, "  display: {};", q(&d.display));
            if !d.cleaving.is_empty() {
                let lifts = d.cleaving.iter().map(|l| format!("lift({}, {}) = {}", q(&l.along), q(&l.at), q(&l.arrow))).collect();
                section(&mut out, "cleaving", lifts);
            }
        }
        BlockBody::Chain(members) => {
            let _ = writeln!(out, "chain {name} {{");
            section(&mut out, "fibrations", members.iter().map(q).collect());
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_blocks(blocks: &[Block]) -> String {
    blocks.iter().map(print_block).collect::<Vec<_>>().join("\n")
}
