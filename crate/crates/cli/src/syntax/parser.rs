use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Span};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: Span,
}

type P<T> = Result<T, Diagnostic>;

pub fn parse_blocks(src: &str) -> P<Vec<Block>> {
    let toks = lex(src)?;
    let lines = src.lines().count().max(1);
    let end = Span { line: lines, col: src.lines().last().map_or(1, |l| l.chars().count() + 1) };
    let mut p = Parser { toks, pos: 0, end };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.block()?);
    }
    Ok(out)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn unexpected<T>(&self, wanted: &str) -> P<T> {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        };
        Err(Diagnostic::syntax(self.span(), format!("expected {wanted}, found {found}")))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> P<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn name(&mut self) -> P<Name> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), span }) => {
                let n = Name { text: s.clone(), span: *span };
                self.pos += 1;
                Ok(n)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> P<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    /// A comma separated list, ended by `;` or (without consuming it) `}`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> P<T>) -> P<Vec<T>> {
        let mut out = Vec::new();
        loop {
            if self.eat(&Tok::Semi) || self.peek() == Some(&Tok::RBrace) {
                return Ok(out);
            }
            out.push(item(self)?);
            if !self.eat(&Tok::Comma) && self.peek() != Some(&Tok::Semi) && self.peek() != Some(&Tok::RBrace) {
                return self.unexpected("`,`, `;` or `}`");
            }
        }
    }

    /// `{ section: items ; ... }`, dispatching each section to `section`.
    fn sections(&mut self, allowed: &[&str], mut section: impl FnMut(&mut Self, &str) -> P<()>) -> P<()> {
        self.expect(&Tok::LBrace)?;
        let mut seen: Vec<String> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let key = self.name()?;
            if !allowed.contains(&key.text.as_str()) {
                return Err(Diagnostic::syntax(
                    key.span,
                    format!("unknown section `{}`; expected one of {}", key.text, allowed.join(", ")),
                ));
            }
            if seen.contains(&key.text) {
                return Err(Diagnostic::syntax(key.span, format!("section `{}` given twice", key.text)));
            }
            seen.push(key.text.clone());
            self.expect(&Tok::Colon)?;
            section(self, &key.text)?;
        }
        Ok(())
    }

    fn maps_to(&mut self) -> P<(Name, Name)> {
        let a = self.name()?;
        self.expect(&Tok::Arrow)?;
        Ok((a, self.name()?))
    }

    fn block(&mut self) -> P<Block> {
        let span = self.span();
        let kind = self.name()?;
        let name = self.name()?;
        let body = match kind.text.as_str() {
            "category" => {
                let mut c = CategoryAst::default();
                self.sections(&["objects", "identities", "arrows", "compose"], |p, key| {
                    match key {
                        "objects" => c.objects = p.list(Self::name)?,
                        "identities" => {
                            c.identities = p.list(|p| {
                                let x = p.name()?;
                                p.expect(&Tok::Eq)?;
                                Ok((x, p.name()?))
                            })?
                        }
                        "arrows" => {
                            c.arrows = p.list(|p| {
                                let name = p.name()?;
                                p.expect(&Tok::Colon)?;
                                let (src, tgt) = p.maps_to()?;
                                Ok(ArrowDecl { name, src, tgt })
                            })?
                        }
                        _ => {
                            c.compose = p.list(|p| {
                                let g = p.name()?;
                                p.expect(&Tok::Dot)?;
                                let f = p.name()?;
                                p.expect(&Tok::Eq)?;
                                Ok(Composite { g, f, h: p.name()? })
                            })?
                        }
                    }
                    Ok(())
                })?;
                BlockBody::Category(c)
            }
            "functor" => {
                self.expect(&Tok::Colon)?;
                let (dom, cod) = self.maps_to()?;
                let (mut objects, mut arrows) = (Vec::new(), Vec::new());
                self.sections(&["objects", "arrows"], |p, key| {
                    let items = p.list(Self::maps_to)?;
                    if key == "objects" {
                        objects = items;
                    } else {
                        arrows = items;
                    }
                    Ok(())
                })?;
                BlockBody::Functor(FunctorAst { dom, cod, objects, arrows })
            }
            "presheaf" => {
                self.keyword("on")?;
                let base = self.name()?;
                let (mut sets, mut actions) = (Vec::new(), Vec::new());
                self.sections(&["sets", "actions"], |p, key| {
                    if key == "sets" {
                        sets = p.list(|p| {
                            let x = p.name()?;
                            p.expect(&Tok::Eq)?;
                            p.expect(&Tok::LBrace)?;
                            let mut elems = Vec::new();
                            while !p.eat(&Tok::RBrace) {
                                elems.push(p.name()?);
                                if !p.eat(&Tok::Comma) && p.peek() != Some(&Tok::RBrace) {
                                    return p.unexpected("`,` or `}`");
                                }
                            }
                            Ok((x, elems))
                        })?;
                    } else {
                        actions = p.list(|p| {
                            let f = p.name()?;
                            p.expect(&Tok::Eq)?;
                            p.expect(&Tok::LBrace)?;
                            let mut pairs = Vec::new();
                            while !p.eat(&Tok::RBrace) {
                                pairs.push(p.maps_to()?);
                                if !p.eat(&Tok::Comma) && p.peek() != Some(&Tok::RBrace) {
                                    return p.unexpected("`,` or `}`");
                                }
                            }
                            Ok((f, pairs))
                        })?;
                    }
                    Ok(())
                })?;
                BlockBody::Presheaf(PresheafAst { base, sets, actions })
            }
            "displayed" | "fibration" => {
                let fib = kind.text == "fibration";
                let allowed: &[&str] =
                    if fib { &["total", "base", "display", "cleaving"] } else { &["total", "base", "display"] };
                let (mut total, mut base, mut display, mut cleaving) = (None, None, None, Vec::new());
                self.sections(allowed, |p, key| {
                    match key {
                        "total" | "base" | "display" => {
                            let n = p.name()?;
                            if !p.eat(&Tok::Semi) && p.peek() != Some(&Tok::RBrace) {
                                return p.unexpected("`;`");
                            }
                            *match key {
                                "total" => &mut total,
                                "base" => &mut base,
                                _ => &mut display,
                            } = Some(n);
                        }
                        _ => {
                            cleaving = p.list(|p| {
                                p.keyword("lift")?;
                                p.expect(&Tok::LParen)?;
                                let along = p.name()?;
                                p.expect(&Tok::Comma)?;
                                let at = p.name()?;
                                p.expect(&Tok::RParen)?;
                                p.expect(&Tok::Eq)?;
                                Ok(LiftEntry { along, at, arrow: p.name()? })
                            })?
                        }
                    }
                    Ok(())
                })?;
                let Some(display) = display else {
                    return Err(Diagnostic::syntax(span, format!("{} `{}` has no `display` section", kind.text, name.text)));
                };
                let d = DisplayAst { total, base, display, cleaving };
                if fib {
                    BlockBody::Fibration(d)
                } else {
                    BlockBody::Displayed(d)
                }
            }
            "chain" => {
                let mut members = Vec::new();
                self.sections(&["fibrations"], |p, _| {
                    members = p.list(Self::name)?;
                    Ok(())
                })?;
                BlockBody::Chain(members)
            }
            other => {
                return Err(Diagnostic::syntax(
                    kind.span,
                    format!("unknown block kind `{other}`; expected category, functor, presheaf, displayed, fibration or chain"),
                ))
            }
        };
        Ok(Block { name, span, body })
    }
}
