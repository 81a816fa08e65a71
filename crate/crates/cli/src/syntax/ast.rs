use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: Name,
    pub src: Name,
    pub tgt: Name,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub g: Name,
    pub f: Name,
    pub h: Name,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryAst {
    pub objects: Vec<Name>,
    pub identities: Vec<(Name, Name)>,
    pub arrows: Vec<ArrowDecl>,
    pub compose: Vec<Composite>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorAst {
    pub dom: Name,
    pub cod: Name,
    pub objects: Vec<(Name, Name)>,
    pub arrows: Vec<(Name, Name)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafAst {
    pub base: Name,
    pub sets: Vec<(Name, Vec<Name>)>,
    pub actions: Vec<(Name, Vec<(Name, Name)>)>,
}

/// `lift(b01, e) = arrow`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftEntry {
    pub along: Name,
    pub at: Name,
    pub arrow: Name,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayAst {
    pub total: Option<Name>,
    pub base: Option<Name>,
    pub display: Name,
    pub cleaving: Vec<LiftEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockBody {
    Category(CategoryAst),
    Functor(FunctorAst),
    Presheaf(PresheafAst),
    Displayed(DisplayAst),
    Fibration(DisplayAst),
    Chain(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: Name,
    pub span: Span,
    pub body: BlockBody,
}
