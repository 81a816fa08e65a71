//! Canonical names for derived objects and arrows.

/// `(p1,p2,...)`
pub fn tuple<S: AsRef<str>>(parts: &[S]) -> String {
    wrap('(', ')', parts)
}

/// `[p1,p2,...]`
pub fn list<S: AsRef<str>>(parts: &[S]) -> String {
    wrap('[', ']', parts)
}

fn wrap<S: AsRef<str>>(open: char, close: char, parts: &[S]) -> String {
    let mut out = String::new();
    out.push(open);
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(p.as_ref());
    }
    out.push(close);
    out
}

pub fn identity_name(object: &str) -> String {
    format!("1_{object}")
}
