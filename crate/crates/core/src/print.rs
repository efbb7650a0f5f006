use crate::term::{Color, Term};
use std::fmt::Write;

/// Render a term in the concrete syntax accepted by [`crate::parse::parse`].
/// Chains of one operator are rendered without inner parentheses (the parser
/// reassociates to the right); everything else is parenthesized.
pub fn render(t: &Term) -> String {
    let mut s = String::new();
    go(t, &mut s, None);
    s
}

#[derive(PartialEq, Clone, Copy)]
enum Ctx {
    Seq(Color),
    Tensor(Color),
}

fn go(t: &Term, out: &mut String, parent: Option<Ctx>) {
    match t {
        Term::Gen(k, c) => {
            let _ = write!(out, "{}{}", k.token(), c.sign());
        }
        Term::Rel(name, c) => {
            let tag = match c {
                Color::White => "o",
                Color::Black => "b",
            };
            let _ = write!(out, "{name}^{tag}");
        }
        Term::Sugar(fam, c, n, m) => {
            let _ = write!(out, "{}{}@{}", fam.token(), c.sign(), n);
            if let Some(m) = m {
                let _ = write!(out, ",{m}");
            }
        }
        Term::Seq(c, l, r) => {
            let me = Ctx::Seq(*c);
            let wrap = parent.map_or(false, |p| p != me);
            if wrap {
                out.push('(');
            }
            // Right-chains print flat; a left-nested child always gets parens.
            go_child(l, out, me);
            let _ = write!(out, " ;{} ", c.sign());
            go(r, out, Some(me));
            if wrap {
                out.push(')');
            }
        }
        Term::Tensor(c, l, r) => {
            let me = Ctx::Tensor(*c);
            let wrap = parent.map_or(false, |p| p != me);
            if wrap {
                out.push('(');
            }
            go_child(l, out, me);
            let _ = write!(out, " *{} ", c.sign());
            go(r, out, Some(me));
            if wrap {
                out.push(')');
            }
        }
    }
}

/// Left children of an operator never continue the chain: parenthesize any
/// compound left child so `(a ;+ b) ;+ c` round-trips structurally.
fn go_child(t: &Term, out: &mut String, me: Ctx) {
    match t {
        Term::Seq(..) | Term::Tensor(..) => {
            out.push('(');
            go(t, out, None);
            out.push(')');
        }
        _ => go(t, out, Some(me)),
    }
}
