//! Term syntax for forests over the signature `{⊔, *, ⊥, 0, ..., k-1}`.
//!
//! ```text
//! forest := term (('⊔' | '|') term)*
//! term   := atom ('*' term)?          right-associative, binds tighter than ⊔
//! atom   := digits | '⊥' | 'bot' | 's(' forest ')' | '(' forest ')'
//! ```
//!
//! `F * G` adjoins a new root labeled `F` above `G`; with `F` a color `i`
//! this is `p_i(G)`. `s(F)` is `F * ⊥`.

use thiserror::Error;

use crate::forest::{Forest, Label, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("term syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("color {color} at byte {pos} is out of range for k = {k}")]
    ColorOutOfRange { pos: usize, color: u8, k: u8 },
}

pub fn parse_term(src: &str) -> Result<Forest, TermError> {
    let mut p = TermParser {
        src,
        pos: 0,
        k: None,
    };
    p.parse_all()
}

/// Like [`parse_term`], rejecting colors `>= k`.
pub fn parse_term_k(src: &str, k: u8) -> Result<Forest, TermError> {
    let mut p = TermParser {
        src,
        pos: 0,
        k: Some(k),
    };
    p.parse_all()
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
    k: Option<u8>,
}

impl TermParser<'_> {
    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn parse_all(&mut self) -> Result<Forest, TermError> {
        let f = self.forest()?;
        self.skip_ws();
        if !self.rest().is_empty() {
            return self.syntax("trailing input");
        }
        Ok(f)
    }

    fn forest(&mut self) -> Result<Forest, TermError> {
        let mut f = self.term()?;
        while self.eat("⊔") || self.eat("|") {
            f = f.join(&self.term()?);
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<Forest, TermError> {
        let start = self.pos;
        let head = self.atom()?;
        if !self.eat("*") {
            return Ok(head);
        }
        if head.is_empty() {
            return Err(TermError::Syntax {
                pos: start,
                msg: "the root label of '*' must not be ⊥".into(),
            });
        }
        let children = self.term()?;
        Ok(Tree::wrap(Label::nested(head), children).into_forest())
    }

    fn atom(&mut self) -> Result<Forest, TermError> {
        self.skip_ws();
        if self.eat("⊥") || self.eat("bot") {
            return Ok(Forest::bottom());
        }
        if self.eat("s(") {
            let start = self.pos;
            let inner = self.forest()?;
            if !self.eat(")") {
                return self.syntax("expected ')'");
            }
            if inner.is_empty() {
                return Err(TermError::Syntax {
                    pos: start,
                    msg: "s(⊥) is not a forest label".into(),
                });
            }
            return Ok(Forest::singleton(Label::nested(inner)));
        }
        if self.eat("(") {
            let inner = self.forest()?;
            if !self.eat(")") {
                return self.syntax("expected ')'");
            }
            return Ok(inner);
        }
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.syntax("expected a color, '⊥', 's(' or '('");
        }
        self.pos += digits;
        let color: u8 = self.src[start..self.pos]
            .parse()
            .map_err(|_| TermError::Syntax {
                pos: start,
                msg: "color out of range".into(),
            })?;
        if let Some(k) = self.k {
            if color >= k {
                return Err(TermError::ColorOutOfRange {
                    pos: start,
                    color,
                    k,
                });
            }
        }
        Ok(Forest::leaf(color))
    }
}

/// Prints a forest so that [`parse_term`] returns it structurally intact.
pub fn print_term(f: &Forest) -> String {
    if f.is_empty() {
        return "⊥".into();
    }
    f.trees.iter().map(print_tree).collect::<Vec<_>>().join("⊔")
}

pub fn print_tree(t: &Tree) -> String {
    let head = match &t.label {
        Label::Color(c) => c.to_string(),
        Label::Nested(g) => {
            if t.children.is_empty() {
                return format!("s({})", print_term(g));
            }
            match g.trees.as_slice() {
                [single] if single.children.is_empty() => print_tree(single),
                _ => format!("({})", print_term(g)),
            }
        }
    };
    match t.children.trees.as_slice() {
        [] => head,
        [single] => format!("{head}*{}", print_tree(single)),
        _ => format!("{head}*({})", print_term(&t.children)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::h_equiv;

    fn p(s: &str) -> Forest {
        parse_term(s).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert!(p("⊥").is_empty());
        assert!(p("bot").is_empty());
        assert_eq!(p("0*(1⊔2)"), Tree::wrap(0, p("1|2")).into_forest());
        let t = p("(0*1)*2");
        assert_eq!(t.trees.len(), 1);
        assert_eq!(t.trees[0].label, Label::Nested(p("0*1")));
        assert_eq!(t.trees[0].children, p("2"));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("0*1|2"), p("(0*1)|2"));
        assert_eq!(p("0*1*2"), p("0*(1*2)"));
        assert_ne!(p("0*1*2"), p("(0*1)*2"));
        assert_eq!(p("s(0)"), p("0"));
        assert_eq!(p("0*⊥"), p("0"));
        assert_eq!(p(" 0 | 1 * 2 "), p("0⊔1*2"));
    }

    #[test]
    fn star_with_color_head_is_wrap() {
        let g = p("1*0|2");
        assert_eq!(p("0*(1*0|2)"), Tree::wrap(0, g).into_forest());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_term("0*"),
            Err(TermError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse_term("(0|1"), Err(TermError::Syntax { .. })));
        assert!(matches!(
            parse_term("⊥*0"),
            Err(TermError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_term("0 1"),
            Err(TermError::Syntax { pos: 2, .. })
        ));
        assert_eq!(
            parse_term_k("0*3", 3),
            Err(TermError::ColorOutOfRange {
                pos: 2,
                color: 3,
                k: 3
            })
        );
    }

    #[test]
    fn printing() {
        assert_eq!(print_term(&Forest::bottom()), "⊥");
        assert_eq!(print_term(&p("0*(1|2)")), "0*(1⊔2)");
        assert_eq!(print_term(&p("(0*1)*2")), "(0*1)*2");
        assert_eq!(print_term(&p("s(0*1)")), "s(0*1)");
        assert_eq!(print_term(&p("(0|1)*0")), "(0⊔1)*0");
        assert_eq!(print_term(&p("s(0|1)*0")), "s(0⊔1)*0");
        assert_eq!(print_term(&p("s(s(0*1))*1")), "s(s(0*1))*1");
        for s in [
            "0*(1|2*0)|1",
            "(0|1)*(0*1)|s(1*0)",
            "s(s(0|1))",
            "(s(0*1)*0)*1",
        ] {
            let f = p(s);
            assert_eq!(parse_term(&print_term(&f)).unwrap(), f, "{s}");
            assert!(h_equiv(&parse_term(&print_term(&f)).unwrap(), &f));
        }
    }
}
