//! Text form of decorated forests.
//!
//! ```text
//! forest     := 'empty' | tree (',' tree)*
//! tree       := 'T(' decoration ')' ('[' forest ']')?
//! decoration := item (',' item)*      item := 's=' rational | 'l=' integer
//! ```
//!
//! Whitespace between tokens is ignored. Vertices without an `l=` get the
//! labels `1, 2, ...` in the order they are written, skipping labels given
//! explicitly.

use std::collections::BTreeSet;

use rug::Rational;

use crate::algebra::{EsLetter, Forest, Tree};
use crate::numerics::parse_rational;
use crate::{Error, Result};

struct RawTree {
    label: Option<u32>,
    weight: Rational,
    children: Vec<RawTree>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected {token:?}"))
        }
    }

    fn forest(&mut self) -> Result<Vec<RawTree>> {
        let mut trees = vec![self.tree()?];
        while self.eat(",") {
            trees.push(self.tree()?);
        }
        Ok(trees)
    }

    fn tree(&mut self) -> Result<RawTree> {
        self.expect("T(")?;
        let (label, weight) = self.decoration()?;
        self.expect(")")?;
        let children = if self.eat("[") {
            let c = self.forest()?;
            self.expect("]")?;
            c
        } else {
            Vec::new()
        };
        Ok(RawTree { label, weight, children })
    }

    /// The text up to the next `,` or `)`.
    fn value(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let end = r.find([',', ')']).unwrap_or(r.len());
        self.pos += end;
        r[..end].trim()
    }

    fn decoration(&mut self) -> Result<(Option<u32>, Rational)> {
        let (mut label, mut weight) = (None, None);
        loop {
            let at = self.pos;
            if self.eat("s=") {
                if weight.is_some() {
                    return self.err("weight given twice");
                }
                let v = self.value();
                match parse_rational(v) {
                    Ok(w) => weight = Some(w),
                    Err(_) => return Err(Error::Syntax { pos: at, msg: format!("bad weight {v:?}") }),
                }
            } else if self.eat("l=") {
                if label.is_some() {
                    return self.err("label given twice");
                }
                let v = self.value();
                match v.parse::<u32>() {
                    Ok(l) if l >= 1 => label = Some(l),
                    _ => {
                        return Err(Error::Syntax {
                            pos: at, msg: format!("bad label {v:?}: labels are integers ≥ 1")
                        })
                    }
                }
            } else {
                return self.err("expected s= or l=");
            }
            if !self.eat(",") {
                break;
            }
        }
        match weight {
            Some(w) => Ok((label, w)),
            None => self.err("missing weight s="),
        }
    }
}

fn explicit_labels(trees: &[RawTree], seen: &mut BTreeSet<u32>) -> Result<()> {
    for t in trees {
        if let Some(l) = t.label {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        explicit_labels(&t.children, seen)?;
    }
    Ok(())
}

fn assign(trees: Vec<RawTree>, taken: &BTreeSet<u32>, next: &mut u32) -> Vec<Tree<EsLetter>> {
    trees
        .into_iter()
        .map(|t| {
            let label = t.label.unwrap_or_else(|| {
                *next += 1;
                while taken.contains(next) {
                    *next += 1;
                }
                *next
            });
            let kids = assign(t.children, taken, next);
            Tree::new(EsLetter::new(label, t.weight), kids)
        })
        .collect()
}

/// Parses the text form; the inverse of `Forest`'s `Display` on labelled forests.
pub fn parse_forest(text: &str) -> Result<Forest<EsLetter>> {
    let mut p = Parser { text, pos: 0 };
    if p.eat("empty") {
        p.skip_ws();
        if p.pos < text.len() {
            return p.err("trailing input");
        }
        return Ok(Forest::empty());
    }
    let raw = p.forest()?;
    p.skip_ws();
    if p.pos < text.len() {
        return p.err("trailing input");
    }
    let mut taken = BTreeSet::new();
    explicit_labels(&raw, &mut taken)?;
    let mut next = 0;
    Ok(Forest::new(assign(raw, &taken, &mut next)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_and_corolla() {
        let f = parse_forest("T(s=2)[T(s=3)]").unwrap();
        assert_eq!(f, Tree::ladder(&[EsLetter::int(1, 2), EsLetter::int(2, 3)]).unwrap().into());
        let f = parse_forest("T(s=2)[T(s=3),T(s=4)]").unwrap();
        let t = &f.trees()[0];
        assert_eq!(t.decoration, EsLetter::int(1, 2));
        assert_eq!(t.children().len(), 2);
        assert_eq!(f.to_string(), "T(l=1,s=2)[T(l=2,s=3),T(l=3,s=4)]");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_forest("T(s=2)[T(s=2)"), Err(Error::Syntax { pos: 13, .. })));
        assert!(matches!(parse_forest("T(l=1,s=2),T(l=1,s=0)"), Err(Error::DuplicateLabel(1))));
        assert!(matches!(parse_forest("T(l=1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest("T(s=x)"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_forest("T(s=1) junk"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_forest(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn labels_skip_explicit_ones() {
        let f = parse_forest("T(s=0)[T(l=1,s=1), T(s=-1/2)]").unwrap();
        assert_eq!(f.to_string(), "T(l=2,s=0)[T(l=1,s=1),T(l=3,s=-1/2)]");
        assert_eq!(parse_forest(" empty ").unwrap(), Forest::empty());
    }

    #[test]
    fn round_trip() {
        for text in ["T(l=1,s=2)[T(l=2,s=3),T(l=3,s=4)]", "T(l=4,s=-1),T(l=2,s=1/3)[T(l=7,s=0)]", "empty"] {
            let f = parse_forest(text).unwrap();
            assert_eq!(parse_forest(&f.to_string()).unwrap(), f);
        }
    }
}
