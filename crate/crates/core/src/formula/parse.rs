//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Tokens: `T` `F` `&` `|` `->` `-<` `<->` `~` `!` `<*>` `[]` `<>` `[*]`.
//! Binding, tightest first: prefix operators, `&`, `|`, `->`/`-<` (right
//! associative, same level), then `<->` (right associative).

use super::{is_atom_name, Formula};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Top,
    Bot,
    Atom(String),
    And,
    Or,
    Imp,
    Coimp,
    Iff,
    Neg,
    Coneg,
    BDia,
    WBox,
    WDia,
    BBox,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Coimp => "`-<`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Neg => "`~`".into(),
            Tok::Coneg => "`!`".into(),
            Tok::BDia => "`<*>`".into(),
            Tok::WBox => "`[]`".into(),
            Tok::WDia => "`<>`".into(),
            Tok::BBox => "`[*]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    // maximal munch: longer operators are tried first
    const FIXED: &[(&str, Tok)] = &[
        ("<->", Tok::Iff),
        ("<*>", Tok::BDia),
        ("[*]", Tok::BBox),
        ("->", Tok::Imp),
        ("-<", Tok::Coimp),
        ("<>", Tok::WDia),
        ("[]", Tok::WBox),
        ("&", Tok::And),
        ("|", Tok::Or),
        ("~", Tok::Neg),
        ("!", Tok::Coneg),
        ("(", Tok::LParen),
        (")", Tok::RParen),
    ];
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        for (lit, tok) in FIXED {
            if text[i..].starts_with(lit) {
                out.push((i, tok.clone()));
                i += lit.len();
                continue 'outer;
            }
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "T" => Tok::Top,
                "F" => Tok::Bot,
                w if is_atom_name(w) => Tok::Atom(w.to_string()),
                w => {
                    return Err(err(
                        start,
                        format!("`{w}` is not an atom (atoms match [a-z][A-Za-z0-9_]*)"),
                    ))
                }
            };
            out.push((start, tok));
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(err(i, format!("unexpected character `{ch}`")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.peek() == Some(&Tok::Iff) {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        match self.peek() {
            Some(Tok::Imp) => {
                self.bump();
                Ok(Formula::imp(lhs, self.imp()?))
            }
            Some(Tok::Coimp) => {
                self.bump();
                Ok(Formula::coimp(lhs, self.imp()?))
            }
            _ => Ok(lhs),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Top) => Ok(Formula::Top),
            Some(Tok::Bot) => Ok(Formula::Bot),
            Some(Tok::Atom(a)) => Ok(Formula::Atom(a)),
            Some(Tok::Neg) => Ok(Formula::neg(self.unary()?)),
            Some(Tok::Coneg) => Ok(Formula::coneg(self.unary()?)),
            Some(Tok::BDia) => Ok(Formula::bdia(self.unary()?)),
            Some(Tok::WBox) => Ok(Formula::wbox(self.unary()?)),
            Some(Tok::WDia) => Ok(Formula::wdia(self.unary()?)),
            Some(Tok::BBox) => Ok(Formula::bbox(self.unary()?)),
            Some(Tok::LParen) => {
                let inner = self.iff()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(err(
                        self.toks[self.pos - 1].0,
                        format!("expected `)`, found {}", t.describe()),
                    )),
                    None => Err(err(self.end, "expected `)`, found end of input")),
                }
            }
            Some(t) => Err(err(
                offset,
                format!("expected a formula, found {}", t.describe()),
            )),
            None => Err(err(offset, "expected a formula, found end of input")),
        }
    }
}

/// Parses the ASCII surface syntax into a [`Formula`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.iff()?;
    if let Some((offset, tok)) = parser.toks.get(parser.pos) {
        return Err(err(
            *offset,
            format!("unexpected {} after complete formula", tok.describe()),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn parses_axiom_shapes() {
        assert_eq!(
            parse("p -> (q | (p -< q))").unwrap(),
            Formula::imp(p(), Formula::or(q(), Formula::coimp(p(), q())))
        );
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(
            parse("<*>[]p -> p").unwrap(),
            Formula::imp(Formula::bdia(Formula::wbox(p())), p())
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("p & q | p -> q").unwrap(),
            Formula::imp(Formula::or(Formula::and(p(), q()), p()), q())
        );
        assert_eq!(
            parse("p -> q -> p").unwrap(),
            Formula::imp(p(), Formula::imp(q(), p()))
        );
        assert_eq!(
            parse("p -< q -> p").unwrap(),
            Formula::coimp(p(), Formula::imp(q(), p()))
        );
        assert_eq!(
            parse("~p & q").unwrap(),
            Formula::and(Formula::neg(p()), q())
        );
        assert_eq!(parse("p<->q").unwrap(), Formula::iff(p(), q()));
        assert_eq!(
            parse("p -> q <-> q").unwrap(),
            Formula::iff(Formula::imp(p(), q()), q())
        );
    }

    #[test]
    fn modalities_and_sugar() {
        assert_eq!(parse("<>p").unwrap(), Formula::wdia(p()));
        assert_eq!(parse("[*]p").unwrap(), Formula::bbox(p()));
        assert_eq!(parse("!p").unwrap(), Formula::coneg(p()));
        assert_eq!(
            parse("[*]<>[]<*>p").unwrap(),
            Formula::bbox(Formula::wdia(Formula::wbox(Formula::bdia(p()))))
        );
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse("  ( p\t->\nq )").unwrap(), parse("p->q").unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("p -> ").unwrap_err();
        assert_eq!(e.offset, 5);
        let e = parse("p & Q").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse("(p").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse("p q").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse("p $ q").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(parse("").is_err());
        assert!(parse("p - q").is_err());
    }
}
