use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::inference::{Atom, Descriptor};
use crate::samplespace::Slot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Atom(Atom),
    /// `@name(arg)`, with the span of `arg`.
    Directive { name: String, arg: String, arg_span: SourceSpan },
    Amp,
    Plus,
    Bang,
    LParen,
    RParen,
    Bar,
    Colon,
    Semi,
    Comma,
    Eq,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Directive { name, .. } => format!("directive `@{name}`"),
            Tok::Amp => "`&`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    let at = |i: usize| input[i..].chars().next();

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '&' => Some(Tok::Amp),
            '+' => Some(Tok::Plus),
            '!' => Some(Tok::Bang),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '|' => Some(Tok::Bar),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token {
                tok,
                span: SourceSpan::new(start, start + 1),
            });
            continue;
        }

        if c == '@' {
            chars.next();
            let name_start = start + 1;
            let mut end = name_start;
            while at(end).is_some_and(is_ident_char) {
                end += 1;
            }
            let name = input[name_start..end].to_string();
            if name.is_empty() {
                return Err(ParseError::new(
                    ParseErrorKind::BadDirective,
                    SourceSpan::new(start, end.max(start + 1)),
                    "expected a directive name after `@`",
                ));
            }
            if at(end) != Some('(') {
                return Err(ParseError::new(
                    ParseErrorKind::BadDirective,
                    SourceSpan::new(start, end),
                    format!("expected `(` after `@{name}`"),
                ));
            }
            let arg_start = end + 1;
            let Some(close) = input[arg_start..].find(')') else {
                return Err(ParseError::new(
                    ParseErrorKind::UnbalancedParens,
                    SourceSpan::new(end, end + 1),
                    "unclosed `(` in directive",
                ));
            };
            let arg_end = arg_start + close;
            let arg = input[arg_start..arg_end].to_string();
            let span = SourceSpan::new(start, arg_end + 1);
            while chars.peek().is_some_and(|&(i, _)| i <= arg_end) {
                chars.next();
            }
            out.push(Token {
                tok: Tok::Directive {
                    name,
                    arg: arg.trim().to_string(),
                    arg_span: SourceSpan::new(arg_start, arg_end),
                },
                span,
            });
            continue;
        }

        if is_ident_start(c) {
            let mut end = start;
            while at(end).is_some_and(is_ident_char) {
                end += 1;
            }
            let word = &input[start..end];
            let slot = match word {
                "E" => Some(Slot::Eldest),
                "Y" => Some(Slot::Youngest),
                _ => None,
            };
            if let (Some(slot), Some('.')) = (slot, at(end)) {
                let d_start = end + 1;
                let mut d_end = d_start;
                while at(d_end).is_some_and(|c| c.is_ascii_alphanumeric() || c == '!') {
                    d_end += 1;
                }
                let code = &input[d_start..d_end];
                let span = SourceSpan::new(start, d_end);
                let descriptor = Descriptor::from_code(code).ok_or_else(|| {
                    ParseError::new(
                        ParseErrorKind::UnknownAtom,
                        span,
                        format!("unknown atom `{}` (expected m, f, fN, f!N, mN, m!N, N or !N after `.`)", &input[start..d_end]),
                    )
                })?;
                while chars.peek().is_some_and(|&(i, _)| i < d_end) {
                    chars.next();
                }
                out.push(Token {
                    tok: Tok::Atom(Atom::new(slot, descriptor)),
                    span,
                });
                continue;
            }
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            out.push(Token {
                tok: Tok::Ident(word.to_string()),
                span: SourceSpan::new(start, end),
            });
            continue;
        }

        return Err(ParseError::new(
            ParseErrorKind::Lexical,
            SourceSpan::new(start, start + c.len_utf8()),
            format!("unexpected character `{c}`"),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_symbols() {
        let toks = tokenize("P(E.f!N & !Y.N)").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("P".into()));
        assert_eq!(kinds[2], Tok::Atom(Atom::new(Slot::Eldest, Descriptor::FemaleOtherName)));
        assert_eq!(kinds[4], Tok::Bang);
        assert_eq!(kinds[5], Tok::Atom(Atom::new(Slot::Youngest, Descriptor::TheName)));
        assert_eq!(toks[2].span, SourceSpan::new(2, 7));
    }

    #[test]
    fn directives_capture_their_argument() {
        let toks = tokenize("@r( 1/50 ) @regime(i1)").unwrap();
        match &toks[0].tok {
            Tok::Directive { name, arg, .. } => {
                assert_eq!(name, "r");
                assert_eq!(arg, "1/50");
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(toks[0].span, SourceSpan::new(0, 10));
        assert_eq!(toks.len(), 2);
    }

    #[test]
    fn lexical_errors_have_spans() {
        let e = tokenize("P(E.x)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownAtom);
        assert_eq!(e.span, SourceSpan::new(2, 5));
        let e = tokenize("P(E.m # Y.m)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lexical);
        assert_eq!(e.span, SourceSpan::new(6, 7));
        let e = tokenize("é").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(0, 2));
        assert_eq!(tokenize("@r(1/2").unwrap_err().kind, ParseErrorKind::UnbalancedParens);
    }
}
