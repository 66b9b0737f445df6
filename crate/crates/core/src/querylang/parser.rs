use super::ast::{Binding, Expr, Query, QueryKind};
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::inference::{Atom, EventExpr};
use crate::ratfunc::parse_rational;
use crate::samplespace::{Gender, RegimeKind};

const KEYWORDS: [&str; 8] = ["P", "odds", "bf", "let", "chain", "table", "true", "false"];
const MAX_DEPTH: usize = 200;

pub fn parse(input: &str) -> Result<Query, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser::new(&tokens, input.len());
    p.query()
}

/// Parses a bare event expression (no directives, no labels).
pub fn parse_event(input: &str) -> Result<EventExpr, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser::new(&tokens, input.len());
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e.resolve(&[]))
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    input_len: usize,
    labels: Vec<String>,
    depth: usize,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token], input_len: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            input_len,
            labels: Vec::new(),
            depth: 0,
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn end_span(&self) -> SourceSpan {
        SourceSpan::new(self.input_len, self.input_len)
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) if t.tok == Tok::RParen => ParseError::new(
                ParseErrorKind::UnbalancedParens,
                t.span,
                format!("unmatched `)`; expected {what}"),
            ),
            Some(t) => ParseError::new(
                ParseErrorKind::Unexpected,
                t.span,
                format!("expected {what}, found {}", t.tok.describe()),
            ),
            None => ParseError::new(
                ParseErrorKind::Unexpected,
                self.end_span(),
                format!("expected {what}, found end of input"),
            ),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<&'t Token, ParseError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn close(&mut self, open: SourceSpan) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == Tok::RParen => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ParseError::new(
                ParseErrorKind::UnbalancedParens,
                open,
                "unclosed `(`",
            )),
            Some(_) => Err(self.unexpected("`)`")),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn query(&mut self) -> Result<Query, ParseError> {
        let mut settings = Settings::default();
        let mut bindings = Vec::new();
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Directive { .. }) => self.directive(&mut settings)?,
                Some(Tok::Ident(w)) if w == "let" => bindings.push(self.binding()?),
                _ => break,
            }
        }
        let kind = self.form()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Directive { .. })) {
            self.directive(&mut settings)?;
        }
        self.expect_end()?;
        Ok(Query {
            regime: settings.regime.unwrap_or(RegimeKind::UniqueNames),
            named_gender: settings.named.unwrap_or(Gender::Female),
            r: settings.r,
            bindings,
            kind,
        })
    }

    fn directive(&mut self, settings: &mut Settings) -> Result<(), ParseError> {
        let t = self.bump().expect("caller peeked a directive");
        let Tok::Directive { name, arg, arg_span } = &t.tok else {
            unreachable!()
        };
        let bad = |msg: String| ParseError::new(ParseErrorKind::BadDirective, *arg_span, msg);
        let dup = || {
            ParseError::new(
                ParseErrorKind::BadDirective,
                t.span,
                format!("duplicate directive `@{name}`"),
            )
        };
        match name.as_str() {
            "regime" => {
                if settings.regime.is_some() {
                    return Err(dup());
                }
                settings.regime = Some(arg.parse::<RegimeKind>().map_err(bad)?);
            }
            "r" => {
                if settings.r.is_some() {
                    return Err(dup());
                }
                settings.r = Some(parse_rational(arg).map_err(|e| bad(e.to_string()))?);
            }
            "named" => {
                if settings.named.is_some() {
                    return Err(dup());
                }
                settings.named = Some(match arg.as_str() {
                    "f" => Gender::Female,
                    "m" => Gender::Male,
                    other => return Err(bad(format!("expected `f` or `m`, found `{other}`"))),
                });
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::BadDirective,
                    t.span,
                    format!("unknown directive `@{other}` (expected @regime, @r or @named)"),
                ))
            }
        }
        Ok(())
    }

    fn binding(&mut self) -> Result<Binding, ParseError> {
        self.bump();
        let name_tok = match self.peek() {
            Some(t @ Token { tok: Tok::Ident(_), .. }) => t,
            _ => return Err(self.unexpected("a label name")),
        };
        let Tok::Ident(name) = &name_tok.tok else { unreachable!() };
        if KEYWORDS.contains(&name.as_str()) {
            return Err(ParseError::new(
                ParseErrorKind::Unexpected,
                name_tok.span,
                format!("`{name}` is a keyword and cannot be a label"),
            ));
        }
        if self.labels.contains(name) {
            return Err(ParseError::new(
                ParseErrorKind::DuplicateLabel,
                name_tok.span,
                format!("label `{name}` is already bound"),
            ));
        }
        self.pos += 1;
        self.expect(Tok::Eq, "`=`")?;
        let expr = self.expr()?;
        self.expect(Tok::Semi, "`;` after a binding")?;
        self.labels.push(name.clone());
        Ok(Binding {
            name: name.clone(),
            expr,
        })
    }

    fn form(&mut self) -> Result<QueryKind, ParseError> {
        let word = match self.peek() {
            Some(Token { tok: Tok::Ident(w), .. }) => w.as_str(),
            _ => return Err(self.unexpected("a query form (P, odds, bf, chain or table)")),
        };
        match word {
            "P" => {
                self.bump();
                let open = self.expect(Tok::LParen, "`(` after `P`")?.span;
                let a = self.expr()?;
                let kind = if self.eat(&Tok::Bar) {
                    let b = self.expr()?;
                    self.reject_second_bar()?;
                    QueryKind::Cond(a, b)
                } else {
                    QueryKind::Prob(a)
                };
                self.close(open)?;
                Ok(kind)
            }
            "odds" | "bf" => {
                let is_odds = word == "odds";
                self.bump();
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let a = self.expr()?;
                self.expect(Tok::Colon, "`:` between the two hypotheses")?;
                let c = self.expr()?;
                self.expect(Tok::Bar, "`|` before the evidence")?;
                let b = self.expr()?;
                self.reject_second_bar()?;
                self.close(open)?;
                Ok(if is_odds {
                    QueryKind::Odds { a, c, b }
                } else {
                    QueryKind::BayesFactor { a, c, b }
                })
            }
            "chain" => {
                self.bump();
                let open = self.expect(Tok::LParen, "`(` after `chain`")?.span;
                let mut atoms = vec![self.atom()?];
                while self.eat(&Tok::Comma) {
                    atoms.push(self.atom()?);
                }
                self.close(open)?;
                Ok(QueryKind::Factorize(atoms))
            }
            "table" => {
                self.bump();
                if let Some(open) = self.peek().filter(|t| t.tok == Tok::LParen).map(|t| t.span) {
                    self.bump();
                    self.close(open)?;
                }
                Ok(QueryKind::Table)
            }
            _ => Err(self.unexpected("a query form (P, odds, bf, chain or table)")),
        }
    }

    fn reject_second_bar(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == Tok::Bar => Err(ParseError::new(
                ParseErrorKind::DuplicateBar,
                t.span,
                "`|` may appear only once; use `&` to combine conditions",
            )),
            _ => Ok(()),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Atom(a), .. }) => {
                self.pos += 1;
                Ok(*a)
            }
            _ => Err(self.unexpected("an atom such as `E.f`")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.term()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn descend(&mut self, span: SourceSpan) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(
                ParseErrorKind::TooDeep,
                span,
                format!("expression nested deeper than {MAX_DEPTH} levels"),
            ));
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(t) = self.peek().filter(|t| t.tok == Tok::Bang) {
            self.bump();
            self.descend(t.span)?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Not(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(t) = self.peek() else {
            return Err(self.unexpected("an event"));
        };
        match &t.tok {
            Tok::Atom(a) => {
                self.pos += 1;
                Ok(Expr::Atom(*a))
            }
            Tok::LParen => {
                self.pos += 1;
                self.descend(t.span)?;
                let e = self.expr()?;
                self.close(t.span)?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Ident(w) if w == "true" => {
                self.pos += 1;
                Ok(Expr::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.pos += 1;
                Ok(Expr::False)
            }
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                if !self.labels.contains(w) {
                    return Err(ParseError::new(
                        ParseErrorKind::UnresolvedLabel,
                        t.span,
                        format!("`{w}` is not a bound label"),
                    ));
                }
                self.pos += 1;
                Ok(Expr::Label(w.clone()))
            }
            _ => Err(self.unexpected("an event")),
        }
    }
}

#[derive(Default)]
struct Settings {
    regime: Option<RegimeKind>,
    r: Option<crate::ratfunc::Rational>,
    named: Option<Gender>,
}
