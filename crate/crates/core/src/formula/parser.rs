use super::ast::{Atom, Binder, Formula, Span, Term, TermKind};
use super::Diagnostic;
use crate::universe::Sort;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    In,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Indist,
    Equal,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::In => "`in`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Indist => "`~`".into(),
            Tok::Equal => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span {
            start: self.pos,
            end: self.pos,
            line: self.line,
            column: self.column,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            while self.peek_char().is_some_and(char::is_whitespace) {
                self.bump();
            }
            let mut span = self.here();
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                '!' | '¬' => Tok::Not,
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '~' | '≡' => Tok::Indist,
                '=' => Tok::Equal,
                '∈' => Tok::In,
                '∀' => Tok::Forall,
                '∃' => Tok::Exists,
                '→' | '⇒' => Tok::Implies,
                '↔' | '⇔' => Tok::Iff,
                '-' if self.peek_char() == Some('>') => {
                    self.bump();
                    Tok::Implies
                }
                '<' if self.src[self.pos..].starts_with("->") => {
                    self.bump();
                    self.bump();
                    Tok::Iff
                }
                c if is_ident_start(c) => {
                    while self.peek_char().is_some_and(is_ident_continue) {
                        self.bump();
                    }
                    match &self.src[span.start..self.pos] {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        "in" => Tok::In,
                        word => Tok::Ident(word.to_string()),
                    }
                }
                other => {
                    return Err(Diagnostic::new(
                        span,
                        "syntax",
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            span.end = self.pos;
            out.push((tok, span));
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, Span)>,
    pos: usize,
    /// Innermost binder last.
    scope: Vec<Binder>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Span) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        Diagnostic::new(
            self.span(),
            "syntax",
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.advance().1;
                Ok((name, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let (name, span) = self.ident("a term")?;
        Ok(self.resolve(name, span))
    }

    fn resolve(&self, name: String, span: Span) -> Term {
        match self.scope.iter().rev().find(|b| b.name == name) {
            Some(b) => Term {
                sort: b.sort,
                name,
                kind: TermKind::Variable,
                span,
            },
            None => Term {
                name,
                kind: TermKind::Constant,
                sort: None,
                span,
            },
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.advance();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => self.quantifier(),
            _ => self.primary(),
        }
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let universal = self.advance().0 == Tok::Forall;
        let (name, _) = self.ident("a variable name")?;
        let mut sort = None;
        if *self.peek() == Tok::Colon {
            self.advance();
            let span = self.span();
            let (word, _) = self.ident("a sort (MICRO, MACRO or QSET)")?;
            sort = Some(Sort::parse(&word).ok_or_else(|| {
                Diagnostic::new(span, "syntax", format!("unknown sort `{word}`"))
            })?);
        }
        self.expect(Tok::Dot)?;
        let binder = Binder { name, sort };
        self.scope.push(binder.clone());
        let body = self.formula();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(if universal {
            Formula::Forall(binder, body)
        } else {
            Formula::Exists(binder, body)
        })
    }

    fn primary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::LParen {
            self.advance();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        let (name, span) = self.ident("a formula")?;
        if *self.peek() == Tok::LParen {
            match name.as_str() {
                "m" | "MM" | "Q" => {
                    self.advance();
                    let t = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Formula::Atom(match name.as_str() {
                        "m" => Atom::Micro(t),
                        "MM" => Atom::Macro(t),
                        _ => Atom::Qset(t),
                    }));
                }
                "pair" => {
                    self.advance();
                    let a = self.term()?;
                    self.expect(Tok::Comma)?;
                    let b = self.term()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::In)?;
                    let (rel, rel_span) = self.ident("a relation name")?;
                    let r = self.resolve(rel, rel_span);
                    return Ok(Formula::Atom(Atom::PairIn(a, b, r)));
                }
                _ => {
                    return Err(Diagnostic::new(
                        span,
                        "syntax",
                        format!("unknown predicate `{name}` (expected m, MM, Q or pair)"),
                    ))
                }
            }
        }
        let lhs = self.resolve(name, span);
        let op = self.peek().clone();
        match op {
            Tok::Indist | Tok::Equal | Tok::In => {
                self.advance();
                let rhs = self.term()?;
                Ok(Formula::Atom(match op {
                    Tok::Indist => Atom::Indistinguishable(lhs, rhs),
                    Tok::Equal => Atom::Equal(lhs, rhs),
                    _ => Atom::Member(lhs, rhs),
                }))
            }
            _ => Err(self.unexpected("`~`, `=` or `in`")),
        }
    }
}

/// Parses a formula in ASCII or Unicode concrete syntax.
pub fn parse(source: &str) -> Result<Formula, Diagnostic> {
    let tokens = Lexer::new(source).tokens()?;
    let mut p = Parser {
        tokens,
        pos: 0,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn v(name: &str) -> Term {
        Term::variable(name, None)
    }

    #[test]
    fn atoms() {
        assert_eq!(
            parse("x ~ y").unwrap(),
            Formula::Atom(Atom::Indistinguishable(c("x"), c("y")))
        );
        assert_eq!(parse("x = y").unwrap(), Formula::Atom(Atom::Equal(c("x"), c("y"))));
        assert_eq!(parse("x in y").unwrap(), Formula::Atom(Atom::Member(c("x"), c("y"))));
        assert_eq!(parse("m(x)").unwrap(), Formula::Atom(Atom::Micro(c("x"))));
        assert_eq!(parse("MM(x)").unwrap(), Formula::Atom(Atom::Macro(c("x"))));
        assert_eq!(parse("Q(x)").unwrap(), Formula::Atom(Atom::Qset(c("x"))));
        assert_eq!(
            parse("pair(u, v) in f").unwrap(),
            Formula::Atom(Atom::PairIn(c("u"), c("v"), c("f")))
        );
    }

    #[test]
    fn weak_pair_axiom() {
        let src = "forall x . forall y . exists z . (Q(z) & forall t . (t in z <-> (t ~ x | t ~ y)))";
        let f = parse(src).unwrap();
        let inner = Formula::and(
            Formula::Atom(Atom::Qset(v("z"))),
            Formula::Forall(
                Binder { name: "t".into(), sort: None },
                Box::new(Formula::iff(
                    Formula::Atom(Atom::Member(v("t"), v("z"))),
                    Formula::or(
                        Formula::Atom(Atom::Indistinguishable(v("t"), v("x"))),
                        Formula::Atom(Atom::Indistinguishable(v("t"), v("y"))),
                    ),
                )),
            ),
        );
        let b = |n: &str| Binder { name: n.into(), sort: None };
        let expected = Formula::Forall(
            b("x"),
            Box::new(Formula::Forall(
                b("y"),
                Box::new(Formula::Exists(b("z"), Box::new(inner))),
            )),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence() {
        let f = parse("!a ~ b & c ~ d | e ~ f -> g ~ h <-> i ~ j").unwrap();
        let at = |x: &str, y: &str| Formula::Atom(Atom::Indistinguishable(c(x), c(y)));
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::not(at("a", "b")), at("c", "d")),
                    at("e", "f"),
                ),
                at("g", "h"),
            ),
            at("i", "j"),
        );
        assert_eq!(f, expected);
        // implication associates to the right
        let f = parse("a ~ a -> b ~ b -> c ~ c").unwrap();
        assert!(matches!(f, Formula::Implies(_, ref r) if matches!(**r, Formula::Implies(..))));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse("forall x . m(x) | Q(x)").unwrap();
        assert!(matches!(f, Formula::Forall(_, ref body) if matches!(**body, Formula::Or(..))));
        let f = parse("(forall x . m(x)) | Q(x)").unwrap();
        assert!(matches!(f, Formula::Or(..)));
    }

    #[test]
    fn sorted_binders() {
        let f = parse("forall x:MICRO . x ~ y").unwrap();
        let Formula::Forall(b, body) = f else { panic!() };
        assert_eq!(b.sort, Some(Sort::Micro));
        let Formula::Atom(Atom::Indistinguishable(x, y)) = *body else { panic!() };
        assert_eq!(x.sort, Some(Sort::Micro));
        assert_eq!(x.kind, TermKind::Variable);
        assert_eq!(y.kind, TermKind::Constant);
        assert!(parse("forall x:ATOM . m(x)").is_err());
    }

    #[test]
    fn unicode_aliases() {
        let ascii = parse("forall x . exists y . (!(x ~ y) & x in y -> y ~ x <-> m(x) | Q(y))").unwrap();
        let utf8 = parse("∀ x . ∃ y . (¬(x ≡ y) ∧ x ∈ y → y ≡ x ↔ m(x) ∨ Q(y))").unwrap();
        assert_eq!(ascii, utf8);
    }

    #[test]
    fn diagnostics() {
        let d = parse("x = ").unwrap_err();
        assert_eq!(d.offset, 4);
        assert_eq!(d.code, "syntax");
        assert_eq!((d.line, d.column), (1, 5));
        let d = parse("Q(x) &\n  $").unwrap_err();
        assert_eq!((d.line, d.column), (2, 3));
        assert!(parse("P(x)").is_err());
        assert!(parse("(x ~ y").is_err());
        assert!(parse("x ~ y y").is_err());
        assert!(parse("forall . m(x)").is_err());
        let d = parse("∀ x . x = ").unwrap_err();
        assert_eq!(d.offset, "∀ x . x = ".len());
    }
}
