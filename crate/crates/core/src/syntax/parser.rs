//! Hand-written recursive-descent parser for the clingo-style concrete syntax.

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Var(String),
    Int(i128),
    Inf,
    Sup,
    False,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    If,
    Dot,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Bar,
    Rel(Relation),
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) | Token::Var(s) => format!("'{s}'"),
            Token::Int(n) => format!("'{n}'"),
            Token::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        let advance = |n: usize, i: &mut usize, column: &mut usize| {
            *i += n;
            *column += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut column);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let token = if c.is_ascii_digit() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut column);
            }
            let digits: String = chars[begin..i].iter().collect();
            let value: i128 = digits
                .parse()
                .map_err(|_| err(start_line, start_column, format!("integer {digits} out of range")))?;
            // one past i64::MAX is allowed so that the minimum can be negated
            if value > i64::MAX as i128 + 1 {
                return Err(err(start_line, start_column, format!("integer {digits} out of range")));
            }
            out.push(Spanned {
                token: Token::Int(value),
                line: start_line,
                column: start_column,
            });
            continue;
        } else if c.is_alphabetic() || c == '_' || c == '#' {
            let begin = i;
            advance(1, &mut i, &mut column);
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(1, &mut i, &mut column);
            }
            let word: String = chars[begin..i].iter().collect();
            let token = match word.as_str() {
                "#inf" => Token::Inf,
                "#sup" => Token::Sup,
                "#false" => Token::False,
                w if w.starts_with('#') => {
                    return Err(err(start_line, start_column, format!("unsupported directive {w}")))
                }
                w if w.starts_with('_') => {
                    return Err(err(start_line, start_column, format!("anonymous variables are not supported: {w}")))
                }
                w if w.starts_with(char::is_uppercase) => Token::Var(word),
                _ => Token::Ident(word),
            };
            out.push(Spanned {
                token,
                line: start_line,
                column: start_column,
            });
            continue;
        } else {
            let (token, width) = match (c, next) {
                (':', Some('-')) => (Token::If, 2),
                ('.', Some('.')) => (Token::DotDot, 2),
                ('!', Some('=')) => (Token::Rel(Relation::Ne), 2),
                ('<', Some('=')) => (Token::Rel(Relation::Le), 2),
                ('>', Some('=')) => (Token::Rel(Relation::Ge), 2),
                ('=', Some('=')) => (Token::Rel(Relation::Eq), 2),
                ('<', Some('>')) => (Token::Rel(Relation::Ne), 2),
                ('=', _) => (Token::Rel(Relation::Eq), 1),
                ('<', _) => (Token::Rel(Relation::Lt), 1),
                ('>', _) => (Token::Rel(Relation::Gt), 1),
                ('(', _) => (Token::LParen, 1),
                (')', _) => (Token::RParen, 1),
                ('{', _) => (Token::LBrace, 1),
                ('}', _) => (Token::RBrace, 1),
                (',', _) => (Token::Comma, 1),
                (';', _) => (Token::Semi, 1),
                (':', _) => (Token::Colon, 1),
                ('.', _) => (Token::Dot, 1),
                ('+', _) => (Token::Plus, 1),
                ('-', _) => (Token::Minus, 1),
                ('*', _) => (Token::Star, 1),
                ('/', _) => (Token::Slash, 1),
                ('\\', _) => (Token::Backslash, 1),
                ('|', _) => (Token::Bar, 1),
                _ => return Err(err(start_line, start_column, format!("unexpected character '{c}'"))),
            };
            advance(width, &mut i, &mut column);
            token
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_column,
        });
    }
    out.push(Spanned {
        token: Token::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].token
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].token.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let at = &self.tokens[self.pos];
        Err(ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.peek().describe()))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while *self.peek() != Token::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let head = match self.peek() {
            Token::If => Head::Constraint,
            Token::False => {
                self.bump();
                Head::Constraint
            }
            Token::LBrace => {
                self.bump();
                let atom = self.atom()?;
                self.expect(Token::RBrace, "'}'")?;
                Head::Choice(atom)
            }
            _ => Head::Basic(self.atom()?),
        };
        let mut body = Vec::new();
        if *self.peek() == Token::If {
            self.bump();
            if *self.peek() != Token::Dot {
                loop {
                    body.push(self.conditional_literal()?);
                    match self.peek() {
                        Token::Semi | Token::Comma => {
                            self.bump();
                        }
                        _ => break,
                    }
                }
            }
        } else if head == Head::Constraint {
            return self.error("expected ':-' after '#false'");
        }
        self.expect(Token::Dot, "'.' at end of rule")?;
        Ok(Rule::new(head, body))
    }

    fn conditional_literal(&mut self) -> Result<ConditionalLiteral, ParseError> {
        let head = if *self.peek() == Token::False {
            self.bump();
            CondHead::Falsum
        } else {
            CondHead::Literal(self.literal()?)
        };
        let mut conditions = Vec::new();
        if *self.peek() == Token::Colon {
            self.bump();
            loop {
                conditions.push(self.literal()?);
                if *self.peek() == Token::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        } else if head == CondHead::Falsum {
            return self.error("'#false' in a body needs conditions");
        }
        Ok(ConditionalLiteral::new(head, conditions))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let mut negations = 0;
        while *self.peek() == Token::Ident("not".into()) && negations < 2 {
            // `not` is a keyword only when something literal-like follows
            match self.peek_at(1) {
                Token::Ident(_) => {
                    self.bump();
                    negations += 1;
                }
                _ => break,
            }
        }
        if negations > 0 {
            let atom = self.atom()?;
            let sign = if negations == 1 { Sign::Not } else { Sign::NotNot };
            return Ok(Literal::Basic(BasicLiteral::new(sign, atom)));
        }
        if let (Token::Ident(_), Token::LParen) = (self.peek(), self.peek_at(1)) {
            return Ok(Literal::Basic(BasicLiteral::positive(self.atom()?)));
        }
        let left = self.term()?;
        if let Token::Rel(relation) = *self.peek() {
            self.bump();
            let right = self.term()?;
            return Ok(Literal::Comparison(Comparison::new(left, relation, right)));
        }
        match left {
            Term::Symbol(name) => Ok(Literal::Basic(BasicLiteral::positive(Atom::new(name, Vec::new())))),
            _ => self.error(format!("expected a literal, found term {left}")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match self.peek().clone() {
            Token::Ident(name) if name != "not" => {
                self.bump();
                name
            }
            other => return self.error(format!("expected an atom, found {}", other.describe())),
        };
        let mut args = Vec::new();
        if *self.peek() == Token::LParen {
            self.bump();
            if *self.peek() == Token::RParen {
                return self.error("empty argument list; write propositional atoms without parentheses");
            }
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Token::Comma => {
                        self.bump();
                    }
                    Token::RParen => {
                        self.bump();
                        break;
                    }
                    other => return self.error(format!("expected ',' or ')', found {}", other.describe())),
                }
            }
        }
        Ok(Atom::new(name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut left = self.additive()?;
        while *self.peek() == Token::DotDot {
            self.bump();
            let right = self.additive()?;
            left = Term::bin(BinOp::Interval, left, right);
        }
        Ok(left)
    }

    fn additive(&mut self) -> Result<Term, ParseError> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.multiplicative()?;
            left = Term::bin(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> Result<Term, ParseError> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                Token::Backslash => BinOp::Mod,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.unary()?;
            left = Term::bin(op, left, right);
        }
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Token::Minus => {
                self.bump();
                if let Token::Int(n) = *self.peek() {
                    self.bump();
                    return Ok(Term::Numeral(-(n as i128) as i64));
                }
                Ok(Term::neg(self.unary()?))
            }
            Token::Bar => {
                self.bump();
                let inner = self.term()?;
                self.expect(Token::Bar, "closing '|'")?;
                Ok(Term::abs(inner))
            }
            Token::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::Int(n) => {
                if n > i64::MAX as i128 {
                    return self.error(format!("integer {n} out of range"));
                }
                self.bump();
                Ok(Term::Numeral(n as i64))
            }
            Token::Inf => {
                self.bump();
                Ok(Term::Inf)
            }
            Token::Sup => {
                self.bump();
                Ok(Term::Sup)
            }
            Token::Var(v) => {
                self.bump();
                Ok(Term::Variable(v))
            }
            Token::Ident(s) => {
                if *self.peek_at(1) == Token::LParen {
                    return self.error(format!("function symbols are not supported: {s}(...)"));
                }
                self.bump();
                Ok(Term::Symbol(s))
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }
}

/// Parses a program. Statements end in `.`, `%` starts a line comment.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0 }.program()
}

/// Parses a single term, e.g. `3 + 1..5`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let t = parser.term()?;
    parser.expect(Token::Eof, "end of term")?;
    Ok(t)
}

/// Parses a single rule body element, e.g. `not asg(V,C) : col(C)`.
pub fn parse_conditional_literal(text: &str) -> Result<ConditionalLiteral, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let c = parser.conditional_literal()?;
    parser.expect(Token::Eof, "end of input")?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Program {
        parse_program(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn fact_with_arithmetic() {
        let prog = p("p(3+5).");
        assert_eq!(
            prog.rules,
            vec![Rule::new(
                Head::Basic(Atom::new("p", vec![Term::bin(BinOp::Add, Term::Numeral(3), Term::Numeral(5))])),
                vec![]
            )]
        );
    }

    #[test]
    fn coloring_constraint() {
        let prog = p(":- not asg(V,C) : col(C); vtx(V).");
        let rule = &prog.rules[0];
        assert_eq!(rule.head, Head::Constraint);
        assert_eq!(rule.body.len(), 2);
        let asg = Atom::new("asg", vec![Term::var("V"), Term::var("C")]);
        assert_eq!(
            rule.body[0],
            ConditionalLiteral::new(
                CondHead::Literal(Literal::Basic(BasicLiteral::new(Sign::Not, asg))),
                vec![Literal::Basic(BasicLiteral::positive(Atom::new("col", vec![Term::var("C")])))]
            )
        );
        assert!(rule.body[1].is_plain());
    }

    #[test]
    fn choice_rule() {
        let prog = p("{asg(V,C)} :- vtx(V), col(C).");
        assert!(matches!(prog.rules[0].head, Head::Choice(_)));
        assert_eq!(prog.rules[0].body.len(), 2);
        assert!(prog.rules[0].body.iter().all(|b| b.is_plain()));
    }

    #[test]
    fn commas_after_colon_are_conditions() {
        let prog = p("p :- q(X) : r(X), s(X); t.");
        assert_eq!(prog.rules[0].body.len(), 2);
        assert_eq!(prog.rules[0].body[0].conditions.len(), 2);
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_term("1+2*3..4-5-6").unwrap();
        let expect = Term::bin(
            BinOp::Interval,
            Term::bin(
                BinOp::Add,
                Term::Numeral(1),
                Term::bin(BinOp::Mul, Term::Numeral(2), Term::Numeral(3)),
            ),
            Term::bin(
                BinOp::Sub,
                Term::bin(BinOp::Sub, Term::Numeral(4), Term::Numeral(5)),
                Term::Numeral(6),
            ),
        );
        assert_eq!(t, expect);
        assert_eq!(parse_term("-X*2").unwrap(), Term::bin(BinOp::Mul, Term::neg(Term::var("X")), Term::Numeral(2)));
        assert_eq!(parse_term("-3").unwrap(), Term::Numeral(-3));
        assert_eq!(parse_term("|X-1|\\2").unwrap().to_string(), "|X-1|\\2");
    }

    #[test]
    fn negations_and_comparisons() {
        let prog = p("p :- not not q, not r, X < 2, a != b, 1..2 = X.");
        let body = &prog.rules[0].body;
        assert!(matches!(&body[0].head, CondHead::Literal(Literal::Basic(b)) if b.sign == Sign::NotNot));
        assert!(matches!(&body[1].head, CondHead::Literal(Literal::Basic(b)) if b.sign == Sign::Not));
        assert!(matches!(&body[2].head, CondHead::Literal(Literal::Comparison(c)) if c.relation == Relation::Lt));
        assert!(matches!(&body[3].head, CondHead::Literal(Literal::Comparison(c)) if c.relation == Relation::Ne));
    }

    #[test]
    fn propositional_atoms_and_comments() {
        let prog = p("% comment\np. q :- p. % trailing\n:- q.\n#false :- p.\n:- .");
        assert_eq!(prog.rules.len(), 5);
        assert_eq!(prog.rules[0].head, Head::Basic(Atom::new("p", vec![])));
        assert_eq!(prog.rules[4], Rule::new(Head::Constraint, vec![]));
    }

    #[test]
    fn same_name_different_arity_is_fine() {
        let prog = p("p. p(1).");
        assert_eq!(prog.predicates(), vec![PredicateSymbol::new("p", 0), PredicateSymbol::new("p", 1)]);
    }

    #[test]
    fn errors_carry_location() {
        let e = parse_program("p.\nq(1 :- r.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_program("p(99999999999999999999).").unwrap_err();
        assert!(e.message.contains("out of range"));
        assert!(parse_program("p(f(1)).").is_err());
        assert!(parse_program("p :- not 1 < 2.").is_err());
        assert!(parse_program("p").is_err());
        assert!(parse_program("#show p/1.").is_err());
    }

    #[test]
    fn extreme_numerals() {
        assert_eq!(parse_term("-9223372036854775808").unwrap(), Term::Numeral(i64::MIN));
        assert!(parse_term("9223372036854775808").is_err());
    }

    #[test]
    fn falsum_conditional_literal() {
        let prog = p("p :- #false : q(X).");
        assert_eq!(prog.rules[0].body[0].head, CondHead::Falsum);
    }
}
