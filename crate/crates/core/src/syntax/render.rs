//! Concrete syntax rendering. `parse_program(&p.to_string())` gives back `p`.

use std::fmt;

use super::ast::*;

impl fmt::Display for PrecomputedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecomputedTerm::Inf => f.write_str("#inf"),
            PrecomputedTerm::Sup => f.write_str("#sup"),
            PrecomputedTerm::Numeral(n) => write!(f, "{n}"),
            PrecomputedTerm::Symbol(s) => f.write_str(s),
        }
    }
}

const UNARY: u8 = 4;
const ATOMIC: u8 = 5;

fn is_negation(t: &Term) -> Option<&Term> {
    match t {
        Term::BinOp(BinOp::Sub, l, r) if **l == Term::Numeral(0) => Some(r),
        _ => None,
    }
}

fn precedence(t: &Term) -> u8 {
    match t {
        Term::BinOp(op, _, _) => {
            if is_negation(t).is_some() {
                UNARY
            } else {
                op.precedence()
            }
        }
        Term::Numeral(n) if *n < 0 => UNARY,
        _ => ATOMIC,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Numeral(n) => write!(f, "{n}"),
            Term::Symbol(s) | Term::Variable(s) => f.write_str(s),
            Term::Inf => f.write_str("#inf"),
            Term::Sup => f.write_str("#sup"),
            Term::Abs(t) => write!(f, "|{t}|"),
            Term::BinOp(op, l, r) => {
                if let Some(arg) = is_negation(self) {
                    // a bare numeral after '-' would read back as a negative numeral
                    let parens = precedence(arg) < UNARY || matches!(arg, Term::Numeral(_));
                    f.write_str("-")?;
                    return write_operand(f, arg, parens);
                }
                let own = op.precedence();
                write_operand(f, l, precedence(l) < own)?;
                f.write_str(op.symbol())?;
                // a leading '-' after '-' or '..' still tokenizes fine; parenthesize
                // only for precedence and associativity
                write_operand(f, r, precedence(r) <= own && precedence(r) != UNARY)
            }
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.relation.symbol(), self.right)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{arg}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PrecomputedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{arg}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BasicLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => write!(f, "{}", self.atom),
            Sign::Not => write!(f, "not {}", self.atom),
            Sign::NotNot => write!(f, "not not {}", self.atom),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Basic(b) => write!(f, "{b}"),
            Literal::Comparison(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for ConditionalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            CondHead::Literal(l) => write!(f, "{l}")?,
            CondHead::Falsum => f.write_str("#false")?,
        }
        if !self.conditions.is_empty() {
            f.write_str(" : ")?;
            for (i, l) in self.conditions.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Basic(a) => write!(f, "{a}")?,
            Head::Choice(a) => write!(f, "{{{a}}}")?,
            Head::Constraint => {}
        }
        if !self.body.is_empty() || self.head == Head::Constraint {
            if self.head == Head::Constraint {
                f.write_str(":-")?;
            } else {
                f.write_str(" :-")?;
            }
            for (i, b) in self.body.iter().enumerate() {
                f.write_str(if i > 0 { "; " } else { " " })?;
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
