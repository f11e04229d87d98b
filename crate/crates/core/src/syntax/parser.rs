use super::{Atom, CmpOp, Comparison, Constant, ObjectDecl, Program, Rule, Term};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Directive(String),
    Not,
    If,
    Dot,
    Range,
    Comma,
    Semi,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Cmp(CmpOp),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| Error::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let peek = chars.get(i + 1).copied();
        let tok = if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|p| p.is_ascii_digit())) {
            let start = i;
            advance(1, &mut i);
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i);
            }
            let text: String = chars[start..i].iter().collect();
            Tok::Int(
                text.parse()
                    .map_err(|_| err(l0, c0, format!("integer out of range: {text}")))?,
            )
        } else if c.is_alphabetic() || c == '_' || c == '#' {
            let start = i;
            advance(1, &mut i);
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(1, &mut i);
            }
            let text: String = chars[start..i].iter().collect();
            if let Some(d) = text.strip_prefix('#') {
                Tok::Directive(d.to_string())
            } else if text == "not" {
                Tok::Not
            } else if c.is_uppercase() {
                Tok::Var(text)
            } else if c == '_' {
                return Err(err(l0, c0, "anonymous variables are not supported".into()));
            } else {
                Tok::Ident(text)
            }
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (tok, n) = match two.as_str() {
                ":-" => (Tok::If, 2),
                ".." => (Tok::Range, 2),
                "!=" => (Tok::Cmp(CmpOp::Ne), 2),
                "<=" => (Tok::Cmp(CmpOp::Le), 2),
                ">=" => (Tok::Cmp(CmpOp::Ge), 2),
                _ => match c {
                    '.' => (Tok::Dot, 1),
                    ',' => (Tok::Comma, 1),
                    ';' => (Tok::Semi, 1),
                    '/' => (Tok::Slash, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    '=' => (Tok::Cmp(CmpOp::Eq), 1),
                    '<' => (Tok::Cmp(CmpOp::Lt), 1),
                    '>' => (Tok::Cmp(CmpOp::Gt), 1),
                    other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
                },
            };
            advance(n, &mut i);
            tok
        };
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {other:?}")),
        }
    }

    fn constant(&mut self) -> Result<Constant> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(Constant::Sym(s))
            }
            Tok::Int(i) => {
                self.next();
                Ok(Constant::Int(i))
            }
            other => self.error(format!("expected constant, found {other:?}")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                Ok(Term::Var(v))
            }
            _ => Ok(Term::Const(self.constant()?)),
        }
    }

    fn atom_after_name(&mut self, name: String) -> Result<Atom> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    other => {
                        self.pos -= 1;
                        return self.error(format!("expected `,` or `)`, found {other:?}"));
                    }
                }
            }
        }
        Ok(Atom::new(name, args))
    }

    fn atom(&mut self) -> Result<Atom> {
        let name = self.ident()?;
        self.atom_after_name(name)
    }

    fn body(&mut self, rule: &mut Rule) -> Result<()> {
        loop {
            match self.peek().clone() {
                Tok::Not => {
                    self.next();
                    rule.body_neg.push(self.atom()?);
                }
                Tok::Ident(name) if !matches!(self.toks[self.pos + 1].tok, Tok::Cmp(_)) => {
                    self.next();
                    rule.body_pos.push(self.atom_after_name(name)?);
                }
                _ => {
                    let lhs = self.term()?;
                    let op = match self.next() {
                        Tok::Cmp(op) => op,
                        other => {
                            self.pos -= 1;
                            return self.error(format!("expected comparison, found {other:?}"));
                        }
                    };
                    let rhs = self.term()?;
                    rule.relations.push(Comparison::new(op, lhs, rhs));
                }
            }
            match self.next() {
                Tok::Comma => continue,
                Tok::Dot => return Ok(()),
                other => {
                    self.pos -= 1;
                    return self.error(format!("expected `,` or `.`, found {other:?}"));
                }
            }
        }
    }

    fn domain(&mut self) -> Result<Vec<Constant>> {
        if *self.peek() == Tok::LBrace {
            self.next();
            let mut out = Vec::new();
            if *self.peek() == Tok::RBrace {
                self.next();
                return Ok(out);
            }
            loop {
                out.push(self.constant()?);
                match self.next() {
                    Tok::Comma | Tok::Semi => continue,
                    Tok::RBrace => return Ok(out),
                    other => {
                        self.pos -= 1;
                        return self.error(format!("expected `,` or `}}`, found {other:?}"));
                    }
                }
            }
        }
        let lo = match self.next() {
            Tok::Int(i) => i,
            _ => {
                self.pos -= 1;
                return self.error("expected `{` or integer range");
            }
        };
        self.expect(Tok::Range, "`..`")?;
        let hi = match self.next() {
            Tok::Int(i) => i,
            _ => {
                self.pos -= 1;
                return self.error("expected integer");
            }
        };
        Ok((lo..=hi).map(Constant::Int).collect())
    }

    fn directive(&mut self, name: &str, prog: &mut Program) -> Result<()> {
        match name {
            "sort" => {
                let sort = self.ident()?;
                self.expect(Tok::Cmp(CmpOp::Eq), "`=`")?;
                let dom = self.domain()?;
                self.expect(Tok::Dot, "`.`")?;
                if prog.sort_decls.insert(sort.clone(), dom).is_some() {
                    return Err(Error::DuplicateSort(sort));
                }
            }
            "bind" => {
                let pred = self.ident()?;
                self.expect(Tok::Slash, "`/`")?;
                let arity = match self.next() {
                    Tok::Int(i) if i >= 0 => i as usize,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected arity");
                    }
                };
                let pos = match self.next() {
                    Tok::Int(i) if i >= 1 && (i as usize) <= arity => i as usize - 1,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected argument position in 1..=arity");
                    }
                };
                let sort = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                prog.sort_signature.insert((pred, arity, pos), sort);
            }
            "object" => {
                let obj = self.ident()?;
                self.expect(Tok::LParen, "`(`")?;
                let mut sorts = vec![self.ident()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    sorts.push(self.ident()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                let mut tuples = None;
                if *self.peek() == Tok::Cmp(CmpOp::Eq) {
                    self.next();
                    self.expect(Tok::LBrace, "`{`")?;
                    let mut ts = Vec::new();
                    while *self.peek() != Tok::RBrace {
                        self.expect(Tok::LParen, "`(`")?;
                        let mut t = vec![self.constant()?];
                        while *self.peek() == Tok::Comma {
                            self.next();
                            t.push(self.constant()?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        if t.len() != sorts.len() {
                            return self.error("object tuple arity mismatch");
                        }
                        ts.push(t);
                        if matches!(self.peek(), Tok::Comma | Tok::Semi) {
                            self.next();
                        }
                    }
                    self.next();
                    tuples = Some(ts);
                }
                self.expect(Tok::Dot, "`.`")?;
                prog.objects.push(ObjectDecl {
                    name: obj,
                    sorts,
                    tuples,
                });
            }
            other => return self.error(format!("unknown directive #{other}")),
        }
        Ok(())
    }

    fn statement(&mut self, prog: &mut Program) -> Result<()> {
        let mut rule = Rule::default();
        match self.peek().clone() {
            Tok::Directive(d) => {
                self.next();
                return self.directive(&d, prog);
            }
            Tok::If => {}
            Tok::LBrace => {
                self.next();
                rule.head = Some(self.atom()?);
                rule.choice = true;
                self.expect(Tok::RBrace, "`}`")?;
            }
            Tok::Ident(_) => rule.head = Some(self.atom()?),
            other => return self.error(format!("unexpected {other:?} at start of statement")),
        }
        match self.next() {
            Tok::Dot if rule.head.is_some() => {}
            Tok::If => self.body(&mut rule)?,
            other => {
                self.pos -= 1;
                return self.error(format!("expected `:-` or `.`, found {other:?}"));
            }
        }
        if rule.is_fact() {
            prog.facts.push(rule.head.take().unwrap());
        } else {
            prog.rules.push(rule);
        }
        Ok(())
    }
}

/// Parses program text. Sort references are validated after parsing.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut prog = Program::default();
    while *p.peek() != Tok::Eof {
        p.statement(&mut prog)?;
    }
    prog.validate()?;
    Ok(prog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_program() {
        let p = parse_program("p(a). q(X) :- p(X).").unwrap();
        assert_eq!(p.facts.len(), 1);
        assert_eq!(p.rules.len(), 1);
    }

    #[test]
    fn sudoku_rules() {
        let p = parse_program(
            "{sol(X,Y,N)} :- not occupied(X,Y), num(N), row(X), column(Y).\n\
             hasNum(X,Y) :- sol(X,Y,N).\n\
             :- sol(X,Y1,M), sol(X,Y2,M), Y1 < Y2.",
        )
        .unwrap();
        assert!(p.rules[0].choice);
        assert_eq!(p.rules[0].body_neg.len(), 1);
        let r = &p.rules[1];
        assert_eq!(r.head.as_ref().unwrap().predicate, "hasNum");
        assert_eq!(r.body_pos[0].predicate, "sol");
        let c = &p.rules[2];
        assert!(c.is_constraint());
        assert_eq!(c.relations.len(), 1);
        assert_eq!(c.relations[0].op, CmpOp::Lt);
    }

    #[test]
    fn directives() {
        let p = parse_program(
            "% grid\n#sort row = 1..3.\n#sort col = {a, b}.\n#bind p/2 1 row.\n#bind p/2 2 col.\n\
             #object cell(row, col) = {(1,a), (2,b)}.\np(1,a).",
        )
        .unwrap();
        assert_eq!(p.sort_decls["row"].len(), 3);
        assert_eq!(p.sort_of("p", 2, 1), Some("col"));
        assert_eq!(p.objects[0].tuples.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_position() {
        match parse_program("p(a).\nq(X) :- p(X)") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_program("#sort s = {a}. #sort s = {b}."),
            Err(Error::DuplicateSort(_))
        ));
        assert!(matches!(
            parse_program("#bind p/1 1 nosuch."),
            Err(Error::UnboundSort(_))
        ));
    }

    #[test]
    fn negative_integers_and_choice() {
        let p = parse_program("{a}. b :- not a, -1 < 2.").unwrap();
        assert!(p.rules[0].choice);
        assert_eq!(p.rules[1].relations[0].lhs, Term::Const(Constant::Int(-1)));
    }
}
