use std::fmt::{self, Display, Write};

use super::{Atom, Comparison, ObjectDecl, Program, Rule, Term};

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => c.fmt(f),
            Term::Var(v) => f.write_str(v),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_char('(')?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                a.fmt(f)?;
            }
            f.write_char(')')?;
        }
        Ok(())
    }
}

impl Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op, self.rhs)
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.head, self.choice) {
            (Some(h), true) => write!(f, "{{{h}}}")?,
            (Some(h), false) => write!(f, "{h}")?,
            (None, _) => {}
        }
        let body: Vec<String> = self
            .body_pos
            .iter()
            .map(|a| a.to_string())
            .chain(self.body_neg.iter().map(|a| format!("not {a}")))
            .chain(self.relations.iter().map(|c| c.to_string()))
            .collect();
        if !body.is_empty() || self.head.is_none() {
            if self.head.is_some() {
                f.write_char(' ')?;
            }
            write!(f, ":- {}", body.join(", "))?;
        }
        f.write_char('.')
    }
}

impl Display for ObjectDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#object {}({})", self.name, self.sorts.join(", "))?;
        if let Some(ts) = &self.tuples {
            let items: Vec<String> = ts
                .iter()
                .map(|t| {
                    let cs: Vec<String> = t.iter().map(|c| c.to_string()).collect();
                    format!("({})", cs.join(","))
                })
                .collect();
            write!(f, " = {{{}}}", items.join(", "))?;
        }
        f.write_char('.')
    }
}

impl Display for Program {
    /// Prints the program in the concrete syntax accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, dom) in &self.sort_decls {
            let cs: Vec<String> = dom.iter().map(|c| c.to_string()).collect();
            writeln!(f, "#sort {name} = {{{}}}.", cs.join(", "))?;
        }
        for ((p, ar, pos), s) in &self.sort_signature {
            writeln!(f, "#bind {p}/{ar} {} {s}.", pos + 1)?;
        }
        for o in &self.objects {
            writeln!(f, "{o}")?;
        }
        for a in &self.facts {
            writeln!(f, "{a}.")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse_program;

    #[test]
    fn prints_rules_in_source_syntax() {
        let p = parse_program("{a} :- b. :- c, not d, X < Y. e.").unwrap();
        assert_eq!(p.rules[0].to_string(), "{a} :- b.");
        assert_eq!(p.rules[1].to_string(), ":- c, not d, X < Y.");
        assert_eq!(p.facts[0].to_string(), "e");
    }

    #[test]
    fn round_trip_sudoku_fragment() {
        let src = "#sort row = 1..2. #sort column = 1..2. #sort num = 1..2.\n\
                   #object cell(row,column) = {(1,1),(2,2)}.\n\
                   {sol(X,Y,N)} :- not occupied(X,Y), num(N), row(X), column(Y).\n\
                   :- sol(X,Y1,M), sol(X,Y2,M), Y1 < Y2.\noccupied(1,1).";
        let p = parse_program(src).unwrap();
        let q = parse_program(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }
}
